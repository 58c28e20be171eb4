//! Exact Dynnikov coordinates and the piecewise-linear braid action.
//!
//! An integral lamination on the disc with `n` movable punctures is coded
//! by `2n` integers `(a_1, b_1, …, a_n, b_n)`. The generator `σ_i` only
//! touches the block `(a_i, b_i, a_{i+1}, b_{i+1})`. The update uses
//! `x⁺ = max(x, 0)` and `x⁻ = min(x, 0)` and no division, so integer
//! vectors map to integer vectors and the map is positively homogeneous of
//! degree one.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{BraidWord, Sign};

/// Scalar arithmetic the generator formulas need.
pub trait PlScalar: Clone {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    /// `max(x, 0)`
    fn pos_part(&self) -> Self;
    /// `min(x, 0)`
    fn neg_part(&self) -> Self;
}

impl PlScalar for BigInt {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn pos_part(&self) -> Self {
        if self.is_positive() { self.clone() } else { BigInt::zero() }
    }
    fn neg_part(&self) -> Self {
        if self.is_negative() { self.clone() } else { BigInt::zero() }
    }
}

impl PlScalar for f64 {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn pos_part(&self) -> Self {
        self.max(0.0)
    }
    fn neg_part(&self) -> Self {
        self.min(0.0)
    }
}

/// Image of the block `[a_i, b_i, a_{i+1}, b_{i+1}]` under `σ_i^{±1}`.
pub fn generator_block<T: PlScalar>(block: [&T; 4], sign: Sign) -> [T; 4] {
    let [a1, b1, a2, b2] = block;
    let b1p = b1.pos_part();
    let b1m = b1.neg_part();
    let b2p = b2.pos_part();
    let b2m = b2.neg_part();
    match sign {
        Sign::Pos => {
            // c = a_i - b_i⁻ - a_{i+1} + b_{i+1}⁺
            let c = a1.sub(&b1m).sub(a2).add(&b2p);
            let cp = c.pos_part();
            [
                a1.add(&b1p).add(&b2p.sub(&c).pos_part()),
                b2.sub(&cp),
                a2.add(&b2m).add(&b1m.add(&c).neg_part()),
                b1.add(&cp),
            ]
        }
        Sign::Neg => {
            // d = a_i + b_i⁻ - a_{i+1} - b_{i+1}⁺
            let d = a1.add(&b1m).sub(a2).sub(&b2p);
            let dm = d.neg_part();
            [
                a1.sub(&b1p).sub(&b2p.add(&d).pos_part()),
                b2.add(&dm),
                a2.sub(&b2m).sub(&b1m.sub(&d).neg_part()),
                b1.sub(&dm),
            ]
        }
    }
}

/// In-place `σ_i^{±1}` on an interleaved `(a_1, b_1, …)` slice, `1 ≤ i < n`.
pub(crate) fn act_in_place<T: PlScalar>(coords: &mut [T], i: usize, sign: Sign) {
    let k = 2 * (i - 1);
    let out = generator_block([&coords[k], &coords[k + 1], &coords[k + 2], &coords[k + 3]], sign);
    for (slot, v) in coords[k..k + 4].iter_mut().zip(out) {
        *slot = v;
    }
}

/// Dynnikov coordinate vector `(a_1, b_1, …, a_n, b_n)` with exact entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaminationCoords {
    coords: Vec<BigInt>,
}

impl LaminationCoords {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) || coords.len() < 4 {
            return Err(Error::InvalidPunctureCount(coords.len() / 2));
        }
        Ok(LaminationCoords { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        LaminationCoords::new(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPunctureCount(n));
        }
        Ok(LaminationCoords { coords: vec![BigInt::zero(); 2 * n] })
    }

    /// Number of movable punctures.
    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// `a_i`, 1-based.
    pub fn a(&self, i: usize) -> &BigInt {
        &self.coords[2 * (i - 1)]
    }

    /// `b_i`, 1-based.
    pub fn b(&self, i: usize) -> &BigInt {
        &self.coords[2 * (i - 1) + 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Largest bit length among the entries.
    pub fn max_bits(&self) -> u64 {
        self.coords.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    pub fn apply_generator_mut(&mut self, i: usize, sign: Sign) -> Result<()> {
        let n = self.n();
        if i == 0 || i >= n {
            return Err(Error::IndexOutOfRange { index: i, strands: n });
        }
        act_in_place(&mut self.coords, i, sign);
        Ok(())
    }

    pub fn apply_word_mut(&mut self, w: &BraidWord) -> Result<()> {
        check_word_fits(w, self.n())?;
        for l in w.letters() {
            act_in_place(&mut self.coords, l.index, l.sign);
        }
        Ok(())
    }
}

pub(crate) fn check_word_fits(w: &BraidWord, n: usize) -> Result<()> {
    if w.strands() > n {
        return Err(Error::IndexOutOfRange { index: w.strands() - 1, strands: n });
    }
    Ok(())
}

/// The reference lamination `(0, 1, 0, 1, …, 0, 1)`.
pub fn l0(n: usize) -> Result<LaminationCoords> {
    if n < 2 {
        return Err(Error::InvalidPunctureCount(n));
    }
    let coords = (0..2 * n).map(|k| BigInt::from(k % 2)).collect();
    Ok(LaminationCoords { coords })
}

pub fn apply_generator(l: &LaminationCoords, i: usize, sign: Sign) -> Result<LaminationCoords> {
    let mut out = l.clone();
    out.apply_generator_mut(i, sign)?;
    Ok(out)
}

/// Applies the letters of `w` left to right: the first letter acts first.
pub fn apply_word(l: &LaminationCoords, w: &BraidWord) -> Result<LaminationCoords> {
    let mut out = l.clone();
    out.apply_word_mut(w)?;
    Ok(out)
}

/// `Σ|b_i| + Σ|a_{i+1} - a_i| + |a_1| + |a_n|`: crossings with the real
/// axis, minus the two boundary terms that stay constant along an orbit.
pub fn reduced_intersection_count(l: &LaminationCoords) -> BigInt {
    reduced_count_of(l.coords())
}

pub(crate) fn reduced_count_of<T: PlScalar + Abs>(coords: &[T]) -> T {
    let n = coords.len() / 2;
    let a = |i: usize| &coords[2 * (i - 1)];
    let b = |i: usize| &coords[2 * (i - 1) + 1];
    let mut total = a(1).abs_val().add(&a(n).abs_val());
    for i in 1..=n {
        total = total.add(&b(i).abs_val());
    }
    for i in 1..n {
        total = total.add(&a(i + 1).sub(a(i)).abs_val());
    }
    total
}

pub(crate) trait Abs {
    fn abs_val(&self) -> Self;
}

impl Abs for BigInt {
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Abs for f64 {
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

/// `λ` parallel copies: every entry multiplied by `λ ≥ 1`.
pub fn scale(l: &LaminationCoords, lambda: &BigInt) -> Result<LaminationCoords> {
    if !lambda.is_positive() {
        return Err(Error::InvalidScale(lambda.to_string()));
    }
    Ok(LaminationCoords { coords: l.coords.iter().map(|x| x * lambda).collect() })
}

/// Natural logarithm of a positive big integer, accurate to `f64` precision
/// at any size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for LaminationCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

// JSON form: an array of decimal strings, e.g. ["0", "1", "0", "1"].
impl Serialize for LaminationCoords {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for x in &self.coords {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaminationCoords {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coords = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        LaminationCoords::new(coords).map_err(de::Error::custom)
    }
}

//! Renormalized floating-point orbits.
//!
//! The generator action commutes with multiplication by positive scalars,
//! so an orbit point can be stored as a unit-sized `f64` vector plus the
//! natural log of the factor that was divided out. Counts far beyond the
//! `f64` range stay representable through that log.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::dynnikov::{act_in_place, check_word_fits, reduced_count_of, LaminationCoords};
use crate::error::{Error, Result};
use crate::word::BraidWord;

/// Default renormalization threshold, `2^512`.
pub const DEFAULT_THRESHOLD: f64 = 1.340_780_792_994_259_7e154;

/// `e^{log_scale} · coords` approximates an exact coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledCoords {
    coords: Vec<f64>,
    log_scale: f64,
    threshold: f64,
}

impl ScaledCoords {
    /// Converts exactly-known coordinates, normalizing to `max |entry| = 1`.
    pub fn from_exact(l: &LaminationCoords) -> Self {
        ScaledCoords::from_exact_with_threshold(l, DEFAULT_THRESHOLD)
    }

    pub fn from_exact_with_threshold(l: &LaminationCoords, threshold: f64) -> Self {
        assert!(threshold > 1.0 && threshold.is_finite(), "threshold must be finite and > 1");
        // Shift very large entries down first so the conversion cannot overflow.
        let bits = l.max_bits();
        let shift = bits.saturating_sub(64);
        let coords = l
            .coords()
            .iter()
            .map(|x| {
                let y: BigInt = if shift > 0 { x >> shift } else { x.clone() };
                y.to_f64().expect("shifted entry fits in f64")
            })
            .collect();
        let mut s = ScaledCoords {
            coords,
            log_scale: shift as f64 * std::f64::consts::LN_2,
            threshold,
        };
        s.normalize();
        s
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        assert!(threshold > 1.0 && threshold.is_finite(), "threshold must be finite and > 1");
        self.threshold = threshold;
        self
    }

    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0.0)
    }

    fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Divides by `max |entry|` and moves its log into `log_scale`.
    fn normalize(&mut self) {
        let m = self.max_abs();
        if m > 0.0 && m.is_finite() {
            for x in &mut self.coords {
                *x /= m;
            }
            self.log_scale += m.ln();
        }
    }

    pub fn apply_word_mut(&mut self, w: &BraidWord) -> Result<()> {
        check_word_fits(w, self.n())?;
        for l in w.letters() {
            act_in_place(&mut self.coords, l.index, l.sign);
            let k = 2 * (l.index - 1);
            if self.coords[k..k + 4].iter().any(|x| x.abs() >= self.threshold) {
                self.normalize();
            }
        }
        if !self.log_scale.is_finite() || !self.coords.iter().all(|x| x.is_finite()) {
            return Err(Error::FloatOverflow);
        }
        let m = self.max_abs();
        if m > 0.0 && m < self.threshold.recip() {
            self.normalize();
        }
        Ok(())
    }

    /// Natural log of the represented reduced intersection count.
    pub fn log_reduced_count(&self) -> Result<f64> {
        let count = reduced_count_of(&self.coords);
        if count == 0.0 {
            return Err(Error::EmptyLamination);
        }
        Ok(self.log_scale + count.ln())
    }
}

pub fn from_exact(l: &LaminationCoords) -> ScaledCoords {
    ScaledCoords::from_exact(l)
}

pub fn apply_word_scaled(s: &ScaledCoords, w: &BraidWord) -> Result<ScaledCoords> {
    let mut out = s.clone();
    out.apply_word_mut(w)?;
    Ok(out)
}

pub fn log_reduced_count(s: &ScaledCoords) -> Result<f64> {
    s.log_reduced_count()
}

use braid_entropy::dynnikov::{apply_generator, apply_word, l0, ln_bigint, reduced_intersection_count, scale, LaminationCoords};
use braid_entropy::float_orbit::ScaledCoords;
use braid_entropy::word::{parse_braid, BraidWord, Letter, Sign};
use num_bigint::BigInt;
use proptest::prelude::*;

fn letter(max_index: usize) -> impl Strategy<Value = Letter> {
    (1..=max_index, any::<bool>()).prop_map(|(i, p)| Letter::new(i, if p { Sign::Pos } else { Sign::Neg }))
}

fn word() -> impl Strategy<Value = BraidWord> {
    (3usize..=6).prop_flat_map(|n| {
        prop::collection::vec(letter(n - 1), 0..10).prop_map(move |ls| BraidWord::new(n, ls).unwrap())
    })
}

fn coords(n: usize) -> impl Strategy<Value = LaminationCoords> {
    prop::collection::vec(-1_000_000i64..=1_000_000, 2 * n).prop_map(|v| LaminationCoords::from_i64(&v).unwrap())
}

fn coords_and_index() -> impl Strategy<Value = (LaminationCoords, usize)> {
    (3usize..=6).prop_flat_map(|n| (coords(n), 1..n))
}

#[derive(Debug, Clone, Copy)]
enum Sym {
    Inverse,
    Mirror,
    Flip,
    Rotate(usize),
}

fn sym() -> impl Strategy<Value = Sym> {
    prop_oneof![
        Just(Sym::Inverse),
        Just(Sym::Mirror),
        Just(Sym::Flip),
        (0usize..10).prop_map(Sym::Rotate),
    ]
}

fn apply_sym(w: &BraidWord, s: Sym) -> BraidWord {
    match s {
        Sym::Inverse => w.inverse(),
        Sym::Mirror => w.mirror(),
        Sym::Flip => w.flip(),
        Sym::Rotate(k) => w.rotate(k),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn free_reduce_idempotent(w in word()) {
        let r = w.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn involutions(w in word()) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert_eq!(w.mirror().mirror(), w.clone());
        prop_assert_eq!(w.flip().flip(), w.clone());
    }

    #[test]
    fn text_roundtrip(w in word()) {
        prop_assert_eq!(parse_braid(&w.to_string(), w.strands()).unwrap(), w);
    }

    #[test]
    fn canonical_form_is_orbit_invariant(w in word(), path in prop::collection::vec(sym(), 0..6)) {
        let w = w.free_reduce();
        let c = w.canonical_form();
        prop_assert_eq!(c.canonical_form(), c.clone());
        // walk the orbit; only freely reduced stops are comparable
        let mut cur = w.clone();
        for s in path {
            cur = apply_sym(&cur, s);
            if cur.is_freely_reduced() {
                prop_assert_eq!(cur.canonical_form(), c.clone());
            }
        }
    }

    #[test]
    fn generator_inverse_law((l, i) in coords_and_index()) {
        let up = apply_generator(&l, i, Sign::Pos).unwrap();
        prop_assert_eq!(apply_generator(&up, i, Sign::Neg).unwrap(), l.clone());
        let down = apply_generator(&l, i, Sign::Neg).unwrap();
        prop_assert_eq!(apply_generator(&down, i, Sign::Pos).unwrap(), l);
    }

    #[test]
    fn generator_locality((l, i) in coords_and_index(), neg in any::<bool>()) {
        let s = if neg { Sign::Neg } else { Sign::Pos };
        let out = apply_generator(&l, i, s).unwrap();
        for (k, (x, y)) in l.coords().iter().zip(out.coords()).enumerate() {
            if k / 2 + 1 != i && k / 2 + 1 != i + 1 {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn float_homogeneity(l in coords(4), lambda in 2u64..1_000_000) {
        prop_assume!(!l.is_zero());
        let big = scale(&l, &BigInt::from(lambda)).unwrap();
        let a = ScaledCoords::from_exact(&l);
        let b = ScaledCoords::from_exact(&big);
        prop_assert!((b.log_scale() - a.log_scale() - (lambda as f64).ln()).abs() < 1e-12);
        for (x, y) in a.coords().iter().zip(b.coords()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
    }
}

fn relation_words(n: usize, i: usize) -> Vec<(BraidWord, BraidWord)> {
    let mut out = Vec::new();
    for (s, t) in [(1i64, 1i64), (-1, -1)] {
        let a = i as i64;
        out.push((
            BraidWord::from_ints(n, &[s * a, t * (a + 1), s * a]).unwrap(),
            BraidWord::from_ints(n, &[t * (a + 1), s * a, t * (a + 1)]).unwrap(),
        ));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn braid_relations(l in coords(6)) {
        let n = 6;
        for i in 1..n - 1 {
            for (lhs, rhs) in relation_words(n, i) {
                prop_assert_eq!(apply_word(&l, &lhs).unwrap(), apply_word(&l, &rhs).unwrap());
            }
        }
        for i in 1..n {
            for j in (i + 2)..n {
                for (si, sj) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                    let ij = BraidWord::from_ints(n, &[si * i as i64, sj * j as i64]).unwrap();
                    let ji = BraidWord::from_ints(n, &[sj * j as i64, si * i as i64]).unwrap();
                    prop_assert_eq!(apply_word(&l, &ij).unwrap(), apply_word(&l, &ji).unwrap());
                }
            }
        }
    }

    #[test]
    fn positive_homogeneity(l in coords(5), i in 1usize..5, neg in any::<bool>()) {
        let s = if neg { Sign::Neg } else { Sign::Pos };
        for lambda in [2, 3, 10] {
            let lam = BigInt::from(lambda);
            let lhs = apply_generator(&scale(&l, &lam).unwrap(), i, s).unwrap();
            let rhs = scale(&apply_generator(&l, i, s).unwrap(), &lam).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn inverse_pair_word_is_identity_on_random_vectors() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let w = parse_braid("1 -1", 4).unwrap();
    for _ in 0..1000 {
        let v: Vec<i64> = (0..8).map(|_| rng.random_range(-1_000_000..=1_000_000)).collect();
        let l = LaminationCoords::from_i64(&v).unwrap();
        assert_eq!(apply_word(&l, &w).unwrap(), l);
    }
}

#[test]
fn renormalization_threshold_is_transparent() {
    for (text, n) in [("1 -2", 3), ("1 -2 3 -4", 5), ("1 1 -2", 3)] {
        let w = parse_braid(text, n).unwrap();
        let start = l0(n).unwrap();
        let mut lo = ScaledCoords::from_exact(&start).with_threshold(2f64.powi(64));
        let mut hi = ScaledCoords::from_exact(&start).with_threshold(2f64.powi(512));
        for _ in 0..300 {
            lo.apply_word_mut(&w).unwrap();
            hi.apply_word_mut(&w).unwrap();
            let (a, b) = (lo.log_reduced_count().unwrap(), hi.log_reduced_count().unwrap());
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{text}: {a} vs {b}");
        }
    }
}

#[test]
fn float_engine_tracks_exact_engine_deep() {
    let w = parse_braid("1 -2", 3).unwrap();
    let mut exact = l0(3).unwrap();
    let mut float = ScaledCoords::from_exact(&exact);
    for _ in 0..2000 {
        exact = apply_word(&exact, &w).unwrap();
        float.apply_word_mut(&w).unwrap();
    }
    let want = ln_bigint(&reduced_intersection_count(&exact));
    let got = float.log_reduced_count().unwrap();
    assert!((got - want).abs() / want < 1e-9);
}

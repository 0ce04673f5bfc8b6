mod common;

use excess::exactmath::{binomial, form_space_dim, grassmannian_dim, hilbert_lower_bound};
use excess::ExactInt;
use proptest::prelude::*;

fn h(r: u32, a: u32, d: u32) -> ExactInt {
    hilbert_lower_bound(r, a, d).unwrap()
}

#[test]
fn binomial_matches_pascal_table() {
    let table = common::pascal(60);
    for n in 0..=60u64 {
        for k in 0..=n {
            assert_eq!(binomial(n, k as i64).as_bigint(), &table[n as usize][k as usize], "C({n},{k})");
        }
        assert!(binomial(n, n as i64 + 1).is_zero());
        assert!(binomial(n, -1).is_zero());
    }
}

#[test]
fn hilbert_identities_on_grid() {
    for r in 1..=10 {
        for d in 1..=12 {
            assert_eq!(h(r, 1, d), ExactInt::from(r * d + 1));
            for a in 1..=r {
                assert!(h(r, a, d + 1) > h(r, a, d));
                if d >= 2 {
                    assert_eq!(h(r, a, d) - h(r, a, d - 1), h(r - 1, a - 1, d), "r={r} a={a} d={d}");
                }
            }
        }
    }
}

#[test]
fn rational_normal_curve_attains_bound() {
    for r in 1..=5 {
        for d in 1..=8 {
            let oracle = common::rational_normal_curve_hilbert(r as usize, d);
            assert_eq!(ExactInt::from(oracle as u64), h(r, 1, d), "r={r} d={d}");
        }
    }
}

#[test]
fn full_dimension_is_form_space() {
    for r in 1..=8 {
        for d in 1..=8 {
            assert_eq!(h(r, r, d), form_space_dim(r, d));
        }
    }
}

proptest! {
    #[test]
    fn grassmannian_symmetry(r in 1u32..40, b in 0u32..40) {
        prop_assume!(b < r);
        // G(b, r) and G(r - 1 - b, r) parametrize dual subspaces
        prop_assert_eq!(grassmannian_dim(b, r).unwrap(), grassmannian_dim(r - 1 - b, r).unwrap());
    }

    #[test]
    fn difference_identity_large(r in 1u32..200, a_frac in 0.0f64..1.0, d in 2u32..200) {
        let a = 1 + ((r - 1) as f64 * a_frac) as u32;
        prop_assert_eq!(h(r, a, d) - h(r, a, d - 1), h(r - 1, a - 1, d));
    }

    #[test]
    fn exact_int_json_round_trip(x in any::<i64>(), shift in 0u32..200) {
        let big = (0..shift).fold(ExactInt::from(x), |acc, _| acc * ExactInt::from(2));
        let text = serde_json::to_string(&big).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExactInt>(&text).unwrap(), big);
    }
}

mod common;

use std::sync::Arc;

use excess::gfpoly::{
    default_extension_degrees, enumerate_locus, positive_dim_test_with, projective_points, CommonComponentOracle,
    ExcessMethod, ExtensionSchedule, FieldEmbedding, Form, GaloisField, LabConfig, Mode, TupleInstance, TupleLab,
};
use proptest::prelude::*;

fn field(q: u64) -> GaloisField {
    GaloisField::of_order(q).unwrap()
}

fn exhaustive(r: u32, degrees: &[u32], q: u64, config: &LabConfig) -> excess::gfpoly::CountReport {
    enumerate_locus(r, degrees, 1, &field(q), Mode::Exhaustive, config).unwrap()
}

#[test]
fn linear_pairs_match_rank_oracle() {
    for q in [2u32, 3, 4] {
        let oracle = common::rank_le1_pairs(q);
        assert_eq!(oracle, common::rank_le1_formula(q as u64));
        let rep = exhaustive(2, &[1, 1], q as u64, &LabConfig::default());
        assert_eq!(rep.count_excess, oracle, "q = {q}");
    }
}

#[test]
fn conic_pairs_match_divisibility_oracle() {
    for p in [2u32, 3] {
        let rep = exhaustive(2, &[2, 2], p as u64, &LabConfig::default());
        assert_eq!(rep.count_excess, common::conic_pairs_with_common_factor(p), "p = {p}");
        assert!(rep.count_line <= rep.count_excess);
    }
}

#[test]
fn routes_agree_on_every_conic_pair_over_f2() {
    let f2 = field(2);
    let lab = TupleLab::new(&f2, 2, &[2, 2], 1, &LabConfig { method: ExcessMethod::Count, ..Default::default() }).unwrap();
    let oracle = CommonComponentOracle::new(&f2, 4).unwrap();
    for i in 0..64 {
        for j in 0..64 {
            let (f, g) = (lab.form(0, i), lab.form(1, j));
            let counted = lab.verdict(&[i, j]).unwrap().positive;
            let exact = f.is_zero() || g.is_zero() || oracle.test(&f, &g).unwrap();
            assert_eq!(counted, exact, "pair ({i}, {j})");
        }
    }
}

#[test]
fn workers_do_not_change_reports() {
    let f3 = field(3);
    let mut reports = Vec::new();
    for workers in [1, 2, 8] {
        let config = LabConfig { workers, ..Default::default() };
        reports.push((
            exhaustive(2, &[1, 2], 2, &config),
            enumerate_locus(2, &[2, 2], 1, &f3, Mode::Sampled { seed: 11, n: 20_000 }, &config).unwrap(),
        ));
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn line_count_is_within_excess() {
    for (r, degrees, q) in [(2, vec![1, 1], 4), (2, vec![1, 2], 3), (3, vec![1, 1, 1], 2), (3, vec![1, 1, 2], 2)] {
        let rep = exhaustive(r, &degrees, q, &LabConfig::default());
        assert!(rep.count_line <= rep.count_excess, "{rep:?}");
        assert!(rep.count_excess <= rep.count_total);
    }
}

#[test]
fn three_linear_forms_in_p3() {
    // excess iff the 3 x 4 coefficient matrix has rank <= 2
    let rep = exhaustive(3, &[1, 1, 1], 2, &LabConfig::default());
    let full_rank: u64 = (0..3).map(|i| 16 - (1u64 << i)).product();
    assert_eq!(rep.count_excess, 4096 - full_rank);
    // a rank <= 2 system over F_2 always vanishes on a rational line
    assert_eq!(rep.count_line, rep.count_excess);
}

fn common_zero_count(forms: &[Form], base: &GaloisField, m: u32) -> u64 {
    let big = GaloisField::new(base.p() as u64, base.m() * m).unwrap();
    let emb = FieldEmbedding::new(base, &big).unwrap();
    let lifted: Vec<Form> = forms.iter().map(|f| f.embed(&emb)).collect();
    projective_points(forms[0].r(), &big)
        .filter(|pt| lifted.iter().all(|f| f.evaluate(&big, pt).unwrap() == 0))
        .count() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneity(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), d in 1u32..5, seed in any::<u64>()) {
        let f = field(q);
        let n = excess::gfpoly::monomial_count(3, d) as u32;
        let index = seed % q.pow(n.min(12));
        let form = Form::from_index(2, d, q as u32, index);
        let qq = q as u32;
        let pt = [(seed >> 8) as u32 % qq, (seed >> 20) as u32 % qq, 1 + (seed >> 32) as u32 % (qq - 1)];
        for lambda in 1..qq {
            let scaled: Vec<u32> = pt.iter().map(|&x| f.mul(lambda, x)).collect();
            prop_assert_eq!(
                form.evaluate(&f, &scaled).unwrap(),
                f.mul(f.pow(lambda, d as u64), form.evaluate(&f, &pt).unwrap())
            );
        }
    }

    #[test]
    fn transverse_pairs_respect_bezout(i in 0u64..729, j in 0u64..729) {
        let f3 = Arc::new(field(3));
        let forms = vec![Form::from_index(2, 2, 3, i), Form::from_index(2, 2, 3, j)];
        prop_assume!(forms.iter().all(|f| !f.is_zero()));
        let tuple = TupleInstance::new(f3.clone(), forms.clone()).unwrap();
        let verdict = positive_dim_test_with(&tuple, 1, ExtensionSchedule::Default, ExcessMethod::Resultant).unwrap();
        prop_assume!(!verdict.positive);
        for m in default_extension_degrees(3, 4) {
            prop_assert!(common_zero_count(&forms, &f3, m) <= 4);
        }
    }
}

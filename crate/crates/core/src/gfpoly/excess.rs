//! Deciding whether a tuple of forms cuts out a locus of at least the
//! target dimension.
//!
//! Tuples with at most two nonzero forms are decided exactly (a single
//! nonzero form cuts a hypersurface, two cut a hypersurface iff they share
//! a factor). Otherwise the target must be dimension 1 and the decision is
//! by point counting: a zero-dimensional intersection of forms of degrees
//! `d_i` has at most `B = prod d_i` points over any field, so more than `B`
//! common zeros over some `F_{q^m}` certifies a curve.

use std::borrow::Cow;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::field::{FieldEmbedding, GaloisField};
use super::form::{basis, Form, TupleInstance};
use super::points::{projective_point_count, projective_points};
use super::resultant::CommonComponentOracle;
use crate::error::{require, Error, Result};

/// Cap on the total number of points enumerated across one schedule.
pub const POINT_BUDGET: u64 = 1 << 22;

/// Which extension degrees `m` the point count visits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionSchedule {
    /// Degrees derived from curve point-count lower bounds (see [`default_extension_degrees`]).
    #[default]
    Default,
    /// Every `m` in `1..=m_max`.
    UpTo(u32),
}

/// Smallest set of extension degrees that exposes any curve in the common
/// zero locus, assuming the locus has total degree at most `bezout`.
///
/// A one-dimensional locus of degree at most `B` has a geometric component
/// of degree `e` whose Frobenius orbit has some size `t` with `t e <= B`;
/// that component is defined over `F_{q^t}`. An integral curve of degree
/// `e` has arithmetic genus at most `(e-1)(e-2)/2`, so over `F_Q` it has at
/// least `Q + 1 - (e-1)(e-2) sqrt(Q)` points. For each `(t, e)` the least
/// `j` pushing this above `B` over `F_{q^{tj}}` gives a degree `tj`; since
/// `F_{q^m}` sits inside `F_{q^{m'}}` when `m | m'`, only the degrees not
/// dividing another one are kept.
pub fn default_extension_degrees(q: u64, bezout: u64) -> Vec<u32> {
    let mut needed = BTreeSet::new();
    for t in 1..=bezout {
        for e in 1..=bezout / t {
            let mut j = 1u32;
            loop {
                let exp = t as u32 * j;
                let big_q = (q as u128).checked_pow(exp);
                match big_q {
                    Some(big_q) if curve_point_floor_exceeds(e, big_q, bezout) => break,
                    Some(_) => j += 1,
                    None => break,
                }
            }
            needed.insert(t as u32 * j);
        }
    }
    needed
        .iter()
        .copied()
        .filter(|&m| !needed.iter().any(|&other| other != m && other % m == 0))
        .collect()
}

/// `Q + 1 - (e-1)(e-2) sqrt(Q) > B`, decided in integers.
fn curve_point_floor_exceeds(e: u64, big_q: u128, bezout: u64) -> bool {
    let c = ((e.saturating_sub(1)) * (e.saturating_sub(2))) as u128;
    let lhs = big_q + 1;
    let b = bezout as u128;
    if lhs <= b {
        return false;
    }
    let margin = lhs - b;
    margin.checked_mul(margin).is_none_or(|sq| sq > c * c * big_q)
}

impl ExtensionSchedule {
    pub fn degrees(self, q: u64, bezout: u64) -> Vec<u32> {
        match self {
            ExtensionSchedule::Default => default_extension_degrees(q, bezout),
            ExtensionSchedule::UpTo(m) => (1..=m).collect(),
        }
    }
}

/// How the excess decision is made when several routes apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExcessMethod {
    /// Exact resultant test for two nonzero forms, point counting otherwise.
    #[default]
    Auto,
    /// Point counting whenever the target is dimension 1.
    Count,
    /// Exact tests only; point counting is refused.
    Resultant,
}

impl std::str::FromStr for ExcessMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ExcessMethod::Auto),
            "count" => Ok(ExcessMethod::Count),
            "resultant" => Ok(ExcessMethod::Resultant),
            other => Err(Error::Input(format!("unknown method {other:?} (auto, count, resultant)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Too few nonzero forms to cut below the target dimension.
    FewForms { nonzero_forms: usize },
    /// One nonzero form: its zero set is a hypersurface.
    Hypersurface,
    /// Two nonzero forms decided by the resultant test.
    Resultant { common_factor: bool },
    /// Largest common-zero count seen, at extension degree `m`.
    PointCount { m: u32, count: u64, bezout: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub positive: bool,
    pub certificate: Certificate,
}

/// Does `{F_1 = ... = F_k = 0}` have dimension at least `r - k + target_excess`?
pub fn positive_dim_test(
    tuple: &TupleInstance,
    target_excess: u32,
    schedule: ExtensionSchedule,
) -> Result<Verdict> {
    positive_dim_test_with(tuple, target_excess, schedule, ExcessMethod::Auto)
}

pub fn positive_dim_test_with(
    tuple: &TupleInstance,
    target_excess: u32,
    schedule: ExtensionSchedule,
    method: ExcessMethod,
) -> Result<Verdict> {
    let forms = tuple.forms();
    let degrees: Vec<u32> = tuple.degrees();
    let mut tester = ExcessTester::new(tuple.field(), tuple.r(), &degrees, target_excess, method, schedule)?;
    let nonzero: Vec<u32> = forms.iter().filter(|f| !f.is_zero()).map(|f| f.degree()).collect();
    if nonzero.len() >= tuple.r() as usize && nonzero.len() >= 2 {
        tester.prepare_bezout(nonzero.iter().map(|&d| d as u64).product())?;
    }
    tester.decide(forms)
}

pub(crate) struct CountLevel {
    pub(crate) m: u32,
    field: GaloisField,
    embedding: FieldEmbedding,
    pub(crate) points: Vec<Vec<u32>>,
}


/// Reusable excess decision for a fixed field, ambient dimension and degree
/// sequence.
pub struct ExcessTester {
    r: u32,
    k: usize,
    target_dim: i64,
    method: ExcessMethod,
    schedule: ExtensionSchedule,
    base: GaloisField,
    resultant: Option<CommonComponentOracle>,
    // count levels per distinct product of nonzero degrees
    levels: std::collections::HashMap<u64, Vec<CountLevel>>,
}

impl ExcessTester {
    pub fn new(
        field: &GaloisField,
        r: u32,
        degrees: &[u32],
        target_excess: u32,
        method: ExcessMethod,
        schedule: ExtensionSchedule,
    ) -> Result<Self> {
        require(r >= 1, || format!("r = {r} must satisfy r >= 1"))?;
        require(target_excess >= 1, || format!("target excess {target_excess} must be >= 1"))?;
        let k = degrees.len();
        let target_dim = r as i64 - k as i64 + target_excess as i64;
        require(target_dim >= 1, || {
            format!("target dimension r - k + a = {target_dim} must be >= 1")
        })?;
        let max_pair = {
            let mut d = degrees.to_vec();
            d.sort_unstable();
            d.iter().rev().take(2).sum::<u32>()
        };
        let resultant = if method != ExcessMethod::Count || r == 1 || target_dim > 1 {
            Some(CommonComponentOracle::new(field, max_pair.max(1))?)
        } else {
            None
        };
        Ok(ExcessTester {
            r,
            k,
            target_dim,
            method,
            schedule,
            base: field.clone(),
            resultant,
            levels: Default::default(),
        })
    }

    pub fn target_dim(&self) -> i64 {
        self.target_dim
    }

    /// Builds the point-count levels for every product of degrees that a
    /// tuple with some zero forms could need. Call before [`decide`] when
    /// point counting may be used.
    ///
    /// [`decide`]: ExcessTester::decide
    pub fn prepare_counting(&mut self, degrees: &[u32]) -> Result<()> {
        if self.target_dim != 1 || self.method == ExcessMethod::Resultant {
            return Ok(());
        }
        let r = self.r as usize;
        // every subset of at least r forms can be the nonzero part
        let k = degrees.len();
        for mask in 0u32..(1 << k) {
            if (mask.count_ones() as usize) < r {
                continue;
            }
            let bezout: u64 = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| degrees[i] as u64).product();
            self.prepare_bezout(bezout)?;
        }
        Ok(())
    }

    /// Builds the point-count levels for one product of nonzero degrees.
    pub fn prepare_bezout(&mut self, bezout: u64) -> Result<()> {
        if self.target_dim != 1 || self.method == ExcessMethod::Resultant {
            return Ok(());
        }
        if !self.levels.contains_key(&bezout) {
            let levels = self.build_levels(bezout)?;
            self.levels.insert(bezout, levels);
        }
        Ok(())
    }

    pub(crate) fn levels_for(&self, bezout: u64) -> Option<&[CountLevel]> {
        self.levels.get(&bezout).map(Vec::as_slice)
    }

    pub(crate) fn count_bezouts(&self) -> impl Iterator<Item = u64> + '_ {
        self.levels.keys().copied()
    }

    fn build_levels(&self, bezout: u64) -> Result<Vec<CountLevel>> {
        let q = self.base.q() as u64;
        let degrees = self.schedule.degrees(q, bezout);
        let total: u64 = degrees
            .iter()
            .map(|&m| q.checked_pow(m).map_or(u64::MAX, |big| projective_point_count(self.r, big)))
            .fold(0u64, |a, b| a.saturating_add(b));
        if total > POINT_BUDGET {
            return Err(Error::Unsupported(format!(
                "point counting over F_{q}^m for m in {degrees:?} in P^{} visits {total} points (budget {POINT_BUDGET})",
                self.r
            )));
        }
        degrees
            .into_iter()
            .map(|m| {
                let field = GaloisField::new(self.base.p() as u64, self.base.m() * m)?;
                let embedding = FieldEmbedding::new(&self.base, &field)?;
                let points = projective_points(self.r, &field).collect();
                Ok(CountLevel { m, field, embedding, points })
            })
            .collect()
    }

    /// Decides a tuple of forms with the degrees given at construction.
    pub fn decide(&self, forms: &[Form]) -> Result<Verdict> {
        require(forms.len() == self.k, || format!("expected {} forms, got {}", self.k, forms.len()))?;
        let nonzero: Vec<&Form> = forms.iter().filter(|f| !f.is_zero()).collect();
        self.decide_nonzero(&nonzero, |level, pos| Cow::Owned(zero_mask(level, nonzero[pos])))
    }

    /// Shared decision logic. `mask_of(level, i)` supplies the zero set of
    /// `nonzero[i]` over the level's points, possibly from a cache.
    pub(crate) fn decide_nonzero<'c, M>(&self, nonzero: &[&Form], mask_of: M) -> Result<Verdict>
    where
        M: Fn(&CountLevel, usize) -> Cow<'c, [u64]>,
    {
        let r = self.r as i64;
        let kn = nonzero.len();
        if r - kn as i64 >= self.target_dim {
            return Ok(Verdict { positive: true, certificate: Certificate::FewForms { nonzero_forms: kn } });
        }
        if kn == 1 {
            // exactly r - 1 < target
            return Ok(Verdict { positive: false, certificate: Certificate::Hypersurface });
        }
        if kn == 2 && (self.method != ExcessMethod::Count || self.target_dim != 1) {
            // here target >= r - 1; two nonzero forms reach r - 1 iff they share a factor
            if self.target_dim > r - 1 {
                return Ok(Verdict {
                    positive: false,
                    certificate: Certificate::Resultant { common_factor: false },
                });
            }
            let oracle = self.resultant.as_ref().expect("resultant oracle prepared");
            let common = oracle.test(nonzero[0], nonzero[1])?;
            return Ok(Verdict { positive: common, certificate: Certificate::Resultant { common_factor: common } });
        }
        if self.method == ExcessMethod::Resultant {
            return Err(Error::Unsupported(format!(
                "{kn} nonzero forms need point counting, which --method resultant refuses"
            )));
        }
        if self.target_dim != 1 {
            return Err(Error::Unsupported(format!(
                "target dimension {} with {kn} nonzero forms in P^{r}",
                self.target_dim
            )));
        }
        let bezout: u64 = nonzero.iter().map(|f| f.degree() as u64).product();
        let levels = self.levels.get(&bezout).ok_or_else(|| {
            Error::Unsupported("point-count levels not prepared for this degree product".into())
        })?;
        let mut best = (0u32, 0u64);
        for level in levels {
            let mut acc: Vec<u64> = mask_of(level, 0).into_owned();
            for pos in 1..kn {
                let mask = mask_of(level, pos);
                for (a, b) in acc.iter_mut().zip(mask.iter()) {
                    *a &= b;
                }
            }
            let count: u64 = acc.iter().map(|w| w.count_ones() as u64).sum();
            if count > bezout {
                return Ok(Verdict {
                    positive: true,
                    certificate: Certificate::PointCount { m: level.m, count, bezout },
                });
            }
            if count >= best.1 {
                best = (level.m, count);
            }
        }
        Ok(Verdict {
            positive: false,
            certificate: Certificate::PointCount { m: best.0, count: best.1, bezout },
        })
    }
}

/// Bitset over the level's points marking the zeros of `form`.
pub(crate) fn zero_mask(level: &CountLevel, form: &Form) -> Vec<u64> {
    let f = form.embed(&level.embedding);
    let field = &level.field;
    let monos = basis(f.nvars(), f.degree());
    let nonzero: Vec<(u32, &Vec<u32>)> =
        f.coeffs().iter().zip(monos.iter()).filter(|(c, _)| **c != 0).map(|(c, e)| (*c, e)).collect();
    let mut mask = vec![0u64; level.points.len().div_ceil(64)];
    let d = f.degree() as usize;
    let mut powers = vec![vec![0u32; d + 1]; f.nvars()];
    for (i, pt) in level.points.iter().enumerate() {
        for (v, &x) in pt.iter().enumerate() {
            let mut acc = 1;
            for e in 0..=d {
                powers[v][e] = acc;
                acc = field.mul(acc, x);
            }
        }
        let mut value = 0;
        for (c, exps) in &nonzero {
            let term = exps.iter().enumerate().fold(*c, |t, (v, &e)| field.mul(t, powers[v][e as usize]));
            value = field.add(value, term);
        }
        if value == 0 {
            mask[i / 64] |= 1 << (i % 64);
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn field(q: u64) -> Arc<GaloisField> {
        Arc::new(GaloisField::of_order(q).unwrap())
    }

    fn tester(q: u64, r: u32, degrees: &[u32], a: u32, method: ExcessMethod) -> ExcessTester {
        let mut t = ExcessTester::new(&field(q), r, degrees, a, method, ExtensionSchedule::Default).unwrap();
        t.prepare_counting(degrees).unwrap();
        t
    }

    #[test]
    fn default_degrees_for_conic_pairs() {
        assert_eq!(default_extension_degrees(2, 4), vec![4, 6]);
        assert_eq!(default_extension_degrees(3, 4), vec![3, 4]);
        assert_eq!(default_extension_degrees(2, 1), vec![1]);
        assert_eq!(default_extension_degrees(4, 1), vec![1]);
        assert_eq!(default_extension_degrees(2, 2), vec![2]);
    }

    #[test]
    fn proportional_linear_forms_positive() {
        let t = tester(2, 2, &[1, 1], 1, ExcessMethod::Count);
        let l = Form::linear(vec![1, 1, 0]);
        let v = t.decide(&[l.clone(), l]).unwrap();
        assert!(v.positive);
        match v.certificate {
            Certificate::PointCount { count, bezout, .. } => assert!(count > bezout),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transverse_lines_negative() {
        let t = tester(2, 2, &[1, 1], 1, ExcessMethod::Count);
        let v = t.decide(&[Form::linear(vec![1, 0, 0]), Form::linear(vec![0, 1, 0])]).unwrap();
        assert!(!v.positive);
        assert!(matches!(v.certificate, Certificate::PointCount { count: 1, .. }));
    }

    #[test]
    fn zero_tuples_are_excess() {
        let t = tester(3, 2, &[2, 2], 1, ExcessMethod::Count);
        let v = t.decide(&[Form::zero(2, 2), Form::zero(2, 2)]).unwrap();
        assert!(v.positive);
        assert_eq!(v.certificate, Certificate::FewForms { nonzero_forms: 0 });
        let v = t.decide(&[Form::zero(2, 2), Form::monomial(&[1, 1, 0], 1)]).unwrap();
        assert!(v.positive);
    }

    #[test]
    fn single_form_targets() {
        // k = 1, a = 1: dimension >= r only for the zero form
        let t = tester(2, 3, &[2], 1, ExcessMethod::Auto);
        assert!(!t.decide(&[Form::monomial(&[2, 0, 0, 0], 1)]).unwrap().positive);
        assert!(t.decide(&[Form::zero(3, 2)]).unwrap().positive);
    }

    #[test]
    fn three_forms_in_plane_with_a2() {
        // k = 3, a = 2 in P^2: target dimension 1
        let f2 = field(2);
        let x0 = Form::linear(vec![1, 0, 0]);
        let x1 = Form::linear(vec![0, 1, 0]);
        let x2 = Form::linear(vec![0, 0, 1]);
        let tuple = TupleInstance::new(f2.clone(), vec![x0.mul(&x1, &f2), x0.mul(&x2, &f2), x0.mul(&x0, &f2)]).unwrap();
        assert!(positive_dim_test(&tuple, 2, ExtensionSchedule::UpTo(3)).unwrap().positive);
        let tuple = TupleInstance::new(f2.clone(), vec![x0.mul(&x1, &f2), x0.mul(&x2, &f2), x1.mul(&x2, &f2)]).unwrap();
        assert!(!positive_dim_test(&tuple, 2, ExtensionSchedule::UpTo(3)).unwrap().positive);
        // B = 8 over F_2 needs m up to 11, past the point budget
        assert!(matches!(positive_dim_test(&tuple, 2, ExtensionSchedule::Default), Err(Error::Unsupported(_))));
    }

    #[test]
    fn resultant_method_refuses_counting() {
        let t = ExcessTester::new(&field(2), 3, &[1, 1, 1], 1, ExcessMethod::Resultant, ExtensionSchedule::Default).unwrap();
        let forms = [Form::linear(vec![1, 0, 0, 0]), Form::linear(vec![0, 1, 0, 0]), Form::linear(vec![0, 0, 1, 0])];
        assert!(matches!(t.decide(&forms), Err(Error::Unsupported(_))));
    }

    #[test]
    fn unsupported_target_rejected() {
        // k = 3, a = 3 in P^3 -> target 3 - 3 + 3 = 3 with three nonzero forms
        let t = tester(2, 3, &[1, 1, 1], 3, ExcessMethod::Auto);
        let forms = [Form::linear(vec![1, 0, 0, 0]), Form::linear(vec![0, 1, 0, 0]), Form::linear(vec![0, 0, 1, 0])];
        assert!(matches!(t.decide(&forms), Err(Error::Unsupported(_))));
    }

    #[test]
    fn point_budget_is_enforced() {
        let mut t = ExcessTester::new(&field(2), 3, &[4, 4, 4], 1, ExcessMethod::Count, ExtensionSchedule::Default).unwrap();
        assert!(matches!(t.prepare_counting(&[4, 4, 4]), Err(Error::Unsupported(_))));
    }
}

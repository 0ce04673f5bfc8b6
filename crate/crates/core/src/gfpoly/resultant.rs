//! Exact common-factor test for two forms via the Sylvester resultant.
//!
//! After a linear change of coordinates that makes the `x_r^d` coefficient
//! of both forms nonzero, `F` and `G` share a nonconstant factor iff
//! `Res_{x_r}(F, G)` vanishes identically as a form in `x_0, ..., x_{r-1}`.
//! The determinant is expanded over the polynomial ring (minor expansion by
//! column subsets), so the zero test is coefficientwise.

use std::collections::HashMap;

use super::field::{FieldEmbedding, GaloisField};
use super::form::Form;
use crate::error::{require, Error, Result};

struct Level {
    field: GaloisField,
    embedding: FieldEmbedding,
}

/// Reusable common-factor oracle over a fixed base field.
///
/// Coordinate changes `x_i -> x_i + c_i x_r` (`i < r`) are tried in a fixed
/// order: `c` runs through `F_Q^r` by increasing `sum c_i Q^i`, so the
/// identity comes first, then shears of `x_0`, and so on. `F_Q` is the base
/// field, then its degree 2, 3, ... extensions until one admits a change.
pub struct CommonComponentOracle {
    levels: Vec<Level>,
}

impl CommonComponentOracle {
    /// Prepares extensions large enough for forms of total degree up to
    /// `max_degree_sum = deg F + deg G`.
    pub fn new(base: &GaloisField, max_degree_sum: u32) -> Result<Self> {
        let mut levels = vec![Level { field: base.clone(), embedding: FieldEmbedding::identity(base) }];
        // a nonzero polynomial of degree D cannot vanish on all of F_Q^r once Q > D
        let mut j = 1;
        while (base.q() as u64).pow(j) <= max_degree_sum as u64 {
            j += 1;
            let field = GaloisField::new(base.p() as u64, base.m() * j)?;
            let embedding = FieldEmbedding::new(base, &field)?;
            levels.push(Level { field, embedding });
        }
        Ok(CommonComponentOracle { levels })
    }

    pub fn base(&self) -> &GaloisField {
        &self.levels[0].field
    }

    /// True iff `f` and `g` share a nonconstant factor over the algebraic closure.
    pub fn test(&self, f: &Form, g: &Form) -> Result<bool> {
        require(f.r() == g.r(), || "forms must share the ambient dimension".into())?;
        require(f.r() >= 1, || "common factors need r >= 1".into())?;
        if f.is_zero() || g.is_zero() {
            return Err(Error::Precondition("zero form passed to the common-factor test".into()));
        }
        if f.degree() == 0 || g.degree() == 0 {
            return Ok(false);
        }
        let r = f.r() as usize;
        for level in &self.levels {
            let (fe, ge) = (f.embed(&level.embedding), g.embed(&level.embedding));
            if let Some(shift) = find_shift(&level.field, &fe, &ge, r) {
                return Ok(resultant_vanishes(&level.field, &fe, &ge, &shift));
            }
        }
        Err(Error::Unsupported(format!(
            "no coordinate change found for degrees ({}, {}); raise the oracle degree bound",
            f.degree(),
            g.degree()
        )))
    }
}

/// One-shot [`CommonComponentOracle::test`].
pub fn common_component_test(field: &GaloisField, f: &Form, g: &Form) -> Result<bool> {
    CommonComponentOracle::new(field, f.degree() + g.degree())?.test(f, g)
}

fn find_shift(field: &GaloisField, f: &Form, g: &Form, r: usize) -> Option<Vec<u32>> {
    let q = field.q() as u64;
    let total = q.checked_pow(r as u32)?;
    let mut point = vec![0u32; r + 1];
    point[r] = 1;
    for n in 0..total {
        let mut rest = n;
        for c in point.iter_mut().take(r) {
            *c = (rest % q) as u32;
            rest /= q;
        }
        // coefficient of x_r^d after the change is F(c_0, ..., c_{r-1}, 1)
        if f.eval_unchecked(field, &point) != 0 && g.eval_unchecked(field, &point) != 0 {
            return Some(point[..r].to_vec());
        }
    }
    None
}

fn shifted(field: &GaloisField, f: &Form, shift: &[u32]) -> Form {
    let r = shift.len();
    let images: Vec<Form> = (0..=r)
        .map(|i| {
            let mut coeffs = vec![0; r + 1];
            coeffs[i] = 1;
            if i < r {
                coeffs[r] = shift[i];
            }
            Form::linear(coeffs)
        })
        .collect();
    if shift.iter().all(|&c| c == 0) {
        f.clone()
    } else {
        f.substitute(&images, field)
    }
}

fn resultant_vanishes(field: &GaloisField, f: &Form, g: &Form, shift: &[u32]) -> bool {
    let fs = shifted(field, f, shift).split_last_variable();
    let gs = shifted(field, g, shift).split_last_variable();
    let (df, dg) = (f.degree() as usize, g.degree() as usize);
    let n = df + dg;
    let mut matrix: Vec<Vec<Option<Form>>> = vec![vec![None; n]; n];
    for i in 0..dg {
        for j in 0..=df {
            matrix[i][i + j] = Some(fs[df - j].clone());
        }
    }
    for i in 0..df {
        for j in 0..=dg {
            matrix[dg + i][i + j] = Some(gs[dg - j].clone());
        }
    }
    match determinant(field, &matrix) {
        Some(det) => det.is_zero(),
        None => true,
    }
}

/// Determinant of a square matrix of forms by expanding along successive
/// rows and memoizing minors on column subsets. `None` entries are zero;
/// returns `None` when the determinant is the zero polynomial with no term.
pub(crate) fn determinant(field: &GaloisField, matrix: &[Vec<Option<Form>>]) -> Option<Form> {
    let n = matrix.len();
    assert!(n <= 30, "minor expansion is limited to 30 columns");
    // minors[S] = det(rows 0..|S|, columns S)
    let mut minors: HashMap<u32, Form> = HashMap::new();
    for (c, entry) in matrix[0].iter().enumerate() {
        if let Some(e) = entry {
            if !e.is_zero() {
                minors.insert(1 << c, e.clone());
            }
        }
    }
    for (row, entries) in matrix.iter().enumerate().skip(1) {
        let mut next: HashMap<u32, Form> = HashMap::new();
        let mut keys: Vec<u32> = minors.keys().copied().collect();
        keys.sort_unstable();
        for set in keys {
            let minor = &minors[&set];
            for (c, entry) in entries.iter().enumerate() {
                if set & (1 << c) != 0 {
                    continue;
                }
                let Some(e) = entry else { continue };
                if e.is_zero() {
                    continue;
                }
                let full = set | (1 << c);
                // expanding along the last row: sign (-1)^{row + position of c in full}
                let position = (full & ((1 << c) - 1)).count_ones() as usize;
                let mut term = minor.mul(e, field);
                if (row + position) % 2 == 1 {
                    term = term.scale(field.neg(1), field);
                }
                match next.get_mut(&full) {
                    Some(acc) => *acc = acc.add(&term, field),
                    None => {
                        next.insert(full, term);
                    }
                }
            }
        }
        next.retain(|_, f| !f.is_zero());
        minors = next;
    }
    minors.remove(&(((1u64 << n) - 1) as u32))
}

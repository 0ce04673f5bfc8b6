//! Dense homogeneous forms.
//!
//! Coefficients of a degree-`d` form in `x_0, ..., x_r` are stored in
//! graded-lex order with `x_0 > x_1 > ... > x_r` (for a fixed degree this is
//! plain lex order, so `x_0^d` comes first and `x_r^d` last).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::field::{FieldEmbedding, GaloisField};
use crate::error::{require, Result};

/// Number of exponent vectors of total degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: u32) -> usize {
    if nvars == 0 {
        return usize::from(d == 0);
    }
    // C(d + nvars - 1, nvars - 1)
    let (n, k) = (d as usize + nvars - 1, nvars - 1);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Exponent vectors of one degree, in coefficient order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if nvars == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(nvars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(monomial_count(nvars, d));
    if nvars > 0 {
        go(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    } else if d == 0 {
        out.push(Vec::new());
    }
    out
}

/// Cached [`monomials`].
pub(crate) fn basis(nvars: usize, d: u32) -> Arc<Vec<Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<Vec<Vec<u32>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry((nvars, d)).or_insert_with(|| Arc::new(monomials(nvars, d))).clone()
}

/// Position of an exponent vector in the coefficient order of its degree.
pub fn monomial_rank(exps: &[u32]) -> usize {
    let mut remaining: u32 = exps.iter().sum();
    let mut rank = 0;
    for (i, &e) in exps.iter().enumerate() {
        let rest_vars = exps.len() - i - 1;
        if rest_vars == 0 {
            break;
        }
        // vectors that put more weight on this coordinate come first
        for v in e + 1..=remaining {
            rank += monomial_count(rest_vars, remaining - v);
        }
        remaining -= e;
    }
    rank
}

/// A degree-`d` form in `r + 1` variables over some [`GaloisField`] that the
/// caller carries alongside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Form {
    r: u32,
    d: u32,
    coeffs: Vec<u32>,
}

impl Form {
    pub fn zero(r: u32, d: u32) -> Self {
        Form { r, d, coeffs: vec![0; monomial_count(r as usize + 1, d)] }
    }

    pub fn from_coeffs(r: u32, d: u32, coeffs: Vec<u32>) -> Result<Self> {
        let n = monomial_count(r as usize + 1, d);
        require(coeffs.len() == n, || {
            format!("a degree-{d} form in {} variables needs {n} coefficients, got {}", r + 1, coeffs.len())
        })?;
        Ok(Form { r, d, coeffs })
    }

    /// `c * x^exps`.
    pub fn monomial(exps: &[u32], c: u32) -> Self {
        let r = exps.len() as u32 - 1;
        let d = exps.iter().sum();
        let mut f = Form::zero(r, d);
        f.coeffs[monomial_rank(exps)] = c;
        f
    }

    /// The form whose coefficient vector holds the base-`q` digits of `index`
    /// (coefficient 0 is the least significant digit).
    pub fn from_index(r: u32, d: u32, q: u32, mut index: u64) -> Self {
        let mut f = Form::zero(r, d);
        for c in f.coeffs.iter_mut() {
            *c = (index % q as u64) as u32;
            index /= q as u64;
        }
        f
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn nvars(&self) -> usize {
        self.r as usize + 1
    }

    /// Coefficient of `x^exps`.
    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.coeffs[monomial_rank(exps)]
    }

    /// Value at a coordinate vector (any representative of a projective point).
    pub fn evaluate(&self, field: &GaloisField, point: &[u32]) -> Result<u32> {
        require(point.len() == self.nvars(), || {
            format!("point has {} coordinates, form has {} variables", point.len(), self.nvars())
        })?;
        Ok(self.eval_unchecked(field, point))
    }

    pub(crate) fn eval_unchecked(&self, field: &GaloisField, point: &[u32]) -> u32 {
        let powers: Vec<Vec<u32>> = point
            .iter()
            .map(|&x| {
                let mut pw = Vec::with_capacity(self.d as usize + 1);
                let mut acc = 1;
                for _ in 0..=self.d {
                    pw.push(acc);
                    acc = field.mul(acc, x);
                }
                pw
            })
            .collect();
        let mut acc = 0;
        for (c, exps) in self.coeffs.iter().zip(basis(self.nvars(), self.d).iter()) {
            if *c == 0 {
                continue;
            }
            let term = exps.iter().enumerate().fold(*c, |t, (i, &e)| field.mul(t, powers[i][e as usize]));
            acc = field.add(acc, term);
        }
        acc
    }

    pub fn add(&self, other: &Form, field: &GaloisField) -> Form {
        assert_eq!((self.r, self.d), (other.r, other.d), "adding forms of different shapes");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.add(a, b)).collect();
        Form { r: self.r, d: self.d, coeffs }
    }

    pub fn scale(&self, c: u32, field: &GaloisField) -> Form {
        let coeffs = self.coeffs.iter().map(|&a| field.mul(a, c)).collect();
        Form { r: self.r, d: self.d, coeffs }
    }

    pub fn mul(&self, other: &Form, field: &GaloisField) -> Form {
        assert_eq!(self.r, other.r, "multiplying forms in different variable counts");
        let mut out = Form::zero(self.r, self.d + other.d);
        let lhs = basis(self.nvars(), self.d);
        let rhs = basis(other.nvars(), other.d);
        let mut exps = vec![0; self.nvars()];
        for (a, ea) in self.coeffs.iter().zip(lhs.iter()) {
            if *a == 0 {
                continue;
            }
            for (b, eb) in other.coeffs.iter().zip(rhs.iter()) {
                if *b == 0 {
                    continue;
                }
                for i in 0..exps.len() {
                    exps[i] = ea[i] + eb[i];
                }
                let k = monomial_rank(&exps);
                out.coeffs[k] = field.add(out.coeffs[k], field.mul(*a, *b));
            }
        }
        out
    }

    /// `F(L_0, ..., L_r)` for linear forms `L_i` sharing a variable count.
    pub fn substitute(&self, images: &[Form], field: &GaloisField) -> Form {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target_r = images[0].r;
        debug_assert!(images.iter().all(|l| l.d == 1 && l.r == target_r));
        // powers[i][e] = L_i^e
        let powers: Vec<Vec<Form>> = images
            .iter()
            .map(|l| {
                let mut pw = vec![Form::constant(target_r, 1)];
                for e in 1..=self.d as usize {
                    let next = pw[e - 1].mul(l, field);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = Form::zero(target_r, self.d);
        for (c, exps) in self.coeffs.iter().zip(basis(self.nvars(), self.d).iter()) {
            if *c == 0 {
                continue;
            }
            let mut term = Form::constant(target_r, *c);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize], field);
                }
            }
            out = out.add(&term, field);
        }
        out
    }

    pub fn constant(r: u32, c: u32) -> Form {
        Form { r, d: 0, coeffs: vec![c] }
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: Vec<u32>) -> Form {
        Form { r: coeffs.len() as u32 - 1, d: 1, coeffs }
    }

    /// Coefficientwise image under a field embedding.
    pub fn embed(&self, embedding: &FieldEmbedding) -> Form {
        Form { r: self.r, d: self.d, coeffs: self.coeffs.iter().map(|&c| embedding.apply(c)).collect() }
    }

    /// Writes `F = sum_i f_i x_r^i` and returns `[f_0, ..., f_d]`, each a form
    /// in `x_0, ..., x_{r-1}`. Requires `r >= 1`.
    pub fn split_last_variable(&self) -> Vec<Form> {
        assert!(self.r >= 1);
        let mut parts: Vec<Form> = (0..=self.d).map(|i| Form::zero(self.r - 1, self.d - i)).collect();
        for (c, exps) in self.coeffs.iter().zip(basis(self.nvars(), self.d).iter()) {
            if *c == 0 {
                continue;
            }
            let (head, last) = exps.split_at(self.r as usize);
            let part = &mut parts[last[0] as usize];
            part.coeffs[monomial_rank(head)] = *c;
        }
        parts
    }
}

/// `k` forms over a shared field.
#[derive(Clone, Debug)]
pub struct TupleInstance {
    field: Arc<GaloisField>,
    r: u32,
    forms: Vec<Form>,
}

impl TupleInstance {
    pub fn new(field: Arc<GaloisField>, forms: Vec<Form>) -> Result<Self> {
        require(!forms.is_empty(), || "a tuple needs at least one form".into())?;
        let r = forms[0].r;
        require(forms.iter().all(|f| f.r == r), || "forms must share the ambient dimension".into())?;
        require(forms.windows(2).all(|w| w[0].d <= w[1].d), || {
            format!("degrees {:?} must be non-decreasing", forms.iter().map(|f| f.d).collect::<Vec<_>>())
        })?;
        require(forms.iter().all(|f| f.coeffs.iter().all(|&c| c < field.q())), || {
            format!("coefficients must be element encodings below q = {}", field.q())
        })?;
        Ok(TupleInstance { field, r, forms })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.forms.iter().map(|f| f.d).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_is_grlex() {
        let m = monomials(3, 2);
        assert_eq!(
            m,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        for nvars in 1..=5 {
            for d in 0..=5 {
                let all = monomials(nvars, d);
                assert_eq!(all.len(), monomial_count(nvars, d));
                for (i, e) in all.iter().enumerate() {
                    assert_eq!(monomial_rank(e), i);
                }
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let f2 = GaloisField::new(2, 1).unwrap();
        let x0 = Form::monomial(&[1, 0, 0], 1);
        assert_eq!(x0.evaluate(&f2, &[0, 1, 0]).unwrap(), 0);
        // x0^2 + x1 x2 at (1:1:1) over F_2
        let f = Form::from_coeffs(2, 2, vec![1, 0, 0, 0, 1, 0]).unwrap();
        assert_eq!(f.evaluate(&f2, &[1, 1, 1]).unwrap(), 0);
        let zero = Form::zero(2, 3);
        assert_eq!(zero.evaluate(&f2, &[1, 0, 1]).unwrap(), 0);
        assert!(x0.evaluate(&f2, &[1, 0]).is_err());
    }

    #[test]
    fn substitution_and_split() {
        let f3 = GaloisField::new(3, 1).unwrap();
        // F = x0 x1 + x2^2; substitute x0 -> x0 + x2
        let f = Form::from_coeffs(2, 2, vec![0, 1, 0, 0, 0, 1]).unwrap();
        let images = vec![Form::linear(vec![1, 0, 1]), Form::linear(vec![0, 1, 0]), Form::linear(vec![0, 0, 1])];
        let g = f.substitute(&images, &f3);
        // x0 x1 + x1 x2 + x2^2
        assert_eq!(g.coeffs(), &[0, 1, 0, 0, 1, 1]);
        let parts = g.split_last_variable();
        assert_eq!(parts[2].coeffs(), &[1]);
        assert_eq!(parts[1].coeffs(), &[0, 1]);
        assert_eq!(parts[0].coeffs(), &[0, 1, 0]);
    }

    #[test]
    fn product_evaluates_as_product() {
        let f9 = GaloisField::new(3, 2).unwrap();
        let a = Form::from_index(2, 2, 9, 123_456);
        let b = Form::from_index(2, 1, 9, 517);
        let ab = a.mul(&b, &f9);
        for pt in [[1, 2, 3], [4, 0, 8], [7, 7, 1]] {
            let lhs = ab.evaluate(&f9, &pt).unwrap();
            let rhs = f9.mul(a.evaluate(&f9, &pt).unwrap(), b.evaluate(&f9, &pt).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tuple_validation() {
        let f2 = Arc::new(GaloisField::new(2, 1).unwrap());
        let lin = Form::linear(vec![1, 0, 0]);
        let quad = Form::zero(2, 2);
        assert!(TupleInstance::new(f2.clone(), vec![lin.clone(), quad.clone()]).is_ok());
        assert!(TupleInstance::new(f2.clone(), vec![quad, lin.clone()]).is_err());
        assert!(TupleInstance::new(f2.clone(), vec![Form::linear(vec![2, 0, 0])]).is_err());
        assert!(TupleInstance::new(f2, vec![lin, Form::zero(3, 1)]).is_err());
    }
}

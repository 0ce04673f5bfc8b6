//! Rational points and lines of `P^r` over a finite field.

use super::field::GaloisField;
use super::form::Form;

/// `(q^{r+1} - 1) / (q - 1)`, saturating at `u64::MAX`.
pub fn projective_point_count(r: u32, q: u64) -> u64 {
    (0..=r).map(|i| q.saturating_pow(i)).fold(0u64, u64::saturating_add)
}

/// Normalized representatives (first nonzero coordinate equal to 1) of every
/// point of `P^r(F_q)`, each class exactly once.
///
/// Points are grouped by the position of the leading 1, earliest first; the
/// trailing coordinates then run through base-`q` counting with the last
/// coordinate varying fastest.
pub struct ProjectivePoints {
    r: usize,
    q: u32,
    lead: usize,
    tail: Vec<u32>,
    done: bool,
}

pub fn projective_points(r: u32, field: &GaloisField) -> ProjectivePoints {
    ProjectivePoints { r: r as usize, q: field.q(), lead: 0, tail: vec![0; r as usize], done: false }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let mut point = vec![0; self.r + 1];
        point[self.lead] = 1;
        point[self.lead + 1..].copy_from_slice(&self.tail);
        // advance the odometer over the tail
        let mut i = self.tail.len();
        loop {
            if i == 0 {
                self.lead += 1;
                if self.lead > self.r {
                    self.done = true;
                } else {
                    self.tail = vec![0; self.r - self.lead];
                }
                break;
            }
            i -= 1;
            self.tail[i] += 1;
            if self.tail[i] < self.q {
                break;
            }
            self.tail[i] = 0;
        }
        Some(point)
    }
}

/// A rational line, stored as the two rows of its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl Line {
    /// Restriction of `form` to the line, as a binary form in `(s, t)`.
    pub fn restrict(&self, form: &Form, field: &GaloisField) -> Form {
        let images: Vec<Form> = self
            .p
            .iter()
            .zip(&self.q)
            .map(|(&a, &b)| Form::linear(vec![a, b]))
            .collect();
        form.substitute(&images, field)
    }

    pub fn contains_zero_set_of(&self, form: &Form, field: &GaloisField) -> bool {
        form.is_zero() || self.restrict(form, field).is_zero()
    }
}

/// Number of lines in `P^r(F_q)`.
pub fn line_count(r: u32, q: u64) -> u64 {
    let n = r as u64 + 1;
    if n < 2 {
        return 0;
    }
    let num = (q.pow(n as u32) - 1) * (q.pow(n as u32) - q);
    let den = (q * q - 1) * (q * q - q);
    num / den
}

/// Every `F_q`-rational line of `P^r`, each once, via 2 x (r+1) matrices in
/// reduced row echelon form.
pub fn rational_lines(r: u32, field: &GaloisField) -> Vec<Line> {
    let n = r as usize + 1;
    let q = field.q();
    let mut out = Vec::new();
    for p1 in 0..n {
        for p2 in p1 + 1..n {
            // free entries: row 0 at columns > p1 except p2, row 1 at columns > p2
            let free0: Vec<usize> = (p1 + 1..n).filter(|&c| c != p2).collect();
            let free1: Vec<usize> = (p2 + 1..n).collect();
            let slots = free0.len() + free1.len();
            let total = (q as u64).pow(slots as u32);
            for idx in 0..total {
                let mut row0 = vec![0; n];
                let mut row1 = vec![0; n];
                row0[p1] = 1;
                row1[p2] = 1;
                let mut rest = idx;
                let mut digit = || {
                    let v = (rest % q as u64) as u32;
                    rest /= q as u64;
                    v
                };
                for &c in &free0 {
                    row0[c] = digit();
                }
                for &c in &free1 {
                    row1[c] = digit();
                }
                out.push(Line { p: row0, q: row1 });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn point_counts() {
        let f2 = GaloisField::new(2, 1).unwrap();
        let f3 = GaloisField::new(3, 1).unwrap();
        assert_eq!(projective_points(1, &f2).count(), 3);
        assert_eq!(projective_points(2, &f3).count(), 13);
        assert_eq!(projective_points(3, &f2).count(), 15);
        let f4 = GaloisField::new(2, 2).unwrap();
        let pts: Vec<_> = projective_points(2, &f4).collect();
        assert_eq!(pts.len() as u64, projective_point_count(2, 4));
        let unique: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(unique.len(), pts.len());
        for p in &pts {
            assert_eq!(p.iter().find(|&&c| c != 0), Some(&1));
        }
    }

    #[test]
    fn line_enumeration_counts_and_incidence() {
        for (r, q) in [(2u32, 2u64), (2, 3), (3, 2), (2, 4), (3, 3)] {
            let field = GaloisField::of_order(q).unwrap();
            let lines = rational_lines(r, &field);
            assert_eq!(lines.len() as u64, line_count(r, q), "r={r} q={q}");
            // every line carries q + 1 points: count points on which all linear
            // forms vanishing on the line vanish is indirect, so check span size
            for line in &lines {
                let mut span = HashSet::new();
                for s in field.elements() {
                    for t in field.elements() {
                        if s == 0 && t == 0 {
                            continue;
                        }
                        let v: Vec<u32> = line
                            .p
                            .iter()
                            .zip(&line.q)
                            .map(|(&a, &b)| field.add(field.mul(s, a), field.mul(t, b)))
                            .collect();
                        let lead = *v.iter().find(|&&c| c != 0).unwrap();
                        let inv = field.inv(lead).unwrap();
                        span.insert(v.iter().map(|&c| field.mul(c, inv)).collect::<Vec<_>>());
                    }
                }
                assert_eq!(span.len() as u64, q + 1);
            }
        }
    }
}

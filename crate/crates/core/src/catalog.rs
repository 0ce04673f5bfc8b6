//! Candidate component codimensions for pairs (or tuples) of forms sharing
//! a common divisor of degree `e`.
//!
//! Incidence count: the divisor ranges over projectivized degree-`e` forms,
//! and divisibility of a degree-`d` form by a fixed degree-`e` form cuts
//! `C(r + d, d) - C(r + d - e, d - e)` conditions.

use serde::{Deserialize, Serialize};

use crate::error::{require, Result};
use crate::exactmath::{form_space_dim, form_space_dim_signed, ExactInt};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDescriptor {
    pub r: u32,
    pub degrees: Vec<u32>,
    pub e: u32,
    pub codim: ExactInt,
}

impl ComponentDescriptor {
    pub fn new(r: u32, degrees: Vec<u32>, e: u32) -> Result<Self> {
        let codim = common_divisor_codim(r, &degrees, e)?;
        Ok(ComponentDescriptor { r, degrees, e, codim })
    }
}

pub fn common_divisor_codim(r: u32, degrees: &[u32], e: u32) -> Result<ExactInt> {
    require(r >= 1, || format!("r = {r} must satisfy r >= 1"))?;
    require(e >= 1, || format!("divisor degree e = {e} must satisfy e >= 1"))?;
    require(degrees.iter().all(|&d| d >= 1), || format!("degrees {degrees:?} must all be >= 1"))?;
    require(degrees.windows(2).all(|w| w[0] <= w[1]), || {
        format!("degrees {degrees:?} must be non-decreasing")
    })?;
    let base = form_space_dim(r, e) - ExactInt::one();
    let fibre: ExactInt = degrees
        .iter()
        .map(|&d| form_space_dim(r, d) - form_space_dim_signed(r, d as i64 - e as i64))
        .sum();
    Ok(fibre - base)
}

/// Which candidate component is larger (has the smaller codimension).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominant {
    Hyperplane,
    Quadric,
    Tie,
}

impl Dominant {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominant::Hyperplane => "hyperplane",
            Dominant::Quadric => "quadric",
            Dominant::Tie => "tie",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricPairRow {
    pub r: u32,
    pub codim_hyperplane: ExactInt,
    pub codim_quadric: ExactInt,
    pub dominant: Dominant,
}

/// Rows `r = 2..=r_max` for a pair of quadrics sharing a hyperplane or a quadric.
pub fn quadric_pair_table(r_max: u32) -> Result<Vec<QuadricPairRow>> {
    require(r_max >= 2, || format!("r_max = {r_max} must satisfy r_max >= 2"))?;
    (2..=r_max)
        .map(|r| {
            let codim_hyperplane = common_divisor_codim(r, &[2, 2], 1)?;
            let codim_quadric = common_divisor_codim(r, &[2, 2], 2)?;
            let dominant = match codim_hyperplane.cmp(&codim_quadric) {
                std::cmp::Ordering::Less => Dominant::Hyperplane,
                std::cmp::Ordering::Equal => Dominant::Tie,
                std::cmp::Ordering::Greater => Dominant::Quadric,
            };
            Ok(QuadricPairRow { r, codim_hyperplane, codim_quadric, dominant })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> ExactInt {
        ExactInt::from(v)
    }

    #[test]
    fn table_values() {
        assert_eq!(common_divisor_codim(3, &[2, 2], 1).unwrap(), n(9));
        assert_eq!(common_divisor_codim(4, &[2, 2], 2).unwrap(), n(14));
        assert_eq!(common_divisor_codim(2, &[2, 2], 1).unwrap(), n(4));
        let rows = quadric_pair_table(4).unwrap();
        let flat: Vec<_> = rows
            .iter()
            .map(|row| (row.r, row.codim_hyperplane.to_i64().unwrap(), row.codim_quadric.to_i64().unwrap()))
            .collect();
        assert_eq!(flat, vec![(2, 4, 5), (3, 9, 9), (4, 16, 14)]);
        assert_eq!(rows[0].dominant, Dominant::Hyperplane);
        assert_eq!(rows[1].dominant, Dominant::Tie);
        assert_eq!(rows[2].dominant, Dominant::Quadric);
    }

    #[test]
    fn closed_forms_and_crossover() {
        for row in quadric_pair_table(12).unwrap() {
            let r = row.r as i64;
            assert_eq!(row.codim_hyperplane, n(r * r));
            assert_eq!(row.codim_quadric, n((r * r + 3 * r) / 2));
            let expected = match r {
                2 => Dominant::Hyperplane,
                3 => Dominant::Tie,
                _ => Dominant::Quadric,
            };
            assert_eq!(row.dominant, expected);
        }
        let r5 = &quadric_pair_table(5).unwrap()[3];
        assert_eq!((r5.codim_hyperplane.clone(), r5.codim_quadric.clone()), (n(25), n(20)));
    }

    #[test]
    fn low_degree_form_must_vanish() {
        // a linear form divisible by a quadric is zero: full C(r+1, 1) conditions
        let c = common_divisor_codim(3, &[1, 2], 2).unwrap();
        let expected = form_space_dim(3, 1) + (form_space_dim(3, 2) - ExactInt::one()) - (form_space_dim(3, 2) - ExactInt::one());
        assert_eq!(c, expected);
        // single form, e = d: divisibility is proportionality
        for r in 1..=5 {
            for d in 1..=4 {
                let c = common_divisor_codim(r, &[d], d).unwrap();
                assert_eq!(c, ExactInt::zero());
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(quadric_pair_table(1).is_err());
        assert!(common_divisor_codim(2, &[2, 1], 1).is_err());
        assert!(common_divisor_codim(2, &[2, 2], 0).is_err());
    }
}

//! Codimension lower bounds for excess loci.
//!
//! [`span_locus_codim_lower`] minimizes a sum of `h_{b, b - i_j + j}(d_{i_j})`
//! terms over strictly increasing index sequences, either with the last
//! index pinned to `k` or merely bounded by it. The remaining operations
//! give the line-locus codimension, its naive `b`-plane generalization and
//! the closing chain bound, and [`theorem_margin_check`] checks that the
//! span bound beats the line locus for every `b >= 2`.

use std::fmt;
use std::ops::RangeInclusive;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::exactmath::{form_space_dim, grassmannian_dim, hilbert_lower_bound_unchecked, ExactInt};

/// `(r, a, d_1 <= ... <= d_k)` with `1 <= k <= r + a - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemInstance {
    r: u32,
    a: u32,
    degrees: Vec<u32>,
}

impl ProblemInstance {
    pub fn new(r: u32, a: u32, degrees: Vec<u32>) -> Result<Self> {
        require(r >= 1, || format!("r = {r} must satisfy r >= 1"))?;
        require(a >= 1, || format!("a = {a} must satisfy a >= 1"))?;
        require(!degrees.is_empty(), || "k >= 1: at least one degree is required".into())?;
        require(degrees.iter().all(|&d| d >= 1), || {
            format!("degrees {degrees:?} must all be >= 1")
        })?;
        require(degrees.windows(2).all(|w| w[0] <= w[1]), || {
            format!("degrees {degrees:?} must be non-decreasing")
        })?;
        let k = degrees.len() as u32;
        require(k < r + a, || {
            format!("k = {k} must satisfy k <= r + a - 1 = {}", r + a - 1)
        })?;
        Ok(ProblemInstance { r, a, degrees })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn k(&self) -> u32 {
        self.degrees.len() as u32
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `d_i` for a 1-based index.
    pub fn degree(&self, i: u32) -> u32 {
        self.degrees[i as usize - 1]
    }

    /// True when `k = r + a - 1`, the shape the line-locus results are stated for.
    pub fn is_full(&self) -> bool {
        self.k() == self.r + self.a - 1
    }

    fn require_full(&self) -> Result<()> {
        require(self.is_full(), || {
            format!("k = {} must equal r + a - 1 = {}", self.k(), self.r + self.a - 1)
        })
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} a={} d=({})", self.r, self.a, self.degrees.iter().join(","))
    }
}

/// Strictly increasing 1-based indices `i_1 < ... < i_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSequence(Vec<u32>);

impl IndexSequence {
    pub fn new(indices: Vec<u32>, k: u32) -> Result<Self> {
        require(indices.iter().all(|&i| (1..=k).contains(&i)), || {
            format!("indices {indices:?} must lie in [1, {k}]")
        })?;
        require(indices.windows(2).all(|w| w[0] < w[1]), || {
            format!("indices {indices:?} must be strictly increasing")
        })?;
        Ok(IndexSequence(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Which index sequences the minimum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundVariant {
    /// `i_1 < ... < i_s = k`
    #[serde(rename = "eq")]
    LastEqualsK,
    /// `i_1 < ... < i_s <= k`
    #[serde(rename = "le")]
    LastAtMostK,
}

impl BoundVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundVariant::LastEqualsK => "eq",
            BoundVariant::LastAtMostK => "le",
        }
    }
}

impl std::str::FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq" => Ok(BoundVariant::LastEqualsK),
            "le" => Ok(BoundVariant::LastAtMostK),
            other => Err(Error::Input(format!("unknown variant {other:?} (expected eq or le)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Minimizer {
    /// Enumerate every admissible sequence.
    #[default]
    Exhaustive,
    /// Layered shortest path over (position, index).
    DynamicProgramming,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub instance: ProblemInstance,
    pub b: u32,
    pub variant: BoundVariant,
    pub lower_bound: ExactInt,
    pub argmin: IndexSequence,
}

/// Lower bound on the codimension of the span-`b` excess locus.
pub fn span_locus_codim_lower(
    instance: &ProblemInstance,
    b: u32,
    variant: BoundVariant,
) -> Result<BoundReport> {
    span_locus_codim_lower_with(instance, b, variant, Minimizer::Exhaustive)
}

pub fn span_locus_codim_lower_with(
    instance: &ProblemInstance,
    b: u32,
    variant: BoundVariant,
    minimizer: Minimizer,
) -> Result<BoundReport> {
    let (r, a, k) = (instance.r, instance.a, instance.k());
    require(b >= 1 && b <= r, || format!("b = {b} must satisfy 1 <= b <= r = {r}"))?;
    let s = r - b + a;
    require(s <= k, || format!("s = r - b + a = {s} must satisfy s <= k = {k}"))?;

    let terms = TermTable::new(instance, b, s);
    let (sum, argmin) = match minimizer {
        Minimizer::Exhaustive => terms.minimize_exhaustive(variant),
        Minimizer::DynamicProgramming => terms.minimize_dp(variant),
    };
    let lower_bound = sum - grassmannian_dim(b, r)?;
    Ok(BoundReport {
        instance: instance.clone(),
        b,
        variant,
        lower_bound,
        argmin: IndexSequence(argmin),
    })
}

/// `term(j, i) = h_{b, b - i + j}(d_i)` for every position `j` and index `i`
/// that can occur in an admissible sequence.
struct TermTable {
    s: u32,
    k: u32,
    cells: Vec<Option<ExactInt>>,
}

impl TermTable {
    fn new(instance: &ProblemInstance, b: u32, s: u32) -> Self {
        let k = instance.k();
        let mut cells = vec![None; (s * k) as usize];
        for j in 1..=s {
            // i_j ranges over [j, k - s + j]
            for i in j..=k - s + j {
                let sub = b + j - i;
                let h = hilbert_lower_bound_unchecked(b, sub, instance.degree(i));
                cells[((j - 1) * k + (i - 1)) as usize] = Some(h);
            }
        }
        TermTable { s, k, cells }
    }

    fn get(&self, j: u32, i: u32) -> &ExactInt {
        self.cells[((j - 1) * self.k + (i - 1)) as usize]
            .as_ref()
            .expect("index outside the admissible band")
    }

    fn sum(&self, seq: &[u32]) -> ExactInt {
        seq.iter().enumerate().map(|(j, &i)| self.get(j as u32 + 1, i)).sum()
    }

    fn minimize_exhaustive(&self, variant: BoundVariant) -> (ExactInt, Vec<u32>) {
        let (s, k) = (self.s as usize, self.k);
        let candidates: Box<dyn Iterator<Item = Vec<u32>>> = match variant {
            BoundVariant::LastEqualsK => Box::new((1..k).combinations(s - 1).map(move |mut c| {
                c.push(k);
                c
            })),
            BoundVariant::LastAtMostK => Box::new((1..=k).combinations(s)),
        };
        let mut best: Option<(ExactInt, Vec<u32>)> = None;
        for seq in candidates {
            let value = self.sum(&seq);
            // strict comparison keeps the lexicographically first minimizer
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((value, seq));
            }
        }
        best.expect("at least one admissible sequence")
    }

    fn minimize_dp(&self, variant: BoundVariant) -> (ExactInt, Vec<u32>) {
        let (s, k) = (self.s, self.k);
        // best[j][i]: minimal partial sum for positions 1..=j with i_j = i
        let mut best: Vec<Vec<Option<(ExactInt, u32)>>> = vec![vec![None; k as usize + 1]; s as usize + 1];
        for i in 1..=k - s + 1 {
            best[1][i as usize] = Some((self.get(1, i).clone(), 0));
        }
        for j in 2..=s {
            for i in j..=k - s + j {
                let prev = (j - 1..i)
                    .filter_map(|p| best[j as usize - 1][p as usize].as_ref().map(|(v, _)| (v, p)))
                    .min_by(|x, y| x.0.cmp(y.0));
                if let Some((v, p)) = prev {
                    best[j as usize][i as usize] = Some((v + self.get(j, i), p));
                }
            }
        }
        let last = match variant {
            BoundVariant::LastEqualsK => k,
            BoundVariant::LastAtMostK => (s..=k)
                .min_by(|&x, &y| {
                    let vx = &best[s as usize][x as usize].as_ref().unwrap().0;
                    let vy = &best[s as usize][y as usize].as_ref().unwrap().0;
                    vx.cmp(vy)
                })
                .unwrap(),
        };
        let value = best[s as usize][last as usize].as_ref().unwrap().0.clone();
        let mut seq = vec![0; s as usize];
        let mut i = last;
        for j in (1..=s).rev() {
            seq[j as usize - 1] = i;
            i = best[j as usize][i as usize].as_ref().unwrap().1;
        }
        (value, seq)
    }
}

/// Codimension of the locus of `r + a - 1` forms vanishing on a common line:
/// `-2(r - 1) + sum (d_i + 1)`.
pub fn line_locus_codim(instance: &ProblemInstance) -> Result<ExactInt> {
    instance.require_full()?;
    Ok(line_codim_unchecked(instance))
}

fn line_codim_unchecked(instance: &ProblemInstance) -> ExactInt {
    let sum: u64 = instance.degrees.iter().map(|&d| d as u64 + 1).sum();
    ExactInt::from(sum) - ExactInt::from(2 * (instance.r as u64 - 1))
}

/// Naive incidence count for tuples vanishing on a common `b`-plane:
/// `-(b + 1)(r - b) + sum C(b + d_i, d_i)`. Diagnostic only; this is
/// containment in a plane, not "span exactly b".
pub fn plane_locus_codim(instance: &ProblemInstance, b: u32) -> Result<ExactInt> {
    let r = instance.r;
    require(b >= 1 && b <= r, || format!("b = {b} must satisfy 1 <= b <= r = {r}"))?;
    let sum: ExactInt = instance.degrees.iter().map(|&d| form_space_dim(b, d)).sum();
    Ok(sum - grassmannian_dim(b, r)?)
}

/// `-2(r - 1) + a(b - 1) + sum (d_j + 1)`, the end of the inequality chain
/// bounding the span-`b` locus from below.
pub fn chain_lower_bound(instance: &ProblemInstance, b: u32) -> Result<ExactInt> {
    instance.require_full()?;
    let r = instance.r;
    require(b >= 2, || format!("b = {b} must satisfy b >= 2"))?;
    require(b <= r, || format!("b = {b} must satisfy b <= r = {r}"))?;
    Ok(chain_unchecked(instance, b))
}

fn chain_unchecked(instance: &ProblemInstance, b: u32) -> ExactInt {
    line_codim_unchecked(instance) + ExactInt::from(instance.a as u64 * (b as u64 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginRow {
    pub b: u32,
    pub bound: ExactInt,
    pub argmin: IndexSequence,
    pub chain: ExactInt,
    pub line: ExactInt,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginReport {
    pub instance: ProblemInstance,
    pub rows: Vec<MarginRow>,
    pub pass: bool,
}

impl MarginReport {
    /// The `b` values whose inequalities failed.
    pub fn witnesses(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().filter(|row| !row.pass).map(|row| row.b)
    }
}

/// Checks `bound >= chain > line` for every `b` in `[2, r]`.
pub fn theorem_margin_check(instance: &ProblemInstance) -> Result<MarginReport> {
    theorem_margin_check_with(instance, Minimizer::Exhaustive)
}

pub fn theorem_margin_check_with(
    instance: &ProblemInstance,
    minimizer: Minimizer,
) -> Result<MarginReport> {
    instance.require_full()?;
    let line = line_codim_unchecked(instance);
    let mut rows = Vec::new();
    for b in 2..=instance.r {
        let report = span_locus_codim_lower_with(instance, b, BoundVariant::LastEqualsK, minimizer)?;
        let chain = chain_unchecked(instance, b);
        let pass = report.lower_bound >= chain && chain > line;
        rows.push(MarginRow {
            b,
            bound: report.lower_bound,
            argmin: report.argmin,
            chain,
            line: line.clone(),
            pass,
        });
    }
    let pass = rows.iter().all(|row| row.pass);
    Ok(MarginReport { instance: instance.clone(), rows, pass })
}

/// Grid of full instances: `r` and `a` ranges, and every non-decreasing
/// tuple of `r + a - 1` degrees drawn from `degree_range`.
#[derive(Clone, Debug)]
pub struct MarginGrid {
    pub r: RangeInclusive<u32>,
    pub a: RangeInclusive<u32>,
    pub degree_range: RangeInclusive<u32>,
}

impl Default for MarginGrid {
    fn default() -> Self {
        MarginGrid { r: 2..=8, a: 1..=3, degree_range: 1..=6 }
    }
}

impl MarginGrid {
    pub fn instances(&self) -> Vec<ProblemInstance> {
        let mut out = Vec::new();
        for r in self.r.clone().filter(|&r| r >= 1) {
            for a in self.a.clone().filter(|&a| a >= 1) {
                let k = (r + a - 1) as usize;
                for degrees in self.degree_range.clone().filter(|&d| d >= 1).combinations_with_replacement(k) {
                    out.push(ProblemInstance { r, a, degrees });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSummary {
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<MarginReport>,
}

impl GridSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs [`theorem_margin_check`] over a grid on `workers` threads. The
/// reports come back in grid order whatever the thread count.
pub fn check_margin_grid(grid: &MarginGrid, workers: usize) -> Result<Vec<MarginReport>> {
    let instances = grid.instances();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Input(e.to_string()))?;
    pool.install(|| {
        instances
            .par_iter()
            .map(theorem_margin_check)
            .collect()
    })
}

pub fn summarize(reports: &[MarginReport]) -> GridSummary {
    GridSummary {
        instances: reports.len(),
        checks: reports.iter().map(|r| r.rows.len()).sum(),
        failures: reports.iter().filter(|r| !r.pass).cloned().collect(),
    }
}

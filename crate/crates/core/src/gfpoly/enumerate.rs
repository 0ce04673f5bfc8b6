//! Exhaustive and sampled enumeration of form tuples over `F_q`.
//!
//! A tuple is addressed by an integer whose base-`q` digits are the
//! concatenated coefficient vectors, first form in the lowest digits. Work
//! is split into fixed-size contiguous index ranges; every range yields
//! partial counts and the sums do not depend on how ranges map to threads.

use std::borrow::Cow;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::excess::{zero_mask, CountLevel, ExcessMethod, ExcessTester, ExtensionSchedule, Verdict};
use super::field::GaloisField;
use super::form::{monomial_count, Form};
use super::points::{rational_lines, Line};
use crate::bounds::{line_locus_codim, ProblemInstance};
use crate::error::{require, Error, Result};
use crate::exactmath::ExactInt;

/// Default cap on `q^N` for exhaustive runs.
pub const DEFAULT_SIZE_GUARD: u128 = 1 << 24;

/// Degrees whose form count is at most this get per-form lookup tables.
const TABLE_LIMIT: u64 = 1 << 16;

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, n: u64 },
}

#[derive(Clone, Debug)]
pub struct LabConfig {
    pub workers: usize,
    pub size_guard: u128,
    pub method: ExcessMethod,
    pub schedule: ExtensionSchedule,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            workers: 1,
            size_guard: DEFAULT_SIZE_GUARD,
            method: ExcessMethod::Auto,
            schedule: ExtensionSchedule::Default,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub q: u32,
    pub r: u32,
    pub a: u32,
    pub degrees: Vec<u32>,
    #[serde(flatten)]
    pub mode: Mode,
    /// `N = sum C(r + d_i, d_i)`
    pub ambient_dim: usize,
    pub count_total: u64,
    pub count_excess: u64,
    pub count_line: u64,
    pub est_codim: Option<f64>,
    pub line_fraction: Option<f64>,
    pub predicted_codim: Option<ExactInt>,
}

impl CountReport {
    pub const CSV_HEADER: [&'static str; 11] = [
        "p",
        "m",
        "r",
        "degrees",
        "N",
        "count_total",
        "count_excess",
        "count_line",
        "est_codim",
        "line_fraction",
        "predicted_codim",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        vec![
            self.p.to_string(),
            self.m.to_string(),
            self.r.to_string(),
            self.degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
            self.ambient_dim.to_string(),
            self.count_total.to_string(),
            self.count_excess.to_string(),
            self.count_line.to_string(),
            opt(self.est_codim),
            opt(self.line_fraction),
            self.predicted_codim.as_ref().map_or(String::new(), ExactInt::to_string),
        ]
    }
}

struct DegreeTable {
    forms: Vec<Form>,
    line_masks: Vec<Vec<u64>>,
    // (bezout, m) -> per-form zero masks
    zero_masks: HashMap<(u64, u32), Vec<Vec<u64>>>,
}

/// Per-tuple classifier for one field and degree sequence, with per-form
/// lookup tables for small degrees. Tuples are addressed by slot indices,
/// where index `i` in slot `s` is `Form::from_index(r, d_s, q, i)`.
pub struct TupleLab<'f> {
    field: &'f GaloisField,
    r: u32,
    degrees: Vec<u32>,
    slot_sizes: Vec<u64>,
    lines: Vec<Line>,
    tester: ExcessTester,
    tables: HashMap<u32, DegreeTable>,
}

#[derive(Clone, Copy, Default)]
struct Counts {
    total: u64,
    excess: u64,
    line: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts { total: self.total + o.total, excess: self.excess + o.excess, line: self.line + o.line }
    }
}

impl<'f> TupleLab<'f> {
    pub fn new(field: &'f GaloisField, r: u32, degrees: &[u32], a: u32, config: &LabConfig) -> Result<Self> {
        let q = field.q() as u64;
        let mut tester = ExcessTester::new(field, r, degrees, a, config.method, config.schedule)?;
        tester.prepare_counting(degrees)?;
        let lines = rational_lines(r, field);
        let slot_sizes: Vec<u64> = degrees
            .iter()
            .map(|&d| {
                q.checked_pow(monomial_count(r as usize + 1, d) as u32).unwrap_or(u64::MAX)
            })
            .collect();
        let mut lab = TupleLab { field, r, degrees: degrees.to_vec(), slot_sizes, lines, tester, tables: HashMap::new() };
        let mut distinct = degrees.to_vec();
        distinct.dedup();
        for d in distinct {
            let count = q.checked_pow(monomial_count(r as usize + 1, d) as u32).unwrap_or(u64::MAX);
            if count <= TABLE_LIMIT {
                let table = lab.build_table(d, count);
                lab.tables.insert(d, table);
            }
        }
        Ok(lab)
    }

    fn build_table(&self, d: u32, count: u64) -> DegreeTable {
        let q = self.field.q();
        let forms: Vec<Form> = (0..count).map(|i| Form::from_index(self.r, d, q, i)).collect();
        let line_masks = forms.iter().map(|f| self.line_mask(f)).collect();
        let mut zero_masks = HashMap::new();
        let bezouts: Vec<u64> = self.tester.count_bezouts().collect();
        for bezout in bezouts {
            for level in self.tester.levels_for(bezout).unwrap_or(&[]) {
                let masks = forms.iter().map(|f| zero_mask(level, f)).collect();
                zero_masks.insert((bezout, level.m), masks);
            }
        }
        DegreeTable { forms, line_masks, zero_masks }
    }

    fn line_mask(&self, form: &Form) -> Vec<u64> {
        let mut mask = vec![0u64; self.lines.len().div_ceil(64).max(1)];
        for (i, line) in self.lines.iter().enumerate() {
            if line.contains_zero_set_of(form, self.field) {
                mask[i / 64] |= 1 << (i % 64);
            }
        }
        mask
    }

    /// Number of forms in each slot, `q^{C(r + d_s, d_s)}`.
    pub fn slot_sizes(&self) -> &[u64] {
        &self.slot_sizes
    }

    pub fn form(&self, slot: usize, index: u64) -> Cow<'_, Form> {
        let d = self.degrees[slot];
        match self.tables.get(&d) {
            Some(t) => Cow::Borrowed(&t.forms[index as usize]),
            None => Cow::Owned(Form::from_index(self.r, d, self.field.q(), index)),
        }
    }

    /// `(excess, on_line)` for one tuple. A common rational line settles
    /// the target-dimension-1 case before the excess test runs.
    pub fn classify(&self, indices: &[u64]) -> Result<(bool, bool)> {
        let forms: Vec<Cow<'_, Form>> = indices.iter().enumerate().map(|(s, &i)| self.form(s, i)).collect();

        let mut acc: Option<Vec<u64>> = None;
        for (slot, f) in forms.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let mask: Cow<'_, [u64]> = match self.tables.get(&self.degrees[slot]) {
                Some(t) => Cow::Borrowed(&t.line_masks[indices[slot] as usize]),
                None => Cow::Owned(self.line_mask(f)),
            };
            acc = Some(match acc {
                None => mask.into_owned(),
                Some(mut a) => {
                    a.iter_mut().zip(mask.iter()).for_each(|(x, y)| *x &= y);
                    a
                }
            });
        }
        let on_line = acc.map_or(!self.lines.is_empty(), |a| a.iter().any(|&w| w != 0));
        if on_line && self.tester.target_dim() == 1 {
            // a common rational line is a positive-dimensional common zero set
            return Ok((true, true));
        }

        let verdict = self.verdict_of(indices, &forms)?;
        Ok((verdict.positive, on_line))
    }

    /// The excess decision alone, without the rational-line shortcut.
    pub fn verdict(&self, indices: &[u64]) -> Result<Verdict> {
        let forms: Vec<Cow<'_, Form>> = indices.iter().enumerate().map(|(s, &i)| self.form(s, i)).collect();
        self.verdict_of(indices, &forms)
    }

    fn verdict_of(&self, indices: &[u64], forms: &[Cow<'_, Form>]) -> Result<Verdict> {
        let nonzero_slots: Vec<usize> = (0..forms.len()).filter(|&s| !forms[s].is_zero()).collect();
        let nonzero: Vec<&Form> = nonzero_slots.iter().map(|&s| forms[s].as_ref()).collect();
        let bezout: u64 = nonzero.iter().map(|f| f.degree() as u64).product();
        self.tester.decide_nonzero(&nonzero, |level: &CountLevel, pos: usize| {
            let slot = nonzero_slots[pos];
            let cached = self
                .tables
                .get(&self.degrees[slot])
                .and_then(|t| t.zero_masks.get(&(bezout, level.m)))
                .map(|masks| &masks[indices[slot] as usize]);
            match cached {
                Some(m) => Cow::Borrowed(m.as_slice()),
                None => Cow::Owned(zero_mask(level, nonzero[pos])),
            }
        })
    }

    fn decode(&self, mut t: u64, out: &mut [u64]) {
        for (slot, &size) in self.slot_sizes.iter().enumerate() {
            out[slot] = t % size;
            t /= size;
        }
    }

    fn advance(&self, indices: &mut [u64]) {
        for (slot, &size) in self.slot_sizes.iter().enumerate() {
            indices[slot] += 1;
            if indices[slot] < size {
                return;
            }
            indices[slot] = 0;
        }
    }

    fn count_range(&self, start: u64, end: u64) -> Result<Counts> {
        let mut indices = vec![0; self.degrees.len()];
        self.decode(start, &mut indices);
        let mut c = Counts::default();
        for _ in start..end {
            let (excess, line) = self.classify(&indices)?;
            c.total += 1;
            c.excess += excess as u64;
            c.line += line as u64;
            self.advance(&mut indices);
        }
        Ok(c)
    }

    fn count_samples(&self, seed: u64, start: u64, end: u64) -> Result<Counts> {
        let mut indices = vec![0; self.degrees.len()];
        let mut c = Counts::default();
        for i in start..end {
            sample_indices(seed, i, &self.slot_sizes, &mut indices);
            let (excess, line) = self.classify(&indices)?;
            c.total += 1;
            c.excess += excess as u64;
            c.line += line as u64;
        }
        Ok(c)
    }
}

/// Slot indices of sample `i`: a pure function of `(seed, i, slot sizes)`.
fn sample_indices(seed: u64, i: u64, slot_sizes: &[u64], out: &mut [u64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    for (o, &size) in out.iter_mut().zip(slot_sizes) {
        *o = rng.gen_range(0..size);
    }
}

fn validate(r: u32, degrees: &[u32], a: u32) -> Result<()> {
    require(r >= 1, || format!("r = {r} must satisfy r >= 1"))?;
    require(a >= 1, || format!("a = {a} must satisfy a >= 1"))?;
    require(!degrees.is_empty(), || "at least one degree is required".into())?;
    require(degrees.iter().all(|&d| d >= 1), || format!("degrees {degrees:?} must all be >= 1"))?;
    require(degrees.windows(2).all(|w| w[0] <= w[1]), || {
        format!("degrees {degrees:?} must be non-decreasing")
    })
}

/// Counts tuples in the excess locus and on a common rational line.
pub fn enumerate_locus(
    r: u32,
    degrees: &[u32],
    a: u32,
    field: &GaloisField,
    mode: Mode,
    config: &LabConfig,
) -> Result<CountReport> {
    validate(r, degrees, a)?;
    let q = field.q() as u64;
    let ambient_dim: usize = degrees.iter().map(|&d| monomial_count(r as usize + 1, d)).sum();
    let space = (q as u128).checked_pow(ambient_dim as u32).unwrap_or(u128::MAX);
    if mode == Mode::Exhaustive && space > config.size_guard {
        return Err(Error::SizeGuard { q, n: ambient_dim, total: space, guard: config.size_guard });
    }
    if let Mode::Sampled { n, .. } = mode {
        require(n >= 1, || "sample size n must be >= 1".into())?;
    }

    let lab = TupleLab::new(field, r, degrees, a, config)?;
    let total = match mode {
        Mode::Exhaustive => space as u64,
        Mode::Sampled { n, .. } => n,
    };
    let chunks = total.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::Input(e.to_string()))?;
    let partials: Vec<Counts> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let (start, end) = (c * CHUNK, ((c + 1) * CHUNK).min(total));
                match mode {
                    Mode::Exhaustive => lab.count_range(start, end),
                    Mode::Sampled { seed, .. } => lab.count_samples(seed, start, end),
                }
            })
            .collect::<Result<_>>()
    })?;
    let counts = partials.into_iter().fold(Counts::default(), |a, b| a + b);

    let est_codim = (counts.excess > 0).then(|| {
        let ln_q = (q as f64).ln();
        match mode {
            Mode::Exhaustive => ambient_dim as f64 - (counts.excess as f64).ln() / ln_q,
            Mode::Sampled { .. } => ((counts.total as f64).ln() - (counts.excess as f64).ln()) / ln_q,
        }
    });
    let line_fraction = (counts.excess > 0).then(|| counts.line as f64 / counts.excess as f64);
    let predicted_codim = ProblemInstance::new(r, a, degrees.to_vec())
        .ok()
        .filter(ProblemInstance::is_full)
        .and_then(|inst| line_locus_codim(&inst).ok());

    Ok(CountReport {
        p: field.p(),
        m: field.m(),
        modulus: field.modulus().to_vec(),
        q: field.q(),
        r,
        a,
        degrees: degrees.to_vec(),
        mode,
        ambient_dim,
        count_total: counts.total,
        count_excess: counts.excess,
        count_line: counts.line,
        est_codim,
        line_fraction,
        predicted_codim,
    })
}

/// One report per field, each carrying the predicted line-locus codimension.
pub fn estimate_codim_sweep(
    r: u32,
    degrees: &[u32],
    a: u32,
    fields: &[GaloisField],
    mode: Mode,
    config: &LabConfig,
) -> Result<Vec<CountReport>> {
    fields.iter().map(|f| enumerate_locus(r, degrees, a, f, mode, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(r: u32, degrees: &[u32], q: u64, config: &LabConfig) -> CountReport {
        let field = GaloisField::of_order(q).unwrap();
        enumerate_locus(r, degrees, 1, &field, Mode::Exhaustive, config).unwrap()
    }

    #[test]
    fn linear_pairs_over_f2() {
        let rep = run(2, &[1, 1], 2, &LabConfig::default());
        assert_eq!(rep.count_total, 64);
        assert_eq!(rep.count_excess, 22);
        assert_eq!(rep.predicted_codim, Some(ExactInt::from(2)));
        // every rank <= 1 pair of linear forms vanishes on a rational line
        assert_eq!(rep.count_line, 22);
    }

    #[test]
    fn counting_and_resultant_routes_agree_on_linear_pairs() {
        for q in [2, 3] {
            let a = run(2, &[1, 1], q, &LabConfig { method: ExcessMethod::Count, ..Default::default() });
            let b = run(2, &[1, 1], q, &LabConfig { method: ExcessMethod::Resultant, ..Default::default() });
            assert_eq!(a.count_excess, b.count_excess);
        }
    }

    #[test]
    fn size_guard_refuses() {
        let field = GaloisField::of_order(2).unwrap();
        let config = LabConfig { size_guard: 32, ..Default::default() };
        let err = enumerate_locus(2, &[1, 1], 1, &field, Mode::Exhaustive, &config).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { total: 64, .. }), "{err}");
    }

    #[test]
    fn sampled_is_deterministic_and_worker_independent() {
        let field = GaloisField::of_order(5).unwrap();
        let mode = Mode::Sampled { seed: 7, n: 5000 };
        let one = enumerate_locus(2, &[1, 1], 1, &field, mode, &LabConfig::default()).unwrap();
        let three = enumerate_locus(2, &[1, 1], 1, &field, mode, &LabConfig { workers: 3, ..Default::default() }).unwrap();
        assert_eq!(one, three);
        assert_eq!(one.count_total, 5000);
        let other = enumerate_locus(2, &[1, 1], 1, &field, Mode::Sampled { seed: 8, n: 5000 }, &LabConfig::default()).unwrap();
        assert_ne!(one.count_excess, 0);
        assert_eq!(other.count_total, 5000);
    }

    #[test]
    fn line_count_never_exceeds_excess() {
        for (r, degrees, q) in [(2, vec![1, 2], 2), (3, vec![1, 1, 1], 2), (2, vec![2, 2], 2)] {
            let rep = run(r, &degrees, q, &LabConfig::default());
            assert!(rep.count_line <= rep.count_excess && rep.count_excess <= rep.count_total);
        }
    }

    #[test]
    fn rejects_unsorted_degrees() {
        let field = GaloisField::of_order(2).unwrap();
        assert!(enumerate_locus(2, &[2, 1], 1, &field, Mode::Exhaustive, &LabConfig::default()).is_err());
    }
}

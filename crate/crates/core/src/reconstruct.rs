//! Filter reconstruction from replayed keystream: accumulates
//! (10-bit input, output bit) observations into a partial truth table,
//! interpolates the exact ANF once every input has been seen, and runs
//! the seeded experiment measuring how much keystream that takes.

use std::collections::BTreeSet;
use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::boolfn::{AnfPolynomial, TruthTable};
use crate::lili::{self, GeneratorConfig, GeneratorError, GeneratorState, KeyMaterial};

/// Filter input space: 10 variables, 1024 words.
pub const FILTER_VARIABLES: usize = 10;
pub const WORD_SPACE: usize = 1 << FILTER_VARIABLES;

/// Per-trial keystream cap for the coverage experiment.
pub const TRIAL_BUDGET_CAP: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("underdetermined: {} of {WORD_SPACE} filter inputs unobserved", missing.len())]
    Underdetermined {
        missing: Vec<u16>,
        distinct_seen: u32,
    },
    #[error("conflicting observations for {} filter inputs", words.len())]
    Conflicted { words: Vec<u16> },
    #[error("observation word {0} exceeds the 10-bit input space")]
    WordOutOfRange(u32),
    #[error("observation file syntax error on line {0}")]
    ObservationSyntax(usize),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// Replayed (10-bit filter input, keystream bit) pairs with a provenance
/// tag for the key they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationSet {
    pairs: Vec<(u16, u8)>,
    key_id: String,
}

impl ObservationSet {
    pub fn new(key_id: impl Into<String>) -> Self {
        Self {
            pairs: Vec::new(),
            key_id: key_id.into(),
        }
    }

    pub fn push(&mut self, word: u16, bit: u8) {
        assert!((word as usize) < WORD_SPACE, "word exceeds 10 bits");
        self.pairs.push((word, bit & 1));
    }

    pub fn pairs(&self) -> &[(u16, u8)] {
        &self.pairs
    }

    pub fn key_id(&self) -> &str {
        &self.key_id
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// One "wwwwwwwwww b" pair per line: the 10-bit word in binary with
    /// x1 rightmost, then the output bit.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.pairs.len() * 13);
        for &(word, bit) in &self.pairs {
            out.push_str(&format!("{word:010b} {bit}\n"));
        }
        out
    }

    pub fn parse_text(key_id: impl Into<String>, text: &str) -> Result<Self, ReconstructError> {
        let mut set = Self::new(key_id);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word_str, bit_str) = line
                .split_once(' ')
                .ok_or(ReconstructError::ObservationSyntax(lineno + 1))?;
            let word = u32::from_str_radix(word_str.trim(), 2)
                .map_err(|_| ReconstructError::ObservationSyntax(lineno + 1))?;
            if word as usize >= WORD_SPACE {
                return Err(ReconstructError::WordOutOfRange(word));
            }
            let bit = match bit_str.trim() {
                "0" => 0,
                "1" => 1,
                _ => return Err(ReconstructError::ObservationSyntax(lineno + 1)),
            };
            set.push(word as u16, bit);
        }
        Ok(set)
    }
}

/// Coverage bookkeeping over the 1024-word input space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub distinct_inputs_seen: u32,
    /// 1-based position in the observation stream at which the last of
    /// the 1024 inputs appeared, if coverage completed.
    pub first_full_coverage_index: Option<u64>,
    /// Inputs observed with contradictory output bits, ascending.
    pub conflicts: Vec<u16>,
}

impl CoverageReport {
    pub fn is_complete(&self) -> bool {
        self.distinct_inputs_seen as usize == WORD_SPACE
    }
}

/// Streaming accumulator: partial truth table plus coverage/conflict state.
#[derive(Debug, Clone)]
pub struct Accumulator {
    table: TruthTable,
    conflicts: BTreeSet<u16>,
    first_full: Option<u64>,
    consumed: u64,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Self {
            table: TruthTable::empty(FILTER_VARIABLES).expect("10 variables is in range"),
            conflicts: BTreeSet::new(),
            first_full: None,
            consumed: 0,
        }
    }

    /// Records one observation. A repeat with the same bit is idempotent;
    /// a repeat with a differing bit is recorded as a conflict (the first
    /// value stays in the table).
    pub fn ingest(&mut self, word: u16, bit: u8) {
        assert!((word as usize) < WORD_SPACE, "word exceeds 10 bits");
        self.consumed += 1;
        match self.table.get(word as usize) {
            None => {
                self.table.set(word as usize, bit & 1);
                if self.table.defined_count() == WORD_SPACE && self.first_full.is_none() {
                    self.first_full = Some(self.consumed);
                }
            }
            Some(prev) => {
                if prev != bit & 1 {
                    self.conflicts.insert(word);
                }
            }
        }
    }

    pub fn ingest_set(&mut self, obs: &ObservationSet) {
        for &(word, bit) in obs.pairs() {
            self.ingest(word, bit);
        }
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn observations_consumed(&self) -> u64 {
        self.consumed
    }

    pub fn report(&self) -> CoverageReport {
        CoverageReport {
            distinct_inputs_seen: self.table.defined_count() as u32,
            first_full_coverage_index: self.first_full,
            conflicts: self.conflicts.iter().copied().collect(),
        }
    }

    pub fn interpolate(&self) -> Result<AnfPolynomial, ReconstructError> {
        interpolate(&self.table, &self.report().conflicts)
    }
}

/// Folds a whole observation set into a partial table plus its report.
pub fn accumulate(obs: &ObservationSet) -> (TruthTable, CoverageReport) {
    let mut acc = Accumulator::new();
    acc.ingest_set(obs);
    let report = acc.report();
    (acc.table, report)
}

/// Moebius interpolation of a fully covered, conflict-free table. The
/// recovered ANF is exact, not approximate.
pub fn interpolate(
    table: &TruthTable,
    conflicts: &[u16],
) -> Result<AnfPolynomial, ReconstructError> {
    if !conflicts.is_empty() {
        return Err(ReconstructError::Conflicted {
            words: conflicts.to_vec(),
        });
    }
    if !table.is_complete() {
        let missing: Vec<u16> = table.undefined_indices().iter().map(|&i| i as u16).collect();
        let distinct_seen = (WORD_SPACE - missing.len()) as u32;
        return Err(ReconstructError::Underdetermined {
            missing,
            distinct_seen,
        });
    }
    table
        .to_anf()
        .map_err(|_| ReconstructError::Conflicted { words: Vec::new() })
}

/// Outcome of a successful end-to-end reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub filter: AnfPolynomial,
    pub coverage: CoverageReport,
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "coverage: {}/{}",
            self.coverage.distinct_inputs_seen, WORD_SPACE
        )?;
        match self.coverage.first_full_coverage_index {
            Some(i) => writeln!(f, "first-coverage-index: {i}")?,
            None => writeln!(f, "first-coverage-index: -")?,
        }
        writeln!(f, "conflicts: {}", self.coverage.conflicts.len())?;
        writeln!(f, "terms: {}", self.filter.term_count())?;
        writeln!(f, "degree: {}", self.filter.degree())?;
        writeln!(f, "anf: {}", self.filter)
    }
}

/// replay -> accumulate -> interpolate under a known key. Succeeds iff
/// `budget` keystream bits reach full input coverage.
pub fn end_to_end_attack(
    key: &KeyMaterial,
    budget: u64,
    config: &GeneratorConfig,
) -> Result<AttackReport, ReconstructError> {
    let obs = lili::replay(key, budget, config)?;
    let mut acc = Accumulator::new();
    acc.ingest_set(&obs);
    let filter = acc.interpolate()?;
    Ok(AttackReport {
        filter,
        coverage: acc.report(),
    })
}

/// One trial of the coverage experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub trial: u32,
    pub key_hex: String,
    /// None when the 2^16-bit budget cap was exhausted before coverage.
    pub first_full_coverage_index: Option<u64>,
}

/// Distribution summary over seeded random-key trials.
#[derive(Debug, Clone, PartialEq)]
pub struct MinBitsSummary {
    pub trials: u32,
    pub rng_seed: u64,
    pub budget_cap: u64,
    pub results: Vec<TrialResult>,
    pub completed: u32,
    pub budget_exceeded: u32,
    pub min: Option<u64>,
    pub median: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<u64>,
    /// Fraction of all trials with first coverage inside [2^12, 2^13].
    pub fraction_in_claimed_band: f64,
}

impl MinBitsSummary {
    pub fn render(&self) -> String {
        let fmt_u = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
        let fmt_f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}"));
        format!(
            "trials: {}\nseed: {}\nbudget-cap: {}\ncompleted: {}\nbudget-exceeded: {}\n\
             min: {}\nmedian: {}\nmean: {}\nmax: {}\nfraction-in-band[4096,8192]: {:.3}\n",
            self.trials,
            self.rng_seed,
            self.budget_cap,
            self.completed,
            self.budget_exceeded,
            fmt_u(self.min),
            fmt_f(self.median),
            fmt_f(self.mean),
            fmt_u(self.max),
            self.fraction_in_claimed_band,
        )
    }
}

/// Draws a random key that loads cleanly under `config`.
fn random_valid_key(rng: &mut ChaCha8Rng, config: &GeneratorConfig) -> KeyMaterial {
    loop {
        let mut bytes = [0u8; 16];
        rng.fill_bytes(&mut bytes);
        let key = KeyMaterial::from_bytes(bytes);
        if GeneratorState::load(config.clone(), &key).is_ok() {
            return key;
        }
    }
}

/// For each trial: draw a random valid key, replay keystream until the
/// full 1024-word input space has been observed (or the budget cap is
/// hit), and record the index. Deterministic for a fixed seed.
pub fn min_bits_experiment(
    trials: u32,
    rng_seed: u64,
    config: &GeneratorConfig,
) -> Result<MinBitsSummary, ReconstructError> {
    assert!(trials >= 1, "at least one trial required");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut results = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let key = random_valid_key(&mut rng, config);
        let mut g = GeneratorState::load(config.clone(), &key)?;
        let mut acc = Accumulator::new();
        let mut first_full = None;
        for _ in 0..TRIAL_BUDGET_CAP {
            let r = g.next_record()?;
            acc.ingest(r.filter_input, r.bit);
            if let Some(i) = acc.report().first_full_coverage_index {
                first_full = Some(i);
                break;
            }
        }
        results.push(TrialResult {
            trial,
            key_hex: key.to_hex(),
            first_full_coverage_index: first_full,
        });
    }

    let mut completed: Vec<u64> = results
        .iter()
        .filter_map(|r| r.first_full_coverage_index)
        .collect();
    completed.sort_unstable();
    let in_band = completed
        .iter()
        .filter(|&&v| (4096..=8192).contains(&v))
        .count();
    let median = if completed.is_empty() {
        None
    } else {
        let k = completed.len();
        Some(if k % 2 == 1 {
            completed[k / 2] as f64
        } else {
            (completed[k / 2 - 1] + completed[k / 2]) as f64 / 2.0
        })
    };
    let mean = if completed.is_empty() {
        None
    } else {
        Some(completed.iter().sum::<u64>() as f64 / completed.len() as f64)
    };
    Ok(MinBitsSummary {
        trials,
        rng_seed,
        budget_cap: TRIAL_BUDGET_CAP,
        completed: completed.len() as u32,
        budget_exceeded: trials - completed.len() as u32,
        min: completed.first().copied(),
        median,
        mean,
        max: completed.last().copied(),
        fraction_in_claimed_band: in_band as f64 / trials as f64,
        results,
    })
}

/// Expected draws to cover n cells under uniform i.i.d. sampling:
/// n * H_n. A sanity reference for the experiment, not an assertion
/// about the LFSR-driven sampler.
pub fn uniform_coupon_collector_expectation(n: u64) -> f64 {
    let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    n as f64 * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lili::lili128_filter;

    #[test]
    fn empty_observations_zero_coverage() {
        let obs = ObservationSet::new("none");
        let (_, report) = accumulate(&obs);
        assert_eq!(report.distinct_inputs_seen, 0);
        assert_eq!(report.first_full_coverage_index, None);
        assert!(report.conflicts.is_empty());
    }

    #[test]
    fn full_enumeration_of_zero_function() {
        let mut obs = ObservationSet::new("enum");
        for w in 0..WORD_SPACE as u16 {
            obs.push(w, 0);
        }
        let (table, report) = accumulate(&obs);
        assert!(report.is_complete());
        assert_eq!(report.first_full_coverage_index, Some(WORD_SPACE as u64));
        assert_eq!(table.weight(), 0);
        let anf = interpolate(&table, &report.conflicts).unwrap();
        assert!(anf.is_zero());
    }

    #[test]
    fn repeat_is_idempotent_conflict_is_data() {
        let mut acc = Accumulator::new();
        acc.ingest(5, 1);
        acc.ingest(5, 1);
        assert!(acc.report().conflicts.is_empty());
        acc.ingest(5, 0);
        assert_eq!(acc.report().conflicts, vec![5]);
        // first value stays
        assert_eq!(acc.table().get(5), Some(1));
    }

    #[test]
    fn interpolate_reports_missing_words() {
        let f = lili128_filter();
        let full = f.to_truth_table().unwrap();
        let mut t = TruthTable::empty(FILTER_VARIABLES).unwrap();
        for i in 0..WORD_SPACE {
            if i != 700 {
                t.set(i, full.get(i).unwrap());
            }
        }
        match interpolate(&t, &[]) {
            Err(ReconstructError::Underdetermined {
                missing,
                distinct_seen,
            }) => {
                assert_eq!(missing, vec![700]);
                assert_eq!(distinct_seen, 1023);
            }
            other => panic!("expected Underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn interpolate_rejects_conflicts() {
        let t = TruthTable::empty(FILTER_VARIABLES).unwrap();
        assert!(matches!(
            interpolate(&t, &[3]),
            Err(ReconstructError::Conflicted { .. })
        ));
    }

    #[test]
    fn interpolate_recovers_filter_from_its_table() {
        let f = lili128_filter();
        let t = f.to_truth_table().unwrap();
        let recovered = interpolate(&t, &[]).unwrap();
        assert_eq!(recovered, f);
    }

    #[test]
    fn coverage_is_monotone() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let obs = lili::replay(&key, 4096, &GeneratorConfig::lili128()).unwrap();
        let mut acc = Accumulator::new();
        let mut prev = 0;
        for &(w, b) in obs.pairs() {
            acc.ingest(w, b);
            let seen = acc.report().distinct_inputs_seen;
            assert!(seen >= prev);
            prev = seen;
        }
    }

    #[test]
    fn replay_reaches_coverage_inside_the_claimed_band() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let obs = lili::replay(&key, 1 << 13, &GeneratorConfig::lili128()).unwrap();
        let (_, report) = accumulate(&obs);
        assert!(report.is_complete());
        let index = report.first_full_coverage_index.unwrap();
        assert!(
            (4096..=8192).contains(&index),
            "coverage index {index} outside [2^12, 2^13]"
        );
        assert!(report.conflicts.is_empty());
    }

    #[test]
    fn observation_text_round_trip() {
        let mut obs = ObservationSet::new("fixture");
        obs.push(693, 1);
        obs.push(0, 0);
        obs.push(1023, 1);
        let text = obs.to_text();
        assert!(text.starts_with("1010110101 1\n"));
        let parsed = ObservationSet::parse_text("fixture", &text).unwrap();
        assert_eq!(parsed, obs);

        assert!(matches!(
            ObservationSet::parse_text("x", "10201 1\n"),
            Err(ReconstructError::ObservationSyntax(1))
        ));
        assert!(matches!(
            ObservationSet::parse_text("x", "11111111111 1\n"),
            Err(ReconstructError::WordOutOfRange(2047))
        ));
    }

    #[test]
    fn coupon_collector_reference() {
        let e = uniform_coupon_collector_expectation(1024);
        assert!((e - 7689.0).abs() < 1.0, "H-sum expectation {e}");
    }
}

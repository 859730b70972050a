//! Dataset statistics, error-pair coverage, and error-frequency sweeps.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::confusion::ConfusionSet;
use crate::corrector::{predict_dataset, Corrector};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, EvalReport};
use crate::rng::derive_seed;
use crate::sentence::{CleanSentence, ParallelSentence};
use crate::synth::{build_dataset, CorruptionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DatasetStats {
    pub num_sentences: usize,
    pub num_errors: usize,
    /// Distinct (correct, wrong) pairs realized across all errors.
    pub num_error_pair_types: usize,
}

pub fn dataset_stats(dataset: &[ParallelSentence]) -> DatasetStats {
    let mut num_errors = 0;
    let mut types: BTreeSet<(char, char)> = BTreeSet::new();
    for s in dataset {
        num_errors += s.errors.len();
        types.extend(s.realized_pairs());
    }
    DatasetStats {
        num_sentences: dataset.len(),
        num_errors,
        num_error_pair_types: types.len(),
    }
}

/// How much of a test set's error pairs a reference dataset realizes, at both
/// the distinct-pair (type) and per-occurrence (token) granularity. Type
/// coverage is the headline figure; both are reported because either can be
/// the larger one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub test_pair_types: usize,
    pub covered_pair_types: usize,
    pub type_coverage_pct: f64,
    /// True when the test set has no distinct pairs at all, which makes the
    /// 100.0 above vacuous.
    pub type_vacuous: bool,
    pub test_pair_tokens: usize,
    pub covered_pair_tokens: usize,
    pub token_coverage_pct: f64,
    pub token_vacuous: bool,
}

fn pct(covered: usize, total: usize) -> (f64, bool) {
    if total == 0 {
        (100.0, true)
    } else {
        (100.0 * covered as f64 / total as f64, false)
    }
}

pub fn coverage(test: &[ParallelSentence], reference: &[ParallelSentence]) -> CoverageReport {
    let reference_pairs: BTreeSet<(char, char)> = reference
        .iter()
        .flat_map(ParallelSentence::realized_pairs)
        .collect();

    let mut test_types: BTreeSet<(char, char)> = BTreeSet::new();
    let mut test_tokens = 0usize;
    let mut covered_tokens = 0usize;
    for s in test {
        for pair in s.realized_pairs() {
            test_types.insert(pair);
            test_tokens += 1;
            if reference_pairs.contains(&pair) {
                covered_tokens += 1;
            }
        }
    }
    let covered_types = test_types
        .iter()
        .filter(|p| reference_pairs.contains(*p))
        .count();

    let (type_coverage_pct, type_vacuous) = pct(covered_types, test_types.len());
    let (token_coverage_pct, token_vacuous) = pct(covered_tokens, test_tokens);
    CoverageReport {
        test_pair_types: test_types.len(),
        covered_pair_types: covered_types,
        type_coverage_pct,
        type_vacuous,
        test_pair_tokens: test_tokens,
        covered_pair_tokens: covered_tokens,
        token_coverage_pct,
        token_vacuous,
    }
}

/// Corrupts the same pool once per error frequency, runs the corrector, and
/// evaluates. Every p_e draws from its own substream of `seed`, so a row
/// depends only on (pool, confusion, corrector, seed, p_e), not on the rest
/// of the list.
pub fn sweep(
    pool: &[CleanSentence],
    confusion: &ConfusionSet,
    pe_list: &[f64],
    corrector: &dyn Corrector,
    seed: u64,
) -> Result<Vec<(f64, EvalReport)>> {
    if pe_list.is_empty() {
        return Err(Error::Empty("sweep needs at least one p_e".into()));
    }
    for &p_e in pe_list {
        if !(p_e > 0.0 && p_e <= 1.0) {
            return Err(Error::Invalid(format!("sweep p_e must be in (0,1], got {p_e}")));
        }
    }
    let mut rows = Vec::with_capacity(pe_list.len());
    for &p_e in pe_list {
        let point_seed = derive_seed(seed, &format!("sweep/{:016x}", p_e.to_bits()));
        let cfg = CorruptionConfig::new(p_e, point_seed)?;
        let dataset = build_dataset(pool, confusion, &cfg);
        let instances = predict_dataset(corrector, &dataset);
        let report = evaluate(&instances)
            .map_err(|e| Error::Inconsistent(format!("sweep at p_e={p_e}: {e}")))?;
        rows.push((p_e, report));
    }
    Ok(rows)
}

/// One CSV row per p_e and metric block, in the report's fixed row order.
pub fn sweep_csv(rows: &[(f64, EvalReport)]) -> String {
    let mut out = String::from("p_e,level,task,accuracy,precision,recall,f1,tp,fp,fn\n");
    for (p_e, report) in rows {
        for (level, task, b) in report.rows() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                p_e,
                level,
                task,
                b.accuracy,
                b.precision,
                b.recall,
                b.f1,
                b.counts.tp,
                b.counts.fp,
                b.counts.fn_
            ));
        }
    }
    out
}

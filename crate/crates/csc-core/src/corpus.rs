//! Clean-corpus intake and deterministic train/valid/test partitioning.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sentence::CleanSentence;

/// What happened to the input lines during [`load_corpus`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub kept: usize,
    pub dropped_empty: usize,
    pub dropped_short: usize,
    pub dropped_long: usize,
    /// Lines containing a tab, which the TSV interchange format cannot carry.
    pub dropped_tab: usize,
}

impl LoadReport {
    pub fn dropped(&self) -> usize {
        self.dropped_empty + self.dropped_short + self.dropped_long + self.dropped_tab
    }
}

/// Loads one sentence per line, trimming surrounding whitespace and dropping
/// empty lines and lines outside `[min_len, max_len]` characters.
///
/// Ids are the zero-padded 1-based line numbers of the input document, so a
/// sentence can always be traced back to its source line.
pub fn load_corpus(bytes: &[u8], min_len: usize, max_len: usize) -> Result<(Vec<CleanSentence>, LoadReport)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Utf8 {
        offset: e.valid_up_to(),
    })?;
    let mut sentences = Vec::new();
    let mut report = LoadReport::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            report.dropped_empty += 1;
            continue;
        }
        if line.contains('\t') {
            report.dropped_tab += 1;
            continue;
        }
        let len = line.chars().count();
        if len < min_len {
            report.dropped_short += 1;
            continue;
        }
        if len > max_len {
            report.dropped_long += 1;
            continue;
        }
        report.kept += 1;
        sentences.push(CleanSentence::new(format!("{:08}", idx + 1), line));
    }
    Ok((sentences, report))
}

/// Disjoint, exhaustive train/valid/test pools.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub train: Vec<CleanSentence>,
    pub valid: Vec<CleanSentence>,
    pub test: Vec<CleanSentence>,
}

/// Splits the corpus into train/valid/test pools with a seeded shuffle.
///
/// Membership is decided by the shuffle; within each pool sentences keep
/// their original corpus order.
pub fn partition_corpus(
    sentences: Vec<CleanSentence>,
    n_valid: usize,
    n_test: usize,
    seed: u64,
) -> Result<Partition> {
    let n = sentences.len();
    if n_valid + n_test > n {
        return Err(Error::Invalid(format!(
            "cannot draw {n_valid} validation + {n_test} test sentences from a corpus of {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut substream(seed, "partition"));

    let mut is_valid = vec![false; n];
    let mut is_test = vec![false; n];
    for &i in order.iter().take(n_valid) {
        is_valid[i] = true;
    }
    for &i in order.iter().skip(n_valid).take(n_test) {
        is_test[i] = true;
    }

    let mut partition = Partition {
        train: Vec::with_capacity(n - n_valid - n_test),
        valid: Vec::with_capacity(n_valid),
        test: Vec::with_capacity(n_test),
    };
    for (i, s) in sentences.into_iter().enumerate() {
        if is_valid[i] {
            partition.valid.push(s);
        } else if is_test[i] {
            partition.test.push(s);
        } else {
            partition.train.push(s);
        }
    }
    Ok(partition)
}

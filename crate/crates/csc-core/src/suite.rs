//! Builds the full benchmark suite: a training set, a validation set, and
//! the nine test sets, each a named dataset with its own derived seed.
//!
//! Dataset order and seeds are fixed functions of the master seed, so the
//! whole suite is reproducible from (corpus, confusion set, config) alone.

use rand::seq::SliceRandom;

use crate::confusion::{ConfusionSet, SplitResult};
use crate::corpus::Partition;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};
use crate::sentence::{CleanSentence, ParallelSentence};
use crate::synth::{
    build_correct_dataset, build_dataset, build_scontext, CorruptionConfig, ScontextReport,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub master_seed: u64,
    /// Substitution probability for every corrupted set except UnseenK and
    /// the Probs series.
    pub p_e: f64,
    /// Higher rate for UnseenK so the rarer held-out keys still produce
    /// enough errors to measure.
    pub p_e_unseen_k: f64,
    /// One Probs dataset per entry.
    pub probs: Vec<f64>,
    /// Trainset sentences sampled for the SContext swap.
    pub scontext_sample: usize,
    /// Pairs sampled from the realized training errors for SError, when no
    /// explicit seen-pair set is given.
    pub seen_pairs: usize,
}

impl SuiteConfig {
    pub const DEFAULT_P_E: f64 = 0.05;
    pub const DEFAULT_P_E_UNSEEN_K: f64 = 0.15;
    pub const DEFAULT_PROBS: [f64; 7] = [0.01, 0.02, 0.05, 0.10, 0.15, 0.20, 0.30];
    pub const DEFAULT_SCONTEXT_SAMPLE: usize = 5000;
    pub const DEFAULT_SEEN_PAIRS: usize = 5000;

    pub fn new(master_seed: u64) -> Self {
        SuiteConfig {
            master_seed,
            p_e: Self::DEFAULT_P_E,
            p_e_unseen_k: Self::DEFAULT_P_E_UNSEEN_K,
            probs: Self::DEFAULT_PROBS.to_vec(),
            scontext_sample: Self::DEFAULT_SCONTEXT_SAMPLE,
            seen_pairs: Self::DEFAULT_SEEN_PAIRS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_e", self.p_e), ("p_e_unseen_k", self.p_e_unseen_k)] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Invalid(format!("{name} must be in (0,1], got {p}")));
            }
        }
        if self.probs.is_empty() {
            return Err(Error::Invalid("probs list must not be empty".into()));
        }
        for &p in &self.probs {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Invalid(format!("probs entry must be in (0,1], got {p}")));
            }
        }
        if self.scontext_sample == 0 {
            return Err(Error::Invalid("scontext_sample must be at least 1".into()));
        }
        if self.seen_pairs == 0 {
            return Err(Error::Invalid("seen_pairs must be at least 1".into()));
        }
        Ok(())
    }
}

/// One named dataset of the suite, with enough provenance to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltDataset {
    pub name: String,
    /// Which confusion subset produced it; informational.
    pub confusion: String,
    /// Substitution probability; 0.0 for the uncorrupted sets.
    pub p_e: f64,
    /// Per-dataset seed derived from the master seed and the dataset name.
    pub seed: u64,
    pub sentences: Vec<ParallelSentence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    /// Datasets in a fixed order: Trainset, Validset, Regular, the Probs
    /// series, Phonetics, Graphics, SError, SContext, UnseenK, UnseenV,
    /// Correct.
    pub datasets: Vec<BuiltDataset>,
    /// The seen-pair set SError was built from (extracted or supplied).
    pub s_seen: ConfusionSet,
    pub scontext: ScontextReport,
}

impl Suite {
    pub fn dataset(&self, name: &str) -> Option<&BuiltDataset> {
        self.datasets.iter().find(|d| d.name == name)
    }
}

fn require_nonempty(set: &ConfusionSet, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Empty(format!("{what} confusion set is empty")));
    }
    Ok(())
}

/// Uniform sample of `n` sentences without replacement, kept in input order.
fn sample_sentences(
    dataset: &[ParallelSentence],
    n: usize,
    master_seed: u64,
    label: &str,
) -> Vec<ParallelSentence> {
    if n >= dataset.len() {
        return dataset.to_vec();
    }
    let mut idx: Vec<usize> = (0..dataset.len()).collect();
    idx.shuffle(&mut substream(master_seed, label));
    let mut chosen: Vec<usize> = idx.into_iter().take(n).collect();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| dataset[i].clone()).collect()
}

pub fn build_suite(
    partition: &Partition,
    splits: &SplitResult,
    s_full: &ConfusionSet,
    s_p: &ConfusionSet,
    s_g: &ConfusionSet,
    s_seen: Option<&ConfusionSet>,
    config: &SuiteConfig,
) -> Result<Suite> {
    config.validate()?;
    require_nonempty(s_full, "full")?;
    require_nonempty(s_p, "phonetic")?;
    require_nonempty(s_g, "graphic")?;
    require_nonempty(&splits.s_train, "train")?;
    require_nonempty(&splits.s_unseen_k, "unseen-key")?;
    require_nonempty(&splits.s_unseen_v, "unseen-value")?;
    if let Some(s) = s_seen {
        require_nonempty(s, "seen-pair")?;
    }
    for (pool, name) in [
        (&partition.train, "train"),
        (&partition.valid, "valid"),
        (&partition.test, "test"),
    ] {
        if pool.is_empty() {
            return Err(Error::Empty(format!("{name} pool is empty")));
        }
    }

    let master = config.master_seed;
    let corrupt = |pool: &[CleanSentence], set: &ConfusionSet, p_e: f64, name: &str| -> Result<(Vec<ParallelSentence>, u64)> {
        let seed = derive_seed(master, &format!("suite/{name}"));
        let cfg = CorruptionConfig::new(p_e, seed)?;
        Ok((build_dataset(pool, set, &cfg), seed))
    };

    let mut datasets = Vec::with_capacity(10 + config.probs.len());
    let mut push = |name: &str, confusion: &str, p_e: f64, seed: u64, sentences: Vec<ParallelSentence>| {
        datasets.push(BuiltDataset {
            name: name.to_string(),
            confusion: confusion.to_string(),
            p_e,
            seed,
            sentences,
        });
    };

    let (trainset, seed) = corrupt(&partition.train, &splits.s_train, config.p_e, "Trainset")?;
    push("Trainset", "S_train", config.p_e, seed, trainset.clone());

    let (validset, seed) = corrupt(&partition.valid, &splits.s_train, config.p_e, "Validset")?;
    push("Validset", "S_train", config.p_e, seed, validset);

    let (regular, seed) = corrupt(&partition.test, s_full, config.p_e, "Regular")?;
    push("Regular", "S", config.p_e, seed, regular);

    for &p in &config.probs {
        let name = format!("Probs_pe{p}");
        let (data, seed) = corrupt(&partition.test, s_full, p, &name)?;
        push(&name, "S", p, seed, data);
    }

    let (phonetics, seed) = corrupt(&partition.test, s_p, config.p_e, "Phonetics")?;
    push("Phonetics", "S_p", config.p_e, seed, phonetics);

    let (graphics, seed) = corrupt(&partition.test, s_g, config.p_e, "Graphics")?;
    push("Graphics", "S_g", config.p_e, seed, graphics);

    let s_seen_set = match s_seen {
        Some(s) => s.clone(),
        None => ConfusionSet::extract_seen_pairs(
            &trainset,
            config.seen_pairs,
            derive_seed(master, "suite/seen-pairs"),
            Some(s_full),
        )?,
    };
    let (serror, seed) = corrupt(&partition.test, &s_seen_set, config.p_e, "SError")?;
    push("SError", "S_seen", config.p_e, seed, serror);

    // SContext reuses training sentences with each wrong character swapped
    // for a different candidate of the same target, drawn from the same
    // subset that generated the training errors.
    let sample = sample_sentences(
        &trainset,
        config.scontext_sample,
        master,
        "suite/scontext-sample",
    );
    let scontext_seed = derive_seed(master, "suite/SContext");
    let (scontext_data, scontext_report) =
        build_scontext(&sample, &splits.s_train, scontext_seed)?;
    push("SContext", "S_train(alt)", config.p_e, scontext_seed, scontext_data);

    let (unseen_k, seed) = corrupt(
        &partition.test,
        &splits.s_unseen_k,
        config.p_e_unseen_k,
        "UnseenK",
    )?;
    push("UnseenK", "S_unseen_k", config.p_e_unseen_k, seed, unseen_k);

    let (unseen_v, seed) = corrupt(&partition.test, &splits.s_unseen_v, config.p_e, "UnseenV")?;
    push("UnseenV", "S_unseen_v", config.p_e, seed, unseen_v);

    push(
        "Correct",
        "none",
        0.0,
        derive_seed(master, "suite/Correct"),
        build_correct_dataset(&partition.test),
    );

    Ok(Suite {
        datasets,
        s_seen: s_seen_set,
        scontext: scontext_report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confusion::{MisspellingPair, SplitSpec, Tag};
    use crate::corpus::partition_corpus;
    use std::collections::BTreeSet;

    /// 12 keys, alternating tags, 3 values each.
    fn toy_confusion() -> ConfusionSet {
        let mut set = ConfusionSet::new();
        let keys = "abcdefghijkl";
        let values = "0123456789+-";
        for (i, k) in keys.chars().enumerate() {
            let tag = if i % 2 == 0 { Tag::Phonetic } else { Tag::Graphic };
            for v in values.chars().skip(i).take(3) {
                set.insert(MisspellingPair::new(k, v, tag).unwrap());
            }
        }
        set
    }

    fn toy_pools() -> Partition {
        let keys = "abcdefghijkl";
        let sentences: Vec<CleanSentence> = (0..60)
            .map(|i| {
                let text: String = (0..12)
                    .map(|j| keys.as_bytes()[(i + j) % keys.len()] as char)
                    .collect();
                CleanSentence::new(format!("{i:08}"), &text)
            })
            .collect();
        partition_corpus(sentences, 15, 15, 99).unwrap()
    }

    fn toy_suite() -> (Suite, SplitResult, ConfusionSet) {
        let set = toy_confusion();
        let spec = SplitSpec {
            seed: 3,
            key_holdout_frac: 0.25,
            value_key_frac: 1.0,
            value_holdout_frac: 0.34,
            min_train_values: 1,
        };
        let splits = set.split(&spec).unwrap();
        let s_p = set.filter_by_tag(crate::confusion::TagClass::Phonetic);
        let s_g = set.filter_by_tag(crate::confusion::TagClass::Graphic);
        let mut config = SuiteConfig::new(7);
        config.probs = vec![0.02, 0.2];
        config.scontext_sample = 20;
        config.seen_pairs = 10;
        let suite = build_suite(&toy_pools(), &splits, &set, &s_p, &s_g, None, &config).unwrap();
        (suite, splits, set)
    }

    #[test]
    fn suite_has_the_fixed_dataset_lineup() {
        let (suite, _, _) = toy_suite();
        let names: Vec<&str> = suite.datasets.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "Trainset",
                "Validset",
                "Regular",
                "Probs_pe0.02",
                "Probs_pe0.2",
                "Phonetics",
                "Graphics",
                "SError",
                "SContext",
                "UnseenK",
                "UnseenV",
                "Correct"
            ]
        );
        let seeds: BTreeSet<u64> = suite.datasets.iter().map(|d| d.seed).collect();
        assert_eq!(seeds.len(), suite.datasets.len(), "seeds must be distinct");
    }

    #[test]
    fn correct_set_is_uncorrupted() {
        let (suite, _, _) = toy_suite();
        let correct = suite.dataset("Correct").unwrap();
        assert_eq!(correct.p_e, 0.0);
        assert!(correct.sentences.iter().all(ParallelSentence::is_clean));
        assert_eq!(correct.sentences.len(), 15);
    }

    #[test]
    fn unseen_k_uses_the_higher_rate_and_only_held_out_keys() {
        let (suite, splits, _) = toy_suite();
        let unseen_k = suite.dataset("UnseenK").unwrap();
        assert_eq!(unseen_k.p_e, SuiteConfig::DEFAULT_P_E_UNSEEN_K);
        for s in &unseen_k.sentences {
            for (correct, wrong) in s.realized_pairs() {
                assert!(splits.s_unseen_k.contains_pair(correct, wrong));
            }
        }
    }

    #[test]
    fn train_pairs_never_leak_into_unseen_sets() {
        let (suite, splits, _) = toy_suite();
        for name in ["UnseenK", "UnseenV"] {
            for s in &suite.dataset(name).unwrap().sentences {
                for (correct, wrong) in s.realized_pairs() {
                    assert!(
                        !splits.s_train.contains_pair(correct, wrong),
                        "{name} realized a train pair ({correct},{wrong})"
                    );
                }
            }
        }
    }

    #[test]
    fn serror_draws_only_pairs_realized_in_training() {
        let (suite, _, _) = toy_suite();
        let trainset = suite.dataset("Trainset").unwrap();
        let realized: BTreeSet<(char, char)> = trainset
            .sentences
            .iter()
            .flat_map(ParallelSentence::realized_pairs)
            .collect();
        for pair in suite.s_seen.pairs() {
            assert!(realized.contains(&(pair.key, pair.value)));
        }
        for s in &suite.dataset("SError").unwrap().sentences {
            for (correct, wrong) in s.realized_pairs() {
                assert!(suite.s_seen.contains_pair(correct, wrong));
            }
        }
    }

    #[test]
    fn scontext_preserves_targets_and_positions() {
        let (suite, _, _) = toy_suite();
        let trainset = suite.dataset("Trainset").unwrap();
        let scontext = suite.dataset("SContext").unwrap();
        assert_eq!(scontext.sentences.len(), 20);
        let total_errors: usize = scontext.sentences.iter().map(|s| s.errors.len()).sum();
        assert_eq!(
            suite.scontext.swapped + suite.scontext.singleton_kept,
            total_errors
        );
        for s in &scontext.sentences {
            let original = trainset
                .sentences
                .iter()
                .find(|t| t.id == s.id)
                .expect("sampled from the trainset");
            assert_eq!(s.target, original.target);
            let positions: Vec<usize> = s.errors.iter().map(|e| e.position).collect();
            let orig_positions: Vec<usize> =
                original.errors.iter().map(|e| e.position).collect();
            assert_eq!(positions, orig_positions);
        }
    }

    #[test]
    fn probs_series_varies_only_the_rate() {
        let (suite, _, _) = toy_suite();
        let low = suite.dataset("Probs_pe0.02").unwrap();
        let high = suite.dataset("Probs_pe0.2").unwrap();
        let errs = |d: &BuiltDataset| -> usize { d.sentences.iter().map(|s| s.errors.len()).sum() };
        assert!(errs(low) < errs(high));
        fn ids(d: &BuiltDataset) -> Vec<&str> {
            d.sentences.iter().map(|s| s.id.as_str()).collect()
        }
        assert_eq!(ids(low), ids(high), "same pool in the same order");
    }

    #[test]
    fn suite_is_deterministic() {
        let (a, _, _) = toy_suite();
        let (b, _, _) = toy_suite();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_required_subset_is_rejected() {
        let set = toy_confusion();
        let spec = SplitSpec {
            seed: 3,
            key_holdout_frac: 0.25,
            value_key_frac: 1.0,
            value_holdout_frac: 0.34,
            min_train_values: 1,
        };
        let splits = set.split(&spec).unwrap();
        let s_p = set.filter_by_tag(crate::confusion::TagClass::Phonetic);
        let empty = ConfusionSet::new();
        let config = SuiteConfig::new(7);
        let err = build_suite(&toy_pools(), &splits, &set, &s_p, &empty, None, &config)
            .unwrap_err()
            .to_string();
        assert!(err.contains("graphic"), "{err}");
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut c = SuiteConfig::new(1);
        c.p_e = 0.0;
        assert!(c.validate().is_err());
        let mut c = SuiteConfig::new(1);
        c.probs = vec![];
        assert!(c.validate().is_err());
        let mut c = SuiteConfig::new(1);
        c.probs = vec![1.5];
        assert!(c.validate().is_err());
        assert!(SuiteConfig::new(1).validate().is_ok());
    }
}

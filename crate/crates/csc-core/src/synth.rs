//! Controlled corruption of clean sentences into parallel (source, target)
//! pairs.
//!
//! Each character that is a key of the active confusion set is independently
//! replaced with probability `p_e` by a uniformly drawn candidate of that key.
//! Randomness comes from a per-sentence substream derived from
//! `(master_seed, sentence id)`, so the result does not depend on the order in
//! which sentences are processed — the parallel and sequential paths are
//! bit-identical.

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use crate::confusion::ConfusionSet;
use crate::error::{Error, Result};
use crate::par;
use crate::rng::substream;
use crate::sentence::{CleanSentence, ParallelSentence};

/// Corruption parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionConfig {
    /// Per-eligible-character substitution probability.
    pub p_e: f64,
    pub master_seed: u64,
}

impl CorruptionConfig {
    pub fn new(p_e: f64, master_seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_e) || p_e.is_nan() {
            return Err(Error::Invalid(format!("p_e must be in [0,1], got {p_e}")));
        }
        Ok(CorruptionConfig { p_e, master_seed })
    }
}

/// Corrupts one sentence. Characters that are not keys of `set` are never
/// altered and consume no randomness.
pub fn corrupt_sentence(
    sentence: &CleanSentence,
    set: &ConfusionSet,
    cfg: &CorruptionConfig,
) -> ParallelSentence {
    let bernoulli = Bernoulli::new(cfg.p_e).expect("p_e validated to [0,1]");
    let mut rng = substream(cfg.master_seed, &format!("corrupt/{}", sentence.id));
    let mut source = sentence.text.clone();
    for slot in source.iter_mut() {
        if let Some(candidates) = set.candidates(*slot) {
            if bernoulli.sample(&mut rng) {
                let pick = rng.random_range(0..candidates.len());
                *slot = candidates[pick].0;
            }
        }
    }
    ParallelSentence::from_aligned(sentence.id.clone(), source, sentence.text.clone())
        .expect("corruption preserves length")
}

/// Corrupts a whole pool, preserving pool order. Parallel when the `parallel`
/// feature is enabled.
pub fn build_dataset(
    pool: &[CleanSentence],
    set: &ConfusionSet,
    cfg: &CorruptionConfig,
) -> Vec<ParallelSentence> {
    par::map_slice(pool, |s| corrupt_sentence(s, set, cfg))
}

/// Sequential twin of [`build_dataset`]; always runs on the calling thread.
pub fn build_dataset_seq(
    pool: &[CleanSentence],
    set: &ConfusionSet,
    cfg: &CorruptionConfig,
) -> Vec<ParallelSentence> {
    par::map_slice_seq(pool, |s| corrupt_sentence(s, set, cfg))
}

/// Emits every sentence uncorrupted (`source == target`).
pub fn build_correct_dataset(pool: &[CleanSentence]) -> Vec<ParallelSentence> {
    pool.iter()
        .map(|s| {
            ParallelSentence::from_aligned(s.id.clone(), s.text.clone(), s.text.clone())
                .expect("equal lengths")
        })
        .collect()
}

/// Tally of what [`build_scontext`] did to each error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScontextReport {
    /// Errors whose wrong character was swapped for a different candidate.
    pub swapped: usize,
    /// Errors kept as-is because the target character has a single candidate.
    pub singleton_kept: usize,
}

/// Rebuilds a sample of training sentences with every wrong character swapped
/// for a *different* candidate of the same target character.
///
/// Targets and error positions are unchanged; only the realized wrong
/// characters move. Errors whose target has fewer than two candidates in
/// `set` are kept and counted. An error whose target character is missing
/// from `set` entirely means the sample and the confusion set do not belong
/// together and is rejected.
pub fn build_scontext(
    sample: &[ParallelSentence],
    set: &ConfusionSet,
    seed: u64,
) -> Result<(Vec<ParallelSentence>, ScontextReport)> {
    let mut report = ScontextReport::default();
    let mut out = Vec::with_capacity(sample.len());
    for sent in sample {
        let mut rng = substream(seed, &format!("scontext/{}", sent.id));
        let mut source = sent.source.clone();
        for err in &sent.errors {
            let candidates = set.candidates(err.correct).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "sentence {}: target character '{}' has no confusion entry",
                    sent.id, err.correct
                ))
            })?;
            if candidates.len() < 2 {
                report.singleton_kept += 1;
                continue;
            }
            let alternatives: Vec<char> = candidates
                .iter()
                .map(|(v, _)| *v)
                .filter(|v| *v != err.wrong)
                .collect();
            let pick = rng.random_range(0..alternatives.len());
            source[err.position] = alternatives[pick];
            report.swapped += 1;
        }
        out.push(ParallelSentence::from_aligned(
            sent.id.clone(),
            source,
            sent.target.clone(),
        )?);
    }
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confusion::{MisspellingPair, Tag};

    fn confusion(pairs: &[(char, char)]) -> ConfusionSet {
        let mut s = ConfusionSet::new();
        for &(k, v) in pairs {
            s.insert(MisspellingPair { key: k, value: v, tag: Tag::Both });
        }
        s
    }

    #[test]
    fn zero_probability_is_identity() {
        let s = CleanSentence::new("1", "安全第一");
        let set = confusion(&[('安', '按'), ('全', '权')]);
        let cfg = CorruptionConfig::new(0.0, 5).unwrap();
        let p = corrupt_sentence(&s, &set, &cfg);
        assert_eq!(p.source, p.target);
        assert!(p.errors.is_empty());
    }

    #[test]
    fn forced_substitution_with_single_candidate() {
        let s = CleanSentence::new("1", "安安安");
        let set = confusion(&[('安', '按')]);
        let cfg = CorruptionConfig::new(1.0, 5).unwrap();
        let p = corrupt_sentence(&s, &set, &cfg);
        assert_eq!(p.source_string(), "按按按");
        assert_eq!(p.errors.len(), 3);
    }

    #[test]
    fn non_key_characters_never_change() {
        let s = CleanSentence::new("1", "安全第一最重要");
        let set = confusion(&[('安', '按')]);
        let cfg = CorruptionConfig::new(1.0, 5).unwrap();
        let p = corrupt_sentence(&s, &set, &cfg);
        for err in &p.errors {
            assert_eq!(err.correct, '安');
        }
    }

    /// Independent oracle: the central 3-sigma band of Binomial(n, p).
    fn binomial_3sigma_band(n: u64, p: f64) -> (u64, u64) {
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        ((mean - 3.0 * sd).ceil() as u64, (mean + 3.0 * sd).floor() as u64)
    }

    #[test]
    fn substitution_rate_matches_binomial_band() {
        let (lo, hi) = binomial_3sigma_band(10_000, 0.05);
        assert_eq!((lo, hi), (435, 565));

        // 200 sentences of 50 eligible characters each.
        let set = confusion(&[('安', '按'), ('安', '暗')]);
        let pool: Vec<CleanSentence> = (0..200)
            .map(|i| CleanSentence::new(format!("{i:08}"), &"安".repeat(50)))
            .collect();
        let cfg = CorruptionConfig::new(0.05, 31).unwrap();
        let total: u64 = build_dataset(&pool, &set, &cfg)
            .iter()
            .map(|p| p.errors.len() as u64)
            .sum();
        assert!((lo..=hi).contains(&total), "{total} outside [{lo}, {hi}]");
    }

    #[test]
    fn dataset_build_is_deterministic_and_order_stable() {
        let set = confusion(&[('天', '夭'), ('气', '汽')]);
        let pool: Vec<CleanSentence> = (0..50)
            .map(|i| CleanSentence::new(format!("{i:08}"), "今天天气很好"))
            .collect();
        let cfg = CorruptionConfig::new(0.3, 11).unwrap();
        let a = build_dataset(&pool, &set, &cfg);
        let b = build_dataset(&pool, &set, &cfg);
        let seq = build_dataset_seq(&pool, &set, &cfg);
        assert_eq!(a, b);
        assert_eq!(a, seq);
        for (got, want) in a.iter().zip(&pool) {
            assert_eq!(got.id, want.id);
        }
    }

    #[test]
    fn scontext_swaps_to_the_only_alternative() {
        let set = confusion(&[('是', '适'), ('是', '事')]);
        let sent = ParallelSentence::from_aligned(
            "1",
            "这适一".chars().collect(),
            "这是一".chars().collect(),
        )
        .unwrap();
        let (out, report) = build_scontext(&[sent], &set, 9).unwrap();
        assert_eq!(out[0].source_string(), "这事一");
        assert_eq!(report.swapped, 1);
        assert_eq!(report.singleton_kept, 0);
    }

    #[test]
    fn scontext_keeps_singletons_and_counts_them() {
        let set = confusion(&[('是', '适')]);
        let sent = ParallelSentence::from_aligned(
            "1",
            "这适一".chars().collect(),
            "这是一".chars().collect(),
        )
        .unwrap();
        let (out, report) = build_scontext(&[sent.clone()], &set, 9).unwrap();
        assert_eq!(out[0], sent);
        assert_eq!(report.singleton_kept, 1);
    }

    #[test]
    fn scontext_preserves_error_positions() {
        let set = confusion(&[
            ('是', '适'),
            ('是', '事'),
            ('是', '市'),
            ('规', '现'),
            ('规', '圭'),
        ]);
        let pool: Vec<CleanSentence> = (0..40)
            .map(|i| CleanSentence::new(format!("{i:08}"), "语言是有规律可循的"))
            .collect();
        let cfg = CorruptionConfig::new(0.5, 3).unwrap();
        let dataset = build_dataset(&pool, &set, &cfg);
        let (swapped, _) = build_scontext(&dataset, &set, 17).unwrap();
        for (a, b) in dataset.iter().zip(&swapped) {
            let pos = |p: &ParallelSentence| p.errors.iter().map(|e| e.position).collect::<Vec<_>>();
            assert_eq!(pos(a), pos(b));
            assert_eq!(a.target, b.target);
            for (ea, eb) in a.errors.iter().zip(&b.errors) {
                assert_ne!(ea.wrong, eb.wrong, "wrong character must change");
            }
        }
    }

    #[test]
    fn scontext_rejects_unknown_target_characters() {
        let set = confusion(&[('是', '适')]);
        let sent = ParallelSentence::from_aligned(
            "1",
            "现".chars().collect(),
            "规".chars().collect(),
        )
        .unwrap();
        assert!(matches!(
            build_scontext(&[sent], &set, 9).unwrap_err(),
            Error::Inconsistent(_)
        ));
    }

    #[test]
    fn config_rejects_out_of_range_probability() {
        assert!(CorruptionConfig::new(-0.1, 0).is_err());
        assert!(CorruptionConfig::new(1.1, 0).is_err());
        assert!(CorruptionConfig::new(f64::NAN, 0).is_err());
    }
}

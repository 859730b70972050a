//! Correctors: maps from an observed sentence to a predicted sentence of the
//! same length.
//!
//! The main one is [`NoisyChannelCorrector`], which rescores each position
//! with `channel(observed | candidate) + lm_weight * lm(candidate in
//! context)` and greedily keeps the best candidate left to right. Already
//! decoded positions feed the left context; the right context stays raw.
//! [`Identity`], [`Oracle`] and [`RandomCandidate`] exist as floor, ceiling
//! and sanity reference points.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::confusion::ConfusionSet;
use crate::error::{Error, Result};
use crate::lm::{NGramLM, Sym};
use crate::metrics::EvalInstance;
use crate::par;
use crate::rng::substream;
use crate::sentence::ParallelSentence;

/// Wrong character -> set of keys that list it as a candidate. Looking up an
/// observed character yields every correction the confusion set licenses.
pub type InverseIndex = BTreeMap<char, BTreeSet<char>>;

pub fn build_inverse_index(set: &ConfusionSet) -> InverseIndex {
    let mut inverse: InverseIndex = BTreeMap::new();
    for pair in set.pairs() {
        inverse.entry(pair.value).or_default().insert(pair.key);
    }
    inverse
}

pub trait Corrector: Sync {
    fn name(&self) -> &'static str;

    /// Predicts a correction for `sentence.source`. Implementations other
    /// than [`Oracle`] must not look at the target side.
    fn predict(&self, sentence: &ParallelSentence) -> Vec<char>;
}

/// Returns the source untouched.
pub struct Identity;

impl Corrector for Identity {
    fn name(&self) -> &'static str {
        "identity"
    }

    fn predict(&self, sentence: &ParallelSentence) -> Vec<char> {
        sentence.source.clone()
    }
}

/// Returns the target; the reference ceiling.
pub struct Oracle;

impl Corrector for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn predict(&self, sentence: &ParallelSentence) -> Vec<char> {
        sentence.target.clone()
    }
}

/// Replaces every correctable character with a uniform draw from itself plus
/// all keys that could have produced it. A context-free chance floor.
pub struct RandomCandidate {
    inverse: InverseIndex,
    master_seed: u64,
}

impl RandomCandidate {
    pub fn new(set: &ConfusionSet, master_seed: u64) -> Self {
        RandomCandidate {
            inverse: build_inverse_index(set),
            master_seed,
        }
    }
}

impl Corrector for RandomCandidate {
    fn name(&self) -> &'static str {
        "random-candidate"
    }

    fn predict(&self, sentence: &ParallelSentence) -> Vec<char> {
        let mut rng = substream(self.master_seed, &format!("random/{}", sentence.id));
        sentence
            .source
            .iter()
            .map(|&c| match self.inverse.get(&c) {
                None => c,
                Some(keys) => {
                    let mut options: Vec<char> = Vec::with_capacity(keys.len() + 1);
                    options.push(c);
                    options.extend(keys.iter().copied());
                    options[rng.random_range(0..options.len())]
                }
            })
            .collect()
    }
}

/// Noisy-channel decoder over a character n-gram model.
pub struct NoisyChannelCorrector {
    lm: NGramLM,
    confusion: ConfusionSet,
    inverse: InverseIndex,
    p_err: f64,
    lm_weight: f64,
}

impl NoisyChannelCorrector {
    pub const DEFAULT_P_ERR: f64 = 0.05;
    pub const DEFAULT_LM_WEIGHT: f64 = 1.0;

    pub fn new(lm: NGramLM, confusion: ConfusionSet, p_err: f64, lm_weight: f64) -> Result<Self> {
        if !(p_err > 0.0 && p_err < 1.0) {
            return Err(Error::Invalid(format!(
                "p_err must be in (0,1), got {p_err}"
            )));
        }
        if !(lm_weight.is_finite() && lm_weight >= 0.0) {
            return Err(Error::Invalid(format!(
                "lm_weight must be finite and non-negative, got {lm_weight}"
            )));
        }
        let inverse = build_inverse_index(&confusion);
        Ok(NoisyChannelCorrector {
            lm,
            confusion,
            inverse,
            p_err,
            lm_weight,
        })
    }

    /// `ln P(observed | intended candidate)`: keep probability `1 - p_err`,
    /// otherwise `p_err` split uniformly over the candidate's confusions.
    fn channel_log_prob(&self, observed: char, candidate: char) -> f64 {
        if candidate == observed {
            (1.0 - self.p_err).ln()
        } else {
            let fanout = self
                .confusion
                .candidates(candidate)
                .map_or(0, <[(char, crate::confusion::Tag)]>::len);
            debug_assert!(fanout > 0, "candidate must come from the inverse index");
            (self.p_err / fanout as f64).ln()
        }
    }

    /// Sum of the LM scores of every window that position `i` takes part in,
    /// assuming `candidate` sits there. Positions left of `i` come from
    /// `decoded`, the rest from `source`; position `n` is the end symbol.
    fn lm_span_score(&self, decoded: &[char], source: &[char], i: usize, candidate: char) -> f64 {
        let order = self.lm.order();
        let n = source.len();
        let sym_at = |j: isize| -> Sym {
            if j < 0 {
                Sym::Pad
            } else if (j as usize) == i {
                Sym::Ch(candidate)
            } else if (j as usize) < i {
                Sym::Ch(decoded[j as usize])
            } else if (j as usize) < n {
                Sym::Ch(source[j as usize])
            } else {
                Sym::End
            }
        };
        let mut total = 0.0;
        let mut context = Vec::with_capacity(order - 1);
        for t in i..=(i + order - 1).min(n) {
            context.clear();
            for j in (t as isize - (order as isize - 1))..t as isize {
                context.push(sym_at(j));
            }
            total += self.lm.log_prob(&context, sym_at(t as isize));
        }
        total
    }

    /// Greedy left-to-right decode. At each position the observed character
    /// competes with every key whose candidate list contains it; the observed
    /// character is scored first, so it survives exact ties, and the
    /// remaining candidates run in code point order.
    pub fn decode(&self, source: &[char]) -> Vec<char> {
        let mut decoded: Vec<char> = Vec::with_capacity(source.len());
        for (i, &observed) in source.iter().enumerate() {
            let mut best = observed;
            let mut best_score = self.channel_log_prob(observed, observed)
                + self.lm_weight * self.lm_span_score(&decoded, source, i, observed);
            if let Some(keys) = self.inverse.get(&observed) {
                for &candidate in keys {
                    if candidate == observed {
                        continue;
                    }
                    let score = self.channel_log_prob(observed, candidate)
                        + self.lm_weight * self.lm_span_score(&decoded, source, i, candidate);
                    if score > best_score {
                        best = candidate;
                        best_score = score;
                    }
                }
            }
            decoded.push(best);
        }
        decoded
    }

    pub fn lm(&self) -> &NGramLM {
        &self.lm
    }
}

impl Corrector for NoisyChannelCorrector {
    fn name(&self) -> &'static str {
        "noisy-channel"
    }

    fn predict(&self, sentence: &ParallelSentence) -> Vec<char> {
        self.decode(&sentence.source)
    }
}

/// Runs the corrector over the dataset and pairs each sentence with its
/// prediction, ready for evaluation.
pub fn predict_dataset(corrector: &dyn Corrector, dataset: &[ParallelSentence]) -> Vec<EvalInstance> {
    par::map_slice(dataset, |s| EvalInstance::from_parallel(s, corrector.predict(s)))
}

pub fn predict_dataset_seq(
    corrector: &dyn Corrector,
    dataset: &[ParallelSentence],
) -> Vec<EvalInstance> {
    par::map_slice_seq(dataset, |s| {
        EvalInstance::from_parallel(s, corrector.predict(s))
    })
}

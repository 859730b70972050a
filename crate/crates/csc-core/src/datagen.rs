//! Synthetic corpus and confusion-set generators for tests and benchmarks.
//!
//! Sentences are concatenations of words from a fixed lexicon drawn with a
//! skewed rank distribution, which gives a character n-gram model real
//! signal to exploit. Confusion values come from a code point range disjoint
//! from the corpus characters. Everything is a pure function of its seed.

use std::collections::BTreeSet;

use rand::Rng;

use crate::confusion::{ConfusionSet, MisspellingPair, Tag};
use crate::rng::substream;
use crate::sentence::CleanSentence;

/// `n` consecutive CJK ideographs starting at U+4E00 + `offset`.
pub fn charset(offset: usize, n: usize) -> Vec<char> {
    (0..n)
        .map(|i| char::from_u32(0x4E00 + (offset + i) as u32).expect("CJK block is contiguous"))
        .collect()
}

/// Value characters for generated confusion sets, from the Extension A block
/// so they never collide with [`charset`] output.
pub fn value_charset(n: usize) -> Vec<char> {
    (0..n)
        .map(|i| char::from_u32(0x3400 + i as u32).expect("Extension A block is contiguous"))
        .collect()
}

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub seed: u64,
    pub num_chars: usize,
    pub num_words: usize,
    pub word_len: (usize, usize),
    pub words_per_sentence: (usize, usize),
}

impl CorpusSpec {
    pub fn new(seed: u64) -> Self {
        CorpusSpec {
            seed,
            num_chars: 120,
            num_words: 300,
            word_len: (2, 3),
            words_per_sentence: (6, 15),
        }
    }
}

/// Distinct words over the spec's character set, in generation order.
pub fn lexicon(spec: &CorpusSpec) -> Vec<Vec<char>> {
    let chars = charset(0, spec.num_chars);
    let mut rng = substream(spec.seed, "datagen/lexicon");
    let mut words: Vec<Vec<char>> = Vec::with_capacity(spec.num_words);
    let mut seen: BTreeSet<Vec<char>> = BTreeSet::new();
    while words.len() < spec.num_words {
        let len = rng.random_range(spec.word_len.0..=spec.word_len.1);
        let word: Vec<char> = (0..len)
            .map(|_| chars[rng.random_range(0..chars.len())])
            .collect();
        if seen.insert(word.clone()) {
            words.push(word);
        }
    }
    words
}

/// `n` sentences of lexicon words; low word ranks are strongly favored, so
/// frequent words dominate and n-gram statistics are learnable.
pub fn corpus(spec: &CorpusSpec, n: usize) -> Vec<CleanSentence> {
    let words = lexicon(spec);
    (0..n)
        .map(|i| {
            let mut rng = substream(spec.seed, &format!("datagen/sent/{i}"));
            let n_words =
                rng.random_range(spec.words_per_sentence.0..=spec.words_per_sentence.1);
            let mut text = String::new();
            for _ in 0..n_words {
                let u: f64 = rng.random();
                let rank = ((u * u) * words.len() as f64) as usize;
                text.extend(words[rank.min(words.len() - 1)].iter());
            }
            CleanSentence::new(format!("{:08}", i + 1), &text)
        })
        .collect()
}

/// A confusion set over the given keys. Each key gets `values_per_key`
/// distinct values from a shared pool of `value_pool` characters, so values
/// are typically claimed by several keys.
pub fn confusion(keys: &[char], values_per_key: usize, value_pool: usize, seed: u64) -> ConfusionSet {
    assert!(
        values_per_key <= value_pool,
        "pool must be large enough for distinct values"
    );
    let pool = value_charset(value_pool);
    let tags = [Tag::Phonetic, Tag::Graphic, Tag::Both];
    let mut set = ConfusionSet::new();
    for &k in keys {
        let mut rng = substream(seed, &format!("datagen/conf/{k}"));
        let mut chosen: BTreeSet<char> = BTreeSet::new();
        while chosen.len() < values_per_key {
            chosen.insert(pool[rng.random_range(0..pool.len())]);
        }
        for v in chosen {
            let tag = tags[rng.random_range(0..tags.len())];
            set.insert(MisspellingPair::new(k, v, tag).expect("pool is disjoint from keys"));
        }
    }
    set
}

/// One sentence per line, ready to be written as a corpus file.
pub fn to_lines(sentences: &[CleanSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.extend(s.text.iter());
        out.push('\n');
    }
    out
}

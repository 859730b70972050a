//! Deterministic synthesis and evaluation of Chinese Spelling Check (CSC)
//! benchmarks.
//!
//! The pipeline: partition a confusion set into train/unseen-key/unseen-value
//! subsets, corrupt a clean corpus into parallel (wrong, right) sentence
//! pairs at a controlled error rate, assemble the standard nine-test-set
//! suite, and score any corrector with two-level detection/correction
//! metrics. A character n-gram noisy-channel corrector is included as a
//! baseline.
//!
//! Every random choice flows through a labelled substream of one master
//! seed, so all outputs are bit-reproducible and independent of thread
//! scheduling. The `parallel` feature (on by default) runs the per-sentence
//! stages on rayon; the `*_seq` twins always run single-threaded and produce
//! identical results.

pub mod analysis;
pub mod confusion;
pub mod corpus;
pub mod corrector;
#[doc(hidden)]
pub mod datagen;
pub mod error;
pub mod io;
pub mod lm;
pub mod metrics;
pub mod par;
pub mod rng;
pub mod sentence;
pub mod suite;
pub mod synth;

pub use analysis::{coverage, dataset_stats, sweep, sweep_csv, CoverageReport, DatasetStats};
pub use confusion::{
    ConfusionSet, MisspellingPair, ParseReport, SplitResult, SplitSpec, Tag, TagClass,
};
pub use corpus::{load_corpus, partition_corpus, LoadReport, Partition};
pub use corrector::{
    build_inverse_index, predict_dataset, predict_dataset_seq, Corrector, Identity,
    NoisyChannelCorrector, Oracle, RandomCandidate,
};
pub use error::{Error, Result};
pub use lm::{train_lm, NGramLM, Sym};
pub use metrics::{
    evaluate, evaluate_seq, keep_correct_accuracy, Counts, EvalInstance, EvalReport, MetricBlock,
};
pub use sentence::{CleanSentence, ParallelSentence, SpellingError};
pub use suite::{build_suite, BuiltDataset, Suite, SuiteConfig};
pub use synth::{
    build_correct_dataset, build_dataset, build_dataset_seq, build_scontext, corrupt_sentence,
    CorruptionConfig, ScontextReport,
};

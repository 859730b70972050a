//! Command-line surface. Every command that draws randomness requires an
//! explicit `--seed`; nothing falls back to entropy.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csc_core::{NoisyChannelCorrector, SplitSpec, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "csc",
    version,
    about = "Synthesize and evaluate Chinese Spelling Check benchmarks"
)]
pub struct Cli {
    /// Worker threads for the data-parallel stages; outputs are identical
    /// for any value
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Partition a confusion set into train / unseen-key / unseen-value parts
    SplitConfusion(SplitArgs),
    /// Corrupt a clean corpus into one parallel dataset
    Synthesize(SynthesizeArgs),
    /// Build the training/validation/nine-test-set suite in one run
    MakeSuite(MakeSuiteArgs),
    /// Run a corrector over a dataset and write its predictions
    Correct(CorrectArgs),
    /// Train the character n-gram language model
    TrainLm(TrainLmArgs),
    /// Score predictions against a gold dataset
    Evaluate(EvaluateArgs),
    /// Error-pair coverage of a test set by a reference dataset
    Coverage(CoverageArgs),
    /// Counts for a confusion set or a dataset
    Stats(StatsArgs),
    /// Evaluate one corrector across a list of error frequencies
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrectorKind {
    NoisyChannel,
    Identity,
    Oracle,
    Random,
}

#[derive(Args)]
pub struct SplitArgs {
    /// Confusion TSV (key<TAB>value<TAB>tag)
    #[arg(long)]
    pub confusion: PathBuf,
    /// Master seed for the deterministic shuffles
    #[arg(long)]
    pub seed: u64,
    /// Fraction of keys withheld whole
    #[arg(long, default_value_t = SplitSpec::DEFAULT_KEY_HOLDOUT_FRAC)]
    pub key_holdout: f64,
    /// Fraction of eligible remaining keys that lose some values
    #[arg(long, default_value_t = SplitSpec::DEFAULT_VALUE_KEY_FRAC)]
    pub value_key: f64,
    /// Fraction of values withheld per chosen key
    #[arg(long, default_value_t = SplitSpec::DEFAULT_VALUE_HOLDOUT_FRAC)]
    pub value_holdout: f64,
    /// Values that must stay with a key for it to lose any
    #[arg(long, default_value_t = 1)]
    pub min_train_values: usize,
    /// Directory for s_train.tsv, s_unseen_k.tsv, s_unseen_v.tsv
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct SynthesizeArgs {
    /// Clean corpus, one sentence per line
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub confusion: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Per-eligible-character substitution probability
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_P_E)]
    pub p_e: f64,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_len: usize,
    /// Output dataset TSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct MakeSuiteArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub confusion: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Validation pool size
    #[arg(long, default_value_t = 5000)]
    pub valid: usize,
    /// Test pool size, shared by all nine test sets
    #[arg(long, default_value_t = 5000)]
    pub test: usize,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_len: usize,
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_P_E)]
    pub p_e: f64,
    /// Higher rate for the UnseenK set
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_P_E_UNSEEN_K)]
    pub p_e_unseen_k: f64,
    /// Error frequencies for the Probs series
    #[arg(long, value_delimiter = ',', default_values_t = SuiteConfig::DEFAULT_PROBS)]
    pub probs: Vec<f64>,
    /// Trainset sentences sampled for SContext
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_SCONTEXT_SAMPLE)]
    pub scontext_sample: usize,
    /// Realized pairs sampled for SError
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_SEEN_PAIRS)]
    pub seen_pairs: usize,
    #[arg(long, default_value_t = SplitSpec::DEFAULT_KEY_HOLDOUT_FRAC)]
    pub key_holdout: f64,
    #[arg(long, default_value_t = SplitSpec::DEFAULT_VALUE_KEY_FRAC)]
    pub value_key: f64,
    #[arg(long, default_value_t = SplitSpec::DEFAULT_VALUE_HOLDOUT_FRAC)]
    pub value_holdout: f64,
    #[arg(long, default_value_t = 1)]
    pub min_train_values: usize,
}

#[derive(Args)]
pub struct CorrectArgs {
    /// Dataset TSV; only the source side is shown to the corrector
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = CorrectorKind::NoisyChannel)]
    pub corrector: CorrectorKind,
    /// Trained language model (required by noisy-channel)
    #[arg(long)]
    pub lm: Option<PathBuf>,
    /// Confusion TSV (required by noisy-channel and random)
    #[arg(long)]
    pub confusion: Option<PathBuf>,
    /// Channel belief in how often characters get substituted
    #[arg(long, default_value_t = NoisyChannelCorrector::DEFAULT_P_ERR)]
    pub p_err: f64,
    /// Language model weight in the decode score
    #[arg(long, default_value_t = NoisyChannelCorrector::DEFAULT_LM_WEIGHT)]
    pub lm_weight: f64,
    /// Required by the random corrector
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output predictions TSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct TrainLmArgs {
    /// Train on the target side of a dataset TSV
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Train on a plain one-sentence-per-line corpus
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value_t = 0.1)]
    pub add_k: f64,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_len: usize,
    /// Output model file
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Gold dataset TSV
    #[arg(long)]
    pub gold: PathBuf,
    /// Predictions TSV (id<TAB>prediction)
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also report the fraction of already-correct sentences left untouched
    /// (gold must be error-free)
    #[arg(long)]
    pub keep_correct: bool,
    /// Write the report here instead of stdout, with a manifest
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CoverageArgs {
    /// Dataset whose error pairs are being covered
    #[arg(long)]
    pub test: PathBuf,
    /// Dataset providing the covering pairs
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub confusion: Option<PathBuf>,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Clean pool corrupted once per error frequency
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub confusion: PathBuf,
    /// Error frequencies to test
    #[arg(long, value_delimiter = ',', default_values_t = SuiteConfig::DEFAULT_PROBS)]
    pub pe_list: Vec<f64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = CorrectorKind::Identity)]
    pub corrector: CorrectorKind,
    #[arg(long)]
    pub lm: Option<PathBuf>,
    #[arg(long, default_value_t = NoisyChannelCorrector::DEFAULT_P_ERR)]
    pub p_err: f64,
    #[arg(long, default_value_t = NoisyChannelCorrector::DEFAULT_LM_WEIGHT)]
    pub lm_weight: f64,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_len: usize,
    /// Output CSV
    #[arg(long)]
    pub out: PathBuf,
}

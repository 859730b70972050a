//! Subcommand implementations. Each one reads its inputs, calls into
//! csc-core, writes outputs, and drops a manifest beside them. Reports go to
//! stdout; progress notes go to stderr.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use csc_core::io::{
    join_predictions, parse_dataset_tsv, parse_predictions_tsv, write_dataset_tsv,
    write_predictions_tsv,
};
use csc_core::{
    analysis, build_suite, evaluate, keep_correct_accuracy, load_corpus, partition_corpus,
    predict_dataset, train_lm, CleanSentence, ConfusionSet, Corrector, CorruptionConfig,
    EvalReport, Identity, NGramLM, NoisyChannelCorrector, Oracle, ParallelSentence, ParseReport,
    RandomCandidate, SplitSpec, SuiteConfig,
};

use crate::args::{
    CorrectArgs, CorrectorKind, CoverageArgs, EvaluateArgs, Format, MakeSuiteArgs, SplitArgs,
    StatsArgs, SweepArgs, SynthesizeArgs, TrainLmArgs,
};
use crate::manifest::{dir_manifest_path, sibling_manifest_path, DatasetEntry, RunManifest};
use crate::CliError;

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::data(format!("reading {}: {e}", path.display())))
}

fn load_confusion(
    path: &Path,
    manifest: &mut RunManifest,
) -> Result<(ConfusionSet, ParseReport), CliError> {
    let bytes = read_bytes(path)?;
    manifest.record_input(path, &bytes);
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::data(format!("{} is not UTF-8: {e}", path.display())))?;
    ConfusionSet::parse(text)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn load_dataset(
    path: &Path,
    manifest: &mut RunManifest,
) -> Result<Vec<ParallelSentence>, CliError> {
    let bytes = read_bytes(path)?;
    manifest.record_input(path, &bytes);
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::data(format!("{} is not UTF-8: {e}", path.display())))?;
    parse_dataset_tsv(text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn load_clean_corpus(
    path: &Path,
    min_len: usize,
    max_len: usize,
    manifest: &mut RunManifest,
) -> Result<(Vec<CleanSentence>, u64), CliError> {
    let bytes = read_bytes(path)?;
    manifest.record_input(path, &bytes);
    let (sentences, report) = load_corpus(&bytes, min_len, max_len)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    Ok((sentences, report.dropped() as u64))
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::data(format!("creating {}: {e}", dir.display())))
}

/// Report bytes to stdout, or to `--out` plus a manifest when given.
fn emit_report(
    out: Option<&Path>,
    text: &str,
    manifest: RunManifest,
) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut manifest = manifest;
            manifest.write_output(path, text.as_bytes())?;
            manifest.save(&sibling_manifest_path(path))
        }
    }
}

pub fn split_confusion(args: SplitArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("split-confusion", argv, Some(args.seed));
    let (set, report) = load_confusion(&args.confusion, &mut manifest)?;
    let spec = SplitSpec {
        seed: args.seed,
        key_holdout_frac: args.key_holdout,
        value_key_frac: args.value_key,
        value_holdout_frac: args.value_holdout,
        min_train_values: args.min_train_values,
    };
    let result = set.split(&spec)?;

    ensure_out_dir(&args.out_dir)?;
    for (name, part) in [
        ("s_train.tsv", &result.s_train),
        ("s_unseen_k.tsv", &result.s_unseen_k),
        ("s_unseen_v.tsv", &result.s_unseen_v),
    ] {
        manifest.write_output(&args.out_dir.join(name), part.to_tsv().as_bytes())?;
        let label = name.trim_end_matches(".tsv");
        let (keys, pairs) = part.stats();
        manifest.count(&format!("{label}_keys"), keys as u64);
        manifest.count(&format!("{label}_pairs"), pairs as u64);
        eprintln!("{label}: {keys} keys, {pairs} pairs");
    }
    let (keys, pairs) = set.stats();
    manifest.count("input_keys", keys as u64);
    manifest.count("input_pairs", pairs as u64);
    manifest.count("warnings", report.duplicate_pairs as u64);
    manifest.save(&dir_manifest_path(&args.out_dir))
}

pub fn synthesize(args: SynthesizeArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("synthesize", argv, Some(args.seed));
    let (set, report) = load_confusion(&args.confusion, &mut manifest)?;
    let (pool, dropped) =
        load_clean_corpus(&args.corpus, args.min_len, args.max_len, &mut manifest)?;
    if pool.is_empty() {
        return Err(CliError::data("corpus has no usable sentences"));
    }
    let cfg = CorruptionConfig::new(args.p_e, args.seed)?;
    let dataset = csc_core::build_dataset(&pool, &set, &cfg);

    let errors: u64 = dataset.iter().map(|s| s.errors.len() as u64).sum();
    manifest.count("sentences", dataset.len() as u64);
    manifest.count("errors", errors);
    manifest.count("dropped_lines", dropped);
    manifest.count("warnings", report.duplicate_pairs as u64);
    let text = write_dataset_tsv(&dataset)?;
    manifest.write_output(&args.out, text.as_bytes())?;
    manifest.save(&sibling_manifest_path(&args.out))?;
    eprintln!("{} sentences, {errors} errors -> {}", dataset.len(), args.out.display());
    Ok(())
}

pub fn make_suite(args: MakeSuiteArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("make-suite", argv, Some(args.seed));
    let (set, parse_report) = load_confusion(&args.confusion, &mut manifest)?;
    let (sentences, dropped) =
        load_clean_corpus(&args.corpus, args.min_len, args.max_len, &mut manifest)?;
    manifest.count("corpus_sentences", sentences.len() as u64);
    manifest.count("corpus_dropped", dropped);
    manifest.count("warnings", parse_report.duplicate_pairs as u64);

    let partition = partition_corpus(sentences, args.valid, args.test, args.seed)?;
    let spec = SplitSpec {
        seed: args.seed,
        key_holdout_frac: args.key_holdout,
        value_key_frac: args.value_key,
        value_holdout_frac: args.value_holdout,
        min_train_values: args.min_train_values,
    };
    let splits = set.split(&spec)?;
    let s_p = set.filter_by_tag(csc_core::TagClass::Phonetic);
    let s_g = set.filter_by_tag(csc_core::TagClass::Graphic);

    let config = SuiteConfig {
        master_seed: args.seed,
        p_e: args.p_e,
        p_e_unseen_k: args.p_e_unseen_k,
        probs: args.probs.clone(),
        scontext_sample: args.scontext_sample,
        seen_pairs: args.seen_pairs,
    };
    let suite = build_suite(&partition, &splits, &set, &s_p, &s_g, None, &config)?;

    ensure_out_dir(&args.out_dir)?;
    for (name, part) in [
        ("s_train.tsv", &splits.s_train),
        ("s_unseen_k.tsv", &splits.s_unseen_k),
        ("s_unseen_v.tsv", &splits.s_unseen_v),
        ("s_seen.tsv", &suite.s_seen),
    ] {
        manifest.write_output(&args.out_dir.join(name), part.to_tsv().as_bytes())?;
    }
    for d in &suite.datasets {
        let file = format!("{}.tsv", d.name);
        let text = write_dataset_tsv(&d.sentences)?;
        manifest.write_output(&args.out_dir.join(&file), text.as_bytes())?;
        let errors: u64 = d.sentences.iter().map(|s| s.errors.len() as u64).sum();
        manifest.datasets.push(DatasetEntry {
            name: d.name.clone(),
            file,
            p_e: d.p_e,
            seed: d.seed,
            sentences: d.sentences.len() as u64,
            errors,
            sha256: csc_core::io::sha256_hex(text.as_bytes()),
        });
        eprintln!("{}: {} sentences, {errors} errors", d.name, d.sentences.len());
    }
    manifest.count("scontext_singleton_kept", suite.scontext.singleton_kept as u64);
    manifest.count("scontext_swapped", suite.scontext.swapped as u64);
    manifest.count("seen_pairs", suite.s_seen.num_pairs() as u64);
    manifest.save(&dir_manifest_path(&args.out_dir))
}

pub fn train_lm_cmd(args: TrainLmArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("train-lm", argv, None);
    let texts: Vec<Vec<char>> = match (&args.dataset, &args.corpus) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::usage(
                "train-lm needs exactly one of --dataset or --corpus",
            ));
        }
        (Some(path), None) => {
            // The target side is the clean text.
            load_dataset(path, &mut manifest)?
                .into_iter()
                .map(|s| s.target)
                .collect()
        }
        (None, Some(path)) => {
            let (pool, _) = load_clean_corpus(path, args.min_len, args.max_len, &mut manifest)?;
            pool.into_iter().map(|s| s.text).collect()
        }
    };
    let lm = train_lm(texts.iter().map(Vec::as_slice), args.order, args.add_k)?;
    let mut bytes = Vec::new();
    lm.save(&mut bytes)?;
    manifest.count("sentences", texts.len() as u64);
    manifest.count("vocab_size", lm.vocab_size() as u64);
    manifest.count("order", lm.order() as u64);
    manifest.write_output(&args.out, &bytes)?;
    manifest.save(&sibling_manifest_path(&args.out))?;
    eprintln!(
        "order-{} model over {} symbols -> {}",
        lm.order(),
        lm.vocab_size(),
        args.out.display()
    );
    Ok(())
}

fn build_corrector(
    kind: CorrectorKind,
    lm_path: Option<&Path>,
    confusion: Option<&ConfusionSet>,
    p_err: f64,
    lm_weight: f64,
    seed: Option<u64>,
    manifest: &mut RunManifest,
) -> Result<Box<dyn Corrector>, CliError> {
    match kind {
        CorrectorKind::Identity => Ok(Box::new(Identity)),
        CorrectorKind::Oracle => Ok(Box::new(Oracle)),
        CorrectorKind::Random => {
            let set = confusion
                .ok_or_else(|| CliError::usage("--corrector random needs --confusion"))?;
            let seed =
                seed.ok_or_else(|| CliError::usage("--corrector random needs --seed"))?;
            Ok(Box::new(RandomCandidate::new(set, seed)))
        }
        CorrectorKind::NoisyChannel => {
            let set = confusion
                .ok_or_else(|| CliError::usage("--corrector noisy-channel needs --confusion"))?;
            let path = lm_path
                .ok_or_else(|| CliError::usage("--corrector noisy-channel needs --lm"))?;
            let bytes = read_bytes(path)?;
            manifest.record_input(path, &bytes);
            let lm = NGramLM::load(&mut &bytes[..])
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            Ok(Box::new(NoisyChannelCorrector::new(
                lm,
                set.clone(),
                p_err,
                lm_weight,
            )?))
        }
    }
}

pub fn correct(args: CorrectArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("correct", argv, args.seed);
    let confusion = match &args.confusion {
        Some(path) => Some(load_confusion(path, &mut manifest)?.0),
        None => None,
    };
    let corrector = build_corrector(
        args.corrector,
        args.lm.as_deref(),
        confusion.as_ref(),
        args.p_err,
        args.lm_weight,
        args.seed,
        &mut manifest,
    )?;
    let dataset = load_dataset(&args.dataset, &mut manifest)?;
    let instances = predict_dataset(corrector.as_ref(), &dataset);

    let changed = instances
        .iter()
        .filter(|i| i.prediction != i.source)
        .count() as u64;
    let predictions: Vec<(String, String)> = instances
        .into_iter()
        .map(|i| (i.id, i.prediction.into_iter().collect()))
        .collect();
    manifest.count("sentences", predictions.len() as u64);
    manifest.count("changed_sentences", changed);
    let text = write_predictions_tsv(&predictions)?;
    manifest.write_output(&args.out, text.as_bytes())?;
    manifest.save(&sibling_manifest_path(&args.out))?;
    eprintln!(
        "{}: {} sentences, {changed} changed -> {}",
        corrector.name(),
        predictions.len(),
        args.out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct EvaluateOutput {
    #[serde(flatten)]
    report: EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    keep_correct_accuracy: Option<f64>,
}

fn report_tsv(report: &EvalReport) -> String {
    let mut out = String::from("level\ttask\taccuracy\tprecision\trecall\tf1\ttp\tfp\tfn\n");
    for (level, task, b) in report.rows() {
        out.push_str(&format!(
            "{level}\t{task}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            b.accuracy, b.precision, b.recall, b.f1, b.counts.tp, b.counts.fp, b.counts.fn_
        ));
    }
    out
}

pub fn evaluate_cmd(args: EvaluateArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("evaluate", argv, None);
    let gold = load_dataset(&args.gold, &mut manifest)?;
    let pred_bytes = read_bytes(&args.pred)?;
    manifest.record_input(&args.pred, &pred_bytes);
    let pred_text = std::str::from_utf8(&pred_bytes)
        .map_err(|e| CliError::data(format!("{} is not UTF-8: {e}", args.pred.display())))?;
    let predictions = parse_predictions_tsv(pred_text)
        .map_err(|e| CliError::data(format!("{}: {e}", args.pred.display())))?;

    let instances = join_predictions(&gold, &predictions)?;
    let report = evaluate(&instances)?;
    let keep = if args.keep_correct {
        Some(keep_correct_accuracy(&instances)?)
    } else {
        None
    };
    manifest.count("sentences", instances.len() as u64);

    let text = match args.format {
        Format::Json => {
            let out = EvaluateOutput {
                report,
                keep_correct_accuracy: keep,
            };
            let mut s = serde_json::to_string_pretty(&out)
                .map_err(|e| CliError::data(format!("encoding report: {e}")))?;
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = report.to_text_table();
            if let Some(k) = keep {
                s.push_str(&format!("keep_correct_accuracy {k:.4}\n"));
            }
            s
        }
        Format::Tsv => {
            let mut s = report_tsv(&report);
            if let Some(k) = keep {
                s.push_str(&format!("keep_correct_accuracy\t{k}\n"));
            }
            s
        }
    };
    emit_report(args.out.as_deref(), &text, manifest)
}

pub fn coverage_cmd(args: CoverageArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("coverage", argv, None);
    let test = load_dataset(&args.test, &mut manifest)?;
    let reference = load_dataset(&args.reference, &mut manifest)?;
    let report = analysis::coverage(&test, &reference);
    manifest.count("test_sentences", test.len() as u64);
    manifest.count("reference_sentences", reference.len() as u64);

    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::data(format!("encoding report: {e}")))?;
            s.push('\n');
            s
        }
        Format::Text => format!(
            "type coverage  {:>7.2}% ({}/{}){}\ntoken coverage {:>7.2}% ({}/{}){}\n",
            report.type_coverage_pct,
            report.covered_pair_types,
            report.test_pair_types,
            if report.type_vacuous { "  [vacuous: no pairs]" } else { "" },
            report.token_coverage_pct,
            report.covered_pair_tokens,
            report.test_pair_tokens,
            if report.token_vacuous { "  [vacuous: no pairs]" } else { "" },
        ),
        Format::Tsv => format!(
            "test_pair_types\t{}\ncovered_pair_types\t{}\ntype_coverage_pct\t{}\ntest_pair_tokens\t{}\ncovered_pair_tokens\t{}\ntoken_coverage_pct\t{}\n",
            report.test_pair_types,
            report.covered_pair_types,
            report.type_coverage_pct,
            report.test_pair_tokens,
            report.covered_pair_tokens,
            report.token_coverage_pct,
        ),
    };
    emit_report(args.out.as_deref(), &text, manifest)
}

pub fn stats(args: StatsArgs, _argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("stats", Vec::new(), None);
    let pairs: BTreeMap<&str, u64> = match (&args.confusion, &args.dataset) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::usage(
                "stats needs exactly one of --confusion or --dataset",
            ));
        }
        (Some(path), None) => {
            let (set, _) = load_confusion(path, &mut manifest)?;
            let (keys, pairs) = set.stats();
            BTreeMap::from([("keys", keys as u64), ("pairs", pairs as u64)])
        }
        (None, Some(path)) => {
            let data = load_dataset(path, &mut manifest)?;
            let s = analysis::dataset_stats(&data);
            BTreeMap::from([
                ("sentences", s.num_sentences as u64),
                ("errors", s.num_errors as u64),
                ("error_pair_types", s.num_error_pair_types as u64),
            ])
        }
    };
    match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&pairs)
                .map_err(|e| CliError::data(format!("encoding stats: {e}")))?;
            s.push('\n');
            print!("{s}");
        }
        Format::Text => {
            for (k, v) in &pairs {
                println!("{k}: {v}");
            }
        }
        Format::Tsv => {
            for (k, v) in &pairs {
                println!("{k}\t{v}");
            }
        }
    }
    Ok(())
}

pub fn sweep_cmd(args: SweepArgs, argv: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("sweep", argv, Some(args.seed));
    let (set, _) = load_confusion(&args.confusion, &mut manifest)?;
    let (pool, _) = load_clean_corpus(&args.corpus, args.min_len, args.max_len, &mut manifest)?;
    let corrector = build_corrector(
        args.corrector,
        args.lm.as_deref(),
        Some(&set),
        args.p_err,
        args.lm_weight,
        Some(args.seed),
        &mut manifest,
    )?;
    let rows = analysis::sweep(&pool, &set, &args.pe_list, corrector.as_ref(), args.seed)?;
    let csv = analysis::sweep_csv(&rows);
    manifest.count("sentences", pool.len() as u64);
    manifest.count("sweep_points", rows.len() as u64);
    manifest.write_output(&args.out, csv.as_bytes())?;
    manifest.save(&sibling_manifest_path(&args.out))?;
    eprintln!(
        "swept {} error frequencies over {} sentences -> {}",
        rows.len(),
        pool.len(),
        args.out.display()
    );
    Ok(())
}

//! Two-level detection/correction scoring.
//!
//! Per position `i`, gold-positive means `target[i] != source[i]` and
//! predicted-positive means `prediction[i] != source[i]`. Detection scores
//! flagged positions; correction additionally requires the predicted
//! character to equal the gold one. At the sentence level a detection hit
//! requires the predicted-positive position set to equal the gold set exactly
//! (all errors flagged, no false alarms), and a correction hit requires the
//! whole predicted sentence to equal the target.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::sentence::ParallelSentence;

/// A gold sentence pair joined with a system prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalInstance {
    pub id: String,
    pub source: Vec<char>,
    pub target: Vec<char>,
    pub prediction: Vec<char>,
}

impl EvalInstance {
    pub fn new(id: impl Into<String>, source: &str, target: &str, prediction: &str) -> Self {
        EvalInstance {
            id: id.into(),
            source: source.chars().collect(),
            target: target.chars().collect(),
            prediction: prediction.chars().collect(),
        }
    }

    pub fn from_parallel(sentence: &ParallelSentence, prediction: Vec<char>) -> Self {
        EvalInstance {
            id: sentence.id.clone(),
            source: sentence.source.clone(),
            target: sentence.target.clone(),
            prediction,
        }
    }

    fn check_lengths(&self) -> Result<()> {
        if self.source.len() != self.target.len() || self.source.len() != self.prediction.len() {
            return Err(Error::Inconsistent(format!(
                "instance {}: source/target/prediction lengths differ ({}/{}/{})",
                self.id,
                self.source.len(),
                self.target.len(),
                self.prediction.len()
            )));
        }
        Ok(())
    }
}

/// Raw outcome counts behind one metric block.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// Number of scored units (positions or sentences).
    pub total: u64,
    /// Units counted as correct by the accuracy definition of this block.
    pub exact_correct: u64,
}

impl Counts {
    fn add(&mut self, other: &Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.total += other.total;
        self.exact_correct += other.exact_correct;
    }
}

/// Precision, recall, F1 with the zero-denominator convention: a ratio with
/// denominator 0 is reported as 0, and F1 is 0 when P + R is 0. The raw
/// counts stay available for consumers that prefer another convention.
pub fn prf_from_counts(c: &Counts) -> (f64, f64, f64) {
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    (precision, recall, f1)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// One scored task at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricBlock {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: Counts,
}

impl MetricBlock {
    fn from_counts(counts: Counts) -> Self {
        let (precision, recall, f1) = prf_from_counts(&counts);
        MetricBlock {
            accuracy: ratio(counts.exact_correct, counts.total),
            precision,
            recall,
            f1,
            counts,
        }
    }
}

/// Sentence- and character-level detection/correction scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    pub sentence_detection: MetricBlock,
    pub sentence_correction: MetricBlock,
    pub character_detection: MetricBlock,
    pub character_correction: MetricBlock,
}

impl EvalReport {
    /// `(level, task, block)` rows in a fixed order.
    pub fn rows(&self) -> [(&'static str, &'static str, &MetricBlock); 4] {
        [
            ("sentence", "detection", &self.sentence_detection),
            ("sentence", "correction", &self.sentence_correction),
            ("character", "detection", &self.character_detection),
            ("character", "correction", &self.character_correction),
        ]
    }

    /// Aligned plain-text table.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:<11} {:>9} {:>10} {:>9} {:>9} {:>8} {:>8} {:>8}\n",
            "level", "task", "accuracy", "precision", "recall", "f1", "tp", "fp", "fn"
        ));
        for (level, task, b) in self.rows() {
            out.push_str(&format!(
                "{:<10} {:<11} {:>9.4} {:>10.4} {:>9.4} {:>9.4} {:>8} {:>8} {:>8}\n",
                level, task, b.accuracy, b.precision, b.recall, b.f1, b.counts.tp, b.counts.fp, b.counts.fn_
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct InstanceCounts {
    sentence_detection: Counts,
    sentence_correction: Counts,
    character_detection: Counts,
    character_correction: Counts,
}

fn instance_counts(inst: &EvalInstance) -> InstanceCounts {
    let mut c = InstanceCounts::default();
    let n = inst.source.len();

    let mut gold_positions = Vec::new();
    let mut pred_positions = Vec::new();
    for i in 0..n {
        let gold = inst.target[i] != inst.source[i];
        let pred = inst.prediction[i] != inst.source[i];
        let fixed = inst.prediction[i] == inst.target[i];

        c.character_detection.total += 1;
        if gold == pred {
            c.character_detection.exact_correct += 1;
        }
        match (gold, pred) {
            (true, true) => c.character_detection.tp += 1,
            (false, true) => c.character_detection.fp += 1,
            (true, false) => c.character_detection.fn_ += 1,
            (false, false) => {}
        }

        c.character_correction.total += 1;
        if fixed {
            c.character_correction.exact_correct += 1;
        }
        let corrected = pred && gold && fixed;
        if corrected {
            c.character_correction.tp += 1;
        }
        if pred && !corrected {
            c.character_correction.fp += 1;
        }
        if gold && !corrected {
            c.character_correction.fn_ += 1;
        }

        if gold {
            gold_positions.push(i);
        }
        if pred {
            pred_positions.push(i);
        }
    }

    let sets_equal = gold_positions == pred_positions;
    let gold_nonempty = !gold_positions.is_empty();
    let pred_nonempty = !pred_positions.is_empty();

    c.sentence_detection.total = 1;
    if sets_equal {
        c.sentence_detection.exact_correct = 1;
    }
    let det_hit = sets_equal && gold_nonempty;
    if det_hit {
        c.sentence_detection.tp = 1;
    }
    if pred_nonempty && !det_hit {
        c.sentence_detection.fp = 1;
    }
    if gold_nonempty && !det_hit {
        c.sentence_detection.fn_ = 1;
    }

    let exact = inst.prediction == inst.target;
    c.sentence_correction.total = 1;
    if exact {
        c.sentence_correction.exact_correct = 1;
    }
    let cor_hit = gold_nonempty && exact;
    if cor_hit {
        c.sentence_correction.tp = 1;
    }
    if pred_nonempty && !exact {
        c.sentence_correction.fp = 1;
    }
    if gold_nonempty && !cor_hit {
        c.sentence_correction.fn_ = 1;
    }

    c
}

fn report_from_instance_counts(parts: Vec<InstanceCounts>) -> EvalReport {
    let mut total = InstanceCounts::default();
    for p in &parts {
        total.sentence_detection.add(&p.sentence_detection);
        total.sentence_correction.add(&p.sentence_correction);
        total.character_detection.add(&p.character_detection);
        total.character_correction.add(&p.character_correction);
    }
    EvalReport {
        sentence_detection: MetricBlock::from_counts(total.sentence_detection),
        sentence_correction: MetricBlock::from_counts(total.sentence_correction),
        character_detection: MetricBlock::from_counts(total.character_detection),
        character_correction: MetricBlock::from_counts(total.character_correction),
    }
}

fn check_instances(instances: &[EvalInstance]) -> Result<()> {
    if instances.is_empty() {
        return Err(Error::Empty("evaluate requires at least one instance".into()));
    }
    for inst in instances {
        inst.check_lengths()?;
    }
    Ok(())
}

/// Scores all instances. Counting is a parallel reduction when the
/// `parallel` feature is enabled.
pub fn evaluate(instances: &[EvalInstance]) -> Result<EvalReport> {
    check_instances(instances)?;
    Ok(report_from_instance_counts(par::map_slice(
        instances,
        instance_counts,
    )))
}

/// Sequential twin of [`evaluate`].
pub fn evaluate_seq(instances: &[EvalInstance]) -> Result<EvalReport> {
    check_instances(instances)?;
    Ok(report_from_instance_counts(par::map_slice_seq(
        instances,
        instance_counts,
    )))
}

/// Fraction of instances left untouched-correct by the system, over a set
/// whose sources are all already correct.
pub fn keep_correct_accuracy(instances: &[EvalInstance]) -> Result<f64> {
    if instances.is_empty() {
        return Err(Error::Empty(
            "keep_correct_accuracy requires at least one instance".into(),
        ));
    }
    for inst in instances {
        inst.check_lengths()?;
        if inst.source != inst.target {
            return Err(Error::Inconsistent(format!(
                "instance {}: keep_correct_accuracy requires source == target",
                inst.id
            )));
        }
    }
    let kept = instances
        .iter()
        .filter(|i| i.prediction == i.target)
        .count();
    Ok(kept as f64 / instances.len() as f64)
}

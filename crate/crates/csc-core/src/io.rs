//! Text formats: dataset TSV (`id<TAB>source<TAB>target`), predictions TSV
//! (`id<TAB>prediction`), and digest helpers. All files are UTF-8 with LF
//! line endings; `#` lines and blank lines are ignored on input and never
//! produced on output.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metrics::EvalInstance;
use crate::sentence::ParallelSentence;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn check_field(id: &str, what: &str, text: &str) -> Result<()> {
    if text.contains('\t') || text.contains('\n') || text.contains('\r') {
        return Err(Error::Invalid(format!(
            "{what} of sentence '{id}' contains a tab or line break"
        )));
    }
    Ok(())
}

pub fn write_dataset_tsv(dataset: &[ParallelSentence]) -> Result<String> {
    let mut out = String::new();
    for s in dataset {
        let source = s.source_string();
        let target = s.target_string();
        check_field(&s.id, "id", &s.id)?;
        check_field(&s.id, "source", &source)?;
        check_field(&s.id, "target", &target)?;
        out.push_str(&s.id);
        out.push('\t');
        out.push_str(&source);
        out.push('\t');
        out.push_str(&target);
        out.push('\n');
    }
    Ok(out)
}

/// Lines that survive comment/blank filtering, with their 1-based numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub fn parse_dataset_tsv(text: &str) -> Result<Vec<ParallelSentence>> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                format!("expected id<TAB>source<TAB>target, got {} fields", fields.len()),
            ));
        }
        if !seen.insert(fields[0]) {
            return Err(Error::parse(
                line_no,
                format!("duplicate sentence id '{}'", fields[0]),
            ));
        }
        let sentence = ParallelSentence::from_aligned(
            fields[0],
            fields[1].chars().collect(),
            fields[2].chars().collect(),
        )
        .map_err(|e| Error::parse(line_no, e.to_string()))?;
        out.push(sentence);
    }
    Ok(out)
}

pub fn write_predictions_tsv(predictions: &[(String, String)]) -> Result<String> {
    let mut out = String::new();
    for (id, pred) in predictions {
        check_field(id, "id", id)?;
        check_field(id, "prediction", pred)?;
        out.push_str(id);
        out.push('\t');
        out.push_str(pred);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_predictions_tsv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                format!("expected id<TAB>prediction, got {} fields", fields.len()),
            ));
        }
        if !seen.insert(fields[0]) {
            return Err(Error::parse(
                line_no,
                format!("duplicate prediction id '{}'", fields[0]),
            ));
        }
        out.push((fields[0].to_string(), fields[1].to_string()));
    }
    Ok(out)
}

fn list_offenders(ids: &[&str]) -> String {
    let shown: Vec<&str> = ids.iter().copied().take(10).collect();
    let mut s = shown.join(", ");
    if ids.len() > shown.len() {
        s.push_str(&format!(" (and {} more)", ids.len() - shown.len()));
    }
    s
}

/// Pairs every gold sentence with its prediction, in gold order. Ids must
/// match exactly: any gold id without a prediction, or prediction without a
/// gold sentence, fails with the offenders named.
pub fn join_predictions(
    gold: &[ParallelSentence],
    predictions: &[(String, String)],
) -> Result<Vec<EvalInstance>> {
    let mut by_id: BTreeMap<&str, &str> = BTreeMap::new();
    for (id, pred) in predictions {
        by_id.insert(id, pred);
    }
    let missing: Vec<&str> = gold
        .iter()
        .map(|s| s.id.as_str())
        .filter(|id| !by_id.contains_key(id))
        .collect();
    let gold_ids: BTreeSet<&str> = gold.iter().map(|s| s.id.as_str()).collect();
    let extra: Vec<&str> = by_id
        .keys()
        .copied()
        .filter(|id| !gold_ids.contains(id))
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        let mut msg = String::new();
        if !missing.is_empty() {
            msg.push_str(&format!(
                "{} gold id(s) have no prediction: {}",
                missing.len(),
                list_offenders(&missing)
            ));
        }
        if !extra.is_empty() {
            if !msg.is_empty() {
                msg.push_str("; ");
            }
            msg.push_str(&format!(
                "{} prediction id(s) match no gold sentence: {}",
                extra.len(),
                list_offenders(&extra)
            ));
        }
        return Err(Error::Inconsistent(msg));
    }
    Ok(gold
        .iter()
        .map(|s| {
            EvalInstance::new(
                s.id.clone(),
                &s.source_string(),
                &s.target_string(),
                by_id[s.id.as_str()],
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(id: &str, source: &str, target: &str) -> ParallelSentence {
        ParallelSentence::from_aligned(id, source.chars().collect(), target.chars().collect())
            .unwrap()
    }

    #[test]
    fn dataset_tsv_round_trip() {
        let data = vec![
            sent("00000001", "语言适有现律", "语言是有规律"),
            sent("00000002", "天天向上", "天天向上"),
        ];
        let text = write_dataset_tsv(&data).unwrap();
        assert_eq!(
            text,
            "00000001\t语言适有现律\t语言是有规律\n00000002\t天天向上\t天天向上\n"
        );
        assert_eq!(parse_dataset_tsv(&text).unwrap(), data);
    }

    #[test]
    fn dataset_parser_skips_comments_and_blanks() {
        let text = "# a comment\n\n00000001\tab\tab\n";
        let data = parse_dataset_tsv(text).unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].id, "00000001");
    }

    #[test]
    fn dataset_parser_reports_line_numbers() {
        let err = parse_dataset_tsv("x\tab\tab\nbad line\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");

        let err = parse_dataset_tsv("x\tab\tabc\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1") && msg.contains('x'), "{msg}");

        let err = parse_dataset_tsv("x\tab\tab\nx\tcd\tcd\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn write_rejects_embedded_tabs() {
        let bad = sent("a\tb", "xy", "xy");
        assert!(write_dataset_tsv(&[bad]).is_err());
    }

    #[test]
    fn predictions_round_trip() {
        let preds = vec![
            ("00000001".to_string(), "语言是有规律".to_string()),
            ("00000002".to_string(), "天天向上".to_string()),
        ];
        let text = write_predictions_tsv(&preds).unwrap();
        assert_eq!(parse_predictions_tsv(&text).unwrap(), preds);
    }

    #[test]
    fn join_pairs_in_gold_order() {
        let gold = vec![sent("b", "xy", "xy"), sent("a", "pq", "pr")];
        let preds = vec![
            ("a".to_string(), "pr".to_string()),
            ("b".to_string(), "xy".to_string()),
        ];
        let joined = join_predictions(&gold, &preds).unwrap();
        assert_eq!(joined.len(), 2);
        assert_eq!(joined[0].id, "b");
        assert_eq!(joined[1].id, "a");
        assert_eq!(joined[1].prediction, vec!['p', 'r']);
    }

    #[test]
    fn join_names_missing_and_extra_ids() {
        let gold = vec![sent("a", "x", "x"), sent("b", "y", "y")];
        let preds = vec![
            ("a".to_string(), "x".to_string()),
            ("zz".to_string(), "q".to_string()),
        ];
        let err = join_predictions(&gold, &preds).unwrap_err().to_string();
        assert!(err.contains("b"), "{err}");
        assert!(err.contains("zz"), "{err}");
    }

    #[test]
    fn join_caps_the_offender_list_at_ten() {
        let gold: Vec<ParallelSentence> =
            (0..15).map(|i| sent(&format!("{i:08}"), "x", "x")).collect();
        let err = join_predictions(&gold, &[]).unwrap_err().to_string();
        assert!(err.contains("15 gold id(s)"), "{err}");
        assert!(err.contains("and 5 more"), "{err}");
    }

    #[test]
    fn sha256_of_empty_input_matches_the_known_vector() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}

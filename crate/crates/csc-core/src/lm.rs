//! Character n-gram language model with add-k smoothing.
//!
//! Sentences are padded with `order - 1` start symbols and closed with one
//! end symbol. The model stores raw transition counts; probabilities are
//! computed on demand as `(count + k) / (context_total + k * |vocab|)`, where
//! the vocabulary is every character seen in training plus the reserved
//! unknown and end symbols.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A token in the model: a real character or one of the reserved symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    /// Start-of-sentence padding; appears only in contexts.
    Pad,
    /// End-of-sentence marker; predictable like a character.
    End,
    /// Stand-in for characters never seen in training.
    Unk,
    Ch(char),
}

impl Sym {
    fn render(self) -> String {
        match self {
            Sym::Pad => "<s>".to_string(),
            Sym::End => "</s>".to_string(),
            Sym::Unk => "<unk>".to_string(),
            Sym::Ch(' ') => "<sp>".to_string(),
            Sym::Ch(c) => c.to_string(),
        }
    }

    fn parse(token: &str) -> Option<Sym> {
        match token {
            "<s>" => Some(Sym::Pad),
            "</s>" => Some(Sym::End),
            "<unk>" => Some(Sym::Unk),
            "<sp>" => Some(Sym::Ch(' ')),
            _ => {
                let mut it = token.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Some(Sym::Ch(c)),
                    _ => None,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ContextCounts {
    total: u64,
    next: HashMap<Sym, u64>,
}

/// Add-k smoothed character n-gram model.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramLM {
    order: usize,
    add_k: f64,
    counts: HashMap<Vec<Sym>, ContextCounts>,
    vocab: BTreeSet<Sym>,
}

impl NGramLM {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_k(&self) -> f64 {
        self.add_k
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> impl Iterator<Item = Sym> + '_ {
        self.vocab.iter().copied()
    }

    /// Raw transition count, after mapping unseen characters to `Unk`.
    pub fn count(&self, context: &[Sym], next: Sym) -> u64 {
        let ctx = self.canonical_context(context);
        self.counts
            .get(ctx.as_slice())
            .and_then(|c| c.next.get(&self.canonical(next)))
            .copied()
            .unwrap_or(0)
    }

    pub fn context_total(&self, context: &[Sym]) -> u64 {
        let ctx = self.canonical_context(context);
        self.counts.get(ctx.as_slice()).map_or(0, |c| c.total)
    }

    fn canonical(&self, s: Sym) -> Sym {
        match s {
            Sym::Pad => Sym::Pad,
            s if self.vocab.contains(&s) => s,
            _ => Sym::Unk,
        }
    }

    fn canonical_context(&self, context: &[Sym]) -> Vec<Sym> {
        context.iter().map(|s| self.canonical(*s)).collect()
    }

    /// `ln P(next | context)` under add-k smoothing. `context` must hold
    /// exactly `order - 1` symbols.
    pub fn log_prob(&self, context: &[Sym], next: Sym) -> f64 {
        assert_eq!(
            context.len(),
            self.order - 1,
            "context must have order-1 symbols"
        );
        let ctx = self.canonical_context(context);
        let next = self.canonical(next);
        let vocab = self.vocab.len() as f64;
        let (count, total) = match self.counts.get(ctx.as_slice()) {
            Some(c) => (c.next.get(&next).copied().unwrap_or(0), c.total),
            None => (0, 0),
        };
        ((count as f64 + self.add_k) / (total as f64 + self.add_k * vocab)).ln()
    }

    /// Writes the model as a sorted plain-text count file with a SHA-256
    /// footer over everything above it.
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        let mut body = String::new();
        body.push_str("csc-ngram-lm\tv1\n");
        body.push_str(&format!("order\t{}\n", self.order));
        body.push_str(&format!("add_k\t{}\n", self.add_k));
        body.push_str(&format!("vocab_size\t{}\n", self.vocab.len()));

        let mut lines: Vec<(Vec<Sym>, Sym, u64)> = Vec::new();
        for (ctx, cc) in &self.counts {
            for (next, count) in &cc.next {
                lines.push((ctx.clone(), *next, *count));
            }
        }
        lines.sort();
        for (ctx, next, count) in lines {
            for s in &ctx {
                body.push_str(&s.render());
                body.push('\t');
            }
            body.push_str(&next.render());
            body.push('\t');
            body.push_str(&count.to_string());
            body.push('\n');
        }

        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        w.write_all(body.as_bytes())?;
        writeln!(w, "#sha256\t{digest}")?;
        Ok(())
    }

    /// Loads a model written by [`NGramLM::save`], verifying the checksum
    /// footer and the vocabulary size recorded in the header.
    pub fn load(r: &mut impl BufRead) -> Result<NGramLM> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;

        let footer_start = text
            .rfind("#sha256\t")
            .ok_or_else(|| Error::parse(0, "missing #sha256 footer"))?;
        let body = &text[..footer_start];
        let footer = text[footer_start..].trim_end();
        let want = footer
            .strip_prefix("#sha256\t")
            .ok_or_else(|| Error::parse(0, "malformed #sha256 footer"))?;
        let got = hex::encode(Sha256::digest(body.as_bytes()));
        if want != got {
            return Err(Error::Inconsistent(format!(
                "model file checksum mismatch: footer {want}, computed {got}"
            )));
        }

        let mut lines = body.lines().enumerate();
        let magic = lines.next().map(|(_, l)| l);
        if magic != Some("csc-ngram-lm\tv1") {
            return Err(Error::parse(1, "not a csc-ngram-lm v1 file"));
        }
        let order = parse_header_field(&mut lines, "order")?;
        let add_k_line = lines
            .next()
            .ok_or_else(|| Error::parse(3, "missing add_k header"))?;
        let add_k: f64 = add_k_line
            .1
            .strip_prefix("add_k\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(add_k_line.0 + 1, "malformed add_k header"))?;
        let vocab_size: usize = parse_header_field(&mut lines, "vocab_size")?;

        if order < 1 {
            return Err(Error::Invalid("order must be at least 1".into()));
        }
        if add_k <= 0.0 {
            return Err(Error::Invalid("add_k must be positive".into()));
        }

        let mut counts: HashMap<Vec<Sym>, ContextCounts> = HashMap::new();
        let mut vocab: BTreeSet<Sym> = BTreeSet::new();
        vocab.insert(Sym::Unk);
        vocab.insert(Sym::End);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != order + 1 {
                return Err(Error::parse(
                    line_no,
                    format!("expected {} fields, got {}", order + 1, fields.len()),
                ));
            }
            let mut syms = Vec::with_capacity(order);
            for f in &fields[..order] {
                syms.push(
                    Sym::parse(f)
                        .ok_or_else(|| Error::parse(line_no, format!("bad token '{f}'")))?,
                );
            }
            let count: u64 = fields[order]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad count '{}'", fields[order])))?;
            let next = syms.pop().expect("order >= 1");
            let entry = counts.entry(syms).or_default();
            entry.total += count;
            *entry.next.entry(next).or_insert(0) += count;
            if let Sym::Ch(_) = next {
                vocab.insert(next);
            }
        }

        if vocab.len() != vocab_size {
            return Err(Error::Inconsistent(format!(
                "vocab_size header says {vocab_size} but file contains {}",
                vocab.len()
            )));
        }
        Ok(NGramLM {
            order,
            add_k,
            counts,
            vocab,
        })
    }
}

fn parse_header_field<'a, T: std::str::FromStr>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    name: &str,
) -> Result<T> {
    let (idx, line) = lines
        .next()
        .ok_or_else(|| Error::parse(0, format!("missing {name} header")))?;
    line.strip_prefix(&format!("{name}\t"))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(idx + 1, format!("malformed {name} header")))
}

/// Counts n-grams over the corpus. `corpus` items are the clean (target-side)
/// character sequences.
pub fn train_lm<'a, I>(corpus: I, order: usize, add_k: f64) -> Result<NGramLM>
where
    I: IntoIterator<Item = &'a [char]>,
{
    if order < 1 {
        return Err(Error::Invalid(format!("order must be at least 1, got {order}")));
    }
    if add_k <= 0.0 || add_k.is_nan() {
        return Err(Error::Invalid(format!("add_k must be positive, got {add_k}")));
    }
    let mut counts: HashMap<Vec<Sym>, ContextCounts> = HashMap::new();
    let mut vocab: BTreeSet<Sym> = BTreeSet::new();
    vocab.insert(Sym::Unk);
    vocab.insert(Sym::End);

    let mut seen_any = false;
    let mut padded: Vec<Sym> = Vec::new();
    for sentence in corpus {
        seen_any = true;
        padded.clear();
        padded.extend(std::iter::repeat_n(Sym::Pad, order - 1));
        padded.extend(sentence.iter().map(|c| Sym::Ch(*c)));
        padded.push(Sym::End);
        vocab.extend(sentence.iter().map(|c| Sym::Ch(*c)));
        for j in (order - 1)..padded.len() {
            let context = padded[j - (order - 1)..j].to_vec();
            let next = padded[j];
            let entry = counts.entry(context).or_default();
            entry.total += 1;
            *entry.next.entry(next).or_insert(0) += 1;
        }
    }
    if !seen_any {
        return Err(Error::Empty("training corpus is empty".into()));
    }
    Ok(NGramLM {
        order,
        add_k,
        counts,
        vocab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn train(sentences: &[&str], order: usize, add_k: f64) -> NGramLM {
        let seqs: Vec<Vec<char>> = sentences.iter().map(|s| chars(s)).collect();
        train_lm(seqs.iter().map(Vec::as_slice), order, add_k).unwrap()
    }

    #[test]
    fn bigram_counts_of_a_single_sentence() {
        let lm = train(&["ab"], 2, 0.1);
        assert_eq!(lm.count(&[Sym::Pad], Sym::Ch('a')), 1);
        assert_eq!(lm.count(&[Sym::Ch('a')], Sym::Ch('b')), 1);
        assert_eq!(lm.count(&[Sym::Ch('b')], Sym::End), 1);
        assert_eq!(lm.context_total(&[Sym::Ch('a')]), 1);
        // a, b, <unk>, </s>
        assert_eq!(lm.vocab_size(), 4);
    }

    #[test]
    fn seen_bigram_beats_unseen() {
        let lm = train(&["ab"], 2, 0.1);
        let seen = lm.log_prob(&[Sym::Ch('a')], Sym::Ch('b'));
        let unseen = lm.log_prob(&[Sym::Ch('a')], Sym::Ch('a'));
        assert!(seen > unseen);
    }

    #[test]
    fn probabilities_normalize_over_vocab() {
        let lm = train(&["abca", "abba", "cab"], 3, 0.1);
        for ctx in [
            vec![Sym::Pad, Sym::Pad],
            vec![Sym::Pad, Sym::Ch('a')],
            vec![Sym::Ch('a'), Sym::Ch('b')],
            vec![Sym::Ch('z'), Sym::Ch('z')], // unseen context
        ] {
            let sum: f64 = lm.vocab().map(|v| lm.log_prob(&ctx, v).exp()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "sum {sum} for {ctx:?}");
        }
    }

    #[test]
    fn unseen_context_hits_the_smoothing_floor() {
        let lm = train(&["ab"], 2, 0.1);
        let got = lm.log_prob(&[Sym::Ch('z')], Sym::Ch('q'));
        let want = -(lm.vocab_size() as f64).ln();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn probability_grows_with_count() {
        let lm = train(&["ab", "ab", "ac"], 2, 0.1);
        let b = lm.log_prob(&[Sym::Ch('a')], Sym::Ch('b'));
        let c = lm.log_prob(&[Sym::Ch('a')], Sym::Ch('c'));
        assert!(b > c);
    }

    #[test]
    fn unigram_model_uses_empty_context() {
        let lm = train(&["aab"], 1, 0.5);
        assert_eq!(lm.count(&[], Sym::Ch('a')), 2);
        assert_eq!(lm.context_total(&[]), 4); // a a b </s>
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let lm = train(&["今天 很好", "今天下雨"], 3, 0.1);
        let mut buf = Vec::new();
        lm.save(&mut buf).unwrap();
        let back = NGramLM::load(&mut &buf[..]).unwrap();
        assert_eq!(back, lm);

        let mut again = Vec::new();
        back.save(&mut again).unwrap();
        assert_eq!(buf, again, "serialization must be canonical");
    }

    #[test]
    fn load_rejects_tampered_files() {
        let lm = train(&["abc"], 2, 0.1);
        let mut buf = Vec::new();
        lm.save(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let tampered = text.replacen("\t1\n", "\t2\n", 1);
        assert!(NGramLM::load(&mut tampered.as_bytes()).is_err());
    }

    #[test]
    fn train_rejects_bad_parameters() {
        let seqs = [chars("ab")];
        assert!(train_lm(seqs.iter().map(Vec::as_slice), 0, 0.1).is_err());
        assert!(train_lm(seqs.iter().map(Vec::as_slice), 2, 0.0).is_err());
        assert!(train_lm(std::iter::empty(), 2, 0.1).is_err());
    }
}

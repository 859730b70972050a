//! Confusion sets: the map from a correct character to the characters it is
//! commonly misspelled as, and the partitioning machinery that withholds
//! whole keys or per-key value subsets from training.
//!
//! File format (`*.tsv`): one `key<TAB>value<TAB>tag` triple per line, UTF-8,
//! LF endings, tag one of `P` (phonetic), `G` (graphic), `PG` (both).
//! Lines starting with `#` and blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sentence::ParallelSentence;

/// Similarity class of a misspelling pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Phonetic,
    Graphic,
    Both,
}

impl Tag {
    /// Combines the tags of two sightings of the same pair.
    pub fn combine(self, other: Tag) -> Tag {
        if self == other {
            self
        } else {
            Tag::Both
        }
    }

    /// Whether a pair with this tag belongs to the given similarity class.
    /// `Both` matches either class.
    pub fn matches(self, class: TagClass) -> bool {
        match (self, class) {
            (Tag::Both, _) => true,
            (Tag::Phonetic, TagClass::Phonetic) => true,
            (Tag::Graphic, TagClass::Graphic) => true,
            _ => false,
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        match s {
            "P" => Some(Tag::Phonetic),
            "G" => Some(Tag::Graphic),
            "PG" => Some(Tag::Both),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Phonetic => "P",
            Tag::Graphic => "G",
            Tag::Both => "PG",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Selector for [`ConfusionSet::filter_by_tag`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagClass {
    Phonetic,
    Graphic,
}

/// A correct character together with one character it is misspelled as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MisspellingPair {
    /// The correct character.
    pub key: char,
    /// The error-prone candidate it gets replaced with.
    pub value: char,
    pub tag: Tag,
}

impl MisspellingPair {
    pub fn new(key: char, value: char, tag: Tag) -> Result<Self> {
        if key == value {
            return Err(Error::Invalid(format!(
                "misspelling pair key and value must differ, got '{key}'"
            )));
        }
        Ok(MisspellingPair { key, value, tag })
    }
}

/// Map from a correct character to its error-prone candidates.
///
/// Keys iterate in code-point order; the candidate list of each key keeps
/// first-seen order, which makes every downstream sampling step a pure
/// function of the file contents rather than of hash iteration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionSet {
    entries: BTreeMap<char, Vec<(char, Tag)>>,
}

/// Warnings gathered while parsing a confusion file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    /// Number of `(key, value)` lines that repeated an earlier pair.
    pub duplicate_pairs: usize,
}

impl ConfusionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_keys(&self) -> usize {
        self.entries.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    /// `(number of keys, number of pairs)`.
    pub fn stats(&self) -> (usize, usize) {
        (self.num_keys(), self.num_pairs())
    }

    /// Candidate list for `key`, in stored order.
    pub fn candidates(&self, key: char) -> Option<&[(char, Tag)]> {
        self.entries.get(&key).map(Vec::as_slice)
    }

    pub fn contains_key(&self, key: char) -> bool {
        self.entries.contains_key(&key)
    }

    pub fn contains_pair(&self, key: char, value: char) -> bool {
        self.lookup_tag(key, value).is_some()
    }

    pub fn lookup_tag(&self, key: char, value: char) -> Option<Tag> {
        self.entries
            .get(&key)?
            .iter()
            .find(|(v, _)| *v == value)
            .map(|(_, t)| *t)
    }

    /// Keys in code-point order.
    pub fn keys(&self) -> impl Iterator<Item = char> + '_ {
        self.entries.keys().copied()
    }

    /// All pairs, keys in code-point order, values in stored order.
    pub fn pairs(&self) -> impl Iterator<Item = MisspellingPair> + '_ {
        self.entries.iter().flat_map(|(k, vs)| {
            vs.iter().map(|(v, t)| MisspellingPair {
                key: *k,
                value: *v,
                tag: *t,
            })
        })
    }

    /// The set of `(key, value)` pairs, ignoring tags.
    pub fn pair_set(&self) -> BTreeSet<(char, char)> {
        self.pairs().map(|p| (p.key, p.value)).collect()
    }

    /// Inserts a pair, combining tags if it already exists.
    /// Returns `true` if the pair was new.
    pub fn insert(&mut self, pair: MisspellingPair) -> bool {
        let list = self.entries.entry(pair.key).or_default();
        if let Some(slot) = list.iter_mut().find(|(v, _)| *v == pair.value) {
            slot.1 = slot.1.combine(pair.tag);
            false
        } else {
            list.push((pair.value, pair.tag));
            true
        }
    }

    /// Parses a confusion TSV document. Duplicate pairs are merged with tag
    /// combination and counted in the report.
    pub fn parse(text: &str) -> Result<(ConfusionSet, ParseReport)> {
        let mut set = ConfusionSet::new();
        let mut report = ParseReport::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 3 tab-separated fields, got {}", fields.len()),
                ));
            }
            let key = single_char(fields[0])
                .ok_or_else(|| Error::parse(line_no, "key must be exactly one character"))?;
            let value = single_char(fields[1])
                .ok_or_else(|| Error::parse(line_no, "value must be exactly one character"))?;
            if key == value {
                return Err(Error::parse(
                    line_no,
                    format!("key and value are both '{key}'"),
                ));
            }
            let tag = Tag::parse(fields[2]).ok_or_else(|| {
                Error::parse(line_no, format!("unknown tag '{}'", fields[2]))
            })?;
            if !set.insert(MisspellingPair { key, value, tag }) {
                report.duplicate_pairs += 1;
            }
        }
        Ok((set, report))
    }

    /// Serializes in the same TSV format `parse` accepts. Keys come out in
    /// code-point order, values in stored order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for pair in self.pairs() {
            out.push(pair.key);
            out.push('\t');
            out.push(pair.value);
            out.push('\t');
            out.push_str(pair.tag.as_str());
            out.push('\n');
        }
        out
    }

    /// Pair-level union with tag combination.
    pub fn merge(&self, other: &ConfusionSet) -> ConfusionSet {
        let mut out = self.clone();
        for pair in other.pairs() {
            out.insert(pair);
        }
        out
    }

    /// Pairs belonging to the requested similarity class (`Both` matches
    /// either). Keys left without values are dropped. Tags are preserved.
    pub fn filter_by_tag(&self, want: TagClass) -> ConfusionSet {
        let mut out = ConfusionSet::new();
        for pair in self.pairs() {
            if pair.tag.matches(want) {
                out.insert(pair);
            }
        }
        out
    }

    /// Partitions `self` into train / unseen-key / unseen-value subsets.
    ///
    /// Step 1 moves `floor(key_holdout_frac * |keys|)` whole keys, with every
    /// candidate, into the unseen-key set. Step 2 samples
    /// `floor(value_key_frac * |eligible|)` of the remaining keys that have at
    /// least `min_train_values + 1` candidates and moves
    /// `ceil(value_holdout_frac * |values|)` candidates per key (capped so at
    /// least `min_train_values` stay) into the unseen-value set. The rest is
    /// the train set. Deterministic in `(self, spec)`.
    pub fn split(&self, spec: &SplitSpec) -> Result<SplitResult> {
        spec.validate()?;
        if self.is_empty() {
            return Err(Error::Empty("cannot split an empty confusion set".into()));
        }

        let keys: Vec<char> = self.keys().collect();

        // Step 1: whole-key holdout.
        let n_hold = floor_frac(spec.key_holdout_frac, keys.len());
        let mut shuffled = keys.clone();
        shuffled.shuffle(&mut substream(spec.seed, "split/keys"));
        let held_keys: BTreeSet<char> = shuffled.iter().take(n_hold).copied().collect();

        let mut s_unseen_k = ConfusionSet::new();
        for &k in &held_keys {
            s_unseen_k.entries.insert(k, self.entries[&k].clone());
        }

        // Step 2: per-key value holdout among the remaining keys.
        let remaining: Vec<char> = keys.iter().filter(|k| !held_keys.contains(k)).copied().collect();
        let mut eligible: Vec<char> = remaining
            .iter()
            .filter(|k| self.entries[k].len() >= spec.min_train_values + 1)
            .copied()
            .collect();
        eligible.shuffle(&mut substream(spec.seed, "split/value-keys"));
        let n_value_keys = floor_frac(spec.value_key_frac, eligible.len());
        let chosen: BTreeSet<char> = eligible.iter().take(n_value_keys).copied().collect();

        let mut s_train = ConfusionSet::new();
        let mut s_unseen_v = ConfusionSet::new();
        for &k in &remaining {
            let values = &self.entries[&k];
            if !chosen.contains(&k) {
                s_train.entries.insert(k, values.clone());
                continue;
            }
            let wanted = ceil_frac(spec.value_holdout_frac, values.len());
            let n_out = wanted.min(values.len() - spec.min_train_values);
            if n_out == 0 {
                s_train.entries.insert(k, values.clone());
                continue;
            }
            let mut order: Vec<usize> = (0..values.len()).collect();
            order.shuffle(&mut substream(spec.seed, &format!("split/values/{k}")));
            let out_idx: BTreeSet<usize> = order.into_iter().take(n_out).collect();
            let mut kept = Vec::with_capacity(values.len() - n_out);
            let mut moved = Vec::with_capacity(n_out);
            for (i, vt) in values.iter().enumerate() {
                if out_idx.contains(&i) {
                    moved.push(*vt);
                } else {
                    kept.push(*vt);
                }
            }
            s_train.entries.insert(k, kept);
            s_unseen_v.entries.insert(k, moved);
        }

        Ok(SplitResult {
            s_train,
            s_unseen_k,
            s_unseen_v,
        })
    }

    /// Collects the distinct `(correct, wrong)` pairs realized in `dataset`
    /// and samples `min(n, available)` of them without replacement.
    ///
    /// Tags are copied from `source` when the pair is found there, otherwise
    /// `Both`.
    pub fn extract_seen_pairs(
        dataset: &[ParallelSentence],
        n: usize,
        seed: u64,
        source: Option<&ConfusionSet>,
    ) -> Result<ConfusionSet> {
        let mut realized: BTreeSet<(char, char)> = BTreeSet::new();
        for sent in dataset {
            for err in &sent.errors {
                realized.insert((err.correct, err.wrong));
            }
        }
        if realized.is_empty() {
            return Err(Error::Empty(
                "no observed pairs: dataset contains no errors".into(),
            ));
        }
        let mut pool: Vec<(char, char)> = realized.into_iter().collect();
        pool.shuffle(&mut substream(seed, "seen-pairs"));
        let mut out = ConfusionSet::new();
        for &(k, v) in pool.iter().take(n) {
            let tag = source.and_then(|s| s.lookup_tag(k, v)).unwrap_or(Tag::Both);
            out.insert(MisspellingPair { key: k, value: v, tag });
        }
        Ok(out)
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// `floor(frac * n)`, nudged so that exact products survive binary rounding
/// (e.g. `(1/3) * 3` must count as 1, not 0).
fn floor_frac(frac: f64, n: usize) -> usize {
    ((frac * n as f64) + 1e-9).floor() as usize
}

/// `ceil(frac * n)` with the matching nudge.
fn ceil_frac(frac: f64, n: usize) -> usize {
    ((frac * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Parameters controlling [`ConfusionSet::split`].
///
/// The fraction defaults reproduce the published key-count proportions of the
/// reference confusion set (about 23% of keys wholly held out; 98% of the
/// remaining multi-value keys lose about 13% of their values).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub seed: u64,
    /// Fraction of keys moved wholly to the unseen-key set.
    pub key_holdout_frac: f64,
    /// Fraction of remaining eligible keys that lose some values.
    pub value_key_frac: f64,
    /// Fraction of each chosen key's values moved to the unseen-value set.
    pub value_holdout_frac: f64,
    /// Minimum number of values every key keeps in the train set.
    pub min_train_values: usize,
}

impl SplitSpec {
    pub const DEFAULT_KEY_HOLDOUT_FRAC: f64 = 0.23;
    pub const DEFAULT_VALUE_KEY_FRAC: f64 = 0.98;
    pub const DEFAULT_VALUE_HOLDOUT_FRAC: f64 = 0.13;

    /// Spec with the default fractions and the given seed.
    pub fn new(seed: u64) -> Self {
        SplitSpec {
            seed,
            key_holdout_frac: Self::DEFAULT_KEY_HOLDOUT_FRAC,
            value_key_frac: Self::DEFAULT_VALUE_KEY_FRAC,
            value_holdout_frac: Self::DEFAULT_VALUE_HOLDOUT_FRAC,
            min_train_values: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.key_holdout_frac) {
            return Err(Error::Invalid(format!(
                "key_holdout_frac must be in [0,1], got {}",
                self.key_holdout_frac
            )));
        }
        if !(0.0..=1.0).contains(&self.value_key_frac) {
            return Err(Error::Invalid(format!(
                "value_key_frac must be in [0,1], got {}",
                self.value_key_frac
            )));
        }
        if self.value_holdout_frac <= 0.0 || self.value_holdout_frac >= 1.0 {
            return Err(Error::Invalid(format!(
                "value_holdout_frac must be in (0,1), got {}",
                self.value_holdout_frac
            )));
        }
        if self.min_train_values < 1 {
            return Err(Error::Invalid(
                "min_train_values must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The three disjointly-constrained subsets produced by [`ConfusionSet::split`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub s_train: ConfusionSet,
    pub s_unseen_k: ConfusionSet,
    pub s_unseen_v: ConfusionSet,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(char, char, Tag)]) -> ConfusionSet {
        let mut s = ConfusionSet::new();
        for &(k, v, t) in pairs {
            s.insert(MisspellingPair { key: k, value: v, tag: t });
        }
        s
    }

    #[test]
    fn parse_two_pairs() {
        let (s, report) = ConfusionSet::parse("是\t适\tP\n规\t现\tG").unwrap();
        assert_eq!(s.stats(), (2, 2));
        assert_eq!(report.duplicate_pairs, 0);
        assert_eq!(s.lookup_tag('是', '适'), Some(Tag::Phonetic));
        assert_eq!(s.lookup_tag('规', '现'), Some(Tag::Graphic));
    }

    #[test]
    fn parse_empty_document() {
        let (s, report) = ConfusionSet::parse("").unwrap();
        assert_eq!(s.stats(), (0, 0));
        assert_eq!(report.duplicate_pairs, 0);
    }

    #[test]
    fn parse_merges_duplicates_with_tag_combination() {
        let (s, report) = ConfusionSet::parse("a\tb\tP\na\tb\tG").unwrap();
        assert_eq!(s.stats(), (1, 1));
        assert_eq!(s.lookup_tag('a', 'b'), Some(Tag::Both));
        assert_eq!(report.duplicate_pairs, 1);
    }

    #[test]
    fn parse_skips_comments_blank_lines_and_crlf() {
        let (s, _) = ConfusionSet::parse("# header\n\n是\t适\tP\r\n").unwrap();
        assert_eq!(s.stats(), (1, 1));
    }

    #[test]
    fn parse_rejects_malformed_lines_with_line_numbers() {
        let err = ConfusionSet::parse("a\tb\tP\nx\ty").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = ConfusionSet::parse("ab\tc\tP").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let err = ConfusionSet::parse("a\tbc\tP").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let err = ConfusionSet::parse("a\ta\tP").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let err = ConfusionSet::parse("a\tb\tQ").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let x = set(&[('a', 'x', Tag::Phonetic), ('b', 'y', Tag::Graphic)]);
        assert_eq!(x.merge(&ConfusionSet::new()), x);
        assert_eq!(ConfusionSet::new().merge(&x), x);
    }

    #[test]
    fn merge_combines_tags() {
        let a = set(&[('a', 'x', Tag::Phonetic)]);
        let b = set(&[('a', 'x', Tag::Graphic)]);
        let m = a.merge(&b);
        assert_eq!(m.num_pairs(), 1);
        assert_eq!(m.lookup_tag('a', 'x'), Some(Tag::Both));
    }

    #[test]
    fn merge_is_pair_level_union() {
        let a = set(&[('a', 'x', Tag::Phonetic), ('a', 'y', Tag::Phonetic)]);
        let b = set(&[('a', 'y', Tag::Phonetic), ('b', 'z', Tag::Graphic)]);
        let m = a.merge(&b);
        assert_eq!(m.num_pairs(), 3);
        assert_eq!(m.pair_set(), a.pair_set().union(&b.pair_set()).copied().collect());
    }

    #[test]
    fn filter_selects_matching_tags() {
        let s = set(&[('a', 'x', Tag::Phonetic), ('a', 'y', Tag::Graphic)]);
        let p = s.filter_by_tag(TagClass::Phonetic);
        assert_eq!(p.pair_set().into_iter().collect::<Vec<_>>(), vec![('a', 'x')]);
    }

    #[test]
    fn filter_both_matches_either_class() {
        let s = set(&[('a', 'x', Tag::Both)]);
        assert_eq!(s.filter_by_tag(TagClass::Graphic).num_pairs(), 1);
        assert_eq!(s.filter_by_tag(TagClass::Phonetic).num_pairs(), 1);
    }

    #[test]
    fn filter_drops_keys_without_matching_values() {
        let s = set(&[('a', 'x', Tag::Phonetic), ('b', 'y', Tag::Phonetic)]);
        let g = s.filter_by_tag(TagClass::Graphic);
        assert!(g.is_empty());
    }

    #[test]
    fn stats_counts_keys_and_pairs() {
        assert_eq!(ConfusionSet::new().stats(), (0, 0));
        let s = set(&[
            ('a', 'x', Tag::Phonetic),
            ('a', 'y', Tag::Graphic),
            ('b', 'z', Tag::Both),
        ]);
        assert_eq!(s.stats(), (2, 3));
    }

    #[test]
    fn split_degenerate_spec_keeps_everything_in_train() {
        let s = set(&[
            ('a', 'x', Tag::Phonetic),
            ('a', 'y', Tag::Graphic),
            ('b', 'u', Tag::Phonetic),
        ]);
        let spec = SplitSpec {
            seed: 1,
            key_holdout_frac: 0.0,
            value_key_frac: 0.0,
            value_holdout_frac: 0.5,
            min_train_values: 1,
        };
        let r = s.split(&spec).unwrap();
        assert_eq!(r.s_train, s);
        assert!(r.s_unseen_k.is_empty());
        assert!(r.s_unseen_v.is_empty());
    }

    /// Brute-force check of all three partition invariants.
    fn assert_split_invariants(input: &ConfusionSet, r: &SplitResult) {
        let train_keys: BTreeSet<char> = r.s_train.keys().collect();
        for k in r.s_unseen_k.keys() {
            assert!(!train_keys.contains(&k), "unseen-k key {k} also in train");
        }
        for k in r.s_unseen_v.keys() {
            if let Some(train_vals) = r.s_train.candidates(k) {
                let tv: BTreeSet<char> = train_vals.iter().map(|(v, _)| *v).collect();
                for (v, _) in r.s_unseen_v.candidates(k).unwrap() {
                    assert!(!tv.contains(v), "value {v} of key {k} in both train and unseen-v");
                }
            }
        }
        let mut union = r.s_train.pair_set();
        let uk = r.s_unseen_k.pair_set();
        let uv = r.s_unseen_v.pair_set();
        assert!(union.is_disjoint(&uk));
        assert!(union.is_disjoint(&uv));
        assert!(uk.is_disjoint(&uv));
        union.extend(&uk);
        union.extend(&uv);
        assert_eq!(union, input.pair_set());
    }

    #[test]
    fn split_small_example_holds_invariants() {
        let s = set(&[
            ('a', 'x', Tag::Phonetic),
            ('a', 'y', Tag::Phonetic),
            ('a', 'z', Tag::Graphic),
            ('b', 'u', Tag::Phonetic),
            ('c', 'v', Tag::Graphic),
            ('c', 'w', Tag::Graphic),
        ]);
        let spec = SplitSpec {
            seed: 7,
            key_holdout_frac: 1.0 / 3.0,
            value_key_frac: 1.0,
            value_holdout_frac: 0.4,
            min_train_values: 1,
        };
        let r = s.split(&spec).unwrap();
        assert_eq!(r.s_unseen_k.num_keys(), 1, "exactly one whole key held out");
        // Every remaining eligible key loses ceil(0.4 * n) values, capped so
        // one value stays.
        for k in ['a', 'b', 'c'] {
            if r.s_unseen_k.contains_key(k) {
                continue;
            }
            let n = s.candidates(k).unwrap().len();
            let expected = if n >= 2 {
                (((0.4 * n as f64) - 1e-9).ceil() as usize).min(n - 1)
            } else {
                0
            };
            let moved = r.s_unseen_v.candidates(k).map_or(0, <[_]>::len);
            assert_eq!(moved, expected, "key {k}");
        }
        assert_split_invariants(&s, &r);
    }

    #[test]
    fn split_is_deterministic() {
        let s = set(&[
            ('a', 'x', Tag::Phonetic),
            ('a', 'y', Tag::Phonetic),
            ('b', 'u', Tag::Phonetic),
            ('c', 'v', Tag::Graphic),
            ('c', 'w', Tag::Graphic),
            ('d', 'p', Tag::Both),
            ('d', 'q', Tag::Both),
        ]);
        let spec = SplitSpec::new(99);
        assert_eq!(s.split(&spec).unwrap(), s.split(&spec).unwrap());
    }

    #[test]
    fn split_rejects_bad_specs_and_empty_input() {
        let s = set(&[('a', 'x', Tag::Phonetic)]);
        let mut spec = SplitSpec::new(1);
        spec.key_holdout_frac = 1.5;
        assert!(matches!(s.split(&spec).unwrap_err(), Error::Invalid(_)));
        let mut spec = SplitSpec::new(1);
        spec.value_holdout_frac = 0.0;
        assert!(matches!(s.split(&spec).unwrap_err(), Error::Invalid(_)));
        assert!(matches!(
            ConfusionSet::new().split(&SplitSpec::new(1)).unwrap_err(),
            Error::Empty(_)
        ));
    }

    #[test]
    fn split_default_fractions_track_reference_key_proportions() {
        // Synthetic set at the reference scale: 5303 keys, every key with
        // two to five values. The published key counts are 1228 unseen-k,
        // 3990 value-holdout and 4075 train keys; the defaults should land
        // within 2% of those proportions.
        let mut s = ConfusionSet::new();
        let base = 0x4E00u32;
        for i in 0..5303u32 {
            let key = char::from_u32(base + i).unwrap();
            let n_values = 2 + (i % 4);
            for j in 0..n_values {
                let value = char::from_u32(base + 6000 + (i * 7 + j * 131) % 14000).unwrap();
                if value == key {
                    continue;
                }
                s.insert(MisspellingPair {
                    key,
                    value,
                    tag: if j % 2 == 0 { Tag::Phonetic } else { Tag::Graphic },
                });
            }
        }
        let total_keys = s.num_keys() as f64;
        let r = s.split(&SplitSpec::new(2024)).unwrap();
        assert_split_invariants(&s, &r);

        let unseen_k = r.s_unseen_k.num_keys() as f64;
        let value_hold = r.s_unseen_v.num_keys() as f64;
        let train = r.s_train.num_keys() as f64;
        let close = |got: f64, want: f64| (got - want).abs() / want < 0.02;
        assert!(close(unseen_k / total_keys, 1228.0 / 5303.0), "unseen-k {unseen_k}");
        assert!(close(value_hold / total_keys, 3990.0 / 5303.0), "value-holdout {value_hold}");
        assert!(close(train / total_keys, 4075.0 / 5303.0), "train {train}");
    }

    #[test]
    fn tsv_round_trip() {
        let s = set(&[
            ('是', '适', Tag::Phonetic),
            ('规', '现', Tag::Graphic),
            ('规', '観', Tag::Both),
        ]);
        let (back, report) = ConfusionSet::parse(&s.to_tsv()).unwrap();
        assert_eq!(back, s);
        assert_eq!(report.duplicate_pairs, 0);
    }
}

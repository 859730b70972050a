//! Sentence types shared across synthesis, evaluation and analysis.

use crate::error::{Error, Result};

/// A clean (error-free) corpus sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanSentence {
    /// Stable identifier, unique within a corpus.
    pub id: String,
    pub text: Vec<char>,
}

impl CleanSentence {
    pub fn new(id: impl Into<String>, text: &str) -> Self {
        CleanSentence {
            id: id.into(),
            text: text.chars().collect(),
        }
    }
}

/// One substituted character inside a [`ParallelSentence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpellingError {
    /// 0-based character index.
    pub position: usize,
    /// The character appearing in the source.
    pub wrong: char,
    /// The character it should be.
    pub correct: char,
}

/// An aligned (source, target) sentence pair with explicit error positions.
///
/// Errors are substitution-only, so `source` and `target` always have the
/// same length and `errors` is exactly the sorted list of differing positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelSentence {
    pub id: String,
    pub source: Vec<char>,
    pub target: Vec<char>,
    pub errors: Vec<SpellingError>,
}

impl ParallelSentence {
    /// Builds a pair from aligned character sequences, deriving `errors` from
    /// the positions where they differ.
    pub fn from_aligned(id: impl Into<String>, source: Vec<char>, target: Vec<char>) -> Result<Self> {
        let id = id.into();
        if source.len() != target.len() {
            return Err(Error::Inconsistent(format!(
                "sentence {id}: source has {} characters but target has {}",
                source.len(),
                target.len()
            )));
        }
        let errors = diff_errors(&source, &target);
        Ok(ParallelSentence {
            id,
            source,
            target,
            errors,
        })
    }

    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn source_string(&self) -> String {
        self.source.iter().collect()
    }

    pub fn target_string(&self) -> String {
        self.target.iter().collect()
    }

    /// Realized `(correct, wrong)` misspelling pairs of this sentence.
    pub fn realized_pairs(&self) -> impl Iterator<Item = (char, char)> + '_ {
        self.errors.iter().map(|e| (e.correct, e.wrong))
    }

    /// Re-derives the error list from `source`/`target` and checks it matches
    /// the stored one.
    pub fn validate(&self) -> Result<()> {
        if self.source.len() != self.target.len() {
            return Err(Error::Inconsistent(format!(
                "sentence {}: length mismatch",
                self.id
            )));
        }
        let expected = diff_errors(&self.source, &self.target);
        if expected != self.errors {
            return Err(Error::Inconsistent(format!(
                "sentence {}: error list does not match source/target diff",
                self.id
            )));
        }
        Ok(())
    }
}

fn diff_errors(source: &[char], target: &[char]) -> Vec<SpellingError> {
    source
        .iter()
        .zip(target)
        .enumerate()
        .filter(|(_, (s, t))| s != t)
        .map(|(position, (s, t))| SpellingError {
            position,
            wrong: *s,
            correct: *t,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_aligned_diffs_positions() {
        let p = ParallelSentence::from_aligned(
            "1",
            "语言适有现律".chars().collect(),
            "语言是有规律".chars().collect(),
        )
        .unwrap();
        assert_eq!(p.errors.len(), 2);
        assert_eq!(p.errors[0].position, 2);
        assert_eq!((p.errors[0].wrong, p.errors[0].correct), ('适', '是'));
        assert_eq!(p.errors[1].position, 4);
        assert_eq!((p.errors[1].wrong, p.errors[1].correct), ('现', '规'));
        p.validate().unwrap();
    }

    #[test]
    fn from_aligned_rejects_length_mismatch() {
        let err = ParallelSentence::from_aligned("x", vec!['a'], vec!['a', 'b']).unwrap_err();
        assert!(err.to_string().contains('x'));
    }

    #[test]
    fn validate_catches_tampered_errors() {
        let mut p =
            ParallelSentence::from_aligned("1", vec!['a', 'b'], vec!['a', 'c']).unwrap();
        p.errors.clear();
        assert!(p.validate().is_err());
    }
}

//! Word and character-n-gram vocabularies built from the training set.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::dataset::{PredictionInstance, PLACEHOLDER};

/// N-gram lengths are fixed to 1..=5.
pub const NGRAM_MIN: usize = 1;
pub const NGRAM_MAX: usize = 5;

/// Word id 0 is the out-of-vocabulary row.
pub const OOV_ID: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocab {
    pub words: Vec<String>,
    pub ngrams: Vec<String>,
    #[serde(skip)]
    word_ids: HashMap<String, usize>,
    #[serde(skip)]
    ngram_ids: HashMap<String, usize>,
}

/// All contiguous character substrings of lengths 1..=5, in reading order.
/// No boundary markers are added, so a suffix shares its n-grams between
/// nouns and verbs.
pub fn char_ngrams(word: &str) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut out = Vec::new();
    for len in NGRAM_MIN..=NGRAM_MAX.min(chars.len()) {
        for start in 0..=chars.len() - len {
            out.push(chars[start..start + len].iter().collect());
        }
    }
    out
}

impl Vocab {
    /// Builds the vocabulary from training instances. Words under `min_count`
    /// fall back to the OOV row; n-grams are kept at min-count 1 so suffixes
    /// are always in vocabulary.
    pub fn build(instances: &[PredictionInstance], min_count: usize) -> Vocab {
        let mut word_counts: BTreeMap<&str, usize> = BTreeMap::new();
        for inst in instances {
            for tok in &inst.tokens {
                if tok != PLACEHOLDER {
                    *word_counts.entry(tok.as_str()).or_insert(0) += 1;
                }
            }
        }
        let mut words = vec!["<oov>".to_string()];
        let mut ngram_set: BTreeMap<String, ()> = BTreeMap::new();
        for (word, count) in &word_counts {
            if *count >= min_count {
                words.push((*word).to_string());
            }
            for ng in char_ngrams(word) {
                ngram_set.insert(ng, ());
            }
        }
        let ngrams: Vec<String> = ngram_set.into_keys().collect();
        let mut vocab = Vocab { words, ngrams, word_ids: HashMap::new(), ngram_ids: HashMap::new() };
        vocab.rebuild_index();
        vocab
    }

    /// Rebuilds a vocabulary from explicit lists (checkpoint loading, tests).
    /// `words[0]` must be the OOV entry.
    pub fn from_lists(words: Vec<String>, ngrams: Vec<String>) -> Vocab {
        let mut v = Vocab { words, ngrams, word_ids: HashMap::new(), ngram_ids: HashMap::new() };
        v.rebuild_index();
        v
    }

    pub fn rebuild_index(&mut self) {
        self.word_ids = self.words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        self.ngram_ids = self.ngrams.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    }

    pub fn n_words(&self) -> usize {
        self.words.len()
    }

    pub fn n_ngrams(&self) -> usize {
        self.ngrams.len()
    }

    pub fn word_id(&self, word: &str) -> usize {
        *self.word_ids.get(word).unwrap_or(&OOV_ID)
    }

    /// Ids of the word's known n-grams; unseen n-grams are skipped.
    pub fn ngram_ids(&self, word: &str) -> Vec<usize> {
        char_ngrams(word)
            .into_iter()
            .filter_map(|ng| self.ngram_ids.get(&ng).copied())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ngram_counts() {
        assert_eq!(char_ngrams("a"), vec!["a"]);
        // 4 + 3 + 2 + 1 = 10 substrings of lengths 1..=4
        assert_eq!(char_ngrams("took").len(), 10);
        // for a 6-char word: 6 + 5 + 4 + 3 + 2 = 20 (lengths 1..=5)
        assert_eq!(char_ngrams("broker").len(), 20);
    }

    #[test]
    fn shared_suffix_ngrams() {
        let took: std::collections::HashSet<_> = char_ngrams("took").into_iter().collect();
        let marked: std::collections::HashSet<_> = char_ngrams("tookkarker").into_iter().collect();
        assert!(took.iter().all(|g| marked.contains(g)));
    }
}

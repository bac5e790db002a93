use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::io::decode_utf8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    freq: u64,
    order: usize,
}

/// Word list used for greedy longest-match segmentation.
///
/// A word listed more than once keeps its highest frequency; among equal
/// frequencies the earliest listing wins.
#[derive(Debug, Clone)]
pub struct Dictionary {
    words: HashMap<String, Entry>,
    max_chars: usize,
}

impl Dictionary {
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut map: HashMap<String, Entry> = HashMap::new();
        for (order, (word, freq)) in words.into_iter().enumerate() {
            let word: String = word.into();
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::Argument(format!(
                    "dictionary word {word:?} is empty or contains whitespace"
                )));
            }
            map.entry(word)
                .and_modify(|e| {
                    if freq > e.freq {
                        e.freq = freq;
                    }
                })
                .or_insert(Entry { freq, order });
        }
        if map.is_empty() {
            return Err(Error::Argument("segmentation dictionary is empty".into()));
        }
        let max_chars = map.keys().map(|w| w.chars().count()).max().unwrap_or(1);
        Ok(Self { words: map, max_chars })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.words.get(word).map(|e| e.freq)
    }

    /// Words in listing order, with their effective frequency.
    pub fn entries(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.words.iter().map(|(w, e)| (w.as_str(), e.freq, e.order)).collect();
        v.sort_by_key(|&(_, _, o)| o);
        v.into_iter().map(|(w, f, _)| (w, f)).collect()
    }
}

/// Parses a dictionary file: one `word [freq] [tag]` entry per line, `#`
/// starts a comment. A missing frequency counts as 1.
pub fn parse_dictionary(bytes: &[u8]) -> Result<Dictionary> {
    let text = decode_utf8(bytes)?;
    let mut words = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().unwrap_or_default();
        let freq = match parts.next() {
            Some(f) => f
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("dictionary line {}: bad frequency {f:?}", idx + 1)))?,
            None => 1,
        };
        words.push((word.to_string(), freq));
    }
    Dictionary::from_words(words)
}

/// Greedy longest-match segmentation. Whitespace separates and is dropped;
/// characters not covered by any dictionary word become one-character tokens.
pub fn segment(text: &str, dictionary: &Dictionary) -> Vec<String> {
    let bounds: Vec<(usize, char)> = text.char_indices().collect();
    let n = bounds.len();
    let byte_at = |i: usize| if i == n { text.len() } else { bounds[i].0 };

    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        if bounds[i].1.is_whitespace() {
            i += 1;
            continue;
        }
        let mut run_end = i;
        while run_end < n && !bounds[run_end].1.is_whitespace() && run_end - i < dictionary.max_chars {
            run_end += 1;
        }
        let mut taken = 1;
        for len in (2..=run_end - i).rev() {
            if dictionary.contains(&text[byte_at(i)..byte_at(i + len)]) {
                taken = len;
                break;
            }
        }
        tokens.push(text[byte_at(i)..byte_at(i + taken)].to_string());
        i += taken;
    }
    tokens
}

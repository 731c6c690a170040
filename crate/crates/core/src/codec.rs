//! Alphabet <-> output-index mapping.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered alphabet mapping characters to output-layer indices.
///
/// Index 0 is reserved for the CTC blank; characters occupy indices
/// `1..=chars.len()` in codepoint order. The serialized form is the bare
/// character string (blank implicit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Codec {
    chars: Vec<char>,
    index: HashMap<char, usize>,
}

impl Codec {
    /// Build from any character iterator; duplicates collapse, order is
    /// codepoint-sorted. A space is always included.
    pub fn from_chars(chars: impl IntoIterator<Item = char>) -> Self {
        let mut set: Vec<char> = chars.into_iter().chain(std::iter::once(' ')).collect();
        set.sort_unstable();
        set.dedup();
        let index = set.iter().enumerate().map(|(i, &c)| (c, i + 1)).collect();
        Codec { chars: set, index }
    }

    /// Number of network outputs: characters plus the blank.
    pub fn num_classes(&self) -> usize {
        self.chars.len() + 1
    }

    /// Characters in index order (index 1 first; blank not included).
    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    /// Output index of a character, if encodable.
    pub fn index_of(&self, c: char) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// Character at a non-blank output index.
    pub fn char_at(&self, index: usize) -> Option<char> {
        if index == 0 {
            None
        } else {
            self.chars.get(index - 1).copied()
        }
    }

    /// Encode a transcription to label indices (never blank).
    pub fn encode(&self, text: &str) -> Result<Vec<usize>> {
        text.chars()
            .map(|c| {
                self.index_of(c).ok_or_else(|| {
                    Error::CodecMismatch(format!("character {c:?} not in codec"))
                })
            })
            .collect()
    }

    /// True if every character of `text` is encodable.
    pub fn covers(&self, text: &str) -> bool {
        text.chars().all(|c| self.index.contains_key(&c))
    }
}

impl From<Codec> for String {
    fn from(c: Codec) -> String {
        c.chars.into_iter().collect()
    }
}

impl TryFrom<String> for Codec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut sorted = chars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != chars {
            return Err(Error::CheckpointFormat(
                "codec string must be sorted and duplicate-free".into(),
            ));
        }
        Ok(Codec::from_chars(chars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_with_blank_reserved() {
        let c = Codec::from_chars("ba".chars());
        assert_eq!(c.chars(), &[' ', 'a', 'b']);
        assert_eq!(c.num_classes(), 4);
        assert_eq!(c.index_of('a'), Some(2));
        assert_eq!(c.char_at(0), None);
        assert_eq!(c.char_at(3), Some('b'));
    }

    #[test]
    fn space_always_included() {
        let c = Codec::from_chars("xyz".chars());
        assert_eq!(c.index_of(' '), Some(1));
    }

    #[test]
    fn encode_rejects_unknown() {
        let c = Codec::from_chars("ab".chars());
        assert_eq!(c.encode("ab").unwrap(), vec![2, 3]);
        assert!(c.encode("abc").is_err());
    }

    #[test]
    fn serde_round_trip() {
        let c = Codec::from_chars("abz".chars());
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "\" abz\"");
        let back: Codec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}

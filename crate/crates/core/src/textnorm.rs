//! Transcription normalization: an ordered, configurable rule pipeline
//! applied to ground truth and recognizer output alike.
//!
//! The default pipeline runs, in order:
//!
//! 1. [`Rule::CodepointMap`] — explicit sequence substitutions (ligature
//!    resolution, quote unification, macron→tilde, I/J unification, ...)
//!    plus removal of unmapped private-use-area codepoints,
//! 2. [`Rule::PunctuationSpacing`] — no whitespace before `. , ; : ! ? /`,
//!    one space after unless line-final or already followed by whitespace,
//! 3. [`Rule::WhitespaceCollapse`] — whitespace runs become a single space,
//! 4. [`Rule::WhitespaceTrim`].
//!
//! This order makes the composite idempotent: applying the full rule set
//! twice equals applying it once.

use std::collections::HashMap;
use std::path::Path;

use crate::corpus::Corpus;
use crate::{Codec, Error, Result};

/// The embedded default mapping table (`source<TAB>target` lines).
pub const DEFAULT_TABLE: &str = include_str!("textnorm/default_rules.tsv");

/// Characters treated as punctuation by the spacing rule. `/` is included
/// because virgule/comma confusions dominate historical material.
pub const PUNCTUATION: &[char] = &['.', ',', ';', ':', '!', '?', '/'];

const PUA_START: u32 = 0xE000;
const PUA_END: u32 = 0xF8FF;

fn is_pua(c: char) -> bool {
    (PUA_START..=PUA_END).contains(&(c as u32))
}

/// One normalization rule.
#[derive(Debug, Clone)]
pub enum Rule {
    /// Ordered sequence substitutions; longest source match wins at each
    /// position. Unmapped PUA codepoints are dropped by this rule.
    CodepointMap(CodepointMap),
    /// Delete whitespace before punctuation, enforce one space after.
    PunctuationSpacing,
    /// Collapse whitespace chains to a single ASCII space.
    WhitespaceCollapse,
    /// Remove leading and trailing whitespace.
    WhitespaceTrim,
}

/// Compiled substitution table.
#[derive(Debug, Clone, Default)]
pub struct CodepointMap {
    // first char -> candidate (source, target) pairs, longest source first
    by_first: HashMap<char, Vec<(Vec<char>, String)>>,
}

impl CodepointMap {
    /// Build from `(source, target)` pairs. Targets must not contain PUA
    /// codepoints; sources must be nonempty.
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut by_first: HashMap<char, Vec<(Vec<char>, String)>> = HashMap::new();
        for (src, tgt) in pairs {
            let chars: Vec<char> = src.chars().collect();
            let first = *chars.first().ok_or_else(|| {
                Error::InvalidInput("codepoint map source must be nonempty".into())
            })?;
            if let Some(bad) = tgt.chars().find(|&c| is_pua(c)) {
                return Err(Error::InvalidInput(format!(
                    "codepoint map target contains PUA codepoint U+{:04X}",
                    bad as u32
                )));
            }
            by_first.entry(first).or_default().push((chars, tgt));
        }
        for entries in by_first.values_mut() {
            entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
        }
        Ok(CodepointMap { by_first })
    }

    /// Parse a `source<TAB>target` table; `#` starts a comment line.
    pub fn parse_table(table: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in table.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (src, tgt) = line.split_once('\t').ok_or_else(|| {
                Error::InvalidInput(format!(
                    "rule table line {}: expected source<TAB>target",
                    lineno + 1
                ))
            })?;
            pairs.push((src.to_string(), tgt.to_string()));
        }
        CodepointMap::new(pairs)
    }

    fn apply(&self, text: &str) -> String {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        'outer: while i < chars.len() {
            if let Some(entries) = self.by_first.get(&chars[i]) {
                for (src, tgt) in entries {
                    if chars[i..].starts_with(src) {
                        out.push_str(tgt);
                        i += src.len();
                        continue 'outer;
                    }
                }
            }
            if !is_pua(chars[i]) {
                out.push(chars[i]);
            }
            i += 1;
        }
        out
    }
}

fn apply_punctuation_spacing(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + 8);
    for (i, &c) in chars.iter().enumerate() {
        if PUNCTUATION.contains(&c) {
            while out.ends_with(char::is_whitespace) {
                out.pop();
            }
            out.push(c);
            match chars.get(i + 1) {
                Some(next) if !next.is_whitespace() => out.push(' '),
                _ => {}
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn apply_whitespace_collapse(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_run = false;
    for c in text.chars() {
        if c.is_whitespace() {
            if !in_run {
                out.push(' ');
                in_run = true;
            }
        } else {
            out.push(c);
            in_run = false;
        }
    }
    out
}

/// An ordered list of rules applied as a pipeline.
#[derive(Debug, Clone)]
pub struct NormalizationRuleSet {
    rules: Vec<Rule>,
}

impl Default for NormalizationRuleSet {
    fn default() -> Self {
        NormalizationRuleSet::with_table(DEFAULT_TABLE).expect("embedded table is valid")
    }
}

impl NormalizationRuleSet {
    pub fn new(rules: Vec<Rule>) -> Self {
        NormalizationRuleSet { rules }
    }

    /// The standard pipeline around a custom mapping table.
    pub fn with_table(table: &str) -> Result<Self> {
        Ok(NormalizationRuleSet::new(vec![
            Rule::CodepointMap(CodepointMap::parse_table(table)?),
            Rule::PunctuationSpacing,
            Rule::WhitespaceCollapse,
            Rule::WhitespaceTrim,
        ]))
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let table = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        NormalizationRuleSet::with_table(&table)
    }

    /// Add the evaluation-only virgule fold (`/` → `,`). Off by default:
    /// the two glyphs are transcribed inconsistently across corpora, so the
    /// fold is meaningful only when comparing against such ground truth.
    pub fn fold_virgula(mut self) -> Self {
        let map = CodepointMap::new([("/".to_string(), ",".to_string())]).unwrap();
        self.rules.insert(0, Rule::CodepointMap(map));
        self
    }
}

/// Apply the rule pipeline. Unknown characters pass through unchanged;
/// the result is idempotent under re-application.
pub fn normalize(text: &str, rules: &NormalizationRuleSet) -> String {
    let mut cur = text.to_string();
    for rule in &rules.rules {
        cur = match rule {
            Rule::CodepointMap(map) => map.apply(&cur),
            Rule::PunctuationSpacing => apply_punctuation_spacing(&cur),
            Rule::WhitespaceCollapse => apply_whitespace_collapse(&cur),
            Rule::WhitespaceTrim => cur.trim().to_string(),
        };
    }
    cur
}

/// Build the training codec from every transcription in the corpus:
/// the codepoint-sorted character set, blank reserved at index 0, space
/// always included. Transcriptions are passed through `rules` first
/// (a no-op for already-normalized text).
pub fn alphabet_of(corpus: &Corpus, rules: &NormalizationRuleSet) -> Result<Codec> {
    let mut chars = Vec::new();
    let mut any = false;
    for work in &corpus.works {
        for line in &work.lines {
            any = true;
            chars.extend(normalize(&line.transcription, rules).chars());
        }
    }
    if !any {
        return Err(Error::InvalidInput(
            "cannot build a codec from an empty corpus".into(),
        ));
    }
    Ok(Codec::from_chars(chars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(s: &str) -> String {
        normalize(s, &NormalizationRuleSet::default())
    }

    #[test]
    fn whitespace_and_punctuation_golden() {
        assert_eq!(norm("  foo ,bar  "), "foo, bar");
    }

    #[test]
    fn consonantal_ligatures_resolve_vowel_ligatures_stay() {
        assert_eq!(norm("ﬀ"), "ff");
        assert_eq!(norm("æ"), "æ");
        assert_eq!(norm("œconomia oﬃcia"), "œconomia officia");
    }

    #[test]
    fn macron_to_tilde() {
        assert_eq!(norm("ā"), "ã");
        assert_eq!(norm("a\u{0304}"), "ã");
        assert_eq!(norm("q\u{0304}"), "q\u{0303}");
    }

    #[test]
    fn quote_unification() {
        assert_eq!(norm("‘a’ “b” «c»"), "'a' \"b\" \"c\"");
    }

    #[test]
    fn capital_i_and_j_unify() {
        assert_eq!(norm("Iam"), "Jam");
        assert_eq!(norm("Jam"), "Jam");
    }

    #[test]
    fn empty_input() {
        assert_eq!(norm(""), "");
    }

    #[test]
    fn long_s_kept_r_rotunda_folded() {
        assert_eq!(norm("ſ"), "ſ");
        assert_eq!(norm("\u{A75B}"), "r");
    }

    #[test]
    fn pua_dropped() {
        assert_eq!(norm("a\u{E123}b"), "ab");
    }

    #[test]
    fn punctuation_runs_stay_stable() {
        let once = norm("foo,,bar");
        assert_eq!(once, norm(&once));
    }

    #[test]
    fn fold_virgula_is_opt_in() {
        assert_eq!(norm("a/b"), "a/ b");
        let folded = NormalizationRuleSet::default().fold_virgula();
        assert_eq!(normalize("a/b", &folded), "a, b");
    }

    #[test]
    fn map_rejects_pua_target() {
        assert!(CodepointMap::new([("x".into(), "\u{E000}".into())]).is_err());
    }

    #[test]
    fn table_parse_errors_carry_line_numbers() {
        let err = CodepointMap::parse_table("a\tb\nbroken line\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}

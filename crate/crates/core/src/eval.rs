//! CER computation, edit-script extraction and confusion reporting.
//!
//! All comparisons operate on Unicode codepoint sequences. Pairs should be
//! run through the same normalization rules as the training data first;
//! [`normalize_pairs`] applies the textnorm pipeline plus NFC to both
//! sides.

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::textnorm::{normalize, NormalizationRuleSet};
use crate::{Error, Result};

/// One step of an optimal edit script.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Match(char),
    Substitute(char, char),
    Insert(char),
    Delete(char),
}

/// Optimal-cost alignment between a ground-truth string and a prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditAlignment {
    pub ops: Vec<EditOp>,
}

impl EditAlignment {
    /// Number of non-match operations; equals the Levenshtein distance.
    pub fn cost(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| !matches!(op, EditOp::Match(_)))
            .count()
    }

    /// Replay the script on the ground truth, reconstructing the prediction.
    pub fn replay(&self) -> String {
        self.ops
            .iter()
            .filter_map(|op| match op {
                EditOp::Match(c) => Some(*c),
                EditOp::Substitute(_, p) => Some(*p),
                EditOp::Insert(p) => Some(*p),
                EditOp::Delete(_) => None,
            })
            .collect()
    }
}

/// Unit-cost Levenshtein distance over codepoints.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// One optimal alignment with the deterministic backtrace preference
/// match > substitute > delete > insert.
pub fn align(gt: &str, pred: &str) -> EditAlignment {
    let a: Vec<char> = gt.chars().collect();
    let b: Vec<char> = pred.chars().collect();
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = (d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1)
                .min(d[i - 1][j - 1] + cost);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && a[i - 1] == b[j - 1] && d[i][j] == d[i - 1][j - 1] {
            ops.push(EditOp::Match(a[i - 1]));
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1 {
            ops.push(EditOp::Substitute(a[i - 1], b[j - 1]));
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            ops.push(EditOp::Delete(a[i - 1]));
            i -= 1;
        } else {
            ops.push(EditOp::Insert(b[j - 1]));
            j -= 1;
        }
    }
    ops.reverse();
    EditAlignment { ops }
}

/// Corpus-level CER summary (micro-average: edits summed before division).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CerSummary {
    pub cer: f64,
    pub total_errors: usize,
    pub total_gt_chars: usize,
}

/// Micro-averaged character error rate over `(gt, pred)` pairs.
pub fn cer<S: AsRef<str>, T: AsRef<str>>(pairs: &[(S, T)]) -> Result<CerSummary> {
    let total_gt_chars: usize = pairs.iter().map(|(g, _)| g.as_ref().chars().count()).sum();
    if total_gt_chars == 0 {
        return Err(Error::InvalidInput(
            "cannot compute CER against empty ground truth".into(),
        ));
    }
    let total_errors: usize = pairs
        .iter()
        .map(|(g, p)| levenshtein(g.as_ref(), p.as_ref()))
        .sum();
    Ok(CerSummary {
        cer: total_errors as f64 / total_gt_chars as f64,
        total_errors,
        total_gt_chars,
    })
}

/// One confusion-table row. `gt` / `pred` are display tokens: whitespace
/// renders as `␣`, the empty side of an insert/delete as `""`.
#[derive(Debug, Clone, Serialize)]
pub struct ConfusionRow {
    pub gt: String,
    pub pred: String,
    pub count: usize,
    pub percent: f64,
}

/// Aggregated confusion counts in the style of an error table:
/// the `top_n` most common confusions plus a remaining bucket.
#[derive(Debug, Clone, Serialize)]
pub struct ConfusionReport {
    pub rows: Vec<ConfusionRow>,
    pub remaining_count: usize,
    pub remaining_percent: f64,
    pub total_errors: usize,
    pub total_gt_chars: usize,
    pub cer: f64,
}

fn render_token(c: Option<char>) -> String {
    match c {
        None => String::new(),
        Some(c) if c.is_whitespace() => "␣".to_string(),
        Some(c) => c.to_string(),
    }
}

/// Count every non-match edit op across all pair alignments and report the
/// `top_n` most common confusions. Ties break lexicographically by gt then
/// pred token; percentages are fractions of total errors.
pub fn confusion_table<S: AsRef<str>, T: AsRef<str>>(
    pairs: &[(S, T)],
    top_n: usize,
) -> Result<ConfusionReport> {
    if top_n == 0 {
        return Err(Error::InvalidInput("top_n must be at least 1".into()));
    }
    let summary = cer(pairs)?;
    let mut counts: std::collections::HashMap<(Option<char>, Option<char>), usize> =
        std::collections::HashMap::new();
    for (g, p) in pairs {
        for op in align(g.as_ref(), p.as_ref()).ops {
            let key = match op {
                EditOp::Match(_) => continue,
                EditOp::Substitute(g, p) => (Some(g), Some(p)),
                EditOp::Delete(g) => (Some(g), None),
                EditOp::Insert(p) => (None, Some(p)),
            };
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<((Option<char>, Option<char>), usize)> = counts.into_iter().collect();
    entries.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| a.0 .0.cmp(&b.0 .0))
            .then_with(|| a.0 .1.cmp(&b.0 .1))
    });
    let total_errors = summary.total_errors;
    let pct = |count: usize| {
        if total_errors == 0 {
            0.0
        } else {
            count as f64 * 100.0 / total_errors as f64
        }
    };
    let rows: Vec<ConfusionRow> = entries
        .iter()
        .take(top_n)
        .map(|&((g, p), count)| ConfusionRow {
            gt: render_token(g),
            pred: render_token(p),
            count,
            percent: pct(count),
        })
        .collect();
    let shown: usize = rows.iter().map(|r| r.count).sum();
    let remaining_count = total_errors - shown;
    Ok(ConfusionReport {
        rows,
        remaining_count,
        remaining_percent: pct(remaining_count),
        total_errors,
        total_gt_chars: summary.total_gt_chars,
        cer: summary.cer,
    })
}

impl ConfusionReport {
    /// Aligned TSV rendering: `gt<TAB>pred<TAB>cnt<TAB>perc` rows plus the
    /// remaining bucket.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("GT\tPRED\tCNT\tPERC\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.2}\n",
                row.gt, row.pred, row.count, row.percent
            ));
        }
        out.push_str(&format!(
            "Remaining\t\t{}\t{:.2}\n",
            self.remaining_count, self.remaining_percent
        ));
        out
    }
}

/// Apply the normalization rules plus NFC to both sides of every pair,
/// mirroring how training transcriptions were standardized.
pub fn normalize_pairs(
    pairs: &[(String, String)],
    rules: &NormalizationRuleSet,
) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(g, p)| {
            (
                normalize(g, rules).nfc().collect::<String>(),
                normalize(p, rules).nfc().collect::<String>(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn levenshtein_basics() {
        assert_eq!(levenshtein("abc", "abc"), 0);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
    }

    /// Full DP-table oracle, written independently of the two-row version.
    fn lev_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for i in 0..=a.len() {
            for j in 0..=b.len() {
                d[i][j] = if i == 0 {
                    j
                } else if j == 0 {
                    i
                } else {
                    let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
                    sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1)
                };
            }
        }
        d[a.len()][b.len()]
    }

    #[test]
    fn align_unique_optimum() {
        let a = align("abc", "axc");
        assert_eq!(
            a.ops,
            vec![
                EditOp::Match('a'),
                EditOp::Substitute('b', 'x'),
                EditOp::Match('c')
            ]
        );
    }

    #[test]
    fn align_prefers_delete_for_whitespace_drop() {
        let a = align("a b", "ab");
        assert_eq!(
            a.ops,
            vec![EditOp::Match('a'), EditOp::Delete(' '), EditOp::Match('b')]
        );
    }

    #[test]
    fn cer_examples() {
        let one = cer(&[("ab", "ax")]).unwrap();
        assert_eq!(one.cer, 0.5);
        let two = cer(&[("abcd", "abcd"), ("ab", "xy")]).unwrap();
        assert!((two.cer - 2.0 / 6.0).abs() < 1e-12);
        assert_eq!(two.total_errors, 2);
        assert_eq!(two.total_gt_chars, 6);
        let zero = cer(&[("same", "same"), ("x", "x")]).unwrap();
        assert_eq!(zero.cer, 0.0);
        assert!(cer(&[("", "x")]).is_err());
    }

    #[test]
    fn cer_is_order_invariant() {
        let a = cer(&[("abcd", "abed"), ("xy", "yx")]).unwrap();
        let b = cer(&[("xy", "yx"), ("abcd", "abed")]).unwrap();
        assert_eq!(a.cer, b.cer);
    }

    #[test]
    fn confusion_counts_by_hand() {
        let pairs = [("abc", "axc"), ("abc", "ayc"), ("abc", "axc")];
        let report = confusion_table(&pairs, 10).unwrap();
        assert_eq!(report.rows[0].gt, "b");
        assert_eq!(report.rows[0].pred, "x");
        assert_eq!(report.rows[0].count, 2);
        assert!((report.rows[0].percent - 66.66666666666667).abs() < 1e-9);
        assert_eq!(report.total_errors, 3);
        let shown: usize = report.rows.iter().map(|r| r.count).sum();
        assert_eq!(shown + report.remaining_count, report.total_errors);
    }

    #[test]
    fn confusion_zero_errors() {
        let report = confusion_table(&[("abc", "abc")], 5).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.remaining_percent, 0.0);
    }

    #[test]
    fn confusion_renders_whitespace_and_empty() {
        let report = confusion_table(&[("a b", "ab")], 5).unwrap();
        assert_eq!(report.rows[0].gt, "␣");
        assert_eq!(report.rows[0].pred, "");
        assert!(report.to_tsv().contains("␣\t\t1"));
    }

    proptest! {
        #[test]
        fn distance_matches_oracle(a in "[a-d ]{0,12}", b in "[a-d ]{0,12}") {
            prop_assert_eq!(levenshtein(&a, &b), lev_oracle(&a, &b));
        }

        #[test]
        fn alignment_replays_and_costs(a in "\\PC{0,10}", b in "\\PC{0,10}") {
            let al = align(&a, &b);
            prop_assert_eq!(al.replay(), b.clone());
            prop_assert_eq!(al.cost(), levenshtein(&a, &b));
        }

        #[test]
        fn metric_properties(a in "[a-c]{0,8}", b in "[a-c]{0,8}", c in "[a-c]{0,8}") {
            let (ab, ba) = (levenshtein(&a, &b), levenshtein(&b, &a));
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(levenshtein(&a, &a), 0);
            if ab == 0 { prop_assert_eq!(&a, &b); }
            let (ac, cb) = (levenshtein(&a, &c), levenshtein(&c, &b));
            prop_assert!(ab <= ac + cb);
        }
    }
}

//! Classification metrics over prediction records.
//!
//! Precision, recall, sensitivity, specificity, F1 and ROC AUC are macro
//! one-vs-rest averages; accuracy is micro. Argmax ties go to the lowest
//! class index. A zero denominator yields 0 and sets a flag on that class.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub true_class: usize,
    pub scores: Vec<f64>,
}

impl PredictionRecord {
    pub fn new(true_class: usize, scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::Metrics("empty score vector".into()));
        }
        if true_class >= scores.len() {
            return Err(Error::Metrics(format!(
                "true class {true_class} out of range for {} scores",
                scores.len()
            )));
        }
        if scores.iter().any(|s| s.is_nan()) {
            return Err(Error::Metrics("NaN score".into()));
        }
        Ok(Self { true_class, scores })
    }

    /// Lowest index among the maximal scores.
    pub fn predicted(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.scores.iter().enumerate().skip(1) {
            if s > self.scores[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

fn num_classes(records: &[PredictionRecord]) -> Result<usize> {
    let first = records
        .first()
        .ok_or_else(|| Error::Metrics("no prediction records".into()))?;
    let k = first.scores.len();
    for (i, r) in records.iter().enumerate() {
        if r.scores.len() != k {
            return Err(Error::Metrics(format!(
                "record {i} has {} scores, expected {k}",
                r.scores.len()
            )));
        }
        if r.true_class >= k {
            return Err(Error::Metrics(format!("record {i}: true class {} out of range", r.true_class)));
        }
    }
    Ok(k)
}

/// Per-class one-vs-rest counts.
pub fn confusion(records: &[PredictionRecord]) -> Result<Vec<ClassCounts>> {
    let k = num_classes(records)?;
    let mut counts = vec![ClassCounts::default(); k];
    for r in records {
        let pred = r.predicted();
        for (c, cell) in counts.iter_mut().enumerate() {
            match (r.true_class == c, pred == c) {
                (true, true) => cell.tp += 1,
                (false, true) => cell.fp += 1,
                (true, false) => cell.fn_ += 1,
                (false, false) => cell.tn += 1,
            }
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub class: usize,
    pub counts: ClassCounts,
    pub precision: f64,
    pub recall: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub f1: f64,
    /// `None` when the class has no positives or no negatives.
    pub roc_auc: Option<f64>,
    /// Names of cells whose denominator was zero.
    pub zero_denominator: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub n: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub f1: f64,
    pub roc_auc: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Classes skipped by the AUC average.
    pub auc_skipped: Vec<usize>,
}

impl MetricsReport {
    /// `(key, value)` pairs in report order.
    pub fn rows(&self) -> [(&'static str, f64); 7] {
        [
            ("Accuracy", self.accuracy),
            ("Precision", self.precision),
            ("Recall", self.recall),
            ("Sensitivity", self.sensitivity),
            ("Specificity", self.specificity),
            ("F1 Score", self.f1),
            ("ROC AUC", self.roc_auc),
        ]
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in self.rows() {
            writeln!(f, "{key}: {value:.6}")?;
        }
        for c in &self.auc_skipped {
            writeln!(f, "warning: class {c} skipped for ROC AUC (no positives or no negatives)")?;
        }
        Ok(())
    }
}

fn ratio(num: usize, den: usize, name: &'static str, flags: &mut Vec<&'static str>) -> f64 {
    if den == 0 {
        flags.push(name);
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_metrics(records: &[PredictionRecord]) -> Result<MetricsReport> {
    let counts = confusion(records)?;
    let k = counts.len();
    let n = records.len();
    let correct = records.iter().filter(|r| r.predicted() == r.true_class).count();
    let aucs = per_class_auc(records, k);

    let per_class: Vec<ClassMetrics> = counts
        .iter()
        .enumerate()
        .map(|(c, &cc)| {
            let mut flags = Vec::new();
            let precision = ratio(cc.tp, cc.tp + cc.fp, "precision", &mut flags);
            let recall = ratio(cc.tp, cc.tp + cc.fn_, "recall", &mut flags);
            let specificity = ratio(cc.tn, cc.tn + cc.fp, "specificity", &mut flags);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                flags.push("f1");
                0.0
            };
            ClassMetrics {
                class: c,
                counts: cc,
                precision,
                recall,
                sensitivity: recall,
                specificity,
                f1,
                roc_auc: aucs[c],
                zero_denominator: flags,
            }
        })
        .collect();

    let macro_avg = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / k as f64;
    let auc_skipped: Vec<usize> = (0..k).filter(|&c| aucs[c].is_none()).collect();
    let defined: Vec<f64> = aucs.iter().flatten().copied().collect();
    if defined.is_empty() {
        return Err(Error::Metrics(
            "ROC AUC undefined: no class has both positive and negative records".into(),
        ));
    }
    let recall = macro_avg(|m| m.recall);
    Ok(MetricsReport {
        n,
        accuracy: correct as f64 / n as f64,
        precision: macro_avg(|m| m.precision),
        recall,
        sensitivity: recall,
        specificity: macro_avg(|m| m.specificity),
        f1: macro_avg(|m| m.f1),
        roc_auc: defined.iter().sum::<f64>() / defined.len() as f64,
        per_class,
        auc_skipped,
    })
}

/// Mann-Whitney AUC with midranks: `(R⁺ − P(P+1)/2) / (P·N)`.
/// `None` when either side is empty.
pub fn binary_auc(positives: &[f64], negatives: &[f64]) -> Option<f64> {
    let (p, q) = (positives.len(), negatives.len());
    if p == 0 || q == 0 {
        return None;
    }
    let mut all: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    // ranks doubled so midranks stay integral
    let mut rank_sum2: u128 = 0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let midrank2 = (i + 1 + j + 1) as u128;
        let pos_in_tie = all[i..=j].iter().filter(|e| e.1).count() as u128;
        rank_sum2 += midrank2 * pos_in_tie;
        i = j + 1;
    }
    // 2·U = 2·R⁺ − P(P+1); U counts ties as 1/2, so 2U is an integer
    let u2 = rank_sum2 - (p as u128) * (p as u128 + 1);
    Some(u2 as f64 / (2 * p * q) as f64)
}

fn per_class_auc(records: &[PredictionRecord], k: usize) -> Vec<Option<f64>> {
    (0..k)
        .map(|c| {
            let (pos, neg): (Vec<_>, Vec<_>) = records.iter().partition(|r| r.true_class == c);
            let pos: Vec<f64> = pos.iter().map(|r| r.scores[c]).collect();
            let neg: Vec<f64> = neg.iter().map(|r| r.scores[c]).collect();
            binary_auc(&pos, &neg)
        })
        .collect()
}

/// Macro one-vs-rest ROC AUC over classes with both positives and negatives.
pub fn roc_auc(records: &[PredictionRecord]) -> Result<f64> {
    let k = num_classes(records)?;
    let defined: Vec<f64> = per_class_auc(records, k).into_iter().flatten().collect();
    if defined.is_empty() {
        return Err(Error::Metrics(
            "ROC AUC undefined: no class has both positive and negative records".into(),
        ));
    }
    Ok(defined.iter().sum::<f64>() / defined.len() as f64)
}

/// Parses `true_class, s_0, …, s_{K−1}` rows. Blank lines and `#` comments
/// are skipped. Errors carry the 1-based line number.
pub fn parse_predictions(text: &str, path: &Path) -> Result<Vec<PredictionRecord>> {
    let mut records = Vec::new();
    let mut width = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Format {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(bad("expected true_class followed by at least one score".into()));
        }
        let true_class: usize = fields[0]
            .parse()
            .map_err(|_| bad(format!("invalid class index {:?}", fields[0])))?;
        let scores = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| !v.is_nan())
                    .ok_or_else(|| bad(format!("invalid score {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match width {
            None => width = Some(scores.len()),
            Some(w) if w != scores.len() => {
                return Err(bad(format!("{} scores, expected {w}", scores.len())));
            }
            _ => {}
        }
        records.push(PredictionRecord::new(true_class, scores).map_err(|e| bad(e.to_string()))?);
    }
    if records.is_empty() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            line: 0,
            message: "no prediction records".into(),
        });
    }
    Ok(records)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_predictions(&text, path)
}

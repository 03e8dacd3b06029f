//! The distributed baseline: cosine similarity of pretrained word vectors,
//! fed to a one-feature logistic classifier whose decision threshold is
//! tuned on the validation split.

use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::Label;
use crate::embeddings::PretrainedVectors;
use crate::evaluation::{score, EvalError, EvalReport};

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("cosine of a zero vector")]
    ZeroVector,
    #[error("vectors of different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("no pair has vectors for both words")]
    AllMissing,
    #[error("empty train split")]
    EmptyTrain,
    #[error("empty test split")]
    EmptyTest,
}

impl From<EvalError> for BaselineError {
    fn from(_: EvalError) -> Self {
        BaselineError::EmptyTest
    }
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, BaselineError> {
    if u.len() != v.len() {
        return Err(BaselineError::LengthMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(BaselineError::ZeroVector);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosineFeature {
    pub x: String,
    pub y: String,
    pub label: Label,
    /// 0 when `missing`.
    pub cosine: f64,
    /// Either word lacks a (non-zero) vector.
    pub missing: bool,
}

/// One feature per pair, in input order.
pub fn cosine_features(pairs: &[(String, String, Label)], vectors: &PretrainedVectors) -> Vec<CosineFeature> {
    pairs
        .par_iter()
        .map(|(x, y, label)| {
            let c = match (vectors.get(x), vectors.get(y)) {
                (Some(u), Some(v)) => cosine(u, v).ok(),
                _ => None,
            };
            CosineFeature {
                x: x.clone(),
                y: y.clone(),
                label: *label,
                cosine: c.unwrap_or(0.0),
                missing: c.is_none(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineReport {
    pub test: EvalReport,
    pub weight: f64,
    pub bias: f64,
    /// Probability above which a pair is called an antonym.
    pub threshold: f64,
    /// Pairs, over all splits, scored with the placeholder cosine.
    pub missing: usize,
}

const L2: f64 = 1e-3;
const NEWTON_ITERATIONS: usize = 100;

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// L2-regularized logistic regression on one feature, fitted by Newton's
/// method.
pub fn fit_logistic(data: &[(f64, f64)]) -> (f64, f64) {
    let (mut w, mut b) = (0.0, 0.0);
    let n = data.len().max(1) as f64;
    for _ in 0..NEWTON_ITERATIONS {
        let (mut gw, mut gb, mut hww, mut hwb, mut hbb) = (L2 * w, L2 * b, L2, 0.0, L2);
        for &(c, y) in data {
            let p = sigmoid(w * c + b);
            let r = (p - y) / n;
            let s = p * (1.0 - p) / n;
            gw += r * c;
            gb += r;
            hww += s * c * c;
            hwb += s * c;
            hbb += s;
        }
        let det = hww * hbb - hwb * hwb;
        let dw = (hbb * gw - hwb * gb) / det;
        let db = (hww * gb - hwb * gw) / det;
        w -= dw;
        b -= db;
        if dw.abs().max(db.abs()) < 1e-12 {
            break;
        }
    }
    (w, b)
}

fn predictions(features: &[CosineFeature], w: f64, b: f64, threshold: f64) -> Vec<(Label, Label)> {
    features
        .iter()
        .map(|f| {
            let p = sigmoid(w * f.cosine + b);
            (if p > threshold { Label::Antonym } else { Label::Synonym }, f.label)
        })
        .collect()
}

/// Threshold maximizing validation F1 among 0.5 and the midpoints between
/// consecutive distinct validation scores; ties go to the candidate closest
/// to 0.5.
fn tune_threshold(validation: &[CosineFeature], w: f64, b: f64) -> f64 {
    if validation.is_empty() {
        return 0.5;
    }
    let mut scores: Vec<f64> = validation.iter().map(|f| sigmoid(w * f.cosine + b)).collect();
    scores.sort_by(f64::total_cmp);
    scores.dedup();
    let mut candidates = vec![0.5];
    candidates.extend(scores.windows(2).map(|p| (p[0] + p[1]) / 2.0));
    let mut best: (f64, f64) = (f64::NEG_INFINITY, 0.5);
    for t in candidates {
        let f1 = score(&predictions(validation, w, b, t)).map_or(0.0, |r| r.f1);
        if f1 > best.0 || (f1 == best.0 && (t - 0.5).abs() < (best.1 - 0.5).abs()) {
            best = (f1, t);
        }
    }
    best.1
}

pub fn baseline_classify(
    train: &[CosineFeature],
    validation: &[CosineFeature],
    test: &[CosineFeature],
) -> Result<BaselineReport, BaselineError> {
    if train.is_empty() {
        return Err(BaselineError::EmptyTrain);
    }
    if test.is_empty() {
        return Err(BaselineError::EmptyTest);
    }
    let all = || train.iter().chain(validation).chain(test);
    if all().all(|f| f.missing) {
        return Err(BaselineError::AllMissing);
    }
    let data: Vec<(f64, f64)> = train.iter().map(|f| (f.cosine, f.label.target())).collect();
    let (weight, bias) = fit_logistic(&data);
    let threshold = tune_threshold(validation, weight, bias);
    Ok(BaselineReport {
        test: score(&predictions(test, weight, bias, threshold))?,
        weight,
        bias,
        threshold,
        missing: all().filter(|f| f.missing).count(),
    })
}

//! Mini-batch training with Adadelta and best-validation-F1 selection.

use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::adadelta::Adadelta;
use super::model::{batch_gradients, infer, loss, stream_seed, ModelParams};
use super::ModelError;
use crate::dataset::{EncodedExample, Label};
use crate::evaluation::{score, EvalReport};

const SHUFFLE_STREAM: u64 = 11;
const MASK_STREAM: u64 = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    /// Absent when the validation split is empty.
    pub validation: Option<EvalReport>,
    pub validation_loss: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub log: Vec<EpochLog>,
    /// 1-based epoch whose parameters were kept; 0 means the initialization.
    pub best_epoch: usize,
}

pub fn write_epoch_log<W: Write>(log: &[EpochLog], out: &mut W) -> io::Result<()> {
    writeln!(out, "epoch\ttrain_loss\tval_P\tval_R\tval_F1")?;
    for e in log {
        match &e.validation {
            Some(r) => writeln!(
                out,
                "{}\t{:.6}\t{:.4}\t{:.4}\t{:.4}",
                e.epoch, e.train_loss, r.precision, r.recall, r.f1
            )?,
            None => writeln!(out, "{}\t{:.6}\t-\t-\t-", e.epoch, e.train_loss)?,
        }
    }
    Ok(())
}

/// Predictions and mean loss over `examples`, in input order.
pub fn evaluate(params: &ModelParams, examples: &[EncodedExample]) -> Result<(Vec<(f64, Label)>, f64), ModelError> {
    let preds = examples
        .par_iter()
        .map(|ex| infer(params, ex))
        .collect::<Result<Vec<_>, _>>()?;
    let total: f64 = preds.iter().zip(examples).map(|((p, _), ex)| loss(*p, ex.target)).sum();
    Ok((preds, total / examples.len().max(1) as f64))
}

fn gold(ex: &EncodedExample) -> Label {
    if ex.target > 0.5 {
        Label::Antonym
    } else {
        Label::Synonym
    }
}

/// Trains from `init` for `config.epochs` epochs.
///
/// Each epoch shuffles the train split, steps once per mini-batch (the last
/// batch may be smaller) and scores the validation split. The parameters of
/// the epoch with the highest validation F1 are returned, ties going to the
/// lower validation loss and then the earlier epoch. Without a validation
/// split the last epoch is kept.
pub fn train(
    init: ModelParams,
    train: &[EncodedExample],
    validation: &[EncodedExample],
) -> Result<TrainOutcome, ModelError> {
    let config = init.config.clone();
    config.validate()?;
    if train.is_empty() {
        return Err(ModelError::EmptyTrain);
    }
    let mut params = init;
    let mut optimizer = Adadelta::new(&params, config.adadelta_rho, config.adadelta_eps);
    let mut log = Vec::with_capacity(config.epochs);
    let mut best: Option<(f64, f64, usize, ModelParams)> = None;
    let mut order: Vec<usize> = (0..train.len()).collect();

    for epoch in 1..=config.epochs {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, &[SHUFFLE_STREAM, epoch as u64]));
        order.sort_unstable();
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<&EncodedExample> = chunk.iter().map(|&i| &train[i]).collect();
            let seeds: Vec<u64> = chunk
                .iter()
                .map(|&i| stream_seed(config.seed, &[MASK_STREAM, epoch as u64, i as u64]))
                .collect();
            let (batch_loss, grads) = batch_gradients(&params, &batch, Some(&seeds))?;
            loss_sum += batch_loss * chunk.len() as f64;
            optimizer.step(&mut params, &grads);
        }
        if !params.is_finite() {
            return Err(ModelError::NonFinite { epoch });
        }
        let train_loss = loss_sum / train.len() as f64;

        let (report, val_loss) = if validation.is_empty() {
            (None, None)
        } else {
            let (preds, val_loss) = evaluate(&params, validation)?;
            let pairs: Vec<(Label, Label)> = preds.iter().zip(validation).map(|((_, l), ex)| (*l, gold(ex))).collect();
            (Some(score(&pairs)?), Some(val_loss))
        };
        log::info!(
            "epoch {epoch}: train loss {train_loss:.5}, validation F1 {}",
            report.map_or("-".to_string(), |r| format!("{:.4}", r.f1))
        );
        let f1 = report.map_or(0.0, |r| r.f1);
        let vl = val_loss.unwrap_or(0.0);
        let better = match &best {
            None => true,
            Some(_) if validation.is_empty() => true,
            Some((bf, bl, _, _)) => f1 > *bf || (f1 == *bf && vl < *bl),
        };
        if better {
            best = Some((f1, vl, epoch, params.clone()));
        }
        log.push(EpochLog {
            epoch,
            train_loss,
            validation: report,
            validation_loss: val_loss,
        });
    }

    let (best_epoch, params) = match best {
        Some((_, _, epoch, p)) => (epoch, p),
        None => (0, params),
    };
    Ok(TrainOutcome {
        params,
        log,
        best_epoch,
    })
}

//! The LSTM path encoder, pooling, the logistic classifier, training and
//! gradient checking.

use std::io;

use thiserror::Error;

use crate::embeddings::EmbeddingError;
use crate::evaluation::EvalError;

pub mod adadelta;
pub mod checkpoint;
pub mod gradcheck;
pub mod lstm;
pub mod model;
pub mod train;

pub use adadelta::Adadelta;
pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use gradcheck::{gradient_check, GradCheckOptions, GradCheckReport};
pub use lstm::{encode_pattern, lstm_step, LstmParams};
pub use model::{
    batch_gradients, combine, decide, forward_backward, infer, loss, node_vector, pool_patterns, predict, Classifier,
    Gradients, ModelConfig, ModelParams, Variant,
};
pub use train::{train, EpochLog, TrainOutcome};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("pair has no patterns")]
    NoPatterns,
    #[error("vocabulary index out of range for its embedding table")]
    IndexOutOfRange,
    #[error("combined model has no word table")]
    MissingWordTable,
    #[error("empty train split")]
    EmptyTrain,
    #[error("non-finite parameter after epoch {epoch}")]
    NonFinite { epoch: usize },
    #[error("checkpoint line {line}: {message}")]
    Checkpoint { line: usize, message: String },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

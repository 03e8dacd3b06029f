//! Pattern-based antonym/synonym distinction over dependency-parsed text.
//!
//! The pipeline reads CoNLL-U trees ([`treebank`]), extracts simple-path
//! patterns between word pairs ([`pattern`]), assembles balanced datasets
//! ([`dataset`]) and trains an LSTM pattern encoder with a logistic
//! classifier ([`neural`]).

pub mod baseline;
pub mod dataset;
pub mod embeddings;
pub mod evaluation;
pub mod fixtures;
pub mod neural;
pub mod pattern;
pub mod synth;
pub mod treebank;

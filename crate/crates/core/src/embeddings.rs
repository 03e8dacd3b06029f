//! Embedding tables and the plain-text pretrained vector format.
//!
//! The text format has one word per line followed by its components,
//! separated by spaces (GloVe style). A leading `count dim` header line, as
//! written by word2vec, is skipped.

use std::collections::HashMap;
use std::io::{self, BufRead};

use ndarray::{Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::SymbolMap;

pub const INIT_RANGE: f64 = 0.05;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("line {line}: expected {expected} components, found {found}")]
    WrongLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("dimension must be positive")]
    ZeroDim,
    #[error("pretrained vectors have dimension {found}, configuration expects {expected}")]
    DimMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Feature {
    Lemma,
    Pos,
    Deprel,
    Distance,
    Direction,
    Word,
}

impl Feature {
    pub fn name(self) -> &'static str {
        match self {
            Feature::Lemma => "lemma",
            Feature::Pos => "pos",
            Feature::Deprel => "deprel",
            Feature::Distance => "distance",
            Feature::Direction => "direction",
            Feature::Word => "word",
        }
    }

    pub fn from_name(name: &str) -> Option<Feature> {
        Some(match name {
            "lemma" => Feature::Lemma,
            "pos" => Feature::Pos,
            "deprel" => Feature::Deprel,
            "distance" => Feature::Distance,
            "direction" => Feature::Direction,
            "word" => Feature::Word,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    pub feature: Feature,
    pub matrix: Array2<f64>,
    pub trainable: bool,
}

impl EmbeddingTable {
    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    pub fn row(&self, index: usize) -> ArrayView1<'_, f64> {
        self.matrix.row(index)
    }

    pub fn is_finite(&self) -> bool {
        self.matrix.iter().all(|v| v.is_finite())
    }
}

/// Uniform random rows on `[-0.05, 0.05]`, deterministic in `seed`.
pub fn init_random(feature: Feature, rows: usize, dim: usize, seed: u64) -> Result<EmbeddingTable, EmbeddingError> {
    if dim == 0 {
        return Err(EmbeddingError::ZeroDim);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = Array2::from_shape_simple_fn((rows, dim), || rng.gen_range(-INIT_RANGE..=INIT_RANGE));
    Ok(EmbeddingTable {
        feature,
        matrix,
        trainable: true,
    })
}

/// Reads text-format vectors. When `keep` is given, only those words are
/// retained, but every line is still checked. The first occurrence of a
/// word wins.
pub fn read_text_vectors<R: BufRead>(
    reader: R,
    dim: Option<usize>,
    keep: Option<&dyn Fn(&str) -> bool>,
) -> Result<(usize, HashMap<String, Vec<f64>>), EmbeddingError> {
    let mut dim = dim;
    let mut vectors = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let mut fields = line.split_ascii_whitespace();
        let Some(word) = fields.next() else {
            continue;
        };
        let rest: Vec<&str> = fields.collect();
        if line_no == 1 && rest.len() == 1 && word.parse::<usize>().is_ok() {
            if let Ok(header_dim) = rest[0].parse::<usize>() {
                if dim.is_none_or(|d| d == header_dim && d != 1) {
                    dim = Some(header_dim);
                    continue;
                }
            }
        }
        let expected = *dim.get_or_insert(rest.len());
        if expected == 0 {
            return Err(EmbeddingError::ZeroDim);
        }
        if rest.len() != expected {
            return Err(EmbeddingError::WrongLength {
                line: line_no,
                expected,
                found: rest.len(),
            });
        }
        let values = rest
            .iter()
            .map(|v| {
                v.parse::<f64>().map_err(|_| EmbeddingError::Malformed {
                    line: line_no,
                    message: format!("bad component {v:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EmbeddingError::Malformed {
                line: line_no,
                message: "non-finite component".into(),
            });
        }
        if keep.is_none_or(|k| k(word)) && !vectors.contains_key(word) {
            vectors.insert(word.to_string(), values);
        }
    }
    Ok((dim.unwrap_or(0), vectors))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub found: usize,
    pub total: usize,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.found as f64 / self.total as f64
        }
    }
}

/// Pretrained vectors held in memory, keyed by word.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PretrainedVectors {
    pub dim: usize,
    pub vectors: HashMap<String, Vec<f64>>,
}

impl PretrainedVectors {
    pub fn read<R: BufRead>(reader: R, dim: Option<usize>) -> Result<Self, EmbeddingError> {
        let (dim, vectors) = read_text_vectors(reader, dim, None)?;
        Ok(PretrainedVectors { dim, vectors })
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }
}

/// Builds a table for `vocab`: words with a pretrained vector get it
/// verbatim, all other rows (reserved symbols included) are random.
pub fn table_from_vectors(
    pretrained: &PretrainedVectors,
    feature: Feature,
    vocab: &SymbolMap,
    dim: usize,
    seed: u64,
) -> Result<(EmbeddingTable, Coverage), EmbeddingError> {
    if !pretrained.vectors.is_empty() && pretrained.dim != dim {
        return Err(EmbeddingError::DimMismatch {
            expected: dim,
            found: pretrained.dim,
        });
    }
    let mut table = init_random(feature, vocab.len(), dim, seed)?;
    let mut found = 0;
    for (i, symbol) in vocab.symbols().iter().enumerate() {
        if let Some(v) = pretrained.get(symbol) {
            table.matrix.row_mut(i).assign(&ArrayView1::from(v));
            found += 1;
        }
    }
    Ok((
        table,
        Coverage {
            found,
            total: vocab.len(),
        },
    ))
}

/// Reads a text-format file and builds a table for `vocab` from it.
pub fn load_pretrained<R: BufRead>(
    reader: R,
    feature: Feature,
    vocab: &SymbolMap,
    dim: usize,
    seed: u64,
) -> Result<(EmbeddingTable, Coverage), EmbeddingError> {
    let keep = |w: &str| vocab.get(w).is_some();
    let (_, vectors) = read_text_vectors(reader, Some(dim), Some(&keep))?;
    table_from_vectors(&PretrainedVectors { dim, vectors }, feature, vocab, dim, seed)
}

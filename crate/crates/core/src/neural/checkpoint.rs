//! Line-oriented text checkpoints.
//!
//! ```text
//! [config] <lines>          resolved ModelConfig as TOML
//! [vocab <name>] <count>    one symbol per line, in index order
//! [<block>] <rows> <cols>   one row of space-separated decimals per line
//! ```
//!
//! Decimals use the shortest representation that parses back to the same
//! `f64`, so a write/read cycle is bit-exact.

use std::io::{self, BufRead, Write};

use ndarray::{Array1, Array2};

use super::lstm::{LstmParams, GATE_NAMES};
use super::model::{Classifier, ModelConfig, ModelParams, Tables, Variant};
use super::ModelError;
use crate::dataset::{SymbolMap, Vocabulary};
use crate::embeddings::{EmbeddingTable, Feature};

const MAGIC: &str = "# antsyn checkpoint v1";

fn write_matrix<W: Write>(out: &mut W, name: &str, rows: usize, cols: usize, values: &[f64]) -> io::Result<()> {
    writeln!(out, "[{name}] {rows} {cols}")?;
    for row in values.chunks(cols.max(1)).take(rows) {
        let mut first = true;
        for v in row {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn table_block_name(t: &EmbeddingTable) -> String {
    format!("table.{}", t.feature.name())
}

pub fn write_checkpoint<W: Write>(params: &ModelParams, vocab: &Vocabulary, out: &mut W) -> Result<(), ModelError> {
    writeln!(out, "{MAGIC}")?;
    let config = toml::to_string(&params.config).map_err(|e| ModelError::Config(e.to_string()))?;
    writeln!(out, "[config] {}", config.lines().count())?;
    out.write_all(config.as_bytes())?;
    if !config.ends_with('\n') {
        writeln!(out)?;
    }
    for (name, map) in vocab.named_maps() {
        writeln!(out, "[vocab {name}] {}", map.len())?;
        for s in map.symbols() {
            writeln!(out, "{s}")?;
        }
    }
    let lstm = &params.lstm;
    for (k, gate) in GATE_NAMES.iter().enumerate() {
        let w = &lstm.w[k];
        write_matrix(out, &format!("lstm.W_{gate}"), w.nrows(), w.ncols(), w.as_slice().expect("standard layout"))?;
    }
    for (k, gate) in GATE_NAMES.iter().enumerate() {
        let u = &lstm.u[k];
        write_matrix(out, &format!("lstm.U_{gate}"), u.nrows(), u.ncols(), u.as_slice().expect("standard layout"))?;
    }
    for (k, gate) in GATE_NAMES.iter().enumerate() {
        let b = &lstm.b[k];
        write_matrix(out, &format!("lstm.b_{gate}"), 1, b.len(), b.as_slice().expect("standard layout"))?;
    }
    let c = &params.classifier;
    write_matrix(out, "classifier.w", 1, c.weights.len(), c.weights.as_slice().expect("standard layout"))?;
    write_matrix(out, "classifier.b", 1, 1, c.bias.as_slice().expect("standard layout"))?;
    for (_, t) in params.tables.all() {
        let m = &t.matrix;
        write_matrix(out, &table_block_name(t), m.nrows(), m.ncols(), m.as_slice().expect("standard layout"))?;
    }
    Ok(())
}

struct Reader<R> {
    lines: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Reader<R> {
    fn err(&self, message: impl Into<String>) -> ModelError {
        ModelError::Checkpoint {
            line: self.line,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<Option<String>, ModelError> {
        match self.lines.next() {
            Some(l) => {
                self.line += 1;
                Ok(Some(l?))
            }
            None => Ok(None),
        }
    }

    fn require(&mut self) -> Result<String, ModelError> {
        self.next()?.ok_or_else(|| self.err("unexpected end of checkpoint"))
    }

    /// Parses `[name] n...` into the name and its numeric arguments.
    fn header(&self, line: &str) -> Result<(String, Vec<usize>), ModelError> {
        let rest = line.strip_prefix('[').ok_or_else(|| self.err("expected a block header"))?;
        let (name, args) = rest.split_once(']').ok_or_else(|| self.err("unterminated block header"))?;
        let args = args
            .split_whitespace()
            .map(|a| a.parse::<usize>().map_err(|_| self.err(format!("bad size {a:?}"))))
            .collect::<Result<_, _>>()?;
        Ok((name.to_string(), args))
    }

    fn expect_header(&mut self, name: &str, nargs: usize) -> Result<Vec<usize>, ModelError> {
        let line = self.require()?;
        let (found, args) = self.header(&line)?;
        if found != name || args.len() != nargs {
            return Err(self.err(format!("expected block [{name}], found {line:?}")));
        }
        Ok(args)
    }

    fn matrix(&mut self, name: &str, shape: Option<(usize, usize)>) -> Result<Array2<f64>, ModelError> {
        let args = self.expect_header(name, 2)?;
        let (rows, cols) = (args[0], args[1]);
        if let Some(expected) = shape {
            if expected != (rows, cols) {
                return Err(self.err(format!("block [{name}] is {rows}x{cols}, expected {}x{}", expected.0, expected.1)));
            }
        }
        let mut values = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let line = self.require()?;
            let before = values.len();
            for v in line.split(' ').filter(|s| !s.is_empty()) {
                values.push(v.parse::<f64>().map_err(|_| self.err(format!("bad decimal {v:?}")))?);
            }
            if values.len() - before != cols {
                return Err(self.err(format!("expected {cols} values")));
            }
        }
        Ok(Array2::from_shape_vec((rows, cols), values).expect("shape checked"))
    }

    fn vector(&mut self, name: &str, len: usize) -> Result<Array1<f64>, ModelError> {
        Ok(self.matrix(name, Some((1, len)))?.remove_axis(ndarray::Axis(0)))
    }
}

pub fn read_checkpoint<R: BufRead>(reader: R) -> Result<(ModelParams, Vocabulary), ModelError> {
    let mut r = Reader {
        lines: reader.lines(),
        line: 0,
    };
    if r.require()? != MAGIC {
        return Err(r.err("not an antsyn checkpoint"));
    }
    let n = r.expect_header("config", 1)?[0];
    let mut text = String::new();
    for _ in 0..n {
        text.push_str(&r.require()?);
        text.push('\n');
    }
    let config: ModelConfig = toml::from_str(&text).map_err(|e| r.err(format!("config: {e}")))?;
    config.validate()?;

    let mut vocab = Vocabulary::default();
    for (name, _) in Vocabulary::default().named_maps() {
        let count = r.expect_header(&format!("vocab {name}"), 1)?[0];
        let symbols = (0..count).map(|_| r.require()).collect::<Result<Vec<_>, _>>()?;
        vocab.set_named_map(name, SymbolMap::from_symbols(symbols));
    }

    let (hidden, input) = (config.hidden_dim, config.node_dim());
    let mut lstm = LstmParams::zeros(input, hidden);
    for (k, gate) in GATE_NAMES.iter().enumerate() {
        lstm.w[k] = r.matrix(&format!("lstm.W_{gate}"), Some((hidden, input)))?;
    }
    for (k, gate) in GATE_NAMES.iter().enumerate() {
        lstm.u[k] = r.matrix(&format!("lstm.U_{gate}"), Some((hidden, hidden)))?;
    }
    for (k, gate) in GATE_NAMES.iter().enumerate() {
        lstm.b[k] = r.vector(&format!("lstm.b_{gate}"), hidden)?;
    }
    let classifier = Classifier {
        weights: r.vector("classifier.w", config.classifier_dim())?,
        bias: r.vector("classifier.b", 1)?,
    };

    let mut table = |feature: Feature, rows: usize, dim: usize| -> Result<EmbeddingTable, ModelError> {
        Ok(EmbeddingTable {
            feature,
            matrix: r.matrix(&format!("table.{}", feature.name()), Some((rows, dim)))?,
            trainable: true,
        })
    };
    let label_feature = match config.feature_mode {
        crate::pattern::FeatureMode::Distance => Feature::Distance,
        crate::pattern::FeatureMode::Direction => Feature::Direction,
    };
    let tables = Tables {
        lemma: table(Feature::Lemma, vocab.lemmas.len(), config.lemma_dim)?,
        pos: table(Feature::Pos, vocab.pos.len(), config.label_dim)?,
        deprel: table(Feature::Deprel, vocab.deprels.len(), config.label_dim)?,
        label: table(label_feature, vocab.labels(config.feature_mode).len(), config.label_dim)?,
        word: match config.variant {
            Variant::Pattern => None,
            Variant::Combined => Some(table(Feature::Word, vocab.words.len(), config.word_dim())?),
        },
    };
    if let Some(extra) = r.next()? {
        if !extra.trim().is_empty() {
            return Err(r.err("trailing content"));
        }
    }
    let params = ModelParams {
        config,
        lstm,
        classifier,
        tables,
    };
    if !params.is_finite() {
        return Err(r.err("non-finite parameter"));
    }
    Ok((params, vocab))
}

//! Central finite-difference checks of the analytic gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::lstm::GATE_NAMES;
use super::model::{batch_gradients, forward_backward, DropoutSpec, ModelConfig, ModelParams, Variant, ALL_TABLES};
use super::ModelError;
use crate::dataset::{EncodedExample, EncodedPattern, NodeIndices, SymbolMap, Vocabulary, UNKNOWN, X_SLOT, Y_SLOT};
use crate::pattern::FeatureMode;

#[derive(Clone, Copy, Debug)]
pub struct GradCheckOptions {
    /// Finite-difference step.
    pub step: f64,
    /// Largest accepted relative error.
    pub tolerance: f64,
    /// Lower bound on the relative-error denominator, so coordinates whose
    /// gradient is essentially zero are judged by absolute error.
    pub floor: f64,
    /// Negate the analytic gradient before comparing (a negative control).
    pub corrupt: bool,
}

impl Default for GradCheckOptions {
    fn default() -> Self {
        GradCheckOptions {
            step: 1e-5,
            tolerance: 1e-4,
            floor: 1e-6,
            corrupt: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    /// Coordinate with the largest relative error.
    pub worst: String,
    pub analytic: f64,
    pub numeric: f64,
    pub checked: usize,
    pub passed: bool,
}

/// `|a − n| / max(|a|, |n|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    let diff = (analytic - numeric).abs();
    if diff == 0.0 {
        return 0.0;
    }
    diff / analytic.abs().max(numeric.abs()).max(floor)
}

#[derive(Clone, Copy, Debug)]
enum Coord {
    Dense { slot: usize, index: usize },
    Table { table: usize, row: usize, col: usize },
}

fn dense_names(params: &ModelParams) -> Vec<String> {
    let mut names = Vec::new();
    for prefix in ["W", "U", "b"] {
        for g in GATE_NAMES {
            names.push(format!("lstm.{prefix}_{g}"));
        }
    }
    names.push("classifier.w".into());
    names.push("classifier.b".into());
    debug_assert_eq!(names.len(), params.dense_slices().len());
    names
}

fn value_mut(params: &mut ModelParams, coord: Coord) -> &mut f64 {
    match coord {
        Coord::Dense { slot, index } => &mut params.dense_slices_mut().swap_remove(slot)[index],
        Coord::Table { table, row, col } => {
            let t = params.tables.get_mut(ALL_TABLES[table]).expect("coordinate of an existing table");
            &mut t.matrix[[row, col]]
        }
    }
}

fn batch_loss(params: &ModelParams, batch: &[EncodedExample], seeds: Option<&[u64]>) -> Result<f64, ModelError> {
    let rate = params.config.dropout;
    let mut total = 0.0;
    for (i, ex) in batch.iter().enumerate() {
        let dropout = seeds.map(|s| DropoutSpec { rate, seed: s[i] });
        total += forward_backward(params, ex, dropout, None)?.loss;
    }
    Ok(total / batch.len() as f64)
}

/// Compares the analytic gradient of the mean batch loss with central
/// differences on every parameter, embedding entries included. Dropout
/// masks are replayed from `mask_seeds` so both sides see the same network.
pub fn gradient_check(
    params: &ModelParams,
    batch: &[EncodedExample],
    mask_seeds: Option<&[u64]>,
    options: &GradCheckOptions,
) -> Result<GradCheckReport, ModelError> {
    let refs: Vec<&EncodedExample> = batch.iter().collect();
    let (_, mut grads) = batch_gradients(params, &refs, mask_seeds)?;
    if options.corrupt {
        grads.scale(-1.0);
    }

    let names = dense_names(params);
    let mut coords = Vec::new();
    for (slot, s) in params.dense_slices().iter().enumerate() {
        coords.extend((0..s.len()).map(|index| Coord::Dense { slot, index }));
    }
    for (k, &id) in ALL_TABLES.iter().enumerate() {
        if let Some(t) = params.tables.get(id) {
            let (rows, cols) = t.matrix.dim();
            for row in 0..rows {
                coords.extend((0..cols).map(|col| Coord::Table { table: k, row, col }));
            }
        }
    }

    let analytic_of = |c: Coord| -> f64 {
        match c {
            Coord::Dense { slot, index } => grads.dense_slices()[slot][index],
            Coord::Table { table, row, col } => grads.tables[table].get(&row).map_or(0.0, |g| g[col]),
        }
    };
    let h = options.step;
    let results: Vec<(Coord, f64, f64)> = coords
        .par_iter()
        .map(|&c| {
            let mut p = params.clone();
            let x = *value_mut(&mut p, c);
            *value_mut(&mut p, c) = x + h;
            let plus = batch_loss(&p, batch, mask_seeds)?;
            *value_mut(&mut p, c) = x - h;
            let minus = batch_loss(&p, batch, mask_seeds)?;
            Ok((c, analytic_of(c), (plus - minus) / (2.0 * h)))
        })
        .collect::<Result<_, ModelError>>()?;

    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst: String::new(),
        analytic: 0.0,
        numeric: 0.0,
        checked: results.len(),
        passed: true,
    };
    for (c, a, n) in results {
        let e = relative_error(a, n, options.floor);
        if e > report.max_rel_error || report.worst.is_empty() {
            report.max_rel_error = e;
            report.analytic = a;
            report.numeric = n;
            report.worst = match c {
                Coord::Dense { slot, index } => format!("{}[{index}]", names[slot]),
                Coord::Table { table, row, col } => {
                    let t = params.tables.get(ALL_TABLES[table]).expect("existing table");
                    format!("table.{}[{row},{col}]", t.feature.name())
                }
            };
        }
    }
    report.passed = report.max_rel_error < options.tolerance;
    Ok(report)
}

/// A small random model and batch for gradient checks.
#[derive(Clone, Debug)]
pub struct TinyProblem {
    pub params: ModelParams,
    pub batch: Vec<EncodedExample>,
    pub mask_seeds: Option<Vec<u64>>,
}

fn symbols(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Node vectors of at most 8 components, at most 8 hidden units, 1 to 3
/// examples with 1 to 3 patterns of 1 to 6 nodes each. Parameters are
/// spread over `[-1, 1]` so no coordinate is trivially small.
pub fn random_tiny_problem(seed: u64, variant: Variant, mode: FeatureMode, dropout: bool) -> TinyProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label_dim = rng.gen_range(1..=2);
    let lemma_dim = rng.gen_range(1..=8 - 3 * label_dim);
    let config = ModelConfig {
        variant,
        feature_mode: mode,
        lemma_dim,
        label_dim,
        hidden_dim: rng.gen_range(1..=8),
        dropout: if dropout { 0.5 } else { 0.0 },
        seed,
        ..ModelConfig::default()
    };
    let vocab = Vocabulary {
        lemmas: SymbolMap::new(&[UNKNOWN, X_SLOT, Y_SLOT], symbols("l", rng.gen_range(1..=4))),
        pos: SymbolMap::new(&[UNKNOWN], symbols("p", rng.gen_range(1..=3))),
        deprels: SymbolMap::new(&[UNKNOWN], symbols("d", rng.gen_range(1..=3))),
        distances: SymbolMap::new(&[UNKNOWN], symbols("", rng.gen_range(1..=4))),
        directions: SymbolMap::new(&[UNKNOWN], ["up", "anchor", "down"].map(String::from)),
        words: SymbolMap::new(&[UNKNOWN], symbols("w", rng.gen_range(2..=4))),
    };
    let (mut params, _) = ModelParams::init(&config, &vocab, None).expect("valid tiny config");
    for s in params.dense_slices_mut() {
        s.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
    }
    for &id in &ALL_TABLES {
        if let Some(t) = params.tables.get_mut(id) {
            t.matrix.mapv_inplace(|_| rng.gen_range(-1.0..1.0));
        }
    }
    let sizes = [
        vocab.lemmas.len(),
        vocab.pos.len(),
        vocab.deprels.len(),
        vocab.labels(mode).len(),
    ];
    let batch: Vec<EncodedExample> = (0..rng.gen_range(1..=3))
        .map(|_| EncodedExample {
            x: rng.gen_range(0..vocab.words.len()),
            y: rng.gen_range(0..vocab.words.len()),
            patterns: (0..rng.gen_range(1..=3))
                .map(|_| EncodedPattern {
                    nodes: (0..rng.gen_range(1..=6))
                        .map(|_| NodeIndices {
                            lemma: rng.gen_range(0..sizes[0]),
                            pos: rng.gen_range(0..sizes[1]),
                            deprel: rng.gen_range(0..sizes[2]),
                            label: rng.gen_range(0..sizes[3]),
                        })
                        .collect(),
                    count: rng.gen_range(1..=10) as f64,
                })
                .collect(),
            target: if rng.gen_bool(0.5) { 1.0 } else { 0.0 },
        })
        .collect();
    let mask_seeds = dropout.then(|| (0..batch.len()).map(|_| rng.gen()).collect());
    TinyProblem {
        params,
        batch,
        mask_seeds,
    }
}

impl TinyProblem {
    pub fn check(&self, options: &GradCheckOptions) -> Result<GradCheckReport, ModelError> {
        gradient_check(&self.params, &self.batch, self.mask_seeds.as_deref(), options)
    }
}

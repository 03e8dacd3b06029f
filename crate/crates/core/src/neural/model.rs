use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::{concatenate, s, Array1, ArrayView1, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lstm::{backward_sequence, forward_sequence, sigmoid, LstmParams, SequenceCache};
use super::ModelError;
use crate::dataset::{EncodedExample, Label, NodeIndices, Vocabulary};
use crate::embeddings::{init_random, table_from_vectors, Coverage, EmbeddingTable, Feature, PretrainedVectors};
use crate::pattern::{FeatureMode, DEFAULT_MAX_PATH_LEN};

/// Probability clamp used by the loss.
pub const PROB_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Classifier over the pooled pattern vector.
    #[default]
    Pattern,
    /// Classifier over `[v_x ⊕ v_xy ⊕ v_y]`.
    Combined,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Pattern => "pattern",
            Variant::Combined => "combined",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pattern" => Ok(Variant::Pattern),
            "combined" => Ok(Variant::Combined),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub variant: Variant,
    pub feature_mode: FeatureMode,
    /// Lemma embedding size; also the size of the combined model's word vectors.
    pub lemma_dim: usize,
    /// Size of the POS, dependency-label and distance/direction embeddings.
    pub label_dim: usize,
    pub hidden_dim: usize,
    pub dropout: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub adadelta_rho: f64,
    pub adadelta_eps: f64,
    pub max_path_len: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            variant: Variant::Pattern,
            feature_mode: FeatureMode::Distance,
            lemma_dim: 100,
            label_dim: 10,
            hidden_dim: 100,
            dropout: 0.5,
            epochs: 40,
            batch_size: 32,
            seed: 1,
            adadelta_rho: 0.95,
            adadelta_eps: 1e-6,
            max_path_len: DEFAULT_MAX_PATH_LEN,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Config(m.to_string()));
        if !(0.0..1.0).contains(&self.dropout) {
            return bad("dropout must lie in [0, 1)");
        }
        if self.lemma_dim == 0 || self.label_dim == 0 || self.hidden_dim == 0 {
            return bad("dimensions must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch size must be positive");
        }
        if !(0.0..1.0).contains(&self.adadelta_rho) || self.adadelta_eps <= 0.0 {
            return bad("adadelta rho must lie in [0, 1) and eps be positive");
        }
        Ok(())
    }

    pub fn word_dim(&self) -> usize {
        self.lemma_dim
    }

    /// Length of a node vector: lemma, POS, dependency label and distance.
    pub fn node_dim(&self) -> usize {
        self.lemma_dim + 3 * self.label_dim
    }

    /// Length of the classifier input.
    pub fn classifier_dim(&self) -> usize {
        match self.variant {
            Variant::Pattern => self.hidden_dim,
            Variant::Combined => self.hidden_dim + 2 * self.word_dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classifier {
    pub weights: Array1<f64>,
    /// Stored as a length-1 array so every parameter is an array.
    pub bias: Array1<f64>,
}

/// Index of each embedding table inside [`Tables`] and [`Gradients`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableId {
    Lemma = 0,
    Pos = 1,
    Deprel = 2,
    Label = 3,
    Word = 4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tables {
    pub lemma: EmbeddingTable,
    pub pos: EmbeddingTable,
    pub deprel: EmbeddingTable,
    /// Distance or direction labels, per the feature mode.
    pub label: EmbeddingTable,
    /// Target-word vectors, present for the combined model only.
    pub word: Option<EmbeddingTable>,
}

impl Tables {
    pub fn get(&self, id: TableId) -> Option<&EmbeddingTable> {
        match id {
            TableId::Lemma => Some(&self.lemma),
            TableId::Pos => Some(&self.pos),
            TableId::Deprel => Some(&self.deprel),
            TableId::Label => Some(&self.label),
            TableId::Word => self.word.as_ref(),
        }
    }

    pub fn get_mut(&mut self, id: TableId) -> Option<&mut EmbeddingTable> {
        match id {
            TableId::Lemma => Some(&mut self.lemma),
            TableId::Pos => Some(&mut self.pos),
            TableId::Deprel => Some(&mut self.deprel),
            TableId::Label => Some(&mut self.label),
            TableId::Word => self.word.as_mut(),
        }
    }

    pub fn all(&self) -> impl Iterator<Item = (TableId, &EmbeddingTable)> {
        ALL_TABLES.into_iter().filter_map(|id| self.get(id).map(|t| (id, t)))
    }
}

pub const ALL_TABLES: [TableId; 5] = [TableId::Lemma, TableId::Pos, TableId::Deprel, TableId::Label, TableId::Word];
const NODE_TABLES: [TableId; 4] = [TableId::Lemma, TableId::Pos, TableId::Deprel, TableId::Label];

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub config: ModelConfig,
    pub lstm: LstmParams,
    pub classifier: Classifier,
    pub tables: Tables,
}

/// Coverage of pretrained vectors over the lemma and word tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InitReport {
    pub lemma: Option<Coverage>,
    pub word: Option<Coverage>,
}

fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the combined input
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of an independent random stream, e.g. per epoch and example.
pub fn stream_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(derive_seed(seed, 0x5eed), |acc, &p| derive_seed(acc, p.wrapping_add(1)))
}

impl ModelParams {
    /// Initializes every parameter. Lemma and word tables take their rows
    /// from `pretrained` when given; everything else is random.
    pub fn init(
        config: &ModelConfig,
        vocab: &Vocabulary,
        pretrained: Option<&PretrainedVectors>,
    ) -> Result<(ModelParams, InitReport), ModelError> {
        config.validate()?;
        let seed = config.seed;
        let mut report = InitReport::default();
        let lemma_table = |feature: Feature, map, stream| -> Result<_, ModelError> {
            Ok(match pretrained {
                Some(v) => {
                    let (t, cov) = table_from_vectors(v, feature, map, config.lemma_dim, stream_seed(seed, &[stream]))?;
                    (t, Some(cov))
                }
                None => (
                    init_random(feature, map.len(), config.lemma_dim, stream_seed(seed, &[stream]))?,
                    None,
                ),
            })
        };
        let (lemma, lemma_cov) = lemma_table(Feature::Lemma, &vocab.lemmas, 1)?;
        report.lemma = lemma_cov;
        let word = match config.variant {
            Variant::Pattern => None,
            Variant::Combined => {
                let (t, cov) = lemma_table(Feature::Word, &vocab.words, 2)?;
                report.word = cov;
                Some(t)
            }
        };
        let (label_feature, label_vocab) = match config.feature_mode {
            FeatureMode::Distance => (Feature::Distance, &vocab.distances),
            FeatureMode::Direction => (Feature::Direction, &vocab.directions),
        };
        let tables = Tables {
            lemma,
            pos: init_random(Feature::Pos, vocab.pos.len(), config.label_dim, stream_seed(seed, &[3]))?,
            deprel: init_random(Feature::Deprel, vocab.deprels.len(), config.label_dim, stream_seed(seed, &[4]))?,
            label: init_random(label_feature, label_vocab.len(), config.label_dim, stream_seed(seed, &[5]))?,
            word,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, &[6]));
        let lstm = LstmParams::glorot(config.node_dim(), config.hidden_dim, &mut rng);
        let n = config.classifier_dim();
        let limit = (6.0 / (n + 1) as f64).sqrt();
        let classifier = Classifier {
            weights: Array1::from_shape_simple_fn(n, || rng.gen_range(-limit..=limit)),
            bias: Array1::zeros(1),
        };
        Ok((
            ModelParams {
                config: config.clone(),
                lstm,
                classifier,
                tables,
            },
            report,
        ))
    }

    /// Dense parameter arrays in a fixed order: LSTM, classifier weights, bias.
    pub fn dense_slices_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v = self.lstm.slices_mut();
        v.push(self.classifier.weights.as_slice_mut().expect("standard layout"));
        v.push(self.classifier.bias.as_slice_mut().expect("standard layout"));
        v
    }

    pub fn dense_slices(&self) -> Vec<&[f64]> {
        let mut v = self.lstm.slices();
        v.push(self.classifier.weights.as_slice().expect("standard layout"));
        v.push(self.classifier.bias.as_slice().expect("standard layout"));
        v
    }

    pub fn is_finite(&self) -> bool {
        self.dense_slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
            && self.tables.all().all(|(_, t)| t.is_finite())
    }

    fn check_example(&self, ex: &EncodedExample) -> Result<(), ModelError> {
        if ex.patterns.is_empty() {
            return Err(ModelError::NoPatterns);
        }
        let oob = |id: TableId, i: usize| self.tables.get(id).is_some_and(|t| i >= t.len());
        for node in ex.patterns.iter().flat_map(|p| &p.nodes) {
            if oob(TableId::Lemma, node.lemma)
                || oob(TableId::Pos, node.pos)
                || oob(TableId::Deprel, node.deprel)
                || oob(TableId::Label, node.label)
            {
                return Err(ModelError::IndexOutOfRange);
            }
        }
        if oob(TableId::Word, ex.x) || oob(TableId::Word, ex.y) {
            return Err(ModelError::IndexOutOfRange);
        }
        Ok(())
    }
}

/// Inverted-dropout masks for the four components of one node.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeMask {
    pub parts: [Array1<f64>; 4],
}

impl NodeMask {
    /// Each entry survives with probability `1 - rate` and is then scaled
    /// by `1 / (1 - rate)`.
    pub fn sample<R: Rng>(dims: [usize; 4], rate: f64, rng: &mut R) -> Self {
        let keep = 1.0 / (1.0 - rate);
        NodeMask {
            parts: dims.map(|d| Array1::from_shape_simple_fn(d, || if rng.gen::<f64>() < rate { 0.0 } else { keep })),
        }
    }
}

fn node_indices(node: &NodeIndices) -> [usize; 4] {
    [node.lemma, node.pos, node.deprel, node.label]
}

/// `[v_lemma ⊕ v_pos ⊕ v_dep ⊕ v_dist]`, with each component masked when a
/// dropout mask is given.
pub fn node_vector(tables: &Tables, node: &NodeIndices, mask: Option<&NodeMask>) -> Array1<f64> {
    let idx = node_indices(node);
    let parts: Vec<Array1<f64>> = NODE_TABLES
        .iter()
        .enumerate()
        .map(|(k, &id)| {
            let row = tables.get(id).expect("node tables always exist").row(idx[k]);
            match mask {
                Some(m) => &row * &m.parts[k],
                None => row.to_owned(),
            }
        })
        .collect();
    let views: Vec<ArrayView1<f64>> = parts.iter().map(|p| p.view()).collect();
    concatenate(Axis(0), &views).expect("1-d concatenation")
}

/// Frequency-weighted mean of pattern vectors: `Σ v_p c_p / Σ c_p`.
pub fn pool_patterns(encoded: &[(Array1<f64>, f64)]) -> Result<Array1<f64>, ModelError> {
    let (first, _) = encoded.first().ok_or(ModelError::NoPatterns)?;
    let mut sum = Array1::zeros(first.len());
    let mut total = 0.0;
    for (v, c) in encoded {
        sum.scaled_add(*c, v);
        total += c;
    }
    Ok(sum / total)
}

/// `[v_x ⊕ v_xy ⊕ v_y]`.
pub fn combine(v_x: ArrayView1<f64>, v_xy: ArrayView1<f64>, v_y: ArrayView1<f64>) -> Array1<f64> {
    concatenate(Axis(0), &[v_x, v_xy, v_y]).expect("1-d concatenation")
}

/// Probability of the antonym class and the predicted label. The label is
/// decided on the logit (`w·v + b > 0`), which is equivalent to `p > 0.5`
/// without the rounding of the sigmoid near zero.
pub fn predict(classifier: &Classifier, v: ArrayView1<f64>) -> (f64, Label) {
    let z = classifier.weights.dot(&v) + classifier.bias[0];
    (sigmoid(z), if z > 0.0 { Label::Antonym } else { Label::Synonym })
}

/// The decision rule on a probability: antonym iff strictly above 0.5.
pub fn decide(p: f64) -> Label {
    if p > 0.5 {
        Label::Antonym
    } else {
        Label::Synonym
    }
}

/// Binary cross-entropy with the probability clamped to `[ε, 1 − ε]`.
pub fn loss(p: f64, target: f64) -> f64 {
    let p = p.clamp(PROB_EPS, 1.0 - PROB_EPS);
    -(target * p.ln() + (1.0 - target) * (1.0 - p).ln())
}

/// Sparse per-row gradient of an embedding table.
pub type RowGrads = BTreeMap<usize, Array1<f64>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub lstm: LstmParams,
    pub classifier: Classifier,
    pub tables: [RowGrads; 5],
}

impl Gradients {
    pub fn zeros(params: &ModelParams) -> Self {
        Gradients {
            lstm: LstmParams::zeros(params.lstm.input_dim(), params.lstm.hidden_dim()),
            classifier: Classifier {
                weights: Array1::zeros(params.classifier.weights.len()),
                bias: Array1::zeros(1),
            },
            tables: Default::default(),
        }
    }

    /// Same order as [`ModelParams::dense_slices_mut`].
    pub fn dense_slices(&self) -> Vec<&[f64]> {
        let mut v = self.lstm.slices();
        v.push(self.classifier.weights.as_slice().expect("standard layout"));
        v.push(self.classifier.bias.as_slice().expect("standard layout"));
        v
    }

    pub fn dense_slices_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v = self.lstm.slices_mut();
        v.push(self.classifier.weights.as_slice_mut().expect("standard layout"));
        v.push(self.classifier.bias.as_slice_mut().expect("standard layout"));
        v
    }

    fn add_row(&mut self, table: TableId, row: usize, grad: ArrayView1<f64>) {
        self.tables[table as usize]
            .entry(row)
            .and_modify(|g| *g += &grad)
            .or_insert_with(|| grad.to_owned());
    }

    pub fn add_assign(&mut self, other: &Gradients) {
        for (a, b) in self.dense_slices_mut().into_iter().zip(other.dense_slices()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (k, rows) in other.tables.iter().enumerate() {
            for (&row, g) in rows {
                self.tables[k]
                    .entry(row)
                    .and_modify(|acc| *acc += g)
                    .or_insert_with(|| g.clone());
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for a in self.dense_slices_mut() {
            a.iter_mut().for_each(|x| *x *= factor);
        }
        for rows in &mut self.tables {
            rows.values_mut().for_each(|g| *g *= factor);
        }
    }
}

/// Dropout for one example: the rate and the seed its masks are drawn from.
#[derive(Clone, Copy, Debug)]
pub struct DropoutSpec {
    pub rate: f64,
    pub seed: u64,
}

/// Result of one example's forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Forward {
    pub probability: f64,
    pub logit: f64,
    pub loss: f64,
}

struct PatternTrace {
    masks: Option<Vec<NodeMask>>,
    cache: SequenceCache,
    weight: f64,
}

/// Forward pass for one pair and, when `grads` is given, the exact gradient
/// of its loss accumulated into `grads`.
pub fn forward_backward(
    params: &ModelParams,
    ex: &EncodedExample,
    dropout: Option<DropoutSpec>,
    grads: Option<&mut Gradients>,
) -> Result<Forward, ModelError> {
    params.check_example(ex)?;
    let config = &params.config;
    let dims = [config.lemma_dim, config.label_dim, config.label_dim, config.label_dim];
    let mut rng = dropout
        .filter(|d| d.rate > 0.0)
        .map(|d| (d.rate, ChaCha8Rng::seed_from_u64(d.seed)));

    let total: f64 = ex.patterns.iter().map(|p| p.count).sum();
    let mut traces = Vec::with_capacity(ex.patterns.len());
    let mut v_xy = Array1::zeros(config.hidden_dim);
    for pattern in &ex.patterns {
        let masks: Option<Vec<NodeMask>> = rng.as_mut().map(|(rate, rng)| {
            pattern.nodes.iter().map(|_| NodeMask::sample(dims, *rate, rng)).collect()
        });
        let inputs = pattern
            .nodes
            .iter()
            .enumerate()
            .map(|(t, n)| node_vector(&params.tables, n, masks.as_ref().map(|m| &m[t])))
            .collect();
        let (v_p, cache) = forward_sequence(&params.lstm, inputs);
        let weight = pattern.count / total;
        v_xy.scaled_add(weight, &v_p);
        traces.push(PatternTrace { masks, cache, weight });
    }

    let features = match config.variant {
        Variant::Pattern => v_xy,
        Variant::Combined => {
            let words = params.tables.word.as_ref().ok_or(ModelError::MissingWordTable)?;
            combine(words.row(ex.x), v_xy.view(), words.row(ex.y))
        }
    };
    let logit = params.classifier.weights.dot(&features) + params.classifier.bias[0];
    let probability = sigmoid(logit);
    let forward = Forward {
        probability,
        logit,
        loss: loss(probability, ex.target),
    };

    let Some(grads) = grads else {
        return Ok(forward);
    };
    let dz = probability - ex.target;
    grads.classifier.weights.scaled_add(dz, &features);
    grads.classifier.bias[0] += dz;
    let d_features = &params.classifier.weights * dz;
    let d_vxy = match config.variant {
        Variant::Pattern => d_features,
        Variant::Combined => {
            let wd = config.word_dim();
            let h = config.hidden_dim;
            grads.add_row(TableId::Word, ex.x, d_features.slice(s![..wd]));
            grads.add_row(TableId::Word, ex.y, d_features.slice(s![wd + h..]));
            d_features.slice(s![wd..wd + h]).to_owned()
        }
    };
    for (pattern, trace) in ex.patterns.iter().zip(&traces) {
        let dh = &d_vxy * trace.weight;
        let dxs = backward_sequence(&params.lstm, &trace.cache, &dh, &mut grads.lstm);
        for (t, (node, dx)) in pattern.nodes.iter().zip(dxs).enumerate() {
            let idx = node_indices(node);
            let mut offset = 0;
            for (k, &table) in NODE_TABLES.iter().enumerate() {
                let part = dx.slice(s![offset..offset + dims[k]]);
                match &trace.masks {
                    Some(m) => grads.add_row(table, idx[k], (&part * &m[t].parts[k]).view()),
                    None => grads.add_row(table, idx[k], part),
                }
                offset += dims[k];
            }
        }
    }
    Ok(forward)
}

/// Mean loss and gradient over a batch.
///
/// Examples may run in parallel; per-example gradients are summed in batch
/// order so the result is independent of the thread count. Example `i`
/// draws its dropout masks from `mask_seeds[i]`.
pub fn batch_gradients(
    params: &ModelParams,
    batch: &[&EncodedExample],
    mask_seeds: Option<&[u64]>,
) -> Result<(f64, Gradients), ModelError> {
    let rate = params.config.dropout;
    let per_example: Vec<Result<(Forward, Gradients), ModelError>> = batch
        .par_iter()
        .enumerate()
        .map(|(i, ex)| {
            let mut g = Gradients::zeros(params);
            let dropout = mask_seeds.map(|seeds| DropoutSpec { rate, seed: seeds[i] });
            let f = forward_backward(params, ex, dropout, Some(&mut g))?;
            Ok((f, g))
        })
        .collect();
    let mut total = Gradients::zeros(params);
    let mut loss_sum = 0.0;
    for r in per_example {
        let (f, g) = r?;
        loss_sum += f.loss;
        total.add_assign(&g);
    }
    let n = batch.len().max(1) as f64;
    total.scale(1.0 / n);
    Ok((loss_sum / n, total))
}

/// Inference forward pass: no dropout.
pub fn infer(params: &ModelParams, ex: &EncodedExample) -> Result<(f64, Label), ModelError> {
    let f = forward_backward(params, ex, None, None)?;
    Ok((f.probability, if f.logit > 0.0 { Label::Antonym } else { Label::Synonym }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn pooling_examples() {
        let v = pool_patterns(&[(array![1.0, 2.0], 3.0)]).unwrap();
        assert_eq!(v, array![1.0, 2.0]);
        let v = pool_patterns(&[(array![0.0, 0.0], 1.0), (array![2.0, 2.0], 1.0)]).unwrap();
        assert_eq!(v, array![1.0, 1.0]);
        let v = pool_patterns(&[(array![1.0, 0.0], 1.0), (array![4.0, 0.0], 2.0)]).unwrap();
        assert_eq!(v, array![3.0, 0.0]);
        assert!(matches!(pool_patterns(&[]), Err(ModelError::NoPatterns)));
    }

    #[test]
    fn combine_layout() {
        let a = Array1::from_elem(100, 0.0);
        let b = Array1::from_shape_fn(100, |i| i as f64);
        let v = combine(a.view(), b.view(), a.view());
        assert_eq!(v.len(), 300);
        assert_eq!(v.slice(s![100..200]), b);
        assert!(v.slice(s![..100]).iter().all(|&x| x == 0.0));
        let (x, y) = (array![1.0], array![2.0]);
        let mid = array![5.0];
        assert_ne!(combine(x.view(), mid.view(), y.view()), combine(y.view(), mid.view(), x.view()));
    }

    #[test]
    fn decision_threshold() {
        assert_eq!(decide(0.6), Label::Antonym);
        assert_eq!(decide(0.5), Label::Synonym);
        let zero = Classifier {
            weights: Array1::zeros(3),
            bias: Array1::zeros(1),
        };
        let (p, label) = predict(&zero, array![1.0, 2.0, 3.0].view());
        assert_eq!(p, 0.5);
        assert_eq!(label, Label::Synonym);
        let c = Classifier {
            weights: array![1.0],
            bias: array![0.0],
        };
        assert_eq!(predict(&c, array![1e-20].view()).1, Label::Antonym);
    }

    #[test]
    fn loss_examples() {
        assert_abs_diff_eq!(loss(1.0 - PROB_EPS, 1.0), 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(loss(0.5, 1.0), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(loss(0.5, 0.0), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(loss(0.9, 0.0), 2.302585092994045, epsilon = 1e-12);
        assert!(loss(0.0, 1.0).is_finite());
    }

    #[test]
    fn dropout_masks_replay() {
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        let a = NodeMask::sample([4, 2, 2, 2], 0.5, &mut r1);
        let b = NodeMask::sample([4, 2, 2, 2], 0.5, &mut r2);
        assert_eq!(a, b);
        assert!(a.parts.iter().flat_map(|p| p.iter()).all(|&v| v == 0.0 || v == 2.0));
    }

    #[test]
    fn config_dimensions() {
        let mut c = ModelConfig::default();
        assert_eq!(c.node_dim(), 130);
        assert_eq!(c.classifier_dim(), 100);
        c.variant = Variant::Combined;
        assert_eq!(c.classifier_dim(), 300);
        c.dropout = 1.0;
        assert!(c.validate().is_err());
    }
}

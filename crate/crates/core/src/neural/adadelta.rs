//! Adadelta: per-coordinate step sizes from running averages of squared
//! gradients and squared updates.

use ndarray::Array2;

use super::model::{Gradients, ModelParams, ALL_TABLES};

/// One Adadelta update of a single coordinate. Returns the applied delta.
#[inline]
pub fn update(x: &mut f64, g: f64, eg2: &mut f64, edx2: &mut f64, rho: f64, eps: f64) -> f64 {
    *eg2 = rho * *eg2 + (1.0 - rho) * g * g;
    let dx = -((*edx2 + eps).sqrt() / (*eg2 + eps).sqrt()) * g;
    *edx2 = rho * *edx2 + (1.0 - rho) * dx * dx;
    *x += dx;
    dx
}

/// Running averages `E[g²]` and `E[Δx²]` for one array.
#[derive(Clone, Debug, PartialEq)]
pub struct Accumulator {
    pub eg2: Vec<f64>,
    pub edx2: Vec<f64>,
}

impl Accumulator {
    fn zeros(len: usize) -> Self {
        Accumulator {
            eg2: vec![0.0; len],
            edx2: vec![0.0; len],
        }
    }

    fn apply(&mut self, x: &mut [f64], g: &[f64], rho: f64, eps: f64) {
        for (((x, &g), eg2), edx2) in x.iter_mut().zip(g).zip(&mut self.eg2).zip(&mut self.edx2) {
            update(x, g, eg2, edx2, rho, eps);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableAccumulator {
    pub eg2: Array2<f64>,
    pub edx2: Array2<f64>,
}

/// Optimizer state mirroring the shapes of [`ModelParams`].
///
/// Dense parameters are updated every step. Embedding tables are updated
/// only on the rows that received a gradient in the batch; other rows and
/// their accumulators are left as they are.
#[derive(Clone, Debug, PartialEq)]
pub struct Adadelta {
    pub rho: f64,
    pub eps: f64,
    pub dense: Vec<Accumulator>,
    pub tables: Vec<Option<TableAccumulator>>,
}

impl Adadelta {
    pub fn new(params: &ModelParams, rho: f64, eps: f64) -> Self {
        let dense = params.dense_slices().iter().map(|s| Accumulator::zeros(s.len())).collect();
        let tables = ALL_TABLES
            .iter()
            .map(|&id| {
                params.tables.get(id).filter(|t| t.trainable).map(|t| TableAccumulator {
                    eg2: Array2::zeros(t.matrix.dim()),
                    edx2: Array2::zeros(t.matrix.dim()),
                })
            })
            .collect();
        Adadelta { rho, eps, dense, tables }
    }

    pub fn step(&mut self, params: &mut ModelParams, grads: &Gradients) {
        let (rho, eps) = (self.rho, self.eps);
        for ((x, g), acc) in params.dense_slices_mut().into_iter().zip(grads.dense_slices()).zip(&mut self.dense) {
            acc.apply(x, g, rho, eps);
        }
        for (k, &id) in ALL_TABLES.iter().enumerate() {
            let (Some(table), Some(acc)) = (params.tables.get_mut(id), self.tables[k].as_mut()) else {
                continue;
            };
            for (&row, g) in &grads.tables[k] {
                let mut x = table.matrix.row_mut(row);
                let mut eg2 = acc.eg2.row_mut(row);
                let mut edx2 = acc.edx2.row_mut(row);
                for j in 0..g.len() {
                    update(&mut x[j], g[j], &mut eg2[j], &mut edx2[j], rho, eps);
                }
            }
        }
    }
}

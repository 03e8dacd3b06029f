//! A single-layer LSTM with explicit backpropagation through time.
//!
//! ```text
//! i_t = σ(W_i x_t + U_i h_{t-1} + b_i)
//! f_t = σ(W_f x_t + U_f h_{t-1} + b_f)
//! o_t = σ(W_o x_t + U_o h_{t-1} + b_o)
//! g_t = tanh(W_c x_t + U_c h_{t-1} + b_c)
//! c_t = i_t ⊗ g_t + f_t ⊗ c_{t-1}
//! h_t = o_t ⊗ tanh(c_t)
//! ```

use ndarray::{Array1, Array2, ArrayView1, Zip};
use rand::Rng;

/// Gate order used for every per-gate array.
pub const INPUT: usize = 0;
pub const FORGET: usize = 1;
pub const OUTPUT: usize = 2;
pub const CELL: usize = 3;
pub const GATE_NAMES: [&str; 4] = ["i", "f", "o", "c"];

#[derive(Clone, Debug, PartialEq)]
pub struct LstmParams {
    /// Input-to-gate weights, `hidden × input`.
    pub w: [Array2<f64>; 4],
    /// Hidden-to-gate weights, `hidden × hidden`.
    pub u: [Array2<f64>; 4],
    pub b: [Array1<f64>; 4],
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn glorot<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_simple_fn((rows, cols), || rng.gen_range(-limit..=limit))
}

impl LstmParams {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        LstmParams {
            w: std::array::from_fn(|_| Array2::zeros((hidden_dim, input_dim))),
            u: std::array::from_fn(|_| Array2::zeros((hidden_dim, hidden_dim))),
            b: std::array::from_fn(|_| Array1::zeros(hidden_dim)),
        }
    }

    /// Glorot-uniform weights, zero biases except the forget gate at 1.
    pub fn glorot<R: Rng>(input_dim: usize, hidden_dim: usize, rng: &mut R) -> Self {
        let mut p = LstmParams {
            w: std::array::from_fn(|_| glorot(hidden_dim, input_dim, rng)),
            u: std::array::from_fn(|_| glorot(hidden_dim, hidden_dim, rng)),
            b: std::array::from_fn(|_| Array1::zeros(hidden_dim)),
        };
        p.b[FORGET].fill(1.0);
        p
    }

    pub fn input_dim(&self) -> usize {
        self.w[0].ncols()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w[0].nrows()
    }

    /// Every parameter array as a flat slice: `W_*`, then `U_*`, then `b_*`.
    pub fn slices(&self) -> Vec<&[f64]> {
        let w = self.w.iter().map(|a| a.as_slice().expect("standard layout"));
        let u = self.u.iter().map(|a| a.as_slice().expect("standard layout"));
        let b = self.b.iter().map(|a| a.as_slice().expect("standard layout"));
        w.chain(u).chain(b).collect()
    }

    pub fn slices_mut(&mut self) -> Vec<&mut [f64]> {
        let w = self.w.iter_mut().map(|a| a.as_slice_mut().expect("standard layout"));
        let u = self.u.iter_mut().map(|a| a.as_slice_mut().expect("standard layout"));
        let b = self.b.iter_mut().map(|a| a.as_slice_mut().expect("standard layout"));
        w.chain(u).chain(b).collect()
    }

    pub fn add_assign(&mut self, other: &LstmParams) {
        for (a, b) in self.slices_mut().into_iter().zip(other.slices()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for a in self.slices_mut() {
            a.iter_mut().for_each(|x| *x *= factor);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }
}

/// Activations of one time step, kept for the backward pass.
#[derive(Clone, Debug)]
pub struct StepCache {
    x: Array1<f64>,
    h_prev: Array1<f64>,
    c_prev: Array1<f64>,
    gates: [Array1<f64>; 4],
    tanh_c: Array1<f64>,
    pub h: Array1<f64>,
    pub c: Array1<f64>,
}

fn step_cached(
    p: &LstmParams,
    x: Array1<f64>,
    h_prev: Array1<f64>,
    c_prev: Array1<f64>,
) -> StepCache {
    let gates: [Array1<f64>; 4] = std::array::from_fn(|k| {
        let mut a = p.w[k].dot(&x) + p.u[k].dot(&h_prev) + &p.b[k];
        if k == CELL {
            a.mapv_inplace(f64::tanh);
        } else {
            a.mapv_inplace(sigmoid);
        }
        a
    });
    let c = &gates[INPUT] * &gates[CELL] + &gates[FORGET] * &c_prev;
    let tanh_c = c.mapv(f64::tanh);
    let h = &gates[OUTPUT] * &tanh_c;
    StepCache {
        x,
        h_prev,
        c_prev,
        gates,
        tanh_c,
        h,
        c,
    }
}

/// One LSTM step, returning `(h_t, c_t)`.
pub fn lstm_step(
    p: &LstmParams,
    x: ArrayView1<f64>,
    h_prev: ArrayView1<f64>,
    c_prev: ArrayView1<f64>,
) -> (Array1<f64>, Array1<f64>) {
    let s = step_cached(p, x.to_owned(), h_prev.to_owned(), c_prev.to_owned());
    (s.h, s.c)
}

/// Runs the sequence from zero state and returns the last hidden state.
pub fn encode_pattern(p: &LstmParams, inputs: &[Array1<f64>]) -> Array1<f64> {
    forward_sequence(p, inputs.to_vec()).0
}

pub type SequenceCache = Vec<StepCache>;

pub fn forward_sequence(p: &LstmParams, inputs: Vec<Array1<f64>>) -> (Array1<f64>, SequenceCache) {
    let hidden = p.hidden_dim();
    let mut h = Array1::zeros(hidden);
    let mut c = Array1::zeros(hidden);
    let mut cache = Vec::with_capacity(inputs.len());
    for x in inputs {
        let step = step_cached(p, x, h, c);
        h = step.h.clone();
        c = step.c.clone();
        cache.push(step);
    }
    (h, cache)
}

/// Backpropagates `dh_last` (the gradient on the final hidden state)
/// through the sequence, accumulating into `grads` and returning the
/// gradient of every input vector.
pub fn backward_sequence(
    p: &LstmParams,
    cache: &SequenceCache,
    dh_last: &Array1<f64>,
    grads: &mut LstmParams,
) -> Vec<Array1<f64>> {
    let hidden = p.hidden_dim();
    let mut dh = dh_last.clone();
    let mut dc_next = Array1::<f64>::zeros(hidden);
    let mut dxs = vec![Array1::zeros(p.input_dim()); cache.len()];
    for (t, s) in cache.iter().enumerate().rev() {
        let [i, f, o, g] = &s.gates;
        // dc = dc_next + dh ⊗ o ⊗ (1 - tanh²(c))
        let mut dc = dc_next.clone();
        Zip::from(&mut dc)
            .and(&dh)
            .and(o)
            .and(&s.tanh_c)
            .for_each(|dc, &dh, &o, &tc| *dc += dh * o * (1.0 - tc * tc));
        let mut da: [Array1<f64>; 4] = std::array::from_fn(|_| Array1::zeros(hidden));
        Zip::from(&mut da[INPUT]).and(&dc).and(g).and(i).for_each(|d, &dc, &g, &i| *d = dc * g * i * (1.0 - i));
        Zip::from(&mut da[FORGET])
            .and(&dc)
            .and(&s.c_prev)
            .and(f)
            .for_each(|d, &dc, &cp, &f| *d = dc * cp * f * (1.0 - f));
        Zip::from(&mut da[OUTPUT])
            .and(&dh)
            .and(&s.tanh_c)
            .and(o)
            .for_each(|d, &dh, &tc, &o| *d = dh * tc * o * (1.0 - o));
        Zip::from(&mut da[CELL]).and(&dc).and(i).and(g).for_each(|d, &dc, &i, &g| *d = dc * i * (1.0 - g * g));

        // Row-wise updates keep every access contiguous.
        let mut dx = Array1::zeros(p.input_dim());
        let mut dh_prev = Array1::zeros(hidden);
        for k in 0..4 {
            for (j, &d) in da[k].iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                grads.w[k].row_mut(j).scaled_add(d, &s.x);
                grads.u[k].row_mut(j).scaled_add(d, &s.h_prev);
                dx.scaled_add(d, &p.w[k].row(j));
                dh_prev.scaled_add(d, &p.u[k].row(j));
            }
            grads.b[k] += &da[k];
        }
        dxs[t] = dx;
        dc_next = dc * f;
        dh = dh_prev;
    }
    dxs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Straight-line transcription of the gate equations on plain vectors.
    fn oracle_step(p: &LstmParams, x: &[f64], h: &[f64], c: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = p.hidden_dim();
        let pre = |k: usize, j: usize| {
            let mut s = p.b[k][j];
            for (m, xv) in x.iter().enumerate() {
                s += p.w[k][[j, m]] * xv;
            }
            for (m, hv) in h.iter().enumerate() {
                s += p.u[k][[j, m]] * hv;
            }
            s
        };
        let sig = |z: f64| 1.0 / (1.0 + (-z).exp());
        let mut h_new = vec![0.0; n];
        let mut c_new = vec![0.0; n];
        for j in 0..n {
            let i = sig(pre(0, j));
            let f = sig(pre(1, j));
            let o = sig(pre(2, j));
            let g = pre(3, j).tanh();
            c_new[j] = i * g + f * c[j];
            h_new[j] = o * c_new[j].tanh();
        }
        (h_new, c_new)
    }

    fn random_params(input: usize, hidden: usize, seed: u64) -> LstmParams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = LstmParams::glorot(input, hidden, &mut rng);
        for b in &mut p.b {
            b.mapv_inplace(|_| rng.gen_range(-0.5..0.5));
        }
        p
    }

    #[test]
    fn zero_params_give_zero_state() {
        let p = LstmParams::zeros(3, 2);
        let (h, c) = lstm_step(&p, array![1.0, -2.0, 3.0].view(), Array1::zeros(2).view(), Array1::zeros(2).view());
        assert_eq!(h, array![0.0, 0.0]);
        assert_eq!(c, array![0.0, 0.0]);
        let v = encode_pattern(&p, &[array![1.0, 2.0, 3.0], array![4.0, 5.0, 6.0]]);
        assert_eq!(v, array![0.0, 0.0]);
    }

    #[test]
    fn step_matches_oracle() {
        let p = random_params(3, 3, 5);
        let x = [0.3, -0.7, 0.2];
        let h = [0.1, -0.2, 0.05];
        let c = [0.4, 0.0, -0.3];
        let (h1, c1) = lstm_step(&p, ArrayView1::from(&x), ArrayView1::from(&h), ArrayView1::from(&c));
        let (oh, oc) = oracle_step(&p, &x, &h, &c);
        assert_eq!(h1.len(), 3);
        for j in 0..3 {
            assert_abs_diff_eq!(h1[j], oh[j], epsilon = 1e-14);
            assert_abs_diff_eq!(c1[j], oc[j], epsilon = 1e-14);
        }
    }

    #[test]
    fn sequence_matches_oracle_loop() {
        let p = random_params(4, 3, 6);
        let xs = vec![array![0.1, 0.2, -0.3, 0.4], array![-1.0, 0.5, 0.0, 0.2], array![0.3, 0.3, 0.3, -0.9]];
        let v = encode_pattern(&p, &xs);
        let (mut h, mut c) = (vec![0.0; 3], vec![0.0; 3]);
        for x in &xs {
            (h, c) = oracle_step(&p, x.as_slice().unwrap(), &h, &c);
        }
        for j in 0..3 {
            assert_abs_diff_eq!(v[j], h[j], epsilon = 1e-14);
        }
        let single = encode_pattern(&p, &xs[..1]);
        let (h1, _) = oracle_step(&p, xs[0].as_slice().unwrap(), &[0.0; 3], &[0.0; 3]);
        for j in 0..3 {
            assert_abs_diff_eq!(single[j], h1[j], epsilon = 1e-14);
        }
    }

    #[test]
    fn forget_bias_starts_at_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = LstmParams::glorot(5, 4, &mut rng);
        assert!(p.b[FORGET].iter().all(|&b| b == 1.0));
        assert!(p.b[INPUT].iter().all(|&b| b == 0.0));
        let limit = (6.0f64 / 9.0).sqrt();
        assert!(p.w[0].iter().all(|w| w.abs() <= limit));
    }
}

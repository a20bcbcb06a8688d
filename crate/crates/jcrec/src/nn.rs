//! Minimal feed-forward function approximator with hand-rolled backprop.
//!
//! One hidden rectifier layer, parameters stored as a single flat vector so
//! the optimizer, serialization and the finite-difference gradient check
//! all operate on plain slices.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpShape {
    pub in_dim: usize,
    pub hidden: usize,
    pub out_dim: usize,
}

impl MlpShape {
    pub fn n_params(&self) -> usize {
        self.hidden * self.in_dim + self.hidden + self.out_dim * self.hidden + self.out_dim
    }

    // Offsets into the flat parameter vector.
    fn w1(&self) -> usize {
        0
    }
    fn b1(&self) -> usize {
        self.hidden * self.in_dim
    }
    fn w2(&self) -> usize {
        self.b1() + self.hidden
    }
    fn b2(&self) -> usize {
        self.w2() + self.out_dim * self.hidden
    }
}

/// Affine -> ReLU -> affine network over flat parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    pub shape: MlpShape,
    pub params: Vec<f64>,
}

impl Mlp {
    pub fn zeros(shape: MlpShape) -> Self {
        Mlp { shape, params: vec![0.0; shape.n_params()] }
    }

    /// He-style initialization of the weights, zero biases.
    pub fn init(shape: MlpShape, rng: &mut impl Rng) -> Self {
        let mut net = Mlp::zeros(shape);
        let s1 = (2.0 / shape.in_dim as f64).sqrt();
        let s2 = (2.0 / shape.hidden as f64).sqrt();
        for i in 0..shape.hidden * shape.in_dim {
            net.params[shape.w1() + i] = gauss(rng) * s1;
        }
        for i in 0..shape.out_dim * shape.hidden {
            net.params[shape.w2() + i] = gauss(rng) * s2;
        }
        net
    }

    /// Hidden activations (post-ReLU) and output for one input.
    pub fn forward_cached(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let s = &self.shape;
        assert_eq!(x.len(), s.in_dim, "input dimension mismatch");
        let p = &self.params;
        let mut hidden = vec![0.0; s.hidden];
        for h in 0..s.hidden {
            let row = s.w1() + h * s.in_dim;
            let mut z = p[s.b1() + h];
            for (i, &xi) in x.iter().enumerate() {
                z += p[row + i] * xi;
            }
            hidden[h] = z.max(0.0);
        }
        let mut out = vec![0.0; s.out_dim];
        for o in 0..s.out_dim {
            let row = s.w2() + o * s.hidden;
            let mut z = p[s.b2() + o];
            for (h, &a) in hidden.iter().enumerate() {
                z += p[row + h] * a;
            }
            out[o] = z;
        }
        (hidden, out)
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        self.forward_cached(x).1
    }

    /// Accumulate parameter gradients for one input given dLoss/dOutput.
    /// `hidden` must be the activations cached by [`forward_cached`] for
    /// the same input.
    pub fn backward(&self, x: &[f64], hidden: &[f64], grad_out: &[f64], grads: &mut [f64]) {
        let s = &self.shape;
        assert_eq!(grads.len(), s.n_params());
        let p = &self.params;

        // Output layer.
        for (o, &g) in grad_out.iter().enumerate() {
            let row = s.w2() + o * s.hidden;
            for (h, &a) in hidden.iter().enumerate() {
                grads[row + h] += g * a;
            }
            grads[s.b2() + o] += g;
        }

        // Hidden layer (ReLU subgradient: 0 at inactive units).
        for (h, &a) in hidden.iter().enumerate() {
            if a <= 0.0 {
                continue;
            }
            let mut g_hidden = 0.0;
            for (o, &g) in grad_out.iter().enumerate() {
                g_hidden += g * p[s.w2() + o * s.hidden + h];
            }
            let row = s.w1() + h * s.in_dim;
            for (i, &xi) in x.iter().enumerate() {
                grads[row + i] += g_hidden * xi;
            }
            grads[s.b1() + h] += g_hidden;
        }
    }
}

fn gauss(rng: &mut impl Rng) -> f64 {
    // Box-Muller; two uniforms per draw keeps the rng stream simple.
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Adam optimizer over a flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(lr: f64, n_params: usize) -> Self {
        Adam { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; n_params], v: vec![0.0; n_params], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        assert_eq!(params.len(), self.m.len());
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grads[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grads[i] * grads[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

/// Maximum relative error between analytic gradients and central finite
/// differences of `loss` over `params`.
pub fn gradient_check(
    params: &[f64],
    analytic: &[f64],
    epsilon: f64,
    mut loss: impl FnMut(&[f64]) -> f64,
) -> f64 {
    assert!(epsilon > 0.0 && epsilon <= 1e-2);
    assert_eq!(params.len(), analytic.len());
    let mut perturbed = params.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..params.len() {
        perturbed[i] = params[i] + epsilon;
        let plus = loss(&perturbed);
        perturbed[i] = params[i] - epsilon;
        let minus = loss(&perturbed);
        perturbed[i] = params[i];
        let fd = (plus - minus) / (2.0 * epsilon);
        let an = analytic[i];
        let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-8);
        worst = worst.max(rel);
    }
    worst
}

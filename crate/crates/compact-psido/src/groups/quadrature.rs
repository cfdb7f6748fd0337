use gauss_quad::GaussLegendre;

use super::{GroupPoint, Quaternion};
use crate::scalar::{re, Real};

/// Every rule uses this multiple of the smallest grid that is exact at its cutoff.
pub const QUADRATURE_SAFETY_FACTOR: usize = 2;

/// How the nodes of a product rule are laid out.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleLayout {
    /// `m` uniform points per axis, axis 0 varying slowest.
    TorusGrid { n: usize, m: usize },
    /// Node `(ib, ia, ig)` at index `(ib·n_alpha + ia)·n_gamma + ig`, with
    /// `α = 2π ia/n_alpha`, `γ = 4π ig/n_gamma` and Gauss–Legendre `cos β`.
    EulerGrid {
        n_alpha: usize,
        n_gamma: usize,
        betas: Vec<f64>,
        beta_weights: Vec<f64>,
    },
}

/// Haar quadrature rule; weights sum to one.
#[derive(Clone, Debug)]
pub struct QuadratureRule<T: Real> {
    pub nodes: Vec<GroupPoint<T>>,
    pub weights: Vec<T>,
    /// Products of matrix coefficients of irreps with `λ ≤ exactness` integrate exactly.
    pub exactness: f64,
    pub layout: RuleLayout,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn torus_grid(n: usize, m: usize, exactness: f64) -> Self {
        let total = m.pow(n as u32);
        let step = std::f64::consts::TAU / m as f64;
        let w = re::<T>(1.0 / total as f64);
        let mut nodes = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut th = vec![T::zero(); n];
            for axis in (0..n).rev() {
                th[axis] = re(step * (rem % m) as f64);
                rem /= m;
            }
            nodes.push(GroupPoint::Torus(th));
        }
        QuadratureRule {
            nodes,
            weights: vec![w; total],
            exactness,
            layout: RuleLayout::TorusGrid { n, m },
        }
    }

    pub(crate) fn euler_grid(n_alpha: usize, n_beta: usize, n_gamma: usize, exactness: f64) -> Self {
        let gl = GaussLegendre::new(n_beta).expect("at least two Gauss-Legendre nodes");
        let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let betas: Vec<f64> = pairs.iter().map(|p| p.0.clamp(-1.0, 1.0).acos()).collect();
        let beta_weights: Vec<f64> = pairs.iter().map(|p| p.1 / 2.0).collect();
        let mut nodes = Vec::with_capacity(n_alpha * n_beta * n_gamma);
        let mut weights = Vec::with_capacity(n_alpha * n_beta * n_gamma);
        let wag = 1.0 / (n_alpha * n_gamma) as f64;
        for (ib, &beta) in betas.iter().enumerate() {
            for ia in 0..n_alpha {
                let alpha = std::f64::consts::TAU * ia as f64 / n_alpha as f64;
                for ig in 0..n_gamma {
                    let gamma = 2.0 * std::f64::consts::TAU * ig as f64 / n_gamma as f64;
                    let q = Quaternion::from_euler(re::<T>(alpha), re::<T>(beta), re::<T>(gamma));
                    nodes.push(GroupPoint::Su2(q));
                    weights.push(re::<T>(wag * beta_weights[ib]));
                }
            }
        }
        QuadratureRule {
            nodes,
            weights,
            exactness,
            layout: RuleLayout::EulerGrid { n_alpha, n_gamma, betas, beta_weights },
        }
    }

    /// `Σ_i w_i f(x_i)`.
    pub fn integrate<F: Fn(&GroupPoint<T>) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (x, &w)| acc + w * f(x))
    }
}

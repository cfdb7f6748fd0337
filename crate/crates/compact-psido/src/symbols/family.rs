//! Families of functions vanishing at the identity and their RT differences.

use nalgebra::ComplexField;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{forward_fourier, BandlimitedFunction};
use crate::groups::{Backend, CompactGroup, GroupPoint};
use crate::scalar::{cplx, cre, re, to_f64, CMat, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyVariant {
    /// `q^{(τ)}_{ij} = [τ(x)*]_{ij} − δ_{ij}` over the fundamental irreps.
    FundamentalCoefficients,
    /// Chart coordinates glued to 1 away from the identity, then band-limited.
    ChartCutoff,
}

impl std::str::FromStr for FamilyVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fundamental-coefficients" => Ok(Self::FundamentalCoefficients),
            "chart-cutoff" => Ok(Self::ChartCutoff),
            _ => Err(Error::InvalidParameters(format!("unknown family variant {s}"))),
        }
    }
}

/// One Leibniz term `c·q_l(x)·q_k(y)`.
#[derive(Clone, Debug)]
pub struct LeibnizTerm<T: Real> {
    pub l: usize,
    pub k: usize,
    pub c: C<T>,
}

/// `q_1, …, q_{n_Δ}` with the data used by the calculus.
#[derive(Clone, Debug)]
pub struct DifferenceFamily<T: Real> {
    pub backend: Backend,
    pub variant: FamilyVariant,
    pub functions: Vec<BandlimitedFunction<T>>,
    pub names: Vec<String>,
    pub vanishing_orders: Vec<u32>,
    /// `q_j(xy) = q_j(x) + q_j(y) + Σ c^{(j)}_{l,k} q_l(x) q_k(y)`.
    pub leibniz: Option<Vec<Vec<LeibnizTerm<T>>>>,
    pub gradient_rank: usize,
    /// `min Σ_j |q_j|` over the non-identity nodes of the admissibility grid.
    pub common_zero_residual: f64,
    pub admissible: bool,
    pub strongly_admissible: bool,
}

impl<T: Real> DifferenceFamily<T> {
    pub fn build_strongly_admissible(backend: Backend, variant: FamilyVariant) -> Result<Self> {
        let (functions, names, leibniz) = match variant {
            FamilyVariant::FundamentalCoefficients => fundamental_coefficients(backend),
            FamilyVariant::ChartCutoff => {
                let (f, n) = chart_cutoff(backend)?;
                (f, n, None)
            }
        };
        Self::from_functions(backend, variant, functions, names, leibniz)
    }

    pub fn from_functions(
        backend: Backend,
        variant: FamilyVariant,
        functions: Vec<BandlimitedFunction<T>>,
        names: Vec<String>,
        leibniz: Option<Vec<Vec<LeibnizTerm<T>>>>,
    ) -> Result<Self> {
        let mut fam = Self {
            backend,
            variant,
            functions,
            names,
            vanishing_orders: Vec::new(),
            leibniz,
            gradient_rank: 0,
            common_zero_residual: 0.0,
            admissible: false,
            strongly_admissible: false,
        };
        let n = backend.metadata().dimension;
        fam.vanishing_orders = (0..fam.len()).map(|k| fam.vanishing_order(k)).collect();
        fam.gradient_rank = complex_rank(&fam.gradients(), 1e-8);
        fam.common_zero_residual = fam.common_zero_scan(backend.casimir_for_degree(12));
        fam.admissible = fam.gradient_rank == n;
        fam.strongly_admissible = fam.admissible && fam.common_zero_residual > 1e-8;
        Ok(fam)
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `G[k][j] = X_j q_k(e)`.
    pub fn gradients(&self) -> CMat<T> {
        let n = self.backend.metadata().dimension;
        CMat::from_fn(self.len(), n, |k, j| derivative_at_identity(&self.functions[k], &[j]))
    }

    /// 0 if `q(e) ≠ 0`, else the order of the first non-vanishing derivative (capped at 3).
    pub fn vanishing_order(&self, k: usize) -> u32 {
        let q = &self.functions[k];
        let tol = 1e-10;
        let n = self.backend.metadata().dimension;
        if to_f64(q.evaluate(&self.backend.identity()).modulus()) > tol {
            return 0;
        }
        for order in 1..3u32 {
            let mut words: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..order {
                words = words.into_iter().flat_map(|w| (0..n).map(move |j| [w.clone(), vec![j]].concat())).collect();
            }
            if words.iter().any(|w| to_f64(derivative_at_identity(q, w).modulus()) > tol) {
                return order;
            }
        }
        3
    }

    fn common_zero_scan(&self, lambda: f64) -> f64 {
        let rule = self.backend.quadrature::<T>(lambda);
        let vals: Vec<Vec<C<T>>> = self.functions.iter().map(|q| q.evaluate_on_rule(&rule)).collect();
        let mut best = f64::INFINITY;
        for (i, x) in rule.nodes.iter().enumerate() {
            if to_f64(self.backend.distance(x)) < 1e-9 {
                continue;
            }
            let s: f64 = vals.iter().map(|v| to_f64(v[i].modulus())).sum();
            best = best.min(s);
        }
        best
    }

    /// Largest Leibniz residual over `pairs` random `(x, y)`.
    pub fn leibniz_residual<R: Rng + ?Sized>(&self, pairs: usize, rng: &mut R) -> Option<f64> {
        let terms = self.leibniz.as_ref()?;
        let b = self.backend;
        let mut worst = 0.0f64;
        for _ in 0..pairs {
            let x: GroupPoint<T> = b.random_point(rng);
            let y: GroupPoint<T> = b.random_point(rng);
            let qx: Vec<C<T>> = self.functions.iter().map(|q| q.evaluate(&x)).collect();
            let qy: Vec<C<T>> = self.functions.iter().map(|q| q.evaluate(&y)).collect();
            let xy = b.mul(&x, &y);
            for (j, q) in self.functions.iter().enumerate() {
                let mut r = q.evaluate(&xy) - qx[j] - qy[j];
                for t in &terms[j] {
                    r -= t.c * qx[t.l] * qy[t.k];
                }
                worst = worst.max(to_f64(r.modulus()));
            }
        }
        Some(worst)
    }

    /// Greedy choice of `n = dim G` functions with independent gradients at `e`.
    pub fn adapted_indices(&self) -> Result<Vec<usize>> {
        let g = self.gradients();
        let n = self.backend.metadata().dimension;
        let mut chosen: Vec<usize> = Vec::new();
        for k in 0..self.len() {
            let mut trial = chosen.clone();
            trial.push(k);
            let rows = CMat::from_fn(trial.len(), n, |r, c| g[(trial[r], c)]);
            if complex_rank(&rows, 1e-8) == trial.len() {
                chosen = trial;
            }
            if chosen.len() == n {
                return Ok(chosen);
            }
        }
        Err(Error::NotAdapted(format!("gradient rank {} below dimension {}", chosen.len(), n)))
    }

    /// The family of complex conjugates `q̄_j`.
    pub fn conjugated(&self) -> Self {
        let mut out = self.clone();
        out.functions = self.functions.iter().map(|q| q.conj()).collect();
        out.names = self.names.iter().map(|s| format!("conj({s})")).collect();
        out.leibniz = self.leibniz.as_ref().map(|ts| {
            ts.iter().map(|t| t.iter().map(|l| LeibnizTerm { l: l.l, k: l.k, c: l.c.conj() }).collect()).collect()
        });
        out
    }
}

/// `X^w q(e)` for a word `w` of Lie-algebra indices, exact from the coefficients.
pub fn derivative_at_identity<T: Real>(q: &BandlimitedFunction<T>, word: &[usize]) -> C<T> {
    let b = q.backend();
    let mut acc = C::new(T::zero(), T::zero());
    for (rho, m) in &q.coeffs.entries {
        let mut p = crate::scalar::eye::<T>(rho.dim);
        for &j in word {
            p *= b.infinitesimal::<T>(rho, j).expect("generator index");
        }
        acc += (p * m).trace() * cre::<T>(rho.dim as f64);
    }
    acc
}

/// Numerical rank from the singular values of a complex matrix.
pub fn complex_rank<T: Real>(m: &CMat<T>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |a, s| a.max(to_f64(*s)));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| to_f64(**s) > rel_tol * top).count()
}

type Built<T> = (Vec<BandlimitedFunction<T>>, Vec<String>, Option<Vec<Vec<LeibnizTerm<T>>>>);

fn fundamental_coefficients<T: Real>(b: Backend) -> Built<T> {
    let mut functions = Vec::new();
    let mut names = Vec::new();
    let mut index = Vec::new();
    for (t, tau) in b.fundamental_set().into_iter().enumerate() {
        for i in 0..tau.dim {
            for j in 0..tau.dim {
                // [τ(x)*]_ij = conj(τ_ji(x))
                let mut q = BandlimitedFunction::<T>::matrix_coefficient(b, &tau, j, i).conj();
                if i == j {
                    q = q.sub(&BandlimitedFunction::constant(b, cre(1.0)));
                }
                functions.push(q.trimmed(re(1e-15)));
                names.push(format!("q[{tau}]({i},{j})"));
                index.push((t, i, j, tau.dim));
            }
        }
    }
    // Q(xy) = Q(x) + Q(y) + Q(y)Q(x) for Q = τ* − I, entrywise.
    let find = |t: usize, i: usize, j: usize| index.iter().position(|&(tt, ii, jj, _)| (tt, ii, jj) == (t, i, j)).expect("indexed");
    let leibniz = index
        .iter()
        .map(|&(t, i, j, d)| {
            (0..d).map(|k| LeibnizTerm { l: find(t, k, j), k: find(t, i, k), c: cplx(T::one(), T::zero()) }).collect()
        })
        .collect();
    (functions, names, Some(leibniz))
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, built from `e^{−1/t}`.
pub fn smooth_step(t: f64) -> f64 {
    let g = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
    let (a, c) = (g(t), g(1.0 - t));
    if a + c == 0.0 {
        0.0
    } else {
        a / (a + c)
    }
}

/// Exponential coordinates of `x` with respect to the backend's Lie-algebra basis.
pub fn chart_coordinates<T: Real>(x: &GroupPoint<T>) -> Vec<f64> {
    match x {
        GroupPoint::Torus(a) => a.iter().map(|v| to_f64(crate::groups::reduce_angle(*v))).collect(),
        GroupPoint::Su2(q) => {
            let (a, v) = (to_f64(q.a), [to_f64(q.b), to_f64(q.c), to_f64(q.d)]);
            let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if s < 1e-300 {
                return vec![0.0; 3];
            }
            let theta = 2.0 * s.atan2(a);
            v.iter().map(|c| theta * c / s).collect()
        }
    }
}

/// `q_j = p_j χ + ψ` at a point, with `p_j` the j-th chart coordinate inside the chart.
pub fn chart_cutoff_value(eps0: f64, j: usize, y: &[f64]) -> f64 {
    let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let chi = 1.0 - smooth_step((r - eps0 / 2.0) / (eps0 / 2.0));
    let psi = smooth_step((r - eps0 / 8.0) / (eps0 / 8.0));
    let p = if r < eps0 { y[j] } else { 1.0 };
    p * chi + psi
}

/// Degree at which the chart-cutoff functions are band-limited.
pub const CHART_CUTOFF_DEGREE: [usize; 2] = [48, 16];

fn chart_cutoff<T: Real>(b: Backend) -> Result<(Vec<BandlimitedFunction<T>>, Vec<String>)> {
    let meta = b.metadata();
    let degree = if b.is_torus() { CHART_CUTOFF_DEGREE[0] / meta.dimension.max(1) } else { CHART_CUTOFF_DEGREE[1] };
    let lam = b.casimir_for_degree(degree);
    let rule = b.quadrature::<T>(lam);
    let mut out = Vec::new();
    let mut names = Vec::new();
    for j in 0..meta.dimension {
        let f = forward_fourier(|x| cre(chart_cutoff_value(meta.chart_radius, j, &chart_coordinates(x))), lam, &rule)?;
        let at_e = f.evaluate(&b.identity());
        out.push(f.sub(&BandlimitedFunction::constant(b, at_e)));
        names.push(format!("chart[{j}]"));
    }
    Ok((out, names))
}

//! Group Fourier transform, inversion, Plancherel, convolution and Sobolev norms.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{project_blocks, SpectralField};
use crate::groups::{wigner_d_small_all, Backend, CompactGroup, GroupPoint, IrrepId, Label, QuadratureRule, RuleLayout, Su2};
use crate::scalar::{cis, cplx, re, zeros, CMat, Real, C};

/// A function given by finitely many Fourier coefficients,
/// `f(x) = Σ_π d_π Tr(π(x) f̂(π))`.
#[derive(Clone, Debug)]
pub struct BandlimitedFunction<T: Real> {
    pub coeffs: SpectralField<T>,
}

impl<T: Real> BandlimitedFunction<T> {
    pub fn new(coeffs: SpectralField<T>) -> Self {
        BandlimitedFunction { coeffs }
    }

    pub fn backend(&self) -> Backend {
        self.coeffs.backend
    }

    pub fn cutoff(&self) -> f64 {
        self.coeffs.cutoff
    }

    pub fn zero(backend: Backend, cutoff: f64) -> Self {
        Self::new(SpectralField::zeros(backend, cutoff))
    }

    /// The constant function `c`.
    pub fn constant(backend: Backend, c: C<T>) -> Self {
        let mut f = SpectralField::zeros(backend, 0.0);
        for m in f.entries.values_mut() {
            m[(0, 0)] = c;
        }
        Self::new(f)
    }

    /// The matrix coefficient `x ↦ π(x)_{ij}`.
    pub fn matrix_coefficient(backend: Backend, pi: &IrrepId, i: usize, j: usize) -> Self {
        let mut f = SpectralField::zeros(backend, pi.casimir);
        let m = f.entries.get_mut(pi).expect("irrep within its own cutoff");
        m[(j, i)] = cplx(re(1.0 / pi.dim as f64), T::zero());
        Self::new(f)
    }

    /// Coefficients uniform in the unit square, on every irrep up to `cutoff`.
    pub fn random<R: Rng + ?Sized>(backend: Backend, cutoff: f64, rng: &mut R) -> Self {
        Self::new(SpectralField::from_fn(backend, cutoff, |pi| {
            CMat::from_fn(pi.dim, pi.dim, |_, _| {
                cplx(re(rng.gen_range(-1.0..1.0)), re(rng.gen_range(-1.0..1.0)))
            })
        }))
    }

    pub fn evaluate(&self, x: &GroupPoint<T>) -> C<T> {
        inverse_fourier(&self.coeffs, x)
    }

    /// Values on every node of a product rule.
    pub fn evaluate_on_rule(&self, rule: &QuadratureRule<T>) -> Vec<C<T>> {
        match &rule.layout {
            RuleLayout::TorusGrid { n, m } => torus_grid_synthesis(&self.coeffs, *n, *m),
            RuleLayout::EulerGrid { n_alpha, n_gamma, betas, .. } => {
                euler_grid_synthesis(&self.coeffs, *n_alpha, *n_gamma, betas)
            }
        }
    }

    pub fn plancherel_normsq(&self) -> T {
        plancherel_normsq(&self.coeffs)
    }

    pub fn hs_norm(&self, s: f64) -> T {
        hs_norm(&self.coeffs, s)
    }

    pub fn convolve(&self, g: &Self) -> Self {
        convolve(self, g)
    }

    /// Exact pointwise product, with the cutoff enlarged to hold every component.
    pub fn multiply(&self, g: &Self) -> Self {
        multiply(self, g)
    }

    /// `x ↦ conj(f(x))`.
    pub fn conj(&self) -> Self {
        let b = self.backend();
        let mut out = SpectralField::empty(b, self.cutoff());
        for (pi, m) in &self.coeffs.entries {
            let (pbar, c) = b.conjugate::<T>(pi).expect("valid irrep");
            out.entries.insert(pbar, c.adjoint() * m.map(|z| z.conj()) * c);
        }
        out.truncated = self.coeffs.truncated;
        Self::new(out)
    }

    /// `x ↦ f(x⁻¹)`: `f̂(π) ↦ C* f̂(π̄)ᵀ C` on the conjugate.
    pub fn reflect(&self) -> Self {
        // f(x⁻¹) = Σ d Tr(π(x)* F) = Σ d Tr(conj(π(x)) Fᵀ) = Σ d Tr(π̄(x) C* Fᵀ C)
        let b = self.backend();
        let mut out = SpectralField::empty(b, self.cutoff());
        for (pi, m) in &self.coeffs.entries {
            let (pbar, c) = b.conjugate::<T>(pi).expect("valid irrep");
            out.entries.insert(pbar, c.adjoint() * m.transpose() * c);
        }
        out.truncated = self.coeffs.truncated;
        Self::new(out)
    }

    pub fn add(&self, g: &Self) -> Self {
        Self::new(pad_add(&self.coeffs, &g.coeffs, T::one()))
    }

    pub fn sub(&self, g: &Self) -> Self {
        Self::new(pad_add(&self.coeffs, &g.coeffs, -T::one()))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::new(self.coeffs.scale(s))
    }

    /// Left-invariant derivative `X_j f`: `f̂(π) ↦ π(X_j) f̂(π)`.
    pub fn derivative(&self, j: usize) -> Result<Self> {
        let b = self.backend();
        let mut out = self.coeffs.clone();
        for (pi, m) in out.entries.iter_mut() {
            *m = b.infinitesimal::<T>(pi, j)? * &*m;
        }
        Ok(Self::new(out))
    }

    /// Right-invariant derivative `X̃_j f`: `f̂(π) ↦ f̂(π) π(X_j)`.
    pub fn right_derivative(&self, j: usize) -> Result<Self> {
        let b = self.backend();
        let mut out = self.coeffs.clone();
        for (pi, m) in out.entries.iter_mut() {
            *m = &*m * b.infinitesimal::<T>(pi, j)?;
        }
        Ok(Self::new(out))
    }

    /// Drop coefficients that vanish to `tol`, then shrink the cutoff to the support.
    pub fn trimmed(&self, tol: T) -> Self {
        let mut out = self.coeffs.clone();
        out.entries.retain(|_, m| m.norm() > tol);
        Self::new(out)
    }
}

/// Adds `s·g` to `f`, taking the union of irreps (absent = 0) and the larger cutoff.
fn pad_add<T: Real>(f: &SpectralField<T>, g: &SpectralField<T>, s: T) -> SpectralField<T> {
    assert_eq!(f.backend, g.backend, "backend mismatch");
    let mut out = f.clone();
    out.cutoff = f.cutoff.max(g.cutoff);
    out.truncated = f.truncated || g.truncated;
    for (pi, m) in &g.entries {
        let e = out.entries.entry(pi.clone()).or_insert_with(|| zeros(pi.dim, pi.dim));
        *e += m * cplx(s, T::zero());
    }
    out
}

/// `f̂(π) = ∫ f(x) π(x)* dx` evaluated with the rule.
pub fn forward_fourier<T: Real, F: Fn(&GroupPoint<T>) -> C<T> + Sync>(
    f: F,
    cutoff: f64,
    rule: &QuadratureRule<T>,
) -> Result<BandlimitedFunction<T>> {
    let samples: Vec<C<T>> = rule.nodes.iter().map(&f).collect();
    forward_fourier_samples(&samples, cutoff, rule)
}

/// Same as [`forward_fourier`] from values at the rule's nodes, using the
/// separable structure of the product rule.
pub fn forward_fourier_samples<T: Real>(
    samples: &[C<T>],
    cutoff: f64,
    rule: &QuadratureRule<T>,
) -> Result<BandlimitedFunction<T>> {
    check_exactness(cutoff, rule)?;
    assert_eq!(samples.len(), rule.len(), "one sample per node");
    let coeffs = match &rule.layout {
        RuleLayout::TorusGrid { n, m } => torus_grid_analysis(samples, *n, *m, cutoff),
        RuleLayout::EulerGrid { n_alpha, n_gamma, betas, beta_weights } => {
            euler_grid_analysis(samples, *n_alpha, *n_gamma, betas, beta_weights, cutoff)
        }
    };
    Ok(BandlimitedFunction::new(coeffs))
}

/// Plain node-by-node sum `Σ_i w_i f(x_i) π(x_i)*`; the reference the fast paths are tested against.
pub fn forward_fourier_direct<T: Real>(
    backend: Backend,
    samples: &[C<T>],
    cutoff: f64,
    rule: &QuadratureRule<T>,
) -> Result<BandlimitedFunction<T>> {
    check_exactness(cutoff, rule)?;
    let mut out = SpectralField::zeros(backend, cutoff);
    for ((x, w), v) in rule.nodes.iter().zip(&rule.weights).zip(samples) {
        for (pi, m) in out.entries.iter_mut() {
            let px = backend.matrix_coeff(pi, x)?;
            *m += px.adjoint() * (*v * *w);
        }
    }
    Ok(BandlimitedFunction::new(out))
}

fn check_exactness<T: Real>(cutoff: f64, rule: &QuadratureRule<T>) -> Result<()> {
    if cutoff > rule.exactness {
        return Err(Error::InsufficientExactness { have: rule.exactness, need: cutoff });
    }
    Ok(())
}

/// `Σ_π d_π Tr(π(x) f̂(π))`.
pub fn inverse_fourier<T: Real>(fhat: &SpectralField<T>, x: &GroupPoint<T>) -> C<T> {
    let b = fhat.backend;
    match (b, x) {
        (Backend::Su2(_), GroupPoint::Su2(q)) => {
            let jmax = fhat
                .irreps()
                .map(|p| match p.label {
                    Label::Spin(j) => j,
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            let d = Su2::wigner_all(jmax, q);
            let mut acc = C::new(T::zero(), T::zero());
            for (pi, m) in &fhat.entries {
                let Label::Spin(j) = pi.label else { unreachable!() };
                acc += (&d[j as usize] * m).trace() * re::<T>(pi.dim as f64);
            }
            acc
        }
        _ => fhat.entries.iter().fold(C::new(T::zero(), T::zero()), |acc, (pi, m)| {
            let px = b.matrix_coeff(pi, x).expect("valid irrep");
            acc + (px * m).trace() * re::<T>(pi.dim as f64)
        }),
    }
}

/// `Σ_π d_π ‖f̂(π)‖²_HS`.
pub fn plancherel_normsq<T: Real>(fhat: &SpectralField<T>) -> T {
    fhat.entries
        .iter()
        .fold(T::zero(), |acc, (pi, m)| acc + m.norm_squared() * re::<T>(pi.dim as f64))
}

/// `(Σ_π d_π (1+λ_π)^s ‖σ(π)‖²_HS)^{1/2}` over the stored (truncated) table.
pub fn hs_norm<T: Real>(sigma: &SpectralField<T>, s: f64) -> T {
    sigma
        .entries
        .iter()
        .fold(T::zero(), |acc, (pi, m)| {
            acc + m.norm_squared() * re::<T>(pi.dim as f64 * (1.0 + pi.casimir).powf(s))
        })
        .sqrt()
}

/// `F(f*g) = ĝ f̂`.
pub fn convolve<T: Real>(f: &BandlimitedFunction<T>, g: &BandlimitedFunction<T>) -> BandlimitedFunction<T> {
    BandlimitedFunction::new(g.coeffs.matmul(&f.coeffs))
}

/// Exact pointwise product through the tensor-product decompositions.
pub fn multiply<T: Real>(f: &BandlimitedFunction<T>, g: &BandlimitedFunction<T>) -> BandlimitedFunction<T> {
    let b = f.backend();
    assert_eq!(b, g.backend(), "backend mismatch");
    let cutoff = b.product_cutoff(f.cutoff(), g.cutoff());
    let mut out = SpectralField::zeros(b, cutoff);
    out.truncated = f.coeffs.truncated || g.coeffs.truncated;
    for (tau, a) in &f.coeffs.entries {
        if a.iter().all(|z| z.re == T::zero() && z.im == T::zero()) {
            continue;
        }
        for (pi, c) in &g.coeffs.entries {
            let dec = b.tensor_decompose::<T>(tau, pi).expect("valid irreps");
            let scale = re::<T>((tau.dim * pi.dim) as f64);
            let blocks = project_blocks(&dec, &a.kronecker(c));
            for (rho, blk) in dec.components.iter().zip(blocks) {
                let e = out.entries.get_mut(rho).expect("component within product cutoff");
                *e += blk * cplx(scale / re::<T>(rho.dim as f64), T::zero());
            }
        }
    }
    BandlimitedFunction::new(out)
}

impl Backend {
    /// A cutoff containing every component of `τ⊗π` for `λ_τ ≤ a`, `λ_π ≤ b`.
    pub fn product_cutoff(&self, a: f64, b: f64) -> f64 {
        match self {
            Backend::Torus(_) => {
                let r = a.max(0.0).sqrt() + b.max(0.0).sqrt();
                (r * r + 1e-9).floor()
            }
            Backend::Su2(_) => {
                let ja = Su2::max_spin(a).unwrap_or(0);
                let jb = Su2::max_spin(b).unwrap_or(0);
                Backend::su2().casimir_for_degree((ja + jb) as usize)
            }
        }
    }
}

// ---- separable transforms on product grids ----

/// Contract one axis of a row-major array against `table[out][in]`.
fn transform_axis<T: Real>(data: &[C<T>], shape: &[usize], axis: usize, table: &[Vec<C<T>>]) -> (Vec<C<T>>, Vec<usize>) {
    let outer: usize = shape[..axis].iter().product();
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let new_len = table.len();
    let mut out = vec![C::new(T::zero(), T::zero()); outer * new_len * inner];
    for o in 0..outer {
        for (k, row) in table.iter().enumerate() {
            let dst = &mut out[(o * new_len + k) * inner..(o * new_len + k + 1) * inner];
            for (p, &w) in row.iter().enumerate().take(len) {
                let src = &data[(o * len + p) * inner..(o * len + p + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += *s * w;
                }
            }
        }
    }
    let mut new_shape = shape.to_vec();
    new_shape[axis] = new_len;
    (out, new_shape)
}

fn torus_grid_analysis<T: Real>(samples: &[C<T>], n: usize, m: usize, cutoff: f64) -> SpectralField<T> {
    let backend = Backend::torus(n);
    let kmax = cutoff.max(0.0).sqrt().floor() as i64;
    let nk = (2 * kmax + 1) as usize;
    let table: Vec<Vec<C<T>>> = (-kmax..=kmax)
        .map(|k| {
            (0..m)
                .map(|p| {
                    let ph = -std::f64::consts::TAU * ((k * p as i64).rem_euclid(m as i64)) as f64 / m as f64;
                    cis(re::<T>(ph)) * re::<T>(1.0 / m as f64)
                })
                .collect()
        })
        .collect();
    let mut data = samples.to_vec();
    let mut shape = vec![m; n];
    for axis in 0..n {
        (data, shape) = transform_axis(&data, &shape, axis, &table);
    }
    SpectralField::from_fn(backend, cutoff, |pi| {
        let Label::Torus(k) = &pi.label else { unreachable!() };
        let idx = k.iter().fold(0usize, |acc, &v| acc * nk + (v as i64 + kmax) as usize);
        CMat::from_element(1, 1, data[idx])
    })
}

fn torus_grid_synthesis<T: Real>(fhat: &SpectralField<T>, n: usize, m: usize) -> Vec<C<T>> {
    let kmax = fhat
        .irreps()
        .filter_map(|p| match &p.label {
            Label::Torus(k) => k.iter().map(|v| v.unsigned_abs() as i64).max(),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let nk = (2 * kmax + 1) as usize;
    let mut data = vec![C::new(T::zero(), T::zero()); nk.pow(n as u32)];
    for (pi, v) in &fhat.entries {
        let Label::Torus(k) = &pi.label else { unreachable!() };
        let idx = k.iter().fold(0usize, |acc, &v| acc * nk + (v as i64 + kmax) as usize);
        data[idx] = v[(0, 0)];
    }
    let table: Vec<Vec<C<T>>> = (0..m)
        .map(|p| {
            (-kmax..=kmax)
                .map(|k| {
                    let ph = std::f64::consts::TAU * ((k * p as i64).rem_euclid(m as i64)) as f64 / m as f64;
                    cis(re::<T>(ph))
                })
                .collect()
        })
        .collect();
    let mut shape = vec![nk; n];
    for axis in 0..n {
        (data, shape) = transform_axis(&data, &shape, axis, &table);
    }
    data
}

fn spin_max<T: Real>(f: &SpectralField<T>) -> u32 {
    f.irreps()
        .map(|p| match p.label {
            Label::Spin(j) => j,
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

fn euler_grid_analysis<T: Real>(
    samples: &[C<T>],
    n_alpha: usize,
    n_gamma: usize,
    betas: &[f64],
    beta_weights: &[f64],
    cutoff: f64,
) -> SpectralField<T> {
    let backend = Backend::su2();
    let jmax = Su2::max_spin(cutoff).unwrap_or(0) as i64;
    let nm = (2 * jmax + 1) as usize;
    // half-unit frequencies μ2 ∈ [-jmax, jmax]
    let tab_g: Vec<Vec<C<T>>> = (-jmax..=jmax)
        .map(|nu2| {
            (0..n_gamma)
                .map(|ig| {
                    let ph = std::f64::consts::TAU * ((nu2 * ig as i64).rem_euclid(n_gamma as i64)) as f64 / n_gamma as f64;
                    cis(re::<T>(ph)) * re::<T>(1.0 / n_gamma as f64)
                })
                .collect()
        })
        .collect();
    let tab_a: Vec<Vec<C<T>>> = (-jmax..=jmax)
        .map(|mu2| {
            (0..n_alpha)
                .map(|ia| {
                    let ph = std::f64::consts::PI * ((mu2 * ia as i64).rem_euclid(2 * n_alpha as i64)) as f64 / n_alpha as f64;
                    cis(re::<T>(ph)) * re::<T>(1.0 / n_alpha as f64)
                })
                .collect()
        })
        .collect();
    let shape = vec![betas.len(), n_alpha, n_gamma];
    let (data, shape) = transform_axis(samples, &shape, 2, &tab_g);
    let (g, _) = transform_axis(&data, &shape, 1, &tab_a);
    let at = |ib: usize, mu2: i64, nu2: i64| g[(ib * nm + (mu2 + jmax) as usize) * nm + (nu2 + jmax) as usize];
    let mut out = SpectralField::zeros(backend, cutoff);
    for (ib, &beta) in betas.iter().enumerate() {
        let ds = wigner_d_small_all::<T>(jmax as u32, re(beta));
        let w = re::<T>(beta_weights[ib]);
        for (pi, m) in out.entries.iter_mut() {
            let Label::Spin(j) = pi.label else { unreachable!() };
            let d = &ds[j as usize];
            for a in 0..pi.dim {
                for b in 0..pi.dim {
                    let (ma2, mb2) = (j as i64 - 2 * a as i64, j as i64 - 2 * b as i64);
                    m[(a, b)] += at(ib, mb2, ma2) * (d[(b, a)] * w);
                }
            }
        }
    }
    out
}

fn euler_grid_synthesis<T: Real>(fhat: &SpectralField<T>, n_alpha: usize, n_gamma: usize, betas: &[f64]) -> Vec<C<T>> {
    let jmax = spin_max(fhat) as i64;
    let nm = (2 * jmax + 1) as usize;
    let nb = betas.len();
    let mut h = vec![C::new(T::zero(), T::zero()); nb * nm * nm];
    for (ib, &beta) in betas.iter().enumerate() {
        let ds = wigner_d_small_all::<T>(jmax as u32, re(beta));
        for (pi, m) in &fhat.entries {
            let Label::Spin(j) = pi.label else { unreachable!() };
            let d = &ds[j as usize];
            let dim = re::<T>(pi.dim as f64);
            for a in 0..pi.dim {
                for b in 0..pi.dim {
                    let (ma2, mb2) = (j as i64 - 2 * a as i64, j as i64 - 2 * b as i64);
                    h[(ib * nm + (ma2 + jmax) as usize) * nm + (mb2 + jmax) as usize] += m[(b, a)] * (d[(a, b)] * dim);
                }
            }
        }
    }
    let tab_a: Vec<Vec<C<T>>> = (0..n_alpha)
        .map(|ia| {
            (-jmax..=jmax)
                .map(|mu2| {
                    let ph = -std::f64::consts::PI * ((mu2 * ia as i64).rem_euclid(2 * n_alpha as i64)) as f64 / n_alpha as f64;
                    cis(re::<T>(ph))
                })
                .collect()
        })
        .collect();
    let tab_g: Vec<Vec<C<T>>> = (0..n_gamma)
        .map(|ig| {
            (-jmax..=jmax)
                .map(|nu2| {
                    let ph = -std::f64::consts::TAU * ((nu2 * ig as i64).rem_euclid(n_gamma as i64)) as f64 / n_gamma as f64;
                    cis(re::<T>(ph))
                })
                .collect()
        })
        .collect();
    let shape = vec![nb, nm, nm];
    let (data, shape) = transform_axis(&h, &shape, 1, &tab_a);
    let (data, _) = transform_axis(&data, &shape, 2, &tab_g);
    data
}

#[cfg(test)]
#[path = "fourier_tests.rs"]
mod tests;

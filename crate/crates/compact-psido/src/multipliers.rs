//! Spectral multipliers `f(L)`, heat and Bessel kernels, the dyadic partition of
//! the spectrum, and the decay reports built on them.

use std::fmt;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use nalgebra::{ComplexField, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier::{multiply, BandlimitedFunction};
use crate::groups::{Backend, CompactGroup, GroupPoint, IrrepId, Label};
use crate::scalar::{cplx, op_norm, re, CMat, Real, C};
use crate::symbols::{delta_q, smooth_step, DifferenceFamily, SymbolField};

/// Value and first two derivatives of a function of one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(c: f64) -> Self {
        Jet { v: c, d1: 0.0, d2: 0.0 }
    }

    pub fn var(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }

    fn chain(self, f: f64, f1: f64, f2: f64) -> Self {
        Jet { v: f, d1: f1 * self.d1, d2: f2 * self.d1 * self.d1 + f1 * self.d2 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn powf(self, p: f64) -> Self {
        let x = self.v;
        self.chain(x.powf(p), p * x.powf(p - 1.0), p * (p - 1.0) * x.powf(p - 2.0))
    }

    pub fn recip(self) -> Self {
        self.powf(-1.0)
    }

    pub fn scale(self, c: f64) -> Self {
        Jet { v: c * self.v, d1: c * self.d1, d2: c * self.d2 }
    }

    pub fn add(self, o: Self) -> Self {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.scale(-1.0))
    }

    pub fn mul(self, o: Self) -> Self {
        Jet { v: self.v * o.v, d1: self.d1 * o.v + self.v * o.d1, d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2 }
    }

    fn get(&self, k: usize) -> f64 {
        [self.v, self.d1, self.d2][k]
    }
}

/// `t ↦ 0` for `t ≤ 0`, `1` for `t ≥ 1`, smooth in between (same glue as [`smooth_step`]).
fn smooth_step_jet(t: Jet) -> Jet {
    if t.v <= 0.0 {
        return Jet::constant(0.0);
    }
    if t.v >= 1.0 {
        return Jet::constant(1.0);
    }
    let g = |s: Jet| s.recip().scale(-1.0).exp();
    let a = g(t);
    let c = g(Jet::constant(1.0).sub(t));
    let out = a.mul(a.add(c).recip());
    debug_assert!((out.v - smooth_step(t.v)).abs() < 1e-14);
    out
}

type JetFn = dyn Fn(Jet) -> Jet + Send + Sync;

/// A function `λ ↦ f(λ)` on the spectrum with (optionally) its first two derivatives.
#[derive(Clone)]
pub struct MultiplierProfile {
    pub name: String,
    /// Regularity class tag, e.g. `"M_0"` or `"compact"`.
    pub class: String,
    /// Number of derivatives supplied (0 or 2).
    pub derivatives: usize,
    f: Arc<JetFn>,
}

impl fmt::Debug for MultiplierProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiplierProfile({}, {}, d={})", self.name, self.class, self.derivatives)
    }
}

impl MultiplierProfile {
    /// A profile given through its jet; the derivatives are trusted (see [`Self::check_derivatives`]).
    pub fn from_jet(name: &str, class: &str, f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Self {
        MultiplierProfile { name: name.into(), class: class.into(), derivatives: 2, f: Arc::new(f) }
    }

    /// A profile with values only.
    pub fn from_fn(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        MultiplierProfile {
            name: name.into(),
            class: "C0".into(),
            derivatives: 0,
            f: Arc::new(move |x: Jet| Jet { v: f(x.v), d1: f64::NAN, d2: f64::NAN }),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_jet("constant", "M_0", move |_| Jet::constant(c))
    }

    /// `e^{−λ}`.
    pub fn heat() -> Self {
        Self::from_jet("heat", "M_0", |x| x.scale(-1.0).exp())
    }

    /// `(1+λ)^{m/2}`.
    pub fn power(m: f64) -> Self {
        Self::from_jet(&format!("power({m})"), &format!("M_{}", m / 2.0), move |x| x.add(Jet::constant(1.0)).powf(m / 2.0))
    }

    /// `(1+λ)^{−s/2}`, the multiplier of the Bessel potential.
    pub fn bessel(s: f64) -> Self {
        let mut p = Self::power(-s);
        p.name = format!("bessel({s})");
        p
    }

    /// `ψ(λ) = 1` for `|λ| ≤ 1/2`, `0` for `|λ| ≥ 1`.
    pub fn bump() -> Self {
        Self::from_jet("bump", "compact", |x| {
            let x = if x.v < 0.0 { x.scale(-1.0) } else { x };
            Jet::constant(1.0).sub(smooth_step_jet(x.scale(2.0).sub(Jet::constant(1.0))))
        })
    }

    /// `χ` with `χ = 1` on `[0, 1]` and `χ = 0` on `[2, ∞)`.
    pub fn cutoff_profile() -> Self {
        let mut p = Self::bump().scaled(0.5);
        p.name = "cutoff".into();
        p
    }

    /// `λ ↦ f(tλ)`.
    pub fn scaled(&self, t: f64) -> Self {
        let f = self.f.clone();
        MultiplierProfile {
            name: format!("{}(t={t})", self.name),
            class: self.class.clone(),
            derivatives: self.derivatives,
            f: Arc::new(move |x: Jet| f(x.scale(t))),
        }
    }

    /// Pointwise product of two profiles.
    pub fn product(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        MultiplierProfile {
            name: format!("{}*{}", self.name, other.name),
            class: format!("{}*{}", self.class, other.class),
            derivatives: self.derivatives.min(other.derivatives),
            f: Arc::new(move |x: Jet| f(x).mul(g(x))),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        MultiplierProfile {
            name: format!("{}-{}", self.name, other.name),
            class: self.class.clone(),
            derivatives: self.derivatives.min(other.derivatives),
            f: Arc::new(move |x: Jet| f(x).sub(g(x))),
        }
    }

    pub fn value(&self, lambda: f64) -> f64 {
        (self.f)(Jet::var(lambda)).v
    }

    /// `f^{(k)}(λ)` when supplied.
    pub fn derivative(&self, k: usize, lambda: f64) -> Option<f64> {
        (k <= self.derivatives).then(|| (self.f)(Jet::var(lambda)).get(k))
    }

    /// `max_{k ≤ d} sup_λ (1+λ)^{k−m'}|f^{(k)}(λ)|` on a log grid of `[0, 10⁶]`.
    pub fn norm(&self, m_prime: f64, d: usize) -> Option<f64> {
        if d > self.derivatives {
            return None;
        }
        let mut best = 0.0f64;
        for lam in log_grid() {
            let j = (self.f)(Jet::var(lam));
            for k in 0..=d {
                best = best.max((1.0 + lam).powf(k as f64 - m_prime) * j.get(k).abs());
            }
        }
        Some(best)
    }

    /// Largest relative mismatch between the supplied derivatives and
    /// Richardson-extrapolated centred differences on a log grid. Each mismatch is
    /// taken relative to the local value, floored at `10⁻⁶` of the sup over the grid.
    pub fn check_derivatives(&self) -> Option<f64> {
        if self.derivatives == 0 {
            return Some(0.0);
        }
        let grid: Vec<f64> = log_grid().into_iter().filter(|&l| l > 1e-2 && l < 1e4).collect();
        let central = |g: &dyn Fn(f64) -> f64, x: f64, h: f64| {
            let d = |h: f64| (g(x + h) - g(x - h)) / (2.0 * h);
            (4.0 * d(h / 2.0) - d(h)) / 3.0
        };
        let mut worst = 0.0f64;
        for k in 1..=self.derivatives {
            let prev = |x: f64| (self.f)(Jet::var(x)).get(k - 1);
            let sup = grid.iter().map(|&l| (self.f)(Jet::var(l)).get(k).abs()).fold(0.0, f64::max);
            for &l in &grid {
                let exact = (self.f)(Jet::var(l)).get(k);
                let fd = central(&prev, l, 1e-4 * l.min(1.0));
                let scale = exact.abs().max(1e-6 * sup).max(f64::MIN_POSITIVE);
                worst = worst.max((exact - fd).abs() / scale);
            }
        }
        Some(worst)
    }
}

fn log_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend((0..=1800).map(|i| 10f64.powf(-3.0 + 9.0 * i as f64 / 1800.0)));
    g
}

/// `η_ℓ` of the dyadic partition: `η₀ = ψ`, `η_ℓ(λ) = ψ(2^{−ℓ}λ) − ψ(2^{−(ℓ−1)}λ)`.
pub fn dyadic_partition(l: usize) -> MultiplierProfile {
    let psi = MultiplierProfile::bump();
    let mut p = if l == 0 { psi } else { psi.scaled(0.5f64.powi(l as i32)).difference(&psi.scaled(0.5f64.powi(l as i32 - 1))) };
    p.name = format!("eta_{l}");
    p.class = "compact".into();
    p
}

/// `π ↦ f(λ_π)·I` for `λ_π ≤ cutoff`.
pub fn spectral_symbol<T: Real>(f: &MultiplierProfile, backend: Backend, cutoff: f64) -> SpectralField<T> {
    SpectralField::scalar_fn(backend, cutoff, |lam| re(f.value(lam)))
}

/// The heat kernel `p_t` truncated to `λ_π ≤ cutoff`.
pub fn heat_kernel<T: Real>(backend: Backend, t: f64, cutoff: f64) -> Result<BandlimitedFunction<T>> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameters(format!("heat time must be positive, got {t}")));
    }
    Ok(BandlimitedFunction::new(spectral_symbol(&MultiplierProfile::heat().scaled(t), backend, cutoff)))
}

/// Fibrewise `σ(x,π)·χ(λ_π/ℓ)`.
pub fn smoothing_truncation<T: Real>(sigma: &SymbolField<T>, l: f64, chi: &MultiplierProfile) -> SymbolField<T> {
    let s = spectral_symbol(&chi.scaled(1.0 / l), sigma.backend, sigma.cutoff);
    sigma.times_invariant(&s)
}

/// Least-squares line through `(x, y)`, with twice the standard error of the slope.
#[derive(Clone, Debug, Serialize)]
pub struct Fit {
    pub label: String,
    pub axis: String,
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    pub width: f64,
    /// `slope ≤ bound` when `upper`, else `slope ≥ bound`.
    pub bound: f64,
    pub upper: bool,
    pub passed: bool,
}

impl Fit {
    /// Fit `y` against `x`; fewer than `min_points` points is an error.
    pub fn new(label: &str, axis: &str, x: &[f64], y: &[f64], bound: f64, upper: bool, min_points: usize) -> Result<Fit> {
        let n = x.len();
        if n < min_points || n != y.len() {
            return Err(Error::InvalidParameters(format!("fit {label} needs {min_points} points, got {n}")));
        }
        let (slope, intercept, width) = linear_fit(x, y);
        let passed = if upper { slope <= bound } else { slope >= bound };
        Ok(Fit { label: label.into(), axis: axis.into(), points: n, slope, intercept, width, bound, upper, passed })
    }
}

/// Slope, intercept and twice the slope's standard error.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let width = if x.len() > 2 && sxx > 0.0 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        2.0 * (rss / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (slope, intercept, width)
}

/// Raw grid data, fits against stated bounds, and scalar checks.
#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub fits: Vec<Fit>,
    /// `(name, value, bound, passed)` for checks that are not slopes.
    pub checks: Vec<(String, f64, f64, bool)>,
    pub thresholds: Vec<(String, f64)>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl DecayReport {
    fn new(name: &str, columns: &[&str]) -> Self {
        DecayReport {
            name: name.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
            fits: vec![],
            checks: vec![],
            thresholds: vec![],
            notes: vec![],
            passed: true,
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.fits.iter().all(|f| f.passed) && self.checks.iter().all(|c| c.3);
        self
    }

    fn check(&mut self, name: &str, value: f64, bound: f64, passed: bool) {
        self.checks.push((name.into(), value, bound, passed));
    }
}

/// Slope thresholds for the decay reports.
pub const SLOPE_BOUND: f64 = 0.1;
pub const DRIFT_BOUND: f64 = 0.02;

/// Sup over `π` of `t^{−m/2}(1+λ_π)^{−(m−|α|)/2}‖Δ_Q^α{f(tλ_π)}‖` for every `t`,
/// cutoff (given as degree) and `|α| ≤ a_max`. Bounded iff the running maximum
/// (over decreasing `t`, resp. increasing cutoff) of the largest value has slope at
/// most [`SLOPE_BOUND`] against `log(1/t)`, resp. `log Λ`. The running maximum keeps
/// scales where the lattice misses the support of a compact `f` from reading as decay.
pub fn multiplier_decay_report(
    f: &MultiplierProfile,
    m: f64,
    a_max: usize,
    family: &DifferenceFamily<f64>,
    t_grid: &[f64],
    degree_grid: &[usize],
) -> Result<DecayReport> {
    if a_max > f.derivatives {
        return Err(Error::InvalidParameters(format!(
            "profile {} supplies {} derivatives, {a_max} needed",
            f.name, f.derivatives
        )));
    }
    if !family.strongly_admissible {
        return Err(Error::InvalidParameters("difference family is not strongly admissible".into()));
    }
    let b = family.backend;
    let k = family.len();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=a_max {
        let mut next = vec![];
        for w in words.iter().filter(|w| w.len() == len - 1) {
            for i in w.last().copied().unwrap_or(0)..k {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        words.extend(next);
    }
    // Δ_q is local in π, so one computation at the largest cutoff serves every
    // smaller one: the sup at Λ runs over the exactly computed fibres `λ_π ≤ Λ`.
    let top = b.casimir_for_degree(degree_grid.iter().copied().max().unwrap_or(0));
    let cutoffs: Vec<f64> = degree_grid.iter().map(|&d| b.casimir_for_degree(d)).collect();
    let results: Vec<Result<Vec<Vec<f64>>>> = t_grid
        .par_iter()
        .map(|&t| {
            let base: SpectralField<f64> = spectral_symbol(&f.scaled(t), b, top);
            let mut sup = vec![vec![0.0f64; a_max + 1]; cutoffs.len()];
            // Differences commute, so nondecreasing words cover every multi-index.
            let mut cache: Vec<(Vec<usize>, SpectralField<f64>)> = vec![(vec![], base)];
            for w in words.iter().skip(1) {
                let parent = cache.iter().find(|(p, _)| p[..] == w[..w.len() - 1]).expect("prefix computed first").1.clone();
                cache.push((w.clone(), delta_q(&parent, &family.functions[*w.last().unwrap()])?));
            }
            for (w, field) in &cache {
                let a = w.len() as f64;
                for (pi, mat) in &field.entries {
                    let v = t.powf(-m / 2.0) * (1.0 + pi.casimir).powf(-(m - a) / 2.0) * op_norm(mat);
                    for (k, &c) in cutoffs.iter().enumerate() {
                        if pi.casimir <= c + 1e-9 {
                            sup[k][w.len()] = sup[k][w.len()].max(v);
                        }
                    }
                }
            }
            Ok(sup)
        })
        .collect();
    let grid: Vec<(f64, usize, usize)> = t_grid.iter().flat_map(|&t| degree_grid.iter().enumerate().map(move |(k, &d)| (t, k, d))).collect();
    let results: Vec<Vec<Vec<f64>>> = results.into_iter().collect::<Result<_>>()?;
    let mut rep = DecayReport::new(&format!("multiplier-decay {} on {}", f.name, b.id()), &["t", "degree", "alpha", "weighted_sup"]);
    rep.thresholds.push(("slope".into(), SLOPE_BOUND));
    let mut table = vec![];
    for &(t, k, deg) in &grid {
        let ti = t_grid.iter().position(|&x| x == t).unwrap();
        for (a, v) in results[ti][k].iter().enumerate() {
            rep.rows.push(vec![t, deg as f64, a as f64, *v]);
            table.push((t, deg, a, *v));
        }
    }
    for a in 0..=a_max {
        let pick = |t: f64, d: usize| table.iter().find(|r| r.0 == t && r.1 == d && r.2 == a).map(|r| r.3).unwrap_or(0.0);
        let mut ts = t_grid.to_vec();
        ts.sort_by(|a, b| b.total_cmp(a));
        let xs: Vec<f64> = ts.iter().map(|t| (1.0 / t).ln()).collect();
        let ys = log_running_max(ts.iter().map(|&t| degree_grid.iter().map(|&d| pick(t, d)).fold(0.0, f64::max)));
        rep.fits.push(Fit::new(&format!("|alpha|={a} vs 1/t"), "log(1/t)", &xs, &ys, SLOPE_BOUND, true, 4)?);
        let mut degs = degree_grid.to_vec();
        degs.sort_unstable();
        let xs: Vec<f64> = degs.iter().map(|&d| b.casimir_for_degree(d).ln()).collect();
        let ys = log_running_max(degs.iter().map(|&d| t_grid.iter().map(|&t| pick(t, d)).fold(0.0, f64::max)));
        rep.fits.push(Fit::new(&format!("|alpha|={a} vs cutoff"), "log(Lambda)", &xs, &ys, SLOPE_BOUND, true, 4)?);
    }
    Ok(rep.finish())
}

fn log_running_max(v: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut run = 1e-300f64;
    v.map(|x| {
        run = run.max(x);
        run.ln()
    })
    .collect()
}

/// Which of the three kernel regimes `n+m` falls in.
fn regime_weight(n: usize, m: f64, rho: f64, r: f64) -> f64 {
    let s = n as f64 + m;
    if s > 1e-12 {
        r.powf(s / rho)
    } else if s.abs() <= 1e-12 {
        1.0 / r.ln().abs()
    } else {
        1.0
    }
}

/// Radii `r` of the shells `{r ≤ |y| < 2r}`, half-octave spaced from `1/4` down to `rmin`.
pub fn shell_radii(rmin: f64) -> Vec<f64> {
    (0..).map(|k| 0.25 * 0.5f64.powf(k as f64 / 2.0)).take_while(|&r| r >= rmin * (1.0 - 1e-12)).collect()
}

/// The test symbol `(1+λ)^{m/2}·χ(4λ/Λ)` of order `m`, smoothly cut off inside `Λ/2`.
pub fn order_m_symbol(backend: Backend, m: f64, cutoff: f64) -> SpectralField<f64> {
    let f = MultiplierProfile::power(m).product(&MultiplierProfile::cutoff_profile().scaled(4.0 / cutoff));
    spectral_symbol(&f, backend, cutoff)
}

fn points_at_distance(b: Backend, r: f64) -> Vec<GroupPoint<f64>> {
    let n = b.metadata().dimension;
    let dirs: Vec<Vec<f64>> = match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => vec![vec![1.0, 0.0], vec![0.6, 0.8]],
        _ => vec![vec![1.0, 0.0, 0.0], vec![1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]],
    };
    dirs.into_iter().map(|d| b.exp_chart(&d.iter().map(|c| c * r).collect::<Vec<_>>())).collect()
}

/// Shell maxima of the kernel of `(1+λ)^{m/2}` (smoothly cut off) times the regime
/// weight. Passes iff, for each cutoff, the weighted maxima over shells with
/// `r ≥ Λ^{−1/2}` have slope at most [`SLOPE_BOUND`] against `log(1/r)`, and the
/// largest weighted maximum has slope at most [`SLOPE_BOUND`] against `log Λ`.
/// When `n+m < 0` the sup of `|κ|` must also drift by at most [`DRIFT_BOUND`].
pub fn kernel_decay_report(backend: Backend, m: f64, rho: f64, degree_grid: &[usize]) -> Result<DecayReport> {
    let n = backend.metadata().dimension;
    let mut rep = DecayReport::new(&format!("kernel-decay m={m} on {}", backend.id()), &["degree", "r", "weighted_max"]);
    rep.thresholds.push(("slope".into(), SLOPE_BOUND));
    rep.thresholds.push(("drift".into(), DRIFT_BOUND));
    let regime = if n as f64 + m > 1e-12 { ">0" } else if (n as f64 + m).abs() <= 1e-12 { "=0" } else { "<0" };
    rep.notes.push(format!("n = {n}, m = {m}, regime n+m {regime}"));
    let per_cutoff: Vec<Result<(Vec<(f64, f64)>, f64)>> = degree_grid
        .par_iter()
        .map(|&deg| {
            let cutoff = backend.casimir_for_degree(deg);
            let kappa = BandlimitedFunction::new(order_m_symbol(backend, m, cutoff));
            let rmin = cutoff.powf(-0.5);
            let mut rows = vec![];
            for r in shell_radii(rmin) {
                let mut mx = 0.0f64;
                for i in 0..16 {
                    let y = r * 2f64.powf(i as f64 / 16.0);
                    for x in points_at_distance(backend, y) {
                        mx = mx.max(kappa.evaluate(&x).modulus() * regime_weight(n, m, rho, y));
                    }
                }
                rows.push((r, mx));
            }
            let sup = kappa.evaluate(&backend.identity()).modulus();
            Ok((rows, sup))
        })
        .collect();
    let mut tops = vec![];
    let mut sups = vec![];
    for (&deg, res) in degree_grid.iter().zip(per_cutoff) {
        let (rows, sup) = res?;
        let (xs, ys): (Vec<f64>, Vec<f64>) = rows.iter().map(|&(r, w)| ((1.0 / r).ln(), w.max(1e-300).ln())).unzip();
        rep.fits.push(Fit::new(&format!("degree {deg} vs 1/r"), "log(1/r)", &xs, &ys, SLOPE_BOUND, true, 4)?);
        for (r, w) in &rows {
            rep.rows.push(vec![deg as f64, *r, *w]);
        }
        tops.push((backend.casimir_for_degree(deg).ln(), rows.iter().map(|x| x.1).fold(0.0, f64::max).ln()));
        sups.push(sup);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = tops.into_iter().unzip();
    rep.fits.push(Fit::new("max over shells vs cutoff", "log(Lambda)", &xs, &ys, SLOPE_BOUND, true, 4)?);
    if regime == "<0" {
        let last = *sups.last().unwrap();
        let drift = sups.iter().map(|s| (s - last).abs() / last).fold(0.0, f64::max);
        rep.check("sup |kernel| drift across cutoffs", drift, DRIFT_BOUND, drift <= DRIFT_BOUND);
    }
    Ok(rep.finish())
}

/// Haar volume of the ball of radius `r` about the identity of SU(2), by
/// Gauss-Legendre quadrature of the density `(2/π) sin²ψ` of `ψ = dist/2`.
pub fn su2_ball_volume(r: f64) -> f64 {
    let top = (r / 2.0).clamp(0.0, std::f64::consts::PI);
    if top == 0.0 {
        return 0.0;
    }
    let gl = GaussLegendre::new(32).expect("32 Gauss-Legendre nodes");
    gl.integrate(0.0, top, |p| 2.0 / std::f64::consts::PI * p.sin().powi(2))
}

/// For each `t` and trial constant `C`: the max over sampled `x` of
/// `p_t(x)·V(√t)·e^{|x|²/(Ct)}` on SU(2). Points where `|x|²/t > 40` are skipped,
/// as `p_t` there is below the truncation error. The fitted `C` is the smallest
/// trial constant whose maxima stay within a factor 10 of the on-diagonal values.
pub fn heat_kernel_report(t_grid: &[f64], c_grid: &[f64]) -> Result<DecayReport> {
    let b = Backend::su2();
    let mut rep = DecayReport::new("heat-kernel gaussian bound on su2", &["t", "C", "max_weighted", "diagonal"]);
    let rows: Vec<Result<Vec<Vec<f64>>>> = t_grid
        .par_iter()
        .map(|&t| {
            // e^{−tλ} d³ < 1e-16 well inside this cutoff
            let mut j = 2u32;
            while (-t * b.casimir_for_degree(j as usize)).exp() * ((j + 1) as f64).powi(3) > 1e-16 {
                j += 2;
            }
            let p = heat_kernel::<f64>(b, t, b.casimir_for_degree(j as usize))?;
            let vol = su2_ball_volume(t.sqrt());
            let diag = p.evaluate(&b.identity()).re * vol;
            let rmax = (40.0 * t).sqrt().min(2.0 * std::f64::consts::PI - 1e-3);
            let samples: Vec<(f64, f64)> = (0..=120)
                .map(|i| {
                    let r = rmax * i as f64 / 120.0;
                    (r, p.evaluate(&b.exp_chart(&[r, 0.0, 0.0])).re)
                })
                .collect();
            Ok(c_grid
                .iter()
                .map(|&c| {
                    let mx = samples.iter().map(|&(r, v)| v * vol * (r * r / (c * t)).exp()).fold(0.0, f64::max);
                    vec![t, c, mx, diag]
                })
                .collect())
        })
        .collect();
    for r in rows {
        rep.rows.extend(r?);
    }
    let fitted = c_grid.iter().copied().find(|&c| rep.rows.iter().filter(|r| r[1] == c).all(|r| r[2] <= 10.0 * r[3]));
    match fitted {
        Some(c) => {
            rep.notes.push(format!("fitted C = {c}"));
            let worst = rep.rows.iter().filter(|r| r[1] == c).map(|r| r[2]).fold(0.0, f64::max);
            rep.check("max weighted heat kernel at fitted C", worst, f64::INFINITY, worst.is_finite());
        }
        None => rep.check("fitted C within the trial grid", f64::NAN, f64::NAN, false),
    }
    Ok(rep.finish())
}

/// `‖(I+L)^γ h‖_{L²}`.
fn bessel_norm(h: &BandlimitedFunction<f64>, gamma: f64) -> f64 {
    h.coeffs
        .entries
        .iter()
        .map(|(pi, m)| pi.dim as f64 * (1.0 + pi.casimir).powf(2.0 * gamma) * m.norm_squared())
        .sum::<f64>()
        .sqrt()
}

fn random_eigenfunction<R: Rng + ?Sized>(pi: &IrrepId, rng: &mut R) -> BandlimitedFunction<f64> {
    let mut f = SpectralField::empty(Backend::su2(), pi.casimir);
    let m = CMat::from_fn(pi.dim, pi.dim, |_, _| cplx(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    f.entries.insert(pi.clone(), m);
    BandlimitedFunction::new(f)
}

/// Twice-spins `|j₁−j₂|, |j₁−j₂|+2, …, j₁+j₂` of the components of `π_{j₁}⊗π_{j₂}`.
pub fn product_support(j1: u32, j2: u32) -> Vec<u32> {
    (j1.abs_diff(j2)..=j1 + j2).step_by(2).collect()
}

/// `(I+L)^γ h` flattened, weighted so that its Euclidean norm is `‖(I+L)^γ h‖`.
fn bessel_vector(h: &BandlimitedFunction<f64>, gamma: f64) -> DVector<C<f64>> {
    let mut out = vec![];
    for (pi, m) in &h.coeffs.entries {
        let w = (pi.dim as f64).sqrt() * (1.0 + pi.casimir).powf(gamma);
        out.extend(m.iter().map(|z| z * w));
    }
    DVector::from_vec(out)
}

/// The function with coefficient `F = v/√d` on `π` (so `‖f‖ = |v|`).
fn eigenfunction_from(pi: &IrrepId, v: &DVector<C<f64>>) -> BandlimitedFunction<f64> {
    let mut f = SpectralField::empty(Backend::su2(), pi.casimir);
    let s = (pi.dim as f64).sqrt().recip();
    f.entries.insert(pi.clone(), CMat::from_iterator(pi.dim, pi.dim, v.iter().map(|z| z * s)));
    BandlimitedFunction::new(f)
}

/// `max_{‖f‖=1} ‖(I+L)^γ(fg)‖` over `f ∈ H_π` and its maximiser, from the SVD
/// of the linear map `f ↦ (I+L)^γ(fg)`.
fn best_partner(pi: &IrrepId, g: &BandlimitedFunction<f64>, gamma: f64) -> (f64, BandlimitedFunction<f64>) {
    let n = pi.dim * pi.dim;
    let cols: Vec<DVector<C<f64>>> = (0..n)
        .map(|k| {
            let e = DVector::from_fn(n, |i, _| if i == k { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) });
            bessel_vector(&multiply(&eigenfunction_from(pi, &e), g), gamma)
        })
        .collect();
    let a = CMat::from_columns(&cols);
    let svd = a.svd(false, true);
    let (i, &top) = svd.singular_values.iter().enumerate().fold((0, &0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let v = svd.v_t.expect("requested").row(i).adjoint();
    (top, eigenfunction_from(pi, &v))
}

const ALTERNATIONS: usize = 3;

/// Ratios `‖(I+L)^γ(fg)‖/((1+|μ−λ|)^{γ+s/2}‖f‖‖g‖)` for `f ∈ H_λ`, `g ∈ H_μ` on
/// SU(2) (`λ`, `μ` given by twice-spins), from `2·trials` random starts. Each start
/// is also refined by alternately maximising over `f` with `g` fixed and over `g`
/// with `f` fixed (both are top singular values of linear maps).
/// Passes iff the max refined ratio over all starts is within 10% of the max over
/// the first `trials`, and the spectral support of every random product is exactly
/// [`product_support`].
pub fn bilinear_check<R: Rng + ?Sized>(j1: u32, j2: u32, gamma: f64, s: f64, trials: usize, rng: &mut R) -> Result<DecayReport> {
    if 2.0 * gamma + s > 1e-12 || s <= 1.5 {
        return Err(Error::InvalidParameters(format!("need 2γ+s ≤ 0 and s > 3/2, got γ={gamma}, s={s}")));
    }
    let b = Backend::su2();
    let (p1, p2) = (b.irrep(&Label::Spin(j1))?, b.irrep(&Label::Spin(j2))?);
    let (lam, mu) = (p1.casimir, p2.casimir);
    if lam == mu {
        return Err(Error::InvalidParameters(format!("need λ ≠ μ, both are {lam}")));
    }
    let mut rep = DecayReport::new(&format!("bilinear j1={j1} j2={j2}"), &["trial", "ratio", "refined"]);
    let denom_w = (1.0 + (mu - lam).abs()).powf(gamma + s / 2.0);
    let expected = product_support(j1, j2);
    let mut support_ok = true;
    let mut ratios = vec![];
    for trial in 0..2 * trials {
        let f = random_eigenfunction(&p1, rng);
        let g = random_eigenfunction(&p2, rng);
        let h = multiply(&f, &g);
        let scale = h.coeffs.entries.values().map(|m| m.norm()).fold(0.0, f64::max);
        let support: Vec<u32> = h
            .coeffs
            .entries
            .iter()
            .filter(|(_, m)| m.norm() > 1e-12 * scale)
            .map(|(pi, _)| match pi.label {
                Label::Spin(j) => j,
                _ => u32::MAX,
            })
            .collect();
        let mut sorted = support.clone();
        sorted.sort_unstable();
        support_ok &= sorted == expected;
        let ratio = bessel_norm(&h, gamma) / (denom_w * bessel_norm(&f, 0.0) * bessel_norm(&g, 0.0));
        let mut g = g.scale(cplx(1.0 / bessel_norm(&g, 0.0), 0.0));
        let mut refined = 0.0f64;
        for _ in 0..ALTERNATIONS {
            let (_, f) = best_partner(&p1, &g, gamma);
            let (top, g_new) = best_partner(&p2, &f, gamma);
            g = g_new;
            refined = refined.max(top / denom_w);
        }
        rep.rows.push(vec![trial as f64, ratio, refined]);
        ratios.push(refined.max(ratio));
    }
    let m1 = ratios[..trials].iter().copied().fold(0.0, f64::max);
    let m2 = ratios.iter().copied().fold(0.0, f64::max);
    let drift = (m2 - m1) / m1;
    rep.thresholds.push(("drift".into(), 0.1));
    rep.check("max ratio finite", m2, f64::INFINITY, m2.is_finite());
    rep.check("max ratio drift when doubling trials", drift, 0.1, drift <= 0.1);
    rep.check("spectral support matches CG", if support_ok { 0.0 } else { 1.0 }, 0.0, support_ok);
    rep.notes.push(format!("max ratio over {trials} trials {m1:.6}, over {} trials {m2:.6}", 2 * trials));
    Ok(rep.finish())
}

#[cfg(test)]
mod tests;

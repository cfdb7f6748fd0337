//! Taylor expansions in the functions of a difference family.
//!
//! With `u_k = q_k(y⁻¹)` as coordinates near `e`, every smooth `f` satisfies
//! `f(xy) = Σ_α u^α D_α f(x) + O(|y|^{N+1})`, where `D_α` is the left-invariant
//! operator with symbol `P_α(π)`, the `u^α` coefficient of `π(exp(v(u)·X))`.
//! The `P_α` are obtained exactly by power-series reversion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fourier::BandlimitedFunction;
use crate::groups::{Backend, CompactGroup, GroupPoint, IrrepId};
use crate::scalar::{cre, eye, re, zeros, CMat, Real, C};

use super::family::DifferenceFamily;
use super::SymbolField;

/// Truncated power series in `nvars` commuting variables with `dim×dim` matrix coefficients.
#[derive(Clone, Debug)]
pub struct Series<T: Real> {
    pub nvars: usize,
    pub order: usize,
    pub dim: usize,
    pub terms: BTreeMap<Vec<u8>, CMat<T>>,
}

impl<T: Real> Series<T> {
    pub fn zero(nvars: usize, order: usize, dim: usize) -> Self {
        Self { nvars, order, dim, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: usize, m: CMat<T>) -> Self {
        let mut s = Self::zero(nvars, order, m.nrows());
        s.terms.insert(vec![0; nvars], m);
        s
    }

    /// `Σ_j v_j M_j`.
    pub fn linear(order: usize, ms: &[CMat<T>]) -> Self {
        let n = ms.len();
        let mut s = Self::zero(n, order, ms[0].nrows());
        if order == 0 {
            return s;
        }
        for (j, m) in ms.iter().enumerate() {
            let mut e = vec![0u8; n];
            e[j] = 1;
            s.terms.insert(e, m.clone());
        }
        s
    }

    pub fn coefficient(&self, e: &[u8]) -> CMat<T> {
        self.terms.get(e).cloned().unwrap_or_else(|| zeros(self.dim, self.dim))
    }

    fn accumulate(&mut self, e: Vec<u8>, m: CMat<T>) {
        if e.iter().map(|&x| x as usize).sum::<usize>() > self.order {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => *x += m,
            None => {
                self.terms.insert(e, m);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (e, m) in &o.terms {
            s.accumulate(e.clone(), m.clone());
        }
        s
    }

    pub fn scale(&self, c: C<T>) -> Self {
        let mut s = self.clone();
        for m in s.terms.values_mut() {
            *m *= c;
        }
        s
    }

    /// Product; a `1×1` factor acts as a scalar.
    pub fn mul(&self, o: &Self) -> Self {
        let dim = self.dim.max(o.dim);
        let mut s = Self::zero(self.nvars, self.order.min(o.order), dim);
        for (e1, a) in &self.terms {
            for (e2, b) in &o.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let m = if self.dim == 1 {
                    b * a[(0, 0)]
                } else if o.dim == 1 {
                    a * b[(0, 0)]
                } else {
                    a * b
                };
                s.accumulate(e, m);
            }
        }
        s
    }

    /// `exp(S)` for a series without constant term.
    pub fn exp(&self) -> Self {
        let mut out = Self::constant(self.nvars, self.order, eye(self.dim));
        let mut power = out.clone();
        for k in 1..=self.order {
            power = power.mul(self).scale(cre(1.0 / k as f64));
            out = out.add(&power);
        }
        out
    }

    /// Substitute `v_j ↦ subs[j]` (scalar series in new variables).
    pub fn compose(&self, subs: &[Series<T>]) -> Self {
        let nv = subs[0].nvars;
        let order = subs[0].order;
        let mut powers: Vec<Vec<Series<T>>> = Vec::new();
        for s in subs {
            let mut p = vec![Series::constant(nv, order, eye(1))];
            for k in 1..=self.order {
                let next = p[k - 1].mul(s);
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = Self::zero(nv, order, self.dim);
        for (e, m) in &self.terms {
            let mut mono = Series::constant(nv, order, eye(1));
            for (j, &k) in e.iter().enumerate() {
                mono = mono.mul(&powers[j][k as usize]);
            }
            for (e2, c) in &mono.terms {
                out.accumulate(e2.clone(), m * c[(0, 0)]);
            }
        }
        out
    }
}

/// All multi-indices of length `n` with `|α| ≤ max`, graded then lexicographic.
pub fn multi_indices(n: usize, max: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for total in 0..=max {
        let mut cur = vec![0u8; n];
        fill(&mut out, &mut cur, 0, total);
    }
    out
}

fn fill(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, pos: usize, left: usize) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u8;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k as u8;
        fill(out, cur, pos + 1, left - k);
    }
}

/// Exact Taylor data of a family up to total order `order`.
#[derive(Clone, Debug)]
pub struct TaylorData<T: Real> {
    pub backend: Backend,
    pub order: usize,
    /// Indices into the family of the `n` functions used as coordinates.
    pub indices: Vec<usize>,
    pub functions: Vec<BandlimitedFunction<T>>,
    /// `X_j q_k(·⁻¹)(e)`; its inverse gives the adapted basis.
    pub jacobian: CMat<T>,
    /// `v_j` as series in `u`.
    pub v_of_u: Vec<Series<T>>,
}

impl<T: Real> TaylorData<T> {
    pub fn new(family: &DifferenceFamily<T>, order: usize) -> Result<Self> {
        let b = family.backend;
        let n = b.metadata().dimension;
        let indices = family.adapted_indices()?;
        let functions: Vec<BandlimitedFunction<T>> = indices.iter().map(|&k| family.functions[k].clone()).collect();
        let ord = order.max(1);
        // u_k(v) = q_k(exp(−v·X))
        let mut exps: BTreeMap<IrrepId, Series<T>> = BTreeMap::new();
        let mut u: Vec<Series<T>> = Vec::new();
        for q in &functions {
            let mut s = Series::zero(n, ord, 1);
            for (rho, m) in &q.coeffs.entries {
                let e = exps.entry(rho.clone()).or_insert_with(|| minus_exp_series(b, rho, ord));
                for (ex, c) in &e.terms {
                    let v = (c * m).trace() * cre::<T>(rho.dim as f64);
                    s.accumulate(ex.clone(), CMat::from_element(1, 1, v));
                }
            }
            u.push(s);
        }
        let jacobian = CMat::from_fn(n, n, |k, j| {
            let mut e = vec![0u8; n];
            e[j] = 1;
            u[k].coefficient(&e)[(0, 0)]
        });
        let inv = jacobian
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NotAdapted("singular Jacobian at the identity".into()))?;
        // higher-order part H_k = u_k − (A v)_k
        let higher: Vec<Series<T>> = u
            .iter()
            .map(|s| {
                let mut h = s.clone();
                h.terms.retain(|e, _| e.iter().map(|&x| x as usize).sum::<usize>() >= 2);
                h
            })
            .collect();
        let ident: Vec<Series<T>> = (0..n)
            .map(|k| {
                let mut e = vec![0u8; n];
                e[k] = 1;
                let mut s = Series::zero(n, ord, 1);
                s.terms.insert(e, CMat::from_element(1, 1, cre(1.0)));
                s
            })
            .collect();
        let apply_inv = |w: &[Series<T>]| -> Vec<Series<T>> {
            (0..n)
                .map(|j| {
                    let mut s = Series::zero(n, ord, 1);
                    for (k, wk) in w.iter().enumerate() {
                        s = s.add(&wk.scale(inv[(j, k)]));
                    }
                    s
                })
                .collect()
        };
        let mut v = apply_inv(&ident);
        for _ in 0..ord {
            let w: Vec<Series<T>> = (0..n).map(|k| ident[k].add(&higher[k].compose(&v).scale(cre(-1.0)))).collect();
            v = apply_inv(&w);
        }
        Ok(Self { backend: b, order, indices, functions, jacobian, v_of_u: v })
    }

    pub fn dimension(&self) -> usize {
        self.functions.len()
    }

    /// Multi-indices with `|α| ≤ max`.
    pub fn multi_indices(&self, max: usize) -> Vec<Vec<u8>> {
        multi_indices(self.dimension(), max)
    }

    /// `P_α(τ)` for `|α| ≤ order`.
    pub fn symbols_at(&self, tau: &IrrepId) -> BTreeMap<Vec<u8>, CMat<T>> {
        let n = self.dimension();
        let gens: Vec<CMat<T>> = (0..n).map(|j| self.backend.infinitesimal::<T>(tau, j).expect("generator")).collect();
        let e = Series::linear(self.order, &gens).exp();
        let mut v = self.v_of_u.clone();
        for s in &mut v {
            s.order = self.order;
            s.terms.retain(|ex, _| ex.iter().map(|&x| x as usize).sum::<usize>() <= self.order);
        }
        let p = e.compose(&v);
        self.multi_indices(self.order).into_iter().map(|a| (a.clone(), p.coefficient(&a))).collect()
    }

    /// `q^α` as a band-limited function.
    pub fn q_power(&self, alpha: &[u8]) -> BandlimitedFunction<T> {
        let mut out = BandlimitedFunction::constant(self.backend, cre(1.0));
        for (k, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.multiply(&self.functions[k]).trimmed(re(1e-15));
            }
        }
        out
    }

    /// `q^α(y)` pointwise.
    pub fn q_power_at(&self, alpha: &[u8], y: &GroupPoint<T>) -> C<T> {
        let mut out = cre::<T>(1.0);
        for (k, &a) in alpha.iter().enumerate() {
            if a > 0 {
                let v = self.functions[k].evaluate(y);
                for _ in 0..a {
                    out *= v;
                }
            }
        }
        out
    }

    /// `D_α f` for a band-limited `f`.
    pub fn apply_to_function(&self, f: &BandlimitedFunction<T>, alpha: &[u8]) -> BandlimitedFunction<T> {
        BandlimitedFunction::new(f.coeffs.map(|pi, m| &self.symbols_at(pi)[alpha] * m))
    }

    /// `D_α` applied in `x` to a symbol.
    pub fn apply_to_symbol(&self, sigma: &SymbolField<T>, alpha: &[u8]) -> Result<SymbolField<T>> {
        sigma.apply_mode_matrices(|tau| Ok(self.symbols_at(tau)[alpha].clone()), false)
    }
}

fn minus_exp_series<T: Real>(b: Backend, rho: &IrrepId, order: usize) -> Series<T> {
    let n = b.metadata().dimension;
    let gens: Vec<CMat<T>> = (0..n).map(|j| -b.infinitesimal::<T>(rho, j).expect("generator")).collect();
    Series::linear(order, &gens).exp()
}

/// `y ↦ f(xy) − Σ_{|α|<N} q^α(y⁻¹) D_α f(x)`.
pub fn taylor_remainder<T: Real>(
    f: &BandlimitedFunction<T>,
    x: &GroupPoint<T>,
    n: usize,
    family: &DifferenceFamily<T>,
) -> Result<impl Fn(&GroupPoint<T>) -> C<T>> {
    let b = f.backend();
    let data = if n == 0 { None } else { Some(TaylorData::new(family, n - 1)?) };
    let mut terms: Vec<(Vec<u8>, C<T>)> = Vec::new();
    if let Some(d) = &data {
        for alpha in d.multi_indices(n - 1) {
            terms.push((alpha.clone(), d.apply_to_function(f, &alpha).evaluate(x)));
        }
    }
    let f = f.clone();
    let x = x.clone();
    Ok(move |y: &GroupPoint<T>| {
        let mut r = f.evaluate(&b.mul(&x, y));
        if let Some(d) = &data {
            let yinv = b.inv(y);
            for (alpha, c) in &terms {
                r -= d.q_power_at(alpha, &yinv) * *c;
            }
        }
        r
    })
}

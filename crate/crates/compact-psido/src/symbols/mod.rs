//! Full symbols `σ(x, π)` stored through their x-modes, difference operators,
//! strongly admissible families, seminorms and Taylor expansions.

mod delta;
mod family;
mod seminorm;
mod taylor;

use std::collections::BTreeMap;

use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CoefficientTable, SpectralField};
use crate::fourier::BandlimitedFunction;
use crate::groups::{Backend, CompactGroup, GroupPoint, IrrepId, Label, TensorDecomposition};
use crate::scalar::{cplx, re, zeros, CMat, Real, C};

pub use delta::{delta_q, delta_q_symbol, delta_tau, delta_word, delta_word_at, extend_word, DeltaField};
pub use family::{chart_coordinates, complex_rank, derivative_at_identity, smooth_step, DifferenceFamily, FamilyVariant, LeibnizTerm};
pub use seminorm::{fund_words, seminorm, words, SeminormReport, SeminormRow};
pub use taylor::{multi_indices, taylor_remainder, Series, TaylorData};

/// `(τ, i, j)`: the x-mode `τ_ij(x)`.
pub type ModeKey = (IrrepId, usize, usize);

/// `σ(x, π) = Σ τ_ij(x) σ^{τ,ij}(π)` with modes up to `x_cutoff` and fibres up to `cutoff`.
#[derive(Clone, Debug)]
pub struct SymbolField<T: Real> {
    pub backend: Backend,
    pub x_cutoff: f64,
    pub cutoff: f64,
    pub modes: BTreeMap<ModeKey, SpectralField<T>>,
}

impl<T: Real> SymbolField<T> {
    pub fn zero(backend: Backend, x_cutoff: f64, cutoff: f64) -> Self {
        Self { backend, x_cutoff, cutoff, modes: BTreeMap::new() }
    }

    /// A symbol not depending on `x`.
    pub fn invariant(sigma: SpectralField<T>) -> Self {
        let b = sigma.backend;
        let mut modes = BTreeMap::new();
        let cutoff = sigma.cutoff;
        modes.insert((b.trivial(), 0, 0), sigma);
        Self { backend: b, x_cutoff: 0.0, cutoff, modes }
    }

    /// `σ(x, π) = a(x)·I`.
    pub fn multiplication(a: &BandlimitedFunction<T>, cutoff: f64) -> Self {
        let b = a.backend();
        let id = SpectralField::identity(b, cutoff);
        let mut out = Self::zero(b, a.cutoff(), cutoff);
        for (tau, m) in &a.coeffs.entries {
            let d = re::<T>(tau.dim as f64);
            for i in 0..tau.dim {
                for j in 0..tau.dim {
                    let c = m[(j, i)] * cplx(d, T::zero());
                    if c.norm_sqr() > T::zero() {
                        out.modes.insert((tau.clone(), i, j), id.scale(c));
                    }
                }
            }
        }
        out
    }

    /// `σ(x, π) = τ_ij(x)·s(π)`.
    pub fn single_mode(tau: IrrepId, i: usize, j: usize, s: SpectralField<T>) -> Self {
        let b = s.backend;
        let mut out = Self::zero(b, tau.casimir, s.cutoff);
        out.modes.insert((tau, i, j), s);
        out
    }

    /// `Σ a_k(x) s_k(π)`.
    pub fn from_terms(terms: &[(BandlimitedFunction<T>, SpectralField<T>)]) -> Self {
        let mut it = terms.iter();
        let (a, s) = it.next().expect("at least one term");
        let mut out = Self::multiplication(a, s.cutoff).times_invariant(s);
        for (a, s) in it {
            out = out.add(&Self::multiplication(a, s.cutoff).times_invariant(s));
        }
        out
    }

    pub fn is_invariant(&self) -> bool {
        self.modes.keys().all(|(t, _, _)| *t == self.backend.trivial())
    }

    /// Distinct x-irreps carrying at least one mode.
    pub fn x_irreps(&self) -> Vec<IrrepId> {
        let mut v: Vec<IrrepId> = self.modes.keys().map(|(t, _, _)| t.clone()).collect();
        v.dedup();
        v
    }

    /// Fibre irreps (those of the first mode; all modes share them).
    pub fn irreps(&self) -> Vec<IrrepId> {
        match self.modes.values().next() {
            Some(f) => f.irreps().cloned().collect(),
            None => self.backend.enumerate_dual(self.cutoff),
        }
    }

    pub fn map_fields<F: FnMut(&SpectralField<T>) -> SpectralField<T>>(&self, mut f: F) -> Self {
        let modes: BTreeMap<_, _> = self.modes.iter().map(|(k, v)| (k.clone(), f(v))).collect();
        let cutoff = modes.values().next().map(|f: &SpectralField<T>| f.cutoff).unwrap_or(self.cutoff);
        Self { backend: self.backend, x_cutoff: self.x_cutoff, cutoff, modes }
    }

    pub fn restrict(&self, cutoff: f64) -> Self {
        let mut out = self.map_fields(|f| f.restrict(cutoff));
        out.cutoff = cutoff.min(self.cutoff);
        out
    }

    /// Fibrewise `σ(x,π)·s(π)`.
    pub fn times_invariant(&self, s: &SpectralField<T>) -> Self {
        self.map_fields(|f| f.matmul(s))
    }

    /// Fibrewise `s(π)·σ(x,π)`.
    pub fn invariant_times(&self, s: &SpectralField<T>) -> Self {
        self.map_fields(|f| s.matmul(f))
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        assert_eq!(self.backend, other.backend, "backend mismatch");
        let cutoff = self.cutoff.min(other.cutoff);
        let mut modes: BTreeMap<ModeKey, SpectralField<T>> =
            self.modes.iter().map(|(k, v)| (k.clone(), v.restrict(cutoff))).collect();
        for (k, v) in &other.modes {
            let v = v.restrict(cutoff).scale(cplx(sign, T::zero()));
            match modes.get_mut(k) {
                Some(m) => *m = m.add(&v),
                None => {
                    modes.insert(k.clone(), v);
                }
            }
        }
        Self { backend: self.backend, x_cutoff: self.x_cutoff.max(other.x_cutoff), cutoff, modes }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -T::one())
    }

    pub fn scale(&self, c: C<T>) -> Self {
        self.map_fields(|f| f.scale(c))
    }

    /// `σ(x, π)` at one fibre.
    pub fn evaluate_at(&self, x: &GroupPoint<T>, pi: &IrrepId) -> Option<CMat<T>> {
        let mut acc = zeros::<T>(pi.dim, pi.dim);
        let mut cache: BTreeMap<IrrepId, CMat<T>> = BTreeMap::new();
        for ((tau, i, j), f) in &self.modes {
            let t = cache
                .entry(tau.clone())
                .or_insert_with(|| self.backend.matrix_coeff(tau, x).expect("valid irrep"));
            acc += f.get(pi)? * t[(*i, *j)];
        }
        Some(acc)
    }

    /// `σ(x, ·)`.
    pub fn evaluate(&self, x: &GroupPoint<T>) -> SpectralField<T> {
        let mut out = SpectralField::zeros(self.backend, self.cutoff);
        out.entries.retain(|pi, _| self.modes.values().all(|f| f.get(pi).is_some()));
        let mut cache: BTreeMap<IrrepId, CMat<T>> = BTreeMap::new();
        for ((tau, i, j), f) in &self.modes {
            let t = cache
                .entry(tau.clone())
                .or_insert_with(|| self.backend.matrix_coeff(tau, x).expect("valid irrep"));
            let c = t[(*i, *j)];
            for (pi, m) in out.entries.iter_mut() {
                *m += f.get(pi).expect("checked above") * c;
            }
        }
        out
    }

    /// Largest `|entry|` of `σ − other` over fibres up to `cutoff`, absent modes read as zero.
    pub fn max_abs_diff(&self, other: &Self, cutoff: f64) -> T {
        let mut worst = T::zero();
        let zero = SpectralField::<T>::empty(self.backend, cutoff);
        let keys: std::collections::BTreeSet<&ModeKey> = self.modes.keys().chain(other.modes.keys()).collect();
        for k in keys {
            let a = self.modes.get(k).unwrap_or(&zero).restrict(cutoff);
            let b = other.modes.get(k).unwrap_or(&zero).restrict(cutoff);
            for pi in self.backend.enumerate_dual(cutoff) {
                let za = zeros::<T>(pi.dim, pi.dim);
                let d = a.get(&pi).unwrap_or(&za) - b.get(&pi).unwrap_or(&za);
                for z in d.iter() {
                    worst = worst.max(z.modulus());
                }
            }
        }
        worst
    }

    /// Largest `|entry|` over all modes and fibres up to `cutoff`.
    pub fn max_abs(&self, cutoff: f64) -> T {
        self.max_abs_diff(&Self::zero(self.backend, 0.0, cutoff), cutoff)
    }

    /// Drop modes whose coefficients are all below `tol` in modulus.
    pub fn trimmed(&self, tol: T) -> Self {
        let mut out = self.clone();
        out.modes.retain(|_, f| f.entries.values().any(|m| m.iter().any(|z| z.modulus() > tol)));
        out
    }

    /// Left-invariant derivative `X_j` in `x`: `X τ(x) = τ(x)τ(X)`.
    pub fn x_derivative(&self, j: usize) -> Result<Self> {
        self.apply_mode_matrices(|tau| self.backend.infinitesimal::<T>(tau, j), false)
    }

    /// Right-invariant derivative `X̃_j` in `x`: `X̃ τ(x) = τ(X)τ(x)`.
    pub fn right_x_derivative(&self, j: usize) -> Result<Self> {
        self.apply_mode_matrices(|tau| self.backend.infinitesimal::<T>(tau, j), true)
    }

    /// `X^β = X_{β_1}⋯X_{β_k}` applied in `x`.
    pub fn x_derivative_word(&self, beta: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        for &j in beta.iter().rev() {
            out = out.x_derivative(j)?;
        }
        Ok(out)
    }

    /// Replace every mode matrix `τ(x)` by `τ(x)P(τ)` (or `P(τ)τ(x)` when `left`).
    pub(crate) fn apply_mode_matrices<F: FnMut(&IrrepId) -> Result<CMat<T>>>(&self, mut p: F, left: bool) -> Result<Self> {
        let mut out = Self::zero(self.backend, self.x_cutoff, self.cutoff);
        let mut cache: BTreeMap<IrrepId, CMat<T>> = BTreeMap::new();
        for ((tau, i, k), f) in &self.modes {
            if !cache.contains_key(tau) {
                cache.insert(tau.clone(), p(tau)?);
            }
            let m = &cache[tau];
            for r in 0..tau.dim {
                // right action: τ_ik ↦ Σ_r τ_ir P_rk; left: τ_ik ↦ Σ_r P_ir τ_rk
                let (key, c) = if left { ((tau.clone(), r, *k), m[(*i, r)]) } else { ((tau.clone(), *i, r), m[(r, *k)]) };
                if c.norm_sqr() == T::zero() {
                    continue;
                }
                let term = f.scale(c);
                match out.modes.get_mut(&key) {
                    Some(e) => *e = e.add(&term),
                    None => {
                        out.modes.insert(key, term);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pointwise `σ(x,π)*`.
    pub fn pointwise_adjoint(&self) -> Result<Self> {
        let mut out = Self::zero(self.backend, self.x_cutoff, self.cutoff);
        for ((tau, i, j), f) in &self.modes {
            let (bar, cc) = self.backend.conjugate::<T>(tau)?;
            let fa = f.adjoint();
            // conj τ_ij = Σ_ef C_ie τ̄_ef conj(C_jf)
            for e in 0..tau.dim {
                for g in 0..tau.dim {
                    let c = cc[(*i, e)] * cc[(*j, g)].conj();
                    if c.norm_sqr() == T::zero() {
                        continue;
                    }
                    out.add_mode((bar.clone(), e, g), fa.scale(c));
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn add_mode(&mut self, key: ModeKey, f: SpectralField<T>) {
        match self.modes.get_mut(&key) {
            Some(e) => *e = e.add(&f),
            None => {
                self.modes.insert(key, f);
            }
        }
    }

    /// Pointwise product `σ(x,π)·ς(x,π)`, expanding products of x-modes exactly.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        let b = self.backend;
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = Self::zero(b, b.product_cutoff(self.x_cutoff, other.x_cutoff), cutoff);
        let mut products: BTreeMap<(IrrepId, IrrepId), ModeProduct<T>> = BTreeMap::new();
        for ((nu, a, bb), f) in &self.modes {
            for ((tau, c, d), g) in &other.modes {
                let mp = match products.get(&(nu.clone(), tau.clone())) {
                    Some(m) => m,
                    None => {
                        let m = ModeProduct::new(b, nu, tau)?;
                        products.entry((nu.clone(), tau.clone())).or_insert(m)
                    }
                };
                let fg = f.restrict(cutoff).matmul(&g.restrict(cutoff));
                for (rho, e, h, coef) in mp.terms(*a, *bb, *c, *d) {
                    out.add_mode((rho, e, h), fg.scale(coef));
                }
            }
        }
        Ok(out)
    }

    /// Grid of x-nodes used for suprema in `x`: a quadrature grid resolving the
    /// product of two x-modes, or the identity alone for invariant symbols.
    pub fn x_grid(&self) -> Vec<GroupPoint<T>> {
        if self.is_invariant() {
            return vec![self.backend.identity()];
        }
        let lam = self.backend.product_cutoff(self.x_cutoff, self.x_cutoff).max(1.0);
        self.backend.quadrature::<T>(lam).nodes
    }

    /// `max_x ‖σ(x,π)‖_op` on [`SymbolField::x_grid`], per fibre.
    pub fn sup_x_op_norm(&self) -> BTreeMap<IrrepId, T> {
        let mut out: BTreeMap<IrrepId, T> = BTreeMap::new();
        for x in self.x_grid() {
            for (pi, m) in self.evaluate(&x).entries {
                let v = crate::scalar::op_norm(&m);
                let e = out.entry(pi).or_insert(T::zero());
                *e = e.max(v);
            }
        }
        out
    }

    pub fn cast<U: Real>(&self) -> SymbolField<U> {
        SymbolField {
            backend: self.backend,
            x_cutoff: self.x_cutoff,
            cutoff: self.cutoff,
            modes: self.modes.iter().map(|(k, v)| (k.clone(), v.cast())).collect(),
        }
    }

    pub fn to_json(&self) -> SymbolTable {
        SymbolTable {
            backend: self.backend.id(),
            x_cutoff: self.x_cutoff,
            cutoff: self.cutoff,
            modes: self
                .modes
                .iter()
                .map(|((tau, i, j), f)| SymbolMode { x_label: tau.label.clone(), i: *i, j: *j, field: f.to_json() })
                .collect(),
        }
    }

    pub fn from_json(table: &SymbolTable) -> Result<Self> {
        let backend = Backend::parse(&table.backend)?;
        let mut out = Self::zero(backend, table.x_cutoff, table.cutoff);
        for m in &table.modes {
            let tau = backend.irrep(&m.x_label).map_err(|e| Error::Schema(e.to_string()))?;
            if m.i >= tau.dim || m.j >= tau.dim {
                return Err(Error::Schema(format!("mode ({}, {}, {}) out of range", tau, m.i, m.j)));
            }
            if tau.casimir > table.x_cutoff + 1e-9 {
                return Err(Error::Schema(format!("mode {} above x-cutoff", tau)));
            }
            let f = SpectralField::from_json(&m.field)?;
            if f.backend != backend {
                return Err(Error::Schema("mode backend differs from symbol backend".into()));
            }
            out.modes.insert((tau, m.i, m.j), f);
        }
        Ok(out)
    }
}

/// JSON form of a [`SymbolField`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolTable {
    pub backend: String,
    pub x_cutoff: f64,
    pub cutoff: f64,
    pub modes: Vec<SymbolMode>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolMode {
    pub x_label: Label,
    pub i: usize,
    pub j: usize,
    pub field: CoefficientTable,
}

/// Expansion of `ν_ab(x)·τ_cd(x)` into matrix coefficients of the components of `ν⊗τ`.
pub(crate) struct ModeProduct<T: Real> {
    dec: TensorDecomposition<T>,
    offsets: Vec<usize>,
}

impl<T: Real> ModeProduct<T> {
    pub(crate) fn new(b: Backend, nu: &IrrepId, tau: &IrrepId) -> Result<Self> {
        let dec = b.tensor_decompose::<T>(nu, tau)?;
        let offsets = dec.offsets();
        Ok(Self { dec, offsets })
    }

    /// `ν_ab τ_cd = Σ U_{(ac),(ρe)} conj(U_{(bd),(ρf)}) ρ_ef`.
    pub(crate) fn terms(&self, a: usize, b: usize, c: usize, d: usize) -> Vec<(IrrepId, usize, usize, C<T>)> {
        let dt = self.dec.right.dim;
        let u = &self.dec.intertwiner;
        let (r, s) = (a * dt + c, b * dt + d);
        let tol = re::<T>(1e-15);
        let mut out = Vec::new();
        for (rho, &o) in self.dec.components.iter().zip(&self.offsets) {
            for e in 0..rho.dim {
                let ue = u[(r, o + e)];
                if ue.modulus() <= tol {
                    continue;
                }
                for f in 0..rho.dim {
                    let c = ue * u[(s, o + f)].conj();
                    if c.modulus() > tol {
                        out.push((rho.clone(), e, f, c));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;

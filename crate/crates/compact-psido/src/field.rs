//! Finite tables `π ↦ d_π×d_π` matrix: invariant symbols and Fourier coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Backend, CompactGroup, IrrepId, Label, TensorDecomposition};
use crate::scalar::{cplx, eye, op_norm, re, to_f64, zeros, CMat, Real, C};

/// A finite map from irreps to complex `d_π×d_π` matrices.
///
/// Irreps outside the table are absent rather than zero; binary operations on
/// tables with different cutoffs work on the smaller one and raise `truncated`.
#[derive(Clone, Debug)]
pub struct SpectralField<T: Real> {
    pub backend: Backend,
    pub cutoff: f64,
    pub entries: BTreeMap<IrrepId, CMat<T>>,
    pub truncated: bool,
}

impl<T: Real> SpectralField<T> {
    pub fn empty(backend: Backend, cutoff: f64) -> Self {
        SpectralField { backend, cutoff, entries: BTreeMap::new(), truncated: false }
    }

    pub fn from_fn<F: FnMut(&IrrepId) -> CMat<T>>(backend: Backend, cutoff: f64, mut f: F) -> Self {
        let entries = backend
            .enumerate_dual(cutoff)
            .into_iter()
            .map(|pi| {
                let m = f(&pi);
                assert_eq!((m.nrows(), m.ncols()), (pi.dim, pi.dim), "matrix size must match {pi}");
                (pi, m)
            })
            .collect();
        SpectralField { backend, cutoff, entries, truncated: false }
    }

    pub fn zeros(backend: Backend, cutoff: f64) -> Self {
        Self::from_fn(backend, cutoff, |pi| zeros(pi.dim, pi.dim))
    }

    /// `σ(π) = I` (the Fourier transform of the Dirac mass at the identity).
    pub fn identity(backend: Backend, cutoff: f64) -> Self {
        Self::from_fn(backend, cutoff, |pi| eye(pi.dim))
    }

    /// `σ(π) = f(λ_π)·I`.
    pub fn scalar_fn<F: Fn(f64) -> T>(backend: Backend, cutoff: f64, f: F) -> Self {
        Self::from_fn(backend, cutoff, |pi| eye::<T>(pi.dim) * cplx(f(pi.casimir), T::zero()))
    }

    /// `σ(π) = π(X_j)`.
    pub fn generator(backend: Backend, cutoff: f64, j: usize) -> Result<Self> {
        let mut out = Self::empty(backend, cutoff);
        for pi in backend.enumerate_dual(cutoff) {
            let m = backend.infinitesimal(&pi, j)?;
            out.entries.insert(pi, m);
        }
        Ok(out)
    }

    pub fn get(&self, pi: &IrrepId) -> Option<&CMat<T>> {
        self.entries.get(pi)
    }

    pub fn get_label(&self, label: &Label) -> Option<&CMat<T>> {
        let pi = self.backend.irrep(label).ok()?;
        self.entries.get(&pi)
    }

    pub fn irreps(&self) -> impl Iterator<Item = &IrrepId> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of scalar coordinates `Σ d_π²`.
    pub fn coordinate_dim(&self) -> usize {
        self.entries.keys().map(|p| p.dim * p.dim).sum()
    }

    pub fn map<F: FnMut(&IrrepId, &CMat<T>) -> CMat<T>>(&self, mut f: F) -> Self {
        SpectralField {
            backend: self.backend,
            cutoff: self.cutoff,
            entries: self.entries.iter().map(|(p, m)| (p.clone(), f(p, m))).collect(),
            truncated: self.truncated,
        }
    }

    /// Keep only irreps with `λ_π ≤ cutoff`.
    pub fn restrict(&self, cutoff: f64) -> Self {
        SpectralField {
            backend: self.backend,
            cutoff: cutoff.min(self.cutoff),
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| p.casimir <= cutoff)
                .map(|(p, m)| (p.clone(), m.clone()))
                .collect(),
            truncated: self.truncated || cutoff < self.cutoff,
        }
    }

    /// Combine entrywise on the common irreps; absent entries on either side are dropped.
    pub fn zip_with<F: FnMut(&CMat<T>, &CMat<T>) -> CMat<T>>(&self, other: &Self, mut f: F) -> Self {
        assert_eq!(self.backend, other.backend, "backend mismatch");
        let cutoff = self.cutoff.min(other.cutoff);
        let entries = self
            .entries
            .iter()
            .filter(|(p, _)| p.casimir <= cutoff)
            .filter_map(|(p, a)| other.entries.get(p).map(|b| (p.clone(), f(a, b))))
            .collect();
        SpectralField {
            backend: self.backend,
            cutoff,
            entries,
            truncated: self.truncated || other.truncated || self.cutoff != other.cutoff,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise matrix product `σ₁(π)σ₂(π)`.
    pub fn matmul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        self.map(|_, m| m * s)
    }

    /// Pointwise adjoint `σ(π)*`.
    pub fn adjoint(&self) -> Self {
        self.map(|_, m| m.adjoint())
    }

    /// Largest `‖σ(π)‖_op`.
    pub fn sup_op_norm(&self) -> T {
        self.entries.values().map(op_norm).fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Largest entrywise difference over the common irreps.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .filter_map(|(p, a)| other.entries.get(p).map(|b| (a - b).norm()))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// `σ(τ⊗π)` realised as `U (⊕ σ(ρ_i)) U*`.
    pub fn extend_to_rep(&self, dec: &TensorDecomposition<T>) -> Result<CMat<T>> {
        let blocks = dec
            .components
            .iter()
            .map(|c| {
                self.entries.get(c).cloned().ok_or_else(|| {
                    Error::CutoffExceeded(format!("component {c} of {}⊗{} above cutoff {}", dec.left, dec.right, self.cutoff))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(assemble_blocks(dec, &blocks))
    }

    pub fn cast<U: Real>(&self) -> SpectralField<U> {
        SpectralField {
            backend: self.backend,
            cutoff: self.cutoff,
            entries: self.entries.iter().map(|(p, m)| (p.clone(), crate::scalar::cast_mat(m))).collect(),
            truncated: self.truncated,
        }
    }

    pub fn to_json(&self) -> CoefficientTable {
        CoefficientTable {
            backend: self.backend.id(),
            cutoff: self.cutoff,
            entries: self
                .entries
                .iter()
                .map(|(p, m)| CoefficientEntry {
                    label: p.label.clone(),
                    re: (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| to_f64(m[(r, c)].re)).collect()).collect(),
                    im: (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| to_f64(m[(r, c)].im)).collect()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(table: &CoefficientTable) -> Result<Self> {
        let backend = Backend::parse(&table.backend)?;
        let mut out = Self::empty(backend, table.cutoff);
        for e in &table.entries {
            let pi = backend.irrep(&e.label).map_err(|err| Error::Schema(err.to_string()))?;
            if pi.casimir > table.cutoff {
                return Err(Error::Schema(format!("{} above cutoff {}", pi, table.cutoff)));
            }
            let ok = e.re.len() == pi.dim
                && e.im.len() == pi.dim
                && e.re.iter().chain(&e.im).all(|row| row.len() == pi.dim);
            if !ok {
                return Err(Error::Schema(format!("matrix for {pi} must be {0}x{0}", pi.dim)));
            }
            let m = CMat::from_fn(pi.dim, pi.dim, |r, c| cplx(re(e.re[r][c]), re(e.im[r][c])));
            out.entries.insert(pi, m);
        }
        Ok(out)
    }
}

/// Nonzero entries of each column of `U`; CG intertwiners are sparse.
fn sparse_columns<T: Real>(u: &CMat<T>) -> Vec<Vec<(usize, C<T>)>> {
    (0..u.ncols())
        .map(|c| u.column(c).iter().enumerate().filter(|(_, z)| z.re != T::zero() || z.im != T::zero()).map(|(r, z)| (r, *z)).collect())
        .collect()
}

/// Blocks of `U* A U` along the decomposition.
pub fn project_blocks<T: Real>(dec: &TensorDecomposition<T>, a: &CMat<T>) -> Vec<CMat<T>> {
    let u = &dec.intertwiner;
    if dec.components.len() == 1 && u.nrows() == 1 {
        return vec![a.clone()];
    }
    let cols = sparse_columns(u);
    let n = a.nrows();
    dec.components
        .iter()
        .zip(dec.offsets())
        .map(|(comp, o)| {
            let d = comp.dim;
            // W = A·U_k, then U_k*·W
            let mut w = zeros::<T>(n, d);
            for c in 0..d {
                let mut wc = w.column_mut(c);
                for &(r, z) in &cols[o + c] {
                    wc.axpy(z, &a.column(r), C::new(T::one(), T::zero()));
                }
            }
            CMat::from_fn(d, d, |i, j| cols[o + i].iter().fold(C::new(T::zero(), T::zero()), |acc, &(r, z)| acc + z.conj() * w[(r, j)]))
        })
        .collect()
}

/// `U (⊕ B_i) U*`.
pub fn assemble_blocks<T: Real>(dec: &TensorDecomposition<T>, blocks: &[CMat<T>]) -> CMat<T> {
    let n = dec.intertwiner.nrows();
    if n == 1 {
        return blocks[0].clone();
    }
    let cols = sparse_columns(&dec.intertwiner);
    let mut out = zeros::<T>(n, n);
    for ((comp, o), b) in dec.components.iter().zip(dec.offsets()).zip(blocks) {
        let d = comp.dim;
        // X = U_k B_k, then out += X U_k*
        let mut x = zeros::<T>(n, d);
        for c in 0..d {
            for j in 0..d {
                let bjc = b[(j, c)];
                for &(r, z) in &cols[o + j] {
                    x[(r, c)] += z * bjc;
                }
            }
        }
        for c in 0..d {
            for &(r2, z) in &cols[o + c] {
                let zc = z.conj();
                let mut oc = out.column_mut(r2);
                oc.axpy(zc, &x.column(c), C::new(T::one(), T::zero()));
            }
        }
    }
    out
}

/// JSON form of a coefficient table: `{backend, cutoff, entries: [{label, re, im}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientTable {
    pub backend: String,
    pub cutoff: f64,
    pub entries: Vec<CoefficientEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub label: Label,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

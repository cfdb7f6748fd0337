//! Dense operators on the Peter–Weyl coordinates of a band.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier::BandlimitedFunction;
use crate::groups::{Backend, CompactGroup, IrrepId, Label};
use crate::scalar::{cplx, re, to_f64, zeros, CMat, Real, C};
use crate::symbols::{ModeKey, SymbolField};

use super::{assemble_symbol, op_apply};

/// An operator on band-limited functions of cutoff `Λ`, written in the orthonormal
/// coordinates `c_{πij} = √d_π f̂(π)_ji` (basis `√d_π π_ij`).
///
/// Index order: [`CompactGroup::enumerate_dual`], then `(i, j)` row-major.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<T: Real> {
    pub backend: Backend,
    pub cutoff: f64,
    pub index: Vec<(IrrepId, usize, usize)>,
    pub matrix: CMat<T>,
    offsets: BTreeMap<IrrepId, usize>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(backend: Backend, cutoff: f64) -> Self {
        let dual = backend.enumerate_dual(cutoff);
        let mut index = Vec::new();
        let mut offsets = BTreeMap::new();
        for pi in dual {
            offsets.insert(pi.clone(), index.len());
            for i in 0..pi.dim {
                for j in 0..pi.dim {
                    index.push((pi.clone(), i, j));
                }
            }
        }
        let n = index.len();
        Self { backend, cutoff, index, matrix: zeros(n, n), offsets }
    }

    pub fn identity(backend: Backend, cutoff: f64) -> Self {
        let mut out = Self::zeros(backend, cutoff);
        out.matrix.fill_with_identity();
        out
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn position(&self, pi: &IrrepId, i: usize, j: usize) -> Option<usize> {
        self.offsets.get(pi).map(|o| o + i * pi.dim + j)
    }

    /// Coordinates of `f`; coefficients above the cutoff are dropped.
    pub fn coords(&self, f: &BandlimitedFunction<T>) -> DVector<C<T>> {
        let mut v = DVector::zeros(self.dim());
        for (pi, m) in &f.coeffs.entries {
            let Some(o) = self.offsets.get(pi) else { continue };
            let s = re::<T>((pi.dim as f64).sqrt());
            for i in 0..pi.dim {
                for j in 0..pi.dim {
                    v[o + i * pi.dim + j] = m[(j, i)] * s;
                }
            }
        }
        v
    }

    /// The band-limited function with coordinates `v`.
    pub fn function(&self, v: &DVector<C<T>>) -> BandlimitedFunction<T> {
        let mut out = SpectralField::zeros(self.backend, self.cutoff);
        for (pi, m) in out.entries.iter_mut() {
            let o = self.offsets[pi];
            let s = re::<T>(1.0 / (pi.dim as f64).sqrt());
            for i in 0..pi.dim {
                for j in 0..pi.dim {
                    m[(j, i)] = v[o + i * pi.dim + j] * s;
                }
            }
        }
        BandlimitedFunction::new(out)
    }

    /// The basis function `√d_π π_ij`.
    pub fn basis_function(&self, k: usize) -> BandlimitedFunction<T> {
        let (pi, i, j) = &self.index[k];
        let mut f = SpectralField::empty(self.backend, pi.casimir);
        let mut m = zeros::<T>(pi.dim, pi.dim);
        m[(*j, *i)] = cplx(re::<T>(1.0 / (pi.dim as f64).sqrt()), T::zero());
        f.entries.insert(pi.clone(), m);
        BandlimitedFunction::new(f)
    }

    /// The matrix of `P_Λ A` restricted to the band, column by column.
    pub fn from_map<F>(backend: Backend, cutoff: f64, map: F) -> Result<Self>
    where
        F: Fn(&BandlimitedFunction<T>) -> Result<BandlimitedFunction<T>> + Sync,
    {
        let mut out = Self::zeros(backend, cutoff);
        let cols = (0..out.dim())
            .into_par_iter()
            .map(|k| map(&out.basis_function(k)).map(|g| out.coords(&g)))
            .collect::<Result<Vec<_>>>()?;
        for (k, c) in cols.into_iter().enumerate() {
            out.matrix.set_column(k, &c);
        }
        Ok(out)
    }

    /// `P_Λ Op(σ) P_Λ`.
    pub fn of_symbol(sigma: &SymbolField<T>, cutoff: f64) -> Result<Self> {
        if cutoff > sigma.cutoff + 1e-9 {
            return Err(Error::CutoffExceeded(format!("matrix cutoff {cutoff} above symbol cutoff {}", sigma.cutoff)));
        }
        Self::from_map(sigma.backend, cutoff, |f| op_apply(sigma, f))
    }

    /// Multiplication by `a`.
    pub fn multiplication(a: &BandlimitedFunction<T>, cutoff: f64) -> Result<Self> {
        Self::from_map(a.backend(), cutoff, |f| Ok(a.multiply(f)))
    }

    /// Left-invariant `X_j`.
    pub fn derivative(backend: Backend, j: usize, cutoff: f64) -> Result<Self> {
        Self::from_map(backend, cutoff, |f| f.derivative(j))
    }

    /// Right-invariant `X̃_j`.
    pub fn right_derivative(backend: Backend, j: usize, cutoff: f64) -> Result<Self> {
        Self::from_map(backend, cutoff, |f| f.right_derivative(j))
    }

    /// The Fourier multiplier `f̂(π) ↦ s(π) f̂(π)`.
    pub fn spectral(s: &SpectralField<T>, cutoff: f64) -> Result<Self> {
        Self::of_symbol(&SymbolField::invariant(s.clone()), cutoff)
    }

    fn with_matrix(&self, matrix: CMat<T>) -> Self {
        Self { backend: self.backend, cutoff: self.cutoff, index: self.index.clone(), matrix, offsets: self.offsets.clone() }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.backend != other.backend {
            return Err(Error::BackendMismatch(self.backend.id(), other.backend.id()));
        }
        if self.dim() != other.dim() {
            return Err(Error::CutoffExceeded(format!("operator cutoffs differ: {} vs {}", self.cutoff, other.cutoff)));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_matrix(&self.matrix * &other.matrix))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_matrix(&self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_matrix(&self.matrix - &other.matrix))
    }

    pub fn scale(&self, c: C<T>) -> Self {
        self.with_matrix(&self.matrix * c)
    }

    /// The Hilbert-space adjoint (the coordinates are orthonormal).
    pub fn adjoint(&self) -> Self {
        self.with_matrix(self.matrix.adjoint())
    }

    pub fn apply(&self, f: &BandlimitedFunction<T>) -> BandlimitedFunction<T> {
        self.function(&(&self.matrix * self.coords(f)))
    }

    /// Zero the columns outside the band `λ_π ≤ cutoff`.
    pub fn project_columns(&self, cutoff: f64) -> Self {
        let mut m = self.matrix.clone();
        for (k, (pi, _, _)) in self.index.iter().enumerate() {
            if pi.casimir > cutoff + 1e-9 {
                m.column_mut(k).fill(C::new(T::zero(), T::zero()));
            }
        }
        self.with_matrix(m)
    }

    /// The square block on the smaller band `λ_π ≤ cutoff`.
    pub fn restrict(&self, cutoff: f64) -> Self {
        let small = Self::zeros(self.backend, cutoff.min(self.cutoff));
        let pos: Vec<usize> = small.index.iter().map(|(p, i, j)| self.position(p, *i, *j).expect("sub-band")).collect();
        let m = CMat::from_fn(pos.len(), pos.len(), |r, c| self.matrix[(pos[r], pos[c])]);
        Self { matrix: m, ..small }
    }

    /// The same operator on a larger band, zero outside the original one.
    pub fn zero_extend(&self, cutoff: f64) -> Self {
        let mut big = Self::zeros(self.backend, cutoff.max(self.cutoff));
        let pos: Vec<usize> = self.index.iter().map(|(p, i, j)| big.position(p, *i, *j).expect("super-band")).collect();
        for (r, &pr) in pos.iter().enumerate() {
            for (c, &pc) in pos.iter().enumerate() {
                big.matrix[(pr, pc)] = self.matrix[(r, c)];
            }
        }
        big
    }

    /// `L_q T = qT − Tq`.
    pub fn commutator_lq(&self, q: &BandlimitedFunction<T>) -> Result<Self> {
        let m = Self::multiplication(q, self.cutoff)?;
        m.matmul(self)?.sub(&self.matmul(&m)?)
    }

    /// `M_{X̃_j} T = X̃_j T − T X̃_j`, with the right-invariant field.
    pub fn commutator_mx(&self, j: usize) -> Result<Self> {
        let x = Self::right_derivative(self.backend, j, self.cutoff)?;
        x.matmul(self)?.sub(&self.matmul(&x)?)
    }

    /// `σ(x,π) = π(x)*(Tπ)(x)` in x-mode form with modes up to `x_cutoff`, on the
    /// fibres whose products with those modes stay inside the band.
    ///
    /// With `g^{cd} = T π_cd`, the coefficient of `μ_kl` is
    /// `s^{μkl}(π)_{ed} = d_μ Σ_c Σ_{ρpq} conj(U_{(kc),(ρp)}) U_{(le),(ρq)} ĝ^{cd}(ρ)_qp`
    /// with `U` the intertwiner of `μ⊗π`.
    pub fn symbol_of(&self, x_cutoff: f64) -> Result<SymbolField<T>> {
        let b = self.backend;
        let mus = b.enumerate_dual(x_cutoff);
        let interior = b
            .interior_cutoff(self.cutoff, &mus)
            .ok_or_else(|| Error::CutoffExceeded(format!("no fibre of band {} survives x-cutoff {x_cutoff}", self.cutoff)))?;
        let fibres = b.enumerate_dual(interior);
        let per_fibre = fibres
            .par_iter()
            .map(|pi| -> Result<(IrrepId, BTreeMap<ModeKey, CMat<T>>)> {
                let dp = pi.dim;
                let scale = re::<T>(1.0 / (dp as f64).sqrt());
                // ĝ^{cd} for every column (π, c, d)
                let g: Vec<Vec<SpectralField<T>>> = (0..dp)
                    .map(|c| {
                        (0..dp)
                            .map(|d| {
                                let k = self.position(pi, c, d).expect("fibre in band");
                                let col = self.matrix.column(k).into_owned() * cplx(scale, T::zero());
                                self.function(&col).coeffs
                            })
                            .collect()
                    })
                    .collect();
                let mut acc: BTreeMap<ModeKey, CMat<T>> = BTreeMap::new();
                for mu in &mus {
                    let dm = mu.dim;
                    let dec = b.tensor_decompose::<T>(mu, pi)?;
                    let u = &dec.intertwiner;
                    let offsets = dec.offsets();
                    let mut s: Vec<CMat<T>> = vec![zeros(dp, dp); dm * dm];
                    for c in 0..dp {
                        // columns (k, c) of U*
                        let vc = CMat::from_fn(dm * dp, dm, |r, k| u[(k * dp + c, r)].conj());
                        for d in 0..dp {
                            let blocks = dec
                                .components
                                .iter()
                                .map(|rho| g[c][d].get(rho).cloned().ok_or_else(|| Error::CutoffExceeded(format!("{rho} outside band"))))
                                .collect::<Result<Vec<_>>>()?;
                            let mut dmat = zeros::<T>(dm * dp, dm * dp);
                            for ((rho, o), blk) in dec.components.iter().zip(&offsets).zip(&blocks) {
                                dmat.view_mut((*o, *o), (rho.dim, rho.dim)).copy_from(blk);
                            }
                            // columns (k, c) of U D U*
                            let y = u * (dmat * &vc);
                            for k in 0..dm {
                                for l in 0..dm {
                                    for e in 0..dp {
                                        s[k * dm + l][(e, d)] += y[(l * dp + e, k)];
                                    }
                                }
                            }
                        }
                    }
                    let dmu = cplx(re::<T>(dm as f64), T::zero());
                    for k in 0..dm {
                        for l in 0..dm {
                            let m = &s[k * dm + l] * dmu;
                            if m.iter().any(|z| z.norm_sqr() > T::zero()) {
                                acc.insert((mu.clone(), k, l), m);
                            }
                        }
                    }
                }
                Ok((pi.clone(), acc))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = assemble_symbol(b, x_cutoff, interior, per_fibre);
        if out.modes.is_empty() {
            out.modes.insert((b.trivial(), 0, 0), SpectralField::zeros(b, interior));
        }
        Ok(out)
    }

    pub fn to_table(&self) -> OperatorTable {
        OperatorTable {
            backend: self.backend.id(),
            cutoff: self.cutoff,
            index: self.index.iter().map(|(p, i, j)| IndexEntry { label: p.label.clone(), i: *i, j: *j }).collect(),
            re: (0..self.dim()).map(|r| (0..self.dim()).map(|c| to_f64(self.matrix[(r, c)].re)).collect()).collect(),
            im: (0..self.dim()).map(|r| (0..self.dim()).map(|c| to_f64(self.matrix[(r, c)].im)).collect()).collect(),
        }
    }
}

/// JSON form of an [`OperatorMatrix`]: the index manifest and the dense matrix.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorTable {
    pub backend: String,
    pub cutoff: f64,
    pub index: Vec<IndexEntry>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexEntry {
    pub label: Label,
    pub i: usize,
    pub j: usize,
}

/// Largest singular value of `W₂ T W₁⁻¹`, `W_i = (1+λ_π)^{s_i/2}`, by power iteration
/// on the Gram matrix from a fixed seed.
pub fn sobolev_opnorm<T: Real>(t: &OperatorMatrix<T>, s1: f64, s2: f64) -> f64 {
    let n = t.dim();
    if n == 0 {
        return 0.0;
    }
    let w: Vec<(f64, f64)> = t.index.iter().map(|(p, _, _)| ((1.0 + p.casimir).powf(-s1 / 2.0), (1.0 + p.casimir).powf(s2 / 2.0))).collect();
    let a: DMatrix<nalgebra::Complex<f64>> = DMatrix::from_fn(n, n, |r, c| {
        let z = t.matrix[(r, c)];
        nalgebra::Complex::new(to_f64(z.re), to_f64(z.im)) * (w[r].1 * w[c].0)
    });
    let gram = a.adjoint() * &a;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: DVector<nalgebra::Complex<f64>> =
        DVector::from_fn(n, |_, _| nalgebra::Complex::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)));
    v /= nalgebra::Complex::new(v.norm(), 0.0);
    let mut last = 0.0f64;
    for it in 0..20000 {
        let gv = &gram * &v;
        let rq = v.dotc(&gv).re;
        let nrm = gv.norm();
        if nrm == 0.0 {
            return 0.0;
        }
        v = gv / nalgebra::Complex::new(nrm, 0.0);
        if it > 2 && (rq - last).abs() <= 1e-10 * rq.abs() {
            return rq.max(0.0).sqrt();
        }
        last = rq;
    }
    last.max(0.0).sqrt()
}

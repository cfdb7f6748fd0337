//! Intrinsic differences `Δ_τ` and RT differences `Δ_q`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier::{multiply, BandlimitedFunction};
use crate::groups::{CompactGroup, IrrepId};
use crate::scalar::{eye, zeros, CMat, Real};

use super::SymbolField;

/// `Δ^α σ(π)` on `H_{τ_1}⊗⋯⊗H_{τ_a}⊗H_π` for the fibres where it is available;
/// fibres needing irreps above the cutoff are listed in `overflow`.
#[derive(Clone, Debug)]
pub struct DeltaField<T: Real> {
    pub word: Vec<IrrepId>,
    pub entries: BTreeMap<IrrepId, CMat<T>>,
    pub overflow: Vec<IrrepId>,
}

impl<T: Real> DeltaField<T> {
    pub fn get(&self, pi: &IrrepId) -> Option<&CMat<T>> {
        self.entries.get(pi)
    }

    /// Largest operator norm over available fibres.
    pub fn sup_op_norm(&self) -> T {
        self.entries.values().fold(T::zero(), |a, m| a.max(crate::scalar::op_norm(m)))
    }

    /// Largest entry modulus over available fibres.
    pub fn max_abs(&self) -> T {
        self.entries.values().fold(T::zero(), |a, m| a.max(crate::scalar::max_abs(m)))
    }
}

/// `σ(τ_1⊗⋯⊗τ_k⊗π)` in the Kronecker basis of `H_{τ_1}⊗⋯⊗H_{τ_k}⊗H_π`.
pub fn extend_word<T: Real>(sigma: &SpectralField<T>, word: &[IrrepId], pi: &IrrepId) -> Result<CMat<T>> {
    let Some((last, head)) = word.split_last() else {
        return sigma.get(pi).cloned().ok_or(Error::CutoffExceeded(format!("{} above cutoff {}", pi, sigma.cutoff)));
    };
    let b = sigma.backend;
    let dec = b.tensor_decompose::<T>(last, pi)?;
    let dh: usize = head.iter().map(|t| t.dim).product();
    let inner = last.dim * pi.dim;
    let n = dh * inner;
    // block-diagonal operator on H_head ⊗ (⊕ρ)
    let mut blk = zeros::<T>(n, n);
    for (rho, off) in dec.components.iter().zip(dec.offsets()) {
        let m = extend_word(sigma, head, rho)?;
        for w in 0..dh {
            for w2 in 0..dh {
                for p in 0..rho.dim {
                    for q in 0..rho.dim {
                        blk[(w * inner + off + p, w2 * inner + off + q)] = m[(w * rho.dim + p, w2 * rho.dim + q)];
                    }
                }
            }
        }
    }
    if inner == 1 {
        return Ok(blk);
    }
    let v = eye::<T>(dh).kronecker(&dec.intertwiner);
    Ok(&v * blk * v.adjoint())
}

/// Place `m` (acting on the factors listed in `subset`, then `H_π`) into the full
/// space `H_{τ_1}⊗⋯⊗H_{τ_a}⊗H_π`, with the identity on the remaining factors.
fn embed<T: Real>(m: &CMat<T>, dims: &[usize], subset: &[usize], dpi: usize) -> CMat<T> {
    let total: usize = dims.iter().product::<usize>() * dpi;
    let mut out = zeros::<T>(total, total);
    let a = dims.len();
    let split = |mut r: usize| {
        let p = r % dpi;
        r /= dpi;
        let mut idx = vec![0; a];
        for s in (0..a).rev() {
            idx[s] = r % dims[s];
            r /= dims[s];
        }
        (idx, p)
    };
    let sub_index = |idx: &[usize], p: usize| {
        let mut r = 0;
        for &s in subset {
            r = r * dims[s] + idx[s];
        }
        r * dpi + p
    };
    let rows: Vec<(Vec<usize>, usize)> = (0..total).map(split).collect();
    for (r, (ri, rp)) in rows.iter().enumerate() {
        for (c, (ci, cp)) in rows.iter().enumerate() {
            let same_rest = (0..a).filter(|s| !subset.contains(s)).all(|s| ri[s] == ci[s]);
            if same_rest {
                out[(r, c)] = m[(sub_index(ri, *rp), sub_index(ci, *cp))];
            }
        }
    }
    out
}

/// `Δ^α σ(π) = Σ_{S⊆α} (−1)^{|α|−|S|} σ(⊗_{s∈S} τ_s ⊗ π) ⊗ I`.
pub fn delta_word_at<T: Real>(sigma: &SpectralField<T>, word: &[IrrepId], pi: &IrrepId) -> Result<CMat<T>> {
    let a = word.len();
    let dims: Vec<usize> = word.iter().map(|t| t.dim).collect();
    let total: usize = dims.iter().product::<usize>() * pi.dim;
    let mut acc = zeros::<T>(total, total);
    for mask in 0u32..(1 << a) {
        let subset: Vec<usize> = (0..a).filter(|s| mask & (1 << s) != 0).collect();
        let sub_word: Vec<IrrepId> = subset.iter().map(|&s| word[s].clone()).collect();
        let m = extend_word(sigma, &sub_word, pi)?;
        let e = embed(&m, &dims, &subset, pi.dim);
        if (a - subset.len()) % 2 == 0 {
            acc += e;
        } else {
            acc -= e;
        }
    }
    Ok(acc)
}

/// `Δ^α σ` over all fibres of `σ`.
pub fn delta_word<T: Real>(sigma: &SpectralField<T>, word: &[IrrepId]) -> DeltaField<T> {
    let mut out = DeltaField { word: word.to_vec(), entries: BTreeMap::new(), overflow: Vec::new() };
    for pi in sigma.irreps() {
        match delta_word_at(sigma, word, pi) {
            Ok(m) => {
                out.entries.insert(pi.clone(), m);
            }
            Err(_) => out.overflow.push(pi.clone()),
        }
    }
    out
}

/// `Δ_τ σ(π) = σ(τ⊗π) − I_{d_τ}⊗σ(π)`.
pub fn delta_tau<T: Real>(sigma: &SpectralField<T>, tau: &IrrepId) -> DeltaField<T> {
    delta_word(sigma, std::slice::from_ref(tau))
}

/// `Δ_q σ = F(q·F⁻¹σ)` on the fibres whose value does not depend on anything above
/// the cutoff of `σ`.
pub fn delta_q<T: Real>(sigma: &SpectralField<T>, q: &BandlimitedFunction<T>) -> Result<SpectralField<T>> {
    let b = sigma.backend;
    let shifts: Vec<IrrepId> = q.coeffs.entries.iter().filter(|(_, m)| m.iter().any(|z| z.norm_sqr() > T::zero())).map(|(p, _)| p.clone()).collect();
    let interior = b
        .interior_cutoff(sigma.cutoff, &shifts)
        .ok_or(Error::CutoffExceeded(format!("no interior below cutoff {}", sigma.cutoff)))?;
    let prod = multiply(q, &BandlimitedFunction::new(sigma.clone()));
    let mut out = prod.coeffs.restrict(interior);
    out.truncated = sigma.truncated;
    Ok(out)
}

/// `Δ_q` applied fibrewise to each x-mode.
pub fn delta_q_symbol<T: Real>(sigma: &SymbolField<T>, q: &BandlimitedFunction<T>) -> Result<SymbolField<T>> {
    let mut out = SymbolField::zero(sigma.backend, sigma.x_cutoff, sigma.cutoff);
    for (k, f) in &sigma.modes {
        let d = delta_q(f, q)?;
        out.cutoff = d.cutoff;
        out.modes.insert(k.clone(), d);
    }
    if sigma.modes.is_empty() {
        let shifts: Vec<IrrepId> = q.coeffs.irreps().cloned().collect();
        out.cutoff = sigma.backend.interior_cutoff(sigma.cutoff, &shifts).unwrap_or(0.0);
    }
    Ok(out)
}

//! Quantization, kernels, exact composition and adjoint, asymptotic expansions,
//! and operator matrices.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{project_blocks, SpectralField};
use crate::fourier::BandlimitedFunction;
use crate::groups::{Backend, CompactGroup, GroupPoint, IrrepId};
use crate::scalar::{cplx, re, zeros, CMat, Real};
use crate::symbols::{delta_q_symbol, DifferenceFamily, ModeKey, ModeProduct, SymbolField, TaylorData};

mod matrix;

pub use matrix::{sobolev_opnorm, IndexEntry, OperatorMatrix, OperatorTable};

/// `Op(σ)φ(x) = Σ_π d_π Tr(π(x) σ(x,π) φ̂(π))`, exactly, in coefficient form.
///
/// The result lives at `product_cutoff(x_cutoff, cutoff of φ)`.
pub fn op_apply<T: Real>(sigma: &SymbolField<T>, phi: &BandlimitedFunction<T>) -> Result<BandlimitedFunction<T>> {
    let b = sigma.backend;
    check_backend(b, phi.backend())?;
    let fibres = sigma.irreps();
    for (pi, m) in &phi.coeffs.entries {
        let nonzero = m.iter().any(|z| z.norm_sqr() > T::zero());
        if nonzero && !fibres.contains(pi) {
            return Err(Error::CutoffExceeded(format!("φ has a component at {pi}, above the symbol cutoff {}", sigma.cutoff)));
        }
    }
    let out_cut = b.product_cutoff(sigma.x_cutoff, phi.cutoff());
    let mut out = SpectralField::zeros(b, out_cut);
    out.truncated = phi.coeffs.truncated;
    let by_tau = group_modes(sigma);
    for (tau, modes) in &by_tau {
        for (pi, fh) in &phi.coeffs.entries {
            if !fibres.contains(pi) {
                continue;
            }
            let (dt, dp) = (tau.dim, pi.dim);
            // block (b, a) holds s^{τab}(π) φ̂(π)
            let mut big = zeros::<T>(dt * dp, dt * dp);
            for (a, bb, f) in modes {
                let blk = f.get(pi).expect("fibre present") * fh;
                big.view_mut((bb * dp, a * dp), (dp, dp)).copy_from(&blk);
            }
            let dec = b.tensor_decompose::<T>(tau, pi)?;
            for (rho, blk) in dec.components.iter().zip(project_blocks(&dec, &big)) {
                let e = out.entries.get_mut(rho).expect("within product cutoff");
                *e += blk * cplx(re::<T>(dp as f64 / rho.dim as f64), T::zero());
            }
        }
    }
    Ok(BandlimitedFunction::new(out))
}

/// `κ_x = F⁻¹σ(x, ·)`, so that `Op(σ)φ(x) = (φ * κ_x)(x)`.
pub fn kernel_of<T: Real>(sigma: &SymbolField<T>, x: &GroupPoint<T>) -> BandlimitedFunction<T> {
    BandlimitedFunction::new(sigma.evaluate(x))
}

fn check_backend(a: Backend, b: Backend) -> Result<()> {
    if a != b {
        return Err(Error::BackendMismatch(a.id(), b.id()));
    }
    Ok(())
}

type ModeList<'a, T> = Vec<(usize, usize, &'a SpectralField<T>)>;

fn group_modes<T: Real>(s: &SymbolField<T>) -> BTreeMap<IrrepId, ModeList<'_, T>> {
    let mut out: BTreeMap<IrrepId, ModeList<'_, T>> = BTreeMap::new();
    for ((tau, i, j), f) in &s.modes {
        out.entry(tau.clone()).or_default().push((*i, *j, f));
    }
    out
}

/// Collect per-fibre mode matrices into a symbol, zero-filling absent fibres.
fn assemble_symbol<T: Real>(
    b: Backend,
    x_cutoff: f64,
    cutoff: f64,
    per_fibre: Vec<(IrrepId, BTreeMap<ModeKey, CMat<T>>)>,
) -> SymbolField<T> {
    let mut out = SymbolField::zero(b, x_cutoff, cutoff);
    let fibres: Vec<IrrepId> = per_fibre.iter().map(|(p, _)| p.clone()).collect();
    for (pi, modes) in per_fibre {
        for (k, m) in modes {
            out.modes
                .entry(k)
                .or_insert_with(|| {
                    let mut f = SpectralField::empty(b, cutoff);
                    for p in &fibres {
                        f.entries.insert(p.clone(), zeros(p.dim, p.dim));
                    }
                    f
                })
                .entries
                .insert(pi.clone(), m);
        }
    }
    out
}

/// The symbol of `Op(σ1)Op(σ2)`, exact on fibres `π` for which every component of
/// `ν⊗π` (`ν` an x-irrep of `σ2`) lies within the cutoff of `σ1`.
///
/// With `σ2 = Σ ν_ab(x) s2^{νab}` and `σ1 = Σ τ_ij(x) s1^{τij}`,
/// `σ(x,π) = Σ ν_aa'(x) τ_ij(x) [s1^{τij}(ν⊗π)]_{a'b} s2^{νab}(π)`, the product
/// `ν_aa' τ_ij` being expanded along `ν⊗τ`.
pub fn compose<T: Real>(s1: &SymbolField<T>, s2: &SymbolField<T>) -> Result<SymbolField<T>> {
    let b = s1.backend;
    check_backend(b, s2.backend)?;
    let nus = s2.x_irreps();
    let interior = b
        .interior_cutoff(s1.cutoff, &nus)
        .ok_or_else(|| Error::CutoffExceeded(format!("no interior below {} for the x-modes of the right factor", s1.cutoff)))?;
    let out_cut = interior.min(s2.cutoff);
    let fib2 = s2.irreps();
    let fibres: Vec<IrrepId> = b.enumerate_dual(out_cut).into_iter().filter(|p| fib2.contains(p)).collect();
    let s1_modes: Vec<(&ModeKey, &SpectralField<T>)> = s1.modes.iter().collect();
    let s2_by_nu = group_modes(s2);

    let mut products: BTreeMap<(IrrepId, IrrepId), ModeProduct<T>> = BTreeMap::new();
    for nu in s2_by_nu.keys() {
        for tau in s1.x_irreps() {
            products.insert((nu.clone(), tau.clone()), ModeProduct::new(b, nu, &tau)?);
        }
    }

    let per_fibre = fibres
        .par_iter()
        .map(|pi| -> Result<(IrrepId, BTreeMap<ModeKey, CMat<T>>)> {
            let dp = pi.dim;
            let mut acc: BTreeMap<ModeKey, CMat<T>> = BTreeMap::new();
            for (nu, modes2) in &s2_by_nu {
                let dn = nu.dim;
                let dec = b.tensor_decompose::<T>(nu, pi)?;
                let u = &dec.intertwiner;
                let offsets = dec.offsets();
                // V_a = U* S_a with S_a stacking s2^{νab}(π) over b
                let mut v: Vec<Option<CMat<T>>> = vec![None; dn];
                for a in 0..dn {
                    let mut sa = zeros::<T>(dn * dp, dp);
                    let mut any = false;
                    for (ma, mb, f) in modes2 {
                        if *ma == a {
                            sa.view_mut((mb * dp, 0), (dp, dp)).copy_from(f.get(pi).expect("fibre present"));
                            any = true;
                        }
                    }
                    if any {
                        v[a] = Some(u.adjoint() * sa);
                    }
                }
                for ((tau, i, j), f1) in &s1_modes {
                    let blocks = dec
                        .components
                        .iter()
                        .map(|c| {
                            f1.get(c).ok_or_else(|| Error::CutoffExceeded(format!("component {c} of {nu}⊗{pi} above cutoff {}", s1.cutoff)))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let mp = &products[&(nu.clone(), tau.clone())];
                    for (a, va) in v.iter().enumerate() {
                        let Some(va) = va else { continue };
                        let mut y = zeros::<T>(dn * dp, dp);
                        for ((c, o), blk) in dec.components.iter().zip(&offsets).zip(&blocks) {
                            let rows = va.view((*o, 0), (c.dim, dp));
                            y.view_mut((*o, 0), (c.dim, dp)).copy_from(&(*blk * rows));
                        }
                        let w = u * y;
                        for a2 in 0..dn {
                            let blk = w.view((a2 * dp, 0), (dp, dp));
                            for (rho, e, g, coef) in mp.terms(a, a2, *i, *j) {
                                let entry = acc.entry((rho, e, g)).or_insert_with(|| zeros(dp, dp));
                                *entry += blk * coef;
                            }
                        }
                    }
                }
            }
            Ok((pi.clone(), acc))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_symbol(b, b.product_cutoff(s1.x_cutoff, s2.x_cutoff), out_cut, per_fibre))
}

/// `σ^{(*)}` with `Op(σ^{(*)}) = Op(σ)*`.
///
/// `Op(σ) = Σ M_{τ_cd} Op(s^{τcd})`, so the adjoint is `Σ Op(s^{τcd}*) M_{conj τ_cd}`.
pub fn adjoint<T: Real>(sigma: &SymbolField<T>) -> Result<SymbolField<T>> {
    let b = sigma.backend;
    let mut out: Option<SymbolField<T>> = None;
    let mut conj: BTreeMap<IrrepId, (IrrepId, CMat<T>)> = BTreeMap::new();
    for ((tau, c, d), f) in &sigma.modes {
        if !conj.contains_key(tau) {
            conj.insert(tau.clone(), b.conjugate::<T>(tau)?);
        }
        let (bar, cc) = &conj[tau];
        // conj τ_cd = Σ_ef C_ce conj(C_df) τ̄_ef
        let id = SpectralField::identity(b, sigma.cutoff);
        let mut m = SymbolField::zero(b, bar.casimir, sigma.cutoff);
        for e in 0..tau.dim {
            for g in 0..tau.dim {
                let coef = cc[(*c, e)] * cc[(*d, g)].conj();
                if coef.norm_sqr() > T::zero() {
                    m.modes.insert((bar.clone(), e, g), id.scale(coef));
                }
            }
        }
        let term = compose(&SymbolField::invariant(f.adjoint()), &m)?;
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    Ok(out.unwrap_or_else(|| SymbolField::zero(b, 0.0, sigma.cutoff)))
}

/// `σ1∘σ2 − Σ_{|α|≤N} Δ_{q^α}σ1 · D_α σ2` on the common interior.
///
/// `q^α` runs over monomials in the adapted functions of `family` and `D_α` are the
/// matching Taylor operators in `x`.
pub fn expansion_remainder_compose<T: Real>(
    s1: &SymbolField<T>,
    s2: &SymbolField<T>,
    n: usize,
    family: &DifferenceFamily<T>,
) -> Result<SymbolField<T>> {
    let exact = compose(s1, s2)?;
    let data = TaylorData::new(family, n)?;
    let mut approx: Option<SymbolField<T>> = None;
    for alpha in data.multi_indices(n) {
        let d1 = delta_q_symbol(s1, &data.q_power(&alpha))?;
        let d2 = data.apply_to_symbol(s2, &alpha)?;
        let term = d1.pointwise_mul(&d2)?;
        approx = Some(match approx {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let approx = approx.expect("α = 0 is always present");
    let cut = exact.cutoff.min(approx.cutoff);
    Ok(exact.restrict(cut).sub(&approx.restrict(cut)))
}

/// `σ^{(*)} − Σ_{|α|≤N} Δ_{q̄^α}(D_α σ)*` on the common interior.
pub fn expansion_remainder_adjoint<T: Real>(sigma: &SymbolField<T>, n: usize, family: &DifferenceFamily<T>) -> Result<SymbolField<T>> {
    let exact = adjoint(sigma)?;
    let data = TaylorData::new(family, n)?;
    let mut approx: Option<SymbolField<T>> = None;
    for alpha in data.multi_indices(n) {
        let d = data.apply_to_symbol(sigma, &alpha)?.pointwise_adjoint()?;
        let term = delta_q_symbol(&d, &data.q_power(&alpha).conj())?;
        approx = Some(match approx {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let approx = approx.expect("α = 0 is always present");
    let cut = exact.cutoff.min(approx.cutoff);
    Ok(exact.restrict(cut).sub(&approx.restrict(cut)))
}

/// `max_x ‖σ(x,π)‖_op` on the x-grid of `σ`, for each fibre.
pub fn sup_x_norms<T: Real>(sigma: &SymbolField<T>) -> BTreeMap<IrrepId, f64> {
    sigma.sup_x_op_norm().into_iter().map(|(p, v)| (p, crate::scalar::to_f64(v))).collect()
}

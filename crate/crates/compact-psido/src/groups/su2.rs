use rand::Rng;
use rand_distr::StandardNormal;

use super::{
    clebsch_gordan_block, wigner_d_small_all, BackendMetadata, CompactGroup, GroupPoint, IrrepId,
    Label, QuadratureRule, TensorDecomposition, QUADRATURE_SAFETY_FACTOR,
};
use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, re, zeros, CMat, Real, C};

/// Unit quaternion `a + b·i + c·j + d·k`.
///
/// The embedding into `SU(2)` sends `i, j, k` to `-iσ_1, -iσ_2, -iσ_3`, so that
/// `exp(tX_k) = cos(t/2) + sin(t/2)·e_k` for the generators `X_k = -iσ_k/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion<T: Real> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn norm(&self) -> T {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Quaternion::new(self.a / n, self.b / n, self.c / n, self.d / n)
    }

    pub fn hamilton(&self, o: &Self) -> Self {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (o.a, o.b, o.c, o.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// The 2×2 matrix `[[a - id, -c - ib], [c - ib, a + id]]`.
    pub fn to_matrix(&self) -> CMat<T> {
        CMat::from_row_slice(
            2,
            2,
            &[
                cplx(self.a, -self.d),
                cplx(-self.c, -self.b),
                cplx(self.c, -self.b),
                cplx(self.a, self.d),
            ],
        )
    }

    /// ZYZ Euler angles `(α, β, γ)` with `β ∈ [0, π]`; at the poles the free
    /// angle is chosen so that only `α ± γ` carries information.
    pub fn to_euler(&self) -> (T, T, T) {
        // u = a - i d = e^{-i(α+γ)/2} cos(β/2), w = c - i b = e^{i(α-γ)/2} sin(β/2)
        let cu = (self.a * self.a + self.d * self.d).sqrt();
        let sw = (self.c * self.c + self.b * self.b).sqrt();
        let beta = re::<T>(2.0) * sw.atan2(cu);
        let arg_u = if cu > T::zero() { (-self.d).atan2(self.a) } else { T::zero() };
        let arg_w = if sw > T::zero() { (-self.b).atan2(self.c) } else { T::zero() };
        (arg_w - arg_u, beta, -arg_u - arg_w)
    }

    pub fn from_euler(alpha: T, beta: T, gamma: T) -> Self {
        let half = re::<T>(0.5);
        let (cb, sb) = ((beta * half).cos(), (beta * half).sin());
        let (p, m) = ((alpha + gamma) * half, (alpha - gamma) * half);
        Quaternion::new(p.cos() * cb, -m.sin() * sb, m.cos() * sb, p.sin() * cb)
    }
}

/// `SU(2)` with irreps labelled by twice-spin `j` and metric making `X_k = -iσ_k/2` orthonormal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Su2;

/// `λ_j = (j/2)(j/2 + 1)`.
pub(crate) fn casimir(j: u32) -> f64 {
    let l = j as f64 / 2.0;
    l * (l + 1.0)
}

impl Su2 {
    pub fn spin(j: u32) -> IrrepId {
        IrrepId { label: Label::Spin(j), dim: j as usize + 1, casimir: casimir(j) }
    }

    fn j(pi: &IrrepId) -> Result<u32> {
        match pi.label {
            Label::Spin(j) => Ok(j),
            ref other => Err(Error::InvalidIrrep(format!("{other} on su2"))),
        }
    }

    fn quat<T: Real>(x: &GroupPoint<T>) -> &Quaternion<T> {
        match x {
            GroupPoint::Su2(q) => q,
            _ => panic!("point does not belong to su2"),
        }
    }

    /// Largest twice-spin with `λ_j ≤ lambda`.
    pub fn max_spin(lambda: f64) -> Option<u32> {
        if lambda < 0.0 {
            return None;
        }
        // j/2 = (-1 + sqrt(1 + 4λ))/2
        let mut j = ((1.0 + 4.0 * lambda).sqrt() - 1.0).floor().max(0.0) as u32;
        while casimir(j + 1) <= lambda {
            j += 1;
        }
        while j > 0 && casimir(j) > lambda {
            j -= 1;
        }
        Some(j)
    }

    /// Wigner matrices `D^j(α, β, γ)_{ab} = e^{-i m_a α} d^j_{ab}(β) e^{-i m_b γ}` for `j ≤ jmax`.
    pub fn wigner_all<T: Real>(jmax: u32, x: &Quaternion<T>) -> Vec<CMat<T>> {
        let (alpha, beta, gamma) = x.to_euler();
        wigner_d_small_all(jmax, beta)
            .into_iter()
            .enumerate()
            .map(|(j, d)| {
                let n = j + 1;
                let half = re::<T>(0.5);
                let mvals: Vec<T> = (0..n).map(|a| re::<T>(j as f64 - 2.0 * a as f64) * half).collect();
                let pa: Vec<C<T>> = mvals.iter().map(|&m| cis(-m * alpha)).collect();
                let pg: Vec<C<T>> = mvals.iter().map(|&m| cis(-m * gamma)).collect();
                CMat::from_fn(n, n, |r, c| pa[r] * pg[c] * d[(r, c)])
            })
            .collect()
    }

    /// Angular momentum matrices `(J_x, J_y, J_z)` for twice-spin `j`.
    fn angular_momentum<T: Real>(j: u32) -> [CMat<T>; 3] {
        let n = j as usize + 1;
        let mut jp = zeros::<T>(n, n);
        for a in 1..n {
            let v = ((a * (j as usize - a + 1)) as f64).sqrt();
            jp[(a - 1, a)] = cplx(re(v), T::zero());
        }
        let jm = jp.adjoint();
        let half = re::<T>(0.5);
        let jx = (&jp + &jm).map(|z| z * half);
        let jy = (&jp - &jm).map(|z| z * cplx(T::zero(), -half));
        let jz = CMat::from_fn(n, n, |r, c| {
            if r == c {
                cplx(re::<T>(j as f64 / 2.0 - r as f64), T::zero())
            } else {
                C::new(T::zero(), T::zero())
            }
        });
        [jx, jy, jz]
    }
}

impl CompactGroup for Su2 {
    fn id(&self) -> String {
        "su2".into()
    }

    fn metadata(&self) -> BackendMetadata {
        BackendMetadata {
            dimension: 3,
            diameter: std::f64::consts::TAU,
            chart_radius: 0.5,
            basis_size: 3,
        }
    }

    fn irrep(&self, label: &Label) -> Result<IrrepId> {
        match label {
            Label::Spin(j) => Ok(Su2::spin(*j)),
            other => Err(Error::InvalidIrrep(format!("{other} on su2"))),
        }
    }

    fn enumerate_dual(&self, lambda_max: f64) -> Vec<IrrepId> {
        match Su2::max_spin(lambda_max) {
            Some(j) => (0..=j).map(Su2::spin).collect(),
            None => Vec::new(),
        }
    }

    fn trivial(&self) -> IrrepId {
        Su2::spin(0)
    }

    fn matrix_coeff<T: Real>(&self, pi: &IrrepId, x: &GroupPoint<T>) -> Result<CMat<T>> {
        let j = Su2::j(pi)?;
        Ok(Su2::wigner_all(j, Su2::quat(x)).pop().expect("non-empty"))
    }

    fn infinitesimal<T: Real>(&self, pi: &IrrepId, k: usize) -> Result<CMat<T>> {
        let j = Su2::j(pi)?;
        if k >= 3 {
            return Err(Error::IndexOutOfRange { index: k, dim: 3 });
        }
        let jm = Su2::angular_momentum::<T>(j);
        Ok(jm[k].map(|z| z * cplx(T::zero(), -T::one())))
    }

    fn tensor_decompose<T: Real>(&self, tau: &IrrepId, pi: &IrrepId) -> Result<TensorDecomposition<T>> {
        let (j1, j2) = (Su2::j(tau)?, Su2::j(pi)?);
        let u = clebsch_gordan_block(j1, j2);
        let mut components = Vec::new();
        let mut jj = j1.abs_diff(j2);
        while jj <= j1 + j2 {
            components.push(Su2::spin(jj));
            jj += 2;
        }
        Ok(TensorDecomposition {
            left: tau.clone(),
            right: pi.clone(),
            components,
            intertwiner: u.map(|v| cplx(re(v), T::zero())),
        })
    }

    fn conjugate<T: Real>(&self, pi: &IrrepId) -> Result<(IrrepId, CMat<T>)> {
        // conj(D_{m'm}) = (-1)^{m'-m} D_{-m',-m}
        let j = Su2::j(pi)? as usize;
        let mut c = zeros::<T>(j + 1, j + 1);
        for a in 0..=j {
            let s = if a % 2 == 0 { T::one() } else { -T::one() };
            c[(a, j - a)] = cplx(s, T::zero());
        }
        Ok((pi.clone(), c))
    }

    fn quadrature<T: Real>(&self, lambda: f64) -> QuadratureRule<T> {
        let jmax = Su2::max_spin(lambda).unwrap_or(0) as usize;
        let f = QUADRATURE_SAFETY_FACTOR;
        let n_alpha = f * (jmax + 1);
        let n_gamma = f * (2 * jmax + 1);
        let n_beta = (f * ((jmax + 2) / 2)).max(2);
        QuadratureRule::euler_grid(n_alpha, n_beta, n_gamma, lambda)
    }

    fn distance<T: Real>(&self, x: &GroupPoint<T>) -> T {
        let a = Su2::quat(x).a;
        let a = if a > T::one() { T::one() } else if a < -T::one() { -T::one() } else { a };
        re::<T>(2.0) * a.acos()
    }

    fn fundamental_set(&self) -> Vec<IrrepId> {
        vec![Su2::spin(1)]
    }

    fn identity<T: Real>(&self) -> GroupPoint<T> {
        GroupPoint::Su2(Quaternion::new(T::one(), T::zero(), T::zero(), T::zero()))
    }

    fn mul<T: Real>(&self, x: &GroupPoint<T>, y: &GroupPoint<T>) -> GroupPoint<T> {
        GroupPoint::Su2(Su2::quat(x).hamilton(Su2::quat(y)).normalized())
    }

    fn inv<T: Real>(&self, x: &GroupPoint<T>) -> GroupPoint<T> {
        GroupPoint::Su2(Su2::quat(x).conjugate())
    }

    fn exp_chart<T: Real>(&self, v: &[T]) -> GroupPoint<T> {
        assert_eq!(v.len(), 3, "chart vector has wrong length");
        let t = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if t == T::zero() {
            return self.identity();
        }
        let half = t * re::<T>(0.5);
        let s = half.sin() / t;
        GroupPoint::Su2(Quaternion::new(half.cos(), s * v[0], s * v[1], s * v[2]))
    }

    fn random_point<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> GroupPoint<T> {
        let mut g = || re::<T>(rng.sample::<f64, _>(StandardNormal));
        let q = Quaternion::new(g(), g(), g(), g());
        GroupPoint::Su2(q.normalized())
    }
}

//! Compact Lie group backends: the torus `T^n` and `SU(2)`.

mod cg;
mod quadrature;
mod su2;
mod torus;
mod wigner;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CMat, Real};

pub use cg::clebsch_gordan_block;
pub use quadrature::{QuadratureRule, RuleLayout, QUADRATURE_SAFETY_FACTOR};
pub use su2::{Quaternion, Su2};
pub use torus::{reduce_angle, Torus};
pub use wigner::{wigner_d_small, wigner_d_small_all};

/// Group-specific irrep label: a frequency vector on `T^n`, the twice-spin `j` on `SU(2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Torus(Vec<i32>),
    Spin(u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Torus(k) => {
                let parts: Vec<String> = k.iter().map(|v| v.to_string()).collect();
                write!(f, "k=({})", parts.join(";"))
            }
            Label::Spin(j) => write!(f, "j={j}"),
        }
    }
}

/// A point of the dual: label, dimension `d_π` and Casimir eigenvalue `λ_π`.
///
/// Equality and hashing only look at the label; ordering is by `(casimir, label)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IrrepId {
    pub label: Label,
    pub dim: usize,
    pub casimir: f64,
}

impl PartialEq for IrrepId {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}
impl Eq for IrrepId {}
impl Hash for IrrepId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.label.hash(state)
    }
}
impl PartialOrd for IrrepId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for IrrepId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.casimir
            .total_cmp(&other.casimir)
            .then_with(|| self.label.cmp(&other.label))
    }
}

impl fmt::Display for IrrepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// An element of the group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupPoint<T: Real> {
    /// Angles, reduced to `[0, 2π)`.
    Torus(Vec<T>),
    Su2(Quaternion<T>),
}

/// `τ⊗π ≅ ⊕ ρ_i` together with the unitary intertwiner `U`.
///
/// Rows of `U` follow the Kronecker ordering `(a, i) ↦ a·d_π + i`; columns are the
/// concatenated bases of the listed components.
#[derive(Clone, Debug)]
pub struct TensorDecomposition<T: Real> {
    pub left: IrrepId,
    pub right: IrrepId,
    pub components: Vec<IrrepId>,
    pub intertwiner: CMat<T>,
}

impl<T: Real> TensorDecomposition<T> {
    /// Column offset of each component block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.components.len());
        let mut o = 0;
        for c in &self.components {
            out.push(o);
            o += c.dim;
        }
        out
    }
}

/// Dimension, diameter `R₀` and chart radius `ε₀` of a backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendMetadata {
    pub dimension: usize,
    pub diameter: f64,
    pub chart_radius: f64,
    pub basis_size: usize,
}

/// The operations every group backend provides.
pub trait CompactGroup {
    fn id(&self) -> String;
    fn metadata(&self) -> BackendMetadata;
    /// Resolve a label into a full irrep id.
    fn irrep(&self, label: &Label) -> Result<IrrepId>;
    /// All irreps with `λ_π ≤ lambda_max`, sorted by `(casimir, label)`.
    fn enumerate_dual(&self, lambda_max: f64) -> Vec<IrrepId>;
    fn trivial(&self) -> IrrepId;
    fn matrix_coeff<T: Real>(&self, pi: &IrrepId, x: &GroupPoint<T>) -> Result<CMat<T>>;
    /// `π(X_j)` for the fixed orthonormal basis, `j` zero-based.
    fn infinitesimal<T: Real>(&self, pi: &IrrepId, j: usize) -> Result<CMat<T>>;
    fn tensor_decompose<T: Real>(&self, tau: &IrrepId, pi: &IrrepId) -> Result<TensorDecomposition<T>>;
    /// Irrep `π̄` and unitary `C` with `conj(π(x)) = C π̄(x) C*`.
    fn conjugate<T: Real>(&self, pi: &IrrepId) -> Result<(IrrepId, CMat<T>)>;
    fn quadrature<T: Real>(&self, lambda: f64) -> QuadratureRule<T>;
    /// Riemannian distance to the identity.
    fn distance<T: Real>(&self, x: &GroupPoint<T>) -> T;
    fn fundamental_set(&self) -> Vec<IrrepId>;
    fn identity<T: Real>(&self) -> GroupPoint<T>;
    fn mul<T: Real>(&self, x: &GroupPoint<T>, y: &GroupPoint<T>) -> GroupPoint<T>;
    fn inv<T: Real>(&self, x: &GroupPoint<T>) -> GroupPoint<T>;
    /// `exp_G(Σ v_j X_j)`.
    fn exp_chart<T: Real>(&self, v: &[T]) -> GroupPoint<T>;
    /// Haar-distributed random element.
    fn random_point<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> GroupPoint<T>;
}

/// Runtime-selected backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Torus(Torus),
    Su2(Su2),
}

impl Backend {
    pub fn torus(n: usize) -> Self {
        Backend::Torus(Torus::new(n))
    }

    pub fn su2() -> Self {
        Backend::Su2(Su2)
    }

    /// Parse `"torus:n"` or `"su2"`.
    pub fn parse(id: &str) -> Result<Self> {
        let id = id.trim();
        if id.eq_ignore_ascii_case("su2") {
            return Ok(Backend::su2());
        }
        if let Some(n) = id.strip_prefix("torus:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Schema(format!("bad torus dimension in {id:?}")))?;
            if n == 0 {
                return Err(Error::Schema("torus dimension must be positive".into()));
            }
            return Ok(Backend::torus(n));
        }
        Err(Error::Schema(format!("unknown backend {id:?}")))
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Backend::Torus(_))
    }

    /// Largest Casimir among irreps of "degree" at most `degree`: `K²` on the torus
    /// (Euclidean frequency radius `K`) and `λ` of `j = degree` on SU(2).
    pub fn casimir_for_degree(&self, degree: usize) -> f64 {
        match self {
            Backend::Torus(_) => (degree * degree) as f64,
            Backend::Su2(_) => su2::casimir(degree as u32),
        }
    }

    /// Whether every component of `ν⊗π` has Casimir at most `cutoff`.
    pub fn reach_within(&self, nu: &IrrepId, pi: &IrrepId, cutoff: f64) -> bool {
        let top = match (&nu.label, &pi.label) {
            (Label::Torus(a), Label::Torus(b)) => a.iter().zip(b).map(|(x, y)| ((x + y) as f64).powi(2)).sum(),
            (Label::Spin(a), Label::Spin(b)) => su2::casimir(a + b),
            _ => f64::INFINITY,
        };
        top <= cutoff + 1e-9
    }

    /// Largest `Λ' ≤ cutoff` such that every `π` with `λ_π ≤ Λ'` keeps all of `ν⊗π`
    /// (for `ν` in `shifts`) within `cutoff`. `None` when not even the trivial irrep does.
    pub fn interior_cutoff(&self, cutoff: f64, shifts: &[IrrepId]) -> Option<f64> {
        let dual = self.enumerate_dual(cutoff);
        let mut last_ok: Option<f64> = None;
        let mut i = 0;
        while i < dual.len() {
            let lam = dual[i].casimir;
            let mut j = i;
            let mut ok = true;
            while j < dual.len() && (dual[j].casimir - lam).abs() < 1e-9 {
                ok &= shifts.iter().all(|nu| self.reach_within(nu, &dual[j], cutoff));
                j += 1;
            }
            if !ok {
                return last_ok;
            }
            last_ok = Some(lam);
            i = j;
        }
        Some(cutoff)
    }

    /// Degree (see [`Backend::casimir_for_degree`]) of an irrep.
    pub fn degree(&self, pi: &IrrepId) -> f64 {
        match &pi.label {
            Label::Torus(_) => pi.casimir.sqrt(),
            Label::Spin(j) => *j as f64,
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $g:ident => $e:expr) => {
        match $self {
            Backend::Torus($g) => $e,
            Backend::Su2($g) => $e,
        }
    };
}

impl CompactGroup for Backend {
    fn id(&self) -> String {
        dispatch!(self, g => g.id())
    }
    fn metadata(&self) -> BackendMetadata {
        dispatch!(self, g => g.metadata())
    }
    fn irrep(&self, label: &Label) -> Result<IrrepId> {
        dispatch!(self, g => g.irrep(label))
    }
    fn enumerate_dual(&self, lambda_max: f64) -> Vec<IrrepId> {
        dispatch!(self, g => g.enumerate_dual(lambda_max))
    }
    fn trivial(&self) -> IrrepId {
        dispatch!(self, g => g.trivial())
    }
    fn matrix_coeff<T: Real>(&self, pi: &IrrepId, x: &GroupPoint<T>) -> Result<CMat<T>> {
        dispatch!(self, g => g.matrix_coeff(pi, x))
    }
    fn infinitesimal<T: Real>(&self, pi: &IrrepId, j: usize) -> Result<CMat<T>> {
        dispatch!(self, g => g.infinitesimal(pi, j))
    }
    fn tensor_decompose<T: Real>(&self, tau: &IrrepId, pi: &IrrepId) -> Result<TensorDecomposition<T>> {
        dispatch!(self, g => g.tensor_decompose(tau, pi))
    }
    fn conjugate<T: Real>(&self, pi: &IrrepId) -> Result<(IrrepId, CMat<T>)> {
        dispatch!(self, g => g.conjugate(pi))
    }
    fn quadrature<T: Real>(&self, lambda: f64) -> QuadratureRule<T> {
        dispatch!(self, g => g.quadrature(lambda))
    }
    fn distance<T: Real>(&self, x: &GroupPoint<T>) -> T {
        dispatch!(self, g => g.distance(x))
    }
    fn fundamental_set(&self) -> Vec<IrrepId> {
        dispatch!(self, g => g.fundamental_set())
    }
    fn identity<T: Real>(&self) -> GroupPoint<T> {
        dispatch!(self, g => g.identity())
    }
    fn mul<T: Real>(&self, x: &GroupPoint<T>, y: &GroupPoint<T>) -> GroupPoint<T> {
        dispatch!(self, g => g.mul(x, y))
    }
    fn inv<T: Real>(&self, x: &GroupPoint<T>) -> GroupPoint<T> {
        dispatch!(self, g => g.inv(x))
    }
    fn exp_chart<T: Real>(&self, v: &[T]) -> GroupPoint<T> {
        dispatch!(self, g => g.exp_chart(v))
    }
    fn random_point<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> GroupPoint<T> {
        dispatch!(self, g => g.random_point(rng))
    }
}

#[cfg(test)]
mod tests;

use rand::Rng;

use super::{
    BackendMetadata, CompactGroup, GroupPoint, IrrepId, Label, QuadratureRule,
    TensorDecomposition, QUADRATURE_SAFETY_FACTOR,
};
use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, eye, re, CMat, Real};

/// The torus `T^n = (R/2πZ)^n` with characters `e_k(θ) = e^{ik·θ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Torus {
    pub n: usize,
}

pub fn reduce_angle<T: Real>(t: T) -> T {
    let tp = T::two_pi();
    let r = t - tp * (t / tp).floor();
    if r >= tp || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

impl Torus {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "torus dimension must be positive");
        Torus { n }
    }

    fn freq<'a>(&self, pi: &'a IrrepId) -> Result<&'a [i32]> {
        match &pi.label {
            Label::Torus(k) if k.len() == self.n => Ok(k),
            other => Err(Error::InvalidIrrep(format!("{other} on torus:{}", self.n))),
        }
    }

    fn angles<'a, T: Real>(&self, x: &'a GroupPoint<T>) -> &'a [T] {
        match x {
            GroupPoint::Torus(a) if a.len() == self.n => a,
            _ => panic!("point does not belong to torus:{}", self.n),
        }
    }

    pub fn character(k: Vec<i32>) -> IrrepId {
        let casimir = k.iter().map(|&v| (v as f64) * (v as f64)).sum();
        IrrepId { label: Label::Torus(k), dim: 1, casimir }
    }
}

impl CompactGroup for Torus {
    fn id(&self) -> String {
        format!("torus:{}", self.n)
    }

    fn metadata(&self) -> BackendMetadata {
        BackendMetadata {
            dimension: self.n,
            diameter: std::f64::consts::PI * (self.n as f64).sqrt(),
            chart_radius: 0.5,
            basis_size: self.n,
        }
    }

    fn irrep(&self, label: &Label) -> Result<IrrepId> {
        match label {
            Label::Torus(k) if k.len() == self.n => Ok(Torus::character(k.clone())),
            other => Err(Error::InvalidIrrep(format!("{other} on torus:{}", self.n))),
        }
    }

    fn enumerate_dual(&self, lambda_max: f64) -> Vec<IrrepId> {
        let kmax = lambda_max.max(0.0).sqrt().floor() as i32;
        let mut out = Vec::new();
        let mut k = vec![-kmax; self.n];
        loop {
            let c: i64 = k.iter().map(|&v| (v as i64) * (v as i64)).sum();
            if (c as f64) <= lambda_max {
                out.push(Torus::character(k.clone()));
            }
            let mut axis = 0;
            loop {
                if axis == self.n {
                    out.sort();
                    return out;
                }
                if k[axis] < kmax {
                    k[axis] += 1;
                    break;
                }
                k[axis] = -kmax;
                axis += 1;
            }
        }
    }

    fn trivial(&self) -> IrrepId {
        Torus::character(vec![0; self.n])
    }

    fn matrix_coeff<T: Real>(&self, pi: &IrrepId, x: &GroupPoint<T>) -> Result<CMat<T>> {
        let k = self.freq(pi)?;
        let th = self.angles(x);
        let phase = k
            .iter()
            .zip(th)
            .fold(T::zero(), |acc, (&kj, &t)| acc + re::<T>(kj as f64) * t);
        Ok(CMat::from_element(1, 1, cis(phase)))
    }

    fn infinitesimal<T: Real>(&self, pi: &IrrepId, j: usize) -> Result<CMat<T>> {
        let k = self.freq(pi)?;
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, dim: self.n });
        }
        Ok(CMat::from_element(1, 1, cplx(T::zero(), re(k[j] as f64))))
    }

    fn tensor_decompose<T: Real>(&self, tau: &IrrepId, pi: &IrrepId) -> Result<TensorDecomposition<T>> {
        let a = self.freq(tau)?;
        let b = self.freq(pi)?;
        let sum: Vec<i32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(TensorDecomposition {
            left: tau.clone(),
            right: pi.clone(),
            components: vec![Torus::character(sum)],
            intertwiner: eye(1),
        })
    }

    fn conjugate<T: Real>(&self, pi: &IrrepId) -> Result<(IrrepId, CMat<T>)> {
        let k = self.freq(pi)?;
        Ok((Torus::character(k.iter().map(|v| -v).collect()), eye(1)))
    }

    fn quadrature<T: Real>(&self, lambda: f64) -> QuadratureRule<T> {
        let kmax = lambda.max(0.0).sqrt().floor() as usize;
        let m = QUADRATURE_SAFETY_FACTOR * (2 * kmax + 1);
        QuadratureRule::torus_grid(self.n, m, lambda)
    }

    fn distance<T: Real>(&self, x: &GroupPoint<T>) -> T {
        let pi = T::pi();
        self.angles(x)
            .iter()
            .map(|&t| {
                let r = reduce_angle(t);
                let d = if r > pi { T::two_pi() - r } else { r };
                d * d
            })
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    fn fundamental_set(&self) -> Vec<IrrepId> {
        let mut out = Vec::with_capacity(2 * self.n);
        for j in 0..self.n {
            for s in [1, -1] {
                let mut k = vec![0; self.n];
                k[j] = s;
                out.push(Torus::character(k));
            }
        }
        out
    }

    fn identity<T: Real>(&self) -> GroupPoint<T> {
        GroupPoint::Torus(vec![T::zero(); self.n])
    }

    fn mul<T: Real>(&self, x: &GroupPoint<T>, y: &GroupPoint<T>) -> GroupPoint<T> {
        let (a, b) = (self.angles(x), self.angles(y));
        GroupPoint::Torus(a.iter().zip(b).map(|(&s, &t)| reduce_angle(s + t)).collect())
    }

    fn inv<T: Real>(&self, x: &GroupPoint<T>) -> GroupPoint<T> {
        GroupPoint::Torus(self.angles(x).iter().map(|&t| reduce_angle(-t)).collect())
    }

    fn exp_chart<T: Real>(&self, v: &[T]) -> GroupPoint<T> {
        assert_eq!(v.len(), self.n, "chart vector has wrong length");
        GroupPoint::Torus(v.iter().map(|&t| reduce_angle(t)).collect())
    }

    fn random_point<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> GroupPoint<T> {
        GroupPoint::Torus(
            (0..self.n)
                .map(|_| re::<T>(rng.gen::<f64>() * std::f64::consts::TAU))
                .map(reduce_angle)
                .collect(),
        )
    }
}

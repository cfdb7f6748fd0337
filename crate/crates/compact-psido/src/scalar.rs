//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::{Complex, DMatrix, RealField};

/// Real scalar type the engine is generic over (`f32` or `f64`).
///
/// Everything numerical rides on `nalgebra::RealField`; `ToPrimitive` is only
/// used to hand values to reports, which are always `f64`.
pub trait Real: RealField + Copy + num_traits::ToPrimitive {}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar.
pub type C<T> = Complex<T>;

/// Dense complex matrix.
pub type CMat<T> = DMatrix<Complex<T>>;

/// Lift an `f64` constant into `T`.
#[inline]
pub fn re<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Lift an `f64` constant into a real complex number.
#[inline]
pub fn cre<T: Real>(x: f64) -> C<T> {
    Complex::new(re(x), T::zero())
}

#[inline]
pub fn cplx<T: Real>(r: T, i: T) -> C<T> {
    Complex::new(r, i)
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn zeros<T: Real>(r: usize, c: usize) -> CMat<T> {
    CMat::from_element(r, c, C::new(T::zero(), T::zero()))
}

pub fn eye<T: Real>(n: usize) -> CMat<T> {
    CMat::identity(n, n)
}

/// Operator (spectral) norm of a small dense matrix.
pub fn op_norm<T: Real>(m: &CMat<T>) -> T {
    if m.nrows() == 0 || m.ncols() == 0 {
        return T::zero();
    }
    if m.nrows() == 1 || m.ncols() == 1 {
        return m.norm();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(T::zero(), |a, &b| if b > a { b } else { a })
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter()
        .map(|z| z.norm_sqr().sqrt())
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Convert a matrix between scalar types.
pub fn cast_mat<T: Real, U: Real>(m: &CMat<T>) -> CMat<U> {
    m.map(|z| Complex::new(re::<U>(to_f64(z.re)), re::<U>(to_f64(z.im))))
}

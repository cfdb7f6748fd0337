//! Wigner little-d matrices `d^j(β) = exp(-iβJ_y)` in the basis `m = j/2, j/2-1, …`.
//!
//! Built by coupling one spin-½ at a time (Risbo's recursion), which stays
//! well conditioned for every `β ∈ [0, π]` including the poles.

use nalgebra::DMatrix;

use crate::scalar::Real;

/// `d^J(β)` for twice-spins `J = 0..=jmax`.
pub fn wigner_d_small_all<T: Real>(jmax: u32, beta: T) -> Vec<DMatrix<T>> {
    let half = beta * nalgebra::convert::<f64, T>(0.5);
    let (c, s) = (half.cos(), half.sin());
    let mut out: Vec<DMatrix<T>> = Vec::with_capacity(jmax as usize + 1);
    out.push(DMatrix::from_element(1, 1, T::one()));
    if jmax == 0 {
        return out;
    }
    let d1 = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    out.push(d1.clone());
    for jj in 2..=jmax as usize {
        let prev = &out[jj - 1];
        let jt: T = nalgebra::convert(jj as f64);
        // (weight, index into the J-1 basis) for spin-½ component 0 (m=+½) and 1 (m=-½).
        let split = |a: usize| -> [(T, Option<usize>); 2] {
            let up = if a < jj {
                (((nalgebra::convert::<f64, T>((jj - a) as f64)) / jt).sqrt(), Some(a))
            } else {
                (T::zero(), None)
            };
            let down = if a >= 1 {
                ((nalgebra::convert::<f64, T>(a as f64) / jt).sqrt(), Some(a - 1))
            } else {
                (T::zero(), None)
            };
            [up, down]
        };
        let mut d = DMatrix::from_element(jj + 1, jj + 1, T::zero());
        for ap in 0..=jj {
            let sp = split(ap);
            for a in 0..=jj {
                let sa = split(a);
                let mut acc = T::zero();
                for (mu_p, &(wp, bp)) in sp.iter().enumerate() {
                    let Some(bp) = bp else { continue };
                    for (mu, &(w, b)) in sa.iter().enumerate() {
                        let Some(b) = b else { continue };
                        acc += wp * w * prev[(bp, b)] * d1[(mu_p, mu)];
                    }
                }
                d[(ap, a)] = acc;
            }
        }
        out.push(d);
    }
    out
}

/// `d^j(β)` for a single twice-spin `j`.
pub fn wigner_d_small<T: Real>(j: u32, beta: T) -> DMatrix<T> {
    wigner_d_small_all(j, beta).pop().expect("non-empty")
}

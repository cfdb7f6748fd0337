//! Clebsch–Gordan intertwiners for `SU(2)` in the Condon–Shortley convention.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

type Cache = Mutex<HashMap<(u32, u32), Arc<DMatrix<f64>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Real orthogonal `U` with `U^T (D^{j1} ⊗ D^{j2}) U = ⊕_J D^J`, `J = |j1-j2|, …, j1+j2`
/// ascending (twice-spins throughout).
///
/// Rows are product states `(a, i) ↦ a(j2+1) + i` with `m1 = j1/2 - a`, `m2 = j2/2 - i`;
/// columns are `|J, M⟩` with `M = J/2 - e`, blocks concatenated in ascending `J`.
/// Each top state is fixed by orthogonality to the larger `J` and the phase
/// `⟨j1/2, j1/2; j2/2, J/2 - j1/2 | J/2, J/2⟩ > 0`; the rest follow by lowering.
pub fn clebsch_gordan_block(j1: u32, j2: u32) -> Arc<DMatrix<f64>> {
    if let Some(u) = cache().lock().expect("cg cache").get(&(j1, j2)) {
        return u.clone();
    }
    let u = Arc::new(build(j1, j2));
    cache().lock().expect("cg cache").insert((j1, j2), u.clone());
    u
}

fn build(j1: u32, j2: u32) -> DMatrix<f64> {
    let (n1, n2) = (j1 as usize + 1, j2 as usize + 1);
    let dim = n1 * n2;
    let jmin = j1.abs_diff(j2);
    let jmax = j1 + j2;
    let idx = |a: usize, i: usize| a * n2 + i;

    // states[J] = columns |J, M⟩ for e = 0..=J
    let mut states: HashMap<u32, Vec<Vec<f64>>> = HashMap::new();
    let mut jj = jmax;
    loop {
        let p = ((jmax - jj) / 2) as usize;
        // product states with a + i = p span the M = J/2 subspace
        let sub: Vec<(usize, usize)> = (0..=p.min(n1 - 1))
            .filter(|&a| p - a < n2)
            .map(|a| (a, p - a))
            .collect();
        let previous: Vec<&Vec<f64>> = states
            .iter()
            .filter(|(&k, _)| k > jj)
            .map(|(&k, col)| &col[((k - jj) / 2) as usize])
            .collect();
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = -1.0;
        for &(a, i) in &sub {
            let mut v = vec![0.0; dim];
            v[idx(a, i)] = 1.0;
            for _ in 0..2 {
                for w in &previous {
                    let dot: f64 = v.iter().zip(w.iter()).map(|(x, y)| x * y).sum();
                    v.iter_mut().zip(w.iter()).for_each(|(x, y)| *x -= dot * y);
                }
            }
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nrm > best_norm {
                best_norm = nrm;
                best = Some(v);
            }
        }
        let mut top = best.expect("nonempty subspace");
        let sign = if top[idx(0, p)] < 0.0 { -1.0 } else { 1.0 };
        top.iter_mut().for_each(|x| *x *= sign / best_norm);

        let mut col = vec![top];
        for e in 0..jj as usize {
            let cur = &col[e];
            let mut next = vec![0.0; dim];
            for a in 0..n1 {
                for i in 0..n2 {
                    let v = cur[idx(a, i)];
                    if v == 0.0 {
                        continue;
                    }
                    if a + 1 < n1 {
                        let f = (((j1 as usize - a) * (a + 1)) as f64).sqrt();
                        next[idx(a + 1, i)] += f * v;
                    }
                    if i + 1 < n2 {
                        let f = (((j2 as usize - i) * (i + 1)) as f64).sqrt();
                        next[idx(a, i + 1)] += f * v;
                    }
                }
            }
            // |J, M⟩ with M = J/2 - e lowers with factor sqrt((J/2+M)(J/2-M+1)) = sqrt((J-e)(e+1))
            let f = (((jj as usize - e) * (e + 1)) as f64).sqrt();
            next.iter_mut().for_each(|x| *x /= f);
            col.push(next);
        }
        states.insert(jj, col);
        if jj < jmin + 2 {
            break;
        }
        jj -= 2;
    }

    let mut u = DMatrix::zeros(dim, dim);
    let mut offset = 0;
    let mut jj = jmin;
    while jj <= jmax {
        for (e, v) in states[&jj].iter().enumerate() {
            for r in 0..dim {
                u[(r, offset + e)] = v[r];
            }
        }
        offset += jj as usize + 1;
        jj += 2;
    }
    u
}

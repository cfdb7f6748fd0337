//! Symbol-class seminorms `‖σ‖_{S^m_{ρ,δ}, a, b}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Backend, CompactGroup, IrrepId};
use crate::scalar::{op_norm, to_f64, zeros, CMat, Real};

use super::delta::delta_word_at;
use super::SymbolField;

/// Words over the fundamental irreps of length at most `max_len`, by length then
/// lexicographically (repetition allowed).
pub fn fund_words(backend: Backend, max_len: usize) -> Vec<Vec<IrrepId>> {
    let fund = backend.fundamental_set();
    words(fund.len(), max_len).into_iter().map(|w| w.into_iter().map(|i| fund[i].clone()).collect()).collect()
}

/// Index words over `0..k` of length at most `max_len`.
pub fn words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (0..k).map(move |i| [w.clone(), vec![i]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormRow {
    pub a: usize,
    pub b: usize,
    pub value: f64,
    pub argmax_pi: String,
    pub argmax_x: usize,
    pub argmax_word: String,
    pub argmax_beta: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormReport {
    pub m: f64,
    pub rho: f64,
    pub delta: f64,
    pub a: usize,
    pub b: usize,
    pub cutoff: f64,
    /// Fibres `≤ cutoff` left out because a difference needed irreps above the symbol's cutoff.
    pub excluded: Vec<String>,
    /// One row per `(a', b') ≤ (a, b)`, each a supremum over `|α| ≤ a'`, `|β| ≤ b'`.
    pub rows: Vec<SeminormRow>,
}

impl SeminormReport {
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.rows.iter().find(|r| r.a == a && r.b == b).map(|r| r.value).unwrap_or(f64::NAN)
    }
}

struct Best {
    value: f64,
    pi: String,
    x: usize,
    word: String,
    beta: String,
}

pub fn seminorm<T: Real>(sigma: &SymbolField<T>, m: f64, rho: f64, delta: f64, a: usize, b: usize, cutoff: f64) -> Result<SeminormReport> {
    if !(1.0 >= rho && rho >= delta && delta >= 0.0) {
        return Err(Error::InvalidParameters(format!("need 1 ≥ ρ ≥ δ ≥ 0, got ρ={rho}, δ={delta}")));
    }
    let backend = sigma.backend;
    let n = backend.metadata().dimension;
    let grid = sigma.x_grid();
    let fibres: Vec<IrrepId> = sigma.irreps().into_iter().filter(|p| p.casimir <= cutoff + 1e-9).collect();
    let alphas = fund_words(backend, a);
    let betas = words(n, b);
    let mut level: BTreeMap<(usize, usize), Best> = BTreeMap::new();
    let mut excluded: Vec<String> = Vec::new();
    for beta in &betas {
        let sb = sigma.x_derivative_word(beta)?;
        let mut mode_vals: Vec<Vec<crate::scalar::C<T>>> = Vec::new();
        for x in &grid {
            let mut cache: BTreeMap<IrrepId, CMat<T>> = BTreeMap::new();
            let row = sb
                .modes
                .keys()
                .map(|(tau, i, j)| {
                    let t = cache.entry(tau.clone()).or_insert_with(|| backend.matrix_coeff(tau, x).expect("valid irrep"));
                    t[(*i, *j)]
                })
                .collect();
            mode_vals.push(row);
        }
        for alpha in &alphas {
            let results: Vec<(IrrepId, Option<(f64, usize)>)> = fibres
                .par_iter()
                .map(|pi| {
                    let mut diffs = Vec::with_capacity(sb.modes.len());
                    for f in sb.modes.values() {
                        match delta_word_at(f, alpha, pi) {
                            Ok(d) => diffs.push(d),
                            Err(_) => return (pi.clone(), None),
                        }
                    }
                    let dim = alpha.iter().map(|t| t.dim).product::<usize>() * pi.dim;
                    let w = (1.0 + pi.casimir).powf(-(m - rho * alpha.len() as f64 + delta * beta.len() as f64) / 2.0);
                    let mut best = (0.0f64, 0usize);
                    for (xi, vals) in mode_vals.iter().enumerate() {
                        let mut acc = zeros::<T>(dim, dim);
                        for (d, c) in diffs.iter().zip(vals) {
                            acc += d * *c;
                        }
                        let v = w * to_f64(op_norm(&acc));
                        if v > best.0 {
                            best = (v, xi);
                        }
                    }
                    (pi.clone(), Some(best))
                })
                .collect();
            let key = (alpha.len(), beta.len());
            for (pi, r) in results {
                match r {
                    None => {
                        let s = pi.to_string();
                        if !excluded.contains(&s) {
                            excluded.push(s);
                        }
                    }
                    Some((v, xi)) => {
                        let e = level.entry(key).or_insert(Best { value: -1.0, pi: String::new(), x: 0, word: String::new(), beta: String::new() });
                        if v > e.value {
                            *e = Best {
                                value: v,
                                pi: pi.to_string(),
                                x: xi,
                                word: alpha.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
                                beta: format!("{beta:?}"),
                            };
                        }
                    }
                }
            }
        }
    }
    let mut rows = Vec::new();
    for ai in 0..=a {
        for bi in 0..=b {
            let best = level
                .iter()
                .filter(|((la, lb), _)| *la <= ai && *lb <= bi)
                .max_by(|x, y| x.1.value.total_cmp(&y.1.value))
                .map(|(_, v)| v);
            let row = match best {
                Some(v) => SeminormRow {
                    a: ai,
                    b: bi,
                    value: v.value.max(0.0),
                    argmax_pi: v.pi.clone(),
                    argmax_x: v.x,
                    argmax_word: v.word.clone(),
                    argmax_beta: v.beta.clone(),
                },
                None => SeminormRow { a: ai, b: bi, value: 0.0, argmax_pi: String::new(), argmax_x: 0, argmax_word: String::new(), argmax_beta: String::new() },
            };
            rows.push(row);
        }
    }
    Ok(SeminormReport { m, rho, delta, a, b, cutoff, excluded, rows })
}

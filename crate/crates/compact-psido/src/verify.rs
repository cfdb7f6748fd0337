//! Verification procedures: each returns a [`Report`] with raw rows and the checks
//! it was judged by. [`criterion`] runs the desk-scale configuration of each one.

use std::collections::BTreeMap;

use nalgebra::ComplexField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::calculus::{adjoint, compose, expansion_remainder_adjoint, expansion_remainder_compose, op_apply, sobolev_opnorm, sup_x_norms, OperatorMatrix};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier::{forward_fourier_samples, BandlimitedFunction};
use crate::groups::{Backend, CompactGroup, GroupPoint, Label, Torus};
use crate::multipliers::{bilinear_check, dyadic_partition, heat_kernel_report, kernel_decay_report, linear_fit, multiplier_decay_report, DecayReport, MultiplierProfile};
use crate::scalar::{eye, max_abs, zeros, CMat, C};
use crate::symbols::{delta_q, delta_tau, delta_word, fund_words, seminorm, DifferenceFamily, FamilyVariant, SymbolField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub kind: BoundKind,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, bound, kind: BoundKind::AtMost, passed: value <= bound }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, bound, kind: BoundKind::AtLeast, passed: value >= bound }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, bound: 1.0, kind: BoundKind::AtLeast, passed: ok }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Report { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    /// Append another report's rows (prefixed by its title), checks and notes.
    /// The first absorbed report fixes the column names.
    pub fn absorb(&mut self, other: Report) {
        if self.rows.is_empty() {
            self.columns = std::iter::once("part".to_string()).chain(other.columns.iter().cloned()).collect();
        }
        for r in other.rows {
            let mut cells = vec![other.title.clone()];
            cells.extend(r);
            self.rows.push(cells);
        }
        for mut c in other.checks {
            c.name = format!("{}: {}", other.title, c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{}: {n}", other.title)));
    }

    /// One-line summary per check.
    pub fn summary(&self) -> String {
        let mut s = format!("{} [{}]\n", self.title, if self.passed() { "pass" } else { "FAIL" });
        for c in &self.checks {
            let op = if c.kind == BoundKind::AtMost { "<=" } else { ">=" };
            s += &format!("  {} {}: {:.3e} {op} {:.3e}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value, c.bound);
        }
        s
    }
}

impl From<DecayReport> for Report {
    fn from(d: DecayReport) -> Self {
        let mut r = Report::new(d.name.clone(), &d.columns.iter().map(String::as_str).collect::<Vec<_>>());
        r.rows = d.rows.iter().map(|row| row.iter().map(|v| fmt(*v)).collect()).collect();
        for f in &d.fits {
            let name = format!("slope {} (±{:.2e}, {} pts)", f.label, f.width, f.points);
            r.checks.push(if f.upper { Check::at_most(name, f.slope, f.bound) } else { Check::at_least(name, f.slope, f.bound) });
        }
        for (name, v, bound, ok) in &d.checks {
            let mut c = Check::at_most(name.clone(), *v, *bound);
            c.passed = *ok;
            r.checks.push(c);
        }
        r.notes = d.notes.clone();
        r.notes.extend(d.thresholds.iter().map(|(k, v)| format!("threshold {k} = {v}")));
        r
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `⟨f, g⟩ = ∫ f ḡ` through Plancherel.
pub fn inner(f: &BandlimitedFunction<f64>, g: &BandlimitedFunction<f64>) -> C<f64> {
    let mut acc = C::new(0.0, 0.0);
    for (pi, a) in &f.coeffs.entries {
        if let Some(b) = g.coeffs.get(pi) {
            acc += (a * b.adjoint()).trace() * pi.dim as f64;
        }
    }
    acc
}

/// `Σ_k a_k(x) s_k(π)` with random `a_k` of degree `xdeg` and order-one fibres
/// `(1+λ)^{1/2}`, `π(X_1)` (and `π(X_3)` on SU(2)).
pub fn order_one_symbol<R: Rng + ?Sized>(b: Backend, xdeg: usize, cutoff: f64, rng: &mut R) -> SymbolField<f64> {
    let xl = b.casimir_for_degree(xdeg);
    let mut terms = vec![
        (BandlimitedFunction::random(b, xl, rng), SpectralField::scalar_fn(b, cutoff, |l| (1.0 + l).sqrt())),
        (BandlimitedFunction::random(b, xl, rng), SpectralField::generator(b, cutoff, 0).expect("first generator")),
    ];
    if !b.is_torus() {
        terms.push((BandlimitedFunction::random(b, xl, rng), SpectralField::generator(b, cutoff, 2).expect("third generator")));
    }
    SymbolField::from_terms(&terms)
}

fn sign_field(cutoff: f64) -> SpectralField<f64> {
    SpectralField::from_fn(Backend::torus(1), cutoff, |pi| {
        let k = match &pi.label {
            Label::Torus(k) => k[0] as f64,
            _ => unreachable!(),
        };
        CMat::from_element(1, 1, C::new(k / (1.0 + k * k).sqrt(), 0.0))
    })
}

/// An order-zero symbol on T^1: `a₀(x) + a₁(x)·k(1+k²)^{−1/2} + a₂(x)·e^{−k²/50}`
/// with random `a_i` of degree `xdeg`.
pub fn order_zero_torus_symbol<R: Rng + ?Sized>(xdeg: usize, cutoff: f64, rng: &mut R) -> SymbolField<f64> {
    let b = Backend::torus(1);
    let xl = b.casimir_for_degree(xdeg);
    SymbolField::from_terms(&[
        (BandlimitedFunction::random(b, xl, rng), SpectralField::identity(b, cutoff)),
        (BandlimitedFunction::random(b, xl, rng), sign_field(cutoff)),
        (BandlimitedFunction::random(b, xl, rng), SpectralField::scalar_fn(b, cutoff, |l| (-l / 50.0).exp())),
    ])
}

/// `Σ c e^{ikx}` on T^1.
fn trig(terms: &[(i32, C<f64>)]) -> BandlimitedFunction<f64> {
    let b = Backend::torus(1);
    terms.iter().fold(BandlimitedFunction::zero(b, 0.0), |f, &(k, c)| {
        f.add(&BandlimitedFunction::matrix_coefficient(b, &Torus::character(vec![k]), 0, 0).scale(c))
    })
}

/// `(1.5 + cos x) + sin x·k(1+k²)^{−1/2} + cos 2x·e^{−k²/50}` on T^1.
pub fn explicit_order_zero_symbol(cutoff: f64) -> SymbolField<f64> {
    let b = Backend::torus(1);
    let half = C::new(0.5, 0.0);
    let ihalf = C::new(0.0, 0.5);
    SymbolField::from_terms(&[
        (trig(&[(0, C::new(1.5, 0.0)), (1, half), (-1, half)]), SpectralField::identity(b, cutoff)),
        (trig(&[(1, -ihalf), (-1, ihalf)]), sign_field(cutoff)),
        (trig(&[(2, half), (-2, half)]), SpectralField::scalar_fn(b, cutoff, |l| (-l / 50.0).exp())),
    ])
}

fn fundamental_family(b: Backend) -> Result<DifferenceFamily<f64>> {
    DifferenceFamily::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients)
}

fn max_coeff_diff(f: &SpectralField<f64>, g: &SpectralField<f64>) -> f64 {
    let mut worst = 0.0f64;
    for (pi, a) in &f.entries {
        let z = zeros::<f64>(pi.dim, pi.dim);
        worst = worst.max(max_abs(&(a - g.get(pi).unwrap_or(&z))));
    }
    for (pi, b) in &g.entries {
        if f.get(pi).is_none() {
            worst = worst.max(max_abs(b));
        }
    }
    worst
}

/// Sample → transform → compare, and quadrature `L²` against Plancherel, for
/// random band-limited functions of the given degree.
pub fn fourier_check(b: Backend, degree: usize, trials: usize, seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let lam = b.casimir_for_degree(degree);
    let rule = b.quadrature::<f64>(lam);
    let mut rep = Report::new(format!("fourier {} degree {degree}", b.id()), &["trial", "roundtrip", "plancherel_rel"]);
    let (mut worst_rt, mut worst_pl) = (0.0f64, 0.0f64);
    for t in 0..trials {
        let f = BandlimitedFunction::<f64>::random(b, lam, &mut rng);
        let vals = f.evaluate_on_rule(&rule);
        let back = forward_fourier_samples(&vals, lam, &rule)?;
        let rt = max_coeff_diff(&back.coeffs, &f.coeffs);
        let l2: f64 = vals.iter().zip(&rule.weights).map(|(v, w)| v.norm_sqr() * w).sum();
        let pl = (l2 - f.plancherel_normsq()).abs() / l2;
        rep.row(vec![t.to_string(), fmt(rt), fmt(pl)]);
        worst_rt = worst_rt.max(rt);
        worst_pl = worst_pl.max(pl);
    }
    rep.notes.push(format!("{} quadrature nodes, {} irreps", rule.len(), b.enumerate_dual(lam).len()));
    rep.checks.push(Check::at_most("roundtrip residual", worst_rt, 1e-10));
    rep.checks.push(Check::at_most("plancherel relative residual", worst_pl, 1e-10));
    Ok(rep)
}

/// Unitarity of the CG intertwiners and block-diagonalisation of `τ⊗π` on random points.
pub fn cg_check(max_j: u32, points: usize, seed: u64) -> Result<Report> {
    let b = Backend::su2();
    let mut rng = rng(seed);
    let pts: Vec<GroupPoint<f64>> = (0..points).map(|_| b.random_point(&mut rng)).collect();
    let mut rep = Report::new(format!("clebsch-gordan j <= {max_j}"), &["j1", "j2", "unitarity", "block_residual"]);
    let (mut wu, mut wb) = (0.0f64, 0.0f64);
    for j1 in 0..=max_j {
        for j2 in 0..=max_j {
            let (tau, pi) = (b.irrep(&Label::Spin(j1))?, b.irrep(&Label::Spin(j2))?);
            let dec = b.tensor_decompose::<f64>(&tau, &pi)?;
            let u = &dec.intertwiner;
            let n = u.nrows();
            let unit = max_abs(&(u.adjoint() * u - eye::<f64>(n)));
            let mut blk = 0.0f64;
            for x in &pts {
                let big = b.matrix_coeff(&tau, x)?.kronecker(&b.matrix_coeff(&pi, x)?);
                let mut expect = zeros::<f64>(n, n);
                for (c, off) in dec.components.iter().zip(dec.offsets()) {
                    expect.view_mut((off, off), (c.dim, c.dim)).copy_from(&b.matrix_coeff(c, x)?);
                }
                blk = blk.max(max_abs(&(u.adjoint() * big * u - expect)));
            }
            rep.row(vec![j1.to_string(), j2.to_string(), fmt(unit), fmt(blk)]);
            wu = wu.max(unit);
            wb = wb.max(blk);
        }
    }
    rep.checks.push(Check::at_most("intertwiner unitarity", wu, 1e-12));
    rep.checks.push(Check::at_most("block-diagonalisation residual", wb, 1e-10));
    Ok(rep)
}

/// RT differences from the fundamental family against the intrinsic `Δ_τ`.
/// On the torus `Δ_{q}` with `q = e^{−ix}−1` is compared with `Δ_{e_1}`; on SU(2)
/// the four `Δ_{q_ij}` are assembled into `2×2` blocks and compared with `Δ_{1/2}`.
pub fn difference_equivalence(b: Backend, degree: usize, seed: u64) -> Result<Report> {
    let lam = b.casimir_for_degree(degree);
    let fam = fundamental_family(b)?;
    let mut rep = Report::new(format!("difference equivalence {}", b.id()), &["symbol", "residual"]);
    let mut rng = rng(seed);
    let mut symbols: Vec<(&str, SpectralField<f64>)> = vec![
        ("identity", SpectralField::identity(b, lam)),
        ("lambda", SpectralField::scalar_fn(b, lam, |l| l)),
        ("heat(0.1)", SpectralField::scalar_fn(b, lam, |l| (-0.1 * l).exp())),
        ("random", BandlimitedFunction::random(b, lam, &mut rng).coeffs),
    ];
    if !b.is_torus() {
        symbols.push(("pi(X3)", SpectralField::generator(b, lam, 2)?));
    }
    let tau = b.fundamental_set()[0].clone();
    let (tol, name) = if b.is_torus() { (1e-12, "torus lattice difference") } else { (1e-10, "block-assembled RT differences") };
    let mut worst = 0.0f64;
    for (label, s) in &symbols {
        let dt = delta_tau(s, &tau);
        let mut r = 0.0f64;
        if b.is_torus() {
            let rt = delta_q(s, &fam.functions[0])?;
            for (pi, m) in &rt.entries {
                r = r.max(max_abs(&(m - dt.get(pi).expect("interior fibre"))));
            }
        } else {
            let blocks: Vec<SpectralField<f64>> = fam.functions.iter().map(|q| delta_q(s, q)).collect::<Result<_>>()?;
            for (pi, m) in &dt.entries {
                let Some(_) = blocks[0].get(pi) else { continue };
                let d = pi.dim;
                let mut assembled = zeros::<f64>(2 * d, 2 * d);
                for i in 0..2 {
                    for j in 0..2 {
                        assembled.view_mut((i * d, j * d), (d, d)).copy_from(blocks[2 * i + j].get(pi).expect("same interior"));
                    }
                }
                r = r.max(max_abs(&(assembled - m)));
            }
        }
        rep.row(vec![label.to_string(), fmt(r)]);
        worst = worst.max(r);
    }
    rep.checks.push(Check::at_most(name, worst, tol));
    Ok(rep)
}

/// Leibniz identity of the fundamental family on random pairs.
pub fn leibniz_check(b: Backend, pairs: usize, seed: u64) -> Result<Report> {
    let fam = fundamental_family(b)?;
    let mut rng = rng(seed);
    let r = fam.leibniz_residual(pairs, &mut rng).ok_or_else(|| Error::NotAdapted("family has no Leibniz data".into()))?;
    let mut rep = Report::new(format!("leibniz {}", b.id()), &["pairs", "residual"]);
    rep.row(vec![pairs.to_string(), fmt(r)]);
    rep.checks.push(Check::at_most("leibniz residual", r, 1e-10));
    Ok(rep)
}

/// Second differences of `π(X_j)` and the cutoff-independence of `sup_π‖Δ_τ π(X_j)‖`.
pub fn second_difference_check(b: Backend, degrees: &[usize]) -> Result<Report> {
    let mut rep = Report::new(format!("second differences {}", b.id()), &["degree", "generator", "second_diff", "first_diff_sup"]);
    let mut worst2 = 0.0f64;
    let mut drift = 0.0f64;
    for j in 0..b.metadata().dimension {
        let mut sups = vec![];
        for &deg in degrees {
            let g = SpectralField::<f64>::generator(b, b.casimir_for_degree(deg), j)?;
            let mut w2 = 0.0f64;
            for w in fund_words(b, 2).into_iter().filter(|w| w.len() == 2) {
                w2 = w2.max(delta_word(&g, &w).max_abs());
            }
            let s1 = b.fundamental_set().iter().map(|tau| delta_tau(&g, tau).sup_op_norm()).fold(0.0, f64::max);
            rep.row(vec![deg.to_string(), j.to_string(), fmt(w2), fmt(s1)]);
            worst2 = worst2.max(w2);
            sups.push(s1);
        }
        let top = sups.iter().copied().fold(0.0, f64::max);
        let bot = sups.iter().copied().fold(f64::INFINITY, f64::min);
        drift = drift.max((top - bot) / top);
    }
    rep.checks.push(Check::at_most("second differences of generators", worst2, 1e-12));
    rep.checks.push(Check::at_most("first-difference bound drift across cutoffs", drift, 0.02));
    Ok(rep)
}

/// `symbol_of(Op(Σ a_α X^α)) = Σ a_α π(X)^α` for random `a_α` up to second order.
pub fn quantization_roundtrip(b: Backend, degree: usize, seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let lam = b.casimir_for_degree(degree);
    let xl = b.casimir_for_degree(1);
    let n = b.metadata().dimension;
    let mut rep = Report::new(format!("quantization roundtrip {} degree {degree}", b.id()), &["operator", "residual"]);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    words.extend((0..n).map(|j| vec![j]));
    words.extend((0..n).flat_map(|i| (0..n).map(move |j| vec![i, j])));
    let mut total = OperatorMatrix::<f64>::zeros(b, lam);
    let mut terms = vec![];
    let mut worst = 0.0f64;
    for w in &words {
        let a = BandlimitedFunction::<f64>::random(b, xl, &mut rng);
        let mut op = OperatorMatrix::multiplication(&a, lam)?;
        let mut fibre = SpectralField::identity(b, lam);
        for &j in w {
            op = op.matmul(&OperatorMatrix::derivative(b, j, lam)?)?;
            fibre = fibre.matmul(&SpectralField::generator(b, lam, j)?);
        }
        total = total.add(&op)?;
        terms.push((a.clone(), fibre.clone()));
        let got = op.symbol_of(xl)?;
        let r = got.max_abs_diff(&SymbolField::from_terms(&[(a, fibre)]), got.cutoff);
        rep.row(vec![format!("a X^{w:?}"), fmt(r)]);
        worst = worst.max(r);
    }
    let got = total.symbol_of(xl)?;
    let r = got.max_abs_diff(&SymbolField::from_terms(&terms), got.cutoff);
    rep.row(vec!["sum".into(), fmt(r)]);
    worst = worst.max(r);
    rep.checks.push(Check::at_most("differential operator symbols", worst, 1e-10));
    Ok(rep)
}

/// Pairing `⟨Op(σ)φ, ψ⟩ = ⟨φ, Op(σ^{(*)})ψ⟩`, associativity and `(σ₁∘σ₂)* = σ₂*∘σ₁*`
/// for random order-one symbols at the given degree.
pub fn exact_calculus(b: Backend, degree: usize, seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let lam = b.casimir_for_degree(degree);
    let mut rep = Report::new(format!("exact calculus {} degree {degree}", b.id()), &["identity", "residual", "scale"]);
    let s1 = order_one_symbol(b, 1, lam, &mut rng);
    let s2 = order_one_symbol(b, 1, lam, &mut rng);
    let s3 = order_one_symbol(b, 1, lam, &mut rng);

    let sa = adjoint(&s1)?;
    let fdeg = b.casimir_for_degree(degree / 2);
    let mut pair = 0.0f64;
    let mut scale = 0.0f64;
    for _ in 0..5 {
        let phi = BandlimitedFunction::<f64>::random(b, fdeg, &mut rng);
        let psi = BandlimitedFunction::<f64>::random(b, fdeg, &mut rng);
        let lhs = inner(&op_apply(&s1, &phi)?, &psi);
        let rhs = inner(&phi, &op_apply(&sa, &psi)?);
        pair = pair.max((lhs - rhs).modulus());
        scale = scale.max(lhs.modulus());
    }
    rep.row(vec!["pairing".into(), fmt(pair), fmt(scale)]);

    let s12 = compose(&s1, &s2)?;
    let l = compose(&s12, &s3)?;
    let r = compose(&s1, &compose(&s2, &s3)?)?;
    let cut = l.cutoff.min(r.cutoff);
    let assoc = l.max_abs_diff(&r, cut);
    rep.row(vec!["associativity".into(), fmt(assoc), fmt(l.max_abs(cut))]);
    rep.notes.push(format!("associativity compared on lambda <= {cut}"));

    let lhs = adjoint(&s12)?;
    let rhs = compose(&adjoint(&s2)?, &sa)?;
    let cut = lhs.cutoff.min(rhs.cutoff);
    let anti = lhs.max_abs_diff(&rhs, cut);
    rep.row(vec!["anti-homomorphism".into(), fmt(anti), fmt(lhs.max_abs(cut))]);
    rep.notes.push(format!("anti-homomorphism compared on lambda <= {cut}"));

    rep.checks.push(Check::at_most("pairing", pair, 1e-9));
    rep.checks.push(Check::at_most("associativity", assoc, 1e-9));
    rep.checks.push(Check::at_most("anti-homomorphism", anti, 1e-9));
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expansion {
    Compose,
    Adjoint,
}

/// Measured order of the remainder after `N` terms of the composition or adjoint
/// expansion for random order-one symbols. At each cutoff, the remainder's size is
/// the largest `sup_x‖R(x,π)‖` over fibres in the top half of its degree range; the
/// order is the slope of its log against `log(1+λ_top)^{1/2}`.
/// Passes iff the order is at most `m − 0.8·N` (`m = 2` for compose, `1` for adjoint).
pub fn expansion_order(b: Backend, which: Expansion, degrees: &[usize], orders: &[usize], seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let fam = fundamental_family(b)?;
    let top_deg = degrees.iter().copied().max().unwrap_or(0) + 8;
    let big = b.casimir_for_degree(top_deg);
    let s1 = order_one_symbol(b, 1, big, &mut rng);
    let s2 = order_one_symbol(b, 1, big, &mut rng);
    let (name, m) = match which {
        Expansion::Compose => ("compose", 2.0),
        Expansion::Adjoint => ("adjoint", 1.0),
    };
    let mut rep = Report::new(format!("{name} expansion {}", b.id()), &["N", "degree", "lambda_top", "remainder"]);
    for &n in orders {
        let (mut xs, mut ys) = (vec![], vec![]);
        for &deg in degrees {
            let cut = b.casimir_for_degree(deg);
            let r = match which {
                Expansion::Compose => expansion_remainder_compose(&s1.restrict(cut), &s2.restrict(cut), n, &fam)?,
                Expansion::Adjoint => expansion_remainder_adjoint(&s1.restrict(cut), n, &fam)?,
            };
            let norms = sup_x_norms(&r);
            let top = norms.keys().map(|p| b.degree(p)).fold(0.0, f64::max);
            let lam_top = norms.keys().filter(|p| b.degree(p) == top).map(|p| p.casimir).fold(0.0, f64::max);
            let size = norms.iter().filter(|(p, _)| b.degree(p) >= top / 2.0).map(|(_, v)| *v).fold(0.0, f64::max);
            rep.row(vec![n.to_string(), deg.to_string(), fmt(lam_top), fmt(size)]);
            xs.push((1.0 + lam_top).sqrt().ln());
            ys.push(size.max(1e-300).ln());
        }
        let (slope, _, width) = linear_fit(&xs, &ys);
        rep.checks.push(Check::at_most(format!("order after N={n} (±{width:.2})"), slope, m - 0.8 * n as f64));
    }
    Ok(rep)
}

/// Which multiplier a decay sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplier {
    Heat,
    Bessel,
    Bump,
}

impl Multiplier {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "heat" => Ok(Multiplier::Heat),
            "bessel" => Ok(Multiplier::Bessel),
            "bump" => Ok(Multiplier::Bump),
            _ => Err(Error::InvalidParameters(format!("unknown multiplier {s}"))),
        }
    }

    /// Profile, order `m`, and default degree grid. The bump is the dyadic piece
    /// whose support is resolved by the lattice already at `t = 1`, and the grid
    /// covers its support at `t = 1/32`.
    pub fn setup(self, b: Backend) -> (MultiplierProfile, f64, Vec<usize>) {
        let torus = b.is_torus();
        match self {
            Multiplier::Heat => (MultiplierProfile::heat(), 0.0, if torus { vec![32, 64, 128, 256] } else { vec![16, 24, 32, 48] }),
            Multiplier::Bessel => (MultiplierProfile::bessel(2.0), -2.0, if torus { vec![32, 64, 128, 256] } else { vec![16, 24, 32, 48] }),
            Multiplier::Bump => {
                if torus {
                    (dyadic_partition(10), 0.0, vec![184, 200, 224, 256])
                } else {
                    (dyadic_partition(8), 0.0, vec![184, 192, 200, 208])
                }
            }
        }
    }
}

pub const T_GRID: [f64; 6] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125];

pub fn multiplier_decay(b: Backend, which: Multiplier, a_max: usize, degrees: Option<&[usize]>) -> Result<Report> {
    let (f, m, default) = which.setup(b);
    let fam = fundamental_family(b)?;
    let degrees = degrees.map(|d| d.to_vec()).unwrap_or(default);
    Ok(multiplier_decay_report(&f, m, a_max, &fam, &T_GRID, &degrees)?.into())
}

/// Orders covering the three regimes `n+m > 0`, `= 0`, `< 0`.
pub fn kernel_orders(b: Backend) -> Vec<f64> {
    match b.metadata().dimension {
        1 => vec![0.5, -1.0, -3.0],
        2 => vec![0.5, -2.0, -4.0],
        _ => vec![-2.0, -3.0, -6.0],
    }
}

pub fn kernel_degrees(b: Backend) -> Vec<usize> {
    match b.metadata().dimension {
        1 => vec![32, 64, 128, 256],
        2 => vec![16, 24, 32, 48],
        _ => vec![24, 32, 48, 64],
    }
}

pub fn kernel_decay(b: Backend, orders: &[f64], degrees: &[usize]) -> Result<Report> {
    let mut rep = Report::new(format!("kernel decay {}", b.id()), &[]);
    for &m in orders {
        rep.absorb(kernel_decay_report(b, m, 1.0, degrees)?.into());
    }
    Ok(rep)
}

/// `L²` norms of `Op(σ)` for [`explicit_order_zero_symbol`] across cutoffs (a random
/// order-zero symbol is reported alongside without a check), and
/// `‖(1+λ)^{m/2}‖_{H^s → H^{s−m}} = 1` on both backends.
pub fn sobolev_sweep(degrees: &[usize], seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let b = Backend::torus(1);
    let mut rep = Report::new("sobolev boundedness", &["case", "degree", "norm"]);
    let top = b.casimir_for_degree(degrees.iter().copied().max().unwrap_or(0));
    let l2_norms = |sigma: &SymbolField<f64>| -> Result<Vec<f64>> {
        degrees
            .iter()
            .map(|&k| {
                let cut = b.casimir_for_degree(k);
                Ok(sobolev_opnorm(&OperatorMatrix::of_symbol(&sigma.restrict(cut), cut)?, 0.0, 0.0))
            })
            .collect()
    };
    let variation = |v: &[f64]| {
        let hi = v.iter().copied().fold(0.0, f64::max);
        (hi - v.iter().copied().fold(f64::INFINITY, f64::min)) / hi
    };
    let fixed = l2_norms(&explicit_order_zero_symbol(top))?;
    let random = l2_norms(&order_zero_torus_symbol(2, top, &mut rng))?;
    for (k, (f, r)) in degrees.iter().zip(fixed.iter().zip(&random)) {
        rep.row(vec!["order-zero L2".into(), k.to_string(), fmt(*f)]);
        rep.row(vec!["random order-zero L2 (diagnostic)".into(), k.to_string(), fmt(*r)]);
    }
    rep.checks.push(Check::at_most("L2 norm variation across cutoffs", variation(&fixed), 0.05));
    rep.notes.push(format!(
        "random order-zero symbol varies by {:.2e}; finite sections approach the norm from below",
        variation(&random)
    ));
    let mut worst = 0.0f64;
    for (bb, deg) in [(Backend::torus(1), 32usize), (Backend::su2(), 12)] {
        let cut = bb.casimir_for_degree(deg);
        for m in [-1.0, 1.0, 1.5] {
            for s in [-1.0, 0.0, 0.7] {
                let t = OperatorMatrix::spectral(&SpectralField::scalar_fn(bb, cut, |l| (1.0 + l).powf(m / 2.0)), cut)?;
                let nrm = sobolev_opnorm(&t, s, s - m);
                rep.row(vec![format!("bessel {} m={m} s={s}", bb.id()), deg.to_string(), fmt(nrm)]);
                worst = worst.max((nrm - 1.0).abs());
            }
        }
    }
    rep.checks.push(Check::at_most("spectral multiplier H^s -> H^(s-m) norm minus 1", worst, 1e-8));
    Ok(rep)
}

/// Haar-random unitary of size `n` (QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat<f64> {
    let g = CMat::from_fn(n, n, |_, _| C::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.modulus() > 0.0 { d / C::new(d.modulus(), 0.0) } else { C::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// Norms `‖L_Q^α M_X^β T‖_{H^{−|α|} → L²}` on T^1 for `|α|, |β| ≤ 2`, across cutoffs,
/// for order-zero `T = Op(σ)` and for a Haar-random unitary on the truncated basis.
/// Operators live at a working cutoff `K + 6` and the commutators are restricted
/// to inputs of degree `≤ K`, where every product stays inside the band.
pub fn commutator_test(degrees: &[usize], seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let b = Backend::torus(1);
    let fam = fundamental_family(b)?;
    let xdeg = 2;
    let pad = xdeg + 4;
    let top = b.casimir_for_degree(degrees.iter().copied().max().unwrap_or(0) + pad);
    let sigma = order_zero_torus_symbol(xdeg, top, &mut rng);
    let multiplier = SymbolField::invariant(order_zero_torus_symbol(0, top, &mut rng).evaluate(&b.identity()));
    let suite = [("order-zero symbol", sigma), ("order-zero multiplier", multiplier)];
    let alphas: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]];
    let commutators = |t: &OperatorMatrix<f64>, k: usize| -> Result<Vec<((usize, usize), f64)>> {
        let mut out = vec![];
        let mut tb = t.clone();
        for beta in 0..=2usize {
            if beta > 0 {
                tb = tb.commutator_mx(0)?;
            }
            for (ai, alpha) in alphas.iter().enumerate() {
                let mut ta = tb.clone();
                for &q in alpha {
                    ta = ta.commutator_lq(&fam.functions[q])?;
                }
                let ta = ta.project_columns(b.casimir_for_degree(k));
                out.push(((ai, beta), sobolev_opnorm(&ta, -(alpha.len() as f64), 0.0)));
            }
        }
        Ok(out)
    };
    let mut rep = Report::new("commutator characterisation on torus:1", &["operator", "alpha", "beta", "degree", "norm"]);
    for (name, sigma) in &suite {
        let mut per: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        for &k in degrees {
            let work = b.casimir_for_degree(k + pad);
            let t = OperatorMatrix::of_symbol(&sigma.restrict(work), work)?;
            for (key, v) in commutators(&t, k)? {
                rep.row(vec![name.to_string(), format!("{:?}", alphas[key.0]), key.1.to_string(), k.to_string(), fmt(v)]);
                per.entry(key).or_default().push(v);
            }
        }
        let mut drift = 0.0f64;
        for vals in per.values() {
            let hi = vals.iter().copied().fold(0.0, f64::max);
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            if hi > 1e-12 {
                drift = drift.max((hi - lo) / hi);
            }
        }
        rep.checks.push(Check::at_most(format!("{name}: commutator norm drift"), drift, 0.05));
    }
    let mut per: BTreeMap<(usize, usize), Vec<(f64, f64)>> = BTreeMap::new();
    for &k in degrees {
        let work = b.casimir_for_degree(k + pad);
        let mut t = OperatorMatrix::<f64>::zeros(b, work);
        let n = t.dim();
        t.matrix = haar_unitary(n, &mut rng);
        for (key, v) in commutators(&t, k)? {
            rep.row(vec!["haar unitary".into(), format!("{:?}", alphas[key.0]), key.1.to_string(), k.to_string(), fmt(v)]);
            per.entry(key).or_default().push(((b.casimir_for_degree(k)).ln(), v.max(1e-300).ln()));
        }
    }
    let mut best = f64::NEG_INFINITY;
    for pts in per.values() {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
        best = best.max(linear_fit(&xs, &ys).0);
    }
    rep.checks.push(Check::at_least("haar unitary: largest commutator growth slope", best, 0.3));
    Ok(rep)
}

/// The bilinear estimate for pairs of twice-spins.
pub fn bilinear(pairs: &[(u32, u32)], trials: usize, seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let mut rep = Report::new("bilinear estimate on su2", &[]);
    for &(j1, j2) in pairs {
        rep.absorb(bilinear_check(j1, j2, -0.8, 1.6, trials, &mut rng)?.into());
    }
    Ok(rep)
}

pub const BILINEAR_PAIRS: [(u32, u32); 5] = [(2, 8), (2, 4), (1, 3), (4, 6), (3, 8)];

/// Seminorm table of a named test symbol.
pub fn seminorm_scan(b: Backend, kind: &str, m: f64, a: usize, bb: usize, degree: usize, seed: u64) -> Result<Report> {
    let mut rng = rng(seed);
    let cut = b.casimir_for_degree(degree);
    let sigma = match kind {
        "order-one" => order_one_symbol(b, 1, cut, &mut rng),
        "bessel" => SymbolField::invariant(SpectralField::scalar_fn(b, cut, move |l| (1.0 + l).powf(m / 2.0))),
        "heat" => SymbolField::invariant(SpectralField::scalar_fn(b, cut, |l| (-0.1 * l).exp())),
        _ => return Err(Error::InvalidParameters(format!("unknown symbol {kind}"))),
    };
    let r = seminorm(&sigma, m, 1.0, 0.0, a, bb, cut)?;
    let mut rep = Report::new(format!("seminorm {kind} {} m={m}", b.id()), &["a", "b", "value", "argmax_pi", "argmax_word"]);
    for row in &r.rows {
        rep.row(vec![row.a.to_string(), row.b.to_string(), fmt(row.value), row.argmax_pi.clone(), row.argmax_word.clone()]);
    }
    let v = r.value(a, bb);
    rep.checks.push(Check::at_most("seminorm finite", v, f64::MAX));
    if !r.excluded.is_empty() {
        rep.notes.push(format!("{} fibres excluded near the cutoff", r.excluded.len()));
    }
    Ok(rep)
}

pub fn heat_kernel_bound() -> Result<Report> {
    Ok(heat_kernel_report(&[0.01, 0.03, 0.1, 0.3, 1.0], &[4.5, 5.0, 6.0, 8.0, 16.0])?.into())
}

pub const CRITERIA: [&str; 13] = [
    "plancherel and inversion",
    "clebsch-gordan intertwiners",
    "difference-operator equivalence",
    "leibniz identity",
    "second differences",
    "quantization of differential operators",
    "exact calculus",
    "expansion order",
    "multiplier decay",
    "kernel decay",
    "sobolev boundedness",
    "commutator characterisation",
    "bilinear estimate",
];

fn merge(title: &str, parts: Vec<Report>) -> Report {
    let mut rep = Report::new(title, &[]);
    for p in parts {
        rep.absorb(p);
    }
    rep
}

/// Run acceptance criterion `n` (1-based) at its desk-scale configuration.
pub fn criterion(n: usize, seed: u64) -> Result<Report> {
    let t1 = Backend::torus(1);
    let t2 = Backend::torus(2);
    let su2 = Backend::su2();
    let title = CRITERIA.get(n.wrapping_sub(1)).ok_or_else(|| Error::InvalidParameters(format!("no criterion {n}")))?;
    let parts = match n {
        1 => vec![fourier_check(t1, 64, 3, seed)?, fourier_check(t2, 64, 2, seed)?, fourier_check(su2, 16, 3, seed)?],
        2 => vec![cg_check(8, 20, seed)?],
        3 => vec![difference_equivalence(t1, 64, seed)?, difference_equivalence(su2, 16, seed)?],
        4 => vec![leibniz_check(t1, 100, seed)?, leibniz_check(t2, 100, seed)?, leibniz_check(su2, 100, seed)?],
        5 => vec![second_difference_check(t1, &[16, 32, 64])?, second_difference_check(t2, &[8, 16, 24])?, second_difference_check(su2, &[8, 16, 24])?],
        6 => vec![quantization_roundtrip(t1, 16, seed)?, quantization_roundtrip(su2, 8, seed)?],
        7 => vec![exact_calculus(t1, 64, seed)?, exact_calculus(su2, 32, seed)?],
        8 => vec![
            expansion_order(t1, Expansion::Compose, &[32, 64, 128], &[1, 2], seed)?,
            expansion_order(t1, Expansion::Adjoint, &[32, 64, 128], &[1, 2], seed)?,
            expansion_order(su2, Expansion::Compose, &[8, 12, 16], &[1, 2], seed)?,
            expansion_order(su2, Expansion::Adjoint, &[8, 12, 16], &[1, 2], seed)?,
        ],
        9 => {
            let mut v = vec![];
            for b in [t1, su2] {
                for f in [Multiplier::Heat, Multiplier::Bessel, Multiplier::Bump] {
                    v.push(multiplier_decay(b, f, 2, None)?);
                }
            }
            v
        }
        10 => [t1, su2].iter().map(|&b| kernel_decay(b, &kernel_orders(b), &kernel_degrees(b))).collect::<Result<_>>()?,
        11 => vec![sobolev_sweep(&[16, 32, 64], seed)?],
        12 => vec![commutator_test(&[32, 64, 128], seed)?],
        13 => vec![bilinear(&BILINEAR_PAIRS, 100, seed)?],
        _ => unreachable!(),
    };
    Ok(merge(&format!("criterion {n}: {title}"), parts))
}

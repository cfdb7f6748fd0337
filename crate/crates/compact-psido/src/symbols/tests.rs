use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::groups::{Su2, Torus};
use crate::scalar::{cre, eye, max_abs, op_norm};

fn su2() -> Backend {
    Backend::su2()
}

fn t1() -> Backend {
    Backend::torus(1)
}

fn lambda_field(b: Backend, cutoff: f64) -> SpectralField<f64> {
    SpectralField::scalar_fn(b, cutoff, |l| l)
}

#[test]
fn extension_examples() {
    let b = t1();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = BandlimitedFunction::<f64>::random(b, 36.0, &mut rng);
    let id = SpectralField::<f64>::identity(b, 36.0);
    for l in [-2i32, 1, 3] {
        for m in [-3i32, 0, 2] {
            let dec = b.tensor_decompose::<f64>(&Torus::character(vec![l]), &Torus::character(vec![m])).unwrap();
            let e = f.coeffs.extend_to_rep(&dec).unwrap();
            assert_eq!(e[(0, 0)], f.coeffs.get(&Torus::character(vec![l + m])).unwrap()[(0, 0)]);
            assert_eq!(id.extend_to_rep(&dec).unwrap(), eye(1));
        }
    }
    // SU(2): quadrature oracle ∫ f(x)(τ⊗π)(x)* dx
    let b = su2();
    let lam = b.casimir_for_degree(6);
    let f = BandlimitedFunction::<f64>::random(b, lam, &mut rng);
    let rule = b.quadrature::<f64>(lam);
    let vals = f.evaluate_on_rule(&rule);
    for (jt, jp) in [(1u32, 2u32), (2, 3), (1, 5)] {
        let (tau, pi) = (Su2::spin(jt), Su2::spin(jp));
        let dec = b.tensor_decompose::<f64>(&tau, &pi).unwrap();
        let ext = f.coeffs.extend_to_rep(&dec).unwrap();
        let mut acc = zeros::<f64>(tau.dim * pi.dim, tau.dim * pi.dim);
        for ((x, w), v) in rule.nodes.iter().zip(&rule.weights).zip(&vals) {
            let t = b.matrix_coeff::<f64>(&tau, x).unwrap().kronecker(&b.matrix_coeff::<f64>(&pi, x).unwrap());
            acc += t.adjoint() * (*v * *w);
        }
        assert!(max_abs(&(acc - ext)) < 1e-10);
        assert!(max_abs(&(SpectralField::<f64>::identity(b, lam).extend_to_rep(&dec).unwrap() - eye(tau.dim * pi.dim))) < 1e-12);
    }
    let too_far = b.tensor_decompose::<f64>(&Su2::spin(4), &Su2::spin(4)).unwrap();
    assert!(matches!(f.coeffs.extend_to_rep(&too_far), Err(Error::CutoffExceeded(_))));
}

#[test]
fn torus_differences_are_lattice_differences() {
    let b = t1();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = BandlimitedFunction::<f64>::random(b, 100.0, &mut rng);
    let e1 = Torus::character(vec![1]);
    let d = delta_tau(&f.coeffs, &e1);
    assert_eq!(d.overflow, vec![Torus::character(vec![10])]);
    for m in -10..10 {
        let fm = |k: i32| f.coeffs.get(&Torus::character(vec![k])).unwrap()[(0, 0)];
        let got = d.get(&Torus::character(vec![m])).unwrap()[(0, 0)];
        assert!((got - (fm(m + 1) - fm(m))).norm() < 1e-15);
    }
    let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients).unwrap();
    // q = e^{-ix} − 1 reproduces Δ_{e_1}; q = e^{ix} − 1 reproduces Δ_{e_{-1}}
    for (q, tau) in fam.functions.iter().zip(b.fundamental_set()) {
        let rt = delta_q(&f.coeffs, q).unwrap();
        let dt = delta_tau(&f.coeffs, &tau);
        for (pi, m) in &rt.entries {
            assert!((m - dt.get(pi).unwrap()).norm() < 1e-12);
        }
        // q has modes e_{±1}, so its interior drops both ends
        assert_eq!(rt.len(), dt.entries.len() - 1);
    }
    let x = GroupPoint::Torus(vec![0.7]);
    assert!((fam.functions[0].evaluate(&x) - (C::new(0.0, -0.7).exp() - 1.0)).norm() < 1e-15);
    assert!((fam.functions[1].evaluate(&x) - (C::new(0.0, 0.7).exp() - 1.0)).norm() < 1e-15);
}

#[test]
fn identity_symbol_is_annihilated() {
    for b in [t1(), Backend::torus(2), su2()] {
        let id = SpectralField::<f64>::identity(b, b.casimir_for_degree(6));
        for tau in b.fundamental_set().into_iter().chain(b.enumerate_dual(b.casimir_for_degree(2))) {
            let d = delta_tau(&id, &tau);
            assert!(d.max_abs() < 1e-13, "{tau}");
            assert!(!d.entries.is_empty());
        }
    }
}

#[test]
fn casimir_differences_on_su2() {
    let b = su2();
    let s = lambda_field(b, b.casimir_for_degree(12));
    let d = delta_tau(&s, &Su2::spin(1));
    for j in 1..=10u32 {
        let l = j as f64 / 2.0;
        let m = d.get(&Su2::spin(j)).unwrap();
        let eig = m.clone().symmetric_eigenvalues();
        let mut ev: Vec<f64> = eig.iter().map(|z| *z).collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        // ½ ⊗ ℓ = (ℓ-½) ⊕ (ℓ+½), dimensions j and j + 2
        for (k, e) in ev.iter().enumerate() {
            let expect = if k < j as usize { -(l + 0.25) } else { l + 0.75 };
            assert!((e - expect).abs() < 1e-10, "j={j}: {ev:?}");
        }
    }
}

#[test]
fn rt_blocks_equal_intrinsic_differences_on_su2() {
    let b = su2();
    let lam = b.casimir_for_degree(10);
    let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients).unwrap();
    let tau = Su2::spin(1);
    let heat = SpectralField::scalar_fn(b, lam, |l| (-0.1 * l).exp());
    let x3 = SpectralField::generator(b, lam, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rnd = BandlimitedFunction::<f64>::random(b, lam, &mut rng).coeffs;
    for s in [SpectralField::identity(b, lam), lambda_field(b, lam), x3, heat, rnd] {
        let dt = delta_tau(&s, &tau);
        let blocks: Vec<SpectralField<f64>> = fam.functions.iter().map(|q| delta_q(&s, q).unwrap()).collect();
        for (pi, m) in &dt.entries {
            let d = pi.dim;
            let mut assembled = zeros::<f64>(2 * d, 2 * d);
            for i in 0..2 {
                for j in 0..2 {
                    let blk = blocks[2 * i + j].get(pi).unwrap();
                    assembled.view_mut((i * d, j * d), (d, d)).copy_from(blk);
                }
            }
            assert!(max_abs(&(assembled - m)) < 1e-10, "{pi}");
        }
    }
}

#[test]
fn rt_difference_of_constant_is_identity() {
    let b = su2();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = BandlimitedFunction::<f64>::random(b, 12.0, &mut rng).coeffs;
    let one = BandlimitedFunction::constant(b, cre(1.0));
    let d = delta_q(&s, &one).unwrap();
    assert!(d.max_abs_diff(&s) < 1e-13);
    assert_eq!(d.cutoff, s.cutoff);
}

#[test]
fn non_leibniz_product_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for b in [t1(), su2()] {
        let lam = b.casimir_for_degree(8);
        let s1 = BandlimitedFunction::<f64>::random(b, lam, &mut rng).coeffs;
        let s2 = lambda_field(b, lam).add(&SpectralField::generator(b, lam, 0).unwrap());
        let prod = s1.matmul(&s2);
        for tau in b.fundamental_set() {
            let d12 = delta_tau(&prod, &tau);
            let d1 = delta_tau(&s1, &tau);
            let d2 = delta_tau(&s2, &tau);
            for (pi, lhs) in &d12.entries {
                let dec = b.tensor_decompose::<f64>(&tau, pi).unwrap();
                let s1_ext = s1.extend_to_rep(&dec).unwrap();
                let s2_id = eye::<f64>(tau.dim).kronecker(s2.get(pi).unwrap());
                let rhs = d1.get(pi).unwrap() * s2_id + s1_ext * d2.get(pi).unwrap();
                assert!(max_abs(&(lhs - rhs)) < 1e-10);
            }
        }
    }
}

#[test]
fn second_differences_of_generators_vanish() {
    for b in [t1(), Backend::torus(2), su2()] {
        let lam = b.casimir_for_degree(8);
        for j in 0..b.metadata().dimension {
            let g = SpectralField::<f64>::generator(b, lam, j).unwrap();
            for w in fund_words(b, 2).into_iter().filter(|w| w.len() == 2) {
                let d = delta_word(&g, &w);
                assert!(!d.entries.is_empty());
                assert!(d.max_abs() < 1e-12, "{w:?}");
            }
            // first differences are τ(X_j) ⊗ I
            for tau in b.fundamental_set() {
                let d = delta_tau(&g, &tau);
                let tx = b.infinitesimal::<f64>(&tau, j).unwrap();
                for (pi, m) in &d.entries {
                    assert!(max_abs(&(m - tx.kronecker(&eye(pi.dim)))) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn x_derivative_examples() {
    let b = t1();
    let lam = 25.0;
    let g = SpectralField::<f64>::scalar_fn(b, lam, |l| 1.0 / (1.0 + l));
    assert!(SymbolField::invariant(g.clone()).x_derivative(0).unwrap().max_abs(lam) == 0.0);
    let s = SymbolField::single_mode(Torus::character(vec![1]), 0, 0, g.clone());
    let d = s.x_derivative(0).unwrap();
    let expect = SymbolField::single_mode(Torus::character(vec![1]), 0, 0, g.scale(C::new(0.0, 1.0)));
    assert!(d.max_abs_diff(&expect, lam) < 1e-15);
    // −Σ X_j² multiplies a τ-mode by λ_τ
    let b = su2();
    let lam = b.casimir_for_degree(4);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = BandlimitedFunction::<f64>::random(b, lam, &mut rng).coeffs;
    for jt in 0..4u32 {
        let tau = Su2::spin(jt);
        for i in 0..tau.dim {
            for k in 0..tau.dim {
                let s = SymbolField::single_mode(tau.clone(), i, k, f.clone());
                let mut lap = SymbolField::zero(b, s.x_cutoff, lam);
                for j in 0..3 {
                    lap = lap.sub(&s.x_derivative(j).unwrap().x_derivative(j).unwrap());
                }
                assert!(lap.max_abs_diff(&s.scale(cre(tau.casimir)), lam) < 1e-12);
                let mut rlap = SymbolField::zero(b, s.x_cutoff, lam);
                for j in 0..3 {
                    rlap = rlap.sub(&s.right_x_derivative(j).unwrap().right_x_derivative(j).unwrap());
                }
                assert!(rlap.max_abs_diff(&s.scale(cre(tau.casimir)), lam) < 1e-12);
            }
        }
    }
}

#[test]
fn x_derivatives_match_finite_differences() {
    let b = su2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lam = b.casimir_for_degree(3);
    let a = BandlimitedFunction::<f64>::random(b, lam, &mut rng);
    let c = BandlimitedFunction::<f64>::random(b, lam, &mut rng);
    let s = SymbolField::from_terms(&[(a, lambda_field(b, lam)), (c, SpectralField::generator(b, lam, 1).unwrap())]);
    let x = b.random_point(&mut rng);
    let pi = Su2::spin(2);
    let h = 1e-5;
    for j in 0..3 {
        let mut v = [0.0; 3];
        v[j] = h;
        let ep = b.exp_chart(&v);
        v[j] = -h;
        let em = b.exp_chart(&v);
        let fd = (s.evaluate_at(&b.mul(&x, &ep), &pi).unwrap() - s.evaluate_at(&b.mul(&x, &em), &pi).unwrap()) / C::new(2.0 * h, 0.0);
        assert!(max_abs(&(fd - s.x_derivative(j).unwrap().evaluate_at(&x, &pi).unwrap())) < 1e-6);
        let fd = (s.evaluate_at(&b.mul(&ep, &x), &pi).unwrap() - s.evaluate_at(&b.mul(&em, &x), &pi).unwrap()) / C::new(2.0 * h, 0.0);
        assert!(max_abs(&(fd - s.right_x_derivative(j).unwrap().evaluate_at(&x, &pi).unwrap())) < 1e-6);
    }
}

#[test]
fn pointwise_operations_match_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for b in [t1(), su2()] {
        let lam = b.casimir_for_degree(4);
        let xl = b.casimir_for_degree(2);
        let s1 = SymbolField::from_terms(&[
            (BandlimitedFunction::random(b, xl, &mut rng), BandlimitedFunction::<f64>::random(b, lam, &mut rng).coeffs),
            (BandlimitedFunction::random(b, xl, &mut rng), SpectralField::generator(b, lam, 0).unwrap()),
        ]);
        let s2 = SymbolField::from_terms(&[(BandlimitedFunction::random(b, xl, &mut rng), lambda_field(b, lam))]);
        let prod = s1.pointwise_mul(&s2).unwrap();
        let adj = s1.pointwise_adjoint().unwrap();
        for _ in 0..5 {
            let x = b.random_point(&mut rng);
            let (e1, e2, ep, ea) = (s1.evaluate(&x), s2.evaluate(&x), prod.evaluate(&x), adj.evaluate(&x));
            assert!(ep.max_abs_diff(&e1.matmul(&e2)) < 1e-12);
            assert!(ea.max_abs_diff(&e1.adjoint()) < 1e-12);
        }
    }
}

#[test]
fn symbol_json_roundtrip() {
    let b = su2();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = SymbolField::from_terms(&[(BandlimitedFunction::<f64>::random(b, 2.0, &mut rng), lambda_field(b, 6.0))]);
    let text = serde_json::to_string(&s.to_json()).unwrap();
    let back = SymbolField::<f64>::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.max_abs_diff(&s, 6.0), 0.0);
    let mut bad = s.to_json();
    bad.modes[0].i = 7;
    assert!(matches!(SymbolField::<f64>::from_json(&bad), Err(Error::Schema(_))));
}

#[test]
fn fundamental_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (b, count) in [(t1(), 2), (Backend::torus(2), 4), (su2(), 4)] {
        let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients).unwrap();
        assert_eq!(fam.len(), count);
        assert_eq!(fam.gradient_rank, b.metadata().dimension);
        assert!(fam.strongly_admissible, "{} residual {}", b.id(), fam.common_zero_residual);
        assert!(fam.vanishing_orders.iter().all(|&o| o == 1));
        for q in &fam.functions {
            assert!(q.evaluate(&b.identity()).norm() < 1e-14);
        }
        let r = fam.leibniz_residual(100, &mut rng).unwrap();
        assert!(r < 1e-10, "{} leibniz {r}", b.id());
    }
}

#[test]
fn su2_gradient_jacobian_has_rank_three() {
    // numerical Jacobian of the four functions at the identity
    let b = su2();
    let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients).unwrap();
    let h = 1e-6;
    let jac = CMat::<f64>::from_fn(4, 3, |k, j| {
        let mut v = [0.0; 3];
        v[j] = h;
        let p = fam.functions[k].evaluate(&b.exp_chart(&v));
        v[j] = -h;
        let m = fam.functions[k].evaluate(&b.exp_chart(&v));
        (p - m) / C::new(2.0 * h, 0.0)
    });
    assert_eq!(complex_rank(&jac, 1e-6), 3);
    assert!(max_abs(&(jac - fam.gradients())) < 1e-8);
    assert_eq!(fam.adapted_indices().unwrap().len(), 3);
}

#[test]
fn chart_cutoff_families_are_strongly_admissible() {
    for b in [t1(), Backend::torus(2), su2()] {
        let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::ChartCutoff).unwrap();
        assert_eq!(fam.len(), b.metadata().dimension);
        assert!(fam.leibniz.is_none());
        assert!(fam.strongly_admissible, "{}: rank {} residual {}", b.id(), fam.gradient_rank, fam.common_zero_residual);
        assert!(fam.functions.iter().all(|q| q.evaluate(&b.identity()).norm() < 1e-12));
    }
    assert_eq!(smooth_step(-1.0), 0.0);
    assert_eq!(smooth_step(2.0), 1.0);
    assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
}

#[test]
fn seminorm_examples() {
    for b in [t1(), su2()] {
        let lam = b.casimir_for_degree(8);
        for m in [-1.0, 0.5, 2.0] {
            let s = SymbolField::invariant(SpectralField::<f64>::scalar_fn(b, lam, |l| (1.0 + l).powf(m / 2.0)));
            let r = seminorm(&s, m, 1.0, 0.0, 0, 0, lam).unwrap();
            assert!((r.value(0, 0) - 1.0).abs() < 1e-12);
        }
        let id = SymbolField::invariant(SpectralField::<f64>::identity(b, lam));
        let r = seminorm(&id, 0.0, 1.0, 0.0, 2, 1, lam).unwrap();
        for row in &r.rows {
            assert!((row.value - 1.0).abs() < 1e-12, "{row:?}");
        }
        assert!(!r.excluded.is_empty());
        assert!(matches!(seminorm(&id, 0.0, 0.2, 0.5, 0, 0, lam), Err(Error::InvalidParameters(_))));
    }
}

#[test]
fn seminorm_of_generator_and_monotonicity() {
    let b = su2();
    let lam = b.casimir_for_degree(10);
    let g = SymbolField::invariant(SpectralField::<f64>::generator(b, lam, 2).unwrap());
    let r = seminorm(&g, 1.0, 1.0, 0.0, 2, 0, lam).unwrap();
    // |α| = 2 terms vanish, so the a = 2 row equals the a = 1 row
    assert!((r.value(2, 0) - r.value(1, 0)).abs() < 1e-12);
    assert!(r.value(0, 0) <= r.value(1, 0));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let xl = b.casimir_for_degree(1);
    let s = SymbolField::from_terms(&[
        (BandlimitedFunction::random(b, xl, &mut rng), lambda_field(b, 20.0).map(|p, m| m * cre((1.0 + p.casimir).powf(-0.5)))),
        (BandlimitedFunction::random(b, xl, &mut rng), SpectralField::generator(b, 20.0, 0).unwrap()),
    ]);
    let r1 = seminorm(&s, 1.0, 1.0, 0.0, 1, 1, 12.0).unwrap();
    for a in 0..=1 {
        for bb in 0..=1 {
            assert!(r1.value(a, bb) >= 0.0);
            if a > 0 {
                assert!(r1.value(a, bb) >= r1.value(a - 1, bb));
            }
            if bb > 0 {
                assert!(r1.value(a, bb) >= r1.value(a, bb - 1));
            }
        }
    }
    // S^1_{1,0} ⊂ S^{1.5}_{0.5,0.5}
    let r2 = seminorm(&s, 1.5, 0.5, 0.5, 1, 1, 12.0).unwrap();
    for (x, y) in r1.rows.iter().zip(&r2.rows) {
        assert!(y.value <= x.value + 1e-12);
    }
}

fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x.ln() - mx) * (y.ln() - my), b + (x.ln() - mx).powi(2)));
    num / den
}

#[test]
fn taylor_remainders_decay_at_the_right_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for b in [t1(), su2()] {
        let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients).unwrap();
        let n = b.metadata().dimension;
        let f = BandlimitedFunction::<f64>::random(b, b.casimir_for_degree(3), &mut rng);
        let x = b.random_point(&mut rng);
        let r0 = taylor_remainder(&f, &x, 0, &fam).unwrap();
        let y = b.random_point(&mut rng);
        assert!((r0(&y) - f.evaluate(&b.mul(&x, &y))).norm() < 1e-14);
        let dir: Vec<f64> = (0..n).map(|k| 0.3 + 0.2 * k as f64).collect();
        for order in 1..=3usize {
            let r = taylor_remainder(&f, &x, order, &fam).unwrap();
            let pts: Vec<(f64, f64)> = (0..5)
                .map(|k| {
                    let t = 0.05 / 2f64.powi(k);
                    let v: Vec<f64> = dir.iter().map(|d| d * t).collect();
                    let y = b.exp_chart(&v);
                    (b.distance(&y), r(&y).norm())
                })
                .collect();
            let slope = loglog_slope(&pts);
            assert!(slope >= order as f64 - 0.1, "{} N={order}: slope {slope}", b.id());
        }
        // f = q_k(·⁻¹) at the identity
        let q = fam.functions[fam.adapted_indices().unwrap()[0]].reflect();
        let r = taylor_remainder(&q, &b.identity(), 2, &fam).unwrap();
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|k| {
                let t = 0.1 / 2f64.powi(k);
                let v: Vec<f64> = dir.iter().map(|d| d * t).collect();
                let y = b.exp_chart(&v);
                (b.distance(&y), r(&y).norm().max(1e-300))
            })
            .collect();
        assert!(pts.iter().all(|p| p.1 < 1e-12) || loglog_slope(&pts) >= 1.9);
    }
}

#[test]
fn taylor_symbols_reduce_to_generators_at_first_order() {
    let b = su2();
    let fam = DifferenceFamily::<f64>::build_strongly_admissible(b, FamilyVariant::FundamentalCoefficients).unwrap();
    let data = TaylorData::new(&fam, 2).unwrap();
    let tau = Su2::spin(3);
    let p = data.symbols_at(&tau);
    assert!(max_abs(&(&p[&vec![0u8, 0, 0]] - eye::<f64>(4))) < 1e-14);
    // the adapted basis: D_{e_k} q_l(·⁻¹)(e) = δ_kl
    for (k, alpha) in data.multi_indices(1).into_iter().skip(1).enumerate() {
        for l in 0..3 {
            let ql = data.functions[l].reflect();
            let v = data.apply_to_function(&ql, &alpha).evaluate(&b.identity());
            let expect = if k == l { 1.0 } else { 0.0 };
            assert!((v - cre(expect)).norm() < 1e-12, "k={k} l={l} {v}");
        }
    }
    let _ = op_norm(&p[&vec![1u8, 0, 0]]);
}

#[test]
fn series_exp_and_reversion() {
    // exp(v)·exp(−v) = 1 as scalar series
    let s = Series::<f64>::linear(4, &[CMat::from_element(1, 1, cre(1.0))]);
    let prod = s.exp().mul(&s.scale(cre(-1.0)).exp());
    assert!((prod.coefficient(&[0])[(0, 0)] - cre(1.0)).norm() < 1e-15);
    for k in 1..=4u8 {
        assert!(prod.coefficient(&[k])[(0, 0)].norm() < 1e-15);
    }
    assert_eq!(multi_indices(2, 2), vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
}

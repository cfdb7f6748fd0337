use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::symbols::{seminorm, FamilyVariant};

fn t1() -> Backend {
    Backend::torus(1)
}

#[test]
fn supplied_derivatives_match_finite_differences() {
    let profiles = [
        MultiplierProfile::heat(),
        MultiplierProfile::bessel(2.0),
        MultiplierProfile::power(1.0),
        MultiplierProfile::bump(),
        MultiplierProfile::cutoff_profile(),
        dyadic_partition(0),
        dyadic_partition(3),
        MultiplierProfile::heat().scaled(0.25).product(&MultiplierProfile::power(-3.0)),
    ];
    for p in &profiles {
        let err = p.check_derivatives().unwrap();
        assert!(err <= 1e-5, "{p:?}: {err}");
    }
    // hand-computed values
    let h = MultiplierProfile::heat();
    assert!((h.derivative(2, 1.5).unwrap() - (-1.5f64).exp()).abs() < 1e-15);
    let p = MultiplierProfile::power(3.0);
    assert!((p.derivative(1, 3.0).unwrap() - 1.5 * 2.0).abs() < 1e-14);
    let v = MultiplierProfile::from_fn("sqrt", f64::sqrt);
    assert_eq!(v.derivative(1, 1.0), None);
    assert_eq!(v.norm(0.0, 1), None);
}

#[test]
fn profile_norms() {
    // (1+λ)^{m/2} has ‖·‖_{M_{m/2},0} = 1 and first derivative weight |m|/2
    let p = MultiplierProfile::power(-2.0);
    assert!((p.norm(-1.0, 0).unwrap() - 1.0).abs() < 1e-14);
    assert!((p.norm(-1.0, 1).unwrap() - 1.0).abs() < 1e-14);
    let h = MultiplierProfile::heat();
    // sup (1+λ)e^{−λ} = 1 at λ=0, sup (1+λ)² e^{−λ} = 4/e at λ=1
    assert!((h.norm(0.0, 1).unwrap() - 1.0).abs() < 1e-12);
    assert!((h.norm(0.0, 2).unwrap() - 4.0 / std::f64::consts::E).abs() < 1e-5);
}

#[test]
fn spectral_symbol_is_a_homomorphism() {
    for b in [t1(), Backend::torus(2), Backend::su2()] {
        let cut = b.casimir_for_degree(8);
        let one: SpectralField<f64> = spectral_symbol(&MultiplierProfile::constant(1.0), b, cut);
        assert_eq!(one.max_abs_diff(&SpectralField::identity(b, cut)), 0.0);
        let (f, g) = (MultiplierProfile::heat().scaled(0.3), MultiplierProfile::bessel(1.5));
        let fg: SpectralField<f64> = spectral_symbol(&f.product(&g), b, cut);
        let prod = spectral_symbol::<f64>(&f, b, cut).matmul(&spectral_symbol(&g, b, cut));
        assert_eq!(fg.max_abs_diff(&prod), 0.0);
    }
    let s: SpectralField<f32> = spectral_symbol(&MultiplierProfile::heat(), Backend::su2(), 6.0);
    assert!((s.entries.values().last().unwrap()[(0, 0)].re - (-6.0f32).exp()).abs() < 1e-6);
}

#[test]
fn heat_kernel_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for b in [t1(), Backend::torus(2), Backend::su2()] {
        let cut = b.casimir_for_degree(12);
        let p = heat_kernel::<f64>(b, 0.2, cut).unwrap();
        assert!((p.coeffs.get(&b.trivial()).unwrap()[(0, 0)].re - 1.0).abs() < 1e-15);
        let q = heat_kernel::<f64>(b, 0.3, cut).unwrap();
        let pq = p.convolve(&q);
        let direct = heat_kernel::<f64>(b, 0.5, cut).unwrap();
        assert!(pq.coeffs.max_abs_diff(&direct.coeffs) <= 1e-12);
        for _ in 0..10 {
            let x: GroupPoint<f64> = b.random_point(&mut rng);
            let d = (p.evaluate(&x) - p.evaluate(&b.inv(&x))).modulus();
            assert!(d <= 1e-10, "{d}");
        }
    }
    assert!(heat_kernel::<f64>(t1(), 0.0, 4.0).is_err());
}

#[test]
fn bessel_kernel_l2_growth() {
    // ‖B_s‖² = Σ d_π²(1+λ_π)^{−s}: converges iff s > n/2
    for (b, s_in, s_out) in [(t1(), 1.2, 0.4), (Backend::su2(), 2.0, 1.0)] {
        let norms = |s: f64| -> Vec<f64> {
            [16usize, 32, 64, 128]
                .iter()
                .map(|&d| {
                    let k = BandlimitedFunction::<f64>::new(spectral_symbol(&MultiplierProfile::bessel(s), b, b.casimir_for_degree(d)));
                    let direct: f64 = k.coeffs.entries.keys().map(|pi| (pi.dim * pi.dim) as f64 * (1.0 + pi.casimir).powf(-s)).sum();
                    assert!((k.plancherel_normsq() - direct).abs() <= 1e-10 * direct);
                    direct
                })
                .collect()
        };
        let conv = norms(s_in);
        let incr: Vec<f64> = conv.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(incr.windows(2).all(|w| w[1] < 0.8 * w[0]), "{conv:?}");
        let div = norms(s_out);
        let incr: Vec<f64> = div.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(incr.windows(2).all(|w| w[1] >= w[0] * 0.99), "{div:?}");
    }
}

#[test]
fn dyadic_partition_properties() {
    let grid: Vec<f64> = (0..=4000).map(|i| i as f64 * 0.02).collect();
    for l_max in 1..=6usize {
        let parts: Vec<MultiplierProfile> = (0..=l_max).map(dyadic_partition).collect();
        for &lam in grid.iter().filter(|&&l| l <= 2f64.powi(l_max as i32 - 1)) {
            let s: f64 = parts.iter().map(|p| p.value(lam)).sum();
            assert!((s - 1.0).abs() <= 1e-12, "L={l_max} λ={lam}: {s}");
        }
    }
    for l in 1..=5usize {
        let eta = dyadic_partition(l);
        let eta1 = dyadic_partition(1);
        for &lam in &grid {
            if lam < 2f64.powi(l as i32 - 2) || lam > 2f64.powi(l as i32) {
                assert_eq!(eta.value(lam), 0.0, "η_{l}({lam})");
            }
            let scaled = eta1.value(0.5f64.powi(l as i32 - 1) * lam);
            assert!((eta.value(lam) - scaled).abs() <= 1e-14);
        }
    }
    let eta0 = dyadic_partition(0);
    assert_eq!(eta0.value(-1.0), 0.0);
    assert_eq!(eta0.value(-0.3), 1.0);
    assert_eq!(eta0.value(1.0), 0.0);
}

#[test]
fn dyadic_pieces_scale_with_the_order_gap() {
    // seminorm of order m₁ of (1+λ)^{m/2}η_ℓ grows like 2^{ℓ(m−m₁)/2}
    let b = t1();
    let cut = b.casimir_for_degree(200);
    let (m, m1) = (1.0, -1.0);
    let sigma = spectral_symbol::<f64>(&MultiplierProfile::power(m), b, cut);
    let (mut xs, mut ys) = (vec![], vec![]);
    for l in 6..=14usize {
        let piece = SymbolField::invariant(sigma.matmul(&spectral_symbol(&dyadic_partition(l), b, cut)));
        let rep = seminorm(&piece, m1, 1.0, 0.0, 2, 0, cut).unwrap();
        xs.push(l as f64 * 2f64.ln());
        ys.push(rep.value(2, 0).ln());
    }
    let (slope, _, _) = linear_fit(&xs, &ys);
    assert!((slope - (m - m1) / 2.0).abs() <= 0.2, "{slope}");
}

#[test]
fn smoothing_truncation_examples() {
    let b = t1();
    let cut = b.casimir_for_degree(256);
    let chi = MultiplierProfile::cutoff_profile();
    let sigma = SymbolField::invariant(spectral_symbol::<f64>(&MultiplierProfile::power(1.0), b, cut));
    let same = smoothing_truncation(&sigma, cut, &chi);
    assert_eq!(same.max_abs_diff(&sigma, cut), 0.0);

    // seminorms of the truncations stay comparable to those of σ; the scales start
    // where the lattice resolves the transition of χ
    let base = seminorm(&sigma, 1.0, 1.0, 0.0, 2, 0, cut).unwrap().value(2, 0);
    let (mut xs, mut ys) = (vec![], vec![]);
    for l in [1024.0, 2048.0, 4096.0, 8192.0, 16384.0] {
        let s = smoothing_truncation(&sigma, l, &chi);
        let v = seminorm(&s, 1.0, 1.0, 0.0, 2, 0, cut).unwrap().value(2, 0);
        xs.push(f64::ln(l));
        ys.push((v / base).ln());
    }
    let (slope, _, _) = linear_fit(&xs, &ys);
    assert!(slope.abs() <= 0.05, "{slope}");
}

#[test]
fn smoothed_kernels_converge_at_rate_one() {
    // ‖κ_ℓ − κ‖_{H^{s−m}} for σ = (1+λ)^{m/2} and s = −(2 + n/2) decays like ℓ^{−1}
    for (b, deg, ls) in [(t1(), 4096usize, vec![64.0, 128.0, 256.0, 512.0, 1024.0]), (Backend::su2(), 256, vec![64.0, 128.0, 256.0, 512.0])] {
        let n = b.metadata().dimension as f64;
        let m = 0.5;
        let cut = b.casimir_for_degree(deg);
        let chi = MultiplierProfile::cutoff_profile();
        let (mut xs, mut ys) = (vec![], vec![]);
        for &l in &ls {
            let gap = MultiplierProfile::power(m).product(&MultiplierProfile::constant(1.0).difference(&chi.scaled(1.0 / l)));
            let diff = BandlimitedFunction::<f64>::new(spectral_symbol(&gap, b, cut));
            xs.push(f64::ln(l));
            ys.push(diff.hs_norm(-(2.0 + n / 2.0) - m).ln());
        }
        let (slope, _, _) = linear_fit(&xs, &ys);
        assert!((slope + 1.0).abs() <= 0.2, "{b:?}: {slope}");
    }
}

#[test]
fn ball_volume_matches_closed_form() {
    for r in [0.01, 0.3, 1.0, 2.5, 5.0, 2.0 * std::f64::consts::PI] {
        let p = r / 2.0;
        let exact = (p - p.sin() * p.cos()) / std::f64::consts::PI;
        assert!((su2_ball_volume(r) - exact).abs() <= 1e-12, "{r}");
    }
    assert!((su2_ball_volume(10.0) - 1.0).abs() < 1e-12);
}

#[test]
fn heat_kernel_gaussian_bound_report() {
    let rep = heat_kernel_report(&[0.01, 0.03, 0.1, 0.3, 1.0], &[4.5, 5.0, 6.0, 8.0, 16.0]).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rep.notes.iter().any(|n| n.starts_with("fitted C")));
}

#[test]
fn multiplier_decay_examples() {
    let fam = DifferenceFamily::<f64>::build_strongly_admissible(t1(), FamilyVariant::FundamentalCoefficients).unwrap();
    let rep = multiplier_decay_report(&MultiplierProfile::power(1.0), 1.0, 0, &fam, &[1.0, 0.5, 0.25, 0.125], &[16, 32, 64, 128]).unwrap();
    for row in &rep.rows {
        assert!((row[3] - 1.0).abs() <= 1e-14 || row[0] != 1.0, "{row:?}");
    }
    let rep = multiplier_decay_report(&MultiplierProfile::heat(), 0.0, 1, &fam, &[1.0, 0.5, 0.25, 0.125], &[16, 32, 64, 128, 256]).unwrap();
    assert!(rep.passed, "{:?}", rep.fits);
    let bare = MultiplierProfile::from_fn("bare", |l| (-l).exp());
    assert!(multiplier_decay_report(&bare, 0.0, 1, &fam, &[1.0], &[16]).is_err());
}

#[test]
fn kernel_decay_examples() {
    let rep = kernel_decay_report(t1(), 0.5, 1.0, &[32, 64, 128, 256]).unwrap();
    assert!(rep.passed, "{:?}", rep.fits);
    let rep = kernel_decay_report(Backend::torus(2), -2.0, 1.0, &[16, 24, 32, 48]).unwrap();
    assert!(rep.passed, "{:?}", rep.fits);
    let rep = kernel_decay_report(t1(), -3.0, 1.0, &[32, 64, 128, 256]).unwrap();
    assert!(rep.passed, "{:?} {:?}", rep.fits, rep.checks);
    assert_eq!(rep.checks.len(), 1);
}

#[test]
fn bilinear_examples() {
    assert_eq!(product_support(2, 2), vec![0, 2, 4]);
    let b = Backend::su2();
    let lams: Vec<f64> = product_support(2, 2).iter().map(|&j| b.casimir_for_degree(j as usize)).collect();
    assert_eq!(lams, vec![0.0, 2.0, 6.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rep = bilinear_check(2, 8, -0.8, 1.6, 100, &mut rng).unwrap();
    assert!(rep.passed, "{:?}", rep.checks);
    assert_eq!(rep.rows.len(), 200);
    assert!(bilinear_check(2, 2, -0.8, 1.6, 10, &mut rng).is_err());
    assert!(bilinear_check(2, 4, 0.0, 1.6, 10, &mut rng).is_err());
    assert!(bilinear_check(2, 4, -0.8, 1.4, 10, &mut rng).is_err());
}

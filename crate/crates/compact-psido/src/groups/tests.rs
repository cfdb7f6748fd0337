use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalar::{cplx, eye, C};

fn frob(m: &CMat<f64>) -> f64 {
    m.norm()
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Explicit factorial formula for d^ℓ_{m'm}(β), arguments in half-units (twice the spin values).
fn d_oracle(j: i64, mp: i64, m: i64, beta: f64) -> f64 {
    let pref = (fact((j + mp) / 2) * fact((j - mp) / 2) * fact((j + m) / 2) * fact((j - m) / 2)).sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let mut acc = 0.0;
    for k in 0..=j {
        let t = [(j + m) / 2 - k, k, (mp - m) / 2 + k, (j - mp) / 2 - k];
        if t.iter().any(|&v| v < 0) {
            continue;
        }
        let sgn = if ((mp - m) / 2 + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let cpow = (j + (m - mp) / 2 - 2 * k) as i32;
        let spow = ((mp - m) / 2 + 2 * k) as i32;
        acc += sgn / t.iter().map(|&v| fact(v)).product::<f64>() * c.powi(cpow) * s.powi(spow);
    }
    pref * acc
}

/// Racah's closed formula for ⟨j1 m1; j2 m2 | J M⟩, all arguments in half-units.
fn cg_oracle(j1: i64, m1: i64, j2: i64, m2: i64, jj: i64, mm: i64) -> f64 {
    if m1 + m2 != mm {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let pre = ((jj + 1) as f64 * fact(h(jj + j1 - j2)) * fact(h(jj - j1 + j2)) * fact(h(j1 + j2 - jj))
        / fact(h(j1 + j2 + jj) + 1))
        .sqrt()
        * (fact(h(jj + mm)) * fact(h(jj - mm)) * fact(h(j1 - m1)) * fact(h(j1 + m1)) * fact(h(j2 - m2)) * fact(h(j2 + m2)))
            .sqrt();
    let mut acc = 0.0;
    for k in 0..=(j1 + j2 + jj) {
        let t = [
            h(j1 + j2 - jj) - k,
            h(j1 - m1) - k,
            h(j2 + m2) - k,
            h(jj - j2 + m1) + k,
            h(jj - j1 - m2) + k,
        ];
        if t.iter().any(|&v| v < 0) {
            continue;
        }
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sgn / (fact(k) * t.iter().map(|&v| fact(v)).product::<f64>());
    }
    pre * acc
}

fn backends() -> Vec<Backend> {
    vec![Backend::torus(1), Backend::torus(2), Backend::su2()]
}

#[test]
fn enumerate_dual_examples() {
    let t1 = Backend::torus(1).enumerate_dual(4.0);
    let ks: Vec<Label> = t1.iter().map(|p| p.label.clone()).collect();
    assert_eq!(ks.len(), 5);
    for k in -2..=2 {
        assert!(ks.contains(&Label::Torus(vec![k])));
    }
    let s = Backend::su2().enumerate_dual(2.0);
    assert_eq!(s.iter().map(|p| p.label.clone()).collect::<Vec<_>>(), vec![Label::Spin(0), Label::Spin(1), Label::Spin(2)]);
    assert_eq!(s[1].casimir, 0.75);
    for b in backends() {
        let d = b.enumerate_dual(0.0);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0], b.trivial());
    }
    // sorted by (casimir, label)
    let t2 = Backend::torus(2).enumerate_dual(10.0);
    assert!(t2.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(t2.len(), 37);
}

#[test]
fn irrep_invariants() {
    for pi in Backend::su2().enumerate_dual(50.0) {
        let Label::Spin(j) = pi.label else { panic!() };
        assert_eq!(pi.dim, j as usize + 1);
        assert_eq!(pi.casimir, (j as f64 / 2.0) * (j as f64 / 2.0 + 1.0));
    }
    for pi in Backend::torus(3).enumerate_dual(9.0) {
        let Label::Torus(k) = &pi.label else { panic!() };
        assert_eq!(pi.dim, 1);
        assert_eq!(pi.casimir, k.iter().map(|&v| (v * v) as f64).sum::<f64>());
    }
}

#[test]
fn matrix_coeff_examples() {
    let t = Backend::torus(1);
    let k1 = Torus::character(vec![1]);
    let m = t.matrix_coeff(&k1, &GroupPoint::Torus(vec![std::f64::consts::FRAC_PI_2])).unwrap();
    assert!((m[(0, 0)] - cplx(0.0, 1.0)).norm() < 1e-15);
    let s = Backend::su2();
    let half = Su2::spin(1);
    for &tt in &[0.3, 1.7, 5.0, 11.0] {
        let x = s.exp_chart(&[0.0, 0.0, tt]);
        let m = s.matrix_coeff(&half, &x).unwrap();
        let expected = CMat::from_row_slice(2, 2, &[C::new(0.0, -tt / 2.0).exp(), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, tt / 2.0).exp()]);
        assert!(frob(&(m - expected)) < 1e-13, "t={tt}");
    }
    for b in backends() {
        for pi in b.enumerate_dual(12.0) {
            let m = b.matrix_coeff(&pi, &b.identity::<f64>()).unwrap();
            assert!(frob(&(m - eye(pi.dim))) < 1e-14);
        }
    }
    assert!(s.matrix_coeff::<f64>(&Torus::character(vec![1]), &s.identity()).is_err());
}

#[test]
fn spin_half_is_the_defining_representation() {
    let s = Backend::su2();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let x: GroupPoint<f64> = s.random_point(&mut rng);
        let GroupPoint::Su2(q) = &x else { panic!() };
        let m = s.matrix_coeff(&Su2::spin(1), &x).unwrap();
        assert!(frob(&(m - q.to_matrix())) < 1e-13);
    }
}

#[test]
fn quaternion_product_matches_matrix_product() {
    let s = Backend::su2();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let x: GroupPoint<f64> = s.random_point(&mut rng);
        let y: GroupPoint<f64> = s.random_point(&mut rng);
        let (GroupPoint::Su2(p), GroupPoint::Su2(q)) = (&x, &y) else { panic!() };
        let xy = p.hamilton(q);
        assert!(frob(&(xy.to_matrix() - p.to_matrix() * q.to_matrix())) < 1e-12);
        assert!((xy.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn wigner_small_d_matches_factorial_formula() {
    for j in 0..=10i64 {
        for &beta in &[0.0, 1e-9, 0.4, 1.3, 2.9, std::f64::consts::PI] {
            let d = wigner_d_small::<f64>(j as u32, beta);
            for a in 0..=j {
                for b in 0..=j {
                    let (mp, m) = (j - 2 * a, j - 2 * b);
                    let o = d_oracle(j, mp, m, beta);
                    assert!((d[(a as usize, b as usize)] - o).abs() < 1e-12, "j={j} a={a} b={b} beta={beta}");
                }
            }
        }
    }
}

#[test]
fn unitarity_homomorphism_casimir() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for b in backends() {
        let dual = b.enumerate_dual(50.0);
        for _ in 0..200 {
            let x: GroupPoint<f64> = b.random_point(&mut rng);
            let y: GroupPoint<f64> = b.random_point(&mut rng);
            let xy = b.mul(&x, &y);
            for pi in &dual {
                let px = b.matrix_coeff(pi, &x).unwrap();
                let py = b.matrix_coeff(pi, &y).unwrap();
                let pxy = b.matrix_coeff(pi, &xy).unwrap();
                assert!(frob(&(&px * px.adjoint() - eye(pi.dim))) < 1e-10);
                assert!(frob(&(pxy - &px * &py)) < 1e-10, "{pi}");
            }
        }
        let n = b.metadata().basis_size;
        for pi in &dual {
            let mut cas = eye::<f64>(pi.dim) * cplx(pi.casimir, 0.0);
            for j in 0..n {
                let x = b.infinitesimal::<f64>(pi, j).unwrap();
                assert!(frob(&(&x + x.adjoint())) < 1e-12, "skew-Hermitian");
                cas += &x * &x;
            }
            assert!(frob(&cas) < 1e-10, "Casimir {pi}");
        }
        assert!(b.infinitesimal::<f64>(&b.trivial(), n).is_err());
    }
}

#[test]
fn infinitesimal_examples_and_finite_differences() {
    let t = Backend::torus(1);
    let x = t.infinitesimal::<f64>(&Torus::character(vec![3]), 0).unwrap();
    assert!((x[(0, 0)] - cplx(0.0, 3.0)).norm() < 1e-15);
    let s = Backend::su2();
    let x3 = s.infinitesimal::<f64>(&Su2::spin(1), 2).unwrap();
    let expect = CMat::from_row_slice(2, 2, &[cplx(0.0, -0.5), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.5)]);
    assert!(frob(&(x3 - expect)) < 1e-15);
    for b in backends() {
        let n = b.metadata().basis_size;
        for pi in b.enumerate_dual(6.0) {
            for j in 0..n {
                let gen = b.infinitesimal::<f64>(&pi, j).unwrap();
                let mut errs = vec![];
                for &t in &[1e-2, 1e-3] {
                    let mut v = vec![0.0; n];
                    v[j] = t;
                    let m = b.matrix_coeff(&pi, &b.exp_chart(&v)).unwrap();
                    let fd = (m - eye(pi.dim)) / cplx(t, 0.0);
                    errs.push(frob(&(fd - &gen)));
                }
                // first-order error: shrinks roughly tenfold
                assert!(errs[1] < 0.2 * errs[0] + 1e-12, "{pi} {j} {errs:?}");
                assert!(errs[1] < 1e-2 * (1.0 + pi.casimir));
            }
        }
    }
}

#[test]
fn clebsch_gordan_matches_racah_formula() {
    for j1 in 0..=6i64 {
        for j2 in 0..=6i64 {
            let u = clebsch_gordan_block(j1 as u32, j2 as u32);
            let mut col = 0;
            let mut jj = (j1 - j2).abs();
            while jj <= j1 + j2 {
                for e in 0..=jj {
                    let mm = jj - 2 * e;
                    for a in 0..=j1 {
                        for i in 0..=j2 {
                            let (m1, m2) = (j1 - 2 * a, j2 - 2 * i);
                            let o = cg_oracle(j1, m1, j2, m2, jj, mm);
                            let v = u[((a * (j2 + 1) + i) as usize, col + e as usize)];
                            assert!((v - o).abs() < 1e-12, "({j1},{j2})->{jj} e={e} a={a} i={i}: {v} vs {o}");
                        }
                    }
                }
                col += jj as usize + 1;
                jj += 2;
            }
        }
    }
}

#[test]
fn tensor_decomposition_invariants() {
    let s = Backend::su2();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<GroupPoint<f64>> = (0..20).map(|_| s.random_point(&mut rng)).collect();
    for j1 in 0..=4 {
        for j2 in 0..=4 {
            let (tau, pi) = (Su2::spin(j1), Su2::spin(j2));
            let dec = s.tensor_decompose::<f64>(&tau, &pi).unwrap();
            let u = &dec.intertwiner;
            let dim = tau.dim * pi.dim;
            assert_eq!(dec.components.iter().map(|c| c.dim).sum::<usize>(), dim);
            assert!(frob(&(u.adjoint() * u - eye(dim))) < 1e-12);
            for x in &pts {
                let big = s.matrix_coeff(&tau, x).unwrap().kronecker(&s.matrix_coeff(&pi, x).unwrap());
                let blk = u.adjoint() * big * u;
                let mut expect = CMat::<f64>::zeros(dim, dim);
                for (c, off) in dec.components.iter().zip(dec.offsets()) {
                    expect.view_mut((off, off), (c.dim, c.dim)).copy_from(&s.matrix_coeff(c, x).unwrap());
                }
                assert!(frob(&(blk - expect)) < 1e-10);
            }
        }
    }
    let one = Su2::spin(2);
    let dec = s.tensor_decompose::<f64>(&one, &one).unwrap();
    assert_eq!(dec.components.iter().map(|c| c.label.clone()).collect::<Vec<_>>(), vec![Label::Spin(0), Label::Spin(2), Label::Spin(4)]);
    let dec = s.tensor_decompose::<f64>(&Su2::spin(1), &Su2::spin(1)).unwrap();
    assert_eq!(dec.components.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![1, 3]);
    let t = Backend::torus(1);
    let dec = t.tensor_decompose::<f64>(&Torus::character(vec![2]), &Torus::character(vec![-5])).unwrap();
    assert_eq!(dec.components[0].label, Label::Torus(vec![-3]));
    for b in backends() {
        for pi in b.enumerate_dual(6.0) {
            let dec = b.tensor_decompose::<f64>(&b.trivial(), &pi).unwrap();
            assert_eq!(dec.components, vec![pi.clone()]);
            assert!(frob(&(dec.intertwiner - eye(pi.dim))) < 1e-14);
        }
    }
}

#[test]
fn conjugate_intertwiner() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for b in backends() {
        for pi in b.enumerate_dual(12.0) {
            let (pbar, c) = b.conjugate::<f64>(&pi).unwrap();
            for _ in 0..5 {
                let x: GroupPoint<f64> = b.random_point(&mut rng);
                let lhs = b.matrix_coeff(&pi, &x).unwrap().map(|z| z.conj());
                let rhs = &c * b.matrix_coeff(&pbar, &x).unwrap() * c.adjoint();
                assert!(frob(&(lhs - rhs)) < 1e-12);
            }
        }
    }
}

#[test]
fn quadrature_orthogonality() {
    for (b, lam) in [(Backend::torus(1), 16.0), (Backend::torus(2), 9.0), (Backend::su2(), 6.0)] {
        let rule = b.quadrature::<f64>(lam);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(rule.weights.iter().all(|&w| w > 0.0));
        let dual = b.enumerate_dual(lam);
        let mats: Vec<Vec<CMat<f64>>> = rule
            .nodes
            .iter()
            .map(|x| dual.iter().map(|p| b.matrix_coeff(p, x).unwrap()).collect())
            .collect();
        for (p, pi) in dual.iter().enumerate() {
            for (q, tau) in dual.iter().enumerate() {
                for i in 0..pi.dim {
                    for j in 0..pi.dim {
                        for k in 0..tau.dim {
                            for l in 0..tau.dim {
                                let mut acc = C::new(0.0, 0.0);
                                for (n, w) in rule.weights.iter().enumerate() {
                                    acc += mats[n][p][(i, j)] * mats[n][q][(k, l)].conj() * *w;
                                }
                                let expect = if p == q && i == k && j == l { 1.0 / pi.dim as f64 } else { 0.0 };
                                assert!((acc - cplx(expect, 0.0)).norm() < 1e-12, "{pi} {tau}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn distance_examples() {
    let s = Backend::su2();
    assert_eq!(s.distance(&s.identity::<f64>()), 0.0);
    let minus = GroupPoint::Su2(Quaternion::new(-1.0, 0.0, 0.0, 0.0));
    assert!((s.distance(&minus) - std::f64::consts::TAU).abs() < 1e-12);
    let t = Backend::torus(1);
    assert!((t.distance(&GroupPoint::Torus(vec![std::f64::consts::PI])) - std::f64::consts::PI).abs() < 1e-12);
    assert!((t.distance(&GroupPoint::Torus(vec![6.0])) - (std::f64::consts::TAU - 6.0)).abs() < 1e-12);
    // geodesics through the identity have unit speed for |t| small
    let x = s.exp_chart(&[0.1, -0.2, 0.3]);
    assert!((s.distance(&x) - (0.14f64).sqrt()).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for b in backends() {
        for _ in 0..100 {
            let x: GroupPoint<f64> = b.random_point(&mut rng);
            assert!((b.distance(&x) - b.distance(&b.inv(&x))).abs() < 1e-12);
        }
    }
}

#[test]
fn fundamental_sets() {
    assert_eq!(
        Backend::torus(1).fundamental_set().iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
        vec![Label::Torus(vec![1]), Label::Torus(vec![-1])]
    );
    let t2: Vec<Label> = Backend::torus(2).fundamental_set().into_iter().map(|p| p.label).collect();
    assert_eq!(t2.len(), 4);
    for k in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
        assert!(t2.contains(&Label::Torus(k.to_vec())));
    }
    // every j ≤ 8 occurs in a tensor power of the fundamental spin-½
    let s = Backend::su2();
    let fund = s.fundamental_set();
    assert_eq!(fund, vec![Su2::spin(1)]);
    let mut reached = std::collections::BTreeSet::from([0u32]);
    let mut frontier = vec![Su2::spin(0)];
    for _ in 0..8 {
        let mut next = vec![];
        for pi in &frontier {
            for c in s.tensor_decompose::<f64>(&fund[0], pi).unwrap().components {
                if let Label::Spin(j) = c.label {
                    if reached.insert(j) {
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    assert!((0..=8).all(|j| reached.contains(&j)));
}

#[test]
fn group_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for b in backends() {
        let n = b.metadata().basis_size;
        let md = b.metadata();
        assert!(0.0 < md.chart_radius && md.chart_radius < 1.0 && 1.0 <= md.diameter);
        for _ in 0..50 {
            let x: GroupPoint<f64> = b.random_point(&mut rng);
            let e = b.mul(&x, &b.inv(&x));
            assert!(b.distance(&e) < 1e-7);
            let v: Vec<f64> = (0..n).map(|i| 0.1 * (i as f64 + 1.0)).collect();
            let mv: Vec<f64> = v.iter().map(|a| -a).collect();
            let lhs = b.inv(&b.exp_chart(&v));
            let rhs = b.exp_chart(&mv);
            assert!(b.distance(&b.mul(&lhs, &b.inv(&rhs))) < 1e-7);
        }
    }
    let t = Backend::torus(1);
    let GroupPoint::Torus(a) = t.exp_chart(&[7.0]) else { panic!() };
    assert!((a[0] - (7.0 - std::f64::consts::TAU)).abs() < 1e-14);
}

#[test]
fn backend_ids_roundtrip() {
    for b in backends() {
        assert_eq!(Backend::parse(&b.id()).unwrap(), b);
    }
    assert!(Backend::parse("torus:0").is_err());
    assert!(Backend::parse("so3").is_err());
}

#[test]
fn single_precision_smoke() {
    let s = Backend::su2();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x: GroupPoint<f32> = s.random_point(&mut rng);
    let y: GroupPoint<f32> = s.random_point(&mut rng);
    let pi = Su2::spin(4);
    let lhs = s.matrix_coeff(&pi, &s.mul(&x, &y)).unwrap();
    let rhs = s.matrix_coeff(&pi, &x).unwrap() * s.matrix_coeff(&pi, &y).unwrap();
    assert!((lhs - rhs).norm() < 1e-4);
}

use proptest::prelude::*;
use rmt_edge::kontsevich::{
    matrix_bessel_det, soft_rhs_direct, thm_hard_rhs, thm_soft_rhs, z_kont, z_kont_generalized, BesselVariant,
};
use rmt_edge::linalg::{det, vandermonde};
use rmt_edge::oracles::{brute_bessel_integral_2, BesselOracle};
use rmt_edge::parametrix::{airy_kernel, Case};
use rmt_edge::specialfn::{f_nu, g_nu};
use rmt_edge::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn right_half(n: usize) -> impl Strategy<Value = Vec<C64>> {
    proptest::collection::vec((0.4f64..2.0, -0.5f64..0.5).prop_map(|(a, b)| c(a, b)), n)
        .prop_filter("separated", |v| v.iter().enumerate().all(|(i, p)| v[i + 1..].iter().all(|q| (p - q).norm() > 0.05)))
}

/// `det[K_Ai(x_{S+l}, x_j)] / (D(c) D(b))` with `x = y^2`.
fn airy_kernel_ratio(y: &[C64]) -> C64 {
    let s = y.len() / 2;
    let x: Vec<C64> = y.iter().map(|v| v * v).collect();
    let (b, cc) = (&x[..s], &x[s..]);
    let mut m = vec![c(0.0, 0.0); s * s];
    for l in 0..s {
        for j in 0..s {
            m[l * s + j] = airy_kernel(cc[l], b[j]).unwrap();
        }
    }
    det(&m, s) / (vandermonde(cc) * vandermonde(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn airy_kernel_determinant_identity(y in right_half(2), z in right_half(4)) {
        prop_assert!(rel(thm_soft_rhs(&y).unwrap(), airy_kernel_ratio(&y)) < 1e-7);
        prop_assert!(rel(thm_soft_rhs(&z).unwrap(), airy_kernel_ratio(&z)) < 1e-7);
        prop_assert!(rel(soft_rhs_direct(&z).unwrap(), thm_soft_rhs(&z).unwrap()) < 1e-9);
    }

    #[test]
    fn z_kont_symmetric(y in right_half(4)) {
        let a = z_kont(&y).unwrap();
        let p = [y[2], y[0], y[3], y[1]];
        prop_assert!(rel(z_kont(&p).unwrap(), a) < 1e-10);
    }

    #[test]
    fn conjugation(y in right_half(2)) {
        let yc: Vec<C64> = y.iter().map(|v| v.conj()).collect();
        prop_assert!(rel(z_kont(&yc).unwrap(), z_kont(&y).unwrap().conj()) < 1e-12);
        prop_assert!(rel(thm_soft_rhs(&yc).unwrap(), thm_soft_rhs(&y).unwrap().conj()) < 1e-12);
    }

    #[test]
    fn sectors_one_and_two_conjugate(a in 0.4f64..2.0, b in 0.4f64..2.0, x in -0.5f64..0.5) {
        prop_assume!((a - b).abs() > 0.05);
        let y = [C64::from_polar(a, 1.2), C64::from_polar(b, 1.9)];
        let yc = [y[0].conj(), y[1].conj()];
        let v1 = z_kont_generalized(&y, &[1, 1], c(x, 0.0)).unwrap();
        let v2 = z_kont_generalized(&yc, &[2, 2], c(x, 0.0)).unwrap();
        prop_assert!(rel(v2, v1.conj()) < 1e-10);
    }

    #[test]
    fn bessel_det_recurrence_vs_direct(nu in 0.0f64..2.5, y in right_half(4)) {
        for (v, h) in [(BesselVariant::F, f_nu as fn(f64, C64) -> rmt_edge::Result<C64>), (BesselVariant::G, g_nu)] {
            let mut m = vec![c(0.0, 0.0); 16];
            for l in 0..4 {
                for j in 0..4 {
                    m[l * 4 + j] = h(nu - l as f64, y[j]).unwrap();
                }
            }
            let want = det(&m, 4);
            let got = matrix_bessel_det(nu, &y, v).unwrap();
            let scale = m.iter().map(|e| e.norm()).fold(0.0, f64::max).powi(4);
            prop_assert!((got - want).norm() < 1e-10 * scale, "{:?}: {} vs {}", v, got, want);
        }
    }

    #[test]
    fn continuous_through_clusters(y in right_half(2), d in 1e-9f64..1e-4) {
        prop_assume!((y[0] - y[1]).norm() > 0.2);
        let f = |e: f64| thm_soft_rhs(&[y[0], y[1], y[0] + e, y[1] + c(0.0, 0.3)]).unwrap();
        // the switch between the direct and declustered routes at 1e-3
        let (lo, hi) = (f(0.999e-3), f(1.001e-3));
        prop_assert!(rel(lo, hi) < 1e-4, "{} vs {}", lo, hi);
        // Lipschitz toward exact coincidence
        let (a, b) = (f(0.0), f(d));
        prop_assert!(rel(b, a) < 50.0 * d + 1e-9, "{} vs {}", a, b);
    }
}

#[test]
fn z_kont_tends_to_one() {
    let near = (z_kont(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap() - 1.0).norm();
    let far = (z_kont(&[c(6.0, 0.0), c(9.0, 0.0)]).unwrap() - 1.0).norm();
    assert!(far < near && far < 1e-2, "{near} {far}");
}

#[test]
fn bessel_forms_vs_matrix_integrals() {
    let y = [c(1.0, 0.0), c(2.0, 0.0)];
    for (nu, kind) in [(0.5, BesselOracle::CueLoop), (2.0, BesselOracle::CueCircle), (1.0, BesselOracle::CueLoop)] {
        let a = thm_hard_rhs(Case::I, nu, &y).unwrap();
        let b = brute_bessel_integral_2(nu, y[0], y[1], kind, 64).unwrap();
        assert!(rel(a, b) < 1e-8, "nu = {nu}: {a} vs {b}");
    }
    let y = [c(1.5, 0.3), c(2.5, -0.2)];
    let a = thm_hard_rhs(Case::III, 1.5, &y).unwrap();
    let b = brute_bessel_integral_2(1.5, y[0], y[1], BesselOracle::PositiveHermitian, 64).unwrap();
    assert!(rel(a, b) < 1e-8, "{a} vs {b}");
}

#[test]
fn frozen_values() {
    // mpmath, 30 digits
    let z = z_kont(&[c(1.0, 0.0), c(1.5, 0.0)]).unwrap();
    assert!((z.re / 0.764425140717981568 - 1.0).abs() < 1e-12);
    let h = thm_hard_rhs(Case::I, 0.5, &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
    assert!((h.re / 0.293145681336879446 - 1.0).abs() < 1e-12);
    let h = thm_hard_rhs(Case::III, 0.5, &[c(1.5, 0.0), c(2.5, 0.0)]).unwrap();
    assert!((h.re / 0.00294044305047285899 - 1.0).abs() < 1e-11 && h.im.abs() < 1e-15);
    let k = airy_kernel(c(0.81, 0.0), c(1.21, 0.0)).unwrap();
    assert!((k.re / 0.00674660264027705443 - 1.0).abs() < 1e-12);
    assert!(thm_hard_rhs(Case::II, 0.5, &[c(1.0, 0.0), c(2.0, 0.0)]).is_err());
    assert!(z_kont(&[c(-1.0, 0.0), c(2.0, 0.0)]).is_err());
}

use proptest::prelude::*;
use rmt_edge::kontsevich::z_kont;
use rmt_edge::linalg::vandermonde;
use rmt_edge::oracles::{
    brute_bessel_integral_2, brute_z_kont_2, hc_constant, hciz_2x2, hciz_2x2_euler, BesselOracle,
    KontContour,
};
use rmt_edge::C64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hciz_closed_form_vs_euler_angles(v in proptest::collection::vec(-1.0f64..1.0, 8)) {
        let a = [c(v[0], v[1]), c(v[2], v[3])];
        let b = [c(v[4], v[5]), c(v[6], v[7])];
        prop_assert!(rel(hciz_2x2(a, b).unwrap(), hciz_2x2_euler(a, b, 32)) < 1e-10);
    }

    /// `D(1/t) = (-1)^{N(N-1)/2} D(t) / prod t^{N-1}`: the factor relating the
    /// `D(t) D(1/t) prod t^{nu-1}` and `D(t)^2 prod t^{nu-N}` forms of the eigenvalue measure.
    #[test]
    fn inverted_vandermonde(t in proptest::collection::vec((0.1f64..3.0, -1.0f64..1.0), 2..=6)) {
        let t: Vec<C64> = t.iter().map(|&(a, b)| c(a, b)).collect();
        let n = t.len();
        let inv: Vec<C64> = t.iter().map(|v| v.inv()).collect();
        let mut p = c(1.0, 0.0);
        for v in &t {
            p *= v.powu(n as u32 - 1);
        }
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let d = vandermonde(&t);
        prop_assume!(d.norm() > 1e-6);
        prop_assert!(rel(vandermonde(&inv) * p, d * sign) < 1e-10);
    }
}

#[test]
fn harish_chandra_constants() {
    assert!((hc_constant(2).unwrap() / (PI / 2.0) - 1.0).abs() < 1e-10);
    assert!((hc_constant(3).unwrap() / (PI.powi(3) / 6.0) - 1.0).abs() < 1e-10);
    assert!(hc_constant(4).is_err());
}

#[test]
fn kontsevich_contours_agree() {
    let (y1, y2) = (c(1.2, 0.2), c(2.0, -0.1));
    let bent = brute_z_kont_2(y1, y2, KontContour::Bent, 40).unwrap();
    let real = brute_z_kont_2(y1, y2, KontContour::Real, 40).unwrap();
    assert!(rel(bent, real) < 1e-8, "{bent} {real}");
    assert!(rel(z_kont(&[y1, y2]).unwrap(), bent) < 1e-8);
    assert!(brute_z_kont_2(c(-1.0, 0.0), y2, KontContour::Bent, 40).is_err());
}

#[test]
fn cue_circle_needs_integer_order() {
    let (a, b) = (c(1.0, 0.0), c(2.0, 0.0));
    assert!(brute_bessel_integral_2(0.5, a, b, BesselOracle::CueCircle, 32).is_err());
    let circle = brute_bessel_integral_2(1.0, a, b, BesselOracle::CueCircle, 64).unwrap();
    let lp = brute_bessel_integral_2(1.0, a, b, BesselOracle::CueLoop, 64).unwrap();
    assert!(rel(circle, lp) < 1e-10);
}

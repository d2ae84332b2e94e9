use proptest::prelude::*;
use rmt_edge::equilibrium::solve_one_cut;
use rmt_edge::linalg::Matrix2C;
use rmt_edge::orthopoly::{cd_kernel, cd_kernel_closed, cd_kernel_from_y, recurrence_coeffs, rh_matrix_y, EdgeKind, WeightSpec};
use rmt_edge::poly::Poly;
use rmt_edge::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn quartic(n: usize) -> WeightSpec {
    WeightSpec::soft(vec![0.0, 0.0, 0.0, 0.0, 0.25], n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn y_has_unit_determinant(x in -3.0f64..3.0, y in 0.05f64..2.0, sign in proptest::bool::ANY, m in 1usize..8) {
        let w = quartic(6);
        let t = recurrence_coeffs(&w, 10).unwrap();
        let z = c(x, if sign { y } else { -y });
        let d = rh_matrix_y(&w, &t, m, z).unwrap().det();
        prop_assert!((d - 1.0).norm() < 1e-9, "{}", d);
    }

    #[test]
    fn christoffel_darboux_forms(x1 in -2.0f64..2.0, y1 in -1.0f64..1.0, x2 in -2.0f64..2.0, y2 in 0.1f64..1.0, m in 1usize..12) {
        let w = WeightSpec::hard(vec![0.0, 1.0], 5, 0.5).unwrap();
        let t = recurrence_coeffs(&w, 14).unwrap();
        let (a, b) = (c(x1, y1), c(x2, y2 + 0.05));
        prop_assume!((a - b).norm() > 1e-3);
        let s = cd_kernel(&t, m, a, b);
        let k = cd_kernel_closed(&t, m, a, b);
        prop_assert!((s - k).norm() < 1e-10 * s.norm().max(1.0));
    }
}

#[test]
fn y_normalized_at_infinity() {
    let w = quartic(4);
    let t = recurrence_coeffs(&w, 8).unwrap();
    let m = 5;
    let dev = |z: C64| {
        let y = rh_matrix_y(&w, &t, m, z).unwrap();
        let zm = z.powu(m as u32);
        Matrix2C::new(y[(0, 0)] / zm, y[(0, 1)] * zm, y[(1, 0)] / zm, y[(1, 1)] * zm).max_abs_diff(&Matrix2C::identity())
    };
    // Y z^{-m sigma_3} = I + O(1/z)
    for dir in [c(1.0, 0.1), c(0.0, 1.0), c(-0.7, 0.7)] {
        let (a, b) = (dev(dir * 1e3), dev(dir * 1e4));
        assert!(b < 0.15 * a && b < 1e-2, "{dir}: {a} {b}");
    }
}

#[test]
fn y_jump_on_the_support() {
    let w = quartic(4);
    let t = recurrence_coeffs(&w, 8).unwrap();
    let x = 0.5;
    let up = rh_matrix_y(&w, &t, 5, c(x, 1e-6)).unwrap();
    let lo = rh_matrix_y(&w, &t, 5, c(x, -1e-6)).unwrap();
    let jump = Matrix2C::new(c(1.0, 0.0), c(w.weight(x), 0.0), c(0.0, 0.0), c(1.0, 0.0));
    let r = up.max_abs_diff(&(lo * jump)) / up.max_abs();
    assert!(r < 1e-4, "jump residual {r}");
}

#[test]
fn kernel_from_y_matches_sum() {
    let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 3).unwrap();
    let t = recurrence_coeffs(&w, 10).unwrap();
    let (x, y) = (c(0.3, 0.4), c(-0.5, -0.2));
    let a = cd_kernel(&t, 6, x, y);
    let b = cd_kernel_from_y(&w, &t, 6, x, y).unwrap();
    assert!((a - b).norm() < 1e-8 * a.norm());
    assert!(cd_kernel_from_y(&w, &t, 6, x, x).is_err());
}

#[test]
fn equilibrium_effective_potential() {
    for (v, edge) in [
        (vec![0.0, 0.0, 0.5], EdgeKind::Soft),
        (vec![0.0, 0.0, 0.0, 0.0, 0.25], EdgeKind::Soft),
        (vec![0.0, 1.0], EdgeKind::Hard),
        (vec![0.0, 1.0, 0.3], EdgeKind::Hard),
    ] {
        let eq = solve_one_cut(&Poly::new(v.clone()), edge).unwrap();
        assert!((eq.mass().unwrap() - 1.0).abs() < 1e-10, "{v:?}");
        let (a, b) = eq.support;
        for k in 1..10 {
            let x = a + (b - a) * k as f64 / 10.0;
            assert!(eq.effective_potential(x).unwrap().abs() < 1e-7, "{v:?} inside at {x}");
            assert!(eq.density(x) > 0.0);
        }
        for d in [0.1, 0.5, 1.5] {
            assert!(eq.effective_potential(b + d).unwrap() > 0.0, "{v:?} outside at {}", b + d);
            if edge == EdgeKind::Soft {
                assert!(eq.effective_potential(a - d).unwrap() > 0.0);
            }
        }
    }
}

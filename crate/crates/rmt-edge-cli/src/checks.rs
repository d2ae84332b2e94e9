//! The `verify` identity suite: each check reports a residual against a tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmt_edge::correlators::{corr, PointSet};
use rmt_edge::equilibrium::solve_one_cut;
use rmt_edge::kontsevich::{soft_rhs_direct, thm_hard_rhs, thm_soft_rhs, z_kont, z_kont_generalized};
use rmt_edge::oracles::{
    brute_bessel_integral_2, brute_finite_n, brute_z_kont_2, hc_constant, hciz_2x2, hciz_2x2_euler, BesselOracle,
    KontContour,
};
use rmt_edge::orthopoly::{cd_kernel, cd_kernel_closed, recurrence_coeffs, rh_matrix_y, EdgeKind, WeightSpec};
use rmt_edge::parametrix::{
    airy_kernel, airy_parametrix, bessel_kernel, bessel_parametrix, block_det_form, detid_check, limit_rhs, Case,
    ParametrixKind, Side,
};
use rmt_edge::linalg::Matrix2C;
use rmt_edge::poly::Poly;
use rmt_edge::specialfn::{f_nu, g_nu, hankel1, pow_cut};
use rmt_edge::{Result, C64};
use std::f64::consts::PI;

pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub error: Option<String>,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.residual.is_finite() && self.residual <= self.tol
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

type Job = (String, f64, Box<dyn Fn() -> Result<f64> + Send + Sync>);

fn job(name: &str, tol: f64, f: impl Fn() -> Result<f64> + Send + Sync + 'static) -> Job {
    (name.to_string(), tol, Box::new(f))
}

fn lemma_instances(seed: u64, count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let s = rng.gen_range(1..=4);
        let mut v = |r: f64| -> Vec<C64> { (0..s).map(|_| c(rng.gen_range(-r..r), rng.gen_range(-r..r))).collect() };
        let (a, b, cc, d) = (v(1.0), v(1.0), v(1.0), v(1.0));
        let x: Vec<C64> = v(0.3).iter().enumerate().map(|(j, e)| e + j as f64).collect();
        let y: Vec<C64> = v(0.3).iter().enumerate().map(|(j, e)| e + c(j as f64 + 0.5, 1.0)).collect();
        let (l, r) = detid_check(&a, &b, &cc, &d, &x, &y);
        worst = worst.max((l - r).norm() / l.norm().max(r.norm()));
    }
    worst
}

fn finite_n(case: Case, n: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        let w = match k {
            0 => WeightSpec::soft(vec![0.0, 0.0, 0.5], n)?,
            1 => WeightSpec::soft(vec![0.0, 0.0, 0.0, 0.0, 0.25], n)?,
            _ => WeightSpec::hard(vec![0.0, 1.0], n, 0.5)?,
        };
        let t = recurrence_coeffs(&w, n + 4)?;
        let s = if case == Case::III { n.min(2) } else { 2 };
        let re0 = if k == 2 { 1.0 } else { 0.0 };
        let mut pt = || c(re0 + rng.gen_range(-1.0..1.0), rng.gen_range(0.3..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        let b: Vec<C64> = (0..s).map(|_| pt()).collect();
        let cc: Vec<C64> = (0..s).map(|_| pt()).collect();
        let pts = PointSet::new(b, cc)?;
        worst = worst.max(rel(corr(case, &w, &t, n, &pts)?, brute_finite_n(&w, &pts.b, &pts.c, case)?));
    }
    Ok(worst)
}

fn recurrence_residual(h: impl Fn(f64, C64) -> Result<C64>, nu: f64, z: C64) -> Result<f64> {
    let (a, b, d) = (h(nu - 2.0, z)?, h(nu - 1.0, z)?, h(nu, z)?);
    Ok((a - (nu - 1.0) * b + z * d).norm() / a.norm().max(b.norm()))
}

fn jobs(n_list: &[usize], seed: u64) -> Vec<Job> {
    let mut v: Vec<Job> = vec![
        job("airy parametrix det = 1", 1e-12, || {
            let mut w: f64 = 0.0;
            for k in 0..40 {
                let z = C64::from_polar(0.1 + 0.2 * k as f64, 0.3 + 0.15 * k as f64);
                w = w.max((airy_parametrix(z, None)?.det() - 1.0).norm());
            }
            Ok(w)
        }),
        job("airy kernel entry continuous across the real axis", 1e-10, || {
            let mut w: f64 = 0.0;
            for k in 0..20 {
                let (z1, z2) = (c(-4.0 + 0.4 * k as f64, 0.0), c(1.7 - 0.3 * k as f64 + 0.013, 0.0));
                let entry = |side| -> Result<C64> {
                    let m = airy_parametrix(z1, Some(side))?.adj() * airy_parametrix(z2, Some(side))?;
                    Ok(m[(1, 0)] / (z1 - z2))
                };
                let (u, l) = (entry(Side::Upper)?, entry(Side::Lower)?);
                w = w.max((u - l).norm() / u.norm().max(1e-3));
            }
            Ok(w)
        }),
        job("airy kernel from the parametrix", 1e-10, || {
            let (z1, z2) = (c(0.3, 0.2), c(-0.8, 0.5));
            let m = airy_parametrix(z1, None)?.adj() * airy_parametrix(z2, None)?;
            let k = airy_kernel(z1, z2)?;
            Ok(rel(m[(1, 0)] / (z1 - z2), -2.0 * PI * C64::i() * k))
        }),
        job("airy kernel diagonal = Ai'(0)^2 at 0", 1e-14, || {
            Ok((airy_kernel(c(0.0, 0.0), c(0.0, 0.0))?.re - 0.06698748377966397).abs())
        }),
        job("bessel parametrix det = 1 (nu = 0.5)", 1e-10, || {
            let mut w: f64 = 0.0;
            for k in 0..40 {
                let z = C64::from_polar(0.05 + 0.15 * k as f64, 0.1 + 0.15 * k as f64);
                w = w.max((bessel_parametrix(0.5, z, None)?.det() - 1.0).norm());
            }
            Ok(w)
        }),
    ];
    for nu in [0.5, 1.0] {
        v.push(job(&format!("bessel parametrix jump on (0, inf) (nu = {nu})"), 1e-8, move || {
            let e = C64::from_polar(1.0, -PI * nu);
            let jump = Matrix2C::new(e, e, c(0.0, 0.0), e.conj());
            let mut w: f64 = 0.0;
            for k in 0..20 {
                let x = 0.1 + 0.4 * k as f64;
                let u = bessel_parametrix(nu, c(x, 0.0), Some(Side::Upper))?;
                let l = bessel_parametrix(nu, c(x, 0.0), Some(Side::Lower))?;
                w = w.max(u.max_abs_diff(&(l * jump)) / u.max_abs().max(1.0));
            }
            Ok(w)
        }));
    }
    v.extend([
        job("f_nu three-term recurrence (nu = 1.5, zeta = 0.8)", 1e-11, || recurrence_residual(f_nu, 1.5, c(0.8, 0.0))),
        job("g_nu three-term recurrence (nu = 2.5, zeta = -0.7+0.2i)", 1e-9, || {
            recurrence_residual(g_nu, 2.5, c(-0.7, 0.2))
        }),
        job("zeta^(nu/2) g_nu = H_nu/2 at 2 sqrt(zeta)", 1e-9, || {
            let (nu, z) = (0.5, c(0.9, 0.6));
            let lhs = pow_cut(z, nu / 2.0) * g_nu(nu, z)?;
            let s = z.sqrt();
            Ok(rel(lhs, 0.5 * hankel1(nu, 2.0 * s)?.0))
        }),
        job("bessel kernel from the parametrix", 1e-9, || {
            let (nu, z1, z2) = (0.5, c(0.7, 0.3), c(1.6, -0.4));
            let m = bessel_parametrix(nu, z1, None)?.adj() * bessel_parametrix(nu, z2, None)?;
            Ok(rel(m[(1, 0)] / (z1 - z2), -2.0 * PI * C64::i() * bessel_kernel(nu, z1, z2)?))
        }),
        job("block determinant identity, 50 instances", 1e-10, move || Ok(lemma_instances(seed, 50))),
        job("block determinant identity, vanishing row", 1e-10, || {
            let a = [c(0.0, 0.0), c(0.4, 0.1)];
            let b = [c(0.2, -0.3), c(0.7, 0.2)];
            let (cc, d) = ([c(0.5, 0.5), c(-0.3, 0.1)], [c(0.1, 0.9), c(0.6, -0.2)]);
            let (x, y) = ([c(0.1, 0.0), c(1.2, 0.2)], [c(0.4, 1.0), c(1.5, 1.3)]);
            let (l, r) = detid_check(&a, &b, &cc, &d, &x, &y);
            Ok((l - r).norm() / l.norm().max(r.norm()))
        }),
    ]);
    for (case, kind, g, b) in [
        (Case::I, ParametrixKind::Airy, vec![c(0.3, 0.4), c(-0.5, 0.2)], vec![c(0.8, -0.3), c(0.1, 0.9)]),
        (Case::II, ParametrixKind::Airy, vec![c(0.3, 0.4), c(-0.5, 0.2)], vec![c(0.8, -0.3), c(0.1, 0.9)]),
        (Case::III, ParametrixKind::Airy, vec![c(0.3, 0.4), c(-0.5, 0.2)], vec![c(0.8, -0.3), c(0.1, 0.9)]),
        (Case::I, ParametrixKind::Bessel(0.5), vec![c(0.3, 0.4), c(1.5, 0.2)], vec![c(0.8, -0.3), c(0.1, 0.9)]),
    ] {
        v.push(job(&format!("limit kernel determinant vs block form, case {case:?}, {kind:?}"), 1e-9, move || {
            Ok(rel(limit_rhs(case, kind, &g, &b, None)?, block_det_form(case, kind, &g, &b, None)?))
        }));
    }
    v.extend([
        job("Harish-Chandra constant K_2 = pi/2", 1e-6, || Ok((hc_constant(2)? / (PI / 2.0) - 1.0).abs())),
        job("Harish-Chandra constant K_3 = pi^3/6", 1e-6, || Ok((hc_constant(3)? / (PI.powi(3) / 6.0) - 1.0).abs())),
        job("2x2 HCIZ closed form vs Euler-angle quadrature", 1e-10, || {
            let (a, b) = ([c(0.3, 0.1), c(-0.4, 0.0)], [c(1.1, 0.0), c(0.2, -0.3)]);
            Ok(rel(hciz_2x2(a, b)?, hciz_2x2_euler(a, b, 40)))
        }),
        job("soft limit as Kontsevich ratio, S = 1", 1e-10, || {
            let y = [c(0.8, 0.1), c(1.3, -0.2)];
            Ok(rel(thm_soft_rhs(&y)?, soft_rhs_direct(&y)?))
        }),
        job("soft limit as Kontsevich ratio, S = 2", 1e-10, || {
            let y = [c(0.8, 0.1), c(1.3, -0.2), c(0.6, 0.3), c(1.7, 0.0)];
            Ok(rel(thm_soft_rhs(&y)?, soft_rhs_direct(&y)?))
        }),
        job("Kontsevich determinant vs matrix integral, y = (2, 3)", 1e-6, || {
            let y = [c(2.0, 0.0), c(3.0, 0.0)];
            Ok(rel(z_kont(&y)?, brute_z_kont_2(y[0], y[1], KontContour::Bent, 40)?))
        }),
        job("generalized Kontsevich, sector 0, x = 0", 1e-10, || {
            let y = [c(1.2, 0.1), c(0.9, -0.2)];
            Ok(rel(z_kont_generalized(&y, &[0, 0], c(0.0, 0.0))?, z_kont(&y)?))
        }),
        job("matrix Bessel f-determinant vs CUE integral (nu = 0.5)", 1e-6, || {
            let y = [c(1.0, 0.0), c(2.0, 0.0)];
            Ok(rel(thm_hard_rhs(Case::I, 0.5, &y)?, brute_bessel_integral_2(0.5, y[0], y[1], BesselOracle::CueLoop, 64)?))
        }),
        job("matrix Bessel g-determinant vs positive-matrix integral (nu = 0.5)", 1e-6, || {
            let y = [c(1.5, 0.0), c(2.5, 0.0)];
            Ok(rel(
                thm_hard_rhs(Case::III, 0.5, &y)?,
                brute_bessel_integral_2(0.5, y[0], y[1], BesselOracle::PositiveHermitian, 64)?,
            ))
        }),
        job("CUE loop vs circle at integer nu = 2", 1e-10, || {
            let (a, b) = (c(1.0, 0.0), c(2.0, 0.0));
            Ok(rel(
                brute_bessel_integral_2(2.0, a, b, BesselOracle::CueCircle, 64)?,
                brute_bessel_integral_2(2.0, a, b, BesselOracle::CueLoop, 64)?,
            ))
        }),
        job("det Y_m = 1", 1e-10, || {
            let w = WeightSpec::soft(vec![0.0, 0.0, 0.0, 0.0, 0.25], 4)?;
            let t = recurrence_coeffs(&w, 8)?;
            let mut e: f64 = 0.0;
            for z in [c(0.3, 0.4), c(-1.0, -0.2), c(2.5, 0.1)] {
                e = e.max((rh_matrix_y(&w, &t, 5, z)?.det() - 1.0).norm());
            }
            Ok(e)
        }),
        job("Christoffel-Darboux closed form vs sum", 1e-12, || {
            let w = WeightSpec::hard(vec![0.0, 1.0], 5, 0.5)?;
            let t = recurrence_coeffs(&w, 10)?;
            let (x, y) = (c(0.3, 0.1), c(1.2, -0.05));
            Ok(rel(cd_kernel_closed(&t, 6, x, y), cd_kernel(&t, 6, x, y)))
        }),
        job("equilibrium measure: unit mass, phi = 0 on the support", 1e-7, || {
            let eq = solve_one_cut(&Poly::new(vec![0.0, 0.0, 0.0, 0.0, 0.25]), EdgeKind::Soft)?;
            let mut e = (eq.mass()? - 1.0).abs();
            for x in [-1.0, 0.2, 1.3] {
                e = e.max(eq.effective_potential(x)?.abs());
            }
            Ok(e)
        }),
    ]);
    for &n in n_list {
        for case in [Case::I, Case::II, Case::III] {
            v.push(job(&format!("finite-n formula vs eigenvalue integral, case {case:?}, n = {n}"), 1e-6, move || {
                finite_n(case, n, seed)
            }));
        }
    }
    v
}

pub fn run_all(n_list: &[usize], seed: u64, tol: Option<f64>) -> Vec<Check> {
    use rayon::prelude::*;
    jobs(n_list, seed)
        .into_par_iter()
        .map(|(name, t, f)| {
            let tol = tol.unwrap_or(t);
            match f() {
                Ok(r) => Check { name, residual: r, tol, error: None },
                Err(e) => Check { name, residual: f64::INFINITY, tol, error: Some(e.to_string()) },
            }
        })
        .collect()
}

/// Sizes for the finite-n checks; brute-force integrals get expensive past 3.
pub const DEFAULT_N: [usize; 2] = [2, 3];
pub const MAX_VERIFY_N: usize = 4;

//! The eleven acceptance criteria, each evaluated at its stated tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmt_edge::correlators::{corr, scaled_hard_lhs, scaled_soft_lhs, EdgeProblem, PointSet};
use rmt_edge::kontsevich::{thm_hard_rhs, thm_soft_rhs, z_kont};
use rmt_edge::linalg::vandermonde;
use rmt_edge::oracles::{brute_bessel_integral_2, brute_finite_n, brute_z_kont_2, hc_constant, BesselOracle, KontContour};
use rmt_edge::orthopoly::{recurrence_coeffs, WeightSpec};
use rmt_edge::parametrix::{
    airy_kernel, airy_parametrix, bessel_parametrix, detid_check, Case, Side,
};
use rmt_edge::linalg::{det, Matrix2C};
use rmt_edge::C64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {} ({:.1} s, budget {} s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

fn run(id: usize, name: &'static str, budget: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = f();
    let elapsed = t.elapsed();
    let budget = Duration::from_secs(budget);
    let pass = ok && elapsed <= budget;
    let detail = if ok && !pass { format!("{detail}; over time budget") } else { detail };
    Outcome { id, name, pass, detail, elapsed, budget }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn criterion_1() -> Outcome {
    run(1, "Harish-Chandra constant K_2, K_3", 30, || {
        let k2 = hc_constant(2);
        let k3 = hc_constant(3);
        match (k2, k3) {
            (Ok(k2), Ok(k3)) => {
                let e2 = (k2 / (PI / 2.0) - 1.0).abs();
                let e3 = (k3 / (PI.powi(3) / 6.0) - 1.0).abs();
                (e2 < 1e-6 && e3 < 1e-6, format!("K_2 = {k2:.10} (rel {e2:.1e}), K_3 = {k3:.10} (rel {e3:.1e})"))
            }
            (a, b) => (false, format!("error: {a:?} {b:?}")),
        }
    })
}

pub fn criterion_2() -> Outcome {
    run(2, "Bessel parametrix determinant and jump", 10, || {
        let mut det_err: f64 = 0.0;
        let mut jump_err: f64 = 0.0;
        for nu in [0.0, 0.5, 1.0, 2.5] {
            let e = C64::from_polar(1.0, -PI * nu);
            let jump = Matrix2C::new(e, e, c(0.0, 0.0), e.conj());
            for k in 0..50 {
                let t = k as f64 / 49.0;
                let z = C64::from_polar(0.05 + 6.0 * t, 0.1 + 6.0 * t);
                match bessel_parametrix(nu, z, None) {
                    Ok(m) => det_err = det_err.max((m.det() - 1.0).norm()),
                    Err(e) => return (false, format!("nu = {nu}, zeta = {z}: {e}")),
                }
                let x = 0.05 + 8.0 * t;
                let up = bessel_parametrix(nu, c(x, 1e-9), None);
                let lo = bessel_parametrix(nu, c(x, -1e-9), None);
                match (up, lo) {
                    (Ok(u), Ok(l)) => {
                        jump_err = jump_err.max(u.max_abs_diff(&(l * jump)) / u.max_abs().max(1.0));
                    }
                    _ => return (false, format!("evaluation failed at x = {x}")),
                }
            }
        }
        (det_err < 1e-10 && jump_err < 1e-6, format!("max |det - 1| = {det_err:.1e}, max jump residual = {jump_err:.1e}"))
    })
}

pub fn criterion_3() -> Outcome {
    run(3, "Airy kernel continuity and Airy-kernel identity", 10, || {
        let mut cont: f64 = 0.0;
        let mut ident: f64 = 0.0;
        for k in 0..50 {
            let t = k as f64 / 49.0;
            let z1 = c(-4.0 + 7.0 * t, 0.0);
            let z2 = c(2.5 - 5.0 * t * t + 0.013, 0.0);
            let entry = |side| -> rmt_edge::Result<C64> {
                let a = airy_parametrix(z1, Some(side))?;
                let b = airy_parametrix(z2, Some(side))?;
                Ok((a.adj() * b)[(1, 0)] / (z1 - z2))
            };
            let (u, l) = match (entry(Side::Upper), entry(Side::Lower)) {
                (Ok(u), Ok(l)) => (u, l),
                _ => return (false, format!("evaluation failed at {z1}, {z2}")),
            };
            let k = airy_kernel(z1, z2).unwrap();
            let scale = k.norm().max(1e-3);
            cont = cont.max((u - l).norm() / scale);
            ident = ident.max((u - (-2.0 * PI * C64::i()) * k).norm() / (2.0 * PI * scale));
        }
        (cont < 1e-10 && ident < 1e-10, format!("continuity {cont:.1e}, kernel identity {ident:.1e}"))
    })
}

fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

pub fn criterion_4() -> Outcome {
    run(4, "block determinant identity, 200 instances", 10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let s = rng.gen_range(1..=4);
            let v = |rng: &mut ChaCha8Rng| (0..s).map(|_| rand_c(rng, 1.0)).collect::<Vec<_>>();
            let (a, b, cc, d) = (v(&mut rng), v(&mut rng), v(&mut rng), v(&mut rng));
            let x: Vec<C64> = (0..s).map(|j| c(j as f64, 0.0) + rand_c(&mut rng, 0.3)).collect();
            let y: Vec<C64> = (0..s).map(|j| c(j as f64 + 0.5, 1.0) + rand_c(&mut rng, 0.3)).collect();
            let (l, r) = detid_check(&a, &b, &cc, &d, &x, &y);
            worst = worst.max((l - r).norm() / l.norm().max(r.norm()));
        }
        (worst < 1e-10, format!("max relative difference {worst:.1e}"))
    })
}

pub fn criterion_5() -> Outcome {
    run(5, "Kontsevich determinant vs matrix integral, 2S = 2", 300, || {
        let mut msgs = vec![];
        let mut ok = true;
        for (a, b) in [(1.0, 1.5), (2.0, 3.0)] {
            let y = [c(a, 0.0), c(b, 0.0)];
            match (z_kont(&y), brute_z_kont_2(y[0], y[1], KontContour::Bent, 40)) {
                (Ok(z), Ok(o)) => {
                    let e = rel(z, o);
                    ok &= e < 1e-5;
                    msgs.push(format!("y = ({a}, {b}): rel {e:.1e}"));
                }
                (x, y) => return (false, format!("error {x:?} {y:?}")),
            }
        }
        (ok, msgs.join(", "))
    })
}

pub fn criterion_6() -> Outcome {
    run(6, "matrix Bessel determinants vs matrix integrals, 2S = 2", 300, || {
        let mut msgs = vec![];
        let mut ok = true;
        for nu in [0.5, 2.0] {
            let y1 = [c(1.0, 0.0), c(2.0, 0.0)];
            let y3 = [c(1.5, 0.0), c(2.5, 0.0)];
            let r1 = thm_hard_rhs(Case::I, nu, &y1).and_then(|r| Ok((r, brute_bessel_integral_2(nu, y1[0], y1[1], BesselOracle::CueLoop, 64)?)));
            let r3 = thm_hard_rhs(Case::III, nu, &y3)
                .and_then(|r| Ok((r, brute_bessel_integral_2(nu, y3[0], y3[1], BesselOracle::PositiveHermitian, 64)?)));
            match (r1, r3) {
                (Ok((a, b)), Ok((p, q))) => {
                    let (e1, e3) = (rel(a, b), rel(p, q));
                    ok &= e1 < 1e-5 && e3 < 1e-5;
                    msgs.push(format!("nu = {nu}: f/CUE {e1:.1e}, g/H+ {e3:.1e}"));
                }
                (x, y) => return (false, format!("error {x:?} {y:?}")),
            }
        }
        (ok, msgs.join(", "))
    })
}

/// Weight `k mod 3`: Gaussian, quartic, Laguerre with `nu = 0.5`.
pub fn criterion_7_weight(k: usize, n: usize) -> WeightSpec {
    match k % 3 {
        0 => WeightSpec::soft(vec![0.0, 0.0, 0.5], n).unwrap(),
        1 => WeightSpec::soft(vec![0.0, 0.0, 0.0, 0.0, 0.25], n).unwrap(),
        _ => WeightSpec::hard(vec![0.0, 1.0], n, 0.5).unwrap(),
    }
}

pub fn criterion_7() -> Outcome {
    run(7, "finite-n determinant formulas vs eigenvalue integrals", 300, || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for n in [2usize, 3] {
            for case in [Case::I, Case::II, Case::III] {
                for k in 0..10 {
                    let w = criterion_7_weight(k, n);
                    let t = recurrence_coeffs(&w, n + 4).unwrap();
                    let s = if case == Case::III { rng.gen_range(1..=n.min(2)) } else { rng.gen_range(1..=2) };
                    let re0 = if k % 3 == 2 { 1.0 } else { 0.0 };
                    let pt = |rng: &mut ChaCha8Rng| {
                        let im = rng.gen_range(0.3..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        c(re0 + rng.gen_range(-1.0..1.0), im)
                    };
                    let b: Vec<C64> = (0..s).map(|_| pt(&mut rng)).collect();
                    let cc: Vec<C64> = (0..s).map(|_| pt(&mut rng)).collect();
                    let pts = match PointSet::new(b, cc) {
                        Ok(p) => p,
                        Err(e) => return (false, format!("{e}")),
                    };
                    let v = corr(case, &w, &t, n, &pts);
                    let o = brute_finite_n(&w, &pts.b, &pts.c, case);
                    match (v, o) {
                        (Ok(v), Ok(o)) => worst = worst.max(rel(v, o)),
                        (x, y) => return (false, format!("n = {n} {case:?}: {x:?} {y:?}")),
                    }
                    count += 1;
                }
            }
        }
        (worst < 1e-5, format!("{count} point sets, max relative error {worst:.1e}"))
    })
}

/// Relative errors of a scaled left side against its limit over `ns`.
pub fn convergence(ns: &[usize], lhs: impl Fn(usize) -> rmt_edge::Result<C64>, rhs: C64) -> rmt_edge::Result<Vec<f64>> {
    ns.iter().map(|&n| Ok(rel(lhs(n)?, rhs))).collect()
}

fn judge(errs: &[f64], last_tol: f64, ratio_tol: Option<f64>) -> (bool, String) {
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[1] / w[0]).collect();
    let ratio_ok = ratio_tol.map_or(true, |r| ratios.iter().all(|&q| q < r));
    let last = *errs.last().unwrap();
    let ok = decreasing && ratio_ok && last < last_tol;
    let errs_s: Vec<String> = errs.iter().map(|e| format!("{e:.3e}")).collect();
    let ratios_s: Vec<String> = ratios.iter().map(|e| format!("{e:.3}")).collect();
    (
        ok,
        format!(
            "rel_err [{}], ratios [{}], decreasing {decreasing}, last < {last_tol:e}: {}",
            errs_s.join(", "),
            ratios_s.join(", "),
            last < last_tol
        ),
    )
}

pub fn soft_convergence(v: Vec<f64>, ns: &[usize], y: &[C64]) -> rmt_edge::Result<Vec<f64>> {
    let r = thm_soft_rhs(y)?;
    convergence(ns, |n| scaled_soft_lhs(&EdgeProblem::soft(v.clone(), n)?, y), r)
}

pub fn hard_convergence(case: Case, nu: f64, ns: &[usize], y: &[C64]) -> rmt_edge::Result<Vec<f64>> {
    let r = thm_hard_rhs(case, nu, y)?;
    convergence(ns, |n| scaled_hard_lhs(case, &EdgeProblem::hard(vec![0.0, 1.0], n, nu)?, y), r)
}

pub const NS: [usize; 3] = [32, 64, 128];

pub fn criterion_8() -> Outcome {
    run(8, "soft-edge convergence, Gaussian V", 600, || {
        match soft_convergence(vec![0.0, 0.0, 0.5], &NS, &[c(0.9, 0.0), c(1.1, 0.0)]) {
            Ok(e) => judge(&e, 5e-2, Some(0.8)),
            Err(e) => (false, format!("{e}")),
        }
    })
}

pub fn criterion_9() -> Outcome {
    run(9, "hard-edge convergence, V = x", 600, || {
        let y = [c(1.0, 0.0), c(2.0, 0.0)];
        let mut ok = true;
        let mut msgs = vec![];
        for nu in [0.0, 0.5] {
            for case in [Case::I, Case::III] {
                match hard_convergence(case, nu, &NS, &y) {
                    Ok(e) => {
                        let (p, m) = judge(&e, 5e-2, Some(0.8));
                        ok &= p;
                        msgs.push(format!("nu = {nu} {case:?}: {m}"));
                    }
                    Err(e) => return (false, format!("{e}")),
                }
            }
        }
        (ok, msgs.join("; "))
    })
}

pub fn criterion_10() -> Outcome {
    run(10, "soft-edge universality, quartic V", 900, || {
        match soft_convergence(vec![0.0, 0.0, 0.0, 0.0, 0.25], &NS, &[c(0.9, 0.0), c(1.1, 0.0)]) {
            Ok(e) => judge(&e, 1e-1, None),
            Err(e) => (false, format!("{e}")),
        }
    })
}

/// `det[K_Ai(y_{S+l}^2, y_j^2)] / (D(c) D(b))` with `c = y^2` second half, `b = y^2` first half.
pub fn airy_kernel_ratio(y: &[C64]) -> rmt_edge::Result<C64> {
    let s = y.len() / 2;
    let x: Vec<C64> = y.iter().map(|v| v * v).collect();
    let (b, cc) = (&x[..s], &x[s..]);
    let mut m = vec![c(0.0, 0.0); s * s];
    for l in 0..s {
        for j in 0..s {
            m[l * s + j] = airy_kernel(cc[l], b[j])?;
        }
    }
    Ok(det(&m, s) / (vandermonde(cc) * vandermonde(b)))
}

pub fn criterion_11() -> Outcome {
    run(11, "Airy-kernel determinant equals the Kontsevich expression", 60, || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for s in [1usize, 2] {
            for _ in 0..20 {
                let y: Vec<C64> = (0..2 * s)
                    .map(|j| c(0.5 + 0.4 * j as f64 + rng.gen_range(0.0..0.3), rng.gen_range(-0.4..0.4)))
                    .collect();
                match (airy_kernel_ratio(&y), thm_soft_rhs(&y)) {
                    (Ok(a), Ok(b)) => worst = worst.max(rel(a, b)),
                    (x, z) => return (false, format!("{x:?} {z:?}")),
                }
            }
        }
        (worst < 1e-7, format!("40 point sets, max relative error {worst:.1e}"))
    })
}

pub fn all() -> Vec<Outcome> {
    let fns: [fn() -> Outcome; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    fns.iter().map(|f| f()).collect()
}

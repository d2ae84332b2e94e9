//! Brute-force quadratures used as independent checks. Nothing here calls the
//! orthogonal-polynomial, parametrix or Kontsevich code.

use crate::error::{Error, Result};
use crate::orthopoly::{EdgeKind, WeightSpec};
use crate::parametrix::Case;
use crate::quad::{gauss_legendre, graded_breaks, merge_breaks, panel_nodes};
use crate::C64;
use rayon::prelude::*;
use std::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `(1 - e^{-w}) / w` without cancellation near 0.
fn phi1(w: C64) -> C64 {
    if w.norm() < 0.1 {
        let mut term = ONE;
        let mut sum = ONE;
        for k in 2..20 {
            term = -term * w / k as f64;
            sum += term;
        }
        sum
    } else {
        (ONE - (-w).exp()) / w
    }
}

/// Normalized Haar integral `int_{U(2)} e^{Tr(A U B U*)} dU` for diagonal `A`, `B`:
/// `(e^{a1 b1 + a2 b2} - e^{a1 b2 + a2 b1}) / ((a1 - a2)(b1 - b2))`.
pub fn hciz_2x2(a: [C64; 2], b: [C64; 2]) -> Result<C64> {
    if a[0] == a[1] && b[0] == b[1] {
        return Ok((a[0] * b[0] + a[1] * b[1]).exp());
    }
    let w = (a[0] - a[1]) * (b[0] - b[1]);
    Ok((a[0] * b[0] + a[1] * b[1]).exp() * phi1(w))
}

/// Same integral by quadrature over Euler angles,
/// `U = [[e^{i a} cos t, e^{i g} sin t], [-e^{-i g} sin t, e^{-i a} cos t]]`,
/// Haar density `sin(2t) / (4 pi^2)` on `[0, 2pi)^2 x [0, pi/2]`.
pub fn hciz_2x2_euler(a: [C64; 2], b: [C64; 2], nodes: usize) -> C64 {
    let rule = gauss_legendre(nodes);
    let nang = 8;
    let mut total = ZERO;
    for ia in 0..nang {
        let al = 2.0 * PI * ia as f64 / nang as f64;
        for ig in 0..nang {
            let ga = 2.0 * PI * ig as f64 / nang as f64;
            for (x, wq) in rule.0.iter().zip(rule.1.iter()) {
                let t: f64 = 0.25 * PI * (x + 1.0);
                let u = [
                    [C64::from_polar(t.cos(), al), C64::from_polar(t.sin(), ga)],
                    [-C64::from_polar(t.sin(), -ga), C64::from_polar(t.cos(), -al)],
                ];
                let mut tr = ZERO;
                for i in 0..2 {
                    for j in 0..2 {
                        tr += a[i] * b[j] * u[i][j].norm_sqr();
                    }
                }
                total += tr.exp() * (2.0 * t).sin() * wq * 0.25 * PI;
            }
        }
    }
    total / (nang * nang) as f64
}

fn real_line_rule(l: f64, panels: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let br: Vec<f64> = (0..=panels).map(|k| -l + 2.0 * l * k as f64 / panels as f64).collect();
    panel_nodes(&br, n)
}

fn vdm(x: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..x.len() {
        for k in j + 1..x.len() {
            p *= x[k] - x[j];
        }
    }
    p
}

fn det_small(m: &[f64], n: usize) -> f64 {
    match n {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => unreachable!(),
    }
}

/// `int_{H_2} e^{-Tr(M^2/2 - M L)} dM` for `L = diag(l1, l2)` by a 4-dimensional tensor rule
/// in `(M11, M22, Re M12, Im M12)`.
pub fn gaussian_hermitian_2(l1: f64, l2: f64, nodes: usize) -> f64 {
    let (x, w) = real_line_rule(12.0, nodes / 16, 16);
    let d1: f64 = x.iter().zip(&w).map(|(&t, &q)| q * (-t * t / 2.0 + l1 * t).exp()).sum();
    let off: Vec<f64> = x.iter().zip(&w).map(|(&t, &q)| q * (-t * t).exp()).collect();
    x.par_iter()
        .zip(w.par_iter())
        .map(|(&m22, &q22)| {
            let e22 = q22 * (-m22 * m22 / 2.0 + l2 * m22).exp();
            let mut s = 0.0;
            for &a in &off {
                for &b in &off {
                    s += a * b;
                }
            }
            d1 * e22 * s
        })
        .sum()
}

/// `K_n` from the Gaussian computation: left side by 1D factorization
/// (diagonal `int e^{-x^2/2 + l x}`, off-diagonal `int int e^{-a^2 - b^2}`), right side
/// `int Delta(X) det[e^{x_j l_k}] prod e^{-x_j^2/2} dX` by a tensor rule.
pub fn hc_constant(n: usize) -> Result<f64> {
    if !(2..=3).contains(&n) {
        return Err(Error::Invalid("hc_constant supports n = 2, 3".into()));
    }
    let lam = [0.3, -0.2, 0.5];
    let lam = &lam[..n];
    let (x, w) = real_line_rule(14.0, 14, 20);
    let mut lhs = 1.0;
    for &l in lam {
        lhs *= x.iter().zip(&w).map(|(&t, &q)| q * (-t * t / 2.0 + l * t).exp()).sum::<f64>();
    }
    let off: f64 = x.iter().zip(&w).map(|(&t, &q)| q * (-t * t).exp()).sum::<f64>().powi(2);
    lhs *= off.powi((n * (n - 1) / 2) as i32);
    let m = x.len();
    let g: Vec<f64> = x.iter().zip(&w).map(|(&t, &q)| q * (-t * t / 2.0).exp()).collect();
    let rhs: f64 = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            let mut idx = vec![i, 0, 0];
            let inner = m.pow((n - 1) as u32);
            for r in 0..inner {
                let mut rr = r;
                for d in 1..n {
                    idx[d] = rr % m;
                    rr /= m;
                }
                let xs: Vec<f64> = (0..n).map(|d| x[idx[d]]).collect();
                let mut mat = vec![0.0; n * n];
                for j in 0..n {
                    for k in 0..n {
                        mat[j * n + k] = (xs[j] * lam[k]).exp();
                    }
                }
                let wt: f64 = (0..n).map(|d| g[idx[d]]).product();
                s += wt * vdm(&xs) * det_small(&mat, n);
            }
            s
        })
        .sum();
    Ok(lhs * vdm(lam) / rhs)
}

/// Per-dimension nodes for an eigenvalue integral with weight `w`, resolved near the
/// real parts of `poles`; returns `(x, log(quadrature weight * w(x)))`.
fn eigen_nodes(w: &WeightSpec, poles: &[C64], k: usize) -> (Vec<f64>, Vec<f64>) {
    let l = oracle_truncation(w, k);
    match w.edge {
        EdgeKind::Soft => {
            let mut lists = vec![graded_breaks(-l, l, 0.0, l / 16.0, l / 16.0)];
            for p in poles {
                if p.re.abs() < l {
                    lists.push(graded_breaks(-l, l, p.re, (p.im.abs() * 0.7).max(1e-3), l / 16.0));
                }
            }
            let (x, q) = panel_nodes(&merge_breaks(&lists), 10);
            let lw = x.iter().zip(&q).map(|(&t, &qq)| qq.ln() + log_w(w, t)).collect();
            (x, lw)
        }
        EdgeKind::Hard => {
            let ul = l.sqrt();
            let mut lists = vec![graded_breaks(0.0, ul, 0.0, ul / 16.0, ul / 16.0)];
            for p in poles {
                let s = p.sqrt();
                if s.re < ul {
                    lists.push(graded_breaks(0.0, ul, s.re.max(0.0), (s.im.abs() * 0.7).max(1e-3), ul / 16.0));
                }
            }
            let (u, q) = panel_nodes(&merge_breaks(&lists), 10);
            let x: Vec<f64> = u.iter().map(|v| v * v).collect();
            let lw = u.iter().zip(&q).map(|(&v, &qq)| (2.0 * v * qq).ln() + log_w(w, v * v)).collect();
            (x, lw)
        }
    }
}

fn log_w(w: &WeightSpec, x: f64) -> f64 {
    let v: f64 = w.v.c.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    let base = -(w.n as f64) * v;
    if w.edge == EdgeKind::Hard && w.nu != 0.0 {
        base + w.nu * x.ln()
    } else {
        base
    }
}

/// Cutoff where `w(x) |x|^{2k}` has dropped by `e^{-50}` from its maximum.
fn oracle_truncation(w: &WeightSpec, k: usize) -> f64 {
    let f = |x: f64| log_w(w, x) + 2.0 * k as f64 * (1.0 + x.abs()).ln();
    let lo = if w.edge == EdgeKind::Hard { 1e-6 } else { 0.0 };
    let mut peak = f64::NEG_INFINITY;
    let mut x = lo;
    while x < 1e4 {
        peak = peak.max(f(x));
        if w.edge == EdgeKind::Soft {
            peak = peak.max(f(-x));
        }
        x = x * 1.05 + 0.01;
    }
    let mut l: f64 = 1.0;
    loop {
        let edge = if w.edge == EdgeKind::Soft { f(l).max(f(-l)) } else { f(l) };
        if edge < peak - 50.0 && l > 1.0 {
            return l;
        }
        l *= 1.1;
        if l > 1e6 {
            return l;
        }
    }
}

/// Brute-force average of the characteristic-polynomial factors of a case over the
/// `n x n` ensemble with weight `w` (`n = w.n <= 3`).
pub fn brute_finite_n(w: &WeightSpec, b: &[C64], c: &[C64], case: Case) -> Result<C64> {
    if b.len() != c.len() {
        return Err(Error::Invalid("b and c need the same length".into()));
    }
    let poles: Vec<C64> = match case {
        Case::I => vec![],
        Case::II => c.to_vec(),
        Case::III => b.iter().chain(c.iter()).copied().collect(),
    };
    let f = |t: f64| -> C64 {
        let t = C64::new(t, 0.0);
        let mut v = ONE;
        for (&bb, &cc) in b.iter().zip(c) {
            v *= match case {
                Case::I => (bb - t) * (cc - t),
                Case::II => (bb - t) / (cc - t),
                Case::III => ONE / ((bb - t) * (cc - t)),
            };
        }
        v
    };
    brute_average(w, &poles, 2 * b.len(), f)
}

/// `<prod_i f(lambda_i)>` over the `n x n` ensemble with weight `w` (`n = w.n <= 3`), as a
/// ratio of two `n`-dimensional eigenvalue integrals sharing one tensor grid. `poles` are
/// singularities of `f` near the real axis, `deg` bounds the growth of `f`.
pub fn brute_average<F: Fn(f64) -> C64>(w: &WeightSpec, poles: &[C64], deg: usize, f: F) -> Result<C64> {
    let n = w.n;
    if !(1..=3).contains(&n) {
        return Err(Error::Invalid("brute-force averages support n <= 3".into()));
    }
    let (x, lw) = eigen_nodes(w, poles, n + deg / 2 + 1);
    let shift = lw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let g0: Vec<f64> = lw.iter().map(|l| (l - shift).exp()).collect();
    let g: Vec<C64> = x.iter().zip(&g0).map(|(&t, &q)| f(t) * q).collect();
    let m = x.len();
    let (num, den) = match n {
        1 => (g.iter().sum::<C64>(), g0.iter().sum::<f64>()),
        2 => (0..m)
            .into_par_iter()
            .map(|i| {
                let mut s = ZERO;
                let mut z = 0.0;
                for j in i + 1..m {
                    let d = (x[j] - x[i]).powi(2);
                    s += g[i] * g[j] * d;
                    z += g0[i] * g0[j] * d;
                }
                (s, z)
            })
            .reduce(|| (ZERO, 0.0), |a, b| (a.0 + b.0, a.1 + b.1)),
        _ => (0..m)
            .into_par_iter()
            .map(|i| {
                let mut s = ZERO;
                let mut z = 0.0;
                for j in i + 1..m {
                    let dij = (x[j] - x[i]).powi(2);
                    let gij = g[i] * g[j] * dij;
                    let zij = g0[i] * g0[j] * dij;
                    for k in j + 1..m {
                        let d = (x[k] - x[i]).powi(2) * (x[k] - x[j]).powi(2);
                        s += gij * g[k] * d;
                        z += zij * g0[k] * d;
                    }
                }
                (s, z)
            })
            .reduce(|| (ZERO, 0.0), |a, b| (a.0 + b.0, a.1 + b.1)),
    };
    let v = num / den;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NoConvergence("brute-force average is not finite".into()));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KontContour {
    /// `t = s e^{i pi/6}` for `s > 0` and `t = s e^{-i pi/6}` for `s < 0`.
    Bent,
    Real,
}

/// `Z` for a `2 x 2` source `Y = diag(y1, y2)` from the eigenvalue reduction of the
/// cubic matrix integral, divided by its Gaussian normalization
/// `prod sqrt(pi / y_j) * pi / (y1 + y2)`.
pub fn brute_z_kont_2(y1: C64, y2: C64, contour: KontContour, panels: usize) -> Result<C64> {
    if y1.re <= 0.0 || y2.re <= 0.0 {
        return Err(Error::Domain("needs Re y > 0".into()));
    }
    if y1 == y2 {
        return Err(Error::IllConditioned("coincident y".into()));
    }
    let half = match contour {
        KontContour::Bent => 6.5,
        KontContour::Real => 4.0 + (60.0 / y1.re.min(y2.re)).sqrt(),
    };
    let br: Vec<f64> = (0..=2 * panels).map(|k| -half + half * k as f64 / panels as f64).collect();
    let (s, q) = panel_nodes(&br, 24);
    let pts: Vec<(C64, C64)> = s
        .iter()
        .zip(&q)
        .map(|(&s, &q)| {
            let dir = match contour {
                KontContour::Bent => C64::from_polar(1.0, if s >= 0.0 { PI / 6.0 } else { -PI / 6.0 }),
                KontContour::Real => ONE,
            };
            (dir * s, dir * q)
        })
        .collect();
    let e: Vec<C64> = pts.iter().map(|(t, _)| (I * t * t * t / 3.0).exp()).collect();
    let num: C64 = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let (t1, w1) = pts[i];
            let mut acc = ZERO;
            for (j, &(t2, w2)) in pts.iter().enumerate() {
                let h = hciz_2x2([-y1, -y2], [t1 * t1, t2 * t2]).unwrap_or(ZERO);
                acc += w2 * (t1 - t2) * (t1 - t2) * e[j] * h;
            }
            acc * w1 * e[i]
        })
        .sum::<C64>()
        * (PI / 2.0);
    let den = (PI / y1).sqrt() * (PI / y2).sqrt() * PI / (y1 + y2);
    let v = num / den;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NoConvergence("oscillatory integral did not settle".into()));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOracle {
    /// Loop from 0 out along `arg -pi`, around the unit circle, back along `arg pi`.
    CueLoop,
    /// Unit circle only (integer `nu`).
    CueCircle,
    /// Positive half-line.
    PositiveHermitian,
}

fn cue_path(nu: f64, nodes: usize, circle_only: bool) -> Vec<(C64, C64, C64)> {
    // (t, dt, t^{nu-1})
    let rule = gauss_legendre(nodes);
    let mut out = Vec::new();
    if !circle_only {
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            let r = 0.5 * (x + 1.0);
            let wr = 0.5 * w;
            // lower ray outward: t = r e^{-i pi}
            out.push((C64::new(-r, 0.0), C64::new(-wr, 0.0), C64::from_polar(r.powf(nu - 1.0), -PI * (nu - 1.0))));
            // upper ray inward: t = r e^{i pi}, dt = -e^{i pi} dr with r decreasing
            out.push((C64::new(-r, 0.0), C64::new(wr, 0.0), C64::from_polar(r.powf(nu - 1.0), PI * (nu - 1.0))));
        }
    }
    for k in 0..4 {
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            let a = -PI + 0.5 * PI * (k as f64 + 0.5 * (x + 1.0));
            let t = C64::from_polar(1.0, a);
            out.push((t, I * t * (0.25 * PI * w), C64::from_polar(1.0, (nu - 1.0) * a)));
        }
    }
    out
}

/// Two-eigenvalue reduction of the matrix Bessel integrals, scaled as
/// `(y1 y2)^{nu/2} I / pi` with
/// CUE: `I = (pi/2) (2 pi i)^{-2} int int D(t) D(1/t) (t1 t2)^{nu-1} e^{1/t1 + 1/t2} HC(-Y, T)`,
/// positive Hermitian: `I = (pi/2) int int D(t)^2 (t1 t2)^{nu-2} e^{-1/t1 - 1/t2} HC(-Y, T)`.
pub fn brute_bessel_integral_2(nu: f64, y1: C64, y2: C64, kind: BesselOracle, nodes: usize) -> Result<C64> {
    if y1 == y2 {
        return Err(Error::IllConditioned("coincident y".into()));
    }
    let pre = (y1 * y2).powf(nu / 2.0) / PI * (PI / 2.0);
    let total: C64 = match kind {
        BesselOracle::CueLoop | BesselOracle::CueCircle => {
            if kind == BesselOracle::CueCircle && (nu - nu.round()).abs() > 1e-14 {
                return Err(Error::Domain("the unit circle needs integer nu".into()));
            }
            let path = cue_path(nu, nodes, kind == BesselOracle::CueCircle);
            let e: Vec<C64> = path.iter().map(|(t, dt, p)| dt * p * t.inv().exp()).collect();
            (0..path.len())
                .into_par_iter()
                .map(|i| {
                    let t1 = path[i].0;
                    let mut acc = ZERO;
                    for (j, &(t2, _, _)) in path.iter().enumerate() {
                        let d = (t2 - t1) * (t2.inv() - t1.inv());
                        let h = hciz_2x2([-y1, -y2], [t1, t2]).unwrap_or(ZERO);
                        acc += e[j] * d * h;
                    }
                    acc * e[i]
                })
                .sum::<C64>()
                / (2.0 * PI * I).powi(2)
        }
        BesselOracle::PositiveHermitian => {
            if y1.re <= 0.0 || y2.re <= 0.0 {
                return Err(Error::Domain("needs Re y > 0".into()));
            }
            let umax = (80.0 / y1.re.min(y2.re)).ln();
            let br: Vec<f64> = (0..=40).map(|k| -6.0 + (umax + 6.0) * k as f64 / 40.0).collect();
            let (u, q) = panel_nodes(&br, nodes.max(16) / 2);
            let e: Vec<(f64, f64)> = u
                .iter()
                .zip(&q)
                .map(|(&u, &q)| {
                    let t = u.exp();
                    (t, q * t * t.powf(nu - 2.0) * (-1.0 / t).exp())
                })
                .collect();
            (0..e.len())
                .into_par_iter()
                .map(|i| {
                    let (t1, w1) = e[i];
                    let mut acc = ZERO;
                    for &(t2, w2) in &e {
                        let h = hciz_2x2([-y1, -y2], [C64::new(t1, 0.0), C64::new(t2, 0.0)]).unwrap_or(ZERO);
                        acc += h * (w2 * (t1 - t2).powi(2));
                    }
                    acc * w1
                })
                .sum::<C64>()
        }
    };
    Ok(pre * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hciz_matches_euler_quadrature() {
        let a = [c(1.0, 0.0), c(2.0, 0.0)];
        let b = [c(0.5, 0.0), c(-0.3, 0.0)];
        let v = hciz_2x2(a, b).unwrap();
        let q = hciz_2x2_euler(a, b, 48);
        assert!((v - q).norm() < 1e-8 * v.norm(), "{v} {q}");
        let vs = hciz_2x2(b, a).unwrap();
        assert!((v - vs).norm() < 1e-14 * v.norm());
    }

    #[test]
    fn hciz_confluent_limit() {
        let a = [c(1.0, 0.2), c(-0.4, 0.0)];
        let v = hciz_2x2(a, [c(0.7, 0.0), c(0.7 + 1e-9, 0.0)]).unwrap();
        let want = (a[0] * 0.7 + a[1] * 0.7).exp();
        assert!((v - want).norm() < 1e-8 * want.norm());
    }

    #[test]
    fn gaussian_hermitian_closed_form() {
        let v = gaussian_hermitian_2(0.3, -0.2, 64);
        let want = ((0.09 + 0.04) / 2.0f64).exp() * PI * 2.0 * PI;
        assert!((v / want - 1.0).abs() < 1e-6);
    }

    #[test]
    fn brute_normalization_and_heine() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 2).unwrap();
        let v = brute_finite_n(&w, &[], &[], Case::I).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        // Heine: <det(x - M)> = p_2(x) = x^2 - 1/2 for the weight e^{-x^2}
        let xi = 0.7;
        let v = brute_average(&w, &[], 1, |t| c(xi - t, 0.0)).unwrap();
        assert!((v - (xi * xi - 0.5)).norm() < 1e-12);
    }
}

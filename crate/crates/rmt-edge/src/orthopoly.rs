//! Monic orthogonal polynomials for `e^{-nV}` (soft) and `x^nu e^{-nV}` (hard)
//! weights, their Cauchy transforms, the matrix `Y_m` and Christoffel-Darboux kernels.
//!
//! Internally everything runs through the orthonormal family `p^_k = p_k / sqrt(h_k)`,
//! which stays in range where the monic `p_k` and `h_k` would not.

use crate::error::{Error, Result};
use crate::linalg::Matrix2C;
use crate::poly::Poly;
use crate::quad::{gauss_legendre, graded_breaks, panel_nodes};
use crate::C64;
use libm::lgamma;
use std::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub const MAX_DEGREE: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Soft,
    Hard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub edge: EdgeKind,
    pub v: Poly,
    pub n: usize,
    pub nu: f64,
}

impl WeightSpec {
    /// `e^{-n V(x)}` on the real line.
    pub fn soft(v: Vec<f64>, n: usize) -> Result<Self> {
        let w = WeightSpec { edge: EdgeKind::Soft, v: Poly::new(v), n, nu: 0.0 };
        w.validate()?;
        Ok(w)
    }

    /// `x^nu e^{-n V(x)}` on the positive half-line.
    pub fn hard(v: Vec<f64>, n: usize, nu: f64) -> Result<Self> {
        let w = WeightSpec { edge: EdgeKind::Hard, v: Poly::new(v), n, nu };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        let d = self.v.degree();
        match self.edge {
            EdgeKind::Soft => {
                if d < 2 || d % 2 == 1 || self.v.leading() <= 0.0 {
                    return Err(Error::Invalid("soft V needs even degree >= 2 and positive leading coefficient".into()));
                }
            }
            EdgeKind::Hard => {
                if d < 1 || self.v.leading() <= 0.0 {
                    return Err(Error::Invalid("hard V needs degree >= 1 and positive leading coefficient".into()));
                }
                if !(self.nu > -1.0) {
                    return Err(Error::Invalid("nu must exceed -1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `log w(x)` for `x` in the support.
    pub fn log_weight(&self, x: f64) -> f64 {
        let base = -self.nf() * self.v.eval(x);
        match self.edge {
            EdgeKind::Soft => base,
            EdgeKind::Hard => {
                if self.nu == 0.0 {
                    base
                } else {
                    base + self.nu * x.ln()
                }
            }
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        if self.edge == EdgeKind::Hard && x <= 0.0 {
            return 0.0;
        }
        self.log_weight(x).exp()
    }

    /// `n V(z)`.
    pub fn nv(&self, z: C64) -> C64 {
        self.v.eval_c(z) * self.nf()
    }

    /// Distance from `z` to the support `J`.
    pub fn dist_to_support(&self, z: C64) -> f64 {
        match self.edge {
            EdgeKind::Soft => z.im.abs(),
            EdgeKind::Hard => {
                if z.re >= 0.0 {
                    z.im.abs()
                } else {
                    z.norm()
                }
            }
        }
    }

    fn is_quadratic_soft(&self) -> bool {
        self.edge == EdgeKind::Soft && self.v.degree() == 2
    }

    fn is_linear_hard(&self) -> bool {
        self.edge == EdgeKind::Hard && self.v.degree() == 1
    }

    /// Truncation length `L` of the support so that `w(x) x^{2k}` is below `e^{-46}` of its peak.
    pub fn truncation(&self, k: usize) -> f64 {
        let g = |x: f64| self.log_weight(x) + 2.0 * k as f64 * (1.0 + x.abs()).ln();
        let (lo, hi) = match self.edge {
            EdgeKind::Soft => (-1.0, 1.0),
            EdgeKind::Hard => (0.0, 1.0),
        };
        let mut l = 1.0;
        loop {
            let mut peak = f64::NEG_INFINITY;
            let m = 2000;
            for i in 0..=m {
                let x = lo * l + (hi - lo) * l * i as f64 / m as f64;
                if self.edge == EdgeKind::Hard && x <= 0.0 {
                    continue;
                }
                peak = peak.max(g(x));
            }
            let edge_val = match self.edge {
                EdgeKind::Soft => g(l).max(g(-l)),
                EdgeKind::Hard => g(l),
            };
            if edge_val < peak - 46.0 {
                return l;
            }
            l *= 1.25;
            if l > 1e8 {
                return l;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub alpha: Vec<f64>,
    /// `beta[0] = int w`, `beta[k] = h_k / h_{k-1}`.
    pub beta: Vec<f64>,
    pub h: Vec<f64>,
    pub log_h: Vec<f64>,
    pub maxdeg: usize,
}

impl RecurrenceTable {
    pub fn log_beta0(&self) -> f64 {
        self.log_h[0]
    }

    fn from_parts(alpha: Vec<f64>, beta_tail: Vec<f64>, log_beta0: f64, maxdeg: usize) -> Result<Self> {
        let mut beta = vec![log_beta0.exp()];
        beta.extend_from_slice(&beta_tail[1..]);
        let mut log_h = vec![log_beta0];
        for k in 1..=maxdeg {
            if !(beta[k] > 0.0) {
                return Err(Error::Instability(format!("beta_{k} = {} is not positive", beta[k])));
            }
            log_h.push(log_h[k - 1] + beta[k].ln());
        }
        let h = log_h.iter().map(|v| v.exp()).collect();
        Ok(RecurrenceTable { alpha, beta, h, log_h, maxdeg })
    }
}

/// Recurrence coefficients up to degree `maxdeg` (`alpha_k`, `beta_k` for `k <= maxdeg`).
pub fn recurrence_coeffs(w: &WeightSpec, maxdeg: usize) -> Result<RecurrenceTable> {
    if maxdeg > MAX_DEGREE {
        return Err(Error::Invalid(format!("maxdeg {maxdeg} exceeds {MAX_DEGREE}")));
    }
    w.validate()?;
    let n = w.nf();
    if w.is_quadratic_soft() {
        let (c0, c1, c2) = (w.v.c[0], w.v.c[1], w.v.c[2]);
        let alpha = vec![-c1 / (2.0 * c2); maxdeg + 1];
        let beta: Vec<f64> = (0..=maxdeg).map(|k| k as f64 / (2.0 * n * c2)).collect();
        let log_b0 = 0.5 * (PI / (n * c2)).ln() - n * (c0 - c1 * c1 / (4.0 * c2));
        return RecurrenceTable::from_parts(alpha, beta, log_b0, maxdeg);
    }
    if w.is_linear_hard() {
        let (c0, c1) = (w.v.c[0], w.v.c[1]);
        let s = n * c1;
        let nu = w.nu;
        let alpha = (0..=maxdeg).map(|k| (2.0 * k as f64 + nu + 1.0) / s).collect();
        let beta: Vec<f64> = (0..=maxdeg).map(|k| k as f64 * (k as f64 + nu) / (s * s)).collect();
        let log_b0 = lgamma(nu + 1.0) - (nu + 1.0) * s.ln() - n * c0;
        return RecurrenceTable::from_parts(alpha, beta, log_b0, maxdeg);
    }
    stieltjes(w, maxdeg)
}

/// Discretized Stieltjes procedure on 4096 Gauss-Legendre nodes.
fn stieltjes(w: &WeightSpec, maxdeg: usize) -> Result<RecurrenceTable> {
    let l = w.truncation(maxdeg + 1);
    let rule = gauss_legendre(4096);
    let mut xs = Vec::with_capacity(4096);
    let mut lws = Vec::with_capacity(4096);
    for (u, gw) in rule.0.iter().zip(rule.1.iter()) {
        match w.edge {
            EdgeKind::Soft => {
                let x = l * u;
                xs.push(x);
                lws.push((gw * l).ln() + w.log_weight(x));
            }
            EdgeKind::Hard => {
                // x = L v^2, v = (u + 1)/2
                let v = 0.5 * (u + 1.0);
                let x = l * v * v;
                xs.push(x);
                lws.push((0.5 * gw * 2.0 * l * v).ln() + w.log_weight(x));
            }
        }
    }
    let m = lws.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ws: Vec<f64> = lws.iter().map(|v| (v - m).exp()).collect();
    let total: f64 = ws.iter().sum();
    let log_b0 = m + total.ln();
    let ws: Vec<f64> = ws.iter().map(|v| v / total).collect();
    let np = xs.len();
    let mut q_prev = vec![0.0; np];
    let mut q = vec![1.0; np];
    let mut alpha = Vec::with_capacity(maxdeg + 1);
    let mut beta: Vec<f64> = vec![0.0];
    for k in 0..=maxdeg {
        let a: f64 = (0..np).map(|i| ws[i] * xs[i] * q[i] * q[i]).sum();
        alpha.push(a);
        if k == maxdeg {
            break;
        }
        let sb = beta[k].sqrt();
        let mut r: Vec<f64> = (0..np).map(|i| (xs[i] - a) * q[i] - sb * q_prev[i]).collect();
        // one pass of re-orthogonalisation against the two previous vectors
        let c0: f64 = (0..np).map(|i| ws[i] * r[i] * q[i]).sum();
        let c1: f64 = (0..np).map(|i| ws[i] * r[i] * q_prev[i]).sum();
        for i in 0..np {
            r[i] -= c0 * q[i] + c1 * q_prev[i];
        }
        let b: f64 = (0..np).map(|i| ws[i] * r[i] * r[i]).sum();
        if !(b > 0.0) {
            return Err(Error::Instability(format!("beta_{} lost positivity", k + 1)));
        }
        beta.push(b);
        let sb1 = b.sqrt();
        q_prev = std::mem::replace(&mut q, r.iter().map(|v| v / sb1).collect());
    }
    RecurrenceTable::from_parts(alpha, beta, log_b0, maxdeg)
}

/// Monic `p_k(z)`.
pub fn eval_p(t: &RecurrenceTable, k: usize, z: C64) -> C64 {
    let mut p0 = ZERO;
    let mut p1 = C64::new(1.0, 0.0);
    for j in 0..k {
        let b = if j == 0 { 0.0 } else { t.beta[j] };
        let p2 = (z - t.alpha[j]) * p1 - p0 * b;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `p^_k(z) e^{s}` for `k = 0..=m` where `s` is a caller-chosen log prefactor.
pub fn orthonormal_scaled(t: &RecurrenceTable, m: usize, z: C64, log_pref: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(m + 1);
    let p0 = (log_pref - 0.5 * t.log_beta0()).exp();
    out.push(p0);
    if m == 0 {
        return out;
    }
    let mut prev = ZERO;
    let mut cur = p0;
    for k in 0..m {
        let sbk = if k == 0 { 0.0 } else { t.beta[k].sqrt() };
        let next = ((z - t.alpha[k]) * cur - prev * sbk) / t.beta[k + 1].sqrt();
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

/// Orthonormal `p^_k(z)`, `k = 0..=m`.
pub fn eval_orthonormal(t: &RecurrenceTable, m: usize, z: C64) -> Vec<C64> {
    orthonormal_scaled(t, m, z, ZERO)
}

/// `p^_k(z) e^{-n V(z)/2}`, `k = 0..=m`.
pub fn eval_orthonormal_weighted(w: &WeightSpec, t: &RecurrenceTable, m: usize, z: C64) -> Vec<C64> {
    orthonormal_scaled(t, m, z, -w.nv(z) * 0.5)
}

/// Quadrature nodes in `x` with the Jacobian-weighted log weight, adapted to a pole at `z`.
fn cauchy_nodes(w: &WeightSpec, m: usize, z: C64) -> (Vec<f64>, Vec<f64>) {
    let l = w.truncation(m + 1);
    match w.edge {
        EdgeKind::Soft => {
            let mw = (z.im.abs() * 0.5).max(1e-14 * l);
            let br = graded_breaks(-l, l, z.re, mw, l / 64.0);
            let (xs, gw) = panel_nodes(&br, 32);
            let lw = xs.iter().zip(gw.iter()).map(|(&x, &g)| g.ln() + w.log_weight(x)).collect();
            (xs, lw)
        }
        EdgeKind::Hard => {
            // x = u^2 removes the x^nu endpoint behaviour; the pole sits at u = sqrt(z)
            let ul = l.sqrt();
            let s = z.sqrt();
            let mw = (s.im.abs() * 0.5).max(1e-14 * ul);
            let br = graded_breaks(0.0, ul, s.re.max(0.0), mw, ul / 64.0);
            let (us, gw) = panel_nodes(&br, 32);
            let xs: Vec<f64> = us.iter().map(|u| u * u).collect();
            let lw = us
                .iter()
                .zip(gw.iter())
                .map(|(&u, &g)| (2.0 * g * u).ln() + w.log_weight(u * u))
                .collect();
            (xs, lw)
        }
    }
}

/// Orthonormal Cauchy transforms `C^_k(z) = int p^_k(x) w(x) / (x - z) dx`, `k = 0..=m`.
pub fn cauchy_orthonormal(w: &WeightSpec, t: &RecurrenceTable, m: usize, z: C64) -> Result<Vec<C64>> {
    let d = w.dist_to_support(z);
    if !(d > 1e-12 * (1.0 + z.norm())) {
        return Err(Error::NearSupport(format!("z = {z} lies on the support")));
    }
    let (xs, lws) = cauchy_nodes(w, m, z);
    // Far from the support the leading moments cancel by orthogonality; the
    // equivalent integrand p^_k(x) w(x) (x/z)^k / (x - z) avoids that.
    let far = z.norm() > 2.0 * w.truncation(m + 1);
    let mut acc = vec![ZERO; m + 1];
    let sb: Vec<f64> = t.beta.iter().map(|b| b.sqrt()).collect();
    for (x, lw) in xs.iter().zip(lws.iter()) {
        let lp = lw - 0.5 * t.log_beta0();
        if lp < -745.0 {
            continue;
        }
        let den = C64::new(*x, 0.0) - z;
        let r = if far { x / z } else { C64::new(1.0, 0.0) };
        let mut rk = C64::new(1.0, 0.0);
        let mut prev = 0.0;
        let mut cur = lp.exp();
        acc[0] += cur / den;
        for k in 0..m {
            let sbk = if k == 0 { 0.0 } else { sb[k] };
            let next = ((x - t.alpha[k]) * cur - sbk * prev) / sb[k + 1];
            prev = cur;
            cur = next;
            rk *= r;
            acc[k + 1] += cur * rk / den;
        }
    }
    Ok(acc)
}

/// Monic Cauchy transform `(1/2 pi i) int p_k(x) w(x) / (x - z) dx`.
pub fn cauchy_transform(w: &WeightSpec, t: &RecurrenceTable, k: usize, z: C64) -> Result<C64> {
    let c = cauchy_orthonormal(w, t, k, z)?;
    Ok(c[k] * (0.5 * t.log_h[k]).exp() / (2.0 * PI * I))
}

/// `Y_m(z)`: first row `(p_m, C_m)`, second row `-2 pi i / h_{m-1} (p_{m-1}, C_{m-1})`.
pub fn rh_matrix_y(w: &WeightSpec, t: &RecurrenceTable, m: usize, z: C64) -> Result<Matrix2C> {
    let c = cauchy_orthonormal(w, t, m, z)?;
    let p = eval_orthonormal(t, m, z);
    let sh = |k: usize| (0.5 * t.log_h[k]).exp();
    let pm = p[m] * sh(m);
    let cm = c[m] * sh(m) / (2.0 * PI * I);
    if m == 0 {
        return Ok(Matrix2C::new(pm, cm, ZERO, C64::new(1.0, 0.0)));
    }
    let f = -2.0 * PI * I / t.h[m - 1];
    let pm1 = p[m - 1] * sh(m - 1);
    let cm1 = c[m - 1] * sh(m - 1) / (2.0 * PI * I);
    Ok(Matrix2C::new(pm, cm, f * pm1, f * cm1))
}

/// `K_m(x, y) = sum_{k<m} p_k(x) p_k(y) / h_k`.
pub fn cd_kernel(t: &RecurrenceTable, m: usize, x: C64, y: C64) -> C64 {
    if m == 0 {
        return ZERO;
    }
    let px = eval_orthonormal(t, m - 1, x);
    let py = eval_orthonormal(t, m - 1, y);
    px.iter().zip(py.iter()).map(|(a, b)| a * b).sum()
}

/// Christoffel-Darboux closed form `(p_m(x) p_{m-1}(y) - p_{m-1}(x) p_m(y)) / (h_{m-1} (x - y))`.
pub fn cd_kernel_closed(t: &RecurrenceTable, m: usize, x: C64, y: C64) -> C64 {
    let px = eval_orthonormal(t, m, x);
    let py = eval_orthonormal(t, m, y);
    (px[m] * py[m - 1] - px[m - 1] * py[m]) * t.beta[m].sqrt() / (x - y)
}

/// `(Y_m^{-1}(x) Y_m(y))_{21} / (-2 pi i (x - y))`.
pub fn cd_kernel_from_y(w: &WeightSpec, t: &RecurrenceTable, m: usize, x: C64, y: C64) -> Result<C64> {
    if x == y {
        return Err(Error::Domain("coincident points: use an offset".into()));
    }
    let yx = rh_matrix_y(w, t, m, x)?;
    let yy = rh_matrix_y(w, t, m, y)?;
    let prod = yx.adj() * yy;
    Ok(prod[(1, 0)] / (-2.0 * PI * I * (x - y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gaussian_closed_form() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 10).unwrap();
        let t = recurrence_coeffs(&w, 20).unwrap();
        assert!(t.alpha.iter().all(|a| *a == 0.0));
        for k in 1..=20 {
            assert!((t.beta[k] - k as f64 / 10.0).abs() < 1e-15);
        }
        assert!((t.h[0] - (2.0 * PI / 10.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn laguerre_closed_form() {
        let w = WeightSpec::hard(vec![0.0, 1.0], 8, 0.5).unwrap();
        let t = recurrence_coeffs(&w, 10).unwrap();
        for k in 0..=10 {
            let kf = k as f64;
            assert!((t.alpha[k] - (2.0 * kf + 1.5) / 8.0).abs() < 1e-15);
            if k > 0 {
                assert!((t.beta[k] - kf * (kf + 0.5) / 64.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn stieltjes_matches_closed_forms() {
        // a quadratic soft weight forced through the generic route
        let w = WeightSpec::soft(vec![0.1, 0.3, 0.5], 6).unwrap();
        let exact = recurrence_coeffs(&w, 30).unwrap();
        let num = stieltjes(&w, 30).unwrap();
        for k in 0..=30 {
            assert!((exact.alpha[k] - num.alpha[k]).abs() < 1e-12, "alpha_{k}");
            assert!((exact.beta[k] - num.beta[k]).abs() < 1e-12 * exact.beta[k].max(1.0), "beta_{k}");
        }
        let w = WeightSpec::hard(vec![0.0, 1.0], 8, 0.5).unwrap();
        let exact = recurrence_coeffs(&w, 20).unwrap();
        let num = stieltjes(&w, 20).unwrap();
        for k in 0..=20 {
            assert!((exact.alpha[k] - num.alpha[k]).abs() < 1e-11, "alpha_{k}");
            assert!((exact.log_h[k] - num.log_h[k]).abs() < 1e-11, "h_{k}");
        }
    }

    #[test]
    fn monic_and_orthonormal_agree() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 1).unwrap();
        let t = recurrence_coeffs(&w, 8).unwrap();
        // monic Hermite He_4(1) = 1 - 6 + 3 = -2
        assert!((eval_p(&t, 4, c(1.0, 0.0)) - c(-2.0, 0.0)).norm() < 1e-13);
        let z = c(0.3, -0.7);
        let on = eval_orthonormal(&t, 6, z);
        for k in 0..=6 {
            let m = eval_p(&t, k, z);
            assert!((on[k] * t.h[k].sqrt() - m).norm() < 1e-12 * m.norm().max(1.0));
        }
    }

    #[test]
    fn y_has_unit_determinant() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 4).unwrap();
        let t = recurrence_coeffs(&w, 8).unwrap();
        for z in [c(0.3, 0.4), c(-1.0, -0.2), c(2.5, 1e-2)] {
            let y = rh_matrix_y(&w, &t, 5, z).unwrap();
            assert!((y.det() - 1.0).norm() < 1e-10, "{}", y.det());
        }
    }

    #[test]
    fn cd_forms_agree() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 3).unwrap();
        let t = recurrence_coeffs(&w, 10).unwrap();
        let (x, y) = (c(0.3, 0.1), c(-0.2, 0.05));
        let a = cd_kernel(&t, 4, x, y);
        let b = cd_kernel_closed(&t, 4, x, y);
        let d = cd_kernel_from_y(&w, &t, 4, x, y).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
        assert!((a - d).norm() < 1e-8 * a.norm());
    }

    #[test]
    fn near_support_rejected() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 3).unwrap();
        let t = recurrence_coeffs(&w, 4).unwrap();
        assert!(matches!(cauchy_transform(&w, &t, 1, c(0.5, 0.0)), Err(Error::NearSupport(_))));
    }

    #[test]
    fn invalid_weights() {
        assert!(WeightSpec::soft(vec![0.0, 1.0], 3).is_err());
        assert!(WeightSpec::soft(vec![0.0, 0.0, 0.0, 1.0], 3).is_err());
        assert!(WeightSpec::hard(vec![0.0, -1.0], 3, 0.0).is_err());
        assert!(WeightSpec::hard(vec![0.0, 1.0], 3, -1.5).is_err());
    }
}

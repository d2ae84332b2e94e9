//! One-cut equilibrium measures.
//!
//! Soft: `rho(x) = M(x) sqrt((b - x)(x - a))` on `[a, b]`.
//! Hard: `rho(x) = M(x) sqrt((b - x)/x)` on `[0, b]`.
//! The effective potential is `phi(x) = V(x) + l + 2 int log|x - t|^{-1} rho(t) dt`
//! (with the normalisation `int rho = 1`), vanishing on the support.

use crate::error::{Error, Result};
use crate::orthopoly::EdgeKind;
use crate::poly::Poly;
use crate::quad::{gl_doubling, tanh_sinh};
use crate::C64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumData {
    pub support: (f64, f64),
    pub density_m: Poly,
    pub robin_ell: f64,
    pub edge: EdgeKind,
    pub v: Poly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoomMap {
    pub edge: f64,
    pub c: f64,
    pub exponent: f64,
}

const NCHEB: usize = 96;

fn cheb_theta(j: usize) -> f64 {
    (j as f64 + 0.5) * PI / NCHEB as f64
}

/// `(1/2pi) int V'(t) / sqrt((b-t)(t-a)) dt` and `(1/2pi) int t V'(t) / sqrt(...) dt`.
fn soft_moments(vp: &Poly, a: f64, b: f64) -> (f64, f64) {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    for j in 0..NCHEB {
        let t = mid + half * cheb_theta(j).cos();
        let f = vp.eval(t);
        m0 += f;
        m1 += t * f;
    }
    (m0 / (2.0 * NCHEB as f64), m1 / (2.0 * NCHEB as f64))
}

/// `(1/2pi) int_0^b V'(t) sqrt(t/(b-t)) dt`.
fn hard_moment(vp: &Poly, b: f64) -> f64 {
    let mut s = 0.0;
    for j in 0..NCHEB {
        let t = 0.5 * b * (1.0 + cheb_theta(j).cos());
        s += vp.eval(t) * t;
    }
    s / (2.0 * NCHEB as f64)
}

/// Coefficients of `(1 - c u)^{-1/2}` in `u`.
fn inv_sqrt_series(c: f64, n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for k in 1..n {
        let prev = out[k - 1];
        out.push(prev * c * (2.0 * k as f64 - 1.0) / (2.0 * k as f64));
    }
    out
}

fn soft_m(vp: &Poly, a: f64, b: f64) -> Poly {
    let d = vp.c.len();
    let ea = inv_sqrt_series(a, d + 1);
    let eb = inv_sqrt_series(b, d + 1);
    let e: Vec<f64> = (0..=d).map(|k| (0..=k).map(|i| ea[i] * eb[k - i]).sum()).collect();
    // V'(x) / sqrt((x-a)(x-b)) = sum_i v_i x^i * sum_k e_k x^{-k-1}
    let mut m = vec![0.0; d.max(1)];
    for (j, mj) in m.iter_mut().enumerate() {
        for i in j + 1..d {
            *mj += vp.c[i] * e[i - 1 - j];
        }
    }
    Poly::new(m.iter().map(|v| v / (2.0 * PI)).collect())
}

fn hard_m(vp: &Poly, b: f64) -> Poly {
    let d = vp.c.len();
    let e = inv_sqrt_series(b, d + 1);
    let mut m = vec![0.0; d];
    for (j, mj) in m.iter_mut().enumerate() {
        for i in j..d {
            *mj += vp.c[i] * e[i - j];
        }
    }
    Poly::new(m.iter().map(|v| v / (2.0 * PI)).collect())
}

fn solve_soft_endpoints(vp: &Poly) -> Result<(f64, f64)> {
    let resid = |a: f64, b: f64| {
        let (m0, m1) = soft_moments(vp, a, b);
        (m0, m1 - 1.0)
    };
    let (mut a, mut b) = (-1.0, 1.0);
    for _ in 0..200 {
        let (r0, r1) = resid(a, b);
        let norm = r0.abs() + r1.abs();
        if norm < 1e-15 {
            return Ok((a, b));
        }
        let h = 1e-7 * (b - a);
        let (ra0, ra1) = resid(a + h, b);
        let (rb0, rb1) = resid(a, b + h);
        let j = [[(ra0 - r0) / h, (rb0 - r0) / h], [(ra1 - r1) / h, (rb1 - r1) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 {
            break;
        }
        let da = -(j[1][1] * r0 - j[0][1] * r1) / det;
        let db = -(-j[1][0] * r0 + j[0][0] * r1) / det;
        let mut step = 1.0;
        loop {
            let (na, nb) = (a + step * da, b + step * db);
            if nb > na {
                let (s0, s1) = resid(na, nb);
                if s0.abs() + s1.abs() < norm || step < 1e-6 {
                    a = na;
                    b = nb;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-9 {
                return Err(Error::NoConvergence("one-cut endpoints".into()));
            }
        }
    }
    let (r0, r1) = resid(a, b);
    if r0.abs() + r1.abs() < 1e-12 {
        Ok((a, b))
    } else {
        Err(Error::NoConvergence("one-cut endpoints".into()))
    }
}

fn solve_hard_endpoint(vp: &Poly) -> Result<f64> {
    let f = |b: f64| hard_moment(vp, b) - 1.0;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoConvergence("hard endpoint".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

impl EquilibriumData {
    pub fn density(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        if x <= a || x >= b {
            return 0.0;
        }
        let m = self.density_m.eval(x);
        match self.edge {
            EdgeKind::Soft => m * ((b - x) * (x - a)).sqrt(),
            EdgeKind::Hard => m * ((b - x) / x).sqrt(),
        }
    }

    /// `rho(t(theta)) |t'(theta)|` for the endpoint-adapted angle variable.
    fn theta_density(&self, theta: f64) -> f64 {
        let (a, b) = self.support;
        match self.edge {
            EdgeKind::Soft => {
                let half = 0.5 * (b - a);
                let t = 0.5 * (a + b) + half * theta.cos();
                self.density_m.eval(t) * half * half * theta.sin().powi(2)
            }
            EdgeKind::Hard => {
                let t = 0.5 * b * (1.0 - theta.cos());
                self.density_m.eval(t) * 0.5 * b * (1.0 + theta.cos())
            }
        }
    }

    fn theta_of(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        match self.edge {
            EdgeKind::Soft => ((x - 0.5 * (a + b)) / (0.5 * (b - a))).clamp(-1.0, 1.0).acos(),
            EdgeKind::Hard => (1.0 - 2.0 * x / b).clamp(-1.0, 1.0).acos(),
        }
    }

    /// `x - t(theta)` in product form, `d = theta - theta0` supplied exactly.
    fn gap(&self, x: f64, theta: f64, theta0: f64, d: f64) -> f64 {
        let (a, b) = self.support;
        if x < a || x > b {
            let t = match self.edge {
                EdgeKind::Soft => 0.5 * (a + b) + 0.5 * (b - a) * theta.cos(),
                EdgeKind::Hard => 0.5 * b * (1.0 - theta.cos()),
            };
            return x - t;
        }
        let s = ((theta + theta0) * 0.5).sin() * (d * 0.5).sin();
        match self.edge {
            // half (cos theta0 - cos theta) = (b-a) sin((th+th0)/2) sin((th-th0)/2)
            EdgeKind::Soft => (b - a) * s,
            // (b/2)(cos theta - cos theta0) = -b sin((th+th0)/2) sin((th-th0)/2)
            EdgeKind::Hard => -b * s,
        }
    }

    /// `int log|x - t| rho(t) dt`.
    pub fn log_potential(&self, x: f64) -> Result<f64> {
        let (a, b) = self.support;
        let tol = 1e-14;
        if x < a || x > b {
            let f = |th: f64, _: f64, _: f64| C64::new(self.gap(x, th, 0.0, 0.0).abs().ln() * self.theta_density(th), 0.0);
            return Ok(tanh_sinh(f, 0.0, PI, tol)?.re);
        }
        let th0 = self.theta_of(x);
        let mut total = 0.0;
        if th0 > 0.0 {
            let f = |th: f64, _: f64, dr: f64| C64::new(self.gap(x, th, th0, -dr).abs().ln() * self.theta_density(th), 0.0);
            total += tanh_sinh(f, 0.0, th0, tol)?.re;
        }
        if th0 < PI {
            let f = |th: f64, dl: f64, _: f64| C64::new(self.gap(x, th, th0, dl).abs().ln() * self.theta_density(th), 0.0);
            total += tanh_sinh(f, th0, PI, tol)?.re;
        }
        Ok(total)
    }

    /// `int rho`.
    pub fn mass(&self) -> Result<f64> {
        Ok(gl_doubling(&|th: f64| C64::new(self.theta_density(th), 0.0), 0.0, PI, 32, 1e-15)?.re)
    }

    pub fn effective_potential(&self, x: f64) -> Result<f64> {
        Ok(self.v.eval(x) + self.robin_ell - 2.0 * self.log_potential(x)?)
    }

    /// The studied edge: right endpoint (soft) or 0 (hard).
    pub fn edge_point(&self) -> f64 {
        match self.edge {
            EdgeKind::Soft => self.support.1,
            EdgeKind::Hard => 0.0,
        }
    }

    /// Soft: `G(z) = int_0^1 M(e + u(z-e)) sqrt(e + u(z-e) - a) sqrt(u) du`;
    /// hard: `H(z) = int_0^1 M(uz) sqrt(b - uz) u^{-1/2} du`.
    fn primitive_factor(&self, z: C64) -> Result<C64> {
        let (a, b) = self.support;
        match self.edge {
            EdgeKind::Soft => {
                let f = |v: f64| {
                    let t = b + (z - b) * (v * v);
                    self.density_m.eval_c(t) * (t - a).sqrt() * (2.0 * v * v)
                };
                gl_doubling(&f, 0.0, 1.0, 32, 1e-15)
            }
            EdgeKind::Hard => {
                let f = |v: f64| {
                    let t = z * (v * v);
                    self.density_m.eval_c(t) * (C64::new(b, 0.0) - t).sqrt() * 2.0
                };
                gl_doubling(&f, 0.0, 1.0, 32, 1e-15)
            }
        }
    }

    /// Zoom coordinate `zeta(z)` at the studied edge for the weight parameter `n`.
    pub fn zoom_map(&self, n: f64, z: C64) -> Result<C64> {
        let g = self.primitive_factor(z)?;
        match self.edge {
            EdgeKind::Soft => {
                let e = self.support.1;
                if (z - e).im == 0.0 && z.re < e && z.re > self.support.0 {
                    // on the support the principal 2/3-power needs a side
                    return Err(Error::Branch("z on the support without side".into()));
                }
                Ok((1.5 * PI * n).powf(2.0 / 3.0) * (z - e) * g.powf(2.0 / 3.0))
            }
            EdgeKind::Hard => Ok((0.5 * PI * n).powi(2) * z * g * g),
        }
    }

    /// `lim zeta(z) / (n^{2/3} (z - e))` (soft) or `lim zeta(z) / (n^2 z)` (hard).
    pub fn zoom_constant(&self) -> Result<f64> {
        let g = self.primitive_factor(C64::new(self.edge_point(), 0.0))?.re;
        Ok(match self.edge {
            EdgeKind::Soft => (1.5 * PI * g).powf(2.0 / 3.0),
            EdgeKind::Hard => (0.5 * PI * g).powi(2),
        })
    }

    pub fn zoom(&self) -> Result<ZoomMap> {
        Ok(ZoomMap {
            edge: self.edge_point(),
            c: self.zoom_constant()?,
            exponent: match self.edge {
                EdgeKind::Soft => 2.0 / 3.0,
                EdgeKind::Hard => 2.0,
            },
        })
    }
}

/// One-cut equilibrium measure for `V`.
pub fn solve_one_cut(v: &Poly, edge: EdgeKind) -> Result<EquilibriumData> {
    let vp = v.deriv();
    let (support, m) = match edge {
        EdgeKind::Soft => {
            if v.degree() < 2 || v.degree() % 2 == 1 || v.leading() <= 0.0 {
                return Err(Error::Invalid("soft V needs even degree >= 2".into()));
            }
            let (a, b) = solve_soft_endpoints(&vp)?;
            ((a, b), soft_m(&vp, a, b))
        }
        EdgeKind::Hard => {
            if v.degree() < 1 || v.leading() <= 0.0 {
                return Err(Error::Invalid("hard V needs degree >= 1".into()));
            }
            let b = solve_hard_endpoint(&vp)?;
            ((0.0, b), hard_m(&vp, b))
        }
    };
    for j in 0..=400 {
        let x = support.0 + (support.1 - support.0) * j as f64 / 400.0;
        if m.eval(x) < -1e-12 {
            return Err(Error::MultiCut(format!("density negative at x = {x}")));
        }
    }
    let mut eq = EquilibriumData { support, density_m: m, robin_ell: 0.0, edge, v: v.clone() };
    let x0 = support.0 + 0.37 * (support.1 - support.0);
    eq.robin_ell = -v.eval(x0) + 2.0 * eq.log_potential(x0)?;
    Ok(eq)
}

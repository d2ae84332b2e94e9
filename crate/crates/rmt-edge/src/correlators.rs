//! Finite-n averages of products and ratios of characteristic polynomials,
//! and their edge-scaled versions.

use crate::equilibrium::{solve_one_cut, ZoomMap};
use crate::error::{Error, Result};
use crate::linalg::{det, vandermonde};
use crate::orthopoly::{
    cauchy_orthonormal, orthonormal_scaled, recurrence_coeffs, EdgeKind, RecurrenceTable, WeightSpec,
};
use crate::parametrix::Case;
use crate::poly::Poly;
use crate::specialfn::{pow_cut, pow_principal};
use crate::C64;
use std::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Largest number of pairs supported by the scaled evaluators.
pub const MAX_PAIRS: usize = 4;

/// Points `b` and `c`, `S` of each; `c` carries the denominators in case II.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub b: Vec<C64>,
    pub c: Vec<C64>,
}

impl PointSet {
    pub fn new(b: Vec<C64>, c: Vec<C64>) -> Result<Self> {
        if b.len() != c.len() || b.is_empty() {
            return Err(Error::Invalid("b and c need the same positive length".into()));
        }
        let p = PointSet { b, c };
        let all = p.all();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if (all[i] - all[j]).norm() < 1e-8 * (1.0 + all[i].norm()) {
                    return Err(Error::IllConditioned("points closer than 1e-8".into()));
                }
            }
        }
        Ok(p)
    }

    /// First half of `pts` becomes `b`, second half `c`.
    pub fn split(pts: &[C64]) -> Result<Self> {
        if pts.len() % 2 != 0 {
            return Err(Error::Invalid("need an even number of points".into()));
        }
        let s = pts.len() / 2;
        PointSet::new(pts[..s].to_vec(), pts[s..].to_vec())
    }

    pub fn s(&self) -> usize {
        self.b.len()
    }

    pub fn all(&self) -> Vec<C64> {
        self.b.iter().chain(self.c.iter()).copied().collect()
    }
}

fn prod_diff(c: &[C64], b: &[C64]) -> C64 {
    let mut p = ONE;
    for &x in c {
        for &y in b {
            p *= x - y;
        }
    }
    p
}

fn need_table(t: &RecurrenceTable, m: usize) -> Result<()> {
    if t.maxdeg < m {
        return Err(Error::Invalid(format!("recurrence table holds degree {} but {m} is needed", t.maxdeg)));
    }
    Ok(())
}

fn check_off_support(w: &WeightSpec, pts: &[C64]) -> Result<()> {
    for &z in pts {
        if w.dist_to_support(z) <= 1e-12 * (1.0 + z.norm()) {
            return Err(Error::NearSupport(format!("z = {z} lies on the support")));
        }
    }
    Ok(())
}

/// `det[K_m(c_l, b_j)] / (D(c) D(b))` with orthonormal polynomials carrying the
/// log prefactors `lp(z)`.
fn kernel_det(t: &RecurrenceTable, m: usize, pts: &PointSet, lp: &dyn Fn(C64) -> C64) -> C64 {
    let s = pts.s();
    let pc: Vec<Vec<C64>> = pts.c.iter().map(|&z| orthonormal_scaled(t, m - 1, z, lp(z))).collect();
    let pb: Vec<Vec<C64>> = pts.b.iter().map(|&z| orthonormal_scaled(t, m - 1, z, lp(z))).collect();
    let mut mat = vec![ZERO; s * s];
    for l in 0..s {
        for j in 0..s {
            mat[l * s + j] = pc[l].iter().zip(pb[j].iter()).map(|(x, y)| x * y).sum();
        }
    }
    det(&mat, s) / (vandermonde(&pts.c) * vandermonde(&pts.b))
}

/// Case II entry `sqrt(beta_n) [C^_n(c) p^_{n-1}(b) - C^_{n-1}(c) p^_n(b)]` (1 for `n = 0`).
fn entry_ii(w: &WeightSpec, t: &RecurrenceTable, n: usize, c: C64, b: C64, lp: &dyn Fn(C64) -> C64) -> Result<C64> {
    if n == 0 {
        return Ok(ONE);
    }
    let cc = cauchy_orthonormal(w, t, n, c)?;
    let pb = orthonormal_scaled(t, n, b, lp(b));
    let e = (-lp(c)).exp();
    Ok(t.beta[n].sqrt() * (cc[n] * pb[n - 1] - cc[n - 1] * pb[n]) * e)
}

/// Case III entry with `m = n - S`:
/// `-(1/2 pi i) sqrt(beta_m) [C^_{m-1}(c) C^_m(b) - C^_m(c) C^_{m-1}(b)]`,
/// or `(1/2 pi i) sqrt(h_0) (C^_0(b) - C^_0(c))` when `m = 0`.
fn entry_iii(w: &WeightSpec, t: &RecurrenceTable, m: usize, c: C64, b: C64) -> Result<C64> {
    let cc = cauchy_orthonormal(w, t, m, c)?;
    let cb = cauchy_orthonormal(w, t, m, b)?;
    let tpi = 2.0 * PI * I;
    if m == 0 {
        return Ok((0.5 * t.log_h[0]).exp() * (cb[0] - cc[0]) / tpi);
    }
    Ok(-t.beta[m].sqrt() * (cc[m - 1] * cb[m] - cc[m] * cb[m - 1]) / tpi)
}

/// `(-1)^{S(S-1)/2}`: with both Vandermonde factors in the same orientation the ratio
/// formula needs this sign to reduce to 1 at `n = 0` (Cauchy determinant).
pub fn pair_sign(s: usize) -> f64 {
    if (s * s.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn sum_log_h(t: &RecurrenceTable, lo: usize, hi: usize) -> f64 {
    (lo..hi).map(|l| t.log_h[l]).sum()
}

/// The averages normalized by the natural products of `h`:
/// I: `<prod_{j} det(b_j - M) det(c_j - M)> / prod_{l=n}^{n+S-1} h_l`,
/// II: `<prod det(b_j - M) / det(c_j - M)>`,
/// III: `<prod 1 / (det(b_j - M) det(c_j - M))> prod_{l=n-S}^{n-1} h_l`.
pub fn corr_normalized(case: Case, w: &WeightSpec, t: &RecurrenceTable, n: usize, pts: &PointSet) -> Result<C64> {
    let s = pts.s();
    let dd = vandermonde(&pts.c) * vandermonde(&pts.b);
    match case {
        Case::I => {
            need_table(t, n + s)?;
            Ok(kernel_det(t, n + s, pts, &|_| ZERO))
        }
        Case::II => {
            need_table(t, n)?;
            // b only enters through polynomials
            check_off_support(w, &pts.c)?;
            let mut mat = vec![ZERO; s * s];
            for l in 0..s {
                for j in 0..s {
                    mat[l * s + j] = entry_ii(w, t, n, pts.c[l], pts.b[j], &|_| ZERO)? / (pts.c[l] - pts.b[j]);
                }
            }
            Ok(pair_sign(s) * prod_diff(&pts.c, &pts.b) * det(&mat, s) / dd)
        }
        Case::III => {
            if n < s {
                return Err(Error::Invalid("case III needs n >= S".into()));
            }
            need_table(t, n)?;
            check_off_support(w, &pts.all())?;
            let m = n - s;
            let mut mat = vec![ZERO; s * s];
            for l in 0..s {
                for j in 0..s {
                    mat[l * s + j] = entry_iii(w, t, m, pts.c[l], pts.b[j])? / (pts.c[l] - pts.b[j]);
                }
            }
            Ok((-2.0 * PI * I).powu(s as u32) * det(&mat, s) / dd)
        }
    }
}

/// The plain averages over the `n x n` ensemble with weight `w`.
pub fn corr(case: Case, w: &WeightSpec, t: &RecurrenceTable, n: usize, pts: &PointSet) -> Result<C64> {
    let s = pts.s();
    let v = corr_normalized(case, w, t, n, pts)?;
    Ok(match case {
        Case::I => v * sum_log_h(t, n, n + s).exp(),
        Case::II => v,
        Case::III => v * (-sum_log_h(t, n - s, n)).exp(),
    })
}

pub fn corr_i(w: &WeightSpec, t: &RecurrenceTable, n: usize, pts: &PointSet) -> Result<C64> {
    corr(Case::I, w, t, n, pts)
}

pub fn corr_ii(w: &WeightSpec, t: &RecurrenceTable, n: usize, pts: &PointSet) -> Result<C64> {
    corr(Case::II, w, t, n, pts)
}

pub fn corr_iii(w: &WeightSpec, t: &RecurrenceTable, n: usize, pts: &PointSet) -> Result<C64> {
    corr(Case::III, w, t, n, pts)
}

/// Weight, recurrence table and zoom map for one potential at one `n`.
#[derive(Debug, Clone)]
pub struct EdgeProblem {
    pub w: WeightSpec,
    pub table: RecurrenceTable,
    pub zoom: ZoomMap,
}

impl EdgeProblem {
    pub fn soft(v: Vec<f64>, n: usize) -> Result<Self> {
        let w = WeightSpec::soft(v, n)?;
        Self::build(w)
    }

    pub fn hard(v: Vec<f64>, n: usize, nu: f64) -> Result<Self> {
        let w = WeightSpec::hard(v, n, nu)?;
        Self::build(w)
    }

    fn build(w: WeightSpec) -> Result<Self> {
        let eq = solve_one_cut(&w.v, w.edge)?;
        let zoom = eq.zoom()?;
        let table = recurrence_coeffs(&w, w.n + MAX_PAIRS)?;
        Ok(EdgeProblem { w, table, zoom })
    }

    fn scale(&self) -> f64 {
        self.zoom.c * self.w.nf().powf(self.zoom.exponent)
    }
}

fn pairs(y: &[C64]) -> Result<usize> {
    if y.is_empty() || y.len() % 2 != 0 || y.len() > 2 * MAX_PAIRS {
        return Err(Error::Invalid(format!("need 2S points with 1 <= S <= {MAX_PAIRS}")));
    }
    Ok(y.len() / 2)
}

/// Soft-edge scaled case I average at `xi_j = a + y_j^2 / (C n^{2/3})`:
/// `(C n^{2/3})^{-S^2} prod e^{-n V(xi_j)/2} <prod det(xi_j - M)> / prod_{l=n}^{n+S-1} h_l`.
pub fn scaled_soft_lhs(p: &EdgeProblem, y: &[C64]) -> Result<C64> {
    if p.w.edge != EdgeKind::Soft {
        return Err(Error::Invalid("soft scaling needs a soft-edge weight".into()));
    }
    let s = pairs(y)?;
    let sc = p.scale();
    let xi: Vec<C64> = y.iter().map(|v| p.zoom.edge + v * v / sc).collect();
    let pts = PointSet::split(&xi)?;
    let lp = |z: C64| -p.w.nv(z) * 0.5;
    let v = kernel_det(&p.table, p.w.n + s, &pts, &lp);
    Ok(v * sc.powi(-((s * s) as i32)))
}

/// Hard-edge scaled averages.
/// Case I at `xi = y / (C n^2)`: `(C n^2)^{-S^2} prod xi^{nu/2} e^{-n V(xi)/2} <prod det(xi - M)> / prod h`.
/// Case III at `xi = -y / (C n^2)`: `(C n^2)^{-S^2} prod (y / C n^2)^{-nu/2} e^{n V(xi)/2}
/// <prod 1/det(xi - M)> prod_{l=n-S}^{n-1} h_l`.
pub fn scaled_hard_lhs(case: Case, p: &EdgeProblem, y: &[C64]) -> Result<C64> {
    if p.w.edge != EdgeKind::Hard {
        return Err(Error::Invalid("hard scaling needs a hard-edge weight".into()));
    }
    let s = pairs(y)?;
    let sc = p.scale();
    let nu = p.w.nu;
    let norm = sc.powi(-((s * s) as i32));
    match case {
        Case::I => {
            let xi: Vec<C64> = y.iter().map(|v| v / sc).collect();
            let pts = PointSet::split(&xi)?;
            let lp = |z: C64| -p.w.nv(z) * 0.5;
            let mut f = ONE;
            for &z in &xi {
                f *= pow_cut(z, nu / 2.0);
            }
            Ok(norm * f * kernel_det(&p.table, p.w.n + s, &pts, &lp))
        }
        Case::III => {
            let xi: Vec<C64> = y.iter().map(|v| -v / sc).collect();
            let pts = PointSet::split(&xi)?;
            let v = corr_normalized(Case::III, &p.w, &p.table, p.w.n, &pts)?;
            let mut f = ONE;
            for (&z, &yy) in xi.iter().zip(y) {
                f *= pow_principal(yy / sc, -nu / 2.0) * (p.w.nv(z) * 0.5).exp();
            }
            Ok(norm * f * v)
        }
        Case::II => Err(Error::Invalid("no hard-edge scaling for case II".into())),
    }
}

/// Quadratic, quartic and linear potentials by name.
pub fn named_potential(name: &str) -> Result<(Vec<f64>, EdgeKind)> {
    match name {
        "gaussian" => Ok((vec![0.0, 0.0, 0.5], EdgeKind::Soft)),
        "quartic" => Ok((vec![0.0, 0.0, 0.0, 0.0, 0.25], EdgeKind::Soft)),
        "laguerre" => Ok((vec![0.0, 1.0], EdgeKind::Hard)),
        _ => Err(Error::Invalid(format!("unknown potential '{name}'"))),
    }
}

pub fn potential_poly(v: &[f64]) -> Poly {
    Poly::new(v.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{cd_kernel_from_y, rh_matrix_y};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn case_i_single_pair_is_kernel() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 4).unwrap();
        let t = recurrence_coeffs(&w, 8).unwrap();
        let (b, cc) = (c(0.3, 0.4), c(-0.5, 0.2));
        let pts = PointSet::new(vec![b], vec![cc]).unwrap();
        let v = corr_normalized(Case::I, &w, &t, 4, &pts).unwrap();
        let k = cd_kernel_from_y(&w, &t, 5, cc, b).unwrap();
        assert!((v - k).norm() < 1e-10 * k.norm());
    }

    #[test]
    fn case_ii_and_iii_match_y_matrix() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 3).unwrap();
        let t = recurrence_coeffs(&w, 8).unwrap();
        let (b, cc) = (c(0.3, 0.4), c(-0.5, -0.7));
        let pts = PointSet::new(vec![b], vec![cc]).unwrap();
        let n = 3;
        let y = |m: usize, z: C64| rh_matrix_y(&w, &t, m, z).unwrap();
        let e11 = (y(n, cc).adj() * y(n, b))[(0, 0)];
        let v2 = corr_ii(&w, &t, n, &pts).unwrap();
        assert!((v2 - e11).norm() < 1e-10 * e11.norm());
        let e12 = (y(n - 1, cc).adj() * y(n - 1, b))[(0, 1)];
        let v3 = corr_normalized(Case::III, &w, &t, n, &pts).unwrap();
        let want = -2.0 * PI * I * e12 / (cc - b);
        assert!((v3 - want).norm() < 1e-10 * want.norm(), "{v3} {want}");
    }

    #[test]
    fn case_ii_n_zero_is_one() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 1).unwrap();
        let t = recurrence_coeffs(&w, 4).unwrap();
        let pts = PointSet::new(vec![c(0.0, 1.0), c(1.0, 1.0)], vec![c(0.5, -1.0), c(2.0, 0.5)]).unwrap();
        let v = corr_ii(&w, &t, 0, &pts).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn rejects_points_on_support() {
        let w = WeightSpec::soft(vec![0.0, 0.0, 0.5], 3).unwrap();
        let t = recurrence_coeffs(&w, 8).unwrap();
        // only the denominator points must avoid the support
        let pts = PointSet::new(vec![c(1.0, 1.0)], vec![c(0.3, 0.0)]).unwrap();
        assert!(corr_ii(&w, &t, 3, &pts).is_err());
        let pts = PointSet::new(vec![c(0.3, 0.0)], vec![c(1.0, 1.0)]).unwrap();
        assert!(corr_ii(&w, &t, 3, &pts).is_ok());
    }
}

//! Kontsevich-type matrix integrals in closed determinantal form, and the
//! edge limits written through them.

use crate::error::{Error, Result};
use crate::linalg::{det, vandermonde_desc};
use crate::parametrix::Case;
use crate::specialfn::{airy_derivs, airy_derivs_scaled, f_nu, g_nu, omega, pow_cut};
use crate::C64;
use std::f64::consts::PI;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn check_even(y: &[C64]) -> Result<usize> {
    if y.is_empty() || y.len() % 2 != 0 {
        return Err(Error::Invalid("need an even, positive number of eigenvalues".into()));
    }
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            if (y[i] - y[j]).norm() < 1e-8 {
                return Err(Error::IllConditioned("coincident eigenvalues".into()));
            }
        }
    }
    Ok(y.len() / 2)
}

/// `det[M_{jk}]` with `M_{jk} = row_j(k)`, rows laid out by point.
fn det_by_point(cols: &[Vec<C64>]) -> C64 {
    let n = cols.len();
    let mut m = vec![C64::new(0.0, 0.0); n * n];
    for (k, c) in cols.iter().enumerate() {
        for j in 0..n {
            m[j * n + k] = c[j];
        }
    }
    det(&m, n)
}

fn z_kont_raw(y: &[C64]) -> Result<C64> {
    let s = check_even(y)?;
    if y.iter().any(|v| v.re <= 0.0) {
        return Err(Error::Sector("z_kont needs Re y > 0".into()));
    }
    let n = 2 * s;
    let cols: Vec<Vec<C64>> = y.iter().map(|&v| airy_derivs_scaled(v * v, n - 1)).collect::<Result<_>>()?;
    let d = det_by_point(&cols);
    let mut sq = ONE;
    for &v in y {
        sq *= v.sqrt();
    }
    Ok(4f64.powi(s as i32) * PI.powi(s as i32) * d * sq / vandermonde_desc(y))
}

/// Admissible sector index of `arg y` for the generalized integral: 0 when
/// `|arg y| < pi/2`, 1 when `arg y in (pi/6, 7pi/6)`, 2 when `arg y in (-7pi/6, -pi/6)`.
pub fn sector_ok(s: u8, y: C64) -> bool {
    let t = y.arg();
    match s {
        0 => t.abs() < PI / 2.0,
        1 => t > PI / 6.0 || t < -5.0 * PI / 6.0,
        2 => t < -PI / 6.0 || t > 5.0 * PI / 6.0,
        _ => false,
    }
}

fn z_kont_generalized_raw(y: &[C64], sectors: &[u8], x: C64) -> Result<C64> {
    let s = check_even(y)?;
    if sectors.len() != y.len() {
        return Err(Error::Invalid("one sector per eigenvalue".into()));
    }
    for (&v, &sec) in y.iter().zip(sectors) {
        if !sector_ok(sec, v) {
            return Err(Error::Sector(format!("y = {v} is not admissible for sector {sec}")));
        }
    }
    let n = 2 * s;
    let w = omega();
    let mut expo = C64::new(0.0, 0.0);
    let mut cols = Vec::with_capacity(n);
    for (&v, &sec) in y.iter().zip(sectors) {
        let z = v * v + x;
        let ws = w.powu(sec as u32);
        let base = airy_derivs(ws * z, n - 1)?;
        cols.push(base.iter().enumerate().map(|(k, &a)| a * ws.powu(k as u32)).collect::<Vec<_>>());
        expo += v * v * v * (2.0 / 3.0) + x * v;
    }
    let n1 = sectors.iter().filter(|&&s| s == 1).count() as i32;
    let n2 = sectors.iter().filter(|&&s| s == 2).count() as i32;
    let mut sq = ONE;
    for &v in y {
        sq *= v.sqrt();
    }
    let pre = (-w).powi(n1 - n2) * (2.0 * PI.sqrt()).powi(n as i32);
    Ok(pre * expo.exp() * sq * det_by_point(&cols) / vandermonde_desc(y))
}

fn thm_soft_rhs_raw(y: &[C64]) -> Result<C64> {
    let s = check_even(y)?;
    let z = z_kont_raw(y)?;
    let mut e = C64::new(0.0, 0.0);
    let mut sq = ONE;
    for &v in y {
        e += v * v * v * (2.0 / 3.0);
        sq *= v.sqrt();
    }
    let mut sums = ONE;
    for j in 0..y.len() {
        for k in j + 1..y.len() {
            sums *= y[j] + y[k];
        }
    }
    Ok((-e).exp() * z / (4f64.powi(s as i32) * PI.powi(s as i32) * sq * sums))
}

fn soft_rhs_direct_raw(y: &[C64]) -> Result<C64> {
    check_even(y)?;
    let n = y.len();
    let x: Vec<C64> = y.iter().map(|v| v * v).collect();
    let cols: Vec<Vec<C64>> = x.iter().map(|&v| airy_derivs(v, n - 1)).collect::<Result<_>>()?;
    Ok(det_by_point(&cols) / vandermonde_desc(&x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselVariant {
    F,
    G,
}

fn bessel_fn(v: BesselVariant, nu: f64, z: C64) -> Result<C64> {
    match v {
        BesselVariant::F => f_nu(nu, z),
        BesselVariant::G => g_nu(nu, z),
    }
}

/// `det[h_{nu-l+1}(y_j)]_{l,j=1..2S}` for `h = f_nu` or `g_nu`.
/// Rows come from the three-term recurrence `h_{m-2} = (m-1) h_{m-1} - y h_m`,
/// with a fallback to direct evaluation when the last row drifts.
pub fn matrix_bessel_det(nu: f64, y: &[C64], v: BesselVariant) -> Result<C64> {
    check_even(y)?;
    let n = y.len();
    let mut cols = Vec::with_capacity(n);
    for &z in y {
        let mut c = vec![bessel_fn(v, nu, z)?];
        if n > 1 {
            c.push(bessel_fn(v, nu - 1.0, z)?);
        }
        for l in 2..n {
            let m = nu - (l as f64) + 2.0;
            let next = (m - 1.0) * c[l - 1] - z * c[l - 2];
            c.push(next);
        }
        if n > 2 {
            let direct = bessel_fn(v, nu - (n as f64) + 1.0, z)?;
            let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
            if (direct - c[n - 1]).norm() > 1e-9 * scale.max(direct.norm()) {
                c = (0..n).map(|l| bessel_fn(v, nu - l as f64, z)).collect::<Result<_>>()?;
            }
        }
        cols.push(c);
    }
    Ok(det_by_point(&cols))
}

/// Hard-edge limits without the `y`-power prefactor (entire in `y` for case I).
fn hard_core(case: Case, nu: f64, y: &[C64]) -> Result<C64> {
    let s = check_even(y)?;
    match case {
        Case::I => Ok(matrix_bessel_det(nu, y, BesselVariant::F)? / vandermonde_desc(y)),
        Case::III => {
            let x: Vec<C64> = y.iter().map(|v| -v).collect();
            let d = matrix_bessel_det(nu, &x, BesselVariant::G)?;
            let pre = C64::from_polar((2.0 * PI).powi(2 * s as i32), PI * nu * s as f64);
            Ok(pre * d / vandermonde_desc(&x))
        }
        Case::II => Err(Error::Invalid("no hard-edge closed form for case II".into())),
    }
}

/// Points closer than this are treated as a cluster.
pub const CLUSTER_SEP: f64 = 1e-3;
const CLUSTER_NODES: usize = 32;

/// Evaluates `f` at `y`, where `f` is analytic in each `y_j` with removable
/// singularities at coincident points. Clustered points are spread out as
/// `y_k + h t d_k` with distinct offsets `d_k`, and `f(y)` is recovered as the
/// mean of `t -> f(y + h t d)` over `|t| = 1`.
pub fn declustered(y: &[C64], f: impl Fn(&[C64]) -> Result<C64>) -> Result<C64> {
    declustered_in(y, |v| if v.re > 0.0 { v.re } else { v.norm() }, f)
}

/// As [`declustered`], with `reach(y_k)` a lower bound for the distance from a
/// clustered point to the nearest singularity of `f`.
pub fn declustered_in(y: &[C64], reach: impl Fn(C64) -> f64, f: impl Fn(&[C64]) -> Result<C64>) -> Result<C64> {
    let n = y.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn root(g: &mut [usize], mut i: usize) -> usize {
        while g[i] != i {
            g[i] = g[g[i]];
            i = g[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (y[i] - y[j]).norm() < CLUSTER_SEP {
                let (a, b) = (root(&mut group, i), root(&mut group, j));
                group[a] = b;
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| root(&mut group, i)).collect();
    let mut d = vec![C64::new(0.0, 0.0); n];
    let mut any = false;
    for r in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| roots[i] == r).collect();
        if members.len() > 1 {
            any = true;
            let m = members.len() as f64;
            for (k, &i) in members.iter().enumerate() {
                d[i] = C64::from_polar(1.0, 2.0 * PI * k as f64 / m);
            }
        }
    }
    if !any {
        return f(y);
    }
    // keep the spread small against other points and the origin
    let mut h: f64 = 0.05;
    for i in 0..n {
        if d[i].norm() == 0.0 {
            continue;
        }
        h = h.min(0.5 * reach(y[i]));
        for j in 0..n {
            if roots[j] != roots[i] {
                h = h.min(0.3 * (y[i] - y[j]).norm());
            }
        }
    }
    if h < 1e-6 {
        return Err(Error::IllConditioned("cluster too close to other points or the origin".into()));
    }
    let mut total = C64::new(0.0, 0.0);
    let mut p = vec![C64::new(0.0, 0.0); n];
    for m in 0..CLUSTER_NODES {
        let t = C64::from_polar(h, 2.0 * PI * (m as f64 + 0.5) / CLUSTER_NODES as f64);
        for k in 0..n {
            p[k] = y[k] + t * d[k];
        }
        total += f(&p)?;
    }
    Ok(total / CLUSTER_NODES as f64)
}

/// Closed form of the Airy matrix integral for `Y = diag(y)`, `Re y > 0`:
/// `2^{2S} pi^S det[e^{(2/3) y_k^3} Ai^{(j-1)}(y_k^2)] prod sqrt(y_k) / prod_{j<k}(y_j - y_k)`.
pub fn z_kont(y: &[C64]) -> Result<C64> {
    declustered(y, z_kont_raw)
}

/// Generalized integral over a product of sector contours with a shift `x`:
/// `(-w)^{n1-n2} (2 sqrt pi)^{2S} e^{(2/3) sum y^3 + x sum y} prod sqrt(y) / prod_{j<k}(y_j - y_k)
///  * det[Ai_{s_j}^{(k-1)}(y_j^2 + x)]`, with `Ai_s(z) = Ai(w^s z)`.
pub fn z_kont_generalized(y: &[C64], sectors: &[u8], x: C64) -> Result<C64> {
    if sectors.len() != y.len() {
        return Err(Error::Invalid("one sector per eigenvalue".into()));
    }
    for (&v, &sec) in y.iter().zip(sectors) {
        if !sector_ok(sec, v) {
            return Err(Error::Sector(format!("y = {v} is not admissible for sector {sec}")));
        }
    }
    declustered(y, |p| z_kont_generalized_raw(p, sectors, x))
}

/// Soft-edge limit of the case I average:
/// `det[Ai^{(j-1)}(y_k^2)] / prod_{j<k}(y_j^2 - y_k^2)`, written through `z_kont`.
pub fn thm_soft_rhs(y: &[C64]) -> Result<C64> {
    declustered(y, thm_soft_rhs_raw)
}

/// Direct form of [`thm_soft_rhs`], for points with moderate `|y|`.
pub fn soft_rhs_direct(y: &[C64]) -> Result<C64> {
    declustered(y, soft_rhs_direct_raw)
}

/// Hard-edge limits.
/// Case I: `prod y^{nu/2} det[f_{nu-l+1}(y_j)] / prod_{j<k}(y_j - y_k)`, `arg y in [0, 2 pi)`.
/// Case III: `e^{i pi nu S} (2 pi)^{2S} prod x^{nu/2} det[g_{nu-l+1}(x_j)] / prod_{j<k}(x_j - x_k)`,
/// `x = -y` with `arg x = arg y + pi`.
pub fn thm_hard_rhs(case: Case, nu: f64, y: &[C64]) -> Result<C64> {
    if case == Case::III && y.iter().any(|v| v.im == 0.0 && v.re <= 0.0) {
        return Err(Error::Branch("case III needs y off (-inf, 0]".into()));
    }
    let mut pre = ONE;
    match case {
        Case::I => {
            for &v in y {
                pre *= pow_cut(v, nu / 2.0);
            }
            Ok(pre * declustered_in(y, |_| f64::INFINITY, |p| hard_core(case, nu, p))?)
        }
        _ => {
            for &v in y {
                pre *= C64::from_polar(v.norm().powf(nu / 2.0), (v.arg() + PI) * nu / 2.0);
            }
            // g has its cut where -y is positive
            let reach = |v: C64| if v.re < 0.0 { v.im.abs() } else { v.norm() };
            Ok(pre * declustered_in(y, reach, |p| hard_core(case, nu, p))?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parametrix::{airy_kernel, limit_rhs, ParametrixKind, Side};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn soft_rhs_single_pair_is_airy_kernel() {
        let y = [c(0.8, 0.1), c(1.3, -0.2)];
        let v = thm_soft_rhs(&y).unwrap();
        let k = airy_kernel(y[0] * y[0], y[1] * y[1]).unwrap();
        assert!((v - k).norm() < 1e-12 * k.norm());
        let d = soft_rhs_direct(&y).unwrap();
        assert!((v - d).norm() < 1e-12 * k.norm());
    }

    #[test]
    fn soft_rhs_matches_parametrix_form() {
        let y = [c(0.7, 0.0), c(1.1, 0.0), c(0.9, 0.3), c(1.4, 0.2)];
        let x: Vec<C64> = y.iter().map(|v| v * v).collect();
        let lim = limit_rhs(Case::I, ParametrixKind::Airy, &x[..2], &x[2..], Some(Side::Upper)).unwrap();
        let thm = thm_soft_rhs(&y).unwrap();
        assert!((lim - thm).norm() < 1e-10 * thm.norm(), "{lim} {thm}");
    }

    #[test]
    fn generalized_sector_zero_is_z_kont() {
        let y = [c(1.0, 0.2), c(1.5, -0.1)];
        let a = z_kont(&y).unwrap();
        let b = z_kont_generalized(&y, &[0, 0], c(0.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
        assert!(z_kont_generalized(&y, &[1, 0], c(0.0, 0.0)).is_err());
    }

    #[test]
    fn hard_rhs_matches_parametrix_forms() {
        let nu = 0.5;
        let y = [c(0.6, 0.2), c(1.1, 0.1), c(0.8, -0.3), c(1.5, 0.4)];
        let lim = limit_rhs(Case::I, ParametrixKind::Bessel(nu), &y[..2], &y[2..], None).unwrap();
        let thm = thm_hard_rhs(Case::I, nu, &y).unwrap();
        assert!((lim - thm).norm() < 1e-9 * thm.norm(), "{lim} {thm}");
        let x: Vec<C64> = y.iter().map(|v| -v).collect();
        let lim3 = limit_rhs(Case::III, ParametrixKind::Bessel(nu), &x[..2], &x[2..], None).unwrap();
        let thm3 = thm_hard_rhs(Case::III, nu, &y).unwrap();
        let e = C64::from_polar(1.0, PI * nu * 2.0);
        assert!((e * lim3 - thm3).norm() < 1e-9 * thm3.norm(), "{lim3} {thm3}");
    }

    #[test]
    fn clustered_points_hit_the_confluent_limit() {
        // mpmath at a 1e-25 separation
        let z = z_kont(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((z.re / 0.66969282142315729518 - 1.0).abs() < 1e-11, "{z}");
        let z = z_kont(&[c(1.0, 0.0), c(1.0 + 1e-6, 0.0)]).unwrap();
        assert!((z.re / 0.66969282142315729518 - 1.0).abs() < 1e-5, "{z}");
        let h = thm_hard_rhs(Case::I, 0.5, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((h / 0.37853431522005952539 - 1.0).norm() < 1e-11, "{h}");
        let h = thm_hard_rhs(Case::III, 0.5, &[c(1.5, 0.0), c(1.5, 0.0)]).unwrap();
        assert!((h / 0.0078060056346745208477 - 1.0).norm() < 1e-10, "{h}");
        // S = 1 soft limit at a double point is the Airy kernel diagonal
        let y = [c(0.9, 0.1), c(0.9, 0.1)];
        let k = airy_kernel(y[0] * y[0], y[0] * y[0]).unwrap();
        assert!((thm_soft_rhs(&y).unwrap() - k).norm() < 1e-11 * k.norm());
    }
}

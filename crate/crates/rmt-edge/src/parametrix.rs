//! Airy and Bessel model matrices, their kernels, the limiting determinant
//! expressions for the three correlator cases and the block-determinant identity.

use crate::error::{Error, Result};
use crate::linalg::{det, vandermonde, Matrix2C};
use crate::specialfn::{airy, arg_2pi, bessel_j, hankel1, omega};
use crate::C64;
use std::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParametrixKind {
    Airy,
    Bessel(f64),
}

/// Boundary side for points on a jump contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    I,
    II,
    III,
}

/// Airy parametrix; points on the real axis need a side.
pub fn airy_parametrix(zeta: C64, side: Option<Side>) -> Result<Matrix2C> {
    let upper = if zeta.im > 0.0 {
        true
    } else if zeta.im < 0.0 {
        false
    } else {
        match side {
            Some(Side::Upper) => true,
            Some(Side::Lower) => false,
            None => return Err(Error::Branch("Airy parametrix on the real axis needs a side".into())),
        }
    };
    let w = omega();
    let (a, ap) = airy(zeta)?;
    let m = if upper {
        let (a2, a2p) = airy(w * w * zeta)?;
        Matrix2C::new(a, a2, ap, w * w * a2p)
    } else {
        let (a1, a1p) = airy(w * zeta)?;
        let f = -(w * w);
        Matrix2C::new(a, f * a1, ap, f * w * a1p)
    };
    let pref = C64::from_polar((2.0 * PI).sqrt(), -PI / 12.0);
    let right = Matrix2C::new(C64::from_polar(1.0, -PI / 6.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::from_polar(1.0, PI / 6.0));
    Ok((m * right).scale(pref))
}

/// Bessel parametrix for `arg zeta` in `[0, 2 pi)`; points on the positive axis need a side
/// (upper = `arg 0`, lower = `arg 2 pi`).
pub fn bessel_parametrix(nu: f64, zeta: C64, side: Option<Side>) -> Result<Matrix2C> {
    let on_cut = zeta.im == 0.0 && zeta.re > 0.0;
    let arg = if on_cut {
        match side {
            Some(Side::Upper) => 0.0,
            Some(Side::Lower) => 2.0 * PI,
            None => return Err(Error::Branch("Bessel parametrix on (0, inf) needs a side".into())),
        }
    } else {
        arg_2pi(zeta)
    };
    if zeta == C64::new(0.0, 0.0) {
        return Err(Error::Domain("Bessel parametrix at 0".into()));
    }
    let r = C64::from_polar(zeta.norm().sqrt(), 0.5 * arg);
    let z = r * 2.0;
    let (j, jp) = bessel_j(nu, z)?;
    let (h, hp) = hankel1(nu, z)?;
    Ok(Matrix2C::new(j, h * 0.5, -2.0 * PI * I * r * jp, -PI * I * r * hp))
}

fn parametrix(kind: ParametrixKind, z: C64, side: Option<Side>) -> Result<Matrix2C> {
    match kind {
        ParametrixKind::Airy => airy_parametrix(z, side),
        ParametrixKind::Bessel(nu) => bessel_parametrix(nu, z, side),
    }
}

/// `K_Ai(x, y) = (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`.
pub fn airy_kernel(x: C64, y: C64) -> Result<C64> {
    let (a, ap) = airy(x)?;
    let (b, bp) = airy(y)?;
    if x == y {
        return Ok(ap * ap - x * a * a);
    }
    Ok((a * bp - ap * b) / (x - y))
}

/// Bessel kernel in the `zeta` variable:
/// `(sqrt(z2) J(2 sqrt z1) J'(2 sqrt z2) - sqrt(z1) J'(2 sqrt z1) J(2 sqrt z2)) / (z1 - z2)`.
pub fn bessel_kernel(nu: f64, z1: C64, z2: C64) -> Result<C64> {
    if z1 == z2 {
        return Err(Error::Domain("bessel kernel needs z1 != z2".into()));
    }
    let r1 = crate::specialfn::sqrt_cut(z1);
    let r2 = crate::specialfn::sqrt_cut(z2);
    let (j1, j1p) = bessel_j(nu, r1 * 2.0)?;
    let (j2, j2p) = bessel_j(nu, r2 * 2.0)?;
    Ok((r2 * j1 * j2p - r1 * j1p * j2) / (z1 - z2))
}

/// `(P^{-1}(g) P(b))_{ij}` for the chosen kind.
pub fn kernel_entry(kind: ParametrixKind, g: C64, b: C64, i: usize, j: usize, side: Option<Side>) -> Result<C64> {
    let pg = parametrix(kind, g, side)?;
    let pb = parametrix(kind, b, side)?;
    Ok((pg.adj() * pb)[(i, j)])
}

fn check_distinct(g: &[C64], b: &[C64]) -> Result<()> {
    if g.len() != b.len() || g.is_empty() {
        return Err(Error::Invalid("gamma and beta must have the same positive length".into()));
    }
    let all: Vec<C64> = g.iter().chain(b.iter()).copied().collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if (all[i] - all[j]).norm() < 1e-8 {
                return Err(Error::IllConditioned("points closer than 1e-8".into()));
            }
        }
    }
    Ok(())
}

/// Limit determinants:
/// I: `det[(P^{-1}(g) P(b))_21 / (g - b)] / ((-2 i pi)^S D(g) D(b))`,
/// II: `(-1)^{S(S-1)/2} prod(g - b) / (D(g) D(b)) det[(P^{-1}(g) P(b))_11 / (g - b)]`,
/// III: `(-2 i pi)^S / (D(g) D(b)) det[(P^{-1}(g) P(b))_12 / (g - b)]`.
pub fn limit_rhs(case: Case, kind: ParametrixKind, g: &[C64], b: &[C64], side: Option<Side>) -> Result<C64> {
    check_distinct(g, b)?;
    let s = g.len();
    let pg: Vec<Matrix2C> = g.iter().map(|&z| parametrix(kind, z, side)).collect::<Result<_>>()?;
    let pb: Vec<Matrix2C> = b.iter().map(|&z| parametrix(kind, z, side)).collect::<Result<_>>()?;
    let (ei, ej) = match case {
        Case::I => (1, 0),
        Case::II => (0, 0),
        Case::III => (0, 1),
    };
    let mut m = vec![C64::new(0.0, 0.0); s * s];
    for l in 0..s {
        let inv = pg[l].adj();
        for j in 0..s {
            m[l * s + j] = (inv * pb[j])[(ei, ej)] / (g[l] - b[j]);
        }
    }
    let d = det(&m, s);
    let dd = vandermonde(g) * vandermonde(b);
    let tpi = (-2.0 * PI * I).powu(s as u32);
    Ok(match case {
        Case::I => d / (tpi * dd),
        Case::II => {
            let mut p = ONE;
            for &x in g {
                for &y in b {
                    p *= x - y;
                }
            }
            crate::correlators::pair_sign(s) * p * d / dd
        }
        Case::III => tpi * d / dd,
    })
}

/// The signed `2S x 2S` block determinant divided by `prod (x_j - y_k)`:
/// `(-1)^{S(S-1)/2} det[[x^{l-1} a | x^{l-1} b], [y^{l-1} c | y^{l-1} d]] / prod(x_j - y_k)`.
pub fn block_det(a: &[C64], b: &[C64], c: &[C64], d: &[C64], x: &[C64], y: &[C64]) -> C64 {
    let s = x.len();
    let n = 2 * s;
    let mut m = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..s {
        for l in 0..s {
            let xp = x[j].powu(l as u32);
            let yp = y[j].powu(l as u32);
            m[j * n + l] = xp * a[j];
            m[j * n + s + l] = xp * b[j];
            m[(s + j) * n + l] = yp * c[j];
            m[(s + j) * n + s + l] = yp * d[j];
        }
    }
    let mut p = ONE;
    for &xj in x {
        for &yk in y {
            p *= xj - yk;
        }
    }
    let sign = if (s * (s.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    det(&m, n) * sign / p
}

/// Both sides of the determinant identity:
/// `det[det H_{jk} / (x_j - y_k)]` with `H_{jk} = [[a_j, b_j], [c_k, d_k]]`, and the block form.
pub fn detid_check(a: &[C64], b: &[C64], c: &[C64], d: &[C64], x: &[C64], y: &[C64]) -> (C64, C64) {
    let s = x.len();
    let mut m = vec![C64::new(0.0, 0.0); s * s];
    for j in 0..s {
        for k in 0..s {
            m[j * s + k] = (a[j] * d[k] - b[j] * c[k]) / (x[j] - y[k]);
        }
    }
    (det(&m, s), block_det(a, b, c, d, x, y))
}

/// The limit determinants evaluated through the block form.
pub fn block_det_form(case: Case, kind: ParametrixKind, g: &[C64], b: &[C64], side: Option<Side>) -> Result<C64> {
    check_distinct(g, b)?;
    let s = g.len();
    let pg: Vec<Matrix2C> = g.iter().map(|&z| parametrix(kind, z, side)).collect::<Result<_>>()?;
    let pb: Vec<Matrix2C> = b.iter().map(|&z| parametrix(kind, z, side)).collect::<Result<_>>()?;
    let e = |v: &[Matrix2C], i: usize, j: usize| v.iter().map(|m| m[(i, j)]).collect::<Vec<C64>>();
    let (a, bb, c, d) = match case {
        Case::I => (e(&pg, 0, 0), e(&pg, 1, 0), e(&pb, 0, 0), e(&pb, 1, 0)),
        Case::II => (e(&pg, 1, 1), e(&pg, 0, 1), e(&pb, 1, 0), e(&pb, 0, 0)),
        Case::III => (e(&pg, 1, 1), e(&pg, 0, 1), e(&pb, 1, 1), e(&pb, 0, 1)),
    };
    let blk = block_det(&a, &bb, &c, &d, g, b);
    let dd = vandermonde(g) * vandermonde(b);
    let tpi = (-2.0 * PI * I).powu(s as u32);
    let mut p = ONE;
    for &x in g {
        for &y in b {
            p *= x - y;
        }
    }
    Ok(match case {
        Case::I => blk / (tpi * dd),
        Case::II => crate::correlators::pair_sign(s) * p * blk / dd,
        Case::III => tpi * blk / dd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn airy_parametrix_unimodular() {
        for z in [c(1.0, 1.0), c(-2.0, 0.5), c(0.3, -1.2)] {
            let m = airy_parametrix(z, None).unwrap();
            assert!((m.det() - 1.0).norm() < 1e-10);
        }
        assert!(airy_parametrix(c(1.0, 0.0), None).is_err());
    }

    #[test]
    fn bessel_parametrix_unimodular_and_jump() {
        let m = bessel_parametrix(0.5, c(0.3, 0.2), None).unwrap();
        assert!((m.det() - 1.0).norm() < 1e-10);
        let nu: f64 = 0.5;
        let x = 2.0;
        let up = bessel_parametrix(nu, c(x, 1e-7), None).unwrap();
        let lo = bessel_parametrix(nu, c(x, -1e-7), None).unwrap();
        let e = C64::from_polar(1.0, -PI * nu);
        let jump = Matrix2C::new(e, e, c(0.0, 0.0), e.conj());
        assert!((up.max_abs_diff(&(lo * jump))) < 1e-6);
        let up_side = bessel_parametrix(nu, c(x, 0.0), Some(Side::Upper)).unwrap();
        let lo_side = bessel_parametrix(nu, c(x, 0.0), Some(Side::Lower)).unwrap();
        assert!((up_side.max_abs_diff(&(lo_side * jump))) < 1e-11);
    }

    #[test]
    fn detid_single_pair() {
        let v = [c(0.3, 0.1)];
        let (l, r) = detid_check(&v, &[c(1.0, 0.0)], &[c(0.0, 2.0)], &[c(-1.0, 0.5)], &[c(0.2, 0.0)], &[c(1.1, 0.3)]);
        assert!((l - r).norm() < 1e-14 * l.norm());
    }

    #[test]
    fn case_i_airy_single_pair_is_kernel() {
        let (g, b) = (c(0.5, 0.0), c(1.2, 0.0));
        let v = limit_rhs(Case::I, ParametrixKind::Airy, &[g], &[b], Some(Side::Upper)).unwrap();
        let k = airy_kernel(g, b).unwrap();
        assert!((v - k).norm() < 1e-12 * k.norm());
    }
}

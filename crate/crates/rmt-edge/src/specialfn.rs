//! Complex special functions: Airy on rotated rays, Bessel J and Hankel H1,
//! and the contour integrals
//!
//! `f_nu(zeta) = (2 pi i)^{-1} int_loop e^{-zeta s + 1/s} s^{nu-1} ds`,
//! `g_nu(zeta) = (2 pi i)^{-1} int_ray  e^{-zeta s + 1/s} s^{nu-1} ds`.
//!
//! The loop starts and ends at `s = 0` along the two sides of the negative axis;
//! the ray also starts at `0` (lower side of the negative axis) and leaves towards
//! `conj(zeta)/|zeta| * inf`, so that `e^{-zeta s}` decays.

use crate::error::{Error, Result};
use crate::quad::{gl_doubling, periodic_trapezoid};
use crate::C64;
use libm::tgamma as gamma;
use std::f64::consts::PI;

pub const AI0: f64 = 0.355_028_053_887_817_24;
pub const AIP0: f64 = -0.258_819_403_792_806_8;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `e^{2 pi i / 3}`.
pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Argument in `[0, 2 pi)`.
pub fn arg_2pi(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `z^p` with the cut along the positive real axis (`arg z` in `[0, 2 pi)`).
pub fn pow_cut(z: C64, p: f64) -> C64 {
    if z == ZERO {
        return if p == 0.0 { ONE } else { ZERO };
    }
    C64::from_polar(z.norm().powf(p), p * arg_2pi(z))
}

pub fn sqrt_cut(z: C64) -> C64 {
    pow_cut(z, 0.5)
}

/// Principal power, `arg z` in `(-pi, pi]`.
pub fn pow_principal(z: C64, p: f64) -> C64 {
    if z == ZERO {
        return if p == 0.0 { ONE } else { ZERO };
    }
    C64::from_polar(z.norm().powf(p), p * z.arg())
}

// ---------------------------------------------------------------- Airy

fn airy_series(z: C64) -> (C64, C64) {
    // Ai'' = z Ai gives a_k = a_{k-3} / ((k-1) k)
    let mut a = [C64::new(AI0, 0.0), C64::new(AIP0, 0.0), ZERO];
    let mut ai = a[0] + a[1] * z;
    let mut aip = a[1];
    let mut zp = z; // z^{k-1}
    let mut small = 0;
    for k in 2..600usize {
        let ak = if k == 2 { ZERO } else { a[k % 3] / (((k - 1) * k) as f64) };
        a[k % 3] = ak;
        let d = ak * zp * k as f64;
        zp *= z;
        let t = ak * zp;
        ai += t;
        aip += d;
        if t.norm() <= 1e-18 * ai.norm() && d.norm() <= 1e-18 * aip.norm() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (ai, aip)
}

/// `(int e^{i u^3/3 - sqrt(z) u^2} du, int (i u - sqrt z) e^{...} du)` over the real line.
fn airy_integral(z: C64) -> Result<(C64, C64)> {
    let r = z.sqrt();
    if r.re <= 0.0 {
        return Err(Error::Domain("airy integral needs Re sqrt(z) > 0".into()));
    }
    // truncation where the Gaussian factor is below 1e-19
    let u_max = (44.0 / r.re).sqrt();
    let eval = |u: f64| -> (C64, C64) {
        let e = (I * (u * u * u / 3.0) - r * (u * u)).exp();
        (e, (I * u - r) * e)
    };
    let mut h = (u_max / 16.0).min(0.25);
    let mut n = (u_max / h).ceil() as i64;
    h = u_max / n as f64;
    let mut s0 = ZERO;
    let mut s1 = ZERO;
    for k in -n..=n {
        let (a, b) = eval(k as f64 * h);
        s0 += a;
        s1 += b;
    }
    let mut prev = (s0 * h, s1 * h);
    for _ in 0..10 {
        // refine: add midpoints
        for k in -n..n {
            let (a, b) = eval((k as f64 + 0.5) * h);
            s0 += a;
            s1 += b;
        }
        h *= 0.5;
        n *= 2;
        let cur = (s0 * h, s1 * h);
        let err = (cur.0 - prev.0).norm() / cur.0.norm() + (cur.1 - prev.1).norm() / cur.1.norm().max(1e-300);
        if err < 1e-15 {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// `(2/3) z^{3/2}` on the principal branch.
pub fn airy_xi(z: C64) -> C64 {
    z * z.sqrt() * (2.0 / 3.0)
}

const SERIES_RADIUS: f64 = 2.5;

/// Scaled Airy pair `e^{xi} (Ai(z), Ai'(z))` for `|arg z| <= 2 pi / 3`, `xi = (2/3) z^{3/2}`.
fn airy_scaled_sector(z: C64) -> Result<(C64, C64)> {
    if z.norm() <= SERIES_RADIUS {
        let (a, b) = airy_series(z);
        let e = airy_xi(z).exp();
        return Ok((a * e, b * e));
    }
    let (i0, i1) = airy_integral(z)?;
    Ok((i0 / (2.0 * PI), i1 / (2.0 * PI)))
}

/// Airy function and derivative.
pub fn airy(z: C64) -> Result<(C64, C64)> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if z.norm() <= SERIES_RADIUS {
        return Ok(airy_series(z));
    }
    if z.arg().abs() <= 2.0 * PI / 3.0 + 1e-12 {
        let xi = airy_xi(z);
        if -xi.re > 700.0 {
            return Err(Error::Overflow(format!("Ai({z}) exceeds the double range")));
        }
        let (a, b) = airy_scaled_sector(z)?;
        let e = (-xi).exp();
        return Ok((a * e, b * e));
    }
    // Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z)
    let w = omega();
    let (a1, b1) = airy(w * z)?;
    let (a2, b2) = airy(w * w * z)?;
    Ok((-w * a1 - w * w * a2, -w * w * b1 - w * b2))
}

/// `e^{xi} (Ai(z), Ai'(z))`, principal `xi = (2/3) z^{3/2}`; useful when `Re z >> 0`.
pub fn airy_scaled(z: C64) -> Result<(C64, C64)> {
    if z.norm() > SERIES_RADIUS && z.arg().abs() <= 2.0 * PI / 3.0 + 1e-12 {
        return airy_scaled_sector(z);
    }
    let (a, b) = airy(z)?;
    let xi = airy_xi(z);
    if xi.re > 700.0 {
        return Err(Error::Overflow("scaling factor".into()));
    }
    let e = xi.exp();
    Ok((a * e, b * e))
}

/// `Ai_j(z) = Ai(w^j z)` and `d/dz Ai_j(z) = w^j Ai'(w^j z)`.
pub fn airy_rotated(j: u8, z: C64) -> Result<(C64, C64)> {
    let wj = omega().powu(j as u32 % 3);
    let (a, b) = airy(wj * z)?;
    Ok((a, wj * b))
}

/// Extend `[A_0, A_1]` (values of `Ai, Ai'` or any solution of the Airy ODE) to
/// `A_0 .. A_m` with `A_{k+2} = z A_k + k A_{k-1}`.
pub fn airy_ode_derivs(z: C64, a0: C64, a1: C64, m: usize) -> Vec<C64> {
    let mut d = vec![a0, a1];
    for k in 0..m.saturating_sub(1) {
        let prev = if k >= 1 { d[k - 1] * k as f64 } else { ZERO };
        d.push(z * d[k] + prev);
    }
    d.truncate(m + 1);
    d
}

/// `Ai^{(k)}(z)` for `k = 0..=m`.
pub fn airy_derivs(z: C64, m: usize) -> Result<Vec<C64>> {
    let (a, b) = airy(z)?;
    Ok(airy_ode_derivs(z, a, b, m))
}

/// `e^{xi} Ai^{(k)}(z)` for `k = 0..=m`.
pub fn airy_derivs_scaled(z: C64, m: usize) -> Result<Vec<C64>> {
    let (a, b) = airy_scaled(z)?;
    Ok(airy_ode_derivs(z, a, b, m))
}

// ---------------------------------------------------------------- contours

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    /// Loop from `0` along the lower side of the negative axis, round a circle, back along the upper side.
    HankelLoop,
    /// From `0` (lower side of the negative axis) towards `conj(zeta)/|zeta| * inf`.
    Ray,
    /// Unit circle, valid for integer `nu` only.
    UnitCircle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub kind: ContourKind,
    /// Extra angle added to the outgoing ray direction (ray kind only).
    pub rotation: f64,
    /// Gauss-Legendre order per panel (at least 32).
    pub nodes: usize,
    /// Multiplies the default circle radius `1/sqrt(max(|zeta|, 1))`.
    pub radius_scale: f64,
}

impl ContourSpec {
    pub fn hankel_loop() -> Self {
        ContourSpec { kind: ContourKind::HankelLoop, rotation: 0.0, nodes: 32, radius_scale: 1.0 }
    }
    pub fn ray() -> Self {
        ContourSpec { kind: ContourKind::Ray, rotation: 0.0, nodes: 32, radius_scale: 1.0 }
    }
    pub fn unit_circle() -> Self {
        ContourSpec { kind: ContourKind::UnitCircle, rotation: 0.0, nodes: 64, radius_scale: 1.0 }
    }
}

const CONTOUR_TOL: f64 = 1e-14;

/// `exp(-zeta s + 1/s + p log s)` with `s = r e^{i phi}`, `phi` continuous (no principal wrap).
fn kernel(zeta: C64, r: f64, phi: f64, p: f64) -> C64 {
    if r == 0.0 {
        return ZERO;
    }
    let s = C64::from_polar(r, phi);
    let e = -zeta * s + s.inv() + C64::new(p * r.ln(), p * phi);
    if e.re < -745.0 {
        return ZERO;
    }
    e.exp()
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-14
}

/// Series `sum_k (-zeta)^k / (k! Gamma(k + nu + 1))`.
pub fn f_nu_series(nu: f64, zeta: C64) -> C64 {
    let k0 = if nu < 0.0 && is_integer(nu) { (-nu).round() as usize } else { 0 };
    let mut fact = 1.0;
    for k in 1..=k0 {
        fact *= k as f64;
    }
    let mut term = (-zeta).powu(k0 as u32) / (fact * gamma(k0 as f64 + nu + 1.0));
    let mut sum = term;
    let mut k = k0;
    loop {
        term = term * (-zeta) / ((k + 1) as f64 * (k as f64 + nu + 1.0));
        sum += term;
        k += 1;
        if term.norm() <= 1e-17 * sum.norm() && k as f64 > zeta.norm().sqrt() {
            break;
        }
        if k > 2000 || term == ZERO {
            break;
        }
    }
    sum
}

fn loop_integral(nu: f64, zeta: C64, spec: &ContourSpec) -> Result<C64> {
    let r0 = spec.radius_scale / zeta.norm().max(1.0).sqrt();
    let p = nu - 1.0;
    let n = spec.nodes.max(32);
    // both rays combined: int_0^{r0} [e^{i pi (nu-1)} - e^{-i pi (nu-1)}] e^{zeta r - 1/r} r^{nu-1} dr
    let rays = |r: f64| kernel(zeta, r, PI, p) - kernel(zeta, r, -PI, p);
    let ray_part = if is_integer(nu) { ZERO } else { gl_doubling(&rays, 0.0, r0, n, CONTOUR_TOL)? };
    // circle: s = r0 e^{i phi}, ds = i s dphi
    let circ = |phi: f64| kernel(zeta, r0, phi, nu) * I;
    let circ_part = gl_doubling(&circ, -PI, PI, n, CONTOUR_TOL)?;
    Ok((ray_part + circ_part) / (2.0 * PI * I))
}

fn circle_integral(nu: f64, zeta: C64, spec: &ContourSpec) -> Result<C64> {
    if !is_integer(nu) {
        return Err(Error::Domain("unit-circle contour requires integer nu".into()));
    }
    let f = |phi: f64| kernel(zeta, 1.0, phi, nu) * I;
    let mut n = spec.nodes.max(32);
    let mut prev = periodic_trapezoid(f, n);
    for _ in 0..12 {
        n *= 2;
        let cur = periodic_trapezoid(f, n);
        if (cur - prev).norm() <= CONTOUR_TOL * cur.norm().max(1e-300) {
            return Ok(cur / (2.0 * PI * I));
        }
        prev = cur;
    }
    Err(Error::NoConvergence("unit circle".into()))
}

/// `f_nu` by direct contour quadrature.
pub fn f_nu_contour(nu: f64, zeta: C64, spec: &ContourSpec) -> Result<C64> {
    match spec.kind {
        ContourKind::HankelLoop => loop_integral(nu, zeta, spec),
        ContourKind::UnitCircle => circle_integral(nu, zeta, spec),
        ContourKind::Ray => Err(Error::Domain("f_nu is defined on the closed loop".into())),
    }
}

/// `f_nu(zeta)`: series where cancellation is harmless, loop quadrature otherwise.
pub fn f_nu(nu: f64, zeta: C64) -> Result<C64> {
    let a = zeta.norm().sqrt() * 2.0; // |z| with z = 2 sqrt(zeta)
    let im = a * (0.5 * zeta.arg()).sin().abs();
    if a - im <= 9.0 {
        Ok(f_nu_series(nu, zeta))
    } else {
        loop_integral(nu, zeta, &ContourSpec::hankel_loop())
    }
}

/// `g_nu` by quadrature along the deformed ray.
pub fn g_nu_contour(nu: f64, zeta: C64, spec: &ContourSpec) -> Result<C64> {
    if spec.kind != ContourKind::Ray {
        return Err(Error::Domain("g_nu uses the ray contour".into()));
    }
    if zeta == ZERO {
        return Err(Error::Domain("g_nu needs zeta != 0".into()));
    }
    let theta = arg_2pi(zeta) + spec.rotation;
    let rz = zeta.norm();
    let r0 = spec.radius_scale / rz.sqrt();
    let p = nu - 1.0;
    let n = spec.nodes.max(32);
    // from 0 to r0 along arg -pi: s = r e^{-i pi}, ds = -dr
    let lower = |r: f64| -kernel(zeta, r, -PI, p);
    let mut total = gl_doubling(&lower, 0.0, r0, n, CONTOUR_TOL)?;
    // arc from -pi to -theta at radius r0
    let end = -theta;
    if (end + PI).abs() > 1e-15 {
        let arc = |phi: f64| kernel(zeta, r0, phi, nu) * I;
        total += gl_doubling(&arc, -PI, end, n, CONTOUR_TOL)?;
    }
    // outgoing ray at angle -theta
    let decay = rz * (arg_2pi(zeta) - theta).cos();
    if decay <= 0.0 {
        return Err(Error::Branch("ray direction does not give decay".into()));
    }
    let span = (60.0 + p.max(0.0) * 8.0) / decay;
    let dir = C64::from_polar(1.0, end);
    let ray = |r: f64| kernel(zeta, r, end, p) * dir;
    // split the ray into pieces of growing length so each gets resolved
    let mut a = r0;
    let mut len = (1.0 / decay).max(r0);
    while a < r0 + span {
        let b = (a + len).min(r0 + span);
        total += gl_doubling(&ray, a, b, n, CONTOUR_TOL)?;
        a = b;
        len *= 2.0;
    }
    Ok(total / (2.0 * PI * I))
}

pub fn g_nu(nu: f64, zeta: C64) -> Result<C64> {
    g_nu_contour(nu, zeta, &ContourSpec::ray())
}

// ---------------------------------------------------------------- Bessel

/// `J_nu(z)` and `J_nu'(z)` on the principal branch of `z^nu`.
pub fn bessel_j(nu: f64, z: C64) -> Result<(C64, C64)> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if z == ZERO {
        let j = if nu == 0.0 { ONE } else if nu > 0.0 || is_integer(nu) { ZERO } else {
            return Err(Error::Domain("J_nu(0) is infinite for -1 < nu < 0".into()));
        };
        let jp = if nu == 0.0 || nu > 1.0 { ZERO } else if nu == 1.0 { C64::new(0.5, 0.0) } else {
            return Err(Error::Domain("J_nu'(0) is infinite".into()));
        };
        return Ok((j, jp));
    }
    let zeta = z * z / 4.0;
    let h = z / 2.0;
    let f0 = f_nu(nu, zeta)?;
    let f1 = f_nu(nu + 1.0, zeta)?;
    let j = pow_principal(h, nu) * f0;
    let jp = pow_principal(h, nu - 1.0) * (f0 * (nu / 2.0) - zeta * f1);
    Ok((j, jp))
}

/// `H1_nu(z) = 2 (z/2)^nu g_nu(z^2/4)` for `arg z` in `[0, pi)`, with derivative.
fn hankel1_upper(nu: f64, z: C64) -> Result<(C64, C64)> {
    let zeta = z * z / 4.0;
    let h = z / 2.0;
    let g0 = g_nu(nu, zeta)?;
    let gm = g_nu(nu - 1.0, zeta)?;
    let hv = pow_principal(h, nu) * g0 * 2.0;
    let hm = pow_principal(h, nu - 1.0) * gm * 2.0;
    Ok((hv, hm - hv * nu / z))
}

fn hankel1_conn_nonint(nu: f64, z: C64) -> Result<(C64, C64)> {
    let (jp, jpd) = bessel_j(nu, z)?;
    let (jm, jmd) = bessel_j(-nu, z)?;
    let e = C64::from_polar(1.0, -PI * nu);
    let d = I * (PI * nu).sin();
    Ok(((jm - e * jp) / d, (jmd - e * jpd) / d))
}

/// `H1_nu` from `J_{+-nu}`; integer orders by a symmetric limit `nu +- eps`.
pub fn hankel1_connection(nu: f64, z: C64) -> Result<(C64, C64)> {
    if z == ZERO {
        return Err(Error::Domain("H1 is singular at 0".into()));
    }
    if is_integer(nu) {
        let eps = 1e-5;
        let (a, ad) = hankel1_conn_nonint(nu + eps, z)?;
        let (b, bd) = hankel1_conn_nonint(nu - eps, z)?;
        return Ok(((a + b) * 0.5, (ad + bd) * 0.5));
    }
    hankel1_conn_nonint(nu, z)
}

/// Hankel function of the first kind and its derivative.
pub fn hankel1(nu: f64, z: C64) -> Result<(C64, C64)> {
    if z == ZERO {
        return Err(Error::Domain("H1 is singular at 0".into()));
    }
    if z.im > 0.0 || (z.im == 0.0 && z.re > 0.0) {
        hankel1_upper(nu, z)
    } else {
        hankel1_connection(nu, z)
    }
}

//! Quadrature toolkit: Gauss-Legendre rules and panels, tanh-sinh and exp-sinh
//! trapezoids with level doubling, adaptive bisection and the periodic trapezoid.

use crate::error::{Error, Result};
use crate::C64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

pub type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_gl(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess, then Newton
        let theta = PI * (4.0 * i as f64 + 3.0) / (4.0 * n as f64 + 2.0);
        let mut z = (1.0 - (1.0 - 1.0 / n as f64) / (8.0 * (n * n) as f64)) * theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, z);
        let wt = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
pub fn gauss_legendre(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let r = Arc::new(compute_gl(n));
    cache.lock().unwrap().insert(n, r.clone());
    r
}

/// Nodes and weights of an `n`-point rule on every panel between consecutive breakpoints.
pub fn panel_nodes(breaks: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = gauss_legendre(n);
    let mut xs = Vec::with_capacity(n * breaks.len());
    let mut ws = Vec::with_capacity(n * breaks.len());
    for p in breaks.windows(2) {
        let (a, b) = (p[0], p[1]);
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            xs.push(m + h * x);
            ws.push(h * w);
        }
    }
    (xs, ws)
}

pub fn gl<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    let rule = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    let mut s = C64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        s += f(m + h * x) * *w;
    }
    s * h
}

pub fn gl_panels<F: Fn(f64) -> C64>(f: &F, breaks: &[f64], n: usize) -> C64 {
    breaks.windows(2).map(|p| gl(f, p[0], p[1], n)).sum()
}

/// Breakpoints on [a, b] refined geometrically (ratio 2) toward `center`,
/// with the smallest panel no narrower than `min_width`.
pub fn graded_breaks(a: f64, b: f64, center: f64, min_width: f64, max_width: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    let c = center.clamp(a, b);
    let mw = min_width.max(1e-300);
    if c > a && c < b {
        pts.push(c);
    }
    for side in [-1.0, 1.0] {
        let end = if side < 0.0 { a } else { b };
        let mut d = mw;
        while d < (end - c).abs() {
            pts.push(c + side * d);
            d *= 2.0;
        }
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-300);
    // split panels wider than max_width
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let k = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        for i in 1..=k {
            out.push(w[0] + (w[1] - w[0]) * i as f64 / k as f64);
        }
    }
    out
}

/// Merge several breakpoint lists.
pub fn merge_breaks(lists: &[Vec<f64>]) -> Vec<f64> {
    let mut v: Vec<f64> = lists.iter().flatten().copied().collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + x.abs()));
    v
}

/// Gauss-Legendre panels, doubling the number of panels until two successive
/// values agree to `tol` relative (or absolute when the value is tiny).
pub fn gl_doubling<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, n: usize, tol: f64) -> Result<C64> {
    let mut panels = 1usize;
    let mut prev = gl(f, a, b, n);
    for _ in 0..14 {
        panels *= 2;
        let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        let cur = gl_panels(f, &breaks, n);
        let scale = cur.norm().max(1e-300);
        if (cur - prev).norm() <= tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!("gl_doubling on [{a}, {b}]")))
}

const TS_T: f64 = 4.0;

/// tanh-sinh on [a, b]: trapezoid in t with step halving. `f` receives `(x, x-a, b-x)`
/// so that endpoint distances are available without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> C64>(f: F, a: f64, b: f64, tol: f64) -> Result<C64> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let eval = |t: f64| -> C64 {
        let s = FRAC_PI_2 * t.sinh();
        let ch = s.cosh();
        // 1 - tanh(s) = 2/(1+e^{2s}) avoids cancellation near the right end
        let u = 1.0 / (1.0 + (2.0 * s).exp()); // (1 - tanh s)/2
        let v = 1.0 / (1.0 + (-2.0 * s).exp()); // (1 + tanh s)/2
        let dl = 2.0 * half * v; // x - a
        let dr = 2.0 * half * u; // b - x
        if dl <= 0.0 || dr <= 0.0 {
            return C64::new(0.0, 0.0);
        }
        let x = if t < 0.0 { a + dl } else { b - dr };
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        f(x, dl, dr) * w
    };
    let _ = mid;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= TS_T {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= TS_T {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).norm() <= tol * cur.norm().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!("tanh_sinh on [{a}, {b}]")))
}

/// exp-sinh on [a, inf): x = a + scale * exp(pi/2 sinh t).
pub fn exp_sinh<F: Fn(f64) -> C64>(f: F, a: f64, scale: f64, tol: f64) -> Result<C64> {
    let eval = |t: f64| -> C64 {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = a + scale * e;
        if !x.is_finite() || e == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let v = f(x);
        if v == C64::new(0.0, 0.0) {
            return v;
        }
        v * (scale * e * FRAC_PI_2 * t.cosh())
    };
    let tmax = 4.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).norm() <= tol * cur.norm().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!("exp_sinh from {a}")))
}

/// Adaptive bisection with a 16-point Gauss-Legendre rule against its two halves.
pub fn adaptive_gl<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, tol: f64) -> Result<C64> {
    fn rec<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, whole: C64, tol: f64, depth: u32) -> Result<C64> {
        let m = 0.5 * (a + b);
        let l = gl(f, a, m, 16);
        let r = gl(f, m, b, 16);
        let s = l + r;
        if (s - whole).norm() <= tol {
            return Ok(s);
        }
        if depth == 0 {
            return Err(Error::NoConvergence(format!("adaptive_gl on [{a}, {b}]")));
        }
        Ok(rec(f, a, m, l, 0.5 * tol, depth - 1)? + rec(f, m, b, r, 0.5 * tol, depth - 1)?)
    }
    let whole = gl(f, a, b, 16);
    rec(f, a, b, whole, tol, 40)
}

/// Trapezoid on [0, 2pi) with `n` equispaced nodes; spectrally accurate for periodic analytic `f`.
pub fn periodic_trapezoid<F: Fn(f64) -> C64>(f: F, n: usize) -> C64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<C64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn gl_exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 33] {
            let deg = 2 * n - 1;
            let v = gl(|x| re(x.powi(deg as i32 - 1)), -1.0, 1.0, n);
            let want = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((v.re - want).abs() < 1e-13, "n={n}");
        }
        let r = gauss_legendre(4096);
        let s: f64 = r.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let v = tanh_sinh(|_, dl, _| re(dl.ln()), 0.0, 1.0, 1e-13).unwrap();
        assert!((v.re + 1.0).abs() < 1e-12);
        let v = tanh_sinh(|_, dl, dr| re(1.0 / (dl * dr).sqrt()), 0.0, 1.0, 1e-12).unwrap();
        assert!((v.re - PI).abs() < 1e-9);
    }

    #[test]
    fn exp_sinh_gamma() {
        let v = exp_sinh(|x| re(x.sqrt() * (-x).exp()), 0.0, 1.0, 1e-13).unwrap();
        assert!((v.re - 0.5 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_and_doubling_agree() {
        let f = |x: f64| C64::new(0.0, x).exp() / (1.0 + x * x);
        let a = adaptive_gl(&f, -3.0, 5.0, 1e-13).unwrap();
        let b = gl_doubling(&f, -3.0, 5.0, 20, 1e-14).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn graded_breaks_cover_interval() {
        let b = graded_breaks(-4.0, 4.0, 0.3, 1e-3, 0.5);
        assert_eq!(b[0], -4.0);
        assert_eq!(*b.last().unwrap(), 4.0);
        assert!(b.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 0.5 + 1e-12));
        assert!(b.iter().any(|&x| (x - 0.3).abs() < 1e-15));
    }

    #[test]
    fn periodic_trapezoid_bessel_i0() {
        // (1/2pi) int_0^{2pi} e^{cos t} dt = I_0(1)
        let v = periodic_trapezoid(|t| re(t.cos().exp()), 32) / (2.0 * PI);
        assert!((v.re - 1.2660658777520082).abs() < 1e-14);
    }
}

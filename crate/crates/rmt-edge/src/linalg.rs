//! Small dense complex linear algebra: determinants, Vandermonde products and
//! the 2x2 matrix type used for `Y_n` and the parametrices.

use crate::C64;
use std::ops::{Index, IndexMut, Mul};

/// Determinant of a row-major `n x n` matrix by LU with partial pivoting.
pub fn det(a: &[C64], n: usize) -> C64 {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut d = C64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = m[k * n + k].norm();
        for i in k + 1..n {
            let v = m[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            d = -d;
        }
        let piv = m[k * n + k];
        d *= piv;
        for i in k + 1..n {
            let f = m[i * n + k] / piv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
        }
    }
    d
}

/// Determinant of a matrix given as rows.
pub fn det_rows(rows: &[Vec<C64>]) -> C64 {
    let n = rows.len();
    let flat: Vec<C64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    det(&flat, n)
}

/// `prod_{j<k} (x_k - x_j)`.
pub fn vandermonde(x: &[C64]) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for j in 0..x.len() {
        for k in j + 1..x.len() {
            p *= x[k] - x[j];
        }
    }
    p
}

/// `prod_{j<k} (x_j - x_k)`, the ordering used in the Kontsevich displays.
pub fn vandermonde_desc(x: &[C64]) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for j in 0..x.len() {
        for k in j + 1..x.len() {
            p *= x[j] - x[k];
        }
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2C(pub [[C64; 2]; 2]);

impl Matrix2C {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Matrix2C([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Matrix2C([[o, z], [z, o]])
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inv(&self) -> Self {
        let d = self.det();
        Matrix2C([
            [self.0[1][1] / d, -self.0[0][1] / d],
            [-self.0[1][0] / d, self.0[0][0] / d],
        ])
    }

    /// Inverse assuming unit determinant (adjugate only).
    pub fn adj(&self) -> Self {
        Matrix2C([[self.0[1][1], -self.0[0][1]], [-self.0[1][0], self.0[0][0]]])
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for r in m.0.iter_mut() {
            for v in r.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn max_abs_diff(&self, o: &Matrix2C) -> f64 {
        let mut e: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                e = e.max((self.0[i][j] - o.0[i][j]).norm());
            }
        }
        e
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix2C {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix2C {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;
    fn mul(self, o: Matrix2C) -> Matrix2C {
        let mut r = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j];
            }
        }
        Matrix2C(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn det_small() {
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        assert!((det(&a, 2) - c(-2.0, 0.0)).norm() < 1e-14);
        let b = [
            c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0),
            c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0),
            c(3.0, 0.0), c(1.0, 0.0), c(1.0, 0.0),
        ];
        // cofactor expansion along the first row
        let want = -c(1.0, 1.0) * (c(1.0, 0.0) - c(0.0, -3.0)) + c(2.0, 0.0) * c(1.0, 0.0);
        assert!((det(&b, 3) - want).norm() < 1e-13);
    }

    #[test]
    fn vandermonde_matches_det() {
        let x = [c(0.3, 0.1), c(-1.0, 0.5), c(2.0, 0.0), c(0.7, -0.4)];
        let n = x.len();
        let mut a = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = x[j].powu(i as u32);
            }
        }
        assert!((det(&a, n) - vandermonde(&x)).norm() < 1e-12);
        assert!((vandermonde_desc(&x) - vandermonde(&x)).norm() < 1e-12); // n(n-1)/2 = 6 is even
    }

    #[test]
    fn matrix2_inverse() {
        let m = Matrix2C::new(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 0.3), c(2.0, -1.0));
        let p = m * m.inv();
        assert!(p.max_abs_diff(&Matrix2C::identity()) < 1e-14);
    }
}

//! Real polynomials with ascending coefficients.

use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub c: Vec<f64>,
}

impl Poly {
    pub fn new(c: Vec<f64>) -> Self {
        let mut p = Poly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.len() > 1 && *self.c.last().unwrap() == 0.0 {
            self.c.pop();
        }
        if self.c.is_empty() {
            self.c.push(0.0);
        }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.c.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn eval_c(&self, z: C64) -> C64 {
        self.c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn deriv(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(self.c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = vec![0.0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly::new(r)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.c.iter().map(|a| a * s).collect())
    }

    /// True when every odd coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.c.iter().skip(1).step_by(2).all(|&a| a == 0.0)
    }
}

//! Number formatting and convergence CSV records.

use num_complex::Complex64 as C64;
use std::path::Path;

pub const HEADER: [&str; 9] = ["case", "n", "S", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err"];

/// 15 significant digits; scientific notation below `1e-4` (and above `1e15`).
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return "NaN".into();
    }
    let a = x.abs();
    if !(1e-4..1e15).contains(&a) {
        let s = format!("{x:.14e}");
        let (m, e) = s.split_once('e').unwrap();
        return format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.'));
    }
    let mag = a.log10().floor() as i32;
    let dec = (14 - mag).max(0) as usize;
    let s = format!("{x:.dec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_c(z: C64) -> String {
    format!("{},{}", fmt_num(z.re), fmt_num(z.im))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub case: String,
    pub n: usize,
    pub s: usize,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl Record {
    pub fn new(case: &str, n: usize, s: usize, lhs: C64, rhs: C64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = if rhs.norm() > 0.0 { abs_err / rhs.norm() } else { abs_err };
        Record { case: case.into(), n, s, lhs, rhs, abs_err, rel_err }
    }

    pub fn failed(case: &str, n: usize, s: usize) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        Record { case: case.into(), n, s, lhs: nan, rhs: nan, abs_err: f64::NAN, rel_err: f64::NAN }
    }

    pub fn fields(&self) -> Vec<String> {
        vec![
            self.case.clone(),
            self.n.to_string(),
            self.s.to_string(),
            fmt_num(self.lhs.re),
            fmt_num(self.lhs.im),
            fmt_num(self.rhs.re),
            fmt_num(self.rhs.im),
            fmt_num(self.abs_err),
            fmt_num(self.rel_err),
        ]
    }

    pub fn from_fields(f: &csv::StringRecord) -> Result<Self, String> {
        if f.len() != HEADER.len() {
            return Err(format!("expected {} columns, got {}", HEADER.len(), f.len()));
        }
        let num = |i: usize| f[i].parse::<f64>().map_err(|e| format!("column {}: {e}", HEADER[i]));
        Ok(Record {
            case: f[0].to_string(),
            n: f[1].parse().map_err(|e| format!("n: {e}"))?,
            s: f[2].parse().map_err(|e| format!("S: {e}"))?,
            lhs: C64::new(num(3)?, num(4)?),
            rhs: C64::new(num(5)?, num(6)?),
            abs_err: num(7)?,
            rel_err: num(8)?,
        })
    }
}

pub fn write_csv(path: &Path, rows: &[Record]) -> Result<(), String> {
    let mut w = csv::Writer::from_path(path).map_err(|e| e.to_string())?;
    w.write_record(HEADER).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(r.fields()).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

pub fn read_csv(path: &Path) -> Result<Vec<Record>, String> {
    let mut r = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    let mut out = vec![];
    for rec in r.records() {
        out.push(Record::from_fields(&rec.map_err(|e| e.to_string())?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0669872981077807), "0.0669872981077807");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5e-5), "-2.5e-5");
        assert_eq!(fmt_num(123456.789), "123456.789");
        for x in [0.1234567890123456, 3.0e-3, 9.999999999999999e-1, 7.5e-9] {
            let s = fmt_num(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(fmt_num(back), s);
        }
    }
}

//! `key = value` experiment files merged with command-line flags.

use clap::Args;
use num_complex::Complex64 as C64;
use rmt_edge::parametrix::Case;
use std::collections::HashMap;
use std::path::PathBuf;

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Experiment file with `key = value` lines (keys match the long flags)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Potential coefficients c0,c1,... (ascending powers)
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Matrix sizes, e.g. 20,40,80
    #[arg(long)]
    pub n: Option<String>,
    /// Complex points re:im,...
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    /// I, II or III
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance override for every check
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub potential: Option<Vec<f64>>,
    pub nu: Option<f64>,
    pub n_list: Option<Vec<usize>>,
    pub points: Option<Vec<C64>>,
    pub case: Option<Case>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: u64,
}

pub fn parse_kv(text: &str) -> Result<HashMap<String, String>, String> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let v = v.trim().trim_matches('"').trim_matches('\'');
        map.insert(k.trim().replace('_', "-"), v.to_string());
    }
    Ok(map)
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"))).collect()
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad size '{t}': {e}"))).collect()
}

pub fn parse_points(s: &str) -> Result<Vec<C64>, String> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (re, im) = t.split_once(':').unwrap_or((t, "0"));
            let re = re.trim().parse::<f64>().map_err(|e| format!("bad point '{t}': {e}"))?;
            let im = im.trim().parse::<f64>().map_err(|e| format!("bad point '{t}': {e}"))?;
            Ok(C64::new(re, im))
        })
        .collect()
}

pub fn parse_case(s: &str) -> Result<Case, String> {
    match s.trim() {
        "I" | "i" | "1" => Ok(Case::I),
        "II" | "ii" | "2" => Ok(Case::II),
        "III" | "iii" | "3" => Ok(Case::III),
        o => Err(format!("unknown case '{o}'")),
    }
}

impl Experiment {
    /// File values first, flags override.
    pub fn resolve(a: &CommonArgs) -> Result<Self, String> {
        let file = match &a.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                parse_kv(&text)?
            }
            None => HashMap::new(),
        };
        let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
        let potential = pick(&a.potential, "potential").map(|s| parse_reals(&s)).transpose()?;
        let nu = match a.nu {
            Some(v) => Some(v),
            None => file.get("nu").map(|s| s.parse::<f64>().map_err(|e| format!("bad nu: {e}"))).transpose()?,
        };
        let n_list = pick(&a.n, "n")
            .or_else(|| file.get("n-list").cloned())
            .map(|s| parse_sizes(&s))
            .transpose()?;
        let points = pick(&a.points, "points").map(|s| parse_points(&s)).transpose()?;
        let case = pick(&a.case, "case").map(|s| parse_case(&s)).transpose()?;
        let out = a.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        let tol = match a.tol {
            Some(v) => Some(v),
            None => file.get("tol").map(|s| s.parse::<f64>().map_err(|e| format!("bad tol: {e}"))).transpose()?,
        };
        let seed = match a.seed {
            Some(v) => v,
            None => file.get("seed").map(|s| s.parse::<u64>().map_err(|e| format!("bad seed: {e}"))).transpose()?.unwrap_or(1),
        };
        if let Some(ns) = &n_list {
            if ns.is_empty() {
                return Err("the n list is empty".into());
            }
            if ns.windows(2).any(|w| w[1] <= w[0]) {
                return Err("the n list must be ascending".into());
            }
            if ns.iter().any(|&n| n == 0) {
                return Err("n must be positive".into());
            }
        }
        Ok(Experiment { potential, nu, n_list, points, case, out, tol, seed })
    }
}

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rmt_edge::correlators::{scaled_hard_lhs, scaled_soft_lhs, EdgeProblem};
use rmt_edge::kontsevich::{thm_hard_rhs, thm_soft_rhs, z_kont};
use rmt_edge::parametrix::{airy_kernel, bessel_kernel, limit_rhs, Case, ParametrixKind};
use rmt_edge::C64;
use std::process::ExitCode;

use rmt_edge_cli::config::{CommonArgs, Experiment};
use rmt_edge_cli::output::{self, fmt_c, write_csv, Record};
use rmt_edge_cli::checks;

#[derive(Parser)]
#[command(name = "rmt-edge", version, about = "Edge limits of characteristic-polynomial averages")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the identity suite; one line per check
    Verify(CommonArgs),
    /// Scaled soft-edge averages against the Airy limit over an n sweep
    SoftConverge(CommonArgs),
    /// Scaled hard-edge averages against the Bessel limit over an n sweep
    HardConverge(CommonArgs),
    /// Evaluate a limiting kernel (2 points) or the case determinant (2S points)
    Kernel {
        #[arg(value_enum)]
        kind: KernelKind,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Kontsevich determinant, or the matrix Bessel form when --nu is given
    Kontsevich(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Airy,
    Bessel,
}

enum Fail {
    Usage(String),
    Check(String),
}

type Out = std::result::Result<bool, Fail>;

fn usage(s: impl Into<String>) -> Fail {
    Fail::Usage(s.into())
}

fn domain(e: rmt_edge::Error) -> Fail {
    Fail::Check(e.to_string())
}

fn points_or(ex: &Experiment, default: &[f64]) -> std::result::Result<Vec<C64>, Fail> {
    let p = ex.points.clone().unwrap_or_else(|| default.iter().map(|&x| C64::new(x, 0.0)).collect());
    if p.is_empty() || p.len() % 2 != 0 {
        return Err(usage(format!("need an even, nonzero number of points, got {}", p.len())));
    }
    if p.len() > 8 {
        return Err(usage("at most 8 points (S <= 4)"));
    }
    Ok(p)
}

fn case_name(c: Case) -> &'static str {
    match c {
        Case::I => "I",
        Case::II => "II",
        Case::III => "III",
    }
}

fn verify(a: &CommonArgs) -> Out {
    let ex = Experiment::resolve(a).map_err(usage)?;
    let ns = ex.n_list.clone().unwrap_or_else(|| checks::DEFAULT_N.to_vec());
    if let Some(&n) = ns.iter().find(|&&n| n > checks::MAX_VERIFY_N) {
        return Err(usage(format!("verify uses brute-force integrals; n = {n} exceeds {}", checks::MAX_VERIFY_N)));
    }
    let results = checks::run_all(&ns, ex.seed, ex.tol);
    let mut failed = 0;
    for ch in &results {
        let tag = if ch.pass() { "PASS" } else { "FAIL" };
        match &ch.error {
            Some(e) => println!("[{tag}] {}: error: {e}", ch.name),
            None => println!("[{tag}] {}: residual {:.3e} (tol {:.1e})", ch.name, ch.residual, ch.tol),
        }
        failed += usize::from(!ch.pass());
    }
    println!("verify: {} of {} checks pass", results.len() - failed, results.len());
    Ok(failed == 0)
}

fn sweep(ex: &Experiment, case: Case, s: usize, rhs: C64, lhs: impl Fn(usize) -> rmt_edge::Result<C64> + Sync) -> Out {
    let ns = ex.n_list.clone().unwrap_or_else(|| vec![20, 40, 80]);
    let rows: Vec<(Record, Option<String>)> = ns
        .par_iter()
        .map(|&n| match lhs(n) {
            Ok(l) => (Record::new(case_name(case), n, s, l, rhs), None),
            Err(e) => (Record::failed(case_name(case), n, s), Some(e.to_string())),
        })
        .collect();
    let mut ok = true;
    for (r, e) in &rows {
        if let Some(e) = e {
            eprintln!("n = {}: {e}", r.n);
            ok = false;
        }
    }
    let recs: Vec<Record> = rows.into_iter().map(|(r, _)| r).collect();
    match &ex.out {
        Some(p) => write_csv(p, &recs).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => {
            println!("{}", output::HEADER.join(","));
            for r in &recs {
                println!("{}", r.fields().join(","));
            }
        }
    }
    let errs: Vec<f64> = recs.iter().map(|r| r.rel_err).collect();
    let monotone = ok && errs.windows(2).all(|w| w[1] < w[0]);
    let trend = if monotone { "decreasing" } else { "not monotone" };
    let last = errs.last().copied().unwrap_or(f64::NAN);
    println!("trend: rel_err {trend} over n = {ns:?}; last rel_err {}", output::fmt_num(last));
    Ok(ok && monotone)
}

fn soft_converge(a: &CommonArgs) -> Out {
    let ex = Experiment::resolve(a).map_err(usage)?;
    let v = ex.potential.clone().unwrap_or_else(|| vec![0.0, 0.0, 0.5]);
    if let Some(c) = ex.case {
        if c != Case::I {
            return Err(usage("soft-converge compares the case I average"));
        }
    }
    let y = points_or(&ex, &[0.9, 1.1])?;
    EdgeProblem::soft(v.clone(), 1).map_err(|e| usage(e.to_string()))?;
    let rhs = thm_soft_rhs(&y).map_err(domain)?;
    sweep(&ex, Case::I, y.len() / 2, rhs, |n| scaled_soft_lhs(&EdgeProblem::soft(v.clone(), n)?, &y))
}

fn hard_converge(a: &CommonArgs) -> Out {
    let ex = Experiment::resolve(a).map_err(usage)?;
    let v = ex.potential.clone().unwrap_or_else(|| vec![0.0, 1.0]);
    let nu = ex.nu.unwrap_or(0.0);
    let case = ex.case.unwrap_or(Case::I);
    if case == Case::II {
        return Err(usage("hard-converge supports cases I and III"));
    }
    let y = points_or(&ex, &[1.0, 2.0])?;
    EdgeProblem::hard(v.clone(), 1, nu).map_err(|e| usage(e.to_string()))?;
    let rhs = thm_hard_rhs(case, nu, &y).map_err(domain)?;
    sweep(&ex, case, y.len() / 2, rhs, |n| scaled_hard_lhs(case, &EdgeProblem::hard(v.clone(), n, nu)?, &y))
}

fn kernel(kind: KernelKind, a: &CommonArgs) -> Out {
    let ex = Experiment::resolve(a).map_err(usage)?;
    let p = points_or(&ex, &[0.0, 0.0])?;
    let nu = ex.nu.unwrap_or(0.0);
    let v = if p.len() == 2 && ex.case.is_none() {
        match kind {
            KernelKind::Airy => airy_kernel(p[0], p[1]),
            KernelKind::Bessel => bessel_kernel(nu, p[0], p[1]),
        }
    } else {
        let s = p.len() / 2;
        let pk = match kind {
            KernelKind::Airy => ParametrixKind::Airy,
            KernelKind::Bessel => ParametrixKind::Bessel(nu),
        };
        limit_rhs(ex.case.unwrap_or(Case::I), pk, &p[..s], &p[s..], None)
    }
    .map_err(domain)?;
    println!("{}", fmt_c(v));
    Ok(true)
}

fn kontsevich(a: &CommonArgs) -> Out {
    let ex = Experiment::resolve(a).map_err(usage)?;
    let y = points_or(&ex, &[1.0, 1.5])?;
    let v = match ex.nu {
        None => z_kont(&y),
        Some(nu) => {
            let case = ex.case.unwrap_or(Case::I);
            if case == Case::II {
                return Err(usage("the matrix Bessel forms exist for cases I and III"));
            }
            thm_hard_rhs(case, nu, &y)
        }
    }
    .map_err(domain)?;
    println!("{}", fmt_c(v));
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::SoftConverge(a) => soft_converge(a),
        Cmd::HardConverge(a) => hard_converge(a),
        Cmd::Kernel { kind, common } => kernel(*kind, common),
        Cmd::Kontsevich(a) => kontsevich(a),
    };
    match r {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Check(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(e)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
    }
}

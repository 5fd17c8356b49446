//! The acceptance checks, one function per criterion, shared by the test
//! suite and the command-line `verify-all`.

use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{verify_relations, GramConventions};
use crate::amplitudes::{
    solve_amplitudes, transcendental_checks, verify_amplitudes, verify_dilute_sum_rule, verify_fusion,
    verify_sum_rules, verify_zero_b_coefficients,
};
use crate::error::Result;
use crate::gram::{
    build_gram, conjecture_cases, det2b_hyperbolic_checks, det_exact, matches_up_to_reordering,
    verify_all_conjectures, SinhForm, Status, VerifyOptions,
};
use crate::oracle::verify_e_coefficients;
use crate::poly::{Monomial, Poly, Var};
use crate::report::Report;
use crate::series::{catalan_closed, central_binomial_closed, motzkin_closed, series_e, series_f, series_f_dilute};
use crate::states::{
    closed_form_dimension, enumerate_all, enumerate_reduced, sectors, Blob, BoundaryMode, Kind, SectorLabel,
};
use crate::transfer::{partition_function, verify_master_identity, verify_partition_oracle};

pub const CRITERIA: [&str; 10] = [
    "algebra relations",
    "dimension formulas",
    "series oracles",
    "E-coefficient brute force",
    "amplitudes",
    "sum rules",
    "partition-function master identity",
    "fusion and reductions",
    "Gram determinants",
    "transcendental checks",
];

/// Bounds and seeds; the defaults are the acceptance bounds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub relations_n: usize,
    pub dims_0b_n: usize,
    pub dims_n: usize,
    pub series_order: usize,
    pub e_j: usize,
    pub amplitudes_n: usize,
    pub zero_b_coeff_j: usize,
    pub sum_rule_n: usize,
    pub dilute_n: usize,
    pub fusion_l: i64,
    pub gram_n: usize,
    pub gram_2b_n: usize,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            relations_n: 10,
            dims_0b_n: 14,
            dims_n: 12,
            series_order: 20,
            e_j: 6,
            amplitudes_n: 12,
            zero_b_coeff_j: 7,
            sum_rule_n: 12,
            dilute_n: 10,
            fusion_l: 12,
            gram_n: 8,
            gram_2b_n: 6,
            points: 100,
            seed: 2008,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub number: usize,
    pub name: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub failures: usize,
    pub elapsed: f64,
    pub report: Report,
}

fn sizes(max: usize, kind: Kind) -> Vec<usize> {
    (1..=max).filter(|n| kind == Kind::ZeroB || n % 2 == 0).collect()
}

fn merge(parts: Vec<Result<Report>>) -> Result<Report> {
    let mut rep = Report::new();
    for p in parts {
        rep.extend(p?);
    }
    Ok(rep)
}

pub fn relations(cfg: &SuiteConfig) -> Result<Report> {
    let jobs: Vec<(BoundaryMode, usize)> = BoundaryMode::all_variants()
        .into_iter()
        .flat_map(|m| sizes(cfg.relations_n, m.kind).into_iter().map(move |n| (m, n)))
        .collect();
    merge(jobs.par_iter().map(|&(m, n)| verify_relations(n, m)).collect())
}

pub fn dimensions(cfg: &SuiteConfig) -> Result<Report> {
    let mut jobs = Vec::new();
    for m in BoundaryMode::all_variants() {
        let max = if m.kind == Kind::ZeroB { cfg.dims_0b_n } else { cfg.dims_n };
        for n in sizes(max, m.kind) {
            jobs.push((m, n));
        }
    }
    let mut rep = merge(
        jobs.par_iter()
            .map(|&(m, n)| -> Result<Report> {
                let mut r = Report::new();
                for s in sectors(n, m, true) {
                    let got = enumerate_reduced(n, m, s)?.len() as u128;
                    r.expect_eq(format!("{} N={} {} dimension", m, n, s), &got, &closed_form_dimension(n, m, s)?);
                }
                Ok(r)
            })
            .collect(),
    )?;
    let want = [1u128, 7, 35, 162, 723, 3158];
    let mode = BoundaryMode::two(false, false, false);
    for (i, w) in want.iter().enumerate() {
        let n = 2 * (i + 1);
        if n > cfg.dims_n {
            break;
        }
        let total: u128 = enumerate_all(n, mode)?.iter().map(|(_, v)| v.len() as u128).sum();
        rep.expect_eq(format!("{} N={} total", mode, n), &total, w);
    }
    Ok(rep)
}

pub fn series(cfg: &SuiteConfig) -> Result<Report> {
    let mut rep = Report::new();
    let o = cfg.series_order;
    let show = |s: &crate::series::Series| format!("{:?}", s.coeffs());
    rep.expect_eq("f iteration vs Catalan", &show(&series_f(o)), &show(&catalan_closed(o)));
    rep.expect_eq("e iteration vs central binomial", &show(&series_e(o)), &show(&central_binomial_closed(o)));
    rep.expect_eq("dilute f iteration vs Motzkin", &show(&series_f_dilute(o)), &show(&motzkin_closed(o)));
    let prefix = |s: crate::series::Series, k: usize| s.coeffs()[..k].to_vec();
    let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    rep.push("f prefix", prefix(series_f(o), 6) == ints(&[1, 1, 2, 5, 14, 42]), None);
    rep.push("e prefix", prefix(series_e(o), 5) == ints(&[1, 2, 6, 20, 70]), None);
    rep.push("dilute f prefix", prefix(series_f_dilute(o), 7) == ints(&[1, 1, 2, 4, 9, 21, 51]), None);
    Ok(rep)
}

pub fn e_brute_force(cfg: &SuiteConfig) -> Result<Report> {
    verify_e_coefficients(cfg.e_j)
}

pub fn amplitudes(cfg: &SuiteConfig) -> Result<Report> {
    let mut rep = Report::new();
    for kind in [Kind::ZeroB, Kind::OneB, Kind::TwoB] {
        for nb in [false, true] {
            rep.extend(verify_amplitudes(kind, nb, cfg.amplitudes_n)?);
        }
    }
    rep.extend(verify_zero_b_coefficients(cfg.zero_b_coeff_j)?);
    let bb2 = SectorLabel::two(2, Blob::B, Blob::B);
    for (nb, want) in [(false, "ell_l*ell_r"), (true, "ell_l*ell_r - 1")] {
        let t = solve_amplitudes(Kind::TwoB, nb, 4)?;
        let got = t.amplitude(&bb2).cloned().unwrap_or_else(Poly::zero);
        rep.expect_eq(format!("D bb L=2 nb={}", nb as u8), &got, &Poly::parse(want)?);
    }
    Ok(rep)
}

pub fn sum_rules(cfg: &SuiteConfig) -> Result<Report> {
    let mut jobs = Vec::new();
    for m in BoundaryMode::all_variants() {
        for n in sizes(cfg.sum_rule_n, m.kind) {
            jobs.push((m, n));
        }
    }
    let mut rep = merge(jobs.par_iter().map(|&(m, n)| verify_sum_rules(m, n)).collect())?;
    for n in 1..=cfg.dilute_n {
        rep.extend(verify_dilute_sum_rule(n));
    }
    Ok(rep)
}

pub fn partition(_cfg: &SuiteConfig) -> Result<Report> {
    let sizes = [(2, 1), (2, 2), (2, 3), (4, 1), (4, 2), (4, 3), (6, 1), (6, 2)];
    let jobs: Vec<(BoundaryMode, usize, usize)> = BoundaryMode::all_variants()
        .into_iter()
        .flat_map(|m| sizes.iter().map(move |&(n, k)| (m, n, k)))
        .collect();
    let mut rep = merge(
        jobs.par_iter()
            .map(|&(m, n, k)| -> Result<Report> {
                let mut r = verify_partition_oracle(n, k, m)?;
                r.extend(verify_master_identity(n, k, m)?);
                Ok(r)
            })
            .collect(),
    )?;
    // a configuration with one contractible and two winding loops
    let z = partition_function(4, 2, BoundaryMode::zero())?;
    let m = Monomial::var(Var::N).mul(&Monomial::var(Var::Ell)).mul(&Monomial::var(Var::Ell));
    rep.push("0b N=4 M=2 has n*ell^2", z.coeff(&m) != BigInt::from(0), None);
    Ok(rep)
}

pub fn fusion(cfg: &SuiteConfig) -> Result<Report> {
    Ok(verify_fusion(cfg.fusion_l))
}

fn matrix(rows: &[&[&str]]) -> Result<Vec<Vec<Poly>>> {
    rows.iter().map(|r| r.iter().map(|s| Poly::parse(s)).collect()).collect()
}

/// The four small Gram matrices given explicitly, with their determinants.
pub fn explicit_grams() -> Result<Report> {
    let mut rep = Report::new();
    let p = |s: &str| Poly::parse(s);
    let d1 = p("n")?;
    let d2 = p("n^2 - 1")?;
    let d3 = p("n^3 - 2*n")?;
    let cases = [
        (
            "meander N=6 L=0",
            6,
            Kind::ZeroB,
            SectorLabel::zero(0),
            GramConventions::default(),
            matrix(&[
                &["n^3", "n^2", "n^2", "n", "n^2"],
                &["n^2", "n^3", "n", "n^2", "n"],
                &["n^2", "n", "n^3", "n^2", "n"],
                &["n", "n^2", "n^2", "n^3", "n^2"],
                &["n^2", "n", "n", "n^2", "n^3"],
            ])?,
            d1.pow(4) * d2.pow(4) * d3.clone(),
        ),
        (
            "semimeander N=4 L=2",
            4,
            Kind::ZeroB,
            SectorLabel::zero(2),
            GramConventions::semimeander(),
            matrix(&[&["n^3", "n^2", "n"], &["n^2", "n^3", "n^2"], &["n", "n^2", "n^3"]])?,
            d1.pow(5) * d2.pow(2),
        ),
        (
            "line-conserving N=4 L=2",
            4,
            Kind::ZeroB,
            SectorLabel::zero(2),
            GramConventions::default(),
            matrix(&[&["n", "1", "0"], &["1", "n", "1"], &["0", "1", "n"]])?,
            d3,
        ),
        (
            "one-boundary blobbed N=4 L=2",
            4,
            Kind::OneB,
            SectorLabel::one(2, Blob::B),
            GramConventions::default(),
            matrix(&[
                &["n", "n_l", "1", "0"],
                &["n_l", "n_l", "1", "0"],
                &["1", "1", "n", "1"],
                &["0", "0", "1", "n"],
            ])?,
            p("n - n_l")? * p("n_l*n^2 - n_l - n")?,
        ),
    ];
    for (name, n, kind, sector, conv, want, det) in cases {
        let g = build_gram(n, kind, sector, conv)?;
        rep.push(format!("{} matrix", name), matches_up_to_reordering(&g, &want), None);
        rep.expect_eq(format!("{} determinant", name), &det_exact(&g)?, &det);
    }
    Ok(rep)
}

pub fn gram(cfg: &SuiteConfig) -> Result<Report> {
    let mut rep = explicit_grams()?;
    let cases = conjecture_cases(cfg.gram_n, cfg.gram_2b_n);
    for r in verify_all_conjectures(&cases, VerifyOptions::default())? {
        let name = format!("{} N={} L={} ({:?})", r.identifier, r.n, r.l, r.method);
        let detail = (r.status == Status::Fail).then(|| r.checks.summary());
        rep.push(name, r.status != Status::Fail, detail);
    }
    Ok(rep)
}

pub fn transcendental(cfg: &SuiteConfig) -> Result<Report> {
    let mut rep = transcendental_checks(cfg.points, cfg.seed, 12, cfg.tol)?;
    rep.extend(det2b_hyperbolic_checks(cfg.points, cfg.seed + 1, cfg.gram_2b_n, cfg.tol, SinhForm::Printed)?);
    Ok(rep)
}

/// Run criterion `number` (1-based).
pub fn run_criterion(number: usize, cfg: &SuiteConfig) -> Result<CriterionResult> {
    let start = Instant::now();
    let report = match number {
        1 => relations(cfg)?,
        2 => dimensions(cfg)?,
        3 => series(cfg)?,
        4 => e_brute_force(cfg)?,
        5 => amplitudes(cfg)?,
        6 => sum_rules(cfg)?,
        7 => partition(cfg)?,
        8 => fusion(cfg)?,
        9 => gram(cfg)?,
        10 => transcendental(cfg)?,
        _ => return Err(crate::Error::Unsupported(format!("no criterion {}", number))),
    };
    let failures = report.failures().count();
    Ok(CriterionResult {
        number,
        name: CRITERIA[number - 1],
        pass: failures == 0 && !report.is_empty(),
        checks: report.len(),
        failures,
        elapsed: start.elapsed().as_secs_f64(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_matrices() {
        let r = explicit_grams().unwrap();
        assert!(r.all_pass(), "{}", r.summary());
    }

    #[test]
    fn small_config_runs() {
        let cfg = SuiteConfig { relations_n: 4, dims_0b_n: 6, dims_n: 4, e_j: 3, amplitudes_n: 6, sum_rule_n: 6, dilute_n: 4, ..Default::default() };
        for k in [1, 2, 3, 4, 5, 6, 8] {
            let r = run_criterion(k, &cfg).unwrap();
            assert!(r.pass, "{}: {}", r.name, r.report.summary());
        }
    }
}

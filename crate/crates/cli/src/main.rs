//! `tlblob`: batch front end for enumeration, amplitudes, partition
//! functions, Gram determinants and the acceptance suite.

mod output;

use std::io::Write;
use std::ops::RangeInclusive;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{Format, Table};
use tlblob::gram::{verify_conjecture, Identifier, Status, VerifyOptions};
use tlblob::states::{closed_form_dimension, enumerate_reduced, sectors, BoundaryMode, Kind};
use tlblob::suite::{run_criterion, SuiteConfig, CRITERIA};
use tlblob::transfer::{
    build_transfer, character, constrained_partition, partition_function, verify_master_identity,
    verify_partition_oracle,
};

pub const SCHEMA: &str = "tlblob/1";

#[derive(Parser, Debug)]
#[command(name = "tlblob", version, about = "Boundary Temperley-Lieb loop models: exact combinatorics and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, env = "TLBLOB_JOBS", default_value_t = 0, global = true)]
    jobs: usize,
    /// Run past the desk-scale bounds
    #[arg(long, global = true)]
    force: bool,
    /// Include wall-clock timings (makes output non-reproducible)
    #[arg(long, global = true)]
    timings: bool,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 2008, global = true)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct ModeArgs {
    /// Boundary type
    #[arg(long, value_enum, default_value_t = ModeArg::Zero)]
    mode: ModeArg,
    /// λ on the left boundary: 1 for I + blob, 0 for the blob alone
    #[arg(long = "lambda-l", default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    lambda_l: u8,
    /// λ on the right boundary
    #[arg(long = "lambda-r", default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    lambda_r: u8,
    /// Give loops touching both boundaries the weight n_b (1) or forbid doubly blobbed links (0)
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    nb: u8,
}

impl ModeArgs {
    fn mode(&self) -> BoundaryMode {
        match self.mode {
            ModeArg::Zero => BoundaryMode::zero(),
            ModeArg::One => BoundaryMode::one(self.lambda_l == 1),
            ModeArg::Two => BoundaryMode::two(self.lambda_l == 1, self.lambda_r == 1, self.nb == 1),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    #[value(name = "0b")]
    Zero,
    #[value(name = "1b")]
    One,
    #[value(name = "2b")]
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Convention {
    Meander,
    Semimeander,
    Line,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List reduced states and sector dimensions
    Enumerate {
        #[command(flatten)]
        mode: ModeArgs,
        /// System size, `4` or an inclusive range `2..8`
        #[arg(long = "N", default_value = "4")]
        n: String,
        /// Keep only this string count
        #[arg(long = "L")]
        l: Option<usize>,
        /// Keep only this sector, e.g. `2:bb` or `0`
        #[arg(long)]
        sector: Option<String>,
    },
    /// Solve for the amplitudes and the coefficients behind them
    Amplitudes {
        #[command(flatten)]
        mode: ModeArgs,
        /// Largest system size
        #[arg(long = "N", default_value_t = 8)]
        n: usize,
    },
    /// Partition functions on the N x M annulus with the sector decomposition
    Partition {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long = "N", default_value = "4")]
        n: String,
        /// Number of time steps, single value or range
        #[arg(long = "M", default_value = "2")]
        m: String,
    },
    /// Gram determinants against the conjectured product formulas
    Gram {
        /// Restrict to one boundary type
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Restrict to one inner-product convention
        #[arg(long, value_enum)]
        convention: Option<Convention>,
        /// Determinant identifier (repeatable), e.g. `M-det`, `2B-strings-ub`
        #[arg(long = "id")]
        ids: Vec<String>,
        #[arg(long = "N", default_value = "1..6")]
        n: String,
        #[arg(long = "L")]
        l: Option<usize>,
    },
    /// Run the acceptance suite
    VerifyAll {
        /// Run only this criterion (1-10)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Option<u8>,
        /// Series truncation order
        #[arg(long, default_value_t = 20)]
        truncation: usize,
    },
}

/// Outcome of one command: JSON results, a flat table, and whether every check passed.
struct Outcome {
    results: Value,
    table: Table,
    pass: bool,
}

fn parse_range(s: &str) -> anyhow::Result<RangeInclusive<usize>> {
    let r = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            a.trim().parse()?..=b.trim().parse()?
        }
        None => {
            let v = s.trim().parse()?;
            v..=v
        }
    };
    if r.is_empty() {
        bail!("empty range {:?}", s);
    }
    Ok(r)
}

fn sizes(s: &str, mode: BoundaryMode) -> anyhow::Result<Vec<usize>> {
    let ns: Vec<usize> = parse_range(s)
        .with_context(|| format!("bad --N {:?}", s))?
        .filter(|&n| n > 0 && (mode.kind == Kind::ZeroB || n % 2 == 0))
        .collect();
    if ns.is_empty() {
        bail!("no admissible N in {:?} for {}", s, mode);
    }
    Ok(ns)
}

fn parse_sector(s: &str) -> anyhow::Result<(usize, String)> {
    let s = s.trim_start_matches("L=");
    let (l, tag) = s.split_once(':').unwrap_or((s, ""));
    if !tag.chars().all(|c| c == 'u' || c == 'b') || tag.len() > 2 {
        bail!("bad sector {:?}", s);
    }
    Ok((l.parse().with_context(|| format!("bad sector {:?}", s))?, tag.to_string()))
}

/// Refuse sizes past `bound` unless forced; the estimate goes to stderr.
fn guard(force: bool, what: &str, n: usize, bound: usize, estimate: impl FnOnce() -> String) -> anyhow::Result<()> {
    if n > bound {
        let est = estimate();
        if !force {
            bail!("{} with N={} exceeds the desk-scale bound N<={} ({}); rerun with --force", what, n, bound, est);
        }
        eprintln!("warning: {} with N={} beyond N<={} ({})", what, n, bound, est);
    }
    Ok(())
}

fn basis_size(n: usize, mode: BoundaryMode) -> u128 {
    sectors(n, mode, false).iter().filter_map(|&s| closed_form_dimension(n, mode, s).ok()).sum()
}

fn enumerate(c: &Common, m: &ModeArgs, n: &str, l: Option<usize>, sector: Option<&str>) -> anyhow::Result<Outcome> {
    let mode = m.mode();
    let filter = sector.map(parse_sector).transpose()?;
    let mut rows = Vec::new();
    let mut table = Table::new(&["N", "mode", "L", "sector", "dim", "closed_form", "states"]);
    let mut pass = true;
    for n in sizes(n, mode)? {
        let bound = if mode.kind == Kind::ZeroB { 16 } else { 14 };
        guard(c.force, "enumerate", n, bound, || format!("about {} states", basis_size(n, mode)))?;
        for s in sectors(n, mode, false) {
            if l.is_some_and(|l| l != s.strings) || filter.as_ref().is_some_and(|(fl, ft)| (*fl, ft.as_str()) != (s.strings, s.tag().as_str())) {
                continue;
            }
            let states = enumerate_reduced(n, mode, s)?;
            let closed = closed_form_dimension(n, mode, s)?;
            pass &= states.len() as u128 == closed;
            let texts: Vec<String> = states.iter().map(|st| st.to_string()).collect();
            table.push(vec![
                n.to_string(),
                mode.to_string(),
                s.strings.to_string(),
                s.tag(),
                states.len().to_string(),
                closed.to_string(),
                texts.join(" "),
            ]);
            rows.push(json!({
                "N": n, "mode": mode.to_string(), "L": s.strings, "sector": s.tag(),
                "dim": states.len(), "closed_form": closed.to_string(), "states": texts,
            }));
        }
    }
    Ok(Outcome { results: Value::Array(rows), table, pass })
}

fn amplitudes(c: &Common, m: &ModeArgs, n: usize) -> anyhow::Result<Outcome> {
    let mode = m.mode();
    guard(c.force, "amplitudes", n, 40, || format!("{} sector labels", n * n))?;
    let nb = mode.nb;
    let t = tlblob::amplitudes::solve_amplitudes(mode.kind, nb, n)?;
    let mode_name = match mode.kind {
        Kind::ZeroB => "0b",
        Kind::OneB => "1b",
        Kind::TwoB => "2b",
    };
    let mut table = Table::new(&["table", "mode", "nb", "L", "sector", "L_gamma", "sector_gamma", "value"]);
    let mut amps = Vec::new();
    for (s, p) in &t.amplitudes {
        table.push(vec!["D".into(), mode_name.into(), (nb as u8).to_string(), s.strings.to_string(), s.tag(), String::new(), String::new(), p.to_string()]);
        amps.push(json!({"L": s.strings, "sector": s.tag(), "D": p}));
    }
    let mut coeffs = Vec::new();
    for ((a, g), v) in &t.coeffs {
        table.push(vec!["d".into(), mode_name.into(), (nb as u8).to_string(), a.strings.to_string(), a.tag(), g.strings.to_string(), g.tag(), v.to_string()]);
        coeffs.push(json!({"L": a.strings, "sector": a.tag(), "L_gamma": g.strings, "sector_gamma": g.tag(), "d": v.to_string()}));
    }
    let results = json!({"mode": mode_name, "nb": nb, "N": n, "amplitudes": amps, "coefficients": coeffs});
    Ok(Outcome { results, table, pass: true })
}

fn partition(c: &Common, m: &ModeArgs, n: &str, ms: &str) -> anyhow::Result<Outcome> {
    let mode = m.mode();
    let steps: Vec<usize> = parse_range(ms).with_context(|| format!("bad --M {:?}", ms))?.filter(|&m| m > 0).collect();
    if steps.is_empty() {
        bail!("M must be positive");
    }
    let mut table = Table::new(&["N", "M", "mode", "L", "sector", "dim", "K", "Z"]);
    let mut rows = Vec::new();
    let mut pass = true;
    for n in sizes(n, mode)? {
        guard(c.force, "partition", n, 8, || format!("transfer matrix of size {}", basis_size(n, mode)))?;
        let tm = build_transfer(n, mode)?;
        for &m in &steps {
            if m > 4 && !c.force {
                bail!("partition with M={} exceeds the desk-scale bound M<=4; rerun with --force", m);
            }
            let z = partition_function(n, m, mode)?;
            let mut checks = verify_partition_oracle(n, m, mode)?;
            checks.extend(verify_master_identity(n, m, mode)?);
            pass &= checks.all_pass();
            let mut blocks = Vec::new();
            for s in tm.sector_labels() {
                let b = tm.sector_block(s)?;
                let k = character(&b, m)?;
                let zs = constrained_partition(&z, mode.kind, s);
                table.push(vec![n.to_string(), m.to_string(), mode.to_string(), s.strings.to_string(), s.tag(), b.states.len().to_string(), k.to_string(), zs.to_string()]);
                blocks.push(json!({"L": s.strings, "sector": s.tag(), "dim": b.states.len(), "K": k, "Z": zs}));
            }
            table.push(vec![n.to_string(), m.to_string(), mode.to_string(), String::new(), "all".into(), tm.dim().to_string(), String::new(), z.to_string()]);
            let failures: Vec<&tlblob::report::Check> = checks.failures().collect();
            rows.push(json!({
                "N": n, "M": m, "mode": mode.to_string(), "dim": tm.dim(), "Z": z,
                "sectors": blocks, "checks": checks.len(), "pass": checks.all_pass(), "failures": failures,
            }));
        }
    }
    Ok(Outcome { results: Value::Array(rows), table, pass })
}

fn convention_of(id: Identifier) -> Convention {
    match id {
        Identifier::SmDet => Convention::Semimeander,
        Identifier::LineDet0B => Convention::Line,
        _ => Convention::Meander,
    }
}

fn gram(
    c: &Common,
    mode: Option<ModeArg>,
    conv: Option<Convention>,
    ids: &[String],
    n: &str,
    l: Option<usize>,
) -> anyhow::Result<Outcome> {
    let ns = parse_range(n).with_context(|| format!("bad --N {:?}", n))?;
    let chosen: Vec<Identifier> = if ids.is_empty() {
        Identifier::all()
    } else {
        ids.iter().map(|s| s.parse::<Identifier>().map_err(|e| anyhow!(e))).collect::<anyhow::Result<_>>()?
    };
    let kind = mode.map(|m| match m {
        ModeArg::Zero => Kind::ZeroB,
        ModeArg::One => Kind::OneB,
        ModeArg::Two => Kind::TwoB,
    });
    let mut cases = Vec::new();
    for id in chosen {
        if kind.is_some_and(|k| k != id.kind()) || conv.is_some_and(|cv| cv != convention_of(id)) {
            continue;
        }
        let bound = match id.kind() {
            Kind::ZeroB => 10,
            Kind::OneB => 8,
            Kind::TwoB => 6,
        };
        for n in ns.clone() {
            for ll in (0..=n).filter(|&ll| l.map_or(true, |x| x == ll) && id.applies(n, ll)) {
                guard(c.force, &format!("gram {}", id), n, bound, || {
                    let m = BoundaryMode { kind: id.kind(), lambda_l: true, lambda_r: true, nb: false };
                    let d = closed_form_dimension(n, m, id.sector(ll)).unwrap_or(0);
                    format!("Gram matrix of size {}", d)
                })?;
                cases.push((id, n, ll));
            }
        }
    }
    if cases.is_empty() {
        bail!("no determinant cases match the filters");
    }
    let opts = VerifyOptions { seed: c.seed, ..VerifyOptions::default() };
    use rayon::prelude::*;
    let reports: Vec<_> = cases
        .par_iter()
        .map(|&(id, n, l)| verify_conjecture(id, n, l, opts))
        .collect::<tlblob::Result<_>>()?;
    let mut cols = vec!["identifier", "N", "L", "sector", "dim", "method", "status", "degree", "conjectured", "det"];
    if c.timings {
        cols.push("elapsed");
    }
    let mut table = Table::new(&cols);
    let mut rows = Vec::new();
    let mut pass = true;
    for r in reports {
        pass &= r.status != Status::Fail;
        let method = serde_json::to_value(r.method)?;
        let status = serde_json::to_value(r.status)?;
        let mut row = vec![
            r.identifier.clone(),
            r.n.to_string(),
            r.l.to_string(),
            r.sector.clone(),
            r.dim.to_string(),
            method.as_str().unwrap_or("").to_string(),
            status.as_str().unwrap_or("").to_string(),
            r.degree.map(|d| d.to_string()).unwrap_or_default(),
            r.conjectured.clone(),
            r.det.clone().unwrap_or_default(),
        ];
        let mut v = json!({
            "identifier": r.identifier, "N": r.n, "L": r.l, "sector": r.sector, "dim": r.dim,
            "method": method, "status": status, "degree": r.degree, "conjectured": r.conjectured,
            "det": r.det, "failures": r.checks.failures().collect::<Vec<_>>(),
        });
        if c.timings {
            row.push(format!("{:.3}", r.elapsed));
            v["elapsed"] = json!(r.elapsed);
        }
        table.push(row);
        rows.push(v);
    }
    Ok(Outcome { results: Value::Array(rows), table, pass })
}

fn verify_all(c: &Common, only: Option<u8>, truncation: usize) -> anyhow::Result<Outcome> {
    let cfg = SuiteConfig { series_order: truncation, seed: c.seed, ..SuiteConfig::default() };
    let which: Vec<usize> = match only {
        Some(k) => vec![k as usize],
        None => (1..=CRITERIA.len()).collect(),
    };
    let mut cols = vec!["criterion", "name", "status", "checks", "failures"];
    if c.timings {
        cols.push("elapsed");
    }
    let mut table = Table::new(&cols);
    let mut rows = Vec::new();
    let mut pass = true;
    for k in which {
        let r = run_criterion(k, &cfg)?;
        pass &= r.pass;
        let status = if r.pass { "PASS" } else { "FAIL" };
        let mut row = vec![k.to_string(), r.name.to_string(), status.to_string(), r.checks.to_string(), r.failures.to_string()];
        let mut v = json!({
            "criterion": k, "name": r.name, "status": status, "checks": r.checks,
            "failures": r.failures, "counterexamples": r.report.failures().collect::<Vec<_>>(),
        });
        if c.timings {
            row.push(format!("{:.3}", r.elapsed));
            v["elapsed"] = json!(r.elapsed);
        }
        table.push(row);
        rows.push(v);
    }
    let results = json!({"config": cfg, "criteria": rows});
    Ok(Outcome { results, table, pass })
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let c = &cli.common;
    if c.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(c.jobs).build_global()?;
    }
    let (name, out) = match &cli.command {
        Command::Enumerate { mode, n, l, sector } => ("enumerate", enumerate(c, mode, n, *l, sector.as_deref())?),
        Command::Amplitudes { mode, n } => ("amplitudes", amplitudes(c, mode, *n)?),
        Command::Partition { mode, n, m } => ("partition", partition(c, mode, n, m)?),
        Command::Gram { mode, convention, ids, n, l } => ("gram", gram(c, *mode, *convention, ids, n, *l)?),
        Command::VerifyAll { only, truncation } => ("verify-all", verify_all(c, *only, *truncation)?),
    };
    let text = match c.format {
        Format::Json => {
            let doc = json!({"schema": SCHEMA, "command": name, "pass": out.pass, "results": out.results});
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => out.table.to_csv()?,
        Format::Text => out.table.to_text(),
    };
    match &c.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(out.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert_eq!(parse_range("2..8").unwrap(), 2..=8);
        assert_eq!(parse_range("2..=8").unwrap(), 2..=8);
        assert!(parse_range("8..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn sector_filters() {
        assert_eq!(parse_sector("2:bb").unwrap(), (2, "bb".to_string()));
        assert_eq!(parse_sector("L=0").unwrap(), (0, String::new()));
        assert!(parse_sector("2:xb").is_err());
    }

    #[test]
    fn odd_sizes_dropped_with_boundaries() {
        assert_eq!(sizes("1..6", BoundaryMode::one(true)).unwrap(), vec![2, 4, 6]);
        assert_eq!(sizes("1..3", BoundaryMode::zero()).unwrap(), vec![1, 2, 3]);
    }
}

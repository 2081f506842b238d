//! Command-line front end: instance files, run modes and JSON reports.
//!
//! Instance format, one record per line, `#` starts a comment:
//!
//! ```text
//! n m k [complete]
//! u v cost        # m lines; cost is an integer, decimal, p/q or "inf"
//! ```
//!
//! With `complete` in the header every pair not listed is added as a
//! forbidden (`inf`) edge.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bisets::{NodeSet, DEFAULT_ENUMERATION_CAP};
use crate::covers::{
    brute_force_opt, growing_cover, solve_kcs, CoverError, CoverReport, SolverConfig, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::exact::to_exact_string;
use crate::functions::{classify, compute_k_f, BisetFunction};
use crate::generate::{random_feasible_instance, rng};
use crate::instance::{Cost, Instance, InstanceEdge};
use crate::lp::{build_biset_lp, Orientation};
use crate::verify::{certify_solution, Certification};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Nonnegative exact cost: integer, decimal, `p/q` or `inf`.
pub fn parse_cost(s: &str) -> Result<Cost, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Cost::Infinite);
    }
    let q = if s.contains('/') {
        BigRational::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?
    } else if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let numer = BigInt::from_str(&digits).map_err(|e| format!("bad decimal {s:?}: {e}"))?;
        BigRational::new(numer, BigInt::from(10).pow(frac.len() as u32))
    } else {
        BigRational::from_integer(BigInt::from_str(s).map_err(|e| format!("bad cost {s:?}: {e}"))?)
    };
    if q.is_negative() {
        return Err(format!("negative cost {s}"));
    }
    Ok(Cost::Finite(q))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m k`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let complete = match fields.get(3) {
        None => false,
        Some(&"complete") => true,
        Some(other) => return Err(parse_err(hline, format!("unknown header flag {other:?}"))),
    };
    if fields.len() < 3 || fields.len() > 4 {
        return Err(parse_err(hline, "header must be `n m k [complete]`"));
    }
    let num = |s: &str, what: &str| s.parse::<usize>().map_err(|_| parse_err(hline, format!("bad {what} {s:?}")));
    let (n, m, k) = (num(fields[0], "n")?, num(fields[1], "m")?, num(fields[2], "k")?);

    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut last = hline;
    for (line, text) in lines {
        last = line;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(line, "edge line must be `u v cost`"));
        }
        let node = |s: &str| s.parse::<usize>().map_err(|_| parse_err(line, format!("bad node id {s:?}")));
        let (u, v) = (node(parts[0])?, node(parts[1])?);
        if u >= n || v >= n {
            return Err(parse_err(line, format!("node id out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(line, format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(line, format!("duplicate edge {u}-{v}")));
        }
        let cost = parse_cost(parts[2]).map_err(|e| parse_err(line, e))?;
        edges.push(InstanceEdge { u, v, cost });
    }
    if edges.len() != m {
        return Err(parse_err(last, format!("header promises {m} edges, found {}", edges.len())));
    }
    if complete {
        for u in 0..n {
            for v in u + 1..n {
                if !seen.contains(&(u, v)) {
                    edges.push(InstanceEdge { u, v, cost: Cost::Infinite });
                }
            }
        }
    }
    Instance::new(n, k, edges).map_err(|e| parse_err(hline, e.to_string()))
}

/// Text form that [`parse_instance`] reads back to an equal instance.
pub fn print_instance(inst: &Instance) -> String {
    let mut out = format!("{} {} {}\n", inst.n(), inst.edges().len(), inst.k());
    for e in inst.edges() {
        let cost = match &e.cost {
            Cost::Finite(c) => to_exact_string(c),
            Cost::Infinite => "inf".to_string(),
        };
        out.push_str(&format!("{} {} {}\n", e.u, e.v, cost));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Solve the k-connected subgraph problem.
    Kcs,
    /// Classify a named biset function.
    Classify,
    /// Solve and compare against the brute-force optimum.
    Oracle,
    /// Run the growing cover on a named function.
    Grow,
    /// Re-check a saved report against its instance.
    Certify,
}

#[derive(Parser, Debug)]
#[command(name = "kcs", version, about = "Approximate minimum-cost k-connected spanning subgraphs")]
pub struct Args {
    /// Instance file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Connectivity target, overriding the instance header.
    #[arg(long)]
    pub k: Option<usize>,
    /// Initial area set, e.g. `0,3,5`.
    #[arg(long, value_delimiter = ',')]
    pub r1: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "kcs")]
    pub mode: Mode,
    /// Test every node pair when checking connectivity.
    #[arg(long)]
    pub strict: bool,
    /// Generate a random feasible instance instead of reading one.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Node count for generated instances.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Edge budget for generated instances.
    #[arg(long, default_value_t = 14)]
    pub max_edges: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Largest ground set that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub max_n: usize,
    /// Write the root LP in text form.
    #[arg(long)]
    pub lp_dump: Option<PathBuf>,
    /// Function for classify/grow: kcs, area, fan, boundary, inner-meet, zero.
    #[arg(long, default_value = "kcs")]
    pub function: String,
    /// Node set used by area, fan and inner-meet.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<usize>>,
    /// Saved report for certify mode.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the (possibly generated) instance to stderr.
    #[arg(long)]
    pub print_instance: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    AssertionFailure,
    Infeasible,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Error => 1,
            Status::AssertionFailure => 2,
            Status::Infeasible => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    #[serde(with = "crate::exact")]
    pub optimum: BigRational,
    pub optimal_edges: BTreeSet<usize>,
    #[serde(with = "crate::exact::option")]
    pub ratio_achieved: Option<BigRational>,
    pub within_ratio_bound: bool,
}

/// The JSON document written by every run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CoverReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<Certification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<serde_json::Value>,
    pub wall_time_ms: f64,
}

fn node_set(ids: &[usize], n: usize, what: &str) -> Result<NodeSet, String> {
    match ids.iter().find(|&&v| v >= n) {
        Some(v) => Err(format!("{what} node {v} out of range 0..{n}")),
        None => Ok(ids.iter().copied().collect()),
    }
}

fn named_function(args: &Args, inst: &Instance) -> Result<BisetFunction, String> {
    let ground = inst.ground();
    let r = node_set(args.r.as_deref().unwrap_or(&[]), inst.n(), "--r")?;
    let k = inst.k();
    Ok(match args.function.as_str() {
        "kcs" => BisetFunction::kcs(ground, k),
        "area" => BisetFunction::kcs(ground, k).area(r),
        "fan" => BisetFunction::fan(ground, k, r),
        "boundary" => BisetFunction::boundary_size(ground),
        "inner-meet" => BisetFunction::inner_meet(ground, r),
        "zero" => BisetFunction::zero(ground),
        other => return Err(format!("unknown function {other:?}")),
    })
}

fn load_instance(args: &Args) -> Result<Instance, String> {
    let inst = match (&args.input, args.seed) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(seed)) => {
            let k = args.k.unwrap_or(2);
            random_feasible_instance(&mut rng(seed), args.n, k, args.max_edges, 10, 10_000).ok_or_else(|| {
                format!("no {k}-connected graph on {} nodes with ≤ {} edges found", args.n, args.max_edges)
            })?
        }
        (None, None) => return Err("need --input or --seed".into()),
    };
    Ok(match args.k {
        Some(k) => inst.with_k(k),
        None => inst,
    })
}

fn status_of(err: &CoverError) -> Status {
    match err {
        CoverError::Assertion { .. } => Status::AssertionFailure,
        e if e.is_infeasible() => Status::Infeasible,
        _ => Status::Error,
    }
}

/// Execute one run and return the report (never fails; errors land in the report).
pub fn execute(args: &Args) -> RunReport {
    let start = Instant::now();
    let mut out = RunReport {
        mode: args.mode,
        n: 0,
        m: 0,
        k: 0,
        status: Status::Pass,
        error: None,
        report: None,
        certification: None,
        oracle: None,
        classification: None,
        wall_time_ms: 0.0,
    };
    if let Err((status, msg)) = execute_into(args, &mut out) {
        out.status = status;
        out.error = Some(msg);
    }
    out.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    out
}

fn execute_into(args: &Args, out: &mut RunReport) -> Result<(), (Status, String)> {
    let usage = |e: String| (Status::Error, e);
    let inst = load_instance(args).map_err(usage)?;
    (out.n, out.m, out.k) = (inst.n(), inst.edges().len(), inst.k());
    if args.print_instance {
        eprint!("{}", print_instance(&inst));
    }
    let cfg = SolverConfig {
        enumeration_cap: args.max_n,
        r1: args.r1.as_deref().map(|r| node_set(r, inst.n(), "--r1")).transpose().map_err(usage)?,
        strict_connectivity: args.strict,
    };
    let cover_err = |e: CoverError| (status_of(&e), e.to_string());

    if let Some(path) = &args.lp_dump {
        let f = named_function(args, &inst).map_err(usage)?;
        let lp = build_biset_lp(&inst.finite_edges(), &f, Orientation::Undirected, cfg.enumeration_cap)
            .map_err(|e| cover_err(e.into()))?;
        let file = fs::File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        lp.write_lp(std::io::BufWriter::new(file)).map_err(|e| usage(e.to_string()))?;
    }

    match args.mode {
        Mode::Kcs | Mode::Oracle => {
            let report = solve_kcs(&inst, &cfg).map_err(cover_err)?;
            let cert = certify_solution(&inst, inst.k(), &report.solution, &report);
            let passed = cert.passed;
            if args.mode == Mode::Oracle {
                let finite = inst.finite_edges();
                let f = BisetFunction::kcs(inst.ground(), inst.k());
                let opt =
                    brute_force_opt(&finite, &f, DEFAULT_BRUTE_FORCE_CAP, cfg.enumeration_cap).map_err(cover_err)?;
                let optimum: BigRational = opt.iter().map(|e| &e.cost).sum();
                let ratio = (!optimum.is_zero()).then(|| &report.cost / &optimum);
                out.oracle = Some(OracleSummary {
                    within_ratio_bound: report.cost <= &report.ratio_bound * &optimum,
                    optimum,
                    optimal_edges: opt.iter().map(|e| e.edge.id).collect(),
                    ratio_achieved: ratio,
                });
            }
            out.report = Some(report);
            out.certification = Some(cert);
            if !passed {
                return Err((Status::AssertionFailure, "certification failed".into()));
            }
        }
        Mode::Grow => {
            let f = named_function(args, &inst).map_err(usage)?;
            let kv = compute_k_f(&f, cfg.enumeration_cap).map_err(|e| cover_err(e.into()))?;
            let r1 = match cfg.r1 {
                Some(r) => r,
                None => crate::covers::select_r1(&inst, (2 * kv.k_f).saturating_sub(1)),
            };
            let ell = crate::covers::crossing_ell(kv.k_f, inst.n());
            let mut report = growing_cover(&inst.finite_edges(), &f, r1, ell.ell, &cfg).map_err(cover_err)?;
            report.no_guarantee |= !ell.threshold_met;
            out.report = Some(report);
        }
        Mode::Classify => {
            let f = named_function(args, &inst).map_err(usage)?;
            let report = classify(&f, cfg.enumeration_cap).map_err(|e| usage(e.to_string()))?;
            out.classification = Some(serde_json::to_value(report).expect("serializable"));
        }
        Mode::Certify => {
            let path = args.report.as_ref().ok_or_else(|| usage("certify mode needs --report".into()))?;
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let saved: RunReport =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let report = saved.report.ok_or_else(|| usage("saved run has no cover report".into()))?;
            let cert = certify_solution(&inst, inst.k(), &report.solution, &report);
            let passed = cert.passed;
            out.report = Some(report);
            out.certification = Some(cert);
            if !passed {
                return Err((Status::AssertionFailure, "certification failed".into()));
            }
        }
    }
    Ok(())
}

fn summary(r: &RunReport) -> String {
    let mut s = format!("status: {:?}", r.status);
    if let Some(rep) = &r.report {
        s += &format!(
            "\ncost: {}  tau: {}  ell: {}  ratio bound: {}  no-guarantee: {}  edges: {:?}",
            to_exact_string(&rep.cost),
            to_exact_string(&rep.tau),
            rep.ell,
            to_exact_string(&rep.ratio_bound),
            rep.no_guarantee,
            rep.solution
        );
    }
    if let Some(o) = &r.oracle {
        s += &format!("\noptimum: {}", to_exact_string(&o.optimum));
    }
    if let Some(e) = &r.error {
        s += &format!("\nerror: {e}");
    }
    s
}

/// Parse `argv`, run, write the report and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let report = execute(&args);
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.json {
        Some(path) => {
            if let Err(e) = fs::write(path, json + "\n") {
                eprintln!("{}: {e}", path.display());
                return 1;
            }
            println!("{}", summary(&report));
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{json}");
        }
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    report.status.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path_instance() {
        let inst = parse_instance("4 3 2\n0 1 1\n1 2 1\n2 3 1\n").unwrap();
        assert_eq!((inst.n(), inst.k(), inst.edges().len()), (4, 2, 3));
    }

    #[test]
    fn infinite_edges_are_kept_but_not_finite() {
        let inst = parse_instance("3 2 1 # comment\n0 1 inf\n1 2 2.5\n").unwrap();
        assert_eq!(inst.edges().len(), 2);
        assert_eq!(inst.finite_edges().len(), 1);
        assert_eq!(inst.finite_edges()[0].cost, BigRational::new(5.into(), 2.into()));
    }

    #[test]
    fn duplicate_edge_names_its_line() {
        let err = parse_instance("3 2 1\n0 1 1\n# skip\n1 0 3\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn other_diagnostics() {
        assert_eq!(parse_instance("3 1 1\n0 0 1\n").unwrap_err().line, 2);
        assert_eq!(parse_instance("3 1 1\n0 5 1\n").unwrap_err().line, 2);
        assert_eq!(parse_instance("3 1 1\n0 1 -2\n").unwrap_err().line, 2);
        assert_eq!(parse_instance("3 2 1\n0 1 1\n").unwrap_err().line, 2);
        assert_eq!(parse_instance("3 x 1\n").unwrap_err().line, 1);
        assert!(parse_instance("").is_err());
    }

    #[test]
    fn complete_flag_adds_forbidden_pairs() {
        let inst = parse_instance("4 2 1 complete\n0 1 1\n2 3 1/3\n").unwrap();
        assert_eq!(inst.edges().len(), 6);
        assert_eq!(inst.finite_edges().len(), 2);
    }

    #[test]
    fn print_round_trips() {
        let inst = parse_instance("4 3 2 complete\n0 1 1.25\n1 2 7/3\n2 3 0\n").unwrap();
        assert_eq!(parse_instance(&print_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::AssertionFailure.exit_code(), 2);
        assert_eq!(Status::Infeasible.exit_code(), 3);
    }
}

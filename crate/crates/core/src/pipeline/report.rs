//! Rendering of verdict tables.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{Mode, Verdict, VerdictTable};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Parse(format!("unknown report format {other:?} (expected csv, json or text)"))),
        }
    }
}

const CSV_HEADER: &str = "divisor,normalized,orbit,shape,m,verdict,kind,basis,proof,lp_solves,pivots,nodes";

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Feasible => "feasible",
        Verdict::Infeasible => "infeasible",
        Verdict::Unknown => "unknown",
    }
}

fn csv(table: &VerdictTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for d in &table.divisors {
        let coords: Vec<String> = d.normalized.iter().map(|x| x.to_string()).collect();
        let all = d.cells.iter().chain(d.escalations.iter().flat_map(|e| e.cells.iter()));
        for c in all {
            let shape = table.orbits.get(c.orbit).map(|o| o.shape.as_str()).unwrap_or("");
            let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},\"{}\",{},{},{},{},{},{},{},{},{},{}",
                d.index,
                coords.join(" "),
                c.orbit,
                shape,
                c.m,
                verdict_word(c.verdict),
                kind,
                c.basis,
                c.proof.as_deref().unwrap_or(""),
                c.stats.lp_solves,
                c.stats.pivots,
                c.stats.nodes
            );
        }
    }
    out
}

fn text(table: &VerdictTable) -> String {
    let r = &table.rollup;
    let gens = table.divisors.len();
    let orbits = table.orbits.len();
    let mut out = String::new();
    let label = match table.generators.as_str() {
        "rays" => "extremal-ray generators",
        "hilbert" => "Hilbert basis elements",
        _ => "listed divisors",
    };
    match table.mode {
        Mode::Semiample => {
            let verdict = if r.all_pass { "YES" } else { "NO" };
            if table.generators == "explicit" {
                let _ = writeln!(out, "n={}: all listed divisors G-semi-ample: {verdict}", table.n);
            } else {
                let _ = writeln!(out, "n={}: G-semi-ample cone = F-nef cone: {verdict}", table.n);
            }
        }
        Mode::Bpf => {
            let semi = r.failures.len() == r.recovered.len();
            let short = match table.generators.as_str() {
                "hilbert" => "Hilbert basis",
                "rays" => "extremal rays",
                _ => "listed divisors",
            };
            let claim = if table.generators == "explicit" {
                format!("all listed divisors G-semi-ample: {}", if semi { "YES" } else { "UNDECIDED" })
            } else {
                format!("G-semi-ample cone = F-nef cone: {}", if semi { "YES" } else { "UNDECIDED" })
            };
            let _ = writeln!(out, "n={}: {claim}; {short} m={} failures: {}", table.n, table.m, r.failures.len());
        }
    }
    let _ = writeln!(
        out,
        "{gens} {label} x {orbits} F-point orbits: {} cells, {} feasible, {} infeasible, {} unknown",
        r.cells, r.feasible, r.infeasible, r.unknown
    );
    for d in table.divisors.iter().filter(|d| r.failures.contains(&d.index)) {
        let bad: Vec<String> = d.cells.iter().filter(|c| c.verdict != Verdict::Feasible).map(|c| c.orbit.to_string()).collect();
        let fix = match d.least_m {
            Some(m) => format!("passes at m={m}"),
            None if table.mode == Mode::Bpf => format!("no pass up to m={}", table.m_cap),
            None => "not G-semi-ample".into(),
        };
        let _ = writeln!(out, "  failing {:?} ({}): orbits {}; {fix}", d.normalized, d.divisor, bad.join(","));
    }
    if table.mode == Mode::Bpf {
        let _ = writeln!(
            out,
            "note: a failure is a generator with some F-point orbit admitting no integral weighting at m={}; \
             this counts failures of the graphical system only, not of the full linear system",
            table.m
        );
    }
    out
}

pub fn report(table: &VerdictTable, format: Format) -> String {
    match format {
        Format::Csv => csv(table),
        Format::Json => table.to_json(),
        Format::Text => text(table),
    }
}

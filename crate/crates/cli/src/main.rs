//! `fnef`: command-line front end.
//!
//! Exit codes: 0 when every verdict matches what was asserted, 1 when some
//! verdict contradicts it (or a proof fails to verify), 2 on bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fnef::cone::{build_fnef_cone, extremal_rays, hilbert_basis, normalize_lattice, ConeListing};
use fnef::divisor::{intersection_self_test, DivisorJson, SymDivisor, SymDivisorCA};
use fnef::feasibility::{
    build_slice, lp_feasible, solve_slice_integral, verify_proof_json, Certificate, CertificateKind, GraphWeighting,
    IlpOutcome, LpOutcome, WitnessRecord,
};
use fnef::pipeline::{
    analyze_base_locus, report, run_bpf_campaign, run_semiample_campaign, verify_campaign_dir, CampaignConfig, Format,
    Generators, Mode, CACHE_ENV, DEFAULT_MAX_N,
};
use fnef::rational::Q;
use fnef::strata::{enumerate_fpoint_orbits, Stratum};

#[derive(Parser)]
#[command(name = "fnef", version, about = "Exact checks of symmetric F-nef divisors on M_{0,n}")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Semiample,
    Bpf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Feasible,
    Infeasible,
}

#[derive(Subcommand)]
enum Cmd {
    /// Extremal rays of the symmetric F-nef cone (JSON).
    Rays {
        #[arg(long)]
        n: usize,
    },
    /// Hilbert basis of the integral points of the cone (JSON).
    Hilbert {
        #[arg(long)]
        n: usize,
    },
    /// One representative per F-point orbit (JSON).
    Fpoints {
        #[arg(long)]
        n: usize,
    },
    /// Feasibility of one divisor against a stratum or every F-point orbit.
    Check {
        #[arg(long)]
        n: usize,
        /// Divisor file, text or JSON encoding.
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Stratum file; defaults to every F-point orbit representative.
        #[arg(long)]
        stratum: Option<PathBuf>,
        /// Rational instead of integral feasibility.
        #[arg(long)]
        rational: bool,
        #[arg(long, value_enum, default_value = "feasible")]
        expect: Expect,
        /// Directory for certificates and witnesses.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a campaign over generators and F-point orbits.
    Campaign {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// A single n or a range `A..B` (inclusive).
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Highest multiplier tried for failing divisors (bpf mode).
        #[arg(long)]
        m_cap: Option<u64>,
        /// `rays`, `hilbert`, or a file listing divisors.
        #[arg(long)]
        generators: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, env = CACHE_ENV)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
        /// Accept n above the default cap.
        #[arg(long)]
        allow_large_n: bool,
        /// Node budget per integral cell; unlimited by default.
        #[arg(long)]
        cell_nodes: Option<u64>,
    },
    /// Re-check a certificate, a Farkas witness, or a campaign directory.
    Verify { path: PathBuf },
    /// Maximal strata with no integral weighting for `m * divisor`.
    Baselocus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
}

/// Failure with its exit code.
struct Fail(u8, String);

fn input<E: std::fmt::Display>(e: E) -> Fail {
    Fail(2, e.to_string())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn load_divisor(path: &Path, n: usize) -> Result<SymDivisorCA, Fail> {
    let d = SymDivisor::parse_any(&read(path)?).map_err(input)?.to_ca();
    if d.n() != n {
        return Err(Fail(2, format!("divisor is on {} points, --n is {n}", d.n())));
    }
    Ok(d)
}

fn load_divisor_list(text: &str) -> Result<Vec<SymDivisorCA>, Fail> {
    if text.trim_start().starts_with('[') {
        let list: Vec<DivisorJson> = serde_json::from_str(text).map_err(input)?;
        return list.iter().map(|j| SymDivisor::from_json_value(j).map(|d| d.to_ca()).map_err(input)).collect();
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| SymDivisor::parse_text(l).map(|d| d.to_ca()).map_err(input))
        .collect()
}

fn parse_range(s: &str) -> Result<Vec<usize>, Fail> {
    let bad = || Fail(2, format!("bad --n value {s:?}; expected N or A..B"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.trim_start_matches('=').parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.parse().map_err(|_| bad())?]),
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn check(
    n: usize,
    divisor: &Path,
    m: u64,
    stratum: Option<&Path>,
    rational: bool,
    expect: Expect,
    out: Option<&Path>,
) -> Result<bool, Fail> {
    let d = load_divisor(divisor, n)?;
    let strata: Vec<(String, Stratum)> = match stratum {
        Some(p) => {
            let s = Stratum::parse_json(&read(p)?).map_err(input)?;
            if s.n() != n {
                return Err(Fail(2, format!("stratum is on {} points, --n is {n}", s.n())));
            }
            vec![("stratum".into(), s)]
        }
        None => enumerate_fpoint_orbits(n)
            .map_err(input)?
            .into_iter()
            .enumerate()
            .map(|(k, o)| (format!("orbit {k}"), o.representative))
            .collect(),
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(input)?;
    }
    let mut all_match = true;
    for (k, (label, s)) in strata.iter().enumerate() {
        let (feasible, proof) = if rational {
            let sys = build_slice(n, &d, m, s).map_err(input)?;
            match lp_feasible(&sys).map_err(|e| Fail(1, e.to_string()))? {
                LpOutcome::Feasible(x) => {
                    let weighting = GraphWeighting::new(n, x).map_err(|e| Fail(1, e.to_string()))?;
                    let cert = Certificate { m, divisor: d.clone(), stratum: s.clone(), kind: CertificateKind::Rational, weighting };
                    (true, Some(cert.to_json()))
                }
                LpOutcome::Infeasible(w) => {
                    (false, Some(WitnessRecord { m, divisor: d.clone(), stratum: s.clone(), witness: w }.to_json()))
                }
            }
        } else {
            match solve_slice_integral(n, &d, m, s, None).map_err(input)?.0 {
                IlpOutcome::Feasible(x) => {
                    let w = x.into_iter().map(Q::from_integer).collect();
                    let weighting = GraphWeighting::new(n, w).map_err(|e| Fail(1, e.to_string()))?;
                    let cert = Certificate { m, divisor: d.clone(), stratum: s.clone(), kind: CertificateKind::Integral, weighting };
                    (true, Some(cert.to_json()))
                }
                IlpOutcome::Infeasible => (false, None),
                IlpOutcome::Budget => unreachable!("no node limit"),
            }
        };
        if let Some(p) = &proof {
            if !verify_proof_json(p).map_err(|e| Fail(1, e.to_string()))?.is_valid() {
                return Err(Fail(1, format!("{label}: proof failed to verify")));
            }
            if let Some(dir) = out {
                fs::write(dir.join(format!("proof-{k:03}.json")), p).map_err(input)?;
            }
        }
        let word = match (feasible, proof.is_some()) {
            (true, _) => "feasible (certificate verified)",
            (false, true) => "infeasible (Farkas witness verified)",
            (false, false) => "infeasible (exhaustive search)",
        };
        println!("{label}: {word}");
        all_match &= feasible == (expect == Expect::Feasible);
    }
    Ok(all_match)
}

#[allow(clippy::too_many_arguments)]
fn campaign(
    mode: ModeArg,
    n: &str,
    m: u64,
    m_cap: Option<u64>,
    generators: Option<&str>,
    out: Option<&Path>,
    jobs: usize,
    cache_dir: Option<&Path>,
    format: &str,
    allow_large_n: bool,
    cell_nodes: Option<u64>,
) -> Result<bool, Fail> {
    let format: Format = format.parse().map_err(input)?;
    let mode = match mode {
        ModeArg::Semiample => Mode::Semiample,
        ModeArg::Bpf => Mode::Bpf,
    };
    let ns = parse_range(n)?;
    let many = ns.len() > 1;
    let mut all_pass = true;
    for n in ns {
        let mut cfg = CampaignConfig::new(n, mode);
        cfg.m = m;
        if let Some(c) = m_cap {
            cfg.m_cap = c;
        } else if mode == Mode::Bpf {
            cfg.m_cap = cfg.m_cap.max(m);
        }
        cfg.generators = match generators {
            None => cfg.generators,
            Some("rays") => Generators::Rays,
            Some("hilbert") => Generators::Hilbert,
            Some(file) => Generators::Explicit(load_divisor_list(&read(Path::new(file))?)?),
        };
        cfg.jobs = jobs;
        cfg.cache_dir = cache_dir.map(Path::to_path_buf);
        cfg.out_dir = out.map(|o| if many { o.join(format!("n{n}")) } else { o.to_path_buf() });
        cfg.max_n = if allow_large_n { fnef::divisor::MAX_N } else { DEFAULT_MAX_N };
        cfg.cell_nodes = cell_nodes;
        cfg.validate().map_err(input)?;
        let table = match mode {
            Mode::Semiample => run_semiample_campaign(&cfg),
            Mode::Bpf => run_bpf_campaign(&cfg),
        }
        .map_err(|e| match e {
            fnef::Error::Campaign(_) | fnef::Error::Solver(_) => Fail(1, e.to_string()),
            other => input(other),
        })?;
        print!("{}", report(&table, format));
        if format == Format::Json {
            println!();
        }
        all_pass &= table.rollup.all_pass;
    }
    Ok(all_pass)
}

fn verify(path: &Path) -> Result<bool, Fail> {
    if path.is_dir() {
        let bad = verify_campaign_dir(path).map_err(input)?;
        for b in &bad {
            println!("FAILED {b}");
        }
        if bad.is_empty() {
            println!("all proof files verified");
        }
        return Ok(bad.is_empty());
    }
    let check = verify_proof_json(&read(path)?).map_err(input)?;
    println!("{}: {}", path.display(), if check.is_valid() { "valid" } else { "INVALID" });
    if let fnef::feasibility::ProofCheck::Certificate { violations, .. } = &check {
        for v in violations {
            println!("  {v}");
        }
    }
    Ok(check.is_valid())
}

fn run(cli: Cli) -> Result<bool, Fail> {
    match cli.cmd {
        Cmd::Rays { n } => {
            let lat = normalize_lattice(n).map_err(input)?;
            let rays = extremal_rays(&build_fnef_cone(n).map_err(input)?).map_err(input)?;
            println!("{}", json(&ConeListing::new(&lat, "rays", rays)));
            Ok(true)
        }
        Cmd::Hilbert { n } => {
            let lat = normalize_lattice(n).map_err(input)?;
            let hb = hilbert_basis(&build_fnef_cone(n).map_err(input)?, &lat).map_err(input)?;
            println!("{}", json(&ConeListing::new(&lat, "hilbert", hb.elements)));
            Ok(true)
        }
        Cmd::Fpoints { n } => {
            let orbits = enumerate_fpoint_orbits(n).map_err(input)?;
            let list: Vec<serde_json::Value> = orbits
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    serde_json::json!({
                        "index": k,
                        "shape": o.shape,
                        "orbit_size": o.orbit_size.to_string(),
                        "T": o.representative.subsets(),
                    })
                })
                .collect();
            println!("{}", json(&list));
            Ok(true)
        }
        Cmd::Check { n, divisor, m, stratum, rational, expect, out } => {
            check(n, &divisor, m, stratum.as_deref(), rational, expect, out.as_deref())
        }
        Cmd::Campaign { mode, n, m, m_cap, generators, out, jobs, cache_dir, format, allow_large_n, cell_nodes } => campaign(
            mode,
            &n,
            m,
            m_cap,
            generators.as_deref(),
            out.as_deref(),
            jobs,
            cache_dir.as_deref(),
            &format,
            allow_large_n,
            cell_nodes,
        ),
        Cmd::Verify { path } => verify(&path),
        Cmd::Baselocus { n, divisor, m } => {
            let d = load_divisor(&divisor, n)?;
            let b = analyze_base_locus(n, &d, m).map_err(input)?;
            println!("{}", json(&b));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Err(e) = intersection_self_test(16) {
        eprintln!("fnef: self-test failed: {e}");
        return ExitCode::from(1);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail(code, msg)) => {
            eprintln!("fnef: {msg}");
            ExitCode::from(code)
        }
    }
}

//! Campaigns over generator divisors and F-point orbits.
//!
//! A campaign checks every generator divisor against one representative of
//! every F-point orbit. A cell is one `(divisor, orbit, m)` triple. Cells are
//! solved by stateless workers on a rayon pool and collected in index order,
//! so the resulting [`VerdictTable`] does not depend on the thread count.
//! Each cell's certificate or Farkas witness is serialized, optionally
//! written to disk, read back and checked from scratch before the cell is
//! recorded.

mod baselocus;
mod cache;
mod report;

pub use baselocus::{analyze_base_locus, BaseLocus, BaseStratum};
pub use cache::{Cache, CacheEntry, CellKey};
pub use report::{report, Format};

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{build_fnef_cone, extremal_rays, hilbert_basis, normalize_lattice, LatticeMap};
use crate::divisor::{is_f_nef, is_integral, to_b_basis, SymDivisor, SymDivisorCA};
use crate::feasibility::{
    build_slice, build_slice_multi, ilp_solve, lp_feasible_with_stats, solve_slice_integral, verify_proof_json, Certificate,
    CertificateKind, GraphWeighting, IlpOptions, IlpOutcome, LpOutcome, SolveStats, WitnessRecord,
};
use crate::rational::{primitive_integer_vector, to_i64, Q};
use crate::strata::{canonical_code, enumerate_fpoint_orbits, FPointOrbit};
use crate::{Error, Result};

/// Largest `n` accepted unless the caller raises the cap.
pub const DEFAULT_MAX_N: usize = 14;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "FNEF_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Rational feasibility: G-semi-ampleness.
    Semiample,
    /// Integral feasibility at a fixed multiplier: G-base-point-freeness.
    Bpf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generators {
    Rays,
    Hilbert,
    Explicit(Vec<SymDivisorCA>),
}

impl Generators {
    fn label(&self) -> &'static str {
        match self {
            Generators::Rays => "rays",
            Generators::Hilbert => "hilbert",
            Generators::Explicit(_) => "explicit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub n: usize,
    pub mode: Mode,
    /// Multiplier of the integral checks.
    pub m: u64,
    /// Divisors failing at `m` are retried at `m + 1 ..= m_cap`.
    pub m_cap: u64,
    pub generators: Generators,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    /// Where proof files and the manifest go.
    pub out_dir: Option<PathBuf>,
    pub max_n: usize,
    /// Node budget of the shared-certificate attempt; 0 disables it.
    pub shared_nodes: u64,
    /// Node budget per integral cell; `None` searches exhaustively.
    pub cell_nodes: Option<u64>,
}

impl CampaignConfig {
    /// Defaults: `m = 1`; ray generators for semi-ampleness, the Hilbert
    /// basis and a retry at `m = 2` for base-point-freeness.
    pub fn new(n: usize, mode: Mode) -> Self {
        let (generators, m_cap) = match mode {
            Mode::Semiample => (Generators::Rays, 1),
            Mode::Bpf => (Generators::Hilbert, 2),
        };
        Self {
            n,
            mode,
            m: 1,
            m_cap,
            generators,
            jobs: 0,
            cache_dir: None,
            out_dir: None,
            max_n: DEFAULT_MAX_N,
            shared_nodes: 200,
            cell_nodes: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 5 || self.n > self.max_n {
            return Err(Error::Domain(format!("n={} outside the allowed range 5..={}", self.n, self.max_n)));
        }
        if self.m == 0 {
            return Err(Error::Domain("multiplier must be positive".into()));
        }
        if self.m_cap < self.m {
            return Err(Error::Domain(format!("multiplier cap {} is below m={}", self.m_cap, self.m)));
        }
        if self.mode == Mode::Semiample && (self.m != 1 || self.m_cap != 1) {
            return Err(Error::Domain("semiample mode is scale invariant; use m=1".into()));
        }
        if let Generators::Explicit(ds) = &self.generators {
            for d in ds {
                if d.n() != self.n {
                    return Err(Error::DivisorRejected(format!("generator on {} points, campaign on {}", d.n(), self.n)));
                }
                if d.is_zero() || !is_f_nef(&to_b_basis(d)) {
                    return Err(Error::DivisorRejected(format!("{} is not a nonzero F-nef divisor", SymDivisor::CA(d.clone()).to_text())));
                }
                if self.mode == Mode::Bpf && !is_integral(d) {
                    return Err(Error::DivisorRejected(format!("{} is not integral", SymDivisor::CA(d.clone()).to_text())));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Infeasible,
    /// The node budget ran out.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub orbit: usize,
    pub m: u64,
    pub verdict: Verdict,
    pub kind: CertificateKind,
    /// How the verdict is backed: `certificate`, `shared-certificate`,
    /// `farkas`, `exhaustive-search` or `budget`.
    pub basis: String,
    /// Proof file relative to the output directory.
    pub proof: Option<String>,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Escalation {
    pub m: u64,
    pub pass: bool,
    pub shared: bool,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorVerdicts {
    pub index: usize,
    pub divisor: String,
    pub normalized: Vec<i64>,
    /// One shared weighting settled every cell at the base multiplier.
    pub shared: bool,
    pub cells: Vec<Cell>,
    /// Semiample mode: every cell rationally feasible.
    pub semiample: Option<bool>,
    /// Bpf mode: every cell integrally feasible at the base multiplier.
    pub bpf: Option<bool>,
    /// Bpf mode: least multiplier up to the cap with every cell feasible.
    pub least_m: Option<u64>,
    pub escalations: Vec<Escalation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    pub index: usize,
    pub shape: String,
    pub orbit_size: u128,
    #[serde(rename = "T")]
    pub t: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rollup {
    pub cells: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub unknown: usize,
    /// Divisors with some cell not feasible at the base multiplier.
    pub failures: Vec<usize>,
    /// Failing divisors that pass at some multiplier up to the cap.
    pub recovered: Vec<usize>,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictTable {
    pub n: usize,
    pub mode: Mode,
    pub m: u64,
    pub m_cap: u64,
    pub generators: String,
    pub orbits: Vec<OrbitInfo>,
    pub divisors: Vec<DivisorVerdicts>,
    pub rollup: Rollup,
}

impl VerdictTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn finish(&mut self) {
        let mut r = Rollup::default();
        for d in &self.divisors {
            for c in &d.cells {
                r.cells += 1;
                match c.verdict {
                    Verdict::Feasible => r.feasible += 1,
                    Verdict::Infeasible => r.infeasible += 1,
                    Verdict::Unknown => r.unknown += 1,
                }
            }
            if d.cells.iter().any(|c| c.verdict != Verdict::Feasible) {
                r.failures.push(d.index);
                if d.least_m.is_some() {
                    r.recovered.push(d.index);
                }
            }
        }
        r.all_pass = r.failures.is_empty();
        self.rollup = r;
    }
}

/// Generator divisors of a campaign, with normalized lattice coordinates.
pub fn generator_divisors(cfg: &CampaignConfig, lat: &LatticeMap) -> Result<Vec<(SymDivisorCA, Vec<i64>)>> {
    let vectors: Vec<Vec<i64>> = match &cfg.generators {
        Generators::Rays => extremal_rays(&build_fnef_cone(cfg.n)?)?,
        Generators::Hilbert => hilbert_basis(&build_fnef_cone(cfg.n)?, lat)?.elements,
        Generators::Explicit(ds) => {
            let mut out = Vec::new();
            for d in ds {
                let v = lat.to_normalized(d);
                let v: Vec<Q> = match cfg.mode {
                    // Rational feasibility is scale invariant; use the
                    // primitive integral multiple.
                    Mode::Semiample => primitive_integer_vector(&v).into_iter().map(Q::from_integer).collect(),
                    Mode::Bpf => v,
                };
                let ints = v
                    .iter()
                    .map(|x| to_i64(x).ok_or_else(|| Error::DivisorRejected(format!("coordinate {x} is not a 64-bit integer"))))
                    .collect::<Result<Vec<i64>>>()?;
                out.push(ints);
            }
            out
        }
    };
    Ok(vectors.into_iter().map(|v| (lat.divisor_of(&v), v)).collect())
}

struct Ctx<'a> {
    cfg: &'a CampaignConfig,
    orbits: &'a [FPointOrbit],
    codes: Vec<String>,
    cache: Option<Cache>,
}

struct Job<'a> {
    di: usize,
    d: &'a SymDivisorCA,
    normalized: &'a [i64],
}

fn proof_name(di: usize, oi: usize, m: u64) -> String {
    format!("proofs/d{di:03}-o{oi:03}-m{m}.json")
}

impl Ctx<'_> {
    fn kind(&self) -> CertificateKind {
        match self.cfg.mode {
            Mode::Semiample => CertificateKind::Rational,
            Mode::Bpf => CertificateKind::Integral,
        }
    }

    fn key(&self, job: &Job, oi: usize, m: u64) -> String {
        CellKey { n: self.cfg.n, normalized: job.normalized.to_vec(), m, code: self.codes[oi].clone(), kind: self.kind() }.hash()
    }

    /// Writes the proof (when an output directory is set), reads it back and
    /// checks it from scratch.
    fn settle(&self, job: &Job, oi: usize, m: u64, proof: &str) -> Result<Option<String>> {
        let cell_id = || format!("divisor {} ({}), orbit {oi}, m={m}", job.di, SymDivisor::CA(job.d.clone()).to_text());
        let (text, rel) = match &self.cfg.out_dir {
            Some(dir) => {
                let rel = proof_name(job.di, oi, m);
                let path = dir.join(&rel);
                fs::create_dir_all(path.parent().expect("proof path has a parent"))?;
                fs::write(&path, proof)?;
                (fs::read_to_string(&path)?, Some(rel))
            }
            None => (proof.to_string(), None),
        };
        match verify_proof_json(&text) {
            Ok(check) if check.is_valid() => Ok(rel),
            Ok(check) => Err(Error::Campaign(format!("proof for {} does not verify: {check:?}", cell_id()))),
            Err(e) => Err(Error::Campaign(format!("proof for {} is unreadable: {e}", cell_id()))),
        }
    }

    fn from_entry(&self, job: &Job, oi: usize, m: u64, e: CacheEntry) -> Result<Cell> {
        let proof = match &e.proof {
            Some(p) => self.settle(job, oi, m, p)?,
            None => None,
        };
        Ok(Cell { orbit: oi, m, verdict: e.verdict, kind: self.kind(), basis: e.basis, proof, stats: e.stats })
    }

    fn cached(&self, job: &Job, oi: usize, m: u64) -> Option<CacheEntry> {
        let cache = self.cache.as_ref()?;
        let expect =
            cache::Expect { divisor: job.d, m, stratum: &self.orbits[oi].representative, kind: self.kind() };
        cache.load(&self.key(job, oi, m), &expect)
    }

    fn record(&self, job: &Job, oi: usize, m: u64, verdict: Verdict, basis: &str, stats: SolveStats, proof: Option<String>) -> Result<Cell> {
        let entry = CacheEntry::new(self.key(job, oi, m), verdict, basis.into(), stats, proof);
        if let (Some(cache), true) = (&self.cache, verdict != Verdict::Unknown) {
            cache.store(&entry)?;
        }
        self.from_entry(job, oi, m, entry)
    }

    fn solve_cell(&self, job: &Job, oi: usize, m: u64) -> Result<Cell> {
        if let Some(e) = self.cached(job, oi, m) {
            return self.from_entry(job, oi, m, e);
        }
        let n = self.cfg.n;
        let s = &self.orbits[oi].representative;
        match self.cfg.mode {
            Mode::Semiample => {
                let sys = build_slice(n, job.d, m, s)?;
                let (out, stats) = lp_feasible_with_stats(&sys)?;
                match out {
                    LpOutcome::Feasible(x) => {
                        let cert = Certificate {
                            m,
                            divisor: job.d.clone(),
                            stratum: s.clone(),
                            kind: CertificateKind::Rational,
                            weighting: GraphWeighting::new(n, x)?,
                        };
                        self.record(job, oi, m, Verdict::Feasible, "certificate", stats, Some(cert.to_json()))
                    }
                    LpOutcome::Infeasible(w) => {
                        let rec = WitnessRecord { m, divisor: job.d.clone(), stratum: s.clone(), witness: w };
                        self.record(job, oi, m, Verdict::Infeasible, "farkas", stats, Some(rec.to_json()))
                    }
                }
            }
            Mode::Bpf => {
                let (out, stats) = solve_slice_integral(n, job.d, m, s, self.cfg.cell_nodes)?;
                match out {
                    IlpOutcome::Feasible(x) => {
                        let cert = self.integral_certificate(job.d, m, oi, &x)?;
                        self.record(job, oi, m, Verdict::Feasible, "certificate", stats, Some(cert.to_json()))
                    }
                    IlpOutcome::Infeasible => self.record(job, oi, m, Verdict::Infeasible, "exhaustive-search", stats, None),
                    IlpOutcome::Budget => self.record(job, oi, m, Verdict::Unknown, "budget", stats, None),
                }
            }
        }
    }

    fn integral_certificate(&self, d: &SymDivisorCA, m: u64, oi: usize, x: &[BigInt]) -> Result<Certificate> {
        Ok(Certificate {
            m,
            divisor: d.clone(),
            stratum: self.orbits[oi].representative.clone(),
            kind: CertificateKind::Integral,
            weighting: GraphWeighting::new(self.cfg.n, x.iter().map(|v| Q::from_integer(v.clone())).collect())?,
        })
    }

    /// One integral weighting avoiding every orbit representative at once.
    fn shared(&self, job: &Job, m: u64) -> Result<Option<Vec<Cell>>> {
        if self.cfg.shared_nodes == 0 {
            return Ok(None);
        }
        let cached: Vec<Option<CacheEntry>> = (0..self.orbits.len()).map(|oi| self.cached(job, oi, m)).collect();
        if cached.iter().all(Option::is_some) {
            let cells = cached.into_iter().enumerate().map(|(oi, e)| self.from_entry(job, oi, m, e.expect("checked")));
            return cells.collect::<Result<Vec<_>>>().map(Some);
        }
        let reps: Vec<_> = self.orbits.iter().map(|o| &o.representative).collect();
        let sys = build_slice_multi(self.cfg.n, job.d, m, &reps)?;
        let opts = IlpOptions { node_limit: Some(self.cfg.shared_nodes), ..Default::default() };
        let (out, _) = ilp_solve(&sys, &opts)?;
        let IlpOutcome::Feasible(x) = out else {
            return Ok(None);
        };
        let mut cells = Vec::new();
        for oi in 0..self.orbits.len() {
            let cert = self.integral_certificate(job.d, m, oi, &x)?;
            cells.push(self.record(job, oi, m, Verdict::Feasible, "shared-certificate", SolveStats::default(), Some(cert.to_json()))?);
        }
        Ok(Some(cells))
    }

    /// All cells of one divisor at multiplier `m`; the flag tells whether a
    /// shared weighting settled them.
    fn divisor_cells(&self, job: &Job, m: u64) -> Result<(Vec<Cell>, bool)> {
        if self.cfg.mode == Mode::Bpf {
            if let Some(cells) = self.shared(job, m)? {
                return Ok((cells, true));
            }
        }
        let cells = (0..self.orbits.len()).into_par_iter().map(|oi| self.solve_cell(job, oi, m)).collect::<Result<Vec<_>>>()?;
        Ok((cells, false))
    }

    fn run_divisor(&self, job: &Job) -> Result<DivisorVerdicts> {
        let (cells, shared) = self.divisor_cells(job, self.cfg.m)?;
        let pass = cells.iter().all(|c| c.verdict == Verdict::Feasible);
        let mut out = DivisorVerdicts {
            index: job.di,
            divisor: SymDivisor::CA(job.d.clone()).to_text(),
            normalized: job.normalized.to_vec(),
            shared,
            cells,
            semiample: None,
            bpf: None,
            least_m: None,
            escalations: Vec::new(),
        };
        match self.cfg.mode {
            Mode::Semiample => out.semiample = Some(pass),
            Mode::Bpf => {
                out.bpf = Some(pass);
                if pass {
                    out.least_m = Some(self.cfg.m);
                } else {
                    for m in self.cfg.m + 1..=self.cfg.m_cap {
                        let (cells, shared) = self.divisor_cells(job, m)?;
                        let pass = cells.iter().all(|c| c.verdict == Verdict::Feasible);
                        out.escalations.push(Escalation { m, pass, shared, cells });
                        if pass {
                            out.least_m = Some(m);
                            break;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn run_campaign(cfg: &CampaignConfig) -> Result<VerdictTable> {
    cfg.validate()?;
    let lat = normalize_lattice(cfg.n)?;
    let gens = generator_divisors(cfg, &lat)?;
    let orbits = enumerate_fpoint_orbits(cfg.n)?;
    let cache = match &cfg.cache_dir {
        Some(dir) => Some(Cache::open(dir)?),
        None => None,
    };
    let ctx = Ctx { cfg, orbits: &orbits, codes: orbits.iter().map(|o| canonical_code(&o.representative)).collect(), cache };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Campaign(format!("cannot start worker pool: {e}")))?;
    let divisors = pool.install(|| {
        gens.iter()
            .enumerate()
            .map(|(di, (d, v))| ctx.run_divisor(&Job { di, d, normalized: v }))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut table = VerdictTable {
        n: cfg.n,
        mode: cfg.mode,
        m: cfg.m,
        m_cap: cfg.m_cap,
        generators: cfg.generators.label().into(),
        orbits: orbits
            .iter()
            .enumerate()
            .map(|(index, o)| OrbitInfo { index, shape: o.shape.clone(), orbit_size: o.orbit_size, t: o.representative.subsets() })
            .collect(),
        divisors,
        rollup: Rollup::default(),
    };
    table.finish();
    if let Some(dir) = &cfg.out_dir {
        write_manifest(dir, &table)?;
    }
    Ok(table)
}

fn write_manifest(dir: &Path, table: &VerdictTable) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(".manifest.json.tmp");
    fs::write(&tmp, table.to_json())?;
    fs::rename(&tmp, dir.join("manifest.json"))?;
    Ok(())
}

/// Rational feasibility of every generator against every F-point orbit.
pub fn run_semiample_campaign(cfg: &CampaignConfig) -> Result<VerdictTable> {
    if cfg.mode != Mode::Semiample {
        return Err(Error::Domain("configuration is not in semiample mode".into()));
    }
    run_campaign(cfg)
}

/// Integral feasibility at `cfg.m` of every generator against every F-point
/// orbit, with a shared weighting tried first for each divisor.
pub fn run_bpf_campaign(cfg: &CampaignConfig) -> Result<VerdictTable> {
    if cfg.mode != Mode::Bpf {
        return Err(Error::Domain("configuration is not in bpf mode".into()));
    }
    run_campaign(cfg)
}

/// Re-checks every proof file referenced by a manifest in `dir`; returns
/// the cells whose file is missing or fails.
pub fn verify_campaign_dir(dir: &Path) -> Result<Vec<String>> {
    let table = VerdictTable::parse_json(&fs::read_to_string(dir.join("manifest.json"))?)?;
    let mut bad = Vec::new();
    for d in &table.divisors {
        let all = d.cells.iter().chain(d.escalations.iter().flat_map(|e| e.cells.iter()));
        for c in all {
            if c.verdict == Verdict::Feasible && c.proof.is_none() {
                bad.push(format!("divisor {} orbit {} m={}: no certificate", d.index, c.orbit, c.m));
            }
            if let Some(rel) = &c.proof {
                let ok = fs::read_to_string(dir.join(rel))
                    .ok()
                    .and_then(|t| verify_proof_json(&t).ok())
                    .is_some_and(|p| p.is_valid());
                if !ok {
                    bad.push(format!("divisor {} orbit {} m={}: {rel}", d.index, c.orbit, c.m));
                }
            }
        }
    }
    Ok(bad)
}

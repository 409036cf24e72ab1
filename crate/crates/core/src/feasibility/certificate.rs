//! Certificates of feasibility and infeasibility, with independent checks.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::system::{FarkasWitness, Provenance};
use super::{build_slice, pair_index, pairs, GraphWeighting};
use crate::divisor::{DivisorJson, SymDivisor, SymDivisorCA};
use crate::rational::{format_rational, is_integer, parse_rational, Q};
use crate::strata::{Stratum, StratumJson};
use crate::{Error, Result};

/// Largest `n` whose certificates are checked by full subset enumeration.
const MAX_CHECK_N: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Rational,
    Integral,
}

/// A weighting for `m * divisor` satisfying the conditions of `stratum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub m: u64,
    pub divisor: SymDivisorCA,
    pub stratum: Stratum,
    pub kind: CertificateKind,
    pub weighting: GraphWeighting,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    n: usize,
    m: u64,
    divisor: DivisorJson,
    #[serde(rename = "T")]
    t: Vec<Vec<usize>>,
    kind: CertificateKind,
    w: Vec<[String; 3]>,
}

impl Certificate {
    pub fn n(&self) -> usize {
        self.weighting.n()
    }

    pub fn to_json(&self) -> String {
        let n = self.n();
        let w = pairs(n)
            .into_iter()
            .filter(|&(i, j)| !self.weighting.get(i, j).is_zero())
            .map(|(i, j)| [(i + 1).to_string(), (j + 1).to_string(), format_rational(self.weighting.get(i, j))])
            .collect();
        let j = CertificateJson {
            n,
            m: self.m,
            divisor: SymDivisor::CA(self.divisor.clone()).to_json_value(),
            t: self.stratum.subsets(),
            kind: self.kind,
            w,
        };
        serde_json::to_string(&j).expect("certificate serializes")
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let j: CertificateJson = serde_json::from_str(s)?;
        Self::from_parts(j)
    }

    fn from_parts(j: CertificateJson) -> Result<Self> {
        let n = j.n;
        let divisor = SymDivisor::from_json_value(&j.divisor)?.to_ca();
        if divisor.n() != n {
            return Err(Error::Certificate(format!("divisor is on {} points, certificate on {n}", divisor.n())));
        }
        let stratum = Stratum::from_json_value(&StratumJson { n, t: j.t })?;
        let mut weighting = GraphWeighting::zero(n);
        let mut seen = std::collections::BTreeSet::new();
        for [a, b, v] in &j.w {
            let parse_leaf = |s: &str| -> Result<usize> {
                let k: usize = s.parse().map_err(|_| Error::Parse(format!("bad leaf label {s:?}")))?;
                if k == 0 || k > n {
                    return Err(Error::Parse(format!("leaf {k} out of range")));
                }
                Ok(k - 1)
            };
            let (i, k) = (parse_leaf(a)?, parse_leaf(b)?);
            if i == k {
                return Err(Error::Parse(format!("loop at leaf {}", i + 1)));
            }
            if !seen.insert(pair_index(n, i, k)) {
                return Err(Error::Parse(format!("edge ({}, {}) listed twice", i + 1, k + 1)));
            }
            weighting.set(i, k, parse_rational(v)?)?;
        }
        Ok(Self { m: j.m, divisor, stratum, kind: j.kind, weighting })
    }

    /// The same certificate after renaming leaf `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self { stratum: self.stratum.permute(perm), weighting: self.weighting.permute(perm), ..self.clone() }
    }
}

/// Every condition the certificate fails, checked from scratch over all
/// subsets of the leaves.
pub fn certificate_violations(cert: &Certificate) -> Vec<String> {
    let n = cert.n();
    let mut out = Vec::new();
    if cert.divisor.n() != n || cert.stratum.n() != n {
        out.push("size mismatch".to_string());
        return out;
    }
    if n > MAX_CHECK_N {
        out.push(format!("n={n} exceeds the checker limit {MAX_CHECK_N}"));
        return out;
    }
    if cert.m == 0 {
        out.push("multiplier must be positive".to_string());
    }
    let w = &cert.weighting;
    if w.weights().iter().any(Signed::is_negative) {
        out.push("nonneg".to_string());
    }
    if cert.kind == CertificateKind::Integral && !w.is_integral() {
        out.push("integrality".to_string());
    }
    let m = Q::from_integer(BigInt::from(cert.m));
    let target = cert.divisor.degree() * &m;
    if cert.kind == CertificateKind::Integral && !is_integer(&target) {
        out.push("degree target is not integral".to_string());
    }
    for i in 0..n {
        if w.degree(i) != target {
            out.push(Provenance::Degree(i).to_string());
        }
    }
    for set in 0u32..(1u32 << n) {
        let k = set.count_ones() as usize;
        if k < 3 || 2 * k > n {
            continue;
        }
        if w.subset_weight(set) < cert.divisor.a_at(k) * &m {
            out.push(Provenance::Subset(set).to_string());
        }
    }
    for &j in cert.stratum.members() {
        if w.subset_weight(j) != cert.divisor.a_at(j.count_ones() as usize) * &m {
            out.push(Provenance::Stratum(j).to_string());
        }
    }
    out
}

pub fn verify_certificate(cert: &Certificate) -> bool {
    certificate_violations(cert).is_empty()
}

/// Farkas multipliers for the system built from `(divisor, m, stratum)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub m: u64,
    pub divisor: SymDivisorCA,
    pub stratum: Stratum,
    pub witness: FarkasWitness,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    n: usize,
    m: u64,
    divisor: DivisorJson,
    #[serde(rename = "T")]
    t: Vec<Vec<usize>>,
    kind: String,
    multipliers: Vec<String>,
}

impl WitnessRecord {
    pub fn to_json(&self) -> String {
        let j = WitnessJson {
            n: self.divisor.n(),
            m: self.m,
            divisor: SymDivisor::CA(self.divisor.clone()).to_json_value(),
            t: self.stratum.subsets(),
            kind: "farkas".into(),
            multipliers: self.witness.to_strings(),
        };
        serde_json::to_string(&j).expect("witness serializes")
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let j: WitnessJson = serde_json::from_str(s)?;
        Self::from_parts(j)
    }

    fn from_parts(j: WitnessJson) -> Result<Self> {
        if j.kind != "farkas" {
            return Err(Error::Parse(format!("unknown witness kind {:?}", j.kind)));
        }
        let divisor = SymDivisor::from_json_value(&j.divisor)?.to_ca();
        if divisor.n() != j.n {
            return Err(Error::Certificate("divisor size does not match n".into()));
        }
        let stratum = Stratum::from_json_value(&StratumJson { n: j.n, t: j.t })?;
        let multipliers = j.multipliers.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        Ok(Self { m: j.m, divisor, stratum, witness: FarkasWitness { multipliers } })
    }

    /// Rebuilds the system and replays the recombination.
    pub fn verify(&self) -> Result<bool> {
        let sys = build_slice(self.divisor.n(), &self.divisor, self.m, &self.stratum)?;
        Ok(self.witness.verify(&sys))
    }
}

/// Outcome of checking a proof file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofCheck {
    Certificate { valid: bool, violations: Vec<String> },
    Witness { valid: bool },
}

impl ProofCheck {
    pub fn is_valid(&self) -> bool {
        match self {
            ProofCheck::Certificate { valid, .. } | ProofCheck::Witness { valid } => *valid,
        }
    }
}

/// Checks a certificate or Farkas witness given as JSON text.
pub fn verify_proof_json(text: &str) -> Result<ProofCheck> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    match v.get("kind").and_then(|k| k.as_str()) {
        Some("farkas") => {
            let rec = WitnessRecord::from_parts(serde_json::from_value(v)?)?;
            Ok(ProofCheck::Witness { valid: rec.verify()? })
        }
        Some(_) => {
            let cert = Certificate::from_parts(serde_json::from_value(v)?)?;
            let violations = certificate_violations(&cert);
            Ok(ProofCheck::Certificate { valid: violations.is_empty(), violations })
        }
        None => Err(Error::Parse("proof file has no kind".into())),
    }
}

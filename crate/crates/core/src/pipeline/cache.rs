//! On-disk cell cache: one JSON file per solved cell, named by a SHA-256 key.
//!
//! Entries are written to a temporary file and renamed into place. A lookup
//! re-checks everything it can: the key, a digest of the entry body, and the
//! attached certificate or Farkas witness against the requested cell. Any
//! mismatch is treated as a miss, so a corrupted entry gets re-solved and
//! overwritten.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Verdict;
use crate::feasibility::{Certificate, CertificateKind, SolveStats, WitnessRecord};
use crate::strata::Stratum;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Identity of one cell, independent of leaf labels.
#[derive(Clone, Debug)]
pub struct CellKey {
    pub n: usize,
    pub normalized: Vec<i64>,
    pub m: u64,
    pub code: String,
    pub kind: CertificateKind,
}

impl CellKey {
    pub fn hash(&self) -> String {
        let coords: Vec<String> = self.normalized.iter().map(|x| x.to_string()).collect();
        let kind = match self.kind {
            CertificateKind::Rational => "rational",
            CertificateKind::Integral => "integral",
        };
        let text = format!("fnef-cell-v1|n={}|d={}|m={}|T={}|{kind}", self.n, coords.join(","), self.m, self.code);
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// A stored cell result. `proof` is the certificate or witness JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub verdict: Verdict,
    pub basis: String,
    pub stats: SolveStats,
    pub proof: Option<String>,
    pub digest: String,
}

fn body_digest(key: &str, verdict: Verdict, basis: &str, stats: &SolveStats, proof: &Option<String>) -> String {
    let body = serde_json::json!({ "key": key, "verdict": verdict, "basis": basis, "stats": stats, "proof": proof });
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

impl CacheEntry {
    pub fn new(key: String, verdict: Verdict, basis: String, stats: SolveStats, proof: Option<String>) -> Self {
        let digest = body_digest(&key, verdict, &basis, &stats, &proof);
        Self { key, verdict, basis, stats, proof, digest }
    }

    fn intact(&self) -> bool {
        self.digest == body_digest(&self.key, self.verdict, &self.basis, &self.stats, &self.proof)
    }
}

/// What a cached entry must prove to be reused.
pub struct Expect<'a> {
    pub divisor: &'a crate::divisor::SymDivisorCA,
    pub m: u64,
    pub stratum: &'a Stratum,
    pub kind: CertificateKind,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> crate::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn path_of(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A verified entry, or `None` on a miss or any failed check.
    pub fn load(&self, key: &str, expect: &Expect) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path_of(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.key != key || !entry.intact() {
            return None;
        }
        let proof_ok = match (entry.verdict, expect.kind, &entry.proof) {
            (Verdict::Feasible, kind, Some(p)) => Certificate::parse_json(p).is_ok_and(|c| {
                c.kind == kind
                    && c.m == expect.m
                    && &c.divisor == expect.divisor
                    && &c.stratum == expect.stratum
                    && crate::feasibility::verify_certificate(&c)
            }),
            (Verdict::Infeasible, CertificateKind::Rational, Some(p)) => WitnessRecord::parse_json(p).is_ok_and(|w| {
                w.m == expect.m && &w.divisor == expect.divisor && &w.stratum == expect.stratum && w.verify().unwrap_or(false)
            }),
            // Exhaustive integral searches leave no proof object; the digest
            // is the only guard.
            (Verdict::Infeasible, CertificateKind::Integral, None) => true,
            _ => false,
        };
        proof_ok.then_some(entry)
    }

    pub fn store(&self, entry: &CacheEntry) -> crate::Result<()> {
        let target = self.path_of(&entry.key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            entry.key,
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_string(entry)?)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_every_field() {
        let base = CellKey { n: 8, normalized: vec![1, 2, 3], m: 1, code: "x".into(), kind: CertificateKind::Integral };
        let h = base.hash();
        assert_eq!(h.len(), 64);
        let variants = [
            CellKey { n: 9, ..base.clone() },
            CellKey { normalized: vec![1, 2, 4], ..base.clone() },
            CellKey { m: 2, ..base.clone() },
            CellKey { code: "y".into(), ..base.clone() },
            CellKey { kind: CertificateKind::Rational, ..base.clone() },
        ];
        for v in variants {
            assert_ne!(v.hash(), h);
        }
    }

    #[test]
    fn digest_catches_edits() {
        let mut e = CacheEntry::new("k".into(), Verdict::Infeasible, "search".into(), SolveStats::default(), None);
        assert!(e.intact());
        e.verdict = Verdict::Feasible;
        assert!(!e.intact());
    }
}

//! The base locus of the graphical linear system of `m d`, as a union of
//! maximal boundary strata.
//!
//! A stratum is in the base locus iff its slice has no integral point.
//! Adding members to `T` only adds equalities, so infeasibility passes to
//! finer strata and feasibility to coarser ones. Every F-point orbit is
//! settled first. For each infeasible F-point, subfamilies of `T` are then
//! visited from coarse to fine:
//!
//! - a subfamily containing a known infeasible one is skipped, so every
//!   infeasible subfamily reached is maximal;
//! - a subfamily that refines to an F-point of a feasible orbit is feasible
//!   (random trivalent refinements are tried, compared by canonical code);
//! - anything else gets an exhaustive search.
//!
//! Verdicts are shared between relabelings through canonical codes.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::divisor::SymDivisorCA;
use crate::feasibility::{solve_slice_integral, IlpOutcome, SolveStats};
use crate::strata::{canonical_code, compatible, enumerate_fpoint_orbits, full_set, normalize, orbit_size, LeafSet, Stratum};
use crate::{Error, Result};

/// Random refinements tried per subfamily before searching it directly.
const REFINEMENT_TRIES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseStratum {
    #[serde(rename = "T")]
    pub t: Vec<Vec<usize>>,
    pub code: String,
    pub orbit_size: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseLocus {
    pub n: usize,
    pub m: u64,
    /// Maximal strata with no integral weighting, one per `S_n` orbit,
    /// sorted by canonical code.
    pub strata: Vec<BaseStratum>,
    /// Indices into the F-point orbit list of the F-points in the base locus.
    pub fpoint_orbits: Vec<usize>,
    pub stats: SolveStats,
}

/// Normalized splits of `n` leaves.
fn all_splits(n: usize) -> Vec<LeafSet> {
    (0..=full_set(n)).filter(|&x| x.count_ones() >= 2 && normalize(n, x) == x).collect()
}

/// Extends `s` to a random trivalent tree.
fn random_refinement(n: usize, s: &Stratum, splits: &[LeafSet], rng: &mut ChaCha8Rng) -> Result<Stratum> {
    let mut members: Vec<LeafSet> = s.members().iter().copied().collect();
    while members.len() < n - 3 {
        let choices: Vec<LeafSet> =
            splits.iter().copied().filter(|&x| members.iter().all(|&m| m != x && compatible(n, m, x))).collect();
        let &pick = choices.choose(rng).ok_or_else(|| Error::InvalidStratum("family cannot be refined".into()))?;
        members.push(pick);
    }
    Stratum::new(n, members)
}

pub fn analyze_base_locus(n: usize, d: &SymDivisorCA, m: u64) -> Result<BaseLocus> {
    let orbits = enumerate_fpoint_orbits(n)?;
    let mut stats = SolveStats::default();
    let infeasible_code = |s: &Stratum, stats: &mut SolveStats| -> Result<bool> {
        let (out, st) = solve_slice_integral(n, d, m, s, None)?;
        stats.absorb(&st);
        Ok(out == IlpOutcome::Infeasible)
    };

    let mut memo: HashMap<String, bool> = HashMap::new();
    let mut feasible_fpoints: HashSet<String> = HashSet::new();
    let mut candidates = Vec::new();
    for (k, o) in orbits.iter().enumerate() {
        let code = canonical_code(&o.representative);
        let bad = infeasible_code(&o.representative, &mut stats)?;
        if bad {
            candidates.push(k);
        } else {
            feasible_fpoints.insert(code.clone());
        }
        memo.insert(code, bad);
    }

    let splits = all_splits(n);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut found: HashMap<String, Stratum> = HashMap::new();
    for &k in &candidates {
        let f = &orbits[k].representative;
        let members: Vec<LeafSet> = f.members().iter().copied().collect();
        if members.len() >= 64 {
            return Err(Error::Domain("too many members for subfamily search".into()));
        }
        let mut masks: Vec<u64> = (1..1u64 << members.len()).collect();
        masks.sort_by_key(|&x| (x.count_ones(), x));
        let mut infeasible: Vec<u64> = Vec::new();
        for mask in masks {
            if infeasible.iter().any(|&z| z & mask == z) {
                continue;
            }
            let s = Stratum::new(n, (0..members.len()).filter(|&i| mask >> i & 1 == 1).map(|i| members[i]))?;
            let code = canonical_code(&s);
            let bad = match memo.get(&code) {
                Some(&v) => v,
                None => {
                    let mut refines_feasible = false;
                    for _ in 0..REFINEMENT_TRIES {
                        if feasible_fpoints.contains(&canonical_code(&random_refinement(n, &s, &splits, &mut rng)?)) {
                            refines_feasible = true;
                            break;
                        }
                    }
                    let v = !refines_feasible && infeasible_code(&s, &mut stats)?;
                    memo.insert(code.clone(), v);
                    v
                }
            };
            if bad {
                infeasible.push(mask);
                found.entry(code).or_insert(s);
            }
        }
    }

    let mut strata: Vec<BaseStratum> = found
        .into_iter()
        .map(|(code, s)| BaseStratum { t: s.subsets(), orbit_size: orbit_size(&s), code })
        .collect();
    strata.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(BaseLocus { n, m, strata, fpoint_orbits: candidates, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::set_of;

    #[test]
    fn refinements_are_fpoints_containing_the_family() {
        let s = Stratum::new(9, [set_of(&[1, 2, 3]), set_of(&[4, 5])]).unwrap();
        let splits = all_splits(9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let f = random_refinement(9, &s, &splits, &mut rng).unwrap();
            assert!(f.is_fpoint());
            assert!(s.members().is_subset(f.members()));
        }
    }
}

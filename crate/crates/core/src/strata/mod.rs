//! Boundary strata and F-points.
//!
//! A stratum is the intersection of boundary divisors `B_I` for `I` in a
//! family `T` of pairwise compatible leaf subsets. Subsets are `u32`
//! bitmasks with leaf `i` (1-based) at bit `i - 1`. Every member is stored
//! normalized: the smaller side of the split, and for `|I| = n/2` the side
//! containing leaf 1 (the lexicographically smaller one).

mod canon;
mod orbit;
mod tree;

pub use canon::canonical_code;
pub use orbit::{enumerate_fpoint_orbits, find_automorphism, orbit_size, stabilizer_order, FPointOrbit};
pub use tree::{tree_to_stratum, StableTree};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::divisor::MAX_N;
use crate::{Error, Result};

/// Bitmask of leaves; leaf `i` is bit `i - 1`.
pub type LeafSet = u32;

pub fn full_set(n: usize) -> LeafSet {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Representative of the split `{I, I^c}` used as the stored member.
pub fn normalize(n: usize, set: LeafSet) -> LeafSet {
    let comp = full_set(n) ^ set;
    let k = set.count_ones() as usize;
    if 2 * k < n || (2 * k == n && set & 1 == 1) {
        set
    } else {
        comp
    }
}

/// Two splits are compatible when one of the four quadrants is empty.
pub fn compatible(n: usize, a: LeafSet, b: LeafSet) -> bool {
    let full = full_set(n);
    let (ac, bc) = (full ^ a, full ^ b);
    a & b == 0 || a & bc == 0 || ac & b == 0 || ac & bc == 0
}

pub fn leaves_of(set: LeafSet) -> Vec<usize> {
    (0..32).filter(|i| set >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn set_of(leaves: &[usize]) -> LeafSet {
    leaves.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

/// A boundary stratum given by its normalized index family `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum {
    n: usize,
    members: BTreeSet<LeafSet>,
}

impl Stratum {
    /// Normalizes every member and checks sizes and pairwise compatibility.
    /// The empty family (the open stratum) is allowed here; consumers that
    /// need a proper boundary stratum reject it.
    pub fn new(n: usize, members: impl IntoIterator<Item = LeafSet>) -> Result<Self> {
        if !(4..=MAX_N).contains(&n) {
            return Err(Error::InvalidStratum(format!("n must lie in 4..={MAX_N}, got {n}")));
        }
        let full = full_set(n);
        let mut set = BTreeSet::new();
        for m in members {
            if m & !full != 0 {
                return Err(Error::InvalidStratum(format!("subset {:?} has leaves beyond n={n}", leaves_of(m))));
            }
            let norm = normalize(n, m);
            let k = norm.count_ones() as usize;
            if k < 2 {
                return Err(Error::InvalidStratum(format!("subset {:?} splits off fewer than two leaves", leaves_of(m))));
            }
            if !set.insert(norm) {
                return Err(Error::InvalidStratum(format!("subset {:?} listed twice", leaves_of(norm))));
            }
        }
        for &a in &set {
            for &b in &set {
                if a < b && !compatible(n, a, b) {
                    return Err(Error::InvalidStratum(format!(
                        "subsets {:?} and {:?} are not compatible",
                        leaves_of(a),
                        leaves_of(b)
                    )));
                }
            }
        }
        Ok(Self { n, members: set })
    }

    /// Builds from 1-based leaf lists.
    pub fn from_subsets(n: usize, subsets: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(subsets.len());
        for s in subsets {
            let mut mask: LeafSet = 0;
            for &i in s {
                if i == 0 || i > n {
                    return Err(Error::InvalidStratum(format!("leaf {i} outside 1..={n}")));
                }
                if mask >> (i - 1) & 1 == 1 {
                    return Err(Error::InvalidStratum(format!("leaf {i} repeated in {s:?}")));
                }
                mask |= 1 << (i - 1);
            }
            masks.push(mask);
        }
        Self::new(n, masks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<LeafSet> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True for a zero-dimensional stratum (a maximal compatible family).
    pub fn is_fpoint(&self) -> bool {
        self.members.len() == self.n - 3
    }

    /// Members as sorted 1-based leaf lists, ordered by size then lexicographically.
    pub fn subsets(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.members.iter().map(|&m| leaves_of(m)).collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// Image under the leaf permutation `perm`, where `perm[i]` is the
    /// 0-based image of 0-based leaf `i`.
    pub fn permute(&self, perm: &[usize]) -> Stratum {
        assert_eq!(perm.len(), self.n);
        let members = self.members.iter().map(|&m| normalize(self.n, permute_set(m, perm))).collect();
        Stratum { n: self.n, members }
    }

    /// The stratum obtained by dropping one member (contracting one tree edge).
    pub fn without(&self, member: LeafSet) -> Stratum {
        let mut members = self.members.clone();
        members.remove(&member);
        Stratum { n: self.n, members }
    }

    /// Number of members of `T` separating leaves `i` and `j` (0-based).
    pub fn separation(&self, i: usize, j: usize) -> usize {
        self.members.iter().filter(|&&m| (m >> i & 1) != (m >> j & 1)).count()
    }

    /// Opaque canonical code of the underlying unlabeled tree.
    pub fn shape_code(&self) -> String {
        canonical_code(self)
    }

    pub fn to_json_value(&self) -> StratumJson {
        StratumJson { n: self.n, t: self.subsets() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("stratum JSON is always serializable")
    }

    pub fn from_json_value(v: &StratumJson) -> Result<Self> {
        Self::from_subsets(v.n, &v.t)
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let v: StratumJson = serde_json::from_str(s)?;
        Self::from_json_value(&v)
    }
}

pub(crate) fn permute_set(set: LeafSet, perm: &[usize]) -> LeafSet {
    let mut out = 0;
    let mut rest = set;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out |= 1 << perm[i];
        rest &= rest - 1;
    }
    out
}

/// Wire form `{"n":12,"T":[[1,2],[1,2,3],...]}` with 1-based sorted subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumJson {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: Vec<Vec<usize>>,
}

/// True iff `s1` lies in the closure of `s2`, i.e. `T(s2)` is a subfamily of `T(s1)`.
pub fn stratum_closure_order(s1: &Stratum, s2: &Stratum) -> Result<bool> {
    if s1.n != s2.n {
        return Err(Error::InvalidStratum(format!("n mismatch: {} vs {}", s1.n, s2.n)));
    }
    Ok(s2.members.is_subset(&s1.members))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize(6, set_of(&[4, 5, 6])), set_of(&[1, 2, 3]));
        assert_eq!(normalize(6, set_of(&[1, 2, 3, 4])), set_of(&[5, 6]));
        assert_eq!(normalize(6, set_of(&[2, 3, 4])), set_of(&[1, 5, 6]));
        assert_eq!(normalize(7, set_of(&[4, 5, 6, 7])), set_of(&[1, 2, 3]));
    }

    #[test]
    fn validation() {
        assert!(Stratum::from_subsets(6, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Stratum::from_subsets(6, &[vec![1]]).is_err());
        assert!(Stratum::from_subsets(6, &[vec![1, 7]]).is_err());
        assert!(Stratum::from_subsets(6, &[vec![1, 2, 3], vec![4, 5, 6]]).is_err());
        assert!(Stratum::from_subsets(6, &[vec![1, 1]]).is_err());
        let s = Stratum::from_subsets(6, &[vec![1, 2], vec![1, 2, 3], vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(s.subsets(), vec![vec![1, 2], vec![5, 6], vec![1, 2, 3]]);
        assert!(s.is_fpoint());
    }

    #[test]
    fn closure_order() {
        let f = Stratum::from_subsets(6, &[vec![1, 2], vec![1, 2, 3], vec![5, 6]]).unwrap();
        let single = Stratum::from_subsets(6, &[vec![5, 6]]).unwrap();
        assert!(stratum_closure_order(&f, &single).unwrap());
        assert!(!stratum_closure_order(&single, &f).unwrap());
        let other = Stratum::from_subsets(7, &[vec![5, 6]]).unwrap();
        assert!(stratum_closure_order(&f, &other).is_err());

        let triples = Stratum::from_subsets(12, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9], vec![10, 11, 12]]).unwrap();
        let ex = example_fpoint();
        assert!(stratum_closure_order(&ex, &triples).unwrap());
        assert!(!stratum_closure_order(&triples, &ex).unwrap());
        for &m in ex.members() {
            assert!(stratum_closure_order(&ex, &Stratum::new(12, [m]).unwrap()).unwrap());
        }
    }

    pub(crate) fn example_fpoint() -> Stratum {
        Stratum::from_subsets(
            12,
            &[
                vec![1, 2],
                vec![1, 2, 3],
                vec![4, 5],
                vec![4, 5, 6],
                vec![1, 2, 3, 4, 5, 6],
                vec![7, 8],
                vec![7, 8, 9],
                vec![10, 11],
                vec![10, 11, 12],
            ],
        )
        .unwrap()
    }

    #[test]
    fn json_roundtrip() {
        let s = example_fpoint();
        let j = s.to_json();
        assert!(j.starts_with(r#"{"n":12,"T":[[1,2],[4,5],[7,8],[10,11],[1,2,3]"#), "{j}");
        assert_eq!(Stratum::parse_json(&j).unwrap(), s);
        assert!(Stratum::parse_json(r#"{"n":12,"T":[[0,1]]}"#).is_err());
        assert!(Stratum::parse_json(r#"{"n":12}"#).is_err());
    }

    proptest! {
        #[test]
        fn stratum_parser_never_panics(s in "\\PC{0,80}") {
            let _ = Stratum::parse_json(&s);
        }

        #[test]
        fn permutation_preserves_compatibility(seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..12).collect();
            perm.shuffle(&mut rng);
            let img = example_fpoint().permute(&perm);
            let again = Stratum::new(12, img.members().iter().copied()).unwrap();
            prop_assert_eq!(again.len(), 9);
        }
    }
}

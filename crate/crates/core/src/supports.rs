//! Support systems `(A_1, ..., A_k)` and their JSON form.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LatticePoint;

/// Version of the JSON input/report schema.
pub const SCHEMA_VERSION: &str = "1";

/// A finite set of exponent vectors. Points keep their first-seen order;
/// duplicates collapse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Support {
    points: Vec<LatticePoint>,
}

impl Support {
    pub fn new(points: Vec<LatticePoint>) -> Self {
        let mut seen = HashSet::new();
        let points = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
        Support { points }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn nonzero_points(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter().filter(|p| !p.is_zero())
    }

    pub fn contains_zero(&self) -> bool {
        self.points.iter().any(LatticePoint::is_zero)
    }
}

impl<P: Into<LatticePoint>> FromIterator<P> for Support {
    fn from_iter<T: IntoIterator<Item = P>>(iter: T) -> Self {
        Support::new(iter.into_iter().map(Into::into).collect())
    }
}

/// Ambient dimension `n` and an ordered list of supports in `Z^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportSystem {
    n: usize,
    supports: Vec<Support>,
}

impl SupportSystem {
    /// Validates dimensions. Empty supports are rejected; an empty list of
    /// supports is allowed (it arises when a reduction contracts everything).
    pub fn new(n: usize, supports: Vec<Support>) -> Result<Self> {
        for (index, s) in supports.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::EmptySupport { index: index + 1 });
            }
            for p in s.points() {
                if p.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: p.dim(),
                    });
                }
            }
        }
        Ok(SupportSystem { n, supports })
    }

    /// Convenience constructor from nested coordinate lists.
    pub fn from_coords(n: usize, supports: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        SupportSystem::new(
            n,
            supports
                .into_iter()
                .map(|s| s.into_iter().map(LatticePoint::from).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    pub fn support(&self, j: usize) -> &Support {
        &self.supports[j]
    }

    pub fn is_normalized(&self) -> bool {
        self.supports.iter().all(Support::contains_zero)
    }

    /// All points of the supports indexed by `subset` (0-based).
    pub fn union_points(&self, subset: &[usize]) -> Vec<LatticePoint> {
        subset
            .iter()
            .flat_map(|&j| self.supports[j].points().iter().cloned())
            .collect()
    }

    /// The subsystem `(A_j)_{j ∈ subset}` in the same ambient lattice.
    pub fn subsystem(&self, subset: &[usize]) -> SupportSystem {
        SupportSystem {
            n: self.n,
            supports: subset.iter().map(|&j| self.supports[j].clone()).collect(),
        }
    }

    /// Appends another support (used by cross-check oracles).
    pub fn with_support(&self, extra: Support) -> Result<SupportSystem> {
        let mut supports = self.supports.clone();
        supports.push(extra);
        SupportSystem::new(self.n, supports)
    }

    /// Applies a map to every point of every support, landing in `Z^m`.
    pub fn map_points(
        &self,
        m: usize,
        mut f: impl FnMut(&LatticePoint) -> Result<LatticePoint>,
    ) -> Result<SupportSystem> {
        let supports = self
            .supports
            .iter()
            .map(|s| {
                s.points()
                    .iter()
                    .map(&mut f)
                    .collect::<Result<Vec<_>>>()
                    .map(Support::new)
            })
            .collect::<Result<Vec<_>>>()?;
        SupportSystem::new(m, supports)
    }
}

/// Translates every support by its lexicographically smallest point so
/// that it contains the origin. Support order and point order are kept.
pub fn normalize(system: &SupportSystem) -> Result<SupportSystem> {
    let supports = system
        .supports
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let shift = s
                .points()
                .iter()
                .min()
                .ok_or(Error::EmptySupport { index: index + 1 })?;
            Ok(Support::new(s.points().iter().map(|p| p.sub(shift)).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    SupportSystem::new(system.n, supports)
}

/// A subset `J ⊆ [k]`, stored 0-based and sorted; reported 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetWitness(Vec<usize>);

impl SubsetWitness {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        SubsetWitness(indices)
    }

    pub fn from_mask(mask: u64) -> Self {
        SubsetWitness((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    /// Builds from 1-based indices as they appear in reports.
    pub fn from_one_based(indices: &[usize]) -> Self {
        SubsetWitness::new(indices.iter().map(|&i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

impl fmt::Debug for SubsetWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_based())
    }
}

/// On-disk form. Lifts stay as strings here; the tropical module parses
/// them into rationals.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    pub supports: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<Vec<Vec<String>>>,
}

impl SystemFile {
    pub fn from_system(system: &SupportSystem) -> Self {
        SystemFile {
            n: system.n,
            supports: system
                .supports
                .iter()
                .map(|s| s.points().iter().map(|p| p.0.clone()).collect())
                .collect(),
            lifts: None,
        }
    }

    pub fn to_system(&self) -> Result<SupportSystem> {
        if self.supports.is_empty() {
            return Err(Error::Parse("field `supports` must list at least one support".into()));
        }
        SupportSystem::from_coords(self.n, self.supports.clone())
    }
}

pub(crate) fn parse_file(json_text: &str) -> Result<SystemFile> {
    serde_json::from_str(json_text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses the canonical JSON schema. Points are not translated; call
/// [`normalize`] afterwards.
pub fn parse(json_text: &str) -> Result<SupportSystem> {
    parse_file(json_text)?.to_system()
}

/// Canonical single-line JSON.
pub fn serialize(system: &SupportSystem) -> String {
    serde_json::to_string(&SystemFile::from_system(system)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_removes_monomial_factor() {
        // a x + b x^2 + c x y
        let s = SupportSystem::from_coords(2, vec![vec![vec![1, 0], vec![2, 0], vec![1, 1]]]).unwrap();
        let n = normalize(&s).unwrap();
        let expected: Support = [[0, 0], [1, 0], [0, 1]].into_iter().collect();
        assert_eq!(n.support(0), &expected);
    }

    #[test]
    fn normalize_keeps_supports_through_origin() {
        let s = SupportSystem::from_coords(1, vec![vec![vec![0], vec![1]]]).unwrap();
        assert_eq!(normalize(&s).unwrap(), s);
    }

    #[test]
    fn normalize_dedupes_then_translates() {
        let s = SupportSystem::from_coords(2, vec![vec![vec![1, 1], vec![1, 1]]]).unwrap();
        let n = normalize(&s).unwrap();
        assert_eq!(n.support(0).points(), &[LatticePoint::zero(2)]);
    }

    #[test]
    fn normalize_is_idempotent() {
        let s =
            SupportSystem::from_coords(2, vec![vec![vec![3, -1], vec![0, 2], vec![1, 1]], vec![vec![5, 5]]]).unwrap();
        let once = normalize(&s).unwrap();
        assert_eq!(normalize(&once).unwrap(), once);
        assert!(once.is_normalized());
    }

    #[test]
    fn parse_examples() {
        let s = parse(r#"{"n":2,"supports":[[[0,0],[1,0],[0,1]]]}"#).unwrap();
        assert_eq!(s.k(), 1);
        assert_eq!(s.support(0).len(), 3);

        assert!(matches!(parse(r#"{"supports":[[[0,0]]]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse(r#"{"n":2,"supports":[[[0,0],[1,0,0]]]}"#),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(matches!(
            parse(r#"{"n":1,"supports":[[[0]]],"extra":1}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse(r#"{"n":1,"supports":[[[0]],[]]}"#),
            Err(Error::EmptySupport { index: 2 })
        ));
        assert!(matches!(parse("{not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn serialize_round_trips_canonical_text() {
        let text = r#"{"n":2,"supports":[[[0,0],[1,0],[0,1]],[[0,0],[1,1]]]}"#;
        assert_eq!(serialize(&parse(text).unwrap()), text);
    }

    #[test]
    fn subset_witness_is_sorted_and_one_based() {
        let w = SubsetWitness::new(vec![2, 0, 2]);
        assert_eq!(w.indices(), &[0, 2]);
        assert_eq!(w.one_based(), vec![1, 3]);
        assert_eq!(w.mask(), 0b101);
        assert_eq!(SubsetWitness::from_mask(0b101), w);
    }
}

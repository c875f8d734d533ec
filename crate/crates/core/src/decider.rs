//! Generic primeness from supports.
//!
//! For every nonempty `J ⊆ [k]` one of the following must hold:
//!
//! 1. `rank(∪_{j∈J} A_j) ≥ |J| + 1`, or
//! 2. `rank(∪_{j∈J} A_j) = |J|` and the mixed volume of `(conv A_j)_{j∈J}`
//!    in the saturated lattice of that span is 1.
//!
//! If some `J` has rank below `|J|` the generic ideal is the unit ideal.
//! If some tight `J` has mixed volume at least 2 the radical is not prime.
//! Otherwise the generic ideal is prime in characteristic 0 (and has prime
//! radical over any algebraically closed field).
//!
//! [`decide`] tries the DMIT test first and enumerates subsets only when it
//! fails.

use std::fmt;

use crate::dmit::{is_dmit, DmitReport};
use crate::error::{Error, Result};
use crate::linalg::{quotient_coordinates, rank, saturated_lattice_basis};
use crate::polytope::{restricted_mixed_volume, MixedVolume};
use crate::supports::{normalize, SubsetWitness, Support, SupportSystem};
use crate::transversal::{UnionRanks, DEFAULT_ENUMERATION_LIMIT};

pub const PRIME_NOTE: &str = "prime in characteristic 0; radical prime over any algebraically closed field";
pub const UNIT_NOTE: &str = "unit ideal over any algebraically closed field";
pub const NOT_PRIME_NOTE: &str =
    "radical not prime over any algebraically closed field; in characteristic p > 0 primeness can fail for further reasons";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    GenericUnitIdeal,
    GenericallyPrime,
    GenericallyNotPrime,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::GenericUnitIdeal => "generic-unit-ideal",
            VerdictKind::GenericallyPrime => "generically-prime",
            VerdictKind::GenericallyNotPrime => "generically-not-prime",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<SubsetWitness>,
    pub mixed_volume: Option<MixedVolume>,
    pub char_note: &'static str,
}

impl Verdict {
    fn prime() -> Self {
        Verdict {
            kind: VerdictKind::GenericallyPrime,
            witness: None,
            mixed_volume: None,
            char_note: PRIME_NOTE,
        }
    }

    pub fn is_prime(&self) -> bool {
        self.kind == VerdictKind::GenericallyPrime
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    /// Largest `k` for which subsets are enumerated.
    pub enumeration_limit: usize,
    /// Try the polynomial-time DMIT test before enumerating.
    pub dmit_fast_path: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            dmit_fast_path: true,
        }
    }
}

/// Decides a normalized system with default options.
pub fn decide(system: &SupportSystem) -> Result<Verdict> {
    decide_with(system, &DecideOptions::default())
}

pub fn decide_with(system: &SupportSystem, options: &DecideOptions) -> Result<Verdict> {
    if system.k() == 0 {
        return Ok(Verdict::prime());
    }
    if options.dmit_fast_path && is_dmit(system)?.holds {
        return Ok(Verdict::prime());
    }
    let ranks = UnionRanks::compute(system, options.enumeration_limit)?;
    if let Some(j) = ranks.subsets().find(|j| ranks.rank_of(j) < j.len()) {
        return Ok(Verdict {
            kind: VerdictKind::GenericUnitIdeal,
            witness: Some(j),
            mixed_volume: None,
            char_note: UNIT_NOTE,
        });
    }
    for j in ranks.subsets().filter(|j| ranks.rank_of(j) == j.len()) {
        let mv = restricted_mixed_volume(system, &j)?;
        if mv.value() >= 2 {
            return Ok(Verdict {
                kind: VerdictKind::GenericallyNotPrime,
                witness: Some(j),
                mixed_volume: Some(mv),
                char_note: NOT_PRIME_NOTE,
            });
        }
    }
    Ok(Verdict::prime())
}

/// Every tight subset (`rank = |J|`) whose restricted mixed volume is 1.
pub fn tight_unimodular_subsets(system: &SupportSystem, limit: usize) -> Result<Vec<SubsetWitness>> {
    let ranks = UnionRanks::compute(system, limit)?;
    let mut out = Vec::new();
    for j in ranks.subsets().filter(|j| ranks.rank_of(j) == j.len()) {
        if restricted_mixed_volume(system, &j)?.value() == 1 {
            out.push(j);
        }
    }
    Ok(out)
}

/// The largest (possibly empty) `K` with `rank(∪_{j∈K} A_j) = |K|` and
/// mixed volume 1. Only defined when the system is generically prime,
/// where the tight mixed-volume-1 subsets are closed under union.
pub fn maximal_unimodular_subset(system: &SupportSystem) -> Result<SubsetWitness> {
    maximal_unimodular_subset_with(system, &DecideOptions::default())
}

pub fn maximal_unimodular_subset_with(system: &SupportSystem, options: &DecideOptions) -> Result<SubsetWitness> {
    let verdict = decide_with(system, options)?;
    if !verdict.is_prime() {
        return Err(Error::PreconditionFailed(format!(
            "maximal unimodular subset needs a generically prime system, verdict is {}",
            verdict.kind
        )));
    }
    if system.k() == 0 || (options.dmit_fast_path && is_dmit(system)?.holds) {
        // DMIT leaves no tight subsets
        return Ok(SubsetWitness::default());
    }
    let tight = tight_unimodular_subsets(system, options.enumeration_limit)?;
    Ok(SubsetWitness::new(
        tight.iter().flat_map(|j| j.indices().iter().copied()).collect(),
    ))
}

/// Contracts `K`: the supports outside `K` mapped to `Z^n / (span ∩ Z^n)`
/// of `∪_{j∈K} A_j`, then normalized. Requires `rank = |K|`.
pub fn reduce_by(system: &SupportSystem, contracted: &SubsetWitness) -> Result<SupportSystem> {
    if contracted.is_empty() {
        return Ok(system.clone());
    }
    let points = system.union_points(contracted.indices());
    let r = rank(&points)?;
    if r != contracted.len() {
        return Err(Error::RankMismatch {
            rank: r,
            expected: contracted.len(),
        });
    }
    let basis = saturated_lattice_basis(&points)?;
    let remaining = (0..system.k())
        .filter(|j| !contracted.contains(*j))
        .map(|j| quotient_coordinates(system.support(j).points(), &basis).map(Support::new))
        .collect::<Result<Vec<_>>>()?;
    normalize(&SupportSystem::new(system.n() - r, remaining)?)
}

/// Evidence for a generically prime verdict: the contracted subset, the
/// reduced system and its DMIT certificate.
#[derive(Clone, Debug)]
pub struct PrimeCertificate {
    pub maximal_subset: SubsetWitness,
    pub reduced: SupportSystem,
    pub reduced_dmit: DmitReport,
}

pub fn prime_certificate(system: &SupportSystem, options: &DecideOptions) -> Result<PrimeCertificate> {
    let maximal_subset = maximal_unimodular_subset_with(system, options)?;
    let reduced = reduce_by(system, &maximal_subset)?;
    let reduced_dmit = is_dmit(&reduced)?;
    Ok(PrimeCertificate {
        maximal_subset,
        reduced,
        reduced_dmit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, s: Vec<Vec<Vec<i64>>>) -> SupportSystem {
        normalize(&SupportSystem::from_coords(n, s).unwrap()).unwrap()
    }

    #[test]
    fn coordinate_segments_are_prime_with_tight_full_set() {
        let s = sys(2, vec![vec![vec![0, 0], vec![1, 0]], vec![vec![0, 0], vec![0, 1]]]);
        assert!(decide(&s).unwrap().is_prime());
        assert_eq!(maximal_unimodular_subset(&s).unwrap(), SubsetWitness::new(vec![0, 1]));
        let reduced = reduce_by(&s, &SubsetWitness::new(vec![0, 1])).unwrap();
        assert_eq!(reduced.k(), 0);
        assert_eq!(reduced.n(), 0);
    }

    #[test]
    fn affine_curve_has_empty_maximal_subset() {
        let s = sys(2, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]]);
        assert_eq!(maximal_unimodular_subset(&s).unwrap(), SubsetWitness::default());
    }

    #[test]
    fn segment_plus_plane() {
        let s = sys(
            3,
            vec![
                vec![vec![0, 0, 0], vec![1, 0, 0]],
                vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            ],
        );
        assert!(decide(&s).unwrap().is_prime());
        assert_eq!(maximal_unimodular_subset(&s).unwrap(), SubsetWitness::new(vec![0]));
        let reduced = reduce_by(&s, &SubsetWitness::new(vec![0])).unwrap();
        assert_eq!(reduced.n(), 2);
        let expected: Support = [[0, 0], [1, 0], [0, 1]].into_iter().collect();
        assert_eq!(reduced.support(0), &expected);
        assert!(is_dmit(&reduced).unwrap().holds);
    }

    #[test]
    fn reduce_by_nothing_is_identity() {
        let s = sys(2, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]]);
        assert_eq!(reduce_by(&s, &SubsetWitness::default()).unwrap(), s);
    }

    #[test]
    fn reduce_rejects_non_tight_sets() {
        let s = sys(2, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]]);
        assert_eq!(
            reduce_by(&s, &SubsetWitness::new(vec![0])),
            Err(Error::RankMismatch { rank: 2, expected: 1 })
        );
    }

    #[test]
    fn non_prime_system_has_no_maximal_subset() {
        let s = sys(1, vec![vec![vec![0], vec![2]]]);
        let v = decide(&s).unwrap();
        assert_eq!(v.kind, VerdictKind::GenericallyNotPrime);
        assert_eq!(v.mixed_volume, Some(MixedVolume(2)));
        assert!(matches!(
            maximal_unimodular_subset(&s),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn more_supports_than_variables_is_unit() {
        let seg = vec![vec![0], vec![1]];
        let s = sys(1, vec![seg.clone(), seg]);
        let v = decide(&s).unwrap();
        assert_eq!(v.kind, VerdictKind::GenericUnitIdeal);
        assert_eq!(v.witness, Some(SubsetWitness::new(vec![0, 1])));
    }

    #[test]
    fn fast_path_and_enumeration_agree_on_a_prime_system() {
        let s = sys(
            3,
            vec![
                vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 0, 0], vec![1, 1, 0], vec![0, 0, 1]],
            ],
        );
        let slow = DecideOptions {
            dmit_fast_path: false,
            ..DecideOptions::default()
        };
        assert_eq!(decide(&s).unwrap(), decide_with(&s, &slow).unwrap());
    }

    #[test]
    fn dmit_systems_skip_the_enumeration_bound() {
        let plane = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let s = sys(3, vec![plane.clone(), plane]);
        let tight = DecideOptions {
            enumeration_limit: 1,
            ..DecideOptions::default()
        };
        assert!(decide_with(&s, &tight).unwrap().is_prime());
        let slow = DecideOptions {
            enumeration_limit: 1,
            dmit_fast_path: false,
        };
        assert_eq!(decide_with(&s, &slow), Err(Error::TooLarge { k: 2, limit: 1 }));
    }
}

//! The dragon marriage independent transversal (DMIT) condition:
//! `rank(∪_{j∈J} A_j) ≥ |J| + 1` for every nonempty `J`.
//!
//! [`is_dmit`] is the polynomial-time test. For each `j` and each nonzero
//! `u ∈ A_j` it projects `A_1, ..., A_j` along `u` and asks for an
//! independent transversal of the projection. [`dmit_bruteforce`]
//! enumerates subsets directly.

use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::{projection_along, LatticePoint};
use crate::supports::{SubsetWitness, SupportSystem};
use crate::transversal::{max_partial_transversal, UnionRanks, DEFAULT_ENUMERATION_LIMIT};

/// Witness for one index `j`: `v_1 ∈ A_1, ..., v_{j-1} ∈ A_{j-1}` and
/// `u_1, u_2 ∈ A_j`, all linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmitWitness {
    /// 0-based support index `j`.
    pub index: usize,
    pub earlier: Vec<LatticePoint>,
    pub first: LatticePoint,
    pub second: LatticePoint,
}

impl DmitWitness {
    pub fn vectors(&self) -> Vec<LatticePoint> {
        let mut v = self.earlier.clone();
        v.push(self.first.clone());
        v.push(self.second.clone());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmitReport {
    pub holds: bool,
    /// A `J` with `rank(∪_{j∈J} A_j) ≤ |J|`, when the condition fails.
    pub violating_set: Option<SubsetWitness>,
    /// One witness per support, when the condition holds.
    pub certificate: Option<Vec<DmitWitness>>,
}

enum Check {
    Pass(Vec<LatticePoint>),
    Fail(SubsetWitness),
}

/// Projects `A_1..=A_j` along `u` and looks for an independent transversal.
fn check_pair(system: &SupportSystem, j: usize, u: &LatticePoint) -> Result<Check> {
    let phi = projection_along(u)?;
    let prefix: Vec<usize> = (0..=j).collect();
    let projected = system
        .subsystem(&prefix)
        .map_points(phi.target_dim(), |p| phi.apply(p))?;
    let t = max_partial_transversal(&projected);
    match t.tight_set {
        Some(tight) => Ok(Check::Fail(tight)),
        None => {
            // lift: pick the original point behind each projected choice
            let lifted = t
                .choices
                .iter()
                .map(|(i, image)| {
                    system
                        .support(*i)
                        .points()
                        .iter()
                        .find(|p| phi.apply(p).as_ref() == Ok(image))
                        .cloned()
                        .expect("projected choice has a preimage")
                })
                .collect();
            Ok(Check::Pass(lifted))
        }
    }
}

/// Decides DMIT by projections and matroid intersection.
///
/// Every `(j, u)` pair with `u ≠ 0` is checked. A support with no nonzero
/// point fails outright with violating set `{j}`.
pub fn is_dmit(system: &SupportSystem) -> Result<DmitReport> {
    let mut certificate = Vec::with_capacity(system.k());
    for j in 0..system.k() {
        let mut nonzero = system.support(j).nonzero_points();
        let Some(u) = nonzero.next() else {
            return Ok(failure(SubsetWitness::new(vec![j])));
        };
        let others: Vec<&LatticePoint> = nonzero.collect();
        // the certificate comes from the first nonzero point
        let lifted = match check_pair(system, j, u)? {
            Check::Fail(tight) => return Ok(failure(tight)),
            Check::Pass(lifted) => lifted,
        };
        let failed = others
            .par_iter()
            .map(|w| check_pair(system, j, w))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find_map(|c| match c {
                Check::Fail(tight) => Some(tight),
                Check::Pass(_) => None,
            });
        if let Some(tight) = failed {
            return Ok(failure(tight));
        }
        let mut earlier = lifted;
        let first = earlier.pop().expect("transversal of A_1..=A_j is nonempty");
        certificate.push(DmitWitness {
            index: j,
            earlier,
            first,
            second: u.clone(),
        });
    }
    Ok(DmitReport {
        holds: true,
        violating_set: None,
        certificate: Some(certificate),
    })
}

fn failure(violating: SubsetWitness) -> DmitReport {
    DmitReport {
        holds: false,
        violating_set: Some(violating),
        certificate: None,
    }
}

/// Smallest nonempty `J` (by size, then lexicographically) with
/// `rank(∪_{j∈J} A_j) ≤ |J|`.
pub fn dmit_bruteforce(system: &SupportSystem) -> Result<Option<SubsetWitness>> {
    dmit_bruteforce_with_limit(system, DEFAULT_ENUMERATION_LIMIT)
}

pub fn dmit_bruteforce_with_limit(system: &SupportSystem, limit: usize) -> Result<Option<SubsetWitness>> {
    let ranks = UnionRanks::compute(system, limit)?;
    let found = ranks.subsets().find(|j| ranks.rank_of(j) <= j.len());
    Ok(found)
}

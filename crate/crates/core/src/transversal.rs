//! Independent transversals: one vector from each support, all linearly
//! independent.
//!
//! The polynomial-time route is matroid intersection of the linear matroid
//! on the (nonzero) support points with the partition matroid that allows
//! one point per support. The brute-force route enumerates subsets `J` and
//! checks `rank(∪_{j∈J} A_j) ≥ |J|`; the two agree by Rado's theorem.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rational, EchelonBasis, LatticePoint};
use crate::supports::{SubsetWitness, SupportSystem};

/// Default bound on `k` for exponential subset enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

/// Result of [`max_partial_transversal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTransversal {
    /// Largest number of supports admitting an independent choice.
    pub size: usize,
    /// `(support index, chosen point)`, sorted by support index.
    pub choices: Vec<(usize, LatticePoint)>,
    /// A subset attaining the Rado bound, present only when `size < k`.
    pub tight_set: Option<SubsetWitness>,
}

/// Either an explicit transversal or a subset whose union is too small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransversalCertificate {
    Choices(Vec<(usize, LatticePoint)>),
    ViolatingSet(SubsetWitness),
}

struct Element {
    support: usize,
    point: LatticePoint,
}

/// Maximum partial independent transversal by augmenting paths.
pub fn max_partial_transversal(system: &SupportSystem) -> PartialTransversal {
    let k = system.k();
    let n = system.n();
    let elements: Vec<Element> = system
        .supports()
        .iter()
        .enumerate()
        .flat_map(|(j, s)| {
            s.nonzero_points().map(move |p| Element {
                support: j,
                point: p.clone(),
            })
        })
        .collect();
    let vectors: Vec<_> = elements.iter().map(|e| rational(&e.point)).collect();
    let m = elements.len();
    let mut in_set = vec![false; m];
    let mut holder: Vec<Option<usize>> = vec![None; k];

    loop {
        let members: Vec<usize> = (0..m).filter(|&e| in_set[e]).collect();
        let mut basis = EchelonBasis::with_tracking(n);
        for &e in &members {
            basis.insert(&vectors[e]);
        }
        // exchange graph: y -> x when I - y + x stays independent
        let mut free = vec![false; m];
        let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); m];
        for x in (0..m).filter(|&x| !in_set[x]) {
            let (rem, comb) = basis.reduce(&vectors[x]);
            if rem.iter().any(|c| !c.is_zero()) {
                free[x] = true;
            } else {
                for (pos, &y) in members.iter().enumerate() {
                    if !comb[pos].is_zero() {
                        out_of[y].push(x);
                    }
                }
            }
        }
        // x -> y when y holds x's support
        for x in (0..m).filter(|&x| !in_set[x]) {
            if let Some(y) = holder[elements[x].support] {
                out_of[x].push(y);
            }
        }
        let is_sink = |x: usize| !in_set[x] && holder[elements[x].support].is_none();

        let mut prev: Vec<Option<usize>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::new();
        for x in (0..m).filter(|&x| free[x]) {
            seen[x] = true;
            queue.push_back(x);
        }
        let mut end = None;
        while let Some(v) = queue.pop_front() {
            if is_sink(v) {
                end = Some(v);
                break;
            }
            for &w in &out_of[v] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }

        match end {
            Some(mut v) => {
                let mut path = vec![v];
                while let Some(p) = prev[v] {
                    path.push(p);
                    v = p;
                }
                let (leaving, entering): (Vec<usize>, Vec<usize>) = path.into_iter().partition(|&e| in_set[e]);
                for e in leaving {
                    in_set[e] = false;
                    holder[elements[e].support] = None;
                }
                for e in entering {
                    in_set[e] = true;
                    holder[elements[e].support] = Some(e);
                }
            }
            None => {
                let choices: Vec<_> = holder
                    .iter()
                    .filter_map(|h| h.map(|e| (elements[e].support, elements[e].point.clone())))
                    .collect();
                let size = choices.len();
                let tight_set = (size < k).then(|| {
                    // supports untouched by the reachable set attain the Rado bound
                    let mut touched = vec![false; k];
                    for e in (0..m).filter(|&e| seen[e]) {
                        touched[elements[e].support] = true;
                    }
                    SubsetWitness::new((0..k).filter(|&j| !touched[j]).collect())
                });
                return PartialTransversal {
                    size,
                    choices,
                    tight_set,
                };
            }
        }
    }
}

/// Whether general polynomials with these supports generate a proper ideal.
pub fn has_independent_transversal(system: &SupportSystem) -> bool {
    max_partial_transversal(system).size == system.k()
}

/// Transversal when one exists, otherwise the Rado-tight violating set.
pub fn transversal_certificate(system: &SupportSystem) -> TransversalCertificate {
    let t = max_partial_transversal(system);
    match t.tight_set {
        None => TransversalCertificate::Choices(t.choices),
        Some(j) => TransversalCertificate::ViolatingSet(j),
    }
}

/// Ranks of `∪_{j∈J} A_j` for every subset `J`, indexed by bitmask.
pub struct UnionRanks {
    k: usize,
    ranks: Vec<u8>,
}

impl UnionRanks {
    pub fn compute(system: &SupportSystem, limit: usize) -> Result<Self> {
        let k = system.k();
        if k > limit || k >= 63 {
            return Err(Error::TooLarge { k, limit });
        }
        let mut ranks = vec![0u8; 1 << k];
        let supports: Vec<Vec<_>> = system
            .supports()
            .iter()
            .map(|s| s.nonzero_points().map(rational).collect())
            .collect();
        fill_ranks(&supports, system.n(), 0, 0, &EchelonBasis::new(system.n()), &mut ranks);
        Ok(UnionRanks { k, ranks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self, mask: u64) -> usize {
        self.ranks[mask as usize] as usize
    }

    pub fn rank_of(&self, subset: &SubsetWitness) -> usize {
        self.rank(subset.mask())
    }

    /// Nonempty subsets ordered by size, then lexicographically.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetWitness> + '_ {
        (1..=self.k).flat_map(move |size| Combinations::new(self.k, size).map(SubsetWitness::new))
    }
}

fn fill_ranks(
    supports: &[Vec<Vec<num_rational::BigRational>>],
    n: usize,
    mask: usize,
    next: usize,
    basis: &EchelonBasis,
    ranks: &mut [u8],
) {
    for j in next..supports.len() {
        let child = mask | 1 << j;
        if basis.rank() == n {
            // full rank already; every superset has rank n
            ranks[child] = n as u8;
            fill_ranks(supports, n, child, j + 1, basis, ranks);
            continue;
        }
        let mut b = basis.clone();
        for v in &supports[j] {
            b.insert(v);
        }
        ranks[child] = b.rank() as u8;
        fill_ranks(supports, n, child, j + 1, &b, ranks);
    }
}

/// Index combinations of `size` out of `0..k` in lexicographic order.
pub(crate) struct Combinations {
    k: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(k: usize, size: usize) -> Self {
        Combinations {
            k,
            current: (size <= k).then(|| (0..size).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        let size = c.len();
        let mut i = size;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if c[i] < self.k - size + i {
                c[i] += 1;
                for t in i + 1..size {
                    c[t] = c[t - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Smallest (by size, then lexicographically) nonempty `J` with
/// `rank(∪_{j∈J} A_j) < |J|`.
pub fn rank_condition_violation(system: &SupportSystem) -> Result<Option<SubsetWitness>> {
    rank_condition_violation_with_limit(system, DEFAULT_ENUMERATION_LIMIT)
}

pub fn rank_condition_violation_with_limit(system: &SupportSystem, limit: usize) -> Result<Option<SubsetWitness>> {
    let ranks = UnionRanks::compute(system, limit)?;
    let found = ranks.subsets().find(|j| ranks.rank_of(j) < j.len());
    Ok(found)
}

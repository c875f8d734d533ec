//! Stable intersections of tropical hypersurfaces (min-plus convention).
//!
//! Lifts `ω_j : A_j → Q` induce a regular mixed subdivision of
//! `A_1 + ... + A_k`: project the lower faces of the lifted sum
//! `{(Σ a_j, Σ ω_j(a_j))}`. A lower face is selected by a functional
//! `(c, 1)`, and its pieces are `σ_j = argmin_{a∈A_j} ⟨c, a⟩ + ω_j(a)`.
//! A cell is dual to a polyhedron of dimension `n - dim(σ_1 + ... + σ_k)`,
//! and that polyhedron lies in the stable intersection exactly when
//! `dim(Σ_{j∈J} σ_j) ≥ |J|` for every `J`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decider::{decide, VerdictKind};
use crate::error::{Error, Result};
use crate::hull::Hull;
use crate::linalg::{rank, solve_rational, LatticePoint};
use crate::supports::{normalize, Support, SupportSystem, SystemFile};
use crate::transversal::has_independent_transversal;

/// A support system with a rational lift on every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalData {
    system: SupportSystem,
    lifts: Vec<Vec<BigRational>>,
}

impl TropicalData {
    /// `lifts[j][i]` lifts the `i`th point of `A_j`.
    pub fn new(system: SupportSystem, lifts: Vec<Vec<BigRational>>) -> Result<Self> {
        let shapes_match =
            lifts.len() == system.k() && lifts.iter().zip(system.supports()).all(|(l, s)| l.len() == s.len());
        if !shapes_match {
            return Err(Error::Parse("lifts must match the supports point for point".into()));
        }
        Ok(TropicalData { system, lifts })
    }

    /// Every lift zero: the constant-coefficient case.
    pub fn zero_lifts(system: SupportSystem) -> Self {
        let lifts = system
            .supports()
            .iter()
            .map(|s| vec![BigRational::zero(); s.len()])
            .collect();
        TropicalData { system, lifts }
    }

    /// Reads a system file with a `lifts` field. A point listed twice keeps
    /// the smaller lift, as in a min-plus polynomial.
    pub fn from_file(file: &SystemFile) -> Result<Self> {
        let lifts = file
            .lifts
            .as_ref()
            .ok_or_else(|| Error::Parse("field `lifts` is required".into()))?;
        if file.supports.is_empty() {
            return Err(Error::Parse("field `supports` must list at least one support".into()));
        }
        if lifts.len() != file.supports.len() {
            return Err(Error::Parse(format!(
                "{} supports but {} lift lists",
                file.supports.len(),
                lifts.len()
            )));
        }
        let mut supports = Vec::new();
        let mut merged = Vec::new();
        for (j, (points, values)) in file.supports.iter().zip(lifts).enumerate() {
            if points.len() != values.len() {
                return Err(Error::Parse(format!(
                    "support {} has {} points but {} lifts",
                    j + 1,
                    points.len(),
                    values.len()
                )));
            }
            let mut order: Vec<LatticePoint> = Vec::new();
            let mut best: BTreeMap<LatticePoint, BigRational> = BTreeMap::new();
            for (p, v) in points.iter().zip(values) {
                let p = LatticePoint::new(p.clone());
                let v = parse_rational(v)?;
                match best.get_mut(&p) {
                    Some(old) => {
                        if v < *old {
                            *old = v;
                        }
                    }
                    None => {
                        order.push(p.clone());
                        best.insert(p, v);
                    }
                }
            }
            merged.push(order.iter().map(|p| best[p].clone()).collect());
            supports.push(Support::new(order));
        }
        TropicalData::new(SupportSystem::new(file.n, supports)?, merged)
    }

    pub fn to_file(&self) -> SystemFile {
        let mut file = SystemFile::from_system(&self.system);
        file.lifts = Some(
            self.lifts
                .iter()
                .map(|l| l.iter().map(ToString::to_string).collect())
                .collect(),
        );
        file
    }

    pub fn system(&self) -> &SupportSystem {
        &self.system
    }

    pub fn lifts(&self) -> &[Vec<BigRational>] {
        &self.lifts
    }

    /// Translates each support into the origin; lifts follow their points.
    pub fn normalized(&self) -> Result<Self> {
        Ok(TropicalData {
            system: normalize(&self.system)?,
            lifts: self.lifts.clone(),
        })
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("invalid rational lift `{s}`")))
}

/// Lifts `p / denominator` with `|p| ≤ bound · denominator`, uniform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftSampler {
    pub bound: i64,
    pub denominator: i64,
}

impl Default for LiftSampler {
    fn default() -> Self {
        LiftSampler {
            bound: 10,
            denominator: 16,
        }
    }
}

impl LiftSampler {
    pub fn sample<R: Rng>(&self, system: &SupportSystem, rng: &mut R) -> TropicalData {
        let reach = self.bound * self.denominator;
        let den = BigInt::from(self.denominator);
        let lifts = system
            .supports()
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|_| BigRational::new(rng.random_range(-reach..=reach).into(), den.clone()))
                    .collect()
            })
            .collect();
        TropicalData {
            system: system.clone(),
            lifts,
        }
    }

    pub fn seeded(&self, system: &SupportSystem, seed: u64) -> TropicalData {
        self.sample(system, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

/// A cell `σ_1 + ... + σ_k` of the mixed subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedCell {
    /// Sorted indices into `A_j` for each `j`.
    pub pieces: Vec<Vec<usize>>,
    pub piece_dims: Vec<usize>,
    pub total_dim: usize,
    pub dual_dim: usize,
    /// A functional `c` selecting the cell.
    pub functional: Vec<BigRational>,
}

impl MixedCell {
    pub fn piece_points(&self, system: &SupportSystem) -> Vec<Vec<LatticePoint>> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(j, idx)| idx.iter().map(|&i| system.support(j).points()[i].clone()).collect())
            .collect()
    }

    /// Whether every `σ_j` contains the matching piece of `other`.
    pub fn contains(&self, other: &MixedCell) -> bool {
        self.pieces
            .iter()
            .zip(&other.pieces)
            .all(|(mine, theirs)| theirs.iter().all(|i| mine.binary_search(i).is_ok()))
    }
}

/// Integer lifts `lcm · ω` and the common denominator `lcm`.
fn scaled_lifts(data: &TropicalData) -> Result<(Vec<Vec<i64>>, BigInt)> {
    let lcm = data
        .lifts
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled = data
        .lifts
        .iter()
        .map(|l| {
            l.iter()
                .map(|v| (v.numer() * (&lcm / v.denom())).to_i64().ok_or(Error::Overflow))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((scaled, lcm))
}

fn affine_dim(points: &[LatticePoint]) -> Result<usize> {
    match points.first() {
        None => Ok(0),
        Some(base) => rank(&points.iter().map(|p| p.sub(base)).collect::<Vec<_>>()),
    }
}

/// Any solution of `rows · c = rhs`; the system must be consistent.
#[allow(clippy::needless_range_loop)]
fn solve_consistent(mut rows: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>, n: usize) -> Vec<BigRational> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..n {
                    let t = &f * &rows[r][c];
                    rows[i][c] -= t;
                }
                let t = &f * &rhs[r];
                rhs[i] -= t;
            }
        }
        pivots.push(col);
        r += 1;
    }
    debug_assert!(rhs[r..].iter().all(Zero::is_zero), "inconsistent system");
    let mut c = vec![BigRational::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        c[col] = rhs[i].clone();
    }
    c
}

fn dot_big(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| y * x).sum()
}

/// All cells of the regular mixed subdivision, sorted by dimension and
/// then by pieces.
pub fn mixed_subdivision(data: &TropicalData) -> Result<Vec<MixedCell>> {
    let system = &data.system;
    let n = system.n();
    let k = system.k();
    let (lifts, lcm) = scaled_lifts(data)?;
    let lcm = BigRational::from_integer(lcm);

    // lowest lift over each point of the Minkowski sum
    let mut sums: BTreeMap<LatticePoint, i64> = BTreeMap::new();
    let mut choice = vec![0usize; k];
    loop {
        let mut s = LatticePoint::zero(n);
        let mut w: i64 = 0;
        for (j, &i) in choice.iter().enumerate() {
            s = s.add(&system.support(j).points()[i]);
            w = w.checked_add(lifts[j][i]).ok_or(Error::Overflow)?;
        }
        sums.entry(s).and_modify(|v| *v = (*v).min(w)).or_insert(w);
        let mut j = 0;
        while j < k {
            choice[j] += 1;
            if choice[j] < system.support(j).len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
        if j == k {
            break;
        }
    }
    let lifted: Vec<LatticePoint> = sums
        .iter()
        .map(|(s, &w)| {
            let mut c = s.coords().to_vec();
            c.push(w);
            LatticePoint::new(c)
        })
        .collect();
    let hull = Hull::new(&lifted)?;

    // local coordinates of the upward direction, when the lift is not affine
    let mut up = vec![BigRational::zero(); n + 1];
    up[n] = BigRational::one();
    let vertical = solve_rational(&hull.basis, &up, n + 1);

    let mut cells: Vec<MixedCell> = Vec::new();
    for face in hull.faces() {
        let normals: Vec<&Vec<BigInt>> = face.facets.iter().map(|&f| &hull.facets[f].normal).collect();
        let sum_of = |ns: &[&Vec<BigInt>]| -> Vec<BigInt> {
            let mut acc = vec![BigInt::zero(); hull.dim];
            for nv in ns {
                for (a, x) in acc.iter_mut().zip(nv.iter()) {
                    *a += x;
                }
            }
            acc
        };
        let all = sum_of(&normals);
        let rho: Vec<BigRational> = match &vertical {
            None => all.into_iter().map(BigRational::from_integer).collect(),
            Some(z) => {
                let lower: Vec<&Vec<BigInt>> = normals
                    .iter()
                    .copied()
                    .filter(|nv| dot_big(nv, z).is_negative())
                    .collect();
                if lower.is_empty() {
                    continue;
                }
                let low = sum_of(&lower);
                let a = dot_big(&all, z);
                let b = dot_big(&low, z);
                let m = if a.is_negative() {
                    BigRational::one()
                } else {
                    (a / -&b).floor() + BigRational::one()
                };
                let rho: Vec<BigRational> = all
                    .iter()
                    .zip(&low)
                    .map(|(x, y)| BigRational::from_integer(x.clone()) + &m * BigRational::from_integer(y.clone()))
                    .collect();
                let scale = -dot_rat(&rho, z).recip();
                rho.into_iter().map(|x| x * &scale).collect()
            }
        };
        // ⟨(c, 1), b_i⟩ = -ρ_i for every basis vector b_i of the hull's span
        let rows = hull
            .basis
            .iter()
            .map(|b| {
                b.coords()[..n]
                    .iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let rhs = hull
            .basis
            .iter()
            .zip(&rho)
            .map(|(b, r)| -r - BigRational::from_integer(b.coords()[n].into()))
            .collect();
        let functional = solve_consistent(rows, rhs, n);
        let mut cell = cell_for(system, &lifts, functional)?;
        debug_assert_eq!(
            piece_sums(system, &cell),
            face.points
                .iter()
                .map(|&i| LatticePoint::new(lifted[i].coords()[..n].to_vec()))
                .collect(),
        );
        for x in cell.functional.iter_mut() {
            *x /= &lcm;
        }
        cells.push(cell);
    }
    cells.sort_by(|a, b| a.total_dim.cmp(&b.total_dim).then_with(|| a.pieces.cmp(&b.pieces)));
    cells.dedup_by(|a, b| a.pieces == b.pieces);
    Ok(cells)
}

fn piece_sums(system: &SupportSystem, cell: &MixedCell) -> BTreeSet<LatticePoint> {
    let mut sums = BTreeSet::from([LatticePoint::zero(system.n())]);
    for piece in cell.piece_points(system) {
        sums = sums.iter().flat_map(|s| piece.iter().map(move |p| s.add(p))).collect();
    }
    sums
}

fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cell_for(system: &SupportSystem, lifts: &[Vec<i64>], functional: Vec<BigRational>) -> Result<MixedCell> {
    let mut pieces = Vec::with_capacity(system.k());
    let mut piece_dims = Vec::with_capacity(system.k());
    let mut all_dirs = Vec::new();
    for (j, support) in system.supports().iter().enumerate() {
        let values: Vec<BigRational> = support
            .points()
            .iter()
            .zip(&lifts[j])
            .map(|(p, &w)| dot_rat(&p.to_rational(), &functional) + BigRational::from_integer(w.into()))
            .collect();
        let min = values.iter().min().expect("supports are nonempty");
        let piece: Vec<usize> = (0..values.len()).filter(|&i| values[i] == *min).collect();
        let points: Vec<LatticePoint> = piece.iter().map(|&i| support.points()[i].clone()).collect();
        piece_dims.push(affine_dim(&points)?);
        all_dirs.extend(points.iter().map(|p| p.sub(&points[0])));
        pieces.push(piece);
    }
    let total_dim = rank(&all_dirs)?;
    Ok(MixedCell {
        pieces,
        piece_dims,
        total_dim,
        dual_dim: system.n() - total_dim,
        functional,
    })
}

/// Whether the dual polyhedron of `cell` lies in the stable intersection.
fn in_stable_intersection(system: &SupportSystem, cell: &MixedCell) -> bool {
    let translated: Vec<Support> = cell
        .piece_points(system)
        .into_iter()
        .map(|pts| Support::new(pts.iter().map(|p| p.sub(&pts[0])).collect()))
        .collect();
    let pieces = SupportSystem::new(system.n(), translated).expect("pieces share the ambient dimension");
    has_independent_transversal(&pieces)
}

/// Facets (dual dimension `n - k`), ridges (`n - k - 1`) and the
/// facet–ridge incidence of the stable intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableIntersectionComplex {
    pub n: usize,
    pub k: usize,
    pub facets: Vec<MixedCell>,
    pub ridges: Vec<MixedCell>,
    /// `(facet, ridge)` index pairs with the ridge's pieces containing the facet's.
    pub incidence: Vec<(usize, usize)>,
}

impl StableIntersectionComplex {
    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }
}

pub fn stable_intersection(data: &TropicalData) -> Result<StableIntersectionComplex> {
    let system = &data.system;
    let k = system.k();
    let mut facets = Vec::new();
    let mut ridges = Vec::new();
    for cell in mixed_subdivision(data)? {
        if cell.total_dim != k && cell.total_dim != k + 1 {
            continue;
        }
        if !in_stable_intersection(system, &cell) {
            continue;
        }
        if cell.total_dim == k {
            facets.push(cell);
        } else {
            ridges.push(cell);
        }
    }
    let mut incidence = Vec::new();
    for (r, ridge) in ridges.iter().enumerate() {
        for (f, facet) in facets.iter().enumerate() {
            if ridge.contains(facet) {
                incidence.push((f, r));
            }
        }
    }
    incidence.sort_unstable();
    Ok(StableIntersectionComplex {
        n: system.n(),
        k,
        facets,
        ridges,
        incidence,
    })
}

/// Whether facets sharing ridges form a connected graph.
pub fn connected_through_codim_one(complex: &StableIntersectionComplex) -> bool {
    let f = complex.facets.len();
    if f <= 1 {
        return true;
    }
    let mut by_ridge: Vec<Vec<usize>> = vec![Vec::new(); complex.ridges.len()];
    for &(facet, ridge) in &complex.incidence {
        by_ridge[ridge].push(facet);
    }
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); f];
    for group in &by_ridge {
        for &a in group {
            neighbours[a].extend(group.iter().copied().filter(|&b| b != a));
        }
    }
    let mut seen = vec![false; f];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(a) = queue.pop_front() {
        for &b in &neighbours[a] {
            if !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub verdict: VerdictKind,
    /// The decision procedure's verdict is generically prime.
    pub condition_holds: bool,
    pub ctc1: bool,
    /// False only if the condition holds and connectivity fails.
    pub consistent: bool,
}

pub fn corollary_check(data: &TropicalData) -> Result<ConnectivityReport> {
    let verdict = decide(&data.system)?.kind;
    let condition_holds = verdict == VerdictKind::GenericallyPrime;
    let ctc1 = connected_through_codim_one(&stable_intersection(data)?);
    Ok(ConnectivityReport {
        verdict,
        condition_holds,
        ctc1,
        consistent: !condition_holds || ctc1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(n: usize, s: Vec<Vec<Vec<i64>>>, lifts: Vec<Vec<i64>>) -> TropicalData {
        let system = SupportSystem::from_coords(n, s).unwrap();
        let lifts = lifts
            .into_iter()
            .map(|l| l.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
            .collect();
        TropicalData::new(system, lifts).unwrap()
    }

    #[test]
    fn segment_with_zero_lift_is_one_cell() {
        let d = data(1, vec![vec![vec![0], vec![1]]], vec![vec![0, 0]]);
        let cells = mixed_subdivision(&d).unwrap();
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[2].pieces, vec![vec![0, 1]]);
        assert_eq!(cells[2].total_dim, 1);
    }

    #[test]
    fn bent_segment_splits() {
        let d = data(1, vec![vec![vec![0], vec![1], vec![2]]], vec![vec![0, 0, 1]]);
        let cells = mixed_subdivision(&d).unwrap();
        let pieces: Vec<_> = cells.iter().map(|c| c.pieces[0].clone()).collect();
        assert_eq!(pieces, vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn two_segments_give_the_square() {
        let d = data(
            2,
            vec![vec![vec![0, 0], vec![1, 0]], vec![vec![0, 0], vec![0, 1]]],
            vec![vec![0, 0], vec![0, 0]],
        );
        let si = stable_intersection(&d).unwrap();
        assert_eq!(si.facets.len(), 1);
        assert_eq!(si.facets[0].piece_dims, vec![1, 1]);
        assert!(connected_through_codim_one(&si));
    }

    #[test]
    fn tropical_line_is_a_star() {
        let d = data(2, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]], vec![vec![0, 0, 0]]);
        let si = stable_intersection(&d).unwrap();
        assert_eq!(si.facets.len(), 3);
        assert_eq!(si.ridges.len(), 1);
        assert_eq!(si.incidence, vec![(0, 0), (1, 0), (2, 0)]);
        assert!(connected_through_codim_one(&si));
    }

    #[test]
    fn degree_two_pair_splits_into_two_points() {
        let d = data(
            2,
            vec![
                vec![vec![0, 0], vec![1, 0], vec![0, 1]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            ],
            vec![vec![0, 3, 7], vec![2, 0, 5]],
        )
        .normalized()
        .unwrap();
        let si = stable_intersection(&d).unwrap();
        assert_eq!(si.facets.len(), 2);
        assert!(si.ridges.is_empty());
        assert!(!connected_through_codim_one(&si));
        let report = corollary_check(&d).unwrap();
        assert!(!report.condition_holds && !report.ctc1 && report.consistent);
    }

    #[test]
    fn functional_selects_its_pieces() {
        let d = LiftSampler::default().seeded(
            &SupportSystem::from_coords(
                2,
                vec![
                    vec![vec![0, 0], vec![2, 1], vec![1, 3]],
                    vec![vec![0, 0], vec![1, 0], vec![0, 2]],
                ],
            )
            .unwrap(),
            5,
        );
        for cell in mixed_subdivision(&d).unwrap() {
            for (j, piece) in cell.pieces.iter().enumerate() {
                let vals: Vec<BigRational> = d
                    .system
                    .support(j)
                    .points()
                    .iter()
                    .zip(&d.lifts[j])
                    .map(|(p, w)| dot_rat(&p.to_rational(), &cell.functional) + w)
                    .collect();
                let min = vals.iter().min().unwrap();
                let argmin: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == *min).collect();
                assert_eq!(&argmin, piece);
            }
        }
    }

    #[test]
    fn lift_file_roundtrip_keeps_minimum() {
        let file = SystemFile {
            n: 1,
            supports: vec![vec![vec![0], vec![1], vec![0]]],
            lifts: Some(vec![vec!["3".into(), "1/2".into(), "-1".into()]]),
        };
        let d = TropicalData::from_file(&file).unwrap();
        assert_eq!(d.system().support(0).len(), 2);
        assert_eq!(d.lifts()[0][0], BigRational::from_integer((-1).into()));
        assert_eq!(d.to_file().lifts.unwrap()[0], vec!["-1".to_string(), "1/2".to_string()]);
    }

    #[test]
    fn bad_lift_is_a_parse_error() {
        let file = SystemFile {
            n: 1,
            supports: vec![vec![vec![0]]],
            lifts: Some(vec![vec!["x".into()]]),
        };
        assert!(matches!(TropicalData::from_file(&file), Err(Error::Parse(_))));
    }
}

//! Lattice polytopes, normalized volumes and mixed volumes.
//!
//! Volumes are lattice-normalized: `d!` times the Euclidean volume, so a
//! unimodular simplex has volume 1 and the mixed volume of `m` polytopes
//! in `Z^m` is the generic number of torus roots (BKK).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::Hull;
use crate::linalg::{coordinates_in_lattice, rank, saturated_lattice_basis, LatticePoint};
use crate::supports::{SubsetWitness, SupportSystem};

/// Convex hull of lattice points, stored by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient: usize,
    dim: usize,
    /// Extreme points, sorted lexicographically.
    vertices: Vec<LatticePoint>,
}

impl LatticePolytope {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn translate(&self, t: &LatticePoint) -> LatticePolytope {
        LatticePolytope {
            ambient: self.ambient,
            dim: self.dim,
            vertices: sorted(self.vertices.iter().map(|v| v.add(t)).collect()),
        }
    }
}

fn sorted(mut v: Vec<LatticePoint>) -> Vec<LatticePoint> {
    v.sort();
    v.dedup();
    v
}

/// Generic mixed volume / BKK root count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedVolume(pub u64);

impl MixedVolume {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// Vertex description of `conv(points)`.
pub fn convex_hull(points: &[LatticePoint]) -> Result<LatticePolytope> {
    let Some(first) = points.first() else {
        return Err(Error::Parse("convex hull of an empty point set".into()));
    };
    let ambient = first.dim();
    for p in points {
        if p.dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: p.dim(),
            });
        }
    }
    let hull = Hull::new(points)?;
    let vertices = sorted(hull.vertex_indices().into_iter().map(|i| points[i].clone()).collect());
    Ok(LatticePolytope {
        ambient,
        dim: hull.dim,
        vertices,
    })
}

/// `dim!` times the Euclidean volume; requires a full-dimensional polytope.
pub fn normalized_volume(p: &LatticePolytope) -> Result<BigInt> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p.dim,
            ambient: p.ambient,
        });
    }
    Ok(Hull::new(&p.vertices)?.volume)
}

fn volume_or_zero(p: &LatticePolytope) -> Result<BigInt> {
    if p.is_full_dimensional() {
        normalized_volume(p)
    } else {
        Ok(BigInt::zero())
    }
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.ambient != q.ambient {
        return Err(Error::DimensionMismatch {
            expected: p.ambient,
            found: q.ambient,
        });
    }
    let sums: Vec<LatticePoint> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| a.add(b)))
        .collect();
    convex_hull(&sums)
}

/// Mixed volume of `m` polytopes in `Z^m` by inclusion-exclusion over
/// Minkowski sums: `(1/m!) Σ_S (-1)^(m-|S|) vol(Σ_{i∈S} P_i)` with
/// normalized volumes. The empty collection has mixed volume 1.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<MixedVolume> {
    let m = polytopes.len();
    for p in polytopes {
        if p.ambient != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: p.ambient,
            });
        }
    }
    if m == 0 {
        return Ok(MixedVolume(1));
    }
    // Minkowski sums over every nonempty subset, built from smaller ones
    let mut sums: Vec<Option<LatticePolytope>> = vec![None; 1 << m];
    for mask in 1usize..1 << m {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        sums[mask] = Some(match &sums[rest] {
            None => polytopes[low].clone(),
            Some(r) => minkowski_sum(r, &polytopes[low])?,
        });
    }
    let total: BigInt = (1usize..1 << m)
        .into_par_iter()
        .map(|mask| {
            let vol = volume_or_zero(sums[mask].as_ref().unwrap())?;
            Ok(if (m - mask.count_ones() as usize).is_multiple_of(2) {
                vol
            } else {
                -vol
            })
        })
        .collect::<Result<Vec<BigInt>>>()?
        .into_iter()
        .sum::<BigInt>();
    // the alternating sum of normalized volumes is m! times the mixed volume
    let factorial: BigInt = (1..=m).map(BigInt::from).product();
    debug_assert!((&total % &factorial).is_zero());
    (total / factorial).to_u64().map(MixedVolume).ok_or(Error::Overflow)
}

/// Mixed volume of `(conv A_j)_{j∈J}` inside the saturated lattice of
/// `span(∪_{j∈J} A_j)`, which must have rank `|J|`.
pub fn restricted_mixed_volume(system: &SupportSystem, subset: &SubsetWitness) -> Result<MixedVolume> {
    let points = system.union_points(subset.indices());
    let r = rank(&points)?;
    if r != subset.len() {
        return Err(Error::RankMismatch {
            rank: r,
            expected: subset.len(),
        });
    }
    if subset.is_empty() {
        return Ok(MixedVolume(1));
    }
    let basis = saturated_lattice_basis(&points)?;
    mixed_volume_in_basis(system, subset, &basis)
}

/// Same as [`restricted_mixed_volume`] but with a caller-chosen lattice
/// basis of the saturation; the result does not depend on that choice.
pub fn mixed_volume_in_basis(
    system: &SupportSystem,
    subset: &SubsetWitness,
    basis: &[LatticePoint],
) -> Result<MixedVolume> {
    if basis.len() != subset.len() {
        return Err(Error::RankMismatch {
            rank: basis.len(),
            expected: subset.len(),
        });
    }
    let polytopes = subset
        .indices()
        .iter()
        .map(|&j| {
            let coords = system
                .support(j)
                .points()
                .iter()
                .map(|p| coordinates_in_lattice(p, basis))
                .collect::<Result<Vec<_>>>()?;
            convex_hull(&coords)
        })
        .collect::<Result<Vec<_>>>()?;
    mixed_volume(&polytopes)
}

/// Mixed volume of the hulls of a square system (`k = n`) in `Z^n`.
pub fn system_mixed_volume(system: &SupportSystem) -> Result<MixedVolume> {
    let polytopes = system
        .supports()
        .iter()
        .map(|s| convex_hull(s.points()))
        .collect::<Result<Vec<_>>>()?;
    mixed_volume(&polytopes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[&[i64]]) -> LatticePolytope {
        convex_hull(&v.iter().map(|p| LatticePoint(p.to_vec())).collect::<Vec<_>>()).unwrap()
    }

    fn unit_simplex(d: usize) -> LatticePolytope {
        let mut pts = vec![LatticePoint::zero(d)];
        pts.extend((0..d).map(|i| LatticePoint::unit(d, i)));
        convex_hull(&pts).unwrap()
    }

    #[test]
    fn hull_examples() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(sq.vertices().len(), 4);
        let seg = poly(&[&[0], &[1], &[2]]);
        assert_eq!(seg.vertices(), &[LatticePoint::from([0]), LatticePoint::from([2])]);
        let pt = poly(&[&[0, 0]]);
        assert_eq!(pt.dim(), 0);
    }

    #[test]
    fn volume_examples() {
        for d in 1..=4 {
            assert_eq!(normalized_volume(&unit_simplex(d)).unwrap(), BigInt::from(1));
        }
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(normalized_volume(&sq).unwrap(), BigInt::from(2));
        assert_eq!(normalized_volume(&poly(&[&[0], &[2]])).unwrap(), BigInt::from(2));
        assert!(matches!(
            normalized_volume(&poly(&[&[0, 0], &[1, 1]])),
            Err(Error::NotFullDimensional { dim: 1, ambient: 2 })
        ));
    }

    #[test]
    fn minkowski_examples() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(
            minkowski_sum(&a, &b).unwrap(),
            poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
        );
        let origin = poly(&[&[0, 0]]);
        assert_eq!(minkowski_sum(&a, &origin).unwrap(), a);
        let s = unit_simplex(2);
        assert_eq!(minkowski_sum(&s, &s).unwrap(), poly(&[&[0, 0], &[2, 0], &[0, 2]]));
    }

    #[test]
    fn mixed_volume_examples() {
        for m in 1..=3 {
            let simplices = vec![unit_simplex(m); m];
            assert_eq!(mixed_volume(&simplices).unwrap(), MixedVolume(1));
        }
        let p1 = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let p2 = poly(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(mixed_volume(&[p1, p2]).unwrap(), MixedVolume(2));
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        // generic bilinear pair: two roots, matching normalized_volume(sq)
        assert_eq!(mixed_volume(&[sq.clone(), sq]).unwrap(), MixedVolume(2));
        assert_eq!(mixed_volume(&[]).unwrap(), MixedVolume(1));
        assert!(matches!(
            mixed_volume(&[unit_simplex(2)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn restricted_examples() {
        // a xz + b y + c, d xz + e y + f xyz, normalized
        let s = SupportSystem::from_coords(
            3,
            vec![
                vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 0]],
                vec![vec![1, -1, 1], vec![0, 0, 0], vec![1, 0, 1]],
            ],
        )
        .unwrap();
        let both = SubsetWitness::new(vec![0, 1]);
        assert_eq!(restricted_mixed_volume(&s, &both).unwrap(), MixedVolume(2));

        let seg = SupportSystem::from_coords(2, vec![vec![vec![0, 0], vec![1, 0]]]).unwrap();
        let first = SubsetWitness::new(vec![0]);
        assert_eq!(restricted_mixed_volume(&seg, &first).unwrap(), MixedVolume(1));

        let double = SupportSystem::from_coords(2, vec![vec![vec![0, 0], vec![2, 0]]]).unwrap();
        assert_eq!(restricted_mixed_volume(&double, &first).unwrap(), MixedVolume(2));

        let flat = SupportSystem::from_coords(2, vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]]).unwrap();
        assert_eq!(
            restricted_mixed_volume(&flat, &first),
            Err(Error::RankMismatch { rank: 2, expected: 1 })
        );
        assert_eq!(
            restricted_mixed_volume(&flat, &SubsetWitness::default()).unwrap(),
            MixedVolume(1)
        );
    }

    #[test]
    fn degenerate_tuple_has_zero_mixed_volume() {
        let a = poly(&[&[0, 0], &[1, 1]]);
        let b = poly(&[&[0, 0], &[2, 2]]);
        assert_eq!(mixed_volume(&[a, b]).unwrap(), MixedVolume(0));
    }
}

//! Exact convex hulls in any dimension.
//!
//! Points are first expressed in integer coordinates of the saturated
//! lattice of their affine span, so every hull below is full-dimensional.
//! A placing triangulation (beneath-beyond) then yields the normalized
//! volume and a simplicial boundary; boundary simplices sharing a
//! hyperplane are merged into true facets.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::linalg::{bareiss_rank, coordinates_in_lattice, determinant, saturated_basis_in, LatticePoint};

/// A supporting hyperplane `⟨normal, y⟩ = offset` with every point on the
/// `≤` side. Normals are primitive and point outward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Indices of all input points on the hyperplane, sorted.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct Hull {
    pub dim: usize,
    /// Saturated basis of the affine span's direction lattice (ambient vectors).
    pub basis: Vec<LatticePoint>,
    /// Coordinates of each input point in `basis`, relative to point 0.
    pub local: Vec<Vec<BigInt>>,
    pub facets: Vec<Facet>,
    /// Placing triangulation, as index lists of `dim + 1` points.
    pub simplices: Vec<Vec<usize>>,
    /// Normalized volume (`dim!` times Euclidean) in the span's lattice.
    pub volume: BigInt,
}

/// A face of the hull: its points and the facets containing it.
#[derive(Clone, Debug)]
pub(crate) struct Face {
    pub points: Vec<usize>,
    pub facets: Vec<usize>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Hull {
    pub fn new(points: &[LatticePoint]) -> Result<Hull> {
        assert!(!points.is_empty(), "hull of an empty point set");
        let n = points[0].dim();
        let origin = &points[0];
        let diffs: Vec<LatticePoint> = points.iter().map(|p| p.sub(origin)).collect();
        let basis = saturated_basis_in(&diffs, n)?;
        let dim = basis.len();
        let local: Vec<Vec<BigInt>> = diffs
            .iter()
            .map(|d| coordinates_in_lattice(d, &basis).map(|c| c.to_big()))
            .collect::<Result<_>>()?;
        let mut hull = Hull {
            dim,
            basis,
            local,
            facets: Vec::new(),
            simplices: Vec::new(),
            volume: BigInt::one(),
        };
        match dim {
            0 => hull.simplices.push(vec![0]),
            1 => hull.build_segment(),
            _ => hull.build_placing(),
        }
        Ok(hull)
    }

    fn build_segment(&mut self) {
        let coord = |i: usize| &self.local[i][0];
        let lo = (0..self.local.len()).min_by(|&a, &b| coord(a).cmp(coord(b))).unwrap();
        let hi = (0..self.local.len()).max_by(|&a, &b| coord(a).cmp(coord(b))).unwrap();
        let (min, max) = (coord(lo).clone(), coord(hi).clone());
        let on = |v: &BigInt| (0..self.local.len()).filter(|&i| coord(i) == v).collect::<Vec<_>>();
        self.facets = vec![
            Facet {
                normal: vec![-BigInt::one()],
                offset: -&min,
                points: on(&min),
            },
            Facet {
                normal: vec![BigInt::one()],
                offset: max.clone(),
                points: on(&max),
            },
        ];
        self.simplices = vec![vec![lo, hi]];
        self.volume = max - min;
    }

    /// Hyperplane through `dim` affinely independent points, oriented so
    /// that `reference` lies strictly below it.
    fn hyperplane(&self, through: &[usize], reference: usize) -> (Vec<BigInt>, BigInt) {
        let d = self.dim;
        let base = &self.local[through[0]];
        let rows: Vec<Vec<BigInt>> = through[1..]
            .iter()
            .map(|&i| self.local[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal: Vec<BigInt> = (0..d)
            .map(|col| {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let m = determinant(&minor);
                if col % 2 == 0 {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let g = normal.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        debug_assert!(!g.is_zero(), "degenerate facet");
        for x in normal.iter_mut() {
            *x = &*x / &g;
        }
        let mut offset = dot(&normal, base);
        if dot(&normal, &self.local[reference]) > offset {
            for x in normal.iter_mut() {
                *x = -&*x;
            }
            offset = -offset;
        }
        (normal, offset)
    }

    fn simplex_volume(&self, simplex: &[usize]) -> BigInt {
        let base = &self.local[simplex[0]];
        let rows: Vec<Vec<BigInt>> = simplex[1..]
            .iter()
            .map(|&i| self.local[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        determinant(&rows).abs()
    }

    fn build_placing(&mut self) {
        let d = self.dim;
        let count = self.local.len();
        // distinct points only, in input order
        let mut seen = HashSet::new();
        let order: Vec<usize> = (0..count).filter(|&i| seen.insert(self.local[i].clone())).collect();

        // initial simplex: greedily extend affine rank
        let mut start = vec![order[0]];
        let mut echelon = crate::linalg::EchelonBasis::new(d);
        for &i in &order[1..] {
            if start.len() == d + 1 {
                break;
            }
            let diff: Vec<_> = self.local[i]
                .iter()
                .zip(&self.local[order[0]])
                .map(|(a, b)| num_rational::BigRational::from_integer(a - b))
                .collect();
            if echelon.insert(&diff) {
                start.push(i);
            }
        }
        debug_assert_eq!(start.len(), d + 1);

        struct Boundary {
            vertices: Vec<usize>,
            normal: Vec<BigInt>,
            offset: BigInt,
        }
        let mut boundary: Vec<Boundary> = (0..=d)
            .map(|drop| {
                let vertices: Vec<usize> = start
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let (normal, offset) = self.hyperplane(&vertices, start[drop]);
                Boundary {
                    vertices,
                    normal,
                    offset,
                }
            })
            .collect();
        let mut simplices = vec![start.clone()];
        let mut volume = self.simplex_volume(&start);

        for &p in order.iter().filter(|i| !start.contains(i)) {
            let y = &self.local[p];
            let visible: Vec<usize> = (0..boundary.len())
                .filter(|&f| dot(&boundary[f].normal, y) > boundary[f].offset)
                .collect();
            if visible.is_empty() {
                continue;
            }
            // ridge -> (count, facet it came from, vertex opposite to it there)
            let mut ridges: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
            for &f in &visible {
                let mut simplex = boundary[f].vertices.clone();
                simplex.push(p);
                volume += self.simplex_volume(&simplex);
                simplices.push(simplex);
                let verts = &boundary[f].vertices;
                for drop in 0..verts.len() {
                    let mut ridge: Vec<usize> = verts
                        .iter()
                        .enumerate()
                        .filter(|(t, _)| *t != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    ridge.sort_unstable();
                    ridges.entry(ridge).and_modify(|e| e.0 += 1).or_insert((1, verts[drop]));
                }
            }
            let mut horizon: Vec<(Vec<usize>, usize)> = ridges
                .into_iter()
                .filter(|(_, (c, _))| *c == 1)
                .map(|(r, (_, opposite))| (r, opposite))
                .collect();
            horizon.sort();
            let visible: HashSet<usize> = visible.into_iter().collect();
            let mut next: Vec<Boundary> = boundary
                .into_iter()
                .enumerate()
                .filter(|(f, _)| !visible.contains(f))
                .map(|(_, b)| b)
                .collect();
            for (ridge, opposite) in horizon {
                let mut vertices = ridge;
                vertices.push(p);
                let (normal, offset) = self.hyperplane(&vertices, opposite);
                next.push(Boundary {
                    vertices,
                    normal,
                    offset,
                });
            }
            boundary = next;
        }

        let mut planes: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
        let mut known = HashSet::new();
        for b in boundary {
            if known.insert((b.normal.clone(), b.offset.clone())) {
                planes.push((b.normal, b.offset));
            }
        }
        planes.sort();
        self.facets = planes
            .into_iter()
            .map(|(normal, offset)| {
                let points = (0..count).filter(|&i| dot(&normal, &self.local[i]) == offset).collect();
                Facet { normal, offset, points }
            })
            .collect();
        self.simplices = simplices;
        self.volume = volume;
    }

    /// Indices of extreme points (duplicates of a vertex all count).
    pub fn vertex_indices(&self) -> Vec<usize> {
        let count = self.local.len();
        match self.dim {
            0 => (0..count).collect(),
            _ => (0..count)
                .filter(|&i| {
                    let mut normals: Vec<Vec<BigInt>> = self
                        .facets
                        .iter()
                        .filter(|f| f.points.binary_search(&i).is_ok())
                        .map(|f| f.normal.clone())
                        .collect();
                    bareiss_rank(&mut normals, self.dim) == self.dim
                })
                .collect(),
        }
    }

    /// All nonempty faces, including the hull itself (with no facets).
    ///
    /// Proper faces are exactly the nonempty intersections of facets.
    pub fn faces(&self) -> Vec<Face> {
        let count = self.local.len();
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for f in &self.facets {
            if found.insert(f.points.clone()) {
                stack.push(f.points.clone());
            }
        }
        while let Some(face) = stack.pop() {
            for f in &self.facets {
                let meet: Vec<usize> = face
                    .iter()
                    .copied()
                    .filter(|i| f.points.binary_search(i).is_ok())
                    .collect();
                if !meet.is_empty() && found.insert(meet.clone()) {
                    stack.push(meet);
                }
            }
        }
        let mut faces: Vec<Vec<usize>> = found.into_iter().collect();
        faces.push((0..count).collect());
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        faces.dedup();
        faces
            .into_iter()
            .map(|points| {
                let facets = self
                    .facets
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| points.iter().all(|i| f.points.binary_search(i).is_ok()))
                    .map(|(t, _)| t)
                    .collect();
                Face { points, facets }
            })
            .collect()
    }
}

//! Test-side oracles, written without the library's linear algebra or hull
//! code, and random instance generators.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sparse_prime::supports::{normalize, SupportSystem};

pub type Pt = Vec<i64>;

/// Rank over Q by fraction-free elimination in i128.
#[allow(clippy::needless_range_loop)]
pub fn rank(vectors: &[Pt]) -> usize {
    let mut m: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let (a, b) = (m[r][c], m[i][c]);
            for j in 0..cols {
                m[i][j] = a * m[i][j] - b * m[r][j];
            }
            let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x));
            if g > 1 {
                for x in m[i].iter_mut() {
                    *x /= g;
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion; only for tiny matrices.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| [&row[..c], &row[c + 1..]].concat()).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

pub fn union(supports: &[Vec<Pt>], subset: &[usize]) -> Vec<Pt> {
    subset.iter().flat_map(|&j| supports[j].iter().cloned()).collect()
}

/// Every nonempty subset of `0..k`, as index lists.
pub fn subsets(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1 << k)).map(move |mask| (0..k).filter(|j| mask >> j & 1 == 1).collect())
}

/// Independent transversal by trying every choice.
pub fn has_transversal_bruteforce(supports: &[Vec<Pt>]) -> bool {
    let k = supports.len();
    if supports.iter().any(Vec::is_empty) {
        return false;
    }
    let mut idx = vec![0usize; k];
    loop {
        let chosen: Vec<Pt> = idx.iter().enumerate().map(|(j, &i)| supports[j][i].clone()).collect();
        if rank(&chosen) == k {
            return true;
        }
        let mut j = 0;
        while j < k {
            idx[j] += 1;
            if idx[j] < supports[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == k {
            return false;
        }
    }
}

/// `rank(∪_{j∈J} A_j) ≥ |J| + slack` for every nonempty `J`.
pub fn rank_condition(supports: &[Vec<Pt>], slack: usize) -> bool {
    subsets(supports.len()).all(|j| rank(&union(supports, &j)) >= j.len() + slack)
}

/// DMIT through duplication: each `(A_1, ..., A_j, A_j)` has an independent transversal.
pub fn dmit_by_duplication(supports: &[Vec<Pt>]) -> bool {
    (0..supports.len()).all(|j| {
        let mut prefix = supports[..=j].to_vec();
        prefix.push(supports[j].clone());
        has_transversal_bruteforce(&prefix)
    })
}

/// Twice the Euclidean area of the convex hull of planar points.
pub fn double_area(points: &[Pt]) -> i64 {
    let mut p: Vec<(i64, i64)> = points.iter().map(|v| (v[0], v[1])).collect();
    p.sort_unstable();
    p.dedup();
    if p.len() < 3 {
        return 0;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs()
}

pub fn minkowski(a: &[Pt], b: &[Pt]) -> Vec<Pt> {
    a.iter()
        .flat_map(|p| b.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x + y).collect()))
        .collect()
}

/// Mixed volume of two planar point sets: `area(P+Q) - area(P) - area(Q)`.
pub fn mixed_area(a: &[Pt], b: &[Pt]) -> i64 {
    let twice = double_area(&minkowski(a, b)) - double_area(a) - double_area(b);
    assert_eq!(twice % 2, 0);
    twice / 2
}

/// Lattice length of a set of integers.
pub fn lattice_length(values: &[i64]) -> i64 {
    values.iter().max().unwrap() - values.iter().min().unwrap()
}

/// Whether the rows of `basis` span a saturated lattice: the maximal minors
/// are coprime.
pub fn is_saturated(basis: &[Pt]) -> bool {
    let r = basis.len();
    let n = basis.first().map_or(0, Vec::len);
    let mut g = 0i128;
    for cols in subsets(n).filter(|c| c.len() == r) {
        let m: Vec<Vec<i128>> = basis
            .iter()
            .map(|b| cols.iter().map(|&c| b[c] as i128).collect())
            .collect();
        g = gcd(g, det(&m));
    }
    g == 1 || r == 0
}

/// Integer coordinates of `p` in `basis` by Cramer's rule; `None` off the lattice.
pub fn coordinates(basis: &[Pt], p: &Pt) -> Option<Vec<i64>> {
    let r = basis.len();
    let n = p.len();
    if r == 0 {
        return p.iter().all(|&x| x == 0).then(Vec::new);
    }
    if rank(&[basis.to_vec(), vec![p.clone()]].concat()) != r {
        return None;
    }
    let cols = subsets(n).filter(|c| c.len() == r).find(|cols| {
        let m: Vec<Vec<i128>> = basis
            .iter()
            .map(|b| cols.iter().map(|&c| b[c] as i128).collect())
            .collect();
        det(&m) != 0
    })?;
    // columns of the square system are the basis vectors restricted to `cols`
    let square: Vec<Vec<i128>> = cols
        .iter()
        .map(|&c| basis.iter().map(|b| b[c] as i128).collect())
        .collect();
    let d = det(&square);
    (0..r)
        .map(|i| {
            let replaced: Vec<Vec<i128>> = square
                .iter()
                .zip(&cols)
                .map(|(row, &c)| {
                    let mut row = row.clone();
                    row[i] = p[c] as i128;
                    row
                })
                .collect();
            let num = det(&replaced);
            (num % d == 0).then(|| (num / d) as i64)
        })
        .collect()
}

pub struct SystemShape {
    pub n: std::ops::RangeInclusive<usize>,
    /// Largest `k` as a function of `n`.
    pub max_k: fn(usize) -> usize,
    pub points: std::ops::RangeInclusive<usize>,
    pub coords: std::ops::RangeInclusive<i64>,
}

pub fn random_supports(rng: &mut ChaCha8Rng, n: usize, k: usize, shape: &SystemShape) -> Vec<Vec<Pt>> {
    (0..k)
        .map(|_| {
            let size = rng.random_range(shape.points.clone());
            (0..size)
                .map(|_| (0..n).map(|_| rng.random_range(shape.coords.clone())).collect())
                .collect()
        })
        .collect()
}

/// A random normalized system and its supports as plain vectors.
pub fn random_system(rng: &mut ChaCha8Rng, shape: &SystemShape) -> (SupportSystem, Vec<Vec<Pt>>) {
    let n = rng.random_range(shape.n.clone());
    let k = rng.random_range(1..=(shape.max_k)(n));
    let raw = random_supports(rng, n, k, shape);
    let system = normalize(&SupportSystem::from_coords(n, raw).unwrap()).unwrap();
    let plain = plain(&system);
    (system, plain)
}

pub fn plain(system: &SupportSystem) -> Vec<Vec<Pt>> {
    system
        .supports()
        .iter()
        .map(|s| s.points().iter().map(|p| p.coords().to_vec()).collect())
        .collect()
}

pub fn gallery() -> Vec<(&'static str, SupportSystem)> {
    let sys = |n, s: Vec<Vec<Vec<i64>>>| normalize(&SupportSystem::from_coords(n, s).unwrap()).unwrap();
    let line2 = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    let line4 = vec![vec![0, 0, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 0, 1]];
    let a1 = vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 0]];
    let a2 = vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 1, 1]];
    let lift = |pts: &Vec<Vec<i64>>| pts.iter().map(|p| [p.clone(), vec![0]].concat()).collect::<Vec<_>>();
    let hyperplane = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
    vec![
        ("factored line", sys(2, vec![vec![vec![1, 0], vec![2, 0], vec![1, 1]]])),
        ("three lines", sys(2, vec![line2.clone(), line2.clone(), line2.clone()])),
        ("three planes in 4d", sys(4, vec![line4.clone(), line4.clone(), line4])),
        (
            "line and hyperbola",
            sys(2, vec![line2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]]),
        ),
        ("line and hyperbola in 3d", sys(3, vec![a1.clone(), a2.clone()])),
        (
            "line and hyperbola in 4d",
            sys(4, vec![lift(&a1), lift(&a2), hyperplane]),
        ),
    ]
}

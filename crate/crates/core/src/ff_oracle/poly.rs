//! Dense univariate polynomials over a [`Field`], lowest degree first,
//! kept without trailing zeros. The zero polynomial is empty.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Field, PrimeField};

pub(crate) fn trim<F: Field>(k: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
    p
}

pub(crate) fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub(crate) fn add<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = k.zero();
    let out = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(k, out)
}

pub(crate) fn sub<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = k.zero();
    let out = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(k, out)
}

pub(crate) fn scale<F: Field>(k: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trim(k, a.iter().map(|x| k.mul(x, c)).collect())
}

pub(crate) fn mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn div_rem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = k.inv(&b[db]);
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = k.mul(&r[i + db], &lead_inv);
        if !k.is_zero(&c) {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&c, bj));
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(k, q), trim(k, r))
}

pub(crate) fn rem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    div_rem(k, a, b).1
}

pub(crate) fn div_exact<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (q, r) = div_rem(k, a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub(crate) fn monic<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => scale(k, a, &k.inv(lead)),
    }
}

/// Monic gcd; zero when both inputs are zero.
pub(crate) fn gcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    monic(k, &a)
}

/// Monic `g = gcd(a, m)` and `s` with `s·a ≡ g (mod m)`.
pub(crate) fn ext_gcd<F: Field>(k: &F, a: &[F::Elem], m: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), m.to_vec());
    let (mut s0, mut s1) = (vec![k.one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = div_rem(k, &r0, &r1);
        let s = sub(k, &s0, &mul(k, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    match r0.last() {
        None => (Vec::new(), Vec::new()),
        Some(lead) => {
            let c = k.inv(lead);
            (scale(k, &r0, &c), scale(k, &s0, &c))
        }
    }
}

pub(crate) fn derivative<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(&k.element(i as u64), c))
        .collect();
    trim(k, out)
}

/// Divides out the largest power of the variable.
pub(crate) fn strip_zero_roots<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let v = a.iter().take_while(|c| k.is_zero(c)).count();
    a[v..].to_vec()
}

/// Monic squarefree part: the product of the distinct monic irreducible
/// factors. Works in positive characteristic, where `a' = 0` means
/// `a` is a `p`th power.
pub(crate) fn radical<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let a = monic(k, a);
    if degree(&a).unwrap_or(0) == 0 {
        return vec![k.one()];
    }
    let d = derivative(k, &a);
    if d.is_empty() {
        let p = k.characteristic() as usize;
        let root: Vec<_> = a.iter().step_by(p).map(|c| k.pth_root(c)).collect();
        return radical(k, &root);
    }
    let u = gcd(k, &a, &d);
    // simple roots of w are the roots of a with multiplicity prime to p
    let w = div_exact(k, &a, &u);
    let mut rest = u;
    loop {
        let t = gcd(k, &rest, &w);
        if degree(&t) == Some(0) {
            break;
        }
        rest = div_exact(k, &rest, &t);
    }
    mul(k, &w, &radical(k, &rest))
}

/// Number of distinct roots in the algebraic closure; `a` nonzero.
pub(crate) fn distinct_root_count<F: Field>(k: &F, a: &[F::Elem]) -> usize {
    degree(&radical(k, a)).unwrap_or(0)
}

fn pow_mod(k: &PrimeField, a: &[u64], e: &BigUint, m: &[u64]) -> Vec<u64> {
    let mut acc = rem(k, &[1], m);
    let base = rem(k, a, m);
    for i in (0..e.bits()).rev() {
        acc = rem(k, &mul(k, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(k, &mul(k, &acc, &base), m);
        }
    }
    acc
}

/// Monic irreducible factors of a squarefree polynomial over `F_q`, `q` odd,
/// by distinct-degree then Cantor–Zassenhaus equal-degree splitting.
pub(crate) fn irreducible_factors(k: &PrimeField, f: &[u64]) -> Vec<Vec<u64>> {
    let q = BigUint::from(k.modulus());
    let x = vec![0, 1];
    let mut rest = monic(k, f);
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = pow_mod(k, &h, &q, &rest);
        let g = gcd(k, &rest, &sub(k, &h, &x));
        if degree(&g).unwrap_or(0) > 0 {
            equal_degree(k, &g, d, &mut rng, &mut out);
            rest = div_exact(k, &rest, &g);
            h = rem(k, &h, &rest);
        }
        d += 1;
    }
    if degree(&rest).unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

fn equal_degree(k: &PrimeField, g: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
    let n = degree(g).unwrap_or(0);
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let e = (BigUint::from(k.modulus()).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = trim(k, (0..n).map(|_| rng.random_range(0..k.modulus())).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(k, &pow_mod(k, &a, &e, g), &[1]);
        let c = gcd(k, g, &b);
        let dc = degree(&c).unwrap_or(0);
        if dc > 0 && dc < n {
            equal_degree(k, &c, d, rng, out);
            equal_degree(k, &div_exact(k, g, &c), d, rng, out);
            return;
        }
    }
}

/// Determinant of a square matrix over `F_q[x]` by fraction-free elimination.
pub(crate) fn determinant(k: &PrimeField, mut m: Vec<Vec<Vec<u64>>>) -> Vec<u64> {
    let n = m.len();
    let mut negate = false;
    let mut prev = vec![1];
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_empty()) else {
            return Vec::new();
        };
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let t = sub(k, &mul(k, &m[c][c], &m[i][j]), &mul(k, &m[i][c], &m[c][j]));
                m[i][j] = div_exact(k, &t, &prev);
            }
            m[i][c] = Vec::new();
        }
        prev = m[c][c].clone();
    }
    let det = if n == 0 { vec![1] } else { prev };
    if negate {
        sub(k, &[], &det)
    } else {
        det
    }
}

/// Resultant with respect to `y` of two polynomials given as coefficient
/// lists in `y` over `F_q[x]`, both of positive total `y`-degree or constant.
pub(crate) fn resultant_y(k: &PrimeField, f: &[Vec<u64>], g: &[Vec<u64>]) -> Vec<u64> {
    let m = degree(f).unwrap_or(0);
    let n = degree(g).unwrap_or(0);
    let size = m + n;
    let mut rows = vec![vec![Vec::new(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    determinant(k, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7)
    }

    #[test]
    fn division_roundtrip() {
        let k = f7();
        let a = vec![3, 0, 2, 5, 1];
        let b = vec![1, 4, 1];
        let (q, r) = div_rem(&k, &a, &b);
        assert_eq!(add(&k, &mul(&k, &q, &b), &r), a);
    }

    #[test]
    fn radical_removes_repeated_factors() {
        let k = f7();
        // (x-1)^2 (x-2)
        let a = mul(&k, &mul(&k, &[6, 1], &[6, 1]), &[5, 1]);
        assert_eq!(radical(&k, &a), mul(&k, &[6, 1], &[5, 1]));
    }

    #[test]
    fn radical_of_pth_powers() {
        let k = PrimeField::new(3);
        // (x+1)^3 (x+2)^4 over F_3: multiplicity 3 kills the derivative term
        let mut a = vec![1];
        for _ in 0..3 {
            a = mul(&k, &a, &[1, 1]);
        }
        for _ in 0..4 {
            a = mul(&k, &a, &[2, 1]);
        }
        assert_eq!(distinct_root_count(&k, &a), 2);
        // x^3 - 1 = (x - 1)^3
        assert_eq!(distinct_root_count(&k, &[2, 0, 0, 1]), 1);
    }

    #[test]
    fn factoring_over_f7() {
        let k = f7();
        // (x^2 + 1)(x - 3)(x^3 + x + 1): x^2+1 and x^3+x+1 are irreducible mod 7
        let a = mul(&k, &mul(&k, &[1, 0, 1], &[4, 1]), &[1, 1, 0, 1]);
        let mut fs = irreducible_factors(&k, &a);
        fs.sort();
        let mut expected = vec![vec![1, 0, 1], vec![4, 1], vec![1, 1, 0, 1]];
        expected.sort();
        assert_eq!(fs, expected);
    }

    #[test]
    fn splitting_linear_factors() {
        let k = f7();
        let a = (1..7).fold(vec![1], |acc, r| mul(&k, &acc, &[7 - r, 1]));
        assert_eq!(irreducible_factors(&k, &a).len(), 6);
    }

    #[test]
    fn resultant_of_lines() {
        let k = f7();
        // f = y - x, g = y + x - 2: resultant 2x - 2 up to sign
        let f = vec![vec![0, 6], vec![1]];
        let g = vec![vec![5, 1], vec![1]];
        let r = resultant_y(&k, &f, &g);
        assert_eq!(monic(&k, &r), vec![6, 1]);
    }

    #[test]
    fn determinant_needs_pivoting() {
        let k = f7();
        let m = vec![vec![vec![], vec![1]], vec![vec![1], vec![]]];
        assert_eq!(determinant(&k, m), vec![6]);
    }
}

//! Finite fields: `F_q` and `F_q[x]/(p)` for irreducible `p`.

use std::fmt::Debug;

use super::poly;

pub(crate) trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn element(&self, n: u64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// The unique `b` with `b^p = a`, `p` the characteristic.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// `q` must be prime and below `2^32`.
    pub fn new(q: u64) -> Self {
        debug_assert!((2..1 << 32).contains(&q));
        PrimeField { q }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.q as i64) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.q;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % self.q;
            }
            a = a * a % self.q;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn element(&self, n: u64) -> u64 {
        n % self.q
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.q
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.q - b) % self.q
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.q
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.q - 2)
    }
    fn characteristic(&self) -> u64 {
        self.q
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// `F_q[x]/(p)` with `p` monic irreducible. Elements are reduced
/// coefficient vectors, lowest degree first, without trailing zeros.
#[derive(Clone, Debug)]
pub(crate) struct ExtensionField {
    base: PrimeField,
    modulus: Vec<u64>,
}

impl ExtensionField {
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Self {
        debug_assert_eq!(modulus.last(), Some(&1));
        ExtensionField { base, modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn reduce(&self, a: &[u64]) -> Vec<u64> {
        poly::rem(&self.base, a, &self.modulus)
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        Vec::new()
    }
    fn one(&self) -> Vec<u64> {
        self.reduce(&[1])
    }
    fn element(&self, n: u64) -> Vec<u64> {
        poly::trim(&self.base, vec![n % self.base.modulus()])
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        poly::add(&self.base, a, b)
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        poly::sub(&self.base, a, b)
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.reduce(&poly::mul(&self.base, a, b))
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!a.is_empty(), "inverse of zero");
        let (g, s) = poly::ext_gcd(&self.base, a, &self.modulus);
        debug_assert_eq!(g, vec![1]);
        self.reduce(&s)
    }
    fn characteristic(&self) -> u64 {
        self.base.modulus()
    }
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        // Frobenius has order `degree`, so its inverse is its `degree - 1`st power
        let mut b = a.clone();
        for _ in 1..self.degree() {
            b = self.pow(&b, self.base.modulus());
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.reduce_i64(-2), 5);
    }

    #[test]
    fn gaussian_integers_mod_three() {
        // x^2 + 1 is irreducible over F_3
        let f = ExtensionField::new(PrimeField::new(3), vec![1, 0, 1]);
        let i = vec![0, 1];
        assert_eq!(f.mul(&i, &i), vec![2]);
        let a = vec![1, 1];
        assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        let r = f.pth_root(&a);
        assert_eq!(f.pow(&r, 3), a);
    }
}

//! Brute-force verification over finite fields.
//!
//! Coefficients are drawn at random in `F_q^*` and common zeros in the torus
//! are counted, either by enumerating `(F_q^*)^n` ([`rational_root_count`])
//! or exactly over the algebraic closure when `n = k = 2`
//! ([`exact_torus_count_2d`]). The exact count never exceeds the mixed
//! volume and equals it for generic coefficients.

mod field;
mod poly;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::supports::SupportSystem;
use field::{ExtensionField, Field, PrimeField};

pub const DEFAULT_Q: u64 = 10007;
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// A prime field `F_q` with `3 ≤ q < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    q: u64,
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self> {
        if !(3..1 << 32).contains(&q) || !is_prime(q) {
            return Err(Error::PreconditionFailed(format!(
                "field size must be an odd prime below 2^32, got {q}"
            )));
        }
        Ok(FieldSpec { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.q)
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { q: DEFAULT_Q }
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Nonzero coefficients in `F_q`, one list per support, in the order of the
/// support's points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientAssignment {
    coefficients: Vec<Vec<u64>>,
    seed: Option<u64>,
}

impl CoefficientAssignment {
    /// Takes residues as signed integers; each must be nonzero mod `q`.
    pub fn from_values(system: &SupportSystem, field: FieldSpec, values: Vec<Vec<i64>>) -> Result<Self> {
        let f = field.field();
        if values.len() != system.k() {
            return Err(Error::PreconditionFailed(format!(
                "expected {} coefficient lists, got {}",
                system.k(),
                values.len()
            )));
        }
        let mut coefficients = Vec::with_capacity(values.len());
        for (j, (support, list)) in system.supports().iter().zip(values).enumerate() {
            if list.len() != support.len() {
                return Err(Error::PreconditionFailed(format!(
                    "support {} has {} points but {} coefficients",
                    j + 1,
                    support.len(),
                    list.len()
                )));
            }
            let reduced: Vec<u64> = list.into_iter().map(|c| f.reduce_i64(c)).collect();
            if reduced.contains(&0) {
                return Err(Error::PreconditionFailed(format!(
                    "coefficient of polynomial {} vanishes mod {}",
                    j + 1,
                    field.q
                )));
            }
            coefficients.push(reduced);
        }
        Ok(CoefficientAssignment {
            coefficients,
            seed: None,
        })
    }

    /// Uniform draw from `(F_q^*)^{A_1} × ... × (F_q^*)^{A_k}`.
    pub fn random<R: Rng>(system: &SupportSystem, field: FieldSpec, rng: &mut R) -> Self {
        let coefficients = system
            .supports()
            .iter()
            .map(|s| (0..s.len()).map(|_| rng.random_range(1..field.q)).collect())
            .collect();
        CoefficientAssignment {
            coefficients,
            seed: None,
        }
    }

    pub fn seeded(system: &SupportSystem, field: FieldSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CoefficientAssignment {
            seed: Some(seed),
            ..Self::random(system, field, &mut rng)
        }
    }

    pub fn coefficients(&self) -> &[Vec<u64>] {
        &self.coefficients
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn check(&self, system: &SupportSystem) -> Result<()> {
        let shapes_match = self.coefficients.len() == system.k()
            && self
                .coefficients
                .iter()
                .zip(system.supports())
                .all(|(c, s)| c.len() == s.len());
        if shapes_match {
            Ok(())
        } else {
            Err(Error::PreconditionFailed(
                "coefficient assignment does not match the system".into(),
            ))
        }
    }
}

/// Exponent vectors shifted to be nonnegative; multiplying by a monomial
/// does not change zeros in the torus.
fn cleared_exponents(system: &SupportSystem, j: usize) -> Vec<Vec<u64>> {
    let points = system.support(j).points();
    let mins: Vec<i64> = (0..system.n())
        .map(|i| points.iter().map(|p| p.coords()[i]).min().unwrap_or(0))
        .collect();
    points
        .iter()
        .map(|p| p.coords().iter().zip(&mins).map(|(a, m)| (a - m) as u64).collect())
        .collect()
}

/// Number of common zeros in `(F_q^*)^n`. Only `F_q`-rational points are
/// seen, so this is a lower bound for the count over the closure.
pub fn rational_root_count(system: &SupportSystem, coeffs: &CoefficientAssignment, field: FieldSpec) -> Result<u64> {
    rational_root_count_with_budget(system, coeffs, field, DEFAULT_ENUMERATION_BUDGET)
}

pub fn rational_root_count_with_budget(
    system: &SupportSystem,
    coeffs: &CoefficientAssignment,
    field: FieldSpec,
    budget: u128,
) -> Result<u64> {
    coeffs.check(system)?;
    let n = system.n();
    let points = (field.q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > budget {
        return Err(Error::BudgetExceeded { points, budget });
    }
    let f = field.field();
    let polys: Vec<(Vec<Vec<u64>>, &[u64])> = (0..system.k())
        .map(|j| (cleared_exponents(system, j), coeffs.coefficients[j].as_slice()))
        .collect();
    let max_deg: Vec<usize> = (0..n)
        .map(|i| {
            polys
                .iter()
                .flat_map(|(exps, _)| exps.iter().map(move |e| e[i] as usize))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let count_with_first = |first: Option<u64>| -> u64 {
        let mut x = vec![1u64; n];
        if let Some(t) = first {
            x[0] = t;
        }
        let free = usize::from(first.is_some());
        let mut powers: Vec<Vec<u64>> = vec![Vec::new(); n];
        let mut count = 0;
        loop {
            for i in 0..n {
                powers[i].clear();
                let mut acc = 1;
                for _ in 0..=max_deg[i] {
                    powers[i].push(acc);
                    acc = acc * x[i] % f.modulus();
                }
            }
            let vanishes = polys.iter().all(|(exps, cs)| {
                let value = exps.iter().zip(cs.iter()).fold(0, |acc, (e, c)| {
                    let m = e
                        .iter()
                        .enumerate()
                        .fold(*c, |m, (i, &d)| m * powers[i][d as usize] % f.modulus());
                    (acc + m) % f.modulus()
                });
                value == 0
            });
            count += u64::from(vanishes);
            // odometer over the remaining coordinates
            let mut i = free;
            loop {
                if i == n {
                    return count;
                }
                x[i] += 1;
                if x[i] < f.modulus() {
                    break;
                }
                x[i] = 1;
                i += 1;
            }
        }
    };
    if n == 0 {
        return Ok(count_with_first(None));
    }
    Ok((1..f.modulus())
        .into_par_iter()
        .map(|t| count_with_first(Some(t)))
        .sum())
}

type Bivariate = Vec<Vec<u64>>;

/// The cleared polynomial as coefficients in `y` over `F_q[x]`.
fn bivariate(system: &SupportSystem, coeffs: &CoefficientAssignment, j: usize, f: &PrimeField) -> Bivariate {
    let exps = cleared_exponents(system, j);
    let dy = exps.iter().map(|e| e[1] as usize).max().unwrap_or(0);
    let dx = exps.iter().map(|e| e[0] as usize).max().unwrap_or(0);
    let mut out = vec![vec![0; dx + 1]; dy + 1];
    for (e, &c) in exps.iter().zip(&coeffs.coefficients[j]) {
        let slot = &mut out[e[1] as usize][e[0] as usize];
        *slot = f.add(slot, &c);
    }
    let out: Vec<Vec<u64>> = out.into_iter().map(|c| poly::trim(f, c)).collect();
    let keep = out.iter().rposition(|c| !c.is_empty()).map_or(0, |i| i + 1);
    out[..keep].to_vec()
}

/// Number of distinct common zeros in `(K^*)^2`, `K` the algebraic closure
/// of `F_q`, for a system with `n = k = 2`.
pub fn exact_torus_count_2d(system: &SupportSystem, coeffs: &CoefficientAssignment, field: FieldSpec) -> Result<u64> {
    if system.n() != 2 || system.k() != 2 {
        return Err(Error::PreconditionFailed(format!(
            "exact counting needs two polynomials in two variables, got k = {} in n = {}",
            system.k(),
            system.n()
        )));
    }
    coeffs.check(system)?;
    let f = field.field();
    let f1 = bivariate(system, coeffs, 0, &f);
    let f2 = bivariate(system, coeffs, 1, &f);
    if f1.len() <= 1 && f2.len() <= 1 {
        // neither involves y
        let g = poly::gcd(&f, f1.first().map_or(&[][..], |c| c), f2.first().map_or(&[][..], |c| c));
        let g = poly::strip_zero_roots(&f, &g);
        return if poly::degree(&g).unwrap_or(0) > 0 {
            Err(Error::CommonFactor)
        } else {
            Ok(0)
        };
    }
    let r = poly::resultant_y(&f, &f1, &f2);
    if r.is_empty() {
        return Err(Error::CommonFactor);
    }
    let r = poly::strip_zero_roots(&f, &r);
    if poly::degree(&r) == Some(0) {
        return Ok(0);
    }
    let mut total = 0;
    for p in poly::irreducible_factors(&f, &poly::radical(&f, &r)) {
        let ext = ExtensionField::new(f, p);
        let specialize =
            |b: &Bivariate| -> Vec<Vec<u64>> { poly::trim(&ext, b.iter().map(|c| ext.reduce(c)).collect()) };
        let g = poly::gcd(&ext, &specialize(&f1), &specialize(&f2));
        if g.is_empty() {
            return Err(Error::CommonFactor);
        }
        let g = poly::strip_zero_roots(&ext, &g);
        total += (ext.degree() * poly::distinct_root_count(&ext, &g)) as u64;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Rational,
    Exact2d,
}

impl CountMethod {
    pub fn count(self, system: &SupportSystem, coeffs: &CoefficientAssignment, field: FieldSpec) -> Result<u64> {
        match self {
            CountMethod::Rational => rational_root_count(system, coeffs, field),
            CountMethod::Exact2d => exact_torus_count_2d(system, coeffs, field),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootCountReport {
    pub q: u64,
    pub method: CountMethod,
    pub seed: u64,
    pub trials: usize,
    pub counts: Vec<u64>,
    pub histogram: BTreeMap<u64, usize>,
    /// Most frequent count, the smallest on ties; `None` without trials.
    pub mode: Option<u64>,
}

/// Runs `trials` independent coefficient draws; trial `t` uses seed
/// `seed + t`, so the report does not depend on scheduling.
pub fn bkk_experiment(
    system: &SupportSystem,
    field: FieldSpec,
    trials: usize,
    seed: u64,
    method: CountMethod,
) -> Result<RootCountReport> {
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let coeffs = CoefficientAssignment::seeded(system, field, seed.wrapping_add(t));
            method.count(system, &coeffs, field)
        })
        .collect::<Result<Vec<u64>>>()?;
    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let mode = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(c, _)| *c);
    Ok(RootCountReport {
        q: field.q,
        method,
        seed,
        trials,
        counts,
        histogram,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supports::normalize;

    fn sys(n: usize, s: Vec<Vec<Vec<i64>>>) -> SupportSystem {
        SupportSystem::from_coords(n, s).unwrap()
    }

    fn fq(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::new(2).is_err());
        assert!(FieldSpec::new(9).is_err());
        assert_eq!(fq(10007).q(), 10007);
    }

    #[test]
    fn linear_in_one_variable() {
        let s = sys(1, vec![vec![vec![1], vec![0]]]);
        let c = CoefficientAssignment::from_values(&s, fq(7), vec![vec![1, -3]]).unwrap();
        assert_eq!(rational_root_count(&s, &c, fq(7)).unwrap(), 1);
    }

    #[test]
    fn nonzero_constant_has_no_roots() {
        let s = sys(1, vec![vec![vec![0]]]);
        let c = CoefficientAssignment::from_values(&s, fq(7), vec![vec![4]]).unwrap();
        assert_eq!(rational_root_count(&s, &c, fq(7)).unwrap(), 0);
    }

    #[test]
    fn zero_coefficients_rejected() {
        let s = sys(1, vec![vec![vec![0]]]);
        assert!(CoefficientAssignment::from_values(&s, fq(7), vec![vec![14]]).is_err());
    }

    #[test]
    fn two_lines_over_f7() {
        let s = sys(
            2,
            vec![vec![vec![1, 0], vec![0, 1], vec![0, 0]], vec![vec![1, 0], vec![0, 1]]],
        );
        let c = CoefficientAssignment::from_values(&s, fq(7), vec![vec![1, 1, -2], vec![1, -1]]).unwrap();
        assert_eq!(exact_torus_count_2d(&s, &c, fq(7)).unwrap(), 1);
        assert_eq!(rational_root_count(&s, &c, fq(7)).unwrap(), 1);
    }

    #[test]
    fn parabola_and_diagonal_over_f11() {
        let s = normalize(&sys(
            2,
            vec![vec![vec![2, 0], vec![0, 0]], vec![vec![0, 1], vec![1, 0]]],
        ))
        .unwrap();
        let c = CoefficientAssignment::from_values(&s, fq(11), vec![vec![1, -1], vec![1, -1]]).unwrap();
        assert_eq!(exact_torus_count_2d(&s, &c, fq(11)).unwrap(), 2);
    }

    #[test]
    fn roots_outside_the_prime_field_are_counted() {
        // x^2 + 1 = 0, y = x over F_7: both roots live in F_49
        let s = sys(2, vec![vec![vec![2, 0], vec![0, 0]], vec![vec![0, 1], vec![1, 0]]]);
        let c = CoefficientAssignment::from_values(&s, fq(7), vec![vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(exact_torus_count_2d(&s, &c, fq(7)).unwrap(), 2);
        assert_eq!(rational_root_count(&s, &c, fq(7)).unwrap(), 0);
    }

    #[test]
    fn common_factor_detected() {
        // x + y and 2x + 2y
        let s = sys(2, vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 1]]]);
        let c = CoefficientAssignment::from_values(&s, fq(7), vec![vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(exact_torus_count_2d(&s, &c, fq(7)), Err(Error::CommonFactor));
    }

    #[test]
    fn budget_is_enforced() {
        let s = sys(3, vec![vec![vec![0, 0, 0]]]);
        let c = CoefficientAssignment::seeded(&s, fq(10007), 1);
        assert!(matches!(
            rational_root_count(&s, &c, fq(10007)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn experiments_are_deterministic() {
        let s = sys(2, vec![vec![vec![0, 0], vec![2, 0]], vec![vec![0, 0], vec![0, 1]]]);
        let a = bkk_experiment(&s, fq(10007), 20, 7, CountMethod::Exact2d).unwrap();
        let b = bkk_experiment(&s, fq(10007), 20, 7, CountMethod::Exact2d).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mode, Some(2));
    }

    #[test]
    fn unimodular_pair_always_has_one_root() {
        let s = sys(2, vec![vec![vec![0, 0], vec![1, 0]], vec![vec![0, 0], vec![0, 1]]]);
        let r = bkk_experiment(&s, fq(10007), 20, 0, CountMethod::Exact2d).unwrap();
        assert!(r.counts.iter().all(|&c| c == 1));
    }
}

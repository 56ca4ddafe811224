use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::algebra::FieldSpec;
use crate::error::{Error, Result};

use super::{DimensionEvidence, DimensionMethod, DimensionReport, IdealBasis};

/// Largest number of points enumerated for a single prime.
pub const POINT_COUNT_BUDGET: u64 = 100_000_000;

struct ModPoly {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

fn reduce_mod(b: &IdealBasis, p: u32) -> Result<Vec<ModPoly>> {
    let field = FieldSpec::Prime(p);
    b.generators()
        .iter()
        .map(|g| {
            let g = g.change_field(field)?;
            let terms = g
                .terms()
                .map(|(m, c)| {
                    let c = c.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap();
                    let vars = m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as u32))
                        .collect();
                    (c, vars)
                })
                .collect();
            Ok(ModPoly { terms })
        })
        .collect()
}

fn pow_mod(mut b: u64, mut e: u32, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn vanishes(gens: &[ModPoly], point: &[u64], p: u64) -> bool {
    gens.iter().all(|g| {
        g.terms.iter().fold(0u64, |acc, (c, vars)| {
            let t = vars
                .iter()
                .fold(*c, |t, &(i, e)| t * pow_mod(point[i], e, p) % p);
            (acc + t) % p
        }) == 0
    })
}

fn count_points(gens: &[ModPoly], n: usize, p: u64) -> u64 {
    if n == 0 {
        return vanishes(gens, &[], p) as u64;
    }
    (0..p)
        .into_par_iter()
        .map(|first| {
            let mut point = vec![0u64; n];
            point[0] = first;
            let mut count = 0u64;
            loop {
                if vanishes(gens, &point, p) {
                    count += 1;
                }
                // odometer over coordinates 1..n
                let mut i = n - 1;
                loop {
                    if i == 0 {
                        return count;
                    }
                    point[i] += 1;
                    if point[i] < p {
                        break;
                    }
                    point[i] = 0;
                    i -= 1;
                }
            }
        })
        .sum()
}

/// Integer `e` with `p^(2e-1) <= N^2 < p^(2e+1)`, i.e. `log_p N` rounded.
fn rounded_log(n: u64, p: u64) -> i64 {
    let n2 = (n as u128) * (n as u128);
    let p = p as u128;
    let mut e = 0i64;
    // invariant: N^2 >= p^(2e-1)
    let mut upper = p; // p^(2e+1)
    while n2 >= upper {
        e += 1;
        upper = upper.saturating_mul(p).saturating_mul(p);
    }
    e
}

/// Counts `#V(F_p)` by enumerating `F_p^n` for each prime and estimates the
/// dimension as `log_p N` rounded, using the largest prime. A heuristic
/// oracle, not a certificate. Generators must have integer coefficients or
/// denominators prime to every `p`.
pub fn point_count_dimension(b: &IdealBasis, primes: &[u32]) -> Result<DimensionReport> {
    if primes.is_empty() {
        return Err(Error::InvalidInput("at least one prime is required".into()));
    }
    let n = b.ring().len();
    let mut counts = Vec::with_capacity(primes.len());
    for &p in primes {
        FieldSpec::prime(p as u64)?;
        if let FieldSpec::Prime(q) = b.field() {
            if q != p {
                return Err(Error::FieldMismatch(format!(
                    "ideal over F_{q} cannot be counted over F_{p}"
                )));
            }
        }
        let total = (p as u64)
            .checked_pow(n as u32)
            .filter(|&t| t <= POINT_COUNT_BUDGET);
        if total.is_none() {
            return Err(Error::Inconclusive(format!(
                "enumerating {p}^{n} points exceeds the budget of {POINT_COUNT_BUDGET}"
            )));
        }
        let gens = reduce_mod(b, p)?;
        counts.push((p, count_points(&gens, n, p as u64)));
    }
    let &(p_max, n_max) = counts.iter().max_by_key(|(p, _)| *p).unwrap();
    let dimension = if counts.iter().all(|&(_, c)| c == 0) || n_max == 0 {
        -1
    } else {
        rounded_log(n_max, p_max as u64)
    };
    Ok(DimensionReport {
        dimension,
        method: DimensionMethod::PointCount,
        evidence: DimensionEvidence::PointCounts(counts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_in, Ring};

    fn ideal(n: usize, gens: &[&str], field: FieldSpec) -> IdealBasis {
        let r = Ring::indexed("x", n);
        IdealBasis::new(
            gens.iter()
                .map(|g| parse_in(g, &r, field).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn hand_counts() {
        let rep = point_count_dimension(&ideal(2, &["x0*x1"], FieldSpec::Prime(5)), &[5]).unwrap();
        assert_eq!(rep.evidence, DimensionEvidence::PointCounts(vec![(5, 9)]));
        assert_eq!(rep.dimension, 1);
        let rep =
            point_count_dimension(&ideal(3, &["x0", "x1"], FieldSpec::Prime(7)), &[7]).unwrap();
        assert_eq!(rep.evidence, DimensionEvidence::PointCounts(vec![(7, 7)]));
        assert_eq!(rep.dimension, 1);
        let rep = point_count_dimension(&ideal(2, &["1"], FieldSpec::Rationals), &[5, 7]).unwrap();
        assert_eq!(rep.dimension, -1);
    }

    #[test]
    fn rounding_and_budget() {
        assert_eq!(rounded_log(1, 101), 0);
        assert_eq!(rounded_log(101, 101), 1);
        assert_eq!(rounded_log(2 * 101 - 1, 101), 1);
        assert_eq!(rounded_log(101 * 101, 101), 2);
        assert_eq!(rounded_log(10, 101), 0);
        assert_eq!(rounded_log(11, 101), 1);
        let big = ideal(4, &["x0"], FieldSpec::Rationals);
        assert!(point_count_dimension(&big, &[211])
            .unwrap_err()
            .is_inconclusive());
    }
}

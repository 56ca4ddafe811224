//! Numeric thresholds: the recursive smooth-strength bound `U_str` for
//! unirationality and the hypothesis bounds of the plane constructions.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

/// Degrees kept sorted in non-decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreeTuple(Vec<u32>);

impl DegreeTuple {
    pub fn new<I: IntoIterator<Item = u32>>(degrees: I) -> Self {
        let mut v: Vec<u32> = degrees.into_iter().collect();
        v.sort_unstable();
        DegreeTuple(v)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    /// Drops 0s and 1s; these contribute nothing to `U_str`.
    pub fn normalized(&self) -> DegreeTuple {
        DegreeTuple(self.0.iter().copied().filter(|&d| d >= 2).collect())
    }

    /// Every degree lowered by `by`, saturating at 0.
    pub fn shifted_down(&self, by: u32) -> DegreeTuple {
        DegreeTuple::new(self.0.iter().map(|d| d.saturating_sub(by)))
    }
}

/// `C(n, k)` for a big `n` and small `k`.
pub fn big_binomial(n: &BigUint, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for j in 0..k {
        if *n < BigUint::from(j) {
            return BigUint::from(0u32);
        }
        acc = acc * (n - BigUint::from(j)) / BigUint::from(j + 1);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

thread_local! {
    static U_STR_MEMO: RefCell<HashMap<DegreeTuple, BigUint>> = RefCell::new(HashMap::new());
}

/// `U_str() = 1` and
/// `U_str(d) = 1 + 2 Σ_i C(U_str(d_1 - 1, ..., d_c - 1) + d_i + 1, d_i)`,
/// evaluated on normalized tuples.
pub fn u_str(ds: &DegreeTuple) -> BigUint {
    let ds = ds.normalized();
    if ds.0.is_empty() {
        return BigUint::one();
    }
    if let Some(v) = U_STR_MEMO.with(|m| m.borrow().get(&ds).cloned()) {
        return v;
    }
    let inner = u_str(&ds.shifted_down(1));
    let mut sum = BigUint::from(0u32);
    for &d in &ds.0 {
        sum += big_binomial(&(&inner + BigUint::from(d + 1)), d);
    }
    let v = BigUint::one() + BigUint::from(2u32) * sum;
    U_STR_MEMO.with(|m| m.borrow_mut().insert(ds, v.clone()));
    v
}

/// Smallest `n` with `n - k - 1 >= Σ C(k + 1 + d_i, k + 1)`: enough room for
/// a `k`-plane in the variety to extend to `(k+1)`-planes.
pub fn plane_extension_min_ambient(ds: &DegreeTuple, k: u64) -> u64 {
    k + 1
        + ds.0
            .iter()
            .map(|&d| binomial(k + 1 + d as u64, k + 1))
            .sum::<u64>()
}

/// Smallest `n` with `n >= k + 1 + Σ C(k + d_i - 1, k)`, the ambient size at
/// which the residual map can surject onto forms of degrees `d_i - 1`.
pub fn psi_surjectivity_min_ambient(ds: &DegreeTuple, k: u64) -> u64 {
    k + 1
        + ds.0
            .iter()
            .map(|&d| {
                if d == 0 {
                    0
                } else {
                    binomial(k + d as u64 - 1, k)
                }
            })
            .sum::<u64>()
}

/// `1 + 2 Σ C(d_i + k + 1, k + 1)`: smooth strength making residual
/// complete intersections dominate.
pub fn residual_dominance_strength(ds: &DegreeTuple, k: u64) -> u64 {
    1 + 2 * ds
        .0
        .iter()
        .map(|&d| binomial(d as u64 + k + 1, k + 1))
        .sum::<u64>()
}

/// `2c + 1`: collective smooth strength making `c` forms a complete
/// intersection that is irreducible and reduced.
pub fn complete_intersection_strength(c: u64) -> u64 {
    2 * c + 1
}

/// `1 + 2 Σ C(k + d_i, k)`: smooth strength making the variety of `k`-planes
/// irreducible of the expected dimension.
pub fn fano_expected_dimension_strength(ds: &DegreeTuple, k: u64) -> u64 {
    1 + 2 * ds.0.iter().map(|&d| binomial(k + d as u64, k)).sum::<u64>()
}

/// `2s + 2`: smooth strength ceiling for strength `s`.
pub fn smooth_strength_ceiling(s: i64) -> i64 {
    2 * s + 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdRow {
    pub degrees: Vec<u32>,
    pub k: u64,
    pub u_str: String,
    pub fano_expected_dimension_strength: u64,
    pub plane_extension_min_ambient: u64,
    pub psi_surjectivity_min_ambient: u64,
    pub residual_dominance_strength: u64,
    pub complete_intersection_strength: u64,
}

pub fn threshold_row(ds: &DegreeTuple, k: u64) -> ThresholdRow {
    ThresholdRow {
        degrees: ds.0.clone(),
        k,
        u_str: u_str(ds).to_string(),
        fano_expected_dimension_strength: fano_expected_dimension_strength(ds, k),
        plane_extension_min_ambient: plane_extension_min_ambient(ds, k),
        psi_surjectivity_min_ambient: psi_surjectivity_min_ambient(ds, k),
        residual_dominance_strength: residual_dominance_strength(ds, k),
        complete_intersection_strength: complete_intersection_strength(ds.0.len() as u64),
    }
}

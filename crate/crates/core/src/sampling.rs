//! Seeded randomness shared by the sampling checks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FieldSpec, Scalar};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[-bound, bound]` over the rationals, uniform in `F_p` otherwise.
pub fn scalar(rng: &mut SampleRng, field: FieldSpec, bound: i64) -> Scalar {
    match field {
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-bound..=bound)),
        FieldSpec::Prime(p) => Scalar::from_integer(BigInt::from(rng.gen_range(0..p))),
    }
}

/// Like [`scalar`] but never zero.
pub fn nonzero_scalar(rng: &mut SampleRng, field: FieldSpec, bound: i64) -> Scalar {
    match field {
        FieldSpec::Rationals => {
            let v = rng.gen_range(1..=bound);
            field.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
        FieldSpec::Prime(p) => Scalar::from_integer(BigInt::from(rng.gen_range(1..p))),
    }
}

pub fn nonzero_vector(
    rng: &mut SampleRng,
    field: FieldSpec,
    len: usize,
    bound: i64,
) -> Vec<Scalar> {
    (0..len)
        .map(|_| nonzero_scalar(rng, field, bound))
        .collect()
}

pub fn vector(rng: &mut SampleRng, field: FieldSpec, len: usize, bound: i64) -> Vec<Scalar> {
    (0..len).map(|_| scalar(rng, field, bound)).collect()
}

//! Ideals at desk scale: Gröbner bases, affine dimension, and a brute-force
//! point-count oracle over prime fields.

mod dimension;
mod groebner;
mod point_count;

pub use dimension::{affine_dimension, combinatorial_dimension};
pub use groebner::{groebner_basis, is_groebner_basis, normal_form};
pub use point_count::{point_count_dimension, POINT_COUNT_BUDGET};

use serde::Serialize;

use crate::algebra::{FieldSpec, Polynomial, Ring};
use crate::error::{Error, Result};

/// Generators in one ring over one field. Zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    ring: Ring,
    field: FieldSpec,
    generators: Vec<Polynomial>,
}

impl IdealBasis {
    pub fn new(generators: Vec<Polynomial>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("an ideal needs at least one generator".into()))?;
        let (ring, field) = (first.ring().clone(), first.field());
        for g in &generators {
            if g.ring() != &ring {
                return Err(Error::RingMismatch(
                    "generators live in different rings".into(),
                ));
            }
            if g.field() != field {
                return Err(Error::FieldMismatch(
                    "generators over different fields".into(),
                ));
            }
        }
        Ok(IdealBasis {
            ring,
            field,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn contains_unit(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.is_constant() && !g.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroebnerLimits {
    pub max_basis_size: usize,
    pub max_pair_degree: u32,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_basis_size: 5000,
            max_pair_degree: 24,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionMethod {
    Groebner,
    PointCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionEvidence {
    /// Leading monomials of the reduced basis, as text.
    LeadingTerms(Vec<String>),
    /// `(p, #V(F_p))` for every prime used, in the order given.
    PointCounts(Vec<(u32, u64)>),
}

/// `dimension == -1` encodes the empty variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub dimension: i64,
    pub method: DimensionMethod,
    pub evidence: DimensionEvidence,
}

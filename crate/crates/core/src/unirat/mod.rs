//! Explicit rational parametrizations with exact verification: every map
//! returned here has been substituted back into its target equations, and
//! its Jacobian rank has been measured at a seeded sample point.

mod cubic;
mod pullback;
mod quadric;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{FieldSpec, Matrix, Monomial, Polynomial, Ring, Scalar, Substitution};
use crate::error::{Error, Result};
use crate::sampling;
use crate::strength::serialize_scalars;

pub use cubic::cubic_with_line_parametrization;
pub use pullback::{monomial_fiber_family, pullback_parametrization, FiberFamily};
pub use quadric::quadric_parametrization;

/// Sample points tried before a rank deficiency is reported.
pub const MAX_RANK_ATTEMPTS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapVerification {
    pub substitution_ok: bool,
    /// Nonzero composites, empty when `substitution_ok`.
    pub residues: Vec<String>,
    /// `rank [J(v) | ρ(v)] - 1`: dimension of the image near `ρ(v)`.
    pub jacobian_rank: i64,
    #[serde(serialize_with = "serialize_scalars")]
    pub rank_point: Vec<Scalar>,
    pub dominance_target_dim: i64,
    pub dominant: bool,
    pub seed: u64,
    pub attempts: u64,
}

impl MapVerification {
    pub fn passed(&self) -> bool {
        self.substitution_ok && self.dominant
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalMapRecord {
    pub source_vars: Vec<String>,
    #[serde(skip)]
    pub source: Ring,
    pub degree: u32,
    pub components: Vec<Polynomial>,
    pub target_constraint: Vec<Polynomial>,
    pub verification: MapVerification,
}

impl RationalMapRecord {
    pub fn field(&self) -> FieldSpec {
        self.components[0].field()
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let field = self.field();
        let point: Vec<Scalar> = point
            .iter()
            .map(|c| field.from_rational(c))
            .collect::<Result<_>>()?;
        self.components.iter().map(|c| c.evaluate(&point)).collect()
    }
}

/// `F(g_0, ..., g_n)`.
pub fn compose_substitution(f: &Polynomial, gs: &[Polynomial]) -> Result<Polynomial> {
    if gs.len() != f.ring().len() {
        return Err(Error::LengthMismatch {
            expected: f.ring().len(),
            actual: gs.len(),
        });
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(f.to_string()));
    }
    let d = common_degree(gs)?;
    let target = gs[0].ring();
    let mut subst = Substitution::new(target, f.field());
    for (j, g) in gs.iter().enumerate() {
        if g.ring() != target {
            return Err(Error::RingMismatch(
                "substituted polynomials live in different rings".into(),
            ));
        }
        subst.insert(f.ring().var(j), g.clone())?;
    }
    let out = f.substitute(&subst)?;
    debug_assert!(out.is_zero() || out.degree() == Some(f.degree().unwrap_or(0) * d));
    Ok(out)
}

fn common_degree(gs: &[Polynomial]) -> Result<u32> {
    let mut degree = None;
    for g in gs {
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous(g.to_string()));
        }
        let Some(d) = g.degree() else { continue };
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => {
                return Err(Error::WrongDegree {
                    expected: format!("common degree {e}"),
                    actual: format!("degree {d} in {g}"),
                })
            }
            _ => {}
        }
    }
    degree.ok_or_else(|| Error::InvalidInput("all substituted polynomials are zero".into()))
}

/// First of `h`, `h1`, `h2`, ... not already a variable of `ring`.
pub(crate) fn fresh_name(ring: &Ring, base: &str) -> String {
    if ring.index_of(base).is_none() {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| ring.index_of(n).is_none())
        .unwrap()
}

/// Makes every component homogeneous of the largest degree present, appending
/// a homogenizing variable only when needed.
pub(crate) fn homogenize_components(components: Vec<Polynomial>) -> Result<Vec<Polynomial>> {
    let degrees: Vec<Option<u32>> = components.iter().map(Polynomial::degree).collect();
    let top = degrees.iter().flatten().copied().max().unwrap_or(0);
    let uniform = components
        .iter()
        .all(|c| c.is_zero() || (c.is_homogeneous() && c.degree() == Some(top)));
    if uniform {
        return Ok(components);
    }
    let h = fresh_name(components[0].ring(), "h");
    components.iter().map(|c| c.homogenize(&h, top)).collect()
}

/// Divides out the monomial common to every term and, over the rationals,
/// the positive rational content.
pub(crate) fn normalize_components(components: Vec<Polynomial>) -> Vec<Polynomial> {
    let Some(first) = components.iter().find(|c| !c.is_zero()) else {
        return components;
    };
    let ring = first.ring().clone();
    let field = first.field();
    let mut gcd_exp: Option<Vec<u16>> = None;
    for c in &components {
        for (m, _) in c.terms() {
            gcd_exp = Some(match gcd_exp {
                None => m.exponents().to_vec(),
                Some(g) => g
                    .iter()
                    .zip(m.exponents())
                    .map(|(a, b)| *a.min(b))
                    .collect(),
            });
        }
    }
    let gcd_exp = gcd_exp.unwrap_or_default();
    let mut scale = field.one();
    if field == FieldSpec::Rationals {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &components {
            for (_, v) in c.terms() {
                num = num.gcd(v.numer());
                den = den.lcm(v.denom());
            }
        }
        scale = Scalar::new(den, num.abs());
    }
    components
        .into_iter()
        .map(|c| {
            Polynomial::from_terms(
                &ring,
                field,
                c.terms().map(|(m, v)| {
                    let e = m.exponents().iter().zip(&gcd_exp).map(|(a, g)| a - g);
                    (Monomial::from_exponents(e), field.mul(v, &scale))
                }),
            )
        })
        .collect()
}

/// `rank [J(v) | ρ(v)] - 1` for a polynomial map `ρ` at `v`; `-1` when the
/// map and its derivatives all vanish there.
pub fn jacobian_rank(components: &[Polynomial], point: &[Scalar]) -> Result<i64> {
    let derivs: Vec<Vec<Polynomial>> = components.iter().map(Polynomial::gradient).collect();
    jacobian_rank_with(components, &derivs, point)
}

fn jacobian_rank_with(
    components: &[Polynomial],
    derivs: &[Vec<Polynomial>],
    point: &[Scalar],
) -> Result<i64> {
    let field = components[0].field();
    let rows = components
        .iter()
        .zip(derivs)
        .map(|(c, ds)| {
            let mut row = ds
                .iter()
                .map(|d| d.evaluate(point))
                .collect::<Result<Vec<_>>>()?;
            row.push(c.evaluate(point)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows)?.rank(field) as i64 - 1)
}

/// Substitutes the components into every constraint, then samples points
/// off the base locus until the Jacobian rank reaches `target_dim` or the
/// attempts run out.
pub(crate) fn verify_map(
    components: &[Polynomial],
    constraints: &[Polynomial],
    subst: &Substitution,
    target_dim: i64,
    seed: u64,
) -> Result<MapVerification> {
    let residues: Vec<String> = constraints
        .iter()
        .map(|c| c.substitute(subst))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.to_string())
        .collect();
    let field = components[0].field();
    let nvars = components[0].ring().len();
    let derivs: Vec<Vec<Polynomial>> = components.iter().map(Polynomial::gradient).collect();
    let mut best: Option<(i64, Vec<Scalar>)> = None;
    let mut attempts = 0;
    for attempt in 0..MAX_RANK_ATTEMPTS {
        attempts = attempt + 1;
        let mut rng = sampling::rng(seed.wrapping_add(attempt));
        let point = sampling::nonzero_vector(&mut rng, field, nvars, 9);
        let image = components
            .iter()
            .map(|c| c.evaluate(&point))
            .collect::<Result<Vec<_>>>()?;
        if image.iter().all(Zero::is_zero) {
            continue;
        }
        let rank = jacobian_rank_with(components, &derivs, &point)?;
        if best.as_ref().is_none_or(|(r, _)| rank > *r) {
            best = Some((rank, point));
        }
        if rank >= target_dim {
            break;
        }
    }
    let (jacobian_rank, rank_point) = best.unwrap_or((-1, Vec::new()));
    Ok(MapVerification {
        substitution_ok: residues.is_empty(),
        residues,
        jacobian_rank,
        rank_point,
        dominance_target_dim: target_dim,
        dominant: jacobian_rank == target_dim,
        seed,
        attempts,
    })
}

pub(crate) fn record(
    components: Vec<Polynomial>,
    constraints: Vec<Polynomial>,
    subst: &Substitution,
    target_dim: i64,
    seed: u64,
) -> Result<RationalMapRecord> {
    let verification = verify_map(&components, &constraints, subst, target_dim, seed)?;
    let source = components[0].ring().clone();
    Ok(RationalMapRecord {
        source_vars: source.vars().to_vec(),
        source,
        degree: components
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0),
        components,
        target_constraint: constraints,
        verification,
    })
}

/// Sends the variables of `target_ring` to `components` in order.
pub(crate) fn positional_substitution(
    target_ring: &Ring,
    components: &[Polynomial],
) -> Result<Substitution> {
    let mut s = Substitution::new(components[0].ring(), components[0].field());
    for (j, c) in components.iter().enumerate() {
        s.insert(target_ring.var(j), c.clone())?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_in;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn compose_examples() {
        let x = Ring::indexed("x", 4);
        let y = Ring::indexed("y", 4);
        let f = parse_in("x0*x1 + x2*x3", &x, Q).unwrap();
        let gs: Vec<_> = (0..4)
            .map(|i| parse_in(&format!("y{i}^2"), &y, Q).unwrap())
            .collect();
        let h = compose_substitution(&f, &gs).unwrap();
        assert_eq!(h.to_string(), "y0^2*y1^2 + y2^2*y3^2");
        assert_eq!(h.degree(), Some(4));

        let f = parse_in("x0^2 + x1^2", &Ring::indexed("x", 2), Q).unwrap();
        let gs = vec![
            parse_in("y0*y1", &y, Q).unwrap(),
            parse_in("y2*y3", &y, Q).unwrap(),
        ];
        assert_eq!(
            compose_substitution(&f, &gs).unwrap().to_string(),
            "y0^2*y1^2 + y2^2*y3^2"
        );

        let f = parse_in("x0", &Ring::indexed("x", 2), Q).unwrap();
        assert_eq!(compose_substitution(&f, &gs).unwrap(), gs[0]);

        let mixed = vec![
            parse_in("y0*y1", &y, Q).unwrap(),
            parse_in("y2", &y, Q).unwrap(),
        ];
        assert!(matches!(
            compose_substitution(&f, &mixed),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn normalization() {
        let r = Ring::indexed("v", 2);
        let comps = vec![
            parse_in("2*v0^2*v1", &r, Q).unwrap(),
            parse_in("4*v0*v1^2", &r, Q).unwrap(),
        ];
        let out = normalize_components(comps);
        assert_eq!(out[0].to_string(), "v0");
        assert_eq!(out[1].to_string(), "2*v1");
    }

    #[test]
    fn rank_of_linear_map() {
        let r = Ring::indexed("v", 3);
        let comps: Vec<_> = ["v0", "v1", "v0 + v1"]
            .iter()
            .map(|s| parse_in(s, &r, Q).unwrap())
            .collect();
        let pt = vec![Q.one(), Q.from_i64(2), Q.from_i64(3)];
        assert_eq!(jacobian_rank(&comps, &pt).unwrap(), 1);
    }
}

//! Equations for the variety of `k`-planes in `V(f_1, ..., f_c)`, presented on
//! the affine space of `(k+1)×(n+1)` matrices `u`.
//!
//! Substituting `x_j = Σ_i s_i·u_{i,j}` into `f_ℓ` and taking the coefficient
//! of each `s^α` gives `g_{ℓ,α}(u)`; the rows of `u` span a plane in `V(f)`
//! exactly when every `g_{ℓ,α}` vanishes.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::monomial::monomials_of_degree;
use crate::algebra::parse::format_monomial;
use crate::algebra::{FieldSpec, Monomial, Polynomial, Ring, Scalar, Substitution};
use crate::bounds::binomial;
use crate::error::{Error, Result};
use crate::ideals::{affine_dimension, DimensionReport, GroebnerLimits, IdealBasis};
use crate::residual::{chart_pullback, check_containment, Direction, PlaneChart};
use crate::sampling;
use crate::strength::{gram_rank, linear_combination, serialize_scalars};

pub use crate::bounds::fano_expected_dimension_strength;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoEquation {
    /// Index of the source polynomial.
    pub source: usize,
    /// Exponents of `s_0, ..., s_k`.
    pub alpha: Vec<u16>,
    pub g: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoSystem {
    pub k: usize,
    pub field: FieldSpec,
    pub sources: Vec<Polynomial>,
    pub degrees: Vec<u32>,
    /// Ring of the matrix entries `u{i}_{j}`, row-major.
    #[serde(skip)]
    pub u_ring: Ring,
    /// Every slot `(ℓ, α)`, zero polynomials included.
    pub equations: Vec<FanoEquation>,
}

impl FanoSystem {
    pub fn n(&self) -> usize {
        self.sources[0].ring().len() - 1
    }

    pub fn zero_slots(&self) -> Vec<&FanoEquation> {
        self.equations.iter().filter(|e| e.g.is_zero()).collect()
    }

    pub fn nonzero_generators(&self) -> Vec<Polynomial> {
        self.equations
            .iter()
            .filter(|e| !e.g.is_zero())
            .map(|e| e.g.clone())
            .collect()
    }
}

pub(crate) fn check_family(fs: &[Polynomial]) -> Result<(Ring, FieldSpec)> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidInput("at least one polynomial is required".into()))?;
    for f in fs {
        if f.ring() != first.ring() {
            return Err(Error::RingMismatch(
                "polynomials live in different rings".into(),
            ));
        }
        if f.field() != first.field() {
            return Err(Error::FieldMismatch(
                "polynomials over different fields".into(),
            ));
        }
    }
    Ok((first.ring().clone(), first.field()))
}

fn homogeneous_degree(f: &Polynomial) -> Result<u32> {
    match f.degree() {
        Some(d) if f.is_homogeneous() && d >= 1 => Ok(d),
        _ => Err(Error::NotHomogeneous(f.to_string())),
    }
}

pub fn u_name(i: usize, j: usize) -> String {
    format!("u{i}_{j}")
}

pub fn fano_equations(fs: &[Polynomial], k: usize) -> Result<FanoSystem> {
    let (ring, field) = check_family(fs)?;
    let n = ring
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidInput("empty ring".into()))?;
    if k < 1 || k >= n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let degrees = fs
        .iter()
        .map(homogeneous_degree)
        .collect::<Result<Vec<_>>>()?;
    let s_names: Vec<String> = (0..=k).map(|i| format!("s{i}")).collect();
    let u_names: Vec<String> = (0..=k)
        .flat_map(|i| (0..=n).map(move |j| u_name(i, j)))
        .collect();
    let big = Ring::new(s_names.iter().chain(&u_names).cloned())?;
    let u_ring = Ring::new(u_names.clone())?;
    let mut subst = Substitution::new(&big, field);
    for j in 0..=n {
        let mut x = Polynomial::zero(&big, field);
        for i in 0..=k {
            let s = Polynomial::var(&big, field, &s_names[i])?;
            let u = Polynomial::var(&big, field, &u_name(i, j))?;
            x = &x + &(&s * &u);
        }
        subst.insert(ring.var(j), x)?;
    }
    let s_refs: Vec<&str> = s_names.iter().map(String::as_str).collect();
    let mut equations = Vec::new();
    for (l, (f, &d)) in fs.iter().zip(&degrees).enumerate() {
        let parts = f.substitute(&subst)?.collect_coefficients(&s_refs)?;
        for alpha in monomials_of_degree(k + 1, d) {
            let g = match parts.get(&alpha) {
                Some(g) => g.to_ring(&u_ring)?,
                None => Polynomial::zero(&u_ring, field),
            };
            equations.push(FanoEquation {
                source: l,
                alpha: alpha.exponents().to_vec(),
                g,
            });
        }
    }
    Ok(FanoSystem {
        k,
        field,
        sources: fs.to_vec(),
        degrees,
        u_ring,
        equations,
    })
}

/// `Σ_α s^α·g_{ℓ,α}` for source `ℓ`, in the ring of the `s` and `u` variables.
pub fn reassemble(sys: &FanoSystem, l: usize) -> Result<Polynomial> {
    let s_names: Vec<String> = (0..=sys.k).map(|i| format!("s{i}")).collect();
    let ring = Ring::new(s_names.iter().chain(sys.u_ring.vars()).cloned())?;
    let s_refs: Vec<&str> = s_names.iter().map(String::as_str).collect();
    let parts = sys
        .equations
        .iter()
        .filter(|e| e.source == l && !e.g.is_zero())
        .map(|e| {
            (
                Monomial::from_exponents(e.alpha.iter().copied()),
                e.g.clone(),
            )
        })
        .collect();
    Polynomial::reassemble(&ring, sys.field, &s_refs, &parts)
}

/// `f_ℓ(Σ_i s_i u_{i,·})` computed directly, for comparison with [`reassemble`].
pub fn substituted_source(sys: &FanoSystem, l: usize) -> Result<Polynomial> {
    let s_names: Vec<String> = (0..=sys.k).map(|i| format!("s{i}")).collect();
    let ring = Ring::new(s_names.iter().chain(sys.u_ring.vars()).cloned())?;
    let src = &sys.sources[l];
    let mut subst = Substitution::new(&ring, sys.field);
    for j in 0..src.ring().len() {
        let mut x = Polynomial::zero(&ring, sys.field);
        for i in 0..=sys.k {
            x = &x
                + &(&Polynomial::var(&ring, sys.field, &s_names[i])?
                    * &Polynomial::var(&ring, sys.field, &u_name(i, j))?);
        }
        subst.insert(src.ring().var(j), x)?;
    }
    src.substitute(&subst)
}

/// `d! / Π α_i!`.
pub fn multinomial(alpha: &[u16]) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0u64;
    for &a in alpha {
        for j in 1..=a as u64 {
            total += 1;
            acc = acc * BigUint::from(total) / BigUint::from(j);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferRecord {
    pub source: usize,
    pub alpha: Vec<u16>,
    pub image: Polynomial,
    pub predicted: Polynomial,
    pub equal: bool,
}

/// Applies `u_{i,j} ↦ λ_i·x_j` and compares each image with
/// `λ^α·multinomial(d; α)·f_ℓ`.
pub fn transfer_specialize(sys: &FanoSystem, lambda: &[Scalar]) -> Result<Vec<TransferRecord>> {
    if lambda.len() != sys.k + 1 {
        return Err(Error::LengthMismatch {
            expected: sys.k + 1,
            actual: lambda.len(),
        });
    }
    let field = sys.field;
    let lambda: Vec<Scalar> = lambda
        .iter()
        .map(|l| field.from_rational(l))
        .collect::<Result<_>>()?;
    let ring = sys.sources[0].ring().clone();
    let mut subst = Substitution::new(&ring, field);
    for i in 0..=sys.k {
        for j in 0..ring.len() {
            subst.insert(
                &u_name(i, j),
                Polynomial::var_at(&ring, field, j).scale(&lambda[i]),
            )?;
        }
    }
    sys.equations
        .iter()
        .map(|e| {
            let image = e.g.substitute(&subst)?;
            let mut c = field.from_biguint(&multinomial(&e.alpha));
            for (l, &a) in lambda.iter().zip(&e.alpha) {
                c = field.mul(&c, &field.pow(l, a as u32));
            }
            let predicted = sys.sources[e.source].scale(&c);
            Ok(TransferRecord {
                source: e.source,
                alpha: e.alpha.clone(),
                equal: image == predicted,
                image,
                predicted,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferRankReport {
    pub trials: usize,
    pub seed: u64,
    /// Smallest Gram rank among sampled combinations of the sources.
    pub source_min_rank: usize,
    #[serde(serialize_with = "serialize_scalars")]
    pub source_witness: Vec<Scalar>,
    /// Smallest Gram rank among sampled combinations of the equations.
    pub min_observed_rank: usize,
    #[serde(serialize_with = "serialize_scalars")]
    pub witness: Vec<Scalar>,
    pub pass: bool,
}

fn axis_then_random(
    rng: &mut sampling::SampleRng,
    field: FieldSpec,
    len: usize,
    trials: usize,
) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = (0..len)
        .map(|i| {
            (0..len)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    for _ in 0..trials {
        out.push(sampling::nonzero_vector(rng, field, len, 9));
    }
    out
}

fn min_rank(polys: &[Polynomial], candidates: Vec<Vec<Scalar>>) -> Result<(usize, Vec<Scalar>)> {
    let mut best: Option<(usize, Vec<Scalar>)> = None;
    for c in candidates {
        let r = gram_rank(&linear_combination(polys, &c))?;
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, c));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Gram ranks of sampled combinations of the equations of a system of
/// quadrics never drop below the smallest rank among combinations of the
/// sources.
pub fn transfer_rank_check(
    sys: &FanoSystem,
    trials: usize,
    seed: u64,
) -> Result<TransferRankReport> {
    if sys.field.characteristic() == 2 {
        return Err(Error::Characteristic(2));
    }
    if sys.degrees.iter().any(|&d| d != 2) {
        return Err(Error::WrongDegree {
            expected: "quadrics".into(),
            actual: format!("degrees {:?}", sys.degrees),
        });
    }
    let mut rng = sampling::rng(seed);
    let sources = axis_then_random(&mut rng, sys.field, sys.sources.len(), trials);
    let (source_min_rank, source_witness) = min_rank(&sys.sources, sources)?;
    let gs: Vec<Polynomial> = sys.equations.iter().map(|e| e.g.clone()).collect();
    let combos = axis_then_random(&mut rng, sys.field, gs.len(), trials);
    let (min_observed_rank, witness) = min_rank(&gs, combos)?;
    Ok(TransferRankReport {
        trials,
        seed,
        source_min_rank,
        source_witness,
        min_observed_rank,
        witness,
        pass: min_observed_rank >= source_min_rank,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicDemo {
    pub p: u32,
    pub slots: usize,
    pub zero_slots: Vec<Vec<u16>>,
    /// `#{j in 2..p-1 : C(p+1, j) ≡ 0 mod p}`.
    pub predicted_zero_slots: usize,
    pub transfer_ok: bool,
}

/// Lines on the Fermat hypersurface `Σ x_i^{p+1}` in characteristic `p`:
/// several equations vanish identically because binomial coefficients do.
pub fn characteristic_demo(p: u32, nvars: usize, seed: u64) -> Result<CharacteristicDemo> {
    let field = FieldSpec::prime(p as u64)?;
    let ring = Ring::indexed("x", nvars);
    let mut f = Polynomial::zero(&ring, field);
    for j in 0..nvars {
        f = &f + &Polynomial::var_at(&ring, field, j).pow(p + 1);
    }
    let sys = fano_equations(&[f], 1)?;
    let mut rng = sampling::rng(seed);
    let lambda = sampling::nonzero_vector(&mut rng, field, 2, 9);
    let transfer_ok = transfer_specialize(&sys, &lambda)?.iter().all(|r| r.equal);
    let predicted_zero_slots = (2..p as u64)
        .filter(|&j| binomial(p as u64 + 1, j).is_multiple_of(p as u64))
        .count();
    Ok(CharacteristicDemo {
        p,
        slots: sys.equations.len(),
        zero_slots: sys.zero_slots().iter().map(|e| e.alpha.clone()).collect(),
        predicted_zero_slots,
        transfer_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagEquation {
    pub source: usize,
    /// Monomial in the plane variables and `t` whose coefficient this is.
    pub monomial: String,
    pub equation: Polynomial,
}

/// Conditions on a direction `a` for the plane spanned by `Λ` and `a` to lie
/// in `V(fs)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagFanoSystem {
    pub base_plane: PlaneChart,
    pub direction_vars: Vec<String>,
    /// Non-pivot coordinate of each direction variable.
    pub direction_columns: Vec<usize>,
    pub equations: Vec<FlagEquation>,
}

impl FlagFanoSystem {
    /// Evaluates every equation at a direction given on the non-pivot columns.
    pub fn satisfied_by(&self, a: &[Scalar]) -> Result<bool> {
        for e in &self.equations {
            if !e.equation.evaluate(a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn flag_fano_equations(fs: &[Polynomial], plane: &PlaneChart) -> Result<FlagFanoSystem> {
    check_family(fs)?;
    let mut equations = Vec::new();
    let mut direction_vars = Vec::new();
    let mut direction_columns = Vec::new();
    for (l, f) in fs.iter().enumerate() {
        check_containment(f, plane)?;
        let pb = chart_pullback(f.ring(), plane, &Direction::Symbolic)?;
        direction_vars = pb.dir_vars.clone();
        direction_columns = pb.chart.free.clone();
        let mut keys: Vec<&str> = pb.plane_vars.iter().map(String::as_str).collect();
        keys.push(&pb.t_var);
        let key_ring = Ring::new(keys.iter().map(|s| s.to_string()))?;
        let parts = f.substitute(&pb.subst)?.collect_coefficients(&keys)?;
        let a_ring = Ring::new(pb.dir_vars.clone())?;
        for (m, c) in parts.iter().rev() {
            if m.exponent(keys.len() - 1) == 0 {
                continue;
            }
            equations.push(FlagEquation {
                source: l,
                monomial: format_monomial(&key_ring, m),
                equation: c.to_ring(&a_ring)?,
            });
        }
    }
    Ok(FlagFanoSystem {
        base_plane: plane.clone(),
        direction_vars,
        direction_columns,
        equations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoDimensionReport {
    pub k: usize,
    pub n: usize,
    pub equation_slots: usize,
    /// `(k+1)(n+1) - Σ C(d_ℓ + k, k)`, the cone dimension on matrix space.
    pub expected: i64,
    pub computed: i64,
    pub matches: bool,
    pub dimension_report: DimensionReport,
}

/// Dimension of `V(g_{ℓ,α})` on the matrix space against the expected value.
/// This is the cone over the incidence presentation, so it includes the
/// `(k+1)²` reparametrization directions.
pub fn fano_dimension_check(
    fs: &[Polynomial],
    k: usize,
    limits: GroebnerLimits,
) -> Result<FanoDimensionReport> {
    let sys = fano_equations(fs, k)?;
    let n = sys.n();
    let mut gens = sys.nonzero_generators();
    if gens.is_empty() {
        gens.push(Polynomial::zero(&sys.u_ring, sys.field));
    }
    let report = affine_dimension(&IdealBasis::new(gens)?, limits)?;
    let expected = ((k + 1) * (n + 1)) as i64 - sys.equations.len() as i64;
    Ok(FanoDimensionReport {
        k,
        n,
        equation_slots: sys.equations.len(),
        expected,
        computed: report.dimension,
        matches: expected == report.dimension,
        dimension_report: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_in;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(n: usize, s: &str) -> Polynomial {
        parse_in(s, &Ring::indexed("x", n), Q).unwrap()
    }

    fn texts(sys: &FanoSystem) -> Vec<String> {
        sys.equations.iter().map(|e| e.g.to_string()).collect()
    }

    #[test]
    fn sum_of_squares_lines() {
        let sys = fano_equations(&[p(3, "x0^2 + x1^2 + x2^2")], 1).unwrap();
        assert_eq!(
            texts(&sys),
            vec![
                "u0_0^2 + u0_1^2 + u0_2^2",
                "2*u0_0*u1_0 + 2*u0_1*u1_1 + 2*u0_2*u1_2",
                "u1_0^2 + u1_1^2 + u1_2^2",
            ]
        );
        assert_eq!(
            reassemble(&sys, 0).unwrap(),
            substituted_source(&sys, 0).unwrap()
        );
    }

    #[test]
    fn slot_counts() {
        assert_eq!(
            fano_equations(&[p(4, "x0^3 + x1^3")], 1)
                .unwrap()
                .equations
                .len(),
            4
        );
        assert_eq!(
            fano_equations(&[p(4, "x0*x1 + x2*x3")], 2)
                .unwrap()
                .equations
                .len(),
            6
        );
        let f3 = parse_in(
            "x0^4 + x1^4 + x2^4 + x3^4",
            &Ring::indexed("x", 4),
            FieldSpec::Prime(3),
        )
        .unwrap();
        let sys = fano_equations(&[f3], 1).unwrap();
        assert_eq!(sys.equations.len(), 5);
        let zeros: Vec<_> = sys.zero_slots().iter().map(|e| e.alpha.clone()).collect();
        assert_eq!(zeros, vec![vec![2, 2]]);
        assert!(fano_equations(&[p(3, "x0^2 + x1")], 1).is_err());
    }

    #[test]
    fn transfer_examples() {
        let f = p(3, "x0^2 + x1^2 + x2^2");
        let sys = fano_equations(std::slice::from_ref(&f), 1).unwrap();
        let one = transfer_specialize(&sys, &[Q.one(), Q.one()]).unwrap();
        assert!(one.iter().all(|r| r.equal));
        assert_eq!(one[1].image, f.scale(&Q.from_i64(2)));
        let r = transfer_specialize(&sys, &[Q.from_i64(2), Q.from_i64(3)]).unwrap();
        assert_eq!(r[1].image, f.scale(&Q.from_i64(12)));
        let z = transfer_specialize(&sys, &[Q.zero(), Q.zero()]).unwrap();
        assert!(z.iter().all(|r| r.image.is_zero() && r.equal));
    }

    #[test]
    fn rank_transfer() {
        let sys = fano_equations(&[p(3, "x0^2")], 1).unwrap();
        assert_eq!(texts(&sys), vec!["u0_0^2", "2*u0_0*u1_0", "u1_0^2"]);
        let combo = linear_combination(&sys.nonzero_generators(), &[Q.one(), Q.zero(), Q.one()]);
        assert_eq!(gram_rank(&combo).unwrap(), 2);
        let r = transfer_rank_check(&sys, 20, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.source_min_rank, 1);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[2, 2]), BigUint::from(6u32));
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
        assert_eq!(multinomial(&[3, 0]), BigUint::from(1u32));
    }

    #[test]
    fn flag_equations() {
        let plane = PlaneChart::coordinate(1, 3, Q).unwrap();
        let sys = flag_fano_equations(&[p(4, "x0^2*x2 + x1^2*x3")], &plane).unwrap();
        let eqs: Vec<String> = sys
            .equations
            .iter()
            .map(|e| format!("{}:{}", e.monomial, e.equation))
            .collect();
        assert_eq!(eqs, vec!["x0^2*t:a2", "x1^2*t:a3"]);
        assert!(!sys.satisfied_by(&[Q.one(), Q.zero()]).unwrap());
        assert!(sys.satisfied_by(&[Q.zero(), Q.zero()]).unwrap());

        let hyper = flag_fano_equations(&[p(4, "x2")], &plane).unwrap();
        assert_eq!(hyper.equations.len(), 1);
        assert_eq!(hyper.equations[0].equation.to_string(), "a2");

        let line = PlaneChart::parse("1,0,0,0;0,0,1,0", Q).unwrap();
        let q = flag_fano_equations(&[p(4, "x0*x1 + x2*x3")], &line).unwrap();
        let eqs: Vec<String> = q.equations.iter().map(|e| e.equation.to_string()).collect();
        assert_eq!(eqs, vec!["a1", "a3"]);
    }

    #[test]
    fn hyperplane_dimension() {
        let r = fano_dimension_check(&[p(4, "x0")], 1, GroebnerLimits::default()).unwrap();
        assert_eq!((r.expected, r.computed), (6, 6));
    }
}

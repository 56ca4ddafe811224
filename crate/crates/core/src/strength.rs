//! Strength of polynomials: exact for quadrics via Gram rank, upper bounds
//! from explicit decompositions, and smooth strength from the singular locus.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::field::format_scalar;
use crate::algebra::poly::coefficient_matrix;
use crate::algebra::{Matrix, Monomial, Polynomial, Scalar};
use crate::error::{Error, Result};
use crate::ideals::{affine_dimension, DimensionReport, GroebnerLimits, IdealBasis};
use crate::sampling;

/// Integer value extended by `±∞`; ordered `-∞ < n < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrengthValue {
    NegInfinity,
    Finite(i64),
    Infinity,
}

impl fmt::Display for StrengthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrengthValue::NegInfinity => f.write_str("-inf"),
            StrengthValue::Finite(v) => write!(f, "{v}"),
            StrengthValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for StrengthValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StrengthValue::Finite(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl StrengthValue {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "infinity" => Ok(StrengthValue::Infinity),
            "-inf" | "-infinity" => Ok(StrengthValue::NegInfinity),
            t => t
                .parse()
                .map(StrengthValue::Finite)
                .map_err(|_| Error::InvalidInput(format!("bad strength value `{t}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    ExactQuadric,
    UpperBoundDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrengthCertificate {
    pub kind: CertificateKind,
    pub value: i64,
    /// Gram rank, for quadric certificates.
    pub rank: Option<usize>,
    pub decomposition: Vec<(Polynomial, Polynomial)>,
}

fn require_degree(f: &Polynomial, d: u32) -> Result<()> {
    if f.is_zero() || !f.is_homogeneous() || f.degree() != Some(d) {
        return Err(Error::WrongDegree {
            expected: format!("homogeneous of degree {d}"),
            actual: describe_degree(f),
        });
    }
    Ok(())
}

fn describe_degree(f: &Polynomial) -> String {
    match f.degree() {
        None => "zero polynomial".into(),
        Some(d) if f.is_homogeneous() => format!("homogeneous of degree {d}"),
        Some(d) => format!("inhomogeneous of degree {d}"),
    }
}

/// Symmetric matrix `G` with `f(x) = xᵀ G x` for a quadratic form `f`.
pub fn gram_matrix(f: &Polynomial) -> Result<Matrix> {
    let field = f.field();
    if field.characteristic() == 2 {
        return Err(Error::Characteristic(2));
    }
    if !f.is_zero() {
        require_degree(f, 2)?;
    }
    let n = f.ring().len();
    let half = field.inv(&field.from_i64(2)).unwrap();
    let mut g = Matrix::zeros(n, n);
    for (m, c) in f.terms() {
        let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
        match vars.as_slice() {
            [i] => g.set(*i, *i, c.clone()),
            [i, j] => {
                let h = field.mul(c, &half);
                g.set(*i, *j, h.clone());
                g.set(*j, *i, h);
            }
            _ => unreachable!("degree-2 monomial"),
        }
    }
    Ok(g)
}

pub fn gram_rank(f: &Polynomial) -> Result<usize> {
    Ok(gram_matrix(f)?.rank(f.field()))
}

/// Splits a quadratic form into hyperbolic products and weighted squares of
/// linear forms: `q = Σ l_i·m_i + Σ c_j·s_j²`.
fn split_quadric(f: &Polynomial) -> (Vec<(Polynomial, Polynomial)>, Vec<(Scalar, Polynomial)>) {
    let field = f.field();
    let n = f.ring().len();
    let mut q = f.clone();
    let mut products = Vec::new();
    let mut squares = Vec::new();
    while !q.is_zero() {
        let square = (0..n).find(|&i| {
            let mut m = Monomial::one(n);
            m.set(i, 2);
            !q.coefficient(&m).is_zero()
        });
        if let Some(i) = square {
            let mut m = Monomial::one(n);
            m.set(i, 2);
            let a = q.coefficient(&m);
            // q - (∂_i q)² / 4a has no x_i
            let l = q.derivative(i);
            let c = field.inv(&field.mul(&field.from_i64(4), &a)).unwrap();
            q = &q - &(&l * &l).scale(&c);
            squares.push((c, l));
        } else {
            let (m, b) = q.leading_term().unwrap();
            let (m, b) = (m.clone(), b.clone());
            let vars: Vec<usize> = (0..n).filter(|&i| m.exponent(i) > 0).collect();
            let (i, j) = (vars[0], vars[1]);
            // q - (∂_i q)(∂_j q)/b has neither x_i nor x_j
            let li = q.derivative(i).scale(&field.inv(&b).unwrap());
            let lj = q.derivative(j);
            q = &q - &(&li * &lj);
            products.push((li, lj));
        }
    }
    (products, squares)
}

/// Exact strength of a quadric: `⌈rank/2⌉ - 1` where `rank` is the Gram rank,
/// together with a decomposition into products of linear forms over the base
/// field. Over a field lacking the needed square roots the decomposition can
/// use more than `⌈rank/2⌉` products; it is still verified exactly.
pub fn quadric_strength(f: &Polynomial) -> Result<StrengthCertificate> {
    let field = f.field();
    if field.characteristic() == 2 {
        return Err(Error::Characteristic(2));
    }
    require_degree(f, 2)?;
    let rank = gram_rank(f)?;
    let (mut pairs, squares) = split_quadric(f);

    // c_a·l_a² + c_b·l_b² = c_a(l_a - r·l_b)(l_a + r·l_b) when r² = -c_b/c_a
    let mut used = vec![false; squares.len()];
    for a in 0..squares.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let (ca, la) = &squares[a];
        let partner = (a + 1..squares.len()).find_map(|b| {
            if used[b] {
                return None;
            }
            let ratio = field.neg(&field.div(&squares[b].0, ca).unwrap());
            field.sqrt(&ratio).map(|r| (b, r))
        });
        match partner {
            Some((b, r)) => {
                used[b] = true;
                let lb = squares[b].1.scale(&r);
                pairs.push(((la - &lb).scale(ca), la + &lb));
            }
            None => pairs.push((la.scale(ca), la.clone())),
        }
    }
    let value = rank.div_ceil(2) as i64 - 1;
    verify_decomposition(f, &pairs)?;
    Ok(StrengthCertificate {
        kind: CertificateKind::ExactQuadric,
        value,
        rank: Some(rank),
        decomposition: pairs,
    })
}

/// Checks `f = Σ g_i·h_i` exactly with all factor degrees in `[1, deg f - 1]`.
/// The resulting value `#pairs - 1` is an upper bound on the strength.
pub fn verify_decomposition(
    f: &Polynomial,
    pairs: &[(Polynomial, Polynomial)],
) -> Result<StrengthCertificate> {
    let d = f
        .degree()
        .ok_or_else(|| Error::InvalidInput("the zero polynomial has no decomposition".into()))?;
    let mut sum = Polynomial::zero(f.ring(), f.field());
    for (g, h) in pairs {
        for p in [g, h] {
            if p.ring() != f.ring() {
                return Err(Error::RingMismatch(
                    "factor lives in a different ring".into(),
                ));
            }
            match p.degree() {
                Some(e) if e >= 1 && e < d => {}
                _ => {
                    return Err(Error::WrongDegree {
                        expected: format!("factor degree between 1 and {}", d.saturating_sub(1)),
                        actual: describe_degree(p),
                    })
                }
            }
        }
        sum = &sum + &(g * h);
    }
    let diff = f - &sum;
    if !diff.is_zero() {
        return Err(Error::DecompositionMismatch {
            difference: diff.to_string(),
        });
    }
    Ok(StrengthCertificate {
        kind: CertificateKind::UpperBoundDecomposition,
        value: pairs.len() as i64 - 1,
        rank: None,
        decomposition: pairs.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothStrengthReport {
    pub value: StrengthValue,
    /// Dimension of the singular locus; absent for the zero polynomial.
    pub dimension_report: Option<DimensionReport>,
}

/// Codimension in affine space of the singular locus `V(f, ∂f)`.
pub fn smooth_strength(f: &Polynomial, limits: GroebnerLimits) -> Result<SmoothStrengthReport> {
    if f.is_zero() {
        return Ok(SmoothStrengthReport {
            value: StrengthValue::NegInfinity,
            dimension_report: None,
        });
    }
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    let report = affine_dimension(&IdealBasis::new(gens)?, limits)?;
    let value = if report.dimension < 0 {
        StrengthValue::Infinity
    } else {
        StrengthValue::Finite(f.ring().len() as i64 - report.dimension)
    };
    Ok(SmoothStrengthReport {
        value,
        dimension_report: Some(report),
    })
}

pub fn linear_combination(fs: &[Polynomial], coeffs: &[Scalar]) -> Polynomial {
    assert_eq!(fs.len(), coeffs.len());
    let mut acc = Polynomial::zero(fs[0].ring(), fs[0].field());
    for (f, c) in fs.iter().zip(coeffs) {
        acc = &acc + &f.scale(c);
    }
    acc
}

fn check_family(fs: &[Polynomial]) -> Result<()> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty family".into()))?;
    for f in fs {
        if f.ring() != first.ring() {
            return Err(Error::RingMismatch(
                "family members live in different rings".into(),
            ));
        }
        if f.field() != first.field() {
            return Err(Error::FieldMismatch(
                "family members over different fields".into(),
            ));
        }
    }
    Ok(())
}

/// Smallest observed smooth strength over sampled linear combinations.
/// Evidence about the collective value, not a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollectiveSample {
    pub trials: usize,
    pub seed: u64,
    pub combinations_tested: usize,
    pub min_observed: StrengthValue,
    #[serde(serialize_with = "serialize_scalars")]
    pub witness: Vec<Scalar>,
}

pub(crate) fn serialize_scalars<S: Serializer>(
    v: &[Scalar],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(format_scalar).collect::<Vec<_>>().serialize(s)
}

fn minimize(
    fs: &[Polynomial],
    candidates: Vec<Vec<Scalar>>,
    limits: GroebnerLimits,
) -> Result<(StrengthValue, Vec<Scalar>, usize)> {
    let values: Vec<Result<StrengthValue>> = candidates
        .par_iter()
        .map(|c| smooth_strength(&linear_combination(fs, c), limits).map(|r| r.value))
        .collect();
    let mut best: Option<(StrengthValue, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, i));
        }
    }
    let (v, i) = best.expect("at least one candidate");
    let n = candidates.len();
    Ok((v, candidates.into_iter().nth(i).unwrap(), n))
}

/// If `fs` is linearly dependent, a nonzero vector of coefficients killing it.
pub fn linear_dependency(fs: &[Polynomial]) -> Option<Vec<Scalar>> {
    let field = fs[0].field();
    let (m, _) = coefficient_matrix(fs);
    m.transpose().nullspace(field).into_iter().next()
}

/// Tries the axis vectors, then `trials` seeded vectors with all entries
/// nonzero, and reports the minimum smooth strength seen.
pub fn collective_smooth_strength_sample(
    fs: &[Polynomial],
    trials: usize,
    seed: u64,
    limits: GroebnerLimits,
) -> Result<CollectiveSample> {
    check_family(fs)?;
    let field = fs[0].field();
    if let Some(kernel) = linear_dependency(fs) {
        return Ok(CollectiveSample {
            trials,
            seed,
            combinations_tested: 0,
            min_observed: StrengthValue::NegInfinity,
            witness: kernel,
        });
    }
    let c = fs.len();
    let mut candidates: Vec<Vec<Scalar>> = (0..c)
        .map(|i| {
            (0..c)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    let mut rng = sampling::rng(seed);
    for _ in 0..trials {
        candidates.push(sampling::nonzero_vector(&mut rng, field, c, 9));
    }
    let (min_observed, witness, tested) = minimize(fs, candidates, limits)?;
    Ok(CollectiveSample {
        trials,
        seed,
        combinations_tested: tested,
        min_observed,
        witness,
    })
}

/// Exhaustive variant over every nonzero coefficient vector in
/// `{-2, ..., 2}^c`, for families of at most three polynomials.
pub fn collective_smooth_strength_grid(
    fs: &[Polynomial],
    limits: GroebnerLimits,
) -> Result<CollectiveSample> {
    check_family(fs)?;
    let c = fs.len();
    if c > 3 {
        return Err(Error::InvalidInput(
            "grid enumeration supports at most three polynomials".into(),
        ));
    }
    let field = fs[0].field();
    if let Some(kernel) = linear_dependency(fs) {
        return Ok(CollectiveSample {
            trials: 0,
            seed: 0,
            combinations_tested: 0,
            min_observed: StrengthValue::NegInfinity,
            witness: kernel,
        });
    }
    let mut candidates = Vec::new();
    let total = 5usize.pow(c as u32);
    for code in 0..total {
        let v: Vec<i64> = (0..c)
            .map(|i| (code / 5usize.pow(i as u32) % 5) as i64 - 2)
            .collect();
        if v.iter().any(|&x| x != 0) {
            candidates.push(v.into_iter().map(|x| field.from_i64(x)).collect());
        }
    }
    let (min_observed, witness, tested) = minimize(fs, candidates, limits)?;
    Ok(CollectiveSample {
        trials: tested,
        seed: 0,
        combinations_tested: tested,
        min_observed,
        witness,
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    match k {
        0 => unreachable!("empty matrix"),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Polynomial::zero(m[0][0].ring(), m[0][0].field());
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocusBoundReport {
    pub variables: usize,
    pub equations: usize,
    pub claimed_strength: StrengthValue,
    /// `n - s + k - 1`; absent when the claim forces an empty locus (`s = ∞`)
    /// or imposes nothing (`s = -∞`).
    pub bound: Option<i64>,
    pub locus_dimension: i64,
    pub pass: bool,
}

/// Dimension of the locus of `V(fs)` where the Jacobian drops rank, compared
/// with `n - s + k - 1` for a claimed collective smooth strength `s`.
pub fn singular_locus_bound_check(
    fs: &[Polynomial],
    s: StrengthValue,
    limits: GroebnerLimits,
) -> Result<LocusBoundReport> {
    check_family(fs)?;
    let n = fs[0].ring().len();
    let k = fs.len();
    let mut gens: Vec<Polynomial> = fs.to_vec();
    if k <= n {
        let jac: Vec<Vec<Polynomial>> = fs.iter().map(|f| f.gradient()).collect();
        for cols in combinations(n, k) {
            let sub: Vec<Vec<Polynomial>> = jac
                .iter()
                .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                .collect();
            gens.push(determinant(&sub));
        }
    }
    let dim = affine_dimension(&IdealBasis::new(gens)?, limits)?.dimension;
    let (bound, pass) = match s {
        StrengthValue::Finite(s) => {
            let b = n as i64 - s + k as i64 - 1;
            (Some(b), dim <= b)
        }
        StrengthValue::Infinity => (None, dim < 0),
        StrengthValue::NegInfinity => (None, true),
    };
    Ok(LocusBoundReport {
        variables: n,
        equations: k,
        claimed_strength: s,
        bound,
        locus_dimension: dim,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_in, FieldSpec, Ring};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(n: usize, s: &str) -> Polynomial {
        parse_in(s, &Ring::indexed("x", n), Q).unwrap()
    }

    fn lim() -> GroebnerLimits {
        GroebnerLimits::default()
    }

    #[test]
    fn quadric_values() {
        let c = quadric_strength(&p(4, "x0*x1 + x2*x3")).unwrap();
        assert_eq!((c.value, c.rank), (1, Some(4)));
        assert_eq!(c.decomposition.len(), 2);
        assert_eq!(quadric_strength(&p(1, "x0^2")).unwrap().value, 0);
        let sum = p(6, "x0^2 + x1^2 + x2^2 + x3^2 + x4^2 + x5^2");
        let c = quadric_strength(&sum).unwrap();
        assert_eq!((c.value, c.rank), (2, Some(6)));
        assert!(verify_decomposition(&sum, &c.decomposition).is_ok());
        // over F_13 every ratio -1 is a square, so three products suffice
        let f13 = parse_in(
            "x0^2 + x1^2 + x2^2 + x3^2 + x4^2 + x5^2",
            &Ring::indexed("x", 6),
            FieldSpec::Prime(13),
        )
        .unwrap();
        assert_eq!(quadric_strength(&f13).unwrap().decomposition.len(), 3);
        assert!(matches!(
            quadric_strength(&p(2, "x0^3")),
            Err(Error::WrongDegree { .. })
        ));
        let f3 = parse_in("x0*x1", &Ring::indexed("x", 2), FieldSpec::Prime(2)).unwrap();
        assert_eq!(quadric_strength(&f3), Err(Error::Characteristic(2)));
    }

    #[test]
    fn decompositions() {
        let f = p(4, "x0*x1 + x2*x3");
        let pairs = vec![(p(4, "x0"), p(4, "x1")), (p(4, "x2"), p(4, "x3"))];
        assert_eq!(verify_decomposition(&f, &pairs).unwrap().value, 1);
        let g = p(2, "x0^3 + x1^3");
        let pairs = vec![(p(2, "x0"), p(2, "x0^2")), (p(2, "x1"), p(2, "x1^2"))];
        assert_eq!(verify_decomposition(&g, &pairs).unwrap().value, 1);
        let h = p(2, "x0^3");
        let err = verify_decomposition(&h, &[(p(2, "x0"), p(2, "x1^2"))]).unwrap_err();
        assert_eq!(
            err,
            Error::DecompositionMismatch {
                difference: "x0^3 - x0*x1^2".into()
            }
        );
        assert!(matches!(
            verify_decomposition(&h, &[(p(2, "1"), p(2, "x0^3"))]),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn smooth_strength_examples() {
        assert_eq!(
            smooth_strength(&p(4, "x0*x1 + x2*x3"), lim())
                .unwrap()
                .value,
            StrengthValue::Finite(4)
        );
        assert_eq!(
            smooth_strength(&p(3, "x0^2"), lim()).unwrap().value,
            StrengthValue::Finite(1)
        );
        assert_eq!(
            smooth_strength(&p(5, "x0^2 + x1^2 + x2^2"), lim())
                .unwrap()
                .value,
            StrengthValue::Finite(3)
        );
        assert_eq!(
            smooth_strength(&p(3, "x0"), lim()).unwrap().value,
            StrengthValue::Infinity
        );
        assert_eq!(
            smooth_strength(&p(3, "0"), lim()).unwrap().value,
            StrengthValue::NegInfinity
        );
    }

    #[test]
    fn collective_examples() {
        let fs = vec![p(2, "x0^2"), p(2, "x1^2")];
        let s = collective_smooth_strength_sample(&fs, 25, 0, lim()).unwrap();
        assert_eq!(s.min_observed, StrengthValue::Finite(1));
        assert_eq!(s.combinations_tested, 27);
        let dep = vec![p(2, "x0*x1"), p(2, "2*x0*x1")];
        let s = collective_smooth_strength_sample(&dep, 5, 0, lim()).unwrap();
        assert_eq!(s.min_observed, StrengthValue::NegInfinity);
        assert!(linear_combination(&dep, &s.witness).is_zero());
    }

    #[test]
    fn locus_bounds() {
        let r =
            singular_locus_bound_check(&[p(4, "x0*x1 + x2*x3")], StrengthValue::Finite(4), lim())
                .unwrap();
        assert_eq!((r.bound, r.locus_dimension, r.pass), (Some(0), 0, true));
        let r =
            singular_locus_bound_check(&[p(2, "x0^2")], StrengthValue::Finite(1), lim()).unwrap();
        assert_eq!((r.bound, r.locus_dimension, r.pass), (Some(1), 1, true));
        let r =
            singular_locus_bound_check(&[p(3, "x0"), p(3, "x1")], StrengthValue::Infinity, lim())
                .unwrap();
        assert_eq!((r.locus_dimension, r.pass), (-1, true));
    }
}

use std::collections::BTreeMap;

use super::quadric::lines_through_point;
use super::{
    homogenize_components, normalize_components, positional_substitution, record,
    RationalMapRecord, MAX_RANK_ATTEMPTS,
};
use crate::algebra::{FieldSpec, Monomial, Polynomial, Ring, Scalar, Substitution};
use crate::error::{Error, Result};
use crate::residual::{check_containment, PlaneChart};
use crate::sampling;
use crate::strength::gram_rank;

fn format_point(field: FieldSpec, v: &[Scalar]) -> String {
    format!(
        "[{}]",
        v.iter()
            .map(|c| field.format(c))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// Parametrizes a cubic hypersurface containing the line `line`.
///
/// A point `q = s0·R0 + s1·R1` runs over the line. Directions `a` with
/// `Σ a_j ∂f/∂x_j(q) = 0` form a linear space, framed by
/// `b_j·(c_{j0}·e_j - c_j·e_{j0})` with `c = ∇f(q)`. On the plane
/// `Φ = span(line, a)` with coordinates `(w0, w1, w2)` the restriction is
/// `w2·g`, and the residual conic `g` passes through `(s0, s1, 0)`; lines
/// through that point parametrize it.
pub fn cubic_with_line_parametrization(
    f: &Polynomial,
    line: &PlaneChart,
    seed: u64,
) -> Result<RationalMapRecord> {
    if !f.is_homogeneous() || f.degree() != Some(3) {
        return Err(Error::WrongDegree {
            expected: "homogeneous cubic".into(),
            actual: f.to_string(),
        });
    }
    if line.k() != 1 || line.n() + 1 != f.ring().len() {
        return Err(Error::InvalidInput(format!(
            "expected a line in P^{}, got a {}-plane in P^{}",
            f.ring().len() - 1,
            line.k(),
            line.n()
        )));
    }
    let field = f.field();
    if line.field() != field {
        return Err(Error::FieldMismatch(
            "line and cubic over different fields".into(),
        ));
    }
    check_containment(f, line)?;
    let chart = line.standardize();
    let n1 = f.ring().len();
    let rows = [chart.rref.row(0).to_vec(), chart.rref.row(1).to_vec()];
    let free = chart.free.clone();
    if free.len() < 2 {
        return Err(Error::InvalidInput(
            "ambient space must have dimension at least 3".into(),
        ));
    }

    let q_at = |sv: &[Scalar]| -> Vec<Scalar> {
        (0..n1)
            .map(|j| {
                field.add(
                    &field.mul(&sv[0], &rows[0][j]),
                    &field.mul(&sv[1], &rows[1][j]),
                )
            })
            .collect()
    };
    let grad = f.gradient();

    // ∇f along the line, to pick a coordinate j0 where it is not identically zero.
    let line_ring = Ring::new(["s0", "s1"])?;
    let on_line: Vec<Polynomial> = (0..n1)
        .map(|j| {
            Polynomial::from_terms(
                &line_ring,
                field,
                [
                    (Monomial::var(2, 0), rows[0][j].clone()),
                    (Monomial::var(2, 1), rows[1][j].clone()),
                ],
            )
        })
        .collect();
    let to_line = positional_substitution(f.ring(), &on_line)?;
    let mut j0 = None;
    for &j in &free {
        if !grad[j].substitute(&to_line)?.is_zero() {
            j0 = Some(j);
            break;
        }
    }
    let Some(j0) = j0 else {
        let mut rng = sampling::rng(seed);
        let q = q_at(&sampling::nonzero_vector(&mut rng, field, 2, 9));
        return Err(Error::DegenerateIncidence {
            q: format_point(field, &q),
            detail: "the tangent condition on directions vanishes identically".into(),
        });
    };
    let frame: Vec<usize> = free.iter().copied().filter(|&j| j != j0).collect();
    let b_names: Vec<String> = if frame.len() > 1 {
        frame.iter().map(|j| format!("b{j}")).collect()
    } else {
        Vec::new()
    };

    let mut names: Vec<String> = vec!["s0".into(), "s1".into()];
    names.extend(b_names.iter().cloned());
    names.extend(["w0", "w1", "w2"].map(String::from));
    let ring = Ring::new(names)?;
    let var = |name: &str| Polynomial::var(&ring, field, name);
    let konst = |c: &Scalar| Polynomial::constant(&ring, field, c.clone());
    let span = |u0: &Polynomial, u1: &Polynomial| -> Vec<Polynomial> {
        (0..n1)
            .map(|j| &(u0 * &konst(&rows[0][j])) + &(u1 * &konst(&rows[1][j])))
            .collect()
    };

    let (s0, s1) = (var("s0")?, var("s1")?);
    let at_q = positional_substitution(f.ring(), &span(&s0, &s1))?;
    let c: Vec<Polynomial> = grad
        .iter()
        .map(|d| d.substitute(&at_q))
        .collect::<Result<_>>()?;
    let mut a = vec![Polynomial::zero(&ring, field); n1];
    for (idx, &j) in frame.iter().enumerate() {
        let b = match b_names.get(idx) {
            Some(name) => var(name)?,
            None => Polynomial::one(&ring, field),
        };
        a[j] = &a[j] + &(&b * &c[j0]);
        a[j0] = &a[j0] - &(&b * &c[j]);
    }

    let (w0, w1, w2) = (var("w0")?, var("w1")?, var("w2")?);
    let on_plane: Vec<Polynomial> = span(&w0, &w1)
        .iter()
        .zip(&a)
        .map(|(x, aj)| x + &(&w2 * aj))
        .collect();
    let restricted = f.substitute(&positional_substitution(f.ring(), &on_plane)?)?;
    let mut shifted = BTreeMap::new();
    for (key, part) in restricted.collect_coefficients(&["w2"])? {
        let e = key.exponent(0);
        if e == 0 {
            return Err(Error::PlaneNotContained {
                restriction: part.to_string(),
            });
        }
        shifted.insert(Monomial::from_exponents([e - 1]), part);
    }
    let conic = Polynomial::reassemble(&ring, field, &["w2"], &shifted)?;
    check_conic(&conic, &b_names, seed, q_at)?;

    let p = [s0, s1, Polynomial::zero(&ring, field)];
    let rho = lines_through_point(&conic, &["w0", "w1", "w2"], &p)?;
    let x: Vec<Polynomial> = span(&rho[0], &rho[1])
        .iter()
        .zip(&a)
        .map(|(x, aj)| x + &(&rho[2] * aj))
        .collect();
    let comps = normalize_components(homogenize_components(x)?);
    let subst = positional_substitution(f.ring(), &comps)?;
    record(comps, vec![f.clone()], &subst, n1 as i64 - 2, seed)
}

/// Looks for a sample `(s, b)` where the residual conic is smooth. Special
/// points on the line can give singular conics even when the generic one is
/// smooth, so the conic is only declared degenerate when every attempt is.
fn check_conic(
    conic: &Polynomial,
    b_names: &[String],
    seed: u64,
    q_at: impl Fn(&[Scalar]) -> Vec<Scalar>,
) -> Result<()> {
    let field = conic.field();
    let plain = Ring::new(["w0", "w1", "w2"])?;
    let mut first_failure = None;
    for attempt in 0..MAX_RANK_ATTEMPTS {
        let mut rng = sampling::rng(seed.wrapping_add(attempt));
        let s = sampling::nonzero_vector(&mut rng, field, 2, 9);
        let mut at = Substitution::identity(&plain, &plain, field)?;
        at.insert("s0", Polynomial::constant(&plain, field, s[0].clone()))?;
        at.insert("s1", Polynomial::constant(&plain, field, s[1].clone()))?;
        for name in b_names {
            at.insert(
                name,
                Polynomial::constant(&plain, field, sampling::nonzero_scalar(&mut rng, field, 9)),
            )?;
        }
        let sample = conic.substitute(&at)?;
        let q = format_point(field, &q_at(&s));
        let failure = if sample.is_zero() {
            Error::DegenerateResidualConic {
                q,
                detail: "residual conic vanishes: Φ ⊆ X locus hit".into(),
            }
        } else {
            let r = gram_rank(&sample)?;
            if r == 3 {
                return Ok(());
            }
            Error::DegenerateResidualConic {
                q,
                detail: format!("residual conic {sample} has rank {r} < 3"),
            }
        };
        first_failure.get_or_insert(failure);
    }
    Err(first_failure.unwrap())
}

use num_traits::Zero;

use super::{normalize_components, positional_substitution, record, RationalMapRecord};
use crate::algebra::{Polynomial, Ring, Scalar, Substitution};
use crate::error::{Error, Result};

/// `ρ(w) = g(w)·P - (∇g(P)·w)·w` for the variables `w` of `g`, where `P`
/// may have polynomial entries in the other variables of `g`'s ring. Points
/// of the quadric `g = 0` are reached by the second intersection of the line
/// through `P`.
pub(crate) fn lines_through_point(
    g: &Polynomial,
    w: &[&str],
    p: &[Polynomial],
) -> Result<Vec<Polynomial>> {
    let ring = g.ring();
    let field = g.field();
    let mut at_p = Substitution::identity(ring, ring, field)?;
    for (name, pj) in w.iter().zip(p) {
        at_p.insert(name, pj.clone())?;
    }
    let mut linear = Polynomial::zero(ring, field);
    let mut wv = Vec::with_capacity(w.len());
    for name in w {
        let grad = g.partial_derivative(name)?.substitute(&at_p)?;
        let var = Polynomial::var(ring, field, name)?;
        linear = &linear + &(&grad * &var);
        wv.push(var);
    }
    Ok(p.iter()
        .zip(&wv)
        .map(|(pj, wj)| &(g * pj) - &(&linear * wj))
        .collect())
}

/// Parametrizes the quadric `V(f)` from a smooth point `p` by projecting
/// from `p`, in direction variables `v0, ..., vn`.
pub fn quadric_parametrization(
    f: &Polynomial,
    p: &[Scalar],
    seed: u64,
) -> Result<RationalMapRecord> {
    if !f.is_homogeneous() || f.degree() != Some(2) {
        return Err(Error::WrongDegree {
            expected: "homogeneous quadric".into(),
            actual: f.to_string(),
        });
    }
    let field = f.field();
    let n1 = f.ring().len();
    if p.len() != n1 {
        return Err(Error::LengthMismatch {
            expected: n1,
            actual: p.len(),
        });
    }
    let p: Vec<Scalar> = p
        .iter()
        .map(|c| field.from_rational(c))
        .collect::<Result<_>>()?;
    let value = f.evaluate(&p)?;
    if !value.is_zero() {
        return Err(Error::PointNotOnVariety {
            value: field.format(&value),
        });
    }
    let grad = f
        .gradient()
        .iter()
        .map(|d| d.evaluate(&p))
        .collect::<Result<Vec<_>>>()?;
    if grad.iter().all(Zero::is_zero) {
        return Err(Error::SingularPoint);
    }
    let v = Ring::indexed("v", n1);
    let vars: Vec<Polynomial> = (0..n1).map(|j| Polynomial::var_at(&v, field, j)).collect();
    let fv = f.substitute(&positional_substitution(f.ring(), &vars)?)?;
    let names: Vec<&str> = v.vars().iter().map(String::as_str).collect();
    let pc: Vec<Polynomial> = p
        .iter()
        .map(|c| Polynomial::constant(&v, field, c.clone()))
        .collect();
    let comps = normalize_components(lines_through_point(&fv, &names, &pc)?);
    let subst = positional_substitution(f.ring(), &comps)?;
    record(comps, vec![f.clone()], &subst, n1 as i64 - 2, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_in, FieldSpec};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn pt(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn split_quadric() {
        let f = parse_in("x0*x1 + x2*x3", &Ring::indexed("x", 4), Q).unwrap();
        let r = quadric_parametrization(&f, &pt(&[1, 0, 0, 0]), 0).unwrap();
        assert!(r.verification.substitution_ok);
        assert_eq!(r.verification.jacobian_rank, 2);
        assert_eq!(
            r.evaluate(&pt(&[0, 1, 1, 1])).unwrap(),
            pt(&[1, -1, -1, -1])
        );
        assert_eq!(r.evaluate(&pt(&[1, 0, 0, 0])).unwrap(), pt(&[0, 0, 0, 0]));
        assert_eq!(r.degree, 2);
    }

    #[test]
    fn cone_fixture() {
        let f = parse_in("x0*x1 + x2^2", &Ring::indexed("x", 3), Q).unwrap();
        let r = quadric_parametrization(&f, &pt(&[1, 0, 0]), 3).unwrap();
        assert!(r.verification.passed());
        assert_eq!(r.verification.jacobian_rank, 1);
    }

    #[test]
    fn bad_points() {
        let f = parse_in("x0*x1 + x2*x3", &Ring::indexed("x", 4), Q).unwrap();
        assert!(matches!(
            quadric_parametrization(&f, &pt(&[1, 1, 0, 0]), 0),
            Err(Error::PointNotOnVariety { .. })
        ));
        let cone = parse_in("x0*x1 + x2^2", &Ring::indexed("x", 4), Q).unwrap();
        assert!(matches!(
            quadric_parametrization(&cone, &pt(&[0, 0, 0, 1]), 0),
            Err(Error::SingularPoint)
        ));
    }
}

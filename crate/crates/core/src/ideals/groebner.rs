use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::algebra::poly::accumulate;
use crate::algebra::{FieldSpec, Monomial, Polynomial, Ring, Scalar};
use crate::error::{Error, Result};

use super::{GroebnerLimits, IdealBasis};

/// Monic polynomial as terms in descending grevlex order.
#[derive(Clone, Debug)]
struct Elem {
    terms: Vec<(Monomial, Scalar)>,
}

impl Elem {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn from_map(field: FieldSpec, map: BTreeMap<Monomial, Scalar>) -> Option<Elem> {
        let mut terms: Vec<(Monomial, Scalar)> = map.into_iter().rev().collect();
        let lc = terms.first()?.1.clone();
        let inv = field.inv(&lc).unwrap();
        for t in &mut terms {
            t.1 = field.mul(&t.1, &inv);
        }
        Some(Elem { terms })
    }
}

/// Full reduction of `p` against `basis`: no term of the result is divisible
/// by a leading monomial of the basis.
fn reduce(
    field: FieldSpec,
    mut work: BTreeMap<Monomial, Scalar>,
    basis: &[Elem],
    skip: Option<usize>,
) -> BTreeMap<Monomial, Scalar> {
    let mut rem = BTreeMap::new();
    while let Some((m, c)) = work.pop_last() {
        let divisor = basis
            .iter()
            .enumerate()
            .find(|(i, g)| Some(*i) != skip && g.lm().divides(&m));
        match divisor {
            Some((_, g)) => {
                let q = g.lm().quotient_of(&m).unwrap();
                for (gm, gc) in &g.terms[1..] {
                    accumulate(&mut work, field, gm.mul(&q), field.neg(&field.mul(&c, gc)));
                }
            }
            None => {
                rem.insert(m, c);
            }
        }
    }
    rem
}

fn s_polynomial(field: FieldSpec, a: &Elem, b: &Elem) -> BTreeMap<Monomial, Scalar> {
    let l = a.lm().lcm(b.lm());
    let qa = a.lm().quotient_of(&l).unwrap();
    let qb = b.lm().quotient_of(&l).unwrap();
    let mut map = BTreeMap::new();
    for (m, c) in &a.terms[1..] {
        accumulate(&mut map, field, m.mul(&qa), c.clone());
    }
    for (m, c) in &b.terms[1..] {
        accumulate(&mut map, field, m.mul(&qb), field.neg(c));
    }
    map
}

fn to_elem(p: &Polynomial) -> Option<Elem> {
    Elem::from_map(p.field(), p.term_map().clone())
}

fn to_poly(ring: &Ring, field: FieldSpec, e: &Elem) -> Polynomial {
    Polynomial::from_map(ring, field, e.terms.iter().cloned().collect())
}

/// Reduced Gröbner basis in grevlex, sorted by decreasing leading monomial.
///
/// Buchberger with the normal selection strategy (smallest lcm first), the
/// coprime criterion and the chain criterion. Exceeding `limits` returns
/// [`Error::Inconclusive`].
pub fn groebner_basis(b: &IdealBasis, limits: GroebnerLimits) -> Result<IdealBasis> {
    let field = b.field();
    let ring = b.ring().clone();
    let unit = || IdealBasis::new(vec![Polynomial::one(&ring, field)]);
    let mut g: Vec<Elem> = b.generators().iter().filter_map(to_elem).collect();
    if g.iter().any(|e| e.lm().is_one()) {
        return unit();
    }
    if g.is_empty() {
        return Ok(b.clone());
    }

    let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            queue.insert((g[i].lm().lcm(g[j].lm()), i, j));
            pending.insert((i, j));
        }
    }

    while let Some((lcm, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        if g[i].lm().is_coprime(g[j].lm()) {
            continue;
        }
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].lm().divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        if lcm.degree() > limits.max_pair_degree {
            return Err(Error::Inconclusive(format!(
                "S-pair of degree {} exceeds the limit {}",
                lcm.degree(),
                limits.max_pair_degree
            )));
        }
        let s = s_polynomial(field, &g[i], &g[j]);
        let r = reduce(field, s, &g, None);
        let Some(e) = Elem::from_map(field, r) else {
            continue;
        };
        if e.lm().is_one() {
            return unit();
        }
        let n = g.len();
        for k in 0..n {
            queue.insert((g[k].lm().lcm(e.lm()), k, n));
            pending.insert((k, n));
        }
        g.push(e);
        if g.len() > limits.max_basis_size {
            return Err(Error::Inconclusive(format!(
                "basis grew beyond {} elements",
                limits.max_basis_size
            )));
        }
    }

    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Elem> = Vec::new();
    for (i, e) in g.iter().enumerate() {
        let redundant = g
            .iter()
            .enumerate()
            .any(|(k, o)| k != i && o.lm().divides(e.lm()) && (o.lm() != e.lm() || k < i));
        if !redundant {
            keep.push(e.clone());
        }
    }
    // reduce tails
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let map: BTreeMap<Monomial, Scalar> = keep[i].terms.iter().cloned().collect();
        let r = reduce(field, map, &keep, Some(i));
        reduced.push(Elem::from_map(field, r).expect("minimal element cannot reduce to zero"));
    }
    reduced.sort_by(|a, b| b.lm().cmp(a.lm()));
    IdealBasis::new(reduced.iter().map(|e| to_poly(&ring, field, e)).collect())
}

/// Remainder of `f` on full division by `basis` (a normal form when `basis`
/// is a Gröbner basis).
pub fn normal_form(f: &Polynomial, basis: &IdealBasis) -> Polynomial {
    let elems: Vec<Elem> = basis.generators().iter().filter_map(to_elem).collect();
    let r = reduce(f.field(), f.term_map().clone(), &elems, None);
    Polynomial::from_map(f.ring(), f.field(), r)
}

/// Checks that every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &IdealBasis) -> bool {
    let field = basis.field();
    let elems: Vec<Elem> = basis.generators().iter().filter_map(to_elem).collect();
    for j in 0..elems.len() {
        for i in 0..j {
            let s = s_polynomial(field, &elems[i], &elems[j]);
            if !reduce(field, s, &elems, None).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_in;

    fn ideal(ring: &Ring, gens: &[&str]) -> IdealBasis {
        IdealBasis::new(
            gens.iter()
                .map(|g| parse_in(g, ring, FieldSpec::Rationals).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn texts(b: &IdealBasis) -> Vec<String> {
        b.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn monomial_ideal_is_fixed() {
        let r = Ring::indexed("x", 3);
        let gb = groebner_basis(&ideal(&r, &["x1", "x0"]), GroebnerLimits::default()).unwrap();
        assert_eq!(texts(&gb), vec!["x0", "x1"]);
    }

    #[test]
    fn twisted_cubic_relation() {
        let r = Ring::indexed("x", 3);
        let input = ideal(&r, &["x0^2 - x1", "x0*x1 - x2"]);
        let gb = groebner_basis(&input, GroebnerLimits::default()).unwrap();
        assert!(
            texts(&gb).contains(&"x1^2 - x0*x2".to_string()),
            "{:?}",
            texts(&gb)
        );
        assert!(is_groebner_basis(&gb));
        for f in input.generators() {
            assert!(normal_form(f, &gb).is_zero());
        }
    }

    #[test]
    fn jacobian_of_split_quadric() {
        let r = Ring::indexed("x", 4);
        let gb = groebner_basis(
            &ideal(&r, &["x0*x1 + x2*x3", "x1", "x0", "x3", "x2"]),
            GroebnerLimits::default(),
        )
        .unwrap();
        assert_eq!(texts(&gb), vec!["x0", "x1", "x2", "x3"]);
    }

    #[test]
    fn unit_ideal_and_limits() {
        let r = Ring::indexed("x", 2);
        let gb =
            groebner_basis(&ideal(&r, &["x0*x1 - 1", "x0"]), GroebnerLimits::default()).unwrap();
        assert_eq!(texts(&gb), vec!["1"]);
        let tight = GroebnerLimits {
            max_basis_size: 100,
            max_pair_degree: 1,
        };
        let err = groebner_basis(&ideal(&r, &["x0^2 - x1", "x0*x1 - 1"]), tight).unwrap_err();
        assert!(err.is_inconclusive());
    }
}

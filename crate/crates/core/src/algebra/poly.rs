//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Ordered list of variable names. Variable `i` is the `i`-th grevlex variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring(Arc<[String]>);

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Compares names chunk-wise so that `x2 < x10` and `u0_3 < u1_0`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let bytes = s.as_bytes();
        let mut start = 0;
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x.0, y.0) {
            (true, true) => {
                let xs = x.1.trim_start_matches('0');
                let ys = y.1.trim_start_matches('0');
                xs.len().cmp(&ys.len()).then_with(|| xs.cmp(ys))
            }
            _ => x.1.cmp(y.1),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

impl Ring {
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !valid_name(v) {
                return Err(Error::InvalidInput(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(vars.into()))
    }

    /// `prefix0, prefix1, ..., prefix{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Ring(
            (0..n)
                .map(|i| format!("{prefix}{i}"))
                .collect::<Vec<_>>()
                .into(),
        )
    }

    /// Deduplicated names in natural order.
    pub fn natural<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = vars.into_iter().map(Into::into).collect();
        v.sort_by(|a, b| natural_cmp(a, b));
        v.dedup();
        Ring::new(v)
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> &str {
        &self.0[i]
    }

    /// This ring followed by the variables of `other` not already present.
    pub fn extend(&self, other: &[String]) -> Result<Ring> {
        let mut v: Vec<String> = self.0.to_vec();
        for name in other {
            if !v.contains(name) {
                v.push(name.clone());
            }
        }
        Ring::new(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

pub(crate) fn accumulate(
    map: &mut BTreeMap<Monomial, Scalar>,
    field: FieldSpec,
    m: Monomial,
    c: Scalar,
) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = field.add(e.get(), &c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring, field: FieldSpec) -> Self {
        Polynomial {
            ring: ring.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, field: FieldSpec, c: Scalar) -> Self {
        let mut p = Self::zero(ring, field);
        let c = field
            .from_rational(&c)
            .expect("constant must lie in the field");
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.len()), c);
        }
        p
    }

    pub fn one(ring: &Ring, field: FieldSpec) -> Self {
        Self::constant(ring, field, field.one())
    }

    pub fn var(ring: &Ring, field: FieldSpec, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var_at(ring, field, i))
    }

    pub fn var_at(ring: &Ring, field: FieldSpec, index: usize) -> Self {
        let mut p = Self::zero(ring, field);
        p.terms
            .insert(Monomial::var(ring.len(), index), field.one());
        p
    }

    /// Builds a polynomial from terms, combining duplicates and reducing
    /// coefficients into the field.
    pub fn from_terms<I>(ring: &Ring, field: FieldSpec, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), ring.len(), "monomial length does not match ring");
            let c = field
                .from_rational(&c)
                .expect("coefficient must lie in the field");
            accumulate(&mut map, field, m, c);
        }
        Polynomial {
            ring: ring.clone(),
            field,
            terms: map,
        }
    }

    pub(crate) fn from_map(
        ring: &Ring,
        field: FieldSpec,
        terms: BTreeMap<Monomial, Scalar>,
    ) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Polynomial {
            ring: ring.clone(),
            field,
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the grevlex-largest monomial downwards.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, index: usize) -> u16 {
        self.terms
            .keys()
            .map(|m| m.exponent(index))
            .max()
            .unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.coefficient(&Monomial::one(self.ring.len())))
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .collect()
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {:?} vs {:?}",
            self.ring.vars(),
            other.ring.vars()
        );
        assert_eq!(self.field, other.field, "field mismatch");
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let c = self
            .field
            .from_rational(c)
            .expect("scalar must lie in the field");
        if c.is_zero() {
            return Polynomial::zero(&self.ring, self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.field.mul(a, &c)))
            .collect();
        Polynomial::from_map(&self.ring, self.field, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring, self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), self.field.mul(a, c)))
            .collect();
        Polynomial::from_map(&self.ring, self.field, terms)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the variable at `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(index);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set(index, e - 1);
            let coeff = self.field.mul(c, &self.field.from_i64(e as i64));
            accumulate(&mut map, self.field, dm, coeff);
        }
        Polynomial::from_map(&self.ring, self.field, map)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.derivative(i))
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.ring.len()).map(|i| self.derivative(i)).collect()
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.len() {
            return Err(Error::LengthMismatch {
                expected: self.ring.len(),
                actual: point.len(),
            });
        }
        let f = self.field;
        let point: Vec<Scalar> = point
            .iter()
            .map(|x| f.from_rational(x))
            .collect::<Result<_>>()?;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u32));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn substitute(&self, s: &Substitution) -> Result<Polynomial> {
        if self.field != s.field {
            return Err(Error::FieldMismatch(format!(
                "polynomial over {} but substitution over {}",
                self.field, s.field
            )));
        }
        let used = self.support_vars();
        let mut images: Vec<Option<&Polynomial>> = vec![None; self.ring.len()];
        for &i in &used {
            let name = self.ring.var(i);
            images[i] = Some(
                s.assignments
                    .get(name)
                    .ok_or_else(|| Error::MissingAssignment(name.to_string()))?,
            );
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); self.ring.len()];
        let one = Polynomial::one(&s.target, s.field);
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&s.target, s.field, c.clone());
            for &i in &used {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(one.clone());
                }
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * images[i].unwrap();
                    pw.push(next);
                }
                t = &t * &pw[e];
                if t.is_zero() {
                    break;
                }
            }
            for (tm, tc) in t.terms {
                accumulate(&mut map, s.field, tm, tc);
            }
        }
        Ok(Polynomial::from_map(&s.target, s.field, map))
    }

    /// Splits `f = Σ_α (vars)^α · c_α` with `c_α` in the ring of the remaining
    /// variables (original order). Keys are exponent vectors over `vars` in the
    /// given order.
    pub fn collect_coefficients(&self, vars: &[&str]) -> Result<BTreeMap<Monomial, Polynomial>> {
        if vars.is_empty() {
            return Err(Error::InvalidInput(
                "collect_coefficients needs at least one variable".into(),
            ));
        }
        let idx: Vec<usize> = vars
            .iter()
            .map(|v| {
                self.ring
                    .index_of(v)
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            })
            .collect::<Result<_>>()?;
        let rest: Vec<usize> = (0..self.ring.len()).filter(|i| !idx.contains(i)).collect();
        let rest_ring = Ring::new(rest.iter().map(|&i| self.ring.var(i).to_string()))?;
        let mut parts: BTreeMap<Monomial, BTreeMap<Monomial, Scalar>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = Monomial::from_exponents(idx.iter().map(|&i| m.exponent(i)));
            let rm = Monomial::from_exponents(rest.iter().map(|&i| m.exponent(i)));
            accumulate(parts.entry(key).or_default(), self.field, rm, c.clone());
        }
        Ok(parts
            .into_iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(k, t)| (k, Polynomial::from_map(&rest_ring, self.field, t)))
            .collect())
    }

    /// Inverse of [`collect_coefficients`](Self::collect_coefficients).
    pub fn reassemble(
        ring: &Ring,
        field: FieldSpec,
        vars: &[&str],
        parts: &BTreeMap<Monomial, Polynomial>,
    ) -> Result<Polynomial> {
        let idx: Vec<usize> = vars
            .iter()
            .map(|v| {
                ring.index_of(v)
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            })
            .collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        for (key, coeff) in parts {
            let cmap: Vec<usize> = coeff
                .ring
                .vars()
                .iter()
                .map(|v| {
                    ring.index_of(v)
                        .ok_or_else(|| Error::UnknownVariable(v.clone()))
                })
                .collect::<Result<_>>()?;
            for (m, c) in &coeff.terms {
                let mut full = Monomial::one(ring.len());
                for (k, &i) in idx.iter().enumerate() {
                    full.set(i, key.exponent(k));
                }
                for (k, &i) in cmap.iter().enumerate() {
                    if m.exponent(k) > 0 {
                        full.set(i, full.exponent(i) + m.exponent(k));
                    }
                }
                accumulate(&mut map, field, full, c.clone());
            }
        }
        Ok(Polynomial::from_map(ring, field, map))
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn to_ring(&self, target: &Ring) -> Result<Polynomial> {
        let mut map_idx = vec![None; self.ring.len()];
        for i in self.support_vars() {
            let name = self.ring.var(i);
            map_idx[i] = Some(
                target
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?,
            );
        }
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.len());
            for (i, j) in map_idx.iter().enumerate() {
                if let Some(j) = j {
                    nm.set(*j, m.exponent(i));
                }
            }
            map.insert(nm, c.clone());
        }
        Ok(Polynomial::from_map(target, self.field, map))
    }

    /// Renames variables; the renaming must stay injective.
    pub fn rename<F: Fn(&str) -> String>(&self, f: F) -> Result<Polynomial> {
        let ring = Ring::new(self.ring.vars().iter().map(|v| f(v)))?;
        Ok(Polynomial::from_map(&ring, self.field, self.terms.clone()))
    }

    /// Multiplies each term by `var^(degree - deg term)`, appending `var` to the
    /// ring when absent.
    pub fn homogenize(&self, var: &str, degree: u32) -> Result<Polynomial> {
        let ring = self.ring.extend(&[var.to_string()])?;
        let h = ring.index_of(var).unwrap();
        let lifted = self.to_ring(&ring)?;
        let mut map = BTreeMap::new();
        for (m, c) in lifted.terms {
            let d = m.degree();
            if d > degree {
                return Err(Error::InvalidInput(format!(
                    "term of degree {d} exceeds homogenization degree {degree}"
                )));
            }
            let mut nm = m;
            nm.set(h, nm.exponent(h) + (degree - d) as u16);
            accumulate(&mut map, self.field, nm, c);
        }
        Ok(Polynomial::from_map(&ring, self.field, map))
    }

    pub fn map_coefficients<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            self.field,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Reinterprets an integer-coefficient polynomial over another field.
    pub fn change_field(&self, field: FieldSpec) -> Result<Polynomial> {
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            accumulate(&mut map, field, m.clone(), field.from_rational(c)?);
        }
        Ok(Polynomial::from_map(&self.ring, field, map))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut map = self.terms.clone();
        for (m, c) in &rhs.terms {
            accumulate(&mut map, self.field, m.clone(), c.clone());
        }
        Polynomial::from_map(&self.ring, self.field, map)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut map = self.terms.clone();
        for (m, c) in &rhs.terms {
            accumulate(&mut map, self.field, m.clone(), self.field.neg(c));
        }
        Polynomial::from_map(&self.ring, self.field, map)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut map = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                accumulate(&mut map, self.field, m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        Polynomial::from_map(&self.ring, self.field, map)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(c)))
            .collect();
        Polynomial::from_map(&self.ring, self.field, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Assignment of variables to polynomials living in one common target ring.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: Ring,
    field: FieldSpec,
    assignments: BTreeMap<String, Polynomial>,
}

impl Substitution {
    pub fn new(target: &Ring, field: FieldSpec) -> Self {
        Substitution {
            target: target.clone(),
            field,
            assignments: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, var: &str, image: Polynomial) -> Result<()> {
        if image.ring != self.target {
            return Err(Error::RingMismatch(format!(
                "image of `{var}` is not in the target ring"
            )));
        }
        if image.field != self.field {
            return Err(Error::FieldMismatch(format!("image of `{var}`")));
        }
        self.assignments.insert(var.to_string(), image);
        Ok(())
    }

    pub fn with(mut self, var: &str, image: Polynomial) -> Result<Self> {
        self.insert(var, image)?;
        Ok(self)
    }

    /// Sends each variable of `source` to the same-named variable of `target`.
    pub fn identity(source: &Ring, target: &Ring, field: FieldSpec) -> Result<Self> {
        let mut s = Substitution::new(target, field);
        for v in source.vars() {
            s.insert(v, Polynomial::var(target, field, v)?)?;
        }
        Ok(s)
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn get(&self, var: &str) -> Option<&Polynomial> {
        self.assignments.get(var)
    }
}

/// Coefficient matrix of `polys` (one row each) over the union of their
/// monomials, columns in decreasing grevlex order.
pub fn coefficient_matrix(polys: &[Polynomial]) -> (Matrix, Vec<Monomial>) {
    let mut support: BTreeSet<Monomial> = BTreeSet::new();
    for p in polys {
        support.extend(p.terms.keys().cloned());
    }
    let cols: Vec<Monomial> = support.into_iter().rev().collect();
    let rows = polys
        .iter()
        .map(|p| cols.iter().map(|m| p.coefficient(m)).collect())
        .collect();
    (
        Matrix::from_rows(rows).expect("rows have equal length"),
        cols,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_in;

    fn ring(vars: &[&str]) -> Ring {
        Ring::new(vars.iter().copied()).unwrap()
    }

    #[test]
    fn natural_order_of_names() {
        let r = Ring::natural(["x10", "x2", "x0", "u1_0", "u0_3", "x2"]).unwrap();
        assert_eq!(r.vars(), &["u0_3", "u1_0", "x0", "x2", "x10"]);
        assert!(Ring::new(["x0", "x0"]).is_err());
        assert!(Ring::new(["0x"]).is_err());
    }

    #[test]
    fn substitution_difference_of_squares() {
        let q = FieldSpec::Rationals;
        let src = ring(&["x0", "x1"]);
        let dst = ring(&["y"]);
        let f = parse_in("x0*x1", &src, q).unwrap();
        let s = Substitution::new(&dst, q)
            .with("x0", parse_in("y + 1", &dst, q).unwrap())
            .unwrap()
            .with("x1", parse_in("y - 1", &dst, q).unwrap())
            .unwrap();
        assert_eq!(
            f.substitute(&s).unwrap(),
            parse_in("y^2 - 1", &dst, q).unwrap()
        );
    }

    #[test]
    fn substitution_identity_and_missing() {
        let q = FieldSpec::Rationals;
        let r = ring(&["x0", "x1"]);
        let f = parse_in("x0", &r, q).unwrap();
        let id = Substitution::identity(&r, &r, q).unwrap();
        assert_eq!(f.substitute(&id).unwrap(), f);
        let partial = Substitution::new(&r, q)
            .with("x1", Polynomial::var(&r, q, "x0").unwrap())
            .unwrap();
        assert_eq!(
            f.substitute(&partial),
            Err(Error::MissingAssignment("x0".into()))
        );
    }

    #[test]
    fn partial_derivatives() {
        let q = FieldSpec::Rationals;
        let r = Ring::indexed("x", 4);
        let f = parse_in("x0^2*x2", &r, q).unwrap();
        assert_eq!(
            f.partial_derivative("x2").unwrap(),
            parse_in("x0^2", &r, q).unwrap()
        );
        let g = parse_in("x0*x1 + x2*x3", &r, q).unwrap();
        assert_eq!(
            g.partial_derivative("x1").unwrap(),
            parse_in("x0", &r, q).unwrap()
        );
        let f3 = FieldSpec::Prime(3);
        let c = parse_in("x0^3", &r, f3).unwrap();
        assert!(c.partial_derivative("x0").unwrap().is_zero());
        assert_eq!(
            g.partial_derivative("y"),
            Err(Error::UnknownVariable("y".into()))
        );
    }

    #[test]
    fn evaluation() {
        let q = FieldSpec::Rationals;
        let r = Ring::indexed("x", 4);
        let f = parse_in("x0*x1 + x2*x3", &r, q).unwrap();
        let pt: Vec<Scalar> = [1, -1, 1, 1].iter().map(|&v| q.from_i64(v)).collect();
        assert!(f.evaluate(&pt).unwrap().is_zero());
        assert!(f.evaluate(&pt[..3]).is_err());
        let f5 = FieldSpec::Prime(5);
        let r1 = Ring::indexed("x", 1);
        let sq = parse_in("x0^2", &r1, f5).unwrap();
        assert_eq!(sq.evaluate(&[f5.from_i64(3)]).unwrap(), f5.from_i64(4));
        let zero_pt = vec![q.zero(); 4];
        assert!(f.evaluate(&zero_pt).unwrap().is_zero());
    }

    #[test]
    fn collect_and_reassemble() {
        let q = FieldSpec::Rationals;
        let r = ring(&["s", "t", "u", "v"]);
        let f = parse_in("s^2*u + s*t*v", &r, q).unwrap();
        let parts = f.collect_coefficients(&["s", "t"]).unwrap();
        assert_eq!(parts.len(), 2);
        let rest = ring(&["u", "v"]);
        let s2 = Monomial::from_exponents([2, 0]);
        let st = Monomial::from_exponents([1, 1]);
        assert_eq!(parts[&s2], parse_in("u", &rest, q).unwrap());
        assert_eq!(parts[&st], parse_in("v", &rest, q).unwrap());
        assert_eq!(
            Polynomial::reassemble(&r, q, &["s", "t"], &parts).unwrap(),
            f
        );

        let g = parse_in("u*v + 3", &r, q).unwrap();
        let parts = g.collect_coefficients(&["s", "t"]).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(
            parts[&Monomial::one(2)],
            parse_in("u*v + 3", &rest, q).unwrap()
        );
    }

    #[test]
    fn homogenize_appends_variable() {
        let q = FieldSpec::Rationals;
        let r = ring(&["s"]);
        let f = parse_in("s^2 + 1", &r, q).unwrap();
        let h = f.homogenize("h", 3).unwrap();
        let hr = ring(&["s", "h"]);
        assert_eq!(h, parse_in("s^2*h + h^3", &hr, q).unwrap());
        assert!(f.homogenize("h", 1).is_err());
    }
}

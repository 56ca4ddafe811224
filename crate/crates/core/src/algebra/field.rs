//! Coefficient fields: exact rationals or a prime field `F_p` with `p < 2^31`.
//!
//! Elements of either field are carried as [`Scalar`] (a `BigRational`). In a
//! prime field every element is stored as its integer representative in
//! `[0, p)`, so equality of canonical forms is plain structural equality.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

/// Deterministic primality by trial division; moduli are below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!(
                "modulus {p} must be below 2^31"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// Parses `rat` or `fp:<p>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "rat" || t == "Q" || t == "rationals" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = t.strip_prefix("fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidField(format!("bad modulus in `{t}`")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::InvalidField(format!(
            "expected `rat` or `fp:<p>`, got `{t}`"
        )))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "rat".to_string(),
            FieldSpec::Prime(p) => format!("fp:{p}"),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_int(&BigInt::from(v))
    }

    pub fn from_int(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::from_integer(v.clone()),
            FieldSpec::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::from_integer(r)
            }
        }
    }

    pub fn from_biguint(&self, v: &BigUint) -> Scalar {
        self.from_int(&BigInt::from_biguint(Sign::Plus, v.clone()))
    }

    /// Maps an arbitrary rational into the field. Fails in `F_p` when the
    /// denominator is divisible by `p`.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(v.clone()),
            FieldSpec::Prime(p) => {
                let pp = BigInt::from(*p);
                let den = v.denom().mod_floor(&pp);
                if den.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "coefficient {v} is not invertible modulo {p}"
                    )));
                }
                let num = v.numer().mod_floor(&pp).to_u64().unwrap();
                let den = den.to_u64().unwrap();
                let inv = mod_pow(den, (*p as u64) - 2, *p as u64);
                Ok(Scalar::from_integer(BigInt::from(num * inv % *p as u64)))
            }
        }
    }

    fn residue(&self, a: &Scalar, p: u32) -> u64 {
        debug_assert!(a.is_integer());
        let _ = self;
        a.numer()
            .to_u64()
            .map(|v| v % p as u64)
            .unwrap_or_else(|| a.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap())
    }

    fn lift(v: u64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => a + b,
            FieldSpec::Prime(p) => {
                let s = self.residue(a, *p) + self.residue(b, *p);
                Self::lift(s % *p as u64)
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => a - b,
            FieldSpec::Prime(p) => {
                let pp = *p as u64;
                let s = self.residue(a, *p) + pp - self.residue(b, *p);
                Self::lift(s % pp)
            }
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => -a,
            FieldSpec::Prime(p) => {
                let pp = *p as u64;
                Self::lift((pp - self.residue(a, *p)) % pp)
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => a * b,
            FieldSpec::Prime(p) => {
                let s = self.residue(a, *p) * self.residue(b, *p);
                Self::lift(s % *p as u64)
            }
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            FieldSpec::Rationals => Some(a.recip()),
            FieldSpec::Prime(p) => {
                let pp = *p as u64;
                Some(Self::lift(mod_pow(self.residue(a, *p), pp - 2, pp)))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Square root inside the field, when one exists.
    pub fn sqrt(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return Some(Scalar::zero());
        }
        match self {
            FieldSpec::Rationals => {
                if a.is_negative() {
                    return None;
                }
                let n = a.numer().to_biguint()?;
                let d = a.denom().to_biguint()?;
                let rn = n.sqrt();
                let rd = d.sqrt();
                if &rn * &rn == n && &rd * &rd == d {
                    Some(Scalar::new(BigInt::from(rn), BigInt::from(rd)))
                } else {
                    None
                }
            }
            FieldSpec::Prime(p) => {
                let pp = *p as u64;
                tonelli_shanks(self.residue(a, *p), pp).map(Self::lift)
            }
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        format_scalar(a)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

pub fn format_scalar(a: &Scalar) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r.min(p - r))
}

//! Exact field elements: rationals and residues modulo a prime.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// The ground field. `PrimeField(p)` always carries a prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField(u64),
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(FieldDescriptor::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::PrimeField(p) => *p,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FieldDescriptor::Rationals => s.serialize_str("Q"),
            FieldDescriptor::PrimeField(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("Fp", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Fp {
            #[serde(rename = "Fp")]
            p: u64,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Prime(Fp),
        }
        match Raw::deserialize(d)? {
            Raw::Name(n) if n == "Q" => Ok(FieldDescriptor::Rationals),
            Raw::Name(n) => Err(serde::de::Error::custom(format!("unknown field {n:?}"))),
            Raw::Prime(Fp { p }) => FieldDescriptor::prime(p).map_err(serde::de::Error::custom),
        }
    }
}

/// True iff the characteristic of `field` is nonzero and divides `n`.
pub fn char_divides(field: FieldDescriptor, n: u64) -> bool {
    match field {
        FieldDescriptor::Rationals => false,
        FieldDescriptor::PrimeField(p) => n.is_multiple_of(p),
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Canonical: `Small` iff numerator and denominator both fit in i64; den > 0; gcd = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Rat {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rat {
    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        let (mut n, mut d) = if d < 0 {
            match (n.checked_neg(), d.checked_neg()) {
                (Some(n), Some(d)) => (n, d),
                _ => return Rat::from_big(BigRational::new(n.into(), d.into())),
            }
        } else {
            (n, d)
        };
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(BigRational::new_raw(n.into(), d.into()))),
        }
    }

    fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rat::Small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rat::from_i128(a + c, b);
            }
            if let Some(n) = (a * d).checked_add(c * b) {
                return Rat::from_i128(n, b * d);
            }
        }
        Rat::from_big(self.to_big() + o.to_big())
    }

    fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_mul(*c) {
                    return Rat::Small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            return Rat::from_i128(a * c, b * d);
        }
        Rat::from_big(self.to_big() * o.to_big())
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::Small(m, *d),
                None => Rat::from_big(-self.to_big()),
            },
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    fn inv(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::from_i128(*d as i128, *n as i128),
            Rat::Big(b) => Rat::from_big(b.recip()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Q(Rat),
    Fp { v: u64, p: u64 },
}

/// An element of a [`FieldDescriptor`] in canonical form.
///
/// The `std::ops` impls panic when the operands live in different fields or
/// on division by zero; the `checked_*` methods report these as errors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero(field: FieldDescriptor) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldDescriptor) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldDescriptor, n: i64) -> Scalar {
        match field {
            FieldDescriptor::Rationals => Scalar(Repr::Q(Rat::Small(n, 1))),
            FieldDescriptor::PrimeField(p) => Scalar(Repr::Fp {
                v: (n as i128).rem_euclid(p as i128) as u64,
                p,
            }),
        }
    }

    pub fn from_bigint(field: FieldDescriptor, n: &BigInt) -> Scalar {
        match field {
            FieldDescriptor::Rationals => {
                Scalar(Repr::Q(Rat::from_big(BigRational::from_integer(n.clone()))))
            }
            FieldDescriptor::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar(Repr::Fp {
                    v: r.to_u64().expect("residue fits"),
                    p,
                })
            }
        }
    }

    /// `n / d` in `field`.
    pub fn ratio(field: FieldDescriptor, n: i64, d: i64) -> Result<Scalar, ScalarError> {
        Scalar::from_i64(field, n).checked_div(&Scalar::from_i64(field, d))
    }

    pub fn from_big_rational(
        field: FieldDescriptor,
        r: &BigRational,
    ) -> Result<Scalar, ScalarError> {
        Scalar::from_bigint(field, r.numer()).checked_div(&Scalar::from_bigint(field, r.denom()))
    }

    pub fn field(&self) -> FieldDescriptor {
        match &self.0 {
            Repr::Q(_) => FieldDescriptor::Rationals,
            Repr::Fp { p, .. } => FieldDescriptor::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => matches!(r, Rat::Small(1, 1)),
            Repr::Fp { v, .. } => *v == 1,
        }
    }

    /// The value as a rational, for `Rationals` only.
    pub fn to_big_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Q(r) => Some(r.to_big()),
            Repr::Fp { .. } => None,
        }
    }

    /// The residue in `[0, p)`, for prime fields only.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Q(_) => None,
            Repr::Fp { v, .. } => Some(*v),
        }
    }

    /// The value as a machine integer when it is one.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Q(Rat::Small(n, 1)) => Some(*n),
            Repr::Q(_) => None,
            Repr::Fp { v, .. } => i64::try_from(*v).ok(),
        }
    }

    fn same_field(&self, o: &Scalar) -> Result<(), ScalarError> {
        match (&self.0, &o.0) {
            (Repr::Q(_), Repr::Q(_)) => Ok(()),
            (Repr::Fp { p, .. }, Repr::Fp { p: q, .. }) if p == q => Ok(()),
            _ => Err(ScalarError::FieldMismatch(self.field(), o.field())),
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(o)?;
        Ok(match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.add(b))),
            (Repr::Fp { v, p }, Repr::Fp { v: w, .. }) => {
                let s = v + w;
                Scalar(Repr::Fp {
                    v: if s >= *p { s - p } else { s },
                    p: *p,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&o.neg_ref())
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(o)?;
        Ok(match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.mul(b))),
            (Repr::Fp { v, p }, Repr::Fp { v: w, .. }) => Scalar(Repr::Fp {
                v: ((*v as u128 * *w as u128) % *p as u128) as u64,
                p: *p,
            }),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_field(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Q(r) => Scalar(Repr::Q(r.inv())),
            Repr::Fp { v, p } => Scalar(Repr::Fp {
                v: mod_inverse(*v, *p),
                p: *p,
            }),
        })
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Q(r) => Scalar(Repr::Q(r.neg())),
            Repr::Fp { v, p } => Scalar(Repr::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            }),
        }
    }

    /// `self^k`; negative exponents require `self != 0`.
    pub fn pow(&self, k: i64) -> Result<Scalar, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Scalar::one(self.field());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `a += b * c` without intermediate clones where possible.
    pub fn add_mul(&mut self, b: &Scalar, c: &Scalar) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        let prod = b * c;
        *self = &*self + &prod;
    }

    pub fn render(&self) -> String {
        match &self.0 {
            Repr::Q(Rat::Small(n, 1)) => n.to_string(),
            Repr::Q(Rat::Small(n, d)) => format!("{n}/{d}"),
            Repr::Q(Rat::Big(b)) => {
                if b.denom().is_one() {
                    b.numer().to_string()
                } else {
                    format!("{}/{}", b.numer(), b.denom())
                }
            }
            Repr::Fp { v, .. } => v.to_string(),
        }
    }

    /// Parses `"n"` or `"n/d"` (integers of any size) into `field`.
    pub fn parse(field: FieldDescriptor, s: &str) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match field {
            FieldDescriptor::Rationals => {
                Ok(Scalar(Repr::Q(Rat::from_big(BigRational::new(n, d)))))
            }
            FieldDescriptor::PrimeField(_) => {
                Scalar::from_bigint(field, &n).checked_div(&Scalar::from_bigint(field, &d))
            }
        }
    }

    /// Sign of a rational value; `None` for prime fields.
    pub fn signum(&self) -> Option<Ordering> {
        match &self.0 {
            Repr::Q(Rat::Small(n, _)) => Some(n.cmp(&0)),
            Repr::Q(Rat::Big(b)) => Some(if b.is_negative() {
                Ordering::Less
            } else if b.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Greater
            }),
            Repr::Fp { .. } => None,
        }
    }
}

fn mod_inverse(v: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, v as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(_) => write!(f, "{}", self.render()),
            Repr::Fp { p, .. } => write!(f, "{} (mod {p})", self.render()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$checked(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

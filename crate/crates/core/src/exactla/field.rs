use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact coefficient field. Elements are plain values; all arithmetic goes
/// through the field so that prime fields can carry their modulus.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Parses an integer or a fraction `p/q`.
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    /// JSON form of a scalar: an integer where possible, otherwise `"p/q"`.
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_json(&self, v: &serde_json::Value) -> Option<Self::Elem> {
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(|i| self.from_i64(i)),
            serde_json::Value::String(s) => self.parse(s),
            _ => None,
        }
    }
}

/// The prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::InvalidField(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in GF({})", self.p);
        // extended Euclid on i128
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        self.reduce_i128(t0)
    }

    fn parse(&self, s: &str) -> Option<u64> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            let d = self.from_i64(d);
            if d == 0 {
                return None;
            }
            Some(self.div(&self.from_i64(n), &d))
        } else {
            let v: BigInt = s.parse().ok()?;
            let r = v.mod_floor_u64(self.p);
            Some(r)
        }
    }

    fn to_json(&self, a: &u64) -> serde_json::Value {
        serde_json::Value::from(*a)
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }

    fn parse(&self, s: &str) -> Option<BigRational> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        } else {
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }

    fn to_json(&self, a: &BigRational) -> serde_json::Value {
        if a.is_integer() {
            if let Some(i) = a.numer().to_i64() {
                return serde_json::Value::from(i);
            }
        }
        let sign = if a.is_negative() { "-" } else { "" };
        if a.is_integer() {
            serde_json::Value::String(format!("{sign}{}", a.numer().abs()))
        } else {
            serde_json::Value::String(format!("{sign}{}/{}", a.numer().abs(), a.denom()))
        }
    }
}

/// Runtime description of a coefficient field: characteristic 0 means Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct FieldSpec {
    pub characteristic: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn new(characteristic: u64) -> Result<Self> {
        let spec = Self { characteristic };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gf(p: u64) -> Result<Self> {
        Self::new(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.characteristic == 0 || is_prime(self.characteristic) {
            Ok(())
        } else {
            Err(Error::InvalidField(self.characteristic))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "QQ"),
            p => write!(f, "GF({p})"),
        }
    }
}

/// Runs `$body` with `$f` bound to the concrete field described by `$spec`.
///
/// ```
/// use hcw_core::{with_field, exactla::{Field, FieldSpec}};
/// let spec = FieldSpec::new(2).unwrap();
/// let c = with_field!(spec, f => f.characteristic()).unwrap();
/// assert_eq!(c, 2);
/// ```
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {{
        let spec: $crate::exactla::FieldSpec = $spec;
        match spec.characteristic {
            0 => {
                let $f = $crate::exactla::Rationals;
                ::std::result::Result::<_, $crate::Error>::Ok($body)
            }
            p => match $crate::exactla::PrimeField::new(p) {
                Ok($f) => ::std::result::Result::<_, $crate::Error>::Ok($body),
                Err(e) => Err(e),
            },
        }
    }};
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

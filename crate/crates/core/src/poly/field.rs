//! Coefficient fields: the rationals and prime fields.
//!
//! Every coefficient is stored as a `BigRational`. Over a prime field the
//! stored value is always an integer in `[0, p)`, so structural equality of
//! polynomials coincides with equality in the field.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;

pub type Coeff = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Self, PolyError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(PolyError::BadCharacteristic(p as u64));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    fn residue(p: u32, n: &BigInt) -> u64 {
        let m = BigInt::from(p);
        n.mod_floor(&m).to_u64().expect("residue fits")
    }

    fn inv_mod(p: u32, a: u64) -> Option<u64> {
        if a.is_multiple_of(p as u64) {
            return None;
        }
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (a % p as u64, p as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            exp >>= 1;
        }
        Some(acc)
    }

    /// Maps an arbitrary rational into the field's canonical representative.
    pub fn reduce(&self, c: &BigRational) -> Result<Coeff, PolyError> {
        match self {
            Field::Rationals => Ok(c.clone()),
            Field::Prime(p) => {
                let num = Self::residue(*p, c.numer());
                let den = Self::residue(*p, c.denom());
                let inv = Self::inv_mod(*p, den).ok_or(PolyError::DivisionByZero)?;
                Ok(BigRational::from_integer(BigInt::from(num * inv % *p as u64)))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.reduce(&BigRational::from_integer(BigInt::from(v)))
            .expect("integers always reduce")
    }

    pub fn zero(&self) -> Coeff {
        BigRational::zero()
    }

    pub fn one(&self) -> Coeff {
        BigRational::one()
    }

    fn small(c: &Coeff) -> u64 {
        c.numer().to_u64().expect("canonical residue")
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            Field::Rationals => a + b,
            Field::Prime(p) => {
                let s = (Self::small(a) + Self::small(b)) % *p as u64;
                BigRational::from_integer(BigInt::from(s))
            }
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match self {
            Field::Rationals => -a,
            Field::Prime(p) => {
                let v = Self::small(a);
                let r = if v == 0 { 0 } else { *p as u64 - v };
                BigRational::from_integer(BigInt::from(r))
            }
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            Field::Rationals => a * b,
            Field::Prime(p) => {
                let s = Self::small(a) * Self::small(b) % *p as u64;
                BigRational::from_integer(BigInt::from(s))
            }
        }
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rationals => Some(a.recip()),
            Field::Prime(p) => Self::inv_mod(*p, Self::small(a))
                .map(|v| BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// True when the printed form of `c` should carry a leading minus sign.
    pub fn is_negative(&self, c: &Coeff) -> bool {
        matches!(self, Field::Rationals) && c.is_negative()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "QQ" {
            return Ok(Field::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u32 = rest
                .parse()
                .map_err(|_| PolyError::Parse { pos: 3, msg: format!("bad prime `{rest}`") })?;
            return Field::prime(p);
        }
        Err(PolyError::Parse { pos: 0, msg: format!("unknown field `{s}` (expected QQ or Fp:<p>)") })
    }
}

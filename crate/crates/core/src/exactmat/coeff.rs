//! Scalars of the coefficient ring: exact rationals or a prime field `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fq::{inv_mod, is_prime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Rational,
    Modular(u32),
}

impl CoeffRing {
    /// Checks that `q` is invertible in this ring.
    pub fn validate_for(self, q: u32) -> Result<()> {
        if !is_prime(q) {
            return Err(Error::UnsupportedField(format!("q = {q} is not prime")));
        }
        if let CoeffRing::Modular(p) = self {
            if !is_prime(p) {
                return Err(Error::UnsupportedField(format!("p = {p} is not prime")));
            }
            if p == q {
                return Err(Error::UnsupportedField(format!(
                    "coefficient characteristic {p} equals the field characteristic"
                )));
            }
        }
        Ok(())
    }

    pub fn zero(self) -> Coeff {
        match self {
            CoeffRing::Rational => Coeff::Rational(BigRational::zero()),
            CoeffRing::Modular(p) => Coeff::Modular {
                value: 0,
                modulus: p,
            },
        }
    }

    pub fn one(self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Coeff {
        match self {
            CoeffRing::Rational => Coeff::Rational(BigRational::from_integer(v.into())),
            CoeffRing::Modular(p) => Coeff::Modular {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Coeff {
        match self {
            CoeffRing::Rational => Coeff::Rational(BigRational::from_integer(v.clone())),
            CoeffRing::Modular(p) => {
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Coeff::Modular {
                    value: r.to_u32().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Coeff> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        Ok(&n * &d.inv()?)
    }

    /// Parses `"7"`, `"-3"` or `"3/7"`.
    pub fn parse(self, s: &str) -> Result<Coeff> {
        let s = s.trim();
        let bad = || Error::InvalidRep(format!("not an exact number: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }

    pub fn label(self) -> String {
        match self {
            CoeffRing::Rational => "rational".to_string(),
            CoeffRing::Modular(p) => format!("mod {p}"),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(BigRational),
    Modular { value: u32, modulus: u32 },
}

impl Coeff {
    pub fn ring(&self) -> CoeffRing {
        match self {
            Coeff::Rational(_) => CoeffRing::Rational,
            Coeff::Modular { modulus, .. } => CoeffRing::Modular(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(r) => r.is_zero(),
            Coeff::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rational(r) => r.is_one(),
            Coeff::Modular { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Coeff> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match self {
            Coeff::Rational(r) => Coeff::Rational(r.recip()),
            Coeff::Modular { value, modulus } => Coeff::Modular {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Exact rational value, when this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rational(r) => Some(r),
            Coeff::Modular { .. } => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Coeff::Rational(r) if r.is_negative())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Coeff::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coeff::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mod_op(a: &Coeff, b: &Coeff, op: impl Fn(u64, u64, u64) -> u64) -> Coeff {
    match (a, b) {
        (
            Coeff::Modular {
                value: x,
                modulus: p,
            },
            Coeff::Modular {
                value: y,
                modulus: p2,
            },
        ) => {
            assert_eq!(p, p2, "coefficient ring mismatch");
            Coeff::Modular {
                value: op(*x as u64, *y as u64, *p as u64) as u32,
                modulus: *p,
            }
        }
        _ => panic!("coefficient ring mismatch"),
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            _ => mod_op(self, rhs, |x, y, p| (x + y) % p),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a - b),
            _ => mod_op(self, rhs, |x, y, p| (x + p - y) % p),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            _ => mod_op(self, rhs, |x, y, p| x * y % p),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(-a),
            Coeff::Modular { value, modulus } => Coeff::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let r = CoeffRing::Rational;
        assert_eq!(r.parse("3/7").unwrap().to_string(), "3/7");
        assert_eq!(r.parse("-6/4").unwrap().to_string(), "-3/2");
        assert_eq!(r.parse("5").unwrap().to_string(), "5");
        assert!(r.parse("0.5").is_err());
        assert!(r.parse("1/0").is_err());
        let m = CoeffRing::Modular(5);
        // 3/7 = 3 * 3 = 9 = 4 mod 5
        assert_eq!(m.parse("3/7").unwrap().to_string(), "4");
        assert_eq!(m.parse("-1").unwrap().to_string(), "4");
    }

    #[test]
    fn ring_validation() {
        assert!(CoeffRing::Rational.validate_for(3).is_ok());
        assert!(CoeffRing::Modular(5).validate_for(3).is_ok());
        assert!(matches!(
            CoeffRing::Modular(3).validate_for(3),
            Err(Error::UnsupportedField(_))
        ));
        assert!(CoeffRing::Rational.validate_for(4).is_err());
        assert!(CoeffRing::Modular(6).validate_for(5).is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let m = CoeffRing::Modular(7);
        let a = m.from_i64(3);
        let b = m.from_i64(5);
        assert_eq!(&a * &b, m.from_i64(1));
        assert_eq!(&a - &b, m.from_i64(5));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(-&a, m.from_i64(4));
    }
}

//! Coefficient fields and exact scalars.
//!
//! Every frame coefficient, product structure constant and homology
//! coordinate in this crate is a [`Scalar`]. Two fields are supported:
//! the rationals (default) and a prime field GF(p). Rationals are kept in
//! an `i64` fraction while they fit and are promoted to big integers on
//! overflow, so arithmetic is always exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default characteristic for the prime field.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^31)")]
    PrimeTooLarge(u64),
    #[error("unknown field descriptor `{0}` (expected `q` or `gf:P`)")]
    Descriptor(String),
    #[error("cannot parse `{0}` as a scalar")]
    Scalar(String),
    #[error("division by zero in `{0}`")]
    ZeroDenominator(String),
}

/// Coefficient field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// GF(p), checking that `p` is a prime below 2^31.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar(Repr::Small(Ratio::from_integer(v))).normalized(),
            Field::Prime(p) => Scalar(Repr::Mod {
                value: v.rem_euclid(p as i64) as u64,
                p,
            }),
        }
    }

    /// `(-1)^k` in this field.
    pub fn sign(&self, k: usize) -> Scalar {
        if k.is_multiple_of(2) {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parses `a` or `a/b` (decimal integers) into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| FieldError::Scalar(text.to_string()))?;
        let den: BigInt = den.parse().map_err(|_| FieldError::Scalar(text.to_string()))?;
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator(text.to_string()));
        }
        match *self {
            Field::Rational => Ok(Scalar(Repr::Big(BigRational::new(num, den))).normalized()),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |v: &BigInt| -> u64 {
                    let r = ((v % &pb) + &pb) % &pb;
                    r.to_u64().expect("reduced residue fits in u64")
                };
                let d = reduce(&den);
                if d == 0 {
                    return Err(FieldError::ZeroDenominator(text.to_string()));
                }
                let n = Scalar(Repr::Mod { value: reduce(&num), p });
                let d = Scalar(Repr::Mod { value: d, p });
                Ok(&n / &d)
            }
        }
    }

    /// Whether `s` is an element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (&s.0, self) {
            (Repr::Small(_) | Repr::Big(_), Field::Rational) => true,
            (Repr::Mod { p, .. }, Field::Prime(q)) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "q" | "Q" | "qq" | "QQ" => Ok(Field::Rational),
            _ => {
                let rest = t
                    .strip_prefix("gf:")
                    .or_else(|| t.strip_prefix("GF:"))
                    .ok_or_else(|| FieldError::Descriptor(s.to_string()))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| FieldError::Descriptor(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of a [`Field`].
///
/// Scalars from different fields must not be mixed; doing so panics.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

#[derive(Clone, Debug)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
    Mod { value: u64, p: u64 },
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self.0 {
            Repr::Small(_) | Repr::Big(_) => Field::Rational,
            Repr::Mod { p, .. } => Field::Prime(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
            Repr::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_one(),
            Repr::Big(r) => r.is_one(),
            Repr::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(r) => Scalar(Repr::Small(r.recip())).normalized(),
            Repr::Big(r) => Scalar(Repr::Big(r.recip())).normalized(),
            Repr::Mod { value, p } => Scalar(Repr::Mod {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            }),
        })
    }

    /// Keeps the `i64` representation canonical: a big rational that fits is
    /// demoted, and `i64::MIN` never appears (its negation overflows).
    fn normalized(self) -> Scalar {
        match self.0 {
            Repr::Small(r) => {
                if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
                    Scalar(Repr::Big(to_big(&r)))
                } else {
                    Scalar(Repr::Small(r))
                }
            }
            Repr::Big(r) => match (r.numer().to_i64(), r.denom().to_i64()) {
                (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                    Scalar(Repr::Small(Ratio::new_raw(n, d)))
                }
                _ => Scalar(Repr::Big(r)),
            },
            m @ Repr::Mod { .. } => Scalar(m),
        }
    }

    fn binop(
        &self,
        rhs: &Scalar,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
        modular: impl Fn(u64, u64, u64) -> u64,
    ) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => match small(a, b) {
                Some(r) => Scalar(Repr::Small(r)).normalized(),
                None => Scalar(Repr::Big(big(to_big(a), to_big(b)))).normalized(),
            },
            (Repr::Small(a), Repr::Big(b)) => {
                Scalar(Repr::Big(big(to_big(a), b.clone()))).normalized()
            }
            (Repr::Big(a), Repr::Small(b)) => {
                Scalar(Repr::Big(big(a.clone(), to_big(b)))).normalized()
            }
            (Repr::Big(a), Repr::Big(b)) => Scalar(Repr::Big(big(a.clone(), b.clone()))).normalized(),
            (Repr::Mod { value: a, p }, Repr::Mod { value: b, p: q }) if p == q => Scalar(Repr::Mod {
                value: modular(*a, *b, *p),
                p: *p,
            }),
            _ => panic!("mixed-field scalar arithmetic: {self} and {rhs}"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            (Repr::Small(_), Repr::Big(_)) | (Repr::Big(_), Repr::Small(_)) => false,
            (Repr::Mod { value: a, p }, Repr::Mod { value: b, p: q }) => p == q && a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => write!(f, "{r}"),
            Repr::Big(r) => write!(f, "{r}"),
            Repr::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a.checked_add(b), |a, b| a + b, |a, b, p| (a + b) % p)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a.checked_sub(b), |a, b| a - b, |a, b, p| (a + p - b) % p)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a.checked_mul(b), |a, b| a * b, |a, b, p| a * b % p)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(r) => Scalar(Repr::Small(-r)),
            Repr::Big(r) => Scalar(Repr::Big(-r)).normalized(),
            Repr::Mod { value, p } => Scalar(Repr::Mod {
                value: (p - value) % p,
                p: *p,
            }),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Scalar {
    /// Sign of a rational scalar (`-1`, `0`, `1`); prime field elements
    /// report `0` or `1`.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Repr::Mod { value, .. } => i32::from(*value != 0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = Field::Rational;
        let a = q.parse_scalar("1/3").unwrap();
        let b = q.parse_scalar("2/3").unwrap();
        assert!((&a + &b).is_one());
        assert_eq!((&a * &b).to_string(), "2/9");
        assert_eq!((&a / &b).to_string(), "1/2");
        assert_eq!((-&a).to_string(), "-1/3");
    }

    #[test]
    fn overflow_promotes_to_big_and_back() {
        let q = Field::Rational;
        let big = q.from_i64(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        let back = &sq / &big;
        assert_eq!(back, big);
        let min = q.from_i64(i64::MIN);
        assert_eq!((-&min).to_string(), "9223372036854775808");
    }

    #[test]
    fn prime_field() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!((&three * &three.inv().unwrap()), f.one());
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert_eq!(f.parse_scalar("1/2").unwrap().to_string(), "4");
        assert!(Field::prime(8).is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for f in [Field::Rational, Field::Prime(DEFAULT_PRIME)] {
            assert_eq!(f.to_string().parse::<Field>().unwrap(), f);
        }
        assert!("gf:4".parse::<Field>().is_err());
        assert!("r".parse::<Field>().is_err());
    }
}

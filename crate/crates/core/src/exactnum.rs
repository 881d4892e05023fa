//! Exact scalars over ℤ, ℚ and prime fields 𝔽ₚ.
//!
//! Integers and rationals are arbitrary precision. Prime-field residues are
//! stored reduced in `[0, p)`; since `p < 2^16` every intermediate product fits
//! in a `u64`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u32 = 1 << 16;

/// The base ring `A` that every algebra in a computation is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BaseKindRepr", into = "BaseKindRepr")]
pub enum BaseKind {
    Int,
    Rat,
    Fp(u32),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum BaseKindRepr {
    Z,
    Q,
    Fp { p: u64 },
}

impl TryFrom<BaseKindRepr> for BaseKind {
    type Error = Error;

    fn try_from(r: BaseKindRepr) -> Result<Self> {
        match r {
            BaseKindRepr::Z => Ok(BaseKind::Int),
            BaseKindRepr::Q => Ok(BaseKind::Rat),
            BaseKindRepr::Fp { p } => BaseKind::prime_field(p),
        }
    }
}

impl From<BaseKind> for BaseKindRepr {
    fn from(b: BaseKind) -> Self {
        match b {
            BaseKind::Int => BaseKindRepr::Z,
            BaseKind::Rat => BaseKindRepr::Q,
            BaseKind::Fp(p) => BaseKindRepr::Fp { p: p as u64 },
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseKind {
    /// 𝔽ₚ, after checking that `p` is a prime below 2¹⁶ by trial division.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= MAX_PRIME as u64 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(BaseKind::Fp(p as u32))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, BaseKind::Int)
    }

    pub fn characteristic(self) -> u32 {
        match self {
            BaseKind::Fp(p) => p,
            _ => 0,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            BaseKind::Int => Scalar::Int(n.clone()),
            BaseKind::Rat => Scalar::Rat(BigRational::from_integer(n.clone())),
            BaseKind::Fp(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Fp { value: r.to_u32().expect("residue below p"), p }
            }
        }
    }

    /// Interprets `num/den` in this base. Over ℤ only `den = ±1` is accepted.
    pub fn from_fraction(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        match self {
            BaseKind::Int => {
                let (q, r) = num.div_rem(den);
                if r.is_zero() {
                    Ok(Scalar::Int(q))
                } else {
                    Err(Error::NotInvertible)
                }
            }
            BaseKind::Rat => rat_normalize(num.clone(), den.clone()),
            BaseKind::Fp(_) => {
                let d = self.from_bigint(den);
                Ok(self.from_bigint(num).mul(&fp_inv(&d)?))
            }
        }
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::Int => write!(f, "Z"),
            BaseKind::Rat => write!(f, "Q"),
            BaseKind::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact element of a base ring. Mixing kinds in arithmetic is a logic
/// error and panics; polynomial-level code rejects it earlier with
/// [`Error::MixedContext`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp { value: u32, p: u32 },
}

/// Reduced representative of `num/den` with positive denominator.
pub fn rat_normalize(num: BigInt, den: BigInt) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    // BigRational::new reduces by the gcd and moves the sign to the numerator.
    Ok(Scalar::Rat(BigRational::new(num, den)))
}

/// Multiplicative inverse in 𝔽ₚ.
pub fn fp_inv(a: &Scalar) -> Result<Scalar> {
    match *a {
        Scalar::Fp { value, p } => {
            if value == 0 {
                return Err(Error::NotInvertible);
            }
            // extended Euclid on small integers
            let (mut t, mut new_t) = (0i64, 1i64);
            let (mut r, mut new_r) = (p as i64, value as i64);
            while new_r != 0 {
                let q = r / new_r;
                (t, new_t) = (new_t, t - q * new_t);
                (r, new_r) = (new_r, r - q * new_r);
            }
            debug_assert_eq!(r, 1);
            Ok(Scalar::Fp { value: t.rem_euclid(p as i64) as u32, p })
        }
        _ => Err(Error::NotInvertible),
    }
}

impl Scalar {
    pub fn kind(&self) -> BaseKind {
        match self {
            Scalar::Int(_) => BaseKind::Int,
            Scalar::Rat(_) => BaseKind::Rat,
            Scalar::Fp { p, .. } => BaseKind::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one(),
            Scalar::Rat(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    /// True when the printed form carries a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_negative(),
            Scalar::Rat(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("mixed scalar kinds: {:?} + {:?}", self.kind(), other.kind()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { value, p } => Scalar::Fp { value: (p - value) % p, p: *p },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("mixed scalar kinds: {:?} * {:?}", self.kind(), other.kind()),
        }
    }

    /// Field inverse (ℚ or 𝔽ₚ). Integers other than ±1 are not invertible.
    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Int(a) => {
                if a.abs().is_one() {
                    Ok(self.clone())
                } else {
                    Err(Error::NotInvertible)
                }
            }
            Scalar::Rat(a) => {
                if a.is_zero() {
                    Err(Error::NotInvertible)
                } else {
                    Ok(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { .. } => fp_inv(self),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer representative, if this scalar is one (rationals need unit denominator).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(a) => Some(a.clone()),
            Scalar::Rat(q) if q.denom().is_one() => Some(q.numer().clone()),
            Scalar::Rat(_) => None,
            Scalar::Fp { value, .. } => Some(BigInt::from(*value)),
        }
    }

    /// Numerator and denominator (denominator 1 for ℤ and 𝔽ₚ).
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Rat(q) => (q.numer().clone(), q.denom().clone()),
            _ => (self.to_bigint().expect("integral scalar"), BigInt::one()),
        }
    }

    /// JSON literal: integers as numbers (strings past 64 bits), rationals as "n/d".
    pub fn to_json(&self) -> serde_json::Value {
        let (n, d) = self.to_fraction();
        if d.is_one() {
            match n.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(n.to_string()),
            }
        } else {
            serde_json::Value::from(format!("{n}/{d}"))
        }
    }

    pub fn from_json(kind: BaseKind, v: &serde_json::Value) -> Result<Scalar> {
        match v {
            serde_json::Value::Number(n) => {
                let i = n
                    .as_i64()
                    .ok_or_else(|| Error::Input(format!("scalar {n} is not an integer")))?;
                Ok(kind.from_i64(i))
            }
            serde_json::Value::String(s) => {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Input(format!("bad scalar literal `{s}`")))
                };
                match s.split_once('/') {
                    Some((n, d)) => kind.from_fraction(&parse(n)?, &parse(d)?),
                    None => Ok(kind.from_bigint(&parse(s)?)),
                }
            }
            other => Err(Error::Input(format!("bad scalar literal {other}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(a) => write!(f, "{a}"),
            Scalar::Rat(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Scalar {
        rat_normalize(n.into(), d.into()).unwrap()
    }

    fn fp(v: u32, p: u32) -> Scalar {
        BaseKind::prime_field(p as u64).unwrap().from_i64(v as i64)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(rat(2, 4).to_string(), "1/2");
        assert_eq!(rat(3, -6).to_string(), "-1/2");
        assert_eq!(rat(0, 7).to_fraction(), (BigInt::from(0), BigInt::from(1)));
        assert_eq!(
            rat_normalize(BigInt::from(1), BigInt::from(0)),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(fp_inv(&fp(2, 5)).unwrap(), fp(3, 5));
        assert_eq!(fp_inv(&fp(1, 13)).unwrap(), fp(1, 13));
        // brute force over the residues of F7
        let brute = (1..7).find(|b| (4 * b) % 7 == 1).unwrap();
        assert_eq!(brute, 2);
        assert_eq!(fp_inv(&fp(4, 7)).unwrap(), fp(2, 7));
        assert_eq!(fp_inv(&fp(0, 7)), Err(Error::NotInvertible));
    }

    #[test]
    fn modulus_validation() {
        assert!(BaseKind::prime_field(2).is_ok());
        assert!(BaseKind::prime_field(65521).is_ok());
        assert_eq!(BaseKind::prime_field(1), Err(Error::InvalidModulus(1)));
        assert_eq!(BaseKind::prime_field(9), Err(Error::InvalidModulus(9)));
        assert_eq!(BaseKind::prime_field(65537), Err(Error::InvalidModulus(65537)));
    }

    #[test]
    fn json_literals() {
        let k = BaseKind::Rat;
        let half = Scalar::from_json(k, &serde_json::json!("2/4")).unwrap();
        assert_eq!(half.to_json(), serde_json::json!("1/2"));
        let f5 = BaseKind::Fp(5);
        assert_eq!(Scalar::from_json(f5, &serde_json::json!(-1)).unwrap(), fp(4, 5));
        assert_eq!(Scalar::from_json(f5, &serde_json::json!("1/2")).unwrap(), fp(3, 5));
        let base: BaseKind = serde_json::from_str(r#"{"kind":"Fp","p":5}"#).unwrap();
        assert_eq!(base, BaseKind::Fp(5));
        assert!(serde_json::from_str::<BaseKind>(r#"{"kind":"Fp","p":6}"#).is_err());
        assert_eq!(serde_json::to_string(&BaseKind::Rat).unwrap(), r#"{"kind":"Q"}"#);
    }

    const PRIMES: [u32; 5] = [2, 3, 5, 7, 65521];

    proptest! {
        #[test]
        fn rat_field_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50,
                            e in -50i64..50, f in 1i64..50) {
            let (x, y, z) = (rat(a, b), rat(c, d), rat(e, f));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if !x.is_zero() {
                prop_assert!(x.mul(&x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn fp_field_axioms(pi in 0usize..5, a in 0u32..70000, b in 0u32..70000, c in 0u32..70000) {
            let p = PRIMES[pi];
            let (x, y, z) = (fp(a % p, p), fp(b % p, p), fp(c % p, p));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if !x.is_zero() {
                prop_assert_eq!(x.mul(&fp_inv(&x).unwrap()), fp(1, p));
            }
        }

        #[test]
        fn normalize_scale_invariant(n in -1000i64..1000, d in -1000i64..1000, k in -30i64..30) {
            prop_assume!(d != 0 && k != 0);
            prop_assert_eq!(rat(n * k, d * k), rat(n, d));
        }
    }
}

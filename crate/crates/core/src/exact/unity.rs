use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;

/// A rational number modulo 1, standing for the root of unity `e(r) = exp(2πi r)`.
///
/// Always stored in lowest terms with `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UnityExponent {
    num: i64,
    den: i64,
}

impl UnityExponent {
    pub const ZERO: UnityExponent = UnityExponent { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator in root-of-unity exponent");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        num = num.mod_floor(&den);
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        if num == 0 {
            den = 1;
        }
        UnityExponent { num, den }
    }

    pub fn from_rational(r: &Rational64) -> Self {
        Self::new(*r.numer(), *r.denom())
    }

    /// Panics if the reduced denominator does not fit in an `i64`.
    pub fn from_big(r: &BigRational) -> Self {
        let den = r.denom().to_i64().expect("exponent denominator too large");
        let num = r.numer().mod_floor(r.denom()).to_i64().unwrap();
        Self::new(num, den)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Multiplicative order of `e(r)`.
    pub fn order(&self) -> u64 {
        self.den as u64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_rational(&self) -> Rational64 {
        Rational64::new(self.num, self.den)
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    /// `e(r)^k`.
    pub fn times(&self, k: i64) -> Self {
        let k = k.mod_floor(&self.den);
        Self::new(((self.num as i128 * k as i128) % self.den as i128) as i64, self.den)
    }

    pub fn is_half(&self) -> bool {
        self.num == 1 && self.den == 2
    }
}

impl Default for UnityExponent {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for UnityExponent {
    type Output = UnityExponent;
    fn add(self, o: UnityExponent) -> UnityExponent {
        let l = self.den.lcm(&o.den);
        let n = (self.num as i128 * (l / self.den) as i128 + o.num as i128 * (l / o.den) as i128)
            % l as i128;
        UnityExponent::new(n as i64, l)
    }
}

impl Neg for UnityExponent {
    type Output = UnityExponent;
    fn neg(self) -> UnityExponent {
        UnityExponent::new(-self.num, self.den)
    }
}

impl Sub for UnityExponent {
    type Output = UnityExponent;
    fn sub(self, o: UnityExponent) -> UnityExponent {
        self + (-o)
    }
}

impl std::iter::Sum for UnityExponent {
    fn sum<I: Iterator<Item = UnityExponent>>(iter: I) -> Self {
        iter.fold(UnityExponent::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for UnityExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl From<Rational64> for UnityExponent {
    fn from(r: Rational64) -> Self {
        Self::from_rational(&r)
    }
}

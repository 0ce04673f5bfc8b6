//! Exact combinatorial primitives.
//!
//! Everything here returns [`ExactInt`]: binomials, the closed-form lower
//! bound `h_{r,a}(d)` for Hilbert functions of nondegenerate integral
//! subschemes, Grassmannian dimensions and form-space dimensions.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{require, Result};

/// Arbitrary-precision signed integer used for every count, dimension and
/// codimension in the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactInt(BigInt);

impl ExactInt {
    pub fn zero() -> Self {
        ExactInt(BigInt::zero())
    }

    pub fn one() -> Self {
        ExactInt(BigInt::one())
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }

    pub fn into_bigint(self) -> BigInt {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Narrowing is explicit: `None` when the value does not fit.
    pub fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
}

impl From<BigInt> for ExactInt {
    fn from(v: BigInt) -> Self {
        ExactInt(v)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for ExactInt {
            fn from(v: $t) -> Self {
                ExactInt(BigInt::from(v))
            }
        }
    )*};
}
from_prim!(i32, i64, u32, u64, usize, i128, u128);

impl fmt::Display for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl std::str::FromStr for ExactInt {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.parse::<BigInt>().map(ExactInt)
    }
}

impl Add for ExactInt {
    type Output = ExactInt;
    fn add(self, rhs: ExactInt) -> ExactInt {
        ExactInt(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a ExactInt> for &'a ExactInt {
    type Output = ExactInt;
    fn add(self, rhs: &ExactInt) -> ExactInt {
        ExactInt(&self.0 + &rhs.0)
    }
}

impl AddAssign<&ExactInt> for ExactInt {
    fn add_assign(&mut self, rhs: &ExactInt) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for ExactInt {
    fn add_assign(&mut self, rhs: ExactInt) {
        self.0 += rhs.0;
    }
}

impl Sub for ExactInt {
    type Output = ExactInt;
    fn sub(self, rhs: ExactInt) -> ExactInt {
        ExactInt(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a ExactInt> for &'a ExactInt {
    type Output = ExactInt;
    fn sub(self, rhs: &ExactInt) -> ExactInt {
        ExactInt(&self.0 - &rhs.0)
    }
}

impl Mul for ExactInt {
    type Output = ExactInt;
    fn mul(self, rhs: ExactInt) -> ExactInt {
        ExactInt(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a ExactInt> for &'a ExactInt {
    type Output = ExactInt;
    fn mul(self, rhs: &ExactInt) -> ExactInt {
        ExactInt(&self.0 * &rhs.0)
    }
}

impl Neg for ExactInt {
    type Output = ExactInt;
    fn neg(self) -> ExactInt {
        ExactInt(-self.0)
    }
}

impl Sum for ExactInt {
    fn sum<I: Iterator<Item = ExactInt>>(iter: I) -> ExactInt {
        iter.fold(ExactInt::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactInt> for ExactInt {
    fn sum<I: Iterator<Item = &'a ExactInt>>(iter: I) -> ExactInt {
        iter.fold(ExactInt::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

// JSON: a plain number while it fits in i64, a decimal string beyond that.
impl Serialize for ExactInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExactInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(ExactInt::from(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return ExactInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    // acc * (n - i) is always divisible by i + 1 after the previous step
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    ExactInt(acc)
}

/// `h_{r,a}(d) = (r - a) C(d + a - 1, d - 1) + C(d + a, d)`.
///
/// Lower bound for the Hilbert function in degree `d` of a nondegenerate
/// integral subscheme of dimension `a` in `P^r`. `a = 0` is accepted (the
/// value is then `r + 1`), as is `r = 0` with `a = 0`.
pub fn hilbert_lower_bound(r: u32, a: u32, d: u32) -> Result<ExactInt> {
    require(a <= r, || format!("subscheme dimension a = {a} must satisfy a <= r = {r}"))?;
    require(d >= 1, || format!("degree d = {d} must satisfy d >= 1"))?;
    Ok(hilbert_lower_bound_unchecked(r, a, d))
}

pub(crate) fn hilbert_lower_bound_unchecked(r: u32, a: u32, d: u32) -> ExactInt {
    let (r, a, d) = (r as u64, a as u64, d as u64);
    let slope = ExactInt::from(r - a) * binomial(d + a - 1, (d - 1) as i64);
    slope + binomial(d + a, d as i64)
}

/// `dim G(b, r) = (b + 1)(r - b)`, the dimension of the Grassmannian of
/// `b`-planes in `P^r`.
pub fn grassmannian_dim(b: u32, r: u32) -> Result<ExactInt> {
    require(b <= r, || format!("plane dimension b = {b} must satisfy b <= r = {r}"))?;
    Ok(ExactInt::from((b as u64 + 1) * (r - b) as u64))
}

/// Number of coefficients of a degree-`d` form in `r + 1` variables.
pub fn form_space_dim(r: u32, d: u32) -> ExactInt {
    binomial(r as u64 + d as u64, d as i64)
}

/// `form_space_dim` extended by zero to negative degrees.
pub(crate) fn form_space_dim_signed(r: u32, d: i64) -> ExactInt {
    if d < 0 {
        ExactInt::zero()
    } else {
        form_space_dim(r, d as u32)
    }
}

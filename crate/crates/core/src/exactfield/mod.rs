//! Exact ordered field ℚ(ε₁, …, ε_m) of rational functions in positive
//! infinitesimals with ε₁ ≻ ε₂ ≻ … and ε_{i+1} ≺ ε_i^k for every k.
//!
//! Signs and floors are taken in the limit ε → 0⁺ under this ordering, which
//! is what the index formulas need: the floor of a perturbed quantity is
//! decided by its standard part, and when the standard part is an integer,
//! by the sign of the infinitesimal remainder.

pub mod poly;

pub use poly::{Monomial, Poly};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i64() * rhs.as_i64() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

/// Limit of a perturbed value as ε → 0⁺.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardPart {
    Finite(BigRational),
    Infinite(Sign),
}

/// Result of [`PerturbedScalar::floor_lim`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FloorLim {
    Finite(BigInt),
    Divergent(Sign),
}

/// An element of ℚ(ε₁, …, ε_m), kept as a reduced fraction with a monic denominator.
#[derive(Clone, Debug)]
pub struct PerturbedScalar {
    num: Poly,
    den: Poly,
}

impl PerturbedScalar {
    pub fn zero() -> Self {
        PerturbedScalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        PerturbedScalar::from_integer(1)
    }

    pub fn from_integer(k: impl Into<BigInt>) -> Self {
        PerturbedScalar::from_rational(BigRational::from_integer(k.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        PerturbedScalar { num: Poly::constant(q), den: Poly::one() }
    }

    /// The infinitesimal ε_index (1-based).
    pub fn epsilon(index: usize) -> Self {
        PerturbedScalar::from_poly(Poly::term(Monomial::var(index), BigRational::one()))
    }

    pub fn from_poly(p: Poly) -> Self {
        PerturbedScalar { num: p, den: Poly::one() }
    }

    /// Build `num / den` and bring it to canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return PerturbedScalar::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            PerturbedScalar { num, den }
        } else {
            let inv = lc.recip();
            PerturbedScalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True if the value carries no infinitesimal part at all.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return PerturbedScalar::zero();
        }
        PerturbedScalar { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn recip(&self) -> Result<Self> {
        PerturbedScalar::one().checked_div(self)
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self
        } else {
            self.clone()
        }
    }

    /// Sign as ε → 0⁺: the sign of the dominant numerator term times that of the denominator.
    pub fn sign(&self) -> Sign {
        match (self.num.dominant(), self.den.dominant()) {
            (Some((_, cn)), Some((_, cd))) => Sign::of(cn) * Sign::of(cd),
            _ => Sign::Zero,
        }
    }

    pub fn standard_part(&self) -> StandardPart {
        let (mn, cn) = match self.num.dominant() {
            Some(t) => t,
            None => return StandardPart::Finite(BigRational::zero()),
        };
        let (md, cd) = self.den.dominant().expect("nonzero denominator");
        let len = mn.nvars().max(md.nvars());
        // The exponent difference decides the order of magnitude: its
        // highest-index nonzero entry says whether ε^diff → 0 or → ∞.
        for i in (0..len).rev() {
            let diff = mn.exp(i) as i64 - md.exp(i) as i64;
            match diff.cmp(&0) {
                Ordering::Equal => continue,
                Ordering::Greater => return StandardPart::Finite(BigRational::zero()),
                Ordering::Less => return StandardPart::Infinite(self.sign()),
            }
        }
        StandardPart::Finite(cn / cd)
    }

    /// The integer `m` with `m ≤ self < m + 1` in the limit order, or a
    /// divergence flag when the standard part is infinite. With `strict`, a
    /// value that is exactly an integer is reported as degenerate.
    pub fn floor_lim(&self, strict: bool) -> Result<FloorLim> {
        let s = match self.standard_part() {
            StandardPart::Infinite(sign) => return Ok(FloorLim::Divergent(sign)),
            StandardPart::Finite(s) => s,
        };
        if !s.is_integer() {
            return Ok(FloorLim::Finite(s.floor().to_integer()));
        }
        let base = s.to_integer();
        let rest = self - &PerturbedScalar::from_rational(s);
        match rest.sign() {
            Sign::Positive => Ok(FloorLim::Finite(base)),
            Sign::Negative => Ok(FloorLim::Finite(base - 1)),
            Sign::Zero if strict => Err(Error::DegenerateValue(self.to_string())),
            Sign::Zero => Ok(FloorLim::Finite(base)),
        }
    }
}

impl PartialEq for PerturbedScalar {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for PerturbedScalar {}

impl PartialOrd for PerturbedScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PerturbedScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a PerturbedScalar> for &'a PerturbedScalar {
    type Output = PerturbedScalar;
    fn add(self, rhs: &PerturbedScalar) -> PerturbedScalar {
        if self.den == rhs.den {
            return PerturbedScalar::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        PerturbedScalar::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl<'a> Sub<&'a PerturbedScalar> for &'a PerturbedScalar {
    type Output = PerturbedScalar;
    fn sub(self, rhs: &PerturbedScalar) -> PerturbedScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a PerturbedScalar> for &'a PerturbedScalar {
    type Output = PerturbedScalar;
    fn mul(self, rhs: &PerturbedScalar) -> PerturbedScalar {
        PerturbedScalar::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &PerturbedScalar {
    type Output = PerturbedScalar;
    fn neg(self) -> PerturbedScalar {
        PerturbedScalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for PerturbedScalar {
    type Output = PerturbedScalar;
    fn neg(self) -> PerturbedScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PerturbedScalar {
            type Output = PerturbedScalar;
            fn $m(self, rhs: PerturbedScalar) -> PerturbedScalar {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for PerturbedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl From<i64> for PerturbedScalar {
    fn from(k: i64) -> Self {
        PerturbedScalar::from_integer(k)
    }
}

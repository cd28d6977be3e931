//! Exact scalars: rational functions in the formal parameters of a space.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{fmt_rational, gcd, Poly};

/// A reduced rational function `num / den` over the rationals.
///
/// The denominator is monic and coprime to the numerator, and zero is
/// always `0 / 1`, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            num: Poly::constant(r),
            den: Poly::one(),
        }
    }

    pub fn param(index: usize) -> Self {
        Scalar {
            num: Poly::var(index),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in reduced form. Panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            return Scalar {
                num: num.scale(&inv),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g == Poly::one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().expect("nonzero").1.recip();
        Scalar {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == Poly::one() && self.num == Poly::one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == Poly::one()
    }

    /// The value when the scalar does not depend on any parameter.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den == Poly::one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.den == other.den {
            if self.den == Poly::one() {
                return Scalar::from_poly(self.num.add(&other.num));
            }
            return Scalar::new(self.num.add(&other.num), self.den.clone());
        }
        Scalar::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den == Poly::one() && other.den == Poly::one() {
            return Scalar::from_poly(self.num.mul(&other.num));
        }
        Scalar::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale_rational(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn eval_f64(&self, params: &[f64]) -> f64 {
        self.num.eval_f64(params) / self.den.eval_f64(params)
    }

    /// True when the printed form needs parentheses as a factor.
    pub fn is_compound(&self) -> bool {
        self.den != Poly::one() || self.num.len() > 1
    }

    /// A single-term scalar with negative leading coefficient; used by the
    /// printer to emit `a - b` instead of `a + -b`.
    pub fn is_negative_term(&self) -> bool {
        self.den == Poly::one()
            && self.num.len() == 1
            && self.num.leading().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.den == Poly::one() {
            return self.num.fmt_with(names);
        }
        let wrap = |p: &Poly| {
            let s = p.fmt_with(names);
            if p.len() > 1 || (p.len() == 1 && !p.is_constant() && !is_plain_monomial(p)) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

fn is_plain_monomial(p: &Poly) -> bool {
    p.len() == 1 && p.leading().map(|(_, c)| c.is_one()).unwrap_or(false)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&fmt_rational(&r));
        }
        let names: Vec<String> = (0..8).map(|i| format!("p{i}")).collect();
        f.write_str(&self.fmt_with(&names))
    }
}

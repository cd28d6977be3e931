use std::collections::BTreeMap;
use std::fmt;

use super::base::{BaseCoefficient, BaseFactor, BaseMonomial};
use super::signature::{Coord, Signature, SpaceSignature, Topology};
use super::Parity;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bit set of odd coordinates; bit `j` stands for `theta_j`. The monomial
/// is the product of the set coordinates in increasing index order.
pub type OddMask = u64;

/// Sign of `theta^a * theta^b` rewritten as `theta^(a | b)`, or `None` when
/// the two monomials share a coordinate.
pub(crate) fn mask_product_sign(a: OddMask, b: OddMask) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

pub(crate) fn mask_parity(mask: OddMask) -> Parity {
    Parity::from_count(mask.count_ones())
}

/// An element of the superfunction algebra: a map from odd monomials to
/// base coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superfunction {
    sig: Signature,
    terms: BTreeMap<OddMask, BaseCoefficient>,
}

impl Superfunction {
    pub fn zero(sig: &Signature) -> Self {
        Superfunction {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: &Signature) -> Self {
        Superfunction::constant(sig, Scalar::one())
    }

    pub fn constant(sig: &Signature, c: Scalar) -> Self {
        Superfunction::from_base(sig, BaseCoefficient::constant(c))
    }

    pub fn from_base(sig: &Signature, c: BaseCoefficient) -> Self {
        let mut f = Superfunction::zero(sig);
        f.add_term(0, c);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (OddMask, BaseCoefficient)>>(
        sig: &Signature,
        terms: I,
    ) -> Self {
        let mut f = Superfunction::zero(sig);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn param(sig: &Signature, name: &str) -> Result<Self> {
        let i = sig
            .param_index(name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(Superfunction::constant(sig, Scalar::param(i)))
    }

    /// The coordinate function of an odd coordinate or a Line coordinate.
    pub fn coordinate(sig: &Signature, c: Coord) -> Result<Self> {
        match c {
            Coord::Odd(j) => Ok(Superfunction::from_terms(
                sig,
                [(1u64 << j, BaseCoefficient::one())],
            )),
            Coord::Even(i) => match sig.topology(i) {
                Topology::Line => Ok(Superfunction::from_base(
                    sig,
                    BaseCoefficient::monomial(BaseMonomial::single(i, BaseFactor::Pow(1)), Scalar::one()),
                )),
                Topology::Circle => Err(Error::Type(format!(
                    "`{}` is a circle coordinate and not a function; use cos/sin",
                    sig.coord_name(c)
                ))),
            },
        }
    }

    pub fn odd_coordinate(sig: &Signature, j: usize) -> Self {
        Superfunction::from_terms(sig, [(1u64 << j, BaseCoefficient::one())])
    }

    /// `cos(k * x)` or `sin(k * x)` on a Circle coordinate.
    pub fn trig(sig: &Signature, coord: usize, k: u32, sine: bool) -> Result<Self> {
        if sig.topology(coord) != Topology::Circle {
            return Err(Error::Type(format!(
                "cos/sin require a circle coordinate, `{}` is a line",
                sig.even()[coord].name
            )));
        }
        if sine && k == 0 {
            return Ok(Superfunction::zero(sig));
        }
        let f = if sine { BaseFactor::Sin(k) } else { BaseFactor::Cos(k) };
        Ok(Superfunction::from_base(
            sig,
            BaseCoefficient::monomial(BaseMonomial::single(coord, f), Scalar::one()),
        ))
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn add_term(&mut self, mask: OddMask, c: BaseCoefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OddMask, &BaseCoefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mask: OddMask) -> BaseCoefficient {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .and_then(BaseCoefficient::as_constant)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// Parity when homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| mask_parity(*m));
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| mask_parity(*m) == p)
    }

    /// Component of the given parity.
    pub fn part(&self, p: Parity) -> Superfunction {
        Superfunction {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mask_parity(**m) == p)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// The automorphism `f -> (-1)^p(f) f`.
    pub fn parity_twist(&self) -> Superfunction {
        Superfunction {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let c = if mask_parity(*m) == Parity::Odd { c.neg() } else { c.clone() };
                    (*m, c)
                })
                .collect(),
        }
    }

    /// Largest number of odd factors in a term; 0 for zero.
    pub fn theta_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    fn check(&self, other: &Superfunction) -> Result<()> {
        if SpaceSignature::same(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn checked_add(&self, other: &Superfunction) -> Result<Superfunction> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Superfunction) -> Result<Superfunction> {
        self.check(other)?;
        let mut out = Superfunction::zero(&self.sig);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(sign) = mask_product_sign(*m1, *m2) {
                    let c = c1.mul(c2);
                    out.add_term(m1 | m2, if sign < 0 { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Sum; panics on signature mismatch (see [`checked_add`](Self::checked_add)).
    pub fn add(&self, other: &Superfunction) -> Superfunction {
        self.checked_add(other).expect("signature mismatch")
    }

    pub fn sub(&self, other: &Superfunction) -> Superfunction {
        self.add(&other.neg())
    }

    /// Product; panics on signature mismatch (see [`checked_mul`](Self::checked_mul)).
    pub fn mul(&self, other: &Superfunction) -> Superfunction {
        self.checked_mul(other).expect("signature mismatch")
    }

    pub fn neg(&self) -> Superfunction {
        Superfunction {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Superfunction {
        if s.is_zero() {
            return Superfunction::zero(&self.sig);
        }
        Superfunction {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale(s))).collect(),
        }
    }

    pub fn scale_base(&self, b: &BaseCoefficient) -> Superfunction {
        Superfunction::from_terms(&self.sig, self.terms.iter().map(|(m, c)| (*m, c.mul(b))))
    }

    pub fn pow(&self, e: u32) -> Superfunction {
        (0..e).fold(Superfunction::one(&self.sig), |acc, _| acc.mul(self))
    }

    /// The projection `theta = 0`, returned as a superfunction.
    pub fn body(&self) -> Superfunction {
        Superfunction::from_base(&self.sig, self.body_coefficient())
    }

    pub fn body_coefficient(&self) -> BaseCoefficient {
        self.coefficient(0)
    }

    /// Inverse of a superfunction whose body is a nonzero constant, as the
    /// truncated geometric series `c^-1 * sum (-n)^k` with `f = c (1 + n)`.
    pub fn invert(&self) -> Result<Superfunction> {
        let c = self
            .body_coefficient()
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonUnitBody)?;
        let c_inv = c.inv().expect("nonzero");
        let nil = self.scale(&c_inv).sub(&Superfunction::one(&self.sig)).neg();
        let mut sum = Superfunction::one(&self.sig);
        let mut power = Superfunction::one(&self.sig);
        loop {
            power = power.mul(&nil);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.scale(&c_inv))
    }

    /// Partial derivative; the odd case is the left derivative.
    pub fn partial(&self, coord: Coord) -> Superfunction {
        let mut out = Superfunction::zero(&self.sig);
        match coord {
            Coord::Even(i) => {
                for (m, c) in &self.terms {
                    out.add_term(*m, c.derivative(i));
                }
            }
            Coord::Odd(j) => {
                let bit = 1u64 << j;
                for (m, c) in &self.terms {
                    if m & bit != 0 {
                        let below = (m & (bit - 1)).count_ones();
                        let c = if below % 2 == 1 { c.neg() } else { c.clone() };
                        out.add_term(m & !bit, c);
                    }
                }
            }
        }
        out
    }

    pub fn partial_by_name(&self, name: &str) -> Result<Superfunction> {
        Ok(self.partial(self.sig.coord(name)?))
    }

    pub fn eval_body_f64(&self, coords: &[f64], params: &[f64]) -> f64 {
        self.body_coefficient().eval_f64(coords, params)
    }
}

impl fmt::Display for Superfunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_function(self))
    }
}

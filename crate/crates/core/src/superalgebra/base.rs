//! Functions on the base manifold: polynomials in Line coordinates times
//! finite Fourier sums in Circle coordinates, with [`Scalar`] coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::scalar::Scalar;

/// One factor of a base monomial, attached to a single even coordinate.
///
/// `Pow(0)` is the unit factor for every coordinate; `Cos(0)` is normalized
/// to it. `Pow(e > 0)` only occurs on Line coordinates, `Cos`/`Sin` only on
/// Circle coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseFactor {
    Pow(u32),
    Cos(u32),
    Sin(u32),
}

impl BaseFactor {
    fn normalized(self) -> Self {
        match self {
            BaseFactor::Cos(0) => BaseFactor::Pow(0),
            f => f,
        }
    }

    fn is_unit(self) -> bool {
        self == BaseFactor::Pow(0)
    }

    /// Product of two factors on the same coordinate as a rational
    /// combination of factors (product-to-sum for trigonometric factors).
    fn mul(self, other: BaseFactor) -> Vec<(BigRational, BaseFactor)> {
        use BaseFactor::*;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let one = BigRational::one();
        match (self, other) {
            (Pow(0), f) | (f, Pow(0)) => vec![(one, f)],
            (Pow(a), Pow(b)) => vec![(one, Pow(a + b))],
            (Cos(a), Cos(b)) => vec![
                (half.clone(), Cos(a.abs_diff(b)).normalized()),
                (half, Cos(a + b)),
            ],
            (Sin(a), Sin(b)) => vec![
                (half.clone(), Cos(a.abs_diff(b)).normalized()),
                (-half, Cos(a + b)),
            ],
            (Sin(a), Cos(b)) | (Cos(b), Sin(a)) => {
                // sin a cos b = (sin(a+b) + sin(a-b)) / 2
                let mut out = vec![(half.clone(), Sin(a + b))];
                if a > b {
                    out.push((half, Sin(a - b)));
                } else if b > a {
                    out.push((-half, Sin(b - a)));
                }
                out
            }
            (Pow(_), _) | (_, Pow(_)) => {
                panic!("polynomial and trigonometric factors on one coordinate")
            }
        }
    }

    fn derivative(self) -> Option<(BigRational, BaseFactor)> {
        let int = |n: u32| BigRational::from_integer(BigInt::from(n));
        match self {
            BaseFactor::Pow(0) | BaseFactor::Cos(0) => None,
            BaseFactor::Pow(e) => Some((int(e), BaseFactor::Pow(e - 1))),
            BaseFactor::Cos(k) => Some((-int(k), BaseFactor::Sin(k))),
            BaseFactor::Sin(k) => Some((int(k), BaseFactor::Cos(k).normalized())),
        }
    }

    /// An antiderivative factor, unavailable for the constant Fourier mode.
    fn antiderivative(self, circle: bool) -> Option<(BigRational, BaseFactor)> {
        let int = |n: u32| BigRational::from_integer(BigInt::from(n));
        match self {
            BaseFactor::Pow(e) if !circle => Some((int(e + 1).recip(), BaseFactor::Pow(e + 1))),
            BaseFactor::Pow(_) => None,
            BaseFactor::Cos(k) => Some((int(k).recip(), BaseFactor::Sin(k))),
            BaseFactor::Sin(k) => Some((-int(k).recip(), BaseFactor::Cos(k))),
        }
    }

    fn eval_f64(self, x: f64) -> f64 {
        match self {
            BaseFactor::Pow(e) => x.powi(e as i32),
            BaseFactor::Cos(k) => (k as f64 * x).cos(),
            BaseFactor::Sin(k) => (k as f64 * x).sin(),
        }
    }
}

/// Product of per-coordinate factors, trailing unit factors trimmed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BaseMonomial(Vec<BaseFactor>);

impl BaseMonomial {
    pub fn one() -> Self {
        BaseMonomial(Vec::new())
    }

    pub fn from_factors(mut factors: Vec<BaseFactor>) -> Self {
        for f in factors.iter_mut() {
            *f = f.normalized();
        }
        while factors.last().map(|f| f.is_unit()).unwrap_or(false) {
            factors.pop();
        }
        BaseMonomial(factors)
    }

    pub fn single(coord: usize, factor: BaseFactor) -> Self {
        let mut v = vec![BaseFactor::Pow(0); coord + 1];
        v[coord] = factor;
        BaseMonomial::from_factors(v)
    }

    pub fn factor(&self, coord: usize) -> BaseFactor {
        self.0.get(coord).copied().unwrap_or(BaseFactor::Pow(0))
    }

    pub fn factors(&self) -> &[BaseFactor] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn with_factor(&self, coord: usize, f: BaseFactor) -> BaseMonomial {
        let mut v = self.0.clone();
        if v.len() <= coord {
            v.resize(coord + 1, BaseFactor::Pow(0));
        }
        v[coord] = f;
        BaseMonomial::from_factors(v)
    }

    fn mul(&self, other: &BaseMonomial) -> Vec<(BigRational, BaseMonomial)> {
        let n = self.0.len().max(other.0.len());
        let mut acc: Vec<(BigRational, Vec<BaseFactor>)> = vec![(BigRational::one(), Vec::new())];
        for i in 0..n {
            let prods = self.factor(i).mul(other.factor(i));
            let mut next = Vec::with_capacity(acc.len() * prods.len());
            for (c, fs) in &acc {
                for (pc, pf) in &prods {
                    let mut fs = fs.clone();
                    fs.push(*pf);
                    next.push((c * pc, fs));
                }
            }
            acc = next;
        }
        acc.into_iter()
            .map(|(c, fs)| (c, BaseMonomial::from_factors(fs)))
            .collect()
    }
}

/// A finite [`Scalar`] combination of base monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BaseCoefficient {
    terms: BTreeMap<BaseMonomial, Scalar>,
}

impl BaseCoefficient {
    pub fn zero() -> Self {
        BaseCoefficient::default()
    }

    pub fn one() -> Self {
        BaseCoefficient::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        BaseCoefficient::monomial(BaseMonomial::one(), c)
    }

    pub fn monomial(m: BaseMonomial, c: Scalar) -> Self {
        let mut out = BaseCoefficient::zero();
        out.add_term(m, c);
        out
    }

    pub fn add_term(&mut self, m: BaseMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BaseMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when this is a constant function.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&BaseMonomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&BaseMonomial::one())
            .cloned()
            .unwrap_or_default()
    }

    pub fn add(&self, other: &BaseCoefficient) -> BaseCoefficient {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> BaseCoefficient {
        BaseCoefficient {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &BaseCoefficient) -> BaseCoefficient {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> BaseCoefficient {
        if s.is_zero() {
            return BaseCoefficient::zero();
        }
        BaseCoefficient {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect(),
        }
    }

    pub fn mul(&self, other: &BaseCoefficient) -> BaseCoefficient {
        let mut out = BaseCoefficient::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1.mul(c2);
                for (r, m) in m1.mul(m2) {
                    out.add_term(m, c.scale_rational(&r));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BaseCoefficient {
        (0..e).fold(BaseCoefficient::one(), |acc, _| acc.mul(self))
    }

    /// Partial derivative along even coordinate `coord`.
    pub fn derivative(&self, coord: usize) -> BaseCoefficient {
        let mut out = BaseCoefficient::zero();
        for (m, c) in &self.terms {
            if let Some((r, f)) = m.factor(coord).derivative() {
                out.add_term(m.with_factor(coord, f), c.scale_rational(&r));
            }
        }
        out
    }

    /// Antiderivative along `coord`; `None` when a term has no
    /// antiderivative in the ring (a constant Fourier mode on a circle).
    pub fn antiderivative(&self, coord: usize, circle: bool) -> Option<BaseCoefficient> {
        let mut out = BaseCoefficient::zero();
        for (m, c) in &self.terms {
            let (r, f) = m.factor(coord).antiderivative(circle)?;
            out.add_term(m.with_factor(coord, f), c.scale_rational(&r));
        }
        Some(out)
    }

    /// Part independent of `coord` (zero Fourier mode / degree zero).
    pub fn mode_zero(&self, coord: usize) -> BaseCoefficient {
        let mut out = BaseCoefficient::zero();
        for (m, c) in &self.terms {
            if m.factor(coord).is_unit() {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Largest polynomial degree and Fourier mode per coordinate.
    pub fn max_factor(&self, coord: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| match m.factor(coord) {
                BaseFactor::Pow(e) => e,
                BaseFactor::Cos(k) | BaseFactor::Sin(k) => k,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn eval_f64(&self, coords: &[f64], params: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.eval_f64(params);
                for (i, f) in m.0.iter().enumerate() {
                    v *= f.eval_f64(coords.get(i).copied().unwrap_or(0.0));
                }
                v
            })
            .sum()
    }

    /// The value when this is a parameter-free constant.
    pub fn rational_constant(&self) -> Option<BigRational> {
        self.as_constant().and_then(|c| c.as_rational())
    }
}

impl From<Scalar> for BaseCoefficient {
    fn from(s: Scalar) -> Self {
        BaseCoefficient::constant(s)
    }
}

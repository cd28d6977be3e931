//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are addressed by index. Monomials are stored with trailing
//! zero exponents trimmed so that equal monomials have equal
//! representations, and terms are kept in lexicographic order, which is a
//! monomial order; the last term of the map is the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector with trailing zeros removed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut exps = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            if exps[i] < *e {
                return None;
            }
            exps[i] -= e;
        }
        Some(Monomial::from_exponents(exps))
    }

    fn without(&self, var: usize) -> Monomial {
        let mut exps = self.0.clone();
        if var < exps.len() {
            exps[var] = 0;
        }
        Monomial::from_exponents(exps)
    }

    fn min_var(&self) -> Option<usize> {
        self.0.iter().position(|e| *e > 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(index: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(index), BigRational::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
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

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), -v)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            rem = rem.sub(&divisor.mul_monomial(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`.
    fn coeffs_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(var))
                .or_default()
                .add_term(m.without(var), c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, var: usize) -> Poly {
        let d = self.degree_in(var);
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(var) == d {
                out.add_term(m.without(var), c.clone());
            }
        }
        out
    }

    fn min_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::min_var).min()
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = rational_to_f64(c);
                for (i, e) in m.0.iter().enumerate() {
                    v *= values.get(i).copied().unwrap_or(0.0).powi(*e as i32);
                }
                v
            })
            .sum()
    }

    /// Formats with the given variable names. Terms are listed from the
    /// leading term down.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = fmt_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.0.iter().enumerate() {
        let name = names.get(i).map(String::as_str).unwrap_or("?");
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}**{e}")),
        }
    }
    parts.join("*")
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

/// Pseudo-remainder of `a` by `b` as polynomials in `var`.
fn prem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lcb = b.leading_coeff_in(var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = r.leading_coeff_in(var);
        let shift = Monomial::var(var);
        let mut shifted = b.mul(&lcr);
        for _ in 0..(dr - db) {
            shifted = shifted.mul_monomial(&shift, &BigRational::one());
        }
        r = r.mul(&lcb).sub(&shifted);
    }
    r
}

/// Splits `p` into its content with respect to `var` and the primitive part.
fn split_content(p: &Poly, var: usize) -> (Poly, Poly) {
    let content = p
        .coeffs_in(var)
        .values()
        .fold(Poly::zero(), |acc, c| gcd(&acc, c));
    let primitive = p
        .div_exact(&content)
        .expect("content divides its polynomial");
    (content, primitive)
}

/// Greatest common divisor, normalized to a monic polynomial (leading
/// coefficient 1 in the lexicographic order).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let var = match (a.min_var(), b.min_var()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return Poly::one(),
    };
    let (ca, pa) = split_content(a, var);
    let (cb, pb) = split_content(b, var);
    let content = gcd(&ca, &cb);
    let primitive = if pa.degree_in(var) == 0 || pb.degree_in(var) == 0 {
        Poly::one()
    } else {
        primitive_prs(pa, pb, var)
    };
    content.mul(&primitive).monic()
}

fn primitive_prs(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut p, mut q) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = prem(&p, &q, var);
        if r.is_zero() {
            return q;
        }
        if r.degree_in(var) == 0 {
            return Poly::one();
        }
        p = q;
        q = split_content(&r, var).1;
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..8).map(|i| format!("p{i}")).collect();
        f.write_str(&self.fmt_with(&names))
    }
}

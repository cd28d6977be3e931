use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superalgebra::{
    mask_parity, mask_product_sign, Coord, Parity, Signature, SpaceSignature,
    Superfunction,
};

/// Product `dx_A ^ prod_j dtheta_j^{e_j}` with the `dx` factors in
/// increasing index order. `dtheta` exponents are trimmed of trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FormMonomial {
    dx: u64,
    dtheta: Vec<u32>,
}

impl FormMonomial {
    pub fn one() -> Self {
        FormMonomial::default()
    }

    pub fn new(dx: u64, mut dtheta: Vec<u32>) -> Self {
        while dtheta.last() == Some(&0) {
            dtheta.pop();
        }
        FormMonomial { dx, dtheta }
    }

    pub fn dx(i: usize) -> Self {
        FormMonomial::new(1u64 << i, Vec::new())
    }

    pub fn dtheta(j: usize) -> Self {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        FormMonomial::new(0, e)
    }

    pub fn dx_mask(&self) -> u64 {
        self.dx
    }

    pub fn dtheta_exp(&self, j: usize) -> u32 {
        self.dtheta.get(j).copied().unwrap_or(0)
    }

    pub fn dtheta_exps(&self) -> &[u32] {
        &self.dtheta
    }

    pub fn degree(&self) -> u32 {
        self.dx.count_ones() + self.dtheta.iter().sum::<u32>()
    }

    /// Total parity: every `dx` is odd, every `dtheta` even.
    pub fn parity(&self) -> Parity {
        Parity::from_count(self.dx.count_ones())
    }

    pub fn has_dtheta(&self) -> bool {
        !self.dtheta.is_empty()
    }

    /// Sign and monomial of `self ^ other`; `None` when a `dx` repeats.
    fn merge(&self, other: &FormMonomial, guard: u32) -> Result<Option<(i32, FormMonomial)>> {
        let Some(sign) = mask_product_sign(self.dx, other.dx) else {
            return Ok(None);
        };
        let n = self.dtheta.len().max(other.dtheta.len());
        let mut exps = Vec::with_capacity(n);
        for j in 0..n {
            let e = self.dtheta_exp(j) + other.dtheta_exp(j);
            if e > guard {
                return Err(Error::GuardExceeded { power: e, guard });
            }
            exps.push(e);
        }
        Ok(Some((sign, FormMonomial::new(self.dx | other.dx, exps))))
    }

    /// The ordered list of generators making up this monomial.
    pub(crate) fn generators(&self) -> Vec<Coord> {
        let mut out = Vec::new();
        let mut rest = self.dx;
        while rest != 0 {
            out.push(Coord::Even(rest.trailing_zeros() as usize));
            rest &= rest - 1;
        }
        for (j, e) in self.dtheta.iter().enumerate() {
            for _ in 0..*e {
                out.push(Coord::Odd(j));
            }
        }
        out
    }
}

/// A differential form: superfunction coefficients (written on the left)
/// times form monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperForm {
    sig: Signature,
    terms: BTreeMap<FormMonomial, Superfunction>,
}

impl SuperForm {
    pub fn zero(sig: &Signature) -> Self {
        SuperForm {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_function(f: Superfunction) -> Self {
        let mut out = SuperForm::zero(f.signature());
        out.add_term(FormMonomial::one(), f);
        out
    }

    pub fn monomial(f: Superfunction, m: FormMonomial) -> Self {
        let mut out = SuperForm::zero(f.signature());
        out.add_term(m, f);
        out
    }

    /// The 1-form `d(coord)`.
    pub fn differential(sig: &Signature, c: Coord) -> Self {
        let m = match c {
            Coord::Even(i) => FormMonomial::dx(i),
            Coord::Odd(j) => FormMonomial::dtheta(j),
        };
        SuperForm::monomial(Superfunction::one(sig), m)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn add_term(&mut self, m: FormMonomial, f: Superfunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.add(&f);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, f);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&FormMonomial, &Superfunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &FormMonomial) -> Superfunction {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Superfunction::zero(&self.sig))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree when all terms share one form degree; zero reports 0.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(FormMonomial::degree);
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(FormMonomial::degree).max().unwrap_or(0)
    }

    /// Total parity when homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut parities = self.terms.iter().flat_map(|(m, f)| {
            f.terms().map(move |(mask, _)| m.parity() + mask_parity(*mask))
        });
        let first = parities.next().unwrap_or(Parity::Even);
        parities.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, p: Parity) -> bool {
        self.terms.iter().all(|(m, f)| f.is_homogeneous_of(p + m.parity()))
    }

    fn check(&self, other: &SuperForm) -> Result<()> {
        if SpaceSignature::same(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn checked_add(&self, other: &SuperForm) -> Result<SuperForm> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, f) in &other.terms {
            out.add_term(m.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &SuperForm) -> SuperForm {
        self.checked_add(other).expect("signature mismatch")
    }

    pub fn neg(&self) -> SuperForm {
        SuperForm {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, f)| (m.clone(), f.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SuperForm) -> SuperForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> SuperForm {
        let mut out = SuperForm::zero(&self.sig);
        for (m, f) in &self.terms {
            out.add_term(m.clone(), f.scale(s));
        }
        out
    }

    /// `f ^ self` for a function `f`; no sign arises since coefficients sit
    /// on the left.
    pub fn left_mul(&self, f: &Superfunction) -> SuperForm {
        let mut out = SuperForm::zero(&self.sig);
        for (m, g) in &self.terms {
            out.add_term(m.clone(), f.mul(g));
        }
        out
    }

    /// Wedge product, graded by total parity.
    pub fn wedge(&self, other: &SuperForm) -> Result<SuperForm> {
        self.check(other)?;
        let guard = self.sig.dtheta_guard();
        let mut out = SuperForm::zero(&self.sig);
        for (m1, f1) in &self.terms {
            for (m2, f2) in &other.terms {
                let Some((sign, m)) = m1.merge(m2, guard)? else {
                    continue;
                };
                // move f2 to the left past m1
                let f2 = if m1.parity().is_odd() { f2.parity_twist() } else { f2.clone() };
                let coeff = f1.mul(&f2);
                out.add_term(m, if sign < 0 { coeff.neg() } else { coeff });
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<SuperForm> {
        let mut out = SuperForm::zero(&self.sig);
        for (m, f) in &self.terms {
            let df = function_differential(f);
            let rest = SuperForm::monomial(Superfunction::one(&self.sig), m.clone());
            out = out.add(&df.wedge(&rest)?);
        }
        Ok(out)
    }

    /// Projection to the base: `theta = 0`, `dtheta = 0`.
    pub fn project_base(&self) -> SuperForm {
        let mut out = SuperForm::zero(&self.sig);
        for (m, f) in &self.terms {
            if !m.has_dtheta() {
                out.add_term(m.clone(), f.body());
            }
        }
        out
    }

    /// True when only `dx` monomials with theta-free coefficients occur.
    pub fn is_base_form(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, f)| !m.has_dtheta() && f.theta_degree() == 0)
    }

    /// Coefficient of `dx_i` in a 1-form.
    pub fn dx_component(&self, i: usize) -> Superfunction {
        self.coefficient(&FormMonomial::dx(i))
    }

    pub fn dtheta_component(&self, j: usize) -> Superfunction {
        self.coefficient(&FormMonomial::dtheta(j))
    }

    /// Largest Line degree / Fourier mode of `coord` among the coefficients.
    pub fn max_factor(&self, coord: usize) -> u32 {
        self.terms
            .values()
            .flat_map(|f| f.terms().map(|(_, c)| c.max_factor(coord)).collect::<Vec<_>>())
            .max()
            .unwrap_or(0)
    }
}

/// Differential of a function, coefficients on the left:
/// `d(c theta^J) = sum_i (-1)^|J| (d_i c) theta^J dx_i + sum_j d_theta_j(c theta^J) dtheta_j`.
pub fn function_differential(f: &Superfunction) -> SuperForm {
    let sig = f.signature().clone();
    let mut out = SuperForm::zero(&sig);
    for (mask, c) in f.terms() {
        let odd = mask_parity(*mask).is_odd();
        for i in 0..sig.even_len() {
            let dc = c.derivative(i);
            if dc.is_zero() {
                continue;
            }
            let dc = if odd { dc.neg() } else { dc };
            out.add_term(
                FormMonomial::dx(i),
                Superfunction::from_terms(&sig, [(*mask, dc)]),
            );
        }
    }
    for j in 0..sig.odd_len() {
        let dj = f.partial(Coord::Odd(j));
        out.add_term(FormMonomial::dtheta(j), dj);
    }
    out
}

impl fmt::Display for SuperForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_form(self))
    }
}

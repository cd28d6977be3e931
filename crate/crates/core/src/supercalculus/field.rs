use std::collections::BTreeMap;
use std::fmt;

use super::form::{FormMonomial, SuperForm};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superalgebra::{coord_parity, Coord, Parity, Signature, SpaceSignature, Superfunction};

/// `sum_a X^a d/dz_a`, coefficients written on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVectorField {
    sig: Signature,
    comps: BTreeMap<Coord, Superfunction>,
}

impl SuperVectorField {
    pub fn zero(sig: &Signature) -> Self {
        SuperVectorField {
            sig: sig.clone(),
            comps: BTreeMap::new(),
        }
    }

    /// The coordinate derivation `d/dz`.
    pub fn coordinate(sig: &Signature, c: Coord) -> Self {
        SuperVectorField::component(c, Superfunction::one(sig))
    }

    pub fn component(c: Coord, f: Superfunction) -> Self {
        let mut out = SuperVectorField::zero(f.signature());
        out.add_component(c, f);
        out
    }

    pub fn from_components<I: IntoIterator<Item = (Coord, Superfunction)>>(
        sig: &Signature,
        comps: I,
    ) -> Self {
        let mut out = SuperVectorField::zero(sig);
        for (c, f) in comps {
            out.add_component(c, f);
        }
        out
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn add_component(&mut self, c: Coord, f: Superfunction) {
        if f.is_zero() {
            return;
        }
        match self.comps.get_mut(&c) {
            Some(existing) => {
                *existing = existing.add(&f);
                if existing.is_zero() {
                    self.comps.remove(&c);
                }
            }
            None => {
                self.comps.insert(c, f);
            }
        }
    }

    pub fn get(&self, c: Coord) -> Superfunction {
        self.comps
            .get(&c)
            .cloned()
            .unwrap_or_else(|| Superfunction::zero(&self.sig))
    }

    pub fn components(&self) -> impl Iterator<Item = (&Coord, &Superfunction)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Parity when homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        if self.comps.values().all(Superfunction::is_zero) {
            return Some(Parity::Even);
        }
        [Parity::Even, Parity::Odd]
            .into_iter()
            .find(|p| self.is_homogeneous_of(*p))
    }

    pub fn is_homogeneous_of(&self, p: Parity) -> bool {
        self.comps
            .iter()
            .all(|(c, f)| f.is_homogeneous_of(p + coord_parity(*c)))
    }

    pub fn homogeneous_parity(&self) -> Result<Parity> {
        self.parity().ok_or(Error::NotHomogeneous)
    }

    fn check(&self, other: &Signature) -> Result<()> {
        if SpaceSignature::same(&self.sig, other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn add(&self, other: &SuperVectorField) -> SuperVectorField {
        let mut out = self.clone();
        for (c, f) in &other.comps {
            out.add_component(*c, f.clone());
        }
        out
    }

    pub fn neg(&self) -> SuperVectorField {
        SuperVectorField {
            sig: self.sig.clone(),
            comps: self.comps.iter().map(|(c, f)| (*c, f.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SuperVectorField) -> SuperVectorField {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> SuperVectorField {
        SuperVectorField::from_components(&self.sig, self.comps.iter().map(|(c, f)| (*c, f.scale(s))))
    }

    /// `f X`, i.e. components `f X^a`.
    pub fn left_mul(&self, f: &Superfunction) -> SuperVectorField {
        SuperVectorField::from_components(&self.sig, self.comps.iter().map(|(c, g)| (*c, f.mul(g))))
    }

    /// Action on functions, `X(f) = sum_a X^a d_a f` with left derivatives.
    pub fn apply(&self, f: &Superfunction) -> Result<Superfunction> {
        self.check(f.signature())?;
        let mut out = Superfunction::zero(&self.sig);
        for (c, coeff) in &self.comps {
            out = out.add(&coeff.mul(&f.partial(*c)));
        }
        Ok(out)
    }

    /// Graded commutator `[X, Y] = X Y - (-1)^{p(X)p(Y)} Y X`.
    pub fn bracket(&self, other: &SuperVectorField) -> Result<SuperVectorField> {
        self.check(&other.sig)?;
        let px = self.homogeneous_parity()?;
        let py = other.homogeneous_parity()?;
        let sign = px.sign_with(py);
        let mut out = SuperVectorField::zero(&self.sig);
        for c in self.sig.coords() {
            let xy = self.apply(&other.get(c))?;
            let yx = other.apply(&self.get(c))?;
            let yx = if sign < 0 { yx.neg() } else { yx };
            out.add_component(c, xy.sub(&yx));
        }
        Ok(out)
    }

    /// Interior product, a left derivation of parity `p(X) + 1` lowering
    /// form degree by one, with `i_X dz_a = X^a`.
    pub fn interior(&self, form: &SuperForm) -> Result<SuperForm> {
        self.check(form.signature())?;
        let px = self.homogeneous_parity()?;
        let op_parity = px.flip();
        let sig = &self.sig;
        let one = Superfunction::one(sig);
        let mut out = SuperForm::zero(sig);
        for (m, f) in form.terms() {
            // i_X(f ^ mu) = (-1)^{(p(X)+1) p(f)} f ^ i_X(mu)
            let f = if op_parity.is_odd() { f.parity_twist() } else { f.clone() };
            let gens = m.generators();
            let mut prefix_parity = Parity::Even;
            for (l, g) in gens.iter().enumerate() {
                let comp = self.get(*g);
                if !comp.is_zero() {
                    let prefix = monomial_of(&gens[..l]);
                    let suffix = monomial_of(&gens[l + 1..]);
                    let piece = SuperForm::monomial(one.clone(), prefix)
                        .wedge(&SuperForm::from_function(comp))?
                        .wedge(&SuperForm::monomial(one.clone(), suffix))?;
                    let piece = if op_parity.sign_with(prefix_parity) < 0 { piece.neg() } else { piece };
                    out = out.add(&piece.left_mul(&f));
                }
                prefix_parity = prefix_parity + coord_parity(*g).flip();
            }
        }
        Ok(out)
    }

    /// `L_X = i_X d + (-1)^{p(X)} d i_X`.
    pub fn lie_derivative(&self, form: &SuperForm) -> Result<SuperForm> {
        let px = self.homogeneous_parity()?;
        let first = self.interior(&form.d()?)?;
        let second = self.interior(form)?.d()?;
        Ok(if px.is_odd() { first.sub(&second) } else { first.add(&second) })
    }
}

/// Generators of a monomial back to a monomial; `gens` lists `dx` first in
/// increasing order, so no reordering signs arise.
fn monomial_of(gens: &[Coord]) -> FormMonomial {
    let mut dx = 0u64;
    let mut dtheta: Vec<u32> = Vec::new();
    for g in gens {
        match g {
            Coord::Even(i) => dx |= 1u64 << i,
            Coord::Odd(j) => {
                if dtheta.len() <= *j {
                    dtheta.resize(j + 1, 0);
                }
                dtheta[*j] += 1;
            }
        }
    }
    FormMonomial::new(dx, dtheta)
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_field(self))
    }
}

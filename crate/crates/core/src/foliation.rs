//! Codimension `0|1` super-foliations given by one even 1-form `a`, and the
//! class of `A = p(L_Theta a)` in `H^1` of the base.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::superalgebra::{
    BaseCoefficient, BaseFactor, BaseMonomial, Coord, OddMask, Parity, Signature, SpaceSignature,
    Superfunction, Topology,
};
use crate::supercalculus::{FormMonomial, SuperForm, SuperVectorField};

/// Annihilator presentation of a super-foliation, optionally with a list of
/// generating vector fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationPresentation {
    sig: Signature,
    odd_forms: Vec<SuperForm>,
    even_forms: Vec<SuperForm>,
    generators: Vec<SuperVectorField>,
}

impl FoliationPresentation {
    pub fn new(sig: &Signature, odd_forms: Vec<SuperForm>, even_forms: Vec<SuperForm>) -> Result<Self> {
        for (forms, p) in [(&odd_forms, Parity::Odd), (&even_forms, Parity::Even)] {
            for w in forms {
                check_one_form(sig, w, p)?;
            }
        }
        Ok(FoliationPresentation {
            sig: sig.clone(),
            odd_forms,
            even_forms,
            generators: Vec::new(),
        })
    }

    /// Codimension `0|1`: a single even form.
    pub fn from_even_form(a: SuperForm) -> Result<Self> {
        let sig = a.signature().clone();
        FoliationPresentation::new(&sig, Vec::new(), vec![a])
    }

    pub fn with_generators(mut self, generators: Vec<SuperVectorField>) -> Result<Self> {
        for x in &generators {
            if !SpaceSignature::same(x.signature(), &self.sig) {
                return Err(Error::SignatureMismatch);
            }
            x.homogeneous_parity()?;
        }
        self.generators = generators;
        Ok(self)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn odd_forms(&self) -> &[SuperForm] {
        &self.odd_forms
    }

    pub fn even_forms(&self) -> &[SuperForm] {
        &self.even_forms
    }

    pub fn generators(&self) -> &[SuperVectorField] {
        &self.generators
    }

    /// The form `a` of a codimension `0|1` presentation.
    pub fn defining_form(&self) -> Result<&SuperForm> {
        match (self.odd_forms.len(), self.even_forms.as_slice()) {
            (0, [a]) => Ok(a),
            _ => Err(Error::NotEvenOneForm(
                "the class needs exactly one even annihilator and no odd ones".into(),
            )),
        }
    }

    /// Every generator is annihilated by every form.
    pub fn generators_annihilated(&self) -> Result<bool> {
        for x in &self.generators {
            for w in self.odd_forms.iter().chain(&self.even_forms) {
                if !x.interior(w)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_one_form(sig: &Signature, w: &SuperForm, p: Parity) -> Result<()> {
    if !SpaceSignature::same(sig, w.signature()) {
        return Err(Error::SignatureMismatch);
    }
    if w.terms().any(|(m, _)| m.degree() != 1) {
        return Err(Error::NotEvenOneForm("every term must have form degree 1".into()));
    }
    if !w.is_homogeneous_of(p) {
        return Err(Error::NotEvenOneForm(format!(
            "form is not {}",
            if p.is_odd() { "odd" } else { "even" }
        )));
    }
    Ok(())
}

/// Cohomology class of a closed base 1-form: one number per Circle
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseClassH1 {
    pub classes: Vec<(String, Scalar)>,
}

impl BaseClassH1 {
    pub fn get(&self, name: &str) -> Option<&Scalar> {
        self.classes.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn is_zero(&self) -> bool {
        self.classes.iter().all(|(_, s)| s.is_zero())
    }
}

/// An odd `Theta` with `i_Theta a = 1`.
pub fn find_transversal(a: &SuperForm) -> Result<SuperVectorField> {
    check_one_form(a.signature(), a, Parity::Even)?;
    let sig = a.signature();
    for j in 0..sig.odd_len() {
        let c = a.dtheta_component(j);
        if c.body_coefficient().as_constant().is_some_and(|s| !s.is_zero()) {
            let inv = c.invert()?;
            return Ok(SuperVectorField::component(Coord::Odd(j), inv));
        }
    }
    Err(Error::NotRegular)
}

/// Rescales an odd field `x` to `(i_x a)^{-1} x`.
pub fn normalize_transversal(x: &SuperVectorField, a: &SuperForm) -> Result<SuperVectorField> {
    if !x.is_homogeneous_of(Parity::Odd) {
        return Err(Error::NotTransversal);
    }
    let pairing = x.interior(a)?;
    let value = pairing
        .coefficient(&FormMonomial::one());
    let inv = value.invert().map_err(|_| Error::NotTransversal)?;
    Ok(x.left_mul(&inv))
}

/// The odd 1-form `b` with `da = b ^ a`.
pub fn solve_b(a: &SuperForm, theta: &SuperVectorField) -> Result<SuperForm> {
    check_one_form(a.signature(), a, Parity::Even)?;
    let sig = a.signature();
    let pairing = theta.interior(a)?;
    if !theta.is_homogeneous_of(Parity::Odd) || pairing != SuperForm::from_function(Superfunction::one(sig)) {
        return Err(Error::NotTransversal);
    }
    let da = a.d()?;
    let first = theta.interior(&da)?;
    let second = theta.interior(&first)?.coefficient(&FormMonomial::one());
    let b = first.sub(&a.left_mul(&second.scale(&Scalar::from_ratio(1, 2))));
    if b.wedge(a)? != da {
        return Err(Error::NotIntegrable);
    }
    debug_assert!(b.d()?.is_zero(), "db must vanish once da = b ^ a");
    Ok(b)
}

/// `A = p(L_Theta a)`, after checking integrability.
pub fn godbillon_vey_form(a: &SuperForm) -> Result<SuperForm> {
    let theta = find_transversal(a)?;
    solve_b(a, &theta)?;
    Ok(theta.lie_derivative(a)?.project_base())
}

/// Class of a closed base 1-form. The remainder after removing the
/// constant `dx_i` terms on circles is checked to be exact by building a
/// primitive.
pub fn h1_class(form: &SuperForm) -> Result<BaseClassH1> {
    let sig = form.signature();
    if !form.is_base_form() {
        return Err(Error::NotBaseForm("form involves odd coordinates or their differentials".into()));
    }
    if form.terms().any(|(m, _)| m.degree() != 1) {
        return Err(Error::NotBaseForm("form degree must be 1".into()));
    }
    if !form.d()?.is_zero() {
        return Err(Error::NotClosed);
    }
    let mut classes = Vec::new();
    let mut rest = form.clone();
    for (i, c) in sig.even().iter().enumerate() {
        if c.topology == Topology::Circle {
            let value = form.dx_component(i).body_coefficient().constant_term();
            rest = rest.sub(&SuperForm::differential(sig, Coord::Even(i)).scale(&value));
            classes.push((c.name.clone(), value));
        }
    }
    let primitive = exact_primitive(&rest).ok_or(Error::NotClosed)?;
    debug_assert_eq!(crate::supercalculus::function_differential(&primitive), rest);
    Ok(BaseClassH1 { classes })
}

/// A function `F` with `dF = form`, for a closed base 1-form with no
/// periods, found coordinate by coordinate.
pub fn exact_primitive(form: &SuperForm) -> Option<Superfunction> {
    let sig = form.signature();
    let mut rest = form.clone();
    let mut primitive = Superfunction::zero(sig);
    for i in 0..sig.even_len() {
        let g = rest.dx_component(i).body_coefficient();
        let circle = sig.topology(i) == Topology::Circle;
        let anti = Superfunction::from_base(sig, g.antiderivative(i, circle)?);
        rest = rest.sub(&crate::supercalculus::function_differential(&anti));
        primitive = primitive.add(&anti);
    }
    rest.is_zero().then_some(primitive)
}

pub fn gv_class(a: &SuperForm) -> Result<BaseClassH1> {
    h1_class(&godbillon_vey_form(a)?)
}

// ---------------------------------------------------------------------------
// linear-solve oracle

/// Monomial bound for the oracle's ansatz: Line exponents up to `degree`,
/// Fourier modes up to `modes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBound {
    pub degree: u32,
    pub modes: u32,
}

impl OracleBound {
    /// A bound covering the constructive solution for `a`.
    pub fn for_form(a: &SuperForm) -> Self {
        let sig = a.signature();
        let mut degree = 0;
        let mut modes = 0;
        for i in 0..sig.even_len() {
            let m = a.max_factor(i);
            match sig.topology(i) {
                Topology::Line => degree = degree.max(m),
                Topology::Circle => modes = modes.max(m),
            }
        }
        OracleBound {
            degree: 2 * degree + 1,
            modes: 2 * modes + 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub bound: OracleBound,
    pub unknowns: usize,
    /// `None` when no `b` in the ansatz satisfies `da = b ^ a`.
    pub solution: Option<SuperForm>,
    pub unique: bool,
}

fn base_monomials(sig: &Signature, bound: OracleBound) -> Vec<BaseMonomial> {
    let mut out = vec![Vec::new()];
    for i in 0..sig.even_len() {
        let choices: Vec<BaseFactor> = match sig.topology(i) {
            Topology::Line => (0..=bound.degree).map(BaseFactor::Pow).collect(),
            Topology::Circle => std::iter::once(BaseFactor::Pow(0))
                .chain((1..=bound.modes).flat_map(|k| [BaseFactor::Cos(k), BaseFactor::Sin(k)]))
                .collect(),
        };
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<BaseFactor>| {
                choices.iter().map(move |f| {
                    let mut v = prefix.clone();
                    v.push(*f);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(BaseMonomial::from_factors).collect()
}

type Key = (FormMonomial, OddMask, BaseMonomial);

fn flatten(w: &SuperForm) -> BTreeMap<Key, Scalar> {
    let mut out = BTreeMap::new();
    for (m, f) in w.terms() {
        for (mask, c) in f.terms() {
            for (bm, s) in c.terms() {
                out.insert((m.clone(), *mask, bm.clone()), s.clone());
            }
        }
    }
    out
}

/// Solves `da = b ^ a` for odd `b` over the bounded ansatz by exact
/// elimination.
pub fn solve_b_linear(a: &SuperForm, bound: OracleBound) -> Result<OracleOutcome> {
    check_one_form(a.signature(), a, Parity::Even)?;
    let sig = a.signature();
    let monos = base_monomials(sig, bound);
    let q = sig.odd_len();
    let mut basis: Vec<SuperForm> = Vec::new();
    for gen in sig.coords() {
        // b is odd: dx (odd) needs even theta-monomials, dtheta odd ones
        let want = match gen {
            Coord::Even(_) => Parity::Even,
            Coord::Odd(_) => Parity::Odd,
        };
        for mask in 0..(1u64 << q) {
            if Parity::from_count(mask.count_ones()) != want {
                continue;
            }
            for bm in &monos {
                let f = Superfunction::from_terms(
                    sig,
                    [(mask, BaseCoefficient::monomial(bm.clone(), Scalar::one()))],
                );
                basis.push(SuperForm::differential(sig, gen).left_mul(&f));
            }
        }
    }
    let columns: Vec<BTreeMap<Key, Scalar>> = basis
        .iter()
        .map(|e| e.wedge(a).map(|w| flatten(&w)))
        .collect::<Result<_>>()?;
    let rhs = flatten(&a.d()?);
    let mut keys: Vec<Key> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    keys.extend(rhs.keys().cloned());
    keys.sort();
    keys.dedup();
    let matrix: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|k| {
            columns
                .iter()
                .map(|c| c.get(k).cloned().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect();
    let b: Vec<Scalar> = keys
        .iter()
        .map(|k| rhs.get(k).cloned().unwrap_or_else(Scalar::zero))
        .collect();
    let unknowns = basis.len();
    let unique = linalg::rank(&matrix) == unknowns;
    let solution = linalg::solve(&matrix, &b).map(|x| {
        basis
            .iter()
            .zip(&x)
            .fold(SuperForm::zero(sig), |acc, (e, c)| acc.add(&e.scale(c)))
    });
    Ok(OracleOutcome {
        bound,
        unknowns,
        solution,
        unique,
    })
}

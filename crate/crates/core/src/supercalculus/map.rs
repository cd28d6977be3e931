use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::form::{function_differential, SuperForm};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superalgebra::{
    BaseCoefficient, BaseFactor, BaseMonomial, Coord, Parity, Signature, SpaceSignature,
    Superfunction, Topology,
};

/// Image of one even target coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvenImage {
    /// A Line target coordinate maps to an even superfunction of the source.
    Line(Superfunction),
    /// A Circle target coordinate maps to `winding * x_source + nilpotent`,
    /// with `x_source` a Circle coordinate of the source and `nilpotent` an
    /// even superfunction with zero body.
    Circle {
        source: usize,
        winding: i64,
        nilpotent: Superfunction,
    },
}

/// A map of model spaces given in coordinates: one formula per target
/// coordinate, as functions of the source coordinates.
#[derive(Clone, Debug)]
pub struct SuperMap {
    source: Signature,
    target: Signature,
    even: Vec<EvenImage>,
    odd: Vec<Superfunction>,
}

impl SuperMap {
    pub fn new(
        source: &Signature,
        target: &Signature,
        even: Vec<EvenImage>,
        odd: Vec<Superfunction>,
    ) -> Result<Self> {
        if !source.params_compatible(target) {
            return Err(Error::SignatureMismatch);
        }
        if even.len() != target.even_len() || odd.len() != target.odd_len() {
            return Err(Error::ParityMismatch(
                "one image per target coordinate is required".into(),
            ));
        }
        for (i, img) in even.iter().enumerate() {
            let name = &target.even()[i].name;
            match (target.topology(i), img) {
                (Topology::Line, EvenImage::Line(f)) => {
                    check_function(source, f, Parity::Even, name)?;
                }
                (
                    Topology::Circle,
                    EvenImage::Circle {
                        source: s,
                        nilpotent,
                        ..
                    },
                ) => {
                    if *s >= source.even_len() || source.topology(*s) != Topology::Circle {
                        return Err(Error::ParityMismatch(format!(
                            "circle `{name}` must map onto a circle coordinate of the source"
                        )));
                    }
                    check_function(source, nilpotent, Parity::Even, name)?;
                    if !nilpotent.body_coefficient().is_zero() {
                        return Err(Error::ParityMismatch(format!(
                            "correction term of circle `{name}` must be nilpotent"
                        )));
                    }
                }
                _ => {
                    return Err(Error::ParityMismatch(format!(
                        "image of `{name}` does not match its topology"
                    )))
                }
            }
        }
        for (j, f) in odd.iter().enumerate() {
            check_function(source, f, Parity::Odd, &target.odd()[j])?;
        }
        Ok(SuperMap {
            source: source.clone(),
            target: target.clone(),
            even,
            odd,
        })
    }

    pub fn identity(sig: &Signature) -> Self {
        let even = (0..sig.even_len())
            .map(|i| match sig.topology(i) {
                Topology::Line => {
                    EvenImage::Line(Superfunction::coordinate(sig, Coord::Even(i)).expect("line"))
                }
                Topology::Circle => EvenImage::Circle {
                    source: i,
                    winding: 1,
                    nilpotent: Superfunction::zero(sig),
                },
            })
            .collect();
        let odd = (0..sig.odd_len())
            .map(|j| Superfunction::odd_coordinate(sig, j))
            .collect();
        SuperMap {
            source: sig.clone(),
            target: sig.clone(),
            even,
            odd,
        }
    }

    /// Projection that forgets source coordinates: each target coordinate is
    /// the source coordinate with the same name.
    pub fn coordinate_projection(source: &Signature, target: &Signature) -> Result<Self> {
        let mut even = Vec::new();
        for c in target.even() {
            let Coord::Even(s) = source.coord(&c.name)? else {
                return Err(Error::ParityMismatch(format!("`{}` is odd in the source", c.name)));
            };
            if source.topology(s) != c.topology {
                return Err(Error::ParityMismatch(format!("topology of `{}` differs", c.name)));
            }
            even.push(match c.topology {
                Topology::Line => EvenImage::Line(Superfunction::coordinate(source, Coord::Even(s))?),
                Topology::Circle => EvenImage::Circle {
                    source: s,
                    winding: 1,
                    nilpotent: Superfunction::zero(source),
                },
            });
        }
        let mut odd = Vec::new();
        for name in target.odd() {
            let Coord::Odd(s) = source.coord(name)? else {
                return Err(Error::ParityMismatch(format!("`{name}` is even in the source")));
            };
            odd.push(Superfunction::odd_coordinate(source, s));
        }
        SuperMap::new(source, target, even, odd)
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    /// Pullback of a function on the target.
    pub fn pullback_function(&self, f: &Superfunction) -> Result<Superfunction> {
        if !SpaceSignature::same(f.signature(), &self.target) {
            return Err(Error::SignatureMismatch);
        }
        let mut out = Superfunction::zero(&self.source);
        for (mask, c) in f.terms() {
            let mut odd_part = Superfunction::one(&self.source);
            let mut rest = *mask;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                odd_part = odd_part.mul(&self.odd[j]);
                rest &= rest - 1;
            }
            if odd_part.is_zero() {
                continue;
            }
            out = out.add(&self.pullback_base(c).mul(&odd_part));
        }
        Ok(out)
    }

    fn pullback_base(&self, c: &BaseCoefficient) -> Superfunction {
        let mut out = Superfunction::zero(&self.source);
        for (m, s) in c.terms() {
            let mut term = Superfunction::constant(&self.source, s.clone());
            for (i, factor) in m.factors().iter().enumerate() {
                term = term.mul(&self.pullback_factor(i, *factor));
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        out
    }

    fn pullback_factor(&self, coord: usize, factor: BaseFactor) -> Superfunction {
        let src = &self.source;
        match (&self.even[coord], factor) {
            (_, BaseFactor::Pow(0)) => Superfunction::one(src),
            (EvenImage::Line(f), BaseFactor::Pow(e)) => f.pow(e),
            (
                EvenImage::Circle {
                    source,
                    winding,
                    nilpotent,
                },
                BaseFactor::Cos(k) | BaseFactor::Sin(k),
            ) => {
                // trig(k (w x + n)) = trig(k w x) cos(k n) +- ... sin(k n)
                let kw = k as i64 * winding;
                let cos_main = trig(src, *source, kw, false);
                let sin_main = trig(src, *source, kw, true);
                let kn = nilpotent.scale(&Scalar::from_int(k as i64));
                let (cos_n, sin_n) = nilpotent_cos_sin(&kn);
                if matches!(factor, BaseFactor::Cos(_)) {
                    cos_main.mul(&cos_n).sub(&sin_main.mul(&sin_n))
                } else {
                    sin_main.mul(&cos_n).add(&cos_main.mul(&sin_n))
                }
            }
            _ => unreachable!("factor kinds are tied to coordinate topology"),
        }
    }

    /// Pullback `d` of a target coordinate.
    fn pullback_differential(&self, c: Coord) -> SuperForm {
        match c {
            Coord::Odd(j) => function_differential(&self.odd[j]),
            Coord::Even(i) => match &self.even[i] {
                EvenImage::Line(f) => function_differential(f),
                EvenImage::Circle {
                    source,
                    winding,
                    nilpotent,
                } => SuperForm::differential(&self.source, Coord::Even(*source))
                    .scale(&Scalar::from_int(*winding))
                    .add(&function_differential(nilpotent)),
            },
        }
    }

    /// Pullback of a form on the target to the source.
    pub fn pullback(&self, form: &SuperForm) -> Result<SuperForm> {
        if !SpaceSignature::same(form.signature(), &self.target) {
            return Err(Error::SignatureMismatch);
        }
        let mut out = SuperForm::zero(&self.source);
        for (m, f) in form.terms() {
            let mut term = SuperForm::from_function(self.pullback_function(f)?);
            for g in m.generators() {
                if term.is_zero() {
                    break;
                }
                term = term.wedge(&self.pullback_differential(g))?;
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

fn check_function(sig: &Signature, f: &Superfunction, p: Parity, name: &str) -> Result<()> {
    if !SpaceSignature::same(f.signature(), sig) {
        return Err(Error::SignatureMismatch);
    }
    if !f.is_homogeneous_of(p) {
        return Err(Error::ParityMismatch(format!(
            "image of `{name}` must be {}",
            if p.is_odd() { "odd" } else { "even" }
        )));
    }
    Ok(())
}

fn trig(sig: &Signature, coord: usize, k: i64, sine: bool) -> Superfunction {
    let factor = match (sine, k.unsigned_abs() as u32) {
        (false, a) => BaseFactor::Cos(a),
        (true, 0) => return Superfunction::zero(sig),
        (true, a) => BaseFactor::Sin(a),
    };
    let sign = if sine && k < 0 { -1 } else { 1 };
    Superfunction::from_base(
        sig,
        BaseCoefficient::monomial(BaseMonomial::single(coord, factor), Scalar::from_int(sign)),
    )
}

/// `cos(n)` and `sin(n)` of a nilpotent even superfunction as finite
/// Taylor sums.
fn nilpotent_cos_sin(n: &Superfunction) -> (Superfunction, Superfunction) {
    let sig = n.signature();
    let mut cos = Superfunction::zero(sig);
    let mut sin = Superfunction::zero(sig);
    let mut power = Superfunction::one(sig);
    let mut fact = BigInt::one();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let coeff = Scalar::from_rational(BigRational::new(BigInt::one(), fact.clone()));
        let term = power.scale(&coeff);
        match k % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        k += 1;
        fact *= BigInt::from(k);
        power = power.mul(n);
    }
    (cos, sin)
}

//! Differential forms and vector fields on the model space.
//!
//! One total parity drives every sign: `x` even, `theta` odd, `dx` odd,
//! `dtheta` even. Coefficients are always written on the left of form
//! monomials and coordinate derivations.

mod field;
mod form;
mod map;

pub use field::SuperVectorField;
pub use form::{function_differential, FormMonomial, SuperForm};
pub use map::{EvenImage, SuperMap};

use crate::error::Result;

/// `omega ^ eta`.
pub fn wedge(omega: &SuperForm, eta: &SuperForm) -> Result<SuperForm> {
    omega.wedge(eta)
}

pub fn exterior_d(omega: &SuperForm) -> Result<SuperForm> {
    omega.d()
}

pub fn interior_product(x: &SuperVectorField, omega: &SuperForm) -> Result<SuperForm> {
    x.interior(omega)
}

pub fn lie_derivative(x: &SuperVectorField, omega: &SuperForm) -> Result<SuperForm> {
    x.lie_derivative(omega)
}

pub fn vf_bracket(x: &SuperVectorField, y: &SuperVectorField) -> Result<SuperVectorField> {
    x.bracket(y)
}

pub fn project_base(omega: &SuperForm) -> SuperForm {
    omega.project_base()
}

pub fn pullback(phi: &SuperMap, omega: &SuperForm) -> Result<SuperForm> {
    phi.pullback(omega)
}

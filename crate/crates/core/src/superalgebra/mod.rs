//! Coefficient rings and the Grassmann-valued superfunction algebra of a
//! split model space with Line/Circle even coordinates and odd coordinates.

mod base;
mod function;
mod signature;

use std::ops::Add;

pub use base::{BaseCoefficient, BaseFactor, BaseMonomial};
pub use function::{OddMask, Superfunction};
pub(crate) use function::{mask_parity, mask_product_sign};
pub use signature::{Coord, EvenCoord, Signature, SpaceSignature, Topology, DEFAULT_DTHETA_GUARD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(n: u32) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^(self * other)`.
    pub fn sign_with(self, other: Parity) -> i32 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Parity of a coordinate (and of its partial derivative).
pub fn coord_parity(c: Coord) -> Parity {
    match c {
        Coord::Even(_) => Parity::Even,
        Coord::Odd(_) => Parity::Odd,
    }
}

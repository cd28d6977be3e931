use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the exponent of any single `dtheta` generator.
pub const DEFAULT_DTHETA_GUARD: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    Line,
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenCoord {
    pub name: String,
    pub topology: Topology,
}

/// A coordinate of the model space, addressed by position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Even(usize),
    Odd(usize),
}

/// Coordinates and formal parameters of a split model space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSignature {
    even: Vec<EvenCoord>,
    odd: Vec<String>,
    params: Vec<String>,
    dtheta_guard: u32,
}

pub type Signature = Arc<SpaceSignature>;

impl SpaceSignature {
    pub fn new(even: Vec<EvenCoord>, odd: Vec<String>, params: Vec<String>) -> Result<Signature> {
        Ok(Arc::new(Self::build(even, odd, params, DEFAULT_DTHETA_GUARD)?))
    }

    fn build(
        even: Vec<EvenCoord>,
        odd: Vec<String>,
        params: Vec<String>,
        dtheta_guard: u32,
    ) -> Result<SpaceSignature> {
        if even.len() > 64 || odd.len() > 64 {
            return Err(Error::InvalidSignature(
                "at most 64 even and 64 odd coordinates".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for name in even
            .iter()
            .map(|c| c.name.as_str())
            .chain(odd.iter().map(String::as_str))
            .chain(params.iter().map(String::as_str))
        {
            if !is_identifier(name) {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` is not a valid identifier"
                )));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::InvalidSignature(format!("duplicate name `{name}`")));
            }
        }
        // differential symbols `d<coord>` must not shadow another name
        for name in even
            .iter()
            .map(|c| c.name.as_str())
            .chain(odd.iter().map(String::as_str))
        {
            let dname = format!("d{name}");
            if seen.contains(&dname) {
                return Err(Error::InvalidSignature(format!(
                    "`{dname}` collides with the differential of `{name}`"
                )));
            }
        }
        Ok(SpaceSignature {
            even,
            odd,
            params,
            dtheta_guard,
        })
    }

    /// Convenience constructor from plain name lists.
    pub fn with_names(even: &[(&str, Topology)], odd: &[&str], params: &[&str]) -> Result<Signature> {
        Self::new(
            even.iter()
                .map(|(n, t)| EvenCoord {
                    name: n.to_string(),
                    topology: *t,
                })
                .collect(),
            odd.iter().map(|s| s.to_string()).collect(),
            params.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Same space with a different `dtheta` exponent guard.
    pub fn with_dtheta_guard(&self, guard: u32) -> Signature {
        let mut s = self.clone();
        s.dtheta_guard = guard;
        Arc::new(s)
    }

    pub fn even(&self) -> &[EvenCoord] {
        &self.even
    }

    pub fn odd(&self) -> &[String] {
        &self.odd
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn even_len(&self) -> usize {
        self.even.len()
    }

    pub fn odd_len(&self) -> usize {
        self.odd.len()
    }

    pub fn dtheta_guard(&self) -> u32 {
        self.dtheta_guard
    }

    pub fn topology(&self, even_index: usize) -> Topology {
        self.even[even_index].topology
    }

    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.even.len())
            .map(Coord::Even)
            .chain((0..self.odd.len()).map(Coord::Odd))
    }

    pub fn coord(&self, name: &str) -> Result<Coord> {
        if let Some(i) = self.even.iter().position(|c| c.name == name) {
            return Ok(Coord::Even(i));
        }
        if let Some(i) = self.odd.iter().position(|c| c == name) {
            return Ok(Coord::Odd(i));
        }
        Err(Error::UnknownCoordinate(name.to_string()))
    }

    pub fn coord_name(&self, c: Coord) -> &str {
        match c {
            Coord::Even(i) => &self.even[i].name,
            Coord::Odd(j) => &self.odd[j],
        }
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    /// Whether two signatures describe the same space (pointer or value
    /// equality).
    pub fn same(a: &Signature, b: &Signature) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    /// Spaces whose scalars are interchangeable: identical parameter lists.
    pub fn params_compatible(&self, other: &SpaceSignature) -> bool {
        self.params == other.params
    }

    /// The base manifold: even coordinates only, same parameters.
    pub fn base(&self) -> Signature {
        Arc::new(
            Self::build(self.even.clone(), Vec::new(), self.params.clone(), self.dtheta_guard)
                .expect("subset of a valid signature"),
        )
    }

    /// Mini-syntax `x1:circle;y:line;theta1`, odd coordinates without
    /// topology.
    pub fn parse(spec: &str, params: &[String]) -> Result<Signature> {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once(':') {
                Some((name, topo)) => {
                    let topology = match topo.trim().to_ascii_lowercase().as_str() {
                        "circle" => Topology::Circle,
                        "line" => Topology::Line,
                        other => {
                            return Err(Error::InvalidSignature(format!(
                                "unknown topology `{other}` (expected circle or line)"
                            )))
                        }
                    };
                    if !odd.is_empty() {
                        return Err(Error::InvalidSignature(
                            "even coordinates must precede odd coordinates".into(),
                        ));
                    }
                    even.push(EvenCoord {
                        name: name.trim().to_string(),
                        topology,
                    });
                }
                None => odd.push(part.to_string()),
            }
        }
        Self::new(even, odd, params.to_vec())
    }

    /// Inverse of [`SpaceSignature::parse`].
    pub fn to_spec_string(&self) -> String {
        self.even
            .iter()
            .map(|c| {
                format!(
                    "{}:{}",
                    c.name,
                    match c.topology {
                        Topology::Line => "line",
                        Topology::Circle => "circle",
                    }
                )
            })
            .chain(self.odd.iter().cloned())
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

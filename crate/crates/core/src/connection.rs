//! Trivial foliated connections on a base and the two constructions
//! relating them to super-foliations.
//!
//! Generators of the base foliation are kept in pivot form: generator `a`
//! is `d/dx_{p_a} + sum_{i not a pivot} c_{a,i} d/dx_i`. A field lies in
//! their span exactly when it equals `sum_a Z^{p_a} X_a`, which makes span
//! membership and the coefficients of brackets a matter of reading off
//! components.
//!
//! A connection is `nabla_X e_k = sum_j omega(X)_{jk} e_j` on the trivial
//! frame. Its lift to the odd coordinates `xi_1..xi_m` is
//! `X + sum_{j,k} omega(X)_{jk} xi_j d/dxi_k`.

use crate::error::{Error, Result};
use crate::foliation::FoliationPresentation;
use crate::superalgebra::{Coord, Parity, Signature, SpaceSignature, Superfunction};
use crate::supercalculus::{SuperForm, SuperMap, SuperVectorField};

/// Square matrix of base functions.
pub type Matrix = Vec<Vec<Superfunction>>;

pub fn zero_matrix(sig: &Signature, m: usize) -> Matrix {
    vec![vec![Superfunction::zero(sig); m]; m]
}

pub fn identity_matrix(sig: &Signature, m: usize) -> Matrix {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { Superfunction::one(sig) } else { Superfunction::zero(sig) })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = a.len();
    let sig = a.first().and_then(|r| r.first()).map(|f| f.signature().clone());
    let Some(sig) = sig else { return Vec::new() };
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).fold(Superfunction::zero(&sig), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn mat_zip(a: &Matrix, b: &Matrix, f: impl Fn(&Superfunction, &Superfunction) -> Superfunction) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| f(x, y)).collect())
        .collect()
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    mat_zip(a, b, Superfunction::add)
}

pub fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    mat_zip(a, b, Superfunction::sub)
}

fn mat_scale(a: &Matrix, f: &Superfunction) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| f.mul(x)).collect()).collect()
}

fn mat_apply(x: &SuperVectorField, a: &Matrix) -> Result<Matrix> {
    a.iter()
        .map(|r| r.iter().map(|f| x.apply(f)).collect())
        .collect()
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(Superfunction::is_zero))
}

/// Determinant by cofactor expansion; ranks here are small.
pub fn determinant(a: &Matrix, sig: &Signature) -> Superfunction {
    let m = a.len();
    if m == 0 {
        return Superfunction::one(sig);
    }
    if m == 1 {
        return a[0][0].clone();
    }
    let mut out = Superfunction::zero(sig);
    for j in 0..m {
        if a[0][j].is_zero() {
            continue;
        }
        let term = a[0][j].mul(&determinant(&minor(a, 0, j), sig));
        out = if j % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

fn minor(a: &Matrix, row: usize, col: usize) -> Matrix {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, f)| f.clone())
                .collect()
        })
        .collect()
}

/// Inverse over the function ring: the determinant must have an
/// invertible constant body.
pub fn mat_inverse(a: &Matrix, sig: &Signature) -> Result<Matrix> {
    let m = a.len();
    let det = determinant(a, sig);
    if det.body_coefficient().as_constant().is_none() {
        return Err(Error::NonInvertibleGauge);
    }
    let inv_det = det.invert().map_err(|_| Error::NonInvertibleGauge)?;
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let c = determinant(&minor(a, j, i), sig);
                    let c = if (i + j) % 2 == 0 { c } else { c.neg() };
                    c.mul(&inv_det)
                })
                .collect()
        })
        .collect())
}

// ---------------------------------------------------------------------------
// pivot-form generator families

/// Pivot coordinates of a pivot-form family of even fields.
fn pivots(gens: &[SuperVectorField]) -> Result<Vec<Coord>> {
    let mut pivots = Vec::new();
    for (a, x) in gens.iter().enumerate() {
        let p = x
            .components()
            .find(|(c, f)| !pivots.contains(*c) && f.is_one())
            .map(|(c, _)| *c)
            .ok_or_else(|| Error::NotAdapted(format!("generator {a} has no unit pivot component")))?;
        pivots.push(p);
    }
    for (a, x) in gens.iter().enumerate() {
        for (b, p) in pivots.iter().enumerate() {
            let c = x.get(*p);
            let expected = a == b;
            if (expected && !c.is_one()) || (!expected && !c.is_zero()) {
                return Err(Error::NotAdapted(format!(
                    "generator {a} is not in pivot form with respect to generator {b}"
                )));
            }
        }
    }
    Ok(pivots)
}

/// Coefficients of `z` on the family, when `z` lies in its span.
fn span_coefficients(gens: &[SuperVectorField], pivots: &[Coord], z: &SuperVectorField) -> Option<Vec<Superfunction>> {
    let coeffs: Vec<Superfunction> = pivots.iter().map(|p| z.get(*p)).collect();
    let mut rest = z.clone();
    for (c, x) in coeffs.iter().zip(gens) {
        rest = rest.sub(&x.left_mul(c));
    }
    rest.is_zero().then_some(coeffs)
}

/// Checks that all brackets lie in the span; returns
/// `brackets[a][b][e]`, the coefficient of `X_e` in `[X_a, X_b]`.
fn structure_functions(gens: &[SuperVectorField], pivots: &[Coord]) -> Result<Vec<Vec<Vec<Superfunction>>>> {
    let n = gens.len();
    let mut out = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let z = gens[a].bracket(&gens[b])?;
            out[a][b] = span_coefficients(gens, pivots, &z).ok_or(Error::NotInvolutive(a, b))?;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// connections

/// A trivial foliated connection, flat or not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionData {
    base: Signature,
    generators: Vec<SuperVectorField>,
    rank: usize,
    matrices: Vec<Matrix>,
    pivots: Vec<Coord>,
    structure: Vec<Vec<Vec<Superfunction>>>,
}

impl ConnectionData {
    pub fn new(base: &Signature, generators: Vec<SuperVectorField>, rank: usize, matrices: Vec<Matrix>) -> Result<Self> {
        if base.odd_len() != 0 {
            return Err(Error::InvalidConnection("the base has odd coordinates".into()));
        }
        if generators.len() != matrices.len() {
            return Err(Error::InvalidConnection("one matrix per generator is required".into()));
        }
        for x in &generators {
            if !SpaceSignature::same(x.signature(), base) {
                return Err(Error::SignatureMismatch);
            }
        }
        for (a, w) in matrices.iter().enumerate() {
            if w.len() != rank || w.iter().any(|r| r.len() != rank) {
                return Err(Error::InvalidConnection(format!("matrix {a} is not {rank}x{rank}")));
            }
            if w.iter().flatten().any(|f| !SpaceSignature::same(f.signature(), base)) {
                return Err(Error::SignatureMismatch);
            }
        }
        let pivots = pivots(&generators)?;
        let structure = structure_functions(&generators, &pivots)?;
        Ok(ConnectionData {
            base: base.clone(),
            generators,
            rank,
            matrices,
            pivots,
            structure,
        })
    }

    /// Coordinate fields `d/dx_i` for the listed coordinates.
    pub fn along_coordinates(base: &Signature, coords: &[usize], rank: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let gens = coords
            .iter()
            .map(|i| SuperVectorField::coordinate(base, Coord::Even(*i)))
            .collect();
        ConnectionData::new(base, gens, rank, matrices)
    }

    pub fn base(&self) -> &Signature {
        &self.base
    }

    pub fn generators(&self) -> &[SuperVectorField] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `omega` of a field in the span of the generators.
    fn omega_of(&self, coeffs: &[Superfunction]) -> Matrix {
        coeffs
            .iter()
            .zip(&self.matrices)
            .fold(zero_matrix(&self.base, self.rank), |acc, (c, w)| mat_add(&acc, &mat_scale(w, c)))
    }

    /// `X(omega(Y)) - Y(omega(X)) + [omega(X), omega(Y)] - omega([X, Y])`.
    pub fn curvature(&self, a: usize, b: usize) -> Result<Matrix> {
        let n = self.generators.len();
        if a >= n || b >= n {
            return Err(Error::InvalidConnection(format!("generator index out of range ({a}, {b})")));
        }
        let (x, y) = (&self.generators[a], &self.generators[b]);
        let (wx, wy) = (&self.matrices[a], &self.matrices[b]);
        let mut r = mat_sub(&mat_apply(x, wy)?, &mat_apply(y, wx)?);
        r = mat_add(&r, &mat_sub(&mat_mul(wx, wy), &mat_mul(wy, wx)));
        Ok(mat_sub(&r, &self.omega_of(&self.structure[a][b])))
    }

    /// First generator pair with nonzero curvature.
    pub fn non_flat_pair(&self) -> Result<Option<(usize, usize)>> {
        let n = self.generators.len();
        for a in 0..n {
            for b in a + 1..n {
                if !is_zero_matrix(&self.curvature(a, b)?) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_flat(&self) -> Result<bool> {
        Ok(self.non_flat_pair()?.is_none())
    }

    /// Signature of the total space: the base plus one odd coordinate per
    /// frame vector.
    pub fn total_space(&self) -> Result<Signature> {
        let odd: Vec<String> = (1..=self.rank).map(|j| format!("theta{j}")).collect();
        SpaceSignature::new(self.base.even().to_vec(), odd, self.base.params().to_vec())
    }

    /// The lifted generators, without checking flatness.
    pub fn lifted_generators(&self, total: &Signature) -> Result<Vec<SuperVectorField>> {
        let proj = SuperMap::coordinate_projection(total, &self.base)?;
        let mut out = Vec::new();
        for (x, w) in self.generators.iter().zip(&self.matrices) {
            let mut lift = SuperVectorField::zero(total);
            for (c, f) in x.components() {
                lift.add_component(*c, proj.pullback_function(f)?);
            }
            for (j, row) in w.iter().enumerate() {
                for (k, f) in row.iter().enumerate() {
                    let coeff = proj.pullback_function(f)?.mul(&Superfunction::odd_coordinate(total, j));
                    lift.add_component(Coord::Odd(k), coeff);
                }
            }
            out.push(lift);
        }
        Ok(out)
    }

    /// Annihilators of the lifted generators: odd forms on the non-pivot
    /// base directions and one even form per odd coordinate.
    fn annihilators(&self, total: &Signature) -> Result<(Vec<SuperForm>, Vec<SuperForm>)> {
        let proj = SuperMap::coordinate_projection(total, &self.base)?;
        let mut odd = Vec::new();
        for i in 0..self.base.even_len() {
            let c = Coord::Even(i);
            if self.pivots.contains(&c) {
                continue;
            }
            let mut w = SuperForm::differential(total, c);
            for (x, p) in self.generators.iter().zip(&self.pivots) {
                let coeff = proj.pullback_function(&x.get(c))?;
                w = w.sub(&SuperForm::differential(total, *p).left_mul(&coeff));
            }
            odd.push(w);
        }
        let mut even = Vec::new();
        for k in 0..self.rank {
            let mut w = SuperForm::differential(total, Coord::Odd(k));
            for (m, p) in self.matrices.iter().zip(&self.pivots) {
                for (j, row) in m.iter().enumerate() {
                    let coeff = proj
                        .pullback_function(&row[k])?
                        .mul(&Superfunction::odd_coordinate(total, j));
                    w = w.add(&SuperForm::differential(total, *p).left_mul(&coeff));
                }
            }
            even.push(w);
        }
        Ok((odd, even))
    }
}

/// Lifted generators are involutive.
pub fn is_involutive(gens: &[SuperVectorField]) -> Result<bool> {
    let pivots = pivots(gens)?;
    match structure_functions(gens, &pivots) {
        Ok(_) => Ok(true),
        Err(Error::NotInvolutive(..)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// A connection verified to be flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatFoliatedConnection(ConnectionData);

impl FlatFoliatedConnection {
    pub fn new(data: ConnectionData) -> Result<Self> {
        if let Some((a, b)) = data.non_flat_pair()? {
            return Err(Error::NotFlat(a, b));
        }
        Ok(FlatFoliatedConnection(data))
    }

    pub fn data(&self) -> &ConnectionData {
        &self.0
    }

    pub fn into_data(self) -> ConnectionData {
        self.0
    }
}

impl std::ops::Deref for FlatFoliatedConnection {
    type Target = ConnectionData;

    fn deref(&self) -> &ConnectionData {
        &self.0
    }
}

pub fn curvature(c: &ConnectionData, a: usize, b: usize) -> Result<Matrix> {
    c.curvature(a, b)
}

/// The super-foliation of a flat connection: lifted generators and their
/// annihilators on the total space.
pub fn superfoliation_from_connection(c: &ConnectionData) -> Result<FoliationPresentation> {
    if let Some((a, b)) = c.non_flat_pair()? {
        return Err(Error::NotFlat(a, b));
    }
    let total = c.total_space()?;
    let lifts = c.lifted_generators(&total)?;
    if !is_involutive(&lifts)? {
        return Err(Error::NotFlat(0, 0));
    }
    let (odd, even) = c.annihilators(&total)?;
    let f = FoliationPresentation::new(&total, odd, even)?.with_generators(lifts)?;
    debug_assert!(f.generators_annihilated()?);
    Ok(f)
}

/// Reads the connection back from adapted even generators
/// `X_i + sum_{j,k} omega_{jk} xi_j d/dxi_k`.
pub fn connection_from_superfoliation(f: &FoliationPresentation) -> Result<FlatFoliatedConnection> {
    let sig = f.signature();
    let gens = f.generators();
    if gens.is_empty() {
        return Err(Error::NotAdapted("the presentation lists no generators".into()));
    }
    let base = sig.base();
    let rank = sig.odd_len();
    let to_base = |g: &Superfunction| Superfunction::from_base(&base, g.coefficient(0));
    let mut base_gens = Vec::new();
    let mut matrices = Vec::new();
    for (a, x) in gens.iter().enumerate() {
        if !x.is_homogeneous_of(Parity::Even) {
            return Err(Error::NotAdapted(format!("generator {a} is not even")));
        }
        let mut bx = SuperVectorField::zero(&base);
        let mut w = zero_matrix(&base, rank);
        for (c, g) in x.components() {
            match c {
                Coord::Even(_) => {
                    if g.terms().any(|(mask, _)| *mask != 0) {
                        return Err(Error::NotAdapted(format!("generator {a} has odd coordinates in a base component")));
                    }
                    bx.add_component(*c, to_base(g));
                }
                Coord::Odd(k) => {
                    for (mask, coeff) in g.terms() {
                        if mask.count_ones() != 1 {
                            return Err(Error::NotAdapted(format!(
                                "generator {a} is not linear in the odd coordinates"
                            )));
                        }
                        let j = mask.trailing_zeros() as usize;
                        w[j][*k] = Superfunction::from_base(&base, coeff.clone());
                    }
                }
            }
        }
        base_gens.push(bx);
        matrices.push(w);
    }
    let gen_pivots = pivots(gens)?;
    structure_functions(gens, &gen_pivots)?;
    FlatFoliatedConnection::new(ConnectionData::new(&base, base_gens, rank, matrices)?)
}

/// `omega'(X) = g omega(X) g^{-1} - X(g) g^{-1}`.
pub fn gauge_transform(c: &FlatFoliatedConnection, g: &Matrix) -> Result<FlatFoliatedConnection> {
    let base = c.base();
    if g.len() != c.rank() || g.iter().any(|r| r.len() != c.rank()) {
        return Err(Error::InvalidConnection("gauge has the wrong size".into()));
    }
    let inv = mat_inverse(g, base)?;
    let mut matrices = Vec::new();
    for (x, w) in c.generators().iter().zip(c.matrices()) {
        let conj = mat_mul(&mat_mul(g, w), &inv);
        matrices.push(mat_sub(&conj, &mat_mul(&mat_apply(x, g)?, &inv)));
    }
    FlatFoliatedConnection::new(ConnectionData::new(base, c.generators().to_vec(), c.rank(), matrices)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_field, parse_form, parse_function};
    use crate::foliation::gv_class;
    use crate::Scalar;

    fn circle() -> Signature {
        SpaceSignature::parse("x1:circle", &["t".into()]).unwrap()
    }

    fn f(src: &str, sig: &Signature) -> Superfunction {
        parse_function(src, sig).unwrap()
    }

    #[test]
    fn rank_one_example() {
        let base = circle();
        let c = ConnectionData::along_coordinates(&base, &[0], 1, vec![vec![vec![f("t", &base)]]]).unwrap();
        let fol = superfoliation_from_connection(&c).unwrap();
        let total = fol.signature().clone();
        assert_eq!(fol.generators(), &[parse_field("del_x1 + t*theta1*del_theta1", &total).unwrap()]);
        let a = &fol.even_forms()[0];
        assert_eq!(a, &parse_form("dtheta1 + t*theta1*dx1", &total).unwrap());
        assert_eq!(gv_class(a).unwrap().get("x1"), Some(&Scalar::param(0)));
        let back = connection_from_superfoliation(&fol).unwrap();
        assert_eq!(back.data(), &c);
    }

    #[test]
    fn curvature_of_non_flat_pair() {
        let base = SpaceSignature::parse("x:line;y:line", &[]).unwrap();
        let c = ConnectionData::along_coordinates(
            &base,
            &[0, 1],
            1,
            vec![vec![vec![f("y", &base)]], vec![vec![f("0", &base)]]],
        )
        .unwrap();
        assert_eq!(c.curvature(0, 1).unwrap(), vec![vec![f("-1", &base)]]);
        assert_eq!(superfoliation_from_connection(&c), Err(Error::NotFlat(0, 1)));
        let total = c.total_space().unwrap();
        assert!(!is_involutive(&c.lifted_generators(&total).unwrap()).unwrap());
    }

    #[test]
    fn gauge_examples() {
        let base = SpaceSignature::parse("x:line", &[]).unwrap();
        let c = FlatFoliatedConnection::new(
            ConnectionData::along_coordinates(&base, &[0], 2, vec![zero_matrix(&base, 2)]).unwrap(),
        )
        .unwrap();
        let g = vec![vec![f("1", &base), f("x", &base)], vec![f("0", &base), f("1", &base)]];
        let c2 = gauge_transform(&c, &g).unwrap();
        assert_eq!(
            c2.matrices()[0],
            vec![vec![f("0", &base), f("-1", &base)], vec![f("0", &base), f("0", &base)]]
        );
        let singular = vec![vec![f("x", &base), f("0", &base)], vec![f("0", &base), f("1", &base)]];
        assert_eq!(gauge_transform(&c, &singular), Err(Error::NonInvertibleGauge));
    }

    #[test]
    fn pivot_form_rejected_when_violated() {
        let base = SpaceSignature::parse("x:line;y:line", &[]).unwrap();
        let gens = vec![parse_field("del_x + del_y", &base).unwrap(), parse_field("del_y", &base).unwrap()];
        assert!(matches!(
            ConnectionData::new(&base, gens, 1, vec![zero_matrix(&base, 1), zero_matrix(&base, 1)]),
            Err(Error::NotAdapted(_))
        ));
    }
}

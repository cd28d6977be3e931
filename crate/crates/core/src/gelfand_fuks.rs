//! Weight-truncated Chevalley-Eilenberg cohomology of graded Lie algebras,
//! with builders for truncations of `Vect(n)` and of the even part of
//! `Vect(n, m)`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::print_field;
use crate::linalg;
use crate::scalar::Scalar;
use crate::superalgebra::{
    BaseCoefficient, BaseFactor, BaseMonomial, Coord, OddMask, Signature, SpaceSignature,
    Superfunction, Topology,
};
use crate::supercalculus::{vf_bracket, SuperVectorField};

/// Sparse vector over the basis.
pub type Element = BTreeMap<usize, Scalar>;

/// Bracket table entries `((i, j), [(k, c)])` meaning `[e_i, e_j] = sum c e_k`.
pub type BracketList = Vec<((usize, usize), Vec<(usize, Scalar)>)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    name: String,
    labels: Vec<String>,
    weights: Vec<i64>,
    /// Brackets of total weight above this bound are not recorded.
    truncation: Option<i64>,
    /// `[e_i, e_j]` for `i < j`.
    brackets: BTreeMap<(usize, usize), Element>,
}

fn add_into(acc: &mut Element, k: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(k).or_insert_with(Scalar::zero);
    *entry = entry.add(&c);
    if entry.is_zero() {
        acc.remove(&k);
    }
}

impl GradedLieAlgebra {
    /// Builds and validates an algebra. Pairs may be given in either order;
    /// `(j, i)` is stored as `-[e_i, e_j]`.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<(String, i64)>,
        brackets: BracketList,
    ) -> Result<Self> {
        GradedLieAlgebra::build(name.into(), basis, brackets, None)
    }

    /// A weight truncation of an infinite graded algebra: only brackets of
    /// total weight at most `max_weight` are recorded, and the Jacobi
    /// identity is checked on the triples whose brackets all stay within
    /// that bound. Cochain slices of degree `k` and weight `w` are exact
    /// when `w + k <= max_weight`.
    pub fn new_truncated(
        name: impl Into<String>,
        basis: Vec<(String, i64)>,
        brackets: BracketList,
        max_weight: i64,
    ) -> Result<Self> {
        GradedLieAlgebra::build(name.into(), basis, brackets, Some(max_weight))
    }

    fn build(
        name: String,
        basis: Vec<(String, i64)>,
        brackets: BracketList,
        truncation: Option<i64>,
    ) -> Result<Self> {
        let n = basis.len();
        let (labels, weights): (Vec<_>, Vec<_>) = basis.into_iter().unzip();
        let mut table: BTreeMap<(usize, usize), Element> = BTreeMap::new();
        for ((i, j), terms) in brackets {
            if i >= n || j >= n {
                return Err(Error::InvalidAlgebra(format!("index ({i}, {j}) out of range")));
            }
            if i == j {
                if terms.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(Error::InvalidAlgebra(format!("[e{i}, e{i}] must vanish")));
                }
                continue;
            }
            let (key, sign) = if i < j { ((i, j), false) } else { ((j, i), true) };
            let slot = table.entry(key).or_default();
            for (k, c) in terms {
                if k >= n {
                    return Err(Error::InvalidAlgebra(format!("index {k} out of range")));
                }
                if !c.is_zero() && weights[k] != weights[i] + weights[j] {
                    return Err(Error::InvalidAlgebra(format!(
                        "[e{i}, e{j}] has a component of the wrong weight on e{k}"
                    )));
                }
                add_into(slot, k, if sign { c.neg() } else { c });
            }
        }
        table.retain(|_, v| !v.is_empty());
        if let Some(w) = truncation {
            table.retain(|(i, j), _| weights[*i] + weights[*j] <= w);
        }
        let g = GradedLieAlgebra {
            name,
            labels,
            weights,
            truncation,
            brackets: table,
        };
        g.check_jacobi()?;
        Ok(g)
    }

    pub fn abelian(dim: usize) -> Self {
        GradedLieAlgebra {
            name: format!("abelian({dim})"),
            labels: (0..dim).map(|i| format!("e{i}")).collect(),
            weights: vec![0; dim],
            truncation: None,
            brackets: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    pub fn structure_constants(&self) -> impl Iterator<Item = (&(usize, usize), &Element)> {
        self.brackets.iter()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Element {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Element::new(),
            std::cmp::Ordering::Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|(k, c)| (*k, c.neg())).collect())
                .unwrap_or_default(),
        }
    }

    pub fn bracket(&self, u: &Element, v: &Element) -> Element {
        let mut out = Element::new();
        for (i, a) in u {
            for (j, b) in v {
                let ab = a.mul(b);
                for (k, c) in self.bracket_basis(*i, *j) {
                    add_into(&mut out, k, ab.mul(&c));
                }
            }
        }
        out
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let unit = |i: usize| Element::from([(i, Scalar::one())]);
        let w = &self.weights;
        let in_range = |i: usize, j: usize, k: usize| match self.truncation {
            None => true,
            Some(top) => {
                w[i] + w[j] <= top
                    && w[j] + w[k] <= top
                    && w[i] + w[k] <= top
                    && w[i] + w[j] + w[k] <= top
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !in_range(i, j, k) {
                        continue;
                    }
                    let (a, b, c) = (unit(i), unit(j), unit(k));
                    let mut sum = self.bracket(&self.bracket(&a, &b), &c);
                    for (key, v) in self.bracket(&self.bracket(&b, &c), &a) {
                        add_into(&mut sum, key, v);
                    }
                    for (key, v) in self.bracket(&self.bracket(&c, &a), &b) {
                        add_into(&mut sum, key, v);
                    }
                    if !sum.is_empty() {
                        return Err(Error::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The same algebra in the basis `e'_i = sum_a p[a][i] e_a`. `p` must
    /// be invertible and only mix elements of equal weight.
    pub fn change_basis(&self, p: &[Vec<Scalar>]) -> Result<Self> {
        let n = self.dim();
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidAlgebra("change of basis has the wrong shape".into()));
        }
        for (a, row) in p.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() && self.weights[a] != self.weights[i] {
                    return Err(Error::InvalidAlgebra("change of basis mixes weights".into()));
                }
            }
        }
        let inv = linalg::inverse(p)
            .ok_or_else(|| Error::InvalidAlgebra("change of basis is singular".into()))?;
        let column = |i: usize| -> Element {
            let mut e = Element::new();
            for (a, row) in p.iter().enumerate() {
                add_into(&mut e, a, row[i].clone());
            }
            e
        };
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.bracket(&column(i), &column(j));
                let terms: Vec<(usize, Scalar)> = (0..n)
                    .map(|r| {
                        let c = v
                            .iter()
                            .fold(Scalar::zero(), |acc, (a, x)| acc.add(&inv[r][*a].mul(x)));
                        (r, c)
                    })
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                brackets.push(((i, j), terms));
            }
        }
        GradedLieAlgebra::build(
            self.name.clone(),
            self.labels.iter().cloned().zip(self.weights.iter().copied()).collect(),
            brackets,
            self.truncation,
        )
    }
}

// ---------------------------------------------------------------------------
// formal vector field algebras

fn monomials_up_to(vars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                let used: u32 = prefix.iter().sum();
                (0..=max_degree - used).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out.sort_by_key(|a| (a.iter().sum::<u32>(), a.clone()));
    out
}

/// Polynomial vector fields `x^alpha theta_J d_z` with the given weights,
/// bracketed in the symbolic calculus; brackets above `max_weight` are
/// dropped.
fn polynomial_field_algebra(
    name: String,
    sig: &Signature,
    elements: Vec<(u64, Vec<u32>, Coord)>,
    max_weight: i64,
) -> Result<GradedLieAlgebra> {
    let weight_of = |mask: u64, alpha: &[u32]| -> i64 {
        alpha.iter().sum::<u32>() as i64 + mask.count_ones() as i64 - 1
    };
    let field_of = |mask: OddMask, alpha: &[u32], c: Coord| {
        let mono = BaseMonomial::from_factors(alpha.iter().map(|e| BaseFactor::Pow(*e)).collect());
        let f = Superfunction::from_terms(sig, [(mask, BaseCoefficient::monomial(mono, Scalar::one()))]);
        SuperVectorField::component(c, f)
    };
    let mut index: HashMap<(Coord, OddMask, BaseMonomial), usize> = HashMap::new();
    let mut fields = Vec::new();
    let mut basis = Vec::new();
    for (k, (mask, alpha, c)) in elements.iter().enumerate() {
        let x = field_of(*mask, alpha, *c);
        let mono = BaseMonomial::from_factors(alpha.iter().map(|e| BaseFactor::Pow(*e)).collect());
        index.insert((*c, *mask, mono), k);
        basis.push((print_field(&x), weight_of(*mask, alpha)));
        fields.push(x);
    }
    let mut brackets = Vec::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            if basis[i].1 + basis[j].1 > max_weight {
                continue;
            }
            let z = vf_bracket(&fields[i], &fields[j])?;
            let mut terms = Vec::new();
            for (c, f) in z.components() {
                for (mask, coeff) in f.terms() {
                    for (mono, s) in coeff.terms() {
                        let k = index.get(&(*c, *mask, mono.clone())).ok_or_else(|| {
                            Error::InvalidAlgebra("bracket left the enumerated basis".into())
                        })?;
                        terms.push((*k, s.clone()));
                    }
                }
            }
            brackets.push(((i, j), terms));
        }
    }
    GradedLieAlgebra::new_truncated(name, basis, brackets, max_weight)
}

fn line_signature(n: usize, m: usize) -> Result<Signature> {
    let even: Vec<(String, Topology)> = (1..=n).map(|i| (format!("x{i}"), Topology::Line)).collect();
    let odd: Vec<String> = (1..=m).map(|j| format!("theta{j}")).collect();
    let even_ref: Vec<(&str, Topology)> = even.iter().map(|(s, t)| (s.as_str(), *t)).collect();
    let odd_ref: Vec<&str> = odd.iter().map(String::as_str).collect();
    SpaceSignature::with_names(&even_ref, &odd_ref, &[])
}

/// `Vect(n)` truncated at weight `max_weight`.
pub fn build_vect_truncation(n: usize, max_weight: u32) -> Result<GradedLieAlgebra> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("Vect(n) needs n >= 1".into()));
    }
    build_vect_nm_even(n, 0, max_weight).map(|mut g| {
        g.name = format!("Vect({n})");
        g
    })
}

/// Even part of `Vect(n, m)`: `x^alpha theta_J d_x` with `|J|` even and
/// `x^alpha theta_J d_theta` with `|J|` odd, weight `|alpha| + |J| - 1`.
pub fn build_vect_nm_even(n: usize, m: usize, max_weight: u32) -> Result<GradedLieAlgebra> {
    if n + m == 0 {
        return Err(Error::InvalidAlgebra("need at least one coordinate".into()));
    }
    let sig = line_signature(n, m)?;
    let mut elements = Vec::new();
    let top = max_weight as i64 + 1;
    for mask in 0..(1u64 << m) {
        let j = mask.count_ones() as i64;
        if j > top {
            continue;
        }
        for alpha in monomials_up_to(n, (top - j) as u32) {
            for i in 0..n {
                if j % 2 == 0 {
                    elements.push((mask, alpha.clone(), Coord::Even(i)));
                }
            }
            for l in 0..m {
                if j % 2 == 1 {
                    elements.push((mask, alpha.clone(), Coord::Odd(l)));
                }
            }
        }
    }
    elements.sort_by_key(|(mask, alpha, c)| {
        (alpha.iter().sum::<u32>() + mask.count_ones(), *c, mask.count_ones(), *mask, alpha.clone())
    });
    polynomial_field_algebra(format!("Vect({n},{m})_0"), &sig, elements, max_weight as i64)
}

// ---------------------------------------------------------------------------
// cochains

/// Degree-`k` slice of total weight `w`, with the differential into the
/// `(k + 1, w)` slice. `matrix[r][c]` is the coefficient of `target[r]` in
/// `d(basis[c])`.
#[derive(Clone, Debug)]
pub struct CochainComplexSlice {
    pub degree: usize,
    pub weight: i64,
    pub basis: Vec<Vec<usize>>,
    pub target: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<Scalar>>,
}

/// Increasing index lists of length `k` with weight sum `w`.
pub fn cochain_basis(g: &GradedLieAlgebra, k: usize, w: i64) -> Vec<Vec<usize>> {
    let weights = g.weights();
    let (lo, hi) = (
        weights.iter().copied().min().unwrap_or(0),
        weights.iter().copied().max().unwrap_or(0),
    );
    let mut out = Vec::new();
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        start: usize,
        k: usize,
        sum: i64,
        w: i64,
        bounds: (i64, i64),
        weights: &[i64],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let left = (k - cur.len()) as i64;
        if sum + left * bounds.0 > w || sum + left * bounds.1 < w {
            return;
        }
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..weights.len() {
            cur.push(i);
            go(i + 1, k, sum + weights[i], w, bounds, weights, cur, out);
            cur.pop();
        }
    }
    go(0, k, 0, w, (lo, hi), weights, &mut cur, &mut out);
    out
}

/// Inversions of a sequence with distinct entries; `None` on a repeat.
fn sort_sign(v: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(odd)
}

/// `d e^k = -sum_{i<j} c^k_{ij} e^i ^ e^j`, extended as an odd derivation.
pub fn differential(g: &GradedLieAlgebra, cochain: &[usize]) -> BTreeMap<Vec<usize>, Scalar> {
    let mut by_target: HashMap<usize, Vec<(usize, usize, Scalar)>> = HashMap::new();
    for ((i, j), v) in g.structure_constants() {
        for (k, c) in v {
            by_target.entry(*k).or_default().push((*i, *j, c.clone()));
        }
    }
    differential_with(&by_target, cochain)
}

fn differential_with(
    by_target: &HashMap<usize, Vec<(usize, usize, Scalar)>>,
    cochain: &[usize],
) -> BTreeMap<Vec<usize>, Scalar> {
    let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for (l, s) in cochain.iter().enumerate() {
        let Some(pairs) = by_target.get(s) else { continue };
        for (i, j, c) in pairs {
            let mut v = Vec::with_capacity(cochain.len() + 1);
            v.extend_from_slice(&cochain[..l]);
            v.push(*i);
            v.push(*j);
            v.extend_from_slice(&cochain[l + 1..]);
            let Some(odd) = sort_sign(&mut v) else { continue };
            // (-1)^l from passing d over l odd generators, then the minus
            let negative = odd ^ (l % 2 == 1) ^ true;
            let term = if negative { c.neg() } else { c.clone() };
            let entry = out.entry(v).or_insert_with(Scalar::zero);
            *entry = entry.add(&term);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn cochain_slice(g: &GradedLieAlgebra, degree: usize, weight: i64) -> CochainComplexSlice {
    let mut by_target: HashMap<usize, Vec<(usize, usize, Scalar)>> = HashMap::new();
    for ((i, j), v) in g.structure_constants() {
        for (k, c) in v {
            by_target.entry(*k).or_default().push((*i, *j, c.clone()));
        }
    }
    let basis = cochain_basis(g, degree, weight);
    let target = cochain_basis(g, degree + 1, weight);
    let row_of: HashMap<&Vec<usize>, usize> = target.iter().enumerate().map(|(r, t)| (t, r)).collect();
    let mut matrix = vec![vec![Scalar::zero(); basis.len()]; target.len()];
    for (c, b) in basis.iter().enumerate() {
        for (t, v) in differential_with(&by_target, b) {
            matrix[row_of[&t]][c] = v;
        }
    }
    CochainComplexSlice {
        degree,
        weight,
        basis,
        target,
        matrix,
    }
}

fn slice_rank(slice: &CochainComplexSlice) -> usize {
    if slice.basis.is_empty() || slice.target.is_empty() {
        return 0;
    }
    let rational: Option<Vec<Vec<BigRational>>> = slice
        .matrix
        .iter()
        .map(|row| row.iter().map(Scalar::as_rational).collect())
        .collect();
    match rational {
        Some(m) => linalg::rational_rank(&m),
        None => linalg::rank(&slice.matrix),
    }
}

/// Betti numbers `b_0..=b_{max_degree}` of the weight-`weight` slice.
pub fn ce_betti(g: &GradedLieAlgebra, max_degree: usize, weight: i64) -> Vec<usize> {
    let data: Vec<(usize, usize)> = (0..=max_degree)
        .into_par_iter()
        .map(|k| {
            let slice = cochain_slice(g, k, weight);
            (slice.basis.len(), slice_rank(&slice))
        })
        .collect();
    (0..=max_degree)
        .map(|k| {
            let (dim, rank_out) = data[k];
            let rank_in = if k == 0 { 0 } else { data[k - 1].1 };
            dim - rank_out - rank_in
        })
        .collect()
}

pub fn ce_betti_all_weights(
    g: &GradedLieAlgebra,
    max_degree: usize,
    weights: impl IntoIterator<Item = i64>,
) -> Vec<(i64, Vec<usize>)> {
    let weights: Vec<i64> = weights.into_iter().collect();
    weights
        .into_par_iter()
        .map(|w| (w, ce_betti(g, max_degree, w)))
        .collect()
}

// ---------------------------------------------------------------------------
// reports

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    /// `Vect(n, m)_0`, equal to `Vect(n)` when `m = 0`.
    Vect { n: usize, m: usize },
    Abelian { dim: usize },
}

impl AlgebraSpec {
    pub fn name(&self) -> String {
        match self {
            AlgebraSpec::Vect { n, m: 0 } => format!("Vect({n})"),
            AlgebraSpec::Vect { n, m } => format!("Vect({n},{m})_0"),
            AlgebraSpec::Abelian { dim } => format!("abelian({dim})"),
        }
    }

    pub fn build(&self, max_weight: u32) -> Result<GradedLieAlgebra> {
        match *self {
            AlgebraSpec::Vect { n, m: 0 } => build_vect_truncation(n, max_weight),
            AlgebraSpec::Vect { n, m } => build_vect_nm_even(n, m, max_weight),
            AlgebraSpec::Abelian { dim } => Ok(GradedLieAlgebra::abelian(dim)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub algebra: String,
    #[serde(rename = "W")]
    pub truncation: u32,
    pub weight: i64,
    pub betti: Vec<usize>,
    pub stable: bool,
}

/// Betti numbers at truncation `W`, flagged stable when the truncation at
/// `W + 1` gives the same numbers. The default `W` is the smallest one for
/// which every slice used is exact, `max_degree + max(weight, 0)`.
pub fn betti_report(
    spec: AlgebraSpec,
    max_degree: usize,
    weight: i64,
    truncation: Option<u32>,
) -> Result<BettiReport> {
    let w = truncation.unwrap_or(max_degree as u32 + weight.max(0) as u32);
    let (a, b) = rayon::join(|| spec.build(w), || spec.build(w + 1));
    let betti = ce_betti(&a?, max_degree, weight);
    let next = ce_betti(&b?, max_degree, weight);
    Ok(BettiReport {
        algebra: spec.name(),
        truncation: w,
        weight,
        stable: betti == next,
        betti,
    })
}

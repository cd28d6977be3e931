#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use supergv::superalgebra::{BaseCoefficient, BaseFactor, BaseMonomial};
use supergv::supercalculus::FormMonomial;
use supergv::connection::{gauge_transform, identity_matrix, ConnectionData, FlatFoliatedConnection, Matrix};
use supergv::{Coord, Parity, Scalar, Signature, SpaceSignature, SuperForm, SuperVectorField, Superfunction, Topology};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One circle, one line, two odd coordinates and a parameter.
pub fn mixed() -> Signature {
    SpaceSignature::parse("x:circle;y:line;theta1;theta2", &["t".into()]).unwrap()
}

pub fn small_scalar(r: &mut ChaCha8Rng, sig: &Signature) -> Scalar {
    let c = Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=2));
    if !sig.params().is_empty() && r.gen_bool(0.2) {
        c.mul(&Scalar::param(0))
    } else {
        c
    }
}

pub fn base_monomial(r: &mut ChaCha8Rng, sig: &Signature, max: u32) -> BaseMonomial {
    let factors = (0..sig.even_len())
        .map(|i| match sig.topology(i) {
            Topology::Line => BaseFactor::Pow(r.gen_range(0..=max)),
            Topology::Circle => match r.gen_range(0..3) {
                0 => BaseFactor::Pow(0),
                1 => BaseFactor::Cos(r.gen_range(1..=max.max(1))),
                _ => BaseFactor::Sin(r.gen_range(1..=max.max(1))),
            },
        })
        .collect();
    BaseMonomial::from_factors(factors)
}

pub fn base_function(r: &mut ChaCha8Rng, sig: &Signature, terms: usize, max: u32) -> BaseCoefficient {
    let mut c = BaseCoefficient::zero();
    for _ in 0..terms {
        c = c.add(&BaseCoefficient::monomial(base_monomial(r, sig, max), small_scalar(r, sig)));
    }
    c
}

/// Random function; `parity` restricts to homogeneous terms.
pub fn function(r: &mut ChaCha8Rng, sig: &Signature, parity: Option<Parity>, terms: usize) -> Superfunction {
    let q = sig.odd_len();
    let mut f = Superfunction::zero(sig);
    for _ in 0..terms {
        let mask = loop {
            let m: u64 = r.gen_range(0..(1u64 << q));
            if parity.is_none_or(|p| Parity::from_count(m.count_ones()) == p) {
                break m;
            }
        };
        let c = BaseCoefficient::monomial(base_monomial(r, sig, 2), small_scalar(r, sig));
        f = f.add(&Superfunction::from_terms(sig, [(mask, c)]));
    }
    f
}

pub fn form_monomial(r: &mut ChaCha8Rng, sig: &Signature, max_degree: u32) -> FormMonomial {
    let mut dx = 0u64;
    let mut dtheta = vec![0u32; sig.odd_len()];
    for _ in 0..r.gen_range(0..=max_degree) {
        if r.gen_bool(0.5) && sig.even_len() > 0 {
            dx |= 1 << r.gen_range(0..sig.even_len());
        } else if sig.odd_len() > 0 {
            dtheta[r.gen_range(0..sig.odd_len())] += 1;
        }
    }
    FormMonomial::new(dx, dtheta)
}

/// Random form; `parity` restricts to homogeneous terms of total parity.
pub fn form(r: &mut ChaCha8Rng, sig: &Signature, parity: Option<Parity>, terms: usize) -> SuperForm {
    let mut w = SuperForm::zero(sig);
    for _ in 0..terms {
        let m = form_monomial(r, sig, 2);
        let p = parity.map(|p| p + m.parity());
        w = w.add(&SuperForm::monomial(function(r, sig, p, 1), m));
    }
    w
}

pub fn field(r: &mut ChaCha8Rng, sig: &Signature, parity: Parity, terms: usize) -> SuperVectorField {
    let coords: Vec<Coord> = sig.coords().collect();
    let mut x = SuperVectorField::zero(sig);
    for _ in 0..terms {
        let c = coords[r.gen_range(0..coords.len())];
        let p = parity + supergv::superalgebra::coord_parity(c);
        x.add_component(c, function(r, sig, Some(p), 1));
    }
    x
}

pub fn parity_of(r: &mut ChaCha8Rng) -> Parity {
    if r.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Random trig polynomial in circle coordinate `coord` with `modes` harmonics.
pub fn trig(r: &mut ChaCha8Rng, coord: usize, modes: u32) -> BaseCoefficient {
    let mut c = BaseCoefficient::constant(Scalar::from_ratio(r.gen_range(-4..=4), r.gen_range(1..=3)));
    for k in 1..=modes {
        for f in [BaseFactor::Cos(k), BaseFactor::Sin(k)] {
            if r.gen_bool(0.6) {
                let s = Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=2));
                c = c.add(&BaseCoefficient::monomial(BaseMonomial::single(coord, f), s));
            }
        }
    }
    c
}

/// `dtheta1 + theta1 * beta` with `beta` a closed base 1-form; returns the
/// form and the expected class per even coordinate.
pub fn integrable(sig: &Signature, beta: &[BaseCoefficient]) -> (SuperForm, Vec<Scalar>) {
    let th = Superfunction::odd_coordinate(sig, 0);
    let mut a = SuperForm::differential(sig, Coord::Odd(0));
    let mut class = Vec::new();
    for (i, h) in beta.iter().enumerate() {
        let f = th.mul(&Superfunction::from_base(sig, h.clone()));
        a = a.add(&SuperForm::differential(sig, Coord::Even(i)).left_mul(&f));
        class.push(h.mode_zero(i).constant_term());
    }
    (a, class)
}

/// The one-parameter example family plus random trig deformations on several spaces.
pub fn corpus(seed: u64) -> Vec<(SuperForm, Vec<Scalar>)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let s11 = SpaceSignature::parse("x:circle;theta1", &["t".into()]).unwrap();
    for t in [Scalar::param(0), Scalar::from_int(-2), Scalar::from_int(0), Scalar::from_ratio(1, 3), Scalar::from_int(5)] {
        out.push(integrable(&s11, &[BaseCoefficient::constant(t)]));
    }
    for _ in 0..8 {
        let h = trig(&mut r, 0, 2);
        out.push(integrable(&s11, &[h]));
    }
    let q2 = SpaceSignature::parse("x:circle;theta1;theta2", &["t".into()]).unwrap();
    for _ in 0..4 {
        let h = trig(&mut r, 0, 2);
        out.push(integrable(&q2, &[h]));
    }
    let torus = SpaceSignature::parse("x:circle;y:circle;theta1", &["t".into()]).unwrap();
    for _ in 0..4 {
        let hx = trig(&mut r, 0, 1);
        let hy = trig(&mut r, 1, 1);
        out.push(integrable(&torus, &[hx, hy]));
    }
    out
}

pub fn constant(sig: &Signature, r: &mut ChaCha8Rng) -> Superfunction {
    Superfunction::constant(sig, Scalar::from_ratio(r.gen_range(-3..=3), r.gen_range(1..=3)))
}

pub fn base(sig: &Signature, c: BaseCoefficient) -> Superfunction {
    Superfunction::from_base(sig, c)
}

/// A trig function of both torus coordinates.
pub fn torus_function(r: &mut ChaCha8Rng) -> BaseCoefficient {
    let mut c = BaseCoefficient::zero();
    for _ in 0..3 {
        let pick = |r: &mut ChaCha8Rng| match r.gen_range(0..3) {
            0 => BaseFactor::Pow(0),
            1 => BaseFactor::Cos(r.gen_range(1..=2)),
            _ => BaseFactor::Sin(r.gen_range(1..=2)),
        };
        let m = BaseMonomial::from_factors(vec![pick(r), pick(r)]);
        c = c.add(&BaseCoefficient::monomial(m, Scalar::from_ratio(r.gen_range(-3..=3), 2)));
    }
    c
}

pub fn flat_rank_one(r: &mut ChaCha8Rng, on_torus: bool) -> ConnectionData {
    if on_torus {
        let sig = torus();
        let h = torus_function(r);
        let wx = constant(&sig, r).add(&base(&sig, h.derivative(0)));
        let wy = constant(&sig, r).add(&base(&sig, h.derivative(1)));
        ConnectionData::along_coordinates(&sig, &[0, 1], 1, vec![vec![vec![wx]], vec![vec![wy]]]).unwrap()
    } else {
        let sig = circle();
        let w = base(&sig, trig(r, 0, 2));
        ConnectionData::along_coordinates(&sig, &[0], 1, vec![vec![vec![w]]]).unwrap()
    }
}

pub fn constant_matrix(sig: &Signature, r: &mut ChaCha8Rng) -> Matrix {
    (0..2).map(|_| (0..2).map(|_| constant(sig, r)).collect()).collect()
}

pub fn scale_add(a: &Matrix, alpha: &Superfunction, beta: &Superfunction) -> Matrix {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let v = alpha.mul(x);
                    if i == j {
                        v.add(beta)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

/// Commuting constant matrices moved by a unipotent gauge.
pub fn flat_rank_two(r: &mut ChaCha8Rng, on_torus: bool) -> ConnectionData {
    let sig = if on_torus { torus() } else { circle() };
    let a = constant_matrix(&sig, r);
    let coords: Vec<usize> = (0..sig.even_len()).collect();
    let mats: Vec<Matrix> = coords
        .iter()
        .map(|_| {
            let (alpha, beta) = (constant(&sig, r), constant(&sig, r));
            scale_add(&a, &alpha, &beta)
        })
        .collect();
    let c = FlatFoliatedConnection::new(ConnectionData::along_coordinates(&sig, &coords, 2, mats).unwrap()).unwrap();
    let f = if on_torus { base(&sig, torus_function(r)) } else { base(&sig, trig(r, 0, 2)) };
    let mut g = identity_matrix(&sig, 2);
    g[0][1] = f;
    g[1][1] = constant(&sig, r).add(&Superfunction::constant(&sig, Scalar::from_int(5)));
    gauge_transform(&c, &g).unwrap().into_data()
}

pub fn random_flat(seed: u64) -> Vec<ConnectionData> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for i in 0..20 {
        let on_torus = i % 2 == 1;
        out.push(if i < 10 { flat_rank_one(&mut r, on_torus) } else { flat_rank_two(&mut r, on_torus) });
    }
    out
}

pub fn circle() -> Signature {
    SpaceSignature::parse("x:circle", &["t".into()]).unwrap()
}

pub fn torus() -> Signature {
    SpaceSignature::parse("x:circle;y:circle", &["t".into()]).unwrap()
}

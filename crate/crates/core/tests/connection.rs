mod common;

use common::*;
use rand::Rng;
use supergv::connection::{
    connection_from_superfoliation, curvature, gauge_transform, identity_matrix, is_involutive, is_zero_matrix,
    superfoliation_from_connection, ConnectionData, FlatFoliatedConnection, Matrix,
};
use supergv::foliation::gv_class;
use supergv::{Coord, Error, Scalar, Superfunction};

#[test]
fn round_trip_recovers_matrices() {
    for c in random_flat(1) {
        assert!(c.is_flat().unwrap());
        let fol = superfoliation_from_connection(&c).unwrap();
        assert!(fol.generators_annihilated().unwrap());
        let back = connection_from_superfoliation(&fol).unwrap();
        assert_eq!(back.matrices(), c.matrices());
        assert_eq!(back.generators(), c.generators());
    }
}

#[test]
fn flatness_matches_involutivity() {
    let mut r = rng(2);
    for c in random_flat(2) {
        let total = c.total_space().unwrap();
        assert!(is_involutive(&c.lifted_generators(&total).unwrap()).unwrap());
    }
    let sig = torus();
    for _ in 0..10 {
        let rank = r.gen_range(1..=2);
        let mats: Vec<Matrix> = (0..2)
            .map(|_| (0..rank).map(|_| (0..rank).map(|_| base(&sig, torus_function(&mut r))).collect()).collect())
            .collect();
        let c = ConnectionData::along_coordinates(&sig, &[0, 1], rank, mats).unwrap();
        let total = c.total_space().unwrap();
        let involutive = is_involutive(&c.lifted_generators(&total).unwrap()).unwrap();
        assert_eq!(c.is_flat().unwrap(), involutive);
        if !involutive {
            assert!(matches!(superfoliation_from_connection(&c), Err(Error::NotFlat(..))));
        }
    }
}

/// Parallel transport `s' = -omega(X) s` around the square
/// `p -> p + eps e_x -> p + eps (e_x + e_y) -> p + eps e_y -> p`.
fn holonomy(c: &ConnectionData, p: [f64; 2], eps: f64, steps: usize) -> Vec<Vec<f64>> {
    let n = c.rank();
    let eval = |m: &Matrix, q: [f64; 2]| -> Vec<Vec<f64>> {
        m.iter().map(|row| row.iter().map(|f| f.eval_body_f64(&q, &[0.0])).collect()).collect()
    };
    let rhs = |q: [f64; 2], dir: [f64; 2], s: &[f64]| -> Vec<f64> {
        let wx = eval(&c.matrices()[0], q);
        let wy = eval(&c.matrices()[1], q);
        (0..n)
            .map(|j| -(0..n).map(|k| (dir[0] * wx[j][k] + dir[1] * wy[j][k]) * s[k]).sum::<f64>())
            .collect()
    };
    let legs = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    let mut out = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut s: Vec<f64> = (0..n).map(|k| if k == col { 1.0 } else { 0.0 }).collect();
        let mut q = p;
        let h = eps / steps as f64;
        for dir in legs {
            for _ in 0..steps {
                let at = |t: f64| [q[0] + dir[0] * t, q[1] + dir[1] * t];
                let add = |a: &[f64], b: &[f64], f: f64| a.iter().zip(b).map(|(x, y)| x + f * y).collect::<Vec<_>>();
                let k1 = rhs(at(0.0), dir, &s);
                let k2 = rhs(at(h / 2.0), dir, &add(&s, &k1, h / 2.0));
                let k3 = rhs(at(h / 2.0), dir, &add(&s, &k2, h / 2.0));
                let k4 = rhs(at(h), dir, &add(&s, &k3, h));
                for k in 0..n {
                    s[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
                }
                q = at(h);
            }
        }
        for (row, v) in out.iter_mut().zip(&s) {
            row[col] = *v;
        }
    }
    out
}

#[test]
fn curvature_matches_holonomy() {
    let mut r = rng(3);
    let sig = torus();
    let eps = 1e-2;
    for _ in 0..6 {
        let rank = r.gen_range(1..=2);
        let mats: Vec<Matrix> = (0..2)
            .map(|_| (0..rank).map(|_| (0..rank).map(|_| base(&sig, torus_function(&mut r))).collect()).collect())
            .collect();
        let c = ConnectionData::along_coordinates(&sig, &[0, 1], rank, mats).unwrap();
        let p = [r.gen_range(0.0..6.0), r.gen_range(0.0..6.0)];
        let h = holonomy(&c, p, eps, 20);
        let big_r = curvature(&c, 0, 1).unwrap();
        for j in 0..rank {
            for k in 0..rank {
                let id = if j == k { 1.0 } else { 0.0 };
                let expected = id - eps * eps * big_r[j][k].eval_body_f64(&p, &[0.0]);
                assert!((h[j][k] - expected).abs() < 20.0 * eps.powi(3), "{} vs {}", h[j][k], expected);
            }
        }
    }
    for c in random_flat(3).into_iter().filter(|c| c.base().even_len() == 2) {
        let h = holonomy(&c, [0.7, 1.9], eps, 20);
        for (j, row) in h.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let id = if j == k { 1.0 } else { 0.0 };
                assert!((v - id).abs() < 20.0 * eps.powi(3));
            }
        }
    }
}

#[test]
fn gauges_preserve_flatness_and_class() {
    let mut r = rng(4);
    for c in random_flat(4) {
        assert!((0..c.generators().len()).all(|a| (0..c.generators().len())
            .all(|b| is_zero_matrix(&curvature(&c, a, b).unwrap()))));
        let flat = FlatFoliatedConnection::new(c.clone()).unwrap();
        let sig = c.base().clone();
        if c.rank() == 1 {
            let class = gv_class(superfoliation_from_connection(&c).unwrap().defining_form().unwrap()).unwrap();
            let g = vec![vec![constant(&sig, &mut r).add(&Superfunction::constant(&sig, Scalar::from_int(7)))]];
            let moved = gauge_transform(&flat, &g).unwrap();
            assert_eq!(moved.matrices(), c.matrices());
            let fol = superfoliation_from_connection(moved.data()).unwrap();
            let a = fol.defining_form().unwrap();
            assert_eq!(gv_class(a).unwrap(), class);
            let total = a.signature();
            let unit = constant(total, &mut r).add(&Superfunction::constant(total, Scalar::from_int(4)));
            let scaled = a.left_mul(&unit);
            assert_eq!(gv_class(&scaled).unwrap(), class);
        } else {
            let mut g = identity_matrix(&sig, 2);
            g[1][0] = base(&sig, trig(&mut r, 0, 1));
            let moved = gauge_transform(&flat, &g).unwrap();
            assert!(moved.is_flat().unwrap());
            let back = connection_from_superfoliation(&superfoliation_from_connection(moved.data()).unwrap()).unwrap();
            assert_eq!(back.matrices(), moved.matrices());
        }
    }
}

#[test]
fn rank_one_class_is_the_connection_coefficient() {
    let sig = circle();
    for c in random_flat(5).into_iter().filter(|c| c.rank() == 1 && c.base().even_len() == 1) {
        let w = c.matrices()[0][0][0].body_coefficient();
        let fol = superfoliation_from_connection(&c).unwrap();
        let class = gv_class(fol.defining_form().unwrap()).unwrap();
        assert_eq!(class.get("x"), Some(&w.constant_term()));
    }
    let t = Superfunction::param(&sig, "t").unwrap();
    let c = ConnectionData::along_coordinates(&sig, &[0], 1, vec![vec![vec![t]]]).unwrap();
    let fol = superfoliation_from_connection(&c).unwrap();
    assert_eq!(gv_class(fol.defining_form().unwrap()).unwrap().get("x"), Some(&Scalar::param(0)));
    let total = fol.signature();
    assert_eq!(total.odd_len(), 1);
    assert!(fol.generators()[0].get(Coord::Odd(0)).theta_degree() == 1);
}

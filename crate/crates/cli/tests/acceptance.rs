//! One line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;
use supergv::connection::{
    connection_from_superfoliation, gauge_transform, superfoliation_from_connection, ConnectionData,
    FlatFoliatedConnection,
};
use supergv::expr::{parse_form, parse_function};
use supergv::foliation::{
    find_transversal, godbillon_vey_form, gv_class, normalize_transversal, solve_b, solve_b_linear, OracleBound,
};
use supergv::gelfand_fuks::{betti_report, build_vect_truncation, ce_betti, AlgebraSpec};
use supergv::supercalculus::pullback;
use supergv::{Coord, Error, Scalar, SpaceSignature, SuperMap, SuperVectorField, Superfunction};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn cli(args: &[&str]) -> Result<(Value, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_supergv"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit {:?}: {v}", out.status.code()))?;
    Ok((v, elapsed))
}

fn criterion_1() -> Check {
    let mut worst = Duration::ZERO;
    for t in ["-2", "0", "1/3", "5"] {
        let form = format!("dtheta1 + ({t})*theta1*dx1");
        let (v, dt) = cli(&["gv", "--space", "x1:circle;theta1", "--form", &form])?;
        ensure(v["class"]["x1"] == t, || format!("t = {t}: class {}", v["class"]))?;
        ensure(dt < Duration::from_secs(1), || format!("t = {t}: {dt:?}"))?;
        worst = worst.max(dt);
    }
    Ok(format!("classes -2, 0, 1/3, 5 exact; slowest case {worst:.2?} (limit 1s)"))
}

fn criterion_2() -> Check {
    let corpus = common::corpus(2024);
    let mut r = common::rng(2);
    let mut twisted = 0;
    for (n, (a, expected)) in corpus.iter().enumerate() {
        let sig = a.signature();
        let big_a = godbillon_vey_form(a).map_err(|e| e.to_string())?;
        ensure(big_a.d().map_err(|e| e.to_string())?.is_zero(), || format!("form {n}: dA != 0"))?;

        let theta = find_transversal(a).map_err(|e| e.to_string())?;
        let reference = theta.lie_derivative(a).map_err(|e| e.to_string())?.project_base();
        for _ in 0..5 {
            let i = r.gen_range(0..sig.even_len());
            let h = Superfunction::from_base(sig, common::trig(&mut r, i, 2));
            let shift =
                SuperVectorField::component(Coord::Even(i), Superfunction::odd_coordinate(sig, 0).mul(&h));
            let other = normalize_transversal(&theta.add(&shift), a).map_err(|e| e.to_string())?;
            let projected = other.lie_derivative(a).map_err(|e| e.to_string())?.project_base();
            ensure(projected == reference, || format!("form {n}: transversal dependence"))?;
        }

        let class = |w: &supergv::SuperForm| -> Result<Vec<Scalar>, String> {
            let c = gv_class(w).map_err(|e| e.to_string())?;
            Ok(c.classes.into_iter().map(|(_, s)| s).collect())
        };
        ensure(&class(a)? == expected, || format!("form {n}: class"))?;
        let c = Scalar::from_ratio(r.gen_range(1..=7), r.gen_range(1..=5)).neg();
        ensure(&class(&a.left_mul(&Superfunction::constant(sig, c)))? == expected, || {
            format!("form {n}: constant rescaling")
        })?;
        if sig.odd_len() == 2 {
            let g = Superfunction::from_base(sig, common::trig(&mut r, 0, 2));
            let unit = Superfunction::one(sig)
                .add(&g.mul(&Superfunction::odd_coordinate(sig, 0)).mul(&Superfunction::odd_coordinate(sig, 1)));
            ensure(&class(&a.left_mul(&unit))? == expected, || format!("form {n}: unit rescaling"))?;
            twisted += 1;
        }
    }
    ensure(corpus.len() >= 20 && twisted > 0, || "corpus too small".into())?;
    Ok(format!(
        "{} forms: dA = 0, 5 transversals each, class invariant (constant f, and 1 + g theta1 theta2 on {twisted} forms)",
        corpus.len()
    ))
}

fn criterion_3() -> Check {
    let corpus = common::corpus(2024);
    let mut unknowns = 0;
    for (n, (a, _)) in corpus.iter().enumerate() {
        let theta = find_transversal(a).map_err(|e| e.to_string())?;
        let b = solve_b(a, &theta).map_err(|e| e.to_string())?;
        ensure(b.d().map_err(|e| e.to_string())?.is_zero(), || format!("form {n}: db != 0"))?;
        let oracle = solve_b_linear(a, OracleBound::for_form(a)).map_err(|e| e.to_string())?;
        ensure(oracle.unique, || format!("form {n}: oracle solution not unique"))?;
        ensure(oracle.solution.as_ref() == Some(&b), || format!("form {n}: oracle disagrees"))?;
        unknowns = unknowns.max(oracle.unknowns);
    }
    let sig = SpaceSignature::parse("x1:line;theta1;theta2", &[]).map_err(|e| e.to_string())?;
    let witness = parse_form("dtheta1 + x1*dtheta2", &sig).map_err(|e| e.to_string())?;
    let theta = find_transversal(&witness).map_err(|e| e.to_string())?;
    ensure(matches!(solve_b(&witness, &theta), Err(Error::NotIntegrable)), || {
        "witness accepted by constructive path".into()
    })?;
    let oracle = solve_b_linear(&witness, OracleBound::for_form(&witness)).map_err(|e| e.to_string())?;
    ensure(oracle.solution.is_none(), || "witness accepted by oracle".into())?;
    Ok(format!(
        "{} forms agree with the unique oracle solution (up to {unknowns} unknowns), db = 0; witness rejected twice",
        corpus.len()
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let (v, _) = cli(&["ce-betti", "--algebra", "vect", "--n", "0", "--m", "1", "--even-part", "--max-degree", "3"])?;
    let dt = start.elapsed();
    ensure(v["betti"] == serde_json::json!([1, 1, 0, 0]), || format!("betti {}", v["betti"]))?;
    ensure(dt < Duration::from_secs(1), || format!("{dt:?}"))?;
    Ok(format!("Vect(0,1)_0 betti (1,1,0,0) in {dt:.2?} (limit 1s)"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let report = betti_report(AlgebraSpec::Vect { n: 1, m: 0 }, 3, 0, Some(2)).map_err(|e| e.to_string())?;
    let at3 = ce_betti(&build_vect_truncation(1, 3).map_err(|e| e.to_string())?, 3, 0);
    let dt = start.elapsed();
    ensure(report.betti == [1, 0, 0, 1], || format!("W=2 betti {:?}", report.betti))?;
    ensure(at3 == [1, 0, 0, 1], || format!("W=3 betti {at3:?}"))?;
    ensure(report.stable, || "stabilization flag false".into())?;
    ensure(dt < Duration::from_secs(60), || format!("{dt:?}"))?;
    Ok(format!("Vect(1) weight 0 betti (1,0,0,1) at W=2 and W=3, stable, in {dt:.2?} (limit 60s)"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let cs = common::random_flat(2024);
    let ranks: Vec<usize> = cs.iter().map(ConnectionData::rank).collect();
    for (n, c) in cs.iter().enumerate() {
        let k = c.generators().len();
        for a in 0..k {
            for b in 0..k {
                let r = c.curvature(a, b).map_err(|e| e.to_string())?;
                ensure(supergv::connection::is_zero_matrix(&r), || format!("connection {n}: curvature"))?;
            }
        }
        let fol = superfoliation_from_connection(c).map_err(|e| e.to_string())?;
        let back = connection_from_superfoliation(&fol).map_err(|e| e.to_string())?;
        ensure(back.matrices() == c.matrices(), || format!("connection {n}: matrices differ"))?;
    }
    let dt = start.elapsed();
    ensure(cs.len() >= 20 && ranks.contains(&1) && ranks.contains(&2), || "family too small".into())?;
    ensure(dt < Duration::from_secs(30), || format!("{dt:?}"))?;
    Ok(format!("{} flat connections (ranks 1 and 2, S1 and T2) round-trip exactly in {dt:.2?} (limit 30s)", cs.len()))
}

fn criterion_7() -> Check {
    let base = SpaceSignature::parse("x1:circle", &["t".into()]).map_err(|e| e.to_string())?;
    let t = Superfunction::param(&base, "t").map_err(|e| e.to_string())?;
    let c = ConnectionData::along_coordinates(&base, &[0], 1, vec![vec![vec![t]]]).map_err(|e| e.to_string())?;
    let class_of = |c: &ConnectionData| -> Result<Option<Scalar>, String> {
        let fol = superfoliation_from_connection(c).map_err(|e| e.to_string())?;
        let a = fol.defining_form().map_err(|e| e.to_string())?;
        Ok(gv_class(a).map_err(|e| e.to_string())?.get("x1").cloned())
    };
    ensure(class_of(&c)? == Some(Scalar::param(0)), || "class is not t".into())?;
    let flat = FlatFoliatedConnection::new(c).map_err(|e| e.to_string())?;
    for g in ["2", "-1/3", "7"] {
        let g = vec![vec![parse_function(g, &base).map_err(|e| e.to_string())?]];
        let moved = gauge_transform(&flat, &g).map_err(|e| e.to_string())?;
        ensure(class_of(moved.data())? == Some(Scalar::param(0)), || "gauge changed the class".into())?;
    }
    Ok("rank 1, omega = t: class t, unchanged by gauges 2, -1/3, 7".into())
}

fn criterion_8() -> Check {
    let circle = SpaceSignature::parse("x:circle;theta", &["t".into()]).map_err(|e| e.to_string())?;
    let torus = SpaceSignature::parse("x:circle;y:circle;theta", &["t".into()]).map_err(|e| e.to_string())?;
    let a = parse_form("dtheta + t*theta*dx", &circle).map_err(|e| e.to_string())?;
    let proj = SuperMap::coordinate_projection(&torus, &circle).map_err(|e| e.to_string())?;
    let pulled = pullback(&proj, &a).map_err(|e| e.to_string())?;
    let class = gv_class(&pulled).map_err(|e| e.to_string())?;
    let down = gv_class(&a).map_err(|e| e.to_string())?;
    ensure(down.get("x") == Some(&Scalar::param(0)), || "base class is not t".into())?;
    ensure(class.get("x") == Some(&Scalar::param(0)), || format!("x class {:?}", class.get("x")))?;
    ensure(class.get("y") == Some(&Scalar::zero()), || format!("y class {:?}", class.get("y")))?;
    Ok("pulled-back class: t on x, 0 on y".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("example class reproduction", criterion_1),
        ("closedness and invariance suite", criterion_2),
        ("solve_b oracle equivalence", criterion_3),
        ("CE betti of Vect(0,1)_0", criterion_4),
        ("CE betti of truncated Vect(1)", criterion_5),
        ("connection round trip", criterion_6),
        ("connection class under gauges", criterion_7),
        ("naturality under projection", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let dt = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS [{name}] {detail} ({dt:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL [{name}] {why} ({dt:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

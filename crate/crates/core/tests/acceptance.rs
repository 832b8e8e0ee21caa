//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::time::Instant;

use paramac::cherednik_pairing::{kernel_identity, oracle_agrees, vanishes_through, Pairing};
use paramac::daha_ops::{check_relations, random_poly};
use paramac::group_ring::{LaurentPoly, TMode};
use paramac::macdonald_engine::{is_q_product, Engine};
use paramac::module_characters::{check_module, Family, LieData};
use paramac::root_system::{RootSystem, Weight};
use paramac::weyl_group::{length_lemmas_check, longest_element, ParabolicJ};
use rand::SeedableRng;

type Outcome = Result<String, String>;

fn rs(name: &str) -> RootSystem {
    RootSystem::from_name(name).unwrap()
}

fn weight_box(rank: usize, r: i64) -> Vec<Weight> {
    paramac::cli::weight_box(rank, r)
}

fn subsets(rs: &RootSystem) -> Vec<ParabolicJ> {
    ParabolicJ::full(rs).subsets()
}

fn anti_box(rs: &RootSystem, j: &ParabolicJ, r: i64) -> Vec<Weight> {
    weight_box(rs.rank(), r).into_iter().filter(|w| j.is_antidominant(w)).collect()
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

fn daha_relations() -> Outcome {
    let mut checks = 0;
    for ty in ["A1", "A2", "B2", "G2"] {
        let engine = Engine::new(rs(ty));
        for c in check_relations(&engine.daha, 50, 7).map_err(e)? {
            // affine A1 has no braid relation (m = ∞)
            if c.trials == 0 && ty == "A1" && c.relation == "braid" {
                continue;
            }
            if c.trials < 50 {
                return Err(format!("{ty} {}: only {} trials", c.relation, c.trials));
            }
            if !c.passed() {
                return Err(format!("{ty} {}: {} of {} failed", c.relation, c.failures, c.trials));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} relation families, 50 samples each"))
}

fn oracle() -> Outcome {
    let mut n = 0;
    for ty in ["A1", "A2"] {
        let r = rs(ty);
        let engine = Engine::new(r.clone());
        for w in weight_box(r.rank(), 2) {
            if !oracle_agrees(&engine, &ParabolicJ::empty(), &w, 8).map_err(e)? {
                return Err(format!("{ty} λ = {w:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} weights through q^8"))
}

fn parasym_formulas() -> Outcome {
    let mut n = 0;
    for ty in ["A1", "A2", "B2", "G2"] {
        let r = rs(ty);
        let engine = Engine::new(r.clone());
        let radius = if r.rank() == 1 { 2 } else { 1 };
        for j in subsets(&r) {
            for w in anti_box(&r, &j, radius) {
                // parasym_e computes both symmetrizer formulas and fails on disagreement
                engine.parasym_e(&j, &w).map_err(|x| format!("{ty} J={:?} λ = {w:?}: {x}", j.one_based()))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (J, λ) pairs"))
}

fn orthogonality() -> Outcome {
    let n = 8;
    let mut pairs = 0;
    for ty in ["A1", "A2"] {
        let r = rs(ty);
        let engine = Engine::new(r.clone());
        let p = Pairing::new(&r, n);
        let radius = if r.rank() == 1 { 2 } else { 1 };
        for j in subsets(&r) {
            let ws = anti_box(&r, &j, radius);
            let es: Vec<LaurentPoly> = ws.iter().map(|w| engine.parasym_e(&j, w).map(|x| x.poly)).collect::<Result<_, _>>().map_err(e)?;
            for a in 0..ws.len() {
                for b in 0..ws.len() {
                    if a == b {
                        continue;
                    }
                    let s = p.pair_j(&engine.daha, &j, &es[a], &es[b]).map_err(e)?;
                    if !vanishes_through(&s, n as i64) {
                        return Err(format!("{ty} J={:?}: <{:?}, {:?}> = {s}", j.one_based(), ws[a], ws[b]));
                    }
                    pairs += 1;
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..6 {
            let f = random_poly(&mut rng, r.rank(), 2, 1);
            let g = random_poly(&mut rng, r.rank(), 2, 1);
            for i in 0..=r.rank() {
                let lhs = p.pair(&engine.daha.apply_t_inv(i, &f).map_err(e)?, &g).map_err(e)?;
                let rhs = p.pair(&f, &engine.daha.apply_t(i, &g).map_err(e)?).map_err(e)?;
                if !vanishes_through(&lhs.sub(&rhs), n as i64) {
                    return Err(format!("{ty} adjunction fails for T_{i}"));
                }
            }
        }
    }
    Ok(format!("{pairs} off-diagonal pairs and adjunction through q^8"))
}

fn specialization() -> Outcome {
    let mut n = 0;
    for ty in ["A1", "A2", "B2"] {
        let r = rs(ty);
        let engine = Engine::new(r.clone());
        let radius = if r.rank() == 1 { 2 } else { 1 };
        for j in subsets(&r) {
            for w in anti_box(&r, &j, radius) {
                let res = engine.parasym_e(&j, &w).map_err(e)?;
                let z = engine.specialize_e(&res, TMode::Zero).map_err(e)?;
                engine.specialize_e(&res, TMode::Infinity).map_err(e)?;
                let z0 = engine.nonsym_e(&w).map_err(e)?.poly.specialize_t(TMode::Zero).map_err(e)?;
                if z != z0 {
                    return Err(format!("{ty} J={:?} λ = {w:?}: t=0 values differ", j.one_based()));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} (J, λ) pairs"))
}

fn sl2_characters() -> Outcome {
    let r = rs("A1");
    let engine = Engine::new(r.clone());
    let q_max = 5;
    let mut n = 0;
    for j in subsets(&r) {
        let ld = LieData::new(&r, j.clone(), q_max).map_err(e)?;
        let w0 = longest_element(&r, &j);
        for lambda in anti_box(&r, &j, 2) {
            let mu: Weight = w0.act(&lambda).iter().map(|x| -x).collect();
            for (fam, m) in [(Family::D, &lambda), (Family::U, &mu)] {
                let rep = check_module(&engine, &ld, fam, m, q_max).map_err(e)?;
                if !rep.passed {
                    return Err(format!("J={:?} {fam:?}_{m:?}: {:?} {:?}", j.one_based(), rep.invalid, rep.mismatches.first()));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} modules through q^{q_max}"))
}

fn weyl_lemmas() -> Outcome {
    let mut checks = 0;
    for ty in ["A2", "A3", "B2"] {
        let r = rs(ty);
        for j in subsets(&r) {
            for k in j.subsets() {
                let rep = length_lemmas_check(&r, &j, &k);
                if !rep.passed() {
                    return Err(format!("{ty} J={:?} K={:?}: {:?}", j.one_based(), k.one_based(), rep.failures.first()));
                }
                checks += rep.checks;
            }
        }
    }
    Ok(format!("{checks} length identities"))
}

fn kernel() -> Outcome {
    let mut n = 0;
    for ty in ["A1", "A2", "B2"] {
        let r = rs(ty);
        for j in subsets(&r) {
            if !kernel_identity(&r, &j, 8) {
                return Err(format!("{ty} J={:?}", j.one_based()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} kernels through q^8"))
}

fn tinf_decomposition() -> Outcome {
    let mut n = 0;
    for ty in ["A1", "A2", "B2"] {
        let r = rs(ty);
        let engine = Engine::new(r.clone());
        let radius = if r.rank() == 1 { 2 } else { 1 };
        for j in subsets(&r) {
            for w in anti_box(&r, &j, radius) {
                let c = engine.decompose_tinf(&j, &w).map_err(|x| format!("{ty} J={:?} λ = {w:?}: {x}", j.one_based()))?;
                if let Some((v, a)) = c.iter().find(|(_, a)| !a.is_zero() && !is_q_product(a)) {
                    return Err(format!("{ty} J={:?} λ = {w:?}: coefficient {a} at {v:?} is not a product of (1 - q^k)^±1", j.one_based()));
                }
                match c.iter().find(|(v, _)| *v == w) {
                    Some((_, a)) if a.is_one() => n += 1,
                    _ => return Err(format!("{ty} J={:?} λ = {w:?}: leading coefficient is not 1", j.one_based())),
                }
            }
        }
    }
    Ok(format!("{n} decompositions, zero residual, q-product coefficients"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 DAHA relations", daha_relations),
        ("2 Gram-Schmidt oracle", oracle),
        ("3 parasymmetric formulas", parasym_formulas),
        ("4 orthogonality and adjunction", orthogonality),
        ("5 specialization", specialization),
        ("6 sl2 characters", sl2_characters),
        ("7 Weyl length lemmas", weyl_lemmas),
        ("8 kernel identity", kernel),
        ("9 t=inf decomposition", tinf_decomposition),
    ];
    println!();
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                println!("FAIL {name}: {msg} ({secs:.1}s)");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}

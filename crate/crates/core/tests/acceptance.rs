//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use twobridge::exactmath::{rat, rat_int, solve_rep, GaussLaurent};
use twobridge::jones::{
    calibrate_conventions, grading_set_from_jones, grading_set_skein, jones_bracket,
    theorem_lhs, theorem_rhs, verify_skeinproof, ConventionRecord,
};
use twobridge::lensfloer::{d_invariant, LensSpace};
use twobridge::orderability::{
    check_formal_determinant, check_not_lo, destabilize_fully, epsilon_matrix, generator_count,
    is_strong, perfect_matchings, presentation_from_heegaard, sign_mul, unique_matching_cycle_check,
    BipartiteMultigraph, CycleCheck, GroupPresentation, HeegaardCombinatorics, NotLoVerdict,
    SignSymbol,
};
use twobridge::rho::{i_invariant, rho};
use twobridge::twobridge::{family, OrientationClass, TwoBridge};

type Outcome = Result<String, String>;

fn coprime_pairs(pmin: i64, pmax: i64) -> impl Iterator<Item = (i64, i64)> {
    (pmin..=pmax).flat_map(|p| (1..p).filter(move |&q| p.gcd(&q) == 1).map(move |q| (p, q)))
}

fn sigma(k: &TwoBridge) -> i64 {
    k.signature(OrientationClass::O1).unwrap()
}

fn c1_rho_difference() -> Outcome {
    let mut checked = 0;
    for (p, q) in coprime_pairs(3, 100) {
        let (r, s) = solve_rep(p, q).unwrap();
        for n in 1..q {
            let lhs = rho(p, r, n).unwrap() - rho(q, s, n).unwrap();
            if lhs != rat(-2 * n * n, p * q) {
                return Err(format!("p={p} q={q} n={n}: difference {lhs}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (p,q,n) exact"))
}

fn c2_odd_p_correction() -> Outcome {
    let mut checked = 0;
    for (p, q) in coprime_pairs(3, 100).filter(|(p, _)| p % 2 == 1) {
        let (r, s) = solve_rep(p, q).unwrap();
        let lhs = rho(p, r, q).unwrap() - rho(q, s, q).unwrap();
        if lhs != rat(-2 * q, p) + rat_int(1) {
            return Err(format!("p={p} q={q}: difference {lhs}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} odd-p pairs exact"))
}

fn c3_rho_symmetry() -> Outcome {
    let mut checked = 0;
    for a in 1..=100i64 {
        for b in 0..a.max(1) {
            if a.gcd(&b) != 1 {
                continue;
            }
            for n in 0..a {
                if rho(a, b, n).unwrap() != rho(a, b, -n).unwrap() {
                    return Err(format!("a={a} b={b} n={n}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (a,b,n)"))
}

fn c4_spin_d() -> Outcome {
    let mut checked = 0;
    for (p, q) in coprime_pairs(3, 100).filter(|(p, _)| p % 2 == 1) {
        let l = LensSpace::new(p, q).unwrap();
        let k = TwoBridge::new(p, q).unwrap();
        let spin = l.spin_indices();
        if spin.len() != 1 {
            return Err(format!("L({p},{q}) has {} spin structures", spin.len()));
        }
        let d = d_invariant(p, q, spin[0]).unwrap();
        if d.clone() * rat_int(8) != rat_int(-2 * sigma(&k)) {
            return Err(format!("K({p},{q}): d = {d}, sigma = {}", sigma(&k)));
        }
        checked += 1;
    }
    Ok(format!("{checked} odd p <= 100"))
}

fn c5_integrality(conv: &ConventionRecord) -> Outcome {
    let pairs: Vec<(i64, i64)> = std::iter::once((1, 0)).chain(coprime_pairs(2, 200)).collect();
    let checked: usize = pairs
        .par_iter()
        .map(|&(p, q)| -> Result<usize, String> {
            for i in 0..p {
                i_invariant(p, q, i, conv.i_sign).map_err(|e| e.to_string())?;
            }
            Ok(p as usize)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("{checked} Spin^c structures, p <= 200, sign {}", conv.i_sign.as_str()))
}

fn c6_dual_route() -> Outcome {
    let links = family(40);
    for k in &links {
        let j = jones_bracket(k);
        let lk = (k.components() == 2).then(|| k.linking_number().unwrap());
        let a = grading_set_from_jones(&j, sigma(k), lk).map_err(|e| e.to_string())?;
        let b = grading_set_skein(k).map_err(|e| e.to_string())?;
        if a.elements != b.elements {
            return Err(format!("{k}: jones route {:?}, skein route {:?}", a.elements, b.elements));
        }
        if j.eval_at_i().norm() != BigInt::from(k.determinant() * k.determinant()) {
            return Err(format!("{k}: |J(i)| != det"));
        }
    }
    Ok(format!("{} links with p <= 40", links.len()))
}

/// The identity itself, replayed under the frozen record.
fn c7_main_identity(conv: &ConventionRecord) -> Outcome {
    let links = family(60);
    let mut failures: Vec<(&TwoBridge, GaussLaurent, String)> = Vec::new();
    for k in &links {
        let lhs = theorem_lhs(k);
        match theorem_rhs(k, conv) {
            Ok(rhs) if rhs == lhs => {}
            Ok(rhs) => failures.push((k, lhs, rhs.to_string())),
            Err(e) => failures.push((k, lhs, e.to_string())),
        }
    }
    match failures.first() {
        None => Ok(format!("{} links with p <= 60", links.len())),
        Some((k, lhs, rhs)) => Err(format!(
            "{} of {} links fail; smallest failing {k}: lhs = {lhs}, rhs = {rhs}",
            failures.len(),
            links.len()
        )),
    }
}

/// The criterion's clause for the case where no convention survives.
fn c7_fallback(conv: &ConventionRecord) -> Outcome {
    match calibrate_conventions() {
        Ok(found) => Err(format!("calibration found a convention: {found:?}")),
        Err(f) => {
            let report = serde_json::to_value(&f.0).map_err(|e| e.to_string())?;
            let candidates = report["candidates"].as_array().cloned().unwrap_or_default();
            if candidates.len() != 16 {
                return Err(format!("{} candidates in report", candidates.len()));
            }
            if candidates.iter().any(|c| c["first_failure"]["p"].as_i64().is_none()) {
                return Err("a candidate lacks a localized counterexample".into());
            }
            if f.0.selected.key() != conv.key() {
                return Err("frozen record differs from the calibration selection".into());
            }
            Ok(format!(
                "no surviving convention among {}; counterexample report emitted",
                candidates.len()
            ))
        }
    }
}

fn c8_skeinproof(conv: &ConventionRecord) -> Outcome {
    let links = family(60);
    for k in &links {
        let r = verify_skeinproof(k, conv).map_err(|e| e.to_string())?;
        if !r.multisets_equal {
            return Err(format!("{k}: {:?} vs {:?}", r.spinc_side, r.grading_set.elements));
        }
        if !r.spin_matches_c {
            return Err(format!("{k}: spin values {:?} vs c {:?}", r.spin_values, r.grading_set.c));
        }
    }
    Ok(format!("{} links with p <= 60", links.len()))
}

/// `n₊` positive then `n₋` negative points of `α_a` on one β.
fn points(a: usize, np: usize, nm: usize) -> Vec<(usize, i8)> {
    let mut v = vec![(a, 1); np];
    v.extend(std::iter::repeat_n((a, -1), nm));
    v
}

fn chain_holds(h: &HeegaardCombinatorics) -> Result<bool, String> {
    match is_strong(h) {
        Err(_) => Ok(false), // singular: not a rational homology sphere
        Ok(r) if !r.strong => Ok(false),
        Ok(_) => {
            let e = epsilon_matrix(&presentation_from_heegaard(h));
            let v = check_formal_determinant(&e).map_err(|e| e.to_string())?;
            if v.passed() {
                Ok(true)
            } else {
                Err(format!("strong diagram {h:?} fails the formal determinant: {v:?}"))
            }
        }
    }
}

fn c9_orderability() -> Outcome {
    use SignSymbol::*;
    let table = [
        (Zero, Zero, Zero), (Zero, Plus, Zero), (Zero, Minus, Zero), (Zero, Star, Zero),
        (Plus, Plus, Plus), (Plus, Minus, Minus), (Plus, Star, Star),
        (Minus, Minus, Plus), (Minus, Star, Star), (Star, Star, Star),
    ];
    for (x, y, z) in table {
        if sign_mul(x, y) != z || sign_mul(y, x) != z {
            return Err(format!("{x}·{y}"));
        }
    }
    for x in SignSymbol::ALL {
        for y in SignSymbol::ALL {
            for z in SignSymbol::ALL {
                if sign_mul(sign_mul(x, y), z) != sign_mul(x, sign_mul(y, z)) {
                    return Err(format!("associativity at {x} {y} {z}"));
                }
            }
        }
    }
    for p in 2..=50 {
        let g = GroupPresentation {
            generators: 1,
            relators: vec![vec![(0, 1); p]],
        };
        let e = epsilon_matrix(&g);
        if check_not_lo(&e) != NotLoVerdict::Obstructed {
            return Err(format!("<a | a^{p}> not obstructed"));
        }
    }
    let mut strong = 0;
    let mut total = 0;
    for n in 1..=6 {
        for mask in 0u32..(1 << n) {
            let b = (0..n).map(|k| (1, if mask >> k & 1 == 1 { -1 } else { 1 })).collect();
            let h = HeegaardCombinatorics::new(1, vec![b]).unwrap();
            total += 1;
            strong += chain_holds(&h)? as usize;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..=6)
        .flat_map(|a| (0..=6 - a).map(move |b| (a, b)))
        .collect();
    for &(p11, m11) in &pairs {
        for &(p21, m21) in &pairs {
            for &(p12, m12) in &pairs {
                for &(p22, m22) in &pairs {
                    let mut b1 = points(1, p11, m11);
                    b1.extend(points(2, p21, m21));
                    let mut b2 = points(1, p12, m12);
                    b2.extend(points(2, p22, m22));
                    let h = HeegaardCombinatorics::new(2, vec![b1, b2]).unwrap();
                    total += 1;
                    strong += chain_holds(&h)? as usize;
                }
            }
        }
    }
    Ok(format!(
        "sign table exhaustive; <a|a^p> obstructed for p in 2..=50; {strong} strong of {total} fixtures pass"
    ))
}

/// Stabilize once: the new pair meets in one point, and extra points are
/// added on one side only, so one of the new vertices stays a leaf.
fn stabilize(h: &HeegaardCombinatorics, rng: &mut ChaCha8Rng) -> HeegaardCombinatorics {
    let g = h.genus;
    let n = g + 1;
    let mut beta = h.beta.clone();
    let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut new_beta = vec![(n, sign(rng))];
    let extra = rng.gen_range(0..=3);
    if rng.gen_bool(0.5) {
        // α_n crosses old β curves; B_n stays a leaf
        for _ in 0..extra {
            let j = rng.gen_range(0..g);
            let pos = rng.gen_range(0..=beta[j].len());
            beta[j].insert(pos, (n, sign(rng)));
        }
    } else {
        // β_n crosses old α curves; A_n stays a leaf
        for _ in 0..extra {
            let pos = rng.gen_range(0..=new_beta.len());
            new_beta.insert(pos, (rng.gen_range(1..=g), sign(rng)));
        }
    }
    beta.push(new_beta);
    // relabel the α curves and reorder the β curves
    let mut alpha_perm: Vec<usize> = (1..=n).collect();
    alpha_perm.shuffle(rng);
    beta.shuffle(rng);
    let beta = beta
        .into_iter()
        .map(|b| b.into_iter().map(|(a, s)| (alpha_perm[a - 1], s)).collect())
        .collect();
    HeegaardCombinatorics::new(n, beta).unwrap()
}

fn leafless_fixture(rng: &mut ChaCha8Rng) -> HeegaardCombinatorics {
    let g = rng.gen_range(1..=5);
    let mut mu: Vec<usize> = (0..g).collect();
    mu.shuffle(rng);
    let mut beta: Vec<Vec<(usize, i8)>> = vec![Vec::new(); g];
    for (a, &b) in mu.iter().enumerate() {
        beta[b].push((a + 1, 1));
    }
    for _ in 0..rng.gen_range(0..=2 * g) {
        let b = rng.gen_range(0..g);
        beta[b].push((rng.gen_range(1..=g), if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    loop {
        let h = HeegaardCombinatorics::new(g, beta.clone()).unwrap();
        match BipartiteMultigraph::from_heegaard(&h).find_leaf() {
            None => return h,
            Some(twobridge::orderability::Vertex::A(i)) => {
                beta[rng.gen_range(0..g)].push((i + 1, 1));
            }
            Some(twobridge::orderability::Vertex::B(j)) => {
                beta[j].push((rng.gen_range(1..=g), -1));
            }
        }
    }
}

fn c10_s3_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut stabilized = 0;
    for k in 1..=5 {
        for _ in 0..200 {
            let mut h = HeegaardCombinatorics::lens(1);
            for _ in 0..k {
                h = stabilize(&h, &mut rng);
            }
            if generator_count(&h) != BigInt::from(1) {
                return Err(format!("stabilized fixture has {} generators", generator_count(&h)));
            }
            let mut cur = h.clone();
            while cur.genus > 1 {
                let gr = BipartiteMultigraph::from_heegaard(&cur);
                let mu = perfect_matchings(&gr).remove(0);
                match unique_matching_cycle_check(&gr, &mu).map_err(|e| e.to_string())? {
                    CycleCheck::LeafFound { .. } => {}
                    other => return Err(format!("unique matching without a leaf: {other:?}")),
                }
                cur = twobridge::orderability::destabilize_leaf(&cur)
                    .map_err(|e| e.to_string())?
                    .diagram;
            }
            let steps = destabilize_fully(&h).map_err(|e| e.to_string())?;
            let last = steps.last().map_or(h.clone(), |s| s.diagram.clone());
            if steps.len() != k || last.genus != 1 || last.beta[0].len() != 1 {
                return Err(format!("{h:?} reduced to {last:?} in {} steps", steps.len()));
            }
            stabilized += 1;
        }
    }
    let mut leafless = 0;
    for _ in 0..500 {
        let h = leafless_fixture(&mut rng);
        let gr = BipartiteMultigraph::from_heegaard(&h);
        let mu = perfect_matchings(&gr).remove(0);
        match unique_matching_cycle_check(&gr, &mu).map_err(|e| e.to_string())? {
            CycleCheck::SecondMatching { matching, .. }
                if gr.is_perfect_matching(&matching) && matching != mu => {}
            other => return Err(format!("{h:?}: {other:?}")),
        }
        leafless += 1;
    }
    Ok(format!(
        "{stabilized} stabilized S^3 fixtures reach genus 1; {leafless} leafless fixtures give a second matching"
    ))
}

fn main() -> ExitCode {
    let conv = ConventionRecord::frozen();
    let start = Instant::now();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut run = |name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let r = f();
        let line = match &r {
            Ok(m) => format!("PASS  {name}: {m}"),
            Err(m) => format!("FAIL  {name}: {m}"),
        };
        println!("{line}  [{:.1}s]", t.elapsed().as_secs_f64());
        results.push((name, r));
    };
    run("criterion 1 (rho difference)", &c1_rho_difference);
    run("criterion 2 (odd-p correction)", &c2_odd_p_correction);
    run("criterion 3 (rho symmetry)", &c3_rho_symmetry);
    run("criterion 4 (spin d = -sigma/4)", &c4_spin_d);
    run("criterion 5 (I integrality)", &|| c5_integrality(&conv));
    run("criterion 6 (dual route M(K))", &c6_dual_route);
    run("criterion 7 (main identity, p <= 60)", &|| c7_main_identity(&conv));
    run("criterion 7 (fallback: counterexample report)", &|| c7_fallback(&conv));
    run("criterion 8 (multiset identity)", &|| c8_skeinproof(&conv));
    run("criterion 9 (orderability chain)", &c9_orderability);
    run("criterion 10 (S^3 destabilization)", &c10_s3_property);
    println!("total {:.1}s", start.elapsed().as_secs_f64());

    let failed = |n: &str| results.iter().any(|(name, r)| name.starts_with(n) && r.is_err());
    let main_identity_failed = results
        .iter()
        .any(|(name, r)| name.starts_with("criterion 7 (main") && r.is_err());
    let fallback_ok = !failed("criterion 7 (fallback");
    if main_identity_failed {
        println!(
            "NOT ATTAINED  criterion 7: the identity fails; {}",
            if fallback_ok {
                "the criterion's no-convention clause is met"
            } else {
                "and its no-convention clause is not met"
            }
        );
    }
    let others_failed = results
        .iter()
        .any(|(name, r)| r.is_err() && !name.starts_with("criterion 7"));
    let c7_failed = main_identity_failed && !fallback_ok;
    if others_failed || c7_failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

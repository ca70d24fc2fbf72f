//! End-to-end acceptance checks. Each test writes one `PASS`/`FAIL` line to
//! stdout (bypassing the test harness capture) before asserting.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use common::*;
use entroflow::suites::{run_suite, SuiteContext};
use entroflow::{Item, Status};
use entroflow_core::entropy::{entropy_at, entropy_of_endo, entropy_of_preradical, fekete_gaps, invariant, trajectory,
    trajectory_profile, TrajectoryVerdict};
use entroflow_core::flow::{alpha_flow, omega_flow, SubFlow};
use entroflow_core::{
    eval_preradical, image_of, Battery, Flow, GeneratingPair, InvariantTag, ModuleObject, Morphism, NormValue, Options,
    PreradicalExpr, RingSpec, Submodule,
};

const BIN: &str = env!("CARGO_BIN_EXE_entroflow");

fn verdict(n: u32, title: &str, passed: bool, detail: &str) {
    let line = format!("{} {n:>2} {title}: {detail}\n", if passed { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().write_all(line.as_bytes());
    assert!(passed, "criterion {n} ({title}) failed: {detail}");
}

fn zmod(f: &[i64]) -> ModuleObject {
    ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, f).unwrap()
}

fn shift_over(block: &[i64]) -> ModuleObject {
    ModuleObject::shift(zmod(block)).unwrap()
}

fn bernoulli_family(m: &ModuleObject) -> Vec<Morphism> {
    vec![Morphism::zero(m, m).unwrap(), Morphism::identity(m), Morphism::bernoulli_shift(m).unwrap()]
}

fn log_p(p: i64) -> NormValue {
    NormValue::log_prime(p as u64)
}

fn sweep(suite: &str, seed: u64, size: usize) -> Vec<Item> {
    let ctx = SuiteContext { seed, size, opts: Options::default(), workspace: None };
    run_suite(suite, &ctx).unwrap().0
}

/// `(count, failures)` among items whose id starts with `prefix`.
fn tally(items: &[Item], prefix: &str) -> (usize, Vec<String>) {
    let chosen: Vec<&Item> = items.iter().filter(|i| i.id.starts_with(prefix)).collect();
    let bad = chosen
        .iter()
        .filter(|i| i.status != Status::Ok)
        .map(|i| format!("{} {:?} {}", i.id, i.status, i.detail.clone().unwrap_or_default()))
        .collect();
    (chosen.len(), bad)
}

fn temp_workspace(name: &str, json: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("entroflow-{}-{name}.json", std::process::id()));
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn bernoulli_shift_value() {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let ws = temp_workspace(
            &format!("bernoulli{p}"),
            &format!(
                r#"{{"schema": 1, "modules": {{"S": {{"shift": [{p}]}}}},
                    "morphisms": {{"beta": {{"module": "S", "shift": [{{"offset": 1, "block_matrix": [[1]]}}]}}}}}}"#
            ),
        );
        let start = Instant::now();
        let out = Command::new(BIN)
            .args(["--format", "json", "--max-window", "16", "entropy", "-w"])
            .arg(&ws)
            .args(["--target", "endo", "--morphism", "beta"])
            .output()
            .unwrap();
        let secs = start.elapsed().as_secs_f64();
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
        let value = json["body"]["items"][0]["value"].as_str().unwrap_or("").to_string();
        ok &= out.status.success() && value == format!("log{p}") && secs < 5.0;
        notes.push(format!("p={p} -> {value} in {secs:.2}s"));
        let _ = std::fs::remove_file(ws);
    }
    verdict(1, "bernoulli shift value", ok, &notes.join(", "));
}

#[test]
fn trajectory_norms() {
    let o = Options::default();
    let mut bad = Vec::new();
    for p in [2, 3, 5, 7] {
        let m = shift_over(&[p]);
        let beta = Morphism::bernoulli_shift(&m).unwrap();
        let l = Submodule::window_block(&m, 1).unwrap();
        for n in 1..=12usize {
            let v = invariant::invariant(InvariantTag::Log, &trajectory(&l, &beta, n, &o).unwrap()).unwrap();
            if v != (1..n).fold(log_p(p), |acc, _| acc.add(&log_p(p))) {
                bad.push(format!("p={p} n={n}: {v}"));
            }
        }
    }
    verdict(2, "trajectory norms", bad.is_empty(), &format!("p in 2,3,5,7, n = 1..12; mismatches {bad:?}"));
}

#[test]
fn rank_of_torsion_vanishes() {
    let o = Options::default();
    let profiles: [&[i64]; 10] = [&[2], &[3], &[4], &[2, 2], &[5], &[6], &[8], &[2, 4], &[9], &[3, 3]];
    let mut cases: Vec<(ModuleObject, Option<Vec<Morphism>>)> = profiles.iter().map(|p| (zmod(p), None)).collect();
    for block in [&[2][..], &[3], &[2, 2]] {
        let m = shift_over(block);
        let fam = bernoulli_family(&m);
        cases.push((m, Some(fam)));
    }
    let mut bad = Vec::new();
    for (m, fam) in &cases {
        let v = entropy_of_preradical(InvariantTag::Rank, &PreradicalExpr::Torsion, m, fam.as_deref(), &o);
        match v {
            Ok(out) if out.value.is_zero() => {}
            other => bad.push(format!("{m}: {other:?}")),
        }
    }
    verdict(3, "rank entropy of torsion", bad.is_empty(), &format!("{} modules, 3 of them shift modules; {bad:?}", cases.len()));
}

#[test]
fn torsion_positivity() {
    let o = Options::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [2, 3, 5] {
        let m = shift_over(&[p]);
        let v = entropy_of_preradical(InvariantTag::Log, &PreradicalExpr::Torsion, &m, Some(&bernoulli_family(&m)), &o)
            .unwrap()
            .value;
        ok &= v == log_p(p) && v.to_f64() > 0.0;
        notes.push(format!("p={p}: {v}"));
    }
    verdict(4, "torsion positivity", ok, &notes.join(", "));
}

#[test]
fn finite_modules_vanish() {
    let o = Options::default();
    let mut battery = Battery::new(2024);
    let mut bad = Vec::new();
    let cases = 200;
    for _ in 0..cases {
        let m = battery.finite_module(256);
        let eta = battery.endomorphism(&m).unwrap();
        let l = battery.submodule(&m).unwrap();
        let at = entropy_at(InvariantTag::Log, &l, &eta, &o).unwrap();
        let endo = entropy_of_endo(InvariantTag::Log, &Flow::new(&m, &eta).unwrap(), &o).unwrap().value;
        if !at.is_zero() || !endo.is_zero() {
            bad.push(format!("{m} {eta}: {at}, {endo}"));
        }
    }
    verdict(5, "finite modules have zero entropy", bad.is_empty(), &format!("{cases} cases; nonzero {bad:?}"));
}

#[test]
fn four_term_chain() {
    let items = sweep("chain", 1, 100);
    let (modules, mut bad) = tally(&items, "chain/module/");
    let (flows, bad_flows) = tally(&items, "chain/flow/");
    bad.extend(bad_flows);
    verdict(
        6,
        "four-term chain",
        modules >= 100 && flows >= 30 && bad.is_empty(),
        &format!("{modules} module triples, {flows} flow triples; failures {bad:?}"),
    );
}

#[test]
fn order_preservation() {
    let items = sweep("order", 3, 100);
    let cases = items.iter().filter(|i| i.id.len() == "order/000".len() && i.id.starts_with("order/")).count();
    let (_, bad) = tally(&items, "order/");
    verdict(7, "order preservation", cases >= 100 && bad.is_empty(), &format!("{cases} comparable cases; failures {bad:?}"));
}

#[test]
fn flow_round_trip() {
    let items = sweep("flow-roundtrip", 5, 100);
    let (cases, bad) = tally(&items, "flow-roundtrip/project/");
    let (_, others) = tally(&items, "flow-roundtrip/");
    verdict(
        8,
        "flow round trip",
        cases >= 100 && bad.is_empty() && others.is_empty(),
        &format!("{cases} pairs; failures {others:?}"),
    );
}

fn profiles_up_to(limit: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for a in 2..=limit {
        out.push(vec![a]);
        for b in (2 * a..=limit / a).step_by(a as usize) {
            out.push(vec![a, b]);
            for c in (b..=limit / (a * b)).step_by(b as usize) {
                out.push(vec![a, b, c]);
            }
        }
        if a * a <= limit {
            out.push(vec![a, a]);
            for c in (a..=limit / (a * a)).step_by(a as usize) {
                out.push(vec![a, a, c]);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn subgroup_of(m: &ModuleObject, set: &ElemSet) -> Submodule {
    let gens: Vec<Elem> = set.iter().cloned().collect();
    Submodule::generated_by(m, &gens).unwrap()
}

fn equivariant(f: &[Elem], eta: &Morphism, mu: &Morphism, dm: &[i64], dk: &[i64]) -> bool {
    elements(dm).iter().all(|x| {
        let left = apply(f, &eta.apply_coords(x).unwrap(), dk);
        let right = reduce(&mu.apply_coords(&apply(f, x, dk)).unwrap(), dk);
        left == right
    })
}

fn image_set(homs: &[Vec<Elem>], src: &ElemSet, cod: &[i64]) -> ElemSet {
    let gens: Vec<Elem> = homs.iter().flat_map(|f| src.iter().map(|x| apply(f, x, cod))).collect();
    span(&gens, cod)
}

fn preimage_set(homs: &[Vec<Elem>], target: &ElemSet, dom: &[i64], cod: &[i64]) -> ElemSet {
    elements(dom).into_iter().filter(|x| homs.iter().all(|f| target.contains(&apply(f, x, cod)))).collect()
}

#[test]
fn alpha_omega_oracle() {
    let profiles = profiles_up_to(32);
    let mods: Vec<ModuleObject> = profiles.iter().map(|p| zmod(p)).collect();
    let subgroups: Vec<Vec<ElemSet>> = profiles.iter().map(|p| all_subgroups(p).into_iter().collect()).collect();
    let mut homs: BTreeMap<(usize, usize), Vec<Vec<Elem>>> = BTreeMap::new();
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for (i, m) in mods.iter().enumerate() {
        for set in &subgroups[i] {
            let n = subgroup_of(m, set);
            let a = PreradicalExpr::alpha(GeneratingPair::new("M", "N", n.clone()));
            let w = PreradicalExpr::omega(GeneratingPair::new("M", "N", n.clone()));
            for (j, k) in mods.iter().enumerate() {
                let (dm, dk) = (&profiles[i], &profiles[j]);
                let fwd = homs.entry((i, j)).or_insert_with(|| all_homs(dm, dk)).clone();
                let back = homs.entry((j, i)).or_insert_with(|| all_homs(dk, dm)).clone();
                checked += 1;
                if members(&eval_preradical(&a, k).unwrap()) != image_set(&fwd, set, dk)
                    || members(&eval_preradical(&w, k).unwrap()) != preimage_set(&back, set, dk, dm)
                {
                    bad.push(format!("N <= {dm:?}, K = {dk:?}"));
                }
            }
        }
    }

    let mut battery = Battery::new(9);
    let small: Vec<usize> = (0..profiles.len()).filter(|&i| profiles[i].iter().product::<i64>() <= 16).collect();
    let mut equivariant_checked = 0usize;
    for &i in &small {
        let (m, dm) = (&mods[i], &profiles[i]);
        let eta = battery.endomorphism(m).unwrap();
        let source = Flow::new(m, &eta).unwrap();
        let stable: Vec<&ElemSet> =
            subgroups[i].iter().filter(|s| image_of(&eta, &subgroup_of(m, s)).unwrap().le(&subgroup_of(m, s)).unwrap()).collect();
        for &j in &small {
            let (k, dk) = (&mods[j], &profiles[j]);
            let mu = battery.endomorphism(k).unwrap();
            let target = Flow::new(k, &mu).unwrap();
            let fwd: Vec<Vec<Elem>> = homs[&(i, j)].iter().filter(|f| equivariant(f, &eta, &mu, dm, dk)).cloned().collect();
            let back: Vec<Vec<Elem>> = homs[&(j, i)].iter().filter(|f| equivariant(f, &mu, &eta, dk, dm)).cloned().collect();
            for set in &stable {
                let sub = SubFlow::of(&source, subgroup_of(m, set)).unwrap();
                equivariant_checked += 1;
                if members(alpha_flow(&sub, &target).unwrap().sub()) != image_set(&fwd, set, dk)
                    || members(omega_flow(&sub, &target).unwrap().sub()) != preimage_set(&back, set, dk, dm)
                {
                    bad.push(format!("equivariant N <= {dm:?} under {eta}, K = {dk:?} under {mu}"));
                }
            }
        }
    }
    verdict(
        9,
        "alpha/omega oracle equivalence",
        bad.is_empty(),
        &format!(
            "{} modules of order <= 32, {checked} (N, K) pairs, {equivariant_checked} equivariant pairs; mismatches {bad:?}",
            mods.len()
        ),
    );
}

#[test]
fn lattice_equalities() {
    let items = sweep("lattice-equality", 11, 50);
    let (finite, mut bad) = tally(&items, "lattice-equality/finite/");
    let (torsion, b2) = tally(&items, "lattice-equality/shift-torsion/");
    let (shift_ops, b3) = tally(&items, "lattice-equality/shift-operations/");
    bad.extend(b2);
    bad.extend(b3);
    verdict(
        10,
        "lattice equalities",
        finite >= 50 && torsion >= 1 && finite + shift_ops >= 40 && bad.is_empty(),
        &format!("{finite} finite cases with four operations, {torsion} shift torsion, {shift_ops} shift operations; failures {bad:?}"),
    );
}

#[test]
fn ring_change_inequalities() {
    let items = sweep("ring-change", 13, 50);
    let (cases, bad) = tally(&items, "ring-change/");
    verdict(11, "ring change inequalities", cases >= 50 && bad.is_empty(), &format!("{cases} cases; failures {bad:?}"));
}

#[test]
fn fekete_consistency() {
    let o = Options::default();
    let items = sweep("lattice-equality", 17, 30);
    let (suite_cases, mut bad) = tally(&items, "lattice-equality/fekete/");
    let mut battery = Battery::new(31);
    let mut affine = 0;
    let direct = 100;
    for round in 0..direct {
        let m = if round % 2 == 0 { battery.shift_module() } else { battery.finite_module(128) };
        let eta = if m.is_shift() && round % 4 == 0 {
            Morphism::bernoulli_shift(&m).unwrap()
        } else {
            battery.endomorphism(&m).unwrap()
        };
        let l = if m.is_shift() { Submodule::window_block(&m, 1).unwrap() } else { battery.submodule(&m).unwrap() };
        let profile = trajectory_profile(InvariantTag::Log, &l, &eta, &o).unwrap();
        let values = profile.norms();
        let slope = match &profile.verdict {
            TrajectoryVerdict::Stabilized(_) => NormValue::zero(),
            TrajectoryVerdict::AffineSlope { slope, .. } => slope.clone(),
            TrajectoryVerdict::Undetermined => continue,
        };
        let gaps = fekete_gaps(&values, &slope);
        if gaps.iter().any(|g| *g < -1e-9) {
            bad.push(format!("{m} {eta}: gaps {gaps:?}"));
        }
        if let TrajectoryVerdict::AffineSlope { .. } = profile.verdict {
            affine += 1;
            let least = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
            if gaps.last().copied().unwrap_or(0.0) > least + 1e-9 {
                bad.push(format!("{m} {eta}: not approached at the largest k, gaps {gaps:?}"));
            }
        }
    }
    verdict(
        12,
        "fekete consistency",
        suite_cases > 0 && bad.is_empty(),
        &format!("{suite_cases} suite sequences, {direct} direct sequences ({affine} affine tails); failures {bad:?}"),
    );
}

#[test]
fn naturality_sweep() {
    let items = sweep("naturality", 19, 50);
    let (builtins, mut bad) = tally(&items, "naturality/builtin/");
    let (closures, b2) = tally(&items, "naturality/closure/");
    bad.extend(b2);
    let (_, b3) = tally(&items, "naturality/");
    bad.extend(b3);
    let squares: Vec<&str> = items.iter().filter_map(|i| i.detail.as_deref()).take(1).collect();
    verdict(
        13,
        "naturality sweep",
        builtins >= 7 && closures >= 50 && bad.is_empty(),
        &format!("{builtins} builtins, {closures} closures, {squares:?} each; failures {bad:?}"),
    );
}

#[test]
fn determinism() {
    let run = |format: &str| {
        let out = Command::new(BIN).args(["--format", format, "verify", "--suite", "all", "--seed", "7"]).output().unwrap();
        (out.status.code(), out.stdout)
    };
    let (c1, text1) = run("text");
    let (c2, text2) = run("text");
    let body = |bytes: &[u8]| serde_json::from_slice::<serde_json::Value>(bytes).unwrap()["body"].to_string();
    let (_, json1) = run("json");
    let (_, json2) = run("json");
    let same = c1 == c2 && text1 == text2 && body(&json1) == body(&json2);
    verdict(
        14,
        "determinism",
        same && c1 == Some(0),
        &format!("exit {c1:?}/{c2:?}, text body {} bytes, identical: {same}", text1.len()),
    );
}

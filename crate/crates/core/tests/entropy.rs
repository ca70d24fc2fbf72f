use entroflow_core::entropy::{
    entropy_at, entropy_lattice_side, entropy_of_endo, entropy_of_flow_preradical, entropy_of_module,
    entropy_of_preradical, fekete_limit, lattice_entropy_at, lattice_entropy_untabulated, phi_t_eval,
    restrict_scalars, ring_change_report,
};
use entroflow_core::submodule::restrict_uniform;
use entroflow_core::{
    enumerate_submodules, eval_preradical, invariant, lattice_morphism, normed_semilattice, Battery, Error, Flow,
    InvariantTag, ModuleObject, Morphism, NormValue, Options, PreradicalExpr, RingSpec, Submodule,
};
use num_rational::Rational64;

const TAGS: [InvariantTag; 2] = [InvariantTag::Log, InvariantTag::Rank];

fn shift_over(block: &[i64]) -> ModuleObject {
    ModuleObject::shift(ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, block).unwrap()).unwrap()
}

fn bernoulli_family(m: &ModuleObject) -> Vec<Morphism> {
    vec![Morphism::zero(m, m).unwrap(), Morphism::identity(m), Morphism::bernoulli_shift(m).unwrap()]
}

fn log_p(p: i64) -> NormValue {
    NormValue::log_prime(p as u64)
}

#[test]
fn bernoulli_examples() {
    let o = Options::default();
    for p in [2, 3, 5] {
        let m = shift_over(&[p]);
        let beta = Morphism::bernoulli_shift(&m).unwrap();
        let x = Flow::new(&m, &beta).unwrap();
        assert_eq!(entropy_of_endo(InvariantTag::Log, &x, &o).unwrap().value, log_p(p));
        let fam = bernoulli_family(&m);
        let tor = entropy_of_preradical(InvariantTag::Log, &PreradicalExpr::Torsion, &m, Some(&fam), &o).unwrap();
        assert_eq!(tor.value, log_p(p));
        assert!(tor.provenance.iter().any(|s| s.contains("declared family")));
        let rank = entropy_of_preradical(InvariantTag::Rank, &PreradicalExpr::Torsion, &m, Some(&fam), &o).unwrap();
        assert!(rank.value.is_zero());
        let flow = entropy_of_flow_preradical(InvariantTag::Log, &PreradicalExpr::Torsion, &x, &o).unwrap();
        assert_eq!(flow.value, log_p(p));
        let mut squared = fam.clone();
        squared.push(Morphism::shift_power(&m, 2).unwrap());
        let two = entropy_of_module(InvariantTag::Log, &m, Some(&squared), &o).unwrap();
        assert_eq!(two.value, log_p(p).scale(Rational64::from_integer(2)));
        for tag in TAGS {
            let zero = entropy_of_preradical(tag, &PreradicalExpr::Zero, &m, Some(&fam), &o).unwrap();
            assert!(zero.value.is_zero());
        }
    }
}

#[test]
fn module_entropy_needs_a_family_on_shift_modules() {
    let m = shift_over(&[2]);
    let o = Options::default();
    assert_eq!(entropy_of_module(InvariantTag::Log, &m, None, &o).unwrap_err(), Error::EmptyFamily);
    assert_eq!(entropy_of_module(InvariantTag::Log, &m, Some(&[]), &o).unwrap_err(), Error::EmptyFamily);
}

#[test]
fn finite_modules_have_zero_entropy() {
    let o = Options::default();
    let mut battery = Battery::new(3);
    for _ in 0..40 {
        let m = battery.finite_module(64);
        let eta = battery.endomorphism(&m).unwrap();
        for tag in TAGS {
            assert!(entropy_of_endo(tag, &Flow::new(&m, &eta).unwrap(), &o).unwrap().value.is_zero());
            assert!(entropy_of_endo(tag, &Flow::trivial(&m), &o).unwrap().value.is_zero());
        }
    }
    let zero = ModuleObject::zero(RingSpec::Integers);
    assert!(entropy_of_module(InvariantTag::Log, &zero, None, &o).unwrap().value.is_zero());
    let z8 = ModuleObject::cyclic(RingSpec::Integers, 8).unwrap();
    assert!(entropy_of_module(InvariantTag::Log, &z8, None, &o).unwrap().value.is_zero());
}

#[test]
fn fekete_examples() {
    let p = log_p(3);
    let linear: Vec<NormValue> = (1..=8).map(|n| p.scale(Rational64::from_integer(n))).collect();
    assert_eq!(fekete_limit(&linear, 4, 256).unwrap(), p);
    let constant = vec![log_p(2); 8];
    assert!(fekete_limit(&constant, 4, 256).unwrap().is_zero());
    let capped: Vec<NormValue> = (1..=12).map(|n| log_p(2).scale(Rational64::from_integer(n.min(5)))).collect();
    assert!(fekete_limit(&capped, 4, 256).unwrap().is_zero());
}

/// Module-side and lattice-side `H` agree on every trajectory.
#[test]
fn trajectory_entropy_matches_lattice_recursion() {
    let o = Options::default();
    let mut battery = Battery::new(21);
    for round in 0..40 {
        let m = if round % 2 == 0 { battery.shift_module() } else { battery.finite_module(64) };
        let eta = battery.endomorphism(&m).unwrap();
        let l = if m.is_shift() { Submodule::window_block(&m, 1).unwrap() } else { battery.submodule(&m).unwrap() };
        for tag in TAGS {
            let module_side = entropy_at(tag, &l, &eta, &o).unwrap();
            assert_eq!(lattice_entropy_untabulated(tag, &l, &eta, &o).unwrap(), module_side);
            if !m.is_shift() {
                let f = normed_semilattice(&m, tag, &o).unwrap();
                let x = lattice_morphism(&eta, &o).unwrap();
                let i = f.lattice().index_of(&l).unwrap();
                assert_eq!(lattice_entropy_at(&f, &x, i, &o).unwrap(), module_side);
            }
        }
    }
}

fn shift_family(battery: &mut Battery, m: &ModuleObject) -> Vec<Morphism> {
    let mut fam = bernoulli_family(m);
    fam.push(battery.endomorphism(m).unwrap());
    fam.dedup();
    fam
}

fn value(tag: InvariantTag, e: &PreradicalExpr, m: &ModuleObject, fam: &[Morphism]) -> Option<NormValue> {
    match entropy_of_preradical(tag, e, m, Some(fam), &Options::default()) {
        Ok(o) => Some(o.value),
        Err(Error::Undetermined(_)) | Err(Error::NoStabilization(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn entropy_is_monotone_in_the_preradical() {
    let mut battery = Battery::new(8);
    let mut compared = 0;
    for _ in 0..60 {
        let m = battery.shift_module();
        let fam = shift_family(&mut battery, &m);
        let s = battery.expression(2);
        let t = battery.expression(2);
        let (vs, vt) = (eval_preradical(&s, &m).unwrap(), eval_preradical(&t, &m).unwrap());
        let (lo, hi) = if vs.le(&vt).unwrap() { (s, t) } else if vt.le(&vs).unwrap() { (t, s) } else { continue };
        if let (Some(a), Some(b)) = (value(InvariantTag::Log, &lo, &m, &fam), value(InvariantTag::Log, &hi, &m, &fam)) {
            assert!(a <= b, "{lo} vs {hi}: {a} > {b}");
            compared += 1;
        }
    }
    assert!(compared >= 20, "only {compared} comparable pairs");
}

#[test]
fn four_operation_chain_on_shift_modules() {
    let mut battery = Battery::new(13);
    let mut checked = 0;
    for _ in 0..30 {
        let m = battery.shift_module();
        let fam = shift_family(&mut battery, &m);
        let s = battery.expression(1);
        let t = battery.expression(1);
        let chain = [
            PreradicalExpr::product(s.clone(), t.clone()),
            PreradicalExpr::meet(s.clone(), t.clone()),
            PreradicalExpr::join(s.clone(), t.clone()),
            PreradicalExpr::coproduct(s, t),
        ];
        let values: Option<Vec<NormValue>> = chain.iter().map(|e| value(InvariantTag::Log, e, &m, &fam)).collect();
        if let Some(v) = values {
            assert!(v.windows(2).all(|w| w[0] <= w[1]), "{v:?}");
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} determined chains");
}

/// `ent_i(σ)|_M ≤ ent_i(σ(M))`, with the family restricted to `σ(M)`.
#[test]
fn preradical_entropy_is_bounded_by_its_value() {
    let o = Options::default();
    for block in [[2].as_slice(), &[4], &[2, 2], &[3]] {
        let m = shift_over(block);
        let fam = bernoulli_family(&m);
        for e in [PreradicalExpr::Torsion, PreradicalExpr::PTorsion(2), PreradicalExpr::Identity] {
            let n = eval_preradical(&e, &m).unwrap();
            let left = entropy_of_preradical(InvariantTag::Log, &e, &m, Some(&fam), &o).unwrap().value;
            if n.is_zero() {
                assert!(left.is_zero());
                continue;
            }
            let restricted: Vec<(ModuleObject, Morphism)> = fam.iter().map(|f| restrict_uniform(f, &n).unwrap()).collect();
            let carrier = restricted[0].0.clone();
            let rfam: Vec<Morphism> = restricted.into_iter().map(|(_, f)| f).collect();
            let right = entropy_of_module(InvariantTag::Log, &carrier, Some(&rfam), &o).unwrap().value;
            assert!(left <= right, "{e} on {block:?}");
        }
    }
}

#[test]
fn lattice_side_agrees_with_module_side() {
    let o = Options::default();
    let mut battery = Battery::new(17);
    for _ in 0..25 {
        let m = battery.finite_module(32);
        let e = battery.expression(2);
        for tag in TAGS {
            let a = entropy_of_preradical(tag, &e, &m, None, &o).unwrap().value;
            let b = entropy_lattice_side(tag, &e, &m, None, &o).unwrap().value;
            assert_eq!(a, b);
        }
    }
    for p in [2, 3, 5] {
        let m = shift_over(&[p]);
        let fam = bernoulli_family(&m);
        for tag in TAGS {
            let a = entropy_of_preradical(tag, &PreradicalExpr::Torsion, &m, Some(&fam), &o).unwrap().value;
            let b = entropy_lattice_side(tag, &PreradicalExpr::Torsion, &m, Some(&fam), &o).unwrap().value;
            assert_eq!(a, b);
        }
    }
}

#[test]
fn lattice_tables_cover_every_submodule() {
    let o = Options::default();
    let z8 = ModuleObject::cyclic(RingSpec::Integers, 8).unwrap();
    let f = normed_semilattice(&z8, InvariantTag::Log, &o).unwrap();
    assert_eq!(f.lattice().len(), enumerate_submodules(&z8, &o).unwrap().len());
    for i in 0..f.lattice().len() {
        assert_eq!(f.norm(i), &invariant(InvariantTag::Log, f.lattice().get(i)).unwrap());
    }
}

#[test]
fn ring_change_examples() {
    let o = Options::default();
    let z6 = ModuleObject::cyclic(RingSpec::modulo(6).unwrap(), 6).unwrap();
    let restricted = restrict_scalars(&z6).unwrap();
    assert_eq!(restricted.factors().unwrap(), &[6]);
    assert_eq!(restricted.ring(), RingSpec::Integers);
    let v = phi_t_eval(&PreradicalExpr::PTorsion(2), &z6).unwrap();
    assert_eq!(v, Submodule::generated_by(&restricted, &[vec![3]]).unwrap());
    let z4 = ModuleObject::cyclic(RingSpec::modulo(4).unwrap(), 2).unwrap();
    assert_eq!(restrict_scalars(&z4).unwrap().factors().unwrap(), &[2]);
    for p in [2, 3, 5] {
        let block = ModuleObject::cyclic(RingSpec::modulo(p).unwrap(), p).unwrap();
        let m = ModuleObject::shift(block).unwrap();
        let fam = vec![Morphism::bernoulli_shift(&m).unwrap()];
        let r = ring_change_report(&m, None, Some(&fam), &o).unwrap();
        assert!(r.holds);
        assert_eq!((r.over_s.clone(), r.over_r.clone()), (log_p(p), log_p(p)));
        let t = ring_change_report(&m, Some(&PreradicalExpr::Torsion), Some(&fam), &o).unwrap();
        assert!(t.holds && t.over_s == log_p(p));
    }
    let mut battery = Battery::new(4);
    for _ in 0..20 {
        let n = battery.modulus();
        let m = battery.module_over(n, 16);
        let r = ring_change_report(&m, Some(&PreradicalExpr::Torsion), None, &o).unwrap();
        assert!(r.holds && r.over_s.is_zero() && r.over_r.is_zero());
    }
}

//! Seeded verification sweeps. Each suite draws its cases from its own
//! battery, so suites can be run alone or together with identical output.

use entroflow_core::entropy::{
    entropy_at, entropy_lattice_side, entropy_of_flow_preradical, entropy_of_module, entropy_of_preradical,
    fekete_gaps, lattice_entropy_at, lattice_entropy_untabulated, ring_change_report, trajectory_profile,
    TrajectoryVerdict, FEKETE_TOLERANCE,
};
use entroflow_core::flow::{alpha_flow, induce_flow_preradical, omega_flow, SubFlow};
use entroflow_core::preradical::Violation;
use entroflow_core::{
    check_naturality, compare_preradicals, eval_preradical, image_of, lattice_morphism, normed_semilattice,
    project_flow_preradical, Battery, Flow, GeneratingPair, InvariantTag, ModuleObject, Morphism, NormValue, Options,
    Order, PreradicalExpr, RingSpec, Submodule,
};

use crate::error::CliError;
use crate::report::Item;
use crate::workspace::Workspace;

pub const SUITES: [&str; 6] = ["naturality", "order", "chain", "flow-roundtrip", "lattice-equality", "ring-change"];

const TAGS: [InvariantTag; 2] = [InvariantTag::Log, InvariantTag::Rank];

pub struct SuiteContext<'a> {
    pub seed: u64,
    pub size: usize,
    pub opts: Options,
    pub workspace: Option<&'a Workspace>,
}

/// Items and provenance notes for `name`, or for every suite when `name` is
/// `all`.
pub fn run_suite(name: &str, ctx: &SuiteContext) -> Result<(Vec<Item>, Vec<String>), CliError> {
    if name == "all" {
        let mut items = Vec::new();
        let mut notes = Vec::new();
        for s in SUITES {
            let (i, n) = run_suite(s, ctx)?;
            items.extend(i);
            notes.extend(n);
        }
        return Ok((items, notes));
    }
    let mut out = Sweep { items: Vec::new(), notes: Vec::new(), battery: battery_for(name, ctx.seed), ctx };
    match name {
        "naturality" => out.naturality(),
        "order" => out.order(),
        "chain" => out.chain(),
        "flow-roundtrip" => out.flow_roundtrip(),
        "lattice-equality" => out.lattice_equality(),
        "ring-change" => out.ring_change(),
        other => return Err(CliError::UnknownSuite(other.into())),
    }
    Ok((out.items, out.notes))
}

fn battery_for(suite: &str, seed: u64) -> Battery {
    let salt = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    Battery::new(seed ^ salt)
}

fn le(a: &NormValue, b: &NormValue, opts: &Options) -> bool {
    a.cmp_with_precision(b, opts.precision_bits).is_le()
}

fn is_chain(values: &[NormValue], opts: &Options) -> bool {
    values.windows(2).all(|w| le(&w[0], &w[1], opts))
}

fn render(values: &[NormValue]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" <= ")
}

fn witness_of(v: &Violation) -> String {
    match &v.witness {
        Some(w) => format!("{w:?} under {}", v.morphism),
        None => format!("{} ({})", v.morphism, v.detail),
    }
}

fn four_operations(s: &PreradicalExpr, t: &PreradicalExpr) -> [PreradicalExpr; 4] {
    [
        PreradicalExpr::product(s.clone(), t.clone()),
        PreradicalExpr::meet(s.clone(), t.clone()),
        PreradicalExpr::join(s.clone(), t.clone()),
        PreradicalExpr::coproduct(s.clone(), t.clone()),
    ]
}

/// `N + η(N) + η²(N) + ⋯`, the smallest stable submodule containing `N`.
fn stable_hull(n: &Submodule, eta: &Morphism) -> entroflow_core::Result<Submodule> {
    let mut acc = n.clone();
    loop {
        let next = acc.sum(&image_of(eta, &acc)?)?;
        if next == acc {
            return Ok(acc);
        }
        acc = next;
    }
}

struct Sweep<'a> {
    items: Vec<Item>,
    notes: Vec<String>,
    battery: Battery,
    ctx: &'a SuiteContext<'a>,
}

impl Sweep<'_> {
    fn opts(&self) -> &Options {
        &self.ctx.opts
    }

    fn size(&self) -> usize {
        self.ctx.size
    }

    /// Runs `f`; an error becomes an error item instead of aborting.
    fn guarded(&mut self, id: String, f: impl FnOnce(&mut Self) -> entroflow_core::Result<Item>) {
        let item = f(self).unwrap_or_else(|e| Item::failed(id, e));
        self.items.push(item);
    }

    /// `{0, id, β}` plus one random endomorphism.
    fn shift_family(&mut self, m: &ModuleObject) -> entroflow_core::Result<Vec<Morphism>> {
        let mut fam = vec![Morphism::zero(m, m)?, Morphism::identity(m), Morphism::bernoulli_shift(m)?];
        let extra = self.battery.endomorphism(m)?;
        if !fam.contains(&extra) {
            fam.push(extra);
        }
        Ok(fam)
    }

    /// Even indices give a shift module with a declared family, odd ones a
    /// finite module whose full `End(M)` is used.
    fn case_module(&mut self, i: usize, max_order: i64) -> entroflow_core::Result<(ModuleObject, Option<Vec<Morphism>>)> {
        if i.is_multiple_of(2) {
            let m = self.battery.shift_module();
            let fam = self.shift_family(&m)?;
            Ok((m, Some(fam)))
        } else {
            Ok((self.battery.finite_module(max_order), None))
        }
    }

    fn naturality(&mut self) {
        let size = self.size();
        let mut maps = Vec::with_capacity(2 * size);
        while maps.len() < 2 * size {
            let m = if maps.len() % 5 == 4 { self.battery.module_with_free_part() } else { self.battery.finite_module(256) };
            let k = if maps.len() % 7 == 6 { self.battery.module_with_free_part() } else { self.battery.finite_module(256) };
            match self.battery.morphism(&m, &k) {
                Ok(f) => maps.push(f),
                Err(e) => {
                    self.items.push(Item::failed(format!("naturality/morphism/{}", maps.len()), e));
                    return;
                }
            }
        }
        let mut exprs: Vec<(String, PreradicalExpr)> = [
            PreradicalExpr::Zero,
            PreradicalExpr::Identity,
            PreradicalExpr::Torsion,
            PreradicalExpr::PTorsion(2),
            PreradicalExpr::PTorsion(3),
            PreradicalExpr::PTorsion(5),
            PreradicalExpr::PTorsion(7),
        ]
        .into_iter()
        .map(|e| (format!("builtin/{e}"), e))
        .collect();
        if let Some(ws) = self.ctx.workspace {
            exprs.extend(ws.preradicals.iter().map(|(n, e)| (format!("workspace/{n}"), e.clone())));
        }
        for i in 0..size {
            exprs.push((format!("closure/{i:03}"), self.battery.expression(3)));
        }
        for i in 0..2 {
            match self.battery.generating_leaf(16) {
                Ok(e) => exprs.push((format!("generated/{i}"), e)),
                Err(e) => self.items.push(Item::failed(format!("naturality/generated/{i}"), e)),
            }
        }
        for (label, e) in exprs {
            let report = check_naturality(&e, &maps);
            let mut item = Item::check(format!("naturality/{label}"), report.passed())
                .value(e.to_string())
                .detail(format!("{} squares", report.checked));
            if let Some(v) = report.violations.first() {
                item = item.witness(witness_of(v));
            }
            self.items.push(item);
        }
        self.notes.push(format!("naturality: {} morphisms between finite and mixed modules", maps.len()));
    }

    fn order(&mut self) {
        let size = self.size();
        let (mut found, mut attempts) = (0, 0);
        while found < size && attempts < 50 * size.max(1) {
            attempts += 1;
            let (m, fam) = match self.case_module(attempts, 16) {
                Ok(c) => c,
                Err(e) => {
                    self.items.push(Item::failed(format!("order/case/{attempts}"), e));
                    continue;
                }
            };
            let s = self.battery.expression(2);
            let t = self.battery.expression(2);
            let (vs, vt) = match (eval_preradical(&s, &m), eval_preradical(&t, &m)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    self.items.push(Item::failed(format!("order/case/{attempts}"), e));
                    continue;
                }
            };
            let (lo, hi) = match (vs.le(&vt), vt.le(&vs)) {
                (Ok(true), _) => (s, t),
                (_, Ok(true)) => (t, s),
                _ => continue,
            };
            let id = format!("order/{found:03}");
            found += 1;
            self.guarded(id.clone(), |sw| {
                let mut values = Vec::new();
                let mut holds = true;
                for tag in TAGS {
                    let a = entropy_of_preradical(tag, &lo, &m, fam.as_deref(), sw.opts())?.value;
                    let b = entropy_of_preradical(tag, &hi, &m, fam.as_deref(), sw.opts())?.value;
                    holds &= le(&a, &b, sw.opts());
                    values.push(format!("{tag}: {a} <= {b}"));
                }
                Ok(Item::check(id, holds).value(values.join("; ")).detail(format!("{lo} <= {hi} on {m}")))
            });
        }
        if found < size {
            self.items.push(Item::failed("order/sampling", format!("only {found} comparable pairs in {attempts} draws")));
        }
        let modules: Vec<ModuleObject> = (0..size.max(8)).map(|_| self.battery.finite_module(256)).collect();
        let mut pairs = vec![("zero-below-tor", PreradicalExpr::Zero, PreradicalExpr::Torsion)];
        for p in [2, 3, 5] {
            pairs.push(("ptor-below-tor", PreradicalExpr::PTorsion(p), PreradicalExpr::Torsion));
        }
        for _ in 0..3 {
            let s = self.battery.expression(2);
            let t = self.battery.expression(2);
            pairs.push(("product-below-coproduct", PreradicalExpr::product(s.clone(), t.clone()), PreradicalExpr::coproduct(s, t)));
        }
        for (i, (label, a, b)) in pairs.into_iter().enumerate() {
            let id = format!("order/battery/{i:02}-{label}");
            self.guarded(id.clone(), |_| {
                let v = compare_preradicals(&a, &b, &modules)?;
                let item = Item::check(id, matches!(v.order, Order::Le | Order::Eq))
                    .value(v.order.to_string())
                    .detail(format!("{a} vs {b}"));
                Ok(match v.not_le {
                    Some(w) => item.witness(w.to_string()),
                    None => item,
                })
            });
        }
        self.notes.push(format!("order: verdicts hold on a battery of {} modules, not on all modules", modules.len()));
    }

    fn chain(&mut self) {
        let size = self.size();
        for i in 0..size {
            let id = format!("chain/module/{i:03}");
            self.guarded(id.clone(), |sw| {
                let (m, fam) = sw.case_module(i, 16)?;
                let s = sw.battery.expression(2);
                let t = sw.battery.expression(2);
                let ops = four_operations(&s, &t);
                let subs = ops.iter().map(|e| eval_preradical(e, &m)).collect::<entroflow_core::Result<Vec<_>>>()?;
                let mut holds = true;
                for w in subs.windows(2) {
                    holds &= w[0].le(&w[1])?;
                }
                let mut rendered = Vec::new();
                for tag in TAGS {
                    let values = ops
                        .iter()
                        .map(|e| entropy_of_preradical(tag, e, &m, fam.as_deref(), sw.opts()).map(|o| o.value))
                        .collect::<entroflow_core::Result<Vec<_>>>()?;
                    holds &= is_chain(&values, sw.opts());
                    rendered.push(format!("{tag}: {}", render(&values)));
                }
                Ok(Item::check(id, holds).value(rendered.join("; ")).detail(format!("s = {s}, t = {t}, M = {m}")))
            });
        }
        for i in 0..size {
            let id = format!("chain/flow/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = if i % 2 == 0 { sw.battery.shift_module() } else { sw.battery.finite_module(32) };
                let eta = sw.battery.endomorphism(&m)?;
                let x = Flow::new(&m, &eta)?;
                let s = sw.battery.expression(2);
                let t = sw.battery.expression(2);
                let ops = four_operations(&s, &t);
                let mut holds = true;
                let subs = ops.iter().map(|e| induce_flow_preradical(e, &x)).collect::<entroflow_core::Result<Vec<_>>>()?;
                for w in subs.windows(2) {
                    holds &= w[0].sub().le(w[1].sub())?;
                }
                let values = ops
                    .iter()
                    .map(|e| entropy_of_flow_preradical(InvariantTag::Log, e, &x, sw.opts()).map(|o| o.value))
                    .collect::<entroflow_core::Result<Vec<_>>>()?;
                holds &= is_chain(&values, sw.opts());
                Ok(Item::check(id, holds).value(render(&values)).detail(format!("s = {s}, t = {t}, flow on {m}")))
            });
        }
    }

    fn flow_roundtrip(&mut self) {
        let size = self.size();
        for i in 0..size {
            let id = format!("flow-roundtrip/project/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = match i % 4 {
                    0 => sw.battery.module_with_free_part(),
                    1 => sw.battery.shift_module(),
                    _ => sw.battery.finite_module(256),
                };
                let e = sw.battery.expression(3);
                let projected = project_flow_preradical(&e, &m)?;
                let direct = eval_preradical(&e, &m)?;
                Ok(Item::check(id, projected == direct).value(direct.to_string()).detail(format!("{e} on {m}")))
            });
        }
        for i in 0..size {
            let id = format!("flow-roundtrip/order/{i:03}");
            self.guarded(id.clone(), |sw| {
                let s = sw.battery.expression(2);
                let t = sw.battery.expression(2);
                let m = sw.battery.finite_module(256);
                let flows = [Flow::trivial(&m), Flow::new(&m, &sw.battery.endomorphism(&m)?)?];
                let lower = PreradicalExpr::meet(s.clone(), t.clone());
                let mut holds = true;
                let mut nested_everywhere = true;
                for x in &flows {
                    holds &= induce_flow_preradical(&lower, x)?.sub().le(induce_flow_preradical(&s, x)?.sub())?;
                    nested_everywhere &= induce_flow_preradical(&s, x)?.sub().le(induce_flow_preradical(&t, x)?.sub())?;
                }
                if nested_everywhere {
                    holds &= eval_preradical(&s, &m)?.le(&eval_preradical(&t, &m)?)?;
                }
                Ok(Item::check(id, holds).detail(format!("s = {s}, t = {t} on {m}")))
            });
        }
        for i in 0..size {
            let id = format!("flow-roundtrip/equivariant/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = sw.battery.finite_module(32);
                let k = sw.battery.finite_module(32);
                let source = Flow::new(&m, &sw.battery.endomorphism(&m)?)?;
                let target = Flow::new(&k, &sw.battery.endomorphism(&k)?)?;
                let n = stable_hull(&sw.battery.submodule(&m)?, source.endo())?;
                let sub = SubFlow::of(&source, n.clone())?;
                let pair = GeneratingPair::new("M", "N", n.clone());
                let a_bar = alpha_flow(&sub, &target)?;
                let w_bar = omega_flow(&sub, &target)?;
                let a = eval_preradical(&PreradicalExpr::alpha(pair.clone()), &k)?;
                let w = eval_preradical(&PreradicalExpr::omega(pair), &k)?;
                let own_a = alpha_flow(&sub, &source)?;
                let own_w = omega_flow(&sub, &source)?;
                let holds = a_bar.is_valid()?
                    && w_bar.is_valid()?
                    && a_bar.sub().le(&a)?
                    && w.le(w_bar.sub())?
                    && n.le(own_a.sub())?
                    && own_w.sub().le(&n)?;
                Ok(Item::check(id, holds).detail(format!("N = {n} in {m}, target {k}")))
            });
        }
    }

    fn lattice_equality(&mut self) {
        let size = self.size();
        for i in 0..size {
            let id = format!("lattice-equality/finite/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = sw.battery.finite_module(16);
                let s = sw.battery.expression(2);
                let t = sw.battery.expression(2);
                let mut holds = true;
                let mut shown = Vec::new();
                for tag in TAGS {
                    let module_side = entropy_of_module(tag, &m, None, sw.opts())?.value;
                    let lattice_side = entropy_lattice_side(tag, &PreradicalExpr::Identity, &m, None, sw.opts())?.value;
                    holds &= module_side == lattice_side;
                    for e in std::iter::once(s.clone()).chain(four_operations(&s, &t)) {
                        let a = entropy_of_preradical(tag, &e, &m, None, sw.opts())?.value;
                        let b = entropy_lattice_side(tag, &e, &m, None, sw.opts())?.value;
                        holds &= a == b;
                    }
                    shown.push(format!("{tag}: {module_side} = {lattice_side}"));
                }
                Ok(Item::check(id, holds).value(shown.join("; ")).detail(format!("s = {s}, t = {t}, M = {m}")))
            });
        }
        let blocks: [&[i64]; 5] = [&[2], &[3], &[5], &[4], &[2, 2]];
        for block in blocks {
            let id = format!("lattice-equality/shift-torsion/{block:?}");
            self.guarded(id.clone(), |sw| {
                let m = ModuleObject::shift(ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, block)?)?;
                let fam = vec![Morphism::zero(&m, &m)?, Morphism::identity(&m), Morphism::bernoulli_shift(&m)?];
                let mut holds = true;
                let mut shown = Vec::new();
                for tag in TAGS {
                    let a = entropy_of_preradical(tag, &PreradicalExpr::Torsion, &m, Some(&fam), sw.opts())?.value;
                    let b = entropy_lattice_side(tag, &PreradicalExpr::Torsion, &m, Some(&fam), sw.opts())?.value;
                    holds &= a == b;
                    shown.push(format!("{tag}: {a} = {b}"));
                }
                Ok(Item::check(id, holds).value(shown.join("; ")))
            });
        }
        for i in 0..size.div_ceil(5) {
            let id = format!("lattice-equality/shift-operations/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = sw.battery.shift_module();
                let fam = sw.shift_family(&m)?;
                let s = sw.battery.expression(1);
                let t = sw.battery.expression(1);
                let mut holds = true;
                let mut shown = Vec::new();
                for e in four_operations(&s, &t) {
                    let a = entropy_of_preradical(InvariantTag::Log, &e, &m, Some(&fam), sw.opts())?.value;
                    let b = entropy_lattice_side(InvariantTag::Log, &e, &m, Some(&fam), sw.opts())?.value;
                    holds &= a == b;
                    shown.push(a.to_string());
                }
                Ok(Item::check(id, holds).value(shown.join(", ")).detail(format!("s = {s}, t = {t}, M = {m}")))
            });
        }
        for i in 0..size {
            let id = format!("lattice-equality/trajectory/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = if i % 2 == 0 { sw.battery.shift_module() } else { sw.battery.finite_module(64) };
                let eta = sw.battery.endomorphism(&m)?;
                let l = if m.is_shift() { Submodule::window_block(&m, 1)? } else { sw.battery.submodule(&m)? };
                let mut holds = true;
                let mut value = NormValue::zero();
                for tag in TAGS {
                    let module_side = entropy_at(tag, &l, &eta, sw.opts())?;
                    holds &= lattice_entropy_untabulated(tag, &l, &eta, sw.opts())? == module_side;
                    if !m.is_shift() {
                        let f = normed_semilattice(&m, tag, sw.opts())?;
                        let x = lattice_morphism(&eta, sw.opts())?;
                        let idx = f.lattice().index_of(&l).expect("every submodule is tabulated");
                        holds &= lattice_entropy_at(&f, &x, idx, sw.opts())? == module_side;
                    }
                    if tag == InvariantTag::Log {
                        value = module_side;
                    }
                }
                Ok(Item::check(id, holds).norm(&value).detail(format!("L = {l} in {m}")))
            });
            let id = format!("lattice-equality/fekete/{i:03}");
            self.guarded(id.clone(), |sw| {
                let m = sw.battery.shift_module();
                let eta = sw.battery.endomorphism(&m)?;
                let l = Submodule::window_block(&m, 1)?;
                let profile = trajectory_profile(InvariantTag::Log, &l, &eta, sw.opts())?;
                Ok(match &profile.verdict {
                    TrajectoryVerdict::AffineSlope { slope, .. } => {
                        let gaps = fekete_gaps(&profile.norms(), slope);
                        let min = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
                        let last = *gaps.last().expect("nonempty");
                        let holds = min >= -FEKETE_TOLERANCE && last <= min + FEKETE_TOLERANCE;
                        Item::check(id, holds).norm(slope).detail(format!("{} terms, last gap {last:.3e}", gaps.len()))
                    }
                    TrajectoryVerdict::Stabilized(n) => Item::ok(id).norm(&NormValue::zero()).detail(format!("stabilized at {n}")),
                    TrajectoryVerdict::Undetermined => Item::failed(id, "no affine tail within budget"),
                })
            });
        }
        self.notes.push(format!("lattice-equality: shift candidates use windows 1..{}", self.opts().s_max));
    }

    fn ring_change(&mut self) {
        for i in 0..self.size() {
            let id = format!("ring-change/{i:03}");
            self.guarded(id.clone(), |sw| {
                let n = sw.battery.modulus();
                let (m, fam) = if i % 5 == 0 {
                    let mut block = sw.battery.module_over(n, n.max(8));
                    while block.is_zero() {
                        block = sw.battery.module_over(n, n.max(8));
                    }
                    let m = ModuleObject::shift(block)?;
                    let fam = vec![Morphism::zero(&m, &m)?, Morphism::identity(&m), Morphism::bernoulli_shift(&m)?];
                    (m, Some(fam))
                } else {
                    (sw.battery.module_over(n, 16), None)
                };
                let e = sw.battery.expression(2);
                let plain = ring_change_report(&m, None, fam.as_deref(), sw.opts())?;
                let with_e = ring_change_report(&m, Some(&e), fam.as_deref(), sw.opts())?;
                Ok(Item::check(id, plain.holds && with_e.holds)
                    .value(format!(
                        "{} <= {}; {} <= {}",
                        plain.over_s, plain.over_r, with_e.over_s, with_e.over_r
                    ))
                    .detail(format!("{m} over Z/{n}, s = {e}")))
            });
        }
    }
}

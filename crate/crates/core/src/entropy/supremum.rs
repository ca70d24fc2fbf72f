//! Module-side suprema: `ent_i(η)`, `ent_i(M)`, `ent_i(σ)|_M` and the flow
//! version `ent_i(σ̄)_{(M,η)}`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::entropy::invariant::InvariantTag;
use crate::entropy::norm::NormValue;
use crate::entropy::trajectory::entropy_at;
use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::hom::enumerate_endomorphisms;
use crate::module::{Cardinality, ModuleObject};
use crate::morphism::Morphism;
use crate::options::Options;
use crate::preradical::{eval_preradical, PreradicalExpr};
use crate::submodule::{Submodule, Support};

/// An entropy value with the candidate families it was computed over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyOutcome {
    pub value: NormValue,
    pub provenance: BTreeSet<String>,
}

impl EntropyOutcome {
    fn zero() -> Self {
        EntropyOutcome { value: NormValue::zero(), provenance: BTreeSet::new() }
    }

    fn absorb(&mut self, other: EntropyOutcome) {
        self.value = std::mem::replace(&mut self.value, NormValue::zero()).max(other.value);
        self.provenance.extend(other.provenance);
    }

    fn label(mut self, s: impl Into<String>) -> Self {
        self.provenance.insert(s.into());
        self
    }
}

/// Candidate submodules `L ∈ F_i(X)` for a supremum inside `X`.
#[derive(Debug, Clone)]
pub enum Candidates {
    /// Every listed `L` is evaluated.
    Listed { items: Vec<Submodule>, label: String },
    /// `S^s` for `s = 1..=s_max` inside a uniform `⊕S`.
    Windows { uniform: Submodule, s_max: usize },
}

/// Every submodule of a finite `X`, grown one element at a time.
pub fn submodules_of(x: &Submodule, opts: &Options) -> Result<Vec<Submodule>> {
    let cap = opts.max_order as u128;
    let size = match x.cardinality()? {
        Cardinality::Finite(k) => k,
        Cardinality::Infinite => u128::MAX,
    };
    if size > cap {
        return Err(Error::TooLarge { what: "candidate module", size, cap });
    }
    // One representative element per cyclic submodule.
    let mut cyclic = HashSet::new();
    let mut elems: Vec<Vec<i64>> = Vec::new();
    for e in x.elements()? {
        let c = Submodule::generated_by(x.parent(), &[e.coords().to_vec()])?;
        if !c.is_zero() && cyclic.insert(c) {
            elems.push(e.coords().to_vec());
        }
    }
    let zero = Submodule::zero(x.parent())?;
    let mut seen: HashSet<Submodule> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(n) = queue.pop_front() {
        for v in &elems {
            if n.contains_coords(v)? {
                continue;
            }
            let mut gens = n.generators();
            gens.push(v.clone());
            let bigger = Submodule::generated_by(x.parent(), &gens)?;
            if seen.insert(bigger.clone()) {
                if seen.len() as u128 > cap {
                    return Err(Error::TooLarge { what: "candidate family", size: seen.len() as u128, cap });
                }
                queue.push_back(bigger);
            }
        }
    }
    let mut out: Vec<Submodule> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Candidates for `sup { H_i(L, η) : L ∈ F_i(X) }`.
///
/// `H_i(·, η)` is monotone in `L`, so any family cofinal in `F_i(X)` gives
/// the supremum: `F_log` of a finitely generated `X` is `L(Tor X)`; a
/// finite-rank `X` is its own cofinal candidate for the rank.
pub fn candidates(tag: InvariantTag, x: &Submodule, opts: &Options) -> Result<Candidates> {
    match x.support() {
        Support::Uniform => Ok(Candidates::Windows { uniform: x.clone(), s_max: opts.s_max }),
        Support::Window(_) => Ok(Candidates::Listed { items: vec![x.clone()], label: "candidate: the finite value itself".into() }),
        Support::Full => match (x.cardinality()?, tag) {
            (Cardinality::Finite(_), _) => {
                Ok(Candidates::Listed { items: submodules_of(x, opts)?, label: "candidates: all of F_i".into() })
            }
            (Cardinality::Infinite, InvariantTag::Log) => {
                let t = x.intersect(&Submodule::torsion(x.parent())?)?;
                Ok(Candidates::Listed { items: submodules_of(&t, opts)?, label: "candidates: all of F_log (torsion part)".into() })
            }
            (Cardinality::Infinite, InvariantTag::Rank) => {
                Ok(Candidates::Listed { items: vec![x.clone()], label: "candidate: the value itself (cofinal for rank)".into() })
            }
        },
    }
}

/// `sup { H_i(L, η) : L ∈ F_i(X) }`.
pub fn sup_over_candidates(tag: InvariantTag, x: &Submodule, eta: &Morphism, opts: &Options) -> Result<EntropyOutcome> {
    match candidates(tag, x, opts)? {
        Candidates::Listed { items, label } => {
            let mut best = EntropyOutcome::zero().label(label);
            for l in &items {
                let v = entropy_at(tag, l, eta, opts)?;
                best.absorb(EntropyOutcome { value: v, provenance: BTreeSet::new() });
            }
            Ok(best)
        }
        Candidates::Windows { uniform, s_max } => {
            if s_max < 3 {
                return Err(Error::Undetermined(format!("need at least three windows, have {s_max}")));
            }
            let block = uniform.block_part().expect("uniform");
            let mut values = Vec::with_capacity(s_max);
            for s in 1..=s_max {
                let l = Submodule::uniform_window(uniform.parent(), &block, s)?;
                values.push(entropy_at(tag, &l, eta, opts)?);
            }
            let tail = &values[s_max - 3..];
            if !(tail[0] == tail[1] && tail[1] == tail[2]) {
                return Err(Error::Undetermined(format!("window values {}", display_list(&values))));
            }
            let value = values.into_iter().max().expect("nonempty");
            Ok(EntropyOutcome { value, provenance: BTreeSet::new() }.label(format!("candidates: windows 1..{s_max}")))
        }
    }
}

fn display_list(values: &[NormValue]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

/// `ent_i(η) = sup { H_i(L, η) : L ∈ F_i(M) }`.
pub fn entropy_of_endo(tag: InvariantTag, x: &Flow, opts: &Options) -> Result<EntropyOutcome> {
    sup_over_candidates(tag, &Submodule::whole(x.carrier()), x.endo(), opts)
}

/// `End(M)` for finite `M`, or the declared family.
pub fn endomorphism_supply(m: &ModuleObject, family: Option<&[Morphism]>, opts: &Options) -> Result<(Vec<Morphism>, String)> {
    match family {
        Some([]) => Err(Error::EmptyFamily),
        Some(f) => {
            if f.iter().any(|e| e.dom() != m || !e.is_endomorphism()) {
                return Err(Error::MismatchedParent);
            }
            Ok((f.to_vec(), format!("relative to declared family of {}", f.len())))
        }
        None if m.is_shift() => Err(Error::EmptyFamily),
        None => {
            let all = enumerate_endomorphisms(m, opts.max_order as u128)?;
            let label = format!("endomorphisms: all {} of End(M)", all.len());
            Ok((all, label))
        }
    }
}

/// `sup` over the endomorphism supply of `sup { H_i(L, η) : L ∈ F_i(X) }`,
/// with trajectories taken in the parent of `X`.
pub fn entropy_relative(
    tag: InvariantTag,
    x: &Submodule,
    family: Option<&[Morphism]>,
    opts: &Options,
) -> Result<EntropyOutcome> {
    let (endos, label) = endomorphism_supply(x.parent(), family, opts)?;
    let mut best = EntropyOutcome::zero().label(label);
    for eta in &endos {
        best.absorb(sup_over_candidates(tag, x, eta, opts)?);
    }
    Ok(best)
}

/// `ent_i(M) = sup { ent_i(η) : η ∈ End(M) }`.
pub fn entropy_of_module(
    tag: InvariantTag,
    m: &ModuleObject,
    family: Option<&[Morphism]>,
    opts: &Options,
) -> Result<EntropyOutcome> {
    let (endos, label) = endomorphism_supply(m, family, opts)?;
    let mut best = EntropyOutcome::zero().label(label);
    for eta in &endos {
        best.absorb(entropy_of_endo(tag, &Flow::new(m, eta)?, opts)?);
    }
    Ok(best)
}

/// `ent_i(σ)|_M`: `η` ranges over `End(M)`, `L` over `F_i(σ(M))`.
pub fn entropy_of_preradical(
    tag: InvariantTag,
    e: &PreradicalExpr,
    m: &ModuleObject,
    family: Option<&[Morphism]>,
    opts: &Options,
) -> Result<EntropyOutcome> {
    entropy_relative(tag, &eval_preradical(e, m)?, family, opts)
}

/// `ent_i(σ̄)_{(M, η)}`: `L` ranges over `F_i(σ(M))`, `η` is fixed.
pub fn entropy_of_flow_preradical(tag: InvariantTag, e: &PreradicalExpr, x: &Flow, opts: &Options) -> Result<EntropyOutcome> {
    sup_over_candidates(tag, &eval_preradical(e, x.carrier())?, x.endo(), opts)
}

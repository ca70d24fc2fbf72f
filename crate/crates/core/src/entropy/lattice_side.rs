//! Entropy computed on `F_i(L(M))`: trajectories `N ∨ X_η(N) ∨ ⋯` use only
//! the join, the lattice map `X_η` and the semilattice norm.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::entropy::fekete::{fekete_limit, has_affine_tail};
use crate::entropy::invariant::{invariant, InvariantTag};
use crate::entropy::norm::NormValue;
use crate::entropy::supremum::{endomorphism_supply, EntropyOutcome};
use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::lattice::{normed_semilattice, LatticeMorphism, NormedSemilattice};
use crate::module::{Cardinality, ModuleObject};
use crate::morphism::Morphism;
use crate::options::Options;
use crate::preradical::{eval_preradical, PreradicalExpr};
use crate::submodule::{image_of, Submodule, Support};

/// `H(N, X) = lim i(N ∨ X(N) ∨ ⋯ ∨ X^{n-1}(N)) / n`, with the trajectory
/// built as `t_{k+1} = N ∨ X(t_k)`.
fn lattice_run<T, J, A, V>(base: &T, join: J, apply: A, norm: V, affine_tails: bool, opts: &Options) -> Result<NormValue>
where
    T: Clone + PartialEq,
    J: Fn(&T, &T) -> Result<T>,
    A: Fn(&T) -> Result<T>,
    V: Fn(&T) -> Result<NormValue>,
{
    let mut t = base.clone();
    let mut norms = vec![norm(&t)?];
    if !norms[0].is_finite() {
        return Err(Error::InfiniteNorm);
    }
    loop {
        let next = join(base, &apply(&t)?)?;
        if next == t {
            return Ok(NormValue::zero());
        }
        t = next;
        norms.push(norm(&t)?);
        if affine_tails && has_affine_tail(&norms, opts.fekete_window) {
            return fekete_limit(&norms, opts.fekete_window, opts.precision_bits);
        }
        if norms.len() as u64 >= opts.max_order {
            return Err(Error::NoStabilization(norms.len()));
        }
    }
}

/// `H_i(N, X_η)` on a tabulated semilattice, `N` given by lattice index.
pub fn lattice_entropy_at(f: &NormedSemilattice, x: &LatticeMorphism, n: usize, opts: &Options) -> Result<NormValue> {
    let lattice = f.lattice();
    lattice_run(
        &n,
        |&a, &b| lattice.join(a, b).ok_or_else(|| Error::Unrepresentable("join outside the held lattice".into())),
        |&a| Ok(x.apply(a)),
        |&a| Ok(f.norm(a).clone()),
        false,
        opts,
    )
}

/// `H_i(N, X_η)` where elements are handled as canonical submodules: the
/// join is the submodule sum and `X_η(N) = η(N)`.
pub fn lattice_entropy_untabulated(tag: InvariantTag, n: &Submodule, eta: &Morphism, opts: &Options) -> Result<NormValue> {
    lattice_run(
        n,
        |a, b| a.sum(b),
        |a| {
            let img = image_of(eta, a)?;
            if let Support::Window(w) = img.support() {
                if w > opts.max_window {
                    return Err(Error::SupportOverflow { window: w, cap: opts.max_window });
                }
            }
            Ok(img)
        },
        |a| invariant(tag, a),
        n.parent().is_shift(),
        opts,
    )
}

fn windows_sup(tag: InvariantTag, top: &Submodule, endos: &[Morphism], opts: &Options) -> Result<NormValue> {
    let block = top.block_part().expect("uniform");
    let s_max = opts.s_max;
    if s_max < 3 {
        return Err(Error::Undetermined(format!("need at least three windows, have {s_max}")));
    }
    let mut per_window = Vec::with_capacity(s_max);
    for s in 1..=s_max {
        let n = Submodule::uniform_window(top.parent(), &block, s)?;
        let mut best = NormValue::zero();
        for eta in endos {
            best = best.max(lattice_entropy_untabulated(tag, &n, eta, opts)?);
        }
        per_window.push(best);
    }
    let tail = &per_window[s_max - 3..];
    if !(tail[0] == tail[1] && tail[1] == tail[2]) {
        return Err(Error::Undetermined("lattice-side window values differ".into()));
    }
    Ok(per_window.into_iter().max().expect("nonempty"))
}

/// `ent_i(σ̃)|_{L(M)}` with `σ̃(L(M)) = [0, σ(M)]`; `e = id` gives
/// `ent_i(L(M))`.
pub fn entropy_lattice_side(
    tag: InvariantTag,
    e: &PreradicalExpr,
    m: &ModuleObject,
    family: Option<&[Morphism]>,
    opts: &Options,
) -> Result<EntropyOutcome> {
    let top = eval_preradical(e, m)?;
    let (endos, label) = endomorphism_supply(m, family, opts)?;
    let mut provenance = BTreeSet::from([label]);
    if m.is_shift() {
        let value = match top.support() {
            Support::Uniform => {
                provenance.insert(format!("lattice side: windows 1..{}", opts.s_max));
                windows_sup(tag, &top, &endos, opts)?
            }
            _ => {
                let mut best = NormValue::zero();
                for eta in &endos {
                    best = best.max(lattice_entropy_untabulated(tag, &top, eta, opts)?);
                }
                best
            }
        };
        return Ok(EntropyOutcome { value, provenance });
    }
    if m.cardinality() == Cardinality::Infinite && tag == InvariantTag::Rank {
        provenance.insert("lattice side: the value itself (cofinal for rank)".into());
        let mut best = NormValue::zero();
        for eta in &endos {
            best = best.max(lattice_entropy_untabulated(tag, &top, eta, opts)?);
        }
        return Ok(EntropyOutcome { value: best, provenance });
    }
    let f = normed_semilattice(m, tag, opts)?;
    let lattice = f.lattice().clone();
    let finite_top = top.intersect(&Submodule::torsion(m)?)?;
    let top_index = lattice
        .index_of(&finite_top)
        .ok_or_else(|| Error::Unrepresentable("value missing from the enumerated lattice".into()))?;
    let interval: Vec<usize> = lattice.down_set(top_index).into_iter().filter(|&i| f.contains(i)).collect();
    provenance.insert(format!("lattice side: {} tabulated elements", lattice.len()));
    let mut best = NormValue::zero();
    for eta in &endos {
        let x = LatticeMorphism::between(Arc::clone(&lattice), Arc::clone(&lattice), eta)?;
        for &n in &interval {
            best = best.max(lattice_entropy_at(&f, &x, n, opts)?);
        }
    }
    Ok(EntropyOutcome { value: best, provenance })
}

/// `ent_i(X_η)` restricted to `σ̃`, for a flow `(M, η)`.
pub fn entropy_lattice_side_flow(tag: InvariantTag, e: &PreradicalExpr, x: &Flow, opts: &Options) -> Result<EntropyOutcome> {
    entropy_lattice_side(tag, e, x.carrier(), Some(std::slice::from_ref(x.endo())), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn finite_lattice_entropy_vanishes() {
        let z8 = ModuleObject::cyclic(RingSpec::Integers, 8).unwrap();
        let out = entropy_lattice_side(InvariantTag::Log, &PreradicalExpr::Identity, &z8, None, &Options::default()).unwrap();
        assert!(out.value.is_zero());
    }

    #[test]
    fn shift_torsion_matches_bernoulli_value() {
        for p in [2u64, 3, 5] {
            let m = ModuleObject::shift(ModuleObject::cyclic(RingSpec::Integers, p as i64).unwrap()).unwrap();
            let fam = vec![Morphism::zero(&m, &m).unwrap(), Morphism::identity(&m), Morphism::bernoulli_shift(&m).unwrap()];
            let o = Options::default();
            let out = entropy_lattice_side(InvariantTag::Log, &PreradicalExpr::Torsion, &m, Some(&fam), &o).unwrap();
            assert_eq!(out.value, NormValue::log_prime(p));
            let zero = entropy_lattice_side(InvariantTag::Log, &PreradicalExpr::Zero, &m, Some(&fam), &o).unwrap();
            assert!(zero.value.is_zero());
        }
    }
}

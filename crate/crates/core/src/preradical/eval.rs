use crate::error::{Error, Result};
use crate::hom::hom_generators;
use crate::module::ModuleObject;
use crate::preradical::expr::{GeneratingPair, PreradicalExpr};
use crate::submodule::{image_of, preimage_of, quotient, Submodule};

/// `σ(M)`.
///
/// On a shift module `⊕ B` the value is `⊕ σ(B)`: preradicals commute with
/// direct sums, so evaluation happens on one block.
pub fn eval_preradical(e: &PreradicalExpr, m: &ModuleObject) -> Result<Submodule> {
    if let Some(block) = m.block() {
        if !e.is_builtin_closure() {
            return Err(Error::ShiftUnsupported("alpha/omega evaluation"));
        }
        return Submodule::uniform(m, &eval_preradical(e, block)?);
    }
    match e {
        PreradicalExpr::Zero => Submodule::zero(m),
        PreradicalExpr::Identity => Ok(Submodule::whole(m)),
        PreradicalExpr::Torsion => Submodule::torsion(m),
        PreradicalExpr::PTorsion(p) => Submodule::annihilated_by(m, *p),
        PreradicalExpr::Alpha(pair) => alpha_at(pair, m),
        PreradicalExpr::Omega(pair) => omega_at(pair, m),
        PreradicalExpr::Meet(l, r) => eval_preradical(l, m)?.intersect(&eval_preradical(r, m)?),
        PreradicalExpr::Join(l, r) => eval_preradical(l, m)?.sum(&eval_preradical(r, m)?),
        PreradicalExpr::Product(l, r) => {
            let inner = eval_preradical(r, m)?.embedding()?;
            let value = eval_preradical(l, &inner.module)?;
            image_of(&inner.inclusion, &value)
        }
        PreradicalExpr::Coproduct(l, r) => {
            let s = eval_preradical(l, m)?;
            let (q, proj) = quotient(m, &s)?;
            preimage_of(&proj, &eval_preradical(r, &q)?)
        }
    }
}

/// `α_N^M(K)`: generated by `g(n)` over Hom-generators `g` and generators
/// `n` of `N`.
fn alpha_at(pair: &GeneratingPair, k: &ModuleObject) -> Result<Submodule> {
    if pair.module().ring() != k.ring() {
        return Err(Error::MismatchedRing);
    }
    let gens = pair.submodule.generators();
    let mut images = Vec::new();
    for g in hom_generators(pair.module(), k)? {
        for n in &gens {
            images.push(g.apply_coords(n)?);
        }
    }
    Submodule::generated_by(k, &images)
}

/// `ω_N^M(K)`: intersection of `g⁻¹(N)` over Hom-generators `g: K → M`.
fn omega_at(pair: &GeneratingPair, k: &ModuleObject) -> Result<Submodule> {
    if pair.module().ring() != k.ring() {
        return Err(Error::MismatchedRing);
    }
    let mut acc = Submodule::whole(k);
    for g in hom_generators(k, pair.module())? {
        acc = acc.intersect(&preimage_of(&g, &pair.submodule)?)?;
    }
    Ok(acc)
}

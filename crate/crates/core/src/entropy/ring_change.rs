//! Change of rings along the surjection `t: Z → Z/n`.
//!
//! `F_t` keeps the underlying group and forgets the `Z/n` structure. Every
//! `Z`-linear map between `Z/n`-modules is `Z/n`-linear, so hom-groups,
//! endomorphisms and preradical values carry over unchanged.

use std::collections::BTreeSet;

use crate::entropy::invariant::InvariantTag;
use crate::entropy::norm::NormValue;
use crate::entropy::supremum::{entropy_of_module, entropy_of_preradical, entropy_relative};
use crate::error::{Error, Result};
use crate::module::{ModuleObject, Shape};
use crate::morphism::{Morphism, MorphismBody};
use crate::options::Options;
use crate::preradical::{eval_preradical, PreradicalExpr};
use crate::ring::RingSpec;
use crate::submodule::{Submodule, Support};

fn check_source(m: &ModuleObject) -> Result<()> {
    match m.ring() {
        RingSpec::IntegersMod(_) => Ok(()),
        RingSpec::Integers => Err(Error::UnsupportedRingMap("module is already over Z".into())),
    }
}

/// `F_t(M)`: the same group presented over `Z`.
pub fn restrict_scalars(m: &ModuleObject) -> Result<ModuleObject> {
    check_source(m)?;
    match m.shape() {
        Shape::FinitePresentation(f) => ModuleObject::from_factors(RingSpec::Integers, f.clone()),
        Shape::Shift(block) => ModuleObject::shift(restrict_scalars(block)?),
    }
}

/// `F_t(f)`.
pub fn restrict_morphism(f: &Morphism) -> Result<Morphism> {
    let dom = restrict_scalars(f.dom())?;
    let cod = restrict_scalars(f.cod())?;
    match f.body() {
        MorphismBody::Matrix(a) => Morphism::from_matrix(&dom, &cod, a),
        MorphismBody::ShiftSum(terms) => Morphism::shift_sum(&dom, terms.clone()),
    }
}

/// `F_t(N) ≤ F_t(M)`.
pub fn restrict_submodule(n: &Submodule) -> Result<Submodule> {
    let parent = restrict_scalars(n.parent())?;
    match n.support() {
        Support::Full => Submodule::generated_by(&parent, &n.generators()),
        Support::Window(w) => Submodule::in_window(&parent, w, &n.generators()),
        Support::Uniform => {
            let block = restrict_submodule(&n.block_part().expect("uniform"))?;
            Submodule::uniform(&parent, &block)
        }
    }
}

/// `φ_t(σ)(F_t(M_S))`, which is `σ(M_S)` carried along `F_t`.
pub fn phi_t_eval(e: &PreradicalExpr, m_s: &ModuleObject) -> Result<Submodule> {
    restrict_submodule(&eval_preradical(e, m_s)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingChangeReport {
    /// Entropy over `S = Z/n`.
    pub over_s: NormValue,
    /// Entropy over `Z` after restricting scalars.
    pub over_r: NormValue,
    pub holds: bool,
    pub provenance: BTreeSet<String>,
}

/// Compares `ent_{log}(M_S) ≤ ent_{log}(F_t(M_S))`, or, given `σ`,
/// `ent(σ)|_{M_S} ≤ ent(φ_t(σ))|_{F_t(M_S)}`.
pub fn ring_change_report(
    m_s: &ModuleObject,
    e: Option<&PreradicalExpr>,
    family: Option<&[Morphism]>,
    opts: &Options,
) -> Result<RingChangeReport> {
    let m_r = restrict_scalars(m_s)?;
    let family_r = family
        .map(|f| f.iter().map(restrict_morphism).collect::<Result<Vec<_>>>())
        .transpose()?;
    let tag = InvariantTag::Log;
    let (s, r) = match e {
        None => (
            entropy_of_module(tag, m_s, family, opts)?,
            entropy_of_module(tag, &m_r, family_r.as_deref(), opts)?,
        ),
        Some(e) => (
            entropy_of_preradical(tag, e, m_s, family, opts)?,
            entropy_relative(tag, &phi_t_eval(e, m_s)?, family_r.as_deref(), opts)?,
        ),
    };
    let holds = s.value.cmp_with_precision(&r.value, opts.precision_bits).is_le();
    let mut provenance = s.provenance;
    provenance.extend(r.provenance);
    Ok(RingChangeReport { over_s: s.value, over_r: r.value, holds, provenance })
}

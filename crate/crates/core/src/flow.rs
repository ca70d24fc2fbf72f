//! Flows `(M, η)`, their morphisms and subobjects, and the flow preradicals
//! induced by module preradicals.

use crate::error::{Error, Result};
use crate::hom::flow_hom_generators;
use crate::module::ModuleObject;
use crate::morphism::Morphism;
use crate::preradical::{eval_preradical, PreradicalExpr};
use crate::submodule::{image_of, is_stable, kernel, preimage_of, restrict_uniform, Submodule, Support};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flow {
    carrier: ModuleObject,
    endo: Morphism,
}

impl Flow {
    pub fn new(carrier: &ModuleObject, endo: &Morphism) -> Result<Self> {
        if endo.dom() != carrier || endo.cod() != carrier {
            return Err(Error::MismatchedParent);
        }
        Ok(Flow { carrier: carrier.clone(), endo: endo.clone() })
    }

    /// `E(M) = (M, id)`.
    pub fn trivial(m: &ModuleObject) -> Self {
        Flow { carrier: m.clone(), endo: Morphism::identity(m) }
    }

    pub fn carrier(&self) -> &ModuleObject {
        &self.carrier
    }

    pub fn endo(&self) -> &Morphism {
        &self.endo
    }
}

/// A stable submodule of a flow together with the restricted flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubFlow {
    sub: Submodule,
    ambient: Flow,
    restricted: Flow,
}

impl SubFlow {
    /// `(N, η|_N)`; fails unless `η(N) ≤ N`.
    pub fn of(ambient: &Flow, sub: Submodule) -> Result<Self> {
        if sub.parent() != ambient.carrier() {
            return Err(Error::MismatchedParent);
        }
        if !is_stable(ambient.endo(), &sub)? {
            return Err(Error::InvalidSubmodule("submodule is not stable under the flow".into()));
        }
        let restricted = match sub.support() {
            Support::Full => {
                let emb = sub.embedding()?;
                let endo = emb.restrict(ambient.endo())?;
                Flow::new(&emb.module, &endo)?
            }
            Support::Uniform => {
                let (m, endo) = restrict_uniform(ambient.endo(), &sub)?;
                Flow::new(&m, &endo)?
            }
            Support::Window(0) => {
                let z = ModuleObject::zero(ambient.carrier().ring());
                Flow::new(&z, &Morphism::identity(&z))?
            }
            Support::Window(_) => return Err(Error::ShiftUnsupported("restriction to a finitely supported submodule")),
        };
        Ok(SubFlow { sub, ambient: ambient.clone(), restricted })
    }

    pub fn sub(&self) -> &Submodule {
        &self.sub
    }

    pub fn ambient(&self) -> &Flow {
        &self.ambient
    }

    pub fn restricted(&self) -> &Flow {
        &self.restricted
    }

    /// Rechecks `η(N) ≤ N` on generator images.
    pub fn is_valid(&self) -> Result<bool> {
        is_stable(self.ambient.endo(), &self.sub)
    }
}

/// `f ∘ η = μ ∘ f`.
pub fn is_flow_morphism(f: &Morphism, a: &Flow, b: &Flow) -> Result<bool> {
    if f.dom() != a.carrier() || f.cod() != b.carrier() {
        return Err(Error::MismatchedParent);
    }
    Morphism::composites_agree(f, a.endo(), b.endo(), f)
}

/// Injective flow morphisms are monomorphisms of flows.
pub fn is_flow_mono(f: &Morphism, a: &Flow, b: &Flow) -> Result<bool> {
    if !is_flow_morphism(f, a, b)? {
        return Err(Error::NotAFlowMorphism);
    }
    Ok(kernel(f)?.is_zero())
}

/// The image representative `(f(X), μ|)` of the subobject given by a mono.
pub fn canonical_subflow(f: &Morphism, a: &Flow, b: &Flow) -> Result<SubFlow> {
    if !is_flow_mono(f, a, b)? {
        return Err(Error::NotMono);
    }
    SubFlow::of(b, image_of(f, &Submodule::whole(a.carrier()))?)
}

/// `σ̄(M, η) = (σ(M), η|)`.
pub fn induce_flow_preradical(e: &PreradicalExpr, x: &Flow) -> Result<SubFlow> {
    SubFlow::of(x, eval_preradical(e, x.carrier())?)
}

/// `ᾱ(K, μ) = Σ f(N)` over flow morphisms `f: (M, η) → (K, μ)`.
pub fn alpha_flow(n: &SubFlow, target: &Flow) -> Result<SubFlow> {
    let source = n.ambient();
    let gens = n.sub().generators();
    let mut images = Vec::new();
    for g in flow_hom_generators(source.carrier(), source.endo(), target.carrier(), target.endo())? {
        for v in &gens {
            images.push(g.apply_coords(v)?);
        }
    }
    SubFlow::of(target, Submodule::generated_by(target.carrier(), &images)?)
}

/// `ω̄(K, μ) = ∩ f⁻¹(N)` over flow morphisms `f: (K, μ) → (M, η)`.
pub fn omega_flow(n: &SubFlow, target: &Flow) -> Result<SubFlow> {
    let source = n.ambient();
    let mut acc = Submodule::whole(target.carrier());
    for g in flow_hom_generators(target.carrier(), target.endo(), source.carrier(), source.endo())? {
        acc = acc.intersect(&preimage_of(&g, n.sub())?)?;
    }
    SubFlow::of(target, acc)
}

/// `(U ∘ σ̄ ∘ E)(M)`.
pub fn project_flow_preradical(e: &PreradicalExpr, m: &ModuleObject) -> Result<Submodule> {
    Ok(induce_flow_preradical(e, &Flow::trivial(m))?.sub().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::ring::RingSpec;

    fn m(f: &[i64]) -> ModuleObject {
        ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, f).unwrap()
    }

    fn scalar_flow(n: i64, k: i64) -> Flow {
        let c = m(&[n]);
        Flow::new(&c, &Morphism::scalar(&c, k)).unwrap()
    }

    #[test]
    fn flow_morphism_checks() {
        let z4 = m(&[4]);
        let id = Morphism::identity(&z4);
        let a = scalar_flow(4, 2);
        let b = scalar_flow(4, 1);
        assert!(is_flow_morphism(&id, &a, &a).unwrap());
        assert!(!is_flow_morphism(&id, &a, &b).unwrap());
        assert!(is_flow_morphism(&Morphism::zero(&z4, &z4).unwrap(), &a, &b).unwrap());
        assert!(matches!(is_flow_mono(&id, &a, &b), Err(Error::NotAFlowMorphism)));
    }

    #[test]
    fn inclusion_subflow() {
        let z4 = m(&[4]);
        let two = Submodule::generated_by(&z4, &[vec![2]]).unwrap();
        let x = scalar_flow(4, 3);
        let s = SubFlow::of(&x, two.clone()).unwrap();
        let inc = s.sub().embedding().unwrap().inclusion;
        assert!(is_flow_mono(&inc, s.restricted(), &x).unwrap());
        let c = canonical_subflow(&inc, s.restricted(), &x).unwrap();
        assert_eq!(c.sub(), &two);
        let zero = Morphism::zero(&z4, &z4).unwrap();
        assert!(!is_flow_mono(&zero, &x, &x).unwrap());
    }

    #[test]
    fn torsion_of_mixed_flow() {
        let c = m(&[4, 0]);
        let endo = Morphism::from_matrix(&c, &c, &Matrix::diagonal(&[3, 1])).unwrap();
        let x = Flow::new(&c, &endo).unwrap();
        let t = induce_flow_preradical(&PreradicalExpr::Torsion, &x).unwrap();
        assert_eq!(t.sub(), &Submodule::generated_by(&c, &[vec![1, 0]]).unwrap());
        assert_eq!(t.restricted().endo().matrix().unwrap()[(0, 0)], 3);
        assert!(induce_flow_preradical(&PreradicalExpr::Zero, &x).unwrap().sub().is_zero());
    }

    #[test]
    fn equivariant_alpha_kills_doubled_image() {
        let src = scalar_flow(4, 3);
        let dst = scalar_flow(4, 1);
        let n = SubFlow::of(&src, Submodule::generated_by(src.carrier(), &[vec![2]]).unwrap()).unwrap();
        assert!(alpha_flow(&n, &dst).unwrap().sub().is_zero());
        assert!(n.sub().le(alpha_flow(&n, &src).unwrap().sub()).unwrap());
        assert!(omega_flow(&n, &src).unwrap().sub().le(n.sub()).unwrap());
    }

    #[test]
    fn shift_flow_torsion_restricts() {
        let s = ModuleObject::shift(m(&[2])).unwrap();
        let x = Flow::new(&s, &Morphism::bernoulli_shift(&s).unwrap()).unwrap();
        let t = induce_flow_preradical(&PreradicalExpr::Torsion, &x).unwrap();
        assert!(t.sub().is_whole());
        assert!(t.restricted().carrier().is_shift());
    }
}

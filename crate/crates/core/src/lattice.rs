//! Submodule lattices `L(M)`, the lattice maps `X_η : N ↦ η(N)`, and the
//! normed join-semilattices `F_i(L(M))`.
//!
//! Once built, a [`SubmoduleLattice`] answers order, join and meet queries
//! from its order relation alone; lattice-side computations never touch
//! module elements.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::entropy::invariant::{invariant, InvariantTag};
use crate::entropy::norm::NormValue;
use crate::error::{Error, Result};
use crate::module::{Cardinality, ModuleObject};
use crate::morphism::Morphism;
use crate::options::Options;
use crate::submodule::{image_of, Submodule};

#[derive(Debug, Clone)]
pub struct SubmoduleLattice {
    parent: ModuleObject,
    elements: Vec<Submodule>,
    index: HashMap<Submodule, usize>,
    /// `above[i]` has bit `j` set iff `elements[i] ≤ elements[j]`.
    above: Vec<Vec<u64>>,
    below_count: Vec<usize>,
    complete: bool,
}

fn bit(set: &[u64], j: usize) -> bool {
    set[j / 64] >> (j % 64) & 1 == 1
}

/// Every submodule generated by a subset of `seeds`, found by closing the
/// cyclic submodules `⟨s⟩` under pairwise sums.
fn close_under_sums(parent: &ModuleObject, seeds: &[Vec<i64>], cap: u128) -> Result<Vec<Submodule>> {
    let mut cyclic: Vec<Submodule> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for s in seeds {
        let c = Submodule::generated_by(parent, std::slice::from_ref(s))?;
        if !c.is_zero() && seen_cyclic.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let zero = Submodule::zero(parent)?;
    let mut found: HashSet<Submodule> = HashSet::from([zero.clone()]);
    let mut out = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(a) = queue.pop_front() {
        for c in &cyclic {
            let s = a.sum(c)?;
            if found.insert(s.clone()) {
                if found.len() as u128 > cap {
                    return Err(Error::TooLarge { what: "submodule lattice", size: found.len() as u128, cap });
                }
                out.push(s.clone());
                queue.push_back(s);
            }
        }
    }
    Ok(out)
}

fn finite_elements(n: &Submodule, cap: u128) -> Result<Vec<Vec<i64>>> {
    match n.cardinality()? {
        Cardinality::Finite(k) if k <= cap => {}
        Cardinality::Finite(k) => return Err(Error::TooLarge { what: "module", size: k, cap }),
        Cardinality::Infinite => return Err(Error::TooLarge { what: "module", size: u128::MAX, cap }),
    }
    Ok(n.elements()?.into_iter().map(|e| e.coords().to_vec()).collect())
}

impl SubmoduleLattice {
    fn from_elements(parent: &ModuleObject, mut elements: Vec<Submodule>, complete: bool) -> Result<Self> {
        elements.sort();
        let n = elements.len();
        let words = n.div_ceil(64);
        let mut above = vec![vec![0u64; words]; n];
        let mut below_count = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || elements[i].le(&elements[j])? {
                    above[i][j / 64] |= 1 << (j % 64);
                    below_count[j] += 1;
                }
            }
        }
        let index = elements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(SubmoduleLattice { parent: parent.clone(), elements, index, above, below_count, complete })
    }

    pub fn parent(&self) -> &ModuleObject {
        &self.parent
    }

    pub fn elements(&self) -> &[Submodule] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// False when only a bounded sample of an infinite lattice is held.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn get(&self, i: usize) -> &Submodule {
        &self.elements[i]
    }

    pub fn index_of(&self, n: &Submodule) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        bit(&self.above[i], j)
    }

    pub fn bottom(&self) -> usize {
        (0..self.len()).min_by_key(|&i| self.below_count[i]).expect("lattice has a bottom")
    }

    pub fn top(&self) -> usize {
        (0..self.len()).max_by_key(|&i| self.below_count[i]).expect("lattice has a top")
    }

    /// Least upper bound, or `None` if the held elements have none.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len()).filter(|&k| self.le(i, k) && self.le(j, k)).collect();
        let best = *upper.iter().min_by_key(|&&k| self.below_count[k])?;
        upper.iter().all(|&k| self.le(best, k)).then_some(best)
    }

    /// Greatest lower bound, or `None` if the held elements have none.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&k| self.le(k, i) && self.le(k, j)).collect();
        let best = *lower.iter().max_by_key(|&&k| self.below_count[k])?;
        lower.iter().all(|&k| self.le(k, best)).then_some(best)
    }

    /// Indices of the interval `[0, n]`.
    pub fn down_set(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.le(k, n)).collect()
    }
}

/// `L(M)` for a finite module.
pub fn enumerate_submodules(m: &ModuleObject, opts: &Options) -> Result<SubmoduleLattice> {
    if m.is_shift() {
        return Err(Error::ShiftUnsupported("submodule enumeration"));
    }
    enumerate_within(&Submodule::whole(m), opts)
}

/// The interval `[0, N]` of `L(M)` for a finite submodule `N`.
pub fn enumerate_within(n: &Submodule, opts: &Options) -> Result<SubmoduleLattice> {
    if n.parent().is_shift() {
        return Err(Error::ShiftUnsupported("submodule enumeration"));
    }
    let seeds = finite_elements(n, opts.cap())?;
    let elems = close_under_sums(n.parent(), &seeds, opts.cap())?;
    SubmoduleLattice::from_elements(n.parent(), elems, true)
}

/// Submodules generated by vectors whose free coordinates are bounded by
/// `opts.coordinate_bound`; the torsion coordinates range freely.
fn enumerate_bounded(m: &ModuleObject, opts: &Options) -> Result<SubmoduleLattice> {
    let d = m.factors()?.to_vec();
    let b = opts.coordinate_bound;
    let mut seeds: Vec<Vec<i64>> = vec![Vec::new()];
    for &di in &d {
        let range: Vec<i64> = if di == 0 { (-b..=b).collect() } else { (0..di).collect() };
        seeds = seeds
            .into_iter()
            .flat_map(|s| {
                range.iter().map(move |&v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
        if seeds.len() as u128 > opts.cap() {
            return Err(Error::TooLarge { what: "seed box", size: seeds.len() as u128, cap: opts.cap() });
        }
    }
    let elems = close_under_sums(m, &seeds, opts.cap())?;
    SubmoduleLattice::from_elements(m, elems, false)
}

/// `X_η` between two enumerated lattices, as an index table.
#[derive(Debug, Clone)]
pub struct LatticeMorphism {
    source: Arc<SubmoduleLattice>,
    target: Arc<SubmoduleLattice>,
    carrier: Morphism,
    table: Vec<usize>,
}

impl LatticeMorphism {
    pub fn between(source: Arc<SubmoduleLattice>, target: Arc<SubmoduleLattice>, eta: &Morphism) -> Result<Self> {
        if eta.dom() != source.parent() || eta.cod() != target.parent() {
            return Err(Error::MismatchedParent);
        }
        let table = source
            .elements()
            .iter()
            .map(|n| {
                let img = image_of(eta, n)?;
                target
                    .index_of(&img)
                    .ok_or_else(|| Error::Unrepresentable("image outside the target lattice".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeMorphism { source, target, carrier: eta.clone(), table })
    }

    pub fn source(&self) -> &Arc<SubmoduleLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SubmoduleLattice> {
        &self.target
    }

    pub fn carrier(&self) -> &Morphism {
        &self.carrier
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply_submodule(&self, n: &Submodule) -> Result<Submodule> {
        let i = self.source.index_of(n).ok_or(Error::MismatchedParent)?;
        Ok(self.target.get(self.apply(i)).clone())
    }

    /// `self ∘ inner` as a table; lattices must line up.
    pub fn compose_tables(&self, inner: &LatticeMorphism) -> Result<Vec<usize>> {
        if !Arc::ptr_eq(inner.target(), &self.source) && inner.target().elements() != self.source.elements() {
            return Err(Error::MismatchedParent);
        }
        Ok(inner.table.iter().map(|&j| self.table[j]).collect())
    }
}

/// `X_η : L(M) → L(M')` for finite `M`, `M'`.
pub fn lattice_morphism(eta: &Morphism, opts: &Options) -> Result<LatticeMorphism> {
    let source = Arc::new(enumerate_submodules(eta.dom(), opts)?);
    let target = if eta.is_endomorphism() {
        source.clone()
    } else {
        Arc::new(enumerate_submodules(eta.cod(), opts)?)
    };
    LatticeMorphism::between(source, target, eta)
}

/// `F_i(L(M))`: the finite-norm elements with their norms.
#[derive(Debug, Clone)]
pub struct NormedSemilattice {
    lattice: Arc<SubmoduleLattice>,
    tag: InvariantTag,
    norms: Vec<NormValue>,
    members: Vec<usize>,
}

impl NormedSemilattice {
    pub fn from_lattice(lattice: Arc<SubmoduleLattice>, tag: InvariantTag) -> Result<Self> {
        let norms = lattice.elements().iter().map(|n| invariant(tag, n)).collect::<Result<Vec<_>>>()?;
        let members = (0..norms.len()).filter(|&i| norms[i].is_finite()).collect();
        Ok(NormedSemilattice { lattice, tag, norms, members })
    }

    pub fn lattice(&self) -> &Arc<SubmoduleLattice> {
        &self.lattice
    }

    pub fn tag(&self) -> InvariantTag {
        self.tag
    }

    /// Lattice indices of the finite-norm elements.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn elements(&self) -> Vec<&Submodule> {
        self.members.iter().map(|&i| self.lattice.get(i)).collect()
    }

    pub fn norm(&self, i: usize) -> &NormValue {
        &self.norms[i]
    }

    pub fn contains(&self, i: usize) -> bool {
        self.norms[i].is_finite()
    }

    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        self.lattice.join(i, j)
    }

    pub fn is_complete(&self) -> bool {
        self.lattice.is_complete()
    }
}

/// `F_i(L(M))`. Finite `M` is enumerated in full. For `M` with free part, the
/// log semilattice is `L(Tor M)` (exact), while the rank semilattice is the
/// bounded sample of [`Options::coordinate_bound`].
pub fn normed_semilattice(m: &ModuleObject, tag: InvariantTag, opts: &Options) -> Result<NormedSemilattice> {
    if m.is_shift() {
        return Err(Error::ShiftUnsupported("materialized semilattice"));
    }
    let lattice = match (m.cardinality(), tag) {
        (Cardinality::Finite(_), _) => enumerate_submodules(m, opts)?,
        (Cardinality::Infinite, InvariantTag::Log) => enumerate_within(&Submodule::torsion(m)?, opts)?,
        (Cardinality::Infinite, InvariantTag::Rank) => enumerate_bounded(m, opts)?,
    };
    NormedSemilattice::from_lattice(Arc::new(lattice), tag)
}

/// `F_i(η)`, the restriction of `X_η` to finite-norm elements.
#[derive(Debug, Clone)]
pub struct SemilatticeMap {
    source: NormedSemilattice,
    target: NormedSemilattice,
    table: HashMap<usize, usize>,
}

impl SemilatticeMap {
    pub fn apply(&self, i: usize) -> Option<usize> {
        self.table.get(&i).copied()
    }

    pub fn source(&self) -> &NormedSemilattice {
        &self.source
    }

    pub fn target(&self) -> &NormedSemilattice {
        &self.target
    }

    /// `i(F_i(η)(N)) ≤ i(N)` for every member.
    pub fn is_contractive(&self) -> bool {
        self.table.iter().all(|(&i, &j)| self.target.norm(j) <= self.source.norm(i))
    }

    /// `F(N₁ ∨ N₂) = F(N₁) ∨ F(N₂)` for every pair of members.
    pub fn preserves_joins(&self) -> bool {
        let members = self.source.members();
        members.iter().all(|&a| {
            members.iter().all(|&b| match self.source.join(a, b) {
                Some(ab) => self.apply(ab) == self.target.join(self.table[&a], self.table[&b]),
                None => true,
            })
        })
    }
}

/// `F_i(η)` between the normed semilattices of `dom η` and `cod η`.
pub fn semilattice_map(eta: &Morphism, tag: InvariantTag, opts: &Options) -> Result<SemilatticeMap> {
    let source = normed_semilattice(eta.dom(), tag, opts)?;
    let target = if eta.is_endomorphism() {
        source.clone()
    } else {
        normed_semilattice(eta.cod(), tag, opts)?
    };
    let x = LatticeMorphism::between(source.lattice().clone(), target.lattice().clone(), eta)?;
    let table = source.members().iter().map(|&i| (i, x.apply(i))).collect();
    Ok(SemilatticeMap { source, target, table })
}

//! Canonical submodules and the exact operations on them.
//!
//! A submodule `N` of a finite presentation `Z^k / Λ` is stored as the lattice
//! `L = π⁻¹(N) ⊇ Λ` in Hermite normal form, so equality of submodules is
//! equality of row lists. Shift modules carry either a finite support window
//! (`N ⊆ B^w`, stored the same way over `w` copies of the block) or a uniform
//! submodule `⊕_i S` given by `S ≤ B`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{hermite_rows, integer_kernel, reduce, solve_integer, Matrix};
use crate::module::{present_with_maps, Cardinality, Element, ModuleObject};
use crate::morphism::{Morphism, ShiftTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Support {
    /// Parent is a finite presentation.
    Full,
    /// Finitely supported submodule of a shift module, inside the first `w`
    /// positions; `w` is minimal.
    Window(usize),
    /// `⊕_{i ∈ N} S` inside a shift module; never the zero submodule.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Submodule {
    parent: ModuleObject,
    support: Support,
    rows: Vec<Vec<i64>>,
}

fn block_moduli(parent: &ModuleObject) -> Result<Vec<i64>> {
    parent.block().expect("shift parent").moduli()
}

fn window_moduli(parent: &ModuleObject, w: usize) -> Result<Vec<i64>> {
    let b = block_moduli(parent)?;
    Ok((0..w).flat_map(|_| b.iter().copied()).collect())
}

fn pad(rows: &[Vec<i64>], len: usize) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(len, 0);
            r
        })
        .collect()
}

/// Lattice membership by echelon reduction.
fn lattice_contains(rows: &[Vec<i64>], x: &[i64]) -> bool {
    let mut x = x.to_vec();
    for r in rows {
        let Some(p) = r.iter().position(|&v| v != 0) else { continue };
        if x[..p].iter().any(|&v| v != 0) {
            return false;
        }
        if x[p] % r[p] != 0 {
            return false;
        }
        let q = x[p] / r[p];
        for (xi, &ri) in x.iter_mut().zip(r) {
            *xi -= q * ri;
        }
    }
    x.iter().all(|&v| v == 0)
}

/// Intersection of two lattices given by row bases in the same `Z^k`.
fn lattice_intersection(a: &[Vec<i64>], b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let at = Matrix::from_rows(a, k).transpose();
    let bt = Matrix::from_rows(b, k).transpose();
    let mut neg = bt.clone();
    for i in 0..neg.rows() {
        for j in 0..neg.cols() {
            neg[(i, j)] = -neg[(i, j)];
        }
    }
    let sys = at.hstack(&neg);
    integer_kernel(&sys)
        .into_iter()
        .map(|v| at.mul_vec(&v[..a.len()]))
        .collect()
}

/// Dense matrix from a possibly empty row list.
fn rows_to_matrix(rows: &[Vec<i64>], cols: usize) -> Matrix {
    Matrix::from_rows(rows, cols)
}

impl Submodule {
    /// Submodule of a finite presentation generated by coordinate vectors.
    pub fn generated_by(parent: &ModuleObject, gens: &[Vec<i64>]) -> Result<Self> {
        let moduli = parent.moduli()?;
        if gens.iter().any(|g| g.len() != moduli.len()) {
            return Err(Error::InvalidSubmodule("generator length mismatch".into()));
        }
        Ok(Submodule {
            parent: parent.clone(),
            support: Support::Full,
            rows: hermite_rows(gens, &moduli),
        })
    }

    pub fn generated_by_elements(parent: &ModuleObject, gens: &[Element]) -> Result<Self> {
        if gens.iter().any(|g| g.parent() != parent) {
            return Err(Error::MismatchedParent);
        }
        let v: Vec<Vec<i64>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        Submodule::generated_by(parent, &v)
    }

    /// Finitely supported submodule of a shift module generated by flattened
    /// vectors over the first `window` positions.
    pub fn in_window(parent: &ModuleObject, window: usize, gens: &[Vec<i64>]) -> Result<Self> {
        let moduli = window_moduli(parent, window)?;
        if gens.iter().any(|g| g.len() != moduli.len()) {
            return Err(Error::InvalidSubmodule("generator length mismatch".into()));
        }
        Self::normalize_window(parent, window, hermite_rows(gens, &moduli))
    }

    /// `⊕_i S` for a submodule `S` of the block of a shift module.
    pub fn uniform(parent: &ModuleObject, block_sub: &Submodule) -> Result<Self> {
        let block = parent
            .block()
            .ok_or_else(|| Error::InvalidSubmodule("uniform submodule needs a shift parent".into()))?;
        if block_sub.parent() != block {
            return Err(Error::MismatchedParent);
        }
        if block_sub.is_zero() {
            return Submodule::zero(parent);
        }
        Ok(Submodule { parent: parent.clone(), support: Support::Uniform, rows: block_sub.rows.clone() })
    }

    /// `B^s`: every block coordinate in positions `0..s`.
    pub fn window_block(parent: &ModuleObject, s: usize) -> Result<Self> {
        Submodule::uniform_window(parent, &Submodule::whole(parent.block().ok_or(
            Error::InvalidSubmodule("window blocks need a shift parent".into()),
        )?), s)
    }

    /// `S^s`: copies of a block submodule in positions `0..s`.
    pub fn uniform_window(parent: &ModuleObject, block_sub: &Submodule, s: usize) -> Result<Self> {
        let b = parent.generator_count();
        let gens: Vec<Vec<i64>> = (0..s)
            .flat_map(|pos| {
                block_sub.rows.iter().map(move |r| {
                    let mut v = vec![0; s * b];
                    v[pos * b..(pos + 1) * b].copy_from_slice(r);
                    v
                })
            })
            .collect();
        Submodule::in_window(parent, s, &gens)
    }

    fn normalize_window(parent: &ModuleObject, window: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        let b_mod = block_moduli(parent)?;
        let b = b_mod.len();
        let mut top = 0;
        for r in &rows {
            for (i, &v) in r.iter().enumerate() {
                if reduce(v, b_mod[i % b]) != 0 {
                    top = top.max(i / b + 1);
                }
            }
        }
        let rows = if top == window {
            rows
        } else {
            let trunc: Vec<Vec<i64>> = rows.iter().map(|r| r[..top * b].to_vec()).collect();
            hermite_rows(&trunc, &window_moduli(parent, top)?)
        };
        Ok(Submodule { parent: parent.clone(), support: Support::Window(top), rows })
    }

    pub fn zero(parent: &ModuleObject) -> Result<Self> {
        if parent.is_shift() {
            return Ok(Submodule { parent: parent.clone(), support: Support::Window(0), rows: Vec::new() });
        }
        Submodule::generated_by(parent, &[])
    }

    pub fn whole(parent: &ModuleObject) -> Self {
        match parent.block() {
            Some(b) => {
                if b.is_zero() {
                    return Submodule::zero(parent).expect("zero submodule");
                }
                Submodule { parent: parent.clone(), support: Support::Uniform, rows: Submodule::whole(b).rows }
            }
            None => {
                let n = parent.generator_count();
                let gens: Vec<Vec<i64>> = (0..n)
                    .map(|i| {
                        let mut v = vec![0; n];
                        v[i] = 1;
                        v
                    })
                    .collect();
                Submodule::generated_by(parent, &gens).expect("unit vectors")
            }
        }
    }

    /// `{x : n·x = 0 for some n ≥ 1}`.
    pub fn torsion(parent: &ModuleObject) -> Result<Self> {
        if parent.is_shift() {
            return Ok(Submodule::whole(parent));
        }
        let d = parent.moduli()?;
        let gens: Vec<Vec<i64>> = (0..d.len())
            .filter(|&i| d[i] > 0)
            .map(|i| {
                let mut v = vec![0; d.len()];
                v[i] = 1;
                v
            })
            .collect();
        Submodule::generated_by(parent, &gens)
    }

    /// `{x : k·x = 0}`.
    pub fn annihilated_by(parent: &ModuleObject, k: i64) -> Result<Self> {
        if let Some(block) = parent.block() {
            return Submodule::uniform(parent, &Submodule::annihilated_by(block, k)?);
        }
        let d = parent.moduli()?;
        let gens: Vec<Vec<i64>> = (0..d.len())
            .filter(|&i| d[i] > 0)
            .map(|i| {
                let mut v = vec![0; d.len()];
                v[i] = d[i] / crate::matrix::gcd(d[i], k);
                v
            })
            .collect();
        Submodule::generated_by(parent, &gens)
    }

    pub fn parent(&self) -> &ModuleObject {
        &self.parent
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// Canonical Hermite rows (ambient lattice basis, relations included).
    pub fn hermite(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Ambient moduli matching the row coordinates.
    fn moduli(&self) -> Result<Vec<i64>> {
        match self.support {
            Support::Full => self.parent.moduli(),
            Support::Window(w) => window_moduli(&self.parent, w),
            Support::Uniform => block_moduli(&self.parent),
        }
    }

    /// The uniform block submodule `S` of `⊕ S`.
    pub fn block_part(&self) -> Option<Submodule> {
        match self.support {
            Support::Uniform => Some(Submodule {
                parent: self.parent.block().expect("shift").clone(),
                support: Support::Full,
                rows: self.rows.clone(),
            }),
            _ => None,
        }
    }

    /// Generators reduced into canonical coordinates, zero vectors dropped.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        let moduli = self.moduli().expect("moduli");
        self.rows
            .iter()
            .map(|r| r.iter().zip(&moduli).map(|(&v, &m)| reduce(v, m)).collect::<Vec<_>>())
            .filter(|r: &Vec<i64>| r.iter().any(|&v| v != 0))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match self.support {
            Support::Window(w) => w == 0,
            Support::Uniform => false,
            Support::Full => self.generators().is_empty(),
        }
    }

    pub fn is_whole(&self) -> bool {
        *self == Submodule::whole(&self.parent)
    }

    pub fn contains_coords(&self, x: &[i64]) -> Result<bool> {
        match self.support {
            Support::Full => {
                if x.len() != self.parent.generator_count() {
                    return Err(Error::MismatchedParent);
                }
                Ok(lattice_contains(&self.rows, x))
            }
            Support::Window(w) => {
                let b = self.parent.generator_count();
                let moduli = block_moduli(&self.parent)?;
                if !x.len().is_multiple_of(b.max(1)) {
                    return Err(Error::MismatchedParent);
                }
                let wx = x.len().checked_div(b).unwrap_or(0);
                if (w..wx).any(|p| (0..b).any(|g| reduce(x[p * b + g], moduli[g]) != 0)) {
                    return Ok(false);
                }
                let mut y = x[..w.min(wx) * b].to_vec();
                y.resize(w * b, 0);
                Ok(lattice_contains(&self.rows, &y))
            }
            Support::Uniform => {
                let b = self.parent.generator_count();
                if b == 0 || !x.len().is_multiple_of(b) {
                    return Err(Error::MismatchedParent);
                }
                Ok(x.chunks(b).all(|c| lattice_contains(&self.rows, c)))
            }
        }
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        if x.parent() != &self.parent {
            return Err(Error::MismatchedParent);
        }
        self.contains_coords(x.coords())
    }

    fn same_parent(&self, other: &Submodule) -> Result<()> {
        if self.parent != other.parent {
            Err(Error::MismatchedParent)
        } else {
            Ok(())
        }
    }

    fn widen(&self, w: usize) -> Result<Vec<Vec<i64>>> {
        let b = self.parent.generator_count();
        Ok(hermite_rows(&pad(&self.rows, w * b), &window_moduli(&self.parent, w)?))
    }

    /// `S^w` rows for a uniform submodule.
    fn uniform_rows_in_window(&self, w: usize) -> Result<Vec<Vec<i64>>> {
        let b = self.parent.generator_count();
        let gens: Vec<Vec<i64>> = (0..w)
            .flat_map(|pos| {
                self.rows.iter().map(move |r| {
                    let mut v = vec![0; w * b];
                    v[pos * b..(pos + 1) * b].copy_from_slice(r);
                    v
                })
            })
            .collect();
        Ok(hermite_rows(&gens, &window_moduli(&self.parent, w)?))
    }

    /// `self ≤ other`.
    pub fn le(&self, other: &Submodule) -> Result<bool> {
        self.same_parent(other)?;
        match (self.support, other.support) {
            (Support::Full, Support::Full) | (Support::Uniform, Support::Uniform) => {
                Ok(self.rows.iter().all(|r| lattice_contains(&other.rows, r)))
            }
            (Support::Window(a), Support::Window(b)) => {
                if a > b {
                    return Ok(false);
                }
                let mine = self.widen(b)?;
                Ok(mine.iter().all(|r| lattice_contains(&other.rows, r)))
            }
            (Support::Window(_), Support::Uniform) => {
                Ok(self.rows.iter().all(|r| other.contains_coords(r).unwrap_or(false)))
            }
            (Support::Uniform, Support::Window(_)) => Ok(false),
            _ => Err(Error::MismatchedParent),
        }
    }

    /// `A + B`.
    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.same_parent(other)?;
        match (self.support, other.support) {
            (Support::Full, Support::Full) => {
                let mut gens = self.rows.clone();
                gens.extend(other.rows.iter().cloned());
                Submodule::generated_by(&self.parent, &gens)
            }
            (Support::Uniform, Support::Uniform) => {
                let mut gens = self.rows.clone();
                gens.extend(other.rows.iter().cloned());
                let block = self.parent.block().expect("shift");
                Ok(Submodule {
                    parent: self.parent.clone(),
                    support: Support::Uniform,
                    rows: hermite_rows(&gens, &block.moduli()?),
                })
            }
            (Support::Window(a), Support::Window(b)) => {
                let w = a.max(b);
                let mut gens = self.widen(w)?;
                gens.extend(other.widen(w)?);
                Submodule::in_window(&self.parent, w, &gens)
            }
            (Support::Window(_), Support::Uniform) => {
                if self.le(other)? {
                    Ok(other.clone())
                } else {
                    Err(Error::Unrepresentable("uniform plus finitely supported submodule".into()))
                }
            }
            (Support::Uniform, Support::Window(_)) => other.sum(self),
            _ => Err(Error::MismatchedParent),
        }
    }

    /// `A ∩ B`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.same_parent(other)?;
        match (self.support, other.support) {
            (Support::Full, Support::Full) => {
                let k = self.parent.generator_count();
                let gens = lattice_intersection(&self.rows, &other.rows, k);
                Submodule::generated_by(&self.parent, &gens)
            }
            (Support::Uniform, Support::Uniform) => {
                let block = self.parent.block().expect("shift");
                let k = block.generator_count();
                let gens = lattice_intersection(&self.rows, &other.rows, k);
                let s = Submodule::generated_by(block, &gens)?;
                Submodule::uniform(&self.parent, &s)
            }
            (Support::Window(a), Support::Window(b)) => {
                let w = a.max(b);
                let k = w * self.parent.generator_count();
                let gens = lattice_intersection(&self.widen(w)?, &other.widen(w)?, k);
                Submodule::in_window(&self.parent, w, &gens)
            }
            (Support::Window(a), Support::Uniform) => {
                let k = a * self.parent.generator_count();
                let gens = lattice_intersection(&self.rows, &other.uniform_rows_in_window(a)?, k);
                Submodule::in_window(&self.parent, a, &gens)
            }
            (Support::Uniform, Support::Window(_)) => other.intersect(self),
            _ => Err(Error::MismatchedParent),
        }
    }

    /// Cardinality of the submodule.
    pub fn cardinality(&self) -> Result<Cardinality> {
        if self.support == Support::Uniform {
            return Ok(Cardinality::Infinite);
        }
        if self.free_rank()? > 0 {
            return Ok(Cardinality::Infinite);
        }
        let moduli = self.moduli()?;
        let mut order: u128 = 1;
        for r in &self.rows {
            let p = r.iter().position(|&v| v != 0).expect("hermite rows are nonzero");
            order *= (moduli[p] / r[p]) as u128;
        }
        Ok(Cardinality::Finite(order))
    }

    /// `dim_Q(N ⊗ Q)`.
    pub fn free_rank(&self) -> Result<usize> {
        if self.support != Support::Full {
            return Ok(0);
        }
        let moduli = self.moduli()?;
        let torsion_cols = moduli.iter().filter(|&&d| d > 0).count();
        Ok(self.rows.len() - torsion_cols)
    }

    /// Presents the submodule as a module in its own right, with the
    /// inclusion map into the parent.
    pub fn embedding(&self) -> Result<Embedding> {
        if self.support != Support::Full {
            return Err(Error::ShiftUnsupported("submodule as a module"));
        }
        let moduli = self.parent.moduli()?;
        let k = moduli.len();
        let r = self.rows.len();
        // Coefficients of the relation vectors in the Hermite basis.
        let bt = rows_to_matrix(&self.rows, k).transpose();
        let mut rel_cols = Vec::new();
        for (i, &d) in moduli.iter().enumerate() {
            if d > 0 {
                let mut target = vec![0; k];
                target[i] = d;
                let y = solve_integer(&bt, &target).expect("relations lie in the lattice");
                rel_cols.push(y);
            }
        }
        let rel = if rel_cols.is_empty() {
            Matrix::zeros(r, 0)
        } else {
            Matrix::from_columns(&rel_cols, r)
        };
        let pres = present_with_maps(self.parent.ring(), &rel);
        let t = pres.module.generator_count();
        let mut incl_cols = Vec::with_capacity(t);
        for j in 0..t {
            let coeff = pres.lift.column(j);
            incl_cols.push(bt.mul_vec(&coeff));
        }
        let incl = if t == 0 { Matrix::zeros(k, 0) } else { Matrix::from_columns(&incl_cols, k) };
        let inclusion = Morphism::from_matrix(&pres.module, &self.parent, &incl)?;
        Ok(Embedding { module: pres.module, inclusion })
    }

    /// Elements of a finite submodule.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let e = self.embedding()?;
        e.module
            .elements()?
            .iter()
            .map(|x| e.inclusion.apply(x))
            .collect()
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.generators();
        let body: Vec<String> = gens.iter().map(|g| format!("{g:?}")).collect();
        match self.support {
            Support::Full => write!(f, "<{}>", body.join(", ")),
            Support::Window(w) => write!(f, "<{}> in window {w}", body.join(", ")),
            Support::Uniform => write!(f, "sum over positions of <{}>", body.join(", ")),
        }
    }
}

/// A submodule presented as a module, with its inclusion.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub module: ModuleObject,
    pub inclusion: Morphism,
}

impl Embedding {
    /// Coordinates in `module` of a parent element lying in the image.
    pub fn coordinates_of(&self, x: &[i64]) -> Result<Option<Vec<i64>>> {
        let parent = self.inclusion.cod();
        let moduli = parent.moduli()?;
        let incl = self.inclusion.matrix()?;
        let sys = incl.hstack(&Matrix::diagonal(&moduli));
        Ok(match solve_integer(&sys, x) {
            Some(z) => Some(self.module.reduce_coords(&z[..incl.cols()])?),
            None => None,
        })
    }

    /// Restriction of an endomorphism of the parent that keeps the image
    /// stable.
    pub fn restrict(&self, endo: &Morphism) -> Result<Morphism> {
        if endo.dom() != self.inclusion.cod() || !endo.is_endomorphism() {
            return Err(Error::MismatchedParent);
        }
        let t = self.module.generator_count();
        let mut cols = Vec::with_capacity(t);
        for j in 0..t {
            let img = endo.apply_coords(&self.inclusion.matrix()?.column(j))?;
            let c = self.coordinates_of(&img)?.ok_or_else(|| {
                Error::InvalidSubmodule("endomorphism does not preserve the submodule".into())
            })?;
            cols.push(c);
        }
        let m = if t == 0 { Matrix::zeros(0, 0) } else { Matrix::from_columns(&cols, t) };
        Morphism::from_matrix(&self.module, &self.module, &m)
    }
}

/// `ker f`.
pub fn kernel(f: &Morphism) -> Result<Submodule> {
    preimage_of(f, &Submodule::zero(f.cod())?)
}

/// `f(N)` for `N ≤ dom f`.
pub fn image_of(f: &Morphism, n: &Submodule) -> Result<Submodule> {
    if n.parent() != f.dom() {
        return Err(Error::MismatchedParent);
    }
    match n.support {
        Support::Full => {
            let imgs: Vec<Vec<i64>> =
                n.rows.iter().map(|r| f.apply_coords(r)).collect::<Result<_>>()?;
            Submodule::generated_by(f.cod(), &imgs)
        }
        Support::Window(w) => {
            let mut out_w = w;
            let mut imgs = Vec::new();
            for r in &n.rows {
                let (y, ow) = f.apply_window(r, w)?;
                out_w = ow;
                imgs.push(y);
            }
            let out_w = out_w.max(w + f.max_forward_offset());
            let imgs = pad(&imgs, out_w * f.cod().generator_count());
            Submodule::in_window(f.cod(), out_w, &imgs)
        }
        Support::Uniform => {
            // Only maps that keep every position in place send ⊕S to a uniform
            // submodule.
            let terms = f.shift_terms().expect("shift parent");
            if terms.iter().any(|t| t.offset != 0) {
                return Err(Error::ShiftUnsupported("image of a uniform submodule under a shift"));
            }
            let block = f.dom().block().expect("shift");
            let s = n.block_part().expect("uniform");
            let mut acc = Submodule::zero(block)?;
            for t in terms {
                let g = Morphism::from_matrix(block, block, &t.block)?;
                acc = acc.sum(&image_of(&g, &s)?)?;
            }
            Submodule::uniform(f.cod(), &acc)
        }
    }
}

/// `f⁻¹(P)` for `P ≤ cod f`.
pub fn preimage_of(f: &Morphism, p: &Submodule) -> Result<Submodule> {
    if p.parent() != f.cod() {
        return Err(Error::MismatchedParent);
    }
    if f.dom().is_shift() {
        return Err(Error::ShiftUnsupported("preimage"));
    }
    let a = f.matrix()?;
    let k = a.cols();
    let m = a.rows();
    if p.rows.is_empty() && m > 0 {
        // Free codomain, zero target: plain integer kernel.
        let gens: Vec<Vec<i64>> = integer_kernel(a).into_iter().collect();
        return Submodule::generated_by(f.dom(), &gens);
    }
    let mut neg_pt = rows_to_matrix(&p.rows, m).transpose();
    for i in 0..neg_pt.rows() {
        for j in 0..neg_pt.cols() {
            neg_pt[(i, j)] = -neg_pt[(i, j)];
        }
    }
    let sys = a.hstack(&neg_pt);
    let gens: Vec<Vec<i64>> = integer_kernel(&sys).into_iter().map(|v| v[..k].to_vec()).collect();
    Submodule::generated_by(f.dom(), &gens)
}

/// `M / N` with the canonical projection.
pub fn quotient(m: &ModuleObject, n: &Submodule) -> Result<(ModuleObject, Morphism)> {
    if m.is_shift() {
        return Err(Error::ShiftUnsupported("quotient"));
    }
    if n.parent() != m {
        return Err(Error::MismatchedParent);
    }
    let k = m.generator_count();
    let rel = if n.rows.is_empty() {
        Matrix::zeros(k, 0)
    } else {
        Matrix::from_columns(&n.rows, k)
    };
    let pres = present_with_maps(m.ring(), &rel);
    let proj = Morphism::from_matrix(m, &pres.module, &pres.projection)?;
    Ok((pres.module, proj))
}

/// Whether `endo(N) ≤ N`.
pub fn is_stable(endo: &Morphism, n: &Submodule) -> Result<bool> {
    if n.support == Support::Uniform {
        // ⊕S is stable iff every block map sends S into S.
        let block = endo.dom().block().expect("shift");
        let s = n.block_part().expect("uniform");
        for t in endo.shift_terms().expect("shift") {
            let g = Morphism::from_matrix(block, block, &t.block)?;
            if !image_of(&g, &s)?.le(&s)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    image_of(endo, n)?.le(n)
}

/// Restriction of a shift endomorphism to a stable uniform submodule `⊕S`,
/// as an endomorphism of the shift module over `S`.
pub fn restrict_uniform(endo: &Morphism, n: &Submodule) -> Result<(ModuleObject, Morphism)> {
    let s = n
        .block_part()
        .ok_or_else(|| Error::InvalidSubmodule("uniform submodule expected".into()))?;
    let emb = s.embedding()?;
    let shifted = ModuleObject::shift(emb.module.clone())?;
    let block = endo.dom().block().expect("shift");
    let mut terms = Vec::new();
    for t in endo.shift_terms().expect("shift") {
        let g = Morphism::from_matrix(block, block, &t.block)?;
        let r = emb.restrict(&g)?;
        terms.push(ShiftTerm { offset: t.offset, block: r.matrix()?.clone() });
    }
    Ok((shifted.clone(), Morphism::shift_sum(&shifted, terms)?))
}

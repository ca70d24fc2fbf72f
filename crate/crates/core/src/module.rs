use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{reduce, smith_normal_form, Matrix};
use crate::ring::RingSpec;

/// How a module is built: a canonical finite presentation `⊕ Z/d_i`, or the
/// countable direct sum `⊕_{i ∈ N} B` of a finite block `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    /// Invariant factors `d_1 | d_2 | ... | d_k`; a factor 0 is a free `Z`
    /// summand and always sits at the end. A factor 1 is never stored.
    FinitePresentation(Vec<i64>),
    Shift(Box<ModuleObject>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleObject {
    ring: RingSpec,
    shape: Shape,
}

/// Cardinality of a module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    Finite(u128),
    Infinite,
}

impl Cardinality {
    pub fn finite(self) -> Option<u128> {
        match self {
            Cardinality::Finite(n) => Some(n),
            Cardinality::Infinite => None,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => write!(f, "inf"),
        }
    }
}

impl ModuleObject {
    /// Module with the given invariant factors. The list must already be a
    /// valid divisibility chain with no unit factors; use [`present_module`]
    /// for arbitrary relations.
    pub fn from_factors(ring: RingSpec, factors: Vec<i64>) -> Result<Self> {
        validate_factors(ring, &factors)?;
        Ok(ModuleObject { ring, shape: Shape::FinitePresentation(factors) })
    }

    /// `Z/d_1 ⊕ ... ⊕ Z/d_k` for arbitrary nonnegative `d_i`; the summands are
    /// put into canonical form.
    pub fn direct_sum_of_cyclics(ring: RingSpec, orders: &[i64]) -> Result<Self> {
        if orders.iter().any(|&d| d < 0) {
            return Err(Error::InvalidModule("negative cyclic order".into()));
        }
        Ok(present_module(ring, &Matrix::diagonal(orders)))
    }

    pub fn zero(ring: RingSpec) -> Self {
        ModuleObject { ring, shape: Shape::FinitePresentation(Vec::new()) }
    }

    pub fn cyclic(ring: RingSpec, n: i64) -> Result<Self> {
        ModuleObject::direct_sum_of_cyclics(ring, &[n])
    }

    /// The shift module `⊕_{i ∈ N} block`.
    pub fn shift(block: ModuleObject) -> Result<Self> {
        if block.is_shift() {
            return Err(Error::InvalidModule("shift block must be a finite presentation".into()));
        }
        if block.cardinality() == Cardinality::Infinite {
            return Err(Error::InvalidModule("shift block must be finite".into()));
        }
        Ok(ModuleObject { ring: block.ring, shape: Shape::Shift(Box::new(block)) })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_shift(&self) -> bool {
        matches!(self.shape, Shape::Shift(_))
    }

    /// Invariant factors of a finite presentation.
    pub fn factors(&self) -> Result<&[i64]> {
        match &self.shape {
            Shape::FinitePresentation(f) => Ok(f),
            Shape::Shift(_) => Err(Error::ShiftUnsupported("invariant factors")),
        }
    }

    pub fn block(&self) -> Option<&ModuleObject> {
        match &self.shape {
            Shape::Shift(b) => Some(b),
            Shape::FinitePresentation(_) => None,
        }
    }

    /// Number of canonical generators (block generators for shift modules).
    pub fn generator_count(&self) -> usize {
        match &self.shape {
            Shape::FinitePresentation(f) => f.len(),
            Shape::Shift(b) => b.generator_count(),
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        match &self.shape {
            Shape::FinitePresentation(f) => {
                if f.contains(&0) {
                    Cardinality::Infinite
                } else {
                    Cardinality::Finite(f.iter().map(|&d| d as u128).product())
                }
            }
            Shape::Shift(b) => {
                if b.cardinality() == Cardinality::Finite(1) {
                    Cardinality::Finite(1)
                } else {
                    Cardinality::Infinite
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cardinality() == Cardinality::Finite(1)
    }

    /// Free rank of a finite presentation (number of zero factors).
    pub fn free_rank(&self) -> Result<usize> {
        Ok(self.factors()?.iter().filter(|&&d| d == 0).count())
    }

    /// Moduli of the coordinate system: the factors themselves.
    pub(crate) fn moduli(&self) -> Result<Vec<i64>> {
        self.factors().map(|f| f.to_vec())
    }

    /// Reduces a coordinate vector into canonical range.
    pub fn reduce_coords(&self, coords: &[i64]) -> Result<Vec<i64>> {
        let f = self.factors()?;
        if coords.len() != f.len() {
            return Err(Error::InvalidModule(format!(
                "coordinate vector of length {} for a module with {} generators",
                coords.len(),
                f.len()
            )));
        }
        Ok(coords.iter().zip(f).map(|(&x, &d)| reduce(x, d)).collect())
    }

    /// All elements of a finite module in lexicographic order of coordinates.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let f = self.factors()?;
        if f.contains(&0) {
            return Err(Error::TooLarge { what: "element set", size: u128::MAX, cap: 0 });
        }
        let total: usize = f.iter().map(|&d| d as usize).product();
        let mut out = Vec::with_capacity(total);
        let mut coords = vec![0i64; f.len()];
        for _ in 0..total {
            out.push(Element { parent: self.clone(), coords: coords.clone() });
            for (c, &d) in coords.iter_mut().zip(f).rev() {
                *c += 1;
                if *c < d {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }
}

fn validate_factors(ring: RingSpec, factors: &[i64]) -> Result<()> {
    for w in factors.windows(2) {
        let ok = if w[1] == 0 { true } else { w[0] != 0 && w[1] % w[0] == 0 };
        if !ok {
            return Err(Error::InvalidModule(format!("factors {factors:?} are not a divisibility chain")));
        }
    }
    if factors.iter().any(|&d| d == 1 || d < 0) {
        return Err(Error::InvalidModule(format!("factors {factors:?} contain a unit or negative entry")));
    }
    if let RingSpec::IntegersMod(n) = ring {
        if factors.iter().any(|&d| d == 0 || n % d != 0) {
            return Err(Error::InvalidModule(format!("factors {factors:?} do not divide {n}")));
        }
    }
    Ok(())
}

impl fmt::Display for ModuleObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::FinitePresentation(fs) if fs.is_empty() => write!(f, "0"),
            Shape::FinitePresentation(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
            Shape::Shift(b) => write!(f, "shift({b})"),
        }
    }
}

/// Canonical presentation together with the coordinate change from the
/// ambient free module.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub module: ModuleObject,
    /// Matrix sending ambient coordinates to canonical coordinates
    /// (rows = canonical generators, cols = ambient generators).
    pub projection: Matrix,
    /// Matrix whose columns are ambient lifts of the canonical generators.
    pub lift: Matrix,
}

/// `Z^n / im(relations)` (columns of `relations` are relations), plus `n·Z^n`
/// when the ring is `Z/n`.
pub fn present_module(ring: RingSpec, relations: &Matrix) -> ModuleObject {
    present_with_maps(ring, relations).module
}

/// As [`present_module`], also returning the projection and lift matrices.
pub fn present_with_maps(ring: RingSpec, relations: &Matrix) -> Presentation {
    let n = relations.rows();
    let mut rel = relations.clone();
    if let RingSpec::IntegersMod(m) = ring {
        let extra: Vec<i64> = vec![m; n];
        rel = rel.hstack(&Matrix::diagonal(&extra));
    }
    // Relations are columns: Z^n / col-span(R). With U R V = D, the
    // coordinates y = U x put the quotient into diagonal form.
    let snf = smith_normal_form(&rel);
    let diag = snf.diagonal();
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    for i in 0..n {
        let d = if i < diag.len() { diag[i] } else { 0 };
        if d != 1 {
            factors.push(d);
            kept.push(i);
        }
    }
    // Zero factors already trail the positive ones in Smith form.
    let projection = {
        let mut p = Matrix::zeros(kept.len(), n);
        for (r, &i) in kept.iter().enumerate() {
            for c in 0..n {
                p[(r, c)] = reduce(snf.u[(i, c)], factors[r]);
            }
        }
        p
    };
    let lift = {
        let mut l = Matrix::zeros(n, kept.len());
        for (c, &i) in kept.iter().enumerate() {
            for r in 0..n {
                l[(r, c)] = snf.u_inv[(r, i)];
            }
        }
        l
    };
    let module = ModuleObject { ring, shape: Shape::FinitePresentation(factors) };
    Presentation { module, projection, lift }
}

/// An element of a finitely presented module in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    parent: ModuleObject,
    coords: Vec<i64>,
}

impl Element {
    pub fn new(parent: &ModuleObject, coords: &[i64]) -> Result<Self> {
        let coords = parent.reduce_coords(coords)?;
        Ok(Element { parent: parent.clone(), coords })
    }

    pub fn zero(parent: &ModuleObject) -> Result<Self> {
        Element::new(parent, &vec![0; parent.generator_count()])
    }

    pub fn parent(&self) -> &ModuleObject {
        &self.parent
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.parent != other.parent {
            return Err(Error::MismatchedParent);
        }
        let sum: Vec<i64> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Element::new(&self.parent, &sum)
    }

    pub fn scale(&self, k: i64) -> Element {
        let c: Vec<i64> = self.coords.iter().map(|&a| a * k).collect();
        Element::new(&self.parent, &c).expect("same parent")
    }

    /// Additive order; `None` for elements of infinite order.
    pub fn order(&self) -> Option<i64> {
        let f = self.parent.factors().ok()?;
        let mut ord = 1i64;
        for (&c, &d) in self.coords.iter().zip(f) {
            if c == 0 {
                continue;
            }
            if d == 0 {
                return None;
            }
            let o = d / crate::matrix::gcd(c, d);
            ord = num_integer::lcm(ord, o);
        }
        Some(ord)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    #[test]
    fn present_diag_2_3_is_z6() {
        let m = present_module(z(), &Matrix::diagonal(&[2, 3]));
        assert_eq!(m.factors().unwrap(), &[6]);
    }

    #[test]
    fn present_free_rank_one() {
        let m = present_module(z(), &Matrix::zeros(1, 0));
        assert_eq!(m.factors().unwrap(), &[0]);
        assert_eq!(m.cardinality(), Cardinality::Infinite);
    }

    #[test]
    fn present_over_z_mod_4() {
        let m = present_module(RingSpec::IntegersMod(4), &Matrix::from_rows(&[vec![2]], 1));
        assert_eq!(m.factors().unwrap(), &[2]);
        let free = present_module(RingSpec::IntegersMod(4), &Matrix::zeros(2, 0));
        assert_eq!(free.factors().unwrap(), &[4, 4]);
    }

    #[test]
    fn projection_and_lift_are_inverse_on_quotient() {
        let rel = Matrix::from_rows(&[vec![2, 0], vec![0, 3]], 2);
        let p = present_with_maps(z(), &rel);
        let comp = p.projection.mul(&p.lift);
        let f = p.module.factors().unwrap();
        for i in 0..f.len() {
            for j in 0..f.len() {
                assert_eq!(reduce(comp[(i, j)], f[i]), if i == j { 1 } else { 0 });
            }
        }
    }

    #[test]
    fn cardinalities() {
        let m = ModuleObject::from_factors(z(), vec![2, 4]).unwrap();
        assert_eq!(m.cardinality(), Cardinality::Finite(8));
        assert_eq!(m.elements().unwrap().len(), 8);
        let block = ModuleObject::cyclic(z(), 3).unwrap();
        let s = ModuleObject::shift(block).unwrap();
        assert_eq!(s.cardinality(), Cardinality::Infinite);
        assert_eq!(ModuleObject::zero(z()).cardinality(), Cardinality::Finite(1));
    }

    #[test]
    fn bad_factor_chains_rejected() {
        assert!(ModuleObject::from_factors(z(), vec![2, 3]).is_err());
        assert!(ModuleObject::from_factors(z(), vec![0, 2]).is_err());
        assert!(ModuleObject::from_factors(z(), vec![1]).is_err());
        assert!(ModuleObject::from_factors(RingSpec::IntegersMod(4), vec![8]).is_err());
        assert!(ModuleObject::shift(ModuleObject::from_factors(z(), vec![0]).unwrap()).is_err());
    }

    #[test]
    fn element_orders() {
        let m = ModuleObject::from_factors(z(), vec![2, 4]).unwrap();
        let e = Element::new(&m, &[1, 2]).unwrap();
        assert_eq!(e.order(), Some(2));
        let f = ModuleObject::from_factors(z(), vec![4, 0]).unwrap();
        assert_eq!(Element::new(&f, &[1, 1]).unwrap().order(), None);
    }
}

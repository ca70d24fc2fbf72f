use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{reduce, Matrix};
use crate::module::{Element, ModuleObject};

/// One summand of a shift-module endomorphism: apply `block` to every block
/// coordinate, then move position `i` to `i + offset`. Negative offsets drop
/// whatever lands before position 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftTerm {
    pub offset: i64,
    pub block: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MorphismBody {
    /// Columns are images of the domain generators in codomain coordinates.
    Matrix(Matrix),
    /// Terms sorted by offset, offsets distinct, no zero blocks.
    ShiftSum(Vec<ShiftTerm>),
}

/// A module homomorphism between canonical presentations, or a finite formal
/// sum of shifted block maps on a shift module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    dom: ModuleObject,
    cod: ModuleObject,
    body: MorphismBody,
}

/// Checks that the matrix respects the relations of `dom` and reduces its
/// entries into canonical range for `cod`.
fn canonical_matrix(dom: &ModuleObject, cod: &ModuleObject, m: &Matrix) -> Result<Matrix> {
    let df = dom.factors()?;
    let cf = cod.factors()?;
    if m.rows() != cf.len() || m.cols() != df.len() {
        return Err(Error::InvalidMorphism(format!(
            "matrix is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            cf.len(),
            df.len()
        )));
    }
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for j in 0..df.len() {
        for i in 0..cf.len() {
            let a = m[(i, j)];
            let c = cf[i];
            let d = df[j];
            // d_j * a must vanish in Z/c_i.
            let ok = match (d, c) {
                (0, _) => true,
                (_, 0) => a == 0,
                _ => (d as i128 * reduce(a, c) as i128) % c as i128 == 0,
            };
            if !ok {
                return Err(Error::InvalidMorphism(format!(
                    "generator {j} of order {d} cannot map to entry {a} in Z/{c}"
                )));
            }
            out[(i, j)] = reduce(a, c);
        }
    }
    Ok(out)
}

impl Morphism {
    pub fn from_matrix(dom: &ModuleObject, cod: &ModuleObject, matrix: &Matrix) -> Result<Self> {
        if dom.ring() != cod.ring() {
            return Err(Error::MismatchedRing);
        }
        if dom.is_shift() || cod.is_shift() {
            return Err(Error::ShiftUnsupported("matrix morphism"));
        }
        let m = canonical_matrix(dom, cod, matrix)?;
        Ok(Morphism { dom: dom.clone(), cod: cod.clone(), body: MorphismBody::Matrix(m) })
    }

    /// Endomorphism of a shift module given by `(offset, block matrix)` terms.
    pub fn shift_sum(module: &ModuleObject, terms: Vec<ShiftTerm>) -> Result<Self> {
        let block = module.block().ok_or_else(|| {
            Error::InvalidMorphism("shift terms need a shift module".into())
        })?;
        let mut out: Vec<ShiftTerm> = Vec::new();
        for t in terms {
            let b = canonical_matrix(block, block, &t.block)?;
            if out.iter().any(|o| o.offset == t.offset) {
                return Err(Error::InvalidMorphism(format!("duplicate offset {}", t.offset)));
            }
            if !b.is_zero() {
                out.push(ShiftTerm { offset: t.offset, block: b });
            }
        }
        out.sort_by_key(|t| t.offset);
        Ok(Morphism {
            dom: module.clone(),
            cod: module.clone(),
            body: MorphismBody::ShiftSum(out),
        })
    }

    /// The Bernoulli right shift `(x_0, x_1, ...) ↦ (0, x_0, x_1, ...)`.
    pub fn bernoulli_shift(module: &ModuleObject) -> Result<Self> {
        Morphism::shift_power(module, 1)
    }

    /// `k`-fold shift by `k` positions (negative `k` shifts left).
    pub fn shift_power(module: &ModuleObject, k: i64) -> Result<Self> {
        let n = module
            .block()
            .ok_or_else(|| Error::InvalidMorphism("shift needs a shift module".into()))?
            .generator_count();
        Morphism::shift_sum(module, vec![ShiftTerm { offset: k, block: Matrix::identity(n) }])
    }

    pub fn identity(m: &ModuleObject) -> Self {
        match m.block() {
            Some(b) => Morphism::shift_sum(
                m,
                vec![ShiftTerm { offset: 0, block: Matrix::identity(b.generator_count()) }],
            )
            .expect("identity is valid"),
            None => {
                let n = m.generator_count();
                Morphism::from_matrix(m, m, &Matrix::identity(n)).expect("identity is valid")
            }
        }
    }

    pub fn zero(dom: &ModuleObject, cod: &ModuleObject) -> Result<Self> {
        if dom.is_shift() || cod.is_shift() {
            if dom != cod {
                return Err(Error::ShiftUnsupported("maps between different shift modules"));
            }
            return Morphism::shift_sum(dom, Vec::new());
        }
        Morphism::from_matrix(dom, cod, &Matrix::zeros(cod.generator_count(), dom.generator_count()))
    }

    /// Multiplication by an integer scalar.
    pub fn scalar(m: &ModuleObject, k: i64) -> Self {
        match m.block() {
            Some(b) => {
                let n = b.generator_count();
                let blk = Matrix::diagonal(&vec![k; n]);
                Morphism::shift_sum(m, vec![ShiftTerm { offset: 0, block: blk }]).expect("scalar")
            }
            None => {
                let n = m.generator_count();
                Morphism::from_matrix(m, m, &Matrix::diagonal(&vec![k; n])).expect("scalar")
            }
        }
    }

    pub fn dom(&self) -> &ModuleObject {
        &self.dom
    }

    pub fn cod(&self) -> &ModuleObject {
        &self.cod
    }

    pub fn body(&self) -> &MorphismBody {
        &self.body
    }

    pub fn is_endomorphism(&self) -> bool {
        self.dom == self.cod
    }

    pub fn matrix(&self) -> Result<&Matrix> {
        match &self.body {
            MorphismBody::Matrix(m) => Ok(m),
            MorphismBody::ShiftSum(_) => Err(Error::ShiftUnsupported("matrix view")),
        }
    }

    pub fn shift_terms(&self) -> Option<&[ShiftTerm]> {
        match &self.body {
            MorphismBody::ShiftSum(t) => Some(t),
            MorphismBody::Matrix(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.body {
            MorphismBody::Matrix(m) => m.is_zero(),
            MorphismBody::ShiftSum(t) => t.is_empty(),
        }
    }

    /// Largest positive offset (0 when none).
    pub fn max_forward_offset(&self) -> usize {
        self.shift_terms()
            .map(|ts| ts.iter().map(|t| t.offset.max(0) as usize).max().unwrap_or(0))
            .unwrap_or(0)
    }

    fn max_abs_offset(&self) -> usize {
        self.shift_terms()
            .map(|ts| ts.iter().map(|t| t.offset.unsigned_abs() as usize).max().unwrap_or(0))
            .unwrap_or(0)
    }

    /// Image of a coordinate vector of the domain, reduced in the codomain.
    pub fn apply_coords(&self, x: &[i64]) -> Result<Vec<i64>> {
        let m = self.matrix()?;
        if x.len() != m.cols() {
            return Err(Error::MismatchedParent);
        }
        self.cod.reduce_coords(&m.mul_vec(x))
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.parent() != &self.dom {
            return Err(Error::MismatchedParent);
        }
        Element::new(&self.cod, &self.apply_coords(x.coords())?)
    }

    /// Applies a shift sum to a flattened finitely supported vector over the
    /// first `window` positions. The output window grows by the largest
    /// forward offset.
    pub fn apply_window(&self, x: &[i64], window: usize) -> Result<(Vec<i64>, usize)> {
        let terms = self
            .shift_terms()
            .ok_or(Error::ShiftUnsupported("window application needs a shift sum"))?;
        let block = self.dom.block().expect("shift sum on shift module");
        let moduli = block.factors()?;
        let b = moduli.len();
        if x.len() != window * b {
            return Err(Error::MismatchedParent);
        }
        let out_window = window + self.max_forward_offset();
        let mut out = vec![0i64; out_window * b];
        for t in terms {
            for pos in 0..window {
                let target = pos as i64 + t.offset;
                if target < 0 {
                    continue;
                }
                let src = &x[pos * b..(pos + 1) * b];
                if src.iter().all(|&v| v == 0) {
                    continue;
                }
                let img = t.block.mul_vec(src);
                let base = target as usize * b;
                for (k, v) in img.into_iter().enumerate() {
                    out[base + k] += v;
                }
            }
        }
        for (i, v) in out.iter_mut().enumerate() {
            *v = reduce(*v, moduli[i % b]);
        }
        Ok((out, out_window))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.cod != self.dom {
            return Err(Error::MismatchedParent);
        }
        match (&self.body, &inner.body) {
            (MorphismBody::Matrix(a), MorphismBody::Matrix(b)) => {
                Morphism::from_matrix(&inner.dom, &self.cod, &a.mul(b))
            }
            (MorphismBody::ShiftSum(outer), MorphismBody::ShiftSum(inn)) => {
                // Exact as a formal sum only when the inner map never truncates.
                if inn.iter().any(|t| t.offset < 0) && !outer.is_empty() {
                    return Err(Error::Unrepresentable(
                        "composition after a left shift is not a finite shift sum".into(),
                    ));
                }
                let mut acc: Vec<ShiftTerm> = Vec::new();
                for o in outer {
                    for i in inn {
                        let off = o.offset + i.offset;
                        let m = o.block.mul(&i.block);
                        match acc.iter_mut().find(|t| t.offset == off) {
                            Some(t) => {
                                let mut s = t.block.clone();
                                for r in 0..s.rows() {
                                    for c in 0..s.cols() {
                                        s[(r, c)] += m[(r, c)];
                                    }
                                }
                                t.block = s;
                            }
                            None => acc.push(ShiftTerm { offset: off, block: m }),
                        }
                    }
                }
                Morphism::shift_sum(&self.dom, acc)
            }
            _ => Err(Error::ShiftUnsupported("mixed composition")),
        }
    }

    /// Sum of two parallel morphisms.
    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::MismatchedParent);
        }
        match (&self.body, &other.body) {
            (MorphismBody::Matrix(a), MorphismBody::Matrix(b)) => {
                let mut s = a.clone();
                for r in 0..s.rows() {
                    for c in 0..s.cols() {
                        s[(r, c)] += b[(r, c)];
                    }
                }
                Morphism::from_matrix(&self.dom, &self.cod, &s)
            }
            (MorphismBody::ShiftSum(a), MorphismBody::ShiftSum(b)) => {
                let mut acc = a.clone();
                for t in b {
                    match acc.iter_mut().find(|x| x.offset == t.offset) {
                        Some(x) => {
                            for r in 0..x.block.rows() {
                                for c in 0..x.block.cols() {
                                    x.block[(r, c)] += t.block[(r, c)];
                                }
                            }
                        }
                        None => acc.push(t.clone()),
                    }
                }
                Morphism::shift_sum(&self.dom, acc)
            }
            _ => Err(Error::ShiftUnsupported("mixed sum")),
        }
    }

    pub fn scale(&self, k: i64) -> Morphism {
        match &self.body {
            MorphismBody::Matrix(a) => {
                let mut s = a.clone();
                for r in 0..s.rows() {
                    for c in 0..s.cols() {
                        s[(r, c)] *= k;
                    }
                }
                Morphism::from_matrix(&self.dom, &self.cod, &s).expect("scaling keeps validity")
            }
            MorphismBody::ShiftSum(ts) => {
                let scaled = ts
                    .iter()
                    .map(|t| {
                        let mut b = t.block.clone();
                        for r in 0..b.rows() {
                            for c in 0..b.cols() {
                                b[(r, c)] *= k;
                            }
                        }
                        ShiftTerm { offset: t.offset, block: b }
                    })
                    .collect();
                Morphism::shift_sum(&self.dom, scaled).expect("scaling keeps validity")
            }
        }
    }

    /// Whether `self ∘ a == b ∘ other` holds pointwise, for morphisms that may
    /// not compose into finite formal sums. Shift maps are compared on every
    /// basis element up to the largest position where truncation can differ;
    /// beyond it both sides are translation invariant.
    pub fn composites_agree(
        left_outer: &Morphism,
        left_inner: &Morphism,
        right_outer: &Morphism,
        right_inner: &Morphism,
    ) -> Result<bool> {
        if left_inner.cod != left_outer.dom || right_inner.cod != right_outer.dom {
            return Err(Error::MismatchedParent);
        }
        if left_inner.dom != right_inner.dom || left_outer.cod != right_outer.cod {
            return Err(Error::MismatchedParent);
        }
        match left_inner.dom.block() {
            None => {
                let l = left_outer.matrix()?.mul(left_inner.matrix()?);
                let r = right_outer.matrix()?.mul(right_inner.matrix()?);
                let f = left_outer.cod.factors()?;
                Ok((0..l.rows()).all(|i| {
                    (0..l.cols()).all(|j| reduce(l[(i, j)] - r[(i, j)], f[i]) == 0)
                }))
            }
            Some(block) => {
                let b = block.generator_count();
                let k = left_outer.max_abs_offset()
                    + left_inner.max_abs_offset()
                    + right_outer.max_abs_offset()
                    + right_inner.max_abs_offset()
                    + 1;
                for pos in 0..=k {
                    let window = pos + 1;
                    for g in 0..b {
                        let mut x = vec![0i64; window * b];
                        x[pos * b + g] = 1;
                        let (y1, w1) = left_inner.apply_window(&x, window)?;
                        let (z1, wz1) = left_outer.apply_window(&y1, w1)?;
                        let (y2, w2) = right_inner.apply_window(&x, window)?;
                        let (z2, wz2) = right_outer.apply_window(&y2, w2)?;
                        let w = wz1.max(wz2);
                        let mut a = z1;
                        a.resize(w * b, 0);
                        let mut c = z2;
                        c.resize(w * b, 0);
                        if a != c {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            MorphismBody::Matrix(m) => write!(f, "{} -> {} by {}", self.dom, self.cod, m),
            MorphismBody::ShiftSum(ts) => {
                write!(f, "{} ->", self.dom)?;
                if ts.is_empty() {
                    return write!(f, " 0");
                }
                for (i, t) in ts.iter().enumerate() {
                    let sep = if i == 0 { " " } else { " + " };
                    write!(f, "{sep}S^{}{}", t.offset, t.block)?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    #[test]
    fn relation_check() {
        let z2 = ModuleObject::cyclic(z(), 2).unwrap();
        let z4 = ModuleObject::cyclic(z(), 4).unwrap();
        assert!(Morphism::from_matrix(&z2, &z4, &Matrix::from_rows(&[vec![2]], 1)).is_ok());
        assert!(Morphism::from_matrix(&z2, &z4, &Matrix::from_rows(&[vec![1]], 1)).is_err());
        let zz = ModuleObject::cyclic(z(), 0).unwrap();
        assert!(Morphism::from_matrix(&z2, &zz, &Matrix::from_rows(&[vec![1]], 1)).is_err());
        assert!(Morphism::from_matrix(&zz, &z2, &Matrix::from_rows(&[vec![1]], 1)).is_ok());
    }

    #[test]
    fn entries_are_reduced() {
        let z4 = ModuleObject::cyclic(z(), 4).unwrap();
        let f = Morphism::from_matrix(&z4, &z4, &Matrix::from_rows(&[vec![-1]], 1)).unwrap();
        assert_eq!(f.matrix().unwrap()[(0, 0)], 3);
    }

    #[test]
    fn shift_application_and_truncation() {
        let s = ModuleObject::shift(ModuleObject::cyclic(z(), 2).unwrap()).unwrap();
        let beta = Morphism::bernoulli_shift(&s).unwrap();
        let (y, w) = beta.apply_window(&[1, 0, 1], 3).unwrap();
        assert_eq!((y, w), (vec![0, 1, 0, 1], 4));
        let left = Morphism::shift_power(&s, -1).unwrap();
        let (y, w) = left.apply_window(&[1, 1, 0], 3).unwrap();
        assert_eq!((y, w), (vec![1, 0, 0], 3));
    }

    #[test]
    fn shift_composition() {
        let s = ModuleObject::shift(ModuleObject::cyclic(z(), 3).unwrap()).unwrap();
        let beta = Morphism::bernoulli_shift(&s).unwrap();
        let b2 = beta.compose(&beta).unwrap();
        assert_eq!(b2, Morphism::shift_power(&s, 2).unwrap());
        let left = Morphism::shift_power(&s, -1).unwrap();
        assert!(beta.compose(&left).is_err());
        // left ∘ right = id, right ∘ left != id.
        let id = Morphism::identity(&s);
        assert!(Morphism::composites_agree(&left, &beta, &id, &id).unwrap());
        assert!(!Morphism::composites_agree(&beta, &left, &id, &id).unwrap());
    }

    #[test]
    fn duplicate_offsets_rejected() {
        let s = ModuleObject::shift(ModuleObject::cyclic(z(), 2).unwrap()).unwrap();
        let t = ShiftTerm { offset: 1, block: Matrix::identity(1) };
        assert!(Morphism::shift_sum(&s, vec![t.clone(), t]).is_err());
    }
}

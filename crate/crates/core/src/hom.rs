//! Hom-groups between canonical presentations.
//!
//! `Hom(⊕ Z/d_j, ⊕ Z/c_i) = ⊕_{i,j} Hom(Z/d_j, Z/c_i)` and each summand is
//! cyclic, so generators come in closed form. Equivariant hom-groups are cut
//! out of that by an integer linear system.

use crate::error::{Error, Result};
use crate::matrix::{gcd, integer_kernel, Matrix};
use crate::module::ModuleObject;
use crate::morphism::Morphism;

/// One cyclic summand of a hom-group: the elementary map sending domain
/// generator `j` to `value · e_i`, of additive order `order` (0 = infinite).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct HomCell {
    row: usize,
    col: usize,
    value: i64,
    order: i64,
}

fn hom_cells(m: &ModuleObject, k: &ModuleObject) -> Result<Vec<HomCell>> {
    if m.is_shift() || k.is_shift() {
        return Err(Error::ShiftUnsupported("hom generators"));
    }
    if m.ring() != k.ring() {
        return Err(Error::MismatchedRing);
    }
    let df = m.factors()?;
    let cf = k.factors()?;
    let mut cells = Vec::new();
    for (col, &d) in df.iter().enumerate() {
        for (row, &c) in cf.iter().enumerate() {
            let (value, order) = match (d, c) {
                (0, 0) => (1, 0),
                (_, 0) => continue,
                (0, _) => (1, c),
                _ => {
                    let g = gcd(d, c);
                    (c / g, g)
                }
            };
            if order == 1 {
                continue;
            }
            cells.push(HomCell { row, col, value, order });
        }
    }
    Ok(cells)
}

fn cell_morphism(m: &ModuleObject, k: &ModuleObject, cell: &HomCell) -> Result<Morphism> {
    let mut a = Matrix::zeros(k.generator_count(), m.generator_count());
    a[(cell.row, cell.col)] = cell.value;
    Morphism::from_matrix(m, k, &a)
}

/// Generators of `Hom(M, K)` as an abelian group.
pub fn hom_generators(m: &ModuleObject, k: &ModuleObject) -> Result<Vec<Morphism>> {
    hom_cells(m, k)?.iter().map(|c| cell_morphism(m, k, c)).collect()
}

/// Orders of the cyclic summands of `Hom(M, K)` (0 for infinite), in the
/// order of [`hom_generators`].
pub fn hom_group_orders(m: &ModuleObject, k: &ModuleObject) -> Result<Vec<i64>> {
    Ok(hom_cells(m, k)?.iter().map(|c| c.order).collect())
}

/// Every element of a finite `Hom(M, K)`, listed once each.
pub fn enumerate_homs(m: &ModuleObject, k: &ModuleObject, cap: u128) -> Result<Vec<Morphism>> {
    let cells = hom_cells(m, k)?;
    if cells.iter().any(|c| c.order == 0) {
        return Err(Error::TooLarge { what: "hom-group", size: u128::MAX, cap });
    }
    let size: u128 = cells.iter().map(|c| c.order as u128).product();
    if size > cap {
        return Err(Error::TooLarge { what: "hom-group", size, cap });
    }
    let rows = k.generator_count();
    let cols = m.generator_count();
    let mut out = Vec::with_capacity(size as usize);
    let mut coeff = vec![0i64; cells.len()];
    for _ in 0..size {
        let mut a = Matrix::zeros(rows, cols);
        for (c, &t) in cells.iter().zip(&coeff) {
            a[(c.row, c.col)] = c.value * t;
        }
        out.push(Morphism::from_matrix(m, k, &a)?);
        for (t, c) in coeff.iter_mut().zip(&cells).rev() {
            *t += 1;
            if *t < c.order {
                break;
            }
            *t = 0;
        }
    }
    Ok(out)
}

/// Generators of `{f ∈ Hom(M, K) : f ∘ η = μ ∘ f}`.
pub fn flow_hom_generators(
    m: &ModuleObject,
    eta: &Morphism,
    k: &ModuleObject,
    mu: &Morphism,
) -> Result<Vec<Morphism>> {
    if eta.dom() != m || eta.cod() != m || mu.dom() != k || mu.cod() != k {
        return Err(Error::MismatchedParent);
    }
    let cells = hom_cells(m, k)?;
    let eta_m = eta.matrix()?;
    let mu_m = mu.matrix()?;
    let cf = k.factors()?;
    let (rows, cols) = (k.generator_count(), m.generator_count());
    let n = cells.len();
    // Unknowns: one coefficient per cell, then one slack per entry (i, j)
    // absorbing multiples of c_i.
    let mut eqs: Vec<Vec<i64>> = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let mut eq = vec![0i64; n + rows * cols];
            for (t, c) in cells.iter().enumerate() {
                // (G η)[i][j] = value * η[col][j] when c.row == i
                let mut coef = 0i64;
                if c.row == i {
                    coef += c.value * eta_m[(c.col, j)];
                }
                // (μ G)[i][j] = μ[i][row] * value when c.col == j
                if c.col == j {
                    coef -= mu_m[(i, c.row)] * c.value;
                }
                eq[t] = coef;
            }
            eq[n + i * cols + j] = -cf[i];
            eqs.push(eq);
        }
    }
    if eqs.is_empty() {
        return hom_generators(m, k);
    }
    let sys = Matrix::from_rows(&eqs, n + rows * cols);
    let mut out = Vec::new();
    for v in integer_kernel(&sys) {
        let mut a = Matrix::zeros(rows, cols);
        for (c, &t) in cells.iter().zip(&v[..n]) {
            a[(c.row, c.col)] += c.value * t;
        }
        let f = Morphism::from_matrix(m, k, &a)?;
        if !f.is_zero() && !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Every endomorphism of a finite module.
pub fn enumerate_endomorphisms(m: &ModuleObject, cap: u128) -> Result<Vec<Morphism>> {
    enumerate_homs(m, m, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn cyc(n: i64) -> ModuleObject {
        ModuleObject::cyclic(RingSpec::Integers, n).unwrap()
    }

    #[test]
    fn hom_z2_z4() {
        let g = hom_generators(&cyc(2), &cyc(4)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].matrix().unwrap()[(0, 0)], 2);
        assert!(hom_generators(&cyc(2), &cyc(3)).unwrap().is_empty());
    }

    #[test]
    fn hom_with_free_parts() {
        let z = cyc(0);
        assert!(hom_generators(&cyc(5), &z).unwrap().is_empty());
        assert_eq!(hom_group_orders(&z, &cyc(6)).unwrap(), vec![6]);
        assert_eq!(hom_group_orders(&z, &z).unwrap(), vec![0]);
    }

    #[test]
    fn enumerated_hom_count() {
        let m = ModuleObject::from_factors(RingSpec::Integers, vec![2, 4]).unwrap();
        // |End(Z/2 + Z/4)| = 2 * 2 * 2 * 4
        assert_eq!(enumerate_endomorphisms(&m, 1 << 20).unwrap().len(), 32);
        assert!(enumerate_endomorphisms(&m, 10).is_err());
    }

    #[test]
    fn equivariant_homs_z4() {
        let m = cyc(4);
        let three = Morphism::scalar(&m, 3);
        let id = Morphism::identity(&m);
        let g = flow_hom_generators(&m, &three, &m, &id).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].matrix().unwrap()[(0, 0)], 2);
        let same = flow_hom_generators(&m, &id, &m, &id).unwrap();
        assert!(same.iter().any(|f| f.matrix().unwrap()[(0, 0)] % 2 == 1));
    }
}

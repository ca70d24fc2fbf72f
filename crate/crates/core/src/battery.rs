//! Seeded random modules, morphisms and preradical expressions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hom::{hom_generators, hom_group_orders};
use crate::matrix::Matrix;
use crate::module::ModuleObject;
use crate::morphism::{Morphism, ShiftTerm};
use crate::preradical::{GeneratingPair, PreradicalExpr};
use crate::ring::RingSpec;
use crate::submodule::Submodule;

const CYCLIC_ORDERS: [i64; 11] = [2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 27];
const PRIMES: [i64; 3] = [2, 3, 5];

pub struct Battery {
    rng: ChaCha8Rng,
}

impl Battery {
    pub fn new(seed: u64) -> Self {
        Battery { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A finite module over `Z` with `1 ≤ |M| ≤ max_order` and at most three
    /// invariant factors.
    pub fn finite_module(&mut self, max_order: i64) -> ModuleObject {
        loop {
            let k = self.rng.gen_range(0..=3);
            let orders: Vec<i64> = (0..k).map(|_| *CYCLIC_ORDERS.choose(&mut self.rng).expect("nonempty")).collect();
            if orders.iter().product::<i64>() <= max_order {
                return ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, &orders).expect("valid orders");
            }
        }
    }

    /// A finite module over `Z/n`: a sum of at most three cyclic modules
    /// whose orders divide `n`.
    pub fn module_over(&mut self, n: i64, max_order: i64) -> ModuleObject {
        let divisors: Vec<i64> = (2..=n).filter(|d| n % d == 0).collect();
        let ring = RingSpec::IntegersMod(n);
        loop {
            let k = self.rng.gen_range(0..=3);
            let orders: Vec<i64> = (0..k).map(|_| *divisors.choose(&mut self.rng).expect("n >= 2")).collect();
            if orders.iter().product::<i64>() <= max_order {
                return ModuleObject::direct_sum_of_cyclics(ring, &orders).expect("orders divide n");
            }
        }
    }

    /// A finitely generated module over `Z` with a free summand.
    pub fn module_with_free_part(&mut self) -> ModuleObject {
        let free = self.rng.gen_range(1..=2);
        let torsion = self.rng.gen_range(0..=1);
        let mut orders = vec![0; free];
        for _ in 0..torsion {
            orders.push(*CYCLIC_ORDERS[..6].choose(&mut self.rng).expect("nonempty"));
        }
        ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, &orders).expect("valid orders")
    }

    /// `⊕_{i ∈ N} B` for a small block `B` over `Z`.
    pub fn shift_module(&mut self) -> ModuleObject {
        let blocks: [&[i64]; 5] = [&[2], &[3], &[5], &[4], &[2, 2]];
        let b = blocks.choose(&mut self.rng).expect("nonempty");
        ModuleObject::shift(ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, b).expect("valid")).expect("finite block")
    }

    /// A random element of `Hom(M, K)` for finite presentations.
    pub fn morphism(&mut self, dom: &ModuleObject, cod: &ModuleObject) -> Result<Morphism> {
        let gens = hom_generators(dom, cod)?;
        let orders = hom_group_orders(dom, cod)?;
        let mut acc = Matrix::zeros(cod.generator_count(), dom.generator_count());
        for (g, order) in gens.iter().zip(orders) {
            let c = if order == 0 { self.rng.gen_range(-3..=3) } else { self.rng.gen_range(0..order) };
            let a = g.matrix()?;
            for i in 0..acc.rows() {
                for j in 0..acc.cols() {
                    acc[(i, j)] += c * a[(i, j)];
                }
            }
        }
        Morphism::from_matrix(dom, cod, &acc)
    }

    /// A random endomorphism; on shift modules a sum of block maps at offsets
    /// `0..=2`.
    pub fn endomorphism(&mut self, m: &ModuleObject) -> Result<Morphism> {
        match m.block() {
            None => self.morphism(m, m),
            Some(block) => {
                let mut terms = Vec::new();
                for offset in 0..=2 {
                    if self.rng.gen_bool(0.5) {
                        let g = self.morphism(block, block)?;
                        terms.push(ShiftTerm { offset, block: g.matrix()?.clone() });
                    }
                }
                Morphism::shift_sum(m, terms)
            }
        }
    }

    /// `count` random endomorphisms, always including `0` and `id`.
    pub fn endomorphism_family(&mut self, m: &ModuleObject, count: usize) -> Result<Vec<Morphism>> {
        let mut out = vec![Morphism::zero(m, m)?, Morphism::identity(m)];
        while out.len() < count.max(2) {
            let e = self.endomorphism(m)?;
            if !out.contains(&e) {
                out.push(e);
            } else if self.rng.gen_bool(0.2) {
                break;
            }
        }
        Ok(out)
    }

    pub fn submodule(&mut self, m: &ModuleObject) -> Result<Submodule> {
        let d = m.factors()?.to_vec();
        let count = self.rng.gen_range(0..=2);
        let gens: Vec<Vec<i64>> = (0..count)
            .map(|_| d.iter().map(|&di| if di == 0 { self.rng.gen_range(-2..=2) } else { self.rng.gen_range(0..di) }).collect())
            .collect();
        Submodule::generated_by(m, &gens)
    }

    pub fn builtin(&mut self) -> PreradicalExpr {
        match self.rng.gen_range(0..5) {
            0 => PreradicalExpr::Zero,
            1 => PreradicalExpr::Identity,
            2 => PreradicalExpr::Torsion,
            _ => PreradicalExpr::PTorsion(*PRIMES.choose(&mut self.rng).expect("nonempty")),
        }
    }

    /// A closure of builtins under the four operations, of depth at most
    /// `depth`.
    pub fn expression(&mut self, depth: usize) -> PreradicalExpr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.builtin();
        }
        let l = self.expression(depth - 1);
        let r = self.expression(depth - 1);
        match self.rng.gen_range(0..4) {
            0 => PreradicalExpr::meet(l, r),
            1 => PreradicalExpr::join(l, r),
            2 => PreradicalExpr::product(l, r),
            _ => PreradicalExpr::coproduct(l, r),
        }
    }

    /// `alpha(M, N)` or `omega(M, N)` for a random small pair.
    pub fn generating_leaf(&mut self, max_order: i64) -> Result<PreradicalExpr> {
        let m = self.finite_module(max_order);
        let n = self.submodule(&m)?;
        let pair = GeneratingPair::new("M", "N", n);
        Ok(if self.rng.gen_bool(0.5) { PreradicalExpr::alpha(pair) } else { PreradicalExpr::omega(pair) })
    }

    pub fn prime(&mut self) -> i64 {
        *PRIMES.choose(&mut self.rng).expect("nonempty")
    }

    pub fn modulus(&mut self) -> i64 {
        self.rng.gen_range(2..=12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_batteries_repeat() {
        let mut a = Battery::new(7);
        let mut b = Battery::new(7);
        for _ in 0..20 {
            let ma = a.finite_module(256);
            let mb = b.finite_module(256);
            assert_eq!(ma, mb);
            assert_eq!(a.endomorphism(&ma).unwrap(), b.endomorphism(&mb).unwrap());
            assert_eq!(a.expression(3), b.expression(3));
        }
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut b = Battery::new(1);
        for _ in 0..30 {
            let m = b.finite_module(256);
            assert!(m.cardinality().finite().unwrap() <= 256);
            let n = b.modulus();
            let mn = b.module_over(n, 64);
            assert_eq!(mn.ring(), RingSpec::IntegersMod(n));
            let s = b.shift_module();
            b.endomorphism(&s).unwrap();
        }
    }
}

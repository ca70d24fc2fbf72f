//! Naturality and order checks over finite batteries.

use std::fmt;

use crate::error::Result;
use crate::module::ModuleObject;
use crate::morphism::Morphism;
use crate::preradical::eval::eval_preradical;
use crate::preradical::expr::PreradicalExpr;
use crate::submodule::Submodule;

/// A square `f(σ(M)) ≤ σ(M')` that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub morphism: Morphism,
    /// A generator of `σ(M)` whose image leaves `σ(M')`, when the square
    /// could be evaluated at all.
    pub witness: Option<Vec<i64>>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NaturalityReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl NaturalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks an arbitrary assignment `M ↦ σ(M) ≤ M` for naturality.
pub fn check_assignment<F>(assign: F, battery: &[Morphism]) -> NaturalityReport
where
    F: Fn(&ModuleObject) -> Result<Submodule>,
{
    let mut report = NaturalityReport::default();
    for f in battery {
        report.checked += 1;
        let square = || -> Result<Option<Vec<i64>>> {
            let src = assign(f.dom())?;
            let dst = assign(f.cod())?;
            for g in src.generators() {
                let y = f.apply_coords(&g)?;
                if !dst.contains_coords(&y)? {
                    return Ok(Some(g));
                }
            }
            Ok(None)
        };
        match square() {
            Ok(None) => {}
            Ok(Some(g)) => report.violations.push(Violation {
                morphism: f.clone(),
                detail: format!("image of {g:?} leaves the target value"),
                witness: Some(g),
            }),
            Err(e) => report.violations.push(Violation { morphism: f.clone(), witness: None, detail: e.to_string() }),
        }
    }
    report
}

pub fn check_naturality(e: &PreradicalExpr, battery: &[Morphism]) -> NaturalityReport {
    check_assignment(|m| eval_preradical(e, m), battery)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Le,
    Ge,
    Eq,
    Incomparable,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Order::Le => "LE",
            Order::Ge => "GE",
            Order::Eq => "EQ",
            Order::Incomparable => "INCOMPARABLE",
        };
        write!(f, "{s}")
    }
}

/// Verdict of [`compare_preradicals`]; holds on the battery only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderVerdict {
    pub order: Order,
    /// A module where `a(M) ≰ b(M)`.
    pub not_le: Option<ModuleObject>,
    /// A module where `b(M) ≰ a(M)`.
    pub not_ge: Option<ModuleObject>,
}

pub fn compare_preradicals(a: &PreradicalExpr, b: &PreradicalExpr, battery: &[ModuleObject]) -> Result<OrderVerdict> {
    let mut not_le = None;
    let mut not_ge = None;
    for m in battery {
        let va = eval_preradical(a, m)?;
        let vb = eval_preradical(b, m)?;
        if not_le.is_none() && !va.le(&vb)? {
            not_le = Some(m.clone());
        }
        if not_ge.is_none() && !vb.le(&va)? {
            not_ge = Some(m.clone());
        }
    }
    let order = match (&not_le, &not_ge) {
        (None, None) => Order::Eq,
        (None, Some(_)) => Order::Le,
        (Some(_), None) => Order::Ge,
        (Some(_), Some(_)) => Order::Incomparable,
    };
    Ok(OrderVerdict { order, not_le, not_ge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::ring::RingSpec;
    use PreradicalExpr as P;

    fn m(f: &[i64]) -> ModuleObject {
        ModuleObject::direct_sum_of_cyclics(RingSpec::Integers, f).unwrap()
    }

    fn battery() -> Vec<Morphism> {
        let z4 = m(&[4]);
        let z2 = m(&[2]);
        let z24 = m(&[2, 4]);
        vec![
            Morphism::from_matrix(&z4, &z2, &Matrix::from_rows(&[vec![1]], 1)).unwrap(),
            Morphism::from_matrix(&z2, &z4, &Matrix::from_rows(&[vec![2]], 1)).unwrap(),
            Morphism::from_matrix(&z24, &z4, &Matrix::from_rows(&[vec![2, 1]], 2)).unwrap(),
            Morphism::from_matrix(&z4, &z24, &Matrix::from_rows(&[vec![1], vec![3]], 1)).unwrap(),
            Morphism::identity(&z24),
        ]
    }

    #[test]
    fn builtins_are_natural() {
        for e in [P::Zero, P::Identity, P::Torsion, P::PTorsion(2), P::coproduct(P::PTorsion(2), P::Torsion)] {
            let r = check_naturality(&e, &battery());
            assert!(r.passed(), "{e}");
            assert_eq!(r.checked, 5);
        }
    }

    #[test]
    fn fixed_submodule_is_not_natural() {
        let z4 = m(&[4]);
        let special = Submodule::generated_by(&z4, &[vec![2]]).unwrap();
        let assign = |k: &ModuleObject| {
            if *k == z4 {
                Ok(special.clone())
            } else {
                Submodule::zero(k)
            }
        };
        let r = check_assignment(assign, &battery());
        assert!(!r.passed());
        assert!(r.violations.iter().all(|v| v.witness.is_some()));
    }

    #[test]
    fn order_verdicts() {
        let mods = vec![m(&[4]), m(&[2, 6]), m(&[0, 3]), m(&[])];
        assert_eq!(compare_preradicals(&P::PTorsion(2), &P::Torsion, &mods).unwrap().order, Order::Le);
        assert_eq!(compare_preradicals(&P::Zero, &P::Identity, &mods).unwrap().order, Order::Le);
        assert_eq!(compare_preradicals(&P::Torsion, &P::Torsion, &mods).unwrap().order, Order::Eq);
        let v = compare_preradicals(&P::PTorsion(2), &P::PTorsion(3), &mods).unwrap();
        assert_eq!(v.order, Order::Incomparable);
        assert!(v.not_le.is_some() && v.not_ge.is_some());
        let s = P::PTorsion(2);
        let t = P::Torsion;
        let prod = P::product(s.clone(), t.clone());
        let coprod = P::coproduct(s, t);
        assert!(matches!(compare_preradicals(&prod, &coprod, &mods).unwrap().order, Order::Le | Order::Eq));
    }
}

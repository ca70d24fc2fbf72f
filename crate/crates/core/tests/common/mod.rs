//! Brute-force oracles over explicit element lists. Nothing here uses Hermite
//! forms or hom-group generators.

#![allow(dead_code)]

use std::collections::BTreeSet;

use entroflow_core::{Matrix, ModuleObject, Morphism, Submodule};

pub type Elem = Vec<i64>;
pub type ElemSet = BTreeSet<Elem>;

pub fn elements(factors: &[i64]) -> Vec<Elem> {
    let mut out = vec![Vec::new()];
    for &d in factors {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn add(x: &[i64], y: &[i64], factors: &[i64]) -> Elem {
    x.iter().zip(y).zip(factors).map(|((a, b), d)| (a + b).rem_euclid(*d)).collect()
}

pub fn reduce(x: &[i64], factors: &[i64]) -> Elem {
    x.iter().zip(factors).map(|(a, d)| a.rem_euclid(*d)).collect()
}

/// Subgroup generated by `gens`, by closure under addition.
pub fn span(gens: &[Elem], factors: &[i64]) -> ElemSet {
    let zero = vec![0; factors.len()];
    let mut set = ElemSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add(&x, &reduce(g, factors), factors);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Elements of a finite parent that the submodule claims to contain.
pub fn members(n: &Submodule) -> ElemSet {
    let f = n.parent().factors().unwrap().to_vec();
    elements(&f).into_iter().filter(|x| n.contains_coords(x).unwrap()).collect()
}

/// Every map on generators respecting the relations, as column lists.
pub fn all_homs(dom: &[i64], cod: &[i64]) -> Vec<Vec<Elem>> {
    let targets = elements(cod);
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for &d in dom {
        let ok: Vec<&Elem> = targets
            .iter()
            .filter(|y| y.iter().zip(cod).all(|(v, c)| (v * d).rem_euclid(*c) == 0))
            .collect();
        out = out
            .into_iter()
            .flat_map(|cols| {
                ok.iter().map(move |y| {
                    let mut c = cols.clone();
                    c.push((*y).clone());
                    c
                })
            })
            .collect();
    }
    out
}

pub fn apply(cols: &[Elem], x: &[i64], cod: &[i64]) -> Elem {
    let mut acc = vec![0; cod.len()];
    for (c, &k) in cols.iter().zip(x) {
        for (a, v) in acc.iter_mut().zip(c) {
            *a += k * v;
        }
    }
    reduce(&acc, cod)
}

pub fn as_morphism(dom: &ModuleObject, cod: &ModuleObject, cols: &[Elem]) -> Morphism {
    let m = if cols.is_empty() {
        Matrix::zeros(cod.generator_count(), 0)
    } else {
        Matrix::from_columns(cols, cod.generator_count())
    };
    Morphism::from_matrix(dom, cod, &m).unwrap()
}

pub fn columns(f: &Morphism) -> Vec<Elem> {
    let a = f.matrix().unwrap();
    (0..a.cols()).map(|j| a.column(j)).collect()
}

/// The subgroup of homs generated by `gens`, as column lists.
pub fn hom_span(gens: &[Morphism], dom: &[i64], cod: &[i64]) -> BTreeSet<Vec<Elem>> {
    let zero: Vec<Elem> = dom.iter().map(|_| vec![0; cod.len()]).collect();
    let mut set = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(h) = frontier.pop() {
        for g in gens {
            let gc = columns(g);
            let s: Vec<Elem> = h.iter().zip(&gc).map(|(a, b)| add(a, b, cod)).collect();
            if set.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    set
}

/// All subgroups, as element sets, by closing cyclic subgroups under sums.
pub fn all_subgroups(factors: &[i64]) -> BTreeSet<ElemSet> {
    let cyclic: BTreeSet<ElemSet> = elements(factors).iter().map(|x| span(std::slice::from_ref(x), factors)).collect();
    let mut found: BTreeSet<ElemSet> = cyclic.clone();
    let mut frontier: Vec<ElemSet> = cyclic.iter().cloned().collect();
    while let Some(a) = frontier.pop() {
        for c in &cyclic {
            let gens: Vec<Elem> = a.iter().chain(c.iter()).cloned().collect();
            let s = span(&gens, factors);
            if found.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    found
}

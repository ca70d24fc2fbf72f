//! Trajectories `T_n(L, η) = L + η(L) + ⋯ + η^{n-1}(L)` and `H_i(L, η)`.

use crate::entropy::fekete::{fekete_limit, has_affine_tail};
use crate::entropy::invariant::{invariant, InvariantTag};
use crate::entropy::norm::NormValue;
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::options::Options;
use crate::submodule::{image_of, Submodule, Support};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrajectoryVerdict {
    /// `T_{n+1} = T_n`; every later term is equal.
    Stabilized(usize),
    /// Differences of the norms are constant from `from` on.
    AffineSlope { slope: NormValue, from: usize },
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct TrajectoryProfile {
    pub base: Submodule,
    pub endo: Morphism,
    /// `(n, T_n, i(T_n))` for `n = 1, 2, …`.
    pub values: Vec<(usize, Submodule, NormValue)>,
    pub verdict: TrajectoryVerdict,
    /// Largest support window reached (0 for finite presentations).
    pub max_window: usize,
}

impl TrajectoryProfile {
    pub fn norms(&self) -> Vec<NormValue> {
        self.values.iter().map(|(_, _, v)| v.clone()).collect()
    }
}

fn check_endo(l: &Submodule, eta: &Morphism) -> Result<()> {
    if eta.dom() != l.parent() || !eta.is_endomorphism() {
        return Err(Error::MismatchedParent);
    }
    Ok(())
}

fn window_of(n: &Submodule, opts: &Options) -> Result<usize> {
    match n.support() {
        Support::Window(w) if w > opts.max_window => Err(Error::SupportOverflow { window: w, cap: opts.max_window }),
        Support::Window(w) => Ok(w),
        _ => Ok(0),
    }
}

/// Successive pairs `(η^{n-1}(L), T_n)`.
struct Powers<'a> {
    eta: &'a Morphism,
    power: Submodule,
    total: Submodule,
}

impl Powers<'_> {
    fn advance(&mut self) -> Result<()> {
        self.power = image_of(self.eta, &self.power)?;
        self.total = self.total.sum(&self.power)?;
        Ok(())
    }
}

/// `T_n(L, η)`; `T_0 = 0`.
pub fn trajectory(l: &Submodule, eta: &Morphism, n: usize, opts: &Options) -> Result<Submodule> {
    check_endo(l, eta)?;
    if n == 0 {
        return Submodule::zero(l.parent());
    }
    let mut p = Powers { eta, power: l.clone(), total: l.clone() };
    for _ in 1..n {
        p.advance()?;
        window_of(&p.total, opts)?;
    }
    Ok(p.total)
}

/// Runs the trajectory until it stabilizes or its norms show an affine tail.
pub fn trajectory_profile(tag: InvariantTag, l: &Submodule, eta: &Morphism, opts: &Options) -> Result<TrajectoryProfile> {
    check_endo(l, eta)?;
    let mut p = Powers { eta, power: l.clone(), total: l.clone() };
    let mut values = vec![(1, l.clone(), invariant(tag, l)?)];
    let mut max_window = window_of(l, opts)?;
    let budget = opts.max_order as usize;
    let verdict = loop {
        let n = values.len();
        let prev = p.total.clone();
        p.advance()?;
        if p.total == prev {
            break TrajectoryVerdict::Stabilized(n);
        }
        max_window = max_window.max(window_of(&p.total, opts)?);
        values.push((n + 1, p.total.clone(), invariant(tag, &p.total)?));
        // Finite presentations are Noetherian: run them to stabilization.
        let norms: Vec<NormValue> = values.iter().map(|(_, _, v)| v.clone()).collect();
        if l.parent().is_shift() && has_affine_tail(&norms, opts.fekete_window) {
            let slope = fekete_limit(&norms, opts.fekete_window, opts.precision_bits)?;
            break TrajectoryVerdict::AffineSlope { slope, from: norms.len() - opts.fekete_window };
        }
        if values.len() >= budget {
            break TrajectoryVerdict::Undetermined;
        }
    };
    Ok(TrajectoryProfile { base: l.clone(), endo: eta.clone(), values, verdict, max_window })
}

/// `H_i(L, η) = lim i(T_n) / n`.
pub fn entropy_at(tag: InvariantTag, l: &Submodule, eta: &Morphism, opts: &Options) -> Result<NormValue> {
    if !invariant(tag, l)?.is_finite() {
        return Err(Error::InfiniteNorm);
    }
    Ok(match trajectory_profile(tag, l, eta, opts)?.verdict {
        TrajectoryVerdict::Stabilized(_) => NormValue::zero(),
        TrajectoryVerdict::AffineSlope { slope, .. } => slope,
        TrajectoryVerdict::Undetermined => return Err(Error::NoStabilization(opts.max_order as usize)),
    })
}

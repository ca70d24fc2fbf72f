//! Limits `lim a_n / n` of subadditive sequences with an affine tail.

use std::cmp::Ordering;

use crate::entropy::norm::{LogCombination, NormValue};
use crate::error::{Error, Result};

/// Numeric slack for the `slope ≤ a_k / k` cross-check.
pub const FEKETE_TOLERANCE: f64 = 1e-9;

fn differences(values: &[NormValue]) -> Option<Vec<LogCombination>> {
    values.windows(2).map(|w| w[1].difference(&w[0])).collect()
}

/// Whether the last `window` consecutive differences are formally equal.
pub fn has_affine_tail(values: &[NormValue], window: usize) -> bool {
    if window == 0 || values.len() < window + 2 {
        return false;
    }
    match differences(values) {
        Some(d) => d[d.len() - window..].windows(2).all(|w| w[0] == w[1]),
        None => false,
    }
}

/// `a_{n+m} ≤ a_n + a_m` on every in-range pair (1-based indices).
pub fn check_subadditive(values: &[NormValue], precision_bits: u32) -> Result<()> {
    let len = values.len();
    for n in 1..=len {
        for m in n..=len - n {
            let bound = values[n - 1].add(&values[m - 1]);
            if values[n + m - 1].cmp_with_precision(&bound, precision_bits) == Ordering::Greater {
                return Err(Error::NotSubadditive { n, m });
            }
        }
    }
    Ok(())
}

/// The limit of `a_n / n`, read off as the common difference of an affine
/// tail, cross-checked against `inf a_k / k`.
pub fn fekete_limit(values: &[NormValue], window: usize, precision_bits: u32) -> Result<NormValue> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InfiniteNorm);
    }
    if values.len() < window + 2 {
        return Err(Error::NoStabilization(values.len()));
    }
    check_subadditive(values, precision_bits)?;
    if !has_affine_tail(values, window) {
        return Err(Error::NoStabilization(values.len()));
    }
    let d = differences(values).expect("finite values");
    let slope = d.last().expect("nonempty").clone();
    if slope.signum(precision_bits) == Ordering::Less {
        return Err(Error::NoStabilization(values.len()));
    }
    let slope = NormValue::Finite(slope);
    for (k, a) in values.iter().enumerate() {
        let k = k + 1;
        let scaled = slope.scale(num_rational::Rational64::from_integer(k as i64));
        if scaled.cmp_with_precision(a, precision_bits) == Ordering::Greater
            && slope.to_f64() > a.to_f64() / k as f64 + FEKETE_TOLERANCE
        {
            return Err(Error::NoStabilization(values.len()));
        }
    }
    Ok(slope)
}

/// `a_k / k - slope` for every `k`, numerically.
pub fn fekete_gaps(values: &[NormValue], slope: &NormValue) -> Vec<f64> {
    let s = slope.to_f64();
    values.iter().enumerate().map(|(k, a)| a.to_f64() / (k + 1) as f64 - s).collect()
}

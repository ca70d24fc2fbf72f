//! Exact values of invariants: nonnegative rational combinations of `1` and
//! `log q` for primes `q`, or `+∞`.
//!
//! Comparisons are exact. Pure-log combinations compare through integer
//! powers (`Σ c_q log q ≥ 0` iff `Π q^{c_q·L} ≥ 1`); mixed unit/log values are
//! never equal unless formally equal, so a fixed-point evaluation is refined
//! until the sign separates from the error bound.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{factorize, is_prime};

/// Default fixed-point precision for mixed comparisons.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Unit,
    /// `log q` for a prime `q`.
    Log(u64),
}

/// A signed rational combination of symbols with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LogCombination {
    terms: BTreeMap<Symbol, Rational64>,
}

impl LogCombination {
    pub fn zero() -> Self {
        LogCombination::default()
    }

    pub fn term(symbol: Symbol, coeff: Rational64) -> Self {
        let mut c = LogCombination::zero();
        c.add_term(symbol, coeff);
        c
    }

    /// `log n` expanded over the primes dividing `n`.
    pub fn log_of(n: u128) -> Self {
        let mut c = LogCombination::zero();
        for (p, e) in factorize(n) {
            c.add_term(Symbol::Log(p), Rational64::from_integer(e as i64));
        }
        c
    }

    fn add_term(&mut self, symbol: Symbol, coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(symbol).or_insert_with(Rational64::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&symbol);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &Rational64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: Symbol) -> Rational64 {
        self.terms.get(&s).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LogCombination) -> LogCombination {
        let mut out = self.clone();
        for (&s, &c) in &other.terms {
            out.add_term(s, c);
        }
        out
    }

    pub fn sub(&self, other: &LogCombination) -> LogCombination {
        self.add(&other.scale(Rational64::from_integer(-1)))
    }

    pub fn scale(&self, k: Rational64) -> LogCombination {
        let mut out = LogCombination::zero();
        for (&s, &c) in &self.terms {
            out.add_term(s, c * k);
        }
        out
    }

    /// Natural-log evaluation; presentation only.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                match s {
                    Symbol::Unit => c,
                    Symbol::Log(q) => c * (*q as f64).ln(),
                }
            })
            .sum()
    }

    /// Exact sign of the combination.
    pub fn signum(&self, precision_bits: u32) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        let unit = self.coefficient(Symbol::Unit);
        let has_logs = self.terms.keys().any(|s| matches!(s, Symbol::Log(_)));
        if !has_logs {
            return unit.cmp(&Rational64::zero());
        }
        if unit.is_zero() {
            return self.log_sign();
        }
        self.numeric_sign(precision_bits)
    }

    fn log_sign(&self) -> Ordering {
        let denom_lcm = self
            .terms
            .values()
            .fold(1i64, |acc, c| acc.lcm(c.denom()));
        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (s, c) in &self.terms {
            let Symbol::Log(q) = s else { continue };
            let e = (c * Rational64::from_integer(denom_lcm)).to_integer();
            let pow = BigUint::from(*q).pow(e.unsigned_abs() as u32);
            if e > 0 {
                pos *= pow;
            } else {
                neg *= pow;
            }
        }
        pos.cmp(&neg)
    }

    fn numeric_sign(&self, precision_bits: u32) -> Ordering {
        let mut bits = precision_bits.max(64);
        loop {
            let (value, err) = self.fixed_point(bits);
            if value.abs() > err {
                return if value.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
            // Mixed nonzero combinations are transcendental, hence nonzero.
            bits = bits.saturating_mul(2);
            assert!(bits <= 1 << 20, "sign refinement did not terminate");
        }
    }

    /// Value scaled by `2^bits` together with an absolute error bound in
    /// the same units.
    fn fixed_point(&self, bits: u32) -> (BigInt, BigInt) {
        let denom_lcm = self.terms.values().fold(1i64, |acc, c| acc.lcm(c.denom()));
        let mut total = BigInt::zero();
        let mut err = BigInt::zero();
        for (s, c) in &self.terms {
            let num = (c * Rational64::from_integer(denom_lcm)).to_integer();
            match s {
                Symbol::Unit => total += BigInt::from(num) << bits,
                Symbol::Log(q) => {
                    let (v, e) = ln_fixed(*q, bits);
                    total += v * num;
                    err += e * num.unsigned_abs();
                }
            }
        }
        // Dividing by the common denominator only shrinks both quantities.
        (total / denom_lcm, err / denom_lcm + 1)
    }
}

/// `atanh(a/b) · 2^bits` with its error bound, for `0 ≤ a < b`.
fn atanh_fixed(a: u64, b: u64, bits: u32) -> (BigInt, BigInt) {
    let a = BigInt::from(a);
    let b = BigInt::from(b);
    let a2 = &a * &a;
    let b2 = &b * &b;
    let mut power = (BigInt::one() << bits) * &a / &b;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = power * &a2 / &b2;
        j += 1;
    }
    // Each truncation contributes at most one unit per accumulated step.
    let err = BigInt::from((j + 1) * (j + 2) / 2 + 2);
    (sum, err)
}

/// `ln q · 2^bits` with its error bound.
fn ln_fixed(q: u64, bits: u32) -> (BigInt, BigInt) {
    let k = 63 - q.leading_zeros();
    let two_k = 1u64 << k;
    let (ln2, e2) = atanh_fixed(1, 3, bits);
    let (rest, er) = if q == two_k { (BigInt::zero(), BigInt::zero()) } else { atanh_fixed(q - two_k, q + two_k, bits) };
    let value = (ln2 * 2u32) * k + rest * 2u32;
    let err = e2 * 2u32 * k + er * 2u32;
    (value, err)
}

fn fmt_rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for LogCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match s {
                Symbol::Unit => write!(f, "{}", fmt_rational(&mag))?,
                Symbol::Log(q) if mag.is_one() => write!(f, "log{q}")?,
                Symbol::Log(q) => write!(f, "{}*log{q}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}

/// Value of an invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormValue {
    Finite(LogCombination),
    Infinite,
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue::Finite(LogCombination::zero())
    }

    /// `log n`.
    pub fn log_of(n: u128) -> Self {
        NormValue::Finite(LogCombination::log_of(n))
    }

    pub fn log_prime(p: u64) -> Self {
        NormValue::Finite(LogCombination::term(Symbol::Log(p), Rational64::one()))
    }

    pub fn units(k: i64) -> Self {
        assert!(k >= 0, "norm values are nonnegative");
        NormValue::Finite(LogCombination::term(Symbol::Unit, Rational64::from_integer(k)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NormValue::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Finite(c) if c.is_zero())
    }

    pub fn combination(&self) -> Option<&LogCombination> {
        match self {
            NormValue::Finite(c) => Some(c),
            NormValue::Infinite => None,
        }
    }

    pub fn add(&self, other: &NormValue) -> NormValue {
        match (self, other) {
            (NormValue::Finite(a), NormValue::Finite(b)) => NormValue::Finite(a.add(b)),
            _ => NormValue::Infinite,
        }
    }

    /// Scale by a nonnegative rational.
    pub fn scale(&self, k: Rational64) -> NormValue {
        assert!(!k.is_negative(), "norm values are nonnegative");
        match self {
            NormValue::Finite(c) => NormValue::Finite(c.scale(k)),
            NormValue::Infinite if k.is_zero() => NormValue::zero(),
            NormValue::Infinite => NormValue::Infinite,
        }
    }

    /// Signed difference `self - other` of two finite values.
    pub fn difference(&self, other: &NormValue) -> Option<LogCombination> {
        match (self, other) {
            (NormValue::Finite(a), NormValue::Finite(b)) => Some(a.sub(b)),
            _ => None,
        }
    }

    pub fn cmp_with_precision(&self, other: &NormValue, precision_bits: u32) -> Ordering {
        match (self, other) {
            (NormValue::Infinite, NormValue::Infinite) => Ordering::Equal,
            (NormValue::Infinite, _) => Ordering::Greater,
            (_, NormValue::Infinite) => Ordering::Less,
            (NormValue::Finite(a), NormValue::Finite(b)) => {
                if a == b {
                    Ordering::Equal
                } else {
                    a.sub(b).signum(precision_bits)
                }
            }
        }
    }

    pub fn max(self, other: NormValue) -> NormValue {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Finite(c) => c.to_f64(),
            NormValue::Infinite => f64::INFINITY,
        }
    }

    /// Numeric rendering with 16 significant digits (natural logarithm).
    pub fn numeric(&self) -> String {
        render_sig16(self.to_f64())
    }
}

pub fn render_sig16(v: f64) -> String {
    if v.is_infinite() {
        return "inf".to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (15 - mag).clamp(0, 40) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_with_precision(other, DEFAULT_PRECISION_BITS)
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Finite(c) => write!(f, "{c}"),
            NormValue::Infinite => write!(f, "inf"),
        }
    }
}

fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
        None => s.parse::<i64>().ok().map(Rational64::from_integer),
    }
}

impl FromStr for NormValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadNorm(s.to_string());
        let t = s.trim();
        if t == "inf" {
            return Ok(NormValue::Infinite);
        }
        let mut c = LogCombination::zero();
        for part in t.split('+') {
            let part = part.trim();
            if part.is_empty() {
                return Err(bad());
            }
            if let Some(idx) = part.find("log") {
                let coeff = match part[..idx].trim().strip_suffix('*') {
                    Some(k) => parse_rational(k).ok_or_else(bad)?,
                    None if part[..idx].trim().is_empty() => Rational64::one(),
                    None => return Err(bad()),
                };
                let q: u64 = part[idx + 3..].trim().parse().map_err(|_| bad())?;
                if !is_prime(q as i64) {
                    return Err(bad());
                }
                if coeff.is_negative() {
                    return Err(bad());
                }
                c.add_term(Symbol::Log(q), coeff);
            } else {
                let r = parse_rational(part).ok_or_else(bad)?;
                if r.is_negative() {
                    return Err(bad());
                }
                c.add_term(Symbol::Unit, r);
            }
        }
        Ok(NormValue::Finite(c))
    }
}

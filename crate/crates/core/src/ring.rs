use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base ring of a module category: the integers or a quotient `Z/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingSpec {
    Integers,
    IntegersMod(i64),
}

impl RingSpec {
    pub fn modulo(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModule(format!("Z/{n} needs n >= 2")));
        }
        Ok(RingSpec::IntegersMod(n))
    }

    /// Characteristic: 0 for `Z`, `n` for `Z/n`.
    pub fn characteristic(&self) -> i64 {
        match *self {
            RingSpec::Integers => 0,
            RingSpec::IntegersMod(n) => n,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Z" {
            return Ok(RingSpec::Integers);
        }
        if let Some(n) = t.strip_prefix("Z/") {
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| Error::InvalidModule(format!("bad ring `{s}`")))?;
            return RingSpec::modulo(n);
        }
        Err(Error::InvalidModule(format!("bad ring `{s}`")))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::IntegersMod(n) => write!(f, "Z/{n}"),
        }
    }
}

pub(crate) fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub(crate) fn factorize(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d as u64, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

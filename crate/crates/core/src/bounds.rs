//! Upper bounds for cd_p of a C_n field and the dimension counts behind them.
//!
//! A degree-p form in more than `p^n` variables has a zero over a C_n
//! field. A symbol of length `m` is split by a form of dimension
//! `p² · 2^(m-2)` (symbol algebra norm doubled once per extra slot) or, for
//! `p = 3`, `27 · 2^(m-3)` (Albert norm doubled). All comparisons are exact
//! integer comparisons.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Symbol,
    Albert,
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbol" => Ok(Route::Symbol),
            "albert" => Ok(Route::Albert),
            _ => Err(Error::Parse(format!("unknown route {s:?}; expected symbol or albert"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingLedger {
    pub p: u64,
    pub n: u32,
    pub route: Route,
    /// Length of the symbol being split.
    pub m: u32,
    pub base_dim: u64,
    pub doublings: u32,
    #[serde(serialize_with = "as_string")]
    pub total_dim: BigUint,
    #[serde(serialize_with = "as_string")]
    pub threshold: BigUint,
    pub sufficient: bool,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl SplittingLedger {
    pub fn summary(&self) -> String {
        let rel = if self.sufficient { ">" } else { "<=" };
        format!("{}·2^{} = {} {rel} {}^{} = {}", self.base_dim, self.doublings, self.total_dim, self.p, self.n, self.threshold)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

pub fn ledger(p: u64, n: u32, route: Route, m: u32) -> Result<SplittingLedger> {
    check_prime(p)?;
    let (base_dim, k) = match route {
        Route::Albert if p != 3 => return Err(Error::Invalid("the Albert route needs p = 3".into())),
        Route::Albert if m < 3 => return Err(Error::Invalid("the Albert route needs m ≥ 3".into())),
        Route::Albert => (27, 3),
        Route::Symbol if m < 2 => return Err(Error::Invalid("the symbol route needs m ≥ 2".into())),
        Route::Symbol => (p * p, 2),
    };
    let doublings = m - k;
    let total_dim = BigUint::from(base_dim) << doublings;
    let threshold = BigUint::from(p).pow(n);
    let sufficient = total_dim > threshold;
    Ok(SplittingLedger { p, n, route, m, base_dim, doublings, total_dim, threshold, sufficient })
}

/// Least `m ≥ start` with `ledger(p, n, route, m)` sufficient.
fn least_sufficient(p: u64, n: u32, route: Route, start: u32) -> Result<u32> {
    let mut m = start;
    loop {
        if ledger(p, n, route, m)?.sufficient {
            return Ok(m);
        }
        m += 1;
    }
}

/// `n` for `p = 2`; `n` for `p = 3, n ≤ 4` and `⌈(n-3) log₂3 + 3⌉`
/// beyond; `n` for `p ≥ 5, n ≤ 2` and `⌈(n-2) log₂p + 1⌉` beyond. The
/// ceilings are evaluated as least solutions of `2^(m-3) > 3^(n-3)` and
/// `2^(m-1) > p^(n-2)`.
pub fn cd_bound(p: u64, n: u32) -> Result<u32> {
    check_prime(p)?;
    Ok(match p {
        2 => n,
        3 if n <= 4 => n,
        3 => least_sufficient(3, n, Route::Albert, 3)?,
        _ if n <= 2 => n,
        _ => least_sufficient(p, n, Route::Symbol, 2)? - 1,
    })
}

/// The closed formula, for display only.
pub fn formula_text(p: u64, n: u32) -> String {
    match p {
        2 => "n".into(),
        3 if n <= 4 => "n (n ≤ 4)".into(),
        3 => "⌈(n-3)·log2(3) + 3⌉".into(),
        _ if n <= 2 => "n (n ≤ 2)".into(),
        _ => format!("⌈(n-2)·log2({p}) + 1⌉"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: u32,
    pub bound: u32,
    pub formula: String,
    /// A sufficient ledger certifying that symbols of length `bound + 1`
    /// (or `bound` on the conservative p = 3 formula) split.
    pub ledger: Option<SplittingLedger>,
}

/// Ledger witnessing a row of the table.
pub fn certifying_ledger(p: u64, n: u32) -> Result<Option<SplittingLedger>> {
    let bound = cd_bound(p, n)?;
    let l = match p {
        3 if n > 4 => ledger(3, n, Route::Albert, bound)?,
        3 if n + 1 >= 3 => ledger(3, n, Route::Albert, n + 1)?,
        _ if bound + 1 >= 2 => ledger(p, n, Route::Symbol, bound + 1)?,
        _ => return Ok(None),
    };
    Ok(Some(l))
}

pub fn table(p: u64, n_max: u32) -> Result<Vec<BoundRow>> {
    (0..=n_max)
        .map(|n| {
            Ok(BoundRow { n, bound: cd_bound(p, n)?, formula: formula_text(p, n), ledger: certifying_ledger(p, n)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(cd_bound(5, 3).unwrap(), 4);
        assert_eq!(cd_bound(7, 3).unwrap(), 4);
        assert_eq!(cd_bound(3, 4).unwrap(), 4);
        assert_eq!(cd_bound(3, 5).unwrap(), 7);
        for n in 0..20 {
            assert_eq!(cd_bound(2, n).unwrap(), n);
        }
        assert!(cd_bound(9, 3).is_err());
    }

    #[test]
    fn ledgers() {
        let l = ledger(3, 3, Route::Albert, 4).unwrap();
        assert_eq!((l.total_dim.to_string(), l.threshold.to_string(), l.sufficient), ("54".into(), "27".into(), true));
        let l = ledger(3, 4, Route::Albert, 5).unwrap();
        assert_eq!(l.summary(), "27·2^2 = 108 > 3^4 = 81");
        for p in [3u64, 5, 7, 11] {
            let l = ledger(p, 2, Route::Symbol, 3).unwrap();
            assert_eq!(l.total_dim, BigUint::from(2 * p * p));
            assert!(l.sufficient);
        }
        assert!(ledger(5, 3, Route::Albert, 4).is_err());
        assert!(ledger(3, 3, Route::Albert, 2).is_err());
        assert!(ledger(3, 3, Route::Symbol, 1).is_err());
    }

    #[test]
    fn special_case_beats_formula_at_four() {
        let formula_at_4 = least_sufficient(3, 4, Route::Albert, 3).unwrap();
        assert_eq!(formula_at_4, 5);
        assert!(cd_bound(3, 4).unwrap() < formula_at_4);
    }

    #[test]
    fn rows_are_certified() {
        for p in [2u64, 3, 5, 7] {
            for row in table(p, 12).unwrap() {
                if let Some(l) = row.ledger {
                    assert!(l.sufficient, "p = {p}, n = {}", row.n);
                }
            }
        }
    }
}

use super::{Field, FiniteField, LaurentField, TowerField, DEFAULT_PRECISION};
use crate::error::{Error, Result};

/// A field chosen at run time from its text descriptor.
///
/// Finite fields keep their dedicated representation so exhaustive searches
/// stay on the fast path.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Finite(FiniteField),
    Laurent(LaurentField),
}

impl AnyField {
    /// Parses `gf(7)`, `gf(5^2)` or `gf(7)((t))((s))`.
    pub fn parse(descriptor: &str, precision: Option<i64>) -> Result<Self> {
        let s: String = descriptor.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = s.to_ascii_lowercase();
        let rest = lower
            .strip_prefix("gf(")
            .ok_or_else(|| Error::Parse(format!("field descriptor must start with gf(: {descriptor:?}")))?;
        let close = rest.find(')').ok_or_else(|| Error::Parse("unclosed gf(".into()))?;
        let order = &rest[..close];
        let (l, k) = match order.split_once('^') {
            Some((l, k)) => (l, k),
            None => (order, "1"),
        };
        let l: u64 = l.parse().map_err(|_| Error::Parse(format!("bad characteristic {l:?}")))?;
        let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad degree {k:?}")))?;
        let base = FiniteField::new(l, k)?;

        // variable names keep their original case
        let mut tail = &s[3 + close + 1..];
        let mut vars = Vec::new();
        while !tail.is_empty() {
            let inner = tail
                .strip_prefix("((")
                .and_then(|t| t.split_once("))"))
                .ok_or_else(|| Error::Parse(format!("bad Laurent suffix {tail:?}")))?;
            vars.push(inner.0.to_string());
            tail = inner.1;
        }
        if vars.is_empty() {
            if precision.is_some_and(|p| p <= 0) {
                return Err(Error::Invalid("precision must be positive".into()));
            }
            return Ok(AnyField::Finite(base));
        }
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        Ok(AnyField::Laurent(LaurentField::new(base, &names, precision.unwrap_or(DEFAULT_PRECISION))?))
    }

    pub fn descriptor(&self) -> String {
        match self {
            AnyField::Finite(f) => f.descriptor(),
            AnyField::Laurent(f) => f.descriptor(),
        }
    }

    pub fn base(&self) -> &FiniteField {
        match self {
            AnyField::Finite(f) => f,
            AnyField::Laurent(f) => f.base(),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            AnyField::Finite(_) => 0,
            AnyField::Laurent(f) => f.level(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        assert!(matches!(AnyField::parse("gf(7)", None).unwrap(), AnyField::Finite(_)));
        assert_eq!(AnyField::parse("GF(5^2)", None).unwrap().descriptor(), "gf(5^2)");
        let f = AnyField::parse("gf(7)((t))((s))", Some(8)).unwrap();
        assert_eq!(f.descriptor(), "gf(7)((t))((s))");
        assert_eq!(f.level(), 2);
        assert!(AnyField::parse("gf(6)", None).is_err());
        assert!(AnyField::parse("gf(7)((t)", None).is_err());
        assert!(AnyField::parse("gf(7)((t))((t))", None).is_err());
        assert!(AnyField::parse("q(7)", None).is_err());
    }
}

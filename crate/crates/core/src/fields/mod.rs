//! Exact field arithmetic.
//!
//! Two concrete fields are provided: [`FiniteField`] (F_q, table driven) and
//! [`LaurentField`] (iterated truncated Laurent series over F_q). Both implement
//! [`Field`] for ring arithmetic and [`TowerField`] for the valuation data the
//! symbol and isotropy routines need.

mod any;
mod finite;
mod laurent;
pub(crate) mod parse;

pub use any::AnyField;
pub use finite::{FiniteField, FqElem, MAX_FIELD_ORDER};
pub use laurent::{LaurentElem, LaurentField, Series, DEFAULT_PRECISION};
pub use parse::parse_elements;

use std::fmt::Debug;
use std::hash::Hash;

use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};

/// Ring operations of an exact field.
///
/// Elements carry no back-pointer to their field; every operation goes
/// through the field value.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer under the prime-field embedding.
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// True only when `a` is certainly zero.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// True only when `a` is certainly nonzero. For truncated series an
    /// element can be neither certainly zero nor certainly nonzero.
    fn is_nonzero(&self, a: &Self::Elem) -> bool {
        !self.is_zero(a)
    }

    fn characteristic(&self) -> u64;

    /// Number of elements, `None` for infinite fields.
    fn cardinality(&self) -> Option<u64>;

    /// The `index`-th element in the canonical enumeration order (finite
    /// fields only). Index 0 is zero and index 1 is one.
    fn element_at(&self, index: u64) -> Option<Self::Elem>;

    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Text descriptor, e.g. `gf(7)` or `gf(7)((t))`.
    fn descriptor(&self) -> String;

    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Resolves a named generator (`t`, `s`, ...) appearing in element text.
    fn ident(&self, _name: &str) -> Option<Self::Elem> {
        None
    }

    /// Element from a coefficient vector `[c0,c1,...]` over the prime field.
    fn from_coeff_vector(&self, _coeffs: &[i64]) -> Option<Self::Elem> {
        None
    }

    /// Applies an `O(var^n)` precision cap.
    fn cap_precision(&self, _a: Self::Elem, var: &str, _n: i64) -> Result<Self::Elem> {
        Err(Error::Parse(format!("O({var}^..) is not meaningful in {}", self.descriptor())))
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem> {
        parse::parse_element(self, text)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_signed(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    fn equals(&self, a: &Self::Elem, b: &Self::Elem) -> Certainty {
        let d = self.sub(a, b);
        if self.is_zero(&d) {
            Certainty::Equal
        } else if self.is_nonzero(&d) {
            Certainty::Unequal
        } else {
            Certainty::Unknown
        }
    }
}

/// Three-valued comparison for elements known only to finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Equal,
    Unequal,
    Unknown,
}

/// A field in the tower F_q ⊂ F_q((t_1)) ⊂ … ⊂ F_q((t_1))…((t_m)).
///
/// Level 0 is the finite base field; each level above adds one Laurent
/// variable. The residue field of level `j` is level `j - 1`.
pub trait TowerField: Field {
    fn base(&self) -> &FiniteField;

    /// Number of Laurent variables above the base field.
    fn level(&self) -> usize;

    fn residue_field(&self) -> Option<Self>;

    /// Valuation and leading coefficient (an element of the residue field).
    fn leading(&self, a: &Self::Elem) -> Result<(i64, Self::Elem)>;

    /// Embeds an element of the residue field as a constant.
    fn embed_residue(&self, c: &Self::Elem) -> Self::Elem;

    /// The outermost Laurent variable.
    fn uniformizer(&self) -> Option<Self::Elem>;

    /// Embeds an element of the base finite field.
    fn from_base(&self, c: FqElem) -> Self::Elem;

    /// Inverse of [`TowerField::from_base`] on level-0 elements.
    fn to_base(&self, a: &Self::Elem) -> Option<FqElem>;
}

/// A primitive `p`-th root of unity of a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootOfUnity<E> {
    pub p: u64,
    pub value: E,
}

/// Deterministic primitive `p`-th root of unity: the smallest base-field
/// element of multiplicative order exactly `p`.
pub fn primitive_p_root<F: TowerField>(field: &F, p: u64) -> Result<RootOfUnity<F::Elem>> {
    check_p(field, p)?;
    let rho = field.base().primitive_root(p)?;
    Ok(RootOfUnity { p, value: field.from_base(rho) })
}

/// Class of a nonzero element in F^*/F^{*p}.
///
/// The vector lists the valuations mod `p`, outermost variable first, and
/// ends with the discrete-log class of the residual base-field unit. The
/// factor `1 + m` left over after removing the leading term is a `p`-th
/// power by Hensel lifting, so it never contributes.
pub fn p_class<F: TowerField>(field: &F, a: &F::Elem, p: u64) -> Result<Vec<u64>> {
    check_p(field, p)?;
    let mut out = Vec::with_capacity(field.level() + 1);
    let mut cur_field = field.clone();
    let mut cur = a.clone();
    while let Some(res) = cur_field.residue_field() {
        let (v, lc) = cur_field.leading(&cur)?;
        out.push(v.rem_euclid(p as i64) as u64);
        cur = lc;
        cur_field = res;
    }
    let c = cur_field.to_base(&cur).ok_or_else(|| Error::Invalid("not a base element".into()))?;
    out.push(field.base().p_class(c, p)?);
    Ok(out)
}

pub(crate) fn check_p<F: Field>(field: &F, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if field.characteristic() == p {
        return Err(Error::CharacteristicEqualsP(p));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

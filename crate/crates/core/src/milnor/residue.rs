//! `k_n(E((t))) ≅ k_n(E) ⊕ k_{n-1}(E)` for `p` prime to the characteristic.
//!
//! Each slot is `t^v u (1 + m)`; the factor `1 + m` is a `p`-th power, so
//! only `(v mod p, u)` matters. One slot with `v ≢ 0` absorbs the valuations
//! of the others through `(a, b) = (a, b (-a)^k)`, is raised to the power
//! making its valuation 1 (this scales the class by a unit mod p), and then
//! `(…, t u, …) = (…, t, …) + (…, u, …)` splits the symbol.

use serde_json::{json, Value};

use super::Symbol;
use crate::error::{Error, Result};
use crate::fields::TowerField;

/// One side of a residue decomposition, living over the residue field.
#[derive(Debug, Clone)]
pub enum Component<F: TowerField> {
    Zero,
    /// Multiple of the generator of `k_0 = Z/p`.
    Scalar(u64),
    Symbol(Symbol<F>),
}

impl<F: TowerField> Component<F> {
    pub fn is_trivial(&self) -> Result<bool> {
        match self {
            Component::Zero => Ok(true),
            Component::Scalar(k) => Ok(*k == 0),
            Component::Symbol(s) => s.is_trivial(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Component::Zero => Value::Null,
            Component::Scalar(k) => json!(k),
            Component::Symbol(s) => json!(s.format()),
        }
    }
}

/// Decomposition of `scale · α` for a symbol `α` over `E((t))`.
#[derive(Debug, Clone)]
pub struct ResidueDecomposition<F: TowerField> {
    pub scale: u64,
    pub unit_part: Component<F>,
    pub residue_part: Component<F>,
}

impl<F: TowerField> ResidueDecomposition<F> {
    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.unit_part.is_trivial()? && self.residue_part.is_trivial()?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scale": self.scale,
            "unit_part": self.unit_part.to_json(),
            "residue_part": self.residue_part.to_json(),
        })
    }
}

enum RawResidue<E> {
    None,
    Scalar(u64),
    Slots(Vec<E>),
}

struct Raw<E> {
    scale: u64,
    units: Vec<E>,
    residue: RawResidue<E>,
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|x| a * x % p == 1).expect("p is prime and a is a unit")
}

fn decompose_raw<F: TowerField>(field: &F, res: &F, p: u64, slots: &[F::Elem]) -> Result<Raw<F::Elem>> {
    let mut data = Vec::with_capacity(slots.len());
    for a in slots {
        let (v, u) = field.leading(a)?;
        data.push((v.rem_euclid(p as i64) as u64, u));
    }
    let Some(i0) = data.iter().position(|(v, _)| *v != 0) else {
        return Ok(Raw { scale: 1, units: data.into_iter().map(|(_, u)| u).collect(), residue: RawResidue::None });
    };
    let (vi, ui) = data[i0].clone();
    let minus_ui = res.neg(&ui);
    for (j, (v, u)) in data.iter_mut().enumerate() {
        if j == i0 || *v == 0 {
            continue;
        }
        let k = (p - *v) * inverse_mod(vi, p) % p;
        *u = res.mul(u, &res.pow(&minus_ui, k));
        *v = 0;
    }
    let e = inverse_mod(vi, p);
    data[i0].1 = res.pow(&ui, e);
    let units: Vec<F::Elem> = data.iter().map(|(_, u)| u.clone()).collect();
    let n = units.len();
    let residue = if n == 1 {
        RawResidue::Scalar(1)
    } else {
        let mut rest: Vec<F::Elem> = units.iter().enumerate().filter(|(j, _)| *j != i0).map(|(_, u)| u.clone()).collect();
        // moving t to the last slot costs (-1)^(n-1-i0); -(a) = (a⁻¹)
        if (n - 1 - i0) % 2 == 1 && p != 2 {
            rest[0] = res.inv(&rest[0])?;
        }
        RawResidue::Slots(rest)
    };
    Ok(Raw { scale: e, units, residue })
}

pub(super) fn decompose<F: TowerField>(s: &Symbol<F>) -> Result<ResidueDecomposition<F>> {
    let field = s.field();
    let res = field
        .residue_field()
        .ok_or_else(|| Error::Unsupported("residues need a Laurent series field".into()))?;
    let raw = decompose_raw(field, &res, s.p(), s.slots())?;
    let unit_part = Component::Symbol(Symbol::new(&res, s.p(), raw.units)?);
    let residue_part = match raw.residue {
        RawResidue::None => Component::Zero,
        RawResidue::Scalar(k) => Component::Scalar(k),
        RawResidue::Slots(slots) => Component::Symbol(Symbol::new(&res, s.p(), slots)?),
    };
    Ok(ResidueDecomposition { scale: raw.scale, unit_part, residue_part })
}

pub(super) fn is_trivial<F: TowerField>(field: &F, p: u64, slots: &[F::Elem]) -> Result<bool> {
    let Some(res) = field.residue_field() else {
        if slots.len() >= 2 {
            return Ok(true);
        }
        let c = field.to_base(&slots[0]).ok_or_else(|| Error::Invalid("not a base element".into()))?;
        return Ok(field.base().p_class(c, p)? == 0);
    };
    let raw = decompose_raw(field, &res, p, slots)?;
    let residue_trivial = match &raw.residue {
        RawResidue::None => true,
        RawResidue::Scalar(k) => *k == 0,
        RawResidue::Slots(rest) => is_trivial(&res, p, rest)?,
    };
    Ok(residue_trivial && is_trivial(&res, p, &raw.units)?)
}

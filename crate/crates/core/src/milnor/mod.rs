//! Mod-p Milnor symbols `(a_1, …, a_n)` over F_q and iterated Laurent
//! series fields over F_q.
//!
//! A [`Symbol`] is a presentation; triviality of its class is decided by the
//! residue recursion in [`residue`].

mod checks;
mod common_slot;
mod residue;

pub use checks::{neutralize_check, obvious_form_consistency, split_check, ContractReport};
pub use common_slot::{common_slot_step, shared_slots, CommonSlotBranch, CommonSlotOutcome};
pub use residue::{Component, ResidueDecomposition};

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{check_p, parse_elements, TowerField};

#[derive(Clone, PartialEq)]
pub struct Symbol<F: TowerField> {
    field: F,
    p: u64,
    slots: Vec<F::Elem>,
}

impl<F: TowerField> fmt::Debug for Symbol<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {} over {}", self.format(), self.p, self.field.descriptor())
    }
}

/// A symbol with every slot replaced by its class representative.
#[derive(Debug, Clone)]
pub struct Normalized<F: TowerField> {
    pub symbol: Symbol<F>,
    /// Some slot is a `p`-th power, so the symbol is trivial.
    pub has_trivial_slot: bool,
}

impl<F: TowerField> Symbol<F> {
    pub fn new(field: &F, p: u64, slots: Vec<F::Elem>) -> Result<Self> {
        check_p(field, p)?;
        if slots.is_empty() {
            return Err(Error::Invalid("a symbol needs at least one slot".into()));
        }
        if slots.iter().any(|a| field.is_zero(a)) {
            return Err(Error::ZeroElement);
        }
        Ok(Symbol { field: field.clone(), p, slots })
    }

    /// Parses `"(t, 3)"` or `"t, 3"`.
    pub fn parse(field: &F, p: u64, text: &str) -> Result<Self> {
        Self::new(field, p, parse_elements(field, text)?)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn slots(&self) -> &[F::Elem] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn format(&self) -> String {
        let inner: Vec<String> = self.slots.iter().map(|a| self.field.format_elem(a)).collect();
        format!("({})", inner.join(", "))
    }

    /// Cup product with `(c)`.
    pub fn append(&self, c: &F::Elem) -> Result<Self> {
        let mut slots = self.slots.clone();
        slots.push(c.clone());
        Self::new(&self.field, self.p, slots)
    }

    pub fn with_slots(&self, slots: Vec<F::Elem>) -> Result<Self> {
        Self::new(&self.field, self.p, slots)
    }

    /// Replaces each slot by `t^(v mod p)` times the representative of its
    /// leading unit, recursively down to `g^(dlog mod p)` in F_q.
    pub fn normalize(&self) -> Result<Normalized<F>> {
        let mut trivial = false;
        let mut slots = Vec::with_capacity(self.len());
        for a in &self.slots {
            let (rep, is_one) = class_rep(&self.field, a, self.p)?;
            trivial |= is_one;
            slots.push(rep);
        }
        Ok(Normalized { symbol: Symbol { field: self.field.clone(), p: self.p, slots }, has_trivial_slot: trivial })
    }

    /// `(…, a, b, …) ↦ (…, -a b⁻¹, a + b, …)` at slots `i, i + 1`.
    pub fn rewrite_identity(&self, i: usize) -> Result<Self> {
        let (a, b, sum) = self.pair(i)?;
        let f = &self.field;
        let mut slots = self.slots.clone();
        slots[i] = f.neg(&f.div(&a, &b)?);
        slots[i + 1] = sum;
        self.with_slots(slots)
    }

    /// `(…, a, b, …) ↦ (…, a + b, -b a⁻¹, …)` at slots `i, i + 1`.
    pub fn rewrite_identity_alt(&self, i: usize) -> Result<Self> {
        let (a, b, sum) = self.pair(i)?;
        let f = &self.field;
        let mut slots = self.slots.clone();
        slots[i] = sum;
        slots[i + 1] = f.neg(&f.div(&b, &a)?);
        self.with_slots(slots)
    }

    fn pair(&self, i: usize) -> Result<(F::Elem, F::Elem, F::Elem)> {
        if i + 1 >= self.len() {
            return Err(Error::Invalid(format!("slots {i} and {} do not both exist in a symbol of length {}", i + 1, self.len())));
        }
        let (a, b) = (self.slots[i].clone(), self.slots[i + 1].clone());
        let sum = self.field.add(&a, &b);
        if self.field.is_zero(&sum) {
            return Err(Error::Hypothesis(format!("slots {i} and {} sum to zero", i + 1)));
        }
        Ok((a, b, sum))
    }

    pub fn residue(&self) -> Result<ResidueDecomposition<F>> {
        residue::decompose(self)
    }

    pub fn is_trivial(&self) -> Result<bool> {
        residue::is_trivial(&self.field, self.p, &self.slots)
    }

    /// `{symbol, trivial, decomposition}`.
    pub fn report(&self) -> Result<Value> {
        let trivial = self.is_trivial()?;
        let decomposition = match self.field.level() {
            0 => Value::Null,
            _ => self.residue()?.to_json(),
        };
        Ok(json!({
            "field": self.field.descriptor(),
            "p": self.p,
            "symbol": self.format(),
            "trivial": trivial,
            "decomposition": decomposition,
        }))
    }
}

/// Class representative of `a` in `F^*/F^{*p}` and whether it is 1.
fn class_rep<F: TowerField>(field: &F, a: &F::Elem, p: u64) -> Result<(F::Elem, bool)> {
    match field.residue_field() {
        None => {
            let c = field.to_base(a).ok_or_else(|| Error::Invalid("not a base element".into()))?;
            let class = field.base().p_class(c, p)?;
            Ok((field.from_base(field.base().class_rep(class)), class == 0))
        }
        Some(res) => {
            let (v, u) = field.leading(a)?;
            let (u_rep, u_one) = class_rep(&res, &u, p)?;
            let v = v.rem_euclid(p as i64);
            let t = field.uniformizer().expect("Laurent level has a uniformizer");
            let rep = field.mul(&field.pow(&t, v as u64), &field.embed_residue(&u_rep));
            Ok((rep, v == 0 && u_one))
        }
    }
}

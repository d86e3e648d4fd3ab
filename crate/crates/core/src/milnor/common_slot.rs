//! One step of the linkage procedure for `p = 2`: two symbols of length
//! `n` whose presentations agree in their first `m < n - 1` slots are
//! rewritten to agree in `m + 1` slots.
//!
//! With `Φ = ⟨⟨a_1..a_{n-1}⟩⟩` and `Γ = ⟨⟨b_1..b_{n-1}⟩⟩`, a zero of
//! `a_{n-1} τ² ⊕ a_n Φ ⊕ (-b_n) Γ` gives `A + B = Γ(w) b_n` with
//! `A = τ² a_{n-1}` and `B = Φ(v) a_n`. Since Pfister values neutralize
//! their symbol, `α = (…, A, B)`, and the identity `(A, B) = (-AB⁻¹, A + B)`
//! makes the last slot match `β = (b_1..b_{n-1}, Γ(w) b_n)`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::Symbol;
use crate::error::{Error, Result};
use crate::fields::TowerField;
use crate::forms::{pfister, Form, Isotropy, SearchPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommonSlotBranch {
    /// `Φ(v) = 0`: the Pfister form of α's first slots is isotropic.
    AlphaPfisterIsotropic,
    /// `Γ(w) = 0`.
    BetaPfisterIsotropic,
    /// `τ² a_{n-1} + Φ(v) a_n = 0`, so α contains `(A, -A)`; this also
    /// covers zeros with `w = 0`.
    AlphaCancels,
    /// Generic case, through the symbol identity.
    Rewrite,
    /// `τ = 0`: `Φ(v) a_n = Γ(w) b_n` is shared without rewriting.
    DirectShare,
    /// `v = 0`: `Γ(w) b_n = τ² a_{n-1}`, so β ends in α's slot `a_{n-1}`.
    PenultimateMatch,
    /// Replacing every slot by its class representative already adds a
    /// shared slot; no zero was needed.
    ClassRepresentatives,
}

impl CommonSlotBranch {
    /// Which input the branch declares trivial, if any.
    pub fn declares_trivial(&self) -> Option<&'static str> {
        match self {
            CommonSlotBranch::AlphaPfisterIsotropic | CommonSlotBranch::AlphaCancels => Some("alpha"),
            CommonSlotBranch::BetaPfisterIsotropic => Some("beta"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommonSlotOutcome<F: TowerField> {
    pub branch: CommonSlotBranch,
    pub shared_before: usize,
    pub shared_after: usize,
    /// The zero `(τ, v, w)` of the assembled form.
    pub zero: Vec<F::Elem>,
    /// New presentations with shared slots first. In the trivial branches
    /// the trivial input is re-presented as `(c_1, …, c_{m+1}, 1, …, 1)`.
    pub alpha: Symbol<F>,
    pub beta: Symbol<F>,
}

impl<F: TowerField> CommonSlotOutcome<F> {
    pub fn to_json(&self) -> Value {
        let f = self.alpha.field();
        json!({
            "branch": self.branch,
            "declares_trivial": self.branch.declares_trivial(),
            "shared_before": self.shared_before,
            "shared_after": self.shared_after,
            "zero": self.zero.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>(),
            "alpha": self.alpha.format(),
            "beta": self.beta.format(),
        })
    }
}

/// Length of the common prefix of two presentations.
pub fn shared_slots<F: TowerField>(alpha: &Symbol<F>, beta: &Symbol<F>) -> usize {
    alpha.slots().iter().zip(beta.slots()).take_while(|(a, b)| a == b).count()
}

/// Moves slot `from` to position `to`; for `p = 2` this preserves the class.
fn move_slot<E: Clone>(slots: &[E], from: usize, to: usize) -> Vec<E> {
    let mut out = slots.to_vec();
    let x = out.remove(from);
    out.insert(to, x);
    out
}

/// Falls back to class representatives when the zero cannot be lifted
/// exactly (slots like `1 + t` whose square roots are infinite series).
pub fn common_slot_step<F: TowerField + 'static>(alpha: &Symbol<F>, beta: &Symbol<F>, plan: &SearchPlan<F::Elem>) -> Result<CommonSlotOutcome<F>> {
    match step(alpha, beta, plan) {
        Err(Error::Unsupported(reason)) if alpha.p() == 2 => {
            let (na, nb) = (alpha.normalize()?.symbol, beta.normalize()?.symbol);
            let m = shared_slots(alpha, beta);
            if na == *alpha && nb == *beta {
                return Err(Error::Unsupported(reason));
            }
            let shared = shared_slots(&na, &nb);
            if shared > m {
                return Ok(CommonSlotOutcome {
                    branch: CommonSlotBranch::ClassRepresentatives,
                    shared_before: m,
                    shared_after: shared,
                    zero: Vec::new(),
                    alpha: na,
                    beta: nb,
                });
            }
            let mut out = step(&na, &nb, plan)?;
            out.shared_before = m;
            Ok(out)
        }
        other => other,
    }
}

fn step<F: TowerField + 'static>(alpha: &Symbol<F>, beta: &Symbol<F>, plan: &SearchPlan<F::Elem>) -> Result<CommonSlotOutcome<F>> {
    if alpha.p() != 2 || beta.p() != 2 {
        return Err(Error::Hypothesis("the common-slot step is for p = 2".into()));
    }
    if alpha.field() != beta.field() {
        return Err(Error::FieldMismatch);
    }
    let n = alpha.len();
    if beta.len() != n || n < 2 {
        return Err(Error::Hypothesis(format!("need two symbols of equal length ≥ 2, got {} and {}", n, beta.len())));
    }
    let m = shared_slots(alpha, beta);
    if m >= n - 1 {
        return Err(Error::Hypothesis(format!("presentations already share {m} ≥ n - 1 leading slots")));
    }
    let f = alpha.field();
    let (a, b) = (alpha.slots(), beta.slots());
    let phi = pfister(f, &a[..n - 1])?;
    let gamma = pfister(f, &b[..n - 1])?;
    let h = phi.dim();
    let form = Form::diagonal(f.clone(), &a[n - 2..n - 1], 2)?
        .direct_sum(&phi.scale(&a[n - 1])?)?
        .direct_sum(&gamma.scale(&f.neg(&b[n - 1]))?)?;

    // Zeros with v ≠ 0 and w ≠ 0 are preferred; Springer ignores the
    // filter and the degenerate ones are handled below.
    let fc = f.clone();
    let generic = Arc::new(move |x: &[F::Elem]| {
        let nonzero = |v: &[F::Elem]| v.iter().any(|c| fc.is_nonzero(c));
        nonzero(&x[1..1 + h]) && nonzero(&x[1 + h..])
    });
    let mut filtered = plan.clone();
    filtered.opts.filter = Some(generic);
    let mut outcome = filtered.run(&form)?;
    if outcome.witness().is_none() {
        outcome = plan.run(&form)?;
    }
    let zero = match outcome {
        Isotropy::Witness { vector, .. } => vector,
        Isotropy::Isotropic { .. } => return Err(Error::Unsupported("form is isotropic but no exact zero was produced".into())),
        Isotropy::Anisotropic => return Err(Error::Unsupported("assembled form is anisotropic".into())),
        Isotropy::NotFound { trials } => return Err(Error::Unsupported(format!("no zero found in {trials} trials"))),
    };

    let (tau, v, w) = (&zero[0], &zero[1..1 + h], &zero[1 + h..]);
    let nonzero = |x: &[F::Elem]| x.iter().any(|c| f.is_nonzero(c));
    let (v_nonzero, w_nonzero) = (nonzero(v), nonzero(w));
    let phi_v = phi.evaluate(v)?;
    let gamma_w = gamma.evaluate(w)?;
    // A trivial symbol equals the other's first m + 1 slots padded with 1.
    let trivial = |branch: CommonSlotBranch| -> Result<CommonSlotOutcome<F>> {
        let pad = |keep: &[F::Elem]| {
            let mut s = keep[..m + 1].to_vec();
            s.resize(n, f.one());
            s
        };
        let (alpha_out, beta_out) = match branch.declares_trivial() {
            Some("alpha") => (alpha.with_slots(pad(b))?, beta.clone()),
            _ => (alpha.clone(), beta.with_slots(pad(a))?),
        };
        Ok(CommonSlotOutcome {
            branch,
            shared_before: m,
            shared_after: shared_slots(&alpha_out, &beta_out),
            zero: zero.clone(),
            alpha: alpha_out,
            beta: beta_out,
        })
    };
    if v_nonzero && f.is_zero(&phi_v) {
        return trivial(CommonSlotBranch::AlphaPfisterIsotropic);
    }
    if w_nonzero && f.is_zero(&gamma_w) {
        return trivial(CommonSlotBranch::BetaPfisterIsotropic);
    }
    let big_a = f.mul(&f.mul(tau, tau), &a[n - 2]);
    let big_b = f.mul(&phi_v, &a[n - 1]);
    let sum = f.add(&big_a, &big_b);
    if f.is_zero(&sum) {
        return trivial(CommonSlotBranch::AlphaCancels);
    }
    let shared = f.mul(&gamma_w, &b[n - 1]);
    if sum != shared {
        return Err(Error::IdentityFailed("zero equation does not hold".into()));
    }
    let mut new_b = b.to_vec();
    if !v_nonzero {
        // Γ(w) b_n = τ² a_{n-1}, so β = (b_1, …, b_{n-1}, a_{n-1}).
        new_b[n - 1] = a[n - 2].clone();
        return finish(CommonSlotBranch::PenultimateMatch, alpha, beta, move_slot(a, n - 2, m), move_slot(&new_b, n - 1, m), m, zero);
    }
    let (branch, new_a) = if f.is_zero(tau) {
        let mut s = a.to_vec();
        s[n - 1] = big_b;
        (CommonSlotBranch::DirectShare, s)
    } else {
        let mut s = a.to_vec();
        s[n - 2] = f.neg(&f.div(&big_a, &big_b)?);
        s[n - 1] = sum;
        (CommonSlotBranch::Rewrite, s)
    };
    new_b[n - 1] = shared;
    finish(branch, alpha, beta, move_slot(&new_a, n - 1, m), move_slot(&new_b, n - 1, m), m, zero)
}

fn finish<F: TowerField>(
    branch: CommonSlotBranch,
    alpha: &Symbol<F>,
    beta: &Symbol<F>,
    new_a: Vec<F::Elem>,
    new_b: Vec<F::Elem>,
    m: usize,
    zero: Vec<F::Elem>,
) -> Result<CommonSlotOutcome<F>> {
    let alpha_out = alpha.with_slots(new_a)?;
    let beta_out = beta.with_slots(new_b)?;
    Ok(CommonSlotOutcome {
        branch,
        shared_before: m,
        shared_after: shared_slots(&alpha_out, &beta_out),
        zero,
        alpha: alpha_out,
        beta: beta_out,
    })
}

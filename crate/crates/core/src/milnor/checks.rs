//! Consistency checks between forms and the symbols they should split or
//! neutralize.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Symbol;
use crate::error::{Error, Result};
use crate::fields::{Field, TowerField};
use crate::forms::{diagonal_power_form, Form, Isotropy, SearchPlan};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractReport {
    pub check: &'static str,
    pub symbol: String,
    pub symbol_trivial: bool,
    /// Isotropy verdict of the form, when one was computed.
    pub isotropy: Option<&'static str>,
    /// `theorem` when exact, `evidence` for inconclusive random searches,
    /// `vacuous` when the symbol is trivial anyway, `sampled` for value
    /// sampling.
    pub evidence: &'static str,
    pub samples: usize,
    pub witness: Option<Vec<String>>,
    pub failure: Option<String>,
    pub consistent: bool,
}

fn same_field<F: TowerField>(form: &Form<F>, s: &Symbol<F>) -> Result<()> {
    if form.field() != s.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

fn fmt_vec<F: Field>(f: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|c| f.format_elem(c)).collect()
}

fn isotropy_contract<F: TowerField>(check: &'static str, form: &Form<F>, s: &Symbol<F>, plan: &SearchPlan<F::Elem>) -> Result<ContractReport> {
    let trivial = s.is_trivial()?;
    let outcome = plan.run(form)?;
    let isotropic = outcome.decided() == Some(true);
    let evidence = match (&outcome, trivial) {
        (_, true) => "vacuous",
        (Isotropy::NotFound { .. }, false) => "evidence",
        _ => "theorem",
    };
    Ok(ContractReport {
        check,
        symbol: s.format(),
        symbol_trivial: trivial,
        isotropy: Some(outcome.verdict()),
        evidence,
        samples: 0,
        witness: outcome.witness().map(|w| fmt_vec(form.field(), w)),
        failure: (isotropic && !trivial).then(|| "form is isotropic but the symbol is nontrivial".to_string()),
        consistent: trivial || !isotropic,
    })
}

/// Isotropy of `form` must force `s = 0`.
pub fn split_check<F: TowerField>(form: &Form<F>, s: &Symbol<F>, plan: &SearchPlan<F::Elem>) -> Result<ContractReport> {
    same_field(form, s)?;
    isotropy_contract("split", form, s, plan)
}

/// `s ∪ (N(v))` must vanish for sampled `v` with `N(v) ≠ 0`.
pub fn neutralize_check<F: TowerField>(form: &Form<F>, s: &Symbol<F>, samples: usize, seed: u64) -> Result<ContractReport> {
    same_field(form, s)?;
    let f = form.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut failure = None;
    let mut attempts = 0;
    while done < samples && attempts < samples * 50 {
        attempts += 1;
        let v: Vec<F::Elem> = (0..form.dim()).map(|_| f.random_elem(&mut rng)).collect();
        let value = form.evaluate(&v)?;
        if f.is_zero(&value) {
            continue;
        }
        done += 1;
        if !s.append(&value)?.is_trivial()? {
            failure = Some(format!("{} ∪ ({}) is nontrivial", s.format(), f.format_elem(&value)));
            break;
        }
    }
    Ok(ContractReport {
        check: "neutralize",
        symbol: s.format(),
        symbol_trivial: s.is_trivial()?,
        isotropy: None,
        evidence: "sampled",
        samples: done,
        witness: None,
        consistent: failure.is_none(),
        failure,
    })
}

/// `a_1 t_1^p + … + a_n t_n^p` splits `(a_1, …, a_n)`: a zero must come
/// with a trivial symbol.
pub fn obvious_form_consistency<F: TowerField>(s: &Symbol<F>, plan: &SearchPlan<F::Elem>) -> Result<ContractReport> {
    let form = diagonal_power_form(s.field(), s.slots(), s.p() as u32)?;
    isotropy_contract("obvious-form", &form, s, plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FiniteField, LaurentField};
    use crate::forms::pfister;

    #[test]
    fn obvious_form_examples() {
        let f = LaurentField::new(FiniteField::new(7, 1).unwrap(), &[], 4).unwrap();
        let plan = SearchPlan::default();
        // t^3 + 5 s^3 has no zero: -5 = 2 is not a cube mod 7
        let r = obvious_form_consistency(&Symbol::parse(&f, 3, "(1, 5)").unwrap(), &plan).unwrap();
        assert_eq!((r.isotropy, r.symbol_trivial, r.consistent), (Some("none"), true, true));
        let r = obvious_form_consistency(&Symbol::parse(&f, 3, "(1, 6)").unwrap(), &plan).unwrap();
        assert_eq!((r.isotropy, r.consistent), (Some("witness"), true));

        let g = LaurentField::new(FiniteField::new(7, 1).unwrap(), &["t"], 6).unwrap();
        let plan = SearchPlan { trials: 2000, ..SearchPlan::default() };
        let r = obvious_form_consistency(&Symbol::parse(&g, 3, "(t, 3)").unwrap(), &plan).unwrap();
        assert_eq!((r.isotropy, r.symbol_trivial, r.consistent, r.evidence), (Some("not-found"), false, true, "evidence"));
    }

    #[test]
    fn pfister_over_laurent_tower() {
        let f = LaurentField::new(FiniteField::new(3, 1).unwrap(), &["s", "t"], 8).unwrap();
        let s = Symbol::parse(&f, 2, "(t, s, -1)").unwrap();
        let form = pfister(&f, s.slots()).unwrap();
        let r = split_check(&form, &s, &SearchPlan::default()).unwrap();
        assert_eq!((r.isotropy, r.symbol_trivial, r.evidence, r.consistent), (Some("none"), false, "theorem", true));

        let beta = Symbol::parse(&f, 2, "(t, s)").unwrap();
        let form = pfister(&f, beta.slots()).unwrap();
        let r = neutralize_check(&form, &beta, 30, 3).unwrap();
        assert!(r.consistent, "{r:?}");
        assert_eq!(r.samples, 30);
    }
}

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Algebra, Verdict};
use crate::error::{Error, Result};
use crate::fields::{is_prime, Field};
use crate::forms::{exhaustive_search, randomized_search, Isotropy, SearchOptions};
use crate::linalg::{is_invertible, kernel};
use crate::poly::UniPoly;

/// Answer of a division test with the element that decided it, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisionReport<E> {
    pub verdict: Verdict,
    pub method: &'static str,
    /// A nonzero non-invertible element (for `No`).
    pub witness: Option<Vec<E>>,
}

impl<E> DivisionReport<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "verdict": self.verdict,
            "method": self.method,
            "witness": self.witness.as_ref().map(|w| w.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>()),
        })
    }
}

fn enumerate_elements<F: Field>(alg: &Algebra<F>, budget: u64) -> Result<(u64, Vec<F::Elem>)> {
    let f = alg.field();
    let q = f
        .cardinality()
        .ok_or_else(|| Error::Unsupported(format!("enumeration over the infinite field {}", f.descriptor())))?;
    let needed = (q as u128).checked_pow(alg.dim() as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let elems = (0..q).map(|i| f.element_at(i).expect("index below the field order")).collect();
    Ok((needed as u64, elems))
}

fn decode<E: Clone>(mut g: u64, elems: &[E], dim: usize) -> Vec<E> {
    let q = elems.len() as u64;
    let mut v = Vec::with_capacity(dim);
    for _ in 0..dim {
        v.push(elems[(g % q) as usize].clone());
        g /= q;
    }
    v
}

/// Decides whether every nonzero element is invertible by checking left and
/// right multiplication on all `q^dim - 1` nonzero elements.
pub fn is_division_exhaustive<F: Field>(alg: &Algebra<F>, budget: u64) -> Result<DivisionReport<F::Elem>> {
    let (total, elems) = enumerate_elements(alg, budget)?;
    let f = alg.field();
    let bad = (1..total).into_par_iter().find_map_first(|g| {
        let a = decode(g, &elems, alg.dim());
        let ok = is_invertible(f, &alg.left_mul_matrix(&a)) && is_invertible(f, &alg.right_mul_matrix(&a));
        (!ok).then_some(a)
    });
    Ok(DivisionReport {
        verdict: if bad.is_some() { Verdict::No } else { Verdict::Yes },
        method: "exhaustive",
        witness: bad,
    })
}

/// Monic minimal polynomial of `a` over the base field.
pub fn minimal_polynomial<F: Field>(alg: &Algebra<F>, a: &[F::Elem]) -> UniPoly<F::Elem> {
    let f = alg.field();
    let mut powers = vec![alg.unit().to_vec()];
    loop {
        let next = alg.mul(powers.last().expect("nonempty"), a);
        powers.push(next);
        let matrix: Vec<Vec<F::Elem>> = (0..alg.dim()).map(|r| powers.iter().map(|p| p[r].clone()).collect()).collect();
        if let Some(v) = kernel(f, &matrix).into_iter().next() {
            let poly = UniPoly::from_coeffs(f, v);
            return poly.monic(f).expect("kernel vector is nonzero");
        }
    }
}

/// Every nonzero `F[a]` is a field iff every minimal polynomial is
/// irreducible. Enumerates all elements.
pub fn principally_division_by_enumeration<F: Field>(alg: &Algebra<F>, budget: u64) -> Result<DivisionReport<F::Elem>> {
    let (total, elems) = enumerate_elements(alg, budget)?;
    let f = alg.field();
    let bad = (1..total).into_par_iter().find_map_first(|g| {
        let a = decode(g, &elems, alg.dim());
        let irreducible = minimal_polynomial(alg, &a).is_irreducible(f).unwrap_or(false);
        (!irreducible).then_some(a)
    });
    Ok(DivisionReport {
        verdict: if bad.is_some() { Verdict::No } else { Verdict::Yes },
        method: "enumeration",
        witness: bad,
    })
}

/// For algebras of prime degree, every nonzero `F[a]` is a field iff the
/// reduced norm is anisotropic. The norm form is searched exhaustively when
/// the budget allows and randomly otherwise, in which case a miss is
/// `Unknown`.
pub fn is_principally_division<F: Field>(
    alg: &Algebra<F>,
    opts: &SearchOptions<F::Elem>,
    seed: u64,
    trials: u64,
) -> Result<DivisionReport<F::Elem>> {
    let r = alg.degree()?;
    if !is_prime(r as u64) {
        return Err(Error::Hypothesis(format!("norm certificate needs prime degree, got {r}")));
    }
    let form = alg.norm_form()?;
    let outcome = match exhaustive_search(&form, opts) {
        Err(Error::BudgetExceeded { .. }) | Err(Error::Unsupported(_)) => randomized_search(&form, seed, trials, opts)?,
        other => other?,
    };
    Ok(match outcome {
        Isotropy::Witness { vector, strategy } => DivisionReport { verdict: Verdict::No, method: strategy, witness: Some(vector) },
        Isotropy::Anisotropic => DivisionReport { verdict: Verdict::Yes, method: "exhaustive", witness: None },
        _ => DivisionReport { verdict: Verdict::Unknown, method: "randomized", witness: None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FiniteField;

    #[test]
    fn quadratic_extensions() {
        let f = FiniteField::new(5, 1).unwrap();
        let ext = Algebra::kummer(f.clone(), 2, &f.from_int(2)).unwrap();
        assert_eq!(is_division_exhaustive(&ext, 1000).unwrap().verdict, Verdict::Yes);
        let opts = SearchOptions::default();
        assert_eq!(is_principally_division(&ext, &opts, 1, 100).unwrap().verdict, Verdict::Yes);
        assert_eq!(principally_division_by_enumeration(&ext, 1000).unwrap().verdict, Verdict::Yes);

        // 4 = 2^2 is a square mod 5, so x^2 - 4 splits
        let split = Algebra::kummer(f.clone(), 2, &f.from_int(4)).unwrap();
        let report = is_principally_division(&split, &opts, 1, 100).unwrap();
        assert_eq!(report.verdict, Verdict::No);
        let w = report.witness.unwrap();
        assert_eq!(split.reduced_norm(&w).unwrap(), f.zero());
        assert_eq!(is_division_exhaustive(&split, 1000).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn matrix_algebra_is_not_division() {
        let f = FiniteField::new(3, 1).unwrap();
        let m2 = Algebra::matrix_algebra(f.clone(), 2).unwrap();
        let report = is_division_exhaustive(&m2, 1000).unwrap();
        assert_eq!(report.verdict, Verdict::No);
        assert_eq!(m2.reduced_norm(&report.witness.unwrap()).unwrap(), f.zero());
        assert!(matches!(is_division_exhaustive(&m2, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn minimal_polynomial_of_scalar_and_generator() {
        let f = FiniteField::new(7, 1).unwrap();
        let k = Algebra::kummer(f.clone(), 3, &f.from_int(2)).unwrap();
        assert_eq!(minimal_polynomial(&k, k.unit()).format(&f, "T"), "T + 6");
        assert_eq!(minimal_polynomial(&k, &k.basis(1)).format(&f, "T"), "T^3 + 5");
    }
}

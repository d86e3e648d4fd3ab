use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Form;
use crate::error::{Error, Result};
use crate::fields::{Field, TowerField};

/// Default cap on the number of points an exhaustive search may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Search budget, overridable through `KFORMS_BUDGET`.
pub fn budget_from_env() -> u64 {
    std::env::var("KFORMS_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Extra condition a zero must satisfy to count as a witness.
pub type Filter<E> = Arc<dyn Fn(&[E]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct SearchOptions<E> {
    pub budget: u64,
    /// Points per parallel work unit.
    pub chunk: u64,
    pub filter: Option<Filter<E>>,
}

impl<E> Default for SearchOptions<E> {
    fn default() -> Self {
        SearchOptions { budget: budget_from_env(), chunk: 4096, filter: None }
    }
}

impl<E> SearchOptions<E> {
    pub fn with_budget(budget: u64) -> Self {
        SearchOptions { budget, ..Default::default() }
    }

    fn accepts(&self, v: &[E]) -> bool {
        self.filter.as_ref().is_none_or(|f| f(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Strategy {
    Exhaustive,
    Randomized { seed: u64, trials: u64 },
    Springer,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Randomized { .. } => "randomized",
            Strategy::Springer => "springer",
        }
    }
}

/// Result of an isotropy query.
#[derive(Clone, Debug, PartialEq)]
pub enum Isotropy<E> {
    /// An explicit nonzero vector on which the form is exactly zero.
    Witness { vector: Vec<E>, strategy: &'static str },
    /// Certified isotropic, but no exact zero could be written down.
    Isotropic { reason: String },
    /// Certified anisotropic.
    Anisotropic,
    /// Inconclusive: a bounded search found nothing.
    NotFound { trials: u64 },
}

impl<E> Isotropy<E> {
    /// `Some(true)` isotropic, `Some(false)` anisotropic, `None` unknown.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Isotropy::Witness { .. } | Isotropy::Isotropic { .. } => Some(true),
            Isotropy::Anisotropic => Some(false),
            Isotropy::NotFound { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[E]> {
        match self {
            Isotropy::Witness { vector, .. } => Some(vector),
            _ => None,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            Isotropy::Witness { .. } => "witness",
            Isotropy::Isotropic { .. } => "isotropic",
            Isotropy::Anisotropic => "none",
            Isotropy::NotFound { .. } => "not-found",
        }
    }
}

pub fn isotropy_search<F: TowerField>(
    form: &Form<F>,
    strategy: &Strategy,
    opts: &SearchOptions<F::Elem>,
) -> Result<Isotropy<F::Elem>> {
    match strategy {
        Strategy::Exhaustive => exhaustive_search(form, opts),
        Strategy::Randomized { seed, trials } => randomized_search(form, *seed, *trials, opts),
        Strategy::Springer => springer(form, opts),
    }
}

/// A strategy choice bundled with its options; `None` means [`auto_search`].
#[derive(Clone)]
pub struct SearchPlan<E> {
    pub strategy: Option<Strategy>,
    pub opts: SearchOptions<E>,
    pub seed: u64,
    pub trials: u64,
}

impl<E> Default for SearchPlan<E> {
    fn default() -> Self {
        SearchPlan { strategy: None, opts: SearchOptions::default(), seed: 0, trials: 20_000 }
    }
}

impl<E> SearchPlan<E> {
    pub fn run<F: TowerField<Elem = E>>(&self, form: &Form<F>) -> Result<Isotropy<E>> {
        match &self.strategy {
            Some(s) => isotropy_search(form, s, &self.opts),
            None => auto_search(form, &self.opts, self.seed, self.trials),
        }
    }
}

/// Strongest applicable decision: exhaustive over finite fields within
/// budget, Springer for diagonal quadratic forms over Laurent fields, and a
/// seeded random search otherwise.
pub fn auto_search<F: TowerField>(
    form: &Form<F>,
    opts: &SearchOptions<F::Elem>,
    seed: u64,
    trials: u64,
) -> Result<Isotropy<F::Elem>> {
    if form.field().cardinality().is_some() {
        match exhaustive_search(form, opts) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => return other,
        }
    } else if form.degree() == 2 && form.field().characteristic() != 2 && form.diagonal_coeffs().is_some() {
        return springer(form, opts);
    }
    randomized_search(form, seed, trials, opts)
}

/// Terms as `(coefficient, [(variable, exponent)])` for fast evaluation.
struct Compiled<F: Field> {
    field: F,
    terms: Vec<(F::Elem, Vec<(usize, u64)>)>,
}

impl<F: Field> Compiled<F> {
    fn new(form: &Form<F>) -> Self {
        let terms = form
            .poly()
            .terms()
            .map(|(m, c)| (c.clone(), m.pairs().iter().map(|&(v, e)| (v as usize, e as u64)).collect()))
            .collect();
        Compiled { field: form.field().clone(), terms }
    }

    fn eval(&self, v: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (c, mono) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in mono {
                if f.is_zero(&v[i]) {
                    t = f.zero();
                    break;
                }
                t = f.mul(&t, &f.pow(&v[i], e));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

fn pow_u128(q: u64, k: usize) -> Option<u128> {
    (q as u128).checked_pow(k as u32)
}

/// Projective enumeration in lexicographic order of normalized vectors:
/// the first nonzero coordinate is 1, and vectors with more leading zeros
/// come first. Global index `g` runs over the blocks `i = n-1, …, 0`, where
/// block `i` has its leading 1 at position `i`.
struct Projective<E> {
    elems: Vec<E>,
    n: usize,
    q: u64,
    block_sizes: Vec<u64>,
}

impl<E: Clone> Projective<E> {
    fn decode(&self, mut g: u64, zero: &E) -> Vec<E> {
        let mut v = vec![zero.clone(); self.n];
        for i in (0..self.n).rev() {
            let size = self.block_sizes[i];
            if g < size {
                v[i] = self.elems[1].clone();
                let mut local = g;
                for j in (i + 1..self.n).rev() {
                    v[j] = self.elems[(local % self.q) as usize].clone();
                    local /= self.q;
                }
                return v;
            }
            g -= size;
        }
        unreachable!("index beyond the projective space")
    }
}

/// Lexicographically smallest normalized zero, or a definite "none".
///
/// The scan is split into chunks searched in parallel; the earliest chunk
/// with a hit wins, so the answer does not depend on the partitioning.
pub fn exhaustive_search<F: Field>(form: &Form<F>, opts: &SearchOptions<F::Elem>) -> Result<Isotropy<F::Elem>> {
    let f = form.field();
    let q = f
        .cardinality()
        .ok_or_else(|| Error::Unsupported(format!("exhaustive search over the infinite field {}", f.descriptor())))?;
    let n = form.dim();
    let needed = pow_u128(q, n).map(|x| (x - 1) / (q as u128 - 1)).unwrap_or(u128::MAX);
    if needed > opts.budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget: opts.budget });
    }
    let total = needed as u64;
    let space = Projective {
        elems: (0..q).map(|i| f.element_at(i).expect("index below the field order")).collect(),
        n,
        q,
        block_sizes: (0..n).map(|i| q.pow((n - 1 - i) as u32)).collect(),
    };
    let compiled = Compiled::new(form);
    let zero = f.zero();
    let chunk = opts.chunk.max(1);
    let chunks = total.div_ceil(chunk);
    let hit = (0..chunks).into_par_iter().find_map_first(|ci| {
        let lo = ci * chunk;
        let hi = (lo + chunk).min(total);
        (lo..hi).find_map(|g| {
            let v = space.decode(g, &zero);
            (f.is_zero(&compiled.eval(&v)) && opts.accepts(&v)).then_some(v)
        })
    });
    Ok(match hit {
        Some(vector) => Isotropy::Witness { vector, strategy: "exhaustive" },
        None => Isotropy::Anisotropic,
    })
}

/// Seeded random search; "not found" is inconclusive.
pub fn randomized_search<F: Field>(
    form: &Form<F>,
    seed: u64,
    trials: u64,
    opts: &SearchOptions<F::Elem>,
) -> Result<Isotropy<F::Elem>> {
    let f = form.field();
    let compiled = Compiled::new(form);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v: Vec<F::Elem> = (0..form.dim()).map(|_| f.random_elem(&mut rng)).collect();
        if v.iter().all(|x| f.is_zero(x)) {
            continue;
        }
        if f.is_zero(&compiled.eval(&v)) && opts.accepts(&v) {
            return Ok(Isotropy::Witness { vector: v, strategy: "randomized" });
        }
    }
    Ok(Isotropy::NotFound { trials })
}

/// Exact decision for diagonal quadratic forms over F_q((t_1))…((t_m)).
///
/// Each coefficient is `u t^v (1 + m)` with `1 + m` a square, so the form is
/// isotropic iff one of the residue forms `⟨u_i : v_i even⟩`,
/// `⟨u_i : v_i odd⟩` is isotropic over the residue field. The recursion
/// bottoms out in exhaustive search over F_q.
pub fn springer<F: TowerField>(form: &Form<F>, opts: &SearchOptions<F::Elem>) -> Result<Isotropy<F::Elem>> {
    if form.degree() != 2 {
        return Err(Error::Unsupported("springer decision needs a quadratic form".into()));
    }
    let coeffs = form
        .diagonal_coeffs()
        .ok_or_else(|| Error::Unsupported("springer decision needs a diagonal form".into()))?;
    if form.field().characteristic() == 2 {
        return Err(Error::Unsupported("springer decision needs characteristic other than 2".into()));
    }
    springer_diag(form.field(), &coeffs, opts)
}

fn springer_diag<F: TowerField>(field: &F, coeffs: &[F::Elem], opts: &SearchOptions<F::Elem>) -> Result<Isotropy<F::Elem>> {
    if let Some(i) = coeffs.iter().position(|c| field.is_zero(c)) {
        let mut v = vec![field.zero(); coeffs.len()];
        v[i] = field.one();
        return Ok(Isotropy::Witness { vector: v, strategy: "springer" });
    }
    let form = Form::diagonal(field.clone(), coeffs, 2)?;
    let Some(res) = field.residue_field() else {
        let plain = SearchOptions { filter: None, ..opts.clone() };
        return exhaustive_search(&form, &plain);
    };
    let mut parts: [Vec<(usize, i64, F::Elem)>; 2] = [Vec::new(), Vec::new()];
    for (i, c) in coeffs.iter().enumerate() {
        let (v, u) = field.leading(c)?;
        parts[v.rem_euclid(2) as usize].push((i, v, u));
    }
    let mut certified = None;
    for part in &parts {
        if part.len() < 2 {
            continue;
        }
        let us: Vec<F::Elem> = part.iter().map(|(_, _, u)| u.clone()).collect();
        let sub_opts = SearchOptions { budget: opts.budget, chunk: opts.chunk, filter: None };
        match springer_diag(&res, &us, &sub_opts)? {
            Isotropy::Witness { vector: w, .. } => {
                let t = field.uniformizer().expect("Laurent level has a uniformizer");
                let mut x = vec![field.zero(); coeffs.len()];
                for ((i, v, _), wj) in part.iter().zip(&w) {
                    x[*i] = field.mul(&field.embed_residue(wj), &field.pow_signed(&t, -v.div_euclid(2))?);
                }
                if field.is_zero(&form.evaluate(&x)?) {
                    return Ok(Isotropy::Witness { vector: x, strategy: "springer" });
                }
                certified.get_or_insert_with(|| "residue form has a zero; Hensel lifting gives one here".to_string());
            }
            Isotropy::Isotropic { reason } => {
                certified.get_or_insert(reason);
            }
            Isotropy::Anisotropic => {}
            Isotropy::NotFound { .. } => unreachable!("residue decisions are exact"),
        }
    }
    Ok(match certified {
        Some(reason) => Isotropy::Isotropic { reason },
        None => Isotropy::Anisotropic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChevalleyWarningReport {
    pub q: u64,
    pub degree: u32,
    pub dim: usize,
    pub hypothesis_met: bool,
    /// Affine zeros, the origin included.
    pub zero_count: Option<u64>,
    pub count_mod_char: Option<u64>,
    pub witness: Option<Vec<String>>,
    pub passed: bool,
}

/// Counts the zeros of a form in more variables than its degree and checks
/// the count is divisible by the characteristic and exceeds 1.
pub fn chevalley_warning_check<F: Field>(form: &Form<F>, budget: u64) -> Result<ChevalleyWarningReport> {
    let f = form.field();
    let q = f.cardinality().ok_or_else(|| Error::Unsupported("zero counting needs a finite field".into()))?;
    let (d, n) = (form.degree(), form.dim());
    let mut report = ChevalleyWarningReport {
        q,
        degree: d,
        dim: n,
        hypothesis_met: n > d as usize,
        zero_count: None,
        count_mod_char: None,
        witness: None,
        passed: false,
    };
    if !report.hypothesis_met {
        return Ok(report);
    }
    let points = pow_u128(q, n).unwrap_or(u128::MAX);
    if points > budget as u128 {
        return Err(Error::BudgetExceeded { needed: points, budget });
    }
    let elems: Vec<F::Elem> = (0..q).map(|i| f.element_at(i).expect("index below the field order")).collect();
    let compiled = Compiled::new(form);
    let total = points as u64;
    let chunk = 4096u64;
    let count: u64 = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|ci| {
            let mut v = vec![f.zero(); n];
            let mut hits = 0;
            for g in ci * chunk..((ci + 1) * chunk).min(total) {
                let mut k = g;
                for slot in v.iter_mut().rev() {
                    *slot = elems[(k % q) as usize].clone();
                    k /= q;
                }
                if f.is_zero(&compiled.eval(&v)) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let ch = f.characteristic();
    let witness = exhaustive_search(form, &SearchOptions::with_budget(budget))?;
    report.zero_count = Some(count);
    report.count_mod_char = Some(count % ch);
    report.witness = witness.witness().map(|w| w.iter().map(|x| f.format_elem(x)).collect());
    report.passed = count % ch == 0 && count > 1 && report.witness.is_some();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FiniteField, FqElem, LaurentField, DEFAULT_PRECISION};
    use crate::forms::{diagonal_power_form, pfister};
    use proptest::prelude::*;

    fn gf(p: u64) -> FiniteField {
        FiniteField::new(p, 1).unwrap()
    }

    fn el(f: &FiniteField, xs: &[i64]) -> Vec<FqElem> {
        xs.iter().map(|&x| f.from_int(x)).collect()
    }

    fn opts() -> SearchOptions<FqElem> {
        SearchOptions::with_budget(DEFAULT_BUDGET)
    }

    #[test]
    fn exhaustive_examples() {
        let f5 = gf(5);
        let a = Form::parse(f5.clone(), "x0^2 + 3*x1^2", None).unwrap();
        assert_eq!(exhaustive_search(&a, &opts()).unwrap(), Isotropy::Anisotropic);
        let b = Form::parse(f5.clone(), "x0^2 + x1^2", None).unwrap();
        assert_eq!(exhaustive_search(&b, &opts()).unwrap().witness().unwrap(), el(&f5, &[1, 2]).as_slice());

        let p4 = pfister(&f5, &el(&f5, &[4])).unwrap();
        let w = exhaustive_search(&p4, &opts()).unwrap();
        assert_eq!(w.witness().unwrap(), el(&f5, &[1, 2]).as_slice());
        // (2, 1) is also a zero: 4 - 4
        assert_eq!(p4.evaluate(&el(&f5, &[2, 1])).unwrap(), f5.zero());

        let f7 = gf(7);
        let c = diagonal_power_form(&f7, &el(&f7, &[3, 5]), 3).unwrap();
        assert_eq!(exhaustive_search(&c, &opts()).unwrap(), Isotropy::Anisotropic);
        let d = diagonal_power_form(&f7, &el(&f7, &[1, -1]), 3).unwrap();
        assert_eq!(exhaustive_search(&d, &opts()).unwrap().witness().unwrap(), el(&f7, &[1, 1]).as_slice());
    }

    /// Independent oracle: plain lexicographic scan over all affine vectors
    /// whose first nonzero entry is 1.
    fn brute_force_min(form: &Form<FiniteField>) -> Option<Vec<FqElem>> {
        let f = form.field();
        let q = f.order();
        let n = form.dim();
        let mut best: Option<Vec<u64>> = None;
        for g in 1..q.pow(n as u32) {
            let digits: Vec<u64> = (0..n).rev().map(|j| g / q.pow(j as u32) % q).collect();
            if digits.iter().find(|&&d| d != 0) != Some(&1) {
                continue;
            }
            let v: Vec<FqElem> = digits.iter().map(|&d| f.elem(d)).collect();
            if f.is_zero(&form.evaluate(&v).unwrap()) && best.as_ref().is_none_or(|b| digits < *b) {
                best = Some(digits);
            }
        }
        best.map(|b| b.iter().map(|&d| f.elem(d)).collect())
    }

    #[test]
    fn matches_brute_force_and_partitioning() {
        let f = gf(5);
        for text in ["x0^2 + x1^2 + x2^2", "2*x0^2 + 3*x1^2 - x2^2", "x0*x1 + x2^2", "x0^2 + 2*x1^2", "x0^3 + 2*x1^3 + 3*x2^3"] {
            let form = Form::parse(f.clone(), text, None).unwrap();
            let expected = brute_force_min(&form);
            for chunk in [1, 3, 7, 4096] {
                let o = SearchOptions { chunk, ..opts() };
                let got = exhaustive_search(&form, &o).unwrap();
                assert_eq!(got.witness().map(|w| w.to_vec()), expected, "{text} chunk {chunk}");
            }
        }
    }

    #[test]
    fn budget_and_filter() {
        let f = gf(7);
        let form = diagonal_power_form(&f, &el(&f, &[1, 1, 1, 1, 1, 1]), 2).unwrap();
        let small = SearchOptions::with_budget(100);
        assert!(matches!(exhaustive_search(&form, &small), Err(Error::BudgetExceeded { .. })));
        let b = Form::parse(f.clone(), "x0^2 + x1^2 - x2^2", None).unwrap();
        let first = exhaustive_search(&b, &opts()).unwrap();
        let filtered = SearchOptions { filter: Some(Arc::new(|v: &[FqElem]| v[0].index() != 0)), ..opts() };
        let second = exhaustive_search(&b, &filtered).unwrap();
        assert_eq!(first.witness().unwrap()[0], f.zero());
        assert_ne!(second.witness().unwrap()[0], f.zero());
    }

    #[test]
    fn springer_examples() {
        let base = gf(3);
        let f = LaurentField::new(base, &["s", "t"], DEFAULT_PRECISION).unwrap();
        let form = Form::parse(f.clone(), "x0^2 - s*x1^2 + t*x2^2 - t*s*x3^2", None).unwrap();
        assert_eq!(springer(&form, &SearchOptions::with_budget(DEFAULT_BUDGET)).unwrap(), Isotropy::Anisotropic);
        // ⟨1, -t^2⟩ has the zero (t, 1)
        let iso = Form::parse(f.clone(), "x0^2 - t^2*x1^2", None).unwrap();
        let w = springer(&iso, &SearchOptions::with_budget(DEFAULT_BUDGET)).unwrap();
        assert!(f.is_zero(&iso.evaluate(w.witness().unwrap()).unwrap()));
        // ⟨1, -(1 + t)⟩: the residue form ⟨1, -1⟩ is isotropic but the lift is not exact
        let hens = Form::parse(f.clone(), "x0^2 - (1 + t)*x1^2", None).unwrap();
        assert!(matches!(springer(&hens, &SearchOptions::with_budget(DEFAULT_BUDGET)).unwrap(), Isotropy::Isotropic { .. }));
        let cubic = Form::parse(f, "x0^3 + x1^3", None).unwrap();
        assert!(springer(&cubic, &SearchOptions::with_budget(DEFAULT_BUDGET)).is_err());
    }

    #[test]
    fn chevalley_warning_examples() {
        let f3 = gf(3);
        let r = chevalley_warning_check(&Form::parse(f3, "x0^2 + x1^2 + x2^2", None).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.zero_count, Some(9));
        assert!(r.passed);
        let f7 = gf(7);
        let r = chevalley_warning_check(&Form::parse(f7.clone(), "x0^3 + x1^3 + x2^3 + x3^3", None).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(r.passed && r.witness.is_some());
        let r = chevalley_warning_check(&Form::parse(f7, "x0^3 + x1^3", None).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(!r.hypothesis_met && r.zero_count.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn c1_diagonal_forms_are_isotropic(q in prop::sample::select(vec![2u64, 3, 5, 7]), d in 2u32..=3, extra in 1usize..=2, seed in 0u64..1000) {
            let n = (d as usize + extra).min(5);
            let f = gf(q);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs: Vec<FqElem> = (0..n).map(|_| {
                loop {
                    let c = f.random_elem(&mut rng);
                    if !f.is_zero(&c) { return c; }
                }
            }).collect();
            let form = Form::diagonal(f, &coeffs, d).unwrap();
            prop_assert!(exhaustive_search(&form, &opts()).unwrap().witness().is_some());
        }
    }
}

//! Symbol algebras `D_(a,b)` of prime degree `p`.
//!
//! Realized on the basis `x^i y^j` (index `i + j p`) with `x^p = a`,
//! `y^p = b` and `y x = ρ x y`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{check_p, primitive_p_root, Field, TowerField};
use crate::forms::{exhaustive_search, isotropy_search, randomized_search, Form, Isotropy, SearchOptions, Strategy};
use crate::linalg::rank;
use crate::powassoc::{Algebra, CheckReport, Verdict};

#[derive(Debug, Clone)]
pub struct SymbolAlgebra<F: Field> {
    p: usize,
    a: F::Elem,
    b: F::Elem,
    rho: F::Elem,
    algebra: Algebra<F>,
}

/// The generator pair of the symbol identity and what was checked.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityWitness<E> {
    /// Images of the generators of the target algebra.
    pub x_image: Vec<E>,
    pub y_image: Vec<E>,
    /// `x_image^p` and `y_image^p` as scalars.
    pub x_power: E,
    pub y_power: E,
    pub commutation: bool,
    pub isomorphism: bool,
}

impl<E> IdentityWitness<E> {
    pub fn holds(&self) -> bool {
        self.commutation && self.isomorphism
    }
}

/// Split status together with the element that proves it.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitReport<E> {
    pub verdict: Verdict,
    pub method: &'static str,
    /// Nonzero element of reduced norm zero.
    pub witness: Option<Vec<E>>,
}

impl<F: Field> SymbolAlgebra<F> {
    /// Uses the canonical primitive root of the base field.
    pub fn build(field: &F, p: u64, a: &F::Elem, b: &F::Elem) -> Result<Self>
    where
        F: TowerField,
    {
        let rho = primitive_p_root(field, p)?;
        Self::with_root(field, p, a, b, &rho.value)
    }

    pub fn with_root(field: &F, p: u64, a: &F::Elem, b: &F::Elem, rho: &F::Elem) -> Result<Self> {
        check_p(field, p)?;
        if field.is_zero(a) || field.is_zero(b) {
            return Err(Error::ZeroElement);
        }
        let is_primitive = (1..p).all(|k| field.pow(rho, k) != field.one()) && field.pow(rho, p) == field.one();
        if !is_primitive {
            return Err(Error::Invalid(format!("{} is not a primitive {p}-th root of unity", field.format_elem(rho))));
        }
        let p = p as usize;
        let d = p * p;
        let rho_pows: Vec<F::Elem> = (0..p).map(|k| field.pow(rho, k as u64)).collect();
        let mut table = vec![Vec::new(); d * d];
        for (l, j, k, i) in (0..p).flat_map(|l| (0..p).flat_map(move |j| (0..p).flat_map(move |k| (0..p).map(move |i| (l, j, k, i))))) {
            // (x^i y^j)(x^k y^l) = ρ^{jk} x^{i+k} y^{j+l}
            let mut c = rho_pows[(j * k) % p].clone();
            if i + k >= p {
                c = field.mul(&c, a);
            }
            if j + l >= p {
                c = field.mul(&c, b);
            }
            table[(i + j * p) * d + (k + l * p)].push(((i + k) % p + ((j + l) % p) * p, c));
        }
        let mut unit = vec![field.zero(); d];
        unit[0] = field.one();
        let name = format!("({}, {})_{p}", field.format_elem(a), field.format_elem(b));
        let algebra = Algebra::new(field.clone(), d, table, unit, &name)?;
        Ok(SymbolAlgebra { p, a: a.clone(), b: b.clone(), rho: rho.clone(), algebra })
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn a(&self) -> &F::Elem {
        &self.a
    }

    pub fn b(&self) -> &F::Elem {
        &self.b
    }

    pub fn rho(&self) -> &F::Elem {
        &self.rho
    }

    pub fn x(&self) -> Vec<F::Elem> {
        self.algebra.basis(1)
    }

    pub fn y(&self) -> Vec<F::Elem> {
        self.algebra.basis(self.p)
    }

    /// `x^p = a`, `y^p = b`, `y x = ρ x y` and associativity on basis triples.
    pub fn check_relations(&self) -> CheckReport {
        let alg = &self.algebra;
        let (x, y) = (self.x(), self.y());
        let p = self.p as u32;
        let failures = [
            (alg.pow(&x, p) != alg.scalar(&self.a), "x^p != a"),
            (alg.pow(&y, p) != alg.scalar(&self.b), "y^p != b"),
            (alg.mul(&y, &x) != alg.scale(&self.rho, &alg.mul(&x, &y)), "yx != rho xy"),
        ];
        if let Some((_, msg)) = failures.iter().find(|(bad, _)| *bad) {
            return CheckReport { ok: false, checked: 3, violation: Some(msg.to_string()) };
        }
        let assoc = alg.check_associative();
        CheckReport { ok: assoc.ok, checked: 3 + assoc.checked, violation: assoc.violation }
    }

    /// Reduced norm form; its degree is checked to be `p`.
    pub fn norm_form(&self) -> Result<Form<F>> {
        let form = self.algebra.norm_form()?;
        if form.degree() as usize != self.p {
            return Err(Error::IdentityFailed(format!("reduced degree {} differs from p = {}", form.degree(), self.p)));
        }
        Ok(form)
    }

    fn inverse_generator(&self, g: &[F::Elem], g_power: &F::Elem) -> Result<Vec<F::Elem>> {
        let inv = self.field().inv(g_power)?;
        Ok(self.algebra.scale(&inv, &self.algebra.pow(g, self.p as u32 - 1)))
    }

    /// `(a, b) = (-a b^{-1}, a + b)`: with `z = x + y` and `w = -x y^{-1}`,
    /// the map `X ↦ w`, `Y ↦ z` realizes `D_(-ab^{-1}, a+b) ≅ D_(a,b)`.
    pub fn identity_witness(&self) -> Result<IdentityWitness<F::Elem>> {
        let f = self.field();
        let sum = f.add(&self.a, &self.b);
        if f.is_zero(&sum) {
            return Err(Error::Hypothesis("a + b = 0".into()));
        }
        let alg = &self.algebra;
        let z = alg.add(&self.x(), &self.y());
        let w = alg.scale(&f.neg(&f.one()), &alg.mul(&self.x(), &self.inverse_generator(&self.y(), &self.b)?));
        let w_power = f.neg(&f.div(&self.a, &self.b)?);
        self.witness_for(w, z, w_power, sum)
    }

    /// `(a, b) = (a + b, -b a^{-1})` via `X ↦ x + y`, `Y ↦ -y x^{-1}`.
    pub fn second_identity_witness(&self) -> Result<IdentityWitness<F::Elem>> {
        let f = self.field();
        let sum = f.add(&self.a, &self.b);
        if f.is_zero(&sum) {
            return Err(Error::Hypothesis("a + b = 0".into()));
        }
        let alg = &self.algebra;
        let z = alg.add(&self.x(), &self.y());
        let w = alg.scale(&f.neg(&f.one()), &alg.mul(&self.y(), &self.inverse_generator(&self.x(), &self.a)?));
        let w_power = f.neg(&f.div(&self.b, &self.a)?);
        self.witness_for(z, w, sum, w_power)
    }

    fn witness_for(&self, xi: Vec<F::Elem>, yi: Vec<F::Elem>, xp: F::Elem, yp: F::Elem) -> Result<IdentityWitness<F::Elem>> {
        let alg = &self.algebra;
        let p = self.p as u32;
        if alg.pow(&xi, p) != alg.scalar(&xp) || alg.pow(&yi, p) != alg.scalar(&yp) {
            return Err(Error::IdentityFailed("generator images have the wrong p-th powers".into()));
        }
        let commutation = alg.mul(&yi, &xi) == alg.scale(&self.rho, &alg.mul(&xi, &yi));
        let target = SymbolAlgebra::with_root(self.field(), p as u64, &xp, &yp, &self.rho)?;
        let isomorphism = commutation && self.is_isomorphism(&target, &xi, &yi);
        Ok(IdentityWitness { x_image: xi, y_image: yi, x_power: xp, y_power: yp, commutation, isomorphism })
    }

    /// Checks that `X^i Y^j ↦ xi^i yi^j` is bijective and multiplicative on
    /// the basis of `source`.
    fn is_isomorphism(&self, source: &SymbolAlgebra<F>, xi: &[F::Elem], yi: &[F::Elem]) -> bool {
        let (alg, f) = (&self.algebra, self.field());
        let p = self.p;
        let images: Vec<Vec<F::Elem>> = (0..p * p)
            .map(|idx| alg.mul(&alg.pow(xi, (idx % p) as u32), &alg.pow(yi, (idx / p) as u32)))
            .collect();
        if rank(f, &images) != p * p {
            return false;
        }
        let apply = |v: &[F::Elem]| -> Vec<F::Elem> {
            v.iter().zip(&images).fold(alg.zero(), |acc, (c, img)| alg.add(&acc, &alg.scale(c, img)))
        };
        let src = source.algebra();
        (0..p * p).all(|i| {
            (0..p * p).all(|j| apply(&src.mul(&src.basis(i), &src.basis(j))) == alg.mul(&images[i], &images[j]))
        })
    }

    /// `Yes` when a zero divisor or isotropic norm vector turns up, `No`
    /// when the norm form is certified anisotropic.
    pub fn is_split(&self, strategy: &Strategy, opts: &SearchOptions<F::Elem>) -> Result<SplitReport<F::Elem>>
    where
        F: TowerField,
    {
        if let Some(w) = self.power_zero_divisor() {
            return Ok(SplitReport { verdict: Verdict::Yes, method: "zero-divisor", witness: Some(w) });
        }
        let form = self.norm_form()?;
        let outcome = isotropy_search(&form, strategy, opts)?;
        let report = match outcome {
            Isotropy::Witness { vector, strategy } => SplitReport { verdict: Verdict::Yes, method: strategy, witness: Some(vector) },
            Isotropy::Isotropic { .. } => SplitReport { verdict: Verdict::Yes, method: strategy.name(), witness: None },
            Isotropy::Anisotropic => SplitReport { verdict: Verdict::No, method: strategy.name(), witness: None },
            Isotropy::NotFound { .. } => SplitReport { verdict: Verdict::Unknown, method: strategy.name(), witness: None },
        };
        if report.verdict == Verdict::No && self.field().cardinality().is_some() {
            return Err(Error::IdentityFailed("a finite field carries a noncommutative division algebra".into()));
        }
        Ok(report)
    }

    /// Default split test: exhaustive norm search when the budget allows,
    /// randomized otherwise.
    pub fn is_split_auto(&self, opts: &SearchOptions<F::Elem>, seed: u64, trials: u64) -> Result<SplitReport<F::Elem>> {
        if let Some(w) = self.power_zero_divisor() {
            return Ok(SplitReport { verdict: Verdict::Yes, method: "zero-divisor", witness: Some(w) });
        }
        let form = self.norm_form()?;
        let outcome = match exhaustive_search(&form, opts) {
            Err(Error::BudgetExceeded { .. }) | Err(Error::Unsupported(_)) => randomized_search(&form, seed, trials, opts)?,
            other => other?,
        };
        Ok(match outcome {
            Isotropy::Witness { vector, strategy } => SplitReport { verdict: Verdict::Yes, method: strategy, witness: Some(vector) },
            Isotropy::Anisotropic => SplitReport { verdict: Verdict::No, method: "exhaustive", witness: None },
            _ => SplitReport { verdict: Verdict::Unknown, method: "randomized", witness: None },
        })
    }

    /// `x - c` when `a = c^p` for a small integer `c` (likewise for `y`).
    fn power_zero_divisor(&self) -> Option<Vec<F::Elem>> {
        let (f, alg) = (self.field(), &self.algebra);
        let p = self.p as u64;
        for (g, target) in [(self.x(), &self.a), (self.y(), &self.b)] {
            for c in [1, -1, 2, -2, 3, -3].map(|k| f.from_int(k)).into_iter().filter(|c| f.is_nonzero(c)) {
                if f.pow(&c, p) == *target {
                    return Some(alg.sub(&g, &alg.scalar(&c)));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        json!({
            "field": f.descriptor(),
            "p": self.p,
            "a": f.format_elem(&self.a),
            "b": f.format_elem(&self.b),
            "rho": f.format_elem(&self.rho),
            "dim": self.p * self.p,
            "algebra": self.algebra.to_json(),
        })
    }
}

impl<E> SplitReport<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "verdict": self.verdict,
            "method": self.method,
            "witness": self.witness.as_ref().map(|w| w.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>()),
        })
    }
}

impl<E> IdentityWitness<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        let fmt = |v: &[E]| v.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>();
        json!({
            "x_image": fmt(&self.x_image),
            "y_image": fmt(&self.y_image),
            "x_power": f.format_elem(&self.x_power),
            "y_power": f.format_elem(&self.y_power),
            "commutation": self.commutation,
            "isomorphism": self.isomorphism,
        })
    }
}

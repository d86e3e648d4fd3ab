//! Cubic norm structures `D ⊕ D ⊕ D` from the first Tits process.
//!
//! For a degree-3 symbol algebra `D` and a scalar `c ≠ 0`:
//!
//! ```text
//! N(x0, x1, x2) = N_D(x0) + c N_D(x1) + c⁻¹ N_D(x2) - T_D(x0 x1 x2)
//! (x0, x1, x2)# = (x0# - x1 x2, c⁻¹ x2# - x0 x1, c x1# - x2 x0)
//! T(x) = T_D(x0)
//! ```
//!
//! Every construction is checked against `(x#)# = N(x) x` and
//! `N(x#) = N(x)²` before it is handed out.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::forms::{randomized_search, Form, Isotropy, Provenance, SearchOptions};
use crate::poly::{MPoly, UniPoly};
use crate::powassoc::Verdict;
use crate::symbolalg::SymbolAlgebra;

pub const ALBERT_DIM: usize = 27;

#[derive(Debug, Clone)]
pub struct CubicNormStructure<F: Field> {
    d: SymbolAlgebra<F>,
    c: F::Elem,
    c_inv: F::Elem,
    /// `N_D`, `T_D`, `S_D` as polynomials in 9 coordinates.
    norm_d: MPoly<F::Elem>,
    trace_d: MPoly<F::Elem>,
    quad_d: MPoly<F::Elem>,
    norm_poly: OnceLock<MPoly<F::Elem>>,
}

/// Division status of the structure with the deciding norm zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AlbertDivision<E> {
    pub verdict: Verdict,
    pub method: &'static str,
    pub witness: Option<Vec<E>>,
}

impl<F: Field> CubicNormStructure<F> {
    pub fn build_first_tits(d: &SymbolAlgebra<F>, c: &F::Elem) -> Result<Self> {
        if d.p() != 3 {
            return Err(Error::Invalid(format!("first Tits process needs a degree-3 algebra, got p = {}", d.p())));
        }
        let f = d.field();
        let c_inv = f.inv(c).map_err(|_| Error::ZeroElement)?;
        let data = d.algebra().char_data()?;
        if data.r != 3 {
            return Err(Error::IdentityFailed(format!("reduced degree of D is {}", data.r)));
        }
        // χ_d(T) = T³ - T_D T² + S_D T - N_D
        let a = CubicNormStructure {
            d: d.clone(),
            c: c.clone(),
            c_inv,
            norm_d: data.norm.clone(),
            trace_d: data.m[2].neg(f),
            quad_d: data.m[1].clone(),
            norm_poly: OnceLock::new(),
        };
        a.self_check(8)?;
        Ok(a)
    }

    fn self_check(&self, samples: usize) -> Result<()> {
        let f = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..samples {
            let x = self.random_elem(&mut rng);
            let n = self.norm(&x);
            if self.sharp(&self.sharp(&x)) != self.scale(&n, &x) {
                return Err(Error::IdentityFailed("(x#)# != N(x) x".into()));
            }
            if self.norm(&self.sharp(&x)) != f.mul(&n, &n) {
                return Err(Error::IdentityFailed("N(x#) != N(x)^2".into()));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        self.d.field()
    }

    pub fn symbol_algebra(&self) -> &SymbolAlgebra<F> {
        &self.d
    }

    pub fn c(&self) -> &F::Elem {
        &self.c
    }

    pub fn random_elem(&self, rng: &mut ChaCha8Rng) -> Vec<F::Elem> {
        (0..ALBERT_DIM).map(|_| self.field().random_elem(rng)).collect()
    }

    pub fn one(&self) -> Vec<F::Elem> {
        let f = self.field();
        let mut v = vec![f.zero(); ALBERT_DIM];
        v[0] = f.one();
        v
    }

    fn parts<'a>(&self, x: &'a [F::Elem]) -> [&'a [F::Elem]; 3] {
        assert_eq!(x.len(), ALBERT_DIM, "elements have 27 coordinates");
        [&x[..9], &x[9..18], &x[18..]]
    }

    fn join(parts: [Vec<F::Elem>; 3]) -> Vec<F::Elem> {
        parts.concat()
    }

    pub fn add(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        x.iter().zip(y).map(|(a, b)| self.field().add(a, b)).collect()
    }

    pub fn sub(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        x.iter().zip(y).map(|(a, b)| self.field().sub(a, b)).collect()
    }

    pub fn scale(&self, c: &F::Elem, x: &[F::Elem]) -> Vec<F::Elem> {
        x.iter().map(|a| self.field().mul(c, a)).collect()
    }

    fn d_sharp(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        // x# = x² - T(x) x + S(x)
        let (alg, f) = (self.d.algebra(), self.field());
        let t = self.trace_d.eval(f, x);
        let s = self.quad_d.eval(f, x);
        alg.add(&alg.sub(&alg.mul(x, x), &alg.scale(&t, x)), &alg.scalar(&s))
    }

    pub fn norm(&self, x: &[F::Elem]) -> F::Elem {
        let f = self.field();
        let alg = self.d.algebra();
        let [x0, x1, x2] = self.parts(x);
        let prod = alg.mul(&alg.mul(x0, x1), x2);
        let mut n = self.norm_d.eval(f, x0);
        n = f.add(&n, &f.mul(&self.c, &self.norm_d.eval(f, x1)));
        n = f.add(&n, &f.mul(&self.c_inv, &self.norm_d.eval(f, x2)));
        f.sub(&n, &self.trace_d.eval(f, &prod))
    }

    /// The adjoint `x#`.
    pub fn sharp(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        let alg = self.d.algebra();
        let [x0, x1, x2] = self.parts(x);
        Self::join([
            alg.sub(&self.d_sharp(x0), &alg.mul(x1, x2)),
            alg.sub(&alg.scale(&self.c_inv, &self.d_sharp(x2)), &alg.mul(x0, x1)),
            alg.sub(&alg.scale(&self.c, &self.d_sharp(x1)), &alg.mul(x2, x0)),
        ])
    }

    /// `x × y = (x + y)# - x# - y#`.
    pub fn cross(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        self.sub(&self.sub(&self.sharp(&self.add(x, y)), &self.sharp(x)), &self.sharp(y))
    }

    pub fn trace(&self, x: &[F::Elem]) -> F::Elem {
        self.trace_d.eval(self.field(), self.parts(x)[0])
    }

    /// `S(x) = T(x#)`.
    pub fn quadratic_trace(&self, x: &[F::Elem]) -> F::Elem {
        self.trace(&self.sharp(x))
    }

    /// Bilinear trace `T(x, y) = T(x) T(y) - T(x × y)`.
    pub fn bilinear_trace(&self, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
        let f = self.field();
        f.sub(&f.mul(&self.trace(x), &self.trace(y)), &self.trace(&self.cross(x, y)))
    }

    /// `χ_x(T) = T³ - T(x) T² + S(x) T - N(x)`.
    pub fn char_poly_element(&self, x: &[F::Elem]) -> UniPoly<F::Elem> {
        let f = self.field();
        UniPoly::from_coeffs(f, vec![f.neg(&self.norm(x)), self.quadratic_trace(x), f.neg(&self.trace(x)), f.one()])
    }

    /// Powers up to 3 via Cayley–Hamilton: `x² = x# + T(x) x - S(x)` and
    /// `x³ = T(x) x² - S(x) x + N(x)`.
    pub fn power(&self, x: &[F::Elem], k: u32) -> Result<Vec<F::Elem>> {
        let (t, s) = (self.trace(x), self.quadratic_trace(x));
        let square = || self.sub(&self.add(&self.sharp(x), &self.scale(&t, x)), &self.scale(&s, &self.one()));
        Ok(match k {
            0 => self.one(),
            1 => x.to_vec(),
            2 => square(),
            3 => {
                let sq = square();
                let v = self.sub(&self.scale(&t, &sq), &self.scale(&s, x));
                self.add(&v, &self.scale(&self.norm(x), &self.one()))
            }
            _ => return Err(Error::Unsupported(format!("power {k} beyond the cubic structure"))),
        })
    }

    /// `x³` from the trace form alone: `T(x, x) x - x# × x`.
    pub fn cube_via_cross(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        self.sub(&self.scale(&self.bilinear_trace(x, x), x), &self.cross(&self.sharp(x), x))
    }

    /// `χ_x(x) = 0` with `x³` taken from the cross product.
    pub fn verify_char_identity(&self, x: &[F::Elem]) -> Result<bool> {
        let f = self.field();
        let (t, s, n) = (self.trace(x), self.quadratic_trace(x), self.norm(x));
        let mut v = self.sub(&self.cube_via_cross(x), &self.scale(&t, &self.power(x, 2)?));
        v = self.add(&v, &self.scale(&s, x));
        v = self.sub(&v, &self.scale(&n, &self.one()));
        Ok(v.iter().all(|c| f.is_zero(c)))
    }

    /// The norm as a 27-variable cubic polynomial.
    pub fn norm_poly(&self) -> &MPoly<F::Elem> {
        self.norm_poly.get_or_init(|| self.expand_norm())
    }

    /// `N(T·1 - x)` as a polynomial in `T`.
    pub fn norm_of_t_minus(&self, x: &[F::Elem]) -> UniPoly<F::Elem> {
        let f = self.field();
        let one = self.one();
        let t = UniPoly::x(f);
        let coords: Vec<UniPoly<F::Elem>> =
            one.iter().zip(x).map(|(u, c)| t.scale(f, u).sub(f, &UniPoly::constant(f, c.clone()))).collect();
        self.norm_poly().eval_uni(f, &coords)
    }

    fn expand_norm(&self) -> MPoly<F::Elem> {
        let f = self.field();
        let alg = self.d.algebra();
        let vars = |offset: u32| -> Vec<MPoly<F::Elem>> { (0..9).map(|i| MPoly::var(f, offset + i)).collect() };
        let prod = alg.mul_generic(&alg.mul_generic(&vars(0), &vars(9)), &vars(18));
        let mut trace_prod = MPoly::zero();
        for (m, coeff) in self.trace_d.terms() {
            let (var, _) = m.pairs()[0];
            trace_prod = trace_prod.add(f, &prod[var as usize].scale(f, coeff));
        }
        let mut n = self.norm_d.clone();
        n = n.add(f, &self.norm_d.shift_vars(9).scale(f, &self.c));
        n = n.add(f, &self.norm_d.shift_vars(18).scale(f, &self.c_inv));
        n.sub(f, &trace_prod)
    }

    pub fn norm_form(&self) -> Result<Form<F>> {
        let f = self.field();
        let name = format!("first Tits ({}, {}, {})", f.format_elem(self.d.a()), f.format_elem(self.d.b()), f.format_elem(&self.c));
        Ok(Form::new(f.clone(), 3, ALBERT_DIM, self.norm_poly().clone())?.with_provenance(Provenance::NormOfAlgebra(name)))
    }

    /// Norm zero among `(α0, α1, α2)·1` with `α_i` small integers.
    pub fn small_witness(&self, bound: i64) -> Option<Vec<F::Elem>> {
        let f = self.field();
        let range: Vec<i64> = (-bound..=bound).collect();
        for &a0 in &range {
            for &a1 in &range {
                for &a2 in &range {
                    let alphas = [f.from_int(a0), f.from_int(a1), f.from_int(a2)];
                    if alphas.iter().all(|a| f.is_zero(a)) {
                        continue;
                    }
                    let mut x = vec![f.zero(); ALBERT_DIM];
                    for (i, a) in alphas.into_iter().enumerate() {
                        x[9 * i] = a;
                    }
                    if f.is_zero(&self.norm(&x)) {
                        return Some(x);
                    }
                }
            }
        }
        None
    }

    /// Principally-division status through the norm: a zero means "not
    /// division"; without one the answer is `Unknown`.
    pub fn division_status(&self, opts: &SearchOptions<F::Elem>, seed: u64, trials: u64) -> Result<AlbertDivision<F::Elem>> {
        if let Some(w) = self.small_witness(1) {
            return Ok(AlbertDivision { verdict: Verdict::No, method: "small-search", witness: Some(w) });
        }
        let form = self.norm_form()?;
        Ok(match randomized_search(&form, seed, trials, opts)? {
            Isotropy::Witness { vector, .. } => AlbertDivision { verdict: Verdict::No, method: "randomized", witness: Some(vector) },
            _ => AlbertDivision { verdict: Verdict::Unknown, method: "randomized", witness: None },
        })
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        json!({
            "field": f.descriptor(),
            "a": f.format_elem(self.d.a()),
            "b": f.format_elem(self.d.b()),
            "c": f.format_elem(&self.c),
            "dim": ALBERT_DIM,
            "degree": 3,
        })
    }
}

impl<E> AlbertDivision<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "verdict": self.verdict,
            "method": self.method,
            "witness": self.witness.as_ref().map(|w| w.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>()),
        })
    }
}

//! Homogeneous forms and their isotropy.

mod isotropy;

pub use isotropy::{
    auto_search, budget_from_env, chevalley_warning_check, exhaustive_search, isotropy_search, randomized_search, springer,
    ChevalleyWarningReport, Isotropy, SearchOptions, SearchPlan, Strategy, DEFAULT_BUDGET,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::parse::{self, Target};
use crate::fields::Field;
use crate::poly::{MPoly, Monomial};

/// How a form was built. Doubled forms keep their base form and scalar so
/// the splitting checks can recover them.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance<F: Field> {
    Literal,
    Diagonal(Vec<F::Elem>),
    Pfister(Vec<F::Elem>),
    DiagonalPower { coeffs: Vec<F::Elem>, p: u32 },
    NormOfAlgebra(String),
    Doubled { base: Box<Form<F>>, a: F::Elem },
    Sum(Box<Form<F>>, Box<Form<F>>),
    Scaled { c: F::Elem, base: Box<Form<F>> },
}

impl<F: Field> Provenance<F> {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Literal => "literal",
            Provenance::Diagonal(_) => "diagonal",
            Provenance::Pfister(_) => "pfister",
            Provenance::DiagonalPower { .. } => "diagonal-power",
            Provenance::NormOfAlgebra(_) => "norm-of-algebra",
            Provenance::Doubled { .. } => "doubled",
            Provenance::Sum(..) => "sum",
            Provenance::Scaled { .. } => "scaled",
        }
    }
}

/// A homogeneous polynomial of fixed degree in `dim` variables `x0..`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<F: Field> {
    field: F,
    degree: u32,
    dim: usize,
    poly: MPoly<F::Elem>,
    provenance: Provenance<F>,
}

impl<F: Field> Form<F> {
    pub fn new(field: F, degree: u32, dim: usize, poly: MPoly<F::Elem>) -> Result<Self> {
        if degree == 0 || dim == 0 {
            return Err(Error::Invalid("forms need degree and dimension at least 1".into()));
        }
        if !poly.is_homogeneous(degree) {
            return Err(Error::Invalid(format!("polynomial is not homogeneous of degree {degree}")));
        }
        if poly.width() > dim {
            return Err(Error::DimensionMismatch { expected: dim, got: poly.width() });
        }
        Ok(Form { field, degree, dim, poly, provenance: Provenance::Literal })
    }

    pub fn with_provenance(mut self, provenance: Provenance<F>) -> Self {
        self.provenance = provenance;
        self
    }

    /// Parses text such as `3*x0^3 + 5*x1^3`. The degree is read off the
    /// terms; `dim` defaults to one more than the largest variable index.
    pub fn parse(field: F, text: &str, dim: Option<usize>) -> Result<Self> {
        let expr = parse::parse_expr(text)?;
        let poly = parse::eval(&PolyTarget(&field), &expr)?;
        let degree = poly.degree().ok_or_else(|| Error::Invalid("the zero polynomial is not a form".into()))?;
        let dim = dim.unwrap_or_else(|| poly.width().max(1));
        Self::new(field, degree, dim, poly)
    }

    /// Diagonal form `Σ c_i x_i^degree`.
    pub fn diagonal(field: F, coeffs: &[F::Elem], degree: u32) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a diagonal form needs at least one coefficient".into()));
        }
        let poly = MPoly::from_terms(
            &field,
            coeffs.iter().enumerate().map(|(i, c)| (Monomial::from_pairs(vec![(i as u32, degree)]), c.clone())),
        );
        Ok(Self::new(field, degree, coeffs.len(), poly)?.with_provenance(Provenance::Diagonal(coeffs.to_vec())))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn poly(&self) -> &MPoly<F::Elem> {
        &self.poly
    }

    pub fn provenance(&self) -> &Provenance<F> {
        &self.provenance
    }

    pub fn evaluate(&self, v: &[F::Elem]) -> Result<F::Elem> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self.poly.eval(&self.field, v))
    }

    pub fn direct_sum(&self, other: &Form<F>) -> Result<Form<F>> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let poly = self.poly.add(&self.field, &other.poly.shift_vars(self.dim as u32));
        Ok(Form::new(self.field.clone(), self.degree, self.dim + other.dim, poly)?
            .with_provenance(Provenance::Sum(Box::new(self.clone()), Box::new(other.clone()))))
    }

    pub fn scale(&self, c: &F::Elem) -> Result<Form<F>> {
        if !self.field.is_nonzero(c) {
            return Err(Error::ZeroElement);
        }
        let poly = self.poly.scale(&self.field, c);
        Ok(Form::new(self.field.clone(), self.degree, self.dim, poly)?
            .with_provenance(Provenance::Scaled { c: c.clone(), base: Box::new(self.clone()) }))
    }

    /// `N ⊕ (-a)·N` on `V ⊕ V`.
    pub fn norm_double(&self, a: &F::Elem) -> Result<Form<F>> {
        let neg = self.scale(&self.field.neg(a))?;
        let sum = self.direct_sum(&neg)?;
        Ok(sum.with_provenance(Provenance::Doubled { base: Box::new(self.clone()), a: a.clone() }))
    }

    /// Coefficients when the form is `Σ c_i x_i^d` (absent variables give 0).
    pub fn diagonal_coeffs(&self) -> Option<Vec<F::Elem>> {
        let mut out = vec![self.field.zero(); self.dim];
        for (m, c) in self.poly.terms() {
            match m.pairs() {
                [(v, e)] if *e == self.degree => out[*v as usize] = c.clone(),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.poly.is_homogeneous(self.degree)
    }

    /// Text form with variables `x0, x1, ...`.
    pub fn format(&self) -> String {
        self.poly.format(&self.field, "x")
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .poly
            .terms()
            .map(|(m, c)| json!({"exps": m.to_dense(self.dim), "coeff": self.field.format_elem(c)}))
            .collect();
        json!({
            "degree": self.degree,
            "dim": self.dim,
            "field": self.field.descriptor(),
            "terms": terms,
        })
    }

    pub fn from_json(field: F, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("form JSON: {what}"));
        if let Some(desc) = value.get("field").and_then(Value::as_str) {
            if desc.replace(' ', "") != field.descriptor() {
                return Err(Error::FieldMismatch);
            }
        }
        let degree = value.get("degree").and_then(Value::as_u64).ok_or_else(|| bad("missing degree"))? as u32;
        let dim = value.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing dim"))? as usize;
        let mut poly = MPoly::zero();
        for t in value.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let exps: Vec<u32> = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without exps"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("non-integer exponent")))
                .collect::<Result<_>>()?;
            if exps.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: exps.len() });
            }
            let coeff = match t.get("coeff") {
                Some(Value::String(s)) => field.parse_elem(s)?,
                Some(Value::Number(n)) => field.from_int(n.as_i64().ok_or_else(|| bad("coefficient out of range"))?),
                _ => return Err(bad("term without coeff")),
            };
            poly.add_term(&field, Monomial::from_dense(&exps), coeff);
        }
        Self::new(field, degree, dim, poly)
    }
}

/// ⟨⟨a_1,…,a_n⟩⟩: the diagonal form whose coefficient at index `k` is
/// `∏ (-a_i)` over the bits `i` set in `k`.
pub fn pfister<F: Field>(field: &F, slots: &[F::Elem]) -> Result<Form<F>> {
    if field.characteristic() == 2 {
        return Err(Error::Unsupported("Pfister forms need characteristic other than 2".into()));
    }
    if slots.iter().any(|a| !field.is_nonzero(a)) {
        return Err(Error::ZeroElement);
    }
    if slots.len() > 20 {
        return Err(Error::Invalid("Pfister form too large".into()));
    }
    let negs: Vec<F::Elem> = slots.iter().map(|a| field.neg(a)).collect();
    let coeffs: Vec<F::Elem> = (0..1usize << slots.len())
        .map(|k| {
            negs.iter()
                .enumerate()
                .filter(|(i, _)| k >> i & 1 == 1)
                .fold(field.one(), |acc, (_, c)| field.mul(&acc, c))
        })
        .collect();
    Ok(Form::diagonal(field.clone(), &coeffs, 2)?.with_provenance(Provenance::Pfister(slots.to_vec())))
}

/// `a_1 x_1^p + … + a_n x_n^p`.
pub fn diagonal_power_form<F: Field>(field: &F, coeffs: &[F::Elem], p: u32) -> Result<Form<F>> {
    if coeffs.iter().any(|a| !field.is_nonzero(a)) {
        return Err(Error::ZeroElement);
    }
    Ok(Form::diagonal(field.clone(), coeffs, p)?
        .with_provenance(Provenance::DiagonalPower { coeffs: coeffs.to_vec(), p }))
}

struct PolyTarget<'a, F>(&'a F);

impl<F: Field> Target for PolyTarget<'_, F> {
    type V = MPoly<F::Elem>;

    fn int(&self, n: i64) -> Result<Self::V> {
        Ok(MPoly::constant(self.0, self.0.from_int(n)))
    }

    fn ident(&self, name: &str) -> Result<Self::V> {
        if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<u32>().ok()) {
            return Ok(MPoly::var(self.0, idx));
        }
        let c = self
            .0
            .ident(name)
            .ok_or_else(|| Error::Parse(format!("unknown identifier {name:?} (form variables are x0, x1, ...)")))?;
        Ok(MPoly::constant(self.0, c))
    }

    fn vector(&self, c: &[i64]) -> Result<Self::V> {
        let e = self
            .0
            .from_coeff_vector(c)
            .ok_or_else(|| Error::Parse(format!("coefficient vector {c:?} does not fit {}", self.0.descriptor())))?;
        Ok(MPoly::constant(self.0, e))
    }

    fn big_o(&self, var: &str, n: i64) -> Result<Self::V> {
        Ok(MPoly::constant(self.0, self.0.cap_precision(self.0.zero(), var, n)?))
    }

    fn cap(&self, v: Self::V, var: &str, n: i64) -> Result<Self::V> {
        let terms: Vec<_> = v
            .terms()
            .map(|(m, c)| Ok((m.clone(), self.0.cap_precision(c.clone(), var, n)?)))
            .collect::<Result<_>>()?;
        Ok(MPoly::from_terms(self.0, terms))
    }

    fn zero(&self) -> Self::V {
        MPoly::zero()
    }

    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a.add(self.0, b)
    }

    fn neg(&self, a: &Self::V) -> Self::V {
        a.neg(self.0)
    }

    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a.mul(self.0, b)
    }

    fn pow(&self, a: &Self::V, e: i64) -> Result<Self::V> {
        if e >= 0 {
            return Ok(a.pow(self.0, e as u32));
        }
        // negative powers only make sense for constants
        match a.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if m.degree() == 0 => Ok(MPoly::constant(self.0, self.0.pow_signed(c, e)?)),
            _ => Err(Error::Parse("negative power of a form variable".into())),
        }
    }
}

//! Finite-dimensional unital algebras given by structure constants.

mod charpoly;
mod division;

pub use charpoly::{generic_reduced_char, ReducedCharData};
pub use division::{is_division_exhaustive, is_principally_division, minimal_polynomial, principally_division_by_enumeration, DivisionReport};

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::forms::{Form, Provenance};
use crate::linalg::Matrix;
use crate::poly::{MPoly, UniPoly};

/// Three-valued answer of a decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Unital algebra with `e_i e_j = Σ_k c_ijk e_k`.
#[derive(Clone)]
pub struct Algebra<F: Field> {
    field: F,
    dim: usize,
    name: String,
    /// Nonzero `(k, c_ijk)` pairs at index `i * dim + j`.
    table: Vec<Vec<(usize, F::Elem)>>,
    unit: Vec<F::Elem>,
    char_data: OnceLock<Result<Arc<ReducedCharData<F::Elem>>>>,
}

impl<F: Field> fmt::Debug for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dim {}, over {})", self.name, self.dim, self.field.descriptor())
    }
}

/// Outcome of a structural check; `violation` names the first failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub checked: usize,
    pub violation: Option<String>,
}

impl CheckReport {
    fn pass(checked: usize) -> Self {
        CheckReport { ok: true, checked, violation: None }
    }

    fn fail(checked: usize, msg: String) -> Self {
        CheckReport { ok: false, checked, violation: Some(msg) }
    }
}

impl<F: Field> Algebra<F> {
    /// `table[i * dim + j]` lists `(k, c_ijk)`; zero entries are dropped.
    pub fn new(field: F, dim: usize, table: Vec<Vec<(usize, F::Elem)>>, unit: Vec<F::Elem>, name: &str) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("algebra of dimension 0".into()));
        }
        if table.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: table.len() });
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: unit.len() });
        }
        let mut clean = Vec::with_capacity(table.len());
        for entry in table {
            let mut row: Vec<(usize, F::Elem)> = Vec::new();
            for (k, c) in entry {
                if k >= dim {
                    return Err(Error::Invalid(format!("basis index {k} out of range")));
                }
                match row.iter_mut().find(|(kk, _)| *kk == k) {
                    Some(slot) => slot.1 = field.add(&slot.1, &c),
                    None => row.push((k, c)),
                }
            }
            row.retain(|(_, c)| !field.is_zero(c));
            row.sort_by_key(|(k, _)| *k);
            clean.push(row);
        }
        Ok(Algebra { field, dim, name: name.to_string(), table: clean, unit, char_data: OnceLock::new() })
    }

    /// Full matrix algebra M_n(F) with basis `e_ij` at index `i * n + j`.
    pub fn matrix_algebra(field: F, n: usize) -> Result<Self> {
        let d = n * n;
        let mut table = vec![Vec::new(); d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[(i * n + j) * d + (j * n + l)].push((i * n + l, field.one()));
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        for i in 0..n {
            unit[i * n + i] = field.one();
        }
        Self::new(field, d, table, unit, &format!("M_{n}"))
    }

    /// `F[x]/(x^n - a)` with basis `1, x, …, x^(n-1)`.
    pub fn kummer(field: F, n: usize, a: &F::Elem) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                let s = i + j;
                table[i * n + j].push(if s < n { (s, field.one()) } else { (s - n, a.clone()) });
            }
        }
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        let name = format!("F[x]/(x^{n} - {})", field.format_elem(a));
        Self::new(field, n, table, unit, &name)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &[F::Elem] {
        &self.unit
    }

    pub fn structure(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        &self.table[i * self.dim + j]
    }

    /// Returns a copy with `c_ijk` replaced.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: F::Elem) -> Result<Self> {
        let mut table = self.table.clone();
        let entry = &mut table[i * self.dim + j];
        entry.retain(|(kk, _)| *kk != k);
        entry.push((k, c));
        Self::new(self.field.clone(), self.dim, table, self.unit.clone(), &format!("{} (modified)", self.name))
    }

    pub fn basis(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn zero(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim]
    }

    pub fn scalar(&self, c: &F::Elem) -> Vec<F::Elem> {
        self.scale(c, &self.unit)
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.sub(x, y)).collect()
    }

    pub fn scale(&self, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().map(|x| self.field.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let xy = f.mul(x, y);
                for (k, c) in &self.table[i * self.dim + j] {
                    out[*k] = f.add(&out[*k], &f.mul(&xy, c));
                }
            }
        }
        out
    }

    /// `a^k` by repeated right multiplication.
    pub fn pow(&self, a: &[F::Elem], k: u32) -> Vec<F::Elem> {
        let mut acc = self.unit.clone();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn is_zero_elem(&self, a: &[F::Elem]) -> bool {
        a.iter().all(|x| self.field.is_zero(x))
    }

    /// Product of elements with polynomial coordinates.
    pub(crate) fn mul_generic(&self, a: &[MPoly<F::Elem>], b: &[MPoly<F::Elem>]) -> Vec<MPoly<F::Elem>> {
        let f = &self.field;
        let mut out = vec![MPoly::zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() || self.table[i * self.dim + j].is_empty() {
                    continue;
                }
                let xy = x.mul(f, y);
                for (k, c) in &self.table[i * self.dim + j] {
                    out[*k] = out[*k].add(f, &xy.scale(f, c));
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ a x` in the standard basis (columns are images).
    pub fn left_mul_matrix(&self, a: &[F::Elem]) -> Matrix<F::Elem> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect();
        transpose(&cols)
    }

    pub fn right_mul_matrix(&self, a: &[F::Elem]) -> Matrix<F::Elem> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim).map(|j| self.mul(&self.basis(j), a)).collect();
        transpose(&cols)
    }

    pub fn check_unit(&self) -> CheckReport {
        for i in 0..self.dim {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return CheckReport::fail(i + 1, format!("unit does not fix e_{i}"));
            }
        }
        CheckReport::pass(self.dim)
    }

    pub fn check_associative(&self) -> CheckReport {
        let mut checked = 0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul(&self.basis(i), &self.basis(j));
                for k in 0..self.dim {
                    checked += 1;
                    let lhs = self.mul(&ij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), &self.mul(&self.basis(j), &self.basis(k)));
                    if lhs != rhs {
                        return CheckReport::fail(checked, format!("(e_{i} e_{j}) e_{k} != e_{i} (e_{j} e_{k})"));
                    }
                }
            }
        }
        CheckReport::pass(checked)
    }

    /// Samples `a` and checks `(a^i a^j) a^k = a^i (a^j a^k)` for
    /// `i + j + k ≤ max_exponent`.
    pub fn check_power_associative(&self, samples: usize, max_exponent: u32, seed: u64) -> CheckReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        for s in 0..samples {
            let a: Vec<F::Elem> = (0..self.dim).map(|_| self.field.random_elem(&mut rng)).collect();
            let powers: Vec<Vec<F::Elem>> = (0..=max_exponent).map(|k| self.pow(&a, k)).collect();
            for i in 1..=max_exponent {
                for j in 1..=max_exponent - i {
                    for k in 1..=max_exponent.saturating_sub(i + j) {
                        checked += 1;
                        let (pi, pj, pk) = (&powers[i as usize], &powers[j as usize], &powers[k as usize]);
                        let lhs = self.mul(&self.mul(pi, pj), pk);
                        let rhs = self.mul(pi, &self.mul(pj, pk));
                        if lhs != rhs {
                            return CheckReport::fail(checked, format!("sample {s}: associator {{a^{i}, a^{j}, a^{k}}} is nonzero"));
                        }
                    }
                }
            }
        }
        CheckReport::pass(checked)
    }

    /// Generic reduced characteristic data, computed once.
    pub fn char_data(&self) -> Result<Arc<ReducedCharData<F::Elem>>> {
        self.char_data.get_or_init(|| generic_reduced_char(self).map(Arc::new)).clone()
    }

    pub fn degree(&self) -> Result<usize> {
        Ok(self.char_data()?.r)
    }

    /// `N_A(a) = (-1)^r m_0(a)`, so that `N_A(1) = 1` and `N_A = det` on
    /// matrix algebras.
    pub fn reduced_norm(&self, a: &[F::Elem]) -> Result<F::Elem> {
        let d = self.char_data()?;
        Ok(d.norm.eval(&self.field, a))
    }

    pub fn norm_form(&self) -> Result<Form<F>> {
        let d = self.char_data()?;
        Ok(Form::new(self.field.clone(), d.r as u32, self.dim, d.norm.clone())?
            .with_provenance(Provenance::NormOfAlgebra(self.name.clone())))
    }

    /// `χ_a(T) = m_0(a) + m_1(a) T + … + T^r`.
    pub fn reduced_char_poly(&self, a: &[F::Elem]) -> Result<UniPoly<F::Elem>> {
        let d = self.char_data()?;
        let mut coeffs: Vec<F::Elem> = d.m.iter().map(|m| m.eval(&self.field, a)).collect();
        coeffs.push(self.field.one());
        Ok(UniPoly::from_coeffs(&self.field, coeffs))
    }

    /// `m_1(a) + m_2(a) a + … + a^(r-1)`.
    pub fn adjunct(&self, a: &[F::Elem]) -> Result<Vec<F::Elem>> {
        Ok(charpoly::adjunct_from(self, &*self.char_data()?, a))
    }

    /// Evaluates a univariate polynomial at an algebra element.
    pub fn eval_poly(&self, p: &UniPoly<F::Elem>, a: &[F::Elem]) -> Vec<F::Elem> {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, a), &self.scalar(c));
        }
        acc
    }

    /// `N_A(T·1 - a)` as a polynomial in `T`.
    pub fn norm_of_t_minus(&self, a: &[F::Elem]) -> Result<UniPoly<F::Elem>> {
        let d = self.char_data()?;
        let f = &self.field;
        let t = UniPoly::x(f);
        let coords: Vec<UniPoly<F::Elem>> = self
            .unit
            .iter()
            .zip(a)
            .map(|(u, x)| t.scale(f, u).sub(f, &UniPoly::constant(f, x.clone())))
            .collect();
        Ok(d.norm.eval_uni(f, &coords))
    }

    /// Structure constants as `{dim, field, unit, table}`.
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let table: Vec<Value> = self
            .table
            .iter()
            .map(|entry| Value::Array(entry.iter().map(|(k, c)| json!([k, f.format_elem(c)])).collect()))
            .collect();
        json!({
            "dim": self.dim,
            "field": f.descriptor(),
            "unit": self.unit.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>(),
            "table": table,
        })
    }

    pub fn from_json(field: F, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("algebra JSON: {what}"));
        let elem = |v: &Value| -> Result<F::Elem> {
            match v {
                Value::String(s) => field.parse_elem(s),
                Value::Number(n) => Ok(field.from_int(n.as_i64().ok_or_else(|| bad("coefficient out of range"))?)),
                _ => Err(bad("coefficient must be a string or integer")),
            }
        };
        if let Some(desc) = value.get("field").and_then(Value::as_str) {
            if desc.replace(' ', "") != field.descriptor() {
                return Err(Error::FieldMismatch);
            }
        }
        let dim = value.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing dim"))? as usize;
        let unit = value
            .get("unit")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing unit"))?
            .iter()
            .map(&elem)
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::new();
        for entry in value.get("table").and_then(Value::as_array).ok_or_else(|| bad("missing table"))? {
            let mut row = Vec::new();
            for pair in entry.as_array().ok_or_else(|| bad("table entry must be a list"))? {
                let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("expected [k, c] pairs"))?;
                let k = pair[0].as_u64().ok_or_else(|| bad("basis index must be an integer"))? as usize;
                row.push((k, elem(&pair[1])?));
            }
            table.push(row);
        }
        Self::new(field.clone(), dim, table, unit, "imported")
    }
}

fn transpose<E: Clone>(cols: &[Vec<E>]) -> Matrix<E> {
    let n = cols.first().map_or(0, Vec::len);
    (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FiniteField, FqElem};
    use crate::linalg::det;

    fn gf(p: u64) -> FiniteField {
        FiniteField::new(p, 1).unwrap()
    }

    fn el(f: &FiniteField, xs: &[i64]) -> Vec<FqElem> {
        xs.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn structural_checks() {
        let f = gf(5);
        let m2 = Algebra::matrix_algebra(f.clone(), 2).unwrap();
        assert!(m2.check_unit().ok);
        assert!(m2.check_associative().ok);
        assert!(m2.check_power_associative(10, 6, 1).ok);
        let bad = m2.with_constant(1, 2, 0, f.from_int(2)).unwrap();
        let report = bad.check_associative();
        assert!(!report.ok);
        assert!(report.violation.unwrap().contains("e_"));
    }

    #[test]
    fn matrix_norm_is_determinant() {
        let f = gf(5);
        let m2 = Algebra::matrix_algebra(f.clone(), 2).unwrap();
        let a = el(&f, &[1, 2, 3, 4]);
        assert_eq!(m2.reduced_norm(&a).unwrap(), f.from_int(3));
        assert_eq!(m2.reduced_norm(m2.unit()).unwrap(), f.one());
        let d = m2.char_data().unwrap();
        assert_eq!(d.r, 2);
        assert_eq!(d.m[1].format(&f, "t"), "4*t0 + 4*t3");
        assert_eq!(d.m[0].format(&f, "t"), "t0*t3 + 4*t1*t2");
        let chi = m2.reduced_char_poly(&a).unwrap();
        assert_eq!(chi.format(&f, "T"), "T^2 + 3");
        assert!(m2.is_zero_elem(&m2.eval_poly(&chi, &a)));
        let rows = vec![a[0..2].to_vec(), a[2..4].to_vec()];
        assert_eq!(det(&f, &rows), m2.reduced_norm(&a).unwrap());
    }

    #[test]
    fn quadratic_extension() {
        let f = gf(7);
        let k = Algebra::kummer(f.clone(), 2, &f.from_int(3)).unwrap();
        let d = k.char_data().unwrap();
        assert_eq!(d.r, 2);
        // m_0(u, v) = u^2 - 3 v^2
        assert_eq!(d.m[0].format(&f, "t"), "t0^2 + 4*t1^2");
        let x = k.basis(1);
        let prod = k.mul(&x, &k.adjunct(&x).unwrap());
        let n = k.reduced_norm(&x).unwrap();
        assert_eq!(n, f.from_int(-3));
        assert_eq!(prod, k.scalar(&f.mul(&f.from_int(d.sigma as i64), &n)));
        assert_eq!(k.norm_of_t_minus(&x).unwrap(), k.reduced_char_poly(&x).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = gf(5);
        let m2 = Algebra::matrix_algebra(f.clone(), 2).unwrap();
        let j = m2.to_json();
        assert_eq!(j["table"].as_array().unwrap().len(), 16);
        let back = Algebra::from_json(f.clone(), &j).unwrap();
        let a = el(&f, &[1, 2, 3, 4]);
        let b = el(&f, &[0, 1, 4, 2]);
        assert_eq!(back.mul(&a, &b), m2.mul(&a, &b));
    }
}

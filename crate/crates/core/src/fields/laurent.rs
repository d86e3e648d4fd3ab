use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{check_p, Certainty, Field, FiniteField, FqElem, TowerField};
use crate::error::{Error, Result};

/// Default number of retained terms for inexact series operations.
pub const DEFAULT_PRECISION: i64 = 16;

/// Iterated Laurent series field F_q((t_1))…((t_m)).
///
/// `vars[0]` is the innermost variable. The field at `level` j uses
/// `vars[..j]`; level 0 is the base field itself.
#[derive(Clone)]
pub struct LaurentField {
    base: FiniteField,
    vars: Arc<Vec<String>>,
    level: usize,
    precision: i64,
}

/// Element of a [`LaurentField`].
///
/// Level 0 elements are `Const`; above that every element is a `Series`
/// whose coefficients live one level down.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LaurentElem {
    Const(FqElem),
    Series(Series),
}

/// `Σ coeffs[i] t^(valuation + i) + O(t^prec)`.
///
/// Normal form: the first coefficient is certainly nonzero, trailing exact
/// zeros are dropped, and an empty series has `valuation == prec` (or 0 when
/// exact). `prec == None` means the series is an exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Series {
    pub valuation: i64,
    pub coeffs: Vec<LaurentElem>,
    pub prec: Option<i64>,
}

impl Series {
    fn end(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    fn coeff(&self, e: i64) -> Option<&LaurentElem> {
        if e < self.valuation {
            return None;
        }
        self.coeffs.get((e - self.valuation) as usize)
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl fmt::Debug for LaurentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentField({}, prec {})", self.descriptor(), self.precision)
    }
}

impl PartialEq for LaurentField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.level == other.level
            && self.precision == other.precision
            && self.vars[..self.level] == other.vars[..other.level]
    }
}

impl LaurentField {
    /// `vars` lists the Laurent variables from innermost to outermost.
    pub fn new(base: FiniteField, vars: &[&str], precision: i64) -> Result<Self> {
        if precision <= 0 {
            return Err(Error::Invalid("precision must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in vars {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || v.starts_with('x') || *v == "O" || !seen.insert(*v) {
                return Err(Error::Invalid(format!("bad Laurent variable name {v:?}")));
            }
        }
        Ok(LaurentField {
            base,
            vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()),
            level: vars.len(),
            precision,
        })
    }

    pub fn with_precision(&self, precision: i64) -> Result<Self> {
        if precision <= 0 {
            return Err(Error::Invalid("precision must be positive".into()));
        }
        Ok(LaurentField { precision, ..self.clone() })
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn vars(&self) -> &[String] {
        &self.vars[..self.level]
    }

    /// Field at a lower level of the same tower.
    pub fn at_level(&self, level: usize) -> LaurentField {
        assert!(level <= self.level);
        LaurentField { level, ..self.clone() }
    }

    /// The Laurent variable `vars[j]` as an element of this field.
    pub fn var(&self, j: usize) -> Option<LaurentElem> {
        (j < self.level).then(|| self.var_at(self.level, j))
    }

    fn var_at(&self, level: usize, j: usize) -> LaurentElem {
        if j + 1 == level {
            LaurentElem::Series(Series { valuation: 1, coeffs: vec![self.one_at(level - 1)], prec: None })
        } else {
            self.constant_at(level, self.var_at(level - 1, j))
        }
    }

    fn zero_at(&self, level: usize) -> LaurentElem {
        if level == 0 {
            LaurentElem::Const(FqElem(0))
        } else {
            LaurentElem::Series(Series { valuation: 0, coeffs: Vec::new(), prec: None })
        }
    }

    fn one_at(&self, level: usize) -> LaurentElem {
        self.base_at(level, FqElem(1))
    }

    fn base_at(&self, level: usize, c: FqElem) -> LaurentElem {
        if level == 0 {
            LaurentElem::Const(c)
        } else {
            self.constant_at(level, self.base_at(level - 1, c))
        }
    }

    fn constant_at(&self, level: usize, c: LaurentElem) -> LaurentElem {
        self.normalize(level, 0, vec![c], None)
    }

    fn konst(a: &LaurentElem) -> FqElem {
        match a {
            LaurentElem::Const(c) => *c,
            LaurentElem::Series(_) => panic!("series element where a base field element was expected"),
        }
    }

    fn series(a: &LaurentElem) -> &Series {
        match a {
            LaurentElem::Series(s) => s,
            LaurentElem::Const(_) => panic!("base field element where a series was expected"),
        }
    }

    fn is_zero_at(level: usize, a: &LaurentElem) -> bool {
        if level == 0 {
            return Self::konst(a).0 == 0;
        }
        let s = Self::series(a);
        s.coeffs.is_empty() && s.prec.is_none()
    }

    fn is_nonzero_at(level: usize, a: &LaurentElem) -> bool {
        if level == 0 {
            return Self::konst(a).0 != 0;
        }
        !Self::series(a).coeffs.is_empty()
    }

    /// True when no truncation occurred anywhere in the element.
    pub fn is_exact(&self, a: &LaurentElem) -> bool {
        match a {
            LaurentElem::Const(_) => true,
            LaurentElem::Series(s) => s.prec.is_none() && s.coeffs.iter().all(|c| self.is_exact(c)),
        }
    }

    /// Outer valuation, `None` for (exact or inexact) zero.
    pub fn valuation(&self, a: &LaurentElem) -> Option<i64> {
        match a {
            LaurentElem::Series(s) if !s.coeffs.is_empty() => Some(s.valuation),
            LaurentElem::Const(c) if c.0 != 0 => Some(0),
            _ => None,
        }
    }

    /// Absolute precision in the outer variable, `None` when exact there.
    pub fn abs_precision(&self, a: &LaurentElem) -> Option<i64> {
        match a {
            LaurentElem::Series(s) => s.prec,
            LaurentElem::Const(_) => None,
        }
    }

    fn normalize(&self, level: usize, mut val: i64, mut coeffs: Vec<LaurentElem>, mut prec: Option<i64>) -> LaurentElem {
        debug_assert!(level > 0);
        if let Some(p) = prec {
            let keep = (p - val).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        let mut start = 0;
        while start < coeffs.len() {
            let c = &coeffs[start];
            if Self::is_zero_at(level - 1, c) {
                start += 1;
            } else if Self::is_nonzero_at(level - 1, c) {
                break;
            } else {
                // undetermined leading coefficient: nothing from here on is known
                let e = val + start as i64;
                prec = Some(prec.map_or(e, |p| p.min(e)));
                coeffs.truncate(start);
                break;
            }
        }
        coeffs.drain(..start);
        val += start as i64;
        while coeffs.last().is_some_and(|c| Self::is_zero_at(level - 1, c)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            val = prec.unwrap_or(0);
        }
        LaurentElem::Series(Series { valuation: val, coeffs, prec })
    }

    fn add_at(&self, level: usize, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        if level == 0 {
            return LaurentElem::Const(self.base.add(&Self::konst(a), &Self::konst(b)));
        }
        let (sa, sb) = (Self::series(a), Self::series(b));
        let prec = min_prec(sa.prec, sb.prec);
        let lo = sa.valuation.min(sb.valuation);
        let mut hi = sa.end().max(sb.end());
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let zero = self.zero_at(level - 1);
        let coeffs = (lo..hi.max(lo))
            .map(|e| {
                let x = sa.coeff(e).unwrap_or(&zero);
                let y = sb.coeff(e).unwrap_or(&zero);
                self.add_at(level - 1, x, y)
            })
            .collect();
        self.normalize(level, lo, coeffs, prec)
    }

    fn neg_at(&self, level: usize, a: &LaurentElem) -> LaurentElem {
        if level == 0 {
            return LaurentElem::Const(self.base.neg(&Self::konst(a)));
        }
        let s = Self::series(a);
        LaurentElem::Series(Series {
            valuation: s.valuation,
            coeffs: s.coeffs.iter().map(|c| self.neg_at(level - 1, c)).collect(),
            prec: s.prec,
        })
    }

    fn mul_at(&self, level: usize, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        if level == 0 {
            return LaurentElem::Const(self.base.mul(&Self::konst(a), &Self::konst(b)));
        }
        if Self::is_zero_at(level, a) || Self::is_zero_at(level, b) {
            return self.zero_at(level);
        }
        let (sa, sb) = (Self::series(a), Self::series(b));
        // (A + O(t^pa))(B + O(t^pb)) = AB + O(t^min(pa + v(B), pb + v(A)))
        let prec = min_prec(sa.prec.map(|p| p + sb.valuation), sb.prec.map(|p| p + sa.valuation));
        let lo = sa.valuation + sb.valuation;
        if sa.coeffs.is_empty() || sb.coeffs.is_empty() {
            return self.normalize(level, lo, Vec::new(), prec);
        }
        let mut len = sa.coeffs.len() + sb.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - lo).max(0) as usize);
        }
        let mut out = vec![self.zero_at(level - 1); len];
        for (i, x) in sa.coeffs.iter().enumerate().take(len) {
            if Self::is_zero_at(level - 1, x) {
                continue;
            }
            for (j, y) in sb.coeffs.iter().enumerate().take(len - i) {
                let prod = self.mul_at(level - 1, x, y);
                out[i + j] = self.add_at(level - 1, &out[i + j], &prod);
            }
        }
        self.normalize(level, lo, out, prec)
    }

    fn inv_at(&self, level: usize, a: &LaurentElem) -> Result<LaurentElem> {
        if level == 0 {
            return Ok(LaurentElem::Const(self.base.inv(&Self::konst(a))?));
        }
        let s = Self::series(a);
        if s.coeffs.is_empty() {
            return Err(if s.prec.is_none() {
                Error::ZeroElement
            } else {
                Error::Precision("cannot invert an element known only to be O(t^n)".into())
            });
        }
        let c0inv = self.inv_at(level - 1, &s.coeffs[0])?;
        let v = s.valuation;
        if s.coeffs.len() == 1 && s.prec.is_none() {
            return Ok(self.normalize(level, -v, vec![c0inv], None));
        }
        let r = s.prec.map_or(self.precision, |p| (p - v).min(self.precision));
        let mut b: Vec<LaurentElem> = Vec::with_capacity(r as usize);
        b.push(c0inv.clone());
        for n in 1..r as usize {
            let mut acc = self.zero_at(level - 1);
            for k in 1..=n.min(s.coeffs.len() - 1) {
                let t = self.mul_at(level - 1, &s.coeffs[k], &b[n - k]);
                acc = self.add_at(level - 1, &acc, &t);
            }
            let bn = self.neg_at(level - 1, &self.mul_at(level - 1, &c0inv, &acc));
            b.push(bn);
        }
        Ok(self.normalize(level, -v, b, Some(-v + r)))
    }

    fn format_at(&self, level: usize, a: &LaurentElem) -> String {
        if level == 0 {
            return self.base.format_elem(&Self::konst(a));
        }
        let s = Self::series(a);
        let var = &self.vars[level - 1];
        let mut terms = Vec::new();
        for (i, c) in s.coeffs.iter().enumerate() {
            if Self::is_zero_at(level - 1, c) {
                continue;
            }
            let e = s.valuation + i as i64;
            let mut cs = self.format_at(level - 1, c);
            if cs.contains(" + ") || cs.contains("O(") {
                cs = format!("({cs})");
            }
            let mono = match e {
                0 => None,
                1 => Some(var.clone()),
                _ => Some(format!("{var}^{e}")),
            };
            terms.push(match mono {
                None => cs,
                Some(m) if cs == "1" => m,
                Some(m) => format!("{cs}*{m}"),
            });
        }
        if let Some(p) = s.prec {
            terms.push(format!("O({var}^{p})"));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    fn random_at(&self, level: usize, rng: &mut dyn RngCore, nonzero: bool) -> LaurentElem {
        if level == 0 {
            let q = self.base.order();
            let lo = if nonzero { 1 } else { 0 };
            return LaurentElem::Const(self.base.elem(rng.gen_range(lo..q)));
        }
        let val = rng.gen_range(-2i64..=2);
        let n = rng.gen_range(1usize..=3);
        let coeffs = (0..n).map(|i| self.random_at(level - 1, rng, i == 0)).collect();
        self.normalize(level, val, coeffs, None)
    }

    fn cap_at(&self, level: usize, a: &LaurentElem, j: usize, n: i64) -> LaurentElem {
        let s = Self::series(a);
        if j + 1 == level {
            let prec = Some(s.prec.map_or(n, |p| p.min(n)));
            return self.normalize(level, s.valuation, s.coeffs.clone(), prec);
        }
        // a + O(t_j^n) only disturbs the constant coefficient
        let lo = s.valuation.min(0);
        let hi = s.end().max(1);
        let zero = self.zero_at(level - 1);
        let coeffs = (lo..hi)
            .map(|e| {
                let c = s.coeff(e).unwrap_or(&zero);
                if e == 0 {
                    self.cap_at(level - 1, c, j, n)
                } else {
                    c.clone()
                }
            })
            .collect();
        self.normalize(level, lo, coeffs, s.prec)
    }

    /// `a = t^v · u · (1 + tail)` with `u` in the residue field and
    /// `tail` of positive valuation.
    pub fn leading_unit_decomposition(&self, a: &LaurentElem) -> Result<(i64, LaurentElem, LaurentElem)> {
        let (v, u) = self.leading(a)?;
        let mono = self.normalize(self.level, v, vec![u.clone()], None);
        let unit = self.mul(a, &self.inv(&mono)?);
        Ok((v, u, self.sub(&unit, &self.one())))
    }

    /// p-th root of `1 + m` (valuation of m positive) by Newton iteration.
    pub fn hensel_pth_root(&self, one_plus_m: &LaurentElem, p: u64) -> Result<LaurentElem> {
        check_p(self, p)?;
        if self.level == 0 {
            return Err(Error::Unsupported("Hensel lifting needs a Laurent variable".into()));
        }
        let m = self.sub(one_plus_m, &self.one());
        let s = Self::series(&m);
        let positive = if s.coeffs.is_empty() { s.prec.is_none_or(|pr| pr > 0) } else { s.valuation > 0 };
        if !positive {
            return Err(Error::Invalid("argument is not a principal unit 1 + m with v(m) > 0".into()));
        }
        let pe = self.from_int(p as i64);
        let steps = 64 - (self.precision as u64).leading_zeros() + 2;
        let mut y = self.one();
        for _ in 0..steps {
            let f = self.sub(&self.pow(&y, p), one_plus_m);
            if self.is_zero(&f) {
                break;
            }
            let df = self.mul(&pe, &self.pow(&y, p - 1));
            y = self.sub(&y, &self.mul(&f, &self.inv(&df)?));
        }
        if self.equals(&self.pow(&y, p), one_plus_m) == Certainty::Unequal {
            return Err(Error::Precision("Hensel iteration did not converge".into()));
        }
        Ok(y)
    }
}

impl Field for LaurentField {
    type Elem = LaurentElem;

    fn zero(&self) -> LaurentElem {
        self.zero_at(self.level)
    }

    fn one(&self) -> LaurentElem {
        self.one_at(self.level)
    }

    fn from_int(&self, n: i64) -> LaurentElem {
        self.base_at(self.level, self.base.from_int(n))
    }

    fn add(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        self.add_at(self.level, a, b)
    }

    fn neg(&self, a: &LaurentElem) -> LaurentElem {
        self.neg_at(self.level, a)
    }

    fn mul(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        self.mul_at(self.level, a, b)
    }

    fn inv(&self, a: &LaurentElem) -> Result<LaurentElem> {
        self.inv_at(self.level, a)
    }

    fn is_zero(&self, a: &LaurentElem) -> bool {
        Self::is_zero_at(self.level, a)
    }

    fn is_nonzero(&self, a: &LaurentElem) -> bool {
        Self::is_nonzero_at(self.level, a)
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn cardinality(&self) -> Option<u64> {
        (self.level == 0).then(|| self.base.order())
    }

    fn element_at(&self, index: u64) -> Option<LaurentElem> {
        if self.level == 0 {
            self.base.element_at(index).map(LaurentElem::Const)
        } else {
            None
        }
    }

    /// Random exact element; nonzero above level 0.
    fn random_elem(&self, rng: &mut dyn RngCore) -> LaurentElem {
        self.random_at(self.level, rng, false)
    }

    fn descriptor(&self) -> String {
        let mut out = self.base.descriptor();
        for v in self.vars() {
            out.push_str(&format!("(({v}))"));
        }
        out
    }

    fn format_elem(&self, a: &LaurentElem) -> String {
        self.format_at(self.level, a)
    }

    fn ident(&self, name: &str) -> Option<LaurentElem> {
        self.vars().iter().position(|v| v == name).map(|j| self.var_at(self.level, j))
    }

    fn from_coeff_vector(&self, coeffs: &[i64]) -> Option<LaurentElem> {
        self.base.from_coeffs(coeffs).ok().map(|c| self.from_base(c))
    }

    fn cap_precision(&self, a: LaurentElem, var: &str, n: i64) -> Result<LaurentElem> {
        let j = self
            .vars()
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::Parse(format!("unknown variable {var} in O(...)")))?;
        Ok(self.cap_at(self.level, &a, j, n))
    }
}

impl TowerField for LaurentField {
    fn base(&self) -> &FiniteField {
        &self.base
    }

    fn level(&self) -> usize {
        self.level
    }

    fn residue_field(&self) -> Option<Self> {
        (self.level > 0).then(|| self.at_level(self.level - 1))
    }

    fn leading(&self, a: &LaurentElem) -> Result<(i64, LaurentElem)> {
        if self.level == 0 {
            return Err(Error::Unsupported("finite fields carry no valuation".into()));
        }
        let s = Self::series(a);
        match s.coeffs.first() {
            Some(c) => Ok((s.valuation, c.clone())),
            None if s.prec.is_none() => Err(Error::ZeroElement),
            None => Err(Error::Precision(format!(
                "leading coefficient undetermined below {}^{}",
                self.vars[self.level - 1],
                s.prec.unwrap_or(0)
            ))),
        }
    }

    fn embed_residue(&self, c: &LaurentElem) -> LaurentElem {
        assert!(self.level > 0);
        self.constant_at(self.level, c.clone())
    }

    fn uniformizer(&self) -> Option<LaurentElem> {
        (self.level > 0).then(|| self.var_at(self.level, self.level - 1))
    }

    fn from_base(&self, c: FqElem) -> LaurentElem {
        self.base_at(self.level, c)
    }

    fn to_base(&self, a: &LaurentElem) -> Option<FqElem> {
        let mut cur = a;
        loop {
            match cur {
                LaurentElem::Const(c) => return Some(*c),
                LaurentElem::Series(s) => {
                    if s.prec.is_some() || s.coeffs.len() > 1 || (s.coeffs.len() == 1 && s.valuation != 0) {
                        return None;
                    }
                    match s.coeffs.first() {
                        Some(c) => cur = c,
                        None => return Some(FqElem(0)),
                    }
                }
            }
        }
    }
}

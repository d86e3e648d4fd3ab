//! Sparse multivariate and dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fields::Field;

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: u32) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i as u32, e)).collect())
    }

    pub fn to_dense(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        for &(v, e) in &self.0 {
            out[v as usize] = e;
        }
        out
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, var: u32) -> u32 {
        self.0.iter().find(|&&(v, _)| v == var).map_or(0, |&(_, e)| e)
    }

    /// Largest variable index plus one.
    pub fn width(&self) -> usize {
        self.0.last().map_or(0, |&(v, _)| v as usize + 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == v {
                let d = e.checked_sub(other.0[j].1)?;
                if d > 0 {
                    out.push((v, d));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }
}

/// Graded order, ties broken lexicographically with variable 0 most
/// significant. This is a monomial order, which exact division relies on.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].0.cmp(&b[j].0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match a[i].1.cmp(&b[j].1) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                }
            }
            (a.len() - i).cmp(&(b.len() - j))
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + Eq> MPoly<E> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::term(f, Monomial::one(), c)
    }

    pub fn var<F: Field<Elem = E>>(f: &F, i: u32) -> Self {
        Self::term(f, Monomial::var(i), f.one())
    }

    pub fn term<F: Field<Elem = E>>(f: &F, m: Monomial, c: E) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero(&c) {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<F: Field<Elem = E>>(f: &F, terms: impl IntoIterator<Item = (Monomial, E)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(f, m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &E)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Number of variables touched (largest index plus one).
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, f: &F, m: Monomial, c: E) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = f.add(existing, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(f, m.clone(), c.clone());
        }
        out
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::from_terms(f, self.terms.iter().map(|(m, x)| (m.clone(), f.mul(x, c))))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(f, m1.mul(m2), f.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_term<F: Field<Elem = E>>(&self, f: &F, m: &Monomial, c: &E) -> Self {
        Self::from_terms(f, self.terms.iter().map(|(m1, c1)| (m1.mul(m), f.mul(c1, c))))
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, k: u32) -> Self {
        let mut acc = Self::constant(f, f.one());
        for _ in 0..k {
            acc = acc.mul(f, self);
        }
        acc
    }

    /// Renames variable `i` to `offset + i`.
    pub fn shift_vars(&self, offset: u32) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0.iter().map(|&(v, e)| (v + offset, e)).collect()), c.clone()))
                .collect(),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, point: &[E]) -> E {
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                t = f.mul(&t, &f.pow(&point[v as usize], e as u64));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes a polynomial for every variable.
    pub fn substitute<F: Field<Elem = E>>(&self, f: &F, images: &[MPoly<E>]) -> MPoly<E> {
        let mut cache: BTreeMap<(u32, u32), MPoly<E>> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(f, c.clone());
            for &(v, e) in &m.0 {
                let p = cache.entry((v, e)).or_insert_with(|| images[v as usize].pow(f, e));
                t = t.mul(f, p);
            }
            out = out.add(f, &t);
        }
        out
    }

    /// Evaluates at univariate polynomials.
    pub fn eval_uni<F: Field<Elem = E>>(&self, f: &F, point: &[UniPoly<E>]) -> UniPoly<E> {
        let mut acc = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut t = UniPoly::constant(f, c.clone());
            for &(v, e) in &m.0 {
                t = t.mul(f, &point[v as usize].pow(f, e));
            }
            acc = acc.add(f, &t);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Result<Option<Self>> {
        let (dm, dc) = d.leading().ok_or(Error::ZeroElement)?;
        let (dm, dc_inv) = (dm.clone(), f.inv(dc)?);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            let Some(qm) = m.div(&dm) else {
                return Ok(None);
            };
            let qc = f.mul(c, &dc_inv);
            rem = rem.sub(f, &d.mul_term(f, &qm, &qc));
            quot.add_term(f, qm, qc);
        }
        Ok(Some(quot))
    }

    pub fn map_coeffs<G: Field>(&self, g: &G, map: impl Fn(&E) -> G::Elem) -> MPoly<G::Elem> {
        MPoly::from_terms(g, self.terms.iter().map(|(m, c)| (m.clone(), map(c))))
    }

    /// Text such as `3*x0^3 + 5*x1^3`, largest monomial first.
    pub fn format<F: Field<Elem = E>>(&self, f: &F, var_prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut cs = f.format_elem(c);
                if cs.contains(' ') {
                    cs = format!("({cs})");
                }
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .map(|&(v, e)| if e == 1 { format!("{var_prefix}{v}") } else { format!("{var_prefix}{v}^{e}") })
                    .collect();
                match (cs.as_str(), vars.is_empty()) {
                    (_, true) => cs,
                    ("1", false) => vars.join("*"),
                    _ => format!("{cs}*{}", vars.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Dense univariate polynomial, coefficients from low to high degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + Eq> UniPoly<E> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::from_coeffs(f, vec![c])
    }

    /// The indeterminate `T`.
    pub fn x<F: Field<Elem = E>>(f: &F) -> Self {
        UniPoly { coeffs: vec![f.zero(), f.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(f, (0..n).map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i))).collect())
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::from_coeffs(f, self.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(f, out)
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, k: u32) -> Self {
        let mut acc = Self::constant(f, f.one());
        for _ in 0..k {
            acc = acc.mul(f, self);
        }
        acc
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn divrem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroElement)?;
        let lead_inv = f.inv(&d.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = f.mul(&rem[k], &lead_inv);
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(&rem[k - dd + i], &f.mul(&c, dc));
            }
            quot[k - dd] = c;
            rem.pop();
            while rem.last().is_some_and(|x| f.is_zero(x)) {
                rem.pop();
            }
        }
        Ok((Self::from_coeffs(f, quot), Self::from_coeffs(f, rem)))
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Result<Self> {
        let lead = self.coeffs.last().ok_or(Error::ZeroElement)?;
        Ok(self.scale(f, &f.inv(lead)?))
    }

    /// Monic greatest common divisor.
    pub fn gcd<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(f, &b)?.1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic(f)
        }
    }

    pub fn powmod<F: Field<Elem = E>>(&self, f: &F, mut e: u64, m: &Self) -> Result<Self> {
        let mut base = self.divrem(f, m)?.1;
        let mut acc = Self::constant(f, f.one()).divrem(f, m)?.1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).divrem(f, m)?.1;
            }
            base = base.mul(f, &base).divrem(f, m)?.1;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Ben-Or irreducibility test over a finite field of order `q`.
    pub fn is_irreducible<F: Field<Elem = E>>(&self, f: &F) -> Result<bool> {
        let q = f.cardinality().ok_or_else(|| Error::Unsupported("irreducibility needs a finite field".into()))?;
        let n = self.degree().ok_or(Error::ZeroElement)?;
        if n == 0 {
            return Ok(false);
        }
        let x = Self::x(f);
        let mut h = x.clone();
        for _ in 0..n / 2 {
            h = h.powmod(f, q, self)?;
            let g = self.gcd(f, &h.sub(f, &x))?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn format<F: Field<Elem = E>>(&self, f: &F, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mut cs = f.format_elem(c);
            if cs.contains(' ') {
                cs = format!("({cs})");
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FiniteField;
    use proptest::prelude::*;

    fn f7() -> FiniteField {
        FiniteField::new(7, 1).unwrap()
    }

    #[test]
    fn monomial_order_is_multiplicative() {
        let ms: Vec<Monomial> = vec![
            Monomial::one(),
            Monomial::var(0),
            Monomial::var(1),
            Monomial::from_pairs(vec![(0, 2)]),
            Monomial::from_pairs(vec![(0, 1), (1, 1)]),
            Monomial::from_pairs(vec![(1, 2)]),
            Monomial::from_pairs(vec![(2, 1), (0, 3)]),
        ];
        for a in &ms {
            for b in &ms {
                for c in &ms {
                    assert_eq!(a.cmp(b), a.mul(c).cmp(&b.mul(c)));
                }
            }
        }
        assert!(Monomial::var(0) > Monomial::var(1));
    }

    #[test]
    fn exact_division() {
        let f = f7();
        let x = MPoly::var(&f, 0);
        let y = MPoly::var(&f, 1);
        let a = x.add(&f, &y.scale(&f, &f.from_int(3)));
        let b = x.mul(&f, &x).sub(&f, &y);
        let prod = a.mul(&f, &b);
        assert_eq!(prod.div_exact(&f, &a).unwrap(), Some(b.clone()));
        assert_eq!(prod.add(&f, &x).div_exact(&f, &a).unwrap(), None);
    }

    #[test]
    fn univariate_gcd_and_irreducibility() {
        let f = FiniteField::new(5, 1).unwrap();
        let p = |c: &[i64]| UniPoly::from_coeffs(&f, c.iter().map(|&x| f.from_int(x)).collect());
        // x^2 - 2 has no root mod 5, x^2 - 4 does
        assert!(p(&[-2, 0, 1]).is_irreducible(&f).unwrap());
        assert!(!p(&[-4, 0, 1]).is_irreducible(&f).unwrap());
        let g = p(&[-1, 0, 1]).gcd(&f, &p(&[1, 1])).unwrap();
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(p(&[3, 0, 1]).format(&f, "T"), "T^2 + 3");
    }

    proptest! {
        #[test]
        fn substitution_matches_evaluation(cs in proptest::collection::vec(0i64..7, 6), pt in proptest::collection::vec(0i64..7, 2)) {
            let f = f7();
            let x = MPoly::var(&f, 0);
            let y = MPoly::var(&f, 1);
            let poly = MPoly::from_terms(&f, [
                (Monomial::from_dense(&[2, 0]), f.from_int(cs[0])),
                (Monomial::from_dense(&[1, 1]), f.from_int(cs[1])),
                (Monomial::from_dense(&[0, 3]), f.from_int(cs[2])),
            ]);
            let images = [x.add(&f, &y.scale(&f, &f.from_int(cs[3]))), y.scale(&f, &f.from_int(cs[4]))];
            let point: Vec<_> = pt.iter().map(|&v| f.from_int(v)).collect();
            let sub = poly.substitute(&f, &images);
            let img_vals: Vec<_> = images.iter().map(|p| p.eval(&f, &point)).collect();
            prop_assert_eq!(sub.eval(&f, &point), poly.eval(&f, &img_vals));
        }
    }
}

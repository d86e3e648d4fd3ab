use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{is_prime, prime_factors, Field, TowerField};
use crate::error::{Error, Result};

/// Largest field order backed by exp/log tables.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of F_q, encoded as `c_0 + c_1 ℓ + … + c_{k-1} ℓ^{k-1}` where
/// `c_i` are its coordinates in the power basis of F_ℓ[x]/(modulus).
///
/// The derived order is the canonical element order used everywhere a
/// "smallest" element is chosen: coefficient vectors compared from the
/// highest-degree coefficient down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub fn index(self) -> u64 {
        self.0 as u64
    }
}

/// Finite field F_q with q = ℓ^k.
///
/// The modulus is the smallest monic irreducible of degree k and the
/// generator the smallest element of order q - 1, both in the canonical
/// order, so every presentation is reproducible.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

struct Inner {
    char: u32,
    degree: u32,
    order: u32,
    /// Monic modulus, low-to-high coefficients, length `degree + 1`.
    modulus: Vec<u32>,
    generator: FqElem,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.descriptor())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.char == other.inner.char && self.inner.degree == other.inner.degree
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// Builds F_{ℓ^k}.
    pub fn new(char: u64, degree: u32) -> Result<Self> {
        if !is_prime(char) {
            return Err(Error::NotPrime(char));
        }
        if degree == 0 {
            return Err(Error::InvalidDegree);
        }
        let order = (char as u128).checked_pow(degree).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(order.min(u64::MAX as u128) as u64));
        }
        let l = char as u32;
        let q = order as u32;
        let modulus = smallest_irreducible(l, degree as usize);
        let ctx = RawCtx { l, k: degree as usize, modulus: &modulus };
        let generator = find_generator(&ctx, q);

        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = ctx.mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);
        Ok(FiniteField {
            inner: Arc::new(Inner {
                char: l,
                degree,
                order: q,
                modulus,
                generator: FqElem(generator),
                exp,
                log,
            }),
        })
    }

    pub fn order(&self) -> u64 {
        self.inner.order as u64
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    /// Monic modulus as low-to-high coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.inner.generator
    }

    pub fn elem(&self, index: u64) -> FqElem {
        assert!(index < self.order(), "element index out of range");
        FqElem(index as u32)
    }

    /// Coordinates `c_0..c_{k-1}` in the power basis.
    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        let l = self.inner.char;
        let mut v = a.0;
        (0..self.inner.degree)
            .map(|_| {
                let c = v % l;
                v /= l;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FqElem> {
        if coeffs.len() > self.inner.degree as usize {
            return Err(Error::Parse(format!(
                "expected at most {} coefficients, got {}",
                self.inner.degree,
                coeffs.len()
            )));
        }
        let l = self.inner.char as i64;
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * l as u64 + c.rem_euclid(l) as u64;
        }
        Ok(FqElem(v as u32))
    }

    /// Discrete logarithm to the base of the fixed generator.
    pub fn dlog(&self, a: FqElem) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.inner.log[a.0 as usize] as u64)
    }

    pub fn exp(&self, e: u64) -> FqElem {
        FqElem(self.inner.exp[(e % (self.order() - 1)) as usize])
    }

    pub fn mult_order(&self, a: FqElem) -> Result<u64> {
        let n = self.order() - 1;
        let d = self.dlog(a)?;
        Ok(n / gcd(n, d))
    }

    /// Smallest element of multiplicative order exactly `p`.
    pub fn primitive_root(&self, p: u64) -> Result<FqElem> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == self.characteristic() {
            return Err(Error::CharacteristicEqualsP(p));
        }
        let n = self.order() - 1;
        if n % p != 0 {
            return Err(Error::NoRootOfUnity { p, q: self.order() });
        }
        let step = n / p;
        Ok((1..p).map(|j| self.exp(j * step)).min().expect("p >= 2"))
    }

    /// Class of `a` in F_q^*/F_q^{*p}: the discrete log mod `p` when μ_p ⊂ F_q,
    /// and 0 otherwise (every element is then a `p`-th power).
    pub fn p_class(&self, a: FqElem, p: u64) -> Result<u64> {
        if p == self.characteristic() {
            return Err(Error::CharacteristicEqualsP(p));
        }
        let d = self.dlog(a)?;
        if (self.order() - 1) % p != 0 {
            return Ok(0);
        }
        Ok(d % p)
    }

    /// Canonical representative generator^class of a class in F_q^*/F_q^{*p}.
    pub fn class_rep(&self, class: u64) -> FqElem {
        self.exp(class)
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let l = self.inner.char;
        if self.inner.degree == 1 {
            let s = a + b;
            return if s >= l { s - l } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            let s = (a % l + b % l) % l;
            out += s * place;
            place *= l;
            a /= l;
            b /= l;
        }
        out
    }

    #[inline]
    fn neg_raw(&self, a: u32) -> u32 {
        let l = self.inner.char;
        if self.inner.degree == 1 {
            return if a == 0 { 0 } else { l - a };
        }
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        while a > 0 {
            let c = a % l;
            out += ((l - c) % l) * place;
            place *= l;
            a /= l;
        }
        out
    }
}

impl Field for FiniteField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(0)
    }

    fn one(&self) -> FqElem {
        FqElem(1)
    }

    fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.inner.char as i64) as u32)
    }

    #[inline]
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.add_raw(a.0, b.0))
    }

    #[inline]
    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(self.neg_raw(a.0))
    }

    #[inline]
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let inner = &*self.inner;
        let n = inner.order - 1;
        let s = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FqElem(inner.exp[(if s >= n { s - n } else { s }) as usize])
    }

    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        let inner = &*self.inner;
        let n = inner.order - 1;
        let l = inner.log[a.0 as usize];
        Ok(FqElem(inner.exp[((n - l) % n) as usize]))
    }

    #[inline]
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }

    fn characteristic(&self) -> u64 {
        self.inner.char as u64
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.order())
    }

    fn element_at(&self, index: u64) -> Option<FqElem> {
        (index < self.order()).then_some(FqElem(index as u32))
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> FqElem {
        FqElem(rng.gen_range(0..self.inner.order))
    }

    fn descriptor(&self) -> String {
        if self.inner.degree == 1 {
            format!("gf({})", self.inner.char)
        } else {
            format!("gf({}^{})", self.inner.char, self.inner.degree)
        }
    }

    fn format_elem(&self, a: &FqElem) -> String {
        if self.inner.degree == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coeffs(*a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    fn from_coeff_vector(&self, coeffs: &[i64]) -> Option<FqElem> {
        self.from_coeffs(coeffs).ok()
    }

    fn pow(&self, a: &FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem(1);
        }
        if a.0 == 0 {
            return FqElem(0);
        }
        let n = self.order() - 1;
        let l = self.inner.log[a.0 as usize] as u64;
        self.exp(((l as u128 * e as u128) % n as u128) as u64)
    }
}

impl TowerField for FiniteField {
    fn base(&self) -> &FiniteField {
        self
    }

    fn level(&self) -> usize {
        0
    }

    fn residue_field(&self) -> Option<Self> {
        None
    }

    fn leading(&self, _a: &FqElem) -> Result<(i64, FqElem)> {
        Err(Error::Unsupported("finite fields carry no valuation".into()))
    }

    fn embed_residue(&self, c: &FqElem) -> FqElem {
        *c
    }

    fn uniformizer(&self) -> Option<FqElem> {
        None
    }

    fn from_base(&self, c: FqElem) -> FqElem {
        c
    }

    fn to_base(&self, a: &FqElem) -> Option<FqElem> {
        Some(*a)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Polynomial arithmetic over F_ℓ used only while building a field.
struct RawCtx<'a> {
    l: u32,
    k: usize,
    modulus: &'a [u32],
}

impl RawCtx<'_> {
    fn decode(&self, mut v: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let c = v % self.l;
                v /= self.l;
                c
            })
            .collect()
    }

    fn encode(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &x| acc * self.l + x)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.decode(a);
        let pb = self.decode(b);
        let prod = poly_mul(&pa, &pb, self.l);
        let r = poly_rem(&prod, self.modulus, self.l);
        let mut out = r;
        out.resize(self.k, 0);
        self.encode(&out)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn find_generator(ctx: &RawCtx<'_>, q: u32) -> u32 {
    let n = (q - 1) as u64;
    let factors = prime_factors(n);
    (1..q)
        .find(|&g| factors.iter().all(|&r| ctx.pow(g, n / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic")
}

fn smallest_irreducible(l: u32, k: usize) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (l as u64).pow(k as u32);
    for idx in 0..count {
        let mut f: Vec<u32> = Vec::with_capacity(k + 1);
        let mut v = idx;
        for _ in 0..k {
            f.push((v % l as u64) as u32);
            v /= l as u64;
        }
        f.push(1);
        if is_irreducible_raw(&f, l) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Ben-Or test: f of degree k is irreducible iff gcd(x^{ℓ^i} - x, f) = 1 for
/// every i ≤ k/2.
fn is_irreducible_raw(f: &[u32], l: u32) -> bool {
    let k = f.len() - 1;
    if f[0] == 0 {
        return k == 1;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..k / 2 {
        h = poly_powmod(&h, l as u64, f, l);
        let diff = poly_sub(&h, &x, l);
        let g = poly_gcd(f.to_vec(), diff, l);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], l: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % l as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_sub(a: &[u32], b: &[u32], l: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + l - y) % l
        })
        .collect();
    trim(out)
}

fn inv_mod(a: u32, l: u32) -> u32 {
    // l is prime: a^(l-2)
    let (mut base, mut e, mut acc) = (a as u64 % l as u64, l as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % l as u64;
        }
        base = base * base % l as u64;
        e >>= 1;
    }
    acc as u32
}

fn poly_rem(a: &[u32], m: &[u32], l: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], l) as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % l as u64;
        for (i, &mc) in m.iter().enumerate() {
            let idx = dr - dm + i;
            r[idx] = ((r[idx] as u64 + (l as u64 - c) * mc as u64) % l as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(mut a: Vec<u32>, mut b: Vec<u32>, l: u32) -> Vec<u32> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, l);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], l: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, l);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, l), m, l);
        }
        base = poly_rem(&poly_mul(&base, &base, l), m, l);
        e >>= 1;
    }
    acc
}

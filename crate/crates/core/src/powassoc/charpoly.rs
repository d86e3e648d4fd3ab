//! Generic minimal polynomial of a power-associative algebra.
//!
//! With `x = Σ X_i e_i` over `F(X_1..X_n)`, the powers `1, x, x², …` are
//! vectors of homogeneous polynomials. The first `r` with `x^r` in the span
//! of lower powers is the degree, and the relation coefficients `m_i` are the
//! reduced characteristic coefficients. Rank questions are answered by
//! evaluating at random points (a nonzero value certifies a nonzero minor);
//! the final relation is always re-verified symbolically.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Algebra;
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::linalg::det;
use crate::poly::MPoly;

const SAMPLE_POINTS: usize = 24;

/// `x^r + m_{r-1} x^{r-1} + … + m_0 = 0` for the generic element `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCharData<E> {
    pub r: usize,
    /// `m[i]` is homogeneous of degree `r - i`.
    pub m: Vec<MPoly<E>>,
    /// Reduced norm `(-1)^r m_0`.
    pub norm: MPoly<E>,
    /// Sign with `a · adj(a) = sigma · N(a)`.
    pub sigma: i8,
}

enum Solve<E> {
    Solved(Vec<MPoly<E>>),
    NotPolynomial,
    NotARelation,
}

pub fn generic_reduced_char<F: Field>(alg: &Algebra<F>) -> Result<ReducedCharData<F::Elem>> {
    let f = alg.field();
    let n = alg.dim();
    let x: Vec<MPoly<F::Elem>> = (0..n).map(|i| MPoly::var(f, i as u32)).collect();
    let unit: Vec<MPoly<F::Elem>> = alg.unit().iter().map(|c| MPoly::constant(f, c.clone())).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x6b66_6f72);
    let points: Vec<Vec<F::Elem>> =
        (0..SAMPLE_POINTS).map(|_| (0..n).map(|_| f.random_elem(&mut rng)).collect()).collect();
    let eval_row = |row: &[MPoly<F::Elem>], pt: &[F::Elem]| -> Vec<F::Elem> { row.iter().map(|p| p.eval(f, pt)).collect() };
    let mut values: Vec<Vec<Vec<F::Elem>>> = points.iter().map(|pt| vec![eval_row(&unit, pt)]).collect();

    let c0 = (0..n)
        .find(|&c| !unit[c].is_zero())
        .ok_or_else(|| Error::Invalid("unit element is zero".into()))?;
    let mut cols = vec![c0];
    let mut powers = vec![unit];

    for k in 1..=n {
        let pk = alg.mul_generic(&powers[k - 1], &x);
        for (vals, pt) in values.iter_mut().zip(&points) {
            vals.push(eval_row(&pk, pt));
        }
        powers.push(pk);

        let candidates: Vec<usize> = (0..n).filter(|c| !cols.contains(c)).collect();
        let numeric = candidates.iter().copied().find(|&c| {
            values.iter().any(|vals| {
                let sub: Vec<Vec<F::Elem>> = vals
                    .iter()
                    .map(|row| cols.iter().chain(std::iter::once(&c)).map(|&j| row[j].clone()).collect())
                    .collect();
                f.is_nonzero(&det(f, &sub))
            })
        });
        if let Some(c) = numeric {
            cols.push(c);
            continue;
        }

        let outcome = solve_relation(alg, &powers, &cols);
        if let Solve::Solved(m) = outcome {
            return finish(alg, k, m, &points);
        }
        // All samples were degenerate; decide symbolically.
        let symbolic = candidates.iter().copied().find(|&c| {
            let mut with_c = cols.clone();
            with_c.push(c);
            !SymbolicMinors::new(f, &powers, &with_c, false).det(full_mask(k + 1), full_mask(k + 1)).is_zero()
        });
        match (symbolic, outcome) {
            (Some(c), _) => cols.push(c),
            (None, Solve::NotPolynomial) => return Err(Error::NonPolynomialCoefficient(format!("relation in degree {k} has non-polynomial coefficients"))),
            (None, _) => return Err(Error::DependenceNotFound(format!("no relation among the first {} powers", k + 1))),
        }
    }
    Err(Error::DependenceNotFound("powers never became dependent".into()))
}

fn full_mask(k: usize) -> u32 {
    (1u32 << k) - 1
}

/// Solves `Σ_{i<k} m_i P_i = -P_k` on the columns `cols` by Cramer's rule
/// and checks the relation on every coordinate.
fn solve_relation<F: Field>(alg: &Algebra<F>, powers: &[Vec<MPoly<F::Elem>>], cols: &[usize]) -> Solve<F::Elem> {
    let f = alg.field();
    let k = powers.len() - 1;
    let mut minors = SymbolicMinors::new(f, powers, cols, true);
    let delta = minors.det(full_mask(k), full_mask(k));
    if delta.is_zero() {
        return Solve::NotARelation;
    }
    let mut m = Vec::with_capacity(k);
    for i in 0..k {
        // Row i replaced by -P_k: move the last row into place i.
        let mut num = minors.det(full_mask(k + 1) & !(1 << i), full_mask(k));
        if (k - 1 - i) % 2 == 1 {
            num = num.neg(f);
        }
        match num.div_exact(f, &delta) {
            Ok(Some(q)) => m.push(q),
            _ => return Solve::NotPolynomial,
        }
    }
    for coord in 0..alg.dim() {
        let mut acc = powers[k][coord].clone();
        for (mi, pi) in m.iter().zip(powers) {
            acc = acc.add(f, &mi.mul(f, &pi[coord]));
        }
        if !acc.is_zero() {
            return Solve::NotARelation;
        }
    }
    Solve::Solved(m)
}

fn finish<F: Field>(alg: &Algebra<F>, r: usize, m: Vec<MPoly<F::Elem>>, points: &[Vec<F::Elem>]) -> Result<ReducedCharData<F::Elem>> {
    let f = alg.field();
    let norm = if r % 2 == 0 { m[0].clone() } else { m[0].neg(f) };
    let mut data = ReducedCharData { r, m, norm, sigma: if r % 2 == 0 { -1 } else { 1 } };
    // The sign follows from the relation; confirm it on a sample anyway.
    let probe = points.iter().find(|pt| f.is_nonzero(&data.norm.eval(f, pt)));
    if let Some(pt) = probe {
        data.sigma = 0;
        let lhs = alg.mul(pt, &adjunct_from(alg, &data, pt));
        let n = data.norm.eval(f, pt);
        for s in [1i8, -1] {
            if lhs == alg.scalar(&f.mul(&f.from_int(s as i64), &n)) {
                data.sigma = s;
            }
        }
        if data.sigma == 0 {
            return Err(Error::IdentityFailed("a·adj(a) is not a multiple of N(a)".into()));
        }
    }
    Ok(data)
}

pub(super) fn adjunct_from<F: Field>(alg: &Algebra<F>, data: &ReducedCharData<F::Elem>, a: &[F::Elem]) -> Vec<F::Elem> {
    let f = alg.field();
    let mut acc = alg.zero();
    let mut power = alg.unit().to_vec();
    for i in 1..=data.r {
        let c = if i < data.r { data.m[i].eval(f, a) } else { f.one() };
        acc = alg.add(&acc, &alg.scale(&c, &power));
        power = alg.mul(&power, a);
    }
    acc
}

/// Determinants of submatrices of `[P_0; …; P_k]` restricted to `cols`,
/// by Laplace expansion memoized on (row mask, column mask).
struct SymbolicMinors<'a, F: Field> {
    f: &'a F,
    entries: Vec<Vec<MPoly<F::Elem>>>,
    memo: HashMap<(u32, u32), MPoly<F::Elem>>,
}

impl<'a, F: Field> SymbolicMinors<'a, F> {
    /// With `negate_last`, the last row holds `-P_k`.
    fn new(f: &'a F, powers: &[Vec<MPoly<F::Elem>>], cols: &[usize], negate_last: bool) -> Self {
        let k = powers.len() - 1;
        let entries = powers
            .iter()
            .enumerate()
            .map(|(i, row)| {
                cols.iter()
                    .map(|&c| if i == k && negate_last { row[c].neg(f) } else { row[c].clone() })
                    .collect()
            })
            .collect();
        SymbolicMinors { f, entries, memo: HashMap::new() }
    }

    /// `rows` and `cols` must have equal popcount.
    fn det(&mut self, rows: u32, cols: u32) -> MPoly<F::Elem> {
        if rows == 0 {
            return MPoly::constant(self.f, self.f.one());
        }
        if let Some(d) = self.memo.get(&(rows, cols)) {
            return d.clone();
        }
        let c = cols.trailing_zeros() as usize;
        let rest = cols & !(1 << c);
        let mut acc = MPoly::zero();
        let mut pos = 0;
        for r in 0..32 {
            if rows & (1 << r) == 0 {
                continue;
            }
            let e = self.entries[r][c].clone();
            if !e.is_zero() {
                let minor = self.det(rows & !(1 << r), rest);
                let term = e.mul(self.f, &minor);
                acc = if pos % 2 == 0 { acc.add(self.f, &term) } else { acc.sub(self.f, &term) };
            }
            pos += 1;
        }
        self.memo.insert((rows, cols), acc.clone());
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FiniteField, LaurentField};

    #[test]
    fn matrix_algebras_recover_determinant() {
        let f = FiniteField::new(7, 1).unwrap();
        let m3 = Algebra::matrix_algebra(f.clone(), 3).unwrap();
        let d = m3.char_data().unwrap();
        assert_eq!(d.r, 3);
        assert_eq!(d.sigma, 1);
        let a: Vec<_> = [2, 0, 1, 3, 1, 4, 0, 5, 6].iter().map(|&x| f.from_int(x)).collect();
        let rows: Vec<Vec<_>> = a.chunks(3).map(<[_]>::to_vec).collect();
        assert_eq!(m3.reduced_norm(&a).unwrap(), det(&f, &rows));
        // trace term
        assert_eq!(d.m[2].format(&f, "t"), "6*t0 + 6*t4 + 6*t8");
    }

    #[test]
    fn small_field_degenerate_samples() {
        // Over F_2 every sample may be degenerate; the symbolic path decides.
        let f = FiniteField::new(2, 1).unwrap();
        let m2 = Algebra::matrix_algebra(f.clone(), 2).unwrap();
        let d = m2.char_data().unwrap();
        assert_eq!(d.r, 2);
        assert_eq!(d.norm.format(&f, "t"), "t0*t3 + t1*t2");
        let k3 = Algebra::kummer(f.clone(), 3, &f.one()).unwrap();
        assert_eq!(k3.degree().unwrap(), 3);
    }

    #[test]
    fn over_laurent_field() {
        let f = LaurentField::new(FiniteField::new(5, 1).unwrap(), &["t"], 8).unwrap();
        let t = f.var(0).unwrap();
        let k = Algebra::kummer(f.clone(), 2, &t).unwrap();
        let d = k.char_data().unwrap();
        assert_eq!(d.r, 2);
        let x = k.basis(1);
        assert_eq!(k.reduced_norm(&x).unwrap(), f.neg(&t));
    }
}

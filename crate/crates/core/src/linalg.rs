//! Dense Gaussian elimination over a [`Field`].
//!
//! Pivots are taken only among certainly nonzero entries, so over truncated
//! series fields the computed rank is a lower bound.

use crate::fields::Field;

pub type Matrix<E> = Vec<Vec<E>>;

/// Row echelon form in place; returns the pivot columns and the sign of the
/// row permutation.
fn echelon<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> (Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| f.is_nonzero(&m[i][c])) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            odd = !odd;
        }
        let inv = f.inv(&m[r][c]).expect("pivot is certainly nonzero");
        for i in r + 1..rows {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = f.mul(&m[i][c], &inv);
            for j in c..cols {
                let t = f.mul(&factor, &m[r][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, odd)
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut m = m.clone();
    echelon(f, &mut m).0.len()
}

pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut m = m.clone();
    let (pivots, odd) = echelon(f, &mut m);
    if pivots.len() < n {
        return f.zero();
    }
    let mut d = f.one();
    for (i, row) in m.iter().enumerate() {
        d = f.mul(&d, &row[i]);
    }
    if odd {
        f.neg(&d)
    } else {
        d
    }
}

pub fn is_invertible<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    rank(f, m) == m.len() && m.iter().all(|r| r.len() == m.len())
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut m = m.clone();
    let (pivots, _) = echelon(f, &mut m);
    // back substitution to reduced form
    for (r, &c) in pivots.iter().enumerate().rev() {
        let inv = f.inv(&m[r][c]).expect("pivot is certainly nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..r {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let t = f.mul(&factor, &m[r][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

pub fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FiniteField;

    fn mat(f: &FiniteField, rows: &[&[i64]]) -> Matrix<crate::fields::FqElem> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        let f = FiniteField::new(5, 1).unwrap();
        let m = mat(&f, &[&[1, 2], &[3, 4]]);
        assert_eq!(det(&f, &m), f.from_int(-2));
        let swap = mat(&f, &[&[0, 1], &[1, 0]]);
        assert_eq!(det(&f, &swap), f.from_int(-1));
        let sing = mat(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&f, &sing), 2);
        assert_eq!(det(&f, &sing), f.zero());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = FiniteField::new(7, 1).unwrap();
        let m = mat(&f, &[&[1, 2, 3, 4], &[2, 4, 6, 2]]);
        let k = kernel(&f, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&f, &m, v).iter().all(|x| f.is_zero(x)));
        }
    }
}

//! Exact Gaussian elimination over any of the finite fields in this crate.
//!
//! Pivoting is deterministic: the pivot of each column is the first row (from
//! the top of the unreduced part) with a nonzero entry. The reduced form is the
//! unique reduced row-echelon form, so two matrices with the same row space
//! reduce to identical row vectors.

use std::fmt::Debug;

/// Field arithmetic on a copyable element representation.
pub trait FieldOps {
    type Elem: Copy + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: Self::Elem) -> Self::Elem;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// Reduces `rows` in place to reduced row-echelon form and drops zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref<F: FieldOps>(f: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        if inv != f.one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = f.mul(*x, inv);
            }
        }
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            let factor = rows[i][c];
            if f.is_zero(factor) {
                continue;
            }
            let pivot_row = rows[r].clone();
            for (x, &pv) in rows[i].iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub(*x, f.mul(factor, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: FieldOps>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of the right null space `{x : M x = 0}` of the matrix with the given rows.
pub fn null_space<F: FieldOps>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;

    #[test]
    fn rref_is_canonical_for_equal_row_spaces() {
        let f = GaloisField::prime(3).unwrap();
        let e = |v: &[u32]| v.iter().map(|&x| f.element(x)).collect::<Vec<_>>();
        let mut a = vec![e(&[1, 2, 0]), e(&[0, 1, 1])];
        let mut b = vec![e(&[1, 0, 1]), e(&[2, 2, 1]), e(&[1, 2, 0])];
        rref(&f, &mut a);
        rref(&f, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn null_space_vectors_are_annihilated() {
        let f = GaloisField::prime(5).unwrap();
        let e = |v: &[u32]| v.iter().map(|&x| f.element(x)).collect::<Vec<_>>();
        let rows = vec![e(&[1, 2, 3, 4]), e(&[2, 4, 1, 3])];
        let ns = null_space(&f, &rows, 4);
        assert_eq!(ns.len(), 4 - rank(&f, &rows));
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(dot, f.zero());
            }
        }
    }
}

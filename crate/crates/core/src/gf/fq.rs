use crate::linalg::FieldOps;

use super::field::{FieldElement, GaloisField};

/// Arithmetic on F_q where elements are small indices `0..q` (0 is zero, 1 is one).
///
/// Used for all F_q-coordinate linear algebra; the indices are positions in
/// the encoding-ordered list of subfield elements of the ambient field.
#[derive(Clone, Debug)]
pub struct Fq {
    q: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Fq {
    /// Builds the index tables from the subfield elements of `field` listed in `elems`.
    pub(crate) fn from_elements(field: &GaloisField, elems: &[FieldElement]) -> Self {
        let q = elems.len();
        let index = |x: FieldElement| elems.iter().position(|&e| e == x).expect("subfield closed") as u8;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for i in 0..q {
            for j in 0..q {
                add[i * q + j] = index(field.add(elems[i], elems[j]));
                mul[i * q + j] = index(field.mul(elems[i], elems[j]));
            }
        }
        let neg = (0..q).map(|i| index(field.neg(elems[i]))).collect();
        let inv = (0..q).map(|i| if i == 0 { 0 } else { index(field.inv(elems[i])) }).collect();
        Fq { q: q as u32, add, mul, neg, inv }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Rank of a 5x5 matrix over F_q.
    pub fn rank5(&self, mut m: [[u8; 5]; 5]) -> usize {
        let q = self.q as usize;
        let mut rank = 0;
        for c in 0..5 {
            let Some(pr) = (rank..5).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, pr);
            let inv = self.inv[m[rank][c] as usize] as usize;
            for r in rank + 1..5 {
                let lead = m[r][c] as usize;
                if lead == 0 {
                    continue;
                }
                // row_r -= (lead / pivot) * row_rank
                let factor = self.neg[self.mul[lead * q + inv] as usize] as usize;
                let pivot_row = m[rank];
                for (x, &pv) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    let t = self.mul[factor * q + pv as usize];
                    *x = self.add[*x as usize * q + t as usize];
                }
            }
            rank += 1;
        }
        rank
    }
}

impl FieldOps for Fq {
    type Elem = u8;

    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }
    fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }
}

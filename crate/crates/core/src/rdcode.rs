//! The rank-distance code C_f = {a x + b f(x)} of a q-polynomial f.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldTower};
use crate::linpoly::QPolynomial;
use crate::weights::WeightDistribution;

/// F_q-rank of x -> a x + b f(x).
pub fn word_rank(t: &FieldTower, a: FieldElement, b: FieldElement, f: &QPolynomial) -> Result<usize> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("the zero word has no rank".into()));
    }
    let fe = t.field();
    Ok(t.fq().rank5(t.map_matrix(|x| fe.add(fe.mul(a, x), fe.mul(b, f.evaluate(t, x))))))
}

/// Number of nonzero codewords of each rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSpectrum {
    pub q: u32,
    pub f: QPolynomial,
    #[serde(rename = "spectrum")]
    pub counts: BTreeMap<u32, u64>,
}

impl RankSpectrum {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, rank: u32) -> u64 {
        self.counts.get(&rank).copied().unwrap_or(0)
    }

    pub fn min_rank(&self) -> u32 {
        *self.counts.keys().next().expect("spectrum is never empty")
    }
}

/// Word ranks over the q^5 + 1 projective pairs (a : b), each counted q^5 - 1 times.
pub fn rank_spectrum(t: &FieldTower, f: &QPolynomial) -> RankSpectrum {
    let scalars = t.order() as u64 - 1;
    let one = t.element(1);
    let mut counts = BTreeMap::new();
    let pairs = t.field().elements().map(|b| (one, b)).chain(std::iter::once((FieldElement::ZERO, one)));
    for (a, b) in pairs {
        let r = word_rank(t, a, b, f).expect("pairs are nonzero") as u32;
        *counts.entry(r).or_insert(0) += scalars;
    }
    RankSpectrum { q: t.q(), f: *f, counts }
}

/// The spectrum implied by a weight distribution: a point of weight w gives
/// words of rank 5 - w, and each of the q^5 + 1 - |L| points off the set gives rank 5.
pub fn spectrum_from_weights(d: &WeightDistribution) -> BTreeMap<u32, u64> {
    let q5 = (d.q() as u64).pow(5);
    let mut counts = BTreeMap::new();
    for (&w, &n) in d.counts() {
        *counts.entry(5 - w).or_insert(0) += n * (q5 - 1);
    }
    let off = q5 + 1 - d.size();
    if off > 0 {
        *counts.entry(5).or_insert(0) += off * (q5 - 1);
    }
    counts
}

/// The closed form (q^5 - q^4 - q^3 + q^2 - 1)(q^5 - 1) printed for the number of
/// rank-5 words when f has one weight-3 point and q weight-2 points. It does not
/// agree with the total word count; `rank5_with_one_weight3_and_q_weight2` is the
/// value forced by the other counts.
pub fn printed_rank5_formula(q: u64) -> u64 {
    (q.pow(5) - q.pow(4) - q.pow(3) + q * q - 1) * (q.pow(5) - 1)
}

/// Rank-5 words for the distribution {3:1, 2:q, 1:q^4+q^3-q^2-q}: the
/// q^5 - q^4 - q^3 + q^2 points of weight 0, times q^5 - 1.
pub fn rank5_with_one_weight3_and_q_weight2(q: u64) -> u64 {
    (q.pow(5) - q.pow(4) - q.pow(3) + q * q) * (q.pow(5) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linpoly::graph_weight_distribution;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(q: u32) -> FieldTower {
        FieldTower::for_q(q).unwrap()
    }

    #[test]
    fn basic_word_ranks() {
        let t = tower(2);
        let tr = QPolynomial::trace(&t);
        assert_eq!(word_rank(&t, t.element(1), FieldElement::ZERO, &tr).unwrap(), 5);
        assert_eq!(word_rank(&t, FieldElement::ZERO, t.element(1), &tr).unwrap(), 1);
        assert!(matches!(word_rank(&t, FieldElement::ZERO, FieldElement::ZERO, &tr), Err(Error::Domain(_))));
    }

    #[test]
    fn trace_spectrum_q2() {
        let t = tower(2);
        let s = rank_spectrum(&t, &QPolynomial::trace(&t));
        assert_eq!(s.counts, BTreeMap::from([(1, 31), (4, 16 * 31), (5, 16 * 31)]));
        assert_eq!(s.total(), (1 << 10) - 1);
    }

    #[test]
    fn dual_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for q in [2, 3] {
            let t = tower(q);
            for _ in 0..10 {
                let f = QPolynomial::random(&t, &mut rng);
                let s = rank_spectrum(&t, &f);
                assert_eq!(s.total(), (q as u64).pow(10) - 1);
                assert_eq!(s.counts, spectrum_from_weights(&graph_weight_distribution(&t, &f)));
            }
        }
    }

    #[test]
    fn scattered_gives_minimum_rank_four() {
        for q in [2, 3] {
            let t = tower(q);
            let s = rank_spectrum(&t, &QPolynomial::monomial(t.element(1), 1));
            assert_eq!(s.min_rank(), 4);
        }
    }

    #[test]
    fn printed_formula_is_off_by_one_point() {
        for q in [2u64, 3, 4, 5] {
            assert_eq!(rank5_with_one_weight3_and_q_weight2(q) - printed_rank5_formula(q), q.pow(5) - 1);
            let q5 = q.pow(5);
            let others = (q5 - 1) + q * (q5 - 1) + (q.pow(4) + q.pow(3) - q * q - q) * (q5 - 1);
            assert_eq!(others + rank5_with_one_weight3_and_q_weight2(q), q.pow(10) - 1);
        }
        assert_eq!(rank5_with_one_weight3_and_q_weight2(2), 372);
    }
}

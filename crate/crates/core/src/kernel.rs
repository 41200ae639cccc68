//! Point histogram of an F_q-subspace of F_{q^5}^2.
//!
//! Every nonzero vector (x, y) of U is enumerated once and binned by the
//! projective point it spans. A point of weight w receives exactly q^w - 1
//! vectors, so the bin sizes determine the weights. This is much faster than
//! one intersection rank per point and is used by the census and sweeps; the
//! rank-based routes in `linpoly` and `linset` are kept as the reference.

use crate::gf::{FieldElement, FieldTower};
use crate::weights::WeightDistribution;

const NOT_A_WEIGHT: u8 = u8::MAX;

/// Reusable buffers for histogramming the points of an F_q-span.
pub struct PointHistogram<'t> {
    t: &'t FieldTower,
    // (position, value) of the lowest nonzero base-q digit of n
    low: Vec<(u8, u8)>,
    // scaled[pos * q + d] = (d gx[pos], d gy[pos]) with d read as an F_q index
    scaled: Vec<(FieldElement, FieldElement)>,
    xs: Vec<FieldElement>,
    ys: Vec<FieldElement>,
    bins: Vec<u32>,
    weight_of: Vec<u8>,
}

impl<'t> PointHistogram<'t> {
    pub fn new(t: &'t FieldTower) -> Self {
        let (q, order) = (t.q(), t.order());
        let low = (0..order)
            .map(|n| {
                let (mut n, mut pos) = (n, 0u8);
                while n > 0 && n % q == 0 {
                    n /= q;
                    pos += 1;
                }
                (pos, (n % q) as u8)
            })
            .collect();
        let mut weight_of = vec![NOT_A_WEIGHT; order as usize];
        for w in 1..=5 {
            weight_of[(q.pow(w) - 1) as usize] = w as u8;
        }
        PointHistogram {
            t,
            low,
            scaled: vec![(FieldElement::ZERO, FieldElement::ZERO); 5 * q as usize],
            xs: vec![FieldElement::ZERO; order as usize],
            ys: vec![FieldElement::ZERO; order as usize],
            bins: vec![0; order as usize + 1],
            weight_of,
        }
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.t
    }

    /// Bin index of the point <(x, y)>: the discrete log of y/x, `order - 1` for
    /// y = 0 and `order` for x = 0.
    #[inline]
    fn bin(&self, x: FieldElement, y: FieldElement) -> usize {
        let f = self.t.field();
        let order = self.t.order() as usize;
        match (f.log(x), f.log(y)) {
            (None, _) => order,
            (Some(_), None) => order - 1,
            (Some(lx), Some(ly)) => {
                let cycle = order - 1;
                (ly as usize + cycle - lx as usize) % cycle
            }
        }
    }

    /// Fills the bins from the span of the generators (gx[i], gy[i]).
    /// Returns false if the generators are F_q-dependent.
    pub fn run(&mut self, gx: &[FieldElement], gy: &[FieldElement]) -> bool {
        debug_assert_eq!(gx.len(), gy.len());
        let k = gx.len() as u32;
        let t = self.t;
        let f = t.field();
        let q = t.q() as usize;
        let total = q.pow(k);
        let qpow: Vec<usize> = (0..k).map(|i| q.pow(i)).collect();
        for pos in 0..k as usize {
            for d in 0..q {
                self.scaled[pos * q + d] = (t.scale(d as u8, gx[pos]), t.scale(d as u8, gy[pos]));
            }
        }
        self.bins.fill(0);
        self.xs[0] = FieldElement::ZERO;
        self.ys[0] = FieldElement::ZERO;
        for n in 1..total {
            let (pos, d) = self.low[n];
            let (pos, d) = (pos as usize, d as usize);
            let prev = n - d * qpow[pos];
            let (sx, sy) = self.scaled[pos * q + d];
            let (x, y) = (f.add(self.xs[prev], sx), f.add(self.ys[prev], sy));
            if x.is_zero() && y.is_zero() {
                return false;
            }
            self.xs[n] = x;
            self.ys[n] = y;
            let b = self.bin(x, y);
            self.bins[b] += 1;
        }
        true
    }

    /// Dense weight counts (index = weight) from the last `run`.
    pub fn dense_counts(&self) -> [u64; 6] {
        let mut d = [0u64; 6];
        for &c in &self.bins {
            if c > 0 {
                let w = self.weight_of[c as usize];
                assert!(w != NOT_A_WEIGHT, "bin of size {c} is not q^w - 1");
                d[w as usize] += 1;
            }
        }
        d
    }

    /// (point, weight) pairs from the last `run`, points as (x, y) with the
    /// first nonzero coordinate 1.
    pub fn points(&self) -> Vec<([FieldElement; 2], u32)> {
        let f = self.t.field();
        let order = self.t.order() as usize;
        self.bins
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(b, &c)| {
                let coords = if b == order {
                    [FieldElement::ZERO, f.element(1)]
                } else if b == order - 1 {
                    [f.element(1), FieldElement::ZERO]
                } else {
                    [f.element(1), f.exp(b as u64)]
                };
                (coords, self.weight_of[c as usize] as u32)
            })
            .collect()
    }

    /// Weight distribution of the span of the generators, or None if dependent.
    pub fn distribution(&mut self, gx: &[FieldElement], gy: &[FieldElement]) -> Option<WeightDistribution> {
        if !self.run(gx, gy) {
            return None;
        }
        let d = WeightDistribution::from_dense(self.t.q(), gx.len() as u32, &self.dense_counts())
            .expect("histogram of an independent span satisfies the partition identity");
        Some(d)
    }
}

/// Histogram specialized to graphs {(x, f(x))}: the x-part of every vector and
/// its log are fixed by the F_q-basis, so only f(x) is accumulated.
pub struct GraphHistogram<'t> {
    t: &'t FieldTower,
    low: Vec<(u8, u8)>,
    log_x: Vec<u32>,
    scaled: Vec<FieldElement>,
    ys: Vec<FieldElement>,
    bins: Vec<u32>,
    weight_of: Vec<u8>,
}

impl<'t> GraphHistogram<'t> {
    pub fn new(t: &'t FieldTower) -> Self {
        let base = PointHistogram::new(t);
        let f = t.field();
        let order = t.order() as usize;
        let log_x = (0..order)
            .map(|n| if n == 0 { 0 } else { f.log(t.element_at(n as u32)).expect("basis combinations are nonzero") })
            .collect();
        GraphHistogram {
            t,
            low: base.low,
            log_x,
            scaled: vec![FieldElement::ZERO; 5 * t.q() as usize],
            ys: vec![FieldElement::ZERO; order],
            bins: vec![0; order],
            weight_of: base.weight_of,
        }
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.t
    }

    /// Dense weight counts of the graph of the F_q-linear map sending the i-th
    /// basis element to `images[i]`.
    pub fn counts(&mut self, images: &[FieldElement; 5]) -> [u64; 6] {
        let t = self.t;
        let f = t.field();
        let q = t.q() as usize;
        let order = t.order() as usize;
        let cycle = order - 1;
        for (pos, &g) in images.iter().enumerate() {
            for d in 0..q {
                self.scaled[pos * q + d] = t.scale(d as u8, g);
            }
        }
        let qpow = [1, q, q * q, q * q * q, q * q * q * q];
        self.bins.fill(0);
        self.ys[0] = FieldElement::ZERO;
        for n in 1..order {
            let (pos, d) = self.low[n];
            let (pos, d) = (pos as usize, d as usize);
            let y = f.add(self.ys[n - d * qpow[pos]], self.scaled[pos * q + d]);
            self.ys[n] = y;
            let b = match f.log(y) {
                None => cycle,
                Some(ly) => (ly as usize + cycle - self.log_x[n] as usize) % cycle,
            };
            self.bins[b] += 1;
        }
        let mut dense = [0u64; 6];
        for &c in &self.bins {
            if c > 0 {
                let w = self.weight_of[c as usize];
                assert!(w != NOT_A_WEIGHT, "bin of size {c} is not q^w - 1");
                dense[w as usize] += 1;
            }
        }
        dense
    }
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::linpoly::QPolynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graph_histogram_matches_general_histogram() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 3, 4] {
            let t = FieldTower::for_q(q).unwrap();
            let mut h = PointHistogram::new(&t);
            let mut g = GraphHistogram::new(&t);
            for _ in 0..30 {
                let f = QPolynomial::random(&t, &mut rng);
                let images = f.basis_images(&t);
                assert!(h.run(&t.fq_basis(), &images));
                assert_eq!(g.counts(&images), h.dense_counts());
            }
        }
    }
}

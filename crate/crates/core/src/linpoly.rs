//! q-polynomials f(x) = a_0 x + a_1 x^q + ... + a_4 x^{q^4} over F_{q^5}.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldTower};
use crate::kernel::PointHistogram;
use crate::weights::WeightDistribution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPolynomial {
    a: [FieldElement; 5],
}

impl QPolynomial {
    pub fn new(a: [FieldElement; 5]) -> Self {
        QPolynomial { a }
    }

    /// Builds from encodings, checking each against the tower.
    pub fn from_encodings(t: &FieldTower, enc: &[u32]) -> Result<Self> {
        if enc.len() != 5 {
            return Err(Error::Dimension(format!("a q-polynomial needs 5 coefficients, got {}", enc.len())));
        }
        let mut a = [FieldElement::ZERO; 5];
        for (slot, &e) in a.iter_mut().zip(enc) {
            *slot = t.field().try_element(e)?;
        }
        Ok(QPolynomial { a })
    }

    /// Parses "a0,a1,a2,a3,a4" (element encodings).
    pub fn parse(t: &FieldTower, s: &str) -> Result<Self> {
        let enc = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad element encoding {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        QPolynomial::from_encodings(t, &enc)
    }

    pub fn zero() -> Self {
        QPolynomial { a: [FieldElement::ZERO; 5] }
    }

    /// c * x^{q^i}
    pub fn monomial(c: FieldElement, i: usize) -> Self {
        let mut a = [FieldElement::ZERO; 5];
        a[i] = c;
        QPolynomial { a }
    }

    pub fn identity(t: &FieldTower) -> Self {
        QPolynomial::monomial(t.element(1), 0)
    }

    pub fn trace(t: &FieldTower) -> Self {
        QPolynomial { a: [t.element(1); 5] }
    }

    pub fn coefficients(&self) -> &[FieldElement; 5] {
        &self.a
    }

    pub fn encodings(&self) -> [u32; 5] {
        self.a.map(FieldElement::encoding)
    }

    pub fn random<R: Rng>(t: &FieldTower, rng: &mut R) -> Self {
        QPolynomial { a: std::array::from_fn(|_| t.element(rng.gen_range(0..t.order()))) }
    }

    /// f - gamma x
    pub fn shift(&self, t: &FieldTower, gamma: FieldElement) -> Self {
        let mut a = self.a;
        a[0] = t.field().sub(a[0], gamma);
        QPolynomial { a }
    }

    /// x -> lambda f(mu x), again a q-polynomial with coefficients lambda a_i mu^{q^i}.
    pub fn scale_compose(&self, t: &FieldTower, lambda: FieldElement, mu: FieldElement) -> Self {
        let f = t.field();
        let a = std::array::from_fn(|i| f.mul(lambda, f.mul(self.a[i], t.frobenius(mu, i as u32))));
        QPolynomial { a }
    }

    /// f(x) = sum a_i x^{q^i}
    pub fn evaluate(&self, t: &FieldTower, x: FieldElement) -> FieldElement {
        let f = t.field();
        (0..5).fold(FieldElement::ZERO, |acc, i| {
            if self.a[i].is_zero() {
                acc
            } else {
                f.add(acc, f.mul(self.a[i], t.frobenius(x, i as u32)))
            }
        })
    }

    /// Images of the F_q-basis 1, w, ..., w^4.
    pub fn basis_images(&self, t: &FieldTower) -> [FieldElement; 5] {
        t.fq_basis().map(|b| self.evaluate(t, b))
    }

    /// F_q-rank of f as a linear map.
    pub fn rank(&self, t: &FieldTower) -> usize {
        t.fq().rank5(t.map_matrix(|x| self.evaluate(t, x)))
    }

    /// dim_{F_q} ker f
    pub fn kernel_dimension(&self, t: &FieldTower) -> usize {
        5 - self.rank(t)
    }

    /// Checks f(x + l y) = f(x) + l f(y) on `samples` random triples.
    pub fn is_fq_linear_sampled<R: Rng>(&self, t: &FieldTower, rng: &mut R, samples: usize) -> bool {
        let f = t.field();
        (0..samples).all(|_| {
            let x = t.element(rng.gen_range(0..t.order()));
            let y = t.element(rng.gen_range(0..t.order()));
            let l = rng.gen_range(0..t.q()) as u8;
            let lhs = self.evaluate(t, f.add(x, t.scale(l, y)));
            lhs == f.add(self.evaluate(t, x), t.scale(l, self.evaluate(t, y)))
        })
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.encodings();
        write!(f, "{},{},{},{},{}", e[0], e[1], e[2], e[3], e[4])
    }
}

/// Coefficient encodings without field validation; see `QPolynomial::from_encodings`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPoly(pub Vec<u32>);

impl FromStr for RawPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad element encoding {p:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(RawPoly)
    }
}

pub fn evaluate(t: &FieldTower, f: &QPolynomial, x: FieldElement) -> FieldElement {
    f.evaluate(t, x)
}

pub fn kernel_dimension(t: &FieldTower, f: &QPolynomial) -> usize {
    f.kernel_dimension(t)
}

/// Weight distribution of L_{U_f}, U_f = {(x, f(x))}: the point <(1, gamma)> has
/// weight dim ker(f - gamma x). One rank computation per gamma.
pub fn graph_weight_distribution(t: &FieldTower, f: &QPolynomial) -> WeightDistribution {
    let mut dense = [0u64; 6];
    for gamma in t.field().elements() {
        let w = f.shift(t, gamma).kernel_dimension(t);
        dense[w] += 1;
    }
    WeightDistribution::from_dense(t.q(), 5, &dense).expect("kernel dimensions partition F_{q^5}^*")
}

/// Same result as `graph_weight_distribution`, via the point histogram of the graph.
pub fn graph_weight_distribution_fast(h: &mut PointHistogram<'_>, f: &QPolynomial) -> WeightDistribution {
    let t = h.tower();
    let basis = t.fq_basis();
    h.distribution(&basis, &f.basis_images(t)).expect("a graph has rank 5")
}

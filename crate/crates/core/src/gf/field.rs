use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::FieldOps;

use super::table::ModulusTable;

/// An element of some `GaloisField`, stored as its integer encoding: the
/// base-p digits (little-endian) are the coordinates on the power basis of
/// the modulus root.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

const NO_LOG: u32 = u32::MAX;
const ADD_TABLE_MAX_ORDER: u32 = 729;

/// GF(p^n) defined by a primitive modulus, with log/antilog tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    // exp[k] = g^k for 0 <= k < 2(order-1), so products never need a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    // Odd characteristic only: zech[k] = log(1 + g^k).
    zech: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl GaloisField {
    /// Builds GF(p^n) from a monic modulus given low-to-high (`modulus.len() == n + 1`).
    /// The modulus root must be primitive; anything else is rejected.
    pub fn new(p: u32, modulus: &[u32]) -> Result<Self> {
        let degree = modulus.len().saturating_sub(1) as u32;
        let bad = |reason: &str| Error::InvalidModulus { p, degree, reason: reason.to_string() };
        if !is_prime(p) {
            return Err(bad("characteristic is not prime"));
        }
        if degree == 0 || *modulus.last().unwrap() != 1 {
            return Err(bad("modulus must be monic of positive degree"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(bad("coefficient out of range"));
        }
        let order = (p as u64).pow(degree);
        if order > 1 << 20 {
            return Err(Error::UnsupportedField(format!("GF({p}^{degree}) exceeds 2^20 elements")));
        }
        let order = order as u32;
        let n = degree as usize;
        let cycle = (order - 1) as usize;

        let mut exp = Vec::with_capacity(2 * cycle);
        let mut log = vec![NO_LOG; order as usize];
        let mut digits = vec![0u32; n];
        digits[0] = 1;
        for k in 0..cycle {
            let enc = encode(&digits, p);
            if log[enc as usize] != NO_LOG {
                return Err(bad("modulus root is not primitive"));
            }
            log[enc as usize] = k as u32;
            exp.push(enc);
            // multiply by the root: shift up, then fold x^n = -sum m_i x^i back in.
            let top = digits[n - 1];
            for i in (1..n).rev() {
                digits[i] = digits[i - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for (d, &m) in digits.iter_mut().zip(modulus) {
                    *d = (*d + p - (top * m) % p) % p;
                }
            }
        }
        if encode(&digits, p) != 1 {
            return Err(bad("modulus root is not primitive"));
        }
        exp.extend_from_within(..cycle);

        let mut field = GaloisField {
            p,
            degree,
            order,
            modulus: modulus.to_vec(),
            exp,
            log,
            zech: Vec::new(),
            add_table: None,
        };
        if p != 2 {
            field.zech = (0..cycle)
                .map(|k| {
                    let s = field.add_digits(1, field.exp[k]);
                    if s == 0 { NO_LOG } else { field.log[s as usize] }
                })
                .collect();
            if order <= ADD_TABLE_MAX_ORDER {
                let mut t = vec![0u32; (order * order) as usize];
                for a in 0..order {
                    for b in 0..order {
                        t[(a * order + b) as usize] = field.add_digits(a, b);
                    }
                }
                field.add_table = Some(t);
            }
        }
        Ok(field)
    }

    /// GF(p^degree) using the modulus table.
    pub fn from_table(table: &ModulusTable, p: u32, degree: u32) -> Result<Self> {
        let m = table.get(p, degree).ok_or(Error::MissingModulus { p, degree })?;
        GaloisField::new(p, m)
    }

    /// GF(q) for a prime power q from the default (or environment-overridden) table.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, degree) = prime_power(q).ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
        GaloisField::from_table(&ModulusTable::load()?, p, degree)
    }

    pub fn prime(p: u32) -> Result<Self> {
        GaloisField::with_order(p)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given integer encoding; panics if out of range.
    pub fn element(&self, encoding: u32) -> FieldElement {
        assert!(encoding < self.order, "encoding {encoding} out of range for GF({})", self.order);
        FieldElement(encoding)
    }

    pub fn try_element(&self, encoding: u32) -> Result<FieldElement> {
        if encoding < self.order {
            Ok(FieldElement(encoding))
        } else {
            Err(Error::Parse(format!("element encoding {encoding} out of range 0..{}", self.order)))
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(FieldElement)
    }

    /// The modulus root, a primitive element.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.exp[1 % self.exp.len().max(1)])
    }

    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % (self.order as u64 - 1)) as usize])
    }

    pub fn log(&self, x: FieldElement) -> Option<u32> {
        let l = self.log[x.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    pub fn digits(&self, x: FieldElement) -> Vec<u32> {
        let mut v = x.0;
        (0..self.degree)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        FieldElement(encode(digits, self.p))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if let Some(t) = &self.add_table {
            return FieldElement(t[(a.0 * self.order + b.0) as usize]);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let cycle = self.order - 1;
        let (la, lb) = (self.log[a.0 as usize], self.log[b.0 as usize]);
        let z = self.zech[((lb + cycle - la) % cycle) as usize];
        if z == NO_LOG {
            FieldElement(0)
        } else {
            FieldElement(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let half = (self.order - 1) / 2;
        FieldElement(self.exp[(self.log[a.0 as usize] + half) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        FieldElement(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a.0 != 0, "inverse of zero");
        let cycle = self.order - 1;
        FieldElement(self.exp[((cycle - self.log[a.0 as usize]) % cycle) as usize])
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        assert!(b.0 != 0, "division by zero");
        if a.0 == 0 {
            return a;
        }
        let cycle = self.order - 1;
        FieldElement(self.exp[(self.log[a.0 as usize] + cycle - self.log[b.0 as usize]) as usize])
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement(1);
        }
        if a.0 == 0 {
            return a;
        }
        let cycle = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (k % cycle)) % cycle;
        FieldElement(self.exp[l as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> u32 {
        let cycle = self.order - 1;
        let l = self.log[a.0 as usize];
        assert!(l != NO_LOG, "zero has no multiplicative order");
        cycle / gcd(cycle, l)
    }

    pub fn is_primitive(&self, a: FieldElement) -> bool {
        !a.is_zero() && self.multiplicative_order(a) == self.order - 1
    }
}

impl FieldOps for GaloisField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(0)
    }
    fn one(&self) -> FieldElement {
        FieldElement(1)
    }
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        GaloisField::add(self, a, b)
    }
    fn neg(&self, a: FieldElement) -> FieldElement {
        GaloisField::neg(self, a)
    }
    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        GaloisField::sub(self, a, b)
    }
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        GaloisField::mul(self, a, b)
    }
    fn inv(&self, a: FieldElement) -> FieldElement {
        GaloisField::inv(self, a)
    }
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Splits q into (p, n) with q = p^n, p prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let (mut r, mut n) = (q, 0);
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<GaloisField> {
        [2, 3, 4, 5, 7, 8, 9, 25, 27, 32, 49, 125, 243, 343, 1024, 3125]
            .iter()
            .map(|&q| GaloisField::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn every_shipped_modulus_is_primitive() {
        let table = ModulusTable::load().unwrap();
        for (p, n, m) in table.entries() {
            let f = GaloisField::new(p, m).unwrap();
            assert_eq!(f.order(), p.pow(n));
            assert!(f.is_primitive(f.generator()));
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        for f in all_fields() {
            let step = (f.order() / 40).max(1);
            let xs: Vec<_> = (0..f.order()).step_by(step as usize).map(|e| f.element(e)).collect();
            for &a in &xs {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), f.element(1));
                }
                for &b in &xs {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    let digits: Vec<u32> =
                        f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + y) % f.characteristic()).collect();
                    assert_eq!(f.add(a, b), f.from_digits(&digits));
                    for &c in xs.iter().take(5) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 over F_3 is irreducible but its root has order 4, not 8.
        assert!(matches!(GaloisField::new(3, &[1, 0, 1]), Err(Error::InvalidModulus { .. })));
        // x^2 + x over F_2 is reducible.
        assert!(GaloisField::new(2, &[0, 1, 1]).is_err());
    }

    #[test]
    fn prime_power_splits() {
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(12), None);
    }
}

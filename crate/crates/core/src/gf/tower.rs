use crate::error::{Error, Result};

use super::field::{FieldElement, GaloisField};
use super::fq::Fq;
use super::table::ModulusTable;

const NOT_SUB: u8 = u8::MAX;

/// The tower F_q ⊂ F_{q^5}, q = p^e, with the fixed F_q-basis 1, w, w^2, w^3, w^4
/// of F_{q^5} (w the modulus root).
#[derive(Clone, Debug)]
pub struct FieldTower {
    field: GaloisField,
    p: u32,
    e: u32,
    q: u32,
    fq: Fq,
    sub_elems: Vec<FieldElement>,
    sub_index: Vec<u8>,
    basis: [FieldElement; 5],
    coords: Vec<[u8; 5]>,
    // inverse of `coords`: element whose coordinate digits (base q, little-endian) spell the index
    by_coord: Vec<FieldElement>,
    // q^i mod (q^5 - 1), for Frobenius through logarithms
    qpow: [u64; 5],
}

impl FieldTower {
    pub fn build(p: u32, e: u32) -> Result<Self> {
        FieldTower::build_with(&ModulusTable::load()?, p, e)
    }

    pub fn for_q(q: u32) -> Result<Self> {
        let (p, e) = super::field::prime_power(q)
            .ok_or_else(|| Error::UnsupportedField(format!("q = {q} is not a prime power")))?;
        FieldTower::build(p, e)
    }

    pub fn build_with(table: &ModulusTable, p: u32, e: u32) -> Result<Self> {
        if !(1..=2).contains(&e) {
            return Err(Error::UnsupportedField(format!("extension exponent e = {e} (need 1 or 2)")));
        }
        let field = GaloisField::from_table(table, p, 5 * e)?;
        let q = p.pow(e);
        let order = field.order();

        let sub_elems: Vec<FieldElement> =
            field.elements().filter(|&x| field.pow(x, q as u64) == x).collect();
        if sub_elems.len() != q as usize {
            return Err(Error::Invariant(format!("fixed field of x -> x^{q} has {} elements", sub_elems.len())));
        }
        let mut sub_index = vec![NOT_SUB; order as usize];
        for (i, x) in sub_elems.iter().enumerate() {
            sub_index[x.encoding() as usize] = i as u8;
        }
        let fq = Fq::from_elements(&field, &sub_elems);

        let w = field.generator();
        let basis = [0u64, 1, 2, 3, 4].map(|i| field.pow(w, i));

        // coordinates by enumerating every F_q-combination of the basis
        let mut coords = vec![[u8::MAX; 5]; order as usize];
        let mut by_coord = Vec::with_capacity(order as usize);
        for n in 0..order {
            let mut c = [0u8; 5];
            let mut r = n;
            for slot in c.iter_mut() {
                *slot = (r % q) as u8;
                r /= q;
            }
            let x = c.iter().zip(&basis).fold(FieldElement::ZERO, |acc, (&ci, &b)| {
                field.add(acc, field.mul(sub_elems[ci as usize], b))
            });
            let slot = &mut coords[x.encoding() as usize];
            if slot[0] != u8::MAX {
                return Err(Error::Invariant("power basis is not F_q-independent".into()));
            }
            *slot = c;
            by_coord.push(x);
        }

        let cycle = (order - 1) as u64;
        let mut qpow = [1u64; 5];
        for i in 1..5 {
            qpow[i] = qpow[i - 1] * q as u64 % cycle;
        }
        Ok(FieldTower { field, p, e, q, fq, sub_elems, sub_index, basis, coords, by_coord, qpow })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// q^5, the size of the big field.
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn describe(&self) -> String {
        format!("F_{} < F_{} (p={}, e={}, modulus {:?})", self.q, self.order(), self.p, self.e, self.field.modulus())
    }

    pub fn element(&self, encoding: u32) -> FieldElement {
        self.field.element(encoding)
    }

    /// x^{q^i}; i is taken mod 5.
    #[inline]
    pub fn frobenius(&self, x: FieldElement, i: u32) -> FieldElement {
        let Some(l) = self.field.log(x) else { return x };
        let cycle = (self.order() - 1) as u64;
        self.field.exp(l as u64 * self.qpow[(i % 5) as usize] % cycle)
    }

    /// Tr(x) = x + x^q + ... + x^{q^4}, an element of F_q.
    pub fn trace(&self, x: FieldElement) -> FieldElement {
        (0..5).fold(FieldElement::ZERO, |acc, i| self.field.add(acc, self.frobenius(x, i)))
    }

    pub fn is_in_subfield(&self, x: FieldElement) -> bool {
        self.sub_index[x.encoding() as usize] != NOT_SUB
    }

    /// The elements of F_q in encoding order; position i is the F_q index i.
    pub fn subfield_elements(&self) -> &[FieldElement] {
        &self.sub_elems
    }

    pub fn sub_index(&self, x: FieldElement) -> Option<u8> {
        let i = self.sub_index[x.encoding() as usize];
        (i != NOT_SUB).then_some(i)
    }

    pub fn sub_elem(&self, index: u8) -> FieldElement {
        self.sub_elems[index as usize]
    }

    pub fn fq_basis(&self) -> [FieldElement; 5] {
        self.basis
    }

    /// Coordinates of x on the F_q-basis, as F_q indices.
    #[inline]
    pub fn fq_coordinates(&self, x: FieldElement) -> [u8; 5] {
        self.coords[x.encoding() as usize]
    }

    /// The element with coordinates c_0 + c_1 q + ... + c_4 q^4 = `index`.
    #[inline]
    pub fn element_at(&self, index: u32) -> FieldElement {
        self.by_coord[index as usize]
    }

    pub fn from_fq_coordinates(&self, c: &[u8; 5]) -> FieldElement {
        c.iter().zip(&self.basis).fold(FieldElement::ZERO, |acc, (&ci, &b)| {
            self.field.add(acc, self.field.mul(self.sub_elems[ci as usize], b))
        })
    }

    /// The 5x5 F_q matrix of an F_q-linear map (row i = coordinates of the image of basis i).
    pub fn map_matrix(&self, map: impl Fn(FieldElement) -> FieldElement) -> [[u8; 5]; 5] {
        self.basis.map(|b| self.fq_coordinates(map(b)))
    }

    /// F_q-dimension of the span of the given elements.
    pub fn fq_rank(&self, xs: &[FieldElement]) -> usize {
        let rows: Vec<Vec<u8>> = xs.iter().map(|&x| self.fq_coordinates(x).to_vec()).collect();
        crate::linalg::rank(&self.fq, &rows)
    }

    /// First primitive element at or above the modulus root in encoding order.
    pub fn primitive_element(&self) -> FieldElement {
        let start = self.field.generator().encoding();
        (start..self.order())
            .chain(1..start)
            .map(|n| self.element(n))
            .find(|&x| self.field.is_primitive(x))
            .expect("multiplicative group is cyclic")
    }

    /// Multiplies an F_q index into a big-field element.
    #[inline]
    pub fn scale(&self, c: u8, x: FieldElement) -> FieldElement {
        self.field.mul(self.sub_elems[c as usize], x)
    }

    /// All elements of F_{q^5} \ F_q in encoding order.
    pub fn non_subfield_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.field.elements().filter(|&x| !self.is_in_subfield(x))
    }
}

//! Plane cubics over F_q: rational point counts and a coarse decomposition type.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, GaloisField};

/// Exponents (of x, y, z) of the cubic monomials in coefficient order.
pub const CUBIC_MONOMIALS: [(u8, u8, u8); 10] =
    [(3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1), (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)];

/// A homogeneous polynomial in x, y, z.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<(u8, u8, u8), FieldElement>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn monomial(c: FieldElement, e: (u8, u8, u8)) -> Self {
        let mut f = Form::zero();
        if !c.is_zero() {
            f.terms.insert(e, c);
        }
        f
    }

    /// a x + b y + c z
    pub fn linear(f: &GaloisField, a: FieldElement, b: FieldElement, c: FieldElement) -> Self {
        Form::monomial(a, (1, 0, 0)).add(f, &Form::monomial(b, (0, 1, 0))).add(f, &Form::monomial(c, (0, 0, 1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(u8, u8, u8), FieldElement> {
        &self.terms
    }

    pub fn coefficient(&self, e: (u8, u8, u8)) -> FieldElement {
        self.terms.get(&e).copied().unwrap_or(FieldElement::ZERO)
    }

    fn add_term(&mut self, f: &GaloisField, e: (u8, u8, u8), c: FieldElement) {
        let v = f.add(self.coefficient(e), c);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, f: &GaloisField, other: &Form) -> Form {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(f, e, c);
        }
        out
    }

    pub fn scale(&self, f: &GaloisField, c: FieldElement) -> Form {
        let mut out = Form::zero();
        for (&e, &v) in &self.terms {
            out.add_term(f, e, f.mul(c, v));
        }
        out
    }

    pub fn mul(&self, f: &GaloisField, other: &Form) -> Form {
        let mut out = Form::zero();
        for (&(a, b, c), &u) in &self.terms {
            for (&(d, e, g), &v) in &other.terms {
                out.add_term(f, (a + d, b + e, c + g), f.mul(u, v));
            }
        }
        out
    }

    pub fn pow(&self, f: &GaloisField, n: u32) -> Form {
        (0..n).fold(Form::monomial(f.element(1), (0, 0, 0)), |acc, _| acc.mul(f, self))
    }

    pub fn eval(&self, f: &GaloisField, p: [FieldElement; 3]) -> FieldElement {
        self.terms.iter().fold(FieldElement::ZERO, |acc, (&(a, b, c), &v)| {
            let m = f.mul(f.pow(p[0], a as u64), f.mul(f.pow(p[1], b as u64), f.pow(p[2], c as u64)));
            f.add(acc, f.mul(v, m))
        })
    }

    /// Formal partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn derivative(&self, f: &GaloisField, var: usize) -> Form {
        let mut out = Form::zero();
        for (&e, &v) in &self.terms {
            let ex = [e.0, e.1, e.2];
            if ex[var] == 0 {
                continue;
            }
            let mut d = ex;
            d[var] -= 1;
            let k = (0..ex[var]).fold(FieldElement::ZERO, |acc, _| f.add(acc, f.element(1)));
            out.add_term(f, (d[0], d[1], d[2]), f.mul(k, v));
        }
        out
    }

    /// The form with x, y, z replaced by the given forms.
    pub fn substitute(&self, f: &GaloisField, vars: &[Form; 3]) -> Form {
        let mut out = Form::zero();
        for (&(a, b, c), &v) in &self.terms {
            let t = vars[0].pow(f, a as u32).mul(f, &vars[1].pow(f, b as u32)).mul(f, &vars[2].pow(f, c as u32));
            out = out.add(f, &t.scale(f, v));
        }
        out
    }

    /// Exact quotient by a nonzero linear form, or None if it does not divide.
    pub fn divide_linear(&self, f: &GaloisField, l: &Form) -> Option<Form> {
        // divide with respect to the first variable present in l
        let var = (0..3).find(|&v| {
            let mut e = [0u8; 3];
            e[v] = 1;
            !l.coefficient((e[0], e[1], e[2])).is_zero()
        })?;
        let mut unit = [0u8; 3];
        unit[var] = 1;
        let lead = l.coefficient((unit[0], unit[1], unit[2]));
        let deg_in = |e: &(u8, u8, u8)| [e.0, e.1, e.2][var];
        let mut rem = self.clone();
        let mut quot = Form::zero();
        loop {
            let Some((&e, &c)) = rem.terms.iter().max_by_key(|(e, _)| deg_in(e)) else { return Some(quot) };
            if deg_in(&e) == 0 {
                return None;
            }
            let mut qe = [e.0, e.1, e.2];
            qe[var] -= 1;
            let term = Form::monomial(f.div(c, lead), (qe[0], qe[1], qe[2]));
            rem = rem.add(f, &term.mul(f, l).scale(f, f.neg(f.element(1))));
            quot = quot.add(f, &term);
        }
    }
}

/// All points of PG(2,q), first nonzero coordinate 1.
pub fn plane_points(f: &GaloisField) -> Vec<[FieldElement; 3]> {
    let one = f.element(1);
    let z = FieldElement::ZERO;
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            out.push([one, a, b]);
        }
    }
    for b in f.elements() {
        out.push([z, one, b]);
    }
    out.push([z, z, one]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicCurve {
    coeffs: [FieldElement; 10],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicType {
    Smooth,
    SingularIrreducible,
    LinePlusConic,
    ThreeRationalLines,
    LineAndConjugatePair,
    ThreeConjugateLines,
}

impl CubicType {
    pub const ALL: [CubicType; 6] = [
        CubicType::Smooth,
        CubicType::SingularIrreducible,
        CubicType::LinePlusConic,
        CubicType::ThreeRationalLines,
        CubicType::LineAndConjugatePair,
        CubicType::ThreeConjugateLines,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CubicType::Smooth => "smooth",
            CubicType::SingularIrreducible => "singular_irreducible",
            CubicType::LinePlusConic => "line_plus_conic",
            CubicType::ThreeRationalLines => "three_rational_lines",
            CubicType::LineAndConjugatePair => "line_and_conjugate_pair",
            CubicType::ThreeConjugateLines => "three_conjugate_lines",
        }
    }

    /// Whether N rational points is possible for this type over F_q.
    pub fn allows_count(self, q: u64, n: u64) -> bool {
        match self {
            CubicType::Smooth => {
                let d = n as i64 - q as i64 - 1;
                d * d <= 4 * q as i64
            }
            CubicType::SingularIrreducible => (q..=q + 2).contains(&n),
            CubicType::LinePlusConic => (2 * q..=2 * q + 2).contains(&n),
            CubicType::ThreeRationalLines => [q + 1, 2 * q + 1, 3 * q, 3 * q + 1].contains(&n),
            CubicType::LineAndConjugatePair => n == q + 1 || n == q + 2,
            CubicType::ThreeConjugateLines => n <= 1,
        }
    }
}

impl fmt::Display for CubicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl CubicCurve {
    pub fn new(coeffs: [FieldElement; 10]) -> Self {
        CubicCurve { coeffs }
    }

    pub fn from_encodings(f: &GaloisField, enc: &[u32]) -> Result<Self> {
        if enc.len() != 10 {
            return Err(Error::Dimension(format!("a cubic needs 10 coefficients, got {}", enc.len())));
        }
        let mut coeffs = [FieldElement::ZERO; 10];
        for (slot, &e) in coeffs.iter_mut().zip(enc) {
            *slot = f.try_element(e)?;
        }
        Ok(CubicCurve { coeffs })
    }

    pub fn from_form(form: &Form) -> Result<Self> {
        if let Some(e) = form.terms().keys().find(|e| e.0 + e.1 + e.2 != 3) {
            return Err(Error::Dimension(format!("monomial {e:?} is not cubic")));
        }
        Ok(CubicCurve { coeffs: CUBIC_MONOMIALS.map(|e| form.coefficient(e)) })
    }

    pub fn coefficients(&self) -> &[FieldElement; 10] {
        &self.coeffs
    }

    pub fn form(&self) -> Form {
        let mut out = Form::zero();
        for (&e, &c) in CUBIC_MONOMIALS.iter().zip(&self.coeffs) {
            if !c.is_zero() {
                out.terms.insert(e, c);
            }
        }
        out
    }

    pub fn is_vanishing(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Number of points of PG(2,q) on the cubic.
pub fn count_points(f: &GaloisField, c: &CubicCurve) -> Result<u64> {
    if c.is_vanishing() {
        return Err(Error::VanishingCubic);
    }
    let form = c.form();
    Ok(plane_points(f).into_iter().filter(|&p| form.eval(f, p).is_zero()).count() as u64)
}

fn rational_line_factor(f: &GaloisField, form: &Form) -> Option<(Form, Form)> {
    plane_points(f).into_iter().find_map(|[a, b, c]| {
        let l = Form::linear(f, a, b, c);
        form.divide_linear(f, &l).map(|quot| (l, quot))
    })
}

/// Order of vanishing of the form at p (0 if p is not on the curve).
fn multiplicity_at(f: &GaloisField, form: &Form, p: [FieldElement; 3]) -> u32 {
    // move p to (0,0,1): x -> x + p0 z style change of coordinates with the
    // third basis vector sent to p
    let k = (0..3).rev().find(|&i| !p[i].is_zero()).unwrap();
    let mut cols: Vec<[FieldElement; 3]> = Vec::new();
    for i in 0..3 {
        if i != k {
            let mut e = [FieldElement::ZERO; 3];
            e[i] = f.element(1);
            cols.push(e);
        }
    }
    cols.push(p);
    // new coordinates (u, v, w): old = u cols[0] + v cols[1] + w cols[2]
    let vars: [Form; 3] = std::array::from_fn(|r| {
        Form::linear(f, cols[0][r], cols[1][r], cols[2][r])
    });
    let g = form.substitute(f, &vars);
    g.terms().keys().map(|e| (e.0 + e.1) as u32).min().unwrap_or(u32::MAX)
}

/// Coarse type of a cubic: rational line components are found by division
/// by every line of PG(2,q); the rest is decided by counts and singular points.
pub fn classify_cubic(f: &GaloisField, c: &CubicCurve) -> Result<CubicType> {
    if c.is_vanishing() {
        return Err(Error::VanishingCubic);
    }
    let form = c.form();
    if let Some((_, conic)) = rational_line_factor(f, &form) {
        if rational_line_factor(f, &conic).is_some() {
            return Ok(CubicType::ThreeRationalLines);
        }
        let on_conic = plane_points(f).into_iter().filter(|&p| conic.eval(f, p).is_zero()).count() as u32;
        return Ok(if on_conic == f.order() + 1 { CubicType::LinePlusConic } else { CubicType::LineAndConjugatePair });
    }
    let partials: Vec<Form> = (0..3).map(|v| form.derivative(f, v)).collect();
    let singular = plane_points(f)
        .into_iter()
        .find(|&p| form.eval(f, p).is_zero() && partials.iter().all(|d| d.eval(f, p).is_zero()));
    if let Some(p) = singular {
        return Ok(if multiplicity_at(f, &form, p) >= 3 {
            CubicType::ThreeConjugateLines
        } else {
            CubicType::SingularIrreducible
        });
    }
    // an absolutely irreducible singular cubic has a unique, hence rational,
    // singular point; with no rational points left only a conjugate triangle fits
    if count_points(f, c)? == 0 {
        Ok(CubicType::ThreeConjugateLines)
    } else {
        Ok(CubicType::Smooth)
    }
}

fn random_element<R: Rng>(f: &GaloisField, rng: &mut R) -> FieldElement {
    f.element(rng.gen_range(0..f.order()))
}

fn random_linear<R: Rng>(f: &GaloisField, rng: &mut R) -> Form {
    loop {
        let l = Form::linear(f, random_element(f, rng), random_element(f, rng), random_element(f, rng));
        if !l.is_zero() {
            return l;
        }
    }
}

/// Three independent random linear forms (a random projectivity).
fn random_frame<R: Rng>(f: &GaloisField, rng: &mut R) -> [Form; 3] {
    loop {
        let frame = [random_linear(f, rng), random_linear(f, rng), random_linear(f, rng)];
        let m: Vec<Vec<FieldElement>> = frame
            .iter()
            .map(|l| vec![l.coefficient((1, 0, 0)), l.coefficient((0, 1, 0)), l.coefficient((0, 0, 1))])
            .collect();
        if crate::linalg::rank(f, &m) == 3 {
            return frame;
        }
    }
}

/// Norm form N(x + w y + w^2 z) from F_{q^3} (three conjugate lines), for prime q.
pub fn cubic_norm_form(f: &GaloisField, ext: &GaloisField) -> Result<Form> {
    let (q, p) = (f.order(), f.characteristic());
    if q != p || ext.characteristic() != p || ext.degree() != 3 {
        return Err(Error::UnsupportedField(format!("norm forms need prime q and GF(q^3), got q = {q}")));
    }
    let w = ext.generator();
    let conj = |k: u32| {
        let wk = ext.pow(w, (q as u64).pow(k));
        Form::linear(ext, ext.element(1), wk, ext.mul(wk, wk))
    };
    let prod = conj(0).mul(ext, &conj(1)).mul(ext, &conj(2));
    let mut out = Form::zero();
    for (&e, &c) in prod.terms() {
        if c.encoding() >= p {
            return Err(Error::Invariant("norm form has a coefficient outside F_q".into()));
        }
        out.terms.insert(e, f.element(c.encoding()));
    }
    Ok(out)
}

/// Quadratic norm form N(x + w y) from F_{q^2}, for prime q.
fn quadratic_norm_form(f: &GaloisField, ext: &GaloisField) -> Form {
    let q = f.order() as u64;
    let w = ext.generator();
    let l0 = Form::linear(ext, ext.element(1), w, FieldElement::ZERO);
    let l1 = Form::linear(ext, ext.element(1), ext.pow(w, q), FieldElement::ZERO);
    let mut out = Form::zero();
    for (&e, &c) in l0.mul(ext, &l1).terms() {
        out.terms.insert(e, f.element(c.encoding()));
    }
    out
}

/// A seeded corpus of cubics with the type each was built as (None for random cubics).
pub fn cubic_corpus<R: Rng>(f: &GaloisField, per_family: usize, rng: &mut R) -> Result<Vec<(CubicCurve, Option<CubicType>)>> {
    let table = crate::gf::ModulusTable::load()?;
    let p = f.characteristic();
    if f.degree() != 1 {
        return Err(Error::UnsupportedField("the cubic corpus needs a prime field".into()));
    }
    let ext2 = GaloisField::from_table(&table, p, 2)?;
    let ext3 = GaloisField::from_table(&table, p, 3)?;
    let norm2 = quadratic_norm_form(f, &ext2);
    let norm3 = cubic_norm_form(f, &ext3)?;
    let one = f.element(1);
    let x = Form::monomial(one, (1, 0, 0));
    let y = Form::monomial(one, (0, 1, 0));
    let z = Form::monomial(one, (0, 0, 1));

    // an irreducible conic: x z - y^2 moved by random frames
    let base_conic = x.mul(f, &z).add(f, &y.mul(f, &y).scale(f, f.neg(one)));
    let mut out = Vec::new();
    let mut push = |form: Form, ty: Option<CubicType>| -> Result<()> {
        if !form.is_zero() {
            out.push((CubicCurve::from_form(&form)?, ty));
        }
        Ok(())
    };
    for _ in 0..per_family {
        let fr = random_frame(f, rng);
        let lines = random_linear(f, rng).mul(f, &random_linear(f, rng)).mul(f, &random_linear(f, rng));
        push(lines, Some(CubicType::ThreeRationalLines))?;
        push(random_linear(f, rng).mul(f, &base_conic.substitute(f, &fr)), Some(CubicType::LinePlusConic))?;
        let pair = norm2.substitute(f, &random_frame(f, rng));
        push(random_linear(f, rng).mul(f, &pair), Some(CubicType::LineAndConjugatePair))?;
        // triangle (independent forms) and concurrent (forms through a common point)
        push(norm3.substitute(f, &random_frame(f, rng)), Some(CubicType::ThreeConjugateLines))?;
        // N(l1 + w l2): 1 and w are independent, so the lines are distinct and concurrent
        let fr = random_frame(f, rng);
        let concurrent = [fr[0].clone(), fr[1].clone(), Form::zero()];
        push(norm3.substitute(f, &concurrent), Some(CubicType::ThreeConjugateLines))?;
        // y^2 z = x^3 + a x^2 z: node (a != 0) or cusp (a = 0)
        let a = random_element(f, rng);
        let sing = y.mul(f, &y).mul(f, &z).add(
            f,
            &x.pow(f, 3).add(f, &x.mul(f, &x).mul(f, &z).scale(f, a)).scale(f, f.neg(one)),
        );
        push(sing.substitute(f, &random_frame(f, rng)), Some(CubicType::SingularIrreducible))?;
        let coeffs: [FieldElement; 10] = std::array::from_fn(|_| random_element(f, rng));
        push(CubicCurve::new(coeffs).form(), None)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> GaloisField {
        GaloisField::with_order(q).unwrap()
    }

    fn monomials(f: &GaloisField, terms: &[((u8, u8, u8), u32)]) -> CubicCurve {
        let form = terms.iter().fold(Form::zero(), |acc, &(e, c)| acc.add(f, &Form::monomial(f.element(c), e)));
        CubicCurve::from_form(&form).unwrap()
    }

    #[test]
    fn triangle_and_concurrent_lines() {
        for q in [2, 3, 4, 5, 7] {
            let f = field(q);
            let tri = monomials(&f, &[((1, 1, 1), 1)]);
            assert_eq!(count_points(&f, &tri).unwrap(), 3 * q as u64);
            assert_eq!(classify_cubic(&f, &tri).unwrap(), CubicType::ThreeRationalLines);
            // x y (x + y)
            let conc = monomials(&f, &[((2, 1, 0), 1), ((1, 2, 0), 1)]);
            assert_eq!(count_points(&f, &conc).unwrap(), 3 * q as u64 + 1);
            assert_eq!(classify_cubic(&f, &conc).unwrap(), CubicType::ThreeRationalLines);
        }
    }

    #[test]
    fn elliptic_curve_over_f5() {
        let f = field(5);
        // y^2 z - x^3 - x z^2
        let c = monomials(&f, &[((0, 2, 1), 1), ((3, 0, 0), 4), ((1, 0, 2), 4)]);
        let n = count_points(&f, &c).unwrap();
        assert_eq!(n, 4);
        assert!((n as f64 - 6.0).abs() <= 2.0 * 5f64.sqrt());
        assert_eq!(classify_cubic(&f, &c).unwrap(), CubicType::Smooth);
    }

    #[test]
    fn vanishing_cubic_is_an_error() {
        let f = field(3);
        let c = CubicCurve::new([FieldElement::ZERO; 10]);
        assert_eq!(count_points(&f, &c), Err(Error::VanishingCubic));
        assert_eq!(classify_cubic(&f, &c), Err(Error::VanishingCubic));
    }

    #[test]
    fn division_by_linear_forms() {
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let (a, b) = (random_linear(&f, &mut rng), random_linear(&f, &mut rng));
            let c = random_linear(&f, &mut rng);
            let prod = a.mul(&f, &b).mul(&f, &c);
            let quot = prod.divide_linear(&f, &a).unwrap();
            assert_eq!(quot.mul(&f, &a), prod);
        }
        let x = Form::monomial(f.element(1), (1, 0, 0));
        let xyz = Form::monomial(f.element(1), (1, 1, 1));
        assert!(xyz.divide_linear(&f, &x.add(&f, &Form::monomial(f.element(1), (0, 1, 0)))).is_none());
    }

    #[test]
    fn norm_form_has_no_points_or_one() {
        for q in [3, 5, 7] {
            let f = field(q);
            let ext = GaloisField::with_order(q * q * q).unwrap();
            let n = CubicCurve::from_form(&cubic_norm_form(&f, &ext).unwrap()).unwrap();
            assert_eq!(count_points(&f, &n).unwrap(), 0);
            assert_eq!(classify_cubic(&f, &n).unwrap(), CubicType::ThreeConjugateLines);
        }
    }

    #[test]
    fn corpus_types_and_lemma_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for q in [3u32, 5, 7] {
            let f = field(q);
            for (c, built) in cubic_corpus(&f, 40, &mut rng).unwrap() {
                let ty = classify_cubic(&f, &c).unwrap();
                if let Some(b) = built {
                    assert_eq!(ty, b, "q = {q}, cubic {:?}", c.coefficients());
                }
                let n = count_points(&f, &c).unwrap();
                assert!(ty.allows_count(q as u64, n), "{ty} with {n} points over F_{q}");
            }
        }
    }
}

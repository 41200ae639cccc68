//! The subgeometry Σ = PG(4,q) inside PG(4,q^5): point ranks, the set Ω₂ of
//! rank-2 points, G-orbit types, secant profiles and projection of Σ from a
//! plane onto a line.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldTower};
use crate::linalg::{null_space, rank, rref};
use crate::linset::{span_from_vectors, FqSubspace, ProjectivePoint};
use crate::weights::WeightDistribution;

/// F_q-rank of the 5x5 coordinate matrix of a vector of F_{q^5}^5: the
/// dimension of the smallest rational subspace whose extension contains it.
/// The value does not change under scaling by F_{q^5}^*.
pub fn point_rank(t: &FieldTower, p: &[FieldElement]) -> usize {
    assert_eq!(p.len(), 5, "points of PG(4,q^5) have 5 coordinates");
    let m: [[u8; 5]; 5] = std::array::from_fn(|i| t.fq_coordinates(p[i]));
    t.fq().rank5(m)
}

/// Canonical rational vectors spanning the smallest rational subspace containing p.
pub fn rational_support(t: &FieldTower, p: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    // column k of the coordinate matrix is a rational vector; p = sum_k w^k col_k
    let mut cols: Vec<Vec<u8>> = (0..5).map(|k| p.iter().map(|&x| t.fq_coordinates(x)[k]).collect()).collect();
    rref(t.fq(), &mut cols);
    cols.iter().map(|c| c.iter().map(|&d| t.sub_elem(d)).collect()).collect()
}

/// All points of Σ, each as its canonical rational vector.
pub fn rational_points(t: &FieldTower) -> Vec<Vec<FieldElement>> {
    let q = t.q();
    let mut out = Vec::new();
    for n in 1..q.pow(5) {
        let digits: Vec<u8> = (0..5).map(|i| (n / q.pow(i) % q) as u8).collect();
        if digits.iter().find(|&&d| d != 0) == Some(&1) {
            out.push(digits.iter().map(|&d| t.sub_elem(d)).collect());
        }
    }
    out
}

/// The G-orbit (PGL(2,q)-orbit) label of an element outside F_q: the orbit's
/// minimal member in encoding order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GOrbitLabel(pub FieldElement);

/// The PGL(2,q) images (a g + b)/(c g + d) of g, ad - bc != 0.
pub fn pgl_orbit(t: &FieldTower, g: FieldElement) -> Vec<FieldElement> {
    let f = t.field();
    let sub = t.subfield_elements();
    let mut out = Vec::with_capacity((t.q() * (t.q() * t.q() - 1)) as usize);
    for &a in sub {
        for &b in sub {
            for &c in sub {
                for &d in sub {
                    if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
                        continue;
                    }
                    out.push(f.div(f.add(f.mul(a, g), b), f.add(f.mul(c, g), d)));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn require_outside_subfield(t: &FieldTower, g: FieldElement) -> Result<()> {
    if t.is_in_subfield(g) {
        return Err(Error::Domain(format!("element {g} lies in F_{}", t.q())));
    }
    Ok(())
}

pub fn g_orbit_label(t: &FieldTower, g: FieldElement) -> Result<GOrbitLabel> {
    require_outside_subfield(t, g)?;
    Ok(GOrbitLabel(pgl_orbit(t, g)[0]))
}

/// G(g) = G(h) iff dim_{F_q} <1, g, h, gh> <= 3.
pub fn same_g_orbit(t: &FieldTower, g: FieldElement, h: FieldElement) -> Result<bool> {
    require_outside_subfield(t, g)?;
    require_outside_subfield(t, h)?;
    Ok(t.fq_rank(&[t.element(1), g, h, t.field().mul(g, h)]) <= 3)
}

/// Labels of every element outside F_q, computed once.
#[derive(Clone, Debug)]
pub struct GOrbits {
    labels: Vec<Option<GOrbitLabel>>,
    count: usize,
}

impl GOrbits {
    pub fn new(t: &FieldTower) -> Self {
        let mut labels = vec![None; t.order() as usize];
        let mut count = 0;
        for g in t.non_subfield_elements() {
            if labels[g.encoding() as usize].is_some() {
                continue;
            }
            let orbit = pgl_orbit(t, g);
            let label = GOrbitLabel(orbit[0]);
            for x in orbit {
                labels[x.encoding() as usize] = Some(label);
            }
            count += 1;
        }
        GOrbits { labels, count }
    }

    pub fn label(&self, g: FieldElement) -> Result<GOrbitLabel> {
        self.labels[g.encoding() as usize].ok_or_else(|| Error::Domain(format!("element {g} lies in the subfield")))
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn labels(&self) -> Vec<GOrbitLabel> {
        let mut v: Vec<GOrbitLabel> = self.labels.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Type G(b/a) of a rank-2 point p = a Q1 + b Q2 (Q1, Q2 rational); None if rank != 2.
    pub fn point_type(&self, t: &FieldTower, p: &[FieldElement]) -> Option<GOrbitLabel> {
        let support = rational_support(t, p);
        if support.len() != 2 {
            return None;
        }
        // in reduced form each Q has a 1 where the other has a 0
        let piv = |v: &[FieldElement]| v.iter().position(|x| !x.is_zero()).unwrap();
        let (i, j) = (piv(&support[0]), piv(&support[1]));
        let (a, b) = (p[i], p[j]);
        Some(self.label(t.field().div(b, a)).expect("coefficient ratio of a rank-2 point is not rational"))
    }
}

/// Rank-2 points on a line of PG(4,q^5) and their types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineProfile {
    pub count: u64,
    pub types: BTreeMap<GOrbitLabel, u64>,
    #[serde(skip)]
    pub points: Vec<ProjectivePoint>,
}

/// Points P1 + m P2 (m in F_{q^5}) and P2.
pub fn line_points(t: &FieldTower, p1: &[FieldElement], p2: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    let f = t.field();
    let mut pts: Vec<Vec<FieldElement>> =
        f.elements().map(|m| p1.iter().zip(p2).map(|(&a, &b)| f.add(a, f.mul(m, b))).collect()).collect();
    pts.push(p2.to_vec());
    pts
}

pub fn line_omega2_profile(
    t: &FieldTower,
    orbits: &GOrbits,
    p1: &[FieldElement],
    p2: &[FieldElement],
) -> Result<LineProfile> {
    check_points(t, &[p1, p2], 2)?;
    let q = t.q() as u64;
    let mut profile = LineProfile { count: 0, types: BTreeMap::new(), points: Vec::new() };
    for p in line_points(t, p1, p2) {
        match point_rank(t, &p) {
            1 => return Err(Error::NotDisjoint("line not disjoint from subgeometry")),
            2 => {
                profile.count += 1;
                *profile.types.entry(orbits.point_type(t, &p).unwrap()).or_default() += 1;
                profile.points.push(ProjectivePoint::new(t, p)?);
            }
            _ => {}
        }
    }
    if ![0, 1, 2, q + 1, q * q + q + 1].contains(&profile.count) {
        return Err(Error::Invariant(format!("line meets the rank-2 locus in {} points", profile.count)));
    }
    Ok(profile)
}

fn check_points(t: &FieldTower, pts: &[&[FieldElement]], expected_rank: usize) -> Result<()> {
    for p in pts {
        if p.len() != 5 {
            return Err(Error::Dimension(format!("points of PG(4,q^5) need 5 coordinates, got {}", p.len())));
        }
    }
    let rows: Vec<Vec<FieldElement>> = pts.iter().map(|p| p.to_vec()).collect();
    if rank(t.field(), &rows) != expected_rank {
        return Err(Error::Dimension(format!("the {} given points are not independent", pts.len())));
    }
    Ok(())
}

/// Coefficients (x, y) with v = x a + y b, or None if v is not in <a, b>.
fn solve2(t: &FieldTower, a: &[FieldElement], b: &[FieldElement], v: &[FieldElement]) -> Option<(FieldElement, FieldElement)> {
    let f = t.field();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let det = f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
            if det.is_zero() {
                continue;
            }
            let x = f.div(f.sub(f.mul(v[i], b[j]), f.mul(v[j], b[i])), det);
            let y = f.div(f.sub(f.mul(a[i], v[j]), f.mul(a[j], v[i])), det);
            let ok = (0..a.len()).all(|k| f.add(f.mul(x, a[k]), f.mul(y, b[k])) == v[k]);
            return ok.then_some((x, y));
        }
    }
    None
}

/// Whether exactly these q+1 collinear points form an F_q-subline.
pub fn is_fq_subline(t: &FieldTower, points: &[ProjectivePoint]) -> bool {
    if points.len() != t.q() as usize + 1 {
        return false;
    }
    let (a, b) = (points[0].coords(), points[1].coords());
    // normalize so that points[2] = a' + b'
    let Some((l, m)) = solve2(t, a, b, points[2].coords()) else { return false };
    if l.is_zero() || m.is_zero() {
        return false;
    }
    let f = t.field();
    let a2: Vec<FieldElement> = a.iter().map(|&x| f.mul(l, x)).collect();
    let b2: Vec<FieldElement> = b.iter().map(|&x| f.mul(m, x)).collect();
    let mut ratios = Vec::new();
    for p in &points[2..] {
        match solve2(t, &a2, &b2, p.coords()) {
            Some((x, y)) if !x.is_zero() && !y.is_zero() && t.is_in_subfield(f.div(x, y)) => ratios.push(f.div(x, y)),
            _ => return false,
        }
    }
    ratios.sort();
    ratios.dedup();
    ratios.len() == points.len() - 2
}

/// Standard basis vector e_i of F_{q^5}^5.
pub fn unit(t: &FieldTower, i: usize) -> Vec<FieldElement> {
    let mut v = vec![FieldElement::ZERO; 5];
    v[i] = t.element(1);
    v
}

/// a + g b for vectors a, b.
pub fn combine(t: &FieldTower, a: &[FieldElement], g: FieldElement, b: &[FieldElement]) -> Vec<FieldElement> {
    let f = t.field();
    a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(g, y))).collect()
}

/// Witness lines: (q+1)-secant, 2-secant and (q^2+q+1)-secant.
pub struct WitnessLines {
    pub subline: (Vec<FieldElement>, Vec<FieldElement>),
    pub two_secant: (Vec<FieldElement>, Vec<FieldElement>),
    pub long_secant: (Vec<FieldElement>, Vec<FieldElement>),
}

pub fn witness_lines(t: &FieldTower) -> WitnessLines {
    let e: Vec<Vec<FieldElement>> = (0..5).map(|i| unit(t, i)).collect();
    let g = t.primitive_element();
    // some element outside F_q of a different G-orbit
    let g2 = t
        .non_subfield_elements()
        .find(|&h| !same_g_orbit(t, g, h).unwrap())
        .expect("q^2 + 1 > 1 orbits");
    let subline = (combine(t, &e[0], g, &e[1]), combine(t, &e[2], g, &e[3]));
    let two_secant = (combine(t, &e[0], g, &e[1]), combine(t, &e[2], g2, &e[3]));
    // two points on extended lines through e0 in the plane <e0, e1, e2>, avoiding Σ
    let long_secant = t
        .non_subfield_elements()
        .find_map(|h| {
            let (p1, p2) = (combine(t, &e[0], g, &e[1]), combine(t, &e[0], h, &e[2]));
            let disjoint = line_points(t, &p1, &p2).iter().all(|p| point_rank(t, p) > 1);
            disjoint.then_some((p1, p2))
        })
        .expect("some line of the plane avoids Σ");
    WitnessLines { subline, two_secant, long_secant }
}

/// A uniformly random point of PG(4,q^5) (as a nonzero vector).
pub fn random_vector<R: Rng>(t: &FieldTower, rng: &mut R) -> Vec<FieldElement> {
    loop {
        let v: Vec<FieldElement> = (0..5).map(|_| t.element(rng.gen_range(0..t.order()))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Random line disjoint from Σ, as two spanning points.
pub fn random_disjoint_line<R: Rng>(t: &FieldTower, rng: &mut R) -> (Vec<FieldElement>, Vec<FieldElement>) {
    loop {
        let (a, b) = (random_vector(t, rng), random_vector(t, rng));
        if rank(t.field(), &[a.clone(), b.clone()]) == 2 && line_points(t, &a, &b).iter().all(|p| point_rank(t, p) > 1) {
            return (a, b);
        }
    }
}

/// A plane of PG(4,q^5): a 3-dimensional F_{q^5}-subspace in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    rows: Vec<Vec<FieldElement>>,
}

impl Plane {
    pub fn new(t: &FieldTower, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let refs: Vec<&[FieldElement]> = rows.iter().map(|r| r.as_slice()).collect();
        check_points(t, &refs, 3)?;
        let mut rows = rows;
        rref(t.field(), &mut rows);
        Ok(Plane { rows })
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn contains(&self, t: &FieldTower, p: &[FieldElement]) -> bool {
        let mut m = self.rows.clone();
        m.push(p.to_vec());
        rank(t.field(), &m) == 3
    }

    /// Whether no point of Σ lies in the plane.
    pub fn is_disjoint_from_subgeometry(&self, t: &FieldTower) -> bool {
        rational_points(t).iter().all(|p| !self.contains(t, p))
    }

    /// All q^10 + q^5 + 1 points (as vectors with leading coordinate 1 in the plane basis).
    pub fn points(&self, t: &FieldTower) -> Vec<Vec<FieldElement>> {
        let f = t.field();
        let (a, b, c) = (&self.rows[0], &self.rows[1], &self.rows[2]);
        let mut out = Vec::new();
        for y in f.elements() {
            for z in f.elements() {
                out.push((0..5).map(|i| f.add(a[i], f.add(f.mul(y, b[i]), f.mul(z, c[i])))).collect());
            }
        }
        for z in f.elements() {
            out.push(combine(t, b, z, c));
        }
        out.push(c.clone());
        out
    }

    /// The plane spanned by the kernel of x -> sum_i x_i (u_i, v_i), for U with
    /// F_q-basis (u_i, v_i). Σ projected from it onto a line is L_U.
    pub fn from_subspace(t: &FieldTower, u: &FqSubspace) -> Result<Self> {
        if u.ambient_r() != 2 || u.rank() != 5 {
            return Err(Error::Dimension(format!(
                "need a rank-5 subspace of F_(q^5)^2, got rank {} in F_(q^5)^{}",
                u.rank(),
                u.ambient_r()
            )));
        }
        let vs = u.vectors(t);
        let m = vec![vs.iter().map(|v| v[0]).collect::<Vec<_>>(), vs.iter().map(|v| v[1]).collect()];
        let kernel = null_space(t.field(), &m, 5);
        if kernel.len() != 3 {
            return Err(Error::Domain("the linear set is a single point".into()));
        }
        Plane::new(t, kernel)
    }

    /// The rank-5 subspace {(h1(c), h2(c)) : c in F_q^5}, h1, h2 spanning the annihilator.
    pub fn to_subspace(&self, t: &FieldTower) -> Result<FqSubspace> {
        let h = null_space(t.field(), &self.rows, 5);
        let vs: Vec<Vec<FieldElement>> = (0..5).map(|i| vec![h[0][i], h[1][i]]).collect();
        let u = span_from_vectors(t, &vs)?;
        if u.rank() != 5 {
            return Err(Error::NotDisjoint("projection vertex not disjoint from subgeometry"));
        }
        Ok(u)
    }
}

/// Projects Σ from the plane onto a line: rational points are grouped by the
/// solid <P, Π>; a group of (q^w - 1)/(q - 1) rational points is a point of weight w.
pub fn project_from_plane(t: &FieldTower, plane: &Plane) -> Result<WeightDistribution> {
    let f = t.field();
    let mut groups: HashMap<Vec<Vec<FieldElement>>, u64> = HashMap::new();
    for p in rational_points(t) {
        let mut m = plane.rows.clone();
        m.push(p);
        rref(f, &mut m);
        if m.len() != 4 {
            return Err(Error::NotDisjoint("projection vertex not disjoint from subgeometry"));
        }
        *groups.entry(m).or_default() += 1;
    }
    let q = t.q() as u64;
    let mut dense = [0u64; 6];
    for &n in groups.values() {
        let w = (1..=5).find(|&w| (q.pow(w) - 1) / (q - 1) == n).ok_or_else(|| {
            Error::Invariant(format!("{n} rational points project to one point, not a (q^w-1)/(q-1)"))
        })?;
        dense[w as usize] += 1;
    }
    WeightDistribution::from_dense(t.q(), 5, &dense)
}

/// A random plane disjoint from Σ.
pub fn random_plane<R: Rng>(t: &FieldTower, rng: &mut R) -> Plane {
    loop {
        let rows = vec![random_vector(t, rng), random_vector(t, rng), random_vector(t, rng)];
        if let Ok(p) = Plane::new(t, rows) {
            if p.is_disjoint_from_subgeometry(t) {
                return p;
            }
        }
    }
}

/// Planes from the construction remark: <Q0 + a Q1, Q0 + a^{-1} Q2, Q3 + b Q4>.
pub fn remark_plane(t: &FieldTower, a: FieldElement, b: FieldElement) -> Result<Plane> {
    let e: Vec<Vec<FieldElement>> = (0..5).map(|i| unit(t, i)).collect();
    let rows = vec![combine(t, &e[0], a, &e[1]), combine(t, &e[0], t.field().inv(a), &e[2]), combine(t, &e[3], b, &e[4])];
    let plane = Plane::new(t, rows)?;
    if !plane.is_disjoint_from_subgeometry(t) {
        return Err(Error::NotDisjoint("projection vertex not disjoint from subgeometry"));
    }
    Ok(plane)
}

/// Rank-2 points of a plane and the lines joining at least three of them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaneProfile {
    pub count: u64,
    /// secant size -> number of lines of the plane meeting Ω₂ in that many points (sizes >= 3)
    pub secants: BTreeMap<u64, u64>,
    /// whether no three of the rank-2 points are collinear
    pub arc: bool,
    #[serde(skip)]
    pub points: Vec<Vec<FieldElement>>,
    #[serde(skip)]
    pub lines: Vec<Vec<usize>>,
}

pub fn plane_omega2_profile(t: &FieldTower, plane: &Plane) -> PlaneProfile {
    let points: Vec<Vec<FieldElement>> = plane.points(t).into_iter().filter(|p| point_rank(t, p) == 2).collect();
    let f = t.field();
    let n = points.len();
    let mut lines: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if seen.contains(&(i, j)) {
                continue;
            }
            let on: Vec<usize> = (0..n)
                .filter(|&k| k == i || k == j || rank(f, &[points[i].clone(), points[j].clone(), points[k].clone()]) == 2)
                .collect();
            for (x, &a) in on.iter().enumerate() {
                for &b in &on[x + 1..] {
                    seen.insert((a, b));
                }
            }
            if on.len() >= 3 {
                lines.push(on);
            }
        }
    }
    let mut secants = BTreeMap::new();
    for l in &lines {
        *secants.entry(l.len() as u64).or_default() += 1;
    }
    PlaneProfile { count: n as u64, arc: lines.is_empty(), secants, points, lines }
}

/// Admissible sizes of an arc of rank-2 points in a plane without secants.
pub fn arc_size_allowed(q: u64, s: u64) -> bool {
    let d = s as i64 - q as i64 - 1;
    s == 0 || d * d <= 4 * q as i64 || [2 * q, 2 * q + 1, 3 * q, 3 * q + 1, q * q + 1].contains(&s)
}

//! F_q-subspaces of F_{q^5}^r, linear sets on PG(1,q^5) and their classification.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldTower};
use crate::kernel::PointHistogram;
use crate::linalg::{rank, rref};
use crate::linpoly::QPolynomial;
use crate::weights::WeightDistribution;

/// A point of PG(r-1, q^5) with its first nonzero coordinate scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(t: &FieldTower, coords: Vec<FieldElement>) -> Result<Self> {
        let f = t.field();
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Domain("the zero vector is not a projective point".into()))?;
        let inv = f.inv(lead);
        Ok(ProjectivePoint { coords: coords.iter().map(|&c| f.mul(c, inv)).collect() })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// All q^5 + 1 points of PG(1,q^5): <(1, g)> for g in encoding order, then <(0, 1)>.
    pub fn line_points(t: &FieldTower) -> impl Iterator<Item = ProjectivePoint> + '_ {
        let one = t.element(1);
        t.field()
            .elements()
            .map(move |g| ProjectivePoint { coords: vec![one, g] })
            .chain(std::iter::once(ProjectivePoint { coords: vec![FieldElement::ZERO, one] }))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "<({})>", parts.join(","))
    }
}

/// An F_q-subspace of F_{q^5}^r stored as the reduced row-echelon form of its
/// expanded 5r-column coordinate matrix, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqSubspace {
    ambient_r: usize,
    rows: Vec<Vec<u8>>,
}

fn expand(t: &FieldTower, v: &[FieldElement]) -> Vec<u8> {
    v.iter().flat_map(|&x| t.fq_coordinates(x)).collect()
}

impl FqSubspace {
    pub fn ambient_r(&self) -> usize {
        self.ambient_r
    }

    /// F_q-dimension.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// The canonical basis as vectors over F_{q^5}.
    pub fn vectors(&self, t: &FieldTower) -> Vec<Vec<FieldElement>> {
        self.rows
            .iter()
            .map(|row| {
                row.chunks(5)
                    .map(|c| t.from_fq_coordinates(&[c[0], c[1], c[2], c[3], c[4]]))
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, t: &FieldTower, v: &[FieldElement]) -> bool {
        let mut m = self.rows.clone();
        m.push(expand(t, v));
        rank(t.fq(), &m) == self.rank()
    }

    /// dim(self ∩ other) = dim self + dim other - dim(self + other).
    pub fn intersection_dim(&self, t: &FieldTower, other: &FqSubspace) -> usize {
        assert_eq!(self.ambient_r, other.ambient_r, "ambient dimensions differ");
        let mut m = self.rows.clone();
        m.extend(other.rows.iter().cloned());
        self.rank() + other.rank() - rank(t.fq(), &m)
    }

    /// Image under v -> M v for a 2x2 matrix over F_{q^5} (rows of M given).
    pub fn transform(&self, t: &FieldTower, m: &[[FieldElement; 2]; 2]) -> Result<FqSubspace> {
        if self.ambient_r != 2 {
            return Err(Error::Dimension(format!("expected ambient_r = 2, got {}", self.ambient_r)));
        }
        let f = t.field();
        let vs: Vec<Vec<FieldElement>> = self
            .vectors(t)
            .into_iter()
            .map(|v| (0..2).map(|i| f.add(f.mul(m[i][0], v[0]), f.mul(m[i][1], v[1]))).collect())
            .collect();
        span_from_vectors(t, &vs)
    }

    /// The F_q-span of {(x, f(x))}.
    pub fn graph(t: &FieldTower, f: &QPolynomial) -> FqSubspace {
        let vs: Vec<Vec<FieldElement>> = t.fq_basis().iter().map(|&b| vec![b, f.evaluate(t, b)]).collect();
        span_from_vectors(t, &vs).expect("graph of a linear map is nonzero")
    }
}

/// Canonical F_q-span of vectors of F_{q^5}^r, r in {1, 2, 5}.
pub fn span_from_vectors(t: &FieldTower, vs: &[Vec<FieldElement>]) -> Result<FqSubspace> {
    let r = vs.first().map_or(0, Vec::len);
    if ![1, 2, 5].contains(&r) {
        return Err(Error::Dimension(format!("ambient dimension {r} not in {{1, 2, 5}}")));
    }
    if let Some(v) = vs.iter().find(|v| v.len() != r) {
        return Err(Error::Dimension(format!("vector of length {} in a span of length-{r} vectors", v.len())));
    }
    let mut rows: Vec<Vec<u8>> = vs.iter().map(|v| expand(t, v)).collect();
    rref(t.fq(), &mut rows);
    if rows.is_empty() {
        return Err(Error::EmptySubspace);
    }
    Ok(FqSubspace { ambient_r: r, rows })
}

/// The 5-dimensional F_q-space {l v : l in F_{q^5}} of a projective point.
pub fn point_space(t: &FieldTower, p: &ProjectivePoint) -> FqSubspace {
    let f = t.field();
    let vs: Vec<Vec<FieldElement>> =
        t.fq_basis().iter().map(|&b| p.coords().iter().map(|&c| f.mul(b, c)).collect()).collect();
    span_from_vectors(t, &vs).expect("a projective point is nonzero")
}

/// dim_{F_q}(U ∩ <v_P>_{q^5}).
pub fn point_weight(t: &FieldTower, u: &FqSubspace, p: &ProjectivePoint) -> usize {
    u.intersection_dim(t, &point_space(t, p))
}

/// Weight distribution by one intersection computation per point of PG(1,q^5).
pub fn weight_distribution(t: &FieldTower, u: &FqSubspace) -> Result<WeightDistribution> {
    check_line_subspace(u)?;
    let mut dense = [0u64; 6];
    for p in ProjectivePoint::line_points(t) {
        let w = point_weight(t, u, &p);
        if w > 0 {
            dense[w] += 1;
        }
    }
    WeightDistribution::from_dense(t.q(), u.rank() as u32, &dense)
}

/// Same as `weight_distribution`, through the point histogram.
pub fn weight_distribution_fast(h: &mut PointHistogram<'_>, u: &FqSubspace) -> Result<WeightDistribution> {
    check_line_subspace(u)?;
    let vs = u.vectors(h.tower());
    let gx: Vec<FieldElement> = vs.iter().map(|v| v[0]).collect();
    let gy: Vec<FieldElement> = vs.iter().map(|v| v[1]).collect();
    Ok(h.distribution(&gx, &gy).expect("canonical basis is independent"))
}

fn check_line_subspace(u: &FqSubspace) -> Result<()> {
    if u.ambient_r() != 2 {
        return Err(Error::Dimension(format!("linear sets on PG(1,q^5) need ambient_r = 2, got {}", u.ambient_r())));
    }
    if u.rank() > 5 {
        return Err(Error::Dimension(format!("rank {} > 5 gives the whole line", u.rank())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    Scattered,
    Club(u32),
    Weight3With(u64),
    Weight2Only(u64),
    SinglePoint,
    Illegal(String),
}

impl ClassTag {
    /// Short machine name used in reports.
    pub fn name(&self) -> String {
        match self {
            ClassTag::Scattered => "scattered".into(),
            ClassTag::Club(k) => format!("club{k}"),
            ClassTag::Weight3With(s) => format!("weight3_s{s}"),
            ClassTag::Weight2Only(s) => format!("weight2_s{s}"),
            ClassTag::SinglePoint => "single_point".into(),
            ClassTag::Illegal(_) => "illegal".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub tag: ClassTag,
    pub rank: u32,
    pub legal: bool,
    /// Why the distribution is not allowed, when `legal` is false.
    pub reason: Option<String>,
}

fn weight2_only_allowed(q: u64, s: u64) -> bool {
    let d = s as i64 - q as i64 - 1;
    d * d <= 4 * q as i64 || [2 * q, 2 * q + 1, 2 * q + 2, 3 * q, 3 * q + 1, q * q + 1].contains(&s)
}

/// Allowed distributions of rank k <= 4 on PG(1,q^5), as dense arrays.
pub fn low_rank_table(q: u64, k: u32) -> Vec<[u64; 6]> {
    match k {
        1 => vec![[0, 1, 0, 0, 0, 0]],
        2 => vec![[0, 0, 1, 0, 0, 0], [0, q + 1, 0, 0, 0, 0]],
        3 => vec![[0, 0, 0, 1, 0, 0], [0, q * q, 1, 0, 0, 0], [0, q * q + q + 1, 0, 0, 0, 0]],
        4 => vec![
            [0, 0, 0, 0, 1, 0],
            [0, q.pow(3), 0, 1, 0, 0],
            [0, q.pow(3) + q * q, 1, 0, 0, 0],
            [0, q.pow(3) + q * q - q - 1, 2, 0, 0, 0],
            [0, q.pow(3) - q, q + 1, 0, 0, 0],
            // scattered; missing from the usual list but realized by any
            // 4-dimensional subspace of a scattered rank-5 subspace
            [0, q.pow(3) + q * q + q + 1, 0, 0, 0, 0],
        ],
        _ => vec![],
    }
}

/// Classifies a weight distribution and checks it against the known lists
/// (the rank-5 classification and the rank <= 4 tables for PG(1,q^5)).
pub fn classify(q: u32, d: &WeightDistribution) -> Result<Classification> {
    if d.q() != q {
        return Err(Error::Dimension(format!("distribution over q = {} classified with q = {q}", d.q())));
    }
    d.validate()?;
    let heavy: Vec<(u32, u64)> = d.counts().iter().filter(|&(&w, _)| w >= 2).map(|(&w, &n)| (w, n)).collect();
    let heavy_points: u64 = heavy.iter().map(|&(_, n)| n).sum();
    let s = d.count(2);
    let tag = if heavy.is_empty() {
        ClassTag::Scattered
    } else if d.size() == 1 {
        ClassTag::SinglePoint
    } else if heavy_points == 1 {
        ClassTag::Club(heavy[0].0)
    } else if d.max_weight() == 3 && d.count(3) == 1 {
        ClassTag::Weight3With(s)
    } else if d.max_weight() == 2 {
        ClassTag::Weight2Only(s)
    } else {
        ClassTag::Illegal(format!("{} points of weight >= 3", heavy_points - s))
    };

    let qq = q as u64;
    let reason = if d.rank() == 5 {
        match &tag {
            ClassTag::Scattered | ClassTag::SinglePoint | ClassTag::Club(3) | ClassTag::Club(4) => None,
            ClassTag::Club(_) => Some("no 2-clubs of rank 5 in PG(1,q^5)".to_string()),
            ClassTag::Weight3With(s) if *s == qq || *s == qq * qq => None,
            ClassTag::Weight3With(s) => Some(format!("a weight-3 point forces 0, q or q^2 weight-2 points, found {s}")),
            ClassTag::Weight2Only(s) if weight2_only_allowed(qq, *s) => None,
            ClassTag::Weight2Only(s) => Some(format!("{s} points of weight 2 is not an allowed count")),
            ClassTag::Illegal(r) => Some(r.clone()),
        }
    } else if low_rank_table(qq, d.rank()).contains(&d.dense()) {
        None
    } else {
        Some(format!("{d} is not a rank-{} distribution on PG(1,q^5)", d.rank()))
    };
    Ok(Classification { tag, rank: d.rank(), legal: reason.is_none(), reason })
}

/// JSON record `{"q","rank","weights","size","class","legal"}` for a distribution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionRecord {
    #[serde(flatten)]
    pub distribution: WeightDistribution,
    pub size: u64,
    pub class: String,
    pub legal: bool,
}

impl DistributionRecord {
    pub fn new(d: &WeightDistribution) -> Result<Self> {
        let c = classify(d.q(), d)?;
        Ok(DistributionRecord { distribution: d.clone(), size: d.size(), class: c.tag.name(), legal: c.legal })
    }
}

/// All weight distributions of rank-k linear sets (k <= 4), by exhaustive search.
///
/// Some point of PG(1,q^5) has weight 0, so up to PGL(2,q^5) the subspace is a
/// graph {(x, f(x)) : x in W}. Scaling x allows 1 in W, and replacing f by
/// f - f(1) x allows f(1) = 0. The search runs over every W containing 1 and
/// every f on W with f(1) = 0.
pub fn low_rank_distributions(t: &FieldTower, k: usize) -> Result<BTreeSet<WeightDistribution>> {
    if !(1..=4).contains(&k) {
        return Err(Error::Domain(format!("low-rank enumeration needs 1 <= k <= 4, got {k}")));
    }
    let one = t.element(1);
    let order = t.order();
    let mut spaces: HashMap<FqSubspace, Vec<FieldElement>> = HashMap::new();
    let mut tuple = vec![0u32; k - 1];
    loop {
        let mut gens = vec![one];
        gens.extend(tuple.iter().map(|&e| t.element(e)));
        if t.fq_rank(&gens) == k {
            let vs: Vec<Vec<FieldElement>> = gens.iter().map(|&g| vec![g]).collect();
            spaces.entry(span_from_vectors(t, &vs)?).or_insert(gens);
        }
        if !advance(&mut tuple, order) {
            break;
        }
    }

    let mut h = PointHistogram::new(t);
    let mut found = BTreeSet::new();
    let mut ys = vec![0u32; k - 1];
    let mut gy = vec![FieldElement::ZERO; k];
    loop {
        for (j, &e) in ys.iter().enumerate() {
            gy[j + 1] = t.element(e);
        }
        for gx in spaces.values() {
            found.insert(h.distribution(gx, &gy).expect("gx is independent"));
        }
        if !advance(&mut ys, order) {
            break;
        }
    }
    Ok(found)
}

fn advance(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// The q-polynomial f with U = {(x, f(x))}, if U is such a graph.
pub fn graph_polynomial(t: &FieldTower, u: &FqSubspace) -> Result<QPolynomial> {
    check_line_subspace(u)?;
    let vs = u.vectors(t);
    let xs: Vec<FieldElement> = vs.iter().map(|v| v[0]).collect();
    if vs.len() != 5 || t.fq_rank(&xs) != 5 {
        return Err(Error::Domain("subspace is not the graph of a map on F_{q^5}".into()));
    }
    // f(u_i) = v_i for the basis u_i: a Moore system in the coefficients
    let rows: Vec<Vec<FieldElement>> = vs
        .iter()
        .map(|v| {
            let mut row: Vec<FieldElement> = (0..5).map(|j| t.frobenius(v[0], j)).collect();
            row.push(v[1]);
            row
        })
        .collect();
    let mut m = rows;
    rref(t.field(), &mut m);
    let a: [FieldElement; 5] = std::array::from_fn(|j| m[j][5]);
    Ok(QPolynomial::new(a))
}

/// A q-polynomial whose graph is PGL(2,q^5)-equivalent to U (so has the same weights).
pub fn equivalent_graph(t: &FieldTower, u: &FqSubspace) -> Result<QPolynomial> {
    check_line_subspace(u)?;
    if u.rank() != 5 {
        return Err(Error::Dimension(format!("graphs have rank 5, got {}", u.rank())));
    }
    let f = t.field();
    let free = ProjectivePoint::line_points(t)
        .find(|p| point_weight(t, u, p) == 0)
        .ok_or_else(|| Error::Domain("every point has positive weight".into()))?;
    let (x, y) = (free.coords()[0], free.coords()[1]);
    let one = t.element(1);
    // send <(x, y)> to <(0, 1)>
    let m = if x.is_zero() {
        [[one, FieldElement::ZERO], [FieldElement::ZERO, one]]
    } else {
        [[y, f.neg(x)], [FieldElement::ZERO, one]]
    };
    let m = if y.is_zero() { [[FieldElement::ZERO, one], [one, FieldElement::ZERO]] } else { m };
    graph_polynomial(t, &u.transform(t, &m)?)
}

/// Per-weight point lists of a subspace, from the histogram route.
pub fn weighted_points(h: &mut PointHistogram<'_>, u: &FqSubspace) -> Result<BTreeMap<u32, Vec<ProjectivePoint>>> {
    check_line_subspace(u)?;
    let vs = u.vectors(h.tower());
    let gx: Vec<FieldElement> = vs.iter().map(|v| v[0]).collect();
    let gy: Vec<FieldElement> = vs.iter().map(|v| v[1]).collect();
    h.run(&gx, &gy);
    let mut out: BTreeMap<u32, Vec<ProjectivePoint>> = BTreeMap::new();
    for (c, w) in h.points() {
        out.entry(w).or_default().push(ProjectivePoint { coords: c.to_vec() });
    }
    for pts in out.values_mut() {
        pts.sort();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tower(q: u32) -> FieldTower {
        FieldTower::for_q(q).unwrap()
    }

    fn dist(q: u32, rank: u32, dense: [u64; 6]) -> WeightDistribution {
        WeightDistribution::from_dense(q, rank, &dense).unwrap()
    }

    #[test]
    fn span_examples() {
        let t = tower(3);
        let vs: Vec<Vec<FieldElement>> = t.fq_basis().iter().map(|&b| vec![b, FieldElement::ZERO]).collect();
        assert_eq!(span_from_vectors(&t, &vs).unwrap().rank(), 5);
        let v = vec![t.element(7), t.element(11)];
        let two_v: Vec<FieldElement> = v.iter().map(|&x| t.scale(2, x)).collect();
        assert_eq!(span_from_vectors(&t, &[v, two_v]).unwrap().rank(), 1);
        let zero = vec![FieldElement::ZERO, FieldElement::ZERO];
        assert_eq!(span_from_vectors(&t, &[zero]), Err(Error::EmptySubspace));
        assert!(matches!(span_from_vectors(&t, &[vec![t.element(1); 3]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn spans_are_canonical() {
        let t = tower(2);
        let f = t.field();
        let (a, b) = (vec![t.element(3), t.element(5)], vec![t.element(9), t.element(17)]);
        let sum: Vec<FieldElement> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect();
        let u1 = span_from_vectors(&t, &[a.clone(), b.clone()]).unwrap();
        let u2 = span_from_vectors(&t, &[sum, a]).unwrap();
        assert_eq!(u1, u2);
        for v in u1.vectors(&t) {
            assert!(u2.contains(&t, &v));
        }
    }

    #[test]
    fn graph_distribution_matches_subspace_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 3] {
            let t = tower(q);
            let mut h = PointHistogram::new(&t);
            for _ in 0..100 {
                let f = QPolynomial::random(&t, &mut rng);
                let u = FqSubspace::graph(&t, &f);
                let d = weight_distribution(&t, &u).unwrap();
                assert_eq!(d, crate::linpoly::graph_weight_distribution(&t, &f));
                assert_eq!(d, weight_distribution_fast(&mut h, &u).unwrap());
                let vertical = ProjectivePoint::new(&t, vec![FieldElement::ZERO, t.element(1)]).unwrap();
                assert_eq!(point_weight(&t, &u, &vertical), 0);
            }
        }
    }

    #[test]
    fn weights_are_pgl_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [2, 3] {
            let t = tower(q);
            let f = t.field();
            let mut h = PointHistogram::new(&t);
            let samples = [
                QPolynomial::trace(&t),
                QPolynomial::monomial(t.element(1), 1),
                QPolynomial::random(&t, &mut rng),
                QPolynomial::random(&t, &mut rng),
            ];
            for p in samples {
                let u = FqSubspace::graph(&t, &p);
                let d = weight_distribution(&t, &u).unwrap();
                let mut trials = 0;
                while trials < 20 {
                    let m: [[FieldElement; 2]; 2] =
                        std::array::from_fn(|_| std::array::from_fn(|_| t.element(rng.gen_range(0..t.order()))));
                    if f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0])).is_zero() {
                        continue;
                    }
                    trials += 1;
                    let image = u.transform(&t, &m).unwrap();
                    assert_eq!(weight_distribution_fast(&mut h, &image).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn point_weights_in_weight3_family() {
        // <(mu1 + mu2 a + mu3 a^2, mu4 + mu5 a)>
        for q in [2, 3] {
            let t = tower(q);
            let f = t.field();
            let a = t.primitive_element();
            let (one, zero) = (t.element(1), FieldElement::ZERO);
            let gens = vec![
                vec![one, zero],
                vec![a, zero],
                vec![f.mul(a, a), zero],
                vec![zero, one],
                vec![zero, a],
            ];
            let u = span_from_vectors(&t, &gens).unwrap();
            assert_eq!(u.rank(), 5);
            let p = |x, y| ProjectivePoint::new(&t, vec![x, y]).unwrap();
            assert_eq!(point_weight(&t, &u, &p(one, zero)), 3);
            for l1 in 0..q as u8 {
                for l2 in 0..q as u8 {
                    let x = f.add(t.sub_elem(l1), t.scale(l2, a));
                    assert_eq!(point_weight(&t, &u, &p(x, one)), 2);
                }
            }
            let d = weight_distribution(&t, &u).unwrap();
            let qq = q as u64;
            assert_eq!(d.dense(), [0, qq.pow(4) - qq * qq, qq * qq, 1, 0, 0]);
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify(2, &dist(2, 5, [0, 16, 0, 0, 1, 0])).unwrap();
        assert_eq!((c.tag, c.legal), (ClassTag::Club(4), true));
        let c = classify(3, &dist(3, 5, [0, 72, 9, 1, 0, 0])).unwrap();
        assert_eq!((c.tag, c.legal), (ClassTag::Weight3With(9), true));
        let c = classify(2, &dist(2, 5, [0, 28, 1, 0, 0, 0])).unwrap();
        assert_eq!((c.tag.clone(), c.legal), (ClassTag::Club(2), false));
        assert!(c.reason.unwrap().contains("2-clubs"));
        assert_eq!(classify(2, &dist(2, 5, [0, 31, 0, 0, 0, 0])).unwrap().tag, ClassTag::Scattered);
        assert_eq!(classify(2, &dist(2, 5, [0, 0, 0, 0, 0, 1])).unwrap().tag, ClassTag::SinglePoint);
        let c = classify(2, &dist(2, 5, [0, 18, 2, 1, 0, 0])).unwrap();
        assert_eq!((c.tag, c.legal), (ClassTag::Weight3With(2), true));
        let c = classify(3, &dist(3, 5, [0, 104, 1, 1, 0, 0])).unwrap();
        assert_eq!((c.tag, c.legal), (ClassTag::Weight3With(1), false));
        let c = classify(2, &dist(2, 5, [0, 31 - 3 * 7, 7, 0, 0, 0])).unwrap();
        assert_eq!((c.tag, c.legal), (ClassTag::Weight2Only(7), true));
        let c = classify(3, &dist(3, 5, [0, 121 - 4 * 11, 11, 0, 0, 0])).unwrap();
        assert_eq!((c.tag, c.legal), (ClassTag::Weight2Only(11), false));
        assert!(matches!(classify(3, &dist(2, 5, [0, 31, 0, 0, 0, 0])), Err(Error::Dimension(_))));
    }

    #[test]
    fn record_json_shape() {
        let r = DistributionRecord::new(&dist(2, 5, [0, 16, 0, 0, 1, 0])).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"q":2,"rank":5,"weights":{"1":16,"4":1},"size":17,"class":"club4","legal":true}"#
        );
    }

    #[test]
    fn graphs_round_trip_through_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for q in [2, 3] {
            let t = tower(q);
            let mut h = PointHistogram::new(&t);
            for _ in 0..20 {
                let f = QPolynomial::random(&t, &mut rng);
                assert_eq!(graph_polynomial(&t, &FqSubspace::graph(&t, &f)).unwrap(), f);
            }
            let a = t.primitive_element();
            let fe = t.field();
            let (one, zero) = (t.element(1), FieldElement::ZERO);
            let gens = vec![vec![one, zero], vec![a, zero], vec![fe.mul(a, a), zero], vec![zero, one], vec![zero, a]];
            let u = span_from_vectors(&t, &gens).unwrap();
            assert!(graph_polynomial(&t, &u).is_err());
            let g = equivalent_graph(&t, &u).unwrap();
            assert_eq!(crate::linpoly::graph_weight_distribution(&t, &g), weight_distribution_fast(&mut h, &u).unwrap());
        }
    }

    #[test]
    fn low_rank_distributions_match_table_q2() {
        let t = tower(2);
        for k in 1..=4usize {
            let found = low_rank_distributions(&t, k).unwrap();
            let found: BTreeSet<[u64; 6]> = found.iter().map(|d| d.dense()).collect();
            let expected: BTreeSet<[u64; 6]> = low_rank_table(2, k as u32).into_iter().collect();
            assert_eq!(found, expected, "rank {k}");
        }
    }

    #[test]
    fn low_rank_distributions_match_table_q3_rank3() {
        let t = tower(3);
        let found: BTreeSet<[u64; 6]> = low_rank_distributions(&t, 3).unwrap().iter().map(|d| d.dense()).collect();
        assert_eq!(found, low_rank_table(3, 3).into_iter().collect());
    }
}

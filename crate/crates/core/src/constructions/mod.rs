//! Named constructions of rank-5 linear sets and the census of all weight
//! distributions via q-polynomials.

mod census;

pub use census::{census, Census, CensusEntry, CensusOptions, Strategy};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::same_g_orbit;
use crate::gf::{FieldElement, FieldTower};
use crate::kernel::PointHistogram;
use crate::linpoly::QPolynomial;
use crate::linset::{span_from_vectors, weight_distribution_fast, FqSubspace};
use crate::weights::WeightDistribution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionSpec {
    /// {(x, x^q)}
    Scattered,
    /// {(x, Tr(x))}
    TraceClub,
    /// <(m1 + m2 a + m3 a^2, m4 + m5 a)>
    Weight3Qsq { alpha: FieldElement },
    /// <(m1 + m2 a + m3 a^2, m4 + m5 b)>
    Weight3Q { alpha: FieldElement, beta: FieldElement },
    /// <(m1 a + m2 a^2 + m3 a^3 + m4 a^4, m4 + m5 a)>
    ThreeClub { alpha: FieldElement },
    /// <(m1 + m2 g + m3 g d1, m4 + m5 g + m3 g d2)>
    FamilyGdd { gamma: FieldElement, delta1: FieldElement, delta2: FieldElement },
    /// <(m1 + m2 g0 + m3 g0 g1 + m4 g2, m5 + m3 g1' + m4 g2')>
    FamilyG5 {
        gamma0: FieldElement,
        gamma1: FieldElement,
        gamma2: FieldElement,
        gamma1p: FieldElement,
        gamma2p: FieldElement,
    },
    /// {(x - a x^{q^2}, x^q - b x^{q^2})}
    Zanella { alpha: FieldElement, beta: FieldElement },
}

impl ConstructionSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ConstructionSpec::Scattered => "scattered",
            ConstructionSpec::TraceClub => "trace_club",
            ConstructionSpec::Weight3Qsq { .. } => "weight3_qsq",
            ConstructionSpec::Weight3Q { .. } => "weight3_q",
            ConstructionSpec::ThreeClub { .. } => "three_club",
            ConstructionSpec::FamilyGdd { .. } => "family_gdd",
            ConstructionSpec::FamilyG5 { .. } => "family_g5",
            ConstructionSpec::Zanella { .. } => "zanella",
        }
    }

    /// Builds a spec from a kind name and parameter encodings (in declaration order).
    /// Missing `alpha` parameters default to the tower's primitive element.
    pub fn from_parts(t: &FieldTower, kind: &str, params: &[u32]) -> Result<Self> {
        let el = |i: usize| -> Result<FieldElement> {
            let e = params.get(i).ok_or_else(|| Error::Parse(format!("{kind} needs parameter #{}", i + 1)))?;
            t.field().try_element(*e)
        };
        let alpha = || if params.is_empty() { Ok(t.primitive_element()) } else { el(0) };
        let want = match kind {
            "scattered" | "trace_club" => 0,
            "weight3_qsq" | "three_club" => usize::from(!params.is_empty()),
            "weight3_q" | "zanella" => 2,
            "family_gdd" => 3,
            "family_g5" => 5,
            other => return Err(Error::Parse(format!("unknown construction {other:?}"))),
        };
        if params.len() != want {
            return Err(Error::Parse(format!("{kind} takes {want} parameters, got {}", params.len())));
        }
        Ok(match kind {
            "scattered" => ConstructionSpec::Scattered,
            "trace_club" => ConstructionSpec::TraceClub,
            "weight3_qsq" => ConstructionSpec::Weight3Qsq { alpha: alpha()? },
            "three_club" => ConstructionSpec::ThreeClub { alpha: alpha()? },
            "weight3_q" => ConstructionSpec::Weight3Q { alpha: el(0)?, beta: el(1)? },
            "zanella" => ConstructionSpec::Zanella { alpha: el(0)?, beta: el(1)? },
            "family_gdd" => ConstructionSpec::FamilyGdd { gamma: el(0)?, delta1: el(1)?, delta2: el(2)? },
            _ => ConstructionSpec::FamilyG5 {
                gamma0: el(0)?,
                gamma1: el(1)?,
                gamma2: el(2)?,
                gamma1p: el(3)?,
                gamma2p: el(4)?,
            },
        })
    }
}

fn violated(spec: &ConstructionSpec, clause: &str) -> Error {
    Error::Parameter { kind: spec.kind(), clause: clause.to_string() }
}

/// The distribution a construction is known to have, when it is fixed by the kind.
pub fn claimed_distribution(t: &FieldTower, spec: &ConstructionSpec) -> Option<WeightDistribution> {
    let q = t.q() as u64;
    let dense = match spec {
        ConstructionSpec::Scattered => [0, (q.pow(5) - 1) / (q - 1), 0, 0, 0, 0],
        ConstructionSpec::TraceClub => [0, q.pow(4), 0, 0, 1, 0],
        ConstructionSpec::Weight3Qsq { .. } => [0, q.pow(4) - q * q, q * q, 1, 0, 0],
        ConstructionSpec::Weight3Q { .. } => [0, q * (q + 1) * (q * q - 1), q, 1, 0, 0],
        ConstructionSpec::ThreeClub { .. } => [0, q.pow(4) + q.pow(3), 0, 1, 0, 0],
        _ => return None,
    };
    Some(WeightDistribution::from_dense(t.q(), 5, &dense).expect("claimed distributions are consistent"))
}

/// The F_q-generators (x_i, y_i) of the subspace, before any checks.
fn generators(t: &FieldTower, spec: &ConstructionSpec) -> Vec<[FieldElement; 2]> {
    let f = t.field();
    let (one, zero) = (t.element(1), FieldElement::ZERO);
    let graph = |p: QPolynomial| t.fq_basis().iter().map(|&b| [b, p.evaluate(t, b)]).collect();
    match *spec {
        ConstructionSpec::Scattered => graph(QPolynomial::monomial(one, 1)),
        ConstructionSpec::TraceClub => graph(QPolynomial::trace(t)),
        ConstructionSpec::Weight3Qsq { alpha: a } => {
            vec![[one, zero], [a, zero], [f.mul(a, a), zero], [zero, one], [zero, a]]
        }
        ConstructionSpec::Weight3Q { alpha: a, beta: b } => {
            vec![[one, zero], [a, zero], [f.mul(a, a), zero], [zero, one], [zero, b]]
        }
        ConstructionSpec::ThreeClub { alpha: a } => {
            let p = |k| f.pow(a, k);
            vec![[a, zero], [p(2), zero], [p(3), zero], [p(4), one], [zero, a]]
        }
        ConstructionSpec::FamilyGdd { gamma: g, delta1: d1, delta2: d2 } => {
            vec![[one, zero], [g, zero], [f.mul(g, d1), f.mul(g, d2)], [zero, one], [zero, g]]
        }
        ConstructionSpec::FamilyG5 { gamma0: g0, gamma1: g1, gamma2: g2, gamma1p: h1, gamma2p: h2 } => {
            vec![[one, zero], [g0, zero], [f.mul(g0, g1), h1], [g2, h2], [zero, one]]
        }
        ConstructionSpec::Zanella { alpha: a, beta: b } => t
            .fq_basis()
            .iter()
            .map(|&x| {
                let x2 = t.frobenius(x, 2);
                [f.sub(x, f.mul(a, x2)), f.sub(t.frobenius(x, 1), f.mul(b, x2))]
            })
            .collect(),
    }
}

/// Checks the kind's parameter constraints.
pub fn check_parameters(t: &FieldTower, spec: &ConstructionSpec) -> Result<()> {
    let f = t.field();
    let primitive = |a: FieldElement| {
        if f.is_primitive(a) {
            Ok(())
        } else {
            Err(violated(spec, "alpha must be a primitive element of F_(q^5)"))
        }
    };
    match *spec {
        ConstructionSpec::Weight3Qsq { alpha } | ConstructionSpec::ThreeClub { alpha } => primitive(alpha),
        ConstructionSpec::Weight3Q { alpha, beta } => {
            primitive(alpha)?;
            if t.is_in_subfield(beta) || same_g_orbit(t, alpha, beta)? {
                return Err(violated(spec, "beta must not be of the form (a alpha + b)/(c alpha + d) with a, b, c, d in F_q"));
            }
            Ok(())
        }
        ConstructionSpec::Zanella { alpha, beta } => {
            if t.frobenius(alpha, 1) == f.pow(beta, t.q() as u64 + 1) {
                return Err(violated(spec, "alpha^q != beta^(q+1)"));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Builds the rank-5 subspace of a construction, checking parameters and, where
/// the kind fixes it, the resulting weight distribution.
pub fn build(t: &FieldTower, spec: &ConstructionSpec) -> Result<FqSubspace> {
    check_parameters(t, spec)?;
    let vs: Vec<Vec<FieldElement>> = generators(t, spec).iter().map(|g| g.to_vec()).collect();
    let u = span_from_vectors(t, &vs)?;
    if u.rank() != 5 {
        return Err(violated(spec, "the five generators must be F_q-independent"));
    }
    if let Some(claim) = claimed_distribution(t, spec) {
        let got = weight_distribution_fast(&mut PointHistogram::new(t), &u)?;
        if got != claim {
            return Err(Error::Invariant(format!("{} gave {got}, expected {claim}", spec.kind())));
        }
    }
    Ok(u)
}

/// Distribution of a construction through a caller-owned histogram, without the
/// claim check (for sweeps). None if the generators are dependent.
pub fn sweep_distribution(h: &mut PointHistogram<'_>, spec: &ConstructionSpec) -> Result<Option<WeightDistribution>> {
    let t = h.tower();
    check_parameters(t, spec)?;
    let g = generators(t, spec);
    let gx: Vec<FieldElement> = g.iter().map(|v| v[0]).collect();
    let gy: Vec<FieldElement> = g.iter().map(|v| v[1]).collect();
    Ok(h.distribution(&gx, &gy))
}

/// Weight-2 counts s in case (c) (only weight 1 and 2) of the classification for q = 2, 3, 4.
pub fn weight2_only_counts(q: u32) -> Option<Vec<u64>> {
    match q {
        2 => Some((2..=6).collect()),
        3 => Some(vec![2, 3, 4, 5, 6, 7, 8, 10]),
        4 => Some(vec![2, 3, 4, 5, 6, 7, 8, 9, 10, 17]),
        _ => None,
    }
}

/// All weight distributions of rank-5 linear sets with |S| > 1, for q = 2, 3, 4.
pub fn classification_table(q: u32) -> Option<BTreeSet<WeightDistribution>> {
    let s_list = weight2_only_counts(q)?;
    let qq = q as u64;
    let total = (qq.pow(5) - 1) / (qq - 1);
    let mut dense: Vec<[u64; 6]> = vec![[0, qq.pow(4), 0, 0, 1, 0], [0, total, 0, 0, 0, 0]];
    for s in [0, qq, qq * qq] {
        // one weight-3 point takes q^2 + q + 1 projective points of vectors
        dense.push([0, total - (qq * qq + qq + 1) - s * (qq + 1), s, 1, 0, 0]);
    }
    for s in s_list {
        dense.push([0, total - s * (qq + 1), s, 0, 0, 0]);
    }
    Some(dense.iter().map(|d| WeightDistribution::from_dense(q, 5, d).expect("table entries are consistent")).collect())
}

/// Sizes of rank-5 linear sets with |S| > 1 for q = 2, 3, 4.
pub fn classification_sizes(q: u32) -> Option<BTreeSet<u64>> {
    Some(classification_table(q)?.iter().map(WeightDistribution::size).collect())
}

/// Statements about a set of rank-5 distributions that must hold for any
/// census: every key legal, no 2-club, a weight-3 point comes with 0, q or q^2
/// points of weight 2, and never exactly one point of weight 3 and one of weight 2.
pub fn census_violations<'a>(q: u32, ds: impl IntoIterator<Item = &'a WeightDistribution>) -> Vec<String> {
    let qq = q as u64;
    let mut out = Vec::new();
    for d in ds {
        match crate::linset::classify(q, d) {
            Ok(c) if !c.legal => out.push(format!("{d}: {}", c.reason.unwrap_or_default())),
            Err(e) => out.push(format!("{d}: {e}")),
            Ok(_) => {}
        }
        let heavy: u64 = (2..=5).map(|w| d.count(w)).sum();
        if d.max_weight() == 2 && d.count(2) == 1 {
            out.push(format!("{d}: a 2-club"));
        }
        if d.count(3) > 0 && ![0, qq, qq * qq].contains(&d.count(2)) {
            out.push(format!("{d}: weight-3 point with {} weight-2 points", d.count(2)));
        }
        if heavy == 2 && d.count(3) == 1 && d.count(2) == 1 {
            out.push(format!("{d}: exactly one point of weight 3 and one of weight 2"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linset::weight_distribution;

    fn tower(q: u32) -> FieldTower {
        FieldTower::for_q(q).unwrap()
    }

    #[test]
    fn size_lists() {
        let v = |q| classification_sizes(q).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(v(2), vec![17, 19, 21, 23, 25, 27, 31]);
        assert_eq!(v(3), vec![82, 91, 97, 100, 103, 106, 109, 112, 115, 121]);
        assert_eq!(v(4), vec![257, 273, 301, 305, 309, 313, 317, 321, 325, 329, 333, 341]);
        assert!(classification_table(5).is_none());
        for q in [2, 3, 4] {
            assert!(census_violations(q, &classification_table(q).unwrap()).is_empty());
        }
        let two_club = WeightDistribution::from_dense(2, 5, &[0, 28, 1, 0, 0, 0]).unwrap();
        let three_two = WeightDistribution::from_dense(2, 5, &[0, 21, 1, 1, 0, 0]).unwrap();
        assert_eq!(census_violations(2, [&two_club]).len(), 2);
        assert_eq!(census_violations(2, [&three_two]).len(), 3);
    }

    #[test]
    fn named_constructions_have_claimed_distributions() {
        for q in [2, 3, 4] {
            let t = tower(q);
            let a = t.primitive_element();
            let b = t.non_subfield_elements().find(|&b| !same_g_orbit(&t, a, b).unwrap()).unwrap();
            let specs = [
                ConstructionSpec::Scattered,
                ConstructionSpec::TraceClub,
                ConstructionSpec::Weight3Qsq { alpha: a },
                ConstructionSpec::Weight3Q { alpha: a, beta: b },
                ConstructionSpec::ThreeClub { alpha: a },
            ];
            for s in specs {
                let u = build(&t, &s).unwrap();
                if q < 4 {
                    assert_eq!(weight_distribution(&t, &u).unwrap(), claimed_distribution(&t, &s).unwrap());
                }
            }
        }
    }

    #[test]
    fn three_club_q3() {
        let t = tower(3);
        let u = build(&t, &ConstructionSpec::ThreeClub { alpha: t.primitive_element() }).unwrap();
        let d = weight_distribution(&t, &u).unwrap();
        assert_eq!(d.dense(), [0, 108, 0, 1, 0, 0]);
        assert_eq!(d.size(), 109);
    }

    #[test]
    fn parameter_errors_name_the_clause() {
        let t = tower(2);
        let a = t.primitive_element();
        let f = t.field();
        let err = build(&t, &ConstructionSpec::Weight3Q { alpha: a, beta: f.inv(a) }).unwrap_err();
        assert!(matches!(err, Error::Parameter { kind: "weight3_q", ref clause } if clause.contains("(a alpha + b)")));
        // alpha^q = beta^(q+1) with beta = 1, alpha = 1
        let err = build(&t, &ConstructionSpec::Zanella { alpha: t.element(1), beta: t.element(1) }).unwrap_err();
        assert!(matches!(err, Error::Parameter { kind: "zanella", ref clause } if clause.contains("beta^(q+1)")));
        let err = build(&t, &ConstructionSpec::ThreeClub { alpha: t.element(1) }).unwrap_err();
        assert!(matches!(err, Error::Parameter { kind: "three_club", .. }));
        let err = build(&t, &ConstructionSpec::FamilyGdd { gamma: t.element(1), delta1: a, delta2: a }).unwrap_err();
        assert!(matches!(err, Error::Parameter { kind: "family_gdd", ref clause } if clause.contains("independent")));
    }

    #[test]
    fn spec_from_parts() {
        let t = tower(2);
        assert_eq!(ConstructionSpec::from_parts(&t, "scattered", &[]).unwrap(), ConstructionSpec::Scattered);
        assert_eq!(
            ConstructionSpec::from_parts(&t, "three_club", &[]).unwrap(),
            ConstructionSpec::ThreeClub { alpha: t.primitive_element() }
        );
        assert!(ConstructionSpec::from_parts(&t, "zanella", &[3]).is_err());
        assert!(ConstructionSpec::from_parts(&t, "nope", &[]).is_err());
        assert!(ConstructionSpec::from_parts(&t, "zanella", &[3, 99]).is_err());
    }

    #[test]
    fn zanella_sizes_q2() {
        let t = tower(2);
        let mut h = PointHistogram::new(&t);
        let mut sizes = BTreeSet::new();
        for alpha in t.field().elements() {
            for beta in t.field().elements() {
                let spec = ConstructionSpec::Zanella { alpha, beta };
                if check_parameters(&t, &spec).is_err() {
                    continue;
                }
                let d = sweep_distribution(&mut h, &spec).unwrap().expect("legal parameters give rank 5");
                sizes.insert(d.size());
            }
        }
        assert_eq!(sizes.into_iter().collect::<Vec<_>>(), vec![19, 21, 23, 25]);
    }

    /// gamma d2 in <1, g, g^2, g d1>, g d1 not in <1, g, g^2, g d2>, dim <1, g, g^2, g d1, g^2 d1> != 5.
    fn gdd_subcase(t: &FieldTower, g: FieldElement, d1: FieldElement, d2: FieldElement) -> bool {
        let f = t.field();
        let one = t.element(1);
        let (g2, gd1, gd2) = (f.mul(g, g), f.mul(g, d1), f.mul(g, d2));
        t.fq_rank(&[one, g, g2, gd1, gd2]) == t.fq_rank(&[one, g, g2, gd1])
            && t.fq_rank(&[one, g, g2, gd2, gd1]) > t.fq_rank(&[one, g, g2, gd2])
            && t.fq_rank(&[one, g, g2, gd1, f.mul(g2, d1)]) != 5
    }

    #[test]
    fn gdd_subcase_gives_2q_weight2_points() {
        for q in [2u32, 3] {
            let t = tower(q);
            let mut h = PointHistogram::new(&t);
            let mut found = 0;
            let step = if q == 2 { 1 } else { 7 };
            'search: for g in t.non_subfield_elements().step_by(step) {
                for d1 in t.field().elements().step_by(step) {
                    for d2 in t.field().elements().step_by(step) {
                        if !gdd_subcase(&t, g, d1, d2) {
                            continue;
                        }
                        let spec = ConstructionSpec::FamilyGdd { gamma: g, delta1: d1, delta2: d2 };
                        let Some(d) = sweep_distribution(&mut h, &spec).unwrap() else { continue };
                        if d.max_weight() > 2 {
                            continue;
                        }
                        assert_eq!(d.count(2), 2 * q as u64, "gamma={g} d1={d1} d2={d2}: {d}");
                        found += 1;
                        if found >= 200 {
                            break 'search;
                        }
                    }
                }
            }
            assert!(found > 0);
        }
    }
}

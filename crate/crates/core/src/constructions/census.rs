//! Census of weight distributions over families of q-polynomials and planes.
//!
//! The index space of a strategy is cut into contiguous partitions. Each
//! partition produces a table dense-distribution -> count; tables are merged by
//! addition, so the result does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sweep_distribution, ConstructionSpec};
use crate::error::{Error, Result};
use crate::geometry::Plane;
use crate::gf::{FieldElement, FieldTower};
use crate::kernel::{GraphHistogram, PointHistogram};
use crate::linset::{classify, weight_distribution_fast};
use crate::weights::WeightDistribution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Every q-polynomial a0 x + a1 x^q + ... + a4 x^(q^4) (q = 2 only).
    ExhaustiveAll,
    /// a0 = 0 and the highest nonzero coefficient equal to 1 (q = 2, 3).
    A1ZeroLeadingOne,
    /// Named constructions, all Zanella sets and the planes
    /// <(1,a,a^2,a^3,0), (1,a^q,a^2q,a^3q,0), (l1,l2,l3,l4,g)> (q = 2, 3, 4).
    PartialFamilies,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::ExhaustiveAll => "exhaustive_all",
            Strategy::A1ZeroLeadingOne => "a1_zero_leading_one",
            Strategy::PartialFamilies => "partial_families",
        }
    }

    pub fn supports(self, q: u32) -> bool {
        match self {
            Strategy::ExhaustiveAll => q == 2,
            Strategy::A1ZeroLeadingOne => q == 2 || q == 3,
            Strategy::PartialFamilies => (2..=4).contains(&q),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive_all" => Ok(Strategy::ExhaustiveAll),
            "a1_zero_leading_one" => Ok(Strategy::A1ZeroLeadingOne),
            "partial_families" => Ok(Strategy::PartialFamilies),
            other => Err(Error::Parse(format!("unknown census strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// Number of index ranges; 0 picks a default.
    pub partitions: usize,
    /// Worker threads; None uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Directory for `part-<i>.json` checkpoints; existing parts are reused.
    pub checkpoint_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub weights: BTreeMap<u32, u64>,
    pub size: u64,
    pub class: String,
    pub count: u64,
    pub legal: bool,
}

impl CensusEntry {
    pub fn distribution(&self, q: u32) -> WeightDistribution {
        WeightDistribution::new(q, 5, self.weights.clone()).expect("census entries are valid distributions")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub q: u32,
    pub strategy: Strategy,
    pub entries: Vec<CensusEntry>,
    pub elapsed_s: f64,
    pub partitions: usize,
    /// Items of the index space that produced a rank-5 set.
    pub evaluated: u64,
    /// Items skipped for violating a construction constraint or not having rank 5.
    pub skipped: u64,
}

impl Census {
    pub fn distributions(&self) -> Vec<WeightDistribution> {
        self.entries.iter().map(|e| e.distribution(self.q)).collect()
    }

    pub fn sizes(&self) -> std::collections::BTreeSet<u64> {
        self.entries.iter().map(|e| e.size).collect()
    }

    pub fn all_legal(&self) -> bool {
        self.entries.iter().all(|e| e.legal)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct PartTable {
    lo: u64,
    hi: u64,
    skipped: u64,
    counts: Vec<([u64; 6], u64)>,
}

/// The index space of a strategy and the per-worker evaluator.
struct Space<'t> {
    t: &'t FieldTower,
    strategy: Strategy,
    total: u64,
    // powers[i][j] = b_i^(q^j)
    powers: [[FieldElement; 5]; 5],
    // A1ZeroLeadingOne: start index of stratum k (highest nonzero coefficient a_k)
    strata: [u64; 5],
    named: Vec<ConstructionSpec>,
    lambdas: Vec<[u8; 4]>,
    gammas: Vec<FieldElement>,
    alpha: FieldElement,
}

struct Worker<'t> {
    graph: GraphHistogram<'t>,
    points: PointHistogram<'t>,
}

impl<'t> Space<'t> {
    fn new(t: &'t FieldTower, strategy: Strategy) -> Self {
        let order = t.order() as u64;
        let basis = t.fq_basis();
        let powers = basis.map(|b| std::array::from_fn(|j| t.frobenius(b, j as u32)));
        let mut strata = [0u64; 5];
        let (mut named, mut lambdas, mut gammas) = (Vec::new(), Vec::new(), Vec::new());
        let alpha = t.primitive_element();
        let total = match strategy {
            Strategy::ExhaustiveAll => order.pow(5),
            Strategy::A1ZeroLeadingOne => {
                // index 0 is f = 0; stratum k has order^(k-1) members
                let mut next = 1;
                for (k, s) in strata.iter_mut().enumerate().skip(1) {
                    *s = next;
                    next += order.pow(k as u32 - 1);
                }
                next
            }
            Strategy::PartialFamilies => {
                named = named_constructions(t);
                let q = t.q() as u8;
                lambdas = (1..(q as u32).pow(4))
                    .map(|n| std::array::from_fn(|i| ((n / (q as u32).pow(i as u32)) % q as u32) as u8))
                    .filter(|l: &[u8; 4]| l.iter().rev().find(|&&d| d != 0) == Some(&1))
                    .collect();
                gammas = t.non_subfield_elements().collect();
                (named.len() + (order * order) as usize + lambdas.len() * gammas.len()) as u64
            }
        };
        Space { t, strategy, total, powers, strata, named, lambdas, gammas, alpha }
    }

    fn worker(&self) -> Worker<'t> {
        Worker { graph: GraphHistogram::new(self.t), points: PointHistogram::new(self.t) }
    }

    fn images(&self, a: &[FieldElement; 5]) -> [FieldElement; 5] {
        let f = self.t.field();
        std::array::from_fn(|i| (0..5).fold(FieldElement::ZERO, |acc, j| f.add(acc, f.mul(a[j], self.powers[i][j]))))
    }

    fn coefficients(&self, n: u64) -> [FieldElement; 5] {
        let order = self.t.order() as u64;
        let digit = |n: u64, i: u32| self.t.element(((n / order.pow(i)) % order) as u32);
        match self.strategy {
            Strategy::ExhaustiveAll => std::array::from_fn(|i| digit(n, i as u32)),
            _ => {
                let mut a = [FieldElement::ZERO; 5];
                if n == 0 {
                    return a;
                }
                let k = (1..5).rev().find(|&k| n >= self.strata[k]).expect("index within the strata");
                let r = n - self.strata[k];
                a[k] = self.t.element(1);
                for (i, c) in a.iter_mut().enumerate().take(k).skip(1) {
                    *c = digit(r, i as u32 - 1);
                }
                a
            }
        }
    }

    /// Dense distribution of item n, or None when the item is skipped.
    fn evaluate(&self, w: &mut Worker<'t>, n: u64) -> Option<[u64; 6]> {
        match self.strategy {
            Strategy::ExhaustiveAll | Strategy::A1ZeroLeadingOne => {
                Some(w.graph.counts(&self.images(&self.coefficients(n))))
            }
            Strategy::PartialFamilies => {
                let t = self.t;
                let mut n = n as usize;
                if n < self.named.len() {
                    return sweep_distribution(&mut w.points, &self.named[n]).ok().flatten().map(|d| d.dense());
                }
                n -= self.named.len();
                let order = t.order() as usize;
                if n < order * order {
                    let spec = ConstructionSpec::Zanella {
                        alpha: t.element((n / order) as u32),
                        beta: t.element((n % order) as u32),
                    };
                    return sweep_distribution(&mut w.points, &spec).ok().flatten().map(|d| d.dense());
                }
                n -= order * order;
                let (l, g) = (self.lambdas[n / self.gammas.len()], self.gammas[n % self.gammas.len()]);
                let plane = family_plane(t, self.alpha, l, g).ok()?;
                let u = plane.to_subspace(t).ok()?;
                weight_distribution_fast(&mut w.points, &u).ok().map(|d| d.dense())
            }
        }
    }
}

/// Scattered, trace club and the weight-3 families with the default parameters.
fn named_constructions(t: &FieldTower) -> Vec<ConstructionSpec> {
    let a = t.primitive_element();
    let mut v = vec![
        ConstructionSpec::Scattered,
        ConstructionSpec::TraceClub,
        ConstructionSpec::Weight3Qsq { alpha: a },
        ConstructionSpec::ThreeClub { alpha: a },
    ];
    let beta = t
        .non_subfield_elements()
        .find(|&b| !crate::geometry::same_g_orbit(t, a, b).expect("b is not in F_q"));
    if let Some(beta) = beta {
        v.push(ConstructionSpec::Weight3Q { alpha: a, beta });
    }
    v
}

/// The plane <(1,a,a^2,a^3,0), (1,a^q,a^2q,a^3q,0), (l1,l2,l3,l4,g)>.
pub fn family_plane(t: &FieldTower, alpha: FieldElement, lambda: [u8; 4], gamma: FieldElement) -> Result<Plane> {
    let f = t.field();
    let aq = t.frobenius(alpha, 1);
    let row = |a: FieldElement| vec![t.element(1), a, f.pow(a, 2), f.pow(a, 3), FieldElement::ZERO];
    let third = vec![
        t.sub_elem(lambda[0]),
        t.sub_elem(lambda[1]),
        t.sub_elem(lambda[2]),
        t.sub_elem(lambda[3]),
        gamma,
    ];
    Plane::new(t, vec![row(alpha), row(aq), third])
}

fn partition_bounds(total: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = parts.max(1) as u64;
    (0..parts).map(|i| (total * i / parts, total * (i + 1) / parts)).filter(|(lo, hi)| lo < hi).collect()
}

fn run_part(space: &Space<'_>, lo: u64, hi: u64) -> PartTable {
    let mut w = space.worker();
    let mut table: BTreeMap<[u64; 6], u64> = BTreeMap::new();
    let mut skipped = 0;
    for n in lo..hi {
        match space.evaluate(&mut w, n) {
            Some(d) => *table.entry(d).or_default() += 1,
            None => skipped += 1,
        }
    }
    PartTable { lo, hi, skipped, counts: table.into_iter().collect() }
}

fn checkpoint_path(dir: &Path, i: usize) -> PathBuf {
    dir.join(format!("part-{i}.json"))
}

fn load_checkpoint(path: &Path, lo: u64, hi: u64) -> Result<Option<PartTable>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path)?;
    let part: PartTable =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if (part.lo, part.hi) != (lo, hi) {
        return Err(Error::Invariant(format!(
            "{} covers {}..{}, expected {lo}..{hi}; use the same partition count or a fresh directory",
            path.display(),
            part.lo,
            part.hi
        )));
    }
    Ok(Some(part))
}

fn compute_part(space: &Space<'_>, dir: Option<&Path>, i: usize, lo: u64, hi: u64) -> Result<PartTable> {
    let Some(dir) = dir else {
        return Ok(run_part(space, lo, hi));
    };
    let path = checkpoint_path(dir, i);
    if let Some(part) = load_checkpoint(&path, lo, hi)? {
        return Ok(part);
    }
    let part = run_part(space, lo, hi);
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_vec(&part).expect("part tables serialize"))?;
    std::fs::rename(&tmp, &path)?;
    Ok(part)
}

/// Runs a census. Every produced distribution is classified; the caller decides
/// what to do with illegal entries (`Census::all_legal`).
pub fn census(t: &FieldTower, strategy: Strategy, opts: &CensusOptions) -> Result<Census> {
    if !strategy.supports(t.q()) {
        return Err(Error::UnsupportedField(format!("census strategy {strategy} does not support q = {}", t.q())));
    }
    let start = Instant::now();
    let space = Space::new(t, strategy);
    let parts = if opts.partitions == 0 { 64 } else { opts.partitions };
    let bounds = partition_bounds(space.total, parts);
    let dir = opts.checkpoint_dir.as_deref();
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
        let meta = serde_json::json!({"q": t.q(), "strategy": strategy, "partitions": bounds.len(), "total": space.total});
        let meta_path = dir.join("census.json");
        if meta_path.exists() {
            let old: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&meta_path)?)
                .map_err(|e| Error::Parse(format!("{}: {e}", meta_path.display())))?;
            if old != meta {
                return Err(Error::Invariant(format!("{} describes a different census", dir.display())));
            }
        } else {
            std::fs::write(&meta_path, meta.to_string())?;
        }
    }
    let work = || -> Result<Vec<PartTable>> {
        bounds.par_iter().enumerate().map(|(i, &(lo, hi))| compute_part(&space, dir, i, lo, hi)).collect()
    };
    let tables = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let mut merged: BTreeMap<[u64; 6], u64> = BTreeMap::new();
    let mut skipped = 0;
    for part in &tables {
        skipped += part.skipped;
        for (d, c) in &part.counts {
            *merged.entry(*d).or_default() += c;
        }
    }
    let evaluated = merged.values().sum();
    let mut entries = Vec::with_capacity(merged.len());
    for (dense, count) in merged {
        let d = WeightDistribution::from_dense(t.q(), 5, &dense)?;
        let c = classify(t.q(), &d)?;
        entries.push(CensusEntry {
            size: d.size(),
            weights: d.counts().clone(),
            class: c.tag.name(),
            count,
            legal: c.legal,
        });
    }
    entries.sort_by(|a, b| a.size.cmp(&b.size).then_with(|| b.weights.iter().rev().cmp(a.weights.iter().rev())));
    Ok(Census {
        q: t.q(),
        strategy,
        entries,
        elapsed_s: start.elapsed().as_secs_f64(),
        partitions: bounds.len(),
        evaluated,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::classification_table;
    use crate::linpoly::{graph_weight_distribution, QPolynomial};
    use std::collections::BTreeSet;

    fn keys(c: &Census) -> BTreeSet<WeightDistribution> {
        c.distributions().into_iter().collect()
    }

    #[test]
    fn unsupported_q_is_rejected() {
        let t = FieldTower::for_q(3).unwrap();
        assert!(matches!(census(&t, Strategy::ExhaustiveAll, &CensusOptions::default()), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [Strategy::ExhaustiveAll, Strategy::A1ZeroLeadingOne, Strategy::PartialFamilies] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
    }

    #[test]
    fn normalized_indices_decode_to_normalized_polynomials() {
        let t = FieldTower::for_q(2).unwrap();
        let space = Space::new(&t, Strategy::A1ZeroLeadingOne);
        assert_eq!(space.total, 1 + 1 + 32 + 1024 + 32768);
        let mut seen = BTreeSet::new();
        for n in 0..space.total {
            let a = space.coefficients(n);
            assert!(a[0].is_zero());
            if let Some(k) = (0..5).rev().find(|&k| !a[k].is_zero()) {
                assert_eq!(a[k], t.element(1));
            }
            assert!(seen.insert(a.map(FieldElement::encoding)));
        }
    }

    #[test]
    fn graph_path_matches_rank_route() {
        let t = FieldTower::for_q(3).unwrap();
        let space = Space::new(&t, Strategy::A1ZeroLeadingOne);
        let mut w = space.worker();
        for n in (0..space.total).step_by(997_003).chain([space.total - 1]) {
            let f = QPolynomial::new(space.coefficients(n));
            assert_eq!(space.evaluate(&mut w, n).unwrap(), graph_weight_distribution(&t, &f).dense());
        }
    }

    #[test]
    fn normalized_census_q2_matches_table_and_checkpoints_resume() {
        let t = FieldTower::for_q(2).unwrap();
        let dir = std::env::temp_dir().join(format!("linsetlab-census-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let opts = CensusOptions { partitions: 7, jobs: Some(2), checkpoint_dir: Some(dir.clone()) };
        let first = census(&t, Strategy::A1ZeroLeadingOne, &opts).unwrap();
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 8);
        let second = census(&t, Strategy::A1ZeroLeadingOne, &opts).unwrap();
        assert_eq!(first.entries, second.entries);
        let other = CensusOptions { partitions: 5, ..opts };
        assert!(census(&t, Strategy::A1ZeroLeadingOne, &other).is_err());
        std::fs::remove_dir_all(&dir).unwrap();

        assert!(first.all_legal());
        // f = 0 gives the single rank-5 point <(1,0)>
        let single = first.entries.iter().find(|e| e.size == 1).unwrap();
        assert_eq!(single.count, 1);
        let rest: BTreeSet<_> = keys(&first).into_iter().filter(|d| d.size() > 1).collect();
        assert_eq!(rest, classification_table(2).unwrap());
        assert_eq!(first.evaluated, 33_826);
    }

    #[test]
    fn merge_is_independent_of_partitioning() {
        let t = FieldTower::for_q(2).unwrap();
        let a = census(&t, Strategy::A1ZeroLeadingOne, &CensusOptions { partitions: 1, ..Default::default() }).unwrap();
        let b = census(&t, Strategy::A1ZeroLeadingOne, &CensusOptions { partitions: 13, ..Default::default() }).unwrap();
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn partial_families_q2() {
        let t = FieldTower::for_q(2).unwrap();
        let c = census(&t, Strategy::PartialFamilies, &CensusOptions::default()).unwrap();
        assert!(c.all_legal());
        let table = classification_table(2).unwrap();
        assert!(keys(&c).iter().all(|d| table.contains(d)));
    }

    #[test]
    fn family_planes_span_three_points() {
        let t = FieldTower::for_q(4).unwrap();
        let g = t.non_subfield_elements().next().unwrap();
        let p = family_plane(&t, t.primitive_element(), [1, 0, 0, 0], g).unwrap();
        assert_eq!(p.rows().len(), 3);
    }
}

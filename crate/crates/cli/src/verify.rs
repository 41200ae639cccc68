use std::collections::BTreeSet;

use serde::Serialize;

use linsetlab::constructions::{
    self, census, census_violations, classification_sizes, classification_table, sweep_distribution, weight2_only_counts,
    CensusOptions, ConstructionSpec, Strategy,
};
use linsetlab::geometry::GOrbits;
use linsetlab::kernel::PointHistogram;
use linsetlab::linset::{low_rank_distributions, low_rank_table};
use linsetlab::rdcode::{rank_spectrum, spectrum_from_weights};
use linsetlab::{Error, FieldTower, QPolynomial, WeightDistribution};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), pass, detail: detail.into() }
}

fn fmt_set<T: std::fmt::Debug>(s: &BTreeSet<T>) -> String {
    format!("{:?}", s)
}

pub fn expected_sizes(q: u32) -> Option<BTreeSet<u64>> {
    classification_sizes(q)
}

pub fn run(t: &FieldTower, skip_census: bool, jobs: Option<usize>) -> Result<Vec<Check>, Error> {
    let q = t.q();
    let qq = q as u64;
    let table = classification_table(q)
        .ok_or_else(|| Error::UnsupportedField(format!("verify supports q = 2, 3, 4, not {q}")))?;
    let mut checks = Vec::new();

    let orbits = GOrbits::new(t);
    checks.push(check("g_orbits", orbits.count() as u64 == qq * qq + 1, format!("{} orbits", orbits.count())));

    let max_rank = if q == 2 { 4 } else if q == 3 { 3 } else { 2 };
    for k in 1..=max_rank {
        let got: BTreeSet<[u64; 6]> = low_rank_distributions(t, k)?.iter().map(WeightDistribution::dense).collect();
        let want: BTreeSet<[u64; 6]> = low_rank_table(qq, k as u32).into_iter().collect();
        checks.push(check(&format!("rank{k}_distributions"), got == want, format!("{} distributions", got.len())));
    }

    let a = t.primitive_element();
    let beta = t.non_subfield_elements().find(|&b| !linsetlab::geometry::same_g_orbit(t, a, b).unwrap_or(true));
    let mut specs = vec![
        ConstructionSpec::Scattered,
        ConstructionSpec::TraceClub,
        ConstructionSpec::Weight3Qsq { alpha: a },
        ConstructionSpec::ThreeClub { alpha: a },
    ];
    specs.extend(beta.map(|beta| ConstructionSpec::Weight3Q { alpha: a, beta }));
    for spec in specs {
        let r = constructions::build(t, &spec);
        checks.push(check(&format!("construction_{}", spec.kind()), r.is_ok(), r.err().map(|e| e.to_string()).unwrap_or_default()));
    }

    let mut h = PointHistogram::new(t);
    let mut zanella = BTreeSet::new();
    let mut zanella_keys = BTreeSet::new();
    for alpha in t.field().elements() {
        for beta in t.field().elements() {
            if let Ok(Some(d)) = sweep_distribution(&mut h, &ConstructionSpec::Zanella { alpha, beta }) {
                zanella.insert(d.size());
                zanella_keys.insert(d);
            }
        }
    }
    let sizes = classification_sizes(q).expect("table exists");
    let contained = zanella_keys.iter().all(|d| table.contains(d));
    let realized: BTreeSet<u64> = sizes.iter().copied().filter(|&s| s != qq.pow(4) + 1).collect();
    let zanella_ok = if q == 2 { zanella == BTreeSet::from([19, 21, 23, 25]) } else { zanella == realized };
    checks.push(check("zanella_sizes", zanella_ok && contained, fmt_set(&zanella)));

    let trace = QPolynomial::trace(t);
    let spectrum = rank_spectrum(t, &trace);
    let d = linsetlab::linpoly::graph_weight_distribution_fast(&mut h, &trace);
    checks.push(check("rank_spectrum_trace", spectrum.counts == spectrum_from_weights(&d), format!("{:?}", spectrum.counts)));

    if skip_census {
        return Ok(checks);
    }
    let strategy = match q {
        2 => Strategy::ExhaustiveAll,
        3 => Strategy::A1ZeroLeadingOne,
        _ => Strategy::PartialFamilies,
    };
    let c = census(t, strategy, &CensusOptions { jobs, ..Default::default() })?;
    let keys: BTreeSet<WeightDistribution> = c.distributions().into_iter().filter(|d| d.size() > 1).collect();
    let violations = census_violations(q, &keys);
    checks.push(check(&format!("census_{strategy}_invariants"), violations.is_empty(), violations.join("; ")));
    let census_sizes: BTreeSet<u64> = keys.iter().map(WeightDistribution::size).collect();
    match strategy {
        Strategy::PartialFamilies => {
            let outside: Vec<String> = keys.iter().filter(|d| !table.contains(d)).map(|d| d.to_string()).collect();
            checks.push(check("census_keys_in_table", outside.is_empty(), outside.join("; ")));
        }
        _ => {
            checks.push(check("census_keys_equal_table", keys == table, format!("{} keys", keys.len())));
            checks.push(check("census_sizes", census_sizes == sizes, fmt_set(&census_sizes)));
            let s: BTreeSet<u64> = keys.iter().filter(|d| d.max_weight() == 2).map(|d| d.count(2)).collect();
            let want: BTreeSet<u64> = weight2_only_counts(q).expect("table exists").into_iter().collect();
            checks.push(check("census_weight2_counts", s == want, fmt_set(&s)));
        }
    }
    Ok(checks)
}

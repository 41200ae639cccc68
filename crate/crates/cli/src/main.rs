mod output;
mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use linsetlab::constructions::{self, census, CensusOptions, ConstructionSpec, Strategy};
use linsetlab::curves::{classify_cubic, count_points, CubicCurve};
use linsetlab::geometry::{self, GOrbits, Plane};
use linsetlab::gf::GaloisField;
use linsetlab::kernel::PointHistogram;
use linsetlab::linset::{classify, weight_distribution_fast, FqSubspace};
use linsetlab::rdcode::{rank_spectrum, spectrum_from_weights};
use linsetlab::{Error, FieldElement, FieldTower, QPolynomial, WeightDistribution};

use output::{Format, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "linsetlab", version, about = "Weight distributions of rank-5 linear sets on PG(1,q^5)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Order of the subfield F_q
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Characteristic (with --e, overrides --q)
    #[arg(long, global = true, requires = "e")]
    p: Option<u32>,
    /// q = p^e
    #[arg(long, global = true, requires = "p")]
    e: Option<u32>,
    /// Seed for sampled inputs
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight distribution and class of a graph {(x, f(x))} or a named construction
    Weights {
        /// Coefficients a0..a4 of f = sum a_i x^(q^i), as encodings
        #[arg(long, conflicts_with = "construction")]
        poly: Option<String>,
        /// scattered, trace_club, weight3_qsq, weight3_q, three_club, family_gdd, family_g5, zanella
        #[arg(long)]
        construction: Option<String>,
        /// Construction parameters as encodings
        #[arg(long, default_value = "")]
        params: String,
        /// List the points of weight > 1
        #[arg(long)]
        points: bool,
    },
    /// Census of weight distributions
    Census {
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Number of index ranges
        #[arg(long, default_value_t = 64)]
        partitions: usize,
        /// Directory for partition checkpoints (resumes if present)
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
    },
    /// Check the classification tables and invariants for one q
    Verify {
        /// Skip the census checks
        #[arg(long)]
        skip_census: bool,
    },
    /// Rank-2 points on a line of PG(4,q^5)
    Omega2Line {
        #[arg(long, requires = "p2")]
        p1: Option<String>,
        #[arg(long)]
        p2: Option<String>,
        /// Number of seeded random lines disjoint from the subgeometry
        #[arg(long, conflicts_with = "p1")]
        samples: Option<usize>,
    },
    /// Rank-2 points on a plane of PG(4,q^5)
    Omega2Plane {
        /// Three points "a,b,c,d,e;...;..."
        #[arg(long)]
        rows: Option<String>,
        #[arg(long, conflicts_with = "rows")]
        samples: Option<usize>,
    },
    /// Project the subgeometry from a plane onto a line
    Project {
        #[arg(long, conflicts_with_all = ["poly", "samples"])]
        rows: Option<String>,
        /// Use the plane associated with the graph of f
        #[arg(long, conflicts_with = "samples")]
        poly: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Count and classify a plane cubic over F_q
    Cubic {
        /// Ten coefficients of x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3
        #[arg(long)]
        coeffs: String,
    },
    /// Rank distribution of the code {(ax + b f(x))}
    RankSpectrum {
        #[arg(long)]
        poly: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum StrategyArg {
    ExhaustiveAll,
    A1ZeroLeadingOne,
    PartialFamilies,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::ExhaustiveAll => Strategy::ExhaustiveAll,
            StrategyArg::A1ZeroLeadingOne => Strategy::A1ZeroLeadingOne,
            StrategyArg::PartialFamilies => Strategy::PartialFamilies,
        }
    }
}

/// Outcome of a subcommand: the payload, a CSV rendering and whether the
/// run found something wrong (illegal census keys, failed checks).
struct Outcome {
    parameters: Value,
    results: Value,
    table: Table,
    failed: bool,
    seeded: bool,
}

impl Outcome {
    fn ok(parameters: Value, results: Value, table: Table) -> Self {
        Outcome { parameters, results, table, failed: false, seeded: false }
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("malformed element encoding {:?}", x.trim()))))
        .collect()
}

fn parse_elements(t: &FieldTower, s: &str) -> Result<Vec<FieldElement>, Error> {
    parse_list(s)?.into_iter().map(|e| t.field().try_element(e)).collect()
}

fn parse_point(t: &FieldTower, s: &str) -> Result<Vec<FieldElement>, Error> {
    let p = parse_elements(t, s)?;
    if p.len() != 5 {
        return Err(Error::Dimension(format!("a point of PG(4,q^5) needs 5 coordinates, got {}", p.len())));
    }
    Ok(p)
}

fn parse_rows(t: &FieldTower, s: &str) -> Result<Vec<Vec<FieldElement>>, Error> {
    let rows: Vec<Vec<FieldElement>> = s.split(';').map(|r| parse_point(t, r)).collect::<Result<_, _>>()?;
    if rows.len() != 3 {
        return Err(Error::Dimension(format!("a plane needs 3 points, got {}", rows.len())));
    }
    Ok(rows)
}

fn tower(g: &Global) -> Result<FieldTower, Error> {
    match (g.p, g.e, g.q) {
        (Some(p), Some(e), _) => FieldTower::build(p, e),
        (_, _, Some(q)) => FieldTower::for_q(q),
        _ => Err(Error::Parse("missing --q (or --p and --e)".into())),
    }
}

fn order_of(g: &Global) -> Result<u32, Error> {
    match (g.p, g.e, g.q) {
        (Some(p), Some(e), _) => Ok(p.pow(e)),
        (_, _, Some(q)) => Ok(q),
        _ => Err(Error::Parse("missing --q (or --p and --e)".into())),
    }
}

fn encodings(v: &[FieldElement]) -> Vec<u32> {
    v.iter().map(|x| x.encoding()).collect()
}

fn distribution_json(q: u32, d: &WeightDistribution) -> Result<Value, Error> {
    let c = classify(q, d)?;
    Ok(json!({
        "weights": d.counts(),
        "size": d.size(),
        "rank": d.rank(),
        "class": c.tag.name(),
        "legal": c.legal,
        "reason": c.reason,
    }))
}

fn weight_columns() -> Vec<String> {
    (1..=5).map(|w| format!("w{w}")).collect()
}

fn weight_cells(d: &WeightDistribution) -> Vec<String> {
    (1..=5).map(|w| d.count(w).to_string()).collect()
}

fn cmd_weights(g: &Global, poly: Option<&str>, construction: Option<&str>, params: &str, points: bool) -> Result<Outcome, Error> {
    let t = tower(g)?;
    let (u, source) = match (poly, construction) {
        (Some(p), _) => {
            let f = QPolynomial::from_encodings(&t, &parse_list(p)?)?;
            (FqSubspace::graph(&t, &f), json!({"poly": f.encodings()}))
        }
        (None, Some(kind)) => {
            let spec = ConstructionSpec::from_parts(&t, kind, &parse_list(params)?)?;
            (constructions::build(&t, &spec)?, serde_json::to_value(spec).expect("specs serialize"))
        }
        (None, None) => return Err(Error::Parse("weights needs --poly or --construction".into())),
    };
    let mut h = PointHistogram::new(&t);
    let d = weight_distribution_fast(&mut h, &u)?;
    let mut results = distribution_json(t.q(), &d)?;
    if points {
        let heavy = linsetlab::linset::weighted_points(&mut h, &u)?;
        let listed: BTreeMap<u32, Vec<Vec<u32>>> = heavy
            .into_iter()
            .filter(|(w, _)| *w > 1)
            .map(|(w, ps)| (w, ps.iter().map(|p| encodings(p.coords())).collect()))
            .collect();
        results["points"] = json!(listed);
    }
    let c = classify(t.q(), &d)?;
    let mut header = vec!["q".into(), "rank".into(), "size".into(), "class".into(), "legal".into()];
    header.extend(weight_columns());
    let mut row = vec![t.q().to_string(), d.rank().to_string(), d.size().to_string(), c.tag.name(), c.legal.to_string()];
    row.extend(weight_cells(&d));
    Ok(Outcome {
        parameters: source,
        results,
        table: Table { header, rows: vec![row] },
        failed: !c.legal,
        seeded: false,
    })
}

fn cmd_census(g: &Global, strategy: Strategy, partitions: usize, dir: Option<PathBuf>) -> Result<Outcome, Error> {
    let t = tower(g)?;
    let opts = CensusOptions { partitions, jobs: g.jobs, checkpoint_dir: dir.clone() };
    let c = census(&t, strategy, &opts)?;
    let mut header = vec!["size".into(), "class".into(), "count".into(), "legal".into()];
    header.extend(weight_columns());
    let rows = c
        .entries
        .iter()
        .map(|e| {
            let mut r = vec![e.size.to_string(), e.class.clone(), e.count.to_string(), e.legal.to_string()];
            r.extend(weight_cells(&e.distribution(t.q())));
            r
        })
        .collect();
    Ok(Outcome {
        parameters: json!({"strategy": strategy, "partitions": partitions, "checkpoint_dir": dir}),
        failed: !c.all_legal(),
        results: serde_json::to_value(&c).expect("census serializes"),
        table: Table { header, rows },
        seeded: false,
    })
}

fn cmd_omega2_line(g: &Global, p1: Option<&str>, p2: Option<&str>, samples: Option<usize>) -> Result<Outcome, Error> {
    let t = tower(g)?;
    let orbits = GOrbits::new(&t);
    if let (Some(a), Some(b)) = (p1, p2) {
        let (a, b) = (parse_point(&t, a)?, parse_point(&t, b)?);
        let prof = geometry::line_omega2_profile(&t, &orbits, &a, &b)?;
        let points: Vec<Vec<u32>> = prof.points.iter().map(|p| encodings(p.coords())).collect();
        let subline = prof.count == t.q() as u64 + 1 && geometry::is_fq_subline(&t, &prof.points);
        let rows = prof.types.iter().map(|(l, c)| vec![l.0.encoding().to_string(), c.to_string()]).collect();
        return Ok(Outcome::ok(
            json!({"p1": encodings(&a), "p2": encodings(&b)}),
            json!({"count": prof.count, "types": prof.types, "points": points, "fq_subline": subline}),
            Table { header: vec!["type".into(), "count".into()], rows },
        ));
    }
    let n = samples.ok_or_else(|| Error::Parse("omega2-line needs --p1/--p2 or --samples".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut type_hist: BTreeMap<u64, BTreeMap<String, u64>> = BTreeMap::new();
    for _ in 0..n {
        let (a, b) = geometry::random_disjoint_line(&t, &mut rng);
        let prof = geometry::line_omega2_profile(&t, &orbits, &a, &b)?;
        *hist.entry(prof.count).or_default() += 1;
        let mut shape: Vec<u64> = prof.types.values().copied().collect();
        shape.sort_unstable_by(|x, y| y.cmp(x));
        let key = shape.iter().map(u64::to_string).collect::<Vec<_>>().join("+");
        *type_hist.entry(prof.count).or_default().entry(key).or_default() += 1;
    }
    let rows = hist.iter().map(|(k, v)| vec![k.to_string(), v.to_string()]).collect();
    Ok(Outcome {
        seeded: true,
        ..Outcome::ok(
            json!({"samples": n}),
            json!({"counts": hist, "type_shapes": type_hist}),
            Table { header: vec!["rank2_points".into(), "lines".into()], rows },
        )
    })
}

fn plane_profile_json(t: &FieldTower, plane: &Plane) -> Value {
    let prof = geometry::plane_omega2_profile(t, plane);
    json!({"count": prof.count, "secants": prof.secants, "arc": prof.arc, "arc_size_allowed": !prof.arc || geometry::arc_size_allowed(t.q() as u64, prof.count)})
}

fn random_planes(t: &FieldTower, seed: u64, n: usize) -> Vec<Plane> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| geometry::random_plane(t, &mut rng)).collect()
}

fn cmd_omega2_plane(g: &Global, rows: Option<&str>, samples: Option<usize>) -> Result<Outcome, Error> {
    let t = tower(g)?;
    if let Some(r) = rows {
        let plane = Plane::new(&t, parse_rows(&t, r)?)?;
        let v = plane_profile_json(&t, &plane);
        let table = Table {
            header: vec!["count".into(), "arc".into()],
            rows: vec![vec![v["count"].to_string(), v["arc"].to_string()]],
        };
        return Ok(Outcome::ok(json!({"rows": r}), v, table));
    }
    let n = samples.ok_or_else(|| Error::Parse("omega2-plane needs --rows or --samples".into()))?;
    let mut hist: BTreeMap<String, u64> = BTreeMap::new();
    let mut bad = 0;
    for plane in random_planes(&t, g.seed, n) {
        let v = plane_profile_json(&t, &plane);
        bad += u64::from(v["arc_size_allowed"] == json!(false));
        *hist.entry(format!("{}{}", v["count"], if v["arc"] == json!(true) { " arc" } else { "" })).or_default() += 1;
    }
    let rows = hist.iter().map(|(k, v)| vec![k.clone(), v.to_string()]).collect();
    Ok(Outcome {
        seeded: true,
        failed: bad > 0,
        ..Outcome::ok(
            json!({"samples": n}),
            json!({"profiles": hist, "disallowed_arcs": bad}),
            Table { header: vec!["profile".into(), "planes".into()], rows },
        )
    })
}

fn cmd_project(g: &Global, rows: Option<&str>, poly: Option<&str>, samples: Option<usize>) -> Result<Outcome, Error> {
    let t = tower(g)?;
    let single = |plane: Plane, params: Value, expected: Option<WeightDistribution>| -> Result<Outcome, Error> {
        let d = geometry::project_from_plane(&t, &plane)?;
        let mut v = distribution_json(t.q(), &d)?;
        let mut failed = v["legal"] == json!(false);
        if let Some(e) = expected {
            v["matches_graph"] = json!(e == d);
            failed |= e != d;
        }
        let mut header = vec!["size".into(), "class".into()];
        header.extend(weight_columns());
        let mut row = vec![d.size().to_string(), v["class"].as_str().unwrap_or_default().to_string()];
        row.extend(weight_cells(&d));
        Ok(Outcome { failed, ..Outcome::ok(params, v, Table { header, rows: vec![row] }) })
    };
    if let Some(r) = rows {
        return single(Plane::new(&t, parse_rows(&t, r)?)?, json!({"rows": r}), None);
    }
    if let Some(p) = poly {
        let f = QPolynomial::from_encodings(&t, &parse_list(p)?)?;
        let u = FqSubspace::graph(&t, &f);
        let expected = weight_distribution_fast(&mut PointHistogram::new(&t), &u)?;
        return single(Plane::from_subspace(&t, &u)?, json!({"poly": f.encodings()}), Some(expected));
    }
    let n = samples.ok_or_else(|| Error::Parse("project needs --rows, --poly or --samples".into()))?;
    let mut table: BTreeMap<WeightDistribution, u64> = BTreeMap::new();
    for plane in random_planes(&t, g.seed, n) {
        *table.entry(geometry::project_from_plane(&t, &plane)?).or_default() += 1;
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut failed = false;
    for (d, count) in &table {
        let mut v = distribution_json(t.q(), d)?;
        failed |= v["legal"] == json!(false);
        v["count"] = json!(count);
        let mut row = vec![d.size().to_string(), v["class"].as_str().unwrap_or_default().to_string(), count.to_string()];
        row.extend(weight_cells(d));
        rows.push(row);
        entries.push(v);
    }
    let mut header = vec!["size".into(), "class".into(), "count".into()];
    header.extend(weight_columns());
    Ok(Outcome {
        seeded: true,
        failed,
        ..Outcome::ok(json!({"samples": n}), json!({"entries": entries}), Table { header, rows })
    })
}

fn cmd_cubic(g: &Global, coeffs: &str) -> Result<Outcome, Error> {
    let f = GaloisField::with_order(order_of(g)?)?;
    let c = CubicCurve::from_encodings(&f, &parse_list(coeffs)?)?;
    let n = count_points(&f, &c)?;
    let ty = classify_cubic(&f, &c)?;
    let q = f.order() as u64;
    Ok(Outcome::ok(
        json!({"coeffs": parse_list(coeffs)?}),
        json!({"points": n, "type": ty, "count_allowed": ty.allows_count(q, n)}),
        Table { header: vec!["q".into(), "points".into(), "type".into()], rows: vec![vec![q.to_string(), n.to_string(), ty.name().into()]] },
    ))
}

fn cmd_rank_spectrum(g: &Global, poly: &str) -> Result<Outcome, Error> {
    let t = tower(g)?;
    let f = QPolynomial::from_encodings(&t, &parse_list(poly)?)?;
    let s = rank_spectrum(&t, &f);
    let d = weight_distribution_fast(&mut PointHistogram::new(&t), &FqSubspace::graph(&t, &f))?;
    let from_weights = spectrum_from_weights(&d);
    let agrees = from_weights == s.counts;
    let rows = s.counts.iter().map(|(r, c)| vec![r.to_string(), c.to_string()]).collect();
    Ok(Outcome {
        failed: !agrees,
        ..Outcome::ok(
            json!({"poly": f.encodings()}),
            json!({"spectrum": s.counts, "total": s.total(), "min_rank": s.min_rank(), "weights": d.counts(), "agrees_with_weights": agrees}),
            Table { header: vec!["rank".into(), "words".into()], rows },
        )
    })
}

fn dispatch(cli: &Cli) -> Result<(String, Outcome), Error> {
    let g = &cli.global;
    let (name, outcome) = match &cli.command {
        Command::Weights { poly, construction, params, points } => {
            ("weights", cmd_weights(g, poly.as_deref(), construction.as_deref(), params, *points)?)
        }
        Command::Census { strategy, partitions, checkpoint_dir } => {
            ("census", cmd_census(g, (*strategy).into(), *partitions, checkpoint_dir.clone())?)
        }
        Command::Verify { skip_census } => {
            let t = tower(g)?;
            let checks = verify::run(&t, *skip_census, g.jobs)?;
            let failed = checks.iter().any(|c| !c.pass);
            let rows = checks.iter().map(|c| vec![c.name.clone(), c.pass.to_string(), c.detail.clone()]).collect();
            let table = Table { header: vec!["check".into(), "pass".into(), "detail".into()], rows };
            let results = json!({"checks": checks, "sizes": verify::expected_sizes(t.q()), "all_pass": !failed});
            ("verify", Outcome { failed, ..Outcome::ok(json!({"skip_census": skip_census}), results, table) })
        }
        Command::Omega2Line { p1, p2, samples } => ("omega2-line", cmd_omega2_line(g, p1.as_deref(), p2.as_deref(), *samples)?),
        Command::Omega2Plane { rows, samples } => ("omega2-plane", cmd_omega2_plane(g, rows.as_deref(), *samples)?),
        Command::Project { rows, poly, samples } => ("project", cmd_project(g, rows.as_deref(), poly.as_deref(), *samples)?),
        Command::Cubic { coeffs } => ("cubic", cmd_cubic(g, coeffs)?),
        Command::RankSpectrum { poly } => ("rank-spectrum", cmd_rank_spectrum(g, poly)?),
    };
    Ok((name.to_string(), outcome))
}

fn tower_description(g: &Global, command: &Command) -> String {
    if let Command::Cubic { .. } = command {
        return order_of(g).map(|q| format!("GF({q})")).unwrap_or_default();
    }
    tower(g).map(|t| t.describe()).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        // ignore the error if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let start = Instant::now();
    let (command, outcome) = match dispatch(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = Report {
        command,
        parameters: outcome.parameters,
        tower: tower_description(&cli.global, &cli.command),
        seed: outcome.seeded.then_some(cli.global.seed),
        results: outcome.results,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Err(e) = output::write(&report, &outcome.table, cli.global.format, cli.global.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if outcome.failed {
        if report.command == "verify" {
            eprintln!("error: verification failed, see the checks in the report");
        } else {
            eprintln!("error: {} found a result outside the classification", report.command);
        }
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}

//! Validation and execution of the subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use btq_core::building::{Building, BuildingVertex};
use btq_core::bundles::{
    quotient_ball, stabilizer_descriptor, stabilizer_link_action, BundleClass, BundleContext, GroupFlavor, LinkActionKind,
    StabDescriptor,
};
use btq_core::complex::SimplicialComplex;
use btq_core::curve::{BaseCurve, CurveConfig};
use btq_core::equivariant::{e1_page, e2_and_total, equivariant_homology, FiniteGroup, GComplex};
use btq_core::exact::lattice::image_basis;
use btq_core::exact::{ChainComplex, Coeff, Field, IntMatrix, Mat2, Place, RatFunc};
use btq_core::model::{build_cryst, model_quotient, quotient_homology, sn_tilde_h1, special_vertices, units_presentation};
use btq_core::model::{CrystGroup, Flavor};
use btq_core::pic::{kummer, nagata, units_group};
use btq_core::points::{
    acyclicity_check, build_points_complex, de_exactness, generator_count, rp1_low_degree, Variant, POINTS_CAP,
};
use btq_core::tree::{ball_size, Tree, TreeVertex};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::memoize;
use crate::cli::{Cli, Command, CurveArgs};
use crate::config::{default_places, CurveSpec};
use crate::error::{invalid, CliError, CliResult};
use crate::export::{
    dot_graph, grid_csv, grid_strings, homology_csv, homology_rows, to_json, unsupported_format, ChainComplexJson, Format,
    GroupJson,
};
use crate::suites;

/// Largest number of vertices a ball may have.
pub const BALL_CAP: u64 = 200_000;
/// Largest number of cells in a model window.
pub const MODEL_CAP: u64 = 2_000_000;
/// Largest `|G| · #cells` for an E¹ page.
pub const E1_CAP: u64 = 2_000_000;

/// A fully validated invocation.
pub struct RunConfig {
    pub plan: Plan,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: usize,
    pub seed: u64,
    pub dry_run: bool,
}

pub enum Plan {
    TreeBall { tree: Tree, place: String, radius: u64 },
    BuildingBall { config: CurveConfig, radius: u64 },
    Pic { config: CurveConfig, unit_bound: i64 },
    Kummer { config: CurveConfig },
    Classify { config: CurveConfig, radius: u64 },
    Quotient { config: CurveConfig, radius: usize, flavor: GroupFlavor, key: String },
    Model { group: CrystGroup, window: i64, coeff: Coeff, field_order: Option<u32> },
    E1Page { target: E1Target, coeff: Coeff, q_max: usize },
    Homology { complex: ChainComplex, coeff: Coeff },
    PointsComplex { q: u32, max_degree: usize, variant: Variant, report: Option<PointsReport> },
    Verify { suites: Vec<&'static suites::Suite>, list: bool },
}

pub enum E1Target {
    Point(FiniteGroup),
    TreeBall(FiniteGroup, u64),
    Points(u32, usize),
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum PointsReport {
    Acyclicity,
    De,
    Rp1,
}

/// The artifact of a run, and whether it reports success.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn curve_spec(c: &CurveArgs, default_s: Option<usize>) -> CliResult<CurveSpec> {
    let mut spec = match &c.config {
        Some(path) => CurveSpec::load(path)?,
        None => {
            let Some(q) = c.q else {
                return invalid("--q or --config is required");
            };
            let punctures = match (&c.punctures, default_s) {
                (Some(p), _) => p.clone(),
                (None, Some(s)) if c.curve == "p1" => default_places(q, s)?.join(","),
                _ => return invalid("--punctures or --config is required"),
            };
            CurveSpec::from_flags(&c.curve, q, &punctures, c.weierstrass.as_deref())?
        }
    };
    if c.unit_bound.is_some() {
        spec.unit_bound = c.unit_bound;
    }
    Ok(spec)
}

fn p1_config(c: &CurveArgs, default_s: Option<usize>) -> CliResult<CurveConfig> {
    let config = curve_spec(c, default_s)?.resolve()?;
    if config.base != BaseCurve::ProjectiveLine {
        return invalid("buildings and bundles are only available on p1");
    }
    Ok(config)
}

fn check_ball(config: &CurveConfig, radius: u64) -> CliResult<()> {
    let q = config.k.q() as u64;
    let mut total: u64 = 1;
    for d in config.degrees() {
        total = total.saturating_mul(ball_size(q.saturating_pow(d as u32), radius.min(40) as u32));
    }
    if radius > 40 || total > BALL_CAP {
        return Err(CliError::Resource(format!("ball of radius {radius} exceeds {BALL_CAP} vertices")));
    }
    Ok(())
}

fn parse_coeff(s: &str) -> CliResult<Coeff> {
    Ok(Coeff::parse(s)?)
}

fn parse_group(s: &str, q: u32) -> CliResult<FiniteGroup> {
    let g = match s {
        "gl2" => FiniteGroup::gl2(q)?,
        "sl2" => FiniteGroup::sl2(q)?,
        "normalizer" => FiniteGroup::torus_normalizer(q)?,
        other => match other.strip_prefix("cyclic:").and_then(|m| m.parse::<usize>().ok()) {
            Some(m) if (1..=64).contains(&m) => FiniteGroup::cyclic(m),
            _ => return invalid(format!("unknown group {other:?}")),
        },
    };
    Ok(g)
}

fn parse_lattice(s: &str) -> CliResult<IntMatrix> {
    let cols = s
        .split(';')
        .map(|c| {
            c.split(',')
                .map(|x| x.trim().parse::<i64>().map(BigInt::from).map_err(|_| CliError::Invalid(format!("bad lattice entry {x:?}"))))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let s_len = cols[0].len();
    if s_len == 0 || cols.iter().any(|c| c.len() != s_len) {
        return invalid("lattice columns must be nonempty and of equal length");
    }
    let m = IntMatrix::from_columns(s_len, &cols);
    if image_basis(&m).cols() != cols.len() {
        return invalid("lattice columns must be linearly independent");
    }
    Ok(m)
}

/// Checks every parameter and builds the plan; nothing expensive runs here.
pub fn validate(cli: &Cli) -> CliResult<RunConfig> {
    let threads = match cli.threads {
        Some(0) => return invalid("--threads must be positive"),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let (plan, default_format, formats): (Plan, Format, &[Format]) = match &cli.command {
        Command::TreeBall { q, place, radius } => {
            let k = Field::new(*q)?;
            let p = Place::parse(place, &k)?;
            let tree = Tree::new(&k, p);
            if *radius > 40 || ball_size(tree.q_v(), *radius as u32) > BALL_CAP {
                return Err(CliError::Resource(format!("ball of radius {radius} exceeds {BALL_CAP} vertices")));
            }
            (Plan::TreeBall { tree, place: place.clone(), radius: *radius }, Format::Json, &[Format::Json, Format::Dot])
        }
        Command::BuildingBall { curve, radius } => {
            let config = p1_config(curve, None)?;
            check_ball(&config, *radius)?;
            (Plan::BuildingBall { config, radius: *radius }, Format::Json, &[Format::Json, Format::Dot])
        }
        Command::Pic { curve } => {
            let spec = curve_spec(curve, None)?;
            let config = spec.resolve()?;
            (Plan::Pic { config, unit_bound: spec.unit_bound() }, Format::Json, &[Format::Json])
        }
        Command::Kummer { curve } => {
            let config = curve_spec(curve, None)?.resolve()?;
            (Plan::Kummer { config }, Format::Json, &[Format::Json])
        }
        Command::Classify { curve, radius } => {
            let config = p1_config(curve, None)?;
            check_ball(&config, *radius)?;
            (Plan::Classify { config, radius: *radius }, Format::Json, &[Format::Json, Format::Csv])
        }
        Command::Quotient { curve, s, radius, group } => {
            let config = p1_config(curve, Some(s.unwrap_or(1)))?;
            if let Some(s) = s {
                if *s != config.s() {
                    return invalid(format!("--s {s} disagrees with {} punctures", config.s()));
                }
            }
            let flavor = match group.as_str() {
                "gl2" => GroupFlavor::Gl2,
                "sl2" => GroupFlavor::Sl2,
                other => return invalid(format!("unknown group {other:?}; use gl2 or sl2")),
            };
            let limit = match config.s() {
                1 => 8,
                2 => 4,
                3 => 2,
                _ => 1,
            };
            if *radius > limit {
                return Err(CliError::Resource(format!("radius {radius} above {limit} for {} punctures", config.s())));
            }
            let places: Vec<String> = config.punctures.iter().map(|p| p.display(&config.k)).collect();
            let key = format!("quotient-q{}-{}-r{radius}-{group}.json", config.k.q(), places.join("_"));
            (Plan::Quotient { config, radius: *radius, flavor, key }, Format::Json, &[Format::Json, Format::Dot])
        }
        Command::Model { curve, lattice, flavor, window, coeff } => {
            let flavor = Flavor::parse(flavor)?;
            let coeff = parse_coeff(coeff)?;
            let (group, field_order) = match lattice {
                Some(l) => {
                    if curve.config.is_some() || curve.punctures.is_some() {
                        return invalid("give either --lattice or a curve, not both");
                    }
                    let t = parse_lattice(l)?;
                    (CrystGroup::from_unit_lattice(t.rows(), &t, flavor), curve.q)
                }
                None => {
                    let config = curve_spec(curve, None)?.resolve()?;
                    let pic = nagata(&config)?;
                    (build_cryst(&pic, flavor), Some(config.k.q()))
                }
            };
            let window = window.unwrap_or_else(|| group.min_window());
            if window < group.min_window() {
                return invalid(format!("window {window} below the minimum {}", group.min_window()));
            }
            // Cubes with base corner in the window, at the stability check size.
            let side = (2 * (window + 2) + 1) as u64;
            let cells = side.saturating_mul(2).checked_pow(group.s as u32).unwrap_or(u64::MAX);
            if group.s > 8 || cells > MODEL_CAP {
                return Err(CliError::Resource(format!("model window {window} in dimension {} is too large", group.s)));
            }
            (Plan::Model { group, window, coeff, field_order }, Format::Json, &[Format::Json, Format::Csv])
        }
        Command::E1Page { complex, group, q, radius, max_degree, coeff, q_max } => {
            let coeff = parse_coeff(coeff)?;
            if *q_max > 3 {
                return invalid("--q-max is capped at 3");
            }
            let target = match complex.as_str() {
                "point" => E1Target::Point(parse_group(group, *q)?),
                "tree-ball" => {
                    if !matches!(group.as_str(), "gl2" | "sl2") {
                        return invalid("tree-ball needs gl2 or sl2");
                    }
                    let g = parse_group(group, *q)?;
                    let cells = 2 * ball_size(*q as u64, (*radius).min(40) as u32);
                    if *radius > 40 || cells.saturating_mul(g.order() as u64) > E1_CAP {
                        return Err(CliError::Resource(format!("tree ball of radius {radius} under {} is too large", g.name)));
                    }
                    E1Target::TreeBall(g, *radius)
                }
                "points" => {
                    if group != "sl2" && group != "gl2" {
                        return invalid("the points complex carries the sl2 action");
                    }
                    if !(2..=5).contains(q) {
                        return invalid("points complexes are available for q in 2..=5");
                    }
                    if *max_degree < 2 || *max_degree > *q as usize {
                        return invalid(format!("--max-degree must lie in 2..={q}"));
                    }
                    E1Target::Points(*q, *max_degree)
                }
                other => return invalid(format!("unknown complex {other:?}")),
            };
            (Plan::E1Page { target, coeff, q_max: *q_max }, Format::Json, &[Format::Json, Format::Csv])
        }
        Command::Homology { input, coeff } => {
            let coeff = parse_coeff(coeff)?;
            let text = std::fs::read_to_string(input).map_err(|e| CliError::Invalid(format!("{}: {e}", input.display())))?;
            let parsed: ChainComplexJson =
                serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", input.display())))?;
            let complex = parsed.to_complex()?;
            (Plan::Homology { complex, coeff }, Format::Csv, &[Format::Csv, Format::Json])
        }
        Command::PointsComplex { q, max_degree, variant, report } => {
            let variant = Variant::parse(variant)?;
            Field::new(*q)?;
            if *max_degree > *q as usize {
                return invalid(format!("max degree {max_degree} above q = {q}"));
            }
            let total: usize = (0..=*max_degree).map(|n| generator_count(*q, n, variant).unwrap_or(usize::MAX)).fold(0, usize::saturating_add);
            if total > POINTS_CAP {
                return Err(CliError::Resource(format!("{total} generators exceed {POINTS_CAP}")));
            }
            let report = match report.as_deref() {
                None => None,
                Some("acyclicity") => Some(PointsReport::Acyclicity),
                Some("de") if *q <= 7 => Some(PointsReport::De),
                Some("rp1") if (2..=5).contains(q) => Some(PointsReport::Rp1),
                Some(other) => return invalid(format!("report {other:?} unavailable for q = {q}")),
            };
            (Plan::PointsComplex { q: *q, max_degree: *max_degree, variant, report }, Format::Json, &[Format::Json, Format::Csv])
        }
        Command::Verify { suite, list } => {
            let chosen = if *list || suite == "all" {
                suites::SUITES.iter().collect()
            } else {
                match suites::SUITES.iter().find(|s| s.name == suite) {
                    Some(s) => vec![s],
                    None => return invalid(format!("unknown suite {suite:?}; try --list")),
                }
            };
            (Plan::Verify { suites: chosen, list: *list }, Format::Json, &[])
        }
    };
    let format = match cli.format {
        None => default_format,
        Some(f) if formats.contains(&f) => f,
        Some(f) => return unsupported_format(cli.command.name(), f),
    };
    Ok(RunConfig { plan, format, output: cli.output.clone(), threads, seed: cli.seed, dry_run: cli.dry_run })
}

pub fn dry_run_report(cli: &Cli, rc: &RunConfig) -> CliResult<String> {
    to_json(&json!({
        "command": cli.command.name(),
        "valid": true,
        "dry_run": true,
        "format": rc.format.name(),
        "threads": rc.threads,
        "seed": rc.seed,
    }))
}

pub fn execute(rc: &RunConfig) -> CliResult<Outcome> {
    let done = |text: String| Ok(Outcome { text, ok: true });
    match &rc.plan {
        Plan::TreeBall { tree, place, radius } => done(tree_ball(tree, place, *radius, rc.format)?),
        Plan::BuildingBall { config, radius } => done(building_ball(config, *radius, rc.format)?),
        Plan::Pic { config, unit_bound } => done(pic(config, *unit_bound)?),
        Plan::Kummer { config } => done(kummer_set(config)?),
        Plan::Classify { config, radius } => done(classify(config, *radius, rc.format)?),
        Plan::Quotient { config, radius, flavor, key } => {
            if rc.format == Format::Json {
                done(memoize(key, || quotient(config, *radius, *flavor, Format::Json))?)
            } else {
                done(quotient(config, *radius, *flavor, rc.format)?)
            }
        }
        Plan::Model { group, window, coeff, field_order } => done(model(group, *window, *coeff, *field_order, rc.format)?),
        Plan::E1Page { target, coeff, q_max } => done(e1(target, *coeff, *q_max, rc.format)?),
        Plan::Homology { complex, coeff } => {
            let h = complex.homology(*coeff);
            match rc.format {
                Format::Csv => done(homology_csv(complex.min_degree(), &h)),
                _ => done(to_json(&json!({ "coeff": coeff.label(), "homology": homology_rows(complex.min_degree(), &h) }))?),
            }
        }
        Plan::PointsComplex { q, max_degree, variant, report } => {
            done(points(*q, *max_degree, *variant, *report, rc.format)?)
        }
        Plan::Verify { suites: chosen, list } => {
            if *list {
                let text: String = suites::SUITES.iter().map(|s| format!("{}\t{}\n", s.name, s.about)).collect();
                return done(text);
            }
            let (text, ok) = suites::run_tap(chosen, rc.seed);
            Ok(Outcome { text, ok })
        }
    }
}

fn tree_ball(tree: &Tree, place: &str, radius: u64, format: Format) -> CliResult<String> {
    let ball = tree.ball(&TreeVertex::base(), radius);
    let index: BTreeMap<&TreeVertex, usize> = ball.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let labels: Vec<String> = ball.par_iter().map(|v| tree.label(v)).collect();
    let edges: Vec<(usize, usize)> = ball
        .iter()
        .enumerate()
        .flat_map(|(i, v)| {
            let mut out: Vec<(usize, usize)> =
                tree.link(v).iter().filter_map(|w| index.get(w).copied()).filter(|&j| i < j).map(|j| (i, j)).collect();
            out.sort_unstable();
            out
        })
        .collect();
    match format {
        Format::Dot => Ok(dot_graph(&format!("tree ball q={} place={place} radius={radius}", tree.field().q()), &labels, &edges)),
        _ => to_json(&json!({
            "q": tree.field().q(),
            "place": place,
            "radius": radius,
            "vertices": labels,
            "edges": edges,
        })),
    }
}

fn building_of(config: &CurveConfig) -> CliResult<Building> {
    let places = config.places().ok_or_else(|| CliError::Invalid("buildings need a p1 configuration".into()))?;
    Ok(Building::new(places.into_iter().map(|p| Tree::new(&config.k, p)).collect()))
}

fn vertex_labels(b: &Building, v: &BuildingVertex) -> Vec<String> {
    b.trees.iter().zip(v).map(|(t, x)| t.label(x)).collect()
}

#[derive(Serialize)]
struct CubeJson {
    base: usize,
    dirs: Vec<usize>,
    choices: Vec<String>,
}

fn building_ball(config: &CurveConfig, radius: u64, format: Format) -> CliResult<String> {
    let b = building_of(config)?;
    let ball = b.ball(&b.base(), radius);
    let index: BTreeMap<&BuildingVertex, usize> = ball.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let labels: Vec<Vec<String>> = ball.vertices.par_iter().map(|v| vertex_labels(&b, v)).collect();
    match format {
        Format::Dot => {
            let edges: Vec<(usize, usize)> = ball
                .cubes
                .get(1)
                .map(|es| es.iter().map(|e| (index[&e.base], index[&e.corner(1)])).collect())
                .unwrap_or_default();
            let flat: Vec<String> = labels.iter().map(|l| l.join(" ")).collect();
            Ok(dot_graph(&format!("building ball radius={radius}"), &flat, &edges))
        }
        _ => {
            let cubes: Vec<CubeJson> = ball
                .cubes
                .iter()
                .skip(1)
                .flatten()
                .map(|c| CubeJson {
                    base: index[&c.base],
                    dirs: c.dirs.clone(),
                    choices: c.dirs.iter().zip(&c.choices).map(|(&i, w)| b.trees[i].label(w)).collect(),
                })
                .collect();
            let places: Vec<String> = config.punctures.iter().map(|p| p.display(&config.k)).collect();
            to_json(&json!({
                "q": config.k.q(),
                "places": places,
                "radius": radius,
                "vertices": labels,
                "cubes": cubes,
            }))
        }
    }
}

fn pic(config: &CurveConfig, unit_bound: i64) -> CliResult<String> {
    let data = nagata(config)?;
    let units = match units_group(&data, unit_bound) {
        Ok(u) => Value::Array(
            u.units
                .iter()
                .zip(&u.exponents)
                .map(|(f, a)| json!({ "function": f.display(config), "divisor": a }))
                .collect(),
        ),
        Err(btq_core::Error::NotFound(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let curve = match &config.base {
        BaseCurve::ProjectiveLine => "p1",
        BaseCurve::Elliptic(_) => "elliptic",
    };
    to_json(&json!({
        "curve": curve,
        "q": config.k.q(),
        "punctures": config.punctures.iter().map(|p| p.display(&config.k)).collect::<Vec<_>>(),
        "s": config.s(),
        "unit_rank": data.unit_rank,
        "pic": data.pic_string(),
        "pic_complete": data.pic_bar.pretty(),
        "pic0": data.pic0.pretty(),
        "degree_gcd": data.gcd,
        "units": units,
    }))
}

fn kummer_set(config: &CurveConfig) -> CliResult<String> {
    let data = nagata(config)?;
    let ks = kummer(&data.pic)?;
    let orbits: Vec<Vec<Vec<String>>> =
        ks.orbits.iter().map(|o| o.iter().map(|x| x.iter().map(BigInt::to_string).collect()).collect()).collect();
    to_json(&json!({
        "pic": data.pic_string(),
        "size": ks.len(),
        "fixed_points": ks.fixed_points(),
        "orbits": orbits,
    }))
}

pub fn stab_string(d: &StabDescriptor) -> String {
    match d {
        StabDescriptor::FullGL2k => "FullGL2k".into(),
        StabDescriptor::TorusUnipotent { h } => format!("TorusUnipotent({h})"),
        StabDescriptor::NonSplitTorus { unipotent } => format!("NonSplitTorus({unipotent})"),
        StabDescriptor::CentralOnly { unipotent } => format!("CentralOnly({unipotent})"),
    }
}

fn kind_string(k: LinkActionKind) -> &'static str {
    match k {
        LinkActionKind::Standard => "standard",
        LinkActionKind::BoundaryBorel => "boundary-borel",
        LinkActionKind::Trivial => "trivial",
    }
}

fn classify(config: &CurveConfig, radius: u64, format: Format) -> CliResult<String> {
    let ctx = BundleContext::new(config)?;
    let ball = ctx.building.ball(&ctx.building.base(), radius);
    let classes: Vec<BundleClass> = ball.vertices.par_iter().map(|v| ctx.classify_vertex(v)).collect();
    let labels: Vec<Vec<String>> = ball.vertices.iter().map(|v| vertex_labels(&ctx.building, v)).collect();
    if format == Format::Csv {
        let mut out = String::from("vertex,n,twist\n");
        for (l, c) in labels.iter().zip(&classes) {
            out.push_str(&format!("{},{},{}\n", l.join(" "), c.n, c.twist));
        }
        return Ok(out);
    }
    let mut counts: BTreeMap<BundleClass, usize> = BTreeMap::new();
    for c in &classes {
        *counts.entry(*c).or_default() += 1;
    }
    let summary = counts
        .iter()
        .map(|(c, count)| {
            let stab = stabilizer_descriptor(&ctx, *c)?;
            let act = stabilizer_link_action(&ctx, *c)?;
            let dirs: Vec<Value> = act
                .directions
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    json!({
                        "direction": i,
                        "generators": d.generators.iter().map(|g| json!({ "kind": kind_string(g.kind), "fixed": g.fixed })).collect::<Vec<_>>(),
                        "orbits": d.orbits,
                    })
                })
                .collect();
            Ok(json!({
                "n": c.n,
                "twist": c.twist,
                "vertices": count,
                "stab": stab_string(&stab.descriptor),
                "normal_form": act.exponents,
                "link_action": dirs,
            }))
        })
        .collect::<CliResult<Vec<Value>>>()?;
    let vertices: Vec<Value> =
        labels.iter().zip(&classes).map(|(l, c)| json!({ "vertex": l, "n": c.n, "twist": c.twist })).collect();
    to_json(&json!({ "radius": radius, "classes": summary, "vertices": vertices }))
}

fn quotient(config: &CurveConfig, radius: usize, flavor: GroupFlavor, format: Format) -> CliResult<String> {
    let ctx = BundleContext::new(config)?;
    let qb = quotient_ball(&ctx, radius, flavor)?;
    let bundle = |cl: &[BundleClass], dim: usize| -> Value {
        if dim == 0 {
            let c = cl[0];
            if c.twist == 0 {
                json!(c.n)
            } else {
                json!([c.n, c.twist])
            }
        } else {
            json!(cl.iter().map(|c| c.n).collect::<Vec<_>>())
        }
    };
    if format == Format::Dot {
        let labels: Vec<String> =
            qb.cells[0].iter().map(|c| format!("n={} {}", c.classes[0].n, stab_string(&c.stab))).collect();
        let mut edges = Vec::new();
        for e in qb.cells.get(1).into_iter().flatten() {
            let ends = qb.edge_ends(e);
            match ends.as_slice() {
                [a, b] => edges.push((*a.min(b), *a.max(b))),
                [a] => edges.push((*a, *a)),
                _ => {}
            }
        }
        return Ok(dot_graph("quotient (finite-field analogue)", &labels, &edges));
    }
    let cells: Vec<Value> = qb
        .cells
        .iter()
        .flatten()
        .map(|c| {
            json!({
                "dim": c.dim,
                "bundle": bundle(&c.classes, c.dim),
                "stab": stab_string(&c.stab),
                "parabolic": c.parabolic,
                "flipped": c.flipped,
                "faces": c.faces,
            })
        })
        .collect();
    to_json(&json!({
        "label": "finite-field analogue",
        "representatives": "lexicographic minimum (implementation convention)",
        "q": config.k.q(),
        "punctures": config.punctures.iter().map(|p| p.display(&config.k)).collect::<Vec<_>>(),
        "group": match flavor { GroupFlavor::Gl2 => "gl2", GroupFlavor::Sl2 => "sl2" },
        "radius": radius,
        "vertex_orbits": qb.count(0),
        "cell_orbits": (0..qb.cells.len()).map(|d| qb.count(d)).collect::<Vec<_>>(),
        "components": qb.components(false),
        "parabolic_components": qb.components(true),
        "cells": cells,
    }))
}

fn model(group: &CrystGroup, window: i64, coeff: Coeff, field_order: Option<u32>, format: Format) -> CliResult<String> {
    let h = quotient_homology(group, window, coeff)?;
    if format == Format::Csv {
        return Ok(homology_csv(0, &h));
    }
    let mq = model_quotient(group, window)?;
    let special = if group.flavor.has_inversions() { Some(special_vertices(group)?) } else { None };
    let sn = match (group.flavor, field_order) {
        (Flavor::SN, Some(q)) => {
            let (units, minus_one) = units_presentation(q as u64, group.rank());
            Some(GroupJson::new(&sn_tilde_h1(&units, &minus_one, coeff)))
        }
        _ => None,
    };
    let cells: Vec<Value> = mq
        .cells
        .iter()
        .flatten()
        .map(|c| {
            json!({
                "class": c.class.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                "dirs": c.dirs,
                "stabilizer": c.stabilizer,
            })
        })
        .collect();
    to_json(&json!({
        "flavor": format!("{:?}", group.flavor),
        "s": group.s,
        "rank": group.rank(),
        "window": window,
        "coeff": coeff.label(),
        "cells": cells,
        "complex": ChainComplexJson::from_complex(&mq.complex),
        "homology": homology_rows(0, &h),
        "special_vertices": special,
        "sn_tilde_h1": sn,
    }))
}

/// `GL_2(F_q)` or a subgroup acting on the ball around the standard lattice
/// in the tree of the place `t`.
pub fn tree_ball_gcomplex(group: FiniteGroup, radius: u64) -> CliResult<GComplex> {
    let (k, mats) = group.matrices.clone().ok_or_else(|| CliError::Invalid("a matrix group is required".into()))?;
    let tree = Tree::new(&k, Place::parse("t", &k)?);
    let ball = tree.ball(&TreeVertex::base(), radius);
    let index: BTreeMap<&TreeVertex, usize> = ball.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for (i, v) in ball.iter().enumerate() {
        for w in tree.link(v) {
            if let Some(&j) = index.get(&w) {
                if i < j {
                    facets.push(vec![i, j]);
                }
            }
        }
    }
    if facets.is_empty() {
        facets.push(vec![0]);
    }
    let sc = SimplicialComplex::from_facets(ball.len(), &facets);
    let perms: Vec<Vec<usize>> = mats
        .par_iter()
        .map(|m| {
            let g = Mat2::new(RatFunc::constant(m[0]), RatFunc::constant(m[1]), RatFunc::constant(m[2]), RatFunc::constant(m[3]));
            ball.iter()
                .map(|v| {
                    let w = tree.canonicalize(&g.mul(&tree.matrix(v), &k)).expect("invertible");
                    index[&w]
                })
                .collect()
        })
        .collect();
    Ok(GComplex::from_simplicial(group, &sc, |g| perms[g].clone())?)
}

fn e1(target: &E1Target, coeff: Coeff, q_max: usize, format: Format) -> CliResult<String> {
    let (x, label) = match target {
        E1Target::Point(g) => {
            let sc = SimplicialComplex::from_facets(1, &[vec![0]]);
            let name = g.name.clone();
            (GComplex::from_simplicial(g.clone(), &sc, |_| vec![0])?, format!("point under {name}"))
        }
        E1Target::TreeBall(g, r) => {
            let name = g.name.clone();
            (tree_ball_gcomplex(g.clone(), *r)?, format!("tree ball of radius {r} under {name}"))
        }
        E1Target::Points(q, n) => (
            btq_core::points::alternating_quotient(*q, *n)?,
            format!("alternating points complex modulo decomposables, q={q}, degree<={n}, under SL2"),
        ),
    };
    let page = match e1_page(&x, coeff, q_max) {
        Ok(p) => p,
        Err(btq_core::Error::Unsupported(reason) | btq_core::Error::ResourceCap(reason)) => {
            // Stabilizers permute faces, or explicit cycles are too large:
            // fall back to the total complex.
            let direct = equivariant_homology(&x, q_max, coeff)?;
            if format == Format::Csv {
                return Ok(homology_csv(0, &direct));
            }
            return to_json(&json!({
                "complex": label,
                "coeff": coeff.label(),
                "e1": Value::Null,
                "reason": reason,
                "total_direct": homology_rows(0, &direct),
            }));
        }
        Err(e) => return Err(e.into()),
    };
    let p_max = page.p_max();
    let e1_grid: Vec<Vec<_>> = (0..=p_max).map(|p| (0..=q_max).map(|q| page.group(p, q)).collect()).collect();
    let e2 = e2_and_total(&page);
    if format == Format::Csv {
        let mut out = grid_csv("E1", &e1_grid);
        out.push('\n');
        out.push_str(&grid_csv("E2", &e2.entries));
        return Ok(out);
    }
    to_json(&json!({
        "complex": label,
        "subdivided": x.subdivided,
        "coeff": coeff.label(),
        "q_max": q_max,
        "cells": x.dims,
        "stabilizer_orders": page.stabilizer_orders,
        "e1": grid_strings(&e1_grid),
        "d1_squared_vanishes": page.d1_squared_vanishes(),
        "e2": grid_strings(&e2.entries),
        "degenerate": e2.degenerate,
        "marker": e2.marker,
        "total": e2.total.as_ref().map(|t| homology_rows(0, t)),
        "extension_ambiguous": e2.extension_ambiguous,
    }))
}

fn point_label(q: u32, z: usize) -> String {
    if z == q as usize {
        "inf".into()
    } else {
        z.to_string()
    }
}

fn points(q: u32, max_degree: usize, variant: Variant, report: Option<PointsReport>, format: Format) -> CliResult<String> {
    let c = build_points_complex(q, max_degree, variant)?;
    if format == Format::Csv {
        return Ok(homology_csv(0, &c.complex.homology(Coeff::Z)));
    }
    let bases: Vec<Vec<Vec<String>>> =
        c.bases.iter().map(|b| b.iter().map(|t| t.iter().map(|&z| point_label(q, z)).collect()).collect()).collect();
    let report = match report {
        None => Value::Null,
        Some(PointsReport::Acyclicity) => {
            let r = acyclicity_check(&c);
            json!({
                "kind": "acyclicity",
                "augmented": true,
                "checked": r.checked.iter().map(|(n, g)| json!({ "degree": n, "group": GroupJson::new(g) })).collect::<Vec<_>>(),
                "outside": r.outside.iter().map(|(n, g, why)| json!({ "degree": n, "group": GroupJson::new(g), "note": why })).collect::<Vec<_>>(),
                "acyclic_in_range": r.acyclic_in_range,
            })
        }
        Some(PointsReport::De) => {
            let r = de_exactness(q)?;
            json!({
                "kind": "de",
                "chain_maps": r.chain_maps,
                "composite_zero": r.composite_zero,
                "integral": r.integral.iter().map(|t| t.iter().map(GroupJson::new).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "exact_after_inverting_two": r.exact_half,
                "exact_mod_three": r.exact_mod3,
            })
        }
        Some(PointsReport::Rp1) => {
            let r = rp1_low_degree(q, 1)?;
            json!({
                "kind": "rp1",
                "transitive_points": r.transitive_points,
                "transitive_pairs": r.transitive_pairs,
                "groups": homology_rows(0, &r.groups),
            })
        }
    };
    to_json(&json!({
        "q": q,
        "variant": match variant { Variant::Plain => "plain", Variant::Alternating => "alternating" },
        "max_degree": c.max_degree,
        "point_order": "0 < 1 < ... < q-1 < inf",
        "bases": bases,
        "complex": ChainComplexJson::from_complex(&c.complex),
        "report": report,
    }))
}

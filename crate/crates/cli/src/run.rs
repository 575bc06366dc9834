//! `run <config>`: dispatch to the owning module, then write the report and artifacts.

use std::path::Path;
use std::time::Instant;

use irslab_core::convex::{
    barycenter, invariant_measure_test, BodyMeasure, ConvexBody, DirectionSet, MeasureVerdict, OrthogonalAction,
    Point,
};
use irslab_core::group::{GroupElement, MarkedGroup};
use irslab_core::irs::{fixtures as irs_fixtures, InvarianceCheck, IrsDistribution};
use irslab_core::rational::{format_rational, parse_rational, to_f64};
use irslab_core::spectral::{
    bs_distance_to_cayley, bs_local_statistics, cycle_kernel, cycle_rho0, local_approximation_report,
    markov_spectral_radius_rho0, SchreierGraph,
};
use irslab_core::subgroup::Subgroup;
use irslab_core::tdlc::{
    folner_certificate_check, folner_search, haar_ratio, haar_ratio_by_index, CosetUnion, FolnerOptions,
    FolnerOutcome, Portrait, RootedTreeGroup, TruncatedSubgroup,
};
use irslab_core::Error as CoreError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{
    ConeParams, ConvergenceParams, CosetSpec, ExperimentConfig, FolnerParams, GroupSpec, HaarParams, IrsCheckParams,
    Params, RadicalFixture, RadicalParams, SpectraParams, SubgroupFamily,
};
use crate::error::{CliError, Context, Result};
use crate::plot::{Band, LinePlot, Series};
use crate::report::{fmt_f64, RunReport};

/// Default index bound for normal closures in free groups.
pub const DEFAULT_INDEX_BOUND: usize = 1000;

/// Results plus the artifact files to write, as `(file name, contents)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Value,
    pub files: Vec<(String, String)>,
}

/// Computes a run without touching the file system (inputs aside).
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    match &config.params {
        Params::SchreierSpectra(p) => schreier_spectra(config, p),
        Params::BsConvergence(p) => bs_convergence(config, p),
        Params::IrsCheck(p) => irs_check(config, p),
        Params::FolnerSearch(p) => folner(config, p),
        Params::HaarRatio(p) => haar(config, p),
        Params::ConeBarycenter(p) => cone(config, p),
        Params::RadicalCheck(p) => radical(config, p),
    }
}

/// Executes `config` and writes `report.json` and the artifacts into the output directory.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let start = Instant::now();
    let outcome = execute(config)?;
    let dir = config.effective_output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut report = RunReport::new(
        serde_json::to_value(config).expect("configs serialize"),
        outcome.results,
    );
    for (name, contents) in &outcome.files {
        write(&dir.join(name), contents)?;
        report.artifacts.push(name.clone());
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    write(&dir.join("report.json"), &report.to_json())?;
    Ok(report)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Whole group by name, `trivial`, element names for finite subgroups, index or rank otherwise.
pub fn describe_subgroup(h: &Subgroup, group_name: &str) -> String {
    if h.is_whole() {
        return group_name.to_string();
    }
    if h.is_trivial() {
        return "trivial".into();
    }
    if let Some(elems) = h.elements() {
        let names: Vec<String> = elems
            .iter()
            .map(|&i| h.parent().element_name(&GroupElement::Index(i)))
            .collect();
        return format!("{{{}}}", names.join(", "));
    }
    match (h.index(), h.free_rank()) {
        (Some(i), _) => format!("index {i}"),
        (None, Some(r)) => format!("infinite index, rank {r}"),
        _ => "subgroup".into(),
    }
}

fn subgroup_json(h: &Subgroup, group_name: &str) -> Value {
    json!({
        "description": describe_subgroup(h, group_name),
        "order": h.order(),
        "index": h.index(),
    })
}

fn family(config: &ExperimentConfig, family: SubgroupFamily, indices: &[usize]) -> Result<Vec<Subgroup>> {
    match family {
        SubgroupFamily::Cycle => indices
            .iter()
            .map(|&n| cycle_kernel(n).context(|| format!("cycle kernel of index {n}")))
            .collect(),
        SubgroupFamily::Random => {
            let g = config.group.marked()?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            indices
                .iter()
                .map(|&n| {
                    Subgroup::random_finite_index(&g, n, &mut rng).context(|| format!("random subgroup of index {n}"))
                })
                .collect()
        }
    }
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn schreier_spectra(config: &ExperimentConfig, p: &SpectraParams) -> Result<Outcome> {
    let members = family(config, p.family, &p.indices)?;
    let report =
        local_approximation_report(&members, p.radius, p.tolerance).context(|| "local approximation report".into())?;
    let mut csv = format!("index,rho0,bs_distance_R{}\n", p.radius);
    let mut rows = Vec::new();
    for row in &report.rows {
        csv.push_str(&format!("{},{},{}\n", row.index, opt_f64(row.rho0), format_rational(&row.bs_distance)));
        let mut item = json!({
            "index": row.index,
            "rho0": row.rho0,
            "bs_distance": format_rational(&row.bs_distance),
        });
        if p.family == SubgroupFamily::Cycle {
            item["closed_form"] = json!(cycle_rho0(row.index));
        }
        rows.push(item);
    }
    let plot = LinePlot {
        title: "spectral radius of the Markov operator".into(),
        x_label: "index".into(),
        y_label: "rho0".into(),
        series: vec![Series {
            label: "rho0".into(),
            points: report
                .rows
                .iter()
                .filter_map(|r| r.rho0.map(|v| (r.index as f64, v)))
                .collect(),
        }],
        band: Some(Band {
            label: format!("Cayley R={}", report.cayley.radius),
            lower: report.cayley.lower,
            upper: report.cayley.upper,
        }),
    };
    let results = json!({
        "radius": p.radius,
        "rows": rows,
        "cayley": {
            "radius": report.cayley.radius,
            "lower": report.cayley.lower,
            "upper": report.cayley.upper,
        },
        "trailing_rho0": report.trailing_rho0,
        "hypothesis_observed": report.hypothesis_observed,
        "conclusion_observed": report.conclusion_observed,
        "theorem_consistent": report.theorem_consistent,
    });
    Ok(Outcome {
        results,
        files: vec![
            ("schreier-spectra.csv".into(), csv),
            ("schreier-spectra.svg".into(), plot.to_svg()),
        ],
    })
}

fn bs_convergence(config: &ExperimentConfig, p: &ConvergenceParams) -> Result<Outcome> {
    let members = family(config, p.family, &p.indices)?;
    let parent = config.group.marked()?;
    let header: Vec<String> = p.radii.iter().map(|r| format!("bs_distance_R{r}")).collect();
    let mut csv = format!("index,rho0,{}\n", header.join(","));
    let mut rows = Vec::new();
    let mut series: Vec<Series> = p
        .radii
        .iter()
        .map(|r| Series {
            label: format!("R={r}"),
            points: Vec::new(),
        })
        .collect();
    for h in &members {
        let graph = SchreierGraph::from_subgroup(h).context(|| "Schreier graph".into())?;
        let rho0 = match markov_spectral_radius_rho0(&graph, p.tolerance) {
            Ok(r) => Some(r),
            Err(CoreError::GraphTooSmall) => None,
            Err(e) => return Err(e).context(|| format!("spectral radius at index {}", graph.vertex_count())),
        };
        let mut distances = Vec::new();
        for (k, &r) in p.radii.iter().enumerate() {
            let d = bs_distance_to_cayley(&bs_local_statistics(&graph, r), &parent)
                .context(|| format!("ball statistics at radius {r}"))?;
            series[k].points.push((graph.vertex_count() as f64, to_f64(&d)));
            distances.push(d);
        }
        let cells: Vec<String> = distances.iter().map(format_rational).collect();
        csv.push_str(&format!("{},{},{}\n", graph.vertex_count(), opt_f64(rho0), cells.join(",")));
        rows.push(json!({
            "index": graph.vertex_count(),
            "rho0": rho0,
            "bs_distance": p.radii.iter().zip(&cells).map(|(r, d)| json!({"radius": r, "value": d})).collect::<Vec<_>>(),
        }));
    }
    let plot = LinePlot {
        title: "Benjamini-Schramm distance to the Cayley graph".into(),
        x_label: "index".into(),
        y_label: "distance".into(),
        series,
        band: None,
    };
    Ok(Outcome {
        results: json!({ "radii": p.radii, "rows": rows }),
        files: vec![
            ("bs-convergence.csv".into(), csv),
            ("bs-convergence.svg".into(), plot.to_svg()),
        ],
    })
}

fn load_irs(config: &ExperimentConfig, field: &str, path: &str, parent: &MarkedGroup) -> Result<IrsDistribution> {
    let text = config.read_input(field, path)?;
    IrsDistribution::from_text(parent, &text).map_err(|e| CliError::config(field, format!("`{path}`: {e}")))
}

fn irs_check(config: &ExperimentConfig, p: &IrsCheckParams) -> Result<Outcome> {
    let parent = config.group.marked()?;
    let name = config.group.display_name();
    let mu = load_irs(config, "irs_file", &p.irs_file, &parent)?;
    let bound = p.index_bound.or(parent.order()).unwrap_or(DEFAULT_INDEX_BOUND);
    let check = mu.check_conjugation_invariance().context(|| "conjugation invariance".into())?;
    let invariance = match &check {
        InvarianceCheck::Certificate { letters_checked, atoms } => json!({
            "certificate": true,
            "letters_checked": letters_checked,
            "atoms": atoms,
        }),
        InvarianceCheck::Violation {
            letter,
            subgroup,
            weight,
            conjugate_weight,
        } => json!({
            "certificate": false,
            "letter": parent.letter_label(*letter),
            "subgroup": describe_subgroup(subgroup, &name),
            "weight": format_rational(weight),
            "conjugate_weight": format_rational(conjugate_weight),
        }),
    };
    let mut results = json!({
        "atoms": mu.atoms().len(),
        "invariant": check.is_certificate(),
        "invariance": invariance,
    });
    if check.is_certificate() {
        let closure = mu.normal_closure(bound).context(|| "normal closure".into())?;
        let components = mu.ergodic_components().context(|| "ergodic decomposition".into())?;
        results["normal_closure"] = subgroup_json(&closure, &name);
        results["spanning"] = json!(closure.is_whole());
        results["ergodic_components"] = json!(components.len());
        results["component_weights"] = json!(components.iter().map(|(w, _)| format_rational(w)).collect::<Vec<_>>());
    }
    Ok(Outcome { results, files: Vec::new() })
}

fn parse_portraits(tree: &RootedTreeGroup, field: &str, reps: &[String]) -> Result<Vec<Portrait>> {
    reps.iter()
        .map(|s| tree.parse(s).map_err(|e| CliError::config(field, e.to_string())))
        .collect()
}

fn ambient(config: &ExperimentConfig, gens: &[String]) -> Result<TruncatedSubgroup> {
    let tree = config.group.tree()?;
    if gens.is_empty() {
        TruncatedSubgroup::whole(&tree).context(|| "enumerating the truncation".into())
    } else {
        let gens = parse_portraits(&tree, "ambient", gens)?;
        TruncatedSubgroup::generated_by(&tree, &gens).context(|| "generating the ambient subgroup".into())
    }
}

fn coset_union(c: &TruncatedSubgroup, field: &str, spec: &CosetSpec) -> Result<CosetUnion> {
    let reps = parse_portraits(c.group(), field, &spec.reps)?;
    CosetUnion::from_reps(c, spec.level, &reps).context(|| format!("coset union `{field}`"))
}

fn haar(config: &ExperimentConfig, p: &HaarParams) -> Result<Outcome> {
    let c = ambient(config, &p.ambient)?;
    let o = coset_union(&c, "o", &p.o)?;
    let l = coset_union(&c, "l", &p.l)?;
    let ratio = haar_ratio(&c, &o, &l).context(|| "Haar ratio".into())?;
    let by_index = haar_ratio_by_index(&c, &o, &l).context(|| "Haar ratio by index".into())?;
    let results = json!({
        "ambient_order": c.order(),
        "o": { "level": o.level(), "cosets": o.len() },
        "l": { "level": l.level(), "cosets": l.len() },
        "ratio": format_rational(&ratio),
        "ratio_by_index": format_rational(&by_index),
        "agree": ratio == by_index,
    });
    Ok(Outcome { results, files: Vec::new() })
}

fn folner(config: &ExperimentConfig, p: &FolnerParams) -> Result<Outcome> {
    let c = ambient(config, &p.ambient)?;
    let tree = c.group().clone();
    let q = parse_portraits(&tree, "q", &p.q)?;
    let options = FolnerOptions {
        q_level: p.q_level,
        max_cosets: p.max_cosets,
        subset_budget: p.subset_budget,
    };
    let outcome = folner_search(&c, &q, p.n, &options).context(|| "Følner search".into())?;
    let certificate = match &outcome {
        FolnerOutcome::Certificate(cert) => {
            let verified = folner_certificate_check(cert, &c, &q, p.n).context(|| "certificate check".into())?;
            json!({
                "outcome": "certificate",
                "level": cert.level,
                "reps": cert.reps.iter().map(|r| tree.format(r)).collect::<Vec<_>>(),
                "worst_ratio": format_rational(&cert.worst_ratio),
                "n": cert.n,
                "q_level": cert.q_level,
                "verified": verified,
            })
        }
        FolnerOutcome::Exhausted(report) => json!({
            "outcome": "exhausted",
            "n": report.n,
            "q_level": report.q_level,
            "attempts": report.attempts.iter().map(|a| json!({
                "level": a.level,
                "cosets": a.cosets,
                "skipped": a.skipped,
                "best_ratio": a.best_ratio.as_ref().map(format_rational),
            })).collect::<Vec<_>>(),
        }),
    };
    let file = serde_json::to_string_pretty(&certificate).expect("certificates serialize") + "\n";
    Ok(Outcome {
        results: json!({ "ambient_order": c.order(), "search": certificate }),
        files: vec![("certificate.json".into(), file)],
    })
}

fn point_json(p: &Point) -> Value {
    json!(p.iter().map(format_rational).collect::<Vec<_>>())
}

fn body_json(c: &ConvexBody) -> Value {
    json!(c.vertices().iter().map(point_json).collect::<Vec<_>>())
}

fn cone_irs(action: &OrthogonalAction, p: &ConeParams) -> Result<IrsDistribution> {
    let g = action.group();
    let mut atoms = Vec::new();
    for (k, atom) in p.irs.iter().enumerate() {
        let field = format!("irs[{k}]");
        let gens = atom
            .generators
            .iter()
            .map(|w| g.parse_element(w))
            .collect::<irslab_core::Result<Vec<_>>>()
            .map_err(|e| CliError::config(&field, e.to_string()))?;
        let h = Subgroup::generated_by(g, &gens).map_err(|e| CliError::config(&field, e.to_string()))?;
        let w = parse_rational(&atom.weight)
            .ok_or_else(|| CliError::config(&field, format!("bad weight `{}`", atom.weight)))?;
        atoms.push((h, w));
    }
    IrsDistribution::new(g, atoms).map_err(|e| CliError::config("irs", e.to_string()))
}

fn cone(config: &ExperimentConfig, p: &ConeParams) -> Result<Outcome> {
    let action = config.group.orthogonal()?;
    let text = config.read_input("body", &p.body)?;
    let c = ConvexBody::from_text(&text).map_err(|e| CliError::config("body", format!("`{}`: {e}", p.body)))?;
    if c.dim() != action.dim() {
        return Err(CliError::config("body", "body and action have different dimensions"));
    }
    let mut results = json!({ "body": body_json(&c) });
    let nu = if let Some(path) = &p.measure {
        let text = config.read_input("measure", path)?;
        BodyMeasure::from_text(&text).map_err(|e| CliError::config("measure", format!("`{path}`: {e}")))?
    } else {
        let mu = cone_irs(&action, p)?;
        let check = mu.check_conjugation_invariance().context(|| "IRS invariance".into())?;
        results["irs_invariant"] = json!(check.is_certificate());
        action.pushforward_fix(&mu, &c).context(|| "pushforward of the IRS".into())?
    };
    let bary = barycenter(&nu).context(|| "barycenter".into())?;
    let dirs = match p.covering {
        Some(r) => DirectionSet::with_covering(c.dim(), r),
        None => DirectionSet::default_for(c.dim()),
    }
    .context(|| "direction set".into())?;
    let verdict = invariant_measure_test(&nu, &c, &dirs).context(|| "invariant measure test".into())?;
    results["measure"] = json!(nu
        .atoms()
        .iter()
        .map(|(b, w)| json!({ "weight": format_rational(w), "vertices": body_json(b) }))
        .collect::<Vec<_>>());
    results["measure_invariant"] = json!(action.is_invariant_measure(&nu).context(|| "measure invariance".into())?);
    results["barycenter"] = body_json(&bary);
    results["barycenter_fixed"] = json!(action.is_fixed_body(&bary).context(|| "fixed body".into())?);
    results["directions"] = json!(dirs.len());
    results["verdict"] = match verdict {
        MeasureVerdict::Consistent => json!({ "kind": "consistent" }),
        MeasureVerdict::Violated => json!({ "kind": "violated" }),
        MeasureVerdict::BarycenterProper { direction, drop } => json!({
            "kind": "barycenter-proper",
            "direction": direction.as_ref().map(point_json),
            "drop": format_rational(&drop),
        }),
    };
    Ok(Outcome {
        results,
        files: vec![
            ("measure.txt".into(), nu.to_text()),
            ("barycenter.txt".into(), bary.to_text()),
        ],
    })
}

fn radical(config: &ExperimentConfig, p: &RadicalParams) -> Result<Outcome> {
    let parent = config.group.marked()?;
    let name = config.group.display_name();
    let mu = match (&p.irs_file, p.fixture) {
        (Some(path), _) => load_irs(config, "irs_file", path, &parent)?,
        (None, Some(fixture)) => {
            let size = |prefix: &str| match &config.group {
                GroupSpec::Finite { name } => name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok()),
                _ => None,
            };
            let mu = match fixture {
                RadicalFixture::DirectSum => size("Z2^").map(irs_fixtures::direct_sum),
                RadicalFixture::Lamplighter => size("L").map(irs_fixtures::lamplighter),
            };
            mu.filter(|m| m.parent() == &parent)
                .ok_or_else(|| CliError::config("fixture", "fixture does not live on the configured group"))?
        }
        (None, None) => return Err(CliError::config("fixture", "no IRS given")),
    };
    let report = mu.amenable_radical_check().context(|| "amenable radical".into())?;
    let results = json!({
        "atoms": mu.atoms().len(),
        "is_amenable_irs": report.is_amenable_irs,
        "radical": subgroup_json(&report.radical, &name),
        "contained_in_radical": report.contained_in_radical,
        "theorem_consistent": report.theorem_consistent,
    });
    Ok(Outcome { results, files: Vec::new() })
}

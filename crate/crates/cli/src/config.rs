//! Experiment configuration: a TOML file with top-level `kind`, `seed`, `output_dir`, a
//! `[group]` block and one parameter section named after the kind.
//!
//! ```toml
//! kind = "schreier-spectra"
//! seed = 0
//! output_dir = "out/spectra"
//!
//! [group]
//! family = "free"
//! rank = 2
//!
//! [schreier-spectra]
//! family = "cycle"
//! indices = [4, 8, 16, 32, 64]
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use irslab_core::convex::fixtures::{klein_reflections, signed_permutations};
use irslab_core::convex::OrthogonalAction;
use irslab_core::group::fixtures::{
    alternating4, cyclic, dihedral, elementary_abelian, lamplighter, symmetric, trivial,
};
use irslab_core::group::MarkedGroup;
use irslab_core::tdlc::RootedTreeGroup;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Context, Result};

/// Environment variable overriding `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "IRSLAB_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "irslab-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SchreierSpectra,
    BsConvergence,
    IrsCheck,
    FolnerSearch,
    HaarRatio,
    ConeBarycenter,
    RadicalCheck,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::SchreierSpectra,
        Kind::BsConvergence,
        Kind::IrsCheck,
        Kind::FolnerSearch,
        Kind::HaarRatio,
        Kind::ConeBarycenter,
        Kind::RadicalCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::SchreierSpectra => "schreier-spectra",
            Kind::BsConvergence => "bs-convergence",
            Kind::IrsCheck => "irs-check",
            Kind::FolnerSearch => "folner-search",
            Kind::HaarRatio => "haar-ratio",
            Kind::ConeBarycenter => "cone-barycenter",
            Kind::RadicalCheck => "radical-check",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrthogonalFamily {
    /// The reflections in both axes of the plane.
    Klein,
    /// The symmetry group of the cube in `dim` dimensions.
    SignedPermutations,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Free {
        rank: usize,
    },
    /// Named small groups: `S<n>` (n ≤ 5), `A4`, `D<n>` (3 ≤ n ≤ 9), `Z<n>`, `V4`,
    /// `Z2^<n>`, `L<m>` (lamplighter over ℤ/m) and `trivial`.
    Finite {
        name: String,
    },
    Tree {
        arity: usize,
        depth: usize,
    },
    Orthogonal {
        action: OrthogonalFamily,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

/// A group spec turned into the structure the owning module works with.
pub enum BuiltGroup {
    Marked(MarkedGroup),
    Tree(Arc<RootedTreeGroup>),
    Orthogonal(OrthogonalAction),
}

pub(crate) fn finite_by_name(name: &str) -> Option<MarkedGroup> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    match name {
        "trivial" => return Some(trivial()),
        "A4" => return Some(alternating4()),
        "V4" => return Some(elementary_abelian(2)),
        _ => {}
    }
    if let Some(n) = num("Z2^").filter(|n| (1..=12).contains(n)) {
        return Some(elementary_abelian(n));
    }
    if let Some(n) = num("S").filter(|n| (1..=5).contains(n)) {
        return Some(symmetric(n));
    }
    if let Some(n) = num("D").filter(|n| (3..=9).contains(n)) {
        return Some(dihedral(n));
    }
    if let Some(n) = num("Z").filter(|n| (1..=5000).contains(n)) {
        return Some(cyclic(n));
    }
    if let Some(m) = num("L").filter(|m| (1..=8).contains(m)) {
        return Some(lamplighter(m));
    }
    None
}

impl GroupSpec {
    pub fn build(&self) -> Result<BuiltGroup> {
        match self {
            GroupSpec::Free { rank } => {
                if *rank == 0 {
                    return Err(CliError::config("group.rank", "rank must be at least 1"));
                }
                MarkedGroup::free(*rank)
                    .context(|| "building the free group".into())
                    .map(BuiltGroup::Marked)
            }
            GroupSpec::Finite { name } => finite_by_name(name)
                .map(BuiltGroup::Marked)
                .ok_or_else(|| CliError::config("group.name", format!("unknown finite group `{name}`"))),
            GroupSpec::Tree { arity, depth } => RootedTreeGroup::new(*arity, *depth)
                .map_err(|e| CliError::config("group", e.to_string()))
                .map(|g| BuiltGroup::Tree(Arc::new(g))),
            GroupSpec::Orthogonal { action, dim } => match (action, dim) {
                (OrthogonalFamily::Klein, None | Some(2)) => Ok(BuiltGroup::Orthogonal(klein_reflections())),
                (OrthogonalFamily::Klein, Some(_)) => Err(CliError::config("group.dim", "the klein action is planar")),
                (OrthogonalFamily::SignedPermutations, Some(d)) if (1..=3).contains(d) => {
                    Ok(BuiltGroup::Orthogonal(signed_permutations(*d)))
                }
                (OrthogonalFamily::SignedPermutations, _) => {
                    Err(CliError::config("group.dim", "signed-permutations needs dim in 1..=3"))
                }
            },
        }
    }

    pub fn marked(&self) -> Result<MarkedGroup> {
        match self.build()? {
            BuiltGroup::Marked(g) => Ok(g),
            BuiltGroup::Orthogonal(a) => Ok(a.group().clone()),
            BuiltGroup::Tree(_) => Err(CliError::config("group.family", "expected a free or finite group")),
        }
    }

    pub fn tree(&self) -> Result<Arc<RootedTreeGroup>> {
        match self.build()? {
            BuiltGroup::Tree(t) => Ok(t),
            _ => Err(CliError::config("group.family", "expected a tree group")),
        }
    }

    pub fn orthogonal(&self) -> Result<OrthogonalAction> {
        match self.build()? {
            BuiltGroup::Orthogonal(a) => Ok(a),
            _ => Err(CliError::config("group.family", "expected an orthogonal action")),
        }
    }

    /// Short human-readable name, as used for whole subgroups in reports.
    pub fn display_name(&self) -> String {
        match self {
            GroupSpec::Free { rank } => format!("F{rank}"),
            GroupSpec::Finite { name } => name.clone(),
            GroupSpec::Tree { arity, depth } => format!("Aut(T_{arity},{depth})"),
            GroupSpec::Orthogonal { action, dim } => match action {
                OrthogonalFamily::Klein => "klein".into(),
                OrthogonalFamily::SignedPermutations => format!("signed-permutations({})", dim.unwrap_or(0)),
            },
        }
    }
}

/// `free:2`, `finite:S3`, `tree:2:3`, `orthogonal:klein`, `orthogonal:signed-permutations:3`.
impl FromStr for GroupSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Usage(format!("bad group spec `{s}`"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["free", r] => Ok(GroupSpec::Free { rank: num(r)? }),
            ["finite", name] => Ok(GroupSpec::Finite { name: name.to_string() }),
            ["tree", d, depth] => Ok(GroupSpec::Tree {
                arity: num(d)?,
                depth: num(depth)?,
            }),
            ["orthogonal", "klein"] => Ok(GroupSpec::Orthogonal {
                action: OrthogonalFamily::Klein,
                dim: None,
            }),
            ["orthogonal", "signed-permutations", d] => Ok(GroupSpec::Orthogonal {
                action: OrthogonalFamily::SignedPermutations,
                dim: Some(num(d)?),
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupFamily {
    /// Kernels of `F₂ → ℤ/n`, `a ↦ 1`, `b ↦ 0`.
    Cycle,
    /// Uniformly random transitive actions of the given degrees, drawn from the seed.
    Random,
}

fn default_radius() -> usize {
    2
}

fn default_radii() -> Vec<usize> {
    vec![1, 2, 3]
}

fn default_tolerance() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraParams {
    pub family: SubgroupFamily,
    pub indices: Vec<usize>,
    #[serde(default = "default_radius")]
    pub radius: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceParams {
    pub family: SubgroupFamily,
    pub indices: Vec<usize>,
    #[serde(default = "default_radii")]
    pub radii: Vec<usize>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrsCheckParams {
    /// Path to an `irs v1` file, relative to the config file.
    pub irs_file: String,
    /// Index bound for normal closures in free groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosetSpec {
    pub level: usize,
    /// Portraits in level order, levels separated by `|`.
    pub reps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarParams {
    /// Generators of the ambient subgroup; empty means the whole truncation.
    #[serde(default)]
    pub ambient: Vec<String>,
    pub o: CosetSpec,
    pub l: CosetSpec,
}

fn default_max_cosets() -> usize {
    4096
}

fn default_budget() -> usize {
    50_000
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FolnerParams {
    #[serde(default)]
    pub ambient: Vec<String>,
    /// Representatives of the test set `Q`.
    pub q: Vec<String>,
    pub n: u64,
    #[serde(default)]
    pub q_level: usize,
    #[serde(default = "default_max_cosets")]
    pub max_cosets: usize,
    #[serde(default = "default_budget")]
    pub subset_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    /// Generators of the atom as words in the group labels.
    pub generators: Vec<String>,
    /// `p/q`.
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeParams {
    /// Path to a `body v1` file, relative to the config file.
    pub body: String,
    /// The IRS pushed forward by `H ↦ Fix(H) ∩ C`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irs: Vec<AtomSpec>,
    /// Alternatively, a `measure v1` file on subsets of the body.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    /// Covering radius of the test directions; defaults to the library default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadicalFixture {
    /// Coordinate copies in `(ℤ/2)^n`, on group `Z2^n`.
    DirectSum,
    /// Lamp copies in `ℤ/2 ≀ ℤ/m`, on group `L<m>`.
    Lamplighter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicalParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<RadicalFixture>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    SchreierSpectra(SpectraParams),
    BsConvergence(ConvergenceParams),
    IrsCheck(IrsCheckParams),
    FolnerSearch(FolnerParams),
    HaarRatio(HaarParams),
    ConeBarycenter(ConeParams),
    RadicalCheck(RadicalParams),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Kind,
    #[serde(default)]
    seed: u64,
    output_dir: Option<String>,
    group: GroupSpec,
    #[serde(rename = "schreier-spectra")]
    schreier_spectra: Option<SpectraParams>,
    #[serde(rename = "bs-convergence")]
    bs_convergence: Option<ConvergenceParams>,
    #[serde(rename = "irs-check")]
    irs_check: Option<IrsCheckParams>,
    #[serde(rename = "folner-search")]
    folner_search: Option<FolnerParams>,
    #[serde(rename = "haar-ratio")]
    haar_ratio: Option<HaarParams>,
    #[serde(rename = "cone-barycenter")]
    cone_barycenter: Option<ConeParams>,
    #[serde(rename = "radical-check")]
    radical_check: Option<RadicalParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub group: GroupSpec,
    pub params: Params,
    /// Directory that relative input paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// 1-based line of the first `key = …` inside `[section]` (or at top level when
/// `section` is empty).
pub fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(h) = t.strip_prefix('[').and_then(|r| r.split(']').next()) {
            current = h.trim().to_string();
            if key.is_empty() && current == section {
                return Some(i + 1);
            }
            continue;
        }
        if current == section && !key.is_empty() {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ExperimentConfig {
    /// Parses and validates a config. `base_dir` resolves relative input paths.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::ConfigInvalid {
            line: e.span().map(|s| line_of_offset(text, s.start)),
            field: "config".into(),
            message: e.message().to_string(),
        })?;
        let kind = raw.kind;
        let sections: [(Kind, bool); 7] = [
            (Kind::SchreierSpectra, raw.schreier_spectra.is_some()),
            (Kind::BsConvergence, raw.bs_convergence.is_some()),
            (Kind::IrsCheck, raw.irs_check.is_some()),
            (Kind::FolnerSearch, raw.folner_search.is_some()),
            (Kind::HaarRatio, raw.haar_ratio.is_some()),
            (Kind::ConeBarycenter, raw.cone_barycenter.is_some()),
            (Kind::RadicalCheck, raw.radical_check.is_some()),
        ];
        for (k, present) in sections {
            if present && k != kind {
                return Err(CliError::ConfigInvalid {
                    line: locate(text, k.name(), ""),
                    field: k.name().into(),
                    message: format!("section does not match kind `{kind}`"),
                });
            }
        }
        let missing = || CliError::ConfigInvalid {
            line: locate(text, "", "kind"),
            field: kind.name().into(),
            message: "missing parameter section for this kind".into(),
        };
        let params = match kind {
            Kind::SchreierSpectra => Params::SchreierSpectra(raw.schreier_spectra.ok_or_else(missing)?),
            Kind::BsConvergence => Params::BsConvergence(raw.bs_convergence.ok_or_else(missing)?),
            Kind::IrsCheck => Params::IrsCheck(raw.irs_check.ok_or_else(missing)?),
            Kind::FolnerSearch => Params::FolnerSearch(raw.folner_search.ok_or_else(missing)?),
            Kind::HaarRatio => Params::HaarRatio(raw.haar_ratio.ok_or_else(missing)?),
            Kind::ConeBarycenter => Params::ConeBarycenter(raw.cone_barycenter.ok_or_else(missing)?),
            Kind::RadicalCheck => Params::RadicalCheck(raw.radical_check.unwrap_or(RadicalParams {
                irs_file: None,
                fixture: None,
            })),
        };
        let config = ExperimentConfig {
            kind,
            seed: raw.seed,
            output_dir: PathBuf::from(raw.output_dir.unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into())),
            group: raw.group,
            params,
            base_dir: base_dir.to_path_buf(),
        };
        config.validate().map_err(|e| match e {
            CliError::ConfigInvalid { line: None, field, message } => {
                let (section, key) = field.rsplit_once('.').unwrap_or(("", field.as_str()));
                let section = if section.is_empty() && field != "group" { kind.name() } else { section };
                CliError::ConfigInvalid {
                    line: locate(text, section, key).or_else(|| locate(text, &field, "")),
                    field,
                    message,
                }
            }
            other => other,
        })?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    /// The output directory after applying [`OUTPUT_DIR_ENV`].
    pub fn effective_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }

    pub fn resolve(&self, path: &str) -> PathBuf {
        self.base_dir.join(path)
    }

    /// Reads an input file named by `field`; failures are config errors on that field.
    pub fn read_input(&self, field: &str, path: &str) -> Result<String> {
        std::fs::read_to_string(self.resolve(path))
            .map_err(|e| CliError::config(field, format!("cannot read `{path}`: {e}")))
    }

    fn validate(&self) -> Result<()> {
        // group block first, so that family errors name the group
        let built = self.group.build()?;
        let need_free2 = |field: &str| -> Result<()> {
            match self.group {
                GroupSpec::Free { rank: 2 } => Ok(()),
                _ => Err(CliError::config(field, "this family lives in the free group of rank 2")),
            }
        };
        match &self.params {
            Params::SchreierSpectra(SpectraParams { family, indices, tolerance, .. })
            | Params::BsConvergence(ConvergenceParams { family, indices, tolerance, .. }) => {
                if !matches!(self.group, GroupSpec::Free { .. }) {
                    return Err(CliError::config("group.family", "Schreier families need a free group"));
                }
                if *family == SubgroupFamily::Cycle {
                    need_free2("family")?;
                }
                if indices.is_empty() || indices.contains(&0) {
                    return Err(CliError::config("indices", "indices must be a nonempty list of positive integers"));
                }
                if indices.windows(2).any(|w| w[1] < w[0]) {
                    return Err(CliError::config("indices", "indices must be nondecreasing"));
                }
                if !(*tolerance > 0.0 && tolerance.is_finite()) {
                    return Err(CliError::config("tolerance", "tolerance must be positive"));
                }
                if let Params::BsConvergence(p) = &self.params {
                    if p.radii.is_empty() {
                        return Err(CliError::config("radii", "at least one radius is required"));
                    }
                }
            }
            Params::IrsCheck(_) => {
                if matches!(built, BuiltGroup::Tree(_)) {
                    return Err(CliError::config("group.family", "irs-check needs a free or finite group"));
                }
            }
            Params::HaarRatio(_) | Params::FolnerSearch(_) => {
                if !matches!(built, BuiltGroup::Tree(_)) {
                    return Err(CliError::config("group.family", "this kind needs a tree group"));
                }
                if let Params::FolnerSearch(p) = &self.params {
                    if p.n == 0 {
                        return Err(CliError::config("n", "n must be positive"));
                    }
                    if p.q.is_empty() {
                        return Err(CliError::config("q", "the test set needs at least one representative"));
                    }
                }
            }
            Params::ConeBarycenter(p) => {
                if !matches!(built, BuiltGroup::Orthogonal(_)) {
                    return Err(CliError::config("group.family", "cone-barycenter needs an orthogonal action"));
                }
                if p.irs.is_empty() == p.measure.is_none() {
                    return Err(CliError::config("irs", "give exactly one of `irs` and `measure`"));
                }
                if let Some(c) = p.covering {
                    if !(c > 0.0 && c < 1.0) {
                        return Err(CliError::config("covering", "covering radius must lie in (0, 1)"));
                    }
                }
            }
            Params::RadicalCheck(p) => {
                if matches!(built, BuiltGroup::Tree(_)) {
                    return Err(CliError::config("group.family", "radical-check needs a free or finite group"));
                }
                if p.irs_file.is_some() == p.fixture.is_some() {
                    return Err(CliError::config("fixture", "give exactly one of `irs_file` and `fixture`"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPECTRA: &str = r#"
kind = "schreier-spectra"
seed = 5

[group]
family = "free"
rank = 2

[schreier-spectra]
family = "cycle"
indices = [4, 8]
"#;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(text, Path::new("."))
    }

    #[test]
    fn defaults_are_filled_in() {
        let c = parse(SPECTRA).unwrap();
        assert_eq!(c.seed, 5);
        assert_eq!(c.output_dir, PathBuf::from(DEFAULT_OUTPUT_DIR));
        match c.params {
            Params::SchreierSpectra(p) => {
                assert_eq!(p.radius, 2);
                assert_eq!(p.tolerance, 1e-10);
            }
            _ => panic!("wrong params"),
        }
        let no_seed = SPECTRA.replace("seed = 5\n", "");
        assert_eq!(parse(&no_seed).unwrap().seed, 0);
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let text = SPECTRA.replace("indices = [4, 8]", "indices = [4, 8]\nradious = 3");
        match parse(&text) {
            Err(CliError::ConfigInvalid { line, message, .. }) => {
                assert_eq!(line, Some(12));
                assert!(message.contains("radious"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let text = SPECTRA.replace("rank = 2", "rank = 2\norder = 4");
        assert!(matches!(parse(&text), Err(CliError::ConfigInvalid { .. })));
        let text = format!("colour = \"red\"\n{SPECTRA}");
        assert!(matches!(parse(&text), Err(CliError::ConfigInvalid { line: Some(1), .. })));
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let text = SPECTRA.replace("[4, 8]", "[8, 4]");
        match parse(&text) {
            Err(CliError::ConfigInvalid { line, field, .. }) => {
                assert_eq!(field, "indices");
                assert_eq!(line, Some(11));
            }
            other => panic!("{other:?}"),
        }
        let text = SPECTRA.replace("rank = 2", "rank = 3");
        assert!(matches!(parse(&text), Err(CliError::ConfigInvalid { field, .. }) if field == "family"));
    }

    #[test]
    fn sections_must_match_the_kind() {
        let text = format!("{SPECTRA}\n[haar-ratio]\no = {{ level = 0, reps = [] }}\nl = {{ level = 0, reps = [] }}\n");
        assert!(matches!(parse(&text), Err(CliError::ConfigInvalid { field, .. }) if field == "haar-ratio"));
        let text = SPECTRA.replace("[schreier-spectra]\nfamily = \"cycle\"\nindices = [4, 8]\n", "");
        assert!(matches!(parse(&text), Err(CliError::ConfigInvalid { .. })));
    }

    #[test]
    fn group_specs_parse_from_strings() {
        assert_eq!("free:2".parse::<GroupSpec>().unwrap(), GroupSpec::Free { rank: 2 });
        assert_eq!(
            "tree:2:3".parse::<GroupSpec>().unwrap(),
            GroupSpec::Tree { arity: 2, depth: 3 }
        );
        assert!("tree:2".parse::<GroupSpec>().is_err());
        for name in ["S3", "S4", "D4", "Z4", "A4", "V4", "Z2^3", "L3", "trivial"] {
            let g = GroupSpec::Finite { name: name.into() }.marked().unwrap();
            assert!(g.order().is_some(), "{name}");
        }
        assert!(GroupSpec::Finite { name: "S9".into() }.build().is_err());
    }
}

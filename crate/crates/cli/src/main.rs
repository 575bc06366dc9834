use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use irslab::config::GroupSpec;
use irslab::error::{CliError, Context, Result};
use irslab::selftest::{self, Fixtures};
use irslab::ExperimentConfig;
use irslab_core::spectral::{cycle_kernel, SchreierGraph};
use irslab_core::subgroup::Subgroup;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "irslab", about = "Run invariant random subgroup experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Run the built-in acceptance checks.
    Selftest {
        /// A criterion number or a module name (spectral, tdlc, irs, convex-cone, subgroup-space, cli).
        #[arg(long)]
        filter: Option<String>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the Schreier graph of a subgroup in Graphviz format.
    ExportDot {
        /// `cycle:N`, `random:N[:SEED]`, or a subgroup file.
        graph: String,
        /// Group spec for subgroup files, e.g. `free:2` or `finite:S4`.
        #[arg(long, default_value = "free:2")]
        group: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn graph_subgroup(spec: &str, group: &str) -> Result<Subgroup> {
    let parse_num = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| CliError::Usage(format!("bad number `{s}` in graph `{spec}`")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[..] {
        ["cycle", n] => cycle_kernel(parse_num(n)? as usize).context(|| format!("graph `{spec}`")),
        ["random", n] | ["random", n, _] => {
            let seed = parts.get(2).map_or(Ok(0), |s| parse_num(s))?;
            let g = irslab_core::group::MarkedGroup::free(2).context(|| "free group".into())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Subgroup::random_finite_index(&g, parse_num(n)? as usize, &mut rng).context(|| format!("graph `{spec}`"))
        }
        _ => {
            let g: GroupSpec = group.parse()?;
            let parent = g.marked()?;
            let text = std::fs::read_to_string(spec).map_err(|e| CliError::io(spec, e))?;
            Subgroup::from_text(&parent, &text).context(|| format!("subgroup file {spec}"))
        }
    }
}

fn export_dot(graph: &str, group: &str, output: Option<&Path>) -> Result<()> {
    let h = graph_subgroup(graph, group)?;
    let labels = h.parent().labels().to_vec();
    let dot = SchreierGraph::from_subgroup(&h)
        .context(|| format!("Schreier graph of `{graph}`"))?
        .to_dot(&labels);
    match output {
        Some(path) => write_file(path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn run_selftest(filter: Option<&str>, report: Option<&Path>) -> Result<bool> {
    let (rep, results) = selftest::selftest(filter, &Fixtures::bundled())?;
    for r in &results {
        println!("{}", selftest::format_result(r));
    }
    let passed = results.iter().all(|r| r.passed);
    println!(
        "{} of {} criteria passed in {:.1} s",
        results.iter().filter(|r| r.passed).count(),
        results.len(),
        rep.wall_clock_seconds
    );
    if let Some(path) = report {
        write_file(path, &rep.to_json())?;
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => ExperimentConfig::load(&config).and_then(|c| {
            let rep = irslab::run::run(&c)?;
            let dir = c.effective_output_dir();
            for name in rep.artifacts.iter().map(String::as_str).chain(["report.json"]) {
                println!("{}", dir.join(name).display());
            }
            Ok(true)
        }),
        Command::Selftest { filter, report } => run_selftest(filter.as_deref(), report.as_deref()),
        Command::ExportDot { graph, group, output } => export_dot(&graph, &group, output.as_deref()).map(|_| true),
        Command::Version => {
            println!("irslab {}", env!("CARGO_PKG_VERSION"));
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

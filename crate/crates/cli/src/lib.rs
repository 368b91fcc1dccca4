//! Command-line front end for the `antiflags` crate.
//!
//! [`run`] parses arguments and writes to the given streams, returning the
//! process exit code: 0 when everything agrees, 1 on a verification
//! mismatch or a refused recovery, 2 on usage errors.

pub mod export;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use antiflags::hyperbolic::{self, QPoint};
use antiflags::recovery::{self, PairLabeling, RecoveryError};
use antiflags::verify::{self, Check, Suite};
use antiflags::{AntiFlags, RelGraph, RelationKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "antiflags", version, about = "Anti-flags of PG(n-1, q): relations, recovery, and the q = 2 quadric")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Config {
    /// Vector space dimension (points of PG(n-1, q)).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Field order.
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List anti-flags in canonical order.
    Enumerate,
    /// Label every pair of distinct anti-flags.
    Classify,
    /// Recover all relations from one graph and compare with the geometry.
    Recover {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        from: u8,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// The hyperbolic quadric over GF(2).
    Hyperbolic {
        #[command(subcommand)]
        action: HyperbolicAction,
    },
    /// Write a relation graph in an exchange format.
    Export {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        graph: u8,
        #[arg(long, value_enum)]
        format: Format,
    },
    /// Run verification suites and print a pass/fail table.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Coclique pairs to sample where exhaustive checks are too slow.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Counts,
    Cocliques,
    Poset,
    Special,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum HyperbolicAction {
    /// Split the points of PG(2n-1, 2) into singular and non-singular.
    Partition,
    /// Check the correspondence between non-singular points and anti-flags.
    CheckF,
    /// Rebuild the polar space from Γ1 and compare with the quadric.
    Reconstruct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Graph6,
    Dimacs,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Counts,
    Recovery,
    Hyperbolic,
    Orbits,
    Involutions,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Counts => vec![Suite::Counts],
            SuiteArg::Recovery => vec![Suite::Recovery],
            SuiteArg::Hyperbolic => vec![Suite::Hyperbolic],
            SuiteArg::Orbits => vec![Suite::Orbits],
            SuiteArg::Involutions => vec![Suite::Involutions],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<antiflags::Error> for CliError {
    fn from(e: antiflags::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.config.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let mut buffer = Vec::new();
    let mut notes = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buffer, &mut notes));
    let _ = stderr.write_all(&notes);
    let written = match &cli.config.out {
        Some(path) => fs::write(path, &buffer),
        None => stdout.write_all(&buffer),
    };
    match (result, written) {
        (Ok(()), Ok(())) => 0,
        (Err(CliError::Usage(m)), _) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        (Err(e), _) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
        (Ok(()), Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn require_nq(config: &Config) -> Result<(usize, u32), CliError> {
    match (config.n, config.q) {
        (Some(n), Some(q)) => Ok((n, q)),
        _ => Err(CliError::Usage("--n and --q are required".into())),
    }
}

fn load(config: &Config) -> Result<AntiFlags, CliError> {
    let (n, q) = require_nq(config)?;
    let flags = AntiFlags::enumerate(n, q)?;
    if flags.len() > 5000 {
        return Err(CliError::Usage(format!("{} anti-flags exceeds the supported 5000", flags.len())));
    }
    Ok(flags)
}

fn relation(i: u8) -> RelationKind {
    RelationKind::from_index(i).expect("clap restricts the range")
}

fn fmt_vec(v: &[antiflags::Elem]) -> String {
    v.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(",")
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<(), CliError> {
    let config = &cli.config;
    match &cli.command {
        Command::Enumerate => {
            let flags = load(config)?;
            let space = flags.space();
            writeln!(out, "id\tpoint_id\thyperplane_id\tpoint\thyperplane")?;
            for (id, a) in flags.flags().iter().enumerate() {
                writeln!(
                    out,
                    "{id}\t{}\t{}\t({})\t[{}]",
                    a.point,
                    a.hyperplane,
                    fmt_vec(space.point(a.point).coords()),
                    fmt_vec(space.hyperplane(a.hyperplane).coeffs())
                )?;
            }
            writeln!(err, "{} anti-flags", flags.len())?;
            Ok(())
        }
        Command::Classify => {
            let flags = load(config)?;
            let labels = PairLabeling::ground_truth(&flags);
            for (a, b, k) in labels.pairs() {
                writeln!(out, "{a}\t{b}\t{k}")?;
            }
            let counts: Vec<String> =
                RelationKind::RELATIONS.iter().map(|&k| format!("{k}={}", labels.count(k))).collect();
            writeln!(err, "{} pairs: {}", labels.pairs().count(), counts.join(" "))?;
            Ok(())
        }
        Command::Recover { from, method } => recover(config, *from, *method, out),
        Command::Hyperbolic { action } => hyperbolic_cmd(config, *action, out),
        Command::Export { graph, format } => {
            let flags = load(config)?;
            let g = RelGraph::build(relation(*graph), &flags)?;
            let text = match format {
                Format::Graph6 => export::graph6(&g),
                Format::Dimacs => export::dimacs(&g),
                Format::Jsonl => export::jsonl(&g, &flags),
            };
            out.extend_from_slice(text.as_bytes());
            Ok(())
        }
        Command::Verify { suite, samples } => verify_cmd(config, *suite, *samples, out),
    }
}

fn recover(config: &Config, from: u8, method: Option<Method>, out: &mut Vec<u8>) -> Result<(), CliError> {
    let flags = load(config)?;
    let (n, q) = (flags.space().dim(), flags.space().q());
    let method = match (from, method) {
        (1, None) => Method::Counts,
        (1, Some(m @ (Method::Counts | Method::Cocliques))) => m,
        (_, None) if from != 4 => Method::Counts,
        (_, None) if n == 3 && q == 2 => Method::Special,
        (_, None) => Method::Poset,
        (4, Some(m @ (Method::Poset | Method::Special))) => m,
        (_, Some(m)) => {
            return Err(CliError::Usage(format!("--method {m:?} does not apply to --from {from}").to_lowercase()))
        }
    };
    let graph = RelGraph::build(relation(from), &flags)?;
    let result = match (from, method) {
        (1, Method::Counts) => recovery::recover_from_1_counts(&graph),
        (1, _) => recovery::recover_from_1_cocliques(&graph),
        (2, _) => recovery::recover_from_2(&graph),
        (3, _) => recovery::recover_from_3(&graph),
        (_, Method::Special) => recovery::recover_from_4_special(&graph),
        _ => recovery::recover_from_4(&graph),
    };
    let labels = result.map_err(|e: RecoveryError| CliError::Failed(e.to_string()))?;
    let truth = PairLabeling::ground_truth(&flags);
    let bad = labels.mismatches(&truth);
    let counts: Vec<String> = RelationKind::RELATIONS.iter().map(|&k| format!("{k}={}", labels.count(k))).collect();
    writeln!(out, "recovered {} pairs from Γ{from} at n={n}, q={q}: {}", labels.pairs().count(), counts.join(" "))?;
    writeln!(out, "mismatches against the geometry: {}", bad.len())?;
    for m in bad.iter().take(20) {
        writeln!(out, "  {m}")?;
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} pairs disagree with the geometry", bad.len())))
    }
}

fn binary_n(config: &Config) -> Result<usize, CliError> {
    if let Some(q) = config.q.filter(|&q| q != 2) {
        return Err(CliError::Usage(format!("the quadric commands need q = 2, got {q}")));
    }
    config.n.ok_or_else(|| CliError::Usage("--n is required".into()))
}

fn hyperbolic_cmd(config: &Config, action: HyperbolicAction, out: &mut Vec<u8>) -> Result<(), CliError> {
    let n = binary_n(config)?;
    let bits = |v: u32| -> String {
        let half = |shift: usize| (0..n).map(|i| if v >> (shift + i) & 1 == 1 { '1' } else { '0' }).collect::<String>();
        format!("{}|{}", half(0), half(n))
    };
    match action {
        HyperbolicAction::Partition => {
            let (singular, nonsingular) = hyperbolic::partition_points(n)?;
            writeln!(out, "singular {}\nnon-singular {}", singular.len(), nonsingular.len())?;
            for v in &singular {
                writeln!(out, "S {}", bits(*v))?;
            }
            for v in &nonsingular {
                writeln!(out, "N {}", bits(*v))?;
            }
            Ok(())
        }
        HyperbolicAction::CheckF => {
            let flags = AntiFlags::enumerate(n, 2)?;
            let (_, nonsingular) = hyperbolic::partition_points(n)?;
            let vecs = hyperbolic::vertex_vectors(&flags)?;
            let mut sorted = vecs.clone();
            sorted.sort_unstable();
            let bijective = sorted == nonsingular
                && nonsingular.iter().all(|&v| {
                    hyperbolic::f_map(&flags, QPoint::new(v, n)).map(|id| vecs[id] == v).unwrap_or(false)
                });
            let mut disagreements = Vec::new();
            for (i, &u) in nonsingular.iter().enumerate() {
                for &v in &nonsingular[i + 1..] {
                    if !hyperbolic::correspondence_check(&flags, QPoint::new(u, n), QPoint::new(v, n))? {
                        disagreements.push((u, v));
                    }
                }
            }
            let pairs = nonsingular.len() * (nonsingular.len() - 1) / 2;
            writeln!(out, "f bijective onto {} anti-flags: {bijective}", flags.len())?;
            writeln!(out, "third point vs 1-adjacency: {} of {pairs} pairs disagree", disagreements.len())?;
            for (u, v) in disagreements.iter().take(20) {
                writeln!(out, "  {} {}", bits(*u), bits(*v))?;
            }
            if bijective && disagreements.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed("the correspondence check failed".into()))
            }
        }
        HyperbolicAction::Reconstruct => {
            let flags = AntiFlags::enumerate(n, 2)?;
            let g1 = RelGraph::build(RelationKind::R1, &flags)?;
            let geom = hyperbolic::reconstruct_polar_space(&g1)?;
            let cmp = hyperbolic::compare_with_quadric(&geom, &flags).map_err(|e| CliError::Failed(e.to_string()))?;
            writeln!(out, "parallel classes {} (singular points {})", geom.classes.len(), cmp.singular_points)?;
            writeln!(out, "class to third point is a bijection: {}", cmp.bijective)?;
            writeln!(out, "lines {} (singular lines {}), match: {}", geom.lines.len(), cmp.singular_lines, cmp.lines_match)?;
            for (id, (class, p)) in geom.classes.iter().zip(&cmp.class_points).enumerate() {
                writeln!(out, "class {id}: {} cocliques, point {}", class.members.len(), bits(*p))?;
            }
            if cmp.bijective && cmp.lines_match {
                Ok(())
            } else {
                Err(CliError::Failed("the reconstruction does not match the quadric".into()))
            }
        }
    }
}

fn verify_cmd(config: &Config, suite: SuiteArg, samples: usize, out: &mut Vec<u8>) -> Result<(), CliError> {
    let opts = verify::Options { seed: config.seed, samples };
    let explicit = match (config.n, config.q) {
        (Some(n), Some(q)) => Some((n, q)),
        (None, None) => None,
        _ => return Err(CliError::Usage("give both --n and --q, or neither".into())),
    };
    let mut checks: Vec<Check> = Vec::new();
    let mut ran = 0;
    for s in suite.suites() {
        let configs: Vec<(usize, u32)> = match explicit {
            Some(c) => vec![c],
            None => s.default_configs().to_vec(),
        };
        for (n, q) in configs {
            if !s.applies(n, q) {
                if suite != SuiteArg::All {
                    return Err(CliError::Usage(format!("suite {s} does not apply at n = {n}, q = {q}")));
                }
                continue;
            }
            ran += 1;
            checks.extend(verify::run(s, n, q, &opts).map_err(|e| CliError::Usage(e.to_string()))?);
        }
    }
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks in {ran} suite runs, {failed} failed", checks.len())?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} checks failed")))
    }
}

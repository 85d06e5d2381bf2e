//! Command-line front end.
//!
//! Vertex indices on the command line and in instance files are 0-based
//! elements of `Z_n`; positions in orientation strings and selection
//! functions are 1-based.

mod instance;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::bench;
use crate::engine::{desk_instances, verify_all, ClassMode, CountMatch, Reconfigurer};
use crate::hom::{hom_to_selection, CycleHom, Monotonicity};
use crate::oracle::{enumerate_homs, export_dot, hom_graph, summarize, DotOptions, DEFAULT_CAP};
use crate::orientation::OrientationString;
use crate::star::{greedy_stream_count, leftmost_embedding, SelectionFunction};

pub use instance::{InstanceError, InstanceFile, Position};

/// Exit status for a connected pair and for successful commands.
pub const EXIT_OK: i32 = 0;
/// Exit status for a disconnected pair, or a sweep with mismatches.
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cycle-recon", version, about = "Reconfiguration of homomorphisms between reflexive oriented cycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether phi and psi of an instance file lie in one component (exit 0 yes, 1 no).
    Decide {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        class_mode: ClassMode,
    },
    /// Describe the components of Hom(C, D) wind by wind.
    Characterize {
        #[arg(short = 'D', allow_hyphen_values = true)]
        target: OrientationString,
        #[arg(short = 'C', allow_hyphen_values = true)]
        source: OrientationString,
    },
    /// Print the primitive root of a string and its multiplicity.
    Root {
        #[arg(allow_hyphen_values = true)]
        string: OrientationString,
    },
    /// Leftmost selection function embedding P into C, or "none".
    Match {
        #[arg(short = 'P', allow_hyphen_values = true)]
        pattern: OrientationString,
        #[arg(short = 'C', allow_hyphen_values = true)]
        text: OrientationString,
        /// Also print the greedy count of P repeated over C.
        #[arg(long)]
        count: bool,
    },
    /// List homomorphisms C -> D as JSON.
    Enumerate {
        #[arg(short = 'D', allow_hyphen_values = true)]
        target: OrientationString,
        #[arg(short = 'C', allow_hyphen_values = true)]
        source: OrientationString,
        /// Only increasing and decreasing maps.
        #[arg(long)]
        monotone: bool,
        #[arg(long, allow_hyphen_values = true)]
        wind: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Build the Hom-graph exhaustively and summarize its components.
    Oracle {
        #[arg(short = 'D', allow_hyphen_values = true)]
        target: OrientationString,
        #[arg(short = 'C', allow_hyphen_values = true)]
        source: OrientationString,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Compare the decision procedure with the exhaustive Hom-graph on all small instances.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        #[arg(long, default_value_t = 3)]
        min_n: usize,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        class_mode: ClassMode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Time the streaming counter on random texts of doubling length.
    Bench {
        #[arg(short = 'D', allow_hyphen_values = true)]
        target: OrientationString,
        /// Largest text length.
        #[arg(long)]
        length: usize,
        /// Smallest text length.
        #[arg(long, default_value_t = 100_000)]
        min_length: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct MapJson {
    images: Vec<usize>,
    wind: i64,
    monotonicity: Monotonicity,
    base: usize,
    selection: Option<SelectionFunction>,
}

#[derive(Serialize)]
struct EnumerationJson {
    target: OrientationString,
    source: OrientationString,
    count: usize,
    maps: Vec<MapJson>,
}

#[derive(Serialize)]
struct VerifySummary {
    instances: usize,
    clean: usize,
    pairs_checked: usize,
    decide_mismatches: usize,
    other_mismatches: usize,
    errors: usize,
    count_audits: usize,
    audit_literal: usize,
    audit_block: usize,
    audit_neither: usize,
}

fn map_json(h: &CycleHom) -> MapJson {
    let selection = hom_to_selection(h).ok().map(|(_, _, selection)| selection);
    MapJson {
        images: h.images().to_vec(),
        wind: h.wind(),
        monotonicity: h.monotonicity(),
        base: h.images()[0],
        selection,
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_OK
            } else {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

type CommandResult = Result<i32, Box<dyn std::error::Error>>;

fn execute(command: Command, out: &mut dyn Write) -> CommandResult {
    match command {
        Command::Decide { file, class_mode } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let inst = InstanceFile::parse(&text)?;
            let (phi, psi) = inst.homs()?;
            let decision = Reconfigurer::new(&inst.source, &inst.target)?
                .with_class_mode(class_mode)
                .decide(&phi, &psi)?;
            writeln!(out, "{}", json(&decision))?;
            Ok(if decision.connected { EXIT_OK } else { EXIT_NO })
        }
        Command::Characterize { target, source } => {
            let report = Reconfigurer::new(&source, &target)?.characterize();
            writeln!(out, "{}", json(&report))?;
            Ok(EXIT_OK)
        }
        Command::Root { string } => {
            let root = string.primitive_root();
            writeln!(out, "{} {}", root.root, root.multiplicity)?;
            Ok(EXIT_OK)
        }
        Command::Match { pattern, text, count } => {
            match leftmost_embedding(&pattern, &text) {
                Some(selection) => writeln!(out, "{selection}")?,
                None => writeln!(out, "none")?,
            }
            if count {
                let c = greedy_stream_count(&pattern, text.iter());
                writeln!(out, "matched {} floor {} ceil {}", c.matched, c.power(), c.ceiling_power())?;
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            target,
            source,
            monotone,
            wind,
            cap,
        } => {
            let maps: Vec<MapJson> = enumerate_homs(&source, &target, cap)?
                .iter()
                .filter(|h| !monotone || h.monotonicity().is_monotone())
                .filter(|h| wind.is_none_or(|w| h.wind() == w))
                .map(map_json)
                .collect();
            let listing = EnumerationJson {
                target,
                source,
                count: maps.len(),
                maps,
            };
            writeln!(out, "{}", json(&listing))?;
            Ok(EXIT_OK)
        }
        Command::Oracle {
            target,
            source,
            dot,
            cap,
        } => {
            let g = hom_graph(&source, &target, cap)?;
            if let Some(path) = dot {
                let options = DotOptions {
                    cluster_components: true,
                    include_loops: false,
                };
                std::fs::write(&path, export_dot(&g, &options)).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            writeln!(out, "{}", json(&summarize(&source, &target, &g)))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            max_m,
            min_n,
            max_n,
            jobs,
            class_mode,
            cap,
        } => {
            let instances = desk_instances(max_m, min_n, max_n);
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(jobs) = jobs {
                builder = builder.num_threads(jobs);
            }
            let pool = builder.build()?;
            let results = pool.install(|| verify_all(&instances, class_mode, cap));

            let mut summary = VerifySummary {
                instances: instances.len(),
                clean: 0,
                pairs_checked: 0,
                decide_mismatches: 0,
                other_mismatches: 0,
                errors: 0,
                count_audits: 0,
                audit_literal: 0,
                audit_block: 0,
                audit_neither: 0,
            };
            for ((source, target), result) in instances.iter().zip(results) {
                let report = match result {
                    Ok(report) => report,
                    Err(e) => {
                        summary.errors += 1;
                        writeln!(out, "error C={source} D={target}: {e}")?;
                        continue;
                    }
                };
                summary.pairs_checked += report.pairs_checked;
                summary.decide_mismatches += report.decide_mismatches;
                summary.other_mismatches += report
                    .mismatches
                    .iter()
                    .filter(|m| !matches!(m, crate::engine::Mismatch::Decide { .. }))
                    .count();
                for audit in &report.audits {
                    summary.count_audits += 1;
                    match audit.matches {
                        CountMatch::Literal => summary.audit_literal += 1,
                        CountMatch::Block => summary.audit_block += 1,
                        CountMatch::Both => {}
                        CountMatch::Neither => summary.audit_neither += 1,
                    }
                }
                if report.is_clean() {
                    summary.clean += 1;
                } else {
                    writeln!(out, "{}", serde_json::to_string(&report)?)?;
                }
            }
            writeln!(out, "{}", json(&summary))?;
            let failed = summary.errors > 0 || summary.clean < summary.instances;
            Ok(if failed { EXIT_NO } else { EXIT_OK })
        }
        Command::Bench {
            target,
            length,
            min_length,
            trials,
            seed,
        } => {
            let root = target.primitive_root().root;
            let lengths = bench::doubling_lengths(min_length.min(length), length);
            let rows = bench::run(&root, &lengths, trials, seed);
            writeln!(out, "root {root} trials {trials} seed {seed}")?;
            write!(out, "{}", bench::format_table(&rows))?;
            Ok(EXIT_OK)
        }
    }
}

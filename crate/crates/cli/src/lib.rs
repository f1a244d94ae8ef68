//! Command-line driver for `skyshift-core`.
//!
//! [`run`] takes the full argument vector and returns the exit code and both
//! output streams, so the binary and the tests share one code path. Verdicts
//! of `swe` and `wilf` are printed, never encoded in the exit code. Usage
//! errors exit with 2 and a one-line diagnostic.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use skyshift_core::clusters::{build_automaton, m_level_dp, m_level_enum, BRUTE_FORCE_MAX_CAP};
use skyshift_core::equivalence::MAX_SEQUENCE_N;
use skyshift_core::{
    brute_force_a, class_count_sequence, embeddings, enumerate_shifts, eta, find_swe_not_shift,
    minimal_cluster, parse_word, partition, render, series_a, series_c, series_m, shift_class,
    strong_wilf_by_levels, strong_wilf_equivalent, Relation, RenderFormat, TriPoly, Universe, Word,
};

/// Largest accepted `--y-cap`.
pub const MAX_Y_CAP: u32 = 256;
/// Largest sum for `classes --sum` and `search --sum`.
pub const MAX_SUM: u32 = 16;
/// Sums above this need `--extended`.
pub const DEFAULT_MAX_SUM: u32 = 14;
/// Permutation lengths above this need `--extended`.
pub const DEFAULT_MAX_PERMUTATIONS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    M,
    C,
    A,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelMethod {
    Dp,
    Enum,
}

fn word_arg(s: &str) -> Result<Word, String> {
    parse_word(s).map_err(|e| e.to_string())
}

fn relation_arg(s: &str) -> Result<Relation, String> {
    s.parse().map_err(|e: skyshift_core::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "skyshift",
    version,
    about = "Exact enumeration for the generalized factor order"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Truncation degree in y (the sum); defaults to twice the pattern sum.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=MAX_Y_CAP as i64))]
    pub y_cap: Option<u32>,
    /// Highest number of marks kept in cluster series.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=MAX_Y_CAP as i64))]
    pub z_cap: Option<u32>,
    /// Allow the long runs (n = 7, sums above 14).
    #[arg(long, global = true)]
    pub extended: bool,
    /// Print words as digit strings when every letter is at most 9.
    #[arg(long, global = true)]
    pub compact: bool,
    /// Worker threads for partitioning; defaults to available parallelism.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub jobs: Option<u32>,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of embeddings of U in W.
    Eta {
        #[arg(value_parser = word_arg)]
        u: Word,
        #[arg(value_parser = word_arg)]
        w: Word,
    },
    /// Start positions of the embeddings of U in W.
    Embeddings {
        #[arg(value_parser = word_arg)]
        u: Word,
        #[arg(value_parser = word_arg)]
        w: Word,
    },
    /// Skyline diagram of U (text or svg).
    Render {
        #[arg(value_parser = word_arg)]
        u: Word,
    },
    /// Every valid rigid shift of U.
    Shifts {
        #[arg(value_parser = word_arg)]
        u: Word,
    },
    /// Shift-equivalence class of U.
    ShiftClass {
        #[arg(value_parser = word_arg)]
        u: Word,
    },
    /// Minimal cluster of U with marks at the given offsets.
    Cluster {
        #[arg(value_parser = word_arg)]
        u: Word,
        /// Offsets, comma- or space-separated, starting at 1.
        #[arg(required = true, num_args = 1..)]
        offsets: Vec<String>,
    },
    /// Coefficient of z^M in the minimal-cluster series of U.
    Mlevel {
        #[arg(value_parser = word_arg)]
        u: Word,
        #[arg(value_parser = clap::value_parser!(u32).range(1..=64))]
        m: u32,
        #[arg(long, value_enum, default_value_t = LevelMethod::Dp)]
        method: LevelMethod,
        /// Dump the overlap automaton instead.
        #[arg(long)]
        automaton: bool,
    },
    /// Truncated series M, C or A of U.
    Series {
        #[arg(value_parser = word_arg)]
        u: Word,
        #[arg(long, value_enum, default_value_t = SeriesKind::A)]
        kind: SeriesKind,
        /// Compute A by enumerating words instead.
        #[arg(long)]
        brute_force: bool,
    },
    /// Decide strong Wilf equivalence of U and V.
    Swe {
        #[arg(value_parser = word_arg)]
        u: Word,
        #[arg(value_parser = word_arg)]
        v: Word,
        /// Compare cluster levels only, without shortcuts.
        #[arg(long)]
        by_levels: bool,
    },
    /// Compare the avoider series of U and V up to the y cap.
    Wilf {
        #[arg(value_parser = word_arg)]
        u: Word,
        #[arg(value_parser = word_arg)]
        v: Word,
    },
    /// Partition a word family, or print a class-count sequence.
    Classes {
        #[arg(long, conflicts_with_all = ["sum", "sequence"])]
        permutations: Option<usize>,
        #[arg(long, conflicts_with = "sequence")]
        sum: Option<u32>,
        /// Class counts of S_1 .. S_N as one comma-separated line.
        #[arg(long)]
        sequence: Option<usize>,
        #[arg(long, value_parser = relation_arg, default_value = "shift")]
        relation: Relation,
    },
    /// Strongly Wilf equivalent words that are not shift equivalent.
    Search {
        #[arg(long, conflicts_with = "sum")]
        permutations: Option<usize>,
        #[arg(long)]
        sum: Option<u32>,
    },
}

/// Exit code, stdout and stderr of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<skyshift_core::Error> for Failure {
    fn from(e: skyshift_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunResult {
                    code: 2,
                    stdout: String::new(),
                    stderr: first_line(&text),
                }
            } else {
                RunResult {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs as usize);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| execute(&cli)),
        Err(e) => Err(Failure::Io(format!("cannot start worker pool: {e}"))),
    };
    let result = result.and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .map(|_| String::new())
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => Ok(text),
    });
    match result {
        Ok(stdout) => RunResult {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => RunResult {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", first_line(&msg).trim_end()),
        },
        Err(Failure::Io(msg)) => RunResult {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn first_line(s: &str) -> String {
    format!("{}\n", s.lines().next().unwrap_or("").trim_end())
}

fn allow(cli: &Cli, command: &str, formats: &[Output]) -> Result<(), Failure> {
    if cli.output == Output::Text || formats.contains(&cli.output) {
        Ok(())
    } else {
        usage(format!(
            "{command} does not support --output {}",
            cli.output
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
        ))
    }
}

fn json_out(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn pattern(u: &Word) -> Result<(), Failure> {
    if u.is_empty() {
        return usage("pattern must be nonempty");
    }
    Ok(())
}

fn default_cap(cli: &Cli, u: &Word) -> Result<u32, Failure> {
    let cap = cli.y_cap.map(u64::from).unwrap_or(2 * u.weight());
    if cap > u64::from(MAX_Y_CAP) {
        return usage(format!(
            "y cap {cap} exceeds {MAX_Y_CAP}; pass a smaller --y-cap"
        ));
    }
    Ok(cap as u32)
}

/// Enough marks for every cluster of sum at most `cap`: an m-cluster has sum
/// at least `||u|| + m - 1`.
fn default_z_cap(cli: &Cli, u: &Word, cap: u32) -> usize {
    cli.z_cap
        .map(|z| z as usize)
        .unwrap_or_else(|| (u64::from(cap) + 1).saturating_sub(u.weight()).max(1) as usize)
}

fn execute(cli: &Cli) -> Outcome {
    let c = cli.compact;
    match &cli.command {
        Command::Eta { u, w } => {
            allow(cli, "eta", &[Output::Json])?;
            pattern(u)?;
            let n = eta(u, w);
            Ok(match cli.output {
                Output::Json => json_out(json!({"pattern": u, "host": w, "eta": n})),
                _ => format!("{n}\n"),
            })
        }
        Command::Embeddings { u, w } => {
            allow(cli, "embeddings", &[Output::Json])?;
            pattern(u)?;
            let e = embeddings(u, w);
            Ok(match cli.output {
                Output::Json => json_out(to_value(&e)),
                _ => {
                    let mut s = String::new();
                    for &i in &e.positions {
                        let occ = Word::new(w.letters()[i - 1..i - 1 + u.len()].to_vec())?;
                        let _ = writeln!(s, "{i} {}", occ.format(c));
                    }
                    let _ = writeln!(s, "embeddings: {}", e.positions.len());
                    s
                }
            })
        }
        Command::Render { u } => {
            allow(cli, "render", &[Output::Svg])?;
            pattern(u)?;
            Ok(match cli.output {
                Output::Svg => render(u, RenderFormat::Svg),
                _ => format!("{}\n", render(u, RenderFormat::Ascii)),
            })
        }
        Command::Shifts { u } => {
            allow(cli, "shifts", &[Output::Json])?;
            pattern(u)?;
            let shifts = enumerate_shifts(u);
            Ok(match cli.output {
                Output::Json => json_out(Value::Array(
                    shifts
                        .iter()
                        .map(|(s, v)| json!({"h": s.h, "k": s.k, "word": v}))
                        .collect(),
                )),
                _ => {
                    let mut s = String::new();
                    for (sh, v) in &shifts {
                        let _ = writeln!(s, "h={} k={} {}", sh.h, sh.k, v.format(c));
                    }
                    let _ = writeln!(s, "shifts: {}", shifts.len());
                    s
                }
            })
        }
        Command::ShiftClass { u } => {
            allow(cli, "shift-class", &[Output::Json])?;
            pattern(u)?;
            let class = shift_class(u);
            Ok(match cli.output {
                Output::Json => json_out(to_value(&class)),
                _ => {
                    let mut s = String::new();
                    for w in &class.members {
                        let _ = writeln!(s, "{}", w.format(c));
                    }
                    let _ = writeln!(s, "size: {}", class.len());
                    s
                }
            })
        }
        Command::Cluster { u, offsets } => {
            allow(cli, "cluster", &[Output::Json])?;
            let offsets = parse_offsets(offsets)?;
            let cl = minimal_cluster(u, &offsets)?;
            Ok(match cli.output {
                Output::Json => json_out(json!({
                    "pattern": u,
                    "offsets": cl.offsets,
                    "word": cl.word,
                    "length": cl.word.len(),
                    "sum": cl.word.weight(),
                })),
                _ => format!("{}\n", cl.word.format(c)),
            })
        }
        Command::Mlevel {
            u,
            m,
            method,
            automaton,
        } => {
            allow(cli, "mlevel", &[Output::Json])?;
            pattern(u)?;
            if *automaton {
                let a = build_automaton(u);
                return Ok(match cli.output {
                    Output::Json => json_out(a.to_json()),
                    _ => format!("states: {}\n", a.state_count()),
                });
            }
            let cap = default_cap(cli, u)?;
            let level = match method {
                LevelMethod::Dp => m_level_dp(&build_automaton(u), *m as usize, cap),
                LevelMethod::Enum => {
                    let count = (u.len() as f64 - 1.0).powi(*m as i32 - 1);
                    if count > 5.0e7 {
                        return usage(format!("enumeration of {count:.0} offset vectors is too large; use --method dp"));
                    }
                    m_level_enum(u, *m as usize, cap)
                }
            };
            Ok(poly_out(cli, &level))
        }
        Command::Series {
            u,
            kind,
            brute_force,
        } => {
            allow(cli, "series", &[Output::Json])?;
            pattern(u)?;
            let cap = default_cap(cli, u)?;
            let z = default_z_cap(cli, u, cap);
            let poly = match (kind, brute_force) {
                (SeriesKind::A, true) => {
                    if cap > BRUTE_FORCE_MAX_CAP {
                        return usage(format!(
                            "--brute-force needs --y-cap at most {BRUTE_FORCE_MAX_CAP}"
                        ));
                    }
                    brute_force_a(u, cap)?
                }
                (_, true) => return usage("--brute-force only applies to --kind a"),
                (SeriesKind::M, false) => series_m(u, cap, z),
                (SeriesKind::C, false) => series_c(u, cap, z),
                (SeriesKind::A, false) => series_a(u, cap, z)?,
            };
            Ok(poly_out(cli, &poly))
        }
        Command::Swe { u, v, by_levels } => {
            allow(cli, "swe", &[Output::Json])?;
            pattern(u)?;
            pattern(v)?;
            let cert = if *by_levels {
                strong_wilf_by_levels(u, v)
            } else {
                strong_wilf_equivalent(u, v)
            };
            Ok(match cli.output {
                Output::Json => json_out(to_value(&cert)),
                _ => {
                    let mut s = String::new();
                    let verdict = if cert.equivalent {
                        "equivalent"
                    } else {
                        "not equivalent"
                    };
                    let _ = writeln!(s, "{verdict}");
                    let _ = writeln!(
                        s,
                        "method: {}",
                        to_value(&cert.method).as_str().unwrap_or("")
                    );
                    let _ = writeln!(s, "levels compared: {}", cert.levels_compared);
                    if let Some(w) = &cert.witness {
                        let [a, b, cz] = w.monomial;
                        let _ = writeln!(
                            s,
                            "witness: level {} x^{a}*y^{b}*z^{cz}: {} vs {}",
                            w.m, w.coef_u, w.coef_v
                        );
                    }
                    s
                }
            })
        }
        Command::Wilf { u, v } => {
            allow(cli, "wilf", &[Output::Json])?;
            pattern(u)?;
            pattern(v)?;
            let cap = default_cap(cli, u)?;
            let fu = series_a(u, cap, default_z_cap(cli, u, cap))?.at_z_zero();
            let fv = series_a(v, cap, default_z_cap(cli, v, cap))?.at_z_zero();
            let witness = (0..=cap)
                .flat_map(|b| (0..=b).map(move |a| (a, b)))
                .find(|&(a, b)| fu.coeff(a, b, 0) != fv.coeff(a, b, 0))
                .map(|(a, b)| (a, b, fu.coeff(a, b, 0), fv.coeff(a, b, 0)));
            Ok(match cli.output {
                Output::Json => json_out(json!({
                    "equal_through_sum": cap,
                    "equal": witness.is_none(),
                    "witness": witness.as_ref().map(|(a, b, cu, cv)| json!({
                        "monomial": [a, b],
                        "coef_u": cu.to_string(),
                        "coef_v": cv.to_string(),
                    })),
                })),
                _ => match witness {
                    None => format!("avoider counts agree through sum {cap}\n"),
                    Some((a, b, cu, cv)) => {
                        format!("not wilf equivalent\nwitness: x^{a}*y^{b}: {cu} vs {cv}\n")
                    }
                },
            })
        }
        Command::Classes {
            permutations,
            sum,
            sequence,
            relation,
        } => {
            allow(cli, "classes", &[Output::Json, Output::Csv])?;
            if let Some(n) = sequence {
                check_permutations(cli, *n, MAX_SEQUENCE_N)?;
                let seq = class_count_sequence(*relation, *n)?;
                let line: Vec<String> = seq.iter().map(|k| k.to_string()).collect();
                return Ok(match cli.output {
                    Output::Json => json_out(json!({"relation": relation, "sequence": seq})),
                    _ => format!("{}\n", line.join(",")),
                });
            }
            let universe = universe(cli, *permutations, *sum)?;
            let report = partition(&universe, *relation)?;
            Ok(match cli.output {
                Output::Json => json_out(to_value(&report)),
                Output::Csv => report.to_csv(c),
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "relation: {}", report.relation);
                    let _ = writeln!(s, "universe: {}", report.universe);
                    for class in &report.classes {
                        let _ = writeln!(
                            s,
                            "{} ({}): {}",
                            class[0].format(c),
                            class.len(),
                            join(class, c)
                        );
                    }
                    let _ = writeln!(s, "classes: {}", report.class_count);
                    s
                }
            })
        }
        Command::Search { permutations, sum } => {
            allow(cli, "search", &[Output::Json])?;
            let universe = universe(cli, *permutations, *sum)?;
            let report = find_swe_not_shift(&universe)?;
            Ok(match cli.output {
                Output::Json => json_out(to_value(&report)),
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "universe: {}", report.universe);
                    for (i, class) in report.split_classes.iter().enumerate() {
                        let _ = writeln!(s, "split class {}: {}", i + 1, join(&class.members, c));
                        for part in &class.shift_classes {
                            let _ = writeln!(s, "  shift class: {}", join(part, c));
                        }
                        let _ = writeln!(
                            s,
                            "  pair: {} {}",
                            class.pair.0.format(c),
                            class.pair.1.format(c)
                        );
                    }
                    let _ = writeln!(s, "split classes: {}", report.split_classes.len());
                    let _ = writeln!(s, "cross pairs: {}", report.pairs.len());
                    s
                }
            })
        }
    }
}

fn join(words: &[Word], compact: bool) -> String {
    words
        .iter()
        .map(|w| w.format(compact))
        .collect::<Vec<_>>()
        .join(" ")
}

fn poly_out(cli: &Cli, p: &TriPoly) -> String {
    match cli.output {
        Output::Json => json_out(p.to_json()),
        _ => format!("{p}\n"),
    }
}

fn parse_offsets(raw: &[String]) -> Result<Vec<usize>, Failure> {
    raw.iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("invalid offset {t:?}")))
        })
        .collect()
}

fn check_permutations(cli: &Cli, n: usize, max: usize) -> Result<(), Failure> {
    if n == 0 || n > max {
        return usage(format!("permutation length {n} not in 1..={max}"));
    }
    if n > DEFAULT_MAX_PERMUTATIONS && !cli.extended {
        return usage(format!("permutation length {n} needs --extended"));
    }
    Ok(())
}

fn universe(cli: &Cli, permutations: Option<usize>, sum: Option<u32>) -> Result<Universe, Failure> {
    match (permutations, sum) {
        (Some(n), None) => {
            check_permutations(cli, n, MAX_SEQUENCE_N)?;
            Ok(Universe::permutations(n)?)
        }
        (None, Some(s)) => {
            if s == 0 || s > MAX_SUM {
                return usage(format!("sum {s} not in 1..={MAX_SUM}"));
            }
            if s > DEFAULT_MAX_SUM && !cli.extended {
                return usage(format!("sum {s} needs --extended"));
            }
            Ok(Universe::by_sum(s)?)
        }
        _ => usage("give exactly one of --permutations N or --sum S"),
    }
}

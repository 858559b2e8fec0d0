//! Command-line front end for `flatlink`.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use flatlink::filament::{brute_force_filamentation, filamentation_json};
use flatlink::genlab::{enumerate_small_codes, enumerate_up_to};
use flatlink::invariant::halved;
use flatlink::moves::replay;
use flatlink::{
    apply_move, find_move_sites, flat_linking_diff, link_filamentation, link_polynomial,
    parse_flat_link, random_walk, search_examples, validate, Error, Filamentation, FlatLinkCode,
    Link, MoveKind, MoveSite, SearchGoal, SearchLimits, WalkPolicy,
};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "flatlink",
    version,
    about = "Invariants, filamentations and moves for flat virtual links given as Gauss codes"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the input is a valid flat link code
    Validate { input: Option<PathBuf> },
    /// Compute the link polynomial
    Invariant { input: Option<PathBuf> },
    /// Find a filamentation with the constructive algorithm
    Filament { input: Option<PathBuf> },
    /// Report flat linking differences for every pair of components
    Linking { input: Option<PathBuf> },
    /// List, apply, walk or replay flat Reidemeister moves
    Moves {
        #[command(subcommand)]
        action: MovesAction,
    },
    /// List every code with exactly the given crossings, up to relabeling
    Enumerate {
        #[arg(long)]
        crossings: usize,
        #[arg(long, default_value_t = 1)]
        components: usize,
        /// Include all smaller crossing counts
        #[arg(long)]
        up_to: bool,
    },
    /// Search small codes for an example of a phenomenon
    Search {
        #[arg(long)]
        goal: SearchGoal,
        #[arg(long, default_value_t = 3)]
        max_components: usize,
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
        /// Codes up to this size are enumerated exhaustively
        #[arg(long, default_value_t = 4)]
        exhaustive_crossings: usize,
        /// Random samples per size beyond the exhaustive range
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decide filamentation existence by exhaustive search
    Oracle { input: Option<PathBuf> },
}

#[derive(Debug, Subcommand)]
pub enum MovesAction {
    /// List applicable move sites as log lines
    List {
        input: Option<PathBuf>,
        /// Restrict to these kinds (repeatable)
        #[arg(long = "kind")]
        kinds: Vec<MoveKind>,
    },
    /// Apply one move given as a log line
    Apply {
        input: Option<PathBuf>,
        #[arg(long = "move")]
        site: String,
    },
    /// Apply a seeded random sequence of moves
    Walk {
        input: Option<PathBuf>,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        /// Skip insertions once the code has this many crossings
        #[arg(long)]
        max_crossings: Option<usize>,
    },
    /// Replay a move log against the input
    Replay {
        input: Option<PathBuf>,
        #[arg(long)]
        log: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DuplicateComponentName(_)
            | Error::CrossingAppearsOnce(_)
            | Error::CrossingAppearsThrice(_)
            | Error::SameSignTwice(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    format: Format,
}

impl Io<'_> {
    fn read_text(&mut self, input: &Option<PathBuf>) -> Result<String, Failure> {
        match input {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
            None => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
                Ok(s)
            }
        }
    }

    fn read_code(&mut self, input: &Option<PathBuf>) -> Result<FlatLinkCode, Failure> {
        let text = self.read_text(input)?;
        Ok(parse_flat_link(&text)?)
    }

    fn read_link(&mut self, input: &Option<PathBuf>) -> Result<Link, Failure> {
        Ok(Link::new(self.read_code(input)?)?)
    }

    fn emit(
        &mut self,
        text: impl FnOnce() -> String,
        json: impl FnOnce() -> Value,
    ) -> Result<(), Failure> {
        let body = match self.format {
            Format::Text => text(),
            Format::Json => serde_json::to_string(&json()).expect("json values serialize"),
        };
        writeln!(self.out, "{body}").map_err(|e| Failure::Usage(format!("write failed: {e}")))
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code: 0 on success, 1 for usage or parse errors, 2 for an invalid
/// input code.
pub fn run<I, S>(
    args: I,
    mut stdin: impl Read,
    mut stdout: impl Write,
    mut stderr: impl Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let mut io = Io {
        stdin: &mut stdin,
        out: &mut stdout,
        format: cli.format,
    };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(stderr, "invalid code: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Result<(), Failure> {
    match command {
        Command::Validate { input } => {
            let code = io.read_code(&input)?;
            let catalog = validate(&code)?;
            let (k, n) = (code.component_count(), catalog.len());
            io.emit(
                || format!("valid: {k} components, {n} crossings"),
                || json!({ "valid": true, "components": k, "crossings": n }),
            )
        }
        Command::Invariant { input } => {
            let link = io.read_link(&input)?;
            let inv = link_polynomial(&link)?;
            io.emit(|| inv.to_text(), || inv.to_json())
        }
        Command::Filament { input } => {
            let link = io.read_link(&input)?;
            let f = link_filamentation(&link)?;
            report_filamentation(io, f.as_ref())
        }
        Command::Oracle { input } => {
            let link = io.read_link(&input)?;
            let f = brute_force_filamentation(&link)?;
            report_filamentation(io, f.as_ref())
        }
        Command::Linking { input } => {
            let link = io.read_link(&input)?;
            linking(io, &link)
        }
        Command::Moves { action } => moves(io, action),
        Command::Enumerate {
            crossings,
            components,
            up_to,
        } => {
            let codes = if up_to {
                enumerate_up_to(crossings, components)?
            } else {
                enumerate_small_codes(crossings, components)?
            };
            let rendered: Vec<String> = codes.iter().map(FlatLinkCode::render).collect();
            io.emit(|| rendered.join("\n"), || json!(rendered))
        }
        Command::Search {
            goal,
            max_components,
            max_crossings,
            exhaustive_crossings,
            samples,
            seed,
            jobs,
        } => {
            let limits = SearchLimits {
                max_components,
                max_crossings,
                exhaustive_crossings,
                random_samples: samples,
                seed,
                jobs: jobs.max(1),
            };
            match search_examples(goal, &limits)? {
                Some(w) => io.emit(
                    || {
                        format!(
                            "witness: {}\n{}\nfilamentation: {}\noracle: {}",
                            w.code,
                            w.invariant.to_text(),
                            describe(w.filamentation.as_ref()),
                            describe(w.oracle.as_ref())
                        )
                    },
                    || {
                        let mut v = w.to_json();
                        v["found"] = json!(true);
                        v["goal"] = json!(goal.to_string());
                        v
                    },
                ),
                None => io.emit(
                    || format!("no witness for {goal} within the limits"),
                    || json!({ "found": false, "goal": goal.to_string() }),
                ),
            }
        }
    }
}

fn describe(f: Option<&Filamentation>) -> String {
    match f {
        Some(f) if f.part_count() == 0 => "exists (empty)".into(),
        Some(f) => format!("exists {f}"),
        None => "none".into(),
    }
}

fn report_filamentation(io: &mut Io, f: Option<&Filamentation>) -> Result<(), Failure> {
    io.emit(
        || format!("filamentation: {}", describe(f)),
        || {
            let mut v = filamentation_json(f);
            if f.is_some() {
                v["exists"] = json!(true);
            }
            v
        },
    )
}

fn linking(io: &mut Io, link: &Link) -> Result<(), Failure> {
    let n = link.component_count();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let diff = flat_linking_diff(link, a, b)?;
            rows.push((
                link.component_name(a).to_string(),
                link.component_name(b).to_string(),
                diff,
            ));
        }
    }
    let linked = rows.iter().any(|r| r.2 != 0);
    io.emit(
        || {
            let mut lines: Vec<String> = rows
                .iter()
                .map(|(a, b, d)| format!("{a} {b}: diff {d}, linking number {}", halved(*d)))
                .collect();
            lines.push(if linked {
                "verdict: nontrivial (linked)".into()
            } else {
                "verdict: all linking numbers zero".into()
            });
            lines.join("\n")
        },
        || {
            let pairs: Vec<Value> = rows
                .iter()
                .map(|(a, b, d)| json!({ "a": a, "b": b, "diff": d, "linking": halved(*d) }))
                .collect();
            json!({ "pairs": pairs, "linked": linked })
        },
    )
}

fn moves(io: &mut Io, action: MovesAction) -> Result<(), Failure> {
    match action {
        MovesAction::List { input, kinds } => {
            let link = io.read_link(&input)?;
            let kinds = if kinds.is_empty() {
                MoveKind::ALL.to_vec()
            } else {
                kinds
            };
            let lines: Vec<String> = find_move_sites(&link, &kinds)
                .iter()
                .map(|s| s.to_log_line(link.code()))
                .collect();
            io.emit(|| lines.join("\n"), || json!(lines))
        }
        MovesAction::Apply { input, site } => {
            let link = io.read_link(&input)?;
            let parsed = MoveSite::parse_log_line(&site, link.code())?;
            let moved = apply_move(&link, &parsed)?;
            let code = moved.code().render();
            io.emit(|| code.clone(), || json!({ "code": code }))
        }
        MovesAction::Walk {
            input,
            steps,
            seed,
            max_crossings,
        } => {
            let link = io.read_link(&input)?;
            let policy = WalkPolicy {
                max_crossings,
                ..WalkPolicy::default()
            };
            let walk = random_walk(&link, steps, seed, &policy)?;
            let code = walk.link.code().render();
            let log = walk.log_lines();
            io.emit(
                || {
                    let mut lines = vec![code.clone()];
                    lines.extend(log.iter().map(|l| format!("# {l}")));
                    lines.join("\n")
                },
                || json!({ "code": code, "log": log }),
            )
        }
        MovesAction::Replay { input, log } => {
            let link = io.read_link(&input)?;
            let text = std::fs::read_to_string(&log)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", log.display())))?;
            let lines: Vec<&str> = text
                .lines()
                .map(|l| l.trim().trim_start_matches('#').trim())
                .filter(|l| MoveKind::ALL.iter().any(|k| l.starts_with(k.name())))
                .collect();
            let moved = replay(&link, &lines)?;
            let code = moved.code().render();
            io.emit(|| code.clone(), || json!({ "code": code }))
        }
    }
}

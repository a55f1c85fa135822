//! `ultratree` command-line frontend.
//!
//! Exit codes: 0 ok / yes, 1 parse error, 2 invalid input, 3 negative
//! verdict, 4 property failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ultratree::campaign::{self, CampaignConfig};
use ultratree::document::{self, DocumentError, ExtensionDocument, SpaceDocument, TreeDocument};
use ultratree::{Rat, UgvlError, UltraSpace};

const EXIT_PARSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NO: u8 = 3;
const EXIT_PROPERTY: u8 = 4;

#[derive(Parser)]
#[command(name = "ultratree", version, about = "Ultrametric spaces generated by vertex-labeled trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space document against the ultrametric axioms
    Validate { space: PathBuf },
    /// Decide whether a space is generated by a labeled tree
    IsUgvl { space: PathBuf },
    /// Emit a labeled tree generating the space
    GenerateTree {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate the path-maximum distance of a labeled tree
    EvalTree { tree: PathBuf },
    /// Emit the representing tree of a space
    RepresentingTree {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Emit the minimal tree-generated extension of a space
    Extend { space: PathBuf },
    /// Decide whether two spaces are isometric
    Isometric { a: PathBuf, b: PathBuf },
    /// Run the seeded property campaign over random spaces
    Proptest {
        #[arg(long, env = "ULTRATREE_SEED", default_value_t = campaign::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = campaign::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = campaign::DEFAULT_MAX_POINTS)]
        max_points: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        let code = if e.is_parse_error() { EXIT_PARSE } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

impl From<UgvlError> for Failure {
    fn from(e: UgvlError) -> Self {
        Failure { code: EXIT_INVALID, message: e.to_string() }
    }
}

/// Text for stdout plus the exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let result = if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map(|_| buf)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|e| Failure { code: EXIT_PARSE, message: format!("{}: {e}", path.display()) })
}

fn load_space(path: &Path) -> Result<UltraSpace, Failure> {
    Ok(document::parse_space_json(&read_input(path)?)?)
}

fn ball_names(space: &UltraSpace, members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&i| space.name(i)).collect();
    format!("{{{}}}", names.join(","))
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Validate { space } => {
            let s = load_space(&space)?;
            let diam =
                if s.is_empty() { Rat::zero() } else { s.diameter(&s.all_points()).expect("nonempty") };
            Ok(Output::ok(format!("ultrametric: ok, n={}, diam={diam}\n", s.len())))
        }
        Command::IsUgvl { space } => {
            let s = load_space(&space)?;
            let yes = ultratree::is_ugvl(&s)?;
            let delta = ultratree::delta(&s)?;
            let verdict = if yes { "yes" } else { "no" };
            Ok(Output {
                text: format!("UGVL: {verdict}, delta={delta}\n"),
                code: if yes { 0 } else { EXIT_NO },
            })
        }
        Command::GenerateTree { space, format } => {
            let s = load_space(&space)?;
            let tree = match ultratree::generating_tree(&s) {
                Ok(t) => t,
                Err(UgvlError::NotUgvl { witness }) => {
                    return Err(Failure {
                        code: EXIT_NO,
                        message: format!(
                            "not generated by a labeled tree: ball {} is not a centered sphere",
                            ball_names(&s, witness.members())
                        ),
                    })
                }
                Err(e) => return Err(e.into()),
            };
            Ok(Output::ok(match format {
                Format::Json => document::to_json(&TreeDocument::from_labeled_tree(&tree)) + "\n",
                Format::Dot => document::labeled_tree_dot(&tree),
            }))
        }
        Command::EvalTree { tree } => {
            let t = document::parse_labeled_tree_json(&read_input(&tree)?)?;
            let s = t.to_space().map_err(|e| Failure { code: EXIT_INVALID, message: e.to_string() })?;
            Ok(Output::ok(document::to_json(&SpaceDocument::from_space(&s)) + "\n"))
        }
        Command::RepresentingTree { space, format } => {
            let s = load_space(&space)?;
            let tree = ultratree::representing_tree(&s)
                .map_err(|e| Failure { code: EXIT_INVALID, message: e.to_string() })?;
            Ok(Output::ok(match format {
                Format::Json => document::to_json(&TreeDocument::from_rooted_tree(&tree)) + "\n",
                Format::Dot => document::rooted_tree_dot(&tree),
            }))
        }
        Command::Extend { space } => {
            let s = load_space(&space)?;
            let ext = ultratree::minimal_extension(&s)?;
            Ok(Output::ok(document::to_json(&ExtensionDocument::from_extension(&s, &ext)) + "\n"))
        }
        Command::Isometric { a, b } => {
            let (sa, sb) = (load_space(&a)?, load_space(&b)?);
            let yes = ultratree::isometric(&sa, &sb);
            let verdict = if yes { "yes" } else { "no" };
            Ok(Output { text: format!("isometric: {verdict}\n"), code: if yes { 0 } else { EXIT_NO } })
        }
        Command::Proptest { seed, trials, max_points } => {
            if max_points == 0 {
                return Err(Failure {
                    code: EXIT_INVALID,
                    message: "--max-points must be at least 1".into(),
                });
            }
            let report = campaign::run_campaign(CampaignConfig { seed, trials, max_points });
            let code = if report.all_passed() { 0 } else { EXIT_PROPERTY };
            Ok(Output { text: campaign::render(&report), code })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let _ = io::stdout().write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

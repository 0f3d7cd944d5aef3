//! Command-line front end: load structures, run the checkers and duality
//! constructions, emit deterministic reports.
//!
//! Exit codes: 0 when every check passes, 1 when at least one check fails,
//! 2 on malformed input.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sorted_systems::complete_system::{item_status, SortKey};
use sorted_systems::corpus;
use sorted_systems::duality;
use sorted_systems::interpretation;
use sorted_systems::io as formats;
use sorted_systems::report::{AxiomReport, CheckEntry, CheckStatus};

#[derive(Parser)]
#[command(name = "sorted-systems", version, about = "checkers and dualities for sorted groups and complete systems")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Support specification `k:J;k:J` with comma-separated sort names.
    #[arg(long, global = true)]
    support: Option<String>,
    /// Cap for generated sort levels; env GDL_KCAP overrides the default 4.
    #[arg(long, global = true)]
    kcap: Option<usize>,
    /// Print progress notes to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a complete system file.
    CheckSystem { file: PathBuf },
    /// Validate a group file; with a sorting block, check the sorted axioms.
    CheckGroup { file: PathBuf },
    /// Convert between a sorted group and its system.
    Dualize {
        #[arg(value_enum)]
        direction: Direction,
        file: PathBuf,
    },
    /// Run the alpha/beta round-trip checks on a (sorted) group file.
    Roundtrip { file: PathBuf },
    /// Regenerate the kernel-collision counterexample and check its verdicts.
    Counterexample,
    /// Check the orbit interpretation of an action model file.
    Interpret { file: PathBuf },
    /// Compute the triple fiber product from a six-map file.
    Fiber { file: PathBuf },
    /// Principal ultraproduct of the factor list at the given index.
    Ultraproduct {
        file: PathBuf,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// System file to sorted group.
    S2g,
    /// Group file to system.
    G2s,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    entries: Vec<CheckEntry>,
    quantities: BTreeMap<String, i64>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            entries: vec![],
            quantities: BTreeMap::new(),
        }
    }

    fn extend(&mut self, report: AxiomReport) {
        self.entries.extend(report.entries);
    }

    fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == CheckStatus::Pass)
    }

    fn emit(&self, format: Format) {
        match format {
            Format::Json => {
                println!("{}", serde_json::to_string_pretty(self).expect("serializable"));
            }
            Format::Text => {
                for e in &self.entries {
                    print!(
                        "[{}] {} (checked {}, skipped {})",
                        e.status, e.name, e.checked, e.skipped
                    );
                    if !e.witnesses.is_empty() {
                        print!(" witnesses: {}", e.witnesses.join("; "));
                    }
                    println!();
                }
                for (k, v) in &self.quantities {
                    println!("{k} = {v}");
                }
            }
        }
    }
}

enum RunError {
    /// Malformed input: exit 2.
    Input(String),
    /// A computation could not be carried out: exit 1.
    Failed(String),
}

impl From<formats::IoError> for RunError {
    fn from(e: formats::IoError) -> Self {
        RunError::Input(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, RunError> {
    std::fs::read_to_string(path)
        .map_err(|e| RunError::Input(format!("cannot read {}: {e}", path.display())))
}

fn kcap(cli: &Cli) -> usize {
    cli.kcap
        .or_else(|| std::env::var("GDL_KCAP").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(4)
}

fn support_for(
    cli: &Cli,
    sg: &sorted_systems::SortedFiniteGroup,
) -> Result<Vec<SortKey>, RunError> {
    match &cli.support {
        Some(spec) => Ok(formats::parse_support(spec)?),
        None => Ok(corpus::canonical_support(sg)),
    }
}

/// Parses either a sorted-group file or a bare group file (which gets the
/// maximal one-sort sorting).
fn sorted_group_from(text: &str) -> Result<sorted_systems::SortedFiniteGroup, RunError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| RunError::Input(format!("json: {e}")))?;
    if value.get("sorting").is_some() {
        Ok(formats::sorted_group_from_json(text)?)
    } else {
        let group = formats::group_from_json(text)?;
        corpus::maximal_one_sort(group).map_err(|e| RunError::Input(e.to_string()))
    }
}

fn run(cli: &Cli) -> Result<RunReport, RunError> {
    match &cli.command {
        Command::CheckSystem { file } => {
            let system = formats::system_from_json(&read(file)?)?;
            let mut out = RunReport::new("check-system");
            out.extend(system.check_axioms());
            let tc = system.tilde_classes();
            out.quantities
                .insert("tilde_classes".into(), tc.classes.len() as i64);
            out.quantities
                .insert("elements".into(), system.len() as i64);
            Ok(out)
        }
        Command::CheckGroup { file } => {
            let text = read(file)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| RunError::Input(format!("json: {e}")))?;
            let mut out = RunReport::new("check-group");
            if value.get("sorting").is_some() {
                let sg = formats::sorted_group_from_json(&text)?;
                out.extend(sg.group().validate());
                out.extend(sg.check_sorted_axioms());
                out.quantities
                    .insert("normal_subgroups".into(), sg.subgroups().len() as i64);
            } else {
                let g = formats::group_from_json(&text)?;
                out.extend(g.validate());
                out.quantities
                    .insert("normal_subgroups".into(), g.normal_subgroups().len() as i64);
                out.quantities.insert("order".into(), g.order() as i64);
            }
            Ok(out)
        }
        Command::Dualize { direction, file } => {
            let text = read(file)?;
            let mut out = RunReport::new("dualize");
            match direction {
                Direction::S2g => {
                    let system = formats::system_from_json(&text)?;
                    let limit = duality::group_of_system(&system)
                        .map_err(|e| RunError::Failed(e.to_string()))?;
                    println!("{}", formats::sorted_group_to_json(&limit.sorted));
                    out.entries.push(CheckEntry::pass("limit-computed", 1, 0));
                    out.quantities
                        .insert("limit_order".into(), limit.group.order() as i64);
                }
                Direction::G2s => {
                    let sg = sorted_group_from(&text)?;
                    let support = support_for(cli, &sg)?;
                    let system = duality::system_of_group(&sg, &support)
                        .map_err(|e| RunError::Failed(e.to_string()))?;
                    println!("{}", formats::system_to_json(&system));
                    out.entries.push(CheckEntry::pass("system-built", 1, 0));
                    out.quantities
                        .insert("elements".into(), system.len() as i64);
                }
            }
            Ok(out)
        }
        Command::Roundtrip { file } => {
            let sg = sorted_group_from(&read(file)?)?;
            let support = support_for(cli, &sg)?;
            let mut out = RunReport::new("roundtrip");
            out.extend(duality::check_alpha_beta(&sg, &support));
            Ok(out)
        }
        Command::Counterexample => {
            let cap = kcap(cli);
            let system = corpus::hidden_axiom_example(cap)
                .map_err(|e| RunError::Failed(e.to_string()))?;
            let report = system.check_axioms();
            let mut out = RunReport::new("counterexample");
            let early_pass = (1..=7).all(|i| item_status(&report, i) == CheckStatus::Pass);
            let hidden_fails = item_status(&report, 8) == CheckStatus::Fail;
            let tc = system.tilde_classes().classes.len();
            let limit = duality::group_of_system(&system)
                .map_err(|e| RunError::Failed(e.to_string()))?;
            let dual = duality::system_of_group(&limit.sorted, system.sorts())
                .map_err(|e| RunError::Failed(e.to_string()))?;
            let dual_tc = dual.tilde_classes().classes.len();
            let no_embedding = duality::find_embedding(&system, &dual).is_none();
            out.extend(report);
            out.quantities.insert("tilde_classes".into(), tc as i64);
            out.quantities
                .insert("dual_tilde_classes".into(), dual_tc as i64);
            out.quantities
                .insert("limit_order".into(), limit.group.order() as i64);
            // the command's verdict: the counterexample must counter-exemplify
            let expected = early_pass && hidden_fails && tc == 4 && dual_tc == 3 && no_embedding;
            let verdict = if expected {
                CheckEntry::pass("expected-fail", 1, 0)
            } else {
                CheckEntry::fail(
                    "expected-fail",
                    1,
                    0,
                    vec!["the structure did not produce the expected verdict pattern".into()],
                )
            };
            // strip the intended hidden-axiom failure from the exit verdict
            out.entries = out
                .entries
                .into_iter()
                .map(|mut e| {
                    if e.name == "hidden-axiom" && e.status == CheckStatus::Fail && expected {
                        e.name = "hidden-axiom (expected fail)".into();
                        e.status = CheckStatus::Pass;
                    }
                    e
                })
                .collect();
            out.entries.push(verdict);
            Ok(out)
        }
        Command::Interpret { file } => {
            let model = formats::model_from_json(&read(file)?)?;
            let bound = kcap(cli);
            let support = match &cli.support {
                Some(spec) => formats::parse_support(spec)?,
                None => {
                    let derived = interpretation::derived_sorted_group(&model, bound)
                        .map_err(|e| RunError::Failed(e.to_string()))?;
                    corpus::interp_support(&derived, bound)
                }
            };
            let mut out = RunReport::new("interpret");
            out.extend(interpretation::check_interpretation(&model, &support, bound));
            out.extend(interpretation::dcl_iff_primitive(&model, bound.min(3)));
            Ok(out)
        }
        Command::Fiber { file } => {
            let maps = formats::fiber_from_json(&read(file)?)?;
            let fiber = sorted_systems::groups::fiber_triple(
                &maps.ab_a, &maps.ab_b, &maps.ac_a, &maps.ac_c, &maps.bc_b, &maps.bc_c,
            )
            .map_err(|e| RunError::Failed(e.to_string()))?;
            let mut out = RunReport::new("fiber");
            if fiber.is_subgroup() {
                out.entries.push(CheckEntry::pass(
                    "fiber-subgroup",
                    fiber.order(),
                    0,
                ));
            } else {
                out.entries.push(CheckEntry::fail(
                    "fiber-subgroup",
                    fiber.order(),
                    0,
                    vec!["members are not closed under product and inverse".into()],
                ));
            }
            out.quantities.insert("order".into(), fiber.order() as i64);
            Ok(out)
        }
        Command::Ultraproduct { file, index } => {
            let factors = formats::ultraproduct_from_json(&read(file)?)?;
            if factors.is_empty() {
                return Err(RunError::Input("factor list is empty".into()));
            }
            if *index >= factors.len() {
                return Err(RunError::Input(format!(
                    "index {index} out of range for {} factors",
                    factors.len()
                )));
            }
            let support = match &cli.support {
                Some(spec) => formats::parse_support(spec)?,
                None => corpus::canonical_support(&factors[*index]),
            };
            let mut out = RunReport::new("ultraproduct");
            out.extend(
                duality::principal_ultraproduct(&factors, *index, &support)
                    .map_err(|e| RunError::Failed(e.to_string()))?,
            );
            out.quantities.insert("factors".into(), factors.len() as i64);
            out.quantities.insert("index".into(), *index as i64);
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.verbose {
                eprintln!("{} entries checked", report.entries.len());
            }
            report.emit(cli.format);
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

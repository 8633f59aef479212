//! Command-line entry point: tower generation, certificate derivation and
//! verification, finite-model reports, HNN word-problem queries, diagram
//! operations, and the acceptance suite.
//!
//! Exit codes: 0 on success or accepted input, 1 on rejected or invalid
//! input, 2 on internal error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use grouptower::acceptance;
use grouptower::derivation::{self, Certificate};
use grouptower::diagrams::{self, Diagram};
use grouptower::finite_models::{
    burnside_group_named, element_order, exponent_check_bounded, AuxiliaryModels, FiniteGroup,
    DEFAULT_ELEMENT_BUDGET, DEFAULT_MAX_COSETS,
};
use grouptower::hnn::{build_e_model, build_g_model};
use grouptower::presentation::{build_tower, Presentation, TowerLevel};
use grouptower::words::Word;

#[derive(Parser)]
#[command(name = "grouptower", version, about = "Presentation towers, derivation certificates, finite models, HNN word problems and rank-0 diagrams", max_term_width = 100)]
struct Cli {
    /// Seed for every randomized subcommand; equal seeds reproduce output
    /// bit-for-bit.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output style: human-readable text or stable key/value lines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Build a presentation tower and write one file per level.
    Tower {
        /// Number of base generators.
        #[arg(long)]
        gens: u32,
        /// Odd base exponent, at least 3.
        #[arg(long)]
        n0: u64,
        /// Number of construction steps.
        #[arg(long)]
        depth: u32,
        /// Output directory for level files (defaults to the working dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a certificate for Wⁿ over a tower level.
    Derive {
        /// Level file produced by `tower`.
        #[arg(long)]
        level: PathBuf,
        /// Word over the level's base alphabet, e.g. "a1.0 a2.0^-1".
        #[arg(long)]
        word: String,
        /// Certificate output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate against a level.
    Verify {
        #[arg(long)]
        level: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Order of a free Burnside group via coset enumeration.
    Order {
        /// Rank and exponent, e.g. `--burnside 2 3`.
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        burnside: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Build the auxiliary models and report their invariants.
    Model {
        /// Which model bundle to build (only `q` is defined).
        #[arg(long, default_value = "q")]
        build: String,
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        /// Emit the twist/embedding verification report.
        #[arg(long)]
        report: bool,
        /// Coset budget for the underlying enumerations.
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Element budget for subgroup closures.
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        element_budget: usize,
        /// Length of the sampled generator words in exponent checks.
        #[arg(long, default_value_t = grouptower::finite_models::DEFAULT_WORD_BOUND)]
        word_bound: usize,
    },
    /// Britton normal form of an alternating word.
    Nf {
        /// `g0` (base Q, stable letter y) or `e` (base P, letters y and x_i).
        #[arg(long, default_value = "g0")]
        model: String,
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        /// Word such as "[c b1] y [a1] y^-1".
        #[arg(long)]
        word: String,
    },
    /// Word-problem decisions, one word per line.
    Wp {
        #[arg(long, default_value = "e")]
        model: String,
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        /// File with one alternating word per line.
        #[arg(long)]
        words_file: Option<PathBuf>,
        /// A single word given inline.
        #[arg(long)]
        word: Option<String>,
    },
    /// Diagram operations.
    Diagram {
        #[command(subcommand)]
        op: DiagramOp,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Acceptance {
        /// Run a single criterion (1–8) instead of all.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DiagramOp {
    /// Check all face and structure invariants of a diagram file.
    Validate { file: PathBuf },
    /// Remove reducible y-annuli until none remain.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a verifying certificate into a disk diagram.
    FromCert {
        cert: PathBuf,
        #[arg(long)]
        level: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// Rejected or malformed input: exit 1.
    Input(String),
    /// A bug or unexpected state: exit 2.
    Internal(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Failure {
        Failure::Input(e.to_string())
    }

    fn internal(e: impl std::fmt::Display) -> Failure {
        Failure::Internal(e.to_string())
    }
}

/// Accumulates result fields; `structured` output contains only the stable
/// fields, `text` adds the wall time.
struct Report {
    command: String,
    fields: Vec<(String, String)>,
    started: Instant,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            fields: Vec::new(),
            started: Instant::now(),
        }
    }

    fn field(&mut self, key: &str, value: impl std::fmt::Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    fn print(self, format: Format) {
        match format {
            Format::Structured => {
                println!("command {}", self.command);
                for (k, v) in &self.fields {
                    println!("{k} {v}");
                }
            }
            Format::Text => {
                println!("{}:", self.command);
                for (k, v) in &self.fields {
                    println!("  {k}: {v}");
                }
                println!("  wall-time: {:.3}s", self.started.elapsed().as_secs_f64());
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_level(path: &Path) -> Result<TowerLevel, Failure> {
    TowerLevel::parse(&read_file(path)?).map_err(Failure::input)
}

fn reference_models(gens: usize, n: u64) -> Result<AuxiliaryModels, Failure> {
    AuxiliaryModels::reference(gens, n).map_err(Failure::internal)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Tower {
            gens,
            n0,
            depth,
            out,
        } => {
            let levels = build_tower(&Presentation::free(gens), &BigUint::from(n0), depth)
                .map_err(Failure::input)?;
            let dir = out.unwrap_or_else(|| {
                std::env::var("GROUPTOWER_OUT")
                    .map(PathBuf::from)
                    .unwrap_or_else(|_| PathBuf::from("."))
            });
            std::fs::create_dir_all(&dir)
                .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
            let mut report = Report::new("tower");
            report.field("levels", levels.len());
            for level in &levels {
                let path = dir.join(format!("level{}.txt", level.level));
                std::fs::write(&path, level.emit())
                    .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
                report.field(
                    &format!("level{}", level.level),
                    format!(
                        "gens={} relators={} exponent={} file={}",
                        level.presentation.alphabet().len(),
                        level.presentation.relators().len(),
                        level.exponent,
                        path.display()
                    ),
                );
            }
            if n0 <= grouptower::presentation::FULL_SCALE_EXPONENT {
                report.field(
                    "note",
                    "base exponent is desk-scale; the headline guarantees assume an odd exponent above 2^16",
                );
            }
            report.print(cli.format);
            Ok(true)
        }
        Command::Derive { level, word, out } => {
            let level = load_level(&level)?;
            let word = Word::parse(&word).map_err(Failure::input)?;
            let cert = derivation::derive_power_relation(&level, &word).map_err(Failure::input)?;
            write_output(out.as_ref(), &cert.emit())?;
            if out.is_some() {
                let mut report = Report::new("derive");
                report.field("start", cert.start.to_string());
                report.field("steps", cert.steps.len());
                report.field("digest", &cert.presentation_digest[..16]);
                report.print(cli.format);
            }
            Ok(true)
        }
        Command::Verify { level, cert } => {
            let level = load_level(&level)?;
            let cert = Certificate::parse(&read_file(&cert)?).map_err(Failure::input)?;
            let outcome =
                derivation::verify(&level.presentation, &cert).map_err(Failure::input)?;
            let mut report = Report::new("verify");
            report.field("digest", &cert.presentation_digest[..16.min(cert.presentation_digest.len())]);
            report.field("start", cert.start.to_string());
            report.field("steps", cert.steps.len());
            report.field("accepted", outcome.accepted);
            if let Some(step) = outcome.failing_step {
                report.field("failing-step", step);
            }
            if let Some(reason) = &outcome.reason {
                report.field("reason", reason);
            }
            report.print(cli.format);
            Ok(outcome.accepted)
        }
        Command::Order {
            burnside,
            max_cosets,
        } => {
            let [m, n] = burnside[..] else {
                return Err(Failure::Input("expected --burnside M N".into()));
            };
            let names = (1..=m).map(|i| format!("g{i}")).collect();
            let model =
                burnside_group_named(names, n, max_cosets).map_err(Failure::input)?;
            let mut report = Report::new("order");
            report.field("group", format!("B({m},{n})"));
            report.field("order", model.order());
            report.field("exponent-verified", true);
            report.print(cli.format);
            Ok(true)
        }
        Command::Model {
            build,
            n,
            gens,
            report: want_report,
            max_cosets,
            element_budget,
            word_bound,
        } => {
            if build != "q" {
                return Err(Failure::Input(format!("unknown model bundle `{build}`")));
            }
            let aux = AuxiliaryModels::reference_bounded(gens, n, max_cosets)
                .map_err(Failure::input)?;
            let mut report = Report::new("model");
            report.field("K-order", aux.k().order());
            report.field("BBc-order", aux.bc().order());
            report.field("BX-order", aux.x.order());
            report.field("P-order", aux.p.order());
            report.field("Q-order", aux.q.order());
            if want_report {
                report.field("twist-group-order", aux.zeta_group.order());
                for (i, _) in aux.zeta.iter().enumerate() {
                    let zp = &aux.zeta_group.gens()[i];
                    let cube = zp.then(zp).then(zp);
                    report.field(
                        &format!("zeta{}", i + 1),
                        format!(
                            "automorphism-verified=true cube-is-identity={}",
                            cube.is_identity()
                        ),
                    );
                }
                let image = aux
                    .kappa
                    .image_order(&aux.p, element_budget)
                    .map_err(Failure::internal)?;
                report.field(
                    "kappa",
                    format!(
                        "injective={} image-order={image}",
                        image == aux.bc().order()
                    ),
                );
                report.field(
                    "P-exponent-divides-n",
                    exponent_check_bounded(&aux.p, n, cli.seed, 200, word_bound).is_none(),
                );
                report.field(
                    "Q-exponent-divides-n2",
                    exponent_check_bounded(&aux.q, n * n, cli.seed, 200, word_bound).is_none(),
                );
                match grouptower::finite_models::find_element_of_order(&aux.q, n * n, 2) {
                    Some((word, e)) => {
                        let spelled: Vec<&str> =
                            word.iter().map(|&g| aux.q.gen_name(g)).collect();
                        report.field(
                            "Q-full-exponent-witness",
                            format!("{}={}", spelled.join("*"), element_order(&aux.q, &e)),
                        );
                    }
                    None => report.field("Q-full-exponent-witness", "none-found"),
                }
            }
            report.print(cli.format);
            Ok(true)
        }
        Command::Nf {
            model,
            n,
            gens,
            word,
        } => {
            let aux = reference_models(gens, n)?;
            let mut report = Report::new("nf");
            let normal = match model.as_str() {
                "g0" => {
                    let g = build_g_model(&aux).map_err(Failure::internal)?;
                    let w = g.parse_word(&word).map_err(Failure::input)?;
                    let nf = g.normal_form(&w);
                    report.field("y-length", nf.y_length());
                    report.field("trivial", g.is_trivial(&w));
                    g.emit_word(&nf)
                }
                "e" => {
                    let e = build_e_model(&aux).map_err(Failure::internal)?;
                    let w = e.parse_word(&word).map_err(Failure::input)?;
                    let nf = e.normal_form(&w);
                    report.field("y-length", nf.y_length());
                    report.field("trivial", e.is_trivial(&w));
                    e.emit_word(&nf)
                }
                other => return Err(Failure::Input(format!("unknown model `{other}`"))),
            };
            report.field("normal-form", normal);
            report.print(cli.format);
            Ok(true)
        }
        Command::Wp {
            model,
            n,
            gens,
            words_file,
            word,
        } => {
            let aux = reference_models(gens, n)?;
            let mut inputs: Vec<String> = Vec::new();
            if let Some(path) = &words_file {
                inputs.extend(read_file(path)?.lines().map(str::to_string));
            }
            if let Some(w) = word {
                inputs.push(w);
            }
            if inputs.is_empty() {
                return Err(Failure::Input("need --words-file or --word".into()));
            }
            let mut all_trivial = true;
            let mut lines = String::new();
            match model.as_str() {
                "g0" => {
                    let g = build_g_model(&aux).map_err(Failure::internal)?;
                    for input in &inputs {
                        let w = g.parse_word(input).map_err(Failure::input)?;
                        let trivial = g.is_trivial(&w);
                        all_trivial &= trivial;
                        writeln!(
                            lines,
                            "{}\t{}",
                            if trivial { "trivial" } else { "nontrivial" },
                            input.trim()
                        )
                        .unwrap();
                    }
                }
                "e" => {
                    let e = build_e_model(&aux).map_err(Failure::internal)?;
                    for input in &inputs {
                        let w = e.parse_word(input).map_err(Failure::input)?;
                        let trivial = e.is_trivial(&w);
                        all_trivial &= trivial;
                        writeln!(
                            lines,
                            "{}\t{}",
                            if trivial { "trivial" } else { "nontrivial" },
                            input.trim()
                        )
                        .unwrap();
                    }
                }
                other => return Err(Failure::Input(format!("unknown model `{other}`"))),
            }
            print!("{lines}");
            Ok(all_trivial)
        }
        Command::Diagram { op } => run_diagram(op, cli.format),
        Command::Acceptance { criterion } => {
            let results = match criterion {
                Some(id) => vec![acceptance::run_criterion(id, cli.seed)
                    .ok_or_else(|| Failure::Input(format!("no criterion {id}")))?],
                None => acceptance::run_all(cli.seed),
            };
            let mut all_ok = true;
            for result in &results {
                println!("{}", result.summary_line());
                if cli.format == Format::Text {
                    for line in &result.details {
                        println!("    {line}");
                    }
                }
                all_ok &= result.passed && result.within_budget();
            }
            println!(
                "acceptance: {}",
                if all_ok { "all criteria pass" } else { "FAILURES present" }
            );
            Ok(all_ok)
        }
    }
}

fn run_diagram(op: DiagramOp, format: Format) -> Result<bool, Failure> {
    let aux = reference_models(2, 3)?;
    let g = build_g_model(&aux).map_err(Failure::internal)?;
    match op {
        DiagramOp::Validate { file } => {
            let d = Diagram::parse(&read_file(&file)?, &g).map_err(Failure::input)?;
            let outcome = diagrams::validate(&d, &g);
            let mut report = Report::new("diagram-validate");
            report.field("faces", d.faces.len());
            report.field("edges", d.n_edges());
            report.field("valid", outcome.is_valid());
            for v in &outcome.violations {
                report.field("violation", v);
            }
            report.print(format);
            Ok(outcome.is_valid())
        }
        DiagramOp::Reduce { file, out } => {
            let d = Diagram::parse(&read_file(&file)?, &g).map_err(Failure::input)?;
            let outcome = diagrams::validate(&d, &g);
            if !outcome.is_valid() {
                return Err(Failure::Input(format!(
                    "input diagram invalid: {:?}",
                    outcome.violations
                )));
            }
            let (fixed, steps) =
                acceptance::reduce_to_fixpoint(&d, &g).map_err(Failure::Internal)?;
            write_output(out.as_ref(), &fixed.emit(&g))?;
            if out.is_some() {
                let mut report = Report::new("diagram-reduce");
                report.field("removed-annuli", steps);
                report.field("squares-left", fixed.squares().count());
                report.print(format);
            }
            Ok(true)
        }
        DiagramOp::FromCert { cert, level, out } => {
            let level = load_level(&level)?;
            let cert = Certificate::parse(&read_file(&cert)?).map_err(Failure::input)?;
            let d = diagrams::diagram_from_certificate(&level, &cert, &aux, &g)
                .map_err(Failure::input)?;
            write_output(out.as_ref(), &d.emit(&g))?;
            if out.is_some() {
                let mut report = Report::new("diagram-from-cert");
                report.field("faces", d.faces.len());
                report.field("squares", d.squares().count());
                report.print(format);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let requested = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if requested { 0 } else { 1 });
        }
    };
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(true)) => ExitCode::from(0),
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(Failure::Input(message))) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(message))) => {
            eprintln!("internal error: {message}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("internal error: unexpected panic");
            ExitCode::from(2)
        }
    }
}

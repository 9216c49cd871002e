//! `qualprob`: parse, evaluate, decide and translate comparative-likelihood
//! formulas from the command line.
//!
//! Exit status: 0 when the queried property holds (true, SAT, valid, clean
//! audit), 1 for the opposite verdict, 2 for usage, file or validation
//! errors, 3 when an input exceeds a capacity limit.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qualprob::axioms::{audit_soundness, AuditError, Logic, SampleConfig};
use qualprob::decide::{
    enumerate_sat_preferential_with, sat_ip, valid_ip, DecideError, Options, SatResult, Validity,
    Witness, ORACLE_MAX_LETTERS, ORACLE_MAX_STATES,
};
use qualprob::formula::{parse, Formula, Style};
use qualprob::models::Model;
use qualprob::random::{self, FormulaShape};
use qualprob::semantics::{Evaluator, Semantics};
use qualprob::transform::{audit_equivalence, lemma4, lemma5, template_formulas, TransformError};
use rand::Rng;

#[derive(Parser)]
#[command(name = "qualprob", version, about = "Reasoning about comparative likelihood")]
struct Cli {
    /// Print formulas with Unicode connectives.
    #[arg(long, global = true)]
    unicode: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its normalized form, length and depth.
    Parse { formula: String },
    /// Evaluate a formula at a state of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        sem: Semantics,
        #[arg(long)]
        state: String,
        formula: String,
    },
    /// Decide satisfiability over multi-measure models.
    Sat {
        formula: String,
        /// Look for a model with a single measure.
        #[arg(long)]
        single_measure: bool,
        /// Where to write the witness model or the refutation trace.
        #[arg(long, default_value = "witness.json")]
        out: PathBuf,
    },
    /// Decide validity over multi-measure models.
    Valid {
        formula: String,
        #[arg(long)]
        single_measure: bool,
        /// Where to write the countermodel or the refutation trace.
        #[arg(long, default_value = "countermodel.json")]
        out: PathBuf,
    },
    /// Translate a multi-measure model and audit the result.
    Translate {
        construction: Construction,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "translated.json")]
        out: PathBuf,
        /// Number of the model's letters the audit templates range over.
        #[arg(long, default_value_t = 2)]
        template_letters: usize,
    },
    /// Check random axiom instances against random models.
    Fuzz {
        #[arg(long, default_value = "ip")]
        logic: Logic,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random models.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Axiom instances per model.
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
    },
    /// Compare the decision procedure with exhaustive preferential search.
    Oracle {
        /// Formulas to check; random ones are drawn when none are given.
        formulas: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = ORACLE_MAX_STATES)]
        max_states: usize,
        #[arg(long, default_value = "injection")]
        sem: Semantics,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Lemma4,
    Lemma5,
}

enum Failure {
    Usage(String),
    Capacity(String),
}

impl From<DecideError> for Failure {
    fn from(e: DecideError) -> Failure {
        match e {
            DecideError::LetterCap { .. } | DecideError::OracleCap { .. } => Failure::Capacity(e.to_string()),
            DecideError::Witness(_) => Failure::Usage(e.to_string()),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Failure {
        match e {
            TransformError::Capacity { .. } => Failure::Capacity(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn verdict(holds: bool) -> Result<u8, Failure> {
    Ok(if holds { 0 } else { 1 })
}

struct Printer {
    style: Style,
}

impl Printer {
    fn formula(&self, f: &Formula) -> String {
        f.render(self.style)
    }
}

fn read_formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(usage)
}

fn read_model(path: &Path) -> Result<Model, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Model::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = Printer {
        style: if cli.unicode { Style::Unicode } else { Style::Ascii },
    };
    match cli.command {
        Command::Parse { formula } => {
            let f = read_formula(&formula)?;
            println!("{}", out.formula(&f));
            println!("length {} depth {}", f.length(), f.modal_depth());
            Ok(0)
        }
        Command::Eval {
            model,
            sem,
            state,
            formula,
        } => {
            let f = read_formula(&formula)?;
            let model = read_model(&model)?;
            let evaluator = Evaluator::new(&model, sem).map_err(usage)?;
            let index = model
                .states()
                .index_of(&state)
                .ok_or_else(|| usage(format!("unknown state `{state}`")))?;
            let (set, traces) = evaluator.trace(&f).map_err(usage)?;
            let holds = set.contains(index);
            println!("{holds}");
            for t in &traces {
                let v = if t.holds { "true" } else { "false" };
                println!("  {} is {v}: {}", out.formula(&t.formula), t.evidence);
            }
            verdict(holds)
        }
        Command::Sat {
            formula,
            single_measure,
            out: path,
        } => {
            let f = read_formula(&formula)?;
            let opts = Options {
                single_measure,
                ..Options::default()
            };
            match sat_ip(&f, &opts)? {
                SatResult::Sat(w) => {
                    println!("SAT");
                    report_witness(&w, &path)?;
                    verdict(true)
                }
                SatResult::Unsat(r) => {
                    println!("UNSAT");
                    print!("{r}");
                    write_json(&path, &r.to_json())?;
                    println!("trace written to {}", path.display());
                    verdict(false)
                }
            }
        }
        Command::Valid {
            formula,
            single_measure,
            out: path,
        } => {
            let f = read_formula(&formula)?;
            let opts = Options {
                single_measure,
                ..Options::default()
            };
            match valid_ip(&f, &opts)? {
                Validity::Valid(r) => {
                    println!("valid");
                    let mut trace = r.to_json();
                    trace["status"] = "valid".into();
                    write_json(&path, &trace)?;
                    println!("trace written to {}", path.display());
                    verdict(true)
                }
                Validity::Invalid(w) => {
                    println!("invalid");
                    report_witness(&w, &path)?;
                    verdict(false)
                }
            }
        }
        Command::Translate {
            construction,
            model,
            out: path,
            template_letters,
        } => {
            let source = read_model(&model)?;
            let Model::MultiMeasure(m) = &source else {
                return Err(usage(format!(
                    "translation needs a multimeasure model, got {}",
                    source.kind()
                )));
            };
            let (target, target_sem, map) = match construction {
                Construction::Lemma4 => {
                    let c = lemma4(m)?;
                    println!("scale {} with {} counted states", c.scale, c.model.plus().count_ones(..));
                    let map = m.states().names().iter().map(|w| (w.clone(), w.clone())).collect();
                    (Model::Distinguished(c.model), Semantics::Cardinality, map)
                }
                Construction::Lemma5 => {
                    let l = lemma5(m)?;
                    println!("layer sizes {:?}", l.layer_sizes);
                    (Model::Preferential(l.model), Semantics::Injection, l.state_map)
                }
            };
            write_file(&path, &target.to_json())?;
            println!("model written to {}", path.display());
            let letters: Vec<&str> = source.valuation().letters().take(template_letters.min(4)).collect();
            let templates = template_formulas(&letters);
            let report = audit_equivalence(&source, Semantics::MultiMeasure, &target, target_sem, &map, &templates)?;
            println!(
                "audit: {} checks over {} formulas, {} disagreements",
                report.checks,
                templates.len(),
                report.disagreements.len()
            );
            for d in &report.disagreements {
                println!(
                    "  {} at {} / {}: source says {}",
                    out.formula(&d.formula),
                    d.source_state,
                    d.target_state,
                    d.source_value
                );
            }
            verdict(report.is_clean())
        }
        Command::Fuzz {
            logic,
            seed,
            budget,
            instances,
            max_states,
        } => fuzz(logic, seed, budget, instances, max_states, &out),
        Command::Oracle {
            formulas,
            seed,
            budget,
            max_states,
            sem,
        } => oracle(formulas, seed, budget, max_states, sem, &out),
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("traces serialize");
    text.push('\n');
    write_file(path, &text)
}

fn report_witness(w: &Witness, path: &Path) -> Result<(), Failure> {
    let s = &w.stats;
    println!("state {}", w.state);
    println!(
        "{} states (bound {}), {} measures (bound {}), weights up to {} bits",
        s.states, s.state_bound, s.measures, s.measure_bound, s.max_weight_bits
    );
    write_file(path, &Model::MultiMeasure(w.model.clone()).to_json())?;
    println!("model written to {}", path.display());
    Ok(())
}

fn fuzz(
    logic: Logic,
    seed: u64,
    budget: usize,
    instances: usize,
    max_states: usize,
    out: &Printer,
) -> Result<u8, Failure> {
    if max_states == 0 {
        return Err(usage("--max-states must be at least 1"));
    }
    let mut rng = random::rng(seed);
    let config = SampleConfig::default();
    let mut violations = Vec::new();
    for _ in 0..budget {
        let model = match logic.semantics() {
            Semantics::Cardinality => Model::Distinguished(random::distinguished(&mut rng, max_states, &config.letters)),
            _ => Model::Preferential(random::preferential(&mut rng, max_states, &config.letters)),
        };
        let found = audit_soundness(&mut rng, &model, logic, instances, &config).map_err(|e| match e {
            AuditError::Axiom(e) => usage(e),
            AuditError::Eval(e) => usage(e),
        })?;
        violations.extend(found.into_iter().map(|v| (model.clone(), v)));
    }
    println!(
        "{logic}: {} models, {} instances, {} violations",
        budget,
        budget * instances,
        violations.len()
    );
    for (model, v) in violations.iter().take(5) {
        println!("  {} fails at {}: {}", v.schema, v.state, out.formula(&v.formula));
        print!("{}", model.to_json());
    }
    verdict(violations.is_empty())
}

fn oracle(
    texts: Vec<String>,
    seed: u64,
    budget: usize,
    max_states: usize,
    sem: Semantics,
    out: &Printer,
) -> Result<u8, Failure> {
    if !matches!(sem, Semantics::Function | Semantics::Injection) {
        return Err(usage("the oracle searches preferential models: use --sem function or injection"));
    }
    let formulas: Vec<Formula> = if texts.is_empty() {
        let mut rng = random::rng(seed);
        let shape = FormulaShape {
            letters: random::letters(ORACLE_MAX_LETTERS),
            max_length: 16,
            max_depth: 2,
            constants: true,
        };
        (0..budget)
            .map(|_| {
                let letters = rng.random_range(1..=ORACLE_MAX_LETTERS);
                let shape = FormulaShape {
                    letters: shape.letters[..letters].to_vec(),
                    ..shape.clone()
                };
                random::formula(&mut rng, &shape)
            })
            .collect()
    } else {
        texts.iter().map(|t| read_formula(t)).collect::<Result<_, _>>()?
    };
    let mut counts = BTreeMap::<&str, usize>::new();
    let mut disagreements = 0;
    for f in &formulas {
        let found = enumerate_sat_preferential_with(f, max_states, sem)?;
        let decided = sat_ip(f, &Options::default())?.is_sat();
        let label = match (found.is_some(), decided) {
            (true, true) => "both sat",
            (false, false) => "both unsat",
            (false, true) => "sat, no small preferential model",
            (true, false) => {
                disagreements += 1;
                "disagree"
            }
        };
        *counts.entry(label).or_default() += 1;
        if texts.len() == formulas.len() || label == "disagree" {
            println!("{label}: {}", out.formula(f));
        }
    }
    for (label, n) in &counts {
        println!("{label}: {n}");
    }
    verdict(disagreements == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("capacity: {msg}");
            ExitCode::from(3)
        }
    }
}

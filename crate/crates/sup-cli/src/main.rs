//! Command-line interface: typecheck definition files, normalize terms,
//! enumerate outcome distributions, sample measurements, and run the
//! Deutsch demo.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sup_core::parse::{load_file, FileError, SourceFile};
use sup_core::print::{print_prop_opts, print_term_opts, PrintOptions};
use sup_core::reduction::{
    enumerate, normalize, Config, Distribution, Mode, Nondet, ReduceError, DEFAULT_MAX_STEPS,
};
use sup_core::stdlib::{bit, deutsch, BoolFn};
use sup_core::syntax::{canonicalize, Term};

#[derive(Parser)]
#[command(name = "sup", version, about = "Interpreter for a proof-term calculus with superposition")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Typecheck all definitions in a file and print their propositions.
    Check {
        file: PathBuf,
        #[arg(long)]
        unicode: bool,
    },
    /// Normalize a definition and print its normal form.
    Run {
        file: PathBuf,
        #[arg(long)]
        def: String,
        #[arg(long, value_enum, default_value_t = PolicyArg::Sample)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-steps", default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long)]
        unicode: bool,
    },
    /// Enumerate the exact distribution over normal forms.
    Dist {
        file: PathBuf,
        #[arg(long)]
        def: String,
        #[arg(long = "max-steps", default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long)]
        unicode: bool,
    },
    /// Sample normal forms and compare frequencies against `dist`.
    Sample {
        file: PathBuf,
        #[arg(long)]
        def: String,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long = "max-steps", default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long)]
        unicode: bool,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        demo: DemoCmd,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Decide whether a one-bit function is constant with one oracle call.
    Deutsch {
        #[arg(long = "fn", value_enum)]
        function: FnArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Sample,
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FnArg {
    Const0,
    Const1,
    Id,
    Not,
}

impl From<FnArg> for BoolFn {
    fn from(f: FnArg) -> BoolFn {
        match f {
            FnArg::Const0 => BoolFn::Const0,
            FnArg::Const1 => BoolFn::Const1,
            FnArg::Id => BoolFn::Id,
            FnArg::Not => BoolFn::Not,
        }
    }
}

/// 0 ok, 1 parse or type error, 2 step or graph budget exceeded, 3 usage.
enum AppError {
    Input(String),
    Budget(String),
    Usage(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Input(_) => 1,
            AppError::Budget(_) => 2,
            AppError::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Input(m) | AppError::Budget(m) | AppError::Usage(m) => m,
        }
    }
}

impl From<ReduceError> for AppError {
    fn from(e: ReduceError) -> AppError {
        match e {
            ReduceError::StepLimitExceeded | ReduceError::GraphBudgetExceeded => {
                AppError::Budget(e.to_string())
            }
            ReduceError::UndefinedProbability(_) => AppError::Input(e.to_string()),
            ReduceError::InvalidConfig(_) => AppError::Usage(e.to_string()),
        }
    }
}

fn diagnostic(message: &str) {
    let color = std::env::var("SUP_COLOR").ok().is_some_and(|v| v == "1");
    if color {
        eprintln!("\x1b[31merror:\x1b[0m {message}");
    } else {
        eprintln!("error: {message}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Successful --help/--version output keeps exit code 0.
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            diagnostic(e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_defs(path: &PathBuf) -> Result<SourceFile, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("cannot read {}: {e}", path.display())))?;
    load_file(&text).map_err(|e| match e {
        FileError::Parse(p) => AppError::Input(format!("{}: {p}", path.display())),
        FileError::Type { def, error } => {
            AppError::Input(format!("{}: definition `{def}`: {error}", path.display()))
        }
    })
}

fn lookup(file: &SourceFile, name: &str) -> Result<Term, AppError> {
    file.def(name)
        .map(|d| d.body.clone())
        .ok_or_else(|| AppError::Input(format!("no definition named `{name}`")))
}

fn base_config(mode: Mode, max_steps: usize) -> Config {
    let cfg = match mode {
        Mode::Scalar => Config::quantum(),
        Mode::Plain => Config::plain(),
    };
    Config { max_steps, ..cfg }
}

/// 17-significant-digit float form used for reproducible `dist` output.
fn prob17(p: f64) -> String {
    format!("{p:.16e}")
}

fn sorted_lines(dist: &Distribution, mode: Mode, opts: &PrintOptions) -> Vec<(String, f64)> {
    let mut lines: Vec<(String, f64)> = dist
        .iter()
        .map(|(t, p)| (print_term_opts(t, mode, opts), p))
        .collect();
    lines.sort_by(|(s1, p1), (s2, p2)| p2.total_cmp(p1).then_with(|| s1.cmp(s2)));
    lines
}

fn dispatch(cmd: Cmd) -> Result<(), AppError> {
    match cmd {
        Cmd::Check { file, unicode } => {
            let parsed = read_defs(&file)?;
            let opts = PrintOptions { unicode };
            for def in &parsed.defs {
                println!("{} : {}", def.name, print_prop_opts(&def.prop, &opts));
            }
            Ok(())
        }
        Cmd::Run { file, def, policy, seed, max_steps, unicode } => {
            let parsed = read_defs(&file)?;
            let term = lookup(&parsed, &def)?;
            let nondet = match policy {
                PolicyArg::Sample => Nondet::Sample,
                PolicyArg::Left => Nondet::ForceLeft,
                PolicyArg::Right => Nondet::ForceRight,
            };
            let cfg = base_config(parsed.mode, max_steps).with_nondet(nondet);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nf = normalize(&term, &cfg, &mut rng)?;
            println!("{}", print_term_opts(&nf, parsed.mode, &PrintOptions { unicode }));
            Ok(())
        }
        Cmd::Dist { file, def, max_steps, unicode } => {
            let parsed = read_defs(&file)?;
            let term = lookup(&parsed, &def)?;
            let cfg = base_config(parsed.mode, max_steps).with_nondet(Nondet::EnumerateAll);
            let dist = enumerate(&term, &cfg)?;
            let opts = PrintOptions { unicode };
            for (text, p) in sorted_lines(&dist, parsed.mode, &opts) {
                println!("{text} {}", prob17(p));
            }
            Ok(())
        }
        Cmd::Sample { file, def, samples, seed, max_steps, unicode } => {
            let parsed = read_defs(&file)?;
            let term = lookup(&parsed, &def)?;
            let cfg = base_config(parsed.mode, max_steps);
            let expected = enumerate(&term, &cfg.with_nondet(Nondet::EnumerateAll))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts: HashMap<Term, u64> = HashMap::new();
            for _ in 0..samples {
                let nf = normalize(&term, &cfg, &mut rng)?;
                *counts.entry(canonicalize(&nf)).or_insert(0) += 1;
            }
            let opts = PrintOptions { unicode };
            let mut chi2 = 0.0f64;
            let mut rows: Vec<(String, f64, u64)> = Vec::new();
            for (t, p) in expected.iter() {
                let observed = counts.remove(t).unwrap_or(0);
                if p > 0.0 {
                    let e = samples as f64 * p;
                    chi2 += (observed as f64 - e) * (observed as f64 - e) / e;
                } else if observed > 0 {
                    chi2 = f64::INFINITY;
                }
                rows.push((print_term_opts(t, parsed.mode, &opts), p, observed));
            }
            // Outcomes sampled outside the enumerated support.
            for (t, observed) in counts {
                chi2 = f64::INFINITY;
                rows.push((print_term_opts(&t, parsed.mode, &opts), 0.0, observed));
            }
            rows.sort_by(|(s1, p1, _), (s2, p2, _)| p2.total_cmp(p1).then_with(|| s1.cmp(s2)));
            for (text, p, observed) in rows {
                let freq = observed as f64 / samples as f64;
                println!("{text} {observed} {freq:.6} expected {}", prob17(p));
            }
            println!("chi-square {chi2:.6}");
            Ok(())
        }
        Cmd::Demo { demo: DemoCmd::Deutsch { function } } => {
            let f: BoolFn = function.into();
            let term = Term::app(deutsch(), f.term());
            let cfg = Config::quantum().with_nondet(Nondet::EnumerateAll);
            let dist = enumerate(&term, &cfg)?;
            let p_false = dist.probability(&bit(false));
            let p_true = dist.probability(&bit(true));
            let verdict = if dist.len() == 1 && p_false == 1.0 {
                "constant"
            } else if dist.len() == 1 && p_true == 1.0 {
                "balanced"
            } else {
                "inconclusive"
            };
            let lines = sorted_lines(&dist, Mode::Scalar, &PrintOptions::default());
            for (i, (text, p)) in lines.iter().enumerate() {
                let label = match text.as_str() {
                    "inl(*, T)" => "false",
                    "inr(*, T)" => "true",
                    other => other,
                };
                if i + 1 == lines.len() {
                    println!("{label} : {p:?}  => {verdict}");
                } else {
                    println!("{label} : {p:?}");
                }
            }
            Ok(())
        }
    }
}

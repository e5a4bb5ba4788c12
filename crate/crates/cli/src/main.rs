mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use fundgpd::fincat::DEFAULT_FUNCTOR_BUDGET;

/// Finite groupoids, torsors, descent and finite-field Galois computations.
///
/// Document arguments take a path, or `corpus:NAME` for a bundled example
/// (for instance `corpus:category/bz2`).
#[derive(Debug, Parser)]
#[command(name = "fundgpd", version)]
pub struct Cli {
    /// Candidate budget for brute-force searches.
    #[arg(long, global = true, env = "FUNDGPD_BUDGET", default_value_t = DEFAULT_FUNCTOR_BUDGET)]
    pub budget: u64,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite categories and functors.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Products, equalizers and equifiers of groupoids.
    Limit(LimitArgs),
    /// Enveloping groupoid of a finite category.
    Envgpd(EnvgpdArgs),
    /// Cartesian 2-ring instances.
    #[command(subcommand)]
    Topos(ToposCmd),
    /// Torsors and descent.
    #[command(subcommand)]
    Torsors(TorsorsCmd),
    /// Finite-field algebras and Galois torsors.
    #[command(subcommand)]
    Galois(GaloisCmd),
    /// Pro-groupoids.
    #[command(subcommand)]
    Pro(ProCmd),
    /// Runs the acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatCmd {
    /// Validates a category document and describes it.
    Check {
        #[arg(long = "in")]
        input: String,
    },
    /// Decides whether two categories are equivalent.
    Equiv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Enumerates the functor category `Fun(dom, cod)`.
    Functors {
        #[arg(long)]
        dom: String,
        #[arg(long)]
        cod: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LimitKind {
    Product,
    Equalizer,
    Equifier,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    pub kind: LimitKind,
    #[arg(long = "in")]
    pub input: String,
    /// Probe the universal property against the default test groupoids.
    #[arg(long)]
    pub check_universal: bool,
}

#[derive(Debug, Args)]
pub struct EnvgpdArgs {
    #[arg(long = "in")]
    pub input: String,
    /// Coset enumeration step bound.
    #[arg(long, default_value_t = fundgpd::envgpd::DEFAULT_STEP_BOUND)]
    pub bound: u64,
}

#[derive(Debug, Subcommand)]
pub enum ToposCmd {
    /// Checks disjointness and stability of coproducts.
    Good {
        #[arg(long = "in")]
        input: String,
        /// Largest component size probed in set-like instances.
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TorsorsCmd {
    /// Lists torsors up to isomorphism with carriers of at most `bound` elements.
    Enumerate {
        #[arg(long)]
        groupoid: String,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Tests the torsor axioms on a representation document.
    Check {
        #[arg(long = "in")]
        input: String,
    },
    /// Pushes a torsor forward along a functor.
    Push {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        phi: String,
    },
    /// Runs both descent round trips for the equalizer of `phi, psi: groupoid → target`,
    /// over every torsor and every descent datum up to the bound.
    Descend {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        groupoid: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GaloisCmd {
    /// Classifies `Γ`-torsor algebras over `F_q`.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        q: usize,
    },
    /// Primitive idempotents of an algebra.
    Pierce {
        #[arg(long = "in")]
        input: String,
    },
    /// Whether an algebra is separable.
    Separable {
        #[arg(long = "in")]
        input: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProCmd {
    /// Hom from a pro-groupoid (`zhat:N` or `const:DOC`) to a finite groupoid.
    Hom {
        #[arg(long)]
        pro: String,
        #[arg(long)]
        target: String,
    },
    /// Compares the field classification with `Hom(Ẑ, BΓ)`.
    Crosscheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        q: usize,
    },
    /// Surjection-counting evidence against a representing pro-category.
    Nonrep,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Stated instance sizes only.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = fundgpd::acceptance::DEFAULT_SEED)]
    pub seed: u64,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match commands::dispatch(&cli) {
        Ok((name, rec, code)) => {
            let passed = code == 0;
            let timing = cli.timing.then(|| start.elapsed().as_millis() as u64);
            let report = rec.finish(name, passed, timing);
            let text = serde_json::to_string_pretty(&serde_json::to_value(&report).expect("report serializes"))
                .expect("report renders");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(commands::EXIT_USAGE);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nilbench::classify::{self, ClassifyOptions, PVerdict, ReportFormat};
use nilbench::engine::{self, OracleMode};
use nilbench::error::Error;
use nilbench::gallery;
use nilbench::green;
use nilbench::input::parse_input;
use nilbench::schutz;
use nilbench::semigroup::GeneratedSemigroup;
use nilbench::stallings::{self, ExtendVerdict, PrimeStrategy, SubgroupBasis};

#[derive(Parser)]
#[command(name = "nilbench", about = "Nilpotency classification for finite semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full membership report for the semigroup in FILE
    Classify(ClassifyArgs),
    /// Green's relations summary for the semigroup in FILE
    Green { file: PathBuf },
    /// Regular-class Schützenberger graphs for the semigroup in FILE
    Schutz {
        file: PathBuf,
        /// Emit graphs in dot format
        #[arg(long)]
        dot: bool,
    },
    /// Subgroup-graph computations on a basis file (one word per line,
    /// lowercase letters forward, uppercase inverse)
    Stallings {
        #[command(subcommand)]
        op: StallingsOp,
    },
    /// Named example semigroups
    Gallery {
        #[command(subcommand)]
        op: GalleryOp,
    },
    /// Brute-force tuple-cycle oracle for the semigroup in FILE
    Oracle {
        file: PathBuf,
        /// Largest tuple arity searched
        #[arg(long = "t-max", default_value_t = 4)]
        t_max: usize,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    file: PathBuf,
    /// Output format: text or json
    #[arg(long, default_value = "text")]
    format: String,
    /// Comma-separated checks to skip: mnstar, smncirc, jmgnil
    #[arg(long, value_delimiter = ',')]
    skip: Vec<String>,
    /// Evaluation budget override (also settable via NILBENCH_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum StallingsOp {
    /// Fold the basis into its canonical subgroup graph
    Fold { basisfile: PathBuf },
    /// Pro-p closure of the folded graph
    Closure {
        basisfile: PathBuf,
        #[arg(short)]
        p: u64,
    },
    /// Closure under all finite nilpotent-group quotients
    Nilclosure { basisfile: PathBuf },
    /// Decide whether the folded graph extends to such a closure unchanged
    Extendible { basisfile: PathBuf },
}

#[derive(Subcommand)]
enum GalleryOp {
    /// List the available named semigroups
    List,
    /// Build a named semigroup and print its size
    Build { id: Vec<String> },
}

fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::BudgetExceeded(_) | Error::CapExceeded(..) => ExitCode::from(2),
        Error::InternalInconsistency(_) => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn load_semigroup(path: &PathBuf) -> Result<GeneratedSemigroup, Error> {
    let text = fs::read_to_string(path)?;
    parse_input(&text)
}

fn load_basis(path: &PathBuf) -> Result<(SubgroupBasis, usize), Error> {
    let text = fs::read_to_string(path)?;
    let mut basis = SubgroupBasis::new();
    let mut n_letters = 0;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let word = stallings::parse_word(line)?;
        for &(l, _) in &word {
            n_letters = n_letters.max(l + 1);
        }
        basis.push(word);
    }
    if basis.is_empty() {
        return Err(Error::Semantic("empty basis file".into()));
    }
    Ok((basis, n_letters))
}

fn run_classify(args: &ClassifyArgs) -> Result<ExitCode, Error> {
    if let Some(b) = args.budget {
        std::env::set_var("NILBENCH_BUDGET", b.to_string());
    }
    let s = load_semigroup(&args.file)?;
    let options = ClassifyOptions {
        skip_mn_star: args.skip.iter().any(|s| s == "mnstar"),
        skip_smn_circ: args.skip.iter().any(|s| s == "smncirc"),
        skip_jm_gnil: args.skip.iter().any(|s| s == "jmgnil"),
    };
    let report = classify::classify(&s, &options)?;
    let format = match args.format.as_str() {
        "text" => ReportFormat::Text,
        "json" => ReportFormat::Json,
        other => return Err(Error::BadParameter(format!("unknown format `{other}`"))),
    };
    println!("{}", classify::emit_report(&report, format)?);
    let budget_limited = |v: &PVerdict| matches!(v, PVerdict::Unknown(r) if r.contains("budget"));
    let hit_budget = budget_limited(&report.mn_star)
        || budget_limited(&report.smn_circ_2)
        || matches!(&report.malcev_nilpotent, engine::Verdict::Unknown(r) if r.contains("budget"))
        || matches!(&report.strongly_malcev_nilpotent, engine::Verdict::Unknown(r) if r.contains("budget"));
    Ok(if hit_budget { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn run_green(file: &PathBuf) -> Result<ExitCode, Error> {
    let s = load_semigroup(file)?;
    let g = green::greens_structure(&s);
    let series = green::principal_series(&s, &g);
    println!("size        : {}", s.size());
    println!("R-classes   : {}", g.n_r);
    println!("L-classes   : {}", g.n_l);
    println!("J-classes   : {} ({} regular)", g.n_j, g.regular_j.iter().filter(|&&r| r).count());
    println!("H-classes   : {}", g.n_h);
    println!("idempotents : {}", g.idempotents.len());
    println!("series depth: {}", series.depth());
    Ok(ExitCode::SUCCESS)
}

fn run_schutz(file: &PathBuf, dot: bool) -> Result<ExitCode, Error> {
    let s = load_semigroup(file)?;
    let g = green::greens_structure(&s);
    for graph in schutz::schutz_graphs(&s, &g) {
        let side = match graph.side {
            schutz::Side::Right => "right",
            schutz::Side::Left => "left",
        };
        println!(
            "{side} class {} : {} vertices, inverse = {}",
            graph.class_id,
            graph.vertices.len(),
            graph.is_inverse
        );
        if dot {
            println!("{}", graph.dot(&s));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_stallings(op: &StallingsOp) -> Result<ExitCode, Error> {
    match op {
        StallingsOp::Fold { basisfile } => {
            let (basis, n_letters) = load_basis(basisfile)?;
            let aut = stallings::fold(&basis, n_letters)?;
            print!("{}", aut.dot());
        }
        StallingsOp::Closure { basisfile, p } => {
            let (basis, n_letters) = load_basis(basisfile)?;
            let aut = stallings::fold(&basis, n_letters)?;
            let cl = stallings::p_closure(&aut, *p)?;
            println!("stages: {}", cl.stages.len());
            print!("{}", cl.automaton.dot());
        }
        StallingsOp::Nilclosure { basisfile } => {
            let (basis, n_letters) = load_basis(basisfile)?;
            let aut = stallings::fold(&basis, n_letters)?;
            let nc = stallings::nil_closure(&aut, &PrimeStrategy::default())?;
            println!("primes: {:?}  exact: {}", nc.primes, nc.exact);
            print!("{}", nc.automaton.dot());
        }
        StallingsOp::Extendible { basisfile } => {
            let (basis, n_letters) = load_basis(basisfile)?;
            let aut = stallings::fold(&basis, n_letters)?;
            match stallings::is_gnil_extendible(&aut, &PrimeStrategy::default())? {
                ExtendVerdict::Yes => println!("extendible"),
                ExtendVerdict::No(r, u) => {
                    println!("not extendible: vertices {r} and {u} collapse")
                }
                ExtendVerdict::UnknownAtBound => println!("unknown at prime bound"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_gallery(op: &GalleryOp) -> Result<ExitCode, Error> {
    match op {
        GalleryOp::List => {
            for entry in gallery::list() {
                println!("{entry}");
            }
        }
        GalleryOp::Build { id } => {
            let id = gallery::parse(&id.join(" "))?;
            let s = gallery::build(&id)?;
            println!("size: {}", s.size());
            println!("generators: {}", s.generator_count());
            println!("idempotents: {}", s.idempotents().len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(file: &PathBuf, t_max: usize) -> Result<ExitCode, Error> {
    let s = load_semigroup(file)?;
    for (label, mode) in [("pair recursion", OracleMode::Mn), ("tuple recursion", OracleMode::Smn)] {
        match engine::oracle_not_nilpotent(&s, mode, t_max)? {
            Some(w) => println!(
                "{label}: NOT nilpotent — t = {}, tuple {:?}, word length {}",
                w.t,
                w.tuple,
                w.word.len()
            ),
            None => println!("{label}: nilpotent up to arity {t_max}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Green { file } => run_green(file),
        Command::Schutz { file, dot } => run_schutz(file, *dot),
        Command::Stallings { op } => run_stallings(op),
        Command::Gallery { op } => run_gallery(op),
        Command::Oracle { file, t_max } => run_oracle(file, *t_max),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

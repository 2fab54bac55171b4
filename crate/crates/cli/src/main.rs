use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use loopcat::correspond::{bruck_to_gamma, bruck_to_quandle, gamma_to_bruck, quandle_to_bruck};
use loopcat::iso::{are_isomorphic, quandle_isomorphism};
use loopcat::loops::text::{parse, parse_loop, ParsedTable};
use loopcat::pipeline::{
    classify_extensions, has_catalog, Catalog, CatalogKind, EnumerationJob, JobSpec,
};
use loopcat::symmetry::DEFAULT_COSET_LIMIT;
use loopcat::{Error, Fp, LoopTable, QuandleTable, Variety};

#[derive(Parser)]
#[command(name = "loopcat", version, about = "Enumerate Bruck loops, CA loops and involutory latin quandles of prime-power order")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all structures of order p^k, level by level.
    Enumerate(EnumerateArgs),
    /// Classify the central extensions of Z_p by a single factor.
    Extend(ExtendArgs),
    /// Test a table against a variety.
    Check {
        #[arg(long, value_enum)]
        variety: Kind,
        file: PathBuf,
    },
    /// Apply one of the Bruck loop correspondences to a table.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        /// Base point when turning a quandle into a Bruck loop.
        #[arg(long, default_value_t = 0)]
        base: usize,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        file: PathBuf,
    },
    /// Decide whether two tables are isomorphic and print a witness.
    Iso { first: PathBuf, second: PathBuf },
    /// Inspect catalog directories.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Continue an interrupted enumeration.
    Resume { dir: PathBuf },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_enum)]
    variety: Kind,
    #[arg(long)]
    prime: u32,
    /// Target order is prime^exponent.
    #[arg(long)]
    exponent: u32,
    /// Catalog of the order below the target; omitted means start at order 1.
    #[arg(long)]
    factors: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_COSET_LIMIT)]
    coset_limit: u64,
    /// Reuse the checkpoints of an earlier run in the output directory.
    #[arg(long)]
    resume: bool,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long, value_enum)]
    variety: LoopKind,
    #[arg(long)]
    prime: u32,
    #[arg(long, default_value_t = DEFAULT_COSET_LIMIT)]
    coset_limit: u64,
    /// Directory receiving one table file per extension.
    #[arg(long)]
    out: Option<PathBuf>,
    factor: PathBuf,
}

#[derive(Subcommand)]
enum CatalogCommand {
    List { dir: PathBuf },
    Verify { dir: PathBuf },
    Diff { left: PathBuf, right: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bruck,
    Ca,
    Quandle,
}

impl Kind {
    fn catalog_kind(self) -> CatalogKind {
        match self {
            Kind::Bruck => CatalogKind::Bruck,
            Kind::Ca => CatalogKind::CommutativeAutomorphic,
            Kind::Quandle => CatalogKind::Quandle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LoopKind {
    Bruck,
    Ca,
}

impl LoopKind {
    fn variety(self) -> Variety {
        match self {
            LoopKind::Bruck => Variety::Bruck,
            LoopKind::Ca => Variety::CommutativeAutomorphic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Quandle,
    Bruck,
    Gamma,
}

/// Exit status for answers that are "no" rather than failures.
struct Negative;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Negative)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Internal(_))));
            ExitCode::from(if internal { 3 } else { 2 })
        }
    }
}

type Outcome = anyhow::Result<Result<(), Negative>>;

fn run(command: Command) -> Outcome {
    match command {
        Command::Enumerate(a) => enumerate(a),
        Command::Extend(a) => extend(a),
        Command::Check { variety, file } => check(variety, &file),
        Command::Convert { to, base, out, file } => convert(to, base, out.as_deref(), &file),
        Command::Iso { first, second } => iso(&first, &second),
        Command::Catalog(c) => catalog(c),
        Command::Resume { dir } => finish(EnumerationJob::resume(&dir)?.run()?, &dir),
    }
}

fn read_table(path: &Path) -> anyhow::Result<ParsedTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn enumerate(a: EnumerateArgs) -> Outcome {
    if a.out.join(EnumerationJob::JOB_DIR).exists() && !a.resume {
        bail!("{} already holds a job; pass --resume to continue it", a.out.display());
    }
    if let Some(f) = &a.factors {
        if !has_catalog(f) {
            bail!("{} is not a catalog directory", f.display());
        }
    }
    let spec = JobSpec {
        kind: a.variety.catalog_kind(),
        prime: a.prime,
        exponent: a.exponent,
        factors: a.factors,
        coset_limit: a.coset_limit,
    };
    finish(EnumerationJob::new(&a.out, spec).run()?, &a.out)
}

fn finish(c: Catalog, dir: &Path) -> Outcome {
    println!("{} {} of order {} written to {}", c.len(), c.kind, c.order, dir.display());
    for r in &c.refused {
        println!("refused factor {}: {}", r.factor_id, r.reason);
    }
    Ok(if c.is_complete() { Ok(()) } else { Err(Negative) })
}

fn extend(a: ExtendArgs) -> Outcome {
    let fp = Fp::new(a.prime)?;
    let f = parse_loop(&fs::read_to_string(&a.factor)?)?;
    let v = a.variety.variety();
    let c = classify_extensions(&f, fp, v, a.coset_limit)?;
    println!("dim B {}", c.b_dim);
    println!("dim C {}", c.c_dim);
    println!("orbits {}", c.representatives.len());
    println!("extensions {}", c.loops.len());
    if let Some(dir) = a.out {
        fs::create_dir_all(&dir)?;
        for (i, q) in c.loops.iter().enumerate() {
            fs::write(dir.join(format!("{:06}.txt", i + 1)), q.to_text())?;
        }
    }
    Ok(Ok(()))
}

fn check(kind: Kind, file: &Path) -> Outcome {
    let ok = match (kind, read_table(file)?) {
        (Kind::Quandle, ParsedTable::Quandle(q)) => report("involutory latin quandle", QuandleTable::check_axioms(q.table())),
        (Kind::Quandle, ParsedTable::Loop(_)) => bail!("expected a quandle table"),
        (_, ParsedTable::Quandle(_)) => bail!("expected a loop table"),
        (Kind::Bruck, ParsedTable::Loop(q)) => {
            report_bool("left Bol", q.is_left_bol())
                & report("automorphic inverse property", aip(&q))
                & report("left Bruck", Variety::Bruck.check_member(&q))
        }
        (Kind::Ca, ParsedTable::Loop(q)) => {
            report_bool("commutative", q.is_commutative())
                & report_bool("automorphic", q.is_automorphic())
                & report("commutative automorphic", Variety::CommutativeAutomorphic.check_member(&q))
        }
    };
    Ok(if ok { Ok(()) } else { Err(Negative) })
}

fn aip(q: &LoopTable) -> loopcat::Result<()> {
    match q.has_automorphic_inverse_property()? {
        true => Ok(()),
        false => Err(Error::Precondition("(xy)^-1 = x^-1 y^-1 fails".into())),
    }
}

fn report_bool(name: &str, holds: bool) -> bool {
    println!("{name}: {}", if holds { "yes" } else { "no" });
    holds
}

fn report(name: &str, r: loopcat::Result<()>) -> bool {
    match r {
        Ok(()) => report_bool(name, true),
        Err(e) => {
            println!("{name}: no ({e})");
            false
        }
    }
}

fn convert(to: Target, base: usize, out: Option<&Path>, file: &Path) -> Outcome {
    let text = match (to, read_table(file)?) {
        (Target::Quandle, ParsedTable::Loop(b)) => bruck_to_quandle(&b)?.to_text(),
        (Target::Bruck, ParsedTable::Quandle(q)) => quandle_to_bruck(&q, base)?.to_text(),
        (Target::Bruck, ParsedTable::Loop(g)) => gamma_to_bruck(&g)?.to_text(),
        (Target::Gamma, ParsedTable::Loop(b)) => bruck_to_gamma(&b)?.to_text(),
        (_, ParsedTable::Quandle(_)) => bail!("only `--to bruck` accepts a quandle"),
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(Ok(()))
}

fn iso(first: &Path, second: &Path) -> Outcome {
    let witness = match (read_table(first)?, read_table(second)?) {
        (ParsedTable::Loop(a), ParsedTable::Loop(b)) => are_isomorphic(&a, &b),
        (ParsedTable::Quandle(a), ParsedTable::Quandle(b)) => quandle_isomorphism(&a, &b),
        _ => bail!("cannot compare a loop with a quandle"),
    };
    match witness {
        Some(phi) => {
            println!("isomorphic");
            let images: Vec<String> = phi.images().iter().map(|x| x.to_string()).collect();
            println!("{}", images.join(" "));
            Ok(Ok(()))
        }
        None => {
            println!("not isomorphic");
            Ok(Err(Negative))
        }
    }
}

fn catalog(c: CatalogCommand) -> Outcome {
    match c {
        CatalogCommand::List { dir } => {
            let cat = load(&dir)?;
            println!("{} of order {} over GF({}), {} entries", cat.kind, cat.order, cat.prime, cat.len());
            for r in &cat.refused {
                println!("refused factor {}: {}", r.factor_id, r.reason);
            }
            for (e, q) in cat.entries.iter().zip(cat.loops()?) {
                println!(
                    "{}\tfactor {}\tcenter {}\t{}",
                    e.id,
                    e.factor_id,
                    q.center().len(),
                    &e.fingerprint[..16]
                );
            }
            Ok(Ok(()))
        }
        CatalogCommand::Verify { dir } => {
            let cat = load(&dir)?;
            cat.verify()?;
            println!("ok: {} entries", cat.len());
            Ok(Ok(()))
        }
        CatalogCommand::Diff { left, right } => {
            let d = load(&left)?.diff(&load(&right)?)?;
            for (i, j) in &d.matched {
                println!("{i} = {j}");
            }
            for i in &d.only_left {
                println!("{i} only in {}", left.display());
            }
            for j in &d.only_right {
                println!("{j} only in {}", right.display());
            }
            Ok(if d.is_empty() { Ok(()) } else { Err(Negative) })
        }
    }
}

fn load(dir: &Path) -> anyhow::Result<Catalog> {
    if !has_catalog(dir) {
        bail!("{} is not a catalog directory", dir.display());
    }
    Ok(Catalog::load(dir)?)
}

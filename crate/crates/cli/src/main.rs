use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use cohen_core::cohen::closed_two_coordinate_power;
use cohen_core::exponents::cohen_exponent;
use cohen_core::notation::parse_formal_element;
use cohen_core::phi::{binom_mod_p, phi};
use cohen_core::targets::{load_model, table_from_env};
use cohen_core::verify::{bracket_order_experiment, run_suite, Status, SuiteConfig, SUITES};
use cohen_core::{CohenElement, Error, SpaceDescriptor, TargetModel};

/// Arithmetic in truncated total Cohen groups and p-primary exponent queries.
#[derive(Parser, Debug)]
#[command(name = "cohenexp", version)]
struct Cli {
    /// Tab-separated output.
    #[arg(long, global = true)]
    tsv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product of two elements.
    Mul {
        model: PathBuf,
        a: String,
        b: String,
    },
    /// M-th power of an element.
    Pow {
        model: PathBuf,
        elem: String,
        exponent: BigUint,
        /// Assemble a two-coordinate power from its Type I/II/III parts and
        /// cross-check it against iteration.
        #[arg(long)]
        closed_form: bool,
    },
    /// Order of an element.
    Order { model: PathBuf, elem: String },
    /// p-primary exponent of [Ω(S^{r+1}), Ω(Y)].
    Exp {
        /// S:N, SF:n, RP:n, CP:n, HP:n, HP:inf, prod(A,B,...), cover(A)
        #[arg(long)]
        space: SpaceDescriptor,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        p: u64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// The coefficient Φ_{l,k}.
    Phi { l: u64, k: u64 },
    /// C(m, n) mod p.
    Binom {
        m: u64,
        n: u64,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Exploratory searches.
    Experiment {
        #[command(subcommand)]
        kind: Experiment,
    },
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Orders of the weight-2 and weight-3 bracket symbols of a model.
    BracketOrder {
        #[arg(long)]
        model: PathBuf,
    },
}

/// Failure of a command that parsed correctly.
struct Failure {
    message: String,
    output: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            message: e.to_string(),
            output: String::new(),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn load(model: &Path) -> Result<Arc<TargetModel>, Error> {
    load_model(model).map(Arc::new)
}

/// An element argument: a file path, or inline text with `;` between lines.
fn element(model: &Arc<TargetModel>, arg: &str) -> Result<CohenElement<TargetModel>, Error> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| Error::Io {
            path: arg.to_string(),
            message: e.to_string(),
        })?
    } else {
        arg.replace(';', "\n")
    };
    parse_formal_element(model, &text)
}

fn print_element(a: &CohenElement<TargetModel>, tsv: bool) -> String {
    if !tsv {
        return format!("{a}\n");
    }
    if a.is_identity() {
        return "identity\n".into();
    }
    a.support()
        .into_iter()
        .map(|j| format!("{j}\t{}\n", a.coord(j)))
        .collect()
}

fn pow(model: &Path, elem: &str, exponent: &BigUint, closed_form: bool, tsv: bool) -> Outcome {
    let m = load(model)?;
    let a = element(&m, elem)?;
    let power = a.pow_big(exponent);
    if !closed_form {
        return Ok(print_element(&power, tsv));
    }
    let support = a.support();
    let [n, k] = support[..] else {
        return Err(Error::InvalidArgument(format!(
            "--closed-form needs exactly two nonzero coordinates, got {}",
            support.len()
        ))
        .into());
    };
    let e = u64::try_from(exponent).map_err(|_| Error::InvalidArgument("--closed-form exponent too large".into()))?;
    let closed = closed_two_coordinate_power(&m, n, a.coord(n), k, a.coord(k), e)?;
    let iterated = if e <= 10_000 { a.pow_iterated(e) } else { power };
    let mut out = print_element(&closed, tsv);
    if closed == iterated {
        out.push_str(if tsv { "check\tagrees\n" } else { "# agrees with iteration\n" });
        Ok(out)
    } else {
        Err(Failure {
            message: "closed form disagrees with iteration".into(),
            output: out,
        })
    }
}

fn exp(space: &SpaceDescriptor, r: u32, p: u64, tsv: bool) -> Outcome {
    let table = table_from_env()?;
    let v = cohen_exponent(&table, space, r, p)?;
    let mut out = String::new();
    if tsv {
        let (lo, hi) = v.bounds();
        writeln!(out, "{space}\t{p}\t{v}\t{lo}\t{hi}").unwrap();
        for rule in v.provenance() {
            writeln!(out, "rule\t{}\t{}", rule.tag(), rule.statement()).unwrap();
        }
    } else {
        writeln!(out, "{v}").unwrap();
        for rule in v.provenance() {
            writeln!(out, "  {}: {}", rule.tag(), rule.statement()).unwrap();
        }
    }
    Ok(out)
}

fn verify(suite: &str, seed: u64, cases: usize, tsv: bool) -> Outcome {
    let table = table_from_env()?;
    let checks = run_suite(suite, SuiteConfig { seed, cases }, &table)?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in &checks {
        if tsv {
            writeln!(out, "{}\t{}\t{}", c.status, c.name, c.detail).unwrap();
        } else {
            writeln!(out, "{:<4}  {:<width$}  {}", c.status, c.name, c.detail).unwrap();
        }
    }
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    if failed == 0 {
        Ok(out)
    } else {
        Err(Failure {
            message: format!("{failed} of {} checks failed in suite '{suite}'", checks.len()),
            output: out,
        })
    }
}

fn bracket_order(model: &Path, tsv: bool) -> Outcome {
    let m = load(model)?;
    let mut out = String::new();
    if !tsv {
        out.push_str("# orders in the formal model: upper bounds, not genuine Whitehead product orders\n");
    }
    for (s, o) in bracket_order_experiment(&m) {
        let slot = m.symbol_slot(&s);
        if tsv {
            writeln!(out, "{s}\t{slot}\t{o}").unwrap();
        } else {
            writeln!(out, "{s:<16} slot {slot:<3} order {o}").unwrap();
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Outcome {
    let tsv = cli.tsv;
    match cli.command {
        Command::Mul { model, a, b } => {
            let m = load(&model)?;
            let x = element(&m, &a)?;
            let y = element(&m, &b)?;
            Ok(print_element(&x.mul(&y)?, tsv))
        }
        Command::Pow {
            model,
            elem,
            exponent,
            closed_form,
        } => pow(&model, &elem, &exponent, closed_form, tsv),
        Command::Order { model, elem } => {
            let m = load(&model)?;
            Ok(format!("{}\n", element(&m, &elem)?.order()))
        }
        Command::Exp { space, r, p } => exp(&space, r, p, tsv),
        Command::Verify { suite, seed, cases } => verify(&suite, seed, cases, tsv),
        Command::Phi { l, k } => Ok(format!("{}\n", phi(l, k)?)),
        Command::Binom { m, n, modulus } => Ok(format!("{}\n", binom_mod_p(m, n, modulus)?)),
        Command::Experiment {
            kind: Experiment::BracketOrder { model },
        } => bracket_order(&model, tsv),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            print!("{}", f.output);
            eprintln!("error: {}", f.message);
            ExitCode::from(1)
        }
    }
}

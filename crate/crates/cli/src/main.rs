//! `hyperlat`: build SU(3) quantum modules, print Gram matrices and lattice
//! invariants, compute theta series and run the reference checks.
//!
//! Exit codes: 0 success, 1 verification or invariant failure, 2 usage or
//! domain error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperlat_core::catalog::{self, get_module, parse_module};
use hyperlat_core::golden;
use hyperlat_core::lattice;
use hyperlat_core::ribbon::{BasisChoice, Ribbon};
use hyperlat_core::theta;
use hyperlat_core::verify::{run_checks, select, Golden, Suite, Verifier};
use hyperlat_core::Error;

use output::{Format, GramReport};

/// Coefficient count used when no reference prefix exists for a module.
const FALLBACK_MAX_COEFF: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "hyperlat", version, about = "Higher-root lattices of SU(3) quantum modules")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List supported modules with their ranks (the default).
    List,
    /// Print the Gram matrix of a module with its determinant, level and SNF.
    Gram {
        #[arg(long)]
        module: String,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value = "B1")]
        basis: BasisChoice,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Theta-series coefficients c_0..c_M in powers of q².
    Theta {
        #[arg(long)]
        module: String,
        #[arg(long)]
        level: u32,
        /// Defaults to the length of the reference prefix for the module.
        #[arg(long = "max-coeff")]
        max_coeff: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the reference checks and print PASS/FAIL for each.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, requires = "level")]
        module: Option<String>,
        #[arg(long, requires = "module")]
        level: Option<u32>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a module data file.
    ValidateModule { path: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Invariant(_) | Error::Internal(_) => 1,
        Error::Domain(_) | Error::Unsupported(_) | Error::Parse { .. } | Error::Io(_) => 2,
    }
}

fn default_threads(threads: Option<usize>) -> usize {
    threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn module_label(family: &str, level: u32) -> String {
    if family.starts_with('E') {
        family.to_string()
    } else {
        format!("{family}{level}")
    }
}

fn list() -> Result<(), Error> {
    let mut entries: Vec<(&str, u32)> = (0..=6).map(|k| ("A", k)).collect();
    entries.extend(catalog::bundled_modules());
    for (name, k) in entries {
        if let Some(r) = catalog::expected_rank(name, k) {
            println!("{name} {k} → r_E={r}, 𝔯={}", 2 * r);
        }
    }
    Ok(())
}

fn gram(module: &str, level: u32, basis: BasisChoice, format: Format) -> Result<(), Error> {
    let m = get_module(module, level)?;
    let ribbon = Ribbon::new(&m)?;
    let points = ribbon.basis(basis)?;
    if !ribbon.generates_lattice(&points)? {
        return Err(Error::Unsupported(format!(
            "positions of {basis:?} span a proper sublattice for {}",
            module_label(module, level)
        )));
    }
    let g = ribbon.gram_matrix(&points);
    let invariants = lattice::invariants(&g)?;
    let basis_name = format!("{basis:?}");
    let report = GramReport { module, level, basis: &basis_name, gram: &g, invariants: &invariants };
    print!("{}", output::gram(&report, format));
    Ok(())
}

fn theta_cmd(module: &str, level: u32, max_coeff: Option<usize>, threads: Option<usize>, format: Format) -> Result<(), Error> {
    let default = golden::theta_prefix(module, level)
        .filter(|p| p.rescale == 1)
        .map_or(FALLBACK_MAX_COEFF, |p| p.checked - p.slow_tail - 1);
    let m = max_coeff.unwrap_or(default);
    if m > default {
        eprintln!(
            "warning: --max-coeff {m} is beyond the default {default} for {}; running time grows steeply with M",
            module_label(module, level)
        );
    }
    let g = hyperlat_core::ribbon::module_gram(&get_module(module, level)?, BasisChoice::B1)?;
    let series = theta::theta_coefficients(&g, m, default_threads(threads))?;
    print!("{}", output::theta(module, level, &series.coefficients, format));
    Ok(())
}

fn verify(suite: Suite, module: Option<(String, u32)>, threads: Option<usize>) -> Result<bool, Error> {
    let golden = Golden::bundled();
    let filter = module.as_ref().map(|(f, k)| (f.as_str(), *k));
    let checks = select(&golden, suite, filter);
    if checks.is_empty() {
        let (f, k) = filter.unwrap_or(("?", 0));
        return Err(Error::Domain(format!("no checks for module {f} at level {k}")));
    }
    let verifier = Verifier::new(golden, default_threads(threads));
    let outcomes = run_checks(&verifier, &checks, |o| println!("{o}"));
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    println!("{} of {} checks passed", outcomes.len() - failed.len(), outcomes.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
    }
    Ok(failed.is_empty())
}

fn validate_module(path: &PathBuf) -> Result<(), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let m = parse_module(&text)?;
    let check = || -> Result<String, Error> {
        m.validate()?;
        let ribbon = Ribbon::new(&m)?;
        let g = ribbon.gram_matrix(&ribbon.basis(BasisChoice::B1)?);
        let inv = lattice::invariants(&g)?;
        Ok(format!(
            "r_E = {}, 𝔯 = {}, |R| = {}, Δ = {} = {}, ℓ = {}",
            m.rank(),
            inv.dimension,
            ribbon.root_count(),
            inv.determinant,
            output::factored(&inv.determinant),
            inv.modular_level
        ))
    };
    match check() {
        Ok(summary) => {
            println!("PASS {} (level {}): {summary}", m.name, m.level);
            Ok(())
        }
        Err(e) => {
            println!("FAIL {} (level {}): {e}", m.name, m.level);
            Err(e)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command.unwrap_or(Command::List) {
        Command::List => list().map(|()| true),
        Command::Gram { module, level, basis, format } => gram(&module, level, basis, format).map(|()| true),
        Command::Theta { module, level, max_coeff, threads, format } => {
            theta_cmd(&module, level, max_coeff, threads, format).map(|()| true)
        }
        Command::Verify { suite, module, level, threads } => verify(suite, module.zip(level), threads),
        Command::ValidateModule { path } => validate_module(&path).map(|()| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

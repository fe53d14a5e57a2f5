use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use jacring::cli::{parse_range, render_text, run_path, Command, Flags};

/// Graded Jacobian rings, Koszul cohomology and the infinitesimal Torelli
/// test for hypersurfaces with simple singularities.
#[derive(Parser, Debug)]
#[command(name = "jacring", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Instance file (TOML).
    instance: PathBuf,
    /// Inclusive degree range `a..b`.
    #[arg(long, value_parser = parse_range_arg)]
    degree_range: Option<(i64, i64)>,
    #[arg(long, allow_negative_numbers = true)]
    degree: Option<i64>,
    /// Largest jet order for the determinacy loop.
    #[arg(long)]
    nmax: Option<u32>,
    /// Largest monomial basis size.
    #[arg(long)]
    budget: Option<usize>,
    /// Write the machine-readable report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Error instead of warning on odd n.
    #[arg(long)]
    strict_parity: bool,
}

fn parse_range_arg(s: &str) -> Result<(i64, i64), String> {
    parse_range(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let flags = Flags {
        degree_range: args.degree_range,
        degree: args.degree,
        nmax: args.nmax,
        budget: args.budget,
        strict_parity: args.strict_parity,
    };
    let doc = run_path(args.command, &args.instance, &flags);
    print!("{}", render_text(&doc));
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, doc.to_json()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(doc.canonical.exit_code as u8)
}

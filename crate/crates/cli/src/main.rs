use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hyperoct_cli::{construct, genus_table, search_min, verify_file, write_certificate, CliError};

#[derive(Parser)]
#[command(
    name = "hyperoct",
    version,
    about = "Strong symmetric genus of the hyperoctahedral groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, |B_n|, minimal signature and genus for a range of degrees.
    GenusTable {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Build and certify a minimal generating pair of B_n.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the stabilizer-chain check above n = 60.
        #[arg(long)]
        no_chain_verify: bool,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file from scratch.
    Verify { path: PathBuf },
    /// Exhaustively determine the minimal signature of B_n for small n.
    SearchMin {
        #[arg(long)]
        n: usize,
        /// Allow n = 7 and n = 8.
        #[arg(long)]
        long: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenusTable { from, to } => print!("{}", genus_table(from, to)?),
        Command::Construct {
            n,
            seed,
            no_chain_verify,
            out,
        } => {
            let text = construct(n, seed, !no_chain_verify)?;
            match out {
                Some(path) => {
                    write_certificate(&path, &text)?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
        }
        Command::Verify { path } => {
            let file = verify_file(&path)?;
            println!(
                "ok: B_{} pair with signature {} and genus {}",
                file.n, file.signature, file.genus
            );
        }
        Command::SearchMin { n, long } => print!("{}", search_min(n, long)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zsf::reports::{
    cmd_check_certificate, cmd_invariant, cmd_table, cmd_verify, CommandOutput, Flags, Format,
    EXIT_USAGE,
};

/// Zero-sum invariants, lemma checks and certificates for finite abelian groups.
#[derive(Parser)]
#[command(name = "zsf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: GlobalFlags,
}

#[derive(Args)]
struct GlobalFlags {
    /// Largest group order a search may take on.
    #[arg(long, global = true)]
    max_order: Option<u32>,
    /// Stop searches after this many seconds and report a bound.
    #[arg(long, global = true)]
    timeout_sec: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Turn off automorphism-orbit reduction.
    #[arg(long, global = true)]
    no_orbits: bool,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compute c0, m, davenport (D) or f for a group such as 3x6.
    Invariant {
        kind: String,
        group: String,
        /// Subset size for f.
        #[arg(long)]
        k: Option<usize>,
        /// formula or exhaustive.
        #[arg(long)]
        method: Option<String>,
    },
    /// Check a lemma (or all of them) and write reports.
    Verify {
        lemma: String,
        #[arg(long)]
        samples: Option<usize>,
        /// Directory for reports and counterexample certificates.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Re-verify a certificate file.
    CheckCertificate { path: PathBuf },
    /// Tabulate m, c0 and D over a family such as cyclic:2..10 or rank2:..20.
    Table {
        kind: String,
        family: String,
        /// Write the table here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let f = cli.flags;
    let flags = Flags {
        max_order: f.max_order,
        timeout_sec: f.timeout_sec,
        seed: f.seed,
        jobs: f.jobs,
        no_cache: f.no_cache,
        no_orbits: f.no_orbits,
        format: match f.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    let out = match &cli.command {
        Command::Invariant {
            kind,
            group,
            k,
            method,
        } => cmd_invariant(kind, group, *k, method.as_deref(), &flags),
        Command::Verify {
            lemma,
            samples,
            out,
        } => cmd_verify(lemma, *samples, out, &flags),
        Command::CheckCertificate { path } => cmd_check_certificate(path),
        Command::Table {
            kind,
            family,
            output,
        } => cmd_table(kind, family, output.as_deref(), &flags),
    };
    emit(out)
}

fn emit(out: CommandOutput) -> ExitCode {
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}

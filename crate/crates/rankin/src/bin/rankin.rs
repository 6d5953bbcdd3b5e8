use clap::{Parser, Subcommand};
use rankin::cli::{self, CliError, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rankin", version, about = "p-adic Rankin-Selberg computations and identity checks")]
struct Args {
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// coefficient precision r (work mod p^r)
    #[arg(long, global = true, default_value_t = 4)]
    prec: u32,
    /// q-expansion precision T
    #[arg(long, global = true, default_value_t = 50)]
    qprec: usize,
    /// group level m, i.e. (Z/p^{m+1})^x
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the identity checks and print a PASS/FAIL report
    Verify {
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        negative_controls: bool,
        /// include per-check elapsed milliseconds
        #[arg(long)]
        timings: bool,
    },
    /// q-expansion of G^(k)(t(N), chi1, chi2)
    Eisenstein {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        t: i64,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        chi1: String,
        #[arg(long, default_value = "chi(1; 0)")]
        chi2: String,
    },
    /// p-adic Rankin-Selberg L-value at a weight-2 ordinary form
    PadicL {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 0)]
        j: i64,
        #[arg(long)]
        aux_level: u64,
    },
    /// Big logarithm of a phi-module given as a matrix file
    BigLog {
        #[arg(long)]
        phi: PathBuf,
        /// pi-adic precision T_pi
        #[arg(long, default_value_t = 9)]
        pi_prec: usize,
    },
    /// Weil pairing against an isogeny of prime degree
    PairingCheck {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Regularised zeta measure and its interpolation check
    MazurZeta {
        #[arg(long, default_value_t = 1)]
        t: i64,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        d: i64,
    },
}

fn run(args: Args) -> Result<ExitCode, CliError> {
    let mut cfg = RunConfig::new("");
    cfg.p = args.p;
    cfg.r = args.prec;
    cfg.m = args.m;
    cfg.qprec = args.qprec;
    cfg.seed = args.seed;
    cfg.out = args.out.clone();
    let text = match args.cmd {
        Cmd::Verify { only, negative_controls, timings } => {
            cfg.command = "verify".into();
            let outcome = cli::run_verification_suite(&cfg, only.as_deref(), negative_controls)?;
            print!("{}", cli::emit_report(&outcome.results, cfg.seed, cfg.out.as_deref(), timings)?);
            return Ok(ExitCode::from(outcome.exit_code as u8));
        }
        Cmd::Eisenstein { k, t, level, chi1, chi2 } => cli::cmd_eisenstein(k, t, level, &chi1, &chi2, cfg.qprec)?,
        Cmd::PadicL { f, g, j, aux_level } => {
            cfg.inputs = vec![f.clone(), g.clone()];
            cli::cmd_padic_l(&cfg, &f, &g, j, aux_level)?
        }
        Cmd::BigLog { phi, pi_prec } => {
            cfg.pi_prec = pi_prec;
            cli::cmd_big_log(&cfg, &phi)?
        }
        Cmd::PairingCheck { q, a, b, n, ell } => cli::cmd_pairing_check(&cfg, q, a, b, n, ell)?,
        Cmd::MazurZeta { t, n, d } => cli::cmd_mazur_zeta(&cfg, t, n, d)?,
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, &text).map_err(|source| CliError::Io { path: p.clone(), source })?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use hsderiv_cli::{parse_request_line, run, Report, Request};

/// Exact computations with iterative derivations on F_p(s).
#[derive(Parser)]
#[command(name = "hsderiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the standard derivation theta(s) = s + T.
    Standard(Operands),
    /// Expand theta(f).
    Apply(Operands),
    /// Check iterativity of theta (with --f "a; b": on the listed elements).
    Verify(Operands),
    /// Level of --f, or the global level of theta.
    Level(Operands),
    /// Composition constant for --m.
    #[command(name = "comp-const")]
    CompConst(Operands),
    /// Apply the substitution --lambda to theta.
    #[command(name = "equiv-apply")]
    EquivApply(Operands),
    /// Check the equivalence condition for lambda o theta.
    #[command(name = "equiv-check")]
    EquivCheck(Operands),
    /// Recover lambda with --tilde = lambda o theta from witness --f.
    #[command(name = "equiv-recover")]
    EquivRecover(Operands),
    /// Normalize theta at --t.
    Normalize(Operands),
    /// Frobenius twist by T^(p^d).
    Twist(Operands),
    /// Compress theta by its global level.
    Compress(Operands),
    /// Decompress theta by level --d.
    Decompress(Operands),
    /// Check iterativity of the module matrix.
    #[command(name = "module-verify")]
    ModuleVerify(Operands),
    /// Transport the module along --lambda.
    #[command(name = "module-transform")]
    ModuleTransform(Operands),
    /// Is --vector a constant of the module?
    #[command(name = "module-constant")]
    ModuleConstant(Operands),
    /// Run JSON-lines requests from stdin, one report per line.
    Batch {
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct Operands {
    /// Characteristic, a prime below 2^32.
    #[arg(long)]
    p: u64,
    /// Truncation order N.
    #[arg(long, env = "HSDERIV_ORDER", default_value_t = hsderiv_cli::DEFAULT_ORDER)]
    order: usize,
    /// Generator image theta(s); defaults to s + T.
    #[arg(long)]
    theta: Option<String>,
    /// Substitution series P(T).
    #[arg(long)]
    lambda: Option<String>,
    /// Target derivation for equiv-recover.
    #[arg(long)]
    tilde: Option<String>,
    /// Element to normalize at.
    #[arg(long)]
    t: Option<String>,
    /// Element of F_p(s).
    #[arg(long)]
    f: Option<String>,
    /// Exponent d in p^d.
    #[arg(long)]
    d: Option<u32>,
    /// Index for comp-const.
    #[arg(long)]
    m: Option<u64>,
    /// Module matrix, rows separated by `;`, entries by `,`.
    #[arg(long)]
    module: Option<String>,
    /// Module vector, coordinates separated by `,`.
    #[arg(long)]
    vector: Option<String>,
    /// Emit the JSON report.
    #[arg(long)]
    json: bool,
}

impl Operands {
    fn into_request(self, command: &str) -> (Request, bool) {
        let req = Request {
            command: command.to_string(),
            p: self.p,
            order: Some(self.order),
            theta: self.theta,
            lambda: self.lambda,
            tilde: self.tilde,
            t: self.t,
            f: self.f,
            d: self.d,
            m: self.m,
            module: self.module,
            vector: self.vector,
        };
        (req, self.json)
    }
}

fn batch(jobs: usize) -> io::Result<i32> {
    let lines: Vec<String> = io::stdin()
        .lock()
        .lines()
        .collect::<io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|l| !l.trim().is_empty())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(io::Error::other)?;
    let reports: Vec<Report> = pool.install(|| {
        lines
            .par_iter()
            .map(|line| match parse_request_line(line) {
                Ok(req) => run(&req),
                Err(report) => *report,
            })
            .collect()
    });
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{}", r.to_json())?;
    }
    Ok(reports.iter().map(Report::exit_code).max().unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (req, json) = match cli.command {
        Command::Batch { jobs } => {
            return match batch(jobs) {
                Ok(code) => ExitCode::from(code as u8),
                Err(e) => {
                    eprintln!("hsderiv: {e}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Standard(o) => o.into_request("standard"),
        Command::Apply(o) => o.into_request("apply"),
        Command::Verify(o) => o.into_request("verify"),
        Command::Level(o) => o.into_request("level"),
        Command::CompConst(o) => o.into_request("comp-const"),
        Command::EquivApply(o) => o.into_request("equiv-apply"),
        Command::EquivCheck(o) => o.into_request("equiv-check"),
        Command::EquivRecover(o) => o.into_request("equiv-recover"),
        Command::Normalize(o) => o.into_request("normalize"),
        Command::Twist(o) => o.into_request("twist"),
        Command::Compress(o) => o.into_request("compress"),
        Command::Decompress(o) => o.into_request("decompress"),
        Command::ModuleVerify(o) => o.into_request("module-verify"),
        Command::ModuleTransform(o) => o.into_request("module-transform"),
        Command::ModuleConstant(o) => o.into_request("module-constant"),
    };
    let report = run(&req);
    if json {
        println!("{}", report.to_json_pretty());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}

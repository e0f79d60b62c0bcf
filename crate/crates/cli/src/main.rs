use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use zxp::interp::{interp, interp_cpm, interp_scalar};
use zxp::normalize::{decide_equal, scalar_normal_form, to_gs_lc, to_rgs_lc_traced};
use zxp::relsem::rel_interp;
use zxp::rules::{soundcheck, TraceEntry};
use zxp::{Cyclo, CycloMatrix, Diagram, Error, Prime};

#[derive(Parser)]
#[command(name = "zxp", version, about = "Exact tools for the qupit stabiliser ZX-calculus")]
struct Cli {
    /// Prime modulus; for soundcheck a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    p: Vec<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Exact)]
    format: Format,
    /// Write rewrite traces here instead of standard output.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Exact,
    Decimal,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the matrix of a diagram (the CPM matrix if it has discards).
    Interp { file: PathBuf },
    /// Print the normal form of a closed diagram's scalar.
    Scalar { file: PathBuf },
    /// Decide whether two diagrams have the same interpretation.
    Equal { a: PathBuf, b: PathBuf },
    /// Print the rGS+LC and GS+LC forms of a diagram's Choi state.
    Simplify { file: PathBuf },
    /// Print the affine relation of a diagram.
    Rel { file: PathBuf },
    /// Check rules on random instances.
    Soundcheck {
        /// Comma-separated rule names; all rules when omitted.
        #[arg(long, value_delimiter = ',')]
        rules: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Multiply every factor by -1, to see the checker fail.
        #[arg(long, hide = true)]
        skew: bool,
    },
    /// Write a Graphviz rendering.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
enum Fail {
    Input(anyhow::Error),
    Invariant(anyhow::Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Invariant(_) => Fail::Invariant(e.into()),
            _ => Fail::Input(e.into()),
        }
    }
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Fail {
        Fail::Input(e)
    }
}

fn load(path: &Path, p: &[u64]) -> Result<Diagram, Fail> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let d = Diagram::from_json(&text).with_context(|| format!("in {}", path.display()))?;
    if let [q] = p {
        if *q != d.p.get() {
            return Err(Error::Modulus(*q, d.p.get()).into());
        }
    }
    Ok(d)
}

fn scalar_text(c: &Cyclo, f: Format) -> String {
    match f {
        Format::Exact => c.to_string(),
        Format::Decimal => c.to_decimal(),
    }
}

fn matrix_text(m: &CycloMatrix, f: Format) -> String {
    match f {
        Format::Exact => m.to_string(),
        Format::Decimal => {
            let mut s = String::from("approximate\n");
            for r in 0..m.rows {
                let row: Vec<String> = (0..m.cols).map(|c| m.get(r, c).to_decimal()).collect();
                s.push_str(&row.join(" | "));
                s.push('\n');
            }
            s
        }
    }
}

fn trace_text(label: &str, t: &[TraceEntry]) -> String {
    let mut s = format!("trace {label} ({} steps)\n", t.len());
    for e in t {
        s.push_str(&format!("  {e}\n"));
    }
    s
}

fn emit_trace(cli: &Cli, text: &str) -> Result<(), Fail> {
    match &cli.trace {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode, Fail> {
    let fmt = cli.format;
    match &cli.cmd {
        Cmd::Interp { file } => {
            let d = load(file, &cli.p)?;
            if d.has_discard() {
                println!("cpm");
                print!("{}", matrix_text(&interp_cpm(&d)?, fmt));
            } else {
                print!("{}", matrix_text(&interp(&d)?, fmt));
            }
        }
        Cmd::Scalar { file } => {
            let d = load(file, &cli.p)?;
            let v = interp_scalar(&d)?;
            let nf = scalar_normal_form(&v)?;
            if nf.value(d.p) != v {
                return Err(Fail::Invariant(anyhow::anyhow!("normal form {nf} does not reproduce {v}")));
            }
            println!("{nf}");
            println!("value {}", scalar_text(&v, fmt));
        }
        Cmd::Equal { a, b } => {
            let (da, db) = (load(a, &cli.p)?, load(b, &cli.p)?);
            let dec = decide_equal(&da, &db)?;
            println!("{}", if dec.equal { "equal" } else { "unequal" });
            println!("reason: {}", dec.reason);
            if let Some((x, y)) = &dec.scalars {
                println!("scalar A: {x}\nscalar B: {y}");
            }
            if let Some((x, y)) = &dec.forms {
                println!("form A:\n{x}\nform B:\n{y}");
            }
            emit_trace(cli, &(trace_text("A", &dec.trace.0) + &trace_text("B", &dec.trace.1)))?;
            if !dec.equal {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Simplify { file } => {
            let d = load(file, &cli.p)?;
            let (r, st) = to_rgs_lc_traced(&d)?;
            println!("rGS+LC");
            println!("{r}");
            println!("GS+LC");
            println!("{}", to_gs_lc(&d)?);
            emit_trace(cli, &trace_text("", &st.trace))?;
        }
        Cmd::Rel { file } => {
            let d = load(file, &cli.p)?;
            print!("{}", rel_interp(&d)?.dump());
        }
        Cmd::Soundcheck { rules, trials, skew } => {
            let ps = if cli.p.is_empty() { vec![3, 5, 7] } else { cli.p.clone() };
            let primes = ps.iter().map(|&p| Prime::new(p)).collect::<zxp::Result<Vec<_>>>()?;
            let reports = soundcheck(rules, &primes, *trials, cli.seed, *skew)?;
            let mut failed = false;
            for r in &reports {
                let verdict = if r.failed == 0 { "pass" } else { "FAIL" };
                println!("{:<28} p={:<3} {verdict} {}/{}", r.rule, r.p, r.passed, r.passed + r.failed);
                if let Some(f) = &r.smallest_failure {
                    failed = true;
                    println!("  trial {}: {}", f.trial, f.message);
                    println!("  site {:?}", f.site);
                    println!("  diagram {}", f.diagram.to_json());
                }
            }
            println!("{} reports, {} failing", reports.len(), reports.iter().filter(|r| r.failed > 0).count());
            if failed {
                return Ok(ExitCode::from(3));
            }
        }
        Cmd::Render { file, out } => {
            let d = load(file, &cli.p)?;
            let dot = d.to_dot();
            match out {
                Some(path) => fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{dot}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Fail::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Fail::Invariant(e)) => {
            eprintln!("invariant violation: {e:#}");
            ExitCode::from(3)
        }
    }
}

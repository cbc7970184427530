use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use wormhole_core::{
    as_wahl_chain, census_with, counterexample_family, delta2_family, detect_wormhole,
    discrepancies, dual, enumerate_pres, enumerate_zero_cfs, evaluate, expand, generate_wahl,
    is_wahl, mk1a_data, mk2a_data, trace_invariant, wahl_chain, CFrac, CensusOptions,
    ContractionKind, ContractionOutcome, Cqs, Error, ExtremalPRes, Mk1A, Mk2A, Side, WahlChain,
    Wormhole,
};

/// Exact continued-fraction and wormhole-singularity toolkit.
#[derive(Parser)]
#[command(name = "wormhole", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion of N/Q with every entry >= 2.
    Expand { n: u64, q: u64 },
    /// Expansion of N/(N-Q).
    Dual { n: u64, q: u64 },
    /// Value of a chain such as 2,4,3.
    Eval { chain: CFrac },
    /// Zero continued fractions.
    Zerocf {
        #[arg(long, value_name = "R")]
        enumerate: usize,
    },
    /// Recognize, build or list Wahl chains.
    Wahl {
        #[arg(long, value_name = "CHAIN", group = "mode")]
        check: Option<CFrac>,
        #[arg(long, num_args = 2, value_names = ["M", "A"], group = "mode")]
        from: Option<Vec<u64>>,
        #[arg(long, value_name = "LEN", group = "mode")]
        generate: Option<usize>,
    },
    /// Discrepancies of the minimal resolution chain.
    Discrepancies { chain: CFrac },
    /// Extremal P-resolutions of 1/N(1,Q).
    Pres { n: u64, q: u64 },
    /// Wormhole data of 1/N(1,Q).
    Wormhole { n: u64, q: u64 },
    /// mk1A neighbourhood on a Wahl chain with one marked curve.
    Mk1a {
        chain: CFrac,
        #[arg(long, value_name = "I")]
        mark: usize,
    },
    /// mk2A neighbourhood joining two Wahl chains at their first curves.
    Mk2a { chain1: CFrac, chain2: CFrac },
    /// All wormholes with Δ <= MAX.
    Census {
        #[arg(long = "max", value_name = "N")]
        max: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, env = "WORMHOLE_CACHE", value_name = "PATH")]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Named families.
    Family {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Δ = 4k², Ω = (2k-1)², δ = 2.
    Delta2 {
        #[arg(long)]
        k: u64,
    },
    /// [n+2, 2^n, n+5, 2^n, n+2].
    Counterexample {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let broken_pipe = e
                .chain()
                .filter_map(|c| c.downcast_ref::<io::Error>())
                .any(|io| io.kind() == io::ErrorKind::BrokenPipe);
            if broken_pipe {
                return ExitCode::SUCCESS;
            }
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 when any error in the chain is a theorem violation, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    let violation = e
        .chain()
        .filter_map(|c| c.downcast_ref::<Error>())
        .any(Error::is_theorem_violation);
    if violation {
        2
    } else {
        1
    }
}

fn cqs(n: u64, q: u64) -> anyhow::Result<Cqs> {
    Ok(Cqs::new(n, q)?)
}

fn wahl(cf: &CFrac) -> anyhow::Result<WahlChain> {
    as_wahl_chain(cf).ok_or_else(|| Error::NotWahl(cf.entries().to_vec()).into())
}

fn run(cmd: Command, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        Command::Expand { n, q } => writeln!(out, "{}", expand(n, q)?)?,
        Command::Dual { n, q } => writeln!(out, "{}", dual(n, q)?)?,
        Command::Eval { chain } => match evaluate(chain.entries())? {
            Some(v) => writeln!(out, "{v}")?,
            None => writeln!(out, "undefined")?,
        },
        Command::Zerocf { enumerate } => {
            for cf in enumerate_zero_cfs(enumerate)? {
                writeln!(out, "{cf}")?;
            }
        }
        Command::Wahl {
            check,
            from,
            generate,
        } => {
            if let Some(cf) = check {
                match is_wahl(&cf) {
                    Some(_) => print_wahl(out, &wahl(&cf)?)?,
                    None => writeln!(out, "{cf} is not a Wahl chain")?,
                }
            } else if let Some(ma) = from {
                print_wahl(out, &wahl_chain(ma[0], ma[1])?)?;
            } else if let Some(len) = generate {
                if len == 0 {
                    return Err(Error::LengthTooSmall(0, 1).into());
                }
                for w in generate_wahl(len) {
                    print_wahl(out, &w)?;
                }
            } else {
                return Err(anyhow!("wahl needs one of --check, --from, --generate"));
            }
        }
        Command::Discrepancies { chain } => {
            let k = discrepancies(&chain)?;
            let s: Vec<String> = k.values().iter().map(|x| x.to_string()).collect();
            writeln!(out, "({})", s.join(", "))?;
        }
        Command::Pres { n, q } => {
            let s = cqs(n, q)?;
            writeln!(out, "singularity {s} = {}", s.chain())?;
            writeln!(out, "dual {}", s.dual_chain())?;
            let all = enumerate_pres(&s)?;
            writeln!(out, "extremal P-resolutions: {}", all.len())?;
            for p in &all {
                print_pres(out, p)?;
            }
        }
        Command::Wormhole { n, q } => {
            let s = cqs(n, q)?;
            match detect_wormhole(&s)? {
                None => writeln!(out, "{s} is not a wormhole singularity")?,
                Some(w) => print_wormhole(out, &w)?,
            }
        }
        Command::Mk1a { chain, mark } => {
            let n = Mk1A::new(wahl(&chain)?, mark)?;
            print_outcome(out, &mk1a_data(&n)?)?;
        }
        Command::Mk2a { chain1, chain2 } => {
            let n = Mk2A {
                chain1: wahl(&chain1)?,
                chain2: wahl(&chain2)?,
            };
            print_outcome(out, &mk2a_data(&n)?)?;
        }
        Command::Census {
            max,
            jobs,
            cache,
            format,
        } => {
            let report =
                census_with(max, &CensusOptions { jobs, cache }).context("census failed")?;
            match format {
                Format::Json => writeln!(out, "{}", report.to_json())?,
                Format::Csv => report.write_csv(&mut *out)?,
            }
        }
        Command::Family { family } => match family {
            Family::Delta2 { k } => {
                let r = delta2_family(k)?;
                print_wormhole(out, &r.wormhole)?;
            }
            Family::Counterexample { n } => {
                let r = counterexample_family(n)?;
                writeln!(out, "chain {}", r.chain)?;
                print_wormhole(out, &r.wormhole)?;
            }
        },
    }
    Ok(())
}

fn print_wahl(out: &mut impl Write, w: &WahlChain) -> io::Result<()> {
    let d: Vec<String> = w.deltas.iter().map(u64::to_string).collect();
    writeln!(
        out,
        "{}  m={} a={} deltas=({})",
        w.entries,
        w.m,
        w.a,
        d.join(",")
    )
}

fn print_side(
    out: &mut impl Write,
    label: &str,
    side: &Side,
    m: u64,
    a: u64,
    mname: &str,
) -> io::Result<()> {
    match side {
        Side::Smooth => writeln!(out, "  {label} smooth"),
        Side::Singular(w) => writeln!(
            out,
            "  {label} {}  {mname}={m} a{}={a}",
            w.entries,
            &mname[1..]
        ),
    }
}

fn print_pres(out: &mut impl Write, p: &ExtremalPRes) -> io::Result<()> {
    writeln!(out, "{p}")?;
    let eps = p.epsilon.map_or("-".to_string(), |e| e.to_string());
    writeln!(
        out,
        "  pair ({},{})  c={}  delta={}  epsilon={}  K.C+={}  type={}",
        p.pair.0,
        p.pair.1,
        p.center,
        p.delta,
        eps,
        p.k_dot_curve(),
        p.pres_type()
    )?;
    print_side(out, "left(reversed)", &p.left, p.m2(), p.a2(), "m2")?;
    print_side(out, "right", &p.right, p.m1(), p.a1(), "m1")
}

fn print_wormhole(out: &mut impl Write, w: &Wormhole) -> anyhow::Result<()> {
    let t = trace_invariant(w)?;
    writeln!(
        out,
        "wormhole {} = {}",
        w.singularity,
        w.singularity.chain()
    )?;
    writeln!(
        out,
        "delta={}  d1={}  d2={}  trace={}",
        w.delta, w.d1, w.d2, t.trace
    )?;
    print_pres(out, &w.pres1)?;
    print_pres(out, &w.pres2)?;
    Ok(())
}

fn print_outcome(out: &mut impl Write, o: &ContractionOutcome) -> io::Result<()> {
    writeln!(out, "target {} = {}", o.target, o.target.chain())?;
    writeln!(out, "delta={}  K.C={}  C^2={}", o.delta, o.k_dot_c, o.c_sq)?;
    match &o.kind {
        ContractionKind::Divisorial { m, a } => writeln!(out, "divisorial: Wahl m={m} a={a}"),
        ContractionKind::Flip(c) => {
            writeln!(out, "flip: {} candidate(s)", c.len())?;
            c.iter().try_for_each(|p| print_pres(out, p))
        }
        ContractionKind::Ambiguous { m, a, candidates } => {
            writeln!(
                out,
                "ambiguous: target is Wahl m={m} a={a} and has {} extremal P-resolution(s)",
                candidates.len()
            )?;
            candidates.iter().try_for_each(|p| print_pres(out, p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn violations_map_to_two() {
        let e = anyhow::Error::from(Error::TheoremViolation("x".into())).context("census failed");
        assert_eq!(exit_code(&e), 2);
        assert_eq!(exit_code(&Error::InvalidPair { n: 4, q: 2 }.into()), 1);
        assert_eq!(exit_code(&anyhow!("plain")), 1);
    }
}

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use twodom::construct::{random_member, Certificate, GenConfig};
use twodom::enumerate::enumerate_free_trees;
use twodom::graph6;
use twodom::patterns::{selfcheck_report, try_registry};
use twodom::recognize::{recognize_with, verify_certificate, RecognizeOptions};
use twodom::solvers::{alpha2, brute_alpha2, brute_gamma2, gamma2, BRUTE_FORCE_CAP};
use twodom::{RecognizeError, Tree};

const SWEEP_MAX_N: usize = 18;

#[derive(Parser, Debug)]
#[command(
    name = "twodom",
    version,
    about = "2-domination and 2-independence on trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print gamma2, alpha2 and whether they agree, one line per tree.
    Compute {
        #[command(flatten)]
        input: Input,
        /// Cross-check against subset enumeration (order at most 22).
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Decide membership by reduction.
    Recognize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        mode: Mode,
        /// Write the certificate of a single accepted tree to this file.
        #[arg(long)]
        cert_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Replay a certificate and compare it with a tree.
    VerifyCert {
        #[command(flatten)]
        input: Input,
        /// Certificate JSON file.
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Build random members of the family.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Operations per member.
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Members to generate, with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Relative weights of O1..O6.
        #[arg(long, value_delimiter = ',', num_args = 6, default_values_t = [1.0; 6])]
        weights: Vec<f64>,
        #[arg(long = "o4-t14", value_enum, default_value_t = Toggle::On)]
        o4_t14: Toggle,
        /// Write the certificate of the last member to this file.
        #[arg(long)]
        cert_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Check recognizer against gamma2 = alpha2 on every tree up to an order.
    Sweep {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[command(flatten)]
        mode: Mode,
        /// Worker threads (0 = all cores).
        #[arg(long, env = "TWODOM_JOBS", default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Check the special-tree fixtures by brute force.
    PatternsSelfcheck {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Input file (`-` for stdin): graph6 lines, or an edge list whose first
    /// line is the order.
    #[arg(long, conflicts_with = "graph6")]
    input: Option<PathBuf>,
    /// A single tree in graph6.
    graph6: Option<String>,
}

#[derive(Args, Debug)]
struct Mode {
    /// Backtrack over all reductions.
    #[arg(long)]
    paranoid: bool,
    #[arg(long = "o4-t14", value_enum, default_value_t = Toggle::On)]
    o4_t14: Toggle,
}

impl Mode {
    fn options(&self) -> RecognizeOptions {
        RecognizeOptions {
            paranoid: self.paranoid,
            check_theorem: false,
            o4_includes_t14: self.o4_t14 == Toggle::On,
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

/// Successful runs that still signal a failed check.
#[derive(Debug)]
struct Mismatch(String);

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Mismatch {}

fn read_trees(input: &Input) -> Result<Vec<Tree>> {
    let text = match (&input.input, &input.graph6) {
        (_, Some(g)) => g.clone(),
        (Some(p), None) if p.as_os_str() == "-" => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            s
        }
        (Some(p), None) => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        (None, None) => bail!("no input: pass a graph6 string or --input PATH"),
    };
    parse_trees(&text)
}

fn parse_trees(text: &str) -> Result<Vec<Tree>> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(first) = lines.first() else {
        bail!("input contains no trees");
    };
    if first.parse::<usize>().is_ok() {
        return Ok(vec![Tree::from_edge_list(text)?]);
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| graph6::decode(l).with_context(|| format!("tree {}", i + 1)))
        .collect()
}

fn emit(out: &mut impl Write, format: Format, tsv: String, value: serde_json::Value) -> Result<()> {
    match format {
        Format::Tsv => writeln!(out, "{tsv}")?,
        Format::Json => writeln!(out, "{value}")?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Compute {
            input,
            brute,
            out: o,
        } => {
            for t in read_trees(&input)? {
                let (g, a) = (gamma2(&t), alpha2(&t));
                if brute {
                    if t.order() > BRUTE_FORCE_CAP {
                        bail!(
                            "order {} exceeds the brute-force cap {BRUTE_FORCE_CAP}",
                            t.order()
                        );
                    }
                    let b = (brute_gamma2(&t)?, brute_alpha2(&t)?);
                    if b != (g, a) {
                        return Err(Mismatch(format!(
                            "{}: dynamic program gives {:?}, subset enumeration {b:?}",
                            graph6::encode(&t),
                            (g, a)
                        ))
                        .into());
                    }
                }
                let code = graph6::encode(&t);
                emit(
                    &mut out,
                    o.format,
                    format!("{code}\t{g}\t{a}\t{}", g == a),
                    json!({"graph6": code, "gamma2": g, "alpha2": a, "equal": g == a}),
                )?;
            }
        }
        Command::Recognize {
            input,
            mode,
            cert_out,
            out: o,
        } => {
            let trees = read_trees(&input)?;
            if cert_out.is_some() && trees.len() != 1 {
                bail!(
                    "--cert-out needs exactly one input tree, got {}",
                    trees.len()
                );
            }
            let opts = mode.options();
            for t in &trees {
                let v = recognize_with(t, &opts)?;
                let code = graph6::encode(t);
                if v.accepted != (v.gamma2 == v.alpha2) {
                    return Err(Mismatch(
                        RecognizeError::InternalInconsistency {
                            accepted: v.accepted,
                            gamma2: v.gamma2,
                            alpha2: v.alpha2,
                        }
                        .to_string()
                            + &format!(" on {code}"),
                    )
                    .into());
                }
                if let (Some(path), Some(cert)) = (&cert_out, &v.certificate) {
                    fs::write(path, cert.to_json() + "\n")
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                emit(
                    &mut out,
                    o.format,
                    format!("{code}\t{}\t{}\t{}", v.gamma2, v.alpha2, v.accepted),
                    json!({
                        "graph6": code,
                        "gamma2": v.gamma2,
                        "alpha2": v.alpha2,
                        "accepted": v.accepted,
                        "certificate": v.certificate,
                    }),
                )?;
            }
        }
        Command::VerifyCert {
            input,
            cert,
            out: o,
        } => {
            let trees = read_trees(&input)?;
            let [t] = &trees[..] else {
                bail!("verify-cert needs exactly one tree, got {}", trees.len());
            };
            let text =
                fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c = Certificate::from_json(&text).context("parsing certificate")?;
            let result = verify_certificate(&c, t);
            let reason = result.as_ref().err().map(ToString::to_string);
            emit(
                &mut out,
                o.format,
                match &reason {
                    None => "true".to_string(),
                    Some(r) => format!("false\t{r}"),
                },
                json!({"valid": result.is_ok(), "reason": result.err()}),
            )?;
        }
        Command::Generate {
            seed,
            steps,
            count,
            weights,
            o4_t14,
            cert_out,
            out: o,
        } => {
            let op_weights: [f64; 6] = weights
                .try_into()
                .map_err(|_| anyhow::anyhow!("--weights takes six numbers"))?;
            if op_weights.iter().any(|w| !w.is_finite() || *w < 0.0)
                || op_weights.iter().all(|&w| w == 0.0)
            {
                bail!("--weights must be non-negative with a positive entry");
            }
            let cfg = GenConfig {
                op_weights,
                o4_includes_t14: o4_t14 == Toggle::On,
            };
            for s in seed..seed + count {
                let (t, cert) = random_member(s, steps, &cfg);
                let code = graph6::encode(&t);
                if let Some(path) = &cert_out {
                    fs::write(path, cert.to_json() + "\n")
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                emit(
                    &mut out,
                    o.format,
                    format!("{code}\t{}", serde_json::to_string(&cert)?),
                    json!({"seed": s, "graph6": code, "certificate": cert}),
                )?;
            }
        }
        Command::Sweep {
            max_n,
            mode,
            jobs,
            out: o,
        } => {
            if !(1..=SWEEP_MAX_N).contains(&max_n) {
                bail!("--max-n must be between 1 and {SWEEP_MAX_N}");
            }
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
            let opts = mode.options();
            let mut mismatches = Vec::new();
            for n in 1..=max_n {
                let trees: Vec<Tree> = enumerate_free_trees(n).collect();
                let results: Vec<(bool, usize, usize)> = pool.install(|| {
                    trees
                        .par_iter()
                        .map(|t| {
                            let v = recognize_with(t, &opts).expect("theorem check disabled");
                            (v.accepted, v.gamma2, v.alpha2)
                        })
                        .collect()
                });
                let members = results.iter().filter(|r| r.0).count();
                let bad: Vec<String> = trees
                    .iter()
                    .zip(&results)
                    .filter(|(_, &(acc, g, a))| acc != (g == a))
                    .map(|(t, &(_, g, a))| format!("{}\t{g}\t{a}", graph6::encode(t)))
                    .collect();
                emit(
                    &mut out,
                    o.format,
                    format!("{n}\t{}\t{members}\t{}", trees.len(), bad.is_empty()),
                    json!({"n": n, "trees": trees.len(), "members": members, "equivalent": bad.is_empty()}),
                )?;
                mismatches.extend(bad);
            }
            if !mismatches.is_empty() {
                for m in &mismatches {
                    eprintln!("mismatch\t{m}");
                }
                return Err(
                    Mismatch(format!("{} trees break the equivalence", mismatches.len())).into(),
                );
            }
        }
        Command::PatternsSelfcheck { out: o } => {
            if let Err(e) = try_registry() {
                return Err(Mismatch(e.to_string()).into());
            }
            let report = selfcheck_report();
            if o.format == Format::Tsv {
                writeln!(
                    out,
                    "id\torder\tsquares\tgamma2\tdominating\tdiamonds\talpha2\tindependent\talpha2_minus_v\tok"
                )?;
            }
            for r in &report {
                let minus_v = r
                    .alpha2_without_attacher
                    .map_or("-".to_string(), |a| a.to_string());
                emit(
                    &mut out,
                    o.format,
                    format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{minus_v}\t{}",
                        r.id,
                        r.order,
                        r.squares,
                        r.gamma2,
                        r.squares_dominating,
                        r.diamonds,
                        r.alpha2,
                        r.diamonds_independent,
                        r.passes()
                    ),
                    json!({"report": r, "ok": r.passes()}),
                )?;
            }
            for r in report.iter().filter(|r| !r.diamonds_match_alpha2()) {
                emit(
                    &mut out,
                    o.format,
                    format!(
                        "discrepancy\t{}\tdiamonds {} < alpha2 {}",
                        r.id, r.diamonds, r.alpha2
                    ),
                    json!({"discrepancy": r.id, "diamonds": r.diamonds, "alpha2": r.alpha2}),
                )?;
            }
            for r in report
                .iter()
                .filter(|r| r.attacher_drop_holds() == Some(false))
            {
                emit(
                    &mut out,
                    o.format,
                    format!(
                        "attacher\t{}\talpha2(T - v) = {} but alpha2(T) = {}",
                        r.id,
                        r.alpha2_without_attacher.unwrap_or_default(),
                        r.alpha2
                    ),
                    json!({"attacher_drop_fails": r.id, "alpha2_minus_v": r.alpha2_without_attacher, "alpha2": r.alpha2}),
                )?;
            }
            let failed: Vec<String> = report
                .iter()
                .filter(|r| !r.passes())
                .map(|r| r.id.to_string())
                .collect();
            if !failed.is_empty() {
                return Err(
                    Mismatch(format!("self-check failed for {}", failed.join(", "))).into(),
                );
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Mismatch>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end: limit pressures, phase-diagram sweeps, exact
//! finite-n laws, configuration-model pressures, verification suites, and
//! sampling oracles, emitted as CSV or JSON.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use annealed_ising::configmodel::{cm_pressure, DegreeDistribution};
use annealed_ising::error::Error;
use annealed_ising::finite::{finite_thermo, limit_theorem_report, SpinCountLaw};
use annealed_ising::gtable::{check_uniform_bound, GTable};
use annealed_ising::params::ModelParams;
use annealed_ising::quenched::quenched_pressure;
use annealed_ising::regular::{phase_diagram, pressure};
use annealed_ising::sampler;

#[derive(Parser)]
#[command(name = "annealed-ising", version, about = "Annealed Ising model on random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format; defaults to json for scalars, csv for tables.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Thermodynamic-limit pressure and derived quantities at one point.
    Pressure {
        #[arg(long)]
        beta: f64,
        #[arg(long = "B", visible_alias = "b")]
        b: f64,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sweep of the limit quantities over beta and B grids.
    PhaseDiagram {
        #[arg(long)]
        d: u32,
        /// Single value or start:stop:step (inclusive).
        #[arg(long)]
        beta: String,
        #[arg(long = "B", visible_alias = "b")]
        b: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Exact finite-n pressure, magnetization, susceptibility and
    /// limit-theorem diagnostics.
    FiniteN {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long = "B", visible_alias = "b")]
        b: f64,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Configuration-model pressure for a degree distribution
    /// (deterministic:d | pmf:v1:p1,... | poisson:gamma).
    ConfigModel {
        #[arg(long)]
        degrees: String,
        #[arg(long)]
        beta: f64,
        #[arg(long = "B", visible_alias = "b")]
        b: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Internal consistency suites; exits 2 on any failure.
    Verify {
        /// quenched-equality | uniform-bound | g-recursion | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sampling oracles.
    Sample {
        #[command(subcommand)]
        what: SampleCommand,
    },
}

#[derive(Subcommand)]
enum SampleCommand {
    /// Uniform perfect matching of m half-edges (CSV pair list).
    Matching {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Configuration-model multigraph for an explicit degree sequence
    /// (comma-separated), as a two-column edge CSV.
    Graph {
        #[arg(long)]
        degrees: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte Carlo estimate of g(beta, k, m).
    G {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte Carlo estimate of (1/n) log E[Z_n] by exact spin enumeration
    /// on sampled multigraphs (n <= 16).
    Ez {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long = "B", visible_alias = "b")]
        b: f64,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

/// 17 significant digits: round-trip safe for f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("notice: no --seed given; using seed 0");
        0
    })
}

/// Single value, or start:stop:step inclusive of both endpoints within 1e-12.
fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    let bad = |m: &str| Error::Domain(format!("bad grid '{s}': {m}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => Ok(vec![parts[0].parse().map_err(|_| bad("not a number"))?]),
        3 => {
            let start: f64 = parts[0].parse().map_err(|_| bad("bad start"))?;
            let stop: f64 = parts[1].parse().map_err(|_| bad("bad stop"))?;
            let step: f64 = parts[2].parse().map_err(|_| bad("bad step"))?;
            if !(step > 0.0) || stop < start {
                return Err(bad("need step > 0 and stop >= start"));
            }
            let mut grid = Vec::new();
            let mut i = 0u64;
            loop {
                let x = start + i as f64 * step;
                if x > stop + 1e-12 {
                    break;
                }
                grid.push(x.min(stop));
                i += 1;
            }
            Ok(grid)
        }
        _ => Err(bad("expected VALUE or START:STOP:STEP")),
    }
}

fn emit(output: &OutputOpts, text: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Domain(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<bool, Error> {
    let cli = Cli::try_parse().map_err(|e| {
        // clap prints its own usage text; map everything to a domain error
        // after showing it.
        let _ = e.print();
        Error::Domain(String::new())
    })?;

    match cli.command {
        Command::Pressure { beta, b, d, output } => {
            let params = ModelParams::new(beta, b, d)?;
            let r = pressure(&params)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let v = json!({
                        "beta": beta, "B": b, "d": d,
                        "psi": r.psi, "t_star": r.t_star,
                        "magnetization": r.magnetization, "chi": r.chi,
                        "in_u": r.in_u,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
                }
                Format::Csv => {
                    let mut s = String::from("beta,B,d,psi,t_star,magnetization,chi,in_u\n");
                    writeln!(
                        s,
                        "{},{},{d},{},{},{},{},{}",
                        num(beta),
                        num(b),
                        num(r.psi),
                        num(r.t_star),
                        num(r.magnetization),
                        num(r.chi),
                        r.in_u
                    )
                    .unwrap();
                    s
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::PhaseDiagram { d, beta, b, output } => {
            let beta_grid = parse_grid(&beta)?;
            let b_grid = parse_grid(&b)?;
            let rows = phase_diagram(d, &beta_grid, &b_grid);
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("beta,B,d,psi,t_star,magnetization,chi,in_u\n");
                    for row in &rows {
                        let r = row.result.as_ref().map_err(|e| e.clone())?;
                        writeln!(
                            s,
                            "{},{},{},{},{},{},{},{}",
                            num(row.beta),
                            num(row.b),
                            row.d,
                            num(r.psi),
                            num(r.t_star),
                            num(r.magnetization),
                            num(r.chi),
                            r.in_u
                        )
                        .unwrap();
                    }
                    s
                }
                Format::Json => {
                    let vals: Result<Vec<_>, Error> = rows
                        .iter()
                        .map(|row| {
                            let r = row.result.as_ref().map_err(|e| e.clone())?;
                            Ok(json!({
                                "beta": row.beta, "B": row.b, "d": row.d,
                                "psi": r.psi, "t_star": r.t_star,
                                "magnetization": r.magnetization, "chi": r.chi,
                                "in_u": r.in_u,
                            }))
                        })
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&vals?).unwrap())
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::FiniteN { n, beta, b, d, output } => {
            let params = ModelParams::new(beta, b, d)?;
            let law = SpinCountLaw::build(n, &params)?;
            let t = finite_thermo(&law);
            let report = limit_theorem_report(n, &params)?;
            let v = json!({
                "n": n, "beta": beta, "B": b, "d": d,
                "psi_n": t.psi_n, "m_n": t.m_n, "chi_n": t.chi_n,
                "lln_tail_005": report.lln_tail_005,
                "lln_tail_010": report.lln_tail_010,
                "ks_distance": report.ks_distance,
                "bimodal": report.bimodal.map(|(p, m)| json!({"plus": p, "minus": m})),
            });
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
                Format::Csv => {
                    let mut s = String::from("n,beta,B,d,psi_n,m_n,chi_n,ks_distance\n");
                    writeln!(
                        s,
                        "{n},{},{},{d},{},{},{},{}",
                        num(beta),
                        num(b),
                        num(t.psi_n),
                        num(t.m_n),
                        num(t.chi_n),
                        num(report.ks_distance)
                    )
                    .unwrap();
                    s
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::ConfigModel { degrees, beta, b, output } => {
            let dist: DegreeDistribution = degrees.parse()?;
            let psi = cm_pressure(&dist, beta, b)?;
            let v = json!({
                "degrees": dist.to_string(), "beta": beta, "B": b, "psi": psi,
            });
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
                Format::Csv => {
                    format!("degrees,beta,B,psi\n\"{}\",{},{},{}\n", dist, num(beta), num(b), num(psi))
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::Verify { suite, output } => {
            let mut text = String::new();
            let mut ok = true;
            let run_quenched = suite == "quenched-equality" || suite == "all";
            let run_bound = suite == "uniform-bound" || suite == "all";
            let run_grec = suite == "g-recursion" || suite == "all";
            if !(run_quenched || run_bound || run_grec) {
                return Err(Error::Domain(format!("unknown suite '{suite}'")));
            }
            if run_quenched {
                text.push_str("suite,beta,B,d,abs_diff,pass\n");
                for d in [2u32, 3, 4, 5] {
                    for i in 1..=15 {
                        let beta = 0.1 * i as f64;
                        for b in [0.1, 0.5, 1.0, 1.5, 2.0] {
                            let params = ModelParams::new(beta, b, d)?;
                            let psi = pressure(&params)?.psi;
                            let psi_q = quenched_pressure(&params)?.psi_tilde;
                            let diff = (psi - psi_q).abs();
                            let pass = diff <= 1e-7;
                            ok &= pass;
                            writeln!(
                                text,
                                "quenched-equality,{},{},{d},{},{pass}",
                                num(beta),
                                num(b),
                                num(diff)
                            )
                            .unwrap();
                        }
                    }
                }
            }
            if run_bound {
                text.push_str("suite,m,sup_deviation,pass\n");
                let rows = check_uniform_bound(1.0, &[100, 200, 400, 800])?;
                for w in rows.windows(2) {
                    let pass = w[1].sup_deviation <= 1.1 * w[0].sup_deviation.max(1e-3);
                    ok &= pass;
                    writeln!(
                        text,
                        "uniform-bound,{},{},{pass}",
                        w[1].m,
                        num(w[1].sup_deviation)
                    )
                    .unwrap();
                }
            }
            if run_grec {
                text.push_str("suite,beta,m,max_abs_diff,pass\n");
                for beta in [0.3, 1.0, 3.0] {
                    for m in (2..=12usize).step_by(2) {
                        let table = GTable::build(beta, m)?;
                        let mut max_diff = 0.0f64;
                        for k in 0..=m {
                            let pmf = sampler::enumerate_x_pmf(k, m)?;
                            let g: f64 = pmf
                                .iter()
                                .enumerate()
                                .map(|(x, &p)| p * (-2.0 * beta * x as f64).exp())
                                .sum();
                            max_diff = max_diff.max((g - table.g(k)).abs());
                        }
                        let pass = max_diff <= 1e-12;
                        ok &= pass;
                        writeln!(text, "g-recursion,{},{m},{},{pass}", num(beta), num(max_diff))
                            .unwrap();
                    }
                }
            }
            emit(&output, &text)?;
            Ok(ok)
        }
        Command::Sample { what } => {
            match what {
                SampleCommand::Matching { m, seed, output } => {
                    let matching = sampler::sample_matching(m, seed_or_default(seed))?;
                    let mut s = String::from("half_edge_a,half_edge_b\n");
                    for (a, b) in matching.pairs {
                        writeln!(s, "{a},{b}").unwrap();
                    }
                    emit(&output, &s)?;
                }
                SampleCommand::Graph { degrees, seed, output } => {
                    let degs: Result<Vec<usize>, _> =
                        degrees.split(',').map(|x| x.trim().parse()).collect();
                    let degs = degs
                        .map_err(|_| Error::Domain(format!("bad degree list '{degrees}'")))?;
                    let edges = sampler::sample_degree_graph(&degs, seed_or_default(seed))?;
                    let mut s = String::from("vertex_a,vertex_b\n");
                    for (a, b) in edges {
                        writeln!(s, "{a},{b}").unwrap();
                    }
                    emit(&output, &s)?;
                }
                SampleCommand::G { beta, k, m, samples, seed, output } => {
                    let (est, se) =
                        sampler::mc_estimate_g(beta, k, m, samples, seed_or_default(seed))?;
                    let v = json!({
                        "beta": beta, "k": k, "m": m, "samples": samples,
                        "estimate": est, "std_error": se,
                    });
                    emit(&output, &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))?;
                }
                SampleCommand::Ez { n, beta, b, d, samples, seed, output } => {
                    let params = ModelParams::new(beta, b, d)?;
                    let (est, se) =
                        sampler::mc_estimate_ez(n, &params, samples, seed_or_default(seed))?;
                    let v = json!({
                        "n": n, "beta": beta, "B": b, "d": d, "samples": samples,
                        "estimate": est, "std_error": se,
                    });
                    emit(&output, &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))?;
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            if !e.to_string().is_empty() {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

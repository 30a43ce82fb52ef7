//! `sgqft`: command-line surface for the stable-graph engine.
//!
//! Exit codes: 0 on success, 1 on validation/usage errors, 2 when a
//! `verify` suite reports a failed identity.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sgqft_core::canon::canonicalize;
use sgqft_core::hae::Hae;
use sgqft_core::ops;
use sgqft_core::realize::{self, Theory};
use sgqft_core::sym::{parse_linear_poly, Sym};
use sgqft_core::transform;
use sgqft_core::wick;
use sgqft_core::{GraphSum, Poly, QSum, Rat, StableGraph};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sgqft",
    about = "Exact computations with stable graphs: enumeration, operators, transforms, realizations, anomaly recursions",
    version
)]
struct Cli {
    /// Output format for mathematical objects
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Number of half-edge labels N (labelled theory)
    #[arg(long, global = true)]
    labels: Option<u8>,
    /// Theory JSON file seeding `s-transform`/`wick` (default: symbolic)
    #[arg(long, global = true)]
    seed_file: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List all connected stable graphs of a type, one record per class
    Enumerate(TypeArgs),
    /// Canonical key and automorphism order of a graph (JSON on stdin or --graph)
    Aut(GraphInput),
    /// Abstract free energy / n-point function as a graph sum
    FreeEnergy(TypeArgs),
    /// Apply an edge operator to a graph
    Op {
        /// K, partial, gamma or D
        #[arg(value_parser = ["K", "partial", "gamma", "D"])]
        which: String,
        /// first label index (labelled operators)
        #[arg(long)]
        i: Option<u8>,
        /// second label index (K only)
        #[arg(long)]
        j: Option<u8>,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Fourier-like transform of a graph
    Transform {
        /// epsilon: rational or linear expression in named scalars (e1, e2)
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Duality map of a graph
    Dualize(GraphInput),
    /// Realized n-point function over F[g,n] and kappa
    Realize(TypeArgs),
    /// Induced dual realization (recovers the bare vertex weight)
    DualRealize(TypeArgs),
    /// Propagator-shift transformation on a theory
    STransform {
        /// kappa polynomial, e.g. `kappa`, `1/2`, `k1+k2`, `-1*kappa`
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        /// stability bound 2g-2+n of the output theory
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
    /// Formal Gaussian integral of a theory via Wick pairing
    Wick {
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
    /// Anomaly-equation amplitudes
    Hae {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        npoints: u32,
        /// tilde (non-holomorphic), holo (holomorphic limit) or kz (genus amplitude)
        #[arg(long, value_parser = ["tilde", "holo", "kz"], default_value = "tilde")]
        emit: String,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// stability bound 2g-2+n (acceptance runs use 4)
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    legs: u32,
    /// per-label leg counts `l1,l2,...` (labelled theory; overrides --legs)
    #[arg(long, value_delimiter = ',')]
    leg_counts: Option<Vec<u32>>,
}

#[derive(Args)]
struct GraphInput {
    /// graph JSON file; `-` or absent reads stdin
    #[arg(long)]
    graph: Option<String>,
}

fn genus_cap() -> u32 {
    std::env::var("SGQFT_GENUS_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(4)
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn read_graph(input: &GraphInput) -> Result<StableGraph, String> {
    let text = match &input.graph {
        Some(path) if path != "-" => {
            std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
        }
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| e.to_string())?;
            buf
        }
    };
    StableGraph::from_json(&text).map_err(|e| e.to_string())
}

fn check_cap(genus: u32) -> Result<(), String> {
    let cap = genus_cap();
    if genus > cap {
        return Err(format!(
            "genus {genus} exceeds SGQFT_GENUS_CAP={cap}; raise the cap to proceed"
        ));
    }
    Ok(())
}

fn print_qsum(sum: &GraphSum<Rat>, format: Format) {
    match format {
        Format::Json => println!("{}", sum.to_json()),
        Format::Text => {
            if sum.is_zero() {
                println!("0");
            } else {
                for (key, graph, coeff) in sum.iter() {
                    println!("{}\t{}\t{}", coeff, key.to_base64(), graph.to_json());
                }
            }
        }
    }
}

fn print_polysum(sum: &GraphSum<Poly>, format: Format) {
    match format {
        Format::Json => println!("{}", sum.to_json()),
        Format::Text => {
            if sum.is_zero() {
                println!("0");
            } else {
                for (key, graph, coeff) in sum.iter() {
                    println!("{}\t{}\t{}", coeff, key.to_base64(), graph.to_json());
                }
            }
        }
    }
}

fn print_poly(p: &Poly, format: Format) {
    match format {
        Format::Json => println!("{}", p.to_json()),
        Format::Text => println!("{}", p.render()),
    }
}

fn theory_seed(cli_seed: &Option<String>, bound: u32) -> Result<Theory, String> {
    match cli_seed {
        None => Ok(Theory::symbolic(bound)),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            Theory::from_json(&text).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match &cli.command {
        Command::Enumerate(args) => {
            if let Err(e) = check_cap(args.genus) {
                return fail(e);
            }
            let graphs = match enumerate_for(args, cli.labels) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            match format {
                Format::Json => {
                    let records: Vec<String> = graphs
                        .iter()
                        .map(|g| {
                            let c = canonicalize(g);
                            format!(
                                "{{\"key\":\"{}\",\"aut\":{},\"graph\":{}}}",
                                c.key.to_base64(),
                                c.aut,
                                g.to_json()
                            )
                        })
                        .collect();
                    println!("[{}]", records.join(","));
                }
                Format::Text => {
                    for g in &graphs {
                        let c = canonicalize(g);
                        println!("{}\t{}\t{}", c.key.to_base64(), c.aut, g.to_json());
                    }
                }
            }
        }
        Command::Aut(input) => {
            let graph = match read_graph(input) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let c = canonicalize(&graph);
            match format {
                Format::Json => println!(
                    "{{\"key\":\"{}\",\"aut\":{},\"graph\":{}}}",
                    c.key.to_base64(),
                    c.aut,
                    c.rep.to_json()
                ),
                Format::Text => println!("{}\t{}", c.key.to_base64(), c.aut),
            }
        }
        Command::FreeEnergy(args) => {
            if let Err(e) = check_cap(args.genus) {
                return fail(e);
            }
            let sum = match free_energy_for(args, cli.labels) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            print_qsum(&sum, format);
        }
        Command::Op { which, i, j, input } => {
            let graph = match read_graph(input) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let n_labels = cli.labels.unwrap_or(0);
            let result: QSum = match (which.as_str(), i, j) {
                ("K", None, None) => ops::op_k(&graph),
                ("K", Some(i), Some(j)) => ops::op_k_labelled(&graph, *i, *j),
                ("partial", None, _) => ops::op_partial(&graph),
                ("partial", Some(i), _) if n_labels > 0 => {
                    ops::op_partial_labelled(&graph, *i, n_labels)
                }
                ("gamma", None, _) => ops::op_gamma(&graph),
                ("gamma", Some(i), _) if n_labels > 0 => {
                    ops::op_gamma_labelled(&graph, *i, n_labels)
                }
                ("D", None, _) => ops::op_d(&graph),
                ("D", Some(i), _) if n_labels > 0 => ops::op_d_labelled(&graph, *i, n_labels),
                _ => {
                    return fail("labelled operators need --i (and --j for K) plus --labels N")
                }
            };
            print_qsum(&result, format);
        }
        Command::Transform { epsilon, input } => {
            let graph = match read_graph(input) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let eps = match parse_linear_poly(epsilon) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let result = match cli.labels {
                Some(n) => transform::graph_transform_labelled::<Poly>(&graph, &eps, n),
                None => transform::graph_transform::<Poly>(&graph, &eps),
            };
            print_polysum(&result, format);
        }
        Command::Dualize(input) => {
            let graph = match read_graph(input) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let result: QSum = match cli.labels {
                Some(n) => transform::duality_labelled(&graph, n),
                None => transform::duality(&graph),
            };
            print_qsum(&result, format);
        }
        Command::Realize(args) => {
            if let Err(e) = check_cap(args.genus) {
                return fail(e);
            }
            let poly = match realize_for(args, cli.labels) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            print_poly(&poly, format);
        }
        Command::DualRealize(args) => {
            if let Err(e) = check_cap(args.genus) {
                return fail(e);
            }
            match realize::dual_hat_f(args.genus, args.legs) {
                Ok(p) => print_poly(&p, format),
                Err(e) => return fail(e),
            }
        }
        Command::STransform { kappa, bound } => {
            let kappa = match parse_linear_poly(kappa) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let theory = match theory_seed(&cli.seed_file, *bound) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            match realize::s_transform(&theory, &kappa) {
                Ok(out) => println!("{}", out.to_json()),
                Err(e) => return fail(e),
            }
        }
        Command::Wick { kappa, bound } => {
            let kappa = match parse_linear_poly(kappa) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            match cli.labels {
                None | Some(0) | Some(1) => {
                    let theory = match theory_seed(&cli.seed_file, *bound) {
                        Ok(t) => t,
                        Err(e) => return fail(e),
                    };
                    match wick::wick_gaussian(&theory, &kappa, *bound) {
                        Ok(out) => println!("{}", out.to_json()),
                        Err(e) => return fail(e),
                    }
                }
                Some(n) => {
                    // symbolic N-dim theory; kappa[i,j] scaled by the given
                    // polynomial factor
                    let theory = wick::TheoryN::symbolic(n, *bound);
                    let matrix: Vec<Vec<Poly>> = (1..=n)
                        .map(|i| {
                            (1..=n)
                                .map(|j| Poly::var(Sym::kappa_l(i, j)) * kappa.clone())
                                .collect()
                        })
                        .collect();
                    match wick::wick_gaussian_n(&theory, &matrix, *bound) {
                        Ok(out) => {
                            let items: Vec<String> = out
                                .vals
                                .iter()
                                .map(|((g, ls), p)| {
                                    let tag: Vec<String> =
                                        ls.iter().map(|l| l.to_string()).collect();
                                    format!("\"{};{}\":{}", g, tag.join(","), p.to_json())
                                })
                                .collect();
                            println!("{{{}}}", items.join(","));
                        }
                        Err(e) => return fail(e),
                    }
                }
            }
        }
        Command::Hae {
            genus,
            npoints,
            emit,
        } => {
            if let Err(e) = check_cap(*genus) {
                return fail(e);
            }
            let engine = Hae::new();
            let result = match emit.as_str() {
                "tilde" => engine.tilde_f(*genus, *npoints),
                "holo" => engine.holo_f(*genus, *npoints),
                _ => engine.tilde_f(*genus, 0),
            };
            match result {
                Ok(p) => match format {
                    Format::Json => println!("{}", p.to_json()),
                    Format::Text => println!("{}", p.render()),
                },
                Err(e) => return fail(e),
            }
        }
        Command::Verify { suite, bound } => {
            let Some(reports) = sgqft_core::verify::run_suite(suite, *bound) else {
                eprintln!(
                    "error: unknown suite `{suite}`; available: {} or all",
                    sgqft_core::verify::SUITES.join(", ")
                );
                return ExitCode::from(1);
            };
            let mut ok = true;
            for report in &reports {
                println!("{}", report.line());
                ok &= report.pass;
            }
            if !ok {
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::SUCCESS
}

fn enumerate_for(args: &TypeArgs, labels: Option<u8>) -> Result<Vec<StableGraph>, String> {
    match (&args.leg_counts, labels) {
        (Some(ls), n) => {
            let n = n.unwrap_or(ls.len() as u8);
            sgqft_core::enumerate::enumerate_labelled(args.genus, ls, n)
                .map_err(|e| e.to_string())
        }
        (None, Some(n)) if n > 0 => {
            // no per-label counts given: enumerate every split of --legs
            let mut out = Vec::new();
            for ls in wick::vectors_with_sum(n as usize, args.legs) {
                out.extend(
                    sgqft_core::enumerate::enumerate_labelled(args.genus, &ls, n)
                        .map_err(|e| e.to_string())?,
                );
            }
            Ok(out)
        }
        _ => sgqft_core::enumerate::enumerate_connected(args.genus, args.legs)
            .map_err(|e| e.to_string()),
    }
}

fn free_energy_for(args: &TypeArgs, labels: Option<u8>) -> Result<QSum, String> {
    match (&args.leg_counts, labels) {
        (Some(ls), n) => {
            let n = n.unwrap_or(ls.len() as u8);
            ops::abstract_f_labelled(args.genus, ls, n).map_err(|e| e.to_string())
        }
        _ => ops::abstract_f(args.genus, args.legs).map_err(|e| e.to_string()),
    }
}

fn realize_for(args: &TypeArgs, labels: Option<u8>) -> Result<Poly, String> {
    match (&args.leg_counts, labels) {
        (Some(ls), n) => {
            let n = n.unwrap_or(ls.len() as u8);
            realize::hat_f_labelled(args.genus, ls, n).map_err(|e| e.to_string())
        }
        _ => realize::hat_f(args.genus, args.legs).map_err(|e| e.to_string()),
    }
}

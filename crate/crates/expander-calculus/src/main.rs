//! Command-line interface: graph construction, products, spectra,
//! Poincaré constants, cotype and calculus checks, codes, base graphs,
//! the pipeline, and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource exhaustion (overflow, size caps, convergence failure).
//! Thread count follows the RAYON_NUM_THREADS environment variable.

use clap::{Args, Parser, Subcommand, ValueEnum};
use expander_calculus::error::Error;
use expander_calculus::graph::{self, RegularMultigraph};
use expander_calculus::heat::{self, HeatParams};
use expander_calculus::pipeline::{self, LabelingPolicy, PipelineConfig};
use expander_calculus::poincare::{self, CotypeParams, ExactKernel, KernelSpec};
use expander_calculus::products::{self, RotationLabeling};
use expander_calculus::verify::{self, Suite, VerifyConfig};
use expander_calculus::{codes, io, spectral};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "expcalc",
    about = "Expander graph products, nonlinear Poincaré constants, and base-graph arithmetic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// RNG seed for all randomized choices.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labeling {
    Canonical,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Zigzag,
    Replacement,
    Balanced,
    Square,
    Tensor,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Cycle,
    CycleLoops,
    CompleteLoops,
    Identity,
    Random,
    RandomConnected,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Euclid,
    TwoPoint,
    ThreePoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoincareMode {
    Bruteforce,
    Search,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a named graph family member and emit its edge list.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(long)]
        n: usize,
        /// Degree (random variants only).
        #[arg(long, default_value_t = 3)]
        d: u64,
    },
    /// Graph products of two edge-list files.
    Product {
        #[arg(value_enum)]
        kind: ProductKind,
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, value_enum, default_value_t = Labeling::Canonical)]
        labeling: Labeling,
    },
    /// The t-th power graph.
    Power {
        graph: PathBuf,
        #[arg(long)]
        t: u32,
    },
    /// The m-step Cesàro average graph.
    Cesaro {
        graph: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Edge completion to the target degree.
    Complete {
        graph: PathBuf,
        #[arg(long)]
        degree: u64,
    },
    /// Spectral report (eigenvalues, gaps, Euclidean Poincaré constants).
    Spectrum { graph: PathBuf },
    /// Poincaré constants against a kernel, by exact oracle or random
    /// search.
    Poincare {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = KernelKind::TwoPoint)]
        kernel: KernelKind,
        /// Metric power exponent for finite targets.
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, value_enum, default_value_t = PoincareMode::Bruteforce)]
        mode: PoincareMode,
        /// Enumeration cap (bruteforce) or iteration budget (search).
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Markov cotype check on random Gaussian points.
    Cotype {
        graph: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        kp: f64,
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long, default_value_t = 5)]
        dim: usize,
    },
    /// Linear code utilities.
    Code {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// Hypercube heat-kernel base graph and its code quotient.
    BaseGraph {
        #[arg(long)]
        n: usize,
        /// Continuous time t (τ = (1-e^{-t})/2); exclusive with --tau-num.
        #[arg(long)]
        t: Option<f64>,
        /// Exact rational τ numerator (with --tau-den).
        #[arg(long)]
        tau_num: Option<i64>,
        #[arg(long, default_value_t = 1000)]
        tau_den: i64,
        /// Quotient by the code in this file instead of materializing 2^n
        /// vertices.
        #[arg(long)]
        code: Option<PathBuf>,
        /// Pair-enumeration budget for the full graph.
        #[arg(long, default_value_t = 1 << 26)]
        edge_budget: u64,
    },
    /// Run the initial zigzag iteration from a config file
    /// (key=value lines: g0=<edge-list path>, t, j_max, labeling, seed).
    Pipeline {
        config: PathBuf,
        /// Directory for per-step edge lists.
        #[arg(long)]
        steps_dir: Option<PathBuf>,
        /// Also 3-regularize the final iterate.
        #[arg(long)]
        three_regularize: bool,
    },
    /// Run a verification suite; exits 1 when any instance fails.
    Verify {
        suite: String,
        /// Instance-count override.
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Inject a deliberately failing record (self-test).
        #[arg(long)]
        corrupt: bool,
    },
    /// Non-decay lower-bound experiment on an expander family.
    NondecayDemo {
        /// Vertex counts (powers of two recommended).
        #[arg(long, value_delimiter = ',', default_values_t = vec![64, 128, 256])]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4])]
        t: Vec<u32>,
        #[arg(long, default_value_t = 4)]
        d: u64,
    },
}

#[derive(Subcommand)]
enum CodeAction {
    /// Random code with verified parameters.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        min_dist: u32,
        #[arg(long, default_value_t = 10_000)]
        max_tries: u64,
    },
    /// Re-verify a code file's declared parameters.
    Verify { file: PathBuf },
    /// Dual code.
    Dual { file: PathBuf },
}

fn emit(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn emit_report<T: Serialize>(common: &Common, value: &T, text: String) -> Result<(), Error> {
    match common.format {
        Format::Json => {
            let s = serde_json::to_string_pretty(value)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            emit(common, &s)
        }
        Format::Text => emit(common, &text),
    }
}

fn emit_graph(common: &Common, g: &RegularMultigraph) -> Result<(), Error> {
    emit(common, &io::to_edge_list(g))
}

fn labeling_for(
    g1: &RegularMultigraph,
    g2: &RegularMultigraph,
    l: Labeling,
    seed: u64,
) -> Result<RotationLabeling, Error> {
    match l {
        Labeling::Canonical => products::default_labeling(g1, g2),
        Labeling::Random => products::random_labeling(g1, g2, seed),
    }
}

fn kernel_metric(kind: KernelKind) -> Option<Vec<Vec<f64>>> {
    match kind {
        KernelKind::Euclid => None,
        KernelKind::TwoPoint => Some(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
        KernelKind::ThreePoint => Some(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ]),
    }
}

fn parse_pipeline_config(path: &Path, common: &Common) -> Result<PipelineConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut g0 = None;
    let mut t = 2u32;
    let mut j_max = 3usize;
    let mut labeling = LabelingPolicy::Canonical;
    let mut seed = common.seed;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::Parse {
            line: idx + 1,
            message: "expected key=value".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |m: String| Error::Parse {
            line: idx + 1,
            message: m,
        };
        match key {
            "g0" => g0 = Some(io::read_graph(Path::new(value))?),
            "t" => t = value.parse().map_err(|_| bad("bad t".into()))?,
            "j_max" => j_max = value.parse().map_err(|_| bad("bad j_max".into()))?,
            "seed" => seed = value.parse().map_err(|_| bad("bad seed".into()))?,
            "labeling" => {
                labeling = match value {
                    "canonical" => LabelingPolicy::Canonical,
                    "random" => LabelingPolicy::Random,
                    _ => return Err(bad(format!("unknown labeling '{value}'"))),
                }
            }
            _ => return Err(bad(format!("unknown key '{key}'"))),
        }
    }
    Ok(PipelineConfig {
        g0: g0.ok_or(Error::InvalidInput("config must set g0".into()))?,
        t,
        j_max,
        labeling,
        seed,
    })
}

/// Maps an error to the documented exit code: 2 for usage/input problems,
/// 3 for resource exhaustion and convergence failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidInput(_) | Error::NonRegular { .. } => 2,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let common = &cli.common;
    let seed = common.seed;
    match &cli.command {
        Command::Build { kind, n, d } => {
            let g = match kind {
                BuildKind::Cycle => RegularMultigraph::cycle(*n)?,
                BuildKind::CycleLoops => RegularMultigraph::cycle_with_loops(*n)?,
                BuildKind::CompleteLoops => RegularMultigraph::complete_with_loops(*n)?,
                BuildKind::Identity => RegularMultigraph::identity(*n)?,
                BuildKind::Random => graph::random_regular(*n, *d, seed)?,
                BuildKind::RandomConnected => graph::random_regular_connected(*n, *d, seed, 1000)?,
            };
            emit_graph(common, &g)?;
        }
        Command::Product {
            kind,
            g1,
            g2,
            labeling,
        } => {
            let g1 = io::read_graph(g1)?;
            let g2 = io::read_graph(g2)?;
            let out = match kind {
                ProductKind::Tensor => products::tensor_graph(&g1, &g2)?,
                _ => {
                    let l = labeling_for(&g1, &g2, *labeling, seed)?;
                    match kind {
                        ProductKind::Zigzag => products::zigzag(&g1, &g2, &l)?,
                        ProductKind::Replacement => products::replacement(&g1, &g2, &l)?,
                        ProductKind::Balanced => products::balanced_replacement(&g1, &g2, &l)?,
                        ProductKind::Square => products::derandomized_square(&g1, &g2, &l)?,
                        ProductKind::Tensor => unreachable!(),
                    }
                }
            };
            emit_graph(common, &out)?;
        }
        Command::Power { graph, t } => {
            emit_graph(common, &io::read_graph(graph)?.power(*t)?)?;
        }
        Command::Cesaro { graph, m } => {
            emit_graph(common, &io::read_graph(graph)?.cesaro(*m)?)?;
        }
        Command::Complete { graph, degree } => {
            emit_graph(common, &io::read_graph(graph)?.edge_completion(*degree)?)?;
        }
        Command::Spectrum { graph } => {
            let g = io::read_graph(graph)?;
            let report = spectral::report(&g.normalized_adjacency(), Some(g.degree()))?;
            let text = format!(
                "n={} lambda2={:.9} lambda_abs={:.9} gamma={:.9} gamma_plus={:.9}\n",
                report.order,
                report.lambda2,
                report.lambda_abs,
                report.gamma_euclid,
                report.gamma_plus_euclid
            );
            emit_report(common, &report, text)?;
        }
        Command::Poincare {
            graph,
            kernel,
            p,
            mode,
            budget,
        } => {
            let g = io::read_graph(graph)?;
            match (kernel_metric(*kernel), mode) {
                (Some(dist), PoincareMode::Bruteforce) => {
                    let k = ExactKernel::from_metric(&dist, *p)?;
                    let plus = poincare::gamma_plus_bruteforce(&g, &k, *budget)?;
                    let one = poincare::gamma_bruteforce(&g, &k, *budget)?;
                    let report = json!({
                        "mode": "bruteforce",
                        "gamma": one.value.to_f64(),
                        "gamma_plus": plus.value.to_f64(),
                        "witness_f": plus.witness_f,
                        "witness_g": plus.witness_g,
                        "enumerated": plus.enumerated,
                    });
                    let text = format!(
                        "gamma={} gamma_plus={} (exact oracle, {} configurations)\n",
                        one.value.to_f64(),
                        plus.value.to_f64(),
                        plus.enumerated
                    );
                    emit_report(common, &report, text)?;
                }
                (Some(dist), PoincareMode::Search) => {
                    let spec = KernelSpec::FiniteMetric {
                        dist: dist.clone(),
                        p: *p as f64,
                    };
                    let (value, config) = poincare::gamma_plus_search(
                        &g.normalized_adjacency(),
                        &spec,
                        *budget,
                        seed,
                    )?;
                    let report = json!({
                        "mode": "search",
                        "gamma_plus_lower_bound": value,
                        "witness": config,
                    });
                    emit_report(common, &report, format!("gamma_plus >= {value}\n"))?;
                }
                (None, _) => {
                    let a = g.normalized_adjacency();
                    let report = json!({
                        "mode": "euclid",
                        "gamma": spectral::gamma_euclid(&a)?,
                        "gamma_plus": spectral::gamma_plus_euclid(&a)?,
                    });
                    let text = format!(
                        "gamma={} gamma_plus={}\n",
                        spectral::gamma_euclid(&a)?,
                        spectral::gamma_plus_euclid(&a)?
                    );
                    emit_report(common, &report, text)?;
                }
            }
        }
        Command::Cotype {
            graph,
            p,
            q,
            kp,
            m,
            dim,
        } => {
            let g = io::read_graph(graph)?;
            let points = random_gaussian(g.vertex_count(), *dim, seed);
            let params = CotypeParams {
                p: *p,
                q: *q,
                k_p: *kp,
                m: *m,
            };
            let check = poincare::check_cotype(&g.normalized_adjacency(), &points, &params)?;
            let text = format!(
                "holds={} slack={:.6e} displacement={:.6e} edge={:.6e} rhs={:.6e}\n",
                check.holds, check.slack, check.term_displacement, check.term_edge, check.rhs
            );
            emit_report(common, &check, text)?;
            if !check.holds {
                return Ok(1);
            }
        }
        Command::Code { action } => match action {
            CodeAction::Gen {
                n,
                dim,
                min_dist,
                max_tries,
            } => {
                let code = codes::random_code(*n, *dim, *min_dist, seed, *max_tries)?;
                emit(common, &codes::to_text(&code))?;
            }
            CodeAction::Verify { file } => {
                let text = std::fs::read_to_string(file)?;
                match codes::from_text(&text) {
                    Ok(code) => {
                        let report = json!({
                            "n": code.n,
                            "dim": code.dim,
                            "min_distance": code.min_distance,
                            "good": code.is_good_tenth(),
                        });
                        emit_report(
                            common,
                            &report,
                            format!(
                                "n={} dim={} min_dist={:?} good={}\n",
                                code.n,
                                code.dim,
                                code.min_distance,
                                code.is_good_tenth()
                            ),
                        )?;
                    }
                    Err(e) => {
                        eprintln!("verification failed: {e}");
                        return Ok(1);
                    }
                }
            }
            CodeAction::Dual { file } => {
                let text = std::fs::read_to_string(file)?;
                let code = codes::from_text(&text)?;
                emit(common, &codes::to_text(&code.dual()?))?;
            }
        },
        Command::BaseGraph {
            n,
            t,
            tau_num,
            tau_den,
            code,
            edge_budget,
        } => {
            let params = match (t, tau_num) {
                (Some(t), None) => HeatParams::from_t(*t, *n)?,
                (None, Some(num)) => HeatParams::from_tau_rational(*num, *tau_den, *n)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "give exactly one of --t or --tau-num".into(),
                    ))
                }
            };
            let g = match code {
                Some(path) => {
                    let code = codes::from_text(&std::fs::read_to_string(path)?)?;
                    heat::quotient_heat_graph(&params, &code)?
                }
                None => heat::heat_graph(&params, *edge_budget)?,
            };
            let bounds = heat::tau_estimates_check(&params);
            let report = json!({
                "n": n,
                "tau": params.tau_f64(),
                "sigma": params.sigma_f64()?,
                "degree": params.degree()?.to_string(),
                "vertices": g.vertex_count(),
                "bounds_check": bounds.as_ref().map(|r| r.all_ok()).ok(),
            });
            let text = format!(
                "tau={} sigma={} degree={} vertices={} bounds_check={:?}\n",
                params.tau_f64(),
                params.sigma_f64()?,
                params.degree()?,
                g.vertex_count(),
                bounds.as_ref().map(|r| r.all_ok()).ok()
            );
            match &common.out {
                Some(path) => {
                    io::write_graph(path, &g)?;
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report)
                            .map_err(|e| Error::InvalidInput(e.to_string()))?
                    );
                }
                None => emit_report(common, &report, text)?,
            }
        }
        Command::Pipeline {
            config,
            steps_dir,
            three_regularize,
        } => {
            let cfg = parse_pipeline_config(config, common)?;
            let (graphs, mut trace) = pipeline::initial_iteration(&cfg)?;
            if let Some(dir) = steps_dir {
                std::fs::create_dir_all(dir)?;
                for (j, g) in graphs.iter().enumerate() {
                    io::write_graph(&dir.join(format!("f{}.edges", j + 1)), g)?;
                }
            }
            if *three_regularize {
                let last = graphs.last().ok_or(Error::InvalidInput("empty run".into()))?;
                let (cubic, _) = pipeline::three_regularize(last, cfg.labeling, cfg.seed)?;
                if let Some(dir) = steps_dir {
                    io::write_graph(&dir.join("three_regular.edges"), &cubic)?;
                }
                let (lam, gp) = match spectral::report(&cubic.normalized_adjacency(), Some(3)) {
                    Ok(r) => (Some(r.lambda_abs), Some(r.gamma_plus_euclid)),
                    Err(_) => (None, None),
                };
                trace.steps.push(pipeline::StageRecord {
                    label: "three-regularized".into(),
                    vertices: cubic.vertex_count(),
                    degree: cubic.degree(),
                    lambda_abs: lam,
                    gamma_plus: gp,
                    gamma_plus_cesaro: None,
                    gamma_plus_completed: None,
                });
            }
            let mut text = String::new();
            for s in &trace.steps {
                text.push_str(&format!(
                    "{}: {} vertices, degree {}, lambda_abs {:?}, gamma_plus {:?}\n",
                    s.label, s.vertices, s.degree, s.lambda_abs, s.gamma_plus
                ));
            }
            emit_report(common, &trace, text)?;
        }
        Command::Verify {
            suite,
            instances,
            tolerance,
            corrupt,
        } => {
            let mut cfg = VerifyConfig::new(Suite::from_str(suite)?, seed);
            cfg.instances = *instances;
            cfg.tolerance = *tolerance;
            cfg.corrupt = *corrupt;
            let report = verify::run_verify(&cfg)?;
            emit_report(common, &report, report.to_table())?;
            if !report.passed {
                return Ok(1);
            }
        }
        Command::NondecayDemo { sizes, t, d } => {
            let mut rows = Vec::new();
            let mut text = String::new();
            for &n in sizes {
                let g = graph::random_regular_connected(n, *d, seed, 1000)?;
                for &t in t {
                    let r = poincare::nondecay_experiment(&g, t)?;
                    text.push_str(&format!(
                        "n={n} t={t} lower_bound_graph={:.6} lower_bound_cesaro={:.6} diameter={}\n",
                        r.lower_bound_graph, r.lower_bound_cesaro, r.diameter
                    ));
                    rows.push(r);
                }
            }
            emit_report(common, &rows, text)?;
        }
    }
    Ok(0)
}

fn random_gaussian(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    (-2.0 * u.ln()).sqrt() * v.cos()
                })
                .collect()
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

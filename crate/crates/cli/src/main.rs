use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use htube_cli::output::{boundary_csv, fmt_sig, BoundaryCurve};
use htube_cli::{run_suite, AlgebraConfig, Suite, SuiteContext};
use htube_core::algebra::HTypeAlgebra;
use htube_core::domains::{convexity_check, injectivity_scan, preimage_solve, ImageRegion, RadialDomain, ScanConfig};
use htube_core::embedding::{boundary_embed_check, boundary_samples, embed_frame};
use htube_core::geodesic::{geodesic_trajectory, phi3, TangentVector3};
use htube_core::ptilde::{det_dptilde3, ptilde3, singular_criterion};
use nalgebra::DVector;
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "htube", version, about = "Tube-domain computations on H-type groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a boundary radius sqrt f(c) or the level curve rho_A as CSV.
    DomainBoundary {
        #[arg(value_enum)]
        curve: CurveArg,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, required = true)]
        range: Vec<f64>,
        #[arg(long)]
        step: f64,
        #[arg(long = "A", allow_negative_numbers = true)]
        level: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite; exit code 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Report path (default htube-verify-<suite>.json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Factor applied to every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
    },
    /// Evaluate a single map at a point.
    Point {
        #[arg(value_enum)]
        tool: PointTool,
        /// geodesic: t a b c; ptilde, detjac: a b c; criterion: rho tau.
        #[arg(allow_negative_numbers = true, required = true)]
        args: Vec<f64>,
    },
    /// Closed-form geodesic through the identity as CSV `t,a,b,c,numeric_error`.
    Geodesic {
        #[arg(allow_negative_numbers = true, num_args = 3, value_names = ["A", "B", "C"], required = true)]
        v: Vec<f64>,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a domain for distinct points with equal images.
    ScanInjectivity {
        #[arg(value_enum)]
        domain: DomainArg,
        #[arg(long, default_value_t = 500)]
        n_a: usize,
        #[arg(long, default_value_t = 1000)]
        n_c: usize,
        #[arg(long, default_value_t = 6.0)]
        c_max: f64,
        /// Full report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for preimages of a target, or test convexity of a domain image.
    ImageProbe {
        /// Target `A B C`.
        #[arg(allow_negative_numbers = true, num_args = 3, value_names = ["A", "B", "C"])]
        target: Vec<f64>,
        #[arg(long, value_enum, conflicts_with = "target")]
        convexity: Option<DomainArg>,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
    },
    /// Check the embedded three-dimensional slice against the boundary of the tube.
    EmbedCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    /// JSON algebra config (default: quaternionic).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    F0,
    F1,
    F2,
    Rho,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointTool {
    Geodesic,
    Ptilde,
    Detjac,
    Criterion,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    O0,
    O1,
    O2,
}

impl From<DomainArg> for RadialDomain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::O0 => RadialDomain::O0,
            DomainArg::O1 => RadialDomain::O1,
            DomainArg::O2 => RadialDomain::O2,
        }
    }
}

enum Failure {
    Usage(String),
    Checks,
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_algebra(args: &AlgebraArgs) -> Result<(HTypeAlgebra, String), Failure> {
    match &args.config {
        None => Ok((HTypeAlgebra::quaternionic(), "quaternionic".into())),
        Some(p) => {
            let cfg = AlgebraConfig::load(p).map_err(|e| Failure::Usage(format!("{e:#}")))?;
            let alg = cfg.build().map_err(|e| Failure::Usage(format!("{e:#}")))?;
            Ok((alg, cfg.name))
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        usage("--tol must be a positive factor")
    }
}

fn print_values(values: &[f64]) {
    let parts: Vec<String> = values.iter().map(|&x| fmt_sig(x)).collect();
    println!("{}", parts.join(" "));
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::DomainBoundary {
            curve,
            range,
            step,
            level,
            out,
        } => {
            let (min, max) = (range[0], range[1]);
            if !(step > 0.0 && step.is_finite()) {
                return usage("--step must be positive");
            }
            if !(min.is_finite() && max.is_finite() && min <= max) {
                return usage("--range needs finite MIN <= MAX");
            }
            let curve = match curve {
                CurveArg::F0 => BoundaryCurve::F0,
                CurveArg::F1 => BoundaryCurve::F1,
                CurveArg::F2 => BoundaryCurve::F2,
                CurveArg::Rho => BoundaryCurve::Rho,
            };
            if curve == BoundaryCurve::Rho && !level.is_some_and(|a| a >= 0.0) {
                return usage("rho needs --A with a non-negative value");
            }
            boundary_csv(sink(out.as_deref())?, curve, level, min, max, step)?;
            Ok(())
        }
        Command::Verify {
            suite,
            algebra,
            out,
            tol,
        } => {
            check_tol(tol)?;
            let (alg, alg_name) = load_algebra(&algebra)?;
            let ctx = SuiteContext {
                alg,
                alg_name,
                tol_scale: tol,
            };
            let report = run_suite(suite, &ctx);
            let path = out.unwrap_or_else(|| PathBuf::from(format!("htube-verify-{}.json", suite.name())));
            std::fs::write(&path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            print!("{}", report.summary());
            println!("report written to {}", path.display());
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Point { tool, args } => {
            let want = match tool {
                PointTool::Geodesic => 4,
                PointTool::Ptilde | PointTool::Detjac => 3,
                PointTool::Criterion => 2,
            };
            if args.len() != want {
                return usage(format!("expected {want} numbers, got {}", args.len()));
            }
            match tool {
                PointTool::Geodesic => {
                    let g = phi3(
                        Complex64::new(args[0], 0.0),
                        TangentVector3::new(args[1], args[2], args[3]),
                    );
                    print_values(&g.re.to_vec());
                }
                PointTool::Ptilde => {
                    print_values(&ptilde3(TangentVector3::new(args[0], args[1], args[2])).to_array());
                }
                PointTool::Detjac => {
                    print_values(&[det_dptilde3(TangentVector3::new(args[0], args[1], args[2]))]);
                }
                PointTool::Criterion => print_values(&[singular_criterion(args[0], args[1])]),
            }
            Ok(())
        }
        Command::Geodesic { v, t_end, steps, out } => {
            if !(t_end.is_finite() && steps > 0) {
                return usage("--t-end must be finite and --steps positive");
            }
            let v = TangentVector3::new(v[0], v[1], v[2]);
            let h1 = HTypeAlgebra::heisenberg(1).expect("n = 1 is valid");
            let traj = geodesic_trajectory(&h1, &v.to_element(), t_end, steps).map_err(anyhow::Error::from)?;
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(sink(out.as_deref())?);
            w.write_record(["t", "a", "b", "c", "numeric_error"])
                .map_err(anyhow::Error::from)?;
            for (t, g) in traj {
                let exact = phi3(Complex64::new(t, 0.0), v).re;
                let err = (&g.coords - &exact).max_abs();
                let x = exact.to_vec();
                w.write_record([t, x[0], x[1], x[2], err].map(fmt_sig))
                    .map_err(anyhow::Error::from)?;
            }
            w.flush()?;
            Ok(())
        }
        Command::ScanInjectivity {
            domain,
            n_a,
            n_c,
            c_max,
            out,
        } => {
            if n_a == 0 || n_c == 0 || !(c_max > 0.0 && c_max.is_finite()) {
                return usage("--n-a, --n-c and --c-max must be positive");
            }
            let cfg = ScanConfig {
                n_a,
                n_c,
                c_max,
                ..ScanConfig::default()
            };
            let report = injectivity_scan(domain.into(), &cfg);
            println!(
                "{}: {} grid points, {} candidate row pairs, {} collisions",
                report.domain,
                report.grid_points,
                report.candidate_row_pairs,
                report.collisions.len()
            );
            for c in report.collisions.iter().take(10) {
                println!(
                    "  ({}, 0, {}) ~ ({}, 0, {}) -> ({}, 0, {})  gap {}",
                    fmt_sig(c.first.a),
                    fmt_sig(c.first.c),
                    fmt_sig(c.second.a),
                    fmt_sig(c.second.c),
                    fmt_sig(c.image.a),
                    fmt_sig(c.image.c),
                    fmt_sig(c.image_gap)
                );
            }
            if let Some(p) = out {
                let json = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
                std::fs::write(&p, json + "\n").with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(())
        }
        Command::ImageProbe {
            target,
            convexity,
            pairs,
        } => match (convexity, target.as_slice()) {
            (Some(d), _) => {
                let region = ImageRegion::of_domain(d.into());
                let r = convexity_check(region, pairs, 1);
                println!("{:?}: {} pairs tested, convex: {}", region, r.pairs_tested, r.convex);
                if let Some(w) = r.witness {
                    println!(
                        "  segment ({}) - ({}) leaves the region at ({})",
                        fmt_point(w.p),
                        fmt_point(w.q),
                        fmt_point(w.excluded)
                    );
                }
                Ok(())
            }
            (None, &[a, b, c]) => {
                let sols = preimage_solve(TangentVector3::new(a, b, c), &[]);
                if sols.is_empty() {
                    println!("no preimage found");
                }
                for s in sols {
                    let inside: Vec<&str> = ["O0", "O1", "O2"]
                        .iter()
                        .zip(s.membership)
                        .filter_map(|(n, m)| m.then_some(*n))
                        .collect();
                    println!(
                        "({})  residual {}  det {}  in [{}]",
                        fmt_point(s.point),
                        fmt_sig(s.residual),
                        fmt_sig(s.det),
                        inside.join(", ")
                    );
                }
                Ok(())
            }
            (None, _) => usage("give a target A B C or --convexity <domain>"),
        },
        Command::EmbedCheck { algebra, samples, tol } => {
            check_tol(tol)?;
            let (alg, name) = load_algebra(&algebra)?;
            if alg.dim_v() < 2 {
                return usage("the algebra needs dim_v >= 2");
            }
            let mut v1 = DVector::zeros(alg.dim_v());
            v1[0] = 1.0;
            let mut yb = DVector::zeros(alg.dim_z());
            yb[0] = 1.0;
            let frame = embed_frame(&alg, &v1, &yb).map_err(anyhow::Error::from)?;
            let pts = boundary_samples(samples, 5.0, 1);
            let r = boundary_embed_check(&alg, &frame, &pts).map_err(anyhow::Error::from)?;
            println!("algebra {name}: {} boundary samples", r.samples);
            println!("  frame residual        {}", fmt_sig(r.frame_residual));
            println!("  max |criterion|       {}", fmt_sig(r.max_abs_criterion));
            println!("  max commutativity gap {}", fmt_sig(r.max_commutativity));
            if r.passed(1e-12 * tol, 1e-9 * tol, 1e-12 * tol) {
                println!("pass");
                Ok(())
            } else {
                println!("fail");
                Err(Failure::Checks)
            }
        }
    }
}

fn fmt_point(p: TangentVector3) -> String {
    p.to_array().map(fmt_sig).join(", ")
}

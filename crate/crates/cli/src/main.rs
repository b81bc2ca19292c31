//! Command line for the anisotropic mixed-norm laboratory.
//!
//! Exit codes: 0 all assertions passed, 1 an assertion failed, 2 bad
//! configuration or usage.

use anilab_cli::report::SuiteConfig;
use anilab_cli::{field_io, suites};
use anilab_core::aniso::{AnisotropyVector, Convention};
use anilab_core::grid::{Grid, GridField};
use anilab_core::lp::{build_family, LPFlavor};
use anilab_core::norms::{
    sobolev_norm, space_quasi_norm, ExponentVector, Scale, SpaceParams,
};
use anilab_core::trace::{
    admissible, build_extension_family, extend, trace, Rat, RationalSpaceParams, RExp, TraceAxis,
    TraceSpec,
};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "anilab", version, about = "anisotropic mixed-norm function space laboratory")]
struct Cli {
    /// JSON config file with suite defaults (overridden by flags).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random seed for ensembles.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid as N or NxN or NxNxN (power-of-two points per axis).
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Output directory for reports and fields.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rerun suites at doubled resolution and check constant stability.
    #[arg(long, global = true)]
    refine_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldSource {
    /// Read the input field from a binary container.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Generate a random band-limited field with |xi|_a <= R.
    #[arg(long)]
    random_ball: Option<f64>,
    /// Half-periods L per axis, comma separated (default pi).
    #[arg(long)]
    length: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Split a field into dyadic blocks and store them.
    Decompose {
        #[command(flatten)]
        source: FieldSource,
        /// Anisotropy weights, comma separated.
        #[arg(long, default_value = "1,1")]
        a: String,
    },
    /// Evaluate a quasi-norm of a field.
    Norm {
        #[command(flatten)]
        source: FieldSource,
        #[arg(long, default_value = "F")]
        scale: String,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value = "1,1")]
        a: String,
        /// Integrability exponents, comma separated ("inf" allowed).
        #[arg(long, default_value = "2,2")]
        p: String,
        #[arg(long, default_value = "2")]
        q: String,
    },
    /// Trace a field on x_1 = 0 or x_n = 0.
    Trace {
        #[command(flatten)]
        source: FieldSource,
        #[arg(long, default_value = "inner")]
        axis: String,
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[arg(long, default_value = "1,1")]
        a: String,
    },
    /// Extend tangential data by the dilated-profile operator K_nu.
    Extend {
        /// Tangential data (binary container).
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value = "inner")]
        axis: String,
        #[arg(long, default_value_t = 0)]
        nu: u32,
        #[arg(long, default_value_t = 0)]
        moments: u32,
        /// Normal-axis half-period and points, as "L:N".
        #[arg(long, default_value = "320:8192")]
        normal: String,
        #[arg(long, default_value = "1,1")]
        a: String,
    },
    /// Exact admissibility verdict for a trace.
    Admissible {
        /// Smoothness as a rational, e.g. 3/2.
        #[arg(long)]
        s: String,
        /// Weights as rationals, comma separated.
        #[arg(long)]
        a: String,
        /// Exponents as rationals, comma separated.
        #[arg(long)]
        p: String,
        /// Sum exponent as a rational or "inf".
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value = "inner")]
        axis: String,
        #[arg(long, default_value_t = 0)]
        order: u32,
    },
    /// Norm table and slope fit of the borderline counterexample family.
    Counterexample {
        #[arg(long, default_value = "1,1")]
        a: String,
        #[arg(long, default_value = "2,2")]
        p: String,
        /// Trace axis index (0-based).
        #[arg(long, default_value_t = 1)]
        axis_m: usize,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Smoothness (defaults to the borderline).
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = 4)]
        j_lo: usize,
        #[arg(long, default_value_t = 12)]
        j_hi: usize,
    },
    /// Run a named verification suite (or "all").
    Verify {
        suite: String,
        #[arg(long)]
        ensemble: Option<usize>,
    },
    /// List registered suites.
    Suites,
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                t.parse::<f64>().with_context(|| format!("bad number '{t}'"))
            }
        })
        .collect()
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        Ok(Rat::new(n.trim().parse()?, d.trim().parse()?))
    } else {
        Ok(Rat::from_integer(s.parse()?))
    }
}

fn parse_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}

fn parse_axis(s: &str) -> Result<TraceAxis> {
    match s.to_ascii_lowercase().as_str() {
        "inner" | "1" | "x1" => Ok(TraceAxis::Inner),
        "outer" | "n" | "xn" => Ok(TraceAxis::Outer),
        other => bail!("axis must be 'inner' or 'outer', got '{other}'"),
    }
}

fn parse_grid_spec(spec: &str, lengths: Option<&str>) -> Result<Grid> {
    let points: Vec<usize> = spec
        .to_ascii_lowercase()
        .split('x')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad grid '{spec}'")))
        .collect::<Result<_>>()?;
    let ls: Vec<f64> = match lengths {
        Some(l) => parse_floats(l)?,
        None => vec![std::f64::consts::PI; points.len()],
    };
    if ls.len() != points.len() {
        bail!("grid and length dimension mismatch");
    }
    let dims: Vec<(f64, usize)> = ls.into_iter().zip(points).collect();
    Grid::from_dims(&dims).map_err(|e| anyhow!("{e}"))
}

fn load_field(cli_grid: Option<&str>, source: &FieldSource, a: &AnisotropyVector, seed: u64) -> Result<GridField> {
    if let Some(path) = &source.field {
        return field_io::read_field(path);
    }
    let spec = cli_grid.unwrap_or("256x256");
    let grid = parse_grid_spec(spec, source.length.as_deref())?;
    let r = source.random_ball.unwrap_or(4.0);
    let mut rng = anilab_cli::ensemble::rng_for(seed, 0);
    Ok(anilab_cli::ensemble::band_limited_field(
        &mut rng,
        &grid,
        a,
        anilab_cli::ensemble::Support::Ball(r),
    ))
}

fn rat_string(r: Rat) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn run(cli: &Cli) -> Result<i32> {
    let seed = cli.seed.unwrap_or(7);
    match &cli.command {
        Command::Suites => {
            for def in suites::REGISTRY {
                println!("{:24} {}", def.name, def.description);
            }
            Ok(0)
        }
        Command::Decompose { source, a } => {
            let a = AnisotropyVector::new(parse_floats(a)?, Convention::Raw)
                .map_err(|e| anyhow!("{e}"))?;
            let u = load_field(cli.grid.as_deref(), source, &a, seed)?;
            let fam = build_family(&a, u.grid(), LPFlavor::Inhomogeneous)
                .map_err(|e| anyhow!("{e}"))?;
            let d = fam.decompose(&u).map_err(|e| anyhow!("{e}"))?;
            let dir = out_dir(cli);
            std::fs::create_dir_all(&dir)?;
            for (j, b) in d.blocks().iter().enumerate() {
                field_io::write_field(b, &dir.join(format!("block-{j}.anif")))?;
            }
            println!(
                "{}",
                serde_json::json!({
                    "blocks": d.blocks().len(),
                    "j_max": fam.j_max(),
                    "truncation_defect": d.truncation_defect(),
                    "out": dir.display().to_string(),
                })
            );
            Ok(0)
        }
        Command::Norm { source, scale, s, a, p, q } => {
            let a = AnisotropyVector::new(parse_floats(a)?, Convention::Raw)
                .map_err(|e| anyhow!("{e}"))?;
            let u = load_field(cli.grid.as_deref(), source, &a, seed)?;
            let p = ExponentVector::new(parse_floats(p)?).map_err(|e| anyhow!("{e}"))?;
            let qv = parse_floats(q)?[0];
            let scale = match scale.to_ascii_uppercase().as_str() {
                "F" => Scale::F,
                "B" => Scale::B,
                "W" => Scale::W,
                "H" => Scale::H,
                other => bail!("scale must be F, B, W or H, got '{other}'"),
            };
            let sp = SpaceParams::new(*s, a.clone(), p, qv, scale).map_err(|e| anyhow!("{e}"))?;
            let json = match scale {
                Scale::F | Scale::B => {
                    let fam = build_family(&a, u.grid(), LPFlavor::Inhomogeneous)
                        .map_err(|e| anyhow!("{e}"))?;
                    let rep = space_quasi_norm(&u, &sp, &fam).map_err(|e| anyhow!("{e}"))?;
                    serde_json::json!({
                        "value": rep.value,
                        "block_contributions": rep.block_contributions,
                        "tail_relative": rep.tail_relative,
                        "truncation_defect": rep.truncation_defect,
                    })
                }
                Scale::W | Scale::H => {
                    let v = sobolev_norm(&u, &sp).map_err(|e| anyhow!("{e}"))?;
                    serde_json::json!({ "value": v })
                }
            };
            println!("{json}");
            Ok(0)
        }
        Command::Trace { source, axis, order, a } => {
            let a = AnisotropyVector::new(parse_floats(a)?, Convention::Raw)
                .map_err(|e| anyhow!("{e}"))?;
            let u = load_field(cli.grid.as_deref(), source, &a, seed)?;
            let fam = build_family(&a, u.grid(), LPFlavor::Inhomogeneous)
                .map_err(|e| anyhow!("{e}"))?;
            let spec = TraceSpec::single(parse_axis(axis)?, *order);
            let p_diag = ExponentVector::uniform(2.0, u.grid().dim() - 1)
                .map_err(|e| anyhow!("{e}"))?;
            let out = trace(&u, &spec, &fam, Some(&p_diag)).map_err(|e| anyhow!("{e}"))?;
            let dir = out_dir(cli);
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("trace.anif");
            field_io::write_field(&out.field, &path)?;
            std::fs::write(dir.join("trace.csv"), field_io::field_csv(&out.field)?)?;
            println!(
                "{}",
                serde_json::json!({
                    "out": path.display().to_string(),
                    "partial_sum_increments": out.increments,
                })
            );
            Ok(0)
        }
        Command::Extend { field, axis, nu, moments, normal, a } => {
            let v = field_io::read_field(field)?;
            let axis = parse_axis(axis)?;
            let a = AnisotropyVector::new(parse_floats(a)?, Convention::Raw)
                .map_err(|e| anyhow!("{e}"))?;
            let (l, n) = normal
                .split_once(':')
                .ok_or_else(|| anyhow!("normal axis spec must be L:N"))?;
            let (l, n): (f64, usize) = (l.parse()?, n.parse()?);
            let mut dims: Vec<(f64, usize)> = (0..v.grid().dim())
                .map(|k| (v.grid().half_period(k), v.grid().points(k)))
                .collect();
            match axis {
                TraceAxis::Inner => dims.insert(0, (l, n)),
                TraceAxis::Outer => dims.push((l, n)),
            }
            let target = Grid::from_dims(&dims).map_err(|e| anyhow!("{e}"))?;
            let tang_a = a
                .drop_axis(axis.index(target.dim()))
                .map_err(|e| anyhow!("{e}"))?;
            let tang_fam = build_family(&tang_a, v.grid(), LPFlavor::Inhomogeneous)
                .map_err(|e| anyhow!("{e}"))?;
            let exfam = build_extension_family(axis, *moments.max(nu), &target)
                .map_err(|e| anyhow!("{e}"))?;
            let ext = extend(&v, &exfam, &tang_fam, &target, &a, *nu).map_err(|e| anyhow!("{e}"))?;
            let dir = out_dir(cli);
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("extension.anif");
            field_io::write_field(&ext, &path)?;
            println!("{}", serde_json::json!({ "out": path.display().to_string() }));
            Ok(0)
        }
        Command::Admissible { s, a, p, q, axis, order } => {
            let qv = if q.trim().eq_ignore_ascii_case("inf") {
                RExp::Infinity
            } else {
                RExp::Finite(parse_rat(q)?)
            };
            let sp = RationalSpaceParams::new(parse_rat(s)?, parse_rats(a)?, parse_rats(p)?, qv)
                .map_err(|e| anyhow!("{e}"))?;
            let spec = TraceSpec::single(parse_axis(axis)?, *order);
            let v = admissible(&sp, &spec).map_err(|e| anyhow!("{e}"))?;
            println!(
                "{}",
                serde_json::json!({
                    "admissible": v.admissible,
                    "borderline": v.borderline,
                    "bound": rat_string(v.bound),
                    "trace_space": {
                        "scale": if v.trace_space.besov { "B" } else { "F" },
                        "s": rat_string(v.trace_space.s),
                        "a": v.trace_space.a.iter().map(|&r| rat_string(r)).collect::<Vec<_>>(),
                        "p": v.trace_space.p.iter().map(|&r| rat_string(r)).collect::<Vec<_>>(),
                        "q": rat_string(v.trace_space.q),
                    },
                    "strong_condition": v.strong_condition,
                })
            );
            Ok(0)
        }
        Command::Counterexample { a, p, axis_m, q, s, j_lo, j_hi } => {
            let a = AnisotropyVector::new(parse_floats(a)?, Convention::Raw)
                .map_err(|e| anyhow!("{e}"))?;
            let p = ExponentVector::new(parse_floats(p)?).map_err(|e| anyhow!("{e}"))?;
            let fam = anilab_core::counterexample::build_counterexample_family(
                *axis_m, &a, &p, *j_lo, *j_hi,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let s = s.unwrap_or_else(|| fam.borderline_s());
            let mut rows = Vec::new();
            let mut csv = String::from("j,norm\n");
            for j in *j_lo..=*j_hi {
                let v = fam.besov_norm(j, s, *q).map_err(|e| anyhow!("{e}"))?;
                csv.push_str(&format!("{j},{v:.17e}\n"));
                rows.push((j as f64, v));
            }
            let js: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let ns: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let fit = anilab_core::counterexample::fit_asymptotics(&js, &ns)
                .map_err(|e| anyhow!("{e}"))?;
            let dir = out_dir(cli);
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("counterexample-norms.csv"), csv)?;
            println!(
                "{}",
                serde_json::json!({
                    "s": s,
                    "q": q,
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "residual": fit.residual,
                    "expected_slope": 1.0 / q - 1.0,
                })
            );
            Ok(0)
        }
        Command::Verify { suite, ensemble } => {
            let mut all_pass = true;
            let names: Vec<String> = if suite == "all" {
                suites::suite_names().iter().map(|s| s.to_string()).collect()
            } else {
                vec![suite.clone()]
            };
            for name in names {
                let mut cfg = if let Some(path) = &cli.config {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading config {}", path.display()))?;
                    let mut c: SuiteConfig = serde_json::from_str(&text)?;
                    c.suite = name.clone();
                    c
                } else {
                    SuiteConfig::new(&name)
                };
                if let Some(seed) = cli.seed {
                    cfg.seed = seed;
                }
                if let Some(n) = ensemble {
                    cfg.ensemble = *n;
                }
                if cli.refine_check {
                    cfg.refine_check = true;
                }
                let report = suites::run_suite(&cfg)?;
                report.emit(&out_dir(cli))?;
                let verdict = if report.pass { "pass" } else { "FAIL" };
                println!(
                    "{verdict}  {name}: max ratio {:.4}, p95 {:.4} (declared {}), {} cases",
                    report.empirical_max,
                    report.empirical_p95,
                    report.declared_constant,
                    report.cases.len()
                );
                if !report.pass {
                    for c in report.cases.iter().filter(|c| !c.pass).take(5) {
                        println!("       failing case {}: lhs {:.6e}, rhs {:.6e}", c.id, c.lhs, c.rhs);
                    }
                    all_pass = false;
                }
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

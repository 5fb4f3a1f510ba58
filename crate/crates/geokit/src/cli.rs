//! Command-line surface: every library capability as a subcommand emitting
//! CSV datasets (with JSON metadata sidecars where a grid is involved).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cc::{self, CCSolverConfig};
use crate::curve::{self, SampledCurve};
use crate::embed;
use crate::error::{GeoError, Result};
use crate::grushin;
use crate::heis::{self, HeisPoint};
use crate::lab;

#[derive(Parser)]
#[command(name = "geokit", version, about = "Sub-Riemannian geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two points.
    Dist(DistArgs),
    /// Random-pair scans: metric comparability or embedding distortion.
    Scan(ScanArgs),
    /// Horizontal lift of a planar curve read from CSV.
    Lift(LiftArgs),
    /// Sample a horizontal sphere embedding to CSV.
    Embed(EmbedArgs),
    /// Numerical verifications.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Annular horizontal Sobolev energies of the cavitation composition.
    Energy(EnergyArgs),
    /// Grushin-plane operations.
    Grushin {
        #[command(subcommand)]
        what: GrushinCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Koranyi,
    Cc,
    Grushin,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbedKind {
    Cayley,
    Legendrian,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanKind {
    Comparability,
    Bilip,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetMetricArg {
    Koranyi,
    Cc,
}

#[derive(Clone, Copy, ValueEnum)]
enum StokesMap {
    Identity,
    Stretch,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long, value_enum)]
    metric: Metric,
    /// Heisenberg index n (ignored for the Grushin metric).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// First point, comma-separated coordinates.
    #[arg(long)]
    p: String,
    /// Second point, comma-separated coordinates.
    #[arg(long)]
    q: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    kind: ScanKind,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Box lower bound (comparability scans).
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    lo: f64,
    /// Box upper bound (comparability scans).
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    /// Embedding scanned by bilip.
    #[arg(long, value_enum, default_value_t = EmbedKind::Legendrian)]
    map: EmbedKind,
    /// Target metric for bilip scans.
    #[arg(long, value_enum, default_value_t = TargetMetricArg::Koranyi)]
    metric: TargetMetricArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    /// Input CSV with header `s,x1,y1,...`.
    #[arg(long)]
    input: PathBuf,
    /// Initial height of the lift.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long, value_enum)]
    kind: EmbedKind,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Contact residual of the cavitation composition on a punctured grid.
    Contact {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        h: f64,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Also dump the sampled grid (with a JSON sidecar).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Horizontal gradient norm of the CC distance at random points.
    Eikonal {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        /// Half-width of the sampling box.
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular-value scan of an embedding Jacobian.
    Rank {
        #[arg(long, value_enum, default_value_t = EmbedKind::Legendrian)]
        kind: EmbedKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary vs interior integral of the pullback Stokes identity.
    Stokes {
        #[arg(long, value_enum, default_value_t = StokesMap::Identity)]
        map: StokesMap,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnergyArgs {
    /// Sobolev exponent.
    #[arg(long, default_value_t = 1.5)]
    p: f64,
    /// Puncture radius.
    #[arg(long, default_value_t = 1.0 / 64.0)]
    eps: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = 1.0 / 256.0)]
    h: f64,
    /// Number of dyadic annuli reported outward from eps.
    #[arg(long, default_value_t = 6)]
    annuli: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GrushinCmd {
    /// Sample a geodesic from the origin to (0, y1) as CSV `t,x,y`.
    Geodesic {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        y1: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Use the x < 0 member of the family.
        #[arg(long)]
        negative: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gauss curvature at horizontal coordinate x.
    Curvature {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Grushin distance between two planar points `x,y`.
    Dist {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 64)]
        controls: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses argv, runs the requested command, and returns the process exit
/// code: 0 on success, 2 on usage or input errors, 3 when a solver fails to
/// converge.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(v) = std::env::var("GEOKIT_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
        }
    }
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(GeoError::Unconverged { best_bound, residual }) => {
            eprintln!("error: solver did not converge (best bound {best_bound}, residual {residual})");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| GeoError::InvalidInput(format!("bad coordinate {c:?}")))
        })
        .collect()
}

fn parse_heis(n: usize, s: &str) -> Result<HeisPoint> {
    HeisPoint::new(n, parse_point(s)?)
}

fn parse_planar(s: &str) -> Result<(f64, f64)> {
    let v = parse_point(s)?;
    if v.len() != 2 {
        return Err(GeoError::InvalidInput("Grushin points have two coordinates".into()));
    }
    Ok((v[0], v[1]))
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

fn write_sidecar(out: &Path, sidecar: &lab::GridSidecar) -> Result<()> {
    let path = out.with_extension("json");
    let file = File::create(path)?;
    serde_json::to_writer_pretty(BufWriter::new(file), sidecar)
        .map_err(|e| GeoError::InvalidInput(format!("sidecar serialization failed: {e}")))?;
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Dist(args) => cmd_dist(args),
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Lift(args) => cmd_lift(args),
        Cmd::Embed(args) => cmd_embed(args),
        Cmd::Check { what } => cmd_check(what),
        Cmd::Energy(args) => cmd_energy(args),
        Cmd::Grushin { what } => cmd_grushin(what),
    }
}

fn cmd_dist(args: DistArgs) -> Result<()> {
    let d = match args.metric {
        Metric::Koranyi => {
            heis::koranyi_dist(&parse_heis(args.n, &args.p)?, &parse_heis(args.n, &args.q)?)?
        }
        Metric::Cc => {
            let cfg = CCSolverConfig { seed: args.seed, ..CCSolverConfig::default() };
            cc::cc_dist(&parse_heis(args.n, &args.p)?, &parse_heis(args.n, &args.q)?, &cfg)?
        }
        Metric::Grushin => {
            let cfg = CCSolverConfig { seed: args.seed, ..CCSolverConfig::default() };
            grushin::grushin_dist(parse_planar(&args.p)?, parse_planar(&args.q)?, &cfg)?
        }
    };
    println!("{d:?}");
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let mut w = writer(&args.out)?;
    match args.kind {
        ScanKind::Comparability => {
            let rep = cc::comparability_scan(args.n, args.lo, args.hi, args.samples, args.seed)?;
            writeln!(w, "c_low,c_high,c_root,samples")?;
            writeln!(
                w,
                "{},{},{},{}",
                fmt(rep.c_low),
                fmt(rep.c_high),
                fmt(rep.c_root),
                rep.samples
            )?;
        }
        ScanKind::Bilip => {
            let metric = match args.metric {
                TargetMetricArg::Koranyi => embed::TargetMetric::Koranyi,
                TargetMetricArg::Cc => embed::TargetMetric::CarnotCaratheodory,
            };
            let rep = match args.map {
                EmbedKind::Legendrian => embed::bilip_estimate(
                    embed::legendrian_f,
                    metric,
                    args.n,
                    args.samples,
                    args.seed,
                )?,
                EmbedKind::Cayley => embed::bilip_estimate(
                    embed::cayley_phi_on_sphere,
                    metric,
                    args.n,
                    args.samples,
                    args.seed,
                )?,
            };
            writeln!(w, "lower,upper,samples")?;
            writeln!(w, "{},{},{}", fmt(rep.lower), fmt(rep.upper), rep.samples)?;
        }
    }
    Ok(())
}

fn read_planar_csv(path: &Path) -> Result<SampledCurve> {
    let file = File::open(path)?;
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 && line.starts_with('s') {
            continue; // header
        }
        let row = parse_point(line)?;
        if row.len() < 3 {
            return Err(GeoError::InvalidInput(format!(
                "row {} needs `s` plus an even number of planar coordinates",
                i + 1
            )));
        }
        params.push(row[0]);
        points.push(row[1..].to_vec());
    }
    let closed = points.len() > 2
        && points
            .first()
            .zip(points.last())
            .map(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9))
            .unwrap_or(false);
    SampledCurve::new(params, points, closed)
}

fn cmd_lift(args: LiftArgs) -> Result<()> {
    let planar = read_planar_csv(&args.input)?;
    let lifted = curve::horizontal_lift(&planar, args.t0)?;
    let n = planar.dim() / 2;
    let mut w = writer(&args.out)?;
    let header: Vec<String> = std::iter::once("s".to_string())
        .chain((1..=n).flat_map(|j| [format!("x{j}"), format!("y{j}")]))
        .chain(std::iter::once("t".to_string()))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for (s, p) in lifted.params().iter().zip(lifted.points()) {
        let row: Vec<String> =
            std::iter::once(fmt(*s)).chain(p.iter().map(|c| fmt(*c))).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn cmd_embed(args: EmbedArgs) -> Result<()> {
    if args.samples == 0 {
        return Err(GeoError::InvalidInput("samples must be positive".into()));
    }
    let mut w = writer(&args.out)?;
    let n = args.n;
    let lattice = embed::sphere_lattice(n, args.samples);
    match args.kind {
        EmbedKind::Legendrian => {
            let header: Vec<String> = (0..=n)
                .map(|i| format!("x{i}"))
                .chain((1..=n).flat_map(|j| [format!("x{j}"), format!("y{j}")]))
                .chain(std::iter::once("t".to_string()))
                .collect();
            writeln!(w, "{}", header.join(","))?;
            for p in &lattice {
                let image = embed::legendrian_f(p);
                let row: Vec<String> = p
                    .coords()
                    .iter()
                    .chain(image.coords())
                    .map(|c| fmt(*c))
                    .collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
        EmbedKind::Cayley => {
            let header: Vec<String> = (1..=n)
                .map(|i| format!("u{i}"))
                .chain((1..=n).flat_map(|j| [format!("x{j}"), format!("y{j}")]))
                .chain(std::iter::once("t".to_string()))
                .collect();
            writeln!(w, "{}", header.join(","))?;
            for p in &lattice {
                // stereographic chart; the pole itself maps to infinity
                let last = p.coords()[n];
                if (1.0 - last).abs() < 1e-12 {
                    continue;
                }
                let chart: Vec<f64> = p.coords()[..n].iter().map(|c| c / (1.0 - last)).collect();
                let image = embed::cayley_phi(n, Some(&chart))?;
                let row: Vec<String> =
                    chart.iter().chain(image.coords()).map(|c| fmt(*c)).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}

fn cmd_check(what: CheckCmd) -> Result<()> {
    match what {
        CheckCmd::Contact { n, h, eps, out } => {
            let grid = lab::compose_on_grid(embed::legendrian_f, n + 1, h, eps)?;
            if let Some(path) = &out {
                let file = BufWriter::new(File::create(path)?);
                grid.write_csv(file)?;
                write_sidecar(path, &grid.sidecar())?;
            }
            let residual = lab::contact_residual(&grid)?;
            println!("{residual:?}");
        }
        CheckCmd::Eikonal { samples, h, bound, seed, out } => {
            if !(bound > 0.0) {
                return Err(GeoError::OutOfRange("bound must be positive".into()));
            }
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let origin = HeisPoint::origin(1);
            let mut w = writer(&out)?;
            writeln!(w, "x1,y1,t,grad_norm")?;
            let mut worst: f64 = 0.0;
            let mut done = 0;
            while done < samples {
                let coords: Vec<f64> = (0..3).map(|_| rng.gen_range(-bound..bound)).collect();
                let p = HeisPoint::new(1, coords)?;
                match cc::eikonal_check(&origin, &p, h) {
                    Ok(g) => {
                        writeln!(
                            w,
                            "{},{},{},{}",
                            fmt(p.x(0)),
                            fmt(p.y(0)),
                            fmt(p.t()),
                            fmt(g)
                        )?;
                        worst = worst.max((g - 1.0).abs());
                        done += 1;
                    }
                    Err(GeoError::OnCenterCoset) => continue,
                    Err(e) => return Err(e),
                }
            }
            println!("{worst:?}");
        }
        CheckCmd::Rank { kind, n, samples, seed, out } => {
            let points: Vec<Vec<f64>> = embed::random_sphere_points(n, samples, seed)
                .into_iter()
                .map(|p| p.coords().to_vec())
                .collect();
            let report = match kind {
                EmbedKind::Legendrian => lab::rank_check(
                    |x| {
                        let p = embed::SpherePoint::project(x.to_vec()).unwrap();
                        embed::legendrian_f(&p).coords().to_vec()
                    },
                    &points,
                    1e-6,
                )?,
                EmbedKind::Cayley => lab::rank_check(
                    |x| {
                        let p = embed::SpherePoint::project(x.to_vec()).unwrap();
                        embed::cayley_phi_on_sphere(&p).coords().to_vec()
                    },
                    &points,
                    1e-6,
                )?,
            };
            let mut w = writer(&out)?;
            let header: Vec<String> = std::iter::once("max_rank".to_string())
                .chain((1..=report.sv_ratios.len()).map(|i| format!("sigma_ratio_{i}")))
                .collect();
            writeln!(w, "{}", header.join(","))?;
            let row: Vec<String> = std::iter::once(report.max_rank.to_string())
                .chain(report.sv_ratios.iter().map(|r| fmt(*r)))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        CheckCmd::Stokes { map, h, out } => {
            let omega = lab::OneForm::x_dy();
            let (b, i) = match map {
                StokesMap::Identity => {
                    lab::stokes_check(|x| vec![x[0], x[1]], &omega, h)?
                }
                StokesMap::Stretch => lab::stokes_check(
                    |x| {
                        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                        vec![r * x[0], r * x[1]]
                    },
                    &omega,
                    h,
                )?,
            };
            let mut w = writer(&out)?;
            writeln!(w, "boundary,interior,gap")?;
            writeln!(w, "{},{},{}", fmt(b), fmt(i), fmt((b - i).abs()))?;
        }
    }
    Ok(())
}

fn cmd_energy(args: EnergyArgs) -> Result<()> {
    if args.annuli == 0 {
        return Err(GeoError::InvalidInput("need at least one annulus".into()));
    }
    let grid = lab::compose_on_grid(embed::legendrian_f, 2, args.h, args.eps)?;
    let mut w = writer(&args.out)?;
    writeln!(w, "annulus,r_in,r_out,energy")?;
    let mut total = 0.0;
    for a in 0..args.annuli {
        let r_in = args.eps * 2f64.powi(a as i32);
        let r_out = (r_in * 2.0).min(1.0);
        if r_in >= 1.0 {
            break;
        }
        let e = lab::horizontal_energy_in(&grid, args.p, f64::INFINITY, |x| {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            r >= r_in && r < r_out
        })?;
        total += e;
        writeln!(w, "{},{},{},{}", a, fmt(r_in), fmt(r_out), fmt(e))?;
    }
    println!("{total:?}");
    Ok(())
}

fn cmd_grushin(what: GrushinCmd) -> Result<()> {
    match what {
        GrushinCmd::Geodesic { m, y1, samples, negative, out } => {
            let g = grushin::GrushinGeodesic::new(m, y1, !negative)?;
            let curve = grushin::sample_geodesic(&g, samples)?;
            let mut w = writer(&out)?;
            writeln!(w, "t,x,y")?;
            for (s, p) in curve.params().iter().zip(curve.points()) {
                writeln!(w, "{},{},{}", fmt(*s), fmt(p[0]), fmt(p[1]))?;
            }
        }
        GrushinCmd::Curvature { x } => {
            println!("{:?}", grushin::grushin_curvature(x)?);
        }
        GrushinCmd::Dist { p, q, controls, restarts, seed } => {
            let cfg = CCSolverConfig {
                controls_per_path: controls,
                restarts,
                seed,
                ..CCSolverConfig::default()
            };
            let d = grushin::grushin_dist(parse_planar(&p)?, parse_planar(&q)?, &cfg)?;
            println!("{d:?}");
        }
    }
    Ok(())
}

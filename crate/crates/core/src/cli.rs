//! Command-line harness. Every command renders to a string so the binary only
//! has to choose between stdout and `--out`.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    angle_profile, certainty_verdict, evolve, minimal_substantial_shift, std_dev, EvolutionContext,
    HermitianGenerator, ProfilePoint, PROFILE_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::hilbert::{quantum_angle, StateVector};
use crate::io::{read_generator, read_state, state_to_json, to_csv};
use crate::kinematics::{arc_length, curve_profile, geodesic};
use crate::models::circle::{angular_momentum_operator, circle_certainty_demo, CircleModel};
use crate::models::lifetime::{lifetime_demo, LevelModel, LIFETIME_SEARCH};
use crate::models::line::{
    bump_shift_check, gaussian_packet, line_certainty_demo, momentum_operator, LineGrid,
};
use crate::models::multi_axis::{displaced_angle, multi_axis_demo, product_gaussian_factors};

#[derive(Debug, Parser)]
#[command(
    name = "qangle",
    version,
    about = "Quantum angle and certainty-principle toolkit"
)]
pub struct Cli {
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Angle between two states.
    Angle { a: PathBuf, b: PathBuf },
    /// Apply U(δs) to a state.
    Evolve {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, allow_hyphen_values = true)]
        deltas: f64,
    },
    /// Angle to the initial state and its bound along an orbit.
    Profile {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Great-circle curve between two rays.
    Geodesic {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1000)]
        nodes: usize,
    },
    /// Certainty-principle verdict at one group parameter.
    Verdict {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, allow_hyphen_values = true)]
        deltas: f64,
    },
    /// Run one of the worked systems.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Generator file.
    #[arg(long)]
    pub generator: PathBuf,
    /// Initial state file.
    #[arg(long)]
    pub state: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    TwoLevel,
    Line,
    Circle,
    Lifetime,
    MultiAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelProfile {
    Gaussian,
    TwoLevel,
    Single,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoName,
    /// Level width Γ (two-level, lifetime).
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Central energy (two-level, lifetime).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub energy: f64,
    /// Spectral shape for the lifetime demo.
    #[arg(long, value_enum, default_value_t = LevelProfile::Gaussian)]
    pub profile: LevelProfile,
    #[arg(long, default_value_t = 61)]
    pub levels: usize,
    /// Half-width of the Gaussian spectrum in units of Γ.
    #[arg(long, default_value_t = 4.0)]
    pub span: f64,
    /// Grid nodes per axis (default 1024 for line, 64 for multi-axis).
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid length per axis (default 40 for line, 12.5 for multi-axis).
    #[arg(long)]
    pub length: Option<f64>,
    /// Packet width σ.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Probe shift for the line overlap.
    #[arg(long, default_value_t = 4.0)]
    pub shift: f64,
    /// Number of seeded bump supports in [1, 10] for the line demo.
    #[arg(long, default_value_t = 10)]
    pub bumps: usize,
    /// Modes of the balanced circle state.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0,1"
    )]
    pub modes: Vec<i64>,
    #[arg(long, default_value_t = 5)]
    pub m_max: i64,
    /// Displacement vector for the multi-axis demo.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "2,2"
    )]
    pub displacement: Vec<f64>,
    /// Rows in the CSV profile.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

/// The common demo record; `details` carries the demo-specific numbers.
#[derive(Debug, Serialize)]
pub struct DemoRecord {
    pub demo: &'static str,
    pub parameters: Value,
    pub delta_star: Option<f64>,
    pub std_dev: f64,
    pub product: Option<f64>,
    pub holds: bool,
    pub details: Value,
}

#[derive(Debug, Serialize)]
struct AngleRow {
    angle_radians: f64,
    substantial: bool,
}

#[derive(Debug, Serialize)]
struct VerdictRow {
    deltas: f64,
    angle: f64,
    substantial: bool,
    std_dev: f64,
    product: f64,
    holds: bool,
    vacuous: bool,
}

#[derive(Debug, Serialize)]
struct AmplitudeRow {
    index: usize,
    re: f64,
    im: f64,
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

fn context(orbit: &OrbitArgs, hbar: f64) -> Result<(EvolutionContext, StateVector)> {
    let generator = read_generator(&orbit.generator)?;
    let state = read_state(&orbit.state)?;
    Ok((EvolutionContext::new(generator, hbar)?, state))
}

fn grid_points(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidParameter(
            "need a finite range and steps >= 1".into(),
        ));
    }
    Ok((0..=steps)
        .map(|k| from + (to - from) * k as f64 / steps as f64)
        .collect())
}

pub fn run(cli: &Cli) -> Result<String> {
    if !(cli.hbar > 0.0) || !cli.hbar.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "hbar must be positive, got {}",
            cli.hbar
        )));
    }
    let hbar = cli.hbar;
    match &cli.command {
        Command::Angle { a, b } => {
            let angle = quantum_angle(&read_state(a)?, &read_state(b)?)?;
            let row = AngleRow {
                angle_radians: angle.radians(),
                substantial: angle.is_substantial(),
            };
            match cli.format {
                Format::Json => Ok(json(&row)),
                Format::Csv => to_csv(&[row]),
            }
        }
        Command::Evolve { orbit, deltas } => {
            let (ctx, psi0) = context(orbit, hbar)?;
            let moved = evolve(&ctx, &psi0, *deltas)?;
            match cli.format {
                Format::Json => {
                    let state: Value =
                        serde_json::from_str(&state_to_json(&moved)).expect("state json");
                    Ok(json(&json!({
                        "deltas": deltas,
                        "angle_to_initial": quantum_angle(&psi0, &moved)?.radians(),
                        "state": state,
                    })))
                }
                Format::Csv => {
                    let rows: Vec<AmplitudeRow> = moved
                        .as_slice()
                        .iter()
                        .enumerate()
                        .map(|(index, z)| AmplitudeRow {
                            index,
                            re: z.re,
                            im: z.im,
                        })
                        .collect();
                    to_csv(&rows)
                }
            }
        }
        Command::Profile {
            orbit,
            from,
            to,
            steps,
        } => {
            let (ctx, psi0) = context(orbit, hbar)?;
            let rows = angle_profile(&ctx, &psi0, &grid_points(*from, *to, *steps)?)?;
            match cli.format {
                Format::Json => Ok(json(&rows)),
                Format::Csv => to_csv(&rows),
            }
        }
        Command::Geodesic { a, b, nodes } => {
            if *nodes < 2 {
                return Err(Error::TooFewNodes {
                    needed: 2,
                    got: *nodes,
                });
            }
            let (ra, rb) = (read_state(a)?, read_state(b)?);
            let curve = geodesic(&ra, &rb, nodes - 1)?;
            let points = curve_profile(&curve)?;
            match cli.format {
                Format::Json => Ok(json(&json!({
                    "angle": quantum_angle(&ra, &rb)?.radians(),
                    "arc_length": arc_length(&curve)?,
                    "nodes": nodes,
                    "points": points,
                }))),
                Format::Csv => to_csv(&points),
            }
        }
        Command::Verdict { orbit, deltas } => {
            let (ctx, psi0) = context(orbit, hbar)?;
            let report = certainty_verdict(&ctx, &psi0, *deltas)?;
            let spread = std_dev(ctx.generator(), &psi0)?;
            let angle = quantum_angle(&psi0, &evolve(&ctx, &psi0, *deltas)?)?;
            let row = VerdictRow {
                deltas: *deltas,
                angle: angle.radians(),
                substantial: angle.is_substantial(),
                std_dev: spread,
                product: deltas.abs() * spread / hbar,
                holds: report.holds,
                vacuous: report.vacuous,
            };
            match cli.format {
                Format::Json => Ok(json(&json!({ "verdict": row, "report": report }))),
                Format::Csv => to_csv(&[row]),
            }
        }
        Command::Demo(args) => {
            let (record, profile) = run_demo(args, hbar, cli.seed)?;
            match cli.format {
                Format::Json => Ok(json(&record)),
                Format::Csv => to_csv(&profile),
            }
        }
    }
}

/// Profile grid over `[0, 2·δs*]`, or `[0, fallback]` when there is no
/// crossing.
fn profile_grid(delta_star: Option<f64>, fallback: f64, samples: usize) -> Result<Vec<f64>> {
    let end = delta_star.map_or(fallback, |d| 2.0 * d);
    grid_points(0.0, end, samples.max(2) - 1)
}

fn orbit_profile(
    ctx: &EvolutionContext,
    psi0: &StateVector,
    delta_star: Option<f64>,
    fallback: f64,
    samples: usize,
) -> Result<Vec<ProfilePoint>> {
    angle_profile(ctx, psi0, &profile_grid(delta_star, fallback, samples)?)
}

pub fn run_demo(args: &DemoArgs, hbar: f64, seed: u64) -> Result<(DemoRecord, Vec<ProfilePoint>)> {
    match args.name {
        DemoName::TwoLevel => {
            let e = args.energy;
            let gen = HermitianGenerator::diagonal(&[e - args.gamma, e + args.gamma])?;
            let ctx = EvolutionContext::new(gen, hbar)?;
            let psi0 = StateVector::from_real(&[1.0, 1.0])?;
            let spread = std_dev(ctx.generator(), &psi0)?;
            let fallback = if spread > 0.0 {
                LIFETIME_SEARCH * hbar / spread
            } else {
                1.0
            };
            let delta_star = minimal_substantial_shift(&ctx, &psi0, fallback)?;
            let report = match delta_star {
                Some(d) => certainty_verdict(&ctx, &psi0, d)?,
                None => certainty_verdict(&ctx, &psi0, fallback)?,
            };
            let profile = orbit_profile(&ctx, &psi0, delta_star, fallback, args.samples)?;
            let record = DemoRecord {
                demo: "two-level",
                parameters: json!({ "energy": e, "gamma": args.gamma, "hbar": hbar }),
                delta_star,
                std_dev: spread,
                product: delta_star.map(|d| d * spread / hbar),
                holds: report.holds,
                details: json!({ "report": report }),
            };
            Ok((record, profile))
        }
        DemoName::Line => {
            let grid = LineGrid::new(args.n.unwrap_or(1024), args.length.unwrap_or(40.0))?;
            let demo = line_certainty_demo(&grid, args.sigma, args.shift, hbar)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bumps = (0..args.bumps)
                .map(|_| bump_shift_check(&grid, rng.random_range(1.0..10.0), hbar))
                .collect::<Result<Vec<_>>>()?;
            let ctx = EvolutionContext::new(momentum_operator(&grid, hbar)?, hbar)?;
            let psi0 = gaussian_packet(&grid, 0.0, 0.0, args.sigma, hbar)?;
            let profile = orbit_profile(
                &ctx,
                &psi0,
                demo.delta_star,
                0.5 * grid.length(),
                args.samples,
            )?;
            let holds =
                demo.report.holds && demo.pauli_weyl.holds && bumps.iter().all(|b| b.report.holds);
            let record = DemoRecord {
                demo: "line",
                parameters: json!({
                    "n": grid.n(),
                    "length": grid.length(),
                    "sigma": args.sigma,
                    "probe_shift": args.shift,
                    "bumps": args.bumps,
                    "hbar": hbar,
                    "seed": seed,
                }),
                delta_star: demo.delta_star,
                std_dev: demo.delta_p,
                product: demo.product,
                holds,
                details: json!({
                    "delta_x": demo.delta_x,
                    "delta_p": demo.delta_p,
                    "uncertainty_product": demo.delta_x * demo.delta_p,
                    "pauli_weyl": demo.pauli_weyl,
                    "probe_overlap": demo.probe_overlap,
                    "report": demo.report,
                    "bump_checks": bumps,
                }),
            };
            Ok((record, profile))
        }
        DemoName::Circle => {
            let model = CircleModel::new(args.m_max)?;
            let state = model.balanced(&args.modes)?;
            let demo = circle_certainty_demo(&model, &state, hbar)?;
            let ctx = EvolutionContext::new(angular_momentum_operator(&model, hbar), hbar)?;
            let profile = orbit_profile(&ctx, &state, demo.delta_star, 4.0 * PI, args.samples)?;
            let record = DemoRecord {
                demo: "circle",
                parameters: json!({ "m_max": args.m_max, "modes": args.modes, "hbar": hbar }),
                delta_star: demo.delta_star,
                std_dev: demo.std_dev,
                product: demo.product,
                holds: demo.report.holds,
                details: json!({
                    "max_angle": demo.max_angle,
                    "eigenstate": demo.eigenstate,
                    "note": demo.note,
                    "report": demo.report,
                }),
            };
            Ok((record, profile))
        }
        DemoName::Lifetime => {
            let model = match args.profile {
                LevelProfile::Gaussian => {
                    LevelModel::gaussian(args.energy, args.gamma, args.levels, args.span)?
                }
                LevelProfile::TwoLevel => LevelModel::two_level(args.energy, args.gamma)?,
                LevelProfile::Single => LevelModel::single(args.energy)?,
            };
            let demo = lifetime_demo(&model, hbar)?;
            let ctx = EvolutionContext::new(model.time_generator(), hbar)?;
            let psi0 = model.initial_state()?;
            let fallback = if demo.delta_h > 0.0 {
                LIFETIME_SEARCH * hbar / demo.delta_h
            } else {
                1.0
            };
            let profile = orbit_profile(&ctx, &psi0, demo.t_star, fallback, args.samples)?;
            let profile_name = match args.profile {
                LevelProfile::Gaussian => "gaussian",
                LevelProfile::TwoLevel => "two-level",
                LevelProfile::Single => "single",
            };
            let record = DemoRecord {
                demo: "lifetime",
                parameters: json!({
                    "profile": profile_name,
                    "energy": args.energy,
                    "gamma": args.gamma,
                    "levels": model.dim(),
                    "span": args.span,
                    "hbar": hbar,
                }),
                delta_star: demo.t_star,
                std_dev: demo.delta_h,
                product: demo.product,
                holds: demo.report.holds,
                details: json!({
                    "t_star": demo.t_star,
                    "t_star_gamma": demo.t_star.map(|t| t * args.gamma / hbar),
                    "delta_h": demo.delta_h,
                    "note": demo.note,
                    "report": demo.report,
                }),
            };
            Ok((record, profile))
        }
        DemoName::MultiAxis => {
            let axes = args.displacement.len();
            let grid = LineGrid::new(args.n.unwrap_or(64), args.length.unwrap_or(12.5))?;
            let grids = vec![grid; axes];
            let sigmas = vec![args.sigma; axes];
            let demo = multi_axis_demo(&grids, &sigmas, &args.displacement, hbar)?;

            let factors = product_gaussian_factors(&grids, &sigmas, hbar)?;
            let fallback = if demo.delta_b > 0.0 {
                LIFETIME_SEARCH * hbar / demo.delta_b
            } else {
                1.0
            };
            let profile = profile_grid(demo.scale_star, fallback, args.samples)?
                .into_iter()
                .map(|scale| {
                    let angle = displaced_angle(&grids, &factors, &args.displacement, scale)?;
                    let bound = scale * demo.delta_b / hbar;
                    Ok(ProfilePoint {
                        deltas: scale,
                        angle,
                        bound,
                        holds: angle <= bound.min(PI / 2.0) + PROFILE_TOLERANCE,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let record = DemoRecord {
                demo: "multi-axis",
                parameters: json!({
                    "n": grid.n(),
                    "length": grid.length(),
                    "sigma": args.sigma,
                    "displacement": args.displacement,
                    "hbar": hbar,
                }),
                delta_star: demo.scale_star,
                std_dev: demo.delta_b,
                product: demo.product,
                holds: demo.report.holds,
                details: json!({
                    "delta_p": demo.delta_p,
                    "delta_b": demo.delta_b,
                    "delta_b_tensor": demo.delta_b_tensor,
                    "angle": demo.angle,
                    "report": demo.report,
                }),
            };
            Ok((record, profile))
        }
    }
}

/// 0 on success, 3 when a numerical guard refused the input, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical_guard() {
        3
    } else {
        2
    }
}

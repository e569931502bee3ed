//! Command-line front end over the library: build beams, synthesize fields,
//! run helicity/Stokes analyses, apply the Landau-Peierls transform, and
//! propagate two-component states through static media.
//!
//! Exit codes: 0 success, 2 invalid input or specification, 3 CFL violation,
//! 4 NaN detected during propagation, 1 anything else.

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use photonqm::io::{self, FieldReport, GeneratorReport, StokesSummary, UnitsBlock};
use photonqm::{
    beam_bessel_grid_locked, build_beam, build_medium, energy_fraction, expectation_complex,
    field_energy_momentum, helicity_project, landau_peierls_forward, landau_peierls_inverse,
    lp_expectation, orbital_spin_split, stokes, synthesize, tanh_slab_profile, BeamSpec, Boundary,
    DerivativeScheme, Generator, Helicity, HelicityField, MomentumWaveFunction, PositionGrid,
    Propagator, SpectralOps, StepperConfig, VectorField3,
};

#[derive(Parser)]
#[command(
    name = "photonqm",
    version,
    about = "Photon wave functions, Maxwell-field synthesis, helicity and Stokes analysis, and propagation in static media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output path for the command's primary artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Rayon thread-pool size (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized test data; reserved, recorded in logs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Convert report values to SI at the output boundary.
    #[arg(long, global = true)]
    si: bool,
    /// Meters per natural length unit for --si conversion.
    #[arg(long, global = true, default_value_t = 1.0)]
    si_length_m: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a beam wave function; optionally synthesize its field.
    Beam(BeamArgs),
    /// Observables report for a wave-function or field file.
    Analyze(AnalyzeArgs),
    /// Split a field into its helicity components.
    Split(SplitArgs),
    /// Landau-Peierls transform of a field file.
    Lp(LpArgs),
    /// Propagate a state through a static medium per a run config.
    Propagate(PropagateArgs),
    /// Full report: observables plus residual diagnostics and exports.
    Report(AnalyzeArgs),
}

#[derive(Args)]
struct BeamArgs {
    /// Beam family: bessel, lg (laguerre_gauss), or exponential.
    #[arg(long)]
    family: String,
    /// Total angular momentum quantum number.
    #[arg(long = "M", allow_hyphen_values = true)]
    m: i32,
    /// Helicity slot: + or -.
    #[arg(long, default_value = "+")]
    helicity: String,
    /// Frequency (bessel).
    #[arg(long)]
    omega: Option<f64>,
    /// Longitudinal wave number (bessel, exponential).
    #[arg(long, allow_hyphen_values = true)]
    qz: Option<f64>,
    /// Paraxial frequency scale (lg).
    #[arg(long = "Omega")]
    paraxial_omega: Option<f64>,
    /// Radial index (lg).
    #[arg(long)]
    n: Option<u32>,
    /// Transverse width (lg).
    #[arg(long)]
    l: Option<f64>,
    /// Decay time (exponential).
    #[arg(long)]
    tau: Option<f64>,
    /// Radial quadrature points (disc manifolds).
    #[arg(long, default_value_t = 32)]
    n_radial: usize,
    /// Azimuthal quadrature points.
    #[arg(long, default_value_t = 64)]
    n_phi: usize,
    /// Also synthesize the position-representation field.
    #[arg(long)]
    synth: bool,
    /// Nodes per axis of the synthesis cube.
    #[arg(long, default_value_t = 32)]
    grid: usize,
    /// Side length of the synthesis cube.
    #[arg(long = "box", default_value_t = 12.0)]
    box_length: f64,
    /// Synthesis time.
    #[arg(long, default_value_t = 0.0)]
    time: f64,
    /// Field output path (with --synth).
    #[arg(long, default_value = "field.json")]
    field_out: PathBuf,
    /// Sample the beam on the synthesis grid's reciprocal lattice.
    #[arg(long)]
    grid_locked: bool,
    /// Squared lattice ring radius for --grid-locked bessel beams.
    #[arg(long, default_value_t = 25)]
    ring_radius_sq: i64,
    /// Longitudinal lattice mode for --grid-locked bessel beams.
    #[arg(long, default_value_t = 2)]
    mz: i64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input wave-function or field JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Also write the helicity decomposition next to the report.
    #[arg(long)]
    split: bool,
    /// Prefix for --split outputs.
    #[arg(long, default_value = "split")]
    split_prefix: PathBuf,
    /// Export the pointwise Stokes map as CSV.
    #[arg(long)]
    stokes_csv: Option<PathBuf>,
    /// Export a line cut along an axis: x, y, or z.
    #[arg(long)]
    cut: Option<String>,
    /// Line-cut output path.
    #[arg(long, default_value = "cut.csv")]
    cut_out: PathBuf,
    /// Export a legacy-VTK snapshot for external viewers.
    #[arg(long)]
    vtk: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Output prefix: writes <prefix>_plus.json and <prefix>_minus.json.
    #[arg(long, default_value = "split")]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct LpArgs {
    #[arg(long)]
    input: PathBuf,
    /// forward (divide by sqrt(hbar omega)) or inverse.
    #[arg(long, default_value = "forward")]
    direction: String,
}

#[derive(Args)]
struct PropagateArgs {
    /// Run configuration JSON.
    #[arg(long)]
    config: PathBuf,
}

/// SI conversion factors for report values; identity in natural units.
struct UnitScale {
    energy: f64,
    momentum: f64,
    time: f64,
    action: f64,
    units: UnitsBlock,
}

impl UnitScale {
    fn natural() -> Self {
        Self { energy: 1.0, momentum: 1.0, time: 1.0, action: 1.0, units: UnitsBlock::natural() }
    }

    fn si(length_m: f64) -> Self {
        let hbar = 1.054_571_817e-34;
        let c = 2.997_924_58e8;
        Self {
            energy: hbar * c / length_m,
            momentum: hbar / length_m,
            time: length_m / c,
            action: hbar,
            units: UnitsBlock::si(length_m),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<photonqm::Error>() {
        match e {
            photonqm::Error::CflViolation { .. } => 3,
            photonqm::Error::NanDetected { .. } => 4,
            _ => 2,
        }
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<()> {
    let scale = if cli.si { UnitScale::si(cli.si_length_m) } else { UnitScale::natural() };
    if let Some(seed) = cli.seed {
        eprintln!("seed: {seed} (reserved for randomized inputs)");
    }
    match &cli.command {
        Command::Beam(args) => cmd_beam(&cli, args),
        Command::Analyze(args) => cmd_analyze(&cli, args, &scale, false),
        Command::Report(args) => cmd_analyze(&cli, args, &scale, true),
        Command::Split(args) => cmd_split(args),
        Command::Lp(args) => cmd_lp(&cli, args),
        Command::Propagate(args) => cmd_propagate(args),
    }
}

fn parse_helicity(text: &str) -> Result<Helicity> {
    match text {
        "+" | "plus" | "+1" => Ok(Helicity::Plus),
        "-" | "minus" | "-1" => Ok(Helicity::Minus),
        other => Err(anyhow!(photonqm::Error::InvalidBeamSpec(format!(
            "helicity must be + or -, got '{other}'"
        )))),
    }
}

fn beam_spec_from_args(args: &BeamArgs) -> Result<BeamSpec> {
    let helicity = parse_helicity(&args.helicity)?;
    let missing = |what: &str| {
        anyhow!(photonqm::Error::InvalidBeamSpec(format!(
            "family '{}' requires --{what}",
            args.family
        )))
    };
    let spec = match args.family.as_str() {
        "bessel" => BeamSpec::Bessel {
            m: args.m,
            omega: args.omega.ok_or_else(|| missing("omega"))?,
            qz: args.qz.ok_or_else(|| missing("qz"))?,
            helicity,
        },
        "lg" | "laguerre_gauss" => BeamSpec::LaguerreGauss {
            m: args.m,
            n: args.n.ok_or_else(|| missing("n"))?,
            paraxial_omega: args.paraxial_omega.ok_or_else(|| missing("Omega"))?,
            width: args.l.ok_or_else(|| missing("l"))?,
            helicity,
        },
        "exponential" | "exp" => BeamSpec::Exponential {
            m: args.m,
            qz: args.qz.ok_or_else(|| missing("qz"))?,
            tau: args.tau.ok_or_else(|| missing("tau"))?,
            helicity,
        },
        other => {
            return Err(anyhow!(photonqm::Error::InvalidBeamSpec(format!(
                "unknown family '{other}' (expected bessel, lg, exponential)"
            ))))
        }
    };
    spec.validate().map_err(anyhow::Error::from)?;
    Ok(spec)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_beam(cli: &Cli, args: &BeamArgs) -> Result<()> {
    let grid = PositionGrid::centered_cube(args.grid, args.box_length);
    let wf: MomentumWaveFunction = if args.grid_locked {
        match args.family.as_str() {
            "bessel" => beam_bessel_grid_locked(
                &grid,
                args.ring_radius_sq,
                args.mz,
                args.m,
                parse_helicity(&args.helicity)?,
            )?,
            "lg" | "laguerre_gauss" => {
                photonqm::beam_lg_grid_locked(&grid, &beam_spec_from_args(args)?)?
            }
            other => {
                return Err(anyhow!(photonqm::Error::InvalidBeamSpec(format!(
                    "--grid-locked supports bessel and lg, not '{other}'"
                ))))
            }
        }
    } else {
        build_beam(&beam_spec_from_args(args)?, args.n_radial, args.n_phi)?
    };

    let wf_path = cli.out.clone().unwrap_or_else(|| PathBuf::from("wavefunction.json"));
    write_text(&wf_path, &io::wavefunction_to_json(&wf)?)?;
    println!("wavefunction: {} ({} samples)", wf_path.display(), wf.len());

    if args.synth {
        let field = synthesize(&wf, &grid, args.time)?;
        write_text(&args.field_out, &io::field_to_json(&field)?)?;
        println!(
            "field: {} ({}^3 nodes, box {})",
            args.field_out.display(),
            args.grid,
            args.box_length
        );
    }
    Ok(())
}

enum LoadedInput {
    WaveFunction(MomentumWaveFunction),
    Field(HelicityField),
}

fn load_input(path: &Path) -> Result<LoadedInput> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    // Field files carry a "grid" key, wave functions a "manifold" key.
    let probe: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", path.display()))?;
    if probe.get("manifold").is_some() {
        Ok(LoadedInput::WaveFunction(io::wavefunction_from_json(&text)?))
    } else if probe.get("grid").is_some() {
        Ok(LoadedInput::Field(io::field_from_json(&text)?))
    } else {
        bail!(photonqm::Error::InvalidField(format!(
            "{} is neither a wave-function nor a field file",
            path.display()
        )))
    }
}

fn wavefunction_report(wf: &MomentumWaveFunction, scale: &UnitScale) -> Result<GeneratorReport> {
    let h = photonqm::expectation_value(wf, Generator::H)?;
    let p = [
        photonqm::expectation_value(wf, Generator::Px)?,
        photonqm::expectation_value(wf, Generator::Py)?,
        photonqm::expectation_value(wf, Generator::Pz)?,
    ];
    let jz = photonqm::expectation_value(wf, Generator::Jz).ok();
    let mut residuals = BTreeMap::new();
    residuals.insert("norm_sq".into(), wf.norm_sq());
    if let Ok(c) = expectation_complex(wf, Generator::Jz) {
        residuals.insert("jz_imag_part".into(), c.im.abs());
    }
    let full = |gx, gy, gz| -> Option<[f64; 3]> {
        Some([
            photonqm::expectation_value(wf, gx).ok()?,
            photonqm::expectation_value(wf, gy).ok()?,
            photonqm::expectation_value(wf, gz).ok()?,
        ])
    };
    let j = full(Generator::Jx, Generator::Jy, Generator::Jz);
    let n = full(Generator::Nx, Generator::Ny, Generator::Nz);
    if let Ok((l, s)) = orbital_spin_split(wf) {
        residuals.insert("orbital_lz".into(), l[2] * scale.action);
        residuals.insert("spin_sz".into(), s[2] * scale.action);
    }
    Ok(GeneratorReport {
        units: scale.units.clone(),
        h: h * scale.energy,
        p: p.map(|x| x * scale.momentum),
        j: j.map(|v| v.map(|x| x * scale.action)),
        jz: jz.map(|x| x * scale.action),
        n: n.map(|v| v.map(|x| x * scale.action)),
        residuals,
    })
}

fn field_report(
    field: &HelicityField,
    scale: &UnitScale,
    detailed: bool,
) -> Result<FieldReport> {
    let (energy, momentum) = field_energy_momentum(field)?;
    if energy <= 0.0 {
        bail!(photonqm::Error::ZeroEnergy);
    }
    let fractions = energy_fraction(field, |_| true)?;
    let map = stokes(field);
    let tot = map.integrated();
    let poincare = map.poincare();
    let mut residuals = BTreeMap::new();
    let mut jz = None;
    if field.grid.boundary == Boundary::Periodic {
        let ops = SpectralOps::new(&field.grid)?;
        match landau_peierls_forward(field, &ops) {
            Ok(lp) => {
                jz = lp_expectation(&lp, Generator::Jz, &ops).ok();
                if let Ok(h_lp) = lp_expectation(&lp, Generator::H, &ops) {
                    residuals.insert("lp_energy_expectation".into(), h_lp * scale.energy);
                }
            }
            Err(e) => {
                residuals.insert("lp_static_component".into(), 1.0);
                let _ = e;
            }
        }
        if detailed {
            // Divergence residual of each populated component.
            let ops = SpectralOps::new(&field.grid)?;
            for (name, psi) in [("plus", &field.psi_plus), ("minus", &field.psi_minus)] {
                let norm = psi.l2_norm();
                if norm > 0.0 {
                    let div = ops.divergence(psi)?;
                    let dv = field.grid.cell_volume();
                    let div_norm: f64 =
                        (dv * div.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
                    residuals.insert(format!("divergence_{name}"), div_norm / norm);
                }
            }
        }
    }
    Ok(FieldReport {
        units: scale.units.clone(),
        time: field.time * scale.time,
        energy: energy * scale.energy,
        momentum: momentum.map(|x| x * scale.momentum),
        jz: jz.map(|x| x * scale.action),
        helicity_fractions: [fractions.0, fractions.1],
        stokes: StokesSummary {
            s0: tot[0] * scale.energy,
            s1: tot[1] * scale.energy,
            s2: tot[2] * scale.energy,
            s3: tot[3] * scale.energy,
            poincare,
        },
        residuals,
    })
}

/// Flatten a JSON report into key,value CSV rows (deterministic order).
fn json_to_csv(value: &serde_json::Value) -> String {
    let mut rows = Vec::new();
    fn walk(prefix: &str, v: &serde_json::Value, rows: &mut Vec<(String, String)>) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, val) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, val, rows);
                }
            }
            serde_json::Value::Array(items) => {
                for (i, val) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), val, rows);
                }
            }
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    walk("", value, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn write_report<T: serde::Serialize>(cli: &Cli, default_name: &str, report: &T) -> Result<()> {
    let path = cli.out.clone().unwrap_or_else(|| PathBuf::from(default_name));
    let json = io::to_json_string(report)?;
    match cli.format.as_str() {
        "json" => write_text(&path, &json)?,
        "csv" => {
            let value: serde_json::Value = serde_json::from_str(&json)?;
            write_text(&path, &json_to_csv(&value))?;
        }
        other => bail!(photonqm::Error::Unsupported(format!("unknown format '{other}'"))),
    }
    println!("report: {}", path.display());
    Ok(())
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs, scale: &UnitScale, detailed: bool) -> Result<()> {
    match load_input(&args.input)? {
        LoadedInput::WaveFunction(wf) => {
            let report = wavefunction_report(&wf, scale)?;
            write_report(cli, "report.json", &report)?;
        }
        LoadedInput::Field(field) => {
            let report = field_report(&field, scale, detailed)?;
            write_report(cli, "report.json", &report)?;
            if args.split {
                write_split(&field, &args.split_prefix)?;
            }
            if let Some(path) = &args.stokes_csv {
                let map = stokes(&field);
                let mut buf = Vec::new();
                io::stokes_to_csv(&mut buf, &map)?;
                fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
                println!("stokes map: {}", path.display());
            }
            if let Some(axis_name) = &args.cut {
                let axis = match axis_name.as_str() {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    other => bail!(photonqm::Error::Unsupported(format!(
                        "cut axis must be x, y, or z, got '{other}'"
                    ))),
                };
                let mut buf = Vec::new();
                io::line_cut_csv(&mut buf, &field, axis)?;
                fs::write(&args.cut_out, buf)
                    .with_context(|| format!("writing {}", args.cut_out.display()))?;
                println!("line cut: {}", args.cut_out.display());
            }
            if let Some(path) = &args.vtk {
                let mut buf = Vec::new();
                io::field_to_vtk(&mut buf, &field)?;
                fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
                println!("vtk: {}", path.display());
            }
        }
    }
    Ok(())
}

fn write_split(field: &HelicityField, prefix: &Path) -> Result<()> {
    if field.grid.boundary != Boundary::Periodic {
        bail!(photonqm::Error::GridMismatch("helicity split needs a periodic grid".into()));
    }
    let ops = SpectralOps::new(&field.grid)?;
    let full = field.rs_vector();
    let split = helicity_project(&full, field.time, &ops)?;
    let plus = HelicityField::from_parts(
        split.psi_plus.clone(),
        VectorField3::zeros(field.grid),
        field.time,
    )?;
    let minus = HelicityField::from_parts(
        VectorField3::zeros(field.grid),
        split.psi_minus.clone(),
        field.time,
    )?;
    let plus_path = PathBuf::from(format!("{}_plus.json", prefix.display()));
    let minus_path = PathBuf::from(format!("{}_minus.json", prefix.display()));
    write_text(&plus_path, &io::field_to_json(&plus)?)?;
    write_text(&minus_path, &io::field_to_json(&minus)?)?;
    println!("split: {} {}", plus_path.display(), minus_path.display());
    Ok(())
}

fn cmd_split(args: &SplitArgs) -> Result<()> {
    let LoadedInput::Field(field) = load_input(&args.input)? else {
        bail!(photonqm::Error::InvalidField("split needs a field file".into()));
    };
    write_split(&field, &args.out_prefix)
}

fn cmd_lp(cli: &Cli, args: &LpArgs) -> Result<()> {
    let LoadedInput::Field(field) = load_input(&args.input)? else {
        bail!(photonqm::Error::InvalidField("lp needs a field file".into()));
    };
    let ops = SpectralOps::new(&field.grid)?;
    let out_path = cli.out.clone().unwrap_or_else(|| PathBuf::from("lp.json"));
    match args.direction.as_str() {
        "forward" => {
            let lp = landau_peierls_forward(&field, &ops)?;
            let as_field = HelicityField::from_parts(lp.phi_plus, lp.phi_minus, lp.time)?;
            write_text(&out_path, &io::field_to_json(&as_field)?)?;
        }
        "inverse" => {
            let lp = photonqm::LPWaveFunction {
                grid: field.grid,
                time: field.time,
                phi_plus: field.psi_plus.clone(),
                phi_minus: field.psi_minus.clone(),
            };
            let back = landau_peierls_inverse(&lp, &ops)?;
            write_text(&out_path, &io::field_to_json(&back)?)?;
        }
        other => bail!(photonqm::Error::Unsupported(format!(
            "direction must be forward or inverse, got '{other}'"
        ))),
    }
    println!("lp ({}): {}", args.direction, out_path.display());
    Ok(())
}

fn slab_media(
    grid: &PositionGrid,
    cfg: &config::MediumConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.num_nodes();
    let slab = |axis: usize, rise: f64, fall: f64, width: f64| -> Result<Vec<f64>> {
        if axis > 2 {
            bail!(photonqm::Error::InvalidMedium(format!("axis {axis} out of range")));
        }
        if width <= 0.0 {
            bail!(photonqm::Error::InvalidMedium("slab width must be positive".into()));
        }
        Ok(tanh_slab_profile(grid, axis, rise, fall, width))
    };
    match cfg {
        config::MediumConfig::Vacuum => Ok((vec![1.0; n], vec![1.0; n])),
        config::MediumConfig::ImpedanceSlab { axis, rise, fall, width, contrast } => {
            let s = slab(*axis, *rise, *fall, *width)?;
            let eps: Vec<f64> = s.iter().map(|&x| 1.0 + contrast * x).collect();
            let mu: Vec<f64> = eps.iter().map(|&e| 1.0 / e).collect();
            Ok((eps, mu))
        }
        config::MediumConfig::VelocitySlab { axis, rise, fall, width, contrast } => {
            let s = slab(*axis, *rise, *fall, *width)?;
            let eps: Vec<f64> = s.iter().map(|&x| 1.0 + contrast * x).collect();
            let mu = eps.clone();
            Ok((eps, mu))
        }
        config::MediumConfig::IndexSlab { axis, rise, fall, width, contrast } => {
            let s = slab(*axis, *rise, *fall, *width)?;
            let eps: Vec<f64> = s.iter().map(|&x| 1.0 + contrast * x).collect();
            Ok((eps, vec![1.0; n]))
        }
        config::MediumConfig::Arrays { eps, mu } => Ok((eps.clone(), mu.clone())),
        config::MediumConfig::ArraysFile { path } => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let arrays: config::MediumArraysFile = serde_json::from_str(&text)
                .with_context(|| format!("{path} is not a medium arrays file"))?;
            Ok((arrays.eps, arrays.mu))
        }
    }
}

fn initial_field(
    grid: &PositionGrid,
    cfg: &config::InitialConfig,
) -> Result<HelicityField> {
    match cfg {
        config::InitialConfig::BesselRing { radius_sq, mz, m, helicity } => {
            let wf =
                beam_bessel_grid_locked(grid, *radius_sq, *mz, *m, parse_helicity(helicity)?)?;
            Ok(synthesize(&wf, grid, 0.0)?)
        }
        config::InitialConfig::GaussianPacket { mz, sigma } => {
            let kz = grid.lattice_k(2, *mz);
            let s2 = 2.0 * sigma * sigma;
            let envelope = VectorField3::from_fn(*grid, move |r| {
                let w = (-(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) / s2).exp();
                let ph = photonqm::math::cis(kz * r[2]) * w * std::f64::consts::FRAC_1_SQRT_2;
                [ph, ph * photonqm::C64::new(0.0, 1.0), photonqm::C64::default()]
            });
            let ops = SpectralOps::new(grid)?;
            let split = helicity_project(&envelope, 0.0, &ops)?;
            // Keep only the positive-helicity part as the initial state.
            Ok(HelicityField::from_parts(
                split.psi_plus,
                VectorField3::zeros(*grid),
                0.0,
            )?)
        }
        config::InitialConfig::FieldFile { path } => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let field = io::field_from_json(&text)?;
            if !field.grid.same_grid(grid) {
                bail!(photonqm::Error::GridMismatch(
                    "initial field grid differs from the run grid".into()
                ));
            }
            Ok(field)
        }
    }
}

fn cmd_propagate(args: &PropagateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let cfg: config::PropagateConfig = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid run config", args.config.display()))?;

    let grid = PositionGrid::centered_cube(cfg.grid.n, cfg.grid.length);
    let scheme = match cfg.stepper.scheme.as_str() {
        "rk4_spectral" => DerivativeScheme::Rk4Spectral,
        "rk4_fd4" => DerivativeScheme::Rk4Fd4,
        other => bail!(photonqm::Error::Unsupported(format!(
            "scheme must be rk4_spectral or rk4_fd4, got '{other}'"
        ))),
    };
    let (eps, mu) = slab_media(&grid, &cfg.medium)?;
    let medium = build_medium(&grid, &eps, &mu, scheme)?;
    if medium.aliasing_warning {
        eprintln!("warning: medium jumps by more than 50% between cells; gradients under-resolved");
    }
    let propagator = Propagator::new(medium, scheme)?;
    let mut field = initial_field(&grid, &cfg.initial)?;
    let stepper = StepperConfig {
        dt: cfg.stepper.dt,
        cfl: cfg.stepper.cfl,
        scheme,
        diag_every: cfg.stepper.diag_every,
    };

    let mut rows = Vec::new();
    let snapshot_stride = cfg.output.snapshot_every;
    if snapshot_stride > 0 {
        let prefix = cfg
            .output
            .snapshot_prefix
            .clone()
            .unwrap_or_else(|| "snapshot".to_string());
        let dt = stepper.dt.unwrap_or_else(|| propagator.cfl_limit(stepper.cfl));
        let seg_span = dt * snapshot_stride as f64;
        let mut step_offset = 0usize;
        let mut snap_index = 0usize;
        while field.time < cfg.t_end - 1e-12 {
            let target = (field.time + seg_span).min(cfg.t_end);
            let (state, seg_rows) = propagator.evolve(field, &stepper, target)?;
            for mut row in seg_rows {
                row.step += step_offset;
                if rows.last().map(|r: &photonqm::DiagnosticsRow| r.step) != Some(row.step) {
                    rows.push(row);
                }
            }
            step_offset += state.step_count;
            field = state.field;
            snap_index += 1;
            let path = format!("{prefix}_{snap_index:06}.json");
            write_text(Path::new(&path), &io::field_to_json(&field)?)?;
        }
    } else {
        let (state, all_rows) = propagator.evolve(field, &stepper, cfg.t_end)?;
        rows = all_rows;
        field = state.field;
    }

    let mut buf = Vec::new();
    io::diagnostics_to_csv(&mut buf, &rows)?;
    fs::write(&cfg.output.diagnostics, buf)
        .with_context(|| format!("writing {}", cfg.output.diagnostics))?;
    if let Some(path) = &cfg.output.final_field {
        write_text(Path::new(path), &io::field_to_json(&field)?)?;
    }
    let last = rows.last().ok_or_else(|| anyhow!("no diagnostics rows"))?;
    let first = rows.first().unwrap();
    println!(
        "propagate: t = {:.6}, steps = {}, energy drift = {:.3e}, mixing = {:.3e}",
        last.time,
        last.step,
        if first.energy > 0.0 { (last.energy - first.energy) / first.energy } else { 0.0 },
        last.mixing,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helicity_parsing() {
        assert_eq!(parse_helicity("+").unwrap(), Helicity::Plus);
        assert_eq!(parse_helicity("minus").unwrap(), Helicity::Minus);
        assert!(parse_helicity("0").is_err());
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        let cfl = anyhow!(photonqm::Error::CflViolation { dt: 1.0, limit: 0.1 });
        assert_eq!(exit_code_for(&cfl), 3);
        let nan = anyhow!(photonqm::Error::NanDetected { step: 7, time: 0.5 });
        assert_eq!(exit_code_for(&nan), 4);
        let bad = anyhow!(photonqm::Error::EvanescentBeam);
        assert_eq!(exit_code_for(&bad), 2);
        let io = anyhow!("missing file");
        assert_eq!(exit_code_for(&io), 2);
    }

    #[test]
    fn csv_flattening_is_deterministic() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"b": [1.0, 2.0], "a": {"x": 3.0}}"#).unwrap();
        let csv = json_to_csv(&v);
        assert_eq!(csv, "key,value\na.x,3.0\nb[0],1.0\nb[1],2.0\n");
    }
}

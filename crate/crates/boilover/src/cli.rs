//! Command-line front end. All subcommands emit machine-readable output
//! (`--format json|csv|table`); units are accepted with suffixes at this
//! boundary (mm, m, s, K, C) and normalized to SI immediately.

use crate::corephys::{
    self, characteristic_scales, dimensionless_groups, flux_balance, FlameEnvironment, Scenario,
};
use crate::datasets::{self, FuelDatabase};
use crate::error::Error;
use crate::fdoracle::{self, AdvectionOrder, BcMode, FDConfig, FarBc, Scheme};
use crate::hbi::{self, AblationVariant};
use crate::predict::{self, Method, RadiationMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

/// Default net surface flux when neither --f-flux nor --flame-feedback is
/// given: a representative lab-scale pool-fire feedback.
pub const DEFAULT_SURFACE_FLUX: f64 = 2.0e4;

#[derive(Debug, Parser)]
#[command(
    name = "boilover",
    about = "Closed-form heating solutions and boilover-onset predictors for burning fuel layers on water",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; defaults to `table` on a terminal, `json` otherwise
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Use the verbatim printed forms of the documented formula variants
    /// (flame-feedback without g, as-printed penetration depth)
    #[arg(long, global = true)]
    strict_paper_mode: bool,
    /// Fuel database CSV; falls back to the bundled database
    #[arg(long, global = true, env = "BOILOVER_FUEL_DB")]
    fuel_db: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Args)]
struct ScenarioArgs {
    /// Fuel name from the database
    #[arg(long)]
    fuel: String,
    /// Pool diameter (m; suffixes mm/m accepted)
    #[arg(long = "D", alias = "d", value_parser = parse_length, default_value = "0.15")]
    d: f64,
    /// Initial fuel layer depth (m; suffixes mm/m accepted)
    #[arg(long, value_parser = parse_length)]
    y0: f64,
    /// Ambient layer temperature (K; suffix C accepted)
    #[arg(long, value_parser = parse_temperature, default_value = "293")]
    t_inf: f64,
    /// Regression velocity (m/s); defaults to the fuel's representative value
    #[arg(long)]
    va: Option<f64>,
    /// Mass burning rate (kg/(m^2 s)); alternative to --va
    #[arg(long)]
    mdot: Option<f64>,
    /// Net surface heat flux (W/m^2)
    #[arg(long)]
    f_flux: Option<f64>,
    /// Compute the surface flux from the flame-feedback correlation
    #[arg(long)]
    flame_feedback: bool,
    /// Extinction coefficient for --flame-feedback (1/m)
    #[arg(long, default_value_t = 2.6)]
    k_ext: f64,
    /// Dimensionless boilover-onset temperature
    #[arg(long)]
    theta_b0: Option<f64>,
    /// Residual fuel depth at evaluation (m); defaults to y0
    #[arg(long, value_parser = parse_length)]
    y_f: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensionless groups, characteristic scales, and the flux balance
    Groups(Box<ScenarioArgs>),
    /// Sample a closed-form temperature profile to CSV
    Profile {
        #[command(flatten)]
        scenario: Box<ScenarioArgs>,
        #[arg(long, value_enum, default_value = "ablation-stefan")]
        variant: ProfileVariant,
        /// Evaluation time (s)
        #[arg(long, value_parser = parse_time, default_value = "100")]
        t: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Maximum sampled depth (m); defaults to the layer depth
        #[arg(long, value_parser = parse_length)]
        y_max: Option<f64>,
    },
    /// Penetration-depth curve delta(t)
    Delta {
        #[command(flatten)]
        scenario: Box<ScenarioArgs>,
        #[arg(long, value_parser = parse_time, default_value = "0")]
        from: f64,
        #[arg(long, value_parser = parse_time, default_value = "1000")]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Time-to-boilover prediction
    Predict {
        #[command(flatten)]
        scenario: Box<ScenarioArgs>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Fourier number input for problem B
        #[arg(long)]
        fo_e: Option<f64>,
    },
    /// Finite-difference reference solve with the boilover probe
    Oracle {
        #[command(flatten)]
        scenario: Box<ScenarioArgs>,
        #[arg(long, default_value_t = 256)]
        cells: usize,
        #[arg(long, value_parser = parse_time, default_value = "300")]
        t_end: f64,
        #[arg(long, value_parser = parse_time)]
        dt: Option<f64>,
        #[arg(long, value_enum, default_value = "implicit")]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 1.0)]
        theta_weight: f64,
        #[arg(long, value_enum, default_value = "flux-stefan")]
        bc: BcArg,
        /// Disable the volumetric absorption source
        #[arg(long)]
        no_source: bool,
        /// Adiabatic bottom instead of the truncated far field
        #[arg(long)]
        adiabatic_bottom: bool,
        #[arg(long, value_parser = parse_length)]
        domain_depth: Option<f64>,
        #[arg(long, default_value_t = 1)]
        save_every: usize,
        /// Write the solution history CSV here (with a .config.json echo)
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Predictor-vs-experiment comparison report
    Compare {
        /// Dataset CSV; defaults to the bundled experiment tables
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Comma-separated methods
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Conduction, MethodArg::Radiation])]
        methods: Vec<MethodArg>,
    },
    /// Vary one parameter and emit a prediction per point
    Sweep {
        #[command(flatten)]
        scenario: Box<ScenarioArgs>,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, value_parser = parse_length_or_number)]
        from: f64,
        #[arg(long, value_parser = parse_length_or_number)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileVariant {
    HbiQuadratic,
    AblationLinear,
    AblationStefan,
    WaveLinear,
    WaveStefan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Conduction,
    /// Radiation estimate with the unit prefactor
    Radiation,
    /// Radiation estimate with the ~0.84 prefactor
    RadiationExact,
    ProblemA,
    ProblemB,
    ScaledA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BcArg {
    Dirichlet,
    FluxLinear,
    FluxStefan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    Y0,
    D,
    Va,
    FFlux,
}

fn parse_length(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(v) = s.strip_suffix("mm") {
        return v
            .trim()
            .parse::<f64>()
            .map(|x| x * 1e-3)
            .map_err(|e| e.to_string());
    }
    if let Some(v) = s.strip_suffix('m') {
        return v.trim().parse::<f64>().map_err(|e| e.to_string());
    }
    s.parse::<f64>().map_err(|_| {
        format!("cannot parse `{s}` as a length; use a plain number (m) or the mm/m suffixes")
    })
}

fn parse_temperature(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(v) = s.strip_suffix('K') {
        return v.trim().parse::<f64>().map_err(|e| e.to_string());
    }
    if let Some(v) = s.strip_suffix('C') {
        return v
            .trim()
            .parse::<f64>()
            .map(|x| x + 273.15)
            .map_err(|e| e.to_string());
    }
    s.parse::<f64>()
        .map_err(|_| format!("cannot parse `{s}` as a temperature; use Kelvin or the K/C suffixes"))
}

fn parse_time(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(v) = s.strip_suffix('s') {
        return v.trim().parse::<f64>().map_err(|e| e.to_string());
    }
    s.parse::<f64>()
        .map_err(|_| format!("cannot parse `{s}` as a time in seconds"))
}

/// Sweep bounds accept length suffixes for the geometric parameters and
/// plain numbers otherwise.
fn parse_length_or_number(s: &str) -> Result<f64, String> {
    parse_length(s)
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidRegime(_)
        | Error::Domain(_)
        | Error::Instability(_)
        | Error::NonConvergence(_) => 3,
        _ => 2,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::MissingInput(_) => "missing_input",
        Error::Conflict(_) => "conflict",
        Error::Invalid(_) => "invalid_input",
        Error::InvalidRegime(_) => "invalid_regime",
        Error::Domain(_) => "domain",
        Error::Instability(_) => "instability",
        Error::NonConvergence(_) => "non_convergence",
        Error::Schema { .. } => "schema",
        Error::Unit(_) => "unit",
        Error::Io(_) => "io",
    }
}

struct Ctx {
    format: Format,
    strict: bool,
    db: FuelDatabase,
}

impl Ctx {
    fn build_scenario(&self, args: &ScenarioArgs) -> Result<(Scenario, Vec<String>), Error> {
        let mut notes = Vec::new();
        let fuel = self
            .db
            .get(&args.fuel)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown fuel `{}`; available: {}",
                    args.fuel,
                    self.db.names().collect::<Vec<_>>().join(", ")
                ))
            })?
            .clone();
        let va = match (args.va, args.mdot) {
            (None, None) => {
                let v = datasets::representative_velocity(&args.fuel).ok_or_else(|| {
                    Error::MissingInput(format!(
                        "no --va/--mdot given and no representative velocity for `{}`",
                        args.fuel
                    ))
                })?;
                notes.push(format!("regression velocity defaulted to {v:.3e} m/s"));
                Some(v)
            }
            (va, _) => va,
        };
        let f_flux = if let Some(f) = args.f_flux {
            f
        } else if args.flame_feedback {
            let env = FlameEnvironment {
                k_ext: args.k_ext,
                g: if self.strict { 1.0 } else { 9.81 },
                ..FlameEnvironment::default()
            };
            let f = corephys::flame_feedback(&env, args.d)?;
            notes.push(format!(
                "surface flux from the flame-feedback correlation: {f:.4e} W/m^2{}",
                if self.strict { " (printed form, g = 1)" } else { "" }
            ));
            f
        } else {
            notes.push(format!(
                "surface flux defaulted to {DEFAULT_SURFACE_FLUX:.1e} W/m^2"
            ));
            DEFAULT_SURFACE_FLUX
        };
        let mut scenario = Scenario::new(
            fuel,
            args.d,
            args.y0,
            args.t_inf,
            va,
            args.mdot,
            f_flux,
            args.theta_b0,
        )?;
        if let Some(y_f) = args.y_f {
            scenario.y_f = y_f;
            scenario.validate()?;
        }
        Ok((scenario, notes))
    }
}

/// Entry point used by both `main` and the integration tests. Returns the
/// process exit code: 0 on success, 2 on input errors, 3 on regime or
/// validity errors.
pub fn run(
    argv: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    stdout_is_tty: bool,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own help/version on stdout with exit code 0
            if e.exit_code() == 0 {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = write!(stderr, "{e}");
            return 2;
        }
    };
    let format = cli.format.unwrap_or(if stdout_is_tty {
        Format::Table
    } else {
        Format::Json
    });
    let db = match &cli.fuel_db {
        Some(path) => match FuelDatabase::load(path) {
            Ok(db) => db,
            Err(e) => return emit_error(&e, format, stderr),
        },
        None => FuelDatabase::bundled(),
    };
    let ctx = Ctx {
        format,
        strict: cli.strict_paper_mode,
        db,
    };
    match dispatch(&cli.command, &ctx, stdout) {
        Ok(()) => 0,
        Err(e) => emit_error(&e, format, stderr),
    }
}

fn emit_error(err: &Error, format: Format, stderr: &mut dyn Write) -> i32 {
    match format {
        Format::Json => {
            let doc = serde_json::json!({"error": err.to_string(), "kind": error_kind(err)});
            let _ = writeln!(stderr, "{doc}");
        }
        _ => {
            let _ = writeln!(stderr, "error[{}]: {err}", error_kind(err));
        }
    }
    exit_code(err)
}

fn dispatch(command: &Command, ctx: &Ctx, out: &mut dyn Write) -> Result<(), Error> {
    match command {
        Command::Groups(args) => cmd_groups(args, ctx, out),
        Command::Profile {
            scenario,
            variant,
            t,
            samples,
            y_max,
        } => cmd_profile(scenario, *variant, *t, *samples, *y_max, ctx, out),
        Command::Delta {
            scenario,
            from,
            to,
            steps,
        } => cmd_delta(scenario, *from, *to, *steps, ctx, out),
        Command::Predict {
            scenario,
            method,
            fo_e,
        } => cmd_predict(scenario, *method, *fo_e, ctx, out),
        Command::Oracle {
            scenario,
            cells,
            t_end,
            dt,
            scheme,
            theta_weight,
            bc,
            no_source,
            adiabatic_bottom,
            domain_depth,
            save_every,
            dump,
        } => cmd_oracle(
            scenario,
            *cells,
            *t_end,
            *dt,
            *scheme,
            *theta_weight,
            *bc,
            *no_source,
            *adiabatic_bottom,
            *domain_depth,
            *save_every,
            dump.as_deref(),
            ctx,
            out,
        ),
        Command::Compare { dataset, methods } => cmd_compare(dataset.as_deref(), methods, ctx, out),
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            method,
        } => cmd_sweep(scenario, *param, *from, *to, *steps, *method, ctx, out),
    }
}

fn cmd_groups(args: &ScenarioArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<(), Error> {
    let (scenario, notes) = ctx.build_scenario(args)?;
    let groups = dimensionless_groups(&scenario)?;
    let scales = characteristic_scales(&scenario)?;
    let balance = flux_balance(&scenario)?;
    let doc = serde_json::json!({
        "fuel": scenario.fuel.name,
        "D_m": scenario.d,
        "y0_m": scenario.y0,
        "T_inf_K": scenario.t_inf,
        "V_a_m_per_s": scales.v_a,
        "F_W_per_m2": scenario.f_flux,
        "flux_balance": balance,
        "groups": {
            "N_DHS": groups.n_dhs,
            "Ste": groups.ste,
            "Bu": groups.bu,
            "N0": groups.n0,
            "B_SA": groups.b_sa,
            "H_p": groups.h_p,
            "B_F": groups.b_f,
            "B_F_paper_form": groups.b_f_paper(),
            "N_p": groups.n_p,
            "delta_F": groups.delta_f,
        },
        "scales": {
            "t0_s": scales.t0,
            "tau0_s": scales.tau0,
            "t0_h_s": scales.t0_h,
            "L0_m": scales.l0,
            "U0_m_per_s": scales.u0,
            "y_p0_m": scales.y_p0,
        },
        "notes": notes,
    });
    match ctx.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        Format::Csv => {
            writeln!(
                out,
                "N_DHS,Ste,Bu,N0,B_SA,H_p,B_F,N_p,delta_F,t0_s,tau0_s,L0_m,U0_m_per_s,y_p0_m,phi_W_per_m2"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                groups.n_dhs,
                groups.ste,
                groups.bu,
                groups.n0,
                groups.b_sa,
                groups.h_p,
                groups.b_f,
                groups.n_p,
                groups.delta_f,
                scales.t0,
                scales.tau0,
                scales.l0,
                scales.u0,
                scales.y_p0,
                balance.phi
            )?;
        }
        Format::Table => write_table(&doc, out)?,
    }
    Ok(())
}

fn cmd_profile(
    args: &ScenarioArgs,
    variant: ProfileVariant,
    t: f64,
    samples: usize,
    y_max: Option<f64>,
    ctx: &Ctx,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let (scenario, _) = ctx.build_scenario(args)?;
    let groups = dimensionless_groups(&scenario)?;
    let scales = characteristic_scales(&scenario)?;
    let balance = flux_balance(&scenario)?;
    let n = samples.max(2);
    let mut rows = Vec::with_capacity(n);
    let layer = (scenario.y0 - scales.v_a * t).max(0.0);
    match variant {
        ProfileVariant::HbiQuadratic => {
            let delta = if ctx.strict {
                hbi::hbi_delta_verbatim(&groups, &scales, t)?
            } else {
                hbi::hbi_delta(&groups, &scales, t)?
            };
            if delta <= 0.0 {
                return Err(Error::Domain(
                    "penetration depth is zero at t = 0; sample at t > 0".into(),
                ));
            }
            let profile = hbi::hbi_quadratic_profile(&balance, &scenario.fuel, scenario.t_inf, delta)?;
            let top = y_max.unwrap_or(delta).min(delta);
            for i in 0..n {
                let y = top * i as f64 / (n - 1) as f64;
                let theta = profile.theta(y)?;
                rows.push(hbi::ProfileSample {
                    y_m: y,
                    t_s: t,
                    theta,
                    variant: "hbi_quadratic".into(),
                    saturated: theta > 1.0,
                });
            }
        }
        ProfileVariant::AblationLinear
        | ProfileVariant::AblationStefan
        | ProfileVariant::WaveLinear
        | ProfileVariant::WaveStefan => {
            let (ab_variant, name) = match variant {
                ProfileVariant::AblationLinear => (AblationVariant::LinearBc, "ablation_linear"),
                ProfileVariant::AblationStefan => (AblationVariant::StefanBc, "ablation_stefan"),
                ProfileVariant::WaveLinear => (AblationVariant::LinearBc, "wave_linear"),
                _ => (AblationVariant::StefanBc, "wave_stefan"),
            };
            let profile = hbi::ablation_parameters(
                ab_variant,
                &scenario.fuel,
                balance.phi,
                scenario.delta_t(),
                scales.v_a,
            );
            let top = y_max.unwrap_or(scenario.y0);
            let wave = matches!(
                variant,
                ProfileVariant::WaveLinear | ProfileVariant::WaveStefan
            );
            for i in 0..n {
                let y = top * i as f64 / (n - 1) as f64;
                let theta = if wave {
                    hbi::wave_pulse_theta(&profile, y, t)
                } else {
                    hbi::ablation_theta(&profile, y, t, layer).theta
                };
                rows.push(hbi::ProfileSample {
                    y_m: y,
                    t_s: t,
                    theta,
                    variant: name.into(),
                    saturated: theta > 1.0,
                });
            }
        }
    }
    match ctx.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        _ => write!(out, "{}", hbi::profile_csv(&rows))?,
    }
    Ok(())
}

fn cmd_delta(
    args: &ScenarioArgs,
    from: f64,
    to: f64,
    steps: usize,
    ctx: &Ctx,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let (scenario, _) = ctx.build_scenario(args)?;
    let groups = dimensionless_groups(&scenario)?;
    let scales = characteristic_scales(&scenario)?;
    let n = steps.max(2);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let t = from + (to - from) * i as f64 / (n - 1) as f64;
        let delta = if ctx.strict {
            hbi::hbi_delta_verbatim(&groups, &scales, t)?
        } else {
            hbi::hbi_delta(&groups, &scales, t)?
        };
        rows.push((t, delta));
    }
    match ctx.format {
        Format::Json => {
            let doc: Vec<serde_json::Value> = rows
                .iter()
                .map(|(t, d)| serde_json::json!({"t_s": t, "delta_m": d}))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        _ => {
            writeln!(out, "t_s,delta_m")?;
            for (t, d) in rows {
                writeln!(out, "{t},{d}")?;
            }
        }
    }
    Ok(())
}

fn cmd_predict(
    args: &ScenarioArgs,
    method: MethodArg,
    fo_e: Option<f64>,
    ctx: &Ctx,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let (scenario, notes) = ctx.build_scenario(args)?;
    let groups = dimensionless_groups(&scenario)?;
    let scales = characteristic_scales(&scenario)?;
    let report = predict::classify_regime(&scenario)?;
    let predictions = match method {
        MethodArg::Auto => predict::predict_auto(&scenario)?,
        MethodArg::Conduction => vec![predict::conduction_t_b0(&groups, &scales)?],
        MethodArg::Radiation => vec![predict::radiation_t_b0(
            &scenario,
            &groups,
            &scales,
            RadiationMode::Unity,
        )?],
        MethodArg::RadiationExact => vec![predict::radiation_t_b0(
            &scenario,
            &groups,
            &scales,
            RadiationMode::Exact084,
        )?],
        MethodArg::ProblemA => vec![predict::predict_problem_a(&scenario, &groups)?],
        MethodArg::ProblemB => {
            let fo = fo_e.ok_or_else(|| {
                Error::MissingInput("problem B requires --fo-e".into())
            })?;
            vec![predict::predict_problem_b(&scenario, &groups, fo)?]
        }
        MethodArg::ScaledA => vec![predict::scaled_problem_a(&scenario, &groups)?],
    };
    match ctx.format {
        Format::Json => {
            let doc = serde_json::json!({
                "regime_report": report,
                "predictions": predictions,
                "notes": notes,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "{}", predict::prediction_csv_header())?;
            for p in &predictions {
                writeln!(out, "{}", predict::prediction_csv_row(p))?;
            }
        }
        Format::Table => {
            let doc = serde_json::json!({
                "regime_report": report,
                "predictions": predictions,
                "notes": notes,
            });
            write_table(&doc, out)?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    args: &ScenarioArgs,
    cells: usize,
    t_end: f64,
    dt: Option<f64>,
    scheme: SchemeArg,
    theta_weight: f64,
    bc: BcArg,
    no_source: bool,
    adiabatic_bottom: bool,
    domain_depth: Option<f64>,
    save_every: usize,
    dump: Option<&std::path::Path>,
    ctx: &Ctx,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let (scenario, notes) = ctx.build_scenario(args)?;
    let config = FDConfig {
        n_cells: cells,
        domain_depth,
        dt_safety: 0.4,
        t_end,
        scheme: match scheme {
            SchemeArg::Explicit => Scheme::Explicit,
            SchemeArg::Implicit => Scheme::ImplicitTheta(theta_weight),
        },
        bc_mode: match bc {
            BcArg::Dirichlet => BcMode::DirichletTs,
            BcArg::FluxLinear => BcMode::FluxLinear,
            BcArg::FluxStefan => BcMode::FluxStefan,
        },
        source_on: !no_source,
        far_bc: if adiabatic_bottom {
            FarBc::AdiabaticBottom
        } else {
            FarBc::FarFieldZero
        },
        advection: AdvectionOrder::Upwind2,
        dt,
        save_every,
    };
    let solution = fdoracle::fd_solve(&scenario, &config)?;
    let probe = if scenario.theta_b0.is_some() {
        Some(fdoracle::fd_probe_boilover(&solution, &scenario)?)
    } else {
        None
    };
    let steady = fdoracle::fd_steady_check(&solution, None);
    let worst_audit = solution
        .energy_audit
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max);
    if let Some(path) = dump {
        std::fs::write(path, solution.dump_csv())?;
        let echo_path = path.with_extension("config.json");
        std::fs::write(&echo_path, solution.config_echo_json())?;
    }
    let doc = serde_json::json!({
        "problem": solution.problem,
        "config": solution.config,
        "probe": probe,
        "steady": steady,
        "worst_energy_residual": worst_audit,
        "saved_steps": solution.times.len(),
        "notes": notes,
    });
    match ctx.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        Format::Csv => write!(out, "{}", solution.dump_csv())?,
        Format::Table => write_table(&doc, out)?,
    }
    Ok(())
}

fn method_args_to_methods(methods: &[MethodArg]) -> Vec<Method> {
    methods
        .iter()
        .map(|m| match m {
            MethodArg::Conduction => Method::Conduction,
            MethodArg::Radiation => Method::RadiationUnitPrefactor,
            MethodArg::RadiationExact => Method::RadiationExact,
            MethodArg::ProblemA | MethodArg::Auto => Method::ProblemA,
            MethodArg::ProblemB => Method::ProblemB,
            MethodArg::ScaledA => Method::ScaledA,
        })
        .collect()
}

fn cmd_compare(
    dataset: Option<&std::path::Path>,
    methods: &[MethodArg],
    ctx: &Ctx,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let records = match dataset {
        Some(path) => {
            let mut recs = datasets::load_experiments(path)?;
            datasets::resolve_records(&mut recs, &ctx.db);
            recs
        }
        None => datasets::bundled_experiments(),
    };
    let methods = method_args_to_methods(methods);
    let report = datasets::compare_report(&records, &methods, &ctx.db);
    match ctx.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => write!(out, "{}", datasets::report_csv(&report, &methods))?,
        Format::Table => {
            writeln!(out, "rows: {}", report.rows.len())?;
            for s in &report.summaries {
                writeln!(
                    out,
                    "{}: {} predictions, {} ratios, median {}, within [0.7,1.2]: {}, within [0.9,1.1]: {}",
                    s.method,
                    s.n_predictions,
                    s.n_ratios,
                    s.median_ratio.map(|m| format!("{m:.3}")).unwrap_or_else(|| "-".into()),
                    s.within_0_7_to_1_2,
                    s.within_0_9_to_1_1
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_sweep(
    args: &ScenarioArgs,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    method: MethodArg,
    ctx: &Ctx,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let n = steps.max(2);
    let mut rows: Vec<(f64, predict::PredictionResult)> = Vec::new();
    for i in 0..n {
        let value = from + (to - from) * i as f64 / (n - 1) as f64;
        let mut point = args.clone();
        match param {
            SweepParam::Y0 => point.y0 = value,
            SweepParam::D => point.d = value,
            SweepParam::Va => point.va = Some(value),
            SweepParam::FFlux => point.f_flux = Some(value),
        }
        point.y_f = None;
        let (scenario, _) = ctx.build_scenario(&point)?;
        let groups = dimensionless_groups(&scenario)?;
        let scales = characteristic_scales(&scenario)?;
        let predictions = match method {
            MethodArg::Auto => predict::predict_auto(&scenario)?,
            MethodArg::Conduction => match predict::conduction_t_b0(&groups, &scales) {
                Ok(p) => vec![p],
                Err(e) => vec![unavailable(Method::Conduction, &scenario, &e)?],
            },
            MethodArg::Radiation => vec![predict::radiation_t_b0(
                &scenario,
                &groups,
                &scales,
                RadiationMode::Unity,
            )?],
            MethodArg::RadiationExact => vec![predict::radiation_t_b0(
                &scenario,
                &groups,
                &scales,
                RadiationMode::Exact084,
            )?],
            MethodArg::ProblemA => vec![predict::predict_problem_a(&scenario, &groups)?],
            MethodArg::ScaledA => vec![predict::scaled_problem_a(&scenario, &groups)?],
            MethodArg::ProblemB => {
                return Err(Error::Invalid(
                    "problem B needs a fixed --fo-e; it has no sweep form".into(),
                ))
            }
        };
        for p in predictions {
            rows.push((value, p));
        }
    }
    let param_name = match param {
        SweepParam::Y0 => "y0_m",
        SweepParam::D => "D_m",
        SweepParam::Va => "V_a_m_per_s",
        SweepParam::FFlux => "F_W_per_m2",
    };
    match ctx.format {
        Format::Json => {
            let doc: Vec<serde_json::Value> = rows
                .iter()
                .map(|(v, p)| {
                    serde_json::json!({
                        "param": param_name,
                        "value": v,
                        "prediction": p,
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        _ => {
            writeln!(out, "{},{}", param_name, predict::prediction_csv_header())?;
            for (v, p) in &rows {
                writeln!(out, "{},{}", v, predict::prediction_csv_row(p))?;
            }
        }
    }
    Ok(())
}

fn unavailable(
    method: Method,
    scenario: &Scenario,
    err: &Error,
) -> Result<predict::PredictionResult, Error> {
    let regime = predict::classify_regime(scenario)?.classification;
    Ok(predict::PredictionResult {
        method,
        t_b0: None,
        fo_e: None,
        theta_b0: None,
        regime,
        u_t: None,
        warnings: vec![format!("unavailable: {err}")],
    })
}

/// Plain `key = value` rendering of a JSON document for terminals.
fn write_table(doc: &serde_json::Value, out: &mut dyn Write) -> Result<(), Error> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut dyn Write) -> std::io::Result<()> {
        match v {
            serde_json::Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, v, out)?;
                }
                Ok(())
            }
            serde_json::Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), v, out)?;
                }
                Ok(())
            }
            other => writeln!(out, "{prefix} = {other}"),
        }
    }
    walk("", doc, out)?;
    Ok(())
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("serialization failed: {e}"))
    }
}

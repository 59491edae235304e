use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::constants::PhysicalConstants;
use crate::dispersion::{omega_limit, sample_curve, Coefficients, KGrid, Limit, LimitParams, Mode, Spacing};
use crate::error::Error;
use crate::inversion::{diagnostics_from_fit, fit_dispersion, read_samples_csv, FitOptions};
use crate::params::{derived_scales, DerivedScales, PlasmaComposition};
use crate::regime::classify_regime;
use crate::simulator::{build_operator, init_plane_wave, measure_frequency, modal_energy, run};
use crate::units::{parse_quantity, Dimension};

use super::config::quantity;
use super::{CliError, Context, DispersionArgs, Format, InvertArgs, RegimesArgs, SimulateArgs};

const CONSTS: PhysicalConstants = PhysicalConstants::CODATA_2018;

const DEFAULT_POINTS: usize = 200;
const DEFAULT_MODES: [i64; 2] = [1, 2];
const DEFAULT_PERIODS: f64 = 50.0;
const DEFAULT_STEPS_PER_PERIOD: f64 = 1000.0;
/// Snapshots kept per period of the fastest excited mode.
const SAMPLES_PER_PERIOD: f64 = 50.0;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values are serializable");
    text.push('\n');
    text
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::input("io", e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::input("io", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn argument(message: String) -> CliError {
    CliError::input("argument", message)
}

fn pick_mode(flag: Option<&str>, config: Option<&str>) -> Result<Mode, CliError> {
    match flag.or(config) {
        Some(text) => text.parse().map_err(argument),
        None => Ok(Mode::MobileDust),
    }
}

fn wavenumber_flag(text: &str, name: &str) -> Result<f64, CliError> {
    parse_quantity(text, Dimension::Wavenumber).map_err(|e| argument(format!("--{name}: {e}")))
}

fn plasma(ctx: &Context) -> Result<(PlasmaComposition, DerivedScales), CliError> {
    let comp = ctx.config.composition()?;
    Ok((comp, derived_scales(&comp, &CONSTS)))
}

/// Wavenumber the defaults of a mode are anchored to.
fn reference_wavenumber(coeffs: &Coefficients) -> f64 {
    match coeffs {
        Coefficients::A(c) => c.k_q,
        Coefficients::B(c) => c.k_di,
    }
}

pub fn cmd_scales(ctx: &Context) -> Result<String, CliError> {
    let (comp, s) = plasma(ctx)?;
    let rows: [(&str, Option<f64>, &str); 16] = [
        ("n_e0", Some(comp.n_e0), "per_cm3"),
        ("n_i0", Some(comp.n_i0), "per_cm3"),
        ("n_d0", Some(comp.n_d0), "per_cm3"),
        ("m_i", Some(comp.m_i), "g"),
        ("m_d", Some(comp.m_d), "g"),
        ("T_i", Some(comp.t_i), "erg"),
        ("K_q", Some(s.k_q), "per_cm"),
        ("omega_pi", Some(s.omega_pi), "rad_per_s"),
        ("omega_pd", Some(s.omega_pd), "rad_per_s"),
        ("V_Ti", Some(s.v_ti), "cm_per_s"),
        ("k_Di", s.k_di, "per_cm"),
        ("C_D", s.c_d, "cm_per_s"),
        ("q_i", Some(s.q_i), "cm2_per_s"),
        ("T_eF", Some(s.t_ef), "erg"),
        ("a0", Some(CONSTS.bohr_radius()), "cm"),
        ("quasineutrality_residual", Some(comp.quasineutrality_residual()), ""),
    ];
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut map = Map::new();
            for (name, value, unit) in rows {
                let key = if unit.is_empty() { name.to_string() } else { format!("{name}_{unit}") };
                map.insert(key, json!(value));
            }
            map.insert("Z_i".into(), json!(comp.z_i));
            map.insert("Z_d".into(), json!(comp.z_d));
            map.insert("dust_polarity".into(), json!(comp.polarity));
            map.insert("T_eF_from_density".into(), json!(s.t_ef_derived));
            Ok(json_text(&Value::Object(map)))
        }
        Format::Csv => {
            let mut table: Vec<Vec<String>> = rows
                .iter()
                .map(|(name, value, unit)| vec![name.to_string(), value.map_or(String::new(), num), unit.to_string()])
                .collect();
            table.push(vec!["Z_i".into(), comp.z_i.to_string(), String::new()]);
            table.push(vec!["Z_d".into(), comp.z_d.to_string(), String::new()]);
            csv_text(&["quantity", "value", "unit"], &table)
        }
    }
}

fn parse_limits(text: &str, mode: Mode) -> Result<Vec<Limit>, CliError> {
    match text.trim() {
        "" | "none" => return Ok(Vec::new()),
        "all" => return Ok(Limit::for_mode(mode).collect()),
        _ => {}
    }
    let mut limits = Vec::new();
    for item in text.split(',') {
        let limit: Limit = item.trim().parse().map_err(argument)?;
        if limit.mode() != mode {
            return Err(argument(format!("limit {} belongs to the {} mode", limit.name(), limit.mode().name())));
        }
        if !limits.contains(&limit) {
            limits.push(limit);
        }
    }
    Ok(limits)
}

pub fn cmd_dispersion(ctx: &Context, args: &DispersionArgs) -> Result<String, CliError> {
    let grid_cfg = &ctx.config.grid;
    let (comp, scales) = plasma(ctx)?;
    let mode = pick_mode(args.mode.as_deref(), grid_cfg.mode.as_deref())?;
    let coeffs = Coefficients::from_scales(mode, &scales)?;
    let reference = reference_wavenumber(&coeffs);

    let bound = |flag: &Option<String>, cfg: &Option<crate::units::Quantity>, name: &str, default: f64| {
        match (flag, cfg) {
            (Some(text), _) => wavenumber_flag(text, name),
            (None, Some(q)) => quantity(q, Dimension::Wavenumber, name),
            (None, None) => Ok(default),
        }
    };
    let k_min = bound(&args.kmin, &grid_cfg.k_min, "kmin", 0.01 * reference)?;
    let k_max = bound(&args.kmax, &grid_cfg.k_max, "kmax", 10.0 * reference)?;
    let n_points = args.points.or(grid_cfg.points).unwrap_or(DEFAULT_POINTS);
    let spacing: Spacing = match args.spacing.as_deref().or(grid_cfg.spacing.as_deref()) {
        Some(text) => text.parse().map_err(argument)?,
        None => Spacing::default(),
    };
    let limits = match (&args.limits, &grid_cfg.limits) {
        (Some(text), _) => parse_limits(text, mode)?,
        (None, Some(list)) => parse_limits(&list.join(","), mode)?,
        (None, None) => Vec::new(),
    };

    let curve = sample_curve(&coeffs, &KGrid::new(k_min, k_max, n_points, spacing))?;
    let params = LimitParams::from_plasma(&comp, &scales, &CONSTS);
    let mut limit_values = Vec::with_capacity(curve.samples.len());
    for s in &curve.samples {
        let row = limits
            .iter()
            .map(|&l| omega_limit(l, &params, s.k))
            .collect::<Result<Vec<f64>, Error>>()?;
        limit_values.push(row);
    }

    let flag_names: &[&str] = match mode {
        Mode::ImmobileDust => &["quantum_limit"],
        Mode::MobileDust => &["quantum_limit", "long_wavelength", "dust_quantum", "dust_acoustic"],
    };
    let flags_of = |f: &crate::dispersion::RegimeFlags| -> Vec<bool> {
        let mut v = vec![f.quantum_limit];
        v.extend([f.long_wavelength, f.dust_quantum, f.dust_acoustic].into_iter().flatten());
        v
    };

    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut header = vec!["k", "omega_full"];
            header.extend(limits.iter().map(|l| l.column()));
            header.extend(flag_names);
            let rows: Vec<Vec<String>> = curve
                .samples
                .iter()
                .zip(&limit_values)
                .map(|(s, lv)| {
                    let mut row = vec![num(s.k), num(s.omega)];
                    row.extend(lv.iter().map(|&v| num(v)));
                    row.extend(flags_of(&s.flags).iter().map(|b| b.to_string()));
                    row
                })
                .collect();
            csv_text(&header, &rows)
        }
        Format::Json => {
            let samples: Vec<Value> = curve
                .samples
                .iter()
                .zip(&limit_values)
                .map(|(s, lv)| {
                    let mut obj = Map::new();
                    obj.insert("k".into(), json!(s.k));
                    obj.insert("omega_full".into(), json!(s.omega));
                    for (l, v) in limits.iter().zip(lv) {
                        obj.insert(l.column().into(), json!(v));
                    }
                    for (name, b) in flag_names.iter().zip(flags_of(&s.flags)) {
                        obj.insert((*name).into(), json!(b));
                    }
                    Value::Object(obj)
                })
                .collect();
            Ok(json_text(&json!({
                "mode": mode,
                "coefficients": coeffs,
                "samples": samples,
            })))
        }
    }
}

pub fn cmd_simulate(ctx: &Context, args: &SimulateArgs) -> Result<String, CliError> {
    let sim = &ctx.config.simulation;
    let (_, scales) = plasma(ctx)?;
    let mode = pick_mode(args.mode.as_deref(), sim.mode.as_deref())?;
    let coeffs = Coefficients::from_scales(mode, &scales)?;

    let modes: Vec<i64> = args
        .modes
        .clone()
        .or_else(|| sim.modes.clone())
        .unwrap_or_else(|| DEFAULT_MODES.to_vec());
    let amplitudes = match &sim.amplitudes {
        Some(a) => a.clone(),
        None => vec![1.0; modes.len()],
    };
    let highest = modes.iter().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0);
    let n_modes = sim.n_modes.unwrap_or((highest + 1).max(2));
    let length = match &sim.length {
        Some(q) => quantity(q, Dimension::Length, "simulation.length")?,
        // Puts the first mode at half the reference wavenumber.
        None => 4.0 * std::f64::consts::PI / reference_wavenumber(&coeffs),
    };
    let operator = build_operator(&coeffs, length, n_modes)?;
    let initial = init_plane_wave(&operator.zero_state(), &modes, &amplitudes)?;

    let excited: Vec<usize> = {
        let mut v: Vec<usize> = modes.iter().map(|m| m.unsigned_abs() as usize).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let omegas: Vec<f64> = excited
        .iter()
        .map(|&m| operator.omega_sq[m].sqrt())
        .filter(|&w| w > 0.0)
        .collect();
    if omegas.is_empty() {
        return Err(argument("no excited mode oscillates; excite at least one m != 0".into()));
    }
    let slowest = omegas.iter().cloned().fold(f64::INFINITY, f64::min);
    let fastest = operator.max_omega();
    let two_pi = 2.0 * std::f64::consts::PI;

    let steps_per_period = sim.steps_per_period.unwrap_or(DEFAULT_STEPS_PER_PERIOD);
    let dt = match (&args.dt, &sim.dt) {
        (Some(text), _) => parse_quantity(text, Dimension::Time).map_err(|e| argument(format!("--dt: {e}")))?,
        (None, Some(q)) => quantity(q, Dimension::Time, "simulation.dt")?,
        (None, None) => two_pi / (fastest * steps_per_period),
    };
    let periods = args.periods.or(sim.periods).unwrap_or(DEFAULT_PERIODS);
    if !(dt.is_finite() && dt > 0.0 && periods.is_finite() && periods > 0.0) {
        return Err(argument(format!("need dt > 0 and periods > 0, got dt = {dt:e}, periods = {periods}")));
    }
    let n_steps = (periods * two_pi / slowest / dt).ceil() as usize;
    let stride = sim
        .stride
        .unwrap_or_else(|| ((two_pi / fastest / dt) / SAMPLES_PER_PERIOD).floor().max(1.0) as usize);

    let trajectory = run(&operator, &initial, dt, n_steps, stride)?;
    let measured = measure_frequency(&trajectory)?;
    let e0 = modal_energy(&operator, &initial);
    let e1 = modal_energy(&operator, trajectory.snapshots.last().expect("trajectory keeps the initial state"));

    if let Some(path) = &args.snapshots {
        write_snapshots(path, &trajectory)?;
    }

    let mut reports = Vec::new();
    for &m in &excited {
        let analytic = operator.omega_sq[m].sqrt();
        let fit = measured.get(m);
        let omega = fit.map(|f| f.omega);
        let rel_error = omega.map(|w| if analytic > 0.0 { (w - analytic).abs() / analytic } else { w });
        let drift = if e0[m] > 0.0 { (e1[m] - e0[m]).abs() / e0[m] } else { 0.0 };
        reports.push((m, operator.wavenumber(m), analytic, omega, rel_error, fit.map(|f| f.residual), drift));
    }

    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => {
            let modes: Vec<Value> = reports
                .iter()
                .map(|&(m, k, analytic, omega, rel, residual, drift)| {
                    json!({
                        "mode": m,
                        "k_per_cm": k,
                        "omega_analytic": analytic,
                        "omega_measured": omega,
                        "rel_error": rel,
                        "fit_residual": residual,
                        "energy_drift": drift,
                    })
                })
                .collect();
            Ok(json_text(&json!({
                "mode": mode,
                "coefficients": coeffs,
                "length_cm": length,
                "n_modes": n_modes,
                "dt_s": dt,
                "n_steps": n_steps,
                "stride": stride,
                "periods": periods,
                "method": measured.method,
                "seed": ctx.seed,
                "modes": modes,
            })))
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or(String::new(), num);
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|&(m, k, analytic, omega, rel, residual, drift)| {
                    vec![m.to_string(), num(k), num(analytic), opt(omega), opt(rel), opt(residual), num(drift)]
                })
                .collect();
            csv_text(
                &["mode", "k", "omega_analytic", "omega_measured", "rel_error", "fit_residual", "energy_drift"],
                &rows,
            )
        }
    }
}

fn write_snapshots(path: &Path, trajectory: &crate::simulator::Trajectory) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::input("io", format!("cannot write {}: {e}", path.display())))?;
    trajectory
        .write_csv(std::io::BufWriter::new(file))
        .map_err(|e| CliError::input("io", format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_invert(ctx: &Context, args: &InvertArgs) -> Result<String, CliError> {
    let fit_cfg = &ctx.config.fit;
    let mode = pick_mode(args.mode.as_deref(), fit_cfg.mode.as_deref())?;
    let file = std::fs::File::open(&args.samples)
        .map_err(|e| CliError::input("io", format!("cannot read {}: {e}", args.samples.display())))?;
    let samples = read_samples_csv(std::io::BufReader::new(file))?;

    let mut options = FitOptions::default();
    if let Some(n) = fit_cfg.max_iterations {
        options.max_iterations = n;
    }
    if let Some(b) = fit_cfg.fit_thermal_speed {
        options.fit_thermal_speed = b;
    }
    if let Some(f) = &fit_cfg.seed_factors {
        options.seed_factors = f.clone();
    }
    let fit = fit_dispersion(mode, &samples, &options)?;
    let diagnostics = diagnostics_from_fit(&fit, &CONSTS);

    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => Ok(json_text(&json!({
            "fit": fit,
            "diagnostics": diagnostics,
            "n_samples": samples.len(),
            "seed": ctx.seed,
        }))),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = fit
                .parameters
                .iter()
                .map(|p| vec![p.name.to_string(), num(p.value), num(p.uncertainty)])
                .collect();
            rows.push(vec!["residual_norm".into(), num(fit.residual_norm), String::new()]);
            let derived = [
                ("dust_charge_per_mass", diagnostics.dust_charge_per_mass),
                ("ion_charge_per_temperature", diagnostics.ion_charge_per_temperature),
                ("ion_charge_per_mass", diagnostics.ion_charge_per_mass),
                ("electron_density", Some(diagnostics.electron_density)),
            ];
            for (name, est) in derived {
                if let Some(e) = est {
                    rows.push(vec![name.into(), num(e.value), num(e.uncertainty)]);
                }
            }
            csv_text(&["quantity", "value", "uncertainty"], &rows)
        }
    }
}

pub fn cmd_regimes(ctx: &Context, args: &RegimesArgs) -> Result<String, CliError> {
    let cfg = &ctx.config.regimes;
    let (comp, scales) = plasma(ctx)?;
    let mode = pick_mode(args.mode.as_deref(), cfg.mode.as_deref())?;
    let k = match (&args.k, &cfg.k) {
        (Some(text), _) => wavenumber_flag(text, "k")?,
        (None, Some(q)) => quantity(q, Dimension::Wavenumber, "regimes.k")?,
        (None, None) => return Err(argument("regimes needs --k or [regimes] k".into())),
    };
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidWavenumber(k).into());
    }
    let coeffs = Coefficients::from_scales(mode, &scales)?;
    let report = classify_regime(mode, &scales, &comp, &CONSTS, k, coeffs.omega(k));

    match ctx.format {
        Some(Format::Json) => Ok(json_text(&json!(report))),
        Some(Format::Csv) => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        c.condition.to_string(),
                        num(c.margin),
                        num(c.threshold),
                        c.satisfied.to_string(),
                    ]
                })
                .collect();
            csv_text(&["check", "condition", "margin", "threshold", "satisfied"], &rows)
        }
        None => {
            let name_w = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0).max(5);
            let cond_w = report.checks.iter().map(|c| c.condition.len()).max().unwrap_or(0).max(9);
            let mut out = String::new();
            let _ = writeln!(out, "mode   {}", report.mode.name());
            let _ = writeln!(out, "k      {:.6e} cm^-1", report.k);
            let _ = writeln!(out, "omega  {:.6e} rad/s", report.omega);
            let _ = writeln!(out);
            let _ = writeln!(out, "{:<name_w$}  {:<cond_w$}  {:>12}  satisfied", "check", "condition", "margin");
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "{:<name_w$}  {:<cond_w$}  {:>12.4e}  {}",
                    c.name,
                    c.condition,
                    c.margin,
                    if c.satisfied { "yes" } else { "no" }
                );
            }
            Ok(out)
        }
    }
}

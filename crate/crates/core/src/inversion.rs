//! Fitting dispersion coefficients to measured `(k, omega)` spectra and
//! turning them into the plasma combinations the data can constrain.
//!
//! Parameters are optimized as logarithms, which keeps them positive
//! without constraints. Each fit runs a damped Gauss-Newton (Marquardt)
//! iteration with the analytic Jacobian from a grid of starting points
//! and keeps the best end point.
//!
//! Only identifiable combinations are reported: the dust plasma frequency
//! fixes `n_d0 Z_d^2 / m_d`, not the three factors separately.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::io::Read;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::dispersion::{Coefficients, Mode, ModeACoefficients, ModeBCoefficients};
use crate::error::{Error, Result};

/// One measured point of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub k: f64,
    pub omega: f64,
    /// One-sigma uncertainty on `omega`; defaults to 1% of the largest `omega`.
    pub sigma: Option<f64>,
}

impl SpectrumSample {
    pub fn new(k: f64, omega: f64) -> Self {
        Self { k, omega, sigma: None }
    }

    pub fn with_sigma(k: f64, omega: f64, sigma: f64) -> Self {
        Self {
            k,
            omega,
            sigma: Some(sigma),
        }
    }
}

/// Fraction of the largest frequency used as the uncertainty when none is given.
pub const DEFAULT_RELATIVE_SIGMA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Also fit the ion thermal speed in mode A. When false it is held at zero.
    pub fit_thermal_speed: bool,
    /// Factors applied to each seed value; the starts are their Cartesian product.
    pub seed_factors: Vec<f64>,
    /// Relative step size in log-parameters that counts as converged.
    pub step_tolerance: f64,
    /// Relative cost reduction that counts as converged.
    pub cost_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            fit_thermal_speed: false,
            seed_factors: vec![0.1, 1.0, 10.0],
            step_tolerance: 1e-12,
            cost_tolerance: 1e-15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterEstimate {
    pub name: &'static str,
    pub value: f64,
    /// First-order standard error from the curvature at the optimum.
    pub uncertainty: f64,
    pub fixed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub mode: Mode,
    pub coefficients: Coefficients,
    pub parameters: Vec<ParameterEstimate>,
    /// Euclidean norm of the weighted residual vector.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub starts_tried: usize,
    pub starts_converged: usize,
}

impl FitResult {
    pub fn parameter(&self, name: &str) -> Option<&ParameterEstimate> {
        self.parameters.iter().find(|p| p.name == name)
    }

    /// Relative standard error of a parameter, zero when the value is zero.
    pub fn relative_uncertainty(&self, name: &str) -> f64 {
        self.parameter(name)
            .map_or(0.0, |p| if p.value > 0.0 { p.uncertainty / p.value } else { 0.0 })
    }
}

const MODE_A_NAMES: [&str; 4] = ["v_ti", "q_i", "omega_pi", "k_q"];
const MODE_B_NAMES: [&str; 3] = ["omega_pd", "k_di", "k_q"];

pub fn parameter_names(mode: Mode) -> &'static [&'static str] {
    match mode {
        Mode::ImmobileDust => &MODE_A_NAMES,
        Mode::MobileDust => &MODE_B_NAMES,
    }
}

fn to_vector(c: &Coefficients) -> Vec<f64> {
    match c {
        Coefficients::A(a) => vec![a.v_ti, a.q_i, a.omega_pi, a.k_q],
        Coefficients::B(b) => vec![b.omega_pd, b.k_di, b.k_q],
    }
}

fn from_vector(mode: Mode, v: &[f64]) -> Coefficients {
    match mode {
        Mode::ImmobileDust => Coefficients::A(ModeACoefficients {
            v_ti: v[0],
            q_i: v[1],
            omega_pi: v[2],
            k_q: v[3],
        }),
        Mode::MobileDust => Coefficients::B(ModeBCoefficients {
            omega_pd: v[0],
            k_di: v[1],
            k_q: v[2],
        }),
    }
}

/// Model frequency and its derivatives with respect to the logarithm of
/// every parameter.
fn model(coeffs: &Coefficients, k: f64) -> (f64, Vec<f64>) {
    match coeffs {
        Coefficients::A(c) => {
            let [thermal, quantum, plasma] = c.terms(k);
            let omega = (thermal + quantum + plasma).sqrt();
            if omega == 0.0 {
                return (0.0, vec![0.0; 4]);
            }
            let s = (c.k_q / k).powi(4);
            (
                omega,
                vec![
                    thermal / omega,
                    quantum / omega,
                    plasma / omega,
                    -2.0 * s / (1.0 + s) * plasma / omega,
                ],
            )
        }
        Coefficients::B(c) => {
            if k == 0.0 {
                return (0.0, vec![0.0; 3]);
            }
            let debye = (c.k_di / k).powi(2);
            let quantum = (c.k_q / k).powi(4);
            let shielding = 1.0 + debye + quantum;
            let omega = c.omega_pd / shielding.sqrt();
            (
                omega,
                vec![omega, -omega * debye / shielding, -2.0 * omega * quantum / shielding],
            )
        }
    }
}

fn effective_sigmas(samples: &[SpectrumSample]) -> Vec<f64> {
    let max_omega = samples.iter().map(|s| s.omega).fold(0.0, f64::max);
    let default = DEFAULT_RELATIVE_SIGMA * max_omega;
    samples.iter().map(|s| s.sigma.unwrap_or(default)).collect()
}

/// Weighted residuals `(omega_i - omega_model(k_i)) / sigma_i` and their
/// Jacobian with respect to the logarithm of every coefficient of the mode
/// (one row per sample, columns in [`parameter_names`] order).
pub fn forward_residuals(coeffs: &Coefficients, samples: &[SpectrumSample]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let sigmas = effective_sigmas(samples);
    samples
        .iter()
        .zip(&sigmas)
        .map(|(s, &sigma)| {
            let (omega, grad) = model(coeffs, s.k);
            ((s.omega - omega) / sigma, grad.into_iter().map(|g| -g / sigma).collect())
        })
        .unzip()
}

fn validate_samples(samples: &[SpectrumSample], free: usize) -> Result<()> {
    for (index, s) in samples.iter().enumerate() {
        if !(s.k.is_finite() && s.k > 0.0) {
            return Err(Error::InvalidSample {
                index,
                reason: "k must be positive",
            });
        }
        if !(s.omega.is_finite() && s.omega >= 0.0) {
            return Err(Error::InvalidSample {
                index,
                reason: "omega must be non-negative",
            });
        }
        if let Some(sigma) = s.sigma {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::InvalidSample {
                    index,
                    reason: "sigma must be positive",
                });
            }
        }
    }
    if samples.len() < free + 1 {
        return Err(Error::Underdetermined {
            samples: samples.len(),
            parameters: free,
        });
    }
    if samples.iter().all(|s| s.omega == 0.0) {
        return Err(Error::DegenerateData("all omega are zero"));
    }
    if samples.iter().all(|s| s.omega == samples[0].omega) {
        return Err(Error::DegenerateData("all omega are equal"));
    }
    if samples.iter().all(|s| s.k == samples[0].k) {
        return Err(Error::DegenerateData("all k are equal"));
    }
    Ok(())
}

/// Seed values derived from the data scales.
fn seeds(mode: Mode, samples: &[SpectrumSample]) -> Vec<f64> {
    let k_min = samples.iter().map(|s| s.k).fold(f64::INFINITY, f64::min);
    let k_max = samples.iter().map(|s| s.k).fold(0.0, f64::max);
    let k_mid = (k_min * k_max).sqrt();
    let max_omega = samples.iter().map(|s| s.omega).fold(0.0, f64::max);
    match mode {
        Mode::MobileDust => vec![max_omega, k_mid, k_mid],
        Mode::ImmobileDust => {
            let top = samples.iter().max_by(|a, b| a.k.total_cmp(&b.k)).unwrap();
            let bottom = samples.iter().min_by(|a, b| a.k.total_cmp(&b.k)).unwrap();
            let floor = max_omega * 1e-6;
            vec![
                bottom.omega.max(floor) / bottom.k,
                top.omega.max(floor) / (top.k * top.k),
                max_omega,
                k_mid,
            ]
        }
    }
}

struct Problem<'a> {
    mode: Mode,
    samples: &'a [SpectrumSample],
    sigmas: Vec<f64>,
    /// Full parameter vector; entries not listed in `free` stay fixed.
    template: Vec<f64>,
    free: Vec<usize>,
}

impl Problem<'_> {
    fn coefficients(&self, log_free: &DVector<f64>) -> Coefficients {
        let mut full = self.template.clone();
        for (j, &i) in self.free.iter().enumerate() {
            full[i] = log_free[j].exp();
        }
        from_vector(self.mode, &full)
    }

    fn cost(&self, log_free: &DVector<f64>) -> f64 {
        let coeffs = self.coefficients(log_free);
        self.samples
            .iter()
            .zip(&self.sigmas)
            .map(|(s, sigma)| {
                let r = (s.omega - model(&coeffs, s.k).0) / sigma;
                r * r
            })
            .sum()
    }

    fn linearize(&self, log_free: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let coeffs = self.coefficients(log_free);
        let n = self.samples.len();
        let p = self.free.len();
        let mut r = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, p);
        for (row, (s, sigma)) in self.samples.iter().zip(&self.sigmas).enumerate() {
            let (omega, grad) = model(&coeffs, s.k);
            r[row] = (s.omega - omega) / sigma;
            for (col, &i) in self.free.iter().enumerate() {
                jac[(row, col)] = -grad[i] / sigma;
            }
        }
        (r, jac)
    }
}

struct LocalFit {
    log_free: DVector<f64>,
    cost: f64,
    iterations: usize,
    converged: bool,
}

fn local_fit(problem: &Problem, start: DVector<f64>, options: &FitOptions) -> LocalFit {
    let mut x = start;
    let mut cost = problem.cost(&x);
    let mut lambda = 1e-3;
    let p = x.len();
    for iteration in 1..=options.max_iterations {
        let (r, jac) = problem.linearize(&x);
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        // Step is -(J^T J + damping)^-1 J^T r.
        let jtr = &jt * &r;
        let mut stepped = false;
        while lambda < 1e16 {
            let mut damped = jtj.clone();
            for i in 0..p {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &x - &step;
            let trial_cost = problem.cost(&trial);
            if trial_cost.is_finite() && trial_cost <= cost {
                let step_size = step.amax();
                let reduction = cost - trial_cost;
                x = trial;
                let previous = cost;
                cost = trial_cost;
                lambda = (lambda * 0.3).max(1e-12);
                stepped = true;
                if step_size <= options.step_tolerance
                    || reduction <= options.cost_tolerance * previous
                    || cost == 0.0
                {
                    return LocalFit {
                        log_free: x,
                        cost,
                        iterations: iteration,
                        converged: true,
                    };
                }
                break;
            }
            lambda *= 10.0;
        }
        if !stepped {
            // No descent direction left at working precision.
            return LocalFit {
                log_free: x,
                cost,
                iterations: iteration,
                converged: true,
            };
        }
    }
    LocalFit {
        log_free: x,
        cost,
        iterations: options.max_iterations,
        converged: false,
    }
}

/// Least-squares fit of the mode's full relation to `samples`.
pub fn fit_dispersion(mode: Mode, samples: &[SpectrumSample], options: &FitOptions) -> Result<FitResult> {
    let names = parameter_names(mode);
    let free: Vec<usize> = match mode {
        Mode::ImmobileDust if !options.fit_thermal_speed => vec![1, 2, 3],
        _ => (0..names.len()).collect(),
    };
    validate_samples(samples, free.len())?;

    let base = seeds(mode, samples);
    let mut template = base.clone();
    if mode == Mode::ImmobileDust && !options.fit_thermal_speed {
        template[0] = 0.0;
    }
    let problem = Problem {
        mode,
        samples,
        sigmas: effective_sigmas(samples),
        template,
        free: free.clone(),
    };

    let factors = if options.seed_factors.is_empty() {
        vec![1.0]
    } else {
        options.seed_factors.clone()
    };
    let n_starts = factors.len().pow(free.len() as u32);
    let starts: Vec<DVector<f64>> = (0..n_starts)
        .map(|mut index| {
            DVector::from_iterator(
                free.len(),
                free.iter().map(|&i| {
                    let f = factors[index % factors.len()];
                    index /= factors.len();
                    (base[i] * f).ln()
                }),
            )
        })
        .collect();

    let fits: Vec<LocalFit> = starts
        .into_par_iter()
        .map(|start| local_fit(&problem, start, options))
        .collect();

    let starts_converged = fits.iter().filter(|f| f.converged).count();
    if starts_converged == 0 {
        return Err(Error::NoConvergence {
            starts: n_starts,
            max_iterations: options.max_iterations,
        });
    }
    // Lowest cost wins; ties go to the lexicographically smallest parameters.
    let best = fits
        .iter()
        .min_by(|a, b| {
            a.cost.total_cmp(&b.cost).then_with(|| {
                a.log_free
                    .iter()
                    .zip(b.log_free.iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
        })
        .unwrap();

    let coefficients = problem.coefficients(&best.log_free);
    let full = to_vector(&coefficients);
    let log_sigma = log_uncertainties(&problem, &best.log_free, best.cost);
    let parameters = names
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let slot = free.iter().position(|&f| f == i);
            ParameterEstimate {
                name,
                value: full[i],
                uncertainty: slot.map_or(0.0, |j| full[i] * log_sigma[j]),
                fixed: slot.is_none(),
            }
        })
        .collect();

    Ok(FitResult {
        mode,
        coefficients,
        parameters,
        residual_norm: best.cost.sqrt(),
        iterations: best.iterations,
        converged: best.converged,
        starts_tried: n_starts,
        starts_converged,
    })
}

/// Standard errors of the log-parameters from `s^2 (J^T J)^-1`, with `s^2`
/// the reduced chi-square.
fn log_uncertainties(problem: &Problem, log_free: &DVector<f64>, cost: f64) -> Vec<f64> {
    let (_, jac) = problem.linearize(log_free);
    let p = jac.ncols();
    let dof = problem.samples.len().saturating_sub(p).max(1) as f64;
    let scale = cost / dof;
    match (jac.transpose() * &jac).try_inverse() {
        Some(inv) => (0..p).map(|i| (inv[(i, i)].max(0.0) * scale).sqrt()).collect(),
        None => vec![f64::INFINITY; p],
    }
}

/// Value with a first-order standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub uncertainty: f64,
}

/// Plasma combinations fixed by a fitted spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DustDiagnostics {
    /// `n_d0 Z_d^2 / m_d` (cm^-3 g^-1), from the dust plasma frequency.
    pub dust_charge_per_mass: Option<Estimate>,
    /// `n_i0 Z_i^2 / T_i` (cm^-3 erg^-1), from the ion Debye wavenumber.
    pub ion_charge_per_temperature: Option<Estimate>,
    /// `n_i0 Z_i^2 / m_i` (cm^-3 g^-1), from the ion plasma frequency.
    pub ion_charge_per_mass: Option<Estimate>,
    /// `n_e0` (cm^-3), from the quantum wavenumber.
    pub electron_density: Estimate,
}

pub fn diagnostics_from_fit(fit: &FitResult, consts: &PhysicalConstants) -> DustDiagnostics {
    let four_pi_e2 = 4.0 * PI * consts.electron_charge * consts.electron_charge;
    // value^power / divisor, relative error scaled by |power|
    let derive = |name: &str, power: i32, divisor: f64| {
        fit.parameter(name).map(|p| {
            let value = p.value.powi(power) / divisor;
            Estimate {
                value,
                uncertainty: value * power as f64 * fit.relative_uncertainty(name),
            }
        })
    };
    let electron_density = derive("k_q", 4, 16.0 * PI / consts.bohr_radius()).expect("every mode fits K_q");
    DustDiagnostics {
        dust_charge_per_mass: derive("omega_pd", 2, four_pi_e2),
        ion_charge_per_temperature: derive("k_di", 2, four_pi_e2),
        ion_charge_per_mass: derive("omega_pi", 2, four_pi_e2),
        electron_density,
    }
}

/// Reads samples from CSV with a `k,omega[,sigma]` header. `omega_full` is
/// accepted for `omega` so that curve output can be fed back directly;
/// other columns are ignored. Errors carry the 1-based line number.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<SpectrumSample>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header_error = |message: String| Error::InvalidCsv { line: 1, message };
    let headers = rdr.headers().map_err(|e| header_error(e.to_string()))?.clone();
    let column = |names: &[&str]| headers.iter().position(|h| names.contains(&h));
    let k_col = column(&["k"]).ok_or_else(|| header_error("missing column 'k'".into()))?;
    let omega_col = column(&["omega", "omega_full"]).ok_or_else(|| header_error("missing column 'omega'".into()))?;
    let sigma_col = column(&["sigma"]);

    let mut samples = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::InvalidCsv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |col: usize, name: &str| -> Result<f64> {
            let text = record.get(col).unwrap_or("");
            text.parse::<f64>().map_err(|_| Error::InvalidCsv {
                line,
                message: format!("cannot parse {name} from '{text}'"),
            })
        };
        let k = field(k_col, "k")?;
        let omega = field(omega_col, "omega")?;
        let sigma = match sigma_col {
            Some(col) if !record.get(col).unwrap_or("").is_empty() => Some(field(col, "sigma")?),
            _ => None,
        };
        let sample = SpectrumSample { k, omega, sigma };
        if !(k.is_finite() && k > 0.0) || !(omega.is_finite() && omega >= 0.0) || sigma.is_some_and(|s| !(s > 0.0)) {
            return Err(Error::InvalidCsv {
                line,
                message: "need k > 0, omega >= 0 and sigma > 0".into(),
            });
        }
        samples.push(sample);
    }
    Ok(samples)
}

//! Pseudo-spectral time integration of the linear evolution equations on a
//! periodic 1-D domain.
//!
//! With constant coefficients the evolution operator is diagonal in Fourier
//! space: every mode obeys `phi_m'' = -Omega^2(k_m) phi_m`, where
//! `Omega^2` is the operator symbol divided through by its time-derivative
//! weight, `(k^4 + K_q^4)` for immobile dust and `((k^2 + k_Di^2) k^2 + K_q^4)`
//! for mobile dust. Each mode is advanced with the classical fourth-order
//! Runge-Kutta scheme, so the measured frequencies are an independent
//! check of the closed-form relations.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dispersion::{Coefficients, Mode};
use crate::error::{Error, Result};

/// Upper bound on `dt * max_m Omega(k_m)`.
pub const MAX_STEP_PHASE: f64 = 0.5;

/// Squared-frequency table of the evolution operator on `k_m = 2 pi m / L`,
/// `m = 0..n_modes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralOperator {
    pub mode: Mode,
    pub length: f64,
    pub omega_sq: Vec<f64>,
}

impl SpectralOperator {
    pub fn n_modes(&self) -> usize {
        self.omega_sq.len()
    }

    pub fn wavenumber(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.length
    }

    pub fn max_omega(&self) -> f64 {
        self.omega_sq.iter().fold(0.0f64, |acc, &w2| acc.max(w2.sqrt()))
    }

    /// Empty state on the grid this operator was built for.
    pub fn zero_state(&self) -> FieldState {
        FieldState::zeros(self.length, self.n_modes())
    }
}

/// `Omega^2` from the Fourier symbol of the evolution equation:
/// `nabla^2 -> -k^2`, `nabla^4 -> k^4`.
fn symbol_omega_sq(coeffs: &Coefficients, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    let k2 = k * k;
    let k4 = k2 * k2;
    match coeffs {
        Coefficients::A(c) => {
            // (k^4 + K_q^4)(-Omega^2 + V_Ti^2 k^2 + q_i^2 k^4) + omega_pi^2 k^4 = 0
            let weight = k4 + c.k_q.powi(4);
            c.v_ti * c.v_ti * k2 + c.q_i * c.q_i * k4 + c.omega_pi * c.omega_pi * k4 / weight
        }
        Coefficients::B(c) => {
            // [(-k^2 - k_Di^2)(-k^2) + K_q^4](-Omega^2) + omega_pd^2 k^4 = 0
            let weight = (k2 + c.k_di * c.k_di) * k2 + c.k_q.powi(4);
            c.omega_pd * c.omega_pd * k4 / weight
        }
    }
}

pub fn build_operator(coeffs: &Coefficients, length: f64, n_modes: usize) -> Result<SpectralOperator> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::BadGrid(format!("domain length must be positive, got {length:e}")));
    }
    if n_modes < 2 {
        return Err(Error::BadGrid(format!("need at least 2 retained modes, got {n_modes}")));
    }
    let omega_sq = (0..n_modes)
        .map(|m| symbol_omega_sq(coeffs, 2.0 * PI * m as f64 / length))
        .collect();
    Ok(SpectralOperator {
        mode: coeffs.mode(),
        length,
        omega_sq,
    })
}

/// Spectral field and its time derivative in FFT ordering on a grid of
/// `2 * n_modes` points. Index `m` holds mode `m`, index `N - m` mode `-m`;
/// the Nyquist entry stays zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub length: f64,
    pub n_modes: usize,
    pub phi: Vec<Complex64>,
    pub dphi: Vec<Complex64>,
    pub t: f64,
}

impl FieldState {
    pub fn zeros(length: f64, n_modes: usize) -> Self {
        let n = 2 * n_modes;
        Self {
            length,
            n_modes,
            phi: vec![Complex64::default(); n],
            dphi: vec![Complex64::default(); n],
            t: 0.0,
        }
    }

    pub fn grid_len(&self) -> usize {
        self.phi.len()
    }

    /// Spectral amplitude of mode `m >= 0`.
    pub fn amplitude(&self, m: usize) -> Complex64 {
        self.phi[m]
    }

    fn mirror(&self, m: usize) -> usize {
        (self.grid_len() - m) % self.grid_len()
    }

    /// Largest violation of `phi_{-m} = conj(phi_m)` over both arrays.
    pub fn reality_defect(&self) -> f64 {
        (0..self.grid_len())
            .map(|i| {
                let j = self.mirror(i);
                (self.phi[j] - self.phi[i].conj())
                    .norm()
                    .max((self.dphi[j] - self.dphi[i].conj()).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Field on the `2 * n_modes` collocation points. Returns the real part
    /// and the largest imaginary magnitude left over by the transform.
    pub fn to_real_space(&self) -> (Vec<f64>, f64) {
        let mut buf = self.phi.clone();
        FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
        let max_imag = buf.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
        (buf.iter().map(|z| z.re).collect(), max_imag)
    }
}

/// Standing-wave start: `phi(x, 0) = sum a_j cos(k_{m_j} x)`, zero velocity.
///
/// Mode numbers may be negative; `m` and `-m` address the same cosine.
pub fn init_plane_wave(template: &FieldState, mode_numbers: &[i64], amplitudes: &[f64]) -> Result<FieldState> {
    if mode_numbers.len() != amplitudes.len() {
        return Err(Error::BadGrid(format!(
            "{} mode numbers but {} amplitudes",
            mode_numbers.len(),
            amplitudes.len()
        )));
    }
    let mut state = FieldState::zeros(template.length, template.n_modes);
    for (&m, &a) in mode_numbers.iter().zip(amplitudes) {
        let index = m.unsigned_abs() as usize;
        if index >= template.n_modes {
            return Err(Error::ModeOutOfRange {
                mode: m,
                n_modes: template.n_modes,
            });
        }
        if index == 0 {
            state.phi[0] += Complex64::new(a, 0.0);
        } else {
            let mirror = state.mirror(index);
            state.phi[index] += Complex64::new(0.5 * a, 0.0);
            state.phi[mirror] += Complex64::new(0.5 * a, 0.0);
        }
    }
    Ok(state)
}

/// Snapshots of a run, `sample_dt` apart, starting with the initial state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub sample_dt: f64,
    pub snapshots: Vec<FieldState>,
}

impl Trajectory {
    pub fn n_modes(&self) -> usize {
        self.snapshots.first().map_or(0, |s| s.n_modes)
    }

    pub fn mode_series(&self, m: usize) -> Vec<Complex64> {
        self.snapshots.iter().map(|s| s.phi[m]).collect()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.snapshots.iter().map(|s| s.t)
    }

    /// CSV with columns `t, mode_index, re_amp, im_amp` for modes `0..n_modes`.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "mode_index", "re_amp", "im_amp"])?;
        for s in &self.snapshots {
            for m in 0..s.n_modes {
                let z = s.phi[m];
                w.write_record([
                    format!("{:.16e}", s.t),
                    m.to_string(),
                    format!("{:.16e}", z.re),
                    format!("{:.16e}", z.im),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// One classical RK4 step of `y'' = -w2 y`.
#[inline]
fn rk4_step(y: Complex64, v: Complex64, w2: f64, dt: f64) -> (Complex64, Complex64) {
    let half = 0.5 * dt;
    let (k1y, k1v) = (v, -w2 * y);
    let (k2y, k2v) = (v + half * k1v, -w2 * (y + half * k1y));
    let (k3y, k3v) = (v + half * k2v, -w2 * (y + half * k2y));
    let (k4y, k4v) = (v + dt * k3v, -w2 * (y + dt * k3y));
    let sixth = dt / 6.0;
    (
        y + sixth * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        v + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Advances `initial` by `n_steps` steps of size `dt`, keeping every
/// `stride`-th state (and the initial one).
pub fn run(
    operator: &SpectralOperator,
    initial: &FieldState,
    dt: f64,
    n_steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::StepTooLarge {
            ratio: f64::NAN,
            limit: MAX_STEP_PHASE,
        });
    }
    let ratio = dt * operator.max_omega();
    if ratio > MAX_STEP_PHASE {
        return Err(Error::StepTooLarge {
            ratio,
            limit: MAX_STEP_PHASE,
        });
    }
    if initial.n_modes != operator.n_modes() {
        return Err(Error::BadGrid(format!(
            "state has {} modes, operator {}",
            initial.n_modes,
            operator.n_modes()
        )));
    }
    let stride = stride.max(1);
    let n = initial.grid_len();

    let mut snapshots = Vec::with_capacity(n_steps / stride + 1);
    snapshots.push(initial.clone());

    // Modes are independent, so each index is stepped through the whole
    // run on its own and the snapshots are assembled afterwards.
    let histories: Vec<Vec<(Complex64, Complex64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            // The Nyquist entry is never excited.
            let w2 = if i == n / 2 { 0.0 } else { operator.omega_sq[i.min(n - i)] };
            let (mut y, mut v) = (initial.phi[i], initial.dphi[i]);
            let mut kept = Vec::with_capacity(n_steps / stride);
            for step in 1..=n_steps {
                (y, v) = rk4_step(y, v, w2, dt);
                if step % stride == 0 {
                    kept.push((y, v));
                }
            }
            kept
        })
        .collect();

    let n_kept = n_steps / stride;
    for j in 0..n_kept {
        let mut state = FieldState::zeros(initial.length, initial.n_modes);
        for i in 0..n {
            (state.phi[i], state.dphi[i]) = histories[i][j];
        }
        state.t = initial.t + ((j + 1) * stride) as f64 * dt;
        snapshots.push(state);
    }

    Ok(Trajectory {
        sample_dt: stride as f64 * dt,
        snapshots,
    })
}

/// `E_m = |phi_m'|^2 + Omega^2(k_m) |phi_m|^2` for `m = 0..n_modes`.
pub fn modal_energy(operator: &SpectralOperator, state: &FieldState) -> Vec<f64> {
    (0..operator.n_modes().min(state.n_modes))
        .map(|m| state.dphi[m].norm_sqr() + operator.omega_sq[m] * state.phi[m].norm_sqr())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeFrequency {
    pub mode: usize,
    pub omega: f64,
    /// RMS misfit of the sinusoid over RMS of the series.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyMeasurement {
    pub method: &'static str,
    pub modes: Vec<ModeFrequency>,
}

impl FrequencyMeasurement {
    pub fn get(&self, m: usize) -> Option<&ModeFrequency> {
        self.modes.iter().find(|f| f.mode == m)
    }
}

/// Fits a sinusoid to every mode `m >= 0` that carries signal.
///
/// Modes whose peak amplitude is below `1e-14` of the strongest initial
/// amplitude are skipped.
pub fn measure_frequency(series: &Trajectory) -> Result<FrequencyMeasurement> {
    let first = series.snapshots.first().ok_or(Error::NoSignal)?;
    let reference = (0..first.n_modes).map(|m| first.phi[m].norm()).fold(0.0, f64::max);
    if !(reference > 0.0) {
        return Err(Error::NoSignal);
    }
    let mut modes = Vec::new();
    for m in 0..first.n_modes {
        let z = series.mode_series(m);
        let peak = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak <= crate::frequency::SIGNAL_FLOOR * reference {
            continue;
        }
        let fit = crate::frequency::fit_sinusoid(&z, series.sample_dt)?;
        modes.push(ModeFrequency {
            mode: m,
            omega: fit.omega,
            residual: fit.residual,
        });
    }
    if modes.is_empty() {
        return Err(Error::NoSignal);
    }
    Ok(FrequencyMeasurement {
        method: crate::frequency::METHOD,
        modes,
    })
}

//! Single-tone frequency estimation for uniformly sampled series.
//!
//! A Hann-windowed, zero-padded spectrum gives the coarse peak, refined by
//! parabolic interpolation of the log power. The estimate then seeds a
//! damped Gauss-Newton fit of `z(t) = A cos(w t) + B sin(w t)` with complex
//! `A`, `B`, which is what sets the final precision.

use std::f64::consts::PI;

use nalgebra::{SMatrix, SVector};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const METHOD: &str = "fft-peak+gauss-newton";
/// Peak amplitude, relative to the strongest initial amplitude, below which a
/// series carries no signal.
pub const SIGNAL_FLOOR: f64 = 1e-14;
/// Minimum number of oscillation periods a series must span.
pub const MIN_PERIODS: f64 = 5.0;

const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidFit {
    pub omega: f64,
    pub cos_amplitude: Complex64,
    pub sin_amplitude: Complex64,
    /// RMS misfit over RMS signal.
    pub residual: f64,
    pub iterations: usize,
}

pub fn fit_real_sinusoid(series: &[f64], dt: f64) -> Result<SinusoidFit> {
    let z: Vec<Complex64> = series.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fit_sinusoid(&z, dt)
}

/// Fits one tone to `series` sampled every `dt`.
pub fn fit_sinusoid(series: &[Complex64], dt: f64) -> Result<SinusoidFit> {
    let energy: f64 = series.iter().map(|z| z.norm_sqr()).sum();
    if series.is_empty() || !(energy > 0.0) {
        return Err(Error::NoSignal);
    }
    let duration = (series.len() - 1) as f64 * dt;
    if series.len() < 8 {
        return Err(Error::TooShort {
            periods: 0.0,
            required: MIN_PERIODS,
        });
    }

    let Some(omega0) = spectral_peak(series, dt) else {
        return constant_fit(series);
    };
    let periods = omega0 * duration / (2.0 * PI);
    if periods < MIN_PERIODS {
        return Err(Error::TooShort {
            periods,
            required: MIN_PERIODS,
        });
    }

    let (a, b) = linear_amplitudes(series, dt, omega0);
    let mut p = SVector::<f64, 5>::new(omega0, a.re, b.re, a.im, b.im);
    let mut cost = cost_of(series, dt, &p);
    let mut lambda = 1e-6;
    let mut iterations = 0;
    for _ in 0..MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(series, dt, &p);
        let mut accepted = false;
        for _ in 0..30 {
            let mut damped = jtj;
            for i in 0..5 {
                damped[(i, i)] += lambda * jtj[(i, i)];
            }
            let Some(step) = damped.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p + step;
            let trial_cost = cost_of(series, dt, &trial);
            if trial_cost <= cost {
                let small = step[0].abs() <= 1e-15 * trial[0].abs();
                p = trial;
                let settled = cost - trial_cost <= 1e-15 * cost;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = true;
                if small || settled {
                    return Ok(finish(p, cost, energy, iterations));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    Ok(finish(p, cost, energy, iterations))
}

fn finish(p: SVector<f64, 5>, cost: f64, energy: f64, iterations: usize) -> SinusoidFit {
    SinusoidFit {
        omega: p[0].abs(),
        cos_amplitude: Complex64::new(p[1], p[3]),
        sin_amplitude: Complex64::new(p[2], p[4]) * p[0].signum(),
        residual: (cost / energy).sqrt(),
        iterations,
    }
}

/// Frozen (non-oscillating) series: report zero frequency.
fn constant_fit(series: &[Complex64]) -> Result<SinusoidFit> {
    let n = series.len() as f64;
    let mean = series.iter().sum::<Complex64>() / n;
    let energy: f64 = series.iter().map(|z| z.norm_sqr()).sum();
    let cost: f64 = series.iter().map(|z| (z - mean).norm_sqr()).sum();
    let residual = (cost / energy).sqrt();
    if residual > 1e-9 {
        // A slow tone that never leaves the DC bin.
        return Err(Error::TooShort {
            periods: 0.0,
            required: MIN_PERIODS,
        });
    }
    Ok(SinusoidFit {
        omega: 0.0,
        cos_amplitude: mean,
        sin_amplitude: Complex64::default(),
        residual,
        iterations: 0,
    })
}

/// Angular frequency of the strongest non-DC peak, or `None` when the DC
/// bin dominates.
fn spectral_peak(series: &[Complex64], dt: f64) -> Option<f64> {
    let n = series.len();
    let padded = (n.next_power_of_two() * 4).max(64);
    let mut buf = vec![Complex64::default(); padded];
    for (j, z) in series.iter().enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * j as f64 / (n - 1) as f64).cos();
        buf[j] = z * w;
    }
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);

    // Fold +f and -f: a real-valued tone splits between them. The
    // self-mirrored bins count twice to stay on the same footing.
    let half = padded / 2;
    let power: Vec<f64> = (0..=half)
        .map(|f| {
            if f == 0 || f == half {
                2.0 * buf[f].norm_sqr()
            } else {
                buf[f].norm_sqr() + buf[padded - f].norm_sqr()
            }
        })
        .collect();
    let (peak, _) = power
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    if peak == 0 {
        return None;
    }
    let offset = if peak < half {
        let (l, c, r) = (power[peak - 1].ln(), power[peak].ln(), power[peak + 1].ln());
        let denom = l - 2.0 * c + r;
        if denom.abs() > 0.0 && denom.is_finite() {
            (0.5 * (l - r) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    } else {
        0.0
    };
    Some(2.0 * PI * (peak as f64 + offset) / (padded as f64 * dt))
}

/// Least-squares `A`, `B` at fixed `omega`.
fn linear_amplitudes(series: &[Complex64], dt: f64, omega: f64) -> (Complex64, Complex64) {
    let (mut cc, mut cs, mut ss) = (0.0, 0.0, 0.0);
    let (mut zc, mut zs) = (Complex64::default(), Complex64::default());
    for (j, z) in series.iter().enumerate() {
        let (s, c) = (omega * j as f64 * dt).sin_cos();
        cc += c * c;
        cs += c * s;
        ss += s * s;
        zc += z * c;
        zs += z * s;
    }
    let det = cc * ss - cs * cs;
    if det.abs() <= f64::EPSILON * cc * ss {
        return (zc / cc, Complex64::default());
    }
    ((zc * ss - zs * cs) / det, (zs * cc - zc * cs) / det)
}

fn cost_of(series: &[Complex64], dt: f64, p: &SVector<f64, 5>) -> f64 {
    let a = Complex64::new(p[1], p[3]);
    let b = Complex64::new(p[2], p[4]);
    series
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let (s, c) = (p[0] * j as f64 * dt).sin_cos();
            (z - (a * c + b * s)).norm_sqr()
        })
        .sum()
}

fn normal_equations(series: &[Complex64], dt: f64, p: &SVector<f64, 5>) -> (SMatrix<f64, 5, 5>, SVector<f64, 5>) {
    let a = Complex64::new(p[1], p[3]);
    let b = Complex64::new(p[2], p[4]);
    let mut jtj = SMatrix::<f64, 5, 5>::zeros();
    let mut jtr = SVector::<f64, 5>::zeros();
    for (j, z) in series.iter().enumerate() {
        let t = j as f64 * dt;
        let (s, c) = (p[0] * t).sin_cos();
        let r = z - (a * c + b * s);
        let d_omega = (b * c - a * s) * t;
        // Real-part row, then imaginary-part row.
        let rows = [
            (SVector::<f64, 5>::new(d_omega.re, c, s, 0.0, 0.0), r.re),
            (SVector::<f64, 5>::new(d_omega.im, 0.0, 0.0, c, s), r.im),
        ];
        for (row, res) in rows {
            jtj += row * row.transpose();
            jtr += row * res;
        }
    }
    (jtj, jtr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_cosine() {
        let dt = 1e-3;
        let series: Vec<f64> = (0..=10_000).map(|j| (2.0 * PI * j as f64 * dt).cos()).collect();
        let fit = fit_real_sinusoid(&series, dt).unwrap();
        assert!((fit.omega / (2.0 * PI) - 1.0).abs() < 1e-8);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn phase_shifted_complex_tone() {
        let dt = 0.01;
        let w = 3.7;
        let a = Complex64::new(0.3, -1.2);
        let b = Complex64::new(-0.5, 0.1);
        let series: Vec<Complex64> = (0..3000)
            .map(|j| {
                let t = j as f64 * dt;
                a * (w * t).cos() + b * (w * t).sin()
            })
            .collect();
        let fit = fit_sinusoid(&series, dt).unwrap();
        assert!((fit.omega / w - 1.0).abs() < 1e-12);
        assert!((fit.cos_amplitude - a).norm() < 1e-10);
        assert!((fit.sin_amplitude - b).norm() < 1e-10);
    }

    #[test]
    fn zero_series_has_no_signal() {
        assert_eq!(fit_real_sinusoid(&[0.0; 100], 0.1).unwrap_err(), Error::NoSignal);
    }

    #[test]
    fn too_few_periods() {
        let dt = 1e-3;
        let series: Vec<f64> = (0..=3000).map(|j| (2.0 * PI * j as f64 * dt).cos()).collect();
        assert!(matches!(fit_real_sinusoid(&series, dt), Err(Error::TooShort { .. })));
    }

    #[test]
    fn constant_series_is_frozen() {
        let fit = fit_real_sinusoid(&[2.5; 500], 0.1).unwrap();
        assert_eq!(fit.omega, 0.0);
        assert!(fit.residual < 1e-15);
    }
}

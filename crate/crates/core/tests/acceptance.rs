//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::Value;

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::simulator::FieldState;
use quantum_dust::{
    build_operator, derived_scales, fit_dispersion, init_plane_wave, measure_frequency, modal_energy, omega_limit,
    poisson_residual, run, Coefficients, DustPolarity, FitOptions, Limit, LimitParams, Mode, ModeACoefficients,
    ModeBCoefficients, PhysicalConstants, PlasmaComposition, SpectrumSample,
};

const CODATA: PhysicalConstants = PhysicalConstants::CODATA_2018;

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(number: u32, name: &str, budget: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = outcome.passed && in_time;
    println!(
        "{} {number} {name}: {} [{:.2} s of {:.0} s budget{}]",
        if passed { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64(),
        budget.as_secs_f64(),
        if in_time { "" } else { ", over budget" }
    );
    passed
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..hi.log10()))
}

/// Quasineutral plasma with every free field spread over several decades.
fn draw_plasma(rng: &mut impl Rng) -> PlasmaComposition {
    let n_e0 = log_uniform(rng, 1e12, 1e18);
    let z_i = rng.gen_range(1..=3u32);
    let z_d = log_uniform(rng, 1.0, 1e6).round().max(1.0) as u32;
    // Fraction of the electron charge carried by the dust.
    let dust_share = log_uniform(rng, 1e-6, 0.5);
    let n_d0 = dust_share * n_e0 / z_d as f64;
    let polarity = if rng.gen_bool(0.5) {
        DustPolarity::Negative
    } else {
        DustPolarity::Positive
    };
    let n_i0 = (n_e0 + polarity.factor() * z_d as f64 * n_d0) / z_i as f64;
    PlasmaComposition {
        n_e0,
        n_i0,
        n_d0,
        z_i,
        z_d,
        polarity,
        m_i: PROTON_MASS * log_uniform(rng, 1.0, 1e6),
        m_d: log_uniform(rng, 1e-18, 1e-12),
        t_i: ELECTRONVOLT * log_uniform(rng, 1e-3, 1e3),
        t_ef: None,
    }
    .validate()
    .expect("drawn plasma is valid")
}

fn draw_constants(rng: &mut impl Rng) -> PhysicalConstants {
    PhysicalConstants {
        electron_charge: CODATA.electron_charge * log_uniform(rng, 1e-3, 1e3),
        electron_mass: CODATA.electron_mass * log_uniform(rng, 1e-3, 1e3),
        hbar: CODATA.hbar * log_uniform(rng, 1e-3, 1e3),
    }
}

fn dispersion_poisson_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    for mode in [Mode::ImmobileDust, Mode::MobileDust] {
        for _ in 0..1000 {
            let comp = draw_plasma(&mut rng);
            let consts = draw_constants(&mut rng);
            let scales = derived_scales(&comp, &consts);
            let coeffs = Coefficients::from_scales(mode, &scales).unwrap();
            let k = scales.k_q * log_uniform(&mut rng, 1e-3, 1e3);
            let r = poisson_residual(mode, 1.0, k, coeffs.omega(k), &comp, &consts).unwrap();
            worst = worst.max(r);
            draws += 1;
        }
    }
    Outcome {
        passed: worst <= 1e-12,
        detail: format!("max residual {worst:.2e} (limit 1e-12) over {draws} draws"),
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Draws until `accept` returns a wavenumber, giving up after many tries.
fn draw_until<R: Rng>(rng: &mut R, mut accept: impl FnMut(&mut R) -> Option<(f64, f64)>) -> (f64, f64) {
    for _ in 0..100_000 {
        if let Some(pair) = accept(rng) {
            return pair;
        }
    }
    panic!("no admissible draw found");
}

fn asymptotic_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    const DRAWS: usize = 250;
    let mut worst = [0.0f64; 4];

    for _ in 0..DRAWS {
        // Cold ions, k <= 0.05 K_q and Z_i^2 n_i0 / n_e0 >= 1e4 m_e / m_i.
        let (full, limit) = draw_until(&mut rng, |rng| {
            let mut comp = draw_plasma(rng);
            comp.t_i = 0.0;
            let z = comp.z_i as f64;
            if z * z * comp.n_i0 / comp.n_e0 < 1e4 * CODATA.electron_mass / comp.m_i {
                return None;
            }
            let s = derived_scales(&comp, &CODATA);
            let k = s.k_q * log_uniform(rng, 1e-4, 0.05);
            let full = Coefficients::from_scales(Mode::ImmobileDust, &s).unwrap().omega(k);
            let p = LimitParams::from_plasma(&comp, &s, &CODATA);
            Some((full, omega_limit(Limit::IonQuantum, &p, k).unwrap()))
        });
        worst[0] = worst[0].max(relative(limit, full));

        // k <= 0.05 k_Di.
        let (full, limit) = draw_until(&mut rng, |rng| {
            let comp = draw_plasma(rng);
            let s = derived_scales(&comp, &CODATA);
            let k = s.k_di? * log_uniform(rng, 1e-4, 0.05);
            let full = Coefficients::from_scales(Mode::MobileDust, &s).unwrap().omega(k);
            let p = LimitParams::from_plasma(&comp, &s, &CODATA);
            Some((full, omega_limit(Limit::LongWavelength, &p, k).unwrap()))
        });
        worst[1] = worst[1].max(relative(limit, full));

        // k_Di / k >= 10 and K_q^2 / (k k_Di) >= 10.
        let (full, limit) = draw_until(&mut rng, |rng| {
            let comp = draw_plasma(rng);
            let s = derived_scales(&comp, &CODATA);
            let k_di = s.k_di?;
            let k_max = (0.1 * k_di).min(0.1 * s.k_q * s.k_q / k_di);
            let k = k_max * log_uniform(rng, 1e-3, 1.0);
            let full = Coefficients::from_scales(Mode::MobileDust, &s).unwrap().omega(k);
            let p = LimitParams::from_plasma(&comp, &s, &CODATA);
            Some((full, omega_limit(Limit::DustQuantum, &p, k).unwrap()))
        });
        worst[2] = worst[2].max(relative(limit, full));

        // k_Di / k >= 10 and k k_Di / K_q^2 >= 10.
        let (full, limit) = draw_until(&mut rng, |rng| {
            let mut comp = draw_plasma(rng);
            // Cold enough ions for the window to open.
            comp.t_i = ELECTRONVOLT * log_uniform(rng, 1e-6, 1e-2);
            comp.n_e0 *= 1e4;
            comp.n_i0 *= 1e4;
            comp.n_d0 *= 1e4;
            let s = derived_scales(&comp, &CODATA);
            let k_di = s.k_di?;
            let (k_lo, k_hi) = (10.0 * s.k_q * s.k_q / k_di, 0.1 * k_di);
            if k_lo >= k_hi {
                return None;
            }
            let k = k_lo * (k_hi / k_lo).powf(rng.gen::<f64>());
            let full = Coefficients::from_scales(Mode::MobileDust, &s).unwrap().omega(k);
            let p = LimitParams::from_plasma(&comp, &s, &CODATA);
            Some((full, omega_limit(Limit::DustAcoustic, &p, k).unwrap()))
        });
        worst[3] = worst[3].max(relative(limit, full));
    }

    let names = ["ion-quantum", "long-wavelength", "dust-quantum", "dust-acoustic"];
    let detail = names
        .iter()
        .zip(worst)
        .map(|(n, w)| format!("{n} {:.2}%", 100.0 * w))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome {
        passed: worst.iter().all(|&w| w <= 0.01),
        detail: format!("max relative error {detail} (limit 1%) over {DRAWS} draws each"),
    }
}

fn draw_coefficients(rng: &mut impl Rng, mode: Mode) -> Coefficients {
    let mut six = || log_uniform(rng, 1e-3, 1e3);
    match mode {
        Mode::ImmobileDust => Coefficients::A(ModeACoefficients {
            v_ti: six(),
            q_i: six(),
            omega_pi: six(),
            k_q: six(),
        }),
        Mode::MobileDust => Coefficients::B(ModeBCoefficients {
            omega_pd: six(),
            k_di: six(),
            k_q: six(),
        }),
    }
}

fn closed_loop_simulator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_freq, mut worst_drift, mut worst_order): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut failures = Vec::new();
    for mode in [Mode::ImmobileDust, Mode::MobileDust] {
        for _ in 0..20 {
            let coeffs = draw_coefficients(&mut rng, mode);
            let k = coeffs.k_q() * log_uniform(&mut rng, 1e-2, 1e2);
            let op = build_operator(&coeffs, 2.0 * PI / k, 2).unwrap();
            let start = init_plane_wave(&op.zero_state(), &[1], &[1.0]).unwrap();
            let omega = op.omega_sq[1].sqrt();
            let period = 2.0 * PI / omega;
            let dt = period / 1000.0;
            let n_steps = 50_000;

            let traj = run(&op, &start, dt, n_steps, 10).unwrap();
            let measured = measure_frequency(&traj).unwrap().get(1).unwrap().omega;
            worst_freq = worst_freq.max(relative(measured, omega));
            let e0 = modal_energy(&op, &start)[1];
            let drift = traj
                .snapshots
                .iter()
                .map(|s| relative(modal_energy(&op, s)[1], e0))
                .fold(0.0, f64::max);
            worst_drift = worst_drift.max(drift);

            let end = |div: usize| -> FieldState {
                run(&op, &start, dt / div as f64, n_steps * div, n_steps * div)
                    .unwrap()
                    .snapshots
                    .pop()
                    .unwrap()
            };
            let (a, b, c) = (end(1), end(2), end(4));
            let diff = |x: &FieldState, y: &FieldState| {
                ((x.phi[1] - y.phi[1]).norm_sqr() + ((x.dphi[1] - y.dphi[1]) / omega).norm_sqr()).sqrt()
            };
            let order = (diff(&a, &b) / diff(&b, &c)).log2();
            if (order - 4.0).abs() > worst_order {
                worst_order = (order - 4.0).abs();
            }
            if relative(measured, omega) > 1e-6 || drift > 1e-9 || (order - 4.0).abs() > 0.3 {
                failures.push(format!("{coeffs:?} at k = {k:e}: order {order:.3}"));
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "40 runs: max frequency error {worst_freq:.2e} (limit 1e-6), max energy drift {worst_drift:.2e} (limit 1e-9), \
             max |order - 4| {worst_order:.3} (limit 0.3){}",
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join("; ")) }
        ),
    }
}

fn mode_b_spectrum(c: &ModeBCoefficients) -> Vec<(f64, f64)> {
    (0..25)
        .map(|i| {
            let k = c.k_di * 10f64.powf(-2.0 + 3.0 * i as f64 / 24.0);
            (k, Coefficients::B(*c).omega(k))
        })
        .collect()
}

fn inversion_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let options = FitOptions::default();

    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        // The window [0.01, 10] k_Di only constrains K_q when the K_q^4 term
        // competes with k_Di^2 k^2 somewhere in it, which needs K_q within a
        // decade of k_Di. Outside that only omega_pd / K_q^2 is measurable.
        let k_di = log_uniform(&mut rng, 1e-3, 1e3);
        let truth = ModeBCoefficients {
            omega_pd: log_uniform(&mut rng, 1e-3, 1e3),
            k_di,
            k_q: k_di * log_uniform(&mut rng, 0.1, 10.0),
        };
        let samples: Vec<SpectrumSample> =
            mode_b_spectrum(&truth).into_iter().map(|(k, w)| SpectrumSample::new(k, w)).collect();
        let fit = fit_dispersion(Mode::MobileDust, &samples, &options).unwrap();
        let Coefficients::B(got) = fit.coefficients else { unreachable!() };
        for (g, t) in [(got.omega_pd, truth.omega_pd), (got.k_di, truth.k_di), (got.k_q, truth.k_q)] {
            worst = worst.max(relative(g, t));
        }
    }

    // Noisy trials on the hydrogen plasma with micron-class dust.
    let plasma = PlasmaComposition {
        n_e0: 1e16,
        n_i0: 1.01e16,
        n_d0: 1e11,
        z_i: 1,
        z_d: 1000,
        polarity: DustPolarity::Negative,
        m_i: PROTON_MASS,
        m_d: 1e-12,
        t_i: 0.01 * ELECTRONVOLT,
        t_ef: None,
    };
    let Coefficients::B(truth) = Coefficients::from_scales(Mode::MobileDust, &derived_scales(&plasma, &CODATA)).unwrap()
    else {
        unreachable!()
    };
    let clean = mode_b_spectrum(&truth);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut recovered = Vec::with_capacity(100);
    let mut failed = 0;
    for trial in 0..100u64 {
        let mut trial_rng = ChaCha8Rng::seed_from_u64(1000 + trial);
        let samples: Vec<SpectrumSample> = clean
            .iter()
            .map(|&(k, w)| SpectrumSample::with_sigma(k, w * (1.0 + noise.sample(&mut trial_rng)), 0.01 * w))
            .collect();
        match fit_dispersion(Mode::MobileDust, &samples, &options) {
            Ok(fit) => recovered.push(fit.parameter("omega_pd").unwrap().value),
            Err(_) => failed += 1,
        }
    }
    recovered.sort_by(f64::total_cmp);
    let median = if recovered.is_empty() {
        f64::NAN
    } else {
        0.5 * (recovered[(recovered.len() - 1) / 2] + recovered[recovered.len() / 2])
    };
    let median_error = relative(median, truth.omega_pd);
    Outcome {
        passed: worst <= 1e-6 && median_error <= 0.05,
        detail: format!(
            "noiseless max error {worst:.2e} over 20 spectra (limit 1e-6); 1% noise median omega_pd error \
             {:.3}% over {} fits, {failed} failed (limit 5%)",
            100.0 * median_error,
            recovered.len()
        ),
    }
}

fn cgs_spot_values() -> Outcome {
    let hydrogen = PlasmaComposition {
        n_e0: 1e16,
        n_i0: 1e16,
        n_d0: 0.0,
        z_i: 1,
        z_d: 0,
        polarity: DustPolarity::Negative,
        m_i: PROTON_MASS,
        m_d: 1.0,
        t_i: 0.0,
        t_ef: None,
    }
    .validate()
    .unwrap();
    let s = derived_scales(&hydrogen, &CODATA);
    let k_q_err = relative(s.k_q, 3.122e6);
    let w_pi_err = relative(s.omega_pi, 1.317e11);
    Outcome {
        passed: k_q_err <= 1e-3 && w_pi_err <= 1e-3,
        detail: format!(
            "K_q = {:.6e} cm^-1 ({:.3}% from 3.122e6), omega_pi = {:.6e} rad/s ({:.3}% from 1.317e11), limit 0.1%",
            s.k_q,
            100.0 * k_q_err,
            s.omega_pi,
            100.0 * w_pi_err
        ),
    }
}

const CONFIG_B: &str = r#"
[composition]
n_e0 = "1e22 m^-3"
n_d0 = "1e11 cm^-3"
z_d = 1000
m_i = "1.67262192369e-27 kg"
m_d = "1e-15 kg"
t_i = "0.01 eV"

[grid]
points = 25
"#;

const CONFIG_A: &str = r#"
[composition]
n_e0 = "1e16 cm^-3"
z_i = 2
m_i = "4.001506 amu"

[grid]
mode = "immobile-dust"
points = 40
"#;

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quantum-dust")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn end_to_end_cli() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let mut notes = Vec::new();
    let mut ok = true;

    let mut worst: f64 = 0.0;
    for (name, text, mode) in [("b.toml", CONFIG_B, "mobile-dust"), ("a.toml", CONFIG_A, "immobile-dust")] {
        std::fs::write(path(name), text).unwrap();
        let curve = path(&format!("{name}.csv"));
        let (code, _, err) = cli(&["--config", &path(name), "--output", &curve, "dispersion"]);
        ok &= code == 0;
        let (code, scales, _) = cli(&["--config", &path(name), "scales"]);
        ok &= code == 0;
        let (code, fit, err2) = cli(&["invert", &curve, "--mode", mode]);
        ok &= code == 0;
        if code != 0 {
            notes.push(format!("{err}{err2}"));
            continue;
        }
        let scales: Value = serde_json::from_str(&scales).unwrap();
        let fit: Value = serde_json::from_str(&fit).unwrap();
        let c = &fit["fit"]["coefficients"];
        let pairs: &[(&str, &str)] = match mode {
            "mobile-dust" => &[("omega_pd", "omega_pd_rad_per_s"), ("k_di", "k_Di_per_cm"), ("k_q", "K_q_per_cm")],
            _ => &[("q_i", "q_i_cm2_per_s"), ("omega_pi", "omega_pi_rad_per_s"), ("k_q", "K_q_per_cm")],
        };
        for (fitted, reported) in pairs {
            worst = worst.max(relative(c[*fitted].as_f64().unwrap(), scales[*reported].as_f64().unwrap()));
        }
    }
    ok &= worst <= 1e-6;
    notes.insert(0, format!("pipeline max coefficient error {worst:.2e} (limit 1e-6)"));

    // Exit statuses: 2 for bad input, 3 for a fit that cannot converge.
    std::fs::write(path("bad.csv"), "k,omega\n1,1\n2,x\n").unwrap();
    std::fs::write(path("tight.toml"), "[fit]\nmax_iterations = 1\n").unwrap();
    std::fs::write(
        path("charged.toml"),
        CONFIG_B.replace("z_d = 1000", "z_d = 1000\nn_i0 = \"3e16 cm^-3\""),
    )
    .unwrap();
    let b_curve = path("b.toml.csv");
    let cases: [(&str, Vec<String>, i32, &str); 6] = [
        ("scales", vec!["--config".into(), path("b.toml"), "scales".into()], 0, ""),
        ("quasineutrality", vec!["--config".into(), path("charged.toml"), "scales".into()], 2, "quasineutrality_violated"),
        ("bad grid", vec!["--config".into(), path("b.toml"), "dispersion".into(), "--points".into(), "1".into()], 2, "bad_grid"),
        ("step guard", vec!["--config".into(), path("b.toml"), "simulate".into(), "--dt".into(), "1".into()], 2, "step_too_large"),
        ("malformed csv", vec!["invert".into(), path("bad.csv")], 2, "invalid_csv"),
        ("no convergence", vec!["--config".into(), path("tight.toml"), "invert".into(), b_curve], 3, "no_convergence"),
    ];
    let mut codes = Vec::new();
    for (label, args, want, tag) in cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = cli(&argv);
        let tagged = tag.is_empty() || (err.lines().count() == 1 && err.starts_with(&format!("error[{tag}]")));
        ok &= code == want && tagged;
        codes.push(format!("{label}={code}"));
    }
    notes.push(format!("exit codes {}", codes.join(" ")));
    Outcome {
        passed: ok,
        detail: notes.join("; "),
    }
}

fn main() {
    let results = [
        criterion(1, "dispersion-Poisson identity", Duration::from_secs(1), dispersion_poisson_identity),
        criterion(2, "asymptotic limits", Duration::from_secs(1), asymptotic_suite),
        criterion(3, "closed-loop simulator", Duration::from_secs(30), closed_loop_simulator),
        criterion(4, "inversion round trip", Duration::from_secs(10), inversion_round_trip),
        criterion(5, "CGS spot values", Duration::from_secs(1), cgs_spot_values),
        criterion(6, "end-to-end CLI", Duration::from_secs(5), end_to_end_cli),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

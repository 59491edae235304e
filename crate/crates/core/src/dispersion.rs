//! Dispersion relations of the two low-frequency electrostatic modes.
//!
//! * Mode A (immobile dust): ion oscillations in the quantum electron
//!   background, `omega^2 = k^2 V_Ti^2 + q_i^2 k^4 + omega_pi^2 k^4 / (k^4 + K_q^4)`.
//! * Mode B (mobile dust, inertialess ions):
//!   `omega^2 = omega_pd^2 k^4 / ((k^2 + k_Di^2) k^2 + K_q^4)`.
//!
//! Both relations give `omega^2`; only the non-negative root is returned.
//! The coefficient structs carry the minimal symbol set of each relation so
//! that dimensionless checks need no physical constants.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::params::{DerivedScales, PlasmaComposition};
use crate::regime::MUCH_GREATER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    /// Mode A: immobile dust, inertial ions.
    #[serde(rename = "immobile-dust")]
    ImmobileDust,
    /// Mode B: mobile dust, Boltzmann ions.
    #[serde(rename = "mobile-dust")]
    MobileDust,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::ImmobileDust => "immobile-dust",
            Mode::MobileDust => "mobile-dust",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "immobile-dust" | "A" | "a" => Ok(Mode::ImmobileDust),
            "mobile-dust" | "B" | "b" => Ok(Mode::MobileDust),
            other => Err(format!("unknown mode '{other}' (expected immobile-dust or mobile-dust)")),
        }
    }
}

/// Symbols of the immobile-dust relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeACoefficients {
    /// Ion thermal speed (cm/s).
    pub v_ti: f64,
    /// Ion quantum dispersion coefficient `hbar / 2 m_i` (cm^2/s).
    pub q_i: f64,
    /// Ion plasma frequency (rad/s).
    pub omega_pi: f64,
    /// Quantum wavenumber (cm^-1).
    pub k_q: f64,
}

impl ModeACoefficients {
    pub fn from_scales(scales: &DerivedScales) -> Self {
        Self {
            v_ti: scales.v_ti,
            q_i: scales.q_i,
            omega_pi: scales.omega_pi,
            k_q: scales.k_q,
        }
    }

    pub fn is_admissible(&self) -> bool {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        finite_nonneg(self.v_ti)
            && finite_nonneg(self.q_i)
            && finite_nonneg(self.omega_pi)
            && self.k_q.is_finite()
            && self.k_q > 0.0
    }

    /// The three non-negative terms under the square root, in order
    /// thermal, ion quantum, electron-shielded plasma.
    pub fn terms(&self, k: f64) -> [f64; 3] {
        if k == 0.0 {
            return [0.0; 3];
        }
        let k2 = k * k;
        let shield = (self.k_q / k).powi(4);
        [
            k2 * self.v_ti * self.v_ti,
            self.q_i * self.q_i * k2 * k2,
            self.omega_pi * self.omega_pi / (1.0 + shield),
        ]
    }

    pub fn omega_squared(&self, k: f64) -> f64 {
        let [thermal, quantum, plasma] = self.terms(k);
        thermal + quantum + plasma
    }
}

/// Symbols of the mobile-dust relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeBCoefficients {
    /// Dust plasma frequency (rad/s).
    pub omega_pd: f64,
    /// Ion Debye wavenumber (cm^-1).
    pub k_di: f64,
    /// Quantum wavenumber (cm^-1).
    pub k_q: f64,
}

impl ModeBCoefficients {
    /// Fails when the ions are cold, since the Debye wavenumber is then undefined.
    pub fn from_scales(scales: &DerivedScales) -> Result<Self> {
        Ok(Self {
            omega_pd: scales.omega_pd,
            k_di: scales.k_di.ok_or(Error::MissingParameter("k_Di"))?,
            k_q: scales.k_q,
        })
    }

    pub fn is_admissible(&self) -> bool {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        finite_nonneg(self.omega_pd) && finite_nonneg(self.k_di) && self.k_q.is_finite() && self.k_q > 0.0
    }

    /// `(k^4 + k_Di^2 k^2 + K_q^4) / k^4`, the inverse of `(omega / omega_pd)^2`.
    pub fn shielding(&self, k: f64) -> f64 {
        let debye = self.k_di / k;
        1.0 + debye * debye + (self.k_q / k).powi(4)
    }

    pub fn omega_squared(&self, k: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        self.omega_pd * self.omega_pd / self.shielding(k)
    }
}

/// Non-negative root of the immobile-dust relation; `k = 0` gives 0.
pub fn omega_mode_a(c: &ModeACoefficients, k: f64) -> f64 {
    c.omega_squared(k).sqrt()
}

/// Non-negative root of the mobile-dust relation; `k = 0` gives 0.
pub fn omega_mode_b(c: &ModeBCoefficients, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    c.omega_pd / c.shielding(k).sqrt()
}

/// Coefficients of either mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode")]
pub enum Coefficients {
    #[serde(rename = "immobile-dust")]
    A(ModeACoefficients),
    #[serde(rename = "mobile-dust")]
    B(ModeBCoefficients),
}

impl Coefficients {
    pub fn from_scales(mode: Mode, scales: &DerivedScales) -> Result<Self> {
        Ok(match mode {
            Mode::ImmobileDust => Coefficients::A(ModeACoefficients::from_scales(scales)),
            Mode::MobileDust => Coefficients::B(ModeBCoefficients::from_scales(scales)?),
        })
    }

    pub fn mode(&self) -> Mode {
        match self {
            Coefficients::A(_) => Mode::ImmobileDust,
            Coefficients::B(_) => Mode::MobileDust,
        }
    }

    pub fn k_q(&self) -> f64 {
        match self {
            Coefficients::A(c) => c.k_q,
            Coefficients::B(c) => c.k_q,
        }
    }

    pub fn omega(&self, k: f64) -> f64 {
        match self {
            Coefficients::A(c) => omega_mode_a(c, k),
            Coefficients::B(c) => omega_mode_b(c, k),
        }
    }

    pub fn omega_squared(&self, k: f64) -> f64 {
        match self {
            Coefficients::A(c) => c.omega_squared(k),
            Coefficients::B(c) => c.omega_squared(k),
        }
    }

    pub fn is_admissible(&self) -> bool {
        match self {
            Coefficients::A(c) => c.is_admissible(),
            Coefficients::B(c) => c.is_admissible(),
        }
    }
}

/// Asymptotic closed forms of the two relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limit {
    /// Mode A with cold ions and `K_q >> k`:
    /// `omega = (Z_i / 2) (n_i0 / n_e0)^(1/2) hbar k^2 / (m_e m_i)^(1/2)`.
    IonQuantum,
    /// Mode B for `k << k_Di`: `omega = omega_pd k / (k_Di^2 + K_q^4 / k^2)^(1/2)`.
    LongWavelength,
    /// Mode B for `k << k_Di`, `K_q >> (k k_Di)^(1/2)`:
    /// `omega = (Z_d / 2) (n_d0 / n_e0)^(1/2) hbar k^2 / (m_e m_d)^(1/2)`.
    DustQuantum,
    /// Mode B for `K_q << (k k_Di)^(1/2)`: `omega = k C_D`.
    DustAcoustic,
}

impl Limit {
    pub const ALL: [Limit; 4] = [
        Limit::IonQuantum,
        Limit::LongWavelength,
        Limit::DustQuantum,
        Limit::DustAcoustic,
    ];

    pub fn mode(self) -> Mode {
        match self {
            Limit::IonQuantum => Mode::ImmobileDust,
            _ => Mode::MobileDust,
        }
    }

    /// Output column name.
    pub fn column(self) -> &'static str {
        match self {
            Limit::IonQuantum => "omega_ion_quantum",
            Limit::LongWavelength => "omega_long_wavelength",
            Limit::DustQuantum => "omega_dust_quantum",
            Limit::DustAcoustic => "omega_dust_acoustic",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Limit::IonQuantum => "ion-quantum",
            Limit::LongWavelength => "long-wavelength",
            Limit::DustQuantum => "dust-quantum",
            Limit::DustAcoustic => "dust-acoustic",
        }
    }

    pub fn for_mode(mode: Mode) -> impl Iterator<Item = Limit> {
        Self::ALL.into_iter().filter(move |l| l.mode() == mode)
    }
}

impl std::str::FromStr for Limit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Limit::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown limit '{s}'"))
    }
}

/// Symbols consumed by [`omega_limit`]. Each limit reads only what it needs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LimitParams {
    pub z_i: Option<f64>,
    /// `n_i0 / n_e0`.
    pub ion_density_ratio: Option<f64>,
    pub z_d: Option<f64>,
    /// `n_d0 / n_e0`.
    pub dust_density_ratio: Option<f64>,
    pub hbar: Option<f64>,
    pub m_e: Option<f64>,
    pub m_i: Option<f64>,
    pub m_d: Option<f64>,
    pub omega_pd: Option<f64>,
    pub k_di: Option<f64>,
    pub k_q: Option<f64>,
    pub c_d: Option<f64>,
}

impl LimitParams {
    pub fn from_plasma(comp: &PlasmaComposition, scales: &DerivedScales, consts: &PhysicalConstants) -> Self {
        Self {
            z_i: Some(comp.z_i as f64),
            ion_density_ratio: Some(comp.n_i0 / comp.n_e0),
            z_d: Some(comp.z_d as f64),
            dust_density_ratio: Some(comp.n_d0 / comp.n_e0),
            hbar: Some(consts.hbar),
            m_e: Some(consts.electron_mass),
            m_i: Some(comp.m_i),
            m_d: Some(comp.m_d),
            omega_pd: Some(scales.omega_pd),
            k_di: scales.k_di,
            k_q: Some(scales.k_q),
            c_d: scales.c_d,
        }
    }
}

fn need(value: Option<f64>, name: &'static str) -> Result<f64> {
    value.ok_or(Error::MissingParameter(name))
}

/// Evaluates the closed form of `limit` at `k`.
pub fn omega_limit(limit: Limit, p: &LimitParams, k: f64) -> Result<f64> {
    match limit {
        Limit::IonQuantum => {
            let z = need(p.z_i, "Z_i")?;
            let ratio = need(p.ion_density_ratio, "n_i0/n_e0")?;
            let hbar = need(p.hbar, "hbar")?;
            let m_e = need(p.m_e, "m_e")?;
            let m_i = need(p.m_i, "m_i")?;
            Ok(0.5 * z * ratio.sqrt() * hbar * k * k / (m_e * m_i).sqrt())
        }
        Limit::LongWavelength => {
            let omega_pd = need(p.omega_pd, "omega_pd")?;
            let k_di = need(p.k_di, "k_Di")?;
            let k_q = need(p.k_q, "K_q")?;
            if k == 0.0 {
                return Ok(0.0);
            }
            Ok(omega_pd * k / (k_di * k_di + k_q.powi(4) / (k * k)).sqrt())
        }
        Limit::DustQuantum => {
            let z = need(p.z_d, "Z_d")?;
            let ratio = need(p.dust_density_ratio, "n_d0/n_e0")?;
            let hbar = need(p.hbar, "hbar")?;
            let m_e = need(p.m_e, "m_e")?;
            let m_d = need(p.m_d, "m_d")?;
            Ok(0.5 * z * ratio.sqrt() * hbar * k * k / (m_e * m_d).sqrt())
        }
        Limit::DustAcoustic => Ok(k * need(p.c_d, "C_D")?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

impl std::str::FromStr for Spacing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(format!("unknown spacing '{other}'")),
        }
    }
}

/// Wavenumber grid in cm^-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KGrid {
    pub k_min: f64,
    pub k_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl KGrid {
    pub fn new(k_min: f64, k_max: f64, n_points: usize, spacing: Spacing) -> Self {
        Self {
            k_min,
            k_max,
            n_points,
            spacing,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let Self {
            k_min,
            k_max,
            n_points,
            spacing,
        } = *self;
        if n_points < 2 {
            return Err(Error::BadGrid(format!("need at least 2 points, got {n_points}")));
        }
        if !(k_min.is_finite() && k_max.is_finite() && k_min < k_max) {
            return Err(Error::BadGrid(format!("need k_min < k_max, got [{k_min:e}, {k_max:e}]")));
        }
        let last = (n_points - 1) as f64;
        let mut ks: Vec<f64> = match spacing {
            Spacing::Linear => {
                if k_min < 0.0 {
                    return Err(Error::BadGrid(format!("linear grid needs k_min >= 0, got {k_min:e}")));
                }
                let step = (k_max - k_min) / last;
                (0..n_points).map(|i| k_min + step * i as f64).collect()
            }
            Spacing::Log => {
                if k_min <= 0.0 {
                    return Err(Error::BadGrid(format!("log grid needs k_min > 0, got {k_min:e}")));
                }
                let (a, b) = (k_min.ln(), k_max.ln());
                (0..n_points)
                    .map(|i| (a + (b - a) * i as f64 / last).exp())
                    .collect()
            }
        };
        // Pin the endpoints exactly; exp/ln round trips drift by an ulp.
        ks[0] = k_min;
        ks[n_points - 1] = k_max;
        if ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadGrid("grid points not strictly increasing".into()));
        }
        Ok(ks)
    }
}

/// Limit conditions computable from the coefficients alone, each judged
/// against the factor-of-ten reading of "much greater than".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeFlags {
    /// `K_q >> k`.
    pub quantum_limit: bool,
    /// `k_Di >> k` (mode B only).
    pub long_wavelength: Option<bool>,
    /// `K_q^2 >> k k_Di` (mode B only).
    pub dust_quantum: Option<bool>,
    /// `k k_Di >> K_q^2` (mode B only).
    pub dust_acoustic: Option<bool>,
}

impl RegimeFlags {
    pub fn at(coeffs: &Coefficients, k: f64) -> Self {
        let much = |margin: f64| margin >= MUCH_GREATER;
        let k_q = coeffs.k_q();
        match coeffs {
            Coefficients::A(_) => Self {
                quantum_limit: much(k_q / k),
                long_wavelength: None,
                dust_quantum: None,
                dust_acoustic: None,
            },
            Coefficients::B(c) => Self {
                quantum_limit: much(k_q / k),
                long_wavelength: Some(much(c.k_di / k)),
                dust_quantum: Some(much(k_q * k_q / (k * c.k_di))),
                dust_acoustic: Some(much(k * c.k_di / (k_q * k_q))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub k: f64,
    pub omega: f64,
    pub flags: RegimeFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionCurve {
    pub mode: Mode,
    pub samples: Vec<CurveSample>,
}

impl DispersionCurve {
    pub fn ks(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.k)
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.omega)
    }
}

/// Samples the full relation of `coeffs` over `grid`. Grid points are
/// evaluated in parallel; each sample is independent so the result does not
/// depend on scheduling.
pub fn sample_curve(coeffs: &Coefficients, grid: &KGrid) -> Result<DispersionCurve> {
    let ks = grid.points()?;
    let samples = ks
        .par_iter()
        .map(|&k| CurveSample {
            k,
            omega: coeffs.omega(k),
            flags: RegimeFlags::at(coeffs, k),
        })
        .collect();
    Ok(DispersionCurve {
        mode: coeffs.mode(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derived_scales, DustPolarity};

    const UNIT_A: ModeACoefficients = ModeACoefficients {
        v_ti: 1.0,
        q_i: 1.0,
        omega_pi: 1.0,
        k_q: 1.0,
    };
    const UNIT_B: ModeBCoefficients = ModeBCoefficients {
        omega_pd: 1.0,
        k_di: 1.0,
        k_q: 1.0,
    };

    #[test]
    fn zero_wavenumber_gives_zero() {
        assert_eq!(omega_mode_a(&UNIT_A, 0.0), 0.0);
        assert_eq!(omega_mode_b(&UNIT_B, 0.0), 0.0);
    }

    #[test]
    fn mode_a_unit_substitution() {
        // 1 + 1 + 1/2
        assert!((omega_mode_a(&UNIT_A, 1.0) - 2.5f64.sqrt()).abs() < 1e-15);
        assert!((omega_mode_a(&UNIT_A, 1.0) - 1.58114).abs() < 1e-5);
    }

    #[test]
    fn mode_a_single_quantum_term() {
        let c = ModeACoefficients {
            v_ti: 0.0,
            q_i: 1.0,
            omega_pi: 0.0,
            k_q: 1.0,
        };
        for k in [1e-3, 0.5, 1.0, 3.0, 1e4] {
            assert_eq!(omega_mode_a(&c, k), k * k);
        }
    }

    #[test]
    fn mode_b_unit_substitution() {
        assert!((omega_mode_b(&UNIT_B, 1.0) - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((omega_mode_b(&UNIT_B, 1.0) - 0.577350).abs() < 1e-6);
    }

    #[test]
    fn mode_b_high_k_asymptote() {
        let c = ModeBCoefficients {
            omega_pd: 2.0,
            ..UNIT_B
        };
        assert!((omega_mode_b(&c, 1e6) / 2.0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ion_quantum_unit_normalization() {
        let p = LimitParams {
            z_i: Some(1.0),
            ion_density_ratio: Some(1.0),
            hbar: Some(2.0),
            m_e: Some(1.0),
            m_i: Some(1.0),
            ..Default::default()
        };
        assert_eq!(omega_limit(Limit::IonQuantum, &p, 1.0), Ok(1.0));
    }

    #[test]
    fn dust_acoustic_is_linear() {
        let p = LimitParams {
            c_d: Some(0.5),
            ..Default::default()
        };
        assert!((omega_limit(Limit::DustAcoustic, &p, 0.1).unwrap() - 0.05).abs() < 1e-17);
    }

    #[test]
    fn dust_quantum_substitution() {
        // (2/2) * 0.5 * 2 * 1 / 1
        let p = LimitParams {
            z_d: Some(2.0),
            dust_density_ratio: Some(0.25),
            hbar: Some(2.0),
            m_e: Some(1.0),
            m_d: Some(1.0),
            ..Default::default()
        };
        assert_eq!(omega_limit(Limit::DustQuantum, &p, 1.0), Ok(1.0));
    }

    #[test]
    fn long_wavelength_drops_k4() {
        let p = LimitParams {
            omega_pd: Some(1.0),
            k_di: Some(1.0),
            k_q: Some(1.0),
            ..Default::default()
        };
        // 1 / sqrt(1 + 1)
        let w = omega_limit(Limit::LongWavelength, &p, 1.0).unwrap();
        assert!((w - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn missing_parameter_is_named() {
        let p = LimitParams::default();
        assert_eq!(
            omega_limit(Limit::DustAcoustic, &p, 1.0),
            Err(Error::MissingParameter("C_D"))
        );
        assert_eq!(
            omega_limit(Limit::IonQuantum, &p, 1.0),
            Err(Error::MissingParameter("Z_i"))
        );
    }

    #[test]
    fn log_curve_mode_b() {
        let grid = KGrid::new(0.01, 100.0, 5, Spacing::Log);
        let curve = sample_curve(&Coefficients::B(UNIT_B), &grid).unwrap();
        assert_eq!(curve.samples.len(), 5);
        let ks: Vec<f64> = curve.ks().collect();
        assert_eq!(ks[0], 0.01);
        assert_eq!(ks[4], 100.0);
        assert!((ks[2] - 1.0).abs() < 1e-14);
        let ws: Vec<f64> = curve.omegas().collect();
        assert!(ws.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn mode_b_monotone_dense_sweep() {
        // The derivative of omega^2 in k is proportional to
        // 2 k_Di^2 k^2 + 4 K_q^4 > 0; check it numerically on a dense grid.
        let mut prev = 0.0;
        for i in 1..=20_000 {
            let k = 1e-2 * 10f64.powf(4.0 * i as f64 / 20_000.0);
            let w = omega_mode_b(&UNIT_B, k);
            assert!(w > prev, "not increasing at k = {k}");
            prev = w;
        }
    }

    #[test]
    fn bad_grids() {
        assert!(matches!(
            KGrid::new(0.1, 1.0, 1, Spacing::Log).points(),
            Err(Error::BadGrid(_))
        ));
        assert!(matches!(
            KGrid::new(0.0, 1.0, 5, Spacing::Log).points(),
            Err(Error::BadGrid(_))
        ));
        assert!(matches!(
            KGrid::new(1.0, 1.0, 5, Spacing::Linear).points(),
            Err(Error::BadGrid(_))
        ));
        assert!(matches!(
            KGrid::new(-1.0, 1.0, 5, Spacing::Linear).points(),
            Err(Error::BadGrid(_))
        ));
    }

    #[test]
    fn linear_grid_starts_at_zero() {
        let grid = KGrid::new(0.0, 1.0, 2, Spacing::Linear);
        let curve = sample_curve(&Coefficients::A(UNIT_A), &grid).unwrap();
        assert_eq!(curve.samples[0].omega, 0.0);
        assert_eq!(curve.samples[1].k, 1.0);
    }

    #[test]
    fn parallel_sampling_matches_serial() {
        let coeffs = Coefficients::B(ModeBCoefficients {
            omega_pd: 3.3,
            k_di: 0.7,
            k_q: 12.0,
        });
        let grid = KGrid::new(1e-3, 1e3, 513, Spacing::Log);
        let curve = sample_curve(&coeffs, &grid).unwrap();
        for (s, k) in curve.samples.iter().zip(grid.points().unwrap()) {
            assert_eq!(s.omega.to_bits(), coeffs.omega(k).to_bits());
        }
    }

    #[test]
    fn flags_follow_thresholds() {
        let coeffs = Coefficients::B(UNIT_B);
        let f = RegimeFlags::at(&coeffs, 0.01);
        assert!(f.quantum_limit);
        assert_eq!(f.long_wavelength, Some(true));
        assert_eq!(f.dust_quantum, Some(true));
        assert_eq!(f.dust_acoustic, Some(false));
        let f = RegimeFlags::at(&coeffs, 1.0);
        assert!(!f.quantum_limit);
        assert_eq!(f.long_wavelength, Some(false));
    }

    #[test]
    fn coefficient_layer_matches_direct_evaluation() {
        let consts = PhysicalConstants::CODATA_2018;
        let comp = PlasmaComposition {
            n_e0: 1e16,
            n_i0: 1.01e16,
            n_d0: 1e11,
            z_i: 1,
            z_d: 1000,
            polarity: DustPolarity::Negative,
            m_i: crate::constants::PROTON_MASS,
            m_d: 1e-12,
            t_i: 1.602_176_634e-14,
            t_ef: None,
        };
        let coeffs = ModeACoefficients::from_scales(&derived_scales(&comp, &consts));
        let e2 = consts.electron_charge.powi(2);
        let a0 = consts.hbar.powi(2) / (consts.electron_mass * e2);
        for k in [1e2, 1e4, 3e6, 1e8] {
            let k4 = k * k * k * k;
            let direct = (k * k * comp.t_i / comp.m_i
                + consts.hbar.powi(2) * k4 / (4.0 * comp.m_i * comp.m_i)
                + 4.0 * std::f64::consts::PI * comp.n_i0 * e2 / comp.m_i * k4
                    / (k4 + 16.0 * std::f64::consts::PI * comp.n_e0 / a0))
                .sqrt();
            let layered = omega_mode_a(&coeffs, k);
            assert!((layered / direct - 1.0).abs() < 1e-14, "k = {k}");
        }
    }
}

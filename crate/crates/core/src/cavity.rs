//! Quantum-dot spin in a micropillar cavity: steady-state scattering
//! coefficients, the interaction maps they induce, and detuning solvers.
//!
//! Frequencies are offsets in units of κ. `omega` is the probe offset from the
//! cavity frequency, so `ω_c - ω = -omega` when `omega_c = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::roots;
use crate::state::{Label, PureState, I, ONE, ZERO};

/// Resolution of the bracket scans, in units of κ.
pub const SCAN_STEP: f64 = 0.01;
/// Upper end of the balanced-detuning scan.
pub const BALANCED_MAX: f64 = 5.0;
/// Half-width of the π/2-detuning scan.
pub const PI_HALF_SPAN: f64 = 5.0;
/// Residual accepted from the solvers.
pub const ROOT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityParams {
    pub g: f64,
    pub kappa: f64,
    pub kappa_s: f64,
    pub gamma: f64,
    pub omega: f64,
    pub omega_c: f64,
    pub omega_x: f64,
}

impl Default for CavityParams {
    fn default() -> Self {
        Self { g: 0.0, kappa: 1.0, kappa_s: 0.0, gamma: 0.1, omega: 0.0, omega_c: 0.0, omega_x: 0.0 }
    }
}

impl CavityParams {
    /// Resonant parameters with κ = 1.
    pub fn new(g: f64, kappa_s: f64, gamma: f64) -> Self {
        Self { g, kappa_s, gamma, ..Self::default() }
    }

    /// Parameters with `g` given as the ratio `g / (κ + κ_s)`.
    pub fn from_ratio(g_over_ktot: f64, kappa_s: f64, gamma: f64) -> Self {
        Self::new(g_over_ktot * (1.0 + kappa_s), kappa_s, gamma)
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn g_over_ktot(&self) -> f64 {
        self.g / (self.kappa + self.kappa_s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.g, self.kappa, self.kappa_s, self.gamma, self.omega, self.omega_c, self.omega_x]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite value".into()));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParams(format!("g = {} < 0", self.g)));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams(format!("kappa = {} <= 0", self.kappa)));
        }
        if self.kappa_s < 0.0 {
            return Err(Error::InvalidParams(format!("kappa_s = {} < 0", self.kappa_s)));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParams(format!("gamma = {} <= 0", self.gamma)));
        }
        Ok(())
    }

    /// `i(ω_X - ω) + γ/2`.
    fn dipole(&self) -> C64 {
        C64::new(self.gamma / 2.0, self.omega_x - self.omega)
    }

    /// `i(ω_c - ω)`.
    fn cavity_detuning(&self) -> C64 {
        C64::new(0.0, self.omega_c - self.omega)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleSidedCoeffs {
    pub r_h: C64,
    pub t_h: C64,
    pub r_0: C64,
    pub t_0: C64,
}

impl DoubleSidedCoeffs {
    /// Lossless, perfectly contrasting limit.
    pub fn ideal() -> Self {
        Self { r_h: ONE, t_h: ZERO, r_0: ZERO, t_0: -ONE }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleSidedCoeffs {
    pub r_h: C64,
    pub r_0: C64,
}

impl SingleSidedCoeffs {
    /// Limit with a π/2 phase between the coupled and uncoupled reflections.
    pub fn ideal() -> Self {
        Self { r_h: ONE, r_0: I }
    }
}

/// Coefficient sets for both cavity units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalCoeffs {
    pub double: DoubleSidedCoeffs,
    pub single: SingleSidedCoeffs,
}

impl PhysicalCoeffs {
    /// Evaluates each unit at its own probe offset.
    pub fn at(p: &CavityParams, omega_double: f64, omega_single: f64) -> Self {
        Self {
            double: double_sided_coeffs(&p.with_omega(omega_double)),
            single: single_sided_coeffs(&p.with_omega(omega_single)),
        }
    }

    /// Evaluates at the balanced and π/2 detunings of `p`.
    pub fn solved(p: &CavityParams) -> Result<Self> {
        Ok(Self::at(p, solve_balanced_detuning(p)?, solve_pi_half_detuning(p)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InteractionMode {
    Ideal,
    Physical(PhysicalCoeffs),
}

impl InteractionMode {
    pub fn double(&self) -> DoubleSidedCoeffs {
        match self {
            InteractionMode::Ideal => DoubleSidedCoeffs::ideal(),
            InteractionMode::Physical(c) => c.double,
        }
    }

    pub fn single(&self) -> SingleSidedCoeffs {
        match self {
            InteractionMode::Ideal => SingleSidedCoeffs::ideal(),
            InteractionMode::Physical(c) => c.single,
        }
    }
}

/// Double-sided unit: hot `(r_h, t_h)` and cold `(r_0, t_0)` amplitudes.
pub fn double_sided_coeffs(p: &CavityParams) -> DoubleSidedCoeffs {
    let a = p.dipole();
    let d = p.cavity_detuning();
    let k = p.kappa;
    let b = d + k + p.kappa_s / 2.0;
    let t_h = -k * a / (a * b + p.g * p.g);
    DoubleSidedCoeffs { r_h: ONE + t_h, t_h, r_0: (d + p.kappa_s / 2.0) / b, t_0: -k / b }
}

/// Single-sided unit: hot `r_h'` and cold `r_0'` reflection amplitudes.
pub fn single_sided_coeffs(p: &CavityParams) -> SingleSidedCoeffs {
    let a = p.dipole();
    let d = p.cavity_detuning();
    let k = p.kappa;
    let b = d + k / 2.0 + p.kappa_s / 2.0;
    SingleSidedCoeffs {
        r_h: ONE - k * a / (a * b + p.g * p.g),
        r_0: (d - k / 2.0 + p.kappa_s / 2.0) / b,
    }
}

/// 8×8 map on `(polarization, direction, spin)`. A photon couples when
/// `pol XOR direction == spin`; it is then reflected (polarization and
/// direction flip) with `r_h` and transmitted with `t_h`. Uncoupled photons
/// use `r_0` and `t_0`.
pub fn double_sided_map(c: &DoubleSidedCoeffs) -> Operator {
    Operator::from_columns(8, |col| {
        let (p, d, s) = (col >> 2, (col >> 1) & 1, col & 1);
        let (r, t) = if p ^ d == s { (c.r_h, c.t_h) } else { (c.r_0, c.t_0) };
        let reflected = ((1 - p) << 2) | ((1 - d) << 1) | s;
        vec![(reflected, r), (col, t)]
    })
}

/// Which spin state the single-sided unit couples to for an `R` photon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    /// `R↑` and `L↓` couple.
    Up,
    /// `R↓` and `L↑` couple.
    Down,
}

/// 4×4 map on `(polarization, spin)`. Every photon is reflected with a
/// polarization flip; coupled ones pick up `r_h'`, uncoupled ones `r_0'`.
pub fn single_sided_map(c: &SingleSidedCoeffs, incidence: Incidence) -> Operator {
    let flip = match incidence {
        Incidence::Up => 0,
        Incidence::Down => 1,
    };
    Operator::from_columns(4, |col| {
        let (p, s) = (col >> 1, col & 1);
        let amp = if p ^ s == flip { c.r_h } else { c.r_0 };
        vec![((((1 - p) << 1) | s), amp)]
    })
}

/// Lossless double-sided interaction on one photon.
pub fn ideal_double_sided_interaction(
    state: &PureState,
    photon: &str,
    direction: &Label,
    spin: &str,
) -> Result<PureState> {
    physical_double_sided_interaction(state, photon, direction, spin, &DoubleSidedCoeffs::ideal())
}

/// Double-sided scattering with arbitrary amplitudes; no renormalization.
pub fn physical_double_sided_interaction(
    state: &PureState,
    photon: &str,
    direction: &Label,
    spin: &str,
    c: &DoubleSidedCoeffs,
) -> Result<PureState> {
    state.apply(&double_sided_map(c), &[Label::pol(photon), direction.clone(), Label::spin(spin)])
}

/// Phase-shift gate `R↑→L↑, L↑→iR↑, R↓→iL↓, L↓→R↓`.
pub fn ideal_single_sided_interaction(state: &PureState, photon: &str, spin: &str) -> Result<PureState> {
    single_sided_interaction(state, photon, spin, &SingleSidedCoeffs::ideal(), Incidence::Up)
}

/// Single-sided scattering with arbitrary amplitudes; no renormalization.
pub fn single_sided_interaction(
    state: &PureState,
    photon: &str,
    spin: &str,
    c: &SingleSidedCoeffs,
    incidence: Incidence,
) -> Result<PureState> {
    state.apply(&single_sided_map(c, incidence), &[Label::pol(photon), Label::spin(spin)])
}

/// `|t_0(ω)| - |r_h(ω)|`.
pub fn balance_residual(p: &CavityParams, omega: f64) -> f64 {
    let c = double_sided_coeffs(&p.with_omega(omega));
    c.t_0.norm() - c.r_h.norm()
}

/// Smallest `ω ∈ [0, 5κ]` with `|t_0(ω)| = |r_h(ω)|`.
pub fn solve_balanced_detuning(p: &CavityParams) -> Result<f64> {
    p.validate()?;
    if p.g <= 0.0 {
        return Err(Error::InvalidParams("balanced detuning needs g > 0".into()));
    }
    let f = |w: f64| balance_residual(p, w);
    let (lo, hi) = (0.0, BALANCED_MAX * p.kappa);
    if f(lo).abs() < ROOT_TOL * 1e-3 {
        return Ok(lo);
    }
    let brackets = roots::scan(f, lo, hi, SCAN_STEP * p.kappa, |_, _| true);
    if let Some(&(a, b)) = brackets.first() {
        let w = roots::refine(f, a, b);
        if f(w).abs() < ROOT_TOL {
            return Ok(w);
        }
    }
    let n = ((hi - lo) / (SCAN_STEP * p.kappa)).round() as usize;
    let min_residual = (0..=n).map(|k| f(lo + (hi - lo) * k as f64 / n as f64).abs()).fold(f64::INFINITY, f64::min);
    Err(Error::NoBalancedRoot { lo, hi, min_residual })
}

/// `arg r_0' - arg r_h'` wrapped to `(-π, π]`.
pub fn phase_difference(p: &CavityParams, omega: f64) -> f64 {
    let c = single_sided_coeffs(&p.with_omega(omega));
    wrap(c.r_0.arg() - c.r_h.arg())
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Every `ω ∈ [-5κ, 5κ]` where the single-sided phase difference is π/2.
pub fn pi_half_roots(p: &CavityParams) -> Vec<f64> {
    let f = |w: f64| wrap(phase_difference(p, w) - FRAC_PI_2);
    let span = PI_HALF_SPAN * p.kappa;
    roots::scan(f, -span, span, SCAN_STEP * p.kappa, |a, b| (a - b).abs() < PI)
        .into_iter()
        .map(|(a, b)| roots::refine(f, a, b))
        .filter(|w| f(*w).abs() < ROOT_TOL)
        .collect()
}

/// Detuning giving a π/2 phase between cold and hot single-sided reflection.
/// Among several roots the one with the largest single-sided efficiency is
/// returned. A secant search from `-κ/2` is the fallback.
pub fn solve_pi_half_detuning(p: &CavityParams) -> Result<f64> {
    p.validate()?;
    if p.g <= 0.0 {
        return Err(Error::InvalidParams("pi/2 detuning needs g > 0".into()));
    }
    let eff = |w: f64| crate::metrics::efficiency_single(&single_sided_coeffs(&p.with_omega(w)));
    let best = pi_half_roots(p).into_iter().fold(None, |acc: Option<f64>, w| match acc {
        Some(b) if eff(b) >= eff(w) => Some(b),
        _ => Some(w),
    });
    if let Some(w) = best {
        return Ok(w);
    }
    let f = |w: f64| wrap(phase_difference(p, w) - FRAC_PI_2);
    if let Some(w) = roots::secant(f, -0.5 * p.kappa, ROOT_TOL) {
        return Ok(w);
    }
    let span = PI_HALF_SPAN * p.kappa;
    let n = (2.0 * span / (SCAN_STEP * p.kappa)).round() as usize;
    let (mut min_phase, mut max_phase) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..=n {
        let d = phase_difference(p, -span + 2.0 * span * k as f64 / n as f64);
        min_phase = min_phase.min(d);
        max_phase = max_phase.max(d);
    }
    Err(Error::NoPhaseRoot { lo: -span, hi: span, min_phase, max_phase })
}

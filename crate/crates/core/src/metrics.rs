//! Fidelity and efficiency of the cavity units, spin decoherence, and
//! parameter sweeps.

use std::fmt;
use std::io::Write;

use num_complex::Complex64 as C64;

use crate::cavity::{
    double_sided_coeffs, physical_double_sided_interaction, single_sided_coeffs, solve_balanced_detuning,
    solve_pi_half_detuning, CavityParams, DoubleSidedCoeffs, SingleSidedCoeffs,
};
use crate::error::{Error, Result};
use crate::exec::{DefaultExecutor, Executor};
use crate::ghz::{Sign, PHOTONS3};
use crate::state::{Label, PureState, ZERO};

/// `(A, B)` with `A = t0³ ± r0³`, `B = t0²r0 ± r0²t0`; `sign` is the sign of
/// the GHZ superposition.
fn double_terms(c: &DoubleSidedCoeffs, sign: Sign) -> (C64, C64) {
    let (r, t) = (c.r_0, c.t_0);
    let s = sign.factor();
    (t * t * t + s * r * r * r, t * t * r + s * r * r * t)
}

fn double_fidelity(c: &DoubleSidedCoeffs, sign: Sign) -> Result<f64> {
    let (a, b) = double_terms(c, sign);
    let den = (a.norm_sqr() + 3.0 * b.norm_sqr()).sqrt();
    if den == 0.0 || !den.is_finite() {
        return Err(Error::DegenerateCoefficients("|A|^2 + 3|B|^2 vanishes"));
    }
    Ok(a.norm() / den)
}

/// `F_+`, measured on the `-` superposition.
pub fn f_plus(c: &DoubleSidedCoeffs) -> Result<f64> {
    double_fidelity(c, Sign::Minus)
}

/// `F_-`, measured on the `+` superposition.
pub fn f_minus(c: &DoubleSidedCoeffs) -> Result<f64> {
    double_fidelity(c, Sign::Plus)
}

/// `(F_+, F_-)`.
pub fn fidelity_double(c: &DoubleSidedCoeffs) -> Result<(f64, f64)> {
    Ok((f_plus(c)?, f_minus(c)?))
}

/// `(E_+, E_-)`.
pub fn efficiency_double(c: &DoubleSidedCoeffs) -> Result<(f64, f64)> {
    let e = |sign| {
        let (a, b) = double_terms(c, sign);
        a.norm_sqr() + 3.0 * b.norm_sqr()
    };
    let (ep, em) = (e(Sign::Minus), e(Sign::Plus));
    if !(ep.is_finite() && em.is_finite()) {
        return Err(Error::DegenerateCoefficients("non-finite coefficients"));
    }
    Ok((ep, em))
}

fn single_sum(c: &SingleSidedCoeffs) -> f64 {
    let (h, o) = (c.r_h, c.r_0);
    (o * o * o).norm_sqr() + (h * h * h).norm_sqr() + 3.0 * ((o * o * h).norm_sqr() + (h * h * o).norm_sqr())
}

/// `F'` of the single-sided phase gate.
pub fn fidelity_single(c: &SingleSidedCoeffs) -> Result<f64> {
    let (h, o) = (c.r_h, c.r_0);
    let i = C64::new(0.0, 1.0);
    let num = h * (h * h - 3.0 * o * o) + i * (o * o - 3.0 * h * h) * o;
    let s = single_sum(c);
    if s == 0.0 {
        return Err(Error::DegenerateCoefficients("single-sided coefficients vanish"));
    }
    Ok(num.norm() / (2.0 * (2.0 * s).sqrt()))
}

/// `E'` of the single-sided phase gate.
pub fn efficiency_single(c: &SingleSidedCoeffs) -> f64 {
    single_sum(c) / 8.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoherenceParams {
    pub t: f64,
    pub coherence_time: f64,
}

/// `[1 + exp(-5t/T)] / 2`.
pub fn decoherence_factor(p: DecoherenceParams) -> Result<f64> {
    if !(p.t >= 0.0) || !(p.coherence_time > 0.0) {
        return Err(Error::InvalidParams(format!("need t >= 0 and T > 0, got t = {}, T = {}", p.t, p.coherence_time)));
    }
    Ok(0.5 * (1.0 + (-5.0 * p.t / p.coherence_time).exp()))
}

/// Scatters `(|R,2>^⊗3 ± |L,1>^⊗3)/√2 ⊗ |↑>` through the double-sided unit
/// photon by photon and compares with the lossless output. Returns
/// `(amplitude fidelity, surviving norm²)`.
pub fn simulated_double(c: &DoubleSidedCoeffs, sign: Sign) -> Result<(f64, f64)> {
    let mut labels: Vec<Label> = PHOTONS3.iter().map(|p| Label::pol(*p)).collect();
    labels.extend(PHOTONS3.iter().map(|p| Label::path(*p)));
    labels.push(Label::spin("1"));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 1 << 7];
    amps[0b000_111_0] = C64::new(h, 0.0);
    amps[0b111_000_0] = C64::new(sign.factor() * h, 0.0);
    let input = PureState::new(labels, amps)?;
    let ideal = PHOTONS3.iter().try_fold(input.clone(), |st, p| {
        physical_double_sided_interaction(&st, p, &Label::path(*p), "1", &DoubleSidedCoeffs::ideal())
    })?;
    let out = PHOTONS3
        .iter()
        .try_fold(input, |st, p| physical_double_sided_interaction(&st, p, &Label::path(*p), "1", c))?;
    let norm = out.norm_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((ideal.inner(&out)?.norm() / norm.sqrt(), norm))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    NoBalancedRoot,
    NoPiHalfRoot,
    NoRoots,
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointStatus::Ok => "ok",
            PointStatus::NoBalancedRoot => "no_balanced_root",
            PointStatus::NoPiHalfRoot => "no_pi_half_root",
            PointStatus::NoRoots => "no_roots",
        })
    }
}

/// One sweep row; unsolved quantities are NaN.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub ks_over_k: f64,
    pub g_over_ktot: f64,
    pub omega_star_double: f64,
    pub omega_star_single: f64,
    pub f_plus: f64,
    pub f_minus: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub f_prime: f64,
    pub e_prime: f64,
    pub status: PointStatus,
}

/// Evaluates all metrics at one `(κ_s, g/(κ+κ_s))` point.
pub fn evaluate_point(ks_over_k: f64, g_over_ktot: f64, gamma: f64) -> SweepPoint {
    let p = CavityParams::from_ratio(g_over_ktot, ks_over_k, gamma);
    let nan = f64::NAN;
    let mut pt = SweepPoint {
        ks_over_k,
        g_over_ktot,
        omega_star_double: nan,
        omega_star_single: nan,
        f_plus: nan,
        f_minus: nan,
        e_plus: nan,
        e_minus: nan,
        f_prime: nan,
        e_prime: nan,
        status: PointStatus::Ok,
    };
    let double = solve_balanced_detuning(&p).ok().and_then(|w| {
        let c = double_sided_coeffs(&p.with_omega(w));
        Some((w, fidelity_double(&c).ok()?, efficiency_double(&c).ok()?))
    });
    let single = solve_pi_half_detuning(&p).ok().and_then(|w| {
        let c = single_sided_coeffs(&p.with_omega(w));
        Some((w, fidelity_single(&c).ok()?, efficiency_single(&c)))
    });
    if let Some((w, (fp, fm), (ep, em))) = double {
        pt.omega_star_double = w;
        (pt.f_plus, pt.f_minus, pt.e_plus, pt.e_minus) = (fp, fm, ep, em);
    }
    if let Some((w, f, e)) = single {
        pt.omega_star_single = w;
        (pt.f_prime, pt.e_prime) = (f, e);
    }
    pt.status = match (double.is_some(), single.is_some()) {
        (true, true) => PointStatus::Ok,
        (false, true) => PointStatus::NoBalancedRoot,
        (true, false) => PointStatus::NoPiHalfRoot,
        (false, false) => PointStatus::NoRoots,
    };
    pt
}

/// Evenly spaced coupling ratios `min..=max`.
pub fn g_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(min.is_finite() && max.is_finite()) || max < min || min < 0.0 {
        return Err(Error::InvalidParams(format!("g range ({min}, {max}, {steps}) needs 0 <= min <= max and steps >= 2")));
    }
    Ok((0..steps).map(|k| min + (max - min) * k as f64 / (steps - 1) as f64).collect())
}

/// Grid sweep in row-major `(κ_s, g)` order.
pub fn sweep_with<E: Executor>(ks_ratios: &[f64], g_range: (f64, f64, usize), gamma: f64) -> Result<Vec<SweepPoint>> {
    let gs = g_grid(g_range.0, g_range.1, g_range.2)?;
    if ks_ratios.iter().any(|k| !(*k >= 0.0)) {
        return Err(Error::InvalidParams("kappa_s ratios must be >= 0".into()));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParams(format!("gamma = {gamma} <= 0")));
    }
    let grid: Vec<(f64, f64)> = ks_ratios.iter().flat_map(|&k| gs.iter().map(move |&g| (k, g))).collect();
    Ok(E::map(&grid, |&(k, g)| evaluate_point(k, g, gamma)))
}

pub fn sweep(ks_ratios: &[f64], g_range: (f64, f64, usize), gamma: f64) -> Result<Vec<SweepPoint>> {
    sweep_with::<DefaultExecutor>(ks_ratios, g_range, gamma)
}

pub const SWEEP_HEADER: [&str; 11] = [
    "ks_over_k",
    "g_over_ktot",
    "omega_star_double",
    "omega_star_single",
    "F_plus",
    "F_minus",
    "E_plus",
    "E_minus",
    "F_prime",
    "E_prime",
    "status",
];

/// `x` with nine significant digits.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        format!("{:.8e}", x)
    }
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for p in points {
        let nums = [
            p.ks_over_k,
            p.g_over_ktot,
            p.omega_star_double,
            p.omega_star_single,
            p.f_plus,
            p.f_minus,
            p.e_plus,
            p.e_minus,
            p.f_prime,
            p.e_prime,
        ];
        let mut row: Vec<String> = nums.iter().map(|x| sig9(*x)).collect();
        row.push(p.status.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

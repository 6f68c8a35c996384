//! Heralded generation of the `i = j = 1` hyperentangled GHZ family.
//!
//! Three `R` photons enter the double-sided unit through path mode 2. The
//! direction of travel through the cavity is identified with the path mode, so
//! reflection sends a photon to mode 1 and transmission keeps it in mode 2.
//! After the cavity the photons share a GHZ state in both degrees of freedom
//! whose signs are recorded by spin 1; the phase gate of the analyzer then
//! records the polarization sign on spin 2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analyzer::{SpinResult, SPIN1, SPIN2};
use crate::cavity::{physical_double_sided_interaction, single_sided_interaction, DoubleSidedCoeffs, Incidence, InteractionMode};
use crate::error::Result;
use crate::ghz::{make_hyper_ghz, Classification, Sign, PHOTONS3};
use crate::optics::{apply_all, OpticalElement};
use crate::state::{Basis, Label, PureState};

/// Herald table: `(spin 1 bit, spin 2 bit)` in the `±` and `±'` bases.
pub const HERALDS: [((u8, u8), Classification); 4] = [
    ((1, 1), Classification { pol_index: 1, pol_sign: Sign::Minus, spat_index: 1, spat_sign: Sign::Minus }),
    ((1, 0), Classification { pol_index: 1, pol_sign: Sign::Plus, spat_index: 1, spat_sign: Sign::Plus }),
    ((0, 0), Classification { pol_index: 1, pol_sign: Sign::Plus, spat_index: 1, spat_sign: Sign::Minus }),
    ((0, 1), Classification { pol_index: 1, pol_sign: Sign::Minus, spat_index: 1, spat_sign: Sign::Plus }),
];

pub fn herald_label(spin1: u8, spin2: u8) -> Classification {
    HERALDS.iter().find(|(k, _)| *k == (spin1, spin2)).map(|(_, c)| *c).expect("bits are 0 or 1")
}

/// Double-sided interaction that splits a photon entering in path mode 2
/// into reflected (mode 1) and transmitted (mode 2) components.
pub fn spatial_mode_birth(state: &PureState, photon: &str, spin1: &str) -> Result<PureState> {
    spatial_mode_birth_with(state, photon, spin1, &DoubleSidedCoeffs::ideal())
}

pub fn spatial_mode_birth_with(
    state: &PureState,
    photon: &str,
    spin1: &str,
    c: &DoubleSidedCoeffs,
) -> Result<PureState> {
    physical_double_sided_interaction(state, photon, &Label::path(photon), spin1, c)
}

/// Photons in `|R, mode 2>`, spins 1 and 2 in `|+>`.
pub fn initial_state() -> Result<PureState> {
    let mut labels: Vec<Label> = PHOTONS3.iter().map(|p| Label::pol(*p)).collect();
    labels.extend(PHOTONS3.iter().map(|p| Label::path(*p)));
    let photons = PureState::basis(labels, &[0, 0, 0, 1, 1, 1])?;
    photons.tensor(&PureState::plus(Label::spin(SPIN1)))?.tensor(&PureState::plus(Label::spin(SPIN2)))
}

pub fn after_cavity1(mode: &InteractionMode) -> Result<PureState> {
    let c = mode.double();
    PHOTONS3.iter().try_fold(initial_state()?, |st, p| spatial_mode_birth_with(&st, p, SPIN1, &c))
}

/// Full evolution up to the spin measurements.
pub fn evolve(mode: &InteractionMode) -> Result<PureState> {
    let st = apply_all(OpticalElement::Qwp, &after_cavity1(mode)?, &PHOTONS3)?;
    let c = mode.single();
    let st = PHOTONS3.iter().try_fold(st, |st, p| {
        let st = OpticalElement::Wp.apply(&st, p)?;
        single_sided_interaction(&st, p, SPIN2, &c, Incidence::Down)
    })?;
    apply_all(OpticalElement::Qwp1, &st, &PHOTONS3)
}

#[derive(Clone, Debug)]
pub struct HeraldBranch {
    pub spin1: SpinResult,
    pub spin2: SpinResult,
    pub label: Classification,
    /// Exact projection norm.
    pub probability: f64,
    /// Fidelity of the conditional photon state with `label`.
    pub fidelity: f64,
    /// Conditional photon state, normalized.
    pub state: PureState,
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub branches: Vec<HeraldBranch>,
    /// Norm lost to cavity transmission or leakage.
    pub failure_probability: f64,
}

/// Exact herald probabilities and conditional states, in table order.
pub fn herald_branches(mode: &InteractionMode) -> Result<GenerationReport> {
    let st = evolve(mode)?;
    let mut branches = Vec::with_capacity(4);
    for ((b1, b2), label) in HERALDS {
        let photons = st
            .project_out(&Label::spin(SPIN1), Basis::PlusMinus, b1)?
            .project_out(&Label::spin(SPIN2), Basis::PlusMinusPrime, b2)?;
        let probability = photons.norm_sqr();
        let state = photons.normalized()?;
        let fidelity = state.fidelity(&make_hyper_ghz(label, &PHOTONS3)?)?;
        branches.push(HeraldBranch {
            spin1: SpinResult::from_outcome(Basis::PlusMinus, b1),
            spin2: SpinResult::from_outcome(Basis::PlusMinusPrime, b2),
            label,
            probability,
            fidelity,
            state,
        });
    }
    let kept: f64 = branches.iter().map(|b| b.probability).sum();
    Ok(GenerationReport { branches, failure_probability: (1.0 - kept).max(0.0) })
}

#[derive(Clone, Debug)]
pub struct GenerationResult {
    pub spin1_outcome: SpinResult,
    pub spin2_outcome: SpinResult,
    pub heralded_state: PureState,
    pub heralded_label: Classification,
}

#[derive(Clone, Debug)]
pub enum GenerationOutcome {
    Heralded(GenerationResult),
    /// No photon triple left the device; carries the loss probability.
    Lost { failure_probability: f64 },
}

impl GenerationReport {
    /// Index into `branches`, or `None` for a loss event, drawn with `u ∈ [0, 1)`.
    pub fn pick(&self, u: f64) -> Option<usize> {
        let mut acc = 0.0;
        for (k, b) in self.branches.iter().enumerate() {
            acc += b.probability;
            if u < acc {
                return Some(k);
            }
        }
        None
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GenerationOutcome {
        match self.pick(rng.gen::<f64>()) {
            Some(k) => {
                let b = &self.branches[k];
                GenerationOutcome::Heralded(GenerationResult {
                    spin1_outcome: b.spin1,
                    spin2_outcome: b.spin2,
                    heralded_state: b.state.clone(),
                    heralded_label: b.label,
                })
            }
            None => GenerationOutcome::Lost { failure_probability: self.failure_probability },
        }
    }
}

/// Seeded single run of the generator.
pub fn run_hgsg(seed: u64, mode: &InteractionMode) -> Result<GenerationOutcome> {
    let report = herald_branches(mode)?;
    Ok(report.sample(&mut ChaCha8Rng::seed_from_u64(seed)))
}

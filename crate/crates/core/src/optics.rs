//! Passive polarization optics.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::operator::Operator;
use crate::state::{Label, PureState, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpticalElement {
    /// `R → (R+L)/√2`, `L → (R−L)/√2`.
    Qwp,
    /// `R → (R−L)/√2`, `L → (R+L)/√2`.
    Qwp1,
    /// `R → R`, `L → iL`.
    Wp,
    /// Circular polarizing beam splitter: `L` toggles the path, `R` keeps it.
    Cpbs,
}

impl OpticalElement {
    pub fn matrix(self) -> Operator {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let rows = match self {
            OpticalElement::Qwp => vec![h, h, h, -h],
            OpticalElement::Qwp1 => vec![h, h, -h, h],
            OpticalElement::Wp => vec![ONE, ZERO, ZERO, I],
            OpticalElement::Cpbs => {
                // (pol, path): R keeps the path, L toggles it.
                return Operator::from_columns(4, |col| {
                    let (p, m) = (col >> 1, col & 1);
                    vec![((p << 1) | (m ^ p), ONE)]
                });
            }
        };
        Operator::from_rows(rows).expect("2x2")
    }

    pub fn apply(self, state: &PureState, photon: &str) -> Result<PureState> {
        match self {
            OpticalElement::Cpbs => state.apply(&self.matrix(), &[Label::pol(photon), Label::path(photon)]),
            _ => state.apply(&self.matrix(), &[Label::pol(photon)]),
        }
    }
}

pub fn qwp(state: &PureState, photon: &str) -> Result<PureState> {
    OpticalElement::Qwp.apply(state, photon)
}

pub fn qwp1(state: &PureState, photon: &str) -> Result<PureState> {
    OpticalElement::Qwp1.apply(state, photon)
}

pub fn wp(state: &PureState, photon: &str) -> Result<PureState> {
    OpticalElement::Wp.apply(state, photon)
}

pub fn cpbs_route(state: &PureState, photon: &str) -> Result<PureState> {
    OpticalElement::Cpbs.apply(state, photon)
}

/// Applies `element` to each photon in turn.
pub fn apply_all(element: OpticalElement, state: &PureState, photons: &[&str]) -> Result<PureState> {
    photons.iter().try_fold(state.clone(), |st, p| element.apply(&st, p))
}

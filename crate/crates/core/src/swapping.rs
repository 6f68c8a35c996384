//! Hyperentanglement swapping across three GHZ triples.
//!
//! Triples `(1,4,5)`, `(2,6,7)` and `(3,8,9)` each start in `|Ψ_1^+>|Φ_1^+>`.
//! Projecting photons 1, 2, 3 onto a hyperentangled GHZ label leaves photons
//! 4..9 in the six-photon GHZ pair with the same indices and signs, each level
//! of photon `k` copied onto its two partners.

use std::fmt::Write as _;

use crate::error::Result;
use crate::exec::{DefaultExecutor, Executor};
use crate::ghz::{make_doubled_ghz, make_hyper_ghz, Classification, Sign};
use crate::state::{Kind, Label, PureState};

pub const NEAR: [&str; 3] = ["1", "2", "3"];
pub const REMOTE: [&str; 6] = ["4", "5", "6", "7", "8", "9"];
pub const TRIPLES: [[&str; 3]; 3] = [["1", "4", "5"], ["2", "6", "7"], ["3", "8", "9"]];

/// Canonical subsystem order of the network state: near polarizations and
/// paths, then remote polarizations and paths.
pub fn network_order() -> Vec<Label> {
    let mut order: Vec<Label> = NEAR.iter().map(|p| Label::pol(*p)).collect();
    order.extend(NEAR.iter().map(|p| Label::path(*p)));
    order.extend(REMOTE.iter().map(|p| Label::pol(*p)));
    order.extend(REMOTE.iter().map(|p| Label::path(*p)));
    order
}

/// Product of the three triples, 18 subsystems.
pub fn build_network_state() -> Result<PureState> {
    let seed = Classification::new(1, Sign::Plus, 1, Sign::Plus);
    let mut st = make_hyper_ghz(seed, &TRIPLES[0])?;
    for t in &TRIPLES[1..] {
        st = st.tensor(&make_hyper_ghz(seed, t)?)?;
    }
    st.reorder(&network_order())
}

/// Six-photon GHZ state of one degree of freedom on photons 4..9.
pub fn six_photon_ghz(kind: Kind, index: usize, sign: Sign) -> Result<PureState> {
    make_doubled_ghz(kind, index, sign, &REMOTE)
}

/// Expected remote state for `label`.
pub fn expected_remote(label: Classification) -> Result<PureState> {
    six_photon_ghz(Kind::Polarization, label.pol_index, label.pol_sign)?
        .tensor(&six_photon_ghz(Kind::Path, label.spat_index, label.spat_sign)?)
}

#[derive(Clone, Debug)]
pub struct Projection {
    pub probability: f64,
    /// Normalized remote state; `None` when the branch has zero weight.
    pub remote: Option<PureState>,
}

/// Projects photons 1, 2, 3 onto `label`.
pub fn project_123(network: &PureState, label: Classification) -> Result<Projection> {
    let bra = make_hyper_ghz(label, &NEAR)?;
    let rest = network.partial_inner(&bra)?;
    let probability = rest.norm_sqr();
    let remote = if probability > 0.0 { Some(rest.normalized()?) } else { None };
    Ok(Projection { probability, remote })
}

/// Purity of the polarization marginal of a remote state; 1 when the two
/// degrees of freedom factorize.
pub fn dof_purity(remote: &PureState) -> Result<f64> {
    let mut order: Vec<Label> = REMOTE.iter().map(|p| Label::pol(*p)).collect();
    order.extend(REMOTE.iter().map(|p| Label::path(*p)));
    let st = remote.reorder(&order)?;
    let d = 1usize << REMOTE.len();
    let a = st.amplitudes();
    // ρ = M M†, purity = Σ |ρ_xy|^2
    let mut purity = 0.0;
    for x in 0..d {
        for y in 0..d {
            let rho: num_complex::Complex64 = (0..d).map(|k| a[x * d + k] * a[y * d + k].conj()).sum();
            purity += rho.norm_sqr();
        }
    }
    Ok(purity)
}

#[derive(Clone, Debug)]
pub struct SwapRow {
    pub label: Classification,
    pub probability: f64,
    pub remote_fidelity: f64,
    pub dof_purity: f64,
}

impl SwapRow {
    pub fn passes(&self) -> bool {
        (self.remote_fidelity - 1.0).abs() <= 1e-9
            && (self.probability - 1.0 / 64.0).abs() <= 1e-12
            && (self.dof_purity - 1.0).abs() <= 1e-9
    }
}

#[derive(Clone, Debug)]
pub struct SwapReport {
    pub rows: Vec<SwapRow>,
}

impl SwapReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(SwapRow::passes)
    }

    pub fn failures(&self) -> Vec<&SwapRow> {
        self.rows.iter().filter(|r| !r.passes()).collect()
    }

    /// `label,probability,remote_fidelity` with nine decimals.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,probability,remote_fidelity\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{:.9},{:.9}", r.label, r.probability, r.remote_fidelity);
        }
        s
    }
}

pub fn verify_swap_table_with<E: Executor>() -> Result<SwapReport> {
    let network = build_network_state()?;
    let labels = Classification::all(3);
    let rows = E::map(&labels, |&label| -> Result<SwapRow> {
        let p = project_123(&network, label)?;
        let (fid, pur) = match &p.remote {
            Some(r) => (r.fidelity(&expected_remote(label)?)?, dof_purity(r)?),
            None => (0.0, 0.0),
        };
        Ok(SwapRow { label, probability: p.probability, remote_fidelity: fid, dof_purity: pur })
    });
    Ok(SwapReport { rows: rows.into_iter().collect::<Result<_>>()? })
}

pub fn verify_swap_table() -> Result<SwapReport> {
    verify_swap_table_with::<DefaultExecutor>()
}

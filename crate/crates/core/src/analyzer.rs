//! Complete analyzer for hyperentangled GHZ states of `n` photons.
//!
//! Stage 1 swaps the polarization and spatial-mode GHZ classes and stores the
//! relation between their signs in spin 1. Quarter-wave plates then bring the
//! polarization into a form whose sign is a parity, which stage 2 (π/2 plates
//! and the single-sided unit) writes onto spin 2. A final set of quarter-wave
//! plates restores GHZ form so that computational readout of polarization and
//! path reveals both class indices.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cavity::{
    physical_double_sided_interaction, single_sided_interaction, Incidence, InteractionMode, PhysicalCoeffs,
};
use crate::error::{Error, Result};
use crate::exec::{DefaultExecutor, Executor};
use crate::ghz::{class_of, make_hyper_ghz, Classification, Sign};
use crate::operator::Operator;
use crate::optics::{apply_all, OpticalElement};
use crate::state::{Basis, Label, PureState};

pub const SPIN1: &str = "1";
pub const SPIN2: &str = "2";

/// Tolerance for the spin `|+>` preconditions.
pub const PREP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinResult {
    Plus,
    Minus,
    PlusPrime,
    MinusPrime,
}

impl SpinResult {
    pub fn from_outcome(basis: Basis, bit: u8) -> Self {
        match (basis, bit) {
            (Basis::PlusMinusPrime, 0) => SpinResult::PlusPrime,
            (Basis::PlusMinusPrime, _) => SpinResult::MinusPrime,
            (_, 0) => SpinResult::Plus,
            _ => SpinResult::Minus,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            SpinResult::Plus | SpinResult::PlusPrime => 0,
            SpinResult::Minus | SpinResult::MinusPrime => 1,
        }
    }
}

impl fmt::Display for SpinResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinResult::Plus => "+",
            SpinResult::Minus => "-",
            SpinResult::PlusPrime => "+'",
            SpinResult::MinusPrime => "-'",
        })
    }
}

/// Raw measurement record of one analyzer run. Polarization bits are 0 = R,
/// 1 = L; path bits are 0 = mode 1, 1 = mode 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnalysisRecord {
    pub spin1: SpinResult,
    pub spin2: SpinResult,
    pub pol: Vec<u8>,
    pub path: Vec<u8>,
}

impl AnalysisRecord {
    pub fn pol_string(&self) -> String {
        self.pol.iter().map(|b| if *b == 0 { 'R' } else { 'L' }).collect()
    }

    pub fn path_string(&self) -> String {
        self.path.iter().map(|b| char::from(b'1' + b)).collect()
    }
}

impl fmt::Display for AnalysisRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spin1={}", self.spin1)?;
        writeln!(f, "spin2={}", self.spin2)?;
        writeln!(f, "pol={}", self.pol_string())?;
        write!(f, "path={}", self.path_string())
    }
}

/// Flat key-value block for a record and its decoded label.
pub fn report_block(record: &AnalysisRecord, c: &Classification) -> String {
    format!(
        "{record}\ni={}\npol_sign={}\nj={}\nspat_sign={}",
        c.pol_index, c.pol_sign, c.spat_index, c.spat_sign
    )
}

/// How stage 1 is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage1 {
    /// Explicit unitary built from the class-swap contract.
    Contract,
    /// One double-sided interaction per photon with the path as the
    /// propagation direction.
    Primitive,
}

/// Measurement basis for spin 2 with `n` photons.
pub fn spin2_basis(n: usize) -> Basis {
    if n % 2 == 1 {
        Basis::PlusMinusPrime
    } else {
        Basis::PlusMinus
    }
}

/// Spin-2 outcome bit that signals a `+` polarization sign after stage 1.
/// Spin 2 ends in `|↑> + i^{-n}|↓>` for sign `+`.
fn spin2_plus_bit(n: usize) -> u8 {
    match n % 4 {
        0 | 3 => 0,
        _ => 1,
    }
}

/// Output of the stage-1 contract for input `label` with spin 1 in `|+>`:
/// the swapped label and the spin-1 outcome bit (1 = `|->`).
pub fn stage1_image(label: Classification, n: usize) -> (Classification, u8) {
    let (s, t) = (label.pol_sign, label.spat_sign);
    let out = Classification::new(label.spat_index, t.times_parity(n), label.pol_index, s.times_parity(n));
    let minus = s.mul(t) == Sign::Plus.times_parity(n + 1);
    (out, minus as u8)
}

/// Lookup table from records to labels.
#[derive(Clone, Debug)]
pub struct Decoder {
    n: usize,
    table: Vec<Classification>,
}

impl Decoder {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(1 << (2 * n + 2));
        for key in 0..1usize << (2 * n + 2) {
            let s1 = (key >> (2 * n + 1)) & 1;
            let s2 = (key >> (2 * n)) & 1;
            let pol = (key >> n) & ((1 << n) - 1);
            let path = key & ((1 << n) - 1);
            let post = if s2 as u8 == spin2_plus_bit(n) { Sign::Plus } else { Sign::Minus };
            let t = post.times_parity(n);
            let st = if s1 == 1 { Sign::Plus.times_parity(n + 1) } else { Sign::Plus.times_parity(n) };
            let s = t.mul(st);
            table.push(Classification::new(class_of(path, n), s, class_of(pol, n), t));
        }
        Self { n, table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn key(&self, r: &AnalysisRecord) -> usize {
        let n = self.n;
        let bits = |v: &[u8]| v.iter().fold(0usize, |acc, b| (acc << 1) | (*b as usize & 1));
        ((r.spin1.bit() as usize) << (2 * n + 1))
            | ((r.spin2.bit() as usize) << (2 * n))
            | (bits(&r.pol) << n)
            | bits(&r.path)
    }

    pub fn decode(&self, r: &AnalysisRecord) -> Classification {
        self.table[self.key(r)]
    }

    pub fn entries(&self) -> &[Classification] {
        &self.table
    }
}

/// One nonzero outcome branch of an exhaustive analyzer run.
#[derive(Clone, Debug)]
pub struct BranchRecord {
    pub record: AnalysisRecord,
    pub probability: f64,
    pub decoded: Classification,
}

/// Exhaustive result for one input label.
#[derive(Clone, Debug)]
pub struct InputReport {
    pub label: Classification,
    pub branches: usize,
    pub total_probability: f64,
    pub correct_probability: f64,
}

impl InputReport {
    pub fn passes(&self, tol: f64) -> bool {
        (self.correct_probability - 1.0).abs() <= tol && (self.total_probability - 1.0).abs() <= tol
    }
}

#[derive(Clone, Debug)]
pub struct Hgsa {
    photons: Vec<String>,
    mode: InteractionMode,
    stage1: Stage1,
    contract: Option<Operator>,
    decoder: Decoder,
}

impl Hgsa {
    /// Ideal analyzer on photons `A, B, C, ...`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_photons(&default_photons(n)?, Stage1::Contract, InteractionMode::Ideal)
    }

    /// Ideal analyzer using the primitive stage 1.
    pub fn primitive(n: usize) -> Result<Self> {
        Self::with_photons(&default_photons(n)?, Stage1::Primitive, InteractionMode::Ideal)
    }

    /// Analyzer with lossy cavity units; stage 1 is always primitive.
    pub fn physical(n: usize, coeffs: PhysicalCoeffs) -> Result<Self> {
        Self::with_photons(&default_photons(n)?, Stage1::Primitive, InteractionMode::Physical(coeffs))
    }

    pub fn with_photons(photons: &[String], stage1: Stage1, mode: InteractionMode) -> Result<Self> {
        let n = photons.len();
        if n < 2 {
            return Err(Error::Precondition(format!("analyzer needs at least 2 photons, got {n}")));
        }
        let stage1 = if matches!(mode, InteractionMode::Physical(_)) { Stage1::Primitive } else { stage1 };
        let contract = match stage1 {
            Stage1::Contract => Some(stage1_contract(n)),
            Stage1::Primitive => None,
        };
        Ok(Self { photons: photons.to_vec(), mode, stage1, contract, decoder: Decoder::new(n) })
    }

    pub fn n(&self) -> usize {
        self.photons.len()
    }

    pub fn photons(&self) -> Vec<&str> {
        self.photons.iter().map(|s| s.as_str()).collect()
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn stage1_kind(&self) -> Stage1 {
        self.stage1
    }

    /// Labels the stage-1 contract acts on, in operator bit order.
    pub fn stage1_labels(&self) -> Vec<Label> {
        let mut l: Vec<Label> = self.photons.iter().map(Label::pol).collect();
        l.extend(self.photons.iter().map(Label::path));
        l.push(Label::spin(SPIN1));
        l
    }

    pub fn stage1_swap(&self, state: &PureState) -> Result<PureState> {
        require_plus(state, SPIN1)?;
        match &self.contract {
            Some(u) => state.apply(u, &self.stage1_labels()),
            None => {
                let c = self.mode.double();
                self.photons.iter().try_fold(state.clone(), |st, p| {
                    physical_double_sided_interaction(&st, p, &Label::path(p.as_str()), SPIN1, &c)
                })
            }
        }
    }

    pub fn stage2_phase(&self, state: &PureState) -> Result<PureState> {
        require_plus(state, SPIN2)?;
        let c = self.mode.single();
        self.photons.iter().try_fold(state.clone(), |st, p| {
            let st = OpticalElement::Wp.apply(&st, p)?;
            single_sided_interaction(&st, p, SPIN2, &c, Incidence::Down)
        })
    }

    /// Input through both stages, before any measurement; spins attached.
    pub fn evolve(&self, input: &PureState) -> Result<PureState> {
        let photons = self.photons();
        let st = input.tensor(&PureState::plus(Label::spin(SPIN1)))?;
        let st = self.stage1_swap(&st)?;
        let st = apply_all(OpticalElement::Qwp, &st, &photons)?;
        let st = st.tensor(&PureState::plus(Label::spin(SPIN2)))?;
        self.stage2_phase(&st)
    }

    fn readout_plan(&self) -> (Vec<Label>, Vec<Basis>) {
        let n = self.n();
        let mut labels = vec![Label::spin(SPIN1), Label::spin(SPIN2)];
        labels.extend(self.photons.iter().map(Label::pol));
        labels.extend(self.photons.iter().map(Label::path));
        let mut bases = vec![Basis::PlusMinus, spin2_basis(n)];
        bases.extend(std::iter::repeat_n(Basis::Computational, 2 * n));
        (labels, bases)
    }

    fn record_from(&self, outcomes: &[u8]) -> AnalysisRecord {
        let n = self.n();
        AnalysisRecord {
            spin1: SpinResult::from_outcome(Basis::PlusMinus, outcomes[0]),
            spin2: SpinResult::from_outcome(spin2_basis(n), outcomes[1]),
            pol: outcomes[2..2 + n].to_vec(),
            path: outcomes[2 + n..2 + 2 * n].to_vec(),
        }
    }

    /// Seeded single-shot run.
    pub fn run(&self, input: &PureState, seed: u64) -> Result<(AnalysisRecord, Classification)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (labels, bases) = self.readout_plan();
        let mut st = self.evolve(input)?;
        let mut outcomes = Vec::with_capacity(labels.len());
        for (k, (label, basis)) in labels.iter().zip(&bases).enumerate() {
            if k == 2 {
                st = apply_all(OpticalElement::Qwp, &st, &self.photons())?;
            }
            let m = st.measure_with(label, *basis, &mut rng)?;
            outcomes.push(m.result);
            st = m.post_state;
        }
        let record = self.record_from(&outcomes);
        let c = self.decoder.decode(&record);
        Ok((record, c))
    }

    /// Every outcome branch with its probability and decoded label.
    pub fn enumerate(&self, input: &PureState) -> Result<Vec<BranchRecord>> {
        let st = apply_all(OpticalElement::Qwp, &self.evolve(input)?, &self.photons())?;
        let (labels, bases) = self.readout_plan();
        Ok(st
            .enumerate_outcomes(&labels, &bases)?
            .into_iter()
            .map(|b| {
                let record = self.record_from(&b.outcomes);
                let decoded = self.decoder.decode(&record);
                BranchRecord { record, probability: b.probability, decoded }
            })
            .collect())
    }

    pub fn input_state(&self, label: Classification) -> Result<PureState> {
        make_hyper_ghz(label, &self.photons())
    }

    pub fn report(&self, label: Classification) -> Result<InputReport> {
        let branches = self.enumerate(&self.input_state(label)?)?;
        Ok(InputReport {
            label,
            branches: branches.len(),
            total_probability: branches.iter().map(|b| b.probability).sum(),
            correct_probability: branches.iter().filter(|b| b.decoded == label).map(|b| b.probability).sum(),
        })
    }

    /// Exhaustive check over all `4^n` labels.
    pub fn verify_all_with<E: Executor>(&self) -> Result<Vec<InputReport>> {
        let labels = Classification::all(self.n());
        E::map(&labels, |l| self.report(*l)).into_iter().collect()
    }

    pub fn verify_all(&self) -> Result<Vec<InputReport>> {
        self.verify_all_with::<DefaultExecutor>()
    }
}

fn default_photons(n: usize) -> Result<Vec<String>> {
    if !(2..=26).contains(&n) {
        return Err(Error::Precondition(format!("photon count {n} outside 2..=26")));
    }
    Ok((0..n).map(|k| char::from(b'A' + k as u8).to_string()).collect())
}

fn require_plus(state: &PureState, spin: &str) -> Result<()> {
    let label = Label::spin(spin);
    if !state.contains(&label) {
        return Err(Error::Precondition(format!("spin {spin} absent")));
    }
    let leak = state.leakage(&label, Basis::PlusMinus, 0)?;
    if leak > PREP_TOL * state.norm_sqr().max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition(format!("spin {spin} not in |+> (weight {leak:.3e} on |->)")));
    }
    Ok(())
}

/// Stage-1 unitary on `pol(photons) ⊗ path(photons) ⊗ spin 1`, mapping
/// `|Ψ_i^s>|Φ_j^t>|±>` to the swapped classes with the spin flipped when the
/// relation bit is set.
pub fn stage1_contract(n: usize) -> Operator {
    let photons: Vec<String> = (0..n).map(|k| char::from(b'A' + k as u8).to_string()).collect();
    let refs: Vec<&str> = photons.iter().map(|s| s.as_str()).collect();
    let dim = 1usize << (2 * n + 1);
    let mut u = Operator::zeros(dim);
    for label in Classification::all(n) {
        let (out, flip) = stage1_image(label, n);
        let a = make_hyper_ghz(label, &refs).expect("valid label");
        let b = make_hyper_ghz(out, &refs).expect("valid label");
        for spin in 0..2u8 {
            let ket = with_spin(&b, spin ^ flip);
            let bra = with_spin(&a, spin);
            u.add_outer(&ket, &bra, C64::new(1.0, 0.0));
        }
    }
    u
}

fn with_spin(st: &PureState, bit: u8) -> Vec<C64> {
    let v = Basis::PlusMinus.vector(bit);
    st.amplitudes().iter().flat_map(|a| [a * v[0], a * v[1]]).collect()
}

fn default_hgsa() -> &'static Hgsa {
    static H: OnceLock<Hgsa> = OnceLock::new();
    H.get_or_init(|| Hgsa::new(3).expect("three photons"))
}

/// Stage 1 on photons A, B, C with spin 1.
pub fn stage1_swap(state: &PureState) -> Result<PureState> {
    default_hgsa().stage1_swap(state)
}

/// Stage 2 on photons A, B, C with spin 2.
pub fn stage2_phase(state: &PureState) -> Result<PureState> {
    default_hgsa().stage2_phase(state)
}

/// Full three-photon analysis of `input` with a seeded sampler.
pub fn run_hgsa(input: &PureState, seed: u64) -> Result<(AnalysisRecord, Classification)> {
    default_hgsa().run(input, seed)
}

/// Three-photon decode table lookup.
pub fn decode(record: &AnalysisRecord) -> Classification {
    default_hgsa().decoder.decode(record)
}

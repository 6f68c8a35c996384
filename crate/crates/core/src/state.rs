//! Dense state vectors over labeled two-level subsystems.
//!
//! Basis order is fixed for every kind: polarization (R, L), path (1, 2),
//! spin (up, down). The first label in a state is the most significant bit
//! of the amplitude index.

use std::fmt;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator::Operator;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Probability below which a branch is dropped during enumeration.
pub const BRANCH_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Polarization,
    Path,
    Spin,
}

/// A two-level subsystem: one degree of freedom of one photon, or one spin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub kind: Kind,
    pub owner: String,
}

impl Label {
    pub fn new(kind: Kind, owner: impl Into<String>) -> Self {
        Self { kind, owner: owner.into() }
    }

    pub fn pol(owner: impl Into<String>) -> Self {
        Self::new(Kind::Polarization, owner)
    }

    pub fn path(owner: impl Into<String>) -> Self {
        Self::new(Kind::Path, owner)
    }

    pub fn spin(owner: impl Into<String>) -> Self {
        Self::new(Kind::Spin, owner)
    }

    fn level_name(&self, bit: usize) -> String {
        match self.kind {
            Kind::Polarization => ["R", "L"][bit].to_string(),
            Kind::Path => {
                let o = self.owner.to_lowercase();
                if o.ends_with(|c: char| c.is_ascii_digit()) {
                    format!("{o}.{}", bit + 1)
                } else {
                    format!("{o}{}", bit + 1)
                }
            }
            Kind::Spin => ["↑", "↓"][bit].to_string(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Polarization => "pol",
            Kind::Path => "path",
            Kind::Spin => "spin",
        };
        write!(f, "{k}[{}]", self.owner)
    }
}

/// Single-qubit measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{|0>, |1>}`.
    Computational,
    /// `{(|0> + |1>)/√2, (|0> - |1>)/√2}`.
    PlusMinus,
    /// `{(|0> + i|1>)/√2, (|0> - i|1>)/√2}`.
    PlusMinusPrime,
}

impl Basis {
    /// Basis vector for outcome `result` (0 or 1).
    pub fn vector(self, result: u8) -> [C64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = if result == 0 { 1.0 } else { -1.0 };
        match self {
            Basis::Computational => {
                if result == 0 {
                    [ONE, ZERO]
                } else {
                    [ZERO, ONE]
                }
            }
            Basis::PlusMinus => [C64::new(h, 0.0), C64::new(s * h, 0.0)],
            Basis::PlusMinusPrime => [C64::new(h, 0.0), C64::new(0.0, s * h)],
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub subsystem: Label,
    pub basis: Basis,
    pub result: u8,
    /// Squared norm of the projected component.
    pub probability: f64,
    /// Renormalized projection.
    pub post_state: PureState,
}

/// One branch of an exhaustive measurement.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcomes: Vec<u8>,
    pub probability: f64,
    pub post_state: PureState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    labels: Vec<Label>,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(labels: Vec<Label>, amps: Vec<C64>) -> Result<Self> {
        check_distinct(&labels)?;
        let expected = 1usize << labels.len();
        if amps.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amps.len() });
        }
        Ok(Self { labels, amps })
    }

    /// Computational basis state; `bits[k]` is the level of `labels[k]`.
    pub fn basis(labels: Vec<Label>, bits: &[u8]) -> Result<Self> {
        if bits.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), got: bits.len() });
        }
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        let mut amps = vec![ZERO; 1 << labels.len()];
        amps[idx] = ONE;
        Self::new(labels, amps)
    }

    /// Single subsystem with amplitudes `(a0, a1)`.
    pub fn qubit(label: Label, a0: C64, a1: C64) -> Self {
        Self { labels: vec![label], amps: vec![a0, a1] }
    }

    /// Spin prepared in `(|↑> + |↓>)/√2`.
    pub fn plus(label: Label) -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::qubit(label, h, h)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn num_subsystems(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.labels.contains(label)
    }

    pub fn position(&self, label: &Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownSubsystem(label.clone()))
    }

    fn shift(&self, pos: usize) -> usize {
        self.labels.len() - 1 - pos
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { labels: self.labels.clone(), amps: self.amps.iter().map(|a| a * s).collect() }
    }

    /// `self ⊗ other`; labels of `self` come first.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_distinct(&labels)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { labels, amps })
    }

    /// Applies `op` to the listed subsystems (first target is the operator's
    /// most significant bit), identity elsewhere.
    pub fn apply(&self, op: &Operator, targets: &[Label]) -> Result<Self> {
        let k = targets.len();
        if op.dim() != 1 << k {
            return Err(Error::DimensionMismatch { expected: 1 << k, got: op.dim() });
        }
        check_distinct(targets)?;
        let shifts = targets
            .iter()
            .map(|t| self.position(t).map(|p| self.shift(p)))
            .collect::<Result<Vec<_>>>()?;
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|m| {
                (0..k).fold(0, |acc, j| acc | (((m >> (k - 1 - j)) & 1) << shifts[j]))
            })
            .collect();
        let mask = offsets[offsets.len() - 1];

        let mut out = vec![ZERO; self.amps.len()];
        let mut local = vec![ZERO; 1 << k];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (m, off) in offsets.iter().enumerate() {
                local[m] = self.amps[base | off];
            }
            if local.iter().all(|a| *a == ZERO) {
                continue;
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, l) in local.iter().enumerate() {
                    acc += op.get(r, c) * l;
                }
                out[base | off] = acc;
            }
        }
        Ok(Self { labels: self.labels.clone(), amps: out })
    }

    /// Same state with subsystems permuted into `order`.
    pub fn reorder(&self, order: &[Label]) -> Result<Self> {
        if order.len() != self.labels.len() {
            return Err(Error::DimensionMismatch { expected: self.labels.len(), got: order.len() });
        }
        check_distinct(order)?;
        let n = order.len();
        let src_shift = order
            .iter()
            .map(|l| self.position(l).map(|p| self.shift(p)))
            .collect::<Result<Vec<_>>>()?;
        let mut amps = vec![ZERO; self.amps.len()];
        for (dst, slot) in amps.iter_mut().enumerate() {
            let mut src = 0;
            for (j, s) in src_shift.iter().enumerate() {
                src |= ((dst >> (n - 1 - j)) & 1) << s;
            }
            *slot = self.amps[src];
        }
        Ok(Self { labels: order.to_vec(), amps })
    }

    /// `<self|other>`; `other` is reordered to match if needed.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        let other = if other.labels == self.labels { other.clone() } else { other.reorder(&self.labels)? };
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<a|b>|^2 / (<a|a><b|b>)`; equality up to global phase gives 1.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        let na = self.norm_sqr();
        let nb = other.norm_sqr();
        if na == 0.0 || nb == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.inner(other)?.norm_sqr() / (na * nb))
    }

    /// Largest amplitude distance after aligning subsystem order.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        let other = other.reorder(&self.labels)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Unnormalized projection of one subsystem onto a basis vector; the
    /// subsystem is kept in the state.
    pub fn project(&self, label: &Label, basis: Basis, result: u8) -> Result<Self> {
        let shift = self.shift(self.position(label)?);
        let v = basis.vector(result);
        let mut amps = vec![ZERO; self.amps.len()];
        for base in 0..self.amps.len() {
            if base >> shift & 1 == 1 {
                continue;
            }
            let hi = base | (1 << shift);
            let overlap = v[0].conj() * self.amps[base] + v[1].conj() * self.amps[hi];
            amps[base] = v[0] * overlap;
            amps[hi] = v[1] * overlap;
        }
        Ok(Self { labels: self.labels.clone(), amps })
    }

    /// Contracts the subsystems of `bra` against this state: returns
    /// `(<bra| ⊗ 1)|self>` over the remaining subsystems in their original order.
    pub fn partial_inner(&self, bra: &PureState) -> Result<Self> {
        let rest: Vec<Label> = self.labels.iter().filter(|l| !bra.labels.contains(l)).cloned().collect();
        let mut order = bra.labels.clone();
        order.extend(rest.iter().cloned());
        let aligned = self.reorder(&order)?;
        let rdim = 1usize << rest.len();
        let mut amps = vec![ZERO; rdim];
        for (k, b) in bra.amps.iter().enumerate() {
            if *b == ZERO {
                continue;
            }
            let bc = b.conj();
            let row = &aligned.amps[k * rdim..(k + 1) * rdim];
            for (o, a) in amps.iter_mut().zip(row) {
                *o += bc * a;
            }
        }
        Ok(Self { labels: rest, amps })
    }

    /// Projects one subsystem and drops it from the state (unnormalized).
    pub fn project_out(&self, label: &Label, basis: Basis, result: u8) -> Result<Self> {
        let v = basis.vector(result);
        self.partial_inner(&PureState::qubit(label.clone(), v[0], v[1]))
    }

    /// Samples a projective measurement with a generator seeded from `seed`.
    pub fn measure(&self, label: &Label, basis: Basis, seed: u64) -> Result<MeasurementOutcome> {
        self.measure_with(label, basis, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn measure_with<R: Rng + ?Sized>(
        &self,
        label: &Label,
        basis: Basis,
        rng: &mut R,
    ) -> Result<MeasurementOutcome> {
        let total = self.norm_sqr();
        if total == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let p0 = self.project(label, basis, 0)?;
        let prob0 = p0.norm_sqr();
        let u: f64 = rng.gen::<f64>() * total;
        let (result, projected, probability) = if u < prob0 {
            (0, p0, prob0)
        } else {
            let p1 = self.project(label, basis, 1)?;
            let prob1 = p1.norm_sqr();
            (1, p1, prob1)
        };
        Ok(MeasurementOutcome {
            subsystem: label.clone(),
            basis,
            result,
            probability,
            post_state: projected.normalized()?,
        })
    }

    /// Every outcome branch of measuring `labels` in `bases`, in lexicographic
    /// outcome order, dropping branches with probability at or below
    /// [`BRANCH_CUTOFF`].
    pub fn enumerate_outcomes(&self, labels: &[Label], bases: &[Basis]) -> Result<Vec<Branch>> {
        if labels.len() != bases.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), got: bases.len() });
        }
        check_distinct(labels)?;
        if self.norm_sqr() == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut frontier = vec![(Vec::new(), self.clone())];
        for (label, &basis) in labels.iter().zip(bases) {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for (outs, st) in frontier {
                for r in 0..2u8 {
                    let p = st.project(label, basis, r)?;
                    if p.norm_sqr() > BRANCH_CUTOFF {
                        let mut o = outs.clone();
                        o.push(r);
                        next.push((o, p));
                    }
                }
            }
            frontier = next;
        }
        frontier
            .into_iter()
            .map(|(outcomes, st)| {
                let probability = st.norm_sqr();
                Ok(Branch { outcomes, probability, post_state: st.normalized()? })
            })
            .collect()
    }

    /// Squared norm of the component where `label` is orthogonal to `basis`
    /// outcome `result`.
    pub fn leakage(&self, label: &Label, basis: Basis, result: u8) -> Result<f64> {
        Ok(self.project(label, basis, 1 - result)?.norm_sqr())
    }
}

fn check_distinct(labels: &[Label]) -> Result<()> {
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(Error::DuplicateSubsystem(l.clone()));
        }
    }
    Ok(())
}

fn fmt_coeff(c: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    let num = |x: f64| {
        let s = format!("{:.6}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => num(re),
        (true, false) => format!("{}i", num(im)),
        (false, false) => format!("({}{}{}i)", num(re), if im < 0.0 { "-" } else { "+" }, num(im.abs())),
    }
}

impl fmt::Display for PureState {
    /// Writes kets grouped by owner, e.g. `0.5|R a1⟩|R b1⟩|R c1⟩ + …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut owners: Vec<(&str, bool)> = Vec::new();
        for l in &self.labels {
            let is_spin = l.kind == Kind::Spin;
            if !owners.iter().any(|(o, s)| *o == l.owner && *s == is_spin) {
                owners.push((&l.owner, is_spin));
            }
        }
        let n = self.labels.len();
        let mut first = true;
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            let mut coeff = fmt_coeff(*a);
            if !first {
                if let Some(rest) = coeff.strip_prefix('-') {
                    write!(f, " - ")?;
                    coeff = rest.to_string();
                } else {
                    write!(f, " + ")?;
                }
            }
            first = false;
            write!(f, "{coeff}")?;
            for (owner, is_spin) in &owners {
                let parts: Vec<String> = self
                    .labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| l.owner == *owner && (l.kind == Kind::Spin) == *is_spin)
                    .map(|(p, l)| l.level_name((idx >> (n - 1 - p)) & 1))
                    .collect();
                if *is_spin {
                    write!(f, "|{}⟩{}", parts.join(" "), owner)?;
                } else {
                    write!(f, "|{}⟩", parts.join(" "))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

//! GHZ-family constructors for polarization, spatial-mode and hyperentangled states.
//!
//! For `n` photons the index `i` in `1..=2^(n-1)` names a parity class: bit
//! `m` of `i - 1` (most significant first) is whether photon `m + 1` differs
//! from photon 0. Each class holds a ket and its complement. The ket with
//! fewer flipped levels is written first (ties go to the one starting in
//! level 0) and `|first> ± |second>` gives sign `±`. For three photons this
//! reproduces `RRR/LLL`, `RRL/LLR`, `RLR/LRL`, `LRR/RLL`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::{Kind, Label, PureState, ZERO};

pub const PHOTONS3: [&str; 3] = ["A", "B", "C"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_factor(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `self` times `(-1)^k`.
    pub fn times_parity(self, k: usize) -> Sign {
        if k % 2 == 0 {
            self
        } else {
            self.flip()
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "+" | "p" | "plus" => Ok(Sign::Plus),
            "-" | "m" | "minus" => Ok(Sign::Minus),
            _ => Err(()),
        }
    }
}

/// Label of a hyperentangled GHZ state `|Ψ_i^±>_P ⊗ |Φ_j^±>_S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Classification {
    pub pol_index: usize,
    pub pol_sign: Sign,
    pub spat_index: usize,
    pub spat_sign: Sign,
}

impl Classification {
    pub fn new(pol_index: usize, pol_sign: Sign, spat_index: usize, spat_sign: Sign) -> Self {
        Self { pol_index, pol_sign, spat_index, spat_sign }
    }

    /// All `4^n` labels for `n` photons in lexicographic order.
    pub fn all(n: usize) -> Vec<Classification> {
        let m = class_count(n);
        let mut out = Vec::with_capacity(4 * m * m);
        for i in 1..=m {
            for s in Sign::BOTH {
                for j in 1..=m {
                    for t in Sign::BOTH {
                        out.push(Classification::new(i, s, j, t));
                    }
                }
            }
        }
        out
    }

    /// Parses `i:sign:j:sign` and checks indices against `n` photons.
    pub fn parse(text: &str, n: usize) -> Result<Classification> {
        let bad = || Error::MalformedLabel(text.to_string());
        let parts: Vec<&str> = text.trim().split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let i: usize = parts[0].parse().map_err(|_| bad())?;
        let s: Sign = parts[1].parse().map_err(|_| bad())?;
        let j: usize = parts[2].parse().map_err(|_| bad())?;
        let t: Sign = parts[3].parse().map_err(|_| bad())?;
        let max = class_count(n);
        for idx in [i, j] {
            if idx == 0 || idx > max {
                return Err(Error::IndexOutOfRange { index: idx, max });
            }
        }
        Ok(Classification::new(i, s, j, t))
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.pol_index, self.pol_sign, self.spat_index, self.spat_sign)
    }
}

/// Number of parity classes for `n` photons.
pub fn class_count(n: usize) -> usize {
    1 << (n - 1)
}

/// Parity class (1-based) of an `n`-bit pattern, bit 0 of the pattern being
/// the last photon.
pub fn class_of(bits: usize, n: usize) -> usize {
    let first = (bits >> (n - 1)) & 1;
    let rel = if first == 1 { !bits & ((1 << n) - 1) } else { bits };
    rel + 1
}

/// The two kets `(first, second)` of class `index` for `n` photons.
pub fn class_kets(index: usize, n: usize) -> Result<(usize, usize)> {
    let max = class_count(n);
    if n < 2 {
        return Err(Error::Precondition(format!("GHZ states need at least 2 photons, got {n}")));
    }
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { index, max });
    }
    let x = index - 1;
    let xc = !x & ((1 << n) - 1);
    let (wx, wc) = (x.count_ones(), xc.count_ones());
    Ok(if wc < wx { (xc, x) } else { (x, xc) })
}

fn ghz_on(labels: Vec<Label>, first: usize, second: usize, sign: Sign) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 1 << labels.len()];
    amps[first] += C64::new(h, 0.0);
    amps[second] += C64::new(sign.factor() * h, 0.0);
    PureState::new(labels, amps).expect("labels are distinct by construction")
}

fn labels_for(kind: Kind, photons: &[&str]) -> Result<Vec<Label>> {
    let labels: Vec<Label> = photons.iter().map(|p| Label::new(kind, *p)).collect();
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(Error::DuplicateSubsystem(l.clone()));
        }
    }
    Ok(labels)
}

/// `|Ψ_i^±>` over the polarizations of `photons`.
pub fn make_pol_ghz(index: usize, sign: Sign, photons: &[&str]) -> Result<PureState> {
    let (a, b) = class_kets(index, photons.len())?;
    Ok(ghz_on(labels_for(Kind::Polarization, photons)?, a, b, sign))
}

/// `|Φ_j^±>` over the paths of `photons`.
pub fn make_spatial_ghz(index: usize, sign: Sign, photons: &[&str]) -> Result<PureState> {
    let (a, b) = class_kets(index, photons.len())?;
    Ok(ghz_on(labels_for(Kind::Path, photons)?, a, b, sign))
}

/// `|Ψ_i^±>_P ⊗ |Φ_j^±>_S`, polarizations first.
pub fn make_hyper_ghz(label: Classification, photons: &[&str]) -> Result<PureState> {
    make_pol_ghz(label.pol_index, label.pol_sign, photons)?
        .tensor(&make_spatial_ghz(label.spat_index, label.spat_sign, photons)?)
}

/// GHZ state on `2k` photons obtained by repeating each level of the
/// `k`-photon class `index` on a consecutive photon pair.
pub fn make_doubled_ghz(kind: Kind, index: usize, sign: Sign, photons: &[&str]) -> Result<PureState> {
    if photons.len() % 2 != 0 {
        return Err(Error::Precondition("doubled GHZ needs an even photon count".into()));
    }
    let k = photons.len() / 2;
    let (a, b) = class_kets(index, k)?;
    let double = |x: usize| (0..k).fold(0, |acc, m| {
        let bit = (x >> (k - 1 - m)) & 1;
        (acc << 2) | (bit * 3)
    });
    Ok(ghz_on(labels_for(kind, photons)?, double(a), double(b), sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kets(index: usize, n: usize) -> (String, String) {
        let (a, b) = class_kets(index, n).unwrap();
        let s = |x: usize| (0..n).map(|m| if (x >> (n - 1 - m)) & 1 == 0 { 'R' } else { 'L' }).collect();
        (s(a), s(b))
    }

    #[test]
    fn three_photon_patterns() {
        assert_eq!(kets(1, 3), ("RRR".into(), "LLL".into()));
        assert_eq!(kets(2, 3), ("RRL".into(), "LLR".into()));
        assert_eq!(kets(3, 3), ("RLR".into(), "LRL".into()));
        assert_eq!(kets(4, 3), ("LRR".into(), "RLL".into()));
    }

    #[test]
    fn two_photon_patterns() {
        assert_eq!(kets(1, 2), ("RR".into(), "LL".into()));
        assert_eq!(kets(2, 2), ("RL".into(), "LR".into()));
    }

    #[test]
    fn class_of_inverts_class_kets() {
        for n in 2..=5 {
            for i in 1..=class_count(n) {
                let (a, b) = class_kets(i, n).unwrap();
                assert_eq!(class_of(a, n), i);
                assert_eq!(class_of(b, n), i);
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(make_pol_ghz(5, Sign::Plus, &PHOTONS3).unwrap_err(), Error::IndexOutOfRange { index: 5, max: 4 });
        assert!(make_pol_ghz(0, Sign::Plus, &PHOTONS3).is_err());
    }

    #[test]
    fn parse_labels() {
        let c = Classification::parse("2:-:3:+", 3).unwrap();
        assert_eq!(c, Classification::new(2, Sign::Minus, 3, Sign::Plus));
        assert_eq!(c.to_string(), "2:-:3:+");
        assert_eq!(Classification::parse("9:+:1:+", 3).unwrap_err(), Error::IndexOutOfRange { index: 9, max: 4 });
        assert!(matches!(Classification::parse("1:+:1", 3), Err(Error::MalformedLabel(_))));
        assert!(matches!(Classification::parse("1:x:1:+", 3), Err(Error::MalformedLabel(_))));
    }

    #[test]
    fn doubled_patterns() {
        let st = make_doubled_ghz(Kind::Polarization, 2, Sign::Plus, &["4", "5", "6", "7", "8", "9"]).unwrap();
        let a = st.amplitudes();
        // RRRRLL and LLLLRR
        assert!(a[0b000011].re > 0.7 && a[0b111100].re > 0.7);
    }
}

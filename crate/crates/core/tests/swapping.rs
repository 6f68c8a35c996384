use hyperghz::exec::Sequential;
use hyperghz::ghz::{make_hyper_ghz, make_pol_ghz, make_spatial_ghz, Classification, Sign};
use hyperghz::state::{Kind, Label, PureState};
use hyperghz::swapping::{
    build_network_state, dof_purity, expected_remote, network_order, project_123, six_photon_ghz,
    verify_swap_table, verify_swap_table_with, NEAR, REMOTE, TRIPLES,
};
use num_complex::Complex64 as C64;

const POL6: [(&str, &str); 4] =
    [("RRRRRR", "LLLLLL"), ("RRRRLL", "LLLLRR"), ("RRLLRR", "LLRRLL"), ("LLRRRR", "RRLLLL")];
const PATH6: [(&str, &str); 4] =
    [("111111", "222222"), ("111122", "222211"), ("112211", "221122"), ("221111", "112222")];

fn labels(kind: Kind, photons: &[&str]) -> Vec<Label> {
    photons.iter().map(|p| Label::new(kind, *p)).collect()
}

fn written(kind: Kind, (a, b): (&str, &str), sign: Sign) -> PureState {
    let ls = labels(kind, &REMOTE);
    let idx = |k: &str| k.chars().fold(0, |acc, c| (acc << 1) | matches!(c, 'L' | '2') as usize);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 64];
    amps[idx(a)] = C64::new(h, 0.0);
    amps[idx(b)] = C64::new(sign.factor() * h, 0.0);
    PureState::new(ls, amps).unwrap()
}

fn sum(states: Vec<PureState>) -> PureState {
    let mut it = states.into_iter();
    let first = it.next().unwrap();
    let mut amps = first.amplitudes().to_vec();
    for s in it {
        let s = s.reorder(first.labels()).unwrap();
        for (a, b) in amps.iter_mut().zip(s.amplitudes()) {
            *a += b;
        }
    }
    PureState::new(first.labels().to_vec(), amps).unwrap()
}

#[test]
fn six_photon_bases_match_written_kets() {
    for i in 1..=4 {
        for s in Sign::BOTH {
            let p = six_photon_ghz(Kind::Polarization, i, s).unwrap();
            assert!(p.max_abs_diff(&written(Kind::Polarization, POL6[i - 1], s)).unwrap() < 1e-15);
            let q = six_photon_ghz(Kind::Path, i, s).unwrap();
            assert!(q.max_abs_diff(&written(Kind::Path, PATH6[i - 1], s)).unwrap() < 1e-15);
        }
    }
}

#[test]
fn six_photon_bases_are_orthonormal() {
    for kind in [Kind::Polarization, Kind::Path] {
        let states: Vec<PureState> =
            (1..=4).flat_map(|i| Sign::BOTH.map(|s| six_photon_ghz(kind, i, s).unwrap())).collect();
        for (a, x) in states.iter().enumerate() {
            for (b, y) in states.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((x.inner(y).unwrap() - want).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn network_state_support() {
    let st = build_network_state().unwrap();
    assert_eq!(st.dim(), 1 << 18);
    assert_eq!(st.labels(), network_order().as_slice());
    assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
    let nonzero: Vec<&C64> = st.amplitudes().iter().filter(|a| a.norm() > 1e-12).collect();
    assert_eq!(nonzero.len(), 64);
    for a in nonzero {
        assert!((a.norm() - 0.125).abs() < 1e-12);
    }
}

#[test]
fn first_triple_is_the_seed_state() {
    let st = build_network_state().unwrap();
    let seed = Classification::new(1, Sign::Plus, 1, Sign::Plus);
    let rest = st.partial_inner(&make_hyper_ghz(seed, &TRIPLES[0]).unwrap()).unwrap();
    assert!((rest.norm_sqr() - 1.0).abs() < 1e-12);
}

/// The network equals `1/8 Σ |Ψ_i^s>_123 |Ψ_i^s>_remote ⊗ Σ |Φ_j^t>_123 |Φ_j^t>_remote`.
#[test]
fn network_expansion_identity() {
    let mut pol_terms = Vec::new();
    let mut path_terms = Vec::new();
    for i in 1..=4 {
        for s in Sign::BOTH {
            let near = make_pol_ghz(i, s, &NEAR).unwrap();
            pol_terms.push(near.tensor(&written(Kind::Polarization, POL6[i - 1], s)).unwrap());
            let near = make_spatial_ghz(i, s, &NEAR).unwrap();
            path_terms.push(near.tensor(&written(Kind::Path, PATH6[i - 1], s)).unwrap());
        }
    }
    let expansion = sum(pol_terms)
        .tensor(&sum(path_terms))
        .unwrap()
        .scaled(C64::new(0.125, 0.0))
        .reorder(&network_order())
        .unwrap();
    let st = build_network_state().unwrap();
    assert!(st.max_abs_diff(&expansion).unwrap() < 1e-10);
}

#[test]
fn projection_examples() {
    let st = build_network_state().unwrap();
    for label in [Classification::new(1, Sign::Plus, 1, Sign::Plus), Classification::new(2, Sign::Minus, 3, Sign::Plus)] {
        let p = project_123(&st, label).unwrap();
        assert!((p.probability - 1.0 / 64.0).abs() < 1e-12);
        let remote = p.remote.unwrap();
        assert!((remote.norm_sqr() - 1.0).abs() < 1e-12);
        let want = six_photon_ghz(Kind::Polarization, label.pol_index, label.pol_sign)
            .unwrap()
            .tensor(&six_photon_ghz(Kind::Path, label.spat_index, label.spat_sign).unwrap())
            .unwrap();
        assert!((remote.fidelity(&want).unwrap() - 1.0).abs() < 1e-9);
        assert!((remote.fidelity(&expected_remote(label).unwrap()).unwrap() - 1.0).abs() < 1e-9);
        assert!((dof_purity(&remote).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn entangled_remote_state_is_not_pure_per_dof() {
    // a state correlating the two DOFs has purity 1/2 on each
    let a = expected_remote(Classification::new(1, Sign::Plus, 1, Sign::Plus)).unwrap();
    let b = expected_remote(Classification::new(2, Sign::Minus, 3, Sign::Plus)).unwrap();
    let mixed = sum(vec![a, b]).normalized().unwrap();
    assert!((dof_purity(&mixed).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn swap_table() {
    let report = verify_swap_table().unwrap();
    assert_eq!(report.rows.len(), 64);
    assert!(report.all_pass(), "{:?}", report.failures());
    let total: f64 = report.rows.iter().map(|r| r.probability).sum();
    assert!((total - 1.0).abs() < 1e-9);

    let csv = report.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(lines[0], "label,probability,remote_fidelity");
    assert_eq!(lines[1], "1:+:1:+,0.015625000,1.000000000");
    for l in &lines[1..] {
        assert!(l.ends_with(",0.015625000,1.000000000"), "{l}");
    }

    let seq = verify_swap_table_with::<Sequential>().unwrap();
    assert_eq!(seq.to_csv(), csv);
}

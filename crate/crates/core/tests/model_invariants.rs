//! Grid-checked invariants of the three model families.

use entord_core::bcs::{self, BcsMode, BcsModel, GapTriple, PairAmplitudes};
use entord_core::bh::{self, CltVariant, MottSpec, SuperfluidSpec};
use entord_core::eta::{self, DickeSpec, FillingRatio};
use entord_core::measures;
use entord_core::tensor::{self, ComplexVector, MultipartiteShape};

fn gap_model(deltas: &[f64]) -> BcsModel {
    let modes = deltas
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let eps = -1.0 + 0.7 * i as f64;
            BcsMode::from_gap(format!("m{i}"), GapTriple::new(d, eps, 0.1).unwrap(), 0.0).unwrap()
        })
        .collect();
    BcsModel::new(modes).unwrap()
}

#[test]
fn bcs_total_increases_in_each_gap() {
    let base = [0.3, 1.2, 0.05];
    let grid: Vec<f64> = (0..40).map(|i| 0.025 * f64::from(i)).collect();
    for slot in 0..base.len() {
        let mut prev = f64::NEG_INFINITY;
        for &d in &grid {
            let mut deltas = base;
            deltas[slot] = d;
            let total = bcs::bcs_log_negativity_total(&gap_model(&deltas));
            assert!(total > prev, "slot {slot} delta {d}");
            prev = total;
        }
    }
}

#[test]
fn hartree_fock_limit_is_separable() {
    for flags in 0u32..64 {
        let modes = (0..6)
            .map(|i| {
                let p = if flags >> i & 1 == 1 {
                    PairAmplitudes::new(1.0, 0.0)
                } else {
                    PairAmplitudes::new(0.0, 1.0)
                };
                BcsMode::from_amplitudes(format!("m{i}"), p.unwrap(), 0.0)
            })
            .collect();
        assert_eq!(
            bcs::bcs_log_negativity_total(&BcsModel::new(modes).unwrap()),
            0.0
        );
    }
    // zero gap on either side of the Fermi level
    for eps in [-2.0, 2.0] {
        let m = BcsMode::from_gap("k", GapTriple::new(0.0, eps, 0.0).unwrap(), 0.0).unwrap();
        assert_eq!(
            bcs::bcs_log_negativity_total(&BcsModel::new(vec![m]).unwrap()),
            0.0
        );
    }
}

#[test]
fn eta_weight_is_twice_the_correlator_exactly() {
    for n in 2..=12u64 {
        for k in 0..=n {
            let s = DickeSpec::new(n, k).unwrap();
            let rdm = eta::eta_two_site_rdm_exact(&s).unwrap();
            let (num, den) = eta::odlro_pair_correlator_exact(&s).unwrap();
            assert_eq!(rdm.psi_plus * den, 2 * num * rdm.denominator, "n={n} k={k}");
        }
    }
}

#[test]
fn alpha_approaches_its_limit() {
    for r in [0.1, 0.25, 0.5, 0.7, 0.9] {
        let fr = FillingRatio::new(r).unwrap();
        for n in [2u64, 3, 5, 10, 33, 100, 1000, 10_000, 1_000_000] {
            let k = (r * n as f64).floor() as u64;
            let a = eta::alpha_order_parameter(&DickeSpec::new(n, k).unwrap()).unwrap();
            let gap = (a - eta::alpha_from_r(fr)).abs();
            assert!(gap <= 2.0 / n as f64, "r={r} n={n} gap={gap}");
        }
    }
}

#[test]
fn density_relation_on_the_grid() {
    for i in 0..=10 {
        let alpha = f64::from(i) / 10.0;
        let a = eta::de_from_alpha_paper(alpha).unwrap();
        let b = measures::eof_from_concurrence(alpha.sqrt()).unwrap();
        assert!((a - b).abs() <= 1e-12, "alpha={alpha}");
    }
}

#[test]
fn log_asymptote_gap_shrinks() {
    let rows = eta::dicke_asymptotics_report(
        FillingRatio::new(0.5).unwrap(),
        &[100, 1000, 10_000, 100_000],
    )
    .unwrap();
    let gaps: Vec<f64> = rows
        .iter()
        .map(|r| (r.lrg - r.log_asymptote.unwrap()).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 0.01);
    assert!(rows[3].lrg_per_site < 1e-4);
}

#[test]
fn superfluid_negativity_grows_with_atoms() {
    for m in 2..=6u64 {
        let mut prev = 0.0;
        for n in 1..=50u64 {
            let v = bh::superfluid_negativity_exact(&SuperfluidSpec::new(n, m).unwrap());
            assert!(v > prev, "M={m} N={n}");
            prev = v;
        }
    }
}

#[test]
fn corrected_clt_error_shrinks() {
    let rel = |n: u64| {
        let s = SuperfluidSpec::new(n, 2).unwrap();
        let exact = bh::superfluid_negativity_exact(&s);
        let clt = bh::superfluid_negativity_clt(&s, CltVariant::Corrected)
            .unwrap()
            .value;
        ((clt - exact) / exact).abs()
    };
    assert!(rel(10_000) < 0.01);
    let errs: Vec<f64> = [10u64, 100, 1000, 10_000, 100_000]
        .iter()
        .map(|&n| rel(n))
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn exact_negativity_tends_to_poisson() {
    let poisson = bh::superfluid_negativity_poisson_limit(1.0).unwrap();
    let exact = bh::superfluid_negativity_exact(&SuperfluidSpec::new(1024, 1024).unwrap());
    assert!(((exact - poisson) / poisson).abs() < 0.02);
    let mut prev = f64::INFINITY;
    for n in [4u64, 16, 64, 256, 1024] {
        let gap =
            (bh::superfluid_negativity_exact(&SuperfluidSpec::new(n, n).unwrap()) - poisson).abs();
        assert!(gap < prev);
        prev = gap;
    }
}

#[test]
fn mott_states_are_unentangled() {
    for (sites, filling) in [(2, 1), (3, 1), (3, 2), (4, 1), (2, 3)] {
        let (psi, shape) =
            bh::mott_state_vector(&MottSpec::uniform(sites, filling).unwrap()).unwrap();
        for m in 0..sites {
            let (v, split) = tensor::bipartition(&psi, &shape, &[m]).unwrap();
            assert!(measures::negativity(&v.projector(), split).unwrap() <= 1e-12);
        }
    }
    // non-number local states are still products
    let local = ComplexVector::from_real(&[0.6, 0.0, 0.8]).unwrap();
    let spec = MottSpec::new(vec![
        local.clone(),
        ComplexVector::from_real(&[0.0, 1.0]).unwrap(),
        local,
    ])
    .unwrap();
    let (psi, shape) = bh::mott_state_vector(&spec).unwrap();
    assert_eq!(shape, MultipartiteShape::new(vec![3, 2, 3]).unwrap());
    for m in 0..3 {
        let (v, split) = tensor::bipartition(&psi, &shape, &[m]).unwrap();
        assert!(measures::negativity(&v.projector(), split).unwrap() <= 1e-12);
    }
}

#[test]
fn superfluid_correlators() {
    for n in 1..=5u64 {
        for m in 1..=4u64 {
            let s = SuperfluidSpec::new(n, m).unwrap();
            let (num, den) = bh::bh_odlro_correlator_exact(&s).unwrap();
            assert_eq!(num * u128::from(m), den * u128::from(n), "N={n} M={m}");
            let state = bh::superfluid_state_vector(&s).unwrap();
            for site in 0..m as usize {
                assert!(state.annihilation_expectation(site).unwrap().norm() <= 1e-12);
            }
            for i in 0..m as usize {
                for j in 0..m as usize {
                    if i != j {
                        let hop = state.hopping_expectation(i, j).unwrap();
                        assert!(
                            (hop.re - bh::bh_odlro_correlator(&s)).abs() < 1e-12
                                && hop.im.abs() < 1e-15
                        );
                    }
                }
            }
        }
    }
}

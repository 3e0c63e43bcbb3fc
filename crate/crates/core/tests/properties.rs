use entord_core::bcs::{self, GapTriple, PairAmplitudes};
use entord_core::bh::{self, SuperfluidSpec};
use entord_core::eta::{self, DickeSpec};
use entord_core::measures::{self, OptimizerConfig};
use entord_core::tensor::{
    self, BipartiteShape, ComplexMatrix, ComplexVector, MultipartiteShape, SchmidtSpectrum,
    Subsystem,
};
use entord_core::C64;
use proptest::prelude::*;

fn complex_entries(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn pure_state(len: usize) -> impl Strategy<Value = ComplexVector> {
    complex_entries(len)
        .prop_filter("nonzero", |v| {
            v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
        })
        .prop_map(|v| ComplexVector::new(v).unwrap().normalized().unwrap())
}

/// Random mixed state of dimension `d`: `G G† / tr`.
fn density(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_entries(d * d).prop_map(move |g| {
        let g = ComplexMatrix::new(d, d, g).unwrap();
        let rho = g.matmul(&g.adjoint()).unwrap();
        let tr = rho.trace().re;
        rho.scale(C64::new(1.0 / tr, 0.0))
    })
}

/// Unitary from Gram-Schmidt on random columns.
fn unitary(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_entries(d * d).prop_map(move |g| {
        let mut cols: Vec<Vec<C64>> = (0..d)
            .map(|j| (0..d).map(|i| g[i * d + j]).collect())
            .collect();
        for j in 0..d {
            for k in 0..j {
                let proj: C64 = (0..d).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                let basis = cols[k].clone();
                for (x, b) in cols[j].iter_mut().zip(&basis) {
                    *x -= proj * b;
                }
            }
            let n = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in &mut cols[j] {
                *z /= n;
            }
        }
        let data = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| cols[j][i])
            .collect();
        ComplexMatrix::new(d, d, data).unwrap()
    })
}

fn schmidt_coefficients(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, d).prop_map(|v| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_undoes_kron(
        (da, db, rho, sigma) in (2usize..5, 2usize..5).prop_flat_map(|(a, b)| (Just(a), Just(b), density(a), density(b)))
    ) {
        let joint = tensor::kron(&rho, &sigma);
        let shape = MultipartiteShape::new(vec![da, db]).unwrap();
        let back = tensor::partial_trace(&joint, &shape, &[0]).unwrap();
        prop_assert!(back.max_abs_diff(&rho) < 1e-12);
        let other = tensor::partial_trace(&joint, &shape, &[1]).unwrap();
        prop_assert!(other.max_abs_diff(&sigma) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution_and_keeps_trace(rho in density(6), a_first in any::<bool>()) {
        let (shape, which) = if a_first {
            (BipartiteShape::new(2, 3).unwrap(), Subsystem::A)
        } else {
            (BipartiteShape::new(3, 2).unwrap(), Subsystem::B)
        };
        let once = tensor::partial_transpose(&rho, shape, which).unwrap();
        let twice = tensor::partial_transpose(&once, shape, which).unwrap();
        prop_assert_eq!(&twice, &rho);
        prop_assert!((once.trace() - rho.trace()).norm() < 1e-12);
        prop_assert!(once.is_hermitian(1e-15));
    }

    #[test]
    fn schmidt_coefficients_are_normalized(psi in pure_state(12)) {
        let s = tensor::schmidt_decompose(&psi, BipartiteShape::new(3, 4).unwrap()).unwrap();
        let total: f64 = s.coefficients().iter().map(|x| x * x).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(s.coefficients().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn transpose_spectrum_of_schmidt_state(
        (d, lambdas, u, v) in (2usize..=6).prop_flat_map(|d| (Just(d), schmidt_coefficients(d), unitary(d), unitary(d)))
    ) {
        let mut amps = vec![C64::new(0.0, 0.0); d * d];
        for (i, l) in lambdas.iter().enumerate() {
            amps[i * d + i] = C64::new(*l, 0.0);
        }
        let psi = ComplexVector::new(amps).unwrap();
        let local = tensor::kron(&u, &v);
        let rotated = local.apply(&psi).unwrap();
        let shape = BipartiteShape::new(d, d).unwrap();
        let pt = tensor::partial_transpose(&rotated.projector(), shape, Subsystem::B).unwrap();
        let got = tensor::hermitian_eigenvalues(&pt).unwrap();
        let mut expected: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
        for i in 0..d {
            for j in i + 1..d {
                expected.push(lambdas[i] * lambdas[j]);
                expected.push(-lambdas[i] * lambdas[j]);
            }
        }
        expected.sort_by(f64::total_cmp);
        prop_assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            prop_assert!((g - e).abs() < 1e-9, "{} vs {}", g, e);
        }
    }

    #[test]
    fn schmidt_negativity_equals_transpose_negativity(
        (da, db, psi) in (2usize..=6, 2usize..=6).prop_flat_map(|(a, b)| (Just(a), Just(b), pure_state(a * b)))
    ) {
        let shape = BipartiteShape::new(da, db).unwrap();
        let s = tensor::schmidt_decompose(&psi, shape).unwrap();
        let via_pt = measures::negativity(&psi.projector(), shape).unwrap();
        prop_assert!((measures::pure_negativity_from_schmidt(&s) - via_pt).abs() < 1e-9);
    }

    #[test]
    fn pair_negativity_is_uv(theta in 0.0f64..std::f64::consts::FRAC_PI_2) {
        let (u, v) = (theta.cos(), theta.sin());
        let rho = ComplexVector::from_real(&[u, 0.0, 0.0, v]).unwrap().projector();
        let n = measures::negativity(&rho, BipartiteShape::new(2, 2).unwrap()).unwrap();
        prop_assert!((n - u * v).abs() < 1e-10);
    }

    #[test]
    fn log_negativity_is_additive(thetas in prop::collection::vec(0.0f64..std::f64::consts::FRAC_PI_2, 1..=3)) {
        let pairs: Vec<ComplexVector> = thetas
            .iter()
            .map(|t| ComplexVector::from_real(&[t.cos(), 0.0, 0.0, t.sin()]).unwrap())
            .collect();
        let single: f64 = pairs
            .iter()
            .map(|p| measures::log_negativity(&p.projector(), BipartiteShape::new(2, 2).unwrap()).unwrap())
            .sum();
        let mut joint = ComplexVector::from_real(&[1.0]).unwrap();
        for p in &pairs {
            joint = joint.kron(p).unwrap();
        }
        let parties = MultipartiteShape::qubits(2 * pairs.len()).unwrap();
        let firsts: Vec<usize> = (0..pairs.len()).map(|i| 2 * i).collect();
        let (v, shape) = tensor::bipartition(&joint, &parties, &firsts).unwrap();
        let total = measures::log_negativity(&v.projector(), shape).unwrap();
        prop_assert!((total - single).abs() < 1e-9);
    }

    #[test]
    fn binary_entropy_is_symmetric(x in 0.5f64..=1.0) {
        // 1 - x is exact on [0.5, 1], so both calls see the same pair.
        prop_assert_eq!(measures::binary_entropy(x).unwrap(), measures::binary_entropy(1.0 - x).unwrap());
    }

    #[test]
    fn gap_round_trip(delta in 0.0f64..10.0, xi in -10.0f64..10.0, mu in -3.0f64..3.0) {
        prop_assume!(delta > 0.0 || xi != 0.0);
        let g = GapTriple::new(delta, xi + mu, mu).unwrap();
        let p = bcs::uv_from_gap(&g).unwrap();
        let ratio = g.gap_ratio().unwrap();
        prop_assert!((bcs::gap_ratio_from_uv(&p) - ratio).abs() < 1e-10);
        prop_assert!(((1.0 + ratio).log2() - (1.0 + 2.0 * p.u() * p.v()).log2()).abs() < 1e-12);
        prop_assert!(PairAmplitudes::new(p.u(), p.v()).is_ok());
    }

    #[test]
    fn dicke_particle_hole_symmetry(n in 1u64..100_000, frac in 0.0f64..=1.0) {
        let k = ((n as f64) * frac).floor() as u64;
        let a = eta::gme_dicke_closed_form(&DickeSpec::new(n, k).unwrap());
        let b = eta::gme_dicke_closed_form(&DickeSpec::new(n, n - k).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn density_relation_matches_concurrence_form(alpha in 0.0f64..=1.0) {
        let de = eta::de_from_alpha_paper(alpha).unwrap();
        let eof = measures::eof_from_concurrence(alpha.sqrt()).unwrap();
        prop_assert!((de - eof).abs() < 1e-12);
    }

    #[test]
    fn superfluid_two_routes(atoms in 1u64..400, sites in 1u64..50) {
        let s = SuperfluidSpec::new(atoms, sites).unwrap();
        let a = measures::pure_negativity_from_schmidt(&bh::superfluid_schmidt(&s));
        let b = bh::superfluid_negativity_exact(&s);
        prop_assert!((a - b).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn geometric_measure_ignores_subsystem_order(
        weights in complex_entries(4).prop_filter("nonzero", |w| w.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3),
        perm in prop::sample::select(vec![
            vec![0usize, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0],
        ]),
    ) {
        // symmetric input: a superposition of the four 3-qubit Dicke states
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        for k in 0..=3u64 {
            let d = eta::dicke_state_vector(&DickeSpec::new(3, k).unwrap()).unwrap();
            for (a, x) in amps.iter_mut().zip(d.entries()) {
                *a += weights[k as usize] * x;
            }
        }
        let psi = ComplexVector::new(amps).unwrap().normalized().unwrap();
        let shape = MultipartiteShape::qubits(3).unwrap();
        let cfg = OptimizerConfig::default();
        let a = measures::geometric_measure(&psi, &shape, &cfg).unwrap();
        let (q, qshape) = tensor::permute_subsystems(&psi, &shape, &perm).unwrap();
        let b = measures::geometric_measure(&q, &qshape, &cfg).unwrap();
        prop_assert!((a.bits - b.bits).abs() < 1e-8, "{} vs {}", a.bits, b.bits);
    }
}

#[test]
fn density_relation_is_exact_when_the_square_root_is() {
    for c in [0.0, 0.25, 0.5, 0.75, 0.625, 1.0] {
        let alpha: f64 = c * c;
        assert_eq!(alpha.sqrt(), c);
        assert_eq!(
            eta::de_from_alpha_paper(alpha).unwrap(),
            measures::eof_from_concurrence(c).unwrap()
        );
    }
}

#[test]
fn schmidt_spectrum_validation() {
    assert!(SchmidtSpectrum::new(vec![0.6, 0.6]).is_err());
    assert!(SchmidtSpectrum::new(vec![-0.6, 0.8]).is_err());
    let s = SchmidtSpectrum::new(vec![0.6, 0.8]).unwrap();
    assert_eq!(s.coefficients(), &[0.8, 0.6]);
}

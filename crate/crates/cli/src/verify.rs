//! Oracle and invariant checks behind `verify`.

use std::collections::BTreeMap;

use entord_core::bcs::{self, BcsMode, BcsModel, GapTriple, PairAmplitudes};
use entord_core::bh::{self, CltVariant, MottSpec, SuperfluidSpec};
use entord_core::eta::{self, DickeSpec, FillingRatio};
use entord_core::measures::{self, OptimizerConfig};
use entord_core::tensor::{
    self, BipartiteShape, ComplexMatrix, ComplexVector, MultipartiteShape, Subsystem,
};
use entord_core::{Result as CoreResult, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Bcs,
    Eta,
    Bh,
}

/// Tolerance keys with their defaults. `--tol key=value` overrides them.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("trace_kron", 1e-12),
    ("pt_involution", 0.0),
    ("pt_trace", 1e-12),
    ("schmidt_norm", 1e-10),
    ("pt_spectrum", 1e-9),
    ("pair_negativity", 1e-10),
    ("additivity", 1e-9),
    ("schmidt_negativity", 1e-9),
    ("entropy_symmetry", 0.0),
    ("gme_permutation", 1e-8),
    ("overlap_ceiling", 1e-12),
    ("overlap_floor", 1e-9),
    ("gme", 1e-6),
    ("fef", 1e-9),
    ("roundtrip", 1e-10),
    ("uv_equivalence", 1e-12),
    ("bcs_total", 1e-9),
    ("monotone", 0.0),
    ("separable", 0.0),
    ("rdm", 1e-12),
    ("rational", 0.0),
    ("alpha_limit", 2.0),
    ("density_relation", 1e-12),
    ("particle_hole", 0.0),
    ("log_asymptote", 0.01),
    ("per_site", 1e-4),
    ("bh_negativity", 1e-10),
    ("bh_schmidt", 1e-10),
    ("two_route", 1e-12),
    ("mott", 1e-12),
    ("annihilation", 1e-12),
    ("clt", 0.01),
    ("poisson", 0.02),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub key: &'static str,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tol
    }
}

/// Parses `key=value` overrides; unknown keys are usage errors.
pub fn parse_tolerances(items: &[String]) -> Result<BTreeMap<&'static str, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in items.iter().flat_map(|s| s.split(',')) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--tol '{item}' is not key=value")))?;
        let key = TOLERANCES
            .iter()
            .find(|(name, _)| *name == k.trim())
            .map(|(name, _)| *name)
            .ok_or_else(|| CliError::Usage(format!("unknown tolerance key '{k}'")))?;
        let v: f64 = v
            .trim()
            .parse()
            .ok()
            .filter(|x: &f64| *x >= 0.0 && x.is_finite())
            .ok_or_else(|| CliError::Usage(format!("bad tolerance '{v}' for {key}")))?;
        out.insert(key, v);
    }
    Ok(out)
}

struct Ctx<'a> {
    overrides: &'a BTreeMap<&'static str, f64>,
    cfg: OptimizerConfig,
    seed: u64,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn push(&mut self, name: &str, key: &'static str, error: f64) {
        let default = TOLERANCES
            .iter()
            .find(|(k, _)| *k == key)
            .expect("registered key")
            .1;
        let tol = self.overrides.get(key).copied().unwrap_or(default);
        self.checks.push(Check {
            name: name.into(),
            key,
            error,
            tol,
        });
    }

    /// Independent stream per check group.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

pub fn run_suite(
    suite: Suite,
    overrides: &BTreeMap<&'static str, f64>,
    cfg: OptimizerConfig,
) -> Result<Vec<Check>, CliError> {
    let mut ctx = Ctx {
        overrides,
        cfg,
        seed: cfg.seed,
        checks: Vec::new(),
    };
    if suite == Suite::All {
        tensor_checks(&mut ctx)?;
        measure_checks(&mut ctx)?;
    }
    if matches!(suite, Suite::All | Suite::Bcs) {
        bcs_checks(&mut ctx)?;
    }
    if matches!(suite, Suite::All | Suite::Eta) {
        eta_checks(&mut ctx)?;
    }
    if matches!(suite, Suite::All | Suite::Bh) {
        bh_checks(&mut ctx)?;
    }
    Ok(ctx.checks)
}

pub fn summary_json(suite: Suite, checks: &[Check]) -> Value {
    let list = checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), c.name.clone().into());
            m.insert("key".into(), c.key.into());
            m.insert("error".into(), Value::from(c.error));
            m.insert("tol".into(), Value::from(c.tol));
            m.insert("pass".into(), c.passed().into());
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    let name = match suite {
        Suite::All => "all",
        Suite::Bcs => "bcs",
        Suite::Eta => "eta",
        Suite::Bh => "bh",
    };
    m.insert("suite".into(), name.into());
    m.insert("passed".into(), checks.iter().all(Check::passed).into());
    m.insert("checks".into(), Value::Array(list));
    Value::Object(m)
}

fn random_entries(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn random_state(rng: &mut ChaCha8Rng, len: usize) -> CoreResult<ComplexVector> {
    ComplexVector::new(random_entries(rng, len))?.normalized()
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> CoreResult<ComplexMatrix> {
    let g = ComplexMatrix::new(d, d, random_entries(rng, d * d))?;
    let rho = g.matmul(&g.adjoint())?;
    let tr = rho.trace().re;
    Ok(rho.scale(C64::new(1.0 / tr, 0.0)))
}

fn pair_rho(u: f64, v: f64) -> ComplexMatrix {
    ComplexVector::from_real(&[u, 0.0, 0.0, v])
        .expect("4-dim")
        .projector()
}

fn two_qubits() -> BipartiteShape {
    BipartiteShape::new(2, 2).expect("2x2")
}

fn kron_all(vs: &[ComplexVector]) -> CoreResult<ComplexVector> {
    let mut joint = ComplexVector::from_real(&[1.0])?;
    for v in vs {
        joint = joint.kron(v)?;
    }
    Ok(joint)
}

/// Log-negativity across (even qubits) | (odd qubits) of a pair product.
fn joint_pair_log_negativity(pairs: &[ComplexVector]) -> CoreResult<f64> {
    let joint = kron_all(pairs)?;
    let parties = MultipartiteShape::qubits(2 * pairs.len())?;
    let firsts: Vec<usize> = (0..pairs.len()).map(|i| 2 * i).collect();
    let (v, shape) = tensor::bipartition(&joint, &parties, &firsts)?;
    measures::log_negativity(&v.projector(), shape)
}

/// Count of non-increasing steps.
fn violations(values: &[f64]) -> f64 {
    values
        .windows(2)
        .filter(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        .count() as f64
}

fn tensor_checks(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rng = ctx.rng(1);
    let (mut kron_err, mut inv_err, mut tr_err, mut norm_err, mut spec_err) =
        (0f64, 0f64, 0f64, 0f64, 0f64);
    for da in 2..=4 {
        for db in 2..=4 {
            let rho = random_density(&mut rng, da)?;
            let sigma = random_density(&mut rng, db)?;
            let shape = MultipartiteShape::new(vec![da, db])?;
            let back = tensor::partial_trace(&tensor::kron(&rho, &sigma), &shape, &[0])?;
            kron_err = kron_err.max(back.max_abs_diff(&rho));

            let joint = random_density(&mut rng, da * db)?;
            let bip = BipartiteShape::new(da, db)?;
            for which in [Subsystem::A, Subsystem::B] {
                let once = tensor::partial_transpose(&joint, bip, which)?;
                let twice = tensor::partial_transpose(&once, bip, which)?;
                inv_err = inv_err.max(twice.max_abs_diff(&joint));
                tr_err = tr_err.max((once.trace() - joint.trace()).norm());
            }

            let psi = random_state(&mut rng, da * db)?;
            let s = tensor::schmidt_decompose(&psi, bip)?;
            let total: f64 = s.coefficients().iter().map(|x| x * x).sum();
            norm_err = norm_err.max((total - 1.0).abs());
        }
    }
    for d in 2..=6 {
        let psi = random_state(&mut rng, d * d)?;
        let shape = BipartiteShape::new(d, d)?;
        let lambdas = tensor::schmidt_decompose(&psi, shape)?
            .coefficients()
            .to_vec();
        let mut expected: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
        for i in 0..lambdas.len() {
            for j in i + 1..lambdas.len() {
                expected.push(lambdas[i] * lambdas[j]);
                expected.push(-lambdas[i] * lambdas[j]);
            }
        }
        expected.resize(d * d, 0.0);
        expected.sort_by(f64::total_cmp);
        let got = tensor::hermitian_eigenvalues(&tensor::partial_transpose(
            &psi.projector(),
            shape,
            Subsystem::B,
        )?)?;
        for (g, e) in got.iter().zip(&expected) {
            spec_err = spec_err.max((g - e).abs());
        }
    }
    ctx.push("tensor.partial_trace_of_kron", "trace_kron", kron_err);
    ctx.push(
        "tensor.partial_transpose_involution",
        "pt_involution",
        inv_err,
    );
    ctx.push("tensor.partial_transpose_trace", "pt_trace", tr_err);
    ctx.push("tensor.schmidt_normalization", "schmidt_norm", norm_err);
    ctx.push(
        "tensor.pure_state_transpose_spectrum",
        "pt_spectrum",
        spec_err,
    );
    Ok(())
}

fn measure_checks(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rng = ctx.rng(2);
    let mut uv_err = 0f64;
    for _ in 0..200 {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let (u, v) = (theta.cos(), theta.sin());
        uv_err = uv_err.max((measures::negativity(&pair_rho(u, v), two_qubits())? - u * v).abs());
    }
    ctx.push("measures.pair_negativity_uv", "pair_negativity", uv_err);

    let mut add_err = 0f64;
    for factors in 1..=3 {
        let mut pairs = Vec::new();
        let mut single = 0.0;
        for _ in 0..factors {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
            let p = ComplexVector::from_real(&[theta.cos(), 0.0, 0.0, theta.sin()])?;
            single += measures::log_negativity(&p.projector(), two_qubits())?;
            pairs.push(p);
        }
        add_err = add_err.max((joint_pair_log_negativity(&pairs)? - single).abs());
    }
    ctx.push("measures.log_negativity_additivity", "additivity", add_err);

    let mut route_err = 0f64;
    for da in 2..=6 {
        for db in 2..=6 {
            let psi = random_state(&mut rng, da * db)?;
            let shape = BipartiteShape::new(da, db)?;
            let s = tensor::schmidt_decompose(&psi, shape)?;
            let pt = measures::negativity(&psi.projector(), shape)?;
            route_err = route_err.max((measures::pure_negativity_from_schmidt(&s) - pt).abs());
        }
    }
    ctx.push(
        "measures.schmidt_vs_transpose_negativity",
        "schmidt_negativity",
        route_err,
    );

    let mut sym_err = 0f64;
    for i in 0..=1000 {
        let x = 0.5 + 0.5 * f64::from(i) / 1000.0;
        sym_err =
            sym_err.max((measures::binary_entropy(x)? - measures::binary_entropy(1.0 - x)?).abs());
    }
    ctx.push(
        "measures.binary_entropy_symmetry",
        "entropy_symmetry",
        sym_err,
    );

    // symmetric 3-qubit inputs under every reordering of the parties
    let shape = MultipartiteShape::qubits(3)?;
    let dicke: Vec<ComplexVector> = (0..=3)
        .map(|k| eta::dicke_state_vector(&DickeSpec::new(3, k)?))
        .collect::<CoreResult<_>>()?;
    let mut perm_err = 0f64;
    for _ in 0..4 {
        let w = random_entries(&mut rng, 4);
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        for (wk, d) in w.iter().zip(&dicke) {
            for (a, x) in amps.iter_mut().zip(d.entries()) {
                *a += wk * x;
            }
        }
        let psi = ComplexVector::new(amps)?.normalized()?;
        let base = measures::geometric_measure(&psi, &shape, &ctx.cfg)?.bits;
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let (q, qs) = tensor::permute_subsystems(&psi, &shape, &perm)?;
            perm_err =
                perm_err.max((measures::geometric_measure(&q, &qs, &ctx.cfg)?.bits - base).abs());
        }
    }
    ctx.push(
        "measures.geometric_measure_permutation",
        "gme_permutation",
        perm_err,
    );

    let (mut ceiling, mut floor, mut gme_err) = (0f64, 0f64, 0f64);
    for n in 1..=8u64 {
        let qubits = MultipartiteShape::qubits(n as usize)?;
        for k in 1..=n {
            let s = DickeSpec::new(n, k)?;
            let gm = measures::geometric_measure(&eta::dicke_state_vector(&s)?, &qubits, &ctx.cfg)?;
            ceiling = ceiling.max(gm.overlap.overlap_sq - 1.0);
            floor = floor.max(eta::dicke_max_overlap(&s) - gm.overlap.overlap_sq);
            gme_err = gme_err.max((gm.bits - eta::gme_dicke_closed_form(&s)).abs());
        }
    }
    ctx.push("measures.overlap_at_most_one", "overlap_ceiling", ceiling);
    ctx.push(
        "measures.overlap_at_least_symmetric_ansatz",
        "overlap_floor",
        floor,
    );
    ctx.push("measures.dicke_optimizer_vs_closed_form", "gme", gme_err);

    let mut fef_err = 0f64;
    for (n, k, expected) in [(2u64, 1u64, 1.0), (4, 2, 2.0 / 3.0), (4, 1, 0.5)] {
        let rho = eta::eta_two_site_rdm(&DickeSpec::new(n, k)?)?.to_matrix();
        fef_err =
            fef_err.max((measures::fully_entangled_fraction(&rho, &ctx.cfg)? - expected).abs());
    }
    ctx.push("measures.fully_entangled_fraction_spots", "fef", fef_err);
    Ok(())
}

fn bcs_checks(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rng = ctx.rng(3);
    let (mut rt_err, mut uv_err) = (0f64, 0f64);
    for i in 0..10 {
        for j in 0..10 {
            let delta = 0.05 + 0.5 * f64::from(i);
            let xi = -4.5 + f64::from(j);
            let g = GapTriple::new(delta, xi + 0.3, 0.3)?;
            let p = bcs::uv_from_gap(&g)?;
            let ratio = delta / (xi * xi + delta * delta).sqrt();
            rt_err = rt_err.max((bcs::gap_ratio_from_uv(&p) - ratio).abs());
            uv_err = uv_err
                .max(((1.0 + g.gap_ratio()?).log2() - (1.0 + 2.0 * p.u() * p.v()).log2()).abs());
        }
    }
    ctx.push("bcs.gap_round_trip", "roundtrip", rt_err);
    ctx.push("bcs.log_negativity_gap_form", "uv_equivalence", uv_err);

    let mut total_err = 0f64;
    for modes in 1..=6usize {
        let list: Vec<BcsMode> = (0..modes)
            .map(|i| {
                let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
                let p = PairAmplitudes::new(theta.cos(), theta.sin())?;
                Ok(BcsMode::from_amplitudes(format!("m{i}"), p, 0.0))
            })
            .collect::<CoreResult<_>>()?;
        let model = BcsModel::new(list)?;
        let mut oracle = 0.0;
        for m in model.modes() {
            let p = m.amplitudes();
            oracle += measures::log_negativity(&pair_rho(p.u(), p.v()), two_qubits())?;
        }
        total_err = total_err.max((bcs::bcs_log_negativity_total(&model) - oracle).abs());
        if modes <= 3 {
            let pairs: Vec<ComplexVector> = model
                .modes()
                .iter()
                .map(|m| bcs::pair_state_vector(m.amplitudes()))
                .collect();
            total_err = total_err.max((joint_pair_log_negativity(&pairs)? - oracle).abs());
        }
    }
    ctx.push("bcs.total_vs_transpose_oracle", "bcs_total", total_err);

    let mut bad = 0.0;
    let base = [0.3, 1.2, 0.05];
    for slot in 0..base.len() {
        let mut series = Vec::new();
        for step in 0..40 {
            let mut deltas = base;
            deltas[slot] = 0.025 * f64::from(step);
            let modes = deltas
                .iter()
                .enumerate()
                .map(|(i, &d)| {
                    BcsMode::from_gap(
                        format!("m{i}"),
                        GapTriple::new(d, -1.0 + 0.7 * i as f64, 0.1)?,
                        0.0,
                    )
                })
                .collect::<CoreResult<Vec<_>>>()?;
            series.push(bcs::bcs_log_negativity_total(&BcsModel::new(modes)?));
        }
        bad += violations(&series);
    }
    ctx.push("bcs.monotone_in_gap", "monotone", bad);

    let mut hf = 0f64;
    for flags in 0u32..64 {
        let modes = (0..6)
            .map(|i| {
                let p = if flags >> i & 1 == 1 {
                    PairAmplitudes::new(1.0, 0.0)
                } else {
                    PairAmplitudes::new(0.0, 1.0)
                };
                Ok(BcsMode::from_amplitudes(format!("m{i}"), p?, 0.0))
            })
            .collect::<CoreResult<Vec<_>>>()?;
        hf = hf.max(bcs::bcs_log_negativity_total(&BcsModel::new(modes)?).abs());
    }
    ctx.push("bcs.hartree_fock_separable", "separable", hf);
    Ok(())
}

fn eta_checks(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rdm_err = 0f64;
    let mut rational_bad = 0.0;
    for n in 1..=12usize {
        let shape = MultipartiteShape::qubits(n)?;
        for k in 1..=n as u64 {
            let s = DickeSpec::new(n as u64, k)?;
            if n >= 2 {
                let psi = eta::dicke_state_vector(&s)?;
                let closed = eta::eta_two_site_rdm(&s)?.to_matrix();
                for (i, j) in eta::site_pairs(n) {
                    let oracle = tensor::reduced_density_from_pure(&psi, &shape, &[i, j])?;
                    rdm_err = rdm_err.max(oracle.max_abs_diff(&closed));
                }
                let exact = eta::eta_two_site_rdm_exact(&s)?;
                let (num, den) = eta::odlro_pair_correlator_exact(&s)?;
                if exact.psi_plus * den != 2 * num * exact.denominator {
                    rational_bad += 1.0;
                }
            }
        }
    }
    ctx.push("eta.rdm_vs_partial_trace", "rdm", rdm_err);
    ctx.push(
        "eta.psi_plus_weight_is_twice_correlator",
        "rational",
        rational_bad,
    );

    let mut gme_err = 0f64;
    for n in 1..=8u64 {
        let qubits = MultipartiteShape::qubits(n as usize)?;
        for k in 1..=n {
            let s = DickeSpec::new(n, k)?;
            let gm = measures::geometric_measure(&eta::dicke_state_vector(&s)?, &qubits, &ctx.cfg)?;
            gme_err = gme_err.max((gm.bits - eta::gme_dicke_closed_form(&s)).abs());
        }
    }
    for (n, k, v) in [
        (2u64, 1u64, 1.0),
        (3, 1, (9.0f64 / 4.0).log2()),
        (4, 2, (8.0f64 / 3.0).log2()),
    ] {
        gme_err = gme_err.max((eta::gme_dicke_closed_form(&DickeSpec::new(n, k)?) - v).abs());
    }
    ctx.push("eta.closed_form_gme_vs_optimizer", "gme", gme_err);

    // gap scaled by n, so the bound gap <= 2/n reads error <= 2
    let mut scaled = 0f64;
    for r in [0.1, 0.25, 0.5, 0.7, 0.9] {
        let fr = FillingRatio::new(r)?;
        for n in [2u64, 3, 5, 10, 33, 100, 1000, 10_000, 1_000_000] {
            let k = (r * n as f64).floor() as u64;
            let a = eta::alpha_order_parameter(&DickeSpec::new(n, k)?)?;
            scaled = scaled.max((a - eta::alpha_from_r(fr)).abs() * n as f64);
        }
    }
    ctx.push("eta.alpha_limit_gap_times_n", "alpha_limit", scaled);

    let mut de_err = 0f64;
    for i in 0..=10 {
        let alpha = f64::from(i) / 10.0;
        de_err = de_err.max(
            (eta::de_from_alpha_paper(alpha)? - measures::eof_from_concurrence(alpha.sqrt())?)
                .abs(),
        );
    }
    ctx.push(
        "eta.density_relation_vs_concurrence",
        "density_relation",
        de_err,
    );

    let mut ph = 0f64;
    for n in 1..=200u64 {
        for k in 0..=n {
            let a = eta::gme_dicke_closed_form(&DickeSpec::new(n, k)?);
            let b = eta::gme_dicke_closed_form(&DickeSpec::new(n, n - k)?);
            ph = ph.max((a - b).abs());
        }
    }
    ctx.push("eta.particle_hole_symmetry", "particle_hole", ph);

    let rows =
        eta::dicke_asymptotics_report(FillingRatio::new(0.5)?, &[100, 1000, 10_000, 100_000])?;
    let gaps: Vec<f64> = rows
        .iter()
        .map(|r| (r.lrg - r.log_asymptote.expect("r = 1/2")).abs())
        .collect();
    let reversed: Vec<f64> = gaps.iter().rev().copied().collect();
    ctx.push("eta.log_asymptote_gap_at_1e5", "log_asymptote", gaps[3]);
    ctx.push(
        "eta.log_asymptote_gap_shrinks",
        "monotone",
        violations(&reversed),
    );
    ctx.push("eta.lrg_per_site_at_1e5", "per_site", rows[3].lrg_per_site);
    Ok(())
}

fn bh_checks(ctx: &mut Ctx) -> Result<(), CliError> {
    let (mut neg_err, mut svd_err, mut route_err, mut ann_err) = (0f64, 0f64, 0f64, 0f64);
    let mut rational_bad = 0.0;
    for n in 1..=5u64 {
        for m in 1..=4u64 {
            let s = SuperfluidSpec::new(n, m)?;
            let exact = bh::superfluid_negativity_exact(&s);
            let closed_schmidt = bh::superfluid_schmidt(&s);
            route_err = route_err
                .max((measures::pure_negativity_from_schmidt(&closed_schmidt) - exact).abs());
            let state = bh::superfluid_state_vector(&s)?;
            for site in 0..m as usize {
                let (v, split) = state.split_site(site)?;
                neg_err = neg_err.max((measures::negativity(&v.projector(), split)? - exact).abs());
                svd_err = svd_err
                    .max(tensor::schmidt_decompose(&v, split)?.max_abs_diff(&closed_schmidt));
                ann_err = ann_err.max(state.annihilation_expectation(site)?.norm());
            }
            let (num, den) = bh::bh_odlro_correlator_exact(&s)?;
            if num * u128::from(m) != den * u128::from(n) {
                rational_bad += 1.0;
            }
        }
    }
    for (n, m, v) in [(1u64, 2u64, 0.5), (2, 2, 0.957_106_781_186_547_5)] {
        neg_err =
            neg_err.max((bh::superfluid_negativity_exact(&SuperfluidSpec::new(n, m)?) - v).abs());
    }
    for (n, m) in [(50u64, 3u64), (400, 7), (10_000, 2)] {
        let s = SuperfluidSpec::new(n, m)?;
        let two = measures::pure_negativity_from_schmidt(&bh::superfluid_schmidt(&s));
        route_err = route_err.max((two - bh::superfluid_negativity_exact(&s)).abs());
    }
    ctx.push(
        "bh.closed_form_vs_transpose_negativity",
        "bh_negativity",
        neg_err,
    );
    ctx.push("bh.closed_form_vs_svd_spectrum", "bh_schmidt", svd_err);
    ctx.push("bh.two_negativity_routes", "two_route", route_err);
    ctx.push("bh.odlro_is_n_over_m", "rational", rational_bad);
    ctx.push("bh.annihilation_vanishes", "annihilation", ann_err);

    let mut mott = 0f64;
    for (sites, filling) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
        let (psi, shape) = bh::mott_state_vector(&MottSpec::uniform(sites, filling)?)?;
        for m in 0..sites {
            let (v, split) = tensor::bipartition(&psi, &shape, &[m])?;
            mott = mott.max(measures::negativity(&v.projector(), split)?);
        }
    }
    ctx.push("bh.mott_unentangled", "mott", mott);

    let rel = |n: u64| -> CoreResult<f64> {
        let s = SuperfluidSpec::new(n, 2)?;
        let exact = bh::superfluid_negativity_exact(&s);
        Ok(
            ((bh::superfluid_negativity_clt(&s, CltVariant::Corrected)?.value - exact) / exact)
                .abs(),
        )
    };
    ctx.push("bh.corrected_clt_relative_error_1e4", "clt", rel(10_000)?);
    let errs: Vec<f64> = [10u64, 100, 1000, 10_000, 100_000]
        .iter()
        .map(|&n| rel(n))
        .collect::<CoreResult<_>>()?;
    let reversed: Vec<f64> = errs.iter().rev().copied().collect();
    ctx.push(
        "bh.corrected_clt_error_shrinks",
        "monotone",
        violations(&reversed),
    );

    let poisson = bh::superfluid_negativity_poisson_limit(1.0)?;
    let exact = bh::superfluid_negativity_exact(&SuperfluidSpec::new(1024, 1024)?);
    ctx.push(
        "bh.exact_vs_poisson_1024",
        "poisson",
        ((exact - poisson) / poisson).abs(),
    );

    let mut bad = 0.0;
    for m in 2..=6u64 {
        let series: Vec<f64> = (1..=50u64)
            .map(|n| SuperfluidSpec::new(n, m).map(|s| bh::superfluid_negativity_exact(&s)))
            .collect::<CoreResult<_>>()?;
        bad += violations(&series);
    }
    ctx.push("bh.negativity_grows_with_atoms", "monotone", bad);
    Ok(())
}

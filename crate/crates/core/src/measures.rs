//! Entanglement quantifiers. All logarithms are base 2.

use alloc::vec::Vec;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_unit_interval, Error, Result};
use crate::numeric::compensated_sum;
use crate::tensor::{
    hermitian_eigenvalues, partial_transpose, BipartiteShape, ComplexMatrix, ComplexVector,
    MultipartiteShape, SchmidtSpectrum, Subsystem, C64, STRUCTURAL_TOL,
};

/// Largest register handed to the nearest-product-state search.
pub const OPTIMIZER_MAX_DIM: usize = 1 << 12;

/// Default seed for every randomized routine.
pub const DEFAULT_SEED: u64 = 0x00E7_A5EE_D000_2004;

/// Eigenvalues of the partial transpose in `[-NEGATIVITY_CLIP, 0)` count as zero.
pub const NEGATIVITY_CLIP: f64 = 1e-12;

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &ComplexMatrix, shape: BipartiteShape) -> Result<f64> {
    rho.check_density()?;
    let pt = partial_transpose(rho, shape, Subsystem::B)?;
    let ev = hermitian_eigenvalues(&pt)?;
    Ok(compensated_sum(
        ev.into_iter().filter(|&x| x < -NEGATIVITY_CLIP).map(|x| -x),
    ))
}

/// `log₂(1 + 2 N(ρ))`.
pub fn log_negativity(rho: &ComplexMatrix, shape: BipartiteShape) -> Result<f64> {
    Ok((1.0 + 2.0 * negativity(rho, shape)?).log2())
}

/// Negativity of a pure state from its Schmidt coefficients: `((Σλ)² − 1)/2`.
pub fn pure_negativity_from_schmidt(s: &SchmidtSpectrum) -> f64 {
    let sum = compensated_sum(s.coefficients().iter().copied());
    ((sum * sum - 1.0) / 2.0).max(0.0)
}

fn neg_xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy in bits, with `0 log 0 = 0`.
///
/// The two terms are always added smaller-argument first, so `h(x)` and
/// `h(1 − x)` agree bit for bit whenever `1 − x` is exact.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_unit_interval("x", x)?;
    let y = 1.0 - x;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    Ok(neg_xlogx(lo) + neg_xlogx(hi))
}

/// Entanglement of formation of a two-qubit state with concurrence `c`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    check_unit_interval("concurrence", c)?;
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

/// Qubit teleportation fidelity achievable from fully entangled fraction `f`.
pub fn teleportation_fidelity(f: f64) -> Result<f64> {
    check_unit_interval("fully entangled fraction", f)?;
    Ok((2.0 * f + 1.0) / 3.0)
}

/// Settings for the seeded multi-restart ascent routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 500,
            convergence_tol: 1e-10,
            seed: DEFAULT_SEED,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::Invalid(
                "restarts and max_iterations must be positive".into(),
            ));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(crate::error::domain(
                "convergence_tol",
                self.convergence_tol,
                "(0, inf)",
            ));
        }
        Ok(())
    }
}

/// One normalized local vector per subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStateAnsatz {
    factors: Vec<ComplexVector>,
}

impl ProductStateAnsatz {
    pub fn new(factors: Vec<ComplexVector>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid(
                "product ansatz needs at least one factor".into(),
            ));
        }
        for f in &factors {
            if !f.is_normalized(STRUCTURAL_TOL) {
                return Err(Error::NotNormalized { norm: f.norm() });
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[ComplexVector] {
        &self.factors
    }

    pub fn to_vector(&self) -> Result<ComplexVector> {
        let mut v = self.factors[0].clone();
        for f in &self.factors[1..] {
            v = v.kron(f)?;
        }
        Ok(v)
    }
}

/// Best product state found by [`nearest_product_overlap`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOverlap {
    /// `max |⟨φ₁…φₙ|ψ⟩|²` over the restarts.
    pub overlap_sq: f64,
    pub ansatz: ProductStateAnsatz,
    /// False when the best restart hit `max_iterations` before the sweep gain fell below tolerance.
    pub converged: bool,
    pub sweeps: usize,
}

/// Maximal squared overlap of `psi` with a product state, by alternating
/// single-site best responses from seeded random starts.
pub fn nearest_product_overlap(
    psi: &ComplexVector,
    shape: &MultipartiteShape,
    cfg: &OptimizerConfig,
) -> Result<ProductOverlap> {
    cfg.validate()?;
    if psi.len() != shape.total() {
        return Err(Error::ShapeMismatch {
            expected: shape.total(),
            found: psi.len(),
        });
    }
    if psi.len() > OPTIMIZER_MAX_DIM {
        return Err(Error::DimensionCap {
            dim: psi.len(),
            cap: OPTIMIZER_MAX_DIM,
        });
    }
    psi.require_normalized()?;

    let dims = shape.local_dims();
    let digits = digit_table(dims);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(f64, Vec<Vec<C64>>, bool, usize)> = None;

    for _ in 0..cfg.restarts {
        let mut factors: Vec<Vec<C64>> = dims.iter().map(|&d| random_unit(&mut rng, d)).collect();
        let mut overlap = 0.0;
        let mut stop = StoppingRule::new(cfg.convergence_tol);
        let mut converged = false;
        let mut sweeps = 0;
        while sweeps < cfg.max_iterations {
            sweeps += 1;
            let mut current = overlap;
            for site in 0..dims.len() {
                let g = partial_contraction(psi.entries(), &digits, &factors, site);
                let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > 0.0 {
                    factors[site] = g.into_iter().map(|z| z / norm).collect();
                    current = norm;
                }
            }
            let gain = current - overlap;
            overlap = current;
            if sweeps > 1 && stop.done(gain, overlap) {
                converged = true;
                break;
            }
        }
        let better = best.as_ref().is_none_or(|b| overlap > b.0);
        if better {
            best = Some((overlap, factors, converged, sweeps));
        }
    }

    let (overlap, factors, converged, sweeps) = best.expect("restarts > 0");
    let ansatz = ProductStateAnsatz::new(
        factors
            .into_iter()
            .map(ComplexVector::new)
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(ProductOverlap {
        overlap_sq: overlap * overlap,
        ansatz,
        converged,
        sweeps,
    })
}

/// Geometric measure of a pure multipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricMeasure {
    pub bits: f64,
    pub overlap: ProductOverlap,
}

/// `−log₂ Λ²` with `Λ²` from [`nearest_product_overlap`].
pub fn geometric_measure(
    psi: &ComplexVector,
    shape: &MultipartiteShape,
    cfg: &OptimizerConfig,
) -> Result<GeometricMeasure> {
    let overlap = nearest_product_overlap(psi, shape, cfg)?;
    let bits = (-overlap.overlap_sq.min(1.0).log2()).max(0.0);
    Ok(GeometricMeasure { bits, overlap })
}

/// Termination for monotone ascent sequences.
///
/// The iterations converge linearly, so a small step does not mean a small
/// distance to the limit. With contraction `q = gain_k / gain_{k-1}` the
/// remaining gap is about `gain·q/(1 − q)`; stop once that is below `tol`,
/// or once a step no longer moves the value at machine precision.
struct StoppingRule {
    tol: f64,
    previous_gain: Option<f64>,
}

impl StoppingRule {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            previous_gain: None,
        }
    }

    fn done(&mut self, gain: f64, value: f64) -> bool {
        if gain <= 4.0 * f64::EPSILON * value.abs() {
            return true;
        }
        let previous = self.previous_gain.replace(gain);
        match previous {
            Some(prev) if prev > 0.0 => {
                let q = gain / prev;
                q < 1.0 && gain * q / (1.0 - q) < self.tol
            }
            _ => false,
        }
    }
}

fn digit_table(dims: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = dims.iter().product();
    let mut table = Vec::with_capacity(total);
    let mut digits = alloc::vec![0usize; dims.len()];
    for _ in 0..total {
        table.push(digits.clone());
        for pos in (0..dims.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < dims[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    table
}

/// `g[a] = Σ_{x: x_site = a} ψ[x] Π_{i≠site} conj(φ_i[x_i])`.
fn partial_contraction(
    amps: &[C64],
    digits: &[Vec<usize>],
    factors: &[Vec<C64>],
    site: usize,
) -> Vec<C64> {
    let mut g = alloc::vec![C64::new(0.0, 0.0); factors[site].len()];
    for (amp, x) in amps.iter().zip(digits) {
        if *amp == C64::new(0.0, 0.0) {
            continue;
        }
        let mut w = *amp;
        for (i, (&xi, f)) in x.iter().zip(factors).enumerate() {
            if i != site {
                w *= f[xi].conj();
            }
        }
        g[x[site]] += w;
    }
    g
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Maximal fidelity of a two-qubit state with a maximally entangled state.
///
/// Every maximally entangled two-qubit vector has coefficient matrix `W/√2`
/// with `W` unitary. The objective `vec(W)† ρ vec(W)/2` is convex, so the
/// polar-factor update `W ← polar(ρ·W)` never decreases it; restarts draw
/// `W` from the `SU(2)` angle parameterization.
pub fn fully_entangled_fraction(rho: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::ShapeMismatch {
            expected: 16,
            found: rho.rows() * rho.cols(),
        });
    }
    rho.check_density()?;
    let objective = |w: &Matrix2<C64>| -> f64 {
        let v = [w[(0, 0)], w[(0, 1)], w[(1, 0)], w[(1, 1)]];
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += v[i].conj() * rho[(i, j)] * v[j];
            }
        }
        acc.re / 2.0
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..cfg.restarts {
        let theta = rng.random_range(0.0..core::f64::consts::FRAC_PI_2);
        let phi = rng.random_range(0.0..core::f64::consts::TAU);
        let chi = rng.random_range(0.0..core::f64::consts::TAU);
        let a = C64::from_polar(theta.cos(), phi);
        let b = C64::from_polar(theta.sin(), chi);
        let mut w = Matrix2::new(a, -b.conj(), b, a.conj());
        let mut value = objective(&w);
        let mut stop = StoppingRule::new(cfg.convergence_tol);
        for _ in 0..cfg.max_iterations {
            let v = [w[(0, 0)], w[(0, 1)], w[(1, 0)], w[(1, 1)]];
            let mut g = [C64::new(0.0, 0.0); 4];
            for (i, gi) in g.iter_mut().enumerate() {
                *gi = (0..4).map(|j| rho[(i, j)] * v[j]).sum();
            }
            let gm = Matrix2::new(g[0], g[1], g[2], g[3]);
            let svd = gm.svd(true, true);
            let (Some(u), Some(vt)) = (svd.u, svd.v_t) else {
                break;
            };
            w = u * vt;
            let next = objective(&w);
            let gain = next - value;
            value = next.max(value);
            if stop.done(gain, value) {
                break;
            }
        }
        best = best.max(value);
    }
    Ok(best.clamp(0.0, 1.0))
}

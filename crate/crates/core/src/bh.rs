//! Bose-Hubbard limit states.
//!
//! The deep superfluid spreads `N` atoms over `M` wells in the symmetric
//! mode; split as one well versus the rest it is a binomial Schmidt state
//! with `p = 1/M`. The Mott limit is a product of local states.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::numeric::{binomial_u64, compensated_sum, ln_binomial, ln_factorial};
use crate::tensor::{
    BipartiteShape, ComplexVector, MultipartiteShape, SchmidtSpectrum, C64, STRUCTURAL_TOL,
};

/// Largest occupation basis the explicit superfluid vector may use.
pub const MAX_FOCK_BASIS: u64 = 1_000_000;
/// Binomial and Poisson terms below this are dropped from the tails.
pub const TAIL_CUTOFF: f64 = 1e-16;
/// Below this `Np(1 − p)` the Gaussian replacement is flagged as low confidence.
pub const CLT_MIN_VARIANCE: f64 = 5.0;

/// `N` atoms in `M` wells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperfluidSpec {
    pub atoms: u64,
    pub sites: u64,
}

impl SuperfluidSpec {
    pub fn new(atoms: u64, sites: u64) -> Result<Self> {
        if atoms == 0 || sites == 0 {
            return Err(Error::Invalid(
                "atoms and sites must both be at least 1".into(),
            ));
        }
        Ok(Self { atoms, sites })
    }

    /// Single-well occupation probability `p = 1/M`.
    pub fn p(&self) -> f64 {
        1.0 / self.sites as f64
    }
}

/// `λ_k = √(C(N,k) p^k (1 − p)^(N−k))`, the one-well-versus-rest spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialSchmidt {
    pub atoms: u64,
    pub p: f64,
}

impl BinomialSchmidt {
    pub fn new(atoms: u64, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(domain("p", p, "(0, 1]"));
        }
        Ok(Self { atoms, p })
    }

    pub fn from_spec(s: &SuperfluidSpec) -> Self {
        Self {
            atoms: s.atoms,
            p: s.p(),
        }
    }

    fn ln_weight(&self, k: u64) -> f64 {
        let n = self.atoms;
        if self.p == 1.0 {
            return if k == n { 0.0 } else { f64::NEG_INFINITY };
        }
        ln_binomial(n, k) + k as f64 * self.p.ln() + (n - k) as f64 * (-self.p).ln_1p()
    }

    /// `λ_k` at one `k`.
    pub fn coefficient(&self, k: u64) -> f64 {
        if k > self.atoms {
            return 0.0;
        }
        (0.5 * self.ln_weight(k)).exp()
    }

    /// `(k_lo, [λ_{k_lo}, …])`: the contiguous window around the mode outside
    /// of which every coefficient is below [`TAIL_CUTOFF`].
    pub fn window(&self) -> (u64, Vec<f64>) {
        let n = self.atoms;
        let mode = (((n + 1) as f64 * self.p).floor() as u64).min(n);
        let mut lo = mode;
        while lo > 0 && self.coefficient(lo - 1) >= TAIL_CUTOFF {
            lo -= 1;
        }
        let mut hi = mode;
        while hi < n && self.coefficient(hi + 1) >= TAIL_CUTOFF {
            hi += 1;
        }
        (lo, (lo..=hi).map(|k| self.coefficient(k)).collect())
    }
}

/// Occupations `(n₁, …, n_M)` with `Σ n_i = N`, in colexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationBasis {
    atoms: u32,
    sites: usize,
    configs: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

/// Number of compositions of `atoms` into `sites` parts, saturating.
pub fn occupation_basis_size(atoms: u64, sites: u64) -> u64 {
    let n = atoms + sites - 1;
    let k = (sites - 1).min(atoms);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

impl OccupationBasis {
    pub fn new(atoms: u64, sites: u64) -> Result<Self> {
        if sites == 0 {
            return Err(Error::Invalid("at least one site required".into()));
        }
        let size = occupation_basis_size(atoms, sites);
        if size > MAX_FOCK_BASIS {
            return Err(Error::DimensionCap {
                dim: size as usize,
                cap: MAX_FOCK_BASIS as usize,
            });
        }
        let atoms = u32::try_from(atoms).map_err(|_| Error::Invalid("too many atoms".into()))?;
        let sites = sites as usize;
        let mut configs = Vec::with_capacity(size as usize);
        let mut current = vec![0u32; sites];
        compositions(atoms, 0, &mut current, &mut configs);
        // colex: compare the last site first
        configs.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        let index = configs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Ok(Self {
            atoms,
            sites,
            configs,
            index,
        })
    }

    pub fn atoms(&self) -> u32 {
        self.atoms
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Vec<u32>] {
        &self.configs
    }

    pub fn index_of(&self, occupations: &[u32]) -> Option<usize> {
        self.index.get(occupations).copied()
    }
}

fn compositions(remaining: u32, site: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if site + 1 == current.len() {
        current[site] = remaining;
        out.push(current.clone());
        return;
    }
    for x in 0..=remaining {
        current[site] = x;
        compositions(remaining - x, site + 1, current, out);
    }
}

/// A state with fixed total atom number, stored on its occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    basis: OccupationBasis,
    amplitudes: Vec<C64>,
}

impl FockState {
    pub fn new(basis: OccupationBasis, amplitudes: Vec<C64>) -> Result<Self> {
        if basis.len() != amplitudes.len() {
            return Err(Error::ShapeMismatch {
                expected: basis.len(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &OccupationBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        compensated_sum(self.amplitudes.iter().map(|z| z.norm_sqr())).sqrt()
    }

    /// `⟨a_i† a_j⟩`.
    pub fn hopping_expectation(&self, i: usize, j: usize) -> Result<C64> {
        let m = self.basis.sites;
        if i >= m || j >= m {
            return Err(Error::SubsystemIndex {
                index: i.max(j),
                count: m,
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        let mut target = vec![0u32; m];
        for (x, &amp) in self.basis.configs.iter().zip(&self.amplitudes) {
            if x[j] == 0 {
                continue;
            }
            target.copy_from_slice(x);
            target[j] -= 1;
            target[i] += 1;
            if let Some(y) = self.basis.index_of(&target) {
                let matrix_element = (f64::from(x[j]) * f64::from(target[i])).sqrt();
                acc += self.amplitudes[y].conj() * amp * matrix_element;
            }
        }
        Ok(acc)
    }

    /// `⟨a_m⟩`. The lowered configuration has `N − 1` atoms and never lies
    /// in the fixed-`N` basis, so this vanishes for every such state.
    pub fn annihilation_expectation(&self, m: usize) -> Result<C64> {
        if m >= self.basis.sites {
            return Err(Error::SubsystemIndex {
                index: m,
                count: self.basis.sites,
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        let mut target = vec![0u32; self.basis.sites];
        for (x, &amp) in self.basis.configs.iter().zip(&self.amplitudes) {
            if x[m] == 0 {
                continue;
            }
            target.copy_from_slice(x);
            target[m] -= 1;
            if let Some(y) = self.basis.index_of(&target) {
                acc += self.amplitudes[y].conj() * amp * f64::from(x[m]).sqrt();
            }
        }
        Ok(acc)
    }

    /// Embeds the state in `(well m) ⊗ (other wells)`. The first factor is
    /// the occupation `0..=N` of well `m`; the second enumerates occupations
    /// of the remaining wells with any total `0..=N`, in colex order.
    pub fn split_site(&self, m: usize) -> Result<(ComplexVector, BipartiteShape)> {
        let sites = self.basis.sites;
        if m >= sites {
            return Err(Error::SubsystemIndex {
                index: m,
                count: sites,
            });
        }
        let atoms = self.basis.atoms;
        let mut rest: Vec<Vec<u32>> = Vec::new();
        for total in 0..=atoms {
            if sites == 1 {
                if total == 0 {
                    rest.push(Vec::new());
                }
                continue;
            }
            let mut current = vec![0u32; sites - 1];
            let mut part = Vec::new();
            compositions(total, 0, &mut current, &mut part);
            part.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
            rest.extend(part);
        }
        let rest_index: BTreeMap<&[u32], usize> = rest
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect();
        let shape = BipartiteShape::new(atoms as usize + 1, rest.len())?;
        if shape.total() > crate::tensor::MAX_DIM {
            return Err(Error::DimensionCap {
                dim: shape.total(),
                cap: crate::tensor::MAX_DIM,
            });
        }
        let mut entries = vec![C64::new(0.0, 0.0); shape.total()];
        let mut others = Vec::with_capacity(sites - 1);
        for (x, &amp) in self.basis.configs.iter().zip(&self.amplitudes) {
            others.clear();
            others.extend(
                x.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != m)
                    .map(|(_, &v)| v),
            );
            let col = rest_index[others.as_slice()];
            entries[x[m] as usize * shape.dim_b + col] = amp;
        }
        Ok((ComplexVector::new(entries)?, shape))
    }
}

/// Multinomial amplitude expansion of the uniform single-mode condensate.
pub fn superfluid_state_vector(s: &SuperfluidSpec) -> Result<FockState> {
    let basis = OccupationBasis::new(s.atoms, s.sites)?;
    let ln_norm = ln_factorial(s.atoms) - s.atoms as f64 * (s.sites as f64).ln();
    let amplitudes = basis
        .configs
        .iter()
        .map(|x| {
            let ln_den: f64 = x.iter().map(|&n| ln_factorial(u64::from(n))).sum();
            C64::new((0.5 * (ln_norm - ln_den)).exp(), 0.0)
        })
        .collect();
    FockState::new(basis, amplitudes)
}

/// Local states of a Mott product; each site lives in `span{|0⟩, …, |d−1⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MottSpec {
    locals: Vec<ComplexVector>,
}

impl MottSpec {
    pub fn new(locals: Vec<ComplexVector>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::Invalid("at least one site required".into()));
        }
        for l in &locals {
            if !l.is_normalized(STRUCTURAL_TOL) {
                return Err(Error::NotNormalized { norm: l.norm() });
            }
        }
        Ok(Self { locals })
    }

    /// `filling` atoms on each of `sites` wells, as number states.
    pub fn uniform(sites: usize, filling: usize) -> Result<Self> {
        let local = ComplexVector::basis(filling + 1, filling)?;
        Self::new(vec![local; sites])
    }

    pub fn locals(&self) -> &[ComplexVector] {
        &self.locals
    }
}

/// Tensor product of the local states.
pub fn mott_state_vector(m: &MottSpec) -> Result<(ComplexVector, MultipartiteShape)> {
    let shape = MultipartiteShape::new(m.locals.iter().map(|l| l.len()).collect())?;
    let mut v = m.locals[0].clone();
    for l in &m.locals[1..] {
        v = v.kron(l)?;
    }
    Ok((v, shape))
}

/// Closed-form one-well-versus-rest Schmidt spectrum. Exact zeros and
/// coefficients below [`TAIL_CUTOFF`] are omitted.
pub fn superfluid_schmidt(s: &SuperfluidSpec) -> SchmidtSpectrum {
    let (_, mut coefficients) = BinomialSchmidt::from_spec(s).window();
    coefficients.retain(|&c| c > 0.0);
    SchmidtSpectrum::new(coefficients).expect("binomial weights sum to one")
}

/// `((Σ_k λ_k)² − 1)/2` with the binomial coefficients evaluated in log space.
pub fn superfluid_negativity_exact(s: &SuperfluidSpec) -> f64 {
    let (_, coefficients) = BinomialSchmidt::from_spec(s).window();
    let sum = compensated_sum(coefficients);
    ((sum * sum - 1.0) / 2.0).max(0.0)
}

/// Which Gaussian-integral constant to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CltVariant {
    /// `((8Np(1−p))^{1/2} − 1)/2`, without the Gaussian normalization.
    Paper,
    /// `√(2πNp(1−p)) − 1/2`, from the normalized Gaussian.
    Corrected,
}

impl CltVariant {
    pub fn label(&self) -> &'static str {
        match self {
            CltVariant::Paper => "paper",
            CltVariant::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltEstimate {
    pub value: f64,
    pub variant: CltVariant,
    /// `Np(1 − p) < CLT_MIN_VARIANCE`.
    pub low_confidence: bool,
}

/// Large-`N` Gaussian approximation of the superfluid negativity.
pub fn superfluid_negativity_clt(s: &SuperfluidSpec, variant: CltVariant) -> Result<CltEstimate> {
    let p = s.p();
    if p >= 1.0 {
        return Err(domain("p", p, "(0, 1)"));
    }
    let variance = s.atoms as f64 * p * (1.0 - p);
    let value = match variant {
        CltVariant::Paper => ((8.0 * variance).sqrt() - 1.0) / 2.0,
        CltVariant::Corrected => (core::f64::consts::TAU * variance).sqrt() - 0.5,
    };
    Ok(CltEstimate {
        value,
        variant,
        low_confidence: variance < CLT_MIN_VARIANCE,
    })
}

/// The negativity sum with the binomial replaced by Poisson(λ), `λ = N/M`.
pub fn superfluid_negativity_poisson_limit(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(domain("lambda", lambda, "[0, inf)"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let ln_lambda = lambda.ln();
    let mut terms = Vec::new();
    let mut k = 0u64;
    loop {
        let t = (-0.5 * lambda + 0.5 * k as f64 * ln_lambda - 0.5 * ln_factorial(k)).exp();
        terms.push(t);
        if k as f64 > lambda && t < TAIL_CUTOFF {
            break;
        }
        k += 1;
    }
    let sum = compensated_sum(terms);
    Ok(((sum * sum - 1.0) / 2.0).max(0.0))
}

/// `⟨a_i† a_j⟩ = N/M` for `i ≠ j` on the superfluid state.
pub fn bh_odlro_correlator(s: &SuperfluidSpec) -> f64 {
    s.atoms as f64 / s.sites as f64
}

/// `⟨a_0† a_{M−1}⟩` as an exact fraction `(Σ_x N!/Πx! · x_{M−1}, M^N)`.
///
/// With real multinomial amplitudes every hop contributes
/// `ψ(x)ψ(y)√(x_j(x_i+1)) = N!/Πx! · x_j / M^N`, so the sum is rational.
/// For a single well this is the density `⟨a_0† a_0⟩`.
pub fn bh_odlro_correlator_exact(s: &SuperfluidSpec) -> Result<(u128, u128)> {
    if s.atoms > 30 {
        return Err(Error::Invalid("exact correlator limited to N <= 30".into()));
    }
    let den = u128::from(s.sites)
        .checked_pow(s.atoms as u32)
        .ok_or_else(|| Error::Invalid("M^N overflows".into()))?;
    let basis = OccupationBasis::new(s.atoms, s.sites)?;
    let fact = |n: u64| -> u128 { (1..=u128::from(n)).product() };
    let total = fact(s.atoms);
    let j = basis.sites - 1;
    let mut num: u128 = 0;
    for x in basis.configs() {
        let den_x: u128 = x.iter().map(|&n| fact(u64::from(n))).product();
        num += total / den_x * u128::from(x[j]);
    }
    Ok((num, den))
}

/// `r = √(N/M)`.
pub fn bh_order_parameter_r(s: &SuperfluidSpec) -> f64 {
    bh_odlro_correlator(s).sqrt()
}

/// Exact binomial probability table for small `N`, used by the oracle paths.
pub fn binomial_pmf_exact(atoms: u64, p: f64) -> Vec<f64> {
    (0..=atoms)
        .map(|k| {
            binomial_u64(atoms, k) as f64 * p.powi(k as i32) * (1.0 - p).powi((atoms - k) as i32)
        })
        .collect()
}

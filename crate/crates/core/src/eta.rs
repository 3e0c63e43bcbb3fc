//! η-pairing states in the site-occupation qubit picture.
//!
//! Creating `k` on-site pairs coherently over `n` sites gives the Dicke
//! state `|D(n, k)⟩`: the equal superposition of all `n`-bit strings with `k`
//! ones (1 = doubly occupied site). Every two-site reduced state is the same
//! mixture of `|00⟩`, `|11⟩` and `|ψ⁺⟩`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_unit_interval, Error, Result};
use crate::measures::binary_entropy;
use crate::numeric::{ln_binomial, round_half_even};
use crate::tensor::{ComplexMatrix, ComplexVector, C64};

/// Densely representable register size.
pub const MAX_DENSE_SITES: usize = 14;
/// Upper end of the log-gamma asymptotics regime.
pub const MAX_ASYMPTOTIC_SITES: u64 = 100_000_000;

/// `k` pairs over `n` sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeSpec {
    pub n: u64,
    pub k: u64,
}

impl DickeSpec {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        if k > n {
            return Err(Error::Invalid(alloc::format!("k = {k} exceeds n = {n}")));
        }
        Ok(Self { n, k })
    }

    /// `k = round(r n)` with ties to even.
    pub fn from_filling(n: u64, r: FillingRatio) -> Result<Self> {
        let k = round_half_even(r.value() * n as f64) as u64;
        Self::new(n, k.min(n))
    }

    fn require_pair_sites(&self) -> Result<()> {
        if self.n < 2 {
            Err(Error::Invalid("two-site quantities need n >= 2".into()))
        } else {
            Ok(())
        }
    }
}

/// Weights of `|00⟩⟨00|`, `|11⟩⟨11|` and `|ψ⁺⟩⟨ψ⁺|` in the two-site state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteRdm {
    pub p_empty_empty: f64,
    pub p_occ_occ: f64,
    pub w_psi_plus: f64,
}

impl TwoSiteRdm {
    /// 4×4 matrix in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        let half = C64::new(self.w_psi_plus / 2.0, 0.0);
        m[(0, 0)] = C64::new(self.p_empty_empty, 0.0);
        m[(3, 3)] = C64::new(self.p_occ_occ, 0.0);
        for i in 1..3 {
            for j in 1..3 {
                m[(i, j)] = half;
            }
        }
        m
    }
}

/// The two-site weights as integers over the common denominator `n(n − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactTwoSiteRdm {
    pub denominator: u128,
    pub empty_empty: u128,
    pub occ_occ: u128,
    pub psi_plus: u128,
}

/// Pair-density ratio `r = k/n` in the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FillingRatio(f64);

impl FillingRatio {
    pub fn new(r: f64) -> Result<Self> {
        check_unit_interval("r", r).map(Self)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Normalized `|D(n, k)⟩`, site 0 as the most significant bit.
pub fn dicke_state_vector(s: &DickeSpec) -> Result<ComplexVector> {
    if s.n as usize > MAX_DENSE_SITES {
        return Err(Error::DimensionCap {
            dim: 1usize.checked_shl(s.n as u32).unwrap_or(usize::MAX),
            cap: 1 << MAX_DENSE_SITES,
        });
    }
    let dim = 1usize << s.n;
    let amp = (-0.5 * ln_binomial(s.n, s.k)).exp();
    let entries = (0..dim)
        .map(|x: usize| {
            if x.count_ones() as u64 == s.k {
                C64::new(amp, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    ComplexVector::new(entries)
}

pub fn eta_two_site_rdm_exact(s: &DickeSpec) -> Result<ExactTwoSiteRdm> {
    s.require_pair_sites()?;
    let (n, k) = (u128::from(s.n), u128::from(s.k));
    Ok(ExactTwoSiteRdm {
        denominator: n * (n - 1),
        empty_empty: (n - k) * (n - k).saturating_sub(1),
        occ_occ: k * k.saturating_sub(1),
        psi_plus: 2 * k * (n - k),
    })
}

pub fn eta_two_site_rdm(s: &DickeSpec) -> Result<TwoSiteRdm> {
    let e = eta_two_site_rdm_exact(s)?;
    let d = e.denominator as f64;
    Ok(TwoSiteRdm {
        p_empty_empty: e.empty_empty as f64 / d,
        p_occ_occ: e.occ_occ as f64 / d,
        w_psi_plus: e.psi_plus as f64 / d,
    })
}

/// `α = 2k(n − k)/(n(n − 1))`, the `|ψ⁺⟩` weight.
pub fn alpha_order_parameter(s: &DickeSpec) -> Result<f64> {
    Ok(eta_two_site_rdm(s)?.w_psi_plus)
}

/// `⟨01|σ_ij|10⟩ = k(n − k)/(n(n − 1))` as `(numerator, denominator)`.
pub fn odlro_pair_correlator_exact(s: &DickeSpec) -> Result<(u128, u128)> {
    let e = eta_two_site_rdm_exact(s)?;
    Ok((e.psi_plus / 2, e.denominator))
}

pub fn odlro_pair_correlator(s: &DickeSpec) -> Result<f64> {
    let (num, den) = odlro_pair_correlator_exact(s)?;
    Ok(num as f64 / den as f64)
}

/// `⟨ψ| σ⁺_i σ⁻_j |ψ⟩` on an explicit `n`-qubit register: moves a pair from
/// site `j` to site `i`.
pub fn pair_hopping_expectation(psi: &ComplexVector, n: usize, i: usize, j: usize) -> Result<C64> {
    if psi.len() != 1usize << n {
        return Err(Error::ShapeMismatch {
            expected: 1 << n,
            found: psi.len(),
        });
    }
    if i >= n || j >= n {
        return Err(Error::SubsystemIndex {
            index: i.max(j),
            count: n,
        });
    }
    if i == j {
        return Err(Error::Invalid(
            "pair hopping needs two distinct sites".into(),
        ));
    }
    let bit_i = 1usize << (n - 1 - i);
    let bit_j = 1usize << (n - 1 - j);
    let amps = psi.entries();
    let mut acc = C64::new(0.0, 0.0);
    for (x, &a) in amps.iter().enumerate() {
        if x & bit_j != 0 && x & bit_i == 0 {
            let y = (x & !bit_j) | bit_i;
            acc += amps[y].conj() * a;
        }
    }
    Ok(acc)
}

/// `ln Λ²` for the closest product state, `Λ² = C(n,k)(k/n)^k((n−k)/n)^(n−k)`.
fn ln_max_overlap(s: &DickeSpec) -> f64 {
    if s.k == 0 || s.k == s.n {
        return 0.0;
    }
    // evaluate at min(k, n − k) so that k ↔ n − k is bitwise symmetric
    let small = s.k.min(s.n - s.k);
    let (n, k, rest) = (s.n as f64, small as f64, (s.n - small) as f64);
    ln_binomial(s.n, small) + k * (k / n).ln() + rest * (rest / n).ln()
}

/// Closed-form `Λ²` for `|D(n, k)⟩`.
pub fn dicke_max_overlap(s: &DickeSpec) -> f64 {
    ln_max_overlap(s).exp()
}

/// `LR_G(n, k) = −log₂ Λ²`, evaluated in log space.
pub fn gme_dicke_closed_form(s: &DickeSpec) -> f64 {
    (-ln_max_overlap(s) / core::f64::consts::LN_2).max(0.0)
}

/// `α = 2r(1 − r)`.
pub fn alpha_from_r(r: FillingRatio) -> f64 {
    2.0 * r.0 * (1.0 - r.0)
}

/// Entanglement-density relation `d_E(α) = h((1 − √(1 − α))/2)`.
pub fn de_from_alpha_paper(alpha: f64) -> Result<f64> {
    check_unit_interval("alpha", alpha)?;
    binary_entropy((1.0 - (1.0 - alpha).sqrt()) / 2.0)
}

/// One `n` of the Dicke asymptotics table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsRow {
    pub n: u64,
    pub k: u64,
    /// Exact `LR_G(n, k)`.
    pub lrg: f64,
    pub lrg_per_site: f64,
    /// Extensive density claim `h(r)`.
    pub density_claim: f64,
    /// `½ log₂(2π n r(1 − r))`; `None` at `r ∈ {0, 1}`.
    pub log_asymptote: Option<f64>,
}

/// Exact `LR_G` along `n_grid` with `k = round(r n)`, next to the extensive
/// claim `h(r)` and the logarithmic asymptote. Rows come back in ascending `n`.
pub fn dicke_asymptotics_report(r: FillingRatio, n_grid: &[u64]) -> Result<Vec<AsymptoticsRow>> {
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let density_claim = binary_entropy(r.0)?;
    let spread = r.0 * (1.0 - r.0);
    let mut rows = Vec::with_capacity(grid.len());
    for n in grid {
        if n == 0 || n > MAX_ASYMPTOTIC_SITES {
            return Err(Error::Invalid(alloc::format!(
                "n = {n} outside 1..={MAX_ASYMPTOTIC_SITES}"
            )));
        }
        let s = DickeSpec::from_filling(n, r)?;
        let lrg = gme_dicke_closed_form(&s);
        let log_asymptote =
            (spread > 0.0).then(|| 0.5 * (core::f64::consts::TAU * n as f64 * spread).log2());
        rows.push(AsymptoticsRow {
            n,
            k: s.k,
            lrg,
            lrg_per_site: lrg / n as f64,
            density_claim,
            log_asymptote,
        });
    }
    Ok(rows)
}

/// Occupation bit of `site` in basis index `x` of an `n`-site register.
pub fn site_occupied(x: usize, n: usize, site: usize) -> bool {
    x & (1 << (n - 1 - site)) != 0
}

/// Every unordered site pair `(i, j)`, `i < j`.
pub fn site_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{reduced_density_from_pure, MultipartiteShape};
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn dicke_examples() {
        let d = dicke_state_vector(&DickeSpec::new(2, 1).unwrap()).unwrap();
        let psi_plus = ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!(d
            .entries()
            .iter()
            .zip(psi_plus.entries())
            .all(|(a, b)| (a - b).norm() < 1e-15));
        let vac = dicke_state_vector(&DickeSpec::new(3, 0).unwrap()).unwrap();
        assert_eq!(vac, ComplexVector::basis(8, 0).unwrap());

        let d = dicke_state_vector(&DickeSpec::new(4, 2).unwrap()).unwrap();
        let nonzero: Vec<_> = d.entries().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 6);
        assert!(nonzero
            .iter()
            .all(|z| (z.re - 1.0 / 6f64.sqrt()).abs() < 1e-15));
        assert!((d.norm() - 1.0).abs() < 1e-15);

        assert!(matches!(
            dicke_state_vector(&DickeSpec::new(15, 3).unwrap()),
            Err(Error::DimensionCap { .. })
        ));
        assert!(DickeSpec::new(3, 4).is_err());
    }

    #[test]
    fn rdm_examples_match_partial_trace() {
        for (n, k, expected) in [
            (2u64, 1u64, [0.0, 0.0, 1.0]),
            (4, 2, [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]),
            (4, 1, [0.5, 0.0, 0.5]),
        ] {
            let s = DickeSpec::new(n, k).unwrap();
            let rdm = eta_two_site_rdm(&s).unwrap();
            let got = [rdm.p_empty_empty, rdm.p_occ_occ, rdm.w_psi_plus];
            for (g, e) in got.iter().zip(expected) {
                assert!((g - e).abs() < 1e-15);
            }
            let psi = dicke_state_vector(&s).unwrap();
            let shape = MultipartiteShape::qubits(n as usize).unwrap();
            let oracle = reduced_density_from_pure(&psi, &shape, &[0, 1]).unwrap();
            assert!(oracle.max_abs_diff(&rdm.to_matrix()) < 1e-15);
        }
        // ⟨11|σ|11⟩ = 1/6 for D(4,2).
        let psi = dicke_state_vector(&DickeSpec::new(4, 2).unwrap()).unwrap();
        let shape = MultipartiteShape::qubits(4).unwrap();
        let sigma = crate::tensor::partial_trace(&psi.projector(), &shape, &[0, 1]).unwrap();
        assert!((sigma[(3, 3)].re - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn two_site_quantities_need_two_sites() {
        let s = DickeSpec::new(1, 1).unwrap();
        assert!(eta_two_site_rdm(&s).is_err());
        assert!(alpha_order_parameter(&s).is_err());
        assert!(odlro_pair_correlator(&s).is_err());
    }

    #[test]
    fn alpha_and_correlator_examples() {
        let s = DickeSpec::new(4, 2).unwrap();
        assert!((alpha_order_parameter(&s).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((odlro_pair_correlator(&s).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for n in [2, 5, 9] {
            assert_eq!(
                alpha_order_parameter(&DickeSpec::new(n, 0).unwrap()).unwrap(),
                0.0
            );
            assert_eq!(
                alpha_order_parameter(&DickeSpec::new(n, n).unwrap()).unwrap(),
                0.0
            );
            assert_eq!(
                odlro_pair_correlator(&DickeSpec::new(n, 0).unwrap()).unwrap(),
                0.0
            );
        }
        let psi = dicke_state_vector(&DickeSpec::new(2, 1).unwrap()).unwrap();
        assert!((pair_hopping_expectation(&psi, 2, 0, 1).unwrap().re - 0.5).abs() < 1e-15);
        let psi = dicke_state_vector(&s).unwrap();
        assert!((pair_hopping_expectation(&psi, 4, 0, 3).unwrap().re - 1.0 / 3.0).abs() < 1e-15);
        assert!(pair_hopping_expectation(&psi, 4, 1, 1).is_err());
    }

    #[test]
    fn closed_form_gme_examples() {
        assert!((gme_dicke_closed_form(&DickeSpec::new(2, 1).unwrap()) - 1.0).abs() < 1e-14);
        let v = gme_dicke_closed_form(&DickeSpec::new(4, 2).unwrap());
        assert!((v - (8.0f64 / 3.0).log2()).abs() < 1e-14);
        assert!((v - 1.415_037).abs() < 1e-6);
        assert_eq!(gme_dicke_closed_form(&DickeSpec::new(7, 7).unwrap()), 0.0);
        assert_eq!(gme_dicke_closed_form(&DickeSpec::new(7, 0).unwrap()), 0.0);
        assert!((dicke_max_overlap(&DickeSpec::new(3, 1).unwrap()) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn filling_relations() {
        let half = FillingRatio::new(0.5).unwrap();
        assert_eq!(alpha_from_r(half), 0.5);
        assert_eq!(alpha_from_r(FillingRatio::new(0.0).unwrap()), 0.0);
        assert!((alpha_from_r(FillingRatio::new(0.1).unwrap()) - 0.18).abs() < 1e-15);
        let finite = alpha_order_parameter(&DickeSpec::new(10_000, 1_000).unwrap()).unwrap();
        assert!((finite - 0.18).abs() < 2.0 / 10_000.0);
        assert!(FillingRatio::new(1.5).is_err());
        assert_eq!(DickeSpec::from_filling(5, half).unwrap().k, 2);
        assert_eq!(DickeSpec::from_filling(7, half).unwrap().k, 4);
    }

    #[test]
    fn density_relation_examples() {
        assert_eq!(de_from_alpha_paper(0.0).unwrap(), 0.0);
        assert_eq!(de_from_alpha_paper(1.0).unwrap(), 1.0);
        let v = de_from_alpha_paper(0.36).unwrap();
        assert!((v - binary_entropy(0.1).unwrap()).abs() < 1e-15);
        assert!(de_from_alpha_paper(1.1).is_err());
    }

    #[test]
    fn asymptotics_examples() {
        let half = FillingRatio::new(0.5).unwrap();
        let rows = dicke_asymptotics_report(half, &[8, 4, 1_000_000]).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![4, 8, 1_000_000]
        );
        assert!((rows[0].lrg - 1.415_037).abs() < 1e-6);
        assert!((rows[0].log_asymptote.unwrap() - 1.325_748).abs() < 1e-6);
        assert!((rows[1].lrg + (70.0f64 / 256.0).log2()).abs() < 1e-13);
        assert!((rows[1].lrg - 1.870_716_983_055_033).abs() < 1e-12);
        assert!((rows[1].log_asymptote.unwrap() - 1.825_748).abs() < 1e-6);
        assert!(rows[2].lrg_per_site < 2e-5);
        assert_eq!(rows[2].density_claim, 1.0);

        let edge = dicke_asymptotics_report(FillingRatio::new(0.0).unwrap(), &[10]).unwrap();
        assert_eq!(edge[0].log_asymptote, None);
        assert!(dicke_asymptotics_report(half, &[MAX_ASYMPTOTIC_SITES + 1]).is_err());
    }
}

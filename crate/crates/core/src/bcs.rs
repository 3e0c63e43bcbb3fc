//! BCS pair states: amplitudes from the gap, momentum-space log-negativity
//! and the mean-field energy.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::numeric::CompensatedSum;
use crate::tensor::{ComplexVector, STRUCTURAL_TOL};

/// Invariant tolerance between stored amplitudes and the gap they came from.
pub const GAP_CONSISTENCY_TOL: f64 = 1e-10;

/// Occupation amplitudes `(u, v)` of one `(α, −α)` pair, `u² + v² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAmplitudes {
    u: f64,
    v: f64,
}

impl PairAmplitudes {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !u.is_finite() || u < 0.0 {
            return Err(domain("u", u, "[0, 1]"));
        }
        if !v.is_finite() || v < 0.0 {
            return Err(domain("v", v, "[0, 1]"));
        }
        let norm = u * u + v * v;
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized { norm: norm.sqrt() });
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// `v²`, the pair occupation.
    pub fn occupation(&self) -> f64 {
        self.v * self.v
    }
}

/// Gap `Δ`, pair energy `ε` and chemical potential `μ` for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapTriple {
    pub delta: f64,
    pub epsilon: f64,
    pub mu: f64,
}

impl GapTriple {
    pub fn new(delta: f64, epsilon: f64, mu: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(domain("delta", delta, "[0, inf)"));
        }
        if !epsilon.is_finite() {
            return Err(domain("epsilon", epsilon, "finite reals"));
        }
        if !mu.is_finite() {
            return Err(domain("mu", mu, "finite reals"));
        }
        Ok(Self { delta, epsilon, mu })
    }

    /// `E = √((ε − μ)² + Δ²)`.
    pub fn quasiparticle_energy(&self) -> f64 {
        (self.epsilon - self.mu).hypot(self.delta)
    }

    /// `Δ / E`.
    pub fn gap_ratio(&self) -> Result<f64> {
        let e = self.quasiparticle_energy();
        if e == 0.0 {
            return Err(Error::DegenerateGap);
        }
        Ok(self.delta / e)
    }
}

/// Amplitudes solving `2uv = Δ/E` on the branch `v² = (1 − (ε−μ)/E)/2`.
pub fn uv_from_gap(g: &GapTriple) -> Result<PairAmplitudes> {
    let e = g.quasiparticle_energy();
    if e == 0.0 {
        return Err(Error::DegenerateGap);
    }
    let x = (g.epsilon - g.mu) / e;
    let half_ratio = g.delta / (2.0 * e);
    // Take the root that avoids cancellation, then recover the other from the product.
    let (u, v) = if x >= 0.0 {
        let u = ((1.0 + x) / 2.0).sqrt();
        (u, half_ratio / u)
    } else {
        let v = ((1.0 - x) / 2.0).sqrt();
        (half_ratio / v, v)
    };
    PairAmplitudes::new(u, v)
}

/// Dimensionless gap ratio `2uv = Δ/E`.
pub fn gap_ratio_from_uv(p: &PairAmplitudes) -> f64 {
    2.0 * p.u * p.v
}

/// `u|00⟩ + v|11⟩` over the occupations of `(α, −α)`.
pub fn pair_state_vector(p: &PairAmplitudes) -> ComplexVector {
    ComplexVector::from_real(&[p.u, 0.0, 0.0, p.v]).expect("4-dim vector")
}

/// One pair representative `α > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BcsMode {
    pub label: String,
    amplitudes: PairAmplitudes,
    gap: Option<GapTriple>,
    /// `T_αα`.
    pub t_diag: f64,
}

impl BcsMode {
    pub fn from_amplitudes(
        label: impl Into<String>,
        amplitudes: PairAmplitudes,
        t_diag: f64,
    ) -> Self {
        Self {
            label: label.into(),
            amplitudes,
            gap: None,
            t_diag,
        }
    }

    pub fn from_gap(label: impl Into<String>, gap: GapTriple, t_diag: f64) -> Result<Self> {
        Ok(Self {
            label: label.into(),
            amplitudes: uv_from_gap(&gap)?,
            gap: Some(gap),
            t_diag,
        })
    }

    /// Attaches a gap to explicit amplitudes, checking `2uv = Δ/E`.
    pub fn with_gap(mut self, gap: GapTriple) -> Result<Self> {
        let ratio = gap.gap_ratio()?;
        let stored = gap_ratio_from_uv(&self.amplitudes);
        if (ratio - stored).abs() > GAP_CONSISTENCY_TOL {
            return Err(Error::Invalid(alloc::format!(
                "mode {}: 2uv = {stored} but Δ/E = {ratio}",
                self.label
            )));
        }
        self.gap = Some(gap);
        Ok(self)
    }

    pub fn amplitudes(&self) -> &PairAmplitudes {
        &self.amplitudes
    }

    pub fn gap(&self) -> Option<&GapTriple> {
        self.gap.as_ref()
    }
}

/// Pair representatives, kept sorted by label so every sum has a fixed order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BcsModel {
    modes: Vec<BcsMode>,
}

impl BcsModel {
    pub fn new(mut modes: Vec<BcsMode>) -> Result<Self> {
        modes.sort_by(|a, b| a.label.cmp(&b.label));
        if let Some(w) = modes.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::Invalid(alloc::format!(
                "duplicate mode label {}",
                w[0].label
            )));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[BcsMode] {
        &self.modes
    }
}

/// `log₂(1 + 2uv)` for one pair.
pub fn pair_log_negativity(p: &PairAmplitudes) -> f64 {
    (1.0 + gap_ratio_from_uv(p)).log2()
}

/// `Σ_α log₂(1 + 2 u_α v_α)`.
pub fn bcs_log_negativity_total(model: &BcsModel) -> f64 {
    let mut acc = CompensatedSum::new();
    for mode in &model.modes {
        acc.add(pair_log_negativity(&mode.amplitudes));
    }
    acc.value()
}

/// Partner `β` contribution to the pair energy of `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTerm {
    pub partner: String,
    /// `⟨αβ|V|αβ⟩`.
    pub matrix_element: f64,
    /// `v_β²`.
    pub occupation: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteractionRow {
    terms: Vec<InteractionTerm>,
}

impl InteractionRow {
    pub fn new(terms: Vec<InteractionTerm>) -> Result<Self> {
        for t in &terms {
            if !(0.0..=1.0).contains(&t.occupation) {
                return Err(domain("occupation", t.occupation, "[0, 1]"));
            }
            if !t.matrix_element.is_finite() {
                return Err(domain("matrix element", t.matrix_element, "finite reals"));
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[InteractionTerm] {
        &self.terms
    }
}

/// `ε_α = T_αα + Σ_β ⟨αβ|V|αβ⟩ v_β²`.
pub fn pair_energy_epsilon(t_diag: f64, row: &InteractionRow) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.add(t_diag);
    for t in &row.terms {
        acc.add(t.matrix_element * t.occupation);
    }
    acc.value()
}

/// Mean-field ground-state energy.
///
/// Each listed mode stands for the pair `(α, −α)`, so the Hartree-Fock sum
/// `Σ_α ½(T + ε)v²` over all single-particle labels contributes `(T + ε)v²`
/// per representative. The condensation term `−½ Δ²/E` is counted once per
/// representative.
pub fn bcs_ground_state_energy(model: &BcsModel) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for mode in &model.modes {
        let gap = mode.gap.ok_or_else(|| {
            Error::Invalid(alloc::format!("mode {} has no gap parameters", mode.label))
        })?;
        let e = gap.quasiparticle_energy();
        if e == 0.0 {
            return Err(Error::DegenerateGap);
        }
        acc.add((mode.t_diag + gap.epsilon) * mode.amplitudes.occupation());
        acc.add(-0.5 * gap.delta * gap.delta / e);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::negativity;
    use crate::tensor::BipartiteShape;
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn uv_examples() {
        let p = uv_from_gap(&GapTriple::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        assert!((p.u() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((p.v() - FRAC_1_SQRT_2).abs() < 1e-15);

        // u² + v² = 1 and 2uv = 3/5: u² = 0.9, v² = 0.1.
        let p = uv_from_gap(&GapTriple::new(3.0, 4.0, 0.0).unwrap()).unwrap();
        assert!((p.u() - 0.9f64.sqrt()).abs() < 1e-15);
        assert!((p.v() - 0.1f64.sqrt()).abs() < 1e-15);
        assert!((p.u() * p.v() - 0.3).abs() < 1e-15);
        assert!((p.u() - 0.948_683).abs() < 1e-6 && (p.v() - 0.316_228).abs() < 1e-6);

        let p = uv_from_gap(&GapTriple::new(0.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!((p.u(), p.v()), (1.0, 0.0));
        let p = uv_from_gap(&GapTriple::new(0.0, -1.0, 0.0).unwrap()).unwrap();
        assert_eq!((p.u(), p.v()), (0.0, 1.0));
    }

    #[test]
    fn degenerate_gap_is_rejected() {
        let g = GapTriple::new(0.0, 0.5, 0.5).unwrap();
        assert_eq!(uv_from_gap(&g), Err(Error::DegenerateGap));
        assert!(GapTriple::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn gap_ratio_examples() {
        let p = PairAmplitudes::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        assert!((gap_ratio_from_uv(&p) - 1.0).abs() < 1e-15);
        assert_eq!(
            gap_ratio_from_uv(&PairAmplitudes::new(1.0, 0.0).unwrap()),
            0.0
        );
        let p = PairAmplitudes::new(0.9f64.sqrt(), 0.1f64.sqrt()).unwrap();
        assert!((gap_ratio_from_uv(&p) - 0.6).abs() < 1e-15);
        assert!(PairAmplitudes::new(0.6, 0.6).is_err());
        assert!(PairAmplitudes::new(-0.6, 0.8).is_err());
    }

    #[test]
    fn pair_vectors() {
        let vac = pair_state_vector(&PairAmplitudes::new(1.0, 0.0).unwrap());
        assert_eq!(vac, ComplexVector::basis(4, 0).unwrap());
        let full = pair_state_vector(&PairAmplitudes::new(0.0, 1.0).unwrap());
        assert_eq!(full, ComplexVector::basis(4, 3).unwrap());
        let bell = pair_state_vector(&PairAmplitudes::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap());
        let n = negativity(&bell.projector(), BipartiteShape::new(2, 2).unwrap()).unwrap();
        assert!((n - 0.5).abs() < 1e-12);
    }

    #[test]
    fn total_log_negativity_examples() {
        let hf = BcsModel::new(vec![
            BcsMode::from_amplitudes("a", PairAmplitudes::new(1.0, 0.0).unwrap(), 0.0),
            BcsMode::from_amplitudes("b", PairAmplitudes::new(0.0, 1.0).unwrap(), 0.0),
        ])
        .unwrap();
        assert_eq!(bcs_log_negativity_total(&hf), 0.0);

        let one = BcsModel::new(vec![BcsMode::from_amplitudes(
            "a",
            PairAmplitudes::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap(),
            0.0,
        )])
        .unwrap();
        assert!((bcs_log_negativity_total(&one) - 1.0).abs() < 1e-15);

        let two = BcsModel::new(vec![
            BcsMode::from_gap("k1", GapTriple::new(3.0, 4.0, 0.0).unwrap(), 0.0).unwrap(),
            BcsMode::from_amplitudes(
                "k2",
                PairAmplitudes::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap(),
                0.0,
            ),
        ])
        .unwrap();
        // log2(1.6) + 1
        assert!((bcs_log_negativity_total(&two) - 1.678_071_905_112_638).abs() < 1e-12);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let m = BcsMode::from_amplitudes("a", PairAmplitudes::new(1.0, 0.0).unwrap(), 0.0);
        assert!(BcsModel::new(vec![m.clone(), m]).is_err());
    }

    #[test]
    fn with_gap_checks_consistency() {
        let m = BcsMode::from_amplitudes("a", PairAmplitudes::new(1.0, 0.0).unwrap(), 0.0);
        assert!(m
            .clone()
            .with_gap(GapTriple::new(1.0, 0.0, 0.0).unwrap())
            .is_err());
        assert!(m.with_gap(GapTriple::new(0.0, 1.0, 0.0).unwrap()).is_ok());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(pair_energy_epsilon(1.5, &InteractionRow::default()), 1.5);
        let row = InteractionRow::new(vec![InteractionTerm {
            partner: "b".into(),
            matrix_element: -0.5,
            occupation: 0.4,
        }])
        .unwrap();
        assert!((pair_energy_epsilon(1.0, &row) - 0.8).abs() < 1e-15);
        let row = InteractionRow::new(vec![
            InteractionTerm {
                partner: "b".into(),
                matrix_element: 1.0,
                occupation: 0.5,
            },
            InteractionTerm {
                partner: "c".into(),
                matrix_element: -1.0,
                occupation: 0.5,
            },
        ])
        .unwrap();
        assert_eq!(pair_energy_epsilon(0.0, &row), 0.0);
        assert!(InteractionRow::new(vec![InteractionTerm {
            partner: "b".into(),
            matrix_element: 1.0,
            occupation: 1.5,
        }])
        .is_err());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(bcs_ground_state_energy(&BcsModel::default()).unwrap(), 0.0);

        let one = BcsModel::new(vec![BcsMode::from_gap(
            "a",
            GapTriple::new(2.0, 0.0, 0.0).unwrap(),
            0.0,
        )
        .unwrap()])
        .unwrap();
        assert!((bcs_ground_state_energy(&one).unwrap() + 1.0).abs() < 1e-15);

        // Δ = 0 everywhere: only the Hartree-Fock term survives; v = 1 below μ.
        let hf = BcsModel::new(vec![
            BcsMode::from_gap("a", GapTriple::new(0.0, -1.0, 0.0).unwrap(), -2.0).unwrap(),
            BcsMode::from_gap("b", GapTriple::new(0.0, 1.0, 0.0).unwrap(), 0.5).unwrap(),
        ])
        .unwrap();
        assert_eq!(bcs_ground_state_energy(&hf).unwrap(), -3.0);

        let no_gap = BcsModel::new(vec![BcsMode::from_amplitudes(
            "a",
            PairAmplitudes::new(1.0, 0.0).unwrap(),
            0.0,
        )])
        .unwrap();
        assert!(bcs_ground_state_energy(&no_gap).is_err());
    }
}

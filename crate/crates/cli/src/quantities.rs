//! Quantity catalog and per-model evaluation.

use entord_core::bcs::{self, BcsMode, BcsModel, GapTriple, PairAmplitudes};
use entord_core::bh::{self, BinomialSchmidt, CltVariant, SuperfluidSpec};
use entord_core::eta::{self, DickeSpec, FillingRatio};
use entord_core::measures::{self, OptimizerConfig};
use entord_core::tensor::MultipartiteShape;

use crate::report::{Param, Row};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Bcs,
    Eta,
    Bh,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Bcs => "bcs",
            Model::Eta => "eta",
            Model::Bh => "bh",
        }
    }
}

pub struct QuantityInfo {
    pub model: Model,
    pub name: &'static str,
    pub summary: &'static str,
    /// Evaluated when `--quantities` is omitted.
    pub default: bool,
}

const fn q(model: Model, name: &'static str, summary: &'static str, default: bool) -> QuantityInfo {
    QuantityInfo {
        model,
        name,
        summary,
        default,
    }
}

pub const CATALOG: &[QuantityInfo] = &[
    q(
        Model::Bcs,
        "log_negativity",
        "total momentum-space log-negativity, bits",
        true,
    ),
    q(
        Model::Bcs,
        "pair_log_negativity",
        "log2(1 + 2uv) per mode",
        true,
    ),
    q(Model::Bcs, "gap_ratio", "2uv per mode", true),
    q(Model::Bcs, "occupation", "v^2 per mode", true),
    q(
        Model::Bcs,
        "energy",
        "mean-field ground-state energy (needs --gaps)",
        true,
    ),
    q(
        Model::Eta,
        "rdm",
        "two-site weights p_empty_empty, p_occ_occ, w_psi_plus",
        true,
    ),
    q(Model::Eta, "alpha", "order parameter alpha = c", true),
    q(
        Model::Eta,
        "correlator",
        "pair correlator <eta_i^+ eta_j>",
        true,
    ),
    q(
        Model::Eta,
        "gme",
        "closed-form geometric measure LR_G, bits",
        true,
    ),
    q(
        Model::Eta,
        "gme_optimizer",
        "geometric measure by seeded optimization (n <= 12)",
        false,
    ),
    q(
        Model::Eta,
        "fef",
        "fully entangled fraction of the two-site state",
        true,
    ),
    q(Model::Eta, "teleport_fidelity", "(2 fef + 1)/3", true),
    q(
        Model::Eta,
        "de_paper",
        "h((1 - sqrt(1 - alpha))/2) at alpha",
        true,
    ),
    q(
        Model::Eta,
        "asymptotics",
        "lrg, lrg_per_site, density_claim, log_asymptote",
        false,
    ),
    q(Model::Eta, "lrg", "exact LR_G", false),
    q(Model::Eta, "lrg_per_site", "LR_G / n", false),
    q(Model::Eta, "density_claim", "extensive claim h(r)", false),
    q(
        Model::Eta,
        "log_asymptote",
        "1/2 log2(2 pi n r(1-r))",
        false,
    ),
    q(Model::Eta, "alpha_limit", "2r(1-r)", false),
    q(
        Model::Bh,
        "schmidt",
        "one-well Schmidt coefficients, schmidt.<k>",
        false,
    ),
    q(
        Model::Bh,
        "negativity.exact",
        "exact binomial negativity",
        true,
    ),
    q(
        Model::Bh,
        "negativity.clt.paper",
        "((8Np(1-p))^(1/2) - 1)/2",
        true,
    ),
    q(
        Model::Bh,
        "negativity.clt.corrected",
        "sqrt(2 pi Np(1-p)) - 1/2",
        true,
    ),
    q(
        Model::Bh,
        "negativity.poisson",
        "Poisson-limit negativity at lambda = N/M",
        true,
    ),
    q(Model::Bh, "odlro", "<a_i^+ a_j> = N/M", true),
    q(Model::Bh, "r", "sqrt(N/M)", true),
];

/// Shorthands accepted on the command line.
const ALIASES: &[(Model, &str, &str)] = &[(Model::Bh, "negativity", "negativity.exact")];

/// Requested quantities; `explicit` is false when defaults were filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub names: Vec<&'static str>,
    pub explicit: bool,
}

pub fn select(model: Model, list: Option<&str>) -> Result<Selection, CliError> {
    let Some(list) = list else {
        let names = CATALOG
            .iter()
            .filter(|i| i.model == model && i.default)
            .map(|i| i.name)
            .collect();
        return Ok(Selection {
            names,
            explicit: false,
        });
    };
    let mut names = Vec::new();
    for raw in list.split(',').map(str::trim) {
        let raw = ALIASES
            .iter()
            .find(|(m, a, _)| *m == model && *a == raw)
            .map_or(raw, |(_, _, c)| c);
        let info = CATALOG
            .iter()
            .find(|i| i.model == model && i.name == raw)
            .ok_or_else(|| CliError::Usage(format!("unknown {} quantity '{raw}'", model.name())))?;
        if !names.contains(&info.name) {
            names.push(info.name);
        }
    }
    if names.is_empty() {
        return Err(CliError::Usage("empty quantity list".into()));
    }
    Ok(Selection {
        names,
        explicit: true,
    })
}

/// One BCS mode as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeInput {
    Pair { u: f64, v: f64 },
    Gap(GapTriple),
}

/// Command-line amplitudes carry a handful of digits; within this distance of
/// the unit circle they are rescaled onto it.
pub const PAIR_INPUT_NORM_TOL: f64 = 1e-6;

fn mode_label(i: usize, count: usize) -> String {
    let width = count.to_string().len();
    format!("{:0width$}", i + 1)
}

pub fn eval_bcs(modes: &[ModeInput], t_diag: &[f64], sel: &Selection) -> Result<Row, CliError> {
    if !t_diag.is_empty() && t_diag.len() != modes.len() {
        return Err(CliError::Usage(format!(
            "--tdiag has {} entries for {} modes",
            t_diag.len(),
            modes.len()
        )));
    }
    let mut row = Row::new("bcs");
    row.param("modes", Param::Int(modes.len() as u64));
    let mut built = Vec::with_capacity(modes.len());
    for (i, m) in modes.iter().enumerate() {
        let label = mode_label(i, modes.len());
        let t = t_diag.get(i).copied().unwrap_or(0.0);
        match *m {
            ModeInput::Pair { u, v } => {
                row.param(format!("u.{label}"), Param::Real(u));
                row.param(format!("v.{label}"), Param::Real(v));
                let norm = (u * u + v * v).sqrt();
                if !(u >= 0.0 && v >= 0.0) || (norm * norm - 1.0).abs() > PAIR_INPUT_NORM_TOL {
                    return Err(CliError::Numeric(format!(
                        "mode {label}: u = {u}, v = {v} need u, v >= 0 and u^2 + v^2 = 1"
                    )));
                }
                let p = PairAmplitudes::new(u / norm, v / norm)?;
                built.push(BcsMode::from_amplitudes(label, p, t));
            }
            ModeInput::Gap(g) => {
                row.param(format!("delta.{label}"), Param::Real(g.delta));
                row.param(format!("epsilon.{label}"), Param::Real(g.epsilon));
                row.param(format!("mu.{label}"), Param::Real(g.mu));
                built.push(BcsMode::from_gap(label, g, t)?);
            }
        }
        if !t_diag.is_empty() {
            row.param(
                format!("tdiag.{}", mode_label(i, modes.len())),
                Param::Real(t),
            );
        }
    }
    let model = BcsModel::new(built)?;
    let has_gaps = model.modes().iter().all(|m| m.gap().is_some());
    for &name in &sel.names {
        match name {
            "log_negativity" => row.quantity(name, bcs::bcs_log_negativity_total(&model))?,
            "pair_log_negativity" | "gap_ratio" | "occupation" => {
                for m in model.modes() {
                    let p = m.amplitudes();
                    let v = match name {
                        "pair_log_negativity" => bcs::pair_log_negativity(p),
                        "gap_ratio" => bcs::gap_ratio_from_uv(p),
                        _ => p.occupation(),
                    };
                    row.quantity(format!("{name}.{}", m.label), v)?;
                }
            }
            "energy" => {
                if has_gaps {
                    row.quantity(name, bcs::bcs_ground_state_energy(&model)?)?;
                } else if sel.explicit {
                    return Err(CliError::Numeric("energy needs --gaps".into()));
                }
            }
            _ => unreachable!("catalog name {name}"),
        }
    }
    Ok(row)
}

/// An η-pairing point: `k` explicit, or derived from `r` by rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPoint {
    pub n: u64,
    pub k: Option<u64>,
    pub r: Option<f64>,
}

pub fn eval_eta(
    p: EtaPoint,
    sel: &Selection,
    cfg: &OptimizerConfig,
    notes: &mut Vec<String>,
) -> Result<Row, CliError> {
    let spec = match (p.k, p.r) {
        (Some(k), None) => DickeSpec::new(p.n, k)?,
        (None, Some(r)) => DickeSpec::from_filling(p.n, FillingRatio::new(r)?)?,
        (Some(_), Some(_)) => return Err(CliError::Usage("give either k or r, not both".into())),
        (None, None) => return Err(CliError::Usage("need k or r".into())),
    };
    let mut row = Row::new("eta");
    row.param("n", Param::Int(spec.n));
    row.param("k", Param::Int(spec.k));
    if let Some(r) = p.r {
        row.param("r", Param::Real(r));
    }
    let filling = FillingRatio::new(p.r.unwrap_or(spec.k as f64 / spec.n as f64))?;
    let two_site = spec.n >= 2;
    let asymptotics = || -> Result<eta::AsymptoticsRow, CliError> {
        let a = eta::dicke_asymptotics_report(filling, &[spec.n])?[0];
        if a.k != spec.k {
            return Err(CliError::Numeric(format!(
                "filling {} rounds to k = {}, not {}",
                filling.value(),
                a.k,
                spec.k
            )));
        }
        Ok(a)
    };
    for &name in &sel.names {
        if !two_site
            && !sel.explicit
            && matches!(
                name,
                "rdm" | "alpha" | "correlator" | "fef" | "teleport_fidelity" | "de_paper"
            )
        {
            continue;
        }
        match name {
            "rdm" => {
                let rdm = eta::eta_two_site_rdm(&spec)?;
                row.quantity("rdm.p_empty_empty", rdm.p_empty_empty)?;
                row.quantity("rdm.p_occ_occ", rdm.p_occ_occ)?;
                row.quantity("rdm.w_psi_plus", rdm.w_psi_plus)?;
            }
            "alpha" => row.quantity(name, eta::alpha_order_parameter(&spec)?)?,
            "correlator" => row.quantity(name, eta::odlro_pair_correlator(&spec)?)?,
            "gme" => row.quantity(name, eta::gme_dicke_closed_form(&spec))?,
            "gme_optimizer" => {
                let psi = eta::dicke_state_vector(&spec)?;
                let shape = MultipartiteShape::qubits(spec.n as usize)?;
                let gm = measures::geometric_measure(&psi, &shape, cfg)?;
                if !gm.overlap.converged {
                    notes.push(format!(
                        "gme_optimizer at n={} k={} stopped before converging",
                        spec.n, spec.k
                    ));
                }
                row.quantity(name, gm.bits)?;
            }
            "fef" | "teleport_fidelity" => {
                let rho = eta::eta_two_site_rdm(&spec)?.to_matrix();
                let fef = measures::fully_entangled_fraction(&rho, cfg)?;
                let v = if name == "fef" {
                    fef
                } else {
                    measures::teleportation_fidelity(fef)?
                };
                row.quantity(name, v)?;
            }
            "de_paper" => row.quantity(
                name,
                eta::de_from_alpha_paper(eta::alpha_order_parameter(&spec)?)?,
            )?,
            "asymptotics" => {
                let a = asymptotics()?;
                row.quantity("lrg", a.lrg)?;
                row.quantity("lrg_per_site", a.lrg_per_site)?;
                row.quantity("density_claim", a.density_claim)?;
                match a.log_asymptote {
                    Some(v) => row.quantity("log_asymptote", v)?,
                    None => notes.push(format!(
                        "log_asymptote undefined at r = {}",
                        filling.value()
                    )),
                }
            }
            "lrg" => row.quantity(name, asymptotics()?.lrg)?,
            "lrg_per_site" => row.quantity(name, asymptotics()?.lrg_per_site)?,
            "density_claim" => row.quantity(name, asymptotics()?.density_claim)?,
            "log_asymptote" => {
                let v = asymptotics()?.log_asymptote.ok_or_else(|| {
                    CliError::Numeric(format!(
                        "log_asymptote undefined at r = {}",
                        filling.value()
                    ))
                })?;
                row.quantity(name, v)?;
            }
            "alpha_limit" => row.quantity(name, eta::alpha_from_r(filling))?,
            _ => unreachable!("catalog name {name}"),
        }
    }
    Ok(row)
}

pub fn eval_bh(
    atoms: u64,
    sites: u64,
    sel: &Selection,
    notes: &mut Vec<String>,
) -> Result<Row, CliError> {
    let spec = SuperfluidSpec::new(atoms, sites)?;
    let mut row = Row::new("bh");
    row.param("atoms", Param::Int(atoms));
    row.param("sites", Param::Int(sites));
    for &name in &sel.names {
        match name {
            "schmidt" => {
                let (k_lo, coefficients) = BinomialSchmidt::from_spec(&spec).window();
                for (i, c) in coefficients.into_iter().enumerate() {
                    if c > 0.0 {
                        row.quantity(format!("schmidt.{}", k_lo + i as u64), c)?;
                    }
                }
            }
            "negativity.exact" => row.quantity(name, bh::superfluid_negativity_exact(&spec))?,
            "negativity.clt.paper" | "negativity.clt.corrected" => {
                if sites == 1 && !sel.explicit {
                    continue;
                }
                let variant = if name.ends_with("paper") {
                    CltVariant::Paper
                } else {
                    CltVariant::Corrected
                };
                let est = bh::superfluid_negativity_clt(&spec, variant)?;
                if est.low_confidence {
                    notes.push(format!(
                        "{name} at N={atoms} M={sites}: Np(1-p) < {}",
                        bh::CLT_MIN_VARIANCE
                    ));
                }
                row.quantity(name, est.value)?;
            }
            "negativity.poisson" => {
                let lambda = atoms as f64 / sites as f64;
                row.quantity(name, bh::superfluid_negativity_poisson_limit(lambda)?)?;
            }
            "odlro" => row.quantity(name, bh::bh_odlro_correlator(&spec))?,
            "r" => row.quantity(name, bh::bh_order_parameter_r(&spec))?,
            _ => unreachable!("catalog name {name}"),
        }
    }
    Ok(row)
}

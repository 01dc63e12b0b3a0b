//! SINR, rate and outage evaluation for one channel realization.
//!
//! Edge user: non-coherent joint transmission from the cooperative BSs, each
//! through its own RIS-assisted effective channel. Non-cooperative BSs
//! interfere at full power through their effective channels.
//!
//! Center users: direct links only. The SIC stage decodes the edge signal
//! first, then the user's own signal.

use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::pbf::{ElementMode, PhasePlan};
use crate::topology::{rate_to_sinr, NetworkTopology, Thresholds};

/// `direct + sum_k out_k e^{j theta_k} in_k`.
pub fn effective_channel(
    direct: Complex64,
    ris_in: &[Complex64],
    phases: &[f64],
    ris_out: &[Complex64],
) -> Result<Complex64> {
    if ris_in.len() != phases.len() {
        return Err(Error::LengthMismatch {
            what: "incident channel vs phases",
            left: ris_in.len(),
            right: phases.len(),
        });
    }
    if ris_out.len() != phases.len() {
        return Err(Error::LengthMismatch {
            what: "reflected channel vs phases",
            left: ris_out.len(),
            right: phases.len(),
        });
    }
    Ok(direct
        + ris_in
            .iter()
            .zip(phases)
            .zip(ris_out)
            .map(|((i, &theta), o)| o * Complex64::from_polar(1.0, theta) * i)
            .sum::<Complex64>())
}

/// Effective channel of BS `bs` to the edge user under `plan`. Elements in
/// `Off` mode do not reflect.
pub fn edge_effective_channel(realization: &ChannelRealization, plan: &PhasePlan, bs: usize) -> Complex64 {
    let direct = realization.edge_direct[bs];
    let (Some(phases), Some(modes)) = (plan.phases.get(bs), plan.modes.0.get(bs)) else {
        return direct;
    };
    direct
        + realization
            .cascade(bs)
            .zip(phases)
            .zip(modes)
            .filter(|(_, &mode)| mode != ElementMode::Off)
            .map(|((c, &theta), _)| c * Complex64::from_polar(1.0, theta))
            .sum::<Complex64>()
}

/// `|H^e_{b,f}|^2` for every BS.
pub fn edge_gains(realization: &ChannelRealization, plan: &PhasePlan) -> Vec<f64> {
    (0..realization.cells())
        .map(|bs| edge_effective_channel(realization, plan, bs).norm_sqr())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinrBundle {
    pub gamma_edge: f64,
    pub gamma_center_sic: Vec<f64>,
    pub gamma_center: Vec<f64>,
    /// Inter-cell interference power at the edge user, `Y_f`.
    pub y_edge: f64,
    /// Inter-cell interference power at each center user, `Y_i`.
    pub y_center: Vec<f64>,
}

/// Edge SINR from effective channel gains. `coop_gains` and `noncoop_gains`
/// are `|H|^2` of the cooperative and non-cooperative BSs.
pub fn edge_sinr_from_gains(coop_gains: &[f64], noncoop_gains: &[f64], zeta: f64, power: f64, noise: f64) -> f64 {
    let coop: f64 = coop_gains.iter().sum();
    let y: f64 = noncoop_gains.iter().map(|g| power * g).sum();
    zeta * power * coop / ((1.0 - zeta) * power * coop + y + noise)
}

/// `Y_i`: full-power interference from non-cooperative BSs other than the
/// user's own.
fn center_interference(realization: &ChannelRealization, topology: &NetworkTopology, cell: usize) -> f64 {
    let p = topology.power.pt_watts();
    (0..topology.cells)
        .filter(|&m| !topology.is_coop(m) && m != cell)
        .map(|m| p * realization.center_direct[m][cell].norm_sqr())
        .sum()
}

fn edge_interference(gains: &[f64], topology: &NetworkTopology) -> f64 {
    let p = topology.power.pt_watts();
    gains
        .iter()
        .enumerate()
        .filter(|&(m, _)| !topology.is_coop(m))
        .map(|(_, g)| p * g)
        .sum()
}

pub fn sinr_edge(realization: &ChannelRealization, plan: &PhasePlan, topology: &NetworkTopology) -> f64 {
    let gains = edge_gains(realization, plan);
    sinr_edge_with(&gains, topology)
}

fn sinr_edge_with(gains: &[f64], topology: &NetworkTopology) -> f64 {
    let (coop, noncoop) = gains.split_at(topology.coop);
    edge_sinr_from_gains(
        coop,
        noncoop,
        topology.power.zeta,
        topology.power.pt_watts(),
        topology.noise_watts(),
    )
}

/// SINR at center user `cell` when decoding the edge user's signal.
pub fn sinr_center_sic(realization: &ChannelRealization, topology: &NetworkTopology, cell: usize) -> f64 {
    let p = topology.power.pt_watts();
    let zeta = topology.power.zeta;
    let coop_gain: f64 = (0..topology.coop)
        .map(|j| realization.center_direct[j][cell].norm_sqr())
        .sum();
    let y = center_interference(realization, topology, cell);
    zeta * p * coop_gain / ((1.0 - zeta) * p * coop_gain + y + topology.noise_watts())
}

/// SINR at center user `cell` when decoding its own signal after SIC.
pub fn sinr_center(realization: &ChannelRealization, topology: &NetworkTopology, cell: usize) -> f64 {
    let p = topology.power.pt_watts();
    let zeta = topology.power.zeta;
    let own = realization.center_direct[cell][cell].norm_sqr();
    let intra: f64 = (0..topology.coop)
        .filter(|&j| j != cell)
        .map(|j| (1.0 - zeta) * p * realization.center_direct[j][cell].norm_sqr())
        .sum();
    let y = center_interference(realization, topology, cell);
    (1.0 - zeta) * p * own / (intra + y + topology.noise_watts())
}

pub fn sinr_bundle(realization: &ChannelRealization, plan: &PhasePlan, topology: &NetworkTopology) -> SinrBundle {
    let gains = edge_gains(realization, plan);
    let cells = 0..topology.cells;
    SinrBundle {
        gamma_edge: sinr_edge_with(&gains, topology),
        gamma_center_sic: cells
            .clone()
            .map(|c| sinr_center_sic(realization, topology, c))
            .collect(),
        gamma_center: cells.clone().map(|c| sinr_center(realization, topology, c)).collect(),
        y_edge: edge_interference(&gains, topology),
        y_center: cells.map(|c| center_interference(realization, topology, c)).collect(),
    }
}

/// Achievable rate `log2(1 + gamma)` in bps/Hz.
pub fn rate(gamma: f64) -> f64 {
    gamma.ln_1p() / std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Access {
    Noma,
    Oma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub rate_edge: f64,
    pub rate_center: Vec<f64>,
    pub outage_edge: bool,
    pub outage_center: Vec<bool>,
    pub access: Access,
}

/// Edge outage: `gamma < gamma_hat` (equality is an outage).
pub fn edge_outage(gamma_edge: f64, gamma_hat_edge: f64) -> bool {
    !(gamma_edge > gamma_hat_edge)
}

/// Center outage: the user must decode both the edge signal and its own.
pub fn center_outage(gamma_sic: f64, gamma_own: f64, th: &Thresholds) -> bool {
    !(gamma_sic > th.gamma_hat_edge && gamma_own > th.gamma_hat_center)
}

pub fn outcome_from_bundle(bundle: &SinrBundle, thresholds: &Thresholds) -> TrialOutcome {
    TrialOutcome {
        rate_edge: rate(bundle.gamma_edge),
        rate_center: bundle.gamma_center.iter().map(|&g| rate(g)).collect(),
        outage_edge: edge_outage(bundle.gamma_edge, thresholds.gamma_hat_edge),
        outage_center: bundle
            .gamma_center_sic
            .iter()
            .zip(&bundle.gamma_center)
            .map(|(&sic, &own)| center_outage(sic, own, thresholds))
            .collect(),
        access: Access::Noma,
    }
}

pub fn evaluate_trial(
    realization: &ChannelRealization,
    plan: &PhasePlan,
    topology: &NetworkTopology,
    thresholds: &Thresholds,
) -> TrialOutcome {
    outcome_from_bundle(&sinr_bundle(realization, plan, topology), thresholds)
}

/// OMA baseline: each cell splits its resource into two equal halves. In the
/// first half every BS serves its center user at full power; in the second
/// the cooperative BSs jointly serve the edge user at full power while the
/// non-cooperative BSs interfere. Rates are halved and the SINR targets are
/// `2^{2 R_th} - 1` so the target rates stay comparable with NOMA.
pub fn evaluate_trial_oma(
    realization: &ChannelRealization,
    plan: &PhasePlan,
    topology: &NetworkTopology,
    thresholds: &Thresholds,
) -> TrialOutcome {
    let p = topology.power.pt_watts();
    let noise = topology.noise_watts();
    let gains = edge_gains(realization, plan);
    let coop: f64 = gains[..topology.coop].iter().sum();
    let gamma_edge = p * coop / (edge_interference(&gains, topology) + noise);
    let target_edge = rate_to_sinr(2.0 * thresholds.rate_edge);
    let target_center = rate_to_sinr(2.0 * thresholds.rate_center);

    let gamma_center: Vec<f64> = (0..topology.cells)
        .map(|c| {
            let own = p * realization.center_direct[c][c].norm_sqr();
            let other: f64 = (0..topology.cells)
                .filter(|&k| k != c)
                .map(|k| p * realization.center_direct[k][c].norm_sqr())
                .sum();
            own / (other + noise)
        })
        .collect();

    TrialOutcome {
        rate_edge: 0.5 * rate(gamma_edge),
        rate_center: gamma_center.iter().map(|&g| 0.5 * rate(g)).collect(),
        outage_edge: edge_outage(gamma_edge, target_edge),
        outage_center: gamma_center.iter().map(|&g| !(g > target_center)).collect(),
        access: Access::Oma,
    }
}

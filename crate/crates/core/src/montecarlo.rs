//! Trial fan-out and aggregation.
//!
//! Trials run on the current rayon pool and are collected in trial order;
//! every reduction afterwards is a fixed-order pairwise sum over that vector,
//! so results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{realize_channels, TrialStream};
use crate::error::{Error, Result};
use crate::pbf::{assign_modes, build_phase_plan, ModeMap, Scheme};
use crate::phy::{evaluate_trial, evaluate_trial_oma, Access, TrialOutcome};
use crate::topology::{NetworkTopology, RateComposition};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSetup {
    pub scheme: Scheme,
    /// Fraction of each RIS in cancellation mode; overrides the scheme's
    /// per-RIS modes when set.
    pub split_ratio: Option<f64>,
    pub access: Access,
}

impl TrialSetup {
    pub fn noma(scheme: Scheme) -> Self {
        Self {
            scheme,
            split_ratio: None,
            access: Access::Noma,
        }
    }
}

/// Monte Carlo estimates for one user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UserEstimate {
    pub p_out: f64,
    pub mean_rate: f64,
    /// `(1 - p_out) * mean_rate`.
    pub r_out: f64,
    /// Mean over trials of `(1 - outage) * rate`.
    pub r_out_per_trial: f64,
    /// `sqrt(p (1 - p) / N)`.
    pub stderr_p_out: f64,
    pub stderr_rate: f64,
    /// Delta-method standard error of `r_out`.
    pub stderr_r_out: f64,
    pub stderr_r_out_per_trial: f64,
}

impl UserEstimate {
    fn from_samples(outage: &[f64], rate: &[f64]) -> Self {
        let n = outage.len() as f64;
        let p = pairwise_sum(outage) / n;
        let mean_rate = pairwise_sum(rate) / n;
        let success = 1.0 - p;
        let products: Vec<f64> = outage.iter().zip(rate).map(|(o, r)| (1.0 - o) * r).collect();
        let r_out_per_trial = pairwise_sum(&products) / n;
        // Linearization of the product of two means.
        let influence: Vec<f64> = outage
            .iter()
            .zip(rate)
            .map(|(o, r)| mean_rate * ((1.0 - o) - success) + success * (r - mean_rate))
            .collect();
        Self {
            p_out: p,
            mean_rate,
            r_out: success * mean_rate,
            r_out_per_trial,
            stderr_p_out: (p * (1.0 - p) / n).sqrt(),
            stderr_rate: stderr_of_mean(rate, mean_rate),
            stderr_r_out: stderr_of_mean(&influence, 0.0),
            stderr_r_out_per_trial: stderr_of_mean(&products, r_out_per_trial),
        }
    }

    pub fn effective_rate(&self, composition: RateComposition) -> f64 {
        match composition {
            RateComposition::Literal => self.r_out,
            RateComposition::PerTrial => self.r_out_per_trial,
        }
    }

    pub fn effective_rate_stderr(&self, composition: RateComposition) -> f64 {
        match composition {
            RateComposition::Literal => self.stderr_r_out,
            RateComposition::PerTrial => self.stderr_r_out_per_trial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimates {
    pub edge: UserEstimate,
    pub center: Vec<UserEstimate>,
    pub trials: u64,
    pub seed: u64,
    pub composition: RateComposition,
    /// RIS with at least one reflecting element, per cell.
    pub ris_active: Vec<bool>,
    /// Elements whose cascade was exactly zero, summed over trials.
    pub degenerate_elements: u64,
}

impl Estimates {
    pub fn p_out_center_mean(&self) -> f64 {
        self.center.iter().map(|c| c.p_out).sum::<f64>() / self.center.len() as f64
    }

    pub fn rate_center_sum(&self) -> f64 {
        self.center.iter().map(|c| c.mean_rate).sum()
    }

    fn ris_deployed(&self) -> bool {
        self.ris_active.iter().any(|&a| a)
    }
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn stderr_of_mean(xs: &[f64], mean: f64) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    (pairwise_sum(&sq) / (n - 1) as f64 / n as f64).sqrt()
}

pub fn run_trial(
    topology: &NetworkTopology,
    setup: &TrialSetup,
    modes: &ModeMap,
    trial: u64,
    seed: u64,
) -> (TrialOutcome, usize) {
    let realization = realize_channels(topology, trial, seed);
    let plan = build_phase_plan(&realization, modes, &TrialStream::new(seed, trial));
    let outcome = match setup.access {
        Access::Noma => evaluate_trial(&realization, &plan, topology, &topology.thresholds),
        Access::Oma => evaluate_trial_oma(&realization, &plan, topology, &topology.thresholds),
    };
    (outcome, plan.degenerate)
}

/// Runs trials `0..trials` on the current rayon pool.
pub fn run_trials(topology: &NetworkTopology, setup: &TrialSetup, trials: u64, seed: u64) -> Result<Estimates> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let modes = assign_modes(topology, setup.scheme, setup.split_ratio)?;
    let outcomes: Vec<(TrialOutcome, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(topology, setup, &modes, t, seed))
        .collect();
    Ok(aggregate(topology, &modes, &outcomes, trials, seed))
}

fn aggregate(
    topology: &NetworkTopology,
    modes: &ModeMap,
    outcomes: &[(TrialOutcome, usize)],
    trials: u64,
    seed: u64,
) -> Estimates {
    let indicator = |b: bool| if b { 1.0 } else { 0.0 };
    let edge_out: Vec<f64> = outcomes.iter().map(|(o, _)| indicator(o.outage_edge)).collect();
    let edge_rate: Vec<f64> = outcomes.iter().map(|(o, _)| o.rate_edge).collect();
    let center = (0..topology.cells)
        .map(|c| {
            let out: Vec<f64> = outcomes.iter().map(|(o, _)| indicator(o.outage_center[c])).collect();
            let rate: Vec<f64> = outcomes.iter().map(|(o, _)| o.rate_center[c]).collect();
            UserEstimate::from_samples(&out, &rate)
        })
        .collect();
    Estimates {
        edge: UserEstimate::from_samples(&edge_out, &edge_rate),
        center,
        trials,
        seed,
        composition: topology.options.rate_composition,
        ris_active: (0..topology.cells).map(|r| modes.is_active(r)).collect(),
        degenerate_elements: outcomes.iter().map(|(_, d)| *d as u64).sum(),
    }
}

/// Sum over users of the outage-weighted rate.
pub fn outage_sum_rate(estimates: &Estimates) -> f64 {
    outage_sum_rate_with(estimates, estimates.composition)
}

pub fn outage_sum_rate_with(estimates: &Estimates, composition: RateComposition) -> f64 {
    estimates
        .center
        .iter()
        .map(|c| c.effective_rate(composition))
        .sum::<f64>()
        + estimates.edge.effective_rate(composition)
}

/// Standard error of [`outage_sum_rate`]. Users are driven by disjoint sets of
/// fading links, so their estimates are independent.
pub fn outage_sum_rate_stderr(estimates: &Estimates) -> f64 {
    let comp = estimates.composition;
    estimates
        .center
        .iter()
        .chain(std::iter::once(&estimates.edge))
        .map(|u| u.effective_rate_stderr(comp).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Denominators of the energy-efficiency sum: one per center user and the
/// shared per-cooperative-BS denominator of the edge term, in watts.
fn ee_weights(estimates: &Estimates, topology: &NetworkTopology) -> (Vec<f64>, f64) {
    let p = &topology.power;
    let base = p.pt_watts() / p.lambda_amp + p.p_q_watts();
    let p_ris = if estimates.ris_deployed() {
        topology.ris_power_watts()
    } else {
        0.0
    };
    let center = (0..topology.cells)
        .map(|i| {
            let charged = topology.options.charge_all_ris
                && !topology.is_coop(i)
                && estimates.ris_active.get(i).copied().unwrap_or(false);
            1.0 / (base + if charged { p_ris } else { 0.0 })
        })
        .collect();
    (center, topology.coop as f64 / (base + p_ris))
}

/// Energy efficiency in bits/J/Hz:
/// `sum_i R_c,i / (P/lambda + P_Q) + sum_{j in J} R_f / (P/lambda + P_Q + K P_ele)`.
///
/// `P_R` is zero when no RIS element is active (no RIS deployed).
pub fn energy_efficiency(estimates: &Estimates, topology: &NetworkTopology) -> f64 {
    energy_efficiency_with(estimates, topology, estimates.composition)
}

pub fn energy_efficiency_with(estimates: &Estimates, topology: &NetworkTopology, composition: RateComposition) -> f64 {
    let (center_w, edge_w) = ee_weights(estimates, topology);
    estimates
        .center
        .iter()
        .zip(&center_w)
        .map(|(c, w)| c.effective_rate(composition) * w)
        .sum::<f64>()
        + estimates.edge.effective_rate(composition) * edge_w
}

pub fn energy_efficiency_stderr(estimates: &Estimates, topology: &NetworkTopology) -> f64 {
    let comp = estimates.composition;
    let (center_w, edge_w) = ee_weights(estimates, topology);
    let center: f64 = estimates
        .center
        .iter()
        .zip(&center_w)
        .map(|(c, w)| (c.effective_rate_stderr(comp) * w).powi(2))
        .sum();
    (center + (estimates.edge.effective_rate_stderr(comp) * edge_w).powi(2)).sqrt()
}

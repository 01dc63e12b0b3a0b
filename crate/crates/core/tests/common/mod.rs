//! Brute-force reference evaluation shared by the integration tests.
//!
//! Works from raw channel coefficients with explicit loops and its own unit
//! conversions; nothing here calls into `riscomp::phy`.

#![allow(dead_code)]

use num_complex::Complex64;
use riscomp::channel::ChannelRealization;
use riscomp::pbf::{ElementMode, PhasePlan};
use riscomp::NetworkTopology;

pub struct Reference {
    pub gamma_edge: f64,
    pub gamma_sic: Vec<f64>,
    pub gamma_own: Vec<f64>,
    pub rate_edge: f64,
    pub rate_center: Vec<f64>,
    pub outage_edge: bool,
    pub outage_center: Vec<bool>,
}

pub fn watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) / 1000.0
}

pub fn noise(bandwidth_hz: f64) -> f64 {
    watts(-174.0 + 10.0 * bandwidth_hz.log10())
}

/// `|h + sum_k g_k f_k e^{j theta_k}|^2`, skipping elements that do not reflect.
pub fn effective_gain(realization: &ChannelRealization, plan: &PhasePlan, bs: usize) -> f64 {
    let mut re = realization.edge_direct[bs].re;
    let mut im = realization.edge_direct[bs].im;
    if !realization.bs_to_ris.is_empty() {
        for k in 0..realization.bs_to_ris[bs].len() {
            if plan.modes.0[bs][k] == ElementMode::Off {
                continue;
            }
            let a = realization.bs_to_ris[bs][k];
            let b = realization.ris_to_edge[bs][k];
            let c_re = a.re * b.re - a.im * b.im;
            let c_im = a.re * b.im + a.im * b.re;
            let (s, c) = plan.phases[bs][k].sin_cos();
            re += c_re * c - c_im * s;
            im += c_re * s + c_im * c;
        }
    }
    re * re + im * im
}

fn abs2(z: Complex64) -> f64 {
    z.re * z.re + z.im * z.im
}

fn log2_1p(x: f64) -> f64 {
    (1.0 + x).log2()
}

pub fn evaluate(realization: &ChannelRealization, plan: &PhasePlan, topo: &NetworkTopology) -> Reference {
    let cells = topo.cells;
    let coop = topo.coop;
    let p = watts(topo.power.pt_dbm);
    let z = topo.power.zeta;
    let n0 = noise(topo.power.bandwidth_hz);
    let gh_edge = 2f64.powf(topo.thresholds.rate_edge) - 1.0;
    let gh_center = 2f64.powf(topo.thresholds.rate_center) - 1.0;

    let mut signal = 0.0;
    let mut interference = 0.0;
    for b in 0..cells {
        let g = effective_gain(realization, plan, b);
        if b < coop {
            signal += g;
        } else {
            interference += p * g;
        }
    }
    let gamma_edge = z * p * signal / ((1.0 - z) * p * signal + interference + n0);

    let mut gamma_sic = Vec::new();
    let mut gamma_own = Vec::new();
    for c in 0..cells {
        let mut coop_gain = 0.0;
        let mut coop_other = 0.0;
        let mut y = 0.0;
        for b in 0..cells {
            let g = abs2(realization.center_direct[b][c]);
            if b < coop {
                coop_gain += g;
                if b != c {
                    coop_other += g;
                }
            } else if b != c {
                y += p * g;
            }
        }
        gamma_sic.push(z * p * coop_gain / ((1.0 - z) * p * coop_gain + y + n0));
        let own = abs2(realization.center_direct[c][c]);
        gamma_own.push((1.0 - z) * p * own / ((1.0 - z) * p * coop_other + y + n0));
    }

    Reference {
        rate_edge: log2_1p(gamma_edge),
        rate_center: gamma_own.iter().map(|&g| log2_1p(g)).collect(),
        outage_edge: gamma_edge <= gh_edge,
        outage_center: gamma_sic
            .iter()
            .zip(&gamma_own)
            .map(|(&s, &o)| s <= gh_edge || o <= gh_center)
            .collect(),
        gamma_edge,
        gamma_sic,
        gamma_own,
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

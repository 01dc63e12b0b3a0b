//! Passive beamforming: per-element RIS phase shifts.
//!
//! Each BS reflects only off its own RIS, so the phases of `R_r` are computed
//! against BS `r`'s direct channel to the edge user and the cascade through
//! `R_r`.

use std::f64::consts::{PI, TAU};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, StreamId, TrialStream};
use crate::error::{Error, Result};
use crate::topology::{NetworkTopology, NonCoopRis};

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_phase(y: f64) -> f64 {
    let mut r = (y + PI).rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        r = 0.0;
    }
    r - PI
}

/// Phase that aligns the cascaded term with the direct channel:
/// `arg(direct) - arg(cascade)`. `None` when the cascade element is zero.
pub fn eo_phase(direct: Complex64, cascade: Complex64) -> Option<f64> {
    if cascade == Complex64::new(0.0, 0.0) {
        return None;
    }
    Some(wrap_phase(direct.arg() - cascade.arg()))
}

/// The enhancement phase rotated by pi, which anti-aligns the cascaded term.
pub fn co_phase(direct: Complex64, cascade: Complex64) -> Option<f64> {
    eo_phase(direct, cascade).map(|phi| wrap_phase(phi + PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementMode {
    /// Enhancement: align with the direct path.
    Eo,
    /// Cancellation: anti-align with the direct path.
    Co,
    Random,
    Off,
}

impl ElementMode {
    fn tag(self) -> &'static str {
        match self {
            ElementMode::Eo => "EO",
            ElementMode::Co => "CO",
            ElementMode::Random => "RANDOM",
            ElementMode::Off => "OFF",
        }
    }
}

/// Network-wide RIS configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// No RIS.
    None,
    Random,
    /// Cooperative RIS enhance; the others are off (or random, see
    /// [`NonCoopRis`]).
    Eo,
    /// Cooperative RIS enhance, non-cooperative RIS cancel.
    Ec,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::None => "none",
            Scheme::Random => "random",
            Scheme::Eo => "eo",
            Scheme::Ec => "ec",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Scheme::None),
            "random" => Ok(Scheme::Random),
            "eo" => Ok(Scheme::Eo),
            "ec" => Ok(Scheme::Ec),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Per-RIS, per-element modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeMap(pub Vec<Vec<ElementMode>>);

impl ModeMap {
    pub fn ris(&self, ris: usize) -> &[ElementMode] {
        &self.0[ris]
    }

    /// Whether any element of RIS `ris` reflects.
    pub fn is_active(&self, ris: usize) -> bool {
        self.0
            .get(ris)
            .is_some_and(|m| m.iter().any(|&e| e != ElementMode::Off))
    }

    pub fn count(&self, ris: usize, mode: ElementMode) -> usize {
        self.0[ris].iter().filter(|&&m| m == mode).count()
    }
}

pub fn assign_modes(topology: &NetworkTopology, scheme: Scheme, split_ratio: Option<f64>) -> Result<ModeMap> {
    let k = topology.ris_elements;
    if let Some(s) = split_ratio {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(format!(
                "split ratio must lie in [0, 1], got {s}"
            )));
        }
        // The epsilon keeps e.g. 0.29 * 100 from flooring to 28.
        let n_co = ((s * k as f64) + 1e-9).floor() as usize;
        let n_co = n_co.min(k);
        let per_ris: Vec<ElementMode> = (0..k)
            .map(|i| if i < n_co { ElementMode::Co } else { ElementMode::Eo })
            .collect();
        return Ok(ModeMap(vec![per_ris; topology.cells]));
    }
    let modes = (0..topology.cells)
        .map(|ris| {
            let coop = topology.is_coop(ris);
            let mode = match scheme {
                Scheme::None => ElementMode::Off,
                Scheme::Random => ElementMode::Random,
                Scheme::Eo if coop => ElementMode::Eo,
                Scheme::Eo => match topology.options.eo_noncoop {
                    NonCoopRis::Off => ElementMode::Off,
                    NonCoopRis::Random => ElementMode::Random,
                },
                Scheme::Ec if coop => ElementMode::Eo,
                Scheme::Ec => ElementMode::Co,
            };
            vec![mode; k]
        })
        .collect();
    Ok(ModeMap(modes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePlan {
    /// Phase per RIS and element, in `[-pi, pi)`.
    pub phases: Vec<Vec<f64>>,
    pub modes: ModeMap,
    /// Elements whose cascade was exactly zero; their phase is set to 0.
    pub degenerate: usize,
}

impl PhasePlan {
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (ris, (phases, modes)) in self.phases.iter().zip(&self.modes.0).enumerate() {
            for (k, (theta, mode)) in phases.iter().zip(modes).enumerate() {
                let _ = writeln!(s, "phase ris={ris} k={k} mode={} {:.16e}", mode.tag(), theta);
            }
        }
        s
    }
}

pub fn build_phase_plan(realization: &ChannelRealization, modes: &ModeMap, stream: &TrialStream) -> PhasePlan {
    let mut degenerate = 0;
    let phases = modes
        .0
        .iter()
        .enumerate()
        .map(|(ris, ris_modes)| {
            if ris_modes.is_empty() {
                return Vec::new();
            }
            let direct = realization.edge_direct[ris];
            let mut rng = ris_modes
                .contains(&ElementMode::Random)
                .then(|| stream.rng(StreamId::RisPhases { ris }));
            realization
                .cascade(ris)
                .zip(ris_modes)
                .map(|(cascade, mode)| {
                    let aligned = match mode {
                        ElementMode::Eo => eo_phase(direct, cascade),
                        ElementMode::Co => co_phase(direct, cascade),
                        ElementMode::Random => {
                            let rng = rng.as_mut().expect("stream opened for random elements");
                            return rng.random_range(-PI..PI);
                        }
                        ElementMode::Off => return 0.0,
                    };
                    aligned.unwrap_or_else(|| {
                        degenerate += 1;
                        0.0
                    })
                })
                .collect()
        })
        .collect();
    PhasePlan {
        phases,
        modes: modes.clone(),
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::realize_channels;
    use crate::topology::SimConfig;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit(phase: f64) -> Complex64 {
        Complex64::from_polar(1.0, phase)
    }

    #[test]
    fn eo_examples() {
        assert_relative_eq!(eo_phase(unit(0.0), unit(PI / 3.0)).unwrap(), -PI / 3.0, epsilon = 1e-15);
        assert_eq!(eo_phase(unit(0.4), unit(0.4)).unwrap(), 0.0);
        let theta = eo_phase(unit(0.3), unit(-1.2)).unwrap();
        let h = unit(0.3) + unit(-1.2) * unit(theta);
        assert_relative_eq!(h.norm(), 2.0, epsilon = 1e-14);
        assert_eq!(eo_phase(unit(0.3), Complex64::new(0.0, 0.0)), None);
    }

    #[test]
    fn co_examples() {
        // phi = 0
        assert_eq!(co_phase(unit(0.0), unit(0.0)).unwrap(), -PI);
        // phi = pi/2
        assert_relative_eq!(co_phase(unit(PI / 2.0), unit(0.0)).unwrap(), -PI / 2.0, epsilon = 1e-15);
        let theta = co_phase(unit(2.0), unit(0.7)).unwrap();
        let h = unit(2.0) + unit(0.7) * unit(theta);
        assert!(h.norm() < 1e-14);
    }

    #[test]
    fn wrap_edges() {
        assert_eq!(wrap_phase(PI), -PI);
        assert_eq!(wrap_phase(-PI), -PI);
        assert_eq!(wrap_phase(0.0), 0.0);
        let w = wrap_phase(-1e-18);
        assert!((-PI..PI).contains(&w));
        assert!((-PI..PI).contains(&wrap_phase(3.0 * PI - 1e-16)));
    }

    fn topo(cells: usize, coop: usize, k: usize) -> NetworkTopology {
        SimConfig {
            cells,
            coop,
            ris_elements: k,
            ..SimConfig::default()
        }
        .build()
        .unwrap()
    }

    #[test]
    fn ec_assignment() {
        let m = assign_modes(&topo(6, 4, 70), Scheme::Ec, None).unwrap();
        for ris in 0..4 {
            assert_eq!(m.count(ris, ElementMode::Eo), 70);
        }
        for ris in 4..6 {
            assert_eq!(m.count(ris, ElementMode::Co), 70);
        }
    }

    #[test]
    fn other_assignments() {
        let t = topo(6, 2, 5);
        let eo = assign_modes(&t, Scheme::Eo, None).unwrap();
        assert!(eo.is_active(1) && !eo.is_active(2));
        assert!(!assign_modes(&t, Scheme::None, None).unwrap().is_active(0));
        let r = assign_modes(&t, Scheme::Random, None).unwrap();
        assert_eq!(r.count(5, ElementMode::Random), 5);

        let mut t2 = t.clone();
        t2.options.eo_noncoop = NonCoopRis::Random;
        let eo = assign_modes(&t2, Scheme::Eo, None).unwrap();
        assert_eq!(eo.count(3, ElementMode::Random), 5);
    }

    #[test]
    fn split_assignment() {
        let t = topo(6, 3, 72);
        let zero = assign_modes(&t, Scheme::Ec, Some(0.0)).unwrap();
        assert!((0..6).all(|r| zero.count(r, ElementMode::Eo) == 72));
        let half = assign_modes(&t, Scheme::Ec, Some(0.5)).unwrap();
        for r in 0..6 {
            assert_eq!(half.count(r, ElementMode::Co), 36);
            assert_eq!(half.count(r, ElementMode::Eo), 36);
            assert_eq!(half.ris(r)[0], ElementMode::Co);
            assert_eq!(half.ris(r)[71], ElementMode::Eo);
        }
        let t100 = topo(6, 3, 100);
        let m = assign_modes(&t100, Scheme::Ec, Some(0.29)).unwrap();
        assert_eq!(m.count(0, ElementMode::Co), 29);
        assert!(assign_modes(&t, Scheme::Ec, Some(1.5)).is_err());
        assert!(assign_modes(&t, Scheme::Ec, Some(-0.1)).is_err());
    }

    #[test]
    fn off_plan_is_zero() {
        let t = topo(6, 4, 8);
        let real = realize_channels(&t, 0, 9);
        let modes = assign_modes(&t, Scheme::None, None).unwrap();
        let plan = build_phase_plan(&real, &modes, &TrialStream::new(9, 0));
        assert!(plan.phases.iter().flatten().all(|&p| p == 0.0));
        assert_eq!(plan.degenerate, 0);
    }

    #[test]
    fn random_plan_reproducible_and_uniform() {
        let t = topo(6, 4, 400);
        let real = realize_channels(&t, 3, 9);
        let modes = assign_modes(&t, Scheme::Random, None).unwrap();
        let a = build_phase_plan(&real, &modes, &TrialStream::new(9, 3));
        let b = build_phase_plan(&real, &modes, &TrialStream::new(9, 3));
        assert_eq!(a, b);
        let mut p: Vec<f64> = a.phases.iter().flatten().copied().collect();
        assert!(p.iter().all(|x| (-PI..PI).contains(x)));
        p.sort_by(f64::total_cmp);
        let n = p.len() as f64;
        let ks = p
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let cdf = (x + PI) / TAU;
                (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 1.628 / n.sqrt(), "KS {ks}");
    }

    #[test]
    fn degenerate_cascade_flagged() {
        let t = topo(1, 1, 2);
        let mut real = realize_channels(&t, 0, 1);
        real.bs_to_ris[0][1] = Complex64::new(0.0, 0.0);
        let modes = assign_modes(&t, Scheme::Ec, None).unwrap();
        let plan = build_phase_plan(&real, &modes, &TrialStream::new(1, 0));
        assert_eq!(plan.degenerate, 1);
        assert_eq!(plan.phases[0][1], 0.0);
    }

    proptest! {
        #[test]
        fn co_is_eo_plus_pi(dr in -5.0..5.0f64, di in -5.0..5.0f64, cr in -5.0..5.0f64, ci in -5.0..5.0f64) {
            let d = Complex64::new(dr, di);
            let c = Complex64::new(cr, ci);
            prop_assume!(c.norm() > 0.0);
            let eo = eo_phase(d, c).unwrap();
            let co = co_phase(d, c).unwrap();
            prop_assert!((-PI..PI).contains(&eo));
            prop_assert!((-PI..PI).contains(&co));
            let diff = (co - eo).rem_euclid(TAU);
            prop_assert!((diff - PI).abs() < 1e-12, "diff {}", diff);
        }

        #[test]
        fn wrap_in_range(y in -1e6..1e6f64) {
            let w = wrap_phase(y);
            prop_assert!((-PI..PI).contains(&w));
            let k = ((y - w) / TAU).round();
            prop_assert!((y - w - k * TAU).abs() < 1e-6);
        }
    }
}

//! Static network description.
//!
//! The network is specified as a table of link distances rather than node
//! coordinates. Every quantity is converted to linear units (watts, linear
//! gains) when the topology is built; dB and dBm only appear in [`SimConfig`]
//! and in reports.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thermal noise density in dBm/Hz.
pub const NOISE_DBM_PER_HZ: f64 = -174.0;

pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf((p_dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(p_watts: f64) -> f64 {
    10.0 * p_watts.log10() + 30.0
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// Noise power `-174 + 10 log10(B)` dBm, in watts.
pub fn noise_power(power: &PowerModel) -> f64 {
    dbm_to_watts(noise_dbm(power.bandwidth_hz))
}

pub fn noise_dbm(bandwidth_hz: f64) -> f64 {
    NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10()
}

/// Link distances in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Distances {
    /// BS_i to its own cell-center user.
    pub own_center: f64,
    /// Any BS to the shared edge user (direct path).
    pub bs_edge: f64,
    /// BS_k to the center user of another cell.
    pub foreign_center: f64,
    /// BS_i to its own RIS R_i.
    pub bs_ris: f64,
    /// RIS R_i to the edge user.
    pub ris_edge: f64,
}

impl Default for Distances {
    fn default() -> Self {
        Self {
            own_center: 50.0,
            bs_edge: 150.0,
            foreign_center: 200.0,
            bs_ris: 75.0,
            ris_edge: 75.0,
        }
    }
}

/// Path-loss exponents per link class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Exponents {
    /// BS-RIS and RIS-edge links.
    pub ris: f64,
    /// BS to own center user.
    pub bs: f64,
    /// Cooperative BS to edge user.
    pub edge: f64,
    /// Inter-cell interference links.
    pub ici: f64,
}

impl Default for Exponents {
    fn default() -> Self {
        Self {
            ris: 2.7,
            bs: 3.0,
            edge: 3.5,
            ici: 4.0,
        }
    }
}

/// What the enhancement-only scheme does with RIS of non-cooperative BSs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonCoopRis {
    #[default]
    Off,
    Random,
}

/// How `(1 - P_out) * R` is estimated from trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateComposition {
    /// Outage probability estimate times the mean rate.
    #[default]
    Literal,
    /// Mean over trials of `(1 - outage indicator) * rate`.
    PerTrial,
}

/// Model switches that are not part of the physical network.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelOptions {
    pub eo_noncoop: NonCoopRis,
    /// Also charge RIS power to non-cooperative cells whose RIS is active.
    pub charge_all_ris: bool,
    pub rate_composition: RateComposition,
}

/// Flat configuration record as read from TOML. Every key defaults to the
/// reference simulation setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub cells: usize,
    pub coop: usize,
    pub ris_elements: usize,
    pub pt_dbm: f64,
    pub zeta: f64,
    pub p_q_dbm: f64,
    pub p_ele_dbm: f64,
    pub lambda: f64,
    pub bandwidth_hz: f64,
    pub kappa_db: f64,
    pub rho_o_db: f64,
    pub rate_center: f64,
    pub rate_edge: f64,
    pub topology_seed: u64,
    pub distances: Distances,
    pub exponents: Exponents,
    pub model: ModelOptions,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            cells: 6,
            coop: 4,
            ris_elements: 70,
            pt_dbm: 0.0,
            zeta: 0.7,
            p_q_dbm: 30.0,
            p_ele_dbm: 5.0,
            lambda: 0.4,
            bandwidth_hz: 10e6,
            kappa_db: 3.0,
            rho_o_db: -30.0,
            rate_center: 1.0,
            rate_edge: 0.5,
            topology_seed: 1,
            distances: Distances::default(),
            exponents: Exponents::default(),
            model: ModelOptions::default(),
        }
    }
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn build(&self) -> Result<NetworkTopology> {
        NetworkTopology::build(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerModel {
    pub pt_dbm: f64,
    pub zeta: f64,
    pub p_q_dbm: f64,
    pub p_ele_dbm: f64,
    pub lambda_amp: f64,
    pub bandwidth_hz: f64,
}

impl PowerModel {
    pub fn pt_watts(&self) -> f64 {
        dbm_to_watts(self.pt_dbm)
    }

    pub fn p_q_watts(&self) -> f64 {
        dbm_to_watts(self.p_q_dbm)
    }

    pub fn p_ele_watts(&self) -> f64 {
        dbm_to_watts(self.p_ele_dbm)
    }

    pub fn noise_watts(&self) -> f64 {
        noise_power(self)
    }
}

/// Target rates and their SINR thresholds `2^R - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub rate_center: f64,
    pub rate_edge: f64,
    pub gamma_hat_center: f64,
    pub gamma_hat_edge: f64,
}

impl Thresholds {
    pub fn new(rate_center: f64, rate_edge: f64) -> Result<Self> {
        for (key, rate) in [("rate_center", rate_center), ("rate_edge", rate_edge)] {
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::config(key, format!("target rate must be > 0, got {rate}")));
            }
        }
        Ok(Self {
            rate_center,
            rate_edge,
            gamma_hat_center: rate_to_sinr(rate_center),
            gamma_hat_edge: rate_to_sinr(rate_edge),
        })
    }
}

pub fn rate_to_sinr(rate: f64) -> f64 {
    rate.exp2() - 1.0
}

/// Angles of the line-of-sight components at one RIS, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RisAngles {
    /// Angle of arrival of the BS-RIS LoS path.
    pub arrival: f64,
    /// Angle of departure of the RIS-edge LoS path.
    pub departure: f64,
}

/// Endpoint of a direct BS link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum User {
    Center(usize),
    Edge,
}

/// Every link the channel model draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Direct { bs: usize, user: User },
    BsToRis { ris: usize },
    RisToEdge { ris: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkTopology {
    pub cells: usize,
    pub coop: usize,
    pub ris_elements: usize,
    pub distances: Distances,
    pub exponents: Exponents,
    /// Linear reference path gain at 1 m.
    pub rho_o: f64,
    /// Linear Rician factor.
    pub kappa: f64,
    pub aoa: Vec<RisAngles>,
    pub power: PowerModel,
    pub thresholds: Thresholds,
    pub topology_seed: u64,
    pub options: ModelOptions,
}

impl NetworkTopology {
    pub fn build(config: &SimConfig) -> Result<Self> {
        if config.cells == 0 {
            return Err(Error::config("cells", "at least one cell is required"));
        }
        if config.coop == 0 || config.coop > config.cells {
            return Err(Error::config(
                "coop",
                format!("need 1 <= coop <= cells ({}), got {}", config.cells, config.coop),
            ));
        }
        check_finite("pt_dbm", config.pt_dbm)?;
        check_finite("p_q_dbm", config.p_q_dbm)?;
        check_finite("p_ele_dbm", config.p_ele_dbm)?;
        check_finite("kappa_db", config.kappa_db)?;
        check_finite("rho_o_db", config.rho_o_db)?;
        if !(config.zeta > 0.5 && config.zeta < 1.0) {
            return Err(Error::config(
                "zeta",
                format!("must lie in (0.5, 1), got {}", config.zeta),
            ));
        }
        if !(config.lambda > 0.0 && config.lambda <= 1.0) {
            return Err(Error::config(
                "lambda",
                format!("must lie in (0, 1], got {}", config.lambda),
            ));
        }
        if !(config.bandwidth_hz.is_finite() && config.bandwidth_hz > 0.0) {
            return Err(Error::config("bandwidth_hz", "must be > 0"));
        }
        let d = &config.distances;
        for (key, value) in [
            ("distances.own_center", d.own_center),
            ("distances.bs_edge", d.bs_edge),
            ("distances.foreign_center", d.foreign_center),
            ("distances.bs_ris", d.bs_ris),
            ("distances.ris_edge", d.ris_edge),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(key, format!("distance must be > 0, got {value}")));
            }
        }
        let e = &config.exponents;
        for (key, value) in [
            ("exponents.ris", e.ris),
            ("exponents.bs", e.bs),
            ("exponents.edge", e.edge),
            ("exponents.ici", e.ici),
        ] {
            if !(value.is_finite() && value >= 2.0) {
                return Err(Error::config(key, format!("exponent must be >= 2, got {value}")));
            }
        }
        let thresholds = Thresholds::new(config.rate_center, config.rate_edge)?;

        Ok(Self {
            cells: config.cells,
            coop: config.coop,
            ris_elements: config.ris_elements,
            distances: config.distances,
            exponents: config.exponents,
            rho_o: db_to_linear(config.rho_o_db),
            kappa: db_to_linear(config.kappa_db),
            aoa: draw_angles(config.topology_seed, config.cells),
            power: PowerModel {
                pt_dbm: config.pt_dbm,
                zeta: config.zeta,
                p_q_dbm: config.p_q_dbm,
                p_ele_dbm: config.p_ele_dbm,
                lambda_amp: config.lambda,
                bandwidth_hz: config.bandwidth_hz,
            },
            thresholds,
            topology_seed: config.topology_seed,
            options: config.model,
        })
    }

    /// Whether BS `bs` (0-based) belongs to the cooperative set. The first
    /// `coop` BSs cooperate.
    pub fn is_coop(&self, bs: usize) -> bool {
        bs < self.coop
    }

    pub fn noise_watts(&self) -> f64 {
        self.power.noise_watts()
    }

    /// Distance and exponent of a link.
    pub fn link_geometry(&self, link: Link) -> (f64, f64) {
        let d = &self.distances;
        let e = &self.exponents;
        match link {
            Link::Direct {
                bs,
                user: User::Center(c),
            } if bs == c => (d.own_center, e.bs),
            Link::Direct {
                user: User::Center(_), ..
            } => (d.foreign_center, e.ici),
            Link::Direct { bs, user: User::Edge } if self.is_coop(bs) => (d.bs_edge, e.edge),
            Link::Direct { user: User::Edge, .. } => (d.bs_edge, e.ici),
            Link::BsToRis { .. } => (d.bs_ris, e.ris),
            Link::RisToEdge { .. } => (d.ris_edge, e.ris),
        }
    }

    /// Linear average power gain `rho_o / d^alpha` of a link.
    pub fn link_gain(&self, link: Link) -> f64 {
        let (distance, exponent) = self.link_geometry(link);
        self.rho_o / distance.powf(exponent)
    }

    /// RIS power `K * P_ele` in watts.
    pub fn ris_power_watts(&self) -> f64 {
        self.ris_elements as f64 * self.power.p_ele_watts()
    }

    pub fn with_coop(&self, coop: usize) -> Result<Self> {
        if coop == 0 || coop > self.cells {
            return Err(Error::config(
                "coop",
                format!("need 1 <= coop <= cells ({}), got {coop}", self.cells),
            ));
        }
        Ok(Self { coop, ..self.clone() })
    }

    pub fn with_elements(&self, ris_elements: usize) -> Self {
        Self {
            ris_elements,
            ..self.clone()
        }
    }

    pub fn with_pt_dbm(&self, pt_dbm: f64) -> Result<Self> {
        check_finite("pt_dbm", pt_dbm)?;
        let mut out = self.clone();
        out.power.pt_dbm = pt_dbm;
        Ok(out)
    }

    pub fn with_thresholds(&self, rate_center: f64, rate_edge: f64) -> Result<Self> {
        Ok(Self {
            thresholds: Thresholds::new(rate_center, rate_edge)?,
            ..self.clone()
        })
    }

    /// Human-readable summary of the resolved parameters.
    pub fn describe(&self) -> String {
        let p = &self.power;
        let d = &self.distances;
        let e = &self.exponents;
        let mut s = String::new();
        s.push_str(&format!("cells I                 {}\n", self.cells));
        s.push_str(&format!("cooperative BSs J       {}\n", self.coop));
        s.push_str(&format!("RIS elements K          {}\n", self.ris_elements));
        s.push_str(&format!("transmit power P_t      {} dBm\n", p.pt_dbm));
        s.push_str(&format!("edge power split zeta   {}\n", p.zeta));
        s.push_str(&format!("amplifier efficiency    {}\n", p.lambda_amp));
        s.push_str(&format!("reference path gain     {:e}\n", self.rho_o));
        s.push_str(&format!("static power P_Q        {} dBm\n", p.p_q_dbm));
        s.push_str(&format!("RIS element power       {} dBm\n", p.p_ele_dbm));
        s.push_str(&format!(
            "center target rate      {} bps/Hz\n",
            self.thresholds.rate_center
        ));
        s.push_str(&format!(
            "edge target rate        {} bps/Hz\n",
            self.thresholds.rate_edge
        ));
        s.push_str(&format!(
            "Rician factor kappa     {:.4} ({:.2} dB)\n",
            self.kappa,
            10.0 * self.kappa.log10()
        ));
        s.push_str(&format!("bandwidth               {} Hz\n", p.bandwidth_hz));
        s.push_str(&format!(
            "noise power             {:.2} dBm\n",
            noise_dbm(p.bandwidth_hz)
        ));
        s.push_str(&format!(
            "distances (m)           own_center={} bs_edge={} foreign_center={} bs_ris={} ris_edge={}\n",
            d.own_center, d.bs_edge, d.foreign_center, d.bs_ris, d.ris_edge
        ));
        s.push_str(&format!(
            "exponents               ris={} bs={} edge={} ici={}\n",
            e.ris, e.bs, e.edge, e.ici
        ));
        s
    }
}

fn check_finite(key: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, "must be finite"))
    }
}

// Drawn once per topology and frozen across trials.
fn draw_angles(seed: u64, cells: usize) -> Vec<RisAngles> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cells)
        .map(|_| RisAngles {
            arrival: rng.random_range(-FRAC_PI_2..FRAC_PI_2),
            departure: rng.random_range(-FRAC_PI_2..FRAC_PI_2),
        })
        .collect()
}

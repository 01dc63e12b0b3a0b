//! Small-scale fading draws.
//!
//! Direct BS-user links are Rayleigh; BS-RIS and RIS-edge links are Rician
//! with a uniform-linear-array LoS steering vector. Each link of each trial
//! draws from its own ChaCha stream keyed by `(master seed, trial, link)`, so
//! a realization does not depend on evaluation order or thread count.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::topology::{Link, NetworkTopology, User};

/// Identifies one independent random stream within a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamId {
    Link(Link),
    /// Uniform phases of RIS elements in `Random` mode.
    RisPhases {
        ris: usize,
    },
}

impl StreamId {
    fn code(self) -> u64 {
        const IDX_MASK: u64 = (1 << 27) - 1;
        let (tag, a, b) = match self {
            StreamId::Link(Link::Direct { bs, user: User::Edge }) => (1, bs as u64, 0),
            StreamId::Link(Link::Direct {
                bs,
                user: User::Center(c),
            }) => (1, bs as u64, c as u64 + 1),
            StreamId::Link(Link::BsToRis { ris }) => (2, ris as u64, 0),
            StreamId::Link(Link::RisToEdge { ris }) => (3, ris as u64, 0),
            StreamId::RisPhases { ris } => (4, ris as u64, 0),
        };
        (tag << 56) | ((a & IDX_MASK) << 28) | (b & IDX_MASK)
    }
}

/// Counter-based stream factory for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStream {
    pub seed: u64,
    pub trial: u64,
}

impl TrialStream {
    pub fn new(seed: u64, trial: u64) -> Self {
        Self { seed, trial }
    }

    /// The 256-bit ChaCha key is the concatenation of seed, trial and stream id,
    /// so distinct tuples never share a keystream.
    pub fn rng(&self, id: StreamId) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.trial.to_le_bytes());
        key[16..24].copy_from_slice(&id.code().to_le_bytes());
        key[24..32].copy_from_slice(b"riscomp1");
        ChaCha8Rng::from_seed(key)
    }
}

/// `rho_o / d^alpha`.
pub fn path_gain(distance: f64, exponent: f64, rho_o: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be > 0, got {distance}")));
    }
    Ok(rho_o / distance.powf(exponent))
}

/// Circularly symmetric complex Gaussian with unit variance.
pub fn rayleigh_scalar<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Steering vector with entries `exp(j (k-1) pi sin(omega))`.
pub fn los_steering(elements: usize, omega: f64) -> Result<Vec<Complex64>> {
    if elements == 0 {
        return Err(Error::InvalidArgument(
            "steering vector needs at least one element".into(),
        ));
    }
    let step = PI * omega.sin();
    Ok((0..elements)
        .map(|k| Complex64::from_polar(1.0, k as f64 * step))
        .collect())
}

/// Unit-power Rician vector `sqrt(k/(1+k)) a(omega) + sqrt(1/(1+k)) g`.
///
/// `kappa = inf` gives the pure steering vector.
pub fn rician_vector<R: Rng + ?Sized>(elements: usize, kappa: f64, omega: f64, rng: &mut R) -> Vec<Complex64> {
    if elements == 0 {
        return Vec::new();
    }
    let (los_amp, nlos_amp) = if kappa.is_infinite() {
        (1.0, 0.0)
    } else {
        ((kappa / (1.0 + kappa)).sqrt(), (1.0 / (1.0 + kappa)).sqrt())
    };
    let step = PI * omega.sin();
    (0..elements)
        .map(|k| {
            let los = Complex64::from_polar(los_amp, k as f64 * step);
            los + rayleigh_scalar(rng) * nlos_amp
        })
        .collect()
}

/// One Monte Carlo draw of every channel in the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub trial: u64,
    /// `h^e_{i,f}` indexed by BS.
    pub edge_direct: Vec<Complex64>,
    /// `h^c_{i,c}` indexed `[bs][cell]`.
    pub center_direct: Vec<Vec<Complex64>>,
    /// `h_{i,R_i}` indexed by RIS; empty when the topology has no RIS elements.
    pub bs_to_ris: Vec<Vec<Complex64>>,
    /// `h_{R_i,f}` indexed by RIS; empty when the topology has no RIS elements.
    pub ris_to_edge: Vec<Vec<Complex64>>,
}

impl ChannelRealization {
    pub fn cells(&self) -> usize {
        self.edge_direct.len()
    }

    pub fn ris_elements(&self) -> usize {
        self.bs_to_ris.first().map_or(0, Vec::len)
    }

    /// Per-element cascade `h_{R_r,f}^(k) h_{r,R_r}^(k)` of RIS `ris`.
    pub fn cascade(&self, ris: usize) -> impl Iterator<Item = Complex64> + '_ {
        let out = self.ris_to_edge.get(ris).map(Vec::as_slice).unwrap_or(&[]);
        let inc = self.bs_to_ris.get(ris).map(Vec::as_slice).unwrap_or(&[]);
        out.iter().zip(inc).map(|(o, i)| o * i)
    }

    /// Text record with 17 significant digits per component, one value per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "trial {}", self.trial);
        for (bs, h) in self.edge_direct.iter().enumerate() {
            let _ = writeln!(s, "direct bs={bs} user=edge {}", fmt_complex(*h));
        }
        for (bs, row) in self.center_direct.iter().enumerate() {
            for (c, h) in row.iter().enumerate() {
                let _ = writeln!(s, "direct bs={bs} user=center:{c} {}", fmt_complex(*h));
            }
        }
        for (name, table) in [("bs_ris", &self.bs_to_ris), ("ris_edge", &self.ris_to_edge)] {
            for (ris, v) in table.iter().enumerate() {
                for (k, h) in v.iter().enumerate() {
                    let _ = writeln!(s, "{name} ris={ris} k={k} {}", fmt_complex(*h));
                }
            }
        }
        s
    }
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e} {:.16e}", z.re, z.im)
}

fn draw_scalar(topology: &NetworkTopology, stream: &TrialStream, link: Link) -> Complex64 {
    let mut rng = stream.rng(StreamId::Link(link));
    rayleigh_scalar(&mut rng) * topology.link_gain(link).sqrt()
}

fn draw_vector(topology: &NetworkTopology, stream: &TrialStream, link: Link, omega: f64) -> Vec<Complex64> {
    let mut rng = stream.rng(StreamId::Link(link));
    let amp = topology.link_gain(link).sqrt();
    let mut v = rician_vector(topology.ris_elements, topology.kappa, omega, &mut rng);
    v.iter_mut().for_each(|x| *x *= amp);
    v
}

pub fn realize_channels(topology: &NetworkTopology, trial: u64, seed: u64) -> ChannelRealization {
    let stream = TrialStream::new(seed, trial);
    let cells = topology.cells;
    let edge_direct = (0..cells)
        .map(|bs| draw_scalar(topology, &stream, Link::Direct { bs, user: User::Edge }))
        .collect();
    let center_direct = (0..cells)
        .map(|bs| {
            (0..cells)
                .map(|c| {
                    draw_scalar(
                        topology,
                        &stream,
                        Link::Direct {
                            bs,
                            user: User::Center(c),
                        },
                    )
                })
                .collect()
        })
        .collect();
    let (bs_to_ris, ris_to_edge) = if topology.ris_elements == 0 {
        (Vec::new(), Vec::new())
    } else {
        (0..cells)
            .map(|ris| {
                let angles = topology.aoa[ris];
                (
                    draw_vector(topology, &stream, Link::BsToRis { ris }, angles.arrival),
                    draw_vector(topology, &stream, Link::RisToEdge { ris }, angles.departure),
                )
            })
            .unzip()
    };
    ChannelRealization {
        trial,
        edge_direct,
        center_direct,
        bs_to_ris,
        ris_to_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::SimConfig;
    use approx::assert_relative_eq;

    fn stream_rng(n: u64) -> ChaCha8Rng {
        TrialStream::new(99, n).rng(StreamId::RisPhases { ris: 0 })
    }

    #[test]
    fn path_gain_examples() {
        assert_relative_eq!(path_gain(1.0, 3.0, 1e-3).unwrap(), 1e-3);
        assert_relative_eq!(path_gain(50.0, 3.0, 1e-3).unwrap(), 8.0e-9, max_relative = 1e-14);
        // 75^2.7 = exp(2.7 ln 75)
        let expected = 1e-3 / (2.7 * 75f64.ln()).exp();
        assert_relative_eq!(path_gain(75.0, 2.7, 1e-3).unwrap(), expected, max_relative = 1e-12);
        assert!(path_gain(0.0, 3.0, 1e-3).is_err());
        assert!(path_gain(-2.0, 3.0, 1e-3).is_err());
    }

    #[test]
    fn rayleigh_moments() {
        let mut rng = stream_rng(0);
        let n = 100_000;
        let draws: Vec<Complex64> = (0..n).map(|_| rayleigh_scalar(&mut rng)).collect();
        let power = draws.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        let mean = draws.iter().sum::<Complex64>() / n as f64;
        assert!((power - 1.0).abs() < 0.02, "power {power}");
        assert!(mean.re.abs() < 0.01 && mean.im.abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn rayleigh_power_is_exponential() {
        let mut rng = stream_rng(1);
        let n = 100_000;
        let mut p: Vec<f64> = (0..n).map(|_| rayleigh_scalar(&mut rng).norm_sqr()).collect();
        p.sort_by(f64::total_cmp);
        let ks = p
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let cdf = 1.0 - (-x).exp();
                (cdf - i as f64 / n as f64)
                    .abs()
                    .max(((i + 1) as f64 / n as f64 - cdf).abs())
            })
            .fold(0.0, f64::max);
        // Asymptotic one-sample KS critical value at the 1% level.
        assert!(ks < 1.628 / (n as f64).sqrt(), "KS {ks}");
    }

    #[test]
    fn steering_examples() {
        assert_eq!(los_steering(1, 0.7).unwrap(), vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(los_steering(2, 0.0).unwrap(), vec![Complex64::new(1.0, 0.0); 2]);
        let v = los_steering(3, PI / 2.0).unwrap();
        for (got, want) in v.iter().zip([1.0, -1.0, 1.0]) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
        assert!(los_steering(0, 0.0).is_err());
        assert!(los_steering(16, 0.3)
            .unwrap()
            .iter()
            .all(|z| (z.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn rician_limits() {
        let mut rng = stream_rng(2);
        let v = rician_vector(8, 1e12, 0.4, &mut rng);
        let a = los_steering(8, 0.4).unwrap();
        for (x, y) in v.iter().zip(&a) {
            assert!((x - y).norm() < 1e-5);
        }
        let n = 20_000;
        for kappa in [0.0, 10f64.powf(0.3)] {
            let mut rng = stream_rng(3);
            let power: f64 = (0..n)
                .flat_map(|_| rician_vector(5, kappa, -0.9, &mut rng))
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                / (5 * n) as f64;
            assert!((power - 1.0).abs() < 0.02, "kappa {kappa}: {power}");
        }
    }

    #[test]
    fn realization_is_deterministic_and_complete() {
        let t = SimConfig::default().build().unwrap();
        let a = realize_channels(&t, 11, 42);
        let b = realize_channels(&t, 11, 42);
        assert_eq!(a, b);
        assert_eq!(a.dump(), b.dump());
        assert_eq!(a.edge_direct.len(), 6);
        assert_eq!(a.center_direct.len(), 6);
        assert!(a.center_direct.iter().all(|r| r.len() == 6));
        assert_eq!(a.bs_to_ris.len(), 6);
        assert!(a.bs_to_ris.iter().chain(&a.ris_to_edge).all(|v| v.len() == 70));
        let c = realize_channels(&t, 12, 42);
        assert_ne!(a.edge_direct[0], c.edge_direct[0]);
        assert_ne!(a.bs_to_ris[3][0], c.bs_to_ris[3][0]);
    }

    #[test]
    fn no_ris_realization() {
        let t = SimConfig {
            ris_elements: 0,
            ..SimConfig::default()
        }
        .build()
        .unwrap();
        let r = realize_channels(&t, 0, 1);
        assert!(r.bs_to_ris.is_empty() && r.ris_to_edge.is_empty());
        assert_eq!(r.edge_direct.len(), 6);
        assert_eq!(r.ris_elements(), 0);
        assert_eq!(r.cascade(0).count(), 0);
    }

    #[test]
    fn direct_links_do_not_depend_on_ris_size() {
        let small = SimConfig {
            ris_elements: 10,
            ..SimConfig::default()
        }
        .build()
        .unwrap();
        let large = SimConfig {
            ris_elements: 90,
            ..SimConfig::default()
        }
        .build()
        .unwrap();
        let a = realize_channels(&small, 5, 3);
        let b = realize_channels(&large, 5, 3);
        assert_eq!(a.edge_direct, b.edge_direct);
        assert_eq!(a.bs_to_ris[2][..], b.bs_to_ris[2][..10]);
    }

    #[test]
    fn stream_codes_are_distinct() {
        let mut ids = vec![
            StreamId::Link(Link::BsToRis { ris: 0 }),
            StreamId::Link(Link::RisToEdge { ris: 0 }),
            StreamId::RisPhases { ris: 0 },
        ];
        for bs in 0..6 {
            ids.push(StreamId::Link(Link::Direct { bs, user: User::Edge }));
            for c in 0..6 {
                ids.push(StreamId::Link(Link::Direct {
                    bs,
                    user: User::Center(c),
                }));
            }
        }
        let mut codes: Vec<u64> = ids.iter().map(|i| i.code()).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), ids.len());
    }
}

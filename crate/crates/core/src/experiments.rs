//! Parameter sweeps and their CSV representation.
//!
//! Every grid point of every experiment runs with the master seed itself, so
//! all points share the same fading draws (common random numbers). Trends
//! along an axis are then paired comparisons, a point never depends on which
//! other points are in the grid, and the same operating point gives identical
//! numbers in every experiment.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::montecarlo::{
    energy_efficiency, energy_efficiency_stderr, energy_efficiency_with, outage_sum_rate, outage_sum_rate_stderr,
    outage_sum_rate_with, run_trials, Estimates, TrialSetup,
};
use crate::pbf::Scheme;
use crate::phy::Access;
use crate::topology::{NetworkTopology, RateComposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExperimentKind {
    /// Energy efficiency vs. number of cooperative BSs.
    Coop,
    /// Energy efficiency vs. number of RIS elements.
    Elements,
    /// Outage sum rate vs. transmit power, with the OMA baseline.
    Power,
    /// Energy efficiency over (transmit power, rate threshold).
    Contour,
    /// Outage sum rate vs. the fraction of cancellation elements.
    Split,
    /// A single operating point.
    Point,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Coop,
        ExperimentKind::Elements,
        ExperimentKind::Power,
        ExperimentKind::Contour,
        ExperimentKind::Split,
        ExperimentKind::Point,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::Coop => "sweep-j",
            ExperimentKind::Elements => "sweep-k",
            ExperimentKind::Power => "sweep-pt",
            ExperimentKind::Contour => "contour",
            ExperimentKind::Split => "split-ratio",
            ExperimentKind::Point => "point",
        }
    }

    pub fn axis_names(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Coop => &["coop"],
            ExperimentKind::Elements => &["elements"],
            ExperimentKind::Power => &["pt_dbm"],
            ExperimentKind::Contour => &["pt_dbm", "rate_threshold"],
            ExperimentKind::Split => &["coop", "split_ratio"],
            ExperimentKind::Point => &["coop", "elements", "pt_dbm"],
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown experiment `{s}`")))
    }
}

/// A curve in a sweep: an RIS scheme plus the access/cooperation variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    Noma(Scheme),
    /// Edge user served by its nearest BS only (J = 1), EC phases.
    NoComp,
    /// CoMP-OMA with EC phases.
    Oma,
}

impl Configuration {
    pub fn label(self) -> &'static str {
        match self {
            Configuration::Noma(s) => s.name(),
            Configuration::NoComp => "no-comp",
            Configuration::Oma => "oma",
        }
    }

    fn setup(self) -> TrialSetup {
        match self {
            Configuration::Noma(s) => TrialSetup::noma(s),
            Configuration::NoComp => TrialSetup::noma(Scheme::Ec),
            Configuration::Oma => TrialSetup {
                scheme: Scheme::Ec,
                split_ratio: None,
                access: Access::Oma,
            },
        }
    }

    fn topology(self, template: &NetworkTopology) -> Result<NetworkTopology> {
        match self {
            Configuration::NoComp => template.with_coop(1),
            _ => Ok(template.clone()),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "no-comp" | "nocomp" => Ok(Configuration::NoComp),
            "oma" => Ok(Configuration::Oma),
            other => other.parse().map(Configuration::Noma),
        }
    }
}

/// Grids and curves of one experiment. Only the grids relevant to `kind` are
/// read.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub kind: ExperimentKind,
    pub coop: Vec<usize>,
    pub elements: Vec<usize>,
    pub pt_dbm: Vec<f64>,
    pub rate_threshold: Vec<f64>,
    pub split_ratio: Vec<f64>,
    #[serde(serialize_with = "serialize_labels")]
    pub configurations: Vec<Configuration>,
    pub trials: u64,
    pub seed: u64,
}

fn serialize_labels<S: serde::Serializer>(c: &[Configuration], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|c| c.label()))
}

impl SweepSpec {
    /// Default grids bracketing the reference operating points.
    pub fn defaults(kind: ExperimentKind, trials: u64, seed: u64) -> Self {
        use Configuration::*;
        let configurations = match kind {
            ExperimentKind::Coop => vec![
                Noma(Scheme::None),
                Noma(Scheme::Random),
                Noma(Scheme::Eo),
                Noma(Scheme::Ec),
            ],
            ExperimentKind::Elements => vec![Noma(Scheme::Eo), Noma(Scheme::Ec), NoComp],
            ExperimentKind::Power => {
                vec![
                    Noma(Scheme::None),
                    Noma(Scheme::Random),
                    Noma(Scheme::Eo),
                    Noma(Scheme::Ec),
                    Oma,
                ]
            }
            ExperimentKind::Contour | ExperimentKind::Split | ExperimentKind::Point => vec![Noma(Scheme::Ec)],
        };
        Self {
            kind,
            coop: match kind {
                ExperimentKind::Split => vec![1, 3, 6],
                _ => (1..=6).collect(),
            },
            elements: vec![10, 30, 50, 70, 90, 110, 130, 150],
            pt_dbm: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            rate_threshold: vec![0.25, 0.5, 1.0, 1.5, 2.0],
            split_ratio: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            configurations,
            trials,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        fn sorted_nonempty<T: PartialOrd>(name: &str, v: &[T]) -> Result<()> {
            if v.is_empty() {
                return Err(Error::InvalidArgument(format!("{name} grid is empty")));
            }
            if v.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidArgument(format!(
                    "{name} grid must be strictly increasing"
                )));
            }
            Ok(())
        }
        if self.configurations.is_empty() {
            return Err(Error::InvalidArgument("no schemes to compare".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("at least one trial is required".into()));
        }
        match self.kind {
            ExperimentKind::Coop => sorted_nonempty("coop", &self.coop),
            ExperimentKind::Elements => sorted_nonempty("elements", &self.elements),
            ExperimentKind::Power => sorted_nonempty("pt_dbm", &self.pt_dbm),
            ExperimentKind::Contour => {
                sorted_nonempty("pt_dbm", &self.pt_dbm)?;
                sorted_nonempty("rate_threshold", &self.rate_threshold)
            }
            ExperimentKind::Split => {
                sorted_nonempty("coop", &self.coop)?;
                sorted_nonempty("split_ratio", &self.split_ratio)
            }
            ExperimentKind::Point => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    /// Values of the experiment's axis columns, in `axis_names` order.
    pub axes: Vec<f64>,
    pub scheme: String,
    pub estimates: Estimates,
    pub outage_sum_rate: f64,
    pub stderr_outage_sum_rate: f64,
    pub energy_efficiency: f64,
    pub stderr_energy_efficiency: f64,
    /// Metrics under the composition not selected in the config.
    pub outage_sum_rate_alt: f64,
    pub energy_efficiency_alt: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub experiment: String,
    pub seed: u64,
    pub config_hash: String,
    pub code_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: ExperimentKind,
    pub records: Vec<SweepRecord>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn axis_names(&self) -> &'static [&'static str] {
        self.kind.axis_names()
    }

    /// Records of one curve, in grid order.
    pub fn curve<'a>(&'a self, scheme: &'a str) -> impl Iterator<Item = &'a SweepRecord> + 'a {
        self.records.iter().filter(move |r| r.scheme == scheme)
    }

    pub fn find(&self, scheme: &str, axes: &[f64]) -> Option<&SweepRecord> {
        self.records.iter().find(|r| r.scheme == scheme && r.axes == axes)
    }
}

struct GridPoint {
    axes: Vec<f64>,
    topology: NetworkTopology,
    configuration: Configuration,
    split_ratio: Option<f64>,
}

pub fn evaluate_point(
    axes: Vec<f64>,
    topology: &NetworkTopology,
    configuration: Configuration,
    split_ratio: Option<f64>,
    trials: u64,
    seed: u64,
) -> Result<SweepRecord> {
    let start = Instant::now();
    let topology = configuration.topology(topology)?;
    let mut setup = configuration.setup();
    setup.split_ratio = split_ratio;
    let estimates = run_trials(&topology, &setup, trials, seed)?;
    let alt = match estimates.composition {
        RateComposition::Literal => RateComposition::PerTrial,
        RateComposition::PerTrial => RateComposition::Literal,
    };
    Ok(SweepRecord {
        axes,
        scheme: configuration.label().to_string(),
        outage_sum_rate: outage_sum_rate(&estimates),
        stderr_outage_sum_rate: outage_sum_rate_stderr(&estimates),
        energy_efficiency: energy_efficiency(&estimates, &topology),
        stderr_energy_efficiency: energy_efficiency_stderr(&estimates, &topology),
        outage_sum_rate_alt: outage_sum_rate_with(&estimates, alt),
        energy_efficiency_alt: energy_efficiency_with(&estimates, &topology, alt),
        estimates,
        wall_time: start.elapsed(),
    })
}

fn run_points(
    kind: ExperimentKind,
    template: &NetworkTopology,
    spec: &SweepSpec,
    points: Vec<GridPoint>,
) -> Result<SweepResult> {
    let records = points
        .into_iter()
        .map(|p| {
            evaluate_point(
                p.axes,
                &p.topology,
                p.configuration,
                p.split_ratio,
                spec.trials,
                spec.seed,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        kind,
        records,
        provenance: Provenance {
            experiment: kind.id().to_string(),
            seed: spec.seed,
            config_hash: config_hash(template, spec)?,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

fn config_hash(template: &NetworkTopology, spec: &SweepSpec) -> Result<String> {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(template)?);
    hasher.update(serde_json::to_vec(spec)?);
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn cross<T: Copy>(grid: &[T], configurations: &[Configuration]) -> Vec<(T, Configuration)> {
    grid.iter()
        .flat_map(|&g| configurations.iter().map(move |&c| (g, c)))
        .collect()
}

pub fn sweep_coop(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = cross(&spec.coop, &spec.configurations)
        .into_iter()
        .map(|(j, configuration)| {
            Ok(GridPoint {
                axes: vec![j as f64],
                topology: template.with_coop(j)?,
                configuration,
                split_ratio: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_points(ExperimentKind::Coop, template, spec, points)
}

pub fn sweep_elements(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = cross(&spec.elements, &spec.configurations)
        .into_iter()
        .map(|(k, configuration)| GridPoint {
            axes: vec![k as f64],
            topology: template.with_elements(k),
            configuration,
            split_ratio: None,
        })
        .collect();
    run_points(ExperimentKind::Elements, template, spec, points)
}

pub fn sweep_power(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = cross(&spec.pt_dbm, &spec.configurations)
        .into_iter()
        .map(|(pt, configuration)| {
            Ok(GridPoint {
                axes: vec![pt],
                topology: template.with_pt_dbm(pt)?,
                configuration,
                split_ratio: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_points(ExperimentKind::Power, template, spec, points)
}

/// Both target rates are set to the same value at every grid point.
pub fn sweep_contour(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut points = Vec::new();
    for &pt in &spec.pt_dbm {
        for &rth in &spec.rate_threshold {
            for &configuration in &spec.configurations {
                points.push(GridPoint {
                    axes: vec![pt, rth],
                    topology: template.with_pt_dbm(pt)?.with_thresholds(rth, rth)?,
                    configuration,
                    split_ratio: None,
                });
            }
        }
    }
    run_points(ExperimentKind::Contour, template, spec, points)
}

/// Grid over (J, CO fraction). The scheme column is informational: every
/// RIS follows the split.
pub fn sweep_split(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    if let Some(&bad) = spec.split_ratio.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::InvalidArgument(format!("split ratio {bad} outside [0, 1]")));
    }
    let mut points = Vec::new();
    for &j in &spec.coop {
        for &ratio in &spec.split_ratio {
            for &configuration in &spec.configurations {
                points.push(GridPoint {
                    axes: vec![j as f64, ratio],
                    topology: template.with_coop(j)?,
                    configuration,
                    split_ratio: Some(ratio),
                });
            }
        }
    }
    run_points(ExperimentKind::Split, template, spec, points)
}

pub fn run_point(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec
        .configurations
        .iter()
        .map(|&configuration| GridPoint {
            axes: vec![
                template.coop as f64,
                template.ris_elements as f64,
                template.power.pt_dbm,
            ],
            topology: template.clone(),
            configuration,
            split_ratio: None,
        })
        .collect();
    run_points(ExperimentKind::Point, template, spec, points)
}

pub fn run_sweep(template: &NetworkTopology, spec: &SweepSpec) -> Result<SweepResult> {
    match spec.kind {
        ExperimentKind::Coop => sweep_coop(template, spec),
        ExperimentKind::Elements => sweep_elements(template, spec),
        ExperimentKind::Power => sweep_power(template, spec),
        ExperimentKind::Contour => sweep_contour(template, spec),
        ExperimentKind::Split => sweep_split(template, spec),
        ExperimentKind::Point => run_point(template, spec),
    }
}

pub const METRIC_COLUMNS: [&str; 15] = [
    "scheme",
    "p_out_edge",
    "p_out_center_mean",
    "rate_edge",
    "rate_center_sum",
    "outage_sum_rate",
    "energy_efficiency",
    "stderr_p_out_edge",
    "stderr_rate_edge",
    "stderr_outage_sum_rate",
    "stderr_energy_efficiency",
    "outage_sum_rate_alt",
    "energy_efficiency_alt",
    "n_trials",
    "seed",
];

/// Ten significant digits.
pub fn fmt_sig10(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn to_csv(result: &SweepResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = result.axis_names().iter().copied().chain(METRIC_COLUMNS).collect();
    w.write_record(&header)?;
    for r in &result.records {
        let e = &r.estimates;
        let mut row: Vec<String> = r.axes.iter().map(|a| a.to_string()).collect();
        row.push(r.scheme.clone());
        row.extend(
            [
                e.edge.p_out,
                e.p_out_center_mean(),
                e.edge.mean_rate,
                e.rate_center_sum(),
                r.outage_sum_rate,
                r.energy_efficiency,
                e.edge.stderr_p_out,
                e.edge.stderr_rate,
                r.stderr_outage_sum_rate,
                r.stderr_energy_efficiency,
                r.outage_sum_rate_alt,
                r.energy_efficiency_alt,
            ]
            .map(fmt_sig10),
        );
        row.push(e.trials.to_string());
        row.push(e.seed.to_string());
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A sweep CSV read back as numbers, enough to re-plot without recomputing.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub kind: ExperimentKind,
    pub rows: Vec<CsvRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub axes: Vec<f64>,
    pub scheme: String,
    pub outage_sum_rate: f64,
    pub energy_efficiency: f64,
    pub stderr_outage_sum_rate: f64,
    pub stderr_energy_efficiency: f64,
}

impl CsvTable {
    pub fn from_result(result: &SweepResult) -> Self {
        Self {
            kind: result.kind,
            rows: result
                .records
                .iter()
                .map(|r| CsvRow {
                    axes: r.axes.clone(),
                    scheme: r.scheme.clone(),
                    outage_sum_rate: r.outage_sum_rate,
                    energy_efficiency: r.energy_efficiency,
                    stderr_outage_sum_rate: r.stderr_outage_sum_rate,
                    stderr_energy_efficiency: r.stderr_energy_efficiency,
                })
                .collect(),
        }
    }

    /// Parses a CSV produced by [`to_csv`]; the experiment is recognised from
    /// its axis columns.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let n_axes = headers
            .iter()
            .position(|h| h == "scheme")
            .ok_or_else(|| Error::InvalidArgument("CSV has no `scheme` column".into()))?;
        let axis_header: Vec<&str> = headers[..n_axes].iter().map(String::as_str).collect();
        let kind = ExperimentKind::ALL
            .into_iter()
            .find(|k| k.axis_names() == axis_header.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("unrecognised axis columns {axis_header:?}")))?;
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::InvalidArgument(format!("CSV lacks column `{name}`")))
        };
        let (osr, ee) = (col("outage_sum_rate")?, col("energy_efficiency")?);
        let (se_osr, se_ee) = (col("stderr_outage_sum_rate")?, col("stderr_energy_efficiency")?);
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::InvalidArgument(format!("not a number: `{s}`")))
        };
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            rows.push(CsvRow {
                axes: (0..n_axes).map(|i| num(&rec[i])).collect::<Result<_>>()?,
                scheme: rec[n_axes].to_string(),
                outage_sum_rate: num(&rec[osr])?,
                energy_efficiency: num(&rec[ee])?,
                stderr_outage_sum_rate: num(&rec[se_osr])?,
                stderr_energy_efficiency: num(&rec[se_ee])?,
            });
        }
        Ok(Self { kind, rows })
    }

    /// Curve labels in first-seen order.
    pub fn schemes(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.scheme) {
                out.push(r.scheme.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::SimConfig;

    fn template() -> NetworkTopology {
        SimConfig::default().build().unwrap()
    }

    #[test]
    fn coop_sweep_cardinality() {
        let spec = SweepSpec::defaults(ExperimentKind::Coop, 20, 1);
        let r = sweep_coop(&template(), &spec).unwrap();
        assert_eq!(r.records.len(), 24);
        assert_eq!(r.curve("ec").count(), 6);
        assert!(!r.provenance.config_hash.is_empty());
        assert_eq!(r.provenance.code_version, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn contour_cardinality() {
        let mut spec = SweepSpec::defaults(ExperimentKind::Contour, 10, 1);
        spec.pt_dbm = vec![-10.0, -5.0, 0.0, 5.0, 10.0];
        let r = sweep_contour(&template(), &spec).unwrap();
        assert_eq!(r.records.len(), 25);
    }

    #[test]
    fn coop_grid_beyond_cells_rejected() {
        let mut spec = SweepSpec::defaults(ExperimentKind::Coop, 10, 1);
        spec.coop = vec![1, 7];
        assert!(sweep_coop(&template(), &spec).is_err());
        spec.coop = vec![3, 2];
        assert!(sweep_coop(&template(), &spec).is_err());
    }

    #[test]
    fn single_power_point() {
        let mut spec = SweepSpec::defaults(ExperimentKind::Power, 10, 1);
        spec.pt_dbm = vec![0.0];
        let r = sweep_power(&template(), &spec).unwrap();
        assert_eq!(r.records.len(), spec.configurations.len());
        assert!(r.records.iter().all(|rec| rec.axes == vec![0.0]));
    }

    #[test]
    fn grid_point_equals_standalone_run() {
        let spec = SweepSpec {
            elements: vec![30, 90],
            ..SweepSpec::defaults(ExperimentKind::Elements, 50, 9)
        };
        let r = sweep_elements(&template(), &spec).unwrap();
        let standalone = run_trials(&template().with_elements(90), &TrialSetup::noma(Scheme::Ec), 50, 9).unwrap();
        assert_eq!(r.find("ec", &[90.0]).unwrap().estimates, standalone);
    }

    #[test]
    fn zero_elements_match_no_ris() {
        let spec = SweepSpec {
            elements: vec![0],
            configurations: vec![Configuration::Noma(Scheme::Ec)],
            ..SweepSpec::defaults(ExperimentKind::Elements, 40, 2)
        };
        let k0 = sweep_elements(&template(), &spec).unwrap();
        let none = run_trials(&template(), &TrialSetup::noma(Scheme::None), 40, 2).unwrap();
        let rec = &k0.records[0];
        assert_eq!(rec.estimates.edge, none.edge);
        assert_eq!(rec.estimates.center, none.center);
        assert_eq!(rec.energy_efficiency, energy_efficiency(&none, &template()));
    }

    #[test]
    fn csv_round_trip_for_plotting() {
        let spec = SweepSpec {
            split_ratio: vec![0.0, 1.0],
            ..SweepSpec::defaults(ExperimentKind::Split, 10, 3)
        };
        let r = sweep_split(&template().with_elements(8), &spec).unwrap();
        let text = to_csv(&r).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("coop,split_ratio,scheme,p_out_edge,"));
        assert!(first.ends_with(",n_trials,seed"));
        assert_eq!(text.lines().count(), 1 + 6);
        let parsed = CsvTable::parse(&text).unwrap();
        assert_eq!(parsed.kind, ExperimentKind::Split);
        let direct = CsvTable::from_result(&r);
        for (a, b) in parsed.rows.iter().zip(&direct.rows) {
            assert_eq!(a.axes, b.axes);
            assert!((a.energy_efficiency - b.energy_efficiency).abs() <= 1e-9 * b.energy_efficiency.abs());
        }
    }

    #[test]
    fn sig10_format() {
        assert_eq!(fmt_sig10(2.6), "2.600000000e0");
        assert_eq!(fmt_sig10(-3.981071705534969e-14), "-3.981071706e-14");
    }

    #[test]
    fn parse_configurations() {
        assert_eq!("EC".parse::<Configuration>().unwrap(), Configuration::Noma(Scheme::Ec));
        assert_eq!("no-comp".parse::<Configuration>().unwrap(), Configuration::NoComp);
        assert!("bogus".parse::<Configuration>().is_err());
        assert_eq!("split-ratio".parse::<ExperimentKind>().unwrap(), ExperimentKind::Split);
    }
}

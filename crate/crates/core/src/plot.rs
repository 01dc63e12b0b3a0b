//! SVG rendering of sweep tables.
//!
//! Plots are drawn from a [`CsvTable`] only, so a CSV written earlier can be
//! re-plotted without rerunning the simulation.

use std::path::{Path, PathBuf};

use plotters::prelude::*;
use plotters::style::colors::colormaps::ViridisRGB;

use crate::error::{Error, Result};
use crate::experiments::{CsvRow, CsvTable, ExperimentKind, SweepResult};

const SIZE: (u32, u32) = (800, 560);
const CONTOUR_LEVELS: usize = 12;
const RASTER: usize = 160;

fn plot_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Plot(e.to_string())
}

/// Renders `result` into `dir/<experiment>.svg` and returns the written path.
pub fn render_plots(result: &SweepResult, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(format!("{}.svg", result.kind.id()));
    render_table(&CsvTable::from_result(result), &path)?;
    Ok(path)
}

pub fn render_table(table: &CsvTable, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Empty("sweep result has no records"));
    }
    match table.kind {
        ExperimentKind::Coop => line_chart(
            table,
            path,
            "Energy efficiency vs. cooperative BSs",
            "cooperative BSs J",
            true,
            |r| r.axes[0],
            |r| r.scheme.clone(),
        ),
        ExperimentKind::Elements => line_chart(
            table,
            path,
            "Energy efficiency vs. RIS elements",
            "RIS elements K",
            true,
            |r| r.axes[0],
            |r| r.scheme.clone(),
        ),
        ExperimentKind::Power => line_chart(
            table,
            path,
            "Outage sum rate vs. transmit power",
            "transmit power P_t (dBm)",
            false,
            |r| r.axes[0],
            |r| r.scheme.clone(),
        ),
        ExperimentKind::Split => line_chart(
            table,
            path,
            "Outage sum rate vs. CO/EO split ratio",
            "fraction of CO elements",
            false,
            |r| r.axes[1],
            |r| format!("J={}", r.axes[0]),
        ),
        ExperimentKind::Point => line_chart(
            table,
            path,
            "Operating point",
            "cooperative BSs J",
            true,
            |r| r.axes[0],
            |r| r.scheme.clone(),
        ),
        ExperimentKind::Contour => contour(table, path),
    }
}

#[allow(clippy::too_many_arguments)]
fn line_chart(
    table: &CsvTable,
    path: &Path,
    title: &str,
    x_label: &str,
    energy: bool,
    x_of: impl Fn(&CsvRow) -> f64,
    series_of: impl Fn(&CsvRow) -> String,
) -> Result<()> {
    let y_of = |r: &CsvRow| if energy { r.energy_efficiency } else { r.outage_sum_rate };
    let y_label = if energy {
        "energy efficiency (bit/J/Hz)"
    } else {
        "outage sum rate (bps/Hz)"
    };

    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in &table.rows {
        let name = series_of(row);
        let point = (x_of(row), y_of(row));
        match series.iter_mut().find(|(n, _)| *n == name) {
            Some((_, pts)) => pts.push(point),
            None => series.push((name, vec![point])),
        }
    }
    let (x_min, x_max) = bounds(table.rows.iter().map(&x_of));
    let (y_min, y_max) = bounds(table.rows.iter().map(y_of));
    let pad = ((y_max - y_min) * 0.05).max(1e-9);

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(44)
        .y_label_area_size(64)
        .build_cartesian_2d(x_min..x_max, (y_min - pad)..(y_max + pad))
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(plot_err)?
            .label(name.as_str())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2)));
        chart
            .draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(plot_err)?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Filled contour of energy efficiency over (P_t, R_th): the grid is
/// bilinearly interpolated onto a raster and quantised into bands.
fn contour(table: &CsvTable, path: &Path) -> Result<()> {
    let mut xs: Vec<f64> = table.rows.iter().map(|r| r.axes[0]).collect();
    let mut ys: Vec<f64> = table.rows.iter().map(|r| r.axes[1]).collect();
    for v in [&mut xs, &mut ys] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let mut grid = vec![vec![f64::NAN; ys.len()]; xs.len()];
    for r in &table.rows {
        let i = xs.iter().position(|&x| x == r.axes[0]).expect("axis value present");
        let j = ys.iter().position(|&y| y == r.axes[1]).expect("axis value present");
        grid[i][j] = r.energy_efficiency;
    }
    if grid.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("contour grid is incomplete".into()));
    }
    let (z_min, z_max) = bounds(grid.iter().flatten().copied());
    let (x_min, x_max) = bounds(xs.iter().copied());
    let (y_min, y_max) = bounds(ys.iter().copied());

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let (main, bar) = root.split_horizontally(SIZE.0 - 110);
    let mut chart = ChartBuilder::on(&main)
        .caption("Energy efficiency (bit/J/Hz)", ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(x_min..x_max, y_min..y_max)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc("transmit power P_t (dBm)")
        .y_desc("rate threshold R_th (bps/Hz)")
        .draw()
        .map_err(plot_err)?;

    let band = |z: f64| {
        let t = ((z - z_min) / (z_max - z_min)).clamp(0.0, 1.0);
        let level = ((t * CONTOUR_LEVELS as f64).floor() as usize).min(CONTOUR_LEVELS - 1);
        level as f32 / (CONTOUR_LEVELS - 1) as f32
    };
    let dx = (x_max - x_min) / RASTER as f64;
    let dy = (y_max - y_min) / RASTER as f64;
    let cells = (0..RASTER)
        .flat_map(|a| (0..RASTER).map(move |b| (a, b)))
        .map(|(a, b)| {
            let x = x_min + (a as f64 + 0.5) * dx;
            let y = y_min + (b as f64 + 0.5) * dy;
            let z = bilinear(&xs, &ys, &grid, x, y);
            let color = ViridisRGB::get_color(band(z));
            Rectangle::new(
                [
                    (x_min + a as f64 * dx, y_min + b as f64 * dy),
                    (x_min + (a + 1) as f64 * dx, y_min + (b + 1) as f64 * dy),
                ],
                color.filled(),
            )
        });
    chart.draw_series(cells).map_err(plot_err)?;

    let mut legend = ChartBuilder::on(&bar)
        .margin_top(46)
        .margin_bottom(56)
        .margin_right(12)
        .y_label_area_size(60)
        .build_cartesian_2d(0.0..1.0, z_min..z_max)
        .map_err(plot_err)?;
    legend
        .configure_mesh()
        .disable_mesh()
        .disable_x_axis()
        .y_labels(6)
        .draw()
        .map_err(plot_err)?;
    let dz = (z_max - z_min) / CONTOUR_LEVELS as f64;
    legend
        .draw_series((0..CONTOUR_LEVELS).map(|l| {
            let lo = z_min + l as f64 * dz;
            let color = ViridisRGB::get_color(l as f32 / (CONTOUR_LEVELS - 1) as f32);
            Rectangle::new([(0.0, lo), (1.0, lo + dz)], color.filled())
        }))
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

fn bilinear(xs: &[f64], ys: &[f64], grid: &[Vec<f64>], x: f64, y: f64) -> f64 {
    let locate = |axis: &[f64], v: f64| -> (usize, f64) {
        if axis.len() == 1 {
            return (0, 0.0);
        }
        let i = axis.partition_point(|&a| a <= v).clamp(1, axis.len() - 1) - 1;
        let t = ((v - axis[i]) / (axis[i + 1] - axis[i])).clamp(0.0, 1.0);
        (i, t)
    };
    let (i, tx) = locate(xs, x);
    let (j, ty) = locate(ys, y);
    let i1 = (i + 1).min(xs.len() - 1);
    let j1 = (j + 1).min(ys.len() - 1);
    let a = grid[i][j] * (1.0 - tx) + grid[i1][j] * tx;
    let b = grid[i][j1] * (1.0 - tx) + grid[i1][j1] * tx;
    a * (1.0 - ty) + b * ty
}

//! Polarimeter concentration sweeps.
//!
//! A sweep is a set of [`MeasurementRecord`]s: one observed rotation per
//! sample and concentration. Each record derives into specific rotation,
//! the power absorbed by the solution, and the chiral phase pair; per-sample
//! records fit Biot's law `θ = S·l·c`, and the derived values turn into
//! plot series.
//!
//! Concentrations are carried in g/100 mL (percent) in files and records and
//! divided by 100 wherever a g/mL value enters a formula.

mod csvio;
mod derive;
mod fit;
mod plot;
mod synth;

pub use csvio::{
    parse_measurements, validate_measurements, write_derived, write_measurements, Violation,
    DERIVED_COLUMNS, MEASUREMENT_COLUMNS,
};
pub use derive::{derive_record, DerivedRecord};
pub use fit::{fit_biot, fit_line, FitMode, FitResult};
pub use plot::{
    build_series, emit_plot, parse_plot_csv, PlotFormat, PlotOptions, PlotSeries, YKind,
};
pub use synth::{synth_sweep, synth_sweep_with, SweepOptions};

/// One polarimeter reading.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub sample_name: String,
    /// g/100 mL.
    pub concentration_percent: f64,
    /// Signed observed rotation in degrees (dextro positive).
    pub observed_rotation_deg: f64,
    pub path_length_dm: f64,
    pub temperature_c: f64,
    pub wavelength_nm: f64,
    pub source_power_mw: f64,
}

impl MeasurementRecord {
    pub fn concentration_g_per_ml(&self) -> f64 {
        self.concentration_percent / 100.0
    }
}

/// Groups items by sample name, keeping first-appearance order of samples
/// and input order within each sample.
pub fn group_by_sample<T, F>(items: &[T], name: F) -> Vec<(String, Vec<T>)>
where
    T: Clone,
    F: Fn(&T) -> &str,
{
    let mut groups: Vec<(String, Vec<T>)> = Vec::new();
    for item in items {
        let key = name(item);
        match groups.iter_mut().find(|(k, _)| k == key) {
            Some((_, v)) => v.push(item.clone()),
            None => groups.push((key.to_string(), vec![item.clone()])),
        }
    }
    groups
}

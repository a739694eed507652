use super::MeasurementRecord;
use crate::elements::{absorbed_intensity, transmitted_intensity};
use crate::geometric::chiral_phases;
use crate::polarization::Intensity;
use crate::{Error, Result};

/// Quantities derived from one reading.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedRecord {
    pub sample_name: String,
    pub concentration_percent: f64,
    pub rotation_deg: f64,
    pub source_power_mw: f64,
    /// deg·dm⁻¹·(g/mL)⁻¹; `None` at zero concentration.
    pub specific_rotation: Option<f64>,
    pub absorbed_mw: f64,
    pub transmitted_mw: f64,
    pub gamma_left: f64,
    pub gamma_right: f64,
    pub cos_theta: f64,
}

/// Specific rotation `ϑ/(l·c)`, the absorbed and transmitted power
/// `I₀ sin²ϑ`, `I₀ cos²ϑ`, and the chiral phase pair for the observed
/// rotation ϑ.
pub fn derive_record(m: &MeasurementRecord) -> Result<DerivedRecord> {
    if !(m.path_length_dm > 0.0) {
        return Err(Error::out_of_range(
            "path length",
            "> 0 dm",
            m.path_length_dm,
        ));
    }
    if !(m.concentration_percent >= 0.0) {
        return Err(Error::out_of_range(
            "concentration",
            ">= 0 %",
            m.concentration_percent,
        ));
    }
    let source = Intensity::milliwatts(m.source_power_mw)?;
    let theta = m.observed_rotation_deg.to_radians();
    let conc = m.concentration_g_per_ml();
    let specific_rotation =
        (conc > 0.0).then(|| m.observed_rotation_deg / (m.path_length_dm * conc));
    let phases = chiral_phases(theta);

    Ok(DerivedRecord {
        sample_name: m.sample_name.clone(),
        concentration_percent: m.concentration_percent,
        rotation_deg: m.observed_rotation_deg,
        source_power_mw: m.source_power_mw,
        specific_rotation,
        absorbed_mw: absorbed_intensity(source, theta).mw(),
        transmitted_mw: transmitted_intensity(source, theta).mw(),
        gamma_left: phases.gamma_left,
        gamma_right: phases.gamma_right,
        cos_theta: theta.cos(),
    })
}

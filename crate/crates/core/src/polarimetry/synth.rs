use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::MeasurementRecord;
use crate::elements::{rotation_biot, ChiralSample};
use crate::polarization::DEFAULT_SOURCE_POWER_MW;
use crate::{Error, Result};

/// Bookkeeping fields written into synthetic records.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub sample_name: String,
    pub temperature_c: f64,
    pub source_power_mw: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            sample_name: "synthetic".into(),
            temperature_c: 18.0,
            source_power_mw: DEFAULT_SOURCE_POWER_MW,
        }
    }
}

/// Synthetic readings of `sample` at each concentration (g/100 mL): Biot's
/// law plus Gaussian noise of `noise_stddev_deg`. Same seed, same output.
pub fn synth_sweep(
    sample: &ChiralSample,
    concentrations_percent: &[f64],
    noise_stddev_deg: f64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    synth_sweep_with(
        sample,
        concentrations_percent,
        noise_stddev_deg,
        seed,
        &SweepOptions::default(),
    )
}

pub fn synth_sweep_with(
    sample: &ChiralSample,
    concentrations_percent: &[f64],
    noise_stddev_deg: f64,
    seed: u64,
    options: &SweepOptions,
) -> Result<Vec<MeasurementRecord>> {
    if !(noise_stddev_deg.is_finite() && noise_stddev_deg >= 0.0) {
        return Err(Error::out_of_range(
            "noise standard deviation",
            ">= 0 deg",
            noise_stddev_deg,
        ));
    }
    if let Some(&bad) = concentrations_percent
        .iter()
        .find(|c| !(c.is_finite() && **c >= 0.0))
    {
        return Err(Error::out_of_range("concentration", ">= 0 %", bad));
    }
    sample.validate()?;

    let noise = Normal::new(0.0, noise_stddev_deg).expect("validated standard deviation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    concentrations_percent
        .iter()
        .map(|&c| {
            let clean = rotation_biot(&sample.clone().with_concentration(c / 100.0))?;
            let observed = if noise_stddev_deg > 0.0 {
                clean + noise.sample(&mut rng)
            } else {
                clean
            };
            Ok(MeasurementRecord {
                sample_name: options.sample_name.clone(),
                concentration_percent: c,
                observed_rotation_deg: observed,
                path_length_dm: sample.path_length_dm,
                temperature_c: options.temperature_c,
                wavelength_nm: sample.wavelength_m * 1e9,
                source_power_mw: options.source_power_mw,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::Handedness;

    fn eight_steps() -> Vec<f64> {
        (1..=8).map(|k| 0.25 * f64::from(k)).collect()
    }

    fn sample() -> ChiralSample {
        ChiralSample::new(14.0, 0.0, 1.0, 589e-9, Handedness::Levo).unwrap()
    }

    #[test]
    fn noiseless_is_biot() {
        let recs = synth_sweep(&sample(), &eight_steps(), 0.0, 1).unwrap();
        assert_eq!(recs.len(), 8);
        for r in &recs {
            assert!(
                (r.observed_rotation_deg + 14.0 * r.concentration_percent / 100.0).abs() < 1e-15
            );
            assert_eq!(r.source_power_mw, 0.55);
        }
        assert_eq!(recs[0].concentration_percent, 0.25);
        assert_eq!(recs[7].concentration_percent, 2.0);
    }

    #[test]
    fn seeded_determinism() {
        let a = synth_sweep(&sample(), &eight_steps(), 0.01, 42).unwrap();
        let b = synth_sweep(&sample(), &eight_steps(), 0.01, 42).unwrap();
        let c = synth_sweep(&sample(), &eight_steps(), 0.01, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(synth_sweep(&sample(), &eight_steps(), -0.1, 1).is_err());
        assert!(synth_sweep(&sample(), &[0.5, -0.25], 0.0, 1).is_err());
    }
}

//! Geometric phases of spin-1/2 loops and of the rotated polarization.
//!
//! Loop holonomies are computed as the Pancharatnam product of overlaps of
//! neighbouring spinors, `γ = −arg Π ⟨ψ_k|ψ_{k+1}⟩`. The product is gauge
//! invariant whenever the last sample reproduces the first state, so the
//! phase convention of [`spinor_state`] does not leak into the result.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;

use crate::polarization::{overlap, PolarizationState};
use crate::{Complex, Error, Result};

/// Amplitudes over (|0⟩, |1⟩).
pub type QubitState = Vector2<Complex>;

/// Samples closer than this (in each angle) count as the same point.
pub const LOOP_CLOSURE_TOL: f64 = 1e-9;

/// Overlap products below this magnitude have no usable phase.
pub const PHASE_DEFINED_TOL: f64 = 1e-12;

/// Reduces an angle to (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Spinor angles: polar ϑ ∈ [0, π], azimuth φ ∈ [0, 2π) and the frame
/// (helicity) angle χ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorParams {
    polar: f64,
    azimuth: f64,
    frame: f64,
}

impl SpinorParams {
    /// Clamps `polar` into [0, π] and reduces `azimuth` mod 2π. `frame` is
    /// kept as given so that loops winding in χ stay distinguishable.
    pub fn new(polar: f64, azimuth: f64, frame: f64) -> Self {
        SpinorParams {
            polar: polar.clamp(0.0, PI),
            azimuth: azimuth.rem_euclid(TAU),
            frame,
        }
    }

    pub fn polar(&self) -> f64 {
        self.polar
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn frame(&self) -> f64 {
        self.frame
    }

    fn same_point(&self, other: &SpinorParams) -> bool {
        (self.polar - other.polar).abs() <= LOOP_CLOSURE_TOL
            && wrap_phase(self.azimuth - other.azimuth).abs() <= LOOP_CLOSURE_TOL
            && wrap_phase(self.frame - other.frame).abs() <= LOOP_CLOSURE_TOL
    }
}

/// `[cos(ϑ/2)|0⟩ + sin(ϑ/2) e^{−iφ}|1⟩] · e^{i(φ−χ)/2}`.
pub fn spinor_state(p: &SpinorParams) -> QubitState {
    let (s, c) = (p.polar / 2.0).sin_cos();
    let global = Complex::from_polar(1.0, (p.azimuth - p.frame) / 2.0);
    Vector2::new(
        Complex::new(c, 0.0) * global,
        Complex::from_polar(s, -p.azimuth) * global,
    )
}

/// Ordered spinor samples along a path in (ϑ, φ, χ).
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    samples: Vec<SpinorParams>,
    closed: bool,
}

impl LoopPath {
    pub fn new(samples: Vec<SpinorParams>) -> Self {
        let closed = match (samples.first(), samples.last()) {
            (Some(a), Some(b)) if samples.len() > 1 => a.same_point(b),
            _ => false,
        };
        LoopPath { samples, closed }
    }

    /// Circle of constant polar angle, φ running 0 → 2π at fixed χ.
    /// `samples` counts both endpoints, so the circle has `samples − 1`
    /// segments.
    pub fn latitude(polar: f64, samples: usize) -> Self {
        let segments = samples.saturating_sub(1).max(1) as f64;
        let points = (0..samples)
            .map(|k| SpinorParams::new(polar, TAU * k as f64 / segments, 0.0))
            .collect();
        LoopPath::new(points)
    }

    pub fn samples(&self) -> &[SpinorParams] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }
}

/// Discrete Berry phase of a closed loop, in (−π, π].
///
/// For a latitude circle with increasing φ the result tends to
/// `π(1 − cos ϑ)` mod 2π: the Bloch vector of [`spinor_state`] has azimuth
/// −φ, so that loop runs clockwise seen from the north pole. Loops that wind
/// χ by 2π pick up the extra `∮dχ/2 = π`.
pub fn berry_phase(path: &LoopPath) -> Result<f64> {
    if path.samples.len() < 3 {
        return Err(Error::TooFewLoopSamples(path.samples.len()));
    }
    if !path.closed {
        return Err(Error::OpenLoop);
    }
    let states: Vec<QubitState> = path.samples.iter().map(spinor_state).collect();
    let product =
        states
            .windows(2)
            .map(|w| w[0].dotc(&w[1]))
            .fold(Complex::new(1.0, 0.0), |acc, z| {
                // keep the running product near unit modulus over long loops
                let p = acc * z;
                p / p.norm().max(f64::MIN_POSITIVE)
            });
    let magnitude: f64 = states.windows(2).map(|w| w[0].dotc(&w[1]).norm()).product();
    if magnitude < PHASE_DEFINED_TOL {
        return Err(Error::OrthogonalStates);
    }
    Ok(wrap_phase(-product.arg()))
}

/// Phases picked up by molecules of fixed chirality for a net rotation ϑ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralPhasePair {
    pub gamma_left: f64,
    pub gamma_right: f64,
}

/// `γ_L = π(1 − cos ϑ)`, `γ_R = π(1 + cos ϑ)`.
pub fn chiral_phases(theta_net: f64) -> ChiralPhasePair {
    let p = PI * theta_net.cos();
    ChiralPhasePair {
        gamma_left: PI - p,
        gamma_right: PI + p,
    }
}

/// `(γ_R − γ_L)/(2π)`, which reproduces `cos ϑ`.
pub fn recombination_check(theta_net: f64) -> f64 {
    let pair = chiral_phases(theta_net);
    (pair.gamma_right - pair.gamma_left) / TAU
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PancharatnamPhase {
    pub magnitude: f64,
    /// arg⟨a|b⟩ in (−π, π].
    pub phase: f64,
}

pub fn pancharatnam_phase(
    a: &PolarizationState,
    b: &PolarizationState,
) -> Result<PancharatnamPhase> {
    let z = overlap(a, b);
    let magnitude = z.norm();
    if magnitude <= PHASE_DEFINED_TOL {
        return Err(Error::OrthogonalStates);
    }
    Ok(PancharatnamPhase {
        magnitude,
        phase: z.arg(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoleculeSpin {
    Up,
    Down,
}

/// Coefficient of the rotated molecular qubit: `½(e^{iϑ} + e^{−iϑ})` for
/// ↑ and `−½(e^{iϑ} − e^{−iϑ})` for ↓.
pub fn qubit_rotation_map(theta_net: f64, spin: MoleculeSpin) -> Complex {
    let fwd = Complex::from_polar(1.0, theta_net);
    let back = Complex::from_polar(1.0, -theta_net);
    match spin {
        MoleculeSpin::Up => (fwd + back) * 0.5,
        MoleculeSpin::Down => -(fwd - back) * 0.5,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    use proptest::prelude::*;

    use super::*;
    use crate::elements::{analyzer, propagate, rotated_h, rotator};
    use crate::polarization::linear_state;

    fn angular_error(gamma: f64, target: f64) -> f64 {
        wrap_phase(gamma.abs() - target)
            .abs()
            .min(wrap_phase(gamma + target).abs())
            .min(wrap_phase(gamma - target).abs())
    }

    #[test]
    fn spinor_examples() {
        let north = spinor_state(&SpinorParams::new(0.0, 0.0, 0.0));
        assert!((north[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!(north[1].norm() < 1e-12);

        let south = spinor_state(&SpinorParams::new(PI, 0.0, 0.0));
        assert!(south[0].norm() < 1e-12);
        assert!((south[1] - Complex::new(1.0, 0.0)).norm() < 1e-12);

        let eq = spinor_state(&SpinorParams::new(FRAC_PI_2, 0.0, 0.0));
        assert!((eq[0] - Complex::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((eq[1] - Complex::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn params_are_clamped_and_reduced() {
        let p = SpinorParams::new(4.0, -FRAC_PI_2, 7.0);
        assert_eq!(p.polar(), PI);
        assert!((p.azimuth() - 3.0 * FRAC_PI_2).abs() < 1e-12);
        assert_eq!(p.frame(), 7.0);
    }

    #[test]
    fn berry_phase_latitude_examples() {
        let eq = berry_phase(&LoopPath::latitude(FRAC_PI_2, 1000)).unwrap();
        assert!(angular_error(eq, PI) < 1e-4);

        let third = berry_phase(&LoopPath::latitude(FRAC_PI_3, 1000)).unwrap();
        assert!((third.abs() - FRAC_PI_2).abs() < 1e-4);
        // increasing azimuth gives the positive branch
        assert!(third > 0.0);
    }

    #[test]
    fn degenerate_loop_has_no_phase() {
        let p = SpinorParams::new(0.7, 1.1, 0.3);
        let path = LoopPath::new(vec![p; 5]);
        assert!(berry_phase(&path).unwrap().abs() < 1e-15);
    }

    #[test]
    fn frame_winding_adds_half_turn() {
        let samples = (0..=400)
            .map(|k| SpinorParams::new(0.9, 0.4, TAU * f64::from(k) / 400.0))
            .collect();
        let gamma = berry_phase(&LoopPath::new(samples)).unwrap();
        assert!(angular_error(gamma, PI) < 1e-9);
    }

    #[test]
    fn berry_phase_errors() {
        let open = LoopPath::new(vec![
            SpinorParams::new(0.5, 0.0, 0.0),
            SpinorParams::new(0.5, 1.0, 0.0),
            SpinorParams::new(0.5, 2.0, 0.0),
        ]);
        assert_eq!(berry_phase(&open), Err(Error::OpenLoop));
        let short = LoopPath::new(vec![SpinorParams::new(0.5, 0.0, 0.0); 2]);
        assert_eq!(berry_phase(&short), Err(Error::TooFewLoopSamples(2)));
        // antipodal neighbours on the equator
        assert_eq!(
            berry_phase(&LoopPath::latitude(FRAC_PI_2, 3)),
            Err(Error::OrthogonalStates)
        );
    }

    #[test]
    fn chiral_phase_examples() {
        let p = chiral_phases(0.0);
        assert_eq!((p.gamma_left, p.gamma_right), (0.0, TAU));
        let p = chiral_phases(FRAC_PI_2);
        assert!((p.gamma_left - PI).abs() < 1e-12 && (p.gamma_right - PI).abs() < 1e-12);
        let p = chiral_phases(FRAC_PI_3);
        assert!((p.gamma_left - FRAC_PI_2).abs() < 1e-12);
        assert!((p.gamma_right - 3.0 * FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn recombination_examples() {
        assert!((recombination_check(0.0) - 1.0).abs() < 1e-12);
        assert!(recombination_check(FRAC_PI_2).abs() < 1e-12);
        assert!((recombination_check(1.0) - 0.5403023).abs() < 1e-7);
    }

    #[test]
    fn pancharatnam_examples() {
        let s = linear_state(0.3);
        let p = pancharatnam_phase(&s, &s).unwrap();
        assert!((p.magnitude - 1.0).abs() < 1e-12 && p.phase.abs() < 1e-12);

        let x = PolarizationState::horizontal();
        let (theta, alpha) = (0.9, 0.2);
        let x_out = propagate(&[rotator(theta), analyzer(alpha)], &x);
        let p = pancharatnam_phase(&x, &x_out).unwrap();
        assert!((p.magnitude - (theta - alpha).cos() * alpha.cos()).abs() < 1e-12);
        assert!(p.phase.abs() < 1e-12);

        let t = 1.2;
        let p = pancharatnam_phase(&x, &rotated_h(t)).unwrap();
        assert!((p.magnitude - t.cos().abs()).abs() < 1e-12);

        let v = PolarizationState::vertical();
        assert_eq!(pancharatnam_phase(&x, &v), Err(Error::OrthogonalStates));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn qubit_rotation_examples() {
        assert!(
            (qubit_rotation_map(0.0, MoleculeSpin::Up) - Complex::new(1.0, 0.0)).norm() < 1e-12
        );
        assert!(qubit_rotation_map(0.0, MoleculeSpin::Down).norm() < 1e-12);
        let up = qubit_rotation_map(FRAC_PI_4, MoleculeSpin::Up);
        assert!((up.re - 0.7071068).abs() < 1e-7 && up.im.abs() < 1e-12);
        let down = qubit_rotation_map(0.4, MoleculeSpin::Down);
        assert!((down - Complex::new(0.0, -(0.4f64).sin())).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn spinor_is_normalized(t in -1.0..4.5f64, p in -10.0..10.0f64, x in -10.0..10.0f64) {
            let s = spinor_state(&SpinorParams::new(t, p, x));
            prop_assert!((s.norm_squared() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn phase_pair_identities(t in -20.0..20.0f64) {
            let p = chiral_phases(t);
            prop_assert!((p.gamma_left + p.gamma_right - TAU).abs() < 1e-12);
            prop_assert!((0.0..=TAU).contains(&p.gamma_left));
            prop_assert!((0.0..=TAU).contains(&p.gamma_right));
            prop_assert!((recombination_check(t) - t.cos()).abs() < 1e-12);
        }

        #[test]
        fn cyclic_relabeling(polar in 0.2..2.9f64, shift in 1usize..199) {
            let path = LoopPath::latitude(polar, 200);
            let open = &path.samples()[..199];
            let mut relabeled: Vec<_> = open[shift..].iter().chain(&open[..shift]).copied().collect();
            relabeled.push(relabeled[0]);
            let a = berry_phase(&path).unwrap();
            let b = berry_phase(&LoopPath::new(relabeled)).unwrap();
            prop_assert!(wrap_phase(a - b).abs() < 1e-9);
        }

        #[test]
        fn pancharatnam_symmetry(a in -3.0..3.0f64, b in -3.0..3.0f64, ph in -3.0..3.0f64) {
            let sa = linear_state(a);
            let sb = linear_state(b).scaled(Complex::from_polar(1.0, ph));
            prop_assume!(overlap(&sa, &sb).norm() > 1e-6);
            let ab = pancharatnam_phase(&sa, &sb).unwrap();
            let ba = pancharatnam_phase(&sb, &sa).unwrap();
            prop_assert!((ab.magnitude - ba.magnitude).abs() < 1e-12);
            prop_assert!(wrap_phase(ab.phase + ba.phase).abs() < 1e-12);
        }

        #[test]
        fn refinement_halves_error(polar in 0.3..2.8f64) {
            let target = PI * (1.0 - polar.cos());
            let coarse = angular_error(berry_phase(&LoopPath::latitude(polar, 101)).unwrap(), target);
            let fine = angular_error(berry_phase(&LoopPath::latitude(polar, 201)).unwrap(), target);
            prop_assert!(fine <= 0.5 * coarse + 1e-12);
        }
    }
}

//! Jones matrices of the polarimeter chain and the optical-rotation laws of
//! a chiral sample.
//!
//! Every [`OpticalElement`] stores its matrix in the linear (H, V) basis.
//! A measurement is modelled as polarizer → sample (a rotator) → analyzer;
//! the analyzer-relative angle `ϑ = θ − α` drives the intensity bookkeeping
//! through Malus's law.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::polarization::{
    circular_to_linear_matrix, linear_to_circular_matrix, Basis, Intensity, JonesMatrix,
    PolarizationState,
};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementKind {
    Rotator { theta: f64 },
    CircularRetarder { phi_left: f64, phi_right: f64 },
    Analyzer { alpha: f64 },
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalElement {
    matrix: JonesMatrix,
    kind: ElementKind,
}

impl OpticalElement {
    pub fn general(matrix: JonesMatrix) -> Self {
        OpticalElement {
            matrix,
            kind: ElementKind::General,
        }
    }

    /// Jones matrix in the linear (H, V) basis.
    pub fn matrix(&self) -> &JonesMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    /// Jones matrix acting on (L, R) components.
    pub fn circular_matrix(&self) -> JonesMatrix {
        linear_to_circular_matrix() * self.matrix * circular_to_linear_matrix()
    }

    /// The element `other` placed after `self` in the beam.
    pub fn then(&self, other: &OpticalElement) -> OpticalElement {
        OpticalElement::general(other.matrix * self.matrix)
    }

    pub fn apply(&self, state: &PolarizationState) -> PolarizationState {
        let lin = state.in_basis(Basis::Linear);
        PolarizationState::new(self.matrix * lin.components(), Basis::Linear)
            .in_basis(state.basis())
    }
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Rotation of the plane of polarization by `theta` radians
/// (counterclockwise for `theta > 0`).
pub fn rotator(theta: f64) -> OpticalElement {
    let (s, c) = theta.sin_cos();
    OpticalElement {
        matrix: Matrix2::new(real(c), real(-s), real(s), real(c)),
        kind: ElementKind::Rotator { theta },
    }
}

/// Circular retarder giving phases `phi_left` and `phi_right` to the two
/// circular eigenmodes.
///
/// The handedness of the arguments is tied to the rotation they produce: in
/// the linear basis the element is `e^{iψ}·rotator(θ)` with
/// `ψ = (φ_L + φ_R)/2` and `θ = (φ_L − φ_R)/2`, so `φ_L > φ_R` turns the
/// plane counterclockwise. Over the (L, R) components of this crate, where
/// `|L⟩ = (1, i)/√2`, the matrix is `diag(e^{iφ_R}, e^{iφ_L})`.
pub fn circular_retarder(phi_left: f64, phi_right: f64) -> OpticalElement {
    let diag = Matrix2::new(
        Complex::from_polar(1.0, phi_right),
        Complex::new(0.0, 0.0),
        Complex::new(0.0, 0.0),
        Complex::from_polar(1.0, phi_left),
    );
    OpticalElement {
        matrix: circular_to_linear_matrix() * diag * linear_to_circular_matrix(),
        kind: ElementKind::CircularRetarder {
            phi_left,
            phi_right,
        },
    }
}

/// Linear analyzer (polarizer) with its transmission axis at `alpha`.
pub fn analyzer(alpha: f64) -> OpticalElement {
    let (s, c) = alpha.sin_cos();
    OpticalElement {
        matrix: Matrix2::new(real(c * c), real(s * c), real(s * c), real(s * s)),
        kind: ElementKind::Analyzer { alpha },
    }
}

/// `n` identical molecules in a row, each rotating by `theta`.
pub fn cascade_rotation(n: u32, theta: f64) -> Result<OpticalElement> {
    if n == 0 {
        return Err(Error::EmptyCascade);
    }
    Ok(rotator(f64::from(n) * theta))
}

/// Sends `input` through `elements` in traversal order. The result is in
/// the basis of `input`.
pub fn propagate(elements: &[OpticalElement], input: &PolarizationState) -> PolarizationState {
    let lin = input.in_basis(Basis::Linear);
    let out = elements.iter().fold(*lin.components(), |v, e| e.matrix * v);
    PolarizationState::new(out, Basis::Linear).in_basis(input.basis())
}

/// Horizontal light after a rotation by `theta`, in the circular basis:
/// `(e^{−iθ}|L⟩ + e^{iθ}|R⟩)/√2`.
pub fn rotated_h(theta: f64) -> PolarizationState {
    rotator(theta)
        .apply(&PolarizationState::horizontal())
        .in_basis(Basis::Circular)
}

/// Malus's law: power past the analyzer, `I₀ cos²ϑ`.
pub fn transmitted_intensity(source: Intensity, theta_net: f64) -> Intensity {
    source.scale(theta_net.cos().powi(2))
}

/// Power removed from the beam, `I₀ sin²ϑ`.
pub fn absorbed_intensity(source: Intensity, theta_net: f64) -> Intensity {
    source.scale(theta_net.sin().powi(2))
}

/// Rotatory power `ρ = ϑ/d` in degrees per decimeter.
pub fn rotatory_power(theta_net: f64, thickness_dm: f64) -> Result<f64> {
    if !(thickness_dm > 0.0) {
        return Err(Error::out_of_range("thickness", "> 0 dm", thickness_dm));
    }
    Ok(theta_net.to_degrees() / thickness_dm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    /// Counterclockwise as seen looking toward the source; negative rotation.
    Levo,
    /// Clockwise as seen looking toward the source; positive rotation.
    Dextro,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Levo => -1.0,
            Handedness::Dextro => 1.0,
        }
    }

    pub fn from_sign(x: f64) -> Self {
        if x < 0.0 {
            Handedness::Levo
        } else {
            Handedness::Dextro
        }
    }
}

/// An optically active solution in a polarimeter tube.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralSample {
    /// Magnitude of the specific rotation, deg·dm⁻¹·(g/mL)⁻¹.
    pub specific_rotation: f64,
    /// g/mL.
    pub concentration: f64,
    pub path_length_dm: f64,
    pub wavelength_m: f64,
    pub handedness: Handedness,
    /// `n_L − n_R`, when known.
    pub index_difference: Option<f64>,
}

impl ChiralSample {
    pub fn new(
        specific_rotation: f64,
        concentration: f64,
        path_length_dm: f64,
        wavelength_m: f64,
        handedness: Handedness,
    ) -> Result<Self> {
        let sample = ChiralSample {
            specific_rotation,
            concentration,
            path_length_dm,
            wavelength_m,
            handedness,
            index_difference: None,
        };
        sample.validate()?;
        Ok(sample)
    }

    pub fn with_index_difference(mut self, delta_n: f64) -> Self {
        self.index_difference = Some(delta_n);
        self
    }

    pub fn with_concentration(mut self, concentration: f64) -> Self {
        self.concentration = concentration;
        self
    }

    /// Specific rotation with the handedness sign applied.
    pub fn signed_specific_rotation(&self) -> f64 {
        self.handedness.sign() * self.specific_rotation
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.specific_rotation.is_finite() && self.specific_rotation >= 0.0) {
            return Err(Error::out_of_range(
                "specific rotation magnitude",
                ">= 0",
                self.specific_rotation,
            ));
        }
        if !(self.concentration.is_finite() && self.concentration >= 0.0) {
            return Err(Error::out_of_range(
                "concentration",
                ">= 0 g/mL",
                self.concentration,
            ));
        }
        if !(self.path_length_dm.is_finite() && self.path_length_dm > 0.0) {
            return Err(Error::out_of_range(
                "path length",
                "> 0 dm",
                self.path_length_dm,
            ));
        }
        if !(self.wavelength_m.is_finite() && self.wavelength_m > 0.0) {
            return Err(Error::out_of_range(
                "wavelength",
                "> 0 m",
                self.wavelength_m,
            ));
        }
        Ok(())
    }
}

/// Rotation from circular birefringence, `π (n_L − n_R) l / λ`, in radians.
pub fn rotation_from_indices(sample: &ChiralSample) -> Result<f64> {
    let delta_n = sample
        .index_difference
        .ok_or(Error::MissingIndexDifference)?;
    if !(sample.path_length_dm > 0.0) {
        return Err(Error::out_of_range(
            "path length",
            "> 0 dm",
            sample.path_length_dm,
        ));
    }
    if !(sample.wavelength_m > 0.0) {
        return Err(Error::out_of_range(
            "wavelength",
            "> 0 m",
            sample.wavelength_m,
        ));
    }
    let path_m = sample.path_length_dm * 0.1;
    Ok(PI * delta_n * path_m / sample.wavelength_m)
}

/// Biot's law `θ = S·l·c` in degrees, signed by handedness.
pub fn rotation_biot(sample: &ChiralSample) -> Result<f64> {
    if sample.concentration < 0.0 {
        return Err(Error::out_of_range(
            "concentration",
            ">= 0 g/mL",
            sample.concentration,
        ));
    }
    Ok(sample.signed_specific_rotation() * sample.path_length_dm * sample.concentration)
}

/// Inputs of the angular-momentum rotation law. `coupling` is a free
/// proportionality constant supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentumPair {
    pub left: f64,
    pub right: f64,
    pub coupling: f64,
    pub volume: f64,
    pub tube_radius: f64,
}

impl AngularMomentumPair {
    /// Unit coupling, volume and radius.
    pub fn new(left: f64, right: f64) -> Self {
        AngularMomentumPair {
            left,
            right,
            coupling: 1.0,
            volume: 1.0,
            tube_radius: 1.0,
        }
    }
}

/// `f c V² / r · (1/L_L − 1/L_R)`, evaluated as written.
pub fn rotation_from_angular_momentum(p: &AngularMomentumPair, concentration: f64) -> Result<f64> {
    if p.left == 0.0 || p.right == 0.0 || p.tube_radius == 0.0 {
        return Err(Error::Singularity);
    }
    Ok(
        p.coupling * concentration * p.volume * p.volume / p.tube_radius
            * (1.0 / p.left - 1.0 / p.right),
    )
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    use proptest::prelude::*;

    use super::*;
    use crate::polarization::linear_state;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn mat_close(a: &JonesMatrix, b: &JonesMatrix, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    fn dextro(s: f64, conc: f64, l: f64) -> ChiralSample {
        ChiralSample::new(s, conc, l, 589e-9, Handedness::Dextro).unwrap()
    }

    #[test]
    fn rotation_from_indices_examples() {
        let base = dextro(10.0, 0.01, 1.0).with_index_difference(0.0);
        assert_eq!(rotation_from_indices(&base).unwrap(), 0.0);

        let mut s = dextro(10.0, 0.01, 1.0).with_index_difference(1e-6);
        s.wavelength_m = 500e-9;
        assert!((rotation_from_indices(&s).unwrap() - 0.6283185).abs() < 1e-7);
        s.index_difference = Some(-1e-6);
        assert!((rotation_from_indices(&s).unwrap() + 0.6283185).abs() < 1e-7);

        let missing = dextro(10.0, 0.01, 1.0);
        assert_eq!(
            rotation_from_indices(&missing),
            Err(Error::MissingIndexDifference)
        );
    }

    #[test]
    fn biot_examples() {
        assert!((rotation_biot(&dextro(10.0, 0.02, 1.0)).unwrap() - 0.2).abs() < TOL);
        assert_eq!(rotation_biot(&dextro(10.0, 0.0, 1.0)).unwrap(), 0.0);
        let a = rotation_biot(&dextro(7.3, 0.013, 0.5)).unwrap();
        let b = rotation_biot(&dextro(7.3, 0.026, 0.5)).unwrap();
        assert_eq!(2.0 * a, b);

        let levo = ChiralSample::new(10.0, 0.02, 1.0, 589e-9, Handedness::Levo).unwrap();
        assert!((rotation_biot(&levo).unwrap() + 0.2).abs() < TOL);

        let mut bad = dextro(10.0, 0.02, 1.0);
        bad.concentration = -0.01;
        assert!(rotation_biot(&bad).is_err());
        assert!(ChiralSample::new(10.0, -0.01, 1.0, 589e-9, Handedness::Dextro).is_err());
        assert!(ChiralSample::new(10.0, 0.01, 0.0, 589e-9, Handedness::Dextro).is_err());
    }

    #[test]
    fn angular_momentum_law() {
        let p = AngularMomentumPair::new(1.0, 2.0);
        assert!((rotation_from_angular_momentum(&p, 0.01).unwrap() - 0.005).abs() < TOL);

        let eq = AngularMomentumPair::new(3.0, 3.0);
        assert_eq!(rotation_from_angular_momentum(&eq, 0.5).unwrap(), 0.0);

        let mut q = AngularMomentumPair::new(1.7, 0.4);
        q.coupling = 2.5;
        q.volume = 0.3;
        q.tube_radius = 0.1;
        let fwd = rotation_from_angular_momentum(&q, 0.02).unwrap();
        std::mem::swap(&mut q.left, &mut q.right);
        let rev = rotation_from_angular_momentum(&q, 0.02).unwrap();
        assert!((fwd + rev).abs() < TOL);

        let zero = AngularMomentumPair::new(0.0, 1.0);
        assert_eq!(
            rotation_from_angular_momentum(&zero, 0.01),
            Err(Error::Singularity)
        );
    }

    #[test]
    fn rotator_examples() {
        assert!(mat_close(
            rotator(0.0).matrix(),
            &JonesMatrix::identity(),
            TOL
        ));
        let quarter = Matrix2::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert!(mat_close(rotator(FRAC_PI_2).matrix(), &quarter, TOL));
        let m = *rotator(0.4).matrix();
        assert!((m.determinant() - c(1.0, 0.0)).norm() < TOL);
        assert!(mat_close(
            &(m.transpose() * m),
            &JonesMatrix::identity(),
            TOL
        ));
    }

    #[test]
    fn circular_retarder_examples() {
        assert!(mat_close(
            circular_retarder(0.0, 0.0).matrix(),
            &JonesMatrix::identity(),
            TOL
        ));
        let phi = 0.37;
        assert!(mat_close(
            circular_retarder(phi, -phi).matrix(),
            rotator(phi).matrix(),
            TOL
        ));
        let expected = rotator(FRAC_PI_2).matrix() * c(0.0, 1.0);
        assert!(mat_close(
            circular_retarder(std::f64::consts::PI, 0.0).matrix(),
            &expected,
            TOL
        ));
        // diagonal and unitary over (L, R)
        let m = circular_retarder(0.9, -0.2).circular_matrix();
        assert!(m[(0, 1)].norm() < TOL && m[(1, 0)].norm() < TOL);
        assert!(mat_close(&(m.adjoint() * m), &JonesMatrix::identity(), TOL));
    }

    #[test]
    fn analyzer_examples() {
        let h = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(mat_close(analyzer(0.0).matrix(), &h, TOL));
        let v = Matrix2::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(mat_close(analyzer(FRAC_PI_2).matrix(), &v, TOL));
        let a = analyzer(0.81).matrix().to_owned();
        assert!(mat_close(&(a * a), &a, TOL));
        assert!(mat_close(&a.adjoint(), &a, TOL));
        assert!((a.trace() - c(1.0, 0.0)).norm() < TOL);
        assert!(a.determinant().norm() < TOL);
    }

    #[test]
    fn propagate_examples() {
        let x = PolarizationState::horizontal();
        assert_eq!(propagate(&[], &x), x);
        let (theta, alpha) = (0.6, 0.25);
        let out = propagate(&[rotator(theta), analyzer(alpha)], &x);
        let expected =
            crate::polarization::linear_state(alpha).scaled(c((theta - alpha).cos(), 0.0));
        assert!(out.approx_eq(&expected, TOL));
        // output basis follows the input basis
        let xc = x.in_basis(Basis::Circular);
        assert_eq!(propagate(&[rotator(0.1)], &xc).basis(), Basis::Circular);
    }

    #[test]
    fn rotated_h_examples() {
        let s = rotated_h(0.0);
        assert_eq!(s.basis(), Basis::Circular);
        assert!((s.components()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < TOL);
        assert!((s.components()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < TOL);

        let theta = 0.83;
        let s = rotated_h(theta);
        let (l, r) = (s.components()[0], s.components()[1]);
        assert!((l.norm() - FRAC_1_SQRT_2).abs() < TOL);
        assert!((r.norm() - FRAC_1_SQRT_2).abs() < TOL);
        assert!((l.arg() + theta).abs() < TOL);
        assert!((r.arg() - theta).abs() < TOL);
    }

    #[test]
    fn cascade_examples() {
        assert!(mat_close(
            cascade_rotation(1, 0.3).unwrap().matrix(),
            rotator(0.3).matrix(),
            TOL
        ));
        assert!(mat_close(
            cascade_rotation(4, FRAC_PI_8).unwrap().matrix(),
            rotator(FRAC_PI_2).matrix(),
            TOL
        ));
        assert_eq!(cascade_rotation(0, 0.3), Err(Error::EmptyCascade));

        let (n, theta) = (5u32, 0.21);
        let h = cascade_rotation(n, theta)
            .unwrap()
            .apply(&PolarizationState::horizontal())
            .in_basis(Basis::Circular);
        let nt = f64::from(n) * theta;
        let l = Complex::from_polar(FRAC_1_SQRT_2, -nt);
        let r = Complex::from_polar(FRAC_1_SQRT_2, nt);
        assert!((h.components()[0] - l).norm() < 1e-10);
        assert!((h.components()[1] - r).norm() < 1e-10);
    }

    #[test]
    fn intensity_bookkeeping_examples() {
        let src = Intensity::default_source();
        assert_eq!(transmitted_intensity(src, 0.0).mw(), 0.55);
        assert!(transmitted_intensity(src, FRAC_PI_2).mw() < TOL);
        assert!((transmitted_intensity(src, FRAC_PI_4).mw() - 0.275).abs() < TOL);

        assert_eq!(absorbed_intensity(src, 0.0).mw(), 0.0);
        assert!((absorbed_intensity(src, FRAC_PI_2).mw() - 0.55).abs() < TOL);
        let expected = 0.55 * 0.1f64.sin().powi(2);
        assert!((absorbed_intensity(src, 0.1).mw() - expected).abs() < TOL);
    }

    #[test]
    fn rotatory_power_examples() {
        assert_eq!(rotatory_power(0.0, 1.0).unwrap(), 0.0);
        assert!((rotatory_power(2f64.to_radians(), 1.0).unwrap() - 2.0).abs() < TOL);
        assert!((rotatory_power(1f64.to_radians(), 0.5).unwrap() - 2.0).abs() < TOL);
        assert!(rotatory_power(1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn rotator_group_law(a in -10.0..10.0f64, b in -10.0..10.0f64) {
            let ab = rotator(a).then(&rotator(b));
            prop_assert!(mat_close(ab.matrix(), rotator(a + b).matrix(), 1e-12));
        }

        #[test]
        fn rotator_preserves_norm(t in -10.0..10.0f64, az in -3.0..3.0f64) {
            let s = linear_state(az);
            prop_assert!((rotator(t).apply(&s).norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn energy_is_conserved(t in -20.0..20.0f64, p in 0.0..10.0f64) {
            let src = Intensity::milliwatts(p).unwrap();
            let total = transmitted_intensity(src, t).mw() + absorbed_intensity(src, t).mw();
            prop_assert!((total - p).abs() < 1e-12);
        }

        #[test]
        fn biot_is_linear(s in 0.0..100.0f64, conc in 0.0..0.1f64, l in 0.1..5.0f64, k in 0.0..10.0f64) {
            let a = rotation_biot(&dextro(s, conc, l)).unwrap();
            let by_c = rotation_biot(&dextro(s, k * conc, l)).unwrap();
            let by_l = rotation_biot(&dextro(s, conc, k.max(1e-3) * l)).unwrap();
            prop_assert!((by_c - k * a).abs() <= 1e-12 * (1.0 + by_c.abs()));
            prop_assert!((by_l - k.max(1e-3) * a).abs() <= 1e-12 * (1.0 + by_l.abs()));
        }

        #[test]
        fn index_rotation_is_antisymmetric(dn in -1e-4..1e-4f64) {
            let s = dextro(1.0, 0.0, 1.0).with_index_difference(dn);
            let swapped = dextro(1.0, 0.0, 1.0).with_index_difference(-dn);
            let sum = rotation_from_indices(&s).unwrap() + rotation_from_indices(&swapped).unwrap();
            prop_assert!(sum.abs() < 1e-12);
        }
    }
}

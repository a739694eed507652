//! Jones vectors in the linear (H, V) and circular (L, R) bases.
//!
//! The circular states are fixed as
//! `|L⟩ = (1, i)/√2` and `|R⟩ = (1, −i)/√2` over (H, V). With that choice
//! `|H⟩ = (|L⟩ + |R⟩)/√2` and `|V⟩ = −i(|L⟩ − |R⟩)/√2`, and a rotation of
//! the plane of polarization by θ shows up as the phases `(e^{−iθ}, e^{iθ})`
//! on the (L, R) components.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::{Matrix2, Vector2};

use crate::{Complex, Error, Result};

/// Default source power of the polarimeter laser, in milliwatts.
pub const DEFAULT_SOURCE_POWER_MW: f64 = 0.55;

/// Tolerance on the squared norm for a state to count as normalized.
pub const NORMALIZED_TOL: f64 = 1e-12;

pub type JonesVector = Vector2<Complex>;
pub type JonesMatrix = Matrix2<Complex>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Components over (H, V).
    Linear,
    /// Components over (L, R).
    Circular,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Linear => "linear",
            Basis::Circular => "circular",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Columns are |L⟩ and |R⟩ written over (H, V): maps circular components to
/// linear ones.
pub fn circular_to_linear_matrix() -> JonesMatrix {
    let s = Complex::new(FRAC_1_SQRT_2, 0.0);
    let i = Complex::new(0.0, FRAC_1_SQRT_2);
    Matrix2::new(s, s, i, -i)
}

/// Inverse (adjoint) of [`circular_to_linear_matrix`].
pub fn linear_to_circular_matrix() -> JonesMatrix {
    circular_to_linear_matrix().adjoint()
}

/// A fully polarized field as a complex 2-vector tagged with its basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    components: JonesVector,
    basis: Basis,
}

impl PolarizationState {
    pub fn new(components: JonesVector, basis: Basis) -> Self {
        PolarizationState { components, basis }
    }

    pub fn linear(h: Complex, v: Complex) -> Self {
        Self::new(Vector2::new(h, v), Basis::Linear)
    }

    pub fn circular(l: Complex, r: Complex) -> Self {
        Self::new(Vector2::new(l, r), Basis::Circular)
    }

    pub fn horizontal() -> Self {
        Self::linear(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub fn vertical() -> Self {
        Self::linear(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
    }

    pub fn left_circular() -> Self {
        Self::circular(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub fn right_circular() -> Self {
        Self::circular(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
    }

    pub fn components(&self) -> &JonesVector {
        &self.components
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZED_TOL
    }

    /// Rescales to unit norm. The zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return *self;
        }
        Self::new(self.components.unscale(n), self.basis)
    }

    pub fn scaled(&self, factor: Complex) -> Self {
        Self::new(self.components * factor, self.basis)
    }

    pub fn to_circular(&self) -> Result<Self> {
        match self.basis {
            Basis::Linear => Ok(Self::new(
                linear_to_circular_matrix() * self.components,
                Basis::Circular,
            )),
            Basis::Circular => Err(Error::WrongBasis {
                expected: "linear",
                found: "circular",
            }),
        }
    }

    pub fn to_linear(&self) -> Result<Self> {
        match self.basis {
            Basis::Circular => Ok(Self::new(
                circular_to_linear_matrix() * self.components,
                Basis::Linear,
            )),
            Basis::Linear => Err(Error::WrongBasis {
                expected: "circular",
                found: "linear",
            }),
        }
    }

    /// Re-expresses the state in `basis`, converting only when needed.
    pub fn in_basis(&self, basis: Basis) -> Self {
        match (self.basis, basis) {
            (Basis::Linear, Basis::Circular) => Self::new(
                linear_to_circular_matrix() * self.components,
                Basis::Circular,
            ),
            (Basis::Circular, Basis::Linear) => {
                Self::new(circular_to_linear_matrix() * self.components, Basis::Linear)
            }
            _ => *self,
        }
    }

    /// Componentwise comparison in a common basis.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let other = other.in_basis(self.basis);
        self.components
            .iter()
            .zip(other.components.iter())
            .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Linear polarization at `azimuth` radians from the horizontal.
pub fn linear_state(azimuth: f64) -> PolarizationState {
    let (s, c) = azimuth.sin_cos();
    PolarizationState::linear(Complex::new(c, 0.0), Complex::new(s, 0.0))
}

/// ⟨a|b⟩, conjugate-linear in `a`. `b` is converted to the basis of `a`.
pub fn overlap(a: &PolarizationState, b: &PolarizationState) -> Complex {
    let b = b.in_basis(a.basis());
    a.components().dotc(b.components())
}

/// Optical power in milliwatts. Never negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Intensity(f64);

impl Intensity {
    pub const ZERO: Intensity = Intensity(0.0);

    pub fn milliwatts(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Intensity(value))
        } else {
            Err(Error::out_of_range("power", "finite and >= 0 mW", value))
        }
    }

    pub fn default_source() -> Self {
        Intensity(DEFAULT_SOURCE_POWER_MW)
    }

    pub fn mw(self) -> f64 {
        self.0
    }

    /// Scales by a non-negative factor. Negative factors clamp to zero.
    pub(crate) fn scale(self, factor: f64) -> Self {
        Intensity(self.0 * factor.max(0.0))
    }
}

impl fmt::Display for Intensity {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{} mW", self.0)
    }
}

/// Power carried by `state` when the source delivers `source_power` for a
/// unit-norm field.
pub fn intensity_of(state: &PolarizationState, source_power: Intensity) -> Intensity {
    source_power.scale(state.norm_sqr())
}

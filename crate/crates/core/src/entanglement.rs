//! Photon–molecule two-qubit states and their entanglement.
//!
//! Amplitudes are ordered over the product basis
//! `(↑R, ↑L, ↓R, ↓L)`: molecule spin first, photon helicity second, so the
//! index of `|m p⟩` is `2·m + p` with `↑ = 0, ↓ = 1` and `R = 0, L = 1`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::{Complex, Error, Result};

/// Tolerance on the squared norm of a normalized state.
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Hermiticity and unit-trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted in a density matrix.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helicity {
    Right,
    Left,
}

/// Which factor of the product space a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Molecule,
    Photon,
}

fn basis_index(spin: Spin, helicity: Helicity) -> usize {
    let m = match spin {
        Spin::Up => 0,
        Spin::Down => 1,
    };
    let p = match helicity {
        Helicity::Right => 0,
        Helicity::Left => 1,
    };
    2 * m + p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amplitudes: Vector4<Complex>,
}

impl TwoQubitState {
    pub fn new(amplitudes: Vector4<Complex>) -> Self {
        TwoQubitState { amplitudes }
    }

    /// The product basis state `|spin⟩|helicity⟩`.
    pub fn basis_state(spin: Spin, helicity: Helicity) -> Self {
        let mut amplitudes = Vector4::zeros();
        amplitudes[basis_index(spin, helicity)] = Complex::new(1.0, 0.0);
        TwoQubitState { amplitudes }
    }

    /// `a|↑R⟩ + b|↓L⟩`, as given (not renormalized).
    pub fn correlated_pair(a: Complex, b: Complex) -> Self {
        let mut amplitudes = Vector4::zeros();
        amplitudes[basis_index(Spin::Up, Helicity::Right)] = a;
        amplitudes[basis_index(Spin::Down, Helicity::Left)] = b;
        TwoQubitState { amplitudes }
    }

    /// `molecule ⊗ photon`, with the photon given over (R, L).
    pub fn product(molecule: [Complex; 2], photon: [Complex; 2]) -> Self {
        TwoQubitState {
            amplitudes: Vector4::new(
                molecule[0] * photon[0],
                molecule[0] * photon[1],
                molecule[1] * photon[0],
                molecule[1] * photon[1],
            ),
        }
    }

    pub fn amplitudes(&self) -> &Vector4<Complex> {
        &self.amplitudes
    }

    pub fn amplitude(&self, spin: Spin, helicity: Helicity) -> Complex {
        self.amplitudes[basis_index(spin, helicity)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= STATE_NORM_TOL
    }

    pub fn normalized(&self) -> Self {
        let n = self.amplitudes.norm();
        if n == 0.0 {
            return *self;
        }
        TwoQubitState {
            amplitudes: self.amplitudes.unscale(n),
        }
    }

    /// Applies `molecule ⊗ photon` local operators.
    pub fn apply_local(&self, molecule: &Matrix2<Complex>, photon: &Matrix2<Complex>) -> Self {
        TwoQubitState {
            amplitudes: molecule.kronecker(photon) * self.amplitudes,
        }
    }
}

/// The photon–molecule singlet after a joint rotation ϑ,
/// `(e^{2iϑ}|↑R⟩ + e^{−2iϑ}|↓L⟩)/√2`.
pub fn singlet_state(theta_net: f64) -> TwoQubitState {
    TwoQubitState::correlated_pair(
        Complex::from_polar(FRAC_1_SQRT_2, 2.0 * theta_net),
        Complex::from_polar(FRAC_1_SQRT_2, -2.0 * theta_net),
    )
}

/// `cos(π/4 − ϑ/2)|↑R⟩ + sin(π/4 − ϑ/2)|↓L⟩`, a normalized family whose
/// concurrence is `|cos ϑ|`. It shows how a cosine dependence of the
/// entanglement on the rotation can arise from unequal weights; phases
/// alone, as in [`singlet_state`], leave the concurrence at 1.
pub fn cosine_concurrence_state(theta_net: f64) -> TwoQubitState {
    let beta = FRAC_PI_4 - theta_net / 2.0;
    TwoQubitState::correlated_pair(Complex::new(beta.cos(), 0.0), Complex::new(beta.sin(), 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Matrix4<Complex>,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(entries: Matrix4<Complex>) -> Result<Self> {
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let skew = (entries - entries.adjoint()).camax();
        if skew > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max |ρ − ρ†| = {skew:e})"
            )));
        }
        let trace = entries.trace();
        if (trace - Complex::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {trace}, not 1")));
        }
        let hermitian = (entries + entries.adjoint()) * Complex::new(0.5, 0.0);
        let min_eig = hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < EIGENVALUE_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn entries(&self) -> &Matrix4<Complex> {
        &self.entries
    }

    pub fn trace(&self) -> Complex {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (self.entries * self.entries).trace().re
    }
}

/// `|ψ⟩⟨ψ|` of a normalized state.
pub fn density_of(state: &TwoQubitState) -> Result<DensityMatrix> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    let psi = state.amplitudes();
    Ok(DensityMatrix {
        entries: psi * psi.adjoint(),
    })
}

/// Reduced 2×2 matrix left after tracing out `traced`.
pub fn partial_trace(rho: &DensityMatrix, traced: Subsystem) -> Matrix2<Complex> {
    let m = rho.entries();
    let mut out = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = (0..2)
                .map(|k| match traced {
                    Subsystem::Photon => m[(2 * i + k, 2 * j + k)],
                    Subsystem::Molecule => m[(2 * k + i, 2 * k + j)],
                })
                .sum();
        }
    }
    out
}

/// `σ_y ⊗ σ_y`.
pub fn spin_flip_operator() -> Matrix4<Complex> {
    let sy = Matrix2::new(
        Complex::new(0.0, 0.0),
        Complex::new(0.0, -1.0),
        Complex::new(0.0, 1.0),
        Complex::new(0.0, 0.0),
    );
    sy.kronecker(&sy)
}

/// The spin-flipped density `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flipped(rho: &DensityMatrix) -> Matrix4<Complex> {
    let y = spin_flip_operator();
    y * rho.entries().conjugate() * y
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit density
/// matrix, where λᵢ are the decreasing square roots of the eigenvalues of
/// `ρ ρ̃`.
///
/// With `ρ = W W†` (columns of `W` are `√pᵢ |vᵢ⟩`), the λᵢ are the singular
/// values of `Wᵀ (σ_y⊗σ_y) W`. Going through the singular values avoids
/// taking square roots of eigenvalues that are zero up to rounding.
pub fn concurrence_of(rho: &DensityMatrix) -> f64 {
    let hermitian = (rho.entries() + rho.entries().adjoint()) * Complex::new(0.5, 0.0);
    let eig = hermitian.symmetric_eigen();
    let weights = eig
        .eigenvalues
        .map(|p| Complex::new(p.max(0.0).sqrt(), 0.0));
    let w = eig.eigenvectors * Matrix4::from_diagonal(&weights);
    let tau = w.transpose() * spin_flip_operator() * w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Concurrence of a normalized pure state.
pub fn concurrence(state: &TwoQubitState) -> Result<f64> {
    Ok(concurrence_of(&density_of(state)?))
}

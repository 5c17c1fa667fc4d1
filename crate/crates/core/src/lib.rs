//! Construction and verification of time-optimal Hamiltonians for driving
//! one pure quantum state into another.
//!
//! Given an initial state |ψ_I⟩ and a final state |ψ_F⟩, the fastest
//! time-independent Hamiltonian whose eigenvalue spread fits a fixed energy
//! budget rotates the state along the Fubini–Study geodesic joining the two
//! rays. This crate builds that Hamiltonian in closed form, reports the
//! minimal transit time, evaluates the exact trajectory, and can audit the
//! optimality claim numerically against randomly drawn competitor
//! Hamiltonians with the same spread.
//!
//! The pieces:
//!
//! * [`linalg`] — dense complex vectors and matrices, Hermitian
//!   eigendecomposition, matrix exponential action.
//! * [`geometry`] — state vectors, Fubini–Study distance, and the reduction
//!   of a state pair to the two-dimensional plane it spans.
//! * [`brachistochrone`] — the optimal Hamiltonian, its eigen-axis, minimal
//!   transit time, energy uncertainty, and the closed-form trajectory.
//! * [`evolution`] — propagation, trajectory sampling, first-passage search.
//! * [`audit`] — randomized competitor search certifying optimality.
//!
//! Everything is generic over the real scalar backing the complex
//! arithmetic (any [`Real`], in practice `f32` or `f64`); concrete `f64`
//! aliases live at the crate root. All operations are pure functions over
//! immutable values, so they can be called concurrently without ceremony.
//!
//! ```
//! use qbrach_core::brachistochrone::{optimal_hamiltonian, SpreadConvention};
//! use qbrach_core::geometry::{decompose_plane, StateVector};
//! use qbrach_core::Complex;
//!
//! // Drive |0⟩ to (|0⟩ + |1⟩)/√2 with unit energy budget.
//! let psi_i = StateVector::<f64>::basis_state(2, 0)?;
//! let h = std::f64::consts::FRAC_1_SQRT_2;
//! let psi_f = StateVector::new(vec![Complex::new(h, 0.0), Complex::new(h, 0.0)])?;
//!
//! let plane = decompose_plane(&psi_i, &psi_f)?;
//! let sol = optimal_hamiltonian(&plane, 1.0, SpreadConvention::Coupling)?;
//!
//! let expected = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);
//! assert!((sol.tau - expected).abs() < 1e-12);
//! # Ok::<(), qbrach_core::Error>(())
//! ```

#![forbid(unsafe_code)]

use std::fmt::{Debug, Display, LowerExp};

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, NumAssign};

pub mod audit;
pub mod brachistochrone;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod linalg;

pub use error::{Error, Result};
pub use num_complex::Complex;

/// Real scalar backing all complex arithmetic in the crate.
///
/// Blanket-implemented for anything float-like; in practice `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` literal into the working scalar.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal must be representable in the working scalar")
}

/// The numerical tolerances used throughout the crate, gathered in one record.
///
/// Operations use [`Tolerances::default`] internally; the record exists so
/// the thresholds are documented and inspectable in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative Frobenius defect below which a matrix counts as Hermitian.
    pub hermiticity: T,
    /// Allowed deviation from orthonormality for eigenvector sets and axis pairs.
    pub orthonormality: T,
    /// Allowed deviation from unit norm for state vectors.
    pub unit_norm: T,
    /// Separation angle (radians) below which two rays count as the same ray.
    pub parallel_rays: T,
    /// Overlap magnitude below which two states count as exactly orthogonal.
    pub orthogonal_overlap: T,
    /// Largest |⟨E₊|E₋⟩| accepted when assembling a Hamiltonian from an axis pair.
    pub axis_orthogonality: T,
}

impl<T: Real> Default for Tolerances<T> {
    /// Double-precision defaults, with floors proportional to the machine
    /// epsilon of the working scalar so that lower-precision types get
    /// gates they can actually satisfy. At `f64` the floors are below the
    /// stated values and change nothing.
    fn default() -> Self {
        let eps = T::epsilon();
        Tolerances {
            hermiticity: real::<T>(1e-10).max(eps * real(1e3)),
            orthonormality: real::<T>(1e-12).max(eps * real(64.0)),
            unit_norm: real::<T>(1e-12).max(eps * real(64.0)),
            parallel_rays: real::<T>(1e-9).max(eps * real(1e3)),
            orthogonal_overlap: real::<T>(1e-12).max(eps * real(64.0)),
            axis_orthogonality: real::<T>(1e-10).max(eps * real(1e3)),
        }
    }
}

// Concrete aliases for the usual working precision.
pub type ComplexVector64 = linalg::ComplexVector<f64>;
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type EigenSystem64 = linalg::EigenSystem<f64>;
pub type StateVector64 = geometry::StateVector<f64>;
pub type PlaneDecomposition64 = geometry::PlaneDecomposition<f64>;
pub type HermitianOperator64 = brachistochrone::HermitianOperator<f64>;
pub type BrachistochroneSolution64 = brachistochrone::BrachistochroneSolution<f64>;
pub type TrajectorySample64 = evolution::TrajectorySample<f64>;
pub type FirstPassage64 = evolution::FirstPassage<f64>;
pub type AuditConfig64 = audit::AuditConfig<f64>;
pub type AuditReport64 = audit::AuditReport<f64>;
pub type C64 = Complex<f64>;

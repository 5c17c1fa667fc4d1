//! State vectors and the geometry of the ray space they live in.
//!
//! Two ingredients matter downstream: the Fubini–Study distance
//! θ = 2·arccos|⟨a|b⟩| between rays, and the reduction of a state pair to
//! the two-real-dimensional plane it spans. The decomposition fixes the
//! relative phase so that |ψ_F⟩ = cos(θ/2)|ψ_I⟩ + sin(θ/2)|ψ̄⟩ with a real
//! non-negative overlap — every closed-form expression in
//! [`crate::brachistochrone`] is written against that gauge.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{inner_product, ComplexVector};
use crate::{real, Real, Tolerances};

/// A unit-norm complex vector: a pure quantum state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    vector: ComplexVector<T>,
}

impl<T: Real> StateVector<T> {
    /// Wrap amplitudes that are already unit-norm (within the crate-wide
    /// tolerance). Use [`StateVector::normalized`] to rescale arbitrary input.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let vector = ComplexVector::new(amplitudes)?;
        let norm = vector.norm();
        if (norm - T::one()).abs() > Tolerances::default().unit_norm {
            return Err(Error::Domain(format!(
                "state vector norm {norm} is not 1 within tolerance"
            )));
        }
        Ok(StateVector { vector })
    }

    /// Rescale arbitrary amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let vector = ComplexVector::new(amplitudes)?;
        let norm = vector.norm();
        if norm <= T::zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(StateVector {
            vector: vector.scaled(Complex::new(T::one() / norm, T::zero())),
        })
    }

    /// The `k`-th computational basis state.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        Ok(StateVector {
            vector: ComplexVector::basis_state(dim, k)?,
        })
    }

    /// Wrap a vector that is unit-norm by construction.
    pub(crate) fn from_unit_unchecked(vector: ComplexVector<T>) -> Self {
        debug_assert!(
            (vector.norm() - T::one()).abs() <= real::<T>(1e-9).max(T::epsilon() * real(1e3)),
            "caller promised a unit vector"
        );
        StateVector { vector }
    }

    /// Haar-random state: normalized vector of independent standard complex
    /// Gaussian amplitudes.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("state dimension must be at least 1".into()));
        }
        let amplitudes = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(real::<T>(re), real::<T>(im))
            })
            .collect();
        Self::normalized(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        self.vector.entries()
    }

    pub fn vector(&self) -> &ComplexVector<T> {
        &self.vector
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        inner_product(&self.vector, &other.vector)
    }

    /// This state multiplied by the global phase e^{iφ}.
    pub fn phase_rotated(&self, phi: T) -> Self {
        StateVector {
            vector: self.vector.scaled(Complex::from_polar(T::one(), phi)),
        }
    }
}

/// |⟨a|b⟩|² — the transition probability between two states.
pub fn fidelity<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    Ok(a.overlap(b)?.norm_sqr().min(T::one()))
}

/// Fubini–Study distance θ = 2·arccos(|⟨a|b⟩| clamped to [0, 1]) ∈ [0, π].
///
/// Evaluated as 2·atan2(‖b − a⟨a|b⟩‖, |⟨a|b⟩|), which is the same angle but
/// stays fully accurate when the states nearly coincide or are nearly
/// orthogonal, where the arccosine form loses digits.
pub fn fs_distance<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let overlap = a.overlap(b)?;
    let mag = overlap.norm().min(T::one());
    // Residual of b orthogonal to a; its norm is sin(θ/2).
    let mut residual = b.vector.clone();
    residual.axpy(-overlap, &a.vector);
    let sin_half = residual.norm().min(T::one());
    Ok(real::<T>(2.0) * sin_half.atan2(mag))
}

/// A state pair reduced to the plane it spans.
///
/// `psi_f_aligned` is the final state rescaled by a global phase so that
/// ⟨psi_i|psi_f_aligned⟩ = cos(θ/2) ≥ 0, and `psi_bar` is the unit vector
/// orthogonal to `psi_i` inside the plane, oriented so that
/// `psi_f_aligned = cos(θ/2)·psi_i + sin(θ/2)·psi_bar`.
#[derive(Debug, Clone)]
pub struct PlaneDecomposition<T> {
    psi_i: StateVector<T>,
    psi_f_aligned: StateVector<T>,
    psi_bar: StateVector<T>,
    theta: T,
}

impl<T: Real> PlaneDecomposition<T> {
    pub fn psi_i(&self) -> &StateVector<T> {
        &self.psi_i
    }

    pub fn psi_f_aligned(&self) -> &StateVector<T> {
        &self.psi_f_aligned
    }

    pub fn psi_bar(&self) -> &StateVector<T> {
        &self.psi_bar
    }

    /// Separation angle θ ∈ (0, π].
    pub fn theta(&self) -> T {
        self.theta
    }

    /// The canonical relative phase, fixed at 3π/2 so the superposition
    /// coefficient e^{i(φ+π/2)} multiplying `psi_bar` is exactly 1.
    pub fn phi(&self) -> T {
        real::<T>(1.5) * T::PI()
    }

    pub fn dim(&self) -> usize {
        self.psi_i.dim()
    }

    /// Rebuild the aligned final state from the plane basis:
    /// cos(θ/2)·psi_i + sin(θ/2)·psi_bar.
    pub fn reconstruct_final(&self) -> StateVector<T> {
        let half = self.theta * real(0.5);
        let mut v = self
            .psi_i
            .vector
            .scaled(Complex::new(half.cos(), T::zero()));
        v.axpy(Complex::new(half.sin(), T::zero()), &self.psi_bar.vector);
        StateVector::from_unit_unchecked(v)
    }
}

/// Reduce a state pair to its spanning plane with the canonical phase gauge.
///
/// Pairs closer than the crate-wide parallel-ray tolerance are rejected:
/// there is no plane, no rotation, and nothing to construct.
pub fn decompose_plane<T: Real>(
    psi_i: &StateVector<T>,
    psi_f: &StateVector<T>,
) -> Result<PlaneDecomposition<T>> {
    decompose_plane_with(psi_i, psi_f, Tolerances::default().parallel_rays)
}

/// [`decompose_plane`] with an explicit parallel-ray cutoff (radians).
pub fn decompose_plane_with<T: Real>(
    psi_i: &StateVector<T>,
    psi_f: &StateVector<T>,
    parallel_tolerance: T,
) -> Result<PlaneDecomposition<T>> {
    let overlap = psi_i.overlap(psi_f)?;
    let theta = fs_distance(psi_i, psi_f)?;
    if theta <= parallel_tolerance {
        return Err(Error::DegeneratePair {
            theta: theta.to_f64().unwrap_or(f64::NAN),
        });
    }

    let tol = Tolerances::<T>::default();
    let aligned = if overlap.norm() <= tol.orthogonal_overlap {
        // Orthogonal pair: the overlap carries no phase information, so fix
        // the gauge by making the largest-magnitude amplitude real positive.
        // Ties resolve to the first index, deterministically.
        let amplitudes = psi_f.amplitudes();
        let mut idx = 0;
        let mut best = T::neg_infinity();
        for (k, z) in amplitudes.iter().enumerate() {
            let m = z.norm();
            if m > best {
                best = m;
                idx = k;
            }
        }
        psi_f.phase_rotated(-amplitudes[idx].arg())
    } else {
        psi_f.phase_rotated(-overlap.arg())
    };

    let half = theta * real(0.5);
    let (sin_half, cos_half) = (half.sin(), half.cos());

    // psi_bar = (aligned − cos(θ/2)·psi_i)/sin(θ/2), then one defensive
    // re-orthogonalization pass against psi_i before normalizing.
    let mut bar = aligned.vector.clone();
    bar.axpy(Complex::new(-cos_half, T::zero()), &psi_i.vector);
    let correction = inner_product(&psi_i.vector, &bar)?;
    bar.axpy(-correction, &psi_i.vector);
    let bar_norm = bar.norm();
    if bar_norm <= T::zero() {
        return Err(Error::DegeneratePair {
            theta: theta.to_f64().unwrap_or(f64::NAN),
        });
    }
    let psi_bar =
        StateVector::from_unit_unchecked(bar.scaled(Complex::new(T::one() / bar_norm, T::zero())));
    debug_assert!((bar_norm - sin_half).abs() <= real::<T>(1e-9).max(T::epsilon() * real(1e3)));

    Ok(PlaneDecomposition {
        psi_i: psi_i.clone(),
        psi_f_aligned: aligned,
        psi_bar,
        theta,
    })
}

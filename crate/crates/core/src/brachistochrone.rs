//! The time-optimal Hamiltonian for a pure-state transfer and everything
//! that comes with it in closed form.
//!
//! For a pair reduced to its plane (see [`crate::geometry`]), the fastest
//! constant Hamiltonian under a bounded eigenvalue spread generates a
//! rotation in that plane:
//!
//! H = iκ|ψ_I⟩⟨ψ_F| − iκ|ψ_F⟩⟨ψ_I|   (aligned gauge)
//!
//! with eigenvalues ±κ·sin(θ/2) on the axis pair
//!
//! E± = (1/√2)[(1 ± i·cot(θ/2))|ψ_I⟩ ∓ (i/sin(θ/2))|ψ_F⟩],
//!
//! energy uncertainty ΔH = κ·sin(θ/2), and transit time τ = ħθ/(2κ·sin(θ/2)).
//! Both eigenstates sit on the equator between |ψ_I⟩ and |ψ_F⟩ — the state
//! moves at the top speed 2ΔH/ħ allowed by the Anandan–Aharonov relation
//! for the whole trip, which is what makes the construction optimal.
//!
//! The energy budget ω enters through a [`SpreadConvention`]: either as the
//! raw coupling coefficient κ = ω, or rescaled (κ = ω/sin(θ/2)) so the
//! eigenvalue spread saturates 2ω exactly. The two differ only by that
//! rescaling; all derived quantities stay mutually consistent.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{PlaneDecomposition, StateVector};
use crate::linalg::{
    hermitian_eigensystem, inner_product, outer_product, ComplexMatrix, ComplexVector, EigenSystem,
};
use crate::{real, Real, Tolerances};

/// How the energy budget ω parameterizes the constructed Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpreadConvention {
    /// ω is the coupling coefficient itself: κ = ω, eigenvalues ±ω·sin(θ/2),
    /// spread 2ω·sin(θ/2), τ = ħθ/(2ω·sin(θ/2)).
    Coupling,
    /// Rescaled so the eigenvalue spread saturates the budget: κ = ω/sin(θ/2),
    /// eigenvalues ±ω, spread 2ω, τ = ħθ/(2ω).
    Saturating,
}

impl std::fmt::Display for SpreadConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpreadConvention::Coupling => write!(f, "coupling"),
            SpreadConvention::Saturating => write!(f, "saturating"),
        }
    }
}

/// A validated Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    /// Wrap a matrix, rejecting anything with a Hermiticity defect above the
    /// crate-wide relative tolerance. Rounding-level asymmetry is folded
    /// into the Hermitian part.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let scale = T::one().max(matrix.frobenius_norm());
        let defect = matrix.hermiticity_defect();
        if defect > Tolerances::<T>::default().hermiticity * scale {
            return Err(Error::NotHermitian {
                defect: (defect / scale).to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(HermitianOperator {
            matrix: matrix.hermitized(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// H|ψ⟩.
    pub fn apply(&self, psi: &StateVector<T>) -> Result<ComplexVector<T>> {
        self.matrix.mul_vec(psi.vector())
    }

    /// ⟨ψ|H|ψ⟩ (real for a Hermitian operator).
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T> {
        let h_psi = self.apply(psi)?;
        Ok(inner_product(psi.vector(), &h_psi)?.re)
    }

    /// Eigenvalues and eigenvectors, ascending.
    pub fn eigensystem(&self) -> Result<EigenSystem<T>> {
        hermitian_eigensystem(&self.matrix)
    }

    /// H + c·1.
    pub fn add_identity(&self, c: T) -> Self {
        let shift = ComplexMatrix::identity(self.dim()).scaled(Complex::new(c, T::zero()));
        HermitianOperator {
            matrix: self.matrix.add(&shift).expect("same dimension"),
        }
    }

    /// −H.
    pub fn negated(&self) -> Self {
        HermitianOperator {
            matrix: self.matrix.scaled(Complex::new(-T::one(), T::zero())),
        }
    }
}

/// The full closed-form answer for one state pair, energy budget, and
/// convention.
#[derive(Debug, Clone)]
pub struct BrachistochroneSolution<T> {
    /// The plane the motion happens in.
    pub decomposition: PlaneDecomposition<T>,
    /// Energy budget as supplied by the caller.
    pub omega: T,
    /// Planck constant in the caller's units.
    pub hbar: T,
    /// How ω was interpreted.
    pub convention: SpreadConvention,
    /// The optimal Hamiltonian.
    pub hamiltonian: HermitianOperator<T>,
    /// Eigenstate with eigenvalue `lambda_plus`.
    pub e_plus: StateVector<T>,
    /// Eigenstate with eigenvalue `lambda_minus`.
    pub e_minus: StateVector<T>,
    /// Largest eigenvalue, +κ·sin(θ/2).
    pub lambda_plus: T,
    /// Smallest eigenvalue, −κ·sin(θ/2).
    pub lambda_minus: T,
    /// Energy uncertainty in the initial state; constant along the path.
    pub delta_h: T,
    /// Minimal transit time.
    pub tau: T,
}

impl<T: Real> BrachistochroneSolution<T> {
    /// The coupling coefficient κ in front of the rotation generator
    /// (ω under [`SpreadConvention::Coupling`], ω/sin(θ/2) under
    /// [`SpreadConvention::Saturating`]).
    pub fn effective_coupling(&self) -> T {
        let half = self.decomposition.theta() * real(0.5);
        self.lambda_plus / half.sin()
    }

    /// The exact trajectory at time `t ≥ 0`:
    ///
    /// |ψ(t)⟩ = [cos x − cot(θ/2)·sin x]|ψ_I⟩ + [sin x / sin(θ/2)]|ψ_F⟩,
    /// x = κ·sin(θ/2)·t/ħ,
    ///
    /// evaluated in the plane basis (ψ_I, ψ̄), which is the same expression
    /// with the final-state cancellations already carried out.
    pub fn analytic_state(&self, t: T) -> StateVector<T> {
        let half = self.decomposition.theta() * real(0.5);
        let x = self.effective_coupling() * half.sin() * t / self.hbar;
        let (sin_x, cos_x) = x.sin_cos();
        let mut v = self
            .decomposition
            .psi_i()
            .vector()
            .scaled(Complex::new(cos_x, T::zero()));
        v.axpy(
            Complex::new(sin_x, T::zero()),
            self.decomposition.psi_bar().vector(),
        );
        StateVector::from_unit_unchecked(v)
    }

    /// H + h(t)·1 — the same motion up to global phase, shifted by a gauge
    /// term evaluated at time `t`.
    pub fn apply_gauge<F: Fn(T) -> T>(&self, gauge: F, t: T) -> HermitianOperator<T> {
        self.hamiltonian.add_identity(gauge(t))
    }
}

/// The equatorial eigen-axis (E₊, E₋) of the optimal rotation for a plane.
///
/// Both states are superpositions of ψ_I and the aligned ψ_F only, so the
/// result is independent of how the caller gauged the inputs.
pub fn axis_states<T: Real>(d: &PlaneDecomposition<T>) -> (StateVector<T>, StateVector<T>) {
    let half = d.theta() * real(0.5);
    let (sin_half, cos_half) = half.sin_cos();
    let cot = cos_half / sin_half;
    let inv_sin = T::one() / sin_half;
    let inv_sqrt2 = T::FRAC_1_SQRT_2();

    let build = |sign: T| {
        // (1/√2)[(1 ± i·cot)·ψ_I ∓ (i/sin)·ψ_F]
        let ci = Complex::new(T::one(), sign * cot).scale(inv_sqrt2);
        let cf = Complex::new(T::zero(), -sign * inv_sin).scale(inv_sqrt2);
        let mut v = d.psi_i().vector().scaled(ci);
        v.axpy(cf, d.psi_f_aligned().vector());
        let norm = v.norm();
        StateVector::from_unit_unchecked(v.scaled(Complex::new(T::one() / norm, T::zero())))
    };

    (build(T::one()), build(-T::one()))
}

/// Assemble λ₊|E₊⟩⟨E₊| + λ₋|E₋⟩⟨E₋| from an explicit axis pair.
///
/// The pair must be orthonormal and the eigenvalues distinct; otherwise the
/// data does not describe a two-level rotation axis.
pub fn hamiltonian_from_axis<T: Real>(
    e_plus: &StateVector<T>,
    e_minus: &StateVector<T>,
    lambda_plus: T,
    lambda_minus: T,
) -> Result<HermitianOperator<T>> {
    if e_plus.dim() != e_minus.dim() {
        return Err(Error::DimensionMismatch {
            left: e_plus.dim(),
            right: e_minus.dim(),
        });
    }
    let overlap = e_plus.overlap(e_minus)?.norm();
    if overlap > Tolerances::<T>::default().axis_orthogonality {
        return Err(Error::InvalidAxis {
            reason: format!("axis states overlap (|⟨E+|E−⟩| = {overlap:.3e})"),
        });
    }
    if lambda_plus == lambda_minus {
        return Err(Error::InvalidAxis {
            reason: "eigenvalues coincide; the axis does not generate a rotation".into(),
        });
    }
    let h = outer_product(e_plus.vector(), e_plus.vector())
        .scaled(Complex::new(lambda_plus, T::zero()))
        .add(
            &outer_product(e_minus.vector(), e_minus.vector())
                .scaled(Complex::new(lambda_minus, T::zero())),
        )?;
    HermitianOperator::new(h)
}

/// The optimal Hamiltonian and every derived quantity, with ħ = 1.
pub fn optimal_hamiltonian<T: Real>(
    d: &PlaneDecomposition<T>,
    omega: T,
    convention: SpreadConvention,
) -> Result<BrachistochroneSolution<T>> {
    optimal_hamiltonian_with_hbar(d, omega, T::one(), convention)
}

/// [`optimal_hamiltonian`] in units where ħ differs from 1.
pub fn optimal_hamiltonian_with_hbar<T: Real>(
    d: &PlaneDecomposition<T>,
    omega: T,
    hbar: T,
    convention: SpreadConvention,
) -> Result<BrachistochroneSolution<T>> {
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "omega must be positive, got {omega}"
        )));
    }
    if !(hbar > T::zero()) || !hbar.is_finite() {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }

    let theta = d.theta();
    let half = theta * real(0.5);
    let sin_half = half.sin();
    let kappa = match convention {
        SpreadConvention::Coupling => omega,
        SpreadConvention::Saturating => omega / sin_half,
    };

    // iκ(|ψ_I⟩⟨ψ_F| − |ψ_F⟩⟨ψ_I|) in the aligned gauge.
    let i_kappa = Complex::new(T::zero(), kappa);
    let forward = outer_product(d.psi_i().vector(), d.psi_f_aligned().vector());
    let backward = outer_product(d.psi_f_aligned().vector(), d.psi_i().vector());
    let hamiltonian = HermitianOperator::new(forward.sub(&backward)?.scaled(i_kappa))?;

    let (e_plus, e_minus) = axis_states(d);
    let lambda_plus = kappa * sin_half;
    let delta_h = lambda_plus;
    let tau = hbar * theta / (real::<T>(2.0) * kappa * sin_half);

    Ok(BrachistochroneSolution {
        decomposition: d.clone(),
        omega,
        hbar,
        convention,
        hamiltonian,
        e_plus,
        e_minus,
        lambda_plus,
        lambda_minus: -lambda_plus,
        delta_h,
        tau,
    })
}

/// The same operator written out as projector combinations:
///
/// (λ₊+λ₋)/(2·sin²(θ/2))·(|ψ_I⟩⟨ψ_I| + |ψ_F⟩⟨ψ_F|)
///   + [λ₊/2·(i/s − c/s²) − λ₋/2·(i/s + c/s²)]·|ψ_I⟩⟨ψ_F|
///   + [λ₊/2·(−i/s − c/s²) − λ₋/2·(−i/s + c/s²)]·|ψ_F⟩⟨ψ_I|
///
/// with s = sin(θ/2), c = cos(θ/2) and ψ_F in the aligned gauge. For
/// symmetric eigenvalues it collapses to the compact two-term form built by
/// [`optimal_hamiltonian`]; the general form exists so asymmetric spectra
/// can be assembled and cross-checked against [`hamiltonian_from_axis`].
pub fn expanded_hamiltonian<T: Real>(
    d: &PlaneDecomposition<T>,
    lambda_plus: T,
    lambda_minus: T,
) -> HermitianOperator<T> {
    let half = d.theta() * real(0.5);
    let (s, c) = half.sin_cos();
    let s2 = s * s;
    let two = real::<T>(2.0);
    let half_scalar = real::<T>(0.5);

    let diag = (lambda_plus + lambda_minus) / (two * s2);
    let inv_s = T::one() / s;
    let c_over_s2 = c / s2;
    // λ₊/2·(±i/s − c/s²) − λ₋/2·(±i/s + c/s²), upper signs for |ψ_I⟩⟨ψ_F|.
    let coeff_fwd = Complex::new(lambda_plus * half_scalar, T::zero())
        * Complex::new(-c_over_s2, inv_s)
        - Complex::new(lambda_minus * half_scalar, T::zero()) * Complex::new(c_over_s2, inv_s);
    let coeff_bwd = Complex::new(lambda_plus * half_scalar, T::zero())
        * Complex::new(-c_over_s2, -inv_s)
        - Complex::new(lambda_minus * half_scalar, T::zero()) * Complex::new(c_over_s2, -inv_s);

    let pi = outer_product(d.psi_i().vector(), d.psi_i().vector());
    let pf = outer_product(d.psi_f_aligned().vector(), d.psi_f_aligned().vector());
    let cross_if = outer_product(d.psi_i().vector(), d.psi_f_aligned().vector());
    let cross_fi = outer_product(d.psi_f_aligned().vector(), d.psi_i().vector());

    let m = pi
        .add(&pf)
        .expect("same dimension")
        .scaled(Complex::new(diag, T::zero()))
        .add(&cross_if.scaled(coeff_fwd))
        .expect("same dimension")
        .add(&cross_fi.scaled(coeff_bwd))
        .expect("same dimension");

    HermitianOperator {
        matrix: m.hermitized(),
    }
}

/// Minimal transit time for a separation θ ∈ (0, π] under the given budget
/// and convention: ħθ/(2ω·sin(θ/2)) for [`SpreadConvention::Coupling`],
/// ħθ/(2ω) for [`SpreadConvention::Saturating`].
pub fn minimal_time<T: Real>(
    theta: T,
    omega: T,
    hbar: T,
    convention: SpreadConvention,
) -> Result<T> {
    if !theta.is_finite() || theta <= T::zero() || theta > T::PI() {
        return Err(Error::Domain(format!(
            "theta must lie in (0, π], got {theta}"
        )));
    }
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "omega must be positive, got {omega}"
        )));
    }
    if !(hbar > T::zero()) || !hbar.is_finite() {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let two = real::<T>(2.0);
    Ok(match convention {
        SpreadConvention::Coupling => hbar * theta / (two * omega * (theta * real(0.5)).sin()),
        SpreadConvention::Saturating => hbar * theta / (two * omega),
    })
}

/// ΔH = √(⟨ψ|H²|ψ⟩ − ⟨ψ|H|ψ⟩²), clamped at zero before the square root so
/// rounding can never produce NaN.
pub fn energy_uncertainty<T: Real>(h: &HermitianOperator<T>, psi: &StateVector<T>) -> Result<T> {
    let h_psi = h.apply(psi)?;
    let mean = inner_product(psi.vector(), &h_psi)?.re;
    let second_moment = h_psi.norm_sqr();
    Ok((second_moment - mean * mean).max(T::zero()).sqrt())
}

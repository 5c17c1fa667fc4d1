//! Time evolution under the convention dψ/dt = +iHψ/ħ, plus the
//! observables sampled along a trajectory and the first-passage search.
//!
//! For a constant Hamiltonian the propagator diagonalizes H once and reuses
//! the eigensystem for every time, so evaluating a fidelity profile is O(n)
//! per point after an O(n³) setup. A classical fixed-step RK4 integrator is
//! available for time-dependent Hamiltonians (gauge terms and the like).

use num_complex::Complex;

use crate::brachistochrone::{energy_uncertainty, HermitianOperator};
use crate::error::{Error, Result};
use crate::geometry::{fidelity, StateVector};
use crate::linalg::{inner_product, ComplexVector, EigenSystem};
use crate::{real, Real};

/// Grid resolution of the coarse scan inside [`first_passage`].
pub const FIRST_PASSAGE_GRID_POINTS: usize = 2048;

/// Relative time resolution (in units of the scanned horizon) to which a
/// passage time is refined.
pub const FIRST_PASSAGE_TIME_TOL: f64 = 1e-9;

/// Default fidelity threshold counted as arrival.
pub const DEFAULT_ARRIVAL_THRESHOLD: f64 = 1.0 - 1e-9;

/// Spectral propagator for a constant Hamiltonian: ψ(t) = Σ_k c_k e^{+iλ_k t/ħ} |v_k⟩.
#[derive(Debug, Clone)]
pub struct Propagator<T> {
    eigen: EigenSystem<T>,
    coefficients: Vec<Complex<T>>,
    hbar: T,
}

impl<T: Real> Propagator<T> {
    /// Diagonalize `h` and project `psi0` onto its eigenbasis.
    pub fn new(h: &HermitianOperator<T>, psi0: &StateVector<T>, hbar: T) -> Result<Self> {
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if h.dim() != psi0.dim() {
            return Err(Error::DimensionMismatch {
                left: h.dim(),
                right: psi0.dim(),
            });
        }
        let eigen = h.eigensystem()?;
        let coefficients = (0..eigen.dim())
            .map(|k| inner_product(eigen.eigenvector(k), psi0.vector()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Propagator {
            eigen,
            coefficients,
            hbar,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    /// ψ(t).
    pub fn state_at(&self, t: T) -> StateVector<T> {
        let n = self.dim();
        let mut out = ComplexVector::zeros(n);
        for k in 0..n {
            let phase = self.eigen.eigenvalue(k) * t / self.hbar;
            let factor = Complex::from_polar(T::one(), phase) * self.coefficients[k];
            out.axpy(factor, self.eigen.eigenvector(k));
        }
        // Renormalize: the expansion is unitary analytically, but long times
        // amplify eigenbasis rounding.
        let norm = out.norm();
        StateVector::from_unit_unchecked(out.scaled(Complex::new(T::one() / norm, T::zero())))
    }

    /// Precompute the profile coefficients for |⟨target|ψ(t)⟩|², making each
    /// later evaluation a single O(n) phase sum.
    pub fn fidelity_profile(&self, target: &StateVector<T>) -> Result<FidelityProfile<T>> {
        if target.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: target.dim(),
            });
        }
        let terms = (0..self.dim())
            .map(|k| {
                let t_k = inner_product(target.vector(), self.eigen.eigenvector(k))?;
                Ok((t_k * self.coefficients[k], self.eigen.eigenvalue(k)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FidelityProfile {
            terms,
            hbar: self.hbar,
        })
    }
}

/// |⟨target|ψ(t)⟩|² as a trigonometric polynomial in t.
#[derive(Debug, Clone)]
pub struct FidelityProfile<T> {
    terms: Vec<(Complex<T>, T)>,
    hbar: T,
}

impl<T: Real> FidelityProfile<T> {
    pub fn at(&self, t: T) -> T {
        let mut amp = Complex::new(T::zero(), T::zero());
        for &(coeff, lambda) in &self.terms {
            amp += coeff * Complex::from_polar(T::one(), lambda * t / self.hbar);
        }
        amp.norm_sqr().min(T::one())
    }
}

/// Evolve `psi0` for time `t` under constant `h`.
pub fn propagate<T: Real>(
    h: &HermitianOperator<T>,
    psi0: &StateVector<T>,
    t: T,
    hbar: T,
) -> Result<StateVector<T>> {
    Ok(Propagator::new(h, psi0, hbar)?.state_at(t))
}

/// One sampled point of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectorySample<T> {
    pub t: T,
    pub state: StateVector<T>,
    /// |⟨target|ψ(t)⟩|².
    pub fidelity: T,
    /// Energy uncertainty of the generator in ψ(t).
    pub delta_h: T,
    /// Instantaneous speed along the projective-space path, estimated by
    /// finite differences of neighbouring samples; equals 2ΔH/ħ up to the
    /// discretization error.
    pub fs_speed: T,
}

/// Sample the trajectory of `psi0` under `h` at `n_samples` uniformly spaced
/// times covering [0, t_total], with fidelities taken against `target`.
pub fn sample_trajectory<T: Real>(
    h: &HermitianOperator<T>,
    psi0: &StateVector<T>,
    target: &StateVector<T>,
    t_total: T,
    n_samples: usize,
    hbar: T,
) -> Result<Vec<TrajectorySample<T>>> {
    if n_samples < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    if !(t_total > T::zero()) || !t_total.is_finite() {
        return Err(Error::Domain(format!(
            "total time must be positive, got {t_total}"
        )));
    }
    let prop = Propagator::new(h, psi0, hbar)?;
    if target.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            left: psi0.dim(),
            right: target.dim(),
        });
    }

    let dt = t_total / real::<T>((n_samples - 1) as f64);
    let states: Vec<StateVector<T>> = (0..n_samples)
        .map(|i| prop.state_at(dt * real::<T>(i as f64)))
        .collect();

    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let t = dt * real::<T>(i as f64);
        let fid = fidelity(target, &states[i])?;
        let dh = energy_uncertainty(h, &states[i])?;
        // Central difference in the interior, one-sided at the endpoints.
        let fs_speed = if i == 0 {
            crate::geometry::fs_distance(&states[0], &states[1])? / dt
        } else if i == n_samples - 1 {
            crate::geometry::fs_distance(&states[i - 1], &states[i])? / dt
        } else {
            crate::geometry::fs_distance(&states[i - 1], &states[i + 1])? / (dt * real::<T>(2.0))
        };
        samples.push(TrajectorySample {
            t,
            state: states[i].clone(),
            fidelity: fid,
            delta_h: dh,
            fs_speed,
        });
    }
    Ok(samples)
}

/// Result of a first-passage search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPassage<T> {
    /// Earliest time at which the trajectory attains the threshold, if any.
    pub time: Option<T>,
    /// Fidelity at that time, or the best fidelity seen over the horizon.
    pub fidelity: T,
}

impl<T> FirstPassage<T> {
    pub fn found(&self) -> bool {
        self.time.is_some()
    }
}

/// Earliest time in [0, t_max] at which |⟨target|ψ(t)⟩|² reaches
/// `threshold`.
///
/// The profile is scanned on a uniform grid, every local maximum bracket is
/// refined by golden-section search to a relative time resolution of
/// [`FIRST_PASSAGE_TIME_TOL`], and the first refined peak meeting the
/// threshold wins. Reporting the closest-approach time (rather than the
/// infinitesimally earlier crossing of the threshold shoulder) keeps the
/// answer stable under the choice of threshold and directly comparable to
/// analytic transit times.
pub fn first_passage<T: Real>(
    h: &HermitianOperator<T>,
    psi0: &StateVector<T>,
    target: &StateVector<T>,
    threshold: T,
    t_max: T,
    hbar: T,
) -> Result<FirstPassage<T>> {
    first_passage_with_grid(
        h,
        psi0,
        target,
        threshold,
        t_max,
        hbar,
        FIRST_PASSAGE_GRID_POINTS,
    )
}

/// [`first_passage`] with an explicit coarse-grid resolution. Exposed so the
/// grid-independence of the result can be tested; `n_grid` must be ≥ 16.
pub fn first_passage_with_grid<T: Real>(
    h: &HermitianOperator<T>,
    psi0: &StateVector<T>,
    target: &StateVector<T>,
    threshold: T,
    t_max: T,
    hbar: T,
    n_grid: usize,
) -> Result<FirstPassage<T>> {
    if !(threshold > T::zero()) || threshold > T::one() {
        return Err(Error::Domain(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(Error::Domain(format!(
            "search horizon must be positive, got {t_max}"
        )));
    }
    if n_grid < 16 {
        return Err(Error::Domain(format!(
            "grid too coarse to bracket extrema: {n_grid}"
        )));
    }

    let prop = Propagator::new(h, psi0, hbar)?;
    let profile = prop.fidelity_profile(target)?;
    let time_tol = t_max * real::<T>(FIRST_PASSAGE_TIME_TOL);

    // Arrival at t = 0 needs no search.
    let f0 = profile.at(T::zero());
    if f0 >= threshold {
        return Ok(FirstPassage {
            time: Some(T::zero()),
            fidelity: f0,
        });
    }

    let dt = t_max / real::<T>(n_grid as f64);
    let grid: Vec<T> = (0..=n_grid)
        .map(|i| profile.at(dt * real::<T>(i as f64)))
        .collect();

    let mut best_fidelity = f0;
    for i in 1..=n_grid {
        let t_i = dt * real::<T>(i as f64);
        best_fidelity = best_fidelity.max(grid[i]);

        let is_candidate = if grid[i] >= threshold {
            // Already above threshold at a grid point: walk uphill to the
            // enclosing maximum so refinement returns the peak, not the
            // shoulder.
            true
        } else {
            // Interior local maximum bracket.
            i < n_grid && grid[i] >= grid[i - 1] && grid[i] >= grid[i + 1]
        };
        if !is_candidate {
            continue;
        }

        let (mut lo, mut hi) = bracket_peak(&profile, t_i, dt, t_max);
        golden_section(&profile, &mut lo, &mut hi, time_tol);
        let t_peak = (lo + hi) * real(0.5);
        let f_peak = profile.at(t_peak);
        best_fidelity = best_fidelity.max(f_peak);
        if f_peak >= threshold {
            // The peak itself qualifies; report its location.
            return Ok(FirstPassage {
                time: Some(t_peak),
                fidelity: f_peak,
            });
        }
    }

    // The grid endpoint may sit on a rising flank whose peak lies beyond
    // t_max; that peak is out of scope by definition of the horizon.
    Ok(FirstPassage {
        time: None,
        fidelity: best_fidelity,
    })
}

/// Expand around `t_center` until the profile is lower on both sides (or the
/// domain boundary is hit), producing a bracket that contains a maximum.
fn bracket_peak<T: Real>(profile: &FidelityProfile<T>, t_center: T, dt: T, t_max: T) -> (T, T) {
    let mut center = t_center;
    let mut f_center = profile.at(center);
    // Walk uphill in grid steps first; the loop is bounded by the horizon.
    loop {
        let left = (center - dt).max(T::zero());
        let right = (center + dt).min(t_max);
        let f_left = profile.at(left);
        let f_right = profile.at(right);
        if f_right > f_center && right < t_max {
            center = right;
            f_center = f_right;
        } else if f_left > f_center && left > T::zero() {
            center = left;
            f_center = f_left;
        } else {
            return (left, right);
        }
    }
}

/// Standard golden-section search for the maximum of `profile` on [lo, hi].
fn golden_section<T: Real>(profile: &FidelityProfile<T>, lo: &mut T, hi: &mut T, tol: T) {
    let inv_phi = real::<T>(0.618_033_988_749_894_8);
    let inv_phi2 = real::<T>(0.381_966_011_250_105_2);
    let mut a = *lo;
    let mut b = *hi;
    let mut h = b - a;
    if h <= tol {
        return;
    }
    let mut c = a + inv_phi2 * h;
    let mut d = a + inv_phi * h;
    let mut fc = profile.at(c);
    let mut fd = profile.at(d);
    while h > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + inv_phi2 * h;
            fc = profile.at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + inv_phi * h;
            fd = profile.at(d);
        }
    }
    *lo = a;
    *hi = b;
}

/// Classical fixed-step RK4 for dψ/dt = +iH(t)ψ/ħ with a possibly
/// time-dependent generator. The state is renormalized once at the end;
/// step count trades accuracy (O(steps⁻⁴)) for work.
pub fn rk4_propagate<T: Real, F>(
    h_at: F,
    psi0: &StateVector<T>,
    t_total: T,
    steps: usize,
    hbar: T,
) -> Result<StateVector<T>>
where
    F: Fn(T) -> crate::linalg::ComplexMatrix<T>,
{
    if steps == 0 {
        return Err(Error::Domain("step count must be positive".into()));
    }
    if !(hbar > T::zero()) || !hbar.is_finite() {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let n = psi0.dim();
    let dt = t_total / real::<T>(steps as f64);
    let i_over_hbar = Complex::new(T::zero(), T::one() / hbar);

    let deriv = |t: T, v: &ComplexVector<T>| -> Result<ComplexVector<T>> {
        let m = h_at(t);
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.dim(),
            });
        }
        Ok(m.mul_vec(v)?.scaled(i_over_hbar))
    };

    let mut psi = psi0.vector().clone();
    let half = real::<T>(0.5);
    let sixth = T::one() / real::<T>(6.0);
    for step in 0..steps {
        let t = dt * real::<T>(step as f64);
        let k1 = deriv(t, &psi)?;
        let mut p2 = psi.clone();
        p2.axpy(Complex::new(dt * half, T::zero()), &k1);
        let k2 = deriv(t + dt * half, &p2)?;
        let mut p3 = psi.clone();
        p3.axpy(Complex::new(dt * half, T::zero()), &k2);
        let k3 = deriv(t + dt * half, &p3)?;
        let mut p4 = psi.clone();
        p4.axpy(Complex::new(dt, T::zero()), &k3);
        let k4 = deriv(t + dt, &p4)?;

        psi.axpy(Complex::new(dt * sixth, T::zero()), &k1);
        psi.axpy(Complex::new(dt * sixth * real::<T>(2.0), T::zero()), &k2);
        psi.axpy(Complex::new(dt * sixth * real::<T>(2.0), T::zero()), &k3);
        psi.axpy(Complex::new(dt * sixth, T::zero()), &k4);
    }
    let norm = psi.norm();
    if norm == T::zero() || !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(StateVector::from_unit_unchecked(
        psi.scaled(Complex::new(T::one() / norm, T::zero())),
    ))
}

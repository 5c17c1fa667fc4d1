//! Dense complex vectors and matrices, sized for small Hilbert spaces.
//!
//! This is deliberately not a general linear algebra library: the crate
//! works with Hamiltonians of dimension two through a few dozen, so plain
//! `Vec`-backed storage and O(n³) algorithms are the right trade. The one
//! nontrivial routine is [`hermitian_eigensystem`], a cyclic Jacobi
//! diagonalization with complex rotations, which in turn powers the matrix
//! exponential action used for time evolution.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::{real, Real, Tolerances};

/// A complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexVector<T> {
    /// Wrap a list of amplitudes. Rejects empty input and non-finite entries.
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("vector dimension must be at least 1".into()));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexVector { entries })
    }

    /// Build from separate real and imaginary parts.
    pub fn from_parts(re: &[T], im: &[T]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                left: re.len(),
                right: im.len(),
            });
        }
        Self::new(
            re.iter()
                .zip(im)
                .map(|(&a, &b)| Complex::new(a, b))
                .collect(),
        )
    }

    /// The zero vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        ComplexVector {
            entries: vec![Complex::new(T::zero(), T::zero()); dim],
        }
    }

    /// The `k`-th standard basis vector.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("vector dimension must be at least 1".into()));
        }
        if k >= dim {
            return Err(Error::Domain(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut v = Self::zeros(dim);
        v.entries[k] = Complex::new(T::one(), T::zero());
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Squared Euclidean norm.
    pub fn norm_sqr(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// This vector scaled by a complex factor.
    pub fn scaled(&self, factor: Complex<T>) -> Self {
        ComplexVector {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// In-place `self += factor * other`, the workhorse of every expansion.
    pub(crate) fn axpy(&mut self, factor: Complex<T>, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * b;
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// Hermitian inner product ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner_product<T: Real>(a: &ComplexVector<T>, b: &ComplexVector<T>) -> Result<Complex<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.entries.iter().zip(&b.entries) {
        acc += x.conj() * y;
    }
    Ok(acc)
}

/// A dense square complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// The zero matrix.
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    /// The identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Build entry-by-entry from a closure over (row, column).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from nested rows; every row must have the same length as there are rows.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex<T>) {
        self.entries[i * self.dim + j] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.dim(),
            });
        }
        let mut out = ComplexVector::zeros(self.dim);
        for i in 0..self.dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..self.dim {
                acc += self.get(i, j) * v.entries[j];
            }
            out.entries[i] = acc;
        }
        Ok(out)
    }

    /// Matrix–matrix product.
    pub fn mul_mat(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// This matrix scaled by a complex factor.
    pub fn scaled(&self, factor: Complex<T>) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Frobenius norm of A − A†.
    pub fn hermiticity_defect(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.get(i, j) - self.get(j, i).conj();
                acc = acc + d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Whether the relative Hermiticity defect is within tolerance.
    pub fn is_hermitian(&self) -> bool {
        let scale = T::one().max(self.frobenius_norm());
        self.hermiticity_defect() <= Tolerances::<T>::default().hermiticity * scale
    }

    /// (A + A†)/2 — the Hermitian part, used to shed rounding dust.
    pub(crate) fn hermitized(&self) -> Self {
        let half = Complex::new(real::<T>(0.5), T::zero());
        Self::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * half
        })
    }
}

/// Rank-one outer product |a⟩⟨b|.
pub fn outer_product<T: Real>(a: &ComplexVector<T>, b: &ComplexVector<T>) -> ComplexMatrix<T> {
    debug_assert_eq!(a.dim(), b.dim());
    ComplexMatrix::from_fn(a.dim(), |i, j| a.entries()[i] * b.entries()[j].conj())
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; `eigenvectors()[k]` is the unit
/// eigenvector for `eigenvalues()[k]`, and the set is orthonormal.
#[derive(Debug, Clone)]
pub struct EigenSystem<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Vec<ComplexVector<T>>,
}

impl<T: Real> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[ComplexVector<T>] {
        &self.eigenvectors
    }

    pub fn eigenvalue(&self, k: usize) -> T {
        self.eigenvalues[k]
    }

    pub fn eigenvector(&self, k: usize) -> &ComplexVector<T> {
        &self.eigenvectors[k]
    }

    /// Largest minus smallest eigenvalue.
    pub fn spread(&self) -> T {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(&lo), Some(&hi)) => hi - lo,
            _ => T::zero(),
        }
    }

    /// Σ λ_k |v_k⟩⟨v_k| — rebuilds the matrix this system came from.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let term = outer_product(v, v).scaled(Complex::new(*lambda, T::zero()));
            m = m.add(&term).expect("dimensions match by construction");
        }
        m
    }

    /// Worst deviation of ⟨v_i|v_j⟩ from δ_ij.
    pub fn orthonormality_defect(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                let ip = inner_product(&self.eigenvectors[i], &self.eigenvectors[j])
                    .expect("dimensions match by construction");
                let target = if i == j { T::one() } else { T::zero() };
                let dev = (ip - Complex::new(target, T::zero())).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }
}

const MAX_JACOBI_SWEEPS: usize = 64;

/// Diagonalize a Hermitian matrix by cyclic Jacobi sweeps with complex
/// plane rotations.
///
/// Each rotation annihilates one off-diagonal pair; sweeps repeat until the
/// remaining off-diagonal mass is at rounding level. Quadratic convergence
/// makes this reliable and plenty fast for the dimensions this crate
/// targets (≤ 64).
pub fn hermitian_eigensystem<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenSystem<T>> {
    let tol = Tolerances::<T>::default();
    let scale = T::one().max(a.frobenius_norm());
    let defect = a.hermiticity_defect();
    if defect > tol.hermiticity * scale {
        return Err(Error::NotHermitian {
            defect: (defect / scale).to_f64().unwrap_or(f64::NAN),
        });
    }

    let n = a.dim();
    let mut m = a.hermitized();
    let mut basis = ComplexMatrix::<T>::identity(n);

    let frob = m.frobenius_norm();
    if frob > T::zero() {
        let stop = frob * T::epsilon() * real(n as f64);
        let mut converged = false;
        let mut sweeps = 0;
        while sweeps < MAX_JACOBI_SWEEPS {
            if off_diagonal_norm(&m) <= stop {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut m, &mut basis, p, q, stop);
                }
            }
            sweeps += 1;
        }
        if !converged && off_diagonal_norm(&m) > stop {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&m).to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    // Read off the diagonal, sort ascending, and pull out the matching columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m.get(i, i)
            .re
            .partial_cmp(&m.get(j, j).re)
            .expect("diagonal stays finite")
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &k in &order {
        eigenvalues.push(m.get(k, k).re);
        let mut col = ComplexVector::zeros(n);
        for i in 0..n {
            col.entries[i] = basis.get(i, k);
        }
        // Columns of an accumulated rotation product are unit to rounding;
        // tighten anyway so downstream norm checks never see drift.
        let norm = col.norm();
        let column = col.scaled(Complex::new(T::one() / norm, T::zero()));
        eigenvectors.push(column);
    }

    let system = EigenSystem {
        eigenvalues,
        eigenvectors,
    };
    if system.orthonormality_defect() > tol.orthonormality {
        return Err(Error::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
            off_norm: system.orthonormality_defect().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(system)
}

fn off_diagonal_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    let n = m.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) off-diagonal pair of `m`,
/// accumulated into `basis`.
fn jacobi_rotate<T: Real>(
    m: &mut ComplexMatrix<T>,
    basis: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    stop: T,
) {
    let n = m.dim();
    let b = m.get(p, q);
    let b_abs = b.norm();
    // Entries already at rounding level are not worth a rotation.
    if b_abs <= stop / real((n * n) as f64) {
        return;
    }

    // Strip the phase of the pivot, then pick the classic rotation angle
    // that annihilates the remaining real off-diagonal entry. The smaller
    // root keeps |angle| ≤ π/4, which is what guarantees convergence.
    let phase = b.unscale(b_abs);
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let two = real::<T>(2.0);
    let tau = (app - aqq) / (two * b_abs);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let cc = Complex::new(c, T::zero());
    let sp = phase.scale(s); // s·e^{iβ}
    let spc = phase.conj().scale(s); // s·e^{-iβ}

    // m ← J† m J with J[p][p] = J[q][q] = c, J[p][q] = −s·e^{iβ}, J[q][p] = s·e^{−iβ}.
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * cc + mkq * spc);
        m.set(k, q, mkq * cc - mkp * sp);
    }
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, mpk * cc + mqk * sp);
        m.set(q, k, mqk * cc - mpk * spc);
    }
    // The rotation annihilates these by construction; make it exact and
    // keep the diagonal real.
    let zero = Complex::new(T::zero(), T::zero());
    m.set(p, q, zero);
    m.set(q, p, zero);
    let dpp = m.get(p, p);
    let dqq = m.get(q, q);
    m.set(p, p, Complex::new(dpp.re, T::zero()));
    m.set(q, q, Complex::new(dqq.re, T::zero()));

    for k in 0..n {
        let vkp = basis.get(k, p);
        let vkq = basis.get(k, q);
        basis.set(k, p, vkp * cc + vkq * spc);
        basis.set(k, q, vkq * cc - vkp * sp);
    }
}

/// exp(i·s·A)·v for Hermitian A, evaluated through the eigensystem:
/// Σ_k e^{i·s·λ_k} |v_k⟩⟨v_k|v⟩.
pub fn matrix_exponential_action<T: Real>(
    a: &ComplexMatrix<T>,
    s: T,
    v: &ComplexVector<T>,
) -> Result<ComplexVector<T>> {
    if v.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: v.dim(),
        });
    }
    let eig = hermitian_eigensystem(a)?;
    let mut out = ComplexVector::zeros(v.dim());
    for (lambda, vk) in eig.eigenvalues().iter().zip(eig.eigenvectors()) {
        let coeff = inner_product(vk, v)?;
        let rotation = Complex::from_polar(T::one(), s * *lambda);
        out.axpy(rotation * coeff, vk);
    }
    Ok(out)
}

/// The full unitary exp(i·s·A) for Hermitian A.
pub fn matrix_exponential<T: Real>(a: &ComplexMatrix<T>, s: T) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigensystem(a)?;
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for (lambda, vk) in eig.eigenvalues().iter().zip(eig.eigenvectors()) {
        let rotation = Complex::from_polar(T::one(), s * *lambda);
        out = out.add(&outer_product(vk, vk).scaled(rotation))?;
    }
    Ok(out)
}

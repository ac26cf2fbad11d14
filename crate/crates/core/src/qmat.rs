//! Dense complex-matrix kernel.
//!
//! Everything here is sized for the handful of qubits the collision model
//! needs (dimension 2, 4 or 8), so the routines favour clarity and accuracy
//! over asymptotic speed. Hermitian spectra come from a cyclic complex Jacobi
//! sweep, which keeps small eigenvalues accurate to near machine precision
//! and that matters for entropies of nearly pure states.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum entrywise deviation `|M - M†|` accepted for Hermitian operators.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum `|Tr ρ - 1|` accepted for density operators.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-POSITIVITY_FLOOR, 0)` are rounding noise; below it the
/// operator is not positive.
pub const POSITIVITY_FLOOR: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub(crate) const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c64(1.0, 0.0);
        }
        m
    }

    /// Build from row-major entries. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { c64(diag[i], 0.0) } else { c64(0.0, 0.0) })
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entry modulus; the `‖·‖∞` used for all tolerance checks.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M_ij - conj(M_ji)|`, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `½ (M + M†)`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale(c64(0.5, 0.0))
    }

    /// `U · self · U†`.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        &(a * b) - &(b * a)
    }

    /// Kronecker product with `(i_a, i_b) ↦ i_a·dim_b + i_b`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    fn check_same_shape(&self, other: &ComplexMatrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// A square matrix that is Hermitian within [`HERMITIAN_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    /// `Tr(H ρ)`, real for Hermitian `H` and `ρ`.
    pub fn expectation(&self, rho: &DensityOperator) -> f64 {
        (&self.0 * rho.matrix()).trace().re
    }
}

/// A density operator: Hermitian, unit trace, positive up to
/// [`POSITIVITY_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(ComplexMatrix);

impl DensityOperator {
    /// Validates every invariant, including positivity via the spectrum.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_evolved(m)?;
        let min_eigenvalue = hermitian_eigenvalues(&rho.0)[0];
        if min_eigenvalue < -POSITIVITY_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(rho)
    }

    /// Validation for states produced by unitary conjugation and partial
    /// traces of valid states, where positivity holds by construction and
    /// only shape, finiteness, Hermiticity and trace are checked.
    pub(crate) fn from_evolved(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotNormalized { trace: tr.re });
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(amplitudes, amplitudes))
    }

    /// Computational basis projector `|k⟩⟨k|` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = c64(1.0, 0.0);
        Self(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(c64(1.0 / dim as f64, 0.0)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    /// Tensor product of two density operators.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        Self(self.0.kron(&other.0))
    }

    /// `U ρ U†`; the result is re-symmetrised to strip rounding asymmetry.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityOperator> {
        Self::from_evolved(self.0.conjugated_by(u).hermitian_part())
    }

    /// Reduced state on the qubit `keep` (0 or 1) of a two-qubit state.
    pub fn qubit_marginal(&self, keep: usize) -> Result<DensityOperator> {
        partial_trace(self, &[2, 2], &[keep])
    }
}

fn check_square_finite(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Partial trace of an arbitrary matrix over every subsystem not in `keep`.
///
/// `dims` lists subsystem dimensions, first factor most significant. The
/// kept subsystems appear in ascending order in the result.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_square_finite(m)?;
    let total: usize = dims.iter().product();
    if total != m.rows {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.rows,
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&index) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::SubsystemOutOfRange {
            index,
            count: dims.len(),
        });
    }
    let is_kept: Vec<bool> = (0..dims.len()).map(|k| kept.contains(&k)).collect();
    let out_dim: usize = kept.iter().map(|&k| dims[k]).product::<usize>().max(1);

    // (kept index, traced index) for every full index.
    let split: Vec<(usize, usize)> = (0..total)
        .map(|full| {
            let (mut rem, mut kept_idx, mut traced_idx) = (full, 0usize, 0usize);
            let (mut kept_stride, mut traced_stride) = (1usize, 1usize);
            for (k, &d) in dims.iter().enumerate().rev() {
                let digit = rem % d;
                rem /= d;
                if is_kept[k] {
                    kept_idx += digit * kept_stride;
                    kept_stride *= d;
                } else {
                    traced_idx += digit * traced_stride;
                    traced_stride *= d;
                }
            }
            (kept_idx, traced_idx)
        })
        .collect();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for r in 0..total {
        let (kr, tr) = split[r];
        for c in 0..total {
            let (kc, tc) = split[c];
            if tr == tc {
                out[(kr, kc)] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Reduced density operator over the subsystems listed in `keep`.
pub fn partial_trace(rho: &DensityOperator, dims: &[usize], keep: &[usize]) -> Result<DensityOperator> {
    DensityOperator::from_evolved(partial_trace_matrix(&rho.0, dims, keep)?)
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_real_diagonal(&self.values);
        &(&self.vectors * &lambda) * &self.vectors.adjoint()
    }
}

pub fn eig_hermitian(m: &HermitianOperator) -> Eigen {
    let (values, vectors) = jacobi(&m.0, true);
    Eigen {
        values,
        vectors: vectors.expect("vectors requested"),
    }
}

/// Ascending eigenvalues of a matrix assumed Hermitian.
pub(crate) fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows == 2 {
        // closed form for the hot 2x2 path
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)];
        let mean = 0.5 * (a + d);
        let half_gap = libm::hypot(0.5 * (a - d), b.norm());
        return vec![mean - half_gap, mean + half_gap];
    }
    jacobi(m, false).0
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let frob2: f64 = a.data.iter().map(|z| z.norm_sqr()).sum();
    let tiny = frob2 * 1e-34;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= tiny || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * libm::atan2(2.0 * mag, aqq - app);
                let (s, c) = (libm::sin(theta), libm::cos(theta));
                // G = diag(1, e^{-iα}) · [[c, s], [-s, c]] on the (p, q) plane
                let g_pp = c64(c, 0.0);
                let g_pq = c64(s, 0.0);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = c64(0.0, 0.0);
                a[(q, p)] = c64(0.0, 0.0);
                a[(p, p)] = c64(a[(p, p)].re, 0.0);
                a[(q, q)] = c64(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * g_pp + vkq * g_qp;
                        v[(k, q)] = vkp * g_pq + vkq * g_qq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    (values, vectors)
}

/// `½ Tr|ρ₁ − ρ₂|` from the eigenvalues of the (Hermitian) difference.
pub fn trace_distance(r1: &DensityOperator, r2: &DensityOperator) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            expected: r1.dim(),
            found: r2.dim(),
        });
    }
    Ok(trace_norm_half(&(&r1.0 - &r2.0)).clamp(0.0, 1.0))
}

/// `½ Σ|λ|` of a Hermitian matrix.
pub(crate) fn trace_norm_half(diff: &ComplexMatrix) -> f64 {
    0.5 * hermitian_eigenvalues(diff).iter().map(|l| l.abs()).sum::<f64>()
}

/// General square matrix exponential by scaling and squaring of a Taylor
/// series.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square_finite(m)?;
    let n = m.rows;
    let norm = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let x = m.scale(c64(libm::ldexp(1.0, -(squarings as i32)), 0.0));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &x).scale(c64(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.max_abs() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Clamp noise-level eigenvalues into `[0, 1]`.
#[inline]
fn clamp_population(lambda: f64) -> f64 {
    lambda.clamp(0.0, 1.0)
}

/// `-Σ λ ln λ` with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .map(clamp_population)
        .filter(|&l| l > 0.0)
        .fold(0.0, |acc, l| acc - l * libm::log(l))
}

/// Eigenvalue of `r2` treated as zero when testing support inclusion.
const SUPPORT_ZERO: f64 = 1e-14;
/// Weight of `r1` on a null direction of `r2` that makes the divergence infinite.
const SUPPORT_WEIGHT: f64 = 1e-12;

/// `Tr ρ₁ ln ρ₁ − Tr ρ₁ ln ρ₂`, or `+∞` when the support of `r1` is not
/// contained in that of `r2`.
pub fn relative_entropy(r1: &DensityOperator, r2: &DensityOperator) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            expected: r1.dim(),
            found: r2.dim(),
        });
    }
    let self_term = -von_neumann_entropy(r1);

    let eig = eig_hermitian(&HermitianOperator(r2.0.clone()));
    let n = r2.dim();
    let mut cross = 0.0;
    for k in 0..n {
        // weight ⟨w_k|ρ₁|w_k⟩
        let mut weight = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                weight += eig.vectors[(i, k)].conj() * r1.0[(i, j)] * eig.vectors[(j, k)];
            }
        }
        let weight = weight.re;
        let mu = eig.values[k];
        if mu < SUPPORT_ZERO {
            if weight > SUPPORT_WEIGHT {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * libm::log(mu);
    }
    Ok((self_term - cross).max(0.0))
}

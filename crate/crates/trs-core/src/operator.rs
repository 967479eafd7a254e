//! Symmetric linear operators: mat-vec products, spectral-norm estimation,
//! dense symmetric eigendecomposition and pseudoinverse application.
//!
//! Operators are immutable after construction. Spectral data is computed
//! lazily and cached, so an operator can be shared across concurrent solver
//! runs without recomputation.

use nalgebra::DMatrix;
use once_cell::sync::OnceCell;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TrsError};
use crate::linalg::{dot, norm};

/// Largest dimension for which `eigendecompose` densifies by default.
/// Callers that need a different cap use [`SymmetricOperator::eigendecompose_with_limit`].
pub const DEFAULT_DENSE_LIMIT: usize = 2000;

/// Default relative tolerance below which a shifted eigenvalue is treated as
/// a null mode by [`Spectrum::pinv_apply`].
pub const DEFAULT_DROP_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
enum Storage {
    /// Packed lower triangle, row-major: row `i` contributes `i + 1` entries.
    DenseLower(Vec<f64>),
    /// Coordinate triplets with `row >= col`, sorted by (row, col), no duplicates.
    Sparse(Vec<(usize, usize, f64)>),
}

/// A symmetric matrix exposed through mat-vec products plus cached spectral data.
#[derive(Clone, Debug)]
pub struct SymmetricOperator {
    n: usize,
    storage: Storage,
    spectrum: OnceCell<Spectrum>,
    norm_estimate: OnceCell<f64>,
}

impl SymmetricOperator {
    /// Builds from a full row-major `n x n` matrix, validating symmetry.
    pub fn from_dense(n: usize, entries: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(TrsError::InvalidInput("dimension must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(TrsError::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        let max_abs = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sym_tol = 1e-12 * (1.0 + max_abs);
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                let a = entries[i * n + j];
                let b = entries[j * n + i];
                if (a - b).abs() > sym_tol {
                    return Err(TrsError::InvalidInput(format!(
                        "matrix is not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                lower.push(a);
            }
        }
        Ok(Self::new(n, Storage::DenseLower(lower)))
    }

    /// Builds from a packed lower triangle (row-major, row `i` has `i+1` entries).
    pub fn from_lower(n: usize, lower: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(TrsError::InvalidInput("dimension must be positive".into()));
        }
        if lower.len() != n * (n + 1) / 2 {
            return Err(TrsError::DimensionMismatch {
                expected: n * (n + 1) / 2,
                got: lower.len(),
            });
        }
        Ok(Self::new(n, Storage::DenseLower(lower)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(TrsError::InvalidInput("dimension must be positive".into()));
        }
        let n = diag.len();
        let triplets = diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Ok(Self::new(n, Storage::Sparse(triplets)))
    }

    /// Builds from coordinate triplets with `row >= col`. Duplicate positions
    /// and out-of-range indices are rejected.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(TrsError::InvalidInput("dimension must be positive".into()));
        }
        for &(r, c, _) in &triplets {
            if r >= n || c >= n {
                return Err(TrsError::InvalidInput(format!(
                    "triplet index ({r},{c}) out of range for n={n}"
                )));
            }
            if r < c {
                return Err(TrsError::InvalidInput(format!(
                    "triplet ({r},{c}) must satisfy row >= col"
                )));
            }
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        for w in triplets.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(TrsError::InvalidInput(format!(
                    "duplicate triplet position ({},{})",
                    w[0].0, w[0].1
                )));
            }
        }
        Ok(Self::new(n, Storage::Sparse(triplets)))
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self::new(n, Storage::Sparse((0..n).map(|i| (i, i, s)).collect()))
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self::new(n, Storage::Sparse(Vec::new()))
    }

    fn new(n: usize, storage: Storage) -> Self {
        Self {
            n,
            storage,
            spectrum: OnceCell::new(),
            norm_estimate: OnceCell::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::DenseLower(_))
    }

    /// Number of stored entries (lower triangle).
    pub fn stored_nnz(&self) -> usize {
        match &self.storage {
            Storage::DenseLower(l) => l.len(),
            Storage::Sparse(t) => t.len(),
        }
    }

    /// Lower-triangle entries as (row, col, value), row >= col, deterministic order.
    pub fn lower_entries(&self) -> Vec<(usize, usize, f64)> {
        match &self.storage {
            Storage::DenseLower(l) => {
                let mut out = Vec::with_capacity(l.len());
                let mut idx = 0;
                for i in 0..self.n {
                    for j in 0..=i {
                        out.push((i, j, l[idx]));
                        idx += 1;
                    }
                }
                out
            }
            Storage::Sparse(t) => t.clone(),
        }
    }

    /// Entry (i, j) of the represented matrix. Dense: O(1); sparse: O(log nnz).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        match &self.storage {
            Storage::DenseLower(l) => l[r * (r + 1) / 2 + c],
            Storage::Sparse(t) => t
                .binary_search_by_key(&(r, c), |&(tr, tc, _)| (tr, tc))
                .map(|k| t[k].2)
                .unwrap_or(0.0),
        }
    }

    /// Sum of diagonal entries divided by n.
    pub fn diagonal_mean(&self) -> f64 {
        let tr = match &self.storage {
            Storage::DenseLower(l) => (0..self.n).map(|i| l[i * (i + 1) / 2 + i]).sum::<f64>(),
            Storage::Sparse(t) => t
                .iter()
                .filter(|&&(r, c, _)| r == c)
                .map(|&(_, _, v)| v)
                .sum::<f64>(),
        };
        tr / self.n as f64
    }

    /// The operator `H + shift * I`. Cached spectral data is not carried over.
    pub fn shifted(&self, shift: f64) -> SymmetricOperator {
        match &self.storage {
            Storage::DenseLower(l) => {
                let mut lower = l.clone();
                for i in 0..self.n {
                    lower[i * (i + 1) / 2 + i] += shift;
                }
                Self::new(self.n, Storage::DenseLower(lower))
            }
            Storage::Sparse(t) => {
                let mut triplets = t.clone();
                let mut have_diag = vec![false; self.n];
                for (r, c, v) in triplets.iter_mut() {
                    if r == c {
                        have_diag[*r] = true;
                        *v += shift;
                    }
                }
                for (i, present) in have_diag.iter().enumerate() {
                    if !present {
                        triplets.push((i, i, shift));
                    }
                }
                triplets.sort_by_key(|&(r, c, _)| (r, c));
                Self::new(self.n, Storage::Sparse(triplets))
            }
        }
    }

    /// H·v. Errors on length mismatch.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(TrsError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let mut out = vec![0.0; self.n];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    /// H·v into a caller-provided buffer. Lengths are debug-asserted.
    pub(crate) fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        out.fill(0.0);
        match &self.storage {
            Storage::DenseLower(l) => {
                let mut idx = 0;
                for i in 0..self.n {
                    let mut acc = 0.0;
                    for j in 0..i {
                        let h = l[idx];
                        acc += h * v[j];
                        out[j] += h * v[i];
                        idx += 1;
                    }
                    acc += l[idx] * v[i];
                    idx += 1;
                    out[i] += acc;
                }
            }
            Storage::Sparse(t) => {
                for &(r, c, h) in t {
                    out[r] += h * v[c];
                    if r != c {
                        out[c] += h * v[r];
                    }
                }
            }
        }
    }

    /// Upper bound on the spectral norm by power iteration with a
    /// Rayleigh-quotient convergence test, inflated by `1 + 10*tol`.
    /// Deterministic given the seed. The iterate tracks `sqrt(v' H^2 v)`,
    /// which increases monotonically to `||H||_2`, so the inflated value
    /// dominates the true norm once the change per sweep is small.
    pub fn estimate_spectral_norm(&self, tol: f64, max_iters: usize, seed: u64) -> Result<f64> {
        if tol <= 0.0 {
            return Err(TrsError::InvalidConfig("tol must be positive".into()));
        }
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let nv = norm(&v);
        if nv == 0.0 {
            v[0] = 1.0;
        } else {
            for x in v.iter_mut() {
                *x /= nv;
            }
        }
        let mut hv = vec![0.0; n];
        self.apply_into(&v, &mut hv);
        let mut r = norm(&hv);
        if r == 0.0 {
            // Either H = 0 or the start vector sits in the kernel; sweep the basis.
            let mut best = 0.0f64;
            let mut basis = vec![0.0; n];
            for i in 0..n {
                basis.fill(0.0);
                basis[i] = 1.0;
                self.apply_into(&basis, &mut hv);
                let ri = norm(&hv);
                if ri > best {
                    best = ri;
                    v.copy_from_slice(&hv);
                }
            }
            if best == 0.0 {
                return Ok(0.0);
            }
            let nv = norm(&v);
            for x in v.iter_mut() {
                *x /= nv;
            }
            self.apply_into(&v, &mut hv);
            r = norm(&hv);
        }
        // Stop threshold tighter than tol so the residual gap stays inside
        // the (1 + 10*tol) inflation even at moderate eigenvalue ratios.
        let stop = 0.05 * tol;
        let mut calm = 0;
        for _ in 0..max_iters {
            for (vi, hvi) in v.iter_mut().zip(&hv) {
                *vi = hvi / r;
            }
            self.apply_into(&v, &mut hv);
            let r_new = norm(&hv);
            let delta = (r_new - r).abs();
            r = r_new;
            if r == 0.0 {
                break;
            }
            if delta <= stop * r.max(1.0) {
                calm += 1;
                if calm >= 2 {
                    break;
                }
            } else {
                calm = 0;
            }
        }
        Ok(r * (1.0 + 10.0 * tol))
    }

    /// Cached upper bound on the spectral norm: the exact `max(|l_1|, |l_n|)`
    /// when a spectrum is cached, otherwise a cached power-iteration estimate.
    pub fn lipschitz_bound(&self) -> f64 {
        if let Some(spec) = self.spectrum.get() {
            return spec.spectral_norm();
        }
        *self.norm_estimate.get_or_init(|| {
            self.estimate_spectral_norm(1e-6, 20_000, 0)
                .expect("default spectral norm estimation cannot fail")
        })
    }

    /// Dense symmetric eigendecomposition, cached on first use.
    pub fn eigendecompose(&self) -> Result<&Spectrum> {
        self.eigendecompose_with_limit(DEFAULT_DENSE_LIMIT)
    }

    /// As `eigendecompose`, with an explicit dense-size cap.
    pub fn eigendecompose_with_limit(&self, limit: usize) -> Result<&Spectrum> {
        self.spectrum.get_or_try_init(|| {
            if self.n > limit {
                return Err(TrsError::Capability(format!(
                    "dense eigendecomposition limited to n <= {limit} (got n = {}); \
                     use iterative paths for larger operators",
                    self.n
                )));
            }
            let m = self.densify();
            let se = m.symmetric_eigen();
            let n = self.n;
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
            let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
            let mut eigenvectors = vec![0.0; n * n];
            for (col, &src) in order.iter().enumerate() {
                for row in 0..n {
                    eigenvectors[col * n + row] = se.eigenvectors[(row, src)];
                }
            }
            Ok(Spectrum {
                n,
                eigenvalues,
                eigenvectors,
            })
        })
    }

    /// Seeds the spectrum cache when the decomposition is known analytically
    /// (e.g. a diagonal shift of an already-decomposed operator).
    pub(crate) fn set_spectrum(&self, spectrum: Spectrum) {
        let _ = self.spectrum.set(spectrum);
    }

    fn densify(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        match &self.storage {
            Storage::DenseLower(l) => {
                let mut idx = 0;
                for i in 0..n {
                    for j in 0..=i {
                        m[(i, j)] = l[idx];
                        m[(j, i)] = l[idx];
                        idx += 1;
                    }
                }
            }
            Storage::Sparse(t) => {
                for &(r, c, v) in t {
                    m[(r, c)] = v;
                    m[(c, r)] = v;
                }
            }
        }
        m
    }
}

/// Eigendecomposition of a symmetric operator: ascending eigenvalues with an
/// orthonormal set of column eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n: usize,
    eigenvalues: Vec<f64>,
    /// Column-major n x n; column i pairs with eigenvalues[i].
    eigenvectors: Vec<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.eigenvectors[i * self.n..(i + 1) * self.n]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.n - 1]
    }

    pub fn spectral_norm(&self) -> f64 {
        self.lambda_min().abs().max(self.lambda_max().abs())
    }

    /// Coefficients U'v of v in the eigenbasis.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| dot(self.eigenvector(i), v)).collect()
    }

    /// U·w back from eigenbasis coefficients.
    pub fn combine(&self, w: &[f64]) -> Vec<f64> {
        assert_eq!(w.len(), self.n);
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let u = self.eigenvector(i);
            let wi = w[i];
            for (o, ui) in out.iter_mut().zip(u) {
                *o += wi * ui;
            }
        }
        out
    }

    /// Spectrum of `H + shift*I`: eigenvalues move by the shift, eigenvectors
    /// are unchanged.
    pub(crate) fn shifted_copy(&self, shift: f64) -> Spectrum {
        Spectrum {
            n: self.n,
            eigenvalues: self.eigenvalues.iter().map(|l| l + shift).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
    }

    /// Applies the pseudoinverse of `H + shift*I` spectrally. Modes with
    /// `|l_i + shift| <= drop_tol * (1 + ||H||_2)` are treated as null.
    /// The flag reports whether `v` lies in the numerical range, i.e. its
    /// component on dropped modes has norm at most `drop_tol * ||v||`.
    pub fn pinv_apply(&self, shift: f64, v: &[f64], drop_tol: f64) -> Result<(Vec<f64>, bool)> {
        if drop_tol <= 0.0 {
            return Err(TrsError::InvalidConfig("drop_tol must be positive".into()));
        }
        if v.len() != self.n {
            return Err(TrsError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let cutoff = drop_tol * (1.0 + self.spectral_norm());
        let w = self.project(v);
        let mut coeff = vec![0.0; self.n];
        let mut dropped_sq = 0.0;
        for i in 0..self.n {
            let d = self.eigenvalues[i] + shift;
            if d.abs() <= cutoff {
                dropped_sq += w[i] * w[i];
            } else {
                coeff[i] = w[i] / d;
            }
        }
        let in_range = dropped_sq.sqrt() <= drop_tol * norm(v);
        Ok((self.combine(&coeff), in_range))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dist;

    #[test]
    fn apply_diagonal() {
        let h = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
        assert_eq!(h.apply(&[1.0, 1.0]).unwrap(), vec![-13.0, 13.0]);
    }

    #[test]
    fn apply_identity() {
        let h = SymmetricOperator::identity(3);
        assert_eq!(h.apply(&[2.0, 0.0, -1.0]).unwrap(), vec![2.0, 0.0, -1.0]);
    }

    #[test]
    fn apply_permutation() {
        let h = SymmetricOperator::from_dense(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(h.apply(&[3.0, 4.0]).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let h = SymmetricOperator::identity(3);
        assert!(matches!(
            h.apply(&[1.0, 2.0]),
            Err(TrsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_asymmetric_dense() {
        let err = SymmetricOperator::from_dense(2, &[1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(err, Err(TrsError::InvalidInput(_))));
    }

    #[test]
    fn rejects_bad_triplets() {
        assert!(SymmetricOperator::from_triplets(2, vec![(0, 1, 1.0)]).is_err());
        assert!(SymmetricOperator::from_triplets(2, vec![(2, 0, 1.0)]).is_err());
        assert!(SymmetricOperator::from_triplets(2, vec![(1, 0, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn spectral_norm_known_spectrum() {
        let h = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
        let l = h.estimate_spectral_norm(1e-5, 1000, 0).unwrap();
        assert!(l >= 13.0 && l <= 13.0013, "got {l}");
    }

    #[test]
    fn spectral_norm_zero_operator() {
        let h = SymmetricOperator::zeros(2);
        assert_eq!(h.estimate_spectral_norm(1e-5, 1000, 0).unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_example3_hessian() {
        let h = SymmetricOperator::from_diagonal(&[27.0, 53.0]).unwrap();
        let l = h.estimate_spectral_norm(1e-5, 1000, 3).unwrap();
        assert!(l >= 53.0 && l <= 53.0053, "got {l}");
    }

    #[test]
    fn eigendecompose_sorts_ascending() {
        let h = SymmetricOperator::from_diagonal(&[13.0, -13.0]).unwrap();
        let s = h.eigendecompose().unwrap();
        assert!((s.eigenvalues()[0] + 13.0).abs() < 1e-12);
        assert!((s.eigenvalues()[1] - 13.0).abs() < 1e-12);
    }

    #[test]
    fn eigendecompose_2x2_offdiag() {
        let h = SymmetricOperator::from_dense(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = h.eigendecompose().unwrap();
        assert!((s.eigenvalues()[0] + 1.0).abs() < 1e-12);
        assert!((s.eigenvalues()[1] - 1.0).abs() < 1e-12);
        let inv = 1.0 / 2.0f64.sqrt();
        let u0 = s.eigenvector(0);
        let want = [inv, -inv];
        let d = dist(u0, &want).min(dist(u0, &[-inv, inv]));
        assert!(d < 1e-10, "eigenvector off: {u0:?}");
    }

    #[test]
    fn eigendecompose_indefinite_diag() {
        let h = SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap();
        let s = h.eigendecompose().unwrap();
        assert_eq!(s.eigenvalues(), &[-2.0, 1.0]);
    }

    #[test]
    fn eigendecompose_respects_limit() {
        let h = SymmetricOperator::identity(8);
        assert!(matches!(
            h.eigendecompose_with_limit(4),
            Err(TrsError::Capability(_))
        ));
    }

    #[test]
    fn pinv_drops_null_mode() {
        let h = SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap();
        let s = h.eigendecompose().unwrap();
        let (x, in_range) = s.pinv_apply(2.0, &[0.0, 0.5], 1e-8).unwrap();
        assert!(in_range);
        assert!((x[0]).abs() < 1e-15 && (x[1] - 1.0 / 6.0).abs() < 1e-15);

        let (x, in_range) = s.pinv_apply(2.0, &[1.0, 0.0], 1e-8).unwrap();
        assert!(!in_range);
        assert!(x[0].abs() < 1e-15 && x[1].abs() < 1e-15);
    }

    #[test]
    fn pinv_identity_inverse() {
        let h = SymmetricOperator::identity(2);
        let s = h.eigendecompose().unwrap();
        let (x, in_range) = s.pinv_apply(0.0, &[3.0, 4.0], 1e-8).unwrap();
        assert!(in_range);
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_mean_values() {
        let h = SymmetricOperator::from_diagonal(&[27.0, 53.0]).unwrap();
        assert_eq!(h.diagonal_mean(), 40.0);
        assert_eq!(SymmetricOperator::zeros(3).diagonal_mean(), 0.0);
        assert_eq!(SymmetricOperator::identity(4).diagonal_mean(), 1.0);
    }

    #[test]
    fn shifted_adds_to_diagonal() {
        let h = SymmetricOperator::from_triplets(3, vec![(1, 0, 2.0), (2, 2, 1.0)]).unwrap();
        let s = h.shifted(-0.5);
        assert_eq!(s.entry(0, 0), -0.5);
        assert_eq!(s.entry(1, 0), 2.0);
        assert_eq!(s.entry(2, 2), 0.5);
    }
}

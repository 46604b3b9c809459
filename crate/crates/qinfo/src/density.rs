//! Density matrices with tensor-factor bookkeeping, spectral data, partial
//! trace/transpose, Schmidt decomposition, purification, entropies, and the
//! majorization order.

use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use num_complex::Complex64;

pub const LN2: f64 = std::f64::consts::LN_2;

/// A positive unit-trace operator together with the dimensions of the tensor
/// factors its index space is built from.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMat,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and scale-aware positivity.
    pub fn new(mat: CMat, dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimMismatch(format!(
                "matrix is {}x{}, expected square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let prod: usize = dims.iter().product();
        if prod != mat.nrows() || dims.is_empty() {
            return Err(Error::DimMismatch(format!(
                "factor dims {:?} do not multiply to {}",
                dims,
                mat.nrows()
            )));
        }
        let herm_dev = mat::max_abs_diff(&mat, &mat.adjoint());
        if herm_dev > 1e-9 {
            return Err(Error::NotHermitian { deviation: herm_dev });
        }
        let tr = mat::trace(&mat).re;
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::BadTrace { trace: tr });
        }
        let (vals, _) = mat::eigh(&mat);
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = mat::psd_tol(scale);
        let min = *vals.last().unwrap();
        if min < -tol {
            return Err(Error::NotPsd { min_eig: min, tol });
        }
        Ok(Self { mat, dims })
    }

    /// Skips validation; for operators known valid by construction.
    pub fn new_unchecked(mat: CMat, dims: Vec<usize>) -> Self {
        Self { mat, dims }
    }

    pub fn from_pure(psi: &CVec, dims: Vec<usize>) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if psi.len() != prod {
            return Err(Error::DimMismatch(format!(
                "vector length {} vs dims {:?}",
                psi.len(),
                dims
            )));
        }
        let nrm = psi.norm();
        if (nrm - 1.0).abs() > 1e-9 {
            return Err(Error::BadParam(format!("vector norm {nrm} is not 1")));
        }
        Ok(Self::new_unchecked(mat::projector(psi), dims))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self::new_unchecked(mat::eye(n).scale(1.0 / n as f64), dims)
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Reinterprets the same matrix with a different factorization.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if prod != self.dim() {
            return Err(Error::DimMismatch(format!(
                "dims {:?} do not multiply to {}",
                dims,
                self.dim()
            )));
        }
        Ok(Self::new_unchecked(self.mat.clone(), dims))
    }

    pub fn spectrum(&self) -> Spectrum {
        let (eigenvalues, eigenvectors) = mat::eigh(&self.mat);
        Spectrum { eigenvalues, eigenvectors }
    }
}

/// Eigendata sorted descending, eigenvector columns matching the eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

/// Kronecker product of two states; dims lists concatenate.
pub fn tensor_product(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let mut dims = a.dims().to_vec();
    dims.extend_from_slice(b.dims());
    DensityMatrix::new_unchecked(mat::kron(a.mat(), b.mat()), dims)
}

fn factor_strides(dims: &[usize], factor: usize) -> (usize, usize, usize) {
    let pre: usize = dims[..factor].iter().product();
    let mid = dims[factor];
    let post: usize = dims[factor + 1..].iter().product();
    (pre, mid, post)
}

/// Traces out the chosen factor (0-based) of the tensor decomposition.
pub fn partial_trace(rho: &DensityMatrix, factor: usize) -> Result<DensityMatrix> {
    if factor >= rho.dims().len() {
        return Err(Error::DimMismatch(format!(
            "factor {} out of range for dims {:?}",
            factor,
            rho.dims()
        )));
    }
    let dims = rho.dims();
    let (pre, mid, post) = factor_strides(dims, factor);
    let out_dim = pre * post;
    let mut out = CMat::zeros(out_dim, out_dim);
    let m = rho.mat();
    for a in 0..pre {
        for ap in 0..pre {
            for b in 0..post {
                for bp in 0..post {
                    let mut s = Complex64::default();
                    for k in 0..mid {
                        let row = (a * mid + k) * post + b;
                        let col = (ap * mid + k) * post + bp;
                        s += m[(row, col)];
                    }
                    out[(a * post + b, ap * post + bp)] = s;
                }
            }
        }
    }
    let mut new_dims: Vec<usize> = dims.to_vec();
    new_dims.remove(factor);
    if new_dims.is_empty() {
        new_dims.push(1);
    }
    Ok(DensityMatrix::new_unchecked(out, new_dims))
}

/// Transposes the chosen factor in the canonical basis. The result is Hermitian
/// but in general not positive, so it is returned as a plain matrix.
pub fn partial_transpose(rho: &DensityMatrix, factor: usize) -> Result<CMat> {
    if factor >= rho.dims().len() {
        return Err(Error::DimMismatch(format!(
            "factor {} out of range for dims {:?}",
            factor,
            rho.dims()
        )));
    }
    let dims = rho.dims();
    let (pre, mid, post) = factor_strides(dims, factor);
    let n = rho.dim();
    let mut out = CMat::zeros(n, n);
    for a in 0..pre {
        for ap in 0..pre {
            for k in 0..mid {
                for kp in 0..mid {
                    for b in 0..post {
                        for bp in 0..post {
                            let row = (a * mid + k) * post + b;
                            let col = (ap * mid + kp) * post + bp;
                            let trow = (a * mid + kp) * post + b;
                            let tcol = (ap * mid + k) * post + bp;
                            out[(trow, tcol)] = rho.mat()[(row, col)];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Schmidt data of a bipartite unit vector: descending coefficients sqrt(lambda)
/// and the two orthonormal bases, psi = sum_j coeff_j phi_j x chi_j.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVec>,
    pub right_basis: Vec<CVec>,
}

pub fn schmidt_decompose(psi: &CVec, dims: (usize, usize)) -> Result<Schmidt> {
    let (da, db) = dims;
    if psi.len() != da * db {
        return Err(Error::DimMismatch(format!(
            "vector length {} vs {}x{}",
            psi.len(),
            da,
            db
        )));
    }
    let m = mat::vec_to_mat(psi, da, db);
    let svd = nalgebra::linalg::SVD::new(m, true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    let r = da.min(db);
    let mut idx: Vec<usize> = (0..r).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
    let mut coefficients = Vec::with_capacity(r);
    let mut left_basis = Vec::with_capacity(r);
    let mut right_basis = Vec::with_capacity(r);
    for &i in &idx {
        coefficients.push(svd.singular_values[i]);
        left_basis.push(u.column(i).clone_owned());
        right_basis.push(vt.row(i).transpose());
    }
    Ok(Schmidt { coefficients, left_basis, right_basis })
}

impl Schmidt {
    pub fn reassemble(&self) -> CVec {
        let da = self.left_basis[0].len();
        let db = self.right_basis[0].len();
        let mut out = CVec::zeros(da * db);
        for (k, &c) in self.coefficients.iter().enumerate() {
            out += mat::kron_vec(&self.left_basis[k], &self.right_basis[k]).scale(c);
        }
        out
    }

    /// Schmidt weights lambda_j = coeff_j^2 (eigenvalues of either marginal).
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }
}

/// Appends one factor of the same total dimension and returns a unit vector
/// whose partial trace over it reproduces `rho`.
pub fn purify_state(rho: &DensityMatrix) -> CVec {
    let n = rho.dim();
    let eig = rho.spectrum();
    let mut psi = CVec::zeros(n * n);
    for k in 0..n {
        let lam = eig.eigenvalues[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        let e = eig.eigenvectors.column(k).clone_owned();
        psi += mat::kron_vec(&e, &e).scale(lam.sqrt());
    }
    let nrm = psi.norm();
    psi /= mat::cr(nrm);
    psi
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.spectrum().eigenvalues.iter().map(|&l| xlog2x(l)).sum::<f64>()
}

pub fn von_neumann_entropy_mat(rho: &CMat) -> f64 {
    -mat::eigh(rho).0.iter().map(|&l| xlog2x(l)).sum::<f64>()
}

/// Quantum relative entropy S(rho || sigma) in bits; +infinity when the support
/// of rho is not contained in the support of sigma.
pub fn relative_entropy(rho: &CMat, sigma: &CMat) -> f64 {
    let (svals, svecs) = mat::eigh(sigma);
    let n = svals.len();
    let cutoff = 1e-12 * svals[0].abs().max(1.0);
    // Weight of rho on sigma's kernel decides the support condition.
    let mut kernel_weight = 0.0;
    let mut cross = 0.0;
    for j in 0..n {
        let col = svecs.column(j).clone_owned();
        let w = (col.adjoint() * rho * &col)[(0, 0)].re;
        if svals[j] <= cutoff {
            kernel_weight += w.max(0.0);
        } else {
            cross += w.max(0.0) * svals[j].log2();
        }
    }
    if kernel_weight > 1e-9 {
        return f64::INFINITY;
    }
    let s_rho = von_neumann_entropy_mat(rho);
    -s_rho - cross
}

/// Binary entropy H(x) in bits with the 0 log 0 = 0 convention.
pub fn binary_entropy(x: f64) -> f64 {
    -xlog2x(x) - xlog2x(1.0 - x)
}

/// g(x) = (x+1) log2(x+1) - x log2(x), the entropy of a thermal spectrum with
/// mean occupation x; g(0) = 0 and g(1) = 2.
pub fn gaussian_g(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (x + 1.0) * (x + 1.0).log2() - x * x.log2()
}

/// True iff lambda is majorized by mu (both compared after descending sort).
pub fn majorizes(lambda: &[f64], mu: &[f64]) -> bool {
    let mut l: Vec<f64> = lambda.to_vec();
    let mut m: Vec<f64> = mu.to_vec();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    m.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let n = l.len().max(m.len());
    l.resize(n, 0.0);
    m.resize(n, 0.0);
    let (mut pl, mut pm) = (0.0, 0.0);
    for k in 0..n {
        pl += l[k];
        pm += m[k];
        if pl > pm + 1e-10 {
            return false;
        }
    }
    true
}

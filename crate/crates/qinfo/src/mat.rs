//! Dense complex linear algebra helpers shared by every other module.
//!
//! Conventions: tensor factors are kron'ed with the first factor as the most
//! significant index block, Hermitian eigensolves symmetrize their input as
//! (A + A^dag)/2 before decomposing, and descending eigenvalue sorts are stable
//! with respect to the solver's original ordering so repeated runs are
//! reproducible bit for bit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const PSD_TOL_REL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn basis_vec(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = cr(1.0);
    v
}

/// Kronecker product; index of the first factor is the most significant block.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let (na, nb) = (a.len(), b.len());
    let mut out = CVec::zeros(na * nb);
    for i in 0..na {
        for j in 0..nb {
            out[i * nb + j] = a[i] * b[j];
        }
    }
    out
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

pub fn herm_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

pub fn trace(a: &CMat) -> Complex64 {
    let mut t = Complex64::default();
    for i in 0..a.nrows().min(a.ncols()) {
        t += a[(i, i)];
    }
    t
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn outer(v: &CVec, w: &CVec) -> CMat {
    v * w.adjoint()
}

pub fn projector(v: &CVec) -> CMat {
    outer(v, v)
}

/// Scale-aware positivity gate: eigenvalues above `-psd_tol(scale)` count as
/// nonnegative, where `scale` is the largest eigenvalue magnitude (floored at 1).
pub fn psd_tol(scale: f64) -> f64 {
    PSD_TOL_REL * scale.abs().max(1.0)
}

/// Hermitian eigendecomposition of (A + A^dag)/2.
///
/// Returns eigenvalues in descending order with their eigenvectors as matching
/// columns. Ties keep the solver's original ordering (stable sort).
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let h = herm_part(a);
    let es = nalgebra::linalg::SymmetricEigen::new(h);
    let n = es.eigenvalues.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| es.eigenvalues[j].partial_cmp(&es.eigenvalues[i]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| es.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vecs.set_column(col, &es.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn min_eig_h(a: &CMat) -> f64 {
    let (vals, _) = eigh(a);
    *vals.last().unwrap()
}

pub fn max_eig_h(a: &CMat) -> f64 {
    let (vals, _) = eigh(a);
    vals[0]
}

/// Rebuilds f(A) for Hermitian A by applying `f` to each eigenvalue.
pub fn func_h(a: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(a);
    let n = vals.len();
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        let col = vecs.column(k);
        let fk = f(vals[k]);
        if fk != 0.0 {
            out += (col * col.adjoint()).scale(fk);
        }
    }
    out
}

/// Square root of a positive semidefinite matrix (small negative eigenvalues are
/// clamped to zero).
pub fn sqrtm_psd(a: &CMat) -> CMat {
    func_h(a, |x| if x > 0.0 { x.sqrt() } else { 0.0 })
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    let svd = nalgebra::linalg::SVD::new(a.clone(), false, false);
    svd.singular_values.iter().copied().collect()
}

/// Trace norm, i.e. the sum of singular values.
pub fn trace_norm(a: &CMat) -> f64 {
    singular_values(a).iter().sum()
}

/// Trace norm of a Hermitian matrix via its eigenvalues.
pub fn trace_norm_h(a: &CMat) -> f64 {
    eigh(a).0.iter().map(|x| x.abs()).sum()
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &CMat) -> f64 {
    singular_values(a).iter().copied().fold(0.0, f64::max)
}

/// Unitary factor of the polar decomposition A = U P; maximizes Re tr(U^dag A).
pub fn polar_unitary(a: &CMat) -> CMat {
    let svd = nalgebra::linalg::SVD::new(a.clone(), true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    u * vt
}

/// Moore-Penrose pseudo-inverse with a relative singular-value cutoff.
pub fn pinv(a: &CMat, rel_cutoff: f64) -> CMat {
    let svd = nalgebra::linalg::SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = rel_cutoff * smax.max(f64::MIN_POSITIVE);
    svd.pseudo_inverse(eps).expect("pseudo inverse")
}

/// Reshape a vector on C^(rows*cols) into the rows x cols matrix M with
/// psi[(i,j)] = M[i,j], index (i,j) = i*cols + j.
pub fn vec_to_mat(v: &CVec, rows: usize, cols: usize) -> CMat {
    assert_eq!(v.len(), rows * cols, "vector length must equal rows*cols");
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = v[i * cols + j];
        }
    }
    m
}

pub fn mat_to_vec(m: &CMat) -> CVec {
    let (rows, cols) = m.shape();
    let mut v = CVec::zeros(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            v[i * cols + j] = m[(i, j)];
        }
    }
    v
}

/// Lift `op` to act on the `which` factor of a tensor product with the given
/// factor dimensions.
pub fn op_on_factor(op: &CMat, dims: &[usize], which: usize) -> CMat {
    assert!(which < dims.len());
    assert_eq!(op.nrows(), dims[which]);
    let mut out = eye(1);
    for (k, &d) in dims.iter().enumerate() {
        let f = if k == which { op.clone() } else { eye(d) };
        out = kron(&out, &f);
    }
    out
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample (Box-Muller).
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn cnormal(rng: &mut impl Rng) -> Complex64 {
    c(normal(rng), normal(rng))
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| cnormal(rng))
}

/// Haar-random unitary via the phase-fixed QR of a Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, d: usize) -> CMat {
    let g = ginibre(rng, d, d);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { cr(1.0) };
        for i in 0..d {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}

pub fn random_pure(rng: &mut impl Rng, d: usize) -> CVec {
    let mut v = CVec::from_fn(d, |_, _| cnormal(rng));
    let n = v.norm();
    v /= cr(n);
    v
}

/// Random full-rank-by-default density matrix G G^dag / tr.
pub fn random_density(rng: &mut impl Rng, d: usize, rank: usize) -> CMat {
    let g = ginibre(rng, d, rank.max(1));
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    m.scale(1.0 / t)
}

/// Random product vector on C^da x C^db.
pub fn random_product(rng: &mut impl Rng, da: usize, db: usize) -> CVec {
    let a = random_pure(rng, da);
    let b = random_pure(rng, db);
    kron_vec(&a, &b)
}

pub fn pauli(i: usize) -> CMat {
    match i {
        0 => eye(2),
        1 => CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]),
        2 => CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]),
        3 => CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]),
        _ => panic!("pauli index must be 0..=3"),
    }
}

/// Cyclic shift X|j> = |j+1 mod d>.
pub fn shift_op(d: usize) -> CMat {
    let mut m = zeros(d, d);
    for j in 0..d {
        m[((j + 1) % d, j)] = cr(1.0);
    }
    m
}

/// Clock Z|j> = w^j |j> with w = exp(2 pi i / d).
pub fn clock_op(d: usize) -> CMat {
    let mut m = zeros(d, d);
    for j in 0..d {
        let ang = 2.0 * std::f64::consts::PI * (j as f64) / (d as f64);
        m[(j, j)] = c(ang.cos(), ang.sin());
    }
    m
}

/// Weyl operator X^a Z^b; the d^2 of them are trace orthogonal.
pub fn weyl_op(d: usize, a: usize, b: usize) -> CMat {
    let mut x = eye(d);
    for _ in 0..a {
        x = shift_op(d) * x;
    }
    let mut z = eye(d);
    for _ in 0..b {
        z = clock_op(d) * z;
    }
    x * z
}

//! Named two-party operators and states, symmetric state families, twirl
//! projections onto those families, unextendible product bases, and pure-state
//! LOCC convertibility.

use crate::density::{majorizes, schmidt_decompose, DensityMatrix};
use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use num_complex::Complex64;

/// Flip (swap) operator F on C^d x C^d: F |i,j> = |j,i>.
pub fn flip_operator(d: usize) -> CMat {
    let n = d * d;
    let mut f = CMat::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            f[(j * d + i, i * d + j)] = mat::cr(1.0);
        }
    }
    f
}

/// F with the second factor transposed: d |Omega><Omega|, rank one.
pub fn ftilde_operator(d: usize) -> CMat {
    let omega = max_entangled(d);
    mat::projector(&omega).scale(d as f64)
}

/// Projector onto the symmetric subspace, (1 + F)/2.
pub fn sym_projector(d: usize) -> CMat {
    let n = d * d;
    (mat::eye(n) + flip_operator(d)).scale(0.5)
}

/// Projector onto the antisymmetric subspace, (1 - F)/2.
pub fn antisym_projector(d: usize) -> CMat {
    let n = d * d;
    (mat::eye(n) - flip_operator(d)).scale(0.5)
}

/// Omega = d^{-1/2} sum_j |j,j>.
pub fn max_entangled(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    let a = mat::cr(1.0 / (d as f64).sqrt());
    for j in 0..d {
        v[j * d + j] = a;
    }
    v
}

/// The four Bell vectors on C^2 x C^2: index 0 is (|00>+|11>)/sqrt2 and
/// index j>0 applies i(1 x sigma_j) to it. Orthonormal; the phases make the
/// associated local unitaries mesh with the teleportation corrections.
pub fn bell_state(j: usize) -> Result<CVec> {
    if j > 3 {
        return Err(Error::BadParam(format!("Bell index {j} out of 0..=3")));
    }
    let phi0 = max_entangled(2);
    if j == 0 {
        return Ok(phi0);
    }
    let op = mat::kron(&mat::eye(2), &mat::pauli(j));
    Ok((op * phi0) * Complex64::i())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Flip,
    Ftilde,
    SymProjector,
    AntiSymProjector,
    BellState(usize),
    MaxEntangled,
}

/// Uniform constructor; vector-valued kinds come back as single-column matrices.
pub fn make_named(kind: Named, d: usize) -> Result<CMat> {
    if d < 2 {
        return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
    }
    Ok(match kind {
        Named::Flip => flip_operator(d),
        Named::Ftilde => ftilde_operator(d),
        Named::SymProjector => sym_projector(d),
        Named::AntiSymProjector => antisym_projector(d),
        Named::BellState(j) => {
            if d != 2 {
                return Err(Error::BadParam(format!(
                    "Bell states require d=2, got {d}"
                )));
            }
            let v = bell_state(j)?;
            CMat::from_column_slice(4, 1, v.as_slice())
        }
        Named::MaxEntangled => {
            let v = max_entangled(d);
            CMat::from_column_slice(d * d, 1, v.as_slice())
        }
    })
}

/// Symmetric two-party families, each closed under its twirl group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Invariant under U x U; coordinate f = tr(F rho) in [-1, 1].
    Werner { d: usize, f: f64 },
    /// Invariant under U x conj(U); coordinate t = tr(Ftilde rho) in [0, d].
    Isotropic { d: usize, t: f64 },
    /// Invariant under O x O for real orthogonal O; coordinates (f, t).
    OO { d: usize, f: f64, t: f64 },
    /// Mixture of the four Bell projectors with the given weights.
    BellDiagonal { lambda: [f64; 4] },
}

const COORD_TOL: f64 = 1e-12;

pub fn family_state(p: &Family) -> Result<DensityMatrix> {
    match *p {
        Family::Werner { d, f } => {
            if d < 2 {
                return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
            }
            if !(-1.0 - COORD_TOL..=1.0 + COORD_TOL).contains(&f) {
                return Err(Error::OutOfRegion(format!("f = {f} outside [-1, 1]")));
            }
            let dp = (d * (d + 1) / 2) as f64;
            let dm = (d * (d - 1) / 2) as f64;
            let m = sym_projector(d).scale((1.0 + f) / 2.0 / dp)
                + antisym_projector(d).scale((1.0 - f) / 2.0 / dm);
            Ok(DensityMatrix::new_unchecked(m, vec![d, d]))
        }
        Family::Isotropic { d, t } => {
            if d < 2 {
                return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
            }
            if !(-COORD_TOL..=d as f64 + COORD_TOL).contains(&t) {
                return Err(Error::OutOfRegion(format!("t = {t} outside [0, {d}]")));
            }
            let n = d * d;
            let p_omega = mat::projector(&max_entangled(d));
            let rest = (mat::eye(n) - &p_omega).scale((1.0 - t / d as f64) / (n - 1) as f64);
            let m = p_omega.scale(t / d as f64) + rest;
            Ok(DensityMatrix::new_unchecked(m, vec![d, d]))
        }
        Family::OO { d, f, t } => {
            oo_check_region(d, f, t)?;
            let (p0, p1, p2) = oo_projectors(d);
            let c0 = t / d as f64;
            let c1 = (1.0 - f) / 2.0;
            let c2 = (1.0 + f) / 2.0 - t / d as f64;
            let t1 = mat::trace(&p1).re;
            let t2 = mat::trace(&p2).re;
            let m = p0.scale(c0) + p1.scale(c1 / t1) + p2.scale(c2 / t2);
            Ok(DensityMatrix::new_unchecked(m, vec![d, d]))
        }
        Family::BellDiagonal { lambda } => {
            let s: f64 = lambda.iter().sum();
            if lambda.iter().any(|&l| l < -COORD_TOL) || (s - 1.0).abs() > 1e-10 {
                return Err(Error::OutOfRegion(format!(
                    "weights {lambda:?} must be nonnegative and sum to 1"
                )));
            }
            let mut m = CMat::zeros(4, 4);
            for (j, &l) in lambda.iter().enumerate() {
                m += mat::projector(&bell_state(j)?).scale(l);
            }
            Ok(DensityMatrix::new_unchecked(m, vec![2, 2]))
        }
    }
}

/// The three orthogonal projectors spanning the OO-invariant commutant:
/// p0 = Ftilde/d, p1 antisymmetric, p2 the symmetric remainder.
pub fn oo_projectors(d: usize) -> (CMat, CMat, CMat) {
    let p0 = ftilde_operator(d).scale(1.0 / d as f64);
    let p1 = antisym_projector(d);
    let p2 = sym_projector(d) - &p0;
    (p0, p1, p2)
}

fn oo_check_region(d: usize, f: f64, t: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
    }
    let df = d as f64;
    if !(-1.0 - COORD_TOL..=1.0 + COORD_TOL).contains(&f)
        || !(-COORD_TOL..=df + COORD_TOL).contains(&t)
        || f + COORD_TOL < 2.0 * t / df - 1.0
    {
        return Err(Error::OutOfRegion(format!(
            "(f, t) = ({f}, {t}) outside the admissible set for d = {d}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Twirl {
    /// Average over U x U; projects onto the Werner family.
    UU,
    /// Average over U x conj(U); projects onto the isotropic family.
    UUbar,
    /// Average over O x O, real orthogonal; projects onto the OO family.
    OO,
}

/// Closed-form group average. Only the expectations tr(F rho) and tr(Ftilde rho)
/// survive, so the projection is exact with no sampling.
pub fn twirl(kind: Twirl, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimMismatch(format!(
            "twirl needs two equal factors, got {dims:?}"
        )));
    }
    let d = dims[0];
    let f = mat::trace(&(flip_operator(d) * rho.mat())).re;
    let t = mat::trace(&(ftilde_operator(d) * rho.mat())).re;
    match kind {
        Twirl::UU => family_state(&Family::Werner { d, f: f.clamp(-1.0, 1.0) }),
        Twirl::UUbar => family_state(&Family::Isotropic { d, t: t.clamp(0.0, d as f64) }),
        Twirl::OO => {
            let fc = f.clamp(-1.0, 1.0);
            let tc = t.clamp(0.0, d as f64).min((fc + 1.0) * d as f64 / 2.0);
            family_state(&Family::OO { d, f: fc, t: tc })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Upb {
    Pyramid,
    Tiles,
}

/// The five orthonormal product vectors of the named 3x3 unextendible basis.
pub fn upb_vectors(kind: Upb) -> Vec<CVec> {
    match kind {
        Upb::Pyramid => {
            let h = 0.5 * (1.0 + 5.0f64.sqrt()).sqrt();
            let nrm = 2.0 / (5.0 + 5.0f64.sqrt()).sqrt();
            let v = |j: usize| -> CVec {
                let ang = 2.0 * std::f64::consts::PI * j as f64 / 5.0;
                CVec::from_vec(vec![
                    mat::cr(nrm * ang.cos()),
                    mat::cr(nrm * ang.sin()),
                    mat::cr(nrm * h),
                ])
            };
            (0..5).map(|j| mat::kron_vec(&v(j), &v((2 * j) % 5))).collect()
        }
        Upb::Tiles => {
            let e = |i: usize| mat::basis_vec(3, i);
            let mi = |i: usize, j: usize| (&e(i) - &e(j)).scale(1.0 / 2f64.sqrt());
            let plus = (&e(0) + &e(1) + &e(2)).scale(1.0 / 3f64.sqrt());
            vec![
                mat::kron_vec(&e(0), &mi(0, 1)),
                mat::kron_vec(&e(2), &mi(1, 2)),
                mat::kron_vec(&mi(0, 1), &e(2)),
                mat::kron_vec(&mi(1, 2), &e(0)),
                mat::kron_vec(&plus, &plus),
            ]
        }
    }
}

/// Normalized projector onto the orthocomplement of the basis span:
/// rho = (1 - E)/4, rank 4, positive under partial transposition yet entangled.
pub fn upb_state(kind: Upb) -> DensityMatrix {
    let vecs = upb_vectors(kind);
    let mut e = CMat::zeros(9, 9);
    for v in &vecs {
        e += mat::projector(v);
    }
    let m = (mat::eye(9) - e).scale(1.0 / 4.0);
    DensityMatrix::new_unchecked(m, vec![3, 3])
}

/// True iff psi can be turned into phi by local operations and classical
/// communication: the Schmidt weight vector of psi must be majorized by phi's.
pub fn locc_convertible_pure(psi: &CVec, phi: &CVec, dims: (usize, usize)) -> Result<bool> {
    let sp = schmidt_decompose(psi, dims)?;
    let sf = schmidt_decompose(phi, dims)?;
    Ok(majorizes(&sp.weights(), &sf.weights()))
}

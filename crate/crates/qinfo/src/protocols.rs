//! Teleportation, dense coding, and entanglement-distillation primitives
//! executed on explicit density matrices: branch-by-branch arithmetic, no
//! sampling.

use crate::density::{partial_trace, von_neumann_entropy_mat, DensityMatrix};
use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use crate::states::max_entangled;

/// A unitary family U_j with tr(U_j' U_k) = d delta_jk, the measurement
/// basis it generates from the maximally entangled vector, and the shared
/// resource state (the ideal projector unless replaced).
#[derive(Debug, Clone)]
pub struct TeleportationScheme {
    d: usize,
    unitaries: Vec<CMat>,
    basis: Vec<CVec>,
    resource: CMat,
}

impl TeleportationScheme {
    pub fn new(unitaries: Vec<CMat>) -> Result<Self> {
        let scheme = Self::new_unchecked(unitaries)?;
        scheme.validate()?;
        Ok(scheme)
    }

    /// Builds the derived data without the orthogonality checks; intended
    /// for probing how broken families fail downstream.
    pub fn new_unchecked(unitaries: Vec<CMat>) -> Result<Self> {
        let d = unitaries
            .first()
            .map(|u| u.nrows())
            .ok_or_else(|| Error::BadParam("empty unitary family".into()))?;
        if unitaries.len() != d * d {
            return Err(Error::BadParam(format!(
                "need {} unitaries for local dimension {d}",
                d * d
            )));
        }
        if unitaries.iter().any(|u| u.nrows() != d || u.ncols() != d) {
            return Err(Error::DimMismatch("unitaries must share one size".into()));
        }
        let omega = max_entangled(d);
        let basis: Vec<CVec> = unitaries
            .iter()
            .map(|u| mat::kron(u, &mat::eye(d)) * &omega)
            .collect();
        let resource = mat::projector(&omega);
        Ok(Self { d, unitaries, basis, resource })
    }

    fn validate(&self) -> Result<()> {
        let d = self.d;
        for (j, u) in self.unitaries.iter().enumerate() {
            let dev = mat::max_abs_diff(&(u.adjoint() * u), &mat::eye(d));
            if dev > 1e-10 {
                return Err(Error::BadParam(format!("member {j} is not unitary ({dev:.2e})")));
            }
            for (k, w) in self.unitaries.iter().enumerate() {
                let want = if j == k { d as f64 } else { 0.0 };
                let got = mat::trace(&(u.adjoint() * w));
                if (got - mat::cr(want)).norm() > 1e-10 {
                    return Err(Error::BadParam(format!(
                        "family members {j}, {k} are not orthogonal"
                    )));
                }
            }
        }
        for (j, phi) in self.basis.iter().enumerate() {
            for (k, chi) in self.basis.iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                if ((phi.adjoint() * chi)[(0, 0)] - mat::cr(want)).norm() > 1e-10 {
                    return Err(Error::BadParam(format!(
                        "measurement vectors {j}, {k} are not orthonormal"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Qubit scheme with the identity and the three spin operators.
    pub fn standard_qubit() -> Self {
        Self::new((0..4).map(mat::pauli).collect()).expect("spin family is orthogonal")
    }

    /// Discrete shift/clock family; works in any dimension.
    pub fn weyl(d: usize) -> Result<Self> {
        let mut unitaries = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                unitaries.push(mat::weyl_op(d, a, b));
            }
        }
        Self::new(unitaries)
    }

    /// Replace the shared resource with an arbitrary two-party state.
    pub fn with_resource(mut self, sigma: &DensityMatrix) -> Result<Self> {
        if sigma.dim() != self.d * self.d {
            return Err(Error::DimMismatch(format!(
                "resource dimension {} does not fit local dimension {}",
                sigma.dim(),
                self.d
            )));
        }
        self.resource = sigma.mat().clone();
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }
}

/// Run every measurement branch of the teleportation circuit on rho and sum
/// the corrected outputs; returns the output and its trace distance from the
/// input. Exactly zero (up to rounding) for a consistent scheme with the
/// ideal resource.
pub fn run_teleportation(
    s: &TeleportationScheme,
    rho: &DensityMatrix,
) -> Result<(DensityMatrix, f64)> {
    let d = s.d;
    if rho.dim() != d {
        return Err(Error::DimMismatch(format!(
            "input dimension {} vs scheme dimension {d}",
            rho.dim()
        )));
    }
    let total = DensityMatrix::new_unchecked(
        mat::kron(rho.mat(), &s.resource),
        vec![d, d, d],
    );
    let mut out = CMat::zeros(d, d);
    for (j, phi) in s.basis.iter().enumerate() {
        let meas = mat::kron(&mat::projector(phi), &mat::eye(d));
        let branch_total = DensityMatrix::new_unchecked(meas * total.mat(), vec![d, d, d]);
        let reduced = partial_trace(&partial_trace(&branch_total, 0)?, 0)?;
        let u = &s.unitaries[j];
        out += u * reduced.mat() * u.adjoint();
    }
    let deviation = mat::trace_norm(&(&out - rho.mat()));
    Ok((DensityMatrix::new_unchecked(out, vec![d]), deviation))
}

/// Transition matrix of the dense-coding circuit: entry (y, x) is the
/// probability of decoding y when x was encoded. Columns sum to one; the
/// ideal resource gives the identity.
pub fn run_dense_coding(s: &TeleportationScheme) -> nalgebra::DMatrix<f64> {
    let d = s.d;
    let n = d * d;
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for x in 0..n {
        let u = mat::kron(&s.unitaries[x], &mat::eye(d));
        let encoded = &u * &s.resource * u.adjoint();
        for y in 0..n {
            let phi = &s.basis[y];
            m[(y, x)] = (phi.adjoint() * &encoded * phi)[(0, 0)].re;
        }
    }
    m
}

/// One recurrence step of the two-pair distillation protocol: twirl to the
/// isotropic line, run bilateral XORs from the kept pair onto the measured
/// pair, postselect on agreeing computational outcomes, and report the
/// fidelity before and after.
pub struct DistillationStep {
    pub output: DensityMatrix,
    pub success_prob: f64,
    pub fidelity_in: f64,
    pub fidelity_out: f64,
}

pub fn bbpssw_step(rho: &DensityMatrix) -> Result<DistillationStep> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch("need a two-qubit state".into()));
    }
    let rho = rho.clone().with_dims(vec![2, 2])?;
    let omega = max_entangled(2);
    let p_omega = mat::projector(&omega);
    let fidelity_in = mat::trace(&(&p_omega * rho.mat())).re;
    if fidelity_in <= 0.5 {
        return Err(Error::OutOfRegion(format!(
            "fidelity {fidelity_in} is not above 1/2; the recurrence cannot gain"
        )));
    }
    let iso = crate::states::twirl(crate::states::Twirl::UUbar, &rho)?;
    // Four qubits ordered (A1, B1, A2, B2): pair 1 is measured, pair 2 kept.
    let pair = mat::kron(iso.mat(), iso.mat());
    let mut perm = CMat::zeros(16, 16);
    for a1 in 0..2usize {
        for b1 in 0..2usize {
            for a2 in 0..2usize {
                for b2 in 0..2usize {
                    let from = a1 * 8 + b1 * 4 + a2 * 2 + b2;
                    let to = (a1 ^ a2) * 8 + (b1 ^ b2) * 4 + a2 * 2 + b2;
                    perm[(to, from)] = mat::cr(1.0);
                }
            }
        }
    }
    let swapped_order = {
        // Regroup (A1, A2, B1, B2) -> (A1, B1, A2, B2) is already our layout;
        // the XOR permutation above acts directly in it.
        &perm * &pair * perm.adjoint()
    };
    let mut agree = CMat::zeros(16, 16);
    for a1 in 0..2usize {
        for b1 in 0..2usize {
            if a1 != b1 {
                continue;
            }
            for rest in 0..4usize {
                let i = a1 * 8 + b1 * 4 + rest;
                agree[(i, i)] = mat::cr(1.0);
            }
        }
    }
    let selected = &agree * &swapped_order * &agree;
    let success_prob = mat::trace(&selected).re;
    if success_prob < 1e-14 {
        return Err(Error::ZeroProbability { prob: success_prob });
    }
    let four = DensityMatrix::new_unchecked(selected / mat::cr(success_prob), vec![2, 2, 2, 2]);
    let kept = partial_trace(&partial_trace(&four, 0)?, 0)?;
    let fidelity_out = mat::trace(&(&p_omega * kept.mat())).re;
    Ok(DistillationStep {
        output: kept,
        success_prob,
        fidelity_in,
        fidelity_out,
    })
}

/// Apply a local filter to one factor of a bipartite state: the branch
/// (X (x) 1) rho (X (x) 1)', normalized, together with its probability. The
/// operator is rescaled to a contraction first.
pub fn filter_step(
    rho: &DensityMatrix,
    x: &CMat,
    factor: usize,
) -> Result<(DensityMatrix, f64)> {
    let dims = rho.dims().to_vec();
    if factor >= dims.len() {
        return Err(Error::BadParam(format!("factor {factor} out of range")));
    }
    if x.nrows() != dims[factor] || x.ncols() != dims[factor] {
        return Err(Error::DimMismatch(format!(
            "filter is {}x{}, factor {factor} has dimension {}",
            x.nrows(),
            x.ncols(),
            dims[factor]
        )));
    }
    let norm = mat::op_norm(x);
    let xs = if norm > 1.0 { x / mat::cr(norm) } else { x.clone() };
    let big = mat::op_on_factor(&xs, &dims, factor);
    let branch = &big * rho.mat() * big.adjoint();
    let prob = mat::trace(&branch).re;
    if prob < 1e-14 {
        return Err(Error::ZeroProbability { prob });
    }
    Ok((
        DensityMatrix::new_unchecked(branch / mat::cr(prob), dims),
        prob,
    ))
}

/// True when the two-qubit entropy is at most one bit, the regime where the
/// one-way hashing recipe has positive yield.
pub fn hashing_threshold(rho: &DensityMatrix) -> Result<bool> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch("need a two-qubit state".into()));
    }
    Ok(von_neumann_entropy_mat(rho.mat()) <= 1.0)
}

/// The scalar fidelity recursion induced by `bbpssw_step` on the isotropic
/// line, sampled on a grid of input fidelities in (1/2, 1].
pub fn bbpssw_fidelity_map(grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(grid.len());
    for &f in grid {
        let state = isotropic_with_fidelity(f)?;
        let step = bbpssw_step(&state)?;
        out.push((f, step.fidelity_out));
    }
    Ok(out)
}

/// Two-qubit isotropic state with the given maximally entangled overlap.
pub fn isotropic_with_fidelity(f: f64) -> Result<DensityMatrix> {
    crate::states::family_state(&crate::states::Family::Isotropic { d: 2, t: 2.0 * f })
}

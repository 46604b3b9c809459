//! Symmetric-subspace machinery: the optimal N-to-M cloner and its
//! fidelities, purifier fidelities for mixed qubit inputs with their
//! asymptotic limit, the universal spin flip, estimation bounds, the
//! spectrum-estimation rate function, and quantum Fisher matrices.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use crate::channels::KrausChannel;
use crate::density::{partial_trace, DensityMatrix};
use crate::error::{Error, Result};
use crate::mat::{self, CMat};

/// Hilbert-space dimensions above this are refused outright.
pub const SIZE_GUARD_LIMIT: usize = 1 << 20;

pub(crate) fn guarded_dim(d: usize, n: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::BadParam(format!("local dimension {d} must be at least 2")));
    }
    let mut acc = 1usize;
    for _ in 0..n {
        acc = acc
            .checked_mul(d)
            .filter(|&v| v <= SIZE_GUARD_LIMIT)
            .ok_or_else(|| {
                Error::SizeGuard(format!("{d}^{n} exceeds the {SIZE_GUARD_LIMIT} limit"))
            })?;
    }
    Ok(acc)
}

fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the totally symmetric subspace of n copies of C^d.
pub fn sym_dimension(n: usize, d: usize) -> f64 {
    binom_u128(n + d - 1, d - 1) as f64
}

/// Projector onto the totally symmetric subspace of (C^d)^(x n): the average
/// of all permutation operators. Entry (i, j) is prod(occ!)/n! whenever the
/// basis words i and j are rearrangements of each other, zero otherwise.
pub fn symmetrizer(n: usize, d: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::BadParam("need at least one factor".into()));
    }
    let dim = guarded_dim(d, n)?;
    let mut groups: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
    for idx in 0..dim {
        let mut occ = vec![0u16; d];
        let mut rest = idx;
        for _ in 0..n {
            occ[rest % d] += 1;
            rest /= d;
        }
        groups.entry(occ).or_default().push(idx);
    }
    let fact = |k: usize| -> u128 { (2..=k as u128).product::<u128>().max(1) };
    let n_fact = fact(n) as f64;
    let mut s = CMat::zeros(dim, dim);
    for (occ, members) in &groups {
        let occ_fact: u128 = occ.iter().map(|&c| fact(c as usize)).product();
        let w = mat::cr(occ_fact as f64 / n_fact);
        for &i in members {
            for &j in members {
                s[(i, j)] = w;
            }
        }
    }
    Ok(s)
}

/// N copies of C^d together with the symmetric projector.
pub struct SymmetricSpace {
    pub n: usize,
    pub d: usize,
    pub dim: usize,
    projector: CMat,
}

impl SymmetricSpace {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let projector = symmetrizer(n, d)?;
        Ok(Self { n, d, dim: sym_dimension(n, d) as usize, projector })
    }

    pub fn projector(&self) -> &CMat {
        &self.projector
    }
}

/// The optimal universal cloner taking n symmetric copies to m systems:
/// sandwich the input, padded with maximally mixed ancillas, between m-fold
/// symmetrizers and rescale. Trace preserving on symmetric inputs only, so
/// the channel's global flag is false.
pub fn optimal_cloner(n: usize, m: usize, d: usize) -> Result<KrausChannel> {
    if n < 1 {
        return Err(Error::BadParam("need at least one input copy".into()));
    }
    if m < n {
        return Err(Error::BadParam(format!(
            "output count {m} must be at least the input count {n}"
        )));
    }
    let dim_in = guarded_dim(d, n)?;
    let dim_out = guarded_dim(d, m)?;
    let s_m = symmetrizer(m, d)?;
    let scale = (sym_dimension(n, d) / sym_dimension(m, d)).sqrt();
    let env = dim_out / dim_in;
    let mut kraus = Vec::with_capacity(env);
    for e in 0..env {
        let mut k = CMat::zeros(dim_out, dim_in);
        for j in 0..dim_in {
            for r in 0..dim_out {
                k[(r, j)] = s_m[(r, j * env + e)] * scale;
            }
        }
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}

/// Single-copy and all-copies fidelities of the n-to-m cloner, computed by
/// applying the channel to |0...0>. Universality makes the choice of input
/// vector irrelevant.
pub fn cloner_fidelities(n: usize, m: usize, d: usize) -> Result<(f64, f64)> {
    let t = optimal_cloner(n, m, d)?;
    let input = mat::projector(&mat::basis_vec(t.in_dim(), 0));
    let out = t.apply(&input);
    let f_all = out[(0, 0)].re;
    let mut reduced = DensityMatrix::new_unchecked(out, vec![d; m]);
    for factor in (1..m).rev() {
        reduced = partial_trace(&reduced, factor)?;
    }
    let f1 = reduced.mat()[(0, 0)].re;
    Ok((f1, f_all))
}

/// Closed-form companion to the direct single-copy fidelity; it sits exactly
/// 1/d below `cloner_fidelities` and is kept for cross-checks.
pub fn cloner_f1_shifted(n: usize, m: usize, d: usize) -> f64 {
    let (n, m, d) = (n as f64, m as f64, d as f64);
    (d - 1.0) / d * n / (n + d) * (m + d) / m
}

/// Single-copy fidelity bound for state estimation from n copies, in its raw
/// form together with the companion shifted up by 1/d; the shifted value is
/// what the m -> infinity limit of the direct cloner fidelity reproduces.
#[derive(Debug, Clone, Copy)]
pub struct EstimationBound {
    pub value: f64,
    pub shifted_by_inverse_d: f64,
}

pub fn estimation_bound(n: usize, d: usize) -> EstimationBound {
    let (nf, df) = (n as f64, d as f64);
    let value = (df - 1.0) / df * nf / (nf + df);
    EstimationBound { value, shifted_by_inverse_d: value + 1.0 / df }
}

/// Fidelity of the optimal universal spin flip fed n copies.
pub fn unot_fidelity(n: usize) -> f64 {
    1.0 - 1.0 / (n as f64 + 2.0)
}

struct LnFact {
    table: Vec<f64>,
}

impl LnFact {
    fn new(max: usize) -> Self {
        let mut table = vec![0.0; max + 1];
        for k in 2..=max {
            table[k] = table[k - 1] + (k as f64).ln();
        }
        Self { table }
    }

    fn binom(&self, n: usize, k: usize) -> f64 {
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - LN_2
}

fn coth(x: f64) -> f64 {
    1.0 + 2.0 / (2.0 * x).exp_m1()
}

/// Spin-sector weight of n maximally chaotic-purified qubit copies at bias
/// theta: total spin s = two_s/2, multiplicity space dimension, and weight.
#[derive(Debug, Clone, Copy)]
pub struct SpinWeight {
    pub two_s: usize,
    pub multiplicity_dim: f64,
    pub weight: f64,
}

/// All sector weights for n qubit copies with eigenvalue bias theta; the
/// weights sum to one. Evaluated in log space so n ~ 5000 stays finite.
pub fn spin_weights(n: usize, theta: f64) -> Result<Vec<SpinWeight>> {
    if n < 1 {
        return Err(Error::BadParam("need at least one copy".into()));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::BadParam(format!("bias {theta} outside [0, 1]")));
    }
    let lf = LnFact::new(n);
    let mut out = Vec::new();
    let mut two_s = n;
    loop {
        let ln_dim = ((two_s + 1) as f64).ln() + 2f64.ln()
            - ((n + two_s + 2) as f64).ln()
            + lf.binom(n, (n - two_s) / 2);
        let ln_w = if theta == 0.0 {
            ((two_s + 1) as f64).ln() + ln_dim - n as f64 * LN_2
        } else if theta == 1.0 {
            if two_s == n {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            let beta = theta.atanh();
            ln_sinh((two_s + 1) as f64 * beta) - ln_sinh(beta)
                - n as f64 * (beta + (-2.0 * beta).exp().ln_1p())
                + ln_dim
        };
        out.push(SpinWeight {
            two_s,
            multiplicity_dim: ln_dim.exp(),
            weight: ln_w.exp(),
        });
        if two_s < 2 {
            break;
        }
        two_s -= 2;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelityKind {
    /// Overlap of one output copy with the source's purification.
    One,
    /// Overlap of the full m-copy output with m purifications.
    All,
}

fn f_one_term(m: usize, beta: f64, two_s: usize) -> f64 {
    let a = (two_s + 1) as f64;
    let x = if beta < 1e-4 {
        beta * (a * a - 1.0) / 3.0 - beta.powi(3) * (a.powi(4) - 1.0) / 45.0
    } else {
        a * coth(a * beta) - coth(beta)
    };
    let slope = if two_s > m {
        x / two_s as f64
    } else {
        x * (m as f64 + 2.0) / (m as f64 * (two_s as f64 + 2.0))
    };
    (1.0 + slope) / 2.0
}

fn f_all_term(m: usize, beta: f64, two_s: usize, lf: &LnFact) -> f64 {
    if m >= two_s {
        let ratio = (-(-2.0 * beta).exp_m1()) / (-(-((2 * two_s + 2) as f64) * beta).exp_m1());
        (two_s + 1) as f64 / (m as f64 + 1.0) * ratio
    } else {
        let pref = ln_sinh(beta) - ln_sinh((two_s + 1) as f64 * beta) - lf.binom(two_s, m);
        let mut terms = Vec::with_capacity(two_s - m + 1);
        for k in m..=two_s {
            terms.push(lf.binom(k, m) + beta * (2 * k) as f64 - beta * two_s as f64);
        }
        let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = terms.iter().map(|t| (t - peak).exp()).sum();
        (pref + peak + sum.ln()).exp()
    }
}

/// Fidelity of the optimal qubit purifier taking n copies at bias theta to m
/// outputs: the sector weights average the per-sector fidelities.
pub fn purifier_fidelity(kind: FidelityKind, n: usize, m: usize, theta: f64) -> Result<f64> {
    if n < 1 || m < 1 {
        return Err(Error::BadParam("copy counts must be positive".into()));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::BadParam(format!("bias {theta} outside [0, 1]")));
    }
    if theta == 0.0 {
        return Ok(match kind {
            FidelityKind::One => 0.5,
            FidelityKind::All => 1.0 / (m as f64 + 1.0),
        });
    }
    if theta == 1.0 {
        let two_s = n;
        return Ok(match kind {
            FidelityKind::One => {
                if two_s > m {
                    1.0
                } else {
                    let slope = two_s as f64 * (m as f64 + 2.0)
                        / (m as f64 * (two_s as f64 + 2.0));
                    (1.0 + slope) / 2.0
                }
            }
            FidelityKind::All => {
                if m >= two_s {
                    (two_s + 1) as f64 / (m as f64 + 1.0)
                } else {
                    1.0
                }
            }
        });
    }
    let beta = theta.atanh();
    let lf = LnFact::new(n.max(m) + 1);
    let mut acc = 0.0;
    for sw in spin_weights(n, theta)? {
        let f = match kind {
            FidelityKind::One => f_one_term(m, beta, sw.two_s),
            FidelityKind::All => f_all_term(m, beta, sw.two_s, &lf),
        };
        acc += sw.weight * f;
    }
    Ok(acc)
}

/// Limit of the all-copies purifier fidelity when m = mu * n and n grows.
pub fn phi_asymptotic(mu: f64, theta: f64) -> Result<f64> {
    if mu <= 0.0 {
        return Err(Error::BadParam(format!("ratio {mu} must be positive")));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::BadParam(format!("bias {theta} outside (0, 1]")));
    }
    Ok(if mu <= theta {
        2.0 * theta * theta / (2.0 * theta * theta + mu * (1.0 - theta))
    } else {
        2.0 * theta * theta / (mu * (1.0 + theta))
    })
}

/// Large-deviation rate for empirical spectra, in nats.
pub fn rate_function(s: &[f64], r: &[f64]) -> Result<f64> {
    if s.len() != r.len() {
        return Err(Error::DimMismatch(format!(
            "spectra of lengths {} and {}",
            s.len(),
            r.len()
        )));
    }
    for probs in [s, r] {
        if probs.iter().any(|&x| x < -1e-12)
            || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return Err(Error::BadParam("not a probability vector".into()));
        }
        if probs.windows(2).any(|w| w[0] < w[1] - 1e-12) {
            return Err(Error::BadParam("spectrum must be sorted descending".into()));
        }
    }
    let mut acc = 0.0;
    for (&sj, &rj) in s.iter().zip(r) {
        if sj > 0.0 {
            if rj <= 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += sj * (sj.ln() - rj.ln());
        }
    }
    Ok(acc)
}

/// Probability that the estimated spectrum of n qubit copies lands in the
/// window delta = [lo, hi] of bias values 2s/n.
pub fn error_prob(n: usize, rho: &DensityMatrix, delta: (f64, f64)) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::Unsupported(
            "spectrum-window probabilities are implemented for qubits".into(),
        ));
    }
    let eigs = mat::eigh(rho.mat()).0;
    let theta = (eigs[0] - eigs[1]).clamp(0.0, 1.0);
    let mut acc = 0.0;
    for sw in spin_weights(n, theta)? {
        let pos = sw.two_s as f64 / n as f64;
        if pos >= delta.0 - 1e-12 && pos <= delta.1 + 1e-12 {
            acc += sw.weight;
        }
    }
    Ok(acc)
}

/// Symmetric logarithmic derivatives and the associated information matrix.
#[derive(Debug, Clone)]
pub struct FisherData {
    pub slds: Vec<CMat>,
    pub matrix: nalgebra::DMatrix<f64>,
}

/// Solve each partial_j rho = (lambda_j rho + rho lambda_j)/2 in the rho
/// eigenbasis and assemble H_jk = Re tr[rho lambda_j lambda_k]. Requires rho
/// strictly full rank.
pub fn quantum_fisher(rho: &CMat, partials: &[CMat]) -> Result<FisherData> {
    let d = rho.nrows();
    if rho.ncols() != d || partials.iter().any(|p| p.nrows() != d || p.ncols() != d) {
        return Err(Error::DimMismatch("state and partials must be square, same size".into()));
    }
    let (vals, vecs) = mat::eigh(rho);
    let scale = vals[0].abs().max(1.0);
    if let Some(&low) = vals.last() {
        if low < 1e-10 * scale {
            return Err(Error::RankDeficient { eigenvalue: low });
        }
    }
    let mut slds = Vec::with_capacity(partials.len());
    for p in partials {
        let d_eig = vecs.adjoint() * mat::herm_part(p) * &vecs;
        let mut l_eig = CMat::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                l_eig[(a, b)] = d_eig[(a, b)] * (2.0 / (vals[a] + vals[b]));
            }
        }
        slds.push(&vecs * l_eig * vecs.adjoint());
    }
    let k = slds.len();
    let mut h = nalgebra::DMatrix::zeros(k, k);
    for j in 0..k {
        for l in j..k {
            let val = mat::trace(&(rho * &slds[j] * &slds[l])).re;
            h[(j, l)] = val;
            h[(l, j)] = val;
        }
    }
    Ok(FisherData { slds, matrix: h })
}

/// tr(H^{-1} F) for an information matrix H and a classical Fisher matrix F.
pub fn gill_massar_ratio(
    h: &nalgebra::DMatrix<f64>,
    f: &nalgebra::DMatrix<f64>,
) -> Result<f64> {
    let inv = h
        .clone()
        .try_inverse()
        .ok_or(Error::RankDeficient { eigenvalue: 0.0 })?;
    Ok((inv * f).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{basis_vec, cr, kron_vec, max_abs_diff, projector, random_pure, seeded_rng};
    use rand::Rng;

    #[test]
    fn symmetrizer_is_projector_with_right_trace() {
        for (n, d, want) in [(2usize, 2usize, 3.0), (3, 2, 4.0), (2, 3, 6.0)] {
            let s = symmetrizer(n, d).unwrap();
            assert!((mat::trace(&s).re - want).abs() < 1e-10, "n={n} d={d}");
            assert!(max_abs_diff(&(&s * &s), &s) < 1e-10);
            assert!((sym_dimension(n, d) - want).abs() < 1e-12);
        }
        let mut rng = seeded_rng(11);
        let psi = random_pure(&mut rng, 2);
        let prod = kron_vec(&kron_vec(&psi, &psi), &psi);
        let s = symmetrizer(3, 2).unwrap();
        assert!((&s * &prod - &prod).norm() < 1e-12);
    }

    #[test]
    fn symmetrizer_equals_permutation_average() {
        let s = symmetrizer(3, 2).unwrap();
        let dim = 8;
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut avg = CMat::zeros(dim, dim);
        for p in perms {
            for j in 0..dim {
                let bits = [(j >> 2) & 1, (j >> 1) & 1, j & 1];
                let mut permuted = [0usize; 3];
                for (slot, &src) in p.iter().enumerate() {
                    permuted[slot] = bits[src];
                }
                let i = (permuted[0] << 2) | (permuted[1] << 1) | permuted[2];
                avg[(i, j)] += cr(1.0 / 6.0);
            }
        }
        assert!(max_abs_diff(&s, &avg) < 1e-12);
    }

    #[test]
    fn cloner_fidelity_examples() {
        let (f1, fall) = cloner_fidelities(1, 2, 2).unwrap();
        assert!((f1 - 5.0 / 6.0).abs() < 1e-12);
        assert!((fall - 2.0 / 3.0).abs() < 1e-12);
        let (f1, fall) = cloner_fidelities(2, 2, 3).unwrap();
        assert!((f1 - 1.0).abs() < 1e-10);
        assert!((fall - 1.0).abs() < 1e-10);
        for (n, m, d) in [(1usize, 2usize, 2usize), (1, 3, 2), (2, 3, 2), (1, 2, 3)] {
            let (f1, fall) = cloner_fidelities(n, m, d).unwrap();
            let want_all = sym_dimension(n, d) / sym_dimension(m, d);
            let (nf, mf, df) = (n as f64, m as f64, d as f64);
            let want_one = (mf * nf + mf + (df - 1.0) * nf) / (mf * (nf + df));
            assert!((fall - want_all).abs() < 1e-10, "all n={n} m={m} d={d}");
            assert!((f1 - want_one).abs() < 1e-10, "one n={n} m={m} d={d}");
            let shifted = cloner_f1_shifted(n, m, d);
            assert!((f1 - shifted - 1.0 / df).abs() < 1e-10, "shift n={n} m={m} d={d}");
        }
        assert!((cloner_f1_shifted(1, 2, 2) - 1.0 / 3.0).abs() < 1e-12);
        assert!(matches!(optimal_cloner(3, 2, 2), Err(Error::BadParam(_))));
    }

    #[test]
    fn cloner_is_input_independent() {
        let t = optimal_cloner(1, 2, 2).unwrap();
        let mut rng = seeded_rng(17);
        for _ in 0..20 {
            let psi = random_pure(&mut rng, 2);
            let out = t.apply(&projector(&psi));
            let pair = kron_vec(&psi, &psi);
            let fall = (pair.adjoint() * &out * &pair)[(0, 0)].re;
            let reduced = partial_trace(
                &DensityMatrix::new_unchecked(out, vec![2, 2]),
                1,
            )
            .unwrap();
            let f1 = (psi.adjoint() * reduced.mat() * &psi)[(0, 0)].re;
            assert!((fall - 2.0 / 3.0).abs() < 1e-10);
            assert!((f1 - 5.0 / 6.0).abs() < 1e-10);
        }
    }

    #[test]
    fn weights_normalize() {
        for (n, theta) in [(20usize, 0.5), (7, 0.0), (2000, 0.6), (15, 0.999)] {
            let total: f64 = spin_weights(n, theta).unwrap().iter().map(|w| w.weight).sum();
            assert!((total - 1.0).abs() < 1e-10, "n={n} theta={theta}");
        }
        for sw in spin_weights(6, 0.3).unwrap() {
            let rounded = sw.multiplicity_dim.round();
            assert!((sw.multiplicity_dim - rounded).abs() < 1e-9);
            assert!(rounded >= 1.0);
        }
    }

    #[test]
    fn purifier_examples() {
        assert!((purifier_fidelity(FidelityKind::One, 3, 3, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((purifier_fidelity(FidelityKind::All, 3, 3, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let (f1c, fallc) = cloner_fidelities(1, 2, 2).unwrap();
        assert!(
            (purifier_fidelity(FidelityKind::One, 1, 2, 1.0).unwrap() - f1c).abs() < 1e-12
        );
        assert!(
            (purifier_fidelity(FidelityKind::All, 1, 2, 1.0).unwrap() - fallc).abs() < 1e-12
        );
        assert!((purifier_fidelity(FidelityKind::One, 4, 6, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(
            (purifier_fidelity(FidelityKind::All, 4, 6, 0.0).unwrap() - 1.0 / 7.0).abs() < 1e-12
        );
        // Small-bias evaluations approach the analytic zero-bias limits.
        assert!(
            (purifier_fidelity(FidelityKind::All, 5, 3, 1e-6).unwrap() - 0.25).abs() < 1e-5
        );
    }

    #[test]
    fn branch_junctions_are_continuous() {
        let beta = 0.5f64.atanh();
        let m = 4;
        let x = 5.0 * coth(5.0 * beta) - coth(beta);
        let high = (1.0 + x / 4.0) / 2.0;
        let low = (1.0 + x * 6.0 / (4.0 * 6.0)) / 2.0;
        assert!((high - low).abs() < 1e-9);
        assert!((f_one_term(m, beta, m) - high).abs() < 1e-12);
        let lf = LnFact::new(12);
        let direct = f_all_term(4, beta, 4, &lf);
        // The summation branch collapses to a single term at the junction.
        let low_manual = (ln_sinh(beta) - ln_sinh(5.0 * beta) + 4.0 * beta).exp();
        assert!((direct - low_manual).abs() < 1e-9);
    }

    #[test]
    fn purifier_monotonicity() {
        let mut prev = f64::INFINITY;
        for m in 4..=10 {
            let f = purifier_fidelity(FidelityKind::All, 4, m, 0.5).unwrap();
            assert!(f <= prev + 1e-12, "m={m}");
            prev = f;
        }
        let mut prev = 0.0;
        for n in 1..=6 {
            let f = purifier_fidelity(FidelityKind::One, n, 6, 0.5).unwrap();
            assert!(f >= prev - 1e-12, "n={n}");
            prev = f;
        }
    }

    #[test]
    fn purifier_approaches_asymptotic_limit() {
        let n = 200;
        for mu in [0.25, 0.5, 1.0] {
            let m = (mu * n as f64).round() as usize;
            let f = purifier_fidelity(FidelityKind::All, n, m, 0.5).unwrap();
            let phi = phi_asymptotic(mu, 0.5).unwrap();
            assert!((f - phi).abs() < 0.02, "mu={mu}: {f} vs {phi}");
        }
    }

    #[test]
    fn phi_examples() {
        let theta = 0.37f64;
        let left = 2.0 * theta * theta / (2.0 * theta * theta + theta * (1.0 - theta));
        let right = 2.0 * theta * theta / (theta * (1.0 + theta));
        assert!((left - right).abs() < 1e-12);
        assert!((phi_asymptotic(theta, theta).unwrap() - 2.0 * theta / (1.0 + theta)).abs() < 1e-12);
        assert!((phi_asymptotic(0.5, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((phi_asymptotic(1.0, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn unot_and_estimation_bounds() {
        assert!((unot_fidelity(1) - 2.0 / 3.0).abs() < 1e-12);
        assert!(unot_fidelity(1000) > 0.999);
        let b = estimation_bound(1, 2);
        assert!((b.value - 1.0 / 6.0).abs() < 1e-12);
        assert!((b.shifted_by_inverse_d - 2.0 / 3.0).abs() < 1e-12);
        let big = estimation_bound(100_000, 3);
        assert!((big.value - 2.0 / 3.0).abs() < 1e-4);
        // The shifted bound is the m -> infinity limit of the direct cloner
        // fidelity; Richardson in 1/m from two finite sizes hits it exactly
        // because f1(1, m, 2) is affine in 1/m.
        let (f8, _) = cloner_fidelities(1, 8, 2).unwrap();
        let (f4, _) = cloner_fidelities(1, 4, 2).unwrap();
        let extrapolated = 2.0 * f8 - f4;
        assert!((extrapolated - b.shifted_by_inverse_d).abs() < 1e-10);
    }

    #[test]
    fn rate_function_examples() {
        assert!(rate_function(&[0.7, 0.3], &[0.7, 0.3]).unwrap().abs() < 1e-12);
        let v = rate_function(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
        assert!(rate_function(&[0.9, 0.1], &[1.0, 0.0]).unwrap().is_infinite());
        assert!(rate_function(&[0.3, 0.7], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn error_prob_matches_rate_function() {
        let theta: f64 = 0.6;
        let rho = DensityMatrix::new(
            CMat::from_diagonal(&crate::mat::CVec::from_vec(vec![
                cr((1.0 + theta) / 2.0),
                cr((1.0 - theta) / 2.0),
            ])),
            vec![2],
        )
        .unwrap();
        let n = 2000;
        let k = error_prob(n, &rho, (0.0, 0.3)).unwrap();
        let inf_rate = rate_function(&[0.65, 0.35], &[0.8, 0.2]).unwrap();
        let empirical = -k.ln() / n as f64;
        assert!((empirical - inf_rate).abs() < 0.02, "{empirical} vs {inf_rate}");
        let all = error_prob(50, &rho, (0.0, 1.0)).unwrap();
        assert!((all - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fisher_matrix_at_bloch_points() {
        let partials: Vec<CMat> = (1..=3).map(|j| mat::pauli(j).scale(0.5)).collect();
        let center = quantum_fisher(&mat::eye(2).scale(0.5), &partials).unwrap();
        for j in 0..3 {
            assert!(max_abs_diff(&center.slds[j], &mat::pauli(j + 1)) < 1e-10);
        }
        assert!((&center.matrix - nalgebra::DMatrix::identity(3, 3)).abs().max() < 1e-10);

        let mut rng = seeded_rng(23);
        for _ in 0..5 {
            let x: Vec<f64> = (0..3).map(|_| 0.9 * (rng.random::<f64>() - 0.5)).collect();
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2 >= 0.8 {
                continue;
            }
            let mut rho = mat::eye(2).scale(0.5);
            for j in 0..3 {
                rho += mat::pauli(j + 1).scale(0.5 * x[j]);
            }
            let data = quantum_fisher(&rho, &partials).unwrap();
            for j in 0..3 {
                for l in 0..3 {
                    let want = if j == l { 1.0 } else { 0.0 } + x[j] * x[l] / (1.0 - r2);
                    assert!((data.matrix[(j, l)] - want).abs() < 1e-9);
                }
            }
            let eigs = data.matrix.clone().symmetric_eigen().eigenvalues;
            assert!(eigs.iter().all(|&e| e > 0.0));
        }
        let pure = projector(&basis_vec(2, 0));
        assert!(matches!(
            quantum_fisher(&pure, &partials),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn gill_massar_holds_for_axis_measurements() {
        let mut rng = seeded_rng(29);
        for _ in 0..5 {
            let x: Vec<f64> = (0..3).map(|_| 0.8 * (rng.random::<f64>() - 0.5)).collect();
            let mut c: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.1).collect();
            let total: f64 = c.iter().sum();
            c.iter_mut().for_each(|v| *v /= total);
            let mut rho = mat::eye(2).scale(0.5);
            for j in 0..3 {
                rho += mat::pauli(j + 1).scale(0.5 * x[j]);
            }
            let partials: Vec<CMat> = (1..=3).map(|j| mat::pauli(j).scale(0.5)).collect();
            let h = quantum_fisher(&rho, &partials).unwrap().matrix;
            let mut f = nalgebra::DMatrix::zeros(3, 3);
            for j in 0..3 {
                f[(j, j)] = c[j] / (1.0 - x[j] * x[j]);
            }
            let ratio = gill_massar_ratio(&h, &f).unwrap();
            assert!(ratio <= 2.0 + 1e-9);
            assert!((ratio - 1.0).abs() < 1e-8);
        }
    }
}

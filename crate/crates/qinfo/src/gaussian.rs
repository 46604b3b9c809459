//! Covariance-matrix calculus for Gaussian states: validity and positivity of
//! the partial transpose, the iterative two-sided separability decision, the
//! one-mode attenuation/amplification channel family, and its capacities.
//!
//! Normalization: a thermal state with mean occupation N has alpha =
//! 2(N + 1/2) 1, so the vacuum is the identity matrix.

use crate::density::gaussian_g;
use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::separability::{CriterionVerdict, Verdict, WitnessData};
use num_complex::Complex64;
use rand::Rng;

pub type RMat = nalgebra::DMatrix<f64>;
pub type RVec = nalgebra::DVector<f64>;

/// Symplectic form diag(J, ..., J) with J = [[0, 1], [-1, 0]] per mode.
pub fn sigma_form(n_modes: usize) -> RMat {
    let mut s = RMat::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        s[(2 * m, 2 * m + 1)] = 1.0;
        s[(2 * m + 1, 2 * m)] = -1.0;
    }
    s
}

fn complexify(a: &RMat) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| mat::cr(a[(i, j)]))
}

/// alpha + i sigma as a complex Hermitian matrix.
fn alpha_plus_i_sigma(alpha: &RMat, sigma: &RMat) -> CMat {
    CMat::from_fn(alpha.nrows(), alpha.ncols(), |i, j| {
        Complex64::new(alpha[(i, j)], sigma[(i, j)])
    })
}

fn min_eig_with_scale(h: &CMat) -> (f64, f64) {
    let (vals, _) = mat::eigh(h);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (*vals.last().unwrap(), scale)
}

/// A Gaussian state is fixed by its mean vector and correlation matrix; the
/// optional split records how the modes divide into two parties.
#[derive(Debug, Clone)]
pub struct GaussianState {
    pub modes: usize,
    pub mean: RVec,
    pub alpha: RMat,
    pub split: Option<(usize, usize)>,
}

impl GaussianState {
    pub fn new(mean: RVec, alpha: RMat, split: Option<(usize, usize)>) -> Result<Self> {
        let n = alpha.nrows();
        if n % 2 != 0 || alpha.ncols() != n {
            return Err(Error::DimMismatch(format!(
                "correlation matrix is {}x{}, need square even",
                n,
                alpha.ncols()
            )));
        }
        if mean.len() != n {
            return Err(Error::DimMismatch(format!(
                "mean length {} vs matrix size {n}",
                mean.len()
            )));
        }
        let modes = n / 2;
        if let Some((a, b)) = split {
            if a + b != modes {
                return Err(Error::DimMismatch(format!(
                    "split {a}+{b} does not cover {modes} modes"
                )));
            }
        }
        if !is_valid_covariance(&alpha)? {
            let h = alpha_plus_i_sigma(&alpha, &sigma_form(modes));
            let (min, scale) = min_eig_with_scale(&h);
            return Err(Error::NotPsd { min_eig: min, tol: mat::psd_tol(scale) });
        }
        Ok(Self { modes, mean, alpha, split })
    }
}

/// Heisenberg-principle check: alpha + i sigma must be positive.
pub fn is_valid_covariance(alpha: &RMat) -> Result<bool> {
    let n = alpha.nrows();
    if n % 2 != 0 || alpha.ncols() != n {
        return Err(Error::DimMismatch(format!(
            "matrix is {}x{}, need square even",
            n,
            alpha.ncols()
        )));
    }
    if (alpha - alpha.transpose()).amax() > 1e-9 {
        return Err(Error::BadParam("correlation matrix must be symmetric".into()));
    }
    let h = alpha_plus_i_sigma(alpha, &sigma_form(n / 2));
    let (min, scale) = min_eig_with_scale(&h);
    Ok(min >= -mat::psd_tol(scale))
}

/// Thermal correlation matrix 2(N + 1/2) 1 on one mode.
pub fn thermal_cov(n_occ: f64) -> RMat {
    RMat::identity(2, 2).scale(2.0 * n_occ + 1.0)
}

pub fn vacuum_cov(n_modes: usize) -> RMat {
    RMat::identity(2 * n_modes, 2 * n_modes)
}

/// Two-mode squeezed correlation matrix: cosh(2r) on the diagonal blocks and
/// sinh(2r) sigma_z off the diagonal. r = 0 is two vacua.
pub fn two_mode_squeezed_cov(r: f64) -> RMat {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    let mut a = RMat::zeros(4, 4);
    for i in 0..4 {
        a[(i, i)] = c;
    }
    a[(0, 2)] = s;
    a[(2, 0)] = s;
    a[(1, 3)] = -s;
    a[(3, 1)] = -s;
    a
}

/// Direct sum of two covariance blocks (a product state).
pub fn direct_sum(a: &RMat, b: &RMat) -> RMat {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = RMat::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    out
}

/// Partial transposition flips the sign of the symplectic form on party A:
/// entangled when alpha + i((-sigma_A) + sigma_B) dips negative. Positivity is
/// a full separability proof only for 1 x d mode splits.
pub fn gaussian_ppt(alpha: &RMat, split: (usize, usize)) -> Result<CriterionVerdict> {
    let (na, nb) = split;
    let n = alpha.nrows();
    if 2 * (na + nb) != n {
        return Err(Error::DimMismatch(format!(
            "split {split:?} does not cover {} rows",
            n
        )));
    }
    let mut sig = sigma_form(na + nb);
    for i in 0..2 * na {
        for j in 0..2 * na {
            sig[(i, j)] = -sig[(i, j)];
        }
    }
    let h = alpha_plus_i_sigma(alpha, &sig);
    let (min, scale) = min_eig_with_scale(&h);
    let tol = mat::psd_tol(scale);
    let decisive = na == 1 || nb == 1;
    if min < -tol {
        return Ok(CriterionVerdict {
            criterion: "gaussian-ppt".into(),
            verdict: Verdict::Entangled,
            definitive: true,
            note: format!("mode-reflected matrix has eigenvalue {min:.3e}"),
            witness: Some(WitnessData { margin: min, vector: None, operator: None }),
        });
    }
    Ok(CriterionVerdict {
        criterion: "gaussian-ppt".into(),
        verdict: if decisive { Verdict::Separable } else { Verdict::Inconclusive },
        definitive: decisive,
        note: if decisive {
            "positive; decisive for 1 x d mode splits".into()
        } else {
            "positive; necessary only at this split".into()
        },
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum GiedkeVerdict {
    Separable(usize),
    Entangled(usize),
    Undecided,
}

/// Two-sided iteration deciding Gaussian separability. Each round first tests
/// A_N - i sigma_A for a negative direction (entangled), then the stronger
/// A_N - |C_N| 1 - i sigma_A >= 0 (separable), and otherwise contracts
///   X_N = C_N (B_N - i sigma_B)^+ C_N^T,
///   A_{N+1} = B_{N+1} = A_N - Re X_N,  C_{N+1} = -Im X_N.
pub fn giedke_decide(alpha: &RMat, split: (usize, usize), max_iter: usize) -> Result<GiedkeVerdict> {
    let (na, nb) = split;
    let n = alpha.nrows();
    if 2 * (na + nb) != n || alpha.ncols() != n {
        return Err(Error::DimMismatch(format!(
            "split {split:?} does not cover {n} rows"
        )));
    }
    if !is_valid_covariance(alpha)? {
        let h = alpha_plus_i_sigma(alpha, &sigma_form(na + nb));
        let (min, scale) = min_eig_with_scale(&h);
        return Err(Error::NotPsd { min_eig: min, tol: mat::psd_tol(scale) });
    }
    let sig_a = complexify(&sigma_form(na));
    let mut a = complexify(&alpha.view((0, 0), (2 * na, 2 * na)).clone_owned());
    let mut b = complexify(&alpha.view((2 * na, 2 * na), (2 * nb, 2 * nb)).clone_owned());
    let mut c = complexify(&alpha.view((0, 2 * na), (2 * na, 2 * nb)).clone_owned());
    let mut sig_b = complexify(&sigma_form(nb));
    for iter in 0..max_iter {
        let test_ent = &a - &sig_a * Complex64::i();
        let (min_e, scale_e) = min_eig_with_scale(&test_ent);
        if min_e < -mat::psd_tol(scale_e) {
            return Ok(GiedkeVerdict::Entangled(iter));
        }
        let cnorm = mat::op_norm(&c);
        let test_sep = &test_ent - mat::eye(2 * na).scale(cnorm);
        let (min_s, scale_s) = min_eig_with_scale(&test_sep);
        if min_s >= -mat::psd_tol(scale_s) {
            return Ok(GiedkeVerdict::Separable(iter));
        }
        let m = &b - &sig_b * Complex64::i();
        let x = &c * mat::pinv(&m, 1e-10) * c.transpose();
        let re_x = CMat::from_fn(x.nrows(), x.ncols(), |i, j| mat::cr(x[(i, j)].re));
        let im_x = CMat::from_fn(x.nrows(), x.ncols(), |i, j| mat::cr(x[(i, j)].im));
        a -= &re_x;
        b = a.clone();
        c = -im_x;
        sig_b = sig_a.clone();
    }
    Ok(GiedkeVerdict::Undecided)
}

/// Random valid covariance on 1+1 modes: a rotated, noise-dressed two-mode
/// squeezed state or a product of dressed thermal blocks. The mix straddles
/// the separability boundary.
pub fn random_covariance_1x1(rng: &mut impl Rng) -> RMat {
    let rot = |th: f64| {
        RMat::from_row_slice(2, 2, &[th.cos(), th.sin(), -th.sin(), th.cos()])
    };
    if rng.random::<f64>() < 0.3 {
        let a = thermal_cov(2.0 * rng.random::<f64>());
        let b = thermal_cov(2.0 * rng.random::<f64>());
        let mut out = direct_sum(&a, &b);
        let eta = rng.random::<f64>();
        for i in 0..4 {
            out[(i, i)] += eta;
        }
        out
    } else {
        let r = rng.random::<f64>();
        let base = two_mode_squeezed_cov(r);
        let local = direct_sum(&rot(rng.random::<f64>() * std::f64::consts::TAU), &rot(
            rng.random::<f64>() * std::f64::consts::TAU,
        ));
        let mut out = &local * base * local.transpose();
        let eta = 1.5 * rng.random::<f64>();
        for i in 0..4 {
            out[(i, i)] += eta;
        }
        out
    }
}

/// One-mode Gaussian channel with gain k and added classical noise N_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannelParam {
    pub k: f64,
    pub n_c: f64,
}

impl GaussianChannelParam {
    pub fn new(k: f64, n_c: f64) -> Result<Self> {
        if n_c < 0.0 {
            return Err(Error::BadParam(format!("classical noise {n_c} must be >= 0")));
        }
        Ok(Self { k, n_c })
    }
}

/// Output occupation for a thermal input: N' = k^2 N + max(0, k^2 - 1) + N_c.
pub fn gaussian_channel_on_thermal(p: &GaussianChannelParam, n: f64) -> Result<f64> {
    if n < 0.0 {
        return Err(Error::BadParam(format!("occupation {n} must be >= 0")));
    }
    Ok(p.k * p.k * n + (p.k * p.k - 1.0).max(0.0) + p.n_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianCapacity {
    /// Classical capacity with unlimited shared entanglement.
    EntanglementAssisted,
    /// One-shot classical capacity g(N') - g(N0'); conjectured, not proven.
    OneShotClassical,
    /// Transposition-based upper bound on the quantum capacity.
    TranspositionBound,
    /// Coherent information of the channel on a thermal input.
    CoherentInfo,
    /// Closed-form quantum capacity of the one-mode family.
    Quantum,
}

impl GaussianCapacity {
    /// True for quantities whose formula is conjectured rather than proven.
    pub fn conjectured(&self) -> bool {
        matches!(self, GaussianCapacity::OneShotClassical)
    }
}

fn g_arg(x: f64) -> Result<f64> {
    if x < -1e-9 {
        return Err(Error::BadParam(format!("entropy argument {x} negative")));
    }
    Ok(gaussian_g(x.max(0.0)))
}

/// Capacity-like quantities of the one-mode channel at input occupation n.
/// The n argument is ignored by the two n-independent bounds.
pub fn gaussian_capacity(q: GaussianCapacity, p: &GaussianChannelParam, n: f64) -> Result<f64> {
    let k2 = p.k * p.k;
    match q {
        GaussianCapacity::EntanglementAssisted => {
            let np = gaussian_channel_on_thermal(p, n)?;
            let d = ((n + np + 1.0) * (n + np + 1.0) - 4.0 * k2 * n * (n + 1.0)).sqrt();
            Ok(gaussian_g(n) + gaussian_g(np)
                - g_arg((d + np - n - 1.0) / 2.0)?
                - g_arg((d - np + n - 1.0) / 2.0)?)
        }
        GaussianCapacity::OneShotClassical => {
            let np = gaussian_channel_on_thermal(p, n)?;
            let n0p = (k2 - 1.0).max(0.0) + p.n_c;
            Ok(gaussian_g(np) - gaussian_g(n0p))
        }
        GaussianCapacity::TranspositionBound => {
            let denom = (k2 - 1.0).abs() + 2.0 * p.n_c;
            if denom <= 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok(((k2 + 1.0).log2() - denom.log2()).max(0.0))
        }
        GaussianCapacity::CoherentInfo => {
            let np = gaussian_channel_on_thermal(p, n)?;
            let d = ((n + np + 1.0) * (n + np + 1.0) - 4.0 * k2 * n * (n + 1.0)).sqrt();
            Ok(gaussian_g(np)
                - g_arg((d + np - n - 1.0) / 2.0)?
                - g_arg((d - np + n - 1.0) / 2.0)?)
        }
        GaussianCapacity::Quantum => {
            let gap = (k2 - 1.0).abs();
            if gap < 1e-12 {
                if p.n_c <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                return Ok(-(p.n_c * std::f64::consts::E).log2());
            }
            Ok(k2.log2() - gap.log2() - gaussian_g(p.n_c / gap))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::seeded_rng;

    #[test]
    fn covariance_validity() {
        assert!(is_valid_covariance(&vacuum_cov(1)).unwrap());
        assert!(is_valid_covariance(&thermal_cov(3.0)).unwrap());
        assert!(!is_valid_covariance(&RMat::zeros(2, 2)).unwrap());
        for r in [0.0, 0.3, 1.0] {
            assert!(is_valid_covariance(&two_mode_squeezed_cov(r)).unwrap(), "r={r}");
        }
        assert!(is_valid_covariance(&RMat::zeros(3, 3)).is_err());
    }

    #[test]
    fn ppt_on_products_and_squeezed() {
        let prod = direct_sum(&thermal_cov(0.5), &thermal_cov(1.5));
        let v = gaussian_ppt(&prod, (1, 1)).unwrap();
        assert_eq!(v.verdict, Verdict::Separable);
        assert!(v.definitive);
        let sq = two_mode_squeezed_cov(0.5);
        assert_eq!(gaussian_ppt(&sq, (1, 1)).unwrap().verdict, Verdict::Entangled);
    }

    #[test]
    fn giedke_matches_examples() {
        let prod = direct_sum(&thermal_cov(0.5), &thermal_cov(1.5));
        match giedke_decide(&prod, (1, 1), 50).unwrap() {
            GiedkeVerdict::Separable(n) => assert!(n <= 1),
            other => panic!("expected separable, got {other:?}"),
        }
        match giedke_decide(&two_mode_squeezed_cov(0.5), (1, 1), 50).unwrap() {
            GiedkeVerdict::Entangled(_) => {}
            other => panic!("expected entangled, got {other:?}"),
        }
    }

    #[test]
    fn giedke_agrees_with_ppt_on_random_covariances() {
        let mut rng = seeded_rng(51);
        let mut both = [0usize; 2];
        for _ in 0..80 {
            let alpha = random_covariance_1x1(&mut rng);
            assert!(is_valid_covariance(&alpha).unwrap());
            let ppt = gaussian_ppt(&alpha, (1, 1)).unwrap().verdict;
            match giedke_decide(&alpha, (1, 1), 200).unwrap() {
                GiedkeVerdict::Separable(_) => {
                    assert_eq!(ppt, Verdict::Separable);
                    both[0] += 1;
                }
                GiedkeVerdict::Entangled(_) => {
                    assert_eq!(ppt, Verdict::Entangled);
                    both[1] += 1;
                }
                GiedkeVerdict::Undecided => {}
            }
        }
        assert!(both[0] > 5 && both[1] > 5, "verdict mix {both:?}");
    }

    #[test]
    fn thermal_output_examples() {
        let id = GaussianChannelParam::new(1.0, 0.0).unwrap();
        assert_eq!(gaussian_channel_on_thermal(&id, 4.2).unwrap(), 4.2);
        let amp = GaussianChannelParam::new(2.0, 0.0).unwrap();
        assert_eq!(gaussian_channel_on_thermal(&amp, 0.0).unwrap(), 3.0);
        let att = GaussianChannelParam::new(0.5, 1.0).unwrap();
        assert!((gaussian_channel_on_thermal(&att, 10.0).unwrap() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn capacity_formulas() {
        let id = GaussianChannelParam::new(1.0, 0.0).unwrap();
        for n in [0.5, 2.0, 10.0] {
            let ce = gaussian_capacity(GaussianCapacity::EntanglementAssisted, &id, n).unwrap();
            assert!((ce - 2.0 * gaussian_g(n)).abs() < 1e-10, "n={n}");
        }
        let cc1 = gaussian_capacity(GaussianCapacity::OneShotClassical, &id, 10.0).unwrap();
        assert!((cc1 - gaussian_g(10.0)).abs() < 1e-12);
        let noisy = GaussianChannelParam::new(1.0, 1.0).unwrap();
        let ct = gaussian_capacity(GaussianCapacity::TranspositionBound, &noisy, 0.0).unwrap();
        assert_eq!(ct, 0.0);
    }

    #[test]
    fn transposition_bound_continuous_at_unit_gain() {
        let nc = 0.3;
        let at = |k: f64| {
            gaussian_capacity(
                GaussianCapacity::TranspositionBound,
                &GaussianChannelParam::new(k, nc).unwrap(),
                0.0,
            )
            .unwrap()
        };
        let center = at(1.0);
        assert!((at(1.0 + 1e-6) - center).abs() < 1e-4);
        assert!((at(1.0 - 1e-6) - center).abs() < 1e-4);
        assert!((center - (2.0f64.log2() - (2.0 * nc).log2())).abs() < 1e-12);
    }

    #[test]
    fn quantum_capacity_unit_gain_limit() {
        let nc = 0.2;
        let exact = gaussian_capacity(
            GaussianCapacity::Quantum,
            &GaussianChannelParam::new(1.0, nc).unwrap(),
            0.0,
        )
        .unwrap();
        assert!((exact + (nc * std::f64::consts::E).log2()).abs() < 1e-12);
        let near = gaussian_capacity(
            GaussianCapacity::Quantum,
            &GaussianChannelParam::new(1.0 + 1e-7, nc).unwrap(),
            0.0,
        )
        .unwrap();
        assert!((near - exact).abs() < 1e-5);
    }

    #[test]
    fn assisted_dominates_one_shot() {
        for k in [0.6, 1.0, 1.7] {
            for nc in [0.0, 0.5] {
                for n in [0.5, 2.0, 8.0] {
                    let p = GaussianChannelParam::new(k, nc).unwrap();
                    let ce =
                        gaussian_capacity(GaussianCapacity::EntanglementAssisted, &p, n).unwrap();
                    let c1 =
                        gaussian_capacity(GaussianCapacity::OneShotClassical, &p, n).unwrap();
                    assert!(ce >= c1 - 1e-10, "k={k} nc={nc} n={n}: {ce} < {c1}");
                    assert!(c1 >= -1e-10);
                }
            }
        }
    }

    #[test]
    fn g_is_monotone_and_concave() {
        let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
        for w in xs.windows(3) {
            assert!(gaussian_g(w[1]) >= gaussian_g(w[0]));
            let mid = 0.5 * (gaussian_g(w[0]) + gaussian_g(w[2]));
            assert!(gaussian_g(w[1]) >= mid - 1e-12);
        }
    }

    #[test]
    fn state_constructor_validates() {
        let ok = GaussianState::new(RVec::zeros(4), two_mode_squeezed_cov(0.4), Some((1, 1)));
        assert!(ok.is_ok());
        let bad = GaussianState::new(RVec::zeros(2), RMat::zeros(2, 2), None);
        assert!(matches!(bad, Err(Error::NotPsd { .. })));
    }
}

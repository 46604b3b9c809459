//! Entanglement measures: pure-state entropy of entanglement, the two-qubit
//! concurrence construction, closed forms for the symmetric families, the
//! relative entropy of entanglement on those families, logarithmic negativity,
//! and a one-dimensional lower convex envelope.

use crate::density::{binary_entropy, partial_transpose, schmidt_decompose, DensityMatrix};
use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::states::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Wootters,
    ConvexHull,
    Direct,
}

#[derive(Debug, Clone)]
pub struct MeasureResult {
    /// Bits; nonnegative and at most log2(d) on d x d systems.
    pub value: f64,
    pub method: Method,
    pub context: String,
}

/// Entropy of entanglement of a bipartite unit vector: the entropy of either
/// marginal, equal to the entropy of the Schmidt weights.
pub fn pure_entanglement(psi: &crate::mat::CVec, dims: (usize, usize)) -> Result<f64> {
    let s = schmidt_decompose(psi, dims)?;
    Ok(-s
        .weights()
        .iter()
        .map(|&l| if l > 0.0 { l * l.log2() } else { 0.0 })
        .sum::<f64>())
}

fn spin_flip(rho: &CMat) -> CMat {
    let yy = mat::kron(&mat::pauli(2), &mat::pauli(2));
    let conj = rho.map(|z| z.conj());
    &yy * conj * &yy
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch(format!(
            "need a 2x2-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Two-qubit concurrence: with the spin-flipped state rt = (s2 x s2) conj(rho)
/// (s2 x s2), the ordered square roots l_i of eig(sqrt(rho) rt sqrt(rho)) give
/// C = max(0, l1 - l2 - l3 - l4).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let srho = mat::sqrtm_psd(rho.mat());
    let m = &srho * spin_flip(rho.mat()) * &srho;
    let (vals, _) = mat::eigh(&m);
    let l: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Exact two-qubit entanglement of formation H((1 + sqrt(1 - C^2))/2).
pub fn eof_wootters(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?;
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())))
}

/// Sub-regions of the OO-invariant parameter set: the separable square plus
/// three triangles. `LeftBottom` touches (-1, 0), `Right` touches (1, d), and
/// `Middle` is what remains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OoRegion {
    Square,
    LeftBottom,
    Right,
    Middle,
}

pub fn oo_region(d: usize, f: f64, t: f64) -> Result<OoRegion> {
    let df = d as f64;
    let tol = 1e-12;
    if !(-1.0 - tol..=1.0 + tol).contains(&f)
        || !(-tol..=df + tol).contains(&t)
        || f + tol < 2.0 * t / df - 1.0
    {
        return Err(Error::OutOfRegion(format!(
            "(f, t) = ({f}, {t}) outside the admissible set for d = {d}"
        )));
    }
    if f >= -tol && t <= 1.0 + tol {
        Ok(OoRegion::Square)
    } else if f <= tol && t <= 1.0 + f + tol {
        Ok(OoRegion::LeftBottom)
    } else if t + tol >= 1.0 && t <= 1.0 + (df - 1.0) * f + tol {
        Ok(OoRegion::Right)
    } else {
        Ok(OoRegion::Middle)
    }
}

fn werner_eof_value(f: f64) -> f64 {
    if f >= 0.0 {
        return 0.0;
    }
    binary_entropy(0.5 * (1.0 - (1.0 - f * f).max(0.0).sqrt()))
}

/// The entanglement curve of the isotropic family before taking the envelope:
/// zero up to t = 1, then H(gamma) + (1 - gamma) log2(d - 1) with
/// gamma = (sqrt(t) + sqrt((d-1)(d-t)))^2 / d^2.
pub fn isotropic_eof_raw(d: usize, t: f64) -> f64 {
    if t <= 1.0 {
        return 0.0;
    }
    let df = d as f64;
    let gamma = {
        let s = t.sqrt() + ((df - 1.0) * (df - t).max(0.0)).sqrt();
        (s * s) / (df * df)
    };
    binary_entropy(gamma) + (1.0 - gamma) * (df - 1.0).log2()
}

/// Isotropic entanglement of formation: the lower convex envelope of the raw
/// curve over [0, d], sampled densely with the query point pinned to the grid.
pub fn isotropic_eof(d: usize, t: f64) -> Result<f64> {
    let df = d as f64;
    if !(0.0..=df + 1e-12).contains(&t) {
        return Err(Error::OutOfRegion(format!("t = {t} outside [0, {d}]")));
    }
    if t <= 1.0 {
        return Ok(0.0);
    }
    let env = isotropic_eof_envelope(d, Some(t))?;
    Ok(env.eval(t))
}

pub fn isotropic_eof_envelope(d: usize, pin: Option<f64>) -> Result<Envelope> {
    let df = d as f64;
    let mut xs: Vec<f64> = (0..=2048).map(|i| df * i as f64 / 2048.0).collect();
    xs.push(1.0);
    xs.push(df);
    if let Some(t) = pin {
        xs.push(t.clamp(0.0, df));
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, isotropic_eof_raw(d, x))).collect();
    convex_envelope(&pts)
}

/// Closed-form entanglement of formation on the symmetric families. The OO
/// middle triangle has no known closed form and is refused.
pub fn eof_closed_form(p: &Family) -> Result<MeasureResult> {
    crate::states::family_state(p)?;
    match *p {
        Family::BellDiagonal { lambda } => {
            let lmax = lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let value = if lmax > 0.5 {
                binary_entropy(0.5 + (lmax * (1.0 - lmax)).sqrt())
            } else {
                0.0
            };
            Ok(MeasureResult {
                value,
                method: Method::ClosedForm,
                context: format!("bell-diagonal lmax={lmax}"),
            })
        }
        Family::Werner { d: _, f } => Ok(MeasureResult {
            value: werner_eof_value(f),
            method: Method::ClosedForm,
            context: format!("werner f={f}"),
        }),
        Family::Isotropic { d, t } => Ok(MeasureResult {
            value: isotropic_eof(d, t)?,
            method: Method::ConvexHull,
            context: format!("isotropic d={d} t={t}"),
        }),
        Family::OO { d, f, t } => match oo_region(d, f, t)? {
            OoRegion::Square => Ok(MeasureResult {
                value: 0.0,
                method: Method::ClosedForm,
                context: "oo separable square".into(),
            }),
            OoRegion::LeftBottom => Ok(MeasureResult {
                value: werner_eof_value(f),
                method: Method::ClosedForm,
                context: format!("oo left-bottom triangle, flip coordinate f={f}"),
            }),
            OoRegion::Right => Ok(MeasureResult {
                value: isotropic_eof(d, t)?,
                method: Method::ConvexHull,
                context: format!("oo right triangle, alignment coordinate t={t}"),
            }),
            OoRegion::Middle => Err(Error::Unsupported(
                "entanglement of formation has no known closed form on the middle triangle"
                    .into(),
            )),
        },
    }
}

fn kl3(c: &[f64; 3], cp: &[f64; 3]) -> f64 {
    let mut s = 0.0;
    for k in 0..3 {
        if c[k] > 1e-15 {
            s += c[k] * (c[k] / cp[k]).log2();
        }
    }
    s
}

fn oo_coeffs(d: usize, f: f64, t: f64) -> [f64; 3] {
    let df = d as f64;
    [t / df, (1.0 - f) / 2.0, (1.0 + f) / 2.0 - t / df]
}

fn isotropic_er_value(d: usize, t: f64) -> f64 {
    if t <= 1.0 {
        return 0.0;
    }
    let df = d as f64;
    df.log2() - (1.0 - t / df) * (df - 1.0).log2() - binary_entropy(t / df)
}

/// Relative entropy of entanglement on the symmetric families. The OO cases
/// are resolved by the segment geometry: each triangle projects its states
/// onto a separable boundary point, and the invariant-commutant structure
/// reduces the relative entropy to a three-block classical divergence.
pub fn er_closed_form(p: &Family) -> Result<MeasureResult> {
    crate::states::family_state(p)?;
    match *p {
        Family::BellDiagonal { lambda } => {
            let lmax = lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let value = if lmax > 0.5 { 1.0 - binary_entropy(lmax) } else { 0.0 };
            Ok(MeasureResult {
                value,
                method: Method::ClosedForm,
                context: format!("bell-diagonal lmax={lmax}"),
            })
        }
        Family::Werner { d: _, f } => {
            let value = if f < 0.0 { 1.0 - binary_entropy((1.0 + f) / 2.0) } else { 0.0 };
            Ok(MeasureResult {
                value,
                method: Method::ClosedForm,
                context: format!("werner f={f}"),
            })
        }
        Family::Isotropic { d, t } => Ok(MeasureResult {
            value: isotropic_er_value(d, t),
            method: Method::ClosedForm,
            context: format!("isotropic d={d} t={t}"),
        }),
        Family::OO { d, f, t } => {
            let df = d as f64;
            let (value, region) = match oo_region(d, f, t)? {
                OoRegion::Square => (0.0, "square"),
                OoRegion::Right => {
                    // Minimizer: shoot a line from the corner state at (1, d)
                    // through (f, t); it crosses the separable edge at t = 1.
                    let fstar = if (df - t).abs() < 1e-12 {
                        2.0 / (df + 1.0)
                    } else {
                        1.0 + (df - 1.0) * (f - 1.0) / (df - t)
                    };
                    let c = oo_coeffs(d, f, t);
                    let cp = oo_coeffs(d, fstar, 1.0);
                    (kl3(&c, &cp), "right triangle")
                }
                OoRegion::LeftBottom => {
                    // Minimizer: line from the corner at (-1, 0) through (f, t)
                    // meets the separable edge f = 0.
                    let tstar = if (1.0 + f).abs() < 1e-12 {
                        1.0 / (df + 1.0)
                    } else {
                        t / (1.0 + f)
                    };
                    let c = oo_coeffs(d, f, t);
                    let cp = oo_coeffs(d, 0.0, tstar);
                    (kl3(&c, &cp), "left-bottom triangle")
                }
                OoRegion::Middle => {
                    let c = oo_coeffs(d, f, t);
                    let cp = oo_coeffs(d, 0.0, 1.0);
                    (kl3(&c, &cp), "middle triangle, fixed corner minimizer")
                }
            };
            Ok(MeasureResult {
                value,
                method: Method::ClosedForm,
                context: format!("oo {region}, geometric rule"),
            })
        }
    }
}

/// The printed non-additivity pair for the normalized antisymmetric-projector
/// state: (single-copy value, two-copy value). The two-copy value dips below
/// twice the single-copy value for every d > 2; d = 2 is the equality case.
pub fn er_non_additivity_example(d: usize) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
    }
    let single = 1.0;
    let pair = if d == 2 {
        2.0
    } else {
        let df = d as f64;
        2.0 - ((2.0 * df - 1.0) / df).log2()
    };
    Ok((single, pair))
}

/// The explicit two-copy upper-bound pair used to demonstrate non-additivity:
/// the two-copy state P-/tr(P-) tensored with itself, and the symmetric
/// mixture of P+ x P+ and P- x P- that beats the obvious product ansatz.
/// Returns the relative entropy between them (equal to log2(2d/(d-1))).
pub fn er_non_additivity_witness(d: usize) -> Result<f64> {
    if !(2..=3).contains(&d) {
        return Err(Error::SizeGuard(format!(
            "witness computation kept to d <= 3, got {d}"
        )));
    }
    let pm = crate::states::antisym_projector(d);
    let pp = crate::states::sym_projector(d);
    let tm = mat::trace(&pm).re;
    let tp = mat::trace(&pp).re;
    let df = d as f64;
    let rho2 = mat::kron(&pm, &pm).scale(1.0 / (tm * tm));
    let sigma = mat::kron(&pp, &pp).scale((df + 1.0) / (2.0 * df * tp * tp))
        + mat::kron(&pm, &pm).scale((df - 1.0) / (2.0 * df * tm * tm));
    Ok(crate::density::relative_entropy(&rho2, &sigma))
}

/// log2 of the trace norm of the partial transpose; zero on states that stay
/// positive under it.
pub fn log_negativity(rho: &DensityMatrix, split: usize) -> Result<f64> {
    let dims = rho.dims();
    if split == 0 || split >= dims.len() {
        return Err(Error::DimMismatch(format!(
            "split {split} invalid for {} factors",
            dims.len()
        )));
    }
    let da: usize = dims[..split].iter().product();
    let db: usize = dims[split..].iter().product();
    let bi = rho.with_dims(vec![da, db])?;
    let pt = partial_transpose(&bi, 1)?;
    Ok(mat::trace_norm_h(&pt).log2())
}

/// Piecewise-linear greatest convex minorant of sampled points.
#[derive(Debug, Clone)]
pub struct Envelope {
    pts: Vec<(f64, f64)>,
}

impl Envelope {
    pub fn hull_points(&self) -> &[(f64, f64)] {
        &self.pts
    }

    /// Linear interpolation between hull vertices; clamps outside the range.
    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.pts;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let mut lo = 0;
        let mut hi = pts.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if pts[mid].0 <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x0, y0) = pts[lo];
        let (x1, y1) = pts[hi];
        if (x1 - x0).abs() < 1e-300 {
            return y0.min(y1);
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Lower-hull construction over samples sorted by abscissa.
pub fn convex_envelope(points: &[(f64, f64)]) -> Result<Envelope> {
    if points.len() < 3 {
        return Err(Error::BadParam(format!(
            "need at least 3 samples, got {}",
            points.len()
        )));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b when it sits on or above the chord a--p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 1e-15 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(Envelope { pts: hull })
}

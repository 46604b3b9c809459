//! Quantum channels in Kraus form, conversions to and from the Choi state,
//! isometric dilation, named noise channels, classical channels, and
//! projective-measurement instruments.

use crate::density::{partial_trace, DensityMatrix};
use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use crate::states::max_entangled;

/// Eigenvalues of the Choi state at or below this are dropped when extracting
/// a canonical Kraus family.
pub const KRAUS_CUTOFF: f64 = 1e-12;

const FLAG_TOL: f64 = 1e-9;

/// A completely positive map held as a list of outDim x inDim Kraus operators.
/// `trace_preserving` records whether sum K'K = 1 within 1e-9; `unital` whether
/// sum KK' = 1.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMat>,
    pub trace_preserving: bool,
    pub unital: bool,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::BadParam("empty Kraus list".into()));
        }
        let out_dim = kraus[0].nrows();
        let in_dim = kraus[0].ncols();
        for k in &kraus {
            if k.nrows() != out_dim || k.ncols() != in_dim {
                return Err(Error::DimMismatch(format!(
                    "Kraus operator is {}x{}, expected {}x{}",
                    k.nrows(),
                    k.ncols(),
                    out_dim,
                    in_dim
                )));
            }
        }
        let mut ktk = CMat::zeros(in_dim, in_dim);
        for k in &kraus {
            ktk += k.adjoint() * k;
        }
        let trace_preserving = mat::max_abs_diff(&ktk, &mat::eye(in_dim)) <= FLAG_TOL;
        let unital = if in_dim == out_dim {
            let mut kkt = CMat::zeros(out_dim, out_dim);
            for k in &kraus {
                kkt += k * k.adjoint();
            }
            mat::max_abs_diff(&kkt, &mat::eye(out_dim)) <= FLAG_TOL
        } else {
            false
        };
        Ok(Self { in_dim, out_dim, kraus, trace_preserving, unital })
    }

    /// Like `new` but refuses maps that are not trace preserving.
    pub fn new_trace_preserving(kraus: Vec<CMat>) -> Result<Self> {
        let ch = Self::new(kraus)?;
        if !ch.trace_preserving {
            let mut ktk = CMat::zeros(ch.in_dim, ch.in_dim);
            for k in &ch.kraus {
                ktk += k.adjoint() * k;
            }
            return Err(Error::NotTracePreserving {
                deviation: mat::max_abs_diff(&ktk, &mat::eye(ch.in_dim)),
            });
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![mat::eye(d)]).unwrap()
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// sum_j K_j rho K_j'.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.in_dim {
            return Err(Error::DimMismatch(format!(
                "state dim {} vs channel input {}",
                rho.dim(),
                self.in_dim
            )));
        }
        Ok(DensityMatrix::new_unchecked(self.apply(rho.mat()), vec![self.out_dim]))
    }

    /// Adjoint action on observables: sum_j K_j' A K_j.
    pub fn apply_heisenberg(&self, a: &CMat) -> CMat {
        let mut out = CMat::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            out += k.adjoint() * a * k;
        }
        out
    }

    /// self after other.
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if other.out_dim != self.in_dim {
            return Err(Error::DimMismatch(format!(
                "composition needs inner dims to match: {} vs {}",
                other.out_dim, self.in_dim
            )));
        }
        let mut ops = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                ops.push(a * b);
            }
        }
        KrausChannel::new(ops)
    }

    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let mut ops = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                ops.push(mat::kron(a, b));
            }
        }
        KrausChannel::new(ops).unwrap()
    }

    /// Re-extracts a minimal Kraus family (at most inDim*outDim operators)
    /// from the Choi eigendecomposition.
    pub fn canonicalize(&self) -> Result<KrausChannel> {
        channel_from_choi(&choi_from_channel(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    Schrodinger,
    Heisenberg,
}

pub fn apply_channel(t: &KrausChannel, m: &CMat, picture: Picture) -> Result<CMat> {
    let need = match picture {
        Picture::Schrodinger => t.in_dim,
        Picture::Heisenberg => t.out_dim,
    };
    if m.nrows() != need || m.ncols() != need {
        return Err(Error::DimMismatch(format!(
            "operator is {}x{}, channel expects {}",
            m.nrows(),
            m.ncols(),
            need
        )));
    }
    Ok(match picture {
        Picture::Schrodinger => t.apply(m),
        Picture::Heisenberg => t.apply_heisenberg(m),
    })
}

/// Choi state (Id x T)|Omega><Omega| on input (x) output, as a density matrix
/// whose first marginal is 1/inDim exactly when T is trace preserving.
pub fn choi_from_channel(t: &KrausChannel) -> DensityMatrix {
    let d = t.in_dim;
    let omega = max_entangled(d);
    let n = d * t.out_dim;
    let mut c = CMat::zeros(n, n);
    for k in t.kraus() {
        let v = mat::kron(&mat::eye(d), k) * &omega;
        c += mat::outer(&v, &v);
    }
    DensityMatrix::new_unchecked(c, vec![d, t.out_dim])
}

/// Choi state of an arbitrary linear map given by a closure acting on matrix
/// units; the result is Hermitian only when the map is Hermiticity preserving.
pub fn choi_of_map(d_in: usize, f: impl Fn(&CMat) -> CMat) -> CMat {
    let probe = f(&CMat::zeros(d_in, d_in));
    let d_out = probe.nrows();
    let n = d_in * d_out;
    let mut c = CMat::zeros(n, n);
    for j in 0..d_in {
        for k in 0..d_in {
            let mut unit = CMat::zeros(d_in, d_in);
            unit[(j, k)] = mat::cr(1.0);
            let img = f(&unit);
            for a in 0..d_out {
                for b in 0..d_out {
                    c[(j * d_out + a, k * d_out + b)] += img[(a, b)] / d_in as f64;
                }
            }
        }
    }
    c
}

/// Inverts the state-channel correspondence: the input is a bipartite state
/// whose first marginal must be invertible; undoing that marginal reduces the
/// state to a Choi form whose eigenvectors reshape into Kraus operators.
pub fn channel_from_choi(rho: &DensityMatrix) -> Result<KrausChannel> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::DimMismatch(format!(
            "need a bipartite state, got factors {dims:?}"
        )));
    }
    let (d1, d2) = (dims[0], dims[1]);
    let marg = partial_trace(rho, 1)?;
    let (mvals, _) = mat::eigh(marg.mat());
    let cutoff = 1e-10 * mvals[0].abs().max(1.0);
    for (i, &v) in mvals.iter().enumerate() {
        if v <= cutoff {
            return Err(Error::SingularMarginal { eigenvalue: v, index: i });
        }
    }
    let inv_sqrt = mat::func_h(marg.mat(), |x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 });
    let big = mat::kron(&inv_sqrt, &mat::eye(d2));
    let c = (&big * rho.mat() * &big).scale(1.0 / d1 as f64);
    let (vals, vecs) = mat::eigh(&c);
    let mut kraus = Vec::new();
    for (m, &mu) in vals.iter().enumerate() {
        if mu <= KRAUS_CUTOFF {
            continue;
        }
        let v = vecs.column(m);
        let mut k = CMat::zeros(d2, d1);
        let a = mat::cr((d1 as f64 * mu).sqrt());
        for j in 0..d1 {
            for b in 0..d2 {
                k[(b, j)] = a * v[j * d2 + b];
            }
        }
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}

/// Checks complete positivity of a map via positivity of its Choi matrix.
pub fn cp_check(choi: &CMat) -> Result<()> {
    let (vals, _) = mat::eigh(choi);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = *vals.last().unwrap();
    if min < -mat::psd_tol(scale) {
        return Err(Error::NotCompletelyPositive { min_eig: min });
    }
    Ok(())
}

/// Isometric dilation V with sum_j K_j (x) |j>_env over the canonical Kraus
/// family; the environment is the second tensor factor of the output.
pub fn dilate(t: &KrausChannel) -> Result<CMat> {
    if !t.trace_preserving {
        let mut ktk = CMat::zeros(t.in_dim, t.in_dim);
        for k in t.kraus() {
            ktk += k.adjoint() * k;
        }
        return Err(Error::NotTracePreserving {
            deviation: mat::max_abs_diff(&ktk, &mat::eye(t.in_dim)),
        });
    }
    let canon = t.canonicalize()?;
    let env = canon.kraus().len();
    let mut v = CMat::zeros(canon.out_dim * env, canon.in_dim);
    for (j, k) in canon.kraus().iter().enumerate() {
        let e = mat::basis_vec(env, j);
        let emat = CMat::from_column_slice(env, 1, e.as_slice());
        let block = mat::kron(k, &emat);
        v += block;
    }
    let gram = v.adjoint() * &v;
    let dev = mat::max_abs_diff(&gram, &mat::eye(canon.in_dim));
    if dev > 1e-9 {
        return Err(Error::NotIsometric { deviation: dev, gram: Box::new(gram) });
    }
    Ok(v)
}

/// Mixes the input toward the maximally mixed state: rho -> (1-theta) rho +
/// theta tr(rho) 1/d. theta = 0 is the identity.
pub fn depolarizing(d: usize, theta: f64) -> Result<KrausChannel> {
    check_noise_params(d, theta)?;
    let mut kraus = Vec::with_capacity(d * d);
    let df = d as f64;
    kraus.push(mat::eye(d).scale((1.0 - theta + theta / (df * df)).sqrt()));
    let w = theta.sqrt() / df;
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            kraus.push(mat::weyl_op(d, a, b).scale(w));
        }
    }
    KrausChannel::new_trace_preserving(kraus)
}

/// Replaces the input with a flag state |e> = |d> with probability theta;
/// output dimension d + 1.
pub fn erasure(d: usize, theta: f64) -> Result<KrausChannel> {
    check_noise_params(d, theta)?;
    let mut embed = CMat::zeros(d + 1, d);
    for i in 0..d {
        embed[(i, i)] = mat::cr((1.0 - theta).sqrt());
    }
    let mut kraus = vec![embed];
    let s = theta.sqrt();
    for i in 0..d {
        let mut k = CMat::zeros(d + 1, d);
        k[(d, i)] = mat::cr(s);
        kraus.push(k);
    }
    KrausChannel::new_trace_preserving(kraus)
}

fn check_noise_params(d: usize, theta: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::BadParam(format!("noise parameter {theta} outside [0, 1]")));
    }
    Ok(())
}

/// The three extreme channels commuting with conjugation by real orthogonal
/// matrices; index 0 is the identity, 1 maps A to (tr(A) 1 - A^T)/(d-1),
/// 2 is the remaining extreme point. Their Choi states are the normalized
/// projectors of `states::oo_projectors`.
pub fn oo_channel(index: usize, d: usize) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::BadParam(format!("dimension {d} must be at least 2")));
    }
    if index > 2 {
        return Err(Error::BadParam(format!("index {index} out of 0..=2")));
    }
    let (p0, p1, p2) = crate::states::oo_projectors(d);
    let p = match index {
        0 => p0,
        1 => p1,
        _ => p2,
    };
    let tr = mat::trace(&p).re;
    let choi = DensityMatrix::new_unchecked(p.scale(1.0 / tr), vec![d, d]);
    channel_from_choi(&choi)
}

/// Column-stochastic transition matrix: entry (x, y) is the probability of
/// output x given input y.
#[derive(Debug, Clone)]
pub struct ClassicalChannel {
    t: nalgebra::DMatrix<f64>,
}

impl ClassicalChannel {
    pub fn new(t: nalgebra::DMatrix<f64>) -> Result<Self> {
        for y in 0..t.ncols() {
            let mut s = 0.0;
            for x in 0..t.nrows() {
                let v = t[(x, y)];
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    return Err(Error::BadParam(format!(
                        "transition entry ({x}, {y}) = {v} outside [0, 1]"
                    )));
                }
                s += v;
            }
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::BadParam(format!("column {y} sums to {s}, not 1")));
            }
        }
        Ok(Self { t })
    }

    /// Binary symmetric channel with crossover probability p.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadParam(format!("crossover {p} outside [0, 1]")));
        }
        Self::new(nalgebra::DMatrix::from_row_slice(2, 2, &[1.0 - p, p, p, 1.0 - p]))
    }

    pub fn matrix(&self) -> &nalgebra::DMatrix<f64> {
        &self.t
    }

    pub fn n_inputs(&self) -> usize {
        self.t.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.t.nrows()
    }

    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.t.ncols() {
            return Err(Error::DimMismatch(format!(
                "distribution length {} vs {} inputs",
                p.len(),
                self.t.ncols()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(p);
        Ok((&self.t * v).iter().copied().collect())
    }
}

/// A measurement with a quantum operation attached to every outcome; the sum
/// of the branch maps is trace preserving.
#[derive(Debug, Clone)]
pub struct Instrument {
    branches: Vec<KrausChannel>,
}

impl Instrument {
    pub fn new(branches: Vec<KrausChannel>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::BadParam("instrument needs at least one branch".into()));
        }
        let d = branches[0].in_dim();
        let mut total = CMat::zeros(d, d);
        for b in &branches {
            if b.in_dim() != d {
                return Err(Error::DimMismatch("branch input dims differ".into()));
            }
            for k in b.kraus() {
                total += k.adjoint() * k;
            }
        }
        let dev = mat::max_abs_diff(&total, &mat::eye(d));
        if dev > FLAG_TOL {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[KrausChannel] {
        &self.branches
    }

    pub fn n_outcomes(&self) -> usize {
        self.branches.len()
    }

    pub fn probabilities(&self, rho: &CMat) -> Vec<f64> {
        self.branches
            .iter()
            .map(|b| mat::trace(&b.apply(rho)).re)
            .collect()
    }

    /// Normalized post-measurement state of one outcome together with its
    /// probability.
    pub fn post_state(&self, rho: &CMat, outcome: usize) -> Result<(f64, CMat)> {
        let raw = self.branches[outcome].apply(rho);
        let p = mat::trace(&raw).re;
        if p <= 1e-14 {
            return Err(Error::ZeroProbability { prob: p });
        }
        Ok((p, raw.scale(1.0 / p)))
    }

    /// The nonselective channel: sum of all branches.
    pub fn total_channel(&self) -> KrausChannel {
        let mut ops = Vec::new();
        for b in &self.branches {
            ops.extend(b.kraus().iter().cloned());
        }
        KrausChannel::new(ops).unwrap()
    }
}

/// Measurement instrument of a complete family of orthogonal projectors:
/// branch x sends rho to E_x rho E_x.
pub fn lueders_instrument(projectors: &[CMat]) -> Result<Instrument> {
    if projectors.is_empty() {
        return Err(Error::BadParam("empty projector list".into()));
    }
    let d = projectors[0].nrows();
    let mut sum = CMat::zeros(d, d);
    for (x, e) in projectors.iter().enumerate() {
        if e.nrows() != d || e.ncols() != d {
            return Err(Error::DimMismatch("projector dims differ".into()));
        }
        if mat::max_abs_diff(&(e * e), e) > 1e-9 {
            return Err(Error::BadParam(format!("input {x} is not idempotent")));
        }
        if mat::max_abs_diff(e, &e.adjoint()) > 1e-9 {
            return Err(Error::BadParam(format!("input {x} is not Hermitian")));
        }
        sum += e;
    }
    if mat::max_abs_diff(&sum, &mat::eye(d)) > 1e-9 {
        return Err(Error::BadParam("projectors do not sum to the identity".into()));
    }
    let branches = projectors
        .iter()
        .map(|e| KrausChannel::new(vec![e.clone()]).unwrap())
        .collect();
    Instrument::new(branches)
}

/// Computational-basis projective instrument on C^d.
pub fn basis_instrument(d: usize) -> Instrument {
    let projectors: Vec<CMat> = (0..d)
        .map(|i| mat::projector(&mat::basis_vec(d, i)))
        .collect();
    lueders_instrument(&projectors).unwrap()
}

pub fn plus_state() -> CVec {
    CVec::from_vec(vec![mat::cr(1.0 / 2f64.sqrt()), mat::cr(1.0 / 2f64.sqrt())])
}

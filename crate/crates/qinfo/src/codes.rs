//! Graph codes over Z_d: phase isometries built from adjacency matrices,
//! detection of error configurations through a linear system, and the
//! operator-factorization condition they are equivalent to.

use std::f64::consts::PI;

use crate::cloning::guarded_dim;
use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use num_complex::Complex64;

/// Exhaustive Z_d searches refuse to enumerate more than this many vectors.
pub const ENUM_GUARD: usize = 1_000_000;

/// A weighted graph on input and output vertices, adjacency over Z_d.
/// Vertices 0..n_in are inputs, n_in..n_in+n_out outputs.
#[derive(Debug, Clone)]
pub struct CodeGraph {
    d: usize,
    n_in: usize,
    n_out: usize,
    gamma: Vec<Vec<u64>>,
}

impl CodeGraph {
    /// Edges are (u, v, weight) with global vertex indices and weight in Z_d.
    pub fn new(d: usize, n_in: usize, n_out: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadParam(format!("alphabet size {d} must be at least 2")));
        }
        if n_out == 0 {
            return Err(Error::BadParam("need at least one output vertex".into()));
        }
        let total = n_in + n_out;
        let mut gamma = vec![vec![0u64; total]; total];
        for &(u, v, w) in edges {
            if u >= total || v >= total {
                return Err(Error::BadParam(format!(
                    "vertex pair ({u}, {v}) outside 0..{total}"
                )));
            }
            if w >= d as u64 {
                return Err(Error::BadParam(format!("weight {w} outside Z_{d}")));
            }
            gamma[u][v] = w;
            gamma[v][u] = w;
        }
        Ok(Self { d, n_in, n_out, gamma })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.gamma
    }

    /// The encoding matrix with entries d^{-n_out/2} exp(i pi/d j^T Gamma j),
    /// j running over joint input/output digit strings. Returns the matrix
    /// only if it passes the Gram test; otherwise the error carries V'V.
    pub fn build_isometry(&self) -> Result<CMat> {
        guarded_dim(self.d, self.n_in + self.n_out)?;
        let dim_in = self.d.pow(self.n_in as u32);
        let dim_out = self.d.pow(self.n_out as u32);
        let norm = (dim_out as f64).sqrt().recip();
        let mut v = CMat::zeros(dim_out, dim_in);
        let two_d = 2 * self.d as u64;
        for col in 0..dim_in {
            let jx = digits(col, self.d, self.n_in);
            for row in 0..dim_out {
                let jy = digits(row, self.d, self.n_out);
                let j: Vec<u64> = jx.iter().chain(jy.iter()).copied().collect();
                let mut quad: u64 = 0;
                for (u, &ju) in j.iter().enumerate() {
                    if ju == 0 {
                        continue;
                    }
                    for (w, &jw) in j.iter().enumerate() {
                        quad = (quad + self.gamma[u][w] * ju % two_d * jw) % two_d;
                    }
                }
                v[(row, col)] =
                    Complex64::from_polar(norm, PI * quad as f64 / self.d as f64);
            }
        }
        let gram = v.adjoint() * &v;
        let deviation = mat::max_abs_diff(&gram, &mat::eye(dim_in));
        if deviation > 1e-9 {
            return Err(Error::NotIsometric { deviation, gram: Box::new(gram) });
        }
        Ok(v)
    }

    /// True when every Z_d solution of the outside-constraint system is
    /// trivial on the inputs and invisible to them: the code then detects any
    /// error supported on the output subset z (0-based output indices).
    pub fn detects_configuration(&self, z: &[usize]) -> Result<bool> {
        let z = self.validate_outputs(z)?;
        let unknowns: Vec<usize> = (0..self.n_in)
            .chain(z.iter().map(|&o| self.n_in + o))
            .collect();
        let outside: Vec<usize> = (0..self.n_out)
            .filter(|o| !z.contains(o))
            .map(|o| self.n_in + o)
            .collect();
        let rows: Vec<Vec<u64>> = outside
            .iter()
            .map(|&k| unknowns.iter().map(|&l| self.gamma[k][l]).collect())
            .collect();
        let solutions = if is_prime(self.d) {
            nullspace_mod_p(&rows, unknowns.len(), self.d as u64)
        } else {
            self.enumerate_kernel(&rows, unknowns.len())?
        };
        Ok(self.solutions_are_invisible(&z, &unknowns, &solutions))
    }

    fn solutions_are_invisible(
        &self,
        z: &[usize],
        unknowns: &[usize],
        solutions: &[Vec<u64>],
    ) -> bool {
        let dd = self.d as u64;
        for g in solutions {
            if g[..self.n_in].iter().any(|&x| x != 0) {
                return false;
            }
            for k in 0..self.n_in {
                let mut acc = 0u64;
                for (i, &o) in z.iter().enumerate() {
                    let l = unknowns[self.n_in + i];
                    debug_assert_eq!(l, self.n_in + o);
                    acc = (acc + self.gamma[k][l] * g[self.n_in + i]) % dd;
                }
                if acc != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn enumerate_kernel(&self, rows: &[Vec<u64>], nu: usize) -> Result<Vec<Vec<u64>>> {
        let total = self
            .d
            .checked_pow(nu as u32)
            .filter(|&t| t <= ENUM_GUARD)
            .ok_or_else(|| {
                Error::SizeGuard(format!("{}^{} assignments exceed {ENUM_GUARD}", self.d, nu))
            })?;
        let dd = self.d as u64;
        let mut sols = Vec::new();
        'outer: for idx in 0..total {
            let g = digits(idx, self.d, nu);
            for row in rows {
                let acc: u64 = row.iter().zip(&g).map(|(&c, &x)| c * x % dd).sum::<u64>() % dd;
                if acc != 0 {
                    continue 'outer;
                }
            }
            sols.push(g);
        }
        Ok(sols)
    }

    /// Detects every configuration of size at most 2k.
    pub fn corrects_k_errors(&self, k: usize) -> Result<bool> {
        if 2 * k > self.n_out {
            return Err(Error::BadParam(format!(
                "2k = {} exceeds the {} outputs",
                2 * k,
                self.n_out
            )));
        }
        for size in 0..=(2 * k) {
            for z in subsets_of_size(self.n_out, size) {
                if !self.detects_configuration(&z)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn validate_outputs(&self, z: &[usize]) -> Result<Vec<usize>> {
        let mut sorted = z.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != z.len() {
            return Err(Error::BadParam("repeated output index".into()));
        }
        if sorted.iter().any(|&o| o >= self.n_out) {
            return Err(Error::BadParam(format!(
                "output index outside 0..{}",
                self.n_out
            )));
        }
        Ok(sorted)
    }
}

fn digits(mut idx: usize, d: usize, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for pos in (0..len).rev() {
        out[pos] = (idx % d) as u64;
        idx /= d;
    }
    out
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Basis of the kernel of a matrix over F_p via row reduction.
fn nullspace_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(sel) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, sel);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for x in &mut m[rank] {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + (p - factor) * m[rank][c]) % p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut g = vec![0u64; ncols];
        g[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            g[pc] = (p - m[r][free]) % p;
        }
        basis.push(g);
    }
    basis
}

fn subsets_of_size(m: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn recurse(m: usize, size: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for v in start..m {
            if m - v < size - current.len() {
                break;
            }
            current.push(v);
            recurse(m, size, v + 1, current, out);
            current.pop();
        }
    }
    recurse(m, size, 0, &mut current, &mut out);
    out
}

/// All subsets of the outputs, smallest first; handy for detection profiles.
pub fn output_subsets(n_out: usize) -> Vec<Vec<usize>> {
    (0..=n_out).flat_map(|s| subsets_of_size(n_out, s)).collect()
}

/// V'F_j F_k V must be a multiple of the identity for every operator pair;
/// returns the matrix of those multiples when the condition holds.
pub fn kl_condition(v: &CMat, error_ops: &[CMat]) -> Result<Option<CMat>> {
    let dim_out = v.nrows();
    let dim_in = v.ncols();
    if error_ops.iter().any(|f| f.nrows() != dim_out || f.ncols() != dim_out) {
        return Err(Error::DimMismatch(
            "error operators must act on the output space".into(),
        ));
    }
    let n = error_ops.len();
    let mut omega = CMat::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let a = v.adjoint() * error_ops[j].adjoint() * &error_ops[k] * v;
            let w = mat::trace(&a) / dim_in as f64;
            let dev = mat::max_abs_diff(&a, &(mat::eye(dim_in) * w));
            if dev > 1e-9 {
                return Ok(None);
            }
            omega[(j, k)] = w;
        }
    }
    Ok(Some(omega))
}

/// Products of shift/clock operators supported on at most max_weight of the
/// m output sites (identity included), in the site ordering of the isometry.
pub fn localized_pauli_products(d: usize, m: usize, max_weight: usize) -> Result<Vec<CMat>> {
    let dim = guarded_dim(d, m)?;
    let mut ops = vec![mat::eye(dim)];
    let site_ops: Vec<CMat> = (0..d * d)
        .filter(|&i| i != 0)
        .map(|i| mat::weyl_op(d, i / d, i % d))
        .collect();
    for weight in 1..=max_weight.min(m) {
        for support in subsets_of_size(m, weight) {
            let mut choices = vec![0usize; weight];
            loop {
                let mut op = mat::eye(1);
                for site in 0..m {
                    let factor = if let Some(pos) = support.iter().position(|&s| s == site) {
                        site_ops[choices[pos]].clone()
                    } else {
                        mat::eye(d)
                    };
                    op = mat::kron(&op, &factor);
                }
                ops.push(op);
                let mut carry = true;
                for slot in choices.iter_mut().rev() {
                    if carry {
                        *slot += 1;
                        if *slot == site_ops.len() {
                            *slot = 0;
                        } else {
                            carry = false;
                        }
                    }
                }
                if carry {
                    break;
                }
            }
        }
    }
    Ok(ops)
}

/// The two five-output qubit graphs: a hub over a pentagon and a wheel-like
/// variant. Input vertex 0, outputs 1..=5 in both.
pub fn five_bit_code_graphs() -> (CodeGraph, CodeGraph) {
    let pentagon = CodeGraph::new(
        2,
        1,
        5,
        &[
            (0, 1, 1),
            (0, 2, 1),
            (0, 3, 1),
            (0, 4, 1),
            (0, 5, 1),
            (1, 2, 1),
            (2, 3, 1),
            (3, 5, 1),
            (5, 4, 1),
            (4, 1, 1),
        ],
    )
    .unwrap();
    let wheel = CodeGraph::new(
        2,
        1,
        5,
        &[
            (0, 1, 1),
            (1, 3, 1),
            (3, 2, 1),
            (2, 0, 1),
            (4, 0, 1),
            (4, 1, 1),
            (4, 5, 1),
            (5, 2, 1),
            (5, 3, 1),
        ],
    )
    .unwrap();
    (pentagon, wheel)
}

/// Parse the plain-text graph format: header `d N M`, then one `u v [weight]`
/// edge per line (0-based, inputs first). `#` comments and blank lines are
/// skipped; anything else is reported with its line number.
pub fn parse_graph(text: &str) -> Result<CodeGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_usize = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad {what} `{s}`"),
            })
        };
        if header.is_none() {
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("header needs `d N M`, got {} fields", fields.len()),
                });
            }
            header = Some((
                parse_usize(fields[0], "alphabet size")?,
                parse_usize(fields[1], "input count")?,
                parse_usize(fields[2], "output count")?,
            ));
            continue;
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("edge needs `u v [weight]`, got {} fields", fields.len()),
            });
        }
        let u = parse_usize(fields[0], "vertex")?;
        let v = parse_usize(fields[1], "vertex")?;
        let w = if fields.len() == 3 {
            parse_usize(fields[2], "weight")? as u64
        } else {
            1
        };
        let key = (u.min(v), u.max(v));
        if seen.contains(&key) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("edge ({u}, {v}) already given"),
            });
        }
        seen.push(key);
        let (d, n, m) = header.unwrap();
        if u >= n + m || v >= n + m {
            return Err(Error::Parse {
                line: line_no,
                message: format!("vertex outside 0..{}", n + m),
            });
        }
        if w >= d as u64 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("weight {w} outside Z_{d}"),
            });
        }
        edges.push((u, v, w));
    }
    let (d, n, m) = header.ok_or(Error::Parse {
        line: 1,
        message: "missing `d N M` header".into(),
    })?;
    CodeGraph::new(d, n, m, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::max_abs;

    #[test]
    fn bare_pair_is_not_isometric_but_fourier_wire_is() {
        let bare = CodeGraph::new(2, 1, 1, &[]).unwrap();
        match bare.build_isometry() {
            Err(Error::NotIsometric { deviation, gram }) => {
                assert!((deviation - 1.0).abs() < 1e-12);
                assert!((gram[(0, 1)].re - 1.0).abs() < 1e-12);
            }
            other => panic!("expected Gram failure, got {other:?}"),
        }
        for d in [2usize, 3, 5] {
            let wire = CodeGraph::new(d, 1, 1, &[(0, 1, 1)]).unwrap();
            let v = wire.build_isometry().unwrap();
            assert_eq!(v.nrows(), d);
            for r in 0..d {
                for c in 0..d {
                    assert!((v[(r, c)].norm() - (d as f64).sqrt().recip()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn five_bit_graphs_are_isometric() {
        let (a, b) = five_bit_code_graphs();
        for g in [&a, &b] {
            let v = g.build_isometry().unwrap();
            assert_eq!((v.nrows(), v.ncols()), (32, 2));
        }
    }

    #[test]
    fn five_bit_detection_profile() {
        let (a, b) = five_bit_code_graphs();
        for g in [&a, &b] {
            assert!(g.detects_configuration(&[]).unwrap());
            for z in output_subsets(5) {
                if z.len() <= 2 {
                    assert!(g.detects_configuration(&z).unwrap(), "missed {z:?}");
                }
            }
            let mut some_triple_fails = false;
            for z in subsets_of_size(5, 3) {
                if !g.detects_configuration(&z).unwrap() {
                    some_triple_fails = true;
                }
            }
            assert!(some_triple_fails);
            assert!(g.corrects_k_errors(1).unwrap());
            assert!(!g.corrects_k_errors(2).unwrap());
            assert!(g.corrects_k_errors(0).unwrap());
        }
    }

    #[test]
    fn five_bit_profiles_coincide() {
        let (a, b) = five_bit_code_graphs();
        for z in output_subsets(5) {
            assert_eq!(
                a.detects_configuration(&z).unwrap(),
                b.detects_configuration(&z).unwrap(),
                "profiles differ at {z:?}"
            );
        }
    }

    #[test]
    fn detection_is_monotone() {
        let (a, _) = five_bit_code_graphs();
        for z in output_subsets(5) {
            if a.detects_configuration(&z).unwrap() {
                for drop in 0..z.len() {
                    let mut smaller = z.clone();
                    smaller.remove(drop);
                    assert!(a.detects_configuration(&smaller).unwrap());
                }
            }
        }
    }

    #[test]
    fn elimination_agrees_with_enumeration() {
        let (a, _) = five_bit_code_graphs();
        for z in output_subsets(5).into_iter().filter(|z| z.len() <= 3) {
            let unknowns: Vec<usize> =
                (0..1).chain(z.iter().map(|&o| 1 + o)).collect();
            let outside: Vec<usize> = (0..5)
                .filter(|o| !z.contains(o))
                .map(|o| 1 + o)
                .collect();
            let rows: Vec<Vec<u64>> = outside
                .iter()
                .map(|&k| unknowns.iter().map(|&l| a.gamma[k][l]).collect())
                .collect();
            let basis = nullspace_mod_p(&rows, unknowns.len(), 2);
            let enumerated = a.enumerate_kernel(&rows, unknowns.len()).unwrap();
            let by_basis = a.solutions_are_invisible(&z, &unknowns, &basis);
            let by_enum = a.solutions_are_invisible(&z, &unknowns, &enumerated);
            assert_eq!(by_basis, by_enum, "paths differ at {z:?}");
            // The enumerated kernel must have exactly 2^rank(basis) members.
            assert_eq!(enumerated.len(), 1usize << basis.len());
        }
    }

    #[test]
    fn composite_alphabet_uses_enumeration() {
        let wire = CodeGraph::new(4, 1, 2, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]).unwrap();
        assert!(wire.detects_configuration(&[]).unwrap());
        let single = wire.detects_configuration(&[0]).unwrap();
        let both = wire.detects_configuration(&[0, 1]).unwrap();
        if both {
            assert!(single);
        }
    }

    #[test]
    fn kl_condition_matches_detection() {
        let (a, b) = five_bit_code_graphs();
        for g in [&a, &b] {
            let v = g.build_isometry().unwrap();
            let trivial = kl_condition(&v, &[mat::eye(32)]).unwrap().unwrap();
            assert!((trivial[(0, 0)].re - 1.0).abs() < 1e-12);
            let weight1 = localized_pauli_products(2, 5, 1).unwrap();
            assert_eq!(weight1.len(), 16);
            let omega = kl_condition(&v, &weight1).unwrap();
            assert!(omega.is_some(), "single-site condition must hold");
            let omega = omega.unwrap();
            assert!(max_abs(&omega) <= 1.0 + 1e-9);
            for j in 0..16 {
                assert!((omega[(j, j)].re - 1.0).abs() < 1e-9);
            }
            let weight2 = localized_pauli_products(2, 5, 2).unwrap();
            assert!(kl_condition(&v, &weight2).unwrap().is_none());
        }
    }

    #[test]
    fn parser_round_trip_and_errors() {
        let text = "# hub over a pentagon\n2 1 5\n0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n2 3\n3 5\n5 4\n4 1\n";
        let g = parse_graph(text).unwrap();
        let (a, _) = five_bit_code_graphs();
        assert_eq!(g.adjacency(), a.adjacency());
        assert!(g.corrects_k_errors(1).unwrap());

        for (bad, line) in [
            ("2 1\n0 1\n", 1),
            ("2 1 1\n0 1 5\n", 2),
            ("2 1 1\n0 7\n", 2),
            ("2 1 1\n0 1\n1 0\n", 3),
            ("2 1 1\nx 1\n", 2),
        ] {
            match parse_graph(bad) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "input {bad:?}"),
                other => panic!("expected parse error for {bad:?}, got {other:?}"),
            }
        }
        assert!(matches!(parse_graph("# nothing\n"), Err(Error::Parse { line: 1, .. })));
    }
}

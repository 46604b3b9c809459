//! Registry of named CSV sweeps plus plain-text plot scripts. Every sweep is
//! a deterministic function of (name, points, seed): same inputs, same bytes.

use crate::capacities::{self, CapQuantity, NoisyKind};
use crate::channels;
use crate::cloning::{phi_asymptotic, purifier_fidelity, FidelityKind};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::fileio::CsvDoc;
use crate::gaussian::{gaussian_capacity, GaussianCapacity, GaussianChannelParam};
use crate::measures::{eof_closed_form, er_closed_form};
use crate::states::Family;

pub const FIGURE_NAMES: [&str; 16] = [
    "em-bell-diag",
    "eof-werner",
    "er-werner",
    "er-iso",
    "erasure",
    "cc-depol",
    "depol-gain",
    "cc-gauss",
    "gauss-gain",
    "qcap-depol",
    "qcap-gauss",
    "qcap-gauss-k1",
    "purfid-theta",
    "purfid-N",
    "purfid-M",
    "phi-mu",
];

#[derive(Debug, Clone)]
pub struct Figure {
    pub name: String,
    pub csv: CsvDoc,
    pub plot: String,
}

struct Generator {
    name: &'static str,
    xlabel: &'static str,
    fixed: &'static str,
    build: fn(usize) -> Result<(CsvDoc, usize)>,
}

fn linspace(lo: f64, hi: f64, p: usize) -> Vec<f64> {
    (0..p)
        .map(|i| lo + (hi - lo) * (i as f64 / (p - 1) as f64))
        .collect()
}

/// Smallest count >= points whose interval number is divisible by three, so
/// that one-third and two-thirds of the range land exactly on the grid.
fn third_lattice(points: usize) -> usize {
    let mut p = points.max(4);
    while p % 3 != 1 {
        p += 1;
    }
    p
}

/// Rounded integer grid, strictly increasing (duplicates collapse).
fn int_grid(lo: usize, hi: usize, p: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(p);
    for i in 0..p {
        let v = lo as f64 + (hi - lo) as f64 * (i as f64 / (p - 1) as f64);
        let v = v.round() as usize;
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

fn headers(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn build_em_bell_diag(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["lmax", "eof", "er"]));
    for l in linspace(0.25, 1.0, p) {
        let rest = (1.0 - l) / 3.0;
        let fam = Family::BellDiagonal { lambda: [l, rest, rest, rest] };
        doc.push_row(vec![l, eof_closed_form(&fam)?.value, er_closed_form(&fam)?.value]);
    }
    Ok((doc, p))
}

fn build_eof_werner(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["f", "eof"]));
    for f in linspace(-1.0, 1.0, p) {
        doc.push_row(vec![f, eof_closed_form(&Family::Werner { d: 2, f })?.value]);
    }
    Ok((doc, p))
}

fn build_er_werner(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["f", "er"]));
    for f in linspace(-1.0, 1.0, p) {
        doc.push_row(vec![f, er_closed_form(&Family::Werner { d: 2, f })?.value]);
    }
    Ok((doc, p))
}

fn build_er_iso(p: usize) -> Result<(CsvDoc, usize)> {
    // Shared axis x = t/d so the d = 2 and d = 3 curves span the same range.
    let mut doc = CsvDoc::new(headers(&["x", "er_d2", "er_d3"]));
    for x in linspace(0.0, 1.0, p) {
        let mut row = vec![x];
        for d in [2usize, 3] {
            let fam = Family::Isotropic { d, t: x * d as f64 };
            row.push(er_closed_form(&fam)?.value);
        }
        doc.push_row(row);
    }
    Ok((doc, p))
}

fn build_erasure(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["theta", "cc", "ce", "cq"]));
    for theta in linspace(0.0, 1.0, p) {
        doc.push_row(vec![
            theta,
            capacities::closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Cc)?,
            capacities::closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Ce)?,
            capacities::closed_form_capacity(NoisyKind::Erasure, 2, theta, CapQuantity::Cq)?,
        ]);
    }
    Ok((doc, p))
}

fn build_cc_depol(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["theta", "cc1_d2", "cc1_d3"]));
    for theta in linspace(0.0, 1.0, p) {
        let mut row = vec![theta];
        for d in [2usize, 3] {
            row.push(capacities::closed_form_capacity(
                NoisyKind::Depolarizing,
                d,
                theta,
                CapQuantity::Cc1,
            )?);
        }
        doc.push_row(row);
    }
    Ok((doc, p))
}

fn build_depol_gain(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["theta", "cc1", "ce", "gain"]));
    for theta in linspace(0.0, 1.0, p) {
        let cc1 =
            capacities::closed_form_capacity(NoisyKind::Depolarizing, 2, theta, CapQuantity::Cc1)?;
        let ce =
            capacities::closed_form_capacity(NoisyKind::Depolarizing, 2, theta, CapQuantity::Ce)?;
        doc.push_row(vec![theta, cc1, ce, ce - cc1]);
    }
    Ok((doc, p))
}

const GAUSS_KS: [(f64, &str); 3] = [(0.5, "k05"), (1.0, "k1"), (2.0, "k2")];

fn build_cc_gauss(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["n", "cc1_k05", "cc1_k1", "cc1_k2"]));
    for n in linspace(0.0, 10.0, p) {
        let mut row = vec![n];
        for (k, _) in GAUSS_KS {
            let param = GaussianChannelParam::new(k, 1.0)?;
            row.push(gaussian_capacity(GaussianCapacity::OneShotClassical, &param, n)?);
        }
        doc.push_row(row);
    }
    Ok((doc, p))
}

fn build_gauss_gain(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["n", "gain_k05", "gain_k1", "gain_k2"]));
    for n in linspace(0.0, 10.0, p) {
        let mut row = vec![n];
        for (k, _) in GAUSS_KS {
            let param = GaussianChannelParam::new(k, 1.0)?;
            let ce = gaussian_capacity(GaussianCapacity::EntanglementAssisted, &param, n)?;
            let cc1 = gaussian_capacity(GaussianCapacity::OneShotClassical, &param, n)?;
            row.push(ce - cc1);
        }
        doc.push_row(row);
    }
    Ok((doc, p))
}

fn build_qcap_depol(points: usize) -> Result<(CsvDoc, usize)> {
    let p = third_lattice(points);
    let mut doc = CsvDoc::new(headers(&["theta", "ctheta", "cs1"]));
    let input = DensityMatrix::maximally_mixed(vec![2]);
    for theta in linspace(0.0, 1.0, p) {
        let ctheta = capacities::closed_form_capacity(
            NoisyKind::Depolarizing,
            2,
            theta,
            CapQuantity::Ctheta,
        )?;
        let channel = channels::depolarizing(2, theta)?;
        let cs1 = capacities::coherent_info(&input, &channel)?.max(0.0);
        doc.push_row(vec![theta, ctheta, cs1]);
    }
    Ok((doc, p))
}

fn build_qcap_gauss(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["k", "ctheta", "cq"]));
    for k in linspace(0.0, 2.0, p) {
        let param = GaussianChannelParam::new(k, 0.5)?;
        let ctheta = gaussian_capacity(GaussianCapacity::TranspositionBound, &param, 0.0)?;
        let cq = gaussian_capacity(GaussianCapacity::Quantum, &param, 0.0)?.max(0.0);
        doc.push_row(vec![k, ctheta, cq]);
    }
    Ok((doc, p))
}

fn build_qcap_gauss_k1(points: usize) -> Result<(CsvDoc, usize)> {
    let p = third_lattice(points);
    let mut doc = CsvDoc::new(headers(&["nc", "ctheta", "cq"]));
    for nc in linspace(0.5, 2.0, p) {
        let param = GaussianChannelParam::new(1.0, nc)?;
        let ctheta = gaussian_capacity(GaussianCapacity::TranspositionBound, &param, 0.0)?;
        let cq = gaussian_capacity(GaussianCapacity::Quantum, &param, 0.0)?.max(0.0);
        doc.push_row(vec![nc, ctheta, cq]);
    }
    Ok((doc, p))
}

fn build_purfid_theta(p: usize) -> Result<(CsvDoc, usize)> {
    let (n, m) = (100, 50);
    let mut doc = CsvDoc::new(headers(&["theta", "f1", "fall"]));
    for theta in linspace(0.0, 1.0, p) {
        doc.push_row(vec![
            theta,
            purifier_fidelity(FidelityKind::One, n, m, theta)?,
            purifier_fidelity(FidelityKind::All, n, m, theta)?,
        ]);
    }
    Ok((doc, p))
}

fn build_purfid_n(p: usize) -> Result<(CsvDoc, usize)> {
    let theta = 0.5;
    let asymptote = phi_asymptotic(0.5, theta)?;
    let mut doc = CsvDoc::new(headers(&["n", "f1", "fall", "phi"]));
    let grid = int_grid(2, 400, p);
    let actual = grid.len();
    for n in grid {
        let m = ((0.5 * n as f64).round() as usize).max(1);
        doc.push_row(vec![
            n as f64,
            purifier_fidelity(FidelityKind::One, n, m, theta)?,
            purifier_fidelity(FidelityKind::All, n, m, theta)?,
            asymptote,
        ]);
    }
    Ok((doc, actual))
}

fn build_purfid_m(p: usize) -> Result<(CsvDoc, usize)> {
    let (n, theta) = (100, 0.5);
    let mut doc = CsvDoc::new(headers(&["m", "f1", "fall"]));
    let grid = int_grid(1, 300, p);
    let actual = grid.len();
    for m in grid {
        doc.push_row(vec![
            m as f64,
            purifier_fidelity(FidelityKind::One, n, m, theta)?,
            purifier_fidelity(FidelityKind::All, n, m, theta)?,
        ]);
    }
    Ok((doc, actual))
}

fn build_phi_mu(p: usize) -> Result<(CsvDoc, usize)> {
    let mut doc = CsvDoc::new(headers(&["mu", "phi_t025", "phi_t05", "phi_t075"]));
    for mu in linspace(0.05, 2.0, p) {
        let mut row = vec![mu];
        for theta in [0.25, 0.5, 0.75] {
            row.push(phi_asymptotic(mu, theta)?);
        }
        doc.push_row(row);
    }
    Ok((doc, p))
}

const FIGURES: [Generator; 16] = [
    Generator {
        name: "em-bell-diag",
        xlabel: "largest Bell weight",
        fixed: "lambda = (l, (1-l)/3 x3)",
        build: build_em_bell_diag,
    },
    Generator {
        name: "eof-werner",
        xlabel: "flip expectation f",
        fixed: "d = 2",
        build: build_eof_werner,
    },
    Generator {
        name: "er-werner",
        xlabel: "flip expectation f",
        fixed: "d = 2",
        build: build_er_werner,
    },
    Generator {
        name: "er-iso",
        xlabel: "t / d",
        fixed: "d in {2, 3}",
        build: build_er_iso,
    },
    Generator {
        name: "erasure",
        xlabel: "erasure probability theta",
        fixed: "d = 2",
        build: build_erasure,
    },
    Generator {
        name: "cc-depol",
        xlabel: "noise theta",
        fixed: "d in {2, 3}",
        build: build_cc_depol,
    },
    Generator {
        name: "depol-gain",
        xlabel: "noise theta",
        fixed: "d = 2; gain = ce - cc1",
        build: build_depol_gain,
    },
    Generator {
        name: "cc-gauss",
        xlabel: "input occupation n",
        fixed: "nc = 1; k in {0.5, 1, 2}; one-shot classical formula is conjectured",
        build: build_cc_gauss,
    },
    Generator {
        name: "gauss-gain",
        xlabel: "input occupation n",
        fixed: "nc = 1; k in {0.5, 1, 2}; gain = ce - cc1 (cc1 conjectured)",
        build: build_gauss_gain,
    },
    Generator {
        name: "qcap-depol",
        xlabel: "noise theta",
        fixed: "d = 2; cs1 at the maximally mixed input, clipped at 0",
        build: build_qcap_depol,
    },
    Generator {
        name: "qcap-gauss",
        xlabel: "gain k",
        fixed: "nc = 0.5; cq clipped at 0",
        build: build_qcap_gauss,
    },
    Generator {
        name: "qcap-gauss-k1",
        xlabel: "classical noise nc",
        fixed: "k = 1; cq clipped at 0",
        build: build_qcap_gauss_k1,
    },
    Generator {
        name: "purfid-theta",
        xlabel: "bias theta",
        fixed: "n = 100, m = 50",
        build: build_purfid_theta,
    },
    Generator {
        name: "purfid-N",
        xlabel: "input copies n",
        fixed: "theta = 0.5, m = n/2; phi is the asymptote",
        build: build_purfid_n,
    },
    Generator {
        name: "purfid-M",
        xlabel: "output copies m",
        fixed: "n = 100, theta = 0.5",
        build: build_purfid_m,
    },
    Generator {
        name: "phi-mu",
        xlabel: "ratio mu = m/n",
        fixed: "theta in {0.25, 0.5, 0.75}",
        build: build_phi_mu,
    },
];

fn plot_script(name: &str, xlabel: &str, header: &[String]) -> String {
    let mut curves = Vec::new();
    for (j, col) in header.iter().enumerate().skip(1) {
        let src = if j == 1 { format!("'{name}.csv'") } else { "''".to_string() };
        curves.push(format!("  {src} using 1:{} title '{col}' with lines", j + 1));
    }
    format!(
        "# {name}: generic plot commands (gnuplot syntax, data read from {name}.csv)\n\
         set datafile separator ','\n\
         set key autotitle columnhead noenhanced\n\
         set xlabel '{xlabel}'\n\
         set grid\n\
         plot \\\n{}\n",
        curves.join(", \\\n")
    )
}

/// Builds the named sweep. `points` is the requested resolution; grids that
/// must contain exact third-points may round it up, and integer grids may
/// collapse duplicates, so the metadata records the actual row count.
pub fn emit_figure(name: &str, points: usize, seed: u64) -> Result<Figure> {
    if points < 2 {
        return Err(Error::BadParam(format!("resolution {points} must be at least 2")));
    }
    let gen = FIGURES
        .iter()
        .find(|g| g.name == name)
        .ok_or_else(|| {
            Error::BadParam(format!("unknown figure '{name}'; known: {}", FIGURE_NAMES.join(", ")))
        })?;
    let (doc, actual) = (gen.build)(points)?;
    let doc = CsvDoc {
        meta: vec![
            ("command".into(), format!("qinfo figure {name} --points {points} --seed {seed}")),
            ("parameters".into(), format!("{}; grid rows {actual}", gen.fixed)),
            ("version".into(), format!("qinfo {}", env!("CARGO_PKG_VERSION"))),
        ],
        ..doc
    };
    doc.check_finite()?;
    let plot = plot_script(name, gen.xlabel, &doc.header);
    Ok(Figure { name: name.to_string(), csv: doc, plot })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_finite() {
        assert_eq!(FIGURES.len(), FIGURE_NAMES.len());
        for name in FIGURE_NAMES {
            let fig = emit_figure(name, 7, 1).unwrap();
            assert!(fig.csv.rows.len() >= 2, "{name} produced too few rows");
            assert!(fig.csv.header.len() >= 2, "{name} needs a curve column");
            assert!(fig.plot.contains(&format!("{name}.csv")), "{name} plot must cite its csv");
            for row in &fig.csv.rows {
                assert_eq!(row.len(), fig.csv.header.len());
            }
        }
    }

    #[test]
    fn bad_requests_are_rejected() {
        assert!(emit_figure("eof-werner", 1, 0).is_err());
        assert!(emit_figure("no-such-figure", 10, 0).is_err());
    }

    #[test]
    fn same_inputs_same_bytes() {
        let a = emit_figure("qcap-depol", 19, 3).unwrap();
        let b = emit_figure("qcap-depol", 19, 3).unwrap();
        assert_eq!(a.csv.render(), b.csv.render());
        assert_eq!(a.plot, b.plot);
    }

    #[test]
    fn erasure_keeps_the_factor_two() {
        let fig = emit_figure("erasure", 21, 0).unwrap();
        for row in &fig.csv.rows {
            assert!((row[2] - 2.0 * row[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn qcap_depol_grid_contains_the_exact_zero() {
        let fig = emit_figure("qcap-depol", 4, 0).unwrap();
        let row = fig
            .csv
            .rows
            .iter()
            .find(|r| (r[0] - 2.0 / 3.0).abs() < 1e-12)
            .expect("two-thirds row");
        assert_eq!(row[1], 0.0);
    }

    #[test]
    fn qcap_gauss_k1_grid_contains_unit_noise() {
        let fig = emit_figure("qcap-gauss-k1", 4, 0).unwrap();
        let row = fig.csv.rows.iter().find(|r| r[0] == 1.0).expect("nc = 1 row");
        assert!(row[1].abs() < 1e-12);
    }

    #[test]
    fn phi_mu_curves_have_no_branch_jump() {
        let fig = emit_figure("phi-mu", 391, 0).unwrap();
        for col in 1..fig.csv.header.len() {
            for w in fig.csv.rows.windows(2) {
                let jump = (w[1][col] - w[0][col]).abs();
                assert!(jump < 0.02, "column {col} jumps by {jump}");
            }
        }
    }

    #[test]
    fn gauss_gain_is_nonnegative() {
        let fig = emit_figure("gauss-gain", 41, 0).unwrap();
        for row in &fig.csv.rows {
            for v in &row[1..] {
                assert!(*v >= -1e-12, "assisted capacity must dominate, got {v}");
            }
        }
    }
}

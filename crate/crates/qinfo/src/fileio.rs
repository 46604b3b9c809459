//! Text formats: the state-file and operator grammars, covariance files,
//! and CSV emission with C-style `%.12g` number formatting.
//!
//! State files start with `dims d1 d2 ...` followed by the matrix entries as
//! whitespace-separated real/imaginary pairs in row-major order, or consist
//! of a single keyword line (`bell0`..`bell3`, `werner f`, `isotropic t d`,
//! `maxent d`). Lines starting with `#` and blank lines are skipped.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gaussian::RMat;
use crate::mat::CMat;
use crate::states::{self, Family};
use num_complex::Complex64;

/// C `printf("%.12g")`: twelve significant digits, trailing zeros trimmed,
/// scientific notation outside [1e-4, 1e12) with a two-digit exponent.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("float formatting");
    let exp: i32 = exp.parse().expect("float exponent");
    if exp < -4 || exp >= 12 {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{}e{}{:02}", mant, if exp < 0 { "-" } else { "+" }, exp.abs())
    } else {
        let fixed = format!("{:.*}", (11 - exp).max(0) as usize, x);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

/// A CSV document: `# key: value` metadata lines, a header row, numeric rows.
#[derive(Debug, Clone)]
pub struct CsvDoc {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvDoc {
    pub fn new(header: Vec<String>) -> Self {
        CsvDoc { meta: Vec::new(), header, rows: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Registered outputs must never contain NaN or infinities.
    pub fn check_finite(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::BadParam(format!(
                        "non-finite value {} in column {} of data row {}",
                        v,
                        self.header.get(j).map(String::as_str).unwrap_or("?"),
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_g(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

/// Content tokens with 1-based source positions; `#` comments and blank
/// lines are skipped.
fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let mut rest = body;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push(Token {
                text: &tail[..len],
                line: li + 1,
                column: offset + start + 1,
            });
            offset += start + len;
            rest = &tail[len..];
        }
    }
    out
}

fn parse_err(t: &Token, what: &str) -> Error {
    Error::Parse {
        line: t.line,
        message: format!("column {}: {} (got '{}')", t.column, what, t.text),
    }
}

fn number(t: &Token) -> Result<f64> {
    t.text.parse::<f64>().map_err(|_| parse_err(t, "expected a number"))
}

fn count(t: &Token) -> Result<usize> {
    t.text.parse::<usize>().map_err(|_| parse_err(t, "expected a positive integer"))
}

/// Parses the state-file grammar. Keyword states resolve through the named
/// families; explicit matrices are validated as density matrices, so a
/// non-positive or wrongly normalized input is rejected with the offending
/// eigenvalue or trace.
pub fn parse_state_text(text: &str) -> Result<DensityMatrix> {
    let tokens = tokenize(text);
    let Some(first) = tokens.first() else {
        return Err(Error::Parse { line: 1, message: "empty state file".into() });
    };
    let args = &tokens[1..];
    let exact = |n: usize| -> Result<()> {
        if args.len() < n {
            return Err(Error::Parse {
                line: first.line,
                message: format!(
                    "'{}' takes {} argument(s), found {}",
                    first.text,
                    n,
                    args.len()
                ),
            });
        }
        if args.len() > n {
            return Err(parse_err(&args[n], "unexpected trailing token"));
        }
        Ok(())
    };
    match first.text {
        "dims" => parse_explicit_matrix(first, args),
        "bell0" | "bell1" | "bell2" | "bell3" => {
            exact(0)?;
            let j = first.text.as_bytes()[4] - b'0';
            let psi = states::bell_state(j as usize)?;
            DensityMatrix::from_pure(&psi, vec![2, 2])
        }
        "werner" => {
            exact(1)?;
            states::family_state(&Family::Werner { d: 2, f: number(&args[0])? })
        }
        "isotropic" => {
            exact(2)?;
            let t = number(&args[0])?;
            let d = count(&args[1])?;
            states::family_state(&Family::Isotropic { d, t })
        }
        "maxent" => {
            exact(1)?;
            let d = count(&args[0])?;
            DensityMatrix::from_pure(&states::max_entangled(d), vec![d, d])
        }
        _ => Err(parse_err(first, "expected 'dims' or a state keyword")),
    }
}

fn parse_explicit_matrix(first: &Token, args: &[Token]) -> Result<DensityMatrix> {
    let mut dims = Vec::new();
    let mut idx = 0;
    while idx < args.len() {
        let t = &args[idx];
        if t.line != first.line {
            break;
        }
        let d = count(t)?;
        if d == 0 {
            return Err(parse_err(t, "factor dimension must be positive"));
        }
        dims.push(d);
        idx += 1;
    }
    if dims.is_empty() {
        return Err(Error::Parse {
            line: first.line,
            message: "'dims' needs at least one dimension".into(),
        });
    }
    let n: usize = dims.iter().product();
    let entries = &args[idx..];
    let needed = 2 * n * n;
    if entries.len() != needed {
        let line = entries.last().map(|t| t.line).unwrap_or(first.line);
        return Err(Error::Parse {
            line,
            message: format!(
                "a {n}x{n} matrix needs {needed} numbers (real/imag pairs), found {}",
                entries.len()
            ),
        });
    }
    let mut m = CMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let k = 2 * (r * n + c);
            m[(r, c)] = Complex64::new(number(&entries[k])?, number(&entries[k + 1])?);
        }
    }
    DensityMatrix::new(m, dims)
}

/// Inverse of the explicit-matrix grammar; parsing the output reproduces the
/// state exactly.
pub fn write_state_text(rho: &DensityMatrix) -> String {
    let dims: Vec<String> = rho.dims().iter().map(|d| d.to_string()).collect();
    let mut out = format!("dims {}\n", dims.join(" "));
    let n = rho.dim();
    for r in 0..n {
        let mut cells = Vec::with_capacity(2 * n);
        for c in 0..n {
            let v = rho.mat()[(r, c)];
            cells.push(format!("{:?}", v.re));
            cells.push(format!("{:?}", v.im));
        }
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Square operator files: `matrix d` then d*d real/imag pairs row-major.
/// No positivity or trace validation; used for filter and witness operators.
pub fn parse_matrix_text(text: &str) -> Result<CMat> {
    let tokens = tokenize(text);
    let Some(first) = tokens.first() else {
        return Err(Error::Parse { line: 1, message: "empty operator file".into() });
    };
    if first.text != "matrix" {
        return Err(parse_err(first, "expected 'matrix d'"));
    }
    let Some(dt) = tokens.get(1) else {
        return Err(Error::Parse { line: first.line, message: "'matrix' needs a size".into() });
    };
    let d = count(dt)?;
    if d == 0 {
        return Err(parse_err(dt, "size must be positive"));
    }
    let entries = &tokens[2..];
    let needed = 2 * d * d;
    if entries.len() != needed {
        let line = entries.last().map(|t| t.line).unwrap_or(first.line);
        return Err(Error::Parse {
            line,
            message: format!("a {d}x{d} operator needs {needed} numbers, found {}", entries.len()),
        });
    }
    let mut m = CMat::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let k = 2 * (r * d + c);
            m[(r, c)] = Complex64::new(number(&entries[k])?, number(&entries[k + 1])?);
        }
    }
    Ok(m)
}

/// Covariance files: `modes a b` then the (2(a+b))^2 real entries row-major.
pub fn parse_cov_text(text: &str) -> Result<(RMat, (usize, usize))> {
    let tokens = tokenize(text);
    let Some(first) = tokens.first() else {
        return Err(Error::Parse { line: 1, message: "empty covariance file".into() });
    };
    if first.text != "modes" {
        return Err(parse_err(first, "expected 'modes a b'"));
    }
    if tokens.len() < 3 {
        return Err(Error::Parse {
            line: first.line,
            message: "'modes' needs two mode counts".into(),
        });
    }
    let a = count(&tokens[1])?;
    let b = count(&tokens[2])?;
    if a == 0 || b == 0 {
        return Err(parse_err(&tokens[1], "mode counts must be positive"));
    }
    let n = 2 * (a + b);
    let entries = &tokens[3..];
    if entries.len() != n * n {
        let line = entries.last().map(|t| t.line).unwrap_or(first.line);
        return Err(Error::Parse {
            line,
            message: format!(
                "a {n}x{n} covariance needs {} numbers, found {}",
                n * n,
                entries.len()
            ),
        });
    }
    let mut m = RMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] = number(&entries[r * n + c])?;
        }
    }
    Ok((m, (a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat;
    use approx::assert_abs_diff_eq;

    #[test]
    fn g_format_matches_printf() {
        assert_eq!(fmt_g(1.5), "1.5");
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(0.1), "0.1");
        assert_eq!(fmt_g(-2.0), "-2");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1e12), "1e+12");
        assert_eq!(fmt_g(123456789.123), "123456789.123");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(2f64.sqrt()), "1.41421356237");
        assert_eq!(fmt_g(6.02214076e23), "6.02214076e+23");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(0.00001), "1e-05");
        assert_eq!(fmt_g(f64::NAN), "nan");
    }

    #[test]
    fn csv_rendering_and_finiteness() {
        let mut doc = CsvDoc::new(vec!["x".into(), "y".into()])
            .with_meta("command", "qinfo figure demo")
            .with_meta("points", 2);
        doc.push_row(vec![0.0, 1.0]);
        doc.push_row(vec![0.5, 0.25]);
        assert_eq!(doc.render(), "# command: qinfo figure demo\n# points: 2\nx,y\n0,1\n0.5,0.25\n");
        assert!(doc.check_finite().is_ok());
        doc.push_row(vec![1.0, f64::NAN]);
        assert!(doc.check_finite().is_err());
    }

    #[test]
    fn keyword_states_parse() {
        let bell = parse_state_text("bell0").unwrap();
        assert_eq!(bell.dims(), &[2, 2]);
        assert_abs_diff_eq!(bell.mat()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(bell.mat()[(0, 3)].re, 0.5, epsilon = 1e-15);

        let w = parse_state_text("werner -1").unwrap();
        let f = mat::trace(&(w.mat() * states::flip_operator(2))).re;
        assert_abs_diff_eq!(f, -1.0, epsilon = 1e-12);

        let iso = parse_state_text("isotropic 3 3").unwrap();
        assert_eq!(iso.dims(), &[3, 3]);

        let me = parse_state_text("maxent 4").unwrap();
        assert_eq!(me.dims(), &[4, 4]);
        assert_abs_diff_eq!(me.mat()[(0, 0)].re, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn explicit_matrix_round_trips() {
        let text = "# comment line\ndims 2 2\n\
                    0.5 0 0 0 0 0 0.5 0\n\
                    0 0 0 0 0 0 0 0\n\
                    0 0 0 0 0 0 0 0\n\
                    0.5 0 0 0 0 0 0.5 0\n";
        let rho = parse_state_text(text).unwrap();
        assert_eq!(rho.dims(), &[2, 2]);
        let back = parse_state_text(&write_state_text(&rho)).unwrap();
        assert!((rho.mat() - back.mat()).map(|z| z.norm()).max() == 0.0);
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_state_text("dims 2\n1 0 0 0\n0 0 oops 0") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("column 5"), "{message}");
                assert!(message.contains("oops"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_state_text("dims 2\n1 0 0 0\n0 0 0 0\n1 1") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected arity error, got {other:?}"),
        }
        assert!(matches!(parse_state_text(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_state_text("sparkle 3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn invalid_density_matrices_are_rejected() {
        // Hermitian, unit trace, but indefinite.
        let text = "dims 2\n1.5 0 0 0\n0 0 -0.5 0";
        match parse_state_text(text) {
            Err(Error::NotPsd { min_eig, .. }) => assert!(min_eig < -0.4),
            other => panic!("expected positivity failure, got {other:?}"),
        }
        let text = "dims 2\n1 0 0 0\n0 0 1 0";
        assert!(matches!(parse_state_text(text), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn operator_and_covariance_files_parse() {
        let x = parse_matrix_text("matrix 2\n0 0 1 0\n1 0 0 0").unwrap();
        assert_eq!(x[(0, 1)].re, 1.0);
        assert_eq!(x[(1, 0)].re, 1.0);

        let vac = "modes 1 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1";
        let (cov, split) = parse_cov_text(vac).unwrap();
        assert_eq!(split, (1, 1));
        assert_eq!(cov, RMat::identity(4, 4));
        assert!(matches!(
            parse_cov_text("modes 1\n1 0"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn state_text_writer_uses_full_precision() {
        let rho = states::family_state(&Family::Werner { d: 2, f: -0.31 }).unwrap();
        let back = parse_state_text(&write_state_text(&rho)).unwrap();
        assert!((rho.mat() - back.mat()).map(|z| z.norm()).max() == 0.0);
    }
}

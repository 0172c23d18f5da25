//! Plain-text state files.
//!
//! ```text
//! dim 2
//! 0.9+0i 0+0i
//! 0+0i   0.1+0i
//! ```
//!
//! or a single line `bloch x y z`. Blank lines and `#` comments are ignored.

use num_complex::Complex64;

use super::{from_bloch, BlochVector, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub fn parse_state(src: &str) -> Result<DensityMatrix> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty state file".into() })?;
    let mut words = header.split_whitespace();
    match words.next() {
        Some("bloch") => {
            let comps: Vec<f64> = words
                .map(|w| parse_f64(w, line_no))
                .collect::<Result<_>>()?;
            let r: [f64; 3] = comps.try_into().map_err(|v: Vec<f64>| Error::Parse {
                line: line_no,
                message: format!("bloch needs 3 components, found {}", v.len()),
            })?;
            if let Some((extra, _)) = lines.next() {
                return Err(Error::Parse { line: extra, message: "unexpected content after bloch line".into() });
            }
            Ok(from_bloch(&BlochVector::new(r)?))
        }
        Some("dim") => {
            let n: usize = match (words.next(), words.next()) {
                (Some(w), None) => w.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid dimension `{w}`"),
                })?,
                _ => return Err(Error::Parse { line: line_no, message: "expected `dim <n>`".into() }),
            };
            if n == 0 {
                return Err(Error::Parse { line: line_no, message: "dimension must be positive".into() });
            }
            let mut entries = Vec::with_capacity(n * n);
            for row in 0..n {
                let (ln, text) = lines.next().ok_or(Error::Parse {
                    line: line_no + row + 1,
                    message: format!("expected {n} matrix rows, found {row}"),
                })?;
                let parsed: Vec<Complex64> =
                    text.split_whitespace().map(|w| parse_complex(w, ln)).collect::<Result<_>>()?;
                if parsed.len() != n {
                    return Err(Error::Parse {
                        line: ln,
                        message: format!("expected {n} entries, found {}", parsed.len()),
                    });
                }
                entries.extend(parsed);
            }
            if let Some((extra, _)) = lines.next() {
                return Err(Error::Parse { line: extra, message: "unexpected content after matrix".into() });
            }
            DensityMatrix::new(ComplexMatrix::from_vec(n, n, entries)?)
        }
        _ => Err(Error::Parse { line: line_no, message: "expected `dim <n>` or `bloch x y z`".into() }),
    }
}

fn parse_f64(w: &str, line: usize) -> Result<f64> {
    w.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse { line, message: format!("invalid number `{w}`") })
}

fn parse_complex(w: &str, line: usize) -> Result<Complex64> {
    w.parse::<Complex64>()
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .ok_or_else(|| Error::Parse { line, message: format!("invalid complex entry `{w}`") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bloch_line() {
        let rho = parse_state("bloch 0 0 0.8\n").unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::from_diag(&[0.9, 0.1])) < 1e-16);
    }

    #[test]
    fn matrix_form_with_complex_entries() {
        let src = "# a qubit\ndim 2\n0.5+0i 0.1-0.2i\n0.1+0.2i 0.5\n";
        let rho = parse_state(src).unwrap();
        assert_eq!(rho.matrix()[(0, 1)], Complex64::new(0.1, -0.2));
        let src = "dim 2\n1e-1+0i 0\n0 9e-1\n";
        assert!((parse_state(src).unwrap().matrix()[(1, 1)].re - 0.9).abs() < 1e-16);
    }

    #[test]
    fn round_trips_through_to_text() {
        let rho = parse_state("dim 2\n0.6 0.1-0.3i\n0.1+0.3i 0.4\n").unwrap();
        let again = parse_state(&rho.to_text()).unwrap();
        assert!(again.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn rejects_invalid_states_with_named_invariant() {
        let err = parse_state("dim 2\n0.5 0.3\n0.1 0.5\n").unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
        assert!(err.to_string().contains("Hermitian"));
        let err = parse_state("dim 2\n0.5 0\n0 0.6\n").unwrap_err();
        assert!(err.to_string().contains("unit-trace"));
        let err = parse_state("bloch 1 1 0").unwrap_err();
        assert!(matches!(err, Error::BlochNormExceeded { .. }));
    }

    #[test]
    fn rejects_malformed_text() {
        for src in ["", "dim\n", "dim 2\n1 0\n", "dim 2\n1 0 0\n0 0\n", "bloch 0 0", "foo 1", "dim 1\n1\n2\n", "dim 1\nx\n"] {
            assert!(matches!(parse_state(src), Err(Error::Parse { .. })), "{src:?}");
        }
    }
}

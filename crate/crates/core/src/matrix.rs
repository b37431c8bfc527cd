//! Text format for generator matrices.
//!
//! ```text
//! q k n
//! m_0 m_1 ... m_{n-1}      (optional; all ones when absent)
//! g_00 g_01 ... g_0(n-1)
//! ...                      (k rows of field-element indices)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Whether the
//! multiplicity line is present is decided by the number of data lines
//! (`k + 1` versus `k`).

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf::build_field;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_ints<T: std::str::FromStr>(line_no: usize, text: &str, what: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| parse_err(line_no, format!("bad {what} `{t}`")))
        })
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<LinearCode> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(&(hline, header)) = lines.first() else {
        return Err(parse_err(1, "empty matrix file"));
    };
    let head: Vec<u64> = parse_ints(hline, header, "header value")?;
    let [q, k, n] = head[..] else {
        return Err(parse_err(hline, "header must be `q k n`"));
    };
    let (k, n) = (k as usize, n as usize);
    let body = &lines[1..];
    let (mult_line, rows) = if body.len() == k + 1 {
        (Some(body[0]), &body[1..])
    } else if body.len() == k {
        (None, body)
    } else {
        return Err(parse_err(
            hline,
            format!("expected {k} or {} data lines, found {}", k + 1, body.len()),
        ));
    };
    let field = Arc::new(build_field(q)?);
    let multiplicities = match mult_line {
        Some((no, l)) => {
            let m: Vec<BigUint> = parse_ints(no, l, "multiplicity")?;
            if m.len() != n {
                return Err(parse_err(no, format!("expected {n} multiplicities, found {}", m.len())));
            }
            m
        }
        None => vec![BigUint::from(1u32); n],
    };
    let mut generator = Vec::with_capacity(k * n);
    for &(no, l) in rows {
        let row: Vec<u64> = parse_ints(no, l, "field element")?;
        if row.len() != n {
            return Err(parse_err(no, format!("expected {n} entries, found {}", row.len())));
        }
        for x in row {
            generator.push(field.element(x)?.index());
        }
    }
    LinearCode::from_raw(field, k, n, generator, multiplicities)
}

/// Serializes a code; the multiplicity line is omitted for plain codes.
pub fn write_matrix(code: &LinearCode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", code.q(), code.dimension(), code.base_length());
    if !code.is_plain() {
        let m: Vec<String> = code.multiplicities().iter().map(|m| m.to_string()).collect();
        let _ = writeln!(out, "{}", m.join(" "));
    }
    for row in code.index_rows() {
        let r: Vec<String> = row.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", r.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::EnumGuard;

    #[test]
    fn plain_file() {
        let c = parse_matrix("2 2 3\n1 0 0\n0 1 1\n").unwrap();
        assert!(c.is_plain());
        assert_eq!(c.index_rows(), vec![vec![1, 0, 0], vec![0, 1, 1]]);
        assert!(c.is_mws(&EnumGuard::default()).unwrap());
        assert_eq!(write_matrix(&c), "2 2 3\n1 0 0\n0 1 1\n");
    }

    #[test]
    fn multiplicity_line_and_comments() {
        let text = "# embedded identity\n2 2 2\n1 2\n\n1 0\n0 1\n";
        let c = parse_matrix(text).unwrap();
        assert_eq!(c.effective_length(), &BigUint::from(3u32));
        assert_eq!(write_matrix(&c), "2 2 2\n1 2\n1 0\n0 1\n");
    }

    #[test]
    fn huge_multiplicities_survive() {
        let text = "2 1 2\n1 1267650600228229401496703205376\n1 1\n";
        let c = parse_matrix(text).unwrap();
        assert_eq!(parse_matrix(&write_matrix(&c)).unwrap().multiplicities(), c.multiplicities());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("2 2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("2 2 2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("2 1 2\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("2 1 2\n1 2\n"), Err(Error::InvalidElement { .. })));
        assert!(matches!(parse_matrix("6 1 1\n1\n"), Err(Error::NotPrimePower { q: 6 })));
        assert!(matches!(parse_matrix("2 2 2\n1 1\n1 1\n"), Err(Error::RankDeficient { .. })));
        assert!(matches!(parse_matrix("2 1 2\n0 1\n1 1\n"), Err(Error::InvalidMultiplicity { column: 0 })));
    }
}

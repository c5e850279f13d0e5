//! The plain-text algebra file format.
//!
//! ```text
//! # Heisenberg H(1) over F_2
//! field q=2
//! dim 3
//! bracket 1 2 -> 0 0 1
//! ```
//!
//! `field q=<q> [modulus=<c0,...,ce>]` and `dim <n>` come first, then one
//! `bracket i j -> k1 ... kn` line per nonzero `[e_i, e_j]` with
//! `1 <= i < j <= n`. Omitted pairs are zero. For prime `q` coordinates are
//! integers reduced mod `p`; for `q = p^e` they are packed element indices
//! in `0..q` (base-`p` digits are the polynomial coefficients).

use std::collections::HashSet;
use std::fmt::Write as _;

use commdeg::{FieldElement, FieldSpec, LieAlgebra};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_field(line: usize, rest: &str) -> Result<FieldSpec, ParseError> {
    let mut q = None;
    let mut modulus = None;
    for tok in rest.split_whitespace() {
        match tok.split_once('=') {
            Some(("q", v)) => {
                q = Some(
                    v.parse::<u64>()
                        .map_err(|_| err(line, format!("bad field order {v:?}")))?,
                )
            }
            Some(("modulus", v)) => {
                let cs = v
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| err(line, format!("bad modulus {v:?}")))?;
                modulus = Some(cs);
            }
            _ => return Err(err(line, format!("unexpected token {tok:?} in field line"))),
        }
    }
    let q = q.ok_or_else(|| err(line, "field line needs q=<order>"))?;
    FieldSpec::new(q, modulus.as_deref()).map_err(|e| err(line, e.to_string()))
}

fn parse_coord(f: &FieldSpec, line: usize, tok: &str) -> Result<FieldElement, ParseError> {
    let v: i64 = tok
        .parse()
        .map_err(|_| err(line, format!("bad coordinate {tok:?}")))?;
    if f.is_prime() {
        return Ok(f.from_int(v));
    }
    u32::try_from(v)
        .ok()
        .and_then(|v| f.element(v))
        .ok_or_else(|| {
            err(
                line,
                format!("coordinate {v} is not an element index below q = {}", f.q()),
            )
        })
}

/// Parses an algebra file. Only the syntax is checked; call
/// [`LieAlgebra::validate`] for the Lie identities.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra, ParseError> {
    let mut field: Option<FieldSpec> = None;
    let mut dim: Option<usize> = None;
    let mut brackets = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        match head {
            "field" => {
                if field.is_some() {
                    return Err(err(line, "duplicate field line"));
                }
                field = Some(parse_field(line, rest)?);
            }
            "dim" => {
                if dim.is_some() {
                    return Err(err(line, "duplicate dim line"));
                }
                dim = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| err(line, format!("bad dimension {:?}", rest.trim())))?,
                );
            }
            "bracket" => {
                let f = field
                    .as_ref()
                    .ok_or_else(|| err(line, "bracket before field line"))?;
                let n = dim.ok_or_else(|| err(line, "bracket before dim line"))?;
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| err(line, "expected `->`"))?;
                let ij: Vec<usize> = lhs
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(line, format!("bad index {t:?}"))))
                    .collect::<Result<_, _>>()?;
                let [i, j] = ij[..] else {
                    return Err(err(line, "expected two indices before `->`"));
                };
                if i >= j {
                    return Err(err(line, format!("expected i < j, got {i} {j}")));
                }
                if i == 0 || j > n {
                    return Err(err(
                        line,
                        format!("indices must lie in 1..={n}, got {i} {j}"),
                    ));
                }
                if !seen.insert((i, j)) {
                    return Err(err(line, format!("duplicate bracket {i} {j}")));
                }
                let coords: Vec<FieldElement> = rhs
                    .split_whitespace()
                    .map(|t| parse_coord(f, line, t))
                    .collect::<Result<_, _>>()?;
                if coords.len() != n {
                    return Err(err(
                        line,
                        format!("expected {n} coordinates, got {}", coords.len()),
                    ));
                }
                brackets.push((i - 1, j - 1, coords));
            }
            other => return Err(err(line, format!("unknown directive {other:?}"))),
        }
    }
    let field = field.ok_or_else(|| err(0, "missing field line"))?;
    let dim = dim.ok_or_else(|| err(0, "missing dim line"))?;
    LieAlgebra::from_upper(field, dim, &brackets).map_err(|e| err(0, e.to_string()))
}

/// Canonical text for `l`: header, then nonzero upper-triangle brackets in
/// lexicographic order. Byte-identical for equal algebras.
pub fn write_algebra(l: &LieAlgebra) -> String {
    let f = l.field();
    let mut out = String::new();
    write!(out, "field q={}", f.q()).unwrap();
    if !f.is_prime() {
        let m: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
        write!(out, " modulus={}", m.join(",")).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "dim {}", l.dim()).unwrap();
    for (i, j, v) in l.upper_brackets() {
        let coords: Vec<String> = v.iter().map(|c| c.index().to_string()).collect();
        writeln!(out, "bracket {} {} -> {}", i + 1, j + 1, coords.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use commdeg::algebra::{heisenberg, l55};

    #[test]
    fn heisenberg_file() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let text = write_algebra(&heisenberg(&f2, 1).unwrap());
        assert_eq!(text, "field q=2\ndim 3\nbracket 1 2 -> 0 0 1\n");
        assert_eq!(parse_algebra(&text).unwrap(), heisenberg(&f2, 1).unwrap());
    }

    #[test]
    fn extension_field_round_trip() {
        let f4 = FieldSpec::of_order(4).unwrap();
        let text = write_algebra(&l55(&f4));
        assert!(text.starts_with("field q=4 modulus=1,1,1\n"));
        assert_eq!(parse_algebra(&text).unwrap(), l55(&f4));
    }

    #[test]
    fn comments_negative_coordinates_and_blank_lines() {
        let text = "# sl2 over F_3\nfield q=3\n\ndim 3\nbracket 1 2 -> 0 2 0  # [h,e]=2e\nbracket 1 3 -> 0 0 -2\nbracket 2 3 -> 1 0 0\n";
        let l = parse_algebra(text).unwrap();
        assert_eq!(l.basis_bracket(0, 2)[2].index(), 1);
        l.validate().unwrap();
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            (
                "field q=2\ndim 2\nbracket 2 1 -> 1 0\n",
                3,
                "expected i < j",
            ),
            (
                "field q=2\ndim 2\nbracket 1 2 -> 1 0\nbracket 1 2 -> 1 0\n",
                4,
                "duplicate",
            ),
            ("field q=6\n", 1, "prime power"),
            (
                "field q=2\ndim 2\nbracket 1 2 -> 1\n",
                3,
                "expected 2 coordinates",
            ),
            ("dim 2\nbracket 1 2 -> 1 0\n", 2, "before field"),
            ("field q=2\ndim 2\nbracket 1 3 -> 1 0\n", 3, "indices"),
            ("field q=4\ndim 2\nbracket 1 2 -> 4 0\n", 3, "element index"),
            ("field q=2\nfrob 1\n", 2, "unknown directive"),
        ];
        for (text, line, needle) in cases {
            let e = parse_algebra(text).unwrap_err();
            assert_eq!(e.line, line, "{text}");
            assert!(e.message.contains(needle), "{} !~ {needle}", e.message);
        }
        assert!(parse_algebra("field q=2\n")
            .unwrap_err()
            .message
            .contains("missing dim"));
    }
}

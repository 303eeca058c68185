//! Line-oriented text formats for weight fields, matrices and measures.
//!
//! Every format ignores blank lines and `#` comments. Numbers are literals
//! as accepted by [`parse_literal`].
//!
//! Weight field:
//! ```text
//! family figure2
//! a2 1/2
//! y2 2/3
//! alpha 0 3 1/2      # α² at (0,3) replaced by 1/2
//! beta 2 0 1/4
//! ```
//! or a tensor product, each factor given as squared weights then a tail
//! (`tail <c>` or `tail xseq`) or as a named shift:
//! ```text
//! family tensor
//! wa 1/2 tail 1
//! wb x_seq 1/2
//! ```
//!
//! Matrix: `dim n` then `n` rows of `n` entries.
//!
//! Measure on `[0, ∞)`: `atom <location> <mass>` lines and at most one
//! `density c0 c1 …` line (ascending coefficients on `[0,1]`). A planar
//! measure is a sum of products; each `term` line opens a product whose
//! factors are written with `s` and `t` prefixes (`s atom 0 1/2`,
//! `t density 0 2`).

use std::fmt::Write as _;

use thiserror::Error;
use wshift_core::berger::{Measure, Measure1D, Measure2D};
use wshift_core::poly::Poly;
use wshift_core::shifts::{builtin_1d_shift, family_figure2, tensor_field, FieldKind, Tail, WeightField2D, WeightSeq1D};
use wshift_core::{Matrix, Mode, Scalar};

use crate::config::parse_literal;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(#[from] wshift_core::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num(tok: &str, line: usize, mode: Mode) -> Result<Scalar, FormatError> {
    parse_literal(tok, mode).map_err(|e| syntax(line, e.to_string()))
}

fn index(tok: &str, line: usize) -> Result<u32, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("`{}` is not a lattice index", tok)))
}

fn one_value(toks: &[&str], line: usize, mode: Mode) -> Result<Scalar, FormatError> {
    match toks {
        [_, v] => num(v, line, mode),
        _ => Err(syntax(line, format!("`{}` takes exactly one value", toks[0]))),
    }
}

fn parse_seq(toks: &[&str], line: usize, mode: Mode) -> Result<WeightSeq1D, FormatError> {
    if let Some(name) = toks.first().filter(|t| t.chars().next().is_some_and(|c| c.is_alphabetic()) && **t != "tail") {
        let params = toks[1..].iter().map(|t| num(t, line, mode)).collect::<Result<Vec<_>, _>>()?;
        return Ok(builtin_1d_shift(name, &params)?);
    }
    let split = toks
        .iter()
        .position(|t| *t == "tail")
        .ok_or_else(|| syntax(line, "weight sequence needs `tail <c>` or `tail xseq`"))?;
    let prefix = toks[..split].iter().map(|t| num(t, line, mode)).collect::<Result<Vec<_>, _>>()?;
    let tail = match &toks[split + 1..] {
        ["xseq"] => Tail::XSequence,
        [c] => Tail::Constant(num(c, line, mode)?),
        _ => return Err(syntax(line, "`tail` takes one value or `xseq`")),
    };
    Ok(WeightSeq1D::new(prefix, tail)?)
}

pub fn parse_field(text: &str, mode: Mode) -> Result<WeightField2D, FormatError> {
    let mut family: Option<(usize, String)> = None;
    let (mut a2, mut y2, mut wa, mut wb) = (None, None, None, None);
    let mut overrides = Vec::new();
    for (line, toks) in lines(text) {
        match toks[0] {
            "family" => match toks.as_slice() {
                [_, name] => family = Some((line, name.to_string())),
                _ => return Err(syntax(line, "`family` takes one name")),
            },
            "a2" => a2 = Some(one_value(&toks, line, mode)?),
            "y2" => y2 = Some(one_value(&toks, line, mode)?),
            "wa" => wa = Some(parse_seq(&toks[1..], line, mode)?),
            "wb" => wb = Some(parse_seq(&toks[1..], line, mode)?),
            kind @ ("alpha" | "beta") => match toks.as_slice() {
                [_, k1, k2, v] => overrides.push((kind == "alpha", (index(k1, line)?, index(k2, line)?), num(v, line, mode)?)),
                _ => return Err(syntax(line, format!("`{}` takes k1 k2 value", kind))),
            },
            other => return Err(syntax(line, format!("unknown key `{}`", other))),
        }
    }
    let (line, name) = family.ok_or_else(|| syntax(0, "missing `family` line"))?;
    let missing = |key: &str| syntax(line, format!("family {} needs `{}`", name, key));
    let mut field = match name.as_str() {
        "figure2" => family_figure2(&a2.ok_or_else(|| missing("a2"))?, &y2.ok_or_else(|| missing("y2"))?)?,
        "tensor" => tensor_field(&wa.ok_or_else(|| missing("wa"))?, &wb.ok_or_else(|| missing("wb"))?),
        other => return Err(syntax(line, format!("unknown family `{}`", other))),
    };
    for (is_alpha, k, v) in overrides {
        if !v.is_positive() {
            return Err(syntax(line, format!("override {} at {:?} is not positive", v, k)));
        }
        field = if is_alpha {
            field.with_alpha_override(k, v)
        } else {
            field.with_beta_override(k, v)
        };
    }
    Ok(field)
}

fn write_seq(out: &mut String, key: &str, w: &WeightSeq1D) {
    write!(out, "{}", key).unwrap();
    for v in w.prefix() {
        write!(out, " {}", v).unwrap();
    }
    match w.tail() {
        Tail::Constant(c) => writeln!(out, " tail {}", c).unwrap(),
        Tail::XSequence => writeln!(out, " tail xseq").unwrap(),
    }
}

pub fn write_field(f: &WeightField2D) -> String {
    let mut out = String::new();
    match f.kind() {
        FieldKind::Figure2 { a2, y2, .. } => {
            writeln!(out, "family figure2\na2 {}\ny2 {}", a2, y2).unwrap();
        }
        FieldKind::Tensor { wa, wb } => {
            writeln!(out, "family tensor").unwrap();
            write_seq(&mut out, "wa", wa);
            write_seq(&mut out, "wb", wb);
        }
    }
    for ((k1, k2), v) in f.alpha_overrides() {
        writeln!(out, "alpha {} {} {}", k1, k2, v).unwrap();
    }
    for ((k1, k2), v) in f.beta_overrides() {
        writeln!(out, "beta {} {} {}", k1, k2, v).unwrap();
    }
    out
}

pub fn parse_matrix(text: &str, mode: Mode) -> Result<Matrix, FormatError> {
    let mut it = lines(text);
    let (line, toks) = it.next().ok_or_else(|| syntax(0, "empty matrix file"))?;
    let n: usize = match toks.as_slice() {
        ["dim", n] => n.parse().map_err(|_| syntax(line, format!("bad dimension `{}`", n)))?,
        _ => return Err(syntax(line, "expected `dim <n>`")),
    };
    let mut rows = Vec::with_capacity(n);
    for (line, toks) in it {
        if toks.len() != n {
            return Err(syntax(line, format!("row has {} entries, expected {}", toks.len(), n)));
        }
        rows.push(toks.iter().map(|t| num(t, line, mode)).collect::<Result<Vec<_>, _>>()?);
    }
    if rows.len() != n {
        return Err(syntax(0, format!("found {} rows, expected {}", rows.len(), n)));
    }
    Ok(Matrix::from_rows(rows)?)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("dim {}\n", m.dim());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

#[derive(Default)]
struct Measure1DBuilder {
    atoms: Vec<(Scalar, Scalar)>,
    density: Option<Poly>,
}

impl Measure1DBuilder {
    fn push(&mut self, toks: &[&str], line: usize, mode: Mode) -> Result<(), FormatError> {
        match toks {
            ["atom", t, m] => self.atoms.push((num(t, line, mode)?, num(m, line, mode)?)),
            ["density", cs @ ..] => {
                if self.density.is_some() {
                    return Err(syntax(line, "more than one `density` line"));
                }
                let cs = cs.iter().map(|c| num(c, line, mode)).collect::<Result<Vec<_>, _>>()?;
                self.density = Some(Poly::new(cs));
            }
            _ => return Err(syntax(line, format!("expected `atom <t> <mass>` or `density …`, got `{}`", toks.join(" ")))),
        }
        Ok(())
    }

    fn build(self) -> Result<Measure1D, FormatError> {
        Ok(Measure1D::new(self.atoms, self.density.unwrap_or_else(Poly::zero))?)
    }
}

pub fn parse_measure1d(text: &str, mode: Mode) -> Result<Measure1D, FormatError> {
    let mut b = Measure1DBuilder::default();
    for (line, toks) in lines(text) {
        b.push(&toks, line, mode)?;
    }
    b.build()
}

pub fn parse_measure2d(text: &str, mode: Mode) -> Result<Measure2D, FormatError> {
    let mut terms = Vec::new();
    let mut current: Option<(Measure1DBuilder, Measure1DBuilder)> = None;
    for (line, toks) in lines(text) {
        match toks[0] {
            "term" => {
                if let Some((s, t)) = current.take() {
                    terms.push((s.build()?, t.build()?));
                }
                current = Some(Default::default());
            }
            side @ ("s" | "t") => {
                let (s, t) = current.as_mut().ok_or_else(|| syntax(line, "factor line before the first `term`"))?;
                let target = if side == "s" { s } else { t };
                target.push(&toks[1..], line, mode)?;
            }
            other => return Err(syntax(line, format!("unknown key `{}`", other))),
        }
    }
    if let Some((s, t)) = current {
        terms.push((s.build()?, t.build()?));
    }
    Ok(Measure2D::new(terms))
}

/// A planar measure if the text has any `term` line, else a measure on the line.
pub fn parse_measure(text: &str, mode: Mode) -> Result<Measure, FormatError> {
    if lines(text).any(|(_, toks)| toks[0] == "term") {
        Ok(Measure::TwoVar(parse_measure2d(text, mode)?))
    } else {
        Ok(Measure::OneVar(parse_measure1d(text, mode)?))
    }
}

fn write_measure1d_lines(out: &mut String, prefix: &str, mu: &Measure1D) {
    for (t, m) in mu.atoms() {
        writeln!(out, "{}atom {} {}", prefix, t, m).unwrap();
    }
    if !mu.density().is_zero() {
        let cs: Vec<String> = mu.density().coeffs().iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}density {}", prefix, cs.join(" ")).unwrap();
    }
}

pub fn write_measure1d(mu: &Measure1D) -> String {
    let mut out = String::new();
    write_measure1d_lines(&mut out, "", mu);
    out
}

pub fn write_measure2d(mu: &Measure2D) -> String {
    let mut out = String::new();
    for (s, t) in mu.terms() {
        out.push_str("term\n");
        write_measure1d_lines(&mut out, "s ", s);
        write_measure1d_lines(&mut out, "t ", t);
    }
    out
}

pub fn write_measure(mu: &Measure) -> String {
    match mu {
        Measure::OneVar(m) => write_measure1d(m),
        Measure::TwoVar(m) => write_measure2d(m),
    }
}

//! Line-oriented text format for structure constants.
//!
//! ```text
//! # Heisenberg algebra
//! dim 3
//! field Q
//! labels X1 X2 X3
//! bracket 1 2 : 1 e3
//! ```
//!
//! Indices are 1-based. `bracket i j : c1 e<k1> c2 e<k2> ...` sets `[e_i, e_j]`
//! and implies `[e_j, e_i]`; unspecified brackets are zero. Coefficients are
//! `p`, `p/q`, or over `Qi` also `p/q+r/s i`. `labels` is optional. When `dim`
//! is absent it is inferred from the largest index used.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{default_labels, LieAlgebra, ValidationReport, MAX_DIM};
use crate::linalg::{zero_vector, Vector};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("dimension {0} outside 1..=32")]
    DimensionOutOfRange(usize),
    #[error("index {index} outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("coefficient {0} is not in Q")]
    NotInField(String),
    #[error("antisymmetry conflict at [e{0}, e{1}]")]
    AntisymmetryConflict(usize, usize),
    #[error("Jacobi identity fails at {} index tuple(s), first {:?}", .0.jacobi.len(), .0.jacobi.first())]
    Jacobi(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based line, 0 when the error concerns the whole document.
    pub line: usize,
    /// 1-based column of the offending token.
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
        }
    }
}

impl ParseError {
    pub fn is_jacobi_failure(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Jacobi(_))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub check_jacobi: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { check_jacobi: true }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..k], column: line[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: line[..s].chars().count() + 1 });
    }
    out
}

struct BracketLine {
    line: usize,
    i: (usize, usize),
    j: (usize, usize),
    terms: Vec<(Scalar, usize, usize)>,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn parse_index(tok: &Token, line: usize) -> Result<usize, ParseError> {
    tok.text
        .parse::<usize>()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| err(line, tok.column, ParseErrorKind::Syntax(format!("expected index, found `{}`", tok.text))))
}

fn basis_index(text: &str) -> Option<usize> {
    text.strip_prefix('e')?.parse::<usize>().ok().filter(|&k| k >= 1)
}

fn parse_bracket(tokens: &[Token], line: usize) -> Result<BracketLine, ParseError> {
    let syntax = |col: usize, msg: &str| err(line, col, ParseErrorKind::Syntax(msg.to_string()));
    if tokens.len() < 4 {
        let col = tokens.last().map_or(1, |t| t.column + t.text.len());
        return Err(syntax(col, "expected `bracket <i> <j> : <coef> e<k> ...`"));
    }
    let i = (parse_index(&tokens[1], line)?, tokens[1].column);
    let j = (parse_index(&tokens[2], line)?, tokens[2].column);
    if tokens[3].text != ":" {
        return Err(syntax(tokens[3].column, "expected `:`"));
    }
    let mut terms = Vec::new();
    let mut coef: Vec<&Token> = Vec::new();
    for tok in &tokens[4..] {
        if let Some(k) = basis_index(tok.text) {
            let (value, column) = if coef.is_empty() {
                (Scalar::from_int(1), tok.column)
            } else {
                let text: Vec<&str> = coef.iter().map(|t| t.text).collect();
                let value = text
                    .join(" ")
                    .parse::<Scalar>()
                    .map_err(|m| syntax(coef[0].column, &m))?;
                (value, coef[0].column)
            };
            terms.push((value, k, column));
            coef.clear();
        } else {
            coef.push(tok);
        }
    }
    if let Some(t) = coef.first() {
        return Err(syntax(t.column, "coefficient without basis vector `e<k>`"));
    }
    if terms.is_empty() {
        return Err(syntax(tokens[3].column + 1, "empty bracket value"));
    }
    Ok(BracketLine { line, i, j, terms })
}

pub fn parse(text: &str) -> Result<LieAlgebra, ParseError> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<LieAlgebra, ParseError> {
    let mut dim: Option<usize> = None;
    let mut field: Option<Field> = None;
    let mut labels: Option<(Vec<String>, usize, usize)> = None;
    let mut brackets = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(head) = tokens.first() else { continue };
        match head.text {
            "dim" => {
                let [_, n] = tokens.as_slice() else {
                    return Err(err(line, head.column, ParseErrorKind::Syntax("expected `dim <n>`".into())));
                };
                let value = n.text.parse::<usize>().map_err(|_| {
                    err(line, n.column, ParseErrorKind::Syntax(format!("bad dimension `{}`", n.text)))
                })?;
                if value == 0 || value > MAX_DIM {
                    return Err(err(line, n.column, ParseErrorKind::DimensionOutOfRange(value)));
                }
                if dim.replace(value).is_some() {
                    return Err(err(line, head.column, ParseErrorKind::Syntax("duplicate `dim`".into())));
                }
            }
            "field" => {
                let [_, f] = tokens.as_slice() else {
                    return Err(err(line, head.column, ParseErrorKind::Syntax("expected `field Q|Qi`".into())));
                };
                let value = f.text.parse::<Field>().map_err(|_| {
                    err(line, f.column, ParseErrorKind::Syntax(format!("unknown field `{}`", f.text)))
                })?;
                if field.replace(value).is_some() {
                    return Err(err(line, head.column, ParseErrorKind::Syntax("duplicate `field`".into())));
                }
            }
            "labels" => {
                let names = tokens[1..].iter().map(|t| t.text.to_string()).collect();
                labels = Some((names, line, head.column));
            }
            "bracket" => brackets.push(parse_bracket(&tokens, line)?),
            other => {
                return Err(err(line, head.column, ParseErrorKind::Syntax(format!("unknown directive `{other}`"))));
            }
        }
    }

    let field = field.unwrap_or(Field::Q);
    let n = match dim {
        Some(n) => n,
        None => {
            let inferred = brackets
                .iter()
                .flat_map(|b| [b.i.0, b.j.0].into_iter().chain(b.terms.iter().map(|t| t.1)))
                .max()
                .ok_or_else(|| err(0, 0, ParseErrorKind::Syntax("missing `dim`".into())))?;
            if inferred > MAX_DIM {
                return Err(err(0, 0, ParseErrorKind::DimensionOutOfRange(inferred)));
            }
            inferred
        }
    };

    // (i, j) with i < j -> value of [e_i, e_j]
    let mut table: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for b in &brackets {
        for (index, column) in [b.i, b.j] {
            if index > n {
                return Err(err(b.line, column, ParseErrorKind::IndexOutOfRange { index, dim: n }));
            }
        }
        let mut value = zero_vector(n);
        for (c, k, column) in &b.terms {
            if *k > n {
                return Err(err(b.line, *column, ParseErrorKind::IndexOutOfRange { index: *k, dim: n }));
            }
            if field == Field::Q && !c.is_real() {
                return Err(err(b.line, *column, ParseErrorKind::NotInField(c.to_string())));
            }
            value[k - 1] += c;
        }
        let (i, j) = (b.i.0 - 1, b.j.0 - 1);
        if i == j {
            if value.iter().any(|x| !x.is_zero()) {
                return Err(err(b.line, b.i.1, ParseErrorKind::AntisymmetryConflict(i + 1, j + 1)));
            }
            continue;
        }
        let (key, value) = if i < j { ((i, j), value) } else { ((j, i), value.iter().map(|x| -x).collect()) };
        match table.get(&key) {
            Some(existing) if *existing != value => {
                return Err(err(b.line, b.i.1, ParseErrorKind::AntisymmetryConflict(b.i.0, b.j.0)));
            }
            _ => {
                table.insert(key, value);
            }
        }
    }

    let mut alg = LieAlgebra::abelian(n, field).map_err(|_| err(0, 0, ParseErrorKind::DimensionOutOfRange(n)))?;
    for ((i, j), v) in table {
        alg.set_bracket(i, j, v).expect("indices and field checked above");
    }
    if let Some((names, line, column)) = labels {
        if names.len() != n {
            return Err(err(
                line,
                column,
                ParseErrorKind::Syntax(format!("expected {n} labels, found {}", names.len())),
            ));
        }
        alg = alg.with_labels(names).expect("length checked");
    }
    if options.check_jacobi {
        let report = alg.validate();
        if !report.is_valid() {
            return Err(err(0, 0, ParseErrorKind::Jacobi(report)));
        }
    }
    Ok(alg)
}

/// Canonical text: LF line endings, brackets sorted by `(i, j)` with `i < j`,
/// coefficients in lowest terms. Labels are written only when they differ from
/// the default `e1 … en`.
pub fn serialize(alg: &LieAlgebra) -> String {
    let n = alg.dim();
    let mut out = format!("dim {n}\nfield {}\n", alg.field());
    if alg.labels() != default_labels("e", n).as_slice() {
        out.push_str(&format!("labels {}\n", alg.labels().join(" ")));
    }
    for (i, j, v) in alg.nonzero_brackets() {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c} e{}", k + 1))
            .collect();
        out.push_str(&format!("bracket {} {} : {}\n", i + 1, j + 1, terms.join(" ")));
    }
    out
}

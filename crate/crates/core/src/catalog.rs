//! Built-in algebras with their expected invariants, and recomputation of those
//! expectations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{default_labels, direct_sum, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Vector};
use crate::nilpotent::{characteristic_sequence, is_filiform, lower_central_series};
use crate::scalar::{Field, Scalar};
use crate::structures::{exact_invariant_verdict, solve_bi_invariant, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Valid,
    Nilpotent,
    Filiform,
    SeriesDims,
    CharSequence,
    BiInvariant,
    Invariant,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::Valid => "valid",
            Property::Nilpotent => "nilpotent",
            Property::Filiform => "filiform",
            Property::SeriesDims => "series_dims",
            Property::CharSequence => "char_sequence",
            Property::BiInvariant => "bi_invariant",
            Property::Invariant => "invariant",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Expected {
    Bool(bool),
    Dims(Vec<usize>),
    Status(Status),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Bool(b) => write!(f, "{b}"),
            Expected::Dims(d) => {
                let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Expected::Status(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub key: String,
    #[serde(skip)]
    pub algebra: LieAlgebra,
    pub provenance: String,
    pub expected: BTreeMap<Property, Expected>,
}

/// Keys checked by [`verify_catalog`], in report order.
pub fn catalog_keys() -> Vec<String> {
    let mut keys: Vec<String> = [
        "g2_1", "g4_1", "g6_1", "g8_1", "h3", "h3+h3", "g6_2", "g8_2", "g8_3", "g8_4", "r2_2", "r4_2", "r2_2+r2_2",
    ]
    .iter()
    .map(ToString::to_string)
    .collect();
    keys.extend((3..=10).map(|n| format!("L{n}")));
    keys
}

fn q(k: i64) -> Scalar {
    Scalar::from_int(k)
}

/// Builds an algebra from 1-based `(i, j, [(coef, k)])` bracket entries.
fn table(n: usize, labels: &[&str], brackets: &[(usize, usize, &[(i64, usize)])]) -> LieAlgebra {
    let mut g = LieAlgebra::abelian(n, Field::Q).expect("catalog dimensions are in range");
    for (i, j, terms) in brackets {
        let mut v: Vector = zero_vector(n);
        for &(c, k) in terms.iter() {
            v[k - 1] += &q(c);
        }
        g.set_bracket(i - 1, j - 1, v).expect("indices in range");
    }
    g.with_labels(labels.iter().map(ToString::to_string).collect()).expect("label count matches")
}

pub fn abelian(n: usize) -> Result<LieAlgebra> {
    LieAlgebra::abelian(n, Field::Q)?.with_labels(default_labels("X", n))
}

/// The model filiform algebra `[X1, Xi] = X(i+1)`, `2 ≤ i ≤ n − 1`.
pub fn model_filiform(n: usize) -> Result<LieAlgebra> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("L{n}: the model filiform algebra needs n ≥ 3")));
    }
    let mut g = abelian(n)?;
    for i in 1..n - 1 {
        g.set_bracket(0, i, crate::linalg::unit_vector(n, i + 1))?;
    }
    Ok(g)
}

pub fn h3() -> LieAlgebra {
    table(3, &["X1", "X2", "X3"], &[(1, 2, &[(1, 3)])])
}

const G6_2_LABELS: [&str; 6] = ["X1", "X2", "X3", "Y1", "Y2", "Y3"];

/// `[X2,X3] = −[Y2,Y3] = X1`, `[X2,Y3] = [Y2,X3] = Y1`.
pub fn g6_2() -> LieAlgebra {
    table(6, &G6_2_LABELS, &[(2, 3, &[(1, 1)]), (5, 6, &[(-1, 1)]), (2, 6, &[(1, 4)]), (5, 3, &[(1, 4)])])
}

pub fn g8_2() -> LieAlgebra {
    let g = direct_sum(&g6_2(), &LieAlgebra::abelian(2, Field::Q).expect("dim 2")).expect("same field");
    let labels = ["X1", "X2", "X3", "Y1", "Y2", "Y3", "X4", "Y4"];
    g.with_labels(labels.iter().map(ToString::to_string).collect()).expect("8 labels")
}

const G8_LABELS: [&str; 8] = ["X1", "X2", "X3", "X4", "Y1", "Y2", "Y3", "Y4"];

pub fn g8_3() -> LieAlgebra {
    let (x, y) = (|k: usize| k, |k: usize| k + 4);
    table(
        8,
        &G8_LABELS,
        &[
            (x(2), x(4), &[(1, x(1))]),
            (y(2), y(4), &[(-1, x(1))]),
            (x(2), y(4), &[(1, y(1))]),
            (y(2), x(4), &[(1, y(1))]),
            (x(3), x(4), &[(1, x(2))]),
            (y(3), y(4), &[(-1, x(2))]),
            (x(3), y(4), &[(1, y(2))]),
            (y(3), x(4), &[(1, y(2))]),
        ],
    )
}

pub fn g8_4() -> LieAlgebra {
    let (x, y) = (|k: usize| k, |k: usize| k + 4);
    table(
        8,
        &G8_LABELS,
        &[
            (x(2), x(3), &[(1, x(1))]),
            (y(2), y(3), &[(-1, x(1))]),
            (x(2), y(3), &[(1, y(1))]),
            (y(2), x(3), &[(1, y(1))]),
            (x(2), x(4), &[(1, y(1))]),
            (y(2), y(4), &[(-1, y(1))]),
            (x(2), y(4), &[(-1, x(1))]),
            (y(2), x(4), &[(-1, x(1))]),
        ],
    )
}

pub fn r2_2() -> LieAlgebra {
    table(2, &["X1", "X2"], &[(1, 2, &[(1, 1)])])
}

/// `[X1,X3] = X3`, `[X1,X4] = X4`, `[X2,X3] = −X4`, `[X2,X4] = X3`.
pub fn r4_2() -> LieAlgebra {
    table(
        4,
        &["X1", "X2", "X3", "X4"],
        &[(1, 3, &[(1, 3)]), (1, 4, &[(1, 4)]), (2, 3, &[(-1, 4)]), (2, 4, &[(1, 3)])],
    )
}

fn parse_index(s: &str) -> Option<usize> {
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    s.parse().ok()
}

fn single(key: &str) -> Result<LieAlgebra> {
    let unknown = || Error::UnknownKey(key.to_string());
    match key {
        "h3" => return Ok(h3()),
        "g6_2" => return Ok(g6_2()),
        "g8_2" => return Ok(g8_2()),
        "g8_3" => return Ok(g8_3()),
        "g8_4" => return Ok(g8_4()),
        "r2_2" => return Ok(r2_2()),
        "r4_2" => return Ok(r4_2()),
        _ => {}
    }
    if let Some(rest) = key.strip_prefix("abelian") {
        return abelian(parse_index(rest).ok_or_else(unknown)?);
    }
    if let Some(rest) = key.strip_prefix("Ln").or_else(|| key.strip_prefix('L')) {
        return model_filiform(parse_index(rest).ok_or_else(unknown)?);
    }
    if let Some(rest) = key.strip_prefix('g').and_then(|r| r.strip_suffix("_1")) {
        return abelian(parse_index(rest).ok_or_else(unknown)?);
    }
    Err(unknown())
}

fn provenance(key: &str) -> String {
    match key {
        "h3" => "Heisenberg algebra".into(),
        "g6_2" => "real form of h3 over C, nilpotent with bi-invariant structure".into(),
        "g8_2" => "g6_2 plus a 2-dimensional abelian factor".into(),
        "g8_3" | "g8_4" => "8-dimensional nilpotent algebra with bi-invariant structure".into(),
        "r2_2" => "2-dimensional non-abelian algebra".into(),
        "r4_2" => "4-dimensional solvable algebra with a bi-invariant structure family".into(),
        k if k.contains('+') => "direct sum of built-in algebras".into(),
        k if k.starts_with('L') => "model filiform algebra".into(),
        _ => "abelian algebra".into(),
    }
}

fn bools(entries: &[(Property, bool)]) -> impl Iterator<Item = (Property, Expected)> + '_ {
    entries.iter().map(|&(p, b)| (p, Expected::Bool(b)))
}

fn expectations(key: &str, alg: &LieAlgebra) -> BTreeMap<Property, Expected> {
    use Property::*;
    use Status::*;
    let n = alg.dim();
    let mut m = BTreeMap::new();
    m.insert(Valid, Expected::Bool(true));
    let mut set = |nil: bool, fil: bool, series: Vec<usize>, chars: Option<Vec<usize>>, bi: Option<Status>, inv: Option<Status>| {
        m.extend(bools(&[(Nilpotent, nil), (Filiform, fil)]));
        m.insert(SeriesDims, Expected::Dims(series));
        if let Some(c) = chars {
            m.insert(CharSequence, Expected::Dims(c));
        }
        if let Some(b) = bi {
            m.insert(BiInvariant, Expected::Status(b));
        }
        if let Some(i) = inv {
            m.insert(Invariant, Expected::Status(i));
        }
    };
    match key {
        "h3" => set(true, true, vec![3, 1, 0], Some(vec![2, 1]), None, None),
        "h3+h3" => set(true, false, vec![6, 2, 0], Some(vec![2, 2, 1, 1]), Some(NotExists), None),
        "g6_2" => set(true, false, vec![6, 2, 0], Some(vec![2, 2, 1, 1]), Some(Exists), Some(Exists)),
        "g8_2" | "g8_4" => {
            set(true, false, vec![8, 2, 0], Some(vec![2, 2, 1, 1, 1, 1]), Some(Exists), Some(Exists))
        }
        "g8_3" => set(true, false, vec![8, 4, 2, 0], Some(vec![3, 3, 1, 1]), Some(Exists), Some(Exists)),
        "r2_2" => set(false, false, vec![2, 1], None, Some(NotExists), Some(Exists)),
        "r4_2" => set(false, false, vec![4, 2], None, Some(Exists), Some(Exists)),
        "r2_2+r2_2" => set(false, false, vec![4, 2], None, Some(NotExists), None),
        k if k.contains('+') => {}
        k if k.starts_with('L') => {
            let mut series = vec![n];
            series.extend((0..=n - 2).rev());
            let even = (n % 2 == 0).then_some(NotExists);
            set(true, true, series, Some(vec![n - 1, 1]), even, even)
        }
        _ => {
            let even = (n % 2 == 0).then_some(Exists);
            set(true, false, vec![n, 0], Some(vec![1; n]), even, even)
        }
    }
    m
}

/// Looks up a key; `a+b` builds the direct sum of built-ins.
pub fn builtin(key: &str) -> Result<CatalogEntry> {
    let key = key.trim();
    let algebra = if key.contains('+') {
        let mut parts = key.split('+').map(|p| single(p.trim()));
        let first = parts.next().ok_or_else(|| Error::UnknownKey(key.to_string()))??;
        parts.try_fold(first, |acc, p| direct_sum(&acc, &p?))?
    } else {
        single(key)?
    };
    Ok(CatalogEntry { key: key.to_string(), provenance: provenance(key), expected: expectations(key, &algebra), algebra })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub property: Property,
    pub expected: Expected,
    pub actual: Expected,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub key: String,
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
}

/// Recomputes one expected property.
pub fn compute(alg: &LieAlgebra, property: Property) -> Result<Expected> {
    Ok(match property {
        Property::Valid => Expected::Bool(alg.is_valid()),
        Property::Nilpotent => Expected::Bool(lower_central_series(alg).is_nilpotent()),
        Property::Filiform => Expected::Bool(is_filiform(alg)),
        Property::SeriesDims => Expected::Dims(lower_central_series(alg).dims),
        Property::CharSequence => Expected::Dims(characteristic_sequence(alg)?.0.parts().to_vec()),
        Property::BiInvariant => Expected::Status(solve_bi_invariant(alg)?.status),
        Property::Invariant => Expected::Status(exact_invariant_verdict(alg)?.status),
    })
}

pub fn verify_entry(entry: &CatalogEntry) -> EntryCheck {
    let mismatches: Vec<Mismatch> = entry
        .expected
        .iter()
        .filter_map(|(&property, expected)| {
            let actual = compute(&entry.algebra, property).unwrap_or(Expected::Bool(false));
            (actual != *expected).then(|| Mismatch { property, expected: expected.clone(), actual })
        })
        .collect();
    EntryCheck { key: entry.key.clone(), passed: mismatches.is_empty(), mismatches }
}

pub fn verify_catalog() -> Vec<EntryCheck> {
    catalog_keys().iter().map(|k| verify_entry(&builtin(k).expect("catalog keys resolve"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_forms() {
        assert_eq!(builtin("abelian4").unwrap().algebra.dim(), 4);
        assert_eq!(builtin("abelian(4)").unwrap().algebra.dim(), 4);
        assert_eq!(builtin("Ln(6)").unwrap().algebra, builtin("L6").unwrap().algebra);
        assert_eq!(builtin("g6_1").unwrap().algebra, abelian(6).unwrap());
        assert_eq!(builtin("h3+h3").unwrap().algebra.dim(), 6);
        assert!(matches!(builtin("nope"), Err(Error::UnknownKey(_))));
        assert!(builtin("L2").is_err());
    }

    #[test]
    fn g6_2_table() {
        let g = g6_2();
        let x1: Vector = (0..6).map(|k| q(i64::from(k == 0))).collect();
        let y1: Vector = (0..6).map(|k| q(i64::from(k == 3))).collect();
        assert_eq!(g.structure(1, 2), &x1);
        assert_eq!(g.structure(4, 5), &x1.iter().map(|c| -c).collect::<Vector>());
        assert_eq!(g.structure(1, 5), &y1);
        assert_eq!(g.structure(4, 2), &y1);
        assert_eq!(g.nonzero_brackets().count(), 4);
    }

    #[test]
    fn all_builtins_valid() {
        for key in catalog_keys() {
            assert!(builtin(&key).unwrap().algebra.is_valid(), "{key}");
        }
    }
}

//! TOML entry files.
//!
//! ```toml
//! name = "d7-A1"
//! degree = 7
//! expected_type = "A1"
//! complement = "A2"
//! contraction = []
//!
//! [seed]
//! form = "triple_line"
//! coefficients = { L = "3" }
//!
//! [[curves]]
//! id = "L"
//! kind = "line"
//!
//! [[points]]
//! id = 1
//! on = ["L"]
//!
//! [[points]]
//! id = 2
//! parent = 1
//! on = ["L"]
//!
//! [tiger]
//! L = "3"
//! E1 = "2"
//! E2 = "4"
//! ```
//!
//! Rationals are strings `"p/q"` or `"p"`; decimals are rejected. `parent`
//! marks an infinitely near point on the named exceptional curve. Curve kinds
//! are `line` and `conic`; seed forms are `triple_line`, `two_lines`,
//! `line_plus_tangent_conic` and `three_concurrent_lines`; complements are
//! `A2`, `A1xA1minus1pt` and `A1xA1minus2pts`.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use toml::Spanned;

use crate::blowup::{CurveDecl, PointDecl};
use crate::constructions::{ordered_terms, Complement, ConstructionEntry, PlaneSeed, SeedForm};
use crate::dynkin::SingularityType;
use crate::lattice::QDivisor;
use crate::{format_rational, parse_rational, Error, Rational, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    degree: u32,
    expected_type: Spanned<String>,
    complement: Complement,
    #[serde(default)]
    contraction: Vec<String>,
    seed: RawSeed,
    curves: Vec<CurveDecl>,
    points: Vec<PointDecl>,
    tiger: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeed {
    form: SeedForm,
    coefficients: BTreeMap<String, Spanned<String>>,
}

/// Curves, points and an optional contraction; the rest of an entry file is
/// ignored.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct ClassifyConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub curves: Vec<CurveDecl>,
    pub points: Vec<PointDecl>,
    #[serde(default)]
    pub contraction: Vec<String>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn located(text: &str, span: std::ops::Range<usize>, msg: impl std::fmt::Display) -> Error {
    let (line, column) = position(text, span.start);
    Error::Parse(format!("line {line}, column {column}: {msg}"))
}

fn bare(e: Error) -> String {
    match e {
        Error::Parse(msg) | Error::InvalidArgument(msg) => msg,
        other => other.to_string(),
    }
}

fn rational_at(text: &str, value: &Spanned<String>) -> Result<Rational> {
    parse_rational(value.get_ref()).map_err(|e| located(text, value.span(), bare(e)))
}

/// Parses an entry file and checks the entry's invariants.
pub fn parse_entry(text: &str) -> Result<ConstructionEntry> {
    let raw: RawEntry = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    let expected_type = SingularityType::parse(raw.expected_type.get_ref(), raw.degree)
        .map_err(|e| located(text, raw.expected_type.span(), bare(e)))?;

    let mut coefficients = Vec::new();
    for (id, value) in &raw.seed.coefficients {
        coefficients.push((id.clone(), rational_at(text, value)?));
    }
    let rank = |id: &str| raw.curves.iter().position(|c| c.id == id).unwrap_or(usize::MAX);
    coefficients.sort_by_key(|(id, _)| rank(id));
    let seed = PlaneSeed::new(raw.seed.form, coefficients)?;

    let mut tiger = QDivisor::new();
    for (id, value) in &raw.tiger {
        let c = rational_at(text, value)?;
        if c == Rational::from_integer(0) {
            return Err(located(text, value.span(), format!("zero coefficient for {id}; omit the entry instead")));
        }
        tiger.set(id.clone(), c);
    }

    let entry = ConstructionEntry {
        name: raw.name,
        degree: raw.degree,
        expected_type,
        seed,
        curves: raw.curves,
        points: raw.points,
        tiger,
        contraction: raw.contraction,
        complement: raw.complement,
    };
    entry.model()?;
    Ok(entry)
}

pub fn parse_classify_config(text: &str) -> Result<ClassifyConfig> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))
}

/// Serializes a rational-valued map in a fixed order, values as strings.
struct OrderedRationals<'a>(&'a [(String, Rational)]);

impl Serialize for OrderedRationals<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (id, c) in self.0 {
            map.serialize_entry(id, &format_rational(c))?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct OutSeed<'a> {
    form: SeedForm,
    coefficients: OrderedRationals<'a>,
}

#[derive(Serialize)]
struct OutEntry<'a> {
    name: &'a str,
    degree: u32,
    expected_type: String,
    complement: Complement,
    contraction: &'a [String],
    seed: OutSeed<'a>,
    curves: &'a [CurveDecl],
    points: &'a [PointDecl],
    tiger: OrderedRationals<'a>,
}

/// Renders an entry in the file format; [`parse_entry`] reads it back.
pub fn write_entry(entry: &ConstructionEntry) -> Result<String> {
    let tiger = ordered_terms(&entry.tiger, &entry.curves, entry.points.len());
    let out = OutEntry {
        name: &entry.name,
        degree: entry.degree,
        expected_type: entry.expected_type.to_string(),
        complement: entry.complement,
        contraction: &entry.contraction,
        seed: OutSeed { form: entry.seed.form, coefficients: OrderedRationals(&entry.seed.coefficients) },
        curves: &entry.curves,
        points: &entry.points,
        tiger: OrderedRationals(&tiger),
    };
    toml::to_string(&out).map_err(|e| Error::InvalidState(e.to_string()))
}

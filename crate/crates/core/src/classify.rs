//! Existence of anticanonical polar cylinders on du Val del Pezzo surfaces.
//!
//! A surface of degree `d` has no `(−K)`-polar cylinder exactly when
//!
//! 1. `d = 1` and its singular points (if any) are of types `A1`, `A2`, `A3`, `D4`;
//! 2. `d = 2` and its singular points (if any) are of type `A1`;
//! 3. `d = 3` and it is smooth.
//!
//! Every other surface has one. Prime marks play no role in the decision.

use std::fmt;

use serde::Serialize;

use crate::constructions::ConstructionEntry;
use crate::dynkin::{check_degree, AdeType, Component, SingularityType};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    HasCylinder,
    NoCylinder,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::HasCylinder => "HasCylinder",
            Answer::NoCylinder => "NoCylinder",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    /// Theorem clause, optionally followed by a witness.
    pub basis: String,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (basis: {})", self.answer, self.basis)
    }
}

/// Shipped witness entries by degree and type.
const WITNESSES: &[(u32, &str, &str)] = &[
    (2, "A2", "d2-A2"),
    (5, "A4", "d5-A4"),
    (5, "A3", "d5-A3"),
    (5, "A2+A1", "d5-A2A1"),
    (5, "A2", "d5-A2"),
    (5, "2A1", "d5-2A1"),
    (5, "A1", "d5-A1"),
    (6, "A2+A1", "d6-A2A1"),
    (6, "A2", "d6-A2"),
    (6, "2A1", "d6-2A1"),
    (6, "A1'", "d6-A1p"),
    (6, "A1''", "d6-A1pp"),
    (7, "A1", "d7-A1"),
];

/// Name of the shipped entry witnessing a cylinder for this type, if any.
pub fn witness(ty: &SingularityType) -> Option<&'static str> {
    let text = ty.to_string();
    WITNESSES.iter().find(|&&(d, t, _)| d == ty.degree && t == text).map(|&(_, _, name)| name)
}

fn only(ade: &AdeType, allowed: &[Component]) -> bool {
    ade.components().iter().all(|c| allowed.contains(c))
}

pub fn decide_cylinder(degree: u32, ty: &SingularityType) -> Result<Verdict> {
    check_degree(degree, &ty.ade)?;
    if ty.degree != degree {
        return Err(Error::InvalidArgument(format!("type {ty} was given for degree {}, not {degree}", ty.degree)));
    }
    let ade = &ty.ade;
    let clause = match degree {
        1 if only(ade, &[Component::A(1), Component::A(2), Component::A(3), Component::D(4)]) => Some(1),
        2 if only(ade, &[Component::A(1)]) => Some(2),
        3 if ade.is_smooth() => Some(3),
        _ => None,
    };
    Ok(match clause {
        Some(k) => Verdict { answer: Answer::NoCylinder, basis: format!("Theorem I.({k})") },
        None => {
            let basis = match witness(ty) {
                Some(name) => format!("Theorem II; witness {name}"),
                None if degree == 8 && ty.ade.to_string() == "A1" => "Theorem II; quadric cone".to_string(),
                None => "Theorem II".to_string(),
            };
            Verdict { answer: Answer::HasCylinder, basis }
        }
    })
}

/// Parses `type_text` for the given degree and decides.
pub fn decide_str(degree: u32, type_text: &str) -> Result<Verdict> {
    decide_cylinder(degree, &SingularityType::parse(type_text, degree)?)
}

/// Whether every entry's type is one the classification says has a cylinder.
pub fn verdict_consistency<'a>(entries: impl IntoIterator<Item = &'a ConstructionEntry>) -> bool {
    entries
        .into_iter()
        .all(|e| matches!(decide_cylinder(e.degree, &e.expected_type), Ok(v) if v.answer == Answer::HasCylinder))
}

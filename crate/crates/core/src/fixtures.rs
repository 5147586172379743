//! Shipped construction entries, embedded at compile time.

use crate::constructions::ConstructionEntry;
use crate::entry_file::parse_entry;
use crate::Result;

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../fixtures/", $name, ".toml")))
    };
}

/// File stem and contents of every shipped entry, by degree then type.
pub const SHIPPED: &[(&str, &str)] = &[
    fixture!("d2-A2"),
    fixture!("d5-A4"),
    fixture!("d5-A3"),
    fixture!("d5-A2A1"),
    fixture!("d5-A2"),
    fixture!("d5-2A1"),
    fixture!("d5-A1"),
    fixture!("d6-A2A1"),
    fixture!("d6-A2"),
    fixture!("d6-2A1"),
    fixture!("d6-A1p"),
    fixture!("d6-A1pp"),
    fixture!("d7-A1"),
];

/// Parses every shipped entry.
pub fn shipped() -> Result<Vec<ConstructionEntry>> {
    SHIPPED.iter().map(|(_, text)| parse_entry(text)).collect()
}

/// The shipped entry with this name or file stem.
pub fn find(name: &str) -> Option<Result<ConstructionEntry>> {
    let name = name.strip_suffix(".toml").unwrap_or(name);
    SHIPPED.iter().find(|(stem, _)| *stem == name).map(|(_, text)| parse_entry(text))
}

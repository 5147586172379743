//! Exact Picard-lattice calculus for weak del Pezzo surfaces.
//!
//! A surface is modelled as an iterated blow-up of the projective plane,
//! described declaratively by the plane curves involved and the (possibly
//! infinitely near) points blown up. Everything downstream reduces to exact
//! rational arithmetic in the lattice `Z^{1,n}`:
//!
//! * [`lattice`]: divisor classes, the intersection form, enumeration of
//!   (-1)-classes and roots.
//! * [`blowup`]: configurations to surface models, contraction of (-1)-curves.
//! * [`negcurves`]: (-2)-curves, effective roots, irreducible (-1)-curves and
//!   their incidence graph.
//! * [`dynkin`]: ADE classification and the prime-mark refinement.
//! * [`constructions`]: anticanonical cylinder witnesses and their verifier.
//! * [`logpair`]: the convexity trick and the D4 log-canonicity criterion.
//! * [`classify`]: the cylinder-existence decision procedure.
//! * [`entry_file`]: the TOML format construction entries are stored in.

pub mod blowup;
pub mod classify;
pub mod constructions;
pub mod dynkin;
pub mod entry_file;
mod error;
pub mod fixtures;
pub mod lattice;
pub mod logpair;
pub mod negcurves;

pub use error::{Error, Result};

/// Exact rational scalar used throughout.
pub type Rational = num_rational::Ratio<i64>;

/// Parses `"p/q"` or `"p"` into a [`Rational`]. Decimal literals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?} (expected \"p/q\" or \"p\")"));
    if t.is_empty() || t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = num.parse().map_err(|_| bad())?;
    let d: i64 = den.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Formats a rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

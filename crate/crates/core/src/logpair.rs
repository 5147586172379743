//! Two log-pair computations that reduce to coefficient arithmetic.
//!
//! [`convexity_mu`] takes two effective `Q`-divisors `D` and `T` with the same
//! class and finds the largest `μ` keeping `(1+μ)D − μT` effective. The
//! result has the same class as `D` and loses at least one component of `T`.
//!
//! [`d4_not_lc`] is the log-canonicity test at a `D4` point for a boundary
//! `a₁E₁ + a₂E₂ + a₃E₃ + a₄E₄` on the resolution, `E₃` being the curve that
//! meets the other three.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::lattice::DivisorClass;
use crate::{Error, Rational, Result};

/// A divisor `Σ aᵢDᵢ` with every `aᵢ > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoeffMap {
    terms: BTreeMap<String, Rational>,
}

impl CoeffMap {
    pub fn new<I, S>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (id, c) in terms {
            let id = id.into();
            if !c.is_positive() {
                return Err(Error::InvalidArgument(format!("coefficient of {id} is {c}, not positive")));
            }
            if map.insert(id.clone(), c).is_some() {
                return Err(Error::InvalidArgument(format!("component {id} listed twice")));
            }
        }
        Ok(CoeffMap { terms: map })
    }

    pub fn get(&self, id: &str) -> Rational {
        self.terms.get(id).copied().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn support(&self) -> BTreeSet<&str> {
        self.terms.keys().map(String::as_str).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn class(&self, classes: &BTreeMap<String, DivisorClass>) -> Result<DivisorClass> {
        let mut total: Option<DivisorClass> = None;
        for (id, c) in self.iter() {
            let class = classes
                .get(id)
                .ok_or_else(|| Error::InvalidReference(format!("no class given for component {id}")))?
                .scale(c);
            total = Some(match total {
                None => class,
                Some(t) => t.checked_add(&class)?,
            });
        }
        total.ok_or_else(|| Error::InvalidArgument("empty divisor".into()))
    }
}

/// Result of [`convexity_mu`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convexity {
    pub mu: Rational,
    pub d_mu: CoeffMap,
    pub dropped: BTreeSet<String>,
}

/// Largest `μ ≥ 0` with `(1+μ)D − μT` effective.
pub fn convexity_mu(d: &CoeffMap, t: &CoeffMap, classes: &BTreeMap<String, DivisorClass>) -> Result<Convexity> {
    if d == t {
        return Err(Error::InvalidArgument("T equals D".into()));
    }
    if d.is_empty() || t.is_empty() {
        return Err(Error::InvalidArgument("D and T must be nonzero".into()));
    }
    if let Some(id) = t.support().difference(&d.support()).next() {
        return Err(Error::InvalidArgument(format!("component {id} of T is not in the support of D")));
    }
    let (dc, tc) = (d.class(classes)?, t.class(classes)?);
    if dc != tc {
        return Err(Error::InvalidArgument(format!("classes differ: D ~ {dc}, T ~ {tc}")));
    }

    let mu = d
        .iter()
        .filter_map(|(id, di)| {
            let ti = t.get(id);
            (ti > di).then(|| di / (ti - di))
        })
        .min()
        .ok_or_else(|| {
            Error::InconsistentConfiguration(
                "T ≤ D componentwise with T ≠ D, impossible for equal classes of an ample divisor".into(),
            )
        })?;

    let one = Rational::from_integer(1);
    let mut kept = Vec::new();
    let mut dropped = BTreeSet::new();
    for (id, di) in d.iter() {
        let c = (one + mu) * di - mu * t.get(id);
        if c.is_zero() {
            dropped.insert(id.to_string());
        } else {
            kept.push((id.to_string(), c));
        }
    }
    Ok(Convexity { mu, d_mu: CoeffMap::new(kept)?, dropped })
}

/// Whether the pair is not log canonical at the `D4` point, i.e. `a₃ > 1`.
pub fn d4_not_lc(a1: Rational, a2: Rational, a3: Rational, a4: Rational) -> Result<bool> {
    if let Some(a) = [a1, a2, a3, a4].into_iter().find(|a| a.is_negative()) {
        return Err(Error::InvalidArgument(format!("negative coefficient {a}")));
    }
    Ok(a3 > Rational::from_integer(1))
}

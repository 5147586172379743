//! Declarative blow-up calculus.
//!
//! A configuration is a list of plane curves plus an ordered list of points,
//! each lying on some of the curves and/or on earlier exceptional curves
//! (infinitely near points). Points are otherwise in general position; this
//! is the genericity contract every downstream computation relies on. No
//! coordinates are involved: a point's incidences fully determine the classes
//! of all proper transforms.
//!
//! Tangency and other non-transversal contact is expressed with infinitely
//! near points lying on both transforms, never by a separate flag.

use std::collections::HashSet;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::lattice::{canonical_class, enumerate_in_complement, DivisorClass, MAX_BLOWUPS};
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Line,
    Conic,
}

impl CurveKind {
    pub fn degree(self) -> i64 {
        match self {
            CurveKind::Line => 1,
            CurveKind::Conic => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDecl {
    pub id: String,
    pub kind: CurveKind,
}

impl CurveDecl {
    pub fn new(id: impl Into<String>, kind: CurveKind) -> Self {
        CurveDecl { id: id.into(), kind }
    }

    pub fn line(id: impl Into<String>) -> Self {
        Self::new(id, CurveKind::Line)
    }

    pub fn conic(id: impl Into<String>) -> Self {
        Self::new(id, CurveKind::Conic)
    }
}

/// The `id`-th point blown up (1-based).
///
/// `parent = Some(j)` makes the point infinitely near, lying on the proper
/// transform of `E_j`; `on` lists further curves and earlier exceptionals
/// whose current proper transforms pass through the point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDecl {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
    #[serde(default)]
    pub on: Vec<String>,
}

impl PointDecl {
    pub fn new(id: usize, parent: Option<usize>, on: &[&str]) -> Self {
        PointDecl { id, parent, on: on.iter().map(|s| s.to_string()).collect() }
    }
}

/// Label of the `i`-th exceptional curve.
pub fn exceptional_id(i: usize) -> String {
    format!("E{i}")
}

/// Parses `E<i>` back to its ordinal.
pub fn exceptional_index(id: &str) -> Option<usize> {
    let digits = id.strip_prefix('E')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveOrigin {
    Plane(CurveKind),
    Exceptional(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelCurve {
    pub id: String,
    pub origin: CurveOrigin,
    pub class: DivisorClass,
    pub contracted: bool,
}

/// A blow-up of the plane, possibly followed by contractions of (-1)-curves.
///
/// Contractions keep the ambient lattice `Z^{1,n}`: contracting `c` replaces
/// every surviving class `D` by `D + (D·c)·c`, its projection to `c^⊥`, and
/// the canonical class likewise. Intersection numbers of projected classes
/// equal those of the pushed-forward curves on the contracted surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    n: usize,
    curves: Vec<ModelCurve>,
    canonical: DivisorClass,
    contracted: Vec<String>,
    contracted_classes: Vec<DivisorClass>,
    curve_decls: Vec<CurveDecl>,
    point_decls: Vec<PointDecl>,
    genericity: bool,
}

impl SurfaceModel {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the Picard group of the current surface.
    pub fn picard_rank(&self) -> usize {
        self.n + 1 - self.contracted.len()
    }

    /// `K²` of the current surface.
    pub fn degree(&self) -> Rational {
        self.canonical.square()
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn contracted(&self) -> &[String] {
        &self.contracted
    }

    pub fn contracted_classes(&self) -> &[DivisorClass] {
        &self.contracted_classes
    }

    pub fn curve_decls(&self) -> &[CurveDecl] {
        &self.curve_decls
    }

    /// Points with `parent` folded into `on`.
    pub fn point_decls(&self) -> &[PointDecl] {
        &self.point_decls
    }

    /// Always true for models built here: points are general subject to the
    /// declared incidences.
    pub fn genericity(&self) -> bool {
        self.genericity
    }

    /// All curves, contracted ones included, in declaration order
    /// (plane curves first, then `E1..En`).
    pub fn curves(&self) -> &[ModelCurve] {
        &self.curves
    }

    pub fn surviving(&self) -> impl Iterator<Item = &ModelCurve> {
        self.curves.iter().filter(|c| !c.contracted)
    }

    pub fn curve(&self, id: &str) -> Option<&ModelCurve> {
        self.curves.iter().find(|c| c.id == id)
    }

    /// Class of a surviving curve.
    pub fn class(&self, id: &str) -> Option<&DivisorClass> {
        self.curve(id).filter(|c| !c.contracted).map(|c| &c.class)
    }

    /// Class of any curve, as it was when (or if) it was contracted.
    pub fn class_any(&self, id: &str) -> Option<&DivisorClass> {
        self.curve(id).map(|c| &c.class)
    }

    pub fn self_intersection(&self, id: &str) -> Result<Rational> {
        match self.curve(id) {
            None => Err(Error::InvalidReference(format!("unknown curve {id:?}"))),
            Some(c) if c.contracted => Err(Error::InvalidReference(format!("curve {id:?} has been contracted"))),
            Some(c) => Ok(c.class.square()),
        }
    }

    pub fn intersection(&self, a: &str, b: &str) -> Result<Rational> {
        let ca = self.class(a).ok_or_else(|| Error::InvalidReference(format!("unknown or contracted curve {a:?}")))?;
        let cb = self.class(b).ok_or_else(|| Error::InvalidReference(format!("unknown or contracted curve {b:?}")))?;
        ca.intersect(cb)
    }

    /// Contracts the listed curves in order; each must be a (-1)-curve at its turn.
    pub fn contract<S: AsRef<str>>(&self, sequence: &[S]) -> Result<SurfaceModel> {
        let mut model = self.clone();
        for id in sequence {
            model.contract_one(id.as_ref())?;
        }
        Ok(model)
    }

    fn contract_one(&mut self, id: &str) -> Result<()> {
        let square = self.self_intersection(id)?;
        if square != Rational::from_integer(-1) {
            return Err(Error::NotContractible { id: id.to_string(), square });
        }
        let c = self.class(id).expect("checked above").clone();
        for curve in self.curves.iter_mut().filter(|x| !x.contracted && x.id != id) {
            let k = curve.class.dot(&c);
            curve.class = curve.class.clone() + c.scale(k);
        }
        let k = self.canonical.dot(&c);
        self.canonical = self.canonical.clone() + c.scale(k);
        let curve = self.curves.iter_mut().find(|x| x.id == id).expect("checked above");
        curve.contracted = true;
        self.contracted.push(id.to_string());
        self.contracted_classes.push(c);
        Ok(())
    }

    /// Integral classes of the current surface with `x² = square` and
    /// `x·K = k_degree`. Requires `K² > 0`.
    pub fn lattice_classes(&self, square: i64, k_degree: i64) -> Result<Vec<DivisorClass>> {
        if !self.degree().is_positive() {
            return Err(Error::InvalidState(format!("K² = {} is not positive", self.degree())));
        }
        enumerate_in_complement(&self.canonical, &self.contracted_classes, square, k_degree)
    }

    /// Whether `−K` is nef and big on the current surface.
    pub fn anticanonical_check(&self) -> bool {
        let anti = -self.canonical.clone();
        if !anti.square().is_positive() {
            return false;
        }
        if self.surviving().any(|c| anti.dot(&c.class).is_negative()) {
            return false;
        }
        // Self-test: every (-1)-class and root pairs nonnegatively with −K.
        let minus1 = self.lattice_classes(-1, -1).unwrap_or_default();
        let roots = self.lattice_classes(-2, 0).unwrap_or_default();
        minus1.iter().chain(&roots).all(|c| !anti.dot(c).is_negative())
    }
}

fn position(curves: &[ModelCurve], id: &str) -> Option<usize> {
    curves.iter().position(|c| c.id == id)
}

/// Resolves a configuration into lattice classes.
pub fn build_model(curves: &[CurveDecl], points: &[PointDecl]) -> Result<SurfaceModel> {
    let n = points.len();
    if n > MAX_BLOWUPS {
        return Err(Error::InvalidArgument(format!("{n} points exceed the maximum of {MAX_BLOWUPS}")));
    }
    let mut seen = HashSet::new();
    for c in curves {
        if c.id.is_empty() {
            return Err(Error::InvalidArgument("empty curve id".into()));
        }
        if exceptional_index(&c.id).is_some() {
            return Err(Error::InvalidArgument(format!("curve id {:?} is reserved for exceptional curves", c.id)));
        }
        if !seen.insert(c.id.as_str()) {
            return Err(Error::InvalidArgument(format!("duplicate curve id {:?}", c.id)));
        }
    }

    let mut model_curves: Vec<ModelCurve> = Vec::with_capacity(curves.len() + n);
    for c in curves {
        let class = DivisorClass::hyperplane(n)?.scale(Rational::from_integer(c.kind.degree()));
        model_curves.push(ModelCurve {
            id: c.id.clone(),
            origin: CurveOrigin::Plane(c.kind),
            class,
            contracted: false,
        });
    }
    for i in 1..=n {
        model_curves.push(ModelCurve {
            id: exceptional_id(i),
            origin: CurveOrigin::Exceptional(i),
            class: DivisorClass::exceptional(n, i)?,
            contracted: false,
        });
    }

    let mut normalized = Vec::with_capacity(n);
    for (k, p) in points.iter().enumerate() {
        let i = k + 1;
        if p.id != i {
            return Err(Error::InvalidArgument(format!(
                "points must be numbered 1..{n} in blow-up order; found {} at position {i}",
                p.id
            )));
        }
        let mut on: Vec<String> = Vec::new();
        if let Some(j) = p.parent {
            if j == 0 || j >= i {
                return Err(Error::InvalidReference(format!(
                    "point {i} has parent {j}, which is not an earlier point"
                )));
            }
            on.push(exceptional_id(j));
        }
        for id in &p.on {
            if on.contains(id) {
                if p.parent.map(exceptional_id).as_ref() == Some(id) {
                    continue;
                }
                return Err(Error::InconsistentConfiguration(format!("point {i} lists {id:?} twice")));
            }
            match exceptional_index(id) {
                Some(j) if j >= i => {
                    return Err(Error::InvalidReference(format!(
                        "point {i} cannot lie on {id}, which does not exist yet"
                    )))
                }
                Some(_) => {}
                None if position(&model_curves, id).is_none() => {
                    return Err(Error::InvalidReference(format!("point {i} lies on undeclared curve {id:?}")))
                }
                None => {}
            }
            on.push(id.clone());
        }

        let idx: Vec<usize> = on.iter().map(|id| position(&model_curves, id).expect("validated")).collect();
        // Residual intersection budget: the current transforms must still meet.
        for (x, &a) in idx.iter().enumerate() {
            for &b in &idx[x + 1..] {
                let budget = model_curves[a].class.dot(&model_curves[b].class);
                if !budget.is_positive() {
                    return Err(Error::InconsistentConfiguration(format!(
                        "point {i}: the transforms of {} and {} no longer meet (intersection {budget})",
                        model_curves[a].id, model_curves[b].id
                    )));
                }
            }
        }
        let e_i = DivisorClass::exceptional(n, i)?;
        for &a in &idx {
            model_curves[a].class = model_curves[a].class.clone() - e_i.clone();
        }
        normalized.push(PointDecl { id: i, parent: p.parent, on });
    }

    Ok(SurfaceModel {
        n,
        curves: model_curves,
        canonical: canonical_class(n)?,
        contracted: Vec::new(),
        contracted_classes: Vec::new(),
        curve_decls: curves.to_vec(),
        point_decls: normalized,
        genericity: true,
    })
}

/// Standalone form of [`SurfaceModel::anticanonical_check`].
pub fn anticanonical_check(model: &SurfaceModel) -> bool {
    model.anticanonical_check()
}

/// Standalone form of [`SurfaceModel::contract`].
pub fn contract<S: AsRef<str>>(model: &SurfaceModel, sequence: &[S]) -> Result<SurfaceModel> {
    model.contract(sequence)
}

/// Standalone form of [`SurfaceModel::self_intersection`].
pub fn self_intersection(model: &SurfaceModel, id: &str) -> Result<Rational> {
    model.self_intersection(id)
}

//! Negative curves on a surface model.
//!
//! Under the genericity contract the irreducible (-2)-curves are exactly the
//! declared curves and exceptionals whose current class is a root
//! (`C² = −2`, `C·K = 0`); a coincidence producing further (-2)-curves would
//! have to be declared. A (-1)-class is taken to be an irreducible curve iff
//! it meets every (-2)-curve nonnegatively, the usual criterion on weak del
//! Pezzo surfaces.

use num_traits::{Signed, Zero};

use crate::blowup::SurfaceModel;
use crate::dynkin::RootGraph;
use crate::lattice::DivisorClass;
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Minus2,
    Minus1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    /// Curve id when the class belongs to a declared curve or exceptional,
    /// otherwise the rendered class.
    pub label: String,
    pub kind: VertexKind,
    pub class: DivisorClass,
}

/// Incidence graph of the (-2)-curves and irreducible (-1)-curves.
///
/// Vertices are sorted by kind, then by class, so the graph does not depend
/// on the order in which curves were declared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegCurveGraph {
    vertices: Vec<Vertex>,
    weights: Vec<Vec<i64>>,
}

impl NegCurveGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Intersection number of two distinct vertices.
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.weights[i][j]
    }

    pub fn minus2(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&i| self.vertices[i].kind == VertexKind::Minus2)
    }

    pub fn minus1(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&i| self.vertices[i].kind == VertexKind::Minus1)
    }

    /// The (-2)-part as a [`RootGraph`]; vertex `k` of the result is the
    /// `k`-th minus2 vertex here (minus2 vertices come first).
    pub fn root_graph(&self) -> RootGraph {
        let idx: Vec<usize> = self.minus2().collect();
        let mut g = RootGraph::new(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                g.set_weight(a, b, self.weights[i][j]);
            }
        }
        g
    }

    /// For each (-1)-vertex (in [`Self::minus1`] order), the indices of the
    /// root-graph vertices it meets.
    pub fn minus1_incidences(&self) -> Vec<Vec<usize>> {
        let roots: Vec<usize> = self.minus2().collect();
        self.minus1().map(|u| (0..roots.len()).filter(|&k| self.weights[u][roots[k]] > 0).collect()).collect()
    }

    /// Assembles a graph from explicit data; weights must be symmetric.
    pub fn from_parts(vertices: Vec<Vertex>, weights: Vec<Vec<i64>>) -> Result<Self> {
        let n = vertices.len();
        if weights.len() != n || weights.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument("weight matrix does not match vertex count".into()));
        }
        if (0..n).any(|i| (0..i).any(|j| weights[i][j] != weights[j][i])) {
            return Err(Error::InvalidArgument("weight matrix is not symmetric".into()));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (vertices[a].kind, &vertices[a].class).cmp(&(vertices[b].kind, &vertices[b].class)));
        let sorted_vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        let sorted_weights = order.iter().map(|&i| order.iter().map(|&j| weights[i][j]).collect()).collect();
        Ok(NegCurveGraph { vertices: sorted_vertices, weights: sorted_weights })
    }
}

fn is_value(q: Rational, v: i64) -> bool {
    q == Rational::from_integer(v)
}

/// Ids of the surviving curves whose class is a root, sorted by class.
pub fn simple_roots(model: &SurfaceModel) -> Vec<String> {
    let k = model.canonical();
    let mut found: Vec<(&DivisorClass, &str)> = model
        .surviving()
        .filter(|c| is_value(c.class.square(), -2) && c.class.dot(k).is_zero())
        .map(|c| (&c.class, c.id.as_str()))
        .collect();
    found.sort();
    found.into_iter().map(|(_, id)| id.to_string()).collect()
}

fn simple_root_classes(model: &SurfaceModel) -> Vec<DivisorClass> {
    simple_roots(model).iter().map(|id| model.class(id).expect("surviving").clone()).collect()
}

/// Positive roots of the subsystem spanned by the (-2)-curves, ordered by
/// height and then by class.
pub fn effective_roots(model: &SurfaceModel) -> Result<Vec<DivisorClass>> {
    positive_root_closure(&simple_root_classes(model))
}

/// Closes a simply-laced simple system under `β ↦ β + α` for `β·α = 1`.
pub fn positive_root_closure(simple: &[DivisorClass]) -> Result<Vec<DivisorClass>> {
    for (i, a) in simple.iter().enumerate() {
        for b in &simple[i + 1..] {
            let w = a.intersect(b)?;
            if !(w.is_zero() || is_value(w, 1)) {
                return Err(Error::InvalidConfiguration(format!("(-2)-curves {a} and {b} meet with multiplicity {w}")));
            }
        }
    }
    let one = Rational::from_integer(1);
    let mut roots: Vec<(usize, DivisorClass)> = simple.iter().map(|s| (1, s.clone())).collect();
    let mut cursor = 0;
    while cursor < roots.len() {
        let (height, beta) = roots[cursor].clone();
        for alpha in simple {
            if beta.dot(alpha) == one {
                let gamma = beta.clone() + alpha.clone();
                if !roots.iter().any(|(_, r)| *r == gamma) {
                    roots.push((height + 1, gamma));
                }
            }
        }
        cursor += 1;
    }
    roots.sort();
    Ok(roots.into_iter().map(|(_, r)| r).collect())
}

/// (-1)-classes of the current surface meeting every (-2)-curve nonnegatively.
pub fn irreducible_minus1(model: &SurfaceModel) -> Result<Vec<DivisorClass>> {
    if !model.anticanonical_check() {
        return Err(Error::InvalidState("surface is not weak del Pezzo (−K is not nef and big)".into()));
    }
    let simple = simple_root_classes(model);
    let all = model.lattice_classes(-1, -1)?;
    Ok(all.into_iter().filter(|c| simple.iter().all(|r| !c.dot(r).is_negative())).collect())
}

/// Graph on the (-2)-curves and irreducible (-1)-curves.
pub fn neg_curve_graph(model: &SurfaceModel) -> Result<NegCurveGraph> {
    let mut vertices: Vec<Vertex> = simple_roots(model)
        .into_iter()
        .map(|id| Vertex { class: model.class(&id).expect("surviving").clone(), label: id, kind: VertexKind::Minus2 })
        .collect();
    for class in irreducible_minus1(model)? {
        let label =
            model.surviving().find(|c| c.class == class).map(|c| c.id.clone()).unwrap_or_else(|| class.to_string());
        vertices.push(Vertex { label, kind: VertexKind::Minus1, class });
    }
    let n = vertices.len();
    let mut weights = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = vertices[i].class.dot(&vertices[j].class);
            if !w.is_integer() || w.is_negative() {
                return Err(Error::InvalidConfiguration(format!(
                    "curves {} and {} have intersection {w}",
                    vertices[i].label, vertices[j].label
                )));
            }
            let w = w.to_integer();
            if vertices[i].kind == VertexKind::Minus2 && vertices[j].kind == VertexKind::Minus2 && w > 1 {
                return Err(Error::NotDuVal(format!(
                    "(-2)-curves {} and {} meet with multiplicity {w}",
                    vertices[i].label, vertices[j].label
                )));
            }
            weights[i][j] = w;
        }
    }
    NegCurveGraph::from_parts(vertices, weights)
}

//! ADE classification of (-2)-curve configurations and the prime-mark
//! refinement distinguishing singularity types that share an ADE multiset.
//!
//! Text syntax: components sorted by family (`E` before `D` before `A`) and
//! by rank descending, equal components collapsed with a multiplicity prefix,
//! joined by `+`, followed by an optional `'` or `''`. The empty type is
//! written `smooth`. Examples: `D4+3A1`, `A5+A1'`, `2A1''`.

use std::cmp::Reverse;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::negcurves::NegCurveGraph;
use crate::{Error, Result};

/// One connected Dynkin diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    A(u32),
    D(u32),
    E(u32),
}

impl Component {
    pub fn new_checked(self) -> Result<Self> {
        let ok = match self {
            Component::A(n) => n >= 1,
            Component::D(n) => n >= 4,
            Component::E(n) => (6..=8).contains(&n),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidArgument(format!("{self} is not a Dynkin diagram")))
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            Component::A(n) | Component::D(n) | Component::E(n) => n,
        }
    }

    /// Number of positive roots.
    pub fn positive_roots(self) -> u32 {
        match self {
            Component::A(n) => n * (n + 1) / 2,
            Component::D(n) => n * (n - 1),
            Component::E(6) => 36,
            Component::E(7) => 63,
            Component::E(8) => 120,
            Component::E(n) => panic!("E{n} is not a Dynkin diagram"),
        }
    }

    fn sort_key(self) -> (u8, Reverse<u32>) {
        let family = match self {
            Component::E(_) => 0,
            Component::D(_) => 1,
            Component::A(_) => 2,
        };
        (family, Reverse(self.rank()))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::A(n) => write!(f, "A{n}"),
            Component::D(n) => write!(f, "D{n}"),
            Component::E(n) => write!(f, "E{n}"),
        }
    }
}

impl PartialOrd for Component {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Component {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Maximum total rank of a root subsystem on a del Pezzo surface.
pub const MAX_ADE_RANK: u32 = 8;

/// A multiset of Dynkin components in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdeType {
    components: Vec<Component>,
}

impl AdeType {
    pub fn smooth() -> Self {
        Self::default()
    }

    pub fn new(mut components: Vec<Component>) -> Result<Self> {
        for c in &components {
            c.new_checked()?;
        }
        let total: u32 = components.iter().map(|c| c.rank()).sum();
        if total > MAX_ADE_RANK {
            return Err(Error::InvalidArgument(format!("total rank {total} exceeds {MAX_ADE_RANK}")));
        }
        components.sort();
        Ok(AdeType { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_smooth(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of (-2)-curves, i.e. the total rank.
    pub fn vertex_count(&self) -> u32 {
        self.components.iter().map(|c| c.rank()).sum()
    }

    pub fn positive_roots(&self) -> u32 {
        self.components.iter().map(|c| c.positive_roots()).sum()
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "smooth");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let run = self.components[i..].iter().take_while(|&&x| x == c).count();
            if !first {
                write!(f, "+")?;
            }
            if run > 1 {
                write!(f, "{run}")?;
            }
            write!(f, "{c}")?;
            first = false;
            i += run;
        }
        Ok(())
    }
}

impl FromStr for AdeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "smooth" || t.is_empty() {
            return Ok(AdeType::smooth());
        }
        let mut components = Vec::new();
        for token in t.split('+') {
            let token = token.trim();
            let bad = || Error::Parse(format!("invalid ADE component {token:?} in {s:?}"));
            let split = token.find(|ch: char| ch.is_ascii_alphabetic()).ok_or_else(bad)?;
            let (mult, rest) = token.split_at(split);
            let mult: u32 = if mult.is_empty() { 1 } else { mult.parse().map_err(|_| bad())? };
            if mult == 0 {
                return Err(bad());
            }
            let mut chars = rest.chars();
            let family = chars.next().ok_or_else(bad)?;
            let rank_str = chars.as_str();
            if rank_str.is_empty() || !rank_str.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let rank: u32 = rank_str.parse().map_err(|_| bad())?;
            let c = match family {
                'A' => Component::A(rank),
                'D' => Component::D(rank),
                'E' => Component::E(rank),
                _ => return Err(bad()),
            };
            c.new_checked()?;
            components.extend(std::iter::repeat_n(c, mult as usize));
        }
        AdeType::new(components)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeMark {
    #[default]
    None,
    Prime,
    DoublePrime,
}

impl PrimeMark {
    fn suffix(self) -> &'static str {
        match self {
            PrimeMark::None => "",
            PrimeMark::Prime => "'",
            PrimeMark::DoublePrime => "''",
        }
    }
}

/// Degree and ADE pairs carrying two distinct singularity types.
const AMBIGUOUS: &[(u32, &str)] = &[
    (1, "A7"),
    (1, "A5+A1"),
    (1, "2A3"),
    (1, "A3+2A1"),
    (1, "4A1"),
    (2, "A5+A1"),
    (2, "A5"),
    (2, "A3+2A1"),
    (2, "A3+A1"),
    (2, "4A1"),
    (2, "3A1"),
    (4, "A3"),
    (4, "2A1"),
    (6, "A1"),
];

/// Whether a prime mark is meaningful for this degree and ADE type.
pub fn is_ambiguous(degree: u32, ade: &AdeType) -> bool {
    let text = ade.to_string();
    AMBIGUOUS.iter().any(|&(d, t)| d == degree && t == text)
}

/// A singularity type: ADE multiset, prime mark and degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingularityType {
    pub ade: AdeType,
    pub mark: PrimeMark,
    pub degree: u32,
}

impl SingularityType {
    pub fn new(ade: AdeType, mark: PrimeMark, degree: u32) -> Result<Self> {
        check_degree(degree, &ade)?;
        if mark != PrimeMark::None && !is_ambiguous(degree, &ade) {
            return Err(Error::InvalidArgument(format!(
                "{ade} in degree {degree} has a single singularity type; a prime mark is not allowed"
            )));
        }
        Ok(SingularityType { ade, mark, degree })
    }

    /// Parses the text syntax for a surface of the given degree.
    pub fn parse(s: &str, degree: u32) -> Result<Self> {
        let t = s.trim();
        let (body, mark) = if let Some(b) = t.strip_suffix("''") {
            (b, PrimeMark::DoublePrime)
        } else if let Some(b) = t.strip_suffix('\'') {
            (b, PrimeMark::Prime)
        } else {
            (t, PrimeMark::None)
        };
        let body = body.trim();
        let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
        if mark != PrimeMark::None && (body.trim() == "smooth" || body.trim().is_empty()) {
            return Err(Error::Parse(format!("smooth type cannot carry a prime mark: {s:?}")));
        }
        Self::new(body.parse()?, mark, degree)
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ade, self.mark.suffix())
    }
}

pub(crate) fn check_degree(degree: u32, ade: &AdeType) -> Result<()> {
    if !(1..=9).contains(&degree) {
        return Err(Error::InvalidArgument(format!("degree {degree} outside 1..=9")));
    }
    if ade.vertex_count() > 9 - degree {
        return Err(Error::InvalidArgument(format!(
            "{ade} has {} (-2)-curves, more than 9 - {degree} allows",
            ade.vertex_count()
        )));
    }
    Ok(())
}

/// Weighted graph on (-2)-curves; weights are intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootGraph {
    weights: Vec<Vec<i64>>,
}

impl RootGraph {
    pub fn new(n: usize) -> Self {
        RootGraph { weights: vec![vec![0; n]; n] }
    }

    /// Builds a graph with unit weight on each listed edge.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            let w = g.weight(a, b) + 1;
            g.set_weight(a, b, w);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, a: usize, b: usize) -> i64 {
        self.weights[a][b]
    }

    pub fn set_weight(&mut self, a: usize, b: usize, w: i64) {
        self.weights[a][b] = w;
        self.weights[b][a] = w;
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&u| u != v && self.weights[v][u] != 0)
    }
}

/// A classified connected component with its vertices.
///
/// For `A_n` the vertices are listed along the path; for `D_n` and `E_n` the
/// branch vertex comes first, followed by the branches (shortest first), each
/// listed outward from the branch vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedComponent {
    pub component: Component,
    pub vertices: Vec<usize>,
}

/// Splits the graph into connected components and identifies each.
pub fn classify_components(graph: &RootGraph) -> Result<Vec<ClassifiedComponent>> {
    let n = graph.len();
    for a in 0..n {
        for b in a + 1..n {
            let w = graph.weight(a, b);
            if w != 0 && w != 1 {
                return Err(Error::NotDuVal(format!("vertices {a} and {b} are joined with weight {w}")));
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for u in graph.neighbours(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        out.push(classify_connected(graph, &members)?);
    }
    out.sort_by(|x, y| x.component.cmp(&y.component).then_with(|| x.vertices.cmp(&y.vertices)));
    Ok(out)
}

fn classify_connected(graph: &RootGraph, members: &[usize]) -> Result<ClassifiedComponent> {
    let degree = |v: usize| graph.neighbours(v).count();
    let edges: usize = members.iter().map(|&v| degree(v)).sum::<usize>() / 2;
    if edges + 1 != members.len() {
        return Err(Error::NotDuVal(format!("component containing vertex {} has a cycle", members[0])));
    }
    if let Some(&v) = members.iter().find(|&&v| degree(v) > 3) {
        return Err(Error::NotDuVal(format!("vertex {v} has {} neighbours", degree(v))));
    }
    let branch: Vec<usize> = members.iter().copied().filter(|&v| degree(v) == 3).collect();
    match branch.as_slice() {
        [] => {
            let end = members.iter().copied().find(|&v| degree(v) <= 1).expect("a tree has a leaf");
            let path = walk(graph, end, None);
            Ok(ClassifiedComponent { component: Component::A(path.len() as u32), vertices: path })
        }
        [center] => {
            let mut arms: Vec<Vec<usize>> = graph.neighbours(*center).map(|u| walk(graph, u, Some(*center))).collect();
            arms.sort_by_key(|arm| (arm.len(), arm.clone()));
            let lengths: Vec<usize> = arms.iter().map(Vec::len).collect();
            let component = match lengths.as_slice() {
                [1, 1, r] => Component::D(*r as u32 + 3),
                [1, 2, 2] => Component::E(6),
                [1, 2, 3] => Component::E(7),
                [1, 2, 4] => Component::E(8),
                other => return Err(Error::NotDuVal(format!("branch profile {other:?} is not of type D or E"))),
            };
            let mut vertices = vec![*center];
            vertices.extend(arms.into_iter().flatten());
            Ok(ClassifiedComponent { component, vertices })
        }
        _ => Err(Error::NotDuVal(format!("component has {} branch vertices", branch.len()))),
    }
}

/// Follows a path starting at `from`, not stepping back to `previous`.
fn walk(graph: &RootGraph, from: usize, previous: Option<usize>) -> Vec<usize> {
    let mut path = vec![from];
    let mut prev = previous;
    let mut cur = from;
    while let Some(next) = graph.neighbours(cur).find(|&u| Some(u) != prev && !path.contains(&u)) {
        path.push(next);
        prev = Some(cur);
        cur = next;
    }
    path
}

pub fn classify_ade(graph: &RootGraph) -> Result<AdeType> {
    AdeType::new(classify_components(graph)?.into_iter().map(|c| c.component).collect())
}

/// The vertex `v` of `A_{2n+1}` with `A_{2n+1} − v = 2A_n`.
pub fn central_vertex(component: &ClassifiedComponent) -> Result<usize> {
    match component.component {
        Component::A(k) if k % 2 == 1 => Ok(component.vertices[(k / 2) as usize]),
        other => Err(Error::InvalidArgument(format!("{other} has no central vertex"))),
    }
}

/// How to read "(-1)-curves meeting the central vertex and the A1 vertex"
/// for the combined primed types.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CombinedPrimeRule {
    /// A single (-1)-curve meets both the central vertex and an `A1` vertex.
    #[default]
    Strict,
    /// Some (-1)-curve meets the central vertex and some (possibly other)
    /// (-1)-curve meets an `A1` vertex.
    Lenient,
}

enum RefinementRule {
    Central,
    CentralAndA1,
    CommonNeighbour,
    NeighbourCount,
    Unrefined,
}

fn rule_for(degree: u32, ade: &AdeType) -> RefinementRule {
    match (degree, ade.to_string().as_str()) {
        (1, "A7") | (2, "A5") | (2, "A5+A1") | (4, "A3") => RefinementRule::Central,
        (1, "A5+A1") | (2, "A3+A1") | (2, "A3+2A1") => RefinementRule::CentralAndA1,
        (4, "2A1") => RefinementRule::CommonNeighbour,
        (6, "A1") => RefinementRule::NeighbourCount,
        _ => RefinementRule::Unrefined,
    }
}

/// Attaches the prime mark determined by (-1)-curve incidences.
///
/// Ambiguous pairs without a distinguishing rule (types that admit no
/// cylinder anyway, such as `4A1` in degree 2) are returned unmarked.
pub fn refine(ade: &AdeType, graph: &NegCurveGraph, degree: u32, rule: CombinedPrimeRule) -> Result<SingularityType> {
    check_degree(degree, ade)?;
    let components = classify_components(&graph.root_graph())?;
    let found = AdeType::new(components.iter().map(|c| c.component).collect())?;
    if &found != ade {
        return Err(Error::InvalidArgument(format!("graph has type {found}, not {ade}")));
    }
    let incidences = graph.minus1_incidences();
    let meets = |v: usize| incidences.iter().any(|inc| inc.contains(&v));
    let central = || {
        let c = components
            .iter()
            .find(|c| matches!(c.component, Component::A(k) if k >= 3 && k % 2 == 1))
            .expect("rule applies only to types with an odd A component");
        central_vertex(c)
    };
    let a1_vertices: Vec<usize> =
        components.iter().filter(|c| c.component == Component::A(1)).map(|c| c.vertices[0]).collect();

    let mark = match rule_for(degree, ade) {
        RefinementRule::Unrefined => PrimeMark::None,
        RefinementRule::Central => prime_if(meets(central()?)),
        RefinementRule::CentralAndA1 => {
            let v = central()?;
            let hit = match rule {
                CombinedPrimeRule::Strict => {
                    incidences.iter().any(|inc| inc.contains(&v) && a1_vertices.iter().any(|w| inc.contains(w)))
                }
                CombinedPrimeRule::Lenient => meets(v) && a1_vertices.iter().any(|&w| meets(w)),
            };
            prime_if(hit)
        }
        RefinementRule::CommonNeighbour => prime_if(incidences.iter().any(|inc| inc.len() == 2)),
        RefinementRule::NeighbourCount => match incidences.iter().filter(|inc| !inc.is_empty()).count() {
            2 => PrimeMark::Prime,
            3 => PrimeMark::DoublePrime,
            k => {
                return Err(Error::InvalidConfiguration(format!(
                    "{k} (-1)-curves meet the (-2)-curve; a degree-6 A1 surface has 2 or 3"
                )))
            }
        },
    };
    SingularityType::new(ade.clone(), mark, degree)
}

fn prime_if(b: bool) -> PrimeMark {
    if b {
        PrimeMark::Prime
    } else {
        PrimeMark::DoublePrime
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DivisorClass;
    use crate::negcurves::{Vertex, VertexKind};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn ade(s: &str) -> AdeType {
        s.parse().unwrap()
    }

    #[test]
    fn text_syntax() {
        assert_eq!(ade("A1+D4+A1+A1").to_string(), "D4+3A1");
        assert_eq!(ade("A3+D4").to_string(), "D4+A3");
        assert_eq!(ade("smooth").to_string(), "smooth");
        assert_eq!(ade("A1+A2+D4").to_string(), "D4+A2+A1");
        assert_eq!(ade("A1+E7").to_string(), "E7+A1");
        assert!("B2".parse::<AdeType>().is_err());
        assert!("D3".parse::<AdeType>().is_err());
        assert!("E9".parse::<AdeType>().is_err());
        assert!("0A1".parse::<AdeType>().is_err());
        assert!("9A1".parse::<AdeType>().is_err());
        assert!("A".parse::<AdeType>().is_err());
        let t = SingularityType::parse("A5+A1'", 2).unwrap();
        assert_eq!(t.mark, PrimeMark::Prime);
        assert_eq!(t.to_string(), "A5+A1'");
        assert_eq!(SingularityType::parse("2A1''", 4).unwrap().to_string(), "2A1''");
        assert_eq!(SingularityType::parse("(A1)'", 6).unwrap().to_string(), "A1'");
        assert!(SingularityType::parse("A4'", 5).is_err());
        assert!(SingularityType::parse("smooth'", 3).is_err());
        assert!(SingularityType::parse("A2", 8).is_err());
        assert!(SingularityType::parse("A1", 0).is_err());
    }

    #[test]
    fn basic_shapes() {
        assert!(classify_ade(&RootGraph::new(0)).unwrap().is_smooth());
        let path = RootGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(classify_ade(&path).unwrap(), ade("A4"));
        let star = RootGraph::from_edges(4, &[(2, 0), (2, 1), (2, 3)]);
        let comps = classify_components(&star).unwrap();
        assert_eq!(comps[0].component, Component::D(4));
        assert_eq!(comps[0].vertices[0], 2);
        let e6 = RootGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]);
        assert_eq!(classify_ade(&e6).unwrap(), ade("E6"));
        let e8 = RootGraph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]);
        assert_eq!(classify_ade(&e8).unwrap(), ade("E8"));
        let d6 = RootGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)]);
        assert_eq!(classify_ade(&d6).unwrap(), ade("D6"));
        let mixed = RootGraph::from_edges(5, &[(0, 1), (3, 4)]);
        assert_eq!(classify_ade(&mixed).unwrap(), ade("2A2+A1"));
    }

    #[test]
    fn rejects_non_du_val() {
        let cycle = RootGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(classify_ade(&cycle), Err(Error::NotDuVal(_))));
        let double = RootGraph::from_edges(2, &[(0, 1), (0, 1)]);
        assert!(matches!(classify_ade(&double), Err(Error::NotDuVal(_))));
        let two_branch = RootGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]);
        assert!(matches!(classify_ade(&two_branch), Err(Error::NotDuVal(_))));
        let e9_like = RootGraph::from_edges(9, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)]);
        assert!(matches!(classify_ade(&e9_like), Err(Error::NotDuVal(_))));
        let big_star = RootGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(matches!(classify_ade(&big_star), Err(Error::NotDuVal(_))));
        let affine_e6 = RootGraph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        assert!(matches!(classify_ade(&affine_e6), Err(Error::NotDuVal(_))));
    }

    #[test]
    fn central_vertices() {
        let a3 = ClassifiedComponent { component: Component::A(3), vertices: vec![7, 8, 9] };
        assert_eq!(central_vertex(&a3).unwrap(), 8);
        let a1 = ClassifiedComponent { component: Component::A(1), vertices: vec![4] };
        assert_eq!(central_vertex(&a1).unwrap(), 4);
        let a7 = ClassifiedComponent { component: Component::A(7), vertices: (10..17).collect() };
        assert_eq!(central_vertex(&a7).unwrap(), 13);
        let a4 = ClassifiedComponent { component: Component::A(4), vertices: vec![0, 1, 2, 3] };
        assert!(central_vertex(&a4).is_err());
        let d4 = ClassifiedComponent { component: Component::D(4), vertices: vec![0, 1, 2, 3] };
        assert!(central_vertex(&d4).is_err());
    }

    /// Abstract graph: `roots` (-2)-vertices with `edges`, plus one (-1)-vertex
    /// per entry of `minus1` meeting the listed root vertices once.
    fn abstract_graph(roots: usize, edges: &[(usize, usize)], minus1: &[&[usize]]) -> NegCurveGraph {
        let n = roots + minus1.len();
        // Distinct placeholder classes keep the sorted order equal to the input order.
        let vertex = |i: usize, kind| Vertex {
            label: format!("v{i}"),
            kind,
            class: DivisorClass::from_ints(i as i64, &[]).unwrap(),
        };
        let mut vertices: Vec<Vertex> = (0..roots).map(|i| vertex(i, VertexKind::Minus2)).collect();
        vertices.extend((0..minus1.len()).map(|i| vertex(roots + i, VertexKind::Minus1)));
        let mut w = vec![vec![0i64; n]; n];
        for &(a, b) in edges {
            w[a][b] = 1;
            w[b][a] = 1;
        }
        for (k, inc) in minus1.iter().enumerate() {
            for &r in inc.iter() {
                w[roots + k][r] = 1;
                w[r][roots + k] = 1;
            }
        }
        NegCurveGraph::from_parts(vertices, w).unwrap()
    }

    #[test]
    fn refine_degree_six_a1() {
        let a1 = ade("A1");
        let g3 = abstract_graph(1, &[], &[&[0], &[0], &[0], &[]]);
        assert_eq!(refine(&a1, &g3, 6, CombinedPrimeRule::Strict).unwrap().to_string(), "A1''");
        let g2 = abstract_graph(1, &[], &[&[0], &[0], &[]]);
        assert_eq!(refine(&a1, &g2, 6, CombinedPrimeRule::Strict).unwrap().to_string(), "A1'");
        let g1 = abstract_graph(1, &[], &[&[0]]);
        assert!(refine(&a1, &g1, 6, CombinedPrimeRule::Strict).is_err());
    }

    #[test]
    fn refine_unambiguous_and_pairs() {
        let g = abstract_graph(4, &[(0, 1), (1, 2), (2, 3)], &[&[3]]);
        let t = refine(&ade("A4"), &g, 5, CombinedPrimeRule::Strict).unwrap();
        assert_eq!(t.mark, PrimeMark::None);
        let both = abstract_graph(2, &[], &[&[0, 1]]);
        assert_eq!(refine(&ade("2A1"), &both, 4, CombinedPrimeRule::Strict).unwrap().to_string(), "2A1'");
        let apart = abstract_graph(2, &[], &[&[0], &[1]]);
        assert_eq!(refine(&ade("2A1"), &apart, 4, CombinedPrimeRule::Strict).unwrap().to_string(), "2A1''");
        assert!(refine(&ade("A4"), &g, 6, CombinedPrimeRule::Strict).is_err());
        assert!(refine(&ade("A3"), &g, 5, CombinedPrimeRule::Strict).is_err());
    }

    #[test]
    fn refine_central_vertex_rule() {
        let path = [(0, 1), (1, 2)];
        let hit = abstract_graph(3, &path, &[&[1]]);
        assert_eq!(refine(&ade("A3"), &hit, 4, CombinedPrimeRule::Strict).unwrap().to_string(), "A3'");
        let miss = abstract_graph(3, &path, &[&[0], &[2]]);
        assert_eq!(refine(&ade("A3"), &miss, 4, CombinedPrimeRule::Strict).unwrap().to_string(), "A3''");
    }

    #[test]
    fn refine_combined_rule_switch() {
        // A3 on vertices 0-1-2, A1 on vertex 3.
        let path = [(0, 1), (1, 2)];
        let one_curve = abstract_graph(4, &path, &[&[1, 3]]);
        let two_curves = abstract_graph(4, &path, &[&[1], &[3]]);
        let neither = abstract_graph(4, &path, &[&[0], &[3]]);
        let t = ade("A3+A1");
        for rule in [CombinedPrimeRule::Strict, CombinedPrimeRule::Lenient] {
            assert_eq!(refine(&t, &one_curve, 2, rule).unwrap().mark, PrimeMark::Prime);
            assert_eq!(refine(&t, &neither, 2, rule).unwrap().mark, PrimeMark::DoublePrime);
        }
        assert_eq!(refine(&t, &two_curves, 2, CombinedPrimeRule::Strict).unwrap().mark, PrimeMark::DoublePrime);
        assert_eq!(refine(&t, &two_curves, 2, CombinedPrimeRule::Lenient).unwrap().mark, PrimeMark::Prime);
    }

    #[test]
    fn refine_without_rule_stays_unmarked() {
        let g = abstract_graph(3, &[], &[&[0, 1, 2]]);
        assert_eq!(refine(&ade("3A1"), &g, 2, CombinedPrimeRule::Strict).unwrap().mark, PrimeMark::None);
    }

    fn random_forest(rng: &mut rand::rngs::StdRng) -> (RootGraph, AdeType) {
        use rand::Rng;
        let mut components = Vec::new();
        let mut budget = 8u32;
        while budget > 0 && (components.is_empty() || rng.gen_bool(0.6)) {
            let choices: Vec<Component> = [
                (1..=8).map(Component::A).collect::<Vec<_>>(),
                (4..=8).map(Component::D).collect(),
                (6..=8).map(Component::E).collect(),
            ]
            .concat()
            .into_iter()
            .filter(|c| c.rank() <= budget)
            .collect();
            let c = *choices.choose(rng).unwrap();
            budget -= c.rank();
            components.push(c);
        }
        let total: usize = components.iter().map(|c| c.rank() as usize).sum();
        let mut g = RootGraph::new(total);
        let mut offset = 0;
        for c in &components {
            let r = c.rank() as usize;
            let edges: Vec<(usize, usize)> = match c {
                Component::A(_) => (0..r - 1).map(|i| (i, i + 1)).collect(),
                Component::D(_) => {
                    let mut e: Vec<(usize, usize)> = (0..r - 2).map(|i| (i, i + 1)).collect();
                    e.push((r - 3, r - 1));
                    e
                }
                Component::E(_) => {
                    let mut e: Vec<(usize, usize)> = (0..r - 1).map(|i| (i, i + 1)).collect();
                    e.pop();
                    e.push((2, r - 1));
                    e
                }
            };
            for (a, b) in edges {
                g.set_weight(offset + a, offset + b, 1);
            }
            offset += r;
        }
        (g, AdeType::new(components).unwrap())
    }

    #[test]
    fn relabeling_invariance() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for _ in 0..100 {
            let (g, expected) = random_forest(&mut rng);
            assert_eq!(classify_ade(&g).unwrap(), expected);
            let mut perm: Vec<usize> = (0..g.len()).collect();
            perm.shuffle(&mut rng);
            let mut h = RootGraph::new(g.len());
            for a in 0..g.len() {
                for b in a + 1..g.len() {
                    h.set_weight(perm[a], perm[b], g.weight(a, b));
                }
            }
            assert_eq!(classify_ade(&h).unwrap(), expected);
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(ranks in proptest::collection::vec(1u32..=3, 0..4)) {
            let t = AdeType::new(ranks.iter().map(|&r| Component::A(r)).collect());
            if let Ok(t) = t {
                prop_assert_eq!(t.to_string().parse::<AdeType>().unwrap(), t);
            }
        }
    }
}

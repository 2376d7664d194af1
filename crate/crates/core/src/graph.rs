//! Finite simplicial graphs and the predicates consumed by the kernel criteria.
//!
//! Vertices are opaque string identifiers. They are sorted lexicographically
//! at construction and addressed internally by their rank in that order, so
//! every deterministic output (normal forms, BFS orders, decompositions) is
//! reproducible across runs. Vertex subsets are 64-bit masks, which caps a
//! graph at [`MAX_VERTICES`] vertices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex set must be non-empty")]
    EmptySet,
    #[error("vertex sets overlap in {0:?}")]
    Overlap(Vec<String>),
    #[error("vertex `{0}` has no label")]
    MissingLabel(String),
    #[error("label {label} out of range 0..={dim}")]
    LabelOutOfRange { label: u32, dim: u32 },
    #[error("label class {0} is empty; the induced map onto Z^d would not be surjective")]
    EmptyLabelClass(u32),
    #[error("labeling dimension must be positive")]
    ZeroDimension,
}

/// A set of vertices of one graph, stored as a bitmask over vertex ranks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Least vertex rank in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum JoinDecomposition {
    Join { part1: Vec<String>, part2: Vec<String> },
    NotJoin,
}

impl JoinDecomposition {
    pub fn is_join(&self) -> bool {
        matches!(self, JoinDecomposition::Join { .. })
    }
}

/// Strength of domination of a subgraph inside its ambient graph. The
/// variants are ordered so that a stronger class compares greater.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Domination {
    NotDominating,
    Dominating,
    StronglyDominating,
    SpeciallyDominating,
}

/// A finite undirected simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.names)
            .field("edges", &self.edges())
            .finish()
    }
}

impl SimplicialGraph {
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(|s| s.as_ref().to_owned()).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        if names.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(names.len()));
        }
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut adj = vec![VertexSet::EMPTY; names.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = *index.get(a).ok_or_else(|| GraphError::UnknownVertex(a.to_owned()))?;
            let v = *index.get(b).ok_or_else(|| GraphError::UnknownVertex(b.to_owned()))?;
            if u == v {
                return Err(GraphError::SelfLoop(a.to_owned()));
            }
            if adj[u].contains(v) {
                return Err(GraphError::DuplicateEdge(a.to_owned(), b.to_owned()));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(SimplicialGraph { names, index, adj })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require_vertex(&self, name: &str) -> Result<usize, GraphError> {
        self.vertex(name).ok_or_else(|| GraphError::UnknownVertex(name.to_owned()))
    }

    pub fn all(&self) -> VertexSet {
        if self.len() == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << self.len()) - 1)
        }
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges as name pairs, each listed once with endpoints in vertex order.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((self.names[u].clone(), self.names[v].clone()));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Resolves a list of names to a vertex set.
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, GraphError> {
        names.iter().map(|n| self.require_vertex(n.as_ref())).collect()
    }

    pub fn set_names(&self, set: VertexSet) -> Vec<String> {
        set.iter().map(|v| self.names[v].clone()).collect()
    }

    fn check_subset(&self, set: VertexSet) -> Result<(), GraphError> {
        if set.is_subset(self.all()) {
            Ok(())
        } else {
            let stray = set.difference(self.all()).first().unwrap_or(0);
            Err(GraphError::UnknownVertex(format!("#{stray}")))
        }
    }

    /// Connected components of the subgraph induced on `within`, each listed
    /// once, ordered by least vertex.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v]);
                }
                frontier = next.intersection(within).difference(comp);
                comp = comp.union(frontier);
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Connectivity of the subgraph induced on `within`. The empty set counts
    /// as disconnected; a single vertex is connected.
    pub fn is_connected_within(&self, within: VertexSet) -> bool {
        !within.is_empty() && self.components_within(within).len() == 1
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.all())
    }

    pub fn induced_subgraph(&self, set: VertexSet) -> Result<SimplicialGraph, GraphError> {
        self.check_subset(set)?;
        let names = self.set_names(set);
        let edges: Vec<(String, String)> = set
            .iter()
            .flat_map(|u| {
                self.adj[u]
                    .intersection(set)
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (self.names[u].clone(), self.names[v].clone()))
            })
            .collect();
        SimplicialGraph::new(names, edges)
    }

    /// True iff every vertex lies in `set` or is adjacent to a vertex of it.
    pub fn star_contains_all(&self, set: VertexSet) -> Result<bool, GraphError> {
        self.check_subset(set)?;
        let mut star = set;
        for v in set.iter() {
            star = star.union(self.adj[v]);
        }
        Ok(star == self.all())
    }

    /// Join detection on the subgraph induced on `within`, via connectivity
    /// of its complement.
    pub fn join_parts_within(&self, within: VertexSet) -> Option<(VertexSet, VertexSet)> {
        let first = within.first()?;
        let mut comp = VertexSet::singleton(first);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                // complement neighbours of v inside `within`
                next = next.union(within.difference(self.adj[v]).difference(VertexSet::singleton(v)));
            }
            frontier = next.difference(comp);
            comp = comp.union(frontier);
        }
        let rest = within.difference(comp);
        (!rest.is_empty()).then_some((comp, rest))
    }

    pub fn is_join(&self) -> JoinDecomposition {
        match self.join_parts_within(self.all()) {
            Some((a, b)) => JoinDecomposition::Join {
                part1: self.set_names(a),
                part2: self.set_names(b),
            },
            None => JoinDecomposition::NotJoin,
        }
    }

    pub fn domination_class(&self, sub: VertexSet) -> Result<Domination, GraphError> {
        self.check_subset(sub)?;
        if sub.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let outside = self.all().difference(sub);
        let special = sub
            .iter()
            .any(|u| self.all().difference(VertexSet::singleton(u)).is_subset(self.adj[u]));
        if special {
            return Ok(Domination::SpeciallyDominating);
        }
        if sub.iter().any(|u| outside.is_subset(self.adj[u])) {
            return Ok(Domination::StronglyDominating);
        }
        if outside.iter().all(|v| !self.adj[v].intersection(sub).is_empty()) {
            return Ok(Domination::Dominating);
        }
        Ok(Domination::NotDominating)
    }

    /// Complete bipartite adjacency between two disjoint vertex sets.
    pub fn subgraphs_commute(&self, s1: VertexSet, s2: VertexSet) -> Result<bool, GraphError> {
        self.check_subset(s1)?;
        self.check_subset(s2)?;
        let overlap = s1.intersection(s2);
        if !overlap.is_empty() {
            return Err(GraphError::Overlap(self.set_names(overlap)));
        }
        Ok(s1.iter().all(|u| s2.is_subset(self.adj[u])))
    }

    pub fn generated_subgraph(&self, sets: &[VertexSet]) -> Result<SimplicialGraph, GraphError> {
        let union = sets.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(*s));
        self.induced_subgraph(union)
    }

    /// Graph distances from `source`, restricted to `within`. Unreachable
    /// vertices get `None`.
    pub fn distances_within(&self, source: usize, within: VertexSet) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        if !within.contains(source) {
            return dist;
        }
        dist[source] = Some(0);
        let mut seen = VertexSet::singleton(source);
        let mut frontier = seen;
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adj[v]);
            }
            frontier = next.intersection(within).difference(seen);
            for v in frontier.iter() {
                dist[v] = Some(d);
            }
            seen = seen.union(frontier);
        }
        dist
    }

    /// A shortest path from `from` to `to` inside `within`, endpoints
    /// included. Ties break toward the least vertex.
    pub fn shortest_path_within(&self, from: usize, to: usize, within: VertexSet) -> Option<Vec<usize>> {
        let dist = self.distances_within(to, within);
        let mut d = dist[from]?;
        let mut path = vec![from];
        let mut cur = from;
        while d > 0 {
            cur = self.adj[cur]
                .intersection(within)
                .iter()
                .find(|&w| dist[w] == Some(d - 1))?;
            path.push(cur);
            d -= 1;
        }
        Some(path)
    }

    /// Diameter of the graph; `None` when disconnected or empty.
    pub fn diameter(&self) -> Option<usize> {
        if !self.is_connected() {
            return None;
        }
        (0..self.len())
            .map(|v| self.distances_within(v, self.all()).into_iter().flatten().max().unwrap_or(0))
            .max()
    }

    pub fn basis_subgraphs(&self, labeling: &VertexLabeling) -> Vec<SimplicialGraph> {
        (1..=labeling.dim())
            .map(|i| {
                self.induced_subgraph(labeling.class(i))
                    .expect("label classes are subsets of the vertex set")
            })
            .collect()
    }
}

/// A total vertex → label map inducing the homomorphism `A_Γ → Z^d` that
/// sends a vertex with label `i` to the `i`-th basis vector.
///
/// Label `0` marks a vertex sent to zero (a generator outside the living
/// subgraph); every class `1..=d` must be non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabeling {
    labels: Vec<u32>,
    dim: u32,
}

impl VertexLabeling {
    pub fn new(graph: &SimplicialGraph, labels: Vec<u32>, dim: u32) -> Result<Self, GraphError> {
        if dim == 0 {
            return Err(GraphError::ZeroDimension);
        }
        if labels.len() != graph.len() {
            let missing = graph.names().get(labels.len()).cloned().unwrap_or_default();
            return Err(GraphError::MissingLabel(missing));
        }
        if let Some(&label) = labels.iter().find(|&&l| l > dim) {
            return Err(GraphError::LabelOutOfRange { label, dim });
        }
        for i in 1..=dim {
            if !labels.contains(&i) {
                return Err(GraphError::EmptyLabelClass(i));
            }
        }
        Ok(VertexLabeling { labels, dim })
    }

    /// Builds a labeling from names; the dimension is the largest label used.
    pub fn from_map(graph: &SimplicialGraph, map: &BTreeMap<String, u32>) -> Result<Self, GraphError> {
        for name in map.keys() {
            graph.require_vertex(name)?;
        }
        let labels = graph
            .names()
            .iter()
            .map(|n| map.get(n).copied().ok_or_else(|| GraphError::MissingLabel(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let dim = labels.iter().copied().max().unwrap_or(0);
        VertexLabeling::new(graph, labels, dim)
    }

    /// Every vertex labelled 1.
    pub fn uniform(graph: &SimplicialGraph) -> Self {
        VertexLabeling { labels: vec![1; graph.len()], dim: 1 }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertices carrying label `i`.
    pub fn class(&self, i: u32) -> VertexSet {
        self.labels.iter().enumerate().filter(|(_, &l)| l == i).map(|(v, _)| v).collect()
    }

    /// Vertices sent to zero.
    pub fn killed(&self) -> VertexSet {
        self.class(0)
    }

    pub fn to_map(&self, graph: &SimplicialGraph) -> BTreeMap<String, u32> {
        graph.names().iter().cloned().zip(self.labels.iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> SimplicialGraph {
        SimplicialGraph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")]).unwrap()
    }

    fn set(g: &SimplicialGraph, names: &[&str]) -> VertexSet {
        g.vertex_set(names).unwrap()
    }

    #[test]
    fn construction_errors() {
        let single = SimplicialGraph::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(
            SimplicialGraph::new(["a", "b"], [("a", "a")]).unwrap_err(),
            GraphError::SelfLoop("a".into())
        );
        assert!(matches!(
            SimplicialGraph::new(["a", "b"], [("a", "b"), ("b", "a")]),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            SimplicialGraph::new(["a", "b"], [("a", "z")]),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            SimplicialGraph::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert_eq!(p4().edge_count(), 3);
    }

    #[test]
    fn vertices_are_sorted() {
        let g = SimplicialGraph::new(["c", "a", "b"], [("c", "a")]).unwrap();
        assert_eq!(g.names(), ["a", "b", "c"]);
        assert!(g.adjacent(0, 2));
    }

    #[test]
    fn join_examples() {
        let p3 = SimplicialGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        match p3.is_join() {
            JoinDecomposition::Join { part1, part2 } => {
                let mut parts = [part1, part2];
                parts.sort();
                assert_eq!(parts, [vec!["a".to_string(), "c".into()], vec!["b".to_string()]]);
            }
            JoinDecomposition::NotJoin => panic!("P3 is a join"),
        }
        assert_eq!(p4().is_join(), JoinDecomposition::NotJoin);
        let single = SimplicialGraph::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(single.is_join(), JoinDecomposition::NotJoin);
    }

    #[test]
    fn induced_and_star() {
        let g = p4();
        let ac = g.induced_subgraph(set(&g, &["a", "c"])).unwrap();
        assert_eq!(ac.len(), 2);
        assert_eq!(ac.edge_count(), 0);
        assert!(!ac.is_connected());
        assert!(g.star_contains_all(set(&g, &["b", "c"])).unwrap());
        assert!(!g.star_contains_all(set(&g, &["a"])).unwrap());
        assert!(g.induced_subgraph(VertexSet(1 << 9)).is_err());
    }

    #[test]
    fn domination_on_p4() {
        let g = p4();
        assert_eq!(g.domination_class(set(&g, &["a"])).unwrap(), Domination::NotDominating);
        assert_eq!(g.domination_class(set(&g, &["b", "c"])).unwrap(), Domination::Dominating);
        assert_eq!(g.domination_class(set(&g, &["a", "b", "c"])).unwrap(), Domination::StronglyDominating);
        assert_eq!(g.domination_class(g.all()).unwrap(), Domination::StronglyDominating);
        assert_eq!(g.domination_class(VertexSet::EMPTY), Err(GraphError::EmptySet));
    }

    #[test]
    fn commute_and_generate() {
        let g = p4();
        let (a, b, c) = (set(&g, &["a"]), set(&g, &["b"]), set(&g, &["c"]));
        assert!(g.subgraphs_commute(a, b).unwrap());
        assert!(!g.subgraphs_commute(a, c).unwrap());
        assert!(matches!(g.subgraphs_commute(a, a.union(b)), Err(GraphError::Overlap(_))));
        let ab = g.generated_subgraph(&[a, b]).unwrap();
        assert_eq!(ab.edges(), vec![("a".to_string(), "b".to_string())]);
    }

    #[test]
    fn basis_subgraphs_of_p4() {
        let g = p4();
        let uniform = VertexLabeling::uniform(&g);
        assert_eq!(g.basis_subgraphs(&uniform), vec![g.clone()]);
        let split = VertexLabeling::new(&g, vec![1, 1, 2, 2], 2).unwrap();
        let parts = g.basis_subgraphs(&split);
        assert_eq!(parts[0].edges(), vec![("a".to_string(), "b".to_string())]);
        assert_eq!(parts[1].edges(), vec![("c".to_string(), "d".to_string())]);
    }

    #[test]
    fn labeling_validation() {
        let g = p4();
        assert_eq!(VertexLabeling::new(&g, vec![1, 1, 1, 3], 3), Err(GraphError::EmptyLabelClass(2)));
        assert!(matches!(VertexLabeling::new(&g, vec![1, 1, 1], 1), Err(GraphError::MissingLabel(_))));
        assert!(matches!(
            VertexLabeling::new(&g, vec![1, 1, 1, 4], 2),
            Err(GraphError::LabelOutOfRange { .. })
        ));
        let mut map = BTreeMap::new();
        for (n, l) in [("a", 1), ("b", 2), ("c", 2), ("d", 0)] {
            map.insert(n.to_string(), l);
        }
        let lab = VertexLabeling::from_map(&g, &map).unwrap();
        assert_eq!(lab.dim(), 2);
        assert_eq!(lab.killed(), set(&g, &["d"]));
    }

    #[test]
    fn diameter_and_paths() {
        let g = p4();
        assert_eq!(g.diameter(), Some(3));
        assert_eq!(g.shortest_path_within(0, 3, g.all()), Some(vec![0, 1, 2, 3]));
        assert_eq!(g.shortest_path_within(0, 3, set(&g, &["a", "b", "d"])), None);
    }
}

//! Closed trivalent bipartite directed multigraphs ("webs").
//!
//! Every vertex is either a source (three outgoing edges) or a sink (three
//! incoming edges) and every edge runs from a source to a sink. Vertex-free
//! closed loops are kept as a plain counter.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, WebFault};

pub type VertexId = u32;
/// Index of an edge instance inside [`Web::edges`].
pub type EdgeId = usize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Web {
    pub sources: BTreeSet<VertexId>,
    pub sinks: BTreeSet<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    #[serde(default)]
    pub circles: u32,
}

/// Two parallel edge instances between `source` and `sink`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BigonSite {
    pub source: VertexId,
    pub sink: VertexId,
    pub pair: [EdgeId; 2],
}

/// A 4-cycle `s1 -> t1 <- s2 -> t2 <- s1` on four distinct vertices.
///
/// `edges` holds the cycle's edge instances in the order
/// `(s1,t1), (s2,t1), (s2,t2), (s1,t2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareSite {
    pub s1: VertexId,
    pub t1: VertexId,
    pub s2: VertexId,
    pub t2: VertexId,
    pub edges: [EdgeId; 4],
}

impl BigonSite {
    pub fn vertex_key(&self) -> Vec<VertexId> {
        let mut k = vec![self.source, self.sink];
        k.sort_unstable();
        k
    }
}

impl SquareSite {
    pub fn vertices(&self) -> [VertexId; 4] {
        [self.s1, self.t1, self.s2, self.t2]
    }

    pub fn vertex_key(&self) -> Vec<VertexId> {
        let mut k = self.vertices().to_vec();
        k.sort_unstable();
        k
    }
}

impl Web {
    pub fn new(
        sources: impl IntoIterator<Item = VertexId>,
        sinks: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        circles: u32,
    ) -> Self {
        Self {
            sources: sources.into_iter().collect(),
            sinks: sinks.into_iter().collect(),
            edges: edges.into_iter().collect(),
            circles,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn circles(n: u32) -> Self {
        Self {
            circles: n,
            ..Self::default()
        }
    }

    /// One source and one sink joined by three parallel edges.
    pub fn theta() -> Self {
        Self::new([0], [1], [(0, 1); 3], 0)
    }

    /// Complete bipartite graph on 3 + 3 vertices, oriented sources to sinks.
    pub fn k33() -> Self {
        Self::from_incidence(3, |_, _| true)
    }

    /// Incidence graph of the Fano plane (girth 6, 14 vertices).
    pub fn heawood() -> Self {
        Self::cyclic_difference_web(7, &[0, 1, 3])
    }

    /// Incidence graph of the Möbius–Kantor configuration (girth 6, 16 vertices).
    pub fn mobius_kantor() -> Self {
        Self::cyclic_difference_web(8, &[0, 1, 3])
    }

    /// Sources `0..n`, sinks `n..2n`; source `i` feeds sink `n + j` for each
    /// `j = i - d mod n`, `d` in `diffs`.
    pub fn cyclic_difference_web(n: u32, diffs: &[u32; 3]) -> Self {
        let edges = (0..n).flat_map(|i| diffs.iter().map(move |d| (i, n + (i + n - d % n) % n)));
        Self::new(0..n, n..2 * n, edges, 0)
    }

    /// `n` sources and `n` sinks from three permutations: source `i` feeds
    /// sinks `n + perm_k[i]`.
    pub fn from_matchings(perms: [&[u32]; 3]) -> Self {
        let n = perms[0].len() as u32;
        let edges = perms
            .iter()
            .flat_map(|p| p.iter().enumerate().map(move |(i, &j)| (i as u32, n + j)));
        Self::new(0..n, n..2 * n, edges, 0)
    }

    fn from_incidence(n: u32, adj: impl Fn(u32, u32) -> bool) -> Self {
        let mut edges = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if adj(s, t) {
                    edges.push((s, n + t));
                }
            }
        }
        Self::new(0..n, n..2 * n, edges, 0)
    }

    pub fn vertex_count(&self) -> usize {
        self.sources.len() + self.sinks.len()
    }

    pub fn has_vertices(&self) -> bool {
        !self.sources.is_empty() || !self.sinks.is_empty()
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.sources.contains(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.sources.iter().chain(self.sinks.iter()).copied()
    }

    /// Edge ids incident to each vertex.
    pub fn incidence(&self) -> HashMap<VertexId, Vec<EdgeId>> {
        let mut inc: HashMap<VertexId, Vec<EdgeId>> = HashMap::new();
        for (i, &(s, t)) in self.edges.iter().enumerate() {
            inc.entry(s).or_default().push(i);
            inc.entry(t).or_default().push(i);
        }
        inc
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), Error> {
        if let Some(v) = self.sources.intersection(&self.sinks).next() {
            return Err(Error::web(
                WebFault::Parts,
                format!("vertex {v} is both a source and a sink"),
            ));
        }
        let mut out_deg: BTreeMap<VertexId, usize> = self.sources.iter().map(|&v| (v, 0)).collect();
        let mut in_deg: BTreeMap<VertexId, usize> = self.sinks.iter().map(|&v| (v, 0)).collect();
        for &(s, t) in &self.edges {
            match (out_deg.get_mut(&s), in_deg.get_mut(&t)) {
                (Some(o), Some(i)) => {
                    *o += 1;
                    *i += 1;
                }
                _ => {
                    return Err(Error::web(
                        WebFault::Orientation,
                        format!("edge ({s},{t}) does not run from a source to a sink"),
                    ))
                }
            }
        }
        if let Some((v, d)) = out_deg.iter().find(|(_, &d)| d != 3) {
            return Err(Error::web(
                WebFault::Degree,
                format!("source {v} has out-degree {d}"),
            ));
        }
        if let Some((v, d)) = in_deg.iter().find(|(_, &d)| d != 3) {
            return Err(Error::web(WebFault::Degree, format!("sink {v} has in-degree {d}")));
        }
        if self.sources.len() != self.sinks.len() {
            return Err(Error::web(
                WebFault::Parts,
                format!("{} sources but {} sinks", self.sources.len(), self.sinks.len()),
            ));
        }
        Ok(())
    }

    /// One site per unordered pair of parallel edge instances.
    pub fn find_bigons(&self) -> Vec<BigonSite> {
        let mut groups: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
        for (i, &e) in self.edges.iter().enumerate() {
            groups.entry(e).or_default().push(i);
        }
        let mut out = Vec::new();
        for ((s, t), ids) in groups {
            for a in 0..ids.len() {
                for b in a + 1..ids.len() {
                    out.push(BigonSite {
                        source: s,
                        sink: t,
                        pair: [ids[a], ids[b]],
                    });
                }
            }
        }
        out
    }

    /// Every 4-cycle on four distinct vertices, once per vertex set.
    pub fn find_squares(&self) -> Vec<SquareSite> {
        // first edge instance for each adjacent (source, sink) pair
        let mut first: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
        let mut out_nbrs: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for (i, &(s, t)) in self.edges.iter().enumerate() {
            first.entry((s, t)).or_insert(i);
            out_nbrs.entry(s).or_default().insert(t);
        }
        let sources: Vec<_> = out_nbrs.keys().copied().collect();
        let mut out = Vec::new();
        for (ai, &s1) in sources.iter().enumerate() {
            for &s2 in &sources[ai + 1..] {
                let common: Vec<_> = out_nbrs[&s1].intersection(&out_nbrs[&s2]).copied().collect();
                for (ci, &t1) in common.iter().enumerate() {
                    for &t2 in &common[ci + 1..] {
                        out.push(SquareSite {
                            s1,
                            t1,
                            s2,
                            t2,
                            edges: [first[&(s1, t1)], first[&(s2, t1)], first[&(s2, t2)], first[&(s1, t2)]],
                        });
                    }
                }
            }
        }
        out
    }

    /// Connected vertex-bearing components (circle-free) and the circle count.
    pub fn components(&self) -> (Vec<Web>, u32) {
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &(s, t) in &self.edges {
            adj.entry(s).or_default().push(t);
            adj.entry(t).or_default().push(s);
        }
        let mut comp_of: HashMap<VertexId, usize> = HashMap::new();
        let mut parts: Vec<Web> = Vec::new();
        for v in self.vertices() {
            if comp_of.contains_key(&v) {
                continue;
            }
            let idx = parts.len();
            parts.push(Web::empty());
            let mut queue = VecDeque::from([v]);
            comp_of.insert(v, idx);
            while let Some(u) = queue.pop_front() {
                if self.is_source(u) {
                    parts[idx].sources.insert(u);
                } else {
                    parts[idx].sinks.insert(u);
                }
                for &w in adj.get(&u).into_iter().flatten() {
                    if let std::collections::hash_map::Entry::Vacant(e) = comp_of.entry(w) {
                        e.insert(idx);
                        queue.push_back(w);
                    }
                }
            }
        }
        for &(s, t) in &self.edges {
            parts[comp_of[&s]].edges.push((s, t));
        }
        (parts, self.circles)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0.len() <= 1
    }

    /// Vertex-disjoint union; `other` is shifted past this web's largest id.
    pub fn disjoint_union(&self, other: &Web) -> Web {
        let offset = self.vertices().max().map_or(0, |m| m + 1);
        let mut out = self.clone();
        out.sources.extend(other.sources.iter().map(|v| v + offset));
        out.sinks.extend(other.sinks.iter().map(|v| v + offset));
        out.edges
            .extend(other.edges.iter().map(|&(s, t)| (s + offset, t + offset)));
        out.circles += other.circles;
        out
    }

    /// Shortest cycle length of the underlying multigraph; `None` if acyclic.
    pub fn girth(&self) -> Result<Option<u32>, Error> {
        if !self.has_vertices() {
            return Err(Error::Empty);
        }
        let mut seen = BTreeSet::new();
        for &e in &self.edges {
            if !seen.insert(e) {
                return Ok(Some(2));
            }
        }
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &(s, t) in &self.edges {
            adj.entry(s).or_default().push(t);
            adj.entry(t).or_default().push(s);
        }
        Ok(simple_girth(&adj))
    }

    /// Applies `map` to every vertex id.
    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Web {
        Web {
            sources: self.sources.iter().map(|&v| map(v)).collect(),
            sinks: self.sinks.iter().map(|&v| map(v)).collect(),
            edges: self.edges.iter().map(|&(s, t)| (map(s), map(t))).collect(),
            circles: self.circles,
        }
    }

    /// Copy with the edge list sorted, as written to JSON.
    pub fn normalized(&self) -> Web {
        let mut w = self.clone();
        w.edges.sort_unstable();
        w
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.normalized()).expect("web serializes")
    }

    pub fn from_json(text: &str) -> Result<Web, Error> {
        let w: Web = serde_json::from_str(text)?;
        w.validate()?;
        Ok(w)
    }

    /// Plain Graphviz structure; circles become isolated labelled nodes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph web {\n");
        for v in &self.sources {
            let _ = writeln!(s, "  v{v} [shape=circle,style=filled,label=\"{v}\"];");
        }
        for v in &self.sinks {
            let _ = writeln!(s, "  v{v} [shape=circle,label=\"{v}\"];");
        }
        for &(a, b) in &self.normalized().edges {
            let _ = writeln!(s, "  v{a} -> v{b};");
        }
        for i in 0..self.circles {
            let _ = writeln!(s, "  loop{i} [shape=doublecircle,label=\"\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Girth of a simple undirected graph by BFS from every vertex.
pub(crate) fn simple_girth(adj: &HashMap<VertexId, Vec<VertexId>>) -> Option<u32> {
    let mut best: Option<u32> = None;
    for &root in adj.keys() {
        let mut dist: HashMap<VertexId, u32> = HashMap::from([(root, 0)]);
        let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if best.is_some_and(|b| 2 * du + 1 >= b) {
                break;
            }
            for &w in &adj[&u] {
                match dist.get(&w) {
                    None => {
                        dist.insert(w, du + 1);
                        parent.insert(w, u);
                        queue.push_back(w);
                    }
                    Some(&dw) if parent.get(&u) != Some(&w) => {
                        let len = du + dw + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                    _ => {}
                }
            }
        }
    }
    best
}

//! Canonical labeling of connected webs.
//!
//! Individualization-refinement: vertices start in two cells (sources, then
//! sinks), cells are split by neighbour-cell profiles until stable, and the
//! search branches on every vertex of the first smallest non-singleton cell.
//! The canonical form is the least sorted edge list over all leaves. Webs met
//! in practice stay under ~50 vertices, where exhaustive leaf search is fine.

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::web::{VertexId, Web};

/// A connected web relabelled canonically: sources `0..n`, sinks `n..2n`,
/// edges sorted with parallel edges repeated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalWeb {
    // field order gives the (vertex count, serialization) ordering
    n: usize,
    key: String,
    edges: Vec<(u32, u32)>,
}

impl CanonicalWeb {
    /// Sources per part.
    pub fn part_size(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// The `n;(s,t),(s,t),...` string.
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn to_web(&self) -> Web {
        let n = self.n as u32;
        Web::new(0..n, n..2 * n, self.edges.iter().copied(), 0)
    }

    /// Girth of the underlying multigraph.
    pub fn girth(&self) -> Option<u32> {
        self.to_web().girth().ok().flatten()
    }

    fn from_sorted_edges(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut key = format!("{n};");
        for (i, (s, t)) in edges.iter().enumerate() {
            if i > 0 {
                key.push(',');
            }
            key.push_str(&format!("({s},{t})"));
        }
        Self { n, key, edges }
    }

    /// Parses the serialization produced by `Display`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("bad canonical web {text:?}"));
        let (n, rest) = text.trim().split_once(';').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut edges = Vec::new();
        for pair in rest.split("),").filter(|p| !p.is_empty()) {
            let pair = pair.trim_start_matches('(').trim_end_matches(')');
            let (s, t) = pair.split_once(',').ok_or_else(bad)?;
            edges.push((s.parse().map_err(|_| bad())?, t.parse().map_err(|_| bad())?));
        }
        let w = Self::from_sorted_edges(n, edges);
        canonical_form(&w.to_web())
    }
}

impl fmt::Display for CanonicalWeb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

impl fmt::Debug for CanonicalWeb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalWeb({})", self.key)
    }
}

/// Canonical form of a connected, circle-free, valid web.
pub fn canonical_form(w: &Web) -> Result<CanonicalWeb, Error> {
    if w.circles > 0 {
        return Err(Error::HasCircles(w.circles));
    }
    w.validate()?;
    if !w.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(canonical_form_unchecked(w))
}

/// As [`canonical_form`] without the validity checks; callers guarantee a
/// connected valid web with no circles.
pub(crate) fn canonical_form_unchecked(w: &Web) -> CanonicalWeb {
    Labeler::new(w).run()
}

/// True iff some bijection maps sources to sources, sinks to sinks and
/// preserves edge multiplicities.
pub fn is_isomorphic(a: &Web, b: &Web) -> Result<bool, Error> {
    Ok(canonical_form(a)? == canonical_form(b)?)
}

struct Labeler {
    n: usize,
    /// `nbrs[v]` = (neighbour, multiplicity), dense indices; sources first.
    nbrs: Vec<Vec<(usize, u32)>>,
    /// Directed edges on dense indices.
    edges: Vec<(usize, usize)>,
    best: Option<Vec<(u32, u32)>>,
}

type Partition = Vec<Vec<usize>>;

impl Labeler {
    fn new(w: &Web) -> Self {
        let order: Vec<VertexId> = w.vertices().collect();
        let index: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut mult: HashMap<(usize, usize), u32> = HashMap::new();
        let mut edges = Vec::with_capacity(w.edges.len());
        for &(s, t) in &w.edges {
            let (a, b) = (index[&s], index[&t]);
            edges.push((a, b));
            *mult.entry((a, b)).or_default() += 1;
            *mult.entry((b, a)).or_default() += 1;
        }
        let mut nbrs = vec![Vec::new(); order.len()];
        for (&(a, b), &m) in &mult {
            nbrs[a].push((b, m));
        }
        Self {
            n: w.sources.len(),
            nbrs,
            edges,
            best: None,
        }
    }

    fn run(mut self) -> CanonicalWeb {
        let total = self.nbrs.len();
        let mut start: Partition = Vec::new();
        if self.n > 0 {
            start.push((0..self.n).collect());
            start.push((self.n..total).collect());
        }
        let start = self.refine(start);
        self.search(start);
        CanonicalWeb::from_sorted_edges(self.n, self.best.take().unwrap_or_default())
    }

    /// Splits cells by the multiset of (neighbour cell, multiplicity) until
    /// stable. Cells split in place, so cell order only ever refines.
    fn refine(&self, mut cells: Partition) -> Partition {
        let mut cell_of = vec![0usize; self.nbrs.len()];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let mut next: Partition = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, u32)>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig: Vec<(usize, u32)> =
                            self.nbrs[v].iter().map(|&(w, m)| (cell_of[w], m)).collect();
                        sig.sort_unstable();
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut group: Vec<usize> = Vec::new();
                for i in 0..keyed.len() {
                    if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                        next.push(std::mem::take(&mut group));
                    }
                    group.push(keyed[i].1);
                }
                next.push(group);
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn search(&mut self, cells: Partition) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(t) = target else {
            self.leaf(&cells);
            return;
        };
        for &v in &cells[t] {
            let mut child: Partition = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(vec![v]);
            child.push(cells[t].iter().copied().filter(|&u| u != v).collect());
            child.extend_from_slice(&cells[t + 1..]);
            let child = self.refine(child);
            self.search(child);
        }
    }

    fn leaf(&mut self, cells: &Partition) {
        let mut label = vec![0u32; self.nbrs.len()];
        for (i, cell) in cells.iter().enumerate() {
            label[cell[0]] = i as u32;
        }
        let mut cert: Vec<(u32, u32)> = self.edges.iter().map(|&(a, b)| (label[a], label[b])).collect();
        cert.sort_unstable();
        if self.best.as_ref().is_none_or(|b| cert < *b) {
            self.best = Some(cert);
        }
    }
}

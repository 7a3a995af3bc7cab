//! Reduction of webs to normal form.
//!
//! Three rules, each strictly shrinking the vertex count or circle count:
//! a circle evaluates to `A^6+1+A^-6`, a bigon collapses to one strand times
//! `A^3+A^-3`, and a square is replaced by the sum of its two source-to-sink
//! reconnections. A web with none of these left is a product of irreducible
//! connected webs.

use std::collections::{HashMap, HashSet};
use std::fmt;

use dashmap::DashMap;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{bigon_value, loop_value, LaurentPoly, ModuleElement, Monomial};
use crate::canon::{canonical_form_unchecked, CanonicalWeb};
use crate::error::Error;
use crate::web::{BigonSite, EdgeId, SquareSite, VertexId, Web};

/// How `normal_form` picks the next site to rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStrategy {
    /// Circles, then bigons, then squares; ties by least sorted vertex tuple.
    Deterministic,
    /// Uniform choice among all sites, reproducible from the seed.
    Seeded(u64),
}

/// A site chosen for rewriting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    Circles,
    Bigon(BigonSite),
    Square(SquareSite),
}

/// One applied rewrite, for `--trace` output.
#[derive(Clone, Debug)]
pub struct TraceEvent {
    pub site: Site,
    pub coefficient: LaurentPoly,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.site {
            Site::Circles => write!(f, "(loop, circles, {})", self.coefficient),
            Site::Bigon(b) => write!(
                f,
                "(bigon, {}->{} edges {}/{}, {})",
                b.source, b.sink, b.pair[0], b.pair[1], self.coefficient
            ),
            Site::Square(s) => write!(
                f,
                "(square, {}->{}<-{}->{}, {})",
                s.s1, s.t1, s.s2, s.t2, self.coefficient
            ),
        }
    }
}

/// Removes `deleted` vertices and `removed` edges, then reconnects: a strand
/// arriving at deleted sink `t` leaves again from deleted source `joins[t]`.
/// Every deleted vertex must keep exactly one surviving edge. Strands that
/// close up without meeting a surviving vertex become circles.
fn splice(
    w: &Web,
    deleted: &[VertexId],
    removed: &[EdgeId],
    joins: &[(VertexId, VertexId)],
) -> Result<Web, Error> {
    let dead: HashSet<VertexId> = deleted.iter().copied().collect();
    let gone: HashSet<EdgeId> = removed.iter().copied().collect();
    let mut in_edge: HashMap<VertexId, EdgeId> = HashMap::new();
    let mut out_edge: HashMap<VertexId, EdgeId> = HashMap::new();
    for (i, &(s, t)) in w.edges.iter().enumerate() {
        if gone.contains(&i) {
            continue;
        }
        if dead.contains(&s) && out_edge.insert(s, i).is_some() {
            return Err(Error::StaleSite(format!("source {s} keeps more than one edge")));
        }
        if dead.contains(&t) && in_edge.insert(t, i).is_some() {
            return Err(Error::StaleSite(format!("sink {t} keeps more than one edge")));
        }
    }
    let join: HashMap<VertexId, VertexId> = joins.iter().copied().collect();
    for &(t, s) in joins {
        if !in_edge.contains_key(&t) || !out_edge.contains_key(&s) {
            return Err(Error::StaleSite(format!("join {t}->{s} has no strand")));
        }
    }

    let mut out = Web {
        sources: w.sources.iter().copied().filter(|v| !dead.contains(v)).collect(),
        sinks: w.sinks.iter().copied().filter(|v| !dead.contains(v)).collect(),
        edges: Vec::with_capacity(w.edges.len()),
        circles: w.circles,
    };
    let mut visited = vec![false; w.edges.len()];
    for (i, &(s, t)) in w.edges.iter().enumerate() {
        if gone.contains(&i) || dead.contains(&s) {
            continue;
        }
        if !dead.contains(&t) {
            out.edges.push((s, t));
            continue;
        }
        let mut cur = i;
        loop {
            visited[cur] = true;
            let next = out_edge[&join[&w.edges[cur].1]];
            if !dead.contains(&w.edges[next].1) {
                visited[next] = true;
                out.edges.push((s, w.edges[next].1));
                break;
            }
            cur = next;
        }
    }
    for (i, &(s, _)) in w.edges.iter().enumerate() {
        if visited[i] || gone.contains(&i) || !dead.contains(&s) {
            continue;
        }
        let mut cur = i;
        loop {
            visited[cur] = true;
            cur = out_edge[&join[&w.edges[cur].1]];
            if cur == i {
                break;
            }
        }
        out.circles += 1;
    }
    Ok(out)
}

fn check_edge(w: &Web, e: EdgeId, s: VertexId, t: VertexId) -> Result<(), Error> {
    match w.edges.get(e) {
        Some(&pair) if pair == (s, t) => Ok(()),
        _ => Err(Error::StaleSite(format!("edge {e} is not {s}->{t}"))),
    }
}

/// Collapses a bigon: its two vertices go, the remaining strand through them
/// is spliced into one edge (or one circle for the theta web).
pub fn reduce_bigon(w: &Web, site: &BigonSite) -> Result<(LaurentPoly, Web), Error> {
    if !w.is_source(site.source) || !w.sinks.contains(&site.sink) || site.pair[0] == site.pair[1] {
        return Err(Error::StaleSite(format!("bigon {}->{}", site.source, site.sink)));
    }
    for &e in &site.pair {
        check_edge(w, e, site.source, site.sink)?;
    }
    let out = splice(w, &[site.source, site.sink], &site.pair, &[(site.sink, site.source)])?;
    Ok((bigon_value(), out))
}

/// Replaces a square by its two reconnections, each with coefficient 1.
/// The first pairs `s1` with `t1` and `s2` with `t2`; the second pairs `s1`
/// with `t2` and `s2` with `t1`.
pub fn resolve_square(w: &Web, site: &SquareSite) -> Result<[(LaurentPoly, Web); 2], Error> {
    let vs = site.vertices();
    let distinct: HashSet<_> = vs.iter().collect();
    if distinct.len() != 4 {
        return Err(Error::DegenerateSquare);
    }
    if !w.is_source(site.s1) || !w.is_source(site.s2) || !w.sinks.contains(&site.t1) || !w.sinks.contains(&site.t2) {
        return Err(Error::StaleSite("square vertices".into()));
    }
    let [e1, e2, e3, e4] = site.edges;
    if HashSet::from(site.edges).len() != 4 {
        return Err(Error::StaleSite("square edges repeat".into()));
    }
    check_edge(w, e1, site.s1, site.t1)?;
    check_edge(w, e2, site.s2, site.t1)?;
    check_edge(w, e3, site.s2, site.t2)?;
    check_edge(w, e4, site.s1, site.t2)?;
    let a = splice(w, &vs, &site.edges, &[(site.t1, site.s1), (site.t2, site.s2)])?;
    let b = splice(w, &vs, &site.edges, &[(site.t1, site.s2), (site.t2, site.s1)])?;
    Ok([(LaurentPoly::one(), a), (LaurentPoly::one(), b)])
}

/// Evaluates all free circles.
pub fn strip_circles(w: &Web) -> (LaurentPoly, Web) {
    let coeff = loop_value().pow(w.circles);
    let mut out = w.clone();
    out.circles = 0;
    (coeff, out)
}

/// Monomial of a web with no circles, bigons or squares.
fn irreducible_monomial(w: &Web) -> Monomial {
    let (parts, _) = w.components();
    Monomial::from_factors(parts.iter().map(canonical_form_unchecked))
}

fn deterministic_site(w: &Web) -> Option<Site> {
    if w.circles > 0 {
        return Some(Site::Circles);
    }
    if let Some(b) = w.find_bigons().into_iter().min_by_key(|b| (b.vertex_key(), b.pair)) {
        return Some(Site::Bigon(b));
    }
    w.find_squares()
        .into_iter()
        .min_by_key(|s| (s.vertex_key(), s.vertices()))
        .map(Site::Square)
}

fn random_site(w: &Web, rng: &mut ChaCha8Rng) -> Option<Site> {
    let mut sites: Vec<Site> = Vec::new();
    if w.circles > 0 {
        sites.push(Site::Circles);
    }
    sites.extend(w.find_bigons().into_iter().map(Site::Bigon));
    sites.extend(w.find_squares().into_iter().map(Site::Square));
    if sites.is_empty() {
        None
    } else {
        Some(sites[rng.gen_range(0..sites.len())])
    }
}

/// Applies one rewrite at `site`, returning the weighted results.
pub fn apply_site(w: &Web, site: &Site) -> Result<Vec<(LaurentPoly, Web)>, Error> {
    Ok(match site {
        Site::Circles => vec![strip_circles(w)],
        Site::Bigon(b) => vec![reduce_bigon(w, b)?],
        Site::Square(s) => resolve_square(w, s)?.into(),
    })
}

/// Fully reduces `w` to an element of the graph module.
pub fn normal_form(w: &Web, strategy: ReductionStrategy) -> ModuleElement {
    normal_form_traced(w, strategy, |_| {})
}

/// As [`normal_form`], reporting each rewrite to `trace`.
pub fn normal_form_traced(
    w: &Web,
    strategy: ReductionStrategy,
    mut trace: impl FnMut(&TraceEvent),
) -> ModuleElement {
    let mut rng = match strategy {
        ReductionStrategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        ReductionStrategy::Deterministic => None,
    };
    let mut out = ModuleElement::zero();
    let mut work = vec![(LaurentPoly::one(), w.clone())];
    while let Some((coeff, web)) = work.pop() {
        let site = match rng.as_mut() {
            Some(r) => random_site(&web, r),
            None => deterministic_site(&web),
        };
        let Some(site) = site else {
            out.add_term(coeff, irreducible_monomial(&web));
            continue;
        };
        let results = apply_site(&web, &site).expect("site found in this web");
        trace(&TraceEvent {
            site,
            coefficient: results[0].0.clone(),
        });
        for (c, next) in results {
            work.push((&coeff * &c, next));
        }
    }
    out
}

/// Normal-form evaluator that memoizes connected components, first by their
/// exact edge list (state webs of related diagrams share vertex ids) and,
/// for square-bearing ones, by canonical form. Safe to share between threads.
#[derive(Default)]
pub struct Evaluator {
    cache: DashMap<CanonicalWeb, ModuleElement>,
    exact: DashMap<Vec<(VertexId, VertexId)>, ModuleElement>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn evaluate(&self, w: &Web) -> ModuleElement {
        let mut coeff = LaurentPoly::one();
        let mut web = w.clone();
        loop {
            let (c, rest) = strip_circles(&web);
            coeff *= &c;
            web = rest;
            let Some(b) = web.find_bigons().into_iter().next() else {
                break;
            };
            let (c, rest) = reduce_bigon(&web, &b).expect("fresh bigon site");
            coeff *= &c;
            web = rest;
        }
        let mut acc = ModuleElement::scalar(coeff);
        for part in web.components().0 {
            acc = acc.mul(&self.component(&part));
        }
        acc
    }

    /// `part` is connected with no circles or bigons.
    fn component(&self, part: &Web) -> ModuleElement {
        let mut edges = part.edges.clone();
        edges.sort_unstable();
        if let Some(hit) = self.exact.get(&edges) {
            return hit.clone();
        }
        let value = self.component_uncached(part);
        self.exact.insert(edges, value.clone());
        value
    }

    fn component_uncached(&self, part: &Web) -> ModuleElement {
        let squares = part.find_squares();
        let key = canonical_form_unchecked(part);
        let Some(site) = squares.first() else {
            return ModuleElement::term(LaurentPoly::one(), Monomial::from_factors([key]));
        };
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let mut acc = ModuleElement::zero();
        for (c, next) in resolve_square(part, site).expect("fresh square site") {
            acc.add_scaled(&c, &self.evaluate(&next));
        }
        self.cache.insert(key, acc.clone());
        acc
    }
}

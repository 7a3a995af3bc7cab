#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sl3web::web::Web;

/// Configuration-model web: `n` sources, `n` sinks, three random perfect
/// matchings. Parallel edges (bigons) and 4-cycles show up often.
pub fn random_web(n: usize, rng: &mut ChaCha8Rng) -> Web {
    let perms: Vec<Vec<u32>> = (0..3)
        .map(|_| {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    Web::from_matchings([&perms[0], &perms[1], &perms[2]])
}

pub fn random_connected_web(max_n: usize, rng: &mut ChaCha8Rng) -> Web {
    let n = rng.gen_range(1..=max_n);
    random_connected_web_of(n, rng)
}

/// Connected web with exactly `n` sources.
pub fn random_connected_web_of(n: usize, rng: &mut ChaCha8Rng) -> Web {
    loop {
        let w = random_web(n, rng);
        if w.is_connected() {
            return w;
        }
    }
}

/// Random relabeling with scattered ids and a shuffled edge list.
pub fn shuffled(w: &Web, rng: &mut ChaCha8Rng) -> Web {
    let vs: Vec<u32> = w.vertices().collect();
    let mut ids: Vec<u32> = (0..vs.len() as u32).map(|i| 7 * i + 3).collect();
    ids.shuffle(rng);
    let map: std::collections::HashMap<u32, u32> = vs.iter().copied().zip(ids).collect();
    let mut out = w.relabel(|v| map[&v]);
    out.edges.shuffle(rng);
    out
}

use sl3web::diagram::families::{braid_closure, figure_eight, hopf_link, kink, polygon_free_knot, trefoil, virtual_trefoil};
use sl3web::diagram::{GaussCode, Mode, Passage, Role, Sign};

/// A corpus entry; `classical` marks codes with a known planar diagram.
pub struct Entry {
    pub name: String,
    pub code: GaussCode,
    pub classical: bool,
}

fn entry(name: &str, code: GaussCode, classical: bool) -> Entry {
    Entry {
        name: name.to_string(),
        code,
        classical,
    }
}

fn parsed(s: &str) -> GaussCode {
    s.parse().expect("corpus code parses")
}

/// Signed test corpus: unknot, kinks, trefoils, figure-eight, virtual
/// trefoils, the polygon knots K_5..K_9 and a handful of links.
pub fn corpus() -> Vec<Entry> {
    let mut out = vec![
        entry("unknot", GaussCode::unknot(), true),
        entry("positive kink", kink(Sign::Pos), true),
        entry("negative kink", kink(Sign::Neg), true),
        entry("r2 pair", parsed("O1+,U2-,U1+,O2-"), true),
        entry("trefoil", trefoil(), true),
        entry("mirror trefoil", trefoil().mirror(), true),
        entry("figure-eight", figure_eight(), true),
        entry("cinquefoil", braid_closure(2, &[1, 1, 1, 1, 1]).unwrap(), true),
        entry("virtual trefoil", virtual_trefoil(), false),
        entry("mirror virtual trefoil", virtual_trefoil().mirror(), false),
        entry("mixed virtual", parsed("O1+,O2-,U1+,U2-"), false),
    ];
    for n in 5..=9 {
        let code = polygon_free_knot(n).unwrap().lift_positive();
        out.push(entry(&format!("K_{n}"), code, false));
    }
    out.extend([
        entry("hopf", hopf_link(), true),
        entry("mirror hopf", hopf_link().mirror(), true),
        entry("unlink", parsed(";"), true),
        entry("torus link T(2,4)", braid_closure(2, &[1, 1, 1, 1]).unwrap(), true),
        entry("virtual hopf", parsed("O1+;U1+"), false),
        entry("trefoil + kink", trefoil().split_union(&kink(Sign::Neg)).unwrap(), true),
    ]);
    out
}

/// Random valid code: `n` crossings spread over `comps` components (some
/// possibly empty), random signs and role orders. Free if `free`.
pub fn random_code(n: usize, comps: usize, free: bool, rng: &mut ChaCha8Rng) -> GaussCode {
    let mut slots: Vec<(u32, bool)> = (1..=n as u32).flat_map(|k| [(k, true), (k, false)]).collect();
    slots.shuffle(rng);
    let signs: Vec<Sign> = (0..=n).map(|_| if rng.gen() { Sign::Pos } else { Sign::Neg }).collect();
    let mut cuts: Vec<usize> = (0..comps.saturating_sub(1)).map(|_| rng.gen_range(0..=slots.len())).collect();
    cuts.sort();
    cuts.push(slots.len());
    let mut components = Vec::new();
    let mut start = 0;
    for &c in &cuts {
        let comp = slots[start..c]
            .iter()
            .map(|&(k, first)| {
                if free {
                    Passage::free(k)
                } else {
                    let role = if first { Role::Over } else { Role::Under };
                    Passage::signed(k, role, signs[k as usize])
                }
            })
            .collect();
        components.push(comp);
        start = c;
    }
    let mode = if free { Mode::Free } else { Mode::Signed };
    GaussCode::new(components, mode).expect("random code is valid")
}

/// Isomorphism by brute force over source bijections: two webs match iff
/// some bijection makes the multisets of sink neighbourhoods equal.
pub fn brute_isomorphic(a: &Web, b: &Web) -> bool {
    if a.sources.len() != b.sources.len() || a.sinks.len() != b.sinks.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let src_a: Vec<u32> = a.sources.iter().copied().collect();
    let src_b: Vec<u32> = b.sources.iter().copied().collect();
    let profile = |w: &Web, name: &dyn Fn(u32) -> usize| {
        let mut by_sink: std::collections::BTreeMap<u32, Vec<usize>> = std::collections::BTreeMap::new();
        for &(s, t) in &w.edges {
            by_sink.entry(t).or_default().push(name(s));
        }
        let mut out: Vec<Vec<usize>> = by_sink
            .into_values()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    };
    let target = profile(b, &|s| src_b.iter().position(|&x| x == s).unwrap());
    let mut perm: Vec<usize> = (0..src_a.len()).collect();
    loop {
        if profile(a, &|s| perm[src_a.iter().position(|&x| x == s).unwrap()]) == target {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Overlaps between reducible patterns, counted over edge instances so
/// that parallel edges give distinct 4-cycles.
#[derive(Default, Debug, Clone, Copy)]
pub struct Overlaps {
    pub bigon_square: usize,
    pub squares_one_edge: usize,
    pub squares_adjacent_edges: usize,
    pub squares_opposite_edges: usize,
}

impl Overlaps {
    pub fn add(&mut self, o: Overlaps) {
        self.bigon_square += o.bigon_square;
        self.squares_one_edge += o.squares_one_edge;
        self.squares_adjacent_edges += o.squares_adjacent_edges;
        self.squares_opposite_edges += o.squares_opposite_edges;
    }

    pub fn all_seen(&self) -> bool {
        self.bigon_square > 0 && self.squares_one_edge > 0 && self.squares_adjacent_edges > 0 && self.squares_opposite_edges > 0
    }
}

/// 4-cycles as sorted edge-id quadruples.
fn four_cycles(w: &Web) -> Vec<[usize; 4]> {
    let mut out = std::collections::BTreeSet::new();
    let e = &w.edges;
    for a in 0..e.len() {
        for b in 0..e.len() {
            // a = (s1,t1), b = (s2,t1), c = (s2,t2), d = (s1,t2)
            if b == a || e[b].1 != e[a].1 || e[b].0 == e[a].0 {
                continue;
            }
            for c in 0..e.len() {
                if c == b || e[c].0 != e[b].0 || e[c].1 == e[a].1 {
                    continue;
                }
                for d in 0..e.len() {
                    if d == a || e[d].0 != e[a].0 || e[d].1 != e[c].1 {
                        continue;
                    }
                    let mut q = [a, b, c, d];
                    q.sort();
                    out.insert(q);
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn overlaps(w: &Web) -> Overlaps {
    let e = &w.edges;
    let cycles = four_cycles(w);
    let mut o = Overlaps::default();
    for site in w.find_bigons() {
        for q in &cycles {
            if site.pair.iter().any(|p| q.contains(p)) {
                o.bigon_square += 1;
            }
        }
    }
    for (i, q1) in cycles.iter().enumerate() {
        for q2 in &cycles[i + 1..] {
            let shared: Vec<usize> = q1.iter().copied().filter(|x| q2.contains(x)).collect();
            match shared.len() {
                1 => o.squares_one_edge += 1,
                2 => {
                    let (x, y) = (e[shared[0]], e[shared[1]]);
                    if x.0 == y.0 || x.1 == y.1 {
                        o.squares_adjacent_edges += 1;
                    } else {
                        o.squares_opposite_edges += 1;
                    }
                }
                _ => {}
            }
        }
    }
    o
}

/// Small webs built around each overlap pattern.
pub fn overlap_instances() -> Vec<Web> {
    vec![
        // bigon on one side of a square
        Web::new([0, 1, 2, 3], [4, 5, 6, 7], vec![(0, 4), (0, 4), (0, 5), (1, 5), (1, 6), (1, 4), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (3, 7)], 0),
        // K_{3,3}: every pair of 4-cycles overlaps
        Web::k33(),
        // cube-like ladder of squares sharing single rungs
        Web::new([0, 1, 2, 3], [4, 5, 6, 7], vec![(0, 4), (0, 5), (0, 7), (1, 4), (1, 5), (1, 6), (2, 5), (2, 6), (2, 7), (3, 4), (3, 6), (3, 7)], 0),
        // square with both of one pair of opposite sides doubled: 4-cycles
        // through different parallel instances share the other two sides
        Web::new([0, 1], [2, 3], vec![(0, 2), (0, 2), (0, 3), (1, 3), (1, 3), (1, 2)], 0),
    ]
}

use std::collections::BTreeMap;

use super::code::{GaussCode, Pos};
use crate::algebra::LaurentPoly;
use crate::error::Error;
use crate::web::Web;

/// Local resolution of one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    /// Orientation-preserving reconnection of the two strands.
    Oriented,
    /// A sink taking both incoming strands, a source emitting both outgoing
    /// strands, and one edge from the source to the sink.
    Unoriented,
}

/// One smoothing per crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub choice: BTreeMap<u32, Smoothing>,
}

impl State {
    pub fn uniform(code: &GaussCode, s: Smoothing) -> State {
        State {
            choice: code.crossings().into_iter().map(|k| (k, s)).collect(),
        }
    }

    pub fn unoriented_count(&self) -> usize {
        self.choice.values().filter(|&&s| s == Smoothing::Unoriented).count()
    }
}

/// Flattened view of a code used by the state sum: passages are numbered
/// globally and crossings densely in ascending id order.
#[derive(Clone, Debug)]
pub struct Skeleton {
    ids: Vec<u32>,
    /// Dense crossing index of each passage.
    crossing: Vec<usize>,
    next: Vec<usize>,
    /// The other passage of the same crossing.
    partner: Vec<usize>,
    signs: Vec<i32>,
    empty_components: u32,
}

impl Skeleton {
    pub fn new(code: &GaussCode) -> Self {
        let ids = code.crossings();
        let dense: BTreeMap<u32, usize> = ids.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut global: BTreeMap<Pos, usize> = BTreeMap::new();
        for (g, pos) in code.positions().enumerate() {
            global.insert(pos, g);
        }
        let total = global.len();
        let mut crossing = vec![0; total];
        let mut next = vec![0; total];
        let mut first_seen: Vec<Option<usize>> = vec![None; ids.len()];
        let mut partner = vec![0; total];
        for (&pos, &g) in &global {
            let k = dense[&code.passage(pos).crossing];
            crossing[g] = k;
            next[g] = global[&code.next_pos(pos)];
            match first_seen[k] {
                None => first_seen[k] = Some(g),
                Some(h) => {
                    partner[g] = h;
                    partner[h] = g;
                }
            }
        }
        let signs = ids
            .iter()
            .map(|&k| code.sign_of(k).map_or(1, |s| s.value()))
            .collect();
        let empty_components = code.components().iter().filter(|c| c.is_empty()).count() as u32;
        Self {
            ids,
            crossing,
            next,
            partner,
            signs,
            empty_components,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.ids.len()
    }

    pub fn crossing_ids(&self) -> &[u32] {
        &self.ids
    }

    /// Bit `i` of the mask set means crossing `ids[i]` is unoriented.
    pub fn state_mask(&self, s: &State) -> u64 {
        self.ids
            .iter()
            .enumerate()
            .filter(|(_, k)| s.choice.get(k) == Some(&Smoothing::Unoriented))
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn state_from_mask(&self, mask: u64) -> State {
        State {
            choice: self
                .ids
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let s = if mask >> i & 1 == 1 { Smoothing::Unoriented } else { Smoothing::Oriented };
                    (k, s)
                })
                .collect(),
        }
    }

    /// `(sign, exponent)` of the state weight, a signed power of `A`:
    /// `A^{2e}` per oriented crossing of sign `e`, `-A^{-e}` per unoriented one.
    pub fn weight_parts(&self, mask: u64) -> (i64, i32) {
        let mut sign = 1;
        let mut exp = 0;
        for (i, &e) in self.signs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sign = -sign;
                exp -= e;
            } else {
                exp += 2 * e;
            }
        }
        (sign, exp)
    }

    pub fn weight(&self, mask: u64) -> LaurentPoly {
        let (c, e) = self.weight_parts(mask);
        LaurentPoly::monomial(c, e)
    }

    /// Weight at `A = a`: oriented crossings give 1, unoriented ones `-a`.
    pub fn free_weight(&self, mask: u64, a: i64) -> i64 {
        (-a).pow(mask.count_ones())
    }

    /// Web of the state: crossing `i` contributes source `2i` and sink
    /// `2i + 1` when unoriented.
    pub fn web(&self, mask: u64) -> Web {
        let unoriented = |p: usize| mask >> self.crossing[p] & 1 == 1;
        let mut web = Web::empty();
        web.circles = self.empty_components;
        for k in 0..self.ids.len() {
            if mask >> k & 1 == 1 {
                let (s, t) = (2 * k as u32, 2 * k as u32 + 1);
                web.sources.insert(s);
                web.sinks.insert(t);
                web.edges.push((s, t));
            }
        }
        // arc p runs from passage p to passage next[p]
        let mut visited = vec![false; self.crossing.len()];
        for p in 0..self.crossing.len() {
            if !unoriented(p) {
                continue;
            }
            let mut arc = p;
            loop {
                visited[arc] = true;
                let head = self.next[arc];
                if unoriented(head) {
                    web.edges.push((2 * self.crossing[p] as u32, 2 * self.crossing[head] as u32 + 1));
                    break;
                }
                arc = self.partner[head];
            }
        }
        for p in 0..self.crossing.len() {
            if visited[p] {
                continue;
            }
            let mut arc = p;
            loop {
                visited[arc] = true;
                arc = self.partner[self.next[arc]];
                if arc == p {
                    break;
                }
            }
            web.circles += 1;
        }
        web
    }
}

/// All `2^n` states in mask order.
pub fn states(code: &GaussCode) -> impl Iterator<Item = State> {
    let sk = Skeleton::new(code);
    let n = sk.crossing_count();
    (0..1u64 << n).map(move |m| sk.state_from_mask(m))
}

/// Product of the crossing weights of a state.
pub fn state_weight(code: &GaussCode, s: &State) -> Result<LaurentPoly, Error> {
    if code.is_free() {
        return Err(Error::WrongMode("state weights need a signed code"));
    }
    let sk = Skeleton::new(code);
    Ok(sk.weight(sk.state_mask(s)))
}

pub fn state_web(code: &GaussCode, s: &State) -> Web {
    let sk = Skeleton::new(code);
    sk.web(sk.state_mask(s))
}

/// The all-unoriented state web.
pub fn unoriented_state_web(code: &GaussCode) -> Web {
    state_web(code, &State::uniform(code, Smoothing::Unoriented))
}

//! Reidemeister, virtualization and crossing-switch moves on Gauss codes.
//!
//! Detour moves are invisible at the Gauss-code level, so any two arcs may
//! take part in an R2 and any three pairwise-adjacent passage pairs with a
//! consistent pattern form an R3 triangle.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::code::{GaussCode, Mode, Passage, Pos, Role, Sign};
use crate::error::Error;

/// Insertion point: before offset `index` of component `component`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gap {
    pub component: usize,
    pub index: usize,
}

/// A move together with everything needed to apply it.
///
/// R3 segments are given by the position of their first passage; a segment
/// is that passage and the next one in its component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Move {
    R1Insert { at: Gap, over_first: bool, sign: Sign },
    R1Delete { crossing: u32 },
    R2Insert {
        over: Gap,
        under: Gap,
        under_reversed: bool,
        sign: Sign,
        over_block_first: bool,
    },
    R2Delete { a: u32, b: u32 },
    R3 { segments: [Pos; 3] },
    Virtualize { crossing: u32 },
    Switch { crossing: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
    Virtualize,
    Switch,
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Insert { .. } => MoveKind::R1Insert,
            Move::R1Delete { .. } => MoveKind::R1Delete,
            Move::R2Insert { .. } => MoveKind::R2Insert,
            Move::R2Delete { .. } => MoveKind::R2Delete,
            Move::R3 { .. } => MoveKind::R3,
            Move::Virtualize { .. } => MoveKind::Virtualize,
            Move::Switch { .. } => MoveKind::Switch,
        }
    }

    /// Net change in crossing count.
    pub fn crossing_delta(&self) -> i32 {
        match self.kind() {
            MoveKind::R1Insert => 1,
            MoveKind::R1Delete => -1,
            MoveKind::R2Insert => 2,
            MoveKind::R2Delete => -2,
            _ => 0,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

fn not_applicable(msg: impl Into<String>) -> Error {
    Error::MoveNotApplicable(msg.into())
}

fn check_gap(code: &GaussCode, g: Gap) -> Result<(), Error> {
    match code.components().get(g.component) {
        Some(c) if g.index <= c.len() => Ok(()),
        _ => Err(not_applicable(format!("no gap {}:{}", g.component, g.index))),
    }
}

fn fresh_id(code: &GaussCode, k: u32) -> u32 {
    code.max_crossing_id().map_or(k, |m| m + k)
}

fn make_passage(mode: Mode, crossing: u32, role: Role, sign: Sign) -> Passage {
    match mode {
        Mode::Signed => Passage::signed(crossing, role, sign),
        Mode::Free => Passage::free(crossing),
    }
}

/// Inserts blocks at gaps; blocks sharing a gap are placed in list order.
fn insert_blocks(code: &GaussCode, blocks: Vec<(Gap, Vec<Passage>)>) -> GaussCode {
    let mut out = code.clone();
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    // later gaps first so earlier indices stay valid; equal gaps in reverse
    // list order so the first listed block ends up first
    order.sort_by(|&i, &j| blocks[j].0.cmp(&blocks[i].0).then(j.cmp(&i)));
    for i in order {
        let (gap, block) = &blocks[i];
        let comp = &mut out.components_mut()[gap.component];
        for (k, p) in block.iter().enumerate() {
            comp.insert(gap.index + k, *p);
        }
    }
    out
}

/// Removes adjacent pairs `(first, next(first))` and reports the gap each
/// pair leaves behind.
fn remove_blocks(code: &GaussCode, firsts: &[Pos]) -> (GaussCode, Vec<Gap>) {
    let mut dead: HashSet<Pos> = HashSet::new();
    for &f in firsts {
        dead.insert(f);
        dead.insert(code.next_pos(f));
    }
    let gaps = firsts
        .iter()
        .map(|&(c, i)| Gap {
            component: c,
            index: (0..i).filter(|&j| !dead.contains(&(c, j))).count(),
        })
        .collect();
    let comps = code
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            comp.iter()
                .enumerate()
                .filter(|&(i, _)| !dead.contains(&(c, i)))
                .map(|(_, p)| *p)
                .collect()
        })
        .collect();
    (GaussCode::new_unchecked(comps, code.mode()), gaps)
}

/// If `p` and `q` are cyclically adjacent, the one that comes first.
fn block_start(code: &GaussCode, p: Pos, q: Pos) -> Option<Pos> {
    if p == q {
        None
    } else if code.next_pos(p) == q {
        Some(p)
    } else if code.next_pos(q) == p {
        Some(q)
    } else {
        None
    }
}

/// Valid R3 patterns. The three strands are top (over at both of its
/// crossings), middle and bottom; `x` = top/middle, `y` = top/bottom,
/// `z` = middle/bottom. A pattern records whether `x` precedes `y` along the
/// top strand, `x` precedes `z` along the middle one, `y` precedes `z` along
/// the bottom one, and the three signs.
type R3Pattern = (bool, bool, bool, i32, i32, i32);

fn r3_patterns() -> &'static HashSet<R3Pattern> {
    static PATTERNS: OnceLock<HashSet<R3Pattern>> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        // three lines in general position: y = 0, x = 0, x + y = 1
        let base: [((f64, f64), (f64, f64)); 3] =
            [((0.0, 0.0), (1.0, 0.0)), ((0.0, 0.0), (0.0, 1.0)), ((1.0, 0.0), (-1.0, 1.0))];
        let meet = |i: usize, j: usize| -> (f64, f64) {
            let ((px, py), (dx, dy)) = base[i];
            let ((qx, qy), (ex, ey)) = base[j];
            let det = dx * (-ey) - dy * (-ex);
            let t = ((qx - px) * (-ey) - (qy - py) * (-ex)) / det;
            (px + t * dx, py + t * dy)
        };
        let mut out = HashSet::new();
        let labelings = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for [top, mid, bot] in labelings {
            for flips in 0..8u32 {
                let dir = |l: usize| {
                    let f = if flips >> l & 1 == 1 { -1.0 } else { 1.0 };
                    (base[l].1 .0 * f, base[l].1 .1 * f)
                };
                let along = |l: usize, p: (f64, f64)| p.0 * dir(l).0 + p.1 * dir(l).1;
                let sign = |over: usize, under: usize| {
                    let (a, b) = (dir(over), dir(under));
                    if a.0 * b.1 - a.1 * b.0 > 0.0 { 1 } else { -1 }
                };
                let (x, y, z) = (meet(top, mid), meet(top, bot), meet(mid, bot));
                out.insert((
                    along(top, x) < along(top, y),
                    along(mid, x) < along(mid, z),
                    along(bot, y) < along(bot, z),
                    sign(top, mid),
                    sign(top, bot),
                    sign(mid, bot),
                ));
            }
        }
        out
    })
}

fn segment(code: &GaussCode, start: Pos) -> Option<(Pos, Pos)> {
    let comp = code.components().get(start.0)?;
    if start.1 >= comp.len() || comp.len() < 2 {
        return None;
    }
    let second = code.next_pos(start);
    (code.passage(start).crossing != code.passage(second).crossing).then_some((start, second))
}

/// Checks that three segments form an R3 triangle.
fn check_triangle(code: &GaussCode, starts: [Pos; 3]) -> Result<(), Error> {
    let bad = |why: &str| not_applicable(format!("R3 at {starts:?}: {why}"));
    let segs: Vec<(Pos, Pos)> = starts
        .iter()
        .map(|&s| segment(code, s))
        .collect::<Option<_>>()
        .ok_or_else(|| bad("not a two-crossing segment"))?;
    let positions: HashSet<Pos> = segs.iter().flat_map(|&(a, b)| [a, b]).collect();
    if positions.len() != 6 {
        return Err(bad("segments overlap"));
    }
    let crossing_sets: Vec<BTreeSet<u32>> = segs
        .iter()
        .map(|&(a, b)| [code.passage(a).crossing, code.passage(b).crossing].into())
        .collect();
    let all: BTreeSet<u32> = crossing_sets.iter().flatten().copied().collect();
    if all.len() != 3 || crossing_sets.iter().collect::<HashSet<_>>().len() != 3 {
        return Err(bad("segments do not form a triangle"));
    }
    if code.is_free() {
        return Ok(());
    }
    let roles = |&(a, b): &(Pos, Pos)| (code.passage(a).role, code.passage(b).role);
    let find = |f: &dyn Fn(Role, Role) -> bool| segs.iter().copied().find(|s| {
        let (r1, r2) = roles(s);
        f(r1, r2)
    });
    let top = find(&|a, b| a == Role::Over && b == Role::Over).ok_or_else(|| bad("no top strand"))?;
    let bot = find(&|a, b| a == Role::Under && b == Role::Under).ok_or_else(|| bad("no bottom strand"))?;
    let mid = find(&|a, b| a != b).ok_or_else(|| bad("no middle strand"))?;
    let (mid_under, mid_over) = if code.passage(mid.0).role == Role::Under {
        (mid.0, mid.1)
    } else {
        (mid.1, mid.0)
    };
    let x = code.passage(mid_under).crossing;
    let z = code.passage(mid_over).crossing;
    let top_set = [code.passage(top.0).crossing, code.passage(top.1).crossing];
    if !top_set.contains(&x) || top_set.contains(&z) {
        return Err(bad("middle strand does not pass under the top strand"));
    }
    let y = if top_set[0] == x { top_set[1] } else { top_set[0] };
    let sign = |k: u32| code.sign_of(k).map_or(0, Sign::value);
    let pattern = (
        code.passage(top.0).crossing == x,
        code.passage(mid.0).crossing == x,
        code.passage(bot.0).crossing == y,
        sign(x),
        sign(y),
        sign(z),
    );
    if r3_patterns().contains(&pattern) {
        Ok(())
    } else {
        Err(bad("orientation/sign pattern is not realizable"))
    }
}

fn swap_roles(code: &GaussCode, crossing: u32, flip_sign: bool) -> Result<GaussCode, Error> {
    if code.is_free() {
        return Err(not_applicable("free codes carry no over/under data"));
    }
    let [p, q] = code
        .locate(crossing)
        .ok_or_else(|| not_applicable(format!("no crossing {crossing}")))?;
    let mut out = code.clone();
    let comps = out.components_mut();
    let (rp, rq) = (comps[p.0][p.1].role, comps[q.0][q.1].role);
    comps[p.0][p.1].role = rq;
    comps[q.0][q.1].role = rp;
    if flip_sign {
        for pos in [p, q] {
            let s = &mut comps[pos.0][pos.1].sign;
            *s = s.map(Sign::flip);
        }
    }
    Ok(out)
}

/// Applies `m`, returning the new code and a move that undoes it.
pub fn apply_move_with_inverse(code: &GaussCode, m: &Move) -> Result<(GaussCode, Move), Error> {
    let mode = code.mode();
    match *m {
        Move::R1Insert { at, over_first, sign } => {
            check_gap(code, at)?;
            let c = fresh_id(code, 1);
            let (r1, r2) = if over_first { (Role::Over, Role::Under) } else { (Role::Under, Role::Over) };
            let block = vec![make_passage(mode, c, r1, sign), make_passage(mode, c, r2, sign)];
            Ok((insert_blocks(code, vec![(at, block)]), Move::R1Delete { crossing: c }))
        }
        Move::R1Delete { crossing } => {
            let [p, q] = code
                .locate(crossing)
                .ok_or_else(|| not_applicable(format!("no crossing {crossing}")))?;
            let start = block_start(code, p, q)
                .ok_or_else(|| not_applicable(format!("crossing {crossing} is not a kink")))?;
            let first = *code.passage(start);
            let (out, gaps) = remove_blocks(code, &[start]);
            let inverse = Move::R1Insert {
                at: gaps[0],
                over_first: first.role == Role::Over,
                sign: first.sign.unwrap_or(Sign::Pos),
            };
            Ok((out, inverse))
        }
        Move::R2Insert {
            over,
            under,
            under_reversed,
            sign,
            over_block_first,
        } => {
            check_gap(code, over)?;
            check_gap(code, under)?;
            let (a, b) = (fresh_id(code, 1), fresh_id(code, 2));
            let over_block = vec![
                make_passage(mode, a, Role::Over, sign),
                make_passage(mode, b, Role::Over, sign.flip()),
            ];
            let mut under_block = vec![
                make_passage(mode, a, Role::Under, sign),
                make_passage(mode, b, Role::Under, sign.flip()),
            ];
            if under_reversed {
                under_block.reverse();
            }
            let blocks = if over_block_first {
                vec![(over, over_block), (under, under_block)]
            } else {
                vec![(under, under_block), (over, over_block)]
            };
            Ok((insert_blocks(code, blocks), Move::R2Delete { a, b }))
        }
        Move::R2Delete { a, b } => {
            let (over_start, under_start) = r2_blocks(code, a, b)?;
            let first_over = *code.passage(over_start);
            let first_under = *code.passage(under_start);
            let (out, gaps) = remove_blocks(code, &[over_start, under_start]);
            let inverse = Move::R2Insert {
                over: gaps[0],
                under: gaps[1],
                under_reversed: first_under.crossing != first_over.crossing,
                sign: first_over.sign.unwrap_or(Sign::Pos),
                over_block_first: over_start.1 < under_start.1 || over_start.0 != under_start.0,
            };
            Ok((out, inverse))
        }
        Move::R3 { segments } => {
            check_triangle(code, segments)?;
            let mut out = code.clone();
            for s in segments {
                let t = code.next_pos(s);
                let comps = out.components_mut();
                let tmp = comps[s.0][s.1];
                comps[s.0][s.1] = comps[t.0][t.1];
                comps[t.0][t.1] = tmp;
            }
            Ok((out, m.clone()))
        }
        Move::Virtualize { crossing } => Ok((swap_roles(code, crossing, false)?, m.clone())),
        Move::Switch { crossing } => Ok((swap_roles(code, crossing, true)?, m.clone())),
    }
}

/// Starts of the two adjacent blocks of an R2 bigon between `a` and `b`:
/// the over block first (for free codes, the block holding `a`'s first
/// passage).
fn r2_blocks(code: &GaussCode, a: u32, b: u32) -> Result<(Pos, Pos), Error> {
    let bad = || not_applicable(format!("crossings {a},{b} do not bound a bigon"));
    if a == b {
        return Err(bad());
    }
    let pa = code.locate(a).ok_or_else(bad)?;
    let pb = code.locate(b).ok_or_else(bad)?;
    if code.is_free() {
        for (i, j) in [(0, 0), (0, 1)] {
            let first = block_start(code, pa[0], pb[i]);
            let second = block_start(code, pa[1], pb[1 - i]);
            let _ = j;
            if let (Some(f), Some(s)) = (first, second) {
                return Ok((f, s));
            }
        }
        return Err(bad());
    }
    if code.sign_of(a) == code.sign_of(b) {
        return Err(bad());
    }
    let role_pos = |ps: [Pos; 2], r: Role| ps.into_iter().find(|&p| code.passage(p).role == r).unwrap();
    let over = block_start(code, role_pos(pa, Role::Over), role_pos(pb, Role::Over)).ok_or_else(bad)?;
    let under = block_start(code, role_pos(pa, Role::Under), role_pos(pb, Role::Under)).ok_or_else(bad)?;
    Ok((over, under))
}

pub fn apply_move(code: &GaussCode, m: &Move) -> Result<GaussCode, Error> {
    apply_move_with_inverse(code, m).map(|(c, _)| c)
}

/// Every gap of the code; empty components have exactly one.
pub fn gaps(code: &GaussCode) -> Vec<Gap> {
    code.components()
        .iter()
        .enumerate()
        .flat_map(|(c, comp)| (0..comp.len().max(1)).map(move |i| Gap { component: c, index: i }))
        .collect()
}

/// Moves that delete crossings or rearrange them (no insertions).
pub fn enumerate_local_moves(code: &GaussCode) -> Vec<Move> {
    let mut out = Vec::new();
    let locs = code.locations();
    for (&k, &[p, q]) in &locs {
        if block_start(code, p, q).is_some() {
            out.push(Move::R1Delete { crossing: k });
        }
    }
    let ids: Vec<u32> = locs.keys().copied().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if r2_blocks(code, a, b).is_ok() {
                out.push(Move::R2Delete { a, b });
            }
        }
    }
    out.extend(r3_sites(code).into_iter().map(|segments| Move::R3 { segments }));
    if !code.is_free() {
        for &k in &ids {
            out.push(Move::Virtualize { crossing: k });
        }
        for &k in &ids {
            out.push(Move::Switch { crossing: k });
        }
    }
    out
}

/// Every R1 insertion template.
pub fn r1_insertions(code: &GaussCode) -> Vec<Move> {
    let mut out = Vec::new();
    for at in gaps(code) {
        for over_first in [true, false] {
            for sign in [Sign::Pos, Sign::Neg] {
                if code.is_free() && (!over_first || sign == Sign::Neg) {
                    continue;
                }
                out.push(Move::R1Insert { at, over_first, sign });
            }
        }
    }
    out
}

/// Every R2 insertion template.
pub fn r2_insertions(code: &GaussCode) -> Vec<Move> {
    let gs = gaps(code);
    let mut out = Vec::new();
    for &over in &gs {
        for &under in &gs {
            for under_reversed in [false, true] {
                for sign in [Sign::Pos, Sign::Neg] {
                    if code.is_free() && sign == Sign::Neg {
                        continue;
                    }
                    let orders: &[bool] = if over == under { &[true, false] } else { &[true] };
                    for &over_block_first in orders {
                        out.push(Move::R2Insert {
                            over,
                            under,
                            under_reversed,
                            sign,
                            over_block_first,
                        });
                    }
                }
            }
        }
    }
    out
}

/// All applicable moves: deletions, R3 triangles, virtualizations and
/// switches (signed codes), and every insertion template.
pub fn enumerate_moves(code: &GaussCode) -> Vec<Move> {
    let mut out = enumerate_local_moves(code);
    out.extend(r1_insertions(code));
    out.extend(r2_insertions(code));
    out
}

/// Segment starts of every R3 triangle, each triangle once.
pub fn r3_sites(code: &GaussCode) -> Vec<[Pos; 3]> {
    let segs: Vec<Pos> = code.positions().filter(|&p| segment(code, p).is_some()).collect();
    let pair = |s: Pos| -> BTreeSet<u32> {
        let (a, b) = segment(code, s).unwrap();
        [code.passage(a).crossing, code.passage(b).crossing].into()
    };
    let mut found: BTreeSet<[Pos; 3]> = BTreeSet::new();
    for (i, &s1) in segs.iter().enumerate() {
        let c1 = pair(s1);
        for &s2 in &segs[i + 1..] {
            let c2 = pair(s2);
            if c1.intersection(&c2).count() != 1 {
                continue;
            }
            let want: BTreeSet<u32> = c1.symmetric_difference(&c2).copied().collect();
            for &s3 in &segs {
                if s3 == s1 || s3 == s2 || pair(s3) != want {
                    continue;
                }
                let mut key = [s1, s2, s3];
                key.sort();
                if !found.contains(&key) && check_triangle(code, key).is_ok() {
                    found.insert(key);
                }
            }
        }
    }
    found.into_iter().collect()
}

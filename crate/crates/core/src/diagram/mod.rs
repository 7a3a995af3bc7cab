//! Gauss-code diagrams, their states, and the moves between them.

mod code;
pub mod families;
mod moves;
mod states;

use std::collections::{BTreeMap, HashMap};

pub use code::{GaussCode, Mode, Passage, Pos, Role, Sign};
pub use moves::{
    apply_move, apply_move_with_inverse, enumerate_local_moves, enumerate_moves, gaps, r1_insertions,
    r2_insertions, r3_sites, Gap, Move, MoveKind,
};
pub use states::{state_weight, state_web, states, unoriented_state_web, Skeleton, Smoothing, State};

use crate::error::Error;
use crate::web::simple_girth;

/// Girth of the underlying 4-valent graph: crossings are vertices and the
/// arcs between consecutive passages are edges.
pub fn diagram_girth(code: &GaussCode) -> Result<u32, Error> {
    if code.crossing_count() == 0 {
        return Err(Error::Empty);
    }
    let mut mult: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for p in code.positions() {
        let a = code.passage(p).crossing;
        let b = code.passage(code.next_pos(p)).crossing;
        if a == b {
            return Ok(1);
        }
        *mult.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    if mult.values().any(|&m| m > 1) {
        return Ok(2);
    }
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(a, b) in mult.keys() {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    // every vertex has degree 4, so a cycle always exists
    Ok(simple_girth(&adj).expect("4-valent graph has a cycle"))
}

/// Key identifying a code up to rotation of each component and renaming of
/// crossings. Tries every rotation combination, so only for small codes.
pub fn canonical_code_key(code: &GaussCode) -> String {
    let lens: Vec<usize> = code.components().iter().map(|c| c.len().max(1)).collect();
    let mut best: Option<String> = None;
    let mut shift = vec![0usize; lens.len()];
    loop {
        let mut rotated = code.clone();
        for (c, &k) in shift.iter().enumerate() {
            rotated = rotated.rotated(c, k);
        }
        let mut names: HashMap<u32, u32> = HashMap::new();
        for p in rotated.positions() {
            let next = names.len() as u32 + 1;
            names.entry(rotated.passage(p).crossing).or_insert(next);
        }
        let key = rotated.renamed(|k| names[&k]).to_string();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        let mut c = 0;
        while c < lens.len() {
            shift[c] += 1;
            if shift[c] < lens[c] {
                break;
            }
            shift[c] = 0;
            c += 1;
        }
        if c == lens.len() {
            break;
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{canonical_form, is_isomorphic};
    use crate::web::Web;

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    #[test]
    fn state_counts() {
        assert_eq!(states(&GaussCode::unknot()).count(), 1);
        assert_eq!(states(&code("O1+,U1+")).count(), 2);
        assert_eq!(states(&families::trefoil()).count(), 8);
    }

    #[test]
    fn kink_weights() {
        let k = code("O1+,U1+");
        let o = State::uniform(&k, Smoothing::Oriented);
        let u = State::uniform(&k, Smoothing::Unoriented);
        assert_eq!(state_weight(&k, &o).unwrap().to_string(), "A^2");
        assert_eq!(state_weight(&k, &u).unwrap().to_string(), "-A^-1");
        let t = families::trefoil();
        let tu = State::uniform(&t, Smoothing::Unoriented);
        assert_eq!(state_weight(&t, &tu).unwrap().to_string(), "-A^-3");
        assert!(state_weight(&k.to_free(), &o).is_err());
    }

    #[test]
    fn kink_state_webs() {
        let k = code("O1+,U1+");
        assert_eq!(state_web(&k, &State::uniform(&k, Smoothing::Oriented)), Web::circles(2));
        assert!(is_isomorphic(&unoriented_state_web(&k), &Web::theta()).unwrap());
        assert_eq!(unoriented_state_web(&GaussCode::unknot()), Web::circles(1));
    }

    #[test]
    fn virtual_trefoil_kus() {
        let w = unoriented_state_web(&families::virtual_trefoil());
        w.validate().unwrap();
        assert_eq!(w.vertex_count(), 4);
        assert!(!w.find_bigons().is_empty());
    }

    #[test]
    fn polygon_kus_is_irreducible() {
        for n in 7..=9 {
            let w = unoriented_state_web(&families::polygon_free_knot(n).unwrap());
            assert_eq!(w.vertex_count(), 2 * n as usize);
            assert!(w.find_bigons().is_empty() && w.find_squares().is_empty(), "n={n}");
            assert!(w.girth().unwrap().unwrap() >= 6);
        }
    }

    #[test]
    fn girths() {
        assert_eq!(diagram_girth(&code("O1+,U1+")).unwrap(), 1);
        assert_eq!(diagram_girth(&families::virtual_trefoil()).unwrap(), 2);
        assert_eq!(diagram_girth(&families::polygon_free_knot(7).unwrap()).unwrap(), 3);
        assert!(matches!(diagram_girth(&GaussCode::unknot()), Err(Error::Empty)));
    }

    #[test]
    fn state_web_ignores_rotation_and_renaming() {
        let c = code("O1+,U2-,O3+,U1+,O2-,U3+;O4-,U4-");
        let key = |w: &Web| {
            let (parts, circles) = w.components();
            let mut keys: Vec<_> = parts.iter().map(|p| canonical_form(p).unwrap()).collect();
            keys.sort();
            (keys, circles)
        };
        let rename = |k: u32| 10 - k;
        for (variant, renamed) in [(c.rotated(0, 2), false), (c.rotated(1, 1), false), (c.renamed(rename), true)] {
            for s in states(&c) {
                let t = if renamed {
                    State {
                        choice: s.choice.iter().map(|(&k, &x)| (rename(k), x)).collect(),
                    }
                } else {
                    s.clone()
                };
                assert_eq!(key(&state_web(&c, &s)), key(&state_web(&variant, &t)));
            }
        }
    }

    #[test]
    fn code_key_sees_through_rotation() {
        let c = families::trefoil();
        assert_eq!(canonical_code_key(&c), canonical_code_key(&c.rotated(0, 3).renamed(|k| k + 5)));
        assert_ne!(canonical_code_key(&c), canonical_code_key(&c.mirror()));
    }
}

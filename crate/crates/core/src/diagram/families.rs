//! Standard diagrams used by tests, the CLI and the fuzz corpus.

use super::code::{GaussCode, Mode, Passage, Role, Sign};
use crate::error::Error;

/// Closure of a braid word on `strands` strands. Letter `i` is the
/// generator twisting strands `i` and `i + 1` with the left strand passing
/// over (sign +), `-i` its inverse (left strand under, sign −). Crossings are
/// numbered 1, 2, ... in word order.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<GaussCode, Error> {
    if strands == 0 {
        return Err(Error::InvalidCode("a braid needs at least one strand".into()));
    }
    for &g in word {
        if g == 0 || g.unsigned_abs() as usize >= strands {
            return Err(Error::InvalidCode(format!("generator {g} out of range")));
        }
    }
    // passages met by the strand starting at each position, and where it ends
    let mut passes: Vec<Vec<Passage>> = Vec::with_capacity(strands);
    let mut end = Vec::with_capacity(strands);
    for start in 0..strands {
        let mut pos = start;
        let mut seq = Vec::new();
        for (t, &g) in word.iter().enumerate() {
            let left = g.unsigned_abs() as usize - 1;
            let sign = if g > 0 { Sign::Pos } else { Sign::Neg };
            let crossing = t as u32 + 1;
            if pos == left {
                let role = if g > 0 { Role::Over } else { Role::Under };
                seq.push(Passage::signed(crossing, role, sign));
                pos = left + 1;
            } else if pos == left + 1 {
                let role = if g > 0 { Role::Under } else { Role::Over };
                seq.push(Passage::signed(crossing, role, sign));
                pos = left;
            }
        }
        passes.push(seq);
        end.push(pos);
    }
    let mut done = vec![false; strands];
    let mut comps = Vec::new();
    for start in 0..strands {
        if done[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut s = start;
        while !done[s] {
            done[s] = true;
            comp.extend_from_slice(&passes[s]);
            s = end[s];
        }
        comps.push(comp);
    }
    GaussCode::new(comps, Mode::Signed)
}

/// Free knot whose Gauss diagram is the `n`-gon: code `1,n,2,1,3,2,...,n,n-1`.
pub fn polygon_free_knot(n: u32) -> Result<GaussCode, Error> {
    if n < 2 {
        return Err(Error::InvalidCode("polygon needs at least two chords".into()));
    }
    let mut seq = vec![1, n];
    for k in 2..=n {
        seq.push(k);
        seq.push(k - 1);
    }
    GaussCode::new(vec![seq.into_iter().map(Passage::free).collect()], Mode::Free)
}

pub fn kink(sign: Sign) -> GaussCode {
    GaussCode::new(
        vec![vec![Passage::signed(1, Role::Over, sign), Passage::signed(1, Role::Under, sign)]],
        Mode::Signed,
    )
    .expect("kink is valid")
}

/// Right-handed trefoil, closure of the cube of the first generator.
pub fn trefoil() -> GaussCode {
    braid_closure(2, &[1, 1, 1]).expect("valid braid")
}

pub fn figure_eight() -> GaussCode {
    braid_closure(3, &[1, -2, 1, -2]).expect("valid braid")
}

pub fn virtual_trefoil() -> GaussCode {
    "O1+,O2+,U1+,U2+".parse().expect("valid code")
}

pub fn hopf_link() -> GaussCode {
    braid_closure(2, &[1, 1]).expect("valid braid")
}

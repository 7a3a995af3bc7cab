use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
    /// Free-mode passage: no over/under data.
    Unmarked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i32) -> Sign {
        if v >= 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: u32,
    pub role: Role,
    pub sign: Option<Sign>,
}

impl Passage {
    pub fn signed(crossing: u32, role: Role, sign: Sign) -> Self {
        Self {
            crossing,
            role,
            sign: Some(sign),
        }
    }

    pub fn free(crossing: u32) -> Self {
        Self {
            crossing,
            role: Role::Unmarked,
            sign: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Signed,
    Free,
}

/// Position of a passage: component index and offset in its cyclic sequence.
pub type Pos = (usize, usize);

/// A virtual or free knot/link diagram as a Gauss code: one cyclic sequence
/// of crossing passages per component. An empty sequence is an unknotted
/// component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussCode {
    components: Vec<Vec<Passage>>,
    mode: Mode,
}

impl GaussCode {
    /// Validates and wraps the given components.
    pub fn new(components: Vec<Vec<Passage>>, mode: Mode) -> Result<Self, Error> {
        let code = Self { components, mode };
        code.validate()?;
        Ok(code)
    }

    pub(crate) fn new_unchecked(components: Vec<Vec<Passage>>, mode: Mode) -> Self {
        Self { components, mode }
    }

    /// The one-component crossing-free diagram.
    pub fn unknot() -> Self {
        Self::new_unchecked(vec![vec![]], Mode::Signed)
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_free(&self) -> bool {
        self.mode == Mode::Free
    }

    pub fn passage(&self, (c, i): Pos) -> &Passage {
        &self.components[c][i]
    }

    pub fn next_pos(&self, (c, i): Pos) -> Pos {
        (c, (i + 1) % self.components[c].len())
    }

    pub fn prev_pos(&self, (c, i): Pos) -> Pos {
        let len = self.components[c].len();
        (c, (i + len - 1) % len)
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(c, comp)| (0..comp.len()).map(move |i| (c, i)))
    }

    /// Crossing ids in ascending order.
    pub fn crossings(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.components.iter().flatten().map(|p| p.crossing).collect();
        set.into_iter().collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Both positions of every crossing, in code order.
    pub fn locations(&self) -> BTreeMap<u32, [Pos; 2]> {
        let mut seen: BTreeMap<u32, Vec<Pos>> = BTreeMap::new();
        for pos in self.positions() {
            seen.entry(self.passage(pos).crossing).or_default().push(pos);
        }
        seen.into_iter().map(|(k, v)| (k, [v[0], v[1]])).collect()
    }

    pub fn locate(&self, crossing: u32) -> Option<[Pos; 2]> {
        let found: Vec<Pos> = self
            .positions()
            .filter(|&p| self.passage(p).crossing == crossing)
            .collect();
        (found.len() == 2).then(|| [found[0], found[1]])
    }

    pub fn sign_of(&self, crossing: u32) -> Option<Sign> {
        self.components
            .iter()
            .flatten()
            .find(|p| p.crossing == crossing)
            .and_then(|p| p.sign)
    }

    pub fn max_crossing_id(&self) -> Option<u32> {
        self.components.iter().flatten().map(|p| p.crossing).max()
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> Result<i32, Error> {
        if self.is_free() {
            return Err(Error::WrongMode("writhe needs a signed code"));
        }
        Ok(self
            .locations()
            .keys()
            .map(|&k| self.sign_of(k).map_or(0, Sign::value))
            .sum())
    }

    pub fn validate(&self) -> Result<(), Error> {
        let mut seen: BTreeMap<u32, Vec<&Passage>> = BTreeMap::new();
        for p in self.components.iter().flatten() {
            let ok = match self.mode {
                Mode::Signed => p.role != Role::Unmarked && p.sign.is_some(),
                Mode::Free => p.role == Role::Unmarked && p.sign.is_none(),
            };
            if !ok {
                return Err(Error::InvalidCode(format!(
                    "crossing {} mixes signed and free passages",
                    p.crossing
                )));
            }
            seen.entry(p.crossing).or_default().push(p);
        }
        for (k, ps) in seen {
            if ps.len() != 2 {
                return Err(Error::InvalidCode(format!(
                    "crossing {k} occurs {} time(s), expected 2",
                    ps.len()
                )));
            }
            if self.mode == Mode::Signed {
                let overs = ps.iter().filter(|p| p.role == Role::Over).count();
                if overs == 0 {
                    return Err(Error::InvalidCode(format!("crossing {k} missing over passage")));
                }
                if overs == 2 {
                    return Err(Error::InvalidCode(format!("crossing {k} missing under passage")));
                }
                if ps[0].sign != ps[1].sign {
                    return Err(Error::InvalidCode(format!("crossing {k} has mismatched signs")));
                }
            }
        }
        Ok(())
    }

    /// Drops roles and signs.
    pub fn to_free(&self) -> GaussCode {
        let comps = self
            .components
            .iter()
            .map(|c| c.iter().map(|p| Passage::free(p.crossing)).collect())
            .collect();
        Self::new_unchecked(comps, Mode::Free)
    }

    /// Signed lift of a free code: first passage over, every sign positive.
    /// Signed codes are returned unchanged.
    pub fn lift_positive(&self) -> GaussCode {
        if !self.is_free() {
            return self.clone();
        }
        let mut seen = BTreeSet::new();
        let comps = self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| {
                        let role = if seen.insert(p.crossing) { Role::Over } else { Role::Under };
                        Passage::signed(p.crossing, role, Sign::Pos)
                    })
                    .collect()
            })
            .collect();
        Self::new_unchecked(comps, Mode::Signed)
    }

    /// Mirror image: every sign flipped and every over/under swapped.
    pub fn mirror(&self) -> GaussCode {
        let comps = self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| Passage {
                        crossing: p.crossing,
                        role: match p.role {
                            Role::Over => Role::Under,
                            Role::Under => Role::Over,
                            Role::Unmarked => Role::Unmarked,
                        },
                        sign: p.sign.map(Sign::flip),
                    })
                    .collect()
            })
            .collect();
        Self::new_unchecked(comps, self.mode)
    }

    /// Split union: `other`'s crossings are renumbered past this code's.
    pub fn split_union(&self, other: &GaussCode) -> Result<GaussCode, Error> {
        if self.mode != other.mode {
            return Err(Error::WrongMode("split union of signed and free codes"));
        }
        let offset = self.max_crossing_id().map_or(0, |m| m + 1);
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().map(|c| {
            c.iter()
                .map(|p| Passage {
                    crossing: p.crossing + offset,
                    ..*p
                })
                .collect()
        }));
        Ok(Self::new_unchecked(comps, self.mode))
    }

    /// Rotates component `c` left by `k` passages.
    pub fn rotated(&self, c: usize, k: usize) -> GaussCode {
        let mut out = self.clone();
        if !out.components[c].is_empty() {
            let len = out.components[c].len();
            out.components[c].rotate_left(k % len);
        }
        out
    }

    /// Applies `f` to every crossing id; `f` must be injective.
    pub fn renamed(&self, f: impl Fn(u32) -> u32) -> GaussCode {
        let comps = self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| Passage {
                        crossing: f(p.crossing),
                        ..*p
                    })
                    .collect()
            })
            .collect();
        Self::new_unchecked(comps, self.mode)
    }

    pub(crate) fn components_mut(&mut self) -> &mut Vec<Vec<Passage>> {
        &mut self.components
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ci, comp) in self.components.iter().enumerate() {
            if ci > 0 {
                f.write_str(";")?;
            }
            for (i, p) in comp.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                match p.role {
                    Role::Over => f.write_str("O")?,
                    Role::Under => f.write_str("U")?,
                    Role::Unmarked => {}
                }
                write!(f, "{}", p.crossing)?;
                match p.sign {
                    Some(Sign::Pos) => f.write_str("+")?,
                    Some(Sign::Neg) => f.write_str("-")?,
                    None => {}
                }
            }
        }
        Ok(())
    }
}

fn parse_token(tok: &str) -> Result<Passage, Error> {
    let bad = || Error::Parse(format!("bad passage token {tok:?}"));
    let (role, rest) = match tok.chars().next() {
        Some('O') | Some('o') => (Role::Over, &tok[1..]),
        Some('U') | Some('u') => (Role::Under, &tok[1..]),
        Some(c) if c.is_ascii_digit() => (Role::Unmarked, tok),
        _ => return Err(bad()),
    };
    let (digits, sign) = if let Some(d) = rest.strip_suffix('+') {
        (d, Some(Sign::Pos))
    } else if let Some(d) = rest.strip_suffix('-').or_else(|| rest.strip_suffix('\u{2212}')) {
        (d, Some(Sign::Neg))
    } else {
        (rest, None)
    };
    let crossing = digits.parse::<u32>().map_err(|_| bad())?;
    match (role, sign) {
        (Role::Unmarked, None) => Ok(Passage::free(crossing)),
        (Role::Unmarked, Some(_)) => Err(bad()),
        (_, None) => Err(Error::Parse(format!("passage {tok:?} has no sign"))),
        (r, Some(s)) => Ok(Passage::signed(crossing, r, s)),
    }
}

impl FromStr for GaussCode {
    type Err = Error;

    /// Components are separated by `;` and passages by `,`; whitespace is
    /// ignored. Signed passages look like `O3+` / `U3-`, free ones are bare
    /// crossing numbers. The empty string is the unknot.
    fn from_str(text: &str) -> Result<Self, Error> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut components = Vec::new();
        let mut mode: Option<Mode> = None;
        for comp in text.split(';') {
            let mut passages = Vec::new();
            for tok in comp.split(',').filter(|t| !t.is_empty()) {
                let p = parse_token(tok)?;
                let m = if p.role == Role::Unmarked { Mode::Free } else { Mode::Signed };
                if mode.is_some_and(|prev| prev != m) {
                    return Err(Error::InvalidCode("code mixes signed and free passages".into()));
                }
                mode = Some(m);
                passages.push(p);
            }
            components.push(passages);
        }
        GaussCode::new(components, mode.unwrap_or(Mode::Signed))
    }
}

//! The state-sum bracket, its writhe normalization, free specializations,
//! and the classicality and minimality tests built on it.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::algebra::{IntModuleElement, LaurentPoly, ModuleElement, Monomial};
use crate::canon::canonical_form_unchecked;
use crate::diagram::{diagram_girth, unoriented_state_web, GaussCode, Skeleton};
use crate::error::Error;
use crate::reduce::Evaluator;

/// Masks per rayon work item.
const CHUNK: u64 = 64;

/// `Σ_s weight(s) · f(K_s)`, streaming states in parallel chunks.
fn state_sum(sk: &Skeleton, eval: &Evaluator, weight: impl Fn(u64) -> LaurentPoly + Sync) -> ModuleElement {
    let total = 1u64 << sk.crossing_count();
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = ModuleElement::zero();
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                acc.add_scaled(&weight(mask), &eval.evaluate(&sk.web(mask)));
            }
            acc
        })
        .reduce(ModuleElement::zero, |mut a, b| {
            a.add_assign(&b);
            a
        })
}

fn check_size(code: &GaussCode) -> Result<(), Error> {
    let n = code.crossing_count();
    if n > 40 {
        return Err(Error::InvalidCode(format!("{n} crossings is beyond the state-sum range")));
    }
    Ok(())
}

/// Unnormalized bracket of a signed code.
pub fn bracket(code: &GaussCode) -> Result<ModuleElement, Error> {
    bracket_with(code, &Evaluator::new())
}

/// As [`bracket`], sharing `eval`'s memo table.
pub fn bracket_with(code: &GaussCode, eval: &Evaluator) -> Result<ModuleElement, Error> {
    if code.is_free() {
        return Err(Error::WrongMode("the bracket needs a signed code; use the free bracket"));
    }
    check_size(code)?;
    let sk = Skeleton::new(code);
    Ok(state_sum(&sk, eval, |m| sk.weight(m)))
}

/// `A^{-8 wr} · bracket`.
pub fn normalized_bracket(code: &GaussCode) -> Result<ModuleElement, Error> {
    normalized_bracket_with(code, &Evaluator::new())
}

pub fn normalized_bracket_with(code: &GaussCode, eval: &Evaluator) -> Result<ModuleElement, Error> {
    let raw = bracket_with(code, eval)?;
    Ok(raw.shift(-8 * code.writhe()?))
}

/// Bracket at `A = a` for `a = ±1`. Signs and roles are ignored, so free
/// codes are accepted.
pub fn free_bracket(code: &GaussCode, a: i64) -> Result<IntModuleElement, Error> {
    free_bracket_with(code, a, &Evaluator::new())
}

pub fn free_bracket_with(code: &GaussCode, a: i64, eval: &Evaluator) -> Result<IntModuleElement, Error> {
    if a != 1 && a != -1 {
        return Err(Error::BadSpecialization(a));
    }
    check_size(code)?;
    let sk = Skeleton::new(code);
    state_sum(&sk, eval, |m| LaurentPoly::constant(sk.free_weight(m, a))).specialize(a)
}

/// Both free specializations, `(A = 1, A = -1)`, from one pass over the
/// states: the sums over states with an even and an odd number of
/// unoriented crossings are kept apart.
pub fn free_brackets_with(code: &GaussCode, eval: &Evaluator) -> Result<(IntModuleElement, IntModuleElement), Error> {
    check_size(code)?;
    let sk = Skeleton::new(code);
    let total = 1u64 << sk.crossing_count();
    let chunks = total.div_ceil(CHUNK);
    let (even, odd) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let (mut even, mut odd) = (ModuleElement::zero(), ModuleElement::zero());
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let f = eval.evaluate(&sk.web(mask));
                if mask.count_ones() % 2 == 0 {
                    even.add_assign(&f);
                } else {
                    odd.add_assign(&f);
                }
            }
            (even, odd)
        })
        .reduce(
            || (ModuleElement::zero(), ModuleElement::zero()),
            |(mut e1, mut o1), (e2, o2)| {
                e1.add_assign(&e2);
                o1.add_assign(&o2);
                (e1, o1)
            },
        );
    let mut at_plus = even.clone();
    at_plus.add_scaled(&LaurentPoly::constant(-1), &odd);
    let mut at_minus = even;
    at_minus.add_assign(&odd);
    Ok((at_plus.specialize(1)?, at_minus.specialize(-1)?))
}

/// True when the bracket is not a scalar, which certifies the code is not
/// classical.
pub fn classicality_obstruction(code: &GaussCode) -> Result<bool, Error> {
    Ok(!bracket(code)?.is_scalar())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedMinimal,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    KusIrreducible,
    GirthAtLeast5,
    None,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedMinimal => "certified-minimal",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::KusIrreducible => "kus-irreducible",
            Reason::GirthAtLeast5 => "girth-at-least-5",
            Reason::None => "none",
        }
    }
}

/// `kus` holds the canonical forms of the connected components of the
/// all-unoriented state web, `kus_circles` its vertex-free loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityCertificate {
    pub verdict: Verdict,
    pub reason: Reason,
    pub kus: Monomial,
    pub kus_circles: u32,
    pub girth: u32,
}

impl MinimalityCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdict": self.verdict,
            "reason": self.reason,
            "kus": self.kus.factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "kus_circles": self.kus_circles,
            "girth": self.girth,
        })
    }
}

impl fmt::Display for MinimalityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.verdict.as_str(), self.reason.as_str())
    }
}

/// Minimality via irreducibility of the all-unoriented state web, or via
/// diagram girth at least 5. The first applicable reason is reported.
pub fn minimality_certificate(code: &GaussCode) -> Result<MinimalityCertificate, Error> {
    let girth = diagram_girth(code)?;
    let kus = unoriented_state_web(code);
    let irreducible = kus.find_bigons().is_empty() && kus.find_squares().is_empty();
    let (parts, kus_circles) = kus.components();
    let kus_mono = Monomial::from_factors(parts.iter().map(canonical_form_unchecked));
    let (verdict, reason) = if irreducible {
        (Verdict::CertifiedMinimal, Reason::KusIrreducible)
    } else if girth >= 5 {
        (Verdict::CertifiedMinimal, Reason::GirthAtLeast5)
    } else {
        (Verdict::Inconclusive, Reason::None)
    };
    Ok(MinimalityCertificate {
        verdict,
        reason,
        kus: kus_mono,
        kus_circles,
        girth,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketReport {
    pub raw: ModuleElement,
    pub normalized: ModuleElement,
    pub writhe: i32,
    pub free_at_plus1: IntModuleElement,
    pub free_at_minus1: IntModuleElement,
    pub scalar: bool,
    /// Each non-scalar monomial with the vertex counts of its factors.
    pub summands: Vec<(Monomial, Vec<usize>)>,
}

pub fn report(code: &GaussCode) -> Result<BracketReport, Error> {
    let raw = bracket(code)?;
    let writhe = code.writhe()?;
    let normalized = raw.shift(-8 * writhe);
    // oriented weights become 1 and unoriented ones -a at A = a
    let free_at_plus1 = raw.specialize(1)?;
    let free_at_minus1 = raw.specialize(-1)?;
    let summands = normalized
        .monomials()
        .filter(|m| !m.is_scalar())
        .map(|m| (m.clone(), m.factors().iter().map(|f| f.vertex_count()).collect()))
        .collect();
    Ok(BracketReport {
        scalar: normalized.is_scalar(),
        raw,
        normalized,
        writhe,
        free_at_plus1,
        free_at_minus1,
        summands,
    })
}

impl BracketReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "raw": self.raw.to_string(),
            "normalized": self.normalized.to_string(),
            "writhe": self.writhe,
            "free_at_plus1": self.free_at_plus1.to_string(),
            "free_at_minus1": self.free_at_minus1.to_string(),
            "scalar": self.scalar,
            "summands": self.summands.iter().map(|(m, counts)| json!({
                "monomial": m.to_string(),
                "vertex_counts": counts,
            })).collect::<Vec<_>>(),
            "terms": self.normalized.to_json(),
        })
    }
}

impl fmt::Display for BracketReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "raw: {}", self.raw)?;
        writeln!(f, "normalized: {}", self.normalized)?;
        writeln!(f, "writhe: {}", self.writhe)?;
        writeln!(f, "free_at_plus1: {}", self.free_at_plus1)?;
        writeln!(f, "free_at_minus1: {}", self.free_at_minus1)?;
        writeln!(f, "scalar: {}", self.scalar)?;
        write!(f, "summands: {}", self.summands.len())?;
        for (m, counts) in &self.summands {
            let counts: Vec<String> = counts.iter().map(ToString::to_string).collect();
            write!(f, "\n  {m} vertices {}", counts.join("+"))?;
        }
        Ok(())
    }
}

//! Command-line surface and the reproducible move-fuzz harness.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{IntModuleElement, ModuleElement};
use crate::bracket::{free_bracket_with, free_brackets_with, minimality_certificate, normalized_bracket_with, report};
use crate::canon::canonical_form;
use crate::diagram::{
    apply_move, enumerate_local_moves, gaps, unoriented_state_web, GaussCode, Gap, Move, MoveKind, Sign,
};
use crate::error::Error;
use crate::reduce::{normal_form_traced, Evaluator, ReductionStrategy};
use crate::web::Web;

#[derive(Parser, Debug)]
#[command(name = "sl3web", version, about = "sl(3) web bracket for virtual and free knots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full bracket report of a signed Gauss code.
    Eval(Common),
    /// Bracket at A = 1 and A = -1; signs are ignored.
    Free {
        #[command(flatten)]
        common: Common,
        /// Only this specialization point.
        #[arg(long, allow_negative_numbers = true)]
        at: Option<i64>,
    },
    /// Canonical form of the all-unoriented state web.
    Kus {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: bool,
    },
    /// Minimality certificate.
    Minimal(Common),
    /// Normal form of a web given as JSON.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Pick sites at random from this seed instead of deterministically.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Canonical labeling of a connected web given as JSON.
    Canon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dot: bool,
    },
    /// Random move orbit with the invariant rechecked after every move.
    Fuzz {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 30)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check the free brackets and add crossing switches to the move set.
        #[arg(long)]
        free: bool,
        /// Most crossings insertions may add over the starting diagram.
        #[arg(long, default_value_t = 2)]
        max_growth: usize,
        /// Apply the moves of this transcript instead of random ones.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Also write the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// Input file.
    pub path: Option<PathBuf>,
    /// Inline input instead of a file.
    #[arg(short = 'c', long = "code", allow_hyphen_values = true)]
    pub inline: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl Common {
    fn text(&self) -> Result<String, Error> {
        match (&self.inline, &self.path) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(p)) => Ok(fs::read_to_string(p)?.trim().to_string()),
            (None, None) => Err(Error::Parse("no input: give a file or -c".into())),
        }
    }

    fn code(&self) -> Result<GaussCode, Error> {
        self.text()?.parse()
    }

    fn web(&self) -> Result<Web, Error> {
        Web::from_json(&self.text()?)
    }
}

fn render(format: Format, text: String, value: serde_json::Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value).expect("json value serializes"),
    }
}

/// Runs a parsed command and returns its standard output.
pub fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Eval(c) => {
            let r = report(&c.code()?)?;
            Ok(render(c.format, r.to_string(), r.to_json()))
        }
        Command::Free { common, at } => {
            let code = common.code()?;
            let points = match at {
                Some(a) => vec![*a],
                None => vec![1, -1],
            };
            let eval = Evaluator::new();
            let mut text = Vec::new();
            let mut obj = serde_json::Map::new();
            for a in points {
                let v = free_bracket_with(&code, a, &eval)?;
                text.push(format!("A={a}: {v}"));
                obj.insert(format!("A={a}"), json!(v.to_string()));
            }
            Ok(render(common.format, text.join("\n"), obj.into()))
        }
        Command::Kus { common, dot } => {
            let web = unoriented_state_web(&common.code()?);
            if *dot {
                return Ok(web.to_dot());
            }
            let (parts, circles) = web.components();
            let keys: Vec<String> = parts.iter().map(|p| canonical_form(p).map(|k| k.to_string())).collect::<Result<_, _>>()?;
            let mut text = keys.join(" * ");
            if circles > 0 {
                if !text.is_empty() {
                    text.push_str(" * ");
                }
                write!(text, "circles:{circles}").unwrap();
            }
            Ok(render(common.format, text, json!({ "kus": keys, "circles": circles })))
        }
        Command::Minimal(c) => {
            let cert = minimality_certificate(&c.code()?)?;
            Ok(render(c.format, cert.to_string(), cert.to_json()))
        }
        Command::Reduce { common, seed, trace, dot } => {
            let web = common.web()?;
            if *dot {
                return Ok(web.to_dot());
            }
            let strategy = seed.map_or(ReductionStrategy::Deterministic, ReductionStrategy::Seeded);
            let mut events = Vec::new();
            let nf = normal_form_traced(&web, strategy, |e| events.push(e.to_string()));
            let mut text = String::new();
            if *trace {
                for e in &events {
                    writeln!(text, "{e}").unwrap();
                }
            }
            text.push_str(&nf.to_string());
            let value = json!({ "result": nf.to_string(), "terms": nf.to_json(), "trace": events });
            Ok(render(common.format, text, value))
        }
        Command::Canon { common, dot } => {
            let key = canonical_form(&common.web()?)?;
            if *dot {
                return Ok(key.to_web().to_dot());
            }
            let value = json!({ "key": key.key(), "part_size": key.part_size(), "edges": key.edges() });
            Ok(render(common.format, key.to_string(), value))
        }
        Command::Fuzz {
            common,
            moves,
            seed,
            free,
            max_growth,
            replay,
            transcript,
        } => {
            let code = common.code()?;
            let check = if *free || code.is_free() { Check::Free } else { Check::Normalized };
            let outcome = match replay {
                Some(p) => replay_orbit(&code, &parse_transcript(&fs::read_to_string(p)?)?, check)?,
                None => fuzz_orbit(&code, &FuzzConfig { moves: *moves, seed: *seed, check, max_growth: *max_growth })?,
            };
            let lines = outcome.transcript_text(&code, *seed, check);
            if let Some(p) = transcript {
                fs::write(p, &lines)?;
            }
            match &outcome.failure {
                None => {
                    let origin = if replay.is_some() { "replayed".to_string() } else { format!("seed {seed}") };
                    let text = format!("pass: {} moves, {origin}\ninvariant: {}", outcome.applied.len(), outcome.invariant);
                    let value = json!({
                        "pass": true,
                        "moves": outcome.applied.len(),
                        "seed": seed,
                        "invariant": outcome.invariant.to_string(),
                        "transcript": outcome.applied.iter().map(|m| serde_json::to_value(m).unwrap()).collect::<Vec<_>>(),
                    });
                    Ok(render(common.format, text, value))
                }
                Some(f) => Err(Error::InvarianceMismatch(format!(
                    "after move {} expected {} got {}\n{}",
                    f.step, outcome.invariant, f.got, lines
                ))),
            }
        }
    }
}

/// Which invariant the fuzz harness tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    /// `A^{-8 wr}` times the bracket; signed codes only.
    Normalized,
    /// Bracket at `A = 1` and `A = -1`; crossing switches join the move set.
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Invariant {
    Normalized(ModuleElement),
    Free(IntModuleElement, IntModuleElement),
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Invariant::Normalized(v) => write!(f, "{v}"),
            Invariant::Free(p, m) => write!(f, "A=1: {p}; A=-1: {m}"),
        }
    }
}

pub fn invariant(code: &GaussCode, check: Check, eval: &Evaluator) -> Result<Invariant, Error> {
    Ok(match check {
        Check::Normalized => Invariant::Normalized(normalized_bracket_with(code, eval)?),
        Check::Free => {
            let (p, m) = free_brackets_with(code, eval)?;
            Invariant::Free(p, m)
        }
    })
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub moves: usize,
    pub seed: u64,
    pub check: Check,
    pub max_growth: usize,
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub step: usize,
    pub code: GaussCode,
    pub got: Invariant,
}

#[derive(Clone, Debug)]
pub struct FuzzOutcome {
    pub invariant: Invariant,
    pub applied: Vec<Move>,
    pub failure: Option<Failure>,
}

impl FuzzOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Header comment followed by one JSON move per line.
    pub fn transcript_text(&self, start: &GaussCode, seed: u64, check: Check) -> String {
        let mut out = format!("# start \"{start}\" seed {seed} check {check:?}\n");
        for m in &self.applied {
            writeln!(out, "{m}").unwrap();
        }
        out
    }
}

/// Reads a transcript: `#` lines are comments, every other non-blank line
/// is one move in JSON.
pub fn parse_transcript(text: &str) -> Result<Vec<Move>, Error> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Picks a move kind uniformly among those available, then a move of that
/// kind uniformly. Insertions are drawn directly rather than enumerated.
pub fn random_move(code: &GaussCode, rng: &mut ChaCha8Rng, room: usize, switches: bool) -> Option<Move> {
    let local: Vec<Move> = enumerate_local_moves(code)
        .into_iter()
        .filter(|m| switches || m.kind() != MoveKind::Switch)
        .collect();
    let mut kinds: Vec<MoveKind> = local.iter().map(Move::kind).collect();
    kinds.sort();
    kinds.dedup();
    if room >= 1 {
        kinds.push(MoveKind::R1Insert);
    }
    if room >= 2 {
        kinds.push(MoveKind::R2Insert);
    }
    let kind = *kinds.choose(rng)?;
    let all_gaps = gaps(code);
    let gap = |rng: &mut ChaCha8Rng| -> Gap { *all_gaps.choose(rng).expect("every code has a gap") };
    Some(match kind {
        MoveKind::R1Insert => Move::R1Insert {
            at: gap(rng),
            over_first: code.is_free() || rng.gen(),
            sign: if code.is_free() { Sign::Pos } else { random_sign(rng) },
        },
        MoveKind::R2Insert => {
            let (over, under) = (gap(rng), gap(rng));
            Move::R2Insert {
                over,
                under,
                under_reversed: rng.gen(),
                sign: if code.is_free() { Sign::Pos } else { random_sign(rng) },
                over_block_first: over != under || rng.gen(),
            }
        }
        k => {
            let of_kind: Vec<&Move> = local.iter().filter(|m| m.kind() == k).collect();
            (*of_kind.choose(rng).expect("kind was listed")).clone()
        }
    })
}

/// Applies `config.moves` random moves, rechecking the invariant after each
/// and stopping at the first mismatch.
pub fn fuzz_orbit(code: &GaussCode, config: &FuzzConfig) -> Result<FuzzOutcome, Error> {
    fuzz_orbit_with(code, config, &Evaluator::new())
}

/// As [`fuzz_orbit`], sharing `eval`'s memo table across orbits.
pub fn fuzz_orbit_with(code: &GaussCode, config: &FuzzConfig, eval: &Evaluator) -> Result<FuzzOutcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let start = invariant(code, config.check, eval)?;
    let limit = code.crossing_count() + config.max_growth;
    let switches = config.check == Check::Free;
    let mut current = code.clone();
    let mut applied = Vec::new();
    for step in 0..config.moves {
        let room = limit.saturating_sub(current.crossing_count());
        let Some(m) = random_move(&current, &mut rng, room, switches) else {
            break;
        };
        current = apply_move(&current, &m)?;
        applied.push(m);
        let got = invariant(&current, config.check, eval)?;
        if got != start {
            return Ok(FuzzOutcome {
                invariant: start,
                applied,
                failure: Some(Failure { step, code: current, got }),
            });
        }
    }
    Ok(FuzzOutcome {
        invariant: start,
        applied,
        failure: None,
    })
}

/// Replays a transcript with the same checks as [`fuzz_orbit`].
pub fn replay_orbit(code: &GaussCode, moves: &[Move], check: Check) -> Result<FuzzOutcome, Error> {
    let eval = Evaluator::new();
    let start = invariant(code, check, &eval)?;
    let mut current = code.clone();
    let mut applied = Vec::new();
    for (step, m) in moves.iter().enumerate() {
        current = apply_move(&current, m)?;
        applied.push(m.clone());
        let got = invariant(&current, check, &eval)?;
        if got != start {
            return Ok(FuzzOutcome {
                invariant: start,
                applied,
                failure: Some(Failure { step, code: current, got }),
            });
        }
    }
    Ok(FuzzOutcome {
        invariant: start,
        applied,
        failure: None,
    })
}

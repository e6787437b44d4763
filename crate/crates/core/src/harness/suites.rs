//! Sampled invariant checks for every module, with replayable failures.
//!
//! Each check kind draws its samples from dedicated RNG streams, so check `i`
//! of a kind is the same regardless of thread scheduling. A failing sample is
//! recorded as a [`Counterexample`] holding the full ordinals and config.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{Report, SuiteReport};
use super::{stream_rng, ExperimentConfig, HarnessError, OrdinalSampler};
use crate::coloring::{ColoringParams, Colorer, Painter, ThetaMode};
use crate::cseq::{CSeq, CSeqKind};
use crate::ordinal::Ordinal;
use crate::walks::{walk, WalkResult};

/// Counterexamples kept per check kind; further violations are only counted.
const MAX_COUNTEREXAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ordinal,
    Cseq,
    Walks,
    Coloring,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 4] = [Suite::Ordinal, Suite::Cseq, Suite::Walks, Suite::Coloring];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ordinal => "ordinal",
            Suite::Cseq => "cseq",
            Suite::Walks => "walks",
            Suite::Coloring => "coloring",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::MODULES
            .into_iter()
            .chain([Suite::All])
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?} (expected ordinal, cseq, walks, coloring or all)"))
    }
}

/// One sampled instance of an invariant. Serialized into counterexamples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Check {
    OrderLaws { x: Ordinal, y: Ordinal, z: Ordinal },
    AdditionLaws { x: Ordinal, y: Ordinal, z: Ordinal },
    SplitLast { x: Ordinal },
    FundamentalSequence { x: Ordinal, n: u64 },
    TextRoundTrip { x: Ordinal },
    SuccessorRule { alpha: Ordinal },
    Cofinality { alpha: Ordinal, beta: Ordinal },
    Closedness { alpha: Ordinal, xi: Ordinal },
    /// `(ᾱ, lo, hi)`: an accumulation point of `C_α` and a window below it.
    Coherence { alpha: Ordinal, probes: Vec<(Ordinal, Ordinal, Ordinal)> },
    Isolation { alpha: Ordinal, lo: Ordinal },
    WalkShape { alpha: Ordinal, beta: Ordinal },
    Concatenation { alpha: Ordinal, gamma: Ordinal, beta: Ordinal },
    Lambda2Bound { gamma: Ordinal, beta: Ordinal },
    Lambda2Dichotomy { alpha: Ordinal, gamma: Ordinal, beta: Ordinal },
    ImageIdentity { painter: Painter, alpha: Ordinal, gamma: Ordinal, beta: Ordinal },
    DClosedness { painter: Painter, beta: Ordinal, i: u64, s: Ordinal, alphas: Vec<Ordinal> },
    SmallModeColor { painter: Painter, alpha: Ordinal, beta: Ordinal },
    LargeModeColor { painter: Painter, alpha: Ordinal, beta: Ordinal },
    LabelRange { painter: Painter, alpha: Ordinal },
}

/// A failed check together with everything needed to re-run it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: Suite,
    pub name: String,
    pub message: String,
    pub config: ExperimentConfig,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayOutcome {
    Reproduced(String),
    NotReproduced,
}

/// Observations a passing check reports, e.g. which dichotomy branch fired.
type Notes = Vec<(&'static str, u64)>;

/// The C-sequence and prebuilt colorers checks run against.
pub struct CheckContext<'a> {
    pub config: &'a ExperimentConfig,
    pub seq: &'a dyn CSeq,
    has_acc: bool,
    colorers: Vec<Colorer<'a>>,
}

impl<'a> CheckContext<'a> {
    /// Colorers for `painters` in both modes are built up front so their
    /// caches are shared across checks; any other painter is built on demand.
    pub fn new(config: &'a ExperimentConfig, seq: &'a dyn CSeq, painters: &[Painter]) -> Result<Self, HarnessError> {
        let mut colorers = Vec::new();
        for p in painters {
            for mode in [ThetaMode::Small, ThetaMode::Large] {
                colorers.push(Colorer::new(seq, p.clone(), params(config, mode)?)?);
            }
        }
        Ok(CheckContext {
            config,
            seq,
            has_acc: seq.name().parse::<CSeqKind>().map_or(true, |k| k.has_accumulation_points()),
            colorers,
        })
    }

    fn with_colorer<T>(
        &self,
        painter: &Painter,
        mode: ThetaMode,
        f: impl FnOnce(&Colorer<'_>) -> Result<T, String>,
    ) -> Result<T, String> {
        if let Some(c) = self
            .colorers
            .iter()
            .find(|c| c.painter() == painter && c.params().theta_mode == mode)
        {
            return f(c);
        }
        let params = params(self.config, mode).map_err(|e| e.to_string())?;
        let c = Colorer::new(self.seq, painter.clone(), params).map_err(|e| e.to_string())?;
        f(&c)
    }

    fn walk(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<WalkResult, String> {
        walk(self.seq, alpha, beta).map_err(|e| e.to_string())
    }
}

fn params(config: &ExperimentConfig, mode: ThetaMode) -> Result<ColoringParams, HarnessError> {
    Ok(ColoringParams::new(config.mu, mode, config.chi)?)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

impl Check {
    /// `Ok` with observations if the invariant holds, `Err` with a
    /// description otherwise.
    pub fn run(&self, ctx: &CheckContext<'_>) -> Result<Notes, String> {
        let seq = ctx.seq;
        let e2s = |e: &dyn std::error::Error| e.to_string();
        match self {
            Check::OrderLaws { x, y, z } => {
                let all = [x, y, z];
                for a in all {
                    for b in all {
                        let fast = a.compare(b);
                        let slow = reference_cmp(a, b);
                        ensure!(fast == slow, "compare({a}, {b}) = {fast:?} but term-wise comparison gives {slow:?}");
                        ensure!(fast == b.compare(a).reverse(), "compare is not antisymmetric on {a}, {b}");
                        for c in all {
                            if a <= b && b <= c {
                                ensure!(a <= c, "{a} <= {b} <= {c} but not {a} <= {c}");
                            }
                        }
                        // a < b exactly when a + t = b for some t > 0
                        match b.left_difference(a) {
                            Some(t) => ensure!(&(a + &t) == b && (t.is_zero() == (a == b)), "{a} + ({t}) != {b}"),
                            None => ensure!(a > b, "no t with {a} + t = {b} although {a} <= {b}"),
                        }
                    }
                }
                Ok(vec![])
            }
            Check::AdditionLaws { x, y, z } => {
                ensure!(&(x + y) + z == x + &(y + z), "({x} + {y}) + {z} != {x} + ({y} + {z})");
                let zero = Ordinal::zero();
                ensure!(&(x + &zero) == x && &(&zero + x) == x, "0 is not an identity for {x}");
                ensure!(x <= &(x + y) && y <= &(x + y), "{x} + {y} is below a summand");
                for (a, b) in [(y, z), (z, y), (x, y), (y, x)] {
                    if a < b {
                        ensure!(x + a < x + b, "{x} + {a} !< {x} + {b}");
                    }
                    if a <= b {
                        ensure!(a + z <= b + z, "{a} + {z} !<= {b} + {z}");
                    }
                }
                Ok(vec![])
            }
            Check::SplitLast { x } => match x.split_last() {
                Ok((head, e)) => {
                    ensure!(x.is_limit(), "split_last accepted non-limit {x}");
                    ensure!(!e.is_zero(), "split_last({x}) returned exponent 0");
                    ensure!(&(&head + &Ordinal::omega_pow(e.clone())) == x, "{head} + w^({e}) != {x}");
                    if let Some(last) = head.terms().last() {
                        ensure!(*last.exponent() >= e, "head {head} of {x} ends below w^({e})");
                    }
                    Ok(vec![])
                }
                Err(_) => {
                    ensure!(!x.is_limit(), "split_last rejected limit {x}");
                    Ok(vec![])
                }
            },
            Check::FundamentalSequence { x, n } => {
                let n = BigUint::from(*n);
                let a = x.fundamental(&n).map_err(|e| e2s(&e))?;
                let b = x.fundamental(&(&n + 1u32)).map_err(|e| e2s(&e))?;
                ensure!(a < b && b < *x, "{x}[{n}] = {a}, {x}[{n}+1] = {b} not increasing below {x}");
                let idx = x.fundamental_index(&a).map_err(|e| e2s(&e))?;
                ensure!(idx <= n, "least index reaching {a} below {x} is {idx} > {n}");
                let at = x.fundamental(&idx).map_err(|e| e2s(&e))?;
                ensure!(at >= a, "{x}[{idx}] = {at} < {a}");
                if idx > BigUint::ZERO {
                    let before = x.fundamental(&(&idx - 1u32)).map_err(|e| e2s(&e))?;
                    ensure!(before < a, "index {idx} for {a} below {x} is not least");
                }
                let succ = a.successor();
                if succ < *x {
                    let j = x.fundamental_index(&succ).map_err(|e| e2s(&e))?;
                    ensure!(j > idx, "index of {succ} does not exceed index of {a} below {x}");
                }
                Ok(vec![])
            }
            Check::TextRoundTrip { x } => {
                let text = x.to_string();
                let back: Ordinal = text.parse().map_err(|e| format!("{text:?} does not parse: {e}"))?;
                ensure!(back == *x, "{text:?} parses to {back}, not the original");
                Ok(vec![])
            }
            Check::SuccessorRule { alpha } => {
                let s = alpha.successor();
                let zero = Ordinal::zero();
                let min = seq.min_element(&s).map_err(|e| e2s(&e))?;
                ensure!(min.is_zero(), "min(C_{s}) = {min}, expected 0");
                let listed = seq.enumerate_between(&s, &zero, &s, 3).elements;
                let mut expected = vec![zero.clone(), alpha.clone()];
                expected.dedup();
                ensure!(listed == expected, "C_{s} lists as {listed:?}, expected {{0, {alpha}}}");
                ensure!(seq.contains(&s, alpha) && seq.contains(&s, &zero), "C_{s} misses 0 or {alpha}");
                ensure!(seq.sup_below(&s, alpha).is_zero(), "sup(C_{s} ∩ {alpha}) should be 0");
                if *alpha > Ordinal::one() {
                    let next = seq.next_at_or_above(&s, &Ordinal::one()).map_err(|e| e2s(&e))?;
                    ensure!(next == *alpha, "min(C_{s} ∖ 1) = {next}, expected {alpha}");
                    ensure!(!seq.contains(&s, &Ordinal::one()), "C_{s} contains 1");
                }
                Ok(vec![])
            }
            Check::Cofinality { alpha, beta } => {
                let x = seq.next_at_or_above(alpha, beta).map_err(|e| e2s(&e))?;
                ensure!(beta <= &x && &x < alpha, "min(C_{alpha} ∖ {beta}) = {x} is outside [{beta}, {alpha})");
                ensure!(seq.contains(alpha, &x), "min(C_{alpha} ∖ {beta}) = {x} is not a member");
                let skipped = seq.enumerate_between(alpha, beta, &x, 1);
                ensure!(skipped.elements.is_empty(), "C_{alpha} has {:?} in [{beta}, {x})", skipped.elements);
                Ok(vec![])
            }
            Check::Closedness { alpha, xi } => {
                let member = seq.contains(alpha, xi);
                let sup = seq.sup_below(alpha, xi);
                ensure!(sup != *xi || member, "closedness: {xi} = sup(C_{alpha} ∩ {xi}) but {xi} is not in C_{alpha}");
                // Independent evidence: C_α meets [ξ[k], ξ) for a spread of k.
                let cofinal = (0..12u32).all(|j| match xi.fundamental(&BigUint::from(1u64 << j)) {
                    Ok(lo) => !seq.enumerate_between(alpha, &lo, xi, 1).elements.is_empty(),
                    Err(_) => false,
                });
                ensure!(!cofinal || member, "closedness: C_{alpha} is cofinal in {xi} but {xi} is not in C_{alpha}");
                Ok(vec![("limit-points", u64::from(member && sup == *xi))])
            }
            Check::Coherence { alpha, probes } => {
                for (acc, lo, hi) in probes {
                    ensure!(seq.is_acc(alpha, acc), "{acc} is not an accumulation point of C_{alpha}");
                    let below = seq.enumerate_between(acc, lo, hi, 16);
                    let cut = seq.enumerate_between(alpha, lo, hi, 16);
                    ensure!(
                        below == cut,
                        "coherence: C_{acc} ∩ [{lo}, {hi}) = {:?} but C_{alpha} ∩ [{lo}, {hi}) = {:?}",
                        below.elements,
                        cut.elements
                    );
                    let (m1, m2) = (seq.min_element(acc).map_err(|e| e2s(&e))?, seq.min_element(alpha).map_err(|e| e2s(&e))?);
                    ensure!(m1 == m2, "coherence: min(C_{acc}) = {m1} but min(C_{alpha}) = {m2}");
                }
                Ok(vec![("accumulation-points", probes.len() as u64)])
            }
            Check::Isolation { alpha, lo } => {
                let listed = seq.enumerate_between(alpha, lo, alpha, 10).elements;
                for x in &listed {
                    ensure!(!seq.is_acc(alpha, x), "{x} is an accumulation point of C_{alpha}");
                }
                Ok(vec![("elements", listed.len() as u64)])
            }
            Check::WalkShape { alpha, beta } => {
                let w = ctx.walk(alpha, beta)?;
                ensure!(w.trace.first() == Some(beta), "trace of ({alpha}, {beta}) starts at {:?}", w.trace.first());
                ensure!(w.trace.windows(2).all(|p| p[0] > p[1]), "trace of ({alpha}, {beta}) is not decreasing");
                ensure!(w.trace.iter().all(|x| x > alpha), "trace of ({alpha}, {beta}) reaches {alpha}");
                ensure!(w.rho2 == w.trace.len(), "rho2 disagrees with trace length");
                let last = seq.next_at_or_above(w.last(), alpha).map_err(|e| e2s(&e))?;
                ensure!(last == *alpha, "walk ({alpha}, {beta}) stops at {} whose next step is {last}", w.last());
                ensure!(w.lambda <= *alpha, "lambda({alpha}, {beta}) = {} exceeds alpha", w.lambda);
                ensure!(w.lambda >= w.lambda2, "lambda {} < lambda2 {}", w.lambda, w.lambda2);
                Ok(vec![])
            }
            Check::Concatenation { alpha, gamma, beta } => {
                let upper = ctx.walk(gamma, beta)?;
                if !(upper.lambda < *alpha && alpha < gamma) {
                    return Ok(vec![("precondition-unmet", 1)]);
                }
                let whole = ctx.walk(alpha, beta)?;
                let lower = ctx.walk(alpha, gamma)?;
                let joined: Vec<Ordinal> = upper.trace.iter().chain(&lower.trace).cloned().collect();
                ensure!(
                    whole.trace == joined,
                    "tr({alpha}, {beta}) = {:?} but tr({gamma}, {beta}) ⌢ tr({alpha}, {gamma}) = {joined:?}",
                    whole.trace
                );
                Ok(vec![])
            }
            Check::Lambda2Bound { gamma, beta } => {
                let w = ctx.walk(gamma, beta)?;
                ensure!(
                    w.lambda2 < *gamma || gamma.is_zero(),
                    "lambda2({gamma}, {beta}) = {} is not below {gamma}",
                    w.lambda2
                );
                ensure!(w.lambda >= w.lambda2, "lambda {} < lambda2 {}", w.lambda, w.lambda2);
                Ok(vec![])
            }
            Check::Lambda2Dichotomy { alpha, gamma, beta } => {
                let upper = ctx.walk(gamma, beta)?;
                if !(upper.lambda2 < *alpha && alpha < gamma) {
                    return Ok(vec![("precondition-unmet", 1)]);
                }
                let whole = ctx.walk(alpha, beta)?;
                ensure!(
                    whole.trace.starts_with(&upper.trace),
                    "tr({alpha}, {beta}) = {:?} does not extend tr({gamma}, {beta}) = {:?}",
                    whole.trace,
                    upper.trace
                );
                if whole.trace.contains(gamma) {
                    return Ok(vec![("branch-through-gamma", 1)]);
                }
                let delta = upper.last();
                ensure!(
                    seq.is_acc(delta, gamma),
                    "{gamma} is neither on tr({alpha}, {beta}) nor an accumulation point of C_{delta}"
                );
                Ok(vec![("branch-accumulation", 1)])
            }
            Check::ImageIdentity { painter, alpha, gamma, beta } => {
                let upper = ctx.walk(gamma, beta)?;
                if !(upper.lambda2 < *alpha && alpha < gamma) {
                    return Ok(vec![("precondition-unmet", 1)]);
                }
                if !ctx.has_acc && !ctx.walk(alpha, beta)?.trace.contains(gamma) {
                    return Ok(vec![("skipped-no-accumulation", 1)]);
                }
                ctx.with_colorer(painter, ThetaMode::Small, |col| {
                    let e = |e: crate::coloring::ColoringError| e.to_string();
                    let whole: std::collections::BTreeSet<u64> = col.tr_h(alpha, beta).map_err(e)?.into_iter().collect();
                    let mut parts: std::collections::BTreeSet<u64> = col.tr_h(alpha, gamma).map_err(e)?.into_iter().collect();
                    parts.extend(col.tr_h(gamma, beta).map_err(e)?);
                    ensure!(
                        whole == parts,
                        "im tr_h({alpha}, {beta}) = {whole:?} but the union over {gamma} is {parts:?}"
                    );
                    let d = col.d(alpha, beta).map_err(e)?;
                    let split = col.d(alpha, gamma).map_err(e)?.max(col.d(gamma, beta).map_err(e)?);
                    ensure!(d == split, "d({alpha}, {beta}) = {d} but max over {gamma} is {split}");
                    Ok(vec![])
                })
            }
            Check::DClosedness { painter, beta, i, s, alphas } => ctx.with_colorer(painter, ThetaMode::Small, |col| {
                let e = |e: crate::coloring::ColoringError| e.to_string();
                let bound = crate::coloring::Color::from(*i);
                let mut kept = 0;
                for a in alphas {
                    ensure!(a < s, "sequence element {a} is not below its sup {s}");
                    if col.d(a, beta).map_err(e)? <= bound {
                        kept += 1;
                    }
                }
                if kept == 0 {
                    return Ok(vec![("empty-sequences", 1)]);
                }
                let at_sup = col.d(s, beta).map_err(e)?;
                ensure!(
                    at_sup <= bound,
                    "d({s}, {beta}) = {at_sup} > {i} though {kept} sequence elements below {s} have d <= {i}"
                );
                Ok(vec![("nonempty-sequences", 1)])
            }),
            Check::SmallModeColor { painter, alpha, beta } => ctx.with_colorer(painter, ThetaMode::Small, |col| {
                let e = |e: crate::coloring::ColoringError| e.to_string();
                let (c, d) = (col.c(alpha, beta).map_err(e)?, col.d(alpha, beta).map_err(e)?);
                ensure!(c == d, "small mode c({alpha}, {beta}) = {c} but d = {d}");
                Ok(vec![])
            }),
            Check::LargeModeColor { painter, alpha, beta } => ctx.with_colorer(painter, ThetaMode::Large, |col| {
                let e = |e: crate::coloring::ColoringError| e.to_string();
                let c = col.c(alpha, beta).map_err(e)?;
                let w = ctx.walk(alpha, beta)?;
                ensure!(w.trace.contains(&c.0), "large mode c({alpha}, {beta}) = {c} is not on the trace");
                ensure!(c.0 > *alpha, "large mode c({alpha}, {beta}) = {c} is not above {alpha}");
                let d = col.d(alpha, beta).map_err(e)?;
                let label = col.h(&c.0).map_err(e)?;
                ensure!(crate::coloring::Color::from(label) == d, "h(c) = {label} but d = {d}");
                Ok(vec![])
            }),
            Check::LabelRange { painter, alpha } => ctx.with_colorer(painter, ThetaMode::Small, |col| {
                let label = col.h(alpha).map_err(|e| e.to_string())?;
                ensure!(label < ctx.config.mu, "h({alpha}) = {label} is not below mu = {}", ctx.config.mu);
                Ok(vec![])
            }),
        }
    }
}

/// Term-by-term comparison written independently of the derived order.
fn reference_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    let (ta, tb) = (a.terms(), b.terms());
    for k in 0..ta.len().min(tb.len()) {
        let by_exponent = reference_cmp(ta[k].exponent(), tb[k].exponent());
        if by_exponent != Ordering::Equal {
            return by_exponent;
        }
        let by_coefficient = ta[k].coefficient().cmp(tb[k].coefficient());
        if by_coefficient != Ordering::Equal {
            return by_coefficient;
        }
    }
    ta.len().cmp(&tb.len())
}

/// Sampling helpers shared by the suites.
struct Draw<'c, 'a> {
    ctx: &'c CheckContext<'a>,
    s: OrdinalSampler,
}

impl Draw<'_, '_> {
    fn bound(&self) -> &Ordinal {
        &self.ctx.config.bound
    }

    /// A pair `α < β ≤ B`.
    fn pair(&self, rng: &mut ChaCha8Rng) -> Option<(Ordinal, Ordinal)> {
        for _ in 0..64 {
            let beta = self.s.at_most(rng, self.bound());
            if beta.is_zero() {
                continue;
            }
            return Some((self.s.below(rng, &beta), beta));
        }
        None
    }

    /// `γ < β ≤ B` with γ > 0, often a limit so accumulation branches occur.
    fn gamma_beta(&self, rng: &mut ChaCha8Rng) -> Option<(Ordinal, Ordinal)> {
        for _ in 0..64 {
            let beta = self.s.at_most(rng, self.bound());
            let gamma = if rng.random_bool(0.5) {
                self.s.limit_below(rng, &beta)
            } else {
                self.s.between(rng, &Ordinal::zero(), &beta)
            };
            if let Some(gamma) = gamma {
                return Some((gamma, beta));
            }
        }
        None
    }

    /// `lower(γ, β) < α < γ < β`, where `lower` picks λ or λ₂.
    fn triple(
        &self,
        rng: &mut ChaCha8Rng,
        lower: impl Fn(&WalkResult) -> &Ordinal,
    ) -> Option<(Ordinal, Ordinal, Ordinal)> {
        for _ in 0..200 {
            let (gamma, beta) = self.gamma_beta(rng)?;
            let Ok(w) = self.ctx.walk(&gamma, &beta) else {
                continue;
            };
            if let Some(alpha) = self.s.between(rng, lower(&w), &gamma) {
                return Some((alpha, gamma, beta));
            }
        }
        None
    }

    /// A limit below α: half the time `γ + ω^e` for `α = γ + ω^b`, `0 < e < b`.
    fn limit_inside(&self, rng: &mut ChaCha8Rng, alpha: &Ordinal) -> Option<Ordinal> {
        if rng.random_bool(0.5) {
            if let Ok((head, b)) = alpha.split_last() {
                if let Some(e) = self.s.between(rng, &Ordinal::zero(), &b) {
                    return Some(&head + &Ordinal::omega_pow(e));
                }
            }
        }
        self.s.limit_below(rng, alpha)
    }
}

type Sampler<'f> = dyn Fn(&mut ChaCha8Rng, &Draw<'_, '_>) -> Option<Check> + Sync + 'f;

struct Plan<'f> {
    name: String,
    count: usize,
    sample: Box<Sampler<'f>>,
}

impl<'f> Plan<'f> {
    fn new(
        name: impl Into<String>,
        count: usize,
        sample: impl Fn(&mut ChaCha8Rng, &Draw<'_, '_>) -> Option<Check> + Sync + 'f,
    ) -> Self {
        Plan {
            name: name.into(),
            count,
            sample: Box::new(sample),
        }
    }
}

/// Stable per-name stream block so adding a check never reshuffles others.
fn stream_base(name: &str) -> u64 {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    // keep clear of the trial streams 0..2^32
    (h | 1 << 63) & !0xffff_ffff
}

fn execute(ctx: &CheckContext<'_>, suite: Suite, plans: Vec<Plan<'_>>, out: &mut SuiteReport) {
    let draw = Draw {
        ctx,
        s: OrdinalSampler::default(),
    };
    for plan in plans {
        let base = stream_base(&plan.name);
        let results: Vec<Option<(Check, Result<Notes, String>)>> = (0..plan.count as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(ctx.config.seed, base + i);
                (plan.sample)(&mut rng, &draw).map(|check| {
                    let outcome = check.run(ctx);
                    (check, outcome)
                })
            })
            .collect();
        let tally = out.checks.entry(plan.name.clone()).or_insert([0, 0]);
        let mut kept = 0;
        for r in results {
            let Some((check, outcome)) = r else {
                *out.observations.entry(format!("{}: no sample drawn", plan.name)).or_default() += 1;
                continue;
            };
            tally[0] += 1;
            match outcome {
                Ok(notes) => {
                    for (key, n) in notes {
                        if n > 0 {
                            *out.observations.entry(format!("{}: {key}", plan.name)).or_default() += n;
                        }
                    }
                }
                Err(message) => {
                    tally[1] += 1;
                    if kept < MAX_COUNTEREXAMPLES {
                        kept += 1;
                        out.counterexamples.push(Counterexample {
                            suite,
                            name: plan.name.clone(),
                            message,
                            config: ctx.config.clone(),
                            check,
                        });
                    }
                }
            }
        }
    }
}

fn ordinal_plans<'f>(n: usize) -> Vec<Plan<'f>> {
    // half the samples use a bound with infinite exponents
    let wide: Ordinal = "w^(w^2+1)".parse().expect("valid literal");
    let pick = move |rng: &mut ChaCha8Rng, d: &Draw<'_, '_>| -> Ordinal {
        if rng.random_bool(0.5) {
            wide.clone()
        } else {
            d.bound().clone()
        }
    };
    let pick = std::sync::Arc::new(pick);
    let (p1, p2, p3, p4, p5) = (pick.clone(), pick.clone(), pick.clone(), pick.clone(), pick);
    vec![
        Plan::new("order-laws", n, move |rng, d| {
            let b = p1(rng, d);
            Some(Check::OrderLaws {
                x: d.s.below(rng, &b),
                y: d.s.below(rng, &b),
                z: d.s.below(rng, &b),
            })
        }),
        Plan::new("addition-laws", n, move |rng, d| {
            let b = p2(rng, d);
            Some(Check::AdditionLaws {
                x: d.s.below(rng, &b),
                y: d.s.below(rng, &b),
                z: d.s.below(rng, &b),
            })
        }),
        Plan::new("split-last", n, move |rng, d| {
            let b = p3(rng, d);
            Some(Check::SplitLast { x: d.s.below(rng, &b) })
        }),
        Plan::new("fundamental-sequence", n, move |rng, d| {
            let b = p4(rng, d);
            Some(Check::FundamentalSequence {
                x: d.s.limit_below(rng, &b)?,
                n: rng.random_range(0..50),
            })
        }),
        Plan::new("text-round-trip", n, move |rng, d| {
            let b = p5(rng, d);
            Some(Check::TextRoundTrip { x: d.s.below(rng, &b) })
        }),
    ]
}

fn cseq_plans<'f>(n: usize, has_acc: bool) -> Vec<Plan<'f>> {
    let mut plans = vec![
        Plan::new("successor-rule", n, |rng, d| {
            Some(Check::SuccessorRule {
                alpha: d.s.below(rng, d.bound()),
            })
        }),
        Plan::new("cofinality", n, |rng, d| {
            let alpha = d.s.limit_at_most(rng, d.bound())?;
            Some(Check::Cofinality {
                beta: d.s.below(rng, &alpha),
                alpha,
            })
        }),
        Plan::new("closedness", n, |rng, d| {
            let alpha = d.s.limit_at_most(rng, d.bound())?;
            Some(Check::Closedness {
                xi: d.limit_inside(rng, &alpha)?,
                alpha,
            })
        }),
    ];
    let m = (n / 10).max(1);
    if has_acc {
        plans.push(Plan::new("coherence", m, |rng, d| {
            let alpha = d.s.limit_at_most(rng, d.bound())?;
            let mut accs: Vec<Ordinal> = (0..8)
                .filter_map(|_| d.limit_inside(rng, &alpha))
                .filter(|x| d.ctx.seq.is_acc(&alpha, x))
                .collect();
            accs.sort();
            accs.dedup();
            let probes = accs
                .into_iter()
                .flat_map(|acc| {
                    (0..3)
                        .map(|_| {
                            let lo = if rng.random_bool(0.25) { Ordinal::zero() } else { d.s.below(rng, &acc) };
                            let hi = d.s.between(rng, &lo, &acc).unwrap_or_else(|| acc.clone());
                            (acc.clone(), lo, hi)
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            Some(Check::Coherence { alpha, probes })
        }));
    } else {
        plans.push(Plan::new("isolation", m, |rng, d| {
            let alpha = d.s.limit_at_most(rng, d.bound())?;
            let lo = if rng.random_bool(0.25) { Ordinal::zero() } else { d.s.below(rng, &alpha) };
            Some(Check::Isolation { alpha, lo })
        }));
    }
    plans
}

fn walk_plans<'f>(n: usize) -> Vec<Plan<'f>> {
    vec![
        Plan::new("walk-shape", n, |rng, d| {
            let (alpha, beta) = d.pair(rng)?;
            Some(Check::WalkShape { alpha, beta })
        }),
        Plan::new("concatenation", n, |rng, d| {
            let (alpha, gamma, beta) = d.triple(rng, |w| &w.lambda)?;
            Some(Check::Concatenation { alpha, gamma, beta })
        }),
        Plan::new("lambda2-bound", n, |rng, d| {
            let (gamma, beta) = d.pair(rng)?;
            Some(Check::Lambda2Bound { gamma, beta })
        }),
        Plan::new("lambda2-dichotomy", n, |rng, d| {
            let (alpha, gamma, beta) = d.triple(rng, |w| &w.lambda2)?;
            Some(Check::Lambda2Dichotomy { alpha, gamma, beta })
        }),
    ]
}

fn coloring_plans<'f>(n: usize, painters: &[(String, Painter)], mu: u64) -> Vec<Plan<'f>> {
    let m = (n / 10).max(1);
    let mut plans = Vec::new();
    for (label, painter) in painters {
        let p = painter.clone();
        plans.push(Plan::new(format!("image-identity/{label}"), n, move |rng, d| {
            let (alpha, gamma, beta) = d.triple(rng, |w| &w.lambda2)?;
            Some(Check::ImageIdentity {
                painter: p.clone(),
                alpha,
                gamma,
                beta,
            })
        }));
        let p = painter.clone();
        plans.push(Plan::new(format!("d-closedness/{label}"), m, move |rng, d| {
            for _ in 0..64 {
                let beta = d.s.at_most(rng, d.bound());
                let Some(s) = d.s.limit_below(rng, &beta) else {
                    continue;
                };
                let floor = d.ctx.walk(&s, &beta).ok()?.lambda2;
                let start = s.fundamental_index(&floor.successor()).ok()?;
                let skip: u64 = rng.random_range(0..4);
                let alphas: Vec<Ordinal> = (0..6u64)
                    .map(|k| s.fundamental(&(&start + skip + k)))
                    .collect::<Result<_, _>>()
                    .ok()?;
                // aim i at a realized value half the time so sequences are nonempty
                let i = if rng.random_bool(0.5) {
                    d.ctx
                        .with_colorer(&p, ThetaMode::Small, |c| c.d(&alphas[0], &beta).map_err(|e| e.to_string()))
                        .ok()?
                        .0
                        .to_u64()?
                } else {
                    rng.random_range(0..mu)
                };
                return Some(Check::DClosedness {
                    painter: p.clone(),
                    beta,
                    i,
                    s,
                    alphas,
                });
            }
            None
        }));
        let p = painter.clone();
        plans.push(Plan::new(format!("small-mode-color/{label}"), m, move |rng, d| {
            let (alpha, beta) = d.pair(rng)?;
            Some(Check::SmallModeColor {
                painter: p.clone(),
                alpha,
                beta,
            })
        }));
        let p = painter.clone();
        plans.push(Plan::new(format!("large-mode-color/{label}"), m, move |rng, d| {
            let (alpha, beta) = d.pair(rng)?;
            Some(Check::LargeModeColor {
                painter: p.clone(),
                alpha,
                beta,
            })
        }));
        let p = painter.clone();
        plans.push(Plan::new(format!("label-range/{label}"), m, move |rng, d| {
            Some(Check::LabelRange {
                painter: p.clone(),
                alpha: d.s.at_most(rng, d.bound()).max(Ordinal::one()),
            })
        }));
    }
    plans
}

/// The `paper`, `hash` and `table` painters exercised by the coloring suite. The
/// configured painter stands in for its own rule.
pub fn suite_painters(config: &ExperimentConfig) -> Vec<(String, Painter)> {
    let hash = match &config.painter {
        p @ Painter::Hash { .. } => p.clone(),
        _ => Painter::Hash { seed: config.seed },
    };
    let table = match &config.painter {
        p @ Painter::Table { .. } => p.clone(),
        _ => default_table(config.mu),
    };
    vec![("paper".into(), Painter::Paper), ("hash".into(), hash), ("table".into(), table)]
}

/// Labels `0 ↦ 1`, `ω^k ↦ k + 2` and a couple of multiples, all mod μ.
fn default_table(mu: u64) -> Painter {
    let mut entries = BTreeMap::new();
    entries.insert(Ordinal::zero(), 1 % mu);
    for k in 0..5u64 {
        entries.insert(Ordinal::omega_pow(Ordinal::from(k)), (k + 2) % mu);
        entries.insert(Ordinal::monomial(Ordinal::from(k), BigUint::from(2u32)), (k + 3) % mu);
    }
    Painter::Table { entries }
}

/// Runs the sampled invariants of one module (or all of them) with
/// `config.samples` samples per check kind; some kinds use a tenth.
pub fn run_property_suite(config: &ExperimentConfig, suite: Suite) -> Result<Report, HarnessError> {
    config.validate()?;
    let seq = config.build_seq()?;
    let painters = suite_painters(config);
    let plain: Vec<Painter> = painters.iter().map(|(_, p)| p.clone()).collect();
    let ctx = CheckContext::new(config, seq.as_ref(), &plain)?;
    let n = config.samples;
    let members = if suite == Suite::All { Suite::MODULES.to_vec() } else { vec![suite] };
    let mut report = Report::new(config.clone());
    for member in members {
        let mut out = SuiteReport::default();
        let plans = match member {
            Suite::Ordinal => ordinal_plans(n),
            Suite::Cseq => cseq_plans(n, ctx.has_acc),
            Suite::Walks => walk_plans(n),
            Suite::Coloring => coloring_plans(n, &painters, config.mu),
            Suite::All => unreachable!(),
        };
        execute(&ctx, member, plans, &mut out);
        requirements(&ctx, member, &mut out);
        out.passed = out.failures.is_empty() && out.checks.values().all(|[_, bad]| *bad == 0);
        report.suites.insert(member.name().to_string(), out);
    }
    Ok(report)
}

/// Suite-level conditions beyond per-sample checks.
fn requirements(ctx: &CheckContext<'_>, suite: Suite, out: &mut SuiteReport) {
    let seen = |key: &str| out.observations.get(key).copied().unwrap_or(0);
    match suite {
        Suite::Cseq if ctx.has_acc && ctx.config.samples >= 100 => {
            if seen("coherence: accumulation-points") == 0 {
                out.failures
                    .push("coherence: no accumulation point was found, so nothing was compared".into());
            }
        }
        Suite::Walks if ctx.has_acc && ctx.config.samples >= 100 => {
            for branch in ["branch-through-gamma", "branch-accumulation"] {
                if seen(&format!("lambda2-dichotomy: {branch}")) == 0 {
                    out.failures.push(format!("lambda2-dichotomy: {branch} never occurred"));
                }
            }
        }
        _ => {}
    }
}

/// Re-runs a recorded counterexample under its own config.
pub fn replay(counterexample: &Counterexample) -> Result<ReplayOutcome, HarnessError> {
    let config = &counterexample.config;
    config.validate()?;
    let seq = config.build_seq()?;
    let ctx = CheckContext::new(config, seq.as_ref(), &[])?;
    Ok(match counterexample.check.run(&ctx) {
        Ok(_) => ReplayOutcome::NotReproduced,
        Err(message) => ReplayOutcome::Reproduced(message),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(builder: &str, samples: usize) -> ExperimentConfig {
        ExperimentConfig {
            builder: builder.into(),
            samples,
            seed: 3,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn small_suites_pass_on_every_builder() {
        for builder in ["ladder", "single-term", "maximal"] {
            let r = run_property_suite(&cfg(builder, 200), Suite::All).unwrap();
            for (name, s) in &r.suites {
                let msgs: Vec<_> = s.counterexamples.iter().map(|c| (&c.name, &c.message)).collect();
                assert!(s.passed, "{builder}/{name}: {:?} {:?} {msgs:#?}", s.checks, s.failures);
            }
        }
    }

    #[test]
    fn holed_builder_is_caught_and_replays() {
        let r = run_property_suite(&cfg("holed-single-term", 300), Suite::Cseq).unwrap();
        let cseq = &r.suites["cseq"];
        assert!(!cseq.passed);
        let cx = cseq
            .counterexamples
            .iter()
            .find(|c| c.name == "closedness")
            .expect("a closedness counterexample");
        assert!(matches!(cx.check, Check::Closedness { .. }));
        let json = serde_json::to_string(cx).unwrap();
        let back: Counterexample = serde_json::from_str(&json).unwrap();
        assert!(matches!(replay(&back).unwrap(), ReplayOutcome::Reproduced(_)));
    }

    #[test]
    fn suite_names_parse() {
        for s in ["ordinal", "cseq", "walks", "coloring", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}

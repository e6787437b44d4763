//! C-sequences `⟨C_α⟩`: for every α, a closed cofinal subset of α.
//!
//! Sets are never materialized. Every query is answered in closed form from
//! the Cantor normal form of α. All builders share the successor rule
//! `C_{γ+1} = {0, γ}`; they differ on limits `α = γ + ω^b` as follows.
//!
//! * `ladder`: `{γ} ∪ {α[n] : n < ω}` with `α[n]` the standard fundamental
//!   sequence; order type ω, no accumulation points.
//! * `single-term`: `{γ} ∪ {γ + ω^d·m : d < b, m ≥ 1}`; accumulation points
//!   are exactly `γ + ω^d` for `0 < d < b` and the sequence is coherent.
//! * `maximal`: `C_α = α`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;

const MIN_CACHE_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CSeqError {
    #[error("C_0 is empty")]
    Empty,
    #[error("C_{alpha} has no element at or above {beta}")]
    EmptyTail { alpha: Ordinal, beta: Ordinal },
    #[error("unknown C-sequence builder {0:?} (expected ladder, single-term or maximal)")]
    UnknownBuilder(String),
}

/// A lazily queried C-sequence.
pub trait CSeq: Send + Sync {
    /// Configuration token naming this builder.
    fn name(&self) -> &str;

    /// Working bound B.
    fn bound(&self) -> &Ordinal;

    /// Which structural clauses this builder satisfies by construction.
    fn clauses(&self) -> ClauseProfile;

    fn min_element(&self, alpha: &Ordinal) -> Result<Ordinal, CSeqError>;

    /// `min(C_α ∖ β)`.
    fn next_at_or_above(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal, CSeqError>;

    /// `sup(C_α ∩ β)`, with `sup ∅ = 0`.
    fn sup_below(&self, alpha: &Ordinal, beta: &Ordinal) -> Ordinal;

    fn contains(&self, alpha: &Ordinal, xi: &Ordinal) -> bool;

    /// `ξ ∈ acc(C_α)`: a member with `sup(C_α ∩ ξ) = ξ > 0`.
    fn is_acc(&self, alpha: &Ordinal, xi: &Ordinal) -> bool {
        !xi.is_zero() && self.contains(alpha, xi) && self.sup_below(alpha, xi) == *xi
    }

    /// Ascending elements of `C_α ∩ [lo, hi)`, at most `max_count` of them.
    fn enumerate_between(
        &self,
        alpha: &Ordinal,
        lo: &Ordinal,
        hi: &Ordinal,
        max_count: usize,
    ) -> Window {
        let mut window = Window::default();
        let mut cursor = lo.clone();
        while cursor < *hi && cursor < *alpha {
            let Ok(x) = self.next_at_or_above(alpha, &cursor) else {
                break;
            };
            if x >= *hi {
                break;
            }
            if window.elements.len() == max_count {
                window.truncated = true;
                break;
            }
            cursor = x.successor();
            window.elements.push(x);
        }
        window
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Holds,
    /// Holds only because its hypothesis never occurs.
    Vacuous,
    Fails,
    /// Stated over an uncountable regular bound; no bound below ε₀ can carry it.
    Unattainable,
}

/// Structural clauses a C-sequence may be asked to satisfy, and whether this
/// builder does. Reports carry it so that results are read against what the
/// builder actually provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseProfile {
    /// `C_{α+1} = {0, α}`.
    pub successor_rule: ClauseStatus,
    /// Each `C_α` is closed in α.
    pub closed: ClauseStatus,
    /// Every club `D` has some `γ` with `nacc(C_γ) ∩ D` cofinal in γ.
    pub club_guessing: ClauseStatus,
    /// `C_ᾱ = C_α ∩ ᾱ` for every `ᾱ ∈ acc(C_α)`.
    pub coherence: ClauseStatus,
    /// Each class `{α : min(C_α) = i}` is stationary.
    pub stationary_min_classes: ClauseStatus,
}

impl ClauseProfile {
    fn with_coherence(coherence: ClauseStatus) -> Self {
        ClauseProfile {
            successor_rule: ClauseStatus::Holds,
            closed: ClauseStatus::Holds,
            club_guessing: ClauseStatus::Unattainable,
            coherence,
            stationary_min_classes: ClauseStatus::Unattainable,
        }
    }
}

/// A finite slice of some `C_α`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub elements: Vec<Ordinal>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CSeqKind {
    Ladder,
    SingleTerm,
    Maximal,
}

impl CSeqKind {
    pub const ALL: [CSeqKind; 3] = [CSeqKind::Ladder, CSeqKind::SingleTerm, CSeqKind::Maximal];

    pub fn token(self) -> &'static str {
        match self {
            CSeqKind::Ladder => "ladder",
            CSeqKind::SingleTerm => "single-term",
            CSeqKind::Maximal => "maximal",
        }
    }

    pub fn has_accumulation_points(self) -> bool {
        !matches!(self, CSeqKind::Ladder)
    }
}

impl fmt::Display for CSeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for CSeqKind {
    type Err = CSeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CSeqKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| CSeqError::UnknownBuilder(s.to_string()))
    }
}

/// Builds the C-sequence named by a configuration token. Besides the three
/// regular kinds this accepts `holed-single-term`, the fault-injection
/// fixture [`HoledSingleTerm`].
pub fn from_token(token: &str, bound: Ordinal) -> Result<Box<dyn CSeq>, CSeqError> {
    if token == HoledSingleTerm::TOKEN {
        return Ok(Box::new(HoledSingleTerm::new(bound)));
    }
    Ok(Box::new(CSeqBuilder::new(token.parse()?, bound)))
}

pub struct CSeqBuilder {
    kind: CSeqKind,
    bound: Ordinal,
    min_cache: RwLock<HashMap<Ordinal, Ordinal>>,
}

impl fmt::Debug for CSeqBuilder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CSeqBuilder")
            .field("kind", &self.kind)
            .field("bound", &self.bound)
            .finish()
    }
}

impl CSeqBuilder {
    pub fn new(kind: CSeqKind, bound: Ordinal) -> Self {
        CSeqBuilder {
            kind,
            bound,
            min_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn kind(&self) -> CSeqKind {
        self.kind
    }

    fn min_uncached(&self, alpha: &Ordinal) -> Ordinal {
        if alpha.is_successor() {
            return Ordinal::zero();
        }
        match self.kind {
            CSeqKind::Maximal => Ordinal::zero(),
            CSeqKind::Ladder | CSeqKind::SingleTerm => {
                alpha.split_last().expect("limit").0
            }
        }
    }
}

fn successor_next(alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal, CSeqError> {
    let top = alpha.predecessor().expect("successor");
    if beta.is_zero() {
        Ok(Ordinal::zero())
    } else if *beta <= top {
        Ok(top)
    } else {
        Err(CSeqError::EmptyTail {
            alpha: alpha.clone(),
            beta: beta.clone(),
        })
    }
}

fn successor_sup(alpha: &Ordinal, beta: &Ordinal) -> Ordinal {
    let top = alpha.predecessor().expect("successor");
    if *beta > top {
        top
    } else {
        Ordinal::zero()
    }
}

fn successor_contains(alpha: &Ordinal, xi: &Ordinal) -> bool {
    xi.is_zero() || *xi == alpha.predecessor().expect("successor")
}

fn single_term_next(head: &Ordinal, x: &Ordinal) -> Ordinal {
    if x <= head {
        return head.clone();
    }
    let rest = x.left_difference(head).expect("x > head");
    if rest.is_monomial() {
        return x.clone();
    }
    let lead = rest.leading_term().expect("positive");
    head + &Ordinal::monomial(lead.exponent().clone(), lead.coefficient() + 1u32)
}

fn single_term_sup(head: &Ordinal, x: &Ordinal) -> Ordinal {
    if x <= head {
        return Ordinal::zero();
    }
    let rest = x.left_difference(head).expect("x > head");
    let lead = rest.leading_term().expect("positive");
    let (e, c) = (lead.exponent(), lead.coefficient());
    if !rest.is_monomial() {
        return head + &Ordinal::monomial(e.clone(), c.clone());
    }
    if !c.is_one() {
        head + &Ordinal::monomial(e.clone(), c - 1u32)
    } else if e.is_zero() {
        head.clone()
    } else {
        x.clone()
    }
}

fn single_term_contains(head: &Ordinal, xi: &Ordinal) -> bool {
    xi.left_difference(head)
        .is_some_and(|rest| rest.is_zero() || rest.is_monomial())
}

fn ladder_index(alpha: &Ordinal, x: &Ordinal) -> BigUint {
    alpha
        .fundamental_index(x)
        .expect("x below a limit alpha")
}

fn ladder_rung(alpha: &Ordinal, n: &BigUint) -> Ordinal {
    alpha.fundamental(n).expect("limit alpha")
}

impl CSeq for CSeqBuilder {
    fn name(&self) -> &str {
        self.kind.token()
    }

    fn bound(&self) -> &Ordinal {
        &self.bound
    }

    fn clauses(&self) -> ClauseProfile {
        ClauseProfile::with_coherence(match self.kind {
            // no accumulation points at all
            CSeqKind::Ladder => ClauseStatus::Vacuous,
            CSeqKind::SingleTerm | CSeqKind::Maximal => ClauseStatus::Holds,
        })
    }

    fn min_element(&self, alpha: &Ordinal) -> Result<Ordinal, CSeqError> {
        if alpha.is_zero() {
            return Err(CSeqError::Empty);
        }
        if let Some(hit) = self.min_cache.read().expect("poisoned").get(alpha) {
            return Ok(hit.clone());
        }
        let value = self.min_uncached(alpha);
        let mut cache = self.min_cache.write().expect("poisoned");
        if cache.len() >= MIN_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(alpha.clone(), value.clone());
        Ok(value)
    }

    fn next_at_or_above(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal, CSeqError> {
        if alpha.is_zero() {
            return Err(CSeqError::Empty);
        }
        if alpha.is_successor() {
            return successor_next(alpha, beta);
        }
        if beta >= alpha {
            return Err(CSeqError::EmptyTail {
                alpha: alpha.clone(),
                beta: beta.clone(),
            });
        }
        Ok(match self.kind {
            CSeqKind::Maximal => beta.clone(),
            CSeqKind::SingleTerm => single_term_next(&alpha.split_last().expect("limit").0, beta),
            CSeqKind::Ladder => {
                let head = alpha.split_last().expect("limit").0;
                if *beta <= head {
                    head
                } else {
                    ladder_rung(alpha, &ladder_index(alpha, beta))
                }
            }
        })
    }

    fn sup_below(&self, alpha: &Ordinal, beta: &Ordinal) -> Ordinal {
        if alpha.is_zero() {
            return Ordinal::zero();
        }
        if alpha.is_successor() {
            return successor_sup(alpha, beta);
        }
        if beta >= alpha {
            return alpha.clone();
        }
        match self.kind {
            CSeqKind::Maximal => {
                if beta.is_successor() {
                    beta.predecessor().expect("successor")
                } else {
                    beta.clone()
                }
            }
            CSeqKind::SingleTerm => single_term_sup(&alpha.split_last().expect("limit").0, beta),
            CSeqKind::Ladder => {
                let head = alpha.split_last().expect("limit").0;
                if *beta <= head {
                    return Ordinal::zero();
                }
                let n = ladder_index(alpha, beta);
                if n == BigUint::ZERO {
                    head
                } else {
                    ladder_rung(alpha, &(n - 1u32))
                }
            }
        }
    }

    fn contains(&self, alpha: &Ordinal, xi: &Ordinal) -> bool {
        if xi >= alpha {
            return false;
        }
        if alpha.is_successor() {
            return successor_contains(alpha, xi);
        }
        match self.kind {
            CSeqKind::Maximal => true,
            CSeqKind::SingleTerm => single_term_contains(&alpha.split_last().expect("limit").0, xi),
            CSeqKind::Ladder => {
                let head = alpha.split_last().expect("limit").0;
                if *xi < head {
                    return false;
                }
                *xi == head || ladder_rung(alpha, &ladder_index(alpha, xi)) == *xi
            }
        }
    }
}

/// Fault-injection fixture: `single-term` with the accumulation point
/// `γ + ω` removed from every `C_{γ+ω^b}` with `b ≥ 2`, so those sets are no
/// longer closed. Exists only so the closedness checks can be shown to fire.
#[derive(Debug)]
pub struct HoledSingleTerm {
    inner: CSeqBuilder,
}

impl HoledSingleTerm {
    pub const TOKEN: &'static str = "holed-single-term";

    pub fn new(bound: Ordinal) -> Self {
        HoledSingleTerm {
            inner: CSeqBuilder::new(CSeqKind::SingleTerm, bound),
        }
    }

    /// The removed point of `C_α`, if any.
    pub fn hole(alpha: &Ordinal) -> Option<Ordinal> {
        let (head, top) = alpha.split_last().ok()?;
        (top > Ordinal::one()).then(|| &head + &Ordinal::omega())
    }
}

impl CSeq for HoledSingleTerm {
    fn name(&self) -> &str {
        Self::TOKEN
    }

    fn bound(&self) -> &Ordinal {
        self.inner.bound()
    }

    fn clauses(&self) -> ClauseProfile {
        // every ᾱ ∈ acc(C_α) has the same hole γ + ω as α, so coherence
        // survives while closedness does not
        ClauseProfile {
            closed: ClauseStatus::Fails,
            ..ClauseProfile::with_coherence(ClauseStatus::Holds)
        }
    }

    fn min_element(&self, alpha: &Ordinal) -> Result<Ordinal, CSeqError> {
        self.inner.min_element(alpha)
    }

    fn next_at_or_above(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Ordinal, CSeqError> {
        let x = self.inner.next_at_or_above(alpha, beta)?;
        match Self::hole(alpha) {
            Some(hole) if hole == x => self.inner.next_at_or_above(alpha, &x.successor()),
            _ => Ok(x),
        }
    }

    fn sup_below(&self, alpha: &Ordinal, beta: &Ordinal) -> Ordinal {
        // the hole is a limit of the remaining points, so sups are unchanged
        self.inner.sup_below(alpha, beta)
    }

    fn contains(&self, alpha: &Ordinal, xi: &Ordinal) -> bool {
        self.inner.contains(alpha, xi) && Self::hole(alpha).as_ref() != Some(xi)
    }
}

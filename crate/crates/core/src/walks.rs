//! Minimal walks along a C-sequence and their characteristics.
//!
//! A walk from β down to α < β repeatedly steps from the current ordinal δ to
//! `min(C_δ ∖ α)` until it lands on α. The visited ordinals above α form the
//! trace; its length is ρ₂(α, β).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cseq::{CSeq, CSeqError};
use crate::ordinal::Ordinal;

/// Steps allowed before a walk is declared runaway. Genuine walks always
/// terminate, so hitting this means the C-sequence violates `C_δ ⊆ δ`.
pub const DEFAULT_STEP_BUDGET: usize = 1 << 20;

const MEMO_LIMIT: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("a walk needs alpha < beta, got alpha = {alpha}, beta = {beta}")]
    NotIncreasing { alpha: Ordinal, beta: Ordinal },
    #[error("{value} exceeds the working bound {bound}")]
    AboveBound { value: Ordinal, bound: Ordinal },
    #[error("walk from {beta} to {alpha} exceeded {budget} steps; the C-sequence is broken")]
    StepBudget {
        alpha: Ordinal,
        beta: Ordinal,
        budget: usize,
    },
    #[error(transparent)]
    CSeq(#[from] CSeqError),
}

/// Everything recorded about one walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkResult {
    /// `tr(α, β)`: strictly decreasing, starts at β, every entry above α.
    pub trace: Vec<Ordinal>,
    pub rho2: usize,
    /// `λ(α, β) = max_i sup(C_{trace[i]} ∩ α)`.
    pub lambda: Ordinal,
    /// Same maximum restricted to the values below α.
    pub lambda2: Ordinal,
}

impl WalkResult {
    /// `min(im(tr(α, β)))`, the last ordinal visited before α.
    pub fn last(&self) -> &Ordinal {
        self.trace.last().expect("traces are never empty")
    }
}

pub fn walk<S: CSeq + ?Sized>(seq: &S, alpha: &Ordinal, beta: &Ordinal) -> Result<WalkResult, WalkError> {
    walk_with_budget(seq, alpha, beta, DEFAULT_STEP_BUDGET)
}

pub fn walk_with_budget<S: CSeq + ?Sized>(
    seq: &S,
    alpha: &Ordinal,
    beta: &Ordinal,
    budget: usize,
) -> Result<WalkResult, WalkError> {
    if alpha >= beta {
        return Err(WalkError::NotIncreasing {
            alpha: alpha.clone(),
            beta: beta.clone(),
        });
    }
    if beta > seq.bound() {
        return Err(WalkError::AboveBound {
            value: beta.clone(),
            bound: seq.bound().clone(),
        });
    }
    let mut trace = vec![beta.clone()];
    let mut lambda = Ordinal::zero();
    let mut lambda2 = Ordinal::zero();
    loop {
        let current = trace.last().expect("nonempty");
        let shadow = seq.sup_below(current, alpha);
        if shadow < *alpha && shadow > lambda2 {
            lambda2 = shadow.clone();
        }
        if shadow > lambda {
            lambda = shadow;
        }
        let next = seq.next_at_or_above(current, alpha)?;
        if next == *alpha {
            break;
        }
        if trace.len() >= budget || next >= *current {
            return Err(WalkError::StepBudget {
                alpha: alpha.clone(),
                beta: beta.clone(),
                budget,
            });
        }
        trace.push(next);
    }
    Ok(WalkResult {
        rho2: trace.len(),
        trace,
        lambda,
        lambda2,
    })
}

/// `η_{α,β}`: one more than the first index n with `η ∈ C_{Tr(α,β)(n)}`,
/// where index ρ₂ always qualifies.
pub fn eta_index<S: CSeq + ?Sized>(
    seq: &S,
    eta: &Ordinal,
    alpha: &Ordinal,
    beta: &Ordinal,
) -> Result<usize, WalkError> {
    if eta >= seq.bound() {
        return Err(WalkError::AboveBound {
            value: eta.clone(),
            bound: seq.bound().clone(),
        });
    }
    let result = walk(seq, alpha, beta)?;
    Ok(eta_index_of(seq, eta, &result))
}

pub(crate) fn eta_index_of<S: CSeq + ?Sized>(seq: &S, eta: &Ordinal, result: &WalkResult) -> usize {
    result
        .trace
        .iter()
        .position(|delta| seq.contains(delta, eta))
        .unwrap_or(result.rho2)
        + 1
}

/// `tr_h(α, β)`: `h` applied to every entry of the trace.
pub fn labeled_trace<S, L, F>(seq: &S, h: F, alpha: &Ordinal, beta: &Ordinal) -> Result<Vec<L>, WalkError>
where
    S: CSeq + ?Sized,
    F: FnMut(&Ordinal) -> L,
{
    Ok(walk(seq, alpha, beta)?.trace.iter().map(h).collect())
}

/// Memoizing front end for [`walk`]; results are identical to uncached calls.
pub struct WalkMemo<'a> {
    seq: &'a dyn CSeq,
    cache: RwLock<HashMap<(Ordinal, Ordinal), Arc<WalkResult>>>,
}

impl<'a> WalkMemo<'a> {
    pub fn new(seq: &'a dyn CSeq) -> Self {
        WalkMemo {
            seq,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn seq(&self) -> &'a dyn CSeq {
        self.seq
    }

    pub fn walk(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Arc<WalkResult>, WalkError> {
        let key = (alpha.clone(), beta.clone());
        if let Some(hit) = self.cache.read().expect("poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let result = Arc::new(walk(self.seq, alpha, beta)?);
        let mut cache = self.cache.write().expect("poisoned");
        if cache.len() >= MEMO_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&result));
        Ok(result)
    }
}

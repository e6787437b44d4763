//! Exhaustive, cache-free recomputation of family scans.
//!
//! Deliberately shares nothing with [`Colorer`](crate::coloring::Colorer)
//! beyond the C-sequence and painter: walks are stepped by hand, every color
//! of every pair is computed (no early exit), and pairs are enumerated
//! serially. The experiment runner compares its fast paths against this.

use std::collections::BTreeSet;

use crate::coloring::{Color, ColorFn, ColoringError, ColoringParams, FamilySample, Painter, ThetaMode, U1Outcome};
use crate::cseq::CSeq;
use crate::ordinal::Ordinal;

/// Every color of every separated pair, in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveScan {
    pub pairs: Vec<(usize, usize, BTreeSet<Color>)>,
}

impl ExhaustiveScan {
    pub fn new(
        seq: &dyn CSeq,
        painter: &Painter,
        params: &ColoringParams,
        family: &FamilySample,
        which: ColorFn,
    ) -> Result<Self, ColoringError> {
        let blocks = family.blocks();
        let mut pairs = Vec::new();
        for (i, a) in blocks.iter().enumerate() {
            for (j, b) in blocks.iter().enumerate() {
                let a_max = a.iter().max().expect("blocks are nonempty");
                let b_min = b.iter().min().expect("blocks are nonempty");
                if a_max >= b_min {
                    continue;
                }
                let mut colors = BTreeSet::new();
                for alpha in a {
                    for beta in b {
                        colors.insert(color(seq, painter, params, which, alpha, beta)?);
                    }
                }
                pairs.push((i, j, colors));
            }
        }
        Ok(ExhaustiveScan { pairs })
    }

    fn mono(&self) -> impl Iterator<Item = (usize, usize, &Color)> {
        self.pairs
            .iter()
            .filter(|(_, _, set)| set.len() == 1)
            .map(|(i, j, set)| (*i, *j, set.iter().next().expect("singleton")))
    }

    pub fn witness(&self, epsilon: &Color) -> U1Outcome {
        for (k, (i, j, set)) in self.pairs.iter().enumerate() {
            if set.len() == 1 {
                let tau = set.iter().next().expect("singleton");
                if tau > epsilon {
                    return U1Outcome::Witness {
                        a: *i,
                        b: *j,
                        tau: tau.clone(),
                        scanned_pairs: k + 1,
                    };
                }
            }
        }
        U1Outcome::Exhausted {
            scanned_pairs: self.pairs.len(),
        }
    }

    pub fn trace_set(&self) -> BTreeSet<Color> {
        self.mono().map(|(_, _, c)| c.clone()).collect()
    }

    pub fn pr1_hit(&self, tau: &Color) -> bool {
        self.mono().any(|(_, _, c)| c == tau)
    }
}

/// The walk from β to α, one `min(C_δ ∖ α)` step at a time.
pub fn naive_trace(seq: &dyn CSeq, alpha: &Ordinal, beta: &Ordinal) -> Result<Vec<Ordinal>, ColoringError> {
    let mut trace = Vec::new();
    let mut delta = beta.clone();
    while delta != *alpha {
        let next = seq.next_at_or_above(&delta, alpha)?;
        trace.push(delta);
        delta = next;
    }
    Ok(trace)
}

fn color(
    seq: &dyn CSeq,
    painter: &Painter,
    params: &ColoringParams,
    which: ColorFn,
    alpha: &Ordinal,
    beta: &Ordinal,
) -> Result<Color, ColoringError> {
    let trace = naive_trace(seq, alpha, beta)?;
    let labeled = trace
        .into_iter()
        .map(|x| Ok((painter.label_for_min(&seq.min_element(&x)?, params.mu), x)))
        .collect::<Result<Vec<_>, ColoringError>>()?;
    let d = labeled.iter().map(|(l, _)| *l).max().expect("alpha < beta");
    Ok(match (which, params.theta_mode) {
        (ColorFn::D, _) | (ColorFn::C, ThetaMode::Small) => Color::from(d),
        (ColorFn::C, ThetaMode::Large) => Color(
            labeled
                .into_iter()
                .filter(|(l, _)| *l == d)
                .map(|(_, x)| x)
                .max()
                .expect("the maximum label is attained"),
        ),
    })
}

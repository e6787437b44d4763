//! Seeded sampling of ordinals and block families.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ExperimentConfig, HarnessError};
use crate::coloring::{FamilySample, Provenance};
use crate::ordinal::Ordinal;

/// The generator for stream `stream` under `seed`. Streams are independent,
/// so trial `t` sees the same numbers whether trials run serially or not.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random ordinals below a bound, biased toward short Cantor normal forms
/// with small coefficients, which is where walks are most varied.
#[derive(Debug, Clone, Copy)]
pub struct OrdinalSampler {
    pub max_coefficient: u64,
    pub max_tail_terms: usize,
}

impl Default for OrdinalSampler {
    fn default() -> Self {
        OrdinalSampler {
            max_coefficient: 3,
            max_tail_terms: 3,
        }
    }
}

enum Move {
    Stop,
    SmallerCoefficient,
    LowerExponent,
    Continue,
}

impl OrdinalSampler {
    /// A random ordinal `< bound`. Panics on `bound = 0`.
    pub fn below<R: Rng + ?Sized>(&self, rng: &mut R, bound: &Ordinal) -> Ordinal {
        assert!(!bound.is_zero(), "nothing lies below 0");
        if let Some(n) = bound.to_u64() {
            return Ordinal::from(rng.random_range(0..n));
        }
        // Share a prefix of `bound`'s terms, then deviate downward at one term.
        let terms = bound.terms();
        let mut out: Vec<(Ordinal, BigUint)> = Vec::new();
        for (i, term) in terms.iter().enumerate() {
            let c = term.coefficient();
            let e = term.exponent();
            let mut moves = vec![(Move::Stop, 1u32)];
            if *c >= BigUint::from(2u32) {
                moves.push((Move::SmallerCoefficient, 3));
            }
            if !e.is_zero() {
                moves.push((Move::LowerExponent, 3));
            }
            if i + 1 < terms.len() {
                moves.push((Move::Continue, 4));
            }
            let total: u32 = moves.iter().map(|m| m.1).sum();
            let mut pick = rng.random_range(0..total);
            let chosen = moves
                .into_iter()
                .find(|(_, w)| {
                    if pick < *w {
                        true
                    } else {
                        pick -= w;
                        false
                    }
                })
                .expect("weights cover the range")
                .0;
            let prefix = Ordinal::from_terms(out.iter().cloned()).expect("prefix of a normal form");
            match chosen {
                Move::Stop => return prefix,
                Move::Continue => out.push((e.clone(), c.clone())),
                Move::SmallerCoefficient => {
                    let top = c.to_string().parse::<u64>().unwrap_or(u64::MAX);
                    let k = rng.random_range(1..top);
                    let head = &prefix + &Ordinal::monomial(e.clone(), BigUint::from(k));
                    let tail = if e.is_zero() {
                        Ordinal::zero()
                    } else {
                        self.tail_below(rng, e)
                    };
                    return &head + &tail;
                }
                Move::LowerExponent => {
                    let lower = self.below(rng, e);
                    let k = self.coefficient(rng);
                    let head = &prefix + &Ordinal::monomial(lower.clone(), BigUint::from(k));
                    let tail = if lower.is_zero() {
                        Ordinal::zero()
                    } else {
                        self.tail_below(rng, &lower)
                    };
                    return &head + &tail;
                }
            }
        }
        unreachable!("the last term never continues")
    }

    /// Mostly `1..=max_coefficient`, occasionally up to 64.
    fn coefficient<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if rng.random_ratio(1, 4) {
            rng.random_range(1..=64)
        } else {
            rng.random_range(1..=self.max_coefficient)
        }
    }

    /// A short random ordinal `< ω^e`.
    fn tail_below<R: Rng + ?Sized>(&self, rng: &mut R, e: &Ordinal) -> Ordinal {
        let count = rng.random_range(0..=self.max_tail_terms);
        let exponents: BTreeSet<Ordinal> = (0..count).map(|_| self.below(rng, e)).collect();
        exponents
            .into_iter()
            .rev()
            .map(|x| Ordinal::monomial(x, BigUint::from(self.coefficient(rng))))
            .fold(Ordinal::zero(), |acc, m| &acc + &m)
    }

    /// A random ordinal strictly between `lo` and `hi`, if there is one.
    pub fn between<R: Rng + ?Sized>(&self, rng: &mut R, lo: &Ordinal, hi: &Ordinal) -> Option<Ordinal> {
        let gap = hi.left_difference(lo)?;
        if gap <= Ordinal::one() {
            return None;
        }
        if let Some(n) = gap.to_u64() {
            return Some(lo + &Ordinal::from(rng.random_range(1..n)));
        }
        for _ in 0..64 {
            let t = self.below(rng, &gap);
            if !t.is_zero() {
                return Some(lo + &t);
            }
        }
        Some(lo.successor())
    }

    /// A random ordinal `≤ bound`; the bound itself comes up now and then.
    pub fn at_most<R: Rng + ?Sized>(&self, rng: &mut R, bound: &Ordinal) -> Ordinal {
        if bound.is_zero() || rng.random_ratio(1, 16) {
            bound.clone()
        } else {
            self.below(rng, bound)
        }
    }

    /// A random nonzero limit `< bound`, if the sampler finds one.
    pub fn limit_below<R: Rng + ?Sized>(&self, rng: &mut R, bound: &Ordinal) -> Option<Ordinal> {
        if *bound <= Ordinal::omega() {
            return None;
        }
        (0..64)
            .map(|_| self.below(rng, bound).limit_part())
            .find(|x| !x.is_zero())
    }

    /// A random nonzero limit `≤ bound`.
    pub fn limit_at_most<R: Rng + ?Sized>(&self, rng: &mut R, bound: &Ordinal) -> Option<Ordinal> {
        if bound.is_limit() && rng.random_ratio(1, 16) {
            return Some(bound.clone());
        }
        self.limit_below(rng, bound)
    }
}

/// Draws `blocks` pairwise-disjoint σ-element blocks from the configured window.
pub fn sample_family<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    rng: &mut R,
    trial: u64,
) -> Result<FamilySample, HarnessError> {
    let lo = &config.window_lo;
    let hi = &config.window_hi;
    let needed = config.sigma * config.blocks;
    let width = hi.left_difference(lo).filter(|w| !w.is_zero()).ok_or_else(|| {
        HarnessError::InvalidConfig(format!("window [{lo}, {hi}) is empty"))
    })?;
    if let Some(n) = width.to_u64() {
        if n < needed as u64 {
            return Err(HarnessError::InsufficientWindow {
                needed,
                available: n,
            });
        }
    }
    let sampler = OrdinalSampler::default();
    let mut used = BTreeSet::new();
    let mut blocks = Vec::with_capacity(config.blocks);
    let mut attempts = 0usize;
    let max_attempts = 1000 * needed.max(1);
    for _ in 0..config.blocks {
        let mut block = Vec::with_capacity(config.sigma);
        while block.len() < config.sigma {
            attempts += 1;
            if attempts > max_attempts {
                return Err(HarnessError::InsufficientWindow {
                    needed,
                    available: used.len() as u64,
                });
            }
            let x = lo + &sampler.below(rng, &width);
            if used.insert(x.clone()) {
                block.push(x);
            }
        }
        blocks.push(block);
    }
    Ok(FamilySample::new(blocks, &config.bound)?.with_provenance(Provenance {
        seed: config.seed,
        trial,
        window_lo: lo.clone(),
        window_hi: hi.clone(),
    }))
}

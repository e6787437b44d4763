//! Standard fundamental sequences for limit ordinals below ε₀.
//!
//! For `λ = δ + ω^b` (the split produced by [`Ordinal::split_last`]):
//! `λ[n] = δ + ω^b'·n` when `b = b' + 1`, and `λ[n] = δ + ω^(b[n])` when `b`
//! is a limit. The sequence is strictly increasing with supremum `λ`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Ordinal, OrdinalError};

impl Ordinal {
    /// The `n`-th element of the fundamental sequence of a limit ordinal.
    pub fn fundamental(&self, n: &BigUint) -> Result<Ordinal, OrdinalError> {
        let (head, top) = self.split_last()?;
        if top.is_successor() {
            let step = top.predecessor()?;
            Ok(&head + &Ordinal::monomial(step, n.clone()))
        } else {
            let inner = top.fundamental(n)?;
            Ok(&head + &Ordinal::omega_pow(inner))
        }
    }

    /// The least `n` with `self[n] ≥ x`, for a limit `self` and `x < self`.
    pub fn fundamental_index(&self, x: &Ordinal) -> Result<BigUint, OrdinalError> {
        if x >= self {
            return Err(OrdinalError::NotBelow {
                x: x.clone(),
                limit: self.clone(),
            });
        }
        let (head, top) = self.split_last()?;
        if *x <= head {
            return Ok(BigUint::zero());
        }
        let rest = x
            .left_difference(&head)
            .expect("x > head so the difference exists");
        let lead = rest.leading_term().expect("rest is positive");
        if top.is_successor() {
            let step = top.predecessor()?;
            if lead.exponent() == &step {
                let c = lead.coefficient().clone();
                return Ok(if rest.is_monomial() { c } else { c + 1u32 });
            }
            // rest < ω^step
            return Ok(BigUint::one());
        }
        let e = lead.exponent();
        let n0 = top.fundamental_index(e)?;
        let at = top.fundamental(&n0)?;
        if at > *e || rest == Ordinal::omega_pow(e.clone()) {
            Ok(n0)
        } else {
            Ok(n0 + 1u32)
        }
    }
}

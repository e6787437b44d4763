//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite, strictly decreasing list of terms `ω^e·c`
//! where every exponent is itself an [`Ordinal`] and every coefficient is a
//! positive arbitrary-precision integer. The representation is canonical, so
//! structural equality is ordinal equality and the derived ordering on the
//! term list is the ordinal ordering.

mod fundamental;
mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exponents must be strictly decreasing ({prev} is followed by {next})")]
    NonCanonical { prev: Ordinal, next: Ordinal },
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("{0} is not a successor ordinal")]
    NotSuccessor(Ordinal),
    #[error("{x} is not below {limit}")]
    NotBelow { x: Ordinal, limit: Ordinal },
}

/// One Cantor-normal-form term `ω^exponent · coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    exponent: Ordinal,
    coefficient: BigUint,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> &BigUint {
        &self.coefficient
    }
}

/// An ordinal below ε₀.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal::monomial(exponent, BigUint::one())
    }

    /// `ω^exponent · coefficient`; a zero coefficient yields 0.
    pub fn monomial(exponent: Ordinal, coefficient: BigUint) -> Self {
        if coefficient.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    pub fn natural(n: BigUint) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, rejecting
    /// anything that is not already in Cantor normal form.
    pub fn from_terms<I>(terms: I) -> Result<Self, OrdinalError>
    where
        I: IntoIterator<Item = (Ordinal, BigUint)>,
    {
        let mut out: Vec<Term> = Vec::new();
        for (exponent, coefficient) in terms {
            if coefficient.is_zero() {
                return Err(OrdinalError::ZeroCoefficient);
            }
            if let Some(prev) = out.last() {
                if prev.exponent <= exponent {
                    return Err(OrdinalError::NonCanonical {
                        prev: prev.exponent.clone(),
                        next: exponent,
                    });
                }
            }
            out.push(Term {
                exponent,
                coefficient,
            });
        }
        Ok(Ordinal { terms: out })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    /// The value of a finite ordinal, if it fits in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => t.coefficient.to_u64(),
            _ => None,
        }
    }

    /// 0 is neither a limit nor a successor.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    /// A single term `ω^e·c` (0 is not a monomial).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    pub fn successor(&self) -> Ordinal {
        self + &Ordinal::one()
    }

    pub fn predecessor(&self) -> Result<Ordinal, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotSuccessor(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a last term");
        if last.coefficient.is_one() {
            terms.pop();
        } else {
            last.coefficient -= 1u32;
        }
        Ok(Ordinal { terms })
    }

    /// Drops the finite part, leaving the largest limit ordinal (or 0) that
    /// is `≤ self`.
    pub fn limit_part(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        if terms.last().is_some_and(|t| t.exponent.is_zero()) {
            terms.pop();
        }
        Ordinal { terms }
    }

    /// Decomposes a limit ordinal as `head + ω^last_exponent` where the head
    /// keeps every term but one copy of the last one.
    pub fn split_last(&self) -> Result<(Ordinal, Ordinal), OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("limit has a last term");
        let exponent = last.exponent.clone();
        if last.coefficient.is_one() {
            terms.pop();
        } else {
            last.coefficient -= 1u32;
        }
        Ok((Ordinal { terms }, exponent))
    }

    /// The unique `t` with `lower + t = self`, or `None` when `lower > self`.
    pub fn left_difference(&self, lower: &Ordinal) -> Option<Ordinal> {
        let mut i = 0;
        while i < self.terms.len() && i < lower.terms.len() && self.terms[i] == lower.terms[i] {
            i += 1;
        }
        let (Some(mine), theirs) = (self.terms.get(i), lower.terms.get(i)) else {
            // self is a prefix of lower
            return if i == lower.terms.len() {
                Some(Ordinal::zero())
            } else {
                None
            };
        };
        let Some(theirs) = theirs else {
            return Some(Ordinal {
                terms: self.terms[i..].to_vec(),
            });
        };
        match mine.exponent.cmp(&theirs.exponent) {
            Ordering::Greater => Some(Ordinal {
                terms: self.terms[i..].to_vec(),
            }),
            Ordering::Less => None,
            Ordering::Equal => {
                if mine.coefficient < theirs.coefficient {
                    return None;
                }
                let mut terms = Vec::with_capacity(self.terms.len() - i);
                terms.push(Term {
                    exponent: mine.exponent.clone(),
                    coefficient: &mine.coefficient - &theirs.coefficient,
                });
                terms.extend_from_slice(&self.terms[i + 1..]);
                Some(Ordinal { terms })
            }
        }
    }

    /// Total order on ordinals; same as `Ord::cmp`.
    pub fn compare(&self, other: &Ordinal) -> Ordering {
        self.cmp(other)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::natural(BigUint::from(n))
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exponent == lead.exponent {
                last.coefficient += &lead.coefficient;
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }
}

impl Add for Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            match t.exponent.to_u64() {
                Some(1) => {}
                Some(_) => write!(f, "^{}", t.exponent)?,
                None => write!(f, "^({})", t.exponent)?,
            }
            if !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o("0").compare(&o("0")), Ordering::Equal);
        assert_eq!(o("w").compare(&o("w+1")), Ordering::Less);
        assert_eq!(o("w*2").compare(&o("w^2")), Ordering::Less);
        assert!(o("w^(w)") > o("w^100*7+w"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(&o("3") + &o("w"), o("w"));
        assert_eq!(&o("w") + &o("3"), o("w+3"));
        assert_eq!(&o("w^2+w") + &o("w"), o("w^2+w*2"));
        assert_eq!(&o("w^3+w*2+5") + &o("w^2*4+1"), o("w^3+w^2*4+1"));
        assert_eq!(&o("w^2") + &o("0"), o("w^2"));
    }

    #[test]
    fn split_last_examples() {
        assert_eq!(o("w").split_last().unwrap(), (o("0"), o("1")));
        assert_eq!(o("w*2").split_last().unwrap(), (o("w"), o("1")));
        assert_eq!(o("w^3+w^2").split_last().unwrap(), (o("w^3"), o("2")));
        assert_eq!(o("w^(w+1)*3").split_last().unwrap(), (o("w^(w+1)*2"), o("w+1")));
        assert!(matches!(o("0").split_last(), Err(OrdinalError::NotLimit(_))));
        assert!(matches!(o("w+1").split_last(), Err(OrdinalError::NotLimit(_))));
    }

    #[test]
    fn limit_and_successor() {
        assert!(!o("0").is_limit());
        assert!(!o("0").is_successor());
        assert!(o("w*5").is_limit());
        assert!(o("w+1").is_successor());
        assert_eq!(o("w+1").predecessor().unwrap(), o("w"));
        assert_eq!(o("w+3").predecessor().unwrap(), o("w+2"));
        assert!(o("0").predecessor().is_err());
        assert!(o("w").predecessor().is_err());
        assert_eq!(o("w^2+w").successor(), o("w^2+w+1"));
    }

    #[test]
    fn left_difference_cases() {
        assert_eq!(o("w^2").left_difference(&o("5")), Some(o("w^2")));
        assert_eq!(o("w*3+2").left_difference(&o("w")), Some(o("w*2+2")));
        assert_eq!(o("w*3+2").left_difference(&o("w*3+2")), Some(o("0")));
        assert_eq!(o("w").left_difference(&o("w+1")), None);
        assert_eq!(o("w^2+w").left_difference(&o("w^2")), Some(o("w")));
        assert_eq!(o("w^2+w").left_difference(&o("w^2+5")), Some(o("w")));
        assert_eq!(o("w^2").left_difference(&o("w^3")), None);
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let big = o("w*18446744073709551615");
        let sum = &big + &o("w*18446744073709551615");
        assert_eq!(sum.to_string(), "w*36893488147419103230");
        assert_eq!(o("36893488147419103230").to_u64(), None);
    }

    #[test]
    fn from_terms_rejects_bad_input() {
        assert!(matches!(
            Ordinal::from_terms([(o("1"), BigUint::one()), (o("1"), BigUint::one())]),
            Err(OrdinalError::NonCanonical { .. })
        ));
        assert_eq!(
            Ordinal::from_terms([(o("1"), BigUint::zero())]),
            Err(OrdinalError::ZeroCoefficient)
        );
    }
}

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::reals::{ApproxReal, Precision, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
    Unknown,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Zero => "0",
            Sign::Plus => "+",
            Sign::Unknown => "?",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    pub entries: Vec<Sign>,
    pub precision: Precision,
}

impl SignVector {
    pub fn is_resolved(&self) -> bool {
        !self.entries.contains(&Sign::Unknown)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.iter().try_for_each(|s| write!(f, "{s}"))
    }
}

fn exact_sign(q: &Rational) -> Sign {
    if q.is_positive() {
        Sign::Plus
    } else if q.is_negative() {
        Sign::Minus
    } else {
        Sign::Zero
    }
}

/// Signs of `family` at `x`: exact at rational points of exact polynomials,
/// otherwise read off enclosures at precision `p`.
pub fn sign_vector_at(family: &[MultiPoly], x: &[ApproxReal], p: Precision) -> Result<SignVector> {
    let exact: Option<Vec<Rational>> = x.iter().map(|c| c.as_exact().cloned()).collect();
    let entries = family
        .iter()
        .map(|f| {
            if f.level() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: f.level(),
                    got: x.len(),
                });
            }
            if let Some(v) = exact.as_ref().and_then(|q| f.eval_rational(q)) {
                return Ok(exact_sign(&v));
            }
            let e = f.eval_point(x)?.enclosure_at(p);
            Ok(if e.is_positive() {
                Sign::Plus
            } else if e.is_negative() {
                Sign::Minus
            } else {
                Sign::Unknown
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignVector {
        entries,
        precision: p,
    })
}

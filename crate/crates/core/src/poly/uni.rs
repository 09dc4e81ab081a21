use std::fmt;

use num_traits::Zero;

use crate::reals::{format_rational, ApproxReal, Interval, Precision, Rational};

/// Univariate polynomial `Σ_{i ≤ d} c_i x^i` with degree bound `d`.
#[derive(Clone)]
pub struct UniPoly {
    coeffs: Vec<ApproxReal>,
}

impl UniPoly {
    /// Coefficients in increasing degree; the list must be nonempty.
    pub fn new(coeffs: Vec<ApproxReal>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        UniPoly { coeffs }
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        Self::new(
            coeffs
                .iter()
                .cloned()
                .map(ApproxReal::from_rational)
                .collect(),
        )
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ApproxReal::from_int(c)).collect())
    }

    pub fn zero(degree_bound: u32) -> Self {
        Self::new(vec![ApproxReal::zero(); degree_bound as usize + 1])
    }

    pub fn degree_bound(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[ApproxReal] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ApproxReal {
        self.coeffs.get(i).cloned().unwrap_or_else(ApproxReal::zero)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    pub fn exact_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_exact().cloned()).collect()
    }

    pub fn eval(&self, x: &ApproxReal) -> ApproxReal {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.as_exact()?;
        }
        Some(acc)
    }

    /// Enclosure of the image of `x` with coefficients taken at precision `p`.
    pub fn eval_interval(&self, x: &Interval, p: Precision) -> Interval {
        let civ: Vec<Interval> = self.coeffs.iter().map(|c| c.enclosure_at(p)).collect();
        super::multi::horner_and_power_form(&civ, x)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
                .collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> UniPoly {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let mut out = vec![ApproxReal::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, r: &Rational) -> UniPoly {
        Self::new(self.coeffs.iter().map(|c| c.scale(r)).collect())
    }

    /// Drops syntactically zero leading coefficients.
    pub fn trim_exact(&self) -> UniPoly {
        let mut v = self.coeffs.clone();
        while v.len() > 1 && v.last().unwrap().is_exact_zero() {
            v.pop();
        }
        Self::new(v)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| match c.as_exact() {
                Some(q) => format_rational(q),
                None => format!("{c:?}"),
            })
            .collect();
        write!(f, "UniPoly[{}]", parts.join(", "))
    }
}

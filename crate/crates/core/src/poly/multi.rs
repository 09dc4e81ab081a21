use std::fmt;

use num_traits::{One, Zero};

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::reals::{format_rational, ApproxReal, Interval, Precision, Rational};

/// Polynomial in `x_1, …, x_n` stored densely as a polynomial in the top
/// variable `x_n` whose coefficients are polynomials in `x_1, …, x_{n-1}`.
///
/// Variables are indexed from 0, so the top variable has index `level - 1`.
/// The number of stored top-level coefficients minus one is the degree bound;
/// leading coefficients may well represent zero.
#[derive(Clone)]
pub struct MultiPoly {
    level: usize,
    body: Body,
}

#[derive(Clone)]
enum Body {
    Const(ApproxReal),
    Coeffs(Vec<MultiPoly>),
}

impl MultiPoly {
    pub fn constant(level: usize, c: ApproxReal) -> Self {
        if level == 0 {
            MultiPoly {
                level,
                body: Body::Const(c),
            }
        } else {
            MultiPoly {
                level,
                body: Body::Coeffs(vec![Self::constant(level - 1, c)]),
            }
        }
    }

    pub fn from_rational(level: usize, q: Rational) -> Self {
        Self::constant(level, ApproxReal::from_rational(q))
    }

    pub fn zero(level: usize) -> Self {
        Self::constant(level, ApproxReal::zero())
    }

    pub fn one(level: usize) -> Self {
        Self::constant(level, ApproxReal::one())
    }

    /// The zero polynomial carrying degree bound `bounds[j]` in variable `j`.
    pub fn zero_with_bounds(bounds: &[u32]) -> Self {
        match bounds.split_last() {
            None => Self::zero(0),
            Some((&top, rest)) => {
                let c = Self::zero_with_bounds(rest);
                Self::from_coeffs(bounds.len(), vec![c; top as usize + 1])
            }
        }
    }

    /// The variable with index `j` as a polynomial at `level`.
    pub fn var(level: usize, j: usize) -> Self {
        assert!(
            j < level,
            "variable index {j} out of range for level {level}"
        );
        if j == level - 1 {
            Self::from_coeffs(level, vec![Self::zero(level - 1), Self::one(level - 1)])
        } else {
            Self::from_coeffs(level, vec![Self::var(level - 1, j)])
        }
    }

    /// Builds `Σ coeffs[i] x_n^i`; every coefficient must have level `level - 1`.
    pub fn from_coeffs(level: usize, coeffs: Vec<MultiPoly>) -> Self {
        assert!(level >= 1 && !coeffs.is_empty());
        debug_assert!(coeffs.iter().all(|c| c.level == level - 1));
        MultiPoly {
            level,
            body: Body::Coeffs(coeffs),
        }
    }

    pub fn from_unipoly(f: &UniPoly) -> Self {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| Self::constant(0, c.clone()))
            .collect();
        Self::from_coeffs(1, coeffs)
    }

    /// Builds a polynomial from `(coefficient, exponents)` terms; `bounds`
    /// can raise (never lower) the per-variable degree bounds.
    pub fn from_terms(
        level: usize,
        terms: &[(ApproxReal, Vec<u32>)],
        bounds: Option<&[u32]>,
    ) -> Result<Self> {
        let mut b = vec![0u32; level];
        for (_, pow) in terms {
            if pow.len() != level {
                return Err(Error::DimensionMismatch {
                    expected: level,
                    got: pow.len(),
                });
            }
            for (bj, &e) in b.iter_mut().zip(pow) {
                *bj = (*bj).max(e);
            }
        }
        if let Some(extra) = bounds {
            if extra.len() != level {
                return Err(Error::DimensionMismatch {
                    expected: level,
                    got: extra.len(),
                });
            }
            for (bj, &e) in b.iter_mut().zip(extra) {
                *bj = (*bj).max(e);
            }
        }
        let mut f = Self::zero_with_bounds(&b);
        for (c, pow) in terms {
            f.add_term(c, pow);
        }
        Ok(f)
    }

    fn add_term(&mut self, c: &ApproxReal, pow: &[u32]) {
        match &mut self.body {
            Body::Const(v) => *v = v.add(c),
            Body::Coeffs(cs) => {
                let (&e, rest) = pow.split_last().expect("exponent vector matches level");
                cs[e as usize].add_term(c, rest);
            }
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Degree bound in the top variable (0 at level 0).
    pub fn degree_bound(&self) -> u32 {
        match &self.body {
            Body::Const(_) => 0,
            Body::Coeffs(cs) => cs.len() as u32 - 1,
        }
    }

    /// Degree bound in each variable.
    pub fn degree_bounds(&self) -> Vec<u32> {
        let mut out = vec![0; self.level];
        self.collect_bounds(&mut out);
        out
    }

    fn collect_bounds(&self, out: &mut [u32]) {
        if let Body::Coeffs(cs) = &self.body {
            out[self.level - 1] = out[self.level - 1].max(cs.len() as u32 - 1);
            for c in cs {
                c.collect_bounds(out);
            }
        }
    }

    /// Bound on the total degree.
    pub fn total_degree_bound(&self) -> u32 {
        match &self.body {
            Body::Const(_) => 0,
            Body::Coeffs(cs) => cs
                .iter()
                .enumerate()
                .map(|(i, c)| i as u32 + c.total_degree_bound())
                .max()
                .unwrap_or(0),
        }
    }

    /// Top-variable coefficients (level ≥ 1).
    pub fn coeffs(&self) -> &[MultiPoly] {
        match &self.body {
            Body::Coeffs(cs) => cs,
            Body::Const(_) => panic!("level-0 polynomial has no coefficient list"),
        }
    }

    /// Coefficient of `x_n^k`, or the zero polynomial when `k` exceeds the bound.
    pub fn coeff(&self, k: usize) -> MultiPoly {
        self.coeffs()
            .get(k)
            .cloned()
            .unwrap_or_else(|| Self::zero(self.level - 1))
    }

    /// The value of a level-0 polynomial.
    pub fn as_constant(&self) -> Option<&ApproxReal> {
        match &self.body {
            Body::Const(c) => Some(c),
            Body::Coeffs(_) => None,
        }
    }

    /// `f(0, …, 0)`.
    pub fn constant_term(&self) -> ApproxReal {
        match &self.body {
            Body::Const(c) => c.clone(),
            Body::Coeffs(cs) => cs[0].constant_term(),
        }
    }

    /// True when every non-constant term is syntactically the exact zero.
    pub fn is_syntactically_constant(&self) -> bool {
        match &self.body {
            Body::Const(_) => true,
            Body::Coeffs(cs) => {
                cs[0].is_syntactically_constant() && cs[1..].iter().all(|c| c.is_exact_zero())
            }
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        match &self.body {
            Body::Const(c) => c.is_exact_zero(),
            Body::Coeffs(cs) => cs.iter().all(|c| c.is_exact_zero()),
        }
    }

    /// True when every coefficient is an exact rational.
    pub fn is_exact(&self) -> bool {
        match &self.body {
            Body::Const(c) => c.is_exact(),
            Body::Coeffs(cs) => cs.iter().all(|c| c.is_exact()),
        }
    }

    /// Visits every coefficient with its exponent vector (exact zeros included).
    pub fn for_each_coeff(&self, f: &mut impl FnMut(&ApproxReal, &[u32])) {
        let mut pow = vec![0u32; self.level];
        self.walk(&mut pow, f);
    }

    fn walk(&self, pow: &mut Vec<u32>, f: &mut impl FnMut(&ApproxReal, &[u32])) {
        match &self.body {
            Body::Const(c) => f(c, pow),
            Body::Coeffs(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    pow[self.level - 1] = i as u32;
                    c.walk(pow, f);
                }
                pow[self.level - 1] = 0;
            }
        }
    }

    /// Terms whose coefficient is not syntactically zero.
    pub fn terms(&self) -> Vec<(ApproxReal, Vec<u32>)> {
        let mut out = Vec::new();
        self.for_each_coeff(&mut |c, pow| {
            if !c.is_exact_zero() {
                out.push((c.clone(), pow.to_vec()));
            }
        });
        out
    }

    pub fn num_coeffs(&self) -> usize {
        match &self.body {
            Body::Const(_) => 1,
            Body::Coeffs(cs) => cs.iter().map(|c| c.num_coeffs()).sum(),
        }
    }

    fn map_coeffs(&self, f: &impl Fn(&ApproxReal) -> ApproxReal) -> MultiPoly {
        match &self.body {
            Body::Const(c) => MultiPoly {
                level: 0,
                body: Body::Const(f(c)),
            },
            Body::Coeffs(cs) => {
                Self::from_coeffs(self.level, cs.iter().map(|c| c.map_coeffs(f)).collect())
            }
        }
    }

    pub fn neg(&self) -> MultiPoly {
        self.map_coeffs(&|c| c.neg())
    }

    pub fn scale(&self, r: &Rational) -> MultiPoly {
        self.map_coeffs(&|c| c.scale(r))
    }

    pub fn scale_real(&self, r: &ApproxReal) -> MultiPoly {
        self.map_coeffs(&|c| c.mul(r))
    }

    /// Sum; the degree bound is the larger of the operands' bounds.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(
            self.level, other.level,
            "adding polynomials of different levels"
        );
        match (&self.body, &other.body) {
            (Body::Const(a), Body::Const(b)) => MultiPoly {
                level: 0,
                body: Body::Const(a.add(b)),
            },
            (Body::Coeffs(a), Body::Coeffs(b)) => {
                let n = a.len().max(b.len());
                let cs = (0..n)
                    .map(|i| match (a.get(i), b.get(i)) {
                        (Some(x), Some(y)) => x.add(y),
                        (Some(x), None) => x.clone(),
                        (None, Some(y)) => y.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                Self::from_coeffs(self.level, cs)
            }
            _ => unreachable!("level mismatch"),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    /// Product; the degree bound is the sum of the operands' bounds.
    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(
            self.level, other.level,
            "multiplying polynomials of different levels"
        );
        match (&self.body, &other.body) {
            (Body::Const(a), Body::Const(b)) => MultiPoly {
                level: 0,
                body: Body::Const(a.mul(b)),
            },
            (Body::Coeffs(a), Body::Coeffs(b)) => {
                let mut cs: Vec<Option<MultiPoly>> = vec![None; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_exact_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if y.is_exact_zero() {
                            continue;
                        }
                        let t = x.mul(y);
                        cs[i + j] = Some(match cs[i + j].take() {
                            Some(acc) => acc.add(&t),
                            None => t,
                        });
                    }
                }
                // keep the exact shape of zero coefficients so bounds stay informative
                let zero = Self::zero(self.level - 1);
                Self::from_coeffs(
                    self.level,
                    cs.into_iter()
                        .map(|c| c.unwrap_or_else(|| zero.clone()))
                        .collect(),
                )
            }
            _ => unreachable!("level mismatch"),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = Self::one(self.level);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(x)` for a point of matching dimension.
    pub fn eval_point(&self, x: &[ApproxReal]) -> Result<ApproxReal> {
        if x.len() != self.level {
            return Err(Error::DimensionMismatch {
                expected: self.level,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[ApproxReal]) -> ApproxReal {
        match &self.body {
            Body::Const(c) => c.clone(),
            Body::Coeffs(cs) => {
                let (top, rest) = x.split_last().unwrap();
                let mut acc = cs.last().unwrap().eval_unchecked(rest);
                for c in cs.iter().rev().skip(1) {
                    acc = acc.mul(top).add(&c.eval_unchecked(rest));
                }
                acc
            }
        }
    }

    /// Exact value at a rational point, available when all coefficients are exact.
    pub fn eval_rational(&self, x: &[Rational]) -> Option<Rational> {
        match &self.body {
            Body::Const(c) => c.as_exact().cloned(),
            Body::Coeffs(cs) => {
                let (top, rest) = x.split_last()?;
                let mut acc = Rational::zero();
                for c in cs.iter().rev() {
                    acc = acc * top + c.eval_rational(rest)?;
                }
                Some(acc)
            }
        }
    }

    /// Interval enclosure of `{f(x) : x ∈ box}` using coefficient enclosures at precision `p`.
    pub fn eval_box(&self, bx: &[Interval], p: Precision) -> Result<Interval> {
        if bx.len() != self.level {
            return Err(Error::DimensionMismatch {
                expected: self.level,
                got: bx.len(),
            });
        }
        Ok(self.eval_box_unchecked(bx, p))
    }

    pub(crate) fn eval_box_unchecked(&self, bx: &[Interval], p: Precision) -> Interval {
        match &self.body {
            Body::Const(c) => c.enclosure_at(p),
            Body::Coeffs(cs) => {
                let (top, rest) = bx.split_last().unwrap();
                let civ: Vec<Interval> = cs.iter().map(|c| c.eval_box_unchecked(rest, p)).collect();
                horner_and_power_form(&civ, top)
            }
        }
    }

    /// Formal derivative in the top variable; the degree bound drops by one.
    pub fn derivative(&self) -> Result<MultiPoly> {
        match &self.body {
            Body::Const(_) => Err(Error::Invalid("derivative of a level-0 polynomial".into())),
            Body::Coeffs(cs) => {
                if cs.len() == 1 {
                    return Ok(Self::from_coeffs(
                        self.level,
                        vec![Self::zero(self.level - 1)],
                    ));
                }
                let d = cs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
                    .collect();
                Ok(Self::from_coeffs(self.level, d))
            }
        }
    }

    /// Formal partial derivative with respect to variable `j`.
    pub fn derivative_wrt(&self, j: usize) -> Result<MultiPoly> {
        if j >= self.level {
            return Err(Error::OutOfRange(format!(
                "variable {j} at level {}",
                self.level
            )));
        }
        if j == self.level - 1 {
            return self.derivative();
        }
        let cs = self
            .coeffs()
            .iter()
            .map(|c| c.derivative_wrt(j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(self.level, cs))
    }

    /// Truncation to the terms of top-variable degree at most `k`.
    pub fn reductum(&self, k: u32) -> Result<MultiPoly> {
        if self.level == 0 {
            return Err(Error::Invalid("reductum of a level-0 polynomial".into()));
        }
        if k > self.degree_bound() {
            return Err(Error::OutOfRange(format!(
                "reductum index {k} exceeds degree bound {}",
                self.degree_bound()
            )));
        }
        Ok(Self::from_coeffs(
            self.level,
            self.coeffs()[..=k as usize].to_vec(),
        ))
    }

    /// Substitutes `a` for `x_1, …, x_{n-1}`, leaving a polynomial in `x_n`.
    pub fn substitute_prefix(&self, a: &[ApproxReal]) -> Result<UniPoly> {
        if self.level == 0 || a.len() != self.level - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.level.saturating_sub(1),
                got: a.len(),
            });
        }
        Ok(UniPoly::new(
            self.coeffs().iter().map(|c| c.eval_unchecked(a)).collect(),
        ))
    }

    /// Substitutes polynomials (all of one common level) for the variables.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.level {
            return Err(Error::DimensionMismatch {
                expected: self.level,
                got: images.len(),
            });
        }
        let out_level = images.first().map_or(0, |g| g.level);
        if images.iter().any(|g| g.level != out_level) {
            return Err(Error::Invalid(
                "composition images at different levels".into(),
            ));
        }
        Ok(self.compose_unchecked(images, out_level))
    }

    fn compose_unchecked(&self, images: &[MultiPoly], out_level: usize) -> MultiPoly {
        match &self.body {
            Body::Const(c) => Self::constant(out_level, c.clone()),
            Body::Coeffs(cs) => {
                let (top, rest) = images.split_last().unwrap();
                let mut acc = cs.last().unwrap().compose_unchecked(rest, out_level);
                for c in cs.iter().rev().skip(1) {
                    acc = acc.mul(top).add(&c.compose_unchecked(rest, out_level));
                }
                acc
            }
        }
    }

    /// Embeds into `level` variables, sending variable `j` to `targets[j]`.
    pub fn rename(&self, level: usize, targets: &[usize]) -> Result<MultiPoly> {
        let images: Vec<MultiPoly> = targets.iter().map(|&t| Self::var(level, t)).collect();
        if self.level == 0 {
            return Ok(Self::constant(level, self.constant_term()));
        }
        self.compose(&images)
    }

    /// Drops syntactically zero leading coefficients at every level.
    pub fn trim_exact(&self) -> MultiPoly {
        match &self.body {
            Body::Const(_) => self.clone(),
            Body::Coeffs(cs) => {
                let mut v: Vec<MultiPoly> = cs.iter().map(|c| c.trim_exact()).collect();
                while v.len() > 1 && v.last().unwrap().is_exact_zero() {
                    v.pop();
                }
                Self::from_coeffs(self.level, v)
            }
        }
    }

    /// Structural identity: equal exact coefficients or shared lazy ones.
    pub fn same_as(&self, other: &MultiPoly) -> bool {
        if self.level != other.level {
            return false;
        }
        match (&self.body, &other.body) {
            (Body::Const(a), Body::Const(b)) => match (a.as_exact(), b.as_exact()) {
                (Some(x), Some(y)) => x == y,
                _ => a.ptr_eq(b),
            },
            (Body::Coeffs(a), Body::Coeffs(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_as(y))
            }
            _ => false,
        }
    }

    /// For exact polynomials, the scalar multiple whose leading term (highest
    /// exponents, top variable first) is 1; other polynomials are returned as is.
    pub fn normalized(&self) -> MultiPoly {
        if !self.is_exact() || self.is_exact_zero() {
            return self.clone();
        }
        let mut lead: Option<(Vec<u32>, Rational)> = None;
        self.for_each_coeff(&mut |c, pow| {
            let q = c.as_exact().unwrap();
            if q.is_zero() {
                return;
            }
            let key: Vec<u32> = pow.iter().rev().copied().collect();
            if lead.as_ref().is_none_or(|(k, _)| key > *k) {
                lead = Some((key, q.clone()));
            }
        });
        let (_, c) = lead.unwrap();
        if c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }
}

/// Encloses `Σ c_i x^i` over `x ∈ X` by intersecting the Horner and power-sum forms.
pub(crate) fn horner_and_power_form(c: &[Interval], x: &Interval) -> Interval {
    let mut h = c.last().unwrap().clone();
    for ci in c.iter().rev().skip(1) {
        h = &(&h * x) + ci;
    }
    if c.len() <= 2 {
        return h;
    }
    let mut s = c[0].clone();
    for (i, ci) in c.iter().enumerate().skip(1) {
        s = &s + &(ci * &x.powi(i as u32));
    }
    h.intersect(&s).unwrap_or(h)
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(
                f,
                "0[level {}, bounds {:?}]",
                self.level,
                self.degree_bounds()
            );
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(c, pow)| {
                let coef = match c.as_exact() {
                    Some(q) => format_rational(q),
                    None => format!("{c:?}"),
                };
                let mono: Vec<String> = pow
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| {
                        if e == 1 {
                            format!("x{}", j + 1)
                        } else {
                            format!("x{}^{e}", j + 1)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    coef
                } else {
                    format!("{coef}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::rational::{ceil_log2, pow2_neg, Rational};
use super::truth::{Truth, TruthStream};

/// Bits of precision: an enclosure at precision `p` has width at most `2^-p`.
pub type Precision = u32;

/// How many stages past the requested precision `merge` waits for its
/// truth stream before giving up and returning the (too wide) hull.
const MERGE_STAGE_CAP: u64 = 4096;

type Refine = dyn Fn(Precision, Option<&Interval>) -> Interval + Send + Sync;

/// A real number given by nested rational enclosures of shrinking width.
///
/// `enclosure_at(p)` has width `<= 2^-p`, and enclosures are nested:
/// `enclosure_at(p + 1)` is contained in `enclosure_at(p)`. Lazily defined
/// reals memoize every enclosure they hand out, so repeated queries return
/// identical intervals.
#[derive(Clone)]
pub struct ApproxReal(Arc<Node>);

enum Node {
    Exact(Rational),
    Lazy(Lazy),
}

struct Lazy {
    refine: Box<Refine>,
    chain: Mutex<Chain>,
}

/// Enclosures for precisions `0..=known`, run-length encoded: `(p, iv)` holds
/// from precision `p` up to the start of the next run.
#[derive(Default)]
struct Chain {
    runs: Vec<(Precision, Interval)>,
    known: Precision,
}

impl Lazy {
    /// `enc(p) = refine(p) ∩ enc(p − 1)`, skipping the refinement whenever
    /// `enc(p − 1)` is already narrow enough. The result depends on `p` only,
    /// never on the order of earlier queries.
    fn enclosure_at(&self, p: Precision) -> Interval {
        let mut chain = self.chain.lock().unwrap_or_else(|e| e.into_inner());
        if chain.runs.is_empty() {
            let iv = (self.refine)(0, None);
            chain.runs.push((0, iv));
            chain.known = 0;
        }
        if p <= chain.known {
            let i = chain.runs.partition_point(|(s, _)| *s <= p) - 1;
            return chain.runs[i].1.clone();
        }
        for next in chain.known + 1..=p {
            let prev = &chain.runs.last().unwrap().1;
            if prev.width() > pow2_neg(next) {
                let raw = (self.refine)(next, Some(prev));
                let iv = raw.intersect(prev).unwrap_or(raw);
                chain.runs.push((next, iv));
            }
        }
        chain.known = p;
        chain.runs.last().unwrap().1.clone()
    }
}

impl ApproxReal {
    pub fn from_rational(q: Rational) -> Self {
        ApproxReal(Arc::new(Node::Exact(q)))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// A real defined by a refinement procedure.
    ///
    /// `refine(p, coarser)` must return an interval of width `<= 2^-p`
    /// containing the represented real; `coarser` is the closest
    /// already-known enclosure at lower precision, if any.
    pub fn from_fn(
        refine: impl Fn(Precision, Option<&Interval>) -> Interval + Send + Sync + 'static,
    ) -> Self {
        ApproxReal(Arc::new(Node::Lazy(Lazy {
            refine: Box::new(refine),
            chain: Mutex::new(Chain::default()),
        })))
    }

    /// The rational `q` seen only through measurements of accuracy `2^-p`:
    /// `enclosure_at(p) = [q - 2^-(p+1), q + 2^-(p+1)]`.
    pub fn blurred(q: Rational) -> Self {
        Self::from_fn(move |p, _| {
            let r = pow2_neg(p + 1);
            Interval::new(&q - &r, &q + &r)
        })
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match &*self.0 {
            Node::Exact(q) => Some(q),
            Node::Lazy(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }

    /// True when this value is syntactically the exact rational zero.
    pub fn is_exact_zero(&self) -> bool {
        self.as_exact().is_some_and(|q| q.is_zero())
    }

    pub fn is_exact_one(&self) -> bool {
        self.as_exact().is_some_and(|q| q.is_one())
    }

    pub fn ptr_eq(&self, other: &ApproxReal) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn enclosure_at(&self, p: Precision) -> Interval {
        match &*self.0 {
            Node::Exact(q) => Interval::point(q.clone()),
            Node::Lazy(l) => l.enclosure_at(p),
        }
    }

    /// Midpoint of the enclosure at precision `p`.
    pub fn approx(&self, p: Precision) -> Rational {
        match &*self.0 {
            Node::Exact(q) => q.clone(),
            Node::Lazy(l) => l.enclosure_at(p).mid(),
        }
    }

    pub fn neg(&self) -> ApproxReal {
        if let Some(q) = self.as_exact() {
            return Self::from_rational(-q);
        }
        let x = self.clone();
        Self::from_fn(move |p, _| -&x.enclosure_at(p))
    }

    pub fn add(&self, other: &ApproxReal) -> ApproxReal {
        match (self.as_exact(), other.as_exact()) {
            (Some(a), Some(b)) => Self::from_rational(a + b),
            (Some(a), _) if a.is_zero() => other.clone(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => {
                let (x, y) = (self.clone(), other.clone());
                Self::from_fn(move |p, _| {
                    (&x.enclosure_at(p + 2) + &y.enclosure_at(p + 2)).round_out(p + 2)
                })
            }
        }
    }

    pub fn sub(&self, other: &ApproxReal) -> ApproxReal {
        self.add(&other.neg())
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, r: &Rational) -> ApproxReal {
        if r.is_zero() {
            return Self::zero();
        }
        if r.is_one() {
            return self.clone();
        }
        if let Some(q) = self.as_exact() {
            return Self::from_rational(q * r);
        }
        let x = self.clone();
        let r = r.clone();
        let extra = ceil_log2(&r);
        Self::from_fn(move |p, _| x.enclosure_at(p + 2 + extra).scale(&r).round_out(p + 2))
    }

    pub fn mul(&self, other: &ApproxReal) -> ApproxReal {
        if let Some(a) = self.as_exact() {
            return other.scale(a);
        }
        if let Some(b) = other.as_exact() {
            return self.scale(b);
        }
        let (x, y) = (self.clone(), other.clone());
        Self::from_fn(move |p, _| {
            let m = x.enclosure_at(0).mag().max(y.enclosure_at(0).mag());
            let q = p + 3 + ceil_log2(&m);
            (&x.enclosure_at(q) * &y.enclosure_at(q)).round_out(p + 2)
        })
    }

    pub fn powi(&self, n: u32) -> ApproxReal {
        let mut acc = ApproxReal::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reciprocal, provided the value can be separated from zero at some
    /// precision `<= max_precision`.
    pub fn try_recip(&self, max_precision: Precision) -> Option<ApproxReal> {
        if let Some(q) = self.as_exact() {
            return (!q.is_zero()).then(|| Self::from_rational(q.recip()));
        }
        let t = (0..=max_precision).find(|&t| !self.enclosure_at(t).contains_zero())?;
        let m = self.enclosure_at(t).mig();
        let extra = ceil_log2(&(&m * &m).recip());
        let x = self.clone();
        Some(Self::from_fn(move |p, _| {
            let iv = x.enclosure_at((p + 2 + extra).max(t));
            Interval::spanning(iv.hi().recip(), iv.lo().recip()).round_out(p + 2)
        }))
    }

    /// Branches on a truth stream without deciding equality of the branches:
    /// follows `x` once `t` resolves `False`, `y` once it resolves `True`.
    ///
    /// If `t` never resolves then `x` and `y` must represent the same real;
    /// violating this yields enclosures wider than the precision contract.
    pub fn merge(t: TruthStream, x: &ApproxReal, y: &ApproxReal) -> ApproxReal {
        let (x, y) = (x.clone(), y.clone());
        Self::from_fn(move |p, _| {
            let bound = pow2_neg(p);
            let mut hull: Option<Interval> = None;
            for stage in p as u64..p as u64 + MERGE_STAGE_CAP {
                match t.at(stage) {
                    Truth::False => return x.enclosure_at(p),
                    Truth::True => return y.enclosure_at(p),
                    Truth::Unknown => {
                        let h = hull.get_or_insert_with(|| {
                            x.enclosure_at(p + 1).hull(&y.enclosure_at(p + 1))
                        });
                        if h.width() <= bound {
                            return h.clone();
                        }
                    }
                }
            }
            log::warn!("merge: truth stream unresolved after {MERGE_STAGE_CAP} stages with separated branches");
            hull.unwrap_or_else(|| x.enclosure_at(p + 1).hull(&y.enclosure_at(p + 1)))
        })
    }

    /// The value clamped into `[0, 1]`.
    pub fn clamp_unit(&self) -> ApproxReal {
        fn clamp(q: &Rational) -> Rational {
            if q.is_negative() {
                Rational::zero()
            } else if q > &Rational::one() {
                Rational::one()
            } else {
                q.clone()
            }
        }
        if let Some(q) = self.as_exact() {
            return Self::from_rational(clamp(q));
        }
        let x = self.clone();
        Self::from_fn(move |p, _| {
            let e = x.enclosure_at(p);
            Interval::new(clamp(e.lo()), clamp(e.hi()))
        })
    }

    /// Sign of the value as seen at precision `p`.
    pub fn sign_at(&self, p: Precision) -> Truth {
        let iv = self.enclosure_at(p);
        if iv.is_positive() {
            Truth::True
        } else if iv.is_negative() {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    /// Certified comparison: `Some(ordering)` when the enclosures at `p` separate.
    pub fn cmp_at(&self, other: &ApproxReal, p: Precision) -> Option<std::cmp::Ordering> {
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return Some(a.cmp(b));
        }
        let a = self.enclosure_at(p);
        let b = other.enclosure_at(p);
        if a.hi() < b.lo() {
            Some(std::cmp::Ordering::Less)
        } else if b.hi() < a.lo() {
            Some(std::cmp::Ordering::Greater)
        } else {
            None
        }
    }

    pub fn is_certified_positive(&self, p: Precision) -> bool {
        self.sign_at(p) == Truth::True
    }

    pub fn abs_bound(&self) -> Rational {
        self.enclosure_at(0).mag()
    }

    /// True when the value is exact and the rational is non-negative, or the
    /// enclosure at `p` is non-negative.
    pub fn certified_nonnegative(&self, p: Precision) -> bool {
        match self.as_exact() {
            Some(q) => !q.is_negative(),
            None => !self.enclosure_at(p).lo().is_negative(),
        }
    }
}

impl fmt::Debug for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Exact(q) => write!(f, "{}", super::rational::format_rational(q)),
            Node::Lazy(l) => write!(f, "~{:?}", l.enclosure_at(16)),
        }
    }
}

impl From<Rational> for ApproxReal {
    fn from(q: Rational) -> Self {
        ApproxReal::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl std::ops::$tr for &ApproxReal {
            type Output = ApproxReal;
            fn $m(self, o: &ApproxReal) -> ApproxReal {
                ApproxReal::$imp(self, o)
            }
        }
        impl std::ops::$tr for ApproxReal {
            type Output = ApproxReal;
            fn $m(self, o: ApproxReal) -> ApproxReal {
                ApproxReal::$imp(&self, &o)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        ApproxReal::neg(self)
    }
}

impl std::ops::Neg for ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        ApproxReal::neg(&self)
    }
}

/// Sign of `x` at precision `p`; `True` means strictly positive.
pub fn sign_at(x: &ApproxReal, p: Precision) -> Truth {
    x.sign_at(p)
}

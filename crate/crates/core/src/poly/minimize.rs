use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_traits::{One, Signed, Zero};

use super::multi::MultiPoly;
use crate::error::{Error, Result};
use crate::reals::rational::{ceil_log2, pow2_neg};
use crate::reals::{ApproxReal, Interval, Precision, Rational, Truth, TruthStream};

/// Boxes processed before `hypercube_min_abs` gives up on the width target.
const MAX_BOXES: usize = 400_000;

struct Cell {
    lower: Rational,
    center_abs: Rational,
    seq: u64,
    bx: Vec<Interval>,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        (&self.lower, &self.center_abs, self.seq).cmp(&(&o.lower, &o.center_abs, o.seq))
    }
}

struct Search<'a> {
    f: &'a MultiPoly,
    grads: Vec<MultiPoly>,
    q: Precision,
    upper: Option<Rational>,
    saw_pos: bool,
    saw_neg: bool,
}

impl Search<'_> {
    /// Enclosure of `f` at a rational point; updates the upper bound and sign record.
    fn probe(&mut self, x: &[Rational]) -> Interval {
        let pt: Vec<Interval> = x.iter().cloned().map(Interval::point).collect();
        let v = self.f.eval_box_unchecked(&pt, self.q);
        if v.is_positive() {
            self.saw_pos = true;
        } else if v.is_negative() {
            self.saw_neg = true;
        }
        let hi = v.mag();
        if self.upper.as_ref().is_none_or(|u| &hi < u) {
            self.upper = Some(hi);
        }
        v
    }

    fn sign_change(&self) -> bool {
        self.saw_pos && self.saw_neg
    }

    /// Lower bound of `|f|` over a box, and `|f|` at its center.
    fn bound(&mut self, bx: &[Interval]) -> (Rational, Rational) {
        let c: Vec<Rational> = bx.iter().map(|i| i.mid()).collect();
        let fc = self.probe(&c);
        let mut range = self.f.eval_box_unchecked(bx, self.q);
        let mut centered = fc.clone();
        for (j, g) in self.grads.iter().enumerate() {
            let d = g.eval_box_unchecked(bx, self.q);
            centered = &centered + &(&d * &bx[j].shift(&-c[j].clone()));
        }
        if let Some(r) = range.intersect(&centered) {
            range = r;
        }
        (range.mig(), fc.mag())
    }
}

/// Encloses `min { |f(x)| : x ∈ [0,1]^n }` in an interval of width at most `2^-p`.
///
/// Best-first branch and bound: the open box with the smallest certified lower
/// bound is split along its widest side, while point evaluations at box centers
/// and cube corners lower the upper bound. A certified sign change pins the
/// minimum at exactly 0.
pub fn hypercube_min_abs(f: &MultiPoly, p: Precision) -> Interval {
    let n = f.level();
    let q = p + 4 + ceil_log2(&Rational::from_integer((f.num_coeffs() as i64).into()));
    if n == 0 {
        return f.eval_box_unchecked(&[], p).abs();
    }
    let grads = (0..n)
        .map(|j| f.derivative_wrt(j).expect("index below level"))
        .collect();
    let mut s = Search {
        f,
        grads,
        q,
        upper: None,
        saw_pos: false,
        saw_neg: false,
    };
    if n <= 12 {
        for mask in 0u32..(1 << n) {
            let corner: Vec<Rational> = (0..n)
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            s.probe(&corner);
        }
    }
    let zero_pinned = Interval::zero();
    let target = pow2_neg(p);
    let root = vec![Interval::unit(); n];
    let (lower, center_abs) = s.bound(&root);
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Reverse(Cell {
        lower,
        center_abs,
        seq,
        bx: root,
    }));
    let mut processed = 0usize;
    loop {
        if s.sign_change() {
            return zero_pinned;
        }
        let upper = s.upper.clone().expect("at least one point evaluated");
        let Some(Reverse(cell)) = heap.pop() else {
            return Interval::point(upper);
        };
        if cell.lower >= upper {
            return Interval::point(upper);
        }
        if &upper - &cell.lower <= target {
            return Interval::new(cell.lower, upper);
        }
        processed += 1;
        if processed > MAX_BOXES {
            log::warn!("hypercube_min_abs: box limit reached at precision {p}");
            return Interval::new(cell.lower, upper);
        }
        let widest = (0..n)
            .max_by(|&a, &b| cell.bx[a].width().cmp(&cell.bx[b].width()).then(b.cmp(&a)))
            .unwrap();
        let (l, r) = cell.bx[widest].bisect();
        for half in [l, r] {
            let mut bx = cell.bx.clone();
            bx[widest] = half;
            let (lower, center_abs) = s.bound(&bx);
            seq += 1;
            if s.upper.as_ref().is_some_and(|u| &lower <= u) {
                heap.push(Reverse(Cell {
                    lower,
                    center_abs,
                    seq,
                    bx,
                }));
            }
        }
    }
}

/// `min |f|` over the unit cube as a lazily refined real.
pub fn min_abs_real(f: &MultiPoly) -> ApproxReal {
    let f = f.clone();
    ApproxReal::from_fn(move |p, _| hypercube_min_abs(&f, p))
}

/// Precision of the initial attempt to pin the minimum exactly.
const PROBE_PRECISION: Precision = 24;

/// Shifts `f` by `c̄ = ±min|f|` (sign of `f(0,…,0)`) so that the result has a
/// zero in the unit cube; when `f` already has one, the result is `f` itself.
///
/// If the minimum is pinned to an exact rational at a moderate precision the
/// shift is exact; otherwise `c̄` is a merge on the sign of `f(0,…,0)`.
pub fn make_zero(f: &MultiPoly) -> Result<MultiPoly> {
    let n = f.level();
    if n == 0 {
        return Err(Error::Invalid(
            "make_zero needs at least one variable".into(),
        ));
    }
    if f.is_exact() && has_grid_sign_change(f) {
        return Ok(f.clone());
    }
    let probe = hypercube_min_abs(f, PROBE_PRECISION);
    let f0 = f.constant_term();
    if probe.is_point() {
        let v = probe.lo().clone();
        if v.is_zero() {
            return Ok(f.clone());
        }
        // |f(0)| ≥ v > 0, so the sign of f(0) is decidable
        let shift = match (1..)
            .map(|s| f0.sign_at(s))
            .find(|t| t.is_resolved())
            .unwrap()
        {
            Truth::True => v,
            _ => -v,
        };
        return Ok(f.sub(&MultiPoly::from_rational(n, shift)));
    }
    let c = min_abs_real(f);
    let sign = TruthStream::new(move |s| f0.sign_at(s.min(u32::MAX as u64) as u32));
    let shift = ApproxReal::merge(sign, &c.neg(), &c);
    Ok(f.sub(&MultiPoly::constant(n, shift)))
}

/// Looks for a certified sign change of an exact polynomial on the dyadic grids
/// of spacing 1/2, 1/4, 1/8 and 1/16, within a fixed evaluation budget.
fn has_grid_sign_change(f: &MultiPoly) -> bool {
    let n = f.level();
    let (mut pos, mut neg) = (false, false);
    for k in 1u32..=4 {
        let side = (1u64 << k) + 1;
        let Some(count) = side.checked_pow(n as u32).filter(|&c| c <= 6000) else {
            break;
        };
        let den = Rational::from_integer((1i64 << k).into());
        for idx in 0..count {
            let mut rem = idx;
            let x: Vec<Rational> = (0..n)
                .map(|_| {
                    let i = rem % side;
                    rem /= side;
                    Rational::from_integer((i as i64).into()) / &den
                })
                .collect();
            match f.eval_rational(&x) {
                Some(v) if v.is_zero() => return true,
                Some(v) if v.is_positive() => pos = true,
                Some(_) => neg = true,
                None => return false,
            }
            if pos && neg {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational::{int, rat};

    fn x() -> MultiPoly {
        MultiPoly::var(1, 0)
    }

    #[test]
    fn minimum_examples() {
        let f = x().mul(&x()).add(&MultiPoly::one(1));
        let m = hypercube_min_abs(&f, 20);
        assert!(m.contains(&int(1)) && m.width() <= pow2_neg(20));
        let g = x().sub(&MultiPoly::from_rational(1, rat(1, 2))).pow(2);
        assert!(hypercube_min_abs(&g, 20).contains(&int(0)));
        let h = x().add(&MultiPoly::one(1));
        assert!(hypercube_min_abs(&h, 20).contains(&int(1)));
    }

    #[test]
    fn irrational_minimizer() {
        // min of (x - 1/3)^2 + 1/7 is 1/7 at an interior non-dyadic point
        let f = x()
            .sub(&MultiPoly::from_rational(1, rat(1, 3)))
            .pow(2)
            .add(&MultiPoly::from_rational(1, rat(1, 7)));
        let m = hypercube_min_abs(&f, 30);
        assert!(m.contains(&rat(1, 7)) && m.width() <= pow2_neg(30));
    }

    #[test]
    fn make_zero_examples() {
        let f = x().mul(&x()).add(&MultiPoly::one(1));
        let g = make_zero(&f).unwrap();
        assert_eq!(g.eval_rational(&[rat(1, 3)]), Some(rat(1, 9)));
        let lin = x().sub(&MultiPoly::from_rational(1, rat(1, 2)));
        assert!(make_zero(&lin).unwrap().same_as(&lin));
        let g = make_zero(&f.neg()).unwrap();
        assert_eq!(g.eval_rational(&[rat(1, 2)]), Some(rat(-1, 4)));
    }

    #[test]
    fn lazy_shift_still_has_a_zero() {
        let c = ApproxReal::blurred(rat(1, 3));
        let f = x().mul(&x()).add(&MultiPoly::constant(1, c));
        let g = make_zero(&f).unwrap();
        let m = hypercube_min_abs(&g, 15);
        assert!(m.lo() <= &pow2_neg(15));
        assert!(g
            .eval_point(&[ApproxReal::from_rational(rat(1, 2))])
            .unwrap()
            .enclosure_at(20)
            .contains(&rat(1, 4)));
    }
}

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::exact::{self, QPoly};
use crate::poly::UniPoly;
use crate::reals::rational::{pow2_neg, rat, simplest_between};
use crate::reals::{ApproxReal, Interval, Precision, Rational, Truth};

/// Stages beyond this precision are scanned at this precision.
pub const WITNESS_PRECISION_CAP: u64 = 1024;

/// Boxes examined by one subdivision run before it stops refining.
const MAX_SUBDIVISION_BOXES: usize = 200_000;

/// Smallest stage `t ≤ stage` at which some coefficient enclosure (at
/// precision `t`) excludes 0, together with the highest such coefficient index.
pub fn nonzero_witness_at(f: &UniPoly, stage: u64) -> Option<(usize, u64)> {
    let certified = |t: u64| -> Option<usize> {
        let t = t.min(WITNESS_PRECISION_CAP) as Precision;
        f.coeffs()
            .iter()
            .rposition(|c| !c.is_exact_zero() && !c.enclosure_at(t).contains_zero())
    };
    let top = stage.min(WITNESS_PRECISION_CAP);
    certified(top)?;
    let (mut lo, mut hi) = (0u64, top);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if certified(mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    certified(lo).map(|i| (i, lo))
}

/// Index of a coefficient certified nonzero by `stage`, if any.
///
/// The answer is the highest such index at the smallest certifying stage, so
/// once present it stays present and equal at every later stage.
pub fn nonzero_witness(f: &UniPoly, stage: u64) -> Option<usize> {
    nonzero_witness_at(f, stage).map(|(i, _)| i)
}

/// A point that may be a root of a univariate polynomial.
#[derive(Clone, Debug)]
pub struct RootCandidate {
    pub point: ApproxReal,
    /// The point is a root (isolated by a certified sign change or found exactly).
    pub certified: bool,
}

/// Points in `[0,1]` among which every root of `f` in `[0,1]` occurs to within
/// `2^-p`; `f` must not be the zero polynomial.
pub fn real_root_candidates(f: &UniPoly, _witness: usize, p: Precision) -> Vec<ApproxReal> {
    root_candidates(f, p).into_iter().map(|c| c.point).collect()
}

/// Candidates sorted by position, at most `3^d` of them.
pub fn root_candidates(f: &UniPoly, p: Precision) -> Vec<RootCandidate> {
    let mut out = match f.exact_coeffs() {
        Some(c) => exact_candidates(&c),
        None => lazy_candidates(f, p),
    };
    let cap = 3usize.saturating_pow(f.degree_bound()).max(1);
    if out.len() > cap {
        // keep certified roots first, then the remaining points in order
        let mut keep: Vec<bool> = out.iter().map(|c| c.certified).collect();
        let mut budget = cap.saturating_sub(keep.iter().filter(|&&k| k).count());
        for k in keep.iter_mut() {
            if !*k && budget > 0 {
                *k = true;
                budget -= 1;
            }
        }
        let mut it = keep.into_iter();
        out.retain(|_| it.next().unwrap());
        out.truncate(cap);
    }
    out
}

fn exact_candidates(c: &[Rational]) -> Vec<RootCandidate> {
    let f = exact::trim(c.to_vec());
    if exact::degree(&f) == 0 {
        return Vec::new();
    }
    let s = exact::squarefree_part(&f);
    let lc = exact::integer_leading_coefficient(&s);
    isolate_exact(&s)
        .into_iter()
        .map(|piece| match piece {
            Piece::Root(r) => RootCandidate {
                point: ApproxReal::from_rational(r),
                certified: true,
            },
            Piece::Bracket(l, r) => RootCandidate {
                point: bracket_root(&s, l, r, &lc),
                certified: true,
            },
        })
        .collect()
}

enum Piece {
    Root(Rational),
    Bracket(Rational, Rational),
}

/// Isolates the roots in `[0,1]` of a squarefree exact polynomial, in increasing order.
fn isolate_exact(s: &QPoly) -> Vec<Piece> {
    let ds = exact::derivative(s);
    let mut out = Vec::new();
    let zero = Rational::zero();
    let one = Rational::one();
    if exact::eval(s, &zero).is_zero() {
        out.push(Piece::Root(zero.clone()));
    }
    let mut stack = vec![(zero, one.clone())];
    let mut found = Vec::new();
    while let Some((l, r)) = stack.pop() {
        let iv = Interval::new(l.clone(), r.clone());
        if !range(s, &iv).contains_zero() {
            continue;
        }
        let (fl, fr) = (exact::eval(s, &l), exact::eval(s, &r));
        if !range(&ds, &iv).contains_zero() {
            if fl.is_positive() && fr.is_negative() || fl.is_negative() && fr.is_positive() {
                found.push(Piece::Bracket(l, r));
            }
            continue;
        }
        let m = iv.mid();
        if exact::eval(s, &m).is_zero() {
            found.push(Piece::Root(m.clone()));
        }
        // right half first so pops come out left to right
        stack.push((m.clone(), r));
        stack.push((l, m));
    }
    out.extend(found);
    if exact::eval(s, &one).is_zero() {
        out.push(Piece::Root(one));
    }
    out.sort_by(|a, b| piece_key(a).cmp(piece_key(b)));
    out
}

fn piece_key(p: &Piece) -> &Rational {
    match p {
        Piece::Root(r) => r,
        Piece::Bracket(l, _) => l,
    }
}

fn range(f: &[Rational], x: &Interval) -> Interval {
    let c: Vec<Interval> = f.iter().cloned().map(Interval::point).collect();
    crate::poly::horner_and_power_form(&c, x)
}

fn sign(q: &Rational) -> i8 {
    crate::reals::rational::signum(q)
}

/// The unique root of `s` in `(l, r)`: exact when rational, otherwise a lazily bisected real.
///
/// A rational root of an integer polynomial has a denominator dividing the
/// leading coefficient `L`, and two such rationals differ by at least `1/L²`,
/// so once the bracket is narrower than that the simplest rational in it is
/// the only possible rational root.
fn bracket_root(s: &QPoly, mut l: Rational, mut r: Rational, lc: &BigInt) -> ApproxReal {
    let sl = sign(&exact::eval(s, &l));
    let gap = Rational::new(BigInt::one(), lc * lc);
    while &r - &l >= gap {
        let m = (&l + &r) / Rational::from_integer(2.into());
        let sm = sign(&exact::eval(s, &m));
        if sm == 0 {
            return ApproxReal::from_rational(m);
        }
        if sm == sl {
            l = m;
        } else {
            r = m;
        }
    }
    let q = simplest_between(&l, &r);
    if exact::eval(s, &q).is_zero() {
        return ApproxReal::from_rational(q);
    }
    let s = s.clone();
    ApproxReal::from_fn(move |p, hint| {
        let (mut a, mut b) = clip(&l, &r, hint);
        let target = pow2_neg(p);
        while &b - &a > target {
            let m = (&a + &b) / Rational::from_integer(2.into());
            let sm = sign(&exact::eval(&s, &m));
            if sm == 0 {
                return Interval::point(m);
            }
            if sm == sl {
                a = m;
            } else {
                b = m;
            }
        }
        Interval::new(a, b)
    })
}

fn clip(l: &Rational, r: &Rational, hint: Option<&Interval>) -> (Rational, Rational) {
    match hint {
        Some(h) => (
            if h.lo() > l {
                h.lo().clone()
            } else {
                l.clone()
            },
            if h.hi() < r {
                h.hi().clone()
            } else {
                r.clone()
            },
        ),
        None => (l.clone(), r.clone()),
    }
}

/// Certified sign of `f(x)` with coefficients at precision `t`.
fn sign_at_point(f: &UniPoly, x: &Rational, t: Precision) -> Truth {
    let v = f.eval_interval(&Interval::point(x.clone()), t);
    if v.is_positive() {
        Truth::True
    } else if v.is_negative() {
        Truth::False
    } else {
        Truth::Unknown
    }
}

/// Finds `a ≤ 0` and `b ≥ 1` at which `f` is certifiably nonzero.
fn outer_bounds(f: &UniPoly) -> Option<(Rational, Rational)> {
    let find = |start: i64, step: i64| -> Option<Rational> {
        for round in 0u32..48 {
            for j in 0..=round {
                let x = rat(start + step * j as i64, 2);
                let t = 8 * (round - j) + 8;
                if sign_at_point(f, &x, t).is_resolved() {
                    return Some(x);
                }
            }
        }
        None
    };
    Some((find(0, -1)?, find(2, 1)?))
}

fn lazy_candidates(f: &UniPoly, p: Precision) -> Vec<RootCandidate> {
    let d = f.degree_bound().max(1);
    let q = (p * d + 16).min(2048);
    let Some((a, b)) = outer_bounds(f) else {
        log::warn!("root candidates: no certified nonzero value near the unit interval");
        return Vec::new();
    };
    let df = f.derivative();
    let min_width = pow2_neg(p + 1);
    let mut stack = vec![Interval::new(a, b)];
    let mut isolated: Vec<(Interval, Truth)> = Vec::new();
    let mut leftovers: Vec<Interval> = Vec::new();
    let mut boxes = 0usize;
    while let Some(iv) = stack.pop() {
        boxes += 1;
        if !f.eval_interval(&iv, q).contains_zero() {
            continue;
        }
        if iv.width() <= min_width || boxes > MAX_SUBDIVISION_BOXES {
            leftovers.push(iv);
            continue;
        }
        if !df.eval_interval(&iv, q).contains_zero() {
            let sl = sign_at_point(f, iv.lo(), q);
            let sr = sign_at_point(f, iv.hi(), q);
            if sl.is_resolved() && sr.is_resolved() {
                if sl != sr {
                    isolated.push((iv, sl));
                }
                continue;
            }
        }
        let (l, r) = iv.bisect();
        stack.push(r);
        stack.push(l);
    }
    let unit = Interval::unit();
    let mut out: Vec<(Rational, RootCandidate)> = Vec::new();
    for (iv, sl) in isolated {
        if !iv.intersects(&unit) {
            continue;
        }
        let key = iv.mid();
        let mut point = lazy_root(f.clone(), iv.clone(), sl, q);
        if !iv.is_subset_of(&unit) {
            point = point.clamp_unit();
        }
        out.push((
            key,
            RootCandidate {
                point,
                certified: true,
            },
        ));
    }
    leftovers.sort_by(|x, y| x.lo().cmp(y.lo()));
    let mut comps: Vec<Interval> = Vec::new();
    for iv in leftovers {
        match comps.last_mut() {
            Some(last) if last.hi() >= iv.lo() => *last = last.hull(&iv),
            _ => comps.push(iv),
        }
    }
    let piece = pow2_neg(p);
    for c in comps {
        let Some(c) = c.intersect(&unit) else {
            continue;
        };
        let mut lo = c.lo().clone();
        loop {
            let hi = if c.hi() - &lo > piece {
                &lo + &piece
            } else {
                c.hi().clone()
            };
            let m = (&lo + &hi) / Rational::from_integer(2.into());
            out.push((
                m.clone(),
                RootCandidate {
                    point: ApproxReal::from_rational(m),
                    certified: false,
                },
            ));
            if &hi >= c.hi() {
                break;
            }
            lo = hi;
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.into_iter().map(|(_, c)| c).collect()
}

/// The unique simple root of `f` in `iv`, refined by sign tests at three
/// trial points (3/8, 1/2, 5/8 of the bracket); at most one of them can be the
/// root, so one of the others eventually gets a certified sign.
fn lazy_root(f: UniPoly, iv: Interval, sign_left: Truth, q0: Precision) -> ApproxReal {
    ApproxReal::from_fn(move |p, hint| {
        let (mut a, mut b) = clip(iv.lo(), iv.hi(), hint);
        let target = pow2_neg(p);
        let fracs = [rat(1, 2), rat(3, 8), rat(5, 8)];
        'outer: while &b - &a > target {
            let w = &b - &a;
            let pts: Vec<Rational> = fracs.iter().map(|t| &a + &w * t).collect();
            let mut t = q0;
            while t <= q0 + 4096 {
                for x in &pts {
                    let s = sign_at_point(&f, x, t);
                    if s.is_resolved() {
                        if s == sign_left {
                            a = x.clone();
                        } else {
                            b = x.clone();
                        }
                        continue 'outer;
                    }
                }
                t += 16;
            }
            log::warn!(
                "root refinement stalled at width {}",
                crate::reals::format_rational(&w)
            );
            break;
        }
        Interval::new(a, b)
    })
}

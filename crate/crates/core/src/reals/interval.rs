use std::fmt;

use num_traits::{Signed, Zero};

use super::rational::{ceil_dyadic, floor_dyadic, format_rational, Rational};

/// Closed rational interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    /// Builds `[min(a, b), max(a, b)]`.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn unit() -> Self {
        Interval::new(Rational::zero(), num_traits::One::one())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        (lo <= hi).then(|| Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: if self.lo <= other.lo {
                self.lo.clone()
            } else {
                other.lo.clone()
            },
            hi: if self.hi >= other.hi {
                self.hi.clone()
            } else {
                other.hi.clone()
            },
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        }
    }

    /// `{|x| : x in self}`.
    pub fn abs(&self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Interval {
        Interval::spanning(&self.lo * r, &self.hi * r)
    }

    pub fn shift(&self, r: &Rational) -> Interval {
        Interval {
            lo: &self.lo + r,
            hi: &self.hi + r,
        }
    }

    /// Tight enclosure of `{x^n : x in self}`.
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(num_traits::One::one());
        }
        let lo_n = num_traits::pow(self.lo.clone(), n as usize);
        let hi_n = num_traits::pow(self.hi.clone(), n as usize);
        if n % 2 == 1 {
            Interval { lo: lo_n, hi: hi_n }
        } else if self.contains_zero() {
            Interval {
                lo: Rational::zero(),
                hi: if lo_n >= hi_n { lo_n } else { hi_n },
            }
        } else {
            Interval::spanning(lo_n, hi_n)
        }
    }

    /// Widens the endpoints outward onto the grid of multiples of `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            Interval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }
}

impl std::ops::Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl std::ops::Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl std::ops::Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl std::ops::Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        if self.is_point() {
            return o.scale(&self.lo);
        }
        if o.is_point() {
            return self.scale(&o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = &c[0];
        let mut hi = &c[0];
        for v in &c[1..] {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number in canonical (lowest terms, positive denominator) form.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^(-bits)` as an exact rational.
pub fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// `2^bits` as an exact rational.
pub fn pow2(bits: u32) -> Rational {
    Rational::from_integer(BigInt::one() << bits as usize)
}

/// Largest multiple of `2^-bits` that is `<= q`.
pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    if q.denom().is_one() {
        return q.clone();
    }
    let scale = BigInt::one() << bits as usize;
    let n = (q.numer() * &scale).div_floor(q.denom());
    Rational::new(n, scale)
}

/// Smallest multiple of `2^-bits` that is `>= q`.
pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    if q.denom().is_one() {
        return q.clone();
    }
    let scale = BigInt::one() << bits as usize;
    let n = -((-(q.numer() * &scale)).div_floor(q.denom()));
    Rational::new(n, scale)
}

/// Smallest `k` with `|q| <= 2^k` (0 for `|q| <= 1`).
pub fn ceil_log2(q: &Rational) -> u32 {
    let a = q.abs();
    if a <= Rational::one() {
        return 0;
    }
    let c = a.ceil().to_integer();
    let bits = c.bits() as u32;
    // c <= 2^bits; tighten when c is an exact power of two
    if (BigInt::one() << (bits as usize - 1)) == c {
        bits - 1
    } else {
        bits
    }
}

/// Lower bound on `sqrt(q)` accurate to `2^-bits`.
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    // floor(sqrt(q * 4^bits)) / 2^bits
    let scaled = (q * pow2(2 * bits)).floor().to_integer();
    let r = scaled.sqrt();
    Rational::new(r, BigInt::one() << bits as usize)
}

/// Upper bound on `sqrt(q)` accurate to `2^-bits`.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    let scaled = (q * pow2(2 * bits)).ceil().to_integer();
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1;
    }
    Rational::new(r, BigInt::one() << bits as usize)
}

/// The rational with the smallest denominator inside the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of fractional parts
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_positive(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

/// Parses `"p/q"`, an integer, or an exact decimal literal such as `"-0.125"` or `"1e-3"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if shift >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Canonical `"p/q"` text (`"p"` for integers).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(q: &Rational) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

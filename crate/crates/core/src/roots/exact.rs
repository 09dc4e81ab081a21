//! Dense univariate polynomials over ℚ, coefficients in increasing degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::reals::Rational;

pub type QPoly = Vec<Rational>;

pub fn trim(mut f: QPoly) -> QPoly {
    while f.len() > 1 && f.last().unwrap().is_zero() {
        f.pop();
    }
    if f.is_empty() {
        f.push(Rational::zero());
    }
    f
}

pub fn is_zero(f: &[Rational]) -> bool {
    f.iter().all(|c| c.is_zero())
}

/// Degree of a trimmed nonzero polynomial (0 for constants).
pub fn degree(f: &[Rational]) -> usize {
    f.len() - 1
}

pub fn eval(f: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(f: &[Rational]) -> QPoly {
    if f.len() <= 1 {
        return vec![Rational::zero()];
    }
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
        .collect()
}

pub fn monic(f: &[Rational]) -> QPoly {
    let lc = f.last().unwrap().clone();
    f.iter().map(|c| c / &lc).collect()
}

/// Quotient and remainder; `b` must be trimmed and nonzero.
pub fn div_rem(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly) {
    let a = trim(a.to_vec());
    let db = degree(b);
    if a.len() < b.len() {
        return (vec![Rational::zero()], a);
    }
    let lc = b.last().unwrap();
    let mut r = a.clone();
    let mut q = vec![Rational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / lc;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

/// Monic greatest common divisor (zero if both are zero).
pub fn gcd(a: &[Rational], b: &[Rational]) -> QPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !is_zero(&y) {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    if is_zero(&x) {
        x
    } else {
        monic(&x)
    }
}

/// The product of the distinct irreducible factors, made monic.
pub fn squarefree_part(f: &[Rational]) -> QPoly {
    let f = trim(f.to_vec());
    if degree(&f) == 0 {
        return monic(&f);
    }
    let g = gcd(&f, &derivative(&f));
    monic(&div_rem(&f, &g).0)
}

/// Yun's decomposition: monic squarefree, pairwise coprime `(a_i, i)` with `f = lc · Π a_i^i`.
pub fn squarefree_decomposition(f: &[Rational]) -> Vec<(QPoly, usize)> {
    let f = trim(f.to_vec());
    let mut out = Vec::new();
    if degree(&f) == 0 {
        return out;
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = div_rem(&f, &a0).0;
    let mut c = div_rem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    loop {
        let a = gcd(&b, &d);
        if degree(&a) > 0 {
            out.push((a.clone(), i));
        }
        b = div_rem(&b, &a).0;
        if degree(&b) == 0 {
            break;
        }
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

pub fn mul(a: &[Rational], b: &[Rational]) -> QPoly {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Absolute leading coefficient after clearing denominators and content.
pub fn integer_leading_coefficient(f: &[Rational]) -> BigInt {
    let l = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lc = ints.last().unwrap().abs();
    if content.is_zero() {
        lc
    } else {
        lc / content
    }
}

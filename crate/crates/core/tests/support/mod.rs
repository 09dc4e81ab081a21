//! Generators and independent oracles shared by the acceptance checks.

#![allow(dead_code, clippy::needless_range_loop, clippy::type_complexity)]

use nashcad::poly::MultiPoly;
use nashcad::reals::{ApproxReal, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A rational in `[-r, r]` with a small denominator.
pub fn rand_rational(rng: &mut ChaCha8Rng, r: i64) -> Rational {
    let d = [1, 2, 3, 4, 5, 8][rng.gen_range(0..6)];
    q(rng.gen_range(-r * d..=r * d), d)
}

/// A rational in `[0, 1]` with a small denominator.
pub fn rand_unit(rng: &mut ChaCha8Rng) -> Rational {
    let d = [2, 3, 4, 5, 6, 7, 8, 9][rng.gen_range(0..8)];
    q(rng.gen_range(0..=d), d)
}

/// Dense random polynomial with total degree `≤ deg` in `level` variables.
pub fn rand_poly(rng: &mut ChaCha8Rng, level: usize, deg: u32, r: i64, density: f64) -> MultiPoly {
    let mut terms = Vec::new();
    for e in exponents(level, deg) {
        if rng.gen_bool(density) {
            terms.push((ApproxReal::from_rational(rand_rational(rng, r)), e));
        }
    }
    MultiPoly::from_terms(level, &terms, None).unwrap()
}

/// All exponent vectors of total degree `≤ deg`.
pub fn exponents(level: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..level {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| (0..=deg).map(move |k| [e.clone(), vec![k]].concat()))
            .collect();
    }
    out.retain(|e| e.iter().sum::<u32>() <= deg);
    out
}

pub fn eval_exact(f: &MultiPoly, x: &[Rational]) -> Rational {
    f.eval_rational(x).expect("exact polynomial")
}

// ---------- closed rational intervals and complex rectangles ----------

#[derive(Clone, Debug)]
pub struct Iv(pub Rational, pub Rational);

impl Iv {
    pub fn pt(x: Rational) -> Self {
        Iv(x.clone(), x)
    }
    pub fn add(&self, o: &Iv) -> Iv {
        Iv(&self.0 + &o.0, &self.1 + &o.1)
    }
    pub fn sub(&self, o: &Iv) -> Iv {
        Iv(&self.0 - &o.1, &self.1 - &o.0)
    }
    pub fn mul(&self, o: &Iv) -> Iv {
        let c = [
            &self.0 * &o.0,
            &self.0 * &o.1,
            &self.1 * &o.0,
            &self.1 * &o.1,
        ];
        Iv(
            c.iter().min().unwrap().clone(),
            c.iter().max().unwrap().clone(),
        )
    }
    pub fn contains(&self, x: &Rational) -> bool {
        &self.0 <= x && x <= &self.1
    }
}

#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Iv,
    pub im: Iv,
}

impl Cx {
    pub fn real(x: Rational) -> Self {
        Cx {
            re: Iv::pt(x),
            im: Iv::pt(Rational::zero()),
        }
    }
    pub fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    pub fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}

/// Coefficients (constant first) of `Π (z − r_i)` in rectangle arithmetic.
pub fn expand_roots(roots: &[Cx]) -> Vec<Cx> {
    let mut c = vec![Cx::real(Rational::one())];
    for r in roots {
        let mut next = vec![Cx::real(Rational::zero()); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            // next[k+1] += ck, next[k] -= r·ck
            next[k + 1] = Cx {
                re: next[k + 1].re.add(&ck.re),
                im: next[k + 1].im.add(&ck.im),
            };
            next[k] = next[k].sub(&r.mul(ck));
        }
        c = next;
    }
    c
}

// ---------- determinants and resultants ----------

/// Cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// Sylvester matrix of coefficient lists given highest degree first.
pub fn sylvester_rows(f: &[Rational], g: &[Rational]) -> Vec<Vec<Rational>> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let mut rows = Vec::new();
    for r in 0..n {
        let mut row = vec![Rational::zero(); m + n];
        for (i, c) in f.iter().enumerate() {
            row[r + i] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![Rational::zero(); m + n];
        for (i, c) in g.iter().enumerate() {
            row[r + i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `lc_f^n lc_g^m Π (α_i − β_j)` for `f = lc_f Π (x − α_i)`, `g = lc_g Π (x − β_j)`.
pub fn split_resultant(
    lf: &Rational,
    alphas: &[Rational],
    lg: &Rational,
    betas: &[Rational],
) -> Rational {
    let mut r = pow(lf, betas.len()) * pow(lg, alphas.len());
    for a in alphas {
        for b in betas {
            r *= a - b;
        }
    }
    r
}

pub fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// Coefficients (constant first) of `lc Π (x − r_i)`.
pub fn from_roots(lc: &Rational, roots: &[Rational]) -> Vec<Rational> {
    let mut c = vec![lc.clone()];
    for r in roots {
        let mut next = vec![Rational::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= r * ck;
        }
        c = next;
    }
    c
}

// ---------- sign vectors on a grid ----------

pub fn exact_sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Grid points `(i_1/(k−1), …, i_n/(k−1))` for `0 ≤ i_j < k`.
pub fn grid(level: usize, k: i64) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..level {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                (0..k).map(move |i| [p.clone(), vec![q(i, k - 1)]].concat())
            })
            .collect();
    }
    out
}

// ---------- exact two-player support enumeration ----------

/// Solves `A x = b` exactly; `None` unless the solution is unique.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
                let v = &f * &b[r];
                b[i] -= v;
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if b[r..].iter().any(|v| !v.is_zero()) || piv_cols.len() < cols {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// For a bimatrix game (`a[i][j]` row payoffs, `b[i][j]` column payoffs),
/// the opponent mix on `s_other` making every action of `s_own` indifferent,
/// together with that common payoff.
fn indifference(
    payoff: &dyn Fn(usize, usize) -> Rational,
    s_own: &[usize],
    s_other: &[usize],
) -> Option<(Vec<Rational>, Rational)> {
    // unknowns: y_j for j in s_other, then v
    let k = s_other.len();
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    for &i in s_own {
        let mut row: Vec<Rational> = s_other.iter().map(|&j| payoff(i, j)).collect();
        row.push(-Rational::one());
        a.push(row);
        rhs.push(Rational::zero());
    }
    let mut row = vec![Rational::one(); k];
    row.push(Rational::zero());
    a.push(row);
    rhs.push(Rational::one());
    let sol = solve_linear(a, rhs)?;
    Some((sol[..k].to_vec(), sol[k].clone()))
}

/// The first support pair (by total size, then lexicographic) admitting an
/// equilibrium with a unique indifference solution; returns the supports,
/// the mixed strategies and both expected payoffs.
pub fn two_player_equilibrium(
    a: &[Vec<Rational>],
    b: &[Vec<Rational>],
    supports: &[(Vec<usize>, Vec<usize>)],
) -> Option<(
    (Vec<usize>, Vec<usize>),
    Vec<Rational>,
    Vec<Rational>,
    Rational,
    Rational,
)> {
    let (m, n) = (a.len(), a[0].len());
    for (s1, s2) in supports {
        let pa = |i: usize, j: usize| a[i][j].clone();
        let pb = |j: usize, i: usize| b[i][j].clone();
        let Some((y_s, v1)) = indifference(&pa, s1, s2) else {
            continue;
        };
        let Some((x_s, v2)) = indifference(&pb, s2, s1) else {
            continue;
        };
        if y_s.iter().chain(&x_s).any(|v| v.is_negative()) {
            continue;
        }
        let mut x = vec![Rational::zero(); m];
        for (k, &i) in s1.iter().enumerate() {
            x[i] = x_s[k].clone();
        }
        let mut y = vec![Rational::zero(); n];
        for (k, &j) in s2.iter().enumerate() {
            y[j] = y_s[k].clone();
        }
        let row_ok = (0..m).all(|i| (0..n).map(|j| &a[i][j] * &y[j]).sum::<Rational>() <= v1);
        let col_ok = (0..n).all(|j| (0..m).map(|i| &b[i][j] * &x[i]).sum::<Rational>() <= v2);
        if row_ok && col_ok {
            return Some(((s1.clone(), s2.clone()), x, y, v1, v2));
        }
    }
    None
}

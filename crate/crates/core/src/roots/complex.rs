use num_traits::{One, Signed, Zero};

use super::exact;
use crate::error::{Error, Result};
use crate::reals::rational::{ceil_dyadic, floor_dyadic, pow2_neg, sqrt_lower, sqrt_upper};
use crate::reals::{ApproxReal, Interval, Precision, Rational};

/// Axis-parallel rectangle in ℂ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexEnclosure {
    pub re: Interval,
    pub im: Interval,
}

/// Unordered complex roots, multiplicity encoded by repetition.
#[derive(Clone, Debug)]
pub struct RootMultiset {
    pub roots: Vec<ComplexEnclosure>,
}

impl RootMultiset {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Roots sorted by `(re.lo, im.lo)`, the display order.
    pub fn sorted(&self) -> Vec<ComplexEnclosure> {
        let mut v = self.roots.clone();
        v.sort_by(|a, b| (a.re.lo(), a.im.lo()).cmp(&(b.re.lo(), b.im.lo())));
        v
    }
}

#[derive(Clone, Debug)]
struct C {
    re: Rational,
    im: Rational,
}

impl C {
    fn new(re: Rational, im: Rational) -> Self {
        C { re, im }
    }
    fn real(re: Rational) -> Self {
        C {
            re,
            im: Rational::zero(),
        }
    }
    fn add(&self, o: &C) -> C {
        C::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &C) -> C {
        C::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &C) -> C {
        C::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn norm2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &C) -> C {
        let d = o.norm2();
        C::new(
            (&self.re * &o.re + &self.im * &o.im) / &d,
            (&self.im * &o.re - &self.re * &o.im) / &d,
        )
    }
    fn round(&self, bits: u32) -> C {
        C::new(floor_dyadic(&self.re, bits), floor_dyadic(&self.im, bits))
    }
}

/// Monic polynomial `x^k + Σ a_j x^j` with interval coefficients, as midpoints and radii.
struct Monic {
    mid: Vec<Rational>,
    rad: Vec<Rational>,
}

impl Monic {
    fn degree(&self) -> usize {
        self.mid.len()
    }

    fn eval_mid(&self, z: &C) -> C {
        let mut acc = C::real(Rational::one());
        for a in self.mid.iter().rev() {
            acc = acc.mul(z).add(&C::real(a.clone()));
        }
        acc
    }

    /// Upper bound on `|p(z)|` over all coefficient choices.
    fn abs_upper(&self, z: &C, bits: u32) -> Rational {
        let mut bound = sqrt_upper(&self.eval_mid(z).norm2(), bits);
        if self.rad.iter().any(|r| !r.is_zero()) {
            let az = sqrt_upper(&z.norm2(), bits);
            let mut pw = Rational::one();
            for r in &self.rad {
                bound += r * &pw;
                pw *= &az;
            }
        }
        bound
    }
}

/// Durand–Kerner iterations followed by the Weierstrass inclusion test:
/// every root lies in some disk `D(z_i, k |W_i|)`, and a connected component
/// of the union made of `m` disks holds exactly `m` roots.
fn weierstrass_components(poly: &Monic, w: u32) -> Vec<(ComplexEnclosure, usize)> {
    let k = poly.degree();
    let bound = Rational::one()
        + poly
            .mid
            .iter()
            .map(|a| a.abs())
            .fold(Rational::zero(), |m, a| if a > m { a } else { m });
    let seed = C::new(
        Rational::new(2.into(), 5.into()),
        Rational::new(9.into(), 10.into()),
    );
    let mut z: Vec<C> = Vec::with_capacity(k);
    let mut pw = C::real(bound.clone());
    for _ in 0..k {
        pw = pw.mul(&seed).round(w);
        z.push(pw.clone());
    }
    let tol = pow2_neg(2 * w.saturating_sub(4));
    for _ in 0..400 {
        let mut biggest = Rational::zero();
        for i in 0..k {
            let mut den = C::real(Rational::one());
            for j in 0..k {
                if i != j {
                    den = den.mul(&z[i].sub(&z[j]));
                }
            }
            if den.norm2().is_zero() {
                z[i] = z[i].add(&C::new(pow2_neg(w / 2), pow2_neg(w / 2 + 1)));
                biggest = Rational::one();
                continue;
            }
            let corr = poly.eval_mid(&z[i]).div(&den);
            let n2 = corr.norm2();
            if n2 > biggest {
                biggest = n2;
            }
            z[i] = z[i].sub(&corr).round(w);
        }
        if biggest <= tol {
            break;
        }
    }
    let bits = w + 8;
    let kq = Rational::from_integer((k as i64).into());
    let radii: Vec<Rational> = (0..k)
        .map(|i| {
            let mut den2 = Rational::one();
            for j in 0..k {
                if i != j {
                    den2 *= z[i].sub(&z[j]).norm2();
                }
            }
            if den2.is_zero() {
                return bound.clone() * Rational::from_integer(4.into());
            }
            let den = sqrt_lower(&den2, bits);
            if den.is_zero() {
                return bound.clone() * Rational::from_integer(4.into());
            }
            ceil_dyadic(&(&kq * poly.abs_upper(&z[i], bits) / den), bits)
        })
        .collect();
    // union-find over overlapping disks
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            let s = &radii[i] + &radii[j];
            if z[i].sub(&z[j]).norm2() <= &s * &s {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let mut re = Interval::new(
                &z[members[0]].re - &radii[members[0]],
                &z[members[0]].re + &radii[members[0]],
            );
            let mut im = Interval::new(
                &z[members[0]].im - &radii[members[0]],
                &z[members[0]].im + &radii[members[0]],
            );
            for &i in &members[1..] {
                re = re.hull(&Interval::new(&z[i].re - &radii[i], &z[i].re + &radii[i]));
                im = im.hull(&Interval::new(&z[i].im - &radii[i], &z[i].im + &radii[i]));
            }
            (ComplexEnclosure { re, im }, members.len())
        })
        .collect()
}

fn enclose(poly: &Monic, p: Precision, rounds: u32) -> Vec<ComplexEnclosure> {
    let target = pow2_neg(p);
    let mut w = p + 24;
    let mut comps = Vec::new();
    for _ in 0..rounds {
        comps = weierstrass_components(poly, w);
        if comps
            .iter()
            .all(|(c, _)| c.re.width() <= target && c.im.width() <= target)
        {
            break;
        }
        w += 32;
    }
    comps
        .into_iter()
        .flat_map(|(c, m)| std::iter::repeat_n(c, m))
        .collect()
}

/// Complex roots of the monic polynomial `x^k + a_{k−1} x^{k−1} + … + a_0`.
///
/// Exact inputs are split into squarefree factors first, so repeated roots
/// come out as repeated tight enclosures. Inputs with lazily known
/// coefficients are handled directly; clustered roots then share one
/// enclosure that may be wider than `2^-p` at the reachable precision.
pub fn monic_complex_roots(a: &[ApproxReal], p: Precision) -> RootMultiset {
    let k = a.len();
    if k == 0 {
        return RootMultiset { roots: Vec::new() };
    }
    if let Some(exact_coeffs) = a
        .iter()
        .map(|c| c.as_exact().cloned())
        .collect::<Option<Vec<Rational>>>()
    {
        let mut f = exact_coeffs;
        f.push(Rational::one());
        let mut roots = Vec::with_capacity(k);
        for (factor, mult) in exact::squarefree_decomposition(&f) {
            let d = exact::degree(&factor);
            let poly = Monic {
                mid: factor[..d].to_vec(),
                rad: vec![Rational::zero(); d],
            };
            for r in enclose(&poly, p, 6) {
                for _ in 0..mult {
                    roots.push(r.clone());
                }
            }
        }
        return RootMultiset { roots };
    }
    let mut q = p + 24;
    let target = pow2_neg(p);
    let mut last = Vec::new();
    for _ in 0..6 {
        let iv: Vec<Interval> = a.iter().map(|c| c.enclosure_at(q)).collect();
        let poly = Monic {
            mid: iv.iter().map(|i| i.mid()).collect(),
            rad: iv
                .iter()
                .map(|i| i.width() / Rational::from_integer(2.into()))
                .collect(),
        };
        last = enclose(&poly, p, 1);
        if last
            .iter()
            .all(|c| c.re.width() <= target && c.im.width() <= target)
        {
            break;
        }
        q *= 2;
    }
    RootMultiset { roots: last }
}

/// Picks a real root lying in `[lo, hi]` from a root multiset.
///
/// Enclosures whose imaginary part excludes 0 or whose real part misses
/// `[lo, hi]` are discarded; the first survivor in display order wins, and
/// the midpoint of its real part (clamped into `[lo, hi]`) is returned.
pub fn select_real_root(
    r: &RootMultiset,
    lo: &Rational,
    hi: &Rational,
    _p: Precision,
) -> Result<ApproxReal> {
    let window = Interval::new(lo.clone(), hi.clone());
    let chosen = r
        .sorted()
        .into_iter()
        .find(|c| c.im.contains_zero() && c.re.intersects(&window))
        .ok_or(Error::NoCandidate)?;
    let mut m = chosen.re.mid();
    if &m < lo {
        m = lo.clone();
    }
    if &m > hi {
        m = hi.clone();
    }
    Ok(ApproxReal::from_rational(m))
}

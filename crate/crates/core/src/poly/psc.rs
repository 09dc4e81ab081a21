use std::collections::HashMap;

use super::multi::MultiPoly;
use crate::error::{Error, Result};

/// Dense matrix of polynomial entries sharing one level.
#[derive(Clone, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    level: usize,
    entries: Vec<MultiPoly>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, level: usize) -> Self {
        Matrix {
            rows,
            cols,
            level,
            entries: vec![MultiPoly::zero(level); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MultiPoly) {
        assert_eq!(v.level(), self.level);
        self.entries[r * self.cols + c] = v;
    }

    /// The submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len(), self.level);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Determinant by minor expansion along rows, memoized over column subsets.
    ///
    /// Only ring operations are used, so entries with lazily known
    /// coefficients are fine; zero entries are skipped, which keeps the
    /// banded Sylvester-type matrices cheap.
    pub fn determinant(&self) -> Result<MultiPoly> {
        if self.rows != self.cols {
            return Err(Error::Invalid(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(MultiPoly::one(self.level));
        }
        if n > 63 {
            return Err(Error::Invalid(
                "matrix too large for minor expansion".into(),
            ));
        }
        // layer k maps a k-element column set to the determinant of rows 0..k on those columns
        let mut layer: HashMap<u64, MultiPoly> = HashMap::new();
        layer.insert(0, MultiPoly::one(self.level));
        for k in 0..n {
            let mut next: HashMap<u64, MultiPoly> = HashMap::new();
            let mut keys: Vec<u64> = layer.keys().copied().collect();
            keys.sort_unstable();
            for set in keys {
                let minor = &layer[&set];
                if minor.is_exact_zero() {
                    continue;
                }
                for c in 0..n {
                    if set & (1 << c) != 0 {
                        continue;
                    }
                    let a = self.get(k, c);
                    if a.is_exact_zero() {
                        continue;
                    }
                    // sign of moving column c past the larger columns already in the set
                    let larger = (set >> (c + 1)).count_ones();
                    let mut term = minor.mul(a);
                    if larger % 2 == 1 {
                        term = term.neg();
                    }
                    let key = set | (1 << c);
                    let v = match next.remove(&key) {
                        Some(acc) => acc.add(&term),
                        None => term,
                    };
                    next.insert(key, v);
                }
            }
            layer = next;
        }
        Ok(layer
            .remove(&((1u64 << n) - 1))
            .unwrap_or_else(|| MultiPoly::zero(self.level)))
    }
}

/// Sylvester matrix of `f` and `g`, read as polynomials of degrees `m` and `n`
/// in the top variable, with entries at one level lower.
///
/// Layout: `n` rows of `f`'s coefficients `f_m … f_0` shifted right one
/// column per row, followed by `m` rows of `g_n … g_0` likewise. For
/// `f = x² − 1`, `g = x − 2` this is `[[1,0,−1],[1,−2,0],[0,1,−2]]`.
pub fn sylvester(f: &MultiPoly, g: &MultiPoly, m: u32, n: u32) -> Result<Matrix> {
    check_pair(f, g, m, n)?;
    let (m, n) = (m as usize, n as usize);
    let level = f.level() - 1;
    let size = m + n;
    let mut s = Matrix::zeros(size, size, level);
    for r in 0..n {
        for i in 0..=m {
            s.set(r, r + i, f.coeff(m - i));
        }
    }
    for r in 0..m {
        for i in 0..=n {
            s.set(n + r, r + i, g.coeff(n - i));
        }
    }
    Ok(s)
}

fn check_pair(f: &MultiPoly, g: &MultiPoly, m: u32, n: u32) -> Result<()> {
    if f.level() == 0 || f.level() != g.level() {
        return Err(Error::Invalid(
            "subresultants need two polynomials of one level ≥ 1".into(),
        ));
    }
    if m < n {
        return Err(Error::Invalid(format!(
            "assumed degrees must satisfy m ≥ n, got m={m}, n={n}"
        )));
    }
    if m > f.degree_bound() || n > g.degree_bound() {
        return Err(Error::OutOfRange(format!(
            "assumed degrees ({m}, {n}) exceed degree bounds"
        )));
    }
    Ok(())
}

/// Principal subresultant coefficient `psc_k(f, g)` for assumed degrees `m ≥ n`.
///
/// `M_k` is the Sylvester matrix with the last `k` rows of each block and the
/// last `2k` columns removed; `psc_k = det M_k`. Hence `psc_0` is the
/// resultant, `psc_n = g_n^{m−n}`, and for `n = 0`, `psc_0 = g_0^m`.
pub fn psc(f: &MultiPoly, g: &MultiPoly, k: u32, m: u32, n: u32) -> Result<MultiPoly> {
    check_pair(f, g, m, n)?;
    if k > n {
        return Err(Error::OutOfRange(format!("psc index {k} exceeds n={n}")));
    }
    let s = sylvester(f, g, m, n)?;
    let (m, n, k) = (m as usize, n as usize, k as usize);
    let rows: Vec<usize> = (0..n - k).chain(n..n + m - k).collect();
    let cols: Vec<usize> = (0..m + n - 2 * k).collect();
    s.select(&rows, &cols).determinant()
}

/// Every `psc_k` over all assumed degree pairs consistent with the degree
/// bounds (the larger assumed degree goes first), in a fixed order.
pub fn psc_candidates(f: &MultiPoly, g: &MultiPoly) -> Result<Vec<MultiPoly>> {
    let mut out = Vec::new();
    for m in 0..=f.degree_bound() {
        for n in 0..=g.degree_bound() {
            let (a, b, da, db) = if m >= n { (f, g, m, n) } else { (g, f, n, m) };
            for k in 0..=db {
                out.push(psc(a, b, k, da, db)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational::int;
    use crate::reals::{ApproxReal, Rational};

    fn uni(c: &[i64]) -> MultiPoly {
        MultiPoly::from_unipoly(&super::super::UniPoly::from_ints(c))
    }

    fn value(p: &MultiPoly) -> Rational {
        p.as_constant().and_then(|c| c.as_exact().cloned()).unwrap()
    }

    fn entries(m: &Matrix) -> Vec<Vec<Rational>> {
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| value(m.get(r, c))).collect())
            .collect()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn sylvester_layouts() {
        let s = sylvester(&uni(&[-1, 0, 1]), &uni(&[-2, 1]), 2, 1).unwrap();
        assert_eq!(entries(&s), ints(&[&[1, 0, -1], &[1, -2, 0], &[0, 1, -2]]));
        let s = sylvester(&uni(&[1, 1]), &uni(&[-1, 1]), 1, 1).unwrap();
        assert_eq!(entries(&s), ints(&[&[1, 1], &[1, -1]]));
        let s = sylvester(&uni(&[0, 1]), &uni(&[1]), 1, 0).unwrap();
        assert_eq!(entries(&s), ints(&[&[1]]));
        assert!(sylvester(&uni(&[0, 1]), &uni(&[0, 0, 1]), 1, 2).is_err());
    }

    #[test]
    fn resultant_of_quadratic_and_linear() {
        let r = psc(&uni(&[-1, 0, 1]), &uni(&[-2, 1]), 0, 2, 1).unwrap();
        assert_eq!(value(&r), int(3));
    }

    #[test]
    fn symbolic_linear_resultant() {
        // x - a and x - b with a = x1, b = x2 as parameters: psc_0 = a - b
        let x = MultiPoly::var(3, 2);
        let f = x.sub(&MultiPoly::var(3, 0));
        let g = x.sub(&MultiPoly::var(3, 1));
        let r = psc(&f, &g, 0, 1, 1).unwrap();
        let v = r.eval_rational(&[int(5), int(2)]).unwrap();
        assert_eq!(v, int(3));
    }

    #[test]
    fn top_index_is_power_of_leading_coefficient() {
        let f = uni(&[1, 2, 3, 4]);
        let g = uni(&[5, 7]);
        assert_eq!(value(&psc(&f, &g, 1, 3, 1).unwrap()), int(49));
        assert_eq!(value(&psc(&f, &uni(&[6]), 0, 3, 0).unwrap()), int(216));
    }

    #[test]
    fn candidates_enumerate_all_degree_pairs() {
        let c = psc_candidates(&uni(&[1, 1]), &uni(&[2, 3])).unwrap();
        // (0,0):1, (0,1):1, (1,0):1, (1,1):2
        assert_eq!(c.len(), 5);
        let c = psc_candidates(&uni(&[-1, 0, 1]), &uni(&[-2, 1])).unwrap();
        assert!(c.iter().any(|p| value(p) == int(3)));
        let z = MultiPoly::zero_with_bounds(&[1]);
        assert!(!psc_candidates(&z, &uni(&[0, 1])).unwrap().is_empty());
    }

    #[test]
    fn determinant_handles_lazy_entries() {
        let mut m = Matrix::zeros(2, 2, 0);
        let third = ApproxReal::blurred(Rational::new(1.into(), 3.into()));
        m.set(0, 0, MultiPoly::constant(0, third.clone()));
        m.set(0, 1, MultiPoly::one(0));
        m.set(1, 0, MultiPoly::one(0));
        m.set(1, 1, MultiPoly::constant(0, third));
        let d = m.determinant().unwrap();
        let e = d.as_constant().unwrap().enclosure_at(30);
        assert!(e.contains(&Rational::new((-8).into(), 9.into())));
    }
}

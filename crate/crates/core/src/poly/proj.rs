use super::multi::MultiPoly;
use super::psc::psc;
use crate::error::{Error, Result};

/// Projection of a family of level-`n` polynomials to level `n − 1`.
///
/// Since true degrees are unknown, every reductum index up to the degree
/// bound is treated as a possible degree:
/// * all coefficients `f^k`;
/// * `psc_l(f̂^k, D f̂^k)` read with degrees `(k, k−1)`, for `0 ≤ l < k−1`;
/// * `psc_l(f̂_i^{k_i}, f̂_j^{k_j})` for `i < j`, `0 ≤ l < min(k_i, k_j)`.
///
/// The omitted top indices give powers of leading coefficients, which are
/// already present. Constants and exact zeros are dropped, exact polynomials
/// are scaled to a monic leading term, and duplicates are removed.
pub fn proj(family: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let level = first.level();
    if level < 2 {
        return Err(Error::Invalid(format!(
            "projection needs level ≥ 2, got {level}"
        )));
    }
    if family.iter().any(|f| f.level() != level) {
        return Err(Error::Invalid(
            "projection of polynomials at different levels".into(),
        ));
    }
    let family: Vec<MultiPoly> = family.iter().map(|f| f.trim_exact()).collect();
    let mut out = Vec::new();
    for f in &family {
        out.extend(f.coeffs().iter().cloned());
    }
    for f in &family {
        for k in 2..=f.degree_bound() {
            let r = f.reductum(k)?;
            let d = r.derivative()?;
            for l in 0..k - 1 {
                out.push(psc(&r, &d, l, k, k - 1)?);
            }
        }
    }
    for (i, f) in family.iter().enumerate() {
        for g in &family[i + 1..] {
            for ki in 1..=f.degree_bound() {
                let rf = f.reductum(ki)?;
                for kj in 1..=g.degree_bound() {
                    let rg = g.reductum(kj)?;
                    let (a, b, da, db) = if ki >= kj {
                        (&rf, &rg, ki, kj)
                    } else {
                        (&rg, &rf, kj, ki)
                    };
                    for l in 0..db {
                        out.push(psc(a, b, l, da, db)?);
                    }
                }
            }
        }
    }
    Ok(clean_family(out))
}

/// Drops constants and exact zeros, normalizes exact members and removes duplicates.
pub fn clean_family(polys: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for p in polys {
        let p = p.trim_exact();
        if p.is_syntactically_constant() {
            continue;
        }
        let p = p.normalized();
        if !out.iter().any(|q| q.same_as(&p)) {
            out.push(p);
        }
    }
    out
}

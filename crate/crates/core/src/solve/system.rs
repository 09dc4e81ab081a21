use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::reals::{ApproxReal, Rational};

/// Constraints `P_i(x) ≥ 0` over `x ∈ [0,1]^level`.
#[derive(Clone, Debug)]
pub struct IneqSystem {
    pub level: usize,
    pub polys: Vec<MultiPoly>,
}

impl IneqSystem {
    pub fn new(level: usize, polys: Vec<MultiPoly>) -> Result<Self> {
        if let Some(p) = polys.iter().find(|p| p.level() != level) {
            return Err(Error::DimensionMismatch {
                expected: level,
                got: p.level(),
            });
        }
        Ok(IneqSystem { level, polys })
    }
}

/// `x_j = value(y)` where `y` are the variables left after removing `x_j`.
#[derive(Clone, Debug)]
struct Elimination {
    j: usize,
    value: MultiPoly,
}

/// A system with equality-defined variables substituted away.
#[derive(Clone, Debug)]
pub struct Presolved {
    pub system: IneqSystem,
    original_level: usize,
    steps: Vec<Elimination>,
}

impl Presolved {
    /// Maps a point of the reduced system back to the original variables.
    pub fn expand(&self, y: &[ApproxReal]) -> Vec<ApproxReal> {
        let mut x = y.to_vec();
        for e in self.steps.iter().rev() {
            let v = e
                .value
                .eval_point(&x)
                .expect("elimination levels are consistent");
            x.insert(e.j, v);
        }
        debug_assert_eq!(x.len(), self.original_level);
        x
    }

    pub fn eliminated(&self) -> usize {
        self.steps.len()
    }
}

fn is_negation(p: &MultiPoly, q: &MultiPoly) -> bool {
    p.is_exact() && q.is_exact() && p.add(q).trim_exact().is_exact_zero()
}

/// Index `j` and exact coefficient `a` such that `p = a·x_j + (terms without x_j)`.
fn affine_variable(p: &MultiPoly) -> Option<(usize, Rational)> {
    (0..p.level()).find_map(|j| {
        let d = p.derivative_wrt(j).ok()?.trim_exact();
        if !d.is_syntactically_constant() {
            return None;
        }
        let a = d.constant_term().as_exact()?.clone();
        (a != Rational::from_integer(0.into())).then_some((j, a))
    })
}

/// Images of the variables of `level` after removing `x_j`, with `x_j ↦ xj`.
fn images(level: usize, j: usize, xj: &MultiPoly) -> Vec<MultiPoly> {
    (0..level)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => MultiPoly::var(level - 1, k),
            std::cmp::Ordering::Equal => xj.clone(),
            std::cmp::Ordering::Greater => MultiPoly::var(level - 1, k - 1),
        })
        .collect()
}

/// Repeatedly takes a pair `P ≥ 0, −P ≥ 0` with `P` affine in some variable
/// with exact coefficient, solves for that variable and substitutes it,
/// adding `0 ≤ x_j ≤ 1` as constraints on the substituted value.
/// Exact constant constraints that hold are dropped.
pub fn presolve(system: &IneqSystem) -> Result<Presolved> {
    let mut level = system.level;
    let mut polys: Vec<MultiPoly> = system.polys.iter().map(|p| p.trim_exact()).collect();
    let mut steps = Vec::new();
    'outer: while level > 0 {
        for a in 0..polys.len() {
            let Some((j, coeff)) = affine_variable(&polys[a]) else {
                continue;
            };
            if !polys
                .iter()
                .enumerate()
                .any(|(b, q)| b != a && is_negation(&polys[a], q))
            {
                continue;
            }
            let zero = MultiPoly::zero(level - 1);
            let rest = polys[a].compose(&images(level, j, &zero))?;
            let value = rest.scale(&(-coeff.recip())).trim_exact();
            let map = images(level, j, &value);
            let pa = polys[a].clone();
            let mut next = Vec::with_capacity(polys.len() + 2);
            for q in &polys {
                if q.same_as(&pa) || is_negation(&pa, q) {
                    continue;
                }
                next.push(q.compose(&map)?.trim_exact());
            }
            next.push(value.clone());
            next.push(MultiPoly::one(level - 1).sub(&value).trim_exact());
            log::debug!("presolve: eliminated x_{j} at level {level}");
            steps.push(Elimination { j, value });
            level -= 1;
            polys = next;
            continue 'outer;
        }
        break;
    }
    let zero = Rational::from_integer(0.into());
    let mut kept: Vec<MultiPoly> = Vec::new();
    for p in polys {
        let trivially_true = p.is_syntactically_constant()
            && p.constant_term().as_exact().is_some_and(|c| c >= &zero);
        if !trivially_true && !kept.iter().any(|k| k.same_as(&p)) {
            kept.push(p);
        }
    }
    Ok(Presolved {
        system: IneqSystem { level, polys: kept },
        original_level: system.level,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational::{int, rat};

    #[test]
    fn eliminates_linear_equalities() {
        // x + y − 1 = 0, 2y − 1/2 = 0
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let e1 = x.add(&y).sub(&MultiPoly::one(2));
        let e2 = y
            .scale(&int(2))
            .sub(&MultiPoly::from_rational(2, rat(1, 2)));
        let s = IneqSystem::new(2, vec![e1.clone(), e1.neg(), e2.clone(), e2.neg()]).unwrap();
        let pre = presolve(&s).unwrap();
        assert_eq!(pre.system.level, 0);
        assert!(pre.system.polys.is_empty());
        let pt = pre.expand(&[]);
        assert_eq!(pt[0].as_exact(), Some(&rat(3, 4)));
        assert_eq!(pt[1].as_exact(), Some(&rat(1, 4)));
    }

    #[test]
    fn keeps_bounds_of_eliminated_variables() {
        // x − 2 = 0 has no solution in [0,1]
        let e = MultiPoly::var(1, 0).sub(&MultiPoly::from_rational(1, int(2)));
        let pre = presolve(&IneqSystem::new(1, vec![e.clone(), e.neg()]).unwrap()).unwrap();
        assert_eq!(pre.system.level, 0);
        assert_eq!(pre.system.polys.len(), 1);
        assert_eq!(
            pre.system.polys[0].constant_term().as_exact(),
            Some(&int(-1))
        );
    }

    #[test]
    fn leaves_nonlinear_systems() {
        let c = MultiPoly::var(2, 0)
            .pow(2)
            .add(&MultiPoly::var(2, 1).pow(2))
            .sub(&MultiPoly::from_rational(2, rat(1, 4)));
        let pre = presolve(&IneqSystem::new(2, vec![c.clone(), c.neg()]).unwrap()).unwrap();
        assert_eq!(pre.system.level, 2);
        assert_eq!(pre.eliminated(), 0);
    }
}

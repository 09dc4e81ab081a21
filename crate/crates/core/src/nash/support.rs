use super::game::Game;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::solve::{presolve, refute_box, IneqSystem, Presolved};

/// Per player, the sorted nonempty set of actions allowed positive probability.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support(pub Vec<Vec<usize>>);

impl Support {
    pub fn size(&self) -> usize {
        self.0.iter().map(Vec::len).sum()
    }

    fn validate(&self, g: &Game) -> Result<()> {
        if self.0.len() != g.players() {
            return Err(Error::DimensionMismatch {
                expected: g.players(),
                got: self.0.len(),
            });
        }
        for (s, &m) in self.0.iter().zip(g.actions()) {
            if s.is_empty() || s.iter().any(|&a| a >= m) || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("invalid support {:?}", self.0)));
            }
        }
        Ok(())
    }
}

/// Depths `start, start + step, …` for `rounds` rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthSchedule {
    pub start: u32,
    pub step: u32,
    pub rounds: u32,
}

impl Default for DepthSchedule {
    fn default() -> Self {
        DepthSchedule {
            start: 4,
            step: 2,
            rounds: 5,
        }
    }
}

impl DepthSchedule {
    pub fn depths(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.rounds).map(|r| self.start + r * self.step)
    }
}

/// Constraints on all `Σ m_i` probabilities for a profile supported on `s`
/// at which no player gains by deviating.
pub fn support_system(g: &Game, s: &Support) -> Result<IneqSystem> {
    s.validate(g)?;
    let n = g.num_vars();
    let mut polys = Vec::new();
    for (i, si) in s.0.iter().enumerate() {
        let mut total = MultiPoly::zero(n);
        for a in 0..g.actions()[i] {
            let x = MultiPoly::var(n, g.var_index(i, a));
            total = total.add(&x);
            polys.push(x.clone());
            if !si.contains(&a) {
                polys.push(x.neg());
            }
        }
        let norm = total.sub(&MultiPoly::one(n));
        polys.push(norm.clone());
        polys.push(norm.neg());
    }
    for (i, si) in s.0.iter().enumerate() {
        let dev: Vec<MultiPoly> = (0..g.actions()[i])
            .map(|a| g.deviation_poly(i, a))
            .collect();
        for &a in si {
            for (b, db) in dev.iter().enumerate() {
                if b != a {
                    polys.push(dev[a].sub(db).trim_exact());
                }
            }
        }
    }
    IneqSystem::new(n, polys)
}

/// Every support, by total size and then lexicographically.
pub fn all_supports(g: &Game) -> Vec<Support> {
    let per_player: Vec<Vec<Vec<usize>>> = g
        .actions()
        .iter()
        .map(|&m| {
            (1u64..1 << m)
                .map(|mask| (0..m).filter(|&a| mask >> a & 1 == 1).collect())
                .collect()
        })
        .collect();
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for choices in &per_player {
        out = out
            .into_iter()
            .flat_map(|p| {
                choices
                    .iter()
                    .map(move |c| [p.clone(), vec![c.clone()]].concat())
            })
            .collect();
    }
    let mut out: Vec<Support> = out.into_iter().map(Support).collect();
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone, Debug)]
pub struct SupportSelection {
    /// Supports not refuted, in enumeration order.
    pub survivors: Vec<Support>,
    /// Every other support was refuted.
    pub unique: bool,
    pub supports_total: usize,
    pub deepest_depth: u32,
    pub boxes: usize,
}

impl SupportSelection {
    pub fn support(&self) -> &Support {
        &self.survivors[0]
    }
}

/// Refutes supports round-robin with increasing depth until one survivor
/// remains or the schedule runs out.
pub fn select_support(g: &Game, schedule: &DepthSchedule) -> Result<SupportSelection> {
    let supports = all_supports(g);
    let systems: Vec<Presolved> = supports
        .iter()
        .map(|s| presolve(&support_system(g, s)?))
        .collect::<Result<_>>()?;
    let mut alive = vec![true; supports.len()];
    let mut boxes = 0;
    let mut deepest = 0;
    for depth in schedule.depths() {
        if alive.iter().filter(|&&a| a).count() <= 1 {
            break;
        }
        deepest = depth;
        for (k, sys) in systems.iter().enumerate() {
            if !alive[k] {
                continue;
            }
            let r = refute_box(&sys.system, depth);
            boxes += r.boxes();
            if r.is_infeasible() {
                log::debug!("support {:?} refuted at depth {depth}", supports[k].0);
                alive[k] = false;
            }
        }
    }
    let survivors: Vec<Support> = supports
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(s, _)| s.clone())
        .collect();
    if survivors.is_empty() {
        return Err(Error::Invalid("every support was refuted".into()));
    }
    Ok(SupportSelection {
        unique: survivors.len() == 1,
        survivors,
        supports_total: supports.len(),
        deepest_depth: deepest,
        boxes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational::int;
    use crate::reals::Rational;

    fn game(actions: Vec<usize>, payoffs: &[Vec<i64>]) -> Game {
        let p: Vec<Vec<Rational>> = payoffs
            .iter()
            .map(|t| t.iter().map(|&v| int(v)).collect())
            .collect();
        Game::from_rationals(actions, &p).unwrap()
    }

    #[test]
    fn ordering() {
        let g = game(vec![2, 2], &[vec![0; 4], vec![0; 4]]);
        let s = all_supports(&g);
        assert_eq!(s.len(), 9);
        assert_eq!(s[0].0, vec![vec![0], vec![0]]);
        assert_eq!(s[8].0, vec![vec![0, 1], vec![0, 1]]);
        assert!(s.windows(2).all(|w| w[0].size() <= w[1].size()));
    }

    #[test]
    fn matching_pennies_keeps_full_support() {
        let g = game(vec![2, 2], &[vec![1, -1, -1, 1], vec![-1, 1, 1, -1]]);
        let sel = select_support(&g, &DepthSchedule::default()).unwrap();
        assert!(sel.unique);
        assert_eq!(sel.support().0, vec![vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn prisoners_dilemma_defects() {
        // action 0 cooperate, 1 defect
        let g = game(vec![2, 2], &[vec![3, 0, 5, 1], vec![3, 5, 0, 1]]);
        let sel = select_support(&g, &DepthSchedule::default()).unwrap();
        assert_eq!(sel.support().0, vec![vec![1], vec![1]]);
    }

    #[test]
    fn dominant_single_player_action() {
        let g = game(vec![2], &[vec![1, 0]]);
        let sys = support_system(&g, &Support(vec![vec![0]])).unwrap();
        let pre = presolve(&sys).unwrap();
        assert_eq!(pre.system.level, 0);
        assert!(!refute_box(&pre.system, 0).is_infeasible());
        assert!(support_system(&g, &Support(vec![vec![2]])).is_err());
    }
}

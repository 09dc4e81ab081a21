use super::game::{Game, StrategyProfile};
use super::support::{select_support, support_system, DepthSchedule, Support};
use crate::error::Result;
use crate::reals::{ApproxReal, Precision, Rational, Truth};
use crate::solve::{bpineq_survivors, SolveConfig, SolveStatus};

#[derive(Clone, Debug)]
pub struct NashConfig {
    pub precision: Precision,
    pub stage_budget: u64,
    pub schedule: DepthSchedule,
    pub epsilon: Rational,
}

impl Default for NashConfig {
    fn default() -> Self {
        NashConfig {
            precision: 30,
            stage_budget: 10_000,
            schedule: DepthSchedule::default(),
            epsilon: crate::reals::rational::pow2_neg(20),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NashOutcome {
    pub profile: StrategyProfile,
    pub support: Support,
    /// Result of `verify_epsilon_nash` at the configured epsilon.
    pub verified: Truth,
    pub status: SolveStatus,
    /// The support was the only one left after refutation.
    pub support_unique: bool,
    pub supports_total: usize,
    pub supports_surviving: usize,
    /// Surviving supports handed to the inequality solver before one verified.
    pub supports_tried: usize,
    pub refutation_depth: u32,
    pub refutation_boxes: usize,
    pub stages_used: u64,
    pub candidates_total: usize,
}

/// Is every unilateral deviation gain at most `eps`?
pub fn verify_epsilon_nash(
    g: &Game,
    sigma: &StrategyProfile,
    eps: &Rational,
    p: Precision,
) -> Result<Truth> {
    let mut all_within = true;
    for i in 0..g.players() {
        let base = g.expected_payoff(sigma, i)?;
        for b in 0..g.actions()[i] {
            let gap = g.deviation_payoff(sigma, i, b)?.sub(&base).enclosure_at(p);
            if gap.lo() > eps {
                return Ok(Truth::False);
            }
            if gap.hi() > eps {
                all_within = false;
            }
        }
    }
    Ok(if all_within {
        Truth::True
    } else {
        Truth::Unknown
    })
}

/// Splits a point of all probabilities into per-player vectors, clamped to
/// `[0,1]` and divided by their sums.
fn profile_from_point(g: &Game, x: &[ApproxReal], p: Precision) -> StrategyProfile {
    let mut sigma = Vec::with_capacity(g.players());
    let mut offset = 0;
    for &m in g.actions() {
        let v: Vec<ApproxReal> = x[offset..offset + m]
            .iter()
            .map(ApproxReal::clamp_unit)
            .collect();
        offset += m;
        let sum = v.iter().fold(ApproxReal::zero(), |acc, c| acc.add(c));
        let normalized = match sum.as_exact() {
            Some(s) if s == &Rational::from_integer(1.into()) => v,
            _ => match sum.try_recip(p + 16) {
                Some(r) => v.iter().map(|c| c.mul(&r)).collect(),
                None => v,
            },
        };
        sigma.push(normalized);
    }
    StrategyProfile { sigma }
}

/// One Nash equilibrium: selects a support by refutation, then solves its
/// inequality system; if the solution does not verify, the next surviving
/// support is tried.
pub fn nash_solve(g: &Game, cfg: &NashConfig) -> Result<NashOutcome> {
    let sel = select_support(g, &cfg.schedule)?;
    let scfg = SolveConfig {
        precision: cfg.precision,
        stage_budget: cfg.stage_budget,
    };
    let mut first: Option<NashOutcome> = None;
    let (mut stages_used, mut candidates_total) = (0, 0);
    for (k, support) in sel.survivors.iter().enumerate() {
        let (survivors, summary) = bpineq_survivors(&support_system(g, support)?, &scfg)?;
        stages_used = stages_used.max(summary.stages_used);
        candidates_total += summary.candidates_total;
        let mut attempts: Vec<(Vec<ApproxReal>, SolveStatus)> = survivors
            .into_iter()
            .map(|s| {
                let st = if s.verified {
                    SolveStatus::VerifiedFeasible
                } else {
                    SolveStatus::EliminationOnly
                };
                (s.point, st)
            })
            .collect();
        if attempts.is_empty() {
            attempts.push((summary.point.clone(), summary.status));
        }
        for (point, status) in attempts {
            let profile = profile_from_point(g, &point, cfg.precision);
            let verified = verify_epsilon_nash(g, &profile, &cfg.epsilon, cfg.precision)?;
            let out = NashOutcome {
                profile,
                support: support.clone(),
                verified,
                status,
                support_unique: sel.unique,
                supports_total: sel.supports_total,
                supports_surviving: sel.survivors.len(),
                supports_tried: k + 1,
                refutation_depth: sel.deepest_depth,
                refutation_boxes: sel.boxes,
                stages_used,
                candidates_total,
            };
            if verified == Truth::True {
                return Ok(out);
            }
            first.get_or_insert(out);
        }
        log::info!(
            "nash: support {:?} gave no verified equilibrium, trying the next survivor",
            support.0
        );
    }
    let mut out = first.expect("at least one support survives");
    out.supports_tried = sel.survivors.len();
    out.stages_used = stages_used;
    out.candidates_total = candidates_total;
    log::warn!("nash: no verified equilibrium at epsilon {}", cfg.epsilon);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational::{int, rat};

    fn game(actions: Vec<usize>, payoffs: &[Vec<i64>]) -> Game {
        let p: Vec<Vec<Rational>> = payoffs
            .iter()
            .map(|t| t.iter().map(|&v| int(v)).collect())
            .collect();
        Game::from_rationals(actions, &p).unwrap()
    }

    fn exact(sigma: &StrategyProfile) -> Vec<Vec<Rational>> {
        sigma
            .sigma
            .iter()
            .map(|s| s.iter().map(|c| c.approx(40)).collect())
            .collect()
    }

    #[test]
    fn verification_examples() {
        let mp = game(vec![2, 2], &[vec![1, -1, -1, 1], vec![-1, 1, 1, -1]]);
        let u = StrategyProfile::from_rationals(&[
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(1, 2), rat(1, 2)],
        ]);
        assert_eq!(
            verify_epsilon_nash(&mp, &u, &crate::reals::rational::pow2_neg(20), 30).unwrap(),
            Truth::True
        );
        let hh = StrategyProfile::pure(&[2, 2], &[0, 0]);
        assert_eq!(
            verify_epsilon_nash(&mp, &hh, &rat(1, 2), 30).unwrap(),
            Truth::False
        );
        let coarse = StrategyProfile {
            sigma: vec![
                vec![
                    ApproxReal::blurred(rat(1, 2)),
                    ApproxReal::blurred(rat(1, 2)),
                ],
                u.sigma[1].clone(),
            ],
        };
        assert_eq!(
            verify_epsilon_nash(&mp, &coarse, &int(0), 4).unwrap(),
            Truth::Unknown
        );
    }

    #[test]
    fn matching_pennies() {
        let mp = game(vec![2, 2], &[vec![1, -1, -1, 1], vec![-1, 1, 1, -1]]);
        let out = nash_solve(&mp, &NashConfig::default()).unwrap();
        assert_eq!(out.verified, Truth::True);
        assert_eq!(exact(&out.profile), vec![vec![rat(1, 2), rat(1, 2)]; 2]);
    }

    #[test]
    fn prisoners_dilemma() {
        let pd = game(vec![2, 2], &[vec![3, 0, 5, 1], vec![3, 5, 0, 1]]);
        let out = nash_solve(&pd, &NashConfig::default()).unwrap();
        assert_eq!(out.verified, Truth::True);
        assert_eq!(exact(&out.profile), vec![vec![int(0), int(1)]; 2]);
    }

    #[test]
    fn zero_game() {
        let z = game(vec![2, 2, 2], &vec![vec![0; 8]; 3]);
        let out = nash_solve(&z, &NashConfig::default()).unwrap();
        assert_eq!(out.verified, Truth::True);
        assert_eq!(out.support.0, vec![vec![0]; 3]);
    }
}

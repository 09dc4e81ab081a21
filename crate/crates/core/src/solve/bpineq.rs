use num_traits::Zero;

use super::system::{presolve, IneqSystem, Presolved};
use crate::aouc::{default_point, resolve_within};
use crate::cad::{representative_sample, CadConfig};
use crate::error::Result;
use crate::poly::{make_zero, MultiPoly};
use crate::reals::rational::pow2_neg;
use crate::reals::{ApproxReal, Interval, Precision, Rational};

/// A returned point counts as verified when every residual enclosure reaches
/// above `−2^(−p + BPINEQ_SLACK_BITS)`.
pub const BPINEQ_SLACK_BITS: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub precision: Precision,
    pub stage_budget: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            precision: 30,
            stage_budget: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Residuals certified above `−2^(−p + BPINEQ_SLACK_BITS)`.
    VerifiedFeasible,
    /// Not eliminated, but residuals are not certified within the slack.
    EliminationOnly,
    /// No determined candidate survived; the cube center is returned.
    Default,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::VerifiedFeasible => "verified-feasible",
            SolveStatus::EliminationOnly => "elimination-only",
            SolveStatus::Default => "default",
        }
    }
}

/// A surviving candidate in the original variables.
#[derive(Clone, Debug)]
pub struct Survivor {
    pub point: Vec<ApproxReal>,
    pub residuals: Vec<Interval>,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub point: Vec<ApproxReal>,
    pub residuals: Vec<Interval>,
    pub status: SolveStatus,
    /// Largest collapse stage among determined candidates.
    pub stages_used: u64,
    pub candidates_total: usize,
    pub survivors: usize,
    pub eliminated_variables: usize,
}

pub(crate) fn residuals(s: &IneqSystem, x: &[ApproxReal], p: Precision) -> Vec<Interval> {
    s.polys
        .iter()
        .map(|f| f.eval_point(x).expect("matching dimension").enclosure_at(p))
        .collect()
}

fn verified(res: &[Interval], p: Precision) -> bool {
    let floor = -pow2_neg(p.saturating_sub(BPINEQ_SLACK_BITS));
    res.iter().all(|r| r.hi() >= &floor)
}

/// Precisions at which a candidate is checked for a certified-negative constraint.
fn elimination_precisions(p: Precision) -> [Precision; 3] {
    [p / 2, p, 2 * p]
}

/// Every determined representative-sample point that no constraint
/// certifiably rules out, in sample order, and the sample statistics.
pub fn bpineq_survivors(
    s: &IneqSystem,
    cfg: &SolveConfig,
) -> Result<(Vec<Survivor>, SolveOutcome)> {
    let pre: Presolved = presolve(s)?;
    let reduced = &pre.system;
    let cad = CadConfig {
        precision: cfg.precision,
        stage_budget: cfg.stage_budget,
    };
    let sample = representative_sample(&reduced.polys, reduced.level, &cad)?;
    let mut points = Vec::new();
    let mut stages_used = 0;
    for inst in &sample.instances {
        let r = resolve_within(inst, cfg.stage_budget, cfg.precision);
        if let Some(st) = r.collapsed_at {
            stages_used = stages_used.max(st);
            points.push(r.point);
        }
    }
    let total = points.len();
    let mut survivors = Vec::new();
    for y in points {
        let eliminated = elimination_precisions(cfg.precision)
            .iter()
            .any(|&q| residuals(reduced, &y, q).iter().any(|r| r.is_negative()));
        if eliminated {
            continue;
        }
        let x = pre.expand(&y);
        let res = residuals(s, &x, cfg.precision);
        let ok = verified(&res, cfg.precision);
        survivors.push(Survivor {
            point: x,
            residuals: res,
            verified: ok,
        });
    }
    log::info!(
        "bpineq: {} of {} determined candidates survive",
        survivors.len(),
        total
    );
    let summary = match survivors.first() {
        Some(first) => SolveOutcome {
            point: first.point.clone(),
            residuals: first.residuals.clone(),
            status: if first.verified {
                SolveStatus::VerifiedFeasible
            } else {
                SolveStatus::EliminationOnly
            },
            stages_used,
            candidates_total: total,
            survivors: survivors.len(),
            eliminated_variables: pre.eliminated(),
        },
        None => {
            let point = default_point(s.level);
            SolveOutcome {
                residuals: residuals(s, &point, cfg.precision),
                point,
                status: SolveStatus::Default,
                stages_used,
                candidates_total: total,
                survivors: 0,
                eliminated_variables: pre.eliminated(),
            }
        }
    };
    Ok((survivors, summary))
}

/// A point of `[0,1]^n` satisfying every `P_i ≥ 0` if there is one.
pub fn bpineq(s: &IneqSystem, cfg: &SolveConfig) -> Result<SolveOutcome> {
    let out = bpineq_survivors(s, cfg)?.1;
    match out.status {
        SolveStatus::VerifiedFeasible => log::info!(
            "bpineq: verified feasible at residual ≥ −2^-{}",
            cfg.precision - BPINEQ_SLACK_BITS
        ),
        SolveStatus::EliminationOnly => log::info!("bpineq: returned by elimination only"),
        SolveStatus::Default => {
            log::info!("bpineq: no surviving candidate, returning the cube center")
        }
    }
    Ok(out)
}

/// A root of `p` in `[0,1]^n` if there is one.
pub fn bmroot(p: &MultiPoly, cfg: &SolveConfig) -> Result<SolveOutcome> {
    let s = IneqSystem::new(p.level(), vec![p.clone(), p.neg()])?;
    let out = bpineq(&s, cfg)?;
    if out.status == SolveStatus::Default {
        log::info!("bmroot: no root found");
    }
    Ok(out)
}

/// Roots of `make_zero(p)` and `make_zero(q)`, found together as one root of
/// `p(x)² + q(y)²` in separate variables.
pub fn bmroot_pair(
    p: &MultiPoly,
    q: &MultiPoly,
    cfg: &SolveConfig,
) -> Result<(Vec<ApproxReal>, Vec<ApproxReal>, SolveOutcome)> {
    let (a, b) = (p.level(), q.level());
    let n = a + b;
    let pz = make_zero(p)?.compose(&(0..a).map(|j| MultiPoly::var(n, j)).collect::<Vec<_>>())?;
    let qz =
        make_zero(q)?.compose(&(0..b).map(|j| MultiPoly::var(n, a + j)).collect::<Vec<_>>())?;
    let h = pz.mul(&pz).add(&qz.mul(&qz)).trim_exact();
    let out = bmroot(&h, cfg)?;
    let (x, y) = out.point.split_at(a);
    Ok((x.to_vec(), y.to_vec(), out))
}

/// `min_i P_i(x)` lower bound, handy for reporting.
pub fn min_residual_lower(res: &[Interval]) -> Rational {
    res.iter()
        .map(|r| r.lo().clone())
        .min()
        .unwrap_or_else(Rational::zero)
}

use std::sync::Arc;

use super::real::{nonzero_witness, root_candidates};
use crate::aouc::{resolve_within, AoucInstance};
use crate::poly::UniPoly;
use crate::reals::{ApproxReal, Precision};

/// Residual slack: at a certified root `x` of `f` the returned point is within
/// `2^-p` of `x`, so `|f(point)|` is within `2^(-p + BROOT_SLACK_BITS)` of 0
/// whenever `|f'| ≤ 2^BROOT_SLACK_BITS` on `[0,1]`.
pub const BROOT_SLACK_BITS: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrootStatus {
    /// The instance collapsed at this stage: `f` was certified nonzero.
    Collapsed { stage: u64 },
    /// No collapse within the budget; every point is a valid answer if `f ≡ 0`.
    AllCase,
}

#[derive(Clone, Debug)]
pub struct BrootOutcome {
    pub point: ApproxReal,
    pub status: BrootStatus,
    /// The point is a certified root (rather than a fallback for a rootless `f`).
    pub certified: bool,
}

/// The AoUC instance realizing bounded root finding for `f`: All while `f`
/// is not certified nonzero, then collapsing to a root in `[0,1]` when there
/// is one and to `1/2` otherwise.
pub fn broot_instance(f: &UniPoly, p: Precision) -> AoucInstance {
    let (trig, g) = (Arc::new(f.clone()), Arc::new(f.clone()));
    AoucInstance::from_trigger(
        1,
        move |s| nonzero_witness(&trig, s).is_some(),
        move || vec![broot_point(&g, p).0],
    )
}

fn broot_point(f: &UniPoly, p: Precision) -> (ApproxReal, bool) {
    let c = root_candidates(f, p);
    match c.iter().find(|x| x.certified).or(c.first()) {
        Some(x) => (x.point.clone(), x.certified),
        None => (
            ApproxReal::from_rational(crate::reals::rational::rat(1, 2)),
            false,
        ),
    }
}

/// A root of `f` in `[0,1]` if there is one, resolved within `stage_budget`.
pub fn broot(f: &UniPoly, p: Precision, stage_budget: u64) -> BrootOutcome {
    let inst = broot_instance(f, p);
    let r = resolve_within(&inst, stage_budget, p);
    match r.collapsed_at {
        Some(stage) => {
            let certified = root_candidates(f, p).iter().any(|x| x.certified);
            BrootOutcome {
                point: r.point[0].clone(),
                status: BrootStatus::Collapsed { stage },
                certified,
            }
        }
        None => {
            log::info!("broot: no nonzero certificate within {stage_budget} stages, returning the default point");
            BrootOutcome {
                point: r.point[0].clone(),
                status: BrootStatus::AllCase,
                certified: false,
            }
        }
    }
}

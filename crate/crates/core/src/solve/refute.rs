use super::system::IneqSystem;
use crate::reals::{Interval, Precision};

/// Boxes examined by one refutation before it gives up.
pub const MAX_REFUTE_BOXES: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// Every leaf box has a constraint certified negative on it.
    Infeasible { boxes: usize, depth_reached: u32 },
    /// A box at full depth could not be discarded, or the box cap was hit.
    Unknown { boxes: usize, depth_reached: u32 },
}

impl Refutation {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Refutation::Infeasible { .. })
    }

    pub fn boxes(&self) -> usize {
        match self {
            Refutation::Infeasible { boxes, .. } | Refutation::Unknown { boxes, .. } => *boxes,
        }
    }
}

fn discarded(s: &IneqSystem, bx: &[Interval], p: Precision) -> bool {
    s.polys
        .iter()
        .any(|f| f.eval_box_unchecked(bx, p).is_negative())
}

/// Tries to show that `s` has no solution in `[0,1]^n` by bisecting boxes,
/// widest side first, at most `depth` times along any branch.
pub fn refute_box(s: &IneqSystem, depth: u32) -> Refutation {
    let p = 32 + depth;
    let mut stack = vec![(vec![Interval::unit(); s.level], 0u32)];
    let mut boxes = 0;
    let mut reached = 0;
    while let Some((bx, d)) = stack.pop() {
        boxes += 1;
        reached = reached.max(d);
        if discarded(s, &bx, p) {
            continue;
        }
        if d >= depth || s.level == 0 || boxes >= MAX_REFUTE_BOXES {
            return Refutation::Unknown {
                boxes,
                depth_reached: reached,
            };
        }
        let k = (0..bx.len())
            .max_by(|&a, &b| bx[a].width().cmp(&bx[b].width()).then(b.cmp(&a)))
            .unwrap();
        let (l, r) = bx[k].bisect();
        let mut right = bx.clone();
        right[k] = r;
        let mut left = bx;
        left[k] = l;
        stack.push((right, d + 1));
        stack.push((left, d + 1));
    }
    Refutation::Infeasible {
        boxes,
        depth_reached: reached,
    }
}

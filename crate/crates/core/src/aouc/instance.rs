use std::cell::Cell;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;

use crate::error::{Error, Result};
use crate::reals::{ApproxReal, Interval, Precision, Rational};

thread_local! {
    static TALLY: Cell<Tally> = const { Cell::new(Tally { created: 0, resolved: 0, collapsed: 0 }) };
}

/// Per-thread counts of instance activity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    /// Instances constructed.
    pub created: u64,
    /// Budgeted resolutions performed.
    pub resolved: u64,
    /// Resolutions that found the instance collapsed within budget.
    pub collapsed: u64,
}

impl Tally {
    /// Counts accumulated on this thread since the last reset.
    pub fn current() -> Tally {
        TALLY.with(|t| t.get())
    }

    pub fn reset() {
        TALLY.with(|t| t.set(Tally::default()));
    }

    fn bump(f: impl FnOnce(&mut Tally)) {
        TALLY.with(|t| {
            let mut v = t.get();
            f(&mut v);
            t.set(v);
        });
    }
}

/// Observable state of an instance at one stage.
#[derive(Clone, Debug)]
pub enum State {
    All,
    Collapsed(Vec<ApproxReal>),
}

type Trigger = dyn Fn(u64) -> bool + Send + Sync;
type PointFn = dyn Fn() -> Vec<ApproxReal> + Send + Sync;

enum Kind {
    All,
    At(u64),
    Product(Vec<AoucInstance>),
    Stream(Box<Trigger>),
}

#[derive(Default)]
struct Memo {
    /// Smallest stage at which the instance is collapsed, once found.
    first: Option<u64>,
    /// Largest stage known to be All.
    all_through: Option<u64>,
}

struct Inner {
    dim: usize,
    kind: Kind,
    point_fn: Option<Box<PointFn>>,
    point: OnceLock<Vec<ApproxReal>>,
    memo: Mutex<Memo>,
}

/// An All-or-Unique-Choice instance over `[0,1]^dim`.
///
/// The instance is All (every point of the cube is a valid answer) up to some
/// stage and may then collapse, after which it reveals the same point at
/// every later stage. Collapse is detected by a monotone trigger; the point
/// is computed once, the first time it is needed after collapse.
#[derive(Clone)]
pub struct AoucInstance(Arc<Inner>);

impl AoucInstance {
    fn build(dim: usize, kind: Kind, point_fn: Option<Box<PointFn>>) -> Self {
        Tally::bump(|t| t.created += 1);
        AoucInstance(Arc::new(Inner {
            dim,
            kind,
            point_fn,
            point: OnceLock::new(),
            memo: Mutex::new(Memo::default()),
        }))
    }

    /// Never collapses.
    pub fn const_all(dim: usize) -> Self {
        Self::build(dim, Kind::All, None)
    }

    /// All before stage `s0`, collapsed to `point` from `s0` on.
    pub fn collapse_at(dim: usize, s0: u64, point: Vec<ApproxReal>) -> Result<Self> {
        if point.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: point.len(),
            });
        }
        let unit = Interval::unit();
        for x in &point {
            let ok = match x.as_exact() {
                Some(q) => unit.contains(q),
                None => x.enclosure_at(16).intersects(&unit),
            };
            if !ok {
                return Err(Error::Invalid(
                    "collapse point outside the unit cube".into(),
                ));
            }
        }
        Ok(Self::build(
            dim,
            Kind::At(s0),
            Some(Box::new(move || point.clone())),
        ))
    }

    /// Collapses when every factor has, to the concatenated point.
    pub fn product(parts: &[AoucInstance]) -> Self {
        let dim = parts.iter().map(|p| p.dim()).sum();
        let ps: Vec<AoucInstance> = parts.to_vec();
        let for_point = ps.clone();
        let point_fn = move || for_point.iter().flat_map(|p| p.point_unchecked()).collect();
        Self::build(dim, Kind::Product(ps), Some(Box::new(point_fn)))
    }

    /// An instance collapsing once `trigger` holds; `trigger` must be monotone
    /// and `point` may only rely on facts established by the trigger.
    pub fn from_trigger(
        dim: usize,
        trigger: impl Fn(u64) -> bool + Send + Sync + 'static,
        point: impl Fn() -> Vec<ApproxReal> + Send + Sync + 'static,
    ) -> Self {
        Self::build(dim, Kind::Stream(Box::new(trigger)), Some(Box::new(point)))
    }

    /// Collapses once all `parents` have, to `point` computed from them.
    pub fn derived(
        dim: usize,
        parents: &[AoucInstance],
        point: impl Fn() -> Vec<ApproxReal> + Send + Sync + 'static,
    ) -> Self {
        if parents.is_empty() {
            return Self::build(dim, Kind::At(0), Some(Box::new(point)));
        }
        let ps = parents.to_vec();
        Self::from_trigger(dim, move |s| ps.iter().all(|p| p.collapsed_by(s)), point)
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn ptr_eq(&self, other: &AoucInstance) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// True when the instance is known never to collapse.
    pub fn is_const_all(&self) -> bool {
        match &self.0.kind {
            Kind::All => true,
            Kind::Product(ps) => ps.iter().any(|p| p.is_const_all()),
            _ => false,
        }
    }

    pub fn collapsed_by(&self, s: u64) -> bool {
        match &self.0.kind {
            Kind::All => false,
            Kind::At(s0) => s >= *s0,
            Kind::Product(ps) => ps.iter().all(|p| p.collapsed_by(s)),
            Kind::Stream(f) => {
                {
                    let m = self.0.memo.lock().unwrap_or_else(|e| e.into_inner());
                    if m.first.is_some_and(|t| s >= t) {
                        return true;
                    }
                    if m.all_through.is_some_and(|t| s <= t) {
                        return false;
                    }
                }
                let v = f(s);
                let mut m = self.0.memo.lock().unwrap_or_else(|e| e.into_inner());
                if !v {
                    m.all_through = Some(m.all_through.map_or(s, |t| t.max(s)));
                }
                v
            }
        }
    }

    /// The first stage `≤ budget` at which the instance is collapsed.
    pub fn first_collapse_within(&self, budget: u64) -> Option<u64> {
        match &self.0.kind {
            Kind::All => None,
            Kind::At(s0) => (*s0 <= budget).then_some(*s0),
            Kind::Product(ps) => {
                let mut worst = 0;
                for p in ps {
                    worst = worst.max(p.first_collapse_within(budget)?);
                }
                Some(worst)
            }
            Kind::Stream(_) => {
                if let Some(t) = self.0.memo.lock().unwrap_or_else(|e| e.into_inner()).first {
                    return (t <= budget).then_some(t);
                }
                if !self.collapsed_by(budget) {
                    return None;
                }
                let (mut lo, mut hi) = (0u64, budget);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if self.collapsed_by(mid) {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                self.0.memo.lock().unwrap_or_else(|e| e.into_inner()).first = Some(lo);
                Some(lo)
            }
        }
    }

    pub fn state_at(&self, s: u64) -> State {
        if self.collapsed_by(s) {
            State::Collapsed(self.point_unchecked())
        } else {
            State::All
        }
    }

    /// The revealed point; only meaningful once the instance has collapsed.
    fn point_unchecked(&self) -> Vec<ApproxReal> {
        self.0
            .point
            .get_or_init(|| {
                (self
                    .0
                    .point_fn
                    .as_ref()
                    .expect("All instances reveal no point"))()
            })
            .clone()
    }

    /// The revealed point if collapsed by stage `s`.
    pub fn point_if_collapsed(&self, s: u64) -> Option<Vec<ApproxReal>> {
        self.collapsed_by(s).then(|| self.point_unchecked())
    }
}

impl fmt::Debug for AoucInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AoucInstance(dim {})", self.dim())
    }
}

/// Outcome of resolving an instance within a stage budget.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub point: Vec<ApproxReal>,
    /// Stage of collapse, or `None` when the default point was used.
    pub collapsed_at: Option<u64>,
}

impl Resolution {
    pub fn is_collapsed(&self) -> bool {
        self.collapsed_at.is_some()
    }
}

/// The cube center `(1/2, …, 1/2)`.
pub fn default_point(dim: usize) -> Vec<ApproxReal> {
    vec![ApproxReal::from_rational(Rational::new(One::one(), 2.into())); dim]
}

/// The collapse point if the instance collapses by stage `budget`, otherwise
/// the cube center (valid when the instance really is All).
pub fn resolve_within(inst: &AoucInstance, budget: u64, _p: Precision) -> Resolution {
    Tally::bump(|t| t.resolved += 1);
    match inst.first_collapse_within(budget) {
        Some(s) => {
            Tally::bump(|t| t.collapsed += 1);
            log::trace!("aouc stage {s}: {inst:?} collapsed");
            Resolution {
                point: inst.point_unchecked(),
                collapsed_at: Some(s),
            }
        }
        None => {
            log::debug!("aouc: {inst:?} unresolved within budget {budget}");
            Resolution {
                point: default_point(inst.dim()),
                collapsed_at: None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::rational::{int, rat};

    fn pt(q: Rational) -> Vec<ApproxReal> {
        vec![ApproxReal::from_rational(q)]
    }

    fn exact_point(s: &State) -> Option<Vec<Rational>> {
        match s {
            State::All => None,
            State::Collapsed(v) => Some(v.iter().map(|x| x.as_exact().unwrap().clone()).collect()),
        }
    }

    #[test]
    fn constructors() {
        assert!(matches!(
            AoucInstance::const_all(1).state_at(1_000_000),
            State::All
        ));
        let i = AoucInstance::collapse_at(1, 3, pt(rat(1, 2))).unwrap();
        assert!(matches!(i.state_at(2), State::All));
        let j =
            AoucInstance::collapse_at(2, 0, vec![ApproxReal::zero(), ApproxReal::one()]).unwrap();
        assert_eq!(exact_point(&j.state_at(5)), Some(vec![int(0), int(1)]));
        assert!(AoucInstance::collapse_at(1, 0, pt(int(2))).is_err());
    }

    #[test]
    fn products() {
        let a = AoucInstance::collapse_at(1, 0, pt(rat(1, 2))).unwrap();
        let b = AoucInstance::collapse_at(1, 0, pt(rat(1, 3))).unwrap();
        let ab = AoucInstance::product(&[a, b]);
        assert_eq!(
            exact_point(&ab.state_at(0)),
            Some(vec![rat(1, 2), rat(1, 3)])
        );
        let c = AoucInstance::collapse_at(1, 2, pt(int(0))).unwrap();
        let never = AoucInstance::product(&[AoucInstance::const_all(1), c.clone()]);
        assert!(matches!(never.state_at(1 << 40), State::All));
        let d = AoucInstance::collapse_at(1, 5, pt(int(1))).unwrap();
        let cd = AoucInstance::product(&[c, d]);
        assert_eq!(cd.first_collapse_within(100), Some(5));
        assert!(matches!(cd.state_at(4), State::All));
    }

    #[test]
    fn budgeted_resolution() {
        let i = AoucInstance::collapse_at(1, 3, pt(rat(1, 4))).unwrap();
        let r = resolve_within(&i, 10, 20);
        assert_eq!(r.collapsed_at, Some(3));
        assert_eq!(r.point[0].as_exact(), Some(&rat(1, 4)));
        let r = resolve_within(&AoucInstance::const_all(1), 10, 20);
        assert_eq!(r.point[0].as_exact(), Some(&rat(1, 2)));
        assert!(!r.is_collapsed());
        let late = AoucInstance::collapse_at(1, 100, pt(rat(1, 4))).unwrap();
        let r = resolve_within(&late, 10, 20);
        assert_eq!(r.point[0].as_exact(), Some(&rat(1, 2)));
        assert!(!r.is_collapsed());
    }

    #[test]
    fn stream_first_collapse_by_search() {
        let i = AoucInstance::from_trigger(1, |s| s >= 777, || pt(rat(1, 3)));
        assert_eq!(i.first_collapse_within(10_000), Some(777));
        assert_eq!(i.first_collapse_within(500), None);
        let d = AoucInstance::derived(1, std::slice::from_ref(&i), || pt(int(0)));
        assert_eq!(d.first_collapse_within(10_000), Some(777));
    }

    #[test]
    fn tally_counts() {
        Tally::reset();
        let i = AoucInstance::collapse_at(1, 0, pt(int(0))).unwrap();
        resolve_within(&i, 5, 10);
        resolve_within(&AoucInstance::const_all(2), 5, 10);
        assert_eq!(
            Tally::current(),
            Tally {
                created: 2,
                resolved: 2,
                collapsed: 1
            }
        );
    }
}

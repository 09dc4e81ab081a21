//! Representative samples of sign-invariant decompositions over `[0,1]^n`,
//! produced as lists of AoUC instances.

mod sign;

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::One;

use crate::aouc::potential::encode;
use crate::aouc::{coefficient_bound, AoucInstance, PotentialUniPoly, RootSlots};
use crate::error::{Error, Result};
use crate::poly::{proj, MultiPoly, UniPoly};
use crate::reals::rational::rat;
use crate::reals::{ApproxReal, Interval, Precision, Rational};

pub use sign::{sign_vector_at, Sign, SignVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CadConfig {
    pub precision: Precision,
    pub stage_budget: u64,
}

impl Default for CadConfig {
    fn default() -> Self {
        CadConfig {
            precision: 30,
            stage_budget: 10_000,
        }
    }
}

/// AoUC instances over `[0,1]^level`; `origins[i]` is the index of the
/// lower-level instance that `instances[i]` was lifted from.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub level: usize,
    pub instances: Vec<AoucInstance>,
    pub origins: Vec<usize>,
}

/// A sample point as resolved within a stage budget.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub point: Vec<ApproxReal>,
    pub determined: bool,
}

impl SampleSet {
    /// The single point of `[0,1]^0`.
    pub fn origin() -> Self {
        let inst = AoucInstance::collapse_at(0, 0, Vec::new()).expect("empty point");
        SampleSet {
            level: 0,
            instances: vec![inst],
            origins: vec![0],
        }
    }

    pub fn resolve(&self, cfg: &CadConfig) -> Vec<SamplePoint> {
        self.instances
            .iter()
            .map(|i| {
                let r = crate::aouc::resolve_within(i, cfg.stage_budget, cfg.precision);
                SamplePoint {
                    determined: r.is_collapsed(),
                    point: r.point,
                }
            })
            .collect()
    }

    pub fn determined_points(&self, cfg: &CadConfig) -> Vec<Vec<ApproxReal>> {
        self.resolve(cfg)
            .into_iter()
            .filter(|s| s.determined)
            .map(|s| s.point)
            .collect()
    }
}

fn boundary_polys(level: usize) -> [MultiPoly; 2] {
    let x = MultiPoly::var(level, level - 1);
    [x.clone(), x.sub(&MultiPoly::one(level))]
}

/// `[F_0, …, F_{n−1}]` with `F_0 = F` at level `n` and `F_{i+1} = proj(F_i)`.
///
/// Levels `≥ 2` are projected together with `x_top` and `x_top − 1`, so that
/// boundary crossings of sections are visible in the lower levels.
pub fn project_chain(family: &[MultiPoly], level: usize) -> Result<Vec<Vec<MultiPoly>>> {
    if level == 0 {
        return Err(Error::Invalid(
            "projection chain needs at least one variable".into(),
        ));
    }
    if let Some(f) = family.iter().find(|f| f.level() != level) {
        return Err(Error::DimensionMismatch {
            expected: level,
            got: f.level(),
        });
    }
    let mut chain = vec![family.to_vec()];
    for l in (2..=level).rev() {
        let mut with_boundary = chain.last().unwrap().clone();
        if !with_boundary.is_empty() {
            with_boundary.extend(boundary_polys(l));
        }
        let below = proj(&with_boundary)?;
        log::debug!("projection to level {}: {} polynomials", l - 1, below.len());
        chain.push(below);
    }
    Ok(chain)
}

fn point_of(inst: &AoucInstance) -> Vec<ApproxReal> {
    inst.point_if_collapsed(u64::MAX)
        .expect("read only after collapse")
}

/// The restriction of `f` to the fiber over `base`, as a potential polynomial
/// whose coefficients collapse together with `base`.
fn fiber_poly(f: &MultiPoly, base: &AoucInstance) -> PotentialUniPoly {
    let unit = vec![Interval::unit(); base.dim()];
    let pairs = f
        .coeffs()
        .iter()
        .map(|c| {
            let k = c
                .eval_box(&unit, 8)
                .map(|iv| iv.mag().ceil() + Rational::one())
                .unwrap_or_else(|_| coefficient_bound(&c.constant_term()));
            let (c, b, kk) = (c.clone(), base.clone(), k.clone());
            let inst = AoucInstance::derived(1, std::slice::from_ref(base), move || {
                let v = c.eval_point(&point_of(&b)).expect("matching dimension");
                vec![encode(&v, &kk)]
            });
            (inst, k)
        })
        .collect();
    PotentialUniPoly::new(pairs)
}

struct Fiber {
    slots: Vec<RootSlots>,
    p: Precision,
}

impl Fiber {
    /// Roots of all polynomials determined by stage `s`, with their exact-or-approximate keys.
    fn roots_by(&self, s: u64) -> Vec<(Rational, ApproxReal)> {
        let mut out = Vec::new();
        for sl in &self.slots {
            if sl.determined_within(s).is_some() {
                out.extend(sl.roots().iter().map(|x| (key(x, self.p), x.clone())));
            }
        }
        out
    }

    /// The midpoint between root `j` of polynomial `i` and its neighbor on the
    /// given side among roots determined no later than it (0 or 1 if none).
    fn sector_point(&self, i: usize, j: usize, right: bool) -> ApproxReal {
        let sl = &self.slots[i];
        let s = sl
            .determined_within(u64::MAX)
            .expect("sector read after its root collapsed");
        let x = point_of(&sl.instances()[j])[0].clone();
        let kx = key(&x, self.p);
        let roots = self.roots_by(s);
        let nb = if right {
            roots
                .into_iter()
                .filter(|(k, _)| k > &kx)
                .min_by(|a, b| a.0.cmp(&b.0))
                .map(|r| r.1)
        } else {
            roots
                .into_iter()
                .filter(|(k, _)| k < &kx)
                .max_by(|a, b| a.0.cmp(&b.0))
                .map(|r| r.1)
        };
        let nb = nb.unwrap_or_else(|| {
            ApproxReal::from_rational(if right { Rational::one() } else { rat(0, 1) })
        });
        x.add(&nb).scale(&rat(1, 2))
    }
}

fn key(x: &ApproxReal, p: Precision) -> Rational {
    match x.as_exact() {
        Some(q) => q.clone(),
        None => x.approx(p),
    }
}

fn fixed(q: Rational) -> AoucInstance {
    AoucInstance::collapse_at(1, 0, vec![ApproxReal::from_rational(q)]).expect("point in [0,1]")
}

/// Lifts each instance of `sample` (level `n − 1`) to instances over
/// `[0,1]^n`: sections at root candidates of the fiber polynomials, sector
/// midpoints beside each root, and the points `0`, `1/2`, `1`.
pub fn lift(sample: &SampleSet, family: &[MultiPoly], p: Precision) -> Result<SampleSet> {
    let level = sample.level + 1;
    if let Some(f) = family.iter().find(|f| f.level() != level) {
        return Err(Error::DimensionMismatch {
            expected: level,
            got: f.level(),
        });
    }
    let mut instances = Vec::new();
    let mut origins = Vec::new();
    for (idx, base) in sample.instances.iter().enumerate() {
        let slots: Vec<RootSlots> = family
            .iter()
            .map(|f| RootSlots::new(&fiber_poly(f, base), p))
            .collect();
        let fiber = Arc::new(Fiber { slots, p });
        let mut push = |x: AoucInstance| {
            instances.push(AoucInstance::product(&[base.clone(), x]));
            origins.push(idx);
        };
        push(fixed(rat(0, 1)));
        for (i, sl) in fiber.slots.iter().enumerate() {
            for (j, root) in sl.instances().iter().enumerate() {
                push(root.clone());
                for right in [false, true] {
                    let (trig, fb) = (root.clone(), fiber.clone());
                    push(AoucInstance::from_trigger(
                        1,
                        move |s| trig.collapsed_by(s),
                        move || vec![fb.sector_point(i, j, right)],
                    ));
                }
            }
        }
        push(fixed(rat(1, 2)));
        push(fixed(Rational::one()));
    }
    Ok(SampleSet {
        level,
        instances,
        origins,
    })
}

/// Level-1 sample for univariate polynomials.
pub fn base_sample(family: &[UniPoly], p: Precision) -> SampleSet {
    let polys: Vec<MultiPoly> = family.iter().map(MultiPoly::from_unipoly).collect();
    lift(&SampleSet::origin(), &polys, p).expect("univariate family")
}

/// Drops duplicate determined points and replaces instances unresolved within
/// the budget by the fiber center over their base instance.
fn settle(lifted: SampleSet, below: &SampleSet, cfg: &CadConfig) -> SampleSet {
    let mut seen: HashSet<Vec<(bool, Rational)>> = HashSet::new();
    let mut centered: HashSet<usize> = HashSet::new();
    let (mut instances, mut origins) = (Vec::new(), Vec::new());
    for (inst, origin) in lifted.instances.into_iter().zip(lifted.origins) {
        if inst.first_collapse_within(cfg.stage_budget).is_some() {
            let k: Vec<(bool, Rational)> = point_of(&inst)
                .iter()
                .map(|x| (x.is_exact(), key(x, cfg.precision)))
                .collect();
            if seen.insert(k) {
                instances.push(inst);
                origins.push(origin);
            }
        } else if centered.insert(origin) {
            instances.push(AoucInstance::product(&[
                below.instances[origin].clone(),
                fixed(rat(1, 2)),
            ]));
            origins.push(origin);
        }
    }
    SampleSet {
        level: lifted.level,
        instances,
        origins,
    }
}

/// A representative sample for `family` (all at level `level`) over `[0,1]^level`.
pub fn representative_sample(
    family: &[MultiPoly],
    level: usize,
    cfg: &CadConfig,
) -> Result<SampleSet> {
    if level == 0 {
        return Ok(SampleSet::origin());
    }
    let chain = project_chain(family, level)?;
    let mut sample = SampleSet::origin();
    for (l, fam) in chain.iter().rev().enumerate() {
        let lifted = lift(&sample, fam, cfg.precision)?;
        log::debug!(
            "lifted to level {}: {} instances",
            l + 1,
            lifted.instances.len()
        );
        sample = settle(lifted, &sample, cfg);
    }
    Ok(sample)
}

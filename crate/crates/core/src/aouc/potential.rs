use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use super::instance::AoucInstance;
use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::reals::rational::ceil_log2;
use crate::reals::{ApproxReal, Interval, Precision, Rational};
use crate::roots::{nonzero_witness, root_candidates};

/// A univariate polynomial whose coefficients are revealed by AoUC instances.
///
/// The pair `(I_i, k_i)` specifies the coefficient `c_i = 2 k_i a_i − k_i`
/// once `I_i` collapses to `a_i ∈ [0,1]`, so `|c_i| ≤ k_i`.
#[derive(Clone, Debug)]
pub struct PotentialUniPoly {
    pairs: Vec<(AoucInstance, Rational)>,
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

/// `a = (c + k) / 2k`, the instance point encoding coefficient `c`.
pub(crate) fn encode(c: &ApproxReal, k: &Rational) -> ApproxReal {
    c.add(&ApproxReal::from_rational(k.clone()))
        .scale(&(two() * k).recip())
}

fn decode(a: &ApproxReal, k: &Rational) -> ApproxReal {
    a.scale(&(two() * k))
        .sub(&ApproxReal::from_rational(k.clone()))
}

impl PotentialUniPoly {
    pub fn new(pairs: Vec<(AoucInstance, Rational)>) -> Self {
        assert!(
            !pairs.is_empty(),
            "a potential polynomial needs a coefficient"
        );
        assert!(pairs
            .iter()
            .all(|(i, k)| i.dim() == 1 && k > &Rational::zero()));
        PotentialUniPoly { pairs }
    }

    pub fn pairs(&self) -> &[(AoucInstance, Rational)] {
        &self.pairs
    }

    pub fn degree_bound(&self) -> u32 {
        self.pairs.len() as u32 - 1
    }

    pub fn collapsed_by(&self, s: u64) -> bool {
        self.pairs.iter().all(|(i, _)| i.collapsed_by(s))
    }

    /// The specified polynomial, once every coefficient instance has collapsed by `s`.
    pub fn specified_at(&self, s: u64) -> Option<UniPoly> {
        let coeffs = self
            .pairs
            .iter()
            .map(|(i, k)| i.point_if_collapsed(s).map(|a| decode(&a[0], k)))
            .collect::<Option<Vec<_>>>()?;
        Some(UniPoly::new(coeffs))
    }

    /// Coefficient instance `i` as a real, defined once it has collapsed.
    fn coefficient_when_collapsed(&self, i: usize) -> ApproxReal {
        let (inst, k) = &self.pairs[i];
        let a = inst
            .point_if_collapsed(u64::MAX)
            .expect("coefficient instance collapsed");
        decode(&a[0], k)
    }
}

/// Embeds `f` with the given magnitude bounds `k_i ≥ |c_i|`; every instance
/// collapses at stage 0.
pub fn potential_from_unipoly(f: &UniPoly, bounds: &[Rational]) -> Result<PotentialUniPoly> {
    if bounds.len() != f.coeffs().len() {
        return Err(Error::DimensionMismatch {
            expected: f.coeffs().len(),
            got: bounds.len(),
        });
    }
    let mut pairs = Vec::with_capacity(bounds.len());
    for (c, k) in f.coeffs().iter().zip(bounds) {
        if k <= &Rational::zero() {
            return Err(Error::Invalid("coefficient bounds must be positive".into()));
        }
        let probe = c.enclosure_at(8 + ceil_log2(k));
        if !probe.is_subset_of(&Interval::new(-k.clone(), k.clone())) {
            return Err(Error::Invalid(format!(
                "coefficient enclosure {probe} exceeds bound {k}"
            )));
        }
        let a = encode(c, k);
        pairs.push((AoucInstance::collapse_at(1, 0, vec![a])?, k.clone()));
    }
    Ok(PotentialUniPoly::new(pairs))
}

/// A safe integer bound `⌈|c|⌉ + 1` read off a coarse enclosure.
pub fn coefficient_bound(c: &ApproxReal) -> Rational {
    c.enclosure_at(0).mag().ceil() + Rational::one()
}

/// Embeds `f`, choosing the bounds from coarse enclosures.
pub fn embed(f: &UniPoly) -> PotentialUniPoly {
    let bounds: Vec<Rational> = f.coeffs().iter().map(coefficient_bound).collect();
    potential_from_unipoly(f, &bounds).expect("bounds chosen to fit")
}

/// Coefficientwise sum; output instances collapse once both inputs' do.
pub fn potential_add(p: &PotentialUniPoly, q: &PotentialUniPoly) -> PotentialUniPoly {
    let n = p.pairs.len().max(q.pairs.len());
    let pairs = (0..n)
        .map(|i| match (p.pairs.get(i), q.pairs.get(i)) {
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (Some((ip, kp)), Some((iq, kq))) => {
                let k = kp + kq;
                let (pp, qq, kk) = (p.clone(), q.clone(), k.clone());
                let inst = AoucInstance::derived(1, &[ip.clone(), iq.clone()], move || {
                    let c = pp
                        .coefficient_when_collapsed(i)
                        .add(&qq.coefficient_when_collapsed(i));
                    vec![encode(&c, &kk)]
                });
                (inst, k)
            }
            (None, None) => unreachable!(),
        })
        .collect();
    PotentialUniPoly::new(pairs)
}

/// Product; coefficient `i` collapses once every input coefficient feeding it has.
pub fn potential_mul(p: &PotentialUniPoly, q: &PotentialUniPoly) -> PotentialUniPoly {
    let n = p.pairs.len() + q.pairs.len() - 1;
    let pairs = (0..n)
        .map(|i| {
            let terms: Vec<(usize, usize)> = (0..p.pairs.len())
                .filter(|&j| i >= j && i - j < q.pairs.len())
                .map(|j| (j, i - j))
                .collect();
            let k = terms.iter().fold(Rational::zero(), |acc, &(j, l)| {
                acc + &p.pairs[j].1 * &q.pairs[l].1
            });
            let parents: Vec<AoucInstance> = terms
                .iter()
                .flat_map(|&(j, l)| [p.pairs[j].0.clone(), q.pairs[l].0.clone()])
                .collect();
            let (pp, qq, kk) = (p.clone(), q.clone(), k.clone());
            let inst = AoucInstance::derived(1, &parents, move || {
                let c = terms.iter().fold(ApproxReal::zero(), |acc, &(j, l)| {
                    acc.add(
                        &pp.coefficient_when_collapsed(j)
                            .mul(&qq.coefficient_when_collapsed(l)),
                    )
                });
                vec![encode(&c, &kk)]
            });
            (inst, k)
        })
        .collect();
    PotentialUniPoly::new(pairs)
}

struct RootsShared {
    poly: PotentialUniPoly,
    p: Precision,
    slots: usize,
    specified: OnceLock<UniPoly>,
    candidates: OnceLock<Vec<ApproxReal>>,
}

impl RootsShared {
    fn determined_by(&self, s: u64) -> bool {
        if !self.poly.collapsed_by(s) {
            return false;
        }
        let specified = self
            .specified
            .get_or_init(|| self.poly.specified_at(s).expect("collapsed"));
        nonzero_witness(specified, s).is_some()
    }

    fn candidates(&self) -> &[ApproxReal] {
        self.candidates.get_or_init(|| {
            let specified = self
                .specified
                .get()
                .expect("candidates are read after determination");
            let mut c = root_candidates(specified, self.p);
            if c.len() > self.slots {
                // certified roots take precedence, original order is kept
                let certified = c.iter().filter(|x| x.certified).count();
                let mut spare = self.slots.saturating_sub(certified);
                c.retain(|x| {
                    if x.certified {
                        true
                    } else if spare > 0 {
                        spare -= 1;
                        true
                    } else {
                        false
                    }
                });
                c.truncate(self.slots);
            }
            c.into_iter().map(|x| x.point).collect()
        })
    }
}

/// Root slots of one potential polynomial: one instance per unit of degree
/// bound, each All until the polynomial is fully specified and certified
/// nonzero, then collapsing to one root candidate.
#[derive(Clone)]
pub struct RootSlots {
    shared: Arc<RootsShared>,
    instances: Vec<AoucInstance>,
}

impl RootSlots {
    pub fn new(poly: &PotentialUniPoly, p: Precision) -> Self {
        let slots = poly.degree_bound() as usize;
        let shared = Arc::new(RootsShared {
            poly: poly.clone(),
            p,
            slots,
            specified: OnceLock::new(),
            candidates: OnceLock::new(),
        });
        let instances = (0..slots)
            .map(|j| {
                let (trig, pt) = (shared.clone(), shared.clone());
                AoucInstance::from_trigger(
                    1,
                    move |s| trig.determined_by(s),
                    move || vec![slot_point(pt.candidates(), j)],
                )
            })
            .collect();
        RootSlots { shared, instances }
    }

    pub fn instances(&self) -> &[AoucInstance] {
        &self.instances
    }

    /// First stage at which the polynomial is specified and certified nonzero.
    pub fn determined_within(&self, budget: u64) -> Option<u64> {
        self.instances.first()?.first_collapse_within(budget)
    }

    /// The candidate roots, available once determined.
    pub fn roots(&self) -> &[ApproxReal] {
        self.shared.candidates()
    }
}

/// Candidate `j`, repeating the last one for unused slots (the midpoint
/// `1/2` stands in when there are no candidates at all).
fn slot_point(c: &[ApproxReal], j: usize) -> ApproxReal {
    match c.get(j).or(c.last()) {
        Some(x) => x.clone(),
        None => ApproxReal::from_rational(Rational::new(1.into(), 2.into())),
    }
}

/// One-dimensional instances whose collapse points include, to within `2^-p`,
/// every root in `[0,1]` of every determined, nonzero polynomial among `fs`.
pub fn potential_root_candidates(fs: &[PotentialUniPoly], p: Precision) -> Vec<AoucInstance> {
    fs.iter()
        .flat_map(|f| RootSlots::new(f, p).instances)
        .collect()
}

//! Acceptance checks, one line of output per criterion.
//!
//! Runs with `cargo test --test acceptance`; the process exits nonzero if any
//! criterion fails.

#![allow(clippy::type_complexity)]

mod support;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nashcad::aouc::Tally;
use nashcad::cad::{representative_sample, sign_vector_at, CadConfig, Sign};
use nashcad::nash::{all_supports, nash_solve, verify_epsilon_nash, Game, NashConfig};
use nashcad::poly::{hypercube_min_abs, make_zero, psc, MultiPoly, UniPoly};
use nashcad::reals::rational::pow2_neg;
use nashcad::reals::{ApproxReal, Rational, Truth};
use nashcad::roots::{broot, broot_instance, monic_complex_roots, BrootStatus};
use nashcad::solve::{bpineq, refute_box, IneqSystem, SolveConfig};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use support::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. ------------------------------------------------------------------------

fn monic_roots_inverse() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..200 {
        let k = rng.gen_range(1..=5);
        let a: Vec<Rational> = (0..k).map(|_| rand_rational(&mut rng, 2)).collect();
        let coeffs: Vec<ApproxReal> = a.iter().cloned().map(ApproxReal::from_rational).collect();
        let roots = monic_complex_roots(&coeffs, 30);
        ensure(roots.len() == k, || {
            format!("case {t}: {} roots for degree {k}", roots.len())
        })?;
        let rects: Vec<Cx> = roots
            .roots
            .iter()
            .map(|r| Cx {
                re: Iv(r.re.lo().clone(), r.re.hi().clone()),
                im: Iv(r.im.lo().clone(), r.im.hi().clone()),
            })
            .collect();
        let e = expand_roots(&rects);
        for (i, ai) in a.iter().enumerate() {
            ensure(
                e[i].re.contains(ai) && e[i].im.contains(&Rational::zero()),
                || format!("case {t}: coefficient {i} = {ai} not re-enclosed"),
            )?;
        }
    }
    Ok("200/200 polynomials re-enclose their coefficients".into())
}

// 2. ------------------------------------------------------------------------

fn psc_resultant() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut split, mut general) = (0, 0);
    for t in 0..100 {
        let m = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=m);
        let (fc, gc, oracle) = if t % 2 == 0 {
            let alphas: Vec<Rational> = (0..m).map(|_| rand_rational(&mut rng, 2)).collect();
            let betas: Vec<Rational> = (0..n).map(|_| rand_rational(&mut rng, 2)).collect();
            let (lf, lg) = (nonzero(&mut rng), nonzero(&mut rng));
            split += 1;
            (
                from_roots(&lf, &alphas),
                from_roots(&lg, &betas),
                split_resultant(&lf, &alphas, &lg, &betas),
            )
        } else {
            let mut fc: Vec<Rational> = (0..m).map(|_| rand_rational(&mut rng, 2)).collect();
            fc.push(nonzero(&mut rng));
            let mut gc: Vec<Rational> = (0..n).map(|_| rand_rational(&mut rng, 2)).collect();
            gc.push(nonzero(&mut rng));
            let hi_first = |c: &[Rational]| c.iter().rev().cloned().collect::<Vec<_>>();
            general += 1;
            let o = cofactor_det(&sylvester_rows(&hi_first(&fc), &hi_first(&gc)));
            (fc, gc, o)
        };
        let f = MultiPoly::from_unipoly(&UniPoly::from_rationals(&fc));
        let g = MultiPoly::from_unipoly(&UniPoly::from_rationals(&gc));
        let r = psc(&f, &g, 0, m as u32, n as u32).map_err(|e| e.to_string())?;
        let got = r
            .as_constant()
            .and_then(|c| c.as_exact())
            .cloned()
            .ok_or("non-constant resultant")?;
        ensure(got == oracle, || {
            format!("case {t}: psc_0 = {got}, oracle {oracle}")
        })?;
    }
    Ok(format!(
        "100/100 exact matches ({split} split, {general} cofactor)"
    ))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let v = rand_rational(rng, 2);
        if !v.is_zero() {
            return v;
        }
    }
}

// 3. ------------------------------------------------------------------------

fn broot_behavior() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = pow2_neg(20);
    for t in 0..100 {
        let k = rng.gen_range(1..=3);
        let roots: Vec<Rational> = (0..k).map(|_| rand_unit(&mut rng)).collect();
        let mut factors = roots.clone();
        // a root outside the cube and a rootless quadratic factor in some cases
        if t % 3 == 0 {
            factors.push(q(3, 2));
        }
        let mut c = from_roots(&nonzero(&mut rng), &factors);
        if t % 4 == 0 {
            c = mul(&c, &[q(1, 1), q(0, 1), q(1, 1)]);
        }
        c.extend(std::iter::repeat_n(Rational::zero(), rng.gen_range(1..=2)));
        let f = UniPoly::from_rationals(&c);
        let out = broot(&f, 30, 1000);
        let x = out.point.enclosure_at(30);
        let close = roots
            .iter()
            .any(|r| (x.lo() - r).abs() <= tol && (x.hi() - r).abs() <= tol);
        ensure(close, || {
            format!("case {t}: broot gave {x}, roots {roots:?}")
        })?;
    }
    for budget in [100u64, 1_000, 10_000, 100_000] {
        let zero = UniPoly::zero(3);
        let inst = broot_instance(&zero, 30);
        ensure(inst.first_collapse_within(budget).is_none(), || {
            format!("zero polynomial collapsed within {budget}")
        })?;
        let out = broot(&zero, 30, budget);
        ensure(out.status == BrootStatus::AllCase, || {
            format!("budget {budget}: status {:?}", out.status)
        })?;
        ensure(out.point.as_exact() == Some(&q(1, 2)), || {
            format!("budget {budget}: point {:?}", out.point)
        })?;
    }
    Ok("100/100 planted roots within 2^-20; zero polynomial all-case at budgets 1e2..1e5".into())
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// 4. ------------------------------------------------------------------------

fn sign_code(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::Zero => 0,
        Sign::Plus => 1,
        Sign::Unknown => 2,
    }
}

fn cad_coverage() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = CadConfig {
        precision: 20,
        stage_budget: 10_000,
    };
    let (mut vectors, mut points, mut loose) = (0, 0, 0);
    for t in 0..30 {
        let level = if t < 10 { 1 } else { 2 };
        let count = rng.gen_range(1..=3);
        let family: Vec<MultiPoly> = (0..count)
            .map(|_| loop {
                let f = {
                    let d = rng.gen_range(1..=3);
                    rand_poly(&mut rng, level, d, 1, 0.6)
                };
                if !f.trim_exact().is_syntactically_constant() {
                    break f;
                }
            })
            .collect();
        let sample = representative_sample(&family, level, &cfg).map_err(|e| e.to_string())?;
        let sample_vecs: Vec<Vec<i8>> = sample
            .determined_points(&cfg)
            .iter()
            .map(|x| {
                sign_vector_at(&family, x, 20)
                    .map(|s| s.entries.into_iter().map(sign_code).collect())
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        points += sample_vecs.len();
        let grid_vecs: HashSet<Vec<i8>> = grid(level, 100)
            .iter()
            .map(|x| {
                family
                    .iter()
                    .map(|f| exact_sign(&eval_exact(f, x)))
                    .collect()
            })
            .collect();
        for g in &grid_vecs {
            vectors += 1;
            let strict = sample_vecs.iter().any(|s| s == g);
            let relaxed = sample_vecs
                .iter()
                .any(|s| s.iter().zip(g).all(|(a, b)| a == b || *a == 2));
            if !strict {
                loose += 1;
            }
            ensure(relaxed, || {
                format!(
                    "system {t}: grid sign vector {g:?} not realized by any of {} sample points",
                    sample_vecs.len()
                )
            })?;
        }
    }
    Ok(format!("{vectors} grid sign vectors over 30 systems realized by {points} determined points ({loose} only after discarding unknowns)"))
}

// 5. ------------------------------------------------------------------------

fn bpineq_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = SolveConfig {
        precision: 30,
        stage_budget: 10_000,
    };
    let floor = -pow2_neg(15);
    let mut worst = Rational::one();
    for t in 0..50 {
        let level = rng.gen_range(1..=2);
        let star: Vec<Rational> = (0..level).map(|_| rand_unit(&mut rng)).collect();
        let count = rng.gen_range(1..=3);
        let polys: Vec<MultiPoly> = (0..count)
            .map(|i| {
                let g = {
                    let d = rng.gen_range(1..=2);
                    rand_poly(&mut rng, level, d, 1, 0.7)
                };
                // tight at the planted point for the first constraint, slack for the others
                let slack = if i == 0 {
                    Rational::zero()
                } else {
                    q(rng.gen_range(0..=4), 8)
                };
                let shift = slack - eval_exact(&g, &star);
                g.add(&MultiPoly::from_rational(level, shift))
            })
            .collect();
        let s = IneqSystem::new(level, polys.clone()).map_err(|e| e.to_string())?;
        let out = bpineq(&s, &cfg).map_err(|e| e.to_string())?;
        let min = polys
            .iter()
            .map(|f| {
                f.eval_point(&out.point)
                    .unwrap()
                    .enclosure_at(40)
                    .lo()
                    .clone()
            })
            .min()
            .unwrap();
        ensure(min >= floor, || {
            format!(
                "feasible system {t}: min residual {min} at status {:?}",
                out.status
            )
        })?;
        worst = worst.min(min);
    }
    for t in 0..20 {
        let level = rng.gen_range(1..=2);
        let l = {
            let d = rng.gen_range(1..=3);
            rand_poly(&mut rng, level, d, 1, 0.6)
        };
        let a = rand_rational(&mut rng, 1);
        let b = &a - q(1, 2) - q(rng.gen_range(0..=2), 8);
        // P1 + P2 = b − a ≤ −1/2, so max min(P1, P2) ≤ −1/4
        let p1 = l.sub(&MultiPoly::from_rational(level, a));
        let p2 = MultiPoly::from_rational(level, b).sub(&l);
        let s = IneqSystem::new(level, vec![p1, p2]).map_err(|e| e.to_string())?;
        let r = refute_box(&s, 8);
        ensure(r.is_infeasible(), || {
            format!("infeasible system {t} not refuted at depth 8: {r:?}")
        })?;
    }
    Ok(format!(
        "50/50 feasible (worst min residual {:.3e}), 20/20 infeasible refuted by depth 8",
        to_f64(&worst)
    ))
}

fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

// 6. ------------------------------------------------------------------------

fn make_zero_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tol = pow2_neg(15);
    let mut changes = 0;
    for t in 0..50 {
        let level = rng.gen_range(1..=3);
        let f = {
            let d = rng.gen_range(1..=3);
            rand_poly(&mut rng, level, d, 2, 0.5)
        };
        let z = make_zero(&f).map_err(|e| e.to_string())?;
        let m = hypercube_min_abs(&z, 20);
        ensure(m.lo() <= &tol, || {
            format!("case {t}: min |make_zero(f)| enclosure {m}")
        })?;
        let signs: HashSet<i8> = grid(level, 9)
            .iter()
            .map(|x| exact_sign(&eval_exact(&f, x)))
            .collect();
        if signs.contains(&1) && signs.contains(&-1) {
            changes += 1;
            for _ in 0..20 {
                let x: Vec<Rational> = (0..level).map(|_| rand_unit(&mut rng)).collect();
                let want = eval_exact(&f, &x);
                let xs: Vec<ApproxReal> =
                    x.iter().cloned().map(ApproxReal::from_rational).collect();
                let got = z.eval_point(&xs).unwrap();
                ensure(got.as_exact() == Some(&want), || {
                    format!("case {t}: make_zero changed f at {x:?}")
                })?;
            }
        }
    }
    Ok(format!(
        "50/50 minima within 2^-15; {changes} sign-change cases unchanged at 20 points each"
    ))
}

// 7 and 8. ------------------------------------------------------------------

struct Entry {
    name: &'static str,
    actions: Vec<usize>,
    payoffs: Vec<Vec<i64>>,
}

fn battery() -> Vec<Entry> {
    vec![
        Entry {
            name: "matching pennies",
            actions: vec![2, 2],
            payoffs: vec![vec![1, -1, -1, 1], vec![-1, 1, 1, -1]],
        },
        Entry {
            name: "prisoner's dilemma",
            actions: vec![2, 2],
            payoffs: vec![vec![3, 0, 5, 1], vec![3, 5, 0, 1]],
        },
        Entry {
            name: "battle of the sexes",
            actions: vec![2, 2],
            payoffs: vec![vec![2, 0, 0, 1], vec![1, 0, 0, 2]],
        },
        Entry {
            name: "rock-paper-scissors",
            actions: vec![3, 3],
            payoffs: vec![
                vec![0, -1, 1, 1, 0, -1, -1, 1, 0],
                vec![0, 1, -1, -1, 0, 1, 1, -1, 0],
            ],
        },
        Entry {
            name: "2x2x2 coordination",
            actions: vec![2, 2, 2],
            payoffs: vec![vec![1, 0, 0, 0, 0, 0, 0, 1]; 3],
        },
        Entry {
            name: "3-player zero game",
            actions: vec![2, 2, 2],
            payoffs: vec![vec![0; 8]; 3],
        },
    ]
}

fn game_of(e: &Entry) -> Game {
    let p: Vec<Vec<Rational>> = e
        .payoffs
        .iter()
        .map(|t| t.iter().map(|&v| q(v, 1)).collect())
        .collect();
    Game::from_rationals(e.actions.clone(), &p).unwrap()
}

fn nash_config() -> NashConfig {
    NashConfig {
        epsilon: pow2_neg(15),
        ..NashConfig::default()
    }
}

fn nash_battery() -> Check {
    let cfg = nash_config();
    let tol = pow2_neg(10);
    let mut cross = 0;
    for e in battery() {
        let g = game_of(&e);
        let out = nash_solve(&g, &cfg).map_err(|err| err.to_string())?;
        let v = verify_epsilon_nash(&g, &out.profile, &pow2_neg(15), 40)
            .map_err(|err| err.to_string())?;
        ensure(v == Truth::True, || {
            format!("{}: verification {v:?}", e.name)
        })?;
        if e.actions.len() == 2 {
            let (m, n) = (e.actions[0], e.actions[1]);
            let mat = |k: usize| {
                (0..m)
                    .map(|i| (0..n).map(|j| q(e.payoffs[k][i * n + j], 1)).collect())
                    .collect::<Vec<Vec<Rational>>>()
            };
            let order: Vec<(Vec<usize>, Vec<usize>)> = all_supports(&g)
                .into_iter()
                .map(|s| (s.0[0].clone(), s.0[1].clone()))
                .collect();
            let (supp, _, _, v1, v2) = two_player_equilibrium(&mat(0), &mat(1), &order)
                .ok_or("oracle found no equilibrium")?;
            ensure(
                out.support.0 == vec![supp.0.clone(), supp.1.clone()],
                || format!("{}: support {:?}, oracle {:?}", e.name, out.support.0, supp),
            )?;
            for (i, want) in [v1, v2].iter().enumerate() {
                let got = g.expected_payoff(&out.profile, i).unwrap().approx(40);
                ensure((&got - want).abs() <= tol, || {
                    format!("{}: player {i} payoff {got}, oracle {want}", e.name)
                })?;
            }
            cross += 1;
        }
    }
    Ok(format!(
        "6/6 games verified at 2^-15; {cross}/4 two-player games match the exact oracle"
    ))
}

fn report(e: &Entry) -> String {
    Tally::reset();
    let g = game_of(e);
    let out = nash_solve(&g, &nash_config()).expect("battery game solves");
    let t = Tally::current();
    let profile: Vec<Vec<String>> = out
        .profile
        .sigma
        .iter()
        .map(|s| s.iter().map(|c| c.enclosure_at(30).to_string()).collect())
        .collect();
    json!({
        "game": e.name,
        "profile": profile,
        "support": out.support.0,
        "created": t.created,
        "resolved": t.resolved,
        "collapsed": t.collapsed,
        "depth": out.refutation_depth,
        "boxes": out.refutation_boxes,
    })
    .to_string()
}

fn oracle_accounting() -> Check {
    let mut created = 0;
    for e in battery() {
        let (a, b) = (report(&e), report(&e));
        ensure(a == b, || format!("{}: reports differ\n{a}\n{b}", e.name))?;
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        let c = v["created"].as_u64().unwrap();
        ensure(
            c > 0 && v["collapsed"].as_u64().unwrap() <= v["resolved"].as_u64().unwrap(),
            || format!("{}: counts {a}", e.name),
        )?;
        created += c;
    }
    Ok(format!(
        "6/6 reports byte-identical across runs; {created} AoUC instances created in total"
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 8] = [
        (
            "monic-roots inverse check",
            monic_roots_inverse,
            Duration::from_secs(30),
        ),
        (
            "psc oracle equivalence",
            psc_resultant,
            Duration::from_secs(10),
        ),
        ("broot behavior", broot_behavior, Duration::from_secs(20)),
        (
            "representative-sample coverage",
            cad_coverage,
            Duration::from_secs(120),
        ),
        ("bpineq", bpineq_checks, Duration::from_secs(60)),
        ("make_zero", make_zero_checks, Duration::from_secs(60)),
        ("nash battery", nash_battery, Duration::from_secs(120)),
        (
            "oracle-use accounting",
            oracle_accounting,
            Duration::from_secs(120),
        ),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took <= *limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {took:.1?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(msg) => println!("criterion {} {name}: PASS ({msg}; {took:.1?})", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({msg}; {took:.1?})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::text::rational_from_json;
use crate::poly::MultiPoly;
use crate::reals::{ApproxReal, Rational};

/// A finite game in strategic form.
///
/// `payoffs[i]` lists player `i`'s payoff for every action profile in
/// row-major order (player 0's action varies slowest).
#[derive(Clone, Debug)]
pub struct Game {
    actions: Vec<usize>,
    payoffs: Vec<Vec<ApproxReal>>,
}

/// Mixed strategies, one probability vector per player.
#[derive(Clone, Debug)]
pub struct StrategyProfile {
    pub sigma: Vec<Vec<ApproxReal>>,
}

impl StrategyProfile {
    pub fn pure(actions: &[usize], choice: &[usize]) -> Self {
        let sigma = actions
            .iter()
            .zip(choice)
            .map(|(&m, &c)| {
                (0..m)
                    .map(|a| ApproxReal::from_int((a == c) as i64))
                    .collect()
            })
            .collect();
        StrategyProfile { sigma }
    }

    pub fn from_rationals(sigma: &[Vec<Rational>]) -> Self {
        StrategyProfile {
            sigma: sigma
                .iter()
                .map(|s| s.iter().cloned().map(ApproxReal::from_rational).collect())
                .collect(),
        }
    }
}

impl Game {
    pub fn new(actions: Vec<usize>, payoffs: Vec<Vec<ApproxReal>>) -> Result<Self> {
        if actions.is_empty() || actions.contains(&0) {
            return Err(Error::Invalid(
                "every player needs at least one action".into(),
            ));
        }
        if payoffs.len() != actions.len() {
            return Err(Error::DimensionMismatch {
                expected: actions.len(),
                got: payoffs.len(),
            });
        }
        let profiles: usize = actions.iter().product();
        if let Some(t) = payoffs.iter().find(|t| t.len() != profiles) {
            return Err(Error::DimensionMismatch {
                expected: profiles,
                got: t.len(),
            });
        }
        Ok(Game { actions, payoffs })
    }

    pub fn from_rationals(actions: Vec<usize>, payoffs: &[Vec<Rational>]) -> Result<Self> {
        Game::new(
            actions,
            payoffs
                .iter()
                .map(|t| t.iter().cloned().map(ApproxReal::from_rational).collect())
                .collect(),
        )
    }

    /// `{"players": n, "actions": [m_1,…], "payoffs": [[…], …]}` with entries
    /// `"p/q"`, decimals or `[lo, hi]`; an interval stands for its midpoint.
    pub fn from_json(v: &Value) -> Result<Self> {
        let perr = |m: &str| Error::Parse(m.to_owned());
        let players = v
            .get("players")
            .and_then(Value::as_u64)
            .ok_or_else(|| perr("missing \"players\""))? as usize;
        let actions: Vec<usize> = v
            .get("actions")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("missing \"actions\""))?
            .iter()
            .map(|a| {
                a.as_u64()
                    .map(|a| a as usize)
                    .ok_or_else(|| perr("action counts must be natural numbers"))
            })
            .collect::<Result<_>>()?;
        if actions.len() != players {
            return Err(Error::DimensionMismatch {
                expected: players,
                got: actions.len(),
            });
        }
        let tensors = v
            .get("payoffs")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("missing \"payoffs\""))?;
        let payoffs = tensors
            .iter()
            .map(|t| {
                t.as_array()
                    .ok_or_else(|| perr("payoff tensors must be arrays"))?
                    .iter()
                    .map(payoff_entry)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Game::new(actions, payoffs)
    }

    pub fn players(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn payoff(&self, i: usize, profile: &[usize]) -> &ApproxReal {
        &self.payoffs[i][self.index(profile)]
    }

    fn index(&self, profile: &[usize]) -> usize {
        profile
            .iter()
            .zip(&self.actions)
            .fold(0, |acc, (&a, &m)| acc * m + a)
    }

    /// All action profiles in row-major order.
    pub fn profiles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &m in &self.actions {
            out = out
                .into_iter()
                .flat_map(|p| (0..m).map(move |a| [p.clone(), vec![a]].concat()))
                .collect();
        }
        out
    }

    /// Index of variable `σ_i(a)` among all `Σ m_i` probabilities.
    pub fn var_index(&self, i: usize, a: usize) -> usize {
        self.actions[..i].iter().sum::<usize>() + a
    }

    pub fn num_vars(&self) -> usize {
        self.actions.iter().sum()
    }

    fn check(&self, sigma: &StrategyProfile) -> Result<()> {
        if sigma.sigma.len() != self.players() {
            return Err(Error::DimensionMismatch {
                expected: self.players(),
                got: sigma.sigma.len(),
            });
        }
        for (s, &m) in sigma.sigma.iter().zip(&self.actions) {
            if s.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: s.len(),
                });
            }
        }
        Ok(())
    }

    /// `Σ_profiles Π_{j≠fixed} σ_j(a_j) · u_i`, with player `fixed.0` playing `fixed.1` if given.
    fn expectation(
        &self,
        sigma: &StrategyProfile,
        i: usize,
        fixed: Option<(usize, usize)>,
    ) -> ApproxReal {
        let mut acc = ApproxReal::zero();
        for prof in self.profiles() {
            if fixed.is_some_and(|(j, a)| prof[j] != a) {
                continue;
            }
            let mut w = self.payoff(i, &prof).clone();
            for (j, &a) in prof.iter().enumerate() {
                if fixed.is_none_or(|(fj, _)| fj != j) {
                    w = w.mul(&sigma.sigma[j][a]);
                }
            }
            acc = acc.add(&w);
        }
        acc
    }

    pub fn expected_payoff(&self, sigma: &StrategyProfile, i: usize) -> Result<ApproxReal> {
        self.check(sigma)?;
        Ok(self.expectation(sigma, i, None))
    }

    /// Player `i`'s expected payoff for switching to pure action `a`.
    pub fn deviation_payoff(
        &self,
        sigma: &StrategyProfile,
        i: usize,
        a: usize,
    ) -> Result<ApproxReal> {
        self.check(sigma)?;
        if a >= self.actions[i] {
            return Err(Error::OutOfRange(format!("player {i} has no action {a}")));
        }
        Ok(self.expectation(sigma, i, Some((i, a))))
    }

    /// `deviation_payoff(i, a)` as a polynomial in the probability variables.
    pub fn deviation_poly(&self, i: usize, a: usize) -> MultiPoly {
        let n = self.num_vars();
        let mut acc = MultiPoly::zero(n);
        for prof in self.profiles() {
            if prof[i] != a {
                continue;
            }
            let u = self.payoff(i, &prof);
            if u.is_exact_zero() {
                continue;
            }
            let mut term = MultiPoly::constant(n, u.clone());
            for (j, &b) in prof.iter().enumerate() {
                if j != i {
                    term = term.mul(&MultiPoly::var(n, self.var_index(j, b)));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

fn payoff_entry(v: &Value) -> Result<ApproxReal> {
    let q = match v {
        Value::Array(b) if b.len() == 2 => {
            let (lo, hi) = (rational_from_json(&b[0])?, rational_from_json(&b[1])?);
            if lo > hi {
                return Err(Error::Parse(format!("empty payoff interval {v}")));
            }
            (lo + hi) / Rational::from_integer(2.into())
        }
        _ => rational_from_json(v)?,
    };
    Ok(ApproxReal::from_rational(q))
}

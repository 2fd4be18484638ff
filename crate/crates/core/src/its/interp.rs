use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Cost, Its, Location, Transition};
use crate::error::InterpError;
use crate::terms::Var;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub loc: Location,
    pub values: Vec<BigInt>,
}

impl Configuration {
    pub fn new(loc: Location, values: impl IntoIterator<Item = impl Into<BigInt>>) -> Self {
        Configuration {
            loc,
            values: values.into_iter().map(Into::into).collect(),
        }
    }
}

/// Applies `t` to `cfg` with the temporaries fixed by `theta`.
///
/// Returns `Ok(None)` when `t` does not start at `cfg.loc` or its guard fails.
pub fn step(
    its: &Its,
    cfg: &Configuration,
    t: &Transition,
    theta: &BTreeMap<Var, BigInt>,
) -> Result<Option<(Configuration, BigInt)>, InterpError> {
    if cfg.values.len() != its.program_vars.len() {
        return Err(InterpError::Arity {
            got: cfg.values.len(),
            expected: its.program_vars.len(),
        });
    }
    apply(t, cfg, theta)
}

pub(crate) fn apply(
    t: &Transition,
    cfg: &Configuration,
    theta: &BTreeMap<Var, BigInt>,
) -> Result<Option<(Configuration, BigInt)>, InterpError> {
    let cost = match &t.cost {
        Cost::Finite(p) => p,
        Cost::Infinite => return Err(InterpError::InfiniteCost),
    };
    let vars = t.program_vars();
    if cfg.values.len() != vars.len() {
        return Err(InterpError::Arity {
            got: cfg.values.len(),
            expected: vars.len(),
        });
    }
    if cfg.loc != t.src {
        return Ok(None);
    }
    let mut val = theta.clone();
    for tv in t.temporaries() {
        if !val.contains_key(&tv) {
            return Err(InterpError::MissingTemporary(tv.name().to_string()));
        }
    }
    val.extend(vars.iter().cloned().zip(cfg.values.iter().cloned()));
    if !t.guard.holds(&val).expect("all variables assigned") {
        return Ok(None);
    }
    let values = t.update.eval(&val).ok_or(InterpError::NonInteger)?;
    let k = cost.eval_int(&val).ok_or(InterpError::NonInteger)?;
    Ok(Some((
        Configuration {
            loc: t.dst.clone(),
            values,
        },
        k,
    )))
}

/// Bounds for the brute-force exploration of runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    pub max_steps: usize,
    /// Inclusive range over which every temporary is enumerated.
    pub temp_range: (i64, i64),
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel {
            max_steps: 64,
            temp_range: (-5, 5),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dh {
    Height(BigInt),
    FuelExhausted,
}

/// Supremum of the costs of all runs from `cfg`, exploring temporaries over
/// `fuel.temp_range`. The empty run has cost 0.
pub fn derivation_height(its: &Its, cfg: &Configuration, fuel: Fuel) -> Result<Dh, InterpError> {
    if cfg.values.len() != its.program_vars.len() {
        return Err(InterpError::Arity {
            got: cfg.values.len(),
            expected: its.program_vars.len(),
        });
    }
    Ok(match explore(its, cfg, fuel, fuel.max_steps)? {
        Some(h) => Dh::Height(h),
        None => Dh::FuelExhausted,
    })
}

fn explore(
    its: &Its,
    cfg: &Configuration,
    fuel: Fuel,
    remaining: usize,
) -> Result<Option<BigInt>, InterpError> {
    let mut best = BigInt::zero();
    for t in its.outgoing(&cfg.loc) {
        let temps: Vec<Var> = t.temporaries().into_iter().collect();
        let (lo, hi) = fuel.temp_range;
        let mut choice = vec![lo; temps.len()];
        loop {
            let theta: BTreeMap<Var, BigInt> = temps
                .iter()
                .cloned()
                .zip(choice.iter().map(|&c| BigInt::from(c)))
                .collect();
            if let Some((next, k)) = apply(t, cfg, &theta)? {
                if remaining == 0 {
                    return Ok(None);
                }
                match explore(its, &next, fuel, remaining - 1)? {
                    Some(h) => best = best.max(k + h),
                    None => return Ok(None),
                }
            }
            // odometer over the temporaries' values
            let mut i = 0;
            while i < choice.len() && choice[i] == hi {
                choice[i] = lo;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    Ok(Some(best))
}

/// Whether the ITS has a run of at most `fuel.max_steps` steps from `from` to
/// `to` with total cost exactly `cost`, enumerating temporaries over
/// `fuel.temp_range`. Breadth-first over (configuration, cost) states.
pub fn replays(
    its: &Its,
    from: &Configuration,
    to: &Configuration,
    cost: &BigInt,
    fuel: Fuel,
) -> Result<bool, InterpError> {
    let mut seen: HashSet<(Configuration, BigInt)> = HashSet::new();
    let mut frontier = vec![(from.clone(), BigInt::zero())];
    seen.insert(frontier[0].clone());
    for depth in 0..=fuel.max_steps {
        if frontier.iter().any(|(c, k)| c == to && k == cost) {
            return Ok(true);
        }
        if depth == fuel.max_steps {
            break;
        }
        let mut next = Vec::new();
        for (cfg, acc) in &frontier {
            for t in its.outgoing(&cfg.loc) {
                if t.cost.is_infinite() {
                    continue;
                }
                for theta in assignments(
                    &t.temporaries().into_iter().collect::<Vec<_>>(),
                    fuel.temp_range,
                ) {
                    if let Some((c, k)) = apply(t, cfg, &theta)? {
                        let state = (c, acc + k);
                        if seen.insert(state.clone()) {
                            next.push(state);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(false)
}

/// All valuations of `vars` over the inclusive range.
fn assignments(vars: &[Var], (lo, hi): (i64, i64)) -> Vec<BTreeMap<Var, BigInt>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|m| {
                (lo..=hi).map(move |c| {
                    let mut m = m.clone();
                    m.insert(v.clone(), BigInt::from(c));
                    m
                })
            })
            .collect();
    }
    out
}

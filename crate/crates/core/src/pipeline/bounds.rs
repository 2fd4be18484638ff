use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::processors::fresh_temporary;
use crate::error::SmtError;
use crate::its::{Cost, Transition};
use crate::smt::{Phase, Solver};
use crate::terms::{Atom, Conjunction, Poly, Subst, Var};

/// Largest ray exponent tried: points `m0 + 2^j · r` for `j` up to this.
const RAY_STEPS: u32 = 10;
/// Minimal distance between the two models spanning a ray.
const RAY_SPREAD: i64 = 10;

/// Degree of the cost along a verified ray of the guard.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hint {
    pub degree: u32,
    pub label: &'static str,
}

impl Hint {
    fn new(degree: u32) -> Self {
        Hint {
            degree,
            label: "heuristic",
        }
    }
}

/// `dh(main(x)) ≥ I_guard · cost`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub transition: Transition,
    pub guard: Conjunction,
    pub cost: Cost,
    pub hint: Option<Hint>,
}

impl BoundResult {
    pub fn is_infinite(&self) -> bool {
        self.cost.is_infinite()
    }

    pub fn reading(&self) -> String {
        let params: Vec<&str> = self
            .transition
            .program_vars()
            .iter()
            .map(Var::name)
            .collect();
        let cost = match &self.cost {
            Cost::Finite(p) if p.terms().count() > 1 => format!("({p})"),
            c => c.to_string(),
        };
        format!(
            "dh({}({})) >= I[{}] * {}",
            self.transition.src,
            params.join(", "),
            self.guard,
            cost
        )
    }
}

/// The bound a simplified transition gives, or `None` unless its guard is
/// provably satisfiable.
pub fn concrete_bound(
    st: &Transition,
    solver: &mut Solver,
) -> Result<Option<BoundResult>, SmtError> {
    let prev = solver.set_phase(Phase::Guard);
    let sat = solver.is_sat(&st.guard);
    solver.set_phase(prev);
    Ok((sat? == Some(true)).then(|| BoundResult {
        transition: st.clone(),
        guard: st.guard.clone(),
        cost: st.cost.clone(),
        hint: None,
    }))
}

/// Heuristic degree of the bound. Rays `m0 + k·r` are spanned by two guard
/// models that differ by at least 10 in one program variable, or in all of
/// them. Membership is checked at `k = 2^0 .. 2^10`; the hint is the largest
/// degree in `k` with a positive leading coefficient. No verified ray means
/// no hint.
pub fn asymptotic_estimate(
    br: &BoundResult,
    solver: &mut Solver,
) -> Result<Option<Hint>, SmtError> {
    let Cost::Finite(p) = &br.cost else {
        return Ok(None);
    };
    if p.is_constant() {
        return Ok(Some(Hint::new(0)));
    }
    let prev = solver.set_phase(Phase::Other);
    let result = rays(br, p, solver);
    solver.set_phase(prev);
    result
}

fn rays(br: &BoundResult, p: &Poly, solver: &mut Solver) -> Result<Option<Hint>, SmtError> {
    let Some(m0) = solver.model(&br.guard)? else {
        return Ok(None);
    };
    let mut vars: BTreeSet<Var> = br.guard.vars();
    vars.extend(p.vars());
    let used: BTreeSet<String> = vars.iter().map(|v| v.name().to_string()).collect();
    let k = fresh_temporary("k", &used);
    let value = |m: &BTreeMap<Var, BigInt>, v: &Var| m.get(v).cloned().unwrap_or_else(BigInt::zero);

    // Directions: each program variable alone, then all of them together.
    let program: Vec<&Var> = vars.iter().filter(|v| v.is_program()).collect();
    let mut directions: Vec<Vec<&Var>> = program.iter().map(|v| vec![*v]).collect();
    if program.len() > 1 {
        directions.push(program.clone());
    }
    let mut best: Option<u32> = None;
    for dir in &directions {
        for sign in [1, -1] {
            let mut wider = br.guard.clone();
            for v in dir {
                let offset = &Poly::var((*v).clone()) - &Poly::constant(value(&m0, v).into());
                wider.push(Atom::geq(
                    &offset.scale(&BigInt::from(sign).into()),
                    &Poly::int(RAY_SPREAD),
                ));
            }
            let Some(m1) = solver.model(&wider)? else {
                continue;
            };
            let ray: BTreeMap<Var, BigInt> = vars
                .iter()
                .map(|u| (u.clone(), value(&m1, u) - value(&m0, u)))
                .collect();
            let on_ray = |j: u32| -> BTreeMap<Var, BigInt> {
                let scale = BigInt::from(1u64 << j);
                vars.iter()
                    .map(|u| (u.clone(), value(&m0, u) + &scale * &ray[u]))
                    .collect()
            };
            if !(0..=RAY_STEPS).all(|j| br.guard.holds(&on_ray(j)) == Some(true)) {
                continue;
            }
            let sigma: Subst = vars
                .iter()
                .map(|u| {
                    let base = Poly::constant(value(&m0, u).into());
                    let step = Poly::var(k.clone()).scale(&ray[u].clone().into());
                    (u.clone(), &base + &step)
                })
                .collect();
            let along = p.substitute(&sigma);
            let d = along.degree();
            let lead = along
                .coefficients_in(&k)
                .get(&d)
                .and_then(Poly::as_constant)
                .unwrap_or_default();
            if lead.is_positive() {
                best = best.max(Some(d));
            }
        }
    }
    Ok(best.map(Hint::new))
}

#![allow(dead_code)]

use std::collections::BTreeMap;

use loopacc::accel::Strategy;
use loopacc::its::{replays, step, Fuel};
use loopacc::terms::Var;
use loopacc::{Configuration, Engine, Its, Solver, SolverConfig, Transition};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn solver() -> Solver {
    Solver::new(SolverConfig::default()).expect("an SMT solver on PATH or in SMT_SOLVER")
}

pub fn engine() -> Engine {
    Engine::new(solver(), Strategy::Core)
}

/// Samples ground steps of `t` and checks that `original` can reproduce each
/// one with the same endpoints and total cost. Returns how many samples were
/// applicable.
pub fn assert_under_approximates(
    original: &Its,
    t: &Transition,
    samples: usize,
    seed: u64,
) -> usize {
    assert!(!t.cost.is_infinite());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let temps: Vec<Var> = t.temporaries().into_iter().collect();
    let fuel = Fuel {
        max_steps: 40,
        temp_range: (-4, 6),
    };
    let mut applicable = 0;
    for _ in 0..samples {
        let values: Vec<BigInt> = t
            .program_vars()
            .iter()
            .map(|_| rng.gen_range(-4i64..=6).into())
            .collect();
        let theta: BTreeMap<Var, BigInt> = temps
            .iter()
            .map(|v| (v.clone(), rng.gen_range(-4i64..=6).into()))
            .collect();
        let from = Configuration::new(t.src.clone(), values);
        let Some((to, cost)) = step(original, &from, t, &theta).unwrap() else {
            continue;
        };
        applicable += 1;
        assert!(
            replays(original, &from, &to, &cost, fuel).unwrap(),
            "no run of the original from {from:?} to {to:?} with cost {cost} for {t}"
        );
    }
    applicable
}

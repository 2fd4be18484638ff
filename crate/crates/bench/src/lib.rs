//! Shared fixtures for the benchmarks.

use loopacc::{parse, workload, Its, Transition, Update};

pub const T_LOOP: &str = "vars x\nstart main\nmain(x) -> f(x) [true]\nf(x) -> f(x - 1) [x > 0]\n";
pub const CALCULUS: &str =
    "vars x y\nstart main\nmain(x, y) -> f(x, y) [true]\nf(x, y) -> f(x - y, y) [x > 0 && y >= 0] cost x\n";
pub const FOUR: &str = "vars x1 x2 x3 x4\nstart main\n\
    main(x1, x2, x3, x4) -> f(x1, x2, x3, x4) [true]\n\
    f(x1, x2, x3, x4) -> f(1, x2 + x1, x3 + x2, -x4) [x1 > 0 && x3 > 0 && x4 + 1 > 0]\n";

pub fn its(src: &str) -> Its {
    parse(src).expect("fixture parses")
}

/// The first simple loop of `src`.
pub fn simple_loop(src: &str) -> Transition {
    its(src)
        .transitions
        .into_iter()
        .find(Transition::is_simple_loop)
        .expect("fixture has a simple loop")
}

/// `count` random loops with `m` guard atoms.
pub fn loops(m: usize, count: usize, seed: u64) -> Vec<Transition> {
    let mut rng = workload::rng(seed);
    (0..count)
        .map(|_| workload::accelerable_loop(&mut rng, m))
        .collect()
}

/// `count` random triangular updates over `k` variables.
pub fn updates(k: usize, count: usize, seed: u64) -> Vec<Update> {
    let mut rng = workload::rng(seed);
    (0..count)
        .map(|_| workload::triangular_update(&mut rng, k))
        .collect()
}

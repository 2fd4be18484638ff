//! Seeded generators of random loops and updates in the supported class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::its::{Cost, Location, Transition};
use crate::terms::{Atom, Conjunction, Poly, Update, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

enum Driver {
    Constant(i64),
    /// A temporary with guard atom `u > 0`.
    Temporary(Var),
    /// A variable reset to a positive constant, with guard atom `r > 0`.
    Reset(Var, i64),
}

/// A simple loop at `f` whose guard has exactly `m` atoms.
///
/// The program variables form chains `x_a, ..., x_b` where each variable
/// moves by the next one (`x_i ± x_{i+1}`) and the last one by a constant, a
/// positive temporary or a positive reset variable. Guard atoms are listed
/// chain by chain with the dependent variable first.
pub fn accelerable_loop<R: Rng>(rng: &mut R, m: usize) -> Transition {
    assert!(m >= 1);
    let mut vars: Vec<Var> = Vec::new();
    let mut rhs: Vec<Poly> = Vec::new();
    let mut guard = Conjunction::top();
    let mut chain_vars = Vec::new();
    let mut temps = 0;
    let mut remaining = m;
    while remaining > 0 {
        let len = rng.gen_range(1..=remaining.min(3));
        remaining -= len;
        let increasing = rng.gen_bool(0.3);
        let sign = if increasing { 1 } else { -1 };

        // what drives the last variable of the chain
        let driver = match rng.gen_range(0..4) {
            0 if remaining > 0 => {
                temps += 1;
                Driver::Temporary(Var::temporary(format!("u{temps}")))
            }
            1 if remaining > 0 => Driver::Reset(
                Var::program(format!("r{}", vars.len() + len + 1)),
                rng.gen_range(1..=2),
            ),
            _ => Driver::Constant(rng.gen_range(1..=2)),
        };
        let step = match &driver {
            Driver::Constant(c) => Poly::int(*c),
            Driver::Temporary(v) | Driver::Reset(v, _) => Poly::var(v.clone()),
        };
        if !matches!(driver, Driver::Constant(_)) {
            remaining -= 1;
        }

        let first = vars.len();
        for j in 0..len {
            vars.push(Var::program(format!("x{}", first + j + 1)));
        }
        for j in 0..len {
            let x = Poly::var(vars[first + j].clone());
            let next = if j + 1 < len {
                Poly::var(vars[first + j + 1].clone())
            } else {
                step.clone()
            };
            rhs.push(&x + &next.scale(&num_rational::BigRational::from_integer(sign.into())));
            let offset = Poly::int(rng.gen_range(0..=1));
            guard.push(Atom::gt_zero(&x + &offset));
            chain_vars.push(vars[first + j].clone());
        }
        match driver {
            Driver::Constant(_) => {}
            Driver::Temporary(u) => guard.push(Atom::gt_zero(Poly::var(u))),
            Driver::Reset(r, c) => {
                guard.push(Atom::gt_zero(Poly::var(r.clone())));
                vars.push(r);
                rhs.push(Poly::int(c));
            }
        }
    }
    let cost = match rng.gen_range(0..4) {
        0 => Poly::one(),
        1 => Poly::int(2),
        _ => Poly::var(chain_vars.choose(rng).expect("at least one chain").clone()),
    };
    Transition {
        src: Location::new("f"),
        dst: Location::new("f"),
        cost: Cost::Finite(cost),
        update: Update::new(vars, rhs),
        guard,
    }
}

fn small<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Poly {
    Poly::int(rng.gen_range(lo..=hi))
}

/// A random update over `k` program variables in the triangular class, with
/// occasional resets and temporaries. Resets never involve program variables.
pub fn triangular_update<R: Rng>(rng: &mut R, k: usize) -> Update {
    let vars: Vec<Var> = (1..=k).map(|i| Var::program(format!("x{i}"))).collect();
    let u = Poly::var(Var::temporary("u"));
    let rhs = (0..k)
        .map(|i| {
            if rng.gen_bool(0.2) {
                return if rng.gen_bool(0.5) {
                    small(rng, -3, 3)
                } else {
                    &u + &small(rng, -1, 1)
                };
            }
            let x = Poly::var(vars[i].clone());
            let mut q = small(rng, -2, 2);
            for earlier in &vars[..i] {
                q = &q + &(&small(rng, -2, 2) * &Poly::var(earlier.clone()));
            }
            if i > 0 && rng.gen_bool(0.3) {
                let a = Poly::var(vars[rng.gen_range(0..i)].clone());
                let b = Poly::var(vars[rng.gen_range(0..i)].clone());
                q = &q + &(&a * &b);
            }
            if rng.gen_bool(0.2) {
                q = &q + &u;
            }
            &x + &q
        })
        .collect();
    Update::new(vars, rhs)
}

/// A random polynomial of degree at most 2 over `vars`.
pub fn cost_poly<R: Rng>(rng: &mut R, vars: &[Var]) -> Poly {
    let mut p = small(rng, 0, 2);
    for v in vars {
        if rng.gen_bool(0.5) {
            p = &p + &(&small(rng, -2, 2) * &Poly::var(v.clone()));
        }
    }
    if !vars.is_empty() && rng.gen_bool(0.3) {
        let a = Poly::var(vars.choose(rng).unwrap().clone());
        p = &p + &(&a * &a);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::closed_form;

    #[test]
    fn loops_have_the_requested_guard_size() {
        let mut r = rng(7);
        for m in 1..=8 {
            for _ in 0..20 {
                let t = accelerable_loop(&mut r, m);
                assert_eq!(t.guard.len(), m, "{t}");
                assert!(closed_form(&t.update).is_ok(), "{t}");
            }
        }
    }

    #[test]
    fn generation_is_seeded() {
        let a = accelerable_loop(&mut rng(3), 5);
        let b = accelerable_loop(&mut rng(3), 5);
        assert_eq!(a, b);
        assert_eq!(
            triangular_update(&mut rng(9), 3),
            triangular_update(&mut rng(9), 3)
        );
    }
}

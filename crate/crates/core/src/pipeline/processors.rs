use std::collections::BTreeSet;

use crate::accel::Certificate;
use crate::error::{Error, SmtError};
use crate::its::{Cost, Its, Transition};
use crate::smt::{Phase, Solver};
use crate::terms::{Atom, Poly, Subst, Var};

fn names(t: &Transition) -> BTreeSet<String> {
    t.program_vars()
        .iter()
        .chain(&t.temporaries())
        .map(|v| v.name().to_string())
        .collect()
}

/// A temporary named `base`, or `base` with the smallest numeric suffix that
/// avoids `used`.
pub fn fresh_temporary(base: &str, used: &BTreeSet<String>) -> Var {
    if !used.contains(base) {
        return Var::temporary(base);
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !used.contains(n))
        .map(Var::temporary)
        .unwrap()
}

/// `t1 ⋄ t2`: first `t1`, then `t2`, as a single transition. Non-program
/// variables of `t2` are renamed apart from those of `t1`.
pub fn chain(t1: &Transition, t2: &Transition) -> Result<Transition, Error> {
    if t1.dst != t2.src {
        return Err(Error::LocationMismatch(t1.to_string(), t2.to_string()));
    }
    let mut used = names(t1);
    used.extend(t2.program_vars().iter().map(|v| v.name().to_string()));
    let mut sigma = Subst::new();
    for v in t2.temporaries() {
        if used.contains(v.name()) {
            let w = fresh_temporary(v.name(), &used.union(&names(t2)).cloned().collect());
            used.insert(w.name().to_string());
            sigma.insert(v, Poly::var(w));
        } else {
            used.insert(v.name().to_string());
        }
    }
    let t2 = if sigma.is_empty() {
        t2.clone()
    } else {
        t2.substitute(&sigma)
    };
    let a1 = t1.update.as_subst();
    let cost = match (&t1.cost, &t2.cost) {
        (Cost::Finite(p1), Cost::Finite(p2)) => Cost::Finite(p1 + &p2.substitute(&a1)),
        _ => Cost::Infinite,
    };
    Ok(Transition {
        src: t1.src.clone(),
        dst: t2.dst.clone(),
        cost,
        update: t2.update.after(&t1.update),
        guard: t1.guard.and(&t2.guard.substitute(&a1)),
    })
}

/// If `atom` is `e − v ≥ 0` with `e` free of non-program variables, returns
/// `e`.
fn upper_bound(atom: &Atom, v: &Var) -> Option<Poly> {
    let parts = atom.lhs().coefficients_in(v);
    if parts.keys().any(|&d| d > 1) || parts.get(&1) != Some(&Poly::int(-1)) {
        return None;
    }
    // r − v > 0  ⇔  v ≤ r − 1
    let e = &parts.get(&0).cloned().unwrap_or_else(Poly::zero) - &Poly::one();
    e.vars().iter().all(Var::is_program).then_some(e)
}

#[derive(Clone, Debug)]
pub struct Instantiation {
    pub transition: Transition,
    /// Substitutions applied, in order.
    pub bindings: Vec<(Var, Poly)>,
}

impl Instantiation {
    pub fn is_noop(&self) -> bool {
        self.bindings.is_empty()
    }
}

/// Replaces temporaries by their upper bounds from the guard. Temporaries are
/// visited in order; for each, the first guard atom `e − v ≥ 0` whose
/// substitution leaves a satisfiable guard wins.
pub fn instantiate(t: &Transition, solver: &mut Solver) -> Result<Instantiation, SmtError> {
    let prev = solver.set_phase(Phase::Guard);
    let mut cur = t.clone();
    let mut bindings = Vec::new();
    let result = (|| {
        for v in t.temporaries() {
            let bounds: Vec<Poly> = cur
                .guard
                .atoms()
                .iter()
                .filter_map(|a| upper_bound(a, &v))
                .collect();
            for e in bounds {
                let cand = cur.substitute(&[(v.clone(), e.clone())].into());
                if solver.is_sat(&cand.guard)? == Some(true) {
                    cur = cand;
                    bindings.push((v.clone(), e));
                    break;
                }
            }
        }
        Ok(())
    })();
    solver.set_phase(prev);
    result.map(|()| Instantiation {
        transition: cur,
        bindings,
    })
}

/// Adds the certificate's `f(x) →^∞ sink(x) [ψ]`.
pub fn nonterm_processor(its: &Its, cert: &Certificate) -> Its {
    let mut transitions = its.transitions.clone();
    transitions.push(cert.transition.clone());
    let mut out = Its::new(its.program_vars.clone(), transitions);
    out.start = its.start.clone();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::its::parse;
    use crate::terms::{Conjunction, Update};

    fn pv(name: &str) -> Poly {
        Poly::var(Var::program(name))
    }

    #[test]
    fn chain_init_with_accelerated_loop() {
        let its =
            parse("vars x\nstart main\nmain(x) -> f(x) [true]\nf(x) -> f(0) [x > 0] cost x\n")
                .unwrap();
        let c = chain(&its.transitions[0], &its.transitions[1]).unwrap();
        assert_eq!(c.to_string(), "main(x) -> f(0) [x > 0] cost x + 1");
    }

    #[test]
    fn chain_with_neutral_element() {
        let its = parse("vars x y\nstart main\nf(x, y) -> g(x - u, y) [u > 0 && x > u] cost y\n")
            .unwrap();
        let t = &its.transitions[0];
        let id = Transition {
            src: t.dst.clone(),
            dst: t.dst.clone(),
            cost: Cost::Finite(Poly::zero()),
            update: Update::identity(t.program_vars()),
            guard: Conjunction::top(),
        };
        assert_eq!(&chain(t, &id).unwrap(), t);
    }

    #[test]
    fn chain_renames_temporaries_apart() {
        let its = parse("vars x\nstart main\nf(x) -> f(x - u) [u > 0]\n").unwrap();
        let t = &its.transitions[0];
        let c = chain(t, t).unwrap();
        assert_eq!(
            c.to_string(),
            "f(x) -> f(x - u1 - u) [u > 0 && u1 > 0] cost 2"
        );
        assert!(chain(
            &c,
            &parse("vars x\nstart main\ng(x) -> f(x) [true]\n")
                .unwrap()
                .transitions[0]
        )
        .is_err());
    }

    #[test]
    fn upper_bounds() {
        let n = Var::temporary("n");
        let a = Atom::geq(&pv("x"), &Poly::var(n.clone()));
        assert_eq!(upper_bound(&a, &n), Some(pv("x")));
        assert_eq!(upper_bound(&Atom::gt_zero(Poly::var(n.clone())), &n), None);
        let scaled = Atom::geq(
            &pv("x"),
            &Poly::var(n.clone()).scale(&crate::terms::rat(2, 1)),
        );
        assert_eq!(upper_bound(&scaled, &n), None);
    }
}

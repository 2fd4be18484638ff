//! Conditional acceleration techniques and the calculus that combines them.
//!
//! A guard is handled one atom at a time. Each atom is paired with a
//! technique whose side condition holds relative to the atoms it depends on;
//! the dependencies come from unsat cores of the negated side condition.

mod analysis;
mod engine;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::closedform::ClosedForm;
use crate::terms::{normalize, Atom, Conjunction, Poly, Rel, Update, Var};

pub use analysis::{analyze_dependencies, Candidate, DependencyAnalysis, Strategy};
pub use engine::{Acceleration, Certificate, Engine, Failure, ProblemState};

/// The techniques in decreasing preference: `Inc > Dec > EvDec > EvInc > Fp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Technique {
    Inc,
    Dec,
    EvDec,
    EvInc,
    Fp,
}

impl Technique {
    /// All techniques, most preferred first.
    pub const ALL: [Technique; 5] = [
        Technique::Inc,
        Technique::Dec,
        Technique::EvDec,
        Technique::EvInc,
        Technique::Fp,
    ];

    /// The techniques that certify non-termination.
    pub const NONTERM: [Technique; 3] = [Technique::Inc, Technique::EvInc, Technique::Fp];

    pub fn needs_closed_form(self) -> bool {
        matches!(self, Technique::Dec | Technique::EvDec)
    }

    pub fn name(self) -> &'static str {
        match self {
            Technique::Inc => "inc",
            Technique::Dec => "dec",
            Technique::EvDec => "ev-dec",
            Technique::EvInc => "ev-inc",
            Technique::Fp => "fp",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeedsClosedForm;

impl fmt::Display for NeedsClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("technique needs a closed form")
    }
}

/// `t(a)`.
fn after(t: &Poly, a: &Update) -> Poly {
    t.substitute(&a.as_subst())
}

/// The formula a technique contributes for `ξ = t > 0`. Pure construction;
/// side conditions are checked by the caller.
pub fn technique_result(
    alpha: Technique,
    xi: &Atom,
    a: &Update,
    cf: Option<&ClosedForm>,
) -> Result<Conjunction, NeedsClosedForm> {
    let t = xi.lhs();
    let before_last = || -> Result<Update, NeedsClosedForm> {
        let cf = cf.ok_or(NeedsClosedForm)?;
        Ok(cf.at(&(&Poly::var(Var::iteration()) - &Poly::one())))
    };
    Ok(match alpha {
        Technique::Inc => [xi.clone()].into_iter().collect(),
        Technique::Dec => [xi.substitute(&before_last()?.as_subst())]
            .into_iter()
            .collect(),
        Technique::EvDec => {
            let last = xi.substitute(&before_last()?.as_subst());
            [xi.clone(), last].into_iter().collect()
        }
        Technique::EvInc => [xi.clone(), Atom::geq(&after(t, a), t)]
            .into_iter()
            .collect(),
        Technique::Fp => {
            let mut c: Conjunction = [xi.clone()].into_iter().collect();
            for x in closure(t, a) {
                if let Some(rhs) = a.get(&x) {
                    c.extend(
                        normalize(&Poly::var(x.clone()), Rel::Eq, rhs)
                            .expect("integral guard and update"),
                    );
                }
            }
            c
        }
    })
}

/// Variables reachable from `Vars(t)` through the update, i.e. the union of
/// `Vars(t(a^i))` over all `i`.
pub fn closure(t: &Poly, a: &Update) -> BTreeSet<Var> {
    let mut seen = t.vars();
    let mut todo: Vec<Var> = seen.iter().cloned().collect();
    while let Some(v) = todo.pop() {
        if let Some(rhs) = a.get(&v) {
            for w in rhs.vars() {
                if seen.insert(w.clone()) {
                    todo.push(w);
                }
            }
        }
    }
    seen
}

/// The side condition `local ∧ φ̌ ⟹ conclusion` of an implication-based
/// technique, with `φ̌` left to the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub local: Conjunction,
    pub conclusion: Atom,
}

/// Side condition of `alpha` for `ξ`. Panics for `Fp`, which has none.
pub fn encode(alpha: Technique, xi: &Atom, a: &Update) -> Encoding {
    let t = xi.lhs();
    let ta = after(t, a);
    let taa = after(&ta, a);
    let (local, conclusion) = match alpha {
        Technique::Inc => (xi.clone(), xi.substitute(&a.as_subst())),
        Technique::Dec => (xi.substitute(&a.as_subst()), xi.clone()),
        Technique::EvDec => (Atom::geq(t, &ta), Atom::geq(&ta, &taa)),
        Technique::EvInc => (Atom::geq(&ta, t), Atom::geq(&taa, &ta)),
        Technique::Fp => panic!("fp has no implication to encode"),
    };
    Encoding {
        local: [local].into_iter().collect(),
        conclusion,
    }
}

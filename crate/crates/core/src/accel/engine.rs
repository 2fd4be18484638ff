use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{analyze_dependencies, DependencyAnalysis, Strategy, Technique};
use crate::closedform::{closed_form, iteration_cost, ClosedForm};
use crate::error::SmtError;
use crate::its::{Cost, Location, Transition};
use crate::smt::{Phase, Solver};
use crate::terms::{Atom, Conjunction, Poly, Update, Var};

/// Why a loop could not be accelerated or proven non-terminating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    NotSimpleLoop,
    InfiniteCost,
    UnsatGuard,
    /// The solver could not decide satisfiability of the guard.
    UnknownGuard,
    UnsupportedClosedForm(String),
    /// No admissible technique for this atom.
    Incomplete(Atom),
    /// The accelerated guard is unsatisfiable or undecided.
    EmptyAcceleration,
    /// `φ ⟹ p > 0` could not be proven.
    CostNotPositive,
    UnsatCertificate,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotSimpleLoop => f.write_str("not a simple loop"),
            Failure::InfiniteCost => f.write_str("loop has infinite cost"),
            Failure::UnsatGuard => f.write_str("guard is unsatisfiable"),
            Failure::UnknownGuard => f.write_str("satisfiability of the guard is unknown"),
            Failure::UnsupportedClosedForm(why) => write!(f, "no closed form: {why}"),
            Failure::Incomplete(a) => write!(f, "no technique applies to {a}"),
            Failure::EmptyAcceleration => f.write_str("empty acceleration"),
            Failure::CostNotPositive => f.write_str("cost is not provably positive"),
            Failure::UnsatCertificate => f.write_str("certificate is unsatisfiable"),
        }
    }
}

/// A state `⟦ψ | φ̌ | φ̂⟧` of the calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemState {
    pub psi: Conjunction,
    pub checked: Conjunction,
    pub todo: Conjunction,
}

#[derive(Clone, Debug)]
pub struct Acceleration {
    pub original: Transition,
    /// `f(x) →^q f(a^n(x)) [ψ ∧ n > 0]`, with `n` the iteration symbol.
    pub transition: Transition,
    pub closed_form: ClosedForm,
    pub analysis: DependencyAnalysis,
    /// Guard indices in the order the steps were applied.
    pub order: Vec<usize>,
    pub states: Vec<ProblemState>,
    /// The accelerated guard requires `n >= 2`; the original loop still
    /// covers a single iteration.
    pub retain_original: bool,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub original: Transition,
    /// `f(x) →^∞ sink(x) [ψ]`.
    pub transition: Transition,
    pub psi: Conjunction,
    /// Values for all program variables and temporaries of the loop.
    pub witness: BTreeMap<Var, BigInt>,
    pub analysis: DependencyAnalysis,
    pub order: Vec<usize>,
    pub states: Vec<ProblemState>,
}

/// Applies the selected steps in `order`, recording every state.
fn fold(analysis: &DependencyAnalysis, order: &[usize]) -> (Conjunction, Vec<ProblemState>) {
    let guard = &analysis.guard;
    let mut state = ProblemState {
        psi: Conjunction::top(),
        checked: Conjunction::top(),
        todo: guard.clone(),
    };
    let mut states = vec![state.clone()];
    for &i in order {
        let atom = &guard.atoms()[i];
        state.psi = state.psi.and(&analysis.selection[&i].result);
        state.checked.push(atom.clone());
        state.todo = state.todo.without(atom);
        states.push(state.clone());
    }
    (state.psi, states)
}

/// Owns one solver session; drives acceleration and non-termination proofs.
pub struct Engine {
    solver: Solver,
    strategy: Strategy,
}

impl Engine {
    pub fn new(solver: Solver, strategy: Strategy) -> Self {
        Engine { solver, strategy }
    }

    pub fn solver(&mut self) -> &mut Solver {
        &mut self.solver
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn guard_check(&mut self, c: &Conjunction) -> Result<Option<bool>, SmtError> {
        let prev = self.solver.set_phase(Phase::Guard);
        let r = self.solver.is_sat(c);
        self.solver.set_phase(prev);
        r
    }

    fn satisfiable_guard(&mut self, t: &Transition) -> Result<Result<(), Failure>, SmtError> {
        Ok(match self.guard_check(&t.guard)? {
            Some(true) => Ok(()),
            Some(false) => Err(Failure::UnsatGuard),
            None => Err(Failure::UnknownGuard),
        })
    }

    /// Accelerates a simple loop with all five techniques.
    pub fn accelerate(
        &mut self,
        t: &Transition,
    ) -> Result<Result<Acceleration, Failure>, SmtError> {
        if !t.is_simple_loop() {
            return Ok(Err(Failure::NotSimpleLoop));
        }
        let Some(cost) = t.cost.finite() else {
            return Ok(Err(Failure::InfiniteCost));
        };
        if let Err(f) = self.satisfiable_guard(t)? {
            return Ok(Err(f));
        }
        // Without a closed form, dec and ev-dec are unavailable; the analysis
        // still runs so that the failure names the atom that blocks it.
        let cf = closed_form(&t.update);
        let analysis = analyze_dependencies(
            &mut self.solver,
            &t.guard,
            &t.update,
            cf.as_ref().ok(),
            &Technique::ALL,
            self.strategy,
        )?;
        if let Some(atom) = analysis.incomplete() {
            return Ok(Err(Failure::Incomplete(atom.clone())));
        }
        let cf = match cf {
            Ok(cf) => cf,
            Err(e) => return Ok(Err(Failure::UnsupportedClosedForm(e.0))),
        };
        let q = match iteration_cost(cost, &cf) {
            Ok(q) => q,
            Err(e) => return Ok(Err(Failure::UnsupportedClosedForm(e.0))),
        };
        let order = analysis.total_order();
        let (psi, states) = fold(&analysis, &order);

        let retain_original = cf.threshold() == 1
            && analysis
                .selection
                .values()
                .any(|c| c.technique.needs_closed_form());
        let n = Poly::var(Var::iteration());
        let mut guard = psi;
        guard.push(Atom::gt_zero(n.clone()));
        if retain_original {
            guard.push(Atom::gt_zero(&n - &Poly::one()));
        }
        // The smallest admissible n is an easy witness to try before the
        // full nonlinear query.
        let least = Poly::int(if retain_original { 2 } else { 1 });
        let probe = guard.substitute(&[(Var::iteration(), least)].into());
        if self.guard_check(&probe)? != Some(true) && self.guard_check(&guard)? != Some(true) {
            return Ok(Err(Failure::EmptyAcceleration));
        }
        let transition = Transition {
            src: t.src.clone(),
            dst: t.dst.clone(),
            cost: Cost::Finite(q),
            update: cf.as_update().clone(),
            guard,
        };
        Ok(Ok(Acceleration {
            original: t.clone(),
            transition,
            closed_form: cf,
            analysis,
            order,
            states,
            retain_original,
        }))
    }

    /// Tries to show that some configuration admits an infinite run of the
    /// loop, using only techniques that preserve the guard forever.
    pub fn prove_nonterm(
        &mut self,
        t: &Transition,
    ) -> Result<Result<Certificate, Failure>, SmtError> {
        if !t.is_simple_loop() {
            return Ok(Err(Failure::NotSimpleLoop));
        }
        let Some(cost) = t.cost.finite() else {
            return Ok(Err(Failure::InfiniteCost));
        };
        if let Err(f) = self.satisfiable_guard(t)? {
            return Ok(Err(f));
        }
        let prev = self.solver.set_phase(Phase::Guard);
        let positive = self.solver.implies(
            &t.guard,
            &[Atom::gt_zero(cost.clone())].into_iter().collect(),
        );
        self.solver.set_phase(prev);
        if !positive? {
            return Ok(Err(Failure::CostNotPositive));
        }
        let analysis = analyze_dependencies(
            &mut self.solver,
            &t.guard,
            &t.update,
            None,
            &Technique::NONTERM,
            self.strategy,
        )?;
        if let Some(atom) = analysis.incomplete() {
            return Ok(Err(Failure::Incomplete(atom.clone())));
        }
        let order = analysis.total_order();
        let (psi, states) = fold(&analysis, &order);

        let prev = self.solver.set_phase(Phase::Guard);
        let model = self.solver.model(&psi);
        self.solver.set_phase(prev);
        let Some(model) = model? else {
            return Ok(Err(Failure::UnsatCertificate));
        };
        let mut witness: BTreeMap<Var, BigInt> = t
            .program_vars()
            .iter()
            .cloned()
            .chain(t.temporaries())
            .map(|v| (v, BigInt::zero()))
            .collect();
        witness.extend(model);

        let transition = Transition {
            src: t.src.clone(),
            dst: Location::sink(),
            cost: Cost::Infinite,
            update: Update::identity(t.program_vars()),
            guard: psi.clone(),
        };
        Ok(Ok(Certificate {
            original: t.clone(),
            transition,
            psi,
            witness,
            analysis,
            order,
            states,
        }))
    }
}

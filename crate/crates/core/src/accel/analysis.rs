use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{encode, technique_result, Technique};
use crate::closedform::ClosedForm;
use crate::error::SmtError;
use crate::smt::{Phase, QueryStats, SmtFormula, SmtResult, Solver};
use crate::terms::{Atom, Conjunction, Update};

/// How techniques are matched with guard atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// One side-condition check per (technique, atom) pair against the whole
    /// rest of the guard; dependencies come from unsat cores.
    #[default]
    Core,
    /// Checks relative to the atoms handled so far and restarts after every
    /// successful step.
    Naive,
}

/// A technique application that passed its side condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub technique: Technique,
    /// Index into the guard.
    pub atom: usize,
    /// Indices of the guard atoms the side condition needs.
    pub deps: BTreeSet<usize>,
    pub result: Conjunction,
}

#[derive(Clone, Debug)]
pub struct DependencyAnalysis {
    pub guard: Conjunction,
    pub strategy: Strategy,
    /// Every admissible candidate found, in discovery order.
    pub candidates: Vec<Candidate>,
    /// The chosen candidate per guard atom.
    pub selection: BTreeMap<usize, Candidate>,
    /// Queries spent by the analysis.
    pub stats: QueryStats,
}

impl DependencyAnalysis {
    pub fn is_complete(&self) -> bool {
        self.selection.len() == self.guard.len()
    }

    /// First atom without a selected technique.
    pub fn incomplete(&self) -> Option<&Atom> {
        (0..self.guard.len())
            .find(|i| !self.selection.contains_key(i))
            .map(|i| &self.guard.atoms()[i])
    }

    /// Pairs `(d, i)` meaning the step for atom `d` precedes the one for `i`.
    pub fn precedence(&self) -> Vec<(usize, usize)> {
        self.selection
            .values()
            .flat_map(|c| c.deps.iter().map(move |&d| (d, c.atom)))
            .collect()
    }

    /// A total order on the selected steps extending the precedence; ties go
    /// to the smaller atom index.
    pub fn total_order(&self) -> Vec<usize> {
        let mut indeg: BTreeMap<usize, usize> = self.selection.keys().map(|&i| (i, 0)).collect();
        for (d, i) in self.precedence() {
            if self.selection.contains_key(&d) {
                *indeg.get_mut(&i).unwrap() += 1;
            }
        }
        let mut ready: BTreeSet<usize> = indeg
            .iter()
            .filter(|(_, &k)| k == 0)
            .map(|(&i, _)| i)
            .collect();
        let mut order = Vec::with_capacity(indeg.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for c in self.selection.values().filter(|c| c.deps.contains(&i)) {
                let k = indeg.get_mut(&c.atom).unwrap();
                *k -= 1;
                if *k == 0 {
                    ready.insert(c.atom);
                }
            }
        }
        assert_eq!(
            order.len(),
            indeg.len(),
            "precedence on the selection is cyclic"
        );
        order
    }

    /// Whether selecting a step for `atom` with `deps` keeps the precedence
    /// acyclic.
    fn acyclic_with(&self, atom: usize, deps: &BTreeSet<usize>) -> bool {
        // A cycle appears iff some dependency is already reachable from `atom`.
        let mut seen = BTreeSet::from([atom]);
        let mut todo = vec![atom];
        while let Some(i) = todo.pop() {
            if deps.contains(&i) {
                return false;
            }
            for c in self.selection.values().filter(|c| c.deps.contains(&i)) {
                if seen.insert(c.atom) {
                    todo.push(c.atom);
                }
            }
        }
        true
    }
}

struct Analyzer<'a> {
    solver: &'a mut Solver,
    guard: &'a Conjunction,
    update: &'a Update,
    cf: Option<&'a ClosedForm>,
}

impl Analyzer<'_> {
    /// Checks `alpha` for atom `i` relative to the atoms in `context`.
    fn attempt(
        &mut self,
        alpha: Technique,
        i: usize,
        context: &BTreeSet<usize>,
        use_core: bool,
    ) -> Result<Option<Candidate>, SmtError> {
        let xi = &self.guard.atoms()[i];
        let Ok(result) = technique_result(alpha, xi, self.update, self.cf) else {
            return Ok(None);
        };
        if alpha == Technique::Fp {
            self.solver.set_phase(Phase::Candidate);
            let sat = self.solver.is_sat(&result)?;
            return Ok((sat == Some(true)).then(|| Candidate {
                technique: alpha,
                atom: i,
                deps: BTreeSet::new(),
                result,
            }));
        }

        let enc = encode(alpha, xi, self.update);
        let mut f = SmtFormula::new();
        for &j in context {
            f.assert(
                format!("g{j}"),
                [self.guard.atoms()[j].clone()].into_iter().collect(),
            );
        }
        f.assert("p", enc.local.clone());
        f.assert("c", [enc.conclusion.negate()].into_iter().collect());

        self.solver.set_phase(Phase::Candidate);
        let core = match self.solver.check(&f, use_core, false)? {
            SmtResult::Unsat(core) => core,
            _ => return Ok(None),
        };
        self.solver.set_phase(Phase::Premise);
        let premise = f.restrict(f.labels().filter(|l| *l != "c").collect::<Vec<_>>());
        if !self.solver.check(&premise, false, false)?.is_sat() {
            return Ok(None);
        }
        let deps = if use_core {
            let core = if core.iter().any(|l| l.starts_with('g')) {
                self.solver.shrink_core(&f, &core)?
            } else {
                core
            };
            core.iter()
                .filter_map(|l| l.strip_prefix('g'))
                .map(|j| j.parse().unwrap())
                .collect()
        } else {
            context.clone()
        };
        Ok(Some(Candidate {
            technique: alpha,
            atom: i,
            deps,
            result,
        }))
    }
}

/// Pairs every guard atom with a technique from `allowed`.
///
/// With [`Strategy::Core`] each (technique, atom) pair is checked at most
/// once, so candidate-phase queries stay within `|allowed| · m`. Atoms are
/// visited in guard order; each takes the most preferred admissible technique
/// whose dependencies keep the precedence acyclic. Atoms left over are
/// retried from the cached candidates until nothing changes. Techniques that
/// need a closed form are skipped when `cf` is `None`.
pub fn analyze_dependencies(
    solver: &mut Solver,
    guard: &Conjunction,
    a: &Update,
    cf: Option<&ClosedForm>,
    allowed: &[Technique],
    strategy: Strategy,
) -> Result<DependencyAnalysis, SmtError> {
    let start = solver.stats().clone();
    let prev = solver.phase();
    let mut allowed: Vec<Technique> = allowed.to_vec();
    allowed.sort();
    allowed.dedup();
    allowed.retain(|t| cf.is_some() || !t.needs_closed_form());

    let mut az = Analyzer {
        solver,
        guard,
        update: a,
        cf,
    };
    let mut out = DependencyAnalysis {
        guard: guard.clone(),
        strategy,
        candidates: Vec::new(),
        selection: BTreeMap::new(),
        stats: QueryStats::default(),
    };
    let m = guard.len();
    let result = match strategy {
        Strategy::Core => core_strategy(&mut az, &allowed, m, &mut out),
        Strategy::Naive => naive_strategy(&mut az, &allowed, m, &mut out),
    };
    az.solver.set_phase(prev);
    result?;
    out.stats = az.solver.stats().since(&start);
    Ok(out)
}

fn core_strategy(
    az: &mut Analyzer<'_>,
    allowed: &[Technique],
    m: usize,
    out: &mut DependencyAnalysis,
) -> Result<(), SmtError> {
    let mut memo: BTreeMap<(usize, Technique), Option<Candidate>> = BTreeMap::new();
    for i in 0..m {
        let rest: BTreeSet<usize> = (0..m).filter(|&j| j != i).collect();
        for &alpha in allowed {
            let cand = az.attempt(alpha, i, &rest, true)?;
            memo.insert((i, alpha), cand.clone());
            if let Some(c) = cand {
                out.candidates.push(c.clone());
                if out.acyclic_with(i, &c.deps) {
                    out.selection.insert(i, c);
                    break;
                }
            }
        }
    }
    // Re-pass over uncovered atoms; all their pairs are already in the memo.
    let mut changed = true;
    while changed && !out.is_complete() {
        changed = false;
        let uncovered: Vec<usize> = (0..m).filter(|i| !out.selection.contains_key(i)).collect();
        for i in uncovered {
            let pick = allowed
                .iter()
                .filter_map(|&alpha| memo.get(&(i, alpha)).cloned().flatten())
                .find(|c| out.acyclic_with(i, &c.deps));
            if let Some(c) = pick {
                out.selection.insert(i, c);
                changed = true;
            }
        }
    }
    Ok(())
}

fn naive_strategy(
    az: &mut Analyzer<'_>,
    allowed: &[Technique],
    m: usize,
    out: &mut DependencyAnalysis,
) -> Result<(), SmtError> {
    let mut checked: BTreeSet<usize> = BTreeSet::new();
    'restart: loop {
        for i in (0..m).filter(|i| !checked.contains(i)) {
            for &alpha in allowed {
                if let Some(c) = az.attempt(alpha, i, &checked, false)? {
                    out.candidates.push(c.clone());
                    out.selection.insert(i, c);
                    checked.insert(i);
                    continue 'restart;
                }
            }
        }
        return Ok(());
    }
}

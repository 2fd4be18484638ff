//! Whole-program strategy: accelerate simple loops, instantiate, chain
//! paths from `main` and read off lower bounds or non-termination.

mod bounds;
mod processors;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;

use crate::accel::{DependencyAnalysis, Engine, ProblemState};
use crate::error::SmtError;
use crate::its::{Its, Location, Transition};
use crate::smt::{Phase, QueryStats};

pub use bounds::{asymptotic_estimate, concrete_bound, BoundResult, Hint};
pub use processors::{chain, fresh_temporary, instantiate, nonterm_processor, Instantiation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Complexity,
    NonTermination,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "complexity" => Ok(Mode::Complexity),
            "non_termination" => Ok(Mode::NonTermination),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub timeout: Option<Duration>,
    /// Maximal number of transitions chained into one simplified transition.
    pub max_chain: usize,
    /// Stop collecting simplified transitions beyond this many.
    pub max_simplified: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Complexity,
            timeout: None,
            max_chain: 6,
            max_simplified: 256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// A reachable configuration admits an infinite run.
    #[serde(rename = "NO")]
    NonTerminating,
    #[serde(rename = "LOWER_BOUND")]
    LowerBound,
    #[serde(rename = "MAYBE")]
    Maybe,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NonTerminating => "NO",
            Verdict::LowerBound => "LOWER_BOUND",
            Verdict::Maybe => "MAYBE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Processor {
    ChainCycle,
    Accelerate,
    Nonterm,
    Instantiate,
    Chain,
    Note,
}

impl fmt::Display for Processor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Processor::ChainCycle => "chain-cycle",
            Processor::Accelerate => "accelerate",
            Processor::Nonterm => "nonterm",
            Processor::Instantiate => "instantiate",
            Processor::Chain => "chain",
            Processor::Note => "note",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionEntry {
    pub atom: String,
    pub technique: crate::accel::Technique,
    pub deps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub processor: Processor,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// The chosen (technique, atom) pairs.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub selection: Vec<SelectionEntry>,
    /// Atoms in the order the steps were applied.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub order: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    pub queries: BTreeMap<Phase, usize>,
}

impl TraceEvent {
    fn new(processor: Processor, inputs: Vec<String>) -> Self {
        TraceEvent {
            processor,
            inputs,
            outputs: Vec::new(),
            notes: Vec::new(),
            selection: Vec::new(),
            order: Vec::new(),
            states: Vec::new(),
            queries: BTreeMap::new(),
        }
    }

    fn with_analysis(
        mut self,
        a: &DependencyAnalysis,
        order: &[usize],
        states: &[ProblemState],
    ) -> Self {
        let atom = |i: usize| a.guard.atoms()[i].to_string();
        self.selection = a
            .selection
            .values()
            .map(|c| SelectionEntry {
                atom: atom(c.atom),
                technique: c.technique,
                deps: c.deps.iter().map(|&d| atom(d)).collect(),
            })
            .collect();
        self.order = order.iter().map(|&i| atom(i)).collect();
        self.states = states
            .iter()
            .map(|s| format!("[[ {} | {} | {} ]]", s.psi, s.checked, s.todo))
            .collect();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundDoc {
    pub guard: String,
    pub cost: String,
    pub reading: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessDoc {
    /// Guard of the simplified transition into `sink`.
    pub formula: String,
    /// Start values of the program variables.
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub verdict: Verdict,
    pub mode: Mode,
    pub bound: Option<BoundDoc>,
    pub asymptotic_hint: Option<Hint>,
    pub witness: Option<WitnessDoc>,
    pub simplified: Vec<String>,
    pub trace: Vec<TraceEvent>,
    /// The timeout hit before the strategy finished.
    pub incomplete: bool,
    pub queries: QueryStats,
    #[serde(skip)]
    pub best: Option<BoundResult>,
    #[serde(skip)]
    pub simplified_transitions: Vec<Transition>,
    /// Every transition produced by a processor, for replay against the input.
    #[serde(skip)]
    pub derived: Vec<Transition>,
}

struct Run<'a> {
    engine: &'a mut Engine,
    options: Options,
    deadline: Option<Instant>,
    trace: Vec<TraceEvent>,
    derived: Vec<Transition>,
    incomplete: bool,
}

impl Run<'_> {
    fn expired(&mut self) -> bool {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.incomplete = true;
        }
        self.incomplete
    }

    fn record(&mut self, mut ev: TraceEvent, before: &QueryStats) {
        ev.queries = self.engine.solver().stats().since(before).checks;
        self.trace.push(ev);
    }

    fn stats(&mut self) -> QueryStats {
        self.engine.solver().stats().clone()
    }

    fn guard_sat(&mut self, t: &Transition) -> Result<bool, SmtError> {
        let prev = self.engine.solver().set_phase(Phase::Guard);
        let r = self.engine.solver().is_sat(&t.guard);
        self.engine.solver().set_phase(prev);
        Ok(r? == Some(true))
    }

    /// Chains 2-cycles `f → g → f` into simple loops and notes longer cycles.
    fn cycles(&mut self, its: &Its) -> Result<Vec<Transition>, SmtError> {
        let others: Vec<&Transition> = its
            .transitions
            .iter()
            .filter(|t| !t.is_simple_loop())
            .collect();
        let mut loops = Vec::new();
        for (i, t1) in others.iter().enumerate() {
            for t2 in &others[i + 1..] {
                if t1.dst == t2.src && t2.dst == t1.src {
                    let before = self.stats();
                    let l = chain(t1, t2).expect("locations match");
                    let mut ev = TraceEvent::new(
                        Processor::ChainCycle,
                        vec![t1.to_string(), t2.to_string()],
                    );
                    ev.outputs.push(l.to_string());
                    self.record(ev, &before);
                    self.derived.push(l.clone());
                    loops.push(l);
                }
            }
        }
        for scc in components(&others) {
            if scc.len() > 2 {
                let names: Vec<String> = scc.iter().map(|l| l.to_string()).collect();
                let mut ev = TraceEvent::new(Processor::Note, names.clone());
                ev.notes
                    .push(format!("cycle through {} locations skipped", names.len()));
                self.trace.push(ev);
            }
        }
        Ok(loops)
    }

    fn simplify_loops(
        &mut self,
        its: &Its,
        extra_loops: Vec<Transition>,
    ) -> Result<Vec<Transition>, SmtError> {
        let mut kept: Vec<Transition> = its
            .transitions
            .iter()
            .filter(|t| !t.is_simple_loop())
            .cloned()
            .collect();
        let loops: Vec<Transition> = its
            .transitions
            .iter()
            .filter(|t| t.is_simple_loop())
            .cloned()
            .chain(extra_loops)
            .collect();
        let mut accelerated = Vec::new();
        for l in &loops {
            if self.expired() {
                kept.push(l.clone());
                continue;
            }
            let before = self.stats();
            let mut ev = TraceEvent::new(Processor::Accelerate, vec![l.to_string()]);
            match self.engine.accelerate(l)? {
                Ok(acc) => {
                    ev = ev.with_analysis(&acc.analysis, &acc.order, &acc.states);
                    ev.outputs.push(acc.transition.to_string());
                    if acc.retain_original {
                        ev.notes.push("original kept for a single iteration".into());
                        kept.push(l.clone());
                    }
                    self.derived.push(acc.transition.clone());
                    accelerated.push(acc.transition);
                }
                Err(f) => {
                    ev.notes.push(f.to_string());
                    kept.push(l.clone());
                }
            }
            self.record(ev, &before);

            if self.options.mode == Mode::NonTermination && !self.expired() {
                let before = self.stats();
                let mut ev = TraceEvent::new(Processor::Nonterm, vec![l.to_string()]);
                match self.engine.prove_nonterm(l)? {
                    Ok(cert) => {
                        ev = ev.with_analysis(&cert.analysis, &cert.order, &cert.states);
                        ev.outputs.push(cert.transition.to_string());
                        kept.push(cert.transition);
                    }
                    Err(f) => ev.notes.push(f.to_string()),
                }
                self.record(ev, &before);
            }
        }

        for a in accelerated {
            if a.temporaries().is_empty() || self.expired() {
                kept.push(a);
                continue;
            }
            let before = self.stats();
            let inst = instantiate(&a, self.engine.solver())?;
            let mut ev = TraceEvent::new(Processor::Instantiate, vec![a.to_string()]);
            if inst.is_noop() {
                ev.notes.push("no instantiable temporary".into());
                kept.push(a);
            } else {
                ev.notes = inst
                    .bindings
                    .iter()
                    .map(|(v, e)| format!("{v} := {e}"))
                    .collect();
                ev.outputs.push(inst.transition.to_string());
                self.derived.push(inst.transition.clone());
                kept.push(inst.transition);
            }
            self.record(ev, &before);
        }
        Ok(kept)
    }

    /// Depth-first chaining from `main`; each transition is used at most once
    /// per path and unsatisfiable prefixes are pruned.
    fn chain_from_main(
        &mut self,
        ts: &[Transition],
    ) -> Result<Vec<(Transition, Vec<usize>)>, SmtError> {
        let mut out = Vec::new();
        let mut stack: Vec<(Transition, Vec<usize>)> = Vec::new();
        for (i, t) in ts.iter().enumerate().rev() {
            if t.src.is_main() {
                stack.push((t.clone(), vec![i]));
            }
        }
        while let Some((cur, path)) = stack.pop() {
            if out.len() >= self.options.max_simplified || self.expired() {
                break;
            }
            if !self.guard_sat(&cur)? {
                continue;
            }
            if !cur.dst.is_main() {
                out.push((cur.clone(), path.clone()));
            }
            if path.len() >= self.options.max_chain || cur.cost.is_infinite() {
                continue;
            }
            for (i, t) in ts.iter().enumerate().rev() {
                if t.src == cur.dst && !path.contains(&i) {
                    let mut p = path.clone();
                    p.push(i);
                    stack.push((chain(&cur, t).expect("locations match"), p));
                }
            }
        }
        Ok(out)
    }
}

/// Strongly connected components of the location graph with at least two
/// locations.
fn components(ts: &[&Transition]) -> Vec<BTreeSet<Location>> {
    let locs: BTreeSet<Location> = ts
        .iter()
        .flat_map(|t| [t.src.clone(), t.dst.clone()])
        .collect();
    let reach = |from: &Location| -> BTreeSet<Location> {
        let mut seen = BTreeSet::new();
        let mut todo = vec![from.clone()];
        while let Some(l) = todo.pop() {
            for t in ts.iter().filter(|t| t.src == l) {
                if seen.insert(t.dst.clone()) {
                    todo.push(t.dst.clone());
                }
            }
        }
        seen
    };
    let reachable: BTreeMap<Location, BTreeSet<Location>> =
        locs.iter().map(|l| (l.clone(), reach(l))).collect();
    let mut out: Vec<BTreeSet<Location>> = Vec::new();
    for l in &locs {
        let scc: BTreeSet<Location> = locs
            .iter()
            .filter(|m| reachable[l].contains(m) && reachable[m].contains(l))
            .cloned()
            .collect();
        if scc.len() >= 2 && !out.contains(&scc) {
            out.push(scc);
        }
    }
    out
}

/// Ranks bounds: infinite first, then by hint degree; no hint ranks last.
fn rank(b: &BoundResult) -> (bool, i64) {
    (
        b.is_infinite(),
        b.hint.as_ref().map_or(-1, |h| h.degree as i64),
    )
}

/// Runs the whole strategy on `its`.
pub fn run_strategy(
    its: &Its,
    engine: &mut Engine,
    options: Options,
) -> Result<AnalysisReport, SmtError> {
    let start = engine.solver().stats().clone();
    let mut run = Run {
        engine,
        options,
        deadline: options.timeout.map(|d| Instant::now() + d),
        trace: Vec::new(),
        derived: Vec::new(),
        incomplete: false,
    };
    let extra = run.cycles(its)?;
    let processed = run.simplify_loops(its, extra)?;
    let simplified = run.chain_from_main(&processed)?;

    let mut best: Option<BoundResult> = None;
    let mut witness = None;
    for (st, path) in &simplified {
        if path.len() > 1 {
            let before = run.stats();
            let mut ev = TraceEvent::new(
                Processor::Chain,
                path.iter().map(|&i| processed[i].to_string()).collect(),
            );
            ev.outputs.push(st.to_string());
            run.record(ev, &before);
            run.derived.push(st.clone());
        }
        if run.expired() {
            break;
        }
        let Some(mut br) = concrete_bound(st, run.engine.solver())? else {
            continue;
        };
        br.hint = asymptotic_estimate(&br, run.engine.solver())?;
        if br.is_infinite() && witness.is_none() {
            let prev = run.engine.solver().set_phase(Phase::Guard);
            let model = run.engine.solver().model(&st.guard);
            run.engine.solver().set_phase(prev);
            if let Some(m) = model? {
                let values = st
                    .program_vars()
                    .iter()
                    .map(|v| {
                        (
                            v.name().to_string(),
                            m.get(v).cloned().unwrap_or_default().to_string(),
                        )
                    })
                    .collect();
                witness = Some(WitnessDoc {
                    formula: st.guard.to_string(),
                    values,
                });
            }
        }
        if best.as_ref().is_none_or(|b| rank(&br) > rank(b)) {
            best = Some(br);
        }
    }

    let verdict = match (&best, &witness) {
        (_, Some(_)) => Verdict::NonTerminating,
        (Some(b), None) if options.mode == Mode::Complexity && !b.is_infinite() => {
            Verdict::LowerBound
        }
        _ => Verdict::Maybe,
    };
    let queries = run.engine.solver().stats().since(&start);
    Ok(AnalysisReport {
        verdict,
        mode: options.mode,
        bound: best.as_ref().map(|b| BoundDoc {
            guard: b.guard.to_string(),
            cost: b.cost.to_string(),
            reading: b.reading(),
        }),
        asymptotic_hint: best.as_ref().and_then(|b| b.hint.clone()),
        witness,
        simplified: simplified.iter().map(|(t, _)| t.to_string()).collect(),
        trace: run.trace,
        incomplete: run.incomplete,
        queries,
        best,
        simplified_transitions: simplified.into_iter().map(|(t, _)| t).collect(),
        derived: run.derived,
    })
}

/// Witness start values as integers, keyed by program variable name.
pub fn witness_values(w: &WitnessDoc) -> BTreeMap<String, BigInt> {
    w.values
        .iter()
        .map(|(k, v)| (k.clone(), v.parse().expect("integer witness")))
        .collect()
}

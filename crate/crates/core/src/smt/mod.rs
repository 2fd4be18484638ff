//! SMT-LIB2 client for an external solver process.
//!
//! One solver process serves a whole analysis session. Every query starts
//! with `(reset)` and re-declares everything it needs, so queries are
//! independent of each other. Assertions are named so that unsat cores can
//! be mapped back to the caller's labels.

mod sexp;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::SmtError;
use crate::terms::{Conjunction, Var};

pub use sexp::{parse_all, Sexp};

/// Environment variable naming the solver executable.
pub const SOLVER_ENV: &str = "SMT_SOLVER";

const TRANSCRIPT_TAIL: usize = 200;

/// Labeled conjunctions. Negated atoms are atoms again (integer complement),
/// so every assertion is a conjunction of `t > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmtFormula {
    assertions: Vec<(String, Conjunction)>,
}

impl SmtFormula {
    pub fn new() -> Self {
        SmtFormula::default()
    }

    /// Adds a labeled assertion. Panics on duplicate labels.
    pub fn assert(&mut self, label: impl Into<String>, c: Conjunction) -> &mut Self {
        let label = label.into();
        assert!(
            self.assertions.iter().all(|(l, _)| *l != label),
            "duplicate assertion label {label}"
        );
        self.assertions.push((label, c));
        self
    }

    pub fn with(mut self, label: impl Into<String>, c: Conjunction) -> Self {
        self.assert(label, c);
        self
    }

    pub fn assertions(&self) -> &[(String, Conjunction)] {
        &self.assertions
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.assertions.iter().map(|(l, _)| l.as_str())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.assertions.iter().flat_map(|(_, c)| c.vars()).collect()
    }

    /// The sub-formula containing only the given labels, in original order.
    pub fn restrict<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> SmtFormula {
        let keep: BTreeSet<&str> = keep.into_iter().collect();
        SmtFormula {
            assertions: self
                .assertions
                .iter()
                .filter(|(l, _)| keep.contains(l.as_str()))
                .cloned()
                .collect(),
        }
    }

    pub fn holds(&self, model: &BTreeMap<Var, BigInt>) -> bool {
        self.assertions
            .iter()
            .all(|(_, c)| c.holds(model) == Some(true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmtResult {
    Sat(BTreeMap<Var, BigInt>),
    /// Core labels in assertion order.
    Unsat(Vec<String>),
    Unknown,
}

impl SmtResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SmtResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SmtResult::Unsat(_))
    }
}

/// What a query is spent on; the counters are kept per phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Attempts to apply a technique: one per `¬encode` or fixpoint check.
    Candidate,
    /// Satisfiability of technique premises.
    Premise,
    /// Deletion-based core minimization.
    Shrink,
    /// Guard satisfiability and equivalence checks.
    Guard,
    Other,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Candidate => "candidate",
            Phase::Premise => "premise",
            Phase::Shrink => "shrink",
            Phase::Guard => "guard",
            Phase::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    pub checks: BTreeMap<Phase, usize>,
    pub unknown: usize,
}

impl QueryStats {
    pub fn get(&self, phase: Phase) -> usize {
        self.checks.get(&phase).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.checks.values().sum()
    }

    pub fn reset(&mut self) {
        *self = QueryStats::default();
    }

    /// Counter-wise difference `self - earlier`.
    pub fn since(&self, earlier: &QueryStats) -> QueryStats {
        let checks = self
            .checks
            .iter()
            .map(|(p, n)| (*p, n - earlier.get(*p)))
            .filter(|(_, n)| *n > 0)
            .collect();
        QueryStats {
            checks,
            unknown: self.unknown - earlier.unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub path: PathBuf,
    pub args: Vec<String>,
    pub timeout_ms: u64,
    pub seed: u64,
    /// Keep the complete transcript instead of only its tail.
    pub full_transcript: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let path = std::env::var_os(SOLVER_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| "z3".into());
        SolverConfig {
            path,
            args: vec!["-in".into(), "-smt2".into()],
            timeout_ms: 2000,
            seed: 0,
            full_transcript: false,
        }
    }
}

impl SolverConfig {
    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.path = path.into();
        self
    }
}

struct Process {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl Drop for Process {
    fn drop(&mut self) {
        let _ = writeln!(self.stdin, "(exit)");
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

enum Io {
    Ok(String),
    Died,
}

/// A solver session.
pub struct Solver {
    config: SolverConfig,
    proc: Option<Process>,
    stats: QueryStats,
    phase: Phase,
    transcript: VecDeque<String>,
}

impl Solver {
    /// Starts the solver process; fails if it cannot be spawned.
    pub fn new(config: SolverConfig) -> Result<Self, SmtError> {
        let mut s = Solver {
            config,
            proc: None,
            stats: QueryStats::default(),
            phase: Phase::Other,
            transcript: VecDeque::new(),
        };
        s.ensure_started()?;
        Ok(s)
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn stats(&self) -> &QueryStats {
        &self.stats
    }

    pub fn reset_stats(&mut self) {
        self.stats.reset();
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Sets the phase subsequent queries are counted under; returns the
    /// previous one.
    pub fn set_phase(&mut self, phase: Phase) -> Phase {
        std::mem::replace(&mut self.phase, phase)
    }

    pub fn transcript(&self) -> String {
        self.transcript
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn ensure_started(&mut self) -> Result<(), SmtError> {
        if self.proc.is_some() {
            return Ok(());
        }
        let spawn_err = |source| SmtError::Spawn {
            path: self.config.path.display().to_string(),
            source,
        };
        let mut child = Command::new(&self.config.path)
            .args(&self.config.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(spawn_err)?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        self.proc = Some(Process {
            child,
            stdin,
            stdout,
        });
        Ok(())
    }

    fn log(&mut self, line: impl Into<String>) {
        self.transcript.push_back(line.into());
        if !self.config.full_transcript && self.transcript.len() > TRANSCRIPT_TAIL {
            self.transcript.pop_front();
        }
    }

    fn protocol(&self, msg: impl Into<String>) -> SmtError {
        SmtError::Protocol {
            msg: msg.into(),
            transcript: self.transcript(),
        }
    }

    fn send(&mut self, script: &str) -> Io {
        for l in script.lines() {
            self.log(format!("> {l}"));
        }
        let proc = self.proc.as_mut().expect("solver started");
        match proc
            .stdin
            .write_all(script.as_bytes())
            .and_then(|_| proc.stdin.flush())
        {
            Ok(()) => Io::Ok(String::new()),
            Err(_) => Io::Died,
        }
    }

    /// Reads one complete response expression.
    fn read_response(&mut self) -> Io {
        let proc = self.proc.as_mut().expect("solver started");
        let mut buf = String::new();
        loop {
            let mut line = String::new();
            match proc.stdout.read_line(&mut line) {
                Ok(0) | Err(_) => return Io::Died,
                Ok(_) => {}
            }
            buf.push_str(&line);
            if !buf.trim().is_empty() && sexp::depth(&buf) <= 0 {
                break;
            }
        }
        for l in buf.lines() {
            self.log(format!("< {l}"));
        }
        Io::Ok(buf)
    }

    fn died(&mut self) -> SmtResult {
        self.log("! solver process died");
        self.proc = None;
        self.stats.unknown += 1;
        SmtResult::Unknown
    }

    /// Checks the conjunction of all assertions.
    ///
    /// Crashes and timeouts surface as `Unknown`; malformed solver output is
    /// an error carrying the transcript.
    pub fn check(
        &mut self,
        f: &SmtFormula,
        want_core: bool,
        want_model: bool,
    ) -> Result<SmtResult, SmtError> {
        self.ensure_started()?;
        *self.stats.checks.entry(self.phase).or_insert(0) += 1;

        let vars = f.vars();
        let mut script = String::from("(reset)\n");
        if want_core {
            script.push_str("(set-option :produce-unsat-cores true)\n");
        }
        if want_model {
            script.push_str("(set-option :produce-models true)\n");
        }
        script.push_str(&format!(
            "(set-option :timeout {})\n",
            self.config.timeout_ms
        ));
        script.push_str(&format!("(set-option :random-seed {})\n", self.config.seed));
        script.push_str("(set-logic QF_NIA)\n");
        for v in &vars {
            script.push_str(&format!("(declare-const {} Int)\n", v.smt_symbol()));
        }
        for (label, c) in f.assertions() {
            let body = match c.atoms() {
                [] => "true".to_string(),
                [a] => a.to_smt(),
                atoms => format!(
                    "(and {})",
                    atoms
                        .iter()
                        .map(|a| a.to_smt())
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
            };
            script.push_str(&format!("(assert (! {body} :named |{label}|))\n"));
        }
        script.push_str("(check-sat)\n");
        if let Io::Died = self.send(&script) {
            return Ok(self.died());
        }
        let answer = match self.read_response() {
            Io::Ok(s) => s,
            Io::Died => return Ok(self.died()),
        };
        match answer.trim() {
            "sat" => {
                if !want_model {
                    return Ok(SmtResult::Sat(BTreeMap::new()));
                }
                let model = match self.query_model(&vars)? {
                    Some(m) => m,
                    None => return Ok(self.died()),
                };
                if !f.holds(&model) {
                    return Err(self.protocol("model does not satisfy the assertions"));
                }
                Ok(SmtResult::Sat(model))
            }
            "unsat" => {
                if !want_core {
                    return Ok(SmtResult::Unsat(Vec::new()));
                }
                match self.query_core(f)? {
                    Some(core) => Ok(SmtResult::Unsat(core)),
                    None => Ok(self.died()),
                }
            }
            "unknown" | "timeout" => {
                self.stats.unknown += 1;
                Ok(SmtResult::Unknown)
            }
            other => Err(self.protocol(format!("unexpected answer to check-sat: {other}"))),
        }
    }

    fn query_model(
        &mut self,
        vars: &BTreeSet<Var>,
    ) -> Result<Option<BTreeMap<Var, BigInt>>, SmtError> {
        if let Io::Died = self.send("(get-model)\n") {
            return Ok(None);
        }
        let text = match self.read_response() {
            Io::Ok(s) => s,
            Io::Died => return Ok(None),
        };
        let parsed = sexp::parse_all(&text).map_err(|e| self.protocol(e))?;
        let defs = parsed
            .first()
            .and_then(Sexp::as_list)
            .ok_or_else(|| self.protocol("malformed model"))?;
        let by_symbol: BTreeMap<String, &Var> = vars
            .iter()
            .map(|v| (v.smt_symbol().trim_matches('|').to_string(), v))
            .collect();
        let mut model: BTreeMap<Var, BigInt> =
            vars.iter().map(|v| (v.clone(), BigInt::zero())).collect();
        for d in defs {
            let parts = match d.as_list() {
                Some(p) if p.len() == 5 && p[0].as_atom() == Some("define-fun") => p,
                // `model` keyword of older solvers
                _ if d.as_atom() == Some("model") => continue,
                _ => return Err(self.protocol("malformed model entry")),
            };
            if parts[3].as_atom() != Some("Int") {
                continue;
            }
            let name = parts[1].as_atom().unwrap_or_default();
            let Some(var) = by_symbol.get(name) else {
                continue;
            };
            let value =
                int_value(&parts[4]).ok_or_else(|| self.protocol("non-integer model value"))?;
            model.insert((*var).clone(), value);
        }
        Ok(Some(model))
    }

    fn query_core(&mut self, f: &SmtFormula) -> Result<Option<Vec<String>>, SmtError> {
        if let Io::Died = self.send("(get-unsat-core)\n") {
            return Ok(None);
        }
        let text = match self.read_response() {
            Io::Ok(s) => s,
            Io::Died => return Ok(None),
        };
        let parsed = sexp::parse_all(&text).map_err(|e| self.protocol(e))?;
        let items = parsed
            .first()
            .and_then(Sexp::as_list)
            .ok_or_else(|| self.protocol("malformed unsat core"))?;
        let mut names = BTreeSet::new();
        for i in items {
            let name = i
                .as_atom()
                .ok_or_else(|| self.protocol("malformed unsat core"))?;
            if !f.labels().any(|l| l == name) {
                return Err(self.protocol(format!("unknown label `{name}` in unsat core")));
            }
            names.insert(name.to_string());
        }
        Ok(Some(
            f.labels()
                .filter(|l| names.contains(*l))
                .map(str::to_string)
                .collect(),
        ))
    }

    /// Deletion-based minimization: drops labels one at a time (in assertion
    /// order) as long as the rest stays provably unsat. The result is
    /// deletion-minimal unless the solver answered `Unknown` on the way.
    pub fn shrink_core(
        &mut self,
        f: &SmtFormula,
        core: &[String],
    ) -> Result<Vec<String>, SmtError> {
        let prev = self.set_phase(Phase::Shrink);
        let mut current: Vec<String> = f
            .labels()
            .filter(|l| core.iter().any(|c| c == l))
            .map(str::to_string)
            .collect();
        let mut i = 0;
        let result = loop {
            if i >= current.len() || current.len() <= 1 {
                break Ok(current);
            }
            let trial: Vec<&str> = current
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, l)| l.as_str())
                .collect();
            match self.check(&f.restrict(trial), true, false) {
                Ok(SmtResult::Unsat(smaller)) => current = smaller,
                Ok(_) => i += 1,
                Err(e) => break Err(e),
            }
        };
        self.set_phase(prev);
        result
    }

    /// `Some(true)` if satisfiable, `Some(false)` if unsat, `None` if unknown.
    pub fn is_sat(&mut self, c: &Conjunction) -> Result<Option<bool>, SmtError> {
        Ok(
            match self.check(&SmtFormula::new().with("phi", c.clone()), false, false)? {
                SmtResult::Sat(_) => Some(true),
                SmtResult::Unsat(_) => Some(false),
                SmtResult::Unknown => None,
            },
        )
    }

    pub fn model(&mut self, c: &Conjunction) -> Result<Option<BTreeMap<Var, BigInt>>, SmtError> {
        Ok(
            match self.check(&SmtFormula::new().with("phi", c.clone()), false, true)? {
                SmtResult::Sat(m) => Some(m),
                _ => None,
            },
        )
    }

    /// Whether `premise ⟹ every atom of conclusion` is provably valid.
    pub fn implies(
        &mut self,
        premise: &Conjunction,
        conclusion: &Conjunction,
    ) -> Result<bool, SmtError> {
        for a in conclusion.atoms() {
            let f = SmtFormula::new()
                .with("premise", premise.clone())
                .with("negated", [a.negate()].into_iter().collect());
            if !self.check(&f, false, false)?.is_unsat() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Logical equivalence of two conjunctions, proven in both directions.
    pub fn equivalent(&mut self, a: &Conjunction, b: &Conjunction) -> Result<bool, SmtError> {
        Ok(self.implies(a, b)? && self.implies(b, a)?)
    }
}

fn int_value(e: &Sexp) -> Option<BigInt> {
    match e {
        Sexp::Atom(s) => s.parse().ok(),
        Sexp::List(l) if l.len() == 2 && l[0].as_atom() == Some("-") => {
            int_value(&l[1]).map(|v| -v)
        }
        _ => None,
    }
}

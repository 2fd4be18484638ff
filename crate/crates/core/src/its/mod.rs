//! Integer transition systems: data model, text format and a ground
//! interpreter used as a brute-force oracle.

mod interp;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::terms::{Conjunction, Poly, Subst, Update, Var};

pub use interp::{derivation_height, replays, step, Configuration, Dh, Fuel};
pub use parser::parse;

pub const MAIN: &str = "main";
pub const SINK: &str = "sink";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Location(String);

impl Location {
    pub fn new(name: impl Into<String>) -> Self {
        Location(name.into())
    }

    pub fn main() -> Self {
        Location(MAIN.to_string())
    }

    pub fn sink() -> Self {
        Location(SINK.to_string())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_main(&self) -> bool {
        self.0 == MAIN
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(Poly),
    Infinite,
}

impl Cost {
    pub fn finite(&self) -> Option<&Poly> {
        match self {
            Cost::Finite(p) => Some(p),
            Cost::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cost::Infinite)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(p) => write!(f, "{p}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// `src(x) -cost-> dst(update) [guard]`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: Location,
    pub dst: Location,
    pub cost: Cost,
    pub update: Update,
    pub guard: Conjunction,
}

impl Transition {
    pub fn program_vars(&self) -> &[Var] {
        self.update.vars()
    }

    pub fn is_simple_loop(&self) -> bool {
        self.src == self.dst
    }

    /// Every variable that is not a program variable, including an
    /// iteration symbol if one is present.
    pub fn temporaries(&self) -> BTreeSet<Var> {
        let mut vs = self.guard.vars();
        vs.extend(self.update.rhs_vars());
        if let Cost::Finite(p) = &self.cost {
            vs.extend(p.vars());
        }
        vs.into_iter().filter(|v| !v.is_program()).collect()
    }

    pub fn substitute(&self, sigma: &Subst) -> Transition {
        Transition {
            src: self.src.clone(),
            dst: self.dst.clone(),
            cost: match &self.cost {
                Cost::Finite(p) => Cost::Finite(p.substitute(sigma)),
                Cost::Infinite => Cost::Infinite,
            },
            update: self.update.substitute(sigma),
            guard: self.guard.substitute(sigma),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.program_vars().iter().map(|v| v.to_string()).collect();
        let args: Vec<String> = self.update.rhs().iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{}({}) -> {}({}) [{}] cost {}",
            self.src,
            params.join(", "),
            self.dst,
            args.join(", "),
            self.guard,
            self.cost
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Its {
    pub program_vars: Vec<Var>,
    pub locations: Vec<Location>,
    pub transitions: Vec<Transition>,
    pub start: Location,
}

impl Its {
    pub fn new(program_vars: Vec<Var>, transitions: Vec<Transition>) -> Self {
        let mut locations = vec![Location::main()];
        for t in &transitions {
            for l in [&t.src, &t.dst] {
                if !locations.contains(l) {
                    locations.push(l.clone());
                }
            }
        }
        Its {
            program_vars,
            locations,
            transitions,
            start: Location::main(),
        }
    }

    pub fn outgoing<'a>(&'a self, loc: &'a Location) -> impl Iterator<Item = &'a Transition> + 'a {
        self.transitions.iter().filter(move |t| &t.src == loc)
    }
}

/// Renders in the input format; `parse(&print(its))` reproduces `its`.
pub fn print(its: &Its) -> String {
    let mut out = String::new();
    out.push_str("vars");
    for v in &its.program_vars {
        out.push(' ');
        out.push_str(v.name());
    }
    out.push('\n');
    out.push_str(&format!("start {}\n", its.start));
    for t in &its.transitions {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

//! Symbolic arithmetic: variables, polynomials with exact rational
//! coefficients, normalized inequations `t > 0`, conjunctions and updates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::TermError;

/// Name of the iteration counter introduced by acceleration.
pub const ITERATION_NAME: &str = "n";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VarKind {
    Program,
    Temporary,
    IterationSymbol,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Var {
    name: String,
    kind: VarKind,
}

impl Var {
    pub fn program(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            kind: VarKind::Program,
        }
    }

    pub fn temporary(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            kind: VarKind::Temporary,
        }
    }

    /// The iteration counter `n` of accelerated transitions.
    pub fn iteration() -> Self {
        Var {
            name: ITERATION_NAME.to_string(),
            kind: VarKind::IterationSymbol,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_program(&self) -> bool {
        self.kind == VarKind::Program
    }

    pub fn is_temporary(&self) -> bool {
        self.kind == VarKind::Temporary
    }

    /// Symbol used when talking to an SMT solver. Distinct variables map to
    /// distinct symbols even when their names coincide.
    pub fn smt_symbol(&self) -> String {
        match self.kind {
            VarKind::Program => format!("|{}|", self.name),
            VarKind::Temporary => format!("|t!{}|", self.name),
            VarKind::IterationSymbol => format!("|it!{}|", self.name),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A product of variables with positive exponents, kept sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(other.0.iter()) {
            *acc.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(acc.into_iter().collect())
    }

    fn without(&self, v: &Var) -> Monomial {
        Monomial(self.0.iter().filter(|(w, _)| w != v).cloned().collect())
    }
}

// Graded lexicographic: total degree first, then the sorted factor lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

pub type Subst = BTreeMap<Var, Poly>;

/// Multivariate polynomial with rational coefficients. Zero coefficients are
/// never stored, so the empty map is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant term (zero when absent).
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Groups the polynomial by powers of `v`: `self = Σ_d coeffs[d] · v^d`.
    pub fn coefficients_in(&self, v: &Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree_in(v))
                .or_default()
                .add_term(m.without(v), c.clone());
        }
        out
    }

    /// Simultaneous substitution; variables outside the map are untouched.
    pub fn substitute(&self, sigma: &Subst) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut rest = Vec::new();
            for (v, e) in &m.0 {
                match sigma.get(v) {
                    Some(p) => term = &term * &p.pow(*e),
                    None => rest.push((v.clone(), *e)),
                }
            }
            if !rest.is_empty() {
                term = &term * &Poly::from_terms([(Monomial(rest), BigRational::one())]);
            }
            out = &out + &term;
        }
        out
    }

    /// Evaluates under a valuation; `None` if some variable is unassigned.
    pub fn eval(&self, val: &BTreeMap<Var, BigInt>) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = BigRational::from_integer(val.get(v)?.clone());
                t *= num_traits::pow(x, *e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Evaluates and requires an integer result.
    pub fn eval_int(&self, val: &BTreeMap<Var, BigInt>) -> Option<BigInt> {
        let r = self.eval(val)?;
        r.is_integer().then(|| r.to_integer())
    }

    /// Renders in SMT-LIB syntax. Coefficients must be integral.
    pub fn to_smt(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let coeff = smt_int(&c.to_integer());
                if m.is_one() {
                    return coeff;
                }
                let mut factors = Vec::new();
                if !c.is_one() {
                    factors.push(coeff);
                }
                for (v, e) in &m.0 {
                    for _ in 0..*e {
                        factors.push(v.smt_symbol());
                    }
                }
                if factors.len() == 1 {
                    factors.pop().unwrap()
                } else {
                    format!("(* {})", factors.join(" "))
                }
            })
            .collect();
        if rendered.len() == 1 {
            rendered.into_iter().next().unwrap()
        } else {
            format!("(+ {})", rendered.join(" "))
        }
    }
}

fn smt_int(c: &BigInt) -> String {
    if c.is_negative() {
        format!("(- {})", -c)
    } else {
        c.to_string()
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// The relational operators accepted in input guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Rel {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Eq => lhs == rhs,
        }
    }
}

/// An inequation `lhs > 0` over the integers.
///
/// Construction clears denominators and applies integer tightening, so the
/// non-constant part always has coprime integer coefficients. Constant atoms
/// collapse to `1 > 0` or `0 > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    lhs: PolyKey,
}

// Wrapper so that atoms get a total order without exposing one on Poly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PolyKey(Poly);

impl Ord for PolyKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.terms.iter().cmp(other.0.terms.iter())
    }
}

impl PartialOrd for PolyKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Atom {
    /// `t > 0`, normalized.
    pub fn gt_zero(t: Poly) -> Atom {
        let scaled = t.scale(&BigRational::from_integer(t.denominator_lcm()));
        // Integral now. t > 0  <=>  s >= 0 with s = t - 1.
        let c = scaled.constant_term().to_integer();
        let s_const = &c - BigInt::one();
        let g = scaled
            .terms
            .iter()
            .filter(|(m, _)| !m.is_one())
            .fold(BigInt::zero(), |acc, (_, k)| acc.gcd(&k.to_integer()));
        if g.is_zero() {
            let truth = c.is_positive();
            return Atom {
                lhs: PolyKey(Poly::int(i64::from(truth))),
            };
        }
        // Σ (k/g) m + s_const/g >= 0  <=>  Σ (k/g) m >= ⌈-s_const/g⌉
        let bound = (-s_const).div_ceil(&g);
        let mut out = Poly::zero();
        for (m, k) in &scaled.terms {
            if !m.is_one() {
                out.add_term(m.clone(), BigRational::from_integer(k.to_integer() / &g));
            }
        }
        out.add_term(
            Monomial::one(),
            BigRational::from_integer(BigInt::one() - bound),
        );
        Atom { lhs: PolyKey(out) }
    }

    /// `a >= b` as an atom.
    pub fn geq(a: &Poly, b: &Poly) -> Atom {
        Atom::gt_zero(&(a - b) + &Poly::one())
    }

    /// `a > b` as an atom.
    pub fn gt(a: &Poly, b: &Poly) -> Atom {
        Atom::gt_zero(a - b)
    }

    pub fn lhs(&self) -> &Poly {
        &self.lhs.0
    }

    /// The integer complement: `¬(t > 0)` is `-t + 1 > 0`.
    pub fn negate(&self) -> Atom {
        Atom::gt_zero(&(-self.lhs()) + &Poly::one())
    }

    pub fn is_true(&self) -> bool {
        self.lhs().as_constant().is_some_and(|c| c.is_positive())
    }

    pub fn is_false(&self) -> bool {
        self.lhs().as_constant().is_some_and(|c| !c.is_positive())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lhs().vars()
    }

    pub fn substitute(&self, sigma: &Subst) -> Atom {
        Atom::gt_zero(self.lhs().substitute(sigma))
    }

    pub fn holds(&self, val: &BTreeMap<Var, BigInt>) -> Option<bool> {
        Some(self.lhs().eval(val)?.is_positive())
    }

    pub fn to_smt(&self) -> String {
        format!("(> {} 0)", self.lhs().to_smt())
    }

    /// Canonical `t > 0` rendering.
    pub fn canonical(&self) -> String {
        format!("{} > 0", self.lhs())
    }
}

/// Human-facing rendering, e.g. `x >= n` for `x - n + 1 > 0`.
impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_true() {
            return f.write_str("true");
        }
        if self.is_false() {
            return f.write_str("false");
        }
        let t = self.lhs();
        let (body, strict) = if t.constant_term() >= BigRational::one() {
            (t - &Poly::one(), false)
        } else {
            (t.clone(), true)
        };
        let mut pos = Poly::zero();
        let mut neg = Poly::zero();
        for (m, c) in body.terms() {
            if c.is_negative() {
                neg.add_term(m.clone(), -c.clone());
            } else {
                pos.add_term(m.clone(), c.clone());
            }
        }
        let (op, flipped) = match strict {
            true => (">", "<"),
            false => (">=", "<="),
        };
        if pos.is_constant() && !neg.is_constant() {
            write!(f, "{neg} {flipped} {pos}")
        } else {
            write!(f, "{pos} {op} {neg}")
        }
    }
}

/// Normalizes `lhs rel rhs` into atoms of the form `t > 0`.
pub fn normalize(lhs: &Poly, rel: Rel, rhs: &Poly) -> Result<Vec<Atom>, TermError> {
    for p in [lhs, rhs] {
        if !p.is_integral() {
            return Err(TermError::NonIntegerComparison(p.to_string()));
        }
    }
    let one = Poly::one();
    Ok(match rel {
        Rel::Gt => vec![Atom::gt_zero(lhs - rhs)],
        Rel::Lt => vec![Atom::gt_zero(rhs - lhs)],
        Rel::Ge => vec![Atom::gt_zero(&(lhs - rhs) + &one)],
        Rel::Le => vec![Atom::gt_zero(&(rhs - lhs) + &one)],
        Rel::Eq => vec![
            Atom::gt_zero(&(lhs - rhs) + &one),
            Atom::gt_zero(&(rhs - lhs) + &one),
        ],
    })
}

/// Conjunction of atoms; duplicates and trivially true atoms are dropped and
/// the order of first occurrence is kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Conjunction {
    atoms: Vec<Atom>,
}

impl Conjunction {
    pub fn top() -> Self {
        Conjunction::default()
    }

    pub fn push(&mut self, a: Atom) {
        if a.is_true() || self.atoms.contains(&a) {
            return;
        }
        self.atoms.push(a);
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.atoms.contains(a)
    }

    pub fn is_trivially_false(&self) -> bool {
        self.atoms.iter().any(Atom::is_false)
    }

    pub fn and(&self, other: &Conjunction) -> Conjunction {
        let mut out = self.clone();
        out.extend(other.atoms.iter().cloned());
        out
    }

    /// All atoms except `a`.
    pub fn without(&self, a: &Atom) -> Conjunction {
        self.atoms.iter().filter(|b| *b != a).cloned().collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.atoms.iter().flat_map(Atom::vars).collect()
    }

    pub fn substitute(&self, sigma: &Subst) -> Conjunction {
        self.atoms.iter().map(|a| a.substitute(sigma)).collect()
    }

    pub fn holds(&self, val: &BTreeMap<Var, BigInt>) -> Option<bool> {
        for a in &self.atoms {
            if !a.holds(val)? {
                return Some(false);
            }
        }
        Some(true)
    }
}

impl Extend<Atom> for Conjunction {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        for a in iter {
            self.push(a);
        }
    }
}

impl FromIterator<Atom> for Conjunction {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut c = Conjunction::top();
        c.extend(iter);
        c
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("true");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Simultaneous assignment to the program variables. Temporaries occurring on
/// right-hand sides are symbolic constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Update {
    vars: Vec<Var>,
    rhs: Vec<Poly>,
}

impl Update {
    pub fn new(vars: Vec<Var>, rhs: Vec<Poly>) -> Self {
        assert_eq!(vars.len(), rhs.len(), "update arity mismatch");
        Update { vars, rhs }
    }

    pub fn identity(vars: &[Var]) -> Self {
        Update {
            vars: vars.to_vec(),
            rhs: vars.iter().cloned().map(Poly::var).collect(),
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rhs(&self) -> &[Poly] {
        &self.rhs
    }

    pub fn get(&self, v: &Var) -> Option<&Poly> {
        self.vars.iter().position(|w| w == v).map(|i| &self.rhs[i])
    }

    pub fn as_subst(&self) -> Subst {
        self.vars
            .iter()
            .cloned()
            .zip(self.rhs.iter().cloned())
            .collect()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Update) -> Update {
        let sigma = first.as_subst();
        Update {
            vars: self.vars.clone(),
            rhs: self.rhs.iter().map(|p| p.substitute(&sigma)).collect(),
        }
    }

    /// Substitutes into every right-hand side.
    pub fn substitute(&self, sigma: &Subst) -> Update {
        Update {
            vars: self.vars.clone(),
            rhs: self.rhs.iter().map(|p| p.substitute(sigma)).collect(),
        }
    }

    pub fn rhs_vars(&self) -> BTreeSet<Var> {
        self.rhs.iter().flat_map(Poly::vars).collect()
    }

    pub fn eval(&self, val: &BTreeMap<Var, BigInt>) -> Option<Vec<BigInt>> {
        self.rhs.iter().map(|p| p.eval_int(val)).collect()
    }
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.rhs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// `a^m`, the m-fold iterate of an update; `compose(a, 0)` is the identity.
pub fn compose(a: &Update, m: u32) -> Update {
    let mut acc = Update::identity(a.vars());
    for _ in 0..m {
        acc = a.after(&acc);
    }
    acc
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer valuation helper used across tests and the interpreter.
pub fn valuation<I, S>(pairs: I) -> BTreeMap<Var, BigInt>
where
    I: IntoIterator<Item = (Var, S)>,
    S: Into<BigInt>,
{
    pairs.into_iter().map(|(v, x)| (v, x.into())).collect()
}

//! Closed forms `a^n(x)` for triangular updates and symbolic summation of
//! per-iteration costs.
//!
//! Supported updates: ordering the program variables so that each one only
//! depends on earlier ones, every right-hand side is either free of program
//! variables (a reset) or `x + q` with `q` over earlier variables and
//! temporaries. Everything else is reported as [`Unsupported`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::terms::{Poly, Subst, Update, Var};

/// Largest exponent for which [`faulhaber`] produces a formula.
pub const MAX_POWER: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unsupported(pub String);

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unsupported: {}", self.0)
    }
}

impl std::error::Error for Unsupported {}

/// `a^n(x)` as polynomials in the iteration symbol, valid for every
/// `n >= threshold`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    update: Update,
    threshold: u32,
}

impl ClosedForm {
    /// Position-aligned with the program variables.
    pub fn values(&self) -> &[Poly] {
        self.update.rhs()
    }

    pub fn vars(&self) -> &[Var] {
        self.update.vars()
    }

    /// 0, or 1 when some variable is reset by the update.
    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// `a^n` with the iteration symbol `n`.
    pub fn as_update(&self) -> &Update {
        &self.update
    }

    /// `a^e` for a symbolic iteration count `e`.
    pub fn at(&self, e: &Poly) -> Update {
        self.update
            .substitute(&[(Var::iteration(), e.clone())].into())
    }

    pub fn at_int(&self, m: i64) -> Update {
        self.at(&Poly::int(m))
    }
}

#[derive(Clone, Debug)]
enum Shape {
    Reset,
    Additive { q: Poly, deps: BTreeSet<usize> },
}

/// Computes `a^n(x)` for the supported class.
pub fn closed_form(a: &Update) -> Result<ClosedForm, Unsupported> {
    let vars = a.vars();
    let index: BTreeMap<&Var, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let shapes: Vec<Shape> = vars
        .iter()
        .zip(a.rhs())
        .map(|(x, rhs)| {
            let prog: Vec<&Var> = rhs
                .vars()
                .into_iter()
                .filter(|v| index.contains_key(v))
                .map(|v| vars.iter().find(|w| **w == v).unwrap())
                .collect();
            if prog.is_empty() {
                return Ok(Shape::Reset);
            }
            let q = rhs - &Poly::var(x.clone());
            if q.contains_var(x) {
                return Err(Unsupported(format!(
                    "update of {x} is not of the form {x} + q: {rhs}"
                )));
            }
            let deps = q
                .vars()
                .iter()
                .filter_map(|v| index.get(v).copied())
                .collect();
            Ok(Shape::Additive { q, deps })
        })
        .collect::<Result<_, _>>()?;

    let order = topological(&shapes)
        .ok_or_else(|| Unsupported("cyclic dependencies between program variables".into()))?;

    let mut values: Vec<Option<Poly>> = vec![None; vars.len()];
    let mut thresholds = vec![0u32; vars.len()];
    for i in order {
        let (value, thr) = match &shapes[i] {
            Shape::Reset => (a.rhs()[i].clone(), 1),
            Shape::Additive { q, deps } => {
                let thr = deps.iter().map(|&j| thresholds[j]).max().unwrap_or(0);
                let sigma: Subst = deps
                    .iter()
                    .map(|&j| {
                        (
                            vars[j].clone(),
                            values[j].clone().expect("dependency solved first"),
                        )
                    })
                    .collect();
                let per_step = q.substitute(&sigma);
                let x = Poly::var(vars[i].clone());
                let sum = sum_from(&per_step, thr, q)?;
                (&x + &sum, thr)
            }
        };
        values[i] = Some(value);
        thresholds[i] = thr;
    }
    Ok(ClosedForm {
        update: Update::new(
            vars.to_vec(),
            values.into_iter().map(Option::unwrap).collect(),
        ),
        threshold: thresholds.into_iter().max().unwrap_or(0),
    })
}

fn topological(shapes: &[Shape]) -> Option<Vec<usize>> {
    let mut done = vec![false; shapes.len()];
    let mut order = Vec::with_capacity(shapes.len());
    while order.len() < shapes.len() {
        let next = (0..shapes.len()).find(|&i| {
            !done[i]
                && match &shapes[i] {
                    Shape::Reset => true,
                    Shape::Additive { deps, .. } => deps.iter().all(|&j| done[j]),
                }
        })?;
        done[next] = true;
        order.push(next);
    }
    Some(order)
}

/// `Σ_{i<n} term(i)` where `term` is a polynomial in the iteration symbol and
/// valid from `threshold` on; `first` is the value of the `i = 0` term when
/// the threshold is 1.
fn sum_from(term: &Poly, threshold: u32, first: &Poly) -> Result<Poly, Unsupported> {
    let n = Poly::var(Var::iteration());
    if threshold == 0 {
        return sum_below(term);
    }
    // first + Σ_{1<=i<n} term(i) = first + Σ_{j<n-1} term(j+1)
    let it = Var::iteration();
    let shifted = term.substitute(&[(it.clone(), &n + &Poly::one())].into());
    let tail = sum_below(&shifted)?.substitute(&[(it, &n - &Poly::one())].into());
    Ok(first + &tail)
}

/// `Σ_{i=0}^{n-1} p(i)` with `p` polynomial in the iteration symbol.
fn sum_below(p: &Poly) -> Result<Poly, Unsupported> {
    let n = Var::iteration();
    let mut acc = Poly::zero();
    for (d, coeff) in p.coefficients_in(&n) {
        acc = &acc + &(&coeff * &faulhaber(d)?);
    }
    Ok(acc)
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

fn bernoulli(upto: u32) -> Vec<BigRational> {
    // B_1 = -1/2 convention, which matches sums running up to n - 1.
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=upto {
        let s = (0..m).fold(BigRational::zero(), |acc, k| {
            acc + BigRational::from_integer(binomial(m + 1, k)) * &b[k as usize]
        });
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `Σ_{i=0}^{n-1} i^d` as a polynomial in the iteration symbol `n`.
pub fn faulhaber(d: u32) -> Result<Poly, Unsupported> {
    if d > MAX_POWER {
        return Err(Unsupported(format!(
            "power sum of degree {d} exceeds {MAX_POWER}"
        )));
    }
    let n = Poly::var(Var::iteration());
    let b = bernoulli(d);
    let scale = BigRational::new(BigInt::one(), BigInt::from(d + 1));
    let mut acc = Poly::zero();
    for k in 0..=d {
        let c = BigRational::from_integer(binomial(d + 1, k)) * &b[k as usize] * &scale;
        acc = &acc + &n.pow(d + 1 - k).scale(&c);
    }
    Ok(acc)
}

/// `Σ_{i=0}^{n-1} p(a^i(x))` for closed forms valid from 0 on.
pub fn cost_sum(p: &Poly, cf: &ClosedForm) -> Result<Poly, Unsupported> {
    if cf.threshold() != 0 {
        return Err(Unsupported(
            "closed form is only valid from the first iteration on".into(),
        ));
    }
    iteration_cost(p, cf)
}

/// Like [`cost_sum`], but also accepts closed forms with threshold 1; the
/// result is then valid for `n >= 1`.
pub fn iteration_cost(p: &Poly, cf: &ClosedForm) -> Result<Poly, Unsupported> {
    let per_step = p.substitute(&cf.as_update().as_subst());
    sum_from(&per_step, cf.threshold(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{compose, rat, valuation};

    fn pv(name: &str) -> Poly {
        Poly::var(Var::program(name))
    }

    fn n() -> Poly {
        Poly::var(Var::iteration())
    }

    #[test]
    fn countdown_closed_form() {
        let a = Update::new(vec![Var::program("x")], vec![&pv("x") - &Poly::one()]);
        let cf = closed_form(&a).unwrap();
        assert_eq!(cf.values()[0], &pv("x") - &n());
        assert_eq!(cf.threshold(), 0);
    }

    #[test]
    fn linear_in_constant_closed_form() {
        let a = Update::new(
            vec![Var::program("x"), Var::program("y")],
            vec![&pv("x") - &pv("y"), pv("y")],
        );
        let cf = closed_form(&a).unwrap();
        assert_eq!(cf.values()[0], &pv("x") - &(&n() * &pv("y")));
        assert_eq!(cf.values()[1], pv("y"));
        assert_eq!(cf.threshold(), 0);
    }

    #[test]
    fn negation_is_unsupported() {
        let vars: Vec<Var> = (1..=4).map(|i| Var::program(format!("x{i}"))).collect();
        let a = Update::new(
            vars.clone(),
            vec![
                Poly::one(),
                &pv("x2") + &pv("x1"),
                &pv("x3") + &pv("x2"),
                -&pv("x4"),
            ],
        );
        assert!(closed_form(&a).is_err());
    }

    #[test]
    fn resets_force_threshold_one() {
        let vars = vec![Var::program("x1"), Var::program("x2"), Var::program("x3")];
        let a = Update::new(
            vars.clone(),
            vec![Poly::one(), &pv("x2") + &pv("x1"), &pv("x3") + &pv("x2")],
        );
        let cf = closed_form(&a).unwrap();
        assert_eq!(cf.threshold(), 1);
        for m in 1..8u32 {
            let direct = compose(&a, m);
            let at = cf.at_int(m as i64);
            let val = valuation([
                (vars[0].clone(), 5),
                (vars[1].clone(), -2),
                (vars[2].clone(), 7),
            ]);
            assert_eq!(direct.eval(&val), at.eval(&val), "m = {m}");
        }
    }

    #[test]
    fn faulhaber_small_degrees() {
        assert_eq!(faulhaber(0).unwrap(), n());
        assert_eq!(
            faulhaber(1).unwrap(),
            (&(&n() * &n()) - &n()).scale(&rat(1, 2))
        );
        let two = &(&n().pow(3).scale(&rat(2, 1)) - &n().pow(2).scale(&rat(3, 1))) + &n();
        assert_eq!(faulhaber(2).unwrap(), two.scale(&rat(1, 6)));
        assert!(faulhaber(MAX_POWER + 1).is_err());
    }

    #[test]
    fn cost_sum_examples() {
        let a = Update::new(
            vec![Var::program("x"), Var::program("y")],
            vec![&pv("x") - &pv("y"), pv("y")],
        );
        let cf = closed_form(&a).unwrap();
        assert_eq!(cost_sum(&Poly::one(), &cf).unwrap(), n());
        // (x + y/2)·n − (y/2)·n²
        let expected = &(&(&pv("x") + &pv("y").scale(&rat(1, 2))) * &n())
            - &(&pv("y").scale(&rat(1, 2)) * &n().pow(2));
        assert_eq!(cost_sum(&pv("x"), &cf).unwrap(), expected);
    }

    #[test]
    fn cost_sum_rejects_threshold_one() {
        let a = Update::new(vec![Var::program("x")], vec![Poly::int(3)]);
        let cf = closed_form(&a).unwrap();
        assert!(cost_sum(&pv("x"), &cf).is_err());
        // x + 3·(n−1)
        let c = iteration_cost(&pv("x"), &cf).unwrap();
        assert_eq!(c, &(&pv("x") + &n().scale(&rat(3, 1))) - &Poly::int(3));
    }

    #[test]
    fn temporaries_are_constants() {
        let a = Update::new(
            vec![Var::program("x")],
            vec![&pv("x") + &Poly::var(Var::temporary("u"))],
        );
        let cf = closed_form(&a).unwrap();
        assert_eq!(
            cf.values()[0],
            &pv("x") + &(&n() * &Poly::var(Var::temporary("u")))
        );
    }
}

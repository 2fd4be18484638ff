use loopacc::smt::{SmtFormula, SmtResult};
use loopacc::terms::{Atom, Conjunction, Poly, Var};
use loopacc::{Phase, Solver, SolverConfig};

fn x() -> Poly {
    Poly::var(Var::program("x"))
}

fn y() -> Poly {
    Poly::var(Var::program("y"))
}

fn conj(atoms: impl IntoIterator<Item = Atom>) -> Conjunction {
    atoms.into_iter().collect()
}

fn solver() -> Solver {
    Solver::new(SolverConfig::default()).expect("an SMT solver on PATH or in SMT_SOLVER")
}

#[test]
fn sat_with_validated_model() {
    let mut s = solver();
    let c = conj([Atom::gt(&x(), &Poly::int(3)), Atom::gt(&Poly::int(5), &x())]);
    let m = s.model(&c).unwrap().unwrap();
    assert_eq!(m[&Var::program("x")], 4.into());
}

#[test]
fn unsat_core_names_the_conflict() {
    let mut s = solver();
    let f = SmtFormula::new()
        .with("g0", conj([Atom::gt_zero(y())]))
        .with("g1", conj([Atom::gt_zero(x())]))
        .with("c", conj([Atom::gt_zero(x()).negate()]));
    match s.check(&f, true, false).unwrap() {
        SmtResult::Unsat(core) => {
            let small = s.shrink_core(&f, &core).unwrap();
            assert_eq!(small, vec!["g1".to_string(), "c".to_string()]);
        }
        other => panic!("expected unsat, got {other:?}"),
    }
}

#[test]
fn nonlinear_and_counters() {
    let mut s = solver();
    s.set_phase(Phase::Candidate);
    // x*y > 0 && x > 0 && y < 0 is unsat
    let c = conj([
        Atom::gt_zero(&x() * &y()),
        Atom::gt_zero(x()),
        Atom::gt_zero(-y()),
    ]);
    assert_eq!(s.is_sat(&c).unwrap(), Some(false));
    s.set_phase(Phase::Guard);
    assert!(s
        .equivalent(
            &conj([Atom::geq(&x(), &Poly::int(1))]),
            &conj([Atom::gt_zero(x())])
        )
        .unwrap());
    assert_eq!(s.stats().get(Phase::Candidate), 1);
    assert_eq!(s.stats().get(Phase::Guard), 2);
}

#[test]
fn missing_solver_is_a_spawn_error() {
    let cfg = SolverConfig::default().with_path("/nonexistent/solver");
    assert!(Solver::new(cfg).is_err());
}

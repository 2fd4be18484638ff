//! Candidate-check counts of the core and naive strategies on random loops.

use std::fmt::Write;

use loopacc::accel::{analyze_dependencies, Technique};
use loopacc::{closed_form, workload, Phase, SmtError, Solver, Strategy};

use crate::Format;

pub const M_MAX: usize = 12;

struct Row {
    m: usize,
    core: Vec<usize>,
    naive: Vec<usize>,
}

fn mean(xs: &[usize]) -> f64 {
    xs.iter().sum::<usize>() as f64 / xs.len() as f64
}

fn checks(
    solver: &mut Solver,
    t: &loopacc::Transition,
    strategy: Strategy,
) -> Result<usize, SmtError> {
    let cf = closed_form(&t.update).ok();
    let a = analyze_dependencies(
        solver,
        &t.guard,
        &t.update,
        cf.as_ref(),
        &Technique::ALL,
        strategy,
    )?;
    Ok(a.stats.get(Phase::Candidate))
}

pub fn run(
    mut solver: Solver,
    m_max: usize,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<String, SmtError> {
    let mut rng = workload::rng(seed);
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let mut row = Row {
            m,
            core: Vec::new(),
            naive: Vec::new(),
        };
        for _ in 0..trials {
            let t = workload::accelerable_loop(&mut rng, m);
            let (core, naive) = match (
                checks(&mut solver, &t, Strategy::Core),
                checks(&mut solver, &t, Strategy::Naive),
            ) {
                (Ok(c), Ok(n)) => (c, n),
                (Err(e @ SmtError::Spawn { .. }), _) | (_, Err(e @ SmtError::Spawn { .. })) => {
                    return Err(e)
                }
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("note: m = {m}: skipping {t}: {e}");
                    continue;
                }
            };
            assert!(core <= 5 * m, "core strategy used {core} checks on {t}");
            assert!(
                naive <= 5 * (m * m + m) / 2,
                "naive strategy used {naive} checks on {t}"
            );
            row.core.push(core);
            row.naive.push(naive);
        }
        if row.core.is_empty() {
            eprintln!("note: m = {m}: no loop could be analyzed, row skipped");
            continue;
        }
        rows.push(row);
    }
    Ok(match format {
        Format::Text => table(&rows),
        Format::Json => json(&rows),
    })
}

fn table(rows: &[Row]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>3} {:>6} {:>10} {:>10} {:>8} {:>8} {:>6} {:>7}",
        "m", "trials", "core_mean", "naive_mean", "core_max", "naive_max", "5m", "5(m²+m)/2"
    )
    .unwrap();
    for r in rows {
        writeln!(
            out,
            "{:>3} {:>6} {:>10.2} {:>10.2} {:>8} {:>8} {:>6} {:>7}",
            r.m,
            r.core.len(),
            mean(&r.core),
            mean(&r.naive),
            r.core.iter().max().unwrap(),
            r.naive.iter().max().unwrap(),
            5 * r.m,
            5 * (r.m * r.m + r.m) / 2
        )
        .unwrap();
    }
    out
}

fn json(rows: &[Row]) -> String {
    let v: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "m": r.m,
                "trials": r.core.len(),
                "core_mean": mean(&r.core),
                "naive_mean": mean(&r.naive),
                "core_max": r.core.iter().max(),
                "naive_max": r.naive.iter().max(),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&v).unwrap();
    s.push('\n');
    s
}

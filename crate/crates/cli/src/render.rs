use std::fmt::Write;
use std::time::Duration;

use loopacc::pipeline::Hint;
use loopacc::AnalysisReport;

fn omega(h: &Hint) -> String {
    match h.degree {
        0 => "Omega(1)".into(),
        1 => "Omega(n)".into(),
        d => format!("Omega(n^{d})"),
    }
}

pub fn text(r: &AnalysisReport, level: u8, elapsed: Option<Duration>) -> String {
    let mut out = String::new();
    writeln!(out, "{}", r.verdict).unwrap();
    if level >= 1 {
        if let Some(w) = &r.witness {
            writeln!(out, "witness: {}", w.formula).unwrap();
            let values: Vec<String> = w.values.iter().map(|(v, x)| format!("{v} = {x}")).collect();
            writeln!(out, "start: {}", values.join(", ")).unwrap();
        }
        if let Some(b) = &r.bound {
            writeln!(out, "bound: {}", b.reading).unwrap();
        }
        if let Some(h) = &r.asymptotic_hint {
            writeln!(out, "hint: {} ({})", omega(h), h.label).unwrap();
        }
        if r.incomplete {
            writeln!(out, "incomplete: timeout reached").unwrap();
        }
    }
    if level >= 2 {
        writeln!(out, "simplified:").unwrap();
        for s in &r.simplified {
            writeln!(out, "  {s}").unwrap();
        }
        writeln!(out, "proof:").unwrap();
        for ev in &r.trace {
            writeln!(out, "  {}:", ev.processor).unwrap();
            for i in &ev.inputs {
                writeln!(out, "    in  {i}").unwrap();
            }
            for o in &ev.outputs {
                writeln!(out, "    out {o}").unwrap();
            }
            for n in &ev.notes {
                writeln!(out, "    note {n}").unwrap();
            }
            if level >= 3 {
                for s in &ev.selection {
                    writeln!(
                        out,
                        "    {} for {} after [{}]",
                        s.technique,
                        s.atom,
                        s.deps.join(", ")
                    )
                    .unwrap();
                }
                if !ev.order.is_empty() {
                    writeln!(out, "    order {}", ev.order.join(" < ")).unwrap();
                }
                for st in &ev.states {
                    writeln!(out, "    {st}").unwrap();
                }
                let q: Vec<String> = ev.queries.iter().map(|(p, k)| format!("{p}={k}")).collect();
                if !q.is_empty() {
                    writeln!(out, "    queries {}", q.join(" ")).unwrap();
                }
            }
        }
    }
    if let Some(t) = elapsed {
        writeln!(out, "time: {:.3}s", t.as_secs_f64()).unwrap();
    }
    out
}

pub fn json(r: &AnalysisReport, elapsed: Option<Duration>) -> String {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let Some(t) = elapsed {
        v["time_s"] = t.as_secs_f64().into();
    }
    let mut s = serde_json::to_string_pretty(&v).unwrap();
    s.push('\n');
    s
}

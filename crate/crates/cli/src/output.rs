//! Text and machine renderings of an [`Outcome`]. Both are deterministic:
//! no timings, no maps with unstable order.

use serde::Serialize;

use crate::pipeline::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

/// One line of the machine format.
#[derive(Serialize)]
struct Record<'a> {
    section: &'a str,
    name: &'a str,
    anchor: &'a str,
    pass: bool,
    witness: Option<&'a str>,
}

pub fn render(out: &Outcome, format: Format) -> String {
    match format {
        Format::Text => text(out),
        Format::Machine => machine(out),
    }
}

fn text(out: &Outcome) -> String {
    let mut s = String::new();
    for note in &out.notes {
        s.push_str(&format!("# {note}\n"));
    }
    for r in &out.sections {
        let (p, f) = r.counts();
        s.push_str(&format!("== {} ({p} passed, {f} failed) ==\n", r.title));
        for c in &r.checks {
            s.push_str(&format!("{c}\n"));
        }
    }
    let (p, f) = out.counts();
    s.push_str(&format!("summary: {p} passed, {f} failed\n"));
    s
}

fn machine(out: &Outcome) -> String {
    let mut s = String::new();
    for r in &out.sections {
        for c in &r.checks {
            let rec = Record { section: &r.title, name: &c.name, anchor: &c.anchor, pass: c.passed, witness: c.witness.as_deref() };
            s.push_str(&serde_json::to_string(&rec).expect("records serialize"));
            s.push('\n');
        }
    }
    s
}

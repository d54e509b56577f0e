use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use bosegraph::SweepResult;
use serde::Serialize;

fn num(x: f64) -> String {
    // 17 significant digits round-trips every f64.
    format!("{x:.16e}")
}

pub fn sweep_header(vertices: usize) -> String {
    let mut cols = vec!["tau".to_string(), "energy".into(), "entanglement".into()];
    cols.extend((0..vertices).map(|v| format!("mean_{v}")));
    cols.extend((0..vertices).map(|v| format!("var_{v}")));
    cols.extend(["dE_dtau".into(), "dvar0_dtau".into(), "degenerate".into()]);
    cols.join(",")
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = sweep_header(result.vertices);
    out.push('\n');
    for (k, p) in result.points.iter().enumerate() {
        let mut fields = vec![num(p.tau), num(p.energy), num(p.entanglement)];
        fields.extend(p.means.iter().map(|&x| num(x)));
        fields.extend(p.variances.iter().map(|&x| num(x)));
        fields.push(num(result.d_entanglement[k]));
        fields.push(num(result.d_variance[k]));
        fields.push(u8::from(p.degenerate).to_string());
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Write to `path`, or stdout when absent. Called once, after all computation.
pub fn deliver(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

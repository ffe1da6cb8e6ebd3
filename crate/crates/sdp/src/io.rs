//! Plain-text dump/load of conic problems, for debugging and regression
//! corpora.
//!
//! Format (whitespace separated, `#` starts a comment line):
//!
//! ```text
//! conicproblem v1
//! vars <n>
//! cost <n floats>
//! block <zero|nonneg|soc|psd> <dim-or-side>
//! h <block-dim floats>
//! G <block-dim rows of n floats>
//! ...
//! end
//! ```
//!
//! PSD blocks state the matrix side; their rows are in svec order.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::problem::{ConeSpec, ConicProblem};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub fn dump(p: &ConicProblem) -> String {
    let mut out = String::new();
    out.push_str("conicproblem v1\n");
    let _ = writeln!(out, "vars {}", p.num_vars);
    out.push_str("cost");
    for c in p.cost.iter() {
        let _ = write!(out, " {:.17e}", c);
    }
    out.push('\n');
    let mut row = 0usize;
    for cone in &p.cones {
        let (name, val) = match cone {
            ConeSpec::Zero(d) => ("zero", *d),
            ConeSpec::Nonneg(d) => ("nonneg", *d),
            ConeSpec::Soc(d) => ("soc", *d),
            ConeSpec::Psd(s) => ("psd", *s),
        };
        let dim = cone.dim();
        let _ = writeln!(out, "block {name} {val}");
        out.push_str("h");
        for r in 0..dim {
            let _ = write!(out, " {:.17e}", p.h[row + r]);
        }
        out.push('\n');
        out.push_str("G\n");
        for r in 0..dim {
            let mut first = true;
            for j in 0..p.num_vars {
                if !first {
                    out.push(' ');
                }
                let _ = write!(out, "{:.17e}", p.g[(row + r, j)]);
                first = false;
            }
            out.push('\n');
        }
        row += dim;
    }
    out.push_str("end\n");
    out
}

pub fn load(text: &str) -> Result<ConicProblem, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, msg: &str| IoError::Parse {
        line,
        msg: msg.to_string(),
    };

    let (l, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
    if header != "conicproblem v1" {
        return Err(err(l, "expected 'conicproblem v1' header"));
    }
    let (l, vars_line) = lines.next().ok_or_else(|| err(l, "missing vars line"))?;
    let n: usize = vars_line
        .strip_prefix("vars ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(l, "bad vars line"))?;

    let (l, cost_line) = lines.next().ok_or_else(|| err(l, "missing cost line"))?;
    let cost_vals = parse_floats(cost_line.strip_prefix("cost").ok_or_else(|| err(l, "bad cost line"))?)
        .map_err(|m| err(l, &m))?;
    if cost_vals.len() != n {
        return Err(err(l, &format!("cost has {} entries, expected {n}", cost_vals.len())));
    }

    let mut cones = Vec::new();
    let mut h_all: Vec<f64> = Vec::new();
    let mut g_rows: Vec<Vec<f64>> = Vec::new();
    loop {
        let (l, line) = lines.next().ok_or_else(|| err(0, "missing 'end'"))?;
        if line == "end" {
            break;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "block" {
            return Err(err(l, "expected 'block <kind> <dim>'"));
        }
        let val: usize = parts[2].parse().map_err(|_| err(l, "bad block dim"))?;
        let spec = match parts[1] {
            "zero" => ConeSpec::Zero(val),
            "nonneg" => ConeSpec::Nonneg(val),
            "soc" => ConeSpec::Soc(val),
            "psd" => ConeSpec::Psd(val),
            other => return Err(err(l, &format!("unknown cone kind '{other}'"))),
        };
        let dim = spec.dim();
        let (l, h_line) = lines.next().ok_or_else(|| err(l, "missing h line"))?;
        let hv = parse_floats(h_line.strip_prefix('h').ok_or_else(|| err(l, "bad h line"))?)
            .map_err(|m| err(l, &m))?;
        if hv.len() != dim {
            return Err(err(l, &format!("h has {} entries, expected {dim}", hv.len())));
        }
        let (l, g_line) = lines.next().ok_or_else(|| err(l, "missing G line"))?;
        if g_line != "G" {
            return Err(err(l, "expected 'G'"));
        }
        let mut last = l;
        for _ in 0..dim {
            let (lr, row) = lines.next().ok_or_else(|| err(last, "missing G row"))?;
            last = lr;
            let rv = parse_floats(row).map_err(|m| err(lr, &m))?;
            if rv.len() != n {
                return Err(err(lr, &format!("G row has {} entries, expected {n}", rv.len())));
            }
            g_rows.push(rv);
        }
        h_all.extend(hv);
        cones.push(spec);
    }

    let m = g_rows.len();
    let mut g = DMatrix::zeros(m, n);
    for (r, row) in g_rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            g[(r, c)] = *v;
        }
    }
    let p = ConicProblem {
        num_vars: n,
        cost: DVector::from_vec(cost_vals),
        g,
        h: DVector::from_vec(h_all),
        cones,
    };
    p.validate().map_err(|m| err(0, &m))?;
    Ok(p)
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad float '{t}'")))
        .collect()
}

//! Plain-text instance formats.
//!
//! * TSP objective file: `n`, then `n` lines `x y`. Costs are
//!   `nint(Euclidean distance)`; a multiobjective instance uses one file per
//!   objective.
//! * Profit file: `n`, then `n` integer profits, one per line.
//! * SCP file: `L I J`, then `J` blocks of `I` integer costs, then `L` row
//!   blocks `k c_1 .. c_k` with 1-based column indices. Tokens may wrap
//!   across lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::scp::ScpInstance;
use crate::problems::tsp::TspInstance;
use crate::problems::tspwp::TspwpInstance;

fn perr(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Nonblank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_count(path: &Path, line: Option<(usize, &str)>) -> Result<usize> {
    let (no, l) = line.ok_or_else(|| perr(path, 1, "missing count line"))?;
    l.parse::<usize>()
        .map_err(|e| perr(path, no, format!("bad count `{l}`: {e}")))
}

pub fn parse_tsp_coordinates(text: &str, path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut lines = content_lines(text);
    let n = parse_count(path, lines.next())?;
    let mut coords = Vec::with_capacity(n);
    let mut last = 1;
    for (no, l) in lines {
        last = no;
        if coords.len() == n {
            return Err(perr(path, no, format!("more than {n} coordinate lines")));
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(perr(path, no, format!("expected `x y`, found `{l}`")));
        }
        let num = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| perr(path, no, format!("bad coordinate `{t}`")))
        };
        coords.push((num(fields[0])?, num(fields[1])?));
    }
    if coords.len() != n {
        return Err(perr(
            path,
            last + 1,
            format!("expected {n} coordinate lines, found {}", coords.len()),
        ));
    }
    Ok(coords)
}

pub fn read_tsp_coordinates(path: &Path) -> Result<Vec<(f64, f64)>> {
    parse_tsp_coordinates(&read(path)?, path)
}

pub fn format_tsp_coordinates(coords: &[(f64, f64)]) -> String {
    let mut out = format!("{}\n", coords.len());
    for (x, y) in coords {
        writeln!(out, "{x} {y}").unwrap();
    }
    out
}

pub fn write_tsp_coordinates(path: &Path, coords: &[(f64, f64)]) -> Result<()> {
    write(path, &format_tsp_coordinates(coords))
}

/// One objective per file.
pub fn load_tsp(paths: &[impl AsRef<Path>]) -> Result<TspInstance> {
    if paths.is_empty() {
        return Err(Error::config("TSP instance needs at least one objective file"));
    }
    let objectives = paths
        .iter()
        .map(|p| read_tsp_coordinates(p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = objectives.iter().position(|c| c.len() != objectives[0].len()) {
        return Err(Error::config(format!(
            "{}: city count differs from {}",
            paths[i].as_ref().display(),
            paths[0].as_ref().display()
        )));
    }
    TspInstance::from_coordinates(&objectives)
}

pub fn parse_profits(text: &str, path: &Path) -> Result<Vec<i64>> {
    let mut lines = content_lines(text);
    let n = parse_count(path, lines.next())?;
    let mut profits = Vec::with_capacity(n);
    let mut last = 1;
    for (no, l) in lines {
        last = no;
        if profits.len() == n {
            return Err(perr(path, no, format!("more than {n} profit lines")));
        }
        let p = l
            .parse::<i64>()
            .map_err(|e| perr(path, no, format!("bad profit `{l}`: {e}")))?;
        if p < 0 {
            return Err(perr(path, no, format!("negative profit {p}")));
        }
        profits.push(p);
    }
    if profits.len() != n {
        return Err(perr(
            path,
            last + 1,
            format!("expected {n} profit lines, found {}", profits.len()),
        ));
    }
    Ok(profits)
}

pub fn read_profits(path: &Path) -> Result<Vec<i64>> {
    parse_profits(&read(path)?, path)
}

pub fn format_profits(profits: &[i64]) -> String {
    let mut out = format!("{}\n", profits.len());
    for p in profits {
        writeln!(out, "{p}").unwrap();
    }
    out
}

pub fn write_profits(path: &Path, profits: &[i64]) -> Result<()> {
    write(path, &format_profits(profits))
}

/// Length objective from a coordinate file, profits from a profit file.
pub fn load_tspwp(coordinates: &Path, profits: &Path) -> Result<TspwpInstance> {
    let coords = read_tsp_coordinates(coordinates)?;
    let profit = read_profits(profits)?;
    if coords.len() != profit.len() {
        return Err(Error::config(format!(
            "{} has {} cities but {} has {} profits",
            coordinates.display(),
            coords.len(),
            profits.display(),
            profit.len()
        )));
    }
    let n = coords.len();
    TspwpInstance::new(n, crate::problems::tsp::euclidean_matrix(&coords), profit)
}

pub fn parse_scp(text: &str, path: &Path) -> Result<ScpInstance> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let mut last_line = 1;
    let mut next_int = |what: &str| -> Result<(usize, i64)> {
        let (no, t) = tokens
            .next()
            .ok_or_else(|| perr(path, last_line, format!("unexpected end of file, expected {what}")))?;
        last_line = no;
        let v = t
            .parse::<i64>()
            .map_err(|e| perr(path, no, format!("bad {what} `{t}`: {e}")))?;
        Ok((no, v))
    };
    let mut header = [0usize; 3];
    for (slot, what) in header.iter_mut().zip(["row count", "column count", "objective count"]) {
        let (no, v) = next_int(what)?;
        if v <= 0 {
            return Err(perr(path, no, format!("{what} must be positive, got {v}")));
        }
        *slot = v as usize;
    }
    let [rows, cols, objectives] = header;
    let mut costs = vec![Vec::with_capacity(cols); objectives];
    for (j, cost) in costs.iter_mut().enumerate() {
        for i in 0..cols {
            let (no, v) = next_int("cost")?;
            if v <= 0 {
                return Err(perr(
                    path,
                    no,
                    format!("cost of column {} in objective {} must be positive, got {v}", i + 1, j + 1),
                ));
            }
            cost.push(v);
        }
    }
    let mut cover = Vec::with_capacity(rows);
    for r in 0..rows {
        let (no, k) = next_int("row size")?;
        if k <= 0 {
            return Err(perr(path, no, format!("row {} has no covering columns", r + 1)));
        }
        let mut list = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (no, c) = next_int("column index")?;
            if c < 1 || c as usize > cols {
                return Err(perr(path, no, format!("column index {c} outside 1..={cols}")));
            }
            list.push(c as usize - 1);
        }
        cover.push(list);
    }
    if let Some((no, t)) = tokens.next() {
        return Err(perr(path, no, format!("trailing token `{t}`")));
    }
    ScpInstance::new(rows, cols, cover, costs).map_err(|e| perr(path, last_line, e.to_string()))
}

pub fn load_scp(path: &Path) -> Result<ScpInstance> {
    parse_scp(&read(path)?, path)
}

/// Costs twelve per line, each row block on its own line.
pub fn format_scp(inst: &ScpInstance) -> String {
    let mut out = format!("{} {} {}\n", inst.rows(), inst.cols(), inst.num_objectives());
    for cost in inst.costs() {
        for chunk in cost.chunks(12) {
            let line: Vec<String> = chunk.iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    for r in 0..inst.rows() {
        let cover = inst.covering(r);
        write!(out, "{}", cover.len()).unwrap();
        for c in cover {
            write!(out, " {}", c + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_scp(path: &Path, inst: &ScpInstance) -> Result<()> {
    write(path, &format_scp(inst))
}

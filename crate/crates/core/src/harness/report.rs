//! Result CSVs, per-cell aggregation and pairwise method comparisons.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{format_significant, INDICATOR_DIGITS};
use crate::error::{Error, Result};
use crate::indicators::{wilcoxon_signed_rank, WilcoxonResult, WILCOXON_MIN_N};

/// One run of one method on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRecord {
    pub method: String,
    pub problem: String,
    pub instance: String,
    pub seed: u64,
    pub iteration_count: usize,
    pub r: f64,
    pub hv: f64,
    /// Not written to the results CSV, which must be reproducible.
    pub wallclock_ms: u64,
}

pub const RESULTS_HEADER: &str = "method,problem,instance,seed,iteration_count,R,HV";
pub const TIMINGS_HEADER: &str = "method,instance,seed,wallclock_ms";

/// Canonical record order: method, instance, seed.
pub fn sort_records(records: &mut [ResultRecord]) {
    records.sort_by(|a, b| {
        (a.method.as_str(), a.instance.as_str(), a.seed).cmp(&(b.method.as_str(), b.instance.as_str(), b.seed))
    });
}

fn check_field(s: &str) -> &str {
    assert!(!s.contains([',', '\n']), "CSV field `{s}` contains a separator");
    s
}

pub fn results_csv(records: &[ResultRecord]) -> String {
    let mut out = format!("{RESULTS_HEADER}\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            check_field(&r.method),
            check_field(&r.problem),
            check_field(&r.instance),
            r.seed,
            r.iteration_count,
            format_significant(r.r, INDICATOR_DIGITS),
            format_significant(r.hv, INDICATOR_DIGITS)
        )
        .unwrap();
    }
    out
}

pub fn timings_csv(records: &[ResultRecord]) -> String {
    let mut out = format!("{TIMINGS_HEADER}\n");
    for r in records {
        writeln!(out, "{},{},{},{}", r.method, r.instance, r.seed, r.wallclock_ms).unwrap();
    }
    out
}

pub fn parse_results_csv(text: &str, path: &Path) -> Result<Vec<ResultRecord>> {
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == RESULTS_HEADER => {}
        Some((_, h)) => return Err(perr(1, format!("unexpected header `{h}`"))),
        None => return Err(perr(1, "empty results file".into())),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let no = i + 1;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(perr(no, format!("expected 7 fields, found {}", f.len())));
        }
        let num = |k: usize, what: &str| -> Result<f64> {
            f[k].parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| perr(no, format!("bad {what} `{}`", f[k])))
        };
        records.push(ResultRecord {
            method: f[0].to_string(),
            problem: f[1].to_string(),
            instance: f[2].to_string(),
            seed: f[3].parse().map_err(|e| perr(no, format!("bad seed `{}`: {e}", f[3])))?,
            iteration_count: f[4]
                .parse()
                .map_err(|e| perr(no, format!("bad iteration count `{}`: {e}", f[4])))?,
            r: num(5, "R")?,
            hv: num(6, "HV")?,
            wallclock_ms: 0,
        });
    }
    Ok(records)
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_results_csv(&text, path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Indicator {
    R,
    Hv,
}

impl Indicator {
    pub const ALL: [Indicator; 2] = [Indicator::R, Indicator::Hv];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::R => "R",
            Indicator::Hv => "HV",
        }
    }

    pub fn of(self, r: &ResultRecord) -> f64 {
        match self {
            Indicator::R => r.r,
            Indicator::Hv => r.hv,
        }
    }

    /// R is minimized, HV maximized.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Indicator::R => a < b,
            Indicator::Hv => a > b,
        }
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub instance: String,
    pub method: String,
    pub runs: usize,
    pub r_mean: f64,
    pub r_std: f64,
    pub hv_mean: f64,
    pub hv_std: f64,
}

impl CellSummary {
    pub fn mean(&self, ind: Indicator) -> f64 {
        match ind {
            Indicator::R => self.r_mean,
            Indicator::Hv => self.hv_mean,
        }
    }

    pub fn std(&self, ind: Indicator) -> f64 {
        match ind {
            Indicator::R => self.r_std,
            Indicator::Hv => self.hv_std,
        }
    }
}

/// Methods in order of first appearance.
fn method_order(records: &[ResultRecord]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in records {
        if !out.contains(&r.method) {
            out.push(r.method.clone());
        }
    }
    out
}

fn by_cell(records: &[ResultRecord]) -> BTreeMap<(String, String), Vec<&ResultRecord>> {
    let mut cells: BTreeMap<(String, String), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((r.instance.clone(), r.method.clone())).or_default().push(r);
    }
    cells
}

/// Per (instance, method) mean and standard deviation, instances sorted,
/// methods in order of first appearance.
pub fn summarize(records: &[ResultRecord]) -> Vec<CellSummary> {
    let methods = method_order(records);
    let cells = by_cell(records);
    let mut out: Vec<CellSummary> = cells
        .into_iter()
        .map(|((instance, method), rs)| {
            let (r_mean, r_std) = mean_std(&rs.iter().map(|r| r.r).collect::<Vec<_>>());
            let (hv_mean, hv_std) = mean_std(&rs.iter().map(|r| r.hv).collect::<Vec<_>>());
            CellSummary {
                instance,
                method,
                runs: rs.len(),
                r_mean,
                r_std,
                hv_mean,
                hv_std,
            }
        })
        .collect();
    let pos = |m: &str| methods.iter().position(|x| x == m).unwrap_or(usize::MAX);
    out.sort_by(|a, b| (a.instance.as_str(), pos(&a.method)).cmp(&(b.instance.as_str(), pos(&b.method))));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairwiseComparison {
    pub instance: String,
    pub indicator: Indicator,
    pub first: String,
    pub second: String,
    /// Runs of both methods sharing a seed.
    pub pairs: usize,
    /// `None` when there are too few pairs for the test.
    pub test: Option<WilcoxonResult>,
}

impl PairwiseComparison {
    /// Which method is significantly better, if any.
    pub fn verdict(&self, first_mean: f64, second_mean: f64) -> &'static str {
        match &self.test {
            None => "n/a",
            Some(t) if !t.significant => "~",
            Some(_) if self.indicator.better(first_mean, second_mean) => "<",
            Some(_) => ">",
        }
    }
}

/// Wilcoxon tests for every method pair on every instance and indicator,
/// pairing runs by seed.
pub fn compare_methods(records: &[ResultRecord], alpha: f64) -> Result<Vec<PairwiseComparison>> {
    let methods = method_order(records);
    let cells = by_cell(records);
    let mut instances: Vec<&String> = cells.keys().map(|(i, _)| i).collect();
    instances.dedup();
    let mut out = Vec::new();
    for inst in instances {
        let present: Vec<&String> = methods
            .iter()
            .filter(|m| cells.contains_key(&(inst.clone(), (*m).clone())))
            .collect();
        for indicator in Indicator::ALL {
            for (i, a) in present.iter().enumerate() {
                for b in &present[i + 1..] {
                    let ra = &cells[&(inst.clone(), (*a).clone())];
                    let rb = &cells[&(inst.clone(), (*b).clone())];
                    let mut xs = Vec::new();
                    let mut ys = Vec::new();
                    for x in ra {
                        if let Some(y) = rb.iter().find(|y| y.seed == x.seed) {
                            xs.push(indicator.of(x));
                            ys.push(indicator.of(y));
                        }
                    }
                    let test = if xs.len() >= WILCOXON_MIN_N {
                        Some(wilcoxon_signed_rank(&xs, &ys, alpha)?)
                    } else {
                        None
                    };
                    out.push(PairwiseComparison {
                        instance: inst.clone(),
                        indicator,
                        first: (*a).clone(),
                        second: (*b).clone(),
                        pairs: xs.len(),
                        test,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn cell_text(s: &CellSummary, ind: Indicator) -> String {
    format!(
        "{} ({})",
        format_significant(s.mean(ind), INDICATOR_DIGITS),
        format_significant(s.std(ind), INDICATOR_DIGITS)
    )
}

/// Instances as rows, methods as columns, cells `mean (std)`. Cells with
/// fewer than `expected_runs` runs are marked with `*`.
pub fn render_table(summaries: &[CellSummary], ind: Indicator, expected_runs: Option<usize>) -> String {
    let mut methods: Vec<&str> = Vec::new();
    let mut instances: Vec<&str> = Vec::new();
    for s in summaries {
        if !methods.contains(&s.method.as_str()) {
            methods.push(&s.method);
        }
        if !instances.contains(&s.instance.as_str()) {
            instances.push(&s.instance);
        }
    }
    let mut rows: Vec<Vec<String>> = vec![std::iter::once(ind.name().to_string())
        .chain(methods.iter().map(|m| m.to_string()))
        .collect()];
    for inst in &instances {
        let mut row = vec![inst.to_string()];
        for m in &methods {
            let cell = summaries
                .iter()
                .find(|s| s.instance == *inst && s.method == *m)
                .map_or_else(
                    || "-".to_string(),
                    |s| {
                        let mut t = cell_text(s, ind);
                        if expected_runs.is_some_and(|e| s.runs < e) {
                            t.push('*');
                        }
                        t
                    },
                );
            row.push(cell);
        }
        rows.push(row);
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn summary_csv(summaries: &[CellSummary]) -> String {
    let mut out = String::from("instance,method,runs,R_mean,R_std,HV_mean,HV_std\n");
    for s in summaries {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.instance,
            s.method,
            s.runs,
            format_significant(s.r_mean, INDICATOR_DIGITS),
            format_significant(s.r_std, INDICATOR_DIGITS),
            format_significant(s.hv_mean, INDICATOR_DIGITS),
            format_significant(s.hv_std, INDICATOR_DIGITS)
        )
        .unwrap();
    }
    out
}

pub fn comparisons_csv(comparisons: &[PairwiseComparison], summaries: &[CellSummary]) -> String {
    let mut out = String::from("instance,indicator,first,second,pairs,statistic,p_value,significant,verdict\n");
    for c in comparisons {
        let mean = |m: &str| {
            summaries
                .iter()
                .find(|s| s.instance == c.instance && s.method == m)
                .map_or(f64::NAN, |s| s.mean(c.indicator))
        };
        let verdict = c.verdict(mean(&c.first), mean(&c.second));
        let (stat, p, sig) = match &c.test {
            Some(t) => (
                format_significant(t.statistic, INDICATOR_DIGITS),
                format_significant(t.p_value, INDICATOR_DIGITS),
                t.significant.to_string(),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{stat},{p},{sig},{verdict}",
            c.instance,
            c.indicator.name(),
            c.first,
            c.second,
            c.pairs
        )
        .unwrap();
    }
    out
}

/// Plain-text report: one table per indicator, then the pairwise tests.
/// `<` means the first method is significantly better, `>` the second,
/// `~` no significant difference.
pub fn render_report(
    summaries: &[CellSummary],
    comparisons: &[PairwiseComparison],
    expected_runs: Option<usize>,
    alpha: f64,
) -> String {
    let mut out = String::new();
    for ind in Indicator::ALL {
        let dir = if ind == Indicator::R { "lower is better" } else { "higher is better" };
        writeln!(out, "{} ({dir}), mean (std)", ind.name()).unwrap();
        out.push_str(&render_table(summaries, ind, expected_runs));
        out.push('\n');
    }
    if summaries.iter().any(|s| expected_runs.is_some_and(|e| s.runs < e)) {
        out.push_str("* incomplete cell: some runs failed\n\n");
    }
    if !comparisons.is_empty() {
        writeln!(out, "Wilcoxon signed-rank tests, alpha = {alpha}").unwrap();
        for c in comparisons {
            let mean = |m: &str| {
                summaries
                    .iter()
                    .find(|s| s.instance == c.instance && s.method == m)
                    .map_or(f64::NAN, |s| s.mean(c.indicator))
            };
            let p = c
                .test
                .as_ref()
                .map_or_else(|| format!("too few pairs ({})", c.pairs), |t| {
                    format!("p = {}", format_significant(t.p_value, INDICATOR_DIGITS))
                });
            writeln!(
                out,
                "{} {:<2} {} {} {}  {p}",
                c.instance,
                c.indicator.name(),
                c.first,
                c.verdict(mean(&c.first), mean(&c.second)),
                c.second
            )
            .unwrap();
        }
    }
    out
}

//! Pareto dominance and the Pareto archive.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{check_dims, Error, Result};
use crate::scalarizing::ObjectivePoint;

/// `a` dominates `b`: no worse everywhere, strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_dims(a.len(), b.len())?;
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

#[derive(Clone, Debug)]
pub struct ArchiveEntry<S> {
    pub solution: S,
    pub point: ObjectivePoint,
}

/// Set of mutually nondominated solutions with pairwise distinct images.
///
/// Flat storage with a linear scan per update; there is no size bound.
#[derive(Clone, Debug)]
pub struct ParetoArchive<S> {
    dim: usize,
    entries: Vec<ArchiveEntry<S>>,
}

impl<S> ParetoArchive<S> {
    pub fn new(dim: usize) -> Self {
        ParetoArchive {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry<S>] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> &ArchiveEntry<S> {
        &self.entries[index]
    }

    pub fn points(&self) -> impl Iterator<Item = &ObjectivePoint> {
        self.entries.iter().map(|e| &e.point)
    }

    /// Inserts the candidate unless some member dominates or equals it.
    /// Members dominated by the candidate are evicted. Returns whether the
    /// stored point set changed.
    pub fn update(&mut self, solution: S, point: ObjectivePoint) -> bool {
        assert_eq!(point.dim(), self.dim, "archive dimension mismatch");
        let z = point.values();
        for e in &self.entries {
            let p = e.point.values();
            if p == z || dominates_unchecked(p, z) {
                return false;
            }
        }
        self.entries
            .retain(|e| !dominates_unchecked(z, e.point.values()));
        self.entries.push(ArchiveEntry { solution, point });
        true
    }

    pub fn try_update(&mut self, solution: S, point: ObjectivePoint) -> Result<bool> {
        check_dims(self.dim, point.dim())?;
        Ok(self.update(solution, point))
    }

    /// Pairwise scan of the archive invariants, for tests and diagnostics.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if a.point == b.point {
                    return Err(Error::contract(format!("duplicate point {}", a.point)));
                }
                if dominates_unchecked(&a.point, &b.point) || dominates_unchecked(&b.point, &a.point)
                {
                    return Err(Error::contract(format!(
                        "dominance between archive members {} and {}",
                        a.point, b.point
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry<S>> {
        self.entries
    }

    pub fn to_csv(&self) -> String {
        let points: Vec<&ObjectivePoint> = self.points().collect();
        points_to_csv(self.dim, &points)
    }
}

/// Archive CSV: header `obj1,...,objJ`, then one point per line. `{}` on f64
/// prints the shortest representation that parses back to the same value.
pub fn points_to_csv(dim: usize, points: &[&ObjectivePoint]) -> String {
    let mut out = String::new();
    for j in 0..dim {
        if j > 0 {
            out.push(',');
        }
        write!(out, "obj{}", j + 1).unwrap();
    }
    out.push('\n');
    for p in points {
        for (j, v) in p.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_points_csv(path: &Path, dim: usize, points: &[&ObjectivePoint]) -> Result<()> {
    fs::write(path, points_to_csv(dim, points)).map_err(|e| Error::io(path, e))
}

pub fn parse_points_csv(text: &str, path: &Path) -> Result<Vec<ObjectivePoint>> {
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| perr(1, "empty archive file".into()))?;
    let dim = header.split(',').count();
    for (j, name) in header.split(',').enumerate() {
        if name.trim() != format!("obj{}", j + 1) {
            return Err(perr(1, format!("unexpected header field `{name}`")));
        }
    }
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| perr(idx + 1, format!("bad value `{t}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != dim {
            return Err(perr(
                idx + 1,
                format!("expected {dim} values, found {}", values.len()),
            ));
        }
        points.push(ObjectivePoint::new(values).map_err(|e| perr(idx + 1, e.to_string()))?);
    }
    Ok(points)
}

pub fn read_points_csv(path: &Path) -> Result<Vec<ObjectivePoint>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_points_csv(&text, path)
}

/// Brute-force nondominated filter keeping the first occurrence of each point.
pub fn nondominated_filter(points: &[ObjectivePoint]) -> Vec<ObjectivePoint> {
    let mut out: Vec<ObjectivePoint> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let beaten = points
            .iter()
            .any(|q| dominates_unchecked(q, p));
        let seen = points[..i].iter().any(|q| q == p);
        if !beaten && !seen {
            out.push(p.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(v: &[f64]) -> ObjectivePoint {
        ObjectivePoint::new(v.to_vec()).unwrap()
    }

    fn sorted(points: impl Iterator<Item = ObjectivePoint>) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = points.map(|p| p.into_inner()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]).unwrap());
        assert!(!dominates(&[3.0, 1.0], &[1.0, 3.0]).unwrap());
        assert!(dominates(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn update_examples() {
        let mut a: ParetoArchive<()> = ParetoArchive::new(2);
        assert!(a.update((), pt(&[1.0, 3.0])));
        assert!(a.update((), pt(&[3.0, 1.0])));
        assert!(a.update((), pt(&[2.0, 2.0])));
        assert_eq!(
            sorted(a.points().cloned()),
            vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]]
        );
        assert!(!a.update((), pt(&[2.0, 2.0])), "already present");
        assert!(!a.update((), pt(&[2.0, 3.0])), "dominated");
        assert_eq!(a.len(), 3);
        assert!(a.update((), pt(&[0.0, 0.0])));
        assert_eq!(sorted(a.points().cloned()), vec![vec![0.0, 0.0]]);
        assert!(a.try_update((), pt(&[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let mut a: ParetoArchive<()> = ParetoArchive::new(2);
        a.update((), pt(&[0.1 + 0.2, 1e300]));
        a.update((), pt(&[-3.5, 1e301]));
        let csv = a.to_csv();
        assert!(csv.starts_with("obj1,obj2\n"));
        let back = parse_points_csv(&csv, Path::new("mem")).unwrap();
        assert_eq!(back, a.points().cloned().collect::<Vec<_>>());

        let bad = "obj1,obj2\n1,2\n3\n";
        match parse_points_csv(bad, Path::new("x.csv")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn archive_matches_bruteforce_filter(
            raw in proptest::collection::vec((0u8..20, 0u8..20, 0u8..20), 0..200)
        ) {
            let points: Vec<ObjectivePoint> = raw
                .iter()
                .map(|&(a, b, c)| pt(&[a as f64, b as f64, c as f64]))
                .collect();
            let mut archive: ParetoArchive<usize> = ParetoArchive::new(3);
            for (i, p) in points.iter().enumerate() {
                let before = sorted(archive.points().cloned());
                let changed = archive.update(i, p.clone());
                let after = sorted(archive.points().cloned());
                prop_assert_eq!(changed, before != after);
            }
            archive.check_invariants().unwrap();
            prop_assert_eq!(
                sorted(archive.points().cloned()),
                sorted(nondominated_filter(&points).into_iter())
            );
        }
    }
}

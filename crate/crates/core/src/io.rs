//! Text formats: point clouds, distance matrices, persistence diagram CSV,
//! filtration listings and reduction tables.
//!
//! Point files hold one point per line with whitespace- or comma-separated
//! coordinates; lines starting with `#` are comments. A matrix file starts
//! with `matrix n` followed by `n` rows of `n` values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::complexes::{reduction_total, Filtration, ReductionRow};
use crate::error::{Error, Result};
use crate::homology::{Interval, PersistenceDiagram};
use crate::metric_space::PointCloud;

pub const DIAGRAM_HEADER: &str = "degree,birth,death";
pub const REDUCTION_HEADER: &str = "scale,vr_simplices,core_simplices,reduction_pct";

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty())
}

fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::parse(path, line, format!("invalid number {field:?}")))
}

/// Parses a point or matrix file body. `path` is only used in error messages.
pub fn parse_point_cloud(text: &str, path: &Path) -> Result<PointCloud> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut matrix_size = None;
    if let Some((lineno, first)) = lines.next() {
        let mut it = fields(first);
        if first.starts_with("matrix") {
            it.next();
            let n = it
                .next()
                .and_then(|f| f.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(path, lineno, "expected `matrix n`"))?;
            matrix_size = Some(n);
        } else {
            rows.push(it.map(|f| parse_f64(path, lineno, f)).collect::<Result<_>>()?);
        }
    }
    let mut last_line = 0;
    for (lineno, line) in lines {
        last_line = lineno;
        let row: Vec<f64> = fields(line).map(|f| parse_f64(path, lineno, f)).collect::<Result<_>>()?;
        if let Some(expected) = rows.first().map(Vec::len).or(matrix_size) {
            if row.len() != expected {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected {expected} values, found {}", row.len()),
                ));
            }
        }
        rows.push(row);
    }
    match matrix_size {
        Some(n) => {
            if rows.len() != n {
                return Err(Error::parse(path, last_line, format!("expected {n} matrix rows, found {}", rows.len())));
            }
            PointCloud::from_matrix(&rows).map_err(|e| Error::parse(path, 1, e.to_string()))
        }
        None => PointCloud::from_points(&rows).map_err(|e| Error::parse(path, 1, e.to_string())),
    }
}

pub fn read_point_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_point_cloud(&text, path)
}

/// Serializes `cloud`, preceded by `comments` as `#` lines. Coordinates use
/// the shortest representation that parses back to the same value.
pub fn format_point_cloud(cloud: &PointCloud, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let n = cloud.len();
    if cloud.dim().is_none() {
        let _ = writeln!(out, "matrix {n}");
    }
    for i in 0..n {
        let row = cloud.point(i).or_else(|| cloud.matrix_row(i)).unwrap_or(&[]);
        let line: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_point_cloud(path: impl AsRef<Path>, cloud: &PointCloud, comments: &[String]) -> Result<()> {
    write_text(path, &format_point_cloud(cloud, comments))
}

/// Diagram CSV: header `degree,birth,death`, one interval per row, `inf` for
/// essential intervals.
pub fn format_diagram_csv(diagram: &PersistenceDiagram) -> String {
    let mut out = format!("{DIAGRAM_HEADER}\n");
    for (q, intervals) in diagram.degrees().iter().enumerate() {
        for iv in intervals {
            let _ = writeln!(out, "{q},{},{}", iv.birth, iv.death);
        }
    }
    out
}

pub fn parse_diagram_csv(text: &str, path: &Path) -> Result<PersistenceDiagram> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == DIAGRAM_HEADER => {}
        Some((i, _)) => return Err(Error::parse(path, i + 1, format!("expected header {DIAGRAM_HEADER:?}"))),
        None => return Err(Error::parse(path, 1, "empty diagram file")),
    }
    let mut degrees: Vec<Vec<Interval>> = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let parts: Vec<&str> = line.trim().split(',').collect();
        let [q, birth, death] = parts[..] else {
            return Err(Error::parse(path, lineno, "expected degree,birth,death"));
        };
        let q: usize = q
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("invalid degree {q:?}")))?;
        let birth = parse_f64(path, lineno, birth.trim())?;
        let death = parse_f64(path, lineno, death.trim())?;
        if degrees.len() <= q {
            degrees.resize(q + 1, Vec::new());
        }
        degrees[q].push(Interval::new(birth, death));
    }
    PersistenceDiagram::from_degrees(degrees).map_err(|e| Error::parse(path, 1, e.to_string()))
}

pub fn read_diagram_csv(path: impl AsRef<Path>) -> Result<PersistenceDiagram> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_diagram_csv(&text, path)
}

/// One simplex per line: `value dim v0 v1 ... vk`.
pub fn format_filtration(filtration: &Filtration) -> String {
    let mut out = String::new();
    for s in filtration.simplices() {
        let _ = write!(out, "{} {}", s.value, s.dim());
        for v in &s.vertices {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Reduction table CSV with a trailing `total` row; percentages to one decimal.
pub fn format_reduction_csv(rows: &[ReductionRow]) -> String {
    let mut out = format!("{REDUCTION_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.1}",
            r.scale, r.simplices_before, r.simplices_after, r.reduction_pct
        );
    }
    let (before, after, pct) = reduction_total(rows);
    let _ = writeln!(out, "total,{before},{after},{pct:.1}");
    out
}

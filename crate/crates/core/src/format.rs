//! Plain-text point-set and generator-matrix files.
//!
//! A point-set file is a header `pg k q` followed by one point per line as
//! comma-separated coordinates. Any nonzero scalar multiple of a point is
//! accepted. A new header starts a new set, so one file can hold several.
//! A generator file is a header `code k n q` followed by `k` rows of `n`
//! comma-separated entries. In both, `#` starts a comment.
//!
//! ```text
//! # hyperbolic quadric x0*x1 + x2*x3 = 0
//! pg 4 2
//! 0,0,0,1
//! 0,0,1,0
//! ...
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::geometry::{build_geometry, Geometry, PointSet};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_header<const N: usize>(line_no: usize, line: &str, keyword: &str) -> Result<Option<[u32; N]>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(keyword) {
        return Ok(None);
    }
    let values: Vec<&str> = words.collect();
    if values.len() != N {
        return Err(parse_err(line_no, format!("'{keyword}' header needs {N} numbers")));
    }
    let mut out = [0; N];
    for (slot, word) in out.iter_mut().zip(values) {
        *slot = word.parse().map_err(|_| parse_err(line_no, format!("'{word}' is not a non-negative integer")))?;
    }
    Ok(Some(out))
}

fn parse_row(line_no: usize, line: &str, len: usize, q: u32) -> Result<Vec<u32>> {
    let row = line
        .split(',')
        .map(|w| {
            let w = w.trim();
            let v: u32 = w.parse().map_err(|_| parse_err(line_no, format!("'{w}' is not a field element")))?;
            if v >= q {
                return Err(parse_err(line_no, format!("{v} is out of range for GF({q})")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    if row.len() != len {
        return Err(parse_err(line_no, format!("expected {len} entries, found {}", row.len())));
    }
    Ok(row)
}

fn header_geometry(
    line_no: usize,
    k: u32,
    q: u32,
    cache: &mut HashMap<(u32, u32), Arc<Geometry>>,
) -> Result<Arc<Geometry>> {
    if let Some(g) = cache.get(&(k, q)) {
        return Ok(Arc::clone(g));
    }
    let g = build_geometry(k as usize, q).map_err(|e| parse_err(line_no, e.to_string()))?;
    cache.insert((k, q), Arc::clone(&g));
    Ok(g)
}

/// Parse every point set in a file, in order.
pub fn parse_point_sets(text: &str) -> Result<Vec<PointSet>> {
    let mut cache = HashMap::new();
    let mut sets: Vec<PointSet> = Vec::new();
    for (line_no, line) in content_lines(text) {
        if let Some([k, q]) = parse_header::<2>(line_no, line, "pg")? {
            let g = header_geometry(line_no, k, q, &mut cache)?;
            sets.push(PointSet::empty(&g));
            continue;
        }
        let Some(current) = sets.last_mut() else {
            return Err(parse_err(line_no, "expected a 'pg k q' header"));
        };
        let g = Arc::clone(current.geometry());
        let coords = parse_row(line_no, line, g.k(), g.q())?;
        let vector: Vec<u8> = coords.iter().map(|&c| c as u8).collect();
        let index = g.index_of(&vector).map_err(|e| parse_err(line_no, e.to_string()))?;
        if current.contains(index) {
            return Err(parse_err(line_no, "point listed twice"));
        }
        *current = current.with_mask(current.mask() | 1 << index);
    }
    if sets.is_empty() {
        return Err(parse_err(0, "no 'pg k q' header found"));
    }
    Ok(sets)
}

/// Parse a file holding exactly one point set.
pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut sets = parse_point_sets(text)?;
    if sets.len() != 1 {
        return Err(parse_err(0, format!("expected one point set, found {}", sets.len())));
    }
    Ok(sets.remove(0))
}

/// One block: header then normalized coordinates in point order.
pub fn write_point_set(set: &PointSet) -> String {
    let g = set.geometry();
    let mut out = format!("pg {} {}\n", g.k(), g.q());
    for point in set.coords() {
        let row: Vec<String> = point.iter().map(u8::to_string).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_point_sets<'a>(sets: impl IntoIterator<Item = &'a PointSet>) -> String {
    sets.into_iter().map(write_point_set).collect::<Vec<_>>().join("\n")
}

pub fn parse_generator(text: &str) -> Result<LinearCode> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(0, "empty generator file"))?;
    let [k, n, q] = parse_header::<3>(line_no, header, "code")?
        .ok_or_else(|| parse_err(line_no, "expected a 'code k n q' header"))?;
    let field = crate::geometry::PrimeField::new(q).map_err(|e| parse_err(line_no, e.to_string()))?;
    let mut rows = Vec::with_capacity(k as usize);
    let mut last = line_no;
    for (line_no, line) in lines {
        if rows.len() == k as usize {
            return Err(parse_err(line_no, format!("more than {k} rows")));
        }
        rows.push(parse_row(line_no, line, n as usize, field.order())?);
        last = line_no;
    }
    if rows.len() != k as usize {
        return Err(parse_err(last, format!("expected {k} rows, found {}", rows.len())));
    }
    LinearCode::new(&rows, q)
}

pub fn write_generator(code: &LinearCode) -> String {
    let mut out = format!("code {} {} {}\n", code.k(), code.n(), code.q());
    for row in code.generator() {
        let row: Vec<String> = row.iter().map(u8::to_string).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quadric::hyperbolic_quadric;

    #[test]
    fn point_set_round_trip() {
        let g = build_geometry(4, 2).unwrap();
        let quadric = hyperbolic_quadric(&g).unwrap();
        let text = write_point_set(&quadric);
        assert!(text.starts_with("pg 4 2\n"));
        assert_eq!(parse_point_set(&text).unwrap(), quadric);
    }

    #[test]
    fn comments_scalars_and_blocks() {
        let text = "# two sets\npg 3 3\n2,0,0  # scalar multiple of 1,0,0\n0,1,2\n\npg 3 2\n1,1,1\n";
        let sets = parse_point_sets(text).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].coords(), vec![vec![0, 1, 2], vec![1, 0, 0]]);
        assert_eq!(sets[1].len(), 1);
        let again = parse_point_sets(&write_point_sets(&sets)).unwrap();
        assert_eq!(again, sets);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("1,0,0\n", 1),
            ("pg 3 2\n1,0\n", 2),
            ("pg 3 2\n\n1,0,x\n", 3),
            ("pg 3 2\n0,0,0\n", 2),
            ("pg 3 2\n1,0,2\n", 2),
            ("pg 3 2\n1,0,0\n1,0,0\n", 3),
            ("pg 3 4\n", 1),
            ("pg 3\n", 1),
        ];
        for (text, line) in cases {
            match parse_point_sets(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_point_set("pg 3 2\npg 3 2\n").is_err());
        assert!(parse_point_sets("# nothing\n").is_err());
    }

    #[test]
    fn generator_round_trip_and_errors() {
        let text = "code 2 3 2\n# [3,2] code\n1,0,1\n0,1,1\n";
        let code = parse_generator(text).unwrap();
        assert_eq!((code.k(), code.n(), code.q()), (2, 3, 2));
        assert_eq!(parse_generator(&write_generator(&code)).unwrap(), code);

        assert!(matches!(parse_generator("code 2 3 2\n1,0,1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_generator("code 1 3 2\n1,0,1\n1,1,1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_generator("pg 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_generator("code 2 3 2\n1,0,1\n1,0,1\n"), Err(Error::RankDeficient { rank: 1, k: 2 })));
    }
}

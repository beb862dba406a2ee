//! Problem file parsing.
//!
//! ```text
//! # comment
//! matrix:
//!   1 1 1
//!   0 1 2
//! ideal:
//!   1 1
//! search_bound: 200
//! box_radius: 4
//! samples_per_class: 3
//! ```
//!
//! Rows may also be given inline, separated by `;` (`matrix: 1 1 1; 0 1 2`).
//! `ideal: maximal` selects the maximal graded ideal.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealInput {
    Maximal,
    Generators(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProblemFile {
    pub matrix: Vec<Vec<i64>>,
    pub ideal: Option<IdealInput>,
    pub search_bound: Option<u64>,
    pub box_radius: Option<i64>,
    pub samples_per_class: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Matrix,
    Ideal,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses one row of integers separated by spaces or commas.
pub fn parse_row(text: &str, line: usize) -> Result<Vec<i64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| perr(line, format!("expected an integer, found `{t}`"))))
        .collect()
}

/// Parses `;`-separated rows, e.g. `"1,1;0,1"`.
pub fn parse_rows(text: &str, line: usize) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| parse_row(r, line))
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| perr(line, format!("`{key}` expects a nonnegative integer, found `{}`", value.trim())))
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = ProblemFile::default();
        let mut section = Section::None;
        let mut matrix_line = 0;
        let mut ideal_rows: Vec<(usize, Vec<i64>)> = Vec::new();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some((key, value)) = content.split_once(':') {
                let key = key.trim().to_ascii_lowercase();
                if seen.contains(&key) {
                    return Err(perr(line, format!("duplicate key `{key}`")));
                }
                seen.push(key.clone());
                let value = value.trim();
                section = Section::None;
                match key.as_str() {
                    "matrix" => {
                        matrix_line = line;
                        section = Section::Matrix;
                        p.matrix.extend(parse_rows(value, line)?);
                    }
                    "ideal" => {
                        if value.eq_ignore_ascii_case("maximal") {
                            p.ideal = Some(IdealInput::Maximal);
                        } else {
                            section = Section::Ideal;
                            ideal_rows.extend(parse_rows(value, line)?.into_iter().map(|r| (line, r)));
                        }
                    }
                    "search_bound" => p.search_bound = Some(parse_scalar(value, line, &key)?),
                    "box_radius" => p.box_radius = Some(parse_scalar(value, line, &key)?),
                    "samples_per_class" => p.samples_per_class = Some(parse_scalar(value, line, &key)?),
                    _ => return Err(perr(line, format!("unknown key `{key}`"))),
                }
                continue;
            }
            match section {
                Section::Matrix => p.matrix.push(parse_row(content, line)?),
                Section::Ideal => ideal_rows.push((line, parse_row(content, line)?)),
                Section::None => return Err(perr(line, "row outside of a `matrix:` or `ideal:` section")),
            }
        }
        if p.matrix.is_empty() {
            return Err(perr(matrix_line.max(1), "missing `matrix:` rows"));
        }
        let cols = p.matrix[0].len();
        if cols == 0 {
            return Err(perr(matrix_line, "matrix rows are empty"));
        }
        if let Some(bad) = p.matrix.iter().position(|r| r.len() != cols) {
            return Err(perr(
                matrix_line,
                format!("matrix row {} has {} entries, expected {cols}", bad + 1, p.matrix[bad].len()),
            ));
        }
        let d = p.matrix.len();
        if !ideal_rows.is_empty() {
            if let Some((line, r)) = ideal_rows.iter().find(|(_, r)| r.len() != d) {
                return Err(perr(*line, format!("ideal generator has {} entries, expected d = {d}", r.len())));
            }
            p.ideal = Some(IdealInput::Generators(ideal_rows.into_iter().map(|(_, r)| r).collect()));
        } else if seen.iter().any(|k| k == "ideal") && p.ideal.is_none() {
            return Err(perr(1, "`ideal:` has no generators"));
        }
        if p.samples_per_class == Some(0) {
            return Err(perr(1, "`samples_per_class` must be positive"));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let p = ProblemFile::parse(
            "# two-dimensional example\nmatrix:\n  1 1 1\n  0,1,2\nideal:\n 1 1\nsearch_bound: 50\nbox_radius: 3\n",
        )
        .unwrap();
        assert_eq!(p.matrix, vec![vec![1, 1, 1], vec![0, 1, 2]]);
        assert_eq!(p.ideal, Some(IdealInput::Generators(vec![vec![1, 1]])));
        assert_eq!(p.search_bound, Some(50));
        assert_eq!(p.box_radius, Some(3));
    }

    #[test]
    fn inline_rows_and_maximal() {
        let p = ProblemFile::parse("matrix: 2 3\nideal: maximal").unwrap();
        assert_eq!(p.matrix, vec![vec![2, 3]]);
        assert_eq!(p.ideal, Some(IdealInput::Maximal));
        let p = ProblemFile::parse("matrix: 1 0; 0 1").unwrap();
        assert_eq!(p.matrix.len(), 2);
    }

    #[test]
    fn errors_carry_lines() {
        let e = ProblemFile::parse("matrix:\n 1 2\n 1 x\n").unwrap_err();
        assert_eq!(e, perr(3, "expected an integer, found `x`"));
        let e = ProblemFile::parse("matrix:\n 1 2\n 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = ProblemFile::parse("matrix: 1 1\nideal:\n 1 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = ProblemFile::parse("colour: blue\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = ProblemFile::parse("1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}

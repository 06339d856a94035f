//! Problem files: one JSON document with polynomial strings.

use serde::Deserialize;

use framedeg::immersion::ImmersionProblem;
use framedeg::stiefel::{HypersurfaceSpec, StiefelProblem};
use framedeg::{parse_poly, PolyMatrix, Polynomial, Ring};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Stiefel,
    Immersion,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Kind,
    pub variables: Vec<String>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub g: Option<Vec<String>>,
    pub f: String,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Stiefel(StiefelProblem),
    Immersion(ImmersionProblem),
}

/// Byte offset in `text` of byte `offset` of the string `s`, when `s`
/// appears exactly once as a JSON string literal.
fn file_offset(text: &str, s: &str, offset: usize) -> Option<usize> {
    let needle = serde_json::to_string(s).ok()?;
    let mut hits = text.match_indices(&needle);
    let (start, _) = hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    let prefix = serde_json::to_string(s.get(..offset)?).ok()?;
    Some(start + prefix.len() - 1)
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| CliError::Json(e.to_string()))?;
    let ring = Ring::new(file.variables.iter().cloned()).map_err(CliError::Validation)?;
    let poly = |field: String, s: &str| -> Result<Polynomial, CliError> {
        parse_poly(s, &ring).map_err(|source| CliError::Poly {
            file_offset: file_offset(text, s, source.offset),
            field,
            source,
        })
    };
    let f = poly("f".into(), &file.f)?;
    match file.kind {
        Kind::Stiefel => {
            if file.g.is_some() {
                return Err(CliError::Usage("a stiefel problem takes \"matrix\", not \"g\"".into()));
            }
            let grid = file
                .matrix
                .ok_or_else(|| CliError::Usage("a stiefel problem needs a \"matrix\" field".into()))?;
            let rows = grid
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, s)| poly(format!("matrix[{i}][{j}]"), s))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let matrix = PolyMatrix::from_rows(&ring, rows).map_err(CliError::Validation)?;
            let hs = HypersurfaceSpec::new(f).map_err(CliError::Validation)?;
            StiefelProblem::new(matrix, hs)
                .map(Problem::Stiefel)
                .map_err(CliError::Validation)
        }
        Kind::Immersion => {
            if file.matrix.is_some() {
                return Err(CliError::Usage("an immersion problem takes \"g\", not \"matrix\"".into()));
            }
            let g = file
                .g
                .ok_or_else(|| CliError::Usage("an immersion problem needs a \"g\" field".into()))?
                .iter()
                .enumerate()
                .map(|(i, s)| poly(format!("g[{i}]"), s))
                .collect::<Result<Vec<_>, _>>()?;
            ImmersionProblem::new(f, g)
                .map(Problem::Immersion)
                .map_err(CliError::Validation)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_point_into_the_file() {
        let text = r#"{"kind": "stiefel", "variables": ["x"], "f": "x + * 2"}"#;
        let off = file_offset(text, "x + * 2", 4).unwrap();
        assert_eq!(&text[off..off + 1], "*");
        assert_eq!(file_offset(r#"["a", "a"]"#, "a", 0), None);
    }
}

//! Textual syntax for forms (`xz - yw @(1,1)`) and row-major bracketed
//! matrices (`[[x, y], [z, w]]`, entry bidegrees inferred from the labels).

use super::{vars_xyzw, BihomForm, BihomMatrix};
use crate::error::{Error, Result};
use crate::exactpoly::Poly;

pub(super) fn parse_form(src: &str) -> Result<BihomForm> {
    let at = src
        .rfind('@')
        .ok_or_else(|| Error::parse(src.len(), "missing bidegree annotation `@(a,b)`"))?;
    let (body, tail) = src.split_at(at);
    let bidegree = parse_bidegree(&tail[1..], at + 1)?;
    let poly = Poly::parse(body, &vars_xyzw())?;
    BihomForm::from_poly(&poly, bidegree)
}

fn parse_bidegree(src: &str, offset: usize) -> Result<(u32, u32)> {
    let s = src.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::parse(offset, "expected `(a,b)` after `@`"))?;
    let mut parts = inner.splitn(2, ',');
    let a = parts
        .next()
        .map(str::trim)
        .and_then(|p| p.parse::<u32>().ok());
    let b = parts
        .next()
        .map(str::trim)
        .and_then(|p| p.parse::<u32>().ok());
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::parse(offset, "expected two nonnegative integers")),
    }
}

pub(super) fn parse_matrix(
    targets: Vec<(i64, i64)>,
    sources: Vec<(i64, i64)>,
    src: &str,
) -> Result<BihomMatrix> {
    let trimmed = src.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::parse(0, "expected `[[...], [...]]`"))?;
    let mut rows: Vec<Vec<BihomForm>> = Vec::new();
    for (k, row_src) in split_rows(inner).into_iter().enumerate() {
        let row_inner = row_src
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::parse(0, format!("row {k} is not bracketed")))?;
        let mut row = Vec::new();
        for (l, cell) in row_inner.split(',').enumerate() {
            if k >= targets.len() || l >= sources.len() {
                return Err(Error::RejectedInput(format!(
                    "matrix text exceeds the declared {}x{} shape",
                    targets.len(),
                    sources.len()
                )));
            }
            let da = targets[k].0 - sources[l].0;
            let db = targets[k].1 - sources[l].1;
            let tag = (da.max(0) as u32, db.max(0) as u32);
            let poly = Poly::parse(cell, &vars_xyzw())?;
            row.push(BihomForm::from_poly(&poly, tag)?);
        }
        rows.push(row);
    }
    BihomMatrix::new(targets, sources, rows)
}

/// Split `[...], [...]` at top-level commas.
fn split_rows(src: &str) -> Vec<&str> {
    let mut rows = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (idx, ch) in src.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                rows.push(&src[start..idx]);
                start = idx + 1;
            }
            _ => {}
        }
    }
    rows.push(&src[start..]);
    rows
}

#[cfg(test)]
mod tests {
    use super::super::{BihomForm, BihomMatrix};
    use crate::error::Error;

    #[test]
    fn parses_annotated_forms() {
        let f = BihomForm::parse("xz - yw @(1,1)").unwrap();
        assert_eq!(f.bidegree(), (1, 1));
        let zero = BihomForm::parse("0 @(2,3)").unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.bidegree(), (2, 3));
    }

    #[test]
    fn homogeneity_enforced() {
        let err = BihomForm::parse("x + xz @(1,1)").unwrap_err();
        assert!(matches!(err, Error::RejectedInput(_)));
        let err = BihomForm::parse("xz", ).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn matrix_rows_and_labels() {
        let m = BihomMatrix::parse(
            vec![(0, -1), (-1, 0)],
            vec![(-1, -1), (-1, -1), (-1, -1)],
            "[[x, y, 0], [z, w, z]]",
        )
        .unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 3);
        assert_eq!(m.entry(0, 0), &BihomForm::x());
        assert!(m.entry(0, 2).is_zero());
    }

    #[test]
    fn matrix_shape_mismatch() {
        let err = BihomMatrix::parse(
            vec![(0, 0)],
            vec![(-1, 0)],
            "[[x, y]]",
        )
        .unwrap_err();
        assert!(matches!(err, Error::RejectedInput(_)));
    }
}

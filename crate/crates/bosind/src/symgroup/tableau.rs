//! Standard Young tableaux.

use crate::error::{Error, Result};
use crate::symgroup::partition::Partition;

/// A standard Young tableau: a filling of the diagram of `shape` with
/// 1..=N, strictly increasing along rows and down columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())
            .map_err(|_| Error::Validation(format!("rows {rows:?} do not form a diagram")))?;
        let n = shape.n_boxes();
        let mut seen = vec![false; n + 1];
        for row in &rows {
            for &v in row {
                if v < 1 || v > n || seen[v] {
                    return Err(Error::Validation(format!(
                        "tableau entries must be exactly 1..={n}: {rows:?}"
                    )));
                }
                seen[v] = true;
            }
        }
        for row in &rows {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!(
                    "rows must increase left to right: {rows:?}"
                )));
            }
        }
        for i in 1..rows.len() {
            for j in 0..rows[i].len() {
                if rows[i - 1][j] >= rows[i][j] {
                    return Err(Error::Validation(format!(
                        "columns must increase top to bottom: {rows:?}"
                    )));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn n_boxes(&self) -> usize {
        self.shape.n_boxes()
    }

    /// 0-based (row, col) of the entry `v`.
    pub fn position(&self, v: usize) -> (usize, usize) {
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(j) = row.iter().position(|&x| x == v) {
                return (i, j);
            }
        }
        unreachable!("validated tableau contains every entry once")
    }

    /// The filling with entries swapped; `None` if the result is not
    /// standard.
    pub(crate) fn swapped(&self, a: usize, b: usize) -> Option<StandardTableau> {
        let mut rows = self.rows.clone();
        for row in &mut rows {
            for v in row.iter_mut() {
                if *v == a {
                    *v = b;
                } else if *v == b {
                    *v = a;
                }
            }
        }
        StandardTableau::new(rows).ok()
    }
}

impl std::fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " / ")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// All standard tableaux of the given shape, in the fixed order produced by
/// inserting 1..=N row-topmost-first. This order also fixes the basis of
/// the orthogonal irrep matrices built on top of it.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    let n = shape.n_boxes();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); shape.rows()];
    fill(shape, n, 1, &mut rows, &mut out);
    out
}

fn fill(
    shape: &Partition,
    n: usize,
    next: usize,
    rows: &mut Vec<Vec<usize>>,
    out: &mut Vec<StandardTableau>,
) {
    if next > n {
        out.push(StandardTableau {
            shape: shape.clone(),
            rows: rows.clone(),
        });
        return;
    }
    for i in 0..shape.rows() {
        let len = rows[i].len();
        if len >= shape.parts()[i] {
            continue;
        }
        // column constraint: the cell above must already be filled
        if i > 0 && rows[i - 1].len() <= len {
            continue;
        }
        rows[i].push(next);
        fill(shape, n, next + 1, rows, out);
        rows[i].pop();
    }
}

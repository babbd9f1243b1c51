use crate::error::{Error, Result};

use super::Field;

/// Sparse matrix stored row-major; each row is sorted by column and holds no
/// explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<E> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, E)>>,
}

impl<E: Clone + PartialEq> SparseMatrix<E> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Zero values,
    /// duplicates and out-of-range indices are rejected.
    pub fn from_triplets<F: Field<Elem = E>>(
        field: &F,
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); nrows];
        for (r, c, v) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside a {nrows}x{ncols} matrix"
                )));
            }
            if field.is_zero(&v) {
                return Err(Error::Shape(format!("explicit zero at ({r}, {c})")));
            }
            rows[r].push((c, v));
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|(c, _)| *c);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Shape(format!("duplicate entry in row {r}")));
            }
        }
        Ok(Self { nrows, ncols, rows })
    }

    /// Builds a matrix from dense rows, dropping zeros.
    pub fn from_dense<F: Field<Elem = E>>(field: &F, ncols: usize, dense: &[Vec<E>]) -> Self {
        let rows = dense
            .iter()
            .map(|row| {
                assert_eq!(row.len(), ncols, "dense row has wrong length");
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !field.is_zero(v))
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        Self {
            nrows: dense.len(),
            ncols,
            rows,
        }
    }

    /// Builds a matrix from sparse columns (each a list of `(row, value)`).
    pub fn from_columns<F: Field<Elem = E>>(field: &F, nrows: usize, columns: &[Vec<(usize, E)>]) -> Result<Self> {
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        Self::from_triplets(field, nrows, columns.len(), entries)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, E)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|i| &row[i].1)
    }

    /// Triplets in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &E)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn column(&self, c: usize) -> Vec<(usize, E)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                row.binary_search_by_key(&c, |(j, _)| *j)
                    .ok()
                    .map(|i| (r, row[i].1.clone()))
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<(usize, E)>> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        cols
    }

    pub fn transpose(&self) -> Self {
        let cols = self.columns();
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            rows: cols,
        }
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let mut out = vec![vec![field.zero(); self.ncols]; self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out[r][*c] = v.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Submatrix on the given rows and columns, in the given orders.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (i, &c) in cols.iter().enumerate() {
            col_pos[c] = i;
        }
        let new_rows = rows
            .iter()
            .map(|&r| {
                let mut row: Vec<(usize, E)> = self.rows[r]
                    .iter()
                    .filter(|(c, _)| col_pos[*c] != usize::MAX)
                    .map(|(c, v)| (col_pos[*c], v.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        Self {
            nrows: rows.len(),
            ncols: cols.len(),
            rows: new_rows,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.nrows).collect();
        self.select(&all, cols)
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, x: &[E]) -> Result<Vec<E>> {
        if x.len() != self.ncols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.ncols
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter().fold(field.zero(), |acc, (c, v)| {
                    if field.is_zero(&x[*c]) {
                        acc
                    } else {
                        field.add(&acc, &field.mul(v, &x[*c]))
                    }
                })
            })
            .collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::Shape(format!(
                "product of {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            let mut acc: Vec<Option<E>> = vec![None; other.ncols];
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    let t = field.mul(a, b);
                    acc[*c] = Some(match acc[*c].take() {
                        Some(s) => field.add(&s, &t),
                        None => t,
                    });
                }
            }
            rows.push(
                acc.into_iter()
                    .enumerate()
                    .filter_map(|(c, v)| v.filter(|v| !field.is_zero(v)).map(|v| (c, v)))
                    .collect(),
            );
        }
        Ok(Self {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        })
    }
}

use std::collections::BTreeMap;

use crate::error::Result;
use crate::exactla::{Field, SparseMatrix};

use super::{BasisLabel, GradedFreeComplex};

/// Sparse matrix with both row and column adjacency, for in-place
/// elimination.
struct DualSparse<E> {
    rows: Vec<BTreeMap<usize, E>>,
    cols: Vec<BTreeMap<usize, E>>,
}

impl<E: Clone> DualSparse<E> {
    fn from_matrix(m: &SparseMatrix<E>) -> Self
    where
        E: PartialEq,
    {
        let mut rows = vec![BTreeMap::new(); m.nrows()];
        let mut cols = vec![BTreeMap::new(); m.ncols()];
        for (r, c, v) in m.triplets() {
            rows[r].insert(c, v.clone());
            cols[c].insert(r, v.clone());
        }
        Self { rows, cols }
    }

    fn set<F: Field<Elem = E>>(&mut self, field: &F, r: usize, c: usize, v: E) {
        if field.is_zero(&v) {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v.clone());
            self.cols[c].insert(r, v);
        }
    }

    fn clear_row(&mut self, r: usize) {
        for c in std::mem::take(&mut self.rows[r]).into_keys() {
            self.cols[c].remove(&r);
        }
    }

    fn clear_col(&mut self, c: usize) {
        for r in std::mem::take(&mut self.cols[c]).into_keys() {
            self.rows[r].remove(&c);
        }
    }
}

/// Cancels unit entries until none remain. Each step takes the first entry
/// of exponent zero (lowest homological degree, then row-major by basis
/// position) and removes its row/column pair by Gaussian elimination:
/// `d_n' = delta - gamma phi^-1 beta`, with `d_{n+1}` losing the column's
/// row and `d_{n-1}` losing the row's column. Surviving basis elements are
/// renumbered consecutively in their original order.
pub fn minimize<F: Field>(complex: &GradedFreeComplex<F>) -> Result<GradedFreeComplex<F>> {
    complex.check_complex()?;
    let field = complex.field().clone();
    let bases = complex.bases();
    let mut alive: Vec<Vec<bool>> = bases.iter().map(|b| vec![true; b.len()]).collect();
    let mut mats: Vec<DualSparse<F::Elem>> = complex.differentials().iter().map(DualSparse::from_matrix).collect();

    let mut start = 0;
    while let Some((i, r, c)) = find_unit(&mats, bases, start) {
        start = i;
        let n = i + 1;
        let m = &mut mats[i];
        let u = m.rows[r][&c].clone();
        let u_inv = field.inv(&u);
        let col: Vec<(usize, F::Elem)> = m.cols[c]
            .iter()
            .filter(|(k, _)| **k != r)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let row: Vec<(usize, F::Elem)> = m.rows[r]
            .iter()
            .filter(|(k, _)| **k != c)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        for (ri, a) in &col {
            let a_scaled = field.mul(a, &u_inv);
            for (cj, b) in &row {
                let old = m.rows[*ri].get(cj).cloned().unwrap_or_else(|| field.zero());
                let new = field.sub(&old, &field.mul(&a_scaled, b));
                m.set(&field, *ri, *cj, new);
            }
        }
        m.clear_row(r);
        m.clear_col(c);
        if let Some(next) = mats.get_mut(i + 1) {
            next.clear_row(c);
        }
        if i > 0 {
            mats[i - 1].clear_col(r);
        }
        alive[n][c] = false;
        alive[n - 1][r] = false;
    }

    // renumber survivors
    let mut next_id = 0;
    let mut new_pos: Vec<Vec<Option<usize>>> = Vec::with_capacity(bases.len());
    let mut new_bases: Vec<Vec<BasisLabel>> = Vec::with_capacity(bases.len());
    for (b, a) in bases.iter().zip(&alive) {
        let mut pos = vec![None; b.len()];
        let mut labels = Vec::new();
        for (p, l) in b.iter().enumerate() {
            if a[p] {
                pos[p] = Some(labels.len());
                labels.push(BasisLabel::new(next_id, l.degree.clone()));
                next_id += 1;
            }
        }
        new_pos.push(pos);
        new_bases.push(labels);
    }
    while new_bases.len() > 1 && new_bases.last().is_some_and(Vec::is_empty) {
        new_bases.pop();
    }
    let mut diffs = Vec::new();
    for (i, m) in mats.iter().enumerate().take(new_bases.len().saturating_sub(1)) {
        let n = i + 1;
        let entries = m.rows.iter().enumerate().flat_map(|(r, row)| {
            let new_pos = &new_pos;
            row.iter().map(move |(c, v)| {
                (
                    new_pos[n - 1][r].expect("live row"),
                    new_pos[n][*c].expect("live column"),
                    v.clone(),
                )
            })
        });
        diffs.push(SparseMatrix::from_triplets(
            &field,
            new_bases[n - 1].len(),
            new_bases[n].len(),
            entries,
        )?);
    }
    GradedFreeComplex::new(field, complex.num_vars(), new_bases, diffs)
}

fn find_unit<E>(mats: &[DualSparse<E>], bases: &[Vec<BasisLabel>], start: usize) -> Option<(usize, usize, usize)> {
    mats.iter().enumerate().skip(start).find_map(|(i, m)| {
        m.rows.iter().enumerate().find_map(|(r, row)| {
            row.keys()
                .find(|c| bases[i][r].degree == bases[i + 1][**c].degree)
                .map(|c| (i, r, *c))
        })
    })
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{Field, SparseMatrix};

type SparseVec<E> = Vec<(usize, E)>;

/// `a + s * b` on sorted sparse vectors.
fn axpy<F: Field>(field: &F, a: &SparseVec<F::Elem>, s: &F::Elem, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(s, &b[j].1)));
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(s, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup<'a, E>(v: &'a SparseVec<E>, c: usize) -> Option<&'a E> {
    v.binary_search_by_key(&c, |(j, _)| *j).ok().map(|i| &v[i].1)
}

/// Incrementally built row echelon form. Pivot rows are normalized to a
/// leading 1 and keyed by their pivot column; rows are inserted in order and
/// reduced against the existing pivots, so the pivot of a row is its first
/// surviving nonzero.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    pivots: BTreeMap<usize, SparseVec<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    fn reduce(&self, mut row: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut start = 0;
        loop {
            let Some(pos) = row[start..].iter().position(|(c, _)| self.pivots.contains_key(c)) else {
                return row;
            };
            let idx = start + pos;
            let (c, v) = row[idx].clone();
            let p = &self.pivots[&c];
            row = axpy(f, &row, &f.neg(&v), p);
            // entries before `idx` are untouched since the pivot row starts at `c`
            start = idx;
        }
    }

    /// Inserts a sparse row; returns its pivot column if it was independent.
    pub fn insert_sparse(&mut self, row: SparseVec<F::Elem>) -> Option<usize> {
        let row = self.reduce(row);
        let (c, lead) = row.first()?.clone();
        let inv = self.field.inv(&lead);
        let row: SparseVec<F::Elem> = row.into_iter().map(|(j, v)| (j, self.field.mul(&inv, &v))).collect();
        self.pivots.insert(c, row);
        Some(c)
    }

    pub fn insert_dense(&mut self, row: &[F::Elem]) -> Option<usize> {
        assert_eq!(row.len(), self.ncols);
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.field.is_zero(v))
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.insert_sparse(sparse)
    }

    /// True iff `row` lies in the span of the inserted rows.
    pub fn contains_dense(&self, row: &[F::Elem]) -> bool {
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.field.is_zero(v))
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.reduce(sparse).is_empty()
    }

    /// Reduced row echelon form: every pivot column is zero outside its own
    /// pivot row. Rows returned in ascending pivot order.
    pub fn into_rref(mut self) -> Vec<SparseVec<F::Elem>> {
        let f = self.field.clone();
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for (i, &c) in cols.iter().enumerate().rev() {
            let p = self.pivots[&c].clone();
            for &c2 in &cols[..i] {
                let row = self.pivots.get_mut(&c2).unwrap();
                if let Some(v) = lookup(row, c).cloned() {
                    *row = axpy(&f, row, &f.neg(&v), &p);
                }
            }
        }
        self.pivots.into_values().collect()
    }
}

fn echelon_of<F: Field>(a: &SparseMatrix<F::Elem>, field: &F) -> Echelon<F> {
    let mut ech = Echelon::new(field.clone(), a.ncols());
    for r in 0..a.nrows() {
        ech.insert_sparse(a.row(r).to_vec());
    }
    ech
}

/// Rank over the field.
pub fn rank<F: Field>(a: &SparseMatrix<F::Elem>, field: &F) -> usize {
    echelon_of(a, field).rank()
}

/// Basis of the right null space, one vector per pivot-free column in
/// ascending order, each scaled so that its first nonzero entry is 1.
pub fn kernel_basis<F: Field>(a: &SparseMatrix<F::Elem>, field: &F) -> Vec<Vec<F::Elem>> {
    let n = a.ncols();
    let rref = echelon_of(a, field).into_rref();
    let mut is_pivot = vec![false; n];
    for row in &rref {
        is_pivot[row[0].0] = true;
    }
    let mut basis = Vec::new();
    for j in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![field.zero(); n];
        v[j] = field.one();
        for row in &rref {
            if let Some(x) = lookup(row, j) {
                v[row[0].0] = field.neg(x);
            }
        }
        let lead = v.iter().find(|x| !field.is_zero(x)).cloned().unwrap();
        let inv = field.inv(&lead);
        for x in v.iter_mut() {
            *x = field.mul(&inv, x);
        }
        basis.push(v);
    }
    basis
}

/// Some `x` with `A x = b`, free coordinates set to zero; `None` when the
/// system is inconsistent.
pub fn solve<F: Field>(a: &SparseMatrix<F::Elem>, b: &[F::Elem], field: &F) -> Result<Option<Vec<F::Elem>>> {
    if b.len() != a.nrows() {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.nrows()
        )));
    }
    let n = a.ncols();
    let mut ech = Echelon::new(field.clone(), n + 1);
    for (r, rhs) in b.iter().enumerate() {
        let mut row = a.row(r).to_vec();
        if !field.is_zero(rhs) {
            row.push((n, rhs.clone()));
        }
        ech.insert_sparse(row);
    }
    if ech.pivots.contains_key(&n) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); n];
    for row in ech.into_rref() {
        if let Some(v) = lookup(&row, n) {
            x[row[0].0] = v.clone();
        }
    }
    Ok(Some(x))
}

/// Reduced row echelon basis of the span of `vectors`.
pub fn rref_basis<F: Field>(vectors: &[Vec<F::Elem>], ncols: usize, field: &F) -> Vec<Vec<F::Elem>> {
    let mut ech = Echelon::new(field.clone(), ncols);
    for v in vectors {
        ech.insert_dense(v);
    }
    ech.into_rref()
        .into_iter()
        .map(|row| {
            let mut dense = vec![field.zero(); ncols];
            for (c, v) in row {
                dense[c] = v;
            }
            dense
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};

    fn q(v: &[&[i64]]) -> SparseMatrix<num_rational::BigRational> {
        let f = Rationals;
        let ncols = v.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<_>> = v.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        SparseMatrix::from_dense(&f, ncols, &dense)
    }

    fn qv(v: &[i64]) -> Vec<num_rational::BigRational> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn rank_examples() {
        let gf2 = PrimeField::new(2).unwrap();
        let empty: SparseMatrix<u64> = SparseMatrix::zeros(0, 0);
        assert_eq!(rank(&empty, &gf2), 0);
        let id = SparseMatrix::from_triplets(&gf2, 3, 3, (0..3).map(|i| (i, i, 1))).unwrap();
        assert_eq!(rank(&id, &gf2), 3);
        assert_eq!(rank(&q(&[&[1, 1, 1]]), &Rationals), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&q(&[&[1, 1, 1]]), &Rationals);
        assert_eq!(k, vec![qv(&[1, -1, 0]), qv(&[1, 0, -1])]);

        let gf2 = PrimeField::new(2).unwrap();
        let id = SparseMatrix::from_triplets(&gf2, 3, 3, (0..3).map(|i| (i, i, 1))).unwrap();
        assert!(kernel_basis(&id, &gf2).is_empty());
        let ones = SparseMatrix::from_dense(&gf2, 2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(kernel_basis(&ones, &gf2), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let f = Rationals;
        let id = q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(solve(&id, &qv(&[4, -2, 7]), &f).unwrap(), Some(qv(&[4, -2, 7])));
        assert_eq!(solve(&q(&[&[1, 1]]), &qv(&[1]), &f).unwrap(), Some(qv(&[1, 0])));
        let zero: SparseMatrix<_> = SparseMatrix::zeros(1, 1);
        assert_eq!(solve(&zero, &qv(&[1]), &f).unwrap(), None);
        assert!(matches!(solve(&id, &qv(&[1]), &f), Err(Error::Shape(_))));
    }

    #[test]
    fn rref_of_span_is_canonical() {
        let f = Rationals;
        let a = rref_basis(&[qv(&[1, 1, 0]), qv(&[0, 1, 1])], 3, &f);
        let b = rref_basis(&[qv(&[1, 2, 1]), qv(&[2, 1, -1]), qv(&[1, 1, 0])], 3, &f);
        assert_eq!(a, b);
        assert_eq!(a, vec![qv(&[1, 0, -1]), qv(&[0, 1, 1])]);
    }
}

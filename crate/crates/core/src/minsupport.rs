//! Supports of boundaries, circuit tests, and the inductive construction of
//! a homogeneous basis with minimal support.
//!
//! Everything runs on the scalar (bar) matrices. For a homogeneous element
//! the support upstairs and the support of its bar image coincide, and a
//! kernel vector found downstairs lifts to a homogeneous kernel element of
//! degree equal to the lcm of the degrees in its support.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rank, solve, Field, SparseMatrix};
use crate::gradedcomplex::{BarComplex, GradedFreeComplex};
use crate::monomials::{lcm_all, Multidegree};

/// Set of basis ids within one homological degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Support(pub BTreeSet<usize>);

impl Support {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0.is_subset(&other.0)
    }
}

/// Ids of the nonzero entries in the column of `id`.
pub fn boundary_support<F: Field>(complex: &GradedFreeComplex<F>, id: usize) -> Result<Support> {
    let (n, pos) = complex.locate(id)?;
    if n == 0 {
        return Err(Error::NotFound(format!(
            "basis id {id} lies in degree 0 and has no boundary"
        )));
    }
    Ok(Support(
        complex
            .column_support(n, pos)
            .into_iter()
            .map(|r| complex.basis(n - 1)[r].id)
            .collect(),
    ))
}

/// Dimension of the kernel of `map` restricted to the columns `cols`.
fn nullity_on<F: Field>(map: &SparseMatrix<F::Elem>, cols: &[usize], field: &F) -> usize {
    cols.len() - rank(&map.select_columns(cols), field)
}

/// True iff `z` is a cycle whose support contains no smaller support of a
/// nonzero cycle, i.e. the cycles supported on `supp z` form a line.
pub fn is_minimal_support_cycle<F: Field>(bar: &BarComplex<F>, n: usize, z: &[F::Elem]) -> Result<bool> {
    let field = bar.complex.field();
    let dims = bar.complex.dims();
    if n >= dims.len() || z.len() != dims[n] {
        return Err(Error::Shape(format!("vector of length {} in degree {n}", z.len())));
    }
    let Some(map) = bar.map_from(n) else {
        return Err(Error::Shape(format!("no map out of degree {n}")));
    };
    if map.mul_vec(field, z)?.iter().any(|v| !field.is_zero(v)) {
        return Err(Error::NotACycle(n));
    }
    let support: Vec<usize> = (0..z.len()).filter(|&i| !field.is_zero(&z[i])).collect();
    if support.is_empty() {
        return Ok(true);
    }
    Ok(nullity_on(map, &support, field) == 1)
}

/// Greedily drops positions from `support`, in ascending order, while the
/// restricted kernel stays nonzero. The result is inclusion-minimal.
pub fn shrink_support<F: Field>(map: &SparseMatrix<F::Elem>, support: &[usize], field: &F) -> Vec<usize> {
    let mut current: Vec<usize> = support.to_vec();
    for &c in support {
        let candidate: Vec<usize> = current.iter().copied().filter(|&x| x != c).collect();
        if !candidate.is_empty() && nullity_on(map, &candidate, field) >= 1 {
            current = candidate;
        }
    }
    current
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplacementCase {
    /// The replaced element occurs in the witness `w`, which takes its place.
    WitnessContainsElement,
    /// The element is replaced by `a'_b b' - a_b x^(deg b' - deg z') w`.
    WitnessAvoidsElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub id: usize,
    pub scalar: serde_json::Value,
    pub exponent: Multidegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChange {
    pub degree: usize,
    pub replaced_id: usize,
    pub case: ReplacementCase,
    pub support_before: Support,
    pub support_after: Support,
    /// New element as a combination of the old basis of the same degree.
    pub replacement: Vec<TermJson>,
}

/// Ordered audit trail of basis replacements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BasisChangeLog {
    pub steps: Vec<BasisChange>,
}

impl BasisChangeLog {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the recorded replacements to `complex`.
    pub fn replay<F: Field>(&self, complex: &GradedFreeComplex<F>) -> Result<GradedFreeComplex<F>> {
        let field = complex.field().clone();
        let mut current = complex.clone();
        for step in &self.steps {
            let (n, pos) = current.locate(step.replaced_id)?;
            let mut v = vec![field.zero(); current.basis(n).len()];
            for t in &step.replacement {
                let (m, p) = current.locate(t.id)?;
                if m != n {
                    return Err(Error::Shape(format!("term {} lies in degree {m}, not {n}", t.id)));
                }
                v[p] = field
                    .from_json(&t.scalar)
                    .ok_or_else(|| Error::Parse(format!("bad scalar {}", t.scalar)))?;
            }
            current = change_basis_element(&current, n, pos, &v)?;
        }
        Ok(current)
    }
}

/// Replaces the basis element at `(n, pos)` by
/// `sum_i v_i x^(deg b - deg b_i) b_i`. Requires `v[pos] != 0` and
/// `v_i = 0` unless `deg b_i` divides `deg b`. Updates the column of `d_n`
/// and the rows of `d_{n+1}`.
pub fn change_basis_element<F: Field>(
    complex: &GradedFreeComplex<F>,
    n: usize,
    pos: usize,
    v: &[F::Elem],
) -> Result<GradedFreeComplex<F>> {
    let field = complex.field().clone();
    let basis = complex.basis(n);
    if v.len() != basis.len() || pos >= basis.len() {
        return Err(Error::Shape("replacement vector does not match the basis".into()));
    }
    if field.is_zero(&v[pos]) {
        return Err(Error::Shape(
            "replacement is not invertible: pivot coefficient is zero".into(),
        ));
    }
    let target = &basis[pos].degree;
    if let Some(bad) = (0..v.len()).find(|&i| !field.is_zero(&v[i]) && !basis[i].degree.divides(target)) {
        return Err(Error::NotHomogeneous(format!(
            "term {} of degree {} cannot appear in an element of degree {target}",
            basis[bad].id, basis[bad].degree
        )));
    }
    let mut diffs: Vec<SparseMatrix<F::Elem>> = complex.differentials().to_vec();
    if let Some(d) = complex.differential(n) {
        let mut dense = d.to_dense(&field);
        let new_col = d.mul_vec(&field, v)?;
        for (row, val) in dense.iter_mut().zip(new_col) {
            row[pos] = val;
        }
        diffs[n - 1] = SparseMatrix::from_dense(&field, d.ncols(), &dense);
    }
    if let Some(d) = complex.differential(n + 1) {
        let mut dense = d.to_dense(&field);
        let inv = field.inv(&v[pos]);
        let pivot_row = dense[pos].clone();
        for (i, row) in dense.iter_mut().enumerate() {
            if i == pos || field.is_zero(&v[i]) {
                continue;
            }
            let s = field.mul(&v[i], &inv);
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(x, &field.mul(&s, p));
            }
        }
        for x in dense[pos].iter_mut() {
            *x = field.mul(x, &inv);
        }
        diffs[n] = SparseMatrix::from_dense(&field, d.ncols(), &dense);
    }
    GradedFreeComplex::new(field, complex.num_vars(), complex.bases().to_vec(), diffs)
}

fn dense_column<F: Field>(m: &SparseMatrix<F::Elem>, c: usize, field: &F) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); m.nrows()];
    for (r, x) in m.column(c) {
        v[r] = x;
    }
    v
}

fn support_ids<F: Field>(complex: &GradedFreeComplex<F>, n: usize, v: &[F::Elem]) -> Support {
    let f = complex.field();
    Support(
        v.iter()
            .enumerate()
            .filter(|(_, x)| !f.is_zero(x))
            .map(|(i, _)| complex.basis(n)[i].id)
            .collect(),
    )
}

/// Transforms the basis of a minimal resolution, degree by degree, into a
/// homogeneous basis with minimal support, keeping `B_0` unchanged.
///
/// For each column `z = d(b')` whose support is not minimal, a cycle `z'`
/// with smaller support is found by [`shrink_support`]; a homogeneous
/// preimage `w` of `z'` is solved for in the strand of degree `deg z'`; and
/// `b'` is replaced by `w` when `b'` occurs in `w`, otherwise by
/// `a'_b b' - a_b x^(deg b' - deg z') w` for the first `b` in `supp z'`.
pub fn make_minimal_support_basis<F: Field>(
    complex: &GradedFreeComplex<F>,
) -> Result<(GradedFreeComplex<F>, BasisChangeLog)> {
    if let Some((n, r, c)) = complex.first_unit_entry() {
        return Err(Error::NotMinimal(format!(
            "unit entry ({}, {}) in d_{n}",
            complex.basis(n - 1)[r].id,
            complex.basis(n)[c].id
        )));
    }
    let field = complex.field().clone();
    let mut current = complex.clone();
    let mut log = BasisChangeLog::default();
    for n in 1..current.num_degrees() {
        let kernel_map = current
            .bar_reduce()
            .map_from(n - 1)
            .expect("map out of degree n-1")
            .clone();
        for pos in 0..current.basis(n).len() {
            loop {
                let d = current.differential(n).expect("degree n >= 1").clone();
                let z = dense_column(&d, pos, &field);
                let support: Vec<usize> = (0..z.len()).filter(|&i| !field.is_zero(&z[i])).collect();
                if support.is_empty() {
                    return Err(Error::DegenerateColumn(current.basis(n)[pos].id.to_string()));
                }
                if nullity_on(&kernel_map, &support, &field) == 1 {
                    break;
                }
                let smaller = shrink_support(&kernel_map, &support, &field);
                let z_small = {
                    let k = kernel_basis(&kernel_map.select_columns(&smaller), &field);
                    debug_assert_eq!(k.len(), 1);
                    let mut full = vec![field.zero(); z.len()];
                    for (&i, x) in smaller.iter().zip(&k[0]) {
                        full[i] = x.clone();
                    }
                    full
                };
                let deg_small: Multidegree =
                    lcm_all(smaller.iter().map(|&i| &current.basis(n - 1)[i].degree)).expect("nonempty");
                let strand_cols: Vec<usize> = (0..current.basis(n).len())
                    .filter(|&j| current.basis(n)[j].degree.divides(&deg_small))
                    .collect();
                let w_local = solve(&d.select_columns(&strand_cols), &z_small, &field)?.ok_or_else(|| {
                    Error::HypothesisFailed(format!(
                        "cycle of degree {deg_small} in degree {} is not a boundary; input is not a resolution",
                        n - 1
                    ))
                })?;
                let mut w = vec![field.zero(); current.basis(n).len()];
                for (&j, x) in strand_cols.iter().zip(w_local) {
                    w[j] = x;
                }
                let (v, case) = if !field.is_zero(&w[pos]) {
                    (w, ReplacementCase::WitnessContainsElement)
                } else {
                    let b = smaller[0];
                    let a_small = z_small[b].clone();
                    let a_big = z[b].clone();
                    let mut v: Vec<F::Elem> = w.iter().map(|x| field.neg(&field.mul(&a_big, x))).collect();
                    v[pos] = a_small;
                    (v, ReplacementCase::WitnessAvoidsElement)
                };
                let replacement = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !field.is_zero(x))
                    .map(|(i, x)| TermJson {
                        id: current.basis(n)[i].id,
                        scalar: field.to_json(x),
                        exponent: current.basis(n)[i]
                            .degree
                            .quotient_exponent(&current.basis(n)[pos].degree)
                            .expect("homogeneous replacement"),
                    })
                    .collect();
                let next = change_basis_element(&current, n, pos, &v)?;
                let after = dense_column(next.differential(n).expect("degree n"), pos, &field);
                let step = BasisChange {
                    degree: n,
                    replaced_id: current.basis(n)[pos].id,
                    case,
                    support_before: support_ids(&current, n - 1, &z),
                    support_after: support_ids(&current, n - 1, &after),
                    replacement,
                };
                if !(step.support_after.is_subset(&step.support_before)
                    && step.support_after.len() < step.support_before.len())
                {
                    return Err(Error::VerificationFailed(format!(
                        "replacement of {} did not shrink its boundary support",
                        step.replaced_id
                    )));
                }
                log.steps.push(step);
                current = next;
            }
        }
    }
    verify_minimal_support(&current)?;
    Ok((current, log))
}

/// Checks every column of every differential with the circuit test.
pub fn verify_minimal_support<F: Field>(complex: &GradedFreeComplex<F>) -> Result<()> {
    if let Some((n, pos)) = first_non_minimal_column(complex)? {
        return Err(Error::NotMinimalSupport {
            apex: complex.basis(n)[pos].id.to_string(),
            reason: format!("boundary of a degree-{n} element is not a circuit"),
        });
    }
    Ok(())
}

/// First `(n, position)` whose boundary fails the circuit test.
pub fn first_non_minimal_column<F: Field>(complex: &GradedFreeComplex<F>) -> Result<Option<(usize, usize)>> {
    let bar = complex.bar_reduce();
    let field = complex.field();
    for n in 1..complex.num_degrees() {
        let d = complex.differential(n).expect("degree n >= 1");
        for pos in 0..d.ncols() {
            let z = dense_column(d, pos, field);
            if !is_minimal_support_cycle(&bar, n - 1, &z)? {
                return Ok(Some((n, pos)));
            }
        }
    }
    Ok(None)
}

/// True iff within each degree `n >= 1` no boundary support contains another.
pub fn noncomparable_supports<F: Field>(complex: &GradedFreeComplex<F>) -> bool {
    (1..complex.num_degrees()).all(|n| {
        let supports: Vec<BTreeSet<usize>> = (0..complex.basis(n).len())
            .map(|p| complex.column_support(n, p).into_iter().collect())
            .collect();
        supports
            .iter()
            .enumerate()
            .all(|(i, a)| supports.iter().enumerate().all(|(j, b)| i == j || !a.is_subset(b)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};
    use crate::gradedcomplex::{minimize, taylor_complex, BasisLabel};
    use crate::monomials::MonomialIdeal;

    fn md(v: &[u32]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    fn ideal(gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(gens.iter().map(|g| md(g))).unwrap()
    }

    /// Field complex `k^3 -> k` given by `[1 1 1]`, as a bar complex.
    fn ones_row() -> BarComplex<Rationals> {
        let f = Rationals;
        let bases = vec![(0..3).map(|i| BasisLabel::new(i, md(&[0]))).collect()];
        let aug = SparseMatrix::from_triplets(&f, 1, 3, (0..3).map(|c| (0, c, f.one()))).unwrap();
        BarComplex {
            bases,
            complex: crate::exactla::FieldComplex::new(f, vec![3], vec![], Some(aug)).unwrap(),
        }
    }

    #[test]
    fn circuit_test_examples() {
        let q = Rationals;
        let bar = ones_row();
        let v = |xs: &[i64]| xs.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        assert!(is_minimal_support_cycle(&bar, 0, &v(&[1, -1, 0])).unwrap());
        assert!(!is_minimal_support_cycle(&bar, 0, &v(&[2, -1, -1])).unwrap());
        assert_eq!(
            is_minimal_support_cycle(&bar, 0, &v(&[1, 0, 0])),
            Err(Error::NotACycle(0))
        );
    }

    #[test]
    fn koszul_boundary_support() {
        let c = taylor_complex(&ideal(&[&[1, 0], &[0, 1]]), Rationals).unwrap();
        assert_eq!(boundary_support(&c, 2).unwrap(), Support([0, 1].into()));
        assert!(matches!(boundary_support(&c, 7), Err(Error::NotFound(_))));
        let (out, log) = make_minimal_support_basis(&c).unwrap();
        assert_eq!(out, c);
        assert!(log.is_empty());
    }

    #[test]
    fn non_minimal_input_is_rejected() {
        let c = taylor_complex(&ideal(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]), Rationals).unwrap();
        assert!(matches!(make_minimal_support_basis(&c), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn koszul_three_variables_has_noncomparable_supports() {
        let c = minimize(&taylor_complex(&ideal(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), Rationals).unwrap()).unwrap();
        let (b, _) = make_minimal_support_basis(&c).unwrap();
        assert!(noncomparable_supports(&b));
    }

    #[test]
    fn duplicated_column_is_comparable() {
        let f = PrimeField::new(2).unwrap();
        let bases = vec![
            vec![BasisLabel::new(0, md(&[1, 0])), BasisLabel::new(1, md(&[0, 1]))],
            vec![BasisLabel::new(2, md(&[1, 1])), BasisLabel::new(3, md(&[1, 1]))],
        ];
        let d = SparseMatrix::from_triplets(&f, 2, 2, [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]).unwrap();
        let c = GradedFreeComplex::new(f, 2, bases, vec![d]).unwrap();
        assert!(!noncomparable_supports(&c));
    }

    #[test]
    fn damaged_basis_is_repaired_and_replayable() {
        let i = ideal(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let m = minimize(&taylor_complex(&i, Rationals).unwrap()).unwrap();
        let (good, _) = make_minimal_support_basis(&m).unwrap();
        let n = 1;
        let basis = good.basis(n);
        let (lo, hi) = (0..basis.len())
            .flat_map(|a| (0..basis.len()).map(move |b| (a, b)))
            .find(|&(a, b)| a != b && basis[a].degree.divides(&basis[b].degree))
            .expect("comparable pair");
        let q = Rationals;
        let mut v = vec![q.zero(); basis.len()];
        v[hi] = q.one();
        v[lo] = q.one();
        let damaged = change_basis_element(&good, n, hi, &v).unwrap();
        damaged.check_complex().unwrap();
        assert!(first_non_minimal_column(&damaged).unwrap().is_some());
        let (fixed, log) = make_minimal_support_basis(&damaged).unwrap();
        assert!(!log.is_empty());
        assert!(first_non_minimal_column(&fixed).unwrap().is_none());
        assert_eq!(log.replay(&damaged).unwrap(), fixed);
        assert_eq!(fixed.betti_table().unwrap(), m.betti_table().unwrap());
    }
}

//! Z^m-graded chain complexes of free modules over `k[x_1..x_m]`.
//!
//! A basis element carries a multidegree, and every differential entry is
//! `scalar * x^(deg col - deg row)`. Only the scalar is stored: the monomial
//! factor is determined by the labels, so the scalar matrices together with
//! the degree labels describe the complex completely.

mod betti;
mod json;
mod minimize;
mod taylor;

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactla::{Field, FieldComplex, SparseMatrix};
use crate::monomials::{LcmLattice, MonomialIdeal, Multidegree};

pub use betti::BettiTable;
pub use json::{BasisLabelJson, ComplexJson, EntryJson};
pub use minimize::minimize;
pub use taylor::{taylor_complex, TAYLOR_GENERATOR_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct BasisLabel {
    pub id: usize,
    pub degree: Multidegree,
}

impl BasisLabel {
    pub fn new(id: usize, degree: Multidegree) -> Self {
        Self { id, degree }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFreeComplex<F: Field> {
    num_vars: usize,
    field: F,
    bases: Vec<Vec<BasisLabel>>,
    /// `diffs[n - 1]` is `F_n -> F_{n-1}`, indexed by basis positions.
    diffs: Vec<SparseMatrix<F::Elem>>,
}

impl<F: Field> GradedFreeComplex<F> {
    /// Validates shapes, label lengths, id uniqueness and homogeneity.
    /// Does not check that the differentials compose to zero; see
    /// [`GradedFreeComplex::check_complex`].
    pub fn new(
        field: F,
        num_vars: usize,
        bases: Vec<Vec<BasisLabel>>,
        diffs: Vec<SparseMatrix<F::Elem>>,
    ) -> Result<Self> {
        if diffs.len() + 1 != bases.len().max(1) {
            return Err(Error::Shape(format!(
                "{} differentials for {} homological degrees",
                diffs.len(),
                bases.len()
            )));
        }
        let mut seen = HashSet::new();
        for label in bases.iter().flatten() {
            if label.degree.num_vars() != num_vars {
                return Err(Error::Shape(format!(
                    "basis element {} has a degree of length {}",
                    label.id,
                    label.degree.num_vars()
                )));
            }
            if !seen.insert(label.id) {
                return Err(Error::Shape(format!("duplicate basis id {}", label.id)));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            let n = i + 1;
            if d.nrows() != bases[n - 1].len() || d.ncols() != bases[n].len() {
                return Err(Error::Shape(format!(
                    "differential {n} is {}x{}, expected {}x{}",
                    d.nrows(),
                    d.ncols(),
                    bases[n - 1].len(),
                    bases[n].len()
                )));
            }
            for (r, c, _) in d.triplets() {
                let (row, col) = (&bases[n - 1][r], &bases[n][c]);
                if !row.degree.divides(&col.degree) {
                    return Err(Error::NotHomogeneous(format!(
                        "entry ({}, {}) would need x^({} - {})",
                        row.id, col.id, col.degree, row.degree
                    )));
                }
            }
        }
        Ok(Self {
            num_vars,
            field,
            bases,
            diffs,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of homological degrees (`length + 1`).
    pub fn num_degrees(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Vec<BasisLabel>] {
        &self.bases
    }

    pub fn basis(&self, n: usize) -> &[BasisLabel] {
        self.bases.get(n).map_or(&[], Vec::as_slice)
    }

    /// `F_n -> F_{n-1}` for `n >= 1`.
    pub fn differential(&self, n: usize) -> Option<&SparseMatrix<F::Elem>> {
        n.checked_sub(1).and_then(|i| self.diffs.get(i))
    }

    pub fn differentials(&self) -> &[SparseMatrix<F::Elem>] {
        &self.diffs
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// `(homological degree, position)` of a basis id.
    pub fn locate(&self, id: usize) -> Result<(usize, usize)> {
        self.bases
            .iter()
            .enumerate()
            .find_map(|(n, b)| b.iter().position(|l| l.id == id).map(|p| (n, p)))
            .ok_or_else(|| Error::NotFound(format!("basis id {id}")))
    }

    pub fn label(&self, id: usize) -> Result<&BasisLabel> {
        let (n, p) = self.locate(id)?;
        Ok(&self.bases[n][p])
    }

    /// Exponent of the monomial factor of entry `(row, col)` of `d_n`.
    pub fn entry_exponent(&self, n: usize, row: usize, col: usize) -> Multidegree {
        self.bases[n - 1][row]
            .degree
            .quotient_exponent(&self.bases[n][col].degree)
            .expect("homogeneous by construction")
    }

    /// The ideal whose generators are the degrees of `F_0`.
    pub fn resolved_ideal(&self) -> Result<MonomialIdeal> {
        MonomialIdeal::minimalize(self.basis(0).iter().map(|l| l.degree.clone()))
    }

    pub fn check_complex(&self) -> Result<()> {
        for (i, pair) in self.diffs.windows(2).enumerate() {
            let prod = pair[0].mul(&self.field, &pair[1])?;
            let first = prod.triplets().next().map(|(r, c, _)| (r, c));
            if let Some((r, c)) = first {
                return Err(Error::NotAComplex(format!(
                    "d_{} d_{} != 0 at ({}, {})",
                    i + 1,
                    i + 2,
                    self.bases[i][r].id,
                    self.bases[i + 2][c].id
                )));
            }
        }
        Ok(())
    }

    /// True iff no differential has a unit entry (exponent zero).
    pub fn is_minimal(&self) -> bool {
        self.first_unit_entry().is_none()
    }

    /// First unit entry as `(n, row position, col position)`, scanning the
    /// lowest homological degree first and each matrix row-major.
    pub fn first_unit_entry(&self) -> Option<(usize, usize, usize)> {
        self.diffs.iter().enumerate().find_map(|(i, d)| {
            let n = i + 1;
            d.triplets()
                .find(|(r, c, _)| self.bases[n - 1][*r].degree == self.bases[n][*c].degree)
                .map(|(r, c, _)| (n, r, c))
        })
    }

    /// Tensor with `R/(x_1 - 1, .., x_m - 1)`: the scalar matrices, augmented
    /// by sending every degree-zero basis element to 1.
    pub fn bar_reduce(&self) -> BarComplex<F> {
        let d0 = self.basis(0).len();
        let aug = SparseMatrix::from_triplets(&self.field, 1, d0, (0..d0).map(|c| (0, c, self.field.one())))
            .expect("valid augmentation");
        let complex = FieldComplex::new(self.field.clone(), self.ranks(), self.diffs.clone(), Some(aug))
            .expect("shapes validated at construction");
        BarComplex {
            bases: self.bases.clone(),
            complex,
        }
    }

    /// Degree-`alpha` strand: the span of basis elements with degree
    /// dividing `alpha`, with the scalar parts of the surviving entries.
    pub fn strand(&self, alpha: &Multidegree) -> BarComplex<F> {
        let keep: Vec<Vec<usize>> = self
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .filter(|(_, l)| l.degree.divides(alpha))
                    .map(|(p, _)| p)
                    .collect()
            })
            .collect();
        // drop trailing empty degrees so the strand has no spurious length
        let mut len = keep.len();
        while len > 1 && keep[len - 1].is_empty() {
            len -= 1;
        }
        let keep = &keep[..len.min(keep.len())];
        let bases = keep
            .iter()
            .enumerate()
            .map(|(n, k)| k.iter().map(|&p| self.bases[n][p].clone()).collect())
            .collect();
        let full = FieldComplex::new(
            self.field.clone(),
            self.ranks()[..keep.len()].to_vec(),
            self.diffs[..keep.len().saturating_sub(1)].to_vec(),
            None,
        )
        .expect("shapes validated at construction");
        BarComplex {
            bases,
            complex: full.restrict(keep),
        }
    }

    /// Checks strand-wise exactness at every degree of the join-closure of
    /// the basis labels, which contains the lcm lattice of the resolved ideal.
    pub fn is_resolution(&self) -> Result<ResolutionReport> {
        self.check_complex()?;
        let ideal = self.resolved_ideal()?;
        let lattice: Vec<Multidegree> = LcmLattice::join_closure(self.bases.iter().flatten().map(|l| l.degree.clone()))
            .degrees()
            .cloned()
            .collect();
        let failures: Vec<StrandFailure> = lattice
            .par_iter()
            .filter_map(|alpha| {
                let h = self.strand(alpha).complex.homology_ranks();
                let ok = h.first() == Some(&1) && h.iter().skip(1).all(|&r| r == 0);
                (!ok).then(|| StrandFailure {
                    degree: alpha.clone(),
                    homology: h,
                })
            })
            .collect();
        let generators_ok = self.basis(0).len() == ideal.len();
        Ok(ResolutionReport {
            is_resolution: failures.is_empty() && generators_ok,
            degrees_tested: lattice.len(),
            failures,
        })
    }

    /// Betti table of a minimal complex.
    pub fn betti_table(&self) -> Result<BettiTable> {
        if let Some((n, r, c)) = self.first_unit_entry() {
            return Err(Error::NotMinimal(format!(
                "unit entry ({}, {}) in d_{n}",
                self.bases[n - 1][r].id,
                self.bases[n][c].id
            )));
        }
        let mut entries: BTreeMap<(usize, Multidegree), usize> = BTreeMap::new();
        for (i, b) in self.bases.iter().enumerate() {
            for l in b {
                *entries.entry((i, l.degree.clone())).or_default() += 1;
            }
        }
        Ok(BettiTable::from_entries(entries))
    }

    /// Positions of the boundary support of basis element at `(n, col)`.
    pub(crate) fn column_support(&self, n: usize, col: usize) -> Vec<usize> {
        self.diffs[n - 1].column(col).into_iter().map(|(r, _)| r).collect()
    }
}

/// Field complex obtained from a graded free complex, keeping basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarComplex<F: Field> {
    pub bases: Vec<Vec<BasisLabel>>,
    pub complex: FieldComplex<F>,
}

impl<F: Field> BarComplex<F> {
    pub fn ranks(&self) -> Vec<usize> {
        self.complex.dims().to_vec()
    }

    /// Matrix of the map out of degree `n`: the augmentation for `n = 0`.
    pub fn map_from(&self, n: usize) -> Option<&SparseMatrix<F::Elem>> {
        if n == 0 {
            self.complex.augmentation()
        } else {
            self.complex.boundary(n)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandFailure {
    pub degree: Multidegree,
    pub homology: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionReport {
    pub is_resolution: bool,
    pub degrees_tested: usize,
    pub failures: Vec<StrandFailure>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};

    fn md(v: &[u32]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    fn ideal(gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(gens.iter().map(|g| md(g))).unwrap()
    }

    #[test]
    fn koszul_bar_signs_follow_subset_positions() {
        let c = taylor_complex(&ideal(&[&[1, 0], &[0, 1]]), Rationals).unwrap();
        let bar = c.bar_reduce();
        let d1 = bar.complex.boundary(1).unwrap();
        let q = Rationals;
        // d e_{xy} = x e_y - y e_x
        assert_eq!(d1.get(0, 0), Some(&q.from_i64(-1)));
        assert_eq!(d1.get(1, 0), Some(&q.from_i64(1)));
        bar.complex.check_square_zero().unwrap();
        assert!(bar.complex.is_exact());
    }

    #[test]
    fn koszul_strands() {
        let c = taylor_complex(&ideal(&[&[1, 0], &[0, 1]]), Rationals).unwrap();
        let s = c.strand(&md(&[1, 0]));
        assert_eq!(s.ranks(), vec![1]);
        assert_eq!(s.complex.homology_ranks(), vec![1]);
        let s = c.strand(&md(&[1, 1]));
        assert_eq!(s.ranks(), vec![2, 1]);
        assert_eq!(s.complex.homology_ranks(), vec![1, 0]);
    }

    #[test]
    fn taylor_strand_of_triangle_ideal() {
        let c = taylor_complex(
            &ideal(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]),
            PrimeField::new(2).unwrap(),
        )
        .unwrap();
        let s = c.strand(&md(&[1, 1, 1]));
        assert_eq!(s.ranks(), vec![3, 3, 1]);
        assert_eq!(s.complex.homology_ranks(), vec![1, 0, 0]);
    }

    #[test]
    fn rejects_inhomogeneous_entries() {
        let f = Rationals;
        let bases = vec![
            vec![BasisLabel::new(0, md(&[1, 0]))],
            vec![BasisLabel::new(1, md(&[0, 1]))],
        ];
        let d = SparseMatrix::from_triplets(&f, 1, 1, [(0, 0, f.one())]).unwrap();
        assert!(matches!(
            GradedFreeComplex::new(f, 2, bases, vec![d]),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn sign_flip_is_not_a_complex() {
        let c = taylor_complex(&ideal(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), Rationals).unwrap();
        let (f, m, bases) = (*c.field(), c.num_vars(), c.bases().to_vec());
        let mut diffs = c.differentials().to_vec();
        // flip the sign of one entry of d_2
        let d2 = &diffs[1];
        let (r, col, v) = d2.triplets().next().map(|(r, c, v)| (r, c, v.clone())).unwrap();
        let entries: Vec<_> = d2
            .triplets()
            .map(|(i, j, x)| (i, j, if (i, j) == (r, col) { f.neg(&v) } else { x.clone() }))
            .collect();
        diffs[1] = SparseMatrix::from_triplets(&f, d2.nrows(), d2.ncols(), entries).unwrap();
        let broken = GradedFreeComplex::new(f, m, bases, diffs).unwrap();
        assert!(matches!(broken.is_resolution(), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn betti_table_of_koszul() {
        let c = taylor_complex(&ideal(&[&[1, 0], &[0, 1]]), Rationals).unwrap();
        let t = c.betti_table().unwrap();
        assert_eq!(t.get(0, &md(&[1, 0])), 1);
        assert_eq!(t.get(0, &md(&[0, 1])), 1);
        assert_eq!(t.get(1, &md(&[1, 1])), 1);
        assert_eq!(t.totals(), vec![2, 1]);
    }

    #[test]
    fn non_minimal_betti_is_rejected() {
        let c = taylor_complex(&ideal(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]), Rationals).unwrap();
        assert!(matches!(c.betti_table(), Err(Error::NotMinimal(_))));
    }
}

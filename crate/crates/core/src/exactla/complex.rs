use crate::error::{Error, Result};

use super::{rank, Field, SparseMatrix};

/// Finite chain complex of vector spaces in degrees `0..=top`, optionally
/// augmented by a map `C_0 -> k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldComplex<F: Field> {
    field: F,
    dims: Vec<usize>,
    /// `boundaries[n - 1]` is `C_n -> C_{n-1}`.
    boundaries: Vec<SparseMatrix<F::Elem>>,
    augmentation: Option<SparseMatrix<F::Elem>>,
}

impl<F: Field> FieldComplex<F> {
    pub fn new(
        field: F,
        dims: Vec<usize>,
        boundaries: Vec<SparseMatrix<F::Elem>>,
        augmentation: Option<SparseMatrix<F::Elem>>,
    ) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(Error::Shape(format!(
                "{} boundary maps for {} degrees",
                boundaries.len(),
                dims.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let n = i + 1;
            if d.nrows() != dims[n - 1] || d.ncols() != dims[n] {
                return Err(Error::Shape(format!(
                    "boundary in degree {n} is {}x{}, expected {}x{}",
                    d.nrows(),
                    d.ncols(),
                    dims[n - 1],
                    dims[n]
                )));
            }
        }
        if let Some(aug) = &augmentation {
            let d0 = dims.first().copied().unwrap_or(0);
            if aug.nrows() != 1 || aug.ncols() != d0 {
                return Err(Error::Shape("augmentation must be 1 x dim C_0".into()));
            }
        }
        Ok(Self {
            field,
            dims,
            boundaries,
            augmentation,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    pub fn is_augmented(&self) -> bool {
        self.augmentation.is_some()
    }

    /// `C_n -> C_{n-1}` for `n >= 1`.
    pub fn boundary(&self, n: usize) -> Option<&SparseMatrix<F::Elem>> {
        n.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn boundaries(&self) -> &[SparseMatrix<F::Elem>] {
        &self.boundaries
    }

    pub fn augmentation(&self) -> Option<&SparseMatrix<F::Elem>> {
        self.augmentation.as_ref()
    }

    /// Checks that consecutive maps compose to zero.
    pub fn check_square_zero(&self) -> Result<()> {
        if let (Some(aug), Some(d1)) = (&self.augmentation, self.boundaries.first()) {
            if !aug.mul(&self.field, d1)?.is_zero() {
                return Err(Error::NotAComplex(
                    "augmentation composed with the first boundary is nonzero".into(),
                ));
            }
        }
        for (i, pair) in self.boundaries.windows(2).enumerate() {
            if !pair[0].mul(&self.field, &pair[1])?.is_zero() {
                return Err(Error::NotAComplex(format!(
                    "boundary composite from degree {} to {} is nonzero",
                    i + 2,
                    i
                )));
            }
        }
        Ok(())
    }

    fn boundary_ranks(&self) -> Vec<usize> {
        self.boundaries.iter().map(|d| rank(d, &self.field)).collect()
    }

    /// Homology ranks in degrees `0..=top`, computed as
    /// `dim C_n - rank d_n - rank d_{n+1}` (with `d_0` the augmentation).
    pub fn homology_ranks(&self) -> Vec<usize> {
        let ranks = self.boundary_ranks();
        let aug_rank = self.augmentation.as_ref().map_or(0, |a| rank(a, &self.field));
        (0..self.dims.len())
            .map(|n| {
                let out = if n == 0 { aug_rank } else { ranks[n - 1] };
                let inc = ranks.get(n).copied().unwrap_or(0);
                self.dims[n] - out - inc
            })
            .collect()
    }

    /// Homology of the augmentation target `C_{-1} = k`; zero when unaugmented.
    pub fn augmented_h_minus_one(&self) -> usize {
        match &self.augmentation {
            Some(a) => 1 - rank(a, &self.field),
            None => 0,
        }
    }

    /// Exactness including the augmentation degree when present.
    pub fn is_exact(&self) -> bool {
        self.homology_ranks().iter().all(|&h| h == 0) && self.augmented_h_minus_one() == 0
    }

    /// Subcomplex spanned by the given basis positions in each degree.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Self {
        assert_eq!(keep.len(), self.dims.len());
        let dims = keep.iter().map(Vec::len).collect();
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, d)| d.select(&keep[i], &keep[i + 1]))
            .collect();
        let augmentation = self
            .augmentation
            .as_ref()
            .map(|a| a.select(&[0], keep.first().map_or(&[][..], |k| &k[..])));
        Self {
            field: self.field.clone(),
            dims,
            boundaries,
            augmentation,
        }
    }

    /// Same maps without the augmentation.
    pub fn without_augmentation(&self) -> Self {
        Self {
            augmentation: None,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PrimeField;

    #[test]
    fn interval_is_exact_when_augmented() {
        let f = PrimeField::new(3).unwrap();
        // two points joined by an edge
        let d1 = SparseMatrix::from_triplets(&f, 2, 1, [(0, 0, 1), (1, 0, 2)]).unwrap();
        let aug = SparseMatrix::from_triplets(&f, 1, 2, [(0, 0, 1), (0, 1, 1)]).unwrap();
        let c = FieldComplex::new(f, vec![2, 1], vec![d1], Some(aug)).unwrap();
        c.check_square_zero().unwrap();
        assert!(c.is_exact());
        assert_eq!(c.without_augmentation().homology_ranks(), vec![1, 0]);
    }

    #[test]
    fn detects_nonzero_composite() {
        let f = PrimeField::new(3).unwrap();
        let d1 = SparseMatrix::from_triplets(&f, 2, 1, [(0, 0, 1), (1, 0, 1)]).unwrap();
        let aug = SparseMatrix::from_triplets(&f, 1, 2, [(0, 0, 1), (0, 1, 1)]).unwrap();
        let c = FieldComplex::new(f, vec![2, 1], vec![d1], Some(aug)).unwrap();
        assert!(matches!(c.check_square_zero(), Err(Error::NotAComplex(_))));
    }
}

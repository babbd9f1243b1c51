//! Conic chain complex of a finite poset: in degree `n` one summand
//! `H~_{n-1}(Delta(P_{<a}))` per element `a` of dimension `n`, with
//! differential induced by the simplicial boundary.
//!
//! Each summand is represented by the canonical reduced row echelon basis of
//! the top-dimensional cycle space of `Delta(P_{<a})`, over the faces of that
//! complex in their sorted order.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rref_basis, Field, FieldComplex, SparseMatrix};
use crate::gradedcomplex::{BasisLabel, GradedFreeComplex, ResolutionReport};
use crate::monomials::Multidegree;
use crate::posets::Poset;

/// Summand of the conic complex at one apex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicComponent<F: Field> {
    pub apex: usize,
    pub dim: usize,
    /// Faces of dimension `dim - 1` of `Delta(P_{<apex})`.
    pub faces: Vec<Vec<usize>>,
    /// Basis of the cycle space, in reduced row echelon form.
    pub cycles: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    face_index: HashMap<Vec<usize>, usize>,
}

impl<F: Field> ConicComponent<F> {
    fn build(poset: &Poset, apex: usize, field: &F) -> Result<Self> {
        let dim = poset.dim_element(apex);
        let oc = poset.lower_order_complex(apex)?;
        let k = dim as isize - 1;
        let faces = oc.faces(k).to_vec();
        let cycles = if k < 0 {
            vec![vec![field.one()]]
        } else {
            let z = kernel_basis(&oc.boundary(k, field), field);
            rref_basis(&z, faces.len(), field)
        };
        let pivots = cycles
            .iter()
            .map(|row| row.iter().position(|x| !field.is_zero(x)).expect("nonzero basis row"))
            .collect();
        let face_index = faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        Ok(Self {
            apex,
            dim,
            faces,
            cycles,
            pivots,
            face_index,
        })
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn face_position(&self, face: &[usize]) -> Option<usize> {
        self.face_index.get(face).copied()
    }

    /// Coordinates of a cycle, given densely over [`Self::faces`], in the
    /// echelon basis. Fails if the vector is not in the span.
    pub fn coordinates(&self, w: &[F::Elem], field: &F) -> Result<Vec<F::Elem>> {
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&p| w[p].clone()).collect();
        let mut rebuilt = vec![field.zero(); w.len()];
        for (c, row) in coords.iter().zip(&self.cycles) {
            if field.is_zero(c) {
                continue;
            }
            for (x, r) in rebuilt.iter_mut().zip(row) {
                *x = field.add(x, &field.mul(c, r));
            }
        }
        if rebuilt != w {
            return Err(Error::VerificationFailed(format!(
                "chain below apex {} is not a cycle of top dimension",
                self.apex
            )));
        }
        Ok(coords)
    }
}

/// Conic chain complex, augmented by `C_{-1} = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicComplex<F: Field> {
    field: F,
    poset: Poset,
    components: Vec<ConicComponent<F>>,
    basis: Vec<Vec<(usize, usize)>>,
    complex: FieldComplex<F>,
}

/// Homogenized conic complex with the origin `(apex, index)` of each id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenizedConic<F: Field> {
    pub complex: GradedFreeComplex<F>,
    pub origin: Vec<(usize, usize)>,
}

impl<F: Field> ConicComplex<F> {
    pub fn new(poset: &Poset, field: F) -> Result<Self> {
        if poset.is_empty() {
            return Err(Error::Shape("conic complex of the empty poset".into()));
        }
        let components: Vec<ConicComponent<F>> = (0..poset.len())
            .into_par_iter()
            .map(|a| ConicComponent::build(poset, a, &field))
            .collect::<Result<_>>()?;
        let top = poset.max_dim().expect("nonempty");
        let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); top + 1];
        for c in &components {
            for j in 0..c.rank() {
                basis[c.dim].push((c.apex, j));
            }
        }
        let position: HashMap<(usize, usize), usize> = basis
            .iter()
            .flat_map(|b| b.iter().enumerate().map(|(p, &key)| (key, p)))
            .collect();
        let mut boundaries = Vec::with_capacity(top);
        for n in 1..=top {
            let mut entries = Vec::new();
            for (col, &(a, j)) in basis[n].iter().enumerate() {
                let comp = &components[a];
                let mut by_top: HashMap<usize, Vec<F::Elem>> = HashMap::new();
                for (face, x) in comp.faces.iter().zip(&comp.cycles[j]) {
                    if field.is_zero(x) {
                        continue;
                    }
                    let c = face[0];
                    let lower = &components[c];
                    let w = by_top.entry(c).or_insert_with(|| vec![field.zero(); lower.faces.len()]);
                    let pos = lower
                        .face_position(&face[1..])
                        .ok_or_else(|| Error::VerificationFailed(format!("face below {c} not found")))?;
                    w[pos] = x.clone();
                }
                let mut tops: Vec<usize> = by_top.keys().copied().collect();
                tops.sort_unstable();
                for c in tops {
                    let coords = components[c].coordinates(&by_top[&c], &field)?;
                    for (i, x) in coords.into_iter().enumerate() {
                        if !field.is_zero(&x) {
                            entries.push((position[&(c, i)], col, x));
                        }
                    }
                }
            }
            boundaries.push(SparseMatrix::from_triplets(
                &field,
                basis[n - 1].len(),
                basis[n].len(),
                entries,
            )?);
        }
        let aug = SparseMatrix::from_triplets(
            &field,
            1,
            basis[0].len(),
            (0..basis[0].len()).map(|c| (0, c, field.one())),
        )?;
        let complex = FieldComplex::new(
            field.clone(),
            basis.iter().map(Vec::len).collect(),
            boundaries,
            Some(aug),
        )?;
        Ok(Self {
            field,
            poset: poset.clone(),
            components,
            basis,
            complex,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn component(&self, apex: usize) -> &ConicComponent<F> {
        &self.components[apex]
    }

    pub fn components(&self) -> &[ConicComponent<F>] {
        &self.components
    }

    /// Basis of degree `n` as `(apex, index)` pairs.
    pub fn basis(&self, n: usize) -> &[(usize, usize)] {
        self.basis.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn complex(&self) -> &FieldComplex<F> {
        &self.complex
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.complex.dims().to_vec()
    }

    /// Augmented subcomplex spanned by the summands at apexes with `keep(apex)`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> FieldComplex<F> {
        let positions: Vec<Vec<usize>> = self
            .basis
            .iter()
            .map(|b| (0..b.len()).filter(|&p| keep(b[p].0)).collect())
            .collect();
        self.complex.restrict(&positions)
    }

    /// Position of `(apex, index)` within its degree.
    pub fn position(&self, apex: usize, index: usize) -> Option<(usize, usize)> {
        let n = self.components.get(apex)?.dim;
        self.basis(n).iter().position(|&k| k == (apex, index)).map(|p| (n, p))
    }

    /// Graded free complex with the basis vectors at `a` in degree `deg[a]`.
    pub fn homogenize(&self, deg: &[Multidegree]) -> Result<HomogenizedConic<F>> {
        let p = &self.poset;
        if deg.len() != p.len() {
            return Err(Error::Shape(format!("{} degrees for {} elements", deg.len(), p.len())));
        }
        let num_vars = deg.first().map_or(0, Multidegree::num_vars);
        if deg.iter().any(|d| d.num_vars() != num_vars) {
            return Err(Error::Shape("degrees with different numbers of variables".into()));
        }
        for &(lo, hi) in p.covers() {
            if !deg[lo].divides(&deg[hi]) {
                return Err(Error::NotAMorphism {
                    lower: p.label(lo).to_string(),
                    upper: p.label(hi).to_string(),
                    lower_deg: deg[lo].clone(),
                    upper_deg: deg[hi].clone(),
                });
            }
        }
        let mut next_id = 0;
        let mut origin = Vec::new();
        let bases: Vec<Vec<BasisLabel>> = self
            .basis
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&(a, j)| {
                        origin.push((a, j));
                        next_id += 1;
                        BasisLabel::new(next_id - 1, deg[a].clone())
                    })
                    .collect()
            })
            .collect();
        let complex = GradedFreeComplex::new(self.field.clone(), num_vars, bases, self.complex.boundaries().to_vec())?;
        Ok(HomogenizedConic { complex, origin })
    }

    /// Whether the homogenized complex is a free resolution, with the
    /// failing strands as witnesses.
    pub fn supports_resolution(&self, deg: &[Multidegree]) -> Result<ResolutionReport> {
        self.homogenize(deg)?.complex.is_resolution()
    }

    /// Rank of `Ker d_n` against `H~_n(Delta(P^n))`, for every `n`.
    pub fn check_kernels_against_skeleta(&self) -> Result<()> {
        let f = &self.field;
        for n in 0..self.basis.len() {
            let map = if n == 0 {
                self.complex.augmentation()
            } else {
                self.complex.boundary(n)
            };
            let kernel = self.basis[n].len() - map.map_or(0, |m| crate::exactla::rank(m, f));
            let skeleton = self.poset.skeleton(n);
            let h = self.poset.order_complex(&skeleton)?.reduced_homology(f);
            if kernel != h.get(n as isize) {
                return Err(Error::VerificationFailed(format!(
                    "kernel of d_{n} has rank {kernel}, H~_{n} of the {n}-skeleton has rank {}",
                    h.get(n as isize)
                )));
            }
        }
        Ok(())
    }

    /// Every basis cycle `z` at apex `a` is the boundary of the cone `a * z`.
    pub fn check_cone_boundaries(&self) -> Result<()> {
        let f = &self.field;
        for comp in &self.components {
            let mut closed = self.poset.down_set(comp.apex).to_vec();
            closed.push(comp.apex);
            let oc = self.poset.order_complex(&closed)?;
            let k = comp.dim as isize;
            for z in &comp.cycles {
                let mut cone = vec![f.zero(); oc.faces(k).len()];
                for (face, x) in comp.faces.iter().zip(z) {
                    if f.is_zero(x) {
                        continue;
                    }
                    let mut cf = Vec::with_capacity(face.len() + 1);
                    cf.push(comp.apex);
                    cf.extend_from_slice(face);
                    cone[oc.face_index(&cf).expect("cone face")] = x.clone();
                }
                let b = oc.chain_boundary(k, &cone, f);
                let mut expected = vec![f.zero(); oc.faces(k - 1).len()];
                for (face, x) in comp.faces.iter().zip(z) {
                    expected[oc.face_index(face).expect("face")] = x.clone();
                }
                if b != expected {
                    return Err(Error::VerificationFailed(format!(
                        "cone over a cycle at apex {} has the wrong boundary",
                        self.poset.label(comp.apex)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Bar reduction of the homogenization returns the conic complex.
    pub fn check_homogenize_round_trip(&self, deg: &[Multidegree]) -> Result<()> {
        let bar = self.homogenize(deg)?.complex.bar_reduce();
        let same = bar.complex.dims() == self.complex.dims()
            && bar.complex.boundaries() == self.complex.boundaries()
            && bar.complex.augmentation() == self.complex.augmentation();
        if !same {
            return Err(Error::VerificationFailed(
                "bar reduction of the homogenized complex differs".into(),
            ));
        }
        Ok(())
    }

    /// When every lower interval has vanishing reduced homology below its top
    /// degree, the conic complex computes `H~(Delta(P))`. Returns the two
    /// rank lists, indexed from degree `-1`.
    pub fn compare_with_order_complex(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let f = &self.field;
        for a in 0..self.poset.len() {
            let h = self.poset.lower_order_complex(a)?.reduced_homology(f);
            let d = self.poset.dim_element(a) as isize;
            if let Some(m) = (-1..=d - 2).find(|&m| h.get(m) != 0) {
                return Err(Error::HypothesisFailed(format!(
                    "H~_{m} of the lower interval of {} is nonzero",
                    self.poset.label(a)
                )));
            }
        }
        let mut conic = vec![self.complex.augmented_h_minus_one()];
        conic.extend(self.complex.homology_ranks());
        let all: Vec<usize> = (0..self.poset.len()).collect();
        let simplicial = self.poset.order_complex(&all)?.reduced_homology(f).betti;
        let width = conic.len().max(simplicial.len());
        let pad = |mut v: Vec<usize>| {
            v.resize(width, 0);
            v
        };
        Ok((pad(conic), pad(simplicial)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};

    fn md(v: &[u32]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    /// Face poset of a triangle: vertices 0,1,2, edges 3,4,5, face 6.
    fn triangle() -> Poset {
        Poset::with_numeric_labels(
            7,
            [(0, 3), (1, 3), (0, 4), (2, 4), (1, 5), (2, 5), (3, 6), (4, 6), (5, 6)],
        )
        .unwrap()
    }

    #[test]
    fn triangle_conic_complex_is_cellular() {
        let c = ConicComplex::new(&triangle(), Rationals).unwrap();
        assert_eq!(c.ranks(), vec![3, 3, 1]);
        c.complex().check_square_zero().unwrap();
        assert!(c.complex().is_exact());
        c.check_kernels_against_skeleta().unwrap();
        c.check_cone_boundaries().unwrap();
        let (conic, simplicial) = c.compare_with_order_complex().unwrap();
        assert_eq!(conic, simplicial);
    }

    #[test]
    fn edge_boundary_has_unit_entries() {
        let c = ConicComplex::new(&triangle(), PrimeField::new(3).unwrap()).unwrap();
        let d1 = c.complex().boundary(1).unwrap();
        for col in d1.columns() {
            assert_eq!(col.len(), 2);
        }
    }

    #[test]
    fn homogenized_triangle_resolves_its_ideal() {
        // degrees of the Taylor complex of (xy, xz, yz)
        let deg = vec![
            md(&[1, 1, 0]),
            md(&[1, 0, 1]),
            md(&[0, 1, 1]),
            md(&[1, 1, 1]),
            md(&[1, 1, 1]),
            md(&[1, 1, 1]),
            md(&[1, 1, 1]),
        ];
        let c = ConicComplex::new(&triangle(), Rationals).unwrap();
        let report = c.supports_resolution(&deg).unwrap();
        assert!(report.is_resolution);
        c.check_homogenize_round_trip(&deg).unwrap();
        let h = c.homogenize(&deg).unwrap();
        assert_eq!(h.origin[6], (6, 0));
    }

    #[test]
    fn order_reversing_degrees_are_rejected() {
        let p = Poset::with_numeric_labels(2, [(0, 1)]).unwrap();
        let c = ConicComplex::new(&p, Rationals).unwrap();
        assert!(matches!(
            c.homogenize(&[md(&[1]), md(&[0])]),
            Err(Error::NotAMorphism { .. })
        ));
    }

    #[test]
    fn path_below_top_breaks_the_hypothesis() {
        // top above a disconnected lower interval of dimension 0 ... 1
        let p = Poset::with_numeric_labels(5, [(0, 2), (1, 2), (3, 4)]).unwrap();
        let c = ConicComplex::new(&p, Rationals).unwrap();
        c.check_kernels_against_skeleta().unwrap();
        let p = Poset::with_numeric_labels(4, [(0, 2), (1, 3), (2, 3)]).unwrap();
        let c = ConicComplex::new(&p, Rationals).unwrap();
        assert!(matches!(
            c.compare_with_order_complex(),
            Err(Error::HypothesisFailed(_))
        ));
    }
}

//! Cavity filling: adding relations below an element until its lower
//! interval becomes a homology sphere, without changing the conic complex;
//! the resulting hcw-poset supports the minimal resolution.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conic::ConicComplex;
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rref_basis, solve, Echelon, Field};
use crate::gradedcomplex::{minimize, taylor_complex, GradedFreeComplex};
use crate::incidence::{incidence_poset, IncidencePoset};
use crate::minsupport::{make_minimal_support_basis, BasisChangeLog};
use crate::monomials::{LcmLattice, MonomialIdeal, Multidegree};
use crate::posets::{OrderComplex, Poset, PosetJson};

/// Chain of an order complex as a map from faces to nonzero coefficients.
pub type Chain<E> = BTreeMap<Vec<usize>, E>;

fn add_to<F: Field>(chain: &mut Chain<F::Elem>, face: Vec<usize>, x: &F::Elem, field: &F) {
    let entry = chain.entry(face).or_insert_with(|| field.zero());
    *entry = field.add(entry, x);
    if field.is_zero(entry) {
        chain.retain(|_, v| !field.is_zero(v));
    }
}

fn to_dense<F: Field>(
    chain: &Chain<F::Elem>,
    faces: &[Vec<usize>],
    oc: &OrderComplex,
    field: &F,
) -> Result<Vec<F::Elem>> {
    let mut v = vec![field.zero(); faces.len()];
    for (face, x) in chain {
        let i = oc
            .face_index(face)
            .ok_or_else(|| Error::Shape(format!("{face:?} is not a face of the lower interval")))?;
        v[i] = x.clone();
    }
    Ok(v)
}

fn degrees_of(poset: &Poset) -> Result<&[Multidegree]> {
    poset
        .degrees()
        .ok_or_else(|| Error::Shape("poset elements carry no multidegrees".into()))
}

fn check_monotone(poset: &Poset) -> Result<()> {
    let deg = degrees_of(poset)?;
    for &(lo, hi) in poset.covers() {
        if !deg[lo].divides(&deg[hi]) {
            return Err(Error::NotAMorphism {
                lower: poset.label(lo).to_string(),
                upper: poset.label(hi).to_string(),
                lower_deg: deg[lo].clone(),
                upper_deg: deg[hi].clone(),
            });
        }
    }
    Ok(())
}

/// Rewrites an `m`-cycle `w` of `Delta(P_{<a})` into a homologous cycle
/// `sum_c [c, z_c]` whose top vertices all have dimension `m`, replacing
/// `[c, w_c]` by a filling `v` with `d v = w_c` for top vertices of larger
/// dimension.
pub fn antichain_form<F: Field>(
    poset: &Poset,
    a: usize,
    w: &Chain<F::Elem>,
    m: usize,
    field: &F,
) -> Result<Chain<F::Elem>> {
    let mut w: Chain<F::Elem> = w
        .iter()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(f, x)| (f.clone(), x.clone()))
        .collect();
    for face in w.keys() {
        if face.len() != m + 1 || !face.iter().all(|&v| poset.lt(v, a)) {
            return Err(Error::Shape(format!(
                "{face:?} is not an {m}-face below {}",
                poset.label(a)
            )));
        }
    }
    loop {
        let Some(k) = w.keys().map(|f| poset.dim_element(f[0])).max() else {
            return Ok(w);
        };
        if k <= m {
            return Ok(w);
        }
        let mut tops: Vec<usize> = w.keys().map(|f| f[0]).filter(|&c| poset.dim_element(c) == k).collect();
        tops.dedup();
        for c in tops {
            let w_c: Chain<F::Elem> = w
                .iter()
                .filter(|(f, _)| f[0] == c)
                .map(|(f, x)| (f[1..].to_vec(), x.clone()))
                .collect();
            let oc = poset.lower_order_complex(c)?;
            let m_isize = m as isize;
            let target = to_dense(&w_c, oc.faces(m_isize - 1), &oc, field)?;
            let v = solve(&oc.boundary(m_isize, field), &target, field)?.ok_or_else(|| {
                Error::HypothesisFailed(format!(
                    "the lower interval of {} is not a homology sphere: a {}-cycle is not a boundary",
                    poset.label(c),
                    m_isize - 1
                ))
            })?;
            for (face, x) in &w_c {
                let mut f = Vec::with_capacity(face.len() + 1);
                f.push(c);
                f.extend_from_slice(face);
                add_to(&mut w, f, &field.neg(x), field);
            }
            for (face, x) in oc.faces(m_isize).iter().zip(&v) {
                if !field.is_zero(x) {
                    add_to(&mut w, face.clone(), x, field);
                }
            }
        }
    }
}

/// Rank of `H~_n(Delta(P_{<a}))` and the first cycle of the echelon cycle
/// basis that is not a boundary.
fn first_class<F: Field>(oc: &OrderComplex, n: usize, field: &F) -> (usize, Option<Vec<F::Elem>>) {
    let k = n as isize;
    let nfaces = oc.faces(k).len();
    let cycles = rref_basis(&kernel_basis(&oc.boundary(k, field), field), nfaces, field);
    let mut ech = Echelon::new(field.clone(), nfaces);
    for col in oc.boundary(k + 1, field).columns() {
        ech.insert_sparse(col);
    }
    let r = cycles.len() - ech.rank();
    let h = cycles.into_iter().find(|z| !ech.contains_dense(z));
    (r, h)
}

/// One pass of the inner loop of [`fill_cavity`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillIteration {
    pub rank_before: usize,
    /// Top vertices of the antichain-form representative.
    pub antichain: Vec<String>,
    /// Apexes of the filling chain.
    pub filling: Vec<String>,
    /// Elements placed below the apex.
    pub added: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillOutcome {
    pub poset: Poset,
    pub added: Vec<(usize, usize)>,
    pub iterations: Vec<FillIteration>,
}

/// Kills `H~_n(Delta(P_{<a}))` by adding relations `c < a`, checking the
/// hypotheses first and every conclusion afterwards.
pub fn fill_cavity<F: Field>(poset: &Poset, a: usize, n: usize, field: &F) -> Result<FillOutcome> {
    check_monotone(poset)?;
    if a >= poset.len() {
        return Err(Error::NotFound(format!("element {a}")));
    }
    if poset.dim_element(a) < n + 2 {
        return Err(Error::HypothesisFailed(format!(
            "d({}) = {} is less than n + 2 = {}",
            poset.label(a),
            poset.dim_element(a),
            n + 2
        )));
    }
    for b in 0..poset.len() {
        if poset.dim_element(b) < poset.dim_element(a) && !poset.is_homology_sphere_at(b, field)? {
            return Err(Error::HypothesisFailed(format!(
                "lower interval of {} is not a homology sphere",
                poset.label(b)
            )));
        }
    }
    let conic = ConicComplex::new(poset, field.clone())?;
    let deg = degrees_of(poset)?;
    let alpha = &deg[a];
    let h = conic.restricted(|c| deg[c].divides(alpha)).homology_ranks();
    if h.get(n).copied().unwrap_or(0) != 0 {
        return Err(Error::HypothesisFailed(format!(
            "conic complex of the elements of degree at most {alpha} has homology in degree {n}"
        )));
    }
    let outcome = fill_cavity_unchecked(poset, a, n, field, &conic)?;
    verify_fill(poset, &outcome.poset, a, n, field)?;
    Ok(outcome)
}

fn fill_cavity_unchecked<F: Field>(
    poset: &Poset,
    a: usize,
    n: usize,
    field: &F,
    conic: &ConicComplex<F>,
) -> Result<FillOutcome> {
    let deg = degrees_of(poset)?.to_vec();
    let alpha = deg[a].clone();
    let mut current = poset.clone();
    let mut added = Vec::new();
    let mut iterations = Vec::new();
    let bd = conic
        .complex()
        .boundary(n + 1)
        .ok_or_else(|| Error::HypothesisFailed(format!("conic complex has no degree {}", n + 1)))?;
    let upper = conic.basis(n + 1);
    loop {
        let oc = current.lower_order_complex(a)?;
        let (r, h) = first_class(&oc, n, field);
        let Some(h) = h else {
            break;
        };
        let h_chain: Chain<F::Elem> = oc
            .faces(n as isize)
            .iter()
            .zip(h)
            .filter(|(_, x)| !field.is_zero(x))
            .map(|(f, x)| (f.clone(), x))
            .collect();
        let z = antichain_form(&current, a, &h_chain, n, field)?;

        let mut z_vec = vec![field.zero(); conic.basis(n).len()];
        let mut by_top: BTreeMap<usize, Chain<F::Elem>> = BTreeMap::new();
        for (f, x) in &z {
            by_top.entry(f[0]).or_default().insert(f[1..].to_vec(), x.clone());
        }
        for (&c, w_c) in &by_top {
            let comp = conic.component(c);
            let mut dense = vec![field.zero(); comp.faces.len()];
            for (f, x) in w_c {
                let i = comp
                    .face_position(f)
                    .ok_or_else(|| Error::VerificationFailed(format!("face {f:?} below {c} is missing")))?;
                dense[i] = x.clone();
            }
            for (i, x) in comp.coordinates(&dense, field)?.into_iter().enumerate() {
                let (_, p) = conic.position(c, i).expect("basis position");
                z_vec[p] = x;
            }
        }

        let inside = |c: usize| current.lt(c, a);
        let solve_with = |allowed: &dyn Fn(usize) -> bool| -> Result<Option<Vec<usize>>> {
            let cols: Vec<usize> = (0..upper.len())
                .filter(|&p| {
                    let c = upper[p].0;
                    deg[c].divides(&alpha) && (inside(c) || allowed(c))
                })
                .collect();
            Ok(solve(&bd.select_columns(&cols), &z_vec, field)?.map(|t| {
                let mut apexes: Vec<usize> = cols
                    .iter()
                    .zip(&t)
                    .filter(|(_, x)| !field.is_zero(x))
                    .map(|(&p, _)| upper[p].0)
                    .collect();
                apexes.dedup();
                apexes
            }))
        };
        let mut filling = solve_with(&|_| true)?.ok_or_else(|| {
            Error::HypothesisFailed(format!(
                "cycle below {} is not a boundary in the conic complex of degree at most {alpha}",
                current.label(a)
            ))
        })?;
        let mut outside: Vec<usize> = filling.iter().copied().filter(|&c| !inside(c)).collect();
        'shrink: loop {
            for &c in &outside {
                let keep: Vec<usize> = outside.iter().copied().filter(|&x| x != c).collect();
                if let Some(t) = solve_with(&|x| keep.contains(&x))? {
                    filling = t;
                    outside = filling.iter().copied().filter(|&x| !inside(x)).collect();
                    continue 'shrink;
                }
            }
            break;
        }
        if outside.is_empty() {
            return Err(Error::VerificationFailed(format!(
                "nonzero class below {} bounds inside its lower interval",
                current.label(a)
            )));
        }
        let new: Vec<(usize, usize)> = outside.iter().map(|&c| (c, a)).collect();
        let next = current.add_relations(&new)?;
        let (r_next, _) = first_class(&next.lower_order_complex(a)?, n, field);
        if r_next >= r {
            return Err(Error::VerificationFailed(format!(
                "adding relations below {} did not lower H~_{n}",
                current.label(a)
            )));
        }
        let name = |v: &[usize]| v.iter().map(|&c| current.label(c).to_string()).collect::<Vec<_>>();
        iterations.push(FillIteration {
            rank_before: r,
            antichain: name(&by_top.keys().copied().collect::<Vec<_>>()),
            filling: name(&filling),
            added: name(&outside),
        });
        added.extend(new);
        current = next;
    }
    Ok(FillOutcome {
        poset: current,
        added,
        iterations,
    })
}

/// Recomputes the six conclusions of a cavity filling at `(a, n)`.
pub fn verify_fill<F: Field>(before: &Poset, after: &Poset, a: usize, n: usize, field: &F) -> Result<()> {
    let fail = |what: String| Err(Error::VerificationFailed(what));
    let len = before.len();
    if after.len() != len {
        return fail("element sets differ".into());
    }
    for x in 0..len {
        for y in 0..len {
            if before.lt(x, y) && !after.lt(x, y) {
                return fail(format!("relation {} < {} was lost", before.label(x), before.label(y)));
            }
        }
    }
    check_monotone(after)?;
    for c in 0..len {
        if !before.leq(a, c) && before.down_set(c) != after.down_set(c) {
            return fail(format!("lower interval of {} changed", before.label(c)));
        }
        if before.dim_element(c) != after.dim_element(c) {
            return fail(format!("dimension of {} changed", before.label(c)));
        }
    }
    compare_conic(
        &ConicComplex::new(before, field.clone())?,
        &ConicComplex::new(after, field.clone())?,
    )?;
    let hb = before.lower_order_complex(a)?.reduced_homology(field);
    let ha = after.lower_order_complex(a)?.reduced_homology(field);
    let top = hb.betti.len().max(ha.betti.len()) as isize;
    for k in (n as isize + 1)..top {
        if hb.get(k) != ha.get(k) {
            return fail(format!("H~_{k} below {} changed", before.label(a)));
        }
    }
    if ha.get(n as isize) != 0 {
        return fail(format!("H~_{n} below {} is still nonzero", before.label(a)));
    }
    Ok(())
}

/// Summands have equal dimension, the old cycle spaces span the new ones,
/// and the augmented complexes agree entry by entry.
pub fn compare_conic<F: Field>(old: &ConicComplex<F>, new: &ConicComplex<F>) -> Result<()> {
    let field = old.field();
    for (o, n) in old.components().iter().zip(new.components()) {
        let label = old.poset().label(o.apex);
        if o.rank() != n.rank() {
            return Err(Error::VerificationFailed(format!(
                "conic summand at {label} changed dimension from {} to {}",
                o.rank(),
                n.rank()
            )));
        }
        for (old_row, new_row) in o.cycles.iter().zip(&n.cycles) {
            let mut restricted = vec![field.zero(); o.faces.len()];
            for (face, x) in n.faces.iter().zip(new_row) {
                if field.is_zero(x) {
                    continue;
                }
                match o.face_position(face) {
                    Some(i) => restricted[i] = x.clone(),
                    None => return Err(Error::VerificationFailed(format!("a cycle at {label} uses a new face"))),
                }
            }
            if &restricted != old_row {
                return Err(Error::VerificationFailed(format!("cycle space at {label} changed")));
            }
        }
    }
    let (a, b) = (old.complex(), new.complex());
    if a.dims() != b.dims() || a.boundaries() != b.boundaries() || a.augmentation() != b.augmentation() {
        return Err(Error::VerificationFailed("conic differentials differ".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedRelation {
    pub lower: String,
    pub upper: String,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcwReport {
    pub input: PosetJson,
    pub output: PosetJson,
    pub added: Vec<AddedRelation>,
    pub spheres_before: Vec<bool>,
    pub spheres_after: Vec<bool>,
    pub iterations: Vec<FillIteration>,
}

/// Checks the hypotheses of [`hcwify`]: monotone degrees, a one-dimensional
/// top homology below every element, and exact conic complexes on every
/// nonempty `P_{deg <= alpha}`.
pub fn check_hcwify_hypotheses<F: Field>(poset: &Poset, field: &F) -> Result<ConicComplex<F>> {
    check_monotone(poset)?;
    for a in 0..poset.len() {
        let d = poset.dim_element(a) as isize;
        let h = poset.lower_order_complex(a)?.reduced_homology(field);
        if h.get(d - 1) != 1 {
            return Err(Error::HypothesisFailed(format!(
                "H~_{} below {} has rank {}, not 1",
                d - 1,
                poset.label(a),
                h.get(d - 1)
            )));
        }
    }
    let conic = ConicComplex::new(poset, field.clone())?;
    let deg = degrees_of(poset)?;
    let lattice: Vec<Multidegree> = LcmLattice::join_closure(deg.iter().cloned())
        .degrees()
        .cloned()
        .collect();
    let bad = lattice
        .par_iter()
        .find_first(|alpha| !conic.restricted(|c| deg[c].divides(alpha)).is_exact());
    if let Some(alpha) = bad {
        return Err(Error::HypothesisFailed(format!(
            "conic complex of the elements of degree at most {alpha} is not exact"
        )));
    }
    Ok(conic)
}

fn sphere_flags<F: Field>(poset: &Poset, field: &F) -> Result<Vec<bool>> {
    (0..poset.len())
        .into_par_iter()
        .map(|a| poset.is_homology_sphere_at(a, field))
        .collect()
}

/// Makes every lower interval a homology sphere, processing elements by
/// increasing dimension and each at levels `d(a) - 2, ..., 0`.
pub fn hcwify<F: Field>(poset: &Poset, field: &F) -> Result<(Poset, HcwReport)> {
    let original = check_hcwify_hypotheses(poset, field)?;
    let mut conic = original.clone();
    let spheres_before = sphere_flags(poset, field)?;
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.sort_by_key(|&a| (poset.dim_element(a), a));
    let mut current = poset.clone();
    let mut added = Vec::new();
    let mut iterations = Vec::new();
    for a in order {
        let d = current.dim_element(a);
        for n in (0..d.saturating_sub(1)).rev() {
            let outcome = fill_cavity_unchecked(&current, a, n, field, &conic)?;
            if outcome.added.is_empty() {
                continue;
            }
            verify_fill(&current, &outcome.poset, a, n, field)?;
            for &(lo, hi) in &outcome.added {
                added.push(AddedRelation {
                    lower: current.label(lo).to_string(),
                    upper: current.label(hi).to_string(),
                    level: n,
                });
            }
            iterations.extend(outcome.iterations);
            current = outcome.poset;
            conic = ConicComplex::new(&current, field.clone())?;
        }
    }
    let spheres_after = sphere_flags(&current, field)?;
    if let Some(a) = spheres_after.iter().position(|s| !s) {
        return Err(Error::VerificationFailed(format!(
            "lower interval of {} is not a homology sphere after filling",
            current.label(a)
        )));
    }
    if (0..poset.len()).any(|a| poset.dim_element(a) != current.dim_element(a)) {
        return Err(Error::VerificationFailed("dimensions changed".into()));
    }
    compare_conic(&original, &conic)?;
    check_monotone(&current)?;
    let report = HcwReport {
        input: poset.to_json(),
        output: current.to_json(),
        added,
        spheres_before,
        spheres_after,
        iterations,
    };
    Ok((current, report))
}

/// Output of the end-to-end pipeline.
#[derive(Debug, Clone)]
pub struct HcwSupport<F: Field> {
    pub minimal: GradedFreeComplex<F>,
    pub basis: GradedFreeComplex<F>,
    pub basis_log: BasisChangeLog,
    pub incidence: IncidencePoset,
    pub poset: Poset,
    pub report: HcwReport,
    /// Homogenized conic complex of the hcw-poset.
    pub resolution: GradedFreeComplex<F>,
}

/// Taylor complex, minimization, minimal-support basis, incidence poset and
/// cavity filling, followed by verification that the hcw-poset supports a
/// resolution with the minimal Betti numbers.
pub fn hcw_support<F: Field>(ideal: &MonomialIdeal, field: &F) -> Result<HcwSupport<F>> {
    let minimal = minimize(&taylor_complex(ideal, field.clone())?)?;
    let (basis, basis_log) = make_minimal_support_basis(&minimal)?;
    let incidence = incidence_poset(&basis)?;
    let (poset, report) = hcwify(&incidence.poset, field)?;
    let conic = ConicComplex::new(&poset, field.clone())?;
    let resolution = conic.homogenize(degrees_of(&poset)?)?.complex;
    let check = resolution.is_resolution()?;
    if !check.is_resolution {
        return Err(Error::VerificationFailed(format!(
            "hcw-poset does not support a resolution: strand {} fails",
            check
                .failures
                .first()
                .map_or_else(|| "of degree 0".to_string(), |f| f.degree.to_string())
        )));
    }
    if resolution.betti_table()? != minimal.betti_table()? {
        return Err(Error::VerificationFailed(
            "Betti table of the supported resolution differs".into(),
        ));
    }
    if resolution.resolved_ideal()? != *ideal {
        return Err(Error::VerificationFailed(
            "supported resolution resolves a different ideal".into(),
        ));
    }
    Ok(HcwSupport {
        minimal,
        basis,
        basis_log,
        incidence,
        poset,
        report,
        resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{PrimeField, Rationals};

    fn md(v: &[u32]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn antichain_form_replaces_higher_top_vertex() {
        // 0,1 vertices; 2 an edge over both; 3 a vertex; 4 above everything
        let p = Poset::with_numeric_labels(5, [(0, 2), (1, 2), (2, 4), (3, 4)]).unwrap();
        let q = Rationals;
        let mut w: Chain<_> = BTreeMap::new();
        w.insert(vec![2], q.one());
        w.insert(vec![3], q.neg(&q.one()));
        let z = antichain_form(&p, 4, &w, 0, &q).unwrap();
        assert!(z.keys().all(|f| p.dim_element(f[0]) == 0));
        // homologous: difference is a boundary in the lower interval of 4
        let oc = p.lower_order_complex(4).unwrap();
        let mut diff = w.clone();
        for (f, x) in &z {
            add_to(&mut diff, f.clone(), &q.neg(x), &q);
        }
        let target = to_dense(&diff, oc.faces(0), &oc, &q).unwrap();
        assert!(solve(&oc.boundary(1, &q), &target, &q).unwrap().is_some());
        let again = antichain_form(&p, 4, &z, 0, &q).unwrap();
        assert_eq!(again, z);
    }

    /// Two vertices and one edge between them, plus a 2-cell attached
    /// only to the edge and one vertex ... filled by a relation.
    fn disconnected_top() -> Poset {
        // vertices 0,1,2; edges 3={0,1}, 4={1,2}, 5={0,2}; top 6 over 3,4 only
        // and 2 ... the edge 5 is missing below 6, so P_{<6} is a path
        Poset::with_numeric_labels(7, [(0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5), (3, 6), (4, 6)])
            .unwrap()
            .with_degrees(vec![
                md(&[1, 1, 0]),
                md(&[1, 0, 1]),
                md(&[0, 1, 1]),
                md(&[1, 1, 1]),
                md(&[1, 1, 1]),
                md(&[1, 1, 1]),
                md(&[1, 1, 1]),
            ])
            .unwrap()
    }

    #[test]
    fn cavity_at_level_one_of_a_path() {
        let p = disconnected_top();
        // the path has trivial H~_0; nothing to fill at n = 0
        let out = fill_cavity(&p, 6, 0, &Rationals).unwrap();
        assert!(out.added.is_empty());
        assert_eq!(out.poset, p);
    }

    #[test]
    fn koszul_poset_is_unchanged() {
        let p = Poset::with_numeric_labels(3, [(0, 2), (1, 2)])
            .unwrap()
            .with_degrees(vec![md(&[1, 0]), md(&[0, 1]), md(&[1, 1])])
            .unwrap();
        let (q, report) = hcwify(&p, &Rationals).unwrap();
        assert_eq!(q, p);
        assert!(report.added.is_empty());
    }

    #[test]
    fn pipeline_on_small_ideals() {
        for gens in [
            vec![md(&[1, 0]), md(&[0, 1])],
            vec![md(&[1, 1, 0]), md(&[1, 0, 1]), md(&[0, 1, 1])],
            vec![md(&[2, 1, 0]), md(&[0, 2, 1]), md(&[1, 0, 2]), md(&[1, 1, 1])],
        ] {
            let i = MonomialIdeal::minimalize(gens).unwrap();
            let s = hcw_support(&i, &Rationals).unwrap();
            assert!(s.poset.is_hcw(&Rationals).unwrap());
            let s2 = hcw_support(&i, &PrimeField::new(2).unwrap()).unwrap();
            assert!(s2.poset.is_hcw(&PrimeField::new(2).unwrap()).unwrap());
            let (again, r) = hcwify(&s.poset, &Rationals).unwrap();
            assert_eq!(again, s.poset);
            assert!(r.added.is_empty());
        }
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::{Field, SparseMatrix};
use crate::monomials::{lcm_all, MonomialIdeal};

use super::{BasisLabel, GradedFreeComplex};

/// Largest generator count accepted by [`taylor_complex`] (2^16 subsets).
pub const TAYLOR_GENERATOR_CAP: usize = 16;

/// Taylor resolution: one basis element per nonempty generator subset,
/// labeled by the lcm of the subset, with
/// `d e_S = sum_j (-1)^j x^(m_S - m_{S \ s_j}) e_{S \ s_j}`
/// where `j` is the position of `s_j` in the sorted subset.
///
/// Ids are assigned consecutively, by subset size and then lexicographically.
pub fn taylor_complex<F: Field>(ideal: &MonomialIdeal, field: F) -> Result<GradedFreeComplex<F>> {
    let r = ideal.len();
    if r > TAYLOR_GENERATOR_CAP {
        return Err(Error::TooLarge(format!(
            "Taylor complex of {r} generators exceeds the cap of {TAYLOR_GENERATOR_CAP}"
        )));
    }
    let gens = ideal.generators();
    let mut subsets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); r];
    for size in 1..=r {
        subsets[size - 1] = combinations(r, size);
    }
    let mut next_id = 0;
    let mut bases = Vec::with_capacity(r);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(r);
    for level in &subsets {
        let mut labels = Vec::with_capacity(level.len());
        let mut idx = HashMap::with_capacity(level.len());
        for (pos, s) in level.iter().enumerate() {
            let degree = lcm_all(s.iter().map(|&g| &gens[g])).expect("nonempty subset");
            labels.push(BasisLabel::new(next_id, degree));
            idx.insert(s.clone(), pos);
            next_id += 1;
        }
        bases.push(labels);
        index.push(idx);
    }
    let mut diffs = Vec::with_capacity(r.saturating_sub(1));
    for n in 1..r {
        let mut entries = Vec::new();
        for (col, s) in subsets[n].iter().enumerate() {
            for j in 0..s.len() {
                let mut face = s.clone();
                face.remove(j);
                let row = index[n - 1][&face];
                let sign = if j % 2 == 0 {
                    field.one()
                } else {
                    field.neg(&field.one())
                };
                entries.push((row, col, sign));
            }
        }
        diffs.push(SparseMatrix::from_triplets(
            &field,
            subsets[n - 1].len(),
            subsets[n].len(),
            entries,
        )?);
    }
    GradedFreeComplex::new(field, ideal.num_vars(), bases, diffs)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

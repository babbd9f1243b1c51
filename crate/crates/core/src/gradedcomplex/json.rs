use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Field, SparseMatrix};
use crate::monomials::Multidegree;

use super::{BasisLabel, GradedFreeComplex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisLabelJson {
    pub id: usize,
    pub degree: Multidegree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub row_id: usize,
    pub col_id: usize,
    pub scalar: serde_json::Value,
    pub exponent: Multidegree,
}

/// Serialized form of a graded free complex. `matrices[k]` is the
/// differential out of homological degree `k + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub num_vars: usize,
    pub characteristic: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub degrees: Vec<Vec<BasisLabelJson>>,
    pub matrices: Vec<Vec<EntryJson>>,
}

impl<F: Field> GradedFreeComplex<F> {
    pub fn to_json(&self) -> ComplexJson {
        let degrees = self
            .bases()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|l| BasisLabelJson {
                        id: l.id,
                        degree: l.degree.clone(),
                    })
                    .collect()
            })
            .collect();
        let matrices = self
            .differentials()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let n = i + 1;
                let mut entries: Vec<EntryJson> = d
                    .triplets()
                    .map(|(r, c, v)| EntryJson {
                        row_id: self.basis(n - 1)[r].id,
                        col_id: self.basis(n)[c].id,
                        scalar: self.field().to_json(v),
                        exponent: self.entry_exponent(n, r, c),
                    })
                    .collect();
                entries.sort_by_key(|e| (e.col_id, e.row_id));
                entries
            })
            .collect();
        ComplexJson {
            num_vars: self.num_vars(),
            characteristic: self.field().characteristic(),
            variables: None,
            degrees,
            matrices,
        }
    }

    /// Reads a complex, checking that every stored exponent equals the
    /// difference of the column and row degrees.
    pub fn from_json(field: F, json: &ComplexJson) -> Result<Self> {
        if json.matrices.len() + 1 != json.degrees.len().max(1) {
            return Err(Error::Shape(format!(
                "{} matrices for {} homological degrees",
                json.matrices.len(),
                json.degrees.len()
            )));
        }
        let bases: Vec<Vec<BasisLabel>> = json
            .degrees
            .iter()
            .map(|b| b.iter().map(|l| BasisLabel::new(l.id, l.degree.clone())).collect())
            .collect();
        let positions: Vec<HashMap<usize, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(p, l)| (l.id, p)).collect())
            .collect();
        let mut diffs = Vec::with_capacity(json.matrices.len());
        for (i, entries) in json.matrices.iter().enumerate() {
            let n = i + 1;
            let mut triplets = Vec::with_capacity(entries.len());
            for e in entries {
                let r = *positions[n - 1]
                    .get(&e.row_id)
                    .ok_or_else(|| Error::NotFound(format!("row id {} in degree {}", e.row_id, n - 1)))?;
                let c = *positions[n]
                    .get(&e.col_id)
                    .ok_or_else(|| Error::NotFound(format!("column id {} in degree {n}", e.col_id)))?;
                let v = field
                    .from_json(&e.scalar)
                    .ok_or_else(|| Error::Parse(format!("bad scalar {}", e.scalar)))?;
                if field.is_zero(&v) {
                    continue;
                }
                let expected = bases[n - 1][r].degree.quotient_exponent(&bases[n][c].degree);
                if expected.as_ref() != Some(&e.exponent) {
                    return Err(Error::NotHomogeneous(format!(
                        "entry ({}, {}) has exponent {} but the labels require {}",
                        e.row_id,
                        e.col_id,
                        e.exponent,
                        expected.map_or_else(|| "a negative exponent".to_string(), |d| d.to_string())
                    )));
                }
                triplets.push((r, c, v));
            }
            diffs.push(SparseMatrix::from_triplets(
                &field,
                bases[n - 1].len(),
                bases[n].len(),
                triplets,
            )?);
        }
        GradedFreeComplex::new(field, json.num_vars, bases, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::gradedcomplex::taylor_complex;
    use crate::monomials::MonomialIdeal;

    #[test]
    fn json_round_trip() {
        let i = MonomialIdeal::minimalize([
            Multidegree(vec![1, 1, 0]),
            Multidegree(vec![1, 0, 1]),
            Multidegree(vec![0, 1, 1]),
        ])
        .unwrap();
        let c = taylor_complex(&i, Rationals).unwrap();
        let json = c.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back: ComplexJson = serde_json::from_str(&text).unwrap();
        assert_eq!(GradedFreeComplex::from_json(Rationals, &back).unwrap(), c);
    }

    #[test]
    fn wrong_exponent_is_rejected() {
        let i = MonomialIdeal::minimalize([Multidegree(vec![1, 0]), Multidegree(vec![0, 1])]).unwrap();
        let mut json = taylor_complex(&i, Rationals).unwrap().to_json();
        json.matrices[0][0].exponent = Multidegree(vec![1, 1]);
        assert!(matches!(
            GradedFreeComplex::from_json(Rationals, &json),
            Err(Error::NotHomogeneous(_))
        ));
    }
}

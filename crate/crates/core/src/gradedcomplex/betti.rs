use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::monomials::Multidegree;

/// Multigraded Betti numbers: `(homological degree, multidegree) -> rank`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, Multidegree), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntryJson {
    pub i: usize,
    pub deg: Multidegree,
    pub beta: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTableJson {
    pub entries: Vec<BettiEntryJson>,
}

impl BettiTable {
    /// Zero ranks are dropped.
    pub fn from_entries(entries: BTreeMap<(usize, Multidegree), usize>) -> Self {
        Self {
            entries: entries.into_iter().filter(|(_, b)| *b > 0).collect(),
        }
    }

    pub fn get(&self, i: usize, deg: &Multidegree) -> usize {
        self.entries.get(&(i, deg.clone())).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Multidegree, usize)> {
        self.entries.iter().map(|((i, d), b)| (*i, d, *b))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total Betti numbers per homological degree, up to the last nonzero one.
    pub fn totals(&self) -> Vec<usize> {
        let mut totals = Vec::new();
        for ((i, _), b) in &self.entries {
            if totals.len() <= *i {
                totals.resize(i + 1, 0);
            }
            totals[*i] += b;
        }
        totals
    }

    /// Multidegrees carrying some nonzero Betti number.
    pub fn support(&self) -> Vec<Multidegree> {
        let mut degs: Vec<Multidegree> = self.entries.keys().map(|(_, d)| d.clone()).collect();
        degs.sort();
        degs.dedup();
        degs
    }

    pub fn to_json(&self) -> BettiTableJson {
        BettiTableJson {
            entries: self
                .entries
                .iter()
                .map(|((i, d), b)| BettiEntryJson {
                    i: *i,
                    deg: d.clone(),
                    beta: *b,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &BettiTableJson) -> Self {
        let mut entries = BTreeMap::new();
        for e in &json.entries {
            *entries.entry((e.i, e.deg.clone())).or_default() += e.beta;
        }
        Self::from_entries(entries)
    }
}

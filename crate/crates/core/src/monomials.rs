//! Monomials as exponent vectors, monomial ideals and their lcm lattices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial; ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(num_vars: usize) -> Self {
        Self(vec![0; num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Coordinate-wise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Coordinate-wise strict order: `self <= other` and `self != other`.
    pub fn strictly_divides(&self, other: &Self) -> bool {
        self != other && self.divides(other)
    }

    /// `other - self`, defined when `self` divides `other`.
    pub fn quotient_exponent(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        Some(Self(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Self) -> Result<Self> {
        if self.0.len() != other.0.len() {
            return Err(Error::Shape(format!(
                "multidegrees of lengths {} and {}",
                self.0.len(),
                other.0.len()
            )));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect()))
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// Renders as a product of named variables, `1` for the zero vector.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        MonomialDisplay { deg: self, names }
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

struct MonomialDisplay<'a> {
    deg: &'a Multidegree,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.deg.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let fallback = format!("x{}", i + 1);
            let name = self.names.get(i).map_or(fallback.as_str(), String::as_str);
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Coordinate-wise maximum of a nonempty collection.
pub fn lcm_all<'a>(degrees: impl IntoIterator<Item = &'a Multidegree>) -> Option<Multidegree> {
    let mut it = degrees.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, d| acc.lcm(d).expect("uniform length")))
}

/// Monomial ideal given by its minimal generators, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    num_vars: usize,
    generators: Vec<Multidegree>,
}

impl MonomialIdeal {
    /// Keeps the divisibility-minimal elements of `generators`.
    pub fn minimalize(generators: impl IntoIterator<Item = Multidegree>) -> Result<Self> {
        let all: BTreeSet<Multidegree> = generators.into_iter().collect();
        let num_vars = all.first().ok_or(Error::EmptyIdeal)?.num_vars();
        if let Some(bad) = all.iter().find(|g| g.num_vars() != num_vars) {
            return Err(Error::Shape(format!(
                "generator {bad} has {} exponents, expected {num_vars}",
                bad.num_vars()
            )));
        }
        let generators: Vec<Multidegree> = all
            .iter()
            .filter(|g| !all.iter().any(|h| h.strictly_divides(g)))
            .cloned()
            .collect();
        Ok(Self { num_vars, generators })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Multidegree] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership of `x^deg`.
    pub fn contains(&self, deg: &Multidegree) -> bool {
        self.generators.iter().any(|g| g.divides(deg))
    }

    /// All joins of nonempty generator subsets.
    pub fn lcm_lattice(&self) -> LcmLattice {
        LcmLattice::join_closure(self.generators.iter().cloned())
    }
}

/// Join-closed set of multidegrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmLattice {
    degrees: BTreeSet<Multidegree>,
}

impl LcmLattice {
    /// Closes `seeds` under pairwise joins. Growing the closure one seed at a
    /// time visits each element once per seed instead of every subset.
    pub fn join_closure(seeds: impl IntoIterator<Item = Multidegree>) -> Self {
        let mut degrees: BTreeSet<Multidegree> = BTreeSet::new();
        for s in seeds {
            let mut added: Vec<Multidegree> = degrees.iter().map(|d| d.lcm(&s).expect("uniform length")).collect();
            added.push(s);
            degrees.extend(added);
        }
        Self { degrees }
    }

    pub fn degrees(&self) -> impl Iterator<Item = &Multidegree> {
        self.degrees.iter()
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn contains(&self, d: &Multidegree) -> bool {
        self.degrees.contains(d)
    }
}

//! Finite posets, order complexes and reduced homology, homology CW-poset
//! tests, isomorphism, and JSON/DOT export.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{rank, Field, SparseMatrix};
use crate::monomials::Multidegree;

/// Largest number of faces built for one order complex.
pub const FACE_CAP: usize = 2_000_000;

/// Finite poset on `0..len`, stored with its transitive closure, cover
/// relations, strict down-sets and element dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    degrees: Option<Vec<Multidegree>>,
    less: Vec<Vec<bool>>,
    covers: BTreeSet<(usize, usize)>,
    below: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl Poset {
    /// Builds the poset generated by `relations` (pairs `lo < hi`).
    pub fn new(labels: Vec<String>, relations: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = labels.len();
        let mut up: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (lo, hi) in relations {
            if lo >= n || hi >= n {
                return Err(Error::Shape(format!("relation ({lo}, {hi}) outside {n} elements")));
            }
            if lo == hi {
                return Err(Error::CyclicOrder(format!("{} < {}", labels[lo], labels[hi])));
            }
            up[lo].insert(hi);
        }
        let mut indeg = vec![0usize; n];
        for u in &up {
            for &h in u {
                indeg[h] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &h in &up[i] {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.insert(h);
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).expect("cycle element");
            return Err(Error::CyclicOrder(format!("cycle through {}", labels[stuck])));
        }
        let mut less = vec![vec![false; n]; n];
        let mut dims = vec![0usize; n];
        for &i in &order {
            for &h in &up[i] {
                dims[h] = dims[h].max(dims[i] + 1);
                less[i][h] = true;
                for j in 0..n {
                    if less[j][i] {
                        less[j][h] = true;
                    }
                }
            }
        }
        let below: Vec<Vec<usize>> = (0..n).map(|b| (0..n).filter(|&a| less[a][b]).collect()).collect();
        let mut covers = BTreeSet::new();
        for b in 0..n {
            for &a in &below[b] {
                if !below[b].iter().any(|&c| less[a][c]) {
                    covers.insert((a, b));
                }
            }
        }
        Ok(Self {
            labels,
            degrees: None,
            less,
            covers,
            below,
            dims,
        })
    }

    /// Poset with elements labeled `0..n`.
    pub fn with_numeric_labels(n: usize, relations: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), relations)
    }

    pub fn with_degrees(mut self, degrees: Vec<Multidegree>) -> Result<Self> {
        if degrees.len() != self.len() {
            return Err(Error::Shape(format!(
                "{} degrees for {} elements",
                degrees.len(),
                self.len()
            )));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degrees(&self) -> Option<&[Multidegree]> {
        self.degrees.as_deref()
    }

    pub fn degree(&self, a: usize) -> Option<&Multidegree> {
        self.degrees.as_ref().map(|d| &d[a])
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less[a][b]
    }

    /// Cover relations `(lo, hi)`, sorted.
    pub fn covers(&self) -> &BTreeSet<(usize, usize)> {
        &self.covers
    }

    /// Elements strictly below `a`, ascending.
    pub fn down_set(&self, a: usize) -> &[usize] {
        &self.below[a]
    }

    /// Length of the longest chain ending at `a`.
    pub fn dim_element(&self, a: usize) -> usize {
        self.dims[a]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.dims.iter().copied().max()
    }

    /// Elements of dimension at most `n`, ascending.
    pub fn skeleton(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.dims[a] <= n).collect()
    }

    /// Copy of the poset with the extra relations `lo < hi`.
    pub fn add_relations(&self, extra: &[(usize, usize)]) -> Result<Self> {
        let mut p = Self::new(
            self.labels.clone(),
            self.covers.iter().copied().chain(extra.iter().copied()),
        )?;
        p.degrees = self.degrees.clone();
        Ok(p)
    }

    /// Order complex of the subposet induced on `elements`.
    pub fn order_complex(&self, elements: &[usize]) -> Result<OrderComplex> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        let mut levels: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        let mut total = 1usize;
        let mut current: Vec<Vec<usize>> = set.iter().map(|&v| vec![v]).collect();
        while !current.is_empty() {
            total += current.len();
            if total > FACE_CAP {
                return Err(Error::TooLarge(format!("order complex exceeds {FACE_CAP} faces")));
            }
            let mut next = Vec::new();
            for chain in &current {
                let last = *chain.last().expect("nonempty chain");
                for &u in &self.below[last] {
                    if set.contains(&u) {
                        let mut c = chain.clone();
                        c.push(u);
                        next.push(c);
                    }
                }
            }
            current.sort();
            levels.push(current);
            current = next;
        }
        Ok(OrderComplex::from_levels(levels))
    }

    /// Order complex of `P_{<a}`.
    pub fn lower_order_complex(&self, a: usize) -> Result<OrderComplex> {
        self.order_complex(&self.below[a])
    }

    /// True iff `Delta(P_{<a})` has the reduced homology of a sphere of
    /// dimension `d(a) - 1`.
    pub fn is_homology_sphere_at<F: Field>(&self, a: usize, field: &F) -> Result<bool> {
        let h = self.lower_order_complex(a)?.reduced_homology(field);
        Ok(h.is_sphere_of_dim(self.dims[a] as isize - 1))
    }

    /// First element whose lower interval is not a homology sphere.
    pub fn first_non_sphere<F: Field>(&self, field: &F) -> Result<Option<usize>> {
        for a in 0..self.len() {
            if !self.is_homology_sphere_at(a, field)? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    pub fn is_hcw<F: Field>(&self, field: &F) -> Result<bool> {
        Ok(self.first_non_sphere(field)?.is_none())
    }

    /// An isomorphism `self -> other` as an index map, if one exists.
    pub fn find_isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.covers.len() != other.covers.len() {
            return None;
        }
        let sig = |p: &Poset, a: usize| {
            (
                p.dims[a],
                p.below[a].len(),
                (0..p.len()).filter(|&b| p.less[a][b]).count(),
            )
        };
        let mine: Vec<_> = (0..n).map(|a| sig(self, a)).collect();
        let theirs: Vec<_> = (0..n).map(|a| sig(other, a)).collect();
        let mut a_sorted = mine.clone();
        let mut b_sorted = theirs.clone();
        a_sorted.sort();
        b_sorted.sort();
        if a_sorted != b_sorted {
            return None;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (self.dims[a], a));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            p: &Poset,
            q: &Poset,
            order: &[usize],
            k: usize,
            mine: &[(usize, usize, usize)],
            theirs: &[(usize, usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let a = order[k];
            for b in 0..q.len() {
                if used[b] || mine[a] != theirs[b] {
                    continue;
                }
                let consistent = order[..k].iter().all(|&c| {
                    let d = map[c];
                    p.less[a][c] == q.less[b][d] && p.less[c][a] == q.less[d][b]
                });
                if !consistent {
                    continue;
                }
                map[a] = b;
                used[b] = true;
                if extend(p, q, order, k + 1, mine, theirs, map, used) {
                    return true;
                }
                used[b] = false;
                map[a] = usize::MAX;
            }
            false
        }
        extend(self, other, &order, 0, &mine, &theirs, &mut map, &mut used).then_some(map)
    }

    /// True iff `map` is a bijection `self -> other` preserving and
    /// reflecting the order.
    pub fn is_isomorphism(&self, other: &Poset, map: &[usize]) -> bool {
        let n = self.len();
        if n != other.len() || map.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &b in map {
            if b >= n || seen[b] {
                return false;
            }
            seen[b] = true;
        }
        (0..n).all(|a| (0..n).all(|c| self.less[a][c] == other.less[map[a]][map[c]]))
    }

    pub fn to_json(&self) -> PosetJson {
        let all_numeric = self.labels.iter().all(|l| !l.is_empty() && l.parse::<u64>().is_ok());
        let id = |a: usize| {
            if all_numeric {
                serde_json::Value::from(self.labels[a].parse::<u64>().expect("numeric label"))
            } else {
                serde_json::Value::from(self.labels[a].clone())
            }
        };
        PosetJson {
            elements: (0..self.len())
                .map(|a| ElementJson {
                    id: id(a),
                    deg: self.degree(a).cloned(),
                })
                .collect(),
            covers: self.covers.iter().map(|&(lo, hi)| [id(lo), id(hi)]).collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let labels: Vec<String> = json.elements.iter().map(|e| json_label(&e.id)).collect::<Result<_>>()?;
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != labels.len() {
            return Err(Error::Parse("duplicate element id".into()));
        }
        let mut relations = Vec::with_capacity(json.covers.len());
        for [lo, hi] in &json.covers {
            let find = |v: &serde_json::Value| -> Result<usize> {
                let l = json_label(v)?;
                index
                    .get(l.as_str())
                    .copied()
                    .ok_or_else(|| Error::NotFound(format!("element {l}")))
            };
            relations.push((find(lo)?, find(hi)?));
        }
        let p = Self::new(labels, relations)?;
        let degs: Vec<Option<Multidegree>> = json.elements.iter().map(|e| e.deg.clone()).collect();
        if degs.iter().all(Option::is_some) && !degs.is_empty() {
            p.with_degrees(degs.into_iter().map(Option::unwrap).collect())
        } else if degs.iter().any(Option::is_some) {
            Err(Error::Parse("either all elements or none carry a degree".into()))
        } else {
            Ok(p)
        }
    }

    /// Graphviz rendering, ranked by dimension; `added` relations are dashed.
    pub fn to_dot(&self, added: &[(usize, usize)]) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for a in 0..self.len() {
            let text = match self.degree(a) {
                Some(d) => format!("{}\\n{}", self.labels[a], d),
                None => self.labels[a].clone(),
            };
            let _ = writeln!(out, "  n{a} [label=\"{text}\"];");
        }
        if let Some(top) = self.max_dim() {
            for d in 0..=top {
                let members: Vec<String> = (0..self.len())
                    .filter(|&a| self.dims[a] == d)
                    .map(|a| format!("n{a}"))
                    .collect();
                let _ = writeln!(out, "  {{ rank=same; {} }}", members.join("; "));
            }
        }
        let added: BTreeSet<(usize, usize)> = added.iter().copied().collect();
        for &(lo, hi) in &self.covers {
            let style = if added.contains(&(lo, hi)) {
                " [style=dashed]"
            } else {
                ""
            };
            let _ = writeln!(out, "  n{lo} -> n{hi}{style};");
        }
        out.push_str("}\n");
        out
    }
}

fn json_label(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) if n.is_u64() => Ok(n.to_string()),
        other => Err(Error::Parse(format!(
            "element id must be a string or natural number, got {other}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub id: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<Multidegree>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<ElementJson>,
    pub covers: Vec<[serde_json::Value; 2]>,
}

/// Simplicial complex of chains. Faces are listed per dimension with their
/// vertices in decreasing poset order, sorted lexicographically; level 0
/// holds the empty face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderComplex {
    levels: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl OrderComplex {
    fn from_levels(levels: Vec<Vec<Vec<usize>>>) -> Self {
        let index = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
            .collect();
        Self { levels, index }
    }

    /// Dimension of the complex; `-1` when only the empty face is present.
    pub fn dim(&self) -> isize {
        self.levels.len() as isize - 2
    }

    /// Faces of dimension `k` (`k >= -1`).
    pub fn faces(&self, k: isize) -> &[Vec<usize>] {
        usize::try_from(k + 1)
            .ok()
            .and_then(|i| self.levels.get(i))
            .map_or(&[], Vec::as_slice)
    }

    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        self.index.get(face.len()).and_then(|m| m.get(face).copied())
    }

    pub fn num_faces(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Boundary from dimension `k` to `k - 1`, for `k >= 0`. Dimension 0
    /// maps each vertex to the empty face.
    pub fn boundary<F: Field>(&self, k: isize, field: &F) -> SparseMatrix<F::Elem> {
        let rows = self.faces(k - 1);
        let cols = self.faces(k);
        let mut entries = Vec::new();
        for (c, face) in cols.iter().enumerate() {
            for i in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(i);
                let r = self.face_index(&sub).expect("subchain is a face");
                let s = if i % 2 == 0 {
                    field.one()
                } else {
                    field.neg(&field.one())
                };
                entries.push((r, c, s));
            }
        }
        SparseMatrix::from_triplets(field, rows.len(), cols.len(), entries).expect("valid boundary")
    }

    /// Boundary of a chain given as `(face, coefficient)` pairs of dimension `k`.
    pub fn chain_boundary<F: Field>(&self, k: isize, chain: &[F::Elem], field: &F) -> Vec<F::Elem> {
        self.boundary(k, field)
            .mul_vec(field, chain)
            .expect("chain length matches")
    }

    pub fn reduced_homology<F: Field>(&self, field: &F) -> ReducedHomology {
        let top = self.dim();
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|k| {
                if k <= top {
                    rank(&self.boundary(k, field), field)
                } else {
                    0
                }
            })
            .collect();
        // ranks[k] = rank of the boundary out of dimension k
        let betti = (-1..=top)
            .map(|i| {
                let out = if i >= 0 { ranks[i as usize] } else { 0 };
                let into = ranks[(i + 1) as usize];
                self.faces(i).len() - out - into
            })
            .collect();
        ReducedHomology { betti }
    }
}

/// Ranks of reduced homology; `betti[0]` is dimension `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedHomology {
    pub betti: Vec<usize>,
}

impl ReducedHomology {
    pub fn get(&self, i: isize) -> usize {
        usize::try_from(i + 1)
            .ok()
            .and_then(|k| self.betti.get(k).copied())
            .unwrap_or(0)
    }

    /// Reduced homology of a sphere of dimension `d`.
    pub fn is_sphere_of_dim(&self, d: isize) -> bool {
        self.betti
            .iter()
            .enumerate()
            .all(|(k, &b)| b == usize::from(k as isize - 1 == d))
            && self.get(d) == 1
    }

    /// True iff all reduced homology vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0)
    }
}

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcw_core::exactla::Field;
use hcw_core::gradedcomplex::{ComplexJson, GradedFreeComplex};
use hcw_core::monomials::{MonomialIdeal, Multidegree};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load_complex<F: Field>(name: &str, field: F) -> GradedFreeComplex<F> {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture readable");
    let json: ComplexJson = serde_json::from_str(&text).expect("fixture parses");
    GradedFreeComplex::from_json(field, &json).expect("fixture is a valid complex")
}

/// Ideal from product-form monomials such as `x1*x3` over the given names.
pub fn ideal_from(names: &[&str], gens: &[&str]) -> MonomialIdeal {
    let degs = gens.iter().map(|g| {
        let mut e = vec![0u32; names.len()];
        for factor in g.split('*') {
            let i = names.iter().position(|n| *n == factor).expect("known variable");
            e[i] += 1;
        }
        Multidegree(e)
    });
    MonomialIdeal::minimalize(degs).unwrap()
}

pub fn rp2_ideal() -> MonomialIdeal {
    ideal_from(
        &["x1", "x2", "x3", "x4", "x5", "x6"],
        &[
            "x1*x2*x3", "x1*x3*x5", "x1*x4*x5", "x2*x3*x4", "x2*x4*x5", "x1*x2*x6", "x1*x4*x6", "x2*x5*x6", "x3*x4*x6",
            "x3*x5*x6",
        ],
    )
}

pub fn m_ideal() -> MonomialIdeal {
    ideal_from(
        &["t", "u", "v", "w", "x", "y", "z"],
        &["u*v*w", "u*x*y", "u*w*y*z", "t*u*v*x*z", "t*v*w*x*y*z"],
    )
}

pub fn triangle_ideal() -> MonomialIdeal {
    ideal_from(&["x", "y", "z"], &["x*y", "x*z", "y*z"])
}

/// Random ideals with two to six minimal generators in two to five
/// variables and exponents at most three, reproducible from `seed`.
/// Generators are drawn until they form an antichain of the target size.
pub fn random_corpus(seed: u64, count: usize) -> Vec<MonomialIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let vars = rng.gen_range(2..=5);
        let target = rng.gen_range(2..=6);
        let max_exp = rng.gen_range(1..=3);
        let mut gens: Vec<Multidegree> = Vec::new();
        for _ in 0..200 {
            if gens.len() == target {
                break;
            }
            let d = Multidegree((0..vars).map(|_| rng.gen_range(0..=max_exp)).collect());
            if d.total_degree() > 0 && gens.iter().all(|g| !g.divides(&d) && !d.divides(g)) {
                gens.push(d);
            }
        }
        out.push(MonomialIdeal::minimalize(gens).unwrap());
    }
    out
}

/// Rank of a dense integer matrix over `GF(p)`, or over `Q` when `p = 0`,
/// by plain Gaussian elimination.
pub fn dense_rank(rows: &[Vec<i64>], ncols: usize, p: u64) -> usize {
    if p == 0 {
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = BigRational::one() / m[rank][c].clone();
            let pivot_row: Vec<BigRational> = m[rank].iter().map(|x| x * &inv).collect();
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in 0..ncols {
                        let sub = &f * &pivot_row[k];
                        m[r][k] -= sub;
                    }
                }
            }
            m[rank] = pivot_row;
            rank += 1;
        }
        rank
    } else {
        let p = p as i64;
        let mut m: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect())
            .collect();
        let inv = |a: i64| -> i64 {
            let mut r = 1i64;
            let mut b = a;
            let mut e = p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            r
        };
        let mut rank = 0;
        for c in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let iv = inv(m[rank][c]);
            for k in 0..ncols {
                m[rank][k] = m[rank][k] * iv % p;
            }
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c];
                    for k in 0..ncols {
                        m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Multigraded Betti numbers `beta_{i,alpha}` of the ideal (with `i = 0` for
/// generators) as `dim H~_{i-1}(K^alpha)`, where the upper Koszul complex
/// `K^alpha` consists of the squarefree `S` with `x^(alpha - S)` in `I`.
/// Degrees range over the lcm lattice.
pub fn upper_koszul_betti(ideal: &MonomialIdeal, p: u64) -> BTreeMap<(usize, Multidegree), usize> {
    let mut out = BTreeMap::new();
    for alpha in ideal.lcm_lattice().degrees() {
        let support: Vec<usize> = (0..alpha.num_vars()).filter(|&j| alpha.0[j] > 0).collect();
        let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); support.len() + 1];
        for mask in 0u32..(1 << support.len()) {
            let s: Vec<usize> = (0..support.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| support[k])
                .collect();
            let mut e = alpha.0.clone();
            for &j in &s {
                e[j] -= 1;
            }
            if ideal.contains(&Multidegree(e)) {
                faces[s.len()].push(s);
            }
        }
        for f in &mut faces {
            f.sort();
        }
        // boundary from size k to size k - 1
        let boundary_rank = |k: usize| -> usize {
            if k == 0 || faces[k].is_empty() || faces[k - 1].is_empty() {
                return 0;
            }
            let rows: Vec<Vec<i64>> = faces[k]
                .iter()
                .map(|f| {
                    let mut row = vec![0i64; faces[k - 1].len()];
                    for i in 0..f.len() {
                        let mut g = f.clone();
                        g.remove(i);
                        let pos = faces[k - 1].iter().position(|h| *h == g).expect("closed under subsets");
                        row[pos] = if i % 2 == 0 { 1 } else { -1 };
                    }
                    row
                })
                .collect();
            dense_rank(&rows, faces[k - 1].len(), p)
        };
        let ranks: Vec<usize> = (0..=faces.len())
            .map(|k| if k < faces.len() { boundary_rank(k) } else { 0 })
            .collect();
        for k in 0..faces.len() {
            // faces of size k have dimension k - 1; H~_{k-1} gives beta_k
            let h = faces[k].len() - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0);
            if h > 0 {
                out.insert((k, alpha.clone()), h);
            }
        }
    }
    out
}

pub fn totals(betti: &BTreeMap<(usize, Multidegree), usize>) -> Vec<usize> {
    let mut t = Vec::new();
    for (&(i, _), &b) in betti {
        if t.len() <= i {
            t.resize(i + 1, 0);
        }
        t[i] += b;
    }
    t
}

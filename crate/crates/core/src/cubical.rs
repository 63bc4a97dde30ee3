//! The cube category, cube counts, cyclic one-vertex complexes, the link
//! condition and the doubling of one-vertex presentations.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{CornerCount, Direction, GenLabel, Letter, Presentation, Square};

/// A morphism `[n] -> [m]`: `f(a)_j = eps_j a_{sigma^{-1}(j)}`, or `eps_j` off the image.
/// Coordinates are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeMorphism {
    n: usize,
    m: usize,
    sigma: Vec<usize>,
    eps: Vec<i8>,
}

impl CubeMorphism {
    pub fn new(n: usize, m: usize, sigma: Vec<usize>, eps: Vec<i8>) -> Result<Self> {
        if sigma.len() != n || eps.len() != m {
            return Err(Error::DimensionMismatch(sigma.len(), eps.len()));
        }
        let mut seen = vec![false; m];
        for &s in &sigma {
            if s >= m || std::mem::replace(&mut seen[s], true) {
                return Err(Error::IndexOutOfRange { index: s + 1, max: m });
            }
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Format(format!("signs must be +-1, got {eps:?}")));
        }
        Ok(CubeMorphism { n, m, sigma, eps })
    }

    pub fn identity(n: usize) -> Self {
        CubeMorphism { n, m: n, sigma: (0..n).collect(), eps: vec![1; n] }
    }

    pub fn domain(&self) -> usize {
        self.n
    }

    pub fn codomain(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn eps(&self) -> &[i8] {
        &self.eps
    }

    pub fn apply(&self, a: &[i8]) -> Vec<i8> {
        assert_eq!(a.len(), self.n, "point of the wrong dimension");
        let mut out = self.eps.clone();
        for (i, &j) in self.sigma.iter().enumerate() {
            out[j] *= a[i];
        }
        out
    }

    /// Every morphism `[n] -> [m]`.
    pub fn all(n: usize, m: usize) -> Vec<CubeMorphism> {
        let mut sigmas = Vec::new();
        injections(n, m, &mut Vec::new(), &mut sigmas);
        let mut out = Vec::with_capacity(sigmas.len() << m);
        for sigma in sigmas {
            for bits in 0u32..1 << m {
                let eps = (0..m).map(|j| if bits >> j & 1 == 1 { -1 } else { 1 }).collect();
                out.push(CubeMorphism { n, m, sigma: sigma.clone(), eps });
            }
        }
        out
    }
}

fn injections(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for j in 0..m {
        if !cur.contains(&j) {
            cur.push(j);
            injections(n, m, cur, out);
            cur.pop();
        }
    }
}

/// `f . g`.
pub fn compose(f: &CubeMorphism, g: &CubeMorphism) -> Result<CubeMorphism> {
    if g.m != f.n {
        return Err(Error::DimensionMismatch(f.n, g.m));
    }
    let sigma = g.sigma.iter().map(|&i| f.sigma[i]).collect();
    let mut eps = f.eps.clone();
    for (i, &j) in f.sigma.iter().enumerate() {
        eps[j] *= g.eps[i];
    }
    Ok(CubeMorphism { n: g.n, m: f.m, sigma, eps })
}

/// The face map `[n] -> [n+1]` inserting `eps` at the 1-based position `i`.
pub fn face(n: usize, i: usize, eps: i8) -> Result<CubeMorphism> {
    if i == 0 || i > n + 1 {
        return Err(Error::IndexOutOfRange { index: i, max: n + 1 });
    }
    let sigma = (0..n).map(|k| if k + 1 < i { k } else { k + 1 }).collect();
    let mut signs = vec![1; n + 1];
    signs[i - 1] = eps;
    CubeMorphism::new(n, n + 1, sigma, signs)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Number of `p`-dimensional parametrized faces of the `n`-cube.
pub fn count_cubes(n: u64, p: u64) -> u128 {
    if p > n {
        return 0;
    }
    (factorial(p) * binomial(n, p)) << n
}

/// Left side of the cardinality identity for the decomposition of
/// `(square^{a+b})_n` into products of faces of `square^a` and `square^b`.
pub fn decomposition_count(a: u64, b: u64, n: u64) -> u128 {
    (0..=n)
        .map(|p| {
            let q = n - p;
            let faces = count_cubes(a, p) * count_cubes(b, q);
            let index = (factorial(n) << n) / ((factorial(p) << p) * (factorial(q) << q));
            faces * index
        })
        .sum()
}

/// The closed form `2^{a+b} n! C(a+b, n)`.
pub fn decomposition_closed_form(a: u64, b: u64, n: u64) -> u128 {
    (factorial(n) * binomial(a + b, n)) << (a + b)
}

/// One-vertex complex of the cyclic sets `A_i = {0, .., n_i - 1}` with
/// even indices positive, `T(k) = k + 2` and `k^{-1} = k xor 1`.
pub fn cyclic_complex(sizes: &[usize]) -> Result<Presentation> {
    for &n in sizes {
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddSize(n));
        }
    }
    let directions = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| Direction {
            label: (i + 1).to_string(),
            valency: n,
            generators: (0..n as u32).map(GenLabel::Cyclic).collect(),
            involution: (0..n).map(|k| k ^ 1).collect(),
        })
        .collect();
    let mut p = Presentation::new(directions);
    // T^{delta(k)} applied to an element of a set of size n
    let shift = |k: usize, by: usize, n: usize| {
        if by.is_multiple_of(2) {
            (k + 2) % n
        } else {
            (k + n - 2) % n
        }
    };
    let mut squares = BTreeSet::new();
    for v in 0..sizes.len() {
        for w in v + 1..sizes.len() {
            let (nv, nw) = (sizes[v], sizes[w]);
            for a in 0..nv {
                for b in 0..nw {
                    // a . T^{d(a)} b = b . T^{d(b)} a
                    let tb = shift(b, a, nw);
                    let ta = shift(a, b, nv);
                    let word = [Letter::new(v, a), Letter::new(w, tb), Letter::new(v, ta ^ 1), Letter::new(w, b ^ 1)];
                    squares.insert(p.canonicalize(&Square::from_letters(word)?)?);
                }
            }
        }
    }
    p.squares = squares.into_iter().collect();
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub pass: bool,
    /// Corners covered other than exactly once.
    pub defects: Vec<CornerCount>,
}

pub fn check_link(p: &Presentation) -> Result<LinkReport> {
    let defects: Vec<CornerCount> = p.corner_coverage()?.into_iter().filter(|c| c.count != 1).collect();
    Ok(LinkReport { pass: defects.is_empty(), defects })
}

/// The doubled complex: generators `A_v x A_v`, squares from pairs of
/// parametrized squares over the same direction pair, faces componentwise.
pub fn double(p: &Presentation) -> Result<Presentation> {
    let link = check_link(p)?;
    if !link.pass {
        return Err(Error::LinkFailure(link.defects.len()));
    }
    let sizes: Vec<usize> = p.directions.iter().map(|d| d.generators.len()).collect();
    let directions = p
        .directions
        .iter()
        .map(|d| {
            let n = d.generators.len();
            let mut generators = Vec::with_capacity(n * n);
            let mut involution = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    generators.push(GenLabel::Pair(Box::new(d.generators[a].clone()), Box::new(d.generators[b].clone())));
                    involution.push(d.involution[a] * n + d.involution[b]);
                }
            }
            Direction { label: d.label.clone(), valency: n * n, generators, involution }
        })
        .collect();
    let mut out = Presentation::new(directions);

    let mut by_pair: BTreeMap<(usize, usize), Vec<Square>> = BTreeMap::new();
    for sq in &p.squares {
        let (lo, _) = sq.dir_pair();
        let words = p.orbit(sq)?.into_iter().filter(|o| o.v == lo);
        by_pair.entry(sq.dir_pair()).or_default().extend(words);
    }
    let mut squares = BTreeSet::new();
    for ((v, w), words) in by_pair {
        let (nv, nw) = (sizes[v], sizes[w]);
        let found: Vec<Square> = words
            .par_iter()
            .map(|r| -> Result<Vec<Square>> {
                let mut local = BTreeSet::new();
                for s in &words {
                    let word = [
                        r.word[0] * nv + s.word[0],
                        r.word[1] * nw + s.word[1],
                        r.word[2] * nv + s.word[2],
                        r.word[3] * nw + s.word[3],
                    ];
                    local.insert(out.canonicalize(&Square { v, w, word })?);
                }
                Ok(local.into_iter().collect())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        squares.extend(found);
    }
    out.squares = squares.into_iter().collect();
    Ok(out)
}

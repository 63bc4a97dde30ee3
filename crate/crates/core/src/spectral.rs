//! Directional adjacency operators of a Cayley complex, a dense symmetric
//! eigensolver, and the cubical Ramanujan certificate.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::CayleyComplex;

/// Largest order accepted by the dense eigensolver.
pub const MAX_DENSE: usize = 8192;

/// Square integer matrix in CSR form with sorted column indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricIntMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<i64>,
}

impl SymmetricIntMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    /// Fails with `NonSymmetric` unless the result equals its transpose.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, i64)>) -> Result<Self> {
        let m = Self::from_triplets_unchecked(n, &mut t)?;
        if !m.is_symmetric() {
            return Err(Error::NonSymmetric);
        }
        Ok(m)
    }

    fn from_triplets_unchecked(n: usize, t: &mut [(usize, usize, i64)]) -> Result<Self> {
        t.sort_unstable();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::with_capacity(t.len());
        let mut val: Vec<i64> = Vec::with_capacity(t.len());
        let mut last = None;
        for &(r, c, v) in t.iter() {
            if r >= n || c >= n {
                return Err(Error::IndexOutOfRange { index: r.max(c), max: n });
            }
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col.push(c);
            val.push(v);
        }
        for k in 0..n {
            row_ptr[k + 1] += row_ptr[k];
        }
        let mut m = SymmetricIntMatrix { n, row_ptr, col, val };
        m.drop_zeros();
        Ok(m)
    }

    fn drop_zeros(&mut self) {
        if self.val.iter().all(|&v| v != 0) {
            return;
        }
        let mut row_ptr = vec![0usize; self.n + 1];
        let (mut col, mut val) = (Vec::new(), Vec::new());
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.val[k] != 0 {
                    col.push(self.col[k]);
                    val.push(self.val[k]);
                }
            }
            row_ptr[r + 1] = col.len();
        }
        self.row_ptr = row_ptr;
        self.col = col;
        self.val = val;
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut t = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format("matrix is not square".into()));
            }
            t.extend(row.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (r, c, v)));
        }
        Self::from_triplets(n, t)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.col[k], self.val[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let cols = &self.col[self.row_ptr[r]..self.row_ptr[r + 1]];
        match cols.binary_search(&c) {
            Ok(k) => self.val[self.row_ptr[r] + k],
            Err(_) => 0,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| self.row(r).all(|(c, v)| self.get(c, r) == v))
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.n).map(|r| self.row(r).map(|(_, v)| v).sum()).collect()
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|r| self.get(r, r)).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.n]; self.n];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] = v;
            }
        }
        out
    }

    /// Exact product, not assumed symmetric.
    pub fn product_triplets(&self, other: &Self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        let mut acc = vec![0i64; self.n];
        let mut touched = Vec::new();
        for r in 0..self.n {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if acc[c] == 0 {
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != 0 {
                    out.push((r, c, acc[c]));
                }
                acc[c] = 0;
            }
            touched.clear();
        }
        out
    }

    /// `self * other == other * self`, exactly.
    pub fn commutes_with(&self, other: &Self) -> bool {
        self.n == other.n && self.product_triplets(other) == other.product_triplets(self)
    }

    /// Connected components of the underlying graph and, for each, whether
    /// it admits a proper 2-colouring (a loop rules one out).
    pub fn components(&self) -> Vec<bool> {
        let mut colour = vec![u8::MAX; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            stack.push(s);
            let mut bipartite = true;
            while let Some(u) = stack.pop() {
                for (w, _) in self.row(u) {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[u];
                        stack.push(w);
                    } else if colour[w] == colour[u] {
                        bipartite = false;
                    }
                }
            }
            out.push(bipartite);
        }
        out
    }

    pub fn to_dense_f64(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for r in 0..self.n {
            for (c, v) in self.row(r) {
                out[r * self.n + c] = v as f64;
            }
        }
        out
    }
}

/// `A_v[P][Q] = mu_v(P, Q)`.
pub fn adjacency(c: &CayleyComplex, v: usize) -> Result<SymmetricIntMatrix> {
    let d = c.directions.get(v).ok_or(Error::UnknownDirection(v))?;
    let t = d.edges.iter().map(|&(a, b, m)| (a as usize, b as usize, m as i64)).collect();
    SymmetricIntMatrix::from_triplets(c.num_vertices(), t)
}

/// Householder reduction of a dense symmetric row-major matrix to
/// tridiagonal form. Returns the diagonal, the subdiagonal (padded with a
/// trailing zero) and, on request, the orthogonal factor `Q` with `A = Q T Q^T`.
fn tridiagonalize(mut a: Vec<f64>, n: usize, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<Vec<f64>>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors: Vec<(usize, Vec<f64>)> = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        d[k] = a[k * n + k];
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        v.iter_mut().for_each(|t| *t /= vn);
        e[k] = alpha;

        // p = A22 v, w = p - (v.p) v, A22 -= 2 (v w^T + w v^T)
        let off = k + 1;
        let p: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|i| {
                let row = &a[(off + i) * n + off..(off + i) * n + n];
                row.iter().zip(&v).map(|(x, y)| x * y).sum()
            })
            .collect();
        let kk: f64 = v.iter().zip(&p).map(|(x, y)| x * y).sum();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        a[off * n..].par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let (vi, wi) = (v[i], w[i]);
            for (j, x) in row[off..].iter_mut().enumerate() {
                *x -= 2.0 * (vi * w[j] + wi * v[j]);
            }
        });
        if want_q {
            reflectors.push((off, v));
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1];
    }
    let q = want_q.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        for (off, v) in reflectors.iter().rev() {
            // Z = (I - 2 v v^T) Z on rows off..n
            let m = v.len();
            let s: Vec<f64> = (0..n).map(|c| (0..m).map(|i| v[i] * z[(off + i) * n + c]).sum()).collect();
            for i in 0..m {
                for c in 0..n {
                    z[(off + i) * n + c] -= 2.0 * v[i] * s[c];
                }
            }
        }
        z
    });
    (d, e, q)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix; rotations are
/// accumulated into the columns of `z` when given.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Format("eigensolver did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of a dense symmetric row-major matrix, descending.
pub fn symmetric_eigenvalues(a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    if n > MAX_DENSE {
        return Err(Error::MatrixTooLarge(n));
    }
    let (mut d, mut e, _) = tridiagonalize(a, n, false);
    tridiagonal_ql(&mut d, &mut e, None)?;
    d.sort_by(|x, y| y.total_cmp(x));
    Ok(d)
}

/// Eigenpairs, descending; `vectors[k]` belongs to `values[k]`.
pub fn symmetric_eigen(a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if n > MAX_DENSE {
        return Err(Error::MatrixTooLarge(n));
    }
    let (mut d, mut e, z) = tridiagonalize(a, n, true);
    let mut z = z.expect("requested");
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[y].total_cmp(&d[x]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|r| z[r * n + k]).collect()).collect();
    Ok((values, vectors))
}

pub fn spectrum(m: &SymmetricIntMatrix) -> Result<Vec<f64>> {
    if !m.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    if m.order() > MAX_DENSE {
        return Err(Error::MatrixTooLarge(m.order()));
    }
    symmetric_eigenvalues(m.to_dense_f64(), m.order())
}

/// Largest `||M x - lambda x||` over the given eigenpairs.
pub fn max_residual(m: &SymmetricIntMatrix, values: &[f64], vectors: &[Vec<f64>]) -> f64 {
    values
        .iter()
        .zip(vectors)
        .map(|(&lam, x)| {
            (0..m.order())
                .map(|r| {
                    let mx: f64 = m.row(r).map(|(c, v)| v as f64 * x[c]).sum();
                    (mx - lam * x[r]).powi(2)
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub label: String,
    pub q: u64,
    pub bound: f64,
    /// Multiplicity of `+(q+1)`.
    pub trivial_plus: usize,
    /// Multiplicity of `-(q+1)`.
    pub trivial_minus: usize,
    /// Connected components of the direction subgraph.
    pub components: usize,
    pub bipartite_components: usize,
    pub bipartite: bool,
    pub trivial_pattern_ok: bool,
    pub regular: bool,
    pub max_nontrivial: f64,
    pub pass: bool,
    #[serde(skip)]
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamanujanReport {
    pub vertices: usize,
    pub tolerance: f64,
    pub directions: Vec<DirectionReport>,
    /// `commutation[v][w]`: whether `A_v A_w = A_w A_v` exactly.
    pub commutation: Vec<Vec<bool>>,
    pub pass: bool,
}

impl RamanujanReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `direction,index,eigenvalue` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("direction,index,eigenvalue\n");
        for d in &self.directions {
            for (k, lam) in d.eigenvalues.iter().enumerate() {
                // avoid printing -0.000000000000
                let lam = if lam.abs() < 5e-13 { 0.0 } else { *lam };
                let _ = writeln!(out, "{},{k},{lam:.12}", d.label);
            }
        }
        out
    }
}

fn direction_report(label: &str, valency: usize, a: &SymmetricIntMatrix, tol: f64) -> Result<DirectionReport> {
    let q = valency as u64 - 1;
    let top = valency as f64;
    let bound = 2.0 * (q as f64).sqrt();
    let eigenvalues = spectrum(a)?;
    let trivial_plus = eigenvalues.iter().filter(|&&l| (l - top).abs() <= tol).count();
    let trivial_minus = eigenvalues.iter().filter(|&&l| (l + top).abs() <= tol).count();
    let max_nontrivial = eigenvalues
        .iter()
        .filter(|&&l| (l - top).abs() > tol && (l + top).abs() > tol)
        .fold(0.0f64, |m, l| m.max(l.abs()));
    let comps = a.components();
    let components = comps.len();
    let bipartite_components = comps.iter().filter(|&&b| b).count();
    let regular = a.row_sums().iter().all(|&s| s == valency as i64);
    let trivial_pattern_ok = trivial_plus == components && trivial_minus == bipartite_components;
    Ok(DirectionReport {
        label: label.to_string(),
        q,
        bound,
        trivial_plus,
        trivial_minus,
        components,
        bipartite_components,
        bipartite: bipartite_components == components,
        trivial_pattern_ok,
        regular,
        max_nontrivial,
        pass: max_nontrivial <= bound + tol,
        eigenvalues,
    })
}

/// Spectra of all directional operators, the trivial-eigenvalue pattern and
/// exact pairwise commutation. `pass` is the Ramanujan verdict alone.
pub fn ramanujan_report(c: &CayleyComplex, tol: f64) -> Result<RamanujanReport> {
    let mats = (0..c.directions.len()).map(|v| adjacency(c, v)).collect::<Result<Vec<_>>>()?;
    let directions = c
        .directions
        .par_iter()
        .zip(&mats)
        .map(|(d, a)| direction_report(&d.label, d.valency, a, tol))
        .collect::<Result<Vec<_>>>()?;
    let k = mats.len();
    let mut commutation = vec![vec![true; k]; k];
    for v in 0..k {
        for w in v + 1..k {
            let ok = mats[v].commutes_with(&mats[w]);
            commutation[v][w] = ok;
            commutation[w][v] = ok;
        }
    }
    let pass = directions.iter().all(|d| d.pass);
    Ok(RamanujanReport { vertices: c.num_vertices(), tolerance: tol, directions, commutation, pass })
}

//! Congruence quotients: splittings of the quaternion algebra over a residue
//! field, and the finite Cayley complexes of the reduced generators in `PGL_2`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{is_prime, FieldCtx, Fq, Fq2, MAX_TABLE};
use crate::presentation::{GenLabel, Letter, Presentation, Square};

/// `F_q[t]/(pi)` for a monic irreducible `pi` of degree `m`. Elements are
/// coded in base `q`, digit `k` being the coefficient of `t^k`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    fq: Fq,
    pi: Vec<u32>,
    m: usize,
    n: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn poly_rem(fq: &Fq, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = fq.inv(b[db]).expect("nonzero leading coefficient");
    while r.len() > db {
        let top = r.len() - 1;
        let coef = fq.mul(r[top], lead_inv);
        if coef != 0 {
            for (k, &x) in b.iter().enumerate() {
                let idx = top - db + k;
                r[idx] = fq.sub(r[idx], fq.mul(coef, x));
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(fq: &Fq, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    let q = fq.q() as u64;
    for d in 1..=deg / 2 {
        for code in 0..q.pow(d as u32) {
            let mut g: Vec<u32> = (0..d).map(|k| (code / q.pow(k as u32) % q) as u32).collect();
            g.push(1);
            if poly_rem(fq, f, &g).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Evaluates a coefficient vector at a point of `F_q`.
pub fn eval_poly(fq: &Fq, f: &[u32], x: u32) -> u32 {
    f.iter().rev().fold(0, |acc, &c| fq.add(fq.mul(acc, x), c))
}

impl ResidueField {
    pub fn new(fq: Fq, pi: Vec<u32>) -> Result<Self> {
        if pi.len() < 2 || *pi.last().unwrap() != 1 || pi.iter().any(|&c| c >= fq.q()) {
            return Err(Error::Format(format!("{pi:?} is not a monic polynomial of positive degree")));
        }
        let m = pi.len() - 1;
        let n64 = (fq.q() as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
        if n64 > MAX_TABLE {
            return Err(Error::TableTooLarge(n64));
        }
        if !is_irreducible(&fq, &pi) {
            return Err(Error::Reducible);
        }
        let mut f = ResidueField { fq, pi, m, n: n64 as u32, exp: Vec::new(), log: Vec::new() };
        let order = f.n - 1;
        for g in 1..f.n {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..order {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = f.slow_mul(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![u32::MAX; f.n as usize];
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                f.exp = exp;
                f.log = log;
                return Ok(f);
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    /// The prime field `F_l`.
    pub fn prime(l: u32) -> Result<Self> {
        Self::new(Fq::new(l, 1)?, vec![0, 1])
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let q = self.fq.q();
        let mut a = a;
        (0..self.m)
            .map(|_| {
                let d = a % q;
                a /= q;
                d
            })
            .collect()
    }

    fn undigits(&self, ds: &[u32]) -> u32 {
        ds.iter().rev().fold(0, |acc, &d| acc * self.fq.q() + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = self.fq.add(prod[i + j], self.fq.mul(x, y));
            }
        }
        let r = poly_rem(&self.fq, &prod, &self.pi);
        self.undigits(&r)
    }

    pub fn base(&self) -> &Fq {
        &self.fq
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.pi
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn is_even(&self) -> bool {
        self.fq.is_even()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return self.fq.add(a, b);
        }
        let s: Vec<u32> = self.digits(a).iter().zip(self.digits(b)).map(|(&x, y)| self.fq.add(x, y)).collect();
        self.undigits(&s)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return self.fq.neg(a);
        }
        let s: Vec<u32> = self.digits(a).iter().map(|&x| self.fq.neg(x)).collect();
        self.undigits(&s)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.n as u64 - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.n - 1 - self.log[a as usize]) % (self.n - 1)) as usize])
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize] as u64;
        let order = self.n as u64 - 1;
        if self.is_even() {
            // squaring is bijective; its inverse is x -> x^{n/2}
            return Some(self.exp[(l * (self.n as u64 / 2) % order) as usize]);
        }
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.sqrt(a).is_some()
    }

    /// Embeds an element of `F_q` as a constant.
    pub fn from_base(&self, c: u32) -> u32 {
        c
    }

    pub fn from_int(&self, n: i64) -> u32 {
        self.fq.from_int(n)
    }

    /// The class of `t`.
    pub fn t_hat(&self) -> u32 {
        if self.m == 1 {
            self.fq.neg(self.pi[0])
        } else {
            self.fq.q()
        }
    }
}

/// A 2x2 matrix over a residue field, row-major.
pub type Mat2 = [u32; 4];

pub fn mat_mul(f: &ResidueField, a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |x: u32, y: u32, z: u32, w: u32| f.add(f.mul(x, y), f.mul(z, w));
    [
        e(a[0], b[0], a[1], b[2]),
        e(a[0], b[1], a[1], b[3]),
        e(a[2], b[0], a[3], b[2]),
        e(a[2], b[1], a[3], b[3]),
    ]
}

pub fn mat_add(f: &ResidueField, a: &Mat2, b: &Mat2) -> Mat2 {
    [f.add(a[0], b[0]), f.add(a[1], b[1]), f.add(a[2], b[2]), f.add(a[3], b[3])]
}

pub fn mat_scale(f: &ResidueField, s: u32, a: &Mat2) -> Mat2 {
    a.map(|x| f.mul(s, x))
}

pub fn mat_det(f: &ResidueField, a: &Mat2) -> u32 {
    f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2]))
}

pub fn mat_scalar(s: u32) -> Mat2 {
    [s, 0, 0, s]
}

pub const MAT_ONE: Mat2 = [1, 0, 0, 1];

/// Scales so that the first nonzero entry is 1.
pub fn projective_canonical(f: &ResidueField, a: &Mat2) -> Mat2 {
    match a.iter().find(|&&x| x != 0) {
        Some(&x) => mat_scale(f, f.inv(x).expect("nonzero"), a),
        None => *a,
    }
}

pub fn is_scalar_matrix(a: &Mat2) -> bool {
    a[1] == 0 && a[2] == 0 && a[0] == a[3] && a[0] != 0
}

#[derive(Clone, Debug)]
pub enum Splitting {
    Hurwitz { a: u32, b: u32, i: Mat2, j: Mat2, k: Mat2 },
    FunctionField { ctx: FieldCtx, t_hat: u32, z: Mat2, f: Mat2, split: bool },
}

/// A residue field together with images of the algebra's basis letters.
#[derive(Clone, Debug)]
pub struct SplittingData {
    pub field: ResidueField,
    pub kind: Splitting,
}

pub fn split_hurwitz(l: u64, s0: &[u64]) -> Result<SplittingData> {
    if l == 2 {
        return Err(Error::RamifiedPlace);
    }
    if !is_prime(l) || l > u32::MAX as u64 {
        return Err(Error::NotOddPrime(l));
    }
    if s0.contains(&l) {
        return Err(Error::PlaceInS(l.to_string()));
    }
    let field = ResidueField::prime(l as u32)?;
    let f = &field;
    let minus_one = f.neg(1);
    let (a, b) = (0..l as u32)
        .flat_map(|a| (0..l as u32).map(move |b| (a, b)))
        .find(|&(a, b)| f.add(f.mul(a, a), f.mul(b, b)) == minus_one)
        .expect("-1 is a sum of two squares in every finite field");
    let i = [a, b, b, f.neg(a)];
    let j = [0, 1, minus_one, 0];
    let k = mat_mul(f, &i, &j);
    let m1 = mat_scalar(minus_one);
    let checks = [
        (mat_mul(f, &i, &i), m1, "i^2 = -1"),
        (mat_mul(f, &j, &j), m1, "j^2 = -1"),
        (mat_mul(f, &k, &k), m1, "k^2 = -1"),
        (mat_mul(f, &j, &i), mat_scale(f, minus_one, &k), "ji = -k"),
    ];
    for (lhs, rhs, what) in checks {
        if lhs != rhs {
            return Err(Error::BadPlace(format!("splitting mod {l} violates {what}")));
        }
    }
    Ok(SplittingData { field, kind: Splitting::Hurwitz { a, b, i, j, k } })
}

/// Splits `D` modulo `pi`, a monic irreducible polynomial over `F_q`
/// (coefficients low to high) prime to `t` and to `t - tau` for `tau` in `s0`.
pub fn split_ff(ctx: &FieldCtx, pi: &[u32], s0: &[u32]) -> Result<SplittingData> {
    let fq = ctx.base().clone();
    if pi.len() >= 2 && pi.iter().all(|&c| c < fq.q()) {
        if eval_poly(&fq, pi, 0) == 0 {
            return Err(Error::BadPlace("modulus is divisible by t".into()));
        }
        for &tau in s0 {
            if tau < fq.q() && eval_poly(&fq, pi, tau) == 0 {
                return Err(Error::BadPlace(format!("modulus is divisible by t - {tau}")));
            }
        }
    }
    let field = ResidueField::new(fq, pi.to_vec())?;
    let f = &field;
    let c = f.from_base(ctx.c());
    let t_hat = field.t_hat();
    let even = ctx.is_even();
    // root of Z^2 = c (odd) or Z^2 = Z + c (even) in F_N
    let root = if even {
        (0..f.size()).find(|&w| f.mul(w, w) == f.add(w, c))
    } else {
        f.sqrt(c)
    };
    let (z, fm, split) = match root {
        Some(w) => {
            let w2 = if even { f.add(w, 1) } else { f.neg(w) };
            ([w, 0, 0, w2], [0, 1, t_hat, 0], true)
        }
        None => {
            // lambda = x + yZ with N(lambda) = t_hat; F acts as v -> lambda sigma(v)
            let (x, y) = norm_solution(f, c, t_hat, even)?;
            if even {
                ([0, c, 1, 1], [x, f.add(x, f.mul(y, c)), y, x], false)
            } else {
                ([0, c, 1, 0], [x, f.neg(f.mul(y, c)), y, f.neg(x)], false)
            }
        }
    };
    let sz = if even { mat_add(f, &z, &MAT_ONE) } else { mat_scale(f, f.neg(1), &z) };
    let z2_rhs = if even { mat_add(f, &z, &mat_scalar(c)) } else { mat_scalar(c) };
    let checks = [
        (mat_mul(f, &z, &z), z2_rhs, "Z^2"),
        (mat_mul(f, &fm, &fm), mat_scalar(t_hat), "F^2 = t"),
        (mat_mul(f, &fm, &z), mat_mul(f, &sz, &fm), "FZ = sigma(Z)F"),
    ];
    for (lhs, rhs, what) in checks {
        if lhs != rhs {
            return Err(Error::BadPlace(format!("splitting violates {what}")));
        }
    }
    Ok(SplittingData { field, kind: Splitting::FunctionField { ctx: ctx.clone(), t_hat, z, f: fm, split } })
}

fn norm_solution(f: &ResidueField, c: u32, target: u32, even: bool) -> Result<(u32, u32)> {
    for y in 0..f.size() {
        let cy2 = f.mul(c, f.mul(y, y));
        if even {
            // x^2 + xy + c y^2 = target
            for x in 0..f.size() {
                if f.add(f.add(f.mul(x, x), f.mul(x, y)), cy2) == target {
                    return Ok((x, y));
                }
            }
        } else if let Some(x) = f.sqrt(f.add(target, cy2)) {
            return Ok((x, y));
        }
    }
    Err(Error::BadPlace("norm equation has no solution".into()))
}

impl SplittingData {
    /// Image of a generator label, before projective normalization.
    pub fn image(&self, label: &GenLabel) -> Result<Mat2> {
        let f = &self.field;
        let m = match (&self.kind, label) {
            (Splitting::Hurwitz { i, j, k, .. }, GenLabel::Quat(x)) => {
                let parts = [
                    mat_scalar(f.from_int(x[0])),
                    mat_scale(f, f.from_int(x[1]), i),
                    mat_scale(f, f.from_int(x[2]), j),
                    mat_scale(f, f.from_int(x[3]), k),
                ];
                parts.iter().fold([0; 4], |acc, p| mat_add(f, &acc, p))
            }
            (Splitting::FunctionField { ctx, z, f: fm, .. }, GenLabel::Exp(e)) => {
                if *e >= ctx.order() {
                    return Err(Error::UnknownLetter(format!("a_{e}")));
                }
                let (u, v) = ctx.to_pair(Fq2::Pow(*e));
                let alpha = mat_add(f, &mat_scalar(f.from_base(u)), &mat_scale(f, f.from_base(v), z));
                mat_add(f, &MAT_ONE, &mat_mul(f, &alpha, fm))
            }
            _ => return Err(Error::Format(format!("generator {label:?} has no image in this splitting"))),
        };
        if mat_det(f, &m) == 0 {
            return Err(Error::NonInvertibleImage(label.text()));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyDirection {
    pub label: String,
    pub valency: usize,
    /// `(from, to, multiplicity)`, sorted.
    pub edges: Vec<(u32, u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyComplex {
    pub field_size: u32,
    pub vertices: Vec<Mat2>,
    pub directions: Vec<CayleyDirection>,
    pub squares: Vec<Square>,
}

pub fn build_cayley(p: &Presentation, s: &SplittingData) -> Result<CayleyComplex> {
    if let (Some(info), Splitting::FunctionField { ctx, .. }) = (&p.field, &s.kind) {
        if *info != ctx.info() {
            return Err(Error::Format("presentation and splitting use different fields".into()));
        }
    }
    let f = &s.field;
    let gens: Vec<Vec<Mat2>> = p
        .directions
        .iter()
        .map(|d| d.generators.iter().map(|g| Ok(projective_canonical(f, &s.image(g)?))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut index: HashMap<Mat2, u32> = HashMap::new();
    let mut vertices = vec![MAT_ONE];
    index.insert(MAT_ONE, 0);
    let mut queue = VecDeque::from([0u32]);
    let mut counts: Vec<BTreeMap<(u32, u32), u32>> = vec![BTreeMap::new(); gens.len()];
    while let Some(u) = queue.pop_front() {
        let x = vertices[u as usize];
        for (v, gs) in gens.iter().enumerate() {
            for g in gs {
                let y = projective_canonical(f, &mat_mul(f, g, &x));
                let w = *index.entry(y).or_insert_with(|| {
                    vertices.push(y);
                    queue.push_back(vertices.len() as u32 - 1);
                    vertices.len() as u32 - 1
                });
                *counts[v].entry((u, w)).or_insert(0) += 1;
            }
        }
    }
    let directions = p
        .directions
        .iter()
        .zip(counts)
        .map(|(d, c)| CayleyDirection {
            label: d.label.clone(),
            valency: d.generators.len(),
            edges: c.into_iter().map(|((a, b), m)| (a, b, m)).collect(),
        })
        .collect();
    Ok(CayleyComplex { field_size: f.size(), vertices, directions, squares: p.squares.clone() })
}

/// Whether every stored square multiplies out to a scalar matrix.
pub fn squares_close(p: &Presentation, s: &SplittingData) -> Result<bool> {
    let f = &s.field;
    for sq in &p.squares {
        let mut acc = MAT_ONE;
        for l in sq.letters() {
            let g = s.image(&p.directions[l.dir].generators[l.gen])?;
            acc = mat_mul(f, &acc, &g);
        }
        if !is_scalar_matrix(&acc) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Image of `gen` in `PGL_2`, canonical form.
pub fn generator_image(p: &Presentation, s: &SplittingData, l: Letter) -> Result<Mat2> {
    Ok(projective_canonical(&s.field, &s.image(&p.directions[l.dir].generators[l.gen])?))
}

const MAGIC: &[u8; 8] = b"LFCAYLEY";
const VERSION: u64 = 1;

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u64(&mut self) -> Result<u64> {
        let end = self.pos + 8;
        let bytes = self.buf.get(self.pos..end).ok_or_else(|| Error::Format("truncated binary".into()))?;
        self.pos = end;
        Ok(u64::from_le_bytes(bytes.try_into().unwrap()))
    }

    fn small(&mut self, cap: u64) -> Result<usize> {
        let v = self.u64()?;
        if v > cap {
            return Err(Error::Format(format!("field value {v} out of range")));
        }
        Ok(v as usize)
    }

    fn bytes(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.pos + n;
        let b = self.buf.get(self.pos..end).ok_or_else(|| Error::Format("truncated binary".into()))?;
        self.pos = end;
        Ok(b)
    }
}

impl CayleyComplex {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// CSR arrays `(row_ptr, col, values)` of direction `v`.
    pub fn csr(&self, v: usize) -> Result<(Vec<u64>, Vec<u64>, Vec<u64>)> {
        let d = self.directions.get(v).ok_or(Error::UnknownDirection(v))?;
        let n = self.vertices.len();
        let mut row_ptr = vec![0u64; n + 1];
        for &(a, _, _) in &d.edges {
            row_ptr[a as usize + 1] += 1;
        }
        for k in 0..n {
            row_ptr[k + 1] += row_ptr[k];
        }
        let col = d.edges.iter().map(|e| e.1 as u64).collect();
        let val = d.edges.iter().map(|e| e.2 as u64).collect();
        Ok((row_ptr, col, val))
    }

    /// Little-endian binary: magic, version, counts, vertex matrices, then per
    /// direction its label, valency and CSR arrays, then the squares.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let put = |out: &mut Vec<u8>, x: u64| out.extend_from_slice(&x.to_le_bytes());
        out.extend_from_slice(MAGIC);
        put(&mut out, VERSION);
        put(&mut out, self.field_size as u64);
        put(&mut out, self.vertices.len() as u64);
        put(&mut out, self.directions.len() as u64);
        for m in &self.vertices {
            for &x in m {
                put(&mut out, x as u64);
            }
        }
        for (v, d) in self.directions.iter().enumerate() {
            put(&mut out, d.label.len() as u64);
            out.extend_from_slice(d.label.as_bytes());
            put(&mut out, d.valency as u64);
            let (row_ptr, col, val) = self.csr(v).expect("own direction");
            put(&mut out, col.len() as u64);
            for x in row_ptr.into_iter().chain(col).chain(val) {
                put(&mut out, x);
            }
        }
        put(&mut out, self.squares.len() as u64);
        for sq in &self.squares {
            for x in <[usize; 8]>::from(*sq) {
                put(&mut out, x as u64);
            }
        }
        out
    }

    pub fn from_binary(buf: &[u8]) -> Result<Self> {
        if buf.len() < 8 || &buf[..8] != MAGIC {
            return Err(Error::Format("not a Cayley complex file".into()));
        }
        let mut r = Reader { buf, pos: 8 };
        if r.u64()? != VERSION {
            return Err(Error::Format("unsupported binary version".into()));
        }
        let cap = buf.len() as u64;
        let field_size = r.small(u32::MAX as u64)? as u32;
        let n = r.small(cap)?;
        let dirs = r.small(cap)?;
        let mut vertices = Vec::with_capacity(n);
        for _ in 0..n {
            let mut m = [0u32; 4];
            for x in m.iter_mut() {
                *x = r.small(u32::MAX as u64)? as u32;
            }
            vertices.push(m);
        }
        let mut directions = Vec::with_capacity(dirs);
        for _ in 0..dirs {
            let len = r.small(cap)?;
            let label = String::from_utf8(r.bytes(len)?.to_vec()).map_err(|e| Error::Format(e.to_string()))?;
            let valency = r.small(cap)?;
            let nnz = r.small(cap)?;
            let row_ptr = (0..=n).map(|_| r.small(nnz as u64)).collect::<Result<Vec<_>>>()?;
            let col = (0..nnz).map(|_| r.small(n as u64)).collect::<Result<Vec<_>>>()?;
            let val = (0..nnz).map(|_| r.small(u32::MAX as u64)).collect::<Result<Vec<_>>>()?;
            let mut edges = Vec::with_capacity(nnz);
            for a in 0..n {
                let (lo, hi) = (row_ptr[a], row_ptr[a + 1]);
                if lo > hi {
                    return Err(Error::Format("row pointers decrease".into()));
                }
                for k in lo..hi {
                    if col[k] >= n {
                        return Err(Error::Format("column index out of range".into()));
                    }
                    edges.push((a as u32, col[k] as u32, val[k] as u32));
                }
            }
            directions.push(CayleyDirection { label, valency, edges });
        }
        let ns = r.small(cap)?;
        let mut squares = Vec::with_capacity(ns);
        for _ in 0..ns {
            let mut a = [0usize; 8];
            for x in a.iter_mut() {
                *x = r.small(cap)?;
            }
            squares.push(Square::try_from(a).map_err(Error::Format)?);
        }
        if r.pos != buf.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(CayleyComplex { field_size, vertices, directions, squares })
    }

    /// Undirected multigraph in DOT; one line per unordered pair and direction.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cayley {\n");
        for v in 0..self.vertices.len() {
            let _ = writeln!(out, "  {v};");
        }
        for d in &self.directions {
            for &(a, b, m) in d.edges.iter().filter(|e| e.0 <= e.1) {
                let _ = writeln!(out, "  {a} -- {b} [label=\"{}\", multiplicity={m}];", d.label);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Parses a polynomial in `t` over `F_q` such as `t^2+1` or `t^3 - t + 2`;
/// integer coefficients are read modulo `p` and must describe codes below `q`.
pub fn parse_poly(s: &str, fq: &Fq) -> Result<Vec<u32>> {
    let bad = || Error::Format(format!("cannot parse polynomial {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut coeffs: BTreeMap<usize, u32> = BTreeMap::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, deg) = match term.find('t') {
            None => (term.parse::<u64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let cs = term[..pos].trim_end_matches('*');
                let coef = if cs.is_empty() { 1 } else { cs.parse::<u64>().map_err(|_| bad())? };
                let ds = &term[pos + 1..];
                let deg = if ds.is_empty() {
                    1
                } else {
                    ds.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (coef, deg)
            }
        };
        if coef >= fq.q() as u64 && fq.e() > 1 {
            return Err(Error::NotInField(coef as u32));
        }
        let c = if fq.e() > 1 { coef as u32 } else { fq.from_int(coef as i64) };
        let c = if neg { fq.neg(c) } else { c };
        let slot = coeffs.entry(deg).or_insert(0);
        *slot = fq.add(*slot, c);
    }
    let deg = *coeffs.keys().max().unwrap();
    let mut out = vec![0u32; deg + 1];
    for (d, c) in coeffs {
        out[d] = c;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_lattice::present_gamma_ff;
    use crate::hurwitz::present_gamma_hurwitz;

    #[test]
    fn hurwitz_splittings() {
        let s = split_hurwitz(5, &[]).unwrap();
        assert!(matches!(s.kind, Splitting::Hurwitz { a: 0, b: 2, .. }));
        let s = split_hurwitz(13, &[]).unwrap();
        let Splitting::Hurwitz { a, b, .. } = s.kind else { panic!() };
        assert_eq!((a * a + b * b) % 13, 12);
        assert!(matches!(split_hurwitz(2, &[]), Err(Error::RamifiedPlace)));
        assert!(matches!(split_hurwitz(5, &[5]), Err(Error::PlaceInS(_))));
    }

    #[test]
    fn ff_splittings() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let s = split_ff(&ctx, &[1, 0, 1], &[1, 2]).unwrap();
        assert_eq!(s.field.size(), 9);
        assert!(matches!(s.kind, Splitting::FunctionField { split: true, .. }));
        // t^3 - t + 1 is irreducible over F_3
        let s = split_ff(&ctx, &[1, 2, 0, 1], &[1, 2]).unwrap();
        assert!(matches!(s.kind, Splitting::FunctionField { split: false, .. }));
        assert!(matches!(split_ff(&ctx, &[2, 0, 1], &[]), Err(Error::Reducible)));
        assert!(matches!(split_ff(&ctx, &[0, 1], &[]), Err(Error::BadPlace(_))));
        assert!(matches!(split_ff(&ctx, &[1, 1], &[2]), Err(Error::BadPlace(_))));
    }

    #[test]
    fn even_splittings() {
        let ctx = FieldCtx::new(2, 2).unwrap();
        // degree 1 and degree 2 moduli exercise both branches
        split_ff(&ctx, &[3, 1], &[1]).unwrap();
        for code in 0..16u32 {
            let pi = vec![code % 4, code / 4, 1];
            match split_ff(&ctx, &pi, &[]) {
                Ok(_) | Err(Error::Reducible) | Err(Error::BadPlace(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn generator_determinants_are_norms() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let s = split_ff(&ctx, &[1, 2, 0, 1], &[]).unwrap();
        let f = &s.field;
        for e in 0..8 {
            let det = mat_det(f, &s.image(&GenLabel::Exp(e)).unwrap());
            let n = ctx.to_base(ctx.norm(Fq2::Pow(e))).unwrap();
            assert_eq!(det, f.sub(1, f.mul(n, f.t_hat())));
        }
    }

    #[test]
    fn small_hurwitz_quotient() {
        let p = present_gamma_hurwitz(&[5], true).unwrap();
        let s = split_hurwitz(11, &[5]).unwrap();
        let c = build_cayley(&p, &s).unwrap();
        assert_eq!(c.num_vertices(), 660);
        let bin = c.to_binary();
        assert_eq!(CayleyComplex::from_binary(&bin).unwrap(), c);
        assert!(CayleyComplex::from_binary(&bin[..bin.len() - 1]).is_err());
    }

    #[test]
    fn ff_quotient_squares_close() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let p = present_gamma_ff(&ctx, &[1, 2]).unwrap();
        let s = split_ff(&ctx, &[1, 0, 1], &[1, 2]).unwrap();
        assert!(squares_close(&p, &s).unwrap());
    }

    #[test]
    fn polynomial_parsing() {
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(parse_poly("t^2+1", &f3).unwrap(), vec![1, 0, 1]);
        assert_eq!(parse_poly("t^3 - t + 2", &f3).unwrap(), vec![2, 2, 0, 1]);
        assert_eq!(parse_poly("2*t + 4", &f3).unwrap(), vec![1, 2]);
        assert!(parse_poly("t^^2", &f3).is_err());
        assert!(parse_poly("", &f3).is_err());
    }
}

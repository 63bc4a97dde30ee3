//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients of `det(x I - A)`, lowest degree first, by Faddeev-LeVerrier.
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for t in 0..n {
                    s += &a[i][t] * &m[t][j];
                }
                if i == j {
                    s += &c[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for t in 0..n {
                tr += &a[i][t] * &m[t][i];
            }
        }
        c[n - k] = -(tr / BigInt::from(k));
    }
    c
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deriv(p: &Poly) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], trim(r));
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    for k in (0..q.len()).rev() {
        let coef = &r[k + db] / &lead;
        if !coef.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &coef * bi;
            }
        }
        q[k] = coef;
    }
    (trim(q), trim(r))
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().unwrap().clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let zero = BigRational::zero();
    trim((0..a.len().max(b.len())).map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).collect())
}

/// Yun's square-free factorization: `f = prod g_i^i`.
fn yun(f: &Poly) -> Vec<(Poly, usize)> {
    let f = monic(f.clone());
    let df = deriv(&f);
    let a0 = gcd(&f, &df);
    let mut b = divmod(&f, &a0).0;
    let c = divmod(&df, &a0).0;
    let mut d = sub(&c, &deriv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        b = divmod(&b, &a).0;
        let c = divmod(&d, &a).0;
        d = sub(&c, &deriv(&b));
        i += 1;
    }
    out
}

fn sturm_chain(g: &Poly) -> Vec<Poly> {
    let mut chain = vec![g.clone(), deriv(g)];
    while chain.last().unwrap().len() > 1 {
        let k = chain.len();
        let (_, r) = divmod(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| sign(&eval(p, x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn to_f64(x: &BigRational) -> f64 {
    let scale = BigInt::from(1u64 << 62);
    let n = (x * BigRational::from_integer(scale.clone())).round().to_integer();
    n.to_string().parse::<f64>().unwrap() / (1u64 << 62) as f64
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Real roots of a square-free polynomial, each isolated to width below `tol`.
/// Sturm counts separate the roots; a sign bisection then narrows each one.
fn isolate(g: &Poly, tol: f64) -> Vec<f64> {
    let chain = sturm_chain(g);
    let lead = g.last().unwrap().abs();
    let bound = g.iter().fold(BigRational::one(), |m, c| {
        let r = c.abs() / &lead;
        if r > m { r } else { m }
    }) + BigRational::one();
    let tol = BigRational::from_float(tol).unwrap();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&chain, &a) - sign_changes(&chain, &b);
        if count == 0 {
            continue;
        }
        if count > 1 {
            let mid = (&a + &b) / &two;
            stack.push((a, mid.clone()));
            stack.push((mid, b));
            continue;
        }
        // exactly one root in (a, b]
        let (mut lo, mut hi) = (a, b);
        let sb = sign(&eval(g, &hi));
        if sb == 0 {
            out.push(to_f64(&hi));
            continue;
        }
        let root = loop {
            if &hi - &lo < tol {
                break (&lo + &hi) / &two;
            }
            let mid = (&lo + &hi) / &two;
            match sign(&eval(g, &mid)) {
                0 => break mid,
                s if s == sb => hi = mid,
                _ => lo = mid,
            }
        };
        out.push(to_f64(&root));
    }
    out
}

/// Real roots of an integer polynomial with multiplicity, descending.
pub fn real_roots(c: &[BigInt], tol: f64) -> Vec<f64> {
    let f: Poly = trim(c.iter().map(|x| BigRational::from_integer(x.clone())).collect());
    if f.len() <= 1 {
        return vec![];
    }
    let mut roots = Vec::new();
    for (g, mult) in yun(&f) {
        for r in isolate(&g, tol) {
            roots.extend(std::iter::repeat_n(r, mult));
        }
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// `F_p[Z]` modulo `Z^2 - c` (odd `p`) or `Z^2 + Z + 1` (`p = 2`), as pairs `u + v Z`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeQuadratic {
    pub p: u32,
    pub c: u32,
}

impl PrimeQuadratic {
    pub fn new(p: u32) -> Self {
        let c = if p == 2 {
            1
        } else {
            (1..p).find(|&c| (1..p).all(|x| x * x % p != c)).unwrap()
        };
        PrimeQuadratic { p, c }
    }

    pub fn mul(&self, a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        let p = self.p as u64;
        let (a0, a1, b0, b1) = (a.0 as u64, a.1 as u64, b.0 as u64, b.1 as u64);
        let zz = a1 * b1 % p;
        if self.p == 2 {
            // Z^2 = Z + 1
            (((a0 * b0 + zz) % p) as u32, ((a0 * b1 + a1 * b0 + zz) % p) as u32)
        } else {
            (((a0 * b0 + zz * self.c as u64) % p) as u32, ((a0 * b1 + a1 * b0) % p) as u32)
        }
    }

    pub fn add(&self, a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        ((a.0 + b.0) % self.p, (a.1 + b.1) % self.p)
    }

    pub fn pow(&self, a: (u32, u32), mut k: u64) -> (u32, u32) {
        let (mut acc, mut base) = ((1, 0), a);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn order(&self, a: (u32, u32)) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != (1, 0) {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The generator of least code `u + v p`.
    pub fn least_generator(&self) -> (u32, u32) {
        let n = (self.p as u64).pow(2) - 1;
        (1..self.p * self.p)
            .map(|code| (code % self.p, code / self.p))
            .find(|&x| self.order(x) == n)
            .unwrap()
    }
}

/// Number of maps `[-1,1]^p -> [-1,1]^n` whose coordinates are constants
/// `+-1` or signed input coordinates, each input used exactly once.
pub fn count_face_maps(n: usize, p: usize) -> u128 {
    let choices = 2 + 2 * p;
    let total = choices.pow(n as u32);
    let mut count = 0;
    for mut code in 0..total {
        let mut used = vec![0; p];
        for _ in 0..n {
            let c = code % choices;
            code /= choices;
            if c >= 2 {
                used[(c - 2) / 2] += 1;
            }
        }
        if used.iter().all(|&u| u == 1) {
            count += 1;
        }
    }
    count
}

//! Finite fields `F_q` and `F_{q^2}` in discrete-logarithm form.
//!
//! `F_q = F_p[w]/(f)` for the least monic irreducible `f` of degree `e`;
//! elements are coded as integers in `0..q` whose base-`p` digits are the
//! coefficients of `1, w, w^2, ...`. The quadratic extension is
//! `F_q[Z]/(Z^2 - c)` for odd `q` and `F_q[Z]/(Z^2 + Z + c)` for even `q`,
//! coded as `u + v*q` for `u + vZ`. Nonzero elements of `F_{q^2}` are handled
//! as exponents of a fixed generator `delta`, with a Zech table making
//! `1 + delta^m` a lookup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible `q^2` for a full exponent table.
pub const MAX_TABLE: u64 = 1 << 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = code % p;
        code /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// `a * b mod modulus` for coefficient vectors over `F_p`; `modulus` monic.
fn poly_mulmod_p(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for top in (deg..prod.len()).rev() {
        let coef = prod[top];
        if coef == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate() {
            let idx = top - deg + k;
            prod[idx] = (prod[idx] + (p as u64 - coef) * m as u64) % p as u64;
        }
    }
    prod.truncate(deg);
    prod.resize(deg, 0);
    prod.into_iter().map(|x| x as u32).collect()
}

/// Remainder of `a` modulo a monic `b` over `F_p`.
fn poly_rem_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let top = r.len() - 1;
        let coef = r[top];
        if coef != 0 {
            for (k, &m) in b.iter().enumerate() {
                let idx = top - db + k;
                r[idx] = (r[idx] + (p as u64 - coef) * m as u64) % p as u64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

fn is_irreducible_p(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut g = digits(code as u32, p, d);
            g.push(1);
            if poly_rem_p(f, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// The field `F_q`, `q = p^e`, with log/exp tables.
#[derive(Clone, Debug)]
pub struct Fq {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Fq {
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidExponent);
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64.saturating_mul(q64) > MAX_TABLE {
            return Err(Error::TableTooLarge(q64.saturating_mul(q64)));
        }
        let q = q64 as u32;
        let len = e as usize;
        let modulus = (0..q)
            .map(|code| {
                let mut f = digits(code, p, len);
                f.push(1);
                f
            })
            .find(|f| is_irreducible_p(f, p))
            .expect("an irreducible polynomial of every degree exists");

        let mut fq = Fq { p, e, q, modulus, exp: Vec::new(), log: Vec::new() };
        let order = q - 1;
        for g in 1..q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..order {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = fq.slow_mul(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![u32::MAX; q as usize];
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                fq.exp = exp;
                fq.log = log;
                return Ok(fq);
            }
        }
        unreachable!("F_q^x is cyclic")
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let len = self.e as usize;
        let r = poly_mulmod_p(&digits(a, self.p, len), &digits(b, self.p, len), &self.modulus, self.p);
        undigits(&r, self.p)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial of `F_q` over `F_p`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// Discrete log of a nonzero element w.r.t. the table generator.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize].is_multiple_of(2)
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        if self.p == 2 {
            // n is odd, so halving is multiplication by (n+1)/2.
            return Some(self.exp[((l as u64 * (n as u64).div_ceil(2)) % n as u64) as usize]);
        }
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    /// Absolute trace `a + a^p + ... + a^{p^{e-1}}`, an element of `F_p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.e {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    /// Canonical embedding of an integer (its residue mod p).
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

/// Result of a Zech lookup: `1 + delta^m = delta^z`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zech {
    Log(u32),
    /// `delta^m = -1`, so `1 + delta^m = 0`.
    MinusOne,
}

/// Element of `F_{q^2}` in log form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fq2 {
    Zero,
    Pow(u32),
}

impl Fq2 {
    pub const ONE: Fq2 = Fq2::Pow(0);

    pub fn is_zero(self) -> bool {
        self == Fq2::Zero
    }
}

/// `F_{q^2}` with a fixed generator `delta` and its Zech table.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    fq: Fq,
    c: u32,
    delta: (u32, u32),
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<Zech>,
}

/// Serializable description of a [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub e: u32,
    pub c: u32,
    /// `[N(delta), -Tr(delta), 1]` as base-field codes.
    pub delta_min_poly: [u32; 3],
    /// `delta = u + vZ` as `[u, v]`.
    pub delta: [u32; 2],
}

impl FieldCtx {
    /// Builds the context with the least generator in the order on
    /// `(coefficient of Z, constant)`.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        let fq = Fq::new(p, e)?;
        let c = Self::default_c(&fq);
        let q = fq.q();
        let mut ctx = Self::bare(fq, c);
        for code in 0..q * q {
            let d = (code % q, code / q);
            if ctx.fill_tables(d) {
                return Ok(ctx);
            }
        }
        unreachable!("F_{{q^2}}^x is cyclic")
    }

    /// Builds the context with a caller-chosen generator `u + vZ`.
    pub fn with_delta(p: u32, e: u32, delta: (u32, u32)) -> Result<Self> {
        let fq = Fq::new(p, e)?;
        let q = fq.q();
        if delta.0 >= q || delta.1 >= q {
            return Err(Error::NotInField(delta.0.max(delta.1)));
        }
        let c = Self::default_c(&fq);
        let mut ctx = Self::bare(fq, c);
        if ctx.fill_tables(delta) {
            Ok(ctx)
        } else {
            Err(Error::NotAGenerator(delta))
        }
    }

    pub fn from_info(info: &FieldInfo) -> Result<Self> {
        let ctx = Self::with_delta(info.p, info.e, (info.delta[0], info.delta[1]))?;
        if ctx.c != info.c {
            return Err(Error::Format(format!(
                "field constant {} differs from the canonical choice {}",
                info.c, ctx.c
            )));
        }
        Ok(ctx)
    }

    fn default_c(fq: &Fq) -> u32 {
        if fq.is_even() {
            (0..fq.q()).find(|&c| fq.trace(c) == 1).expect("trace is onto")
        } else {
            (0..fq.q()).find(|&c| !fq.is_square(c)).expect("odd q has non-squares")
        }
    }

    fn bare(fq: Fq, c: u32) -> Self {
        FieldCtx { fq, c, delta: (0, 0), order: 0, exp: Vec::new(), log: Vec::new(), zech: Vec::new() }
    }

    /// Populates exp/log/zech for `delta`; false when it is not a generator.
    fn fill_tables(&mut self, delta: (u32, u32)) -> bool {
        let q = self.fq.q();
        let n = q * q - 1;
        let d = self.pair_code(delta);
        let mut exp = Vec::with_capacity(n as usize);
        let mut x = 1u32;
        for k in 0..n {
            if k > 0 && x == 1 {
                return false;
            }
            exp.push(x);
            x = self.code_mul(x, d);
        }
        if x != 1 {
            return false;
        }
        let mut log = vec![u32::MAX; (q * q) as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let zech = exp
            .iter()
            .map(|&v| {
                let s = self.code_add(v, 1);
                if s == 0 {
                    Zech::MinusOne
                } else {
                    Zech::Log(log[s as usize])
                }
            })
            .collect();
        self.delta = delta;
        self.order = n;
        self.exp = exp;
        self.log = log;
        self.zech = zech;
        true
    }

    fn pair_code(&self, (u, v): (u32, u32)) -> u32 {
        u + v * self.fq.q()
    }

    /// `(u, v)` of an element code `u + v*q`.
    pub fn code_pair(&self, code: u32) -> (u32, u32) {
        (code % self.fq.q(), code / self.fq.q())
    }

    /// Product of `u + vZ` and `u' + v'Z` in the polynomial model.
    pub fn pair_mul(&self, a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        let f = &self.fq;
        let uu = f.mul(a.0, b.0);
        let vv = f.mul(a.1, b.1);
        let cross = f.add(f.mul(a.0, b.1), f.mul(a.1, b.0));
        let u = f.add(uu, f.mul(self.c, vv));
        if f.is_even() {
            // Z^2 = Z + c
            (u, f.add(cross, vv))
        } else {
            (u, cross)
        }
    }

    pub fn pair_add(&self, a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        (self.fq.add(a.0, b.0), self.fq.add(a.1, b.1))
    }

    fn code_mul(&self, a: u32, b: u32) -> u32 {
        let r = self.pair_mul(self.code_pair(a), self.code_pair(b));
        self.pair_code(r)
    }

    fn code_add(&self, a: u32, b: u32) -> u32 {
        let r = self.pair_add(self.code_pair(a), self.code_pair(b));
        self.pair_code(r)
    }

    pub fn base(&self) -> &Fq {
        &self.fq
    }

    pub fn p(&self) -> u32 {
        self.fq.p()
    }

    pub fn e(&self) -> u32 {
        self.fq.e()
    }

    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn is_even(&self) -> bool {
        self.fq.is_even()
    }

    /// `q^2 - 1`, the size of the exponent group.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn delta(&self) -> (u32, u32) {
        self.delta
    }

    /// Half the exponent group; `delta^half = -1` for odd `q`.
    pub fn half(&self) -> u32 {
        self.order / 2
    }

    pub fn reduce(&self, i: i64) -> u32 {
        i.rem_euclid(self.order as i64) as u32
    }

    pub fn zech(&self, m: u32) -> Zech {
        self.zech[(m % self.order) as usize]
    }

    pub fn zech_table(&self) -> &[Zech] {
        &self.zech
    }

    pub fn norm_exponent(&self, i: u32) -> u32 {
        ((i as u64 * (self.q() as u64 + 1)) % self.order as u64) as u32
    }

    pub fn frob_shift(&self, i: u32) -> u32 {
        ((i as u64 * self.q() as u64) % self.order as u64) as u32
    }

    pub fn delta_min_poly(&self) -> [u32; 3] {
        let d = self.pow(1);
        let tr = self.add(d, self.frob(d));
        let nm = self.norm(d);
        let f = &self.fq;
        let tr = self.to_base(tr).expect("trace lies in F_q");
        let nm = self.to_base(nm).expect("norm lies in F_q");
        [nm, f.neg(tr), 1]
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p(),
            e: self.e(),
            c: self.c,
            delta_min_poly: self.delta_min_poly(),
            delta: [self.delta.0, self.delta.1],
        }
    }

    pub fn pow(&self, i: i64) -> Fq2 {
        Fq2::Pow(self.reduce(i))
    }

    pub fn mul(&self, a: Fq2, b: Fq2) -> Fq2 {
        match (a, b) {
            (Fq2::Pow(i), Fq2::Pow(j)) => Fq2::Pow(((i as u64 + j as u64) % self.order as u64) as u32),
            _ => Fq2::Zero,
        }
    }

    pub fn inv(&self, a: Fq2) -> Option<Fq2> {
        match a {
            Fq2::Zero => None,
            Fq2::Pow(i) => Some(Fq2::Pow((self.order - i) % self.order)),
        }
    }

    pub fn neg(&self, a: Fq2) -> Fq2 {
        match a {
            Fq2::Pow(i) if !self.is_even() => Fq2::Pow((i + self.half()) % self.order),
            other => other,
        }
    }

    pub fn add(&self, a: Fq2, b: Fq2) -> Fq2 {
        match (a, b) {
            (Fq2::Zero, x) | (x, Fq2::Zero) => x,
            (Fq2::Pow(i), Fq2::Pow(j)) => {
                let m = (j + self.order - i) % self.order;
                match self.zech(m) {
                    Zech::MinusOne => Fq2::Zero,
                    Zech::Log(z) => Fq2::Pow((i + z) % self.order),
                }
            }
        }
    }

    pub fn sub(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.add(a, self.neg(b))
    }

    /// The conjugation `x -> x^q`.
    pub fn frob(&self, a: Fq2) -> Fq2 {
        match a {
            Fq2::Zero => Fq2::Zero,
            Fq2::Pow(i) => Fq2::Pow(self.frob_shift(i)),
        }
    }

    pub fn norm(&self, a: Fq2) -> Fq2 {
        match a {
            Fq2::Zero => Fq2::Zero,
            Fq2::Pow(i) => Fq2::Pow(self.norm_exponent(i)),
        }
    }

    /// Whether `a` lies in the base field `F_q`.
    pub fn in_base(&self, a: Fq2) -> bool {
        match a {
            Fq2::Zero => true,
            Fq2::Pow(i) => i % (self.q() + 1) == 0,
        }
    }

    pub fn from_base(&self, code: u32) -> Result<Fq2> {
        if code >= self.q() {
            return Err(Error::NotInField(code));
        }
        Ok(self.from_code(code))
    }

    pub fn to_base(&self, a: Fq2) -> Option<u32> {
        let (u, v) = self.to_pair(a);
        (v == 0).then_some(u)
    }

    pub fn from_code(&self, code: u32) -> Fq2 {
        if code == 0 {
            Fq2::Zero
        } else {
            Fq2::Pow(self.log[code as usize])
        }
    }

    pub fn from_pair(&self, pair: (u32, u32)) -> Fq2 {
        self.from_code(self.pair_code(pair))
    }

    pub fn to_pair(&self, a: Fq2) -> (u32, u32) {
        match a {
            Fq2::Zero => (0, 0),
            Fq2::Pow(i) => self.code_pair(self.exp[i as usize]),
        }
    }
}

pub fn build_field_context(p: u32, e: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, e)
}

pub fn zech(ctx: &FieldCtx, m: u32) -> Zech {
    ctx.zech(m)
}

pub fn norm_exponent(ctx: &FieldCtx, i: u32) -> u32 {
    ctx.norm_exponent(i)
}

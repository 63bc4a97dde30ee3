//! Arithmetic lattices over `F_q(t)` in the concrete exponent model: the
//! quaternion algebra `D = L{F}/(F^2 = t)` with `L = F_{q^2}(t)`, generator
//! cosets per rational place, and the presentations of `Gamma` and `Lambda`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite_field::{FieldCtx, Fq2, Zech};
use crate::presentation::{
    CentralityCertificate, Direction, FinitePart, GenLabel, Letter, Presentation, Square, WordLetter,
};

/// Laurent polynomial in `t` over `F_{q^2}`; `coeffs[k]` multiplies `t^(low + k)`.
/// Normalized: no zero coefficient at either end, and the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<Fq2>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(c: Fq2, deg: i32) -> Self {
        LaurentPoly { low: deg, coeffs: vec![c] }.normalized()
    }

    pub fn constant(c: Fq2) -> Self {
        Self::monomial(c, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest and highest degree of a nonzero polynomial.
    pub fn degrees(&self) -> Option<(i32, i32)> {
        (!self.is_zero()).then(|| (self.low, self.low + self.coeffs.len() as i32 - 1))
    }

    pub fn coeff(&self, deg: i32) -> Fq2 {
        let k = deg - self.low;
        if k < 0 {
            return Fq2::Zero;
        }
        self.coeffs.get(k as usize).copied().unwrap_or(Fq2::Zero)
    }

    /// `(degree, coefficient)` of the nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Fq2)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.low + k as i32, c))
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last() == Some(&Fq2::Zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            return Self::zero();
        }
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        self
    }

    pub fn add(&self, other: &Self, ctx: &FieldCtx) -> Self {
        match (self.degrees(), other.degrees()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a0, a1)), Some((b0, b1))) => {
                let (lo, hi) = (a0.min(b0), a1.max(b1));
                let coeffs = (lo..=hi).map(|d| ctx.add(self.coeff(d), other.coeff(d))).collect();
                LaurentPoly { low: lo, coeffs }.normalized()
            }
        }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect() }
    }

    pub fn mul(&self, other: &Self, ctx: &FieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fq2::Zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(coeffs[i + j], ctx.mul(a, b));
            }
        }
        LaurentPoly { low: self.low + other.low, coeffs }.normalized()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Coefficientwise Frobenius `x -> x^q`.
    pub fn sigma(&self, ctx: &FieldCtx) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|&c| ctx.frob(c)).collect() }
    }

    /// All coefficients lie in `F_q`.
    pub fn is_over_base(&self, ctx: &FieldCtx) -> bool {
        self.coeffs.iter().all(|&c| ctx.in_base(c))
    }

    /// Human-readable form; base-field coefficients print as their codes,
    /// others as powers of `delta`.
    pub fn display(&self, ctx: &FieldCtx) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (d, c) in self.terms() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let cs = match ctx.to_base(c) {
                Some(code) => code.to_string(),
                None => match c {
                    Fq2::Pow(i) => format!("δ^{i}"),
                    Fq2::Zero => unreachable!(),
                },
            };
            match d {
                0 => out.push_str(&cs),
                1 => {
                    let _ = write!(out, "{cs}t");
                }
                _ => {
                    let _ = write!(out, "{cs}t^{d}");
                }
            }
        }
        out
    }
}

/// Element `a + bF` of `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuatLaurent {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
}

impl QuatLaurent {
    pub fn one() -> Self {
        QuatLaurent { a: LaurentPoly::constant(Fq2::ONE), b: LaurentPoly::zero() }
    }

    pub fn scalar(c: Fq2) -> Self {
        QuatLaurent { a: LaurentPoly::constant(c), b: LaurentPoly::zero() }
    }

    /// `x + yF` with constant `x, y`.
    pub fn from_consts(x: Fq2, y: Fq2) -> Self {
        QuatLaurent { a: LaurentPoly::constant(x), b: LaurentPoly::constant(y) }
    }

    /// `(a1 + b1 F)(a2 + b2 F) = (a1 a2 + b1 s(b2) t) + (a1 b2 + b1 s(a2)) F`.
    pub fn mul(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let a = self.a.mul(&other.a, ctx).add(&self.b.mul(&other.b.sigma(ctx), ctx).shift(1), ctx);
        let b = self.a.mul(&other.b, ctx).add(&self.b.mul(&other.a.sigma(ctx), ctx), ctx);
        QuatLaurent { a, b }
    }

    /// Canonical involution `s(a) - bF`.
    pub fn conj(&self, ctx: &FieldCtx) -> Self {
        QuatLaurent { a: self.a.sigma(ctx), b: self.b.neg(ctx) }
    }

    /// `N(a) - N(b) t`.
    pub fn nrd(&self, ctx: &FieldCtx) -> LaurentPoly {
        let na = self.a.mul(&self.a.sigma(ctx), ctx);
        let nb = self.b.mul(&self.b.sigma(ctx), ctx).shift(1);
        na.add(&nb.neg(ctx), ctx)
    }

    pub fn is_central(&self, ctx: &FieldCtx) -> bool {
        self.b.is_zero() && self.a.is_over_base(ctx)
    }

    pub fn display(&self, ctx: &FieldCtx) -> String {
        format!("({}) + ({})F", self.a.display(ctx), self.b.display(ctx))
    }
}

/// A letter of a word in `Lambda`: `a_i`, `d = [delta]`, `s = [F]` and inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FfLetter {
    A(u32),
    AInv(u32),
    D,
    DInv,
    S,
    SInv,
}

impl FfLetter {
    /// Representative in `D^x`; inverses are taken up to central scalars.
    pub fn value(self, ctx: &FieldCtx) -> Result<QuatLaurent> {
        let gen = |i: u32| {
            if i >= ctx.order() {
                Err(Error::UnknownLetter(format!("a_{i}")))
            } else {
                Ok(Fq2::Pow(i))
            }
        };
        Ok(match self {
            FfLetter::A(i) => QuatLaurent::from_consts(Fq2::ONE, gen(i)?),
            FfLetter::AInv(i) => QuatLaurent::from_consts(Fq2::ONE, ctx.neg(gen(i)?)),
            FfLetter::D => QuatLaurent::scalar(ctx.pow(1)),
            FfLetter::DInv => QuatLaurent::scalar(ctx.pow(-1)),
            FfLetter::S | FfLetter::SInv => QuatLaurent::from_consts(Fq2::Zero, Fq2::ONE),
        })
    }
}

pub type FfCertificate = CentralityCertificate<LaurentPoly, QuatLaurent>;

/// Multiplies the word out in `D`; central products are trivial in `PGL`.
pub fn verify_word_ff(ctx: &FieldCtx, word: &[FfLetter]) -> Result<FfCertificate> {
    let mut acc = QuatLaurent::one();
    for &l in word {
        acc = acc.mul(&l.value(ctx)?, ctx);
    }
    Ok(if acc.is_central(ctx) {
        CentralityCertificate::Central(acc.a)
    } else {
        CentralityCertificate::NotCentral(acc)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceCoset {
    pub tau: u32,
    /// Exponents `i` with `delta^{-i(q+1)} = tau`, ascending.
    pub coset: Vec<u32>,
}

pub fn place_coset(ctx: &FieldCtx, tau: u32) -> Result<PlaceCoset> {
    if tau == 0 {
        return Err(Error::ZeroPlace);
    }
    let t = match ctx.from_base(tau)? {
        Fq2::Pow(t) => t,
        Fq2::Zero => return Err(Error::ZeroPlace),
    };
    let q = ctx.q();
    // t = (q+1) s, and i(q+1) = -t forces i = -s mod (q-1).
    let s = (t / (q + 1)) as i64;
    let r = (-s).rem_euclid(q as i64 - 1) as u32;
    let coset = (0..=q).map(|k| r + k * (q - 1)).collect();
    Ok(PlaceCoset { tau, coset })
}

/// The exponents `(k, l)` with `a_i a_j = a_k a_l`.
pub fn kl(ctx: &FieldCtx, i: u32, j: u32) -> Result<(u32, u32)> {
    let (n, q) = (ctx.order() as i64, ctx.q() as i64);
    let (i64_, j64) = (i as i64, j as i64);
    let x = match ctx.zech(ctx.reduce(j64 - i64_)) {
        Zech::Log(x) => x as i64,
        Zech::MinusOne => return Err(Error::SameNormClass { i, j }),
    };
    if (i64_ - j64).rem_euclid(q - 1) == 0 {
        return Err(Error::SameNormClass { i, j });
    }
    let y = x + i64_ - j64;
    let l = (i64_ - x * (q - 1)).rem_euclid(n) as u32;
    let k = (j64 - y * (q - 1)).rem_euclid(n) as u32;
    Ok((k, l))
}

fn exponent_of(p: &Presentation, l: Letter) -> u32 {
    match p.directions[l.dir].generators[l.gen] {
        GenLabel::Exp(i) => i,
        ref other => panic!("generator {other:?} is not an exponent label"),
    }
}

/// The letters `a_{g1} a_{g2} a_{g3} a_{g4}` of a stored square.
pub fn square_word(p: &Presentation, sq: &Square) -> Vec<FfLetter> {
    sq.letters().iter().map(|&l| FfLetter::A(exponent_of(p, l))).collect()
}

fn ff_letter(p: &Presentation, l: &WordLetter) -> FfLetter {
    match *l {
        WordLetter::D => FfLetter::D,
        WordLetter::DInv => FfLetter::DInv,
        WordLetter::S => FfLetter::S,
        WordLetter::SInv => FfLetter::SInv,
        WordLetter::Gen(v, g) => FfLetter::A(exponent_of(p, Letter::new(v, g))),
        WordLetter::GenInv(v, g) => FfLetter::AInv(exponent_of(p, Letter::new(v, g))),
    }
}

fn require_central(ctx: &FieldCtx, word: &[FfLetter], what: impl Fn() -> String) -> Result<()> {
    match verify_word_ff(ctx, word)? {
        CentralityCertificate::Central(_) => Ok(()),
        CentralityCertificate::NotCentral(x) => {
            Err(Error::RelationNotCentral(format!("{}: product {}", what(), x.display(ctx))))
        }
    }
}

fn cosets(ctx: &FieldCtx, s0: &[u32]) -> Result<Vec<PlaceCoset>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &tau in s0 {
        if !seen.insert(tau) {
            return Err(Error::BadPlace(format!("place {tau} listed twice")));
        }
        out.push(place_coset(ctx, tau)?);
    }
    if out.is_empty() {
        return Err(Error::BadPlace("no places given".into()));
    }
    Ok(out)
}

/// Presentation of `Gamma` for the places `S0 \subset F_q^x`, one direction per place.
pub fn present_gamma_ff(ctx: &FieldCtx, s0: &[u32]) -> Result<Presentation> {
    let cs = cosets(ctx, s0)?;
    let mut index: BTreeMap<u32, Letter> = BTreeMap::new();
    let mut directions = Vec::with_capacity(cs.len());
    for (v, pc) in cs.iter().enumerate() {
        for (g, &i) in pc.coset.iter().enumerate() {
            index.insert(i, Letter::new(v, g));
        }
    }
    let inverse_exp = |i: u32| if ctx.is_even() { i } else { (i + ctx.half()) % ctx.order() };
    for pc in &cs {
        let involution = pc.coset.iter().map(|&i| index[&inverse_exp(i)].gen).collect();
        directions.push(Direction {
            label: pc.tau.to_string(),
            valency: pc.coset.len(),
            generators: pc.coset.iter().map(|&i| GenLabel::Exp(i)).collect(),
            involution,
        });
    }
    let mut p = Presentation::new(directions);
    p.field = Some(ctx.info());

    let mut squares = BTreeSet::new();
    for v in 0..cs.len() {
        for w in v + 1..cs.len() {
            for &i in &cs[v].coset {
                for &j in &cs[w].coset {
                    let (k, l) = kl(ctx, i, j)?;
                    // a_i a_j a_l^{-1} a_k^{-1} = 1
                    let word = [index[&i], index[&j], index[&inverse_exp(l)], index[&inverse_exp(k)]];
                    let sq = Square::from_letters(word)?;
                    squares.insert(p.canonicalize(&sq)?);
                }
            }
        }
    }
    p.squares = squares.into_iter().collect();
    p.squares.par_iter().try_for_each(|sq| {
        require_central(ctx, &square_word(&p, sq), || format!("square {:?}", <[usize; 8]>::from(*sq)))
    })?;
    Ok(p)
}

/// Exponent of the distinguished generator `a_tau = [1 + alpha_0 F]`.
pub fn a_tau(ctx: &FieldCtx, tau: u32) -> Result<u32> {
    let f = ctx.base();
    let tau_inv = f.inv(tau).ok_or(Error::ZeroPlace)?;
    let alpha0 = if f.is_square(tau) {
        ctx.from_base(f.sqrt(tau_inv).expect("tau^-1 is a square"))?
    } else {
        let dq1 = ctx.to_base(ctx.pow(ctx.q() as i64 + 1)).expect("norm lies in F_q");
        let rhs = f.mul(dq1, tau_inv);
        let alpha1 = ctx.from_base(f.sqrt(rhs).expect("delta^{q+1}/tau is a square"))?;
        ctx.mul(alpha1, ctx.pow(-1))
    };
    match alpha0 {
        Fq2::Pow(e) => Ok(e),
        Fq2::Zero => unreachable!("alpha_0 is a unit"),
    }
}

/// Presentation of `Lambda`: `Gamma` plus the dihedral part `<d, s>` and its action.
pub fn present_lambda_ff(ctx: &FieldCtx, s0: &[u32]) -> Result<Presentation> {
    let mut p = present_gamma_ff(ctx, s0)?;
    let q = ctx.q();
    let n = ctx.order();
    let mut pos: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for (v, dir) in p.directions.iter().enumerate() {
        for (g, lab) in dir.generators.iter().enumerate() {
            if let GenLabel::Exp(i) = lab {
                pos.insert(*i, (v, g));
            }
        }
    }
    let at = |i: u32| pos[&(i % n)];

    let mut rels: Vec<Vec<WordLetter>> = vec![
        vec![WordLetter::D; q as usize + 1],
        vec![WordLetter::S, WordLetter::S],
        vec![WordLetter::S, WordLetter::D, WordLetter::S, WordLetter::D],
    ];
    for (v, dir) in p.directions.iter().enumerate() {
        for (g, lab) in dir.generators.iter().enumerate() {
            let GenLabel::Exp(i) = *lab else { unreachable!() };
            let (_, gq) = at(ctx.frob_shift(i));
            rels.push(vec![WordLetter::S, WordLetter::Gen(v, g), WordLetter::S, WordLetter::GenInv(v, gq)]);
            let (_, gd) = at(ctx.reduce(i as i64 + 1 - q as i64));
            rels.push(vec![WordLetter::D, WordLetter::Gen(v, g), WordLetter::DInv, WordLetter::GenInv(v, gd)]);
            rels.push(vec![WordLetter::Gen(v, dir.involution[g]), WordLetter::Gen(v, g)]);
        }
    }
    let mut distinguished = Vec::new();
    for (v, dir) in p.directions.iter().enumerate() {
        let tau: u32 = dir.label.parse().expect("ff direction labels are places");
        let (dv, g) = at(a_tau(ctx, tau)?);
        debug_assert_eq!(dv, v);
        distinguished.push(g);
        let a = WordLetter::Gen(v, g);
        if !ctx.is_even() {
            let h = (q as usize).div_ceil(2);
            let mut w = vec![WordLetter::D; h];
            w.push(a);
            w.extend(std::iter::repeat_n(WordLetter::D, h));
            w.push(a);
            rels.push(w);
        }
        if ctx.base().is_square(tau) {
            rels.push(vec![WordLetter::S, a, WordLetter::S, WordLetter::GenInv(v, g)]);
        } else {
            rels.push(vec![
                WordLetter::S,
                WordLetter::D,
                a,
                WordLetter::DInv,
                WordLetter::SInv,
                WordLetter::GenInv(v, g),
            ]);
        }
    }
    for rel in &rels {
        let word: Vec<FfLetter> = rel.iter().map(|l| ff_letter(&p, l)).collect();
        require_central(ctx, &word, || format!("relation {rel:?}"))?;
    }
    p.finite_part = Some(FinitePart {
        name: "dihedral".into(),
        order: 2 * (q as u64 + 1),
        distinguished,
        relations: rels,
    });
    Ok(p)
}

/// Translates a finite-part relation into algebra letters.
pub fn relation_word(p: &Presentation, rel: &[WordLetter]) -> Vec<FfLetter> {
    rel.iter().map(|l| ff_letter(p, l)).collect()
}

//! Lipschitz and Hurwitz quaternions over the integers, the generator sets
//! `PA_p` of norm-`p` elements, and the simply transitive lattices they generate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite_field::is_prime;
use crate::presentation::{
    quat_text, CentralityCertificate, Direction, FinitePart, GenLabel, Letter, Presentation, Square,
};

/// `(x0 + x1 i + x2 j + x3 k)`, halved when `denom2` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion {
    pub c: [i64; 4],
    pub denom2: bool,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { c: [1, 0, 0, 0], denom2: false };
    pub const I: Quaternion = Quaternion { c: [0, 1, 0, 0], denom2: false };
    pub const J: Quaternion = Quaternion { c: [0, 0, 1, 0], denom2: false };
    pub const K: Quaternion = Quaternion { c: [0, 0, 0, 1], denom2: false };

    pub fn new(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        Quaternion { c: [x0, x1, x2, x3], denom2: false }
    }

    /// `rho = (1 + i + j + k)/2`.
    pub fn rho() -> Self {
        Quaternion { c: [1, 1, 1, 1], denom2: true }
    }

    fn from_doubled(v: [i64; 4]) -> Self {
        if v.iter().all(|x| x % 2 == 0) {
            Quaternion { c: v.map(|x| x / 2), denom2: false }
        } else {
            Quaternion { c: v, denom2: true }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (self.c, o.c);
        let r = [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ];
        match (self.denom2, o.denom2) {
            (false, false) => Quaternion { c: r, denom2: false },
            (true, true) => {
                debug_assert!(r.iter().all(|x| x % 2 == 0), "product leaves the Hurwitz order");
                Self::from_doubled(r.map(|x| x / 2))
            }
            _ => Self::from_doubled(r),
        }
    }

    pub fn conj(&self) -> Self {
        Quaternion { c: [self.c[0], -self.c[1], -self.c[2], -self.c[3]], denom2: self.denom2 }
    }

    pub fn neg(&self) -> Self {
        Quaternion { c: self.c.map(|x| -x), denom2: self.denom2 }
    }

    pub fn nrd(&self) -> i64 {
        let s: i64 = self.c.iter().map(|x| x * x).sum();
        if self.denom2 {
            s / 4
        } else {
            s
        }
    }

    /// Reduced trace `2 x0`.
    pub fn trace(&self) -> i64 {
        if self.denom2 {
            self.c[0]
        } else {
            2 * self.c[0]
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// Sign making the first nonzero coordinate positive, and the result.
    pub fn canonical_sign(&self) -> (Self, i64) {
        match self.c.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => (self.neg(), -1),
            _ => (*self, 1),
        }
    }

    pub fn canonical(&self) -> Self {
        self.canonical_sign().0
    }

    /// Exact division by an integer, if it stays in the same order.
    pub fn div_int(&self, n: i64) -> Option<Self> {
        self.c.iter().all(|x| x % n == 0).then(|| Quaternion { c: self.c.map(|x| x / n), denom2: self.denom2 })
    }

    /// Coordinates mod 2 of a Lipschitz quaternion.
    pub fn class_mod2(&self) -> [u8; 4] {
        debug_assert!(!self.denom2);
        self.c.map(|x| x.rem_euclid(2) as u8)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom2 {
            write!(f, "({})/2", quat_text(&self.c))
        } else {
            f.write_str(&quat_text(&self.c))
        }
    }
}

/// Unit used to move `A_p` into the class of `1` or `1 + j + k` when `p = 3 mod 4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrimedUnit {
    /// `A'_p = A_p i`; classes `1` and `1 + j + k`.
    #[default]
    I,
    /// `A'_p = A_p k`; classes `1` and `1 + i + j`.
    K,
}

impl PrimedUnit {
    fn quaternion(self) -> Quaternion {
        match self {
            PrimedUnit::I => Quaternion::I,
            PrimedUnit::K => Quaternion::K,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub p: u64,
    pub primed: bool,
    /// Canonical-sign representatives, ascending.
    pub elements: Vec<Quaternion>,
}

impl GeneratorSet {
    pub fn index_of(&self, x: &Quaternion) -> Option<usize> {
        self.elements.binary_search(&x.canonical()).ok()
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.index_of(x).is_some()
    }

    /// Index of `[x]^{-1} = [x-bar]` for each element.
    pub fn involution(&self) -> Vec<usize> {
        self.elements
            .iter()
            .map(|x| self.index_of(&x.conj()).expect("generator sets are closed under inversion"))
            .collect()
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

pub fn enumerate_pa(p: u64, primed: bool) -> Result<GeneratorSet> {
    enumerate_pa_with(p, primed, PrimedUnit::default())
}

/// The `p + 1` classes of norm-`p` quaternions that are `1` mod `2` (for
/// `p = 1 mod 4`) or `i + j + k` mod `2` (for `p = 3 mod 4`), optionally
/// moved by `unit` in the second case.
pub fn enumerate_pa_with(p: u64, primed: bool, unit: PrimedUnit) -> Result<GeneratorSet> {
    check_odd_prime(p)?;
    let r = isqrt(p) as i64;
    let pi = p as i64;
    let one_mod_four = p % 4 == 1;
    let mut set = BTreeSet::new();
    for x0 in -r..=r {
        for x1 in -r..=r {
            for x2 in -r..=r {
                let rest = pi - x0 * x0 - x1 * x1 - x2 * x2;
                if rest < 0 {
                    continue;
                }
                let x3 = isqrt(rest as u64) as i64;
                if x3 * x3 != rest {
                    continue;
                }
                for x3 in if x3 == 0 { vec![0] } else { vec![x3, -x3] } {
                    let odd = [x0, x1, x2, x3].map(|x| x.rem_euclid(2) == 1);
                    let keep = if one_mod_four {
                        odd == [true, false, false, false]
                    } else {
                        odd == [false, true, true, true]
                    };
                    if keep {
                        let mut x = Quaternion::new(x0, x1, x2, x3);
                        if primed && !one_mod_four {
                            x = x.mul(&unit.quaternion());
                        }
                        set.insert(x.canonical());
                    }
                }
            }
        }
    }
    let elements: Vec<Quaternion> = set.into_iter().collect();
    if elements.len() as u64 != p + 1 {
        return Err(Error::CardinalityMismatch { p, expected: p as usize + 1, found: elements.len() });
    }
    Ok(GeneratorSet { p, primed, elements })
}

/// The unique `(y', x', sign)` with `y' in PA_l`, `x' in PA_p` and `x y = sign * y' x'`.
pub fn solve_square(
    x: &Quaternion,
    y: &Quaternion,
    pa_p: &GeneratorSet,
    pa_l: &GeneratorSet,
) -> Result<(Quaternion, Quaternion, i64)> {
    let xy = x.mul(y);
    let l = pa_l.p as i64;
    let mut found = None;
    for yp in &pa_l.elements {
        // y' x' = sign x y  gives  x' = sign conj(y') x y / l
        let Some(z) = yp.conj().mul(&xy).div_int(l) else { continue };
        let (xp, sign) = z.canonical_sign();
        if pa_p.contains(&xp) {
            if found.is_some() {
                return Err(Error::MultipleSolutions(format!("({x}, {y})")));
            }
            found = Some((*yp, xp, sign));
        }
    }
    found.ok_or_else(|| Error::NoSolution(format!("({x}, {y})")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HurwitzLetter {
    Q(Quaternion),
    /// Formal inverse, realized by the conjugate.
    Inv(Quaternion),
}

pub type HurwitzCertificate = CentralityCertificate<i64, Quaternion>;

pub fn verify_word_hurwitz(word: &[HurwitzLetter]) -> HurwitzCertificate {
    let prod = word.iter().fold(Quaternion::ONE, |acc, l| match l {
        HurwitzLetter::Q(x) => acc.mul(x),
        HurwitzLetter::Inv(x) => acc.mul(&x.conj()),
    });
    if prod.is_scalar() && !prod.denom2 {
        CentralityCertificate::Central(prod.c[0])
    } else {
        CentralityCertificate::NotCentral(prod)
    }
}

/// The quaternion of a `Quat`-labelled generator.
pub fn generator_quaternion(p: &Presentation, l: Letter) -> Option<Quaternion> {
    match &p.directions.get(l.dir)?.generators.get(l.gen)? {
        GenLabel::Quat(c) => Some(Quaternion { c: *c, denom2: false }),
        _ => None,
    }
}

/// The letters `g1 g2 g3 g4` of a stored square.
pub fn square_word(p: &Presentation, sq: &Square) -> Vec<HurwitzLetter> {
    sq.letters()
        .iter()
        .map(|&l| HurwitzLetter::Q(generator_quaternion(p, l).expect("quaternion generator")))
        .collect()
}

pub fn present_gamma_hurwitz(s0: &[u64], primed: bool) -> Result<Presentation> {
    present_gamma_hurwitz_with(s0, primed, PrimedUnit::default())
}

pub fn present_gamma_hurwitz_with(s0: &[u64], primed: bool, unit: PrimedUnit) -> Result<Presentation> {
    if s0.is_empty() {
        return Err(Error::BadPlace("no primes given".into()));
    }
    let mut seen = BTreeSet::new();
    for &p in s0 {
        if !seen.insert(p) {
            return Err(Error::BadPlace(format!("prime {p} listed twice")));
        }
    }
    let sets = s0.iter().map(|&p| enumerate_pa_with(p, primed, unit)).collect::<Result<Vec<_>>>()?;
    let directions = sets
        .iter()
        .map(|gs| Direction {
            label: gs.p.to_string(),
            valency: gs.elements.len(),
            generators: gs.elements.iter().map(|x| GenLabel::Quat(x.c)).collect(),
            involution: gs.involution(),
        })
        .collect();
    let mut p = Presentation::new(directions);

    let mut squares = BTreeSet::new();
    for v in 0..sets.len() {
        for w in v + 1..sets.len() {
            let (sv, sw) = (&sets[v], &sets[w]);
            let found: Vec<Square> = (0..sv.elements.len())
                .into_par_iter()
                .map(|a| -> Result<Vec<Square>> {
                    let x = &sv.elements[a];
                    let mut out = Vec::with_capacity(sw.elements.len());
                    for (b, y) in sw.elements.iter().enumerate() {
                        let (yp, xp, _) = solve_square(x, y, sv, sw)?;
                        let xp_inv = sv.index_of(&xp.conj()).expect("closed under inversion");
                        let yp_inv = sw.index_of(&yp.conj()).expect("closed under inversion");
                        let word = [Letter::new(v, a), Letter::new(w, b), Letter::new(v, xp_inv), Letter::new(w, yp_inv)];
                        out.push(p.canonicalize(&Square::from_letters(word)?)?);
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            squares.extend(found);
        }
    }
    p.squares = squares.into_iter().collect();
    for sq in &p.squares {
        if let CentralityCertificate::NotCentral(x) = verify_word_hurwitz(&square_word(&p, sq)) {
            return Err(Error::RelationNotCentral(format!("square {:?}: product {x}", <[usize; 8]>::from(*sq))));
        }
    }
    if !primed {
        p.finite_part = Some(FinitePart {
            name: "S4".into(),
            order: 24,
            distinguished: Vec::new(),
            relations: Vec::new(),
        });
    }
    Ok(p)
}

/// Tally of the mod-2 classes of all generators, for the torsion-freeness witness.
pub fn mod2_classes(p: &Presentation) -> BTreeMap<[u8; 4], usize> {
    let mut out = BTreeMap::new();
    for (v, d) in p.directions.iter().enumerate() {
        for g in 0..d.generators.len() {
            if let Some(x) = generator_quaternion(p, Letter::new(v, g)) {
                *out.entry(x.class_mod2()).or_insert(0) += 1;
            }
        }
    }
    out
}

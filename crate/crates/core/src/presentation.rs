//! Directional one-vertex presentations: per-direction generator sets with an
//! involution, plus geometric squares between pairs of directions.
//!
//! A square is stored as an alternating word `g1 g2 g3 g4` with `g1, g3` in
//! direction `v` and `g2, g4` in direction `w`, read as the relation
//! `g1 g2 g3 g4 = 1`. Its orbit under the symmetries of the square consists of
//! the cyclic rotations of the word and of its inverse; the stored
//! representative is the least orbit word under `(v, w, g1, g2, g3, g4)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::FieldInfo;

/// Outcome of multiplying out a relation word in an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CentralityCertificate<S, P> {
    Central(S),
    NotCentral(P),
}

impl<S, P> CentralityCertificate<S, P> {
    pub fn is_central(&self) -> bool {
        matches!(self, CentralityCertificate::Central(_))
    }
}

/// Label of a generator, keeping the construction's own naming reconstructible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenLabel {
    /// `a_i = [1 + delta^i F]`.
    Exp(u32),
    /// A Lipschitz quaternion `x0 + x1 i + x2 j + x3 k`.
    Quat([i64; 4]),
    /// Element of a cyclic set; even indices are positively oriented.
    Cyclic(u32),
    /// Generator of a doubled complex.
    Pair(Box<GenLabel>, Box<GenLabel>),
}

impl GenLabel {
    pub fn text(&self) -> String {
        match self {
            GenLabel::Exp(i) | GenLabel::Cyclic(i) => i.to_string(),
            GenLabel::Quat(c) => format!("[{}]", quat_text(c)),
            GenLabel::Pair(a, b) => format!("({},{})", a.text(), b.text()),
        }
    }
}

pub(crate) fn quat_text(c: &[i64; 4]) -> String {
    let mut out = String::new();
    for (k, unit) in ["", "i", "j", "k"].iter().enumerate() {
        let x = c[k];
        if x == 0 {
            continue;
        }
        let sign = if x < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = x.unsigned_abs();
        if mag == 1 && !unit.is_empty() {
            let _ = write!(out, "{sign}{unit}");
        } else {
            let _ = write!(out, "{sign}{mag}{unit}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Direction {
    pub label: String,
    /// `q_v + 1`, the number of generators.
    pub valency: usize,
    pub generators: Vec<GenLabel>,
    /// Local index of each generator's inverse.
    pub involution: Vec<usize>,
}

/// A generator reference `(direction, local index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub dir: usize,
    pub gen: usize,
}

impl Letter {
    pub fn new(dir: usize, gen: usize) -> Self {
        Letter { dir, gen }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[usize; 8]", try_from = "[usize; 8]")]
pub struct Square {
    pub v: usize,
    pub w: usize,
    pub word: [usize; 4],
}

impl Square {
    pub fn from_letters(ls: [Letter; 4]) -> Result<Self> {
        let (v, w) = (ls[0].dir, ls[1].dir);
        if v == w || ls[2].dir != v || ls[3].dir != w {
            return Err(Error::MalformedWord(format!("{ls:?} does not alternate two directions")));
        }
        Ok(Square { v, w, word: [ls[0].gen, ls[1].gen, ls[2].gen, ls[3].gen] })
    }

    pub fn letters(&self) -> [Letter; 4] {
        [
            Letter::new(self.v, self.word[0]),
            Letter::new(self.w, self.word[1]),
            Letter::new(self.v, self.word[2]),
            Letter::new(self.w, self.word[3]),
        ]
    }

    /// The unordered direction pair `(min, max)`.
    pub fn dir_pair(&self) -> (usize, usize) {
        (self.v.min(self.w), self.v.max(self.w))
    }
}

impl From<Square> for [usize; 8] {
    fn from(s: Square) -> Self {
        [s.v, s.word[0], s.w, s.word[1], s.v, s.word[2], s.w, s.word[3]]
    }
}

impl TryFrom<[usize; 8]> for Square {
    type Error = String;

    fn try_from(a: [usize; 8]) -> std::result::Result<Self, String> {
        if a[0] != a[4] || a[2] != a[6] || a[0] == a[2] {
            return Err(format!("square {a:?} does not alternate two directions"));
        }
        Ok(Square { v: a[0], w: a[2], word: [a[1], a[3], a[5], a[7]] })
    }
}

/// A letter of a relation involving the finite part `<d, s>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordLetter {
    D,
    DInv,
    S,
    SInv,
    Gen(usize, usize),
    GenInv(usize, usize),
}

/// Finite stabiliser data of a `Lambda`-type presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePart {
    pub name: String,
    pub order: u64,
    /// Per direction, the local index of the distinguished generator `a_tau`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distinguished: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<WordLetter>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInfo>,
    pub directions: Vec<Direction>,
    pub squares: Vec<Square>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_part: Option<FinitePart>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub v: usize,
    pub w: usize,
    pub squares: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<String>,
    pub pair_counts: Vec<PairCount>,
}

/// A corner `(a, b)` of direction pair `(v, w)`, `v < w`, covered `count` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerCount {
    pub v: usize,
    pub w: usize,
    pub corner: (usize, usize),
    pub count: usize,
}

impl Presentation {
    pub fn new(directions: Vec<Direction>) -> Self {
        Presentation { field: None, directions, squares: Vec::new(), finite_part: None }
    }

    pub fn num_generators(&self) -> usize {
        self.directions.iter().map(|d| d.generators.len()).sum()
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        Letter::new(l.dir, self.directions[l.dir].involution[l.gen])
    }

    fn check_letter(&self, l: Letter) -> Result<()> {
        match self.directions.get(l.dir) {
            Some(d) if l.gen < d.generators.len() => Ok(()),
            _ => Err(Error::MalformedWord(format!("letter {l:?} out of range"))),
        }
    }

    /// The eight words of the square's orbit: rotations of the word and of its
    /// inverse. Degenerate squares repeat words.
    pub fn orbit(&self, sq: &Square) -> Result<Vec<Square>> {
        let w = sq.letters();
        for l in w {
            self.check_letter(l)?;
        }
        if sq.v == sq.w {
            return Err(Error::MalformedWord(format!("{sq:?} uses a single direction")));
        }
        let inv = [self.inverse(w[3]), self.inverse(w[2]), self.inverse(w[1]), self.inverse(w[0])];
        let mut out = Vec::with_capacity(8);
        for base in [w, inv] {
            for r in 0..4 {
                let rot = [base[r], base[(r + 1) % 4], base[(r + 2) % 4], base[(r + 3) % 4]];
                out.push(Square::from_letters(rot)?);
            }
        }
        Ok(out)
    }

    pub fn canonicalize(&self, sq: &Square) -> Result<Square> {
        Ok(self.orbit(sq)?.into_iter().min().expect("orbit is nonempty"))
    }

    /// Distinct corners `(a, b)` of a square for its direction pair `(v, w)`, `v < w`.
    /// The corner of a word `h1 h2 h3 h4` starting in `v` is `(h1, h4^{-1})`.
    pub fn corners(&self, sq: &Square) -> Result<BTreeSet<(usize, usize)>> {
        let (lo, _) = sq.dir_pair();
        Ok(self
            .orbit(sq)?
            .into_iter()
            .filter(|o| o.v == lo)
            .map(|o| {
                let last = self.inverse(Letter::new(o.w, o.word[3]));
                (o.word[0], last.gen)
            })
            .collect())
    }

    /// Parametrized squares of the ordered pair `(v, w)`, `v < w`: the distinct
    /// orbit words starting in `v`.
    pub fn parametrized(&self, sq: &Square) -> Result<Vec<Square>> {
        let (lo, _) = sq.dir_pair();
        let set: BTreeSet<Square> = self.orbit(sq)?.into_iter().filter(|o| o.v == lo).collect();
        Ok(set.into_iter().collect())
    }

    /// Coverage count of every corner of every direction pair.
    pub fn corner_coverage(&self) -> Result<Vec<CornerCount>> {
        let d = self.directions.len();
        let mut counts: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for v in 0..d {
            for w in v + 1..d {
                let n = self.directions[v].generators.len() * self.directions[w].generators.len();
                counts.insert((v, w), vec![0; n]);
            }
        }
        for sq in &self.squares {
            let (v, w) = sq.dir_pair();
            let nw = self.directions[w].generators.len();
            let slot = counts.get_mut(&(v, w)).expect("pair registered");
            for (a, b) in self.corners(sq)? {
                slot[a * nw + b] += 1;
            }
        }
        let mut out = Vec::new();
        for ((v, w), cs) in counts {
            let nw = self.directions[w].generators.len();
            for (idx, count) in cs.into_iter().enumerate() {
                out.push(CornerCount { v, w, corner: (idx / nw, idx % nw), count });
            }
        }
        Ok(out)
    }

    pub fn squares_between(&self, v: usize, w: usize) -> usize {
        let key = (v.min(w), v.max(w));
        self.squares.iter().filter(|s| s.dir_pair() == key).count()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut errors = Vec::new();
        for (k, dir) in self.directions.iter().enumerate() {
            let n = dir.generators.len();
            if dir.valency != n {
                errors.push(format!("direction {k}: valency {} but {n} generators", dir.valency));
            }
            if dir.involution.len() != n {
                errors.push(format!("direction {k}: involution has {} entries", dir.involution.len()));
                continue;
            }
            for (g, &h) in dir.involution.iter().enumerate() {
                if h >= n || dir.involution[h] != g {
                    errors.push(format!("direction {k}: involution is not self-inverse at {g}"));
                }
            }
        }
        let mut pair_counts = Vec::new();
        if !errors.is_empty() {
            return ValidationReport { valid: false, errors, pair_counts };
        }

        let mut seen = BTreeSet::new();
        let mut squares_ok = true;
        for sq in &self.squares {
            match self.canonicalize(sq) {
                Err(e) => {
                    errors.push(format!("square {:?}: {e}", <[usize; 8]>::from(*sq)));
                    squares_ok = false;
                }
                Ok(c) => {
                    if c != *sq {
                        errors.push(format!("square {:?} is not in canonical form", <[usize; 8]>::from(*sq)));
                    }
                    if !seen.insert(c) {
                        errors.push(format!("square orbit {:?} stored twice", <[usize; 8]>::from(c)));
                    }
                }
            }
        }
        let d = self.directions.len();
        for v in 0..d {
            for w in v + 1..d {
                pair_counts.push(PairCount { v, w, squares: self.squares_between(v, w) });
            }
        }
        if squares_ok {
            match self.corner_coverage() {
                Ok(cov) => {
                    for c in cov.into_iter().filter(|c| c.count != 1) {
                        let what = if c.count == 0 { "uncovered".to_string() } else { format!("covered {} times", c.count) };
                        errors.push(format!(
                            "corner ({}, {}) of directions ({}, {}) {what}",
                            c.corner.0, c.corner.1, c.v, c.w
                        ));
                    }
                }
                Err(e) => errors.push(e.to_string()),
            }
        }
        ValidationReport { valid: errors.is_empty(), errors, pair_counts }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("presentation serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn dir_name(k: usize) -> String {
        const NAMES: &[u8] = b"abcefghijklmnopqrtuvwxyz";
        if k < NAMES.len() {
            (NAMES[k] as char).to_string()
        } else {
            format!("g{k}")
        }
    }

    pub fn letter_text(&self, l: Letter) -> String {
        format!("{}_{}", Self::dir_name(l.dir), self.directions[l.dir].generators[l.gen].text())
    }

    fn word_letter_text(&self, l: &WordLetter) -> String {
        match *l {
            WordLetter::D => "d".into(),
            WordLetter::DInv => "d^-1".into(),
            WordLetter::S => "s".into(),
            WordLetter::SInv => "s^-1".into(),
            WordLetter::Gen(v, g) => self.letter_text(Letter::new(v, g)),
            WordLetter::GenInv(v, g) => format!("{}^-1", self.letter_text(Letter::new(v, g))),
        }
    }

    /// `< generators | relations >` rendering, one relation per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("<\n");
        if let Some(fp) = &self.finite_part {
            let _ = writeln!(out, "  d, s  ({} of order {})", fp.name, fp.order);
        }
        for (k, dir) in self.directions.iter().enumerate() {
            let names: Vec<String> = (0..dir.generators.len()).map(|g| self.letter_text(Letter::new(k, g))).collect();
            let _ = writeln!(out, "  {}  ({})", names.join(", "), dir.label);
        }
        out.push_str("|\n");
        if let Some(fp) = &self.finite_part {
            for rel in &fp.relations {
                let ws: Vec<String> = rel.iter().map(|l| self.word_letter_text(l)).collect();
                let _ = writeln!(out, "  {} = 1", ws.join(" "));
            }
        }
        for (k, dir) in self.directions.iter().enumerate() {
            for (g, &h) in dir.involution.iter().enumerate() {
                let a = self.letter_text(Letter::new(k, g));
                if g == h {
                    let _ = writeln!(out, "  {a}^2 = 1");
                } else if g < h {
                    let _ = writeln!(out, "  {a} {} = 1", self.letter_text(Letter::new(k, h)));
                }
            }
        }
        for sq in &self.squares {
            let ws: Vec<String> = sq.letters().iter().map(|&l| self.letter_text(l)).collect();
            let _ = writeln!(out, "  {}", ws.join(" "));
        }
        out.push_str(">\n");
        out
    }
}

/// Canonical representative of a square's orbit in `p`.
pub fn canonicalize_square(p: &Presentation, sq: &Square) -> Result<Square> {
    p.canonicalize(sq)
}

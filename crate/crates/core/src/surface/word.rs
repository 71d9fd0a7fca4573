//! Words in a free group on named generators.

use std::fmt;

/// A generator or its inverse. Ordered `a < A < b < B < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: u16,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: u16, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator as u16, false)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator as u16, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }

    /// Generator names are single lowercase letters; inverses are uppercase.
    pub fn symbol(self) -> char {
        let base = (b'a' + self.generator as u8) as char;
        if self.inverse {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }

    pub fn from_symbol(ch: char) -> Option<Self> {
        if ch.is_ascii_lowercase() {
            Some(Letter::pos((ch as u8 - b'a') as usize))
        } else if ch.is_ascii_uppercase() {
            Some(Letter::neg((ch.to_ascii_lowercase() as u8 - b'a') as usize))
        } else {
            None
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds and freely reduces.
    pub fn new(letters: Vec<Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if out.last().is_some_and(|&p| p.is_inverse_of(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn parse(s: &str) -> Option<Self> {
        let trimmed = s.trim();
        if trimmed == "1" || trimmed.is_empty() {
            return Some(Word::empty());
        }
        trimmed
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_symbol)
            .collect::<Option<Vec<_>>>()
            .map(Word::new)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word::new(v)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word::new(v)
    }

    pub fn conjugate_by(&self, h: &Word) -> Self {
        h.concat(self).concat(&h.inverse())
    }

    /// Replaces every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let mut v = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator as usize];
            if l.inverse {
                v.extend(img.inverse().0);
            } else {
                v.extend_from_slice(&img.0);
            }
        }
        Word::new(v)
    }

    /// Renames generators letter by letter.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Self {
        Word::new(self.0.iter().map(|&l| f(l)).collect())
    }

    /// Splits into `(u, core)` with `self = u·core·u⁻¹` and `core` cyclically reduced.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k].is_inverse_of(self.0[n - 1 - k]) {
            k += 1;
        }
        (Word(self.0[..k].to_vec()), Word(self.0[k..n - k].to_vec()))
    }

    pub fn cyclically_reduced(&self) -> Self {
        self.cyclic_core().1
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || !self.0[0].is_inverse_of(self.0[self.0.len() - 1])
    }

    fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.0.len();
        (0..n.max(1)).map(move |k| {
            let mut v = self.0[k.min(n)..].to_vec();
            v.extend_from_slice(&self.0[..k.min(n)]);
            Word(v)
        })
    }

    /// Canonical representative of the conjugacy class of `self` or `self⁻¹`:
    /// the least cyclic rotation of either, after cyclic reduction.
    pub fn conjugacy_canonical(&self) -> Self {
        let core = self.cyclically_reduced();
        let inv = core.inverse();
        core.rotations()
            .chain(inv.rotations())
            .min()
            .unwrap_or_default()
    }

    /// Same, but without identifying a word with its inverse.
    pub fn oriented_canonical(&self) -> Self {
        self.cyclically_reduced().rotations().min().unwrap_or_default()
    }

    /// Whether the cyclically reduced core is a proper power `v^k`, `k ≥ 2`.
    pub fn is_proper_power(&self) -> bool {
        let core = self.cyclically_reduced();
        let n = core.len();
        (1..n).any(|p| n % p == 0 && n / p >= 2 && (p..n).all(|i| core.0[i] == core.0[i - p]))
    }

    /// Exponent sum of each generator.
    pub fn abelianization(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.generator as usize] += if l.inverse { -1 } else { 1 };
        }
        v
    }

    /// Number of occurrences of a generator (either sign).
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.generator as usize == g).count()
    }

    pub fn uses_only(&self, limit: usize) -> bool {
        self.0.iter().all(|l| (l.generator as usize) < limit)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word::new(v)
    }
}

/// All freely reduced words of length `1..=max_len` over `rank` generators,
/// in shortlex order.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..rank {
                for inv in [false, true] {
                    let l = Letter::new(g as u16, inv);
                    if w.0.last().is_some_and(|&p| p.is_inverse_of(l)) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

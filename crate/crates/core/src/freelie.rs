//! The free Lie algebra on two generators `a < b`, with the Lyndon basis.
//!
//! Lie elements are stored as coefficients on Lyndon words, where the Lyndon
//! word `w` stands for its standard bracketing `P(w)` (right standard
//! factorization `w = uv`, `v` the longest proper Lyndon suffix, `P(w) = [P(u), P(v)]`).
//! All products are computed in the tensor algebra and rewritten back to the
//! basis with the triangularity `P(w) = w + (lexicographically larger words)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Degree cap applied when no explicit cap is given.
pub const DEFAULT_MAX_DEGREE: usize = 16;

/// Longest word the packed representation can hold.
pub const HARD_MAX_DEGREE: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    pub fn letter(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
        }
    }
}

/// A word over `{a, b}`, packed most-significant letter first (`a = 0`, `b = 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    pub fn letter(g: Generator) -> Self {
        Word { bits: (g == Generator::B) as u64, len: 1 }
    }

    pub fn from_letters(letters: &[Generator]) -> Self {
        assert!(letters.len() <= HARD_MAX_DEGREE, "word too long");
        let bits = letters.iter().fold(0u64, |acc, &g| (acc << 1) | (g == Generator::B) as u64);
        Word { bits, len: letters.len() as u8 }
    }

    pub(crate) fn from_bits(bits: u64, len: usize) -> Self {
        Word { bits, len: len as u8 }
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Letter at position `i` (0-based from the left).
    pub fn at(self, i: usize) -> Generator {
        debug_assert!(i < self.len());
        if (self.bits >> (self.len() - 1 - i)) & 1 == 1 {
            Generator::B
        } else {
            Generator::A
        }
    }

    pub fn letters(self) -> impl Iterator<Item = Generator> {
        (0..self.len()).map(move |i| self.at(i))
    }

    pub fn concat(self, other: Word) -> Word {
        debug_assert!(self.len() + other.len() <= HARD_MAX_DEGREE);
        Word { bits: (self.bits << other.len) | other.bits, len: self.len + other.len }
    }

    /// Subword `[start, end)`.
    pub fn slice(self, start: usize, end: usize) -> Word {
        debug_assert!(start <= end && end <= self.len());
        let len = end - start;
        let shifted = self.bits >> (self.len() - end);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Word { bits: shifted & mask, len: len as u8 }
    }

    /// Number of occurrences of `a` and of `b`.
    pub fn multidegree(self) -> (usize, usize) {
        let b = self.bits.count_ones() as usize;
        (self.len() - b, b)
    }

    /// Strictly smaller than each of its proper rotations.
    pub fn is_lyndon(self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        (1..n).all(|i| self < self.slice(i, n).concat(self.slice(0, i)))
    }

    /// Right standard factorization `(u, v)` of a Lyndon word of length at least 2.
    pub fn standard_factorization(self) -> Option<(Word, Word)> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        (1..n).map(|i| (self.slice(0, i), self.slice(i, n))).find(|(_, v)| v.is_lyndon())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.len == other.len {
            return self.bits.cmp(&other.bits);
        }
        let m = self.len.min(other.len) as usize;
        let a = self.slice(0, m);
        let b = other.slice(0, m);
        a.bits.cmp(&b.bits).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in self.letters() {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'a' => Ok(Generator::A),
                'b' => Ok(Generator::B),
                _ => Err(Error::Parse(format!("invalid letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.len() > HARD_MAX_DEGREE {
            return Err(Error::Parse(format!("word {s:?} is too long")));
        }
        Ok(Word::from_letters(&letters))
    }
}

/// A word known to satisfy the Lyndon property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LyndonWord(Word);

impl LyndonWord {
    pub fn new(w: Word) -> Option<Self> {
        w.is_lyndon().then_some(LyndonWord(w))
    }

    pub fn word(self) -> Word {
        self.0
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Element of the tensor algebra `T(H)`: a finite combination of words.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for Tensor<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Tensor<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn word(w: Word) -> Self {
        let mut t = Self::zero();
        t.add_term(w, S::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Word) -> S {
        self.terms.get(&w).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, &S)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for (w, x) in &other.terms {
            self.add_term(*w, x.clone() * c.clone());
        }
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                out.add_term(u.concat(*v), x.clone() * y.clone());
            }
        }
        out
    }

    /// `xy - yx`.
    pub fn commutator(&self, other: &Self) -> Self {
        let mut out = self.mul(other);
        out.add_scaled(&other.mul(self), &-S::one());
        out
    }

    /// Apply the algebra derivation determined by the images of `a` and `b`.
    pub fn derive(&self, image_a: &Self, image_b: &Self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let n = w.len();
            for i in 0..n {
                let image = match w.at(i) {
                    Generator::A => image_a,
                    Generator::B => image_b,
                };
                let left = w.slice(0, i);
                let right = w.slice(i + 1, n);
                for (m, x) in &image.terms {
                    out.add_term(left.concat(*m).concat(right), c.clone() * x.clone());
                }
            }
        }
        out
    }

    /// Apply the algebra endomorphism determined by the images of `a` and `b`.
    pub fn substitute(&self, image_a: &Self, image_b: &Self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::word(Word::EMPTY);
            for g in w.letters() {
                acc = acc.mul(match g {
                    Generator::A => image_a,
                    Generator::B => image_b,
                });
            }
            out.add_scaled(&acc, c);
        }
        out
    }
}

/// Element of the free Lie algebra in the Lyndon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElem<S> {
    terms: BTreeMap<Word, S>,
}

pub type LieElement = LieElem<Rational>;

impl<S: Scalar> Default for LieElem<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> LieElem<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn generator(g: Generator) -> Self {
        Self::basis(LyndonWord(Word::letter(g)))
    }

    pub fn a() -> Self {
        Self::generator(Generator::A)
    }

    pub fn b() -> Self {
        Self::generator(Generator::B)
    }

    pub fn basis(w: LyndonWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, S::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LyndonWord, S)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: LyndonWord, c: S) {
        if c.is_zero() {
            return;
        }
        let key = w.word();
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Word) -> S {
        self.terms.get(&w).cloned().unwrap_or_else(S::zero)
    }

    /// Basis words with nonzero coefficient, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (LyndonWord, &S)> {
        self.terms.iter().map(|(w, c)| (LyndonWord(*w), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Common length of all basis words, or `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(|w| w.len());
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Self {
        Self {
            terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (*w, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, x)| (*w, x.clone() * c.clone())).collect() }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for (w, x) in &other.terms {
            self.add_term(LyndonWord(*w), x.clone() * c.clone());
        }
    }
}

impl<S: Scalar> std::ops::Add for &LieElem<S> {
    type Output = LieElem<S>;
    fn add(self, rhs: Self) -> LieElem<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &S::one());
        out
    }
}

impl<S: Scalar> std::ops::Sub for &LieElem<S> {
    type Output = LieElem<S>;
    fn sub(self, rhs: Self) -> LieElem<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-S::one());
        out
    }
}

impl<S: Scalar> std::ops::Neg for &LieElem<S> {
    type Output = LieElem<S>;
    fn neg(self) -> LieElem<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> std::ops::Add for LieElem<S> {
    type Output = LieElem<S>;
    fn add(self, rhs: Self) -> LieElem<S> {
        &self + &rhs
    }
}

impl<S: Scalar> std::ops::Sub for LieElem<S> {
    type Output = LieElem<S>;
    fn sub(self, rhs: Self) -> LieElem<S> {
        &self - &rhs
    }
}

impl<S: Scalar> std::ops::Neg for LieElem<S> {
    type Output = LieElem<S>;
    fn neg(self) -> LieElem<S> {
        -&self
    }
}

impl<S: Scalar> fmt::Display for LieElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{w}")?;
        }
        Ok(())
    }
}

type Expansion = Arc<Vec<(Word, i64)>>;

fn lyndon_cache() -> &'static RwLock<HashMap<usize, Arc<Vec<Word>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<Word>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn expansion_cache() -> &'static RwLock<HashMap<Word, Expansion>> {
    static CACHE: OnceLock<RwLock<HashMap<Word, Expansion>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All Lyndon words of length exactly `n`, in lexicographic order (Duval's generator).
fn generate_lyndon(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut w: Vec<i8> = vec![-1];
    while !w.is_empty() {
        *w.last_mut().unwrap() += 1;
        let m = w.len();
        if m == n {
            let bits = w.iter().fold(0u64, |acc, &x| (acc << 1) | x as u64);
            out.push(Word::from_bits(bits, n));
        }
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
    }
    out
}

/// Integer tensor expansion of the standard bracketing of a Lyndon word.
fn expansion(w: Word) -> Expansion {
    if let Some(e) = expansion_cache().read().unwrap().get(&w) {
        return e.clone();
    }
    let e: Expansion = if w.len() == 1 {
        Arc::new(vec![(w, 1)])
    } else {
        let (u, v) = w.standard_factorization().expect("Lyndon word of length >= 2 factors");
        let (eu, ev) = (expansion(u), expansion(v));
        let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
        for (x, cx) in eu.iter() {
            for (y, cy) in ev.iter() {
                *acc.entry(x.concat(*y)).or_default() += cx * cy;
                *acc.entry(y.concat(*x)).or_default() -= cx * cy;
            }
        }
        Arc::new(acc.into_iter().filter(|(_, c)| *c != 0).collect())
    };
    expansion_cache().write().unwrap().insert(w, e.clone());
    e
}

/// Handle on the free Lie algebra with a degree cap.
///
/// Tables (Lyndon bases, bracket expansions) are shared process-wide behind a lock,
/// so handles are cheap to copy and safe to use from several threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeLie {
    max_degree: usize,
}

impl Default for FreeLie {
    fn default() -> Self {
        Self { max_degree: DEFAULT_MAX_DEGREE }
    }
}

impl FreeLie {
    pub fn new(max_degree: usize) -> Result<Self> {
        if max_degree == 0 || max_degree > HARD_MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "degree cap must lie in 1..={HARD_MAX_DEGREE}, got {max_degree}"
            )));
        }
        Ok(Self { max_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree {
            Err(Error::DegreeCap { degree, cap: self.max_degree })
        } else {
            Ok(())
        }
    }

    /// Lyndon words of length `degree`, sorted lexicographically.
    pub fn lyndon_basis(&self, degree: usize) -> Result<Arc<Vec<Word>>> {
        if degree == 0 {
            return Err(Error::InvalidArgument("Lyndon basis degree must be at least 1".into()));
        }
        self.check_degree(degree)?;
        if let Some(b) = lyndon_cache().read().unwrap().get(&degree) {
            return Ok(b.clone());
        }
        let basis = Arc::new(generate_lyndon(degree));
        lyndon_cache().write().unwrap().entry(degree).or_insert_with(|| basis.clone());
        Ok(basis)
    }

    pub fn lyndon_words(&self, degree: usize) -> Result<Vec<LyndonWord>> {
        Ok(self.lyndon_basis(degree)?.iter().map(|&w| LyndonWord(w)).collect())
    }

    /// Position of `w` inside `lyndon_basis(w.len())`.
    pub fn basis_index(&self, w: Word) -> Result<Option<usize>> {
        let basis = self.lyndon_basis(w.len())?;
        Ok(basis.binary_search(&w).ok())
    }

    /// Expansion of a Lie element into the tensor algebra.
    pub fn to_tensor<S: Scalar>(&self, x: &LieElem<S>) -> Result<Tensor<S>> {
        self.check_degree(x.max_degree())?;
        let mut out = Tensor::zero();
        for (w, c) in &x.terms {
            for (u, k) in expansion(*w).iter() {
                out.add_term(*u, c.clone() * S::from_int(*k));
            }
        }
        Ok(out)
    }

    /// Rewrite a Lie polynomial given in the tensor algebra into the Lyndon basis.
    ///
    /// Fails with [`Error::NotLie`] when the input is not a Lie polynomial.
    pub fn from_tensor<S: Scalar>(&self, t: &Tensor<S>) -> Result<LieElem<S>> {
        self.check_degree(t.max_len())?;
        let mut residual = t.terms.clone();
        let mut out = LieElem::zero();
        while let Some((&w, c)) = residual.iter().next() {
            let c = c.clone();
            if !w.is_lyndon() {
                return Err(Error::NotLie(w.to_string()));
            }
            for (u, k) in expansion(w).iter() {
                let delta = -(c.clone() * S::from_int(*k));
                match residual.get_mut(u) {
                    Some(x) => {
                        *x = x.clone() + delta;
                        if x.is_zero() {
                            residual.remove(u);
                        }
                    }
                    None => {
                        residual.insert(*u, delta);
                    }
                }
            }
            out.terms.insert(w, c);
        }
        Ok(out)
    }

    pub fn bracket<S: Scalar>(&self, x: &LieElem<S>, y: &LieElem<S>) -> Result<LieElem<S>> {
        if x.is_zero() || y.is_zero() {
            return Ok(LieElem::zero());
        }
        self.check_degree(x.max_degree() + y.max_degree())?;
        let (tx, ty) = (self.to_tensor(x)?, self.to_tensor(y)?);
        self.from_tensor(&tx.commutator(&ty))
    }

    /// `ad(x)^n (y)`.
    pub fn ad_power<S: Scalar>(&self, x: &LieElem<S>, n: usize, y: &LieElem<S>) -> Result<LieElem<S>> {
        let mut acc = y.clone();
        for _ in 0..n {
            acc = self.bracket(x, &acc)?;
        }
        Ok(acc)
    }

    /// Lyndon-basis coefficient vector of a homogeneous element of degree `degree`.
    pub fn coordinates<S: Scalar>(&self, x: &LieElem<S>, degree: usize) -> Result<Vec<(usize, S)>> {
        let basis = self.lyndon_basis(degree)?;
        x.terms
            .iter()
            .map(|(w, c)| {
                if w.len() != degree {
                    return Err(Error::InvalidArgument(format!(
                        "element has a term of degree {} where degree {degree} was expected",
                        w.len()
                    )));
                }
                let i = basis.binary_search(w).expect("stored words are Lyndon");
                Ok((i, c.clone()))
            })
            .collect()
    }
}

/// Witt's necklace count `(1/d) * sum_{e | d} mu(d/e) 2^e`.
pub fn witt_dimension(d: usize) -> u64 {
    assert!(d >= 1);
    let total: i128 = (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| mobius(d / e) as i128 * (1i128 << e))
        .sum();
    (total / d as i128) as u64
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

//! Involutive edge alphabets, free and cyclic reduction, and factor extraction.
//!
//! A [`Letter`] packs an edge index and an orientation bit: edge `i` is the
//! letter `2i`, its inverse is `2i + 1`. Inversion is therefore a single xor,
//! and the derived ordering lists every edge directly before its inverse.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// An oriented edge (or, for plain substitutions, a symbol).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn positive(edge: usize) -> Self {
        Letter((edge as u32) << 1)
    }

    pub fn negative(edge: usize) -> Self {
        Letter(((edge as u32) << 1) | 1)
    }

    /// Index of the underlying topological edge.
    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Dense index in `0..2 * edges`, usable for table lookups.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        Letter(index as u32)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid edge name {0:?}: expected a lowercase letter followed by lowercase alphanumerics")]
    InvalidName(String),
    #[error("duplicate edge name {0:?}")]
    DuplicateName(String),
    #[error("an alphabet needs at least one edge")]
    EmptyAlphabet,
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("letter {0:?} is not in the alphabet")]
    ForeignLetter(Letter),
    #[error("factor length must be at least 1")]
    ZeroLength,
}

/// Checks the `NAME` production: a lowercase letter followed by lowercase
/// ASCII letters or digits.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

/// Positive edge names together with the fixed-point-free involution
/// `e <-> e'`. Names are stored sorted, which fixes the canonical letter order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeAlphabet {
    names: Vec<String>,
}

impl EdgeAlphabet {
    pub fn new<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if let Some(bad) = names.iter().find(|n| !is_valid_name(n)) {
            return Err(WordError::InvalidName(bad.clone()));
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(WordError::DuplicateName(w[0].clone()));
        }
        Ok(EdgeAlphabet { names })
    }

    /// Number of topological edges (half the number of letters).
    pub fn edge_count(&self) -> usize {
        self.names.len()
    }

    /// Number of letters, always even.
    pub fn letter_count(&self) -> usize {
        2 * self.names.len()
    }

    pub fn edge_names(&self) -> &[String] {
        &self.names
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.edge() < self.names.len()
    }

    /// All letters in canonical order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letter_count()).map(Letter::from_index)
    }

    pub fn positive_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.edge_count()).map(Letter::positive)
    }

    /// Token for a letter: the edge name, suffixed with `'` for inverses.
    pub fn name(&self, letter: Letter) -> String {
        let base = &self.names[letter.edge()];
        if letter.is_inverse() {
            format!("{base}'")
        } else {
            base.clone()
        }
    }

    pub fn parse_letter(&self, token: &str) -> Result<Letter, WordError> {
        let (base, inverse) = match token.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (token, false),
        };
        if !is_valid_name(base) {
            return Err(WordError::UnknownToken(token.to_string()));
        }
        let edge = self
            .edge_index(base)
            .ok_or_else(|| WordError::UnknownToken(token.to_string()))?;
        Ok(if inverse {
            Letter::negative(edge)
        } else {
            Letter::positive(edge)
        })
    }

    /// Parses whitespace separated tokens such as `a b' a`.
    pub fn parse_path(&self, text: &str) -> Result<EdgePath, WordError> {
        text.split_whitespace()
            .map(|t| self.parse_letter(t))
            .collect::<Result<Vec<_>, _>>()
            .map(EdgePath::from)
    }

    pub fn format(&self, letters: &[Letter]) -> String {
        let tokens: Vec<String> = letters.iter().map(|&l| self.name(l)).collect();
        tokens.join(" ")
    }

    pub fn check(&self, letters: &[Letter]) -> Result<(), WordError> {
        match letters.iter().find(|&&l| !self.contains(l)) {
            Some(&l) => Err(WordError::ForeignLetter(l)),
            None => Ok(()),
        }
    }
}

/// A finite sequence of letters. The empty path is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePath(Vec<Letter>);

impl EdgePath {
    pub fn empty() -> Self {
        EdgePath(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// `γ⁻¹`: reversed, with every letter inverted.
    pub fn inverse(&self) -> EdgePath {
        EdgePath(invert(&self.0))
    }

    pub fn concat(&self, other: &EdgePath) -> EdgePath {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        EdgePath(v)
    }

    pub fn is_reduced(&self) -> bool {
        is_reduced(&self.0)
    }
}

impl From<Vec<Letter>> for EdgePath {
    fn from(v: Vec<Letter>) -> Self {
        EdgePath(v)
    }
}

impl From<&[Letter]> for EdgePath {
    fn from(v: &[Letter]) -> Self {
        EdgePath(v.to_vec())
    }
}

impl std::ops::Deref for EdgePath {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Display for EdgePath {
    /// Raw letter indices; use [`EdgeAlphabet::format`] for names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.index().to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

pub fn invert(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

pub fn is_cyclically_reduced(letters: &[Letter]) -> bool {
    is_reduced(letters)
        && match (letters.first(), letters.last()) {
            (Some(&a), Some(&b)) if letters.len() > 1 => a != b.inverse(),
            _ => true,
        }
}

/// Free reduction by a single stack pass; no alphabet check.
pub fn reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// Returns the reduced word freely equal to `path`.
pub fn tighten(alphabet: &EdgeAlphabet, path: &EdgePath) -> Result<EdgePath, WordError> {
    alphabet.check(path)?;
    Ok(EdgePath(reduce(path)))
}

/// Cyclically reduced conjugate of `letters`, rotated to its
/// lexicographically least form. No alphabet check.
pub fn cyclic_reduce(letters: &[Letter]) -> Vec<Letter> {
    let reduced = reduce(letters);
    let mut lo = 0;
    let mut hi = reduced.len();
    while hi - lo >= 2 && reduced[lo] == reduced[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    least_rotation(&reduced[lo..hi])
}

pub fn cyclic_tighten(alphabet: &EdgeAlphabet, path: &EdgePath) -> Result<EdgePath, WordError> {
    alphabet.check(path)?;
    Ok(EdgePath(cyclic_reduce(path)))
}

fn least_rotation(word: &[Letter]) -> Vec<Letter> {
    let n = word.len();
    if n == 0 {
        return Vec::new();
    }
    // Quadratic scan; cyclic words handled here are short.
    let best = (0..n)
        .min_by(|&i, &j| {
            let a = word[i..].iter().chain(&word[..i]);
            let b = word[j..].iter().chain(&word[..j]);
            a.cmp(b)
        })
        .unwrap_or(0);
    let mut out = word[best..].to_vec();
    out.extend_from_slice(&word[..best]);
    out
}

/// All distinct contiguous subwords of `word` with length in `1..=n`.
pub fn factors(word: &[Letter], n: usize) -> Result<BTreeSet<EdgePath>, WordError> {
    if n == 0 {
        return Err(WordError::ZeroLength);
    }
    let mut out = BTreeSet::new();
    for start in 0..word.len() {
        for len in 1..=n.min(word.len() - start) {
            out.insert(EdgePath::from(&word[start..start + len]));
        }
    }
    Ok(out)
}

/// Factors of `word` of length exactly `n`, collected into `out`.
pub fn factors_of_length(word: &[Letter], n: usize, out: &mut BTreeSet<EdgePath>) {
    if n == 0 || n > word.len() {
        return;
    }
    for w in word.windows(n) {
        out.insert(EdgePath::from(w));
    }
}

/// Distinct-factor counts of a single finite word, computed from its suffix
/// array.
///
/// `p[n - 1]` is the number of distinct factors of length `n`. When `weights`
/// are supplied (one positive integer per letter index), `weighted[w - 1]` is
/// the number of distinct factors whose total weight lies in
/// `((w - 1) * unit, w * unit]`; summing gives metric counting functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCounts {
    pub p: Vec<u64>,
    pub weighted: Option<Vec<u64>>,
}

pub fn distinct_factor_counts(
    word: &[Letter],
    n_max: usize,
    weights: Option<(&[u64], u64)>,
) -> FactorCounts {
    let sa = suffix_array(word);
    let lcp = lcp_array(word, &sa);
    let len = word.len();

    let mut p_diff = vec![0i64; n_max + 2];
    let mut w_hist = weights.map(|_| vec![0u64; n_max + 1]);
    let prefix: Option<Vec<u64>> = weights.map(|(w, _)| {
        let mut acc = Vec::with_capacity(len + 1);
        acc.push(0u64);
        for &l in word {
            let last = *acc.last().unwrap();
            acc.push(last + w[l.index()]);
        }
        acc
    });

    for (rank, &start) in sa.iter().enumerate() {
        let common = if rank == 0 { 0 } else { lcp[rank] };
        let suffix_len = len - start;
        // New factors are the prefixes of this suffix longer than `common`.
        let lo = common + 1;
        let hi = suffix_len.min(n_max);
        if lo <= hi {
            p_diff[lo] += 1;
            p_diff[hi + 1] -= 1;
        }
        if let (Some(hist), Some(sums), Some((_, unit))) = (w_hist.as_mut(), prefix.as_ref(), weights)
        {
            let cap = n_max as u64 * unit;
            for l in lo..=suffix_len {
                let w = sums[start + l] - sums[start];
                if w > cap {
                    break;
                }
                let bucket = w.div_ceil(unit) as usize;
                hist[bucket.max(1)] += 1;
            }
        }
    }

    let mut p = Vec::with_capacity(n_max);
    let mut running = 0i64;
    for d in p_diff.iter().take(n_max + 1).skip(1) {
        running += d;
        p.push(running as u64);
    }
    FactorCounts {
        p,
        weighted: w_hist.map(|h| h[1..].to_vec()),
    }
}

/// Suffix array by prefix doubling.
pub fn suffix_array(word: &[Letter]) -> Vec<usize> {
    let n = word.len();
    let mut sa: Vec<usize> = (0..n).collect();
    if n <= 1 {
        return sa;
    }
    let mut rank: Vec<usize> = word.iter().map(|l| l.index()).collect();
    let mut tmp = vec![0usize; n];
    let mut k = 1;
    loop {
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for w in 1..n {
            tmp[sa[w]] = tmp[sa[w - 1]] + usize::from(key(sa[w - 1]) != key(sa[w]));
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n - 1 {
            break;
        }
        k <<= 1;
    }
    sa
}

/// Kasai's algorithm; `lcp[i]` is the common prefix of `sa[i - 1]` and `sa[i]`.
pub fn lcp_array(word: &[Letter], sa: &[usize]) -> Vec<usize> {
    let n = word.len();
    let mut rank = vec![0usize; n];
    for (i, &s) in sa.iter().enumerate() {
        rank[s] = i;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && word[i + h] == word[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

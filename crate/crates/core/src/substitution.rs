//! Substitutions, their eigenrays and factor languages, complexity tables,
//! entropy estimates, and growth-equivalence scans.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph_map::{analyze_matrix, GraphSelfMap, Orientability, TransitionMatrix};
use crate::words::{distinct_factor_counts, factors_of_length, EdgeAlphabet, EdgePath, Letter, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("letter {0} has an empty image")]
    EmptyImage(String),
    #[error("letter {0} has no image")]
    MissingImage(String),
    #[error("image uses letter {0}, which is outside the substitution alphabet")]
    ForeignImageLetter(String),
    #[error("substitution is not primitive")]
    NotPrimitive,
    #[error("letter {0} is not an eigenletter of any power of the substitution")]
    NotEigenletter(String),
    #[error("the given orientation is not preferred: image of {0} leaves the positive edges")]
    OrientationMismatch(String),
    #[error("intermediate word length {len} exceeds the cap of {cap} letters")]
    SizeCap { len: usize, cap: usize },
    #[error("enumeration did not stabilise: counts certified only to depth {achieved} of {requested}")]
    UnderEnumerated { requested: usize, achieved: usize },
    #[error("n must be at least {0}")]
    TooShort(usize),
    #[error("table is not monotone non-decreasing")]
    NotMonotone,
    #[error("tables are too short to test any constant")]
    InsufficientData,
    #[error("counts overflow 64 bits by n = {0}")]
    Overflow(usize),
}

/// A free monoid endomorphism `θ` with nonempty letter images.
///
/// Letters are drawn from an [`EdgeAlphabet`], which supplies the names. The
/// substitution alphabet `Σ` may be any subset of its letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: EdgeAlphabet,
    letters: Vec<Letter>,
    /// Indexed by `Letter::index`; `None` outside `Σ`.
    images: Vec<Option<Vec<Letter>>>,
}

impl Substitution {
    pub fn new(
        alphabet: EdgeAlphabet,
        images: Vec<(Letter, Vec<Letter>)>,
    ) -> Result<Self, SubstitutionError> {
        let mut table: Vec<Option<Vec<Letter>>> = vec![None; alphabet.letter_count()];
        let mut letters = Vec::with_capacity(images.len());
        for (l, img) in &images {
            alphabet.check(&[*l])?;
            alphabet.check(img)?;
            if img.is_empty() {
                return Err(SubstitutionError::EmptyImage(alphabet.name(*l)));
            }
            letters.push(*l);
            table[l.index()] = Some(img.clone());
        }
        letters.sort();
        letters.dedup();
        for (_, img) in &images {
            if let Some(&bad) = img.iter().find(|x| table[x.index()].is_none()) {
                return Err(SubstitutionError::ForeignImageLetter(alphabet.name(bad)));
            }
        }
        Ok(Substitution {
            alphabet,
            letters,
            images: table,
        })
    }

    /// Builds a substitution on plain symbols from `(letter, image)` name
    /// pairs; the alphabet is every name that occurs, in sorted order.
    pub fn from_names(rules: &[(&str, &str)]) -> Result<Self, SubstitutionError> {
        let mut names: BTreeSet<String> = BTreeSet::new();
        for (l, img) in rules {
            names.insert(l.to_string());
            names.extend(img.split_whitespace().map(str::to_string));
        }
        let alphabet = EdgeAlphabet::new(names.iter().cloned())?;
        let mut images = Vec::new();
        for (l, img) in rules {
            let letter = alphabet.parse_letter(l)?;
            let word = img
                .split_whitespace()
                .map(|t| alphabet.parse_letter(t))
                .collect::<Result<Vec<_>, _>>()?;
            images.push((letter, word));
        }
        for l in alphabet.positive_letters() {
            if !images.iter().any(|(x, _)| *x == l) {
                return Err(SubstitutionError::MissingImage(alphabet.name(l)));
            }
        }
        Self::new(alphabet, images)
    }

    /// `θ_f`: over all oriented edges when `f` is non-orientable, over the
    /// preferred positive edges when it is orientable.
    pub fn from_train_track(
        map: &GraphSelfMap,
        orientation: &Orientability,
    ) -> Result<Self, SubstitutionError> {
        let alphabet = map.graph().alphabet().clone();
        let images: Vec<(Letter, Vec<Letter>)> = match orientation {
            Orientability::NonOrientable { .. } => alphabet
                .letters()
                .map(|l| (l, map.image(l).to_vec()))
                .collect(),
            Orientability::Orientable { positive } => {
                let allowed: BTreeSet<Letter> = positive.iter().copied().collect();
                let mut out = Vec::new();
                for &l in positive {
                    let img = map.image(l).to_vec();
                    if img.iter().any(|x| !allowed.contains(x)) {
                        return Err(SubstitutionError::OrientationMismatch(alphabet.name(l)));
                    }
                    out.push((l, img));
                }
                out
            }
        };
        Self::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &EdgeAlphabet {
        &self.alphabet
    }

    /// The letters of `Σ`, sorted.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        self.images[letter.index()]
            .as_deref()
            .expect("letter belongs to the substitution alphabet")
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.images.get(letter.index()).is_some_and(Option::is_some)
    }

    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter().flat_map(|&l| self.image(l).iter().copied()).collect()
    }

    pub fn power(&self, word: &[Letter], k: usize, cap: usize) -> Result<Vec<Letter>, SubstitutionError> {
        let mut cur = word.to_vec();
        for _ in 0..k {
            let len: usize = cur.iter().map(|&l| self.image(l).len()).sum();
            if len > cap {
                return Err(SubstitutionError::SizeCap { len, cap });
            }
            cur = self.apply(&cur);
        }
        Ok(cur)
    }

    /// `m[i][j]` = occurrences of the `i`-th letter of `Σ` in `θ(j-th letter)`.
    pub fn matrix(&self) -> TransitionMatrix {
        let pos = |l: Letter| self.letters.binary_search(&l).expect("letter in Σ");
        let n = self.letters.len();
        let mut entries = vec![vec![0u64; n]; n];
        for (j, &l) in self.letters.iter().enumerate() {
            for &x in self.image(l) {
                entries[pos(x)][j] += 1;
            }
        }
        TransitionMatrix { entries }
    }

    pub fn is_primitive(&self) -> bool {
        analyze_matrix(&self.matrix()).is_ok_and(|a| a.primitive())
    }

    pub fn format(&self, word: &[Letter]) -> String {
        self.alphabet.format(word)
    }

    /// Least `k ≥ 1` with `θ^k(seed)` starting with `seed` and of length at
    /// least 2.
    pub fn eigen_exponent(&self, seed: Letter) -> Result<usize, SubstitutionError> {
        if !self.contains(seed) {
            return Err(SubstitutionError::NotEigenletter(self.alphabet.name(seed)));
        }
        let n = self.letters.len();
        let mut cur = seed;
        let mut period = None;
        for k in 1..=n {
            cur = self.image(cur)[0];
            if cur == seed {
                period = Some(k);
                break;
            }
        }
        let period = period.ok_or_else(|| SubstitutionError::NotEigenletter(self.alphabet.name(seed)))?;
        // Track |θ^k(seed)| through letter counts to avoid building words.
        let idx = |l: Letter| self.letters.binary_search(&l).expect("letter in Σ");
        let mut counts = vec![0u128; n];
        counts[idx(seed)] = 1;
        for j in 1..=(n + 1) {
            for _ in 0..period {
                let mut next = vec![0u128; n];
                for (i, &c) in counts.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for &x in self.image(self.letters[i]) {
                        next[idx(x)] = next[idx(x)].saturating_add(c);
                    }
                }
                counts = next;
            }
            if counts.iter().sum::<u128>() >= 2 {
                return Ok(period * j);
            }
        }
        Err(SubstitutionError::NotEigenletter(self.alphabet.name(seed)))
    }

    /// Letters that admit an eigenray.
    pub fn eigenletters(&self) -> Vec<Letter> {
        self.letters
            .iter()
            .copied()
            .filter(|&l| self.eigen_exponent(l).is_ok())
            .collect()
    }

    /// A prefix of the eigenray `ρ_seed` of length at least `target_len`.
    pub fn eigenray_prefix(
        &self,
        seed: Letter,
        target_len: usize,
        cap: usize,
    ) -> Result<Vec<Letter>, SubstitutionError> {
        let k = self.eigen_exponent(seed)?;
        let mut word = vec![seed];
        while word.len() < target_len {
            word = self.power(&word, k, cap)?;
        }
        Ok(word)
    }

    /// All factors of `F[θ]` of length at most `n_max`.
    ///
    /// Every factor `v` of `θ^(m+1)(a)` sits inside `θ(u)` for a factor `u` of
    /// `θ^m(a)` with `|u| ≤ |v|`, so closing the factors of the letter images
    /// under "factors of `θ(u)`" is exact.
    pub fn factor_language(&self, n_max: usize) -> Result<FactorLanguage, SubstitutionError> {
        if n_max == 0 {
            return Err(SubstitutionError::TooShort(1));
        }
        if !self.is_primitive() {
            return Err(SubstitutionError::NotPrimitive);
        }
        let mut strata: Vec<BTreeSet<EdgePath>> = vec![BTreeSet::new(); n_max];
        let mut queue: Vec<Vec<Letter>> = Vec::new();
        // Adds the factors of `word` that start before `head` and end after
        // `tail` letters from the end.
        let mut add_factors = |word: &[Letter], head: usize, tail: usize, queue: &mut Vec<Vec<Letter>>| {
            for start in 0..head.min(word.len()) {
                let shortest = (word.len() - tail + 1).saturating_sub(start).max(1);
                for len in shortest..=n_max.min(word.len() - start) {
                    let f = &word[start..start + len];
                    if strata[len - 1].insert(EdgePath::from(f)) {
                        queue.push(f.to_vec());
                    }
                }
            }
        };
        for &l in &self.letters {
            let img = self.image(l);
            add_factors(img, img.len(), img.len(), &mut queue);
        }
        // Members are closed under subwords, so a factor of θ(u) not spanning
        // from θ(first) to θ(last) was already produced by a shorter member.
        while let Some(u) = queue.pop() {
            if u.len() == 1 {
                continue;
            }
            let img = self.apply(&u);
            let head = self.image(u[0]).len();
            let tail = self.image(u[u.len() - 1]).len();
            add_factors(&img, head, tail, &mut queue);
        }
        Ok(FactorLanguage {
            alphabet: self.alphabet.clone(),
            strata,
            source: "substitution factor closure".to_string(),
        })
    }

    /// Counting functions of `F[θ]` up to `n_max`, read off a long eigenray
    /// prefix. The prefix is doubled until two consecutive lengths give the
    /// same tables.
    ///
    /// `weights` (per letter index) and `unit` define the metric: a factor
    /// counts towards `beta_metric(n)` when its weight is at most `n * unit`.
    pub fn sampled_counts(
        &self,
        n_max: usize,
        weights: &[u64],
        unit: u64,
        cap: usize,
    ) -> Result<CountTable, SubstitutionError> {
        if n_max == 0 {
            return Err(SubstitutionError::TooShort(1));
        }
        if !self.is_primitive() {
            return Err(SubstitutionError::NotPrimitive);
        }
        let seed = *self
            .eigenletters()
            .first()
            .ok_or_else(|| SubstitutionError::NotEigenletter(self.alphabet.name(self.letters[0])))?;
        let min_weight = self.letters.iter().map(|l| weights[l.index()]).min().unwrap_or(1).max(1);
        let metric_depth = (n_max as u64 * unit).div_ceil(min_weight) as usize;
        let depth = n_max.max(metric_depth);

        let mut target = (16 * depth).max(256);
        let mut previous: Option<CountTable> = None;
        // Leading rows on which the last two tables agree.
        let mut agreed = 0;
        loop {
            if target > cap {
                return Err(match previous {
                    None => SubstitutionError::SizeCap { len: target, cap },
                    Some(_) => SubstitutionError::UnderEnumerated {
                        requested: n_max,
                        achieved: agreed,
                    },
                });
            }
            let word = self.eigenray_prefix(seed, target, cap)?;
            let counts = distinct_factor_counts(&word, n_max, Some((weights, unit)));
            let table = CountTable::from_counts(counts.p, counts.weighted.expect("weights given"), n_max)
                .ok_or(SubstitutionError::Overflow(n_max))?;
            if let Some(prev) = &previous {
                if prev.p == table.p && prev.beta_metric == table.beta_metric {
                    return Ok(table);
                }
                agreed = (0..n_max)
                    .take_while(|&i| prev.p[i] == table.p[i] && prev.beta_metric[i] == table.beta_metric[i])
                    .count();
            }
            previous = Some(table);
            target = word.len() * 2;
        }
    }
}

/// A subword-closed language enumerated by length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorLanguage {
    pub alphabet: EdgeAlphabet,
    /// `strata[n - 1]` holds the members of length `n`.
    pub strata: Vec<BTreeSet<EdgePath>>,
    pub source: String,
}

impl FactorLanguage {
    pub fn new(alphabet: EdgeAlphabet, strata: Vec<BTreeSet<EdgePath>>, source: &str) -> Self {
        FactorLanguage {
            alphabet,
            strata,
            source: source.to_string(),
        }
    }

    /// All factors of length at most `n_max` of the given words.
    pub fn from_words<'a, I>(alphabet: EdgeAlphabet, words: I, n_max: usize, source: &str) -> Self
    where
        I: IntoIterator<Item = &'a [Letter]>,
    {
        let mut strata = vec![BTreeSet::new(); n_max];
        for w in words {
            for (n, stratum) in strata.iter_mut().enumerate() {
                factors_of_length(w, n + 1, stratum);
            }
        }
        Self::new(alphabet, strata, source)
    }

    pub fn n_max(&self) -> usize {
        self.strata.len()
    }

    pub fn p(&self, n: usize) -> u64 {
        self.strata.get(n.wrapping_sub(1)).map_or(0, |s| s.len() as u64)
    }

    pub fn beta(&self, n: usize) -> u64 {
        (1..=n.min(self.n_max())).map(|m| self.p(m)).sum()
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        self.strata
            .get(word.len().wrapping_sub(1))
            .is_some_and(|s| s.contains(&EdgePath::from(word)))
    }

    pub fn members(&self) -> impl Iterator<Item = &EdgePath> {
        self.strata.iter().flatten()
    }

    /// Restriction to lengths `≤ n`.
    pub fn truncate(&self, n: usize) -> FactorLanguage {
        FactorLanguage {
            alphabet: self.alphabet.clone(),
            strata: self.strata.iter().take(n).cloned().collect(),
            source: self.source.clone(),
        }
    }

    /// First member with a subword missing from the language, if any.
    pub fn subword_closure_violation(&self) -> Option<(EdgePath, EdgePath)> {
        for w in self.members() {
            if w.len() < 2 {
                continue;
            }
            // Checking both maximal proper factors suffices inductively.
            for sub in [&w[1..], &w[..w.len() - 1]] {
                if !self.contains(sub) {
                    return Some((w.clone(), EdgePath::from(sub)));
                }
            }
        }
        None
    }

    pub fn is_subword_closed(&self) -> bool {
        self.subword_closure_violation().is_none()
    }

    /// Whether `γ ∈ L ⟺ γ⁻¹ ∈ L`.
    pub fn is_inverse_closed(&self) -> bool {
        self.members().all(|w| self.contains(&w.inverse()))
    }

    /// Counting table with the given letter weights (see
    /// [`Substitution::sampled_counts`]). Metric counts are exact only for
    /// thresholds whose combinatorial depth is enumerated; the returned
    /// table's `certified_depth` says how far that is.
    pub fn count_table(&self, weights: &[u64], unit: u64) -> CountTable {
        let n_max = self.n_max();
        let p: Vec<u64> = (1..=n_max).map(|n| self.p(n)).collect();
        let mut hist = vec![0u64; n_max];
        for w in self.members() {
            let total: u64 = w.iter().map(|l| weights[l.index()]).sum();
            let bucket = total.div_ceil(unit) as usize;
            if (1..=n_max).contains(&bucket) {
                hist[bucket - 1] += 1;
            }
        }
        let mut table = CountTable::from_counts(p, hist, n_max).expect("member counts fit in 64 bits");
        // Words of weight ≤ n·unit have at most n·unit/min_weight letters.
        let min_weight = self.alphabet.letters().map(|l| weights[l.index()]).min().unwrap_or(1).max(1);
        let metric_ok = (n_max as u64 * min_weight / unit) as usize;
        table.metric_depth = metric_ok.min(n_max);
        table
    }
}

/// Counting functions `p(n)`, `β(n)` and the metric `β_𝔍(n)` for
/// `n = 1..=n_max`, stored at index `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub p: Vec<u64>,
    pub beta: Vec<u64>,
    pub beta_metric: Vec<u64>,
    /// Largest `n` for which `p` and `beta` are certified complete.
    pub certified_depth: usize,
    /// Largest `n` for which `beta_metric` is certified complete.
    pub metric_depth: usize,
}

impl CountTable {
    /// `metric_hist[n - 1]` counts members with weight in `((n-1)u, nu]`.
    /// `None` when a cumulative count overflows.
    pub fn from_counts(p: Vec<u64>, metric_hist: Vec<u64>, n_max: usize) -> Option<Self> {
        let cumulative = |v: &[u64]| {
            let mut acc = 0u64;
            v.iter()
                .map(|&x| {
                    acc = acc.checked_add(x)?;
                    Some(acc)
                })
                .collect::<Option<Vec<_>>>()
        };
        Some(CountTable {
            beta: cumulative(&p)?,
            beta_metric: cumulative(&metric_hist)?,
            p,
            certified_depth: n_max,
            metric_depth: n_max,
        })
    }

    pub fn n_max(&self) -> usize {
        self.p.len()
    }

    /// Multiplies every count by `k`; `None` on overflow.
    pub fn scaled(&self, k: u64) -> Option<CountTable> {
        let s = |v: &[u64]| v.iter().map(|x| x.checked_mul(k)).collect::<Option<Vec<_>>>();
        Some(CountTable {
            p: s(&self.p)?,
            beta: s(&self.beta)?,
            beta_metric: s(&self.beta_metric)?,
            certified_depth: self.certified_depth,
            metric_depth: self.metric_depth,
        })
    }

    pub fn rows(&self) -> Vec<ComplexityRow> {
        (0..self.n_max())
            .map(|i| ComplexityRow {
                n: i + 1,
                p: self.p[i],
                beta: self.beta[i],
                beta_metric: (i < self.metric_depth).then(|| self.beta_metric[i]),
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n: usize,
    pub p: u64,
    pub beta: u64,
    /// `None` beyond the certified metric depth.
    pub beta_metric: Option<u64>,
}

/// `(n, p(n), β(n))` for every enumerated length.
pub fn complexity_table(lang: &FactorLanguage) -> Vec<(usize, u64, u64)> {
    let mut beta = 0;
    (1..=lang.n_max())
        .map(|n| {
            beta += lang.p(n);
            (n, lang.p(n), beta)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    /// `log p(n) / n` for `n = 1..=n_max`.
    pub sequence: Vec<f64>,
    /// Mean of the last quartile of `sequence`.
    pub entropy: f64,
}

pub fn entropy_estimate(p: &[u64]) -> Result<EntropyEstimate, SubstitutionError> {
    if p.len() < 4 {
        return Err(SubstitutionError::TooShort(4));
    }
    let sequence: Vec<f64> = p
        .iter()
        .enumerate()
        .map(|(i, &c)| (c.max(1) as f64).ln() / (i + 1) as f64)
        .collect();
    let tail = p.len().div_ceil(4);
    let entropy = sequence[p.len() - tail..].iter().sum::<f64>() / tail as f64;
    Ok(EntropyEstimate { sequence, entropy })
}

/// Which inequality failed in a growth-equivalence scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `f(n) ≤ C g(Cn)` failed.
    FirstBelowSecond,
    /// `g(n) ≤ C f(Cn)` failed.
    SecondBelowFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub c: u64,
    pub n: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthWitness {
    /// Least `C` such that both inequalities hold on the tested window.
    Equivalent { c: u64 },
    /// First violation for each tested `C`.
    Inequivalent { frontier: Vec<Frontier> },
}

/// Scans `C = 1..=c_max` for `f(n) ≤ C g(Cn)` and `g(n) ≤ C f(Cn)` over all
/// `n` with `Cn` inside both tables. A pass is evidence on a finite window.
pub fn growth_equivalence_witness(
    f: &[u64],
    g: &[u64],
    c_max: u64,
) -> Result<GrowthWitness, SubstitutionError> {
    let monotone = |t: &[u64]| t.windows(2).all(|w| w[0] <= w[1]);
    if !monotone(f) || !monotone(g) {
        return Err(SubstitutionError::NotMonotone);
    }
    let n_max = f.len().min(g.len());
    if n_max == 0 || c_max == 0 {
        return Err(SubstitutionError::InsufficientData);
    }
    let mut frontier = Vec::new();
    for c in 1..=c_max.min(n_max as u64) {
        let cu = c as usize;
        let mut failure = None;
        for n in 1..=n_max / cu {
            let (fv, gv) = (f[n - 1], g[n - 1]);
            let (fc, gc) = (f[cu * n - 1], g[cu * n - 1]);
            if fv > c * gc {
                failure = Some(Side::FirstBelowSecond);
            } else if gv > c * fc {
                failure = Some(Side::SecondBelowFirst);
            }
            if let Some(side) = failure {
                frontier.push(Frontier { c, n, side });
                break;
            }
        }
        if failure.is_none() {
            return Ok(GrowthWitness::Equivalent { c });
        }
    }
    Ok(GrowthWitness::Inequivalent { frontier })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_map::{tests::rose_map, DEFAULT_SIZE_CAP};
    use crate::words::factors;

    const CAP: usize = DEFAULT_SIZE_CAP;

    fn fib() -> Substitution {
        Substitution::from_names(&[("a", "a b"), ("b", "a")]).unwrap()
    }

    fn thue_morse() -> Substitution {
        Substitution::from_names(&[("a", "a b"), ("b", "b a")]).unwrap()
    }

    fn letter(s: &Substitution, name: &str) -> Letter {
        s.alphabet().parse_letter(name).unwrap()
    }

    /// Independent oracle: factors of a long eigenray prefix.
    fn prefix_oracle(s: &Substitution, seed: &str, len: usize, n: usize) -> Vec<u64> {
        let w = s.eigenray_prefix(letter(s, seed), len, CAP).unwrap();
        let set = factors(&w[..len], n).unwrap();
        (1..=n).map(|k| set.iter().filter(|f| f.len() == k).count() as u64).collect()
    }

    #[test]
    fn eigenray_examples() {
        let f = fib();
        let w = f.eigenray_prefix(letter(&f, "a"), 8, CAP).unwrap();
        assert_eq!(f.format(&w[..8]), "a b a a b a b a");
        let t = thue_morse();
        let w = t.eigenray_prefix(letter(&t, "a"), 8, CAP).unwrap();
        assert_eq!(t.format(&w[..8]), "a b b a b a a b");
        let long = f.eigenray_prefix(letter(&f, "a"), 50, CAP).unwrap();
        let short = f.eigenray_prefix(letter(&f, "a"), 20, CAP).unwrap();
        assert!(long.starts_with(&short));
        // θ^k extends the prefix.
        let k = f.eigen_exponent(letter(&f, "a")).unwrap();
        assert!(f.power(&short, k, CAP).unwrap().starts_with(&short));
    }

    #[test]
    fn eigen_exponent_follows_first_letter_cycle() {
        // a -> b a, b -> a b: first letters swap, so θ² fixes both.
        let s = Substitution::from_names(&[("a", "b a"), ("b", "a b")]).unwrap();
        assert_eq!(s.eigen_exponent(letter(&s, "a")).unwrap(), 2);
        assert_eq!(fib().eigen_exponent(letter(&fib(), "a")).unwrap(), 1);
        // b -> a never returns to b as a first letter.
        assert!(matches!(
            fib().eigen_exponent(letter(&fib(), "b")),
            Err(SubstitutionError::NotEigenletter(_))
        ));
    }

    #[test]
    fn factor_language_examples() {
        let lang = fib().factor_language(3).unwrap();
        assert_eq!((1..=3).map(|n| lang.p(n)).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(prefix_oracle(&fib(), "a", 200, 3), vec![2, 3, 4]);
        let lang = thue_morse().factor_language(3).unwrap();
        assert_eq!((1..=3).map(|n| lang.p(n)).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert_eq!(prefix_oracle(&thue_morse(), "a", 200, 3), vec![2, 4, 6]);
        let constant = Substitution::from_names(&[("a", "a a")]).unwrap();
        let lang = constant.factor_language(6).unwrap();
        assert!((1..=6).all(|n| lang.p(n) == 1));
    }

    #[test]
    fn non_primitive_rejected() {
        let s = Substitution::from_names(&[("a", "a b"), ("b", "b")]).unwrap();
        assert_eq!(s.factor_language(3), Err(SubstitutionError::NotPrimitive));
    }

    #[test]
    fn closure_matches_eigenray_prefix_and_doubling() {
        for s in [fib(), thue_morse(), Substitution::from_names(&[("a", "a b c"), ("b", "a c"), ("c", "b")]).unwrap()] {
            let lang = s.factor_language(12).unwrap();
            for seed in s.eigenletters() {
                let name = s.alphabet().name(seed);
                let a = prefix_oracle(&s, &name, 2000, 12);
                let b = prefix_oracle(&s, &name, 4000, 12);
                assert_eq!(a, b);
                assert_eq!(a, (1..=12).map(|n| lang.p(n)).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn complexity_tables() {
        let lang = fib().factor_language(5).unwrap();
        let table = complexity_table(&lang);
        assert_eq!(table[4], (5, 6, 20));
        assert_eq!(table[0].1, table[0].2);
    }

    #[test]
    fn sampled_counts_agree_with_closure() {
        let s = thue_morse();
        let unit_weights = vec![1u64; s.alphabet().letter_count()];
        let sampled = s.sampled_counts(30, &unit_weights, 1, CAP).unwrap();
        let lang = s.factor_language(30).unwrap();
        assert_eq!(sampled.p, (1..=30).map(|n| lang.p(n)).collect::<Vec<_>>());
        assert_eq!(sampled.beta, sampled.beta_metric);
        let fibs = fib().sampled_counts(200, &[1, 1, 1, 1], 1, CAP).unwrap();
        assert!(fibs.p.iter().enumerate().all(|(i, &p)| p == i as u64 + 2));
    }

    #[test]
    fn entropy_examples() {
        let p: Vec<u64> = (1..=20).map(|n| n + 1).collect();
        let e = entropy_estimate(&p).unwrap();
        assert!((e.sequence[19] - 21f64.ln() / 20.0).abs() < 1e-15);
        assert!(e.sequence.windows(2).all(|w| w[1] < w[0]));
        let full: Vec<u64> = (1..=12).map(|n| 4 * 3u64.pow(n - 1)).collect();
        let e = entropy_estimate(&full).unwrap();
        assert!((e.entropy - 3f64.ln()).abs() / 3f64.ln() < 0.05);
        assert_eq!(entropy_estimate(&[1; 8]).unwrap().entropy, 0.0);
        assert!(entropy_estimate(&[1, 1, 1]).is_err());
    }

    #[test]
    fn growth_witness_examples() {
        let f: Vec<u64> = (1..=30).map(|n| n + 1).collect();
        assert_eq!(growth_equivalence_witness(&f, &f, 5).unwrap(), GrowthWitness::Equivalent { c: 1 });
        let g: Vec<u64> = f.iter().map(|x| 2 * x).collect();
        assert_eq!(growth_equivalence_witness(&f, &g, 5).unwrap(), GrowthWitness::Equivalent { c: 2 });
        let e: Vec<u64> = (1..=30).map(|n| 4 * 3u64.pow(n as u32 - 1)).collect();
        match growth_equivalence_witness(&f, &e, 5).unwrap() {
            GrowthWitness::Inequivalent { frontier } => {
                assert_eq!(frontier.len(), 5);
                assert!(frontier.iter().all(|fr| fr.side == Side::SecondBelowFirst));
            }
            w => panic!("{w:?}"),
        }
        assert_eq!(growth_equivalence_witness(&[], &[], 3), Err(SubstitutionError::InsufficientData));
        assert_eq!(growth_equivalence_witness(&[2, 1], &[1, 2], 3), Err(SubstitutionError::NotMonotone));
    }

    #[test]
    fn from_train_track_orientable() {
        let f = rose_map("a b", "a");
        let o = f.orientability(CAP);
        let theta = Substitution::from_train_track(&f, &o).unwrap();
        assert_eq!(theta.letters().len(), 2);
        assert_eq!(theta.format(theta.image(letter(&theta, "a"))), "a b");
        assert_eq!(theta.format(theta.image(letter(&theta, "b"))), "a");
        assert!(theta.is_primitive());
    }

    #[test]
    fn from_train_track_non_orientable() {
        let f = rose_map("a b", "a'");
        let o = f.orientability(CAP);
        assert!(!o.is_orientable());
        let theta = Substitution::from_train_track(&f, &o).unwrap();
        assert_eq!(theta.letters().len(), 4);
        let img = |n: &str| theta.format(theta.image(letter(&theta, n)));
        assert_eq!(img("a"), "a b");
        assert_eq!(img("b"), "a'");
        assert_eq!(img("a'"), "b' a'");
        assert_eq!(img("b'"), "a");
        // Oracle expansion: θ(w⁻¹) = θ(w)⁻¹.
        let w = theta.alphabet().parse_path("a b a'").unwrap();
        assert_eq!(
            EdgePath::from(theta.apply(&w.inverse())),
            EdgePath::from(theta.apply(&w)).inverse()
        );
        assert!(theta.is_primitive());
    }

    #[test]
    fn orientation_mismatch() {
        let f = rose_map("a b", "a'");
        let wrong = Orientability::Orientable {
            positive: vec![Letter::positive(0), Letter::positive(1)],
        };
        assert!(matches!(
            Substitution::from_train_track(&f, &wrong),
            Err(SubstitutionError::OrientationMismatch(_))
        ));
    }
}

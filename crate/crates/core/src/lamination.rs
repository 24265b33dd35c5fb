//! Laminary languages on marked graphs: the attracting lamination of a train
//! track map, user-supplied languages, metric counting functions, and the
//! transport of a language along the collapse of a maximal subtree.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph_map::{analyze_matrix, GraphSelfMap, MapError, Orientability, TrainTrackVerdict};
use crate::marked_graph::{CollapseData, GraphError, MarkedMetricGraph};
use crate::substitution::{
    growth_equivalence_witness, CountTable, FactorLanguage, GrowthWitness, Substitution, SubstitutionError,
};
use crate::words::{is_reduced, EdgePath, Letter, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaminationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0} is not a reduced edge path of the graph")]
    NotAPath(String),
    #[error("language is flagged symmetric but {0} is present without its inverse")]
    NotSymmetric(String),
    #[error("language is empty")]
    Empty,
    #[error("language is enumerated to depth {achieved}, {requested} needed")]
    UnderEnumerated { requested: usize, achieved: usize },
    #[error("more than {cap} members would be enumerated")]
    SizeCap { cap: usize },
    #[error("count for length {0} overflows 64 bits")]
    Overflow(usize),
    #[error("language lives on graph {found:?}, expected {want:?}")]
    WrongGraph { found: String, want: String },
}

impl LaminationError {
    /// Whether this error means a count was requested beyond what was
    /// enumerated, as opposed to a failed precondition.
    pub fn is_under_enumeration(&self) -> bool {
        matches!(
            self,
            LaminationError::UnderEnumerated { .. }
                | LaminationError::Substitution(SubstitutionError::UnderEnumerated { .. })
        )
    }

    pub fn is_size_cap(&self) -> bool {
        matches!(
            self,
            LaminationError::SizeCap { .. }
                | LaminationError::Overflow(_)
                | LaminationError::Map(MapError::SizeCap { .. })
                | LaminationError::Substitution(SubstitutionError::SizeCap { .. })
                | LaminationError::Substitution(SubstitutionError::Overflow(_))
        )
    }
}

/// Where a laminary language came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Attracting lamination of a train track map. `squared` records that
    /// the substitution was built from `f²` because `f` reverses an
    /// orientation preserved by `f²`.
    Attracting { orientable: bool, squared: bool },
    /// Image of another language under a subtree collapse.
    Transported { from: String },
    UserSupplied,
}

/// How members beyond the stored depth are produced.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Generator {
    /// `F[θ]`, united with its inverse copy when `doubled`.
    Substitution { theta: Substitution, doubled: bool },
    /// All reduced paths whose factors of length `window` are members.
    FiniteMemory { window: usize, allowed: BTreeSet<EdgePath> },
    /// Nothing beyond the stored strata.
    Explicit,
}

/// A subword-closed set of nonempty reduced edge paths in a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminaryLanguage {
    pub graph: MarkedMetricGraph,
    pub language: FactorLanguage,
    pub symmetric: bool,
    pub origin: Origin,
    generator: Generator,
}

impl LaminaryLanguage {
    /// A language given by finitely many paths. The list is closed under
    /// subpaths; longer members are the reduced paths all of whose subpaths
    /// of the longest listed length are members.
    pub fn user_supplied(
        graph: MarkedMetricGraph,
        paths: &[EdgePath],
        symmetric: bool,
    ) -> Result<Self, LaminationError> {
        let alpha = graph.alphabet().clone();
        let mut window = 0;
        for p in paths {
            alpha.check(p)?;
            if p.is_empty() || !is_reduced(p) || !graph.is_path(p) {
                return Err(LaminationError::NotAPath(alpha.format(p)));
            }
            window = window.max(p.len());
        }
        if window == 0 {
            return Err(LaminationError::Empty);
        }
        let language = FactorLanguage::from_words(
            alpha.clone(),
            paths.iter().map(|p| p.letters()),
            window,
            "user supplied",
        );
        if symmetric {
            if let Some(w) = language.members().find(|w| !language.contains(&w.inverse())) {
                return Err(LaminationError::NotSymmetric(alpha.format(w)));
            }
        }
        let allowed = language.strata[window - 1].clone();
        Ok(LaminaryLanguage {
            graph,
            language,
            symmetric,
            origin: Origin::UserSupplied,
            generator: Generator::FiniteMemory { window, allowed },
        })
    }

    /// A language known only through the given strata.
    pub fn explicit(graph: MarkedMetricGraph, language: FactorLanguage, symmetric: bool, origin: Origin) -> Self {
        LaminaryLanguage {
            graph,
            language,
            symmetric,
            origin,
            generator: Generator::Explicit,
        }
    }

    pub fn n_max(&self) -> usize {
        self.language.n_max()
    }

    /// The substitution generating the language, if any, and whether the
    /// language is its factor set united with the inverse copy.
    pub fn substitution(&self) -> Option<(&Substitution, bool)> {
        match &self.generator {
            Generator::Substitution { theta, doubled } => Some((theta, *doubled)),
            _ => None,
        }
    }

    /// Enumerates every member of length at most `depth`.
    pub fn enumerate(&self, depth: usize, cap: usize) -> Result<FactorLanguage, LaminationError> {
        if depth <= self.n_max() {
            return Ok(self.language.truncate(depth));
        }
        match &self.generator {
            Generator::Explicit => Err(LaminationError::UnderEnumerated {
                requested: depth,
                achieved: self.n_max(),
            }),
            Generator::Substitution { theta, doubled } => {
                let lang = theta.factor_language(depth)?;
                Ok(if *doubled { with_inverses(&lang) } else { lang })
            }
            Generator::FiniteMemory { window, allowed } => {
                let mut strata = self.language.strata.clone();
                let mut total: usize = strata.iter().map(BTreeSet::len).sum();
                while strata.len() < depth {
                    let mut next = BTreeSet::new();
                    for w in strata.last().expect("window is positive") {
                        for l in self.graph.alphabet().letters() {
                            if w.last().is_some_and(|x| x == l.inverse()) {
                                continue;
                            }
                            let mut tail: Vec<Letter> = w[w.len() + 1 - window..].to_vec();
                            tail.push(l);
                            if allowed.contains(&EdgePath::from(tail)) {
                                let mut ext = w.letters().to_vec();
                                ext.push(l);
                                next.insert(EdgePath::from(ext));
                            }
                        }
                    }
                    total += next.len();
                    if total > cap {
                        return Err(LaminationError::SizeCap { cap });
                    }
                    strata.push(next);
                }
                Ok(FactorLanguage::new(
                    self.graph.alphabet().clone(),
                    strata,
                    &self.language.source,
                ))
            }
        }
    }

    /// `p`, `β` and the metric `β_𝔍` for `n ≤ n_max`.
    ///
    /// Metric counts are certified to `metric_depth`; asking [`beta_metric`]
    /// beyond it is an error rather than an undercount.
    pub fn counts(&self, n_max: usize, cap: usize) -> Result<CountTable, LaminationError> {
        let weights = self.graph.letter_weights();
        let unit = self.graph.length_unit();
        let min_weight = weights.iter().copied().min().unwrap_or(1).max(1);
        let metric_letters = (n_max as u64 * unit / min_weight) as usize;
        match &self.generator {
            Generator::Substitution { theta, doubled } => {
                if metric_letters.max(n_max) <= self.n_max() {
                    return Ok(stored_counts(&self.language, n_max, &weights, unit));
                }
                let table = theta.sampled_counts(n_max, &weights, unit, cap)?;
                if *doubled {
                    table.scaled(2).ok_or(LaminationError::Overflow(n_max))
                } else {
                    Ok(table)
                }
            }
            Generator::Explicit => {
                if n_max > self.n_max() {
                    return Err(LaminationError::UnderEnumerated {
                        requested: n_max,
                        achieved: self.n_max(),
                    });
                }
                Ok(stored_counts(&self.language, n_max, &weights, unit))
            }
            Generator::FiniteMemory { window, allowed } => {
                self.finite_memory_counts(*window, allowed, n_max, &weights, unit)
            }
        }
    }

    /// Transfer-matrix counts: a state is the last `window` letters together
    /// with the accumulated weight.
    fn finite_memory_counts(
        &self,
        window: usize,
        allowed: &BTreeSet<EdgePath>,
        n_max: usize,
        weights: &[u64],
        unit: u64,
    ) -> Result<CountTable, LaminationError> {
        let weight_cap = n_max as u64 * unit;
        let weight_of = |w: &[Letter]| w.iter().map(|l| weights[l.index()]).sum::<u64>();
        let mut p = Vec::with_capacity(n_max);
        let mut hist = vec![0u64; n_max];
        let add_hist = |w: u64, count: u64, hist: &mut Vec<u64>| -> Result<(), LaminationError> {
            if w <= weight_cap {
                let bucket = (w.div_ceil(unit) as usize).max(1);
                hist[bucket - 1] = hist[bucket - 1].checked_add(count).ok_or(LaminationError::Overflow(bucket))?;
            }
            Ok(())
        };
        for n in 1..=n_max.min(window) {
            let stratum = &self.language.strata[n - 1];
            p.push(stratum.len() as u64);
            for w in stratum {
                add_hist(weight_of(w), 1, &mut hist)?;
            }
        }
        // Counts of members of the current length by (last window, weight).
        let mut state: BTreeMap<(EdgePath, u64), u64> = BTreeMap::new();
        for w in allowed {
            *state.entry((w.clone(), weight_of(w))).or_default() += 1;
        }
        // Successors of each window.
        let mut succ: BTreeMap<&EdgePath, Vec<(EdgePath, Letter)>> = BTreeMap::new();
        for w in allowed {
            let mut list = Vec::new();
            for l in self.graph.alphabet().letters() {
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                let mut tail: Vec<Letter> = w[1..].to_vec();
                tail.push(l);
                let tail = EdgePath::from(tail);
                if allowed.contains(&tail) {
                    list.push((tail, l));
                }
            }
            succ.insert(w, list);
        }
        // Lengths beyond `n_max` still matter for the metric count when some
        // letters weigh less than one unit.
        let min_weight = weights.iter().copied().min().unwrap_or(1).max(1);
        let last_len = n_max.max((weight_cap / min_weight) as usize);
        let mut n = window;
        while n < last_len {
            n += 1;
            let mut next: BTreeMap<(EdgePath, u64), u64> = BTreeMap::new();
            for ((w, wt), count) in &state {
                for (tail, l) in &succ[w] {
                    let nw = wt + weights[l.index()];
                    if n > n_max && nw > weight_cap {
                        continue;
                    }
                    let slot = next.entry((tail.clone(), nw)).or_default();
                    *slot = slot.checked_add(*count).ok_or(LaminationError::Overflow(n))?;
                }
            }
            state = next;
            if n <= n_max {
                let total = state
                    .values()
                    .try_fold(0u64, |acc, &c| acc.checked_add(c))
                    .ok_or(LaminationError::Overflow(n))?;
                p.push(total);
            }
            for ((_, wt), count) in &state {
                add_hist(*wt, *count, &mut hist)?;
            }
            if n > n_max && state.is_empty() {
                break;
            }
        }
        let mut table = CountTable::from_counts(p, hist, n_max).ok_or(LaminationError::Overflow(n_max))?;
        table.metric_depth = n_max;
        Ok(table)
    }
}

/// Counts from stored strata, cut to `n_max`.
fn stored_counts(lang: &FactorLanguage, n_max: usize, weights: &[u64], unit: u64) -> CountTable {
    let full = lang.count_table(weights, unit);
    let cut = |v: &[u64]| v[..n_max].to_vec();
    CountTable {
        p: cut(&full.p),
        beta: cut(&full.beta),
        beta_metric: cut(&full.beta_metric),
        certified_depth: full.certified_depth.min(n_max),
        metric_depth: full.metric_depth.min(n_max),
    }
}

/// Union of a language with the reversed inverses of its members.
fn with_inverses(lang: &FactorLanguage) -> FactorLanguage {
    let strata = lang
        .strata
        .iter()
        .map(|s| s.iter().flat_map(|w| [w.clone(), w.inverse()]).collect())
        .collect();
    FactorLanguage::new(lang.alphabet.clone(), strata, &lang.source)
}

/// The substitution `θ_f` and whether the language is doubled.
fn lamination_substitution(
    map: &GraphSelfMap,
    cap: usize,
) -> Result<(Substitution, bool, bool), LaminationError> {
    match map.orientability(cap) {
        o @ Orientability::Orientable { .. } => Ok((Substitution::from_train_track(map, &o)?, true, false)),
        o @ Orientability::NonOrientable { .. } => {
            let theta = Substitution::from_train_track(map, &o)?;
            if theta.is_primitive() {
                return Ok((theta, false, false));
            }
            // f may reverse an orientation that f² preserves; both maps have
            // the same iterated images up to parity of the exponent.
            let square = map.compose(map)?;
            match square.orientability(cap) {
                o2 @ Orientability::Orientable { .. } => {
                    let theta2 = Substitution::from_train_track(&square, &o2)?;
                    if theta2.is_primitive() {
                        return Ok((theta2, true, true));
                    }
                    Err(LaminationError::Precondition(
                        "the substitution of f² is not primitive".into(),
                    ))
                }
                _ => Err(LaminationError::Precondition(
                    "the substitution over all oriented edges is not primitive".into(),
                )),
            }
        }
    }
}

/// `(L_f)_Γ` enumerated to `n_max`: `F[θ_f]` when `f` is non-orientable, and
/// `F[θ_f]` united with its inverse copy when it is orientable.
pub fn attracting_language(
    map: &GraphSelfMap,
    n_max: usize,
    cap: usize,
) -> Result<LaminaryLanguage, LaminationError> {
    if n_max == 0 {
        return Err(LaminationError::Precondition("n_max must be positive".into()));
    }
    if let TrainTrackVerdict::Illegal { edge, .. } = map.is_train_track() {
        let name = map.graph().alphabet().name(edge);
        return Err(LaminationError::Precondition(format!(
            "not a train track map: some iterate of {name} is not reduced"
        )));
    }
    let analysis = analyze_matrix(&map.transition_matrix())?;
    if !analysis.primitive() {
        return Err(LaminationError::Precondition("transition matrix is not primitive".into()));
    }
    if !analysis.expanding {
        return Err(LaminationError::Precondition("map is not expanding".into()));
    }
    let (theta, doubled, squared) = lamination_substitution(map, cap)?;
    let base = theta.factor_language(n_max)?;
    let language = if doubled {
        let doubled_lang = with_inverses(&base);
        let total: usize = doubled_lang.strata.iter().map(BTreeSet::len).sum();
        let half: usize = base.strata.iter().map(BTreeSet::len).sum();
        if total != 2 * half {
            return Err(LaminationError::Precondition(
                "positive and inverse parts of the language overlap".into(),
            ));
        }
        doubled_lang
    } else {
        base
    };
    let mut language = language;
    language.source = "attracting lamination".to_string();
    Ok(LaminaryLanguage {
        graph: map.graph().clone(),
        language,
        symmetric: true,
        origin: Origin::Attracting {
            orientable: doubled && !squared,
            squared,
        },
        generator: Generator::Substitution { theta, doubled },
    })
}

/// `β_{L,𝔍}(n)`: members of metric length at most `n`.
pub fn beta_metric(lang: &LaminaryLanguage, n: usize, cap: usize) -> Result<u64, LaminationError> {
    if n == 0 {
        return Ok(0);
    }
    let table = lang.counts(n, cap)?;
    if table.metric_depth < n {
        return Err(LaminationError::UnderEnumerated {
            requested: n,
            achieved: table.metric_depth,
        });
    }
    Ok(table.beta_metric[n - 1])
}

/// One row of a transport comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportRow {
    pub n: usize,
    pub p_base: u64,
    pub p_rose: u64,
    /// `p_Γ(D·n)`.
    pub p_base_stretched: u64,
    /// `p_Γ′(n) ≤ p_Γ(D·n)`.
    pub upper_holds: bool,
    /// `p_Γ(n) ≤ C₀·p_Γ′(n)`.
    pub lower_holds: bool,
    /// Largest number of length-`n` base members with the same projection.
    pub max_fiber: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportReport {
    pub diameter: usize,
    pub length_factor: usize,
    pub multiplicity_bound: usize,
    /// Enumeration depth used on the base graph.
    pub base_depth: usize,
    pub rows: Vec<TransportRow>,
    /// Least `D′` with `p_Γ′(n) ≤ p_Γ(D′n)` on the window.
    pub empirical_length_factor: Option<usize>,
    /// `max p_Γ(n) / p_Γ′(n)` on the window.
    pub empirical_multiplicity: f64,
    pub witness: GrowthWitness,
    pub rose_language: LaminaryLanguage,
}

impl TransportReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.upper_holds && r.lower_holds)
    }
}

/// Projects a language on `cd.base` to the rose and compares counting
/// functions for `n ≤ n_max`.
///
/// A rose path of length `n` lifts to a base path of length at most
/// `n + D(n − 1)`, so the base is enumerated to `(D + 1)·n_max`.
pub fn transport_compare(
    lang: &LaminaryLanguage,
    cd: &CollapseData,
    n_max: usize,
    c_max: u64,
    cap: usize,
) -> Result<TransportReport, LaminationError> {
    if lang.graph != cd.base {
        return Err(LaminationError::WrongGraph {
            found: lang.graph.name().to_string(),
            want: cd.base.name().to_string(),
        });
    }
    if n_max == 0 {
        return Err(LaminationError::Precondition("n_max must be positive".into()));
    }
    let d = cd.length_factor();
    let base_depth = (cd.diameter + 1) * n_max;
    let base_depth = base_depth.max(d * n_max);
    let base = lang.enumerate(base_depth, cap)?;

    let mut rose_strata: Vec<BTreeSet<EdgePath>> = vec![BTreeSet::new(); n_max];
    let mut fibers: Vec<BTreeMap<EdgePath, u64>> = vec![BTreeMap::new(); n_max];
    for w in base.members() {
        let img = cd.project_unchecked(w);
        if img.is_empty() || img.len() > n_max {
            continue;
        }
        if w.len() <= n_max {
            *fibers[w.len() - 1].entry(img.clone()).or_default() += 1;
        }
        rose_strata[img.len() - 1].insert(img);
    }
    let rose_lang = FactorLanguage::new(cd.rose.alphabet().clone(), rose_strata, "transported");
    if let Some((w, sub)) = rose_lang.subword_closure_violation() {
        let a = cd.rose.alphabet();
        return Err(LaminationError::Precondition(format!(
            "projected language is not subword closed: {} lacks {}",
            a.format(&w),
            a.format(&sub)
        )));
    }

    let c0 = cd.multiplicity_bound as u64;
    let rows: Vec<TransportRow> = (1..=n_max)
        .map(|n| {
            let p_base = base.p(n);
            let p_rose = rose_lang.p(n);
            let p_base_stretched = base.p(d * n);
            TransportRow {
                n,
                p_base,
                p_rose,
                p_base_stretched,
                upper_holds: p_rose <= p_base_stretched,
                lower_holds: p_base <= c0 * p_rose,
                max_fiber: fibers[n - 1].values().copied().max().unwrap_or(0),
            }
        })
        .collect();
    let empirical_length_factor =
        (1..=base_depth / n_max).find(|&k| (1..=n_max).all(|n| rose_lang.p(n) <= base.p(k * n)));
    let empirical_multiplicity = rows
        .iter()
        .filter(|r| r.p_rose > 0)
        .map(|r| r.p_base as f64 / r.p_rose as f64)
        .fold(0.0, f64::max);
    let base_p: Vec<u64> = (1..=n_max).map(|n| base.p(n)).collect();
    let rose_p: Vec<u64> = (1..=n_max).map(|n| rose_lang.p(n)).collect();
    let witness = growth_equivalence_witness(&base_p, &rose_p, c_max)?;

    let rose_language = LaminaryLanguage::explicit(
        cd.rose.clone(),
        rose_lang,
        lang.symmetric,
        Origin::Transported {
            from: lang.graph.name().to_string(),
        },
    );
    Ok(TransportReport {
        diameter: cd.diameter,
        length_factor: d,
        multiplicity_bound: cd.multiplicity_bound,
        base_depth,
        rows,
        empirical_length_factor,
        empirical_multiplicity,
        witness,
        rose_language,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_map::tests::{fibonacci, rose2, rose_map, theta_map};
    use crate::graph_map::DEFAULT_SIZE_CAP;
    use crate::marked_graph::{maximal_subtree, EdgeSpec};
    use crate::words::factors_of_length;

    fn names(lang: &FactorLanguage, n: usize) -> Vec<String> {
        lang.strata[n - 1].iter().map(|w| lang.alphabet.format(w)).collect()
    }

    /// Factors of all iterates `f^k(e)`, `k ≤ k_max`, over every letter.
    fn iterate_oracle(map: &GraphSelfMap, n: usize, k_max: usize) -> BTreeSet<EdgePath> {
        let mut out = BTreeSet::new();
        for l in map.graph().alphabet().letters() {
            for k in 1..=k_max {
                let w = map.apply_power(&[l], k, DEFAULT_SIZE_CAP).unwrap();
                factors_of_length(&w, n, &mut out);
            }
        }
        out
    }

    fn rank_three() -> GraphSelfMap {
        let g = MarkedMetricGraph::rose("r3", &["a", "b", "c"]).unwrap();
        GraphSelfMap::from_literals(g, &[], &[("a", "b' c b"), ("b", "a'"), ("c", "b")]).unwrap()
    }

    #[test]
    fn fibonacci_attracting_language() {
        let lang = attracting_language(&fibonacci(), 2, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(names(&lang.language, 1), ["a", "a'", "b", "b'"]);
        assert_eq!(names(&lang.language, 2), ["a a", "a b", "a' a'", "a' b'", "b a", "b' a'"]);
        assert_eq!((lang.language.p(1), lang.language.p(2)), (4, 6));
        assert_eq!(lang.origin, Origin::Attracting { orientable: true, squared: false });
        assert!(lang.language.is_inverse_closed());
    }

    #[test]
    fn orientable_counts_are_doubled() {
        let lang = attracting_language(&fibonacci(), 12, DEFAULT_SIZE_CAP).unwrap();
        let theta = Substitution::from_names(&[("a", "a b"), ("b", "a")]).unwrap();
        let half = theta.factor_language(12).unwrap();
        for n in 1..=12 {
            assert_eq!(lang.language.p(n), 2 * half.p(n));
            assert_eq!(lang.language.p(n), 2 * (n as u64 + 1));
        }
        // Sampled counts agree with enumeration beyond the stored depth.
        let table = lang.counts(40, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(table.p[39], 82);
        assert_eq!(table.beta[4], 2 * 20);
    }

    #[test]
    fn non_orientable_language_matches_iterates() {
        let f = rank_three();
        let lang = attracting_language(&f, 6, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(lang.origin, Origin::Attracting { orientable: false, squared: false });
        assert!(lang.language.is_inverse_closed());
        assert!(lang.language.is_subword_closed());
        for n in 1..=6 {
            assert_eq!(lang.language.strata[n - 1], iterate_oracle(&f, n, 12), "n = {n}");
        }
        // Some member crosses an edge in both directions.
        let a = Letter::positive(0);
        assert!(lang
            .language
            .members()
            .any(|w| w.contains(&a) && w.contains(&a.inverse())));
    }

    #[test]
    fn orientation_reversing_map_uses_its_square() {
        for f in [theta_map(), rose_map("b", "a b'")] {
            let lang = attracting_language(&f, 8, DEFAULT_SIZE_CAP).unwrap();
            assert_eq!(lang.origin, Origin::Attracting { orientable: false, squared: true });
            assert!(lang.language.is_inverse_closed());
            for n in 1..=8 {
                assert_eq!(lang.language.strata[n - 1], iterate_oracle(&f, n, 14), "n = {n}");
            }
        }
    }

    #[test]
    fn non_train_track_is_rejected() {
        let err = attracting_language(&rose_map("a b", "a'"), 4, DEFAULT_SIZE_CAP).unwrap_err();
        assert!(matches!(err, LaminationError::Precondition(_)), "{err}");
        let perm = attracting_language(&rose_map("b", "a"), 4, DEFAULT_SIZE_CAP).unwrap_err();
        assert!(matches!(perm, LaminationError::Precondition(_)), "{perm}");
    }

    #[test]
    fn quadratic_beta_bound() {
        let lang = attracting_language(&rank_three(), 4, DEFAULT_SIZE_CAP).unwrap();
        let t15 = lang.counts(15, DEFAULT_SIZE_CAP).unwrap();
        let t30 = lang.counts(30, DEFAULT_SIZE_CAP).unwrap();
        let fit = |t: &CountTable| {
            (1..=t.n_max())
                .map(|n| t.beta[n - 1] as f64 / (n * n) as f64)
                .fold(0.0, f64::max)
        };
        assert!(fit(&t30) <= fit(&t15) * 1.1);
        assert_eq!(t15.p, t30.p[..15]);
    }

    #[test]
    fn metric_counts_rescale() {
        let half = MarkedMetricGraph::new(
            "rose",
            &["v"],
            vec![
                EdgeSpec::new("a", "v", "v", crate::marked_graph::parse_length("0.5").unwrap()),
                EdgeSpec::new("b", "v", "v", crate::marked_graph::parse_length("0.5").unwrap()),
            ],
        )
        .unwrap();
        let f = GraphSelfMap::from_literals(half, &[], &[("a", "a b"), ("b", "a")]).unwrap();
        let unit = attracting_language(&fibonacci(), 4, DEFAULT_SIZE_CAP).unwrap();
        let halved = attracting_language(&f, 4, DEFAULT_SIZE_CAP).unwrap();
        for n in 1..=10 {
            assert_eq!(
                beta_metric(&unit, n, DEFAULT_SIZE_CAP).unwrap(),
                unit.counts(n, DEFAULT_SIZE_CAP).unwrap().beta[n - 1]
            );
            assert_eq!(
                beta_metric(&halved, n, DEFAULT_SIZE_CAP).unwrap(),
                unit.counts(2 * n, DEFAULT_SIZE_CAP).unwrap().beta[2 * n - 1]
            );
        }
    }

    #[test]
    fn explicit_language_refuses_to_undercount() {
        let lang = attracting_language(&fibonacci(), 6, DEFAULT_SIZE_CAP).unwrap();
        let ex = LaminaryLanguage::explicit(rose2(), lang.language.clone(), true, Origin::UserSupplied);
        assert_eq!(beta_metric(&ex, 6, DEFAULT_SIZE_CAP).unwrap(), 2 * (2 + 3 + 4 + 5 + 6 + 7));
        let err = beta_metric(&ex, 7, DEFAULT_SIZE_CAP).unwrap_err();
        assert!(err.is_under_enumeration());
    }

    fn full_shift() -> LaminaryLanguage {
        let g = rose2();
        let a = g.alphabet().clone();
        let pairs: Vec<EdgePath> = a
            .letters()
            .flat_map(|x| a.letters().map(move |y| EdgePath::from(vec![x, y])))
            .filter(|w| w.is_reduced())
            .collect();
        LaminaryLanguage::user_supplied(g, &pairs, true).unwrap()
    }

    #[test]
    fn finite_memory_full_shift() {
        let lang = full_shift();
        let t = lang.counts(12, DEFAULT_SIZE_CAP).unwrap();
        for n in 1..=12 {
            assert_eq!(t.p[n - 1], 4 * 3u64.pow(n as u32 - 1));
        }
        let e = lang.enumerate(6, DEFAULT_SIZE_CAP).unwrap();
        for n in 1..=6 {
            assert_eq!(e.p(n), t.p[n - 1]);
        }
        assert!(lang.counts(60, DEFAULT_SIZE_CAP).unwrap_err().is_size_cap());
    }

    #[test]
    fn finite_memory_matches_enumeration() {
        // Golden mean shift on a and its inverse copy on a' and b'.
        let g = rose2();
        let a = g.alphabet().clone();
        let words: Vec<EdgePath> = ["a a", "a b", "b a", "a' a'", "a' b'", "b' a'"]
            .iter()
            .map(|s| a.parse_path(s).unwrap())
            .collect();
        let lang = LaminaryLanguage::user_supplied(g, &words, true).unwrap();
        let t = lang.counts(10, DEFAULT_SIZE_CAP).unwrap();
        let e = lang.enumerate(10, DEFAULT_SIZE_CAP).unwrap();
        let fib = [2u64, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for n in 1..=10 {
            assert_eq!(t.p[n - 1], e.p(n));
            assert_eq!(t.p[n - 1], 2 * fib[n - 1]);
        }
        assert!(e.is_subword_closed() && e.is_inverse_closed());
    }

    #[test]
    fn user_language_checks() {
        let g = rose2();
        let a = g.alphabet().clone();
        let bad = [a.parse_path("a a'").unwrap()];
        assert!(matches!(
            LaminaryLanguage::user_supplied(g.clone(), &bad, false),
            Err(LaminationError::NotAPath(_))
        ));
        let one_sided = [a.parse_path("a b").unwrap()];
        assert!(matches!(
            LaminaryLanguage::user_supplied(g.clone(), &one_sided, true),
            Err(LaminationError::NotSymmetric(_))
        ));
        let lang = LaminaryLanguage::user_supplied(g, &one_sided, false).unwrap();
        assert_eq!(lang.language.p(1), 2);
    }

    #[test]
    fn rose_transport_is_trivial() {
        let lang = attracting_language(&fibonacci(), 10, DEFAULT_SIZE_CAP).unwrap();
        let cd = maximal_subtree(&rose2()).unwrap();
        let report = transport_compare(&lang, &cd, 10, 4, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((report.diameter, report.length_factor, report.multiplicity_bound), (0, 1, 1));
        assert!(report.all_hold());
        assert_eq!(report.rose_language.language.strata, lang.language.strata);
        assert_eq!(report.witness, GrowthWitness::Equivalent { c: 1 });
    }

    #[test]
    fn theta_transport_inequalities() {
        let f = theta_map();
        let lang = attracting_language(&f, 4, DEFAULT_SIZE_CAP).unwrap();
        let cd = maximal_subtree(f.graph()).unwrap();
        let report = transport_compare(&lang, &cd, 15, 8, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((report.length_factor, report.multiplicity_bound), (1, 4));
        assert_eq!(report.base_depth, 30);
        assert!(report.all_hold());
        for r in &report.rows {
            assert_eq!(r.p_base, 2 * r.n as u64 + 4);
            assert_eq!(r.p_rose, 2 * r.n as u64 + 2);
            assert!(r.max_fiber <= 4);
        }
        assert!(matches!(report.witness, GrowthWitness::Equivalent { .. }));
        // Projection of the iterate oracle, as an independent check.
        let mut oracle = BTreeSet::new();
        for n in 1..=12 {
            for w in iterate_oracle(&f, n, 14) {
                let img = cd.project_path(&w).unwrap();
                if (1..=6).contains(&img.len()) {
                    oracle.insert(img);
                }
            }
        }
        let got: BTreeSet<EdgePath> = report.rose_language.language.members().filter(|w| w.len() <= 6).cloned().collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn transport_rejects_foreign_language() {
        let lang = attracting_language(&fibonacci(), 4, DEFAULT_SIZE_CAP).unwrap();
        let cd = maximal_subtree(theta_map().graph()).unwrap();
        assert!(matches!(
            transport_compare(&lang, &cd, 4, 4, DEFAULT_SIZE_CAP),
            Err(LaminationError::WrongGraph { .. })
        ));
    }
}

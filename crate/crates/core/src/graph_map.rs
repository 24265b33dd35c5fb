//! Graph self-maps: iteration, the train track turn test, transition
//! matrices and their Perron-Frobenius data, orientability, and growth of
//! conjugacy classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::marked_graph::MarkedMetricGraph;
use crate::words::{cyclic_reduce, reduce, EdgePath, Letter, WordError};

/// Default cap on intermediate word lengths.
pub const DEFAULT_SIZE_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("no image given for edge {0:?}")]
    MissingImage(String),
    #[error("no image given for vertex {0:?}")]
    MissingVertexImage(String),
    #[error("image of edge {0:?} is empty")]
    EmptyImage(String),
    #[error("image of edge {0:?} is not an edge path")]
    NotAPath(String),
    #[error("image of edge {edge:?} runs from {found_origin} to {found_terminus}, expected {want_origin} to {want_terminus}")]
    EndpointMismatch {
        edge: String,
        found_origin: String,
        found_terminus: String,
        want_origin: String,
        want_terminus: String,
    },
    #[error("intermediate word length {len} exceeds the cap of {cap} letters")]
    SizeCap { len: usize, cap: usize },
    #[error("path is not a loop")]
    NotALoop,
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("matrix is not square")]
    NotSquare,
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("{0}")]
    Domain(String),
}

/// A graph map `f: Γ → Γ` given by vertex images and edge images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSelfMap {
    graph: MarkedMetricGraph,
    vertex_image: Vec<usize>,
    /// Indexed by letter; inverse letters carry the inverted image.
    letter_image: Vec<Vec<Letter>>,
}

impl GraphSelfMap {
    /// `edge_images[e]` is the image of the positive edge `e`.
    pub fn new(
        graph: MarkedMetricGraph,
        vertex_image: Vec<usize>,
        edge_images: Vec<EdgePath>,
    ) -> Result<Self, MapError> {
        let alpha = graph.alphabet();
        let names = alpha.edge_names();
        if edge_images.len() != graph.edge_count() {
            let missing = names.get(edge_images.len()).cloned().unwrap_or_default();
            return Err(MapError::MissingImage(missing));
        }
        if vertex_image.len() != graph.vertices().len() {
            let missing = graph.vertices().get(vertex_image.len()).cloned().unwrap_or_default();
            return Err(MapError::MissingVertexImage(missing));
        }
        let vname = |v: usize| graph.vertices()[v].clone();
        for (e, img) in edge_images.iter().enumerate() {
            alpha.check(img)?;
            if img.is_empty() {
                return Err(MapError::EmptyImage(names[e].clone()));
            }
            if !graph.is_path(img) {
                return Err(MapError::NotAPath(names[e].clone()));
            }
            let l = Letter::positive(e);
            let want = (vertex_image[graph.origin(l)], vertex_image[graph.terminus(l)]);
            let found = (graph.origin(img[0]), graph.terminus(img[img.len() - 1]));
            if want != found {
                return Err(MapError::EndpointMismatch {
                    edge: names[e].clone(),
                    found_origin: vname(found.0),
                    found_terminus: vname(found.1),
                    want_origin: vname(want.0),
                    want_terminus: vname(want.1),
                });
            }
        }
        let mut letter_image = vec![Vec::new(); graph.alphabet().letter_count()];
        for (e, img) in edge_images.into_iter().enumerate() {
            letter_image[Letter::negative(e).index()] = img.inverse().into_letters();
            letter_image[Letter::positive(e).index()] = img.into_letters();
        }
        Ok(GraphSelfMap {
            graph,
            vertex_image,
            letter_image,
        })
    }

    /// Map on a single-vertex graph; no vertex images needed.
    pub fn on_rose(graph: MarkedMetricGraph, edge_images: Vec<EdgePath>) -> Result<Self, MapError> {
        let vmap = vec![0; graph.vertices().len()];
        Self::new(graph, vmap, edge_images)
    }

    /// Parses `images` given as `(edge name, path literal)` pairs.
    pub fn from_literals(
        graph: MarkedMetricGraph,
        vertex_image: &[(&str, &str)],
        images: &[(&str, &str)],
    ) -> Result<Self, MapError> {
        let alpha = graph.alphabet().clone();
        let mut edge_images = vec![None; alpha.edge_count()];
        for (name, lit) in images {
            let e = alpha
                .edge_index(name)
                .ok_or_else(|| WordError::UnknownToken(name.to_string()))?;
            edge_images[e] = Some(alpha.parse_path(lit)?);
        }
        let edge_images = edge_images
            .into_iter()
            .enumerate()
            .map(|(e, img)| img.ok_or_else(|| MapError::MissingImage(alpha.edge_names()[e].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut vmap: Vec<Option<usize>> = vec![None; graph.vertices().len()];
        if graph.vertices().len() == 1 && vertex_image.is_empty() {
            vmap[0] = Some(0);
        }
        for (v, w) in vertex_image {
            let vi = graph
                .vertex_index(v)
                .ok_or_else(|| MapError::MissingVertexImage(v.to_string()))?;
            let wi = graph
                .vertex_index(w)
                .ok_or_else(|| MapError::MissingVertexImage(w.to_string()))?;
            vmap[vi] = Some(wi);
        }
        let vmap = vmap
            .into_iter()
            .enumerate()
            .map(|(v, w)| w.ok_or_else(|| MapError::MissingVertexImage(graph.vertices()[v].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(graph, vmap, edge_images)
    }

    pub fn graph(&self) -> &MarkedMetricGraph {
        &self.graph
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_image[v]
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.letter_image[letter.index()]
    }

    pub fn edge_images(&self) -> Vec<EdgePath> {
        self.graph
            .alphabet()
            .positive_letters()
            .map(|l| EdgePath::from(self.image(l)))
            .collect()
    }

    /// Direction map `Df`: first letter of the image.
    pub fn direction(&self, letter: Letter) -> Letter {
        self.image(letter)[0]
    }

    /// Letterwise substitution without tightening.
    pub fn substitute(&self, letters: &[Letter]) -> Vec<Letter> {
        letters.iter().flat_map(|&l| self.image(l).iter().copied()).collect()
    }

    /// Composition `self ∘ other` (apply `other` first), with tightened
    /// edge images.
    pub fn compose(&self, other: &GraphSelfMap) -> Result<GraphSelfMap, MapError> {
        let vmap = other.vertex_image.iter().map(|&v| self.vertex_image[v]).collect();
        let images = other
            .graph
            .alphabet()
            .positive_letters()
            .map(|l| EdgePath::from(reduce(&self.substitute(other.image(l)))))
            .collect();
        GraphSelfMap::new(self.graph.clone(), vmap, images)
    }

    /// `tighten(f^k(path))`, tightening after every step.
    pub fn apply_power(&self, path: &[Letter], k: usize, cap: usize) -> Result<EdgePath, MapError> {
        self.graph.alphabet().check(path)?;
        let mut cur = reduce(path);
        for _ in 0..k {
            let len: usize = cur.iter().map(|&l| self.image(l).len()).sum();
            if len > cap {
                return Err(MapError::SizeCap { len, cap });
            }
            cur = reduce(&self.substitute(&cur));
        }
        Ok(cur.into())
    }

    /// Decides whether every iterate `f^k` is tight, via the turn test.
    pub fn is_train_track(&self) -> TrainTrackVerdict {
        let mut crossed: BTreeMap<Turn, Letter> = BTreeMap::new();
        for e in self.graph.alphabet().positive_letters() {
            let img = self.image(e);
            for w in img.windows(2) {
                crossed.entry(Turn::new(w[0].inverse(), w[1])).or_insert(e);
            }
        }
        let mut reachable: BTreeSet<Turn> = BTreeSet::new();
        for (&turn, &edge) in &crossed {
            let mut cur = turn;
            let mut k = 0;
            loop {
                if cur.is_degenerate() {
                    return TrainTrackVerdict::Illegal {
                        edge,
                        turn,
                        iterate: k,
                    };
                }
                if !reachable.insert(cur) {
                    break;
                }
                cur = Turn::new(self.direction(cur.0), self.direction(cur.1));
                k += 1;
            }
        }
        TrainTrackVerdict::TrainTrack {
            legal_turns: reachable,
        }
    }

    /// `a_ij` = occurrences of `e_i^{±1}` in `f(e_j)`.
    pub fn transition_matrix(&self) -> TransitionMatrix {
        let m = self.graph.edge_count();
        let mut entries = vec![vec![0u64; m]; m];
        for j in 0..m {
            for l in self.image(Letter::positive(j)) {
                entries[l.edge()][j] += 1;
            }
        }
        TransitionMatrix { entries }
    }

    /// Searches for a preferred orientation by sign propagation.
    pub fn orientability(&self, cap: usize) -> Orientability {
        let m = self.graph.edge_count();
        // An occurrence of e_i^ε in f(e_j) forces sign(e_i)·ε = sign(e_j):
        // an undirected parity constraint between i and j.
        let mut adjacent: Vec<Vec<(usize, bool)>> = vec![Vec::new(); m];
        for j in 0..m {
            for l in self.image(Letter::positive(j)) {
                adjacent[j].push((l.edge(), l.is_inverse()));
                adjacent[l.edge()].push((j, l.is_inverse()));
            }
        }
        let mut flipped: Vec<Option<bool>> = vec![None; m];
        for root in 0..m {
            if flipped[root].is_some() {
                continue;
            }
            flipped[root] = Some(false);
            let mut stack = vec![root];
            while let Some(j) = stack.pop() {
                let fj = flipped[j].expect("assigned before push");
                for &(i, parity) in &adjacent[j] {
                    let want = fj ^ parity;
                    match flipped[i] {
                        None => {
                            flipped[i] = Some(want);
                            stack.push(i);
                        }
                        Some(f) if f != want => {
                            return Orientability::NonOrientable {
                                conflict: (Letter::positive(i), Letter::positive(j)),
                                witness: self.inversion_witness(cap),
                            };
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let positive = flipped
            .into_iter()
            .enumerate()
            .map(|(e, f)| {
                if f.expect("all assigned") {
                    Letter::negative(e)
                } else {
                    Letter::positive(e)
                }
            })
            .collect();
        Orientability::Orientable { positive }
    }

    /// Least `k` (then least edges) such that both `e` and `e⁻¹` occur in
    /// `f^k(e')`.
    fn inversion_witness(&self, cap: usize) -> Option<InversionWitness> {
        let m = self.graph.edge_count();
        let mut iterates: Vec<Vec<Letter>> =
            (0..m).map(|e| vec![Letter::positive(e)]).collect();
        for k in 1..=(4 * m * m + 4) {
            for (src, word) in iterates.iter_mut().enumerate() {
                let next = self.substitute(word);
                if next.len() > cap {
                    return None;
                }
                *word = next;
                let mut seen = vec![[false; 2]; m];
                for l in word.iter() {
                    seen[l.edge()][usize::from(l.is_inverse())] = true;
                }
                if let Some(e) = seen.iter().position(|s| s[0] && s[1]) {
                    return Some(InversionWitness {
                        edge: Letter::positive(e),
                        source: Letter::positive(src),
                        exponent: k,
                    });
                }
            }
        }
        None
    }

    /// Cyclic lengths `‖f^n(w)‖` for `n = 0..=n_max` and the ratio of the last
    /// two as the growth rate estimate.
    pub fn conjugacy_growth(
        &self,
        loop_path: &[Letter],
        n_max: usize,
        cap: usize,
    ) -> Result<GrowthSeries, MapError> {
        self.graph.alphabet().check(loop_path)?;
        if n_max < 2 {
            return Err(MapError::Domain("n_max must be at least 2".into()));
        }
        if loop_path.is_empty()
            || !self.graph.is_path(loop_path)
            || self.graph.origin(loop_path[0]) != self.graph.terminus(loop_path[loop_path.len() - 1])
        {
            return Err(MapError::NotALoop);
        }
        let mut cur = cyclic_reduce(loop_path);
        let mut lengths = vec![cur.len()];
        for _ in 0..n_max {
            let len: usize = cur.iter().map(|&l| self.image(l).len()).sum();
            if len > cap {
                return Err(MapError::SizeCap { len, cap });
            }
            cur = cyclic_reduce(&self.substitute(&cur));
            lengths.push(cur.len());
        }
        let last = lengths[n_max] as f64;
        let prev = lengths[n_max - 1] as f64;
        let rate = if prev > 0.0 { last / prev } else { 0.0 };
        Ok(GrowthSeries { lengths, rate })
    }
}

/// Unordered pair of directions (outgoing letters) at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn(pub Letter, pub Letter);

impl Turn {
    pub fn new(a: Letter, b: Letter) -> Self {
        if a <= b {
            Turn(a, b)
        } else {
            Turn(b, a)
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.0 == self.1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrainTrackVerdict {
    /// Every turn reachable from a turn crossed by an edge image stays
    /// nondegenerate under `Df`.
    TrainTrack { legal_turns: BTreeSet<Turn> },
    /// `Df^iterate(turn)` is degenerate, where `turn` is crossed by `f(edge)`;
    /// so `f^(iterate + 1)(edge)` is not reduced.
    Illegal {
        edge: Letter,
        turn: Turn,
        iterate: usize,
    },
}

impl TrainTrackVerdict {
    pub fn is_train_track(&self) -> bool {
        matches!(self, TrainTrackVerdict::TrainTrack { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionWitness {
    pub edge: Letter,
    pub source: Letter,
    pub exponent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientability {
    /// `positive[e]` is the chosen orientation of edge `e`.
    Orientable { positive: Vec<Letter> },
    /// Sign constraints between the two edges are contradictory. `witness`
    /// exhibits `e` and `e⁻¹` inside `f^k(e')` when such `k` was found.
    NonOrientable {
        conflict: (Letter, Letter),
        witness: Option<InversionWitness>,
    },
}

impl Orientability {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Orientability::Orientable { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSeries {
    /// `lengths[n] = ‖f^n(w)‖`.
    pub lengths: Vec<usize>,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl TransitionMatrix {
    pub fn new(entries: Vec<Vec<u64>>) -> Result<Self, MapError> {
        let m = entries.len();
        if entries.iter().any(|r| r.len() != m) {
            return Err(MapError::NotSquare);
        }
        Ok(TransitionMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        self.entries.iter().map(|r| r[j]).sum()
    }

    pub fn mul(&self, other: &TransitionMatrix) -> Option<TransitionMatrix> {
        let m = self.dim();
        let mut out = vec![vec![0u64; m]; m];
        for i in 0..m {
            for k in 0..m {
                let a = self.entries[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..m {
                    let add = a.checked_mul(other.entries[k][j])?;
                    out[i][j] = out[i][j].checked_add(add)?;
                }
            }
        }
        Some(TransitionMatrix { entries: out })
    }

    pub fn pow(&self, k: u32) -> Option<TransitionMatrix> {
        let m = self.dim();
        let mut result = TransitionMatrix {
            entries: (0..m).map(|i| (0..m).map(|j| u64::from(i == j)).collect()).collect(),
        };
        for _ in 0..k {
            result = result.mul(self)?;
        }
        Some(result)
    }

    fn support(&self) -> Vec<Vec<bool>> {
        self.entries.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect()
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAnalysis {
    pub irreducible: bool,
    /// Least `k` with `A^k > 0`, when primitive.
    pub primitive_exponent: Option<usize>,
    pub expanding: bool,
    pub stretch_factor: f64,
    /// `‖Av − λv‖∞ / ‖v‖∞` at termination.
    pub residual: f64,
    /// Change in the eigenvalue estimate over the last iteration.
    pub error_bound: f64,
    pub iterations: usize,
}

impl MatrixAnalysis {
    pub fn primitive(&self) -> bool {
        self.primitive_exponent.is_some()
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let m = a.len();
    let mut out = vec![vec![false; m]; m];
    for i in 0..m {
        for k in 0..m {
            if a[i][k] {
                for j in 0..m {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

fn strongly_connected(support: &[Vec<bool>]) -> bool {
    let m = support.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..m {
                let edge = if forward { support[i][j] } else { support[j][i] };
                if edge && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Strongly connected components, each as a sorted list of indices.
fn components(support: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let m = support.len();
    let mut reach = support.to_vec();
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..m {
        for i in 0..m {
            if reach[i][k] {
                for j in 0..m {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; m];
    let mut out = Vec::new();
    for i in 0..m {
        if assigned[i] {
            continue;
        }
        let comp: Vec<usize> = (0..m).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &comp {
            assigned[j] = true;
        }
        out.push(comp);
    }
    out
}

pub const POWER_ITERATION_MAX: usize = 1_000_000;
pub const POWER_ITERATION_TOL: f64 = 1e-12;

/// Irreducibility, primitivity, expansion, and the spectral radius.
pub fn analyze_matrix(a: &TransitionMatrix) -> Result<MatrixAnalysis, MapError> {
    let m = a.dim();
    if m == 0 || a.entries.iter().flatten().all(|&x| x == 0) {
        return Err(MapError::ZeroMatrix);
    }
    let support = a.support();
    let irreducible = strongly_connected(&support);

    let wielandt = (m - 1) * (m - 1) + 1;
    let mut power = support.clone();
    let mut primitive_exponent = None;
    for k in 1..=wielandt {
        if power.iter().flatten().all(|&x| x) {
            primitive_exponent = Some(k);
            break;
        }
        power = bool_mul(&power, &support);
    }

    // An edge whose image is a single edge passes its growth to that edge;
    // it is non-expanding iff this chain never reaches a longer image.
    let expanding = (0..m).all(|start| {
        let mut j = start;
        for _ in 0..=m {
            match a.column_sum(j) {
                0 => return false,
                1 => j = (0..m).find(|&i| a.entries[i][j] == 1).expect("column sum is 1"),
                _ => return true,
            }
        }
        false
    });

    let (stretch_factor, residual, error_bound, iterations) = if irreducible {
        spectral_radius(a)?
    } else {
        // The spectral radius of a reducible matrix is the largest over its
        // irreducible diagonal blocks; iterating on each block avoids the
        // slow convergence caused by Jordan blocks.
        let mut best = (0.0, 0.0, 0.0, 0);
        for block in components(&support) {
            let sub: Vec<Vec<u64>> = block
                .iter()
                .map(|&i| block.iter().map(|&j| a.entries[i][j]).collect())
                .collect();
            if sub.iter().flatten().all(|&x| x == 0) {
                continue;
            }
            let r = spectral_radius(&TransitionMatrix { entries: sub })?;
            if r.0 > best.0 {
                best = r;
            }
        }
        best
    };
    Ok(MatrixAnalysis {
        irreducible,
        primitive_exponent,
        expanding,
        stretch_factor,
        residual,
        error_bound,
        iterations,
    })
}

/// Power iteration on `A + I` from the all-ones vector; the shift makes
/// irreducible periodic matrices primitive without moving eigenvectors.
fn spectral_radius(a: &TransitionMatrix) -> Result<(f64, f64, f64, usize), MapError> {
    let m = a.dim();
    let af: Vec<Vec<f64>> = a.entries.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..m).map(|i| (0..m).map(|j| af[i][j] * v[j]).sum::<f64>()).collect()
    };
    let norm = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));

    let mut v = vec![1.0; m];
    let mut lambda = 0.0f64;
    for it in 1..=POWER_ITERATION_MAX {
        let av = apply(&v);
        let w: Vec<f64> = av.iter().zip(&v).map(|(x, y)| x + y).collect();
        let nw = norm(&w);
        let next: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let new_lambda = nw / norm(&v) - 1.0;
        let delta = (new_lambda - lambda).abs();
        lambda = new_lambda;
        v = next;
        if delta <= POWER_ITERATION_TOL * lambda.abs().max(1.0) && it > 1 {
            let av = apply(&v);
            // Rayleigh-style estimate from the converged vector.
            let (num, den) = av
                .iter()
                .zip(&v)
                .fold((0.0, 0.0), |(n, d), (x, y)| (n + x * y, d + y * y));
            let rq = num / den;
            let res = norm(&av.iter().zip(&v).map(|(x, y)| x - rq * y).collect::<Vec<_>>()) / norm(&v);
            return Ok((rq, res, delta, it));
        }
    }
    Err(MapError::NoConvergence(POWER_ITERATION_MAX))
}

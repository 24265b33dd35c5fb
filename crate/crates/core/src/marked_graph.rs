//! Finite marked metric graphs, maximal subtree collapse, and the path maps
//! between a graph and the rose obtained by collapsing a spanning tree.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::words::{is_reduced, is_valid_name, EdgeAlphabet, EdgePath, Letter, WordError};

/// Exact positive edge length.
pub type Length = Ratio<u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid vertex name {0:?}")]
    InvalidVertexName(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {0:?} has non-positive length")]
    NonPositiveLength(String),
    #[error("invalid decimal length {0:?}")]
    BadDecimal(String),
    #[error("graph has no vertices")]
    NoVertices,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("graph is not valid: {0}")]
    Invalid(ValidationReport),
    #[error("path is not reduced")]
    Unreduced,
    #[error("letters do not form a path in the graph")]
    NotAPath,
}

/// Parses a positive decimal literal such as `2`, `0.5` or `1.25` exactly.
pub fn parse_length(text: &str) -> Result<Length, GraphError> {
    let bad = || GraphError::BadDecimal(text.to_string());
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac.len() > 12 || int.len() > 12 {
        return Err(bad());
    }
    let denom = 10u64.pow(frac.len() as u32);
    let int_part: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac_part: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let value = Ratio::new(int_part * denom + frac_part, denom);
    if value == Ratio::from_integer(0) {
        return Err(bad());
    }
    Ok(value)
}

/// Decimal rendering of a length; exact for lengths parsed by [`parse_length`].
pub fn format_length(len: &Length) -> String {
    let (n, d) = (*len.numer(), *len.denom());
    if d == 1 {
        return n.to_string();
    }
    let mut digits = 0u32;
    let mut scale = 1u64;
    while scale % d != 0 && digits < 18 {
        scale *= 10;
        digits += 1;
    }
    if scale % d == 0 {
        let scaled = n * (scale / d);
        let int = scaled / scale;
        let frac = scaled % scale;
        let frac = format!("{frac:0width$}", width = digits as usize);
        format!("{int}.{}", frac.trim_end_matches('0'))
    } else {
        format!("{}", n as f64 / d as f64)
    }
}

/// One positive edge as declared in a graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub name: String,
    pub origin: String,
    pub terminus: String,
    pub length: Length,
}

impl EdgeSpec {
    pub fn new(name: &str, origin: &str, terminus: &str, length: Length) -> Self {
        EdgeSpec {
            name: name.to_string(),
            origin: origin.to_string(),
            terminus: terminus.to_string(),
            length,
        }
    }

    pub fn unit(name: &str, origin: &str, terminus: &str) -> Self {
        Self::new(name, origin, terminus, Length::from_integer(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedMetricGraph {
    name: String,
    vertices: Vec<String>,
    alphabet: EdgeAlphabet,
    origin: Vec<usize>,
    terminus: Vec<usize>,
    lengths: Vec<Length>,
    intermediate: bool,
}

impl MarkedMetricGraph {
    /// Builds a graph; structural errors are reported here, topological
    /// conditions by [`MarkedMetricGraph::validate`].
    pub fn new(
        name: &str,
        vertices: &[&str],
        edges: Vec<EdgeSpec>,
    ) -> Result<Self, GraphError> {
        let mut verts: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
        if verts.is_empty() {
            return Err(GraphError::NoVertices);
        }
        if let Some(bad) = verts.iter().find(|v| !is_valid_name(v)) {
            return Err(GraphError::InvalidVertexName(bad.clone()));
        }
        verts.sort();
        if let Some(w) = verts.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let alphabet = EdgeAlphabet::new(edges.iter().map(|e| e.name.clone()))?;
        let m = alphabet.edge_count();
        let mut origin = vec![0; m];
        let mut terminus = vec![0; m];
        let mut lengths = vec![Length::from_integer(1); m];
        for spec in &edges {
            let idx = alphabet.edge_index(&spec.name).expect("edge was just inserted");
            let find = |v: &str| {
                verts.binary_search_by(|x| x.as_str().cmp(v)).map_err(|_| {
                    GraphError::UnknownVertex {
                        edge: spec.name.clone(),
                        vertex: v.to_string(),
                    }
                })
            };
            origin[idx] = find(&spec.origin)?;
            terminus[idx] = find(&spec.terminus)?;
            if spec.length == Length::from_integer(0) {
                return Err(GraphError::NonPositiveLength(spec.name.clone()));
            }
            lengths[idx] = spec.length;
        }
        Ok(MarkedMetricGraph {
            name: name.to_string(),
            vertices: verts,
            alphabet,
            origin,
            terminus,
            lengths,
            intermediate: false,
        })
    }

    /// Rose with one vertex `v` and unit-length petals.
    pub fn rose(name: &str, petals: &[&str]) -> Result<Self, GraphError> {
        let edges = petals.iter().map(|p| EdgeSpec::unit(p, "v", "v")).collect();
        Self::new(name, &["v"], edges)
    }

    /// Marks the graph as an intermediate object exempt from the degree
    /// condition.
    pub fn with_intermediate(mut self, intermediate: bool) -> Self {
        self.intermediate = intermediate;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn alphabet(&self) -> &EdgeAlphabet {
        &self.alphabet
    }

    pub fn edge_count(&self) -> usize {
        self.alphabet.edge_count()
    }

    pub fn is_intermediate(&self) -> bool {
        self.intermediate
    }

    pub fn origin(&self, letter: Letter) -> usize {
        if letter.is_inverse() {
            self.terminus[letter.edge()]
        } else {
            self.origin[letter.edge()]
        }
    }

    pub fn terminus(&self, letter: Letter) -> usize {
        self.origin(letter.inverse())
    }

    pub fn length(&self, edge: usize) -> Length {
        self.lengths[edge]
    }

    pub fn lengths(&self) -> &[Length] {
        &self.lengths
    }

    pub fn max_length(&self) -> Length {
        *self.lengths.iter().max().expect("alphabet is nonempty")
    }

    pub fn min_length(&self) -> Length {
        *self.lengths.iter().min().expect("alphabet is nonempty")
    }

    /// Common denominator of all edge lengths.
    pub fn length_unit(&self) -> u64 {
        self.lengths.iter().fold(1u64, |acc, l| acc.lcm(l.denom()))
    }

    /// Edge lengths as integer multiples of `1 / length_unit()`, indexed by
    /// letter.
    pub fn letter_weights(&self) -> Vec<u64> {
        let unit = self.length_unit();
        self.alphabet
            .letters()
            .map(|l| {
                let len = self.lengths[l.edge()];
                len.numer() * (unit / len.denom())
            })
            .collect()
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.origin.iter().filter(|&&o| o == vertex).count()
            + self.terminus.iter().filter(|&&t| t == vertex).count()
    }

    /// First Betti number `|E| - |V| + 1` (meaningful when connected).
    pub fn betti(&self) -> i64 {
        self.edge_count() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        (0..self.edge_count())
            .map(|e| EdgeSpec {
                name: self.alphabet.edge_names()[e].clone(),
                origin: self.vertices[self.origin[e]].clone(),
                terminus: self.vertices[self.terminus[e]].clone(),
                length: self.lengths[e],
            })
            .collect()
    }

    /// Whether consecutive letters are incident (`t(e_i) = o(e_{i+1})`).
    pub fn is_path(&self, letters: &[Letter]) -> bool {
        letters.iter().all(|&l| self.alphabet.contains(l))
            && letters
                .windows(2)
                .all(|w| self.terminus(w[0]) == self.origin(w[1]))
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for l in self.alphabet.letters() {
                if self.origin(l) == v {
                    let w = self.terminus(l);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let connected = self.is_connected();
        if !connected {
            violations.push(Violation::Disconnected);
        }
        let rank = self.betti();
        if rank < 2 {
            violations.push(Violation::RankTooSmall(rank));
        }
        if !self.intermediate {
            for v in 0..self.vertices.len() {
                let d = self.degree(v);
                if d < 3 {
                    violations.push(Violation::LowDegree {
                        vertex: self.vertices[v].clone(),
                        degree: d,
                    });
                }
            }
        }
        ValidationReport {
            connected,
            rank,
            violations,
        }
    }

    /// `𝔍(γ)` as an exact rational.
    pub fn metric_length_exact(&self, path: &[Letter]) -> Result<Length, GraphError> {
        self.alphabet.check(path)?;
        Ok(path
            .iter()
            .fold(Length::from_integer(0), |acc, l| acc + self.lengths[l.edge()]))
    }

    /// `𝔍(γ) = Σ 𝔍(e_i)`; zero for the empty path.
    pub fn metric_length(&self, path: &[Letter]) -> Result<f64, GraphError> {
        let exact = self.metric_length_exact(path)?;
        Ok(*exact.numer() as f64 / *exact.denom() as f64)
    }

    /// Constant `C ≥ 1` with `|γ|/C ≤ 𝔍(γ) ≤ C|γ|` for every edge path.
    pub fn comparison_constant(&self) -> f64 {
        let to_f = |l: Length| *l.numer() as f64 / *l.denom() as f64;
        let max = to_f(self.max_length());
        let min = to_f(self.min_length());
        max.max(1.0 / min).max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Disconnected,
    RankTooSmall(i64),
    LowDegree { vertex: String, degree: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected => write!(f, "not connected"),
            Violation::RankTooSmall(r) => write!(f, "rank {r} is below 2"),
            Violation::LowDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree} < 3")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub connected: bool,
    pub rank: i64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid, rank {}", self.rank);
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A maximal subtree `Y` of a graph together with the rose obtained by
/// collapsing it.
#[derive(Clone, Debug)]
pub struct CollapseData {
    pub base: MarkedMetricGraph,
    /// Edge indices (in `base`) of the subtree.
    pub subtree: BTreeSet<usize>,
    /// Single-vertex graph whose petals are the non-tree edges of `base`,
    /// with the same names and unit lengths.
    pub rose: MarkedMetricGraph,
    /// Combinatorial diameter of the subtree, 0 when it is a single vertex.
    pub diameter: usize,
    /// Bound on the size of any fiber of [`CollapseData::project_path`].
    pub multiplicity_bound: usize,
    base_to_rose: Vec<Option<usize>>,
    rose_to_base: Vec<usize>,
    /// `tree_paths[u][w]` is the reduced subtree path from `u` to `w`.
    tree_paths: Vec<Vec<Vec<Letter>>>,
}

/// Chooses a spanning tree by breadth-first search from the least vertex,
/// scanning letters in canonical order, and collapses it.
pub fn maximal_subtree(graph: &MarkedMetricGraph) -> Result<CollapseData, GraphError> {
    let report = graph.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report));
    }
    let n = graph.vertices.len();
    let mut parent: Vec<Option<Letter>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut subtree = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for l in graph.alphabet.letters() {
            if graph.origin(l) != v {
                continue;
            }
            let w = graph.terminus(l);
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(l);
                subtree.insert(l.edge());
                queue.push_back(w);
            }
        }
    }

    // Root paths: letters from the root down to each vertex.
    let mut root_path: Vec<Vec<Letter>> = vec![Vec::new(); n];
    for (v, path) in root_path.iter_mut().enumerate() {
        let mut cur = v;
        while let Some(l) = parent[cur] {
            path.push(l);
            cur = graph.origin(l);
        }
        path.reverse();
    }
    let mut tree_paths = vec![vec![Vec::new(); n]; n];
    for u in 0..n {
        for w in 0..n {
            let (pu, pw) = (&root_path[u], &root_path[w]);
            let common = pu.iter().zip(pw).take_while(|(a, b)| a == b).count();
            let mut path: Vec<Letter> = pu[common..].iter().rev().map(|l| l.inverse()).collect();
            path.extend_from_slice(&pw[common..]);
            tree_paths[u][w] = path;
        }
    }
    let diameter = tree_paths
        .iter()
        .flat_map(|row| row.iter().map(Vec::len))
        .max()
        .unwrap_or(0);

    let mut base_to_rose = vec![None; graph.edge_count()];
    let mut rose_to_base = Vec::new();
    let mut petals = Vec::new();
    for e in 0..graph.edge_count() {
        if !subtree.contains(&e) {
            petals.push(graph.alphabet.edge_names()[e].clone());
        }
    }
    let root = graph.vertices[0].clone();
    let rose = MarkedMetricGraph::new(
        &format!("{}_rose", graph.name),
        &[root.as_str()],
        petals.iter().map(|p| EdgeSpec::unit(p, &root, &root)).collect(),
    )?;
    for e in 0..graph.edge_count() {
        if !subtree.contains(&e) {
            let name = &graph.alphabet.edge_names()[e];
            let r = rose.alphabet.edge_index(name).expect("petal exists");
            base_to_rose[e] = Some(r);
        }
    }
    rose_to_base.resize(rose.edge_count(), 0);
    for (e, r) in base_to_rose.iter().enumerate() {
        if let Some(r) = r {
            rose_to_base[*r] = e;
        }
    }

    Ok(CollapseData {
        base: graph.clone(),
        subtree,
        rose,
        diameter,
        // Erased prefix: a subtree geodesic ending at the origin of the first
        // surviving edge, determined by its start vertex; likewise for the
        // erased suffix.
        multiplicity_bound: n * n,
        base_to_rose,
        rose_to_base,
        tree_paths,
    })
}

impl CollapseData {
    /// Whether the subtree is a single vertex, so the base already is a rose.
    pub fn is_trivial(&self) -> bool {
        self.subtree.is_empty()
    }

    /// Diameter used as the length-distortion factor; at least 1.
    pub fn length_factor(&self) -> usize {
        self.diameter.max(1)
    }

    pub fn tree_path(&self, from: usize, to: usize) -> &[Letter] {
        &self.tree_paths[from][to]
    }

    pub fn base_letter(&self, rose_letter: Letter) -> Letter {
        let e = self.rose_to_base[rose_letter.edge()];
        if rose_letter.is_inverse() {
            Letter::negative(e)
        } else {
            Letter::positive(e)
        }
    }

    pub fn rose_letter(&self, base_letter: Letter) -> Option<Letter> {
        self.base_to_rose[base_letter.edge()].map(|r| {
            if base_letter.is_inverse() {
                Letter::negative(r)
            } else {
                Letter::positive(r)
            }
        })
    }

    /// Deletes every subtree edge from a reduced base path.
    pub fn project_path(&self, path: &[Letter]) -> Result<EdgePath, GraphError> {
        self.base.alphabet.check(path)?;
        if !is_reduced(path) {
            return Err(GraphError::Unreduced);
        }
        Ok(self.project_unchecked(path))
    }

    pub(crate) fn project_unchecked(&self, path: &[Letter]) -> EdgePath {
        path.iter()
            .filter_map(|&l| self.rose_letter(l))
            .collect::<Vec<_>>()
            .into()
    }

    /// Inserts between consecutive petals the subtree geodesic joining them.
    pub fn lift_path(&self, path: &[Letter]) -> Result<EdgePath, GraphError> {
        self.rose.alphabet.check(path)?;
        if !is_reduced(path) {
            return Err(GraphError::Unreduced);
        }
        let mut out = Vec::with_capacity(path.len() * (self.diameter + 1));
        for (i, &l) in path.iter().enumerate() {
            let b = self.base_letter(l);
            if i > 0 {
                let prev = *out.last().expect("previous letter pushed");
                out.extend_from_slice(self.tree_path(self.base.terminus(prev), self.base.origin(b)));
            }
            out.push(b);
        }
        Ok(out.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    pub(crate) fn theta() -> MarkedMetricGraph {
        MarkedMetricGraph::new(
            "theta",
            &["v0", "v1"],
            vec![
                EdgeSpec::unit("e1", "v0", "v1"),
                EdgeSpec::unit("e2", "v0", "v1"),
                EdgeSpec::unit("e3", "v0", "v1"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rose_and_theta_are_valid() {
        let rose = MarkedMetricGraph::rose("r", &["a", "b"]).unwrap();
        let r = rose.validate();
        assert!(r.is_valid());
        assert_eq!(r.rank, 2);
        let t = theta().validate();
        assert!(t.is_valid(), "{t}");
        assert_eq!(t.rank, 2);
    }

    #[test]
    fn disconnected_is_reported() {
        let g = MarkedMetricGraph::new(
            "two",
            &["u", "w"],
            vec![
                EdgeSpec::unit("a", "u", "u"),
                EdgeSpec::unit("b", "u", "u"),
                EdgeSpec::unit("c", "w", "w"),
                EdgeSpec::unit("d", "w", "w"),
            ],
        )
        .unwrap();
        let r = g.validate();
        assert!(!r.is_valid());
        assert!(r.violations.contains(&Violation::Disconnected));
    }

    #[test]
    fn low_degree_unless_intermediate() {
        let g = MarkedMetricGraph::new(
            "g",
            &["u", "w"],
            vec![
                EdgeSpec::unit("a", "u", "u"),
                EdgeSpec::unit("b", "u", "u"),
                EdgeSpec::unit("c", "u", "w"),
                EdgeSpec::unit("d", "w", "w"),
            ],
        )
        .unwrap();
        assert!(g.validate().is_valid());
        let g = MarkedMetricGraph::new(
            "g",
            &["u", "w"],
            vec![
                EdgeSpec::unit("a", "u", "u"),
                EdgeSpec::unit("b", "u", "u"),
                EdgeSpec::unit("c", "u", "w"),
            ],
        )
        .unwrap();
        assert!(!g.validate().is_valid());
        assert!(g.with_intermediate(true).validate().violations.iter().all(|v| !matches!(v, Violation::LowDegree { .. })));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            MarkedMetricGraph::new("g", &["v"], vec![EdgeSpec::unit("a", "v", "x")]),
            Err(GraphError::UnknownVertex { .. })
        ));
        assert!(parse_length("0").is_err());
        assert!(parse_length("-1").is_err());
        assert!(parse_length("1e3").is_err());
        assert_eq!(parse_length("0.5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_length("2").unwrap(), Ratio::from_integer(2));
        assert_eq!(format_length(&parse_length("1.25").unwrap()), "1.25");
        assert_eq!(format_length(&parse_length("3").unwrap()), "3");
    }

    #[test]
    fn rose_collapse_is_trivial() {
        let rose = MarkedMetricGraph::rose("r", &["a", "b"]).unwrap();
        let cd = maximal_subtree(&rose).unwrap();
        assert!(cd.is_trivial());
        assert_eq!(cd.diameter, 0);
        assert_eq!(cd.multiplicity_bound, 1);
        assert_eq!(cd.rose.edge_count(), 2);
        let p = rose.alphabet().parse_path("a b' a").unwrap();
        assert_eq!(cd.project_path(&p).unwrap(), p);
    }

    #[test]
    fn theta_collapse() {
        let g = theta();
        let cd = maximal_subtree(&g).unwrap();
        assert_eq!(cd.subtree.len(), 1);
        assert_eq!(cd.diameter, 1);
        let tree_edge = *cd.subtree.iter().next().unwrap();
        // The tree edge joins both vertices.
        let l = Letter::positive(tree_edge);
        assert_ne!(g.origin(l), g.terminus(l));
        assert_eq!(cd.rose.edge_count(), 2);
        assert_eq!(cd.rose.betti(), g.betti());
        assert_eq!(cd.multiplicity_bound, 4);

        let alpha = g.alphabet();
        // With the tree edge e1: e2 e1' projects to e2.
        assert_eq!(alpha.name(l), "e1");
        let path = alpha.parse_path("e2 e1'").unwrap();
        let projected = cd.project_path(&path).unwrap();
        assert_eq!(cd.rose.alphabet().format(&projected), "e2");
        let inside = alpha.parse_path("e1").unwrap();
        assert!(cd.project_path(&inside).unwrap().is_empty());

        // Lift of e2 e3 inserts the tree geodesic from v1 back to v0.
        let rose_path = cd.rose.alphabet().parse_path("e2 e3").unwrap();
        let lifted = cd.lift_path(&rose_path).unwrap();
        assert_eq!(alpha.format(&lifted), "e2 e1' e3");
        assert!(lifted.is_reduced());
        assert!(g.is_path(&lifted));
        let single = cd.rose.alphabet().parse_path("e2").unwrap();
        assert_eq!(alpha.format(&cd.lift_path(&single).unwrap()), "e2");

        let unreduced = alpha.parse_path("e2 e2'").unwrap();
        assert_eq!(cd.project_path(&unreduced), Err(GraphError::Unreduced));
    }

    /// Vertices v0..v3 on a path, with two loops at each end and one at each
    /// middle vertex, plus a rung v0-v2.
    fn ladder() -> MarkedMetricGraph {
        MarkedMetricGraph::new(
            "ladder",
            &["v0", "v1", "v2", "v3"],
            vec![
                EdgeSpec::unit("r1", "v0", "v1"),
                EdgeSpec::unit("r2", "v1", "v2"),
                EdgeSpec::unit("r3", "v2", "v3"),
                EdgeSpec::unit("s1", "v0", "v2"),
                EdgeSpec::unit("x0", "v0", "v0"),
                EdgeSpec::unit("x1", "v1", "v1"),
                EdgeSpec::unit("x3", "v3", "v3"),
                EdgeSpec::unit("y3", "v3", "v3"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ladder_diameter_matches_floyd_warshall() {
        let g = ladder();
        assert!(g.validate().is_valid(), "{}", g.validate());
        let cd = maximal_subtree(&g).unwrap();
        let n = g.vertices().len();
        assert_eq!(cd.subtree.len(), n - 1);
        // All-pairs distances restricted to the subtree.
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0;
        }
        for &e in &cd.subtree {
            let (o, t) = (g.origin(Letter::positive(e)), g.terminus(Letter::positive(e)));
            d[o][t] = 1;
            d[t][o] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        let diam = d.iter().flatten().copied().max().unwrap();
        assert!(diam < inf, "subtree spans all vertices");
        assert_eq!(cd.diameter, diam);
        for u in 0..n {
            for w in 0..n {
                assert_eq!(cd.tree_path(u, w).len(), d[u][w]);
            }
        }
    }

    fn random_reduced_path<R: Rng>(g: &MarkedMetricGraph, rng: &mut R, len: usize) -> Vec<Letter> {
        let letters: Vec<Letter> = g.alphabet().letters().collect();
        let mut out: Vec<Letter> = vec![letters[rng.gen_range(0..letters.len())]];
        while out.len() < len {
            let last = *out.last().unwrap();
            let choices: Vec<Letter> = letters
                .iter()
                .copied()
                .filter(|&l| g.origin(l) == g.terminus(last) && l != last.inverse())
                .collect();
            out.push(choices[rng.gen_range(0..choices.len())]);
        }
        out
    }

    #[test]
    fn project_lift_round_trip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for g in [theta(), ladder()] {
            let cd = maximal_subtree(&g).unwrap();
            for _ in 0..500 {
                let len = rng.gen_range(1..20);
                let rose_path = random_reduced_path(&cd.rose, &mut rng, len);
                let lifted = cd.lift_path(&rose_path).unwrap();
                assert!(lifted.is_reduced());
                assert!(g.is_path(&lifted));
                assert!(lifted.len() <= len + cd.diameter * (len - 1));
                assert_eq!(cd.project_path(&lifted).unwrap().letters(), &rose_path[..]);

                let base_path = random_reduced_path(&g, &mut rng, len);
                let projected = cd.project_path(&base_path).unwrap();
                assert!(projected.len() <= base_path.len());
                assert!(projected.is_reduced());
            }
        }
    }

    #[test]
    fn metric_lengths() {
        let rose = MarkedMetricGraph::rose("r", &["a", "b"]).unwrap();
        let p = rose.alphabet().parse_path("a b a' b a").unwrap();
        assert_eq!(rose.metric_length(&p).unwrap(), 5.0);
        assert_eq!(rose.metric_length(&[]).unwrap(), 0.0);
        assert!(rose.metric_length(&[Letter::positive(9)]).is_err());

        let g = MarkedMetricGraph::new(
            "w",
            &["v"],
            vec![
                EdgeSpec::new("a", "v", "v", parse_length("0.5").unwrap()),
                EdgeSpec::new("b", "v", "v", parse_length("2").unwrap()),
                EdgeSpec::new("c", "v", "v", parse_length("1.25").unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(g.length_unit(), 4);
        let c = g.comparison_constant();
        assert_eq!(c, 2.0);
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..500 {
            let len = rng.gen_range(1..30);
            let path = random_reduced_path(&g, &mut rng, len);
            let m = g.metric_length(&path).unwrap();
            let l = path.len() as f64;
            assert!(l / c <= m + 1e-12 && m <= c * l + 1e-12);
        }
    }
}

//! Visual metrics on the boundary of the universal cover and the covering
//! bound for endpoint sets: Gromov products of rays, visual distances, the
//! bound series `β(n)·a^(−nδ)·a^(c₀δ)`, and a box-dimension style estimate.

use thiserror::Error;

use crate::marked_graph::{GraphError, Length, MarkedMetricGraph};
use crate::substitution::{Substitution, SubstitutionError};
use crate::words::{is_reduced, Letter, WordError};

/// Default threshold below which a bound counts as vanished.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HausdorffError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error("{0}")]
    Domain(String),
    #[error("rays live on different graphs")]
    MismatchedGraphs,
    #[error("ray is not a reduced path from the base vertex: {0}")]
    NotARay(String),
    #[error("β is known up to n = {achieved}, {requested} needed")]
    UnderEnumerated { requested: usize, achieved: usize },
    #[error("window has {0} usable points, at least 4 needed")]
    InsufficientData(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tail {
    /// `prefix · period · period · …`
    Periodic(Vec<Letter>),
    /// The eigenray of a substitution, from its first letter.
    Eigenray(Substitution, Letter),
}

/// A point of the boundary, coded as an infinite reduced edge path starting
/// at the base vertex (vertex 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRay {
    graph: MarkedMetricGraph,
    prefix: Vec<Letter>,
    tail: Tail,
}

impl BoundaryRay {
    /// The ray `prefix · period^∞`. `period` must be a loop whose powers,
    /// appended to `prefix`, stay reduced.
    pub fn periodic(graph: MarkedMetricGraph, prefix: &[Letter], period: &[Letter]) -> Result<Self, HausdorffError> {
        let alpha = graph.alphabet();
        alpha.check(prefix)?;
        alpha.check(period)?;
        if period.is_empty() {
            return Err(HausdorffError::NotARay("empty period".into()));
        }
        let ray = BoundaryRay {
            graph,
            prefix: prefix.to_vec(),
            tail: Tail::Periodic(period.to_vec()),
        };
        // Two full periods expose any cancellation or gap at the seams.
        ray.letters(prefix.len() + 2 * period.len())?;
        Ok(ray)
    }

    /// The eigenray of `theta` seeded at `seed`, read as an edge path.
    pub fn eigenray(graph: MarkedMetricGraph, theta: Substitution, seed: Letter) -> Result<Self, HausdorffError> {
        if theta.alphabet() != graph.alphabet() {
            return Err(HausdorffError::MismatchedGraphs);
        }
        theta.eigen_exponent(seed)?;
        let ray = BoundaryRay {
            graph,
            prefix: Vec::new(),
            tail: Tail::Eigenray(theta, seed),
        };
        ray.letters(16)?;
        Ok(ray)
    }

    pub fn graph(&self) -> &MarkedMetricGraph {
        &self.graph
    }

    /// The first `count` letters (or more), checked to be a reduced path
    /// from the base vertex.
    pub fn letters(&self, count: usize) -> Result<Vec<Letter>, HausdorffError> {
        let mut out = self.prefix.clone();
        match &self.tail {
            Tail::Periodic(period) => {
                while out.len() < count {
                    out.extend_from_slice(period);
                }
            }
            Tail::Eigenray(theta, seed) => {
                if out.len() < count {
                    out.extend(theta.eigenray_prefix(*seed, count - out.len(), usize::MAX)?);
                }
            }
        }
        let starts_at_base = out.first().is_none_or(|&l| self.graph.origin(l) == 0);
        if !starts_at_base || !is_reduced(&out) || !self.graph.is_path(&out) {
            return Err(HausdorffError::NotARay(self.graph.alphabet().format(&out)));
        }
        Ok(out)
    }

    /// Letters covering metric length at least `len`.
    pub fn letters_to_length(&self, len: Length) -> Result<Vec<Letter>, HausdorffError> {
        let min = self.graph.min_length();
        let count = (len / min).ceil().to_integer() as usize + 1;
        self.letters(count)
    }
}

/// Gromov product `(p, q)_{x₀}`: the metric length of the common prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GromovProduct {
    Exact(Length),
    /// The rays agree at least up to this length.
    EqualSoFar(Length),
}

pub fn gromov_product(p: &BoundaryRay, q: &BoundaryRay, precision: Length) -> Result<GromovProduct, HausdorffError> {
    if p.graph != q.graph {
        return Err(HausdorffError::MismatchedGraphs);
    }
    let lp = p.letters_to_length(precision)?;
    let lq = q.letters_to_length(precision)?;
    let common = lp.iter().zip(&lq).take_while(|(x, y)| x == y).count();
    let len = p.graph.metric_length_exact(&lp[..common])?;
    if common < lp.len().min(lq.len()) {
        Ok(GromovProduct::Exact(len))
    } else {
        Ok(GromovProduct::EqualSoFar(len))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VisualDistance {
    Exact(f64),
    /// The distance is at most this value.
    AtMost(f64),
}

impl VisualDistance {
    pub fn value(self) -> f64 {
        match self {
            VisualDistance::Exact(d) | VisualDistance::AtMost(d) => d,
        }
    }
}

/// `d_a(p, q) = a^(−(p, q)_{x₀})`.
pub fn visual_distance(p: &BoundaryRay, q: &BoundaryRay, a: f64, precision: Length) -> Result<VisualDistance, HausdorffError> {
    if !(a > 1.0) {
        return Err(HausdorffError::Domain(format!("visual parameter must exceed 1, got {a}")));
    }
    let to_f = |l: Length| *l.numer() as f64 / *l.denom() as f64;
    Ok(match gromov_product(p, q, precision)? {
        GromovProduct::Exact(g) => VisualDistance::Exact(a.powf(-to_f(g))),
        GromovProduct::EqualSoFar(g) => VisualDistance::AtMost(a.powf(-to_f(g))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverRow {
    pub n: usize,
    pub beta: u64,
    pub bound: f64,
    pub ln_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverBoundReport {
    pub a: f64,
    pub delta: f64,
    pub c0: f64,
    /// `d_T(x₀, x)` for the chosen vertex `x`.
    pub offset: f64,
    pub epsilon: f64,
    pub rows: Vec<CoverRow>,
    /// The last quarter of the rows decreases and the final bound is below
    /// `epsilon`.
    pub vanishing: bool,
    /// First `n` whose bound is below `epsilon`.
    pub n_star: Option<usize>,
}

/// Parameters of [`cover_bound_series`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverParams {
    pub a: f64,
    pub delta: f64,
    pub c0: f64,
    pub offset: f64,
    pub epsilon: f64,
}

impl CoverParams {
    pub fn new(a: f64, delta: f64, c0: f64) -> Self {
        CoverParams {
            a,
            delta,
            c0,
            offset: 0.0,
            epsilon: DEFAULT_EPSILON,
        }
    }

    /// Smallest `n` the covering argument applies to: `n ≥ 2c₀ + 2·offset`.
    pub fn threshold(&self) -> usize {
        ((2.0 * self.c0 + 2.0 * self.offset).ceil() as usize).max(1)
    }
}

/// Rows `(n, β(n), β(n)·a^(−nδ)·a^(c₀δ))` for `n` in `lo..=hi`, starting no
/// earlier than the threshold. `beta[n - 1]` is `β_{L,𝔍}(n)`; the bound is
/// computed through logarithms so large `β` do not overflow.
pub fn cover_bound_series(
    beta: &[u64],
    params: CoverParams,
    lo: usize,
    hi: usize,
) -> Result<CoverBoundReport, HausdorffError> {
    let CoverParams { a, delta, c0, offset, epsilon } = params;
    if !(a > 1.0) {
        return Err(HausdorffError::Domain(format!("visual parameter must exceed 1, got {a}")));
    }
    if !(delta > 0.0) {
        return Err(HausdorffError::Domain(format!("delta must be positive, got {delta}")));
    }
    if !(c0 > 0.0) || offset < 0.0 {
        return Err(HausdorffError::Domain("c0 must be positive and the offset non-negative".into()));
    }
    if hi > beta.len() {
        return Err(HausdorffError::UnderEnumerated {
            requested: hi,
            achieved: beta.len(),
        });
    }
    let start = lo.max(params.threshold());
    if start > hi {
        return Err(HausdorffError::InsufficientData(0));
    }
    let ln_a = a.ln();
    let rows: Vec<CoverRow> = (start..=hi)
        .map(|n| {
            let b = beta[n - 1];
            let ln_bound = (b as f64).ln() - n as f64 * delta * ln_a + c0 * delta * ln_a;
            CoverRow {
                n,
                beta: b,
                bound: ln_bound.exp(),
                ln_bound,
            }
        })
        .collect();
    let tail = &rows[rows.len() - rows.len().div_ceil(4)..];
    let decreasing = tail.windows(2).all(|w| w[1].ln_bound < w[0].ln_bound);
    let ln_eps = epsilon.ln();
    let last_small = rows.last().is_some_and(|r| r.ln_bound < ln_eps);
    let n_star = rows.iter().find(|r| r.ln_bound < ln_eps).map(|r| r.n);
    Ok(CoverBoundReport {
        a,
        delta,
        c0,
        offset,
        epsilon,
        vanishing: decreasing && last_small,
        n_star,
        rows,
    })
}

/// Least-squares slope of `ln β(n)` against `n·ln a` over `lo..=hi`,
/// clamped at 0.
pub fn dim_upper_estimate(beta: &[u64], a: f64, lo: usize, hi: usize) -> Result<f64, HausdorffError> {
    if !(a > 1.0) {
        return Err(HausdorffError::Domain(format!("visual parameter must exceed 1, got {a}")));
    }
    if hi > beta.len() {
        return Err(HausdorffError::UnderEnumerated {
            requested: hi,
            achieved: beta.len(),
        });
    }
    let lo = lo.max(1);
    let points: Vec<(f64, f64)> = (lo..=hi)
        .filter(|&n| beta[n - 1] > 0)
        .map(|n| (n as f64 * a.ln(), (beta[n - 1] as f64).ln()))
        .collect();
    if points.len() < 4 {
        return Err(HausdorffError::InsufficientData(points.len()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    // Centring y on its first value keeps a constant table exactly flat.
    let y0 = points[0].1;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - y0)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok((sxy / sxx).max(0.0))
}

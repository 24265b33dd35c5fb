use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lamtool_core::graph_map::{
    analyze_matrix, GraphSelfMap, Orientability, TrainTrackVerdict, DEFAULT_SIZE_CAP,
};
use lamtool_core::hausdorff::{cover_bound_series, dim_upper_estimate, CoverBoundReport, CoverParams};
use lamtool_core::lamination::{attracting_language, transport_compare, LaminaryLanguage, TransportReport};
use lamtool_core::marked_graph::{maximal_subtree, MarkedMetricGraph};
use lamtool_core::substitution::{
    entropy_estimate, growth_equivalence_witness, CountTable, GrowthWitness, Side, Substitution,
};
use lamtool_core::words::Letter;
use serde::Serialize;

use crate::error::CliError;
use crate::format::{parse, InputFile};
use crate::report::{fixed, sig, Provenance};

/// Environment variable overriding the cap on intermediate word lengths.
pub const SIZE_CAP_VAR: &str = "LAMTOOL_SIZE_CAP";

/// Largest `n` for which substitution languages are enumerated explicitly;
/// beyond it counts come from eigenray prefixes.
const EXPLICIT_DEPTH: usize = 64;

/// Depth at which attracting languages are first enumerated.
const INITIAL_DEPTH: usize = 16;

pub fn size_cap() -> Result<usize, CliError> {
    match std::env::var(SIZE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| CliError::Usage(format!("{SIZE_CAP_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

pub struct Loaded {
    pub bytes: Vec<u8>,
    pub input: InputFile,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
    let input = parse(&text)?;
    Ok(Loaded { bytes, input })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// The section that drives a command.
enum Source<'a> {
    Map(&'a GraphSelfMap),
    Sub(&'a Substitution),
    Lang(&'a LaminaryLanguage),
}

impl Source<'_> {
    fn describe(&self) -> &'static str {
        match self {
            Source::Map(_) => "attracting lamination of the map",
            Source::Sub(_) => "factor language of the substitution",
            Source::Lang(_) => "supplied language",
        }
    }
}

fn source(input: &InputFile) -> Result<Source<'_>, CliError> {
    let mut found = Vec::new();
    if let Some(m) = &input.map {
        found.push(Source::Map(m));
    }
    if let Some(s) = &input.sub {
        found.push(Source::Sub(s));
    }
    if let Some(l) = &input.lang {
        found.push(Source::Lang(&l.language));
    }
    match found.len() {
        0 => Err(CliError::Usage("input has no map, sub or lamlang section".into())),
        1 => Ok(found.pop().expect("one source")),
        _ => Err(CliError::Usage("input has more than one of map, sub and lamlang".into())),
    }
}

/// The laminary language a graph-based source describes.
fn graph_language(src: &Source, cap: usize) -> Result<LaminaryLanguage, CliError> {
    match src {
        Source::Map(m) => Ok(attracting_language(m, INITIAL_DEPTH, cap)?),
        Source::Lang(l) => Ok((*l).clone()),
        Source::Sub(_) => Err(CliError::Usage("this command needs a graph-based input (map or lamlang)".into())),
    }
}

fn counts(src: &Source, max_n: usize, cap: usize) -> Result<CountTable, CliError> {
    match src {
        Source::Sub(s) => {
            let weights = vec![1u64; s.alphabet().letter_count()];
            if max_n <= EXPLICIT_DEPTH {
                Ok(s.factor_language(max_n)?.count_table(&weights, 1))
            } else {
                Ok(s.sampled_counts(max_n, &weights, 1, cap)?)
            }
        }
        _ => Ok(graph_language(src, cap)?.counts(max_n, cap)?),
    }
}

fn graph_line(g: &MarkedMetricGraph) -> String {
    let report = g.validate();
    let status = if report.is_valid() {
        "valid".to_string()
    } else {
        format!("invalid: {report}")
    };
    format!(
        "graph {}: {} vertices, {} edges, rank {}, {status}",
        g.name(),
        g.vertices().len(),
        g.edge_count(),
        g.betti()
    )
}

fn letter_set(g: &MarkedMetricGraph, letters: &[Letter]) -> String {
    let names: Vec<String> = letters.iter().map(|&l| g.alphabet().name(l)).collect();
    format!("{{{}}}", names.join(", "))
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct AnalyzeJson {
    provenance: Provenance,
    graph: GraphJson,
    train_track: TrainTrackJson,
    transition_matrix: Vec<Vec<u64>>,
    matrix: MatrixJson,
    orientability: OrientabilityJson,
    substitution: Option<Vec<(String, String)>>,
}

#[derive(Serialize)]
struct GraphJson {
    name: String,
    vertices: usize,
    edges: usize,
    rank: i64,
    valid: bool,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct TrainTrackJson {
    train_track: bool,
    legal_turns: Vec<String>,
    illegal_edge: Option<String>,
    illegal_turn: Option<String>,
    iterate: Option<usize>,
}

#[derive(Serialize)]
struct MatrixJson {
    irreducible: bool,
    primitive: bool,
    primitive_exponent: Option<usize>,
    expanding: bool,
    stretch_factor: String,
    residual: String,
    error_bound: String,
    iterations: usize,
}

#[derive(Serialize)]
struct OrientabilityJson {
    orientable: bool,
    positive_edges: Option<Vec<String>>,
    conflict: Option<(String, String)>,
    witness_edge: Option<String>,
    witness_source: Option<String>,
    witness_exponent: Option<usize>,
}

pub fn analyze(path: &Path, json: bool) -> Result<String, CliError> {
    let loaded = load(path)?;
    let cap = size_cap()?;
    let map = loaded
        .input
        .map
        .as_ref()
        .ok_or_else(|| CliError::Usage("analyze needs a map section".into()))?;
    let g = map.graph();
    let alpha = g.alphabet();
    let validation = g.validate();
    if !validation.is_valid() {
        return Err(CliError::Precondition(format!("graph {} is invalid: {validation}", g.name())));
    }
    let verdict = map.is_train_track();
    let matrix = map.transition_matrix();
    let an = analyze_matrix(&matrix)?;
    let orient = map.orientability(cap);
    let theta = Substitution::from_train_track(map, &orient).ok();
    let turn_name = |t: &lamtool_core::graph_map::Turn| format!("{{{}, {}}}", alpha.name(t.0), alpha.name(t.1));

    if json {
        let (tt, legal, ie, it, iter) = match &verdict {
            TrainTrackVerdict::TrainTrack { legal_turns } => {
                (true, legal_turns.iter().map(turn_name).collect(), None, None, None)
            }
            TrainTrackVerdict::Illegal { edge, turn, iterate } => {
                (false, Vec::new(), Some(alpha.name(*edge)), Some(turn_name(turn)), Some(*iterate))
            }
        };
        let orientability = match &orient {
            Orientability::Orientable { positive } => OrientabilityJson {
                orientable: true,
                positive_edges: Some(positive.iter().map(|&l| alpha.name(l)).collect()),
                conflict: None,
                witness_edge: None,
                witness_source: None,
                witness_exponent: None,
            },
            Orientability::NonOrientable { conflict, witness } => OrientabilityJson {
                orientable: false,
                positive_edges: None,
                conflict: Some((alpha.name(conflict.0), alpha.name(conflict.1))),
                witness_edge: witness.as_ref().map(|w| alpha.name(w.edge)),
                witness_source: witness.as_ref().map(|w| alpha.name(w.source)),
                witness_exponent: witness.as_ref().map(|w| w.exponent),
            },
        };
        let report = AnalyzeJson {
            provenance: Provenance::new(&[&loaded.bytes]),
            graph: GraphJson {
                name: g.name().to_string(),
                vertices: g.vertices().len(),
                edges: g.edge_count(),
                rank: g.betti(),
                valid: true,
                violations: Vec::new(),
            },
            train_track: TrainTrackJson {
                train_track: tt,
                legal_turns: legal,
                illegal_edge: ie,
                illegal_turn: it,
                iterate: iter,
            },
            transition_matrix: matrix.entries.clone(),
            matrix: MatrixJson {
                irreducible: an.irreducible,
                primitive: an.primitive(),
                primitive_exponent: an.primitive_exponent,
                expanding: an.expanding,
                stretch_factor: sig(an.stretch_factor),
                residual: sig(an.residual),
                error_bound: sig(an.error_bound),
                iterations: an.iterations,
            },
            orientability,
            substitution: theta.as_ref().map(|t| {
                t.letters()
                    .iter()
                    .map(|&l| (t.alphabet().name(l), t.format(t.image(l))))
                    .collect()
            }),
        };
        return Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n");
    }

    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    let _ = writeln!(out, "{}", graph_line(g));
    match &verdict {
        TrainTrackVerdict::TrainTrack { legal_turns } => {
            let _ = writeln!(out, "train track: yes ({} turns in the closure are legal)", legal_turns.len());
        }
        TrainTrackVerdict::Illegal { edge, turn, iterate } => {
            let _ = writeln!(
                out,
                "train track: no (turn {} in f({}) degenerates under Df^{iterate}; f^{}({}) is not reduced)",
                turn_name(turn),
                alpha.name(*edge),
                iterate + 1,
                alpha.name(*edge)
            );
        }
    }
    let _ = writeln!(out, "transition matrix:");
    for row in &matrix.entries {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    let _ = writeln!(out, "irreducible: {}", yes(an.irreducible));
    match an.primitive_exponent {
        Some(k) => {
            let _ = writeln!(out, "primitive: yes (k={k})");
        }
        None => {
            let _ = writeln!(out, "primitive: no");
        }
    }
    let _ = writeln!(out, "expanding: {}", yes(an.expanding));
    let _ = writeln!(
        out,
        "stretch factor: {} (residual {:.1e}, {} iterations)",
        fixed(an.stretch_factor, 10),
        an.residual,
        an.iterations
    );
    match &orient {
        Orientability::Orientable { positive } => {
            let _ = writeln!(out, "orientable: yes, E+ = {}", letter_set(g, positive));
        }
        Orientability::NonOrientable { conflict, witness } => {
            let _ = match witness {
                Some(w) => writeln!(
                    out,
                    "orientable: no ({} and {} both occur in {}({}))",
                    alpha.name(w.edge),
                    alpha.name(w.edge.inverse()),
                    if w.exponent == 1 { "f".to_string() } else { format!("f^{}", w.exponent) },
                    alpha.name(w.source)
                ),
                None => {
                    let clash = if conflict.0.edge() == conflict.1.edge() {
                        format!("edge {} is forced to flip its own sign", alpha.edge_names()[conflict.0.edge()])
                    } else {
                        format!("signs of {} and {} conflict", alpha.name(conflict.0), alpha.name(conflict.1))
                    };
                    writeln!(out, "orientable: no ({clash}; no iterate checked contains an edge with both signs)")
                }
            };
        }
    }
    if let Some(t) = &theta {
        let rules: Vec<String> = t
            .letters()
            .iter()
            .map(|&l| format!("{} -> {}", t.alphabet().name(l), t.format(t.image(l))))
            .collect();
        let _ = writeln!(out, "substitution: {}", rules.join(", "));
    }
    Ok(out)
}

// ------------------------------------------------------------- complexity

fn fitted(values: &[u64], upto: usize, power: i32) -> f64 {
    (1..=upto)
        .map(|n| values[n - 1] as f64 / (n as f64).powi(power))
        .fold(0.0, f64::max)
}

pub fn complexity(path: &Path, max_n: usize, csv: Option<&Path>) -> Result<String, CliError> {
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let loaded = load(path)?;
    let cap = size_cap()?;
    let src = source(&loaded.input)?;
    let table = counts(&src, max_n, cap)?;

    let mut body = String::from("n,p,beta,beta_metric\n");
    for r in table.rows() {
        let metric = r.beta_metric.map(|b| b.to_string()).unwrap_or_default();
        let _ = writeln!(body, "{},{},{},{}", r.n, r.p, r.beta, metric);
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "source: {}", src.describe());
    let _ = writeln!(summary, "rows: {max_n}, metric counts certified to n = {}", table.metric_depth);
    if !matches!(src, Source::Lang(_)) {
        let c_full = fitted(&table.p, max_n, 1);
        let half = max_n / 2;
        if half >= 1 {
            let c_half = fitted(&table.p, half, 1);
            let _ = writeln!(
                summary,
                "linear constant C = max p(n)/n: {} for n <= {half}, {} for n <= {max_n} (change {}%)",
                sig(c_half),
                sig(c_full),
                fixed(100.0 * (c_full - c_half).abs() / c_half, 2)
            );
        } else {
            let _ = writeln!(summary, "linear constant C = max p(n)/n: {}", sig(c_full));
        }
        let _ = writeln!(summary, "quadratic constant C' = max beta(n)/n^2: {}", sig(fitted(&table.beta, max_n, 2)));
    }
    if max_n >= 4 {
        if let Ok(est) = entropy_estimate(&table.p) {
            let _ = writeln!(summary, "entropy estimate (mean of log p(n)/n over the last quarter): {}", sig(est.entropy));
        }
    }
    match csv {
        Some(p) => {
            write_file(p, &body)?;
            Ok(summary)
        }
        None => {
            let commented: String = summary.lines().map(|l| format!("# {l}\n")).collect();
            Ok(body + &commented)
        }
    }
}

// -------------------------------------------------------------- dimension

pub struct DimensionArgs<'a> {
    pub path: &'a Path,
    pub a: f64,
    pub deltas: &'a [f64],
    pub max_n: usize,
    pub window: Option<(usize, usize)>,
    pub offset: f64,
    pub json: bool,
    pub csv_dir: Option<&'a Path>,
}

#[derive(Serialize)]
struct DimensionJson {
    provenance: Provenance,
    parameters: DimensionParams,
    reports: Vec<DeltaJson>,
}

#[derive(Serialize)]
struct DimensionParams {
    a: String,
    deltas: Vec<String>,
    max_n: usize,
    c0: String,
    offset: String,
    epsilon: String,
    window: (usize, usize),
}

#[derive(Serialize)]
struct DeltaJson {
    a: String,
    delta: String,
    c0: String,
    vanishing: bool,
    n_star: Option<usize>,
    first_n: usize,
    final_bound: String,
    dim_estimate: String,
}

fn delta_label(delta: f64) -> String {
    sig(delta)
}

pub fn dimension(args: DimensionArgs) -> Result<String, CliError> {
    if !(args.a > 1.0) {
        return Err(CliError::Usage(format!("--a must exceed 1, got {}", args.a)));
    }
    if args.deltas.is_empty() {
        return Err(CliError::Usage("at least one delta is needed".into()));
    }
    if let Some(d) = args.deltas.iter().find(|d| !(**d > 0.0)) {
        return Err(CliError::Usage(format!("delta must be positive, got {d}")));
    }
    if args.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    if !(args.offset >= 0.0) {
        return Err(CliError::Usage("--offset must be non-negative".into()));
    }
    let window = args.window.unwrap_or((args.max_n.div_ceil(2), args.max_n));
    if window.0 == 0 || window.0 > window.1 || window.1 > args.max_n {
        return Err(CliError::Usage(format!(
            "window {},{} must satisfy 1 <= LO <= HI <= max-n",
            window.0, window.1
        )));
    }
    let loaded = load(args.path)?;
    let cap = size_cap()?;
    let src = source(&loaded.input)?;
    let c0 = match &src {
        Source::Sub(_) => 1.0,
        _ => {
            let g = loaded.input.graph.as_ref().expect("graph-based source has a graph");
            let m = g.max_length();
            *m.numer() as f64 / *m.denom() as f64
        }
    };
    let table = counts(&src, args.max_n, cap)?;
    if table.metric_depth < args.max_n {
        return Err(CliError::UnderEnumerated(format!(
            "metric counts certified to n = {}, {} requested",
            table.metric_depth, args.max_n
        )));
    }
    let beta = &table.beta_metric;
    let est = dim_upper_estimate(beta, args.a, window.0, window.1)?;
    let mut reports: Vec<CoverBoundReport> = Vec::new();
    for &delta in args.deltas {
        let mut params = CoverParams::new(args.a, delta, c0);
        params.offset = args.offset;
        reports.push(cover_bound_series(beta, params, 1, args.max_n)?);
    }

    if let Some(dir) = args.csv_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for rep in &reports {
            let mut csv = String::from("n,beta,bound\n");
            for r in &rep.rows {
                let _ = writeln!(csv, "{},{},{}", r.n, r.beta, sig(r.bound));
            }
            let file: PathBuf = dir.join(format!("bound_delta_{}.csv", delta_label(rep.delta)));
            write_file(&file, &csv)?;
        }
    }

    let epsilon = reports[0].epsilon;
    if args.json {
        let doc = DimensionJson {
            provenance: Provenance::new(&[&loaded.bytes]),
            parameters: DimensionParams {
                a: sig(args.a),
                deltas: args.deltas.iter().map(|&d| sig(d)).collect(),
                max_n: args.max_n,
                c0: sig(c0),
                offset: sig(args.offset),
                epsilon: sig(epsilon),
                window,
            },
            reports: reports
                .iter()
                .map(|r| DeltaJson {
                    a: sig(r.a),
                    delta: sig(r.delta),
                    c0: sig(r.c0),
                    vanishing: r.vanishing,
                    n_star: r.n_star,
                    first_n: r.rows[0].n,
                    final_bound: sig(r.rows.last().expect("rows").bound),
                    dim_estimate: sig(est),
                })
                .collect(),
        };
        return Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n");
    }

    let mut out = String::new();
    let _ = writeln!(out, "source: {}", src.describe());
    let _ = writeln!(
        out,
        "a = {}, c0 = {}, offset = {}, epsilon = {}, n from {} to {}",
        sig(args.a),
        sig(c0),
        sig(args.offset),
        sig(epsilon),
        reports[0].rows[0].n,
        args.max_n
    );
    for r in &reports {
        let last = r.rows.last().expect("rows");
        let n_star = r.n_star.map_or("none".to_string(), |n| n.to_string());
        let _ = writeln!(
            out,
            "delta {}: vanishing = {}, n* = {n_star}, bound at n = {} is {}",
            sig(r.delta),
            r.vanishing,
            last.n,
            sig(last.bound)
        );
    }
    let _ = writeln!(out, "dim estimate on n in [{}, {}]: {}", window.0, window.1, sig(est));
    Ok(out)
}

// --------------------------------------------------------------- collapse

fn transport(lang: &LaminaryLanguage, max_n: usize, max_c: u64, cap: usize) -> Result<TransportReport, CliError> {
    let cd = maximal_subtree(&lang.graph)?;
    Ok(transport_compare(lang, &cd, max_n, max_c, cap)?)
}

fn witness_lines(out: &mut String, w: &GrowthWitness, max_n: usize, first: &str, second: &str) {
    match w {
        GrowthWitness::Equivalent { c } => {
            let _ = writeln!(
                out,
                "growth equivalence: C = {c} works for all n <= {max_n} with Cn <= {max_n} (evidence on a finite window)"
            );
        }
        GrowthWitness::Inequivalent { frontier } => {
            let _ = writeln!(out, "growth equivalence: no C <= {} works on n <= {max_n}", frontier.len());
            for f in frontier {
                let what = match f.side {
                    Side::FirstBelowSecond => format!("{first}(n) <= C {second}(Cn)"),
                    Side::SecondBelowFirst => format!("{second}(n) <= C {first}(Cn)"),
                };
                let _ = writeln!(out, "  C = {}: {what} fails at n = {}", f.c, f.n);
            }
        }
    }
}

pub fn collapse(path: &Path, max_n: usize, max_c: u64) -> Result<String, CliError> {
    if max_n == 0 || max_c == 0 {
        return Err(CliError::Usage("--max-n and --max-c must be at least 1".into()));
    }
    let loaded = load(path)?;
    let cap = size_cap()?;
    let src = source(&loaded.input)?;
    let lang = graph_language(&src, cap)?;
    let rep = transport(&lang, max_n, max_c, cap)?;
    let cd = maximal_subtree(&lang.graph)?;
    let alpha = lang.graph.alphabet();
    let subtree: Vec<String> = cd.subtree.iter().map(|&e| alpha.edge_names()[e].clone()).collect();

    let mut out = String::new();
    let _ = writeln!(out, "{}", graph_line(&lang.graph));
    let _ = writeln!(
        out,
        "subtree: {{{}}}; rose {} with petals {}",
        subtree.join(", "),
        cd.rose.name(),
        cd.rose.alphabet().edge_names().join(" ")
    );
    let _ = writeln!(
        out,
        "D = {} (subtree diameter {}), C0 = {}, base enumerated to length {}",
        rep.length_factor, rep.diameter, rep.multiplicity_bound, rep.base_depth
    );
    let _ = writeln!(out, "n,p_base,p_rose,p_base(Dn),upper,lower,max_fiber");
    let pf = |b: bool| if b { "pass" } else { "FAIL" };
    for r in &rep.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.p_base,
            r.p_rose,
            r.p_base_stretched,
            pf(r.upper_holds),
            pf(r.lower_holds),
            r.max_fiber
        );
    }
    let upper = rep.rows.iter().all(|r| r.upper_holds);
    let lower = rep.rows.iter().all(|r| r.lower_holds);
    let _ = writeln!(out, "p_rose(n) <= p_base(D n) for all n <= {max_n}: {}", pf(upper));
    let _ = writeln!(out, "p_base(n) <= C0 p_rose(n) for all n <= {max_n}: {}", pf(lower));
    let _ = writeln!(
        out,
        "empirical constants: D' = {}, max p_base(n)/p_rose(n) = {}",
        rep.empirical_length_factor.map_or("none".into(), |d| d.to_string()),
        sig(rep.empirical_multiplicity)
    );
    witness_lines(&mut out, &rep.witness, max_n, "p_base", "p_rose");
    Ok(out)
}

// ---------------------------------------------------------------- compare

/// `p` on the rose obtained from the input: direct counts for roses and
/// substitutions, transported counts otherwise.
fn rose_table(input: &InputFile, max_n: usize, max_c: u64, cap: usize) -> Result<(Vec<u64>, String), CliError> {
    let src = source(input)?;
    if let Source::Sub(_) = src {
        return Ok((counts(&src, max_n, cap)?.p, "substitution".into()));
    }
    let lang = graph_language(&src, cap)?;
    if lang.graph.vertices().len() == 1 {
        let t = lang.counts(max_n, cap)?;
        return Ok((t.p, format!("graph {} (a rose)", lang.graph.name())));
    }
    let rep = transport(&lang, max_n, max_c, cap)?;
    let p = rep.rows.iter().map(|r| r.p_rose).collect();
    Ok((p, format!("graph {} collapsed to {}", lang.graph.name(), rep.rose_language.graph.name())))
}

pub fn compare(first: &Path, second: &Path, max_n: usize, max_c: u64) -> Result<String, CliError> {
    if max_n == 0 || max_c == 0 {
        return Err(CliError::Usage("--max-n and --max-c must be at least 1".into()));
    }
    let cap = size_cap()?;
    let a = load(first)?;
    let b = load(second)?;
    let (pa, da) = rose_table(&a.input, max_n, max_c, cap)?;
    let (pb, db) = rose_table(&b.input, max_n, max_c, cap)?;
    let w = growth_equivalence_witness(&pa, &pb, max_c)?;
    let mut out = String::new();
    let _ = writeln!(out, "first: {da}");
    let _ = writeln!(out, "second: {db}");
    let _ = writeln!(out, "n,p_first,p_second");
    for n in 1..=max_n {
        let _ = writeln!(out, "{n},{},{}", pa[n - 1], pb[n - 1]);
    }
    witness_lines(&mut out, &w, max_n, "p_first", "p_second");
    Ok(out)
}

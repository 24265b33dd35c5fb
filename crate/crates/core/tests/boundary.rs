use lamtool_core::graph_map::{GraphSelfMap, DEFAULT_SIZE_CAP};
use lamtool_core::hausdorff::{
    cover_bound_series, dim_upper_estimate, gromov_product, visual_distance, BoundaryRay, CoverParams, GromovProduct,
    VisualDistance,
};
use lamtool_core::lamination::attracting_language;
use lamtool_core::marked_graph::{parse_length, EdgeSpec, MarkedMetricGraph};
use lamtool_core::words::Letter;

fn fibonacci() -> GraphSelfMap {
    let g = MarkedMetricGraph::rose("r", &["a", "b"]).unwrap();
    GraphSelfMap::from_literals(g, &[("v", "v")], &[("a", "a b"), ("b", "a")]).unwrap()
}

#[test]
fn periodic_rays_split_where_expected() {
    let g = MarkedMetricGraph::rose("r", &["a", "b"]).unwrap();
    let (a, b) = (Letter::positive(0), Letter::positive(1));
    let p = BoundaryRay::periodic(g.clone(), &[], &[a]).unwrap();
    let q = BoundaryRay::periodic(g.clone(), &[a, a], &[b]).unwrap();
    let precision = parse_length("50").unwrap();
    assert_eq!(gromov_product(&p, &q, precision).unwrap(), GromovProduct::Exact(parse_length("2").unwrap()));
    match visual_distance(&p, &q, 3.0, precision).unwrap() {
        VisualDistance::Exact(d) => assert!((d - 1.0 / 9.0).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
    let same = BoundaryRay::periodic(g, &[a], &[a]).unwrap();
    assert!(matches!(visual_distance(&p, &same, 3.0, precision).unwrap(), VisualDistance::AtMost(_)));
}

#[test]
fn fibonacci_lamination_covering_bounds() {
    let lang = attracting_language(&fibonacci(), 16, DEFAULT_SIZE_CAP).unwrap();
    let table = lang.counts(1000, DEFAULT_SIZE_CAP).unwrap();
    for n in 1..=1000u64 {
        assert_eq!(table.beta_metric[n as usize - 1], n * n + 3 * n);
    }
    let rep = cover_bound_series(&table.beta_metric, CoverParams::new(2.0, 0.5, 1.0), 1, 1000).unwrap();
    assert!(rep.vanishing);
    assert_eq!(rep.n_star, Some(66));
    let est = dim_upper_estimate(&table.beta_metric, 2.0, 500, 1000).unwrap();
    assert!(est < 0.01, "{est}");
}

#[test]
fn halving_lengths_doubles_metric_counts_scale() {
    // With every edge of length 1/2, beta_metric(n) counts words of up to 2n
    // letters.
    let g = MarkedMetricGraph::new(
        "h",
        &["v"],
        vec![
            EdgeSpec::new("a", "v", "v", parse_length("0.5").unwrap()),
            EdgeSpec::new("b", "v", "v", parse_length("0.5").unwrap()),
        ],
    )
    .unwrap();
    let map = GraphSelfMap::from_literals(g, &[("v", "v")], &[("a", "a b"), ("b", "a")]).unwrap();
    let lang = attracting_language(&map, 16, DEFAULT_SIZE_CAP).unwrap();
    let table = lang.counts(40, DEFAULT_SIZE_CAP).unwrap();
    for n in 1..=40u64 {
        let m = 2 * n;
        assert_eq!(table.beta_metric[n as usize - 1], m * m + 3 * m);
        assert_eq!(table.beta[n as usize - 1], n * n + 3 * n);
    }
}

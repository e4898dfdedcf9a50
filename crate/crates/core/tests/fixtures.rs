use wastar_core::bounds::{dominance_gap, f_lower_bound_ratio, make_report, TraceCollector};
use wastar_core::domains::generate::random_pancake;
use wastar_core::domains::pancake::parse_pancake_instances;
use wastar_core::domains::ExplicitGraph;
use wastar_core::oracle::{check_admissible, check_consistent, optimal_cost, Verdict};
use wastar_core::{weighted_astar, Limits, Rational, SearchOptions, SearchStatus, Weight};

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn graph(name: &str) -> ExplicitGraph<f64> {
    ExplicitGraph::parse(&fixture(name)).unwrap()
}

fn names(g: &ExplicitGraph<f64>, path: &[(usize, f64)]) -> Vec<String> {
    path.iter().map(|(s, _)| g.name(*s).to_string()).collect()
}

fn run(g: &ExplicitGraph<f64>, w: f64) -> wastar_core::SearchResult<usize, f64> {
    let opts = SearchOptions {
        audit_open: true,
        ..SearchOptions::default()
    };
    weighted_astar(g, Weight::new(w).unwrap(), Limits::unlimited(), opts).unwrap()
}

#[test]
fn fig2_returns_the_path_through_a() {
    let g = graph("fig2.graph");
    let r = run(&g, 10.0);
    assert_eq!(r.status, SearchStatus::Solved);
    assert_eq!(r.cost, Some(22.0));
    assert_eq!(names(&g, &r.path), ["S", "A", "G"]);
    assert_eq!(r.iterations, 3);
    assert_eq!(r.trace.f_w_max, 182.0);
    assert_eq!(r.trace.g_min_at_f, 0.0);
    assert_eq!(optimal_cost(&g, Limits::unlimited()).unwrap().optimal_cost, 20.0);
}

#[test]
fn fig2_report() {
    let g = graph("fig2.graph");
    let w = Weight::new(10.0).unwrap();
    let r = make_report(&run(&g, 10.0), w, Some(20.0)).unwrap();
    assert!((r.f_max_bound - 220.0 / 182.0).abs() < 1e-9);
    assert!((r.subopt.unwrap() - 1.1).abs() < 1e-12);
    assert_eq!(r.w_bound, 10.0);
}

#[test]
fn fig2_f_bound_matches_hand_trace() {
    // Hand trace at W = 10:
    //   iter 1: Open {S(g0,h18)}                      pop S, fW 180
    //   iter 2: Open {A(g2,h18), B(g0,h19)}           pop A, fW 182
    //   iter 3: Open {B(g0,h19), G(g22,h0)}           pop G, fW 22
    // Unweighted f on Open at iter 3: B = 19, G = 22.
    let open_at_goal = [(0.0, 19.0), (22.0, 0.0)];
    let hand_f_min = open_at_goal.iter().map(|(g, h)| g + h).fold(f64::INFINITY, f64::min);
    let g = graph("fig2.graph");
    let r = run(&g, 10.0);
    assert_eq!(r.trace.f_min_final, Some(hand_f_min));
    let f_bound = f_lower_bound_ratio(22.0, hand_f_min).unwrap();
    assert!((f_bound - 22.0 / 19.0).abs() < 1e-12);
    // consistent h: the f bound sits below the F bound
    assert!(f_bound <= 220.0 / 182.0);
    assert_eq!(dominance_gap(Weight::new(10.0).unwrap(), 19.0, 182.0, 0.0), 8.0);
}

#[test]
fn fig2_is_consistent_and_admissible() {
    let g = graph("fig2.graph");
    assert_eq!(check_consistent(&g, 100), Verdict::Ok);
    assert_eq!(check_admissible(&g, 100), Verdict::Ok);
}

#[test]
fn fig2_exact_rational_bound() {
    let g: ExplicitGraph<Rational> = ExplicitGraph::parse(&fixture("fig2.graph")).unwrap();
    let w = Weight::new(Rational::from_integer(10)).unwrap();
    let res = weighted_astar(&g, w, Limits::unlimited(), SearchOptions::default()).unwrap();
    let r = make_report(&res, w, Some(Rational::from_integer(20))).unwrap();
    assert_eq!(r.f_max_bound, Rational::new(110, 91));
    assert_eq!(r.f_min_bound, Rational::new(22, 19));
    assert_eq!(r.subopt, Some(Rational::new(11, 10)));
}

#[test]
fn fig8_quantities() {
    let g = graph("fig8.graph");
    let r = run(&g, 2.0);
    assert_eq!(r.cost, Some(7.0));
    assert_eq!(names(&g, &r.path), ["S", "m", "G"]);
    assert_eq!(r.trace.f_w_max, 11.0);
    assert_eq!(r.trace.g_min_at_f, 0.0);
    assert_eq!(r.trace.f_min_final, Some(5.0));
    assert_eq!(r.trace.combined_max, 11.0);
    assert_eq!(optimal_cost(&g, Limits::unlimited()).unwrap().optimal_cost, 6.0);

    let rep = make_report(&r, Weight::new(2.0).unwrap(), Some(6.0)).unwrap();
    assert!((rep.f_min_bound - 1.4).abs() < 1e-9);
    assert!((rep.f_max_bound - 14.0 / 11.0).abs() < 1e-9);
    assert!(rep.f_max_bound < rep.f_min_bound);
    assert!((rep.subopt.unwrap() - 7.0 / 6.0).abs() < 1e-12);
    assert_eq!(dominance_gap(Weight::new(2.0).unwrap(), 5.0, 11.0, 0.0), -1.0);
}

#[test]
fn fig8_trace_sequence() {
    // fW_min per iteration is 10, 11, 7 with g_min 0 throughout.
    let mut tc = TraceCollector::new(Weight::new(2.0).unwrap());
    tc.observe_iteration(10.0, 0.0, None);
    tc.observe_iteration(11.0, 0.0, None);
    tc.observe_iteration(7.0, 0.0, Some(5.0));
    let t = tc.summary();
    assert_eq!(t.f_w_max, 11.0);
    assert_eq!(t.iterations, 3);
    assert_eq!(run(&graph("fig8.graph"), 2.0).trace, t);
}

#[test]
fn fig8_inconsistent_only_at_m_n() {
    let g = graph("fig8.graph");
    let Verdict::Violations(vs) = check_consistent(&g, 100) else {
        panic!("fig8 should be inconsistent");
    };
    let edges: Vec<(&str, &str)> = vs.iter().map(|v| (g.name(v.from), g.name(v.to))).collect();
    assert_eq!(edges, [("m", "n")]);
    assert_eq!(check_admissible(&g, 100), Verdict::Ok);
}

#[test]
fn pancake_corpus_matches_generator() {
    let corpus = parse_pancake_instances(&fixture("pancake10.txt")).unwrap();
    assert_eq!(corpus.len(), 100);
    for (seed, stack) in corpus.iter().enumerate() {
        assert_eq!(stack, &random_pancake(10, seed as u64), "seed {seed}");
    }
}

use oddcyc::format::{emit_dot, emit_edgelist, emit_graph6, parse_any, parse_dot, parse_edgelist, parse_graph6, GraphFile};
use oddcyc::report::GraphJson;
use oddcyc_core::Graph;
use proptest::prelude::*;

fn graph_file() -> impl Strategy<Value = GraphFile> {
    (2usize..40).prop_flat_map(|n| {
        let pairs = prop::collection::btree_set((0..n, 0..n), 0..3 * n);
        (Just(n), pairs, any::<bool>(), 0..n, 0..n)
    })
    .prop_map(|(n, pairs, with_terminals, s, t)| {
        let edges: std::collections::BTreeSet<(usize, usize)> = pairs
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let edges: Vec<_> = edges.into_iter().collect();
        let terminals = (with_terminals && s != t).then_some((s, t));
        GraphFile {
            graph: Graph::new(n, &edges).unwrap(),
            terminals,
        }
    })
}

proptest! {
    #[test]
    fn edgelist_round_trip(g in graph_file()) {
        let text = emit_edgelist(&g);
        let back = parse_edgelist(&text).unwrap();
        prop_assert_eq!(back.graph.sorted_edges(), g.graph.sorted_edges());
        prop_assert_eq!(back.terminals, g.terminals);
        prop_assert_eq!(emit_edgelist(&back), text.clone());
        prop_assert_eq!(emit_edgelist(&parse_any(&text, None).unwrap()), text);
    }

    #[test]
    fn graph6_round_trip(g in graph_file()) {
        let text = emit_graph6(&g);
        let back = parse_graph6(&text).unwrap();
        prop_assert_eq!(back.graph.sorted_edges(), g.graph.sorted_edges());
        prop_assert_eq!(back.terminals, g.terminals);
        prop_assert_eq!(emit_graph6(&back), text.clone());
        prop_assert_eq!(emit_graph6(&parse_any(&text, None).unwrap()), text);
    }

    #[test]
    fn dot_round_trip(g in graph_file()) {
        let text = emit_dot(&g, "g");
        let back = parse_dot(&text).unwrap();
        prop_assert_eq!(back.graph.sorted_edges(), g.graph.sorted_edges());
        prop_assert_eq!(back.terminals, g.terminals);
        prop_assert_eq!(emit_dot(&back, "g"), text);
    }

    #[test]
    fn json_round_trip(g in graph_file()) {
        let text = serde_json::to_string(&GraphJson::from_file(&g)).unwrap();
        let back = serde_json::from_str::<GraphJson>(&text).unwrap().to_file().unwrap();
        prop_assert_eq!(back.graph.sorted_edges(), g.graph.sorted_edges());
        prop_assert_eq!(back.terminals, g.terminals);
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,80}") {
        let _ = parse_edgelist(&text);
        let _ = parse_graph6(&text);
        let _ = parse_dot(&text);
    }
}

#[test]
fn reference_graph6_strings() {
    // Petersen graph, a standard graph6 test vector.
    let p = parse_graph6("IheA@GUAo").unwrap();
    assert_eq!(p.graph.vertex_count(), 10);
    assert_eq!(p.graph.edge_count(), 15);
    assert!((0..10).all(|v| p.graph.degree(v) == 3));
    assert_eq!(emit_graph6(&p), "IheA@GUAo\n");
    let empty = parse_graph6("?").unwrap();
    assert_eq!(empty.graph.vertex_count(), 0);
}

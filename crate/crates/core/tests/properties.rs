use std::sync::OnceLock;

use biquasile::algebra::{alexander_biquasile, enumerate_biquasiles};
use biquasile::boltzmann::{check_weight, enhanced_invariant_with, weight_of_coloring_with};
use biquasile::diagram::resolution_map;
use biquasile::invariants::cobordism_inclusion_check_with;
use biquasile::solver::{
    check_coloring, count_colorings_with, list_colorings_with, oracle_count_with,
};
use biquasile::{
    build_linear_system, corpus, parse_diagram, parse_matrix, parse_weight, resolve,
    serialize_diagram, serialize_matrix, serialize_weight, Biquasile, BoltzmannWeight, Coloring,
    MarkedGraphDiagram, MarkedSchema, Sign, Vertex, VertexKind,
};
use proptest::prelude::*;

const SCHEMAS: [MarkedSchema; 2] = [MarkedSchema::Identify, MarkedSchema::Reciprocal];

fn small_algebras() -> &'static [Biquasile] {
    static ALGS: OnceLock<Vec<Biquasile>> = OnceLock::new();
    ALGS.get_or_init(|| (1..=3).flat_map(enumerate_biquasiles).collect())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn unit_triple() -> impl Strategy<Value = (usize, i64, i64, i64)> {
    (2usize..=12).prop_flat_map(|m| {
        let units: Vec<i64> = (1..m as i64).filter(|&u| gcd(u, m as i64) == 1).collect();
        let pick = proptest::sample::select(units);
        (Just(m), pick.clone(), pick.clone(), pick)
    })
}

fn vertex(n: usize) -> impl Strategy<Value = Vertex> {
    let kind = prop_oneof![
        Just(VertexKind::PositiveCrossing),
        Just(VertexKind::NegativeCrossing),
        Just(VertexKind::MarkedVertex),
    ];
    (kind, 0..n, 0..n, 0..n, 0..n).prop_map(|(k, x, a, b, y)| Vertex::new(k, x, a, b, y))
}

/// Vertex systems with no geometric meaning; every region may be left free.
fn vertex_system(max_regions: usize) -> impl Strategy<Value = MarkedGraphDiagram> {
    (1..=max_regions).prop_flat_map(|n| {
        proptest::collection::vec(vertex(n), 0..=5).prop_map(move |vs| {
            MarkedGraphDiagram::build(None, n, None, n, vs).expect("regions in range")
        })
    })
}

fn scaled(w: &BoltzmannWeight, k: u64) -> BoltzmannWeight {
    (0..k).fold(
        BoltzmannWeight::zero(w.order(), w.modulus()).unwrap(),
        |acc, _| acc.checked_add(w).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn alexander_unit_triples_are_biquasiles((m, d, s, n) in unit_triple()) {
        let b = alexander_biquasile(m, d, s, n).expect("unit parameters");
        let p = b.alexander_params().unwrap();
        let mi = m as i64;
        for x in 0..m {
            for y in 0..m {
                let (xr, yr) = (p.residue(x) as i64, p.residue(y) as i64);
                let star = (-d * s * n * n * xr + n * yr).rem_euclid(mi) as usize;
                let dot = (d * xr + s * yr).rem_euclid(mi) as usize;
                prop_assert_eq!(p.residue(b.star(x, y)), star);
                prop_assert_eq!(p.residue(b.dot(x, y)), dot);
            }
        }
    }

    #[test]
    fn backtracking_matches_oracle(d in vertex_system(6), idx in 0usize..77) {
        let alg = &small_algebras()[idx % small_algebras().len()];
        for schema in SCHEMAS {
            let brute = oracle_count_with(&d, alg, schema, u128::MAX).unwrap();
            prop_assert_eq!(count_colorings_with(&d, alg, schema), brute);
            prop_assert_eq!(list_colorings_with(&d, alg, schema).len() as u128, brute);
        }
    }

    #[test]
    fn smith_form_matches_oracle(d in vertex_system(5), (m, a, s, n) in unit_triple()) {
        prop_assume!(m <= 6);
        let alg = alexander_biquasile(m, a, s, n).unwrap();
        let params = alg.alexander_params().unwrap();
        for schema in SCHEMAS {
            let brute = oracle_count_with(&d, &alg, schema, u128::MAX).unwrap();
            prop_assert_eq!(biquasile::count_solutions_linear(&build_linear_system(&d, params, schema)), brute);
            prop_assert_eq!(count_colorings_with(&d, &alg, schema), brute);
        }
    }

    #[test]
    fn colorings_push_forward_to_resolutions(d in vertex_system(6), idx in 0usize..77) {
        let alg = &small_algebras()[idx % small_algebras().len()];
        let schema = MarkedSchema::Identify;
        for f in list_colorings_with(&d, alg, schema) {
            prop_assert!(check_coloring(&d, alg, schema, &f).is_ok());
            for sign in [Sign::Positive, Sign::Negative] {
                let (map, count) = resolution_map(&d, sign);
                let mut g = vec![usize::MAX; count];
                for (r, &v) in f.values().iter().enumerate() {
                    prop_assert!(g[map[r]] == usize::MAX || g[map[r]] == v, "not constant on a merged class");
                    g[map[r]] = v;
                }
                let g: Vec<usize> = g.into_iter().map(|v| if v == usize::MAX { 0 } else { v }).collect();
                let r = resolve(&d, sign);
                prop_assert!(check_coloring(r.diagram(), alg, schema, &Coloring(g)).is_ok());
            }
        }
    }

    #[test]
    fn enhanced_invariant_is_included_in_resolutions(d in vertex_system(6), k1 in 0u64..5, k3 in 0u64..5) {
        let y2 = biquasile::algebra::named::y2();
        let w = scaled(&corpus::weight("w1").unwrap(), k1)
            .checked_add(&scaled(&corpus::weight("w3").unwrap(), k3))
            .unwrap();
        prop_assert!(cobordism_inclusion_check_with(&d, &y2, &w, MarkedSchema::Identify));
    }

    #[test]
    fn diagram_round_trip(d in vertex_system(9)) {
        let back = parse_diagram(&serialize_diagram(&d)).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn matrix_round_trip(idx in 0usize..77) {
        let alg = &small_algebras()[idx % small_algebras().len()];
        let back = parse_matrix(&serialize_matrix(alg)).unwrap();
        prop_assert_eq!(back.star_table(), alg.star_table());
        prop_assert_eq!(back.dot_table(), alg.dot_table());
    }

    #[test]
    fn weight_round_trip(values in proptest::collection::vec(0i64..7, 8)) {
        let mut w = BoltzmannWeight::zero(2, 7).unwrap();
        for (i, v) in values.iter().enumerate() {
            w.set(i >> 2, (i >> 1) & 1, i & 1, *v);
        }
        prop_assert_eq!(parse_weight(&serialize_weight(&w)).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn valid_weight_combinations_are_trivial_on_closed_fixtures(
        k1 in 0u64..5, k2 in 0u64..5, k3 in 0u64..5, pick in 0usize..23,
    ) {
        let y2 = biquasile::algebra::named::y2();
        let w = [("w1", k1), ("w2", k2), ("w3", k3)]
            .iter()
            .map(|(n, k)| scaled(&corpus::weight(n).unwrap(), *k))
            .reduce(|a, b| a.checked_add(&b).unwrap())
            .unwrap();
        prop_assert!(check_weight(&y2, &w).unwrap().is_empty());
        let closed = corpus::closed();
        let d = &closed[pick % closed.len()];
        prop_assert!(enhanced_invariant_with(d, &y2, &w, MarkedSchema::Identify).is_trivial());
        for f in list_colorings_with(d, &y2, MarkedSchema::Identify) {
            prop_assert_eq!(weight_of_coloring_with(d, &y2, &w, &f, MarkedSchema::Identify).unwrap(), 0);
        }
    }
}

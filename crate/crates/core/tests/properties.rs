use coarsegraph::corpus::{random_connected_graph, random_weighted_graph, seeded};
use coarsegraph::fatminor::{
    find_fat_minor, merge_close_sets, verify_model, MinorModel, PatternGraph,
};
use coarsegraph::graph::io::{read_graph, write_graph};
use coarsegraph::graph::{
    induced_subgraph, is_connected_set, neighborhood, power_graph, scale_weights, subdivide,
    AllPairs,
};
use coarsegraph::menger::{find_spread_paths, SpreadPathQuery};
use coarsegraph::quasiiso::{expand_image, identity_into_power, pushforward_model};
use coarsegraph::{Distance, Graph, Rational, Verdict, VertexSet};
use proptest::prelude::*;
use rand::Rng;

fn graph(n: usize, density: f64, seed: u64) -> Graph {
    random_connected_graph(&mut seeded(seed), n, density)
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.6f64, any::<u64>()).prop_map(|(n, d, s)| graph(n, d, s))
}

fn arb_weighted(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.6f64, any::<u64>())
        .prop_map(|(n, d, s)| random_weighted_graph(&mut seeded(s), n, d, 7, 4))
}

fn r(x: i64) -> Rational {
    Rational::from_integer(x)
}

/// Ball of the given hop radius around `v`: connected and non-empty.
fn ball(g: &Graph, v: usize, radius: i64) -> VertexSet {
    neighborhood(g, &VertexSet::singleton(v), r(radius)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighborhoods_grow_with_radius(g in arb_weighted(12), seed: u64, a in 0i64..6, b in 0i64..6) {
        let mut rng = seeded(seed);
        let y: VertexSet = g.vertices().filter(|_| rng.random_bool(0.3)).collect();
        prop_assume!(!y.is_empty());
        let (lo, hi) = (a.min(b), a.max(b));
        let small = neighborhood(&g, &y, Rational::new(lo, 2)).unwrap();
        let large = neighborhood(&g, &y, Rational::new(hi, 2)).unwrap();
        prop_assert!(y.is_subset(&small));
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn triangle_inequality(g in arb_weighted(10)) {
        let d = AllPairs::new(&g).unwrap();
        for x in g.vertices() {
            for y in g.vertices() {
                for z in g.vertices() {
                    let (Distance::Finite(xy), Distance::Finite(yz), Distance::Finite(xz)) =
                        (d.get(x, y), d.get(y, z), d.get(x, z)) else { unreachable!() };
                    prop_assert!(xz <= xy + yz);
                }
            }
        }
    }

    #[test]
    fn power_distance_is_ceiling(g in arb_graph(10), k in 1usize..5) {
        let d = AllPairs::new(&g).unwrap();
        let dk = AllPairs::new(&power_graph(&g, k).unwrap()).unwrap();
        for u in g.vertices() {
            for v in g.vertices() {
                let h = d.hops(u, v).unwrap();
                prop_assert_eq!(dk.hops(u, v).unwrap(), h.div_ceil(k as u64));
            }
        }
    }

    #[test]
    fn subdivision_scales_distances(g in arb_graph(8), k in 1usize..4) {
        let s = subdivide(&g, k).unwrap();
        let d = AllPairs::new(&g).unwrap();
        let ds = AllPairs::new(&s.graph).unwrap();
        for u in g.vertices() {
            for v in g.vertices() {
                prop_assert_eq!(ds.hops(u, v).unwrap(), (k as u64 + 1) * d.hops(u, v).unwrap());
            }
        }
    }

    #[test]
    fn scaling_scales_distances(g in arb_weighted(10), num in 1i64..9, den in 1i64..9) {
        let f = Rational::new(num, den);
        let d = AllPairs::new(&g).unwrap();
        let ds = AllPairs::new(&scale_weights(&g, f).unwrap()).unwrap();
        for u in g.vertices() {
            for v in g.vertices() {
                prop_assert_eq!(ds.get(u, v).finite(), d.get(u, v).finite().map(|x| x * f));
            }
        }
    }

    #[test]
    fn induced_distances_never_shrink(g in arb_weighted(10), seed: u64) {
        let mut rng = seeded(seed);
        let z: VertexSet = g.vertices().filter(|_| rng.random_bool(0.6)).collect();
        prop_assume!(!z.is_empty());
        let sub = induced_subgraph(&g, &z).unwrap();
        let d = AllPairs::new(&g).unwrap();
        let dz = AllPairs::new(&sub.graph).unwrap();
        for u in z.iter() {
            for v in z.iter() {
                let inside = dz.get(sub.local(u).unwrap(), sub.local(v).unwrap());
                prop_assert!(inside >= d.get(u, v));
            }
        }
    }

    #[test]
    fn text_format_round_trips(g in prop_oneof![arb_graph(12), arb_weighted(12)]) {
        let text = write_graph(&g);
        let back = read_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&back), text);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn merge_sandwich(g in arb_graph(20), seed: u64, count in 1usize..6, eps in 1i64..4) {
        let mut rng = seeded(seed);
        let n = g.vertex_count();
        let xs: Vec<VertexSet> = (0..count)
            .map(|_| ball(&g, rng.random_range(0..n), rng.random_range(0..2)))
            .collect();
        let eps = r(eps);
        let out = merge_close_sets(&g, &xs, eps).unwrap();
        let union_x = xs.iter().fold(VertexSet::new(), |a, b| a.union(b));
        let union_y = out.sets.iter().fold(VertexSet::new(), |a, b| a.union(b));
        let slack = eps * r((xs.len() - out.sets.len()) as i64);
        prop_assert!(union_x.is_subset(&union_y));
        prop_assert!(union_y.is_subset(&neighborhood(&g, &union_x, slack).unwrap()));
        for (i, a) in out.sets.iter().enumerate() {
            prop_assert!(is_connected_set(&g, a));
            for b in &out.sets[i + 1..] {
                let d = coarsegraph::graph::set_distance(&g, a, b).unwrap();
                prop_assert!(d.at_least(eps));
            }
        }
    }

    #[test]
    fn expanded_images_are_connected(g in arb_graph(12), k in 1usize..4, seed: u64) {
        let qi = identity_into_power(&g, k).unwrap().certify().unwrap();
        let mut rng = seeded(seed);
        let x = ball(&g, rng.random_range(0..g.vertex_count()), rng.random_range(0..3));
        let out = expand_image(&qi, &x).unwrap();
        prop_assert!(is_connected_set(qi.codomain(), &out));
        prop_assert!(qi.image(&x).is_subset(&out));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fatness_is_monotone(g in arb_graph(8), pattern in prop::sample::select(vec!["k3", "p3"]), k in 1i64..4) {
        let h = PatternGraph::named(pattern).unwrap();
        match find_fat_minor(&g, &h, r(k), u64::MAX).unwrap() {
            Verdict::Found(m) => {
                for smaller in 0..=k {
                    prop_assert!(verify_model(&g, &h, &m, r(smaller)).is_ok());
                }
                if k > 1 {
                    prop_assert!(find_fat_minor(&g, &h, r(k - 1), u64::MAX).unwrap().is_found());
                }
            }
            Verdict::NoneExhaustive => {
                let above = find_fat_minor(&g, &h, r(k + 1), u64::MAX).unwrap();
                prop_assert_eq!(above, Verdict::NoneExhaustive);
            }
            Verdict::Inconclusive { .. } => unreachable!("unbounded budget"),
        }
    }

    #[test]
    fn scaled_models_keep_scaled_fatness(g in arb_weighted(8), num in 1i64..6, den in 1i64..6) {
        let h = PatternGraph::named("p3").unwrap();
        let unit = g.unweighted();
        let Verdict::Found(m) = find_fat_minor(&unit, &h, r(1), u64::MAX).unwrap() else {
            return Ok(());
        };
        let sep = coarsegraph::fatminor::model_separation(&g, &h, &m).unwrap();
        let Some(Distance::Finite(k)) = sep.map(|p| p.distance) else { return Ok(()) };
        let f = Rational::new(num, den);
        let scaled = scale_weights(&g, f).unwrap();
        prop_assert!(verify_model(&g, &h, &m, k).is_ok());
        prop_assert!(verify_model(&scaled, &h, &m, k * f).is_ok());
    }

    #[test]
    fn pushforward_meets_its_bound(n in 6usize..16, k in 1usize..4, f in 1i64..4) {
        let g = Graph::cycle(n);
        let h = PatternGraph::named("k2").unwrap();
        let Verdict::Found(m) = find_fat_minor(&g, &h, r(f), u64::MAX).unwrap() else {
            return Ok(());
        };
        let qi = identity_into_power(&g, k).unwrap().certify().unwrap();
        let pf = pushforward_model(&qi, &h, &m).unwrap();
        if let Some(bound) = pf.guaranteed(qi.q()) {
            prop_assert!(pf.achieved >= bound);
        }
        let m: MinorModel = pf.model;
        if let Distance::Finite(d) = pf.achieved {
            prop_assert!(verify_model(qi.codomain(), &h, &m, d).is_ok());
        }
    }

    #[test]
    fn spread_paths_are_monotone_in_distance(g in arb_graph(10), seed: u64, count in 1usize..4, d in 0u64..4) {
        let mut rng = seeded(seed);
        let s: VertexSet = g.vertices().filter(|_| rng.random_bool(0.35)).collect();
        let t: VertexSet = g.vertices().filter(|_| rng.random_bool(0.35)).collect();
        prop_assume!(!s.is_empty() && !t.is_empty());
        let at = |distance| {
            find_spread_paths(&g, &SpreadPathQuery {
                sources: s.clone(),
                sinks: t.clone(),
                count,
                distance,
                budget: u64::MAX,
            }).unwrap()
        };
        match at(d) {
            Verdict::Found(_) if d > 0 => prop_assert!(at(d - 1).is_found()),
            Verdict::NoneExhaustive => prop_assert_eq!(at(d + 1), Verdict::NoneExhaustive),
            _ => {}
        }
    }
}

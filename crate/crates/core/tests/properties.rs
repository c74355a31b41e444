use proptest::prelude::*;

use wedgekit::cluster::enumerate_structures;
use wedgekit::document::{self, DocumentKind};
use wedgekit::euler::{self, EulerInput};
use wedgekit::kb::{KnowledgeBase, StoreOutcome};
use wedgekit::rational::{format_rational, int, parse_rational, ratio};
use wedgekit::valuation::{self, Comparison};
use wedgekit::{canonical_key, BlowupCluster, DualGraph, Error, Status, Vertex, VertexId};

fn structure(max: usize) -> impl Strategy<Value = BlowupCluster> {
    (1..=max).prop_flat_map(|n| {
        let all = enumerate_structures(n);
        (0..all.len()).prop_map(move |k| all[k].clone())
    })
}

fn graph() -> impl Strategy<Value = DualGraph> {
    (1..=8u32).prop_flat_map(|n| {
        (
            proptest::collection::vec((-5i64..=-1, 0u32..=2, proptest::option::of("[EF]")), n as usize),
            proptest::collection::vec((0..n, 0..n), 0..=(2 * n as usize)),
        )
            .prop_map(move |(vs, es)| {
                let vertices = vs
                    .into_iter()
                    .enumerate()
                    .map(|(i, (w, g, l))| {
                        let v = Vertex::new(i as u32, w).with_genus(g);
                        match l {
                            Some(l) => v.with_label(l),
                            None => v,
                        }
                    })
                    .collect();
                let edges = es
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (VertexId(a), VertexId(b)))
                    .collect();
                DualGraph::new(vertices, edges).unwrap()
            })
    })
}

fn permuted(g: &DualGraph, shift: u32) -> DualGraph {
    let n = g.len() as u32;
    let map = |id: VertexId| VertexId((id.0 * 5 + shift) % n + 100);
    let mut vertices: Vec<Vertex> = g
        .vertices()
        .iter()
        .map(|v| Vertex { id: map(v.id), ..v.clone() })
        .collect();
    let len = vertices.len();
    vertices.rotate_left(shift as usize % len);
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().iter().map(|&(a, b)| (map(b), map(a))).collect();
    edges.reverse();
    DualGraph::new(vertices, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_roundtrip(p in -10_000i64..10_000, q in 1i64..500) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn graph_documents_roundtrip(g in graph()) {
        let text = document::graph_document(&g).to_string();
        prop_assert!(document::validate(&text, DocumentKind::Graph).is_empty());
        let back = document::parse_graph(&text).unwrap();
        prop_assert_eq!(canonical_key(&back), canonical_key(&g));
    }

    // Multiplying ids by 5 permutes residues mod n whenever gcd(5, n) = 1.
    #[test]
    fn keys_ignore_labelling(g in graph(), shift in 0u32..16) {
        prop_assume!(g.len() % 5 != 0);
        prop_assert_eq!(canonical_key(&permuted(&g, shift)), canonical_key(&g));
    }

    #[test]
    fn keys_see_weights(g in graph(), k in 0usize..8) {
        let k = k % g.len();
        let vertices: Vec<Vertex> = g
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| if i == k { Vertex { self_int: v.self_int - 7, ..v.clone() } } else { v.clone() })
            .collect();
        let h = DualGraph::new(vertices, g.edges().to_vec()).unwrap();
        prop_assert_ne!(canonical_key(&h), canonical_key(&g));
    }

    // Adjunction on rational curves: K·F_i = −2 − F_i².
    #[test]
    fn canonical_coefficients_satisfy_adjunction(c in structure(8)) {
        let m = c.intersection_matrix();
        let a: Vec<_> = c.canonical_coeffs().a.iter().map(|&x| int(x as i64)).collect();
        let ka = m.mul_vec(&a).unwrap();
        for (i, k) in ka.iter().enumerate() {
            prop_assert_eq!(k, &(int(-2) - m.get(i, i)));
        }
    }

    #[test]
    fn simulation_matches_proximity(c in structure(8)) {
        let p = c.proximity_matrix();
        prop_assert_eq!(wedgekit::cluster::intersection_from_proximity(&p), c.intersection_matrix());
        prop_assert!(c.intersection_matrix().determinant() == int(1) || c.intersection_matrix().determinant() == int(-1));
    }

    #[test]
    fn compare_is_antisymmetric(c in structure(5), e in 0usize..5, f in 0usize..5) {
        let (e, f) = (e % c.len(), f % c.len());
        let c = c.with_some_tangents();
        let there = valuation::compare(&c, e, f).unwrap();
        let back = valuation::compare(&c, f, e).unwrap();
        let flipped = match there {
            Comparison::LessEq => Comparison::GreaterEq,
            Comparison::GreaterEq => Comparison::LessEq,
            other => other,
        };
        prop_assert_eq!(back, flipped);
        prop_assert_eq!(there == Comparison::Equal, e == f);
    }

    #[test]
    fn curvettes_realise_columns(c in structure(5), i in 0usize..5) {
        let i = i % c.len();
        let c = c.with_some_tangents();
        let g = valuation::curvette_polynomial(&c, i).unwrap();
        let minus = valuation::minus_inverse(&c);
        for e in 0..c.len() {
            prop_assert_eq!(int(valuation::ord_poly(&c, &g, e).unwrap() as i64), minus.get(e, i).clone());
        }
    }

    #[test]
    fn euler_parts_assemble(g in graph(), seed in proptest::collection::vec(0u64..=5, 8), attach in 0usize..8) {
        let n = g.len();
        let attach = attach % n;
        let mut a = seed[..n].to_vec();
        a[attach] = a[attach].max(1);
        let input = EulerInput::new(g, a, VertexId(attach as u32)).unwrap();
        let cert = euler::contradiction_certificate(&input).unwrap();
        prop_assert_eq!(cert.b0 + cert.balls + cert.tubes, cert.bound);
        prop_assert_eq!(cert.bound, euler::direct_sum(&input).unwrap());
        prop_assert_eq!(cert.certified, cert.bound < 1 && cert.minimality_flags.is_empty());
    }

    #[test]
    fn kb_survives_reopening(ops in proptest::collection::vec((0usize..6, any::<bool>()), 1..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kb.jsonl");
        let keys: Vec<_> = (1..=6).map(|n| canonical_key(&wedgekit::fixtures::a_n(n).unwrap())).collect();
        let mut kb = KnowledgeBase::open(&path).unwrap();
        let mut model = std::collections::BTreeMap::new();
        for (k, ruled_out) in ops {
            let status = if ruled_out { Status::RuledOut } else { Status::NotRuledOut };
            let got = kb.store(keys[k].clone(), status, "proptest");
            match model.get(&k) {
                None => {
                    prop_assert_eq!(got.unwrap(), StoreOutcome::Inserted);
                    model.insert(k, status);
                }
                Some(&s) if s == status => prop_assert_eq!(got.unwrap(), StoreOutcome::AlreadyPresent),
                Some(_) => {
                    let conflict = matches!(got, Err(Error::VerdictConflict { .. }));
                    prop_assert!(conflict);
                }
            }
        }
        let reopened = KnowledgeBase::open(&path).unwrap();
        prop_assert_eq!(reopened.len(), model.len());
        for (k, s) in model {
            prop_assert_eq!(reopened.lookup(&keys[k]).unwrap().verdict, s);
        }
    }
}

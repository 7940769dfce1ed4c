mod common;

use heisenberg_homology::config_complex::{build_complex, CoefficientOracle};
use heisenberg_homology::heisenberg::{linearized_rep, phi_eval, BraidWord, GroupRingElement, HeisenbergElement, SurfaceParams};
use heisenberg_homology::homology::{bm_homology, Specialization};
use heisenberg_homology::mcg_action::{aut_from_twist, HeisenbergAutomorphism, TwistedMatrix, Twist};
use heisenberg_homology::ribbon_graph::{surface_invariants, Edge, HalfEdge, RelativeSubgraph, RibbonGraph};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn params() -> impl Strategy<Value = SurfaceParams> {
    prop_oneof![Just((0, 2)), Just((1, 1)), Just((1, 2)), Just((2, 1)), Just((2, 3))]
        .prop_map(|(g, m)| SurfaceParams::new(g, m).unwrap())
}

fn element(p: SurfaceParams) -> impl Strategy<Value = HeisenbergElement> {
    (-20i64..20, prop::collection::vec(-5i64..5, p.rank()))
        .prop_map(move |(k, x)| HeisenbergElement::from_ints(p, k, &x).unwrap())
}

fn ring_element(p: SurfaceParams) -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec((element(p), -3i64..4), 0..4).prop_map(move |terms| {
        let mut r = GroupRingElement::zero(p);
        for (h, c) in terms {
            r.add_term(h, &BigInt::from(c));
        }
        r
    })
}

fn twist() -> impl Strategy<Value = Twist> {
    prop_oneof![Just(Twist::Ta), Just(Twist::Tb), Just(Twist::TaInv), Just(Twist::TbInv)]
}

fn torus() -> SurfaceParams {
    SurfaceParams::new(1, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_law((p, a, b, c) in params().prop_flat_map(|p| (Just(p), element(p), element(p), element(p)))) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
        prop_assert_eq!(a.mul(&HeisenbergElement::identity(p)).unwrap(), a.clone());
        let u = HeisenbergElement::u(p);
        prop_assert_eq!(a.mul(&u).unwrap(), u.mul(&a).unwrap());
    }

    #[test]
    fn normal_form_round_trip((p, a) in params().prop_flat_map(|p| (Just(p), element(p)))) {
        let r = GroupRingElement::from_element(a.clone());
        prop_assert_eq!(GroupRingElement::parse(p, &r.to_string()).unwrap(), r);
        prop_assert_eq!(HeisenbergElement::from_normal_form(p, a.u_exponent(), a.x.clone()).unwrap(), a);
    }

    #[test]
    fn linearized_is_a_homomorphism((_p, a, b) in params().prop_flat_map(|p| (Just(p), element(p), element(p)))) {
        prop_assert_eq!(linearized_rep(&a.mul(&b).unwrap()), linearized_rep(&a).mul(&linearized_rep(&b)));
    }

    #[test]
    fn ring_distributes((a, b, c) in (ring_element(torus()), ring_element(torus()), ring_element(torus()))) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(left, a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().augmentation(), a.augmentation() * b.augmentation());
    }

    #[test]
    fn automorphisms_are_ring_automorphisms(t in twist(), a in ring_element(torus()), b in ring_element(torus())) {
        let tau = aut_from_twist(t);
        let lhs = tau.apply_ring(&a.mul(&b).unwrap()).unwrap();
        let rhs = tau.apply_ring(&a).unwrap().mul(&tau.apply_ring(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(tau.apply(&HeisenbergElement::u(torus())).unwrap(), HeisenbergElement::u(torus()));
    }

    #[test]
    fn automorphism_composition(s in twist(), t in twist(), h in element(torus())) {
        let (a, b) = (aut_from_twist(s), aut_from_twist(t));
        let ab: HeisenbergAutomorphism = a.compose(&b).unwrap();
        prop_assert_eq!(ab.apply(&h).unwrap(), a.apply(&b.apply(&h).unwrap()).unwrap());
    }

    #[test]
    fn phi_is_a_homomorphism(v in braid_word(), w in braid_word()) {
        let p = SurfaceParams::new(1, 2).unwrap();
        let joined = phi_eval(&v.concat(&w), p, 3).unwrap();
        prop_assert_eq!(joined, phi_eval(&v, p, 3).unwrap().mul(&phi_eval(&w, p, 3).unwrap()).unwrap());
    }
}

fn braid_word() -> impl Strategy<Value = BraidWord> {
    let letter = prop_oneof![
        Just("s1"), Just("s2"), Just("s1^-1"), Just("a1"), Just("b1^-1"), Just("c1"), Just("a1^-1")
    ];
    prop::collection::vec(letter, 0..8).prop_map(|ls| BraidWord::parse(&ls.join(" ")).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twisted_products_associate(x in twist(), y in twist(), z in twist()) {
        let m = |t| TwistedMatrix::of_twist(t).unwrap();
        let (a, b, c) = (m(x), m(y), m(z));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }
}

/// Same graph with edges listed in a different order and vertices renamed.
fn permuted(g: &RibbonGraph, seed: u64) -> RibbonGraph {
    let mut rng = common::rng(seed);
    let mut perm: Vec<usize> = (0..g.edge_count()).collect();
    perm.shuffle(&mut rng);
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let edges = perm.iter().map(|&old| {
        let e = g.edge(old);
        Edge { name: format!("f{}", inv[old]), tail: e.tail, head: e.head }
    }).collect();
    let orders = (0..g.vertex_count())
        .map(|v| g.order(v).iter().map(|h| HalfEdge { edge: inv[h.edge], end: h.end }).collect())
        .collect();
    let names = (0..g.vertex_count()).map(|v| format!("w{v}")).collect();
    RibbonGraph::new(names, edges, orders).unwrap()
}

#[test]
fn homology_ignores_edge_labelling() {
    let mut rng = common::rng(41);
    for i in 0..8 {
        let g = common::random_graph(&mut rng, 5);
        let h = permuted(&g, i);
        assert_eq!(surface_invariants(&g).unwrap(), surface_invariants(&h).unwrap());
        let a = bm_homology(&build_complex(&g, None, 2, CoefficientOracle::Trivial).unwrap(), &Specialization::TrivialInt).unwrap();
        let b = bm_homology(&build_complex(&h, None, 2, CoefficientOracle::Trivial).unwrap(), &Specialization::TrivialInt).unwrap();
        assert_eq!(a.degrees, b.degrees, "graph {i}");
    }
}

#[test]
fn subdivision_preserves_invariants_and_homology() {
    let mut rng = common::rng(42);
    for i in 0..10 {
        let g = common::random_graph(&mut rng, 4);
        let e = i % g.edge_count();
        let (s, _) = g.subdivide(e, &RelativeSubgraph::empty());
        assert_eq!(surface_invariants(&g).unwrap(), surface_invariants(&s).unwrap());
        for n in 2..=3 {
            let a = bm_homology(&build_complex(&g, None, n, CoefficientOracle::Trivial).unwrap(), &Specialization::TrivialInt).unwrap();
            let b = bm_homology(&build_complex(&s, None, n, CoefficientOracle::Trivial).unwrap(), &Specialization::TrivialInt).unwrap();
            assert_eq!(a.degrees, b.degrees, "graph {i}, n = {n}");
        }
    }
}

#[test]
fn text_format_round_trips() {
    let mut rng = common::rng(43);
    for _ in 0..20 {
        let g = common::random_graph(&mut rng, 6);
        let (back, rel) = RibbonGraph::parse(&g.to_text(&RelativeSubgraph::empty())).unwrap();
        assert_eq!(back, g);
        assert!(rel.is_empty());
    }
}

#![allow(dead_code)]

use heisenberg_homology::heisenberg::{HeisenbergElement, SurfaceParams};
use heisenberg_homology::ribbon_graph::{Edge, HalfEdge, RibbonGraph};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected ribbon graph with at most `max_edges` edges and random
/// cyclic orders; loops and multi-edges allowed.
pub fn random_graph(rng: &mut ChaCha8Rng, max_edges: usize) -> RibbonGraph {
    let nv = rng.gen_range(1..=3usize);
    let ne = rng.gen_range(nv.max(2) - 1..=max_edges.max(nv)).max(1);
    let mut edges = Vec::new();
    for v in 1..nv {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    while edges.len() < ne {
        edges.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    let mut orders = vec![Vec::new(); nv];
    for (i, &(t, h)) in edges.iter().enumerate() {
        orders[t].push(HalfEdge::tail(i));
        orders[h].push(HalfEdge::head(i));
    }
    for o in &mut orders {
        o.shuffle(rng);
    }
    let edges = edges.iter().enumerate().map(|(i, &(tail, head))| Edge { name: format!("e{i}"), tail, head }).collect();
    RibbonGraph::new((0..nv).map(|v| format!("v{v}")).collect(), edges, orders).expect("valid random graph")
}

pub fn random_element(rng: &mut ChaCha8Rng, params: SurfaceParams, bound: i64) -> HeisenbergElement {
    let x = (0..params.rank()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    HeisenbergElement::new(params, BigInt::from(rng.gen_range(-bound..=bound)), x).expect("sizes match")
}

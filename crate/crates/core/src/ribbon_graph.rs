//! Ribbon graphs, relative ribbon structures and their thickened surfaces.
//!
//! Half-edges are identified by `(edge, end)`; the tail half-edge of edge `e`
//! sits at the edge's origin and the head half-edge at its target. Cyclic
//! orders list half-edges counterclockwise.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum End {
    Tail,
    Head,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn tail(edge: usize) -> Self {
        HalfEdge { edge, end: End::Tail }
    }

    pub fn head(edge: usize) -> Self {
        HalfEdge { edge, end: End::Head }
    }

    pub fn opposite(self) -> Self {
        HalfEdge { edge: self.edge, end: if self.end == End::Tail { End::Head } else { End::Tail } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub name: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite graph with a counterclockwise cyclic order of half-edges at each
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RibbonGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    orders: Vec<Vec<HalfEdge>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Interval,
    Circle,
}

/// One component of the distinguished subgraph `A`: edges traversed in their
/// own direction, consecutive edges sharing head/tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeComponent {
    pub kind: ComponentKind,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelativeSubgraph {
    pub components: Vec<RelativeComponent>,
}

impl RelativeSubgraph {
    pub fn empty() -> Self {
        RelativeSubgraph::default()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.components.iter().any(|c| c.edges.contains(&e))
    }

    /// Vertices touched by `A`.
    pub fn vertices(&self, graph: &RibbonGraph) -> Vec<usize> {
        let mut vs: Vec<usize> = Vec::new();
        for c in &self.components {
            for &e in &c.edges {
                for v in [graph.edges[e].tail, graph.edges[e].head] {
                    if !vs.contains(&v) {
                        vs.push(v);
                    }
                }
            }
        }
        vs.sort_unstable();
        vs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub genus: usize,
    pub boundary_components: usize,
    pub euler_characteristic: i64,
}

/// Fundamental cycles of a deterministic spanning tree and their
/// intersection matrix in the thickened surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Basis {
    pub tree_edges: Vec<usize>,
    /// Closed walks `(edge, forward)`; cycle `i` is closed by `cycle_edges[i]`.
    pub cycles: Vec<Vec<(usize, bool)>>,
    pub cycle_edges: Vec<usize>,
    pub intersection: Vec<Vec<i64>>,
}

impl RibbonGraph {
    /// Build and validate a ribbon graph.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, orders: Vec<Vec<HalfEdge>>) -> Result<Self> {
        let g = RibbonGraph { vertices, edges, orders };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.orders.len() != self.vertices.len() {
            return Err(Error::MalformedGraph("one cyclic order per vertex required".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= self.vertices.len() || e.head >= self.vertices.len() {
                return Err(Error::MalformedGraph(format!("edge {} has an unknown endpoint", e.name)));
            }
            for h in [HalfEdge::tail(i), HalfEdge::head(i)] {
                let v = self.vertex_of(h);
                let count = self.orders[v].iter().filter(|&&x| x == h).count();
                let elsewhere = self.orders.iter().enumerate().any(|(w, o)| w != v && o.contains(&h));
                if count != 1 || elsewhere {
                    return Err(Error::MalformedGraph(format!(
                        "half-edge {} must appear exactly once, in the order of vertex {}",
                        self.half_edge_name(h),
                        self.vertices[v]
                    )));
                }
            }
        }
        for (v, o) in self.orders.iter().enumerate() {
            for h in o {
                if h.edge >= self.edges.len() || self.vertex_of(*h) != v {
                    return Err(Error::MalformedGraph(format!(
                        "vertex {} lists a half-edge that does not end there",
                        self.vertices[v]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn order(&self, v: usize) -> &[HalfEdge] {
        &self.orders[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        match h.end {
            End::Tail => self.edges[h.edge].tail,
            End::Head => self.edges[h.edge].head,
        }
    }

    pub fn half_edge_name(&self, h: HalfEdge) -> String {
        format!("{}{}", self.edges[h.edge].name, if h.end == End::Tail { '+' } else { '-' })
    }

    fn position(&self, h: HalfEdge) -> usize {
        let v = self.vertex_of(h);
        self.orders[v].iter().position(|&x| x == h).expect("validated")
    }

    /// Successor in the cyclic order at the half-edge's vertex.
    pub fn next_in_order(&self, h: HalfEdge) -> HalfEdge {
        let o = &self.orders[self.vertex_of(h)];
        o[(self.position(h) + 1) % o.len()]
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for h in &self.orders[v] {
                let w = self.vertex_of(h.opposite());
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Insert a degree-two vertex in the middle of edge `e`. The first half
    /// keeps the edge's index; the second half is appended.
    pub fn subdivide(&self, e: usize, rel: &RelativeSubgraph) -> (RibbonGraph, RelativeSubgraph) {
        let mut g = self.clone();
        let w = g.vertices.len();
        let mut name = format!("{}_s", g.vertices.len());
        while g.vertices.contains(&name) {
            name.push('_');
        }
        g.vertices.push(name);
        let new_e = g.edges.len();
        let old_head = g.edges[e].head;
        let mut ename = format!("{}'", g.edges[e].name);
        while g.edges.iter().any(|x| x.name == ename) {
            ename.push('\'');
        }
        g.edges.push(Edge { name: ename, tail: w, head: old_head });
        g.edges[e].head = w;
        for h in g.orders[old_head].iter_mut() {
            if *h == HalfEdge::head(e) {
                *h = HalfEdge::head(new_e);
            }
        }
        g.orders.push(vec![HalfEdge::head(e), HalfEdge::tail(new_e)]);
        let mut r = rel.clone();
        for c in &mut r.components {
            if let Some(p) = c.edges.iter().position(|&x| x == e) {
                c.edges.insert(p + 1, new_e);
            }
        }
        (g, r)
    }

    /// Render in the interchange format.
    pub fn to_text(&self, rel: &RelativeSubgraph) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "vertex {v}");
        }
        for e in &self.edges {
            let _ = writeln!(s, "edge {} {} {}", e.name, self.vertices[e.tail], self.vertices[e.head]);
        }
        for (v, o) in self.orders.iter().enumerate() {
            let hs: Vec<String> = o.iter().map(|&h| self.half_edge_name(h)).collect();
            let _ = writeln!(s, "order {} {}", self.vertices[v], hs.join(" "));
        }
        for c in &rel.components {
            let kind = if c.kind == ComponentKind::Interval { "interval" } else { "circle" };
            let es: Vec<&str> = c.edges.iter().map(|&e| self.edges[e].name.as_str()).collect();
            let _ = writeln!(s, "relative {kind} {}", es.join(" "));
        }
        s
    }

    /// Parse the interchange format (`vertex`, `edge`, `order`, `relative`
    /// lines; `#` starts a comment). Vertices of degree at most two may omit
    /// their `order` line.
    pub fn parse(text: &str) -> Result<(RibbonGraph, RelativeSubgraph)> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut vertices: Vec<String> = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut order_lines: Vec<(usize, usize, Vec<String>)> = Vec::new();
        let mut rel_lines: Vec<(usize, ComponentKind, Vec<String>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "vertex" => {
                    if toks.len() != 2 {
                        return Err(perr(ln, "expected `vertex <id>`".into()));
                    }
                    if vertices.iter().any(|v| v == toks[1]) {
                        return Err(perr(ln, format!("duplicate vertex {}", toks[1])));
                    }
                    vertices.push(toks[1].to_string());
                }
                "edge" => {
                    if toks.len() != 4 {
                        return Err(perr(ln, "expected `edge <id> <from> <to>`".into()));
                    }
                    if edges.iter().any(|e| e.name == toks[1]) {
                        return Err(perr(ln, format!("duplicate edge {}", toks[1])));
                    }
                    if toks[1].ends_with(['+', '-']) {
                        return Err(perr(ln, "edge ids may not end in + or -".into()));
                    }
                    let find = |n: &str| {
                        vertices.iter().position(|v| v == n).ok_or_else(|| perr(ln, format!("unknown vertex {n}")))
                    };
                    let (t, h) = (find(toks[2])?, find(toks[3])?);
                    edges.push(Edge { name: toks[1].to_string(), tail: t, head: h });
                }
                "order" => {
                    if toks.len() < 2 {
                        return Err(perr(ln, "expected `order <vertex> <half-edges...>`".into()));
                    }
                    let v = vertices
                        .iter()
                        .position(|v| v == toks[1])
                        .ok_or_else(|| perr(ln, format!("unknown vertex {}", toks[1])))?;
                    if order_lines.iter().any(|(_, w, _)| *w == v) {
                        return Err(perr(ln, format!("second order line for vertex {}", toks[1])));
                    }
                    order_lines.push((ln, v, toks[2..].iter().map(|s| s.to_string()).collect()));
                }
                "relative" => {
                    if toks.len() < 3 {
                        return Err(perr(ln, "expected `relative interval|circle <edges...>`".into()));
                    }
                    let kind = match toks[1] {
                        "interval" => ComponentKind::Interval,
                        "circle" => ComponentKind::Circle,
                        k => return Err(perr(ln, format!("unknown component type {k}"))),
                    };
                    rel_lines.push((ln, kind, toks[2..].iter().map(|s| s.to_string()).collect()));
                }
                other => return Err(perr(ln, format!("unknown declaration `{other}`"))),
            }
        }
        if vertices.is_empty() {
            return Err(perr(0, "no vertices".into()));
        }
        let mut orders: Vec<Option<Vec<HalfEdge>>> = vec![None; vertices.len()];
        for (ln, v, hs) in order_lines {
            let mut o = Vec::new();
            for h in hs {
                let (name, end) = if let Some(n) = h.strip_suffix('+') {
                    (n, End::Tail)
                } else if let Some(n) = h.strip_suffix('-') {
                    (n, End::Head)
                } else {
                    return Err(perr(ln, format!("half-edge `{h}` must end in + (tail) or - (head)")));
                };
                let e = edges
                    .iter()
                    .position(|x| x.name == name)
                    .ok_or_else(|| perr(ln, format!("unknown edge {name}")))?;
                let he = HalfEdge { edge: e, end };
                let at = if end == End::Tail { edges[e].tail } else { edges[e].head };
                if at != v {
                    return Err(perr(ln, format!("half-edge {h} does not end at vertex {}", vertices[v])));
                }
                if o.contains(&he) {
                    return Err(perr(ln, format!("half-edge {h} listed twice")));
                }
                o.push(he);
            }
            orders[v] = Some(o);
        }
        let mut final_orders = Vec::new();
        for (v, o) in orders.into_iter().enumerate() {
            let incident: Vec<HalfEdge> = edges
                .iter()
                .enumerate()
                .flat_map(|(i, e)| {
                    let mut hs = Vec::new();
                    if e.tail == v {
                        hs.push(HalfEdge::tail(i));
                    }
                    if e.head == v {
                        hs.push(HalfEdge::head(i));
                    }
                    hs
                })
                .collect();
            let o = match o {
                Some(o) => o,
                None if incident.len() <= 2 => incident.clone(),
                None => Vec::new(),
            };
            for h in &incident {
                if !o.contains(h) {
                    let nm = format!("{}{}", edges[h.edge].name, if h.end == End::Tail { '+' } else { '-' });
                    return Err(perr(0, format!("half-edge {nm} is missing from the cyclic order of {}", vertices[v])));
                }
            }
            final_orders.push(o);
        }
        let graph = RibbonGraph::new(vertices, edges, final_orders)?;
        let mut rel = RelativeSubgraph::empty();
        for (ln, kind, es) in rel_lines {
            let mut ids = Vec::new();
            for e in es {
                ids.push(graph.edge_index(&e).ok_or_else(|| perr(ln, format!("unknown edge {e}")))?);
            }
            rel.components.push(RelativeComponent { kind, edges: ids });
        }
        if !rel.is_empty() {
            validate_relative(&graph, &rel)?;
        }
        Ok((graph, rel))
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&RelativeSubgraph::empty()))
    }
}

/// Boundary cycles of the thickening: orbits of `h ↦ next(opposite(h))`.
/// An isolated vertex contributes one empty face.
pub fn trace_faces(graph: &RibbonGraph) -> Vec<Vec<HalfEdge>> {
    let mut seen: BTreeMap<HalfEdge, bool> = BTreeMap::new();
    let mut faces = Vec::new();
    for e in 0..graph.edge_count() {
        for h0 in [HalfEdge::tail(e), HalfEdge::head(e)] {
            if seen.contains_key(&h0) {
                continue;
            }
            let mut face = Vec::new();
            let mut h = h0;
            loop {
                seen.insert(h, true);
                face.push(h);
                h = graph.next_in_order(h.opposite());
                if h == h0 {
                    break;
                }
            }
            faces.push(face);
        }
    }
    for v in 0..graph.vertex_count() {
        if graph.order(v).is_empty() {
            faces.push(Vec::new());
        }
    }
    faces
}

pub fn surface_invariants(graph: &RibbonGraph) -> Result<SurfaceInvariants> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let chi = graph.vertex_count() as i64 - graph.edge_count() as i64;
    let m = trace_faces(graph).len() as i64;
    let twice_g = 2 - chi - m;
    if twice_g < 0 || twice_g % 2 != 0 {
        return Err(Error::MalformedGraph("face count inconsistent with an orientable thickening".into()));
    }
    Ok(SurfaceInvariants { genus: (twice_g / 2) as usize, boundary_components: m as usize, euler_characteristic: chi })
}

/// Breadth-first spanning tree from vertex 0, scanning incident edges in
/// index order; returns tree edges and, per vertex, the edge to its parent.
fn spanning_tree(graph: &RibbonGraph) -> (Vec<usize>, Vec<Option<(usize, bool)>>) {
    let n = graph.vertex_count();
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree = Vec::new();
    let mut q = VecDeque::new();
    if n == 0 {
        return (tree, parent);
    }
    seen[0] = true;
    q.push_back(0);
    while let Some(v) = q.pop_front() {
        for (i, e) in graph.edges().iter().enumerate() {
            let (w, fwd) = if e.tail == v {
                (e.head, true)
            } else if e.head == v {
                (e.tail, false)
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                // stepping from w back to v along the edge
                parent[w] = Some((i, !fwd));
                tree.push(i);
                q.push_back(w);
            }
        }
    }
    tree.sort_unstable();
    (tree, parent)
}

/// Tree path from `v` up to the root as `(edge, forward)` steps.
fn path_to_root(graph: &RibbonGraph, parent: &[Option<(usize, bool)>], mut v: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    while let Some((e, fwd)) = parent[v] {
        out.push((e, fwd));
        v = if fwd { graph.edge(e).head } else { graph.edge(e).tail };
    }
    out
}

fn fundamental_cycle(graph: &RibbonGraph, parent: &[Option<(usize, bool)>], e: usize) -> Vec<(usize, bool)> {
    let ed = graph.edge(e);
    // e from tail to head, then head → root, then root → tail
    let up_head = path_to_root(graph, parent, ed.head);
    let up_tail = path_to_root(graph, parent, ed.tail);
    // strip the common suffix (shared part near the root)
    let (mut a, mut b) = (up_head.len(), up_tail.len());
    while a > 0 && b > 0 && up_head[a - 1] == up_tail[b - 1] {
        a -= 1;
        b -= 1;
    }
    let mut cyc = vec![(e, true)];
    cyc.extend_from_slice(&up_head[..a]);
    cyc.extend(up_tail[..b].iter().rev().map(|&(x, f)| (x, !f)));
    cyc
}

/// Vertex passages of a closed walk: `(vertex, incoming half-edge, outgoing half-edge)`.
fn passages(graph: &RibbonGraph, walk: &[(usize, bool)]) -> Vec<(usize, HalfEdge, HalfEdge)> {
    let k = walk.len();
    (0..k)
        .map(|i| {
            let (e, f) = walk[i];
            let (e2, f2) = walk[(i + 1) % k];
            let hin = if f { HalfEdge::head(e) } else { HalfEdge::tail(e) };
            let hout = if f2 { HalfEdge::tail(e2) } else { HalfEdge::head(e2) };
            (graph.vertex_of(hin), hin, hout)
        })
        .collect()
}

/// Algebraic intersection number of two closed walks in the thickening.
///
/// The first walk is pushed to its left inside every band; at a vertex its
/// chord runs between half-integer positions of the cyclic order while the
/// second walk's chord joins integer positions, so crossings are counted
/// without degeneracies.
pub fn walk_intersection(graph: &RibbonGraph, x: &[(usize, bool)], y: &[(usize, bool)]) -> i64 {
    let px = passages(graph, x);
    let py = passages(graph, y);
    let mut total = 0i64;
    for &(v, xin, xout) in &px {
        let d = 2 * graph.order(v).len() as i64;
        let pos = |h: HalfEdge| 2 * graph.position(h) as i64;
        let p = (pos(xin) - 1).rem_euclid(d);
        let q = (pos(xout) + 1).rem_euclid(d);
        let in_arc = |z: i64| {
            // strictly inside the counterclockwise arc p → q
            let len = (q - p).rem_euclid(d);
            let off = (z - p).rem_euclid(d);
            off > 0 && off < len
        };
        for &(w, yin, yout) in &py {
            if w != v {
                continue;
            }
            let (r, s) = (pos(yin), pos(yout));
            match (in_arc(r), in_arc(s)) {
                (true, false) => total += 1,
                (false, true) => total -= 1,
                _ => {}
            }
        }
    }
    total
}

pub fn h1_basis(graph: &RibbonGraph) -> Result<H1Basis> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let (tree, parent) = spanning_tree(graph);
    let mut cycles = Vec::new();
    let mut cycle_edges = Vec::new();
    for e in 0..graph.edge_count() {
        if tree.binary_search(&e).is_err() {
            cycles.push(fundamental_cycle(graph, &parent, e));
            cycle_edges.push(e);
        }
    }
    let n = cycles.len();
    let mut j = vec![vec![0i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                j[a][b] = walk_intersection(graph, &cycles[a], &cycles[b]);
            }
        }
    }
    Ok(H1Basis { tree_edges: tree, cycles, cycle_edges, intersection: j })
}

/// Vertex and edge indices of [`standard_model`].
pub const V0: usize = 0;
pub const V1: usize = 1;
pub const A_EDGE: usize = 0;

/// The relative model of `Σ_{g,m}` with an interval `A` in its boundary:
/// vertices `v0, v1`, the interval `A: v0 → v1`, and loop edges
/// `a_1..a_g, b_1..b_g, c_1..c_{m-1}` from `v1` to `v0` (edge `i+1` carries
/// the `i`-th homology class).
pub fn standard_model(g: usize, m: usize) -> Result<(RibbonGraph, RelativeSubgraph)> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let n = 2 * g + m - 1;
    let vertices = vec!["v0".to_string(), "v1".to_string()];
    let mut edges = vec![Edge { name: "A".into(), tail: V0, head: V1 }];
    let name = |i: usize| {
        if i < g {
            format!("a{}", i + 1)
        } else if i < 2 * g {
            format!("b{}", i - g + 1)
        } else {
            format!("c{}", i - 2 * g + 1)
        }
    };
    for i in 0..n {
        edges.push(Edge { name: name(i), tail: V1, head: V0 });
    }
    let slots = band_slots(g, m);
    // at v1, loop edges leave counterclockwise from the highest entry slot;
    // at v0 they arrive counterclockwise from the highest exit slot.
    let mut at_v1: Vec<usize> = (0..n).collect();
    at_v1.sort_by(|&x, &y| slots[y].0.cmp(&slots[x].0));
    let mut at_v0: Vec<usize> = (0..n).collect();
    at_v0.sort_by(|&x, &y| slots[y].1.cmp(&slots[x].1));
    let mut o1: Vec<HalfEdge> = at_v1.into_iter().map(|i| HalfEdge::tail(i + 1)).collect();
    o1.push(HalfEdge::head(A_EDGE));
    let mut o0 = vec![HalfEdge::tail(A_EDGE)];
    o0.extend(at_v0.into_iter().map(|i| HalfEdge::head(i + 1)));
    let graph = RibbonGraph::new(vertices, edges, vec![o0, o1])?;
    let rel = RelativeSubgraph {
        components: vec![RelativeComponent { kind: ComponentKind::Interval, edges: vec![A_EDGE] }],
    };
    Ok((graph, rel))
}

/// Heights (entry, exit) on the left side of the planar model where the band
/// of loop edge `i` is attached, counted in slots from the bottom. Entries sit
/// above exits; the two bands of a handle interleave and every other pair of
/// bands is nested.
pub(crate) fn band_slots(g: usize, m: usize) -> Vec<(usize, usize)> {
    let n = 2 * g + m - 1;
    // top-to-bottom entry order: a1 b1 a2 b2 ... c1 .. c_{m-1}
    let mut entry_order = Vec::new();
    for r in 0..g {
        entry_order.push(r);
        entry_order.push(g + r);
    }
    entry_order.extend(2 * g..n);
    // top-to-bottom exit order: c_{m-1} .. c1, a_g b_g, ..., a1 b1
    let mut exit_order: Vec<usize> = (2 * g..n).rev().collect();
    for r in (0..g).rev() {
        exit_order.push(r);
        exit_order.push(g + r);
    }
    let mut slots = vec![(0, 0); n];
    for (k, &i) in exit_order.iter().enumerate() {
        slots[i].1 = n - 1 - k;
    }
    for (k, &i) in entry_order.iter().enumerate() {
        slots[i].0 = 2 * n - 1 - k;
    }
    slots
}

/// Check that `rel` is a relative ribbon structure: components are simple oriented
/// paths/cycles, pairwise disjoint, and at every vertex interior to `A` the
/// outgoing `A` half-edge is immediately followed by the incoming one.
pub fn validate_relative(graph: &RibbonGraph, rel: &RelativeSubgraph) -> Result<()> {
    let mut used_edges: Vec<usize> = Vec::new();
    let mut used_vertices: Vec<usize> = Vec::new();
    for (ci, c) in rel.components.iter().enumerate() {
        if c.edges.is_empty() {
            return Err(Error::InvalidRelative(format!("component {ci} has no edges")));
        }
        let mut verts = Vec::new();
        for (k, &e) in c.edges.iter().enumerate() {
            if e >= graph.edge_count() {
                return Err(Error::InvalidRelative(format!("component {ci}: unknown edge")));
            }
            if used_edges.contains(&e) {
                return Err(Error::InvalidRelative(format!("edge {} used twice", graph.edge(e).name)));
            }
            used_edges.push(e);
            if k + 1 < c.edges.len() && graph.edge(e).head != graph.edge(c.edges[k + 1]).tail {
                return Err(Error::InvalidRelative(format!(
                    "edges {} and {} do not chain",
                    graph.edge(e).name,
                    graph.edge(c.edges[k + 1]).name
                )));
            }
            verts.push(graph.edge(e).tail);
        }
        let last = graph.edge(*c.edges.last().unwrap()).head;
        match c.kind {
            ComponentKind::Circle => {
                if last != graph.edge(c.edges[0]).tail {
                    return Err(Error::InvalidRelative(format!("component {ci} is not closed")));
                }
            }
            ComponentKind::Interval => verts.push(last),
        }
        let mut sorted = verts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != verts.len() {
            return Err(Error::InvalidRelative(format!("component {ci} is not simple")));
        }
        for &v in &sorted {
            if used_vertices.contains(&v) {
                return Err(Error::InvalidRelative(format!(
                    "vertex {} lies on two components",
                    graph.vertex_name(v)
                )));
            }
        }
        used_vertices.extend(sorted);
        // compatibility at vertices with both an incoming and an outgoing A-edge
        let k = c.edges.len();
        let interior: Vec<(usize, usize)> = match c.kind {
            ComponentKind::Circle => (0..k).map(|i| (c.edges[i], c.edges[(i + 1) % k])).collect(),
            ComponentKind::Interval => (0..k.saturating_sub(1)).map(|i| (c.edges[i], c.edges[i + 1])).collect(),
        };
        for (ein, eout) in interior {
            let hin = HalfEdge::head(ein);
            let hout = HalfEdge::tail(eout);
            if graph.next_in_order(hout) != hin {
                return Err(Error::InvalidRelative(format!(
                    "at vertex {} the cyclic order must run from incoming {} to outgoing {}",
                    graph.vertex_name(graph.vertex_of(hin)),
                    graph.half_edge_name(hin),
                    graph.half_edge_name(hout)
                )));
            }
        }
    }
    Ok(())
}

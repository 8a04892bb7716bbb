//! Certificates rebuilt by replaying a reduction trace backwards.
//!
//! A run that ends at K4 explains, step by step, how the input collapses;
//! read in reverse, the same steps explain how to grow a Hamiltonian
//! cycle, a Halin tree/cycle decomposition, or a planar rotation system
//! from the corresponding certificate on K4. Every function here is linear
//! in the trace apart from hash-map traffic.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::engine::{self, HookSet, ReductionEvent};
use crate::graph::{vid, Edge, Graph, VertexId};
use crate::recognize;

/// A combinatorial embedding: for each vertex, its neighbors in cyclic
/// (say, clockwise) order. Faces follow by the usual trace rule — entering
/// `v` from `u`, leave along the neighbor cyclically before `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RotationSystem {
    order: IndexMap<VertexId, Vec<VertexId>>,
}

impl RotationSystem {
    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.order.keys()
    }

    /// The cyclic neighbor order around `v`. Panics if `v` is unknown.
    pub fn order(&self, v: &VertexId) -> &[VertexId] {
        self.order
            .get(v)
            .unwrap_or_else(|| panic!("no rotation recorded for {v}"))
    }
}

impl fmt::Display for RotationSystem {
    /// One `rotation v: n1 n2 …` line per vertex, sorted by vertex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&VertexId> = self.order.keys().collect();
        keys.sort();
        for v in keys {
            write!(f, "rotation {v}:")?;
            for u in &self.order[v] {
                write!(f, " {u}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One face of an embedding, as the closed walk of vertices along its
/// boundary (the first vertex is not repeated at the end).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    boundary: Vec<VertexId>,
}

impl Face {
    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }
}

fn cyclic_pred<'a>(order: &'a [VertexId], x: &VertexId) -> &'a VertexId {
    let i = order
        .iter()
        .position(|y| y == x)
        .unwrap_or_else(|| panic!("{x} missing from rotation"));
    &order[(i + order.len() - 1) % order.len()]
}

fn replace_entry(order: &mut [VertexId], old: &VertexId, new: &VertexId) {
    let i = order
        .iter()
        .position(|y| y == old)
        .unwrap_or_else(|| panic!("{old} missing from rotation"));
    order[i] = new.clone();
}

fn insert_after(order: &mut Vec<VertexId>, anchor: &VertexId, new: &VertexId) {
    let i = order
        .iter()
        .position(|y| y == anchor)
        .unwrap_or_else(|| panic!("{anchor} missing from rotation"));
    order.insert(i + 1, new.clone());
}

/// Walks out every face of the embedding. Each directed edge lies on
/// exactly one face, so the boundaries returned cover each undirected edge
/// twice in total.
pub fn trace_faces(rot: &RotationSystem) -> Vec<Face> {
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut faces = Vec::new();
    for (v, order) in &rot.order {
        for u in order {
            if seen.contains(&(v.clone(), u.clone())) {
                continue;
            }
            let mut boundary = Vec::new();
            let (mut a, mut b) = (v.clone(), u.clone());
            loop {
                seen.insert((a.clone(), b.clone()));
                boundary.push(a.clone());
                let c = cyclic_pred(rot.order(&b), &a).clone();
                (a, b) = (b, c);
                if a == *v && b == *u {
                    break;
                }
            }
            faces.push(Face { boundary });
        }
    }
    faces
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DualError {
    #[error("edge {edge} borders the face {face} on both sides")]
    SelfAdjacency { edge: Edge, face: VertexId },
    #[error("faces {a} and {b} share more than one edge")]
    MultiAdjacency { a: VertexId, b: VertexId },
}

/// The dual graph of the embedding: one vertex `f0, f1, …` per traced
/// face, one edge per pair of faces meeting across an edge. Fails if the
/// dual would need a loop or a parallel edge, which cannot happen for
/// embeddings of 3-connected graphs.
pub fn dual_graph(rot: &RotationSystem) -> Result<Graph, DualError> {
    let faces = trace_faces(rot);
    let mut side: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for (idx, face) in faces.iter().enumerate() {
        let b = face.boundary();
        for i in 0..b.len() {
            side.insert((b[i].clone(), b[(i + 1) % b.len()].clone()), idx);
        }
    }
    let name = |i: usize| vid(&format!("f{i}"));
    let mut dual = Graph::new();
    for i in 0..faces.len() {
        dual.add_vertex(name(i));
    }
    for (idx, face) in faces.iter().enumerate() {
        let b = face.boundary();
        for i in 0..b.len() {
            let (u, v) = (&b[i], &b[(i + 1) % b.len()]);
            let other = side[&(v.clone(), u.clone())];
            if other == idx {
                return Err(DualError::SelfAdjacency {
                    edge: Edge::new(u.clone(), v.clone()),
                    face: name(idx),
                });
            }
            if other < idx {
                continue; // handled from the other face
            }
            let (fa, fb) = (name(idx), name(other));
            if dual.has_edge(&fa, &fb) {
                return Err(DualError::MultiAdjacency { a: fa, b: fb });
            }
            dual.add_edge(fa, fb).expect("distinct face names");
        }
    }
    Ok(dual)
}

/// The reference embedding of K4: 4 triangular faces, fixed by sorting the
/// vertices. Everything grown by reverse replay starts from this.
pub(crate) fn k4_rotation(g: &Graph) -> RotationSystem {
    debug_assert!(g.is_k4(), "base rotation is only defined on K4");
    let mut v: Vec<VertexId> = g.vertices().cloned().collect();
    v.sort();
    let mut order = IndexMap::new();
    order.insert(v[0].clone(), vec![v[1].clone(), v[2].clone(), v[3].clone()]);
    order.insert(v[1].clone(), vec![v[2].clone(), v[0].clone(), v[3].clone()]);
    order.insert(v[2].clone(), vec![v[3].clone(), v[0].clone(), v[1].clone()]);
    order.insert(v[3].clone(), vec![v[1].clone(), v[0].clone(), v[2].clone()]);
    RotationSystem { order }
}

/// Undoes a triangle contraction inside an embedding: the supervertex's
/// three rotation slots open up into the triangle, each replacement taking
/// over its outside neighbor's slot. `triangle[i]` must be the vertex
/// matched with `outside[i]`.
pub(crate) fn expand_rotation(
    rot: &mut RotationSystem,
    triangle: &[VertexId; 3],
    outside: &[VertexId; 3],
    supervertex: &VertexId,
) {
    let xs = rot
        .order
        .swap_remove(supervertex)
        .unwrap_or_else(|| panic!("no rotation recorded for {supervertex}"));
    assert_eq!(xs.len(), 3, "a supervertex has exactly three neighbors");
    // triangle members in the order their outside partners appear around
    // the supervertex
    let ms: Vec<&VertexId> = xs
        .iter()
        .map(|x| {
            let i = outside
                .iter()
                .position(|o| o == x)
                .expect("rotation neighbors match the recorded outside set");
            &triangle[i]
        })
        .collect();
    for (x, m) in xs.iter().zip(&ms) {
        replace_entry(rot.order.get_mut(x).expect("neighbor is embedded"), supervertex, m);
    }
    for j in 0..3 {
        rot.order.insert(
            ms[j].clone(),
            vec![xs[j].clone(), ms[(j + 1) % 3].clone(), ms[(j + 2) % 3].clone()],
        );
    }
}

/// Which way round the triangle face `p, r, apex` is traced when a path
/// shortening is undone: `PR` if it contains the directed edge p→r, `RP`
/// if it contains r→p.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum TriangleSense {
    PR,
    RP,
}

/// Undoes a path shortening inside an embedding: the middle vertex splits
/// the edge between `path[0]` and `path[2]` again and hooks onto the apex
/// inside the triangle face they span.
pub(crate) fn subdivide_rotation(
    rot: &mut RotationSystem,
    path: &[VertexId; 3],
    apex: &VertexId,
) -> TriangleSense {
    let [p, q, r] = path;
    let forward = cyclic_pred(rot.order(r), p) == apex; // face p -> r -> apex
    let backward = cyclic_pred(rot.order(p), r) == apex; // face r -> p -> apex
    assert!(
        forward ^ backward,
        "the apex triangle must be a face on exactly one side of the split edge"
    );
    replace_entry(rot.order.get_mut(p).expect("endpoint is embedded"), r, q);
    replace_entry(rot.order.get_mut(r).expect("endpoint is embedded"), p, q);
    let s_order = rot.order.get_mut(apex).expect("apex is embedded");
    if forward {
        insert_after(s_order, p, q);
        rot.order.insert(q.clone(), vec![p.clone(), r.clone(), apex.clone()]);
        TriangleSense::PR
    } else {
        insert_after(s_order, r, q);
        rot.order.insert(q.clone(), vec![r.clone(), p.clone(), apex.clone()]);
        TriangleSense::RP
    }
}

/// A planar rotation system for `g`, or `None` if `g` is not D3-reducible.
/// The embedding is rebuilt by replaying the reduction backwards from the
/// fixed K4 embedding.
pub fn planar_embedding(g: &Graph) -> Option<RotationSystem> {
    let run = engine::reduce(g, HookSet::permissive(Graph::is_k4));
    if !run.verdict {
        return None;
    }
    let mut rot = k4_rotation(run.trace.final_graph());
    for ev in run.trace.events().iter().rev() {
        match ev {
            ReductionEvent::ContractTriangle { triangle, outside, supervertex } => {
                expand_rotation(&mut rot, triangle, outside, supervertex);
            }
            ReductionEvent::ShortenPath { path, apex } => {
                subdivide_rotation(&mut rot, path, apex);
            }
        }
    }
    debug_assert!(rotation_matches(&rot, g), "embedding must cover the graph");
    Some(rot)
}

fn rotation_matches(rot: &RotationSystem, g: &Graph) -> bool {
    g.vertex_count() == rot.vertex_count()
        && g.vertices().all(|v| {
            let around: IndexSet<&VertexId> = rot.order(v).iter().collect();
            around.len() == g.degree(v) && g.neighbors(v).all(|u| around.contains(u))
        })
}

/// A Hamiltonian cycle, stored from its smallest vertex in the direction
/// of its smaller neighbor so equal cycles print identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamCycle {
    order: Vec<VertexId>,
}

impl HamCycle {
    pub fn vertices(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

impl fmt::Display for HamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle:")?;
        for v in &self.order {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// A Hamiltonian cycle of `g`, or `None` if `g` is not D3-reducible.
///
/// Replay keeps one invariant: the kept cycle always passes through every
/// current vertex. Undoing a contraction reroutes the cycle through all
/// three triangle members via their matched outside neighbors; undoing a
/// shortening slots the middle vertex into the reinstated edge if the
/// cycle used it, and otherwise into the cycle edge it provably shares
/// with the apex.
pub fn hamiltonian_cycle(g: &Graph) -> Option<HamCycle> {
    let run = engine::reduce(g, HookSet::permissive(Graph::is_k4));
    if !run.verdict {
        return None;
    }
    let mut base: Vec<VertexId> = run.trace.final_graph().vertices().cloned().collect();
    base.sort();
    let mut next: HashMap<VertexId, VertexId> = HashMap::new();
    let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
    let link = |next: &mut HashMap<VertexId, VertexId>,
                    prev: &mut HashMap<VertexId, VertexId>,
                    a: &VertexId,
                    b: &VertexId| {
        next.insert(a.clone(), b.clone());
        prev.insert(b.clone(), a.clone());
    };
    for i in 0..4 {
        link(&mut next, &mut prev, &base[i], &base[(i + 1) % 4]);
    }

    for ev in run.trace.events().iter().rev() {
        match ev {
            ReductionEvent::ContractTriangle { triangle, outside, supervertex } => {
                let x = prev.remove(supervertex).expect("cycle visits the supervertex");
                let y = next.remove(supervertex).expect("cycle visits the supervertex");
                let member = |of: &VertexId| -> &VertexId {
                    let i = outside
                        .iter()
                        .position(|o| o == of)
                        .expect("cycle enters the supervertex from outside");
                    &triangle[i]
                };
                let (u, v) = (member(&x), member(&y));
                let w = triangle
                    .iter()
                    .find(|m| *m != u && *m != v)
                    .expect("three distinct triangle members");
                // x -> u -> w -> v -> y
                link(&mut next, &mut prev, &x, u);
                link(&mut next, &mut prev, u, w);
                link(&mut next, &mut prev, w, v);
                link(&mut next, &mut prev, v, &y);
            }
            ReductionEvent::ShortenPath { path, apex } => {
                let [p, q, r] = path;
                // Prefer the reinstated edge; failing that, the cycle must
                // use p–apex, since p has only three edges and two of them
                // carry the cycle.
                let (a, b) = if next[p] == *r {
                    (p, r)
                } else if next[r] == *p {
                    (r, p)
                } else if next[p] == *apex {
                    (p, apex)
                } else {
                    assert_eq!(
                        next[apex], *p,
                        "one of the middle vertex's future edges lies on the cycle"
                    );
                    (apex, p)
                };
                link(&mut next, &mut prev, a, q);
                link(&mut next, &mut prev, q, b);
            }
        }
    }

    let start = g.vertices().min().expect("graph is nonempty").clone();
    let second = if next[&start] <= prev[&start] { &next } else { &prev };
    let mut order = vec![start.clone()];
    let mut cur = second[&start].clone();
    while cur != start {
        order.push(cur.clone());
        assert!(order.len() <= g.vertex_count(), "replayed cycle must close");
        cur = second[&cur].clone();
    }
    assert_eq!(order.len(), g.vertex_count(), "replayed cycle must span");
    debug_assert!(
        (0..order.len()).all(|i| g.has_edge(&order[i], &order[(i + 1) % order.len()])),
        "replayed cycle must follow edges"
    );
    Some(HamCycle { order })
}

/// The tree/cycle split of a Halin graph's edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalinDecomposition {
    tree_edges: BTreeSet<Edge>,
    cycle_edges: BTreeSet<Edge>,
}

impl HalinDecomposition {
    /// Wraps a claimed split without checking anything, so that verifiers
    /// can be pointed at untrusted input.
    pub fn from_parts(tree_edges: BTreeSet<Edge>, cycle_edges: BTreeSet<Edge>) -> Self {
        HalinDecomposition { tree_edges, cycle_edges }
    }

    pub fn tree_edges(&self) -> &BTreeSet<Edge> {
        &self.tree_edges
    }

    pub fn cycle_edges(&self) -> &BTreeSet<Edge> {
        &self.cycle_edges
    }
}

impl fmt::Display for HalinDecomposition {
    /// Sorted `tree-edge: u v` lines, then sorted `cycle-edge: u v` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.tree_edges {
            writeln!(f, "tree-edge: {e}")?;
        }
        for e in &self.cycle_edges {
            writeln!(f, "cycle-edge: {e}")?;
        }
        Ok(())
    }
}

/// Halin adjacency split into tree and cycle parts, tracked incrementally
/// during replay.
#[derive(Default)]
struct SplitAdjacency {
    tree: HashMap<VertexId, IndexSet<VertexId>>,
    cycle: HashMap<VertexId, IndexSet<VertexId>>,
}

impl SplitAdjacency {
    fn add(map: &mut HashMap<VertexId, IndexSet<VertexId>>, u: &VertexId, v: &VertexId) {
        map.entry(u.clone()).or_default().insert(v.clone());
        map.entry(v.clone()).or_default().insert(u.clone());
    }

    fn remove(map: &mut HashMap<VertexId, IndexSet<VertexId>>, u: &VertexId, v: &VertexId) {
        let a = map.get_mut(u).expect("edge endpoints tracked");
        assert!(a.swap_remove(v), "edge {u} {v} should be present");
        map.get_mut(v).expect("edge endpoints tracked").swap_remove(u);
    }

    fn neighbors(map: &HashMap<VertexId, IndexSet<VertexId>>, v: &VertexId) -> Vec<VertexId> {
        map.get(v).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    }

    fn into_sets(self) -> (BTreeSet<Edge>, BTreeSet<Edge>) {
        let collect = |map: HashMap<VertexId, IndexSet<VertexId>>| {
            map.iter()
                .flat_map(|(u, vs)| {
                    vs.iter()
                        .filter(move |v| u < v)
                        .map(move |v| Edge::new(u.clone(), v.clone()))
                })
                .collect()
        };
        (collect(self.tree), collect(self.cycle))
    }
}

/// The tree/cycle decomposition of a Halin graph, or `None` if `g` is not
/// Halin.
///
/// The recognizer's run supplies both the trace and the set of vertices
/// pinned to the outer cycle; any remaining K4 vertex may serve as the
/// seed tree's center. Undoing a contraction turns a cycle vertex back
/// into a fan — its tree edge extends through the reinstated parent, whose
/// other two triangle mates rejoin the cycle. Undoing a shortening hangs
/// the middle vertex back on the cycle between its two endpoints, with its
/// apex edge rejoining the tree.
pub fn halin_decomposition(g: &Graph) -> Option<HalinDecomposition> {
    let outcome = recognize::is_halin(g);
    if !outcome.accepted {
        return None;
    }
    let state = outcome.halin_state.expect("halin runs always carry state");
    let final_graph = outcome.trace.final_graph();
    let center = final_graph
        .vertices()
        .filter(|v| !state.is_outer(v))
        .min()
        .expect("acceptance requires a vertex off the cycle")
        .clone();

    let mut split = SplitAdjacency::default();
    let rim: Vec<&VertexId> = final_graph.vertices().filter(|v| **v != center).collect();
    for (i, v) in rim.iter().enumerate() {
        SplitAdjacency::add(&mut split.tree, &center, v);
        SplitAdjacency::add(&mut split.cycle, v, rim[(i + 1) % rim.len()]);
    }

    for ev in outcome.trace.events().iter().rev() {
        match ev {
            ReductionEvent::ContractTriangle { triangle, outside, supervertex } => {
                let up = SplitAdjacency::neighbors(&split.tree, supervertex);
                let around = SplitAdjacency::neighbors(&split.cycle, supervertex);
                assert!(
                    up.len() == 1 && around.len() == 2,
                    "a contracted fan sits on the cycle as a tree leaf"
                );
                let member = |of: &VertexId| -> &VertexId {
                    let i = outside
                        .iter()
                        .position(|o| o == of)
                        .expect("decomposition neighbors come from the outside set");
                    &triangle[i]
                };
                let parent = member(&up[0]);
                let (u, v) = (member(&around[0]), member(&around[1]));
                SplitAdjacency::remove(&mut split.tree, supervertex, &up[0]);
                SplitAdjacency::remove(&mut split.cycle, supervertex, &around[0]);
                SplitAdjacency::remove(&mut split.cycle, supervertex, &around[1]);
                SplitAdjacency::add(&mut split.tree, parent, &up[0]);
                SplitAdjacency::add(&mut split.tree, parent, u);
                SplitAdjacency::add(&mut split.tree, parent, v);
                SplitAdjacency::add(&mut split.cycle, &around[0], u);
                SplitAdjacency::add(&mut split.cycle, u, v);
                SplitAdjacency::add(&mut split.cycle, v, &around[1]);
            }
            ReductionEvent::ShortenPath { path, apex } => {
                let [p, q, r] = path;
                SplitAdjacency::remove(&mut split.cycle, p, r);
                SplitAdjacency::add(&mut split.cycle, p, q);
                SplitAdjacency::add(&mut split.cycle, q, r);
                SplitAdjacency::add(&mut split.tree, apex, q);
            }
        }
    }

    let (tree_edges, cycle_edges) = split.into_sets();
    debug_assert_eq!(
        tree_edges.len(),
        g.vertex_count() - 1,
        "the tree part must span the graph"
    );
    Some(HalinDecomposition { tree_edges, cycle_edges })
}

//! Brute-force ground truth for testing the fast path.
//!
//! Nothing in this module shares logic with the engine or the
//! recognizers: Halin-ness is decided by trying every candidate outer
//! cycle, connectivity by deleting every vertex pair, confluence by
//! exploring every reduction order. All deciders are deliberately naive
//! and guarded by hard size limits; the verifiers (`verify_hamiltonian`,
//! `verify_decomposition`) are polynomial and unrestricted.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::graph::{vid, Edge, Graph, VertexId};
use crate::reconstruct::HalinDecomposition;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum OracleError {
    #[error("{what} handles at most {limit} vertices, got {got}")]
    SizeLimitExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },
}

fn check_size(what: &'static str, limit: usize, got: usize) -> Result<(), OracleError> {
    if got > limit {
        Err(OracleError::SizeLimitExceeded { what, limit, got })
    } else {
        Ok(())
    }
}

/// Decides whether `g` is Halin by trying every simple cycle through
/// degree-3 vertices as the outer cycle (limit 12 vertices).
///
/// A candidate cycle works when the remaining edges form a spanning tree
/// whose leaves are exactly the cycle vertices, no tree vertex has degree
/// 2, and the cycle visits the leaves of every subtree consecutively —
/// the last condition is what a plane drawing of the tree demands.
pub fn brute_force_halin(g: &Graph) -> Result<bool, OracleError> {
    check_size("brute_force_halin", 12, g.vertex_count())?;
    if g.vertex_count() < 4 || g.vertices().any(|v| g.degree(v) < 3) {
        return Ok(false);
    }
    for cycle in cycles_through_cubic_vertices(g) {
        if decomposes_along(g, &cycle) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All simple cycles of `g` whose vertices have degree exactly 3, each
/// reported once. Cycle vertices must be tree leaves — one tree edge plus
/// two cycle edges — so nothing else can lie on an outer cycle.
fn cycles_through_cubic_vertices(g: &Graph) -> Vec<Vec<VertexId>> {
    let mut verts: Vec<VertexId> = g.vertices().filter(|v| g.degree(v) == 3).cloned().collect();
    verts.sort();
    let index: HashMap<&VertexId, usize> =
        verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut out = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut in_path = vec![false; verts.len()];
    for anchor in 0..verts.len() {
        path.push(anchor);
        in_path[anchor] = true;
        extend_cycle(g, &verts, &index, anchor, &mut path, &mut in_path, &mut out);
        in_path[anchor] = false;
        path.pop();
    }
    out
}

fn extend_cycle(
    g: &Graph,
    verts: &[VertexId],
    index: &HashMap<&VertexId, usize>,
    anchor: usize,
    path: &mut Vec<usize>,
    in_path: &mut Vec<bool>,
    out: &mut Vec<Vec<VertexId>>,
) {
    let last = &verts[*path.last().expect("path starts at the anchor")];
    for nb in g.neighbors(last) {
        let Some(&j) = index.get(nb) else {
            continue; // neighbor has degree above 3
        };
        if j == anchor && path.len() >= 3 && path[1] < path[path.len() - 1] {
            out.push(path.iter().map(|&i| verts[i].clone()).collect());
        }
        // anchor = smallest index on the cycle; one direction only
        if j > anchor && !in_path[j] {
            path.push(j);
            in_path[j] = true;
            extend_cycle(g, verts, index, anchor, path, in_path, out);
            in_path[j] = false;
            path.pop();
        }
    }
}

fn decomposes_along(g: &Graph, cycle: &[VertexId]) -> bool {
    let mut cycle_edges: HashSet<Edge> = HashSet::new();
    for i in 0..cycle.len() {
        cycle_edges.insert(Edge::new(cycle[i].clone(), cycle[(i + 1) % cycle.len()].clone()));
    }
    let mut tree_adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for v in g.vertices() {
        tree_adj.insert(v.clone(), Vec::new());
    }
    for e in g.edges() {
        if cycle_edges.contains(&e) {
            continue;
        }
        let (u, v) = e.endpoints();
        tree_adj.get_mut(u).expect("seeded above").push(v.clone());
        tree_adj.get_mut(v).expect("seeded above").push(u.clone());
    }
    let on_cycle: HashSet<&VertexId> = cycle.iter().collect();
    for (v, nbs) in &tree_adj {
        let want_leaf = on_cycle.contains(v);
        if want_leaf && nbs.len() != 1 {
            return false; // a chord, or a cycle vertex of the wrong degree
        }
        if !want_leaf && nbs.len() < 3 {
            return false; // interior vertices may not have tree degree 1 or 2
        }
    }
    let tree_edge_count = g.edge_count() - cycle_edges.len();
    if tree_edge_count + 1 != g.vertex_count() || !spans(&tree_adj, g.vertex_count()) {
        return false;
    }
    subtree_leaves_are_consecutive(&tree_adj, cycle)
}

fn spans(adj: &HashMap<VertexId, Vec<VertexId>>, n: usize) -> bool {
    let Some(start) = adj.keys().next() else {
        return n == 0;
    };
    let mut seen: HashSet<&VertexId> = HashSet::new();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for u in &adj[v] {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == n
}

/// The planarity side of the Halin condition: rooted anywhere off the
/// cycle, every proper subtree's leaves must occupy a consecutive block
/// of cycle positions. Callers guarantee the cycle vertices are exactly
/// the tree's leaves.
fn subtree_leaves_are_consecutive(
    tree_adj: &HashMap<VertexId, Vec<VertexId>>,
    cycle: &[VertexId],
) -> bool {
    let pos: HashMap<&VertexId, usize> = cycle.iter().enumerate().map(|(i, v)| (v, i)).collect();
    // rooting at the first leaf's parent keeps position 0 in a subtree of
    // its own, so no block ever needs to wrap around
    let root = &tree_adj[&cycle[0]][0];
    for child in &tree_adj[root] {
        match scan_subtree(tree_adj, &pos, child, root) {
            Some(_) => {}
            None => return false,
        }
    }
    true
}

/// Returns the (min, max, count) of leaf positions under `v`, or `None`
/// if some subtree below — or `v`'s own — fails to form a block.
fn scan_subtree(
    tree_adj: &HashMap<VertexId, Vec<VertexId>>,
    pos: &HashMap<&VertexId, usize>,
    v: &VertexId,
    parent: &VertexId,
) -> Option<(usize, usize, usize)> {
    let mut agg = if let Some(&p) = pos.get(v) {
        (p, p, 1)
    } else {
        (usize::MAX, 0, 0)
    };
    for u in &tree_adj[v] {
        if u == parent {
            continue;
        }
        let (lo, hi, cnt) = scan_subtree(tree_adj, pos, u, v)?;
        agg = (agg.0.min(lo), agg.1.max(hi), agg.2 + cnt);
    }
    (agg.1 - agg.0 + 1 == agg.2).then_some(agg)
}

/// Why a graph fails to be 3-connected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeparationWitness {
    /// 3-connectedness starts at K4.
    TooFewVertices,
    Disconnected,
    CutVertex(VertexId),
    CutPair(VertexId, VertexId),
}

/// `None` iff `g` is 3-connected, decided by deleting every vertex and
/// every vertex pair (limit 60 vertices).
pub fn brute_force_3connected(g: &Graph) -> Result<Option<SeparationWitness>, OracleError> {
    check_size("brute_force_3connected", 60, g.vertex_count())?;
    if g.vertex_count() < 4 {
        return Ok(Some(SeparationWitness::TooFewVertices));
    }
    let mut vs: Vec<VertexId> = g.vertices().cloned().collect();
    vs.sort();
    if !connected_without(g, &[]) {
        return Ok(Some(SeparationWitness::Disconnected));
    }
    for v in &vs {
        if !connected_without(g, std::slice::from_ref(v)) {
            return Ok(Some(SeparationWitness::CutVertex(v.clone())));
        }
    }
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if !connected_without(g, &[vs[i].clone(), vs[j].clone()]) {
                return Ok(Some(SeparationWitness::CutPair(vs[i].clone(), vs[j].clone())));
            }
        }
    }
    Ok(None)
}

fn connected_without(g: &Graph, removed: &[VertexId]) -> bool {
    let gone: HashSet<&VertexId> = removed.iter().collect();
    let Some(start) = g.vertices().find(|v| !gone.contains(v)) else {
        return true;
    };
    let mut seen: HashSet<&VertexId> = HashSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if !gone.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == g.vertex_count() - removed.len()
}

/// Checks a claimed Hamiltonian cycle the obvious way: spanning, no
/// repeats, every hop an edge.
pub fn verify_hamiltonian(g: &Graph, vs: &[VertexId]) -> bool {
    vs.len() == g.vertex_count()
        && vs.len() >= 3
        && vs.iter().collect::<HashSet<_>>().len() == vs.len()
        && (0..vs.len()).all(|i| g.has_edge(&vs[i], &vs[(i + 1) % vs.len()]))
}

/// Checks a claimed tree/cycle split from first principles: the parts
/// partition the edges, the tree part spans without degree-2 vertices,
/// the cycle part is one cycle through exactly the tree's leaves, and the
/// leaf order is realizable by a plane drawing of the tree.
pub fn verify_decomposition(g: &Graph, d: &HalinDecomposition) -> bool {
    let tree = d.tree_edges();
    let cyc = d.cycle_edges();
    if tree.intersection(cyc).next().is_some() {
        return false;
    }
    let mut all: BTreeSet<Edge> = tree.iter().cloned().collect();
    all.extend(cyc.iter().cloned());
    if all != g.edges().collect::<BTreeSet<Edge>>() {
        return false;
    }

    let mut cycle_adj: HashMap<&VertexId, Vec<&VertexId>> = HashMap::new();
    for e in cyc {
        let (u, v) = e.endpoints();
        cycle_adj.entry(u).or_default().push(v);
        cycle_adj.entry(v).or_default().push(u);
    }
    if cycle_adj.len() < 3 || cycle_adj.values().any(|nbs| nbs.len() != 2) {
        return false;
    }
    // walk the cycle from its smallest vertex and insist it closes after
    // covering every cycle edge (i.e. the part is one cycle, not several)
    let start = *cycle_adj.keys().min().expect("cycle part is nonempty");
    let mut order: Vec<VertexId> = vec![start.clone()];
    let (mut prev, mut cur) = (start, cycle_adj[start][0]);
    while cur != start {
        order.push(cur.clone());
        let step = &cycle_adj[cur];
        let next = if step[0] == prev { step[1] } else { step[0] };
        prev = cur;
        cur = next;
        if order.len() > cycle_adj.len() {
            return false;
        }
    }
    if order.len() != cycle_adj.len() {
        return false;
    }

    let mut tree_adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for v in g.vertices() {
        tree_adj.insert(v.clone(), Vec::new());
    }
    for e in tree {
        let (u, v) = e.endpoints();
        tree_adj.get_mut(u).expect("edges checked against g").push(v.clone());
        tree_adj.get_mut(v).expect("edges checked against g").push(u.clone());
    }
    if tree.len() + 1 != g.vertex_count() || !spans(&tree_adj, g.vertex_count()) {
        return false;
    }
    for (v, nbs) in &tree_adj {
        let leaf = cycle_adj.contains_key(v);
        if leaf && nbs.len() != 1 {
            return false;
        }
        if !leaf && nbs.len() < 3 {
            return false;
        }
    }
    subtree_leaves_are_consecutive(&tree_adj, &order)
}

/// A byte string equal for two graphs exactly when they are isomorphic
/// (limit 12 vertices): the lexicographically smallest upper-triangle
/// writing of the adjacency matrix over all vertex orders, found by
/// branch and bound.
pub fn canonical_key(g: &Graph) -> Result<Vec<u8>, OracleError> {
    let n = g.vertex_count();
    check_size("canonical_key", 12, n)?;
    if n == 0 {
        return Ok(vec![0]);
    }
    let mut vs: Vec<&VertexId> = g.vertices().collect();
    vs.sort();
    let index: HashMap<&VertexId, usize> = vs.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj = vec![0u16; n];
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let (i, j) = (index[u], index[v]);
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    // low-degree-first is a good first guess at the minimum and a good
    // candidate order in the search
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (adj[i].count_ones(), i));
    let mut best = triangle_bits(&adj, &by_degree);
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut prefix: Vec<bool> = Vec::with_capacity(n * (n - 1) / 2);
    min_order_search(&adj, &by_degree, &mut perm, &mut used, &mut prefix, &mut best);
    Ok(pack_bits(n, &best))
}

/// Upper triangle in column-major order: for each position j, the bits
/// toward positions 0..j. Growing a permutation one vertex at a time
/// appends exactly one column, which is what the search exploits.
fn triangle_bits(adj: &[u16], order: &[usize]) -> Vec<bool> {
    let mut out = Vec::with_capacity(order.len() * (order.len() - 1) / 2);
    for j in 1..order.len() {
        for i in 0..j {
            out.push(adj[order[i]] & (1 << order[j]) != 0);
        }
    }
    out
}

fn min_order_search(
    adj: &[u16],
    candidates: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    prefix: &mut Vec<bool>,
    best: &mut Vec<bool>,
) {
    let n = adj.len();
    if perm.len() == n {
        if prefix.as_slice() < best.as_slice() {
            best.copy_from_slice(prefix);
        }
        return;
    }
    for &c in candidates {
        if used[c] {
            continue;
        }
        let col_start = prefix.len();
        for &p in perm.iter() {
            prefix.push(adj[p] & (1 << c) != 0);
        }
        // comparing the whole prefix against the current best each time is
        // a few dozen bit compares — staleness bugs cost more than it does
        if prefix.as_slice() <= &best[..prefix.len()] {
            perm.push(c);
            used[c] = true;
            min_order_search(adj, candidates, perm, used, prefix, best);
            used[c] = false;
            perm.pop();
        }
        prefix.truncate(col_start);
    }
}

fn pack_bits(n: usize, bits: &[bool]) -> Vec<u8> {
    let mut out = vec![n as u8];
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << i;
            }
        }
        out.push(byte);
    }
    out
}

/// Isomorphism by degree-pruned backtracking (limit 32 vertices).
pub fn graphs_isomorphic(a: &Graph, b: &Graph) -> Result<bool, OracleError> {
    check_size("graphs_isomorphic", 32, a.vertex_count())?;
    check_size("graphs_isomorphic", 32, b.vertex_count())?;
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let degrees = |g: &Graph| {
        let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    };
    if degrees(a) != degrees(b) {
        return Ok(false);
    }
    let order = mapping_order(a);
    let mut b_verts: Vec<VertexId> = b.vertices().cloned().collect();
    b_verts.sort();
    let mut map: HashMap<VertexId, VertexId> = HashMap::new();
    let mut used: HashSet<VertexId> = HashSet::new();
    Ok(extend_isomorphism(a, b, &order, &b_verts, &mut map, &mut used))
}

/// Vertices of `a` arranged so each one (per component) touches an
/// earlier one — the partial maps then fail fast.
fn mapping_order(a: &Graph) -> Vec<VertexId> {
    let mut all: Vec<VertexId> = a.vertices().cloned().collect();
    all.sort_by_key(|v| (usize::MAX - a.degree(v), v.clone()));
    let mut order = Vec::with_capacity(all.len());
    let mut seen: HashSet<VertexId> = HashSet::new();
    for root in &all {
        if seen.contains(root) {
            continue;
        }
        seen.insert(root.clone());
        order.push(root.clone());
        let mut i = order.len() - 1;
        while i < order.len() {
            let v = order[i].clone();
            let mut nbs: Vec<VertexId> = a
                .neighbors(&v)
                .filter(|u| !seen.contains(*u))
                .cloned()
                .collect();
            nbs.sort();
            for u in nbs {
                seen.insert(u.clone());
                order.push(u);
            }
            i += 1;
        }
    }
    order
}

fn extend_isomorphism(
    a: &Graph,
    b: &Graph,
    order: &[VertexId],
    b_verts: &[VertexId],
    map: &mut HashMap<VertexId, VertexId>,
    used: &mut HashSet<VertexId>,
) -> bool {
    let Some(v) = order.get(map.len()) else {
        return true;
    };
    for cand in b_verts {
        if used.contains(cand) || b.degree(cand) != a.degree(v) {
            continue;
        }
        let consistent = map
            .iter()
            .all(|(w, wb)| a.has_edge(v, w) == b.has_edge(cand, wb));
        if !consistent {
            continue;
        }
        map.insert(v.clone(), cand.clone());
        used.insert(cand.clone());
        if extend_isomorphism(a, b, order, b_verts, map, used) {
            return true;
        }
        map.remove(v);
        used.remove(cand);
    }
    false
}

/// One full application of either rule, described independently of the
/// engine.
enum Move {
    Triangle([VertexId; 3]),
    Path {
        ends: [VertexId; 2],
        middle: VertexId,
        apex: VertexId,
    },
}

fn all_moves(g: &Graph) -> Vec<Move> {
    let mut vs: Vec<VertexId> = g.vertices().cloned().collect();
    vs.sort();
    let cubic = |v: &VertexId| g.degree(v) == 3;
    let mut moves = Vec::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            for k in j + 1..vs.len() {
                let (p, q, r) = (&vs[i], &vs[j], &vs[k]);
                if !(cubic(p) && cubic(q) && cubic(r)) {
                    continue;
                }
                if !(g.has_edge(p, q) && g.has_edge(q, r) && g.has_edge(p, r)) {
                    continue;
                }
                let third = |v: &VertexId, other: &VertexId, another: &VertexId| {
                    g.neighbors(v).find(|x| *x != other && *x != another).cloned()
                };
                let (Some(a), Some(b), Some(c)) =
                    (third(p, q, r), third(q, p, r), third(r, p, q))
                else {
                    continue;
                };
                if a != b && b != c && a != c {
                    moves.push(Move::Triangle([p.clone(), q.clone(), r.clone()]));
                }
            }
        }
    }
    for q in vs.iter().filter(|q| cubic(q)) {
        let mut nbs: Vec<VertexId> = g.neighbors(q).cloned().collect();
        nbs.sort();
        for apex_at in 0..3 {
            let apex = &nbs[apex_at];
            let (p, r) = (&nbs[(apex_at + 1) % 3], &nbs[(apex_at + 2) % 3]);
            if cubic(p)
                && cubic(r)
                && !g.has_edge(p, r)
                && g.has_edge(apex, p)
                && g.has_edge(apex, r)
            {
                moves.push(Move::Path {
                    ends: [p.clone(), r.clone()],
                    middle: q.clone(),
                    apex: apex.clone(),
                });
            }
        }
    }
    moves
}

fn apply_move(g: &Graph, m: &Move) -> Graph {
    let mut h = g.clone();
    match m {
        Move::Triangle([p, q, r]) => {
            let t = h.peek_fresh_id();
            h.contract_triangle(p, q, r, &t).expect("enumerated contraction applies");
        }
        Move::Path { ends: [p, r], middle, apex } => {
            h.shorten_path(p, middle, r, apex).expect("enumerated shortening applies");
        }
    }
    h
}

/// Every irreducible graph reachable from `g` by any sequence of
/// reductions in any order, one representative per isomorphism class
/// (limit 9 vertices). A singleton K4 answer here is what confluence
/// looks like.
pub fn all_maximal_reduction_results(g: &Graph) -> Result<Vec<Graph>, OracleError> {
    check_size("all_maximal_reduction_results", 9, g.vertex_count())?;
    let mut memo: HashMap<Vec<u8>, BTreeSet<Vec<u8>>> = HashMap::new();
    let mut reps: HashMap<Vec<u8>, Graph> = HashMap::new();
    let keys = explore(g, &mut memo, &mut reps)?;
    Ok(keys.iter().map(|k| reps[k].clone()).collect())
}

fn explore(
    g: &Graph,
    memo: &mut HashMap<Vec<u8>, BTreeSet<Vec<u8>>>,
    reps: &mut HashMap<Vec<u8>, Graph>,
) -> Result<BTreeSet<Vec<u8>>, OracleError> {
    let key = canonical_key(g)?;
    if let Some(done) = memo.get(&key) {
        return Ok(done.clone());
    }
    let moves = all_moves(g);
    let mut out = BTreeSet::new();
    if moves.is_empty() {
        reps.entry(key.clone()).or_insert_with(|| g.clone());
        out.insert(key.clone());
    } else {
        for m in &moves {
            out.extend(explore(&apply_move(g, m), memo, reps)?);
        }
    }
    memo.insert(key, out.clone());
    Ok(out)
}

/// One labeled representative of every unlabeled simple graph on exactly
/// `n` vertices (limit 8), built by extending each smaller representative
/// with a new vertex attached in every possible way and deduplicating by
/// canonical form.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, OracleError> {
    check_size("enumerate_graphs", 8, n)?;
    let name = |i: usize| vid(&format!("v{i}"));
    let mut reps = vec![{
        let mut g = Graph::new();
        g.add_vertex(name(0));
        g
    }];
    for k in 2..=n {
        let fresh = name(k - 1);
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut next = Vec::new();
        for parent in &reps {
            for mask in 0u32..(1 << (k - 1)) {
                let mut h = parent.clone();
                h.add_vertex(fresh.clone());
                for i in 0..k - 1 {
                    if mask & (1 << i) != 0 {
                        h.add_edge(fresh.clone(), name(i)).expect("new vertex, no loops");
                    }
                }
                if seen.insert(canonical_key(&h)?) {
                    next.push(h);
                }
            }
        }
        reps = next;
    }
    Ok(reps)
}

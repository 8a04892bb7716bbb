//! Graph families and growth operations for building corpora.
//!
//! The two growth operations, [`expand_vertex`] and [`subdivide_with_apex`],
//! are the exact inverses of the two reductions, so anything grown from K4
//! with them is D3-reducible by construction. On top of those sit seeded
//! random generators (deterministic per seed) and [`glue_wheels`], which
//! assembles wheels face-to-face while building the matching D3-reducible
//! primal graph in lockstep.

use std::collections::{HashMap, HashSet};

use indexmap::{IndexMap, IndexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{vid, Edge, Graph, GraphError, VertexId};
use crate::reconstruct::{self, RotationSystem, TriangleSense};

#[derive(Clone, PartialEq, Debug, Error)]
pub enum GeneratorError {
    #[error("{what}: size {got} is too small (need at least {min})")]
    InvalidSize {
        what: &'static str,
        got: usize,
        min: usize,
    },
    #[error("invalid degree profile: {0}")]
    InvalidProfile(String),
    #[error("probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid gluing description: {0}")]
    InvalidGluing(String),
}

/// Wheel on `k` vertices: hub `h` joined to every vertex of the rim cycle
/// `r0 … r{k-2}`.
pub fn wheel(k: usize) -> Result<Graph, GeneratorError> {
    if k < 4 {
        return Err(GeneratorError::InvalidSize { what: "wheel", got: k, min: 4 });
    }
    let hub = vid("h");
    let rim: Vec<VertexId> = (0..k - 1).map(|i| vid(&format!("r{i}"))).collect();
    let mut g = Graph::new();
    for i in 0..rim.len() {
        g.add_edge(hub.clone(), rim[i].clone()).expect("spokes are distinct");
        g.add_edge(rim[i].clone(), rim[(i + 1) % rim.len()].clone())
            .expect("rim edges are distinct");
    }
    Ok(g)
}

/// The truncated tetrahedron: every corner of K4 blown up into a triangle.
/// 3-regular, 12 vertices, 18 edges, and exactly four triangles — all four
/// pairwise vertex-disjoint, so it is D3-reducible but very far from a
/// wheel. Vertex `c<i><j>` sits on corner triangle `i` facing corner `j`.
pub fn truncated_tetrahedron() -> Graph {
    let v = |i: usize, j: usize| vid(&format!("c{i}{j}"));
    let mut g = Graph::new();
    for i in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        for a in 0..3 {
            for b in a + 1..3 {
                g.add_edge(v(i, others[a]), v(i, others[b])).expect("corner triangle");
            }
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            g.add_edge(v(i, j), v(j, i)).expect("cross edge");
        }
    }
    g
}

/// Inverse of a triangle contraction: replace the degree-3 vertex `v` by a
/// triangle on `replacements`, connecting `replacements[i]` to the i-th
/// neighbor of `v` in adjacency order at the time of the call.
pub fn expand_vertex(
    g: &mut Graph,
    v: &VertexId,
    replacements: &[VertexId; 3],
) -> Result<(), GraphError> {
    const OP: &str = "expand_vertex";
    let pre = |reason: String| GraphError::Precondition { op: OP, reason };
    if g.degree(v) != 3 {
        return Err(pre(format!("{v} has degree {}, need 3", g.degree(v))));
    }
    let [p, q, r] = replacements;
    if p == q || q == r || p == r {
        return Err(pre(format!("replacements {p} {q} {r} are not distinct")));
    }
    for m in replacements {
        if g.contains_vertex(m) {
            return Err(pre(format!("replacement vertex {m} is not fresh")));
        }
    }
    let nbrs: Vec<VertexId> = g.neighbors(v).cloned().collect();
    g.remove_vertex(v);
    for i in 0..3 {
        for j in i + 1..3 {
            g.add_edge(replacements[i].clone(), replacements[j].clone())
                .expect("triangle on fresh vertices");
        }
    }
    for (m, x) in replacements.iter().zip(&nbrs) {
        g.add_edge(m.clone(), x.clone()).expect("spoke to former neighbor");
    }
    Ok(())
}

/// Inverse of a path shortening: subdivide the edge `p`–`r` with the fresh
/// vertex `q` and join `q` to the apex `s`, which must already be adjacent
/// to both `p` and `r`. Both endpoints must have degree 3, so the result
/// admits the reverse reduction.
pub fn subdivide_with_apex(
    g: &mut Graph,
    p: &VertexId,
    r: &VertexId,
    s: &VertexId,
    q: &VertexId,
) -> Result<(), GraphError> {
    const OP: &str = "subdivide_with_apex";
    let pre = |reason: String| GraphError::Precondition { op: OP, reason };
    if p == r || p == s || r == s {
        return Err(pre(format!("vertices {p} {r} {s} are not distinct")));
    }
    if g.contains_vertex(q) {
        return Err(pre(format!("replacement vertex {q} is not fresh")));
    }
    if !g.has_edge(p, r) {
        return Err(pre(format!("no edge {p} {r} to subdivide")));
    }
    if !g.has_edge(s, p) || !g.has_edge(s, r) {
        return Err(pre(format!("{s} is not an apex over the edge {p} {r}")));
    }
    for w in [p, r] {
        if g.degree(w) != 3 {
            return Err(pre(format!("{w} has degree {}, need 3", g.degree(w))));
        }
    }
    g.remove_edge(p, r);
    g.add_edge(p.clone(), q.clone()).expect("subdivision edge");
    g.add_edge(q.clone(), r.clone()).expect("subdivision edge");
    g.add_edge(q.clone(), s.clone()).expect("apex edge");
    Ok(())
}

/// A rooted tree whose children carry a left-to-right order — the skeleton
/// a Halin graph is drawn from. Every internal vertex has tree-degree at
/// least 3, so no vertex anywhere has degree 2.
#[derive(Clone, Debug)]
pub struct PlaneTree {
    root: VertexId,
    children: IndexMap<VertexId, Vec<VertexId>>,
}

impl PlaneTree {
    pub fn root(&self) -> &VertexId {
        &self.root
    }

    /// Empty for leaves.
    pub fn children(&self, v: &VertexId) -> &[VertexId] {
        self.children.get(v).map_or(&[], Vec::as_slice)
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.children
            .iter()
            .flat_map(|(parent, kids)| kids.iter().map(move |c| (parent, c)))
    }

    /// Leaves in left-to-right order — the order the outer cycle follows.
    pub fn leaves(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![self.root.clone()];
        while let Some(v) = stack.pop() {
            let kids = self.children(&v);
            if kids.is_empty() {
                out.push(v);
            } else {
                stack.extend(kids.iter().rev().cloned());
            }
        }
        out
    }
}

/// Grows a random plane tree whose internal vertices receive the given
/// degrees, in order: the first entry is the root's child count, each later
/// entry converts a uniformly random current leaf into an internal vertex
/// of that tree-degree. All degrees must be at least 3.
pub fn random_plane_tree(
    internal_degrees: &[usize],
    seed: u64,
) -> Result<PlaneTree, GeneratorError> {
    if internal_degrees.is_empty() {
        return Err(GeneratorError::InvalidProfile("empty degree profile".into()));
    }
    if let Some(d) = internal_degrees.iter().find(|&&d| d < 3) {
        return Err(GeneratorError::InvalidProfile(format!(
            "internal degree {d} is below 3"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = 0usize;
    let mut fresh = || {
        let v = vid(&format!("n{next}"));
        next += 1;
        v
    };
    let root = fresh();
    let mut children: IndexMap<VertexId, Vec<VertexId>> = IndexMap::new();
    children.insert(root.clone(), Vec::new());
    let mut leaves: Vec<VertexId> = Vec::new();

    let mut grow = |children: &mut IndexMap<VertexId, Vec<VertexId>>,
                    leaves: &mut Vec<VertexId>,
                    parent: VertexId,
                    count: usize| {
        for _ in 0..count {
            let c = fresh();
            children.insert(c.clone(), Vec::new());
            children.get_mut(&parent).expect("parent exists").push(c.clone());
            leaves.push(c);
        }
    };

    grow(&mut children, &mut leaves, root.clone(), internal_degrees[0]);
    for &d in &internal_degrees[1..] {
        let pick = rng.gen_range(0..leaves.len());
        let v = leaves.swap_remove(pick);
        grow(&mut children, &mut leaves, v, d - 1);
    }
    Ok(PlaneTree { root, children })
}

/// The Halin graph of a plane tree: its edges plus a cycle through the
/// leaves in left-to-right order.
pub fn halin_from_tree(tree: &PlaneTree) -> Graph {
    let mut g = Graph::new();
    for (u, v) in tree.edges() {
        g.add_edge(u.clone(), v.clone()).expect("tree edges are distinct");
    }
    let leaves = tree.leaves();
    for i in 0..leaves.len() {
        g.add_edge(leaves[i].clone(), leaves[(i + 1) % leaves.len()].clone())
            .expect("outer cycle closes a tree");
    }
    g
}

/// Seeded random Halin graph; see [`random_plane_tree`] for the profile's
/// meaning. A profile of `[k-1]` yields the wheel on `k` vertices.
pub fn random_halin(internal_degrees: &[usize], seed: u64) -> Result<Graph, GeneratorError> {
    Ok(halin_from_tree(&random_plane_tree(internal_degrees, seed)?))
}

/// Grows a random D3-reducible graph with exactly `n` vertices from K4:
/// each step either expands a uniformly random degree-3 vertex into a
/// triangle (with probability `d3a_probability`, when 2 or more vertices
/// remain to be added) or subdivides a uniformly random qualifying edge
/// under an apex. With `d3a_probability` 1.0, pick `n` with `n - 4` even,
/// or the final step is forced to be a subdivision.
///
/// Probability 0.0 grows wheels; 1.0 grows 3-regular graphs.
pub fn random_d3_reducible(
    n: usize,
    seed: u64,
    d3a_probability: f64,
) -> Result<Graph, GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::InvalidSize { what: "random_d3_reducible", got: n, min: 4 });
    }
    if !(0.0..=1.0).contains(&d3a_probability) {
        return Err(GeneratorError::InvalidProbability(d3a_probability));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<VertexId> = (0..4).map(|i| vid(&format!("t{i}"))).collect();
    let mut g = Graph::new();
    for i in 0..4 {
        for j in i + 1..4 {
            g.add_edge(base[i].clone(), base[j].clone()).expect("K4 edge");
        }
    }
    let mut next_id = 4u64;
    let mut fresh = |count: usize| -> Vec<VertexId> {
        let out = (0..count).map(|d| vid(&format!("t{}", next_id + d as u64))).collect();
        next_id += count as u64;
        out
    };

    // Degree-3 vertices (kept exact) and candidate subdivision edges (a
    // superset, cleaned lazily: an entry that has gone stale — an endpoint
    // degree above 3, the edge deleted, or its last apex gone — can never
    // become valid again, so it is discarded for good when drawn).
    let mut deg3: IndexSet<VertexId> = base.iter().cloned().collect();
    let mut sites: IndexSet<Edge> = g.edges().collect();

    while g.vertex_count() < n {
        let remaining = n - g.vertex_count();
        if remaining >= 2 && rng.gen_bool(d3a_probability) {
            let v = deg3
                .get_index(rng.gen_range(0..deg3.len()))
                .expect("degree-3 pool is never empty")
                .clone();
            let nbrs: Vec<VertexId> = g.neighbors(&v).cloned().collect();
            let m = fresh(3);
            let triangle: [VertexId; 3] = [m[0].clone(), m[1].clone(), m[2].clone()];
            expand_vertex(&mut g, &v, &triangle).expect("pool vertex has degree 3");
            deg3.swap_remove(&v);
            for x in &nbrs {
                sites.swap_remove(&Edge::new(v.clone(), x.clone()));
            }
            for w in &triangle {
                deg3.insert(w.clone());
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    sites.insert(Edge::new(triangle[i].clone(), triangle[j].clone()));
                }
            }
            // The new spoke edges get no site entries: each lies on no
            // triangle, and no edge ever gains a triangle during growth.
        } else {
            let (p, r, s) = loop {
                assert!(!sites.is_empty(), "subdivision site pool exhausted");
                let idx = rng.gen_range(0..sites.len());
                let e = sites.get_index(idx).expect("index in range").clone();
                let (p, r) = e.endpoints();
                if !g.has_edge(p, r) || g.degree(p) != 3 || g.degree(r) != 3 {
                    sites.swap_remove_index(idx);
                    continue;
                }
                let apexes: Vec<VertexId> = g
                    .neighbors(p)
                    .filter(|w| *w != r && g.has_edge(w, r))
                    .cloned()
                    .collect();
                if apexes.is_empty() {
                    sites.swap_remove_index(idx);
                    continue;
                }
                let s = apexes[rng.gen_range(0..apexes.len())].clone();
                break (p.clone(), r.clone(), s);
            };
            let q = fresh(1).remove(0);
            subdivide_with_apex(&mut g, &p, &r, &s, &q).expect("validated site");
            deg3.insert(q.clone());
            if g.degree(&s) != 3 {
                deg3.swap_remove(&s);
            }
            sites.swap_remove(&Edge::new(p.clone(), r.clone()));
            sites.insert(Edge::new(p, q.clone()));
            sites.insert(Edge::new(q, r));
            // The new apex edge q–s is not a site: s has degree 4 or more.
        }
    }
    Ok(g)
}

/// A recipe for assembling wheels into one planar graph by gluing
/// triangular faces.
///
/// Faces of a wheel on `k` vertices are numbered `0..=k-2`: face `t` is the
/// triangle (hub, rim `t`, rim `t+1` cyclically). For `k = 4` the rim
/// triangle itself is additionally face 3. Two glued faces are identified
/// corner by corner, in the order just given.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GluingSpec {
    /// Vertex count of each wheel, all at least 4.
    pub wheels: Vec<usize>,
    /// Gluings `(wheel a, face of a, wheel b, face of b)`. They must form a
    /// tree over the wheels, and no face may be glued twice.
    pub gluing_tree: Vec<(usize, usize, usize, usize)>,
}

/// What [`glue_wheels`] builds.
#[derive(Clone, Debug)]
pub struct GluedWheels {
    /// The glued wheels themselves (vertex `w<i>h` is wheel i's hub,
    /// `w<i>r<j>` its rim; identified vertices keep the smallest name).
    pub dual: Graph,
    /// A D3-reducible graph whose embedding has `dual` as its dual graph.
    pub primal: Graph,
}

/// Glues wheels along triangular faces per `spec` and simultaneously grows
/// the primal graph whose faces mirror the glued structure.
///
/// Each gluing of a 4-wheel inserts one vertex into a triangular face of
/// the growing dual, which corresponds to expanding one primal vertex into
/// a triangle; enlarging a glued wheel beyond size 4 inserts rim vertices
/// one at a time, each corresponding to one primal edge subdivision. The
/// primal is therefore D3-reducible by construction, and the dual of its
/// embedding is exactly the returned `dual` graph.
pub fn glue_wheels(spec: &GluingSpec) -> Result<GluedWheels, GeneratorError> {
    let bad = |msg: String| GeneratorError::InvalidGluing(msg);
    let wheel_count = spec.wheels.len();
    if wheel_count == 0 {
        return Err(bad("no wheels".into()));
    }
    for (i, &k) in spec.wheels.iter().enumerate() {
        if k < 4 {
            return Err(bad(format!("wheel {i} has size {k}, need at least 4")));
        }
    }
    if spec.gluing_tree.len() + 1 != wheel_count {
        return Err(bad(format!(
            "{} wheels need exactly {} gluings, got {}",
            wheel_count,
            wheel_count - 1,
            spec.gluing_tree.len()
        )));
    }

    let face_count = |k: usize| if k == 4 { 4 } else { k - 1 };
    let mut used_faces: HashSet<(usize, usize)> = HashSet::new();
    let mut wheel_uf: Vec<usize> = (0..wheel_count).collect();
    fn wheel_root(uf: &mut Vec<usize>, mut i: usize) -> usize {
        while uf[i] != i {
            uf[i] = uf[uf[i]];
            i = uf[i];
        }
        i
    }
    for &(a, fa, b, fb) in &spec.gluing_tree {
        for (w, f) in [(a, fa), (b, fb)] {
            if w >= wheel_count {
                return Err(bad(format!("wheel index {w} out of range")));
            }
            if f >= face_count(spec.wheels[w]) {
                return Err(bad(format!("wheel {w} has no face {f}")));
            }
            if !used_faces.insert((w, f)) {
                return Err(bad(format!("face {f} of wheel {w} glued twice")));
            }
        }
        let (ra, rb) = (wheel_root(&mut wheel_uf, a), wheel_root(&mut wheel_uf, b));
        if ra == rb {
            return Err(bad("gluings form a cycle".into()));
        }
        wheel_uf[ra] = rb;
    }

    let hub = |i: usize| vid(&format!("w{i}h"));
    let rim = |i: usize, j: usize| vid(&format!("w{i}r{j}"));
    // Ordered corners of face `f` of wheel `i`, matching the numbering in
    // the `GluingSpec` docs.
    let face_triple = |i: usize, f: usize| -> [VertexId; 3] {
        let k = spec.wheels[i];
        if k == 4 && f == 3 {
            [rim(i, 0), rim(i, 1), rim(i, 2)]
        } else {
            [hub(i), rim(i, f), rim(i, (f + 1) % (k - 1))]
        }
    };

    // Identify glued corners; the smallest name in each class is its
    // representative everywhere below.
    let mut uf = NameUnionFind::default();
    for &(a, fa, b, fb) in &spec.gluing_tree {
        let (ta, tb) = (face_triple(a, fa), face_triple(b, fb));
        for (u, v) in ta.iter().zip(tb.iter()) {
            uf.union(u, v);
        }
    }
    for (i, &k) in spec.wheels.iter().enumerate() {
        let mut reps: HashSet<VertexId> = HashSet::new();
        reps.insert(uf.find(&hub(i)));
        for j in 0..k - 1 {
            reps.insert(uf.find(&rim(i, j)));
        }
        if reps.len() != k {
            return Err(bad(format!("gluing identifies two vertices of wheel {i}")));
        }
    }

    let mut dual = Graph::new();
    for (i, &k) in spec.wheels.iter().enumerate() {
        for j in 0..k - 1 {
            for (u, v) in [
                (hub(i), rim(i, j)),
                (rim(i, j), rim(i, (j + 1) % (k - 1))),
            ] {
                let (ru, rv) = (uf.find(&u), uf.find(&v));
                assert_ne!(ru, rv, "tree-shaped gluings cannot merge an edge");
                if !dual.has_edge(&ru, &rv) {
                    dual.add_edge(ru, rv).expect("checked for duplicates");
                }
            }
        }
    }

    // Order the gluings so each step attaches one new wheel to the part
    // already built, starting from wheel 0.
    let mut by_wheel: Vec<Vec<usize>> = vec![Vec::new(); wheel_count];
    for (idx, &(a, _, b, _)) in spec.gluing_tree.iter().enumerate() {
        by_wheel[a].push(idx);
        by_wheel[b].push(idx);
    }
    let mut steps: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut visited = vec![false; wheel_count];
    visited[0] = true;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for &idx in &by_wheel[i] {
            let (a, fa, b, fb) = spec.gluing_tree[idx];
            let (parent_face, child, child_face) = if a == i { (fa, b, fb) } else { (fb, a, fa) };
            if visited[child] {
                continue;
            }
            visited[child] = true;
            steps.push((i, parent_face, child, child_face));
            frontier.push(child);
        }
    }
    debug_assert!(visited.iter().all(|&v| v), "tree check guarantees reachability");

    // Lockstep primal construction. Wheel 0's 4-wheel core maps onto the
    // base K4, whose four faces stand for the core's hub and first three
    // rim vertices; every later dual vertex enters through one expansion or
    // one subdivision.
    let mut state = Lockstep::base_k4([
        uf.find(&hub(0)),
        uf.find(&rim(0, 0)),
        uf.find(&rim(0, 1)),
        uf.find(&rim(0, 2)),
    ]);
    let k0 = spec.wheels[0];
    for m in 3..k0 - 1 {
        state.enlarge(
            &uf.find(&hub(0)),
            &uf.find(&rim(0, m - 2)),
            &uf.find(&rim(0, m - 1)),
            &uf.find(&rim(0, 0)),
            &uf.find(&rim(0, m)),
        )?;
    }
    for (parent, parent_face, child, child_face) in steps {
        let target = face_triple(parent, parent_face).map(|v| uf.find(&v));
        let k = spec.wheels[child];
        if k == 4 && child_face == 3 {
            state.glue_k4(&target, &uf.find(&hub(child)))?;
        } else {
            let rimlen = k - 1;
            let t = child_face;
            state.glue_k4(&target, &uf.find(&rim(child, (t + 2) % rimlen)))?;
            for step in 1..=k - 4 {
                state.enlarge(
                    &uf.find(&hub(child)),
                    &uf.find(&rim(child, (t + step) % rimlen)),
                    &uf.find(&rim(child, (t + step + 1) % rimlen)),
                    &uf.find(&rim(child, t)),
                    &uf.find(&rim(child, (t + step + 2) % rimlen)),
                )?;
            }
        }
    }

    let primal = state.finish();
    // Per Euler's formula the dual's face count must equal the primal's
    // vertex count.
    assert_eq!(
        primal.vertex_count(),
        2 + dual.edge_count() - dual.vertex_count(),
        "primal vertices must match dual faces"
    );
    Ok(GluedWheels { dual, primal })
}

#[derive(Default)]
struct NameUnionFind {
    parent: HashMap<VertexId, VertexId>,
}

impl NameUnionFind {
    fn find(&mut self, v: &VertexId) -> VertexId {
        let p = match self.parent.get(v) {
            None => return v.clone(),
            Some(p) => p.clone(),
        };
        let root = self.find(&p);
        self.parent.insert(v.clone(), root.clone());
        root
    }

    fn union(&mut self, a: &VertexId, b: &VertexId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        // smaller name wins, keeping representatives deterministic
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(child, root);
    }
}

/// The growing primal graph together with the face bookkeeping that ties it
/// to the dual being assembled: `corners[(v, x)]` is the dual vertex whose
/// primal face touches corner `(v, x)` (entered from `x` in `v`'s rotation),
/// and `sites` maps each triangular dual face — as its sorted corner triple
/// — to the degree-3 primal vertex where those three faces meet.
struct Lockstep {
    graph: Graph,
    rot: RotationSystem,
    corners: HashMap<(VertexId, VertexId), VertexId>,
    sites: HashMap<[VertexId; 3], VertexId>,
    next_id: u64,
}

fn key3(mut triple: [VertexId; 3]) -> [VertexId; 3] {
    triple.sort();
    triple
}

impl Lockstep {
    fn base_k4(dual_ids: [VertexId; 4]) -> Self {
        let base: Vec<VertexId> = (0..4).map(|i| vid(&format!("t{i}"))).collect();
        let mut graph = Graph::new();
        for i in 0..4 {
            for j in i + 1..4 {
                graph.add_edge(base[i].clone(), base[j].clone()).expect("K4 edge");
            }
        }
        let rot = reconstruct::k4_rotation(&graph);
        let faces = reconstruct::trace_faces(&rot);
        assert_eq!(faces.len(), 4, "K4 embeds with four faces");
        let mut corners = HashMap::new();
        for (face, did) in faces.iter().zip(dual_ids.iter()) {
            let b = face.boundary();
            for i in 0..b.len() {
                // the face entered at b[i+1] from b[i]
                corners.insert((b[(i + 1) % b.len()].clone(), b[i].clone()), did.clone());
            }
        }
        let mut state = Lockstep { graph, rot, corners, sites: HashMap::new(), next_id: 4 };
        for v in base {
            let triple = state.corner_triple(&v);
            state.sites.insert(triple, v);
        }
        state
    }

    fn fresh(&mut self) -> VertexId {
        let v = vid(&format!("t{}", self.next_id));
        self.next_id += 1;
        v
    }

    fn corner_triple(&self, v: &VertexId) -> [VertexId; 3] {
        let order = self.rot.order(v);
        assert_eq!(order.len(), 3, "{v} should have exactly three corners");
        key3([
            self.corners[&(v.clone(), order[0].clone())].clone(),
            self.corners[&(v.clone(), order[1].clone())].clone(),
            self.corners[&(v.clone(), order[2].clone())].clone(),
        ])
    }

    /// Inserts dual vertex `new_did` into the dual face `target`, i.e.
    /// expands the primal vertex where the three target faces meet.
    fn glue_k4(&mut self, target: &[VertexId; 3], new_did: &VertexId) -> Result<(), GeneratorError> {
        let v = self.sites.remove(&key3(target.clone())).ok_or_else(|| {
            GeneratorError::InvalidGluing(format!(
                "target face {} {} {} is not a free triangular face",
                target[0], target[1], target[2]
            ))
        })?;
        let xs: Vec<VertexId> = self.rot.order(&v).to_vec();
        let deltas: Vec<VertexId> = xs
            .iter()
            .map(|x| self.corners[&(v.clone(), x.clone())].clone())
            .collect();
        let m: Vec<VertexId> = (0..3).map(|_| self.fresh()).collect();

        // expand_vertex pairs replacements with adjacency order; align that
        // with the rotation order used for the corner bookkeeping.
        let adj: Vec<VertexId> = self.graph.neighbors(&v).cloned().collect();
        let aligned: [VertexId; 3] = [0, 1, 2].map(|i| {
            let pos = xs.iter().position(|x| *x == adj[i]).expect("same neighbor set");
            m[pos].clone()
        });
        expand_vertex(&mut self.graph, &v, &aligned).expect("site vertex has degree 3");
        let triangle: [VertexId; 3] = [m[0].clone(), m[1].clone(), m[2].clone()];
        let outside: [VertexId; 3] = [xs[0].clone(), xs[1].clone(), xs[2].clone()];
        reconstruct::expand_rotation(&mut self.rot, &triangle, &outside, &v);

        for j in 0..3 {
            let (jn, jp) = ((j + 1) % 3, (j + 2) % 3);
            self.corners.remove(&(v.clone(), xs[j].clone()));
            let across = self
                .corners
                .remove(&(xs[j].clone(), v.clone()))
                .expect("corner opposite the expanded vertex");
            self.corners.insert((xs[j].clone(), m[j].clone()), across);
            self.corners.insert((m[j].clone(), xs[j].clone()), deltas[j].clone());
            self.corners.insert((m[j].clone(), m[jn].clone()), deltas[jn].clone());
            self.corners.insert((m[j].clone(), m[jp].clone()), new_did.clone());
            self.sites.insert(
                key3([deltas[j].clone(), deltas[jn].clone(), new_did.clone()]),
                m[j].clone(),
            );
        }
        Ok(())
    }

    /// Splits the dual face (hub, prev, closing) by the new rim vertex
    /// `new_did`, i.e. subdivides the primal edge between the sites of
    /// (hub, prevprev, prev) and (hub, prev, closing) under their shared
    /// apex.
    fn enlarge(
        &mut self,
        hub_d: &VertexId,
        prevprev_d: &VertexId,
        prev_d: &VertexId,
        closing_d: &VertexId,
        new_did: &VertexId,
    ) -> Result<(), GeneratorError> {
        let r = self
            .sites
            .remove(&key3([hub_d.clone(), prev_d.clone(), closing_d.clone()]))
            .ok_or_else(|| {
                GeneratorError::InvalidGluing(format!(
                    "face {hub_d} {prev_d} {closing_d} is not free for enlarging"
                ))
            })?;
        let p = self.sites[&key3([hub_d.clone(), prevprev_d.clone(), prev_d.clone()])].clone();

        // The face standing for `prev_d` is a triangle p,r,s; find s as the
        // rotation neighbor paired with p around that corner of r.
        let order_r = self.rot.order(&r).to_vec();
        let yi = order_r
            .iter()
            .position(|y| self.corners[&(r.clone(), y.clone())] == *prev_d)
            .expect("one corner of r faces prev_d");
        let y = order_r[yi].clone();
        let y_pred = order_r[(yi + 2) % 3].clone();
        let s = if y == p {
            y_pred
        } else {
            assert_eq!(y_pred, p, "p must bound the prev_d face at r");
            y
        };

        let s_was_deg3 = self.graph.degree(&s) == 3;
        let s_old_triple = s_was_deg3.then(|| self.corner_triple(&s));

        let q = self.fresh();
        subdivide_with_apex(&mut self.graph, &p, &r, &s, &q)
            .expect("enlargement site satisfies the subdivision preconditions");
        let path: [VertexId; 3] = [p.clone(), q.clone(), r.clone()];
        let sense = reconstruct::subdivide_rotation(&mut self.rot, &path, &s);

        let pr = self.corners.remove(&(p.clone(), r.clone())).expect("corner at p");
        let rp = self.corners.remove(&(r.clone(), p.clone())).expect("corner at r");
        match sense {
            TriangleSense::PR => {
                // triangle face traced p -> r -> s
                assert_eq!(pr, *hub_d);
                assert_eq!(rp, *prev_d);
                self.corners.insert((p.clone(), q.clone()), hub_d.clone());
                self.corners.insert((r.clone(), q.clone()), new_did.clone());
                self.corners.insert((s.clone(), r.clone()), new_did.clone());
                self.corners.insert((s.clone(), q.clone()), prev_d.clone());
                self.corners.insert((q.clone(), p.clone()), prev_d.clone());
                self.corners.insert((q.clone(), r.clone()), hub_d.clone());
                self.corners.insert((q.clone(), s.clone()), new_did.clone());
            }
            TriangleSense::RP => {
                // triangle face traced r -> p -> s
                assert_eq!(pr, *prev_d);
                assert_eq!(rp, *hub_d);
                self.corners.insert((p.clone(), q.clone()), prev_d.clone());
                self.corners.insert((r.clone(), q.clone()), hub_d.clone());
                self.corners.insert((r.clone(), s.clone()), new_did.clone());
                self.corners.insert((s.clone(), q.clone()), new_did.clone());
                self.corners.insert((q.clone(), p.clone()), hub_d.clone());
                self.corners.insert((q.clone(), r.clone()), new_did.clone());
                self.corners.insert((q.clone(), s.clone()), prev_d.clone());
            }
        }

        if let Some(triple) = s_old_triple {
            self.sites.remove(&triple);
        }
        self.sites
            .insert(key3([hub_d.clone(), prev_d.clone(), new_did.clone()]), q);
        self.sites
            .insert(key3([hub_d.clone(), new_did.clone(), closing_d.clone()]), r);
        Ok(())
    }

    fn finish(self) -> Graph {
        debug_assert!(self.graph.validate().is_ok());
        self.graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree_multiset(g: &Graph) -> Vec<usize> {
        let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    }

    fn triangle_count(g: &Graph) -> usize {
        let mut count = 0;
        for e in g.edges() {
            let (u, v) = e.endpoints();
            count += g.neighbors(u).filter(|w| g.has_edge(w, v)).count();
        }
        count / 3
    }

    #[test]
    fn wheel_shapes() {
        assert!(matches!(wheel(3), Err(GeneratorError::InvalidSize { .. })));
        let w4 = wheel(4).unwrap();
        assert!(w4.is_k4());
        let w7 = wheel(7).unwrap();
        assert_eq!(w7.vertex_count(), 7);
        assert_eq!(w7.edge_count(), 12);
        assert_eq!(degree_multiset(&w7), vec![3, 3, 3, 3, 3, 3, 6]);
    }

    #[test]
    fn truncated_tetrahedron_shape() {
        let g = truncated_tetrahedron();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 18);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(triangle_count(&g), 4);
        g.validate().unwrap();
    }

    #[test]
    fn expanding_a_k4_vertex_gives_the_prism() {
        let mut g = wheel(4).unwrap();
        let v = vid("h");
        expand_vertex(&mut g, &v, &[vid("x"), vid("y"), vid("z")]).unwrap();
        // 3-regular on 6 vertices with exactly two triangles: that is the
        // triangular prism and nothing else.
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 9);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(triangle_count(&g), 2);
    }

    #[test]
    fn expand_rejects_bad_sites() {
        let mut g = wheel(5).unwrap();
        let hub = vid("h");
        assert!(expand_vertex(&mut g, &hub, &[vid("x"), vid("y"), vid("z")]).is_err());
        let r0 = vid("r0");
        assert!(expand_vertex(&mut g, &r0, &[vid("x"), vid("x"), vid("z")]).is_err());
        assert!(expand_vertex(&mut g, &r0, &[vid("h"), vid("y"), vid("z")]).is_err());
    }

    #[test]
    fn subdividing_a_k4_edge_gives_wheel5() {
        let mut g = wheel(4).unwrap();
        subdivide_with_apex(&mut g, &vid("r0"), &vid("r1"), &vid("h"), &vid("q")).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(degree_multiset(&g), vec![3, 3, 3, 3, 4]);
    }

    #[test]
    fn subdivide_rejects_bad_sites() {
        let mut g = wheel(6).unwrap();
        // hub has degree 5
        assert!(subdivide_with_apex(&mut g, &vid("h"), &vid("r0"), &vid("r1"), &vid("q")).is_err());
        // rim vertices two apart share no edge
        assert!(subdivide_with_apex(&mut g, &vid("r0"), &vid("r2"), &vid("h"), &vid("q")).is_err());
        // stale replacement name
        assert!(subdivide_with_apex(&mut g, &vid("r0"), &vid("r1"), &vid("h"), &vid("r3")).is_err());
    }

    #[test]
    fn plane_tree_profile_shapes() {
        assert!(random_plane_tree(&[], 0).is_err());
        assert!(random_plane_tree(&[3, 2], 0).is_err());

        let star = random_plane_tree(&[5], 9).unwrap();
        assert_eq!(star.vertex_count(), 6);
        assert_eq!(star.leaves().len(), 5);
        let w6 = halin_from_tree(&star);
        assert_eq!(degree_multiset(&w6), degree_multiset(&wheel(6).unwrap()));

        // two internal vertices of degree 3: the tree underlying the prism
        let g = random_halin(&[3, 3], 4).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 9);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(triangle_count(&g), 2);
    }

    #[test]
    fn random_halin_is_deterministic_per_seed() {
        let profile = [3, 4, 3, 5];
        let a = random_halin(&profile, 123).unwrap();
        let b = random_halin(&profile, 123).unwrap();
        assert_eq!(a, b);
        // 1 + 3 + 3 + 2 + 4 vertices
        assert_eq!(a.vertex_count(), 13);
    }

    #[test]
    fn random_d3_reducible_shape_and_determinism() {
        assert!(random_d3_reducible(3, 0, 0.5).is_err());
        assert!(random_d3_reducible(10, 0, 1.5).is_err());
        assert!(random_d3_reducible(4, 7, 0.5).unwrap().is_k4());

        for (n, seed, p) in [(9usize, 1u64, 0.5f64), (20, 2, 0.3), (33, 3, 0.9)] {
            let g = random_d3_reducible(n, seed, p).unwrap();
            assert_eq!(g.vertex_count(), n);
            assert!(g.vertices().all(|v| g.degree(v) >= 3));
            g.validate().unwrap();
            assert_eq!(g, random_d3_reducible(n, seed, p).unwrap());
        }
    }

    #[test]
    fn random_d3_reducible_extremes() {
        // pure subdivisions grow wheels: one fat hub, everything else cubic
        let w = random_d3_reducible(12, 5, 0.0).unwrap();
        let mut degs = degree_multiset(&w);
        assert_eq!(degs.pop(), Some(11));
        assert!(degs.into_iter().all(|d| d == 3));

        // pure expansions keep the graph 3-regular (n - 4 even)
        let c = random_d3_reducible(16, 5, 1.0).unwrap();
        assert!(c.vertices().all(|v| c.degree(v) == 3));
    }

    #[test]
    fn gluing_two_4_wheels_gives_bipyramid_over_prism() {
        let spec = GluingSpec { wheels: vec![4, 4], gluing_tree: vec![(0, 3, 1, 3)] };
        let out = glue_wheels(&spec).unwrap();
        assert_eq!(out.dual.vertex_count(), 5);
        assert_eq!(out.dual.edge_count(), 9);
        assert_eq!(degree_multiset(&out.dual), vec![3, 3, 4, 4, 4]);
        assert_eq!(out.primal.vertex_count(), 6);
        assert_eq!(out.primal.edge_count(), 9);
        assert!(out.primal.vertices().all(|v| out.primal.degree(v) == 3));
        assert_eq!(triangle_count(&out.primal), 2);
    }

    #[test]
    fn gluing_a_single_wheel_dualizes_to_itself() {
        let spec = GluingSpec { wheels: vec![6], gluing_tree: vec![] };
        let out = glue_wheels(&spec).unwrap();
        assert_eq!(degree_multiset(&out.dual), vec![3, 3, 3, 3, 3, 5]);
        // wheels are self-dual
        assert_eq!(degree_multiset(&out.primal), vec![3, 3, 3, 3, 3, 5]);
    }

    #[test]
    fn gluing_spec_validation() {
        let cyclic = GluingSpec {
            wheels: vec![4, 4, 4],
            gluing_tree: vec![(0, 0, 1, 0), (1, 1, 2, 0), (2, 1, 0, 1)],
        };
        assert!(glue_wheels(&cyclic).is_err());

        let reused = GluingSpec {
            wheels: vec![4, 4, 4],
            gluing_tree: vec![(0, 0, 1, 0), (0, 0, 2, 0)],
        };
        assert!(glue_wheels(&reused).is_err());

        let tiny = GluingSpec { wheels: vec![4, 3], gluing_tree: vec![(0, 0, 1, 0)] };
        assert!(glue_wheels(&tiny).is_err());

        let bad_face = GluingSpec { wheels: vec![5, 4], gluing_tree: vec![(0, 4, 1, 0)] };
        assert!(glue_wheels(&bad_face).is_err());

        let empty = GluingSpec { wheels: vec![], gluing_tree: vec![] };
        assert!(glue_wheels(&empty).is_err());
    }

    #[test]
    fn gluing_handles_larger_wheels_and_chains() {
        let spec = GluingSpec {
            wheels: vec![6, 5, 7],
            gluing_tree: vec![(0, 2, 1, 0), (1, 2, 2, 4)],
        };
        let out = glue_wheels(&spec).unwrap();
        // 6 + 5 + 7 vertices minus 3 per gluing
        assert_eq!(out.dual.vertex_count(), 12);
        out.dual.validate().unwrap();
        out.primal.validate().unwrap();
        assert!(out.primal.vertices().all(|v| out.primal.degree(v) >= 3));
    }
}

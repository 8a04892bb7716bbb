//! Undirected simple graphs over string-named vertices.
//!
//! The representation is an adjacency map in insertion order, so iteration
//! (and therefore everything built on top of it, including reduction traces
//! and CLI output) is deterministic for a fixed construction sequence.

use std::fmt;
use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

/// A vertex name: a non-empty token without whitespace.
///
/// Cheap to clone (shared backing storage); ordered lexicographically by
/// token, which fixes every "lexicographic" tie-break in this crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn new(token: &str) -> Result<Self, GraphError> {
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(GraphError::InvalidToken(token.to_string()));
        }
        Ok(VertexId(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl std::str::FromStr for VertexId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexId::new(s)
    }
}

/// An undirected edge stored with its endpoints in canonical (sorted) order,
/// so equal edges compare and hash equal regardless of construction order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    /// Canonicalizes the endpoint order. Panics on a loop: edges between a
    /// vertex and itself never exist in these graphs.
    pub fn new(u: VertexId, v: VertexId) -> Self {
        assert!(u != v, "edge endpoints must differ: {u}");
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn endpoints(&self) -> (&VertexId, &VertexId) {
        (&self.a, &self.b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("invalid vertex token {0:?}")]
    InvalidToken(String),
    #[error("line {line}: expected `u v`, found {found} tokens")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error("{op}: {reason}")]
    Precondition { op: &'static str, reason: String },
}

fn precondition(op: &'static str, reason: String) -> GraphError {
    GraphError::Precondition { op, reason }
}

/// Undirected simple graph: no loops, no parallel edges.
///
/// All single-vertex and single-edge operations are expected O(1). The
/// `fresh_counter` backs [`Graph::peek_fresh_id`]: whenever a vertex named
/// `t<digits>` enters the graph the counter advances past it, so peeking is
/// O(1) and freshly minted supervertex names never collide with anything
/// already present.
#[derive(Clone, Default)]
pub struct Graph {
    adjacency: IndexMap<VertexId, IndexSet<VertexId>>,
    edge_count: usize,
    fresh_counter: u64,
}

impl PartialEq for Graph {
    /// Structural equality: same vertex set, same adjacency. Iteration order
    /// and the fresh-name counter are bookkeeping, not graph identity.
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph({} vertices, {} edges: {:?})",
            self.vertex_count(),
            self.edge_count(),
            self.edges().map(|e| e.to_string()).collect::<Vec<_>>()
        )
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn build_from_edges<I>(pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::new();
        for (u, v) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.adjacency.contains_key(v)
    }

    pub fn has_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        self.adjacency.get(u).is_some_and(|n| n.contains(v))
    }

    /// Degree of `v`, or 0 when `v` is not present.
    pub fn degree(&self, v: &VertexId) -> usize {
        self.adjacency.get(v).map_or(0, IndexSet::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.adjacency.keys()
    }

    pub fn neighbors(&self, v: &VertexId) -> impl Iterator<Item = &VertexId> {
        self.adjacency.get(v).into_iter().flatten()
    }

    /// Each edge once, endpoints canonical.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |v| u < *v)
                .map(move |v| Edge::new(u.clone(), v.clone()))
        })
    }

    /// Inserts an isolated vertex; false if it was already present.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.note_fresh_name(&v);
        // entry() gives no "was new" signal; length tracking is cheaper
        // than a contains() probe followed by an insert.
        let before = self.adjacency.len();
        self.adjacency.entry(v).or_default();
        self.adjacency.len() > before
    }

    /// Adds an edge, inserting missing endpoints.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(&u, &v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.note_fresh_name(&u);
        self.note_fresh_name(&v);
        self.adjacency.entry(u.clone()).or_default().insert(v.clone());
        self.adjacency.entry(v).or_default().insert(u);
        self.edge_count += 1;
        Ok(())
    }

    /// Removes an edge; false if it was not present.
    pub fn remove_edge(&mut self, u: &VertexId, v: &VertexId) -> bool {
        let Some(nu) = self.adjacency.get_mut(u) else {
            return false;
        };
        if !nu.swap_remove(v) {
            return false;
        }
        self.adjacency
            .get_mut(v)
            .expect("adjacency is symmetric")
            .swap_remove(u);
        self.edge_count -= 1;
        true
    }

    /// Removes a vertex and all incident edges; false if absent.
    pub fn remove_vertex(&mut self, v: &VertexId) -> bool {
        let Some(nbrs) = self.adjacency.swap_remove(v) else {
            return false;
        };
        self.edge_count -= nbrs.len();
        for w in nbrs {
            self.adjacency
                .get_mut(&w)
                .expect("adjacency is symmetric")
                .swap_remove(v);
        }
        true
    }

    /// True exactly for the complete graph on four vertices (the unique
    /// simple graph with 4 vertices and 6 edges).
    pub fn is_k4(&self) -> bool {
        self.vertex_count() == 4 && self.edge_count() == 6
    }

    /// Next unused name of the form `t<k>`. Does not mutate; the counter
    /// advances when such a name is actually inserted, so repeated peeks
    /// between insertions return the same name.
    pub fn peek_fresh_id(&self) -> VertexId {
        let mut k = self.fresh_counter;
        loop {
            let candidate = VertexId(Arc::from(format!("t{k}").as_str()));
            if !self.contains_vertex(&candidate) {
                return candidate;
            }
            k += 1;
        }
    }

    fn note_fresh_name(&mut self, v: &VertexId) {
        let token = v.as_str();
        if let Some(rest) = token.strip_prefix('t') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(k) = rest.parse::<u64>() {
                    self.fresh_counter = self.fresh_counter.max(k + 1);
                }
            }
        }
    }

    /// Rule D3a: replace a triangle `p,q,r` of degree-3 vertices by a single
    /// fresh vertex `t` adjacent to their three (pairwise distinct) outside
    /// neighbors. Net effect: 2 fewer vertices, 3 fewer edges (6 removed,
    /// 3 added).
    pub fn contract_triangle(
        &mut self,
        p: &VertexId,
        q: &VertexId,
        r: &VertexId,
        t: &VertexId,
    ) -> Result<(), GraphError> {
        const OP: &str = "contract_triangle";
        let tri = [p, q, r];
        if p == q || q == r || p == r {
            return Err(precondition(OP, format!("vertices {p} {q} {r} are not distinct")));
        }
        if self.contains_vertex(t) {
            return Err(precondition(OP, format!("replacement vertex {t} is not fresh")));
        }
        let mut outside = Vec::with_capacity(3);
        for v in tri {
            if self.degree(v) != 3 {
                return Err(precondition(OP, format!("{v} has degree {}, need 3", self.degree(v))));
            }
            let out: Vec<VertexId> = self
                .neighbors(v)
                .filter(|w| !tri.contains(w))
                .cloned()
                .collect();
            if out.len() != 1 {
                return Err(precondition(OP, format!("{p} {q} {r} do not form a triangle")));
            }
            outside.push(out.into_iter().next().unwrap());
        }
        if outside[0] == outside[1] || outside[1] == outside[2] || outside[0] == outside[2] {
            return Err(precondition(
                OP,
                format!("outside neighbors {} {} {} are not distinct", outside[0], outside[1], outside[2]),
            ));
        }
        for v in tri {
            self.remove_vertex(v);
        }
        self.add_vertex(t.clone());
        for w in outside {
            self.add_edge(t.clone(), w).expect("outside neighbors are distinct and t is fresh");
        }
        Ok(())
    }

    /// Rule D3b: on an induced path `p-q-r` of degree-3 vertices whose apex
    /// `s` is adjacent to all three, delete `q` and add the edge `pr`.
    /// Degrees of `p` and `r` stay 3; `s` loses one.
    pub fn shorten_path(
        &mut self,
        p: &VertexId,
        q: &VertexId,
        r: &VertexId,
        s: &VertexId,
    ) -> Result<(), GraphError> {
        const OP: &str = "shorten_path";
        let all = [p, q, r, s];
        for i in 0..4 {
            for j in i + 1..4 {
                if all[i] == all[j] {
                    return Err(precondition(OP, format!("vertices {p} {q} {r} / apex {s} are not distinct")));
                }
            }
        }
        for v in [p, q, r] {
            if self.degree(v) != 3 {
                return Err(precondition(OP, format!("{v} has degree {}, need 3", self.degree(v))));
            }
        }
        if !self.has_edge(p, q) || !self.has_edge(q, r) {
            return Err(precondition(OP, format!("{p} {q} {r} is not a path")));
        }
        if self.has_edge(p, r) {
            return Err(precondition(OP, format!("path {p} {q} {r} is not induced: edge {p} {r} present")));
        }
        for v in [p, q, r] {
            if !self.has_edge(s, v) {
                return Err(precondition(OP, format!("apex {s} is not adjacent to {v}")));
            }
        }
        self.remove_vertex(q);
        self.add_edge(p.clone(), r.clone()).expect("pr was absent");
        Ok(())
    }

    /// Parses the line-oriented edge list format: one `u v` pair per line,
    /// `#` starts a comment, blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            if tokens.len() != 2 {
                return Err(GraphError::MalformedLine { line, found: tokens.len() });
            }
            let wrap = |e: GraphError| GraphError::Parse { line, source: Box::new(e) };
            let u = VertexId::new(tokens[0]).map_err(wrap)?;
            let v = VertexId::new(tokens[1]).map_err(wrap)?;
            g.add_edge(u, v).map_err(wrap)?;
        }
        Ok(g)
    }

    /// Serializes to the edge list format, one edge per line in lexicographic
    /// canonical order. Isolated vertices are not representable.
    pub fn serialize_edge_list(&self) -> String {
        let mut edges: Vec<Edge> = self.edges().collect();
        edges.sort();
        let mut out = String::new();
        for e in edges {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Full-scan consistency check used by tests: adjacency symmetric, no
    /// loops, edge count matches.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut half_edges = 0usize;
        for (u, nbrs) in &self.adjacency {
            for v in nbrs {
                if u == v {
                    return Err(GraphError::SelfLoop(u.clone()));
                }
                if !self.has_edge(v, u) {
                    return Err(precondition("validate", format!("edge {u} {v} is not symmetric")));
                }
                half_edges += 1;
            }
        }
        if half_edges != 2 * self.edge_count {
            return Err(precondition(
                "validate",
                format!("edge count {} does not match adjacency ({half_edges} half-edges)", self.edge_count),
            ));
        }
        Ok(())
    }
}

/// Shorthand for tests and examples: `vid("a")`.
pub fn vid(token: &str) -> VertexId {
    VertexId::new(token).expect("valid vertex token")
}

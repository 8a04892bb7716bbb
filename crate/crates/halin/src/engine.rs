//! Worklist driver for the two degree-three reductions.
//!
//! The engine dequeues candidate vertices, probes each one for an applicable
//! rule (D3a before D3b), consults hooks that may veto the step, applies it,
//! and re-enqueues the few vertices whose local picture changed. Every
//! applied step is recorded in a trace that the certificate builders can
//! replay backwards.

use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexSet;

use crate::graph::{Graph, VertexId};

/// The two reduction rules.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rule {
    D3a,
    D3b,
}

/// One applied reduction, recorded with everything needed to reverse it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ReductionEvent {
    /// D3a: `triangle` collapsed into the fresh `supervertex`. `outside[i]`
    /// is the one neighbor `triangle[i]` had off the triangle, so after the
    /// step the supervertex is adjacent to exactly the `outside` vertices,
    /// and the pairing tells a replay which outside vertex belonged to which
    /// triangle corner.
    ContractTriangle {
        triangle: [VertexId; 3],
        outside: [VertexId; 3],
        supervertex: VertexId,
    },
    /// D3b: the middle vertex of the induced path `path` was deleted and the
    /// edge `path[0]`–`path[2]` added; `apex` is the common neighbor of all
    /// three path vertices.
    ShortenPath {
        path: [VertexId; 3],
        apex: VertexId,
    },
}

impl ReductionEvent {
    pub fn rule(&self) -> Rule {
        match self {
            ReductionEvent::ContractTriangle { .. } => Rule::D3a,
            ReductionEvent::ShortenPath { .. } => Rule::D3b,
        }
    }

    /// Applies the event to `g`, re-checking the rule preconditions.
    pub fn apply(&self, g: &mut Graph) -> Result<(), crate::graph::GraphError> {
        match self {
            ReductionEvent::ContractTriangle { triangle: [p, q, r], supervertex, .. } => {
                g.contract_triangle(p, q, r, supervertex)
            }
            ReductionEvent::ShortenPath { path: [p, q, r], apex } => g.shorten_path(p, q, r, apex),
        }
    }
}

impl fmt::Display for ReductionEvent {
    /// Trace line format: `D3a p q r -> t` or `D3b p q r apex s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionEvent::ContractTriangle { triangle: [p, q, r], supervertex, .. } => {
                write!(f, "D3a {p} {q} {r} -> {supervertex}")
            }
            ReductionEvent::ShortenPath { path: [p, q, r], apex } => {
                write!(f, "D3b {p} {q} {r} apex {apex}")
            }
        }
    }
}

/// The ordered record of one engine run: the events in application order,
/// plus enough context to sanity-check a replay.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    events: Vec<ReductionEvent>,
    initial_vertex_count: usize,
    final_graph: Graph,
}

impl ReductionTrace {
    pub fn events(&self) -> &[ReductionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn initial_vertex_count(&self) -> usize {
        self.initial_vertex_count
    }

    pub fn final_graph(&self) -> &Graph {
        &self.final_graph
    }
}

/// Counters for the work-bound arguments: a run on an n-vertex graph must
/// see at most n initial insertions plus a constant number per event.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct EngineStats {
    pub enqueued: usize,
    pub dequeued: usize,
    pub contractions: usize,
    pub shortenings: usize,
    pub vetoes: usize,
}

impl EngineStats {
    pub fn events(&self) -> usize {
        self.contractions + self.shortenings
    }
}

/// FIFO of candidate vertices with set-based deduplication. The queue's job
/// is to stay a superset of the interesting vertices: it must hold a
/// triangle vertex of every applicable D3a configuration and the middle
/// vertex of every applicable D3b configuration (endpoints also work, since
/// the probe checks those roles too).
#[derive(Default)]
pub struct CandidateQueue {
    pending: VecDeque<VertexId>,
    membership: IndexSet<VertexId>,
}

impl CandidateQueue {
    pub fn push(&mut self, v: VertexId) -> bool {
        if self.membership.insert(v.clone()) {
            self.pending.push_back(v);
            true
        } else {
            false
        }
    }

    pub fn pop(&mut self) -> Option<VertexId> {
        let v = self.pending.pop_front()?;
        self.membership.swap_remove(&v);
        Some(v)
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }
}

/// Veto/observe callback: sees the graph as it stands *before* the event is
/// applied, returns false to veto. Hooks run in list order and a veto stops
/// the remaining hooks on the list.
pub type Hook<'a> = Box<dyn FnMut(&Graph, &ReductionEvent) -> bool + 'a>;

/// The extension point for all recognizers: veto hooks per rule plus a
/// finalizer that turns the irreducible end graph into the run's verdict.
pub struct HookSet<'a, R> {
    pub triangle_hooks: Vec<Hook<'a>>,
    pub path_hooks: Vec<Hook<'a>>,
    pub finalizer: Box<dyn FnOnce(&Graph) -> R + 'a>,
}

impl<'a, R> HookSet<'a, R> {
    /// A hook set with no vetoes. Reductions run unrestricted.
    pub fn permissive(finalizer: impl FnOnce(&Graph) -> R + 'a) -> Self {
        HookSet {
            triangle_hooks: Vec::new(),
            path_hooks: Vec::new(),
            finalizer: Box::new(finalizer),
        }
    }

    pub fn with_triangle_hook(mut self, hook: impl FnMut(&Graph, &ReductionEvent) -> bool + 'a) -> Self {
        self.triangle_hooks.push(Box::new(hook));
        self
    }

    pub fn with_path_hook(mut self, hook: impl FnMut(&Graph, &ReductionEvent) -> bool + 'a) -> Self {
        self.path_hooks.push(Box::new(hook));
        self
    }
}

/// Everything a finished run produces.
pub struct Reduction<R> {
    pub graph: Graph,
    pub trace: ReductionTrace,
    pub verdict: R,
    pub stats: EngineStats,
}

/// Probes `v` for an applicable reduction, trying D3a first.
///
/// D3a: `v` plus two of its neighbors form a triangle of degree-3 vertices
/// with pairwise distinct outside neighbors. D3b: `v` is the middle vertex,
/// or failing that an endpoint, of an induced degree-3 path under an apex.
/// Only the immediate neighborhood of `v` (and, for the endpoint role, of
/// one neighbor) is inspected, so the probe is constant-time.
pub fn find_reduction_at(g: &Graph, v: &VertexId) -> Option<ReductionEvent> {
    if g.degree(v) != 3 {
        return None;
    }
    let nbrs: Vec<VertexId> = g.neighbors(v).cloned().collect();

    // Triangle role: v with each adjacent pair of its neighbors.
    for i in 0..3 {
        for j in i + 1..3 {
            let (x, y) = (&nbrs[i], &nbrs[j]);
            if g.degree(x) != 3 || g.degree(y) != 3 || !g.has_edge(x, y) {
                continue;
            }
            let triangle = [v.clone(), x.clone(), y.clone()];
            let Some(outside) = outside_partners(g, &triangle) else { continue };
            return Some(ReductionEvent::ContractTriangle {
                triangle,
                outside,
                supervertex: g.peek_fresh_id(),
            });
        }
    }

    // Middle role: each neighbor of v in turn as the apex, the other two as
    // path endpoints.
    for a in 0..3 {
        let apex = &nbrs[a];
        let (p, r) = (&nbrs[(a + 1) % 3], &nbrs[(a + 2) % 3]);
        if path_config_ok(g, p, v, r, apex) {
            return Some(ReductionEvent::ShortenPath {
                path: [p.clone(), v.clone(), r.clone()],
                apex: apex.clone(),
            });
        }
    }

    // Endpoint role: a neighbor q of v as the middle, q's other neighbors
    // split into far endpoint and apex.
    for q in &nbrs {
        if g.degree(q) != 3 {
            continue;
        }
        let others: Vec<VertexId> = g.neighbors(q).filter(|w| *w != v).cloned().collect();
        debug_assert_eq!(others.len(), 2);
        for (r, apex) in [(&others[0], &others[1]), (&others[1], &others[0])] {
            if path_config_ok(g, v, q, r, apex) {
                return Some(ReductionEvent::ShortenPath {
                    path: [v.clone(), q.clone(), r.clone()],
                    apex: apex.clone(),
                });
            }
        }
    }

    None
}

/// The unique neighbor each triangle vertex has off the triangle, if those
/// three are pairwise distinct (the D3a side condition that keeps the graph
/// simple).
fn outside_partners(g: &Graph, triangle: &[VertexId; 3]) -> Option<[VertexId; 3]> {
    let mut outside: Vec<VertexId> = Vec::with_capacity(3);
    for t in triangle {
        let mut out = g.neighbors(t).filter(|w| !triangle.contains(w));
        let first = out.next()?.clone();
        if out.next().is_some() {
            return None; // not actually a triangle of degree-3 vertices
        }
        outside.push(first);
    }
    let [a, b, c] = <[VertexId; 3]>::try_from(outside).expect("three triangle corners");
    if a == b || b == c || a == c {
        return None;
    }
    Some([a, b, c])
}

fn path_config_ok(g: &Graph, p: &VertexId, q: &VertexId, r: &VertexId, apex: &VertexId) -> bool {
    g.degree(p) == 3
        && g.degree(q) == 3
        && g.degree(r) == 3
        && p != r
        && g.has_edge(p, q)
        && g.has_edge(q, r)
        && !g.has_edge(p, r) // induced: no chord
        && apex != p
        && apex != r
        && g.has_edge(apex, p)
        && g.has_edge(apex, q)
        && g.has_edge(apex, r)
}

/// True when no vertex of `g` admits either reduction.
pub fn is_irreducible(g: &Graph) -> bool {
    g.vertices().all(|v| find_reduction_at(g, v).is_none())
}

/// Runs reductions to exhaustion on a private copy of `input`.
///
/// Candidates come off a FIFO seeded with every degree-3 vertex. A dequeued
/// vertex that no longer exists or has the wrong degree is dropped; a vetoed
/// configuration is likewise dropped and retried only if a later event
/// re-enqueues one of its vertices. After each applied event the re-enqueue
/// policy is deliberately a superset of what a minimal analysis needs: every
/// degree-3 vertex at distance at most one from a vertex whose neighborhood
/// changed. That is at most 4 insertions per contraction and 6 per
/// shortening, keeping total queue work linear.
pub fn reduce<R>(input: &Graph, hooks: HookSet<'_, R>) -> Reduction<R> {
    let HookSet { mut triangle_hooks, mut path_hooks, finalizer } = hooks;
    let mut g = input.clone();
    let mut queue = CandidateQueue::default();
    let mut stats = EngineStats::default();
    let mut events = Vec::new();
    let initial_vertex_count = g.vertex_count();

    for v in g.vertices() {
        if g.degree(v) == 3 {
            queue.push(v.clone());
            stats.enqueued += 1;
        }
    }

    while let Some(v) = queue.pop() {
        stats.dequeued += 1;
        if g.degree(&v) != 3 {
            continue; // stale: vertex removed or degree changed since enqueue
        }
        let Some(event) = find_reduction_at(&g, &v) else { continue };

        let hook_list = match event.rule() {
            Rule::D3a => &mut triangle_hooks,
            Rule::D3b => &mut path_hooks,
        };
        if !hook_list.iter_mut().all(|h| h(&g, &event)) {
            stats.vetoes += 1;
            continue;
        }

        event.apply(&mut g).expect("probed configuration satisfies rule preconditions");
        match &event {
            ReductionEvent::ContractTriangle { supervertex, .. } => {
                stats.contractions += 1;
                enqueue_around(&g, supervertex, &mut queue, &mut stats);
            }
            ReductionEvent::ShortenPath { path: [p, _, r], apex } => {
                stats.shortenings += 1;
                for w in [p, r, apex] {
                    enqueue_around(&g, w, &mut queue, &mut stats);
                }
            }
        }
        events.push(event);
    }

    let verdict = finalizer(&g);
    Reduction {
        trace: ReductionTrace {
            events,
            initial_vertex_count,
            final_graph: g.clone(),
        },
        graph: g,
        verdict,
        stats,
    }
}

/// Enqueues `center` and its neighbors, restricted to degree 3.
fn enqueue_around(g: &Graph, center: &VertexId, queue: &mut CandidateQueue, stats: &mut EngineStats) {
    if g.degree(center) != 3 {
        return;
    }
    if queue.push(center.clone()) {
        stats.enqueued += 1;
    }
    for w in g.neighbors(center) {
        if g.degree(w) == 3 && queue.push(w.clone()) {
            stats.enqueued += 1;
        }
    }
}

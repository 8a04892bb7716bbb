//! Recognizers built on the reduction engine.
//!
//! Plain D3-reducibility needs no bookkeeping: run the engine, check the
//! rest is K4. The Halin test threads one invariant through the run — a
//! set of vertices pinned to the outer cycle of any possible Halin drawing
//! — and vetoes exactly the reductions that would contradict it. Wheels
//! and duals of stacked triangulations fall out by forbidding one rule
//! entirely.

use std::cell::RefCell;
use std::rc::Rc;

use indexmap::IndexSet;

use crate::engine::{self, EngineStats, HookSet, ReductionEvent, ReductionTrace};
use crate::graph::{Graph, VertexId};

/// What a recognition run reports: the verdict, the trace that certifies
/// it, engine counters, and — for Halin runs — the final outer-cycle set.
pub struct RecognitionOutcome {
    pub accepted: bool,
    pub trace: ReductionTrace,
    pub halin_state: Option<HalinState>,
    pub stats: EngineStats,
}

/// `accepted` iff the graph reduces to K4 under the two rules.
pub fn is_d3_reducible(g: &Graph) -> RecognitionOutcome {
    let run = engine::reduce(g, HookSet::permissive(Graph::is_k4));
    RecognitionOutcome {
        accepted: run.verdict,
        trace: run.trace,
        halin_state: None,
        stats: run.stats,
    }
}

/// Vertices that must lie on the outer cycle in every Halin drawing of the
/// original graph, maintained across reductions.
///
/// The rules rest on two facts about Halin graphs. A triangle of degree-3
/// vertices is always two cycle leaves plus their common tree parent, so a
/// member already pinned to the cycle must take a leaf role — its outside
/// neighbor is then its cycle neighbor, pinned too — and the contracted
/// fan as a whole sits on the cycle where the leaves were. A shortening's
/// middle vertex is a leaf between two leaves, its apex their shared
/// parent; the apex is therefore interior, and the endpoints are pinned.
#[derive(Clone, Debug, Default)]
pub struct HalinState {
    known_outer: IndexSet<VertexId>,
}

impl HalinState {
    pub fn is_outer(&self, v: &VertexId) -> bool {
        self.known_outer.contains(v)
    }

    pub fn outer_count(&self) -> usize {
        self.known_outer.len()
    }

    pub fn outer(&self) -> impl Iterator<Item = &VertexId> {
        self.known_outer.iter()
    }

    /// Veto when all three members are pinned: then nobody may play the
    /// tree parent. (In an actual Halin graph three pinned vertices are
    /// pairwise adjacent only when the cycle is a triangle, i.e. on K4,
    /// where no reduction fires at all.)
    fn on_triangle(&mut self, ev: &ReductionEvent) -> bool {
        let ReductionEvent::ContractTriangle { triangle, outside, supervertex } = ev else {
            unreachable!("triangle hooks only see contractions");
        };
        let pinned: Vec<bool> = triangle.iter().map(|v| self.known_outer.contains(v)).collect();
        if pinned.iter().all(|&b| b) {
            return false;
        }
        for (i, x) in outside.iter().enumerate() {
            if pinned[i] {
                self.known_outer.insert(x.clone());
            }
        }
        for v in triangle {
            self.known_outer.swap_remove(v);
        }
        self.known_outer.insert(supervertex.clone());
        true
    }

    /// Veto when the apex is pinned: a cycle leaf has no tree children.
    /// Otherwise the endpoints take the removed leaf's place on the cycle.
    /// When this step lands exactly on K4 the apex is the only vertex left
    /// that can anchor the tree, so the uninvolved bystander gets pinned
    /// as well.
    fn on_path(&mut self, g: &Graph, ev: &ReductionEvent) -> bool {
        let ReductionEvent::ShortenPath { path, apex } = ev else {
            unreachable!("path hooks only see shortenings");
        };
        if self.known_outer.contains(apex) {
            return false;
        }
        let [p, q, r] = path;
        self.known_outer.swap_remove(q);
        self.known_outer.insert(p.clone());
        self.known_outer.insert(r.clone());
        if g.vertex_count() == 5 && g.edge_count() == 8 {
            let bystander = g
                .vertices()
                .find(|v| *v != p && *v != q && *v != r && *v != apex)
                .expect("five vertices leave one uninvolved")
                .clone();
            self.known_outer.insert(bystander);
        }
        true
    }
}

/// `accepted` iff the graph is Halin: a plane tree without degree-2
/// vertices plus a cycle through its leaves. The outcome carries the
/// outer-cycle state for certificate reconstruction.
pub fn is_halin(g: &Graph) -> RecognitionOutcome {
    let state = Rc::new(RefCell::new(HalinState::default()));
    let tri = Rc::clone(&state);
    let pat = Rc::clone(&state);
    let fin = Rc::clone(&state);
    let hooks = HookSet::permissive(move |end: &Graph| {
        // some vertex must be free to anchor the tree interior
        end.is_k4() && end.vertices().any(|v| !fin.borrow().is_outer(v))
    })
    .with_triangle_hook(move |_: &Graph, ev: &ReductionEvent| tri.borrow_mut().on_triangle(ev))
    .with_path_hook(move |g: &Graph, ev: &ReductionEvent| pat.borrow_mut().on_path(g, ev));
    let run = engine::reduce(g, hooks);
    let state = Rc::try_unwrap(state)
        .expect("the engine drops all hooks before returning")
        .into_inner();
    RecognitionOutcome {
        accepted: run.verdict,
        trace: run.trace,
        halin_state: Some(state),
        stats: run.stats,
    }
}

/// `accepted` iff the graph is a wheel. A reduction using shortenings only
/// reverses to a chain of rim subdivisions starting from K4, which grows
/// exactly the wheels — so contractions are banned outright.
pub fn is_wheel(g: &Graph) -> RecognitionOutcome {
    let hooks = HookSet::permissive(Graph::is_k4)
        .with_triangle_hook(|_: &Graph, _: &ReductionEvent| false);
    let run = engine::reduce(g, hooks);
    RecognitionOutcome {
        accepted: run.verdict,
        trace: run.trace,
        halin_state: None,
        stats: run.stats,
    }
}

/// `accepted` iff the graph is the dual of a stacked triangulation (a
/// plane triangulation built from a triangle by repeatedly placing a new
/// vertex inside a face). Stacking a face corresponds exactly to expanding
/// a dual vertex into a triangle, so these duals are the graphs that reach
/// K4 by contractions alone.
pub fn is_dual_planar_3tree(g: &Graph) -> RecognitionOutcome {
    let hooks = HookSet::permissive(Graph::is_k4)
        .with_path_hook(|_: &Graph, _: &ReductionEvent| false);
    let run = engine::reduce(g, hooks);
    RecognitionOutcome {
        accepted: run.verdict,
        trace: run.trace,
        halin_state: None,
        stats: run.stats,
    }
}

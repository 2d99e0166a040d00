//! Structural analysis of signed graphs: bridges and small edge cuts,
//! flow-admissibility, signed circuits, the two-edge-cut reduction and its
//! inverse flow recombination, suppression of degree-2 vertices, oddness and
//! cyclic edge connectivity.
//!
//! Everything here is exhaustive and deterministic. Cut enumeration scans
//! vertex bipartitions, so it is exponential in n by design; the intended
//! inputs are desk scale (n up to about 20).

use crate::flow::{Flow, HalfDir};
use crate::graph::{EndSlot, Sign, SignedGraph};
use crate::{matching, EdgeId, Error, Result, VertexId};

/// Edges whose removal increases the number of components. Loops and members
/// of parallel bundles are never bridges. Ascending id order.
pub fn bridges(g: &SignedGraph) -> Vec<EdgeId> {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut out = Vec::new();

    struct Frame {
        v: VertexId,
        entering: Option<EdgeId>,
        idx: usize,
    }

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut stack = vec![Frame {
            v: root,
            entering: None,
            idx: 0,
        }];
        while let Some(top) = stack.last_mut() {
            let v = top.v;
            if top.idx < g.degree(v) {
                let (e, slot) = g.incidences(v)[top.idx];
                top.idx += 1;
                if g.is_loop(e) || top.entering == Some(e) {
                    continue;
                }
                let w = g.endpoint(e, slot.other());
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push(Frame {
                        v: w,
                        entering: Some(e),
                        idx: 0,
                    });
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                let entering = top.entering;
                stack.pop();
                if let (Some(e), Some(parent)) = (entering, stack.last()) {
                    let p = parent.v;
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        out.push(e);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_bridgeless(g: &SignedGraph) -> bool {
    bridges(g).is_empty()
}

/// No cut of one or two edges: connected, bridgeless, and removing any
/// single edge leaves a bridgeless graph.
pub fn is_three_edge_connected(g: &SignedGraph) -> bool {
    if !g.is_connected() || !bridges(g).is_empty() {
        return false;
    }
    for e in 0..g.m() {
        if g.is_loop(e) {
            continue;
        }
        let (h, _) = g.delete_edges(&[e]);
        if !bridges(&h).is_empty() {
            return false;
        }
    }
    true
}

/// A minimal edge cut together with the bipartition realizing it. The sides
/// are the two components left by removing the cut; `side_a` holds the least
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSet {
    pub edges: Vec<EdgeId>,
    pub side_a: Vec<VertexId>,
    pub side_b: Vec<VertexId>,
}

impl CutSet {
    /// Which side a non-crossing edge lives in: true for side_a. Crossing
    /// edges (cut members) return None.
    pub fn side_of_edge(&self, g: &SignedGraph, e: EdgeId) -> Option<bool> {
        let (u, v) = g.endpoints(e);
        let ua = self.side_a.binary_search(&u).is_ok();
        let va = self.side_a.binary_search(&v).is_ok();
        if ua == va {
            Some(ua)
        } else {
            None
        }
    }
}

fn side_is_connected(g: &SignedGraph, member: &[bool]) -> bool {
    let Some(start) = (0..g.n()).find(|&v| member[v]) else {
        return false;
    };
    let total = member.iter().filter(|&&b| b).count();
    let mut seen = vec![false; g.n()];
    let mut queue = std::collections::VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &(e, slot) in g.incidences(v) {
            let w = g.endpoint(e, slot.other());
            if member[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == total
}

/// All minimal edge cuts of exactly the given size (1 to 3), by exhaustive
/// bipartition search: a cut is minimal precisely when both sides induce
/// connected subgraphs. Output sorted lexicographically by edge ids.
pub fn enumerate_cuts(g: &SignedGraph, size: usize) -> Result<Vec<CutSet>> {
    if !(1..=3).contains(&size) {
        return Err(Error::pre(format!("cut size {size} not in 1..=3")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "cut enumeration needs a connected graph".to_string(),
        ));
    }
    let n = g.n();
    if n < 2 {
        return Ok(Vec::new());
    }
    if n > 26 {
        return Err(Error::pre(format!(
            "exhaustive cut enumeration supports up to 26 vertices, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut in_b = vec![false; n];
    // vertex 0 stays in side_a, so each bipartition appears once
    for mask in 1u64..(1u64 << (n - 1)) {
        for (v, slot) in in_b.iter_mut().enumerate().skip(1) {
            *slot = (mask >> (v - 1)) & 1 == 1;
        }
        let mut crossing = Vec::new();
        for e in 0..g.m() {
            let (u, v) = g.endpoints(e);
            if in_b[u] != in_b[v] {
                crossing.push(e);
                if crossing.len() > size {
                    break;
                }
            }
        }
        if crossing.len() != size {
            continue;
        }
        let in_a: Vec<bool> = in_b.iter().map(|&b| !b).collect();
        if !side_is_connected(g, &in_a) || !side_is_connected(g, &in_b) {
            continue;
        }
        out.push(CutSet {
            edges: crossing,
            side_a: (0..n).filter(|&v| !in_b[v]).collect(),
            side_b: (0..n).filter(|&v| in_b[v]).collect(),
        });
    }
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(out)
}

/// Complete list of minimal 2-cuts without scanning bipartitions: {e,f} is a
/// minimal 2-cut exactly when f is a bridge of G-e. Same content and order
/// as `enumerate_cuts(g, 2)`, much faster, for use inside recursions.
pub fn minimal_two_cuts(g: &SignedGraph) -> Result<Vec<CutSet>> {
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "cut enumeration needs a connected graph".to_string(),
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for e in 0..g.m() {
        if g.is_loop(e) {
            continue;
        }
        let (h, map) = g.delete_edges(&[e]);
        for f_new in bridges(&h) {
            let f = map[f_new];
            let mut pair = [e, f];
            pair.sort_unstable();
            if !seen.insert(pair) {
                continue;
            }
            let (rest, _) = g.delete_edges(&pair);
            let comps = rest.components();
            if comps.len() != 2 {
                continue;
            }
            let in_b: Vec<bool> = {
                let mut b = vec![false; g.n()];
                for &v in &comps[1] {
                    b[v] = true;
                }
                b
            };
            let crosses = |id: EdgeId| {
                let (u, v) = g.endpoints(id);
                in_b[u] != in_b[v]
            };
            if crosses(pair[0]) && crosses(pair[1]) {
                out.push(CutSet {
                    edges: pair.to_vec(),
                    side_a: comps[0].clone(),
                    side_b: comps[1].clone(),
                });
            }
        }
    }
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(out)
}

/// Least edge h (not e or f) such that {e, f, h} is an edge cut, if any.
/// Detects every 3-cut containing both given edges, including the star cut
/// of a shared endpoint.
pub fn three_cut_completing(g: &SignedGraph, e: EdgeId, f: EdgeId) -> Option<EdgeId> {
    (0..g.m()).find(|&h| h != e && h != f && g.is_edge_cut(&[e, f, h]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    NotAdmissible(InadmissibleReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InadmissibleReason {
    /// An unbalanced component turns balanced by flipping this one edge, so
    /// the component is equivalent to a single negative edge; that edge lies
    /// in no signed circuit.
    OneFlipFromBalanced { edge: EdgeId },
    /// Removing this bridge leaves a balanced piece, which cannot absorb the
    /// flow the bridge would have to carry.
    BridgeGuardsBalancedSide { bridge: EdgeId },
}

impl std::fmt::Display for InadmissibleReason {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InadmissibleReason::OneFlipFromBalanced { edge } => write!(
                out,
                "component is switching-equivalent to a single negative edge (flip edge {edge})"
            ),
            InadmissibleReason::BridgeGuardsBalancedSide { bridge } => {
                write!(out, "bridge {bridge} has a balanced side")
            }
        }
    }
}

/// Can any nowhere-zero integer flow exist? Checked per component (edgeless
/// components are ignored): a component fails if it is unbalanced but one
/// sign flip from balanced, or if some bridge has a balanced side. Balanced
/// components therefore fail exactly when they have a bridge.
pub fn admissibility(g: &SignedGraph) -> Admissibility {
    for comp in g.components() {
        let sub = g.induced(&comp).expect("component vertices are in range");
        if sub.graph.m() == 0 {
            continue;
        }
        if !sub.graph.is_balanced() {
            if let Some(Some(e)) = sub.graph.equivalent_to_at_most_one_negative() {
                return Admissibility::NotAdmissible(InadmissibleReason::OneFlipFromBalanced {
                    edge: sub.edges[e],
                });
            }
        }
        for b in bridges(&sub.graph) {
            let (rest, _) = sub.graph.delete_edges(&[b]);
            for piece in rest.components() {
                let piece_graph = sub.graph.induced(&piece).expect("in range").graph;
                if piece_graph.is_balanced() {
                    return Admissibility::NotAdmissible(
                        InadmissibleReason::BridgeGuardsBalancedSide {
                            bridge: sub.edges[b],
                        },
                    );
                }
            }
        }
    }
    Admissibility::Admissible
}

pub fn is_flow_admissible(g: &SignedGraph) -> bool {
    admissibility(g) == Admissibility::Admissible
}

/// How the two negative edges sit relative to small cuts. Input must have
/// exactly two negative edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCutReport {
    pub negatives: [EdgeId; 2],
    /// The negative pair is itself an edge cut; flow numbers then agree with
    /// the all-positive signature.
    pub negatives_form_cut: bool,
    /// Least third edge completing a 3-edge-cut with both negatives; its
    /// existence rules out flow-admissibility.
    pub shared_three_cut_edge: Option<EdgeId>,
    /// A minimal 2-cut containing exactly one negative edge, if any.
    pub mixed_two_cut: Option<CutSet>,
    /// An all-positive minimal 2-cut with one negative edge on each side.
    pub separating_positive_two_cut: Option<CutSet>,
}

pub fn negative_edges_in_small_cut(g: &SignedGraph) -> Result<NegativeCutReport> {
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre(format!(
            "diagnostics need exactly two negative edges, got {}",
            negs.len()
        )));
    };
    let two_cuts = minimal_two_cuts(g)?;
    let is_neg = |e: EdgeId| e == n1 || e == n2;
    let mixed_two_cut = two_cuts
        .iter()
        .find(|c| c.edges.iter().filter(|&&e| is_neg(e)).count() == 1)
        .cloned();
    let separating_positive_two_cut = two_cuts
        .iter()
        .find(|c| {
            c.edges.iter().all(|&e| !is_neg(e))
                && match (c.side_of_edge(g, n1), c.side_of_edge(g, n2)) {
                    (Some(a), Some(b)) => a != b,
                    _ => false,
                }
        })
        .cloned();
    Ok(NegativeCutReport {
        negatives: [n1, n2],
        negatives_form_cut: g.is_edge_cut(&[n1, n2]),
        shared_three_cut_edge: three_cut_completing(g, n1, n2),
        mixed_two_cut,
        separating_positive_two_cut,
    })
}

/// A circuit in the signed sense: either a cycle with an even number of
/// negative edges, or two unbalanced cycles tied together (sharing a single
/// vertex, or vertex-disjoint and joined by a path).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignedCircuit {
    BalancedCycle {
        edges: Vec<EdgeId>,
    },
    Barbell {
        cycle_a: Vec<EdgeId>,
        cycle_b: Vec<EdgeId>,
        path: Vec<EdgeId>,
    },
}

impl SignedCircuit {
    pub fn edges(&self) -> Vec<EdgeId> {
        match self {
            SignedCircuit::BalancedCycle { edges } => edges.clone(),
            SignedCircuit::Barbell {
                cycle_a,
                cycle_b,
                path,
            } => {
                let mut all = cycle_a.clone();
                all.extend_from_slice(cycle_b);
                all.extend_from_slice(path);
                all
            }
        }
    }
}

struct Cycle {
    edges: Vec<EdgeId>,
    on_vertex: Vec<bool>,
    on_edge: Vec<bool>,
    negatives: usize,
}

/// Every simple cycle, including loops and digons, each exactly once.
/// Enumerated by ascending minimum vertex, then DFS by ascending edge id.
fn simple_cycles(g: &SignedGraph) -> Vec<Cycle> {
    let mut out = Vec::new();
    let record = |out: &mut Vec<Cycle>, edges: &[EdgeId]| {
        let mut on_vertex = vec![false; g.n()];
        let mut on_edge = vec![false; g.m()];
        let mut negatives = 0;
        for &e in edges {
            on_edge[e] = true;
            let (u, v) = g.endpoints(e);
            on_vertex[u] = true;
            on_vertex[v] = true;
            if g.sign(e).is_negative() {
                negatives += 1;
            }
        }
        out.push(Cycle {
            edges: edges.to_vec(),
            on_vertex,
            on_edge,
            negatives,
        });
    };

    // a local recursive walker; bundling its state would only obscure it
    #[allow(clippy::too_many_arguments)]
    fn extend(
        g: &SignedGraph,
        s: VertexId,
        cur: VertexId,
        visited: &mut Vec<bool>,
        used: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
        record: &impl Fn(&mut Vec<Cycle>, &[EdgeId]),
        out: &mut Vec<Cycle>,
    ) {
        for &(e, slot) in g.incidences(cur) {
            if used[e] || g.is_loop(e) {
                continue;
            }
            let w = g.endpoint(e, slot.other());
            if w == s {
                if !path.is_empty() && path[0] < e {
                    path.push(e);
                    record(out, path);
                    path.pop();
                }
            } else if w > s && !visited[w] {
                visited[w] = true;
                used[e] = true;
                path.push(e);
                extend(g, s, w, visited, used, path, record, out);
                path.pop();
                used[e] = false;
                visited[w] = false;
            }
        }
    }

    for s in 0..g.n() {
        for &(e, slot) in g.incidences(s) {
            if g.is_loop(e) && slot == EndSlot::First {
                record(&mut out, &[e]);
            }
        }
        let mut visited = vec![false; g.n()];
        let mut used = vec![false; g.m()];
        let mut path = Vec::new();
        visited[s] = true;
        extend(
            g,
            s,
            s,
            &mut visited,
            &mut used,
            &mut path,
            &record,
            &mut out,
        );
    }
    out
}

/// Exhaustive search for a signed circuit through the given edge. Balanced
/// cycles are tried first, then barbells with the edge on a cycle, then
/// barbells with the edge on the connecting path.
pub fn find_signed_circuit_through(g: &SignedGraph, e: EdgeId) -> Result<Option<SignedCircuit>> {
    if e >= g.m() {
        return Err(Error::pre(format!("edge {e} out of range")));
    }
    let cycles = simple_cycles(g);
    for c in &cycles {
        if c.on_edge[e] && c.negatives % 2 == 0 {
            return Ok(Some(SignedCircuit::BalancedCycle {
                edges: c.edges.clone(),
            }));
        }
    }
    let unbalanced: Vec<&Cycle> = cycles.iter().filter(|c| c.negatives % 2 == 1).collect();

    let edge_disjoint = |a: &Cycle, b: &Cycle| a.edges.iter().all(|&x| !b.on_edge[x]);
    let shared_vertices = |a: &Cycle, b: &Cycle| {
        (0..g.n())
            .filter(|&v| a.on_vertex[v] && b.on_vertex[v])
            .count()
    };

    // the edge lies on one of the two unbalanced cycles
    for ca in &unbalanced {
        if !ca.on_edge[e] {
            continue;
        }
        for cb in &unbalanced {
            if std::ptr::eq(*ca, *cb) || !edge_disjoint(ca, cb) {
                continue;
            }
            match shared_vertices(ca, cb) {
                1 => {
                    return Ok(Some(SignedCircuit::Barbell {
                        cycle_a: ca.edges.clone(),
                        cycle_b: cb.edges.clone(),
                        path: Vec::new(),
                    }))
                }
                0 => {
                    if let Some(path) = connecting_path(g, ca, cb) {
                        return Ok(Some(SignedCircuit::Barbell {
                            cycle_a: ca.edges.clone(),
                            cycle_b: cb.edges.clone(),
                            path,
                        }));
                    }
                }
                _ => {}
            }
        }
    }

    // the edge lies on the path between two vertex-disjoint unbalanced cycles
    for (i, ca) in unbalanced.iter().enumerate() {
        if ca.on_edge[e] {
            continue;
        }
        for cb in unbalanced.iter().skip(i + 1) {
            if cb.on_edge[e] || !edge_disjoint(ca, cb) || shared_vertices(ca, cb) != 0 {
                continue;
            }
            if let Some(path) = path_between_through(g, ca, cb, e) {
                return Ok(Some(SignedCircuit::Barbell {
                    cycle_a: ca.edges.clone(),
                    cycle_b: cb.edges.clone(),
                    path,
                }));
            }
        }
    }
    Ok(None)
}

/// BFS path from a vertex of `ca` to a vertex of `cb` whose interior avoids
/// both cycles. Assumes the cycles are vertex-disjoint.
fn connecting_path(g: &SignedGraph, ca: &Cycle, cb: &Cycle) -> Option<Vec<EdgeId>> {
    let n = g.n();
    let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for (v, &on) in ca.on_vertex.iter().enumerate() {
        if on {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(e, slot) in g.incidences(v) {
            if ca.on_edge[e] || cb.on_edge[e] {
                continue;
            }
            let w = g.endpoint(e, slot.other());
            if seen[w] || ca.on_vertex[w] {
                continue;
            }
            if cb.on_vertex[w] {
                let mut path = vec![e];
                let mut cur = v;
                while let Some((pe, pv)) = parent[cur] {
                    path.push(pe);
                    cur = pv;
                }
                path.reverse();
                return Some(path);
            }
            seen[w] = true;
            parent[w] = Some((e, v));
            queue.push_back(w);
        }
    }
    None
}

/// Exhaustive DFS for a simple path from `ca` to `cb` that uses the edge
/// `must`, interior disjoint from both cycles.
fn path_between_through(
    g: &SignedGraph,
    ca: &Cycle,
    cb: &Cycle,
    must: EdgeId,
) -> Option<Vec<EdgeId>> {
    fn dfs(
        g: &SignedGraph,
        cur: VertexId,
        ca: &Cycle,
        cb: &Cycle,
        must: EdgeId,
        visited: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
    ) -> bool {
        for &(e, slot) in g.incidences(cur) {
            if g.is_loop(e) || ca.on_edge[e] || cb.on_edge[e] || path.contains(&e) {
                continue;
            }
            let w = g.endpoint(e, slot.other());
            if cb.on_vertex[w] {
                if path.contains(&must) || e == must {
                    path.push(e);
                    return true;
                }
                continue;
            }
            if ca.on_vertex[w] || visited[w] {
                continue;
            }
            visited[w] = true;
            path.push(e);
            if dfs(g, w, ca, cb, must, visited, path) {
                return true;
            }
            path.pop();
            visited[w] = false;
        }
        false
    }

    let starts: Vec<VertexId> = (0..g.n()).filter(|&v| ca.on_vertex[v]).collect();
    for s in starts {
        let mut visited = vec![false; g.n()];
        let mut path = Vec::new();
        if dfs(g, s, ca, cb, must, &mut visited, &mut path) {
            return Some(path);
        }
    }
    None
}

/// Outcome of replacing a minimal 2-cut {uv, xy} by local edges: the side
/// holding the negative edges gains ux with the sign of xy, the all-positive
/// side gains a positive vy. Vertex and edge id maps go from the new graphs
/// back to the original; `None` marks the added edge. The added edge is
/// always last, with the slot order (u, x) and (v, y).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub original: SignedGraph,
    pub g1: SignedGraph,
    pub g2: SignedGraph,
    pub g1_vertices: Vec<VertexId>,
    pub g2_vertices: Vec<VertexId>,
    pub g1_edges: Vec<Option<EdgeId>>,
    pub g2_edges: Vec<Option<EdgeId>>,
    pub new_edge_g1: EdgeId,
    pub new_edge_g2: EdgeId,
    /// Original ids: cut[0] is uv (positive), cut[1] is xy.
    pub cut: [EdgeId; 2],
    pub u: VertexId,
    pub v: VertexId,
    pub x: VertexId,
    pub y: VertexId,
}

/// Split a connected graph at a minimal 2-cut. The cut edges are relabeled
/// so that uv is positive (when both are, uv is the smaller id; two negative
/// cut edges are rejected). The side that keeps the negative edges becomes
/// g1. When neither side has a negative edge, the side holding the smaller
/// endpoint of a negative cut edge becomes g1; with no negatives anywhere,
/// g1 is the side away from the highest-numbered cut endpoint.
pub fn reduce_two_cut(g: &SignedGraph, cut_edges: [EdgeId; 2]) -> Result<Reduction> {
    let [e, f] = cut_edges;
    if e == f || e >= g.m() || f >= g.m() {
        return Err(Error::pre(format!("invalid cut pair ({e},{f})")));
    }
    if g.is_loop(e) || g.is_loop(f) {
        return Err(Error::pre("loops cannot be cut edges".to_string()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "reduction needs a connected graph".to_string(),
        ));
    }
    let (rest, _) = g.delete_edges(&[e, f]);
    let comps = rest.components();
    if comps.len() != 2 {
        return Err(Error::pre(format!(
            "edges {e},{f} do not split the graph into two pieces"
        )));
    }
    let mut in_second = vec![false; g.n()];
    for &v in &comps[1] {
        in_second[v] = true;
    }
    for &c in &[e, f] {
        let (a, b) = g.endpoints(c);
        if in_second[a] == in_second[b] {
            return Err(Error::pre(format!(
                "{} does not cross the cut",
                g.describe_edge(c)
            )));
        }
    }

    // name the cut edges: uv must be positive
    let (uv, xy) = match (g.sign(e).is_negative(), g.sign(f).is_negative()) {
        (true, true) => {
            return Err(Error::pre(
                "both cut edges negative; switch the signature first".to_string(),
            ))
        }
        (false, true) => (e, f),
        (true, false) => (f, e),
        (false, false) => (e.min(f), e.max(f)),
    };

    // pick the g1 side: it keeps every non-cut negative edge
    let side_negatives: Vec<EdgeId> = g
        .negative_edges()
        .into_iter()
        .filter(|&x| x != uv && x != xy)
        .collect();
    let g1_is_second: bool = if !side_negatives.is_empty() {
        let first = side_negatives[0];
        let (a, b) = g.endpoints(first);
        if in_second[a] != in_second[b] {
            return Err(Error::invariant(format!(
                "negative {} crosses the cut without being part of it",
                g.describe_edge(first)
            )));
        }
        let want = in_second[a];
        for &x in &side_negatives[1..] {
            let (p, q) = g.endpoints(x);
            if in_second[p] != want || in_second[q] != want {
                return Err(Error::pre(
                    "negative edges on both sides of the cut; neither side is all-positive"
                        .to_string(),
                ));
            }
        }
        want
    } else if g.sign(xy).is_negative() {
        // only the cut edge is negative: g1 takes its smaller endpoint
        let (a, b) = g.endpoints(xy);
        in_second[a.min(b)]
    } else {
        // no negatives at all: g2 takes the highest-numbered cut endpoint
        let (a, b) = g.endpoints(uv);
        let (c, d) = g.endpoints(xy);
        let top = a.max(b).max(c).max(d);
        !in_second[top]
    };

    let pick = |edge: EdgeId, want_g1: bool| -> VertexId {
        let (a, b) = g.endpoints(edge);
        if (in_second[a] == g1_is_second) == want_g1 {
            a
        } else {
            b
        }
    };
    let u = pick(uv, true);
    let v = pick(uv, false);
    let x = pick(xy, true);
    let y = pick(xy, false);

    let side1: Vec<VertexId> = (0..g.n())
        .filter(|&w| in_second[w] == g1_is_second)
        .collect();
    let side2: Vec<VertexId> = (0..g.n())
        .filter(|&w| in_second[w] != g1_is_second)
        .collect();
    let ind1 = g.induced(&side1)?;
    let ind2 = g.induced(&side2)?;

    let mut g1 = ind1.graph.clone();
    let new_edge_g1 = g1.add_edge(
        ind1.new_vertex(u).expect("u is on side 1"),
        ind1.new_vertex(x).expect("x is on side 1"),
        g.sign(xy),
    )?;
    let mut g2 = ind2.graph.clone();
    let new_edge_g2 = g2.add_edge(
        ind2.new_vertex(v).expect("v is on side 2"),
        ind2.new_vertex(y).expect("y is on side 2"),
        Sign::Positive,
    )?;

    let mut g1_edges: Vec<Option<EdgeId>> = ind1.edges.iter().map(|&x| Some(x)).collect();
    g1_edges.push(None);
    let mut g2_edges: Vec<Option<EdgeId>> = ind2.edges.iter().map(|&x| Some(x)).collect();
    g2_edges.push(None);

    if g1.negative_edges().len() != g.negative_edges().len() {
        return Err(Error::invariant(
            "reduction changed the number of negative edges".to_string(),
        ));
    }
    if !g2.is_all_positive() {
        return Err(Error::invariant(
            "reduced g2 is not all-positive".to_string(),
        ));
    }

    Ok(Reduction {
        original: g.clone(),
        g1,
        g2,
        g1_vertices: ind1.vertices,
        g2_vertices: ind2.vertices,
        g1_edges,
        g2_edges,
        new_edge_g1,
        new_edge_g2,
        cut: [uv, xy],
        u,
        v,
        x,
        y,
    })
}

fn slot_of(g: &SignedGraph, e: EdgeId, vertex: VertexId) -> EndSlot {
    if g.edge(e).u == vertex {
        EndSlot::First
    } else {
        EndSlot::Second
    }
}

/// Merge flows on the two reduction pieces back onto the original graph.
/// Requires the boundary convention of the splitting construction: ux points
/// out of u, vy points into v, and both carry the same value. The combined
/// flow keeps every old edge's value, gives uv that common value directed
/// u to v, and stitches xy from the x-end of ux and the y-end of vy.
pub fn recombine_flows(r: &Reduction, f1: &Flow, f2: &Flow) -> Result<Flow> {
    if f1.k != f2.k || f1.arithmetic != f2.arithmetic {
        return Err(Error::pre("flows disagree on k or arithmetic".to_string()));
    }
    if f1.values.len() != r.g1.m() || f2.values.len() != r.g2.m() {
        return Err(Error::pre(
            "flow sizes do not match the reduction pieces".to_string(),
        ));
    }
    if f1.orientation.dir(r.new_edge_g1, EndSlot::First) != HalfDir::Out {
        return Err(Error::pre("ux must point out of u".to_string()));
    }
    if f2.orientation.dir(r.new_edge_g2, EndSlot::First) != HalfDir::In {
        return Err(Error::pre("vy must point into v".to_string()));
    }
    let beta = f1.value(r.new_edge_g1);
    if beta != f2.value(r.new_edge_g2) {
        return Err(Error::pre(format!(
            "boundary values differ: {} vs {}",
            beta,
            f2.value(r.new_edge_g2)
        )));
    }

    let g = &r.original;
    let mut dirs = vec![(HalfDir::In, HalfDir::Out); g.m()];
    let mut values = vec![0i64; g.m()];
    for (new_id, old) in r.g1_edges.iter().enumerate() {
        if let Some(old_id) = *old {
            dirs[old_id] = f1.orientation.dirs(new_id);
            values[old_id] = f1.value(new_id);
        }
    }
    for (new_id, old) in r.g2_edges.iter().enumerate() {
        if let Some(old_id) = *old {
            dirs[old_id] = f2.orientation.dirs(new_id);
            values[old_id] = f2.value(new_id);
        }
    }
    let [uv, xy] = r.cut;
    let su = slot_of(g, uv, r.u);
    dirs[uv] = match su {
        EndSlot::First => (HalfDir::Out, HalfDir::In),
        EndSlot::Second => (HalfDir::In, HalfDir::Out),
    };
    values[uv] = beta;
    let sx = slot_of(g, xy, r.x);
    let dx = f1.orientation.dir(r.new_edge_g1, EndSlot::Second);
    let dy = f2.orientation.dir(r.new_edge_g2, EndSlot::Second);
    dirs[xy] = match sx {
        EndSlot::First => (dx, dy),
        EndSlot::Second => (dy, dx),
    };
    values[xy] = beta;

    let combined = Flow {
        orientation: crate::flow::Orientation::from_dirs(dirs),
        values,
        k: f1.k,
        arithmetic: f1.arithmetic,
    };
    combined
        .verify(g)
        .map_err(|err| Error::invariant(format!("recombined flow fails verification: {err}")))?;
    Ok(combined)
}

/// Recombination with automatic normalization: re-represents the boundary
/// edges to meet the orientation convention, then negates the second flow
/// wholesale if the boundary values have opposite signs. Fails only when the
/// boundary magnitudes genuinely differ.
pub fn recombine_matched(r: &Reduction, f1: &Flow, f2: &Flow) -> Result<Flow> {
    let a = if f1.orientation.dir(r.new_edge_g1, EndSlot::First) == HalfDir::In {
        f1.with_edge_reversed(r.new_edge_g1)
    } else {
        f1.clone()
    };
    let b = if f2.orientation.dir(r.new_edge_g2, EndSlot::First) == HalfDir::Out {
        f2.with_edge_reversed(r.new_edge_g2)
    } else {
        f2.clone()
    };
    let beta1 = a.value(r.new_edge_g1);
    let beta2 = b.value(r.new_edge_g2);
    if beta1 == beta2 {
        recombine_flows(r, &a, &b)
    } else {
        let b_neg = b.negated();
        if beta1 == b_neg.value(r.new_edge_g2) {
            recombine_flows(r, &a, &b_neg)
        } else {
            Err(Error::pre(format!(
                "boundary magnitudes differ: |{beta1}| vs |{beta2}|"
            )))
        }
    }
}

/// One maximal chain of edges through degree-2 vertices, recorded in walk
/// order from the first-slot end of the replacement edge to its second-slot
/// end. Untouched edges appear as chains of length one.
#[derive(Debug, Clone)]
pub struct SuppressedPath {
    pub edges: Vec<EdgeId>,
    /// Full vertex walk, one longer than `edges`.
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct Suppression {
    pub original: SignedGraph,
    pub graph: SignedGraph,
    /// old vertex id -> id in the suppressed graph, None if suppressed
    pub vertex_map: Vec<Option<VertexId>>,
    /// new vertex id -> old vertex id
    pub kept: Vec<VertexId>,
    /// new edge id -> the chain it replaces
    pub edge_paths: Vec<SuppressedPath>,
    /// old edge id -> new edge id of its chain
    pub edge_map: Vec<EdgeId>,
}

/// Replace every maximal path through degree-2 vertices by one edge carrying
/// the product of the signs. A component that is a bare cycle of degree-2
/// vertices keeps its least vertex and becomes a loop there. Isolated
/// vertices survive unchanged.
pub fn suppress_degree_two(g: &SignedGraph) -> Suppression {
    let n = g.n();
    let mut keep = vec![false; n];
    for (v, kept) in keep.iter_mut().enumerate() {
        if g.degree(v) != 2 {
            *kept = true;
        }
    }
    // pure cycles of degree-2 vertices: keep the least vertex per component
    for comp in g.components() {
        if comp.iter().all(|&v| g.degree(v) == 2) {
            keep[comp[0]] = true;
        }
    }

    let kept: Vec<VertexId> = (0..n).filter(|&v| keep[v]).collect();
    let mut vertex_map = vec![None; n];
    for (new, &old) in kept.iter().enumerate() {
        vertex_map[old] = Some(new);
    }

    let mut graph = SignedGraph::new(kept.len());
    let mut edge_paths: Vec<SuppressedPath> = Vec::new();
    let mut edge_map = vec![usize::MAX; g.m()];
    let mut used = vec![false; g.m()];

    for &a in &kept {
        for idx in 0..g.degree(a) {
            let (e0, slot0) = g.incidences(a)[idx];
            if used[e0] {
                continue;
            }
            used[e0] = true;
            let mut edges = vec![e0];
            let mut vertices = vec![a];
            let mut sign = g.sign(e0);
            let mut cur = g.endpoint(e0, slot0.other());
            while !keep[cur] {
                vertices.push(cur);
                let &(e_next, slot_next) = g
                    .incidences(cur)
                    .iter()
                    .find(|(cand, _)| !used[*cand])
                    .expect("degree-2 interior vertex has an unused continuation");
                used[e_next] = true;
                if g.sign(e_next).is_negative() {
                    sign = sign.flipped();
                }
                edges.push(e_next);
                cur = g.endpoint(e_next, slot_next.other());
            }
            vertices.push(cur);
            let new_id = graph
                .add_edge(vertex_map[a].unwrap(), vertex_map[cur].unwrap(), sign)
                .expect("kept vertices are in range");
            for &old_e in &edges {
                edge_map[old_e] = new_id;
            }
            debug_assert_eq!(new_id, edge_paths.len());
            edge_paths.push(SuppressedPath { edges, vertices });
        }
    }

    Suppression {
        original: g.clone(),
        graph,
        vertex_map,
        kept,
        edge_paths,
        edge_map,
    }
}

impl Suppression {
    /// Pull a flow on the suppressed graph back to the original: every chain
    /// edge takes its replacement's value, with arrows threaded so interior
    /// degree-2 vertices balance.
    pub fn lift(&self, f: &Flow) -> Result<Flow> {
        if f.values.len() != self.graph.m() {
            return Err(Error::pre(
                "flow does not fit the suppressed graph".to_string(),
            ));
        }
        let g = &self.original;
        let mut dirs = vec![(HalfDir::In, HalfDir::Out); g.m()];
        let mut values = vec![0i64; g.m()];
        for (new_id, chain) in self.edge_paths.iter().enumerate() {
            let mut enter = f.orientation.dir(new_id, EndSlot::First);
            for (i, &e) in chain.edges.iter().enumerate() {
                let at = chain.vertices[i];
                // loops enter at First by convention, matching the walk order
                let slot_in = if g.edge(e).u == at {
                    EndSlot::First
                } else {
                    EndSlot::Second
                };
                let exit = if g.sign(e).is_negative() {
                    enter
                } else {
                    enter.flipped()
                };
                match slot_in {
                    EndSlot::First => dirs[e] = (enter, exit),
                    EndSlot::Second => dirs[e] = (exit, enter),
                }
                values[e] = f.value(new_id);
                enter = exit.flipped();
            }
            let last = *chain.edges.last().expect("chains are nonempty");
            let end_slot =
                if g.edge(last).u == chain.vertices[chain.edges.len()] && !g.is_loop(last) {
                    EndSlot::First
                } else {
                    EndSlot::Second
                };
            debug_assert_eq!(
                match end_slot {
                    EndSlot::First => dirs[last].0,
                    EndSlot::Second => dirs[last].1,
                },
                f.orientation.dir(new_id, EndSlot::Second),
                "chain threading must land on the replacement edge's far arrow"
            );
        }
        let lifted = Flow {
            orientation: crate::flow::Orientation::from_dirs(dirs),
            values,
            k: f.k,
            arithmetic: f.arithmetic,
        };
        lifted
            .verify(g)
            .map_err(|e| Error::invariant(format!("lifted flow fails verification: {e}")))?;
        Ok(lifted)
    }
}

/// Minimum number of odd circuits over all 2-factors of a cubic bridgeless
/// graph, signs ignored. Perfect matchings are enumerated exhaustively; the
/// 2-factor is the complement of a matching.
pub fn oddness(g: &SignedGraph) -> Result<u32> {
    if !g.is_cubic() {
        return Err(Error::NotCubic(
            "oddness is defined for cubic graphs".to_string(),
        ));
    }
    if !bridges(g).is_empty() {
        return Err(Error::pre("oddness needs a bridgeless graph".to_string()));
    }
    let matchings = matching::perfect_matchings(g);
    if matchings.is_empty() {
        return Err(Error::invariant(
            "a bridgeless cubic graph must have a perfect matching".to_string(),
        ));
    }
    let mut best = u32::MAX;
    for pm in &matchings {
        let mut in_pm = vec![false; g.m()];
        for &e in pm {
            in_pm[e] = true;
        }
        let mut seen_edge = vec![false; g.m()];
        let mut odd = 0u32;
        for start_e in 0..g.m() {
            if in_pm[start_e] || seen_edge[start_e] {
                continue;
            }
            // walk the cycle containing start_e in the 2-factor
            let mut len = 0u32;
            let mut cur_v = g.edge(start_e).u;
            let mut cur_e = start_e;
            loop {
                seen_edge[cur_e] = true;
                len += 1;
                let next_v = if g.is_loop(cur_e) {
                    cur_v
                } else {
                    let (a, b) = g.endpoints(cur_e);
                    if a == cur_v {
                        b
                    } else {
                        a
                    }
                };
                let next = g
                    .incidences(next_v)
                    .iter()
                    .find(|(e2, _)| !in_pm[*e2] && !seen_edge[*e2]);
                match next {
                    Some(&(e2, _)) => {
                        cur_e = e2;
                        cur_v = next_v;
                    }
                    None => break,
                }
            }
            if len % 2 == 1 {
                odd += 1;
            }
        }
        best = best.min(odd);
    }
    Ok(best)
}

/// Smallest edge cut leaving two sides that each contain a cycle, signs
/// ignored; None when no bipartition qualifies (fewer than two disjoint
/// cycles anywhere in the graph).
pub fn cyclic_edge_connectivity(g: &SignedGraph) -> Result<Option<u32>> {
    let n = g.n();
    if n > 26 {
        return Err(Error::pre(format!(
            "exhaustive search supports up to 26 vertices, got {n}"
        )));
    }
    if n < 2 {
        return Ok(None);
    }
    let mut best: Option<u32> = None;
    let mut in_b = vec![false; n];
    for mask in 1u64..(1u64 << (n - 1)) {
        for (v, slot) in in_b.iter_mut().enumerate().skip(1) {
            *slot = (mask >> (v - 1)) & 1 == 1;
        }
        let mut crossing = 0u32;
        for e in 0..g.m() {
            let (u, v) = g.endpoints(e);
            if in_b[u] != in_b[v] {
                crossing += 1;
            }
        }
        if let Some(b) = best {
            if crossing >= b {
                continue;
            }
        }
        if side_has_cycle(g, &in_b, true) && side_has_cycle(g, &in_b, false) {
            best = Some(crossing);
        }
    }
    Ok(best)
}

/// Does the induced side contain a cycle? True iff some component of the
/// side has at least as many edges as vertices (loops and parallels count).
fn side_has_cycle(g: &SignedGraph, in_b: &[bool], want_b: bool) -> bool {
    let n = g.n();
    let member: Vec<bool> = (0..n).map(|v| in_b[v] == want_b).collect();
    let mut seen = vec![false; n];
    for start in 0..n {
        if !member[start] || seen[start] {
            continue;
        }
        let mut verts = 0usize;
        let mut half_edges = 0usize;
        let mut queue = std::collections::VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            verts += 1;
            for &(e, slot) in g.incidences(v) {
                let w = g.endpoint(e, slot.other());
                if !member[w] {
                    continue;
                }
                half_edges += 1;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        // every inside edge was counted from both ends (loops twice at one)
        if half_edges / 2 >= verts {
            return true;
        }
    }
    false
}

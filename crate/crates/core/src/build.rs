//! Constructive flow builders. Every function here produces an explicit
//! nowhere-zero flow by combinatorial assembly (colorings, cut reductions,
//! rebalancing walks), never by blind search; the solver in `oracle` is only
//! used where a piece is pinned down by prescriptions at a single vertex.

use crate::flow::{Arithmetic, EdgeOrient, Flow, HalfDir, Orientation};
use crate::graph::{EndSlot, Sign, SignedGraph};
use crate::matching::{self, EdgeColoring};
use crate::oracle::{self, Outcome, Prescriptions, SearchBudget};
use crate::structure;
use crate::{EdgeId, Error, Result, VertexId};

/// What a top-level builder did and in which order, for reports and
/// certificates. `steps` names each reduction and case split with the edge
/// ids involved, so the run can be replayed by hand.
#[derive(Debug, Clone)]
pub struct ConstructionTrace {
    pub method: String,
    pub steps: Vec<String>,
}

/// A finished construction: the flow, the optional path that collects every
/// top-value edge, and the trace.
#[derive(Debug, Clone)]
pub struct Built {
    pub flow: Flow,
    pub witness_path: Option<DirectedPath>,
    pub trace: ConstructionTrace,
}

/// Simple directed path: `vertices[i]` to `vertices[i+1]` along `edges[i]`,
/// no vertex repeated. A single vertex with no edges is the trivial path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl DirectedPath {
    pub fn trivial(v: VertexId) -> DirectedPath {
        DirectedPath {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }
}

fn dir_at(dirs: &[(HalfDir, HalfDir)], e: EdgeId, slot: EndSlot) -> HalfDir {
    match slot {
        EndSlot::First => dirs[e].0,
        EndSlot::Second => dirs[e].1,
    }
}

/// Cap on nested cut reductions. Every reduction strictly shrinks the
/// vertex count of both pieces, so legitimate recursion depth is bounded
/// by the input size; the cap only interrupts a defective reduction.
const REDUCTION_DEPTH_LIMIT: usize = 512;

fn flip_at(dirs: &mut [(HalfDir, HalfDir)], e: EdgeId, slot: EndSlot) {
    match slot {
        EndSlot::First => dirs[e].0 = dirs[e].0.flipped(),
        EndSlot::Second => dirs[e].1 = dirs[e].1.flipped(),
    }
}

/// Tail and head of a directed (one-in, one-out) edge.
fn arc_ends(g: &SignedGraph, dirs: &[(HalfDir, HalfDir)], e: EdgeId) -> (VertexId, VertexId) {
    let (u, v) = g.endpoints(e);
    if dirs[e].0 == HalfDir::Out {
        (u, v)
    } else {
        (v, u)
    }
}

/// Breadth-first directed path search over the arcs of a positive-valued
/// assignment: an edge is usable from its out-end when its value is
/// positive and it is not banned. Neighbors are scanned in ascending edge
/// id order, so the result is reproducible.
fn raw_path(
    g: &SignedGraph,
    dirs: &[(HalfDir, HalfDir)],
    values: &[i64],
    from: VertexId,
    to: VertexId,
    banned: &[EdgeId],
) -> Option<DirectedPath> {
    if from == to {
        return Some(DirectedPath::trivial(from));
    }
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    while let Some(w) = queue.pop_front() {
        for &(e, slot) in g.incidences(w) {
            if banned.contains(&e) || values[e] <= 0 {
                continue;
            }
            if dir_at(dirs, e, slot) != HalfDir::Out {
                continue;
            }
            let next = g.endpoint(e, slot.other());
            if seen[next] {
                continue;
            }
            seen[next] = true;
            parent[next] = Some((w, e));
            if next == to {
                let mut vertices = vec![to];
                let mut edges = Vec::new();
                let mut cur = to;
                while let Some((pv, pe)) = parent[cur] {
                    vertices.push(pv);
                    edges.push(pe);
                    cur = pv;
                }
                vertices.reverse();
                edges.reverse();
                return Some(DirectedPath { vertices, edges });
            }
            queue.push_back(next);
        }
    }
    None
}

/// Vertex-simple walk in the residual digraph of a positive assignment:
/// every non-banned edge is traversable from its tail, and odd-valued
/// edges also from their head. Crossings come back in order, each flagged
/// with whether the edge was crossed along its own arc. Neighbors are
/// scanned in ascending edge id order, so the result is reproducible.
fn residual_walk(
    g: &SignedGraph,
    dirs: &[(HalfDir, HalfDir)],
    values: &[i64],
    from: VertexId,
    to: VertexId,
    banned: &[EdgeId],
) -> Option<Vec<(EdgeId, bool)>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut parent: Vec<Option<(VertexId, EdgeId, bool)>> = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    while let Some(w) = queue.pop_front() {
        for &(e, slot) in g.incidences(w) {
            if banned.contains(&e) || g.is_loop(e) || values[e] <= 0 {
                continue;
            }
            let forward = dir_at(dirs, e, slot) == HalfDir::Out;
            if !forward && values[e] % 2 == 0 {
                continue;
            }
            let next = g.endpoint(e, slot.other());
            if seen[next] {
                continue;
            }
            seen[next] = true;
            parent[next] = Some((w, e, forward));
            if next == to {
                let mut walk = Vec::new();
                let mut cur = to;
                while let Some((pv, pe, pf)) = parent[cur] {
                    walk.push((pe, pf));
                    cur = pv;
                }
                walk.reverse();
                return Some(walk);
            }
            queue.push_back(next);
        }
    }
    None
}

/// Directed path from one vertex to another along the arcs of a positive
/// flow, avoiding the banned edges. Fails when no such path exists, which
/// on a valid connected positive flow means a precondition was broken.
pub fn find_directed_path_avoiding(
    g: &SignedGraph,
    f: &Flow,
    from: VertexId,
    to: VertexId,
    banned: &[EdgeId],
) -> Result<DirectedPath> {
    if from >= g.n() || to >= g.n() {
        return Err(Error::pre(format!(
            "path endpoints {from},{to} out of range"
        )));
    }
    if f.values.len() != g.m() {
        return Err(Error::pre("flow size does not match the graph".to_string()));
    }
    for e in 0..g.m() {
        if banned.contains(&e) {
            continue;
        }
        if f.value(e) <= 0 {
            return Err(Error::pre(format!(
                "edge {e} does not carry a positive value"
            )));
        }
        if !matches!(f.orientation.kind(e), EdgeOrient::Directed { .. }) {
            return Err(Error::pre(format!("edge {e} is not directed")));
        }
    }
    let dirs: Vec<(HalfDir, HalfDir)> = (0..g.m()).map(|e| f.orientation.dirs(e)).collect();
    raw_path(g, &dirs, &f.values, from, to, banned)
        .ok_or_else(|| Error::pre(format!("no directed path from {from} to {to}")))
}

pub fn find_directed_path(
    g: &SignedGraph,
    f: &Flow,
    from: VertexId,
    to: VertexId,
) -> Result<DirectedPath> {
    find_directed_path_avoiding(g, f, from, to, &[])
}

/// How to modify a flow along a directed path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reroute {
    /// Reverse every path edge and replace its value v by k - v.
    ReverseComplement,
    /// Add the offset to every path edge, keeping directions. The result
    /// may break Kirchhoff at the path ends; that is the point.
    Add(i64),
}

/// Apply a reroute along a path whose edges are directed with the flow.
/// The output is not verified: rerouting is a local rewrite used mid-way
/// through the constructions, and restoring balance is the caller's job.
pub fn reroute_along_path(
    g: &SignedGraph,
    f: &Flow,
    path: &DirectedPath,
    mode: Reroute,
) -> Result<Flow> {
    let mut out = f.clone();
    if path.vertices.len() != path.edges.len() + 1 {
        return Err(Error::pre("malformed path".to_string()));
    }
    let dirs: Vec<(HalfDir, HalfDir)> = (0..g.m()).map(|e| f.orientation.dirs(e)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for (i, &e) in path.edges.iter().enumerate() {
        if e >= f.values.len() || e >= g.m() {
            return Err(Error::pre(format!("path edge {e} out of range")));
        }
        if !seen.insert(e) {
            return Err(Error::pre(format!("path repeats edge {e}")));
        }
        let v = f.value(e);
        if v <= 0 {
            return Err(Error::pre(format!(
                "path edge {e} has value {v}, not positive"
            )));
        }
        if !matches!(f.orientation.kind(e), EdgeOrient::Directed { .. }) {
            return Err(Error::pre(format!("path edge {e} is not directed")));
        }
        let (tail, head) = arc_ends(g, &dirs, e);
        if tail != path.vertices[i] || head != path.vertices[i + 1] {
            return Err(Error::pre(format!(
                "path edge {e} does not point from {} to {}",
                path.vertices[i],
                path.vertices[i + 1]
            )));
        }
        let k = f.k as i64;
        match mode {
            Reroute::ReverseComplement => {
                out.orientation.reverse_edge(e);
                out.values[e] = k - v;
            }
            Reroute::Add(delta) => {
                let new = v + delta;
                if new.abs() >= k {
                    return Err(Error::pre(format!(
                        "additive reroute pushes edge {e} to {new}, outside (-{k},{k})"
                    )));
                }
                out.values[e] = new;
            }
        }
    }
    Ok(out)
}

/// Confirm the path really is directed along the flow's arrows on g and
/// collects the top values: every edge of value k-1 lies on it and no edge
/// of value 1 does. This is the machine check behind the lifting builders.
pub fn verify_peak_path(g: &SignedGraph, f: &Flow, path: &DirectedPath) -> Result<()> {
    if path.vertices.len() != path.edges.len() + 1 {
        return Err(Error::invariant("malformed witness path".to_string()));
    }
    let dirs: Vec<(HalfDir, HalfDir)> = (0..g.m()).map(|e| f.orientation.dirs(e)).collect();
    let mut on_path = vec![false; g.m()];
    for (i, &e) in path.edges.iter().enumerate() {
        if on_path[e] {
            return Err(Error::invariant(format!("witness path repeats edge {e}")));
        }
        on_path[e] = true;
        if f.value(e) <= 0 {
            return Err(Error::invariant(format!(
                "witness path edge {e} carries a non-positive value"
            )));
        }
        let (tail, head) = arc_ends(g, &dirs, e);
        if tail != path.vertices[i] || head != path.vertices[i + 1] {
            return Err(Error::invariant(format!(
                "witness path edge {e} is not directed along the path"
            )));
        }
        if f.value(e) == 1 {
            return Err(Error::invariant(format!(
                "witness path crosses edge {e} of value 1"
            )));
        }
    }
    let mut distinct = path.vertices.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != path.vertices.len() {
        return Err(Error::invariant(
            "witness path repeats a vertex".to_string(),
        ));
    }
    let peak = f.k as i64 - 1;
    for (e, &on) in on_path.iter().enumerate() {
        if f.abs_value(e) == peak && !on {
            return Err(Error::invariant(format!(
                "edge {e} carries the top value {peak} but is off the witness path"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// circulations: sign-blind integer flows used as raw material
// ---------------------------------------------------------------------

/// Values relative to the stored first-to-second direction of every edge.
/// A valid circulation has zero net value at each vertex when positive
/// values are read as first-to-second traffic.
#[derive(Debug, Clone)]
struct Circulation {
    values: Vec<i64>,
}

impl Circulation {
    fn zero(m: usize) -> Circulation {
        Circulation { values: vec![0; m] }
    }

    fn add(&mut self, other: &Circulation, factor: i64) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += factor * b;
        }
    }

    /// Rewrite as positive values with explicit arrows.
    fn into_arcs(self, g: &SignedGraph) -> (Vec<(HalfDir, HalfDir)>, Vec<i64>) {
        let mut dirs = Vec::with_capacity(g.m());
        let mut values = Vec::with_capacity(g.m());
        for v in self.values {
            debug_assert!(v != 0, "circulation value vanished");
            if v >= 0 {
                dirs.push((HalfDir::Out, HalfDir::In));
                values.push(v);
            } else {
                dirs.push((HalfDir::In, HalfDir::Out));
                values.push(-v);
            }
        }
        (dirs, values)
    }
}

/// Walk the cycles of an edge set in which every vertex has degree 0 or 2,
/// sending one unit around each cycle. Cycle starts and travel directions
/// are fixed by least edge id, so the output is deterministic.
fn even_subgraph_circulation(g: &SignedGraph, in_set: &[bool]) -> Circulation {
    let mut circ = Circulation::zero(g.m());
    let mut used = vec![false; g.m()];
    for start in 0..g.m() {
        if !in_set[start] || used[start] {
            continue;
        }
        debug_assert!(!g.is_loop(start), "cycle walks expect loopless sets");
        used[start] = true;
        circ.values[start] = 1;
        let home = g.edge(start).u;
        let mut at = g.edge(start).v;
        while at != home {
            let mut advanced = false;
            for &(e, slot) in g.incidences(at) {
                if !in_set[e] || used[e] {
                    continue;
                }
                used[e] = true;
                circ.values[e] = if slot == EndSlot::First { 1 } else { -1 };
                at = g.endpoint(e, slot.other());
                advanced = true;
                break;
            }
            assert!(advanced, "open chain in a supposedly even subgraph");
        }
    }
    circ
}

/// The edges of the cycle through e inside the given set.
fn cycle_edges_through(g: &SignedGraph, in_set: &[bool], e: EdgeId) -> Vec<EdgeId> {
    let mut out = vec![e];
    let home = g.edge(e).u;
    let mut at = g.edge(e).v;
    let mut used = vec![false; g.m()];
    used[e] = true;
    while at != home {
        let mut advanced = false;
        for &(f, slot) in g.incidences(at) {
            if !in_set[f] || used[f] {
                continue;
            }
            used[f] = true;
            out.push(f);
            at = g.endpoint(f, slot.other());
            advanced = true;
            break;
        }
        assert!(advanced, "open chain in a supposedly even subgraph");
    }
    out
}

fn class_set(g: &SignedGraph, coloring: &EdgeColoring, classes: [u8; 2]) -> Vec<bool> {
    (0..g.m())
        .map(|e| classes.contains(&coloring.class_of[e]))
        .collect()
}

/// Sign-blind 4-flow from a proper 3-edge-coloring in which two chosen
/// edges carry value 1 in absolute value. The two edges may coincide. The
/// doubled summand's cycle through the second edge is negated when needed
/// so the two contributions cancel down to one unit there.
fn unit_pair_circulation(
    g: &SignedGraph,
    coloring: &EdgeColoring,
    e1: EdgeId,
    e2: EdgeId,
) -> Result<Circulation> {
    if coloring.class_of.len() != g.m() || !coloring.is_proper(g) {
        return Err(Error::pre("improper edge coloring".to_string()));
    }
    let c1 = coloring.class_of[e1];
    let mut circ = Circulation::zero(g.m());
    if coloring.class_of[e2] == c1 {
        let mut rest = [0u8, 1, 2].iter().copied().filter(|&c| c != c1);
        let c2 = rest.next().unwrap();
        let c3 = rest.next().unwrap();
        let single = even_subgraph_circulation(g, &class_set(g, coloring, [c1, c2]));
        let doubled = even_subgraph_circulation(g, &class_set(g, coloring, [c2, c3]));
        circ.add(&single, 1);
        circ.add(&doubled, 2);
    } else {
        let c2 = coloring.class_of[e2];
        let c3 = [0u8, 1, 2]
            .iter()
            .copied()
            .find(|&c| c != c1 && c != c2)
            .unwrap();
        let single_set = class_set(g, coloring, [c1, c2]);
        let doubled_set = class_set(g, coloring, [c2, c3]);
        let single = even_subgraph_circulation(g, &single_set);
        let mut doubled = even_subgraph_circulation(g, &doubled_set);
        if (single.values[e2] > 0) == (doubled.values[e2] > 0) {
            for f in cycle_edges_through(g, &doubled_set, e2) {
                doubled.values[f] = -doubled.values[f];
            }
        }
        circ.add(&single, 1);
        circ.add(&doubled, 2);
    }
    for e in 0..g.m() {
        if circ.values[e] == 0 {
            return Err(Error::invariant(format!(
                "combined circulation vanished on edge {e}"
            )));
        }
    }
    if circ.values[e1].abs() != 1 || circ.values[e2].abs() != 1 {
        return Err(Error::invariant(
            "chosen edges did not come out at value 1".to_string(),
        ));
    }
    Ok(circ)
}

// ---------------------------------------------------------------------
// 4-flows with both negative edges at value 2
// ---------------------------------------------------------------------

/// Build a nowhere-zero 4-flow in which both negative edges carry value 2,
/// from a proper 3-edge-coloring that puts the two negative edges in the
/// same class. The negatives' class appears only in the doubled summand,
/// which pins their value; a complementing reroute plus one half-arrow flip
/// per negative edge then restores balance at their endpoints.
pub fn four_flow_negatives_value2(g: &SignedGraph, coloring: &EdgeColoring) -> Result<Flow> {
    if !g.is_cubic() {
        return Err(Error::NotCubic(
            "4-flow builder needs a cubic graph".to_string(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "4-flow builder needs a connected graph".to_string(),
        ));
    }
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre(format!(
            "need exactly two negative edges, got {}",
            negs.len()
        )));
    };
    if coloring.class_of.len() != g.m() || !coloring.is_proper(g) {
        return Err(Error::pre("improper edge coloring".to_string()));
    }
    let c2 = coloring.class_of[n1];
    if coloring.class_of[n2] != c2 {
        return Err(Error::pre(
            "negative edges lie in different colour classes".to_string(),
        ));
    }
    let mut rest = [0u8, 1, 2].iter().copied().filter(|&c| c != c2);
    let c1 = rest.next().unwrap();
    let c3 = rest.next().unwrap();

    let mut circ = Circulation::zero(g.m());
    circ.add(
        &even_subgraph_circulation(g, &class_set(g, coloring, [c1, c3])),
        1,
    );
    circ.add(
        &even_subgraph_circulation(g, &class_set(g, coloring, [c2, c3])),
        2,
    );
    for e in 0..g.m() {
        if circ.values[e] == 0 {
            return Err(Error::invariant(format!(
                "combined circulation vanished on edge {e}"
            )));
        }
    }
    if circ.values[n1].abs() != 2 || circ.values[n2].abs() != 2 {
        return Err(Error::invariant(
            "negative edges did not come out at value 2".to_string(),
        ));
    }

    let (mut dirs, mut values) = circ.into_arcs(g);
    let (u1, _u2) = arc_ends(g, &dirs, n1);
    let (_v1, v2) = arc_ends(g, &dirs, n2);
    // u1 is where n1 will turn outward, v2 where n2 turns inward; the
    // complementing reversal of a v2-to-u1 walk absorbs both corrections.
    let path = raw_path(g, &dirs, &values, v2, u1, &[n1, n2]).ok_or_else(|| {
        Error::invariant("no directed path between the negative edges".to_string())
    })?;
    for &e in &path.edges {
        values[e] = 4 - values[e];
        dirs[e] = (dirs[e].0.flipped(), dirs[e].1.flipped());
    }
    let slot_u1 = slot_at(g, n1, u1);
    flip_at(&mut dirs, n1, slot_u1);
    let slot_v2 = slot_at(g, n2, v2);
    flip_at(&mut dirs, n2, slot_v2);

    let flow = Flow::integer(Orientation::from_dirs(dirs), values, 4);
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("assembled 4-flow fails verification: {e}")))?;
    debug_assert_eq!(flow.value(n1), 2);
    debug_assert_eq!(flow.value(n2), 2);
    Ok(flow)
}

fn slot_at(g: &SignedGraph, e: EdgeId, v: VertexId) -> EndSlot {
    if g.edge(e).u == v {
        EndSlot::First
    } else {
        debug_assert_eq!(g.edge(e).v, v);
        EndSlot::Second
    }
}

/// 4-flow with both negative edges at value 2 on a cubic bipartite signed
/// graph with two negative edges: find a one-factor through both negatives,
/// color around it, and hand over to the coloring-based builder.
pub fn bipartite_four_flow(g: &SignedGraph) -> Result<Built> {
    if !g.is_cubic() {
        return Err(Error::NotCubic("need a cubic graph".to_string()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected("need a connected graph".to_string()));
    }
    if matching::bipartition(g).is_none() {
        return Err(Error::pre("underlying graph is not bipartite".to_string()));
    }
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre(format!(
            "need exactly two negative edges, got {}",
            negs.len()
        )));
    };
    if let structure::Admissibility::NotAdmissible(reason) = structure::admissibility(g) {
        return Err(Error::NoFlow(format!("not flow-admissible: {reason}")));
    }
    let factor = matching::one_factor_containing_two(g, n1, n2)?;
    let coloring = matching::coloring_around_factor(g, &factor)?;
    let flow = four_flow_negatives_value2(g, &coloring)?;
    Ok(Built {
        flow,
        witness_path: None,
        trace: ConstructionTrace {
            method: "bipartite4".to_string(),
            steps: vec![format!(
                "one-factor through negatives {n1},{n2}: {factor:?}"
            )],
        },
    })
}

// ---------------------------------------------------------------------
// mod-6 flows pinned at one vertex, and their integer versions
// ---------------------------------------------------------------------

/// Nowhere-zero mod-6 flow on an all-positive 3-edge-connected graph with
/// prescribed out-values a, b, c at the three edges of a degree-3 vertex,
/// listed by ascending edge id. The residues must be nonzero and sum to
/// zero mod 6. Such a flow always exists; failure to find one is reported
/// as an internal invariant breach.
pub fn z6_flow_prescribed_at_vertex(
    g: &SignedGraph,
    v: VertexId,
    a: i64,
    b: i64,
    c: i64,
) -> Result<Flow> {
    if !g.is_all_positive() {
        return Err(Error::pre(
            "prescribed mod-6 flows need an all-positive graph".to_string(),
        ));
    }
    if !structure::is_three_edge_connected(g) {
        return Err(Error::pre("graph is not 3-edge-connected".to_string()));
    }
    if v >= g.n() || g.degree(v) != 3 {
        return Err(Error::pre(format!("vertex {v} does not have degree 3")));
    }
    let inc = g.incidences(v);
    let edges: Vec<EdgeId> = inc.iter().map(|&(e, _)| e).collect();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::pre(format!("vertex {v} has a loop")));
    }
    let residues = [a.rem_euclid(6), b.rem_euclid(6), c.rem_euclid(6)];
    if residues.contains(&0) {
        return Err(Error::pre(
            "prescribed residues must be nonzero mod 6".to_string(),
        ));
    }
    if residues.iter().sum::<i64>() % 6 != 0 {
        return Err(Error::pre(
            "prescribed residues must sum to zero mod 6".to_string(),
        ));
    }

    let mut pres = Prescriptions::none();
    for (&(e, slot), &r) in inc.iter().zip(residues.iter()) {
        // out-value at v translates to the stored first-to-second reference:
        // leaving the first endpoint keeps the residue, entering flips it
        let exact = if slot == EndSlot::First {
            r
        } else {
            (6 - r) % 6
        };
        pres.exact.push((e, exact));
    }
    match oracle::exists_zk_flow(g, 6, &pres, &SearchBudget::default())? {
        Outcome::Yes(f) => Ok(f),
        Outcome::No => Err(Error::invariant(
            "a prescribed mod-6 flow must exist on a 3-edge-connected graph".to_string(),
        )),
        Outcome::Indeterminate => Err(Error::Indeterminate(
            "search budget exhausted while pinning a mod-6 flow".to_string(),
        )),
    }
}

/// Turn a nowhere-zero mod-6 flow into an integer 6-flow while keeping the
/// values at one degree-3 vertex under control. The mod flow must send
/// out-values (±1, ±x, ∓(1+x)) with 1 <= x <= 4 through e1, e2, e3; the
/// integer flow comes out with |values| (1, x, 1+x) there, e1 and e2
/// pointing out, e3 pointing in (after global negation when e1 carried -1).
///
/// The engine repeatedly reverses a directed walk from a vertex with
/// surplus out-traffic to one with surplus in-traffic, avoiding e1; each
/// round shrinks the total imbalance by 12. The returned vector logs the
/// imbalance after every round, strictly decreasing to zero.
pub fn z6_to_integer6(
    g: &SignedGraph,
    zf: &Flow,
    v: VertexId,
    e1: EdgeId,
    e2: EdgeId,
    e3: EdgeId,
) -> Result<(Flow, Vec<u64>)> {
    if !g.is_all_positive() {
        return Err(Error::pre(
            "integer conversion needs an all-positive graph".to_string(),
        ));
    }
    if zf.arithmetic != Arithmetic::ModK || zf.k != 6 {
        return Err(Error::pre("input must be a mod-6 flow".to_string()));
    }
    zf.verify(g)?;
    if v >= g.n() || g.degree(v) != 3 {
        return Err(Error::pre(format!("vertex {v} does not have degree 3")));
    }
    let mut at_v = vec![e1, e2, e3];
    at_v.sort_unstable();
    at_v.dedup();
    if at_v.len() != 3
        || [e1, e2, e3]
            .iter()
            .any(|&e| slot_of_vertex(g, e, v).is_none())
    {
        return Err(Error::pre(
            "e1, e2, e3 must be the three distinct edges at v".to_string(),
        ));
    }

    let out_value = |f: &Flow, e: EdgeId| -> i64 {
        let slot = slot_of_vertex(g, e, v).unwrap();
        match f.orientation.dir(e, slot) {
            HalfDir::Out => f.value(e),
            HalfDir::In => (6 - f.value(e)) % 6,
        }
    };

    let mut zf = zf.clone();
    let s1 = out_value(&zf, e1);
    if s1 == 5 {
        zf = zf.negated();
    } else if s1 != 1 {
        return Err(Error::pre(format!(
            "edge {e1} must carry out-value 1 or 5 at vertex {v}, got {s1}"
        )));
    }
    let x = out_value(&zf, e2);
    if !(1..=4).contains(&x) {
        return Err(Error::pre(format!(
            "edge {e2} must carry out-value 1..4 at vertex {v}, got {x}"
        )));
    }
    if out_value(&zf, e3) != 5 - x {
        return Err(Error::pre(format!(
            "edge {e3} must carry out-value {} at vertex {v}, got {}",
            5 - x,
            out_value(&zf, e3)
        )));
    }

    // read the residues as integer arc values 1..5
    let mut dirs: Vec<(HalfDir, HalfDir)> = (0..g.m()).map(|e| zf.orientation.dirs(e)).collect();
    let mut values: Vec<i64> = (0..g.m()).map(|e| zf.value(e)).collect();

    // e1 never moves again, so pick its outward unit representation now:
    // an in-arc of value 5 is the same residue as an out-arc of value 1
    let slot1 = slot_of_vertex(g, e1, v).unwrap();
    if dir_at(&dirs, e1, slot1) == HalfDir::In {
        debug_assert_eq!(values[e1], 5);
        dirs[e1] = (dirs[e1].0.flipped(), dirs[e1].1.flipped());
        values[e1] = 6 - values[e1];
    }

    let outflow = |dirs: &[(HalfDir, HalfDir)], values: &[i64], w: VertexId| -> i64 {
        let mut total = 0;
        for &(e, slot) in g.incidences(w) {
            total += match dir_at(dirs, e, slot) {
                HalfDir::Out => values[e],
                HalfDir::In => -values[e],
            };
        }
        total
    };
    let norm = |dirs: &[(HalfDir, HalfDir)], values: &[i64]| -> u64 {
        (0..g.n())
            .map(|w| outflow(dirs, values, w).unsigned_abs())
            .sum()
    };

    let mut norms = vec![norm(&dirs, &values)];
    while *norms.last().unwrap() > 0 {
        let w1 = (0..g.n())
            .find(|&w| outflow(&dirs, &values, w) > 0)
            .ok_or_else(|| Error::invariant("imbalance without a surplus vertex".to_string()))?;
        // breadth-first forward search from w1, avoiding e1, until a
        // deficit vertex turns up
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        seen[w1] = true;
        let mut queue = std::collections::VecDeque::from([w1]);
        let mut target = None;
        'bfs: while let Some(w) = queue.pop_front() {
            for &(e, slot) in g.incidences(w) {
                if e == e1 || dir_at(&dirs, e, slot) != HalfDir::Out {
                    continue;
                }
                let next = g.endpoint(e, slot.other());
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                parent[next] = Some((w, e));
                if outflow(&dirs, &values, next) < 0 {
                    target = Some(next);
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
        let Some(mut cur) = target else {
            return Err(Error::invariant(
                "no rebalancing walk; the graph must be 3-edge-connected".to_string(),
            ));
        };
        while let Some((pv, pe)) = parent[cur] {
            let slot = slot_of_vertex(g, pe, pv).unwrap();
            debug_assert_eq!(dir_at(&dirs, pe, slot), HalfDir::Out);
            dirs[pe] = (dirs[pe].0.flipped(), dirs[pe].1.flipped());
            values[pe] = 6 - values[pe];
            cur = pv;
        }
        let new_norm = norm(&dirs, &values);
        if new_norm >= *norms.last().unwrap() {
            return Err(Error::invariant(
                "rebalancing failed to shrink the imbalance".to_string(),
            ));
        }
        norms.push(new_norm);
    }

    // two balanced end states exist; convert the wrong one by reversing a
    // directed cycle through e2 and e3 with complemented values
    let slot2 = slot_of_vertex(g, e2, v).unwrap();
    let slot3 = slot_of_vertex(g, e3, v).unwrap();
    if dir_at(&dirs, e2, slot2) == HalfDir::In {
        debug_assert_eq!(values[e2], 6 - x);
        debug_assert_eq!(dir_at(&dirs, e3, slot3), HalfDir::Out);
        debug_assert_eq!(values[e3], 5 - x);
        let u2 = g.endpoint(e2, slot2.other());
        let u3 = g.endpoint(e3, slot3.other());
        let path = raw_path(g, &dirs, &values, u3, u2, &[e1]).ok_or_else(|| {
            Error::invariant("no correcting walk; the graph must be 3-edge-connected".to_string())
        })?;
        if path.vertices.contains(&v) {
            return Err(Error::invariant(
                "correcting walk passed the pinned vertex".to_string(),
            ));
        }
        for &e in path.edges.iter().chain([e2, e3].iter()) {
            dirs[e] = (dirs[e].0.flipped(), dirs[e].1.flipped());
            values[e] = 6 - values[e];
        }
    }

    let flow = Flow::integer(Orientation::from_dirs(dirs), values, 6);
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("integer conversion broke the flow: {e}")))?;
    let check = |e: EdgeId, want_dir: HalfDir, want: i64| -> Result<()> {
        let slot = slot_of_vertex(g, e, v).unwrap();
        if flow.orientation.dir(e, slot) != want_dir || flow.value(e) != want {
            return Err(Error::invariant(format!(
                "edge {e} ended at the wrong pinned value"
            )));
        }
        Ok(())
    };
    check(e1, HalfDir::Out, 1)?;
    check(e2, HalfDir::Out, x)?;
    check(e3, HalfDir::In, 1 + x)?;
    Ok((flow, norms))
}

fn slot_of_vertex(g: &SignedGraph, e: EdgeId, v: VertexId) -> Option<EndSlot> {
    let edge = g.edge(e);
    if edge.u == v {
        Some(EndSlot::First)
    } else if edge.v == v {
        Some(EndSlot::Second)
    } else {
        None
    }
}

// ---------------------------------------------------------------------
// 6-flows with one chosen edge value on all-positive cubic graphs
// ---------------------------------------------------------------------

/// Nowhere-zero integer 6-flow on a connected bridgeless cubic all-positive
/// graph with |values(e)| = target for one chosen edge, any target in 1..5.
/// Graphs with a 2-edge-cut split there and recurse; 3-edge-connected
/// graphs get a mod-6 flow pinned at an endpoint of e and convert it.
pub fn six_flow_choose_value(g: &SignedGraph, e: EdgeId, target: i64) -> Result<Flow> {
    six_flow_inner(g, e, target, 0)
}

fn six_flow_inner(g: &SignedGraph, e: EdgeId, target: i64, depth: usize) -> Result<Flow> {
    if depth > REDUCTION_DEPTH_LIMIT {
        return Err(Error::invariant(
            "cut reduction failed to shrink the graph".to_string(),
        ));
    }
    if !(1..=5).contains(&target) {
        return Err(Error::pre(format!("target {target} outside 1..5")));
    }
    if e >= g.m() {
        return Err(Error::pre(format!("edge {e} out of range")));
    }
    if !g.is_all_positive() {
        return Err(Error::pre(
            "builder needs an all-positive graph".to_string(),
        ));
    }
    if !g.is_cubic() {
        return Err(Error::NotCubic("builder needs a cubic graph".to_string()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "builder needs a connected graph".to_string(),
        ));
    }
    if !structure::is_bridgeless(g) {
        return Err(Error::pre("graph has a bridge".to_string()));
    }

    let cuts = structure::minimal_two_cuts(g)?;
    if let Some(cs) = cuts.first() {
        let r = structure::reduce_two_cut(g, [cs.edges[0], cs.edges[1]])?;
        let (f1, f2);
        if e == r.cut[0] || e == r.cut[1] {
            f1 = six_flow_inner(&r.g1, r.new_edge_g1, target, depth + 1)?;
            f2 = six_flow_inner(&r.g2, r.new_edge_g2, target, depth + 1)?;
        } else if let Some(p) = r.g1_edges.iter().position(|&x| x == Some(e)) {
            f1 = six_flow_inner(&r.g1, p, target, depth + 1)?;
            let beta = f1.abs_value(r.new_edge_g1);
            f2 = six_flow_inner(&r.g2, r.new_edge_g2, beta, depth + 1)?;
        } else {
            let p = r
                .g2_edges
                .iter()
                .position(|&x| x == Some(e))
                .ok_or_else(|| Error::invariant("edge lost by the cut split".to_string()))?;
            f2 = six_flow_inner(&r.g2, p, target, depth + 1)?;
            let beta = f2.abs_value(r.new_edge_g2);
            f1 = six_flow_inner(&r.g1, r.new_edge_g1, beta, depth + 1)?;
        }
        let combined = structure::recombine_matched(&r, &f1, &f2)?.made_all_positive();
        if combined.abs_value(e) != target {
            return Err(Error::invariant(
                "recombination moved the chosen value".to_string(),
            ));
        }
        return Ok(combined);
    }

    debug_assert!(structure::is_three_edge_connected(g));
    let v = g.edge(e).u;
    let others: Vec<EdgeId> = g
        .incidences(v)
        .iter()
        .map(|&(f, _)| f)
        .filter(|&f| f != e)
        .collect();
    let [o1, o2] = others[..] else {
        return Err(Error::invariant(
            "cubic vertex without three distinct edges".to_string(),
        ));
    };

    // out-residues at v followed by conversion roles: the converted flow
    // carries |values| (1, x, 1+x) on (e1, e2, e3)
    let (residue_of, roles) = if target <= 4 {
        ([(o1, 1), (e, target), (o2, 5 - target)], [o1, e, o2])
    } else {
        ([(o1, 1), (e, 1), (o2, 4)], [o1, o2, e])
    };
    let mut sorted = [o1, e, o2];
    sorted.sort_unstable();
    let residue = |id: EdgeId| residue_of.iter().find(|&&(f, _)| f == id).unwrap().1;
    let zf = z6_flow_prescribed_at_vertex(
        g,
        v,
        residue(sorted[0]),
        residue(sorted[1]),
        residue(sorted[2]),
    )?;
    let (flow, _) = z6_to_integer6(g, &zf, v, roles[0], roles[1], roles[2])?;
    if flow.abs_value(e) != target {
        return Err(Error::invariant(
            "pinned conversion missed the target value".to_string(),
        ));
    }
    Ok(flow.made_all_positive())
}

// ---------------------------------------------------------------------
// 6-flows when the two negative edges form an edge cut
// ---------------------------------------------------------------------

/// When the negative pair is itself an edge cut the signature is balanced:
/// switch to the all-positive form, split at that cut, give both pieces
/// value 1 on their boundary edges, and switch back.
fn cut_pair_six_flow(g: &SignedGraph) -> Result<Flow> {
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre("need exactly two negative edges".to_string()));
    };
    debug_assert!(g.is_edge_cut(&[n1, n2]));
    let set = match g.balance() {
        crate::graph::Balance::Balanced(set) => set,
        crate::graph::Balance::Unbalanced { .. } => {
            return Err(Error::invariant(
                "a negative pair forming a cut must be switchable to all-positive".to_string(),
            ))
        }
    };
    let gpos = g.switch(&set)?;
    if !gpos.is_all_positive() {
        return Err(Error::invariant(
            "switching failed to clear the signs".to_string(),
        ));
    }
    let r = structure::reduce_two_cut(&gpos, [n1, n2])?;
    let f1 = six_flow_inner(&r.g1, r.new_edge_g1, 1, 0)?;
    let f2 = six_flow_inner(&r.g2, r.new_edge_g2, 1, 0)?;
    let on_pos = structure::recombine_matched(&r, &f1, &f2)?;
    let flow = on_pos.switched(&gpos, &set)?.made_all_positive();
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("switched flow fails verification: {e}")))?;
    if flow.value(n1) != 1 || flow.value(n2) != 1 {
        return Err(Error::invariant(
            "cut negatives must end at value 1".to_string(),
        ));
    }
    Ok(flow)
}

// ---------------------------------------------------------------------
// 6-flows on bridged graphs
// ---------------------------------------------------------------------

/// Nowhere-zero 6-flow on a connected cubic signed graph with two negative
/// edges, at least one bridge, and a flow-admissible signature. Both
/// negative edges end at value 1 (one turned outward, one inward) and every
/// bridge carries value 2.
pub fn bridge_six_flow(g: &SignedGraph) -> Result<Built> {
    let flow = bridge_six_inner(g, 0)?;
    let negs = g.negative_edges();
    let flow = orient_lower_negative_outward(g, flow, &negs)?;
    for &b in &structure::bridges(g) {
        if flow.abs_value(b) != 2 {
            return Err(Error::invariant(format!("bridge {b} must carry value 2")));
        }
    }
    Ok(Built {
        flow,
        witness_path: None,
        trace: ConstructionTrace {
            method: "bridge6".to_string(),
            steps: Vec::new(),
        },
    })
}

/// Global negation keeps values but the positive rewrite flips every
/// arrow, swapping outward and inward negative edges.
fn orient_lower_negative_outward(g: &SignedGraph, flow: Flow, negs: &[EdgeId]) -> Result<Flow> {
    let lower = *negs.iter().min().unwrap();
    let flow = if flow.orientation.kind(lower) == EdgeOrient::Introverted {
        flow.negated().made_all_positive()
    } else {
        flow
    };
    for &n in negs {
        if flow.value(n) != 1 {
            return Err(Error::invariant(format!(
                "negative edge {n} must end at value 1"
            )));
        }
    }
    if flow.orientation.kind(lower) != EdgeOrient::Extroverted {
        return Err(Error::invariant(
            "negative pair lost its orientation classes".to_string(),
        ));
    }
    flow.verify(g)?;
    Ok(flow)
}

fn bridge_six_inner(g: &SignedGraph, depth: usize) -> Result<Flow> {
    if depth > REDUCTION_DEPTH_LIMIT {
        return Err(Error::invariant(
            "cut reduction failed to shrink the graph".to_string(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected("need a connected graph".to_string()));
    }
    if !g.is_cubic() {
        return Err(Error::NotCubic("need a cubic graph".to_string()));
    }
    let negs = g.negative_edges();
    if negs.len() != 2 {
        return Err(Error::pre(format!(
            "need exactly two negative edges, got {}",
            negs.len()
        )));
    }
    if let structure::Admissibility::NotAdmissible(reason) = structure::admissibility(g) {
        return Err(Error::NoFlow(format!("not flow-admissible: {reason}")));
    }
    if structure::bridges(g).is_empty() {
        return Err(Error::pre("graph has no bridge".to_string()));
    }

    // peel off 2-cuts with an all-positive side first; they would clutter
    // the block decomposition below
    for cs in structure::minimal_two_cuts(g)? {
        let Ok(r) = structure::reduce_two_cut(g, [cs.edges[0], cs.edges[1]]) else {
            continue;
        };
        if !structure::is_flow_admissible(&r.g1) {
            return Err(Error::invariant(
                "cut split broke admissibility".to_string(),
            ));
        }
        let f1 = bridge_six_inner(&r.g1, depth + 1)?;
        let beta = f1.abs_value(r.new_edge_g1);
        let f2 = six_flow_inner(&r.g2, r.new_edge_g2, beta, 0)?;
        let combined = structure::recombine_matched(&r, &f1, &f2)?.made_all_positive();
        return Ok(combined);
    }

    assemble_bridge_chain(g)
}

/// Per-block flows along the bridge path. Each end block is rewired with
/// one extra vertex standing in for its negative edge plus its bridge and
/// handed a pinned mod-6 flow; middle blocks get a synthetic edge of value
/// 2 standing in for the outside world.
fn assemble_bridge_chain(g: &SignedGraph) -> Result<Flow> {
    let bridge_ids = structure::bridges(g);
    let negs = g.negative_edges();
    for &n in &negs {
        if bridge_ids.contains(&n) {
            return Err(Error::invariant(
                "a negative bridge cannot be admissible".to_string(),
            ));
        }
    }
    let (rest, _) = g.delete_edges(&bridge_ids);
    let comps = rest.components();
    let mut block_of = vec![usize::MAX; g.n()];
    for (i, comp) in comps.iter().enumerate() {
        for &w in comp {
            block_of[w] = i;
        }
    }
    let mut neighbors: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); comps.len()];
    for &b in &bridge_ids {
        let (p, q) = g.endpoints(b);
        let (bp, bq) = (block_of[p], block_of[q]);
        if bp == bq {
            return Err(Error::invariant("bridge inside one block".to_string()));
        }
        neighbors[bp].push((b, bq));
        neighbors[bq].push((b, bp));
    }
    let ends: Vec<usize> = (0..comps.len())
        .filter(|&i| neighbors[i].len() == 1)
        .collect();
    if ends.len() != 2 || neighbors.iter().any(|ns| ns.len() > 2) {
        return Err(Error::invariant(
            "blocks of an admissible two-negative graph must form a path".to_string(),
        ));
    }
    let start = if comps[ends[0]][0] <= comps[ends[1]][0] {
        ends[0]
    } else {
        ends[1]
    };
    let mut order = vec![start];
    let mut chain_bridges = Vec::new();
    let mut prev_bridge: Option<EdgeId> = None;
    loop {
        let cur = *order.last().unwrap();
        let next = neighbors[cur]
            .iter()
            .find(|&&(b, _)| Some(b) != prev_bridge)
            .copied();
        match next {
            Some((b, t)) => {
                chain_bridges.push(b);
                order.push(t);
                prev_bridge = Some(b);
            }
            None => break,
        }
    }
    if order.len() != comps.len() {
        return Err(Error::invariant(
            "block path walk missed a block".to_string(),
        ));
    }

    let mut dirs: Vec<(HalfDir, HalfDir)> = vec![(HalfDir::In, HalfDir::In); g.m()];
    let mut values: Vec<i64> = vec![0; g.m()];
    for &b in &bridge_ids {
        values[b] = 2;
    }
    let set_bridge_half =
        |dirs: &mut Vec<(HalfDir, HalfDir)>, b: EdgeId, at: VertexId, d: HalfDir| {
            let slot = slot_at(g, b, at);
            match slot {
                EndSlot::First => dirs[b].0 = d,
                EndSlot::Second => dirs[b].1 = d,
            }
        };

    for (pos, &bi) in order.iter().enumerate() {
        let comp = &comps[bi];
        let block_negs: Vec<EdgeId> = negs
            .iter()
            .copied()
            .filter(|&n| block_of[g.edge(n).u] == bi)
            .collect();
        let left_bridge = if pos > 0 {
            Some(chain_bridges[pos - 1])
        } else {
            None
        };
        let right_bridge = chain_bridges.get(pos).copied();
        let attach = |b: EdgeId| -> VertexId {
            let (p, q) = g.endpoints(b);
            if block_of[p] == bi {
                p
            } else {
                q
            }
        };

        if pos == 0 || pos + 1 == order.len() {
            let [negative] = block_negs[..] else {
                return Err(Error::invariant(
                    "each end block holds exactly one negative".to_string(),
                ));
            };
            let leftmost = pos == 0;
            let bridge = if leftmost {
                right_bridge.unwrap()
            } else {
                left_bridge.unwrap()
            };
            let t_old = attach(bridge);
            if g.is_loop(negative) {
                // single vertex carrying a negative loop: the loop nets two
                // units one way, the bridge two units the other
                if comp.len() != 1 {
                    return Err(Error::invariant(
                        "negative loop block must be one vertex".to_string(),
                    ));
                }
                let w = comp[0];
                values[negative] = 1;
                if leftmost {
                    dirs[negative] = (HalfDir::In, HalfDir::In);
                    set_bridge_half(&mut dirs, bridge, w, HalfDir::Out);
                } else {
                    dirs[negative] = (HalfDir::Out, HalfDir::Out);
                    set_bridge_half(&mut dirs, bridge, w, HalfDir::In);
                }
                continue;
            }

            let ind = g.induced(comp)?;
            let n_loc = ind
                .new_edge(negative)
                .ok_or_else(|| Error::invariant("negative edge left its block".to_string()))?;
            let (u_loc, v_loc) = ind.graph.endpoints(n_loc);
            let t_loc = ind
                .new_vertex(t_old)
                .ok_or_else(|| Error::invariant("attachment vertex left its block".to_string()))?;
            if u_loc == t_loc || v_loc == t_loc {
                return Err(Error::invariant(
                    "negative edge still meets the bridge; a 2-cut split was missed".to_string(),
                ));
            }
            let mut gstar = SignedGraph::new(ind.graph.n() + 1);
            let mut back: Vec<EdgeId> = Vec::new();
            for (le, edge) in ind.graph.edges().iter().enumerate() {
                if le == n_loc {
                    continue;
                }
                gstar.add_edge(edge.u, edge.v, Sign::Positive)?;
                back.push(ind.edges[le]);
            }
            let w = ind.graph.n();
            let wu = gstar.add_edge(u_loc, w, Sign::Positive)?;
            let wv = gstar.add_edge(v_loc, w, Sign::Positive)?;
            let wt = gstar.add_edge(t_loc, w, Sign::Positive)?;
            let zf =
                z6_flow_prescribed_at_vertex(&gstar, w, 1, 1, 4).map_err(promote_precondition)?;
            let (mut f6, _) = z6_to_integer6(&gstar, &zf, w, wu, wv, wt)?;
            if !leftmost {
                f6 = f6.negated().made_all_positive();
            }
            for (ge, &old) in back.iter().enumerate() {
                dirs[old] = f6.orientation.dirs(ge);
                values[old] = f6.value(ge);
            }
            // the two w-edges' block-side arrows become the negative edge;
            // the third one fixes the bridge half
            values[negative] = 1;
            let du = f6.orientation.dir(wu, EndSlot::First);
            let dv = f6.orientation.dir(wv, EndSlot::First);
            let su = slot_at(g, negative, ind.vertices[u_loc]);
            match su {
                EndSlot::First => dirs[negative] = (du, dv),
                EndSlot::Second => dirs[negative] = (dv, du),
            }
            if f6.value(wu) != 1 || f6.value(wv) != 1 || f6.value(wt) != 2 {
                return Err(Error::invariant(
                    "end block values came out wrong".to_string(),
                ));
            }
            set_bridge_half(
                &mut dirs,
                bridge,
                t_old,
                f6.orientation.dir(wt, EndSlot::First),
            );
        } else {
            if !block_negs.is_empty() {
                return Err(Error::invariant(
                    "middle blocks must be all-positive".to_string(),
                ));
            }
            let s_old = attach(left_bridge.unwrap());
            let t_old = attach(right_bridge.unwrap());
            if s_old == t_old {
                return Err(Error::invariant(
                    "middle block attaches both bridges at one vertex".to_string(),
                ));
            }
            let ind = g.induced(comp)?;
            let s_loc = ind.new_vertex(s_old).unwrap();
            let t_loc = ind.new_vertex(t_old).unwrap();
            let mut h = ind.graph.clone();
            let syn = h.add_edge(s_loc, t_loc, Sign::Positive)?;
            let mut f = six_flow_inner(&h, syn, 2, 0)?;
            if f.orientation.dir(syn, EndSlot::First) == HalfDir::Out {
                f = f.negated().made_all_positive();
            }
            if f.orientation.dir(syn, EndSlot::First) != HalfDir::In || f.value(syn) != 2 {
                return Err(Error::invariant(
                    "middle block boundary came out wrong".to_string(),
                ));
            }
            for (le, &old) in ind.edges.iter().enumerate() {
                dirs[old] = f.orientation.dirs(le);
                values[old] = f.value(le);
            }
            // traffic enters at the left attachment and leaves at the right
            set_bridge_half(&mut dirs, left_bridge.unwrap(), s_old, HalfDir::In);
            set_bridge_half(&mut dirs, right_bridge.unwrap(), t_old, HalfDir::Out);
        }
    }

    let flow = Flow::integer(Orientation::from_dirs(dirs), values, 6);
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("assembled bridge-chain flow fails: {e}")))?;
    Ok(flow)
}

fn promote_precondition(e: Error) -> Error {
    match e {
        Error::Precondition(msg) => Error::invariant(format!(
            "rewired end block no longer meets the pinned-flow requirements: {msg}"
        )),
        other => other,
    }
}

// ---------------------------------------------------------------------
// 6-flows via colorability or criticality
// ---------------------------------------------------------------------

/// Nowhere-zero 6-flow with both negatives at value 1 on a connected cubic
/// signed graph with two negative edges whose underlying graph is
/// 3-edge-colorable or a critical uncolorable graph. Negative pairs that
/// form a cut, or sit partly in a 2-cut, are split off first.
pub fn colorable_or_critical_six_flow(g: &SignedGraph) -> Result<Built> {
    let mut steps = Vec::new();
    let (flow, terminal) = colorable_critical_inner(g, 0, &mut steps)?;
    let negs = g.negative_edges();
    for &n in &negs {
        if flow.value(n) != 1 {
            return Err(Error::invariant(format!(
                "negative edge {n} must end at value 1"
            )));
        }
    }
    Ok(Built {
        flow,
        witness_path: None,
        trace: ConstructionTrace {
            method: terminal.to_string(),
            steps,
        },
    })
}

fn colorable_critical_inner(
    g: &SignedGraph,
    depth: usize,
    steps: &mut Vec<String>,
) -> Result<(Flow, &'static str)> {
    if depth > REDUCTION_DEPTH_LIMIT {
        return Err(Error::invariant(
            "cut reduction failed to shrink the graph".to_string(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected("need a connected graph".to_string()));
    }
    if !g.is_cubic() {
        return Err(Error::NotCubic("need a cubic graph".to_string()));
    }
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre(format!(
            "need exactly two negative edges, got {}",
            negs.len()
        )));
    };
    if let structure::Admissibility::NotAdmissible(reason) = structure::admissibility(g) {
        return Err(Error::NoFlow(format!("not flow-admissible: {reason}")));
    }

    if g.is_edge_cut(&[n1, n2]) {
        steps.push(format!(
            "negative pair {n1},{n2} is a cut; split and rejoin"
        ));
        return Ok((cut_pair_six_flow(g)?, "cut6"));
    }

    // a 2-cut holding exactly one negative: split, solve the negative side
    // at boundary value 1, fill the positive side
    let cuts = structure::minimal_two_cuts(g)?;
    if let Some(cs) = cuts
        .iter()
        .find(|cs| cs.edges.iter().filter(|&&f| f == n1 || f == n2).count() == 1)
    {
        steps.push(format!("splitting at mixed 2-cut {:?}", cs.edges));
        let r = structure::reduce_two_cut(g, [cs.edges[0], cs.edges[1]])?;
        let (f1, terminal) = colorable_critical_inner(&r.g1, depth + 1, steps)?;
        if f1.abs_value(r.new_edge_g1) != 1 {
            return Err(Error::invariant(
                "negative boundary edge must carry 1".to_string(),
            ));
        }
        if !r.g2.is_all_positive() {
            return Err(Error::invariant(
                "positive side kept a negative edge".to_string(),
            ));
        }
        let f2 = six_flow_inner(&r.g2, r.new_edge_g2, 1, 0)?;
        let combined = structure::recombine_matched(&r, &f1, &f2)?.made_all_positive();
        return Ok((combined, terminal));
    }

    match matching::three_edge_coloring(g)? {
        Some(coloring) => {
            steps.push("underlying graph is 3-edge-colorable".to_string());
            Ok((colorable_case(g, &coloring, n1, n2)?, "colorable6"))
        }
        None => match matching::is_critical_snark(g) {
            Ok(true) => {
                steps.push("underlying graph is a critical uncolorable graph".to_string());
                Ok((critical_case(g, n1, n2)?, "critical6"))
            }
            Ok(false) | Err(Error::Precondition(_)) => Err(Error::pre(
                "underlying graph is neither 3-edge-colorable nor critical".to_string(),
            )),
            Err(other) => Err(other),
        },
    }
}

/// Colorable case: a sign-blind 4-flow puts value 1 on both negatives;
/// sending two more units from the tail of one negative to the head of
/// the other pays for turning the first outward and the second inward.
/// The two units travel a residual walk: +2 along arcs, -2 against
/// odd-valued arcs, so every value stays nonzero and below 6 in absolute
/// value. Edges crossed against their arc may end at -1, which is kept.
fn colorable_case(
    g: &SignedGraph,
    coloring: &EdgeColoring,
    n1: EdgeId,
    n2: EdgeId,
) -> Result<Flow> {
    let circ = unit_pair_circulation(g, coloring, n1, n2)?;
    let (mut dirs, mut values) = circ.into_arcs(g);
    let (x1, _) = arc_ends(g, &dirs, n1);
    let (_, y2) = arc_ends(g, &dirs, n2);

    // Such a walk always exists here: were the head unreachable, the
    // reachable set's boundary could only balance as a 3-edge-cut made of
    // the two negatives and one value-2 edge, and flow-admissibility
    // rules that cut out.
    let walk = residual_walk(g, &dirs, &values, x1, y2, &[n1, n2]).ok_or_else(|| {
        Error::invariant("no residual connection between the negative ends".to_string())
    })?;
    for &(e, forward) in &walk {
        values[e] += if forward { 2 } else { -2 };
    }

    let s1 = slot_at(g, n1, x1);
    flip_at(&mut dirs, n1, s1);
    let s2 = slot_at(g, n2, y2);
    flip_at(&mut dirs, n2, s2);

    let flow = Flow::integer(Orientation::from_dirs(dirs), values, 6);
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("colorable-case flow fails: {e}")))?;
    Ok(flow)
}

/// Critical case: delete one negative, smooth, 4-color the rest, pin value
/// 1 on the surviving negative, lift back, then pay for reinserting the
/// deleted negative outward (value 1 at both ends) with two unit walks
/// into the other negative's head.
fn critical_case(g: &SignedGraph, n1: EdgeId, n2: EdgeId) -> Result<Flow> {
    let (cut, kept) = g.delete_edges(&[n1]);
    let n2_cut = kept
        .iter()
        .position(|&old| old == n2)
        .ok_or_else(|| Error::invariant("second negative vanished".to_string()))?;
    // the whole smoothed stage is sign-blind; work on the positive twin
    let cut = cut.with_edge_sign(n2_cut, Sign::Positive);
    let sup = structure::suppress_degree_two(&cut);
    if !sup.graph.is_cubic() || sup.graph.edges().iter().any(|e| e.u == e.v) {
        return Err(Error::invariant(
            "smoothing must stay cubic and loopless".to_string(),
        ));
    }
    let coloring = matching::three_edge_coloring(&sup.graph)?.ok_or_else(|| {
        Error::invariant("critical graph minus an edge must be colorable".to_string())
    })?;
    let n2_small = sup.edge_map[n2_cut];
    let circ = unit_pair_circulation(&sup.graph, &coloring, n2_small, n2_small)?;
    let (sdirs, svalues) = circ.into_arcs(&sup.graph);
    let small = Flow::integer(Orientation::from_dirs(sdirs), svalues, 4);
    small
        .verify(&sup.graph)
        .map_err(|e| Error::invariant(format!("smoothed 4-flow fails: {e}")))?;
    let lifted = sup.lift(&small)?;

    // move back onto g's edge ids; n1 is absent for now
    let mut dirs: Vec<(HalfDir, HalfDir)> = vec![(HalfDir::In, HalfDir::In); g.m()];
    let mut values: Vec<i64> = vec![0; g.m()];
    for (ce, &old) in kept.iter().enumerate() {
        dirs[old] = lifted.orientation.dirs(ce);
        values[old] = lifted.value(ce);
    }
    if values[n2] != 1 {
        return Err(Error::invariant(
            "surviving negative must carry value 1".to_string(),
        ));
    }

    let (a, b) = g.endpoints(n1);
    let (_, y2) = arc_ends(g, &dirs, n2);
    dirs[n1] = (HalfDir::In, HalfDir::In);
    values[n1] = 1;
    let p1 = raw_path(g, &dirs, &values, a, y2, &[n1, n2])
        .ok_or_else(|| Error::invariant("no unit walk from the first endpoint".to_string()))?;
    for &e in &p1.edges {
        values[e] += 1;
    }
    let p2 = raw_path(g, &dirs, &values, b, y2, &[n1, n2])
        .ok_or_else(|| Error::invariant("no unit walk from the second endpoint".to_string()))?;
    for &e in &p2.edges {
        values[e] += 1;
    }
    let sy = slot_at(g, n2, y2);
    flip_at(&mut dirs, n2, sy);

    let flow = Flow::integer(Orientation::from_dirs(dirs), values, 6);
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("critical-case flow fails: {e}")))?;
    Ok(flow)
}

// ---------------------------------------------------------------------
// rewiring the negative pair away, and lifting flows back
// ---------------------------------------------------------------------

/// All-positive stand-in for a two-negative signed graph: both negatives
/// are removed and one new positive edge joins their first endpoints.
#[derive(Debug, Clone)]
pub struct Rewired {
    pub graph: SignedGraph,
    /// rewired edge id -> original id; None for the replacement edge
    pub to_original: Vec<Option<EdgeId>>,
    pub ux: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub x: VertexId,
    pub y: VertexId,
}

pub fn rewire_negative_pair(g: &SignedGraph) -> Result<Rewired> {
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre(format!(
            "need exactly two negative edges, got {}",
            negs.len()
        )));
    };
    let (u, v) = g.endpoints(n1);
    let (x, y) = g.endpoints(n2);
    if u == v || x == y || [u, v].contains(&x) || [u, v].contains(&y) {
        return Err(Error::pre(
            "negative edges must be vertex-disjoint non-loops".to_string(),
        ));
    }
    let (mut graph, kept) = g.delete_edges(&[n1, n2]);
    let mut to_original: Vec<Option<EdgeId>> = kept.iter().map(|&old| Some(old)).collect();
    let ux = graph.add_edge(u, x, Sign::Positive)?;
    to_original.push(None);
    Ok(Rewired {
        graph,
        to_original,
        ux,
        u,
        v,
        x,
        y,
    })
}

/// Lifted flow plus the walk that absorbed the reinsertion.
#[derive(Debug, Clone)]
pub struct Lifted {
    pub flow: Flow,
    pub path: DirectedPath,
}

/// Lift a nowhere-zero k-flow of the rewired graph with |values(ux)| = 1
/// back to the signed graph as a nowhere-zero (k+1)-flow, all values
/// positive, both negatives at value 1 (the removed pair returns inward at
/// u,v and outward at x,y), and a directed walk that carries every edge of
/// the top value k and no edge of value 1. The walk properties are checked
/// on the result, not assumed.
pub fn general_lift(g: &SignedGraph, f_star: &Flow) -> Result<Lifted> {
    let rw = rewire_negative_pair(g)?;
    f_star.verify(&rw.graph).map_err(|e| {
        Error::pre(format!(
            "supplied flow is invalid on the rewired graph: {e}"
        ))
    })?;
    if f_star.arithmetic != Arithmetic::Integer {
        return Err(Error::pre("lift needs an integer flow".to_string()));
    }
    if f_star.abs_value(rw.ux) != 1 {
        return Err(Error::pre(format!(
            "replacement edge must carry value 1, got {}",
            f_star.abs_value(rw.ux)
        )));
    }
    let mut f = f_star.made_all_positive();
    if f.orientation.dir(rw.ux, EndSlot::First) == HalfDir::In {
        f = f.negated().made_all_positive();
    }
    debug_assert_eq!(f.orientation.dir(rw.ux, EndSlot::First), HalfDir::Out);

    let path_star = find_directed_path_avoiding(&rw.graph, &f, rw.y, rw.v, &[rw.ux]).map_err(|_| {
        Error::invariant(
            "no directed walk from y to v off the replacement edge; the rewired graph should be bridgeless".to_string(),
        )
    })?;

    let negs = g.negative_edges();
    let (n1, n2) = (negs[0], negs[1]);
    let k = f.k;
    let mut dirs: Vec<(HalfDir, HalfDir)> = vec![(HalfDir::In, HalfDir::In); g.m()];
    let mut values: Vec<i64> = vec![0; g.m()];
    for (re, &old) in rw.to_original.iter().enumerate() {
        if let Some(old) = old {
            dirs[old] = f.orientation.dirs(re);
            values[old] = f.value(re);
        }
    }
    // uv turns inward where ux left u; xy turns outward where ux entered x
    dirs[n1] = (HalfDir::Out, HalfDir::Out);
    values[n1] = 1;
    dirs[n2] = (HalfDir::In, HalfDir::In);
    values[n2] = 1;

    let path = DirectedPath {
        vertices: path_star.vertices.clone(),
        edges: path_star
            .edges
            .iter()
            .map(|&re| rw.to_original[re].expect("the walk avoids the replacement edge"))
            .collect(),
    };
    for &e in &path.edges {
        values[e] += 1;
    }

    let flow = Flow::integer(Orientation::from_dirs(dirs), values, k + 1);
    flow.verify(g)
        .map_err(|e| Error::invariant(format!("lifted flow fails verification: {e}")))?;
    if flow.value(n1) != 1 || flow.value(n2) != 1 {
        return Err(Error::invariant(
            "negatives must end at value 1".to_string(),
        ));
    }
    verify_peak_path(g, &flow, &path)?;
    Ok(Lifted { flow, path })
}

/// Lift restricted to 5-flows: given one on the rewired graph with value 1
/// on the replacement edge, produce the 6-flow. No search happens here.
pub fn five_flow_conditional_lift(g: &SignedGraph, f5: &Flow) -> Result<Lifted> {
    if f5.k != 5 {
        return Err(Error::pre(format!("expected a 5-flow, got k={}", f5.k)));
    }
    general_lift(g, f5)
}

// ---------------------------------------------------------------------
// the general dispatcher
// ---------------------------------------------------------------------

/// Nowhere-zero integer flow with both negatives at value 1 on any
/// connected flow-admissible cubic signed graph with two negative edges.
/// Bridged graphs and cut negative pairs come out as 6-flows; everything
/// else as a 7-flow whose value-6 edges sit on one directed walk, returned
/// as the witness path.
pub fn seven_flow(g: &SignedGraph) -> Result<Built> {
    let mut steps = Vec::new();
    let (flow, witness, terminal) = seven_inner(g, 0, &mut steps)?;
    let negs = g.negative_edges();
    for &n in &negs {
        if flow.value(n) != 1 {
            return Err(Error::invariant(format!(
                "negative edge {n} must end at value 1"
            )));
        }
    }
    if let Some(path) = &witness {
        verify_peak_path(g, &flow, path)?;
    } else if flow.k > 6 {
        return Err(Error::invariant(
            "7-flow outcomes must carry a witness path".to_string(),
        ));
    }
    Ok(Built {
        flow,
        witness_path: witness,
        trace: ConstructionTrace {
            method: terminal.to_string(),
            steps,
        },
    })
}

fn seven_inner(
    g: &SignedGraph,
    depth: usize,
    steps: &mut Vec<String>,
) -> Result<(Flow, Option<DirectedPath>, &'static str)> {
    if depth > REDUCTION_DEPTH_LIMIT {
        return Err(Error::invariant(
            "cut reduction failed to shrink the graph".to_string(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected("need a connected graph".to_string()));
    }
    if !g.is_cubic() {
        return Err(Error::NotCubic("need a cubic graph".to_string()));
    }
    let negs = g.negative_edges();
    let [n1, n2] = negs[..] else {
        return Err(Error::pre(format!(
            "need exactly two negative edges, got {}",
            negs.len()
        )));
    };
    if let structure::Admissibility::NotAdmissible(reason) = structure::admissibility(g) {
        return Err(Error::NoFlow(format!("not flow-admissible: {reason}")));
    }

    if !structure::bridges(g).is_empty() {
        steps.push("bridged: handing over to the bridge builder".to_string());
        let flow = bridge_six_inner(g, 0)?;
        let flow = orient_lower_negative_outward(g, flow, &negs)?;
        return Ok((flow, None, "bridge6"));
    }

    if g.is_edge_cut(&[n1, n2]) {
        steps.push(format!(
            "negative pair {n1},{n2} is a cut; split and rejoin"
        ));
        return Ok((cut_pair_six_flow(g)?, None, "cut6"));
    }

    let cuts = structure::minimal_two_cuts(g)?;
    if let Some(cs) = cuts
        .iter()
        .find(|cs| cs.edges.iter().filter(|&&f| f == n1 || f == n2).count() == 1)
    {
        steps.push(format!("splitting at mixed 2-cut {:?}", cs.edges));
        let r = structure::reduce_two_cut(g, [cs.edges[0], cs.edges[1]])?;
        let (f1, w1, terminal) = seven_inner(&r.g1, depth + 1, steps)?;
        if f1.abs_value(r.new_edge_g1) != 1 {
            return Err(Error::invariant(
                "negative boundary edge must carry 1".to_string(),
            ));
        }
        let f2 = six_flow_inner(&r.g2, r.new_edge_g2, 1, 0)?;
        let f2 = Flow::integer(f2.orientation.clone(), f2.values.clone(), f1.k);
        let combined = structure::recombine_matched(&r, &f1, &f2)?.made_all_positive();
        let witness = match w1 {
            None => None,
            Some(p) => {
                let mapped = DirectedPath {
                    vertices: p.vertices.iter().map(|&w| r.g1_vertices[w]).collect(),
                    edges: p
                        .edges
                        .iter()
                        .map(|&e| {
                            r.g1_edges[e].ok_or_else(|| {
                                Error::invariant(
                                    "witness walk crossed the boundary edge".to_string(),
                                )
                            })
                        })
                        .collect::<Result<Vec<_>>>()?,
                };
                verify_peak_path(&r.original, &combined, &mapped)?;
                Some(mapped)
            }
        };
        return Ok((combined, witness, terminal));
    }

    // bridgeless, negatives in no small cut: rewire, smooth, pin value 1,
    // lift back as a 7-flow
    steps.push("rewiring the negative pair to one positive edge".to_string());
    let rw = rewire_negative_pair(g)?;
    if !structure::is_bridgeless(&rw.graph) {
        return Err(Error::invariant(
            "rewired graph must stay bridgeless".to_string(),
        ));
    }
    let sup = structure::suppress_degree_two(&rw.graph);
    if !sup.graph.is_cubic() || sup.graph.edges().iter().any(|e| e.u == e.v) {
        return Err(Error::invariant(
            "smoothing must stay cubic and loopless".to_string(),
        ));
    }
    let ux_small = sup.edge_map[rw.ux];
    let f_small = six_flow_inner(&sup.graph, ux_small, 1, 0)?;
    let f_star = sup.lift(&f_small)?.made_all_positive();
    let lifted = general_lift(g, &f_star)?;
    Ok((lifted.flow, Some(lifted.path), "seven"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn k33_indep() -> SignedGraph {
        gen::with_negatives(&gen::k33(), &[0, 4])
    }

    #[test]
    fn directed_path_follows_arrows() {
        let g = gen::theta();
        let dirs = vec![
            (HalfDir::Out, HalfDir::In),
            (HalfDir::Out, HalfDir::In),
            (HalfDir::In, HalfDir::Out),
        ];
        let f = Flow::integer(Orientation::from_dirs(dirs), vec![1, 1, 2], 3);
        f.verify(&g).unwrap();
        let p = find_directed_path(&g, &f, 0, 1).unwrap();
        assert_eq!(p.edges, vec![0]);
        assert_eq!(p.vertices, vec![0, 1]);
        let back = find_directed_path(&g, &f, 1, 0).unwrap();
        assert_eq!(back.edges, vec![2]);
        let trivial = find_directed_path(&g, &f, 1, 1).unwrap();
        assert!(trivial.is_trivial());
    }

    #[test]
    fn reroute_modes() {
        let g = gen::theta();
        let dirs = vec![
            (HalfDir::Out, HalfDir::In),
            (HalfDir::Out, HalfDir::In),
            (HalfDir::In, HalfDir::Out),
        ];
        let f = Flow::integer(Orientation::from_dirs(dirs), vec![1, 1, 2], 3);
        let p = find_directed_path(&g, &f, 0, 1).unwrap();
        let rev = reroute_along_path(&g, &f, &p, Reroute::ReverseComplement).unwrap();
        assert_eq!(rev.value(0), 2);
        assert_eq!(rev.orientation.dirs(0), (HalfDir::In, HalfDir::Out));
        let add = reroute_along_path(&g, &f, &p, Reroute::Add(1)).unwrap();
        assert_eq!(add.value(0), 2);
        assert!(reroute_along_path(&g, &f, &p, Reroute::Add(2)).is_err());
    }

    #[test]
    fn four_flow_puts_two_on_the_negatives() {
        let g = k33_indep();
        let factor = matching::one_factor_containing_two(&g, 0, 4).unwrap();
        let coloring = matching::coloring_around_factor(&g, &factor).unwrap();
        let f = four_flow_negatives_value2(&g, &coloring).unwrap();
        f.verify(&g).unwrap();
        assert_eq!(f.k, 4);
        assert_eq!(f.value(0), 2);
        assert_eq!(f.value(4), 2);
    }

    #[test]
    fn four_flow_rejects_split_classes() {
        // adjacent negatives always land in different classes
        let g = gen::with_negatives(&gen::k4(), &[0, 4]);
        let coloring = matching::three_edge_coloring(&g).unwrap().unwrap();
        assert!(matches!(
            four_flow_negatives_value2(&g, &coloring),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bipartite_four_flow_end_to_end() {
        let built = bipartite_four_flow(&k33_indep()).unwrap();
        built.flow.verify(&k33_indep()).unwrap();
        assert_eq!(built.flow.k, 4);
        assert_eq!(built.flow.value(0), 2);
        assert_eq!(built.flow.value(4), 2);

        let cube = gen::cube();
        let pairs = gen::two_negative_signatures(&cube, gen::SignaturePolicy::Admissible);
        assert!(!pairs.is_empty());
        for pair in pairs {
            let sg = gen::with_negatives(&cube, &pair);
            let built = bipartite_four_flow(&sg).unwrap();
            built.flow.verify(&sg).unwrap();
            assert_eq!(built.flow.value(pair[0]), 2);
            assert_eq!(built.flow.value(pair[1]), 2);
        }
    }

    #[test]
    fn bipartite_four_flow_rejections() {
        let not_bip = gen::with_negatives(&gen::k4(), &[0, 5]);
        assert!(matches!(
            bipartite_four_flow(&not_bip),
            Err(Error::Precondition(_))
        ));
        // adjacent negatives share a vertex star, a 3-cut
        let inadmissible = gen::with_negatives(&gen::k33(), &[0, 1]);
        assert!(matches!(
            bipartite_four_flow(&inadmissible),
            Err(Error::NoFlow(_))
        ));
    }

    #[test]
    fn prescribed_mod6_flow_holds_the_triple() {
        let g = gen::k4();
        let f = z6_flow_prescribed_at_vertex(&g, 0, 1, 2, 3).unwrap();
        f.verify(&g).unwrap();
        // edges 0,1,2 leave vertex 0 in stored order, so out-values are
        // the residues as given
        for (e, want) in [(0, 1), (1, 2), (2, 3)] {
            assert_eq!(f.orientation.dir(e, EndSlot::First), HalfDir::Out);
            assert_eq!(f.value(e), want);
        }
        assert!(matches!(
            z6_flow_prescribed_at_vertex(&g, 0, 1, 1, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            z6_flow_prescribed_at_vertex(&gen::dumbbell(), 0, 1, 2, 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn integer_conversion_keeps_the_pins() {
        let g = gen::k4();
        let zf = z6_flow_prescribed_at_vertex(&g, 0, 1, 2, 3).unwrap();
        let (f, norms) = z6_to_integer6(&g, &zf, 0, 0, 1, 2).unwrap();
        f.verify(&g).unwrap();
        assert_eq!(f.arithmetic, Arithmetic::Integer);
        assert_eq!(f.value(0), 1);
        assert_eq!(f.value(1), 2);
        assert_eq!(f.value(2), 3);
        assert_eq!(f.orientation.dir(0, EndSlot::First), HalfDir::Out);
        assert_eq!(f.orientation.dir(1, EndSlot::First), HalfDir::Out);
        assert_eq!(f.orientation.dir(2, EndSlot::First), HalfDir::In);
        assert!(norms.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(*norms.last().unwrap(), 0);
    }

    #[test]
    fn six_flow_hits_every_target_on_theta() {
        let g = gen::theta();
        for t in 1..=5 {
            let f = six_flow_choose_value(&g, 0, t).unwrap();
            f.verify(&g).unwrap();
            assert_eq!(f.abs_value(0), t);
            assert!(f.values.iter().all(|&v| v > 0));
        }
    }

    #[test]
    fn six_flow_on_three_edge_connected_hosts() {
        for g in [gen::k4(), gen::prism(), gen::petersen()] {
            for t in [1, 3, 5] {
                let f = six_flow_choose_value(&g, 2, t).unwrap();
                f.verify(&g).unwrap();
                assert_eq!(f.abs_value(2), t);
            }
        }
    }

    /// Two K4-minus-an-edge pieces joined by a positive 2-cut.
    fn two_cut_host() -> SignedGraph {
        SignedGraph::all_positive(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (2, 6),
                (3, 7),
            ],
        )
        .unwrap()
    }

    #[test]
    fn six_flow_splits_at_two_cuts() {
        let g = two_cut_host();
        assert!(structure::is_bridgeless(&g));
        assert!(!structure::minimal_two_cuts(&g).unwrap().is_empty());
        for (e, t) in [(10, 3), (0, 5), (7, 1)] {
            let f = six_flow_choose_value(&g, e, t).unwrap();
            f.verify(&g).unwrap();
            assert_eq!(f.abs_value(e), t);
        }
    }

    #[test]
    fn bridge_six_flow_on_the_dumbbell() {
        let g = gen::with_negatives(&gen::dumbbell(), &[0, 2]);
        let built = bridge_six_flow(&g).unwrap();
        let f = &built.flow;
        f.verify(&g).unwrap();
        assert_eq!(f.k, 6);
        assert_eq!(f.value(0), 1);
        assert_eq!(f.value(2), 1);
        assert_eq!(f.abs_value(1), 2);
        assert_eq!(f.orientation.kind(0), EdgeOrient::Extroverted);
        assert_eq!(f.orientation.kind(2), EdgeOrient::Introverted);
    }

    #[test]
    fn bridge_six_flow_across_the_corpus_sample() {
        for (l, m, r) in [(0, 0, 0), (1, 1, 4), (3, 2, 5), (2, 0, 1)] {
            let g = gen::bridged_chain(l, m, r);
            let built = bridge_six_flow(&g).unwrap();
            built.flow.verify(&g).unwrap();
            for n in g.negative_edges() {
                assert_eq!(built.flow.value(n), 1);
            }
            for b in structure::bridges(&g) {
                assert_eq!(built.flow.abs_value(b), 2);
            }
        }
    }

    #[test]
    fn bridge_six_flow_needs_a_bridge() {
        assert!(matches!(
            bridge_six_flow(&k33_indep()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn colorable_case_on_small_hosts() {
        for (g, pair) in [
            (gen::k4(), [0usize, 5usize]),
            (gen::prism(), [0, 4]),
            (gen::k33(), [0, 4]),
        ] {
            let sg = gen::with_negatives(&g, &pair);
            if !structure::is_flow_admissible(&sg) {
                continue;
            }
            let built = colorable_or_critical_six_flow(&sg).unwrap();
            built.flow.verify(&sg).unwrap();
            assert_eq!(built.flow.value(pair[0]), 1);
            assert_eq!(built.flow.value(pair[1]), 1);
        }
    }

    #[test]
    fn critical_case_on_petersen() {
        let g = gen::petersen();
        let pairs = gen::two_negative_signatures(&g, gen::SignaturePolicy::Admissible);
        assert!(!pairs.is_empty());
        let sg = gen::with_negatives(&g, &pairs[0]);
        let built = colorable_or_critical_six_flow(&sg).unwrap();
        assert_eq!(built.trace.method, "critical6");
        built.flow.verify(&sg).unwrap();
        assert_eq!(built.flow.value(pairs[0][0]), 1);
        assert_eq!(built.flow.value(pairs[0][1]), 1);
    }

    #[test]
    fn cut_pair_dispatch() {
        let host = two_cut_host();
        let sg = gen::with_negatives(&host, &[10, 11]);
        assert!(structure::is_flow_admissible(&sg));
        let built = seven_flow(&sg).unwrap();
        assert_eq!(built.trace.method, "cut6");
        built.flow.verify(&sg).unwrap();
        assert_eq!(built.flow.value(10), 1);
        assert_eq!(built.flow.value(11), 1);
    }

    #[test]
    fn mixed_cut_dispatch() {
        let host = two_cut_host();
        // one negative inside the left piece, one on the cut
        let sg = gen::with_negatives(&host, &[0, 10]);
        if !structure::is_flow_admissible(&sg) {
            panic!("fixture must be admissible");
        }
        let built = seven_flow(&sg).unwrap();
        built.flow.verify(&sg).unwrap();
        assert_eq!(built.flow.value(0), 1);
        assert_eq!(built.flow.value(10), 1);
    }

    #[test]
    fn seven_flow_on_three_edge_connected_hosts() {
        for (g, pair) in [(gen::k4(), [0usize, 5usize]), (gen::petersen(), [0, 12])] {
            let sg = gen::with_negatives(&g, &pair);
            if !structure::is_flow_admissible(&sg) {
                continue;
            }
            let built = seven_flow(&sg).unwrap();
            built.flow.verify(&sg).unwrap();
            assert_eq!(built.flow.value(pair[0]), 1);
            assert_eq!(built.flow.value(pair[1]), 1);
            if built.flow.k == 7 {
                let path = built.witness_path.as_ref().unwrap();
                verify_peak_path(&sg, &built.flow, path).unwrap();
            }
        }
    }

    #[test]
    fn seven_flow_takes_bridged_inputs() {
        let g = gen::bridged_chain(0, 1, 2);
        let built = seven_flow(&g).unwrap();
        assert_eq!(built.trace.method, "bridge6");
        built.flow.verify(&g).unwrap();
    }

    #[test]
    fn lift_from_an_oracle_five_flow() {
        let g = gen::with_negatives(&gen::k4(), &[0, 5]);
        let rw = rewire_negative_pair(&g).unwrap();
        let mut pres = Prescriptions::none();
        pres.magnitude.push((rw.ux, 1));
        let outcome =
            oracle::exists_integer_flow(&rw.graph, 5, &pres, &SearchBudget::default()).unwrap();
        let Outcome::Yes(f5) = outcome else {
            panic!("a 5-flow with a unit replacement edge must exist on rewired K4");
        };
        let lifted = five_flow_conditional_lift(&g, &f5).unwrap();
        lifted.flow.verify(&g).unwrap();
        assert_eq!(lifted.flow.k, 6);
        assert_eq!(lifted.flow.value(0), 1);
        assert_eq!(lifted.flow.value(5), 1);
        verify_peak_path(&g, &lifted.flow, &lifted.path).unwrap();

        let f4 = Flow::integer(f5.orientation.clone(), f5.values.clone(), 4);
        assert!(five_flow_conditional_lift(&g, &f4).is_err());
    }
}

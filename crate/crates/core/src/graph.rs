//! Signed multigraphs.
//!
//! Vertices and edges are dense indices. Loops and parallel edges are
//! first-class: an edge is an ordered pair of endpoint *slots*, so a loop
//! still has two distinguishable ends. Signs live on edges; switching at a
//! vertex set flips every edge with exactly one endpoint inside the set.

use crate::{EdgeId, Error, Result, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    /// +1 or -1.
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

/// Which end of an edge. `First` is the end stored at `Edge::u`, `Second`
/// the one at `Edge::v`. For a loop both slots sit at the same vertex but
/// remain distinct ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndSlot {
    First,
    Second,
}

impl EndSlot {
    pub fn other(self) -> EndSlot {
        match self {
            EndSlot::First => EndSlot::Second,
            EndSlot::Second => EndSlot::First,
        }
    }

    pub fn index(self) -> usize {
        match self {
            EndSlot::First => 0,
            EndSlot::Second => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

impl Edge {
    pub fn endpoint(&self, slot: EndSlot) -> VertexId {
        match slot {
            EndSlot::First => self.u,
            EndSlot::Second => self.v,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A multigraph with signed edges.
///
/// Construction is append-only: create with [`SignedGraph::new`] and add
/// edges, or use [`SignedGraph::from_edges`]. All derived structures
/// (adjacency) are maintained eagerly, and adjacency lists are in ascending
/// edge-id order by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(EdgeId, EndSlot)>>,
}

impl SignedGraph {
    pub fn new(n: usize) -> SignedGraph {
        SignedGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, list: &[(VertexId, VertexId, Sign)]) -> Result<SignedGraph> {
        let mut g = SignedGraph::new(n);
        for &(u, v, sign) in list {
            g.add_edge(u, v, sign)?;
        }
        Ok(g)
    }

    /// Convenience for tests and generators: all edges positive.
    pub fn all_positive(n: usize, list: &[(VertexId, VertexId)]) -> Result<SignedGraph> {
        let signed: Vec<_> = list.iter().map(|&(u, v)| (u, v, Sign::Positive)).collect();
        SignedGraph::from_edges(n, &signed)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, sign: Sign) -> Result<EdgeId> {
        if u >= self.n || v >= self.n {
            return Err(Error::pre(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, sign });
        self.adj[u].push((id, EndSlot::First));
        self.adj[v].push((id, EndSlot::Second));
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn sign(&self, e: EdgeId) -> Sign {
        self.edges[e].sign
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.edges[e].u, self.edges[e].v)
    }

    pub fn endpoint(&self, e: EdgeId, slot: EndSlot) -> VertexId {
        self.edges[e].endpoint(slot)
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.edges[e].is_loop()
    }

    /// Incidences at `v` in ascending edge-id order. A loop at `v` appears
    /// twice, once per slot. Degree (loops counted twice) is the length.
    pub fn incidences(&self, v: VertexId) -> &[(EdgeId, EndSlot)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == 3)
    }

    pub fn negative_edges(&self) -> Vec<EdgeId> {
        (0..self.m())
            .filter(|&e| self.edges[e].sign.is_negative())
            .collect()
    }

    pub fn is_all_positive(&self) -> bool {
        self.edges.iter().all(|e| !e.sign.is_negative())
    }

    pub fn describe_edge(&self, e: EdgeId) -> String {
        let Edge { u, v, sign } = self.edges[e];
        let s = if sign.is_negative() { '-' } else { '+' };
        format!("edge {e} = ({u},{v},{s})")
    }

    /// Copy with one edge's sign replaced.
    pub fn with_edge_sign(&self, e: EdgeId, sign: Sign) -> SignedGraph {
        let mut g = self.clone();
        g.edges[e].sign = sign;
        g
    }

    pub fn with_edge_sign_flipped(&self, e: EdgeId) -> SignedGraph {
        self.with_edge_sign(e, self.edges[e].sign.flipped())
    }

    /// Copy with one extra edge; returns the new graph and the edge's id.
    pub fn with_edge_added(
        &self,
        u: VertexId,
        v: VertexId,
        sign: Sign,
    ) -> Result<(SignedGraph, EdgeId)> {
        let mut g = self.clone();
        let id = g.add_edge(u, v, sign)?;
        Ok((g, id))
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    /// Isolated vertices form singleton components.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = std::collections::VecDeque::new();
            seen[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &(e, slot) in &self.adj[v] {
                    let w = self.endpoint(e, slot.other());
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Subgraph induced on a vertex set: keeps edges with both endpoints
    /// inside. New ids follow ascending old ids.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<InducedSubgraph> {
        let mut vs: Vec<VertexId> = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if let Some(&big) = vs.last() {
            if big >= self.n {
                return Err(Error::pre(format!("vertex {big} out of range")));
            }
        }
        let mut old_to_new = vec![None; self.n];
        for (new, &old) in vs.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let mut graph = SignedGraph::new(vs.len());
        let mut edges = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if let (Some(nu), Some(nv)) = (old_to_new[e.u], old_to_new[e.v]) {
                graph.add_edge(nu, nv, e.sign)?;
                edges.push(id);
            }
        }
        Ok(InducedSubgraph {
            graph,
            vertices: vs,
            edges,
        })
    }

    /// Copy with the listed edges removed. The vertex set is unchanged;
    /// returns the new graph and the new-to-old edge id map.
    pub fn delete_edges(&self, removed: &[EdgeId]) -> (SignedGraph, Vec<EdgeId>) {
        let mut drop = vec![false; self.m()];
        for &e in removed {
            drop[e] = true;
        }
        let mut graph = SignedGraph::new(self.n);
        let mut map = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if !drop[id] {
                graph
                    .add_edge(e.u, e.v, e.sign)
                    .expect("endpoints already validated");
                map.push(id);
            }
        }
        (graph, map)
    }

    /// Switch at a vertex set: every edge with exactly one endpoint in the
    /// set changes sign. Loops never change.
    pub fn switch(&self, set: &SwitchingSet) -> Result<SignedGraph> {
        if set.in_set.len() != self.n {
            return Err(Error::pre(format!(
                "switching set sized for {} vertices, graph has {}",
                set.in_set.len(),
                self.n
            )));
        }
        let mut g = self.clone();
        for e in g.edges.iter_mut() {
            if set.in_set[e.u] != set.in_set[e.v] {
                e.sign = e.sign.flipped();
            }
        }
        Ok(g)
    }

    /// Balance test with certificate. Balanced means some switching makes
    /// every edge positive; the returned set is that switching (per
    /// component: the vertices 2-colored opposite to the least vertex).
    /// Unbalanced comes with a cycle carrying an odd number of negative
    /// edges: the first conflict in BFS order plus the tree path between
    /// its endpoints.
    pub fn balance(&self) -> Balance {
        // color[v]: 0 unvisited, +1 / -1 assigned
        let mut color = vec![0i8; self.n];
        let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; self.n];
        for root in 0..self.n {
            if color[root] != 0 {
                continue;
            }
            color[root] = 1;
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &(e, slot) in &self.adj[v] {
                    if self.is_loop(e) {
                        if slot == EndSlot::Second {
                            continue; // each loop considered once
                        }
                        if self.sign(e).is_negative() {
                            return Balance::Unbalanced { cycle: vec![e] };
                        }
                        continue;
                    }
                    let w = self.endpoint(e, slot.other());
                    let want = color[v] * self.sign(e).value() as i8;
                    if color[w] == 0 {
                        color[w] = want;
                        parent[w] = Some((e, v));
                        queue.push_back(w);
                    } else if color[w] != want {
                        return Balance::Unbalanced {
                            cycle: self.conflict_cycle(&parent, v, w, e),
                        };
                    }
                }
            }
        }
        let vs: Vec<VertexId> = (0..self.n).filter(|&v| color[v] == -1).collect();
        Balance::Balanced(SwitchingSet::from_vertices(self.n, &vs).expect("vertices in range"))
    }

    fn conflict_cycle(
        &self,
        parent: &[Option<(EdgeId, VertexId)>],
        v: VertexId,
        w: VertexId,
        conflict: EdgeId,
    ) -> Vec<EdgeId> {
        // chains of (edge up to parent) from each endpoint to the root
        let chain = |mut x: VertexId| {
            let mut verts = vec![x];
            let mut edges = Vec::new();
            while let Some((e, p)) = parent[x] {
                edges.push(e);
                verts.push(p);
                x = p;
            }
            (verts, edges)
        };
        let (va, ea) = chain(v);
        let (vb, eb) = chain(w);
        // drop the shared tail above the meeting point
        let mut ia = va.len();
        let mut ib = vb.len();
        while ia > 0 && ib > 0 && va[ia - 1] == vb[ib - 1] {
            ia -= 1;
            ib -= 1;
        }
        // va[ia] is the meeting vertex; edges below index ia/ib survive
        let mut cycle = vec![conflict];
        cycle.extend_from_slice(&ea[..ia.min(ea.len())]);
        cycle.extend_from_slice(&eb[..ib.min(eb.len())]);
        cycle.sort_unstable();
        cycle
    }

    pub fn is_balanced(&self) -> bool {
        matches!(self.balance(), Balance::Balanced(_))
    }

    /// Is the edge set a member of the cut space (a disjoint union of edge
    /// cuts)? Exactly when making those edges negative gives a balanced
    /// signature.
    pub fn is_edge_cut(&self, cut: &[EdgeId]) -> bool {
        let mut neg = vec![false; self.m()];
        for &e in cut {
            neg[e] = true;
        }
        let mut g = self.clone();
        for (id, e) in g.edges.iter_mut().enumerate() {
            e.sign = if neg[id] {
                Sign::Negative
            } else {
                Sign::Positive
            };
        }
        g.is_balanced()
    }

    /// Is this signature switching-equivalent to one with at most one
    /// negative edge? `Some(None)` means balanced, `Some(Some(e))` means
    /// flipping `e` (least such id) balances, `None` means neither.
    pub fn equivalent_to_at_most_one_negative(&self) -> Option<Option<EdgeId>> {
        if self.is_balanced() {
            return Some(None);
        }
        (0..self.m())
            .find(|&e| self.with_edge_sign_flipped(e).is_balanced())
            .map(Some)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Balance {
    Balanced(SwitchingSet),
    Unbalanced { cycle: Vec<EdgeId> },
}

/// A set of vertices to switch at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingSet {
    in_set: Vec<bool>,
}

impl SwitchingSet {
    pub fn empty(n: usize) -> SwitchingSet {
        SwitchingSet {
            in_set: vec![false; n],
        }
    }

    pub fn from_vertices(n: usize, vs: &[VertexId]) -> Result<SwitchingSet> {
        let mut in_set = vec![false; n];
        for &v in vs {
            if v >= n {
                return Err(Error::pre(format!("vertex {v} out of range for n={n}")));
            }
            in_set[v] = true;
        }
        Ok(SwitchingSet { in_set })
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.in_set[v]
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.in_set.len()).filter(|&v| self.in_set[v]).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.in_set.iter().any(|&b| b)
    }
}

/// Result of [`SignedGraph::induced`]: the subgraph plus new-to-old maps.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: SignedGraph,
    /// new vertex id -> old vertex id, ascending
    pub vertices: Vec<VertexId>,
    /// new edge id -> old edge id, ascending
    pub edges: Vec<EdgeId>,
}

impl InducedSubgraph {
    pub fn new_vertex(&self, old: VertexId) -> Option<VertexId> {
        self.vertices.binary_search(&old).ok()
    }

    pub fn new_edge(&self, old: EdgeId) -> Option<EdgeId> {
        self.edges.binary_search(&old).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_one_negative() -> SignedGraph {
        // 4-cycle, edge 2 negative
        SignedGraph::from_edges(
            4,
            &[
                (0, 1, Sign::Positive),
                (1, 2, Sign::Positive),
                (2, 3, Sign::Negative),
                (3, 0, Sign::Positive),
            ],
        )
        .unwrap()
    }

    #[test]
    fn loops_count_twice_in_degree() {
        let mut g = SignedGraph::new(2);
        g.add_edge(0, 0, Sign::Positive).unwrap();
        g.add_edge(0, 1, Sign::Negative).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 1);
        assert!(g.is_loop(0));
        assert!(!g.is_loop(1));
    }

    #[test]
    fn switching_is_an_involution() {
        let g = square_one_negative();
        let s = SwitchingSet::from_vertices(4, &[1, 2]).unwrap();
        let once = g.switch(&s).unwrap();
        assert_ne!(g, once);
        let twice = once.switch(&s).unwrap();
        assert_eq!(g, twice);
    }

    #[test]
    fn switching_never_touches_loops() {
        let mut g = SignedGraph::new(2);
        g.add_edge(0, 0, Sign::Negative).unwrap();
        g.add_edge(0, 1, Sign::Positive).unwrap();
        let s = SwitchingSet::from_vertices(2, &[0]).unwrap();
        let h = g.switch(&s).unwrap();
        assert_eq!(h.sign(0), Sign::Negative);
        assert_eq!(h.sign(1), Sign::Negative);
    }

    #[test]
    fn odd_cycle_of_negatives_is_unbalanced() {
        // triangle with one negative edge
        let g = SignedGraph::from_edges(
            3,
            &[
                (0, 1, Sign::Positive),
                (1, 2, Sign::Positive),
                (2, 0, Sign::Negative),
            ],
        )
        .unwrap();
        match g.balance() {
            Balance::Unbalanced { cycle } => {
                assert_eq!(cycle, vec![0, 1, 2]);
                let negs = cycle.iter().filter(|&&e| g.sign(e).is_negative()).count();
                assert_eq!(negs % 2, 1);
            }
            Balance::Balanced(_) => panic!("triangle with one negative must be unbalanced"),
        }
    }

    #[test]
    fn even_negatives_on_cycle_balance_out() {
        let g = square_one_negative().with_edge_sign_flipped(0);
        // now edges 0 and 2 negative: even count on the unique cycle
        match g.balance() {
            Balance::Balanced(s) => {
                let switched = g.switch(&s).unwrap();
                assert!(switched.is_all_positive());
            }
            Balance::Unbalanced { .. } => panic!("even number of negatives on a cycle"),
        }
    }

    #[test]
    fn negative_loop_is_its_own_witness() {
        let mut g = SignedGraph::new(1);
        g.add_edge(0, 0, Sign::Negative).unwrap();
        assert_eq!(g.balance(), Balance::Unbalanced { cycle: vec![0] });
    }

    #[test]
    fn parallel_edges_of_mixed_sign_are_unbalanced() {
        let g =
            SignedGraph::from_edges(2, &[(0, 1, Sign::Positive), (0, 1, Sign::Negative)]).unwrap();
        match g.balance() {
            Balance::Unbalanced { cycle } => assert_eq!(cycle, vec![0, 1]),
            _ => panic!("digon with one negative edge"),
        }
    }

    #[test]
    fn star_cuts_are_cuts_and_cycles_are_not() {
        // K4
        let g = SignedGraph::all_positive(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        // star at vertex 0
        assert!(g.is_edge_cut(&[0, 1, 2]));
        // triangle 1-2-3
        assert!(!g.is_edge_cut(&[3, 4, 5]));
        // symmetric difference of two stars is in the cut space
        assert!(g.is_edge_cut(&[1, 2, 3, 4]));
        assert!(g.is_edge_cut(&[]));
    }

    #[test]
    fn single_flip_equivalence_detected() {
        let g = square_one_negative();
        // unbalanced; flipping any one cycle edge balances, least id wins
        assert_eq!(g.equivalent_to_at_most_one_negative(), Some(Some(0)));
        assert_eq!(
            g.with_edge_sign_flipped(2)
                .equivalent_to_at_most_one_negative(),
            Some(None)
        );
    }

    #[test]
    fn two_negative_loops_are_not_one_flip_equivalent() {
        // dumbbell: any single flip leaves a negative loop
        let g = SignedGraph::from_edges(
            2,
            &[
                (0, 0, Sign::Negative),
                (0, 1, Sign::Positive),
                (1, 1, Sign::Negative),
            ],
        )
        .unwrap();
        assert_eq!(g.equivalent_to_at_most_one_negative(), None);
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = square_one_negative();
        let sub = g.induced(&[0, 2, 3]).unwrap();
        assert_eq!(sub.graph.n(), 3);
        // surviving edges: (2,3,-) and (3,0,+)
        assert_eq!(sub.edges, vec![2, 3]);
        assert_eq!(sub.new_vertex(3), Some(2));
        assert_eq!(sub.new_vertex(1), None);
        let (u, v) = sub.graph.endpoints(0);
        assert_eq!((sub.vertices[u], sub.vertices[v]), (2, 3));
        assert_eq!(sub.graph.sign(0), Sign::Negative);
    }

    #[test]
    fn components_are_sorted() {
        let mut g = SignedGraph::new(5);
        g.add_edge(3, 1, Sign::Positive).unwrap();
        g.add_edge(4, 2, Sign::Negative).unwrap();
        assert_eq!(g.components(), vec![vec![0], vec![1, 3], vec![2, 4]]);
        assert!(!g.is_connected());
    }
}

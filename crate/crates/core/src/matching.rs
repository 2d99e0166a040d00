//! Perfect matchings and proper 3-edge-colorings of cubic graphs, plus the
//! factor-through-prescribed-edges searches that the flow constructions
//! lean on. Signs play no role here; only the underlying graph matters.

use crate::graph::{Sign, SignedGraph};
use crate::structure;
use crate::{EdgeId, Error, Result, VertexId};

/// Every perfect matching, each as a sorted edge list. Exhaustive: the least
/// uncovered vertex is matched through its incident edges in ascending id
/// order, so the output order is deterministic. Loops never participate.
pub fn perfect_matchings(g: &SignedGraph) -> Vec<Vec<EdgeId>> {
    let mut out = Vec::new();
    let mut covered = vec![false; g.n()];
    let mut chosen = Vec::new();
    extend_matchings(g, &mut covered, &mut chosen, &mut out);
    out
}

fn extend_matchings(
    g: &SignedGraph,
    covered: &mut Vec<bool>,
    chosen: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
) {
    let Some(v) = (0..g.n()).find(|&v| !covered[v]) else {
        let mut pm = chosen.clone();
        pm.sort_unstable();
        out.push(pm);
        return;
    };
    for &(e, slot) in g.incidences(v) {
        if g.is_loop(e) {
            continue;
        }
        let w = g.endpoint(e, slot.other());
        if covered[w] {
            continue;
        }
        covered[v] = true;
        covered[w] = true;
        chosen.push(e);
        extend_matchings(g, covered, chosen, out);
        chosen.pop();
        covered[v] = false;
        covered[w] = false;
    }
}

/// First perfect matching in the enumeration order, without materializing
/// the rest.
pub fn first_perfect_matching(g: &SignedGraph) -> Option<Vec<EdgeId>> {
    fn go(g: &SignedGraph, covered: &mut Vec<bool>, chosen: &mut Vec<EdgeId>) -> bool {
        let Some(v) = (0..g.n()).find(|&v| !covered[v]) else {
            return true;
        };
        for &(e, slot) in g.incidences(v) {
            if g.is_loop(e) {
                continue;
            }
            let w = g.endpoint(e, slot.other());
            if covered[w] {
                continue;
            }
            covered[v] = true;
            covered[w] = true;
            chosen.push(e);
            if go(g, covered, chosen) {
                return true;
            }
            chosen.pop();
            covered[v] = false;
            covered[w] = false;
        }
        false
    }
    let mut covered = vec![false; g.n()];
    let mut chosen = Vec::new();
    if go(g, &mut covered, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

/// A proper 3-edge-coloring: `class_of[e]` is 0, 1 or 2, and edges sharing
/// a vertex get distinct classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    pub class_of: Vec<u8>,
}

impl EdgeColoring {
    pub fn class(&self, which: u8) -> Vec<EdgeId> {
        (0..self.class_of.len())
            .filter(|&e| self.class_of[e] == which)
            .collect()
    }

    pub fn is_proper(&self, g: &SignedGraph) -> bool {
        if self.class_of.len() != g.m() {
            return false;
        }
        for v in 0..g.n() {
            let mut seen = [false; 3];
            for &(e, _) in g.incidences(v) {
                let c = self.class_of[e] as usize;
                if c > 2 || seen[c] {
                    return false;
                }
                seen[c] = true;
            }
        }
        true
    }
}

fn require_cubic_loopless(g: &SignedGraph) -> Result<()> {
    if !g.is_cubic() {
        return Err(Error::NotCubic(format!(
            "edge coloring needs all degrees 3, graph has {} vertices",
            g.n()
        )));
    }
    if let Some(e) = (0..g.m()).find(|&e| g.is_loop(e)) {
        return Err(Error::NotCubic(format!(
            "{} is a loop, which no proper edge coloring admits",
            g.describe_edge(e)
        )));
    }
    Ok(())
}

/// Proper 3-edge-coloring of a cubic loopless graph, or None when none
/// exists. Backtracking, always branching on the uncolored edge with the
/// most distinctly-colored neighbors (ties to the least id), trying classes
/// in ascending order; the result is deterministic.
pub fn three_edge_coloring(g: &SignedGraph) -> Result<Option<EdgeColoring>> {
    require_cubic_loopless(g)?;
    let m = g.m();
    let mut class_of: Vec<Option<u8>> = vec![None; m];

    // adjacency between edges, precomputed once
    let mut neighbors: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
    for v in 0..g.n() {
        let inc = g.incidences(v);
        for i in 0..inc.len() {
            for j in 0..inc.len() {
                if i != j && inc[i].0 != inc[j].0 {
                    neighbors[inc[i].0].push(inc[j].0);
                }
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }

    fn feasible(neighbors: &[Vec<EdgeId>], class_of: &[Option<u8>], e: EdgeId, c: u8) -> bool {
        neighbors[e].iter().all(|&f| class_of[f] != Some(c))
    }

    fn solve(neighbors: &[Vec<EdgeId>], class_of: &mut Vec<Option<u8>>) -> bool {
        // most saturated uncolored edge, least id on ties
        let mut pick: Option<(usize, EdgeId)> = None;
        for e in 0..class_of.len() {
            if class_of[e].is_some() {
                continue;
            }
            let mut used = [false; 3];
            for &f in &neighbors[e] {
                if let Some(c) = class_of[f] {
                    used[c as usize] = true;
                }
            }
            let sat = used.iter().filter(|&&b| b).count();
            match pick {
                None => pick = Some((sat, e)),
                Some((best, _)) if sat > best => pick = Some((sat, e)),
                _ => {}
            }
        }
        let Some((_, e)) = pick else {
            return true;
        };
        for c in 0..3u8 {
            if feasible(neighbors, class_of, e, c) {
                class_of[e] = Some(c);
                if solve(neighbors, class_of) {
                    return true;
                }
                class_of[e] = None;
            }
        }
        false
    }

    if m == 0 {
        return Ok(Some(EdgeColoring {
            class_of: Vec::new(),
        }));
    }
    if solve(&neighbors, &mut class_of) {
        let coloring = EdgeColoring {
            class_of: class_of.into_iter().map(|c| c.unwrap()).collect(),
        };
        debug_assert!(coloring.is_proper(g));
        Ok(Some(coloring))
    } else {
        Ok(None)
    }
}

/// Alternating 2-coloring of the complement of a perfect matching in a
/// cubic graph: the leftover edges form disjoint even cycles, which take
/// classes 0 and 2 around each cycle while the matching is class 1. Each
/// cycle starts at its least vertex, on its least incident leftover edge,
/// with class 0. Errors if some leftover cycle is odd.
pub fn coloring_around_factor(g: &SignedGraph, factor: &[EdgeId]) -> Result<EdgeColoring> {
    require_cubic_loopless(g)?;
    let mut in_factor = vec![false; g.m()];
    for &e in factor {
        if e >= g.m() {
            return Err(Error::pre(format!("edge {e} out of range")));
        }
        in_factor[e] = true;
    }
    let mut covered = vec![0usize; g.n()];
    for &e in factor {
        let (u, v) = g.endpoints(e);
        covered[u] += 1;
        covered[v] += 1;
    }
    if covered.iter().any(|&c| c != 1) {
        return Err(Error::pre(
            "the given edges are not a perfect matching".to_string(),
        ));
    }

    let mut class_of = vec![1u8; g.m()];
    let mut seen = vec![false; g.m()];
    for start_v in 0..g.n() {
        let Some(&(start_e, _)) = g
            .incidences(start_v)
            .iter()
            .find(|&&(e, _)| !in_factor[e] && !seen[e])
        else {
            continue;
        };
        // walk the cycle, alternating classes 0 and 2
        let mut cur_e = start_e;
        let mut cur_v = start_v;
        let mut cls = 0u8;
        let mut len = 0usize;
        loop {
            seen[cur_e] = true;
            class_of[cur_e] = cls;
            cls = 2 - cls;
            len += 1;
            let next_v = {
                let (a, b) = g.endpoints(cur_e);
                if a == cur_v {
                    b
                } else {
                    a
                }
            };
            match g
                .incidences(next_v)
                .iter()
                .find(|&&(e, _)| !in_factor[e] && !seen[e])
            {
                Some(&(e, _)) => {
                    cur_e = e;
                    cur_v = next_v;
                }
                None => break,
            }
        }
        if len % 2 == 1 {
            return Err(Error::pre(
                "matching complement has an odd cycle; no alternating coloring".to_string(),
            ));
        }
    }
    let coloring = EdgeColoring { class_of };
    if !coloring.is_proper(g) {
        return Err(Error::invariant(
            "alternating coloring came out improper".to_string(),
        ));
    }
    Ok(coloring)
}

/// A perfect matching through the given edge, in a cubic bridgeless graph:
/// match the rest of the graph after removing the edge's endpoints. Such a
/// matching always exists there.
pub fn one_factor_containing(g: &SignedGraph, e: EdgeId) -> Result<Vec<EdgeId>> {
    if e >= g.m() {
        return Err(Error::pre(format!("edge {e} out of range")));
    }
    if !g.is_cubic() {
        return Err(Error::NotCubic(
            "factor search needs a cubic graph".to_string(),
        ));
    }
    if !structure::is_bridgeless(g) {
        return Err(Error::pre(
            "factor search needs a bridgeless graph".to_string(),
        ));
    }
    let (u, v) = g.endpoints(e);
    let rest: Vec<VertexId> = (0..g.n()).filter(|&w| w != u && w != v).collect();
    let ind = g.induced(&rest)?;
    let inner = first_perfect_matching(&ind.graph).ok_or_else(|| {
        Error::invariant(format!(
            "no matching avoiding the endpoints of {}",
            g.describe_edge(e)
        ))
    })?;
    let mut factor: Vec<EdgeId> = inner.into_iter().map(|x| ind.edges[x]).collect();
    factor.push(e);
    factor.sort_unstable();
    Ok(factor)
}

/// A perfect matching through two prescribed edges of a cubic bipartite
/// graph, provided no edge cut of size at most three contains both. When
/// the pair is itself a 2-cut, any proper 3-edge-coloring puts the two
/// edges in a common class, and that class works. Otherwise the edges are
/// rewired inside one partite class and a factor through the replacement
/// edge is pulled back.
pub fn one_factor_containing_two(g: &SignedGraph, e: EdgeId, f: EdgeId) -> Result<Vec<EdgeId>> {
    if e >= g.m() || f >= g.m() || e == f {
        return Err(Error::pre(format!(
            "need two distinct edges, got {e} and {f}"
        )));
    }
    if !g.is_cubic() {
        return Err(Error::NotCubic(
            "factor search needs a cubic graph".to_string(),
        ));
    }
    if !structure::is_bridgeless(g) {
        return Err(Error::pre(
            "factor search needs a bridgeless graph".to_string(),
        ));
    }
    let Some(side) = bipartition(g) else {
        return Err(Error::pre(
            "factor search through two edges needs a bipartite graph".to_string(),
        ));
    };
    if let Some(h) = structure::three_cut_completing(g, e, f) {
        return Err(Error::pre(format!(
            "edges {e} and {f} share the 3-cut completed by {}",
            g.describe_edge(h)
        )));
    }

    if g.is_edge_cut(&[e, f]) {
        let coloring = three_edge_coloring(g)?.ok_or_else(|| {
            Error::invariant("cubic bipartite graphs are 3-edge-colorable".to_string())
        })?;
        if coloring.class_of[e] != coloring.class_of[f] {
            return Err(Error::invariant(
                "a 2-cut pair must share its color class".to_string(),
            ));
        }
        return Ok(coloring.class(coloring.class_of[e]));
    }

    // nonadjacent (a shared endpoint's star would be a common 3-cut), so the
    // four endpoints are distinct; rewire within the partite classes
    let (eu, ev) = g.endpoints(e);
    let (fu, fv) = g.endpoints(f);
    let (u, v) = if side[eu] { (ev, eu) } else { (eu, ev) };
    let (x, y) = if side[fu] { (fv, fu) } else { (fu, fv) };
    // now u, x sit in the false class and v, y in the true class
    let (reduced, kept) = g.delete_edges(&[e, f]);
    let mut rewired = reduced.clone();
    let e_new = rewired.add_edge(u, x, Sign::Positive)?;
    let f_new = rewired.add_edge(v, y, Sign::Positive)?;
    if !structure::is_bridgeless(&rewired) {
        return Err(Error::invariant(
            "rewired graph lost bridgelessness despite the cut preconditions".to_string(),
        ));
    }
    let inner = one_factor_containing(&rewired, e_new)?;
    if !inner.contains(&f_new) {
        return Err(Error::invariant(
            "factor through the rewired edge must also use its partner".to_string(),
        ));
    }
    let mut factor: Vec<EdgeId> = inner
        .into_iter()
        .filter(|&x| x != e_new && x != f_new)
        .map(|x| kept[x])
        .collect();
    factor.push(e);
    factor.push(f);
    factor.sort_unstable();
    Ok(factor)
}

/// Two-coloring of the vertices with every edge crossing, ignoring signs:
/// `side[v]` is the class of v. None when some component is not bipartite.
/// BFS from the least unvisited vertex, which lands in the false class.
pub fn bipartition(g: &SignedGraph) -> Option<Vec<bool>> {
    let n = g.n();
    let mut side = vec![false; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, slot) in g.incidences(v) {
                let w = g.endpoint(e, slot.other());
                if w == v {
                    return None;
                }
                if !seen[w] {
                    seen[w] = true;
                    side[w] = !side[v];
                    queue.push_back(w);
                } else if side[w] == side[v] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

/// Is this cubic bridgeless graph a snark in the strong sense that deleting
/// any one edge and smoothing the degree-2 vertices always yields something
/// 3-edge-colorable? The input must itself be uncolorable. Deleting an edge
/// can leave a bridge in the smoothed graph, which rules that edge out.
pub fn is_critical_snark(g: &SignedGraph) -> Result<bool> {
    require_cubic_loopless(g)?;
    if !structure::is_bridgeless(g) {
        return Err(Error::pre(
            "criticality is about bridgeless graphs".to_string(),
        ));
    }
    if three_edge_coloring(g)?.is_some() {
        return Err(Error::pre(
            "criticality is about uncolorable graphs, this one is 3-edge-colorable".to_string(),
        ));
    }
    for e in 0..g.m() {
        let (cut, _) = g.delete_edges(&[e]);
        let smoothed = structure::suppress_degree_two(&cut);
        if !structure::is_bridgeless(&smoothed.graph) {
            return Ok(false);
        }
        if smoothed.graph.edges().iter().any(|ed| ed.is_loop()) {
            return Err(Error::invariant(
                "bridgeless smoothing cannot carry loops".to_string(),
            ));
        }
        if three_edge_coloring(&smoothed.graph)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> SignedGraph {
        SignedGraph::all_positive(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn k33() -> SignedGraph {
        SignedGraph::all_positive(
            6,
            &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
        )
        .unwrap()
    }

    fn prism() -> SignedGraph {
        SignedGraph::all_positive(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn matchings_of_small_graphs() {
        let pms = perfect_matchings(&k4());
        assert_eq!(pms, vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
        assert_eq!(perfect_matchings(&k33()).len(), 6);
        // odd number of vertices: none
        let p3 = SignedGraph::all_positive(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(perfect_matchings(&p3).is_empty());
        // loops are ignored
        let mut loopy = k4();
        loopy.add_edge(0, 0, Sign::Positive).unwrap();
        assert_eq!(perfect_matchings(&loopy).len(), 3);
        assert_eq!(first_perfect_matching(&k4()), Some(vec![0, 5]));
    }

    #[test]
    fn coloring_k4_and_k33() {
        let c = three_edge_coloring(&k4()).unwrap().unwrap();
        assert!(c.is_proper(&k4()));
        let c = three_edge_coloring(&k33()).unwrap().unwrap();
        assert!(c.is_proper(&k33()));
        // each class of a cubic coloring is a perfect matching
        for which in 0..3 {
            assert_eq!(c.class(which).len(), 3);
        }
    }

    #[test]
    fn coloring_rejects_non_cubic_and_loops() {
        let c4 = SignedGraph::all_positive(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(three_edge_coloring(&c4).is_err());
        // cubic with a loop: loop vertex has degree 3 via loop + one edge
        let mut g = SignedGraph::new(2);
        g.add_edge(0, 0, Sign::Positive).unwrap();
        g.add_edge(0, 1, Sign::Positive).unwrap();
        g.add_edge(1, 1, Sign::Positive).unwrap();
        assert!(three_edge_coloring(&g).is_err());
    }

    #[test]
    fn triple_edge_is_colorable() {
        let theta = SignedGraph::all_positive(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let c = three_edge_coloring(&theta).unwrap().unwrap();
        assert!(c.is_proper(&theta));
        assert_eq!(c.class_of, vec![0, 1, 2]);
    }

    #[test]
    fn factor_through_an_edge() {
        for e in 0..6 {
            let f = one_factor_containing(&k4(), e).unwrap();
            assert!(f.contains(&e));
            assert_eq!(f.len(), 2);
        }
        // prism: factor through rung (0,3) matches the remaining four
        // vertices inside their triangles
        let f = one_factor_containing(&prism(), 6).unwrap();
        assert_eq!(f, vec![1, 4, 6]);
    }

    #[test]
    fn factor_through_two_edges_in_k33() {
        // edges 0=(0,3) and 4=(1,4) are nonadjacent, in no common small cut
        let f = one_factor_containing_two(&k33(), 0, 4).unwrap();
        assert!(f.contains(&0) && f.contains(&4));
        assert_eq!(f.len(), 3);
        // adjacent edges share a star cut and must be rejected
        assert!(one_factor_containing_two(&k33(), 0, 1).is_err());
    }

    #[test]
    fn factor_through_a_two_cut_pair() {
        // two K33-minus-an-edge blocks joined by edges 16=(2,8), 17=(5,11);
        // the joins form a 2-cut, so the factor comes from a color class
        let g = SignedGraph::all_positive(
            12,
            &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (6, 9),
                (6, 10),
                (6, 11),
                (7, 9),
                (7, 10),
                (7, 11),
                (8, 9),
                (8, 10),
                (2, 8),
                (5, 11),
            ],
        )
        .unwrap();
        assert!(g.is_cubic());
        assert!(g.is_edge_cut(&[16, 17]));
        let f = one_factor_containing_two(&g, 16, 17).unwrap();
        assert!(f.contains(&16) && f.contains(&17));
        assert_eq!(f.len(), 6);
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        assert!(bipartition(&k4()).is_none());
        assert!(bipartition(&k33()).is_some());
        let mut loopy = SignedGraph::new(1);
        loopy.add_edge(0, 0, Sign::Positive).unwrap();
        assert!(bipartition(&loopy).is_none());
    }

    #[test]
    fn colorable_graphs_are_not_critical() {
        assert!(is_critical_snark(&k4()).is_err());
    }

    #[test]
    fn alternating_coloring_around_a_matching() {
        let c = coloring_around_factor(&k33(), &[0, 4, 8]).unwrap();
        assert!(c.is_proper(&k33()));
        assert_eq!(c.class_of[0], 1);
        assert_eq!(c.class_of[4], 1);
        assert_eq!(c.class_of[8], 1);
        // K4's complement of a matching is two triangles... no: K4 minus a
        // perfect matching is a 4-cycle, which is even and fine
        let c = coloring_around_factor(&k4(), &[0, 5]).unwrap();
        assert!(c.is_proper(&k4()));
    }
}

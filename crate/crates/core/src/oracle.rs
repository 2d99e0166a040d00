//! Exact existence search for nowhere-zero flows, integer and modular, with
//! optional per-edge prescriptions. Backtracking over a fixed reference
//! orientation with Kirchhoff pruning; complete within the given budget, so
//! a No is a proof and an Indeterminate only reflects exhausted budget.
//!
//! The reference orientation points every positive edge from its first
//! endpoint to its second and makes every negative edge extroverted. A
//! search value is the flow value relative to that reference, so negating
//! all values maps solutions to solutions; that symmetry is broken on one
//! edge, but only when no prescriptions are present.

use crate::flow::{Flow, HalfDir, Orientation};
use crate::graph::SignedGraph;
use crate::structure;
use crate::{EdgeId, Error, Result};

/// Limits for the exhaustive searches. `node_limit` counts value-assignment
/// attempts; the deadline is polled every few thousand nodes.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub deadline: Option<std::time::Instant>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 20_000_000,
            deadline: None,
        }
    }
}

/// Pin down edge values before the search: `exact` fixes the
/// reference-signed value (integer) or residue (modular), `magnitude` fixes
/// only the absolute value.
#[derive(Debug, Clone, Default)]
pub struct Prescriptions {
    pub exact: Vec<(EdgeId, i64)>,
    pub magnitude: Vec<(EdgeId, u32)>,
}

impl Prescriptions {
    pub fn none() -> Self {
        Prescriptions::default()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.magnitude.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Yes(Flow),
    No,
    Indeterminate,
}

impl Outcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, Outcome::Yes(_))
    }
}

/// Positive edges run first endpoint to second, negative edges are
/// extroverted. Every flow the searches report is expressed over this.
pub fn reference_orientation(g: &SignedGraph) -> Orientation {
    Orientation::from_dirs(
        g.edges()
            .iter()
            .map(|e| {
                if e.sign.is_negative() {
                    (HalfDir::In, HalfDir::In)
                } else {
                    (HalfDir::Out, HalfDir::In)
                }
            })
            .collect(),
    )
}

/// Net coefficient of each edge at each vertex under the reference
/// orientation: positive loops vanish, negative loops count twice.
fn contributions(g: &SignedGraph) -> Vec<Vec<(usize, i64)>> {
    g.edges()
        .iter()
        .map(|e| {
            if e.is_loop() {
                if e.sign.is_negative() {
                    vec![(e.u, 2)]
                } else {
                    Vec::new()
                }
            } else if e.sign.is_negative() {
                vec![(e.u, 1), (e.v, 1)]
            } else {
                vec![(e.u, -1), (e.v, 1)]
            }
        })
        .collect()
}

/// Edges ordered for search: breadth-first from the least vertex of each
/// component, prescribed edges pulled to the front.
fn search_order(g: &SignedGraph, prescribed: &[bool]) -> Vec<EdgeId> {
    let n = g.n();
    let mut idx = vec![usize::MAX; n];
    let mut c = 0usize;
    for root in 0..n {
        if idx[root] != usize::MAX {
            continue;
        }
        idx[root] = c;
        c += 1;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, slot) in g.incidences(v) {
                let w = g.endpoint(e, slot.other());
                if idx[w] == usize::MAX {
                    idx[w] = c;
                    c += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut order: Vec<EdgeId> = (0..g.m()).collect();
    order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        (!prescribed[e], idx[u].min(idx[v]), e)
    });
    order
}

struct Searcher<'a> {
    k: i64,
    modular: bool,
    domains: &'a [Vec<i64>],
    order: &'a [EdgeId],
    per_edge: &'a [Vec<(usize, i64)>],
    vertex_edges: &'a [Vec<(EdgeId, i64)>],
    values: Vec<i64>,
    assigned: Vec<bool>,
    residual: Vec<i64>,
    remaining: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    deadline: Option<std::time::Instant>,
    out_of_budget: bool,
}

impl Searcher<'_> {
    fn is_zero(&self, r: i64) -> bool {
        if self.modular {
            r.rem_euclid(self.k) == 0
        } else {
            r == 0
        }
    }

    /// Can the one unassigned constrained edge at v still balance it?
    fn locally_feasible(&self, v: usize) -> bool {
        let Some(&(_, rho)) = self.vertex_edges[v]
            .iter()
            .find(|&&(e, _)| !self.assigned[e])
        else {
            return true;
        };
        let need = -self.residual[v];
        if self.modular {
            let need = (need * rho.signum()).rem_euclid(self.k);
            match rho.abs() {
                1 => need != 0,
                2 => {
                    if self.k % 2 == 1 {
                        need != 0
                    } else {
                        need % 2 == 0
                    }
                }
                _ => true,
            }
        } else {
            match rho.abs() {
                1 => need != 0 && need.abs() < self.k,
                2 => need % 2 == 0 && need != 0 && need.abs() / 2 < self.k,
                _ => true,
            }
        }
    }

    fn assign(&mut self, e: EdgeId, x: i64) -> bool {
        self.values[e] = x;
        self.assigned[e] = true;
        for &(v, rho) in &self.per_edge[e] {
            self.residual[v] += rho * x;
            self.remaining[v] -= 1;
        }
        for &(v, _) in &self.per_edge[e] {
            match self.remaining[v] {
                0 if !self.is_zero(self.residual[v]) => return false,
                1 if !self.locally_feasible(v) => return false,
                _ => {}
            }
        }
        true
    }

    fn unassign(&mut self, e: EdgeId, x: i64) {
        self.assigned[e] = false;
        for &(v, rho) in &self.per_edge[e] {
            self.residual[v] -= rho * x;
            self.remaining[v] += 1;
        }
    }

    fn solve(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let e = self.order[depth];
        for i in 0..self.domains[e].len() {
            let x = self.domains[e][i];
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.out_of_budget = true;
                return false;
            }
            if self.nodes & 0xFFF == 0 {
                if let Some(d) = self.deadline {
                    if std::time::Instant::now() >= d {
                        self.out_of_budget = true;
                        return false;
                    }
                }
            }
            let ok = self.assign(e, x);
            if ok && self.solve(depth + 1) {
                return true;
            }
            self.unassign(e, x);
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

fn build_domains(
    g: &SignedGraph,
    k: u32,
    modular: bool,
    pres: &Prescriptions,
) -> Result<Vec<Vec<i64>>> {
    let kk = k as i64;
    let base: Vec<i64> = if modular {
        (1..kk).collect()
    } else {
        // ascending magnitude, positive first
        (1..kk).flat_map(|v| [v, -v]).collect()
    };
    let mut domains = vec![base; g.m()];
    for &(e, v) in &pres.exact {
        if e >= g.m() {
            return Err(Error::pre(format!("prescription on missing edge {e}")));
        }
        if modular {
            let r = v.rem_euclid(kk);
            if r == 0 {
                return Err(Error::pre(format!(
                    "prescribed residue on edge {e} is 0 mod {k}"
                )));
            }
            domains[e].retain(|&x| x == r);
        } else {
            if v == 0 || v.abs() >= kk {
                return Err(Error::pre(format!(
                    "prescribed value {v} on edge {e} is out of range for k={k}"
                )));
            }
            domains[e].retain(|&x| x == v);
        }
    }
    for &(e, mag) in &pres.magnitude {
        if e >= g.m() {
            return Err(Error::pre(format!("prescription on missing edge {e}")));
        }
        let mag = mag as i64;
        if mag == 0 || mag >= kk {
            return Err(Error::pre(format!(
                "prescribed magnitude {mag} on edge {e} is out of range for k={k}"
            )));
        }
        if modular {
            domains[e].retain(|&x| x == mag || x == kk - mag);
        } else {
            domains[e].retain(|&x| x.abs() == mag);
        }
    }
    // negating every value is a solution-preserving involution; without
    // prescriptions, canonicalize on the least positive edge (or edge 0)
    if pres.is_empty() && g.m() > 0 {
        let anchor = (0..g.m()).find(|&e| !g.sign(e).is_negative()).unwrap_or(0);
        if modular {
            domains[anchor].retain(|&x| 2 * x <= kk);
        } else {
            domains[anchor].retain(|&x| x > 0);
        }
    }
    Ok(domains)
}

fn exists_flow(
    g: &SignedGraph,
    k: u32,
    modular: bool,
    pres: &Prescriptions,
    budget: &SearchBudget,
) -> Result<Outcome> {
    if k < 2 {
        return Err(Error::pre(format!("flow bound k={k} must be at least 2")));
    }
    let domains = build_domains(g, k, modular, pres)?;
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(Outcome::No);
    }
    let per_edge = contributions(g);
    let mut vertex_edges: Vec<Vec<(EdgeId, i64)>> = vec![Vec::new(); g.n()];
    for (e, contribs) in per_edge.iter().enumerate() {
        for &(v, rho) in contribs {
            vertex_edges[v].push((e, rho));
        }
    }
    let prescribed: Vec<bool> = {
        let mut p = vec![false; g.m()];
        for &(e, _) in &pres.exact {
            p[e] = true;
        }
        for &(e, _) in &pres.magnitude {
            p[e] = true;
        }
        p
    };
    let order = search_order(g, &prescribed);
    let mut s = Searcher {
        k: k as i64,
        modular,
        domains: &domains,
        order: &order,
        per_edge: &per_edge,
        vertex_edges: &vertex_edges,
        values: vec![0; g.m()],
        assigned: vec![false; g.m()],
        residual: vec![0; g.n()],
        remaining: vertex_edges.iter().map(|l| l.len()).collect(),
        nodes: 0,
        node_limit: budget.node_limit,
        deadline: budget.deadline,
        out_of_budget: false,
    };
    if s.solve(0) {
        let flow = if modular {
            Flow::mod_k(reference_orientation(g), s.values, k)
        } else {
            Flow::integer(reference_orientation(g), s.values, k)
        };
        flow.verify(g)
            .map_err(|e| Error::invariant(format!("search produced an invalid flow: {e}")))?;
        Ok(Outcome::Yes(flow))
    } else if s.out_of_budget {
        Ok(Outcome::Indeterminate)
    } else {
        Ok(Outcome::No)
    }
}

/// Is there a nowhere-zero integer k-flow (values in ±{1..k-1}) meeting the
/// prescriptions?
pub fn exists_integer_flow(
    g: &SignedGraph,
    k: u32,
    pres: &Prescriptions,
    budget: &SearchBudget,
) -> Result<Outcome> {
    exists_flow(g, k, false, pres, budget)
}

/// Is there a nowhere-zero mod-k flow (residues in {1..k-1}) meeting the
/// prescriptions?
pub fn exists_zk_flow(
    g: &SignedGraph,
    k: u32,
    pres: &Prescriptions,
    budget: &SearchBudget,
) -> Result<Outcome> {
    exists_flow(g, k, true, pres, budget)
}

/// Reference implementation with no pruning, no forcing and no symmetry
/// breaking: every assignment in the full product of domains is checked.
/// Guarded against blowup; meant to cross-validate the pruned search on
/// small inputs.
pub fn exists_integer_flow_naive(g: &SignedGraph, k: u32, pres: &Prescriptions) -> Result<Outcome> {
    if k < 2 {
        return Err(Error::pre(format!("flow bound k={k} must be at least 2")));
    }
    let mut domains = build_domains(g, k, false, pres)?;
    if pres.is_empty() && g.m() > 0 {
        // undo the symmetry canonicalization: the reference must be blind
        let kk = k as i64;
        let anchor = (0..g.m()).find(|&e| !g.sign(e).is_negative()).unwrap_or(0);
        domains[anchor] = (1..kk).flat_map(|v| [v, -v]).collect();
    }
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(Outcome::No);
    }
    let states: f64 = domains.iter().map(|d| d.len() as f64).product();
    if states > 5e7 {
        return Err(Error::pre(format!(
            "naive enumeration of {states:.2e} assignments refused"
        )));
    }
    let per_edge = contributions(g);
    let m = g.m();
    let mut pick = vec![0usize; m];
    loop {
        let mut residual = vec![0i64; g.n()];
        for e in 0..m {
            let x = domains[e][pick[e]];
            for &(v, rho) in &per_edge[e] {
                residual[v] += rho * x;
            }
        }
        if residual.iter().all(|&r| r == 0) {
            let values: Vec<i64> = (0..m).map(|e| domains[e][pick[e]]).collect();
            let flow = Flow::integer(reference_orientation(g), values, k);
            flow.verify(g).map_err(|e| {
                Error::invariant(format!("naive search produced an invalid flow: {e}"))
            })?;
            return Ok(Outcome::Yes(flow));
        }
        // odometer: last edge spins fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(Outcome::No);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < domains[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowNumberResult {
    /// Least k with a nowhere-zero integer k-flow, and one such flow.
    Exact { k: u32, witness: Flow },
    /// Every k up to the cap was refuted.
    ExceedsMax { max_k: u32 },
    /// The search for this k blew the budget before settling.
    Indeterminate { at_k: u32 },
}

/// Scan k = 2, 3, ... for the least admitting a nowhere-zero integer
/// k-flow. Rejects inputs that are not flow-admissible, since no k would
/// ever succeed on those.
pub fn flow_number(g: &SignedGraph, max_k: u32, budget: &SearchBudget) -> Result<FlowNumberResult> {
    if max_k < 2 {
        return Err(Error::pre(format!("max_k={max_k} leaves nothing to scan")));
    }
    if let structure::Admissibility::NotAdmissible(reason) = structure::admissibility(g) {
        return Err(Error::NoFlow(format!("not flow-admissible: {reason}")));
    }
    for k in 2..=max_k {
        match exists_integer_flow(g, k, &Prescriptions::none(), budget)? {
            Outcome::Yes(witness) => return Ok(FlowNumberResult::Exact { k, witness }),
            Outcome::No => continue,
            Outcome::Indeterminate => return Ok(FlowNumberResult::Indeterminate { at_k: k }),
        }
    }
    Ok(FlowNumberResult::ExceedsMax { max_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn triangle_has_a_two_flow() {
        let g = SignedGraph::all_positive(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let out = exists_integer_flow(&g, 2, &Prescriptions::none(), &budget()).unwrap();
        let Outcome::Yes(f) = out else {
            panic!("triangle must carry a 2-flow")
        };
        assert!(f.values.iter().all(|&v| v.abs() == 1));
        match flow_number(&g, 7, &budget()).unwrap() {
            FlowNumberResult::Exact { k, .. } => assert_eq!(k, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn k4_flow_number_is_four() {
        let g = SignedGraph::all_positive(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        assert_eq!(
            exists_integer_flow(&g, 3, &Prescriptions::none(), &budget()).unwrap(),
            Outcome::No
        );
        match flow_number(&g, 7, &budget()).unwrap() {
            FlowNumberResult::Exact { k, .. } => assert_eq!(k, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dumbbell_flow_number_is_three() {
        let g = SignedGraph::from_edges(
            2,
            &[
                (0, 0, Sign::Negative),
                (0, 1, Sign::Positive),
                (1, 1, Sign::Negative),
            ],
        )
        .unwrap();
        match flow_number(&g, 7, &budget()).unwrap() {
            FlowNumberResult::Exact { k, witness } => {
                assert_eq!(k, 3);
                assert_eq!(witness.abs_value(1), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_loop_separates_integer_from_modular() {
        // a bare negative loop needs 2x = 0: impossible in the integers,
        // satisfied by x = k/2 whenever k is even
        let mut g = SignedGraph::new(1);
        g.add_edge(0, 0, Sign::Negative).unwrap();
        for k in 2..=7 {
            assert_eq!(
                exists_integer_flow(&g, k, &Prescriptions::none(), &budget()).unwrap(),
                Outcome::No
            );
            let zk = exists_zk_flow(&g, k, &Prescriptions::none(), &budget()).unwrap();
            if k % 2 == 0 {
                let Outcome::Yes(f) = zk else {
                    panic!("even k must admit a modular flow")
                };
                assert_eq!(f.value(0), (k as i64) / 2);
            } else {
                assert_eq!(zk, Outcome::No);
            }
        }
    }

    #[test]
    fn negative_digon_is_balanced_and_tight() {
        let g =
            SignedGraph::from_edges(2, &[(0, 1, Sign::Negative), (0, 1, Sign::Negative)]).unwrap();
        match flow_number(&g, 7, &budget()).unwrap() {
            FlowNumberResult::Exact { k, .. } => assert_eq!(k, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prescriptions_pin_values() {
        let g = SignedGraph::from_edges(
            2,
            &[
                (0, 0, Sign::Negative),
                (0, 1, Sign::Positive),
                (1, 1, Sign::Negative),
            ],
        )
        .unwrap();
        let pres = Prescriptions {
            exact: vec![(1, 2)],
            magnitude: vec![],
        };
        let out = exists_integer_flow(&g, 3, &pres, &budget()).unwrap();
        let Outcome::Yes(f) = out else {
            panic!("value 2 on the bar works")
        };
        assert_eq!(f.value(1), 2);

        // the bar cannot carry 1: the loops double everything
        let pres = Prescriptions {
            exact: vec![],
            magnitude: vec![(1, 1)],
        };
        assert_eq!(
            exists_integer_flow(&g, 3, &pres, &budget()).unwrap(),
            Outcome::No
        );
    }

    #[test]
    fn naive_and_pruned_agree() {
        let graphs = vec![
            SignedGraph::all_positive(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(),
            SignedGraph::all_positive(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
                .unwrap(),
            SignedGraph::from_edges(
                2,
                &[
                    (0, 0, Sign::Negative),
                    (0, 1, Sign::Positive),
                    (1, 1, Sign::Negative),
                ],
            )
            .unwrap(),
            SignedGraph::from_edges(
                3,
                &[
                    (0, 1, Sign::Negative),
                    (1, 2, Sign::Negative),
                    (2, 0, Sign::Positive),
                    (0, 1, Sign::Positive),
                ],
            )
            .unwrap(),
        ];
        for g in &graphs {
            for k in 2..=4 {
                let fast = exists_integer_flow(g, k, &Prescriptions::none(), &budget()).unwrap();
                let slow = exists_integer_flow_naive(g, k, &Prescriptions::none()).unwrap();
                assert_eq!(fast.is_yes(), slow.is_yes(), "k={k} disagreement");
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = SignedGraph::all_positive(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let tiny = SearchBudget {
            node_limit: 2,
            deadline: None,
        };
        assert_eq!(
            exists_integer_flow(&g, 4, &Prescriptions::none(), &tiny).unwrap(),
            Outcome::Indeterminate
        );
    }

    #[test]
    fn inadmissible_inputs_are_rejected_by_flow_number() {
        let g = SignedGraph::from_edges(
            4,
            &[
                (0, 1, Sign::Negative),
                (1, 2, Sign::Positive),
                (2, 3, Sign::Positive),
                (3, 0, Sign::Positive),
            ],
        )
        .unwrap();
        assert!(matches!(
            flow_number(&g, 7, &budget()),
            Err(Error::NoFlow(_))
        ));
        // but the raw searches still answer honestly
        assert_eq!(
            exists_integer_flow(&g, 5, &Prescriptions::none(), &budget()).unwrap(),
            Outcome::No
        );
    }

    #[test]
    fn edgeless_graphs_trivially_flow() {
        let g = SignedGraph::new(3);
        assert!(
            exists_integer_flow(&g, 2, &Prescriptions::none(), &budget())
                .unwrap()
                .is_yes()
        );
        match flow_number(&g, 7, &budget()).unwrap() {
            FlowNumberResult::Exact { k, .. } => assert_eq!(k, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn modular_flows_on_the_dumbbell() {
        let g = SignedGraph::from_edges(
            2,
            &[
                (0, 0, Sign::Negative),
                (0, 1, Sign::Positive),
                (1, 1, Sign::Negative),
            ],
        )
        .unwrap();
        assert_eq!(
            exists_zk_flow(&g, 2, &Prescriptions::none(), &budget()).unwrap(),
            Outcome::No
        );
        let out = exists_zk_flow(&g, 3, &Prescriptions::none(), &budget()).unwrap();
        assert!(out.is_yes());
    }
}

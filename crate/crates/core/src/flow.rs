//! Bidirected orientations and nowhere-zero flows.
//!
//! Every edge end carries its own arrow. `In` points at the incident vertex,
//! `Out` away from it. An orientation is *consistent* with the signature when
//! positive edges have one end of each kind (an ordinary directed edge) and
//! negative edges have two ends of the same kind. A negative edge with both
//! ends `In` acts as a source pumping twice its value toward its endpoints;
//! we call it extroverted. Both ends `Out` is the mirrored sink, introverted.
//!
//! A flow is an orientation plus one value per edge. Kirchhoff's law at a
//! vertex sums values over incident half-edges, `In` positively and `Out`
//! negatively; loops contribute both their ends. Values may be negative: a
//! negative value means the true flow runs against the stored arrows, and
//! [`Flow::made_all_positive`] renormalizes. Integer flows demand exact
//! balance, mod-k flows balance modulo k.

use crate::graph::{EndSlot, SignedGraph, SwitchingSet};
use crate::{EdgeId, Error, Result, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfDir {
    /// Arrow points toward the incident vertex.
    In,
    /// Arrow points away from the incident vertex.
    Out,
}

impl HalfDir {
    pub fn flipped(self) -> HalfDir {
        match self {
            HalfDir::In => HalfDir::Out,
            HalfDir::Out => HalfDir::In,
        }
    }

    /// Kirchhoff coefficient of this half at its vertex.
    pub fn coeff(self) -> i64 {
        match self {
            HalfDir::In => 1,
            HalfDir::Out => -1,
        }
    }
}

/// How one edge is oriented, as seen from its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrient {
    /// One end in, one end out: an ordinary directed edge; `head` is the
    /// slot the arrow points at.
    Directed { head: EndSlot },
    /// Both ends point at their vertices (a source on a negative edge).
    Extroverted,
    /// Both ends point away (a sink on a negative edge).
    Introverted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    dirs: Vec<(HalfDir, HalfDir)>,
}

impl Orientation {
    pub fn from_dirs(dirs: Vec<(HalfDir, HalfDir)>) -> Orientation {
        Orientation { dirs }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dir(&self, e: EdgeId, slot: EndSlot) -> HalfDir {
        match slot {
            EndSlot::First => self.dirs[e].0,
            EndSlot::Second => self.dirs[e].1,
        }
    }

    pub fn dirs(&self, e: EdgeId) -> (HalfDir, HalfDir) {
        self.dirs[e]
    }

    pub fn set_dir(&mut self, e: EdgeId, slot: EndSlot, d: HalfDir) {
        match slot {
            EndSlot::First => self.dirs[e].0 = d,
            EndSlot::Second => self.dirs[e].1 = d,
        }
    }

    pub fn flip_half(&mut self, e: EdgeId, slot: EndSlot) {
        let d = self.dir(e, slot);
        self.set_dir(e, slot, d.flipped());
    }

    pub fn reverse_edge(&mut self, e: EdgeId) {
        let (a, b) = self.dirs[e];
        self.dirs[e] = (a.flipped(), b.flipped());
    }

    pub fn kind(&self, e: EdgeId) -> EdgeOrient {
        match self.dirs[e] {
            (HalfDir::Out, HalfDir::In) => EdgeOrient::Directed {
                head: EndSlot::Second,
            },
            (HalfDir::In, HalfDir::Out) => EdgeOrient::Directed {
                head: EndSlot::First,
            },
            (HalfDir::In, HalfDir::In) => EdgeOrient::Extroverted,
            (HalfDir::Out, HalfDir::Out) => EdgeOrient::Introverted,
        }
    }

    /// Positive edges must be directed, negative edges extroverted or
    /// introverted.
    pub fn check_signs(&self, g: &SignedGraph) -> Result<()> {
        if self.dirs.len() != g.m() {
            return Err(Error::pre(format!(
                "orientation covers {} edges, graph has {}",
                self.dirs.len(),
                g.m()
            )));
        }
        for e in 0..g.m() {
            let (a, b) = self.dirs[e];
            let same = a == b;
            let negative = g.sign(e).is_negative();
            if same != negative {
                return Err(Error::pre(format!(
                    "orientation of {} does not match its sign",
                    g.describe_edge(e)
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    Integer,
    ModK,
}

/// A candidate nowhere-zero flow. Nothing is checked at construction; call
/// [`Flow::verify`] against the graph it is meant for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub orientation: Orientation,
    pub values: Vec<i64>,
    /// The bound k: integer flows use values with 0 < |v| < k, mod-k flows
    /// use canonical residues 0 < v < k.
    pub k: u32,
    pub arithmetic: Arithmetic,
}

impl Flow {
    pub fn integer(orientation: Orientation, values: Vec<i64>, k: u32) -> Flow {
        Flow {
            orientation,
            values,
            k,
            arithmetic: Arithmetic::Integer,
        }
    }

    pub fn mod_k(orientation: Orientation, values: Vec<i64>, k: u32) -> Flow {
        Flow {
            orientation,
            values,
            k,
            arithmetic: Arithmetic::ModK,
        }
    }

    pub fn value(&self, e: EdgeId) -> i64 {
        self.values[e]
    }

    pub fn abs_value(&self, e: EdgeId) -> i64 {
        self.values[e].abs()
    }

    /// Signed Kirchhoff sum at `v`: half-edges pointing in count their value
    /// positively, half-edges pointing out negatively.
    pub fn excess(&self, g: &SignedGraph, v: VertexId) -> i64 {
        let mut sum = 0i64;
        for &(e, slot) in g.incidences(v) {
            sum += self.orientation.dir(e, slot).coeff() * self.values[e];
        }
        sum
    }

    pub fn verify(&self, g: &SignedGraph) -> Result<()> {
        if self.k < 2 {
            return Err(Error::pre(format!("flow bound k={} below 2", self.k)));
        }
        if self.values.len() != g.m() {
            return Err(Error::pre(format!(
                "flow has {} values, graph has {} edges",
                self.values.len(),
                g.m()
            )));
        }
        self.orientation.check_signs(g)?;
        let k = self.k as i64;
        for e in 0..g.m() {
            let v = self.values[e];
            let ok = match self.arithmetic {
                Arithmetic::Integer => v != 0 && v.abs() < k,
                Arithmetic::ModK => 0 < v && v < k,
            };
            if !ok {
                return Err(Error::pre(format!(
                    "value {v} on {} outside the nowhere-zero range for k={k}",
                    g.describe_edge(e)
                )));
            }
        }
        for v in 0..g.n() {
            let x = self.excess(g, v);
            let balanced = match self.arithmetic {
                Arithmetic::Integer => x == 0,
                Arithmetic::ModK => x.rem_euclid(k) == 0,
            };
            if !balanced {
                return Err(Error::pre(format!(
                    "Kirchhoff fails at vertex {v}: excess {x}"
                )));
            }
        }
        Ok(())
    }

    /// The same values with every arrow kept and every value negated. This
    /// is again a flow (negation is a linear symmetry), generally a
    /// different one.
    pub fn negated(&self) -> Flow {
        let values = match self.arithmetic {
            Arithmetic::Integer => self.values.iter().map(|&v| -v).collect(),
            Arithmetic::ModK => {
                let k = self.k as i64;
                self.values.iter().map(|&v| (k - v).rem_euclid(k)).collect()
            }
        };
        Flow {
            orientation: self.orientation.clone(),
            values,
            k: self.k,
            arithmetic: self.arithmetic,
        }
    }

    /// Re-represent one edge with both arrows flipped and its value negated.
    /// This is the *same* flow.
    pub fn with_edge_reversed(&self, e: EdgeId) -> Flow {
        let mut f = self.clone();
        f.orientation.reverse_edge(e);
        f.values[e] = match self.arithmetic {
            Arithmetic::Integer => -f.values[e],
            Arithmetic::ModK => (self.k as i64 - f.values[e]).rem_euclid(self.k as i64),
        };
        f
    }

    /// Canonical representative with every value positive: edges carrying a
    /// negative value are reversed. Mod-k flows are already canonical.
    pub fn made_all_positive(&self) -> Flow {
        let mut f = self.clone();
        if self.arithmetic == Arithmetic::Integer {
            for e in 0..f.values.len() {
                if f.values[e] < 0 {
                    f.orientation.reverse_edge(e);
                    f.values[e] = -f.values[e];
                }
            }
        }
        f
    }

    /// Transport the flow across a switching: every half-edge at a switched
    /// vertex flips. The result is a flow on `g.switch(set)` with the same
    /// values.
    pub fn switched(&self, g: &SignedGraph, set: &SwitchingSet) -> Result<Flow> {
        if self.values.len() != g.m() {
            return Err(Error::pre("flow and graph sizes differ".to_string()));
        }
        let mut f = self.clone();
        for e in 0..g.m() {
            for slot in [EndSlot::First, EndSlot::Second] {
                if set.contains(g.endpoint(e, slot)) {
                    f.orientation.flip_half(e, slot);
                }
            }
        }
        Ok(f)
    }
}

/// Sum of values over extroverted edges minus sum over introverted edges.
/// Zero for every integer flow; a quick structural sanity check used by
/// tests and by the builders' assertions.
pub fn source_sink_imbalance(g: &SignedGraph, f: &Flow) -> i64 {
    let mut total = 0i64;
    for e in 0..g.m() {
        match f.orientation.kind(e) {
            EdgeOrient::Extroverted => total += f.values[e],
            EdgeOrient::Introverted => total -= f.values[e],
            EdgeOrient::Directed { .. } => {}
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Sign, SignedGraph};

    fn directed(head_second: bool) -> (HalfDir, HalfDir) {
        if head_second {
            (HalfDir::Out, HalfDir::In)
        } else {
            (HalfDir::In, HalfDir::Out)
        }
    }

    #[test]
    fn triangle_circulation_is_a_2_flow() {
        let g = SignedGraph::all_positive(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let o = Orientation::from_dirs(vec![directed(true); 3]);
        let f = Flow::integer(o, vec![1, 1, 1], 2);
        f.verify(&g).unwrap();
        assert_eq!(source_sink_imbalance(&g, &f), 0);
    }

    #[test]
    fn dumbbell_has_a_3_flow() {
        // negative loop, positive bar, negative loop
        let g = SignedGraph::from_edges(
            2,
            &[
                (0, 0, Sign::Negative),
                (0, 1, Sign::Positive),
                (1, 1, Sign::Negative),
            ],
        )
        .unwrap();
        let o = Orientation::from_dirs(vec![
            (HalfDir::In, HalfDir::In),
            directed(true),
            (HalfDir::Out, HalfDir::Out),
        ]);
        let f = Flow::integer(o, vec![1, 2, 1], 3);
        f.verify(&g).unwrap();
        assert_eq!(f.orientation.kind(0), EdgeOrient::Extroverted);
        assert_eq!(f.orientation.kind(2), EdgeOrient::Introverted);
        assert_eq!(source_sink_imbalance(&g, &f), 0);
    }

    #[test]
    fn negative_loop_needs_mod_arithmetic() {
        let g = SignedGraph::from_edges(1, &[(0, 0, Sign::Negative)]).unwrap();
        let o = Orientation::from_dirs(vec![(HalfDir::In, HalfDir::In)]);
        // excess at the vertex is 2v: never 0 over the integers
        let f = Flow::integer(o.clone(), vec![1], 3);
        assert!(f.verify(&g).is_err());
        // mod 4 with value 2 balances: 2*2 = 4
        let f = Flow::mod_k(o.clone(), vec![2], 4);
        f.verify(&g).unwrap();
        let f = Flow::mod_k(o, vec![1], 4);
        assert!(f.verify(&g).is_err());
    }

    #[test]
    fn orientation_must_match_signs() {
        let g = SignedGraph::from_edges(2, &[(0, 1, Sign::Negative)]).unwrap();
        let o = Orientation::from_dirs(vec![directed(true)]);
        assert!(o.check_signs(&g).is_err());
        let o = Orientation::from_dirs(vec![(HalfDir::In, HalfDir::In)]);
        o.check_signs(&g).unwrap();
        let gp = SignedGraph::all_positive(2, &[(0, 1)]).unwrap();
        assert!(o.check_signs(&gp).is_err());
    }

    #[test]
    fn reversal_and_negation_preserve_validity() {
        let g = SignedGraph::from_edges(
            2,
            &[
                (0, 0, Sign::Negative),
                (0, 1, Sign::Positive),
                (1, 1, Sign::Negative),
            ],
        )
        .unwrap();
        let o = Orientation::from_dirs(vec![
            (HalfDir::In, HalfDir::In),
            directed(true),
            (HalfDir::Out, HalfDir::Out),
        ]);
        let f = Flow::integer(o, vec![1, 2, 1], 3);
        f.with_edge_reversed(1).verify(&g).unwrap();
        f.with_edge_reversed(0).verify(&g).unwrap();
        f.negated().verify(&g).unwrap();
        assert_eq!(f.with_edge_reversed(1).value(1), -2);
        let p = f.with_edge_reversed(1).made_all_positive();
        assert_eq!(p, f);
    }

    #[test]
    fn switching_transports_flows() {
        // balanced square with two negatives, switch makes it all positive
        let g = SignedGraph::from_edges(
            4,
            &[
                (0, 1, Sign::Negative),
                (1, 2, Sign::Positive),
                (2, 3, Sign::Negative),
                (3, 0, Sign::Positive),
            ],
        )
        .unwrap();
        let o = Orientation::from_dirs(vec![
            (HalfDir::In, HalfDir::In),
            directed(true),
            (HalfDir::Out, HalfDir::Out),
            directed(false),
        ]);
        let f = Flow::integer(o, vec![1, 1, 1, 1], 2);
        f.verify(&g).unwrap();
        let s = crate::graph::SwitchingSet::from_vertices(4, &[1, 2]).unwrap();
        let g2 = g.switch(&s).unwrap();
        assert!(g2.is_all_positive());
        let f2 = f.switched(&g, &s).unwrap();
        f2.verify(&g2).unwrap();
        assert_eq!(f2.values, f.values);
    }

    #[test]
    fn mod_k_values_must_be_canonical() {
        let g = SignedGraph::all_positive(2, &[(0, 1), (0, 1)]).unwrap();
        let o = Orientation::from_dirs(vec![directed(true), directed(false)]);
        let f = Flow::mod_k(o.clone(), vec![2, 2], 4);
        f.verify(&g).unwrap();
        let f = Flow::mod_k(o, vec![-2, 2], 4);
        assert!(f.verify(&g).is_err());
    }
}

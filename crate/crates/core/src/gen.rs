//! Named graphs and signature corpora backing the tests and the catalog
//! tooling. Everything here is deterministic: fixed vertex numbering, fixed
//! edge order, and signature lists sorted the same way on every run.

use crate::graph::{Sign, SignedGraph};
use crate::structure;
use crate::EdgeId;

fn positive(n: usize, list: &[(usize, usize)]) -> SignedGraph {
    SignedGraph::all_positive(n, list).expect("generator edge lists are well formed")
}

/// Cycle on n vertices; n = 1 gives a single loop, n = 2 a digon.
pub fn cycle(n: usize) -> SignedGraph {
    assert!(n >= 1);
    let list: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    positive(n, &list)
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> SignedGraph {
    positive(2, &[(0, 1), (0, 1), (0, 1)])
}

/// Loop, bridge, loop: edge 0 is the loop at vertex 0, edge 1 the bridge,
/// edge 2 the loop at vertex 1.
pub fn dumbbell() -> SignedGraph {
    positive(2, &[(0, 0), (0, 1), (1, 1)])
}

pub fn k4() -> SignedGraph {
    positive(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// Complete bipartite graph on parts {0,1,2} and {3,4,5}.
pub fn k33() -> SignedGraph {
    positive(
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
}

/// Triangular prism: triangles 012 and 345, rungs i..i+3.
pub fn prism() -> SignedGraph {
    positive(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    )
}

/// 3-cube; vertices are the 3-bit strings.
pub fn cube() -> SignedGraph {
    let mut list = Vec::new();
    for v in 0usize..8 {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                list.push((v, w));
            }
        }
    }
    positive(8, &list)
}

/// Petersen graph: outer 5-cycle 0..4, spokes, inner pentagram 5..9.
pub fn petersen() -> SignedGraph {
    let mut list = Vec::new();
    for i in 0..5 {
        list.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        list.push((i, i + 5));
    }
    for i in 0..5 {
        let a = 5 + i;
        let b = 5 + (i + 2) % 5;
        list.push((a.min(b), a.max(b)));
    }
    positive(10, &list)
}

/// Heawood graph: 14-cycle plus the chords i..i+5 for odd i.
pub fn heawood() -> SignedGraph {
    let mut list = Vec::new();
    for i in 0..14 {
        list.push((i, (i + 1) % 14));
    }
    for i in (1..14).step_by(2) {
        let j = (i + 5) % 14;
        list.push((i.min(j), i.max(j)));
    }
    positive(14, &list)
}

/// Moebius ladder on 2k vertices: the 2k-cycle plus the k long chords.
/// Bipartite exactly when k is odd.
pub fn moebius_ladder(k: usize) -> SignedGraph {
    assert!(k >= 2);
    let n = 2 * k;
    let mut list = Vec::new();
    for i in 0..n {
        list.push((i, (i + 1) % n));
    }
    for i in 0..k {
        list.push((i, i + k));
    }
    positive(n, &list)
}

/// Hexagonal prism: two 6-cycles 0..5 and 6..11 joined by rungs.
pub fn hexagonal_prism() -> SignedGraph {
    let mut list = Vec::new();
    for i in 0..6 {
        list.push((i, (i + 1) % 6));
    }
    for i in 0..6 {
        list.push((6 + i, 6 + (i + 1) % 6));
    }
    for i in 0..6 {
        list.push((i, i + 6));
    }
    positive(12, &list)
}

/// Franklin graph: 12-cycle plus the chords i..i+5 for even i. Bipartite.
pub fn franklin() -> SignedGraph {
    let mut list = Vec::new();
    for i in 0..12 {
        list.push((i, (i + 1) % 12));
    }
    for i in (0..12).step_by(2) {
        let j = (i + 5) % 12;
        list.push((i.min(j), i.max(j)));
    }
    positive(12, &list)
}

/// Even cycle with every second edge doubled, so each vertex meets one
/// single edge and one parallel pair. For i even, edges 2i and 2i+1 in the
/// walk order are the parallel pair on (i, i+1).
pub fn doubled_cycle(n: usize) -> SignedGraph {
    assert!(n >= 4 && n.is_multiple_of(2));
    let mut list = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        list.push((i.min(j), i.max(j)));
        if i.is_multiple_of(2) {
            list.push((i.min(j), i.max(j)));
        }
    }
    positive(n, &list)
}

/// Doubled cycle with the first copy of each parallel pair negative; the
/// minimum negative set in its switching class.
pub fn signed_doubled_cycle(n: usize) -> SignedGraph {
    let mut g = doubled_cycle(n);
    let ids: Vec<EdgeId> = (0..g.m())
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            u % 2 == 0 && v == (u + 1) % n && e + 1 < g.m() && g.endpoints(e + 1) == (u, v)
        })
        .collect();
    for e in ids {
        g = g.with_edge_sign(e, Sign::Negative);
    }
    g
}

/// Copy of g with exactly the listed edges negative.
pub fn with_negatives(g: &SignedGraph, ids: &[EdgeId]) -> SignedGraph {
    let mut out = g.clone();
    for e in 0..out.m() {
        let want = if ids.contains(&e) {
            Sign::Negative
        } else {
            Sign::Positive
        };
        out = out.with_edge_sign(e, want);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignaturePolicy {
    /// Every unordered pair of distinct edges.
    AllPairs,
    /// One representative pair per switching class.
    Canonical,
    /// Canonical pairs whose signed graph is flow-admissible.
    Admissible,
}

/// All two-negative-edge signatures of the underlying graph of g under the
/// policy. Switching classes are walked exactly: two signatures are
/// equivalent iff their negative sets differ by an edge cut, so each pair is
/// kept only when it is the lexicographically least two-element set in its
/// class. Requires n <= 20 and m <= 64.
pub fn two_negative_signatures(g: &SignedGraph, policy: SignaturePolicy) -> Vec<[EdgeId; 2]> {
    let n = g.n();
    let m = g.m();
    assert!(n <= 20, "signature enumeration caps at 20 vertices");
    assert!(m <= 64, "signature enumeration caps at 64 edges");
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            pairs.push([a, b]);
        }
    }
    if policy == SignaturePolicy::AllPairs {
        return pairs;
    }

    // Every cut is delta(W) for exactly one W not containing vertex 0.
    let masks = vertex_cut_masks(g);
    let canonical = |pair: [EdgeId; 2]| -> [EdgeId; 2] {
        let set = (1u64 << pair[0]) | (1u64 << pair[1]);
        let mut best = pair;
        for &cut in &masks {
            let sym = set ^ cut;
            if sym.count_ones() == 2 {
                let lo = sym.trailing_zeros() as EdgeId;
                let hi = (63 - sym.leading_zeros()) as EdgeId;
                if [lo, hi] < best {
                    best = [lo, hi];
                }
            }
        }
        best
    };

    pairs.retain(|&p| canonical(p) == p);
    if policy == SignaturePolicy::Admissible {
        pairs.retain(|&p| structure::is_flow_admissible(&with_negatives(g, &p)));
    }
    pairs
}

fn vertex_cut_masks(g: &SignedGraph) -> Vec<u64> {
    let n = g.n();
    let top = 1usize << n.saturating_sub(1);
    let mut masks = Vec::with_capacity(top);
    for w in 0..top {
        let w = (w as u64) << 1; // vertex 0 stays outside W
        let mut cut = 0u64;
        for (e, edge) in g.edges().iter().enumerate() {
            let cu = (w >> edge.u) & 1;
            let cv = (w >> edge.v) & 1;
            if cu != cv {
                cut |= 1 << e;
            }
        }
        masks.push(cut);
    }
    masks
}

/// A cubic fragment with one vertex of degree 2 left open for a bridge.
/// Offsets shift it into a larger vertex numbering.
struct EndBlock {
    n: usize,
    edges: Vec<(usize, usize)>,
    negative: usize,
    attach: usize,
}

/// A cubic fragment with two open degree-2 vertices, all positive.
struct MiddleBlock {
    n: usize,
    edges: Vec<(usize, usize)>,
    attach_left: usize,
    attach_right: usize,
}

fn end_blocks() -> Vec<EndBlock> {
    let mut out = Vec::new();
    // Theta with one parallel edge subdivided; the digon keeps the negative.
    out.push(EndBlock {
        n: 3,
        edges: vec![(0, 1), (0, 1), (0, 2), (1, 2)],
        negative: 0,
        attach: 2,
    });
    // K4 with edge (2,3) subdivided by vertex 4; three negative placements.
    let k4sub = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)];
    for negative in [0, 1, 3] {
        out.push(EndBlock {
            n: 5,
            edges: k4sub.clone(),
            negative,
            attach: 4,
        });
    }
    // Prism with rung (2,5) subdivided by vertex 6; two negative placements.
    let prismsub = vec![
        (0, 1),
        (1, 2),
        (0, 2),
        (3, 4),
        (4, 5),
        (3, 5),
        (0, 3),
        (1, 4),
        (2, 6),
        (5, 6),
    ];
    for negative in [0, 6] {
        out.push(EndBlock {
            n: 7,
            edges: prismsub.clone(),
            negative,
            attach: 6,
        });
    }
    out
}

fn middle_block() -> MiddleBlock {
    // K4 minus the edge (2,3); both removed endpoints stay open.
    MiddleBlock {
        n: 4,
        edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
        attach_left: 2,
        attach_right: 3,
    }
}

/// Join an end block, a run of middle blocks, and another end block with
/// bridges. One bridge when `middles` is 0, one more per middle block.
pub fn bridged_chain(left: usize, middles: usize, right: usize) -> SignedGraph {
    let ends = end_blocks();
    let le = &ends[left];
    let re = &ends[right];
    let mid = middle_block();

    let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
    let mut offset = 0usize;
    let push_block = |edges: &mut Vec<(usize, usize, Sign)>,
                      block_edges: &[(usize, usize)],
                      negative: Option<usize>,
                      offset: usize| {
        for (i, &(u, v)) in block_edges.iter().enumerate() {
            let sign = if Some(i) == negative {
                Sign::Negative
            } else {
                Sign::Positive
            };
            edges.push((u + offset, v + offset, sign));
        }
    };

    push_block(&mut edges, &le.edges, Some(le.negative), offset);
    let mut open = le.attach + offset;
    offset += le.n;
    for _ in 0..middles {
        push_block(&mut edges, &mid.edges, None, offset);
        edges.push((open, mid.attach_left + offset, Sign::Positive));
        open = mid.attach_right + offset;
        offset += mid.n;
    }
    push_block(&mut edges, &re.edges, Some(re.negative), offset);
    edges.push((open, re.attach + offset, Sign::Positive));
    offset += re.n;

    SignedGraph::from_edges(offset, &edges).expect("chain construction is well formed")
}

/// Corpus of bridged, flow-admissible, two-negative cubic graphs: every
/// ordered pair of end-block shapes under bridge chains of one to three
/// bridges.
pub fn bridged_chain_corpus() -> Vec<SignedGraph> {
    let count = end_blocks().len();
    let mut out = Vec::new();
    for left in 0..count {
        for right in 0..count {
            for middles in 0..3 {
                out.push(bridged_chain(left, middles, right));
            }
        }
    }
    out
}

//! Closure-incidence graph of the SU(3) stratification: which components
//! attach to which totally reducible points, which circles, and with what
//! multiplicities.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclotomic::{canonical_t, extended_gcd, Root};
use crate::strata::{
    enumerate_components, Component, EigenData, PointClass, StrataError, StratumClass, Topology,
    TorusKnot,
};

#[derive(Debug, Clone, Serialize)]
pub enum NodeKind {
    Component(Component),
    /// Rational point of the triangle T with coordinates (a/mn, b/mn),
    /// restricted to points in the closure of an irreducible stratum.
    TrPoint { a: i64, b: i64, class: PointClass },
    /// Circle {t, t*alpha, t^-2*alpha^-1} with alpha = zeta_mn^k, keyed by
    /// the canonical representative min(k, mn-k) of the alpha <-> alpha^-1
    /// symmetry. `stratum2` marks circles realized by partial components
    /// (k nonzero mod n and mod m); the rest are degenerate splitting loci.
    Circle { k: i64, stratum2: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// Irreducible component to a totally reducible vertex of its closure.
    Vertex,
    /// Boundary segment (i, j) of a (3a) block attached to the partial
    /// component whose one-dimensional summand takes (lambda_i, nu_j).
    Segment { i: u8, j: u8 },
    /// Edge of a (3b) triangle glued along a circle.
    CircleAttachment,
    /// Boundary circle of a partial component.
    Boundary,
    /// Rational point lying on a circle (one per splitting choice).
    PointOnCircle,
}

#[derive(Debug, Clone, Serialize)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub kind: EdgeKind,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceGraph {
    pub knot: TorusKnot,
    pub nodes: Vec<NodeKind>,
    pub edges: Vec<Edge>,
}

/// Canonical circle representative of k under k <-> mn - k.
fn circle_canonical(k: i64, mn: i64) -> i64 {
    let k = k.rem_euclid(mn);
    debug_assert_ne!(k, 0);
    k.min(mn - k)
}

/// Exponent k with zeta_q^k equal to the given root; panics if the root is
/// not a q-th root of unity.
fn root_exp_in(root: &Root, q: i64) -> i64 {
    let num = (root.exp() as i128) * (q as i128);
    let den = root.order() as i128;
    assert_eq!(num % den, 0, "{root} is not a {q}-th root of unity");
    ((num / den) as i64).rem_euclid(q)
}

/// The k in Z/mn with k = e (mod n) and k = f (mod m).
fn crt_k(e: i64, f: i64, n: i64, m: i64) -> i64 {
    let (g, x, y) = extended_gcd(n, m);
    debug_assert_eq!(g, 1);
    let mn = (n * m) as i128;
    let k = (f as i128) * (n as i128) * (x as i128) + (e as i128) * (m as i128) * (y as i128);
    k.rem_euclid(mn) as i64
}

/// Coordinates (a, b) = (u1*mn, u2*mn) of the totally reducible point given
/// by an eigenvalue triple of mu_{3mn} elements with mu_mn ratios: the
/// normalization of the sorted exponent lift, in integer arithmetic.
pub(crate) fn tr_point_key(triple: &[Root; 3], mn: i64) -> (i64, i64) {
    let q = 3 * mn;
    let mut e = [
        root_exp_in(&triple[0], q),
        root_exp_in(&triple[1], q),
        root_exp_in(&triple[2], q),
    ];
    e.sort_unstable();
    for c in 0..3usize {
        // rotation starting at index c; wrapped entries gain a full turn
        let s0 = e[c];
        let s1 = e[(c + 1) % 3] + if c + 1 >= 3 { q } else { 0 };
        let s2 = e[(c + 2) % 3] + if c + 2 >= 3 { q } else { 0 };
        let total = s0 + s1 + s2;
        debug_assert_eq!(total % q, 0, "triple product is not 1");
        // the integer shift exists iff the lift sum is divisible by 3
        if total % (3 * q) != 0 {
            continue;
        }
        debug_assert_eq!((s1 - s0) % 3, 0, "ratio not an mn-th root");
        return ((s1 - s0) / 3, (s2 - s1) / 3);
    }
    unreachable!("exactly one rotation admits an integer shift");
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The 9 boundary segments of a (3a) block, as edges joining the 6
/// permutation vertices (sigma incident to segment (i, j) iff sigma(i) = j),
/// must form a connected graph: the Moebius boundary double-covers the
/// triangle boundary. The structure is independent of the eigenvalue data.
fn segment_graph_connected() -> bool {
    let mut reached = [false; 6];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(v) = stack.pop() {
        for i in 0..3 {
            let j = PERMS3[v][i];
            for (w, perm) in PERMS3.iter().enumerate() {
                if w != v && perm[i] == j && !reached[w] {
                    reached[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    reached.iter().all(|&r| r)
}

/// Merge up to three circle keys into (key, multiplicity) pairs, ascending.
fn merge_three(mut keys: [i64; 3]) -> Vec<(i64, u32)> {
    keys.sort_unstable();
    let mut out: Vec<(i64, u32)> = Vec::with_capacity(3);
    for k in keys {
        match out.last_mut() {
            Some((last, mult)) if *last == k => *mult += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

pub fn build_incidence(knot: &TorusKnot, max_mn: i64) -> Result<IncidenceGraph, StrataError> {
    let mn = knot.mn();
    if mn > max_mn {
        return Err(StrataError::SweepTooLarge { mn, bound: max_mn });
    }
    let (n, m) = (knot.n(), knot.m());
    let mut nodes: Vec<NodeKind> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();

    // component nodes, in class order
    let comps: Vec<Component> = StratumClass::ALL
        .into_iter()
        .flat_map(|class| enumerate_components(knot, class))
        .collect();
    let mut partial_index: HashMap<(i64, i64), u32> = HashMap::new();
    for comp in &comps {
        if let EigenData::Partial { eps, ups } = &comp.data {
            let key = (root_exp_in(eps, n), root_exp_in(ups, m));
            partial_index.insert(key, nodes.len() as u32);
        }
        nodes.push(NodeKind::Component(comp.clone()));
    }

    // circle nodes, one per canonical k, contiguous from circle_base
    let circle_base = nodes.len() as u32;
    for k in 1..=(mn / 2) {
        nodes.push(NodeKind::Circle { k, stratum2: k % n != 0 && k % m != 0 });
    }
    let circle_node = |k: i64| circle_base + (k as u32) - 1;
    let circle_is_stratum2 = |k: i64| k % n != 0 && k % m != 0;

    // rational points of T in irreducible closures, with their 3 splitting
    // circles counted with multiplicity; ids and classes kept in flat
    // arrays indexed by a*mn + b
    const NO_POINT: u32 = u32::MAX;
    let mut point_id: Vec<u32> = vec![NO_POINT; (mn * mn) as usize];
    let mut point_is_3a: Vec<bool> = vec![false; (mn * mn) as usize];
    let hit: Vec<u8> = (0..mn)
        .map(|r| ((r % m == 0) as u8) + ((r % n == 0) as u8))
        .collect();
    for a in 1..mn {
        for b in 1..(mn - a) {
            let hits = hit[a as usize] + hit[b as usize] + hit[(a + b) as usize];
            if hits >= 2 {
                continue;
            }
            let class = if hits == 0 { PointClass::Irr3aPoint } else { PointClass::Irr3bPoint };
            let id = nodes.len() as u32;
            let slot = (a * mn + b) as usize;
            point_id[slot] = id;
            point_is_3a[slot] = hits == 0;
            nodes.push(NodeKind::TrPoint { a, b, class });
            let on = merge_three([
                circle_canonical(a, mn),
                circle_canonical(b, mn),
                circle_canonical(a + b, mn),
            ]);
            debug_assert_eq!(on.iter().map(|&(_, mult)| mult).sum::<u32>(), 3);
            for (k, mult) in on {
                edges.push(Edge {
                    from: id,
                    to: circle_node(k),
                    kind: EdgeKind::PointOnCircle,
                    multiplicity: mult,
                });
            }
        }
    }

    assert!(segment_graph_connected(), "segment graph must double-cover the boundary");

    // how many components claim each point as a vertex
    let mut vertex_hits: Vec<u8> = vec![0; (mn * mn) as usize];
    // which partial component owns each stratum-2 circle
    let mut circle_owner: Vec<u32> = vec![u32::MAX; (mn / 2 + 1) as usize];

    let mut claim_vertex = |slot: usize,
                            want_3a: bool,
                            seen: &mut Vec<usize>,
                            point_id: &[u32],
                            point_is_3a: &[bool],
                            vertex_hits: &mut [u8]|
     -> u32 {
        assert_ne!(point_id[slot], NO_POINT, "vertex is not an enumerated point");
        assert_eq!(point_is_3a[slot], want_3a, "vertex has the wrong class");
        assert!(!seen.contains(&slot), "repeated closure vertex");
        seen.push(slot);
        vertex_hits[slot] += 1;
        point_id[slot]
    };

    for (ci, comp) in comps.iter().enumerate() {
        let ci = ci as u32;
        match &comp.data {
            EigenData::TotallyReducible => {}
            EigenData::Partial { eps, ups } => {
                let e = root_exp_in(eps, n);
                let f = root_exp_in(ups, m);
                let mut circles: Vec<i64> = vec![
                    circle_canonical(crt_k(e, f, n, m), mn),
                    circle_canonical(crt_k(e, (-f).rem_euclid(m), n, m), mn),
                ];
                circles.sort_unstable();
                circles.dedup();
                let expected = match comp.topology {
                    Topology::OpenCylinder => 2,
                    Topology::OpenMobius => 1,
                    _ => unreachable!(),
                };
                assert_eq!(circles.len(), expected, "partial ({e},{f}) boundary circles");
                for k in circles {
                    assert!(circle_is_stratum2(k));
                    assert_eq!(
                        circle_owner[k as usize],
                        u32::MAX,
                        "circle {k} owned by two partial components"
                    );
                    circle_owner[k as usize] = ci;
                    edges.push(Edge {
                        from: ci,
                        to: circle_node(k),
                        kind: EdgeKind::Boundary,
                        multiplicity: 1,
                    });
                }
            }
            EigenData::Irr3a { lambda, nu } => {
                let t: Vec<[Root; 3]> = (0..3)
                    .map(|i| {
                        [0, 1, 2].map(|j| {
                            canonical_t(n, m, &lambda[i], &nu[j]).expect("compatible")
                        })
                    })
                    .collect();
                let mut seen: Vec<usize> = Vec::with_capacity(6);
                for perm in PERMS3 {
                    let ts = [t[0][perm[0]], t[1][perm[1]], t[2][perm[2]]];
                    let (a, b) = tr_point_key(&ts, mn);
                    let slot = (a * mn + b) as usize;
                    let id = claim_vertex(
                        slot, true, &mut seen, &point_id, &point_is_3a, &mut vertex_hits,
                    );
                    edges.push(Edge { from: ci, to: id, kind: EdgeKind::Vertex, multiplicity: 1 });
                }
                let le = [0, 1, 2].map(|i| root_exp_in(&lambda[i], 3 * n));
                let ne = [0, 1, 2].map(|j| root_exp_in(&nu[j], 3 * m));
                for i in 0..3usize {
                    for j in 0..3usize {
                        // one-dimensional summand (lambda_i, nu_j); the
                        // two-dimensional summand keeps the other pairs
                        let [la, lb] = REST[i];
                        let [nc, nd] = REST[j];
                        let re = (le[la] - le[lb]).rem_euclid(3 * n) / 3;
                        let rf = (ne[nc] - ne[nd]).rem_euclid(3 * m) / 3;
                        let e = re.min(n - re);
                        let f = rf.min(m - rf);
                        let target = partial_index[&(e, f)];
                        edges.push(Edge {
                            from: ci,
                            to: target,
                            kind: EdgeKind::Segment { i: i as u8, j: j as u8 },
                            multiplicity: 1,
                        });
                    }
                }
            }
            EigenData::Irr3bA { lambda, nu } => {
                let lam2 = lambda.pow(-2);
                let t2 = [0, 1, 2].map(|i| canonical_t(n, m, &lam2, &nu[i]).expect("compatible"));
                let t1 = [0, 1, 2].map(|i| canonical_t(n, m, lambda, &nu[i]).expect("compatible"));
                irr3b_edges(
                    ci, knot, &t1, &t2, &point_id, &point_is_3a, &mut vertex_hits, circle_base,
                    &mut edges,
                );
            }
            EigenData::Irr3bB { nu, lambda } => {
                let nu2 = nu.pow(-2);
                let t2 = [0, 1, 2].map(|i| canonical_t(n, m, &lambda[i], &nu2).expect("compatible"));
                let t1 = [0, 1, 2].map(|i| canonical_t(n, m, &lambda[i], nu).expect("compatible"));
                irr3b_edges(
                    ci, knot, &t1, &t2, &point_id, &point_is_3a, &mut vertex_hits, circle_base,
                    &mut edges,
                );
            }
        }
    }

    // every stratum-2 circle is the boundary circle of exactly one partial
    // component
    for k in 1..=(mn / 2) {
        if circle_is_stratum2(k) {
            assert_ne!(circle_owner[k as usize], u32::MAX, "unclaimed stratum-2 circle {k}");
        }
    }
    // every irreducible-closure point is a vertex of exactly one component
    for slot in 0..point_id.len() {
        if point_id[slot] != NO_POINT {
            assert_eq!(
                vertex_hits[slot],
                1,
                "point {}/{} of ({n},{m}) not a vertex of exactly one component",
                slot as i64 / mn,
                slot as i64 % mn
            );
        }
    }

    Ok(IncidenceGraph { knot: *knot, nodes, edges })
}

/// The two indices other than i.
const REST: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];

/// Vertex and circle-attachment edges of one (3b) triangle. `t1[i]` is the
/// circle parameter pairing the repeated eigenvalue with the i-th distinct
/// one on the other side, `t2[i]` the parameter pairing the isolated
/// (square-inverse) eigenvalue with it.
#[allow(clippy::too_many_arguments)]
fn irr3b_edges(
    ci: u32,
    knot: &TorusKnot,
    t1: &[Root; 3],
    t2: &[Root; 3],
    point_id: &[u32],
    point_is_3a: &[bool],
    vertex_hits: &mut [u8],
    circle_base: u32,
    edges: &mut Vec<Edge>,
) {
    let mn = knot.mn();
    let (n, m) = (knot.n(), knot.m());
    // vertices: choose which distinct eigenvalue pairs with the isolated one
    let mut seen: Vec<usize> = Vec::with_capacity(3);
    for i in 0..3usize {
        let [j, k] = REST[i];
        let ts = [t2[i], t1[j], t1[k]];
        let (a, b) = tr_point_key(&ts, mn);
        let slot = (a * mn + b) as usize;
        assert_ne!(point_id[slot], u32::MAX, "vertex is not an enumerated point");
        assert!(!point_is_3a[slot], "(3b) vertex classified as (3a)");
        assert!(!seen.contains(&slot), "repeated vertex of a (3b) triangle");
        seen.push(slot);
        vertex_hits[slot] += 1;
        edges.push(Edge {
            from: ci,
            to: point_id[slot],
            kind: EdgeKind::Vertex,
            multiplicity: 1,
        });
    }
    // edges of the triangle: leave one distinct eigenvalue in the
    // one-dimensional summand; the circle datum alpha is the ratio of the
    // two-dimensional pair
    let keys = [0, 1, 2].map(|left_out| {
        let [i, j] = REST[left_out];
        let alpha = t2[j].div(&t1[i]).expect("same order");
        let k = circle_canonical(root_exp_in(&alpha, mn), mn);
        assert!(k % n != 0 && k % m != 0, "(3b) edge on a degenerate circle");
        k
    });
    let on = merge_three(keys);
    debug_assert_eq!(on.iter().map(|&(_, mult)| mult).sum::<u32>(), 3);
    for (k, mult) in on {
        edges.push(Edge {
            from: ci,
            to: circle_base + (k as u32) - 1,
            kind: EdgeKind::CircleAttachment,
            multiplicity: mult,
        });
    }
}

/// chi_c re-derived from the graph's component inventory via topology tags.
pub fn euler_from_graph(graph: &IncidenceGraph) -> i64 {
    graph
        .nodes
        .iter()
        .map(|node| match node {
            NodeKind::Component(c) => match c.topology {
                Topology::Triangle2D => 1,
                Topology::OpenCylinder | Topology::OpenMobius => 0,
                Topology::OrthantBlock3a => 5,
                Topology::OpenTriangle3b => 1,
            },
            _ => 0,
        })
        .sum()
}

impl IncidenceGraph {
    pub fn node_label(&self, id: u32) -> String {
        match &self.nodes[id as usize] {
            NodeKind::Component(c) => format!("{:?}#{id}", c.class),
            NodeKind::TrPoint { a, b, .. } => format!("P({a},{b})"),
            NodeKind::Circle { k, stratum2 } => {
                if *stratum2 {
                    format!("S({k})")
                } else {
                    format!("S({k})*")
                }
            }
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph incidence {\n");
        for (id, _) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", self.node_label(id as u32));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -- n{} [label=\"{:?} x{}\"];",
                e.from, e.to, e.kind, e.multiplicity
            );
        }
        out.push_str("}\n");
        out
    }
}

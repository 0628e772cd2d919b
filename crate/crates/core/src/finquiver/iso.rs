//! Isomorphism of finite quivers.
//!
//! Quivers here have no parallel edges, so an edge bijection commuting with
//! `r` and `s` is induced by a vertex bijection `phi` via `(x, y) -> (phi x, phi y)`.
//! With normalized counting measure on every fiber the measure-scaling constants
//! are all 1, which leaves plain directed-graph isomorphism.

use std::collections::BTreeMap;

use serde::Serialize;

use super::CyclicQuiver;

/// A vertex bijection together with the edge bijection it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    /// `vertex_map[x]` is the image of vertex `x`.
    pub vertex_map: Vec<u64>,
    /// Pairs `(edge of the source quiver, image edge)`, sorted by source edge.
    pub edge_map: Vec<([u64; 2], [u64; 2])>,
}

impl Isomorphism {
    /// Re-checks that this is a bijection of vertices and of edges commuting with `r` and `s`.
    pub fn is_valid_between(&self, a: &CyclicQuiver, b: &CyclicQuiver) -> bool {
        if a.p != b.p || a.edges.len() != b.edges.len() || self.vertex_map.len() as u64 != a.p {
            return false;
        }
        let mut seen = vec![false; a.p as usize];
        for &y in &self.vertex_map {
            if y >= b.p || std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        if self.edge_map.len() != a.edges.len() {
            return false;
        }
        let mut image_seen = std::collections::BTreeSet::new();
        for (e, f) in &self.edge_map {
            let commutes =
                self.vertex_map[e[0] as usize] == f[0] && self.vertex_map[e[1] as usize] == f[1];
            if !commutes || !a.has_edge(e[0], e[1]) || !b.has_edge(f[0], f[1]) {
                return false;
            }
            if !image_seen.insert(*f) {
                return false;
            }
        }
        true
    }
}

/// Per-vertex signature used to prune candidate images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct VertexSig {
    out_deg: usize,
    in_deg: usize,
    has_loop: bool,
}

struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
    sig: Vec<VertexSig>,
}

impl Graph {
    fn new(q: &CyclicQuiver) -> Self {
        let n = q.p as usize;
        let mut adj = vec![vec![false; n]; n];
        for &[x, y] in &q.edges {
            adj[x as usize][y as usize] = true;
        }
        let sig = (0..n)
            .map(|v| VertexSig {
                out_deg: adj[v].iter().filter(|&&b| b).count(),
                in_deg: (0..n).filter(|&u| adj[u][v]).count(),
                has_loop: adj[v][v],
            })
            .collect();
        Graph { n, adj, sig }
    }

    fn sig_histogram(&self) -> BTreeMap<VertexSig, usize> {
        let mut h = BTreeMap::new();
        for s in &self.sig {
            *h.entry(*s).or_insert(0) += 1;
        }
        h
    }
}

fn extend(
    a: &Graph,
    b: &Graph,
    order: &[usize],
    depth: usize,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.n {
        if used[w] || a.sig[v] != b.sig[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let mu = map[u].expect("earlier vertices are mapped");
            a.adj[u][v] == b.adj[mu][w] && a.adj[v][u] == b.adj[w][mu]
        });
        if !consistent {
            continue;
        }
        map[v] = Some(w);
        used[w] = true;
        if extend(a, b, order, depth + 1, map, used) {
            return true;
        }
        map[v] = None;
        used[w] = false;
    }
    false
}

/// Vertex visiting order: breadth-first over the underlying undirected graph,
/// so each new vertex is constrained by already-mapped neighbours.
fn search_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.n);
    let mut seen = vec![false; g.n];
    for start in 0..g.n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let next: Vec<usize> = (0..g.n)
                .filter(|&u| !seen[u] && (g.adj[v][u] || g.adj[u][v]))
                .collect();
            for u in next {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    order
}

/// Finds an isomorphism `a -> b` if one exists.
pub fn isomorphic(a: &CyclicQuiver, b: &CyclicQuiver) -> Option<Isomorphism> {
    if a.p != b.p || a.edges.len() != b.edges.len() {
        return None;
    }
    let ga = Graph::new(a);
    let gb = Graph::new(b);
    if ga.sig_histogram() != gb.sig_histogram() {
        return None;
    }
    if a.component_sizes() != b.component_sizes() {
        return None;
    }
    let order = search_order(&ga);
    let mut map = vec![None; ga.n];
    let mut used = vec![false; gb.n];
    if !extend(&ga, &gb, &order, 0, &mut map, &mut used) {
        return None;
    }
    let vertex_map: Vec<u64> = map
        .into_iter()
        .map(|w| w.expect("complete assignment") as u64)
        .collect();
    let edge_map = a
        .edges
        .iter()
        .map(|&[x, y]| ([x, y], [vertex_map[x as usize], vertex_map[y as usize]]))
        .collect();
    let iso = Isomorphism {
        vertex_map,
        edge_map,
    };
    debug_assert!(iso.is_valid_between(a, b));
    iso.is_valid_between(a, b).then_some(iso)
}

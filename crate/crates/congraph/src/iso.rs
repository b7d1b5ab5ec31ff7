//! Level-respecting graph isomorphism: invariant pre-filters, iterative color
//! refinement with individualization-backtracking, and a brute-force
//! permutation oracle for small graphs.  Certificates are explicit vertex
//! bijections verified edge by edge.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::LevelledGraph;

/// Structure-only view of a levelled graph: per-vertex levels and sorted
/// adjacency.  This is all isomorphism testing may depend on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractGraph {
    pub levels: Vec<u32>,
    pub adj: Vec<Vec<u32>>,
}

impl AbstractGraph {
    pub fn vertex_count(&self) -> usize {
        self.levels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Cheap isomorphism invariants: per-level sizes, per-level degree
    /// multisets, and component-size multiset.
    pub fn invariants(&self) -> (BTreeMap<u32, usize>, BTreeMap<(u32, usize), usize>, Vec<usize>) {
        let mut level_sizes = BTreeMap::new();
        let mut degrees = BTreeMap::new();
        for (v, &lvl) in self.levels.iter().enumerate() {
            *level_sizes.entry(lvl).or_insert(0) += 1;
            *degrees.entry((lvl, self.adj[v].len())).or_insert(0) += 1;
        }
        // component sizes via a scratch union-find
        let mut parent: Vec<u32> = (0..self.levels.len() as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for (v, list) in self.adj.iter().enumerate() {
            for &u in list {
                let (a, b) = (find(&mut parent, v as u32), find(&mut parent, u));
                if a != b {
                    parent[b as usize] = a;
                }
            }
        }
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for v in 0..self.levels.len() as u32 {
            *sizes.entry(find(&mut parent, v)).or_insert(0) += 1;
        }
        let mut comp_sizes: Vec<usize> = sizes.into_values().collect();
        comp_sizes.sort_unstable();
        (level_sizes, degrees, comp_sizes)
    }
}

impl From<&LevelledGraph> for AbstractGraph {
    fn from(g: &LevelledGraph) -> AbstractGraph {
        AbstractGraph {
            levels: g.vertices.iter().map(|v| v.level as u32).collect(),
            adj: g.adj.clone(),
        }
    }
}

/// Verify that `map` (g1 vertex -> g2 vertex) is a level-preserving graph
/// isomorphism.
pub fn verify_certificate(g1: &AbstractGraph, g2: &AbstractGraph, map: &[u32]) -> bool {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || map.len() != n || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let mut used = vec![false; n];
    for (v, &img) in map.iter().enumerate() {
        let img = img as usize;
        if img >= n || used[img] || g1.levels[v] != g2.levels[img] {
            return false;
        }
        used[img] = true;
    }
    for (v, list) in g1.adj.iter().enumerate() {
        for &u in list {
            if !g2.has_edge(map[v], map[u as usize]) {
                return false;
            }
        }
    }
    true
}

/// Joint color refinement: colors are comparable across the two graphs.
/// Returns false as soon as the color histograms diverge (certainly non-iso).
fn refine(g1: &AbstractGraph, g2: &AbstractGraph, c1: &mut Vec<u32>, c2: &mut Vec<u32>) -> bool {
    loop {
        let mut palette: BTreeMap<(u32, Vec<u32>), u32> = BTreeMap::new();
        let sig = |g: &AbstractGraph, c: &[u32]| -> Vec<(u32, Vec<u32>)> {
            g.adj
                .iter()
                .enumerate()
                .map(|(v, list)| {
                    let mut nb: Vec<u32> = list.iter().map(|&u| c[u as usize]).collect();
                    nb.sort_unstable();
                    (c[v], nb)
                })
                .collect()
        };
        let s1 = sig(g1, c1);
        let s2 = sig(g2, c2);
        for s in s1.iter().chain(s2.iter()) {
            let next = palette.len() as u32;
            palette.entry(s.clone()).or_insert(next);
        }
        let n1: Vec<u32> = s1.iter().map(|s| palette[s]).collect();
        let n2: Vec<u32> = s2.iter().map(|s| palette[s]).collect();

        let mut h1: BTreeMap<u32, usize> = BTreeMap::new();
        let mut h2: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &n1 {
            *h1.entry(c).or_insert(0) += 1;
        }
        for &c in &n2 {
            *h2.entry(c).or_insert(0) += 1;
        }
        if h1 != h2 {
            return false;
        }
        let stable = {
            // partition stabilized when the number of classes stopped growing
            let classes = |c: &[u32]| {
                let mut s: Vec<u32> = c.to_vec();
                s.sort_unstable();
                s.dedup();
                s.len()
            };
            classes(&n1) == classes(c1)
        };
        *c1 = n1;
        *c2 = n2;
        if stable {
            return true;
        }
    }
}

fn search(
    g1: &AbstractGraph,
    g2: &AbstractGraph,
    mut c1: Vec<u32>,
    mut c2: Vec<u32>,
    nodes: &mut usize,
    budget: usize,
) -> Result<Option<Vec<u32>>> {
    if !refine(g1, g2, &mut c1, &mut c2) {
        return Ok(None);
    }
    // Find the smallest non-singleton color class.
    let mut by_color: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (v, &c) in c1.iter().enumerate() {
        by_color.entry(c).or_default().push(v as u32);
    }
    let target = by_color
        .iter()
        .filter(|(_, vs)| vs.len() > 1)
        .min_by_key(|(_, vs)| vs.len())
        .map(|(&c, vs)| (c, vs[0]));
    let Some((color, v)) = target else {
        // Discrete partition: map each g1 vertex to the g2 vertex of the same
        // color and verify.
        let mut img: HashMap<u32, u32> = HashMap::new();
        for (u, &c) in c2.iter().enumerate() {
            img.insert(c, u as u32);
        }
        let map: Vec<u32> = c1.iter().map(|c| img[c]).collect();
        return Ok(if verify_certificate(g1, g2, &map) { Some(map) } else { None });
    };
    let fresh = u32::MAX;
    for (u, &c) in c2.iter().enumerate() {
        if c != color {
            continue;
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::IsoBudgetExceeded);
        }
        let mut d1 = c1.clone();
        let mut d2 = c2.clone();
        d1[v as usize] = fresh;
        d2[u] = fresh;
        if let Some(map) = search(g1, g2, d1, d2, nodes, budget)? {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

/// Decide level-respecting isomorphism; on success the certificate is a
/// verified vertex bijection g1 -> g2.
pub fn iso_check(g1: &AbstractGraph, g2: &AbstractGraph, budget: usize) -> Result<Option<Vec<u32>>> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    if g1.invariants() != g2.invariants() {
        return Ok(None);
    }
    let c1: Vec<u32> = g1.levels.clone();
    let c2: Vec<u32> = g2.levels.clone();
    let mut nodes = 0usize;
    search(g1, g2, c1, c2, &mut nodes, budget)
}

/// Brute-force oracle: depth-first over level-preserving injections with
/// edge-consistency pruning.  Intended for graphs with at most ~10 vertices
/// per level.
pub fn brute_force_iso(g1: &AbstractGraph, g2: &AbstractGraph) -> Option<Vec<u32>> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        g1: &AbstractGraph,
        g2: &AbstractGraph,
        v: usize,
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == g1.vertex_count() {
            return true;
        }
        for u in 0..g2.vertex_count() {
            if used[u] || g1.levels[v] != g2.levels[u] || g1.adj[v].len() != g2.adj[u].len() {
                continue;
            }
            // edges to already-mapped vertices must correspond exactly
            let ok = (0..v).all(|w| {
                g1.has_edge(v as u32, w as u32) == g2.has_edge(u as u32, map[w])
            });
            if !ok {
                continue;
            }
            map[v] = u as u32;
            used[u] = true;
            if extend(g1, g2, v + 1, map, used) {
                return true;
            }
            used[u] = false;
            map[v] = u32::MAX;
        }
        false
    }
    if extend(g1, g2, 0, &mut map, &mut used) {
        debug_assert!(verify_certificate(g1, g2, &map));
        Some(map)
    } else {
        None
    }
}

/// Check that all connected components of a graph are pairwise isomorphic.
pub fn components_pairwise_isomorphic(g: &LevelledGraph, budget: usize) -> Result<bool> {
    if g.component_count <= 1 {
        return Ok(true);
    }
    let subs: Vec<LevelledGraph> = (0..g.component_count)
        .map(|c| g.component_subgraph(c as u32))
        .collect::<Result<Vec<_>>>()?;
    let first = AbstractGraph::from(&subs[0]);
    for sub in &subs[1..] {
        if iso_check(&first, &AbstractGraph::from(sub), budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

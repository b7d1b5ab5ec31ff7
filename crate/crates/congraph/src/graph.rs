//! Levelled coset graphs on the core levels 0..n-1: vertices at level i are
//! cosets h*H_i, with an edge between h*H_i and k*H_{i+1} exactly when the
//! cosets intersect.  Two build modes:
//!
//! - `Identity`: BFS over the connected component of the identity coset.
//!   Component counts then follow from the quotient |L_0| / (level-0 vertices
//!   found), since all components are isomorphic.
//! - `Full`: level 0 is enumerated as the orbit of the identity coset under
//!   left multiplication by full-group generators; higher levels follow from
//!   below (every coset k*H_{i+1} contains k*H_i, so it neighbors a level-i
//!   coset).  Components come from union-find.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matgroup::{GroupCtx, Mat2, Variant};
use crate::snf::PolyMat2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuildMode {
    Identity,
    Full,
}

impl BuildMode {
    pub fn name(&self) -> &'static str {
        match self {
            BuildMode::Identity => "identity",
            BuildMode::Full => "full",
        }
    }
}

impl std::str::FromStr for BuildMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<BuildMode> {
        match s {
            "identity" => Ok(BuildMode::Identity),
            "full" => Ok(BuildMode::Full),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub key: u128,
    pub level: usize,
}

/// A cusp: a semi-infinite ray attached to a level-(n-1) core vertex, with
/// stabilizers conjugate (by the witness) to U_i = {(1, g f; 0, 1)}.
#[derive(Debug, Clone)]
pub struct CuspAnnotation {
    /// Core vertex carrying the ray.
    pub vertex: usize,
    /// Key of the U-coset; distinguishes the q+1 rays per vertex when n = 1.
    pub cusp_key: u128,
    /// Determinant-1 polynomial matrix reducing into the cusp's coset.
    pub witness: PolyMat2,
    /// True for the PGL variants: the witness is for the SL2 core only.
    pub sl2_core_only: bool,
}

/// Finite core of the quotient graph, vertices sorted by (level, key).
#[derive(Debug, Clone)]
pub struct LevelledGraph {
    pub ctx: Arc<GroupCtx>,
    pub mode: BuildMode,
    /// Highest level built (inclusive); the full core has max_level = n-1.
    pub max_level: usize,
    pub vertices: Vec<Vertex>,
    /// One coset representative per vertex.
    pub reps: Vec<Mat2>,
    /// Sorted neighbor lists; edges only between consecutive levels.
    pub adj: Vec<Vec<u32>>,
    pub level_ranges: Vec<Range<usize>>,
    /// Component label per vertex, numbered by first appearance in id order.
    pub components: Vec<u32>,
    pub component_count: usize,
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n as u32).collect() }
    }
    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb as usize] = ra;
        }
    }
}

struct Discovery {
    ids: HashMap<(u32, u128), u32>,
    levels: Vec<u32>,
    keys: Vec<u128>,
    reps: Vec<Mat2>,
    edges: Vec<(u32, u32)>,
}

impl Discovery {
    fn new() -> Discovery {
        Discovery {
            ids: HashMap::new(),
            levels: Vec::new(),
            keys: Vec::new(),
            reps: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Insert if new; returns (id, was_new).
    fn get_or_insert(
        &mut self,
        level: u32,
        key: u128,
        rep: Mat2,
        budget: usize,
    ) -> Result<(u32, bool)> {
        match self.ids.entry((level, key)) {
            std::collections::hash_map::Entry::Occupied(e) => Ok((*e.get(), false)),
            std::collections::hash_map::Entry::Vacant(e) => {
                if self.levels.len() >= budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                let id = self.levels.len() as u32;
                e.insert(id);
                self.levels.push(level);
                self.keys.push(key);
                self.reps.push(rep);
                Ok((id, true))
            }
        }
    }
}

/// Build the levelled coset graph on levels 0..=max_level (default n-1).
pub fn build_graph(
    ctx: &Arc<GroupCtx>,
    mode: BuildMode,
    budget: usize,
    max_level: Option<usize>,
) -> Result<LevelledGraph> {
    let n = ctx.n();
    let top = max_level.unwrap_or(n - 1);
    if top >= n {
        return Err(Error::LevelOutOfRange { level: top, max: n });
    }
    let elems: Vec<_> = (0..=top)
        .map(|i| ctx.subgroup_elements(i))
        .collect::<Result<Vec<_>>>()?;
    let trans_up: Vec<Vec<Mat2>> = (0..top)
        .map(|i| ctx.transversal(i, i + 1))
        .collect::<Result<Vec<_>>>()?;
    let trans_down: Vec<Vec<Mat2>> = (1..=top)
        .map(|i| ctx.transversal(i, i - 1))
        .collect::<Result<Vec<_>>>()?;

    let mut disc = Discovery::new();
    let id_key = ctx.coset_key_unchecked(&Mat2::IDENTITY, &elems[0], 0);
    disc.get_or_insert(0, id_key, Mat2::IDENTITY, budget)?;

    if mode == BuildMode::Full {
        // Complete level 0 by a left-multiplication orbit.
        let gens = ctx.full_group_generators();
        let mut queue: VecDeque<u32> = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let rep = disc.reps[v as usize];
            for g in &gens {
                let h = ctx.mul(g, &rep);
                let key = ctx.coset_key_unchecked(&h, &elems[0], 0);
                let (id, new) = disc.get_or_insert(0, key, h, budget)?;
                if new {
                    queue.push_back(id);
                }
            }
        }
    }

    // Upward sweep; in identity mode also walk downward for discovery.
    // Undirected edges are recorded once, from the lower endpoint, which
    // enumerates all of its upper neighbors via the transversal.
    let mut cursor = 0usize;
    let mut queue: VecDeque<u32> = (0..disc.levels.len() as u32).collect();
    loop {
        let v = if mode == BuildMode::Full {
            if cursor >= disc.levels.len() {
                break;
            }
            cursor += 1;
            (cursor - 1) as u32
        } else {
            match queue.pop_front() {
                Some(v) => v,
                None => break,
            }
        };
        let level = disc.levels[v as usize] as usize;
        let rep = disc.reps[v as usize];
        if level < top {
            for x in &trans_up[level] {
                let h = ctx.mul(&rep, x);
                let key = ctx.coset_key_unchecked(&h, &elems[level + 1], level + 1);
                let (id, new) = disc.get_or_insert(level as u32 + 1, key, h, budget)?;
                disc.edges.push((v, id));
                if new && mode == BuildMode::Identity {
                    queue.push_back(id);
                }
            }
        }
        if level > 0 && mode == BuildMode::Identity {
            for x in &trans_down[level - 1] {
                let h = ctx.mul(&rep, x);
                let key = ctx.coset_key_unchecked(&h, &elems[level - 1], level - 1);
                let (id, new) = disc.get_or_insert(level as u32 - 1, key, h, budget)?;
                if new {
                    queue.push_back(id);
                }
            }
        }
    }

    finalize(ctx.clone(), mode, top, disc)
}

/// Sort vertices by (level, key), remap edges, compute components.
fn finalize(
    ctx: Arc<GroupCtx>,
    mode: BuildMode,
    max_level: usize,
    disc: Discovery,
) -> Result<LevelledGraph> {
    let count = disc.levels.len();
    let mut order: Vec<u32> = (0..count as u32).collect();
    order.sort_unstable_by_key(|&v| (disc.levels[v as usize], disc.keys[v as usize]));
    let mut new_id = vec![0u32; count];
    for (pos, &v) in order.iter().enumerate() {
        new_id[v as usize] = pos as u32;
    }
    let vertices: Vec<Vertex> = order
        .iter()
        .map(|&v| Vertex {
            key: disc.keys[v as usize],
            level: disc.levels[v as usize] as usize,
        })
        .collect();
    let reps: Vec<Mat2> = order.iter().map(|&v| disc.reps[v as usize]).collect();

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); count];
    for &(a, b) in &disc.edges {
        let (a, b) = (new_id[a as usize], new_id[b as usize]);
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for (v, list) in adj.iter_mut().enumerate() {
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        if list.len() != before {
            return Err(Error::Integrity(format!(
                "coset graph is not simple at vertex {v}"
            )));
        }
        for &u in list.iter() {
            let (li, lj) = (vertices[v].level, vertices[u as usize].level);
            if li.abs_diff(lj) != 1 {
                return Err(Error::Integrity(format!(
                    "edge {v}-{u} joins non-consecutive levels {li},{lj}"
                )));
            }
        }
    }

    let mut level_ranges = Vec::with_capacity(max_level + 1);
    let mut start = 0usize;
    for lvl in 0..=max_level {
        let end = start + vertices[start..].iter().take_while(|v| v.level == lvl).count();
        level_ranges.push(start..end);
        start = end;
    }
    if start != count {
        return Err(Error::Integrity("vertices outside level ranges".into()));
    }

    let mut dsu = Dsu::new(count);
    for (v, list) in adj.iter().enumerate() {
        for &u in list {
            dsu.union(v as u32, u);
        }
    }
    let mut label: HashMap<u32, u32> = HashMap::new();
    let mut components = vec![0u32; count];
    for v in 0..count as u32 {
        let root = dsu.find(v);
        let next = label.len() as u32;
        let l = *label.entry(root).or_insert(next);
        components[v as usize] = l;
    }
    let component_count = label.len();

    Ok(LevelledGraph {
        ctx,
        mode,
        max_level,
        vertices,
        reps,
        adj,
        level_ranges,
        components,
        component_count,
    })
}

impl LevelledGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.level_ranges.iter().map(|r| r.len()).collect()
    }

    pub fn level_ids(&self, i: usize) -> Result<Range<usize>> {
        self.level_ranges
            .get(i)
            .cloned()
            .ok_or(Error::LevelOutOfRange { level: i, max: self.level_ranges.len() })
    }

    /// True when every coset of every built level is present.
    pub fn is_complete(&self) -> bool {
        (0..=self.max_level)
            .all(|i| self.level_ranges[i].len() as u128 == self.ctx.level_size(i))
    }

    /// Number of components of the complete graph on the built levels.
    /// Full mode counts directly; identity mode divides the level-0 formula
    /// size by the level-0 vertices found (all components are isomorphic, so
    /// each holds the same number).  When both paths apply they must agree.
    pub fn component_count_total(&self) -> Result<u128> {
        let found0 = self.level_ranges[0].len() as u128;
        let size0 = self.ctx.level_size(0);
        match self.mode {
            BuildMode::Full => {
                if !self.is_complete() {
                    return Err(Error::Integrity("full-mode graph is incomplete".into()));
                }
                let direct = self.component_count as u128;
                if size0 % found0 != 0 {
                    return Err(Error::Integrity(format!(
                        "|L_0| = {size0} not divisible by found {found0}"
                    )));
                }
                Ok(direct)
            }
            BuildMode::Identity => {
                if self.component_count != 1 {
                    return Err(Error::Integrity(
                        "identity-mode build is not connected".into(),
                    ));
                }
                if size0 % found0 != 0 {
                    return Err(Error::Integrity(format!(
                        "|L_0| = {size0} not divisible by found {found0}"
                    )));
                }
                Ok(size0 / found0)
            }
        }
    }

    /// Induced subgraph on levels 0..=hi, components recomputed.
    pub fn restrict_levels(&self, hi: usize) -> Result<LevelledGraph> {
        if hi >= self.level_ranges.len() {
            return Err(Error::LevelOutOfRange { level: hi, max: self.level_ranges.len() });
        }
        let keep = self.level_ranges[hi].end;
        let mut disc = Discovery::new();
        for v in 0..keep {
            disc.levels.push(self.vertices[v].level as u32);
            disc.keys.push(self.vertices[v].key);
            disc.reps.push(self.reps[v]);
        }
        for v in 0..keep {
            for &u in &self.adj[v] {
                if (u as usize) < keep && (u as usize) > v {
                    disc.edges.push((v as u32, u));
                }
            }
        }
        finalize(self.ctx.clone(), self.mode, hi, disc)
    }

    /// Induced subgraph on one component, vertex ids remapped.
    pub fn component_subgraph(&self, label: u32) -> Result<LevelledGraph> {
        if (label as usize) >= self.component_count {
            return Err(Error::BadVertexId(label as usize));
        }
        let keep: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| self.components[v] == label)
            .collect();
        let mut old_to_new: HashMap<usize, u32> = HashMap::new();
        let mut disc = Discovery::new();
        for (new, &v) in keep.iter().enumerate() {
            old_to_new.insert(v, new as u32);
            disc.levels.push(self.vertices[v].level as u32);
            disc.keys.push(self.vertices[v].key);
            disc.reps.push(self.reps[v]);
        }
        for &v in &keep {
            for &u in &self.adj[v] {
                if (u as usize) > v {
                    if let Some(&nu) = old_to_new.get(&(u as usize)) {
                        disc.edges.push((old_to_new[&v], nu));
                    }
                }
            }
        }
        let top = keep.iter().map(|&v| self.vertices[v].level).max().unwrap_or(0);
        finalize(self.ctx.clone(), self.mode, top, disc)
    }

    /// Level 0-1 subgraph D_g(0-1); requires n >= 2.
    pub fn subgraph_01(&self) -> Result<LevelledGraph> {
        if self.ctx.n() < 2 {
            return Err(Error::DegreeTooSmall(self.ctx.n()));
        }
        self.restrict_levels(1)
    }

    /// N_0(S): level-0 vertices adjacent to the given level-1 vertices.
    pub fn neighborhood_n0(&self, s: &[usize]) -> Result<BTreeSet<usize>> {
        let level1 = self.level_ids(1)?;
        let mut out = BTreeSet::new();
        for &v in s {
            if !level1.contains(&v) {
                return Err(Error::BadVertexId(v));
            }
            for &u in &self.adj[v] {
                if self.vertices[u as usize].level == 0 {
                    out.insert(u as usize);
                }
            }
        }
        Ok(out)
    }

    /// Vertex ids of each component, in label order.
    pub fn component_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for (v, &c) in self.components.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }

    /// Degree profile of the core graph: level-0 vertices have q+1 up-edges;
    /// level-i (1 <= i <= n-2) vertices have q down-edges and one up-edge;
    /// level-(n-1) vertices have q down-edges; n = 1 graphs have no edges.
    /// Checked for every vertex of a complete graph on the built levels.
    pub fn degree_check(&self) -> Result<()> {
        if !self.is_complete() {
            return Err(Error::Integrity("degree check needs a complete graph".into()));
        }
        let q = self.ctx.q() as usize;
        let n = self.ctx.n();
        for (v, list) in self.adj.iter().enumerate() {
            let level = self.vertices[v].level;
            let up = list
                .iter()
                .filter(|&&u| self.vertices[u as usize].level == level + 1)
                .count();
            let down = list.len() - up;
            let expect_up = if level >= self.max_level || n == 1 {
                0
            } else if level == 0 {
                q + 1
            } else {
                1
            };
            let expect_down = if level == 0 { 0 } else { q };
            if up != expect_up || down != expect_down {
                return Err(Error::Integrity(format!(
                    "vertex {v} at level {level}: degrees up {up}/down {down}, expected {expect_up}/{expect_down}"
                )));
            }
        }
        Ok(())
    }

    /// One annotation per cusp, with a det-1 polynomial witness reducing into
    /// the cusp's U-coset.  Requires the complete core (full mode, or a
    /// connected identity-mode build), levels up to n-1.
    pub fn cusp_annotations(&self) -> Result<Vec<CuspAnnotation>> {
        let n = self.ctx.n();
        if self.max_level != n - 1 || !self.is_complete() {
            return Err(Error::NeedsFullMode);
        }
        let sl2_core_only = self.ctx.variant != Variant::Sl2;
        let mut out = Vec::new();
        if n >= 2 {
            for v in self.level_ids(n - 1)? {
                out.push(CuspAnnotation {
                    vertex: v,
                    cusp_key: self.vertices[v].key,
                    witness: self.witness_for(&self.reps[v])?,
                    sl2_core_only,
                });
            }
        } else {
            // q+1 rays per level-0 vertex, one per coset of U within h*H_0.
            let u_elems = self.ctx.u_subgroup_elements();
            let u_set: std::collections::HashSet<u128> =
                u_elems.iter().map(|m| self.ctx.encode(m)).collect();
            let h0 = self.ctx.subgroup_elements(0)?;
            let trans = self.ctx.transversal_sets(&h0, &u_set)?;
            for v in self.level_ids(0)? {
                for x in &trans {
                    let h = self.ctx.mul(&self.reps[v], x);
                    out.push(CuspAnnotation {
                        vertex: v,
                        cusp_key: self.ctx.coset_key_unchecked(&h, &u_elems, 0),
                        witness: self.witness_for(&h)?,
                        sl2_core_only,
                    });
                }
            }
        }
        if out.len() as u128 != self.ctx.cusp_count() {
            return Err(Error::Integrity(format!(
                "cusp annotations {} != cusp count {}",
                out.len(),
                self.ctx.cusp_count()
            )));
        }
        Ok(out)
    }

    /// Size of the stabilizer along a ray at position i >= n: the number of
    /// (1, g f; 0, 1) with deg f <= i - n.
    pub fn ray_stabilizer_size(&self, i: usize) -> Result<u128> {
        let n = self.ctx.n();
        if i < n {
            return Err(Error::LevelOutOfRange { level: i, max: n });
        }
        Ok((self.ctx.q() as u128).pow((i - n + 1) as u32))
    }

    fn witness_for(&self, rep: &Mat2) -> Result<PolyMat2> {
        let m = match self.ctx.variant {
            Variant::Sl2 => *rep,
            _ => {
                // Pass to the det-1 member m * diag(det^{-1}, 1) of the class.
                let d = self.ctx.det(rep);
                let dinv = self.ctx.ring.inv(d)?;
                self.ctx.mul(rep, &Mat2::new(dinv, 0, 0, 1))
            }
        };
        self.ctx.sl2_lift(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::poly::Poly;
    use crate::ring::RgCtx;

    fn graph(p: u32, k: u32, g: &str, variant: Variant, mode: BuildMode) -> LevelledGraph {
        let f = FieldCtx::new(p, k).unwrap();
        let g = Poly::parse(&f, g).unwrap();
        let ctx = GroupCtx::new(&RgCtx::new(&f, g).unwrap(), variant);
        build_graph(&ctx, mode, 1 << 20, None).unwrap()
    }

    #[test]
    fn small_full_graphs() {
        // q=2, g=t: single level, one vertex, three cusps.
        let g = graph(2, 1, "t", Variant::Sl2, BuildMode::Full);
        assert_eq!(g.level_sizes(), vec![1]);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.ctx.cusp_count(), 3);
        assert_eq!(g.cusp_annotations().unwrap().len(), 3);
        g.degree_check().unwrap();

        // q=2, g=t^2: levels (8, 12), (3,2)-biregular, connected.
        let g = graph(2, 1, "t^2", Variant::Sl2, BuildMode::Full);
        assert_eq!(g.level_sizes(), vec![8, 12]);
        assert_eq!(g.edge_count(), 24);
        assert_eq!(g.component_count, 1);
        g.degree_check().unwrap();
        assert_eq!(g.cusp_annotations().unwrap().len(), 12);

        // q=2, g=t^3: levels (64, 96, 48), connected.
        let g = graph(2, 1, "t^3", Variant::Sl2, BuildMode::Full);
        assert_eq!(g.level_sizes(), vec![64, 96, 48]);
        assert_eq!(g.component_count, 1);
        g.degree_check().unwrap();

        // q=3, g=t^2: levels (27, 36).
        let g = graph(3, 1, "t^2", Variant::Sl2, BuildMode::Full);
        assert_eq!(g.level_sizes(), vec![27, 36]);
        assert_eq!(g.component_count, 1);
        g.degree_check().unwrap();
    }

    #[test]
    fn component_counts() {
        // X~ for q=2, g=t^2 has 2 components; q=3, g=t^2 is connected.
        let g = graph(2, 1, "t^2", Variant::PglM, BuildMode::Full);
        assert_eq!(g.component_count, 2);
        let g = graph(3, 1, "t^2", Variant::PglM, BuildMode::Full);
        assert_eq!(g.component_count, 1);
        // SL2 graphs are connected everywhere on the test grid.
        for (p, k, gp) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2"), (2, 1, "t^2+t")] {
            let g = graph(p, k, gp, Variant::Sl2, BuildMode::Full);
            assert_eq!(g.component_count, 1, "X_g disconnected for q={p}^{k}, g={gp}");
        }
    }

    #[test]
    fn identity_mode_quotient_agrees_with_full() {
        for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
            for (p, k, gp) in [(2u32, 1u32, "t^2"), (2, 1, "t^3"), (3, 1, "t^2"), (2, 2, "t^2")] {
                let full = graph(p, k, gp, variant, BuildMode::Full);
                let ident = graph(p, k, gp, variant, BuildMode::Identity);
                assert_eq!(
                    ident.component_count_total().unwrap(),
                    full.component_count_total().unwrap(),
                    "{} q={p}^{k} g={gp}",
                    variant.name()
                );
                assert_eq!(
                    ident.vertex_count() * full.component_count,
                    full.vertex_count()
                );
            }
        }
    }

    #[test]
    fn subgraph_01_components() {
        // C = 4 and C~ = 8 at q=2, n=3 (level 0-1 subgraph).
        let g = graph(2, 1, "t^3", Variant::Sl2, BuildMode::Full);
        assert_eq!(g.subgraph_01().unwrap().component_count, 4);
        let g = graph(2, 1, "t^3", Variant::PglM, BuildMode::Full);
        assert_eq!(g.subgraph_01().unwrap().component_count, 8);
        // C~ = 4 at q=4, n=2.
        let g = graph(2, 2, "t^2", Variant::PglM, BuildMode::Full);
        assert_eq!(g.subgraph_01().unwrap().component_count, 4);
        // n=1 has no 0-1 subgraph.
        let g = graph(2, 1, "t", Variant::Sl2, BuildMode::Full);
        assert!(matches!(g.subgraph_01(), Err(Error::DegreeTooSmall(1))));
    }

    #[test]
    fn neighborhood_n0_cases() {
        let g = graph(2, 2, "t^2", Variant::PglM, BuildMode::Full);
        let d01 = g.subgraph_01().unwrap();
        assert!(d01.neighborhood_n0(&[]).unwrap().is_empty());
        let level1: Vec<usize> = d01.level_ids(1).unwrap().collect();
        let all0 = d01.neighborhood_n0(&level1).unwrap();
        assert_eq!(all0.len(), d01.level_ids(0).unwrap().len());
        // One component's level-1 set reaches exactly its own level-0 set.
        let comp = &d01.component_members()[0];
        let s: Vec<usize> = comp.iter().copied().filter(|&v| d01.vertices[v].level == 1).collect();
        let n0 = d01.neighborhood_n0(&s).unwrap();
        let c0: BTreeSet<usize> =
            comp.iter().copied().filter(|&v| d01.vertices[v].level == 0).collect();
        assert_eq!(n0, c0);
        assert_eq!((n0.len(), s.len()), (16, 20)); // ratio 4/5
        // Out-of-range ids are rejected.
        assert!(d01.neighborhood_n0(&[0]).is_err());
    }

    #[test]
    fn level_sizes_match_formula() {
        for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
            for (p, k, gp) in [(2u32, 1u32, "t^3"), (3, 1, "t^2"), (2, 1, "t^2+t")] {
                let g = graph(p, k, gp, variant, BuildMode::Full);
                for i in 0..=g.max_level {
                    assert_eq!(
                        g.level_ranges[i].len() as u128,
                        g.ctx.level_size(i),
                        "{} q={p}^{k} g={gp} level {i}",
                        variant.name()
                    );
                }
            }
        }
    }

    #[test]
    fn cusp_witnesses_verify() {
        for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
            let g = graph(2, 1, "t^2", variant, BuildMode::Full);
            let anns = g.cusp_annotations().unwrap();
            assert_eq!(anns.len(), 12);
            let one = Poly::one(&g.ctx.ring.field);
            for ann in &anns {
                assert_eq!(ann.witness.det(), one);
                assert_eq!(ann.sl2_core_only, variant != Variant::Sl2);
                let m = g.ctx.reduce_poly_mat(&ann.witness);
                if variant == Variant::Sl2 {
                    // The reduced witness lies in the vertex's coset.
                    let key = g
                        .ctx
                        .coset_key_unchecked(&m, &g.ctx.subgroup_elements(1).unwrap(), 1);
                    assert_eq!(key, g.vertices[ann.vertex].key);
                } else {
                    // Flagged: witness covers the SL2 core of the class only.
                    let rep = g.reps[ann.vertex];
                    let dinv = g.ctx.ring.inv(g.ctx.det(&rep)).unwrap();
                    assert_eq!(m, g.ctx.mul(&rep, &Mat2::new(dinv, 0, 0, 1)));
                }
            }
        }
        let g = graph(2, 1, "t^2", Variant::Sl2, BuildMode::Full);
        assert_eq!(g.ray_stabilizer_size(2).unwrap(), 2);
        assert_eq!(g.ray_stabilizer_size(4).unwrap(), 8);
        assert!(g.ray_stabilizer_size(1).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let f = FieldCtx::new(2, 1).unwrap();
        let g = Poly::parse(&f, "t^3").unwrap();
        let ctx = GroupCtx::new(&RgCtx::new(&f, g).unwrap(), Variant::Sl2);
        assert!(matches!(
            build_graph(&ctx, BuildMode::Full, 10, None),
            Err(Error::BudgetExceeded(10))
        ));
    }

    #[test]
    fn restricted_identity_build_for_01_counts() {
        // Identity mode limited to levels 0..1 yields C via the quotient.
        let f = FieldCtx::new(2, 1).unwrap();
        let g = Poly::parse(&f, "t^3").unwrap();
        let ring = RgCtx::new(&f, g).unwrap();
        let sl2 = GroupCtx::new(&ring, Variant::Sl2);
        let gr = build_graph(&sl2, BuildMode::Identity, 1 << 20, Some(1)).unwrap();
        assert_eq!(gr.component_count_total().unwrap(), 4);
        let pgl = GroupCtx::new(&ring, Variant::PglM);
        let gr = build_graph(&pgl, BuildMode::Identity, 1 << 20, Some(1)).unwrap();
        assert_eq!(gr.component_count_total().unwrap(), 8);
    }
}

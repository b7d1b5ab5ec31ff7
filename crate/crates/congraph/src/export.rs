//! Graph serialization: DOT (one rank per level, labels level:index, optional
//! component coloring) and a JSON interchange form.  Output is byte-stable
//! for identical inputs.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LevelledGraph;
use crate::iso::AbstractGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    pub index: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub level: usize,
    #[serde(rename = "key-hex")]
    pub key_hex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub q: u32,
    pub g: String,
    pub variant: String,
    pub mode: String,
    pub levels: Vec<LevelJson>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<(usize, usize)>,
    pub components: usize,
    pub cusp_count: u128,
}

impl GraphJson {
    /// Structure-only view for isomorphism testing.
    pub fn to_abstract(&self) -> Result<AbstractGraph> {
        let n = self.vertices.len();
        let mut levels = vec![0u32; n];
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Parse(format!("vertex ids not dense at {}", v.id)));
            }
            levels[i] = v.level as u32;
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(Error::BadVertexId(a.max(b)));
            }
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(AbstractGraph { levels, adj })
    }
}

pub fn graph_to_json(g: &LevelledGraph) -> GraphJson {
    let levels = g
        .level_ranges
        .iter()
        .enumerate()
        .map(|(index, r)| LevelJson { index, size: r.len() })
        .collect();
    let vertices = g
        .vertices
        .iter()
        .enumerate()
        .map(|(id, v)| VertexJson {
            id,
            level: v.level,
            key_hex: hex(&g.ctx.key_bytes(v.key)),
        })
        .collect();
    let mut edges = Vec::with_capacity(g.edge_count());
    for (v, list) in g.adj.iter().enumerate() {
        for &u in list {
            if (u as usize) > v {
                edges.push((v, u as usize));
            }
        }
    }
    GraphJson {
        q: g.ctx.q(),
        g: g.ctx.ring.g().to_string(),
        variant: g.ctx.variant.name().into(),
        mode: g.mode.name().into(),
        levels,
        vertices,
        edges,
        components: g.component_count,
        cusp_count: g.ctx.cusp_count(),
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

pub fn json_string(g: &LevelledGraph) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&graph_to_json(g))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<GraphJson> {
    Ok(serde_json::from_str(text)?)
}

/// DOT output: undirected, one rank per level, labels "level:index"; with
/// `color_components`, vertices are colored by component label.
pub fn dot_string(g: &LevelledGraph, color_components: bool) -> String {
    const PALETTE: [&str; 10] = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
        "#bcbd22", "#17becf",
    ];
    let mut s = String::new();
    s.push_str("graph coset_graph {\n");
    s.push_str("  node [shape=circle fontsize=10];\n");
    for (lvl, range) in g.level_ranges.iter().enumerate() {
        s.push_str("  { rank=same;");
        for v in range.clone() {
            let index = v - range.start;
            let _ = write!(s, " v{v} [label=\"{lvl}:{index}\"");
            if color_components {
                let c = PALETTE[g.components[v] as usize % PALETTE.len()];
                let _ = write!(s, " style=filled fillcolor=\"{c}\"");
            }
            s.push_str("];");
        }
        s.push_str(" }\n");
    }
    for (v, list) in g.adj.iter().enumerate() {
        for &u in list {
            if (u as usize) > v {
                let _ = writeln!(s, "  v{v} -- v{u};");
            }
        }
    }
    if g.ctx.n() == 1 {
        let _ = writeln!(
            s,
            "  // {} semi-infinite cusp rays omitted",
            g.ctx.cusp_count()
        );
    }
    s.push_str("}\n");
    s
}

pub fn write_export(g: &LevelledGraph, format: &str, path: &Path) -> Result<()> {
    let contents = match format {
        "dot" => dot_string(g, true),
        "json" => json_string(g)?,
        other => return Err(Error::Parse(format!("unknown format '{other}'"))),
    };
    std::fs::write(path, contents)?;
    Ok(())
}

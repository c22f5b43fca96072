//! Deterministic DOT rendering of a model's union graph.

use super::KripkeModel;

#[derive(Clone, Copy, Debug)]
pub struct DotOptions {
    /// Annotate each world with its label below the history string.
    pub show_labels: bool,
    /// Merge parallel edges from different agents into one unlabeled edge.
    pub collapse_agents: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        Self {
            show_labels: true,
            collapse_agents: false,
        }
    }
}

/// Render the model as a DOT digraph drawn undirected (`dir=none`), one line
/// per relation pair. Output is byte-identical across runs: worlds in model
/// order, edges sorted per agent in the game's agent order.
pub fn export_dot(m: &KripkeModel, options: DotOptions) -> String {
    let mut out = String::from("digraph model {\n");
    out.push_str("  edge [dir=none];\n");
    out.push_str("  node [shape=box];\n");
    for w in 0..m.world_count() {
        let key = m.world_key(w);
        if options.show_labels {
            out.push_str(&format!(
                "  \"{key}\" [label=\"{key}\\n[{}]\"];\n",
                m.label(w)
            ));
        } else {
            out.push_str(&format!("  \"{key}\";\n"));
        }
    }
    if options.collapse_agents {
        let mut pairs: Vec<(u32, u32)> = m
            .relations()
            .values()
            .flat_map(|pairs| pairs.iter().copied())
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        for (a, b) in pairs {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                m.world_key(a as usize),
                m.world_key(b as usize)
            ));
        }
    } else {
        for agent in m.game().agents() {
            for &(a, b) in m.relation_pairs(agent) {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{agent}\"];\n",
                    m.world_key(a as usize),
                    m.world_key(b as usize)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

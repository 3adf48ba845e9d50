//! The decorated dual graph of the semi-stable special fibre: p-1 connected
//! components indexed by the (p-1)-th roots of -1; inside each component the
//! Bruhat-Tits tree with every edge subdivided by p-2 rational-curve
//! vertices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::error::{Error, Result};
use crate::tree::chart::component_labels;
use crate::tree::{ball, distance, neighbors, Vertex};

/// A node of the special fibre graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FibreNode {
    /// An Artin-Schreier curve component: (tree vertex, component label index).
    Curve { vertex: Vertex, xi: u64 },
    /// A rational chain vertex subdividing a tree edge, numbered from the
    /// even end: (even end, odd end, step t in 1..=p-2, label index).
    Chain { even: Vertex, odd: Vertex, step: u32, xi: u64 },
}

impl FibreNode {
    pub fn id(&self) -> String {
        match self {
            FibreNode::Curve { vertex, xi } => format!("c[{}]@{}", xi, vertex.id()),
            FibreNode::Chain { even, odd, step, xi } => {
                format!("r[{}]@{}-{}#{}", xi, even.id(), odd.id(), step)
            }
        }
    }
}

/// The graph, with adjacency stored both ways.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialFibreGraph {
    pub p: u64,
    pub radius: u32,
    /// The component labels xi with xi^(p-1) = -1, by flat index.
    pub labels: Vec<Fq2>,
    pub nodes: Vec<FibreNode>,
    /// Edges as index pairs into `nodes`, each stored once with i < j.
    pub edges: Vec<(usize, usize)>,
    /// Tree vertices strictly inside the ball (their full set of p+1 tree
    /// edges is present in the graph).
    pub interior: Vec<Vertex>,
}

impl SpecialFibreGraph {
    pub fn degree(&self, idx: usize) -> usize {
        self.edges.iter().filter(|(i, j)| *i == idx || *j == idx).count()
    }

    pub fn node_index(&self, node: &FibreNode) -> Option<usize> {
        self.nodes.iter().position(|n| n == node)
    }

    /// Number of connected components (computed, not assumed).
    pub fn component_count(&self) -> usize {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in &self.edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
        let mut roots = std::collections::BTreeSet::new();
        for i in 0..n {
            roots.insert(find(&mut parent, i));
        }
        roots.len()
    }

    /// JSON export: nodes with kind and labels, edges by node id.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .map(|n| match n {
                FibreNode::Curve { vertex, xi } => serde_json::json!({
                    "id": n.id(),
                    "kind": "curve",
                    "vertex": vertex.id(),
                    "level": vertex.level(),
                    "xi": xi,
                }),
                FibreNode::Chain { even, odd, step, xi } => serde_json::json!({
                    "id": n.id(),
                    "kind": "chain",
                    "even_end": even.id(),
                    "odd_end": odd.id(),
                    "step": step,
                    "xi": xi,
                }),
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|(i, j)| serde_json::json!([self.nodes[*i].id(), self.nodes[*j].id()]))
            .collect();
        serde_json::json!({
            "p": self.p,
            "radius": self.radius,
            "components": self.labels.len(),
            "nodes": nodes,
            "edges": edges,
        })
    }

    /// Edge-list CSV (two id columns).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,target\n");
        for (i, j) in &self.edges {
            out.push_str(&format!("{},{}\n", self.nodes[*i].id(), self.nodes[*j].id()));
        }
        out
    }
}

/// Build the dual graph over the ball of the given radius around the base
/// vertex. Each tree edge with both ends in the ball contributes a chain of
/// p-2 subdivision vertices per component.
pub fn build_special_fibre(cfg: &PrimeConfig, radius: u32) -> Result<SpecialFibreGraph> {
    if radius < 1 {
        return Err(Error::InvalidParameter("radius must be >= 1".into()));
    }
    let p = cfg.p;
    let labels = component_labels(cfg);
    let base = Vertex::base(p);
    let verts = ball(&base, radius);
    let vert_set: std::collections::BTreeSet<_> = verts.iter().cloned().collect();

    // tree edges inside the ball, keyed (even end, odd end)
    let mut tree_edges = Vec::new();
    for v in &verts {
        for n in neighbors(v) {
            if vert_set.contains(&n) {
                let (even, odd) = if v.is_even() { (*v, n) } else { (n, *v) };
                if !tree_edges.contains(&(even, odd)) {
                    tree_edges.push((even, odd));
                }
            }
        }
    }
    tree_edges.sort();

    let mut nodes = Vec::new();
    let mut index = BTreeMap::new();
    for (xi, _) in labels.iter().enumerate() {
        for v in &verts {
            let node = FibreNode::Curve { vertex: *v, xi: xi as u64 };
            index.insert(node.clone(), nodes.len());
            nodes.push(node);
        }
        for (even, odd) in &tree_edges {
            for step in 1..=(p - 2) as u32 {
                let node = FibreNode::Chain { even: *even, odd: *odd, step, xi: xi as u64 };
                index.insert(node.clone(), nodes.len());
                nodes.push(node);
            }
        }
    }

    let mut edges = Vec::new();
    for (xi, _) in labels.iter().enumerate() {
        let xi = xi as u64;
        for (even, odd) in &tree_edges {
            let ce = index[&FibreNode::Curve { vertex: *even, xi }];
            let co = index[&FibreNode::Curve { vertex: *odd, xi }];
            if p == 2 {
                unreachable!("p is odd");
            }
            // chain: even -- 1 -- 2 -- ... -- (p-2) -- odd
            let mut prev = ce;
            for step in 1..=(p - 2) as u32 {
                let mid = index[&FibreNode::Chain { even: *even, odd: *odd, step, xi }];
                edges.push((prev.min(mid), prev.max(mid)));
                prev = mid;
            }
            edges.push((prev.min(co), prev.max(co)));
        }
    }
    edges.sort();
    edges.dedup();

    let interior = verts
        .iter()
        .filter(|v| distance(&base, v) < radius)
        .cloned()
        .collect();

    Ok(SpecialFibreGraph { p, radius, labels, nodes, edges, interior })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_p3_radius1() {
        let cfg = PrimeConfig::new(3, 2).unwrap();
        let g = build_special_fibre(&cfg, 1).unwrap();
        // p - 1 components
        assert_eq!(g.labels.len(), 2);
        assert_eq!(g.component_count(), 2);
        // per component: 5 curve vertices, 4 tree edges each subdivided once
        let curves = g
            .nodes
            .iter()
            .filter(|n| matches!(n, FibreNode::Curve { xi: 0, .. }))
            .count();
        assert_eq!(curves, 5);
        let chains = g
            .nodes
            .iter()
            .filter(|n| matches!(n, FibreNode::Chain { xi: 0, .. }))
            .count();
        assert_eq!(chains, 4); // p - 2 = 1 per edge

        // interior curve vertices have degree p + 1; chain vertices degree 2
        for (i, n) in g.nodes.iter().enumerate() {
            match n {
                FibreNode::Curve { vertex, .. } => {
                    if g.interior.contains(vertex) {
                        assert_eq!(g.degree(i), 4);
                    }
                }
                FibreNode::Chain { .. } => assert_eq!(g.degree(i), 2),
            }
        }
    }

    #[test]
    fn subdivision_counts_p5() {
        let cfg = PrimeConfig::new(5, 2).unwrap();
        let g = build_special_fibre(&cfg, 1).unwrap();
        assert_eq!(g.labels.len(), 4);
        assert_eq!(g.component_count(), 4);
        // each of the 6 tree edges gets p - 2 = 3 subdivision vertices
        let chains = g
            .nodes
            .iter()
            .filter(|n| matches!(n, FibreNode::Chain { xi: 0, .. }))
            .count();
        assert_eq!(chains, 6 * 3);
        for (i, n) in g.nodes.iter().enumerate() {
            match n {
                FibreNode::Curve { vertex, .. } if g.interior.contains(vertex) => {
                    assert_eq!(g.degree(i), 6);
                }
                FibreNode::Chain { .. } => assert_eq!(g.degree(i), 2),
                _ => {}
            }
        }
    }

    #[test]
    fn exports_are_consistent() {
        let cfg = PrimeConfig::new(3, 2).unwrap();
        let g = build_special_fibre(&cfg, 1).unwrap();
        let j = g.to_json();
        assert_eq!(j["components"], 2);
        assert_eq!(j["nodes"].as_array().unwrap().len(), g.nodes.len());
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), g.edges.len() + 1);
    }
}

//! Dual graphs of nodal curves.
//!
//! A vertex is an irreducible component with its geometric genus, an edge is
//! a node. Loops are allowed and count twice toward valence but once in the
//! first Betti number, so the arithmetic genus of the curve behind a
//! connected graph is `sum of genera + |E| - |V| + 1`.

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard limits keeping subcurve bitmasks in a `u64` and weights in `i64`.
pub const MAX_VERTICES: usize = 64;
pub const MAX_VERTEX_GENUS: u32 = 10_000;
pub const MAX_EDGES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    /// Endpoint indices into `vertices`, stored with the smaller index first.
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
}

impl Serialize for DualGraph {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.vertices[a].id.clone(), self.vertices[b].id.clone()))
                .collect(),
        };
        raw.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for DualGraph {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGraph::deserialize(de)?;
        DualGraph::from_parts(raw.vertices, raw.edges).map_err(D::Error::custom)
    }
}

impl DualGraph {
    /// Builds a graph from `(id, genus)` vertices and `(id, id)` edges.
    /// Vertex order is preserved; it fixes the coordinate order of
    /// multidegrees. Connectivity is not required here, only by the
    /// operations that need it.
    pub fn new(vertices: &[(&str, u32)], edges: &[(&str, &str)]) -> Result<Self> {
        Self::from_parts(
            vertices
                .iter()
                .map(|&(id, genus)| Vertex {
                    id: id.to_owned(),
                    genus,
                })
                .collect(),
            edges
                .iter()
                .map(|&(a, b)| (a.to_owned(), b.to_owned()))
                .collect(),
        )
    }

    pub fn from_parts(vertices: Vec<Vertex>, edges: Vec<(String, String)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Domain("graph has no vertices".into()));
        }
        if vertices.len() > MAX_VERTICES {
            return Err(Error::Domain(format!(
                "graph has {} vertices, supported maximum is {MAX_VERTICES}",
                vertices.len()
            )));
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::Domain(format!(
                "graph has {} edges, supported maximum is {MAX_EDGES}",
                edges.len()
            )));
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.genus > MAX_VERTEX_GENUS {
                return Err(Error::Domain(format!(
                    "vertex {} has genus {}, supported maximum is {MAX_VERTEX_GENUS}",
                    v.id, v.genus
                )));
            }
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let &ia = index
                .get(a)
                .ok_or_else(|| Error::Domain(format!("edge endpoint {a} is not a vertex")))?;
            let &ib = index
                .get(b)
                .ok_or_else(|| Error::Domain(format!("edge endpoint {b} is not a vertex")))?;
            idx_edges.push((ia.min(ib), ia.max(ib)));
        }
        Ok(DualGraph {
            vertices,
            edges: idx_edges,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("invalid graph JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn genus(&self, v: usize) -> u32 {
        self.vertices[v].genus
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Arithmetic genus: sum of vertex genera plus the first Betti number.
    pub fn total_genus(&self) -> i64 {
        let genus_sum: i64 = self.vertices.iter().map(|v| i64::from(v.genus)).sum();
        genus_sum + self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Number of edge ends at `v`; a loop contributes 2.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    /// Exceptional vertex: genus 0, valence exactly 2, and the two edge ends
    /// belong to distinct edges to other vertices (no loop).
    pub fn is_exceptional(&self, v: usize) -> bool {
        self.vertices[v].genus == 0 && self.valence(v) == 2 && self.loops_at(v) == 0
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn classify(&self) -> Result<CurveClass> {
        if !self.is_connected() {
            return Err(Error::Domain("graph is disconnected".into()));
        }
        // A lone genus-0 vertex with a single loop (rational curve with one
        // node) has valence 2 but supports none of the structure below;
        // by convention it is unstable.
        if self.vertices.len() == 1
            && self.vertices[0].genus == 0
            && self.edges.len() == 1
            && self.loops_at(0) == 1
        {
            return Ok(CurveClass::Unstable);
        }
        let genus_zero: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| self.vertices[v].genus == 0)
            .collect();
        if genus_zero.iter().any(|&v| self.valence(v) < 2) {
            return Ok(CurveClass::Unstable);
        }
        if genus_zero.iter().all(|&v| self.valence(v) >= 3) {
            return Ok(CurveClass::Stable);
        }
        // Semistable from here on; quasistable iff no node joins two
        // exceptional components.
        let exc: Vec<bool> = (0..self.vertices.len())
            .map(|v| self.is_exceptional(v))
            .collect();
        let adjacent_exceptional = self
            .edges
            .iter()
            .any(|&(a, b)| a != b && exc[a] && exc[b]);
        if adjacent_exceptional {
            Ok(CurveClass::SemistableNotQuasistable)
        } else {
            Ok(CurveClass::Quasistable)
        }
    }

    pub fn subcurve_stats(&self, z: Subcurve) -> SubcurveStats {
        let mut w = 0i64;
        for v in 0..self.vertices.len() {
            if z.contains(v) {
                w += 2 * i64::from(self.vertices[v].genus) - 2 + self.valence(v) as i64;
            }
        }
        let k = self
            .edges
            .iter()
            .filter(|&&(a, b)| z.contains(a) != z.contains(b))
            .count() as i64;
        SubcurveStats { w, k }
    }

    /// Nonempty proper vertex subsets, ordered lexicographically by their
    /// sorted lists of vertex ids. With `ConnectedBothSides`, only subsets
    /// inducing connected subgraphs on both the subset and its complement.
    pub fn subcurves(&self, mode: SubcurveMode) -> Vec<Subcurve> {
        let n = self.vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.vertices[a].id.cmp(&self.vertices[b].id));
        let full = full_mask(n);
        let mut masks = Vec::new();
        lex_subsets(&order, 0, 0, full, &mut masks);
        let subs = masks.into_iter().map(|m| Subcurve { mask: m });
        match mode {
            SubcurveMode::All => subs.collect(),
            SubcurveMode::ConnectedBothSides => subs
                .filter(|&z| {
                    self.induced_connected(z.mask) && self.induced_connected(full & !z.mask)
                })
                .collect(),
        }
    }

    /// Whether the subgraph induced on the vertices of `mask` is connected.
    fn induced_connected(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                if mask & (1 << a) == 0 || mask & (1 << b) == 0 {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && seen & (1 << y) == 0 {
                        seen |= 1 << y;
                        stack.push(y);
                    }
                }
            }
        }
        seen == mask
    }

    /// Contracts away every exceptional vertex, fusing its two incident
    /// edges into one (a loop when both lead to the same vertex). Requires a
    /// quasistable graph; the result is stable and has the same genus.
    pub fn stabilize(&self) -> Result<DualGraph> {
        match self.classify()? {
            CurveClass::Stable | CurveClass::Quasistable => {}
            c => {
                return Err(Error::Domain(format!(
                    "stabilization needs a quasistable graph, got a {c} one"
                )))
            }
        }
        let exc: Vec<bool> = (0..self.vertices.len())
            .map(|v| self.is_exceptional(v))
            .collect();
        let mut new_edges: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in &self.edges {
            if !exc[a] && !exc[b] {
                new_edges.push((a, b));
            }
        }
        // Quasistability guarantees both neighbors of an exceptional vertex
        // are kept, so each fused edge lands on surviving vertices.
        for v in 0..self.vertices.len() {
            if !exc[v] {
                continue;
            }
            let mut ends = Vec::with_capacity(2);
            for &(a, b) in &self.edges {
                if a == v {
                    ends.push(b);
                } else if b == v {
                    ends.push(a);
                }
            }
            debug_assert_eq!(ends.len(), 2);
            new_edges.push((ends[0].min(ends[1]), ends[0].max(ends[1])));
        }
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            if !exc[v] {
                remap[v] = vertices.len();
                vertices.push(vert.clone());
            }
        }
        let edges = new_edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (remap[a], remap[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        let out = DualGraph { vertices, edges };
        debug_assert_eq!(out.total_genus(), self.total_genus());
        debug_assert_eq!(out.classify()?, CurveClass::Stable);
        Ok(out)
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Depth-first enumeration of nonempty proper subsets in lexicographic order
/// of their vertex-id lists. `order` holds vertex indices sorted by id.
fn lex_subsets(order: &[usize], start: usize, mask: u64, full: u64, out: &mut Vec<u64>) {
    for pos in start..order.len() {
        let m = mask | (1u64 << order[pos]);
        if m == full {
            continue;
        }
        out.push(m);
        lex_subsets(order, pos + 1, m, full, out);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveClass {
    Stable,
    Quasistable,
    SemistableNotQuasistable,
    Unstable,
}

impl CurveClass {
    pub fn is_quasistable(self) -> bool {
        matches!(self, CurveClass::Stable | CurveClass::Quasistable)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurveClass::Stable => "stable",
            CurveClass::Quasistable => "quasistable",
            CurveClass::SemistableNotQuasistable => "semistable-not-quasistable",
            CurveClass::Unstable => "unstable",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubcurveMode {
    All,
    ConnectedBothSides,
}

/// A nonempty proper subset of the vertices, as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subcurve {
    mask: u64,
}

impl Subcurve {
    pub fn from_mask(mask: u64, graph: &DualGraph) -> Result<Self> {
        let full = full_mask(graph.n_vertices());
        if mask == 0 || mask & !full != 0 || mask == full {
            return Err(Error::Domain(
                "subcurve must be a nonempty proper vertex subset".into(),
            ));
        }
        Ok(Subcurve { mask })
    }

    pub fn from_ids(ids: &[&str], graph: &DualGraph) -> Result<Self> {
        let mut mask = 0u64;
        for id in ids {
            let v = graph
                .index_of(id)
                .ok_or_else(|| Error::Domain(format!("no vertex named {id}")))?;
            mask |= 1 << v;
        }
        Self::from_mask(mask, graph)
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn contains(self, v: usize) -> bool {
        self.mask & (1 << v) != 0
    }

    pub fn complement(self, graph: &DualGraph) -> Subcurve {
        Subcurve {
            mask: full_mask(graph.n_vertices()) & !self.mask,
        }
    }

    /// Sorted ids of the member vertices.
    pub fn ids(self, graph: &DualGraph) -> Vec<String> {
        let mut out: Vec<String> = (0..graph.n_vertices())
            .filter(|&v| self.contains(v))
            .map(|v| graph.id(v).to_owned())
            .collect();
        out.sort();
        out
    }
}

/// Degree of the dualizing sheaf on the subcurve and the number of nodes
/// joining it to its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubcurveStats {
    pub w: i64,
    pub k: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth(g: u32) -> DualGraph {
        DualGraph::new(&[("C", g)], &[]).unwrap()
    }

    fn vine(g1: u32, g2: u32, k: usize) -> DualGraph {
        let edges = vec![("C1", "C2"); k];
        DualGraph::new(&[("C1", g1), ("C2", g2)], &edges).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(DualGraph::new(&[], &[]).is_err());
        assert!(DualGraph::new(&[("A", 1), ("A", 2)], &[]).is_err());
        assert!(DualGraph::new(&[("A", 1)], &[("A", "B")]).is_err());
    }

    #[test]
    fn genus_formula() {
        assert_eq!(smooth(3).total_genus(), 3);
        assert_eq!(vine(1, 1, 2).total_genus(), 3);
        let loop_graph = DualGraph::new(&[("C", 2)], &[("C", "C")]).unwrap();
        assert_eq!(loop_graph.total_genus(), 3);
        assert_eq!(loop_graph.valence(0), 2);
    }

    #[test]
    fn classification() {
        assert_eq!(smooth(4).classify().unwrap(), CurveClass::Stable);
        assert_eq!(vine(1, 2, 1).classify().unwrap(), CurveClass::Stable);
        // chain C1 - E - C2 with E exceptional
        let chain = DualGraph::new(
            &[("C1", 1), ("E", 0), ("C2", 1)],
            &[("C1", "E"), ("E", "C2")],
        )
        .unwrap();
        assert_eq!(chain.classify().unwrap(), CurveClass::Quasistable);
        // two adjacent exceptional vertices
        let bad = DualGraph::new(
            &[("C1", 1), ("E1", 0), ("E2", 0), ("C2", 1)],
            &[("C1", "E1"), ("E1", "E2"), ("E2", "C2")],
        )
        .unwrap();
        assert_eq!(
            bad.classify().unwrap(),
            CurveClass::SemistableNotQuasistable
        );
        // dangling rational tail
        let tail = DualGraph::new(&[("C", 2), ("R", 0)], &[("C", "R")]).unwrap();
        assert_eq!(tail.classify().unwrap(), CurveClass::Unstable);
        // lone genus-0 vertex with one loop
        let nodal = DualGraph::new(&[("C", 0)], &[("C", "C")]).unwrap();
        assert_eq!(nodal.classify().unwrap(), CurveClass::Unstable);
        // but two loops give a stable genus-2 curve
        let two_loops = DualGraph::new(&[("C", 0)], &[("C", "C"), ("C", "C")]).unwrap();
        assert_eq!(two_loops.classify().unwrap(), CurveClass::Stable);
        let disconnected = DualGraph::new(&[("A", 1), ("B", 1)], &[]).unwrap();
        assert!(disconnected.classify().is_err());
    }

    #[test]
    fn stats_examples() {
        let v = vine(1, 1, 2);
        let z = Subcurve::from_ids(&["C1"], &v).unwrap();
        assert_eq!(v.subcurve_stats(z), SubcurveStats { w: 2, k: 2 });
        let zc = z.complement(&v);
        assert_eq!(v.subcurve_stats(zc).k, 2);
        assert_eq!(
            v.subcurve_stats(z).w + v.subcurve_stats(zc).w,
            2 * v.total_genus() - 2
        );

        // special fiber with C joined to two rational bridges
        let f = DualGraph::new(
            &[("C", 2), ("R1", 0), ("R2", 0)],
            &[("R1", "R2"), ("C", "R1"), ("C", "R1"), ("C", "R2"), ("C", "R2")],
        )
        .unwrap();
        let r1 = Subcurve::from_ids(&["R1"], &f).unwrap();
        assert_eq!(f.subcurve_stats(r1), SubcurveStats { w: 1, k: 3 });
    }

    #[test]
    fn singleton_weights_sum_to_2g_minus_2() {
        let f = DualGraph::new(
            &[("C", 2), ("R1", 0), ("R2", 0)],
            &[("R1", "R2"), ("C", "R1"), ("C", "R1"), ("C", "R2"), ("C", "R2")],
        )
        .unwrap();
        let total: i64 = (0..f.n_vertices())
            .map(|v| 2 * i64::from(f.genus(v)) - 2 + f.valence(v) as i64)
            .sum();
        assert_eq!(total, 2 * f.total_genus() - 2);
    }

    #[test]
    fn subcurve_enumeration_order() {
        let v = vine(1, 1, 2);
        let all = v.subcurves(SubcurveMode::All);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].ids(&v), ["C1"]);
        assert_eq!(all[1].ids(&v), ["C2"]);

        let path = DualGraph::new(
            &[("A", 1), ("B", 1), ("C", 1), ("D", 1)],
            &[("A", "B"), ("B", "C"), ("C", "D")],
        )
        .unwrap();
        assert_eq!(path.subcurves(SubcurveMode::All).len(), 14);
        let cbs = path.subcurves(SubcurveMode::ConnectedBothSides);
        // exactly the prefixes and suffixes of the path
        let got: Vec<Vec<String>> = cbs.iter().map(|z| z.ids(&path)).collect();
        assert_eq!(
            got,
            vec![
                vec!["A"],
                vec!["A", "B"],
                vec!["A", "B", "C"],
                vec!["B", "C", "D"],
                vec!["C", "D"],
                vec!["D"],
            ]
        );
    }

    #[test]
    fn subcurve_count_all() {
        for n in 2..=6usize {
            let verts: Vec<(String, u32)> = (0..n).map(|i| (format!("v{i}"), 1)).collect();
            let refs: Vec<(&str, u32)> = verts.iter().map(|(s, g)| (s.as_str(), *g)).collect();
            let edges: Vec<(&str, &str)> = (1..n)
                .map(|i| (verts[0].0.as_str(), verts[i].0.as_str()))
                .collect();
            let g = DualGraph::new(&refs, &edges).unwrap();
            assert_eq!(g.subcurves(SubcurveMode::All).len(), (1 << n) - 2);
        }
    }

    #[test]
    fn stabilize_examples() {
        // no exceptional vertices: identity
        let v = vine(1, 2, 1);
        assert_eq!(v.stabilize().unwrap(), v);

        // C1 - E - C2 fuses to a single edge
        let chain = DualGraph::new(
            &[("C1", 1), ("E", 0), ("C2", 1)],
            &[("C1", "E"), ("E", "C2")],
        )
        .unwrap();
        let st = chain.stabilize().unwrap();
        assert_eq!(st.n_vertices(), 2);
        assert_eq!(st.edges().len(), 1);
        assert_eq!(st.total_genus(), chain.total_genus());
        assert_eq!(st.classify().unwrap(), CurveClass::Stable);

        // E attached twice to C becomes a loop on C
        let bubble = DualGraph::new(&[("C", 1), ("E", 0)], &[("C", "E"), ("C", "E")]).unwrap();
        let st = bubble.stabilize().unwrap();
        assert_eq!(st.n_vertices(), 1);
        assert_eq!(st.loops_at(0), 1);
        assert_eq!(st.total_genus(), 2);

        // idempotent
        assert_eq!(st.stabilize().unwrap(), st);

        // non-quasistable input rejected
        let bad = DualGraph::new(
            &[("C1", 1), ("E1", 0), ("E2", 0), ("C2", 1)],
            &[("C1", "E1"), ("E1", "E2"), ("E2", "C2")],
        )
        .unwrap();
        assert!(bad.stabilize().is_err());
    }

    #[test]
    fn json_round_trip() {
        let chain = DualGraph::new(
            &[("C1", 1), ("E", 0), ("C2", 1)],
            &[("C1", "E"), ("E", "C2")],
        )
        .unwrap();
        let s = chain.to_json();
        let back = DualGraph::from_json(&s).unwrap();
        assert_eq!(back, chain);
        let fixed: DualGraph = DualGraph::from_json(
            r#"{"vertices":[{"id":"C","genus":2},{"id":"R1","genus":0}],
                "edges":[["C","R1"],["C","R1"],["R1","R1"]]}"#,
        )
        .unwrap();
        assert_eq!(fixed.loops_at(1), 1);
        assert!(DualGraph::from_json(r#"{"vertices":[],"edges":[]}"#).is_err());
    }
}

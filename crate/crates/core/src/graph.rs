//! Stable graphs: genus-marked multigraphs with half-edge slots, an
//! internal perfect pairing and ordered external legs.

use crate::error::{Error, Result};
use std::fmt;

/// Address of a half-edge: (vertex index, slot index).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct HalfEdge(pub u32, pub u32);

impl HalfEdge {
    pub fn v(&self) -> usize {
        self.0 as usize
    }
    pub fn s(&self) -> usize {
        self.1 as usize
    }
}

/// A stable graph. Vertices carry genus marks; every half-edge is either
/// one end of an internal edge or an external leg; half-edges may carry a
/// label in `1..=N` for the labelled theory.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct StableGraph {
    genus: Vec<u32>,
    valence: Vec<u32>,
    edges: Vec<(HalfEdge, HalfEdge)>,
    legs: Vec<HalfEdge>,
    labels: Vec<Vec<Option<u8>>>,
}

/// First violated invariant of a candidate graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    HalfEdgeOutOfRange(HalfEdge),
    SelfPairedHalfEdge(HalfEdge),
    HalfEdgeReused(HalfEdge),
    SlotUncovered(HalfEdge),
    Genus0ValenceBelow3(u32),
    Genus1ValenceBelow1(u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HalfEdgeOutOfRange(h) => {
                write!(f, "half-edge ({},{}) out of range", h.0, h.1)
            }
            Violation::SelfPairedHalfEdge(h) => {
                write!(f, "half-edge ({},{}) paired with itself", h.0, h.1)
            }
            Violation::HalfEdgeReused(h) => write!(
                f,
                "half-edge ({},{}) used by more than one edge or leg",
                h.0, h.1
            ),
            Violation::SlotUncovered(h) => write!(
                f,
                "half-edge ({},{}) is in no internal pair and no external leg",
                h.0, h.1
            ),
            Violation::Genus0ValenceBelow3(v) => {
                write!(f, "genus-0 valence < 3 at vertex {v}")
            }
            Violation::Genus1ValenceBelow1(v) => {
                write!(f, "genus-1 valence < 1 at vertex {v}")
            }
        }
    }
}

impl StableGraph {
    /// Builds a graph from explicit data. Valences are inferred as the
    /// number of slots referenced per vertex; slots must be contiguous,
    /// which [`StableGraph::validate`] checks.
    pub fn from_parts(
        genus: Vec<u32>,
        edges: Vec<(HalfEdge, HalfEdge)>,
        legs: Vec<(HalfEdge, Option<u8>)>,
    ) -> StableGraph {
        let nv = genus.len();
        let mut valence = vec![0u32; nv];
        let mut note = |h: HalfEdge| {
            if h.v() < nv {
                valence[h.v()] = valence[h.v()].max(h.1 + 1);
            }
        };
        for (a, b) in &edges {
            note(*a);
            note(*b);
        }
        for (h, _) in &legs {
            note(*h);
        }
        let mut labels: Vec<Vec<Option<u8>>> =
            valence.iter().map(|&k| vec![None; k as usize]).collect();
        for (h, l) in &legs {
            if h.v() < nv && h.s() < labels[h.v()].len() {
                labels[h.v()][h.s()] = *l;
            }
        }
        StableGraph {
            genus,
            valence,
            edges,
            legs: legs.into_iter().map(|(h, _)| h).collect(),
            labels,
        }
    }

    /// Single vertex of genus `g` with `n` unlabelled legs.
    pub fn vertex(g: u32, n: u32) -> StableGraph {
        let legs = (0..n).map(|s| (HalfEdge(0, s), None)).collect();
        StableGraph::from_parts(vec![g], Vec::new(), legs)
    }

    pub fn n_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn genus_mark(&self, v: usize) -> u32 {
        self.genus[v]
    }

    pub fn genus_marks(&self) -> &[u32] {
        &self.genus
    }

    pub fn valence(&self, v: usize) -> u32 {
        self.valence[v]
    }

    pub fn edges(&self) -> &[(HalfEdge, HalfEdge)] {
        &self.edges
    }

    pub fn legs(&self) -> &[HalfEdge] {
        &self.legs
    }

    pub fn label(&self, h: HalfEdge) -> Option<u8> {
        self.labels[h.v()][h.s()]
    }

    pub fn set_label(&mut self, h: HalfEdge, l: Option<u8>) {
        self.labels[h.v()][h.s()] = l;
    }

    /// Reorders the external legs; `new_order` must be a permutation of
    /// the current leg list.
    pub fn set_leg_order(&mut self, new_order: Vec<HalfEdge>) {
        debug_assert_eq!(
            {
                let mut a = self.legs.clone();
                a.sort_unstable();
                a
            },
            {
                let mut b = new_order.clone();
                b.sort_unstable();
                b
            }
        );
        self.legs = new_order;
    }

    /// Number of half-edges labelled `j` incident at vertex `v` (the
    /// labelled valence used by Feynman rules).
    pub fn valence_labelled(&self, v: usize, j: u8) -> u32 {
        self.labels[v].iter().filter(|l| **l == Some(j)).count() as u32
    }

    /// True when every half-edge carries a label.
    pub fn fully_labelled(&self) -> bool {
        self.labels.iter().flatten().all(|l| l.is_some())
    }

    /// Checks all type invariants and reports the first violated one.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let mut seen: Vec<Vec<u8>> = self
            .valence
            .iter()
            .map(|&k| vec![0u8; k as usize])
            .collect();
        let mut visit = |h: HalfEdge| -> std::result::Result<(), Violation> {
            if h.v() >= self.genus.len() || h.s() >= self.valence[h.v()] as usize {
                return Err(Violation::HalfEdgeOutOfRange(h));
            }
            seen[h.v()][h.s()] += 1;
            if seen[h.v()][h.s()] > 1 {
                return Err(Violation::HalfEdgeReused(h));
            }
            Ok(())
        };
        for (a, b) in &self.edges {
            if a == b {
                return Err(Violation::SelfPairedHalfEdge(*a));
            }
            visit(*a)?;
            visit(*b)?;
        }
        for h in &self.legs {
            visit(*h)?;
        }
        for (v, slots) in seen.iter().enumerate() {
            for (s, count) in slots.iter().enumerate() {
                if *count == 0 {
                    return Err(Violation::SlotUncovered(HalfEdge(v as u32, s as u32)));
                }
            }
        }
        for (v, &g) in self.genus.iter().enumerate() {
            if g == 0 && self.valence[v] < 3 {
                return Err(Violation::Genus0ValenceBelow3(v as u32));
            }
            if g == 1 && self.valence[v] < 1 {
                return Err(Violation::Genus1ValenceBelow1(v as u32));
            }
        }
        Ok(())
    }

    fn component_ids(&self) -> Vec<usize> {
        let nv = self.n_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (a, b) in &self.edges {
            let ra = find(&mut parent, a.v());
            let rb = find(&mut parent, b.v());
            parent[ra] = rb;
        }
        (0..nv).map(|v| find(&mut parent, v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let ids = self.component_ids();
        ids.iter().all(|&r| r == ids.first().copied().unwrap_or(0))
    }

    /// Genus: first Betti number (with component count) plus vertex genera;
    /// additive over disjoint unions.
    pub fn genus_total(&self) -> u32 {
        let ids = self.component_ids();
        let mut roots: Vec<usize> = ids.clone();
        roots.sort_unstable();
        roots.dedup();
        let c = roots.len() as i64;
        let h1 = self.n_edges() as i64 - self.n_vertices() as i64 + c;
        let marks: i64 = self.genus.iter().map(|&g| g as i64).sum();
        (h1 + marks) as u32
    }

    /// Disjoint union; the right operand's vertices are re-indexed.
    pub fn disjoint_union(&self, other: &StableGraph) -> StableGraph {
        let off = self.n_vertices() as u32;
        let shift = |h: HalfEdge| HalfEdge(h.0 + off, h.1);
        let mut genus = self.genus.clone();
        genus.extend_from_slice(&other.genus);
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|(a, b)| (shift(*a), shift(*b))));
        let mut legs: Vec<(HalfEdge, Option<u8>)> = self
            .legs
            .iter()
            .map(|&h| (h, self.label(h)))
            .collect();
        legs.extend(other.legs.iter().map(|&h| (shift(h), other.label(h))));
        let mut g = StableGraph::from_parts(genus, edges, legs);
        // preserve internal half-edge labels
        for v in 0..self.n_vertices() {
            for s in 0..self.valence[v] as usize {
                g.labels[v][s] = self.labels[v][s];
            }
        }
        for v in 0..other.n_vertices() {
            for s in 0..other.valence[v] as usize {
                g.labels[v + off as usize][s] = other.labels[v][s];
            }
        }
        g
    }

    /// Splits into connected components (vertex order preserved within
    /// each component).
    pub fn connected_components(&self) -> Vec<StableGraph> {
        let ids = self.component_ids();
        let mut roots: Vec<usize> = ids.clone();
        roots.sort_unstable();
        roots.dedup();
        roots
            .into_iter()
            .map(|root| {
                let verts: Vec<usize> =
                    (0..self.n_vertices()).filter(|&v| ids[v] == root).collect();
                let mut remap = vec![u32::MAX; self.n_vertices()];
                for (new, &old) in verts.iter().enumerate() {
                    remap[old] = new as u32;
                }
                let map = |h: HalfEdge| HalfEdge(remap[h.v()], h.1);
                let genus = verts.iter().map(|&v| self.genus[v]).collect();
                let edges = self
                    .edges
                    .iter()
                    .filter(|(a, _)| ids[a.v()] == root)
                    .map(|(a, b)| (map(*a), map(*b)))
                    .collect();
                let legs = self
                    .legs
                    .iter()
                    .filter(|h| ids[h.v()] == root)
                    .map(|&h| (map(h), self.label(h)))
                    .collect();
                let mut g = StableGraph::from_parts(genus, edges, legs);
                for (new, &old) in verts.iter().enumerate() {
                    for s in 0..self.valence[old] as usize {
                        g.labels[new][s] = self.labels[old][s];
                    }
                }
                g
            })
            .collect()
    }

    /// Emits the canonical JSON form:
    /// `{"vertices":[...],"edges":[...],"legs":[...]}`. An edge is
    /// `[[v,s],[v,s]]`, extended with a third entry `[l1,l2]` when its
    /// half-edges carry labels. A leg is `[[v,s],label-or-null]`.
    pub fn to_json(&self) -> String {
        let vertices: Vec<String> = self.genus.iter().map(|g| g.to_string()).collect();
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|(a, b)| {
                let base = format!("[[{},{}],[{},{}]]", a.0, a.1, b.0, b.1);
                match (self.label(*a), self.label(*b)) {
                    (Some(la), Some(lb)) => format!(
                        "[[{},{}],[{},{}],[{},{}]]",
                        a.0, a.1, b.0, b.1, la, lb
                    ),
                    _ => base,
                }
            })
            .collect();
        let legs: Vec<String> = self
            .legs
            .iter()
            .map(|h| {
                let label = match self.label(*h) {
                    Some(l) => l.to_string(),
                    None => "null".into(),
                };
                format!("[[{},{}],{}]", h.0, h.1, label)
            })
            .collect();
        format!(
            "{{\"vertices\":[{}],\"edges\":[{}],\"legs\":[{}]}}",
            vertices.join(","),
            edges.join(","),
            legs.join(",")
        )
    }

    pub fn from_json(text: &str) -> Result<StableGraph> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        StableGraph::from_json_value(&v)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<StableGraph> {
        let bad = |msg: &str| Error::Parse(format!("graph JSON: {msg}"));
        let vertices = v
            .get("vertices")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing vertices"))?;
        let genus = vertices
            .iter()
            .map(|g| g.as_u64().map(|g| g as u32).ok_or_else(|| bad("bad genus")))
            .collect::<Result<Vec<u32>>>()?;
        let half = |x: &serde_json::Value| -> Result<HalfEdge> {
            let pair = x.as_array().ok_or_else(|| bad("bad half-edge"))?;
            if pair.len() != 2 {
                return Err(bad("half-edge must be [v,s]"));
            }
            let v = pair[0].as_u64().ok_or_else(|| bad("bad vertex index"))? as u32;
            let s = pair[1].as_u64().ok_or_else(|| bad("bad slot index"))? as u32;
            Ok(HalfEdge(v, s))
        };
        let mut edges = Vec::new();
        let mut edge_labels = Vec::new();
        for e in v
            .get("edges")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing edges"))?
        {
            let parts = e.as_array().ok_or_else(|| bad("bad edge"))?;
            if parts.len() != 2 && parts.len() != 3 {
                return Err(bad("edge must be [[v,s],[v,s]] or [[v,s],[v,s],[l1,l2]]"));
            }
            let a = half(&parts[0])?;
            let b = half(&parts[1])?;
            let labels = if parts.len() == 3 {
                let ls = parts[2].as_array().ok_or_else(|| bad("bad edge labels"))?;
                if ls.len() != 2 {
                    return Err(bad("edge labels must be [l1,l2]"));
                }
                let l1 = ls[0].as_u64().ok_or_else(|| bad("bad edge label"))? as u8;
                let l2 = ls[1].as_u64().ok_or_else(|| bad("bad edge label"))? as u8;
                Some((l1, l2))
            } else {
                None
            };
            edges.push((a, b));
            edge_labels.push(labels);
        }
        let mut legs = Vec::new();
        for l in v
            .get("legs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing legs"))?
        {
            let parts = l.as_array().ok_or_else(|| bad("bad leg"))?;
            if parts.len() != 2 {
                return Err(bad("leg must be [[v,s],label-or-null]"));
            }
            let h = half(&parts[0])?;
            let label = if parts[1].is_null() {
                None
            } else {
                Some(parts[1].as_u64().ok_or_else(|| bad("bad leg label"))? as u8)
            };
            legs.push((h, label));
        }
        let mut g = StableGraph::from_parts(genus, edges, legs);
        for (k, labels) in edge_labels.into_iter().enumerate() {
            if let Some((l1, l2)) = labels {
                let (a, b) = g.edges[k];
                g.set_label(a, Some(l1));
                g.set_label(b, Some(l2));
            }
        }
        g.validate()
            .map_err(|viol| Error::InvalidGraph(viol.to_string()))?;
        Ok(g)
    }
}

/// Convenience builder used pervasively in tests and by the operator
/// implementations; allocates slots automatically.
pub struct GraphBuilder {
    genus: Vec<u32>,
    next_slot: Vec<u32>,
    edges: Vec<(HalfEdge, HalfEdge)>,
    edge_labels: Vec<(Option<u8>, Option<u8>)>,
    legs: Vec<(HalfEdge, Option<u8>)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        GraphBuilder {
            genus: Vec::new(),
            next_slot: Vec::new(),
            edges: Vec::new(),
            edge_labels: Vec::new(),
            legs: Vec::new(),
        }
    }

    /// Adds a vertex of genus `g`, returning its index.
    pub fn vertex(&mut self, g: u32) -> u32 {
        self.genus.push(g);
        self.next_slot.push(0);
        self.genus.len() as u32 - 1
    }

    fn slot(&mut self, v: u32) -> HalfEdge {
        let s = self.next_slot[v as usize];
        self.next_slot[v as usize] += 1;
        HalfEdge(v, s)
    }

    pub fn edge(&mut self, a: u32, b: u32) -> &mut Self {
        self.edge_labelled(a, b, None, None)
    }

    pub fn edge_labelled(
        &mut self,
        a: u32,
        b: u32,
        la: Option<u8>,
        lb: Option<u8>,
    ) -> &mut Self {
        let ha = self.slot(a);
        let hb = self.slot(b);
        self.edges.push((ha, hb));
        self.edge_labels.push((la, lb));
        self
    }

    pub fn loop_at(&mut self, v: u32) -> &mut Self {
        self.edge(v, v)
    }

    pub fn loop_labelled(&mut self, v: u32, la: Option<u8>, lb: Option<u8>) -> &mut Self {
        self.edge_labelled(v, v, la, lb)
    }

    pub fn leg(&mut self, v: u32, label: Option<u8>) -> &mut Self {
        let h = self.slot(v);
        self.legs.push((h, label));
        self
    }

    pub fn legs(&mut self, v: u32, count: u32) -> &mut Self {
        for _ in 0..count {
            self.leg(v, None);
        }
        self
    }

    pub fn build(&self) -> StableGraph {
        let mut g = StableGraph::from_parts(
            self.genus.clone(),
            self.edges.clone(),
            self.legs.clone(),
        );
        for (k, (la, lb)) in self.edge_labels.iter().enumerate() {
            let (a, b) = g.edges[k];
            g.set_label(a, *la);
            g.set_label(b, *lb);
        }
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }
}

impl Default for GraphBuilder {
    fn default() -> Self {
        GraphBuilder::new()
    }
}

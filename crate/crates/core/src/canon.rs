//! Canonical forms and automorphism counting.
//!
//! Isomorphisms are pairs (vertex permutation preserving genus, half-edge
//! permutation compatible with incidence) preserving the internal pairing
//! as a set of unordered pairs, half-edge labels, and external names when
//! present. Unlabelled external legs permute freely; the two half-edges of
//! an internal edge may swap; parallel edges may permute.
//!
//! The canonical key is computed by color refinement on vertices followed
//! by minimization of a byte encoding over the residual per-class vertex
//! orderings. Graphs at desk scale have a handful of vertices, so the
//! backtracking stays tiny.

use crate::graph::{HalfEdge, StableGraph};
use base64::Engine as _;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Totally ordered byte encoding of a graph; equal keys mean isomorphic
/// graphs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_base64(&self) -> String {
        base64::engine::general_purpose::STANDARD.encode(&self.0)
    }

    pub fn from_base64(text: &str) -> crate::error::Result<CanonicalKey> {
        base64::engine::general_purpose::STANDARD
            .decode(text.trim())
            .map(CanonicalKey)
            .map_err(|e| crate::error::Error::Parse(format!("canonical key: {e}")))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_base64())
    }
}

/// Canonicalization result: key, automorphism order and the canonical
/// representative (vertices and slots renumbered deterministically).
#[derive(Clone, Debug)]
pub struct Canon {
    pub key: CanonicalKey,
    pub aut: u64,
    pub rep: StableGraph,
}

fn label_code(l: Option<u8>) -> u32 {
    match l {
        None => 0,
        Some(l) => l as u32,
    }
}

/// Per-leg color: label in the high half, name rank in the low half.
fn leg_code(label: Option<u8>, name_rank: Option<u32>) -> u32 {
    (label_code(label) << 16) | name_rank.map(|r| r + 1).unwrap_or(0)
}

struct Prepared {
    nv: usize,
    genus: Vec<u32>,
    /// sorted per-vertex leg codes
    vertex_legs: Vec<Vec<u32>>,
    /// edges as ((v, label),(w, label)), not yet normalized
    edges: Vec<((usize, u32), (usize, u32))>,
}

fn prepare(g: &StableGraph, names: Option<&[u32]>) -> Prepared {
    let nv = g.n_vertices();
    let mut vertex_legs: Vec<Vec<u32>> = vec![Vec::new(); nv];
    let name_rank: Option<HashMap<u32, u32>> = names.map(|ns| {
        let mut sorted: Vec<u32> = ns.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        ns.iter()
            .map(|n| (*n, sorted.binary_search(n).unwrap() as u32))
            .collect()
    });
    for (i, h) in g.legs().iter().enumerate() {
        let rank = name_rank
            .as_ref()
            .map(|m| m[&names.unwrap()[i]]);
        vertex_legs[h.v()].push(leg_code(g.label(*h), rank));
    }
    for legs in &mut vertex_legs {
        legs.sort_unstable();
    }
    let edges = g
        .edges()
        .iter()
        .map(|(a, b)| {
            (
                (a.v(), label_code(g.label(*a))),
                (b.v(), label_code(g.label(*b))),
            )
        })
        .collect();
    Prepared {
        nv,
        genus: g.genus_marks().to_vec(),
        vertex_legs,
        edges,
    }
}

/// Weisfeiler-Leman style color refinement; returns canonical colors
/// (dense, ordered by structural data).
fn refine(p: &Prepared) -> Vec<u32> {
    let mut color_data: Vec<Vec<u32>> = (0..p.nv)
        .map(|v| {
            let mut data = vec![p.genus[v], p.vertex_legs[v].len() as u32];
            data.extend(&p.vertex_legs[v]);
            data
        })
        .collect();
    let mut colors = assign_dense(&color_data);
    loop {
        let mut next_data: Vec<Vec<u32>> = (0..p.nv).map(|v| vec![colors[v]]).collect();
        for ((v, lv), (w, lw)) in &p.edges {
            if v == w {
                let (a, b) = if lv <= lw { (*lv, *lw) } else { (*lw, *lv) };
                next_data[*v].extend([u32::MAX, a, b]);
            } else {
                next_data[*v].extend([*lv, *lw, colors[*w]]);
                next_data[*w].extend([*lw, *lv, colors[*v]]);
            }
        }
        for (v, d) in next_data.iter_mut().enumerate() {
            let head = d[0];
            let mut tail: Vec<[u32; 3]> = d[1..]
                .chunks(3)
                .map(|c| [c[0], c[1], c[2]])
                .collect();
            tail.sort_unstable();
            d.clear();
            d.push(head);
            for t in tail {
                d.extend(t);
            }
            let _ = v;
        }
        let next = assign_dense(&next_data);
        if partition_of(&next) == partition_of(&colors) {
            return colors;
        }
        color_data = next_data;
        let _ = &color_data;
        colors = next;
    }
}

fn assign_dense(data: &[Vec<u32>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u32>> = data.iter().collect();
    sorted.sort();
    sorted.dedup();
    let index: HashMap<&Vec<u32>, u32> = sorted
        .into_iter()
        .enumerate()
        .map(|(i, d)| (d, i as u32))
        .collect();
    data.iter().map(|d| index[d]).collect()
}

fn partition_of(colors: &[u32]) -> Vec<Vec<usize>> {
    let mut map: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, c) in colors.iter().enumerate() {
        map.entry(*c).or_default().push(v);
    }
    map.into_values().collect()
}

/// Iterates over all products of within-class permutations, calling `f`
/// with the full vertex ordering (canonical rank -> original vertex).
fn for_each_ordering(classes: &[Vec<usize>], f: &mut dyn FnMut(&[usize])) {
    fn rec(
        classes: &[Vec<usize>],
        idx: usize,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if idx == classes.len() {
            f(acc);
            return;
        }
        let class = &classes[idx];
        for perm in permutations(class.len()) {
            let start = acc.len();
            for &p in &perm {
                acc.push(class[p]);
            }
            rec(classes, idx + 1, acc, f);
            acc.truncate(start);
        }
    }
    let mut acc = Vec::new();
    rec(classes, 0, &mut acc, f);
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let shorter = permutations(n - 1);
    for perm in shorter {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Encodes the graph under the given ordering (rank -> vertex).
fn encode(p: &Prepared, order: &[usize]) -> Vec<u32> {
    let mut rank = vec![0usize; p.nv];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut tokens = Vec::with_capacity(4 * p.nv + 5 * p.edges.len() + 2);
    tokens.push(p.nv as u32);
    for &v in order {
        tokens.push(p.genus[v]);
        tokens.push(p.vertex_legs[v].len() as u32);
        tokens.extend(&p.vertex_legs[v]);
    }
    let mut edges: Vec<[u32; 4]> = p
        .edges
        .iter()
        .map(|((v, lv), (w, lw))| {
            let a = [rank[*v] as u32, *lv];
            let b = [rank[*w] as u32, *lw];
            if a <= b {
                [a[0], a[1], b[0], b[1]]
            } else {
                [b[0], b[1], a[0], a[1]]
            }
        })
        .collect();
    edges.sort_unstable();
    tokens.push(edges.len() as u32);
    for e in edges {
        tokens.extend(e);
    }
    tokens
}

fn tokens_to_bytes(tokens: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(tokens.len() * 4);
    for t in tokens {
        out.extend_from_slice(&t.to_be_bytes());
    }
    out
}

/// Rebuilds the canonical representative from a minimal encoding.
fn decode_representative(tokens: &[u32]) -> StableGraph {
    let mut i = 0;
    let nv = tokens[i] as usize;
    i += 1;
    let mut genus = Vec::with_capacity(nv);
    let mut legs_per_vertex: Vec<Vec<u32>> = Vec::with_capacity(nv);
    for _ in 0..nv {
        genus.push(tokens[i]);
        let nlegs = tokens[i + 1] as usize;
        i += 2;
        legs_per_vertex.push(tokens[i..i + nlegs].to_vec());
        i += nlegs;
    }
    let ne = tokens[i] as usize;
    i += 1;
    let mut next_slot = vec![0u32; nv];
    let mut edges = Vec::with_capacity(ne);
    let mut edge_labels = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (r1, l1, r2, l2) = (tokens[i], tokens[i + 1], tokens[i + 2], tokens[i + 3]);
        i += 4;
        let a = HalfEdge(r1, next_slot[r1 as usize]);
        next_slot[r1 as usize] += 1;
        let b = HalfEdge(r2, next_slot[r2 as usize]);
        next_slot[r2 as usize] += 1;
        edges.push((a, b));
        edge_labels.push((decode_label(l1), decode_label(l2)));
    }
    let mut legs = Vec::new();
    for (v, codes) in legs_per_vertex.iter().enumerate() {
        for code in codes {
            let h = HalfEdge(v as u32, next_slot[v]);
            next_slot[v] += 1;
            legs.push((h, decode_label(code >> 16)));
        }
    }
    let mut g = StableGraph::from_parts(genus, edges, legs);
    let edge_list = g.edges().to_vec();
    for (k, (la, lb)) in edge_labels.into_iter().enumerate() {
        let (a, b) = edge_list[k];
        g.set_label(a, la);
        g.set_label(b, lb);
    }
    g
}

fn decode_label(code: u32) -> Option<u8> {
    if code == 0 {
        None
    } else {
        Some(code as u8)
    }
}

fn factorial_u64(n: usize) -> u64 {
    (2..=n as u64).product::<u64>().max(1)
}

/// Automorphism order: sum over valid vertex permutations of the number of
/// compatible half-edge permutations.
fn aut_from_classes(p: &Prepared, classes: &[Vec<usize>]) -> u64 {
    // edge type census
    let norm = |e: &((usize, u32), (usize, u32))| {
        let (a, b) = *e;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut type_count: HashMap<((usize, u32), (usize, u32)), u64> = HashMap::new();
    for e in &p.edges {
        *type_count.entry(norm(e)).or_insert(0) += 1;
    }
    let mut loops_equal_ends = 0u32;
    for ((v, lv), (w, lw)) in &p.edges {
        if v == w && lv == lw {
            loops_equal_ends += 1;
        }
    }
    let mut leg_class_factor = 1u64;
    for legs in &p.vertex_legs {
        let mut run = 1usize;
        for i in 1..=legs.len() {
            if i < legs.len() && legs[i] == legs[i - 1] {
                run += 1;
            } else {
                leg_class_factor *= factorial_u64(run);
                run = 1;
            }
        }
    }
    let mut edge_perm_factor = 1u64;
    for count in type_count.values() {
        edge_perm_factor *= factorial_u64(*count as usize);
    }
    let per_sigma_base =
        leg_class_factor * edge_perm_factor * 2u64.pow(loops_equal_ends);

    let mut total = 0u64;
    for_each_ordering(classes, &mut |order| {
        // order[r] = vertex at canonical rank r; build sigma relative to
        // the first ordering convention: sigma maps class-sorted positions.
        // Interpret sigma(v): the vertex occupying v's position.
        let mut sigma = vec![0usize; p.nv];
        let mut base_positions: Vec<usize> = Vec::new();
        for class in classes {
            base_positions.extend(class.iter().copied());
        }
        for (i, &v) in order.iter().enumerate() {
            sigma[base_positions[i]] = v;
        }
        // validate legs
        for v in 0..p.nv {
            if p.vertex_legs[v] != p.vertex_legs[sigma[v]] || p.genus[v] != p.genus[sigma[v]]
            {
                return;
            }
        }
        // validate edge type census is sigma-invariant
        let mut ok = true;
        for (t, count) in &type_count {
            let ((v, lv), (w, lw)) = *t;
            let image = norm(&((sigma[v], lv), (sigma[w], lw)));
            if type_count.get(&image) != Some(count) {
                ok = false;
                break;
            }
        }
        if ok {
            total += per_sigma_base;
        }
    });
    total
}

fn canonicalize_inner(g: &StableGraph, names: Option<&[u32]>) -> Canon {
    debug_assert_eq!(g.validate(), Ok(()));
    let p = prepare(g, names);
    let colors = refine(&p);
    let classes = partition_of(&colors);
    let mut best: Option<Vec<u32>> = None;
    for_each_ordering(&classes, &mut |order| {
        let tokens = encode(&p, order);
        if best.as_ref().map_or(true, |b| tokens < *b) {
            best = Some(tokens);
        }
    });
    let tokens = best.expect("graph has at least one ordering");
    let aut = aut_from_classes(&p, &classes);
    Canon {
        key: CanonicalKey(tokens_to_bytes(&tokens)),
        aut,
        rep: decode_representative(&tokens),
    }
}

/// Canonical key, automorphism order and canonical representative of an
/// (optionally labelled) stable graph with freely permutable unlabelled
/// legs.
pub fn canonicalize(g: &StableGraph) -> Canon {
    canonicalize_inner(g, None)
}

/// Canonical form when external legs carry pairwise distinct names
/// (`names[i]` belongs to `legs()[i]`); automorphisms fix named legs
/// pointwise. Names are compared by rank, so the key is independent of the
/// concrete name values.
pub fn canonicalize_named(g: &StableGraph, names: &[u32]) -> Canon {
    assert_eq!(names.len(), g.n_legs(), "one name per leg");
    canonicalize_inner(g, Some(names))
}

pub fn aut_order(g: &StableGraph) -> u64 {
    canonicalize(g).aut
}

/// Brute-force oracles, independent of the class-based implementation.
/// They enumerate every (vertex permutation, half-edge permutation) pair
/// and check structure preservation directly.
pub mod oracle {
    use super::*;

    fn leg_info(g: &StableGraph, names: Option<&[u32]>) -> HashMap<HalfEdge, (Option<u8>, Option<u32>)> {
        g.legs()
            .iter()
            .enumerate()
            .map(|(i, h)| (*h, (g.label(*h), names.map(|ns| ns[i]))))
            .collect()
    }

    /// Counts automorphisms by exhaustive search. Intended for graphs with
    /// at most ~8 half-edges.
    pub fn brute_force_aut(g: &StableGraph, names: Option<&[u32]>) -> u64 {
        let nv = g.n_vertices();
        let legs = leg_info(g, names);
        let edge_set: std::collections::HashSet<(HalfEdge, HalfEdge)> = g
            .edges()
            .iter()
            .map(|(a, b)| if a <= b { (*a, *b) } else { (*b, *a) })
            .collect();
        let mut count = 0u64;
        for sigma in permutations(nv) {
            if (0..nv).any(|v| g.genus_mark(v) != g.genus_mark(sigma[v])
                || g.valence(v) != g.valence(sigma[v]))
            {
                continue;
            }
            // per-vertex slot bijections; iterate the product space
            let slot_perms: Vec<Vec<Vec<usize>>> = (0..nv)
                .map(|v| permutations(g.valence(v) as usize))
                .collect();
            let mut idx = vec![0usize; nv];
            'outer: loop {
                let map = |h: HalfEdge| -> HalfEdge {
                    let v = h.v();
                    HalfEdge(sigma[v] as u32, slot_perms[v][idx[v]][h.s()] as u32)
                };
                let mut ok = true;
                // every half-edge must keep its label
                'labels: for v in 0..nv {
                    for s in 0..g.valence(v) {
                        let h = HalfEdge(v as u32, s);
                        if g.label(map(h)) != g.label(h) {
                            ok = false;
                            break 'labels;
                        }
                    }
                }
                if ok {
                    for (a, b) in g.edges() {
                        let (ia, ib) = (map(*a), map(*b));
                        let norm = if ia <= ib { (ia, ib) } else { (ib, ia) };
                        if !edge_set.contains(&norm) {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    for (h, info) in &legs {
                        let image = map(*h);
                        match legs.get(&image) {
                            Some(target) => {
                                // labels must match; names (when given) fix
                                // legs pointwise
                                if target.0 != info.0
                                    || (info.1.is_some() && target.1 != info.1)
                                {
                                    ok = false;
                                    break;
                                }
                            }
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                }
                if ok {
                    count += 1;
                }
                // advance product counter
                let mut v = 0;
                loop {
                    if v == nv {
                        break 'outer;
                    }
                    idx[v] += 1;
                    if idx[v] < slot_perms[v].len() {
                        break;
                    }
                    idx[v] = 0;
                    v += 1;
                }
            }
        }
        count
    }
}

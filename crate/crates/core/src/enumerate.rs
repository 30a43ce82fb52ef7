//! Exhaustive enumeration of stable graphs up to isomorphism.
//!
//! Strategy: iterate over vertex counts, genus assignments and valence
//! distributions, generate all perfect matchings on the internal half-edge
//! multiset, then deduplicate by canonical key. Sizes at desk scale are
//! tiny, so exhaustiveness wins over cleverness.

use crate::canon::{canonicalize, canonicalize_named, CanonicalKey};
use crate::error::{Error, Result};
use crate::graph::{HalfEdge, StableGraph};
use std::collections::BTreeMap;
use std::sync::Mutex;
use std::sync::OnceLock;

fn min_valence(genus: u32) -> u32 {
    match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    }
}

/// All connected stable graphs of genus `g` with `n` unlabelled external
/// legs, one canonical representative per isomorphism class, sorted by
/// canonical key.
pub fn enumerate_connected(g: u32, n: u32) -> Result<Vec<StableGraph>> {
    let weight = 2 * g as i64 - 2 + n as i64;
    if weight <= 0 {
        return Err(Error::Unstable(weight));
    }
    static CACHE: OnceLock<Mutex<BTreeMap<(u32, u32), Vec<StableGraph>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(found) = cache.lock().unwrap().get(&(g, n)) {
        return Ok(found.clone());
    }

    let mut found: BTreeMap<CanonicalKey, StableGraph> = BTreeMap::new();
    let max_vertices = weight.max(1) as usize;
    for nv in 1..=max_vertices {
        for genera in genus_assignments(g, nv) {
            let marks_sum: u32 = genera.iter().sum();
            // connected: h1 = E - V + 1, so E is forced
            let e = g as i64 - marks_sum as i64 + nv as i64 - 1;
            if e < 0 || e < nv as i64 - 1 {
                continue;
            }
            let e = e as u32;
            let total_half = 2 * e + n;
            let minima: Vec<u32> = genera.iter().map(|&gv| min_valence(gv)).collect();
            for valences in compositions(total_half, &minima) {
                for legs in leg_splits(&valences, n) {
                    let stubs: Vec<u32> = valences
                        .iter()
                        .zip(&legs)
                        .map(|(v, l)| v - l)
                        .collect();
                    let mut slots: Vec<u32> = vec![0; nv];
                    let mut vertex_stubs = Vec::new();
                    for (v, &count) in stubs.iter().enumerate() {
                        for _ in 0..count {
                            let h = HalfEdge(v as u32, slots[v]);
                            slots[v] += 1;
                            vertex_stubs.push(h);
                        }
                    }
                    let mut leg_list = Vec::new();
                    for (v, &count) in legs.iter().enumerate() {
                        for _ in 0..count {
                            leg_list.push((HalfEdge(v as u32, slots[v]), None));
                            slots[v] += 1;
                        }
                    }
                    for matching in perfect_matchings(&vertex_stubs) {
                        let graph = StableGraph::from_parts(
                            genera.clone(),
                            matching,
                            leg_list.clone(),
                        );
                        if !graph.is_connected() {
                            continue;
                        }
                        debug_assert_eq!(graph.validate(), Ok(()));
                        debug_assert_eq!(graph.genus_total(), g);
                        let c = canonicalize(&graph);
                        found.entry(c.key).or_insert(c.rep);
                    }
                }
            }
        }
    }
    let out: Vec<StableGraph> = found.into_values().collect();
    cache.lock().unwrap().insert((g, n), out.clone());
    Ok(out)
}

/// Non-increasing genus assignments of `nv` vertices with sum at most `g`.
fn genus_assignments(g: u32, nv: usize) -> Vec<Vec<u32>> {
    fn rec(g_left: u32, max: u32, slots: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            out.push(acc.clone());
            return;
        }
        for gv in (0..=max.min(g_left)).rev() {
            acc.push(gv);
            rec(g_left - gv, gv, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, g, nv, &mut Vec::new(), &mut out);
    out
}

/// All vectors `v` with `v[i] >= minima[i]` and sum `total`.
fn compositions(total: u32, minima: &[u32]) -> Vec<Vec<u32>> {
    fn rec(total: u32, minima: &[u32], acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if minima.len() == 1 {
            if total >= minima[0] {
                acc.push(total);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        let rest_min: u32 = minima[1..].iter().sum();
        if total < minima[0] + rest_min {
            return;
        }
        for v in minima[0]..=(total - rest_min) {
            acc.push(v);
            rec(total - v, &minima[1..], acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if minima.is_empty() {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, minima, &mut Vec::new(), &mut out);
    out
}

/// Splits `n` legs over vertices with `legs[i] <= valences[i]` and an even
/// number of internal stubs overall (guaranteed by construction).
fn leg_splits(valences: &[u32], n: u32) -> Vec<Vec<u32>> {
    fn rec(valences: &[u32], n: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if valences.len() == 1 {
            if n <= valences[0] {
                acc.push(n);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for l in 0..=n.min(valences[0]) {
            acc.push(l);
            rec(&valences[1..], n - l, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if valences.is_empty() {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(valences, n, &mut Vec::new(), &mut out);
    out
}

/// All perfect matchings of the given half-edges (first-unmatched
/// recursion); assumes even length.
fn perfect_matchings(stubs: &[HalfEdge]) -> Vec<Vec<(HalfEdge, HalfEdge)>> {
    fn rec(
        remaining: &mut Vec<HalfEdge>,
        acc: &mut Vec<(HalfEdge, HalfEdge)>,
        out: &mut Vec<Vec<(HalfEdge, HalfEdge)>>,
    ) {
        if remaining.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = remaining[0];
        for i in 1..remaining.len() {
            let partner = remaining[i];
            let mut rest = remaining.clone();
            rest.remove(i);
            rest.remove(0);
            acc.push((first, partner));
            rec(&mut rest, acc, out);
            acc.pop();
        }
    }
    if stubs.len() % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(&mut stubs.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// All connected labelled stable graphs of genus `g` with `ls[j]` external
/// legs labelled `j+1`, every half-edge labelled in `1..=n_labels`.
pub fn enumerate_labelled(g: u32, ls: &[u32], n_labels: u8) -> Result<Vec<StableGraph>> {
    if n_labels == 0 {
        return Err(Error::LabelOutOfRange(0, 0));
    }
    let n: u32 = ls.iter().sum();
    let weight = 2 * g as i64 - 2 + n as i64;
    if weight <= 0 {
        return Err(Error::Unstable(weight));
    }
    if ls.len() != n_labels as usize {
        return Err(Error::Parse(format!(
            "expected {} leg multiplicities, got {}",
            n_labels,
            ls.len()
        )));
    }
    let mut leg_multiset: Vec<u8> = Vec::new();
    for (j, &count) in ls.iter().enumerate() {
        for _ in 0..count {
            leg_multiset.push(j as u8 + 1);
        }
    }
    let mut found: BTreeMap<CanonicalKey, StableGraph> = BTreeMap::new();
    for skeleton in enumerate_connected(g, n)? {
        for labelled in all_labelings(&skeleton, &leg_multiset, n_labels) {
            let c = canonicalize(&labelled);
            found.entry(c.key).or_insert(c.rep);
        }
    }
    Ok(found.into_values().collect())
}

/// Every way to label all half-edges of `skeleton`: internal ends range
/// freely over `1..=n_labels`, legs realize `leg_multiset`.
fn all_labelings(skeleton: &StableGraph, leg_multiset: &[u8], n_labels: u8) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let legs = skeleton.legs().to_vec();
    let leg_assignments = distinct_permutations(leg_multiset);
    let ends: Vec<HalfEdge> = skeleton
        .edges()
        .iter()
        .flat_map(|(a, b)| [*a, *b])
        .collect();
    let total_internal = ends.len();
    let mut internal = vec![1u8; total_internal];
    loop {
        for leg_labels in &leg_assignments {
            let mut g = skeleton.clone();
            for (h, l) in ends.iter().zip(&internal) {
                g.set_label(*h, Some(*l));
            }
            for (h, l) in legs.iter().zip(leg_labels) {
                g.set_label(*h, Some(*l));
            }
            out.push(g);
        }
        // advance internal label counter
        let mut i = 0;
        loop {
            if i == total_internal {
                return out;
            }
            if internal[i] < n_labels {
                internal[i] += 1;
                break;
            }
            internal[i] = 1;
            i += 1;
        }
    }
}

pub(crate) fn distinct_permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut distinct: Vec<u8> = items.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for &d in &distinct {
        let mut rest = items.to_vec();
        let pos = rest.iter().position(|&x| x == d).unwrap();
        rest.remove(pos);
        for mut tail in distinct_permutations(&rest) {
            tail.insert(0, d);
            out.push(tail);
        }
    }
    out
}

/// One expansion term of a named stable vertex: a graph whose legs are in
/// name-rank order (`legs()[r]` carries name rank `r`).
#[derive(Clone, Debug)]
pub struct NamedEntry {
    pub graph: StableGraph,
    pub n_edges: usize,
    pub aut: u64,
}

/// All named stable graphs of type `(g, labels.len())` whose legs carry
/// the given labels in name-rank order: one representative per
/// named-isomorphism class. `n_labels = 0` means the unlabelled theory.
pub fn enumerate_named(g: u32, labels: &[Option<u8>], n_labels: u8) -> Result<Vec<NamedEntry>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u32, Vec<Option<u8>>, u8), Vec<NamedEntry>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let cache_key = (g, labels.to_vec(), n_labels);
    if let Some(found) = cache.lock().unwrap().get(&cache_key) {
        return Ok(found.clone());
    }
    let n = labels.len() as u32;
    let classes = if n_labels == 0 {
        enumerate_connected(g, n)?
    } else {
        let mut ls = vec![0u32; n_labels as usize];
        for l in labels {
            let l = l.ok_or(Error::LabelOutOfRange(0, n_labels))?;
            if l == 0 || l > n_labels {
                return Err(Error::LabelOutOfRange(l, n_labels));
            }
            ls[l as usize - 1] += 1;
        }
        enumerate_labelled(g, &ls, n_labels)?
    };
    let names: Vec<u32> = (0..n).collect();
    let mut seen: BTreeMap<CanonicalKey, NamedEntry> = BTreeMap::new();
    for class in &classes {
        let class_legs = class.legs().to_vec();
        for perm in crate::canon::permutations(class_legs.len()) {
            // assign name rank r to leg perm[r]; labels must agree
            if (0..class_legs.len())
                .any(|r| class.label(class_legs[perm[r]]) != labels[r])
            {
                continue;
            }
            let mut reordered = class.clone();
            reordered_set_legs(&mut reordered, &class_legs, &perm);
            let c = canonicalize_named(&reordered, &names);
            seen.entry(c.key).or_insert_with(|| NamedEntry {
                graph: reordered.clone(),
                n_edges: reordered.n_edges(),
                aut: c.aut,
            });
        }
    }
    let out: Vec<NamedEntry> = seen.into_values().collect();
    cache.lock().unwrap().insert(cache_key, out.clone());
    Ok(out)
}

fn reordered_set_legs(g: &mut StableGraph, original: &[HalfEdge], perm: &[usize]) {
    let new_order: Vec<HalfEdge> = perm.iter().map(|&p| original[p]).collect();
    g.set_leg_order(new_order);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::aut_order;

    #[test]
    fn rejects_unstable_types() {
        assert!(enumerate_connected(0, 2).is_err());
        assert!(enumerate_connected(0, 0).is_err());
        assert!(enumerate_connected(1, 0).is_err());
        assert!(enumerate_labelled(0, &[1, 1], 2).is_err());
    }

    #[test]
    fn class_counts_match_free_energy_displays() {
        assert_eq!(enumerate_connected(0, 3).unwrap().len(), 1);
        assert_eq!(enumerate_connected(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_connected(1, 2).unwrap().len(), 5);
        assert_eq!(enumerate_connected(2, 0).unwrap().len(), 7);
    }

    #[test]
    fn genus2_aut_multiset() {
        let mut auts: Vec<u64> = enumerate_connected(2, 0)
            .unwrap()
            .iter()
            .map(aut_order)
            .collect();
        auts.sort_unstable();
        assert_eq!(auts, vec![1, 2, 2, 2, 8, 8, 12]);
    }

    #[test]
    fn enumerated_graphs_are_valid_and_canonical() {
        for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 0), (2, 1)] {
            for graph in enumerate_connected(g, n).unwrap() {
                assert_eq!(graph.validate(), Ok(()));
                assert_eq!(graph.genus_total(), g);
                assert_eq!(graph.n_legs() as u32, n);
                assert!(graph.is_connected());
                let c = canonicalize(&graph);
                assert_eq!(c.rep, graph, "representative must be stored");
            }
        }
    }

    #[test]
    fn labelled_n1_matches_unlabelled() {
        let labelled = enumerate_labelled(2, &[0], 1).unwrap();
        assert_eq!(labelled.len(), 7);
    }

    #[test]
    fn labelled_single_vertex_type() {
        // one genus-0 trivalent vertex with legs labelled (1,2,2)
        let found = enumerate_labelled(0, &[1, 2], 2).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].n_vertices(), 1);
    }

    /// Independent brute force for N=2, (g;l) = (1;1,0): every labelled
    /// graph with at most 2 vertices and at most 4 labelled half-edges.
    #[test]
    fn labelled_brute_force_oracle() {
        let computed = enumerate_labelled(1, &[1, 0], 2).unwrap();
        // oracle: genus-1 single vertex with leg 1; genus-0 vertex with a
        // loop (3 label choices: 11, 12, 22) and leg 1
        assert_eq!(computed.len(), 4);
        let single_vertex = computed
            .iter()
            .filter(|g| g.n_edges() == 0)
            .count();
        assert_eq!(single_vertex, 1);
        let loops = computed.iter().filter(|g| g.n_edges() == 1).count();
        assert_eq!(loops, 3);
        // aut orders:the loops 11 and 22 flip, loop 12 does not
        let mut auts: Vec<u64> = computed.iter().map(aut_order).collect();
        auts.sort_unstable();
        assert_eq!(auts, vec![1, 1, 2, 2]);
    }

    #[test]
    fn named_count_follows_forgetting_lemma() {
        use crate::rational::{factorial, rat_i};
        use num_traits::Zero;
        // sum over named variants of 1/|Aut'| equals n!/|Aut| per class
        for (g, n) in [(0u32, 3u32), (1, 1), (1, 2), (0, 4)] {
            let named = enumerate_named(g, &vec![None; n as usize], 0).unwrap();
            let mut per_class: BTreeMap<CanonicalKey, crate::Rat> = BTreeMap::new();
            for entry in &named {
                let c = canonicalize(&entry.graph);
                *per_class.entry(c.key).or_insert_with(crate::Rat::zero) +=
                    rat_i(1) / rat_i(entry.aut as i64);
            }
            for class in enumerate_connected(g, n).unwrap() {
                let c = canonicalize(&class);
                let expected = factorial(n) / rat_i(aut_order(&class) as i64);
                assert_eq!(per_class[&c.key], expected, "(g,n)=({g},{n})");
            }
        }
    }
}

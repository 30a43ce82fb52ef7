//! Edge-cutting and edge-adding operators on graph sums, abstract free
//! energies, and the quadratic recursion checkers.

use crate::coeff::Coeff;
use crate::enumerate::{enumerate_connected, enumerate_labelled};
use crate::error::Result;
use crate::graph::{HalfEdge, StableGraph};
use crate::rational::rat_i;
use crate::sum::GraphSum;
use crate::Rat;

/// Cuts internal edge `k`: its two half-edges become external legs.
fn cut_edge(g: &StableGraph, k: usize) -> StableGraph {
    let mut edges = g.edges().to_vec();
    let (a, b) = edges.remove(k);
    let mut legs: Vec<(HalfEdge, Option<u8>)> =
        g.legs().iter().map(|&h| (h, g.label(h))).collect();
    legs.push((a, g.label(a)));
    legs.push((b, g.label(b)));
    let mut out = StableGraph::from_parts(g.genus_marks().to_vec(), edges, legs);
    copy_labels(g, &mut out);
    out
}

fn copy_labels(from: &StableGraph, to: &mut StableGraph) {
    for v in 0..from.n_vertices() {
        for s in 0..from.valence(v) {
            let h = HalfEdge(v as u32, s);
            to.set_label(h, from.label(h));
        }
    }
}

/// Adds one external leg at vertex `v`.
fn add_leg(g: &StableGraph, v: u32, label: Option<u8>) -> StableGraph {
    let mut legs: Vec<(HalfEdge, Option<u8>)> =
        g.legs().iter().map(|&h| (h, g.label(h))).collect();
    legs.push((HalfEdge(v, g.valence(v as usize)), label));
    let mut out = StableGraph::from_parts(g.genus_marks().to_vec(), g.edges().to_vec(), legs);
    copy_labels(g, &mut out);
    out
}

/// Breaks internal edge `k` and inserts a trivalent genus-0 vertex with a
/// new external leg. The ends kept by the old vertices retain their
/// labels; the two half-edges of the inserted vertex get `wa`, `wb`.
fn insert_vertex_on_edge(
    g: &StableGraph,
    k: usize,
    wa: Option<u8>,
    wb: Option<u8>,
    leg_label: Option<u8>,
) -> StableGraph {
    let w = g.n_vertices() as u32;
    let mut genus = g.genus_marks().to_vec();
    genus.push(0);
    let mut edges = g.edges().to_vec();
    let (a, b) = edges.remove(k);
    edges.push((a, HalfEdge(w, 0)));
    edges.push((b, HalfEdge(w, 1)));
    let mut legs: Vec<(HalfEdge, Option<u8>)> =
        g.legs().iter().map(|&h| (h, g.label(h))).collect();
    legs.push((HalfEdge(w, 2), leg_label));
    let mut out = StableGraph::from_parts(genus, edges, legs);
    copy_labels(g, &mut out);
    out.set_label(HalfEdge(w, 0), wa);
    out.set_label(HalfEdge(w, 1), wb);
    out
}

/// Attaches a trivalent genus-0 vertex to external leg `i`. The leg's
/// half-edge turns into one end of a new internal edge (labels `va` at the
/// old vertex, `wa` at the new one); the new vertex carries the old leg
/// label and `extra_label` on its two legs.
fn attach_vertex_to_leg(
    g: &StableGraph,
    i: usize,
    va: Option<u8>,
    wa: Option<u8>,
    extra_label: Option<u8>,
) -> StableGraph {
    let w = g.n_vertices() as u32;
    let old = g.legs()[i];
    let old_label = g.label(old);
    let mut genus = g.genus_marks().to_vec();
    genus.push(0);
    let mut edges = g.edges().to_vec();
    edges.push((old, HalfEdge(w, 0)));
    let mut legs: Vec<(HalfEdge, Option<u8>)> = g
        .legs()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, &h)| (h, g.label(h)))
        .collect();
    legs.push((HalfEdge(w, 1), old_label));
    legs.push((HalfEdge(w, 2), extra_label));
    let mut out = StableGraph::from_parts(genus, edges, legs);
    copy_labels(g, &mut out);
    out.set_label(old, va);
    out.set_label(HalfEdge(w, 0), wa);
    out
}

/// Edge-cutting operator `K`: sum over internal edges of the cut graph.
pub fn op_k<R: Coeff>(g: &StableGraph) -> GraphSum<R> {
    let mut out = GraphSum::zero();
    for k in 0..g.n_edges() {
        out.add_graph(&cut_edge(g, k), R::one());
    }
    out
}

/// Labelled edge-cutting `K_ij`: cuts internal edges whose end labels are
/// `{i,j}` as a multiset.
pub fn op_k_labelled<R: Coeff>(g: &StableGraph, i: u8, j: u8) -> GraphSum<R> {
    let want = if i <= j { (i, j) } else { (j, i) };
    let mut out = GraphSum::zero();
    for (k, (a, b)) in g.edges().iter().enumerate() {
        if let (Some(la), Some(lb)) = (g.label(*a), g.label(*b)) {
            let have = if la <= lb { (la, lb) } else { (lb, la) };
            if have == want {
                out.add_graph(&cut_edge(g, k), R::one());
            }
        }
    }
    out
}

/// Edge-adding operator `∂`: insert a trivalent genus-0 vertex on each
/// internal edge, plus attach an external edge at each vertex.
pub fn op_partial<R: Coeff>(g: &StableGraph) -> GraphSum<R> {
    let mut out = GraphSum::zero();
    for k in 0..g.n_edges() {
        out.add_graph(&insert_vertex_on_edge(g, k, None, None, None), R::one());
    }
    for v in 0..g.n_vertices() {
        out.add_graph(&add_leg(g, v as u32, None), R::one());
    }
    out
}

/// Labelled `∂_i`: the new external edge is labelled `i`; the inserted
/// vertex's internal half-edges range over all label pairs.
pub fn op_partial_labelled<R: Coeff>(g: &StableGraph, i: u8, n_labels: u8) -> GraphSum<R> {
    let mut out = GraphSum::zero();
    for k in 0..g.n_edges() {
        for wa in 1..=n_labels {
            for wb in 1..=n_labels {
                out.add_graph(
                    &insert_vertex_on_edge(g, k, Some(wa), Some(wb), Some(i)),
                    R::one(),
                );
            }
        }
    }
    for v in 0..g.n_vertices() {
        out.add_graph(&add_leg(g, v as u32, Some(i)), R::one());
    }
    out
}

/// Edge-adding operator `γ`: attach a trivalent genus-0 vertex to each
/// external edge; zero on graphs without external edges.
pub fn op_gamma<R: Coeff>(g: &StableGraph) -> GraphSum<R> {
    let mut out = GraphSum::zero();
    for i in 0..g.n_legs() {
        out.add_graph(&attach_vertex_to_leg(g, i, None, None, None), R::one());
    }
    out
}

/// Labelled `γ_i`: the old leg label moves to the new vertex, the other
/// new leg is labelled `i`, and the new internal edge's two labels range
/// over all `N²` choices.
pub fn op_gamma_labelled<R: Coeff>(g: &StableGraph, i: u8, n_labels: u8) -> GraphSum<R> {
    let mut out = GraphSum::zero();
    for leg in 0..g.n_legs() {
        for va in 1..=n_labels {
            for wa in 1..=n_labels {
                out.add_graph(
                    &attach_vertex_to_leg(g, leg, Some(va), Some(wa), Some(i)),
                    R::one(),
                );
            }
        }
    }
    out
}

/// `D = ∂ + γ`; preserves connectedness.
pub fn op_d<R: Coeff>(g: &StableGraph) -> GraphSum<R> {
    op_partial::<R>(g).add(&op_gamma::<R>(g))
}

pub fn op_d_labelled<R: Coeff>(g: &StableGraph, i: u8, n_labels: u8) -> GraphSum<R> {
    op_partial_labelled::<R>(g, i, n_labels).add(&op_gamma_labelled::<R>(g, i, n_labels))
}

/// Abstract n-point function: sum of connected (g,n) classes weighted by
/// `1/|Aut|`.
pub fn abstract_f<R: Coeff>(g: u32, n: u32) -> Result<GraphSum<R>> {
    let mut out = GraphSum::zero();
    for graph in enumerate_connected(g, n)? {
        let aut = crate::canon::aut_order(&graph);
        out.add_graph(&graph, R::from(rat_i(1) / rat_i(aut as i64)));
    }
    Ok(out)
}

/// Labelled abstract n-point function over `𝒢ᶜ_{g;l1..lN}(N)`.
pub fn abstract_f_labelled<R: Coeff>(g: u32, ls: &[u32], n_labels: u8) -> Result<GraphSum<R>> {
    let mut out = GraphSum::zero();
    for graph in enumerate_labelled(g, ls, n_labels)? {
        let aut = crate::canon::aut_order(&graph);
        out.add_graph(&graph, R::from(rat_i(1) / rat_i(aut as i64)));
    }
    Ok(out)
}

fn stable(g: i64, n: i64) -> bool {
    2 * g - 2 + n > 0
}

/// `D F̂_{g,n}`, extended to the unstable entries by the formal
/// conventions: `D F̂_{1,0} = F̂_{1,1}`, `D F̂_{0,2} = 3 F̂_{0,3}`.
/// Returns `None` where no convention applies.
fn d_hat(g: u32, n: u32) -> Option<GraphSum<Rat>> {
    if stable(g as i64, n as i64) {
        let f = abstract_f::<Rat>(g, n).ok()?;
        return Some(f.apply_linear(op_d));
    }
    match (g, n) {
        (1, 0) => abstract_f::<Rat>(1, 1).ok(),
        (0, 2) => Some(abstract_f::<Rat>(0, 3).ok()?.scale(&rat_i(3))),
        _ => None,
    }
}

/// `D D F̂_{g,n}` with the conventions injected
/// (`D D F̂_{0,1} = 6 F̂_{0,3}`).
fn dd_hat(g: u32, n: u32) -> Option<GraphSum<Rat>> {
    if stable(g as i64, n as i64) {
        let f = abstract_f::<Rat>(g, n).ok()?;
        return Some(f.apply_linear(op_d).apply_linear(op_d));
    }
    match (g, n) {
        (1, 0) => Some(abstract_f::<Rat>(1, 1).ok()?.apply_linear(op_d)),
        (0, 2) => Some(
            abstract_f::<Rat>(0, 3)
                .ok()?
                .apply_linear(op_d)
                .scale(&rat_i(3)),
        ),
        (0, 1) => Some(abstract_f::<Rat>(0, 3).ok()?.scale(&rat_i(6))),
        _ => None,
    }
}

/// Checks `D F̂_{g,n} = (n+1) F̂_{g,n+1}`.
pub fn check_lemma_d(g: u32, n: u32) -> bool {
    let Ok(f) = abstract_f::<Rat>(g, n) else {
        return false;
    };
    let lhs = f.apply_linear(op_d);
    let rhs = abstract_f::<Rat>(g, n + 1)
        .map(|s| s.scale(&rat_i(n as i64 + 1)))
        .unwrap_or_else(|_| GraphSum::zero());
    lhs == rhs
}

/// Checks the quadratic recursion
/// `K F̂_{g,n} = ½[(n+2)(n+1) F̂_{g-1,n+2} + Σ n₁n₂ F̂_{g₁,n₁} F̂_{g₂,n₂}]`
/// (sum over stable splittings with `n₁,n₂ ≥ 1`), and equivalently the
/// `D`-form `K F̂_{g,n} = ½[D D F̂_{g-1,n} + Σ D F̂ · D F̂]` with the
/// low-(g,n) conventions substituted.
pub fn check_recursion_k(g: u32, n: u32) -> bool {
    let Ok(f) = abstract_f::<Rat>(g, n) else {
        return false;
    };
    let lhs = f.apply_linear(op_k);

    // closed form with explicit multiplicities
    let mut rhs = GraphSum::zero();
    if g >= 1 {
        let first = abstract_f::<Rat>(g - 1, n + 2).unwrap();
        rhs = rhs.add(&first.scale(&rat_i((n as i64 + 2) * (n as i64 + 1))));
    }
    for g1 in 0..=g {
        for n1 in 1..=(n + 1) {
            let g2 = g - g1;
            let n2 = n + 2 - n1;
            if !stable(g1 as i64, n1 as i64) || !stable(g2 as i64, n2 as i64) {
                continue;
            }
            let a = abstract_f::<Rat>(g1, n1).unwrap();
            let b = abstract_f::<Rat>(g2, n2).unwrap();
            rhs = rhs.add(&a.mul(&b).scale(&rat_i(n1 as i64 * n2 as i64)));
        }
    }
    let rhs = rhs.scale(&crate::rational::rat(1, 2));
    if lhs != rhs {
        return false;
    }

    // D-form with conventions
    let mut rhs_d = GraphSum::zero();
    if g >= 1 {
        if let Some(first) = dd_hat(g - 1, n) {
            rhs_d = rhs_d.add(&first);
        }
    }
    for g1 in 0..=g {
        for n1 in 0..=n {
            let (g2, n2) = (g - g1, n - n1);
            let (Some(a), Some(b)) = (d_hat(g1, n1), d_hat(g2, n2)) else {
                continue;
            };
            rhs_d = rhs_d.add(&a.mul(&b));
        }
    }
    lhs == rhs_d.scale(&crate::rational::rat(1, 2))
}

fn stable_l(g: i64, ls: &[u32]) -> bool {
    stable(g, ls.iter().map(|&l| l as i64).sum())
}

fn bump(ls: &[u32], j: u8) -> Vec<u32> {
    let mut out = ls.to_vec();
    out[j as usize - 1] += 1;
    out
}

/// Labelled `D_j F̂` with the conventions of the labelled recursion:
/// `∂_j F̂_{1;0..0} = F̂_{1;e_j}` and
/// `D_j F̂_{0;l} = (l_j+1) F̂_{0;l+e_j}` for `Σl = 2`.
fn d_hat_labelled(j: u8, g: u32, ls: &[u32], n_labels: u8) -> Option<GraphSum<Rat>> {
    if stable_l(g as i64, ls) {
        let f = abstract_f_labelled::<Rat>(g, ls, n_labels).ok()?;
        return Some(f.apply_linear(|gr| op_d_labelled(gr, j, n_labels)));
    }
    let total: u32 = ls.iter().sum();
    match (g, total) {
        (1, 0) => abstract_f_labelled::<Rat>(1, &bump(ls, j), n_labels).ok(),
        (0, 2) => {
            let lj = ls[j as usize - 1];
            Some(
                abstract_f_labelled::<Rat>(0, &bump(ls, j), n_labels)
                    .ok()?
                    .scale(&rat_i(lj as i64 + 1)),
            )
        }
        _ => None,
    }
}

fn dd_hat_labelled(i: u8, j: u8, g: u32, ls: &[u32], n_labels: u8) -> Option<GraphSum<Rat>> {
    if stable_l(g as i64, ls) {
        let f = abstract_f_labelled::<Rat>(g, ls, n_labels).ok()?;
        return Some(
            f.apply_linear(|gr| op_d_labelled(gr, j, n_labels))
                .apply_linear(|gr| op_d_labelled(gr, i, n_labels)),
        );
    }
    let total: u32 = ls.iter().sum();
    match (g, total) {
        (1, 0) => Some(
            abstract_f_labelled::<Rat>(1, &bump(ls, j), n_labels)
                .ok()?
                .apply_linear(|gr| op_d_labelled(gr, i, n_labels)),
        ),
        (0, 2) => {
            let lj = ls[j as usize - 1];
            Some(
                abstract_f_labelled::<Rat>(0, &bump(ls, j), n_labels)
                    .ok()?
                    .apply_linear(|gr| op_d_labelled(gr, i, n_labels))
                    .scale(&rat_i(lj as i64 + 1)),
            )
        }
        (0, 1) => {
            let lj = ls[j as usize - 1];
            d_hat_labelled(i, 0, &bump(ls, j), n_labels).map(|s| s.scale(&rat_i(lj as i64 + 1)))
        }
        _ => None,
    }
}

/// Labelled Lemma: `D_j F̂_{g;l} = (l_j+1) F̂_{g;l+e_j}`.
pub fn check_lemma_d_labelled(j: u8, g: u32, ls: &[u32], n_labels: u8) -> bool {
    let Ok(f) = abstract_f_labelled::<Rat>(g, ls, n_labels) else {
        return false;
    };
    let lhs = f.apply_linear(|gr| op_d_labelled(gr, j, n_labels));
    let lj = ls[j as usize - 1];
    let rhs = abstract_f_labelled::<Rat>(g, &bump(ls, j), n_labels)
        .map(|s| s.scale(&rat_i(lj as i64 + 1)))
        .unwrap_or_else(|_| GraphSum::zero());
    lhs == rhs
}

/// Labelled quadratic recursion:
/// `K_ij F̂ = D_i D_j F̂_{g-1} + Σ D_i F̂ · D_j F̂` for `i ≠ j`, and with an
/// overall `½` for `i = j`.
pub fn check_recursion_k_labelled(i: u8, j: u8, g: u32, ls: &[u32], n_labels: u8) -> bool {
    let Ok(f) = abstract_f_labelled::<Rat>(g, ls, n_labels) else {
        return false;
    };
    let lhs = f.apply_linear(|gr| op_k_labelled(gr, i, j));
    let mut rhs = GraphSum::zero();
    if g >= 1 {
        if let Some(first) = dd_hat_labelled(i, j, g - 1, ls, n_labels) {
            rhs = rhs.add(&first);
        }
    }
    for g1 in 0..=g {
        for split in splits(ls) {
            let g2 = g - g1;
            let rest: Vec<u32> = ls.iter().zip(&split).map(|(l, p)| l - p).collect();
            let (Some(a), Some(b)) = (
                d_hat_labelled(i, g1, &split, n_labels),
                d_hat_labelled(j, g2, &rest, n_labels),
            ) else {
                continue;
            };
            rhs = rhs.add(&a.mul(&b));
        }
    }
    if i == j {
        rhs = rhs.scale(&crate::rational::rat(1, 2));
    }
    lhs == rhs
}

/// All componentwise splittings `p` with `0 <= p_k <= l_k`.
fn splits(ls: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &l in ls {
        let mut next = Vec::new();
        for prefix in &out {
            for p in 0..=l {
                let mut ext = prefix.clone();
                ext.push(p);
                next.push(ext);
            }
        }
        out = next;
    }
    out
}

//! Fourier-like transforms of stable graphs and the duality map.
//!
//! `Φ_ε` of a graph is computed by the naming pipeline: give every
//! half-edge a name, cut all internal edges, expand each resulting named
//! vertex over all named stable graphs of its type with coefficient
//! `ε^{|E|}/|Aut|`, glue legs whose ancestors were paired, then forget the
//! names. The duality map is the `ε = 1` case with the sign
//! `(-1)^{#internal edges}`.

use crate::coeff::Coeff;
use crate::enumerate::{enumerate_named, NamedEntry};
use crate::error::Result;
use crate::graph::{HalfEdge, StableGraph};
use crate::ops::{op_d, op_partial};
use crate::rational::{factorial, rat_i};
use crate::sum::GraphSum;
use crate::Rat;

/// Expansion of a Type-`ε` stable vertex:
/// `n! · Σ_Γ ε^{|E(Γ)|}/|Aut(Γ)| · Γ` over connected (g,n) classes.
pub fn vertex_expansion<R: Coeff>(g: u32, n: u32, eps: &R) -> Result<GraphSum<R>> {
    let mut out = GraphSum::zero();
    let nf = factorial(n);
    for graph in crate::enumerate::enumerate_connected(g, n)? {
        let aut = crate::canon::aut_order(&graph);
        let coeff =
            R::from(nf.clone() / rat_i(aut as i64)) * eps.pow_u(graph.n_edges() as u32);
        out.add_graph(&graph, coeff);
    }
    Ok(out)
}

/// Port of one vertex in the cut graph: where its half-edge came from.
enum Port {
    /// end `side` (0 or 1) of original internal edge `k`
    EdgeEnd { edge: usize, side: usize },
    /// original external leg `i`
    Leg(usize),
}

/// The Fourier-like transform `Φ_ε` of a single stable graph in the
/// unlabelled theory. For labelled graphs use
/// [`graph_transform_labelled`], which needs the label count `N`
/// explicitly.
pub fn graph_transform<R: Coeff>(g: &StableGraph, eps: &R) -> GraphSum<R> {
    transform_with_sign(g, eps, false, infer_labels(g))
}

/// `Φ_ε` in the labelled theory with labels `1..=n_labels`.
pub fn graph_transform_labelled<R: Coeff>(
    g: &StableGraph,
    eps: &R,
    n_labels: u8,
) -> GraphSum<R> {
    transform_with_sign(g, eps, false, n_labels)
}

/// Duality map `φ`: `(-1)^{|E(Γ)|} Φ₁(Γ)`.
pub fn duality<R: Coeff>(g: &StableGraph) -> GraphSum<R> {
    transform_with_sign(g, &R::one(), true, infer_labels(g))
}

/// Labelled duality map with labels `1..=n_labels`.
pub fn duality_labelled<R: Coeff>(g: &StableGraph, n_labels: u8) -> GraphSum<R> {
    transform_with_sign(g, &R::one(), true, n_labels)
}

fn infer_labels(g: &StableGraph) -> u8 {
    if g.fully_labelled() {
        (0..g.n_vertices())
            .flat_map(|v| (0..g.valence(v)).map(move |s| (v, s)))
            .filter_map(|(v, s)| g.label(HalfEdge(v as u32, s)))
            .max()
            .unwrap_or(0)
    } else {
        0
    }
}

fn transform_with_sign<R: Coeff>(
    g: &StableGraph,
    eps: &R,
    sign: bool,
    n_labels: u8,
) -> GraphSum<R> {

    // ports per vertex, in a fixed deterministic order
    let nv = g.n_vertices();
    let mut ports: Vec<Vec<Port>> = (0..nv).map(|_| Vec::new()).collect();
    for (k, (a, b)) in g.edges().iter().enumerate() {
        ports[a.v()].push(Port::EdgeEnd { edge: k, side: 0 });
        ports[b.v()].push(Port::EdgeEnd { edge: k, side: 1 });
    }
    for (i, h) in g.legs().iter().enumerate() {
        ports[h.v()].push(Port::Leg(i));
    }

    // named expansion of each dotted vertex: entry legs are in port order
    let expansions: Vec<Vec<NamedEntry>> = (0..nv)
        .map(|v| {
            let labels: Vec<Option<u8>> = ports[v]
                .iter()
                .map(|p| match p {
                    Port::EdgeEnd { edge, side } => {
                        let (a, b) = g.edges()[*edge];
                        g.label(if *side == 0 { a } else { b })
                    }
                    Port::Leg(i) => g.label(g.legs()[*i]),
                })
                .collect();
            enumerate_named(g.genus_mark(v), &labels, n_labels)
                .expect("vertex types of a stable graph are stable")
        })
        .collect();

    let overall_sign = if sign && g.n_edges() % 2 == 1 {
        -R::one()
    } else {
        R::one()
    };

    // where each end of original edge k sits: (vertex, port rank)
    let mut edge_ports: Vec<[(usize, usize); 2]> = vec![[(0, 0); 2]; g.n_edges()];
    for v in 0..nv {
        for (rank, p) in ports[v].iter().enumerate() {
            if let Port::EdgeEnd { edge, side } = p {
                edge_ports[*edge][*side] = (v, rank);
            }
        }
    }

    let mut out = GraphSum::zero();
    let mut choice = vec![0usize; nv];
    loop {
        let mut coeff = overall_sign.clone();
        let mut assembled: Option<StableGraph> = None;
        let mut leg_offset = vec![0usize; nv];
        for v in 0..nv {
            let entry = &expansions[v][choice[v]];
            coeff = coeff
                * eps.pow_u(entry.n_edges as u32)
                * R::from(rat_i(1) / rat_i(entry.aut as i64));
            leg_offset[v] = assembled.as_ref().map_or(0, |a| a.n_legs());
            assembled = Some(match assembled {
                None => entry.graph.clone(),
                Some(acc) => acc.disjoint_union(&entry.graph),
            });
        }
        let assembled = assembled.expect("at least one vertex");

        // glue: for each original edge, pair the two ancestor legs
        let mut edges = assembled.edges().to_vec();
        let mut glued: Vec<bool> = vec![false; assembled.n_legs()];
        for ends in &edge_ports {
            let ia = leg_offset[ends[0].0] + ends[0].1;
            let ib = leg_offset[ends[1].0] + ends[1].1;
            edges.push((assembled.legs()[ia], assembled.legs()[ib]));
            glued[ia] = true;
            glued[ib] = true;
        }
        let legs: Vec<(HalfEdge, Option<u8>)> = assembled
            .legs()
            .iter()
            .enumerate()
            .filter(|(i, _)| !glued[*i])
            .map(|(_, &h)| (h, assembled.label(h)))
            .collect();
        let mut final_graph =
            StableGraph::from_parts(assembled.genus_marks().to_vec(), edges, legs);
        for v in 0..assembled.n_vertices() {
            for s in 0..assembled.valence(v) {
                let h = HalfEdge(v as u32, s);
                final_graph.set_label(h, assembled.label(h));
            }
        }
        out.add_graph(&final_graph, coeff);

        // next combination
        let mut v = 0;
        loop {
            if v == nv {
                return out;
            }
            choice[v] += 1;
            if choice[v] < expansions[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

/// Linear extension of `Φ_ε` to graph sums.
pub fn transform_sum<R: Coeff>(sum: &GraphSum<R>, eps: &R) -> GraphSum<R> {
    sum.apply_linear(|g| graph_transform(g, eps))
}

/// Linear extension of the duality map.
pub fn duality_sum<R: Coeff>(sum: &GraphSum<R>) -> GraphSum<R> {
    sum.apply_linear(|g| duality(g))
}

/// Dual abstract n-point function expanded in ordinary graphs:
/// `Σ_Γ (1/|Aut Γ|) φ(Γ)`; by the duality theorem this collapses to
/// `(1/n!) ·` (single (g,n) vertex).
pub fn dual_abstract_f(g: u32, n: u32) -> Result<GraphSum<Rat>> {
    let mut out = GraphSum::zero();
    for graph in crate::enumerate::enumerate_connected(g, n)? {
        let aut = crate::canon::aut_order(&graph);
        let dual = duality::<Rat>(&graph);
        out = out.add(&dual.scale(&(rat_i(1) / rat_i(aut as i64))));
    }
    Ok(out)
}

/// Labelled variant over `𝒢ᶜ_{g;l1..lN}(N)`; collapses to
/// `(1/(l1!...lN!)) ·` (labelled vertex).
pub fn dual_abstract_f_labelled(g: u32, ls: &[u32], n_labels: u8) -> Result<GraphSum<Rat>> {
    let mut out = GraphSum::zero();
    for graph in crate::enumerate::enumerate_labelled(g, ls, n_labels)? {
        let aut = crate::canon::aut_order(&graph);
        let dual = duality_labelled::<Rat>(&graph, n_labels);
        out = out.add(&dual.scale(&(rat_i(1) / rat_i(aut as i64))));
    }
    Ok(out)
}

/// Checks the dual-operator relations on a connected stable graph:
/// `φ(∂Γ) = D(φΓ)` and `φ(DΓ) = ∂(φΓ)`.
pub fn dual_operator_check(g: &StableGraph) -> bool {
    let phi: GraphSum<Rat> = duality(g);
    let lhs_partial = duality_sum(&op_partial::<Rat>(g));
    let rhs_partial = phi.apply_linear(op_d);
    if lhs_partial != rhs_partial {
        return false;
    }
    let lhs_d = duality_sum(&op_d::<Rat>(g));
    let rhs_d = phi.apply_linear(op_partial);
    lhs_d == rhs_d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::ops::abstract_f;
    use crate::rational::rat;
    use crate::sym::Sym;
    use crate::{Poly, QSum};

    fn loop_with_legs(n: u32) -> StableGraph {
        let mut b = GraphBuilder::new();
        let v = b.vertex(0);
        b.loop_at(v).legs(v, n);
        b.build()
    }

    fn theta() -> StableGraph {
        let mut b = GraphBuilder::new();
        let v0 = b.vertex(0);
        let v1 = b.vertex(0);
        b.edge(v0, v1).edge(v0, v1).edge(v0, v1);
        b.build()
    }

    fn dumbbell() -> StableGraph {
        let mut b = GraphBuilder::new();
        let v0 = b.vertex(0);
        let v1 = b.vertex(0);
        b.loop_at(v0).loop_at(v1).edge(v0, v1);
        b.build()
    }

    fn fig8() -> StableGraph {
        let mut b = GraphBuilder::new();
        let v = b.vertex(0);
        b.loop_at(v).loop_at(v);
        b.build()
    }

    fn eps() -> Poly {
        Poly::var(Sym::Scalar("e".into()))
    }

    #[test]
    fn vertex_expansion_03_is_epsilon_free() {
        let sum = vertex_expansion::<Poly>(0, 3, &eps()).unwrap();
        assert_eq!(sum.n_terms(), 1);
        assert_eq!(sum.coeff(&StableGraph::vertex(0, 3)).render(), "1");
    }

    #[test]
    fn vertex_expansion_11_display() {
        let sum = vertex_expansion::<Poly>(1, 1, &eps()).unwrap();
        assert_eq!(sum.coeff(&StableGraph::vertex(1, 1)).render(), "1");
        assert_eq!(sum.coeff(&loop_with_legs(1)).render(), "1/2*scalar:e");
        assert_eq!(sum.n_terms(), 2);
    }

    #[test]
    fn vertex_expansion_04_display() {
        let sum = vertex_expansion::<Poly>(0, 4, &eps()).unwrap();
        assert_eq!(sum.coeff(&StableGraph::vertex(0, 4)).render(), "1");
        let tree = {
            let mut b = GraphBuilder::new();
            let v0 = b.vertex(0);
            let v1 = b.vertex(0);
            b.edge(v0, v1).legs(v0, 2).legs(v1, 2);
            b.build()
        };
        assert_eq!(sum.coeff(&tree).render(), "3*scalar:e");
        assert_eq!(sum.n_terms(), 2);
    }

    #[test]
    fn transform_at_zero_is_identity() {
        use num_traits::Zero;
        for g in [dumbbell(), theta(), loop_with_legs(2)] {
            let id = graph_transform::<Rat>(&g, &Rat::zero());
            assert_eq!(id, QSum::from_graph(&g));
        }
    }

    #[test]
    fn transform_of_vertex_matches_vertex_expansion() {
        for (g, n) in [(1u32, 1u32), (0, 4), (2, 0), (1, 2)] {
            let via_pipeline = graph_transform::<Poly>(&StableGraph::vertex(g, n), &eps());
            let via_formula = vertex_expansion::<Poly>(g, n, &eps()).unwrap();
            assert_eq!(via_pipeline, via_formula, "(g,n)=({g},{n})");
        }
    }

    #[test]
    fn named_pipeline_worked_example() {
        // Φ₁ of (genus-1 -- edge -- genus-0 with 2 legs): the third worked
        // naming example; duality supplies the (-1)^1
        let source = {
            let mut b = GraphBuilder::new();
            let v0 = b.vertex(1);
            let v1 = b.vertex(0);
            b.edge(v0, v1).legs(v1, 2);
            b.build()
        };
        let phi = graph_transform::<Rat>(&source, &rat_i(1));
        let second = {
            let mut b = GraphBuilder::new();
            let v0 = b.vertex(0);
            let v1 = b.vertex(0);
            b.loop_at(v0).edge(v0, v1).legs(v1, 2);
            b.build()
        };
        assert_eq!(phi.coeff(&source), rat_i(1));
        assert_eq!(phi.coeff(&second), rat(1, 2));
        assert_eq!(phi.n_terms(), 2);
        let dual = duality::<Rat>(&source);
        assert_eq!(dual.coeff(&source), rat_i(-1));
        assert_eq!(dual.coeff(&second), rat(-1, 2));
    }

    #[test]
    fn genus2_duality_expansions_term_by_term() {
        // the six dotted genus-2 graphs with internal edges
        let loop_on_g1 = {
            let mut b = GraphBuilder::new();
            let v = b.vertex(1);
            b.loop_at(v);
            b.build()
        };
        let two_g1 = {
            let mut b = GraphBuilder::new();
            let v0 = b.vertex(1);
            let v1 = b.vertex(1);
            b.edge(v0, v1);
            b.build()
        };
        let g1_g0loop = {
            let mut b = GraphBuilder::new();
            let v0 = b.vertex(1);
            let v1 = b.vertex(0);
            b.edge(v0, v1).loop_at(v1);
            b.build()
        };

        let d = duality::<Rat>(&loop_on_g1);
        assert_eq!(d.coeff(&loop_on_g1), rat_i(-1));
        assert_eq!(d.coeff(&fig8()), rat(-1, 2));
        assert_eq!(d.coeff(&g1_g0loop), rat_i(-1));
        assert_eq!(d.coeff(&dumbbell()), rat(-1, 2));
        assert_eq!(d.coeff(&theta()), rat(-1, 2));
        assert_eq!(d.n_terms(), 5);

        let d = duality::<Rat>(&two_g1);
        assert_eq!(d.coeff(&two_g1), rat_i(-1));
        assert_eq!(d.coeff(&g1_g0loop), rat_i(-1));
        assert_eq!(d.coeff(&dumbbell()), rat(-1, 4));
        assert_eq!(d.n_terms(), 3);

        let d = duality::<Rat>(&g1_g0loop);
        assert_eq!(d.coeff(&g1_g0loop), rat_i(1));
        assert_eq!(d.coeff(&dumbbell()), rat(1, 2));
        assert_eq!(d.n_terms(), 2);

        let d = duality::<Rat>(&fig8());
        assert_eq!(d.coeff(&fig8()), rat_i(1));
        assert_eq!(d.coeff(&dumbbell()), rat_i(1));
        assert_eq!(d.coeff(&theta()), rat_i(2));
        assert_eq!(d.n_terms(), 3);

        assert_eq!(
            duality::<Rat>(&dumbbell()),
            QSum::from_graph(&dumbbell()).scale(&rat_i(-1))
        );
        assert_eq!(
            duality::<Rat>(&theta()),
            QSum::from_graph(&theta()).scale(&rat_i(-1))
        );
    }

    #[test]
    fn duality_involution_small() {
        for (g, n) in [(0u32, 3u32), (1, 1), (0, 4), (1, 2), (2, 0)] {
            for graph in crate::enumerate::enumerate_connected(g, n).unwrap() {
                let twice = duality_sum(&duality::<Rat>(&graph));
                assert_eq!(twice, QSum::from_graph(&graph), "(g,n)=({g},{n})");
            }
        }
    }

    #[test]
    fn dual_abstract_f_collapses_to_vertex() {
        for (g, n) in [(2u32, 0u32), (0, 3), (1, 1), (1, 2)] {
            let dual = dual_abstract_f(g, n).unwrap();
            let expected =
                QSum::from_graph(&StableGraph::vertex(g, n)).scale(&(rat_i(1) / factorial(n)));
            assert_eq!(dual, expected, "(g,n)=({g},{n})");
        }
    }

    #[test]
    fn addition_law_on_vertices() {
        let e1 = Poly::var(Sym::Scalar("e1".into()));
        let e2 = Poly::var(Sym::Scalar("e2".into()));
        let sum = e1.clone() + e2.clone();
        for (g, n) in [(1u32, 1u32), (0, 4), (2, 0)] {
            let inner = graph_transform::<Poly>(&StableGraph::vertex(g, n), &e2);
            let composed = transform_sum(&inner, &e1);
            let direct = vertex_expansion::<Poly>(g, n, &sum).unwrap();
            assert_eq!(composed, direct, "(g,n)=({g},{n})");
            let inner = graph_transform::<Poly>(&StableGraph::vertex(g, n), &e1);
            let composed_rev = transform_sum(&inner, &e2);
            assert_eq!(composed_rev, direct, "(g,n)=({g},{n}) reversed");
        }
    }

    #[test]
    fn triangularity() {
        let e = eps();
        for (g, n) in [(1u32, 2u32), (2, 0)] {
            for graph in crate::enumerate::enumerate_connected(g, n).unwrap() {
                let image = graph_transform::<Poly>(&graph, &e);
                for (_, term, coeff) in image.iter() {
                    assert!(term.n_edges() >= graph.n_edges());
                    if term.n_edges() == graph.n_edges() {
                        let c = crate::canon::canonicalize(term);
                        let c0 = crate::canon::canonicalize(&graph);
                        assert_eq!(c.key, c0.key, "only the source graph at ε^0");
                        assert_eq!(coeff.render(), "1");
                    }
                }
            }
        }
    }

    #[test]
    fn dual_operator_checks() {
        assert!(dual_operator_check(&StableGraph::vertex(1, 1)));
        assert!(dual_operator_check(&StableGraph::vertex(0, 3)));
        assert!(dual_operator_check(&dumbbell()));
    }

    #[test]
    fn labelled_duality_collapses() {
        // N=2: (g;l1,l2) with 2g-2+l1+l2 <= 2
        for (g, ls) in [
            (0u32, [2u32, 1u32]),
            (0, [1, 2]),
            (0, [3, 0]),
            (1, [1, 0]),
            (1, [0, 1]),
            (1, [1, 1]),
            (1, [2, 0]),
            (2, [0, 0]),
        ] {
            let dual = dual_abstract_f_labelled(g, &ls, 2).unwrap();
            let mut b = GraphBuilder::new();
            let v = b.vertex(g);
            for _ in 0..ls[0] {
                b.leg(v, Some(1));
            }
            for _ in 0..ls[1] {
                b.leg(v, Some(2));
            }
            let vertex = b.build();
            let expected = QSum::from_graph(&vertex)
                .scale(&(rat_i(1) / (factorial(ls[0]) * factorial(ls[1]))));
            assert_eq!(dual, expected, "(g;l)=({g};{},{})", ls[0], ls[1]);
        }
    }

    #[test]
    fn duality_of_bare_vertex_is_free_energy() {
        // the dotted (2,0) vertex expands to the full genus-2 free energy
        let phi = duality::<Rat>(&StableGraph::vertex(2, 0));
        assert_eq!(phi, abstract_f::<Rat>(2, 0).unwrap());
    }
}

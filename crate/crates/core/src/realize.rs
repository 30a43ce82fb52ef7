//! Feynman-rule realization of graph sums as exact polynomials, the
//! induced dual realization, and the propagator-shift transformations on
//! the space of field theories.

use crate::error::{Error, Result};
use crate::graph::StableGraph;
use crate::rational::{factorial, rat, rat_i};
use crate::sum::GraphSum;
use crate::sym::Sym;
use crate::{Poly, Rat};
use std::collections::BTreeMap;

/// Feynman rules: a weight per vertex type and one edge weight.
pub struct FeynmanRules {
    pub vertex: BTreeMap<(u32, u32), Poly>,
    pub edge: Poly,
}

impl FeynmanRules {
    /// Symbolic rules: vertex `(g,n) -> F[g,n]`, edge `-> kappa`, covering
    /// every vertex type up to the given stability bound.
    pub fn symbolic(bound: u32) -> FeynmanRules {
        let mut vertex = BTreeMap::new();
        for (g, n) in stable_range(bound) {
            vertex.insert((g, n), Poly::var(Sym::F(g, n)));
        }
        FeynmanRules {
            vertex,
            edge: Poly::var(Sym::Kappa),
        }
    }
}

/// All stable `(g,n)` with `0 < 2g-2+n <= bound`.
pub fn stable_range(bound: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for w in 1..=bound as i64 {
        for g in 0..=((w + 2) / 2) {
            let n = w + 2 - 2 * g;
            if n >= 0 {
                out.push((g as u32, n as u32));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Product of vertex and edge weights of a single graph (no `1/|Aut|`).
pub fn weight(g: &StableGraph, rules: &FeynmanRules) -> Result<Poly> {
    let mut acc = Poly::constant(rat_i(1));
    for v in 0..g.n_vertices() {
        let key = (g.genus_mark(v), g.valence(v));
        let w = rules
            .vertex
            .get(&key)
            .ok_or(Error::MissingRule(key.0, key.1))?;
        acc = acc * w.clone();
    }
    for _ in 0..g.n_edges() {
        acc = acc * rules.edge.clone();
    }
    Ok(acc)
}

/// Realizes a rational graph sum with closures for the weights.
pub fn realize_sum(
    sum: &GraphSum<Rat>,
    vertex: &dyn Fn(u32, u32) -> Poly,
    edge: &Poly,
) -> Poly {
    let mut acc = Poly::new();
    for (_, g, c) in sum.iter() {
        let mut term = Poly::constant(c.clone());
        for v in 0..g.n_vertices() {
            term = term * vertex(g.genus_mark(v), g.valence(v));
        }
        term = term * edge.pow(g.n_edges() as u32);
        acc += term;
    }
    acc
}

/// `ŴF_{g,n}`: realization of the abstract n-point function with symbolic
/// rules (vertex `(g,n) -> F[g,n]`, edge `-> kappa`).
pub fn hat_f(g: u32, n: u32) -> Result<Poly> {
    let sum = crate::ops::abstract_f::<Rat>(g, n)?;
    Ok(realize_sum(
        &sum,
        &|gv, nv| Poly::var(Sym::F(gv, nv)),
        &Poly::var(Sym::Kappa),
    ))
}

/// `t̃F_{g,n} = n! · ŴF_{g,n}`.
pub fn tilde_f(g: u32, n: u32) -> Result<Poly> {
    Ok(hat_f(g, n)?.scale(&factorial(n)))
}

/// Labelled realization `ŴF_{g;l1..lN}` over the symmetric propagators
/// `kappa[i,j]`: vertex weight `F[g;val_1..val_N]`, edge weight
/// `kappa[j1,j2]` from the edge's end labels.
pub fn hat_f_labelled(g: u32, ls: &[u32], n_labels: u8) -> Result<Poly> {
    let sum = crate::ops::abstract_f_labelled::<Rat>(g, ls, n_labels)?;
    let mut acc = Poly::new();
    for (_, graph, c) in sum.iter() {
        let mut term = Poly::constant(c.clone());
        for v in 0..graph.n_vertices() {
            let vals: Vec<u8> = (1..=n_labels)
                .map(|j| graph.valence_labelled(v, j) as u8)
                .collect();
            term = term * Poly::var(Sym::FL(graph.genus_mark(v), vals));
        }
        for (a, b) in graph.edges() {
            let (la, lb) = (
                graph.label(*a).expect("labelled graph"),
                graph.label(*b).expect("labelled graph"),
            );
            term = term * Poly::var(Sym::kappa_l(la, lb));
        }
        acc += term;
    }
    Ok(acc)
}

/// Induced dual realization
/// `n! Σ_Γ (1/|Aut Γ|) Π_v (n_v! ŴF_{g_v,n_v}) (-κ)^{|E|}`; by the
/// realized duality theorem this recovers the bare symbol `F[g,n]`.
pub fn dual_hat_f(g: u32, n: u32) -> Result<Poly> {
    let sum = crate::ops::abstract_f::<Rat>(g, n)?;
    let minus_kappa = -Poly::var(Sym::Kappa);
    let realized = realize_sum(
        &sum,
        &|gv, nv| tilde_f(gv, nv).expect("vertex types are stable"),
        &minus_kappa,
    );
    Ok(realized.scale(&factorial(n)))
}

/// A field theory: the weights `F_{g,n}` on the stable range up to
/// `bound`, in the `t̃F` normalization (`Theory` values realize dotted
/// vertices directly).
#[derive(Clone, PartialEq, Debug)]
pub struct Theory {
    pub bound: u32,
    pub vals: BTreeMap<(u32, u32), Poly>,
}

impl Theory {
    pub fn new(bound: u32) -> Theory {
        Theory {
            bound,
            vals: BTreeMap::new(),
        }
    }

    /// The symbolic theory `F_{g,n} = F[g,n]`.
    pub fn symbolic(bound: u32) -> Theory {
        let mut t = Theory::new(bound);
        for (g, n) in stable_range(bound) {
            t.vals.insert((g, n), Poly::var(Sym::F(g, n)));
        }
        t
    }

    pub fn get(&self, g: u32, n: u32) -> Option<&Poly> {
        self.vals.get(&(g, n))
    }

    /// Theory-file JSON: `{"g,n":[{"coeff":...,"monomial":[...]},...],...}`
    /// with keys in lexicographic (g,n) order.
    pub fn to_json(&self) -> String {
        let items: Vec<String> = self
            .vals
            .iter()
            .map(|((g, n), p)| format!("\"{},{}\":{}", g, n, p.to_json()))
            .collect();
        format!("{{{}}}", items.join(","))
    }

    pub fn from_json(text: &str) -> Result<Theory> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("theory JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("theory JSON: expected object".into()))?;
        let mut t = Theory::new(0);
        let mut bound = 0i64;
        for (key, val) in obj {
            let (g, n) = key
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad theory key `{key}`")))?;
            let g: u32 = g
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad genus in `{key}`")))?;
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad leg count in `{key}`")))?;
            let poly = Poly::from_json_value(val, &crate::sym::parse_sym)?;
            bound = bound.max(2 * g as i64 - 2 + n as i64);
            t.vals.insert((g, n), poly);
        }
        t.bound = bound.max(0) as u32;
        Ok(t)
    }
}

/// The propagator-shift transformation `S_κ` on the space of field
/// theories, computed by graph sums: the output weight is
/// `G_{g,n} = n! Σ_Γ κ^{|E|}/|Aut| Π_v input(g_v, n_v)`.
pub fn s_transform(theory: &Theory, kappa: &Poly) -> Result<Theory> {
    let mut out = Theory::new(theory.bound);
    for (g, n) in stable_range(theory.bound) {
        let sum = crate::ops::abstract_f::<Rat>(g, n)?;
        let realized = realize_sum(
            &sum,
            &|gv, nv| {
                theory
                    .vals
                    .get(&(gv, nv))
                    .cloned()
                    .unwrap_or_else(Poly::new)
            },
            kappa,
        );
        out.vals.insert((g, n), realized.scale(&factorial(n)));
    }
    Ok(out)
}

/// Checks the realized quadratic recursion at one `(g,n)`:
/// `∂_κ ŴF_{g,n} = ½[(1/n!) t̃F_{g-1,n+2} + Σ t̃F_{g1,n1+1} t̃F_{g2,n2+1} / (n1! n2!)]`
/// with the uniform index-shift conventions (terms kept when the shifted
/// entry is stable).
pub fn check_realized_recursion(g: u32, n: u32) -> Result<bool> {
    let lhs = hat_f(g, n)?.partial(&Sym::Kappa);
    let mut rhs = Poly::new();
    if g >= 1 {
        rhs += tilde_f(g - 1, n + 2)?.scale(&(rat_i(1) / factorial(n)));
    }
    for g1 in 0..=g {
        for n1 in 0..=n {
            let (g2, n2) = (g - g1, n - n1);
            let s1 = 2 * g1 as i64 - 2 + n1 as i64 + 1 > 0;
            let s2 = 2 * g2 as i64 - 2 + n2 as i64 + 1 > 0;
            if !s1 || !s2 {
                continue;
            }
            let prod = tilde_f(g1, n1 + 1)? * tilde_f(g2, n2 + 1)?;
            rhs += prod.scale(&(rat_i(1) / (factorial(n1) * factorial(n2))));
        }
    }
    Ok(lhs == rhs.scale(&rat(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::sym::parse_linear_poly;

    fn f(g: u32, n: u32) -> Poly {
        Poly::var(Sym::F(g, n))
    }

    fn kappa() -> Poly {
        Poly::var(Sym::Kappa)
    }

    #[test]
    fn weight_examples() {
        let rules = FeynmanRules::symbolic(4);
        assert_eq!(
            weight(&StableGraph::vertex(2, 0), &rules).unwrap(),
            f(2, 0)
        );
        let loop_leg = {
            let mut b = GraphBuilder::new();
            let v = b.vertex(0);
            b.loop_at(v).leg(v, None);
            b.build()
        };
        assert_eq!(weight(&loop_leg, &rules).unwrap(), kappa() * f(0, 3));
        let theta = {
            let mut b = GraphBuilder::new();
            let v0 = b.vertex(0);
            let v1 = b.vertex(0);
            b.edge(v0, v1).edge(v0, v1).edge(v0, v1);
            b.build()
        };
        assert_eq!(
            weight(&theta, &rules).unwrap(),
            kappa().pow(3) * f(0, 3).pow(2)
        );
        let missing = FeynmanRules {
            vertex: BTreeMap::new(),
            edge: kappa(),
        };
        assert!(weight(&loop_leg, &missing).is_err());
    }

    #[test]
    fn hat_f_display_examples() {
        assert_eq!(hat_f(0, 3).unwrap(), f(0, 3).scale(&rat(1, 6)));
        assert_eq!(
            hat_f(1, 1).unwrap().render(),
            "F[1,1] + 1/2*kappa*F[0,3]"
        );
        assert_eq!(
            hat_f(0, 4).unwrap(),
            f(0, 4).scale(&rat(1, 24)) + (kappa() * f(0, 3).pow(2)).scale(&rat(1, 8))
        );
        assert_eq!(
            hat_f(1, 2).unwrap(),
            f(1, 2).scale(&rat(1, 2))
                + (kappa() * f(0, 4)).scale(&rat(1, 4))
                + (kappa() * f(1, 1) * f(0, 3)).scale(&rat(1, 2))
                + (kappa().pow(2) * f(0, 3).pow(2)).scale(&rat(1, 2))
        );
    }

    #[test]
    fn hat_f_at_kappa_zero_is_single_vertex() {
        for (g, n) in [(0u32, 3u32), (1, 1), (0, 4), (1, 2), (2, 0)] {
            let p = hat_f(g, n).unwrap();
            let kappa_free: Poly = p
                .terms()
                .filter(|(m, _)| m.propagator_degree() == 0)
                .fold(Poly::new(), |mut acc, (m, c)| {
                    acc.add_term(m.clone(), c.clone());
                    acc
                });
            assert_eq!(
                kappa_free,
                f(g, n).scale(&(rat_i(1) / factorial(n))),
                "(g,n)=({g},{n})"
            );
        }
    }

    #[test]
    fn dual_hat_f_recovers_symbols() {
        for (g, n) in [(0u32, 3u32), (0, 4), (1, 1), (1, 2), (2, 0)] {
            assert_eq!(dual_hat_f(g, n).unwrap(), f(g, n), "(g,n)=({g},{n})");
        }
    }

    #[test]
    fn inverse_relations_display() {
        // F[0,4] = 24 ŴF_{0,4} - 108 κ ŴF_{0,3}^2
        let rhs = hat_f(0, 4).unwrap().scale(&rat_i(24))
            - (kappa() * hat_f(0, 3).unwrap().pow(2)).scale(&rat_i(108));
        assert_eq!(rhs, f(0, 4));
        // F[1,1] = ŴF_{1,1} - 3 κ ŴF_{0,3}
        let rhs = hat_f(1, 1).unwrap() - (kappa() * hat_f(0, 3).unwrap()).scale(&rat_i(3));
        assert_eq!(rhs, f(1, 1));
        // F[1,2] = 2ŴF12 - 12κŴF04 - 6κŴF11ŴF03 + 36κ²ŴF03²
        let rhs = hat_f(1, 2).unwrap().scale(&rat_i(2))
            - (kappa() * hat_f(0, 4).unwrap()).scale(&rat_i(12))
            - (kappa() * hat_f(1, 1).unwrap() * hat_f(0, 3).unwrap()).scale(&rat_i(6))
            + (kappa().pow(2) * hat_f(0, 3).unwrap().pow(2)).scale(&rat_i(36));
        assert_eq!(rhs, f(1, 2));
    }

    /// The genus-2 free energy written in `t̃F` and `κ`.
    pub(crate) fn f2_expansion() -> Poly {
        let t = |g, n| tilde_f(g, n).unwrap();
        let k = kappa();
        t(2, 0)
            - (k.clone() * (t(1, 2).scale(&rat(1, 2)) + t(1, 1).pow(2).scale(&rat(1, 2))))
            + (k.pow(2)
                * (t(0, 4).scale(&rat(1, 8)) + (t(1, 1) * t(0, 3)).scale(&rat(1, 2))))
            - (k.pow(3) * t(0, 3).pow(2)).scale(&rat(5, 24))
    }

    #[test]
    fn f2_recovery_matches_display() {
        assert_eq!(f2_expansion(), f(2, 0));
        assert_eq!(dual_hat_f(2, 0).unwrap(), f(2, 0));
    }

    #[test]
    fn f3_recovery_matches_display() {
        let t = |g, n| tilde_f(g, n).unwrap();
        let k = kappa();
        let f3 = t(3, 0)
            - k.clone() * (t(2, 2).scale(&rat(1, 2)) + (t(1, 1) * t(2, 1)))
            + k.pow(2)
                * (t(1, 4).scale(&rat(1, 8))
                    + t(1, 2).pow(2).scale(&rat(1, 4))
                    + (t(0, 3) * t(2, 1)).scale(&rat(1, 2))
                    + (t(1, 1) * t(1, 3)).scale(&rat(1, 2))
                    + (t(1, 1).pow(2) * t(1, 2)).scale(&rat(1, 2)))
            - k.pow(3)
                * (t(0, 6).scale(&rat(1, 48))
                    + (t(0, 4) * t(1, 2)).scale(&rat(1, 4))
                    + (t(0, 3) * t(1, 3)).scale(&rat(5, 12))
                    + (t(0, 5) * t(1, 1)).scale(&rat(1, 8))
                    + (t(0, 3) * t(1, 1) * t(1, 2))
                    + (t(0, 4) * t(1, 1).pow(2)).scale(&rat(1, 4))
                    + (t(0, 3) * t(1, 1).pow(3)).scale(&rat(1, 6)))
            + k.pow(4)
                * (t(0, 4).pow(2).scale(&rat(1, 12))
                    + (t(0, 3) * t(0, 5)).scale(&rat(7, 48))
                    + (t(0, 3).pow(2) * t(1, 2)).scale(&rat(5, 8))
                    + (t(0, 3) * t(0, 4) * t(1, 1)).scale(&rat(2, 3))
                    + (t(0, 3).pow(2) * t(1, 1).pow(2)).scale(&rat(1, 2)))
            - k.pow(5)
                * ((t(0, 3).pow(2) * t(0, 4)).scale(&rat(25, 48))
                    + (t(0, 3).pow(3) * t(1, 1)).scale(&rat(5, 8)))
            + (k.pow(6) * t(0, 3).pow(4)).scale(&rat(5, 16));
        assert_eq!(f3, f(3, 0));
        assert_eq!(dual_hat_f(3, 0).unwrap(), f(3, 0));
    }

    #[test]
    fn labelled_hat_f_11_over_kappa_matrix() {
        // t̃F_{1;1,0} = F[1;1,0] + ½κ11 F[0;3,0] + κ12 F[0;2,1] + ½κ22 F[0;1,2]
        let p = hat_f_labelled(1, &[1, 0], 2).unwrap();
        let fl = |g, ls: &[u8]| Poly::var(Sym::FL(g, ls.to_vec()));
        let kl = |i, j| Poly::var(Sym::kappa_l(i, j));
        let expected = fl(1, &[1, 0])
            + (kl(1, 1) * fl(0, &[3, 0])).scale(&rat(1, 2))
            + kl(1, 2) * fl(0, &[2, 1])
            + (kl(2, 2) * fl(0, &[1, 2])).scale(&rat(1, 2));
        assert_eq!(p, expected);
    }

    #[test]
    fn s_transform_worked_examples() {
        // S_{k2} applied to the symbolic theory, as in the group-law example
        let k2 = parse_linear_poly("k2").unwrap();
        let theory = Theory::symbolic(4);
        let shifted = s_transform(&theory, &k2).unwrap();
        let g03 = shifted.get(0, 3).unwrap().clone();
        assert_eq!(g03, f(0, 3));
        // G_{0,4} = F04 + 3 k2 F03^2
        assert_eq!(
            shifted.get(0, 4).unwrap().clone(),
            f(0, 4) + (k2.clone() * f(0, 3).pow(2)).scale(&rat_i(3))
        );
        // G_{1,1} = F11 + 1/2 k2 F03
        assert_eq!(
            shifted.get(1, 1).unwrap().clone(),
            f(1, 1) + (k2.clone() * f(0, 3)).scale(&rat(1, 2))
        );
        // G_{1,2} = F12 + k2 F11 F03 + 1/2 k2 F04 + k2^2 F03^2
        assert_eq!(
            shifted.get(1, 2).unwrap().clone(),
            f(1, 2)
                + k2.clone() * f(1, 1) * f(0, 3)
                + (k2.clone() * f(0, 4)).scale(&rat(1, 2))
                + k2.pow(2) * f(0, 3).pow(2)
        );
        // G_2 = F20 + 1/2 k2 F12 + 1/2 k2 F11^2 + 1/8 k2^2 F04
        //       + 1/2 k2^2 F11 F03 + 5/24 k2^3 F03^2
        assert_eq!(
            shifted.get(2, 0).unwrap().clone(),
            f(2, 0)
                + (k2.clone() * f(1, 2)).scale(&rat(1, 2))
                + (k2.clone() * f(1, 1).pow(2)).scale(&rat(1, 2))
                + (k2.pow(2) * f(0, 4)).scale(&rat(1, 8))
                + (k2.pow(2) * f(1, 1) * f(0, 3)).scale(&rat(1, 2))
                + (k2.pow(3) * f(0, 3).pow(2)).scale(&rat(5, 24))
        );
    }

    #[test]
    fn s_transform_group_law_and_inverse() {
        let k1 = parse_linear_poly("k1").unwrap();
        let k2 = parse_linear_poly("k2").unwrap();
        let sum = k1.clone() + k2.clone();
        let theory = Theory::symbolic(4);
        let once = s_transform(&theory, &k1).unwrap();
        let twice = s_transform(&once, &k2).unwrap();
        let direct = s_transform(&theory, &sum).unwrap();
        assert_eq!(twice, direct);

        let kappa = kappa();
        let shifted = s_transform(&theory, &kappa).unwrap();
        let back = s_transform(&shifted, &(-kappa)).unwrap();
        assert_eq!(back, theory);

        // S_0 is the identity
        let zero = Poly::new();
        assert_eq!(s_transform(&theory, &zero).unwrap(), theory);
    }

    #[test]
    fn s_transform_of_symbols_is_tilde_f() {
        let theory = Theory::symbolic(4);
        let shifted = s_transform(&theory, &kappa()).unwrap();
        for (g, n) in stable_range(4) {
            assert_eq!(
                shifted.get(g, n).unwrap().clone(),
                tilde_f(g, n).unwrap(),
                "(g,n)=({g},{n})"
            );
        }
    }

    #[test]
    fn realized_recursion_small_range() {
        for (g, n) in stable_range(3) {
            assert!(check_realized_recursion(g, n).unwrap(), "(g,n)=({g},{n})");
        }
    }

    #[test]
    fn theory_json_round_trip() {
        let theory = Theory::symbolic(3);
        let text = theory.to_json();
        let back = Theory::from_json(&text).unwrap();
        assert_eq!(back, theory);
        assert!(text.starts_with("{\"0,3\":[{\"coeff\":\"1\""));
    }
}

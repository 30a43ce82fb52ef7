//! Finite linear combinations of canonical stable graphs.

use crate::canon::{canonicalize, CanonicalKey};
use crate::coeff::Coeff;
use crate::graph::StableGraph;
use std::collections::BTreeMap;
use std::fmt;

/// A graph sum: map from canonical key to (representative, coefficient) in
/// an exact commutative ring. Zero coefficients are never stored, so
/// equality of maps is equality of sums.
#[derive(Clone, PartialEq, Debug)]
pub struct GraphSum<R: Coeff> {
    terms: BTreeMap<CanonicalKey, (StableGraph, R)>,
}

impl<R: Coeff> GraphSum<R> {
    pub fn zero() -> Self {
        GraphSum {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_graph(g: &StableGraph) -> Self {
        let mut out = GraphSum::zero();
        out.add_graph(g, R::one());
        out
    }

    /// Adds `coeff * graph`, canonicalizing the graph first.
    pub fn add_graph(&mut self, g: &StableGraph, coeff: R) {
        if coeff.is_zero() {
            return;
        }
        let c = canonicalize(g);
        self.add_canonical(c.key, c.rep, coeff);
    }

    pub fn add_canonical(&mut self, key: CanonicalKey, rep: StableGraph, coeff: R) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert((rep, coeff));
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().1.clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.get_mut().1 = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, (rep, c)) in &other.terms {
            out.add_canonical(key.clone(), rep.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-R::one())))
    }

    pub fn scale(&self, factor: &R) -> Self {
        if factor.is_zero() {
            return GraphSum::zero();
        }
        let mut out = GraphSum::zero();
        for (key, (rep, c)) in &self.terms {
            out.add_canonical(key.clone(), rep.clone(), factor.clone() * c.clone());
        }
        out
    }

    /// Bilinear multiplication: disjoint union of representatives, then
    /// canonicalization.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GraphSum::zero();
        for (_, (ga, ca)) in &self.terms {
            for (_, (gb, cb)) in &other.terms {
                out.add_graph(&ga.disjoint_union(gb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Applies a graph-level operator linearly: `f` receives each stored
    /// representative and contributes `coefficient * f(graph)`.
    pub fn apply_linear(&self, f: impl Fn(&StableGraph) -> GraphSum<R>) -> Self {
        let mut out = GraphSum::zero();
        for (_, (g, c)) in &self.terms {
            for (key, (rep, inner)) in f(g).terms {
                out.add_canonical(key, rep, c.clone() * inner);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: &StableGraph) -> R {
        let key = canonicalize(g).key;
        self.coeff_of_key(&key)
    }

    pub fn coeff_of_key(&self, key: &CanonicalKey) -> R {
        self.terms
            .get(key)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(R::zero)
    }

    /// Deterministic iteration in canonical-key order.
    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, &StableGraph, &R)> {
        self.terms.iter().map(|(k, (g, c))| (k, g, c))
    }

    /// JSON: list of `{"coefficient":...,"graph":...}` in key order.
    pub fn to_json(&self) -> String {
        let items: Vec<String> = self
            .iter()
            .map(|(_, g, c)| {
                format!(
                    "{{\"coefficient\":\"{}\",\"graph\":{}}}",
                    c,
                    g.to_json()
                )
            })
            .collect();
        format!("[{}]", items.join(","))
    }
}

impl<R: Coeff> fmt::Display for GraphSum<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (_, g, c)) in self.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({c}) * {}", g.to_json())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::rational::rat;
    use crate::{QSum, Rat};

    fn loop_with_leg() -> StableGraph {
        let mut b = GraphBuilder::new();
        let v = b.vertex(0);
        b.loop_at(v).leg(v, None);
        b.build()
    }

    #[test]
    fn scaling_by_zero_annihilates() {
        let x = QSum::from_graph(&loop_with_leg());
        assert!(x.scale(&Rat::from_integer(0.into())).is_zero());
    }

    #[test]
    fn mul_matches_pairwise_union() {
        // (F_{1,1})^2: the loop x loop key appears with coefficient 1/4
        let v11 = StableGraph::vertex(1, 1);
        let f11 = {
            let mut s = QSum::zero();
            s.add_graph(&v11, rat(1, 1));
            s.add_graph(&loop_with_leg(), rat(1, 2));
            s
        };
        let square = f11.mul(&f11);
        let double_loop = loop_with_leg().disjoint_union(&loop_with_leg());
        assert_eq!(square.coeff(&double_loop), rat(1, 4));
        let cross = v11.disjoint_union(&loop_with_leg());
        assert_eq!(square.coeff(&cross), rat(1, 1));
        assert_eq!(square.coeff(&v11.disjoint_union(&v11)), rat(1, 1));
        assert_eq!(square.n_terms(), 3);
    }

    #[test]
    fn union_order_does_not_matter() {
        let a = StableGraph::vertex(1, 1);
        let b = loop_with_leg();
        let ab = QSum::from_graph(&a.disjoint_union(&b));
        let ba = QSum::from_graph(&b.disjoint_union(&a));
        assert_eq!(ab, ba);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = QSum::from_graph(&loop_with_leg());
        assert!(x.sub(&x).is_zero());
    }
}

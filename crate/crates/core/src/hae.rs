//! Holomorphic-anomaly realization: a graded differential polynomial ring
//! with covariant derivation, the recursive non-holomorphic amplitudes,
//! their holomorphic limits, and the independence checks.
//!
//! Generators: `F03` (weight 3, the trivalent vertex weight), `h11`
//! (weight 1), `E4` (weight -4, holomorphic), `amb[g]` (weight 0, the
//! genus-g integration constant), plus fresh generators `D^k:X` for the
//! iterated holomorphic derivatives; the propagator `kappa` has weight -2.

use crate::error::Result;
use crate::poly::{Monomial, SymbolKey};
use crate::rational::{factorial, rat, rat_i};
use crate::DiffPoly;
use std::collections::HashMap;
use std::sync::RwLock;

/// Symbol of the graded differential ring.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum HSym {
    Kappa,
    Gen(HGen),
}

/// Holomorphic generator with an iterated-derivative count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct HGen {
    pub base: HBase,
    pub dots: u32,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum HBase {
    F03,
    H11,
    E4,
    Amb(u32),
}

impl HBase {
    fn weight(&self) -> i64 {
        match self {
            HBase::F03 => 3,
            HBase::H11 => 1,
            HBase::E4 => -4,
            HBase::Amb(_) => 0,
        }
    }
}

impl HGen {
    pub fn weight(&self) -> i64 {
        self.base.weight() + self.dots as i64
    }

    pub fn render(&self) -> String {
        let base = match &self.base {
            HBase::F03 => "F03".to_string(),
            HBase::H11 => "h11".to_string(),
            HBase::E4 => "E4".to_string(),
            HBase::Amb(g) => format!("amb[{g}]"),
        };
        if self.dots == 0 {
            base
        } else {
            format!("D^{}:{}", self.dots, base)
        }
    }
}

impl HSym {
    pub fn weight(&self) -> i64 {
        match self {
            HSym::Kappa => -2,
            HSym::Gen(g) => g.weight(),
        }
    }
}

impl SymbolKey for HSym {
    fn propagator_degree(&self) -> u32 {
        match self {
            HSym::Kappa => 1,
            HSym::Gen(_) => 0,
        }
    }
    fn render(&self) -> String {
        match self {
            HSym::Kappa => "kappa".into(),
            HSym::Gen(g) => g.render(),
        }
    }
}

pub fn kappa() -> DiffPoly {
    DiffPoly::var(HSym::Kappa)
}

pub fn gen(base: HBase, dots: u32) -> DiffPoly {
    DiffPoly::var(HSym::Gen(HGen { base, dots }))
}

pub fn f03() -> DiffPoly {
    gen(HBase::F03, 0)
}

/// Parses one symbol string (`kappa`, `F03`, `h11`, `E4`, `amb[g]`,
/// `D^k:<gen>`).
pub fn parse_hsym(s: &str) -> Result<HSym> {
    use crate::error::Error;
    let bad = || Error::Parse(format!("invalid symbol `{s}`"));
    if s == "kappa" {
        return Ok(HSym::Kappa);
    }
    let (dots, rest) = match s.strip_prefix("D^") {
        Some(tail) => {
            let (k, rest) = tail.split_once(':').ok_or_else(bad)?;
            (k.parse::<u32>().map_err(|_| bad())?, rest)
        }
        None => (0, s),
    };
    let base = match rest {
        "F03" => HBase::F03,
        "h11" => HBase::H11,
        "E4" => HBase::E4,
        _ => {
            let inner = rest
                .strip_prefix("amb[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            HBase::Amb(inner.parse().map_err(|_| bad())?)
        }
    };
    Ok(HSym::Gen(HGen { base, dots }))
}

/// Covariant derivation `D_t`: Leibniz with
/// `D(κ) = -κ² F03 + E4 F03` and `D(X) = Ď(X) + wt(X) κ F03 X`.
pub fn d_cov(p: &DiffPoly) -> DiffPoly {
    p.derive(&|s: &HSym| match s {
        HSym::Kappa => {
            let k = kappa();
            gen(HBase::E4, 0) * f03() - k.clone() * k * f03()
        }
        HSym::Gen(g) => {
            let fresh = gen(g.base.clone(), g.dots + 1);
            fresh + (kappa() * f03() * gen(g.base.clone(), g.dots)).scale(&rat_i(g.weight()))
        }
    })
}

/// Holomorphic connection `Ď_t = D_t - wt·κ·F03`: Leibniz with
/// `Ď(X)` a fresh generator and `Ď(κ) = κ² F03 + E4 F03`.
pub fn d_check(p: &DiffPoly) -> DiffPoly {
    p.derive(&|s: &HSym| match s {
        HSym::Kappa => {
            let k = kappa();
            gen(HBase::E4, 0) * f03() + k.clone() * k * f03()
        }
        HSym::Gen(g) => gen(g.base.clone(), g.dots + 1),
    })
}

/// Total weight of a monomial.
pub fn monomial_weight(m: &Monomial<HSym>) -> i64 {
    m.factors()
        .iter()
        .map(|(s, e)| s.weight() * *e as i64)
        .sum()
}

/// True when every term has the given weight (the zero polynomial is
/// homogeneous of any weight).
pub fn is_homogeneous(p: &DiffPoly, weight: i64) -> bool {
    p.terms().all(|(m, _)| monomial_weight(m) == weight)
}

/// Engine with memoized amplitude tables; safe for concurrent readers.
pub struct Hae {
    tilde: RwLock<HashMap<(u32, u32), DiffPoly>>,
    holo: RwLock<HashMap<(u32, u32), DiffPoly>>,
}

impl Default for Hae {
    fn default() -> Self {
        Hae::new()
    }
}

impl Hae {
    pub fn new() -> Hae {
        Hae {
            tilde: RwLock::new(HashMap::new()),
            holo: RwLock::new(HashMap::new()),
        }
    }

    /// Non-holomorphic amplitude `t̃F_{g,n}`:
    /// seeds `t̃F_{0,3} = F03`, `t̃F_{1,1} = ½κF03 + h11`; one more leg is
    /// one application of `D_t`; for `g ≥ 2` the valence-0 amplitude is
    /// the dotted-graph sum plus the ambiguity `amb[g]`.
    pub fn tilde_f(&self, g: u32, n: u32) -> Result<DiffPoly> {
        let weight = 2 * g as i64 - 2 + n as i64;
        if weight <= 0 {
            return Err(crate::error::Error::Unstable(weight));
        }
        if let Some(hit) = self.tilde.read().unwrap().get(&(g, n)) {
            return Ok(hit.clone());
        }
        let value = match (g, n) {
            (0, 3) => f03(),
            (1, 1) => (kappa() * f03()).scale(&rat(1, 2)) + gen(HBase::H11, 0),
            (g, 0) => {
                // -Σ_{Γ ≠ V_g} (1/|Aut|) Π t̃F (−κ)^{|E|} + amb[g]
                let mut acc = DiffPoly::new();
                for graph in crate::enumerate::enumerate_connected(g, 0)? {
                    if graph.n_vertices() == 1 && graph.n_edges() == 0 {
                        continue;
                    }
                    let aut = crate::canon::aut_order(&graph);
                    let mut term = DiffPoly::constant(rat_i(-1) / rat_i(aut as i64));
                    for v in 0..graph.n_vertices() {
                        term = term * self.tilde_f(graph.genus_mark(v), graph.valence(v))?;
                    }
                    term = term * (-kappa()).pow(graph.n_edges() as u32);
                    acc += term;
                }
                acc + gen(HBase::Amb(g), 0)
            }
            (g, n) => d_cov(&self.tilde_f(g, n - 1)?),
        };
        self.tilde
            .write()
            .unwrap()
            .entry((g, n))
            .or_insert(value.clone());
        Ok(value)
    }

    /// Holomorphic limit `F_{g,n}`: the induced dual realization
    /// `n! Σ_Γ (1/|Aut|) Π t̃F (−κ)^{|E|}` over all connected (g,n)
    /// classes, fully expanded.
    pub fn holo_f(&self, g: u32, n: u32) -> Result<DiffPoly> {
        let weight = 2 * g as i64 - 2 + n as i64;
        if weight <= 0 {
            return Err(crate::error::Error::Unstable(weight));
        }
        if let Some(hit) = self.holo.read().unwrap().get(&(g, n)) {
            return Ok(hit.clone());
        }
        let mut acc = DiffPoly::new();
        for graph in crate::enumerate::enumerate_connected(g, n)? {
            let aut = crate::canon::aut_order(&graph);
            let mut term = DiffPoly::constant(rat_i(1) / rat_i(aut as i64));
            for v in 0..graph.n_vertices() {
                term = term * self.tilde_f(graph.genus_mark(v), graph.valence(v))?;
            }
            term = term * (-kappa()).pow(graph.n_edges() as u32);
            acc += term;
        }
        let value = acc.scale(&factorial(n));
        self.holo
            .write()
            .unwrap()
            .entry((g, n))
            .or_insert(value.clone());
        Ok(value)
    }

    /// Independence: the holomorphic limit carries no power of `κ`.
    pub fn check_independence(&self, g: u32, n: u32) -> Result<bool> {
        let p = self.holo_f(g, n)?;
        Ok(p.max_degree_where(|s| matches!(s, HSym::Kappa)) == 0)
    }

    /// The derivative lemma for holomorphic limits:
    /// `F_{g,n+1} = Ď_t F_{g,n} + E4·F03·A_{g,n}` with
    /// `A_{g,n} = ½F_{g-1,n+2} + ½ Σ n!/((n₁-1)!(n₂-1)!) F_{g₁,n₁} F_{g₂,n₂}`
    /// over stable splittings with `g₁+g₂ = g`, `n₁+n₂ = n+2`, `n_i ≥ 1`.
    pub fn check_holo_lemma(&self, g: u32, n: u32) -> Result<bool> {
        let lhs = self.holo_f(g, n + 1)? - d_check(&self.holo_f(g, n)?);
        let mut a = DiffPoly::new();
        if g >= 1 {
            a += self.holo_f(g - 1, n + 2)?.scale(&rat(1, 2));
        }
        for g1 in 0..=g {
            for n1 in 1..=(n + 1) {
                let (g2, n2) = (g - g1, n + 2 - n1);
                if 2 * g1 as i64 - 2 + n1 as i64 <= 0 || 2 * g2 as i64 - 2 + n2 as i64 <= 0 {
                    continue;
                }
                let coeff = factorial(n) / (factorial(n1 - 1) * factorial(n2 - 1));
                a += (self.holo_f(g1, n1)? * self.holo_f(g2, n2)?)
                    .scale(&(coeff * rat(1, 2)));
            }
        }
        Ok(lhs == gen(HBase::E4, 0) * f03() * a)
    }

    /// The anomaly recursion in propagator form:
    /// `∂_κ (t̃F_{g,n}/n!) = ½[(1/n!) t̃F_{g-1,n+2} + Σ t̃F_{g₁,n₁+1} t̃F_{g₂,n₂+1}/(n₁!n₂!)]`
    /// with `∂_κ` the formal derivative (holomorphic generators are
    /// `κ`-constants, as licensed by the independence check).
    pub fn check_kappa_recursion(&self, g: u32, n: u32) -> Result<bool> {
        let lhs = self
            .tilde_f(g, n)?
            .partial(&HSym::Kappa)
            .scale(&(rat_i(1) / factorial(n)));
        let mut rhs = DiffPoly::new();
        if g >= 1 {
            rhs += self.tilde_f(g - 1, n + 2)?.scale(&(rat_i(1) / factorial(n)));
        }
        for g1 in 0..=g {
            for n1 in 0..=n {
                let (g2, n2) = (g - g1, n - n1);
                if 2 * g1 as i64 - 2 + n1 as i64 + 1 <= 0
                    || 2 * g2 as i64 - 2 + n2 as i64 + 1 <= 0
                {
                    continue;
                }
                rhs += (self.tilde_f(g1, n1 + 1)? * self.tilde_f(g2, n2 + 1)?)
                    .scale(&(rat_i(1) / (factorial(n1) * factorial(n2))));
            }
        }
        Ok(lhs == rhs.scale(&rat(1, 2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn h11() -> DiffPoly {
        gen(HBase::H11, 0)
    }

    fn e4() -> DiffPoly {
        gen(HBase::E4, 0)
    }

    fn dn(base: HBase, k: u32) -> DiffPoly {
        gen(base, k)
    }

    #[test]
    fn derivation_rules() {
        let k = kappa();
        assert_eq!(d_cov(&k), e4() * f03() - k.clone() * k.clone() * f03());
        assert_eq!(
            d_cov(&f03()),
            dn(HBase::F03, 1) + (k.clone() * f03() * f03()).scale(&rat_i(3))
        );
        assert_eq!(d_cov(&DiffPoly::one()), DiffPoly::new());
    }

    #[test]
    fn split_identity_d_equals_dcheck_plus_weight_term() {
        // D = Ď + wt·κ·F03 on homogeneous elements
        let engine = Hae::new();
        for (g, n) in [(0u32, 3u32), (1, 1), (0, 4), (1, 2)] {
            let p = engine.tilde_f(g, n).unwrap();
            let lhs = d_cov(&p);
            let rhs = d_check(&p) + (kappa() * f03() * p).scale(&rat_i(n as i64));
            assert_eq!(lhs, rhs, "(g,n)=({g},{n})");
        }
    }

    #[test]
    fn tilde_f12_matches_display() {
        let engine = Hae::new();
        let k = kappa();
        let expected = dn(HBase::H11, 1)
            + k.clone() * f03() * h11()
            + (k.clone() * dn(HBase::F03, 1)).scale(&rat(1, 2))
            + k.clone() * k.clone() * f03() * f03()
            + (e4() * f03() * f03()).scale(&rat(1, 2));
        assert_eq!(engine.tilde_f(1, 2).unwrap(), expected);
    }

    #[test]
    fn tilde_f2_matches_genus2_closed_formula() {
        // the genus-2 amplitude written with S2 -> kappa and f^(2) -> amb[2]
        let engine = Hae::new();
        let t = |g, n| engine.tilde_f(g, n).unwrap();
        let k = kappa();
        let expected = (k.clone() * t(1, 2)).scale(&rat(1, 2))
            + (k.clone() * t(1, 1) * t(1, 1)).scale(&rat(1, 2))
            - (k.pow(2) * t(0, 4)).scale(&rat(1, 8))
            - (k.pow(2) * t(1, 1) * t(0, 3)).scale(&rat(1, 2))
            + (k.pow(3) * t(0, 3) * t(0, 3)).scale(&rat(5, 24))
            + gen(HBase::Amb(2), 0);
        assert_eq!(engine.tilde_f(2, 0).unwrap(), expected);
    }

    #[test]
    fn tilde_f3_matches_genus3_closed_formula() {
        let engine = Hae::new();
        let t = |g, n| engine.tilde_f(g, n).unwrap();
        let k = kappa();
        let expected = k.clone() * t(2, 1) * t(1, 1)
            - (k.pow(2) * t(2, 1) * t(0, 3)).scale(&rat(1, 2))
            + (k.clone() * t(2, 2)).scale(&rat(1, 2))
            + (k.pow(3) * t(1, 1).pow(3) * t(0, 3)).scale(&rat(1, 6))
            - (k.pow(2) * t(1, 2) * t(1, 1).pow(2)).scale(&rat(1, 2))
            - (k.pow(4) * t(1, 1).pow(2) * t(0, 3).pow(2)).scale(&rat(1, 2))
            + (k.pow(3) * t(1, 1).pow(2) * t(0, 4)).scale(&rat(1, 4))
            + k.pow(3) * t(1, 2) * t(1, 1) * t(0, 3)
            - (k.pow(2) * t(1, 3) * t(1, 1)).scale(&rat(1, 2))
            - (k.pow(2) * t(1, 2).pow(2)).scale(&rat(1, 4))
            + (k.pow(5) * t(1, 1) * t(0, 3).pow(3)).scale(&rat(5, 8))
            - (k.pow(4) * t(1, 1) * t(0, 4) * t(0, 3)).scale(&rat(2, 3))
            - (k.pow(4) * t(1, 2) * t(0, 3).pow(2)).scale(&rat(5, 8))
            + (k.pow(3) * t(1, 2) * t(0, 4)).scale(&rat(1, 4))
            + (k.pow(3) * t(1, 3) * t(0, 3)).scale(&rat(5, 12))
            + (k.pow(3) * t(0, 5) * t(1, 1)).scale(&rat(1, 8))
            - (k.pow(2) * t(1, 4)).scale(&rat(1, 8))
            - (k.pow(4) * t(0, 5) * t(0, 3)).scale(&rat(7, 48))
            + (k.pow(5) * t(0, 4) * t(0, 3).pow(2)).scale(&rat(25, 48))
            - (k.pow(6) * t(0, 3).pow(4)).scale(&rat(5, 16))
            - (k.pow(4) * t(0, 4).pow(2)).scale(&rat(1, 12))
            + (k.pow(3) * t(0, 6)).scale(&rat(1, 48))
            + gen(HBase::Amb(3), 0);
        assert_eq!(engine.tilde_f(3, 0).unwrap(), expected);
    }

    #[test]
    fn holo_limits_match_displays() {
        let engine = Hae::new();
        assert_eq!(engine.holo_f(0, 4).unwrap(), dn(HBase::F03, 1));
        assert_eq!(
            engine.holo_f(0, 5).unwrap(),
            dn(HBase::F03, 2) + (e4() * f03().pow(3)).scale(&rat_i(3))
        );
        assert_eq!(
            engine.holo_f(1, 2).unwrap(),
            dn(HBase::H11, 1) + (e4() * f03().pow(2)).scale(&rat(1, 2))
        );
        // F_{0,6} = Ď F_{0,5} + 10 E4 F03^2 (t̃F_{0,4} - 3 κ F03^2)
        let expected = d_check(&engine.holo_f(0, 5).unwrap())
            + (e4()
                * f03().pow(2)
                * (engine.tilde_f(0, 4).unwrap() - (kappa() * f03().pow(2)).scale(&rat_i(3))))
            .scale(&rat_i(10));
        assert_eq!(engine.holo_f(0, 6).unwrap(), expected);
    }

    #[test]
    fn holo_genus_amplitudes_are_ambiguities() {
        let engine = Hae::new();
        assert_eq!(engine.holo_f(2, 0).unwrap(), gen(HBase::Amb(2), 0));
        assert_eq!(engine.holo_f(3, 0).unwrap(), gen(HBase::Amb(3), 0));
    }

    #[test]
    fn independence_small_range() {
        let engine = Hae::new();
        for (g, n) in crate::realize::stable_range(3) {
            assert!(engine.check_independence(g, n).unwrap(), "(g,n)=({g},{n})");
        }
    }

    #[test]
    fn holo_lemma_examples() {
        let engine = Hae::new();
        assert!(engine.check_holo_lemma(0, 4).unwrap());
        assert!(engine.check_holo_lemma(1, 1).unwrap());
        assert!(engine.check_holo_lemma(0, 5).unwrap());
        assert!(engine.check_holo_lemma(1, 2).unwrap());
        assert!(engine.check_holo_lemma(2, 0).unwrap());
    }

    #[test]
    fn kappa_recursion_small_range() {
        let engine = Hae::new();
        for (g, n) in crate::realize::stable_range(3) {
            assert!(
                engine.check_kappa_recursion(g, n).unwrap(),
                "(g,n)=({g},{n})"
            );
        }
    }

    #[test]
    fn weight_homogeneity() {
        let engine = Hae::new();
        for (g, n) in crate::realize::stable_range(4) {
            assert!(
                is_homogeneous(&engine.tilde_f(g, n).unwrap(), n as i64),
                "tilde (g,n)=({g},{n})"
            );
            assert!(
                is_homogeneous(&engine.holo_f(g, n).unwrap(), n as i64),
                "holo (g,n)=({g},{n})"
            );
        }
        // the derivation raises weight by exactly one
        let p = engine.tilde_f(1, 1).unwrap();
        assert!(is_homogeneous(&d_cov(&p), 2));
    }

    #[test]
    fn ambiguity_enters_additively() {
        let engine = Hae::new();
        for g in [2u32, 3] {
            let diff = engine.tilde_f(g, 0).unwrap() - gen(HBase::Amb(g), 0);
            let has_amb = diff.terms().any(|(m, _)| {
                m.factors()
                    .iter()
                    .any(|(s, _)| matches!(s, HSym::Gen(gn) if gn.base == HBase::Amb(g)))
            });
            assert!(!has_amb, "amb[{g}] must appear only additively");
        }
    }

    #[test]
    fn symbol_round_trip() {
        for s in ["kappa", "F03", "h11", "E4", "amb[2]", "D^3:F03", "D^1:amb[2]"] {
            assert_eq!(parse_hsym(s).unwrap().render(), s);
        }
    }
}

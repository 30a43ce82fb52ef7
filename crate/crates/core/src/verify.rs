//! The verification suite: every identity the engine promises, bundled as
//! named checks with one pass/fail outcome each. The CLI `verify`
//! subcommand and the acceptance test target both drive these.

use crate::canon::{aut_order, oracle};
use crate::enumerate::enumerate_connected;
use crate::graph::{GraphBuilder, StableGraph};
use crate::hae::Hae;
use crate::ops;
use crate::rational::{factorial, rat, rat_i};
use crate::realize::{self, stable_range, Theory};
use crate::sym::Sym;
use crate::transform;
use crate::wick;
use crate::{Poly, QSum, Rat};
use std::time::{Duration, Instant};

/// Outcome of one named criterion.
#[derive(Clone, Debug)]
pub struct Report {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Report {
    pub fn line(&self) -> String {
        format!(
            "{} {:<12} {:>8.2?}  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

pub const SUITES: &[&str] = &[
    "enumeration",
    "aut-oracle",
    "recursions",
    "duality",
    "transforms",
    "realization",
    "gaussian",
    "grouplaw",
    "hae",
];

fn run(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Report {
    let start = Instant::now();
    let (pass, detail) = f();
    Report {
        name,
        pass,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Criterion 1: class counts and the genus-2 automorphism orders.
pub fn check_enumeration() -> Report {
    run("enumeration", || {
        let counts: Vec<usize> = [(0u32, 3u32), (1, 1), (1, 2), (2, 0)]
            .iter()
            .map(|&(g, n)| enumerate_connected(g, n).map(|v| v.len()).unwrap_or(0))
            .collect();
        let mut auts: Vec<u64> = enumerate_connected(2, 0)
            .map(|v| v.iter().map(aut_order).collect())
            .unwrap_or_default();
        auts.sort_unstable();
        let pass = counts == vec![1, 2, 5, 7] && auts == vec![1, 2, 2, 2, 8, 8, 12];
        (
            pass,
            format!("counts={counts:?} genus-2 auts={auts:?}"),
        )
    })
}

/// Criterion 2: the class-based automorphism count equals exhaustive
/// permutation counting for every graph with at most 8 half-edges in the
/// stability range `2g-2+n <= bound-1` (3 at the default bound).
pub fn check_aut_oracle(bound: u32) -> Report {
    run("aut-oracle", || {
        let mut checked = 0usize;
        for (g, n) in stable_range(bound.saturating_sub(1).max(1)) {
            for graph in enumerate_connected(g, n).unwrap() {
                let half_edges = 2 * graph.n_edges() + graph.n_legs();
                if half_edges > 8 {
                    continue;
                }
                let fast = aut_order(&graph);
                let brute = oracle::brute_force_aut(&graph, None);
                if fast != brute {
                    return (
                        false,
                        format!(
                            "mismatch {} vs {} on {}",
                            fast,
                            brute,
                            graph.to_json()
                        ),
                    );
                }
                checked += 1;
            }
        }
        (true, format!("{checked} graphs checked"))
    })
}

/// Criterion 3: Lemma `D F̂ = (n+1) F̂` and the quadratic recursion for
/// `2g-2+n <= 4`; labelled versions at N=2 for `2g-2+Σl <= 2`.
pub fn check_recursions(bound: u32) -> Report {
    run("recursions", || {
        for (g, n) in stable_range(bound) {
            if !ops::check_lemma_d(g, n) {
                return (false, format!("lemma D fails at ({g},{n})"));
            }
            if !ops::check_recursion_k(g, n) {
                return (false, format!("recursion K fails at ({g},{n})"));
            }
        }
        // the explicit genus-2 identity
        let f2 = ops::abstract_f::<Rat>(2, 0).unwrap();
        let lhs = f2.apply_linear(ops::op_k);
        let f12 = ops::abstract_f::<Rat>(1, 2).unwrap();
        let f11 = ops::abstract_f::<Rat>(1, 1).unwrap();
        if lhs != f12.add(&f11.mul(&f11).scale(&rat(1, 2))) {
            return (false, "K F2 != F12 + 1/2 F11^2".into());
        }
        for (g, ls) in labelled_range(bound.saturating_sub(2).max(1)) {
            for j in 1..=2u8 {
                if !ops::check_lemma_d_labelled(j, g, &ls, 2) {
                    return (false, format!("labelled lemma fails at ({g};{ls:?}) j={j}"));
                }
            }
            for (i, j) in [(1u8, 1u8), (1, 2), (2, 2)] {
                if !ops::check_recursion_k_labelled(i, j, g, &ls, 2) {
                    return (
                        false,
                        format!("labelled recursion fails at ({g};{ls:?}) ij={i}{j}"),
                    );
                }
            }
        }
        (
            true,
            format!(
                "unlabelled bound {bound}, labelled N=2 bound {}",
                bound.saturating_sub(2).max(1)
            ),
        )
    })
}

/// All `(g, [l1,l2])` with `0 < 2g-2+l1+l2 <= bound` at N=2.
fn labelled_range(bound: u32) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    for (g, n) in stable_range(bound) {
        for ls in wick::vectors_with_sum(2, n) {
            out.push((g, ls));
        }
    }
    out
}

/// Criterion 4: the duality map squares to the identity on every
/// connected class with `2g-2+n <= 4`, dual free energies collapse to
/// single vertices, and the six genus-2 expansions hold term by term.
pub fn check_duality(bound: u32) -> Report {
    run("duality", || {
        for (g, n) in stable_range(bound) {
            for graph in enumerate_connected(g, n).unwrap() {
                let twice = transform::duality_sum(&transform::duality::<Rat>(&graph));
                if twice != QSum::from_graph(&graph) {
                    return (
                        false,
                        format!("involution fails on {}", graph.to_json()),
                    );
                }
            }
            let dual = transform::dual_abstract_f(g, n).unwrap();
            let vertex = QSum::from_graph(&StableGraph::vertex(g, n))
                .scale(&(rat_i(1) / factorial(n)));
            if dual != vertex {
                return (false, format!("dual free energy fails at ({g},{n})"));
            }
        }
        if !genus2_expansions_hold() {
            return (false, "genus-2 dotted expansions mismatch".into());
        }
        (
            true,
            format!("involution + collapse on bound {bound}, genus-2 table"),
        )
    })
}

fn genus2_expansions_hold() -> bool {
    let vertex = |g: u32| StableGraph::vertex(g, 0);
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
    let fig8 = {
        let mut b = GraphBuilder::new();
        let v = b.vertex(0);
        b.loop_at(v).loop_at(v);
        b.build()
    };
    let dumbbell = {
        let mut b = GraphBuilder::new();
        let v0 = b.vertex(0);
        let v1 = b.vertex(0);
        b.loop_at(v0).loop_at(v1).edge(v0, v1);
        b.build()
    };
    let theta = {
        let mut b = GraphBuilder::new();
        let v0 = b.vertex(0);
        let v1 = b.vertex(0);
        b.edge(v0, v1).edge(v0, v1).edge(v0, v1);
        b.build()
    };
    let expect = |g: &StableGraph, rows: &[(&StableGraph, Rat)]| -> bool {
        let d = transform::duality::<Rat>(g);
        d.n_terms() == rows.len() && rows.iter().all(|(h, c)| d.coeff(h) == *c)
    };
    // the dotted vertex expansion is the full free energy
    let phi_vertex = transform::duality::<Rat>(&vertex(2));
    if phi_vertex != ops::abstract_f::<Rat>(2, 0).unwrap() {
        return false;
    }
    expect(
        &loop_on_g1,
        &[
            (&loop_on_g1, rat_i(-1)),
            (&fig8, rat(-1, 2)),
            (&g1_g0loop, rat_i(-1)),
            (&dumbbell, rat(-1, 2)),
            (&theta, rat(-1, 2)),
        ],
    ) && expect(
        &two_g1,
        &[
            (&two_g1, rat_i(-1)),
            (&g1_g0loop, rat_i(-1)),
            (&dumbbell, rat(-1, 4)),
        ],
    ) && expect(
        &g1_g0loop,
        &[(&g1_g0loop, rat_i(1)), (&dumbbell, rat(1, 2))],
    ) && expect(
        &fig8,
        &[
            (&fig8, rat_i(1)),
            (&dumbbell, rat_i(1)),
            (&theta, rat_i(2)),
        ],
    ) && expect(&dumbbell, &[(&dumbbell, rat_i(-1))])
        && expect(&theta, &[(&theta, rat_i(-1))])
}

/// Criterion 5: the addition law `Φ_{ε1} Φ_{ε2} = Φ_{ε1+ε2}` on vertices
/// for `2g-2+n <= 3` with formal parameters.
pub fn check_transforms(bound: u32) -> Report {
    run("transforms", || {
        let e1 = Poly::var(Sym::Scalar("e1".into()));
        let e2 = Poly::var(Sym::Scalar("e2".into()));
        let sum = e1.clone() + e2.clone();
        for (g, n) in stable_range(bound.saturating_sub(1).max(1)) {
            let vertex = StableGraph::vertex(g, n);
            let inner = transform::graph_transform::<Poly>(&vertex, &e2);
            let composed = transform::transform_sum(&inner, &e1);
            let direct = transform::vertex_expansion::<Poly>(g, n, &sum).unwrap();
            if composed != direct {
                return (false, format!("addition law fails at ({g},{n})"));
            }
        }
        (
            true,
            format!(
                "formal ε1, ε2 on vertices, bound {}",
                bound.saturating_sub(1).max(1)
            ),
        )
    })
}

/// Criterion 6: realization displays, the genus-2/3 recoveries, and
/// `κ`-freeness of the dual realization on bound 4.
pub fn check_realization(bound: u32) -> Report {
    run("realization", || {
        let f = |g, n| Poly::var(Sym::F(g, n));
        let kappa = Poly::var(Sym::Kappa);
        if realize::hat_f(1, 1).unwrap().render() != "F[1,1] + 1/2*kappa*F[0,3]" {
            return (false, "hat F_{1,1} display mismatch".into());
        }
        let expected_04 = f(0, 4).scale(&rat(1, 24))
            + (kappa.clone() * f(0, 3).pow(2)).scale(&rat(1, 8));
        if realize::hat_f(0, 4).unwrap() != expected_04 {
            return (false, "hat F_{0,4} mismatch".into());
        }
        let expected_12 = f(1, 2).scale(&rat(1, 2))
            + (kappa.clone() * f(0, 4)).scale(&rat(1, 4))
            + (kappa.clone() * f(1, 1) * f(0, 3)).scale(&rat(1, 2))
            + (kappa.clone() * kappa.clone() * f(0, 3).pow(2)).scale(&rat(1, 2));
        if realize::hat_f(1, 2).unwrap() != expected_12 {
            return (false, "hat F_{1,2} mismatch".into());
        }
        // inverse relations
        let rhs = realize::hat_f(0, 4).unwrap().scale(&rat_i(24))
            - (kappa.clone() * realize::hat_f(0, 3).unwrap().pow(2)).scale(&rat_i(108));
        if rhs != f(0, 4) {
            return (false, "F[0,4] inverse relation mismatch".into());
        }
        for (g, n) in stable_range(bound) {
            let dual = realize::dual_hat_f(g, n).unwrap();
            if dual != f(g, n) {
                return (false, format!("dual realization not F[{g},{n}]"));
            }
        }
        (
            true,
            format!("displays, F2/F3 recovery, kappa-free duals on bound {bound}"),
        )
    })
}

/// Criterion 7: the Wick oracle reproduces the graph-sum transform:
/// one-dimensional on `2g-2+n <= 4`, N=2 labelled on `2g-2+Σl <= 2`.
pub fn check_gaussian(bound: u32) -> Report {
    run("gaussian", || {
        let theory = Theory::symbolic(bound);
        let kappa = Poly::var(Sym::Kappa);
        let via_graphs = realize::s_transform(&theory, &kappa).unwrap();
        let via_wick = wick::wick_gaussian(&theory, &kappa, bound).unwrap();
        if via_wick != via_graphs {
            return (false, "one-dimensional oracle mismatch".into());
        }
        let n_labels = 2u8;
        let labelled_bound = bound.saturating_sub(2).max(1);
        let theory2 = wick::TheoryN::symbolic(n_labels, labelled_bound);
        let matrix: Vec<Vec<Poly>> = (1..=n_labels)
            .map(|i| {
                (1..=n_labels)
                    .map(|j| Poly::var(Sym::kappa_l(i, j)))
                    .collect()
            })
            .collect();
        let out = wick::wick_gaussian_n(&theory2, &matrix, labelled_bound).unwrap();
        for (g, n) in stable_range(labelled_bound) {
            for ls in wick::vectors_with_sum(n_labels as usize, n) {
                let mut realized = realize::hat_f_labelled(g, &ls, n_labels).unwrap();
                for &l in &ls {
                    realized = realized.scale(&factorial(l));
                }
                let found = out.vals.get(&(g, ls.clone())).cloned().unwrap_or_default();
                if found != realized {
                    return (false, format!("N=2 oracle mismatch at ({g};{ls:?})"));
                }
            }
        }
        (
            true,
            format!("1-dim bound {bound} + N=2 bound {labelled_bound}, coefficient-by-coefficient"),
        )
    })
}

/// Criterion 8: the group law `S_{κ1} S_{κ2} = S_{κ1+κ2}`, the inverse
/// `S_{-κ} S_κ = id`, and the worked composition examples.
pub fn check_grouplaw(bound: u32) -> Report {
    run("grouplaw", || {
        let theory = Theory::symbolic(bound);
        let k1 = Poly::var(Sym::Scalar("k1".into()));
        let k2 = Poly::var(Sym::Scalar("k2".into()));
        let composed =
            realize::s_transform(&realize::s_transform(&theory, &k1).unwrap(), &k2).unwrap();
        let direct = realize::s_transform(&theory, &(k1.clone() + k2.clone())).unwrap();
        if composed != direct {
            return (false, "composition law fails".into());
        }
        let kappa = Poly::var(Sym::Kappa);
        let there = realize::s_transform(&theory, &kappa).unwrap();
        let back = realize::s_transform(&there, &(-kappa)).unwrap();
        if back != theory {
            return (false, "inverse law fails".into());
        }
        // worked examples of the composed theory
        let f = |g, n| Poly::var(Sym::F(g, n));
        let ks = k1.clone() + k2.clone();
        let g11 = composed.get(1, 1).unwrap().clone();
        if g11 != f(1, 1) + (ks.clone() * f(0, 3)).scale(&rat(1, 2)) {
            return (false, "G_{1,1} example mismatch".into());
        }
        let g04 = composed.get(0, 4).unwrap().clone();
        if g04 != f(0, 4) + (ks.clone() * f(0, 3).pow(2)).scale(&rat_i(3)) {
            return (false, "G_{0,4} example mismatch".into());
        }
        let g12 = composed.get(1, 2).unwrap().clone();
        if g12
            != f(1, 2)
                + ks.clone() * f(1, 1) * f(0, 3)
                + (ks.clone() * f(0, 4)).scale(&rat(1, 2))
                + ks.pow(2) * f(0, 3).pow(2)
        {
            return (false, "G_{1,2} example mismatch".into());
        }
        let g2 = composed.get(2, 0).unwrap().clone();
        if g2
            != f(2, 0)
                + (ks.clone() * f(1, 2)).scale(&rat(1, 2))
                + (ks.clone() * f(1, 1).pow(2)).scale(&rat(1, 2))
                + (ks.pow(2) * f(0, 4)).scale(&rat(1, 8))
                + (ks.pow(2) * f(1, 1) * f(0, 3)).scale(&rat(1, 2))
                + (ks.pow(3) * f(0, 3).pow(2)).scale(&rat(5, 24))
        {
            return (false, "G_2 example mismatch".into());
        }
        (
            true,
            format!("group law + inverse + worked compositions, bound {bound}"),
        )
    })
}

/// Criterion 9: anomaly-equation realization — the four holomorphic-limit
/// displays, independence and weight homogeneity on bound 4, the
/// genus-2/3 amplitude tables, and the propagator recursion on bound 3.
pub fn check_hae(bound: u32) -> Report {
    run("hae", || {
        use crate::hae::{d_check, f03, gen, is_homogeneous, kappa, HBase};
        let engine = Hae::new();
        let e4 = gen(HBase::E4, 0);
        if engine.holo_f(0, 4).unwrap() != gen(HBase::F03, 1) {
            return (false, "F_{0,4} display mismatch".into());
        }
        if engine.holo_f(0, 5).unwrap()
            != gen(HBase::F03, 2) + (e4.clone() * f03().pow(3)).scale(&rat_i(3))
        {
            return (false, "F_{0,5} display mismatch".into());
        }
        if engine.holo_f(1, 2).unwrap()
            != gen(HBase::H11, 1) + (e4.clone() * f03().pow(2)).scale(&rat(1, 2))
        {
            return (false, "F_{1,2} display mismatch".into());
        }
        let f06 = d_check(&engine.holo_f(0, 5).unwrap())
            + (e4.clone()
                * f03().pow(2)
                * (engine.tilde_f(0, 4).unwrap() - (kappa() * f03().pow(2)).scale(&rat_i(3))))
            .scale(&rat_i(10));
        if engine.holo_f(0, 6).unwrap() != f06 {
            return (false, "F_{0,6} display mismatch".into());
        }
        for (g, n) in stable_range(bound) {
            match engine.check_independence(g, n) {
                Ok(true) => {}
                _ => return (false, format!("independence fails at ({g},{n})")),
            }
            if !is_homogeneous(&engine.tilde_f(g, n).unwrap(), n as i64)
                || !is_homogeneous(&engine.holo_f(g, n).unwrap(), n as i64)
            {
                return (false, format!("weight homogeneity fails at ({g},{n})"));
            }
        }
        // genus-2 and genus-3 amplitudes against the closed formulas
        if !kz_formulas_hold(&engine) {
            return (false, "genus-2/3 amplitude tables mismatch".into());
        }
        for (g, n) in stable_range(bound.saturating_sub(1).max(1)) {
            match engine.check_kappa_recursion(g, n) {
                Ok(true) => {}
                _ => return (false, format!("kappa recursion fails at ({g},{n})")),
            }
        }
        (
            true,
            format!(
                "displays + independence + homogeneity (bound {bound}), recursion (bound {})",
                bound.saturating_sub(1).max(1)
            ),
        )
    })
}

fn kz_formulas_hold(engine: &Hae) -> bool {
    use crate::hae::{gen, kappa, HBase};
    let t = |g, n| engine.tilde_f(g, n).unwrap();
    let k = kappa();
    let f2 = (k.clone() * t(1, 2)).scale(&rat(1, 2))
        + (k.clone() * t(1, 1) * t(1, 1)).scale(&rat(1, 2))
        - (k.pow(2) * t(0, 4)).scale(&rat(1, 8))
        - (k.pow(2) * t(1, 1) * t(0, 3)).scale(&rat(1, 2))
        + (k.pow(3) * t(0, 3) * t(0, 3)).scale(&rat(5, 24))
        + gen(HBase::Amb(2), 0);
    if engine.tilde_f(2, 0).unwrap() != f2 {
        return false;
    }
    let f3 = k.clone() * t(2, 1) * t(1, 1)
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
    engine.tilde_f(3, 0).unwrap() == f3
}

/// Runs one suite by name (or `all`) at the given stability bound; the
/// acceptance bound is 4.
pub fn run_suite(name: &str, bound: u32) -> Option<Vec<Report>> {
    let single = |r: Report| Some(vec![r]);
    match name {
        "enumeration" => single(check_enumeration()),
        "aut-oracle" => single(check_aut_oracle(bound)),
        "recursions" => single(check_recursions(bound)),
        "duality" => single(check_duality(bound)),
        "transforms" => single(check_transforms(bound)),
        "realization" => single(check_realization(bound)),
        "gaussian" => single(check_gaussian(bound)),
        "grouplaw" => single(check_grouplaw(bound)),
        "hae" => single(check_hae(bound)),
        "all" => Some(vec![
            check_enumeration(),
            check_aut_oracle(bound),
            check_recursions(bound),
            check_duality(bound),
            check_transforms(bound),
            check_realization(bound),
            check_gaussian(bound),
            check_grouplaw(bound),
            check_hae(bound),
        ]),
        _ => None,
    }
}


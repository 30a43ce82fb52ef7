//! Wick-pairing oracle for the formal Gaussian integral representation.
//!
//! The oracle expands the exponential of the interaction terms in a graded
//! commutative algebra, replaces Gaussian moments by sums over pairings
//! (each pair of legs contributing the propagator), and takes the
//! logarithm to extract connected contributions. It never touches the
//! graph enumerator, so it is an independent cross-check of the
//! realization by graph sums.

use crate::error::{Error, Result};
use crate::rational::{factorial, rat_i};
use crate::realize::{stable_range, Theory};
use crate::sym::Sym;
use crate::{Poly, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Grading of a term: power of the genus-tracking variable (`2g-2` plus
/// two per contraction) and the per-label powers of the source variables
/// `z_j` and of the yet-unpaired fluctuation variables `ξ_j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Grade {
    lambda: i64,
    z: Vec<u32>,
    xi: Vec<u32>,
}

impl Grade {
    fn weight(&self) -> i64 {
        self.lambda
            + self.z.iter().map(|&a| a as i64).sum::<i64>()
            + self.xi.iter().map(|&a| a as i64).sum::<i64>()
    }

    fn mul(&self, other: &Grade) -> Grade {
        Grade {
            lambda: self.lambda + other.lambda,
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Truncated element of the graded algebra.
#[derive(Clone, Debug)]
struct Series {
    n: usize,
    bound: i64,
    terms: BTreeMap<Grade, Poly>,
}

impl Series {
    fn zero(n: usize, bound: i64) -> Series {
        Series {
            n,
            bound,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, grade: Grade, poly: Poly) {
        if poly.is_zero() || grade.weight() > self.bound {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(grade) {
            Entry::Vacant(e) => {
                e.insert(poly);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + poly;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (g, p) in &other.terms {
            out.add_term(g.clone(), p.clone());
        }
        out
    }

    fn mul(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.n, self.bound);
        for (ga, pa) in &self.terms {
            for (gb, pb) in &other.terms {
                let grade = ga.mul(gb);
                if grade.weight() > self.bound {
                    continue;
                }
                out.add_term(grade, pa.clone() * pb.clone());
            }
        }
        out
    }

    fn scale(&self, c: &Rat) -> Series {
        let mut out = Series::zero(self.n, self.bound);
        for (g, p) in &self.terms {
            out.add_term(g.clone(), p.scale(c));
        }
        out
    }

    /// `exp` of a series with all weights >= 1.
    fn exp(&self) -> Series {
        debug_assert!(self.terms.keys().all(|g| g.weight() >= 1));
        let mut out = Series::zero(self.n, self.bound);
        out.add_term(
            Grade {
                lambda: 0,
                z: vec![0; self.n],
                xi: vec![0; self.n],
            },
            Poly::one(),
        );
        let mut power = out.clone();
        let mut k = 1u32;
        loop {
            power = power.mul(self);
            if power.terms.is_empty() {
                return out;
            }
            out = out.add(&power.scale(&(rat_i(1) / factorial(k))));
            k += 1;
        }
    }

    /// `log` of a series with constant term 1.
    fn log(&self) -> Series {
        let mut x = self.clone();
        let unit = Grade {
            lambda: 0,
            z: vec![0; self.n],
            xi: vec![0; self.n],
        };
        let const_term = x.terms.remove(&unit);
        debug_assert_eq!(const_term.map(|p| p.render()), Some("1".into()));
        let mut out = Series::zero(self.n, self.bound);
        let mut power = x.clone();
        let mut k = 1i64;
        loop {
            if power.terms.is_empty() {
                return out;
            }
            let sign = if k % 2 == 1 { rat_i(1) } else { rat_i(-1) };
            out = out.add(&power.scale(&(sign / rat_i(k))));
            power = power.mul(&x);
            k += 1;
        }
    }
}

/// Gaussian moment of the ξ-multiset `m` with propagator matrix `kappa`
/// (symmetric, 1-based labels): sum over perfect pairings, each pair
/// `(i,j)` contributing `kappa[i][j]`.
fn moment(m: &mut Vec<u32>, kappa: &[Vec<Poly>]) -> Poly {
    let total: u32 = m.iter().sum();
    if total == 0 {
        return Poly::one();
    }
    if total % 2 == 1 {
        return Poly::zero();
    }
    let i = m.iter().position(|&c| c > 0).unwrap();
    m[i] -= 1;
    let mut acc = Poly::zero();
    for j in i..m.len() {
        if m[j] == 0 {
            continue;
        }
        let ways = rat_i(m[j] as i64);
        m[j] -= 1;
        acc += (kappa[i][j].clone() * moment(m, kappa)).scale(&ways);
        m[j] += 1;
    }
    m[i] += 1;
    acc
}

/// N-dimensional field theory for the labelled oracle: weights
/// `F_{g;l1..lN}` in the `t̃F` normalization.
#[derive(Clone, PartialEq, Debug)]
pub struct TheoryN {
    pub n_labels: u8,
    pub bound: u32,
    pub vals: BTreeMap<(u32, Vec<u32>), Poly>,
}

impl TheoryN {
    /// Symbolic N-dimensional theory with weights `F[g;l1..lN]`.
    pub fn symbolic(n_labels: u8, bound: u32) -> TheoryN {
        let mut vals = BTreeMap::new();
        for (g, n) in stable_range(bound) {
            for ls in vectors_with_sum(n_labels as usize, n) {
                let tag: Vec<u8> = ls.iter().map(|&l| l as u8).collect();
                vals.insert((g, ls), Poly::var(Sym::FL(g, tag)));
            }
        }
        TheoryN {
            n_labels,
            bound,
            vals,
        }
    }
}

/// All vectors of the given length with the given sum.
pub fn vectors_with_sum(len: usize, sum: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if sum == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=sum {
        for mut rest in vectors_with_sum(len - 1, sum - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Evaluates the formal Gaussian integral of the N-dimensional theory by
/// Wick pairing and extracts connected contributions; the result is again
/// a theory in the `t̃F` normalization. Must agree with the labelled graph
/// realization term by term.
pub fn wick_gaussian_n(
    theory: &TheoryN,
    kappa: &[Vec<Poly>],
    bound: u32,
) -> Result<TheoryN> {
    if bound > 8 {
        return Err(Error::Truncation(bound));
    }
    let n = theory.n_labels as usize;
    if kappa.len() != n || kappa.iter().any(|row| row.len() != n) {
        return Err(Error::Parse("propagator matrix must be N x N".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if kappa[i][j] != kappa[j][i] {
                return Err(Error::Parse("propagator matrix must be symmetric".into()));
            }
        }
    }

    // interaction: sum over stable (g; l) of
    //   lambda^{2g-2} F_{g;l} prod_j (z_j + xi_j)^{l_j} / prod_j l_j!
    let mut interaction = Series::zero(n, bound as i64);
    for ((g, ls), weight) in &theory.vals {
        if 2 * *g as i64 - 2 + ls.iter().map(|&l| l as i64).sum::<i64>() > bound as i64 {
            continue;
        }
        for js in splits_up_to(ls) {
            let mut coeff = rat_i(1);
            for (l, j) in ls.iter().zip(&js) {
                coeff /= factorial(l - j) * factorial(*j);
            }
            let grade = Grade {
                lambda: 2 * *g as i64 - 2,
                z: ls.iter().zip(&js).map(|(l, j)| l - j).collect(),
                xi: js.clone(),
            };
            interaction.add_term(grade, weight.scale(&coeff));
        }
    }

    // exp, then pair all xi's, then log
    let expanded = interaction.exp();
    let mut paired = Series::zero(n, bound as i64);
    for (grade, poly) in &expanded.terms {
        let xi_total: u32 = grade.xi.iter().sum();
        if xi_total % 2 == 1 {
            continue;
        }
        let mut m = grade.xi.clone();
        let pairing = moment(&mut m, kappa);
        if pairing.is_zero() {
            continue;
        }
        let new_grade = Grade {
            lambda: grade.lambda + xi_total as i64,
            z: grade.z.clone(),
            xi: vec![0; n],
        };
        paired.add_term(new_grade, poly.clone() * pairing);
    }
    let connected = paired.log();

    let mut out = TheoryN {
        n_labels: theory.n_labels,
        bound,
        vals: BTreeMap::new(),
    };
    for (grade, poly) in &connected.terms {
        debug_assert!(grade.xi.iter().all(|&x| x == 0));
        debug_assert_eq!(grade.lambda.rem_euclid(2), 0);
        let g = (grade.lambda + 2) / 2;
        debug_assert!(g >= 0);
        let mut norm = poly.clone();
        for &l in &grade.z {
            norm = norm.scale(&factorial(l));
        }
        out.vals.insert((g as u32, grade.z.clone()), norm);
    }
    Ok(out)
}

fn splits_up_to(ls: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &l in ls {
        let mut next = Vec::new();
        for prefix in &out {
            for j in 0..=l {
                let mut ext = prefix.clone();
                ext.push(j);
                next.push(ext);
            }
        }
        out = next;
    }
    out
}

/// One-dimensional Wick oracle: independent evaluation of `S_κ` by the
/// formal Gaussian integral.
pub fn wick_gaussian(theory: &Theory, kappa: &Poly, bound: u32) -> Result<Theory> {
    let theory_n = TheoryN {
        n_labels: 1,
        bound: theory.bound,
        vals: theory
            .vals
            .iter()
            .map(|((g, n), p)| ((*g, vec![*n]), p.clone()))
            .collect(),
    };
    let matrix = vec![vec![kappa.clone()]];
    let out = wick_gaussian_n(&theory_n, &matrix, bound)?;
    let mut result = Theory::new(bound);
    for ((g, ls), p) in out.vals {
        result.vals.insert((g, ls[0]), p);
    }
    Ok(result)
}

//! Sparse multivariate polynomials over exact rationals, generic in the
//! symbol alphabet.

use crate::rational::parse_rat;
use crate::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A symbol usable in a [`MPoly`]. `propagator_degree` feeds the monomial
/// ordering: terms are sorted by total propagator power first, which makes
/// printed polynomials come out in ascending `κ`-degree.
pub trait SymbolKey: Clone + Ord + Eq + std::hash::Hash + fmt::Debug {
    fn propagator_degree(&self) -> u32 {
        0
    }
    fn render(&self) -> String;
}

/// Monomial: factors sorted by symbol, exponents positive.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial<S: SymbolKey>(Vec<(S, u32)>);

impl<S: SymbolKey> Monomial<S> {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: S) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_factors(mut factors: Vec<(S, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(S, u32)> = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            match merged.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => merged.push((s, e)),
            }
        }
        Monomial(merged)
    }

    pub fn factors(&self) -> &[(S, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.0.clone();
        factors.extend(other.0.iter().cloned());
        Monomial::from_factors(factors)
    }

    pub fn degree_of(&self, s: &S) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn propagator_degree(&self) -> u32 {
        self.0
            .iter()
            .map(|(s, e)| s.propagator_degree() * e)
            .sum()
    }

    /// Removes one power of `s`; returns the reduced monomial and the old
    /// exponent, or `None` if `s` does not occur.
    fn reduce(&self, s: &S) -> Option<(Self, u32)> {
        let e = self.degree_of(s);
        if e == 0 {
            return None;
        }
        let factors = self
            .0
            .iter()
            .map(|(t, f)| (t.clone(), if t == s { f - 1 } else { *f }))
            .collect();
        Some((Monomial::from_factors(factors), e))
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.render()
                } else {
                    format!("{}^{}", s.render(), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl<S: SymbolKey> PartialOrd for Monomial<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: SymbolKey> Ord for Monomial<S> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.propagator_degree()
            .cmp(&other.propagator_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial with rational coefficients; zero terms never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<S: SymbolKey> {
    terms: BTreeMap<Monomial<S>, Rat>,
}

impl<S: SymbolKey> MPoly<S> {
    pub fn new() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MPoly::new();
        p.add_term(Monomial::unit(), c);
        p
    }

    pub fn var(s: S) -> Self {
        let mut p = MPoly::new();
        p.add_term(Monomial::var(s), Rat::one());
        p
    }

    pub fn monomial(m: Monomial<S>, c: Rat) -> Self {
        let mut p = MPoly::new();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial<S>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<S>, &Rat)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial<S>) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::unit())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MPoly::new();
        }
        let mut out = MPoly::new();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::constant(Rat::one());
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Largest total degree in symbols satisfying `pred`; 0 for the zero
    /// polynomial.
    pub fn max_degree_where(&self, pred: impl Fn(&S) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.factors()
                    .iter()
                    .filter(|(s, _)| pred(s))
                    .map(|(_, e)| *e)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Formal partial derivative with respect to the single symbol `s`.
    pub fn partial(&self, s: &S) -> Self {
        let mut out = MPoly::new();
        for (m, c) in &self.terms {
            if let Some((reduced, e)) = m.reduce(s) {
                out.add_term(reduced, c * Rat::from_integer(e.into()));
            }
        }
        out
    }

    /// Extends `rule : symbol -> polynomial` to a derivation by the
    /// Leibniz rule.
    pub fn derive(&self, rule: &dyn Fn(&S) -> MPoly<S>) -> Self {
        let mut out = MPoly::new();
        for (m, c) in &self.terms {
            for (s, e) in m.factors() {
                let (reduced, _) = m.reduce(s).unwrap();
                let d = rule(s);
                if d.is_zero() {
                    continue;
                }
                let part = MPoly::monomial(reduced, c * Rat::from_integer((*e).into()));
                out += part * d;
            }
        }
        out
    }

    /// Substitutes polynomials for symbols.
    pub fn substitute(&self, map: &dyn Fn(&S) -> MPoly<S>) -> Self {
        let mut out = MPoly::new();
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for (s, e) in m.factors() {
                term = term * map(s).pow(*e);
            }
            out += term;
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_is_one = mag.is_one();
            if m.is_unit() {
                out.push_str(&mag.to_string());
            } else if coeff_is_one {
                out.push_str(&m.render());
            } else {
                out.push_str(&format!("{}*{}", mag, m.render()));
            }
        }
        out
    }

    /// JSON array of `{"coeff":"p/q","monomial":[symbol,...]}` objects, in
    /// canonical term order, with factors repeated by exponent.
    pub fn to_json(&self) -> String {
        let items: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let syms: Vec<String> = m
                    .factors()
                    .iter()
                    .flat_map(|(s, e)| {
                        std::iter::repeat(format!("\"{}\"", escape(&s.render())))
                            .take(*e as usize)
                    })
                    .collect();
                format!(
                    "{{\"coeff\":\"{}\",\"monomial\":[{}]}}",
                    c,
                    syms.join(",")
                )
            })
            .collect();
        format!("[{}]", items.join(","))
    }

    /// Parses the JSON produced by [`MPoly::to_json`]; `sym` decodes one
    /// symbol string.
    pub fn from_json_value(
        v: &serde_json::Value,
        sym: &dyn Fn(&str) -> crate::error::Result<S>,
    ) -> crate::error::Result<Self> {
        use crate::error::Error;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial: expected array".into()))?;
        let mut out = MPoly::new();
        for item in arr {
            let coeff = item
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::Parse("polynomial term: missing coeff".into()))?;
            let c = parse_rat(coeff)?;
            let mono = item
                .get("monomial")
                .and_then(|m| m.as_array())
                .ok_or_else(|| Error::Parse("polynomial term: missing monomial".into()))?;
            let mut factors = Vec::new();
            for s in mono {
                let s = s
                    .as_str()
                    .ok_or_else(|| Error::Parse("monomial entry must be a string".into()))?;
                factors.push((sym(s)?, 1));
            }
            out.add_term(Monomial::from_factors(factors), c);
        }
        Ok(out)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl<S: SymbolKey> Default for MPoly<S> {
    fn default() -> Self {
        MPoly::new()
    }
}

impl<S: SymbolKey> Add for MPoly<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<S: SymbolKey> AddAssign for MPoly<S> {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<S: SymbolKey> Neg for MPoly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = MPoly::new();
        for (m, c) in self.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<S: SymbolKey> Sub for MPoly<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: SymbolKey> Mul for MPoly<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = MPoly::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<S: SymbolKey> Zero for MPoly<S> {
    fn zero() -> Self {
        MPoly::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: SymbolKey> One for MPoly<S> {
    fn one() -> Self {
        MPoly::constant(Rat::one())
    }
}

impl<S: SymbolKey> From<Rat> for MPoly<S> {
    fn from(c: Rat) -> Self {
        MPoly::constant(c)
    }
}

impl<S: SymbolKey> fmt::Display for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

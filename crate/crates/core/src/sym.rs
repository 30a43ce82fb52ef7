//! Symbols of the realization polynomial ring.

use crate::error::{Error, Result};
use crate::poly::{MPoly, SymbolKey};
use crate::Poly;

/// A symbol of the realization ring. The variant order (propagators first)
/// is the canonical factor order inside monomials, so a term prints as
/// `1/2*kappa*F[0,3]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Sym {
    /// One-dimensional propagator `kappa`.
    Kappa,
    /// Labelled propagator `kappa[i,j]`, stored with `i <= j`.
    KappaL(u8, u8),
    /// Theory symbol `F[g,n]`.
    F(u32, u32),
    /// Labelled theory symbol `F[g;l1,..,lN]`.
    FL(u32, Vec<u8>),
    /// Opaque named scalar, e.g. formal `e1`, `e2`, `k1`.
    Scalar(String),
}

impl Sym {
    pub fn kappa_l(i: u8, j: u8) -> Sym {
        if i <= j {
            Sym::KappaL(i, j)
        } else {
            Sym::KappaL(j, i)
        }
    }
}

impl SymbolKey for Sym {
    fn propagator_degree(&self) -> u32 {
        match self {
            Sym::Kappa | Sym::KappaL(..) => 1,
            _ => 0,
        }
    }

    fn render(&self) -> String {
        match self {
            Sym::Kappa => "kappa".into(),
            Sym::KappaL(i, j) => format!("kappa[{i},{j}]"),
            Sym::F(g, n) => format!("F[{g},{n}]"),
            Sym::FL(g, ls) => {
                let ls: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                format!("F[{};{}]", g, ls.join(","))
            }
            Sym::Scalar(name) => format!("scalar:{name}"),
        }
    }
}

/// Parses one symbol string as produced by [`SymbolKey::render`].
pub fn parse_sym(s: &str) -> Result<Sym> {
    let bad = || Error::Parse(format!("invalid symbol `{s}`"));
    if s == "kappa" {
        return Ok(Sym::Kappa);
    }
    if let Some(rest) = s.strip_prefix("kappa[") {
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        let (i, j) = body.split_once(',').ok_or_else(bad)?;
        let i: u8 = i.trim().parse().map_err(|_| bad())?;
        let j: u8 = j.trim().parse().map_err(|_| bad())?;
        return Ok(Sym::kappa_l(i, j));
    }
    if let Some(rest) = s.strip_prefix("F[") {
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        if let Some((g, ls)) = body.split_once(';') {
            let g: u32 = g.trim().parse().map_err(|_| bad())?;
            let ls = ls
                .split(',')
                .map(|l| l.trim().parse().map_err(|_| bad()))
                .collect::<Result<Vec<u8>>>()?;
            return Ok(Sym::FL(g, ls));
        }
        let (g, n) = body.split_once(',').ok_or_else(bad)?;
        let g: u32 = g.trim().parse().map_err(|_| bad())?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        return Ok(Sym::F(g, n));
    }
    if let Some(name) = s.strip_prefix("scalar:") {
        return Ok(Sym::Scalar(name.to_string()));
    }
    Err(bad())
}

/// Parses a linear expression like `1/2`, `kappa`, `e1+e2`, `-3/2*kappa`,
/// `k1 + k2`. Bare identifiers other than `kappa` become named scalars.
pub fn parse_linear_poly(input: &str) -> Result<Poly> {
    let bad = |msg: &str| Error::Parse(format!("invalid expression `{input}`: {msg}"));
    let mut out = Poly::new();
    let normalized = input.replace('-', "+-");
    for raw in normalized.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            continue;
        }
        let (neg, term) = match term.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, term),
        };
        if term.is_empty() {
            return Err(bad("dangling sign"));
        }
        let mut coeff = crate::rational::rat_i(1);
        let mut sym: Option<Sym> = None;
        for factor in term.split('*') {
            let f = factor.trim();
            if f.is_empty() {
                return Err(bad("empty factor"));
            }
            if f.chars().next().unwrap().is_ascii_digit() {
                coeff *= crate::rational::parse_rat(f)?;
            } else {
                if sym.is_some() {
                    return Err(bad("at most one symbol per term"));
                }
                sym = Some(if f == "kappa" || f.starts_with("kappa[") || f.starts_with("F[") {
                    parse_sym(f)?
                } else if let Some(name) = f.strip_prefix("scalar:") {
                    Sym::Scalar(name.to_string())
                } else {
                    Sym::Scalar(f.to_string())
                });
            }
        }
        if neg {
            coeff = -coeff;
        }
        let term_poly = match sym {
            Some(s) => MPoly::var(s).scale(&coeff),
            None => MPoly::constant(coeff),
        };
        out += term_poly;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn symbol_round_trip() {
        for s in [
            Sym::Kappa,
            Sym::kappa_l(2, 1),
            Sym::F(1, 1),
            Sym::FL(0, vec![2, 1]),
            Sym::Scalar("e1".into()),
        ] {
            assert_eq!(parse_sym(&s.render()).unwrap(), s);
        }
    }

    #[test]
    fn kappa_sorts_before_f() {
        assert!(Sym::Kappa < Sym::F(0, 3));
        let p = Poly::var(Sym::F(0, 3)) * Poly::var(Sym::Kappa);
        assert_eq!(p.render(), "kappa*F[0,3]");
    }

    #[test]
    fn term_order_by_kappa_degree() {
        let f11 = Poly::var(Sym::F(1, 1));
        let k = Poly::var(Sym::Kappa);
        let f03 = Poly::var(Sym::F(0, 3));
        let p = f11 + (k * f03).scale(&rat(1, 2));
        assert_eq!(p.render(), "F[1,1] + 1/2*kappa*F[0,3]");
    }

    #[test]
    fn linear_expressions() {
        assert_eq!(parse_linear_poly("1/2").unwrap().render(), "1/2");
        assert_eq!(
            parse_linear_poly("e1+e2").unwrap().render(),
            "scalar:e1 + scalar:e2"
        );
        assert_eq!(
            parse_linear_poly("-3/2*kappa").unwrap().render(),
            "-3/2*kappa"
        );
        assert_eq!(parse_linear_poly("0").unwrap().render(), "0");
    }
}

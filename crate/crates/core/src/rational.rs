//! Helpers for the exact rational scalar.

use crate::error::{Error, Result};
use crate::Rat;
use num_bigint::BigInt;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::from(1);
    for k in 2..=n as u64 {
        acc *= k;
    }
    Rat::from_integer(acc)
}

/// Parses `p` or `p/q` with `q > 0` after normalization.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        Ok(Rat::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_reduced_p_over_q() {
        assert_eq!(rat(2, 4).to_string(), "1/2");
        assert_eq!(rat(-2, 4).to_string(), "-1/2");
        assert_eq!(rat(6, 2).to_string(), "3");
        assert_eq!(rat(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["5/24", "-1/2", "3", "0"] {
            assert_eq!(parse_rat(s).unwrap().to_string(), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), rat_i(1));
        assert_eq!(factorial(5), rat_i(120));
    }
}

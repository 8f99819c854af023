//! The integer-indexed rational sequences built from `a_n = [(1/2)_n / n!]²`.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceId {
    /// `a_n = [(1/2)_n/n!]²`
    A,
    /// `ã_n = 3/(4(2n+1)) - a_n`
    ATilde,
    /// Coefficients of `[(1 - x/2 - x²/16 - x³/32)F0 - E0]/x⁴`
    B,
    /// `b_n / a_n`
    BigC,
    /// `(2n+3) a_{n+1}`
    C,
    CTilde,
    D,
}

impl SequenceId {
    pub const ALL: [SequenceId; 7] = [
        SequenceId::A,
        SequenceId::ATilde,
        SequenceId::B,
        SequenceId::BigC,
        SequenceId::C,
        SequenceId::CTilde,
        SequenceId::D,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SequenceId::A => "a",
            SequenceId::ATilde => "a_tilde",
            SequenceId::B => "b",
            SequenceId::BigC => "C",
            SequenceId::C => "c",
            SequenceId::CTilde => "c_tilde",
            SequenceId::D => "d",
        }
    }

    /// How many `a_k` beyond `n` the definition reads.
    fn lookahead(self) -> usize {
        match self {
            SequenceId::A | SequenceId::ATilde => 0,
            SequenceId::C => 1,
            SequenceId::CTilde | SequenceId::D => 3,
            SequenceId::B | SequenceId::BigC => 4,
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SequenceId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SequenceId::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| Error::Parse(format!("sequence `{s}`")))
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// `a_n` from the central binomial coefficient.
pub fn a(n: usize) -> Rational {
    let c = Integer::from(Integer::binomial_u(2 * n as u32, n as u32));
    let half = Rational::from((c, Integer::from(1) << (2 * n as u32)));
    Rational::from(half.square_ref())
}

/// `a_0, …, a_n` by the recurrence `a_{k+1} = a_k ((2k+1)/(2k+2))²`.
pub fn a_table(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = Rational::from(1);
    for k in 0..=n {
        out.push(cur.clone());
        let f = q(2 * k as i64 + 1, 2 * k as i64 + 2);
        cur *= Rational::from(f.square_ref());
    }
    out
}

fn eval_with(id: SequenceId, n: usize, at: &dyn Fn(usize) -> Rational) -> Rational {
    let ni = n as i64;
    match id {
        SequenceId::A => at(n),
        SequenceId::ATilde => q(3, 4 * (2 * ni + 1)) - at(n),
        SequenceId::B => b_definition(n, at),
        SequenceId::BigC => b_definition(n, at) / at(n),
        SequenceId::C => at(n + 1) * (2 * ni + 3),
        SequenceId::CTilde => {
            let top = [22 * ni + 83, 2 * ni + 9, 2 * ni + 7, 2 * ni + 5, 2 * ni + 3]
                .iter()
                .fold(Integer::from(1), |acc, &f| acc * f);
            let bottom = Integer::from(ni + 4).square()
                * Integer::from(32276 * ni * ni + 123808 * ni + 110907);
            Rational::from((top, bottom)) * at(n + 3)
        }
        SequenceId::D => {
            let poly = Rational::from((
                Integer::from(10196 * ni * ni + 39096 * ni + 34975),
                Integer::from((2 * ni + 7) * (2 * ni + 5) * (2 * ni + 3)),
            ));
            (poly - at(n + 3) * 2880u32) * (2 * ni + 1)
        }
    }
}

fn b_definition(n: usize, at: &dyn Fn(usize) -> Rational) -> Rational {
    let ni = n as i64;
    q(2 * ni + 8, 2 * ni + 7) * at(n + 4) - at(n + 3) / 2u32 - at(n + 2) / 16u32 - at(n + 1) / 32u32
}

/// The `n`-th term of a sequence, exactly.
pub fn seq(id: SequenceId, n: usize) -> Rational {
    eval_with(id, n, &a)
}

/// Terms `0..=n_max` of a sequence, sharing one table of `a_k`.
pub fn seq_table(id: SequenceId, n_max: usize) -> Vec<Rational> {
    let table = a_table(n_max + id.lookahead());
    let at = |k: usize| table[k].clone();
    (0..=n_max).map(|n| eval_with(id, n, &at)).collect()
}

/// `(n+2)(n+1)(26n²+116n+k)/[16(n+3)(n+4)(2n+3)²] a_{n+2}`; the identity holds with `k = 123`.
pub fn b_closed_form(n: usize, k: i64, a_n2: &Rational) -> Rational {
    let ni = n as i64;
    let top = Integer::from((ni + 2) * (ni + 1)) * Integer::from(26 * ni * ni + 116 * ni + k);
    let bottom = Integer::from(16 * (ni + 3) * (ni + 4)) * Integer::from(2 * ni + 3).square();
    Rational::from((top, bottom)) * a_n2
}

/// True iff the definition of `b_n` equals its closed form for every `n ≤ n_max`.
pub fn seq_closed_form_check(id: SequenceId, n_max: usize) -> bool {
    closed_form_check_with(id, n_max, 123)
}

/// As [`seq_closed_form_check`] with the constant `123` replaced by `k`.
pub fn closed_form_check_with(id: SequenceId, n_max: usize, k: i64) -> bool {
    if id != SequenceId::B {
        return false;
    }
    let table = a_table(n_max + 4);
    let at = |j: usize| table[j].clone();
    (0..=n_max).all(|n| b_definition(n, &at) == b_closed_form(n, k, &table[n + 2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_initial_values() {
        assert_eq!(seq(SequenceId::C, 0), q(3, 4));
        assert_eq!(seq(SequenceId::B, 0), q(41, 2048));
        assert_eq!(seq(SequenceId::D, 0), q(4355, 84));
        assert_eq!(seq(SequenceId::CTilde, 0), q(217875, 50475008));
        assert_eq!(seq(SequenceId::A, 2), q(9, 64));
        assert_eq!(seq(SequenceId::ATilde, 1), Rational::new());
        assert_eq!(seq(SequenceId::ATilde, 0), q(-1, 4));
        assert_eq!(seq(SequenceId::ATilde, 2), q(3, 320));
    }

    #[test]
    fn table_matches_direct() {
        for id in SequenceId::ALL {
            let t = seq_table(id, 30);
            for (n, v) in t.iter().enumerate() {
                assert_eq!(v, &seq(id, n), "{id} at {n}");
            }
        }
    }

    #[test]
    fn big_c_is_ratio() {
        assert_eq!(
            seq(SequenceId::BigC, 3),
            seq(SequenceId::B, 3) / seq(SequenceId::A, 3)
        );
    }

    #[test]
    fn closed_form() {
        assert!(seq_closed_form_check(SequenceId::B, 0));
        assert!(seq_closed_form_check(SequenceId::B, 100));
        assert!(!closed_form_check_with(SequenceId::B, 0, 124));
        assert!(!seq_closed_form_check(SequenceId::C, 3));
    }

    #[test]
    fn parse_tags() {
        for id in SequenceId::ALL {
            assert_eq!(id.tag().parse::<SequenceId>().unwrap(), id);
        }
        assert!("e".parse::<SequenceId>().is_err());
    }
}

use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Serialize, Serializer};

use crate::approx::parse_rational;
use crate::error::{Error, Result};

/// The closed set of function names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FnName {
    /// `f1` … `f25`
    F(u8),
    /// `g`, parametrised by `c > 0`
    G,
    /// `g1` … `g4`
    Gn(u8),
    /// `f = (G - 3/4)/r²`
    SmallF,
    /// `G = log(2K/π) / log(arth r / r)`
    BigG,
    /// `h1` … `h13`
    H(u8),
}

impl FnName {
    pub fn all() -> Vec<FnName> {
        let mut v: Vec<FnName> = (1..=25).map(FnName::F).collect();
        v.push(FnName::G);
        v.extend((1..=4).map(FnName::Gn));
        v.push(FnName::SmallF);
        v.push(FnName::BigG);
        v.extend((1..=13).map(FnName::H));
        v
    }

    /// Whether the name takes a parameter: `c` for `g`, `n` for `h2`/`h3`.
    pub fn takes_param(self) -> bool {
        matches!(self, FnName::G | FnName::H(2) | FnName::H(3))
    }
}

impl fmt::Display for FnName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnName::F(i) => write!(f, "f{i}"),
            FnName::G => write!(f, "g"),
            FnName::Gn(i) => write!(f, "g{i}"),
            FnName::SmallF => write!(f, "f"),
            FnName::BigG => write!(f, "G"),
            FnName::H(i) => write!(f, "h{i}"),
        }
    }
}

impl FromStr for FnName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFunction(s.to_string());
        let index = |rest: &str, max: u8| -> Result<u8> {
            if rest.starts_with('0') {
                return Err(unknown());
            }
            match rest.parse::<u8>() {
                Ok(i) if (1..=max).contains(&i) => Ok(i),
                _ => Err(unknown()),
            }
        };
        match s {
            "f" => Ok(FnName::SmallF),
            "G" => Ok(FnName::BigG),
            "g" => Ok(FnName::G),
            _ => {
                if let Some(rest) = s.strip_prefix('f') {
                    index(rest, 25).map(FnName::F)
                } else if let Some(rest) = s.strip_prefix('g') {
                    index(rest, 4).map(FnName::Gn)
                } else if let Some(rest) = s.strip_prefix('h') {
                    index(rest, 13).map(FnName::H)
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

/// A function name with its parameter, validated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionId {
    name: FnName,
    param: Option<Rational>,
}

impl FunctionId {
    pub fn new(name: FnName, param: Option<Rational>) -> Result<Self> {
        match (name.takes_param(), param) {
            (false, None) => Ok(FunctionId { name, param: None }),
            (false, Some(p)) => Err(Error::ParamOutOfRange(format!(
                "{name} takes no parameter, got {p}"
            ))),
            (true, None) => Err(Error::ParamRequired(name.to_string())),
            (true, Some(p)) => {
                if name == FnName::G {
                    if p.cmp0() != std::cmp::Ordering::Greater {
                        return Err(Error::ParamOutOfRange(format!("g needs c > 0, got {p}")));
                    }
                } else if p.denom() != &1u32 || p < 1 || p > 64 {
                    return Err(Error::ParamOutOfRange(format!(
                        "{name} needs an integer n in [1, 64], got {p}"
                    )));
                }
                Ok(FunctionId {
                    name,
                    param: Some(p),
                })
            }
        }
    }

    pub fn plain(name: FnName) -> Self {
        Self::new(name, None).expect("name takes a parameter")
    }

    /// Parses a name and an optional parameter string (`p/q`, integer or decimal).
    pub fn parse(name: &str, param: Option<&str>) -> Result<Self> {
        let name: FnName = name.trim().parse()?;
        let param = param.map(parse_rational).transpose()?;
        Self::new(name, param)
    }

    pub fn f(i: u8) -> Self {
        Self::plain(FnName::F(i))
    }

    pub fn h(i: u8) -> Self {
        Self::plain(FnName::H(i))
    }

    pub fn g(c: Rational) -> Result<Self> {
        Self::new(FnName::G, Some(c))
    }

    pub fn name(&self) -> FnName {
        self.name
    }

    pub fn param(&self) -> Option<&Rational> {
        self.param.as_ref()
    }

    /// The integer `n` of `h2`/`h3`.
    pub(crate) fn n(&self) -> usize {
        self.param
            .as_ref()
            .and_then(|p| p.numer().to_usize())
            .unwrap_or(1)
    }
}

/// `name` or `name:param`, e.g. `g:1/4` or `h2:3`.
impl FromStr for FunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((n, p)) => Self::parse(n, Some(p)),
            None => Self::parse(s, None),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param {
            None => write!(f, "{}", self.name),
            Some(p) if p.denom() == &1u32 => write!(f, "{}:{}", self.name, p.numer()),
            Some(p) => write!(f, "{}:{}/{}", self.name, p.numer(), p.denom()),
        }
    }
}

impl Serialize for FunctionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

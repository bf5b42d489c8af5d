use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const MAX_FORMULA_DEPTH: usize = 64;

/// Boolean formula over atoms `A_1..A_m`, where `A_i` means "f_i vanishes".
///
/// Text form is nested arrays: `["not", ["atom", 1]]`, `["and", x, y, ...]`,
/// `["or", x, y, ...]`, `["const", true]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolFormula {
    Atom(usize),
    Not(Box<BoolFormula>),
    And(Vec<BoolFormula>),
    Or(Vec<BoolFormula>),
    Const(bool),
}

impl BoolFormula {
    /// The strongly-algebraic rule: edge iff `f_1` does not vanish.
    pub fn nonvanishing() -> Self {
        BoolFormula::Not(Box::new(BoolFormula::Atom(1)))
    }

    pub fn is_nonvanishing(&self) -> bool {
        matches!(self, BoolFormula::Not(inner) if **inner == BoolFormula::Atom(1))
    }

    /// `vanish[i]` is the truth value of atom `A_{i+1}`.
    pub fn eval(&self, vanish: &[bool]) -> bool {
        match self {
            BoolFormula::Atom(i) => vanish[i - 1],
            BoolFormula::Not(x) => !x.eval(vanish),
            BoolFormula::And(xs) => xs.iter().all(|x| x.eval(vanish)),
            BoolFormula::Or(xs) => xs.iter().any(|x| x.eval(vanish)),
            BoolFormula::Const(b) => *b,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            BoolFormula::Atom(_) | BoolFormula::Const(_) => 1,
            BoolFormula::Not(x) => 1 + x.depth(),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => 1 + xs.iter().map(|x| x.depth()).max().unwrap_or(0),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.depth() > MAX_FORMULA_DEPTH {
            return Err(Error::FormulaTooDeep(MAX_FORMULA_DEPTH));
        }
        self.check_atoms(m)
    }

    fn check_atoms(&self, m: usize) -> Result<()> {
        match self {
            BoolFormula::Atom(i) if *i == 0 || *i > m => Err(Error::BadFormulaAtom { atom: *i, m }),
            BoolFormula::Atom(_) | BoolFormula::Const(_) => Ok(()),
            BoolFormula::Not(x) => x.check_atoms(m),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => xs.iter().try_for_each(|x| x.check_atoms(m)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BoolFormula::Atom(i) => json!(["atom", i]),
            BoolFormula::Const(b) => json!(["const", b]),
            BoolFormula::Not(x) => json!(["not", x.to_json()]),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => {
                let tag = if matches!(self, BoolFormula::And(_)) { "and" } else { "or" };
                let mut v = vec![json!(tag)];
                v.extend(xs.iter().map(|x| x.to_json()));
                Value::Array(v)
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::parse(v, 1)
    }

    fn parse(v: &Value, depth: usize) -> Result<Self> {
        if depth > MAX_FORMULA_DEPTH {
            return Err(Error::FormulaTooDeep(MAX_FORMULA_DEPTH));
        }
        let bad = || Error::Malformed(format!("formula node {v}"));
        let arr = v.as_array().filter(|a| !a.is_empty()).ok_or_else(bad)?;
        let tag = arr[0].as_str().ok_or_else(bad)?;
        let args = &arr[1..];
        match (tag, args) {
            ("atom", [i]) => Ok(BoolFormula::Atom(i.as_u64().ok_or_else(bad)? as usize)),
            ("const", [b]) => Ok(BoolFormula::Const(b.as_bool().ok_or_else(bad)?)),
            ("not", [x]) => Ok(BoolFormula::Not(Box::new(Self::parse(x, depth + 1)?))),
            ("and" | "or", xs) => {
                let kids = xs.iter().map(|x| Self::parse(x, depth + 1)).collect::<Result<Vec<_>>>()?;
                Ok(if tag == "and" { BoolFormula::And(kids) } else { BoolFormula::Or(kids) })
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for BoolFormula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoolFormula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        BoolFormula::from_json(&v).map_err(serde::de::Error::custom)
    }
}

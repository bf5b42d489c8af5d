use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// A prime modulus `p` with `2 <= p <= 2^31 - 1`.
///
/// Residues are always stored as canonical representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldPrime(u32);

pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Deterministic trial-division primality test; fine up to `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i * i <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

impl FieldPrime {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(FieldPrime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.0 as u64
    }

    /// Reduce an arbitrary integer to its canonical residue.
    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn check(self, a: u32) -> Result<u32, AlgebraError> {
        if a < self.0 {
            Ok(a)
        } else {
            Err(AlgebraError::NonResidueInput { value: a as u64, p: self.0 })
        }
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.0 as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let p = self.0 as u64;
        let mut result = 1 % p;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        result as u32
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32, AlgebraError> {
        if a.is_multiple_of(self.0) {
            return Err(AlgebraError::InversionOfZero);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    /// Euler's criterion; zero counts as neither residue nor non-residue.
    pub fn is_quadratic_residue(self, a: u32) -> bool {
        if self.0 == 2 {
            return a % 2 == 1;
        }
        !a.is_multiple_of(self.0) && self.pow(a, (self.0 as u64 - 1) / 2) == 1
    }
}

impl TryFrom<u64> for FieldPrime {
    type Error = AlgebraError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        FieldPrime::new(p)
    }
}

impl From<FieldPrime> for u64 {
    fn from(p: FieldPrime) -> u64 {
        p.0 as u64
    }
}

impl std::fmt::Display for FieldPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
}

/// Checked single-operation entry point. Both operands must already be
/// canonical residues; for `Pow` the second operand is the exponent.
pub fn field_op(p: FieldPrime, a: u32, b: u32, op: FieldOp) -> Result<u32, AlgebraError> {
    p.check(a)?;
    match op {
        FieldOp::Inv => p.inv(a),
        FieldOp::Pow => {
            p.check(b)?;
            Ok(p.pow(a, b as u64))
        }
        _ => {
            p.check(b)?;
            Ok(match op {
                FieldOp::Add => p.add(a, b),
                FieldOp::Sub => p.sub(a, b),
                FieldOp::Mul => p.mul(a, b),
                FieldOp::Inv | FieldOp::Pow => unreachable!(),
            })
        }
    }
}

//! Prime-field arithmetic and sparse multivariate polynomials.

mod field;
mod poly;
mod symmetry;

pub use field::{field_op, is_prime, FieldOp, FieldPrime, MAX_PRIME};
pub use poly::{Monomial, MonomialRecord, MultiPoly};
pub use symmetry::{poly_symmetry_check, symmetry_check, SymmetryMode, EXHAUSTIVE_LIMIT};

use thiserror::Error;

use crate::combinatorics::binomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime in [2, 2^31 - 1]")]
    NotPrime(u64),
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("{value} is not a canonical residue mod {p}")]
    NonResidueInput { value: u64, p: u32 },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("block {block} has degree {degree} above the cap {cap}")]
    DegreeCapViolated { block: usize, degree: u32, cap: u32 },
    #[error("polynomials live over different fields or variable layouts")]
    ShapeMismatch,
    #[error("arithmetic overflow")]
    Overflow,
}

/// Number of monomials of total degree at most `d` in `n` variables, `C(n+d, d)`.
pub fn monomial_count(n: u64, d: u64) -> Result<u64, AlgebraError> {
    let top = n.checked_add(d).ok_or(AlgebraError::Overflow)?;
    binomial(top, d).ok_or(AlgebraError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(n: usize, d: u32) -> u64 {
        // count exponent vectors with sum <= d directly
        fn rec(left: usize, budget: u32) -> u64 {
            if left == 0 {
                return 1;
            }
            (0..=budget).map(|e| rec(left - 1, budget - e)).sum()
        }
        rec(n, d)
    }

    #[test]
    fn monomial_count_examples() {
        assert_eq!(monomial_count(2, 2), Ok(6));
        assert_eq!(monomial_count(7, 0), Ok(1));
        assert_eq!(monomial_count(3, 2), Ok(10));
        assert_eq!(monomial_count(u64::MAX, 1), Err(AlgebraError::Overflow));
        assert_eq!(monomial_count(100, 60), Err(AlgebraError::Overflow));
    }

    #[test]
    fn monomial_count_matches_enumeration() {
        for n in 0..=6 {
            for d in 0..=6 {
                assert_eq!(monomial_count(n as u64, d as u64).unwrap(), enumerate(n, d), "n={n} d={d}");
            }
        }
    }
}

//! Exact arithmetic: rationals, multivariate Laurent polynomials over `Q`,
//! and rational functions in those variables.

mod laurent;
mod ratfunc;

pub(crate) use laurent::rational_pow;
pub use laurent::{LaurentPoly, Monomial, VarId, VarSet};
pub use ratfunc::RationalFunction;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("operands use different variable sets")]
    VariableMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation hits a pole")]
    Pole,
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("operation requires a function of one variable")]
    NotUnivariate,
}

/// Shorthand for the rational `a / b`.
pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Decimal expansion of `r` rounded half away from zero to `digits` places.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    use num_traits::{Pow, Signed, Zero};
    let scale = BigInt::from(10u8).pow(digits as u32);
    let scaled = r.abs() * BigRational::from_integer(scale.clone()) + q(1, 2);
    let int = scaled.floor().to_integer();
    let (whole, frac) = (&int / &scale, &int % &scale);
    let sign = if r.is_negative() && !int.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
}

#[cfg(test)]
mod decimal_tests {
    use super::*;

    #[test]
    fn rounds_half_away_from_zero() {
        assert_eq!(decimal_string(&q(7, 26), 12), "0.269230769231");
        assert_eq!(decimal_string(&q(1, 8), 2), "0.13");
        assert_eq!(decimal_string(&q(-1, 8), 2), "-0.13");
        assert_eq!(decimal_string(&q(-1, 1000), 2), "0.00");
        assert_eq!(decimal_string(&q(5, 2), 0), "3");
        assert_eq!(decimal_string(&q(1, 1), 3), "1.000");
    }
}

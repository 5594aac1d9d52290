//! Cross-checks of the `D_n` family for one degree.

use super::{DFamily, DSeriesError, SUBSET_FORM_MAX_DIVISORS};
use crate::checks::CheckOutcome;
use crate::numtheory::divisors;

/// Primes used for the probability checks.
pub const CHECK_PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn verify_degree(fam: &DFamily, n: u64) -> Result<Vec<CheckOutcome>, DSeriesError> {
    let tag = |s: &str| format!("{s} [n={n}]");
    let mut out = Vec::new();
    let d = fam.d(n)?;
    out.push(CheckOutcome::new(
        tag("recursion agrees with the chain form"),
        fam.d_chain_form(n)?.equals(&d)?,
        "",
    ));
    if divisors(n).len() <= SUBSET_FORM_MAX_DIVISORS {
        out.push(CheckOutcome::new(
            tag("recursion agrees with the subset form"),
            fam.d_subset_form(n)?.equals(&d)?,
            "",
        ));
    }
    out.push(CheckOutcome::new(
        tag("D_n(1/u, 1/v) = v^(n-1) D_n(u, v)"),
        fam.inversion_check(n)?,
        "",
    ));
    out.push(CheckOutcome::new(
        tag("Igusa functional equation for D_n(1/u, v^(n/2))"),
        fam.igusa_functional_equation_check(n)?,
        "",
    ));
    let star = fam.d_star(n);
    out.push(CheckOutcome::new(
        tag("D*_n is a rational function of t"),
        star.is_ok(),
        match &star {
            Ok(f) => f.render(),
            Err(e) => e.to_string(),
        },
    ));
    out.push(CheckOutcome::new(
        tag("rho(t) = rho(1/t)"),
        fam.rho_symmetry_check(n)?,
        "",
    ));
    for p in CHECK_PRIMES {
        let table = fam.probabilities(n, p)?;
        let bounded = if n == 1 { true } else { table.in_open_unit_interval() };
        out.push(CheckOutcome::new(
            tag(&format!("probabilities at p={p} are consistent and bounded")),
            table.is_consistent() && bounded,
            format!("rho={} alpha={} beta={}", table.rho, table.alpha, table.beta),
        ));
    }
    Ok(out)
}

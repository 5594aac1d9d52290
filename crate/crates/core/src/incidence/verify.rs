//! Exhaustive checks of the incidence-algebra identities on divisor posets.

use super::{
    complementing_pairs, gamma, gamma_closed_form, mobius_by_chains, DivisorPoset, ElementSet, IncidenceElement,
    IncidenceError, ThetaContext, MAX_INTERIOR,
};
use crate::checks::CheckOutcome;
use crate::numtheory;

/// Posets up to this size get the all-subsets Gamma check.
pub const GAMMA_SUBSET_LIMIT: usize = 10;

/// Runs every incidence check on the divisor poset of `n`.
pub fn verify_divisor_poset(n: u64) -> Result<Vec<CheckOutcome>, IncidenceError> {
    let p = DivisorPoset::new(n)?;
    let poset = p.poset();
    let ctx = ThetaContext::new(poset)?;
    let mut out = Vec::new();
    let tag = |s: &str| format!("{s} [n={n}]");

    let zeta = IncidenceElement::zeta(poset, 0i64);
    let delta = IncidenceElement::delta(poset, 0i64);
    let mu = ctx.mu();
    out.push(CheckOutcome::new(
        tag("zeta * mu = delta = mu * zeta"),
        zeta.convolve(mu)? == delta && mu.convolve(&zeta)? == delta,
        "",
    ));

    let classical = numtheory::mobius(n);
    let got = mu.get(1, n)?;
    out.push(CheckOutcome::new(
        tag("mu(1, n) is the classical Möbius value"),
        got == classical,
        format!("{got} vs {classical}"),
    ));

    out.push(CheckOutcome::new(
        tag("recursive and chain-sum inverses agree"),
        zeta.inverse_via_chains()? == *mu && ctx.theta().inverse_via_chains()? == ctx.theta().inverse()?,
        "zeta and theta",
    ));

    let mut chains_ok = true;
    for &x in p.labels() {
        for &y in p.labels() {
            if p.leq(x, y)? && mobius_by_chains(&p, x, y)? != mu.get(x, y)? {
                chains_ok = false;
            }
        }
    }
    out.push(CheckOutcome::new(
        tag("mu equals the alternating chain count"),
        chains_ok,
        "",
    ));

    let mut refine_ok = true;
    let mut refine_cases = 0;
    for chain in p.all_chains(1, n)? {
        for m in chain.steps()..p.len() {
            refine_cases += 1;
            if p.count_refinements(&chain, m)? != p.count_refinements_by_steps(&chain, m)? {
                refine_ok = false;
            }
        }
    }
    out.push(CheckOutcome::new(
        tag("refinement counts match the composition sum"),
        refine_ok,
        format!("{refine_cases} cases"),
    ));

    if p.len() <= GAMMA_SUBSET_LIMIT {
        let mut ok = true;
        let mut cases = 0;
        for bits in 0u128..1 << p.len() {
            let q = ElementSet(bits);
            for &x in p.labels() {
                for &y in p.labels() {
                    if q.contains(&p, y) && p.leq(x, y)? {
                        cases += 1;
                        if gamma(poset, q, x, y)? != gamma_closed_form(poset, q, x, y)? {
                            ok = false;
                        }
                    }
                }
            }
        }
        out.push(CheckOutcome::new(
            tag("Gamma_Q matches its case split"),
            ok,
            format!("{cases} cases"),
        ));
    }

    if n > 1 {
        let interior = p.len() - 2;
        if interior <= MAX_INTERIOR {
            let pairs = complementing_pairs(&p, 1, n)?;
            let mut completion = true;
            let mut inversion = true;
            let mut coefficients = true;
            for pair in &pairs {
                completion &= ctx.mobius_completion_check(pair)?;
                inversion &= ctx.theta_inversion_check(pair)?;
                coefficients &= ctx.theta_coefficient_check(pair.q, 1, n)?;
            }
            let detail = format!("{} pairs", pairs.len());
            out.push(CheckOutcome::new(
                tag("Inv_Q mu = -mu_Q' on complementing pairs"),
                completion,
                &detail,
            ));
            out.push(CheckOutcome::new(
                tag("theta inversion on complementing pairs"),
                inversion,
                &detail,
            ));
            out.push(CheckOutcome::new(
                tag("closed-form coefficients of Inv_Q theta"),
                coefficients,
                &detail,
            ));
        }
    }
    Ok(out)
}

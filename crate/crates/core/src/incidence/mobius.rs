use std::sync::Arc;

use super::algebra::IncidenceElement;
use super::poset::{ElementSet, FinitePoset};
use super::IncidenceError;

/// Largest number of interior elements for which complementing pairs are
/// enumerated.
pub const MAX_INTERIOR: usize = 14;

/// The Möbius function of `poset`, or of the subposet `q` when given
/// (stored on the full poset, zero outside `q`).
pub fn mobius(poset: &Arc<FinitePoset>, q: Option<ElementSet>) -> Result<IncidenceElement<i64>, IncidenceError> {
    let zeta = IncidenceElement::zeta(poset, 0i64);
    zeta.inverse_on(q.unwrap_or_else(|| ElementSet::all(poset)))
}

/// `sum over k of (-1)^k` times the number of chains from `x` to `y` with
/// `k` steps.
pub fn mobius_by_chains(poset: &FinitePoset, x: u64, y: u64) -> Result<i64, IncidenceError> {
    let (i, j) = (poset.index(x)?, poset.index(y)?);
    let mut total = 0i64;
    let mut cur = vec![i];
    poset.walk_chains(j, poset.full_mask(), None, &mut cur, &mut |c| {
        total += if c.len() % 2 == 1 { 1 } else { -1 };
    });
    Ok(total)
}

/// `Gamma_Q(x, y)` by its defining sum
/// `sum over z in Q, x <= z <= y of mu(x, z) Inv_Q mu(z, y)`.
pub fn gamma(poset: &Arc<FinitePoset>, q: ElementSet, x: u64, y: u64) -> Result<i64, IncidenceError> {
    gamma_with(poset, &mobius(poset, None)?, q, x, y)
}

pub(crate) fn gamma_with(
    poset: &Arc<FinitePoset>,
    mu: &IncidenceElement<i64>,
    q: ElementSet,
    x: u64,
    y: u64,
) -> Result<i64, IncidenceError> {
    let (i, j) = (poset.index(x)?, poset.index(y)?);
    if !q.has(j) {
        return Err(IncidenceError::OutsideSubset(y));
    }
    if !poset.leq_idx(i, j) {
        return Ok(0);
    }
    // Only Inv_Q mu on [x, y] is needed.
    let sub = ElementSet(q.0 & poset.interval_mask(i, j));
    let inv_q_mu = mu.inverse_on(sub)?;
    let mut total = 0i64;
    for k in 0..poset.len() {
        if sub.has(k) {
            total += mu.at(i, k) * inv_q_mu.at(k, j);
        }
    }
    Ok(total)
}

/// The case split for `Gamma_Q(x, y)`: `-Inv_{Q + x} mu (x, y)` when `x` is
/// outside `Q`, one on the diagonal, zero otherwise.
pub fn gamma_closed_form(poset: &Arc<FinitePoset>, q: ElementSet, x: u64, y: u64) -> Result<i64, IncidenceError> {
    let (i, j) = (poset.index(x)?, poset.index(y)?);
    if !q.has(j) {
        return Err(IncidenceError::OutsideSubset(y));
    }
    if !q.has(i) {
        let mu = mobius(poset, None)?;
        return Ok(-mu.restricted_inverse(q.with_idx(i), x, y)?);
    }
    Ok(i64::from(i == j))
}

/// Two subsets complementing the interval `[x, y]`: both contain `x` and
/// `y`, and every element strictly between lies in exactly one of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubposetPair {
    pub q: ElementSet,
    pub qc: ElementSet,
    pub x: u64,
    pub y: u64,
}

impl SubposetPair {
    pub fn new(poset: &FinitePoset, q: ElementSet, qc: ElementSet, x: u64, y: u64) -> Result<Self, IncidenceError> {
        let (i, j) = (poset.index(x)?, poset.index(y)?);
        if !poset.leq_idx(i, j) {
            return Err(IncidenceError::NotComparable(x, y));
        }
        for (l, idx) in [(x, i), (y, j)] {
            if !q.has(idx) || !qc.has(idx) {
                return Err(IncidenceError::InvalidPair(format!("{l} is not in both subsets")));
            }
        }
        for k in 0..poset.len() {
            if poset.lt_idx(i, k) && poset.lt_idx(k, j) && q.has(k) == qc.has(k) {
                return Err(IncidenceError::InvalidPair(format!(
                    "{} must lie in exactly one subset",
                    poset.label(k)
                )));
            }
        }
        Ok(SubposetPair { q, qc, x, y })
    }
}

/// Every complementing pair of `[x, y]` whose subsets lie inside the
/// interval.
pub fn complementing_pairs(poset: &FinitePoset, x: u64, y: u64) -> Result<Vec<SubposetPair>, IncidenceError> {
    let (i, j) = (poset.index(x)?, poset.index(y)?);
    if !poset.leq_idx(i, j) {
        return Err(IncidenceError::NotComparable(x, y));
    }
    let interior: Vec<usize> = (0..poset.len())
        .filter(|&k| poset.lt_idx(i, k) && poset.lt_idx(k, j))
        .collect();
    if interior.len() > MAX_INTERIOR {
        return Err(IncidenceError::TooLarge(interior.len()));
    }
    let ends = (1u128 << i) | (1u128 << j);
    let mut out = Vec::with_capacity(1 << interior.len());
    for bits in 0u32..1 << interior.len() {
        let mut q = ends;
        let mut qc = ends;
        for (b, &k) in interior.iter().enumerate() {
            if bits >> b & 1 == 1 {
                q |= 1 << k;
            } else {
                qc |= 1 << k;
            }
        }
        out.push(SubposetPair {
            q: ElementSet(q),
            qc: ElementSet(qc),
            x,
            y,
        });
    }
    Ok(out)
}

/// Checks `Inv_Q mu (x, y) = -mu_{Q'}(x, y)` for a complementing pair.
pub fn mobius_completion_check(poset: &Arc<FinitePoset>, pair: &SubposetPair) -> Result<bool, IncidenceError> {
    super::theta::ThetaContext::new(poset)?.mobius_completion_check(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::DivisorPoset;

    #[test]
    fn classical_values() {
        for (n, expected) in [(2, -1), (4, 0), (30, -1), (6, 1), (7, -1)] {
            let p = DivisorPoset::new(n).unwrap();
            let mu = mobius(p.poset(), None).unwrap();
            assert_eq!(mu.get(1, n).unwrap(), expected, "n = {n}");
            assert_eq!(mu.get(n, n).unwrap(), 1);
            assert_eq!(mobius_by_chains(&p, 1, n).unwrap(), expected);
        }
    }

    #[test]
    fn gamma_cases() {
        let p = DivisorPoset::new(4).unwrap();
        let q = ElementSet::from_labels(&p, &[1, 4]).unwrap();
        assert_eq!(gamma(p.poset(), q, 4, 4).unwrap(), 1);
        assert_eq!(gamma(p.poset(), q, 1, 4).unwrap(), 0);
        let mu = mobius(p.poset(), None).unwrap();
        let q2 = ElementSet::from_labels(&p, &[1, 2, 4]).unwrap();
        let expected = -mu.restricted_inverse(q2, 2, 4).unwrap();
        assert_eq!(gamma(p.poset(), q, 2, 4).unwrap(), expected);
        assert_eq!(gamma_closed_form(p.poset(), q, 2, 4).unwrap(), expected);
        assert_eq!(gamma(p.poset(), q, 2, 2).err(), Some(IncidenceError::OutsideSubset(2)));
    }

    #[test]
    fn pair_validation() {
        let p = DivisorPoset::new(12).unwrap();
        let q = ElementSet::from_labels(&p, &[1, 2, 12]).unwrap();
        let qc = ElementSet::from_labels(&p, &[1, 3, 4, 6, 12]).unwrap();
        assert!(SubposetPair::new(&p, q, qc, 1, 12).is_ok());
        assert!(SubposetPair::new(&p, q, q, 1, 12).is_err());
        assert_eq!(complementing_pairs(&p, 1, 12).unwrap().len(), 16);
    }

    #[test]
    fn completion_on_smallest_interval() {
        let p = DivisorPoset::new(3).unwrap();
        let ends = ElementSet::from_labels(&p, &[1, 3]).unwrap();
        let pair = SubposetPair::new(&p, ends, ends, 1, 3).unwrap();
        assert!(mobius_completion_check(p.poset(), &pair).unwrap());
    }
}

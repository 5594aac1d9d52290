use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::algebra::IncidenceElement;
use super::mobius::{gamma_with, mobius, SubposetPair};
use super::poset::{ElementSet, FinitePoset};
use super::IncidenceError;
use crate::arith::{LaurentPoly, Monomial, VarSet};

/// One variable `t_z` per element, in poset index order.
pub fn theta_vars(poset: &FinitePoset) -> VarSet {
    let names: Vec<String> = poset.labels().iter().map(|l| format!("t_{l}")).collect();
    VarSet::new(&names)
}

/// `theta(x, y) = sum over x <= z <= y of mu(z, y) t_z / t_x` on every pair.
pub fn theta_element(poset: &Arc<FinitePoset>) -> Result<IncidenceElement<LaurentPoly>, IncidenceError> {
    let vars = theta_vars(poset);
    let mu = mobius(poset, None)?;
    let zero = LaurentPoly::zero(&vars);
    let n = poset.len();
    let mut out = IncidenceElement::from_fn(poset, zero.clone(), |_, _| zero.clone());
    for i in 0..n {
        for j in 0..n {
            if !poset.leq_idx(i, j) {
                continue;
            }
            let terms = (0..n).filter(|&k| poset.leq_idx(i, k) && poset.leq_idx(k, j)).map(|k| {
                let m = Monomial::from_pairs([(k as u16, 1), (i as u16, -1)]);
                (BigRational::from_integer((*mu.at(k, j)).into()), m)
            });
            out.set_at(i, j, LaurentPoly::from_terms(&vars, terms));
        }
    }
    Ok(out)
}

pub fn theta(poset: &Arc<FinitePoset>, x: u64, y: u64) -> Result<LaurentPoly, IncidenceError> {
    if !poset.leq(x, y)? {
        return Err(IncidenceError::NotComparable(x, y));
    }
    theta_element(poset)?.get(x, y)
}

/// Specializes `t_z -> u^z` into the one-variable set `u_vars`.
pub fn specialize_to_u(poset: &FinitePoset, p: &LaurentPoly, u_vars: &VarSet) -> LaurentPoly {
    p.map_monomials(u_vars, |m| {
        let e: i64 = m
            .pairs()
            .iter()
            .map(|&(v, e)| e as i64 * poset.label(v as usize) as i64)
            .sum();
        Monomial::var(0, e as i32)
    })
}

/// The reduced form `t_{w_1}/t_{z_1} ... t_{w_k}/t_{z_k}` of an admissible
/// monomial, with `z_1 < w_1 < z_2 < ... < w_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleForm {
    pub z: Vec<u64>,
    pub w: Vec<u64>,
}

/// The admissible form of `m` relative to `[x, y]_Q`, or `None` when `m`
/// is not admissible there. Variables of `m` are poset indices as in
/// [`theta_vars`].
pub fn admissible_form(
    poset: &FinitePoset,
    m: &Monomial,
    q: ElementSet,
    x: u64,
    y: u64,
) -> Result<Option<AdmissibleForm>, IncidenceError> {
    let (xi, yi) = (poset.index(x)?, poset.index(y)?);
    let mut elems: Vec<(usize, i32)> = Vec::new();
    for &(v, e) in m.pairs() {
        let v = v as usize;
        if v >= poset.len() {
            return Err(IncidenceError::UnknownElement(v as u64));
        }
        if e != 1 && e != -1 {
            return Ok(None);
        }
        elems.push((v, e));
    }
    // Index order is a linear extension, so a chain is sorted by index.
    elems.sort_unstable();
    if elems.len() % 2 == 1 {
        return Ok(None);
    }
    let mut form = AdmissibleForm {
        z: Vec::new(),
        w: Vec::new(),
    };
    for (pos, &(v, e)) in elems.iter().enumerate() {
        let expected = if pos % 2 == 0 { -1 } else { 1 };
        if e != expected {
            return Ok(None);
        }
        if pos > 0 && !poset.lt_idx(elems[pos - 1].0, v) {
            return Ok(None);
        }
        if e == -1 {
            if !q.has(v) || !poset.leq_idx(xi, v) || !poset.leq_idx(v, yi) {
                return Ok(None);
            }
            form.z.push(poset.label(v));
        } else {
            form.w.push(poset.label(v));
        }
    }
    if let Some(&(last, _)) = elems.last() {
        if !poset.leq_idx(last, yi) {
            return Ok(None);
        }
    }
    Ok(Some(form))
}

/// Every monomial admissible relative to `[x, y]_Q`.
pub fn admissible_monomials(
    poset: &FinitePoset,
    q: ElementSet,
    x: u64,
    y: u64,
) -> Result<Vec<Monomial>, IncidenceError> {
    let (xi, yi) = (poset.index(x)?, poset.index(y)?);
    let mut out = vec![Monomial::one()];
    let mut stack: Vec<(u16, i32)> = Vec::new();
    fn extend(
        poset: &FinitePoset,
        q: ElementSet,
        xi: usize,
        yi: usize,
        stack: &mut Vec<(u16, i32)>,
        out: &mut Vec<Monomial>,
    ) {
        // Next z strictly above the last w (or at least x), then a w above it.
        let floor = stack.last().map(|&(v, _)| v as usize);
        for z in 0..poset.len() {
            let above = match floor {
                Some(f) => poset.lt_idx(f, z),
                None => poset.leq_idx(xi, z),
            };
            if !above || !q.has(z) || !poset.leq_idx(z, yi) {
                continue;
            }
            for w in 0..poset.len() {
                if poset.lt_idx(z, w) && poset.leq_idx(w, yi) {
                    stack.push((z as u16, -1));
                    stack.push((w as u16, 1));
                    out.push(Monomial::from_pairs(stack.iter().copied()));
                    extend(poset, q, xi, yi, stack, out);
                    stack.pop();
                    stack.pop();
                }
            }
        }
    }
    if poset.leq_idx(xi, yi) {
        extend(poset, q, xi, yi, &mut stack, &mut out);
    }
    Ok(out)
}

/// Cached Möbius, zeta and theta functions of one poset, shared by the
/// coefficient-level checks.
pub struct ThetaContext {
    poset: Arc<FinitePoset>,
    mu: IncidenceElement<i64>,
    zeta: IncidenceElement<i64>,
    theta: IncidenceElement<LaurentPoly>,
}

impl ThetaContext {
    pub fn new(poset: &Arc<FinitePoset>) -> Result<Self, IncidenceError> {
        Ok(ThetaContext {
            poset: poset.clone(),
            mu: mobius(poset, None)?,
            zeta: IncidenceElement::zeta(poset, 0i64),
            theta: theta_element(poset)?,
        })
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn mu(&self) -> &IncidenceElement<i64> {
        &self.mu
    }

    pub fn theta(&self) -> &IncidenceElement<LaurentPoly> {
        &self.theta
    }

    /// `Inv_Q theta(x, y)` as a Laurent polynomial in the `t` variables.
    pub fn inverse_theta(&self, q: ElementSet, x: u64, y: u64) -> Result<LaurentPoly, IncidenceError> {
        self.theta.restricted_inverse(q, x, y)
    }

    /// The coefficient of `m` in `Inv_Q theta(x, y)` from the closed product
    /// `Inv_Q mu(x, z_1) * prod mu_{Q + w_i}(z_i, w_i) Gamma_Q(w_i, z_{i+1})`
    /// with `z_{k+1} = y`; zero for monomials that are not admissible.
    pub fn theta_inverse_coefficient(
        &self,
        q: ElementSet,
        x: u64,
        y: u64,
        m: &Monomial,
    ) -> Result<BigRational, IncidenceError> {
        let poset = &self.poset;
        for l in [x, y] {
            if !q.contains(poset, l) {
                return Err(IncidenceError::OutsideSubset(l));
            }
        }
        let Some(form) = admissible_form(poset, m, q, x, y)? else {
            return Ok(BigRational::zero());
        };
        let z1 = form.z.first().copied().unwrap_or(y);
        let mut value = self.mu.restricted_inverse(q, x, z1)?;
        for (i, (&z, &w)) in form.z.iter().zip(&form.w).enumerate() {
            if value == 0 {
                break;
            }
            let next = form.z.get(i + 1).copied().unwrap_or(y);
            let qi = q.with(poset, w)?;
            value *= self.zeta.restricted_inverse(qi, z, w)?;
            value *= gamma_with(poset, &self.mu, q, w, next)?;
        }
        Ok(BigRational::from_integer(value.into()))
    }

    /// Compares every coefficient of `Inv_Q theta(x, y)` with the closed
    /// product, over the union of its support and all admissible monomials.
    pub fn theta_coefficient_check(&self, q: ElementSet, x: u64, y: u64) -> Result<bool, IncidenceError> {
        let poset = &self.poset;
        let inv = self.inverse_theta(q, x, y)?;
        for (m, c) in inv.terms() {
            if admissible_form(poset, m, q, x, y)?.is_none() {
                return Ok(false);
            }
            if self.theta_inverse_coefficient(q, x, y, m)? != *c {
                return Ok(false);
            }
        }
        for m in admissible_monomials(poset, q, x, y)? {
            if inv.coefficient(&m) != self.theta_inverse_coefficient(q, x, y, &m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks `Inv_Q theta(x, y; t) = -(t_y / t_x) Inv_{Q'} theta(x, y; 1/t)`
    /// as a polynomial identity, together with the coefficient relation
    /// `[Inv_Q theta]_m = -[Inv_{Q'} theta]_{m^-1 t_y / t_x}` on every
    /// monomial where both sides are admissible.
    pub fn theta_inversion_check(&self, pair: &SubposetPair) -> Result<bool, IncidenceError> {
        let poset = &self.poset;
        let pair = SubposetPair::new(poset, pair.q, pair.qc, pair.x, pair.y)?;
        let (x, y) = (pair.x, pair.y);
        if x == y {
            return Err(IncidenceError::InvalidPair("interval must have x < y".into()));
        }
        let lhs = self.inverse_theta(pair.q, x, y)?;
        let other = self.inverse_theta(pair.qc, x, y)?;
        let (xi, yi) = (poset.index(x)? as u16, poset.index(y)? as u16);
        let ratio = Monomial::from_pairs([(yi, 1), (xi, -1)]);
        let rhs = other.invert_variables().mul_monomial(&ratio).neg();
        if lhs != rhs {
            return Ok(false);
        }
        for m in admissible_monomials(poset, pair.q, x, y)? {
            let dual = m.inverse().mul(&ratio);
            if admissible_form(poset, &dual, pair.qc, x, y)?.is_some()
                && lhs.coefficient(&m) != -other.coefficient(&dual)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks `Inv_Q mu (x, y) = -mu_{Q'}(x, y)` for a complementing pair.
    pub fn mobius_completion_check(&self, pair: &SubposetPair) -> Result<bool, IncidenceError> {
        let pair = SubposetPair::new(&self.poset, pair.q, pair.qc, pair.x, pair.y)?;
        if pair.x == pair.y {
            return Err(IncidenceError::InvalidPair("interval must have x < y".into()));
        }
        let lhs = self.mu.restricted_inverse(pair.q, pair.x, pair.y)?;
        let rhs = self.zeta.restricted_inverse(pair.qc, pair.x, pair.y)?;
        Ok(lhs == -rhs)
    }
}

/// See [`ThetaContext::theta_inverse_coefficient`].
pub fn theta_inverse_coefficient(
    poset: &Arc<FinitePoset>,
    q: ElementSet,
    x: u64,
    y: u64,
    m: &Monomial,
) -> Result<BigRational, IncidenceError> {
    ThetaContext::new(poset)?.theta_inverse_coefficient(q, x, y, m)
}

/// See [`ThetaContext::theta_coefficient_check`].
pub fn theta_coefficient_check(
    poset: &Arc<FinitePoset>,
    q: ElementSet,
    x: u64,
    y: u64,
) -> Result<bool, IncidenceError> {
    ThetaContext::new(poset)?.theta_coefficient_check(q, x, y)
}

/// See [`ThetaContext::theta_inversion_check`].
pub fn theta_inversion_check(poset: &Arc<FinitePoset>, pair: &SubposetPair) -> Result<bool, IncidenceError> {
    ThetaContext::new(poset)?.theta_inversion_check(pair)
}

/// `Inv_Q theta(x, y)` from a precomputed theta.
pub fn inverse_theta(
    theta: &IncidenceElement<LaurentPoly>,
    q: ElementSet,
    x: u64,
    y: u64,
) -> Result<LaurentPoly, IncidenceError> {
    theta.restricted_inverse(q, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::DivisorPoset;

    fn u_vars() -> VarSet {
        VarSet::new(&["u"])
    }

    #[test]
    fn theta_specializations() {
        let p = DivisorPoset::new(4).unwrap();
        let u = u_vars();
        let t = theta(p.poset(), 1, 4).unwrap();
        let expected = &LaurentPoly::var(&u, "u", 3) - &LaurentPoly::var(&u, "u", 1);
        assert_eq!(specialize_to_u(&p, &t, &u), expected);
        assert!(theta(p.poset(), 2, 2).unwrap().is_one());
        let p2 = DivisorPoset::new(2).unwrap();
        let t = specialize_to_u(&p2, &theta(p2.poset(), 1, 2).unwrap(), &u);
        assert_eq!(t, &LaurentPoly::var(&u, "u", 1) - &LaurentPoly::one(&u));
        assert_eq!(theta(p.poset(), 4, 2).err(), Some(IncidenceError::NotComparable(4, 2)));
    }

    #[test]
    fn admissible_forms() {
        let p = DivisorPoset::new(4).unwrap();
        let q = ElementSet::all(&p);
        let idx = |l| p.index(l).unwrap() as u16;
        assert_eq!(
            admissible_form(&p, &Monomial::one(), q, 1, 4).unwrap(),
            Some(AdmissibleForm { z: vec![], w: vec![] })
        );
        let m = Monomial::from_pairs([(idx(2), -1), (idx(4), 1)]);
        assert_eq!(
            admissible_form(&p, &m, q, 1, 4).unwrap(),
            Some(AdmissibleForm { z: vec![2], w: vec![4] })
        );
        let p6 = DivisorPoset::new(6).unwrap();
        let m = Monomial::var(p6.index(3).unwrap() as u16, 1);
        assert_eq!(admissible_form(&p6, &m, ElementSet::all(&p6), 1, 6).unwrap(), None);
        // z outside Q
        let q = ElementSet::from_labels(&p, &[1, 4]).unwrap();
        let m = Monomial::from_pairs([(idx(2), -1), (idx(4), 1)]);
        assert_eq!(admissible_form(&p, &m, q, 1, 4).unwrap(), None);
    }

    #[test]
    fn closed_form_coefficients_match_inverse() {
        let p = DivisorPoset::new(6).unwrap();
        let q = ElementSet::all(&p);
        let th = theta_element(p.poset()).unwrap();
        let inv = inverse_theta(&th, q, 1, 6).unwrap();
        let m = Monomial::from_pairs([(p.index(1).unwrap() as u16, -1), (p.index(6).unwrap() as u16, 1)]);
        assert_eq!(
            inv.coefficient(&m),
            theta_inverse_coefficient(p.poset(), q, 1, 6, &m).unwrap()
        );
        assert!(theta_coefficient_check(p.poset(), q, 1, 6).unwrap());
        let m3 = Monomial::var(p.index(3).unwrap() as u16, 1);
        assert!(theta_inverse_coefficient(p.poset(), q, 1, 6, &m3).unwrap().is_zero());
    }

    #[test]
    fn inversion_on_two_element_interval() {
        let p = DivisorPoset::new(5).unwrap();
        let ends = ElementSet::all(&p);
        let pair = SubposetPair::new(&p, ends, ends, 1, 5).unwrap();
        assert!(theta_inversion_check(p.poset(), &pair).unwrap());
    }
}

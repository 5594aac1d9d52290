use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poset::{ElementSet, FinitePoset};
use super::IncidenceError;
use crate::arith::{LaurentPoly, RationalFunction};

/// Values an incidence function can take. Constants are produced from an
/// existing value so that polynomial rings keep their variable set.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;
    fn lift_i64(&self, v: i64) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coefficient for i64 {
    fn zero_like(&self) -> Self {
        0
    }
    fn one_like(&self) -> Self {
        1
    }
    fn is_zero_value(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("incidence coefficient overflow")
    }
    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(*other).expect("incidence coefficient overflow")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        matches!(*self, 1 | -1).then_some(*self)
    }
    fn lift_i64(&self, v: i64) -> Self {
        v
    }
}

impl Coefficient for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn lift_i64(&self, v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

impl Coefficient for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(self.vars())
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        LaurentPoly::try_inverse(self)
    }
    fn lift_i64(&self, v: i64) -> Self {
        LaurentPoly::from_int(self.vars(), v)
    }
}

impl Coefficient for RationalFunction {
    fn zero_like(&self) -> Self {
        RationalFunction::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        RationalFunction::one(self.vars())
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn lift_i64(&self, v: i64) -> Self {
        RationalFunction::from_int(self.vars(), v)
    }
}

/// A function on comparable pairs of a finite poset, zero elsewhere.
#[derive(Clone)]
pub struct IncidenceElement<C> {
    poset: Arc<FinitePoset>,
    zero: C,
    /// Row-major by poset index; entries off the order relation are zero.
    values: Vec<C>,
}

impl<C: Coefficient> IncidenceElement<C> {
    /// Builds an element from its values on pairs `x <= y`; `zero` fixes the
    /// coefficient ring.
    pub fn from_fn<F>(poset: &Arc<FinitePoset>, zero: C, mut f: F) -> Self
    where
        F: FnMut(u64, u64) -> C,
    {
        let n = poset.len();
        let mut values = vec![zero.clone(); n * n];
        for i in 0..n {
            for j in 0..n {
                if poset.leq_idx(i, j) {
                    values[i * n + j] = f(poset.label(i), poset.label(j));
                }
            }
        }
        IncidenceElement {
            poset: poset.clone(),
            zero: zero.zero_like(),
            values,
        }
    }

    pub fn delta(poset: &Arc<FinitePoset>, zero: C) -> Self {
        let one = zero.one_like();
        Self::from_fn(poset, zero, |x, y| if x == y { one.clone() } else { one.zero_like() })
    }

    pub fn zeta(poset: &Arc<FinitePoset>, zero: C) -> Self {
        let one = zero.one_like();
        Self::from_fn(poset, zero, |_, _| one.clone())
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    fn n(&self) -> usize {
        self.poset.len()
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> &C {
        &self.values[i * self.n() + j]
    }

    pub(crate) fn set_at(&mut self, i: usize, j: usize, c: C) {
        let n = self.n();
        self.values[i * n + j] = c;
    }

    pub fn get(&self, x: u64, y: u64) -> Result<C, IncidenceError> {
        let (i, j) = (self.poset.index(x)?, self.poset.index(y)?);
        Ok(self.at(i, j).clone())
    }

    pub fn zero_value(&self) -> &C {
        &self.zero
    }

    /// Applies `f` to every stored value.
    pub fn map<D: Coefficient, F: FnMut(&C) -> D>(&self, zero: D, mut f: F) -> IncidenceElement<D> {
        let n = self.n();
        let mut values = vec![zero.clone(); n * n];
        for i in 0..n {
            for j in 0..n {
                if self.poset.leq_idx(i, j) {
                    values[i * n + j] = f(self.at(i, j));
                }
            }
        }
        IncidenceElement {
            poset: self.poset.clone(),
            zero,
            values,
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), IncidenceError> {
        if Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset {
            Ok(())
        } else {
            Err(IncidenceError::PosetMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, IncidenceError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a = a.add(b);
        }
        Ok(out)
    }

    /// Convolution `(a * b)(x, y) = sum over x <= z <= y of a(x, z) b(z, y)`.
    pub fn convolve(&self, other: &Self) -> Result<Self, IncidenceError> {
        self.check_same(other)?;
        let n = self.n();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                if !self.poset.leq_idx(i, j) {
                    continue;
                }
                let mut acc = self.zero.clone();
                for k in i..=j {
                    if self.poset.leq_idx(i, k) && self.poset.leq_idx(k, j) {
                        let (a, b) = (self.at(i, k), other.at(k, j));
                        if !a.is_zero_value() && !b.is_zero_value() {
                            acc = acc.add(&a.mul(b));
                        }
                    }
                }
                out.set_at(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Two-sided inverse by the recursion
    /// `inv(x, y) = -e(x, x)^-1 * sum over x < z <= y of e(x, z) inv(z, y)`.
    pub fn inverse(&self) -> Result<Self, IncidenceError> {
        self.inverse_on(ElementSet::all(&self.poset))
    }

    /// The inverse of the restriction to `q`, stored on the full poset with
    /// zeros outside `q`.
    pub fn inverse_on(&self, q: ElementSet) -> Result<Self, IncidenceError> {
        let n = self.n();
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            diag_inv.push(if q.has(i) {
                Some(
                    self.at(i, i)
                        .try_inverse()
                        .ok_or(IncidenceError::NotInvertible(self.poset.label(i)))?,
                )
            } else {
                None
            });
        }
        let mut out = self.map(self.zero.clone(), |_| self.zero.clone());
        for j in (0..n).filter(|&j| q.has(j)) {
            out.set_at(j, j, diag_inv[j].clone().unwrap());
            for i in (0..j).rev().filter(|&i| q.has(i) && self.poset.lt_idx(i, j)) {
                let mut acc = self.zero.clone();
                for k in i + 1..=j {
                    if q.has(k) && self.poset.lt_idx(i, k) && self.poset.leq_idx(k, j) {
                        let (a, b) = (self.at(i, k), out.at(k, j));
                        if !a.is_zero_value() && !b.is_zero_value() {
                            acc = acc.add(&a.mul(b));
                        }
                    }
                }
                let v = diag_inv[i].as_ref().unwrap().mul(&acc).neg();
                out.set_at(i, j, v);
            }
        }
        Ok(out)
    }

    /// Inverse by the alternating sum over chains; requires a unit diagonal.
    pub fn inverse_via_chains(&self) -> Result<Self, IncidenceError> {
        let n = self.n();
        let one = self.zero.one_like();
        for i in 0..n {
            if *self.at(i, i) != one {
                return Err(IncidenceError::NonUnitDiagonal(self.poset.label(i)));
            }
        }
        let mut out = self.clone();
        let full = self.poset.full_mask();
        for i in 0..n {
            for j in 0..n {
                if !self.poset.leq_idx(i, j) {
                    continue;
                }
                let mut acc = self.zero.clone();
                let mut cur = vec![i];
                self.poset.walk_chains(j, full, None, &mut cur, &mut |c| {
                    let mut term = one.clone();
                    for w in c.windows(2) {
                        term = term.mul(self.at(w[0], w[1]));
                    }
                    if c.len() % 2 == 0 {
                        term = term.neg();
                    }
                    acc = acc.add(&term);
                });
                out.set_at(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `Inv_Q e (x, y)`: the inverse of the restriction to `q`, at one pair.
    pub fn restricted_inverse(&self, q: ElementSet, x: u64, y: u64) -> Result<C, IncidenceError> {
        let (i, j) = (self.poset.index(x)?, self.poset.index(y)?);
        for (l, idx) in [(x, i), (y, j)] {
            if !q.has(idx) {
                return Err(IncidenceError::OutsideSubset(l));
            }
        }
        if !self.poset.leq_idx(i, j) {
            return Ok(self.zero.clone());
        }
        // Only the interval matters, so restrict before inverting.
        let sub = ElementSet(q.0 & self.poset.interval_mask(i, j));
        Ok(self.inverse_on(sub)?.at(i, j).clone())
    }
}

impl<C: Coefficient> PartialEq for IncidenceElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset && self.values == other.values
    }
}

impl<C: Coefficient> fmt::Debug for IncidenceElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                if self.poset.leq_idx(i, j) {
                    m.entry(&(self.poset.label(i), self.poset.label(j)), self.at(i, j));
                }
            }
        }
        m.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::DivisorPoset;

    #[test]
    fn zeta_squared_counts_intervals() {
        let p = DivisorPoset::new(12).unwrap();
        let z = IncidenceElement::zeta(p.poset(), 0i64);
        let zz = z.convolve(&z).unwrap();
        for &x in p.labels() {
            for &y in p.labels() {
                assert_eq!(zz.get(x, y).unwrap(), p.interval(x, y).unwrap().len() as i64);
            }
        }
    }

    #[test]
    fn delta_is_identity_and_self_inverse() {
        let p = DivisorPoset::new(30).unwrap();
        let d = IncidenceElement::delta(p.poset(), 0i64);
        let z = IncidenceElement::zeta(p.poset(), 0i64);
        assert_eq!(d.convolve(&z).unwrap(), z);
        assert_eq!(z.convolve(&d).unwrap(), z);
        assert_eq!(d.inverse().unwrap(), d);
    }

    #[test]
    fn non_invertible_diagonal_is_rejected() {
        let p = DivisorPoset::new(6).unwrap();
        let e = IncidenceElement::from_fn(p.poset(), 0i64, |x, y| if x == 2 && y == 2 { 2 } else { 1 });
        assert_eq!(e.inverse().err(), Some(IncidenceError::NotInvertible(2)));
        assert_eq!(e.inverse_via_chains().err(), Some(IncidenceError::NonUnitDiagonal(2)));
    }

    #[test]
    fn chain_inverse_of_zeta() {
        let p = DivisorPoset::new(12).unwrap();
        let z = IncidenceElement::zeta(p.poset(), 0i64);
        let mu = z.inverse_via_chains().unwrap();
        assert_eq!(mu, z.inverse().unwrap());
        assert_eq!(mu.get(1, 12).unwrap(), 0);
        let p6 = DivisorPoset::new(6).unwrap();
        let mu6 = IncidenceElement::zeta(p6.poset(), 0i64).inverse_via_chains().unwrap();
        assert_eq!(mu6.get(1, 6).unwrap(), 1);
    }

    #[test]
    fn restricted_inverse_on_two_elements() {
        let p = DivisorPoset::new(12).unwrap();
        let z = IncidenceElement::zeta(p.poset(), 0i64);
        let q = ElementSet::from_labels(&p, &[1, 12]).unwrap();
        assert_eq!(z.restricted_inverse(q, 1, 12).unwrap(), -1);
        assert_eq!(
            z.restricted_inverse(q, 1, 6).err(),
            Some(IncidenceError::OutsideSubset(6))
        );
    }
}

//! Multivariate Laurent polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::ArithError;

/// Index of a variable inside a [`VarSet`].
pub type VarId = u16;

/// An ordered, named set of indeterminates shared by polynomials that can be
/// combined with each other.
#[derive(Clone)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        VarSet(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.0[id as usize]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.0.iter().position(|n| n == name).map(|i| i as VarId)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarSet {}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A Laurent monomial stored sparsely as `(variable, exponent)` pairs sorted
/// by variable, with no zero exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(SmallVec<[(VarId, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(id: VarId, exp: i32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(smallvec::smallvec![(id, exp)])
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i32)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, id: VarId) -> i32 {
        self.0.iter().find(|&&(v, _)| v == id).map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(VarId, i32)] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Graded lexicographic comparison: higher total degree first, ties
    /// broken by the exponent of the lowest-numbered variable.
    pub fn grlex_cmp(&self, other: &Monomial, nvars: usize) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for v in 0..nvars as VarId {
            match self.exponent(v).cmp(&other.exponent(v)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// A Laurent polynomial over `Q` in the variables of a [`VarSet`].
///
/// No stored coefficient is ever zero, so structural equality of the term
/// maps is mathematical equality.
#[derive(Clone)]
pub struct LaurentPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(vars: &VarSet) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &VarSet, c: BigRational) -> Self {
        Self::monomial(vars, Monomial::one(), c)
    }

    pub fn from_int(vars: &VarSet, c: i64) -> Self {
        Self::constant(vars, BigRational::from_integer(c.into()))
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable `name` raised to `exp`.
    ///
    /// Panics if `name` is not part of `vars`.
    pub fn var(vars: &VarSet, name: &str, exp: i32) -> Self {
        let id = vars.id(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::monomial(vars, Monomial::var(id, exp), BigRational::one())
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, summing
    /// repeats and dropping zeros.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Monomial)>,
    {
        let mut p = Self::zero(vars);
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Returns `(c, m)` if this polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&BigRational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_monomial() {
            Some((c, m)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &LaurentPoly) -> Result<(), ArithError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(ArithError::VariableMismatch)
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, ArithError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, ArithError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, ArithError> {
        self.check_vars(other)?;
        let mut out = LaurentPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// `self += factor * other`, in place.
    pub(crate) fn add_scaled(&mut self, other: &LaurentPoly, factor: &BigRational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    /// Non-negative power.
    pub fn pow(&self, k: u32) -> LaurentPoly {
        if let Some((c, m)) = self.as_monomial() {
            let mut ck = BigRational::one();
            for _ in 0..k {
                ck *= c;
            }
            return LaurentPoly::monomial(&self.vars, m.pow(k as i32), ck);
        }
        let mut result = LaurentPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Units of the Laurent ring are exactly the nonzero scalar multiples of
    /// monomials.
    pub fn try_inverse(&self) -> Option<LaurentPoly> {
        let (c, m) = self.as_monomial()?;
        Some(LaurentPoly::monomial(&self.vars, m.inverse(), c.recip()))
    }

    /// Replaces every monomial by its inverse (`t -> t^{-1}` for all
    /// variables at once).
    pub fn invert_variables(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.inverse(), c.clone())).collect(),
        }
    }

    /// Applies a monomial-to-monomial map term by term into a new variable
    /// set. Distinct source monomials may collide; coefficients are summed.
    pub fn map_monomials<F>(&self, target: &VarSet, mut f: F) -> LaurentPoly
    where
        F: FnMut(&Monomial) -> Monomial,
    {
        let mut out = LaurentPoly::zero(target);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Per-variable minimum exponent over all terms (zero for absent
    /// variables), i.e. the largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let n = self.vars.len();
        let mut mins = vec![i32::MAX; n];
        for m in self.terms.keys() {
            let mut dense = vec![0i32; n];
            for &(v, e) in m.pairs() {
                dense[v as usize] = e;
            }
            for (lo, e) in mins.iter_mut().zip(dense) {
                *lo = (*lo).min(e);
            }
        }
        if self.terms.is_empty() {
            return Monomial::one();
        }
        Monomial::from_pairs(mins.into_iter().enumerate().map(|(v, e)| (v as VarId, e)))
    }

    /// Leading term in graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        let n = self.vars.len();
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0, n))
    }

    /// Terms sorted in descending graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let n = self.vars.len();
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0, n));
        v
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the coefficient numerators (for integer-coefficient input).
    pub fn numerator_gcd(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Evaluates at a rational point given densely by variable index.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, ArithError> {
        if self.vars.len() == 1 && self.terms.len() > 4 {
            let x = point
                .first()
                .ok_or_else(|| ArithError::MissingAssignment(self.vars.name(0).to_string()))?;
            return self.eval_univariate(x);
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.pairs() {
                let x = point
                    .get(v as usize)
                    .ok_or_else(|| ArithError::MissingAssignment(self.vars.name(v).to_string()))?;
                if e < 0 && x.is_zero() {
                    return Err(ArithError::Pole);
                }
                term *= rational_pow(x, e);
            }
            total += term;
        }
        Ok(total)
    }

    /// Horner evaluation in integers: with `x = a/b` and coefficients
    /// `C_k / L`, the sum is `x^lo * sum C_k a^k b^(D-k) / (L b^D)`.
    fn eval_univariate(&self, x: &BigRational) -> Result<BigRational, ArithError> {
        let lo = self.terms.keys().map(|m| m.exponent(0)).min().unwrap_or(0);
        let hi = self.terms.keys().map(|m| m.exponent(0)).max().unwrap_or(0);
        if x.is_zero() {
            return if lo < 0 {
                Err(ArithError::Pole)
            } else {
                Ok(self
                    .terms
                    .get(&Monomial::one())
                    .cloned()
                    .unwrap_or_else(BigRational::zero))
            };
        }
        let l = self.denominator_lcm();
        let mut dense = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (m, c) in &self.terms {
            dense[(m.exponent(0) - lo) as usize] = c.numer() * (&l / c.denom());
        }
        let (a, b) = (x.numer(), x.denom());
        let mut acc = dense.pop().unwrap_or_default();
        let mut bk = BigInt::one();
        for c in dense.iter().rev() {
            bk *= b;
            acc = acc * a + c * &bk;
        }
        let sum = BigRational::new(acc, l * bk);
        Ok(sum * rational_pow(x, lo))
    }

    /// `true` if every exponent of `var` is divisible by `k`.
    pub fn exponents_divisible(&self, var: VarId, k: i32) -> bool {
        self.terms.keys().all(|m| m.exponent(var) % k == 0)
    }

    pub(crate) fn sign_of_leading(&self) -> bool {
        self.leading_term().is_some_and(|(_, c)| c.is_negative())
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, e) in m.pairs() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.vars.name(v))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn rational_pow(x: &BigRational, e: i32) -> BigRational {
    x.pow(e)
}

/// Writes terms in descending graded lexicographic order, e.g.
/// `2*t^2 - u*v + 1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on mismatched variable sets; use the `try_` form to
            /// handle that case.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$try(rhs)
                    .expect("Laurent polynomials over different variable sets")
            }
        }
        impl std::ops::$trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

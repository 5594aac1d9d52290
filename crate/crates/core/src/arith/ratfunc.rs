//! Rational functions over `Q` as a Laurent numerator divided by a product of
//! canonical polynomial factors.
//!
//! Denominators are never reduced against numerators. Keeping them as a
//! product of factors that have no monomial content and a leading
//! coefficient of one lets sums whose denominators share factors combine
//! through the least common multiple of the factor lists instead of a full
//! product, which keeps the `D_n` family small without a multivariate gcd.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{LaurentPoly, Monomial, VarSet};
use super::ArithError;

#[derive(Clone)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: Vec<(LaurentPoly, u32)>,
}

/// Splits a nonzero polynomial into `c * m * f` with `f` free of monomial
/// content and with leading coefficient one. Returns `None` for `f` when
/// the polynomial is a single term.
fn canonical_split(p: &LaurentPoly) -> (BigRational, Monomial, Option<LaurentPoly>) {
    debug_assert!(!p.is_zero());
    if let Some((c, m)) = p.as_monomial() {
        return (c.clone(), m.clone(), None);
    }
    let content = p.monomial_content();
    let shifted = p.mul_monomial(&content.inverse());
    let lead = shifted
        .leading_term()
        .map(|(_, c)| c.clone())
        .expect("nonzero polynomial");
    let factor = shifted.scale(&lead.recip());
    (lead, content, Some(factor))
}

impl RationalFunction {
    pub fn zero(vars: &VarSet) -> Self {
        Self::from_poly(LaurentPoly::zero(vars))
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::from_poly(LaurentPoly::one(vars))
    }

    pub fn from_int(vars: &VarSet, c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(vars, c))
    }

    pub fn var(vars: &VarSet, name: &str, exp: i32) -> Self {
        Self::from_poly(LaurentPoly::var(vars, name, exp))
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        RationalFunction { num, den: Vec::new() }
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn new(num: LaurentPoly, den: &LaurentPoly) -> Result<Self, ArithError> {
        if num.vars() != den.vars() {
            return Err(ArithError::VariableMismatch);
        }
        let mut r = Self::from_poly(num);
        r.divide_by_poly(den, 1)?;
        Ok(r)
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    /// The denominator expanded into a single polynomial.
    pub fn denominator(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one(self.vars());
        for (f, k) in &self.den {
            d = &d * &f.pow(*k);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `true` when the value is a Laurent polynomial in its stored form.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    fn push_factor(&mut self, f: LaurentPoly, k: u32) {
        if k == 0 {
            return;
        }
        if let Some(slot) = self.den.iter_mut().find(|(g, _)| *g == f) {
            slot.1 += k;
        } else {
            self.den.push((f, k));
        }
    }

    /// Divides by `p^k`, pulling the unit part of `p` into the numerator.
    fn divide_by_poly(&mut self, p: &LaurentPoly, k: u32) -> Result<(), ArithError> {
        if p.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if k == 0 {
            return Ok(());
        }
        let (c, m, f) = canonical_split(p);
        let unit = LaurentPoly::monomial(self.vars(), m.pow(-(k as i32)), pow_rational(&c, k).recip());
        self.num = &self.num * &unit;
        if let Some(f) = f {
            self.push_factor(f, k);
        }
        Ok(())
    }

    fn check_vars(&self, other: &Self) -> Result<(), ArithError> {
        if self.vars() == other.vars() {
            Ok(())
        } else {
            Err(ArithError::VariableMismatch)
        }
    }

    /// Multiplicity of factor `f` in the denominator.
    fn multiplicity(&self, f: &LaurentPoly) -> u32 {
        self.den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k)
    }

    /// Product of the factors that `target` has beyond `self`.
    fn missing_product(&self, target: &[(LaurentPoly, u32)]) -> LaurentPoly {
        let mut p = LaurentPoly::one(self.vars());
        for (f, k) in target {
            let have = self.multiplicity(f);
            if *k > have {
                p = &p * &f.pow(k - have);
            }
        }
        p
    }

    fn lcm_factors(&self, other: &Self) -> Vec<(LaurentPoly, u32)> {
        let mut out = self.den.clone();
        for (f, k) in &other.den {
            if let Some(slot) = out.iter_mut().find(|(g, _)| g == f) {
                slot.1 = slot.1.max(*k);
            } else {
                out.push((f.clone(), *k));
            }
        }
        out
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Result<Self, ArithError> {
        self.check_vars(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(if negate { other.neg() } else { other.clone() });
        }
        let den = self.lcm_factors(other);
        let a = &self.num * &self.missing_product(&den);
        let b = &other.num * &other.missing_product(&den);
        let num = if negate { &a - &b } else { &a + &b };
        Ok(RationalFunction { num, den })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.add_signed(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.add_signed(other, true)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars()));
        }
        let mut out = RationalFunction {
            num: &self.num * &other.num,
            den: self.den.clone(),
        };
        for (f, k) in &other.den {
            out.push_factor(f.clone(), *k);
        }
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let mut out = Self::from_poly(self.denominator());
        out.divide_by_poly(&self.num, 1)?;
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: if c.is_zero() { Vec::new() } else { self.den.clone() },
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        RationalFunction {
            num: &self.num * p,
            den: if p.is_zero() { Vec::new() } else { self.den.clone() },
        }
    }

    pub fn div_poly(&self, p: &LaurentPoly) -> Result<Self, ArithError> {
        let mut out = self.clone();
        out.divide_by_poly(p, 1)?;
        Ok(out)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i32) -> Result<Self, ArithError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.iter().map(|(f, m)| (f.clone(), m * e)).collect(),
        })
    }

    /// Exact equality by cross-multiplication after cancelling shared
    /// denominator factors.
    pub fn equals(&self, other: &Self) -> Result<bool, ArithError> {
        self.check_vars(other)?;
        let mut lhs = self.num.clone();
        let mut rhs = other.num.clone();
        for (f, k) in &other.den {
            let have = self.multiplicity(f);
            if *k > have {
                lhs = &lhs * &f.pow(k - have);
            }
        }
        for (f, k) in &self.den {
            let have = other.multiplicity(f);
            if *k > have {
                rhs = &rhs * &f.pow(k - have);
            }
        }
        Ok(lhs == rhs)
    }

    /// Substitutes every variable of `self` by a rational function over
    /// `target`. Variables of `self` absent from `assignment` are an error.
    pub fn substitute(&self, target: &VarSet, assignment: &[(&str, RationalFunction)]) -> Result<Self, ArithError> {
        let mut images = Vec::with_capacity(self.vars().len());
        for name in self.vars().names() {
            let img = assignment
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, r)| r)
                .ok_or_else(|| ArithError::MissingAssignment(name.to_string()))?;
            if img.vars() != target {
                return Err(ArithError::VariableMismatch);
            }
            images.push(img);
        }
        let monomial_images: Option<Vec<(BigRational, Monomial)>> = images
            .iter()
            .map(|r| {
                if r.den.is_empty() {
                    r.num.as_monomial().map(|(c, m)| (c.clone(), m.clone()))
                } else {
                    None
                }
            })
            .collect();
        let mut out = match &monomial_images {
            Some(imgs) => Self::from_poly(substitute_monomials(&self.num, target, imgs)),
            None => substitute_general(&self.num, target, &images)?,
        };
        for (f, k) in &self.den {
            let img = match &monomial_images {
                Some(imgs) => Self::from_poly(substitute_monomials(f, target, imgs)),
                None => substitute_general(f, target, &images)?,
            };
            if img.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
            out = out.try_mul(&img.pow(-(*k as i32))?)?;
        }
        Ok(out)
    }

    /// Evaluates at a point given as `(variable, value)` pairs.
    pub fn eval(&self, point: &[(&str, BigRational)]) -> Result<BigRational, ArithError> {
        let dense = dense_point(self.vars(), point)?;
        let mut den = BigRational::one();
        for (f, k) in &self.den {
            let v = f.eval(&dense)?;
            if v.is_zero() {
                return Err(ArithError::Pole);
            }
            den *= pow_rational(&v, *k);
        }
        Ok(self.num.eval(&dense)? / den)
    }

    /// For a function of one variable, the fully reduced
    /// `(numerator, denominator)` pair with coprime polynomials.
    pub fn reduced_univariate(&self) -> Result<(LaurentPoly, LaurentPoly), ArithError> {
        if self.vars().len() != 1 {
            return Err(ArithError::NotUnivariate);
        }
        let vars = self.vars().clone();
        let (num_shift, mut num_dense) = univariate::to_dense(&self.num);
        if num_dense.is_empty() {
            return Ok((LaurentPoly::zero(&vars), LaurentPoly::one(&vars)));
        }
        // Cancel against one stored factor at a time. Factors t^a - 1 split
        // into cyclotomic polynomials, each tested for divisibility; any
        // other factor goes through a gcd.
        let mut den_shift = 0;
        let mut den_dense = vec![BigRational::one()];
        let mut cyclo: HashMap<u64, Vec<BigInt>> = HashMap::new();
        let mut den_int = vec![BigInt::one()];
        for (f, k) in &self.den {
            let (shift, f_dense) = univariate::to_dense(f);
            den_shift += shift * *k as i32;
            let binomial = univariate::as_t_pow_minus_one(&f_dense);
            for _ in 0..*k {
                if let Some(a) = binomial {
                    for d in crate::numtheory::divisors(a) {
                        let phi = cyclo.entry(d).or_insert_with(|| univariate::cyclotomic(d));
                        match univariate::div_monic_int(&num_dense, phi) {
                            Some(q) => num_dense = q,
                            None => den_int = univariate::mul(&den_int, phi),
                        }
                    }
                    continue;
                }
                let mut f = f_dense.clone();
                loop {
                    let g = univariate::gcd(&num_dense, &f);
                    if g.len() <= 1 {
                        break;
                    }
                    num_dense = univariate::div_exact(&num_dense, &g);
                    f = univariate::div_exact(&f, &g);
                }
                den_dense = univariate::mul(&den_dense, &f);
            }
        }
        let den_int: Vec<BigRational> = den_int.into_iter().map(BigRational::from_integer).collect();
        let den_dense = univariate::mul(&den_dense, &den_int);
        Ok((
            univariate::from_dense(&vars, &num_dense, num_shift),
            univariate::from_dense(&vars, &den_dense, den_shift),
        ))
    }

    /// Canonical text form: expanded numerator over expanded denominator
    /// with coprime integer coefficients, no negative exponents, and a
    /// positive leading denominator coefficient. Univariate functions are
    /// additionally reduced to lowest terms.
    pub fn render(&self) -> String {
        let (num, den) = match self.reduced_univariate() {
            Ok(pair) => pair,
            Err(_) => (self.num.clone(), self.denominator()),
        };
        render_fraction(&num, &den)
    }
}

fn pow_rational(c: &BigRational, k: u32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..k {
        r *= c;
    }
    r
}

fn dense_point(vars: &VarSet, point: &[(&str, BigRational)]) -> Result<Vec<BigRational>, ArithError> {
    vars.names()
        .map(|name| {
            point
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| ArithError::MissingAssignment(name.to_string()))
        })
        .collect()
}

fn substitute_monomials(p: &LaurentPoly, target: &VarSet, images: &[(BigRational, Monomial)]) -> LaurentPoly {
    let mut out = LaurentPoly::zero(target);
    for (m, c) in p.terms() {
        let mut coeff = c.clone();
        let mut mono = Monomial::one();
        for &(v, e) in m.pairs() {
            let (ic, im) = &images[v as usize];
            coeff *= super::rational_pow(ic, e);
            mono = mono.mul(&im.pow(e));
        }
        out.add_term(mono, coeff);
    }
    out
}

/// `p(images)` over a common denominator: with `img_i = N_i / D_i`, every
/// term is multiplied through by `prod N_i^{b_i} D_i^{a_i}` where `a_i`
/// and `b_i` are the largest positive and negative exponents of variable
/// `i` in `p`.
fn substitute_general(
    p: &LaurentPoly,
    target: &VarSet,
    images: &[&RationalFunction],
) -> Result<RationalFunction, ArithError> {
    let nv = images.len();
    let mut max_pos = vec![0u32; nv];
    let mut max_neg = vec![0u32; nv];
    for (m, _) in p.terms() {
        for &(v, e) in m.pairs() {
            let v = v as usize;
            if e > 0 {
                max_pos[v] = max_pos[v].max(e as u32);
            } else {
                max_neg[v] = max_neg[v].max((-e) as u32);
            }
        }
    }
    let nums: Vec<&LaurentPoly> = images.iter().map(|r| &r.num).collect();
    let dens: Vec<LaurentPoly> = images.iter().map(|r| r.denominator()).collect();
    for v in 0..nv {
        if max_neg[v] > 0 && nums[v].is_zero() {
            return Err(ArithError::DivisionByZero);
        }
    }
    let mut cache: HashMap<(usize, bool, u32), LaurentPoly> = HashMap::new();
    let mut power = |v: usize, is_num: bool, k: u32| -> LaurentPoly {
        cache
            .entry((v, is_num, k))
            .or_insert_with(|| if is_num { nums[v].pow(k) } else { dens[v].pow(k) })
            .clone()
    };
    let mut acc = LaurentPoly::zero(target);
    for (m, c) in p.terms() {
        let mut term = LaurentPoly::constant(target, c.clone());
        for v in 0..nv {
            let e = m.exponent(v as u16);
            let num_exp = (e + max_neg[v] as i32) as u32;
            let den_exp = (max_pos[v] as i32 - e) as u32;
            if num_exp > 0 {
                term = &term * &power(v, true, num_exp);
            }
            if den_exp > 0 {
                term = &term * &power(v, false, den_exp);
            }
        }
        acc.add_scaled(&term, &BigRational::one());
    }
    let mut out = RationalFunction::from_poly(acc);
    for v in 0..nv {
        if max_neg[v] > 0 {
            out.divide_by_poly(nums[v], max_neg[v])?;
        }
        if max_pos[v] > 0 {
            for (f, k) in &images[v].den {
                out.push_factor(f.clone(), k * max_pos[v]);
            }
        }
    }
    Ok(out)
}

fn render_fraction(num: &LaurentPoly, den: &LaurentPoly) -> String {
    if num.is_zero() {
        return "0".to_string();
    }
    // Shift so that the smaller exponent of each variable becomes zero.
    let (nc, dc) = (num.monomial_content(), den.monomial_content());
    let shift = Monomial::from_pairs((0..num.vars().len() as u16).map(|v| (v, -nc.exponent(v).min(dc.exponent(v)))));
    let (mut num, mut den) = (num.mul_monomial(&shift), den.mul_monomial(&shift));
    let l = num.denominator_lcm().lcm(&den.denominator_lcm());
    let scale = BigRational::from_integer(l);
    num = num.scale(&scale);
    den = den.scale(&scale);
    let g: BigInt = num.numerator_gcd().gcd(&den.numerator_gcd());
    let mut inv = BigRational::from_integer(g).recip();
    if den.sign_of_leading() {
        inv = -inv;
    }
    num = num.scale(&inv);
    den = den.scale(&inv);
    if den.is_one() {
        return num.to_string();
    }
    let bare = |s: String| {
        if s.contains(['*', ' ']) {
            format!("({s})")
        } else {
            s
        }
    };
    let num_s = if num.len() > 1 {
        format!("({num})")
    } else {
        num.to_string()
    };
    format!("{num_s}/{}", bare(den.to_string()))
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction(({}) / [", self.num)?;
        for (i, (g, k)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "({g})^{k}")?;
        }
        write!(f, "])")
    }
}

macro_rules! rf_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                self.$try(rhs).expect("rational function arithmetic failed")
            }
        }
    };
}

rf_binop!(Add, add, try_add);
rf_binop!(Sub, sub, try_sub);
rf_binop!(Mul, mul, try_mul);

/// Dense univariate helpers used only for display reduction.
mod univariate {
    use super::*;

    /// Dense coefficients (lowest degree first) and the exponent shift.
    pub(super) fn to_dense(p: &LaurentPoly) -> (i32, Vec<BigRational>) {
        if p.is_zero() {
            return (0, Vec::new());
        }
        let lo = p.terms().map(|(m, _)| m.exponent(0)).min().unwrap_or(0);
        let hi = p.terms().map(|(m, _)| m.exponent(0)).max().unwrap_or(0);
        let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (m, c) in p.terms() {
            v[(m.exponent(0) - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    pub(super) fn from_dense(vars: &VarSet, c: &[BigRational], shift: i32) -> LaurentPoly {
        LaurentPoly::from_terms(
            vars,
            c.iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), Monomial::var(0, i as i32 + shift))),
        )
    }

    fn trim(v: &mut Vec<BigRational>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        trim(&mut r);
        let lead = b.last().expect("nonzero divisor").clone();
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let q = r.last().unwrap() / &lead;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            trim(&mut r);
        }
        r
    }

    /// `a` scaled to integer coefficients with content one; keeps the
    /// Euclidean remainders from growing.
    fn primitive(a: &[BigRational]) -> Vec<BigRational> {
        let den = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = a
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&(c.numer() * (&den / c.denom()))));
        if num.is_zero() {
            return a.to_vec();
        }
        let scale = BigRational::new(den, num);
        a.iter().map(|c| c * &scale).collect()
    }

    pub(super) fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        x = primitive(&x);
        y = primitive(&y);
        while !y.is_empty() {
            let r = primitive(&rem(&x, &y));
            x = y;
            y = r;
        }
        let lead = x.last().cloned().unwrap_or_else(BigRational::one);
        x.iter().map(|c| c / &lead).collect()
    }

    /// `Some(a)` when the dense polynomial is `t^a - 1`.
    pub(super) fn as_t_pow_minus_one(f: &[BigRational]) -> Option<u64> {
        let a = f.len().checked_sub(1).filter(|&a| a > 0)?;
        let ok = f[0] == -BigRational::one() && f[a].is_one() && f[1..a].iter().all(|c| c.is_zero());
        ok.then_some(a as u64)
    }

    /// The `d`-th cyclotomic polynomial, lowest degree first.
    pub(super) fn cyclotomic(d: u64) -> Vec<BigInt> {
        let divs = crate::numtheory::divisors(d);
        let mut p = vec![BigInt::one()];
        for &e in &divs {
            if crate::numtheory::mobius(d / e) == 1 {
                // times t^e - 1
                let e = e as usize;
                let mut out = vec![BigInt::zero(); p.len() + e];
                for (i, c) in p.iter().enumerate() {
                    out[i] -= c;
                    out[i + e] += c;
                }
                p = out;
            }
        }
        for &e in &divs {
            if crate::numtheory::mobius(d / e) == -1 {
                // exact division by t^e - 1
                let e = e as usize;
                let mut q = vec![BigInt::zero(); p.len() - e];
                for i in (0..q.len()).rev() {
                    q[i] = &p[i + e] + q.get(i + e).cloned().unwrap_or_default();
                }
                p = q;
            }
        }
        p
    }

    const PRIME: u64 = (1 << 61) - 1;

    fn residue(c: &BigRational) -> Option<u64> {
        let p = BigInt::from(PRIME);
        let den = c.denom().mod_floor(&p);
        if den.is_zero() {
            return None;
        }
        let num = c.numer().mod_floor(&p);
        let to_u64 = |x: &BigInt| x.iter_u64_digits().next().unwrap_or(0);
        Some(mulmod(to_u64(&num), powmod(to_u64(&den), PRIME - 2)))
    }

    fn mulmod(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % PRIME as u128) as u64
    }

    fn powmod(mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    }

    /// Remainder of `a` by the monic `m` is zero modulo a large prime; a
    /// `false` answer is certain.
    fn maybe_divisible(a: &[BigRational], m: &[BigInt]) -> bool {
        let Some(mut r) = a.iter().map(residue).collect::<Option<Vec<u64>>>() else {
            return true;
        };
        let m: Vec<u64> = m
            .iter()
            .map(|c| residue(&BigRational::from_integer(c.clone())).unwrap())
            .collect();
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = r.pop().unwrap();
            if lead == 0 {
                continue;
            }
            let shift = r.len() - dm;
            for (i, c) in m[..dm].iter().enumerate() {
                r[shift + i] = (r[shift + i] + PRIME - mulmod(lead, *c)) % PRIME;
            }
        }
        r.iter().all(|&c| c == 0)
    }

    /// `a / m` for a monic integer `m`, when the division is exact.
    pub(super) fn div_monic_int(a: &[BigRational], m: &[BigInt]) -> Option<Vec<BigRational>> {
        if a.len() < m.len() || !maybe_divisible(a, m) {
            return None;
        }
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        let mut q = vec![BigRational::zero(); r.len() - dm];
        for i in (0..q.len()).rev() {
            let c = r[i + dm].clone();
            if !c.is_zero() {
                for (j, mc) in m[..dm].iter().enumerate() {
                    r[i + j] -= &c * mc;
                }
            }
            q[i] = c;
        }
        r[..dm].iter().all(|c| c.is_zero()).then_some(q)
    }

    pub(super) fn mul<T>(a: &[T], b: &[T]) -> Vec<T>
    where
        T: Clone + Zero + for<'x> std::ops::AddAssign<&'x T>,
        for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
    {
        let mut out = vec![T::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        out
    }

    pub(super) fn div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        trim(&mut r);
        if r.len() < b.len() {
            return vec![];
        }
        let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
        let lead = b.last().unwrap().clone();
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() / &lead;
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &c * bc;
            }
            q[shift] = c;
            trim(&mut r);
        }
        debug_assert!(r.is_empty(), "inexact univariate division");
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv() -> VarSet {
        VarSet::new(&["u", "v"])
    }

    fn poly(vs: &VarSet, s: &[(i64, i32, i32)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            vs,
            s.iter().map(|&(c, a, b)| {
                (
                    BigRational::from_integer(c.into()),
                    Monomial::from_pairs([(0, a), (1, b)]),
                )
            }),
        )
    }

    fn d2(vs: &VarSet) -> RationalFunction {
        RationalFunction::new(poly(vs, &[(1, 1, 0), (-1, 0, 0)]), &poly(vs, &[(1, 1, 0), (-1, 0, 1)])).unwrap()
    }

    #[test]
    fn multiplicative_inverse() {
        let vs = uv();
        let a = d2(&vs);
        let b = a.inverse().unwrap();
        assert_eq!(&a * &b, RationalFunction::one(&vs));
    }

    #[test]
    fn antisymmetric_sum_vanishes() {
        let vs = uv();
        let one = LaurentPoly::one(&vs);
        let a = RationalFunction::new(one.clone(), &poly(&vs, &[(1, 1, 0), (-1, 0, 1)])).unwrap();
        let b = RationalFunction::new(one, &poly(&vs, &[(1, 0, 1), (-1, 1, 0)])).unwrap();
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn square_by_self_multiplication() {
        let vs = uv();
        let a = d2(&vs);
        let num = poly(&vs, &[(1, 2, 0), (-2, 1, 0), (1, 0, 0)]);
        let den = poly(&vs, &[(1, 2, 0), (-2, 1, 1), (1, 0, 2)]);
        assert_eq!(&a * &a, RationalFunction::new(num, &den).unwrap());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let vs = uv();
        let r = RationalFunction::new(LaurentPoly::one(&vs), &LaurentPoly::zero(&vs));
        assert_eq!(r.err(), Some(ArithError::DivisionByZero));
        assert_eq!(
            RationalFunction::zero(&vs).inverse().err(),
            Some(ArithError::DivisionByZero)
        );
    }

    #[test]
    fn substitution_of_powers_and_inverses() {
        let vs = uv();
        let f = d2(&vs);
        // u -> u^2
        let g = f
            .substitute(
                &vs,
                &[
                    ("u", RationalFunction::var(&vs, "u", 2)),
                    ("v", RationalFunction::var(&vs, "v", 1)),
                ],
            )
            .unwrap();
        let expected = RationalFunction::new(
            poly(&vs, &[(1, 2, 0), (-1, 0, 0)]),
            &poly(&vs, &[(1, 2, 0), (-1, 0, 1)]),
        )
        .unwrap();
        assert_eq!(g, expected);
        // u -> 1/u, v -> 1/v gives v (u - 1) / (u - v)
        let h = f
            .substitute(
                &vs,
                &[
                    ("u", RationalFunction::var(&vs, "u", -1)),
                    ("v", RationalFunction::var(&vs, "v", -1)),
                ],
            )
            .unwrap();
        let expected = RationalFunction::new(
            poly(&vs, &[(1, 1, 1), (-1, 0, 1)]),
            &poly(&vs, &[(1, 1, 0), (-1, 0, 1)]),
        )
        .unwrap();
        assert_eq!(h, expected);
        // identity
        let id = f
            .substitute(
                &vs,
                &[
                    ("u", RationalFunction::var(&vs, "u", 1)),
                    ("v", RationalFunction::var(&vs, "v", 1)),
                ],
            )
            .unwrap();
        assert_eq!(id, f);
    }

    #[test]
    fn substitution_by_rational_functions() {
        let vs = uv();
        let f = d2(&vs);
        // u -> 1/(v+1), v -> v : (1/(v+1) - 1)/(1/(v+1) - v) = -v / (1 - v^2 - v)
        let img = RationalFunction::new(LaurentPoly::one(&vs), &poly(&vs, &[(1, 0, 1), (1, 0, 0)])).unwrap();
        let g = f
            .substitute(&vs, &[("u", img), ("v", RationalFunction::var(&vs, "v", 1))])
            .unwrap();
        let expected = RationalFunction::new(
            poly(&vs, &[(-1, 0, 1)]),
            &poly(&vs, &[(1, 0, 0), (-1, 0, 2), (-1, 0, 1)]),
        )
        .unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let vs = uv();
        let r = d2(&vs).substitute(&vs, &[("u", RationalFunction::var(&vs, "u", 1))]);
        assert_eq!(r.err(), Some(ArithError::MissingAssignment("v".into())));
    }

    #[test]
    fn evaluation() {
        let vs = uv();
        let f = d2(&vs);
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(f.eval(&[("u", q(3, 1)), ("v", q(1, 3))]).unwrap(), q(3, 4));
        assert_eq!(f.eval(&[("u", q(1, 1)), ("v", q(5, 7))]).unwrap(), q(0, 1));
        assert_eq!(f.eval(&[("u", q(2, 1)), ("v", q(2, 1))]), Err(ArithError::Pole));
    }

    #[test]
    fn rendering_is_canonical() {
        let vs = uv();
        assert_eq!(d2(&vs).render(), "(u - 1)/(u - v)");
        assert_eq!(RationalFunction::one(&vs).render(), "1");
        let t = VarSet::new(&["t"]);
        let x = LaurentPoly::var(&t, "t", 1);
        let one = LaurentPoly::one(&t);
        // t (t - 1) / (2 (t^2 - 1)) reduces to t / (2t + 2)
        let num = &x * &(&x - &one);
        let den = (&x.pow(2) - &one).scale(&BigRational::from_integer(2.into()));
        assert_eq!(RationalFunction::new(num, &den).unwrap().render(), "t/(2*t + 2)");
    }

    fn tpoly(c: &[i64]) -> LaurentPoly {
        let t = VarSet::new(&["t"]);
        LaurentPoly::from_terms(
            &t,
            c.iter()
                .enumerate()
                .map(|(i, &c)| (BigRational::from_integer(c.into()), Monomial::var(0, i as i32))),
        )
    }

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        assert_eq!(univariate::cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(univariate::cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(univariate::cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(univariate::cyclotomic(15).len(), 9);
    }

    #[test]
    fn binomial_denominators_reduce_fully() {
        // (t^3 - 1)(t + 2) / ((t^6 - 1)(t^2 + 3)) = (t + 2)/((t^3 + 1)(t^2 + 3))
        let num = &tpoly(&[-1, 0, 0, 1]) * &tpoly(&[2, 1]);
        let r = RationalFunction::new(num, &tpoly(&[-1, 0, 0, 0, 0, 0, 1]))
            .unwrap()
            .div_poly(&tpoly(&[3, 0, 1]))
            .unwrap();
        let (n, d) = r.reduced_univariate().unwrap();
        assert_eq!(n, tpoly(&[2, 1]));
        assert_eq!(d, &tpoly(&[1, 0, 0, 1]) * &tpoly(&[3, 0, 1]));
        let direct = RationalFunction::new(tpoly(&[2, 1]), &d).unwrap();
        assert!(r.equals(&direct).unwrap());
    }
}

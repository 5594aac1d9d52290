//! The rational functions `D_n(u, v)` and `D*_n(t)`, computed by the
//! divisor recursion and cross-checked against the chain-sum and
//! subset-sum forms, together with the probabilities they produce.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{ArithError, LaurentPoly, Monomial, RationalFunction, VarSet};
use crate::checks::CheckOutcome;
use crate::incidence::{self, DivisorPoset, ElementSet, IncidenceError, ThetaContext};
use crate::numtheory::{choose2, is_prime};

pub mod verify;

/// Largest divisor count for which the subset form is evaluated.
pub const SUBSET_FORM_MAX_DIVISORS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DSeriesError {
    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("D*_{n} has a pole at the requested point")]
    Pole { n: u64 },
    #[error("D*_{0} retains odd powers of t^(1/2) after substitution")]
    OddPowerResidue(u64),
    #[error("{0} has too many divisors for the subset form")]
    TooManyDivisors(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// Memoized `D_n(u, v)`.
pub struct DFamily {
    uv: VarSet,
    t: VarSet,
    cache: RwLock<HashMap<u64, Arc<RationalFunction>>>,
}

impl Default for DFamily {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact rational probabilities for degree `n` at the prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityTable {
    pub n: u64,
    pub p: u64,
    /// Probability over all polynomials.
    pub rho: BigRational,
    /// Probability over monic polynomials.
    pub alpha: BigRational,
    /// Probability over monic polynomials congruent to `X^n` mod `p`.
    pub beta: BigRational,
}

impl ProbabilityTable {
    /// `rho = (p - 1)/(p^{n+1} - 1) (p^n alpha + beta)` recomputed from
    /// `alpha` and `beta`.
    pub fn rho_from_alpha_beta(&self) -> BigRational {
        let p = BigRational::from_integer(self.p.into());
        let pn = pow(&p, self.n as i32);
        let scale = (&p - BigRational::one()) / (&pn * &p - BigRational::one());
        scale * (&pn * &self.alpha + &self.beta)
    }

    pub fn is_consistent(&self) -> bool {
        self.rho == self.rho_from_alpha_beta()
    }

    /// All three values in the open unit interval.
    pub fn in_open_unit_interval(&self) -> bool {
        let (zero, one) = (BigRational::zero(), BigRational::one());
        [&self.rho, &self.alpha, &self.beta]
            .iter()
            .all(|v| **v > zero && **v < one)
    }
}

fn pow(x: &BigRational, e: i32) -> BigRational {
    crate::arith::rational_pow(x, e)
}

impl DFamily {
    pub fn new() -> Self {
        let mut cache = HashMap::new();
        let uv = VarSet::new(&["u", "v"]);
        cache.insert(1, Arc::new(RationalFunction::one(&uv)));
        DFamily {
            uv,
            t: VarSet::new(&["t"]),
            cache: RwLock::new(cache),
        }
    }

    /// The variables `(u, v)` of `D_n`.
    pub fn vars(&self) -> &VarSet {
        &self.uv
    }

    /// The variable `t` of `D*_n`.
    pub fn t_vars(&self) -> &VarSet {
        &self.t
    }

    fn mono(&self, a: i32, b: i32) -> LaurentPoly {
        LaurentPoly::monomial(&self.uv, Monomial::from_pairs([(0, a), (1, b)]), BigRational::one())
    }

    fn binomial(&self, a: (i32, i32), b: (i32, i32)) -> LaurentPoly {
        &self.mono(a.0, a.1) - &self.mono(b.0, b.1)
    }

    fn rf_mono(&self, a: i32, b: i32) -> RationalFunction {
        RationalFunction::from_poly(self.mono(a, b))
    }

    /// `D_n(u, v)` by the divisor recursion.
    pub fn d(&self, n: u64) -> Result<Arc<RationalFunction>, DSeriesError> {
        if n == 0 {
            return Err(DSeriesError::InvalidDegree(n));
        }
        if let Some(hit) = self.cache.read().expect("cache lock").get(&n) {
            return Ok(hit.clone());
        }
        let poset = DivisorPoset::new(n)?;
        let mu = incidence::mobius(poset.poset(), None)?;
        let ni = n as i32;
        let mut sum = RationalFunction::zero(&self.uv);
        for &d in poset.labels().iter().filter(|&&d| d != 1) {
            // theta_d(u) = sum over e | d of mu(d / e) u^{e - 1}
            let mut theta = LaurentPoly::zero(&self.uv);
            for &e in poset.labels().iter().filter(|&&e| d % e == 0) {
                let c = mu.get(e, d)?;
                if c != 0 {
                    theta = &theta + &self.mono(e as i32 - 1, 0).scale(&BigRational::from_integer(c.into()));
                }
            }
            let inner = self.d(n / d)?;
            let shifted = inner.substitute(&self.uv, &[("u", self.rf_mono(d as i32, 0)), ("v", self.rf_mono(0, 1))])?;
            let term = shifted.mul_poly(&(&theta * &self.mono(0, ni / d as i32 - 1)));
            sum = sum.try_add(&term)?;
        }
        let value = Arc::new(sum.div_poly(&self.binomial((ni - 1, 0), (0, ni - 1)))?);
        self.cache
            .write()
            .expect("cache lock")
            .entry(n)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    /// `D*_n(t) = D_n(t, t^{-n/2}) / n`.
    ///
    /// The substitution runs in `s = t^{1/2}`; every odd power of `s` must
    /// cancel, otherwise [`DSeriesError::OddPowerResidue`] is returned.
    pub fn d_star(&self, n: u64) -> Result<RationalFunction, DSeriesError> {
        let dn = self.d(n)?;
        let s = VarSet::new(&["s"]);
        let sub =
            |p: &LaurentPoly| p.map_monomials(&s, |m| Monomial::var(0, 2 * m.exponent(0) - n as i32 * m.exponent(1)));
        let even = |p: &LaurentPoly| p.exponents_divisible(0, 2);
        let mut num = sub(dn.numerator());
        let mut factors = Vec::new();
        for (f, k) in dn.denominator_factors() {
            let mut g = sub(f);
            if !even(&g) {
                // Replace g by the even g(s) g(-s), compensating in the numerator.
                let h = reflect(&g);
                num = &num * &h.pow(*k);
                g = &g * &h;
            }
            factors.push((g, *k));
        }
        if !even(&num) || factors.iter().any(|(g, _)| !even(g)) {
            return Err(DSeriesError::OddPowerResidue(n));
        }
        let halve = |p: &LaurentPoly| p.map_monomials(&self.t, |m| Monomial::var(0, m.exponent(0) / 2));
        let mut r = RationalFunction::from_poly(halve(&num));
        for (g, k) in &factors {
            let g = halve(g);
            for _ in 0..*k {
                r = r.div_poly(&g)?;
            }
        }
        Ok(r.scale(&BigRational::new(1.into(), (n as i64).into())))
    }

    /// `(t - 1)/(t^{n+1} - 1) (t^n D*_n(t) + D*_n(1/t))`, whose value at a
    /// prime is `rho`.
    pub fn rho_function(&self, n: u64) -> Result<RationalFunction, DSeriesError> {
        let ds = self.d_star(n)?;
        let t = &self.t;
        let inv = ds.substitute(t, &[("t", RationalFunction::var(t, "t", -1))])?;
        let tn = LaurentPoly::var(t, "t", n as i32);
        let body = ds.mul_poly(&tn).try_add(&inv)?;
        let one = LaurentPoly::one(t);
        let scale = RationalFunction::new(
            &LaurentPoly::var(t, "t", 1) - &one,
            &(&LaurentPoly::var(t, "t", n as i32 + 1) - &one),
        )?;
        Ok(scale.try_mul(&body)?)
    }

    /// `rho`, `alpha` and `beta` at the prime `p`, with `rho` evaluated from
    /// [`DFamily::rho_function`].
    pub fn probabilities(&self, n: u64, p: u64) -> Result<ProbabilityTable, DSeriesError> {
        if !is_prime(p) {
            return Err(DSeriesError::NotPrime(p));
        }
        let ds = self.d_star(n)?;
        let pr = BigRational::from_integer(p.into());
        let at = |f: &RationalFunction, x: &BigRational| {
            f.eval(&[("t", x.clone())]).map_err(|e| match e {
                ArithError::Pole => DSeriesError::Pole { n },
                e => e.into(),
            })
        };
        Ok(ProbabilityTable {
            n,
            p,
            rho: at(&self.rho_function(n)?, &pr)?,
            alpha: at(&ds, &pr)?,
            beta: at(&ds, &pr.recip())?,
        })
    }

    /// `theta(d, e; u)` as a polynomial in `(u, v)`.
    fn theta_u(&self, ctx: &ThetaContext, d: u64, e: u64) -> Result<LaurentPoly, DSeriesError> {
        let u = VarSet::new(&["u"]);
        let t = ctx.theta().get(d, e)?;
        Ok(self.embed_u(&incidence::specialize_to_u(ctx.poset(), &t, &u)))
    }

    fn embed_u(&self, p: &LaurentPoly) -> LaurentPoly {
        p.map_monomials(&self.uv, |m| m.clone())
    }

    /// The sum over chains `1 = d_0 < ... < d_k = n` of
    /// `prod v^{n/d_{i+1}} theta(d_i, d_{i+1}; u) / (u^{n - d_i} v - v^{n/d_i})`.
    pub fn d_chain_form(&self, n: u64) -> Result<RationalFunction, DSeriesError> {
        if n == 0 {
            return Err(DSeriesError::InvalidDegree(n));
        }
        let poset = DivisorPoset::new(n)?;
        let ctx = ThetaContext::new(poset.poset())?;
        let ni = n as i32;
        let mut step: HashMap<(u64, u64), RationalFunction> = HashMap::new();
        let mut sum = RationalFunction::zero(&self.uv);
        for chain in poset.all_chains(1, n)? {
            let mut term = RationalFunction::one(&self.uv);
            for w in chain.elements().windows(2) {
                let (a, b) = (w[0], w[1]);
                if let std::collections::hash_map::Entry::Vacant(e) = step.entry((a, b)) {
                    let num = &self.theta_u(&ctx, a, b)? * &self.mono(0, ni / b as i32);
                    let den = self.binomial((ni - a as i32, 1), (0, ni / a as i32));
                    e.insert(RationalFunction::new(num, &den)?);
                }
                term = term.try_mul(&step[&(a, b)])?;
            }
            sum = sum.try_add(&term)?;
        }
        Ok(sum)
    }

    /// The signed sum over subsets `Q` of the divisors containing `1` and
    /// `n` of `Inv_Q theta(1, n; u) prod_{e not in Q} r_e`, with
    /// `r_e = u^{n - e} v^{1 - n/e}`, scaled by
    /// `-v^{1 - n} / prod_{e | n, e != n} (r_e - 1)`.
    pub fn d_subset_form(&self, n: u64) -> Result<RationalFunction, DSeriesError> {
        if n == 0 {
            return Err(DSeriesError::InvalidDegree(n));
        }
        if n == 1 {
            return Ok(RationalFunction::one(&self.uv));
        }
        let poset = DivisorPoset::new(n)?;
        if poset.len() > SUBSET_FORM_MAX_DIVISORS {
            return Err(DSeriesError::TooManyDivisors(n));
        }
        let ctx = ThetaContext::new(poset.poset())?;
        let ni = n as i32;
        let r = |e: u64| self.mono(ni - e as i32, 1 - ni / e as i32);
        let u = VarSet::new(&["u"]);
        let labels = poset.labels().to_vec();
        let interior: Vec<u64> = labels.iter().copied().filter(|&e| e != 1 && e != n).collect();
        let mut sum = LaurentPoly::zero(&self.uv);
        for bits in 0u32..1 << interior.len() {
            let mut members = vec![1, n];
            let mut outside = LaurentPoly::one(&self.uv);
            for (b, &e) in interior.iter().enumerate() {
                if bits >> b & 1 == 1 {
                    members.push(e);
                } else {
                    outside = &outside * &r(e);
                }
            }
            let q = ElementSet::from_labels(&poset, &members)?;
            let inv = ctx.inverse_theta(q, 1, n)?;
            let inv_u = self.embed_u(&incidence::specialize_to_u(&poset, &inv, &u));
            let mut term = &inv_u * &outside;
            if members.len() % 2 == 1 {
                term = term.neg();
            }
            sum = &sum + &term;
        }
        let mut den = LaurentPoly::one(&self.uv);
        for &e in labels.iter().filter(|&&e| e != n) {
            den = &den * &(&r(e) - &LaurentPoly::one(&self.uv));
        }
        let scaled = &sum * &self.mono(0, 1 - ni).neg();
        Ok(RationalFunction::new(scaled, &den)?)
    }

    /// `D_n(1/u, 1/v) = v^{n-1} D_n(u, v)`.
    pub fn inversion_check(&self, n: u64) -> Result<bool, DSeriesError> {
        let dn = self.d(n)?;
        let lhs = dn.substitute(&self.uv, &[("u", self.rf_mono(-1, 0)), ("v", self.rf_mono(0, -1))])?;
        let rhs = dn.mul_poly(&self.mono(0, n as i32 - 1));
        Ok(lhs.equals(&rhs)?)
    }

    /// With `Z(u, v) = D_n(1/u, v^{n/2})`, checks
    /// `Z(1/u, 1/v) = v^{n(n-1)/2} Z(u, v)`.
    ///
    /// The half-integer power is avoided by working in `w = v^{1/2}`, where
    /// the statement reads `Z(1/u, 1/w) = w^{n(n-1)} Z(u, w)` for
    /// `Z(u, w) = D_n(1/u, w^n)`.
    pub fn igusa_functional_equation_check(&self, n: u64) -> Result<bool, DSeriesError> {
        self.igusa_holds_with_exponent(n, 2 * choose2(n) as i32)
    }

    /// Whether `Z(u, v) = D_n(1/u, v^n)` satisfies
    /// `Z(1/u, 1/v) = v^k Z(u, v)` for the given `k`.
    pub fn igusa_holds_with_exponent(&self, n: u64, k: i32) -> Result<bool, DSeriesError> {
        let dn = self.d(n)?;
        let ni = n as i32;
        let z = dn.substitute(&self.uv, &[("u", self.rf_mono(-1, 0)), ("v", self.rf_mono(0, ni))])?;
        let z_inv = z.substitute(&self.uv, &[("u", self.rf_mono(-1, 0)), ("v", self.rf_mono(0, -1))])?;
        let rhs = z.mul_poly(&self.mono(0, k));
        Ok(z_inv.equals(&rhs)?)
    }

    /// `D*_n(1/t)` against `D*_n(t)` through the symmetry of `rho`.
    pub fn rho_symmetry_check(&self, n: u64) -> Result<bool, DSeriesError> {
        let rho = self.rho_function(n)?;
        let flipped = rho.substitute(&self.t, &[("t", RationalFunction::var(&self.t, "t", -1))])?;
        Ok(rho.equals(&flipped)?)
    }

    /// Runs the dseries checks for one `n`.
    pub fn verify(&self, n: u64) -> Result<Vec<CheckOutcome>, DSeriesError> {
        verify::verify_degree(self, n)
    }
}

/// `p(-s)` for a polynomial in one variable `s`.
fn reflect(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(
        p.vars(),
        p.terms().map(|(m, c)| {
            let c = if m.exponent(0) % 2 != 0 { -c.clone() } else { c.clone() };
            (c, m.clone())
        }),
    )
}

use serde::Serialize;

use super::galois::{GaloisRingContext, GaloisRingElement};
use super::PadicError;

/// Valuation of the discriminant of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiscValuation {
    Exact(u32),
    /// Two conjugates agree modulo `p^M`.
    Overflow,
}

/// `phi = p^{-half_units / 2}`, or zero when the discriminant overflowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhiValue {
    pub p: u64,
    pub half_units: Option<u32>,
}

impl PhiValue {
    pub fn is_zero(&self) -> bool {
        self.half_units.is_none()
    }

    pub fn to_f64(&self) -> f64 {
        match self.half_units {
            Some(h) => (self.p as f64).powf(-(h as f64) / 2.0),
            None => 0.0,
        }
    }

    /// `phi^r` as a float.
    pub fn powf(&self, r: f64) -> f64 {
        match self.half_units {
            Some(h) => (self.p as f64).powf(-(h as f64) * r / 2.0),
            None => 0.0,
        }
    }
}

fn pair_sum(ctx: &GaloisRingContext, conj: &[GaloisRingElement]) -> Option<u32> {
    let mut total = 0u32;
    for i in 0..conj.len() {
        for j in i + 1..conj.len() {
            total += ctx.valuation(&ctx.sub(&conj[i], &conj[j]))?;
        }
    }
    Some(total)
}

/// `v(disc x) = 2 sum_{i<j} v(sigma^i x - sigma^j x)`. Each factor's
/// valuation is exact once it is nonzero modulo `p^M`, so the total is exact
/// even above `M`.
pub fn disc_valuation(ctx: &GaloisRingContext, x: &GaloisRingElement) -> DiscValuation {
    match pair_sum(ctx, &ctx.conjugates(x)) {
        Some(s) => DiscValuation::Exact(2 * s),
        None => DiscValuation::Overflow,
    }
}

/// `phi_{K/Q_p}(x)`, the Haar measure of `Z_p[x]` inside `O_K`.
pub fn phi(ctx: &GaloisRingContext, x: &GaloisRingElement) -> PhiValue {
    PhiValue {
        p: ctx.p(),
        half_units: match disc_valuation(ctx, x) {
            DiscValuation::Exact(v) => Some(v),
            DiscValuation::Overflow => None,
        },
    }
}

/// `phi_{K/L}(x)` for the subfield `L` of degree `m` over `Q_p`, fixed by
/// `sigma^m`. Absolute values on `L` are normalised by `|p|_L = p^{-m}`.
pub fn phi_relative(ctx: &GaloisRingContext, x: &GaloisRingElement, m: u32) -> Result<PhiValue, PadicError> {
    if m == 0 || !ctx.degree().is_multiple_of(m) {
        return Err(PadicError::NotADivisor(m));
    }
    let conj: Vec<GaloisRingElement> = (0..ctx.degree() / m).map(|i| ctx.frobenius_pow(x, m * i)).collect();
    Ok(PhiValue {
        p: ctx.p(),
        half_units: pair_sum(ctx, &conj).map(|s| 2 * m * s),
    })
}

/// `Theta_d(q) = sum_{e | d} mu(d/e) q^e`, the number of elements of
/// `F_{q^d}` of degree exactly `d` over `F_q`.
pub fn inertial_count(q: u64, d: u64) -> Result<u128, PadicError> {
    if d == 0 || q < 2 {
        return Err(PadicError::InvalidDegree(d as u32));
    }
    let mut total: i128 = 0;
    for e in crate::numtheory::divisors(d) {
        let mu = crate::numtheory::mobius(d / e) as i128;
        if mu == 0 {
            continue;
        }
        let pow = (q as u128)
            .checked_pow(e as u32)
            .filter(|&v| v < i128::MAX as u128)
            .ok_or(PadicError::Overflow)?;
        total += mu * pow as i128;
    }
    Ok(total as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degree_one_is_trivial() {
        let ctx = GaloisRingContext::new(3, 1, 10).unwrap();
        let x = ctx.from_int(9);
        assert_eq!(disc_valuation(&ctx, &x), DiscValuation::Exact(0));
        assert_eq!(phi(&ctx, &x).to_f64(), 1.0);
    }

    #[test]
    fn unit_discriminant_for_full_residue_degree() {
        let ctx = GaloisRingContext::new(2, 3, 30).unwrap();
        let g = ctx.generator();
        assert_eq!(disc_valuation(&ctx, &g), DiscValuation::Exact(0));
        assert_eq!(phi(&ctx, &g).to_f64(), 1.0);
        assert_eq!(disc_valuation(&ctx, &ctx.one()), DiscValuation::Overflow);
        assert!(phi(&ctx, &ctx.one()).is_zero());
    }

    #[test]
    fn scaling_by_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, n) in [(3u64, 2u32), (2, 3), (5, 2)] {
            let ctx = GaloisRingContext::new(p, n, 30).unwrap();
            let shift = n * (n - 1);
            for _ in 0..50 {
                let y = ctx.random_element(&mut rng);
                let px = ctx.mul_p_pow(&y, 1);
                match (disc_valuation(&ctx, &y), disc_valuation(&ctx, &px)) {
                    (DiscValuation::Exact(a), DiscValuation::Exact(b)) => assert_eq!(b, a + shift),
                    (a, b) => panic!("unexpected {a:?} {b:?}"),
                }
            }
        }
    }

    #[test]
    fn theta_values() {
        assert_eq!(inertial_count(7, 1).unwrap(), 7);
        assert_eq!(inertial_count(5, 2).unwrap(), 20);
        assert_eq!(inertial_count(3, 3).unwrap(), 24);
        assert_eq!(inertial_count(2, 4).unwrap(), 12);
        assert_eq!(inertial_count(2, 6).unwrap(), 64 - 8 - 4 + 2);
    }
}

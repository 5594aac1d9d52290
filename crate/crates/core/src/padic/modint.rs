use ethnum::U256;
use rand::Rng;

use super::PadicError;

/// The ring `Z / p^M` with residues stored as `u128`.
#[derive(Clone, Debug)]
pub struct ModRing {
    p: u64,
    m: u32,
    modulus: u128,
    pows: Vec<u128>,
    wide: bool,
}

impl ModRing {
    pub fn new(p: u64, m: u32) -> Result<Self, PadicError> {
        if !crate::numtheory::is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        let modulus = crate::numtheory::checked_pow(p, m)
            .filter(|&q| q < 1u128 << 127)
            .ok_or(PadicError::ModulusTooLarge { p, m })?;
        let mut pows = Vec::with_capacity(m as usize + 1);
        let mut acc = 1u128;
        for _ in 0..=m {
            pows.push(acc);
            acc = acc.saturating_mul(p as u128);
        }
        Ok(ModRing {
            p,
            m,
            modulus,
            pows,
            wide: modulus > u64::MAX as u128,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// `p^k` for `k <= M`.
    pub fn p_pow(&self, k: u32) -> u128 {
        self.pows[k as usize]
    }

    pub fn reduce(&self, a: u128) -> u128 {
        a % self.modulus
    }

    pub fn from_i64(&self, v: i64) -> u128 {
        (v as i128).rem_euclid(self.modulus as i128) as u128
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.modulus - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.wide {
            (U256::from(a) * U256::from(b) % U256::from(self.modulus)).as_u128()
        } else {
            a * b % self.modulus
        }
    }

    pub fn pow(&self, mut a: u128, mut e: u128) -> u128 {
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// The `p`-adic valuation, `None` for zero.
    pub fn valuation(&self, mut a: u128) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let p = self.p as u128;
        let mut v = 0;
        while a.is_multiple_of(p) {
            a /= p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self, a: u128) -> bool {
        !a.is_multiple_of(self.p as u128)
    }

    pub fn inverse(&self, a: u128) -> Option<u128> {
        if !self.is_unit(a) {
            return None;
        }
        let p = self.p as u128;
        let r = a % p;
        let mut x = 1u128;
        let (mut base, mut e) = (r, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                x = x * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        // Each Newton step doubles the precision.
        let two = 2 % self.modulus;
        for _ in 0..8 {
            let ax = self.mul(a, x);
            if ax == 1 % self.modulus {
                return Some(x);
            }
            x = self.mul(x, self.sub(two, ax));
        }
        debug_assert_eq!(self.mul(a, x), 1 % self.modulus);
        Some(x)
    }

    /// `a / p^k`, assuming `p^k` divides `a`.
    pub fn div_p_pow(&self, a: u128, k: u32) -> u128 {
        debug_assert_eq!(a % self.pows[k as usize], 0);
        a / self.pows[k as usize]
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u128 {
        rng.random_range(0..self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_and_wide_agree() {
        let r = ModRing::new(7, 40).unwrap();
        assert!(r.wide);
        let a = r.reduce(123456789012345678901234567890);
        let b = r.reduce(987654321098765432109876543210);
        let expected = (U256::from(a) * U256::from(b) % U256::from(r.modulus())).as_u128();
        assert_eq!(r.mul(a, b), expected);
        let small = ModRing::new(3, 40).unwrap();
        assert!(!small.wide);
    }

    #[test]
    fn inverses_and_valuations() {
        for (p, m) in [(2, 40), (3, 20), (7, 40), (5, 4)] {
            let r = ModRing::new(p, m).unwrap();
            for a in [1u128, 2, 3, 4, 5, 6, 11, 1234567] {
                let a = r.reduce(a);
                match r.inverse(a) {
                    Some(x) => assert_eq!(r.mul(a, x), 1),
                    None => assert!(!r.is_unit(a)),
                }
            }
            assert_eq!(r.valuation(r.p_pow(3)), Some(3));
            assert_eq!(r.valuation(0), None);
            assert_eq!(r.add(r.neg(5), 5), 0);
            assert_eq!(r.from_i64(-1), r.modulus() - 1);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(ModRing::new(4, 10).err(), Some(PadicError::NotPrime(4)));
        assert!(ModRing::new(2, 127).is_err());
        assert!(ModRing::new(2, 126).is_ok());
    }
}

use rand::Rng;
use smallvec::SmallVec;

use super::modint::ModRing;
use super::resfield::{first_irreducible, ResidueField};
use super::PadicError;

/// Coordinates in the basis `1, g, ..., g^{n-1}`, each in `[0, p^M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisRingElement {
    coeffs: SmallVec<[u128; 4]>,
}

impl GaloisRingElement {
    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Result of [`GaloisRingContext::element_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementDegree {
    /// Either the degree is `n`, so every lift of the residue class
    /// generates, or it equals the residue degree, so the class holds an
    /// inertial element of that degree.
    Exact(u32),
    /// Frobenius fixes the class at precision `M` but not modulo `p`
    /// alone; the true degree of a lift may be larger.
    Inconclusive(u32),
}

impl ElementDegree {
    pub fn value(self) -> u32 {
        match self {
            ElementDegree::Exact(d) | ElementDegree::Inconclusive(d) => d,
        }
    }
}

/// `O_K / p^M` for the unramified extension `K` of degree `n`, realised as
/// `(Z / p^M)[X] / (h)` with `h` the lexicographically first monic
/// irreducible modulo `p`.
#[derive(Clone, Debug)]
pub struct GaloisRingContext {
    zm: ModRing,
    n: u32,
    modulus: Vec<u128>,
    field: ResidueField,
    // frob[d] is the matrix of sigma^d, row-major, columns sigma^d(g^j).
    frob: Vec<Vec<u128>>,
    divisors: Vec<u32>,
}

impl GaloisRingContext {
    pub fn new(p: u64, n: u32, m: u32) -> Result<Self, PadicError> {
        if n == 0 {
            return Err(PadicError::InvalidDegree(n));
        }
        if m < 4 {
            return Err(PadicError::PrecisionTooSmall(m));
        }
        let zm = ModRing::new(p, m)?;
        let low = first_irreducible(p, n)?;
        let field = ResidueField::with_modulus(p, low.clone())?;
        let divisors = crate::numtheory::divisors(n as u64)
            .into_iter()
            .map(|d| d as u32)
            .collect();
        let mut ctx = GaloisRingContext {
            modulus: low.iter().map(|&c| c as u128).collect(),
            zm,
            n,
            field,
            frob: Vec::new(),
            divisors,
        };
        ctx.build_frobenius()?;
        Ok(ctx)
    }

    fn build_frobenius(&mut self) -> Result<(), PadicError> {
        let n = self.n as usize;
        let identity: Vec<u128> = (0..n * n).map(|k| u128::from(k / n == k % n)).collect();
        self.frob = vec![identity];
        if n == 1 {
            return Ok(());
        }
        let g = self.generator();
        let mut root = self.pow(&g, self.p() as u128);
        // Newton on h: the p-power of g is a root modulo p.
        for _ in 0..2 * self.precision() {
            let value = self.eval_modulus(&root, false);
            if value.is_zero() {
                break;
            }
            let slope = self.eval_modulus(&root, true);
            let inv = self.inverse(&slope).ok_or(PadicError::NotAUnit)?;
            root = self.sub(&root, &self.mul(&value, &inv));
        }
        if !self.eval_modulus(&root, false).is_zero() {
            return Err(PadicError::HenselFailure);
        }
        let mut images = vec![g.clone(), root];
        while images.len() < n {
            let next = self.apply_images(images.last().unwrap(), &images[1]);
            images.push(next);
        }
        for image in images.iter().skip(1) {
            let mut mat = vec![0u128; n * n];
            let mut col = self.one();
            for j in 0..n {
                for i in 0..n {
                    mat[i * n + j] = col.coeffs[i];
                }
                col = self.mul(&col, image);
            }
            self.frob.push(mat);
        }
        if self.frobenius_pow(&images[n - 1], 1) != g {
            return Err(PadicError::HenselFailure);
        }
        Ok(())
    }

    /// Applies sigma given the image of `g` directly; used only while the
    /// matrix of sigma is being built.
    fn apply_images(&self, x: &GaloisRingElement, sigma_g: &GaloisRingElement) -> GaloisRingElement {
        let mut acc = self.zero();
        let mut power = self.one();
        for &c in &x.coeffs {
            acc = self.add(&acc, &self.scale(&power, c));
            power = self.mul(&power, sigma_g);
        }
        acc
    }

    fn eval_modulus(&self, x: &GaloisRingElement, derivative: bool) -> GaloisRingElement {
        let n = self.n as usize;
        let mut full: Vec<u128> = self.modulus.clone();
        full.push(1);
        let coeffs: Vec<u128> = if derivative {
            (1..=n).map(|k| self.zm.mul(full[k], k as u128)).collect()
        } else {
            full
        };
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc.coeffs[0] = self.zm.add(acc.coeffs[0], c);
        }
        acc
    }

    pub fn p(&self) -> u64 {
        self.zm.p()
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.zm.precision()
    }

    pub fn ring(&self) -> &ModRing {
        &self.zm
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.field
    }

    /// Low coefficients `c_0, ..., c_{n-1}` of the monic modulus.
    pub fn modulus(&self) -> &[u128] {
        &self.modulus
    }

    /// Positive divisors of `n`.
    pub fn divisors(&self) -> &[u32] {
        &self.divisors
    }

    pub fn zero(&self) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: SmallVec::from_elem(0, self.n as usize),
        }
    }

    pub fn one(&self) -> GaloisRingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> GaloisRingElement {
        let mut x = self.zero();
        x.coeffs[0] = self.zm.from_i64(v);
        x
    }

    pub fn from_u128(&self, v: u128) -> GaloisRingElement {
        let mut x = self.zero();
        x.coeffs[0] = self.zm.reduce(v);
        x
    }

    pub fn from_coeffs(&self, coeffs: &[u128]) -> Result<GaloisRingElement, PadicError> {
        if coeffs.len() != self.n as usize {
            return Err(PadicError::DimensionMismatch {
                expected: self.n as usize,
                got: coeffs.len(),
            });
        }
        Ok(GaloisRingElement {
            coeffs: coeffs.iter().map(|&c| self.zm.reduce(c)).collect(),
        })
    }

    /// The class of `X`. For `n = 1` this is `-c_0`.
    pub fn generator(&self) -> GaloisRingElement {
        if self.n == 1 {
            return self.from_u128(self.zm.neg(self.modulus[0]));
        }
        let mut x = self.zero();
        x.coeffs[1] = 1;
        x
    }

    pub fn add(&self, a: &GaloisRingElement, b: &GaloisRingElement) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.zm.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &GaloisRingElement, b: &GaloisRingElement) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.zm.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GaloisRingElement) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: a.coeffs.iter().map(|&x| self.zm.neg(x)).collect(),
        }
    }

    /// Multiplication by an element of `Z / p^M`.
    pub fn scale(&self, a: &GaloisRingElement, c: u128) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: a.coeffs.iter().map(|&x| self.zm.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &GaloisRingElement, b: &GaloisRingElement) -> GaloisRingElement {
        let n = self.n as usize;
        if n == 1 {
            return GaloisRingElement {
                coeffs: SmallVec::from_elem(self.zm.mul(a.coeffs[0], b.coeffs[0]), 1),
            };
        }
        let mut prod: SmallVec<[u128; 8]> = SmallVec::from_elem(0, 2 * n - 1);
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = self.zm.add(prod[i + j], self.zm.mul(x, y));
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &h) in self.modulus.iter().enumerate() {
                if h != 0 {
                    prod[i - n + j] = self.zm.sub(prod[i - n + j], self.zm.mul(c, h));
                }
            }
        }
        GaloisRingElement {
            coeffs: prod[..n].iter().copied().collect(),
        }
    }

    pub fn pow(&self, a: &GaloisRingElement, mut e: u128) -> GaloisRingElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Minimum coordinate valuation; `None` for zero. The basis reduces to
    /// a basis of the residue field, so this is the valuation of `K`.
    pub fn valuation(&self, a: &GaloisRingElement) -> Option<u32> {
        a.coeffs.iter().filter_map(|&c| self.zm.valuation(c)).min()
    }

    pub fn is_unit(&self, a: &GaloisRingElement) -> bool {
        self.valuation(a) == Some(0)
    }

    /// Index of `a mod p` in the residue field.
    pub fn residue(&self, a: &GaloisRingElement) -> u32 {
        let p = self.p() as u128;
        a.coeffs.iter().rev().fold(0u128, |acc, &c| acc * p + c % p) as u32
    }

    /// The lift of a residue with coordinates in `[0, p)`.
    pub fn lift_residue(&self, r: u32) -> GaloisRingElement {
        let p = self.p() as u32;
        let mut x = self.zero();
        let mut rest = r;
        for c in x.coeffs.iter_mut() {
            *c = (rest % p) as u128;
            rest /= p;
        }
        x
    }

    /// `a / p^k`, assuming every coordinate is divisible by `p^k`.
    pub fn div_p_pow(&self, a: &GaloisRingElement, k: u32) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: a.coeffs.iter().map(|&c| self.zm.div_p_pow(c, k)).collect(),
        }
    }

    pub fn mul_p_pow(&self, a: &GaloisRingElement, k: u32) -> GaloisRingElement {
        if k >= self.precision() {
            return self.zero();
        }
        self.scale(a, self.zm.p_pow(k))
    }

    pub fn inverse(&self, a: &GaloisRingElement) -> Option<GaloisRingElement> {
        let r = self.field.inverse(self.residue(a))?;
        let mut x = self.lift_residue(r);
        let two = self.from_int(2);
        let one = self.one();
        for _ in 0..8 {
            let ax = self.mul(a, &x);
            if ax == one {
                return Some(x);
            }
            x = self.mul(&x, &self.sub(&two, &ax));
        }
        (self.mul(a, &x) == one).then_some(x)
    }

    /// `sigma^d(a)` for the Frobenius automorphism `sigma`.
    pub fn frobenius_pow(&self, a: &GaloisRingElement, d: u32) -> GaloisRingElement {
        let n = self.n as usize;
        let d = (d % self.n) as usize;
        if d == 0 {
            return a.clone();
        }
        let mat = &self.frob[d];
        let mut out = self.zero();
        for (i, slot) in out.coeffs.iter_mut().enumerate() {
            let mut acc = 0u128;
            for j in 0..n {
                let x = a.coeffs[j];
                if x != 0 {
                    acc = self.zm.add(acc, self.zm.mul(mat[i * n + j], x));
                }
            }
            *slot = acc;
        }
        out
    }

    pub fn frobenius(&self, a: &GaloisRingElement) -> GaloisRingElement {
        self.frobenius_pow(a, 1)
    }

    /// `a, sigma(a), ..., sigma^{n-1}(a)`.
    pub fn conjugates(&self, a: &GaloisRingElement) -> Vec<GaloisRingElement> {
        (0..self.n).map(|d| self.frobenius_pow(a, d)).collect()
    }

    /// The smallest `d | n` with `sigma^d(a) = a` at precision `M`.
    pub fn element_degree(&self, a: &GaloisRingElement) -> ElementDegree {
        let d = self
            .divisors
            .iter()
            .copied()
            .find(|&d| self.frobenius_pow(a, d) == *a)
            .unwrap_or(self.n);
        let residue_degree = self.field.element_degree(self.residue(a));
        if d == self.n || d == residue_degree {
            ElementDegree::Exact(d)
        } else {
            ElementDegree::Inconclusive(d)
        }
    }

    /// The Teichmüller representative of the residue class of `a`.
    pub fn teichmuller(&self, a: &GaloisRingElement) -> GaloisRingElement {
        let q = self.field.size() as u128;
        let mut x = self.lift_residue(self.residue(a));
        for _ in 0..self.precision() {
            x = self.pow(&x, q);
        }
        x
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GaloisRingElement {
        GaloisRingElement {
            coeffs: (0..self.n).map(|_| self.zm.random(rng)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moduli_are_lexicographic_first() {
        assert_eq!(GaloisRingContext::new(2, 2, 20).unwrap().modulus(), &[1, 1]);
        assert_eq!(GaloisRingContext::new(3, 2, 20).unwrap().modulus(), &[1, 0]);
        assert_eq!(GaloisRingContext::new(3, 1, 10).unwrap().modulus(), &[0]);
        assert!(GaloisRingContext::new(3, 2, 3).is_err());
    }

    #[test]
    fn frobenius_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n, m) in [(3, 2, 20), (2, 3, 40), (5, 2, 40), (7, 3, 40), (2, 4, 30)] {
            let ctx = GaloisRingContext::new(p, n, m).unwrap();
            let c = ctx.from_int(12345);
            assert_eq!(ctx.frobenius(&c), c);
            let g = ctx.generator();
            let fg = ctx.frobenius(&g);
            assert_eq!(ctx.residue(&fg), ctx.residue(&ctx.pow(&g, p as u128)));
            for _ in 0..100 {
                let x = ctx.random_element(&mut rng);
                let y = ctx.random_element(&mut rng);
                assert_eq!(ctx.frobenius_pow(&x, n), x);
                assert_eq!(
                    ctx.frobenius(&ctx.mul(&x, &y)),
                    ctx.mul(&ctx.frobenius(&x), &ctx.frobenius(&y))
                );
                assert_eq!(
                    ctx.frobenius(&ctx.add(&x, &y)),
                    ctx.add(&ctx.frobenius(&x), &ctx.frobenius(&y))
                );
                let mut z = x.clone();
                for _ in 0..n {
                    z = ctx.frobenius(&z);
                }
                assert_eq!(z, x);
            }
        }
    }

    #[test]
    fn degrees() {
        let ctx = GaloisRingContext::new(3, 2, 20).unwrap();
        assert_eq!(ctx.element_degree(&ctx.from_int(5)), ElementDegree::Exact(1));
        let g = ctx.generator();
        assert_ne!(ctx.frobenius(&g), g);
        assert_eq!(ctx.element_degree(&g), ElementDegree::Exact(2));
        let shifted = ctx.add(&g, &ctx.mul_p_pow(&ctx.one(), 1));
        assert_eq!(ctx.element_degree(&shifted), ElementDegree::Exact(2));
        // Degree one residue with a degree two perturbation deep down.
        let deep = ctx.add(&ctx.one(), &ctx.mul_p_pow(&g, 19));
        assert_eq!(ctx.element_degree(&deep), ElementDegree::Exact(2));
        let ctx4 = GaloisRingContext::new(2, 4, 20).unwrap();
        let t = ctx4.teichmuller(&ctx4.one());
        let g4 = ctx4.generator();
        let x = ctx4.add(&t, &ctx4.mul_p_pow(&ctx4.add(&g4, &ctx4.frobenius_pow(&g4, 2)), 3));
        assert_eq!(ctx4.element_degree(&x), ElementDegree::Inconclusive(2));
    }

    #[test]
    fn teichmuller_is_multiplicative_root_of_unity() {
        let ctx = GaloisRingContext::new(5, 2, 30).unwrap();
        let q = 25u128;
        let g = ctx.generator();
        let t = ctx.teichmuller(&g);
        assert_eq!(ctx.pow(&t, q), t);
        assert_eq!(ctx.residue(&t), ctx.residue(&g));
        assert_eq!(ctx.element_degree(&t), ElementDegree::Exact(2));
    }

    #[test]
    fn inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ctx = GaloisRingContext::new(7, 3, 40).unwrap();
        for _ in 0..50 {
            let x = ctx.random_element(&mut rng);
            match ctx.inverse(&x) {
                Some(y) => assert_eq!(ctx.mul(&x, &y), ctx.one()),
                None => assert!(!ctx.is_unit(&x)),
            }
        }
    }
}

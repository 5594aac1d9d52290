use super::PadicError;

/// Largest residue field for which log/exp tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

// Dense polynomials over F_p, lowest coefficient first, no trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod_u64(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, base, p);
        }
        base = mulmod_u64(base, base, p);
        e >>= 1;
    }
    acc
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while a.len() > db && !a.is_empty() {
        let da = a.len() - 1;
        let c = mulmod_u64(a[da], lead_inv, p);
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let t = mulmod_u64(c, bi, p);
                let slot = &mut a[da - db + i];
                *slot = (*slot + p - t) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    trim(a)
}

fn poly_mulmod(a: &[u64], b: &[u64], h: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod_u64(x, y, p)) % p;
        }
    }
    poly_rem(trim(out), h, p)
}

fn poly_powmod(a: &[u64], mut e: u64, h: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(a.to_vec(), h, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, h, p);
        }
        base = poly_mulmod(&base, &base, h, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Whether the monic polynomial with low coefficients `low` (degree
/// `low.len()`) is irreducible over F_p.
pub fn is_irreducible_mod_p(low: &[u64], p: u64) -> bool {
    let n = low.len();
    let mut h: Vec<u64> = low.iter().map(|c| c % p).collect();
    h.push(1);
    if n <= 1 {
        return true;
    }
    // No factor of degree i <= n/2 divides h iff gcd(X^{p^i} - X, h) = 1.
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 1..=n / 2 {
        frob = poly_powmod(&frob, p, &h, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(&h, &trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of degree `n`
/// over F_p, ordering by `(c_{n-1}, ..., c_0)` read as a base-`p` number.
/// Returns the low coefficients `c_0, ..., c_{n-1}`.
pub fn first_irreducible(p: u64, n: u32) -> Result<Vec<u64>, PadicError> {
    let total = (p as u128).checked_pow(n).ok_or(PadicError::FieldTooLarge)?;
    for k in 0..total {
        let mut low = Vec::with_capacity(n as usize);
        let mut rest = k;
        for _ in 0..n {
            low.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        if is_irreducible_mod_p(&low, p) {
            return Ok(low);
        }
    }
    Err(PadicError::NoIrreducible { p, n })
}

/// The field with `p^n` elements as `F_p[X] / (h)`.
///
/// An element is the index `sum c_i p^i` of its coordinates in the basis
/// `1, X, ..., X^{n-1}`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u64,
    n: u32,
    q: u32,
    modulus: Vec<u64>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl ResidueField {
    pub fn new(p: u64, n: u32) -> Result<Self, PadicError> {
        Self::with_modulus(p, first_irreducible(p, n)?)
    }

    /// Builds the field from the low coefficients of a monic irreducible.
    pub fn with_modulus(p: u64, low: Vec<u64>) -> Result<Self, PadicError> {
        let n = low.len() as u32;
        if n == 0 {
            return Err(PadicError::InvalidDegree(0));
        }
        let q = (p as u128).checked_pow(n).filter(|&q| q <= MAX_FIELD_SIZE as u128);
        let q = q.ok_or(PadicError::FieldTooLarge)? as u32;
        if !is_irreducible_mod_p(&low, p) {
            return Err(PadicError::NoIrreducible { p, n });
        }
        let mut h = low.clone();
        h.push(1);
        let field_order = q as u64 - 1;
        let mut prime_factors = Vec::new();
        let mut rest = field_order;
        let mut d = 2;
        while d * d <= rest {
            if rest.is_multiple_of(d) {
                prime_factors.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            prime_factors.push(rest);
        }
        let digits = |idx: u32| -> Vec<u64> {
            let mut v = Vec::with_capacity(n as usize);
            let mut r = idx as u64;
            for _ in 0..n {
                v.push(r % p);
                r /= p;
            }
            trim(v)
        };
        let index = |v: &[u64]| -> u32 {
            let mut acc = 0u64;
            for &c in v.iter().rev() {
                acc = acc * p + c;
            }
            acc as u32
        };
        let generator = (1..q)
            .map(digits)
            .find(|g| {
                prime_factors
                    .iter()
                    .all(|&l| poly_powmod(g, field_order / l, &h, p) != [1])
            })
            .ok_or(PadicError::NoIrreducible { p, n })?;
        let mut log = vec![0u32; q as usize];
        let mut exp = vec![0u32; field_order as usize];
        let mut cur = vec![1u64];
        for (k, slot) in exp.iter_mut().enumerate() {
            let idx = index(&cur);
            *slot = idx;
            log[idx as usize] = k as u32;
            cur = poly_mulmod(&cur, &generator, &h, p);
        }
        debug_assert_eq!(cur, [1]);
        Ok(ResidueField {
            p,
            n,
            q,
            modulus: low,
            log,
            exp,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Low coefficients of the defining monic polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u32;
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0u32, 1u32);
        while a > 0 || b > 0 {
            let s = (a % p + b % p) % p;
            out += s * scale;
            a /= p;
            b /= p;
            scale = scale.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let (mut a, mut out, mut scale) = (a, 0u32, 1u32);
        while a > 0 {
            out += (p - a % p) % p * scale;
            a /= p;
            scale = scale.wrapping_mul(p);
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    /// Multiplication by an element of the prime field.
    pub fn scale(&self, a: u32, c: u64) -> u32 {
        self.mul(a, (c % self.p) as u32)
    }

    pub fn inverse(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let ord = self.q - 1;
        Some(self.exp[((ord - self.log[a as usize]) % ord) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let ord = self.q as u64 - 1;
        self.exp[((self.log[a as usize] as u64 * (e % ord)) % ord) as usize]
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p)
    }

    /// Degree of `a` over F_p: the size of its Frobenius orbit.
    pub fn element_degree(&self, a: u32) -> u32 {
        let mut cur = self.frobenius(a);
        let mut d = 1;
        while cur != a {
            cur = self.frobenius(cur);
            d += 1;
        }
        d
    }

    /// Evaluates a polynomial (lowest coefficient first) by Horner's rule.
    pub fn eval(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

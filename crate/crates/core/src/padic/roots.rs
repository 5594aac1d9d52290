use serde::Serialize;

use super::galois::{GaloisRingContext, GaloisRingElement};
use super::PadicError;

/// A polynomial over `O_K / p^M`, lowest coefficient first. The leading
/// coefficient may vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPolynomial {
    coeffs: Vec<GaloisRingElement>,
}

impl PadicPolynomial {
    pub fn new(coeffs: Vec<GaloisRingElement>) -> Self {
        PadicPolynomial { coeffs }
    }

    /// Coefficients in `Z / p^M`.
    pub fn from_integers(ctx: &GaloisRingContext, coeffs: &[u128]) -> Self {
        PadicPolynomial {
            coeffs: coeffs.iter().map(|&c| ctx.from_u128(c)).collect(),
        }
    }

    pub fn from_i64(ctx: &GaloisRingContext, coeffs: &[i64]) -> Self {
        PadicPolynomial {
            coeffs: coeffs.iter().map(|&c| ctx.from_int(c)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[GaloisRingElement] {
        &self.coeffs
    }

    /// The degree bound: one less than the number of coefficients.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaloisRingElement::is_zero)
    }

    /// `X^d f(1/X)` for the degree bound `d`.
    pub fn reciprocal(&self) -> Self {
        PadicPolynomial {
            coeffs: self.coeffs.iter().rev().cloned().collect(),
        }
    }

    pub fn eval(&self, ctx: &GaloisRingContext, x: &GaloisRingElement) -> GaloisRingElement {
        self.coeffs
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, c| ctx.add(&ctx.mul(&acc, x), c))
    }

    pub fn derivative(&self, ctx: &GaloisRingContext) -> Self {
        PadicPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| ctx.scale(c, j as u128))
                .collect(),
        }
    }

    pub fn scale(&self, ctx: &GaloisRingContext, u: &GaloisRingElement) -> Self {
        PadicPolynomial {
            coeffs: self.coeffs.iter().map(|c| ctx.mul(c, u)).collect(),
        }
    }

    /// Coefficients of `f(a + t)`.
    pub fn taylor_shift(&self, ctx: &GaloisRingContext, a: &GaloisRingElement) -> Self {
        let mut b = self.coeffs.clone();
        if a.is_zero() || b.len() < 2 {
            return PadicPolynomial { coeffs: b };
        }
        let d = b.len() - 1;
        for i in 0..d {
            for j in (i..d).rev() {
                let t = ctx.mul(a, &b[j + 1]);
                b[j] = ctx.add(&b[j], &t);
            }
        }
        PadicPolynomial { coeffs: b }
    }

    /// Whether every coefficient is fixed by `sigma^d`.
    pub fn is_fixed_by(&self, ctx: &GaloisRingContext, d: u32) -> bool {
        self.coeffs.iter().all(|c| ctx.frobenius_pow(c, d) == *c)
    }
}

/// Numbers of roots generating `K` over `Q_p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RootCountResult {
    /// Roots in `O_K`.
    pub count_ok: u32,
    /// Roots in the maximal ideal.
    pub count_mk: u32,
    /// Roots outside `O_K`.
    pub count_outside: u32,
    /// Branches the refinement could not resolve at the working precision.
    pub inconclusive: u32,
}

impl RootCountResult {
    pub fn total(&self) -> u32 {
        self.count_ok + self.count_outside
    }
}

/// One root found by residue refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundRoot {
    pub value: GaloisRingElement,
    /// The root is known modulo `p^precision`.
    pub precision: u32,
    /// Index of the root modulo `p` in the residue field.
    pub residue: u32,
    /// Smallest `d | n` with `sigma^d` fixing the root.
    pub degree: u32,
}

impl FoundRoot {
    pub fn generates(&self, ctx: &GaloisRingContext) -> bool {
        self.degree == ctx.degree()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RootSearch {
    pub roots: Vec<FoundRoot>,
    pub inconclusive: u32,
}

struct Search<'a> {
    ctx: &'a GaloisRingContext,
    f: &'a PadicPolynomial,
    // Proper divisors of n, each with whether f is fixed by sigma^d.
    proper: Vec<(u32, bool)>,
    out: RootSearch,
}

impl Search<'_> {
    fn node(&mut self, a: &GaloisRingElement, k: u32, top: Option<u32>, only_residue: Option<u32>) {
        let ctx = self.ctx;
        let m = ctx.precision();
        let shifted = self.f.taylor_shift(ctx, a);
        let g: Vec<GaloisRingElement> = shifted
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| ctx.mul_p_pow(c, k.saturating_mul(j as u32)))
            .collect();
        let Some(content) = g.iter().filter_map(|c| ctx.valuation(c)).min() else {
            self.out.inconclusive += 1;
            return;
        };
        let h = PadicPolynomial {
            coeffs: g.iter().map(|c| ctx.div_p_pow(c, content)).collect(),
        };
        let field = ctx.residue_field();
        let hbar: Vec<u32> = h.coeffs.iter().map(|c| ctx.residue(c)).collect();
        if hbar.iter().skip(1).all(|&c| c == 0) {
            return;
        }
        let dbar: Vec<u32> = hbar
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| field.scale(c, j as u64))
            .collect();
        let candidates: Vec<u32> = match only_residue {
            Some(r) => vec![r],
            None => (0..field.size()).collect(),
        };
        for t in candidates {
            if field.eval(&hbar, t) != 0 {
                continue;
            }
            let center = ctx.add(a, &ctx.mul_p_pow(&ctx.lift_residue(t), k));
            let top = top.unwrap_or(t);
            if field.eval(&dbar, t) != 0 {
                self.lift(&h, a, k, content, t, &center, top);
            } else if k + 1 > m / 2 {
                self.out.inconclusive += 1;
            } else {
                self.node(&center, k + 1, Some(top), None);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn lift(
        &mut self,
        h: &PadicPolynomial,
        a: &GaloisRingElement,
        k: u32,
        content: u32,
        t: u32,
        center: &GaloisRingElement,
        top: u32,
    ) {
        let ctx = self.ctx;
        let m = ctx.precision();
        let target = m - content;
        let dh = h.derivative(ctx);
        let mut x = ctx.lift_residue(t);
        for _ in 0..2 * m {
            let val = h.eval(ctx, &x);
            if ctx.valuation(&val).is_none_or(|v| v >= target) {
                break;
            }
            let slope = ctx.inverse(&dh.eval(ctx, &x)).expect("simple residue root");
            x = ctx.sub(&x, &ctx.mul(&val, &slope));
        }
        let root = ctx.add(a, &ctx.mul_p_pow(&x, k));
        let precision = m.min(k + target);
        debug_assert!(ctx.valuation(&self.f.eval(ctx, &root)).is_none_or(|v| v >= 3 * m / 4));
        let mut degree = ctx.degree();
        for &(d, fixed_f) in &self.proper {
            let moved = ctx.sub(&ctx.frobenius_pow(center, d), center);
            if ctx.valuation(&moved).is_some_and(|v| v <= k) {
                continue;
            }
            // Inside one residue disc there is a single root, so a
            // sigma^d-stable f forces sigma^d to fix it.
            let fixed = fixed_f || {
                let drift = ctx.sub(&ctx.frobenius_pow(&root, d), &root);
                ctx.valuation(&drift).is_none_or(|v| v >= precision)
            };
            if fixed {
                degree = d;
                break;
            }
        }
        self.out.roots.push(FoundRoot {
            value: root,
            precision,
            residue: top,
            degree,
        });
    }
}

fn search(ctx: &GaloisRingContext, f: &PadicPolynomial, only_residue: Option<u32>) -> RootSearch {
    let proper = ctx
        .divisors()
        .iter()
        .copied()
        .filter(|&d| d < ctx.degree())
        .map(|d| (d, f.is_fixed_by(ctx, d)))
        .collect();
    let mut s = Search {
        ctx,
        f,
        proper,
        out: RootSearch::default(),
    };
    s.node(&ctx.zero(), 0, None, only_residue);
    s.out
}

/// All roots of `f` in `O_K` found by residue refinement.
pub fn integral_roots(ctx: &GaloisRingContext, f: &PadicPolynomial) -> Result<RootSearch, PadicError> {
    if f.is_zero() {
        return Err(PadicError::ZeroPolynomial);
    }
    Ok(search(ctx, f, None))
}

/// Counts roots of `f` generating `K`, inside `O_K`, inside the maximal
/// ideal, and outside `O_K` (through the reciprocal polynomial).
pub fn count_generating_roots(f: &PadicPolynomial, ctx: &GaloisRingContext) -> Result<RootCountResult, PadicError> {
    let inner = integral_roots(ctx, f)?;
    let outer = search(ctx, &f.reciprocal(), Some(0));
    let mut res = RootCountResult {
        inconclusive: inner.inconclusive + outer.inconclusive,
        ..Default::default()
    };
    for r in inner.roots.iter().filter(|r| r.generates(ctx)) {
        res.count_ok += 1;
        if r.residue == 0 {
            res.count_mk += 1;
        }
    }
    // A zero root of the reciprocal is the point at infinity.
    res.count_outside = outer
        .roots
        .iter()
        .filter(|r| r.generates(ctx) && ctx.valuation(&r.value).is_some_and(|v| v < r.precision))
        .count() as u32;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_and_zero() {
        let ctx = GaloisRingContext::new(3, 2, 20).unwrap();
        let g = ctx.generator();
        let f = PadicPolynomial::new(vec![ctx.zero(), ctx.neg(&g), ctx.one()]);
        let res = count_generating_roots(&f, &ctx).unwrap();
        assert_eq!(res.count_ok, 1);
        assert_eq!(res.count_mk, 0);
        assert_eq!(res.count_outside, 0);
        assert_eq!(res.inconclusive, 0);
        let roots = integral_roots(&ctx, &f).unwrap().roots;
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|r| r.value == g && r.degree == 2));
        assert!(roots.iter().any(|r| r.value.is_zero() && r.degree == 1));
    }

    #[test]
    fn conjugate_pair() {
        let ctx = GaloisRingContext::new(3, 2, 20).unwrap();
        let g = ctx.generator();
        let sg = ctx.frobenius(&g);
        let f = PadicPolynomial::new(vec![ctx.mul(&g, &sg), ctx.neg(&ctx.add(&g, &sg)), ctx.one()]);
        assert!(f.is_fixed_by(&ctx, 1));
        let res = count_generating_roots(&f, &ctx).unwrap();
        assert_eq!((res.count_ok, res.count_mk, res.total()), (2, 0, 2));
    }

    #[test]
    fn no_residue_roots() {
        let ctx = GaloisRingContext::new(3, 1, 10).unwrap();
        let f = PadicPolynomial::from_i64(&ctx, &[1, 0, 1]);
        assert_eq!(count_generating_roots(&f, &ctx).unwrap(), RootCountResult::default());
    }

    #[test]
    fn roots_outside_and_in_the_ideal() {
        // 3x^2 - 10x + 3 = (3x - 1)(x - 3) over Q_3.
        let ctx = GaloisRingContext::new(3, 1, 20).unwrap();
        let f = PadicPolynomial::from_i64(&ctx, &[3, -10, 3]);
        let res = count_generating_roots(&f, &ctx).unwrap();
        assert_eq!((res.count_ok, res.count_mk, res.count_outside), (1, 1, 1));
        // Degree drop: x - 2 with a zero leading slot.
        let f = PadicPolynomial::from_i64(&ctx, &[-2, 1, 0]);
        let res = count_generating_roots(&f, &ctx).unwrap();
        assert_eq!((res.count_ok, res.count_outside), (1, 0));
    }

    #[test]
    fn deep_multiple_residue_roots() {
        // (x - 1)(x - 1 - 2^5) needs five refinement levels.
        let ctx = GaloisRingContext::new(2, 1, 40).unwrap();
        let f = PadicPolynomial::from_i64(&ctx, &[33, -34, 1]);
        let roots = integral_roots(&ctx, &f).unwrap();
        assert_eq!(roots.roots.len(), 2);
        assert_eq!(roots.inconclusive, 0);
        let sq = PadicPolynomial::from_i64(&ctx, &[0, 0, 1]);
        assert!(integral_roots(&ctx, &sq).unwrap().inconclusive > 0);
        assert_eq!(
            count_generating_roots(&PadicPolynomial::from_i64(&ctx, &[0, 0]), &ctx).err(),
            Some(PadicError::ZeroPolynomial)
        );
    }

    #[test]
    fn reciprocal_roundtrip() {
        let ctx = GaloisRingContext::new(5, 1, 10).unwrap();
        let f = PadicPolynomial::from_i64(&ctx, &[1, 2, 3]);
        assert_eq!(f.reciprocal().coeffs()[0], ctx.from_int(3));
        assert_eq!(f.reciprocal().reciprocal(), f);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let ctx = GaloisRingContext::new(5, 2, 20).unwrap();
        let g = ctx.generator();
        let f = PadicPolynomial::new(vec![ctx.from_int(7), g.clone(), ctx.from_int(-3), ctx.one()]);
        let a = ctx.add(&g, &ctx.from_int(2));
        let shifted = f.taylor_shift(&ctx, &a);
        let t = ctx.from_int(11);
        assert_eq!(shifted.eval(&ctx, &t), f.eval(&ctx, &ctx.add(&a, &t)));
    }
}

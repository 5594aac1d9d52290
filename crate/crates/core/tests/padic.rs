use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unramified_core::experiments::{sample_rng, ModelKind, SamplingModel};
use unramified_core::padic::*;

fn ctx_for(p: u64, n: u32, m: u32) -> GaloisRingContext {
    GaloisRingContext::new(p, n, m).unwrap()
}

fn element(ctx: &GaloisRingContext, seed: u64) -> GaloisRingElement {
    ctx.random_element(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn config() -> impl Strategy<Value = (u64, u32, u32)> {
    prop_oneof![
        Just((2u64, 3u32, 40u32)),
        Just((3, 2, 40)),
        Just((7, 2, 40)),
        Just((5, 3, 30)),
        Just((2, 1, 64)),
        Just((2, 4, 126)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((p, n, m) in config(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let ctx = ctx_for(p, n, m);
        let (x, y, z) = (element(&ctx, a), element(&ctx, b), element(&ctx, c));
        prop_assert_eq!(ctx.mul(&x, &y), ctx.mul(&y, &x));
        prop_assert_eq!(ctx.mul(&ctx.mul(&x, &y), &z), ctx.mul(&x, &ctx.mul(&y, &z)));
        prop_assert_eq!(
            ctx.mul(&x, &ctx.add(&y, &z)),
            ctx.add(&ctx.mul(&x, &y), &ctx.mul(&x, &z))
        );
        prop_assert_eq!(ctx.add(&x, &ctx.neg(&x)), ctx.zero());
        prop_assert_eq!(ctx.mul(&x, &ctx.one()), x.clone());
        prop_assert_eq!(ctx.sub(&ctx.add(&x, &y), &y), x.clone());
        if let Some(inv) = ctx.inverse(&x) {
            prop_assert_eq!(ctx.mul(&x, &inv), ctx.one());
        }
    }

    #[test]
    fn frobenius_is_a_ring_automorphism((p, n, m) in config(), a in any::<u64>(), b in any::<u64>()) {
        let ctx = ctx_for(p, n, m);
        let (x, y) = (element(&ctx, a), element(&ctx, b));
        prop_assert_eq!(ctx.frobenius(&ctx.add(&x, &y)), ctx.add(&ctx.frobenius(&x), &ctx.frobenius(&y)));
        prop_assert_eq!(ctx.frobenius(&ctx.mul(&x, &y)), ctx.mul(&ctx.frobenius(&x), &ctx.frobenius(&y)));
        prop_assert_eq!(ctx.frobenius_pow(&x, n), x.clone());
        let fx = ctx.frobenius(&x);
        let field = ctx.residue_field();
        prop_assert_eq!(ctx.residue(&fx), field.frobenius(ctx.residue(&x)));
    }

    #[test]
    fn scaling_law_for_phi((p, n, m) in config(), a in any::<u64>()) {
        let ctx = ctx_for(p, n, m);
        let x = element(&ctx, a);
        let shift = n * (n - 1);
        match (phi(&ctx, &x).half_units, phi(&ctx, &ctx.mul_p_pow(&x, 1)).half_units) {
            (Some(h), Some(hp)) => prop_assert_eq!(hp, h + shift),
            (None, None) => {}
            (h, hp) => prop_assert!(hp.is_none(), "{:?} then {:?}", h, hp),
        }
    }
}

#[test]
fn faithful_nonunit_translation() {
    for (p, n, m) in [
        (3u64, 2u32, 1u32),
        (3, 2, 2),
        (2, 4, 1),
        (2, 4, 2),
        (3, 4, 2),
        (2, 6, 2),
        (2, 6, 3),
    ] {
        let ctx = ctx_for(p, n, 30);
        let field = ctx.residue_field();
        let residue = (0..field.size()).find(|&r| field.element_degree(r) == m).unwrap();
        let zeta = ctx.teichmuller(&ctx.lift_residue(residue));
        assert_eq!(ctx.element_degree(&zeta), ElementDegree::Exact(m));
        let mut rng = ChaCha8Rng::seed_from_u64(p * 100 + n as u64 * 10 + m as u64);
        for _ in 0..200 {
            let x = ctx.mul_p_pow(&ctx.random_element(&mut rng), 1);
            let whole = phi(&ctx, &ctx.add(&zeta, &x));
            let relative = phi_relative(&ctx, &x, m).unwrap();
            assert_eq!(whole, relative, "p={p} n={n} m={m}");
        }
    }
}

#[test]
fn theta_counts_match_enumeration() {
    for (p, d) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (2, 6)] {
        let field = ResidueField::new(p, d).unwrap();
        let exact = (0..field.size()).filter(|&a| field.element_degree(a) == d).count() as u128;
        assert_eq!(inertial_count(p, d as u64).unwrap(), exact, "p={p} d={d}");
    }
    assert_eq!(inertial_count(3, 3).unwrap(), 24);
    assert_eq!(inertial_count(9, 2).unwrap(), 81 - 9);
}

#[test]
fn root_counts_are_invariant_under_unit_rescaling() {
    let model = SamplingModel::new(ModelKind::Haar, 3, 3);
    let ctx = model.context().unwrap();
    for i in 0..300 {
        let mut rng = sample_rng(5, i);
        let f = model.sample(&ctx, &mut rng);
        let u = loop {
            let c = ctx.ring().random(&mut rng);
            if ctx.ring().is_unit(c) {
                break ctx.from_u128(c);
            }
        };
        let base = count_generating_roots(&f, &ctx).unwrap();
        let scaled = count_generating_roots(&f.scale(&ctx, &u), &ctx).unwrap();
        assert_eq!(base, scaled);
        assert_eq!(base.count_ok % 3, 0, "conjugate roots come in full orbits");
    }
}

#[test]
fn monic_polynomials_have_no_roots_outside() {
    let model = SamplingModel::new(ModelKind::Monic, 2, 5);
    let ctx = model.context().unwrap();
    for i in 0..500 {
        let f = model.sample(&ctx, &mut sample_rng(11, i));
        assert_eq!(count_generating_roots(&f, &ctx).unwrap().count_outside, 0);
    }
}

#[test]
fn refined_roots_satisfy_the_polynomial() {
    for (p, n) in [(2u64, 2u32), (3, 3), (5, 2)] {
        let model = SamplingModel::new(ModelKind::Haar, n, p);
        let ctx = model.context().unwrap();
        let m = ctx.precision();
        for i in 0..400 {
            let f = model.sample(&ctx, &mut sample_rng(17, i));
            for root in integral_roots(&ctx, &f).unwrap().roots {
                let v = ctx.valuation(&f.eval(&ctx, &root.value));
                assert!(v.is_none_or(|v| v >= 3 * m / 4), "v(f(x)) = {v:?}");
            }
        }
    }
}

#[test]
fn counts_respect_region_inclusions() {
    let model = SamplingModel::new(ModelKind::Haar, 2, 2);
    let ctx = model.context().unwrap();
    for i in 0..1000 {
        let f = model.sample(&ctx, &mut sample_rng(23, i));
        let c = count_generating_roots(&f, &ctx).unwrap();
        assert!(c.count_mk <= c.count_ok);
        assert_eq!(c.total(), c.count_ok + c.count_outside);
        assert!(c.total() as usize <= f.degree_bound());
    }
}

#[test]
fn degree_one_contexts() {
    let ctx = ctx_for(3, 1, 10);
    assert_eq!(ctx.modulus(), &[0]);
    let x = ctx.from_int(-7);
    assert_eq!(ctx.frobenius(&x), x);
    assert_eq!(phi(&ctx, &x).to_f64(), 1.0);
    assert_eq!(disc_valuation(&ctx, &x), DiscValuation::Exact(0));
}

use unramified_core::arith::{q, BigRational};
use unramified_core::dseries::DFamily;

#[test]
fn small_degree_renderings() {
    let fam = DFamily::new();
    assert_eq!(fam.d(1).unwrap().render(), "1");
    assert_eq!(fam.d(2).unwrap().render(), "(u - 1)/(u - v)");
    assert_eq!(fam.d_star(2).unwrap().render(), "t/(2*t + 2)");
}

#[test]
fn quadratic_probabilities_match_closed_forms() {
    let fam = DFamily::new();
    for p in [2i64, 3, 5, 7, 11] {
        let t = fam.probabilities(2, p as u64).unwrap();
        let alpha = q(p, 2 * p + 2);
        let beta = q(1, 2 * p + 2);
        let rho = q(p - 1, p * p * p - 1) * (q(p * p, 1) * &alpha + &beta);
        assert_eq!((t.alpha, t.beta, t.rho), (alpha, beta, rho), "p={p}");
    }
    let t = fam.probabilities(2, 3).unwrap();
    assert_eq!(t.rho, q(7, 26));
}

#[test]
fn lowest_terms_preserve_values() {
    let fam = DFamily::new();
    for n in [12u64, 24, 36, 60] {
        let ds = fam.d_star(n).unwrap();
        let (num, den) = ds.reduced_univariate().unwrap();
        for x in [q(2, 3), q(5, 1), q(-7, 4)] {
            let reduced = num.eval(std::slice::from_ref(&x)).unwrap() / den.eval(std::slice::from_ref(&x)).unwrap();
            let stored: BigRational = ds.eval(&[("t", x)]).unwrap();
            assert_eq!(reduced, stored, "n={n}");
        }
    }
}

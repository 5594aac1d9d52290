use unramified_core::incidence::verify::verify_divisor_poset;
use unramified_core::incidence::{mobius, mobius_by_chains, DivisorPoset};

fn classical_mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[test]
fn divisor_mobius_is_classical_on_every_interval() {
    for n in [12u64, 30, 60, 360, 720, 997] {
        let dp = DivisorPoset::new(n).unwrap();
        let mu = mobius(dp.poset(), None).unwrap();
        for &d in dp.labels() {
            for &e in dp.labels().iter().filter(|&&e| e % d == 0) {
                assert_eq!(mu.get(d, e).unwrap(), classical_mobius(e / d), "n={n} [{d}, {e}]");
            }
        }
    }
}

#[test]
fn chain_sums_agree() {
    for n in [12u64, 30, 36, 48] {
        let dp = DivisorPoset::new(n).unwrap();
        for &d in dp.labels() {
            assert_eq!(mobius_by_chains(dp.poset(), 1, d).unwrap(), classical_mobius(d));
        }
    }
}

#[test]
fn every_check_passes_up_to_forty() {
    for n in 1..=40 {
        for o in verify_divisor_poset(n).unwrap() {
            assert!(o.passed, "{o}");
        }
    }
}

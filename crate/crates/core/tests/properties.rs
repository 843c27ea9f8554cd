use proptest::prelude::*;
use rayon::prelude::*;

use ssendo::arith::{primes_up_to, PolyRing, PrimeField};
use ssendo::cheb_bounds::{
    cheb_gap_bound, class_number_for, count_n, envelope_cases, envelope_coefficient, field_invariants, Family,
    FieldCase, Residue,
};
use ssendo::hilbert::{hilbert_mod, HilbertCache};
use ssendo::isogeny_graph::{neighborhood, verify_theorem1, Verdict};
use ssendo::qj_solver::{compute_mp, Mode};
use ssendo::quaternion::{deuring_counts, make_order, OrderKind};
use ssendo::ss_curves::{supersingular_j_list, supersingular_j_list_fp2, velu_neighbors};

const SAMPLE_PRIMES: [u64; 8] = [2003, 2011, 2017, 3011, 5003, 5009, 10007, 10009];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn envelopes_hold_beyond_the_start(i in 0usize..SAMPLE_PRIMES.len(), log4 in any::<bool>(), t in 0.0f64..20.0) {
        let p = SAMPLE_PRIMES[i];
        let family = if log4 { Family::Log4 } else { Family::Log6 };
        let residue = Residue::of(p);
        let h = class_number_for(p).unwrap();
        let x = family.start(p) * t.exp();
        for &case in envelope_cases(residue) {
            let c = envelope_coefficient(case, residue, family).unwrap();
            let inv = field_invariants(p, case, h).unwrap();
            prop_assert!(cheb_gap_bound(x, &inv).unwrap().coefficient(h) <= c * (1.0 + 1e-6));
        }
    }

    #[test]
    fn error_term_increases_with_h(i in 0usize..SAMPLE_PRIMES.len(), h in 1u64..200, x in 3.0f64..1e15) {
        let p = SAMPLE_PRIMES[i];
        let a = field_invariants(p, FieldCase::L0Zeta8, h).unwrap();
        let b = field_invariants(p, FieldCase::L0Zeta8, h + 1).unwrap();
        let ra = cheb_gap_bound(x, &a).unwrap();
        let rb = cheb_gap_bound(x, &b).unwrap();
        prop_assert!(ra.error_term >= 0.0);
        prop_assert!(rb.error_term > ra.error_term);
        prop_assert!((ra.lower_bound - (ra.main_term - ra.error_term)).abs() <= 1e-9 * ra.error_term.abs().max(1.0));
    }

    #[test]
    fn count_n_is_monotone(i in 0usize..SAMPLE_PRIMES.len(), x in 0.0f64..3000.0, dx in 0.0f64..500.0) {
        let p = SAMPLE_PRIMES[i];
        prop_assert!(count_n(p, x).unwrap() <= count_n(p, x + dx).unwrap());
    }
}

#[test]
fn count_n_sanity_band() {
    for p in [10009u64, 40009, 100049, 300017, 999961] {
        assert_eq!(p % 4, 1);
        let pf = p as f64;
        let v = count_n(p, 4.0 * pf.sqrt()).unwrap() as f64 * pf.ln() / pf.sqrt();
        assert!((0.5..=2.0).contains(&v), "p = {p}: {v}");
    }
}

#[test]
fn velu_relation_is_symmetric() {
    let ps: Vec<u64> = primes_up_to(199).into_iter().filter(|&p| p > 3).collect();
    ps.par_iter().for_each(|&p| {
        let special = [0u64, 1728 % p];
        let vs: Vec<_> = supersingular_j_list_fp2(p)
            .unwrap()
            .into_iter()
            .filter(|v| !(v.is_base() && special.contains(&v.c0)))
            .collect();
        for ell in [2u64, 3, 5] {
            if ell == p {
                continue;
            }
            let nbrs: Vec<Vec<_>> = vs.iter().map(|v| velu_neighbors(v, ell, p).unwrap()).collect();
            for (a, na) in vs.iter().zip(&nbrs) {
                assert_eq!(na.iter().map(|x| x.1).sum::<usize>() as u64, ell + 1);
                for (b, nb) in vs.iter().zip(&nbrs) {
                    let m_ab = na.iter().find(|x| x.0 == *b).map_or(0, |x| x.1);
                    let m_ba = nb.iter().find(|x| x.0 == *a).map_or(0, |x| x.1);
                    assert_eq!(m_ab, m_ba, "p = {p}, l = {ell}: {a} and {b}");
                }
            }
        }
    });
}

#[test]
fn class_polynomial_roots_are_supersingular() {
    for p in primes_up_to(499).into_iter().filter(|&p| p % 4 == 3 && p > 3) {
        let ring = PolyRing::new(PrimeField::new(p).unwrap());
        let h = hilbert_mod(-(p as i64), p).unwrap();
        let ss = supersingular_j_list(p).unwrap();
        for (r, _) in ring.roots(&h).unwrap() {
            assert!(ss.contains(&r), "p = {p}: root {r}");
        }
    }
}

#[test]
fn deuring_counts_below_500() {
    let cache = HilbertCache::in_memory();
    let ps: Vec<u64> = primes_up_to(499).into_iter().filter(|&p| p > 3).collect();
    ps.par_iter().for_each(|&p| {
        let r = compute_mp(p, None, Mode::Mirror, &cache).unwrap();
        for rec in r.records.iter().filter(|x| x.j != 0 && x.j != 1728 % p) {
            for ell in [3u64, 5, 7] {
                let bound = match rec.kind {
                    OrderKind::O => rec.q * ell * ell,
                    OrderKind::OPrime => 4 * rec.q * ell * ell,
                };
                if (2 * p * rec.q) % ell == 0 || p <= bound {
                    continue;
                }
                let check = verify_theorem1(p, ell, rec.j, rec.q, rec.kind, &cache).unwrap();
                assert_eq!(check.verdict, Verdict::Pass, "p = {p}, j = {}, l = {ell}", rec.j);
                let order = make_order(rec.kind, rec.q, p).unwrap();
                let (principal, frob) = deuring_counts(&order, ell).unwrap();
                let nb = neighborhood(&check.report.j, ell, p).unwrap();
                assert_eq!(principal, nb.loops, "p = {p}, j = {}, l = {ell}", rec.j);
                assert_eq!(frob, nb.fp_rational.len(), "p = {p}, j = {}, l = {ell}", rec.j);
            }
        }
    });
}

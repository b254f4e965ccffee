mod common;

use framecheck::affine::{calderon_mixed_symbol, AffineSystem};
use framecheck::grammian::{check_orthogonality, cross_term, multiplier_symbol};
use framecheck::lattice::{enumerate_alpha, in_lattice};
use framecheck::rational::{q, qr, to_f64};
use framecheck::spectral::{characteristic, frazier_jawerth};
use framecheck::subspace::{check_subspace_dual, check_sufficient_subspace_dual};
use framecheck::{CheckOptions, RatBox, RatMatrix, SpectralSet, CQ};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn case(seed: u64, kind: usize) -> Case {
    random_case(&mut ChaCha8Rng::seed_from_u64(seed), kind)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symbol_is_hermitian(seed in any::<u64>(), kind in 0usize..4, x in -2.0f64..2.0) {
        let c = case(seed, kind);
        let opts = CheckOptions::default();
        let a = multiplier_symbol(&c.h, &c.g, &opts).unwrap().eval_f64(&[x]);
        let b = multiplier_symbol(&c.g, &c.h, &opts).unwrap().eval_f64(&[x]);
        prop_assert!((a - b.conj()).norm() <= 1e-12);
    }

    #[test]
    fn cross_terms_reflect(seed in any::<u64>(), kind in 0usize..4, k in -3i64..=3, x in -2.0f64..2.0) {
        // t_α(H, G)(ξ) = conj t_{−α}(G, H)(ξ + α)
        let c = case(seed, kind);
        let opts = CheckOptions::default();
        let lat = c.h.entries()[0].lattice.get(0, 0).clone();
        let alpha = framecheck::Q::from_integer(k.into()) / lat;
        let fwd = cross_term(&c.h, &c.g, std::slice::from_ref(&alpha), &opts).unwrap();
        let back = cross_term(&c.g, &c.h, &[-alpha.clone()], &opts).unwrap();
        let d = fwd.eval_f64(&[x]) - back.eval_f64(&[x + to_f64(&alpha)]).conj();
        prop_assert!(d.norm() <= 1e-12);
    }

    #[test]
    fn orthogonality_is_symmetric(seed in any::<u64>(), kind in 0usize..4) {
        let c = case(seed, kind);
        let opts = CheckOptions::default();
        let a = check_orthogonality(&c.h, &c.g, &opts).unwrap();
        let b = check_orthogonality(&c.g, &c.h, &opts).unwrap();
        prop_assert_eq!(a.holds, b.holds);
        prop_assert_eq!(a.holds, c.orthogonal);
    }

    #[test]
    fn alpha_enumeration_is_exact(den in prop::sample::select(vec![1i64, 2, 3, 4]), lo in -12i64..12, len in 0i64..10) {
        // dual lattice of c = 1/den is den·ℤ
        let fam = framecheck::lattice::LatticeFamily::new(vec![("0".into(), RatMatrix::scalar(1, qr(1, den)))]).unwrap();
        let bx = RatBox::interval(qr(lo, 2), qr(lo + len, 2));
        let got = enumerate_alpha(&fam, &bx, 10_000).unwrap();
        for a in &got {
            prop_assert!(in_lattice(&RatMatrix::scalar(1, q(den)).inverse().unwrap(), a).unwrap());
            prop_assert!(bx.contains_closed(a));
        }
        let brute = (-20..=20i64).filter(|&k| k != 0 && bx.contains_closed(&[q(k * den)])).count();
        prop_assert_eq!(got.len(), brute);
    }

    #[test]
    fn calderon_sum_is_dilation_periodic(lo in 1i64..6, len in 1i64..6, x in 1.0f64..8.0) {
        let g = characteristic(&[(qr(-(lo + len), 64), qr(-lo, 64)), (qr(lo, 64), qr(lo + len, 64))]).unwrap();
        let sys = AffineSystem::standard(RatMatrix::scalar(1, q(2)), vec![g]).unwrap();
        let window = [RatBox::interval(qr(1, 64), q(1))];
        let s = calderon_mixed_symbol(&sys, &sys, &window, &CheckOptions::default()).unwrap();
        let xi = x / 64.0;
        prop_assert!((s.eval_f64(&[xi]) - s.eval_f64(&[2.0 * xi])).norm() <= 1e-12);
    }

    #[test]
    fn fj_partition_is_exact(n in 1i64..=1024) {
        let fj = frazier_jawerth(&q(2), &qr(1, 128)).unwrap();
        let xi = qr(n, 1024);
        let mut sum = CQ::real(q(0));
        for j in -12..=12 {
            let v = fj.evaluate_exact(&(&xi * framecheck::rational::q_pow(&q(2), j))).unwrap();
            sum = CQ::new(&sum.re + &v.re, &sum.im + &v.im);
        }
        prop_assert_eq!(sum, CQ::real(q(1)));
    }

    #[test]
    fn sufficient_subspace_dual_works_both_ways(seed in any::<u64>(), lo in -8i64..0, hi in 1i64..8) {
        // ĥ = c·χ_E and ĝ = χ_E inside one period: the symbol is one on E
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_lattice(&mut rng);
        let p = period_units(&c).min(32);
        let (lo, hi) = (lo.max(-p / 2), hi.min(p / 2));
        let e = SpectralSet::intervals(&[(at(lo), at(hi))]);
        let h = single(&c, steps("h", &[(lo, hi, CQ::real(c.clone()))]));
        let g = single(&c, steps("g", &[(lo, hi, CQ::real(q(1)))]));
        let opts = CheckOptions::default();
        let suff = check_sufficient_subspace_dual(&h, &g, &e, &opts).unwrap();
        prop_assert!(suff.holds);
        prop_assert!(check_subspace_dual(&h, &g, &e, &opts).unwrap().holds);
        prop_assert!(check_subspace_dual(&g, &h, &e, &opts).unwrap().holds);
    }

    #[test]
    fn subspace_duality_is_monotone_in_e(cut_lo in 0i64..4, cut_hi in 0i64..4) {
        // bidual pair on [−1/4, 1/4) and on every grid subinterval
        let (psi, phi) = framecheck::spectral::bidual_pair();
        let (sp, sf) = (single(&q(1), psi), single(&q(1), phi));
        let opts = CheckOptions::default();
        let e = SpectralSet::intervals(&[(qr(-8 + cut_lo, 32), qr(8 - cut_hi, 32))]);
        prop_assert!(check_subspace_dual(&sp, &sf, &e, &opts).unwrap().holds);
        prop_assert!(!check_subspace_dual(&sf, &sp, &e, &opts).unwrap().holds);
    }
}

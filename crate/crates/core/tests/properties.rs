//! Invariants checked over random inputs.

use motion_harmonics::eigenspace::DEFAULT_BUDGET;
use motion_harmonics::positivity::{gram_matrix, EvaluatorSettings, PointConfig, Provenance};
use motion_harmonics::{
    is_positive_semidefinite, phi_radial, rank_one_model, sl_flat_model, synthesize,
    EigenFunctionHandle, GroupSpec, HaarSampler, PVector, SpectralParam, SphereDensity,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

fn rank_one_spec() -> impl Strategy<Value = (usize, GroupSpec)> {
    prop_oneof![
        Just((2, GroupSpec::so(2).unwrap())),
        Just((3, GroupSpec::so(3).unwrap())),
        Just((4, GroupSpec::su(2).unwrap())),
        Just((4, GroupSpec::sp(1).unwrap())),
        Just((5, GroupSpec::so(5).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_is_one_at_the_origin(n in 2usize..9, s in complex(20.0)) {
        let v = phi_radial(n, s, 0.0, 32).unwrap().value.to_complex();
        prop_assert!((v - 1.0).norm() <= 1e-13);
    }

    #[test]
    fn phi_on_the_imaginary_axis_is_bounded(n in 2usize..9, lam in -10.0..10.0f64, r in 0.0..10.0f64) {
        let v = phi_radial(n, Complex64::new(0.0, lam), r, 128).unwrap();
        prop_assert!(v.value.log_magnitude <= 1e-12);
    }

    #[test]
    fn phi_is_even_in_s(n in 2usize..9, s in complex(5.0), r in 0.0..5.0f64) {
        let a = phi_radial(n, s, r, 96).unwrap().value;
        let b = phi_radial(n, -s, r, 96).unwrap().value;
        prop_assert!(a.relative_distance(b) <= 1e-12);
    }

    #[test]
    fn rank_one_weyl_images_match_actions(
        (n, spec) in rank_one_spec(),
        lam in complex(3.0),
        seed in any::<u64>(),
    ) {
        let model = rank_one_model(n, spec).unwrap();
        let lam = SpectralParam(vec![lam]);
        let y = PVector(HaarSampler::new(GroupSpec::so(n).unwrap(), seed).sample().apply(
            &(0..n).map(|i| 1.0 + i as f64).collect::<Vec<_>>(),
        ));
        for (img, k0) in model.weyl_representatives(&lam).unwrap() {
            let lhs = model.pairing(&img, &y).unwrap();
            let rhs = model.pairing_after_action(&lam, &k0, &y, None);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn sl_weyl_images_match_actions(
        n in 2usize..5,
        vals in prop::collection::vec(complex(2.0), 4),
        coords in prop::collection::vec(-3.0..3.0f64, 9),
    ) {
        let model = sl_flat_model(n).unwrap();
        let lam = SpectralParam(vals[..n - 1].to_vec());
        let y = PVector(coords[..model.dim_p()].to_vec());
        for (img, k0) in model.weyl_representatives(&lam).unwrap() {
            let lhs = model.pairing(&img, &y).unwrap();
            let rhs = model.pairing_after_action(&lam, &k0, &y, None);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn pairing_is_linear_in_lambda(
        a in complex(3.0), b in complex(3.0), l1 in complex(3.0), l2 in complex(3.0),
        y in prop::collection::vec(-3.0..3.0f64, 5),
    ) {
        let model = sl_flat_model(3).unwrap();
        let y = PVector(y.into_iter().cycle().take(model.dim_p()).collect());
        let lam1 = SpectralParam(vec![l1, l2]);
        let lam2 = SpectralParam(vec![l2, l1]);
        let comb = SpectralParam(vec![a * l1 + b * l2, a * l2 + b * l1]);
        let lhs = model.pairing(&comb, &y).unwrap();
        let rhs = a * model.pairing(&lam1, &y).unwrap() + b * model.pairing(&lam2, &y).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn integrand_has_unit_modulus_for_real_lambda(
        (n, spec) in rank_one_spec(), lam in -5.0..5.0f64, seed in any::<u64>(),
        y in prop::collection::vec(-3.0..3.0f64, 5),
    ) {
        let model = rank_one_model(n, spec).unwrap();
        let y = PVector(y[..n].to_vec());
        let k = HaarSampler::new(spec, seed).sample();
        let p = model.pairing_after_action(&SpectralParam::real(&[lam]), &k, &y, None);
        prop_assert!(p.im.abs() <= 1e-12);
        prop_assert!((Complex64::i() * p).exp().norm() - 1.0 <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn psd_verdict_ignores_order_and_translation(
        lam in -3.0..3.0f64,
        seed in any::<u64>(),
        shift in prop::collection::vec(-5.0..5.0f64, 3),
        rotate in 1usize..6,
    ) {
        let model = rank_one_model(3, GroupSpec::so(3).unwrap()).unwrap();
        let base = PointConfig::random(&model, 6, 1.5, seed).unwrap();
        let mut moved: Vec<PVector> = base.points().iter().map(|p| p.add(&PVector(shift.clone()))).collect();
        moved.rotate_left(rotate);
        let moved = PointConfig::new(moved, Provenance::Grid).unwrap();
        let settings = EvaluatorSettings::default();
        let lam = SpectralParam::real(&[lam]);
        let g0 = gram_matrix(&model, &lam, &base, &settings).unwrap().matrix;
        let g1 = gram_matrix(&model, &lam, &moved, &settings).unwrap().matrix;
        let (psd0, min0) = is_positive_semidefinite(&g0, 1e-9).unwrap();
        let (psd1, min1) = is_positive_semidefinite(&g1, 1e-9).unwrap();
        prop_assert_eq!(psd0, psd1);
        prop_assert!((min0 - min1).abs() <= 1e-9);
    }

    #[test]
    fn synthesis_is_linear(
        n in 2usize..4,
        seeds in (any::<u64>(), any::<u64>()),
        a in complex(2.0), b in complex(2.0),
        lam in complex(2.0),
        x in prop::collection::vec(-4.0..4.0f64, 3),
    ) {
        let f = SphereDensity::random(n, DEFAULT_BUDGET, seeds.0).unwrap();
        let g = SphereDensity::random(n, DEFAULT_BUDGET, seeds.1).unwrap();
        let comb = f.with_values(
            f.values().iter().zip(g.values()).map(|(u, v)| a * u + b * v).collect(),
        ).unwrap();
        let x = &x[..n];
        let eval = |d: SphereDensity| synthesize(&EigenFunctionHandle::new(lam, d), x).unwrap();
        let lhs = eval(comb);
        let rhs = a * eval(f) + b * eval(g);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}

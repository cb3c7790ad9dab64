use gleason_cauchy::augmented::augmented_basis_from_onb;
use gleason_cauchy::basis::{
    change_of_basis, expand, orthonormal_operator_basis, BasisKind, OperatorBasis,
};
use gleason_cauchy::cauchy::{
    check_linear, grid_from_unit, unboundedness_witness, ExtensionBase, ExtensionView, QSqrt2,
    QSqrt2Additive,
};
use gleason_cauchy::cone::{cone_membership, interior_point_edelta};
use gleason_cauchy::effect::{
    coexists, is_effect, max_scale, random_density, random_effect, random_mic_pom, validate_pom,
    DensityOperator, Effect,
};
use gleason_cauchy::eigen::eig_hermitian;
use gleason_cauchy::frame::{
    check_additivity, restriction_linearity_check, BornFrame, FrameFunction, SquareFrame,
    TabulatedFrame,
};
use gleason_cauchy::operator::{hs_inner, HermitianOperator};
use gleason_cauchy::random::{random_hermitian, random_orthonormal_basis, rng_from_seed};
use gleason_cauchy::tolerance::ToleranceConfig;
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hs_inner_symmetric_and_positive(d in 2usize..=5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(d, &mut rng).unwrap();
        let b = random_hermitian(d, &mut rng).unwrap();
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
        prop_assert!(hs_inner(&a, &a).unwrap() > 0.0);
        prop_assert_eq!(hs_inner(&HermitianOperator::zeros(d), &HermitianOperator::zeros(d)).unwrap(), 0.0);
    }

    #[test]
    fn expansion_round_trips(d in 2usize..=4, seed in any::<u64>()) {
        let tol = tol();
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(d, &mut rng).unwrap();
        let onb = random_orthonormal_basis(d, &mut rng, &tol).unwrap();
        let generic: Vec<_> = (0..d * d).map(|_| random_hermitian(d, &mut rng).unwrap()).collect();
        let bases = [
            orthonormal_operator_basis(d).unwrap(),
            augmented_basis_from_onb(&onb, &tol).unwrap().basis().unwrap().clone(),
            random_mic_pom(d, seed, &tol).unwrap().basis().clone(),
            OperatorBasis::new(generic, BasisKind::Generic, &tol).unwrap(),
        ];
        for basis in &bases {
            let back = expand(&h, basis).unwrap().recombine().unwrap();
            prop_assert!((&back - &h).norm() <= tol.residual, "{:?}", basis.kind());
        }
    }

    #[test]
    fn change_of_basis_inverse_transpose(d in 2usize..=4, seed in any::<u64>()) {
        let tol = tol();
        let m = random_mic_pom(d, seed, &tol).unwrap();
        let onb = random_orthonormal_basis(d, &mut rng_from_seed(seed), &tol).unwrap();
        let b = augmented_basis_from_onb(&onb, &tol).unwrap();
        let c = change_of_basis(b.basis().unwrap(), m.basis()).unwrap();
        let product = c.inverse_transpose.transpose() * &c.matrix;
        let n = d * d;
        prop_assert!((product - DMatrix::<f64>::identity(n, n)).norm() <= tol.residual);
    }

    #[test]
    fn coexistence_is_sum_being_an_effect(d in 2usize..=4, seed in any::<u64>(), w in 0.3f64..0.9) {
        let tol = tol();
        let e1 = random_effect(d, seed, &tol).unwrap();
        let e2 = random_effect(d, seed.wrapping_add(1), &tol).unwrap().scaled(w, &tol).unwrap();
        let sum_ok = is_effect(&(e1.op() + e2.op()), &tol).unwrap().is_effect;
        prop_assert_eq!(coexists(&e1, &e2, &tol).unwrap(), sum_ok);
    }

    #[test]
    fn max_scale_is_sharp(d in 2usize..=4, seed in any::<u64>(), t in 0.0f64..=1.0) {
        let tol = tol();
        let e = random_effect(d, seed, &tol).unwrap();
        let a = max_scale(&e, &tol).unwrap();
        prop_assert!(is_effect(&e.op().scale(t * a), &tol).unwrap().is_effect);
        prop_assert!(!is_effect(&e.op().scale(a * (1.0 + 1e-6)), &tol).unwrap().is_effect);
    }

    #[test]
    fn augmented_basis_properties(d in 2usize..=5, seed in any::<u64>()) {
        let tol = tol();
        let onb = random_orthonormal_basis(d, &mut rng_from_seed(seed), &tol).unwrap();
        let b = augmented_basis_from_onb(&onb, &tol).unwrap();
        prop_assert!(b.gamma() >= 2.0);
        prop_assert!(validate_pom(&b.completion_pom(&tol).unwrap().operators(), &tol).unwrap().passed());
        // Unscaled projector Π_k = Γ·B_k has coordinates Γ·e_k.
        let view = b.basis().unwrap();
        for (k, bk) in b.elements().iter().enumerate() {
            let coeffs = expand(&bk.scale(b.gamma()), view).unwrap().coeffs;
            for (j, c) in coeffs.iter().enumerate() {
                let want = if j == k { b.gamma() } else { 0.0 };
                prop_assert!((c - want).abs() <= tol.residual);
            }
        }
    }

    #[test]
    fn edelta_is_interior(d in 2usize..=4, seed in any::<u64>()) {
        let tol = tol();
        let onb = random_orthonormal_basis(d, &mut rng_from_seed(seed), &tol).unwrap();
        let b = augmented_basis_from_onb(&onb, &tol).unwrap();
        let ip = interior_point_edelta(&b, 1.0 / (4.0 * d as f64), &tol).unwrap();
        let dec = cone_membership(&ip.e_delta, b.basis().unwrap(), &tol).unwrap().unwrap();
        let floor = (1.0 / (b.c() * d as f64)).min(ip.delta) - tol.residual;
        prop_assert!(dec.coeffs.iter().all(|c| *c >= floor));
        prop_assert!(dec.coeffs.iter().all(|c| *c > tol.psd_slack));
    }

    #[test]
    fn tabulated_frame_matches_born(d in 2usize..=3, seed in any::<u64>()) {
        let tol = tol();
        let born = BornFrame { state: random_density(d, seed).unwrap() };
        let mic = random_mic_pom(d, seed.wrapping_add(9), &tol).unwrap();
        let tab = TabulatedFrame::from_frame(&born, mic.basis().clone(), &tol).unwrap();
        let mut rng = rng_from_seed(seed);
        for _ in 0..20 {
            let e = gleason_cauchy::effect::random_effect_from(d, &mut rng, &tol).unwrap();
            prop_assert!((tab.evaluate(&e) - born.evaluate(&e)).abs() <= tol.residual);
        }
    }

    #[test]
    fn grid_additivity_forces_linearity(
        an in 1i64..200, ad in 1i64..50, n in 1u64..60, vn in -500i64..500, vd in 1i64..90,
    ) {
        let g = grid_from_unit(ratio(an, ad), n, ratio(vn, vd)).unwrap();
        let lin = check_linear(&g).unwrap();
        prop_assert!(lin.is_linear);
        prop_assert_eq!(lin.slope, ratio(vn, vd) * BigRational::from_integer(n.into()) / ratio(an, ad));
    }

    #[test]
    fn qsqrt2_extension_is_additive(
        alpha in -20i64..20, beta in -20i64..20,
        x in (-60i64..60, 1i64..9, -60i64..60, 1i64..9),
        y in (-60i64..60, 1i64..9, -60i64..60, 1i64..9),
    ) {
        let model = QSqrt2Additive::from_ints(alpha, beta);
        let view = ExtensionView::new(ExtensionBase::qsqrt2(&model, ratio(1, 3)).unwrap()).unwrap();
        let x = QSqrt2::new(ratio(x.0, x.1), ratio(x.2, x.3));
        let y = QSqrt2::new(ratio(y.0, y.1), ratio(y.2, y.3));
        let (_, ok) = view.check_additive_pair(&x, &y).unwrap();
        prop_assert!(ok);
        prop_assert_eq!(view.f_real(&x).unwrap().value, model.eval(&x));
    }

    #[test]
    fn grid_modulus_independence(step_num in 1i64..10, step_den in 1i64..10, k in 0u64..40, v in -30i64..30) {
        // x = k·a on a grid of 2520 = lcm(1..=10) steps: any divisor n of 2520
        // with n ≥ k puts x/n on the grid.
        let n_grid = 2520u64;
        let a = ratio(step_num, step_den);
        let g = grid_from_unit(a.clone(), n_grid, ratio(v, 7)).unwrap();
        let view = ExtensionView::new(ExtensionBase::Grid(g)).unwrap();
        let x = QSqrt2::rational(&a * BigRational::from_integer(k.into()));
        let reference = view.f_plus(&x).unwrap().value;
        for n in (k.max(1)..=60).filter(|n| n_grid.is_multiple_of(*n)) {
            let value = view.f_plus_with_modulus(&x, &BigInt::from(n)).unwrap();
            prop_assert_eq!(&value, &reference, "n = {}", n);
        }
    }

    #[test]
    fn witnesses_exist_for_every_nonlinear_model(
        alpha in -50i64..50, beta in -50i64..50, bound in 1i64..1_000_000, den in 1i64..20,
    ) {
        prop_assume!(alpha != 0 || beta != 0);
        let f = QSqrt2Additive::from_ints(alpha, beta);
        let a = ratio(1, den);
        let w = unboundedness_witness(&f, &BigRational::from_integer(bound.into()), &a).unwrap();
        prop_assert!(w.verify(&f));
    }
}

#[test]
fn eigendecomposition_round_trip() {
    let tol = tol();
    for i in 0..1000u64 {
        let d = 2 + (i % 5) as usize;
        let a = random_hermitian(d, &mut rng_from_seed(i)).unwrap();
        let eig = eig_hermitian(&a, &tol).unwrap();
        let lambda = DMatrix::from_diagonal(&DVector::from_iterator(
            d,
            eig.values.iter().map(|l| Complex64::new(*l, 0.0)),
        ));
        let back = &eig.vectors * lambda * eig.vectors.adjoint();
        let err = (back - a.matrix()).norm();
        assert!(
            err <= 10.0 * tol.residual * a.norm().max(1.0),
            "seed {i}: {err:e}"
        );
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn random_mic_poms_have_full_rank() {
    let tol = tol();
    for d in 2..=4 {
        for seed in 0..50u64 {
            let m = random_mic_pom(d, seed, &tol).unwrap();
            assert_eq!(m.basis().rank_info().rank, d * d, "d={d} seed={seed}");
            let report = validate_pom(&m.pom().operators(), &tol).unwrap();
            assert!(report.passed() && report.sum_deviation <= tol.residual);
        }
    }
}

#[test]
fn square_frame_detected_in_small_dimensions() {
    let tol = tol();
    for d in 2..=3 {
        let f = SquareFrame {
            state: DensityOperator::basis_state(d, 0),
        };
        let additivity = check_additivity(&f, 100, 0, &tol).unwrap().max_violation;
        let b = augmented_basis_from_onb(&gleason_cauchy::augmented::computational_onb(d), &tol)
            .unwrap();
        let restriction = (0..d * d)
            .map(|j| {
                restriction_linearity_check(&f, &b, j, 100, &tol)
                    .unwrap()
                    .max_deviation
            })
            .fold(0.0, f64::max);
        assert!(additivity > 0.01 || restriction > 0.01, "d={d}");
    }
}

#[test]
fn scaled_effects_stay_effects_at_the_boundary() {
    let tol = tol();
    let e = Effect::new(HermitianOperator::diagonal(&[0.25, 0.5]), &tol).unwrap();
    assert_eq!(max_scale(&e, &tol).unwrap(), 2.0);
    assert!(e.scaled(2.0, &tol).is_ok());
    assert!(e.scaled(2.0 * (1.0 + 1e-6), &tol).is_err());
}

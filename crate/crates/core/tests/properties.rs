use nalgebra::DVector;
use proptest::prelude::*;

use so1n_core::boundary::{boundary_action, conformal_factor, visual_kernel};
use so1n_core::iwasawa::{iwasawa_cocycle_defect, iwasawa_decompose};
use so1n_core::lie::{a_element, group_exp, n_element};
use so1n_core::numeric::relative_diff;
use so1n_core::principal_series::{compat_defect, SampleSet};
use so1n_core::{sampling, AlgebraElement, BoundarySection, GroupElement, Sign};

fn sign_strategy() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn forward_factors_are_recovered(seed in any::<u64>(), n in 1usize..=3, sign in sign_strategy()) {
        let mut rng = sampling::stream(seed, "prop-iwasawa");
        let k = sampling::k_element(&mut rng, n);
        let t = rand::Rng::random_range(&mut rng, -3.0..3.0);
        let v = sampling::uniform_vector(&mut rng, n, 2.0);
        let g = &(&k * &a_element(n, t)) * &n_element(sign, &v);
        let f = iwasawa_decompose(&g, sign).unwrap();
        prop_assert!((f.t - t).abs() < 1e-9);
        prop_assert!((&f.v - &v).norm() < 1e-9);
        prop_assert!(relative_diff(f.k.mat(), k.mat()) < 1e-9);
        prop_assert!(f.residual < 1e-9);
    }

    #[test]
    fn boundary_action_is_an_action(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sampling::stream(seed, "prop-action");
        let g1 = sampling::group_element(&mut rng, n, 1.0);
        let g2 = sampling::group_element(&mut rng, n, 1.0);
        let b = sampling::boundary_point(&mut rng, n);
        let nested = boundary_action(&g1, &boundary_action(&g2, &b).unwrap()).unwrap();
        let direct = boundary_action(&(&g1 * &g2), &b).unwrap();
        prop_assert!((nested.coords() - direct.coords()).norm() < 1e-10);
        // Conformal factors multiply along the action.
        let chained = conformal_factor(&g1, &boundary_action(&g2, &b).unwrap()).unwrap() * conformal_factor(&g2, &b).unwrap();
        let whole = conformal_factor(&(&g1 * &g2), &b).unwrap();
        prop_assert!((chained - whole).abs() < 1e-10 * whole.max(1.0));
    }

    #[test]
    fn cocycle_holds_for_both_signs(seed in any::<u64>(), n in 1usize..=3, sign in sign_strategy()) {
        let mut rng = sampling::stream(seed, "prop-cocycle");
        let g1 = sampling::group_element(&mut rng, n, 1.0);
        let g2 = sampling::group_element(&mut rng, n, 1.0);
        prop_assert!(iwasawa_cocycle_defect(&g1, &g2, sign).unwrap() < 1e-9);
    }

    #[test]
    fn visual_kernel_cocycle(seed in any::<u64>()) {
        let mut rng = sampling::stream(seed, "prop-kernel");
        let n = 2;
        let x = sampling::group_element(&mut rng, n, 1.0);
        let y = sampling::group_element(&mut rng, n, 1.0);
        let z = sampling::group_element(&mut rng, n, 1.0);
        let b = sampling::boundary_point(&mut rng, n);
        let lhs = visual_kernel(&x, &b, &y).unwrap() * visual_kernel(&y, &b, &z).unwrap();
        let rhs = visual_kernel(&x, &b, &z).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0));
    }

    #[test]
    fn exponential_is_a_homomorphism_on_lines(seed in any::<u64>(), n in 1usize..=3, s in -1.0f64..1.0, t in -1.0f64..1.0) {
        let mut rng = sampling::stream(seed, "prop-exp");
        // Rotation block plus a boost column; the time row mirrors the column.
        let mut mat = nalgebra::DMatrix::zeros(n + 2, n + 2);
        mat.view_mut((0, 0), (n + 1, n + 1)).copy_from(&sampling::skew_matrix(&mut rng, n + 1, 1.0));
        let boost = sampling::uniform_vector(&mut rng, n + 1, 1.0);
        for i in 0..=n {
            mat[(i, n + 1)] = boost[i];
            mat[(n + 1, i)] = boost[i];
        }
        let x = AlgebraElement::from_matrix(mat, n).unwrap();
        let a = group_exp(&x.scale(s)).unwrap();
        let b = group_exp(&x.scale(t)).unwrap();
        let ab = group_exp(&x.scale(s + t)).unwrap();
        prop_assert!(relative_diff((&a * &b).mat(), ab.mat()) < 1e-11);
        prop_assert!(ab.j_defect() < 1e-11);
    }
}

#[test]
fn pullback_of_one_forms_on_the_three_sphere() {
    let mut rng = sampling::stream(5, "it-compat");
    let n = 3;
    let samples = SampleSet::new(n, 1, 40, 9).unwrap();
    let s = BoundarySection::coordinate_form(n, 2).unwrap();
    for _ in 0..5 {
        let g = sampling::group_element(&mut rng, n, 1.2);
        assert!(compat_defect(&g, &s, &samples).unwrap() < 1e-8);
    }
}

#[test]
fn inverse_is_the_group_inverse() {
    let mut rng = sampling::stream(6, "it-inverse");
    for n in 1..=3 {
        let g = sampling::group_element(&mut rng, n, 2.0);
        let id = &g * &g.inverse();
        assert!(relative_diff(id.mat(), GroupElement::identity(n).mat()) < 1e-12);
    }
    let v = DVector::from_column_slice(&[0.3, -0.2]);
    let u = n_element(Sign::Minus, &v);
    assert!(relative_diff(u.inverse().mat(), n_element(Sign::Minus, &(-v)).mat()) < 1e-15);
}

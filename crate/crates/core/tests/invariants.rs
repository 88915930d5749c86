use proptest::prelude::*;

use spherepack::axis::{res_to_imag_axis, PSI_WEIGHT};
use spherepack::cohn_elkies::{ce_bound, rescaled_bound};
use spherepack::forms::{FormId, Forms};
use spherepack::lattice::{self, e8_basis, e8_membership, nearest_point, LatticeVector, DIM};
use spherepack::packing::{finite_density_mc, periodic_density, PeriodicPackingSpec};

fn point(range: f64) -> impl Strategy<Value = [f64; DIM]> {
    prop::array::uniform8(-range..range)
}

fn lattice_vector() -> impl Strategy<Value = LatticeVector> {
    prop::array::uniform8(-3i64..=3).prop_map(|c| {
        let rows = e8_basis().half_rows().to_owned();
        let h = std::array::from_fn(|j| (0..DIM).map(|i| c[i] * rows[i][j]).sum());
        LatticeVector::from_half_coords(h).expect("integer combination of basis rows")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decoded_point_is_a_lattice_point_within_the_covering_radius(y in point(10.0)) {
        let (v, d) = nearest_point(&y);
        prop_assert!(e8_membership(&v.coords()));
        prop_assert!(d <= 1.0 + 1e-12);
    }

    #[test]
    fn no_root_neighbour_is_closer(y in point(10.0)) {
        let (v, d) = nearest_point(&y);
        let roots = &lattice::enumerate_shells(2, true).unwrap()[0];
        for r in roots.vectors.as_ref().unwrap() {
            let w = v.add(r).coords();
            let dw: f64 = w.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            prop_assert!(dw >= d - 1e-12);
        }
    }

    #[test]
    fn decoding_commutes_with_lattice_translation(y in point(3.0), v in lattice_vector()) {
        let shifted: [f64; DIM] = std::array::from_fn(|i| y[i] + v.coords()[i]);
        let (a, da) = nearest_point(&y);
        let (b, db) = nearest_point(&shifted);
        prop_assert!((da - db).abs() < 1e-9);
        // away from ties the decoder is translation equivariant
        let gap = {
            let roots = &lattice::enumerate_shells(2, true).unwrap()[0];
            roots.vectors.as_ref().unwrap().iter().map(|r| {
                let w = a.add(r).coords();
                w.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt() - da
            }).fold(f64::INFINITY, f64::min)
        };
        if gap > 1e-6 {
            prop_assert_eq!(b, a.add(&v));
        }
    }

    #[test]
    fn lattice_is_closed_and_norms_are_even(a in lattice_vector(), b in lattice_vector()) {
        let s = a.add(&b);
        prop_assert!(e8_membership(&s.coords()));
        prop_assert_eq!(s.norm2() % 2, 0);
        prop_assert_eq!(a.add(&a.neg()), LatticeVector::ZERO);
    }

    #[test]
    fn bound_is_invariant_under_scaling_f(f0 in 0.01f64..100.0, fhat0 in 0.01f64..100.0, c in 0.01f64..100.0) {
        let b = ce_bound(f0, fhat0, 8).unwrap();
        let bc = ce_bound(c * f0, c * fhat0, 8).unwrap();
        prop_assert!((b - bc).abs() <= 1e-12 * b);
    }

    #[test]
    fn rescaling_the_argument_scales_the_bound(g0 in 0.1f64..10.0, ghat0 in 0.1f64..10.0, s in 0.25f64..4.0) {
        let base = ce_bound(g0, ghat0, 8).unwrap();
        let scaled = rescaled_bound(g0, ghat0, s, 8).unwrap();
        prop_assert!((scaled - base * s.powi(8)).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn nonpositive_fhat0_is_rejected(f0 in -10.0f64..10.0, fhat0 in -10.0f64..=0.0) {
        prop_assert!(ce_bound(f0, fhat0, 8).is_err());
    }

    #[test]
    fn density_is_translation_invariant(shift in point(5.0)) {
        let e8 = PeriodicPackingSpec::e8();
        let d0 = periodic_density(&e8).unwrap();
        let d1 = periodic_density(&e8.translated(&shift)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axis_restriction_vanishes_off_the_positive_axis(t in -50.0f64..=0.0) {
        for form in FormId::ALL {
            let v = res_to_imag_axis(form, t, Forms::standard()).unwrap();
            prop_assert_eq!(v.re, 0.0);
            prop_assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn e4_and_e6_transform_under_s(t in 0.3f64..3.0) {
        let f = Forms::standard();
        let e4 = res_to_imag_axis(FormId::E4, t, f).unwrap().re;
        let e4s = res_to_imag_axis(FormId::E4, 1.0 / t, f).unwrap().re;
        prop_assert!((e4 - t.powi(-4) * e4s).abs() <= 1e-10 * e4.abs().max(1.0));
        let e6 = res_to_imag_axis(FormId::E6, t, f).unwrap().re;
        let e6s = res_to_imag_axis(FormId::E6, 1.0 / t, f).unwrap().re;
        prop_assert!((e6 + t.powi(-6) * e6s).abs() <= 1e-9 * e6.abs().max(t.powi(-6) * e6s.abs()).max(1.0));
    }

    #[test]
    fn s_weighted_combinations_match_their_parts(t in 1.01f64..3.0) {
        let f = Forms::standard();
        let (phi0, psi) = (f.phi0_s_weighted(t).unwrap(), f.psi_s_s_weighted(t).unwrap());
        let scale = phi0.abs().max(PSI_WEIGHT * psi.abs());
        for sign in [1.0, -1.0] {
            let combo = f.s_weighted_combo(t, sign).unwrap();
            prop_assert!((combo - (phi0 + sign * PSI_WEIGHT * psi)).abs() <= 1e-9 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monte_carlo_is_a_function_of_the_seed(seed in any::<u64>()) {
        let e8 = PeriodicPackingSpec::e8();
        let a = finite_density_mc(&e8, 2.5, 5_000, seed).unwrap();
        let b = finite_density_mc(&e8, 2.5, 5_000, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.value >= 0.0 && a.value <= 1.0);
    }
}

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use proptest::prelude::*;

use orbitlab::coadjoint_orbits::{b_invariants, classify_b_form};
use orbitlab::discrete_series::{branch_to_b, DiscreteSeriesParam, DsClass};
use orbitlab::lie_su21::{coadjoint_b, coadjoint_b_transform, BTransform, DualForm, GroupElementB, KElement};
use orbitlab::linalg::CMat;
use orbitlab::moment_projection::{k_translate, project_p, r_of_k};
use orbitlab::regular_singular::l2_dimension_at_zero;
use orbitlab::symplectic_reduction::{quantize_point, reduced_point_coordinate};
use orbitlab::{Sign, C64, Q};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn group_element() -> impl Strategy<Value = GroupElementB> {
    (-3.0..3.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(w, s, x, y, z)| GroupElementB { w, s, x, y, z })
}

fn b_form() -> impl Strategy<Value = DualForm<f64>> {
    prop::array::uniform5(-2.0..2.0f64).prop_map(|[w, s, x, y, z]| DualForm::b(w, s, x, y, z))
}

/// Exact element of B: rotation from a rational tangent half-angle.
fn rational_b() -> impl Strategy<Value = BTransform<Q>> {
    (-6i64..=6, 1i64..=6, 1i64..=6, 1i64..=6, -8i64..=8, -8i64..=8, -8i64..=8).prop_map(|(t, tn, dn, dd, x, y, z)| {
        let t = q(t, tn);
        let den = Q::one() + &t * &t;
        BTransform {
            cos_w: (Q::one() - &t * &t) / &den,
            sin_w: (&t + &t) / &den,
            dil: q(dn, dd),
            x: q(x, 3),
            y: q(y, 5),
            z: q(z, 7),
        }
    })
}

fn neither_or_holo() -> impl Strategy<Value = DiscreteSeriesParam> {
    (1i64..=6, 0i64..=12).prop_filter_map("not a discrete-series parameter", |(h, z)| {
        let z = z - 6 - h;
        DiscreteSeriesParam::new(h, z).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coadjoint_action_is_a_homomorphism(g1 in group_element(), g2 in group_element(), f in b_form()) {
        let lhs = coadjoint_b(&g1.compose(&g2), &f);
        let rhs = coadjoint_b(&g1, &coadjoint_b(&g2, &f));
        for (a, b) in lhs.coeffs.iter().zip(&rhs.coeffs) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn k_orbit_stays_on_sphere(h in 1i64..=8, z in -12i64..=12, zeta in 0.0..6.3f64, phi in 0.0..19.0f64, theta in 0.0..6.3f64, psi in 0.0..19.0f64) {
        let f = k_translate(h as f64, z as f64, &KElement { zeta, phi, theta, psi });
        let s: f64 = f.coeffs[..3].iter().map(|c| c * c).sum();
        prop_assert!((s - (h * h) as f64).abs() < 1e-10);
    }

    #[test]
    fn b_invariants_are_exact_orbit_invariants(g in rational_b(), w in -9i64..=9, s in -9i64..=9, x in -9i64..=9, y in -9i64..=9, z in 1i64..=9, neg in any::<bool>()) {
        let z = if neg { -z } else { z };
        let f = DualForm::b(q(w, 2), q(s, 3), q(x, 1), q(y, 2), q(z, 3));
        let moved = coadjoint_b_transform(&g, &f);
        prop_assert_eq!(classify_b_form(&moved), classify_b_form(&f));
        let back = coadjoint_b_transform(&g.inverse(), &moved);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn l2_dimension_at_zero_is_a_similarity_invariant(
        diag in prop::collection::vec((0.1..3.0f64, any::<bool>()), 2..7),
        upper in prop::collection::vec(-1.0..1.0f64, 36),
        p in prop::collection::vec(-0.3..0.3f64, 72),
    ) {
        let n = diag.len();
        let expected = diag.iter().filter(|(_, pos)| *pos).count();
        let m0 = CMat::from_fn(n, n, |i, j| {
            if i == j {
                let (v, pos) = diag[i];
                C64::new(if pos { v } else { -v }, 0.0)
            } else if i < j {
                C64::new(upper[i * 6 + j], 0.0)
            } else {
                C64::zero()
            }
        });
        // Diagonally dominant, hence invertible.
        let pm = CMat::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { 0.0 } + p[i * 6 + j] / n as f64, p[36 + i * 6 + j] / n as f64));
        let pinv = pm.clone().try_inverse().expect("dominant matrix inverts");
        let conj: DMatrix<C64> = &pm * &m0 * &pinv;
        prop_assert_eq!(l2_dimension_at_zero(&m0).unwrap(), expected);
        prop_assert_eq!(l2_dimension_at_zero(&conj).unwrap(), expected);
    }

    #[test]
    fn quantized_points_reproduce_branching(ds in neither_or_holo()) {
        let dec = branch_to_b(&ds, 4);
        let lo = -ds.minus_start() - 3 * 3;
        let hi = ds.plus_start() + 3 * 3;
        for sign in [Sign::Plus, Sign::Minus] {
            for m in lo - 6..=hi + 6 {
                let in_window = m >= lo && m <= hi;
                if ds.class == DsClass::Holo || in_window {
                    prop_assert_eq!(quantize_point(&ds, m, sign), dec.multiplicity(m, sign), "m = {}, {}", m, sign);
                }
            }
        }
        if ds.class == DsClass::Holo {
            let total: u64 = (lo - 30..=hi + 30).flat_map(|m| [Sign::Plus, Sign::Minus].map(|s| quantize_point(&ds, m, s))).sum();
            prop_assert_eq!(total, ds.f0h as u64);
        }
    }

    #[test]
    fn reduced_point_is_the_b_invariant_of_the_image(h in 1i64..=6, z in -12i64..=12, zeta in 0.0..6.3f64, phi in 0.0..19.0f64, theta in 0.0..6.3f64, psi in 0.0..19.0f64) {
        prop_assume!(h != z.abs());
        let (hf, zf) = (h as f64, z as f64);
        let f = project_p(&k_translate(hf, zf, &KElement { zeta, phi, theta, psi }));
        let e2 = f.coeffs[4];
        prop_assume!(e2.abs() > 1e-3);
        let r = r_of_k(hf, zf, e2).unwrap();
        let (r_direct, _) = b_invariants(&f).unwrap();
        prop_assert!((r - r_direct).abs() <= 1e-9 * (1.0 + r.abs()), "{r} vs {r_direct}");
        // The same value through the polar angle of the pairing.
        let cos = ((e2 - zf) / hf).clamp(-1.0, 1.0);
        let via_angle = reduced_point_coordinate(hf, zf, cos.acos()).unwrap();
        prop_assert!((via_angle - r).abs() <= 1e-7 * (1.0 + r.abs()), "{via_angle} vs {r}");
    }
}

use std::f64::consts::PI;

use nctheta_core::heisenberg::{act_u, act_z, random_element, twisted_section_eval};
use nctheta_core::linalg::{
    coset_representatives, difference, is_positive_definite, reduce_mod, IntSymMatrix, SkewMatrix, C64,
};
use nctheta_core::mirror::triangle_area;
use nctheta_core::mirror::SymplecticForm;
use nctheta_core::quiver::{conjugate, hom_dim};
use nctheta_core::star::{random_fourier_polynomial, star_fourier, FourierPolynomial};
use nctheta_core::structure::{c_nc, LabelTriple};
use nctheta_core::theta::{e_comm, e_comm_via_theta};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym2() -> impl Strategy<Value = IntSymMatrix> {
    (-4i64..=4, -4i64..=4, -4i64..=4).prop_map(|(a, b, c)| IntSymMatrix::from_rows(&[vec![a, b], vec![b, c]]).unwrap())
}

/// Positive definite `2 x 2` differences with small entries.
fn pd2() -> impl Strategy<Value = IntSymMatrix> {
    (1i64..=4, -2i64..=2, 1i64..=4)
        .prop_filter_map("positive definite", |(a, b, c)| {
            let m = IntSymMatrix::from_rows(&[vec![a, b], vec![b, c]]).unwrap();
            is_positive_definite(&m).then_some(m)
        })
}

fn unit_point(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..(2.0 * PI)), n)
        .prop_map(|v| v.into_iter().map(|(r, phi)| C64::from_polar(r.sqrt(), phi)).collect())
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quotient_reduction_is_canonical(a in pd2(), v in prop::collection::vec(-20i64..20, 2), w in prop::collection::vec(-3i64..3, 2)) {
        let reps = coset_representatives(&a).unwrap();
        prop_assert_eq!(reps.len() as i64, a.det());
        let base = reduce_mod(&a, &v).unwrap();
        prop_assert!(reps.contains(&base));
        let shifted: Vec<i64> = v.iter().zip(a.mul_vec(&w)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(reduce_mod(&a, &shifted).unwrap(), base.clone());
        prop_assert_eq!(reduce_mod(&a, base.rep()).unwrap(), base);
    }

    #[test]
    fn gaussian_and_theta_forms_agree(a_a in sym2(), d in pd2(), k in 0usize..16, z in unit_point(2)) {
        let a_b = a_a.checked_add(&d).unwrap();
        let reps = coset_representatives(&d).unwrap();
        let mu = &reps[k % reps.len()];
        let g = e_comm(&a_a, &a_b, mu, &z, 1e-14).unwrap().value;
        let t = e_comm_via_theta(&a_a, &a_b, mu, &z, 1e-14).unwrap().value;
        prop_assert!(close(g, t, 1e-10), "{} vs {}", g, t);
    }

    #[test]
    fn basis_functions_are_periodic(d in pd2(), k in 0usize..16, z in unit_point(2), i in 0usize..2) {
        let zero = IntSymMatrix::zero(2);
        let reps = coset_representatives(&d).unwrap();
        let mu = &reps[k % reps.len()];
        let mut shifted = z.clone();
        shifted[i] += 1.0;
        let v0 = e_comm(&zero, &d, mu, &z, 1e-14).unwrap().value;
        let v1 = e_comm(&zero, &d, mu, &shifted, 1e-14).unwrap().value;
        prop_assert!(close(v0, v1, 1e-11));
    }

    #[test]
    fn star_product_is_associative(seed in any::<u64>(), t in -0.5f64..0.5, z in unit_point(2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = SkewMatrix::from_theta12(t);
        let f = random_fourier_polynomial(2, 6, 2, &mut rng);
        let g = random_fourier_polynomial(2, 6, 2, &mut rng);
        let h = random_fourier_polynomial(2, 6, 2, &mut rng);
        let left = star_fourier(&star_fourier(&f, &g, &theta).unwrap(), &h, &theta).unwrap();
        let right = star_fourier(&f, &star_fourier(&g, &h, &theta).unwrap(), &theta).unwrap();
        prop_assert!(close(left.eval(&z).unwrap(), right.eval(&z).unwrap(), 1e-10));
    }

    #[test]
    fn star_product_reverses_under_negated_theta(seed in any::<u64>(), t in -0.5f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_fourier_polynomial(2, 8, 3, &mut rng);
        let g = random_fourier_polynomial(2, 8, 3, &mut rng);
        let fg = star_fourier(&f, &g, &SkewMatrix::from_theta12(t)).unwrap();
        let gf = star_fourier(&g, &f, &SkewMatrix::from_theta12(-t)).unwrap();
        for (m, c) in fg.terms() {
            prop_assert!((c - gf.coefficient(m)).norm() <= 1e-12 * c.norm().max(1.0));
        }
        let commutative = star_fourier(&f, &g, &SkewMatrix::zero(2)).unwrap();
        let flipped = star_fourier(&g, &f, &SkewMatrix::zero(2)).unwrap();
        prop_assert_eq!(commutative.len(), flipped.len());
    }

    #[test]
    fn plane_wave_unit(a in prop::collection::vec(-6i64..=6, 2), t in -1.0f64..1.0) {
        let one = FourierPolynomial::plane_wave(&[0, 0], C64::new(1.0, 0.0));
        let f = FourierPolynomial::plane_wave(&a, C64::new(0.5, -0.25));
        let theta = SkewMatrix::from_theta12(t);
        prop_assert_eq!(star_fourier(&one, &f, &theta).unwrap().coefficient(&a), C64::new(0.5, -0.25));
        prop_assert_eq!(star_fourier(&f, &one, &theta).unwrap().coefficient(&a), C64::new(0.5, -0.25));
    }

    #[test]
    fn compatibility_reduces_to_determinant(a in sym2(), t in -2.0f64..2.0) {
        let theta = SkewMatrix::from_theta12(t);
        let am = a.to_real();
        let lhs = &am * theta.matrix() * &am;
        let rhs = theta.matrix() * a.det() as f64;
        prop_assert!((lhs - rhs).abs().max() <= 1e-12 * (1.0 + t.abs() * 64.0));
    }

    #[test]
    fn deformed_constants_conjugate_under_negated_theta(t in -0.4f64..0.4, i in 0usize..2, j in 0usize..2, k in 0usize..9) {
        let labels = [IntSymMatrix::diag(&[1, -4]), IntSymMatrix::diag(&[2, -2]), IntSymMatrix::diag(&[4, -1])];
        let plus = LabelTriple::new(labels[0].clone(), labels[1].clone(), labels[2].clone(), SkewMatrix::from_theta12(t)).unwrap();
        let minus = LabelTriple::new(labels[0].clone(), labels[1].clone(), labels[2].clone(), SkewMatrix::from_theta12(-t)).unwrap();
        let mus = coset_representatives(&difference(&labels[0], &labels[1]).unwrap()).unwrap();
        let nus = coset_representatives(&difference(&labels[1], &labels[2]).unwrap()).unwrap();
        let rhos = coset_representatives(&difference(&labels[0], &labels[2]).unwrap()).unwrap();
        let p = c_nc(&plus, &mus[i], &nus[j], &rhos[k], 1e-15).unwrap();
        let m = c_nc(&minus, &mus[i], &nus[j], &rhos[k], 1e-15).unwrap();
        prop_assert!(close(p, m.conj(), 1e-12));
    }

    #[test]
    fn conjugation_preserves_determinant(a in sym2(), steps in prop::collection::vec((0usize..4, -3i64..=3), 1..6)) {
        let mut g = vec![vec![1i64, 0], vec![0, 1]];
        for (kind, s) in steps {
            let e = match kind {
                0 => vec![vec![1, s], vec![0, 1]],
                1 => vec![vec![1, 0], vec![s, 1]],
                2 => vec![vec![0, 1], vec![1, 0]],
                _ => vec![vec![-1, 0], vec![0, 1]],
            };
            g = (0..2).map(|r| (0..2).map(|c| g[r][0] * e[0][c] + g[r][1] * e[1][c]).collect()).collect();
        }
        prop_assert_eq!(conjugate(&a, &g).unwrap().det(), a.det());
    }

    #[test]
    fn hom_dimension_counts_cosets(a in sym2(), d in pd2()) {
        let b = a.checked_add(&d).unwrap();
        prop_assert_eq!(hom_dim(&a, &b).unwrap(), coset_representatives(&d).unwrap().len());
        prop_assert_eq!(hom_dim(&b, &a).unwrap(), 0);
    }

    #[test]
    fn triangle_area_is_skew(v in prop::collection::vec(-5.0f64..5.0, 12)) {
        let omega = SymplecticForm::new(2);
        let (p, q, r) = (&v[0..4], &v[4..8], &v[8..12]);
        let s = triangle_area(p, q, r, &omega);
        prop_assert!((s + triangle_area(q, p, r, &omega)).abs() <= 1e-12 * (1.0 + s.abs()));
        prop_assert!((s - triangle_area(q, r, p, &omega)).abs() <= 1e-10 * (1.0 + s.abs()));
    }

    #[test]
    fn generators_commute(seed in any::<u64>(), i in 1usize..=4, j in 1usize..=4, x in prop::collection::vec(-1.0f64..1.0, 2), k in 0usize..3) {
        let a = IntSymMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = random_element(&a, 3, &mut rng).unwrap();
        let mu = &coset_representatives(&a).unwrap()[k];
        let uz = act_u(i, &act_z(j, &xi).unwrap()).unwrap().eval(&x, mu).unwrap();
        let zu = act_z(j, &act_u(i, &xi).unwrap()).unwrap().eval(&x, mu).unwrap();
        prop_assert!(close(uz, zu, 1e-12));
    }

    #[test]
    fn twisted_section_transition(seed in any::<u64>(), x in prop::collection::vec(-1.0f64..1.0, 2), y in prop::collection::vec(-1.0f64..1.0, 2), lam in prop::collection::vec(-2i64..=2, 2)) {
        let a = IntSymMatrix::diag(&[1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = random_element(&a, 2, &mut rng).unwrap();
        let base = twisted_section_eval(&xi, &x, &y, 1e-14).unwrap();
        let xs: Vec<f64> = x.iter().zip(&lam).map(|(v, l)| v + *l as f64).collect();
        prop_assert!(close(twisted_section_eval(&xi, &xs, &y, 1e-14).unwrap(), base, 1e-10));
        let ys: Vec<f64> = y.iter().zip(&lam).map(|(v, l)| v + *l as f64).collect();
        let xal: f64 = (0..2).map(|i| x[i] * (0..2).map(|j| a.get(i, j) as f64 * lam[j] as f64).sum::<f64>()).sum();
        let expected = base * C64::from_polar(1.0, -2.0 * PI * xal);
        prop_assert!(close(twisted_section_eval(&xi, &x, &ys, 1e-14).unwrap(), expected, 1e-10));
    }
}

mod support;

use kappa_core::{Complex64, Jet};
use proptest::prelude::*;
use support::coeff_deviation;

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Three jets sharing a base point and order.
fn jets3() -> impl Strategy<Value = (Jet, Jet, Jet)> {
    (complex(1.0), 1usize..9).prop_flat_map(|(base, order)| {
        let coeffs = || prop::collection::vec(complex(1.0), order + 1);
        (coeffs(), coeffs(), coeffs()).prop_map(move |(a, b, c)| {
            (
                Jet::from_coeffs(base, a).unwrap(),
                Jet::from_coeffs(base, b).unwrap(),
                Jet::from_coeffs(base, c).unwrap(),
            )
        })
    })
}

/// A jet whose value has modulus at least 0.5.
fn invertible(j: &Jet) -> Jet {
    let v = j.value();
    let shift = if v.norm() < 0.5 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    };
    j.add_scalar(shift)
}

/// `(d/dz) op(u)` against `op'(u) · u'`.
fn chain_rule_deviation(fu: &Jet, dfu: &Jet, u: &Jet) -> f64 {
    let lhs = fu.differentiate().unwrap();
    let k = lhs.order();
    let rhs = dfu
        .truncate(k)
        .unwrap()
        .try_mul(&u.differentiate().unwrap())
        .unwrap();
    coeff_deviation(&lhs, &rhs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mul_is_commutative((a, b, _) in jets3()) {
        let ab = a.try_mul(&b).unwrap();
        let ba = b.try_mul(&a).unwrap();
        prop_assert!(coeff_deviation(&ab, &ba) <= 1e-13);
    }

    #[test]
    fn mul_is_associative((a, b, c) in jets3()) {
        let l = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let r = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert!(coeff_deviation(&l, &r) <= 1e-13);
    }

    #[test]
    fn exp_turns_sums_into_products((a, b, _) in jets3()) {
        let l = a.try_add(&b).unwrap().exp().unwrap();
        let r = a.exp().unwrap().try_mul(&b.exp().unwrap()).unwrap();
        prop_assert!(coeff_deviation(&l, &r) <= 1e-12);
    }

    #[test]
    fn sin_squared_plus_cos_squared((a, _, _) in jets3()) {
        let (s, c) = a.sin_cos().unwrap();
        let sum = s.try_mul(&s).unwrap().try_add(&c.try_mul(&c).unwrap()).unwrap();
        let one = Jet::constant(Complex64::new(1.0, 0.0), a.base(), a.order());
        prop_assert!(coeff_deviation(&sum, &one) <= 1e-12);
    }

    #[test]
    fn division_inverts_multiplication((a, b, _) in jets3()) {
        let b = invertible(&b);
        let back = a.try_mul(&b).unwrap().try_div(&b).unwrap();
        prop_assert!(coeff_deviation(&back, &a) <= 1e-11);
    }

    #[test]
    fn shift_commutes_with_arithmetic((a, b, _) in jets3()) {
        prop_assume!(a.order() >= 1);
        let da = a.differentiate().unwrap();
        let db = b.differentiate().unwrap();
        let k = da.order();
        let ta = a.truncate(k).unwrap();
        let tb = b.truncate(k).unwrap();

        let sum = a.try_add(&b).unwrap().differentiate().unwrap();
        prop_assert!(coeff_deviation(&sum, &da.try_add(&db).unwrap()) <= 1e-11);

        let product = a.try_mul(&b).unwrap().differentiate().unwrap();
        let leibniz = da.try_mul(&tb).unwrap().try_add(&ta.try_mul(&db).unwrap()).unwrap();
        prop_assert!(coeff_deviation(&product, &leibniz) <= 1e-11);

        let b = invertible(&b);
        let db = b.differentiate().unwrap();
        let tb = b.truncate(k).unwrap();
        let quotient = a.try_div(&b).unwrap().differentiate().unwrap();
        let rule = da
            .try_mul(&tb)
            .unwrap()
            .try_sub(&ta.try_mul(&db).unwrap())
            .unwrap()
            .try_div(&tb.try_mul(&tb).unwrap())
            .unwrap();
        prop_assert!(coeff_deviation(&quotient, &rule) <= 1e-11);
    }

    #[test]
    fn shift_commutes_with_elementary_functions((u, _, _) in jets3(), p in -3i32..5) {
        prop_assume!(u.order() >= 1);
        let e = u.exp().unwrap();
        prop_assert!(chain_rule_deviation(&e, &e, &u) <= 1e-11);

        let (s, c) = u.sin_cos().unwrap();
        prop_assert!(chain_rule_deviation(&s, &c, &u) <= 1e-11);
        prop_assert!(chain_rule_deviation(&c, &(-&s), &u) <= 1e-11);

        let v = invertible(&u);
        let pw = v.powi(p).unwrap();
        let dpw = if p == 0 {
            Jet::constant(Complex64::new(0.0, 0.0), v.base(), v.order())
        } else {
            v.powi(p - 1).unwrap().scale(Complex64::new(p as f64, 0.0))
        };
        prop_assert!(chain_rule_deviation(&pw, &dpw, &v) <= 1e-11);

        let q = Complex64::new(-1.0 / 3.0, 0.0);
        let fr = v.powc(q).unwrap();
        let dfr = fr.try_div(&v).unwrap().scale(q);
        prop_assert!(chain_rule_deviation(&fr, &dfr, &v) <= 1e-11);
    }

    #[test]
    fn powi_matches_repeated_multiplication((a, _, _) in jets3(), p in 0i32..6) {
        let mut acc = Jet::constant(Complex64::new(1.0, 0.0), a.base(), a.order());
        for _ in 0..p {
            acc = acc.try_mul(&a).unwrap();
        }
        prop_assert!(coeff_deviation(&a.powi(p).unwrap(), &acc) <= 1e-12);
    }

    #[test]
    fn fractional_powers_compose((a, _, _) in jets3()) {
        let v = invertible(&a);
        let cube = v.powf(1.0 / 3.0).unwrap().powi(3).unwrap();
        prop_assert!(coeff_deviation(&cube, &v) <= 1e-11);
    }

    #[test]
    fn composing_with_the_identity_is_neutral((a, _, _) in jets3()) {
        let id = Jet::variable(a.base(), a.order());
        let c = a.compose(&id).unwrap();
        prop_assert!(coeff_deviation(&c, &a) == 0.0);
    }

    #[test]
    fn composition_is_associative((h, _, _) in jets3(), g1 in complex(1.0), f1 in complex(1.0)) {
        // g, f: low-degree polynomial jets expanded where they are needed
        let k = h.order();
        let g = Jet::variable(h.value(), k).scale(g1).add_scalar(Complex64::new(0.3, 0.0));
        let g = g.try_mul(&g).unwrap();
        let gh = g.compose(&h).unwrap();
        let f = Jet::variable(g.value(), k).scale(f1).exp().unwrap();
        let fg = f.compose(&g).unwrap();
        let l = f.compose(&gh).unwrap();
        let r = fg.compose(&h).unwrap();
        prop_assert!(coeff_deviation(&l, &r) <= 1e-11);
    }
}

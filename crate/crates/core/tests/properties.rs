use std::sync::Arc;

use etafano::arith::{
    fract, gauss, int, quad_nonneg_on_interval, rat, sqrt_sign, GaussianRational, ParamPoly, QuadVerdict, Rational,
};
use etafano::catalog::{kunneth_cp1, product_cp1_model};
use etafano::eta::{eta_invariant, EtaOptions};
use etafano::ring::{GradedClass, Monomial, RingSpec};
use etafano::series::{series_eta_hat, FormalSeries};
use etafano::spectral::{
    spectral_flow, CohomologyTable, EigenvalueFamily, FlowOptions, MuSq,
};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn small_gauss() -> impl Strategy<Value = GaussianRational> {
    (small_rat(), small_rat()).prop_map(|(a, b)| gauss(a, b))
}

fn eval_f64(c2: i64, c1: i64, c0: i64, x: f64) -> f64 {
    (c2 as f64 * x + c1 as f64) * x + c0 as f64
}

/// Nilpotent class on ℚ[a0,a1,a2]/(a_i²) with no degree-0 part.
fn nilpotent_class(ring: &Arc<RingSpec>) -> impl Strategy<Value = GradedClass> {
    let ring = ring.clone();
    proptest::collection::vec(small_rat(), 7).prop_map(move |cs| {
        let monos: Vec<Vec<u8>> = (1u8..8).map(|bits| (0..3).map(|i| (bits >> i) & 1).collect()).collect();
        GradedClass::from_terms(&ring, monos.into_iter().zip(cs).map(|(m, c)| (Monomial(m), ParamPoly::real(c))))
    })
}

fn any_class(ring: &Arc<RingSpec>) -> impl Strategy<Value = GradedClass> {
    let ring2 = ring.clone();
    (small_rat(), nilpotent_class(ring)).prop_map(move |(c, x)| &GradedClass::scalar(&ring2, ParamPoly::real(c)) + &x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_field_axioms(a in small_gauss(), b in small_gauss(), c in small_gauss()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if a != GaussianRational::new(int(0), int(0)) {
            prop_assert_eq!(&a * &a.inv(), GaussianRational::new(int(1), int(0)));
        }
    }

    #[test]
    fn sqrt_sign_agrees_with_floats(a in -50i64..50, b in -50i64..50, r in 0i64..400) {
        let exact = sqrt_sign(&int(a), &int(b), &int(r)).unwrap();
        let approx = a as f64 + b as f64 * (r as f64).sqrt();
        if approx.abs() > 1e-9 {
            prop_assert_eq!(exact, if approx > 0.0 { 1 } else { -1 });
        } else {
            // integer inputs: near-zero means exactly zero
            prop_assert_eq!(exact, 0);
        }
    }

    #[test]
    fn quad_classification_matches_sampling(c2 in -6i64..6, c1 in -20i64..20, c0 in -20i64..20, hi in 1i64..8) {
        let verdict = quad_nonneg_on_interval(&int(c2), &int(c1), &int(c0), &int(hi)).unwrap();
        let samples = 2000;
        let min_sample = (0..=samples)
            .map(|j| eval_f64(c2, c1, c0, hi as f64 * j as f64 / samples as f64))
            .fold(f64::INFINITY, f64::min);
        match &verdict {
            QuadVerdict::NegativeSomewhere { witness } => {
                let w = witness;
                let v = (int(c2) * w + int(c1)) * w + int(c0);
                prop_assert!(v < int(0));
                prop_assert!(w >= &int(0) && w <= &int(hi));
            }
            QuadVerdict::VanishesIdentically => prop_assert!(c2 == 0 && c1 == 0 && c0 == 0),
            _ => prop_assert!(min_sample > -1e-9, "sampled {}", min_sample),
        }
        if min_sample < -1e-6 {
            prop_assert!(!verdict.is_nonnegative());
        }
    }

    #[test]
    fn ring_axioms(x in any_class(&RingSpec::square_free(3)), y in any_class(&RingSpec::square_free(3)), z in any_class(&RingSpec::square_free(3))) {
        let ring = x.ring().clone();
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &GradedClass::one(&ring), x.clone());
    }

    #[test]
    fn exp_is_a_homomorphism(x in nilpotent_class(&RingSpec::square_free(3))) {
        let ring = x.ring().clone();
        let e = x.exp_nilpotent().unwrap();
        prop_assert_eq!(&e * &(-&x).exp_nilpotent().unwrap(), GradedClass::one(&ring));
        prop_assert_eq!(x.eval_series(&FormalSeries::exp(6)).unwrap(), e);
    }

    #[test]
    fn eta_hat_constant_term(n in -200i64..200, d in 2i64..50) {
        let r = rat(n, d);
        prop_assume!(r.denom() != &1.into());
        let s = series_eta_hat(&r, 4);
        prop_assert_eq!(s.rational_coeff(0), Some(int(1) - int(2) * fract(&r)));
    }

    #[test]
    fn theorem_holds_off_grid(n in -60i64..=60, eps_n in 1i64..=80) {
        // |r| ≤ κ/2 = 1, ε ∈ (0, 4]
        let (_, model) = product_cp1_model(2).unwrap();
        let r = rat(n, 60);
        let eps = rat(eps_n, 20);
        let rep = spectral_flow(&model, &r, &eps, &FlowOptions::default()).unwrap();
        prop_assert!(rep.indeterminate.is_empty());
        prop_assert_eq!(rep.total, 0);
        for scale in [2, 4] {
            let opts = FlowOptions { window_scale: int(scale), ..FlowOptions::default() };
            prop_assert_eq!(spectral_flow(&model, &r, &eps, &opts).unwrap().total, 0);
        }
    }

    #[test]
    fn branch_sign_matches_quadratic(q in 0usize..=4, k in -4i64..=4, mu_n in 1i64..40, r in small_rat(), d_n in 1i64..60) {
        let n = 4;
        let mu_sq = rat(mu_n, 10);
        let f = EigenvalueFamily::type2(q, k, n, MuSq::Exact(mu_sq.clone()), Some(1));
        let delta = rat(d_n, 10);
        let a = f.radicand(&r, &mu_sq, &delta);
        let (c2, c1, c0) = f.quad_coeffs(&r, &mu_sq);
        let qv = (c2 * &delta + c1) * &delta + c0;
        let qs: i8 = if qv > int(0) { 1 } else if qv < int(0) { -1 } else { 0 };
        if q % 2 == 0 {
            prop_assert_eq!(sqrt_sign(&-delta.clone(), &int(1), &a).unwrap(), qs);
        } else {
            prop_assert_eq!(sqrt_sign(&delta, &int(1), &a).unwrap(), 1);
            prop_assert_eq!(sqrt_sign(&delta, &int(-1), &a).unwrap(), -qs);
        }
    }

    #[test]
    fn kunneth_symmetry(degrees in proptest::collection::vec(-5i64..5, 1..5), q in 0usize..5, perm_seed in any::<u64>()) {
        let mut shuffled = degrees.clone();
        let len = shuffled.len();
        for i in (1..len).rev() {
            let j = (perm_seed as usize).wrapping_mul(i + 7) % (i + 1);
            shuffled.swap(i, j);
        }
        prop_assert_eq!(kunneth_cp1(&degrees, q), kunneth_cp1(&shuffled, q));
    }

    #[test]
    fn assembly_identity_any_n(nn in -20i64..20, nd in 1i64..7, r in small_rat()) {
        prop_assume!(nn != 0);
        let (spec, model) = product_cp1_model(2).unwrap();
        let opts = EtaOptions { n_const: rat(nn, nd), ..EtaOptions::default() };
        let res = eta_invariant(&spec, &model, &r, &rat(1, 3), &opts).unwrap();
        let rest = res.total.clone()
            - gauss(int(2 * res.spectral_flow), int(0))
            - res.transgression_term.clone().scale(res.n_const.clone());
        prop_assert_eq!(rest, gauss(res.adiabatic_term.clone(), int(0)));
        if r == int(0) {
            prop_assert_eq!(res.total_real(), Some(int(0)));
        }
    }
}

#[test]
fn kunneth_duality_on_shipped_tables() {
    for factors in [2, 4] {
        let (_, model) = product_cp1_model(factors).unwrap();
        for q in 0..=factors {
            for k in -20..=20 {
                assert_eq!(model.table.h(q, k), model.table.h(factors - q, -k), "q={q} k={k}");
            }
        }
    }
}

#[test]
fn table_is_send_and_sync() {
    fn check<T: Send + Sync + ?Sized>() {}
    check::<dyn CohomologyTable>();
    let (_, model) = product_cp1_model(2).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|t| {
            let m = model.clone();
            std::thread::spawn(move || spectral_flow(&m, &rat(t, 4), &int(1), &FlowOptions::default()).unwrap().total)
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), 0);
    }
}

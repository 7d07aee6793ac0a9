//! Assembly of the eta invariant from the adiabatic limit, the transgression
//! integral and the spectral flow, plus the APS index.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{gauss, int, is_integer, GaussianRational, ParamPoly, Rational};
use crate::catalog::ManifoldSpec;
use crate::error::{Error, Result};
use crate::ring::GradedClass;
use crate::series::{a_hat_from_roots, omega_forms, series_eta_hat, Convention};
use crate::spectral::{kernel_dimension, spectral_flow, FlowOptions, SpectralFlowReport, SpectralModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaOptions {
    pub convention: Convention,
    /// The constant `N` multiplying the transgression integral.
    pub n_const: Rational,
    pub flow: FlowOptions,
    /// Series truncation; `None` uses the manifold default.
    pub order: Option<usize>,
}

impl Default for EtaOptions {
    fn default() -> Self {
        Self { convention: Convention::Real, n_const: int(1), flow: FlowOptions::default(), order: None }
    }
}

fn order_for(spec: &ManifoldSpec, order: Option<usize>) -> Result<usize> {
    if !spec.n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("complex dimension {} must be even", spec.n)));
    }
    Ok(order.unwrap_or_else(|| spec.default_order()))
}

fn exp_rc(spec: &ManifoldSpec, r: &Rational) -> Result<GradedClass> {
    spec.c.scale_real(r).exp_nilpotent()
}

/// `Â(X)·η̂_r(c)·e^{rc}`.
pub fn adiabatic_integrand(spec: &ManifoldSpec, r: &Rational, order: Option<usize>) -> Result<GradedClass> {
    let order = order_for(spec, order)?;
    let a_hat = a_hat_from_roots(&spec.ring, &spec.roots, order)?;
    let eta_hat = spec.c.eval_series(&series_eta_hat(r, order))?;
    a_hat.checked_mul(&eta_hat)?.checked_mul(&exp_rc(spec, r)?)
}

/// `½∫_X Â(X)·η̂_r(c)·e^{rc}`.
pub fn adiabatic_limit_eta(spec: &ManifoldSpec, r: &Rational, order: Option<usize>) -> Result<Rational> {
    let top = adiabatic_integrand(spec, r, order)?.integrate_top();
    let value = top
        .as_real_constant()
        .ok_or_else(|| Error::InvalidArgument(format!("adiabatic integral is not a rational number: {top}")))?;
    Ok(value / int(2))
}

/// `∫_X Ω₂·e^{Ω₀}·e^{rc}` as a polynomial in `δ`.
pub fn transgression_integrand(
    spec: &ManifoldSpec,
    r: &Rational,
    convention: Convention,
    order: Option<usize>,
) -> Result<ParamPoly> {
    let order = order_for(spec, order)?;
    let (omega0, omega2) = omega_forms(&spec.roots, &spec.c, convention, order)?;
    let form = omega2.checked_mul(&omega0.exp_nilpotent()?)?.checked_mul(&exp_rc(spec, r)?)?;
    Ok(form.integrate_top())
}

/// `∫₀^ε dδ ∫_X Ω₂·e^{Ω₀}·e^{rc}`, without the constant `N`.
pub fn transgression_raw(
    spec: &ManifoldSpec,
    r: &Rational,
    eps: &Rational,
    convention: Convention,
    order: Option<usize>,
) -> Result<GaussianRational> {
    if *eps < Rational::zero() {
        return Err(Error::InvalidArgument(format!("ε must be nonnegative, got {eps}")));
    }
    let integral = transgression_integrand(spec, r, convention, order)?.integrate_delta(eps);
    integral
        .as_constant()
        .ok_or_else(|| Error::InvalidArgument(format!("transgression integral still depends on α: {integral}")))
}

/// `N·∫₀^ε dδ ∫_X Ω₂·e^{Ω₀}·e^{rc}`.
pub fn transgression_term(
    spec: &ManifoldSpec,
    r: &Rational,
    eps: &Rational,
    n_const: &Rational,
    convention: Convention,
    order: Option<usize>,
) -> Result<GaussianRational> {
    Ok(transgression_raw(spec, r, eps, convention, order)?.scale(n_const.clone()))
}

/// Both sides of `∫₀^ε∫_X 2cΩ₂e^{Ω₀}e^{rc} = ∫_X [e^{Ω₀(ε)} − Â]e^{rc}`.
pub fn transgression_ftc_sides(
    spec: &ManifoldSpec,
    r: &Rational,
    eps: &Rational,
    convention: Convention,
    order: Option<usize>,
) -> Result<(GaussianRational, GaussianRational)> {
    let order = order_for(spec, order)?;
    let (omega0, omega2) = omega_forms(&spec.roots, &spec.c, convention, order)?;
    let e_rc = exp_rc(spec, r)?;
    let e0 = omega0.exp_nilpotent()?;
    let lhs_form = spec.c.scale_real(&int(2)).checked_mul(&omega2)?.checked_mul(&e0)?.checked_mul(&e_rc)?;
    let lhs = lhs_form.integrate_top().integrate_delta(eps);
    let a_hat = a_hat_from_roots(&spec.ring, &spec.roots, order)?;
    let end = e0.substitute(crate::arith::Param::Delta, eps);
    let rhs = end.checked_add(&-&a_hat)?.checked_mul(&e_rc)?.integrate_top();
    let lhs = lhs.as_constant().ok_or_else(|| Error::InvalidArgument("left side not constant".into()))?;
    let rhs = rhs.as_constant().ok_or_else(|| Error::InvalidArgument("right side not constant".into()))?;
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaResult {
    #[serde(with = "crate::arith::serde_rational")]
    pub adiabatic_term: Rational,
    /// The `N`-free transgression integral.
    #[serde(with = "crate::arith::serde_rational::scalar")]
    pub transgression_term: GaussianRational,
    /// In the chosen sign convention, over the decided families.
    pub spectral_flow: i64,
    /// `adiabatic + N·transgression + 2·sf`.
    #[serde(with = "crate::arith::serde_rational::scalar")]
    pub total: GaussianRational,
    /// `adiabatic + N·transgression`, the formula without spectral flow.
    #[serde(with = "crate::arith::serde_rational::scalar")]
    pub two_term_total: GaussianRational,
    #[serde(rename = "N", with = "crate::arith::serde_rational")]
    pub n_const: Rational,
    #[serde(with = "crate::arith::serde_rational")]
    pub r: Rational,
    #[serde(with = "crate::arith::serde_rational")]
    pub eps: Rational,
    pub convention: Convention,
    /// `false` when some spectral families could not be decided.
    pub flow_complete: bool,
    pub flow: SpectralFlowReport,
    /// `dim ker D_{r,ε}`, when decidable.
    pub kernel_dimension: Option<u64>,
}

impl EtaResult {
    pub fn total_real(&self) -> Option<Rational> {
        self.total.im.is_zero().then(|| self.total.re.clone())
    }
}

/// The three-term formula.
///
/// Spectral flow is always computed, never assumed zero; when some families
/// are undecidable `flow_complete` is `false` and `total` only reflects the
/// decided ones.
pub fn eta_invariant(
    spec: &ManifoldSpec,
    model: &SpectralModel,
    r: &Rational,
    eps: &Rational,
    opts: &EtaOptions,
) -> Result<EtaResult> {
    if *eps <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let adiabatic = adiabatic_limit_eta(spec, r, opts.order)?;
    let raw = transgression_raw(spec, r, eps, opts.convention, opts.order)?;
    let flow = spectral_flow(model, r, eps, &opts.flow)?;
    let two_term = gauss(adiabatic.clone(), Rational::zero()) + raw.clone().scale(opts.n_const.clone());
    let total = two_term.clone() + gauss(int(2 * flow.total), Rational::zero());
    let kernel = kernel_dimension(model, r, eps, &opts.flow).ok();
    Ok(EtaResult {
        adiabatic_term: adiabatic,
        transgression_term: raw,
        spectral_flow: flow.total,
        total,
        two_term_total: two_term,
        n_const: opts.n_const.clone(),
        r: r.clone(),
        eps: eps.clone(),
        convention: opts.convention,
        flow_complete: flow.is_exact(),
        flow,
        kernel_dimension: kernel,
    })
}

/// `−½ Σ h^{p,k}` over `p` with `k = −ε(p − n/2)` integral.
pub fn aps_index(model: &SpectralModel, eps: &Rational) -> Result<Rational> {
    if *eps <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let n = model.n;
    let mut sum = 0u64;
    for p in 0..=n {
        let k = -(eps * (int(p as i64) - int(n as i64) / int(2)));
        if !is_integer(&k) {
            continue;
        }
        let k = k.to_integer().try_into().map_err(|_| Error::InvalidArgument(format!("k = {k} out of range")))?;
        sum += model.table.h(p, k).ok_or(Error::MissingCohomology { q: p, k })?;
    }
    Ok(-int(sum as i64) / int(2))
}

/// Values `ε ∈ (lo, hi)` where some `p ≠ n/2` has `ε(p − n/2)` integral;
/// the APS index is constant between consecutive ones.
pub fn aps_resonances(n: usize, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let half = n as i64 / 2;
    for p in 0..=n as i64 {
        let step = (p - half).abs();
        if step == 0 || !n.is_multiple_of(2) {
            continue;
        }
        let step = int(step);
        let mut j = (lo * &step).floor().to_integer();
        loop {
            let eps = Rational::from_integer(j.clone()) / &step;
            if eps >= *hi {
                break;
            }
            if eps > *lo {
                out.push(eps);
            }
            j += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub both_terms_zero: bool,
    /// Top-degree integral of `Â·η̂_r·e^{rc}`.
    pub adiabatic_top: ParamPoly,
    /// Top-degree integral of `Ω₂·e^{Ω₀}·e^{rc}`, a polynomial in `δ`.
    pub transgression_top: ParamPoly,
    pub witness: String,
}

/// Checks that both integrands vanish in top degree identically in `δ`.
pub fn integrand_check(spec: &ManifoldSpec, r: &Rational, order: Option<usize>) -> Result<CorollaryReport> {
    let adiabatic_top = adiabatic_integrand(spec, r, order)?.integrate_top();
    let transgression_top = transgression_integrand(spec, r, Convention::Real, order)?;
    let both = adiabatic_top.is_zero() && transgression_top.is_zero();
    let witness = if both {
        format!("top-degree integrands vanish identically on {} at r = {r}", spec.name)
    } else {
        format!("adiabatic top = {adiabatic_top}; transgression top = {transgression_top}")
    };
    Ok(CorollaryReport { both_terms_zero: both, adiabatic_top, transgression_top, witness })
}

/// [`integrand_check`] at `r = 0`.
pub fn corollary_check(spec: &ManifoldSpec, order: Option<usize>) -> Result<CorollaryReport> {
    integrand_check(spec, &Rational::zero(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::catalog::{general_type_hypersurface_model, product_cp1_model};

    fn g(re: Rational) -> GaussianRational {
        gauss(re, Rational::zero())
    }

    #[test]
    fn adiabatic_golden_values() {
        let (s2, _) = product_cp1_model(2).unwrap();
        let (s4, _) = product_cp1_model(4).unwrap();
        let cases2 = [(int(0), int(0)), (rat(1, 2), rat(-1, 24)), (rat(1, 3), rat(-1, 81)), (int(1), rat(1, 6)), (rat(-3, 4), rat(9, 64))];
        for (r, want) in cases2 {
            assert_eq!(adiabatic_limit_eta(&s2, &r, None).unwrap(), want, "cp1xcp1 r={r}");
        }
        let cases4 = [(int(0), int(0)), (rat(1, 2), rat(-1, 160)), (rat(1, 3), rat(-1, 1215)), (int(1), rat(3, 10)), (rat(-3, 4), rat(243, 5120))];
        for (r, want) in cases4 {
            assert_eq!(adiabatic_limit_eta(&s4, &r, None).unwrap(), want, "cp1x4 r={r}");
        }
    }

    #[test]
    fn transgression_golden_values() {
        let (s2, _) = product_cp1_model(2).unwrap();
        let table2 = [
            (rat(1, 2), [rat(-23, 1200), rat(-1, 12), rat(-5, 12)]),
            (rat(1, 3), [rat(-23, 1800), rat(-1, 18), rat(-5, 18)]),
            (int(1), [rat(-23, 600), rat(-1, 6), rat(-5, 6)]),
            (rat(-3, 4), [rat(23, 800), rat(1, 8), rat(5, 8)]),
        ];
        let eps = [rat(1, 10), rat(1, 3), int(1)];
        for (r, wants) in table2 {
            for (e, want) in eps.iter().zip(wants) {
                assert_eq!(transgression_raw(&s2, &r, e, Convention::Real, None).unwrap(), g(want), "r={r} eps={e}");
            }
        }
        let (s4, _) = product_cp1_model(4).unwrap();
        let table4 = [
            (rat(1, 2), [rat(-607, 120000), rat(29, 360), rat(491, 120)]),
            (rat(1, 3), [rat(787, 1620000), rat(529, 7290), rat(2297, 810)]),
            (int(1), [rat(-4357, 60000), rat(-13, 90), rat(193, 30)]),
            (rat(-3, 4), [rat(4339, 160000), rat(-73, 2880), rat(-1789, 320)]),
        ];
        for (r, wants) in table4 {
            for (e, want) in eps.iter().zip(wants) {
                assert_eq!(transgression_raw(&s4, &r, e, Convention::Real, None).unwrap(), g(want), "r={r} eps={e}");
            }
        }
    }

    #[test]
    fn transgression_integrand_golden() {
        let (s2, _) = product_cp1_model(2).unwrap();
        let d = ParamPoly::delta();
        let want = &d.scale_real(&rat(-1, 2)) - &ParamPoly::real(rat(1, 6));
        assert_eq!(transgression_integrand(&s2, &rat(1, 2), Convention::Real, None).unwrap(), want);
        let (s4, _) = product_cp1_model(4).unwrap();
        let d2 = &d * &d;
        let d3 = &d2 * &d;
        let want = &(&(&d3.scale_real(&int(9)) + &d2.scale_real(&rat(27, 5))) + &d.scale_real(&rat(1, 4))) - &ParamPoly::real(rat(1, 12));
        assert_eq!(transgression_integrand(&s4, &rat(1, 2), Convention::Real, None).unwrap(), want);
    }

    #[test]
    fn ftc_identity_both_conventions() {
        let (s2, _) = product_cp1_model(2).unwrap();
        let (lhs, rhs) = transgression_ftc_sides(&s2, &rat(1, 2), &int(1), Convention::Real, None).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, g(rat(-5, 3)));
        let (lhs, rhs) = transgression_ftc_sides(&s2, &rat(1, 2), &int(1), Convention::PaperI, None).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, gauss(int(1), rat(-2, 3)));
        let raw = transgression_raw(&s2, &rat(1, 2), &int(1), Convention::PaperI, None).unwrap();
        assert_eq!(raw, gauss(rat(1, 4), rat(-1, 6)));
        let (s4, _) = product_cp1_model(4).unwrap();
        let (lhs, rhs) = transgression_ftc_sides(&s4, &int(0), &rat(1, 10), Convention::Real, None).unwrap();
        assert_eq!((lhs.clone(), rhs), (lhs, g(rat(643, 30000))));
    }

    #[test]
    fn zero_interval_and_zero_r() {
        let (s2, _) = product_cp1_model(2).unwrap();
        assert!(transgression_raw(&s2, &rat(1, 2), &int(0), Convention::Real, None).unwrap().is_zero());
        for e in [rat(1, 10), int(1), int(4)] {
            assert!(transgression_raw(&s2, &int(0), &e, Convention::Real, None).unwrap().is_zero());
        }
        assert!(transgression_raw(&s2, &int(0), &int(-1), Convention::Real, None).is_err());
    }

    #[test]
    fn eta_examples() {
        let (s2, m2) = product_cp1_model(2).unwrap();
        let res = eta_invariant(&s2, &m2, &int(0), &int(1), &EtaOptions::default()).unwrap();
        assert_eq!(res.total_real(), Some(int(0)));
        assert!(res.flow_complete);

        let res = eta_invariant(&s2, &m2, &rat(1, 2), &rat(1, 10), &EtaOptions::default()).unwrap();
        assert_eq!(res.adiabatic_term, rat(-1, 24));
        assert_eq!(res.spectral_flow, 0);
        assert_eq!(res.transgression_term, g(rat(-23, 1200)));
        assert_eq!(res.total, g(rat(-1, 24) + rat(-23, 1200)));

        let opts = EtaOptions { n_const: rat(-3, 7), ..EtaOptions::default() };
        let res = eta_invariant(&s2, &m2, &rat(1, 2), &rat(1, 10), &opts).unwrap();
        let lhs = res.total.clone() - g(int(2 * res.spectral_flow)) - res.transgression_term.clone().scale(res.n_const.clone());
        assert_eq!(lhs, g(res.adiabatic_term.clone()));
    }

    #[test]
    fn counterexample_eta_differs() {
        let (spec, model) = general_type_hypersurface_model(4, 8).unwrap();
        let res = eta_invariant(&spec, &model, &int(0), &int(1), &EtaOptions::default()).unwrap();
        assert_ne!(res.spectral_flow, 0);
        assert_ne!(res.total, res.two_term_total);
        assert!(!res.flow_complete);
    }

    #[test]
    fn aps_examples() {
        let (_, m2) = product_cp1_model(2).unwrap();
        assert_eq!(aps_index(&m2, &rat(3, 7)).unwrap(), int(0));
        assert_eq!(aps_index(&m2, &int(1)).unwrap(), int(-1));
        // denominators above n leave only p = n/2
        assert_eq!(aps_index(&m2, &rat(1, 3)).unwrap(), -int(m2.table.h(1, 0).unwrap() as i64) / int(2));
    }

    #[test]
    fn aps_piecewise_constant_between_resonances() {
        let (_, m2) = product_cp1_model(2).unwrap();
        let res = aps_resonances(2, &rat(1, 2), &rat(3, 2));
        assert_eq!(res, vec![int(1)]);
        let below = aps_index(&m2, &rat(9, 10)).unwrap();
        for e in [rat(3, 5), rat(7, 10), rat(99, 100)] {
            assert_eq!(aps_index(&m2, &e).unwrap(), below);
        }
        let above = aps_index(&m2, &rat(11, 10)).unwrap();
        for e in [rat(101, 100), rat(13, 10), rat(7, 5)] {
            assert_eq!(aps_index(&m2, &e).unwrap(), above);
        }
    }

    #[test]
    fn corollary_cases() {
        for f in [2, 4] {
            let (s, _) = product_cp1_model(f).unwrap();
            let rep = corollary_check(&s, None).unwrap();
            assert!(rep.both_terms_zero, "{}", rep.witness);
        }
        let (s2, _) = product_cp1_model(2).unwrap();
        let rep = integrand_check(&s2, &rat(1, 3), None).unwrap();
        assert!(!rep.both_terms_zero);
        assert!(!rep.adiabatic_top.is_zero());
    }
}

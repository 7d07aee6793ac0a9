//! One-variable truncated power series and the characteristic series built
//! from them: `p(z) = ½ log((z/2)/sinh(z/2))`, its derivative, the eta-hat
//! series, `Â` from Chern roots and the transgression pair `(Ω₀, Ω₂)`.

use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, int, is_integer, fract, GaussianRational, Param, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::ring::{GradedClass, RingSpec};

/// `Σ_{j=0}^{order} f_j z^j` with parameter-polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<ParamPoly>,
}

impl FormalSeries {
    /// Order is `coeffs.len() - 1`; an empty vector means the zero series of
    /// order 0.
    pub fn new(mut coeffs: Vec<ParamPoly>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ParamPoly::zero());
        }
        Self { coeffs }
    }

    pub fn from_rationals(coeffs: impl IntoIterator<Item = Rational>) -> Self {
        Self::new(coeffs.into_iter().map(ParamPoly::real).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![ParamPoly::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ParamPoly::one();
        s
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ParamPoly::one();
        }
        s
    }

    /// `exp(z) = Σ z^j/j!`
    pub fn exp(order: usize) -> Self {
        Self::from_rationals((0..=order).map(|j| factorial(j as u32).recip()))
    }

    /// `sinh(z)/z = Σ z^{2j}/(2j+1)!`
    pub fn sinhc(order: usize) -> Self {
        Self::from_rationals((0..=order).map(|j| {
            if j % 2 == 0 {
                factorial(j as u32 + 1).recip()
            } else {
                Rational::zero()
            }
        }))
    }

    /// `cosh(z) = Σ z^{2j}/(2j)!`
    pub fn cosh(order: usize) -> Self {
        Self::from_rationals((0..=order).map(|j| {
            if j % 2 == 0 {
                factorial(j as u32).recip()
            } else {
                Rational::zero()
            }
        }))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> ParamPoly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    /// Real rational coefficient, when the coefficient is a real constant.
    pub fn rational_coeff(&self, j: usize) -> Option<Rational> {
        self.coeff(j).as_real_constant()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new((0..=order).map(|j| self.coeff(j)).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self::new((0..=order).map(|j| &self.coeffs[j] + &rhs.coeffs[j]).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self::new((0..=order).map(|j| &self.coeffs[j] - &rhs.coeffs[j]).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = vec![ParamPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `f(λz)`
    pub fn scale_argument(&self, lambda: &GaussianRational) -> Self {
        let mut w = GaussianRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.scale(&w));
            w = &w * lambda;
        }
        Self::new(out)
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale_real(&int(j as i64)))
                .collect(),
        )
    }

    /// `f(z)/z`, exact when the constant term vanishes; the order drops by one.
    pub fn divide_by_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument("series has a nonzero constant term".into()));
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    /// `f(g(z))` for `g` with zero constant term, by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument("inner series must have zero constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs.iter().take(order + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        Ok(acc)
    }

    /// `1/f`; the constant term must be a nonzero scalar.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NotInvertible(self.coeffs[0].to_string()))?;
        let inv0 = ParamPoly::constant(GaussianRational::one() / c0);
        let order = self.order();
        let mut out = vec![ParamPoly::zero(); order + 1];
        out[0] = inv0.clone();
        for j in 1..=order {
            let mut acc = ParamPoly::zero();
            for i in 1..=j {
                acc = &acc + &(&self.coeffs[i] * &out[j - i]);
            }
            out[j] = -(&acc * &inv0);
        }
        Ok(Self::new(out))
    }

    /// `log f` for `f` with constant term 1, via `log(1 + u) = Σ (-1)^{j+1} u^j / j`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != ParamPoly::one() {
            return Err(Error::InvalidArgument("log needs constant term 1".into()));
        }
        let order = self.order();
        let log1p = Self::from_rationals((0..=order).map(|j| match j {
            0 => Rational::zero(),
            _ if j % 2 == 1 => int(j as i64).recip(),
            _ => -int(j as i64).recip(),
        }));
        let mut u = self.clone();
        u.coeffs[0] = ParamPoly::zero();
        log1p.compose(&u)
    }

    /// `exp f` for `f` with zero constant term.
    pub fn exp_of(&self) -> Result<Self> {
        Self::exp(self.order()).compose(self)
    }

    pub fn substitute(&self, p: Param, value: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.substitute(p, value)).collect())
    }

    /// Coefficients as exact rational strings, when all are real constants.
    pub fn to_rational_strings(&self) -> Option<Vec<String>> {
        self.coeffs.iter().map(|c| c.as_real_constant().map(|r| r.to_string())).collect()
    }
}

/// `p(z) = ½ log((z/2)/sinh(z/2)) = -½ log(sinh(z/2)/(z/2))`.
pub fn series_p(order: usize) -> FormalSeries {
    let half = GaussianRational::new(Rational::new(1.into(), 2.into()), Rational::zero());
    let s = FormalSeries::sinhc(order).scale_argument(&half);
    s.log()
        .expect("sinh(z)/z has constant term 1")
        .scale(&ParamPoly::real(Rational::new((-1).into(), 2.into())))
}

/// `p'(z)`, computed as the formal derivative of `series_p(order + 1)`.
pub fn series_p_prime(order: usize) -> FormalSeries {
    series_p(order + 1).derivative()
}

/// `(z/2)/sinh(z/2)`, the `Â` generating series.
pub fn series_a_hat(order: usize) -> FormalSeries {
    let half = GaussianRational::new(Rational::new(1.into(), 2.into()), Rational::zero());
    FormalSeries::sinhc(order)
        .inverse()
        .expect("constant term 1")
        .scale_argument(&half)
}

/// Regular part of the eta-hat series in `c` with `α` left symbolic:
/// `[exp(αx)·x/sinh(x) - 1]/x` at `x = c/2`.
pub fn series_eta_hat_symbolic(order: usize) -> FormalSeries {
    let n = order + 1;
    let exp_alpha = FormalSeries::new(
        (0..=n)
            .map(|j| {
                ParamPoly::monomial(0, j as u32, GaussianRational::new(factorial(j as u32).recip(), Rational::zero()))
            })
            .collect(),
    );
    let x_over_sinh = FormalSeries::sinhc(n).inverse().expect("constant term 1");
    let numer = exp_alpha.mul(&x_over_sinh).sub(&FormalSeries::one(n));
    halve_argument(numer.divide_by_z().expect("constant term cancels"))
}

/// `(x - tanh x)/(x tanh x) = coth x - 1/x` at `x = c/2`.
pub fn series_eta_hat_integer(order: usize) -> FormalSeries {
    let n = order + 1;
    let x_over_tanh = FormalSeries::cosh(n).mul(&FormalSeries::sinhc(n).inverse().expect("constant term 1"));
    let numer = x_over_tanh.sub(&FormalSeries::one(n));
    halve_argument(numer.divide_by_z().expect("constant term cancels"))
}

/// The eta-hat series for a given `r`, as a series in `c`.
///
/// Non-integer `r` uses `α = 1 - 2{r}`; integer `r` uses the `coth` branch,
/// which is the average of the two one-sided non-integer limits `α = ±1`.
pub fn series_eta_hat(r: &Rational, order: usize) -> FormalSeries {
    if is_integer(r) {
        series_eta_hat_integer(order)
    } else {
        let alpha = int(1) - int(2) * fract(r);
        series_eta_hat_symbolic(order).substitute(Param::Alpha, &alpha)
    }
}

fn halve_argument(s: FormalSeries) -> FormalSeries {
    s.scale_argument(&GaussianRational::new(Rational::new(1.into(), 2.into()), Rational::zero()))
}

/// A (possibly virtual) Chern root: the class `x` entering sums over roots
/// with integer weight, e.g. `T = (n+2)·O(1) - O - O(d)` on a hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernRoot {
    pub class: GradedClass,
    pub weight: i64,
}

impl ChernRoot {
    pub fn new(class: GradedClass) -> Self {
        Self { class, weight: 1 }
    }

    pub fn weighted(class: GradedClass, weight: i64) -> Self {
        Self { class, weight }
    }
}

/// How the `i` factors of the transgression forms are represented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Chern-normalized real forms; all `2π` and `i` factors sit in one
    /// external constant.
    #[default]
    Real,
    /// The literal Gaussian-rational `i` factors of the transgression forms.
    PaperI,
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Convention::Real),
            "paper_i" => Ok(Convention::PaperI),
            _ => Err(Error::Parse(format!("unknown convention {s:?}"))),
        }
    }
}

/// `∏ (x_j/2)/sinh(x_j/2)` over weighted roots. Negative weights multiply by
/// the inverse series.
pub fn a_hat_from_roots(ring: &Arc<RingSpec>, roots: &[ChernRoot], order: usize) -> Result<GradedClass> {
    let forward = series_a_hat(order);
    let backward = forward.inverse()?;
    let mut acc = GradedClass::one(ring);
    for root in roots {
        check_root(ring, &root.class)?;
        let f = if root.weight >= 0 { &forward } else { &backward };
        let factor = root.class.eval_series(f)?;
        for _ in 0..root.weight.unsigned_abs() {
            acc = acc.checked_mul(&factor)?;
        }
    }
    Ok(acc)
}

fn check_root(ring: &Arc<RingSpec>, x: &GradedClass) -> Result<()> {
    if !Arc::ptr_eq(ring, x.ring()) && **ring != **x.ring() {
        return Err(Error::RingMismatch);
    }
    if x.degrees().iter().any(|&d| d != 2) {
        return Err(Error::InvalidArgument("Chern roots must be pure degree-2 classes".into()));
    }
    Ok(())
}

/// The transgression pair.
///
/// Real convention, with `s = 2δc`:
/// `Ω₀ = 2 Σ_j p(x_j + s) + 2 p(s)`, `Ω₂ = 2 Σ_j p'(x_j + s) + 2 p'(s)`.
/// Under [`Convention::PaperI`] the shift is `s = 2iδc` and `Ω₂` carries an
/// extra factor `i`. In both cases `∂_δ Ω₀ = 2c·Ω₂`.
pub fn omega_forms(
    roots: &[ChernRoot],
    c: &GradedClass,
    convention: Convention,
    order: usize,
) -> Result<(GradedClass, GradedClass)> {
    let ring = c.ring();
    if c.degrees().iter().any(|&d| d != 2) {
        return Err(Error::InvalidArgument("c must be a pure degree-2 class".into()));
    }
    let i = GaussianRational::new(Rational::zero(), Rational::one());
    let unit = match convention {
        Convention::Real => GaussianRational::one(),
        Convention::PaperI => i.clone(),
    };
    let shift = c.scale(&ParamPoly::delta().scale(&unit.scale(int(2))));
    let p = series_p(order);
    let dp = series_p_prime(order);

    let mut omega0 = shift.eval_series(&p)?;
    let mut omega2 = shift.eval_series(&dp)?;
    for root in roots {
        check_root(ring, &root.class)?;
        let arg = root.class.checked_add(&shift)?;
        let w = int(root.weight);
        omega0 = &omega0 + &arg.eval_series(&p)?.scale_real(&w);
        omega2 = &omega2 + &arg.eval_series(&dp)?.scale_real(&w);
    }
    let omega0 = omega0.scale_real(&int(2));
    let omega2 = omega2.scale_gauss(&unit.scale(int(2)));
    Ok((omega0, omega2))
}

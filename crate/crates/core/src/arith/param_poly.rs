use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{GaussianRational, Rational};

/// The two formal symbols a coefficient may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    /// Deformation parameter along the adiabatic family.
    Delta,
    /// `1 - 2{r}`, the fractional-part parameter of the eta-hat class.
    Alpha,
}

/// Polynomial in `δ` and `α` with Gaussian-rational coefficients.
///
/// Keys are `(δ-exponent, α-exponent)`. Zero coefficients are never stored, so
/// structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPoly {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn real(c: Rational) -> Self {
        Self::constant(GaussianRational::new(c, Rational::zero()))
    }

    /// `c · δ^i α^j`
    pub fn monomial(delta_exp: u32, alpha_exp: u32, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((delta_exp, alpha_exp), c);
        }
        Self { terms }
    }

    pub fn delta() -> Self {
        Self::monomial(1, 0, GaussianRational::one())
    }

    pub fn alpha() -> Self {
        Self::monomial(0, 1, GaussianRational::one())
    }

    pub fn var(p: Param) -> Self {
        match p {
            Param::Delta => Self::delta(),
            Param::Alpha => Self::alpha(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, delta_exp: u32, alpha_exp: u32) -> GaussianRational {
        self.terms.get(&(delta_exp, alpha_exp)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// The value when the polynomial has no `δ`/`α` dependence.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Real rational value, when the polynomial is a real constant.
    pub fn as_real_constant(&self) -> Option<Rational> {
        self.as_constant().filter(|c| c.im.is_zero()).map(|c| c.re)
    }

    pub fn degree_in(&self, p: Param) -> u32 {
        self.terms
            .keys()
            .map(|&(d, a)| match p {
                Param::Delta => d,
                Param::Alpha => a,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        Self { terms }
    }

    pub fn scale_real(&self, c: &Rational) -> Self {
        self.scale(&GaussianRational::new(c.clone(), Rational::zero()))
    }

    /// Formal derivative in `δ`.
    pub fn d_delta(&self) -> Self {
        let mut out = Self::zero();
        for (&(d, a), c) in &self.terms {
            if d > 0 {
                out.add_term((d - 1, a), c.scale(Rational::from_integer(d.into())));
            }
        }
        out
    }

    /// `∫₀^upper p dδ`; the result has no `δ` dependence.
    pub fn integrate_delta(&self, upper: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(d, a), c) in &self.terms {
            let power = pow(upper, d + 1);
            let w = power / Rational::from_integer((d + 1).into());
            out.add_term((0, a), c.scale(w));
        }
        out
    }

    /// Substitute a rational value for one parameter.
    pub fn substitute(&self, p: Param, value: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(d, a), c) in &self.terms {
            let (key, e) = match p {
                Param::Delta => ((0, a), d),
                Param::Alpha => ((d, 0), a),
            };
            out.add_term(key, c.scale(pow(value, e)));
        }
        out
    }

    pub fn eval(&self, delta: &Rational, alpha: &Rational) -> GaussianRational {
        self.terms.iter().fold(GaussianRational::zero(), |acc, (&(d, a), c)| {
            acc + c.scale(pow(delta, d) * pow(alpha, a))
        })
    }

    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (*k, v.conj())).collect();
        Self { terms }
    }

    fn add_term(&mut self, key: (u32, u32), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }
}

fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

impl From<Rational> for ParamPoly {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<GaussianRational> for ParamPoly {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (&(d1, a1), c1) in &self.terms {
            for (&(d2, a2), c2) in &rhs.terms {
                out.add_term((d1 + d2, a1 + a2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        let terms = self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect();
        ParamPoly { terms }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly { (&self).$m(&rhs) }
        }
        impl $tr<&ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: &ParamPoly) -> ParamPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(d, a), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}", fmt_gauss(c))?;
            for (sym, e) in [("delta", d), ("alpha", a)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{sym}")?,
                    _ => write!(f, "*{sym}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

fn fmt_gauss(c: &GaussianRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) => format!("({}*i)", c.im),
        (false, false) => format!("({} + {}*i)", c.re, c.im),
    }
}

/// Serialized as a map from monomial string (`"1"`, `"delta^2*alpha"`) to the
/// coefficient, real coefficients as `"p/q"` and complex ones as `{re, im}`.
impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Coeff<'a>(&'a GaussianRational);
        impl Serialize for Coeff<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                super::serde_rational::scalar::serialize(self.0, s)
            }
        }
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (&(d, a), c) in &self.terms {
            map.serialize_entry(&monomial_name(d, a), &Coeff(c))?;
        }
        map.end()
    }
}

fn monomial_name(d: u32, a: u32) -> String {
    let mut parts = Vec::new();
    for (sym, e) in [("delta", d), ("alpha", a)] {
        match e {
            0 => {}
            1 => parts.push(sym.to_string()),
            _ => parts.push(format!("{sym}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn r(c: Rational) -> ParamPoly {
        ParamPoly::real(c)
    }

    #[test]
    fn integrate_power_rule() {
        let p = ParamPoly::delta();
        assert_eq!(p.integrate_delta(&int(1)), r(rat(1, 2)));
        let one = ParamPoly::one();
        assert_eq!(one.integrate_delta(&rat(3, 7)), r(rat(3, 7)));
    }

    #[test]
    fn integrate_mixed_in_alpha() {
        // 3δ² + α on [0, 2] gives 8 + 2α
        let p = &(&ParamPoly::delta() * &ParamPoly::delta()).scale_real(&int(3)) + &ParamPoly::alpha();
        let got = p.integrate_delta(&int(2));
        let want = &r(int(8)) + &ParamPoly::alpha().scale_real(&int(2));
        assert_eq!(got, want);
        assert_eq!(got.degree_in(Param::Delta), 0);
    }

    #[test]
    fn integrate_matches_midpoint_quadrature() {
        // Independent check: composite midpoint rule with exact rationals,
        // whose error for a cubic is O(h²) and shrinks as expected.
        let d = ParamPoly::delta();
        let p = &(&(&d * &d) * &d) + &(&d.scale_real(&int(-2)) + &ParamPoly::alpha());
        let upper = rat(3, 2);
        for alpha in [int(0), rat(1, 3), int(-1)] {
            let exact = p.integrate_delta(&upper).eval(&int(0), &alpha).re;
            let steps = 400;
            let h = &upper / int(steps);
            let mut acc = int(0);
            for j in 0..steps {
                let mid = &h * (int(j) + rat(1, 2));
                acc += p.eval(&mid, &alpha).re * &h;
            }
            let err = num_traits::Signed::abs(&(acc - exact));
            assert!(err < rat(1, 10_000), "quadrature disagrees at alpha={alpha}: {err}");
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &ParamPoly::delta() - &ParamPoly::delta();
        assert!(p.is_zero());
        assert_eq!(p, ParamPoly::zero());
        assert!(ParamPoly::real(int(0)).is_zero());
    }

    #[test]
    fn derivative_and_substitution() {
        let d = ParamPoly::delta();
        let a = ParamPoly::alpha();
        let p = &(&d * &d) * &a; // δ²α
        assert_eq!(p.d_delta(), (&d * &a).scale_real(&int(2)));
        assert_eq!(p.substitute(Param::Alpha, &int(3)), (&d * &d).scale_real(&int(3)));
        assert_eq!(p.substitute(Param::Delta, &int(2)), a.scale_real(&int(4)));
    }

    #[test]
    fn json_shape() {
        let p = &ParamPoly::delta().scale_real(&rat(1, 2)) + &ParamPoly::real(int(3));
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!({"1": "3", "delta": "1/2"}));
        let q = ParamPoly::constant(GaussianRational::new(int(0), int(1)));
        let v = serde_json::to_value(&q).unwrap();
        assert_eq!(v, serde_json::json!({"1": {"re": "0", "im": "1"}}));
    }
}

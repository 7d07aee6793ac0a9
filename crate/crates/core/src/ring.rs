//! Truncated graded-commutative rings `ℚ[g₁, …, g_s]/(g_i^{t_i+1})` with all
//! generators in degree 2, standing in for `H*(X; ℚ)` of a catalog base.
//!
//! Coefficients are [`ParamPoly`]s, so classes may depend polynomially on the
//! deformation parameter `δ` and on `α`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{factorial, GaussianRational, Param, ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::series::FormalSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    /// `g^{truncation + 1} = 0`.
    pub truncation: u8,
}

/// Presentation of the cohomology ring together with the integral of the
/// top monomial `∏ g_i^{t_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingSpec {
    generators: Vec<Generator>,
    #[serde(with = "crate::arith::serde_rational")]
    top_integral: Rational,
}

impl RingSpec {
    pub fn new(generators: Vec<Generator>, top_integral: Rational) -> Result<Arc<Self>> {
        if top_integral.is_zero() {
            return Err(Error::InvalidArgument("top integral must be nonzero".into()));
        }
        let mut names = BTreeSet::new();
        for g in &generators {
            if !names.insert(g.name.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate generator {:?}", g.name)));
            }
        }
        Ok(Arc::new(Self { generators, top_integral }))
    }

    /// `ℚ[a_0, …, a_{s-1}]/(a_i²)` with `∫ a_0⋯a_{s-1} = 1`.
    pub fn square_free(count: usize) -> Arc<Self> {
        let generators = (0..count).map(|i| Generator { name: format!("a{i}"), truncation: 1 }).collect();
        Self::new(generators, Rational::from_integer(1.into())).expect("valid presentation")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn top_integral(&self) -> &Rational {
        &self.top_integral
    }

    /// Complex dimension `n` (top cohomological degree is `2n`).
    pub fn complex_dim(&self) -> usize {
        self.generators.iter().map(|g| g.truncation as usize).sum()
    }

    pub fn top_monomial(&self) -> Monomial {
        Monomial(self.generators.iter().map(|g| g.truncation).collect())
    }

    fn admits(&self, m: &Monomial) -> bool {
        m.0.iter().zip(&self.generators).all(|(&e, g)| e <= g.truncation)
    }
}

/// Exponent vector over the ring generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// Cohomological degree: twice the total exponent.
    pub fn degree(&self) -> usize {
        2 * self.0.iter().map(|&e| e as usize).sum::<usize>()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn render(&self, ring: &RingSpec) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(ring.generators())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of a truncated ring with parameter-polynomial coefficients.
#[derive(Clone, Debug)]
pub struct GradedClass {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl GradedClass {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Self { ring: Arc::clone(ring), terms: BTreeMap::new() }
    }

    pub fn scalar(ring: &Arc<RingSpec>, c: ParamPoly) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(Monomial::unit(ring.generators.len()), c);
        out
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::scalar(ring, ParamPoly::one())
    }

    pub fn generator(ring: &Arc<RingSpec>, index: usize) -> Self {
        let mut exps = vec![0; ring.generators.len()];
        exps[index] = 1;
        Self::from_terms(ring, [(Monomial(exps), ParamPoly::one())])
    }

    /// Builds a class from `(monomial, coefficient)` pairs; monomials outside
    /// the truncation are dropped.
    pub fn from_terms(
        ring: &Arc<RingSpec>,
        terms: impl IntoIterator<Item = (Monomial, ParamPoly)>,
    ) -> Self {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.generators.len(), "monomial length mismatch");
            out.add_term(m, c);
        }
        out
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    /// Cohomological degrees carrying a nonzero coefficient.
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    pub fn component(&self, degree: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self { ring: Arc::clone(&self.ring), terms }
    }

    pub fn degree_zero_part(&self) -> ParamPoly {
        self.coeff(&Monomial::unit(self.ring.generators.len()))
    }

    pub fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_real(&self, c: &Rational) -> Self {
        self.map_coeffs(|x| x.scale_real(c))
    }

    pub fn scale_gauss(&self, c: &GaussianRational) -> Self {
        self.map_coeffs(|x| x.scale(c))
    }

    /// Coefficient-wise `∂/∂δ`.
    pub fn d_delta(&self) -> Self {
        self.map_coeffs(ParamPoly::d_delta)
    }

    pub fn substitute(&self, p: Param, value: &Rational) -> Self {
        self.map_coeffs(|c| c.substitute(p, value))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_ring(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product with truncation: monomials exceeding a generator's truncation
    /// exponent vanish.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_ring(rhs)?;
        let mut out = Self::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.product(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∫_X`: coefficient of the top monomial times the top integral.
    pub fn integrate_top(&self) -> ParamPoly {
        self.coeff(&self.ring.top_monomial()).scale_real(&self.ring.top_integral)
    }

    fn ensure_nilpotent(&self) -> Result<()> {
        if self.degree_zero_part().is_zero() {
            Ok(())
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// `Σ x^j / j!`, finite because `x^{n+1} = 0`.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        self.ensure_nilpotent()?;
        let mut sum = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        let mut j = 0u32;
        loop {
            j += 1;
            power = &power * self;
            if power.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &power.scale_real(&factorial(j).recip());
        }
    }

    /// `Σ f_j x^j` for nilpotent `x`.
    ///
    /// Fails with [`Error::InsufficientOrder`] when `x` raised to the power
    /// just past the series order is still nonzero, rather than silently
    /// dropping terms.
    pub fn eval_series(&self, f: &FormalSeries) -> Result<Self> {
        self.ensure_nilpotent()?;
        let mut sum = Self::scalar(&self.ring, f.coeff(0));
        let mut power = Self::one(&self.ring);
        for j in 1..=f.order() {
            power = &power * self;
            if power.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &power.scale(&f.coeff(j));
        }
        let next = &power * self;
        if !next.is_zero() {
            let mut needed = f.order() + 1;
            let mut p = next;
            while !p.is_zero() {
                p = &p * self;
                needed += 1;
            }
            return Err(Error::InsufficientOrder { needed: needed - 1, have: f.order() });
        }
        Ok(sum)
    }

    fn check_ring(&self, rhs: &Self) -> Result<()> {
        if self.same_ring(rhs) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn add_term(&mut self, m: Monomial, c: ParamPoly) {
        if c.is_zero() || !self.ring.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }
}

// Operators panic on ring mismatch; use the `checked_*` methods when the
// operands may come from different rings.
impl Add<&GradedClass> for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Sub<&GradedClass> for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self.checked_add(&-rhs).expect("ring mismatch")
    }
}

impl Mul<&GradedClass> for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        self.map_coeffs(|c| -c)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*{}", m.render(&self.ring)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for GradedClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            map.serialize_entry(&m.render(&self.ring), c)?;
        }
        map.end()
    }
}

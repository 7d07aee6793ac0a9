use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rational::{rational_sqrt, sign_of};
use super::{int, Rational};
use crate::error::{Error, Result};

/// Exact sign of `a + b·√radicand`.
///
/// Decided by comparing signs of `a` and `b`, and `a²` against `b²·radicand`
/// when they disagree.
pub fn sqrt_sign(a: &Rational, b: &Rational, radicand: &Rational) -> Result<i8> {
    if radicand.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "square root of negative radicand {radicand}"
        )));
    }
    let sa = sign_of(a);
    let sb = if radicand.is_zero() { 0 } else { sign_of(b) };
    if sb == 0 || sa == sb {
        return Ok(if sa == 0 { sb } else { sa });
    }
    if sa == 0 {
        return Ok(sb);
    }
    Ok(match (a * a).cmp(&(b * b * radicand)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    })
}

/// A real number `a + b·√d` with rational `a`, `b` and `d ≥ 0`.
///
/// Perfect-square radicands are folded into `a`, so `b == 0` exactly when the
/// value is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: Rational::zero() }
    }

    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::InvalidArgument(format!("negative radicand {d}")));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::rational(a));
        }
        if let Some(s) = rational_sqrt(&d) {
            return Ok(Self::rational(a + b * s));
        }
        let (b, d) = square_free_part(b, &d);
        Ok(Self { a, b, d })
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn parts(&self) -> (&Rational, &Rational, &Rational) {
        (&self.a, &self.b, &self.d)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        let s = sqrt_sign(&(&self.a - x), &self.b, &self.d).expect("radicand is nonnegative");
        s.cmp(&0)
    }

    /// Exact comparison with another surd over the same radicand (or a
    /// rational one).
    pub fn cmp_surd(&self, other: &Surd) -> Option<Ordering> {
        if let Some(x) = other.as_rational() {
            return Some(self.cmp_rational(x));
        }
        if let Some(x) = self.as_rational() {
            return Some(other.cmp_rational(x).reverse());
        }
        if self.d != other.d {
            return None;
        }
        let s = sqrt_sign(&(&self.a - &other.a), &(&self.b - &other.b), &self.d).ok()?;
        Some(s.cmp(&0))
    }

    /// Floating approximation, for display only.
    pub fn approx(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let (op, b) = if self.b.is_negative() { ("-", -&self.b) } else { ("+", self.b.clone()) };
        let root = if b == int(1) { format!("sqrt({})", self.d) } else { format!("{b}*sqrt({})", self.d) };
        if self.a.is_zero() {
            if op == "-" {
                write!(f, "-{root}")
            } else {
                f.write_str(&root)
            }
        } else {
            write!(f, "{} {op} {root}", self.a)
        }
    }
}

/// Rewrites `b·√d` as `b'·√m` with `m` an integer free of small square
/// factors, so equal surds usually share their radicand.
fn square_free_part(b: Rational, d: &Rational) -> (Rational, Rational) {
    let denom = d.denom().clone();
    let mut m = d.numer() * &denom;
    let mut b = b / Rational::from_integer(denom);
    let mut f = BigInt::from(2u32);
    let limit = BigInt::from(10_000u32);
    while &f * &f <= m && f < limit {
        let sq = &f * &f;
        while (&m % &sq).is_zero() {
            m /= &sq;
            b *= Rational::from_integer(f.clone());
        }
        f += 1u32;
    }
    (b, Rational::from_integer(m))
}

/// A real root of a quadratic, with a flag for double roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRoot {
    pub value: Surd,
    pub double: bool,
}

/// Real roots of `c2·x² + c1·x + c0`, ascending. `None` when the polynomial is
/// identically zero.
pub fn quadratic_roots(c2: &Rational, c1: &Rational, c0: &Rational) -> Option<Vec<QuadRoot>> {
    if c2.is_zero() {
        if c1.is_zero() {
            return if c0.is_zero() { None } else { Some(Vec::new()) };
        }
        let root = Surd::rational(-(c0 / c1));
        return Some(vec![QuadRoot { value: root, double: false }]);
    }
    let disc = c1 * c1 - int(4) * c2 * c0;
    let vertex = -(c1 / (int(2) * c2));
    if disc.is_negative() {
        return Some(Vec::new());
    }
    if disc.is_zero() {
        return Some(vec![QuadRoot { value: Surd::rational(vertex), double: true }]);
    }
    let half = (int(2) * c2).recip();
    let lo_b = if c2.is_positive() { -&half } else { half.clone() };
    let lo = Surd::new(vertex.clone(), lo_b.clone(), disc.clone()).expect("disc > 0");
    let hi = Surd::new(vertex, -lo_b, disc).expect("disc > 0");
    Some(vec![QuadRoot { value: lo, double: false }, QuadRoot { value: hi, double: false }])
}

/// Classification of a quadratic on a closed interval `[0, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadVerdict {
    /// Strictly positive on the whole interval.
    Nonnegative,
    /// Nonnegative, vanishing exactly at the listed points (always rational:
    /// an endpoint or a double root).
    TouchesZero(Vec<Rational>),
    /// The zero polynomial.
    VanishesIdentically,
    /// Negative at `witness`, which lies in `[0, hi]`.
    NegativeSomewhere { witness: Rational },
}

impl QuadVerdict {
    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, QuadVerdict::NegativeSomewhere { .. })
    }
}

fn eval_quad(c2: &Rational, c1: &Rational, c0: &Rational, x: &Rational) -> Rational {
    (c2 * x + c1) * x + c0
}

/// Exact classification of `Q(x) = c2·x² + c1·x + c0` on `[0, hi]`.
///
/// The minimum over the interval sits at an endpoint or at the (rational)
/// vertex, so the verdict only needs rational evaluations. Negative verdicts
/// carry a rational witness: the midpoint of the first negative stretch when
/// its ends are rational, otherwise an endpoint or the vertex.
pub fn quad_nonneg_on_interval(
    c2: &Rational,
    c1: &Rational,
    c0: &Rational,
    hi: &Rational,
) -> Result<QuadVerdict> {
    if !hi.is_positive() {
        return Err(Error::InvalidArgument(format!("interval end must be positive, got {hi}")));
    }
    if c2.is_zero() && c1.is_zero() && c0.is_zero() {
        return Ok(QuadVerdict::VanishesIdentically);
    }
    let zero = Rational::zero();
    let q = |x: &Rational| eval_quad(c2, c1, c0, x);
    let mut candidates = vec![zero.clone(), hi.clone()];
    let vertex = (!c2.is_zero()).then(|| -(c1 / (int(2) * c2)));
    if let Some(v) = vertex.as_ref().filter(|v| c2.is_positive() && !v.is_negative() && *v <= hi) {
        candidates.push(v.clone());
    }
    let min = candidates.iter().map(&q).min().expect("nonempty");
    if min.is_positive() {
        return Ok(QuadVerdict::Nonnegative);
    }
    if min.is_zero() {
        let mut zeros: Vec<Rational> = candidates.into_iter().filter(|x| q(x).is_zero()).collect();
        zeros.sort();
        zeros.dedup();
        return Ok(QuadVerdict::TouchesZero(zeros));
    }
    let witness = negative_witness(c2, c1, c0, hi, vertex.as_ref());
    debug_assert!(q(&witness).is_negative() && !witness.is_negative() && &witness <= hi);
    Ok(QuadVerdict::NegativeSomewhere { witness })
}

fn negative_witness(
    c2: &Rational,
    c1: &Rational,
    c0: &Rational,
    hi: &Rational,
    vertex: Option<&Rational>,
) -> Rational {
    let zero = Rational::zero();
    let q = |x: &Rational| eval_quad(c2, c1, c0, x);
    let midpoint = |lo: &Rational, up: &Rational| (lo + up) / int(2);
    // `max(s, 0)` and `min(s, hi)`, when rational
    let clamp_lo = |s: &Surd| -> Option<Rational> {
        if s.cmp_rational(&zero) != Ordering::Greater {
            return Some(zero.clone());
        }
        s.as_rational().cloned()
    };
    let clamp_hi = |s: &Surd| -> Option<Rational> {
        if s.cmp_rational(hi) != Ordering::Less {
            return Some(hi.clone());
        }
        s.as_rational().cloned()
    };
    let roots: Vec<Surd> = quadratic_roots(c2, c1, c0)
        .unwrap_or_default()
        .into_iter()
        .map(|r| r.value)
        .collect();

    if c2.is_positive() {
        // negative exactly between the two roots
        let v = vertex.expect("quadratic has a vertex");
        if let (Some(lo), Some(up)) = (clamp_lo(&roots[0]), clamp_hi(&roots[1])) {
            return midpoint(&lo, &up);
        }
        return if v.is_negative() {
            zero
        } else if v > hi {
            hi.clone()
        } else {
            v.clone()
        };
    }
    if c2.is_zero() {
        if c1.is_zero() {
            return midpoint(&zero, hi);
        }
        let rho = roots[0].as_rational().expect("linear root is rational").clone();
        return if c1.is_positive() {
            midpoint(&zero, &rho.min(hi.clone()))
        } else {
            midpoint(&rho.max(zero.clone()), hi)
        };
    }
    // concave: negative outside the roots
    if q(&zero).is_negative() {
        let first_positive = roots.iter().find(|r| r.cmp_rational(&zero) == Ordering::Greater);
        return match first_positive {
            None => midpoint(&zero, hi),
            Some(r) => clamp_hi(r).map(|up| midpoint(&zero, &up)).unwrap_or(zero),
        };
    }
    let last_below = roots.iter().rev().find(|r| r.cmp_rational(hi) == Ordering::Less);
    match last_below {
        None => midpoint(&zero, hi),
        Some(r) => clamp_lo(r).map(|lo| midpoint(&lo, hi)).unwrap_or_else(|| hi.clone()),
    }
}

/// Exact sign of a surd.
pub fn surd_sign(s: &Surd) -> i8 {
    match s.cmp_rational(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn sqrt_sign_examples() {
        assert_eq!(sqrt_sign(&int(-1), &int(1), &int(2)).unwrap(), 1);
        assert_eq!(sqrt_sign(&int(0), &int(0), &int(5)).unwrap(), 0);
        assert_eq!(sqrt_sign(&int(-3), &int(2), &rat(9, 4)).unwrap(), 0);
        assert_eq!(sqrt_sign(&int(-2), &int(1), &int(3)).unwrap(), -1);
        assert_eq!(sqrt_sign(&int(2), &int(-1), &int(3)).unwrap(), 1);
        assert_eq!(sqrt_sign(&int(0), &int(-1), &int(3)).unwrap(), -1);
        assert_eq!(sqrt_sign(&int(4), &int(-7), &int(0)).unwrap(), 1);
        assert!(sqrt_sign(&int(1), &int(1), &int(-1)).is_err());
    }

    #[test]
    fn quad_examples() {
        assert_eq!(
            quad_nonneg_on_interval(&int(1), &int(-3), &int(2), &int(1)).unwrap(),
            QuadVerdict::TouchesZero(vec![int(1)])
        );
        assert_eq!(
            quad_nonneg_on_interval(&int(0), &int(0), &int(4), &int(10)).unwrap(),
            QuadVerdict::Nonnegative
        );
        assert_eq!(
            quad_nonneg_on_interval(&int(1), &int(-3), &int(2), &rat(3, 2)).unwrap(),
            QuadVerdict::NegativeSomewhere { witness: rat(5, 4) }
        );
        assert_eq!(
            quad_nonneg_on_interval(&int(0), &int(0), &int(0), &int(1)).unwrap(),
            QuadVerdict::VanishesIdentically
        );
        assert!(quad_nonneg_on_interval(&int(1), &int(0), &int(0), &int(0)).is_err());
    }

    #[test]
    fn double_root_inside() {
        // (x - 1/2)² on [0, 1]
        let v = quad_nonneg_on_interval(&int(1), &int(-1), &rat(1, 4), &int(1)).unwrap();
        assert_eq!(v, QuadVerdict::TouchesZero(vec![rat(1, 2)]));
    }

    #[test]
    fn irrational_roots_use_vertex_or_endpoint() {
        // x² - 2 on [0, 3]: negative on [0, √2)
        let v = quad_nonneg_on_interval(&int(1), &int(0), &int(-2), &int(3)).unwrap();
        assert_eq!(v, QuadVerdict::NegativeSomewhere { witness: int(0) });
        // x² - 4x + 2 on [0, 3]: roots 2 ± √2, vertex 2
        let v = quad_nonneg_on_interval(&int(1), &int(-4), &int(2), &int(3)).unwrap();
        assert_eq!(v, QuadVerdict::NegativeSomewhere { witness: int(2) });
    }

    #[test]
    fn roots_are_sorted_and_exact() {
        let roots = quadratic_roots(&int(-1), &int(0), &int(2)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].value.cmp_surd(&roots[1].value), Some(Ordering::Less));
        assert_eq!(roots[0].value.to_string(), "-sqrt(2)");
        assert_eq!(roots[1].value.to_string(), "sqrt(2)");
        let roots = quadratic_roots(&int(1), &int(-3), &int(2)).unwrap();
        assert_eq!(roots[0].value.as_rational(), Some(&int(1)));
        assert_eq!(roots[1].value.as_rational(), Some(&int(2)));
        assert!(quadratic_roots(&int(0), &int(0), &int(0)).is_none());
    }

    #[test]
    fn surd_display() {
        let s = Surd::new(rat(1, 2), rat(-1, 2), int(5)).unwrap();
        assert_eq!(s.to_string(), "1/2 - 1/2*sqrt(5)");
        assert_eq!(Surd::new(int(1), int(1), int(4)).unwrap().to_string(), "3");
        assert!((s.approx() - (0.5 - 0.5 * 5f64.sqrt())).abs() < 1e-12);
    }
}

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::flow::{FlowOptions, SpectralMode};
use super::model::SpectralModel;
use super::{nakano_lower_bound, type2_multiplicity};
use crate::arith::{ceil_i64, floor_i64, int, quad_nonneg_on_interval, quadratic_roots, sign_of, QuadVerdict, Rational, Surd};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Type1,
    Type2Plus,
    Type2Minus,
}

impl FamilyKind {
    /// The Type-2 branch that can change sign on `δ > 0`; the other one is
    /// `±(δ + √A)/2` and never does.
    pub fn crossing_branch(q: usize) -> Self {
        if q.is_multiple_of(2) {
            FamilyKind::Type2Plus
        } else {
            FamilyKind::Type2Minus
        }
    }
}

/// What is known about `μ²` for a Type-2 family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuSq {
    Exact(Rational),
    /// `μ² ≥ bound`, and `μ² > bound` when `strict`.
    AtLeast { bound: Rational, strict: bool },
    Unknown,
}

impl MuSq {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            MuSq::Exact(v) => Some(v),
            _ => None,
        }
    }
}

/// One eigenvalue family of the decomposed operator.
///
/// `multiplicity` is `h^{q,k}` for Type 1 and `d_μ^{q,k}` for an exact Type-2
/// value; it is `None` when unknown (partial tables, bounded spectra).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueFamily {
    pub kind: FamilyKind,
    pub q: usize,
    pub k: i64,
    pub n: usize,
    pub mu_sq: Option<MuSq>,
    pub multiplicity: Option<u64>,
}

fn parity_sign(q: usize) -> Rational {
    if q.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

impl EigenvalueFamily {
    pub fn type1(q: usize, k: i64, n: usize, multiplicity: Option<u64>) -> Self {
        Self { kind: FamilyKind::Type1, q, k, n, mu_sq: None, multiplicity }
    }

    pub fn type2(q: usize, k: i64, n: usize, mu_sq: MuSq, multiplicity: Option<u64>) -> Self {
        Self { kind: FamilyKind::crossing_branch(q), q, k, n, mu_sq: Some(mu_sq), multiplicity }
    }

    /// Coefficients `(c2, c1, c0)` of `Q(δ) = A(δ) − δ²` for a given `μ²`.
    pub fn quad_coeffs(&self, r: &Rational, mu_sq: &Rational) -> (Rational, Rational, Rational) {
        let t = int(2 * self.q as i64 + 1 - self.n as i64);
        let u = int(2) * (int(self.k) - r);
        let c2 = &t * &t - int(1);
        let c1 = int(-2) * &t * &u + int(4) * mu_sq;
        let c0 = &u * &u;
        (c2, c1, c0)
    }

    /// Radicand `A(δ)` of the Type-2 eigenvalue.
    pub fn radicand(&self, r: &Rational, mu_sq: &Rational, delta: &Rational) -> Rational {
        let (c2, c1, c0) = self.quad_coeffs(r, mu_sq);
        (c2 + int(1)) * delta * delta + c1 * delta + c0
    }

    /// Exact eigenvalue at `δ`.
    pub fn eigenvalue(&self, r: &Rational, delta: &Rational) -> Result<Surd> {
        let s = parity_sign(self.q);
        match self.kind {
            FamilyKind::Type1 => {
                let v = int(self.q as i64) - int(self.n as i64) / int(2);
                Ok(Surd::rational(s * (int(self.k) - delta * v - r)))
            }
            FamilyKind::Type2Plus | FamilyKind::Type2Minus => {
                let mu_sq = self
                    .mu_sq
                    .as_ref()
                    .and_then(MuSq::value)
                    .ok_or_else(|| Error::InvalidArgument("Type-2 eigenvalue needs an exact μ²".into()))?;
                let a = -s * delta / int(2);
                let b = if self.kind == FamilyKind::Type2Plus { int(1) } else { int(-1) } / int(2);
                Surd::new(a, b, self.radicand(r, mu_sq, delta))
            }
        }
    }

    /// Human-readable eigenvalue as a function of `δ` and `r`.
    pub fn formula(&self) -> String {
        let sign = if self.q.is_multiple_of(2) { "" } else { "-" };
        match self.kind {
            FamilyKind::Type1 => {
                let v = int(self.q as i64) - int(self.n as i64) / int(2);
                format!("{sign}({} - ({v})*delta - r)", self.k)
            }
            FamilyKind::Type2Plus | FamilyKind::Type2Minus => {
                let pm = if self.kind == FamilyKind::Type2Plus { "+" } else { "-" };
                let lead = if self.q.is_multiple_of(2) { "-delta" } else { "delta" };
                let t = 2 * self.q as i64 + 1 - self.n as i64;
                format!(
                    "({lead} {pm} sqrt(({t}*delta - 2*({} - r))^2 + 4*muSq*delta))/2",
                    self.k
                )
            }
        }
    }

    /// Exact behaviour of the family on `(0, ε]`.
    pub fn analyze(&self, r: &Rational, eps: &Rational) -> Result<FamilyAnalysis> {
        if !eps.is_positive() {
            return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
        }
        match (&self.kind, &self.mu_sq) {
            (FamilyKind::Type1, _) => Ok(self.analyze_type1(r, eps)),
            (_, Some(MuSq::Exact(mu_sq))) => Ok(self.analyze_exact(r, eps, mu_sq)),
            (_, Some(MuSq::AtLeast { bound, strict })) => self.analyze_bounded(r, eps, bound, *strict),
            (_, _) => Ok(FamilyAnalysis {
                end_zero: None,
                indeterminate: Some("no Ricci bound or tabulated spectrum for this (q, k)".into()),
                ..FamilyAnalysis::default()
            }),
        }
    }

    fn analyze_type1(&self, r: &Rational, eps: &Rational) -> FamilyAnalysis {
        let s = sign_of(&parity_sign(self.q));
        let u = int(self.k) - r;
        let v = int(self.q as i64) - int(self.n as i64) / int(2);
        let mut out = FamilyAnalysis { start_zero: u.is_zero(), ..FamilyAnalysis::default() };
        if v.is_zero() {
            out.degenerate = u.is_zero();
            out.end_zero = Some(u.is_zero());
            out.sign_inside = s * sign_of(&u);
            out.sign_before_end = out.sign_inside;
            return out;
        }
        let sign0 = if u.is_zero() { -s * sign_of(&v) } else { s * sign_of(&u) };
        let sign_end = s * sign_of(&(&u - &v * eps));
        out.sign_inside = sign0;
        out.end_zero = Some(sign_end == 0);
        if sign_end != 0 && sign_end != sign0 {
            out.crossings.push(Crossing { delta_star: Surd::rational(&u / &v), direction: sign0 });
            out.sign_before_end = sign_end;
        } else {
            out.sign_before_end = sign0;
        }
        out
    }

    fn analyze_exact(&self, r: &Rational, eps: &Rational, mu_sq: &Rational) -> FamilyAnalysis {
        let sigma: i8 = if self.kind == FamilyKind::Type2Plus { 1 } else { -1 };
        let (c2, c1, c0) = self.quad_coeffs(r, mu_sq);
        let mut out = FamilyAnalysis {
            start_zero: c0.is_zero(),
            sign_inside: sigma,
            end_zero: Some(false),
            ..FamilyAnalysis::default()
        };
        // Q(0⁺) > 0: either c0 > 0, or c0 = 0 and c1 = 4μ² > 0
        let mut q_sign: i8 = 1;
        for root in quadratic_roots(&c2, &c1, &c0).unwrap_or_default() {
            if root.value.cmp_rational(&Rational::zero()) != Ordering::Greater {
                continue;
            }
            match root.value.cmp_rational(eps) {
                Ordering::Greater => break,
                Ordering::Equal => {
                    out.end_zero = Some(true);
                    break;
                }
                Ordering::Less if root.double => out.touches.push(root.value),
                Ordering::Less => {
                    out.crossings.push(Crossing { delta_star: root.value, direction: sigma * q_sign });
                    q_sign = -q_sign;
                }
            }
        }
        out.sign_before_end = sigma * q_sign;
        out
    }

    fn analyze_bounded(&self, r: &Rational, eps: &Rational, bound: &Rational, strict: bool) -> Result<FamilyAnalysis> {
        let sigma: i8 = if self.kind == FamilyKind::Type2Plus { 1 } else { -1 };
        let (c2, c1, c0) = self.quad_coeffs(r, bound);
        let mut out = FamilyAnalysis {
            start_zero: c0.is_zero(),
            sign_inside: sigma,
            sign_before_end: sigma,
            ..FamilyAnalysis::default()
        };
        // Q_μ = Q_bound + 4(μ² − bound)δ ≥ Q_bound on δ ≥ 0
        match quad_nonneg_on_interval(&c2, &c1, &c0, eps)? {
            QuadVerdict::Nonnegative => out.end_zero = Some(false),
            QuadVerdict::TouchesZero(zs) => {
                out.end_zero = if strict || !zs.contains(eps) { Some(false) } else { None };
            }
            QuadVerdict::VanishesIdentically => out.end_zero = if strict { Some(false) } else { None },
            QuadVerdict::NegativeSomewhere { witness } => {
                out.end_zero = None;
                out.indeterminate = Some(format!(
                    "Nakano bound muSq >= {bound} does not certify (q={}, k={}): bound quadratic negative at delta = {witness}",
                    self.q, self.k
                ));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for EigenvalueFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(q={}, k={})", self.kind, self.q, self.k)
    }
}

/// A sign change at `delta_star`, with `direction = +1` for positive to
/// negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub delta_star: Surd,
    pub direction: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyAnalysis {
    /// Interior sign changes, ascending.
    pub crossings: Vec<Crossing>,
    /// Interior zeros without a sign change.
    pub touches: Vec<Surd>,
    /// `λ(0) = 0`.
    pub start_zero: bool,
    /// `λ(ε) = 0`; `None` when undecidable from the data.
    pub end_zero: Option<bool>,
    /// Identically zero in `δ`.
    pub degenerate: bool,
    /// Sign just after `δ = 0`.
    pub sign_inside: i8,
    /// Sign just before `δ = ε`.
    pub sign_before_end: i8,
    pub indeterminate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified,
    Crossing(Vec<Surd>),
    Indeterminate(String),
}

/// Decides whether the family changes sign on `(0, ε]`.
pub fn certify_no_crossing(family: &EigenvalueFamily, r: &Rational, eps: &Rational) -> Result<Certification> {
    let a = family.analyze(r, eps)?;
    Ok(if let Some(reason) = a.indeterminate {
        Certification::Indeterminate(reason)
    } else if a.crossings.is_empty() {
        Certification::Certified
    } else {
        Certification::Crossing(a.crossings.into_iter().map(|c| c.delta_star).collect())
    })
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Search windows in `k` and `μ²`, already scaled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Windows {
    #[serde(serialize_with = "ser_display")]
    pub scale: Rational,
    pub type1_k: (i64, i64),
    pub type2_k: (i64, i64),
    #[serde(rename = "muSqMax", serialize_with = "ser_display")]
    pub mu_sq_max: Rational,
}

impl Windows {
    /// `|k − r| ≤ s·ε·n/2`, `|2k − 2r| ≤ s·ε(n + 2)`, `μ² ≤ s·ε/4`.
    pub fn new(n: usize, r: &Rational, eps: &Rational, scale: &Rational) -> Self {
        let se = scale * eps;
        let w1 = &se * int(n as i64) / int(2);
        let w2 = &se * int(n as i64 + 2) / int(2);
        Self {
            scale: scale.clone(),
            type1_k: (ceil_i64(&(r - &w1)), floor_i64(&(r + &w1))),
            type2_k: (ceil_i64(&(r - &w2)), floor_i64(&(r + &w2))),
            mu_sq_max: se / int(4),
        }
    }
}

/// Entry the model cannot decide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Indeterminate {
    pub kind: FamilyKind,
    pub q: usize,
    pub k: i64,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub families: Vec<EigenvalueFamily>,
    pub windows: Windows,
}

/// Every family that could change sign on `(0, ε]`, in `(kind, q, k)` order.
///
/// Families whose multiplicity is unknown are kept with `multiplicity: None`;
/// callers decide whether that matters.
pub fn enumerate_families(
    model: &SpectralModel,
    r: &Rational,
    eps: &Rational,
    opts: &FlowOptions,
) -> Result<Enumeration> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    if !opts.window_scale.is_positive() || opts.window_scale < int(1) {
        return Err(Error::InvalidArgument(format!("window scale must be >= 1, got {}", opts.window_scale)));
    }
    let n = model.n;
    let windows = Windows::new(n, r, eps, &opts.window_scale);
    if let Some((lo, hi)) = model.table.k_window() {
        let (a, b) = windows.type1_k;
        if a <= b && (a < lo || b > hi) {
            return Err(Error::WindowInsufficient(format!(
                "need k in [{a}, {b}] for all q in 0..={n}, table covers [{lo}, {hi}]"
            )));
        }
    }
    let mut families = Vec::new();
    for q in 0..=n {
        for k in windows.type1_k.0..=windows.type1_k.1 {
            match model.table.h(q, k) {
                Some(0) => {}
                Some(h) => families.push(EigenvalueFamily::type1(q, k, n, Some(h))),
                None if model.table.is_partial() => families.push(EigenvalueFamily::type1(q, k, n, None)),
                None => return Err(Error::MissingCohomology { q, k }),
            }
        }
    }
    for q in 0..=n {
        for k in windows.type2_k.0..=windows.type2_k.1 {
            type2_families(model, q, k, &windows.mu_sq_max, opts.mode, &mut families)?;
        }
    }
    Ok(Enumeration { families, windows })
}

fn type2_families(
    model: &SpectralModel,
    q: usize,
    k: i64,
    mu_sq_max: &Rational,
    mode: SpectralMode,
    out: &mut Vec<EigenvalueFamily>,
) -> Result<()> {
    let n = model.n;
    let nakano = model.kappa.as_ref().map(|kappa| int(2) * nakano_lower_bound(q, k, kappa, n));
    let mut cutoff = None;
    if mode == SpectralMode::Explicit {
        cutoff = model.spectrum.cutoff_mu_sq().cloned();
        let mut values: Vec<Rational> = (0..=q)
            .flat_map(|j| model.spectrum.entries_at(j, k).iter().map(|(v, _)| int(2) * v))
            .filter(|mu_sq| mu_sq <= mu_sq_max)
            .collect();
        values.sort();
        values.dedup();
        for mu_sq in values {
            let half = &mu_sq / int(2);
            let e: Vec<u64> = (0..=q)
                .map(|j| {
                    model.spectrum.entries_at(j, k).iter().find(|(v, _)| *v == half).map_or(0, |(_, m)| *m)
                })
                .collect();
            let d = type2_multiplicity(&e);
            if d < 0 {
                return Err(Error::NegativeMultiplicity { q, k, half_mu_sq: half.to_string(), mult: d });
            }
            if d > 0 {
                out.push(EigenvalueFamily::type2(q, k, n, MuSq::Exact(mu_sq), Some(d as u64)));
            }
        }
    }
    // untabulated remainder
    let bound = match (nakano, cutoff) {
        (None, None) => {
            out.push(EigenvalueFamily::type2(q, k, n, MuSq::Unknown, None));
            return Ok(());
        }
        (Some(b), None) => MuSq::AtLeast { strict: b.is_zero(), bound: b },
        (None, Some(c)) => MuSq::AtLeast { bound: c, strict: true },
        (Some(b), Some(c)) if c >= b => MuSq::AtLeast { bound: c, strict: true },
        (Some(b), Some(_)) => MuSq::AtLeast { strict: b.is_zero(), bound: b },
    };
    if let MuSq::AtLeast { bound, strict } = &bound {
        if bound > mu_sq_max || (*strict && bound == mu_sq_max) {
            return Ok(());
        }
    }
    out.push(EigenvalueFamily::type2(q, k, n, bound, None));
    Ok(())
}

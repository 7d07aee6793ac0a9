use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use super::family::{enumerate_families, EigenvalueFamily, FamilyKind, Indeterminate, Windows};
use super::model::SpectralModel;
use crate::arith::{int, Rational, Surd};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralMode {
    /// Type-2 families are certified from the Nakano bound alone.
    #[default]
    #[serde(rename = "nakano_certified", alias = "nakano")]
    Nakano,
    /// Tabulated Laplacian eigenvalues are used exactly; the rest is bounded.
    #[serde(rename = "explicit_spectrum", alias = "explicit")]
    Explicit,
}

impl FromStr for SpectralMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nakano" | "nakano_certified" => Ok(SpectralMode::Nakano),
            "explicit" | "explicit_spectrum" => Ok(SpectralMode::Explicit),
            _ => Err(Error::Parse(format!("unknown spectral mode {s:?}"))),
        }
    }
}

/// Which sign change counts `+1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// Positive to negative.
    #[default]
    Paper,
    /// Negative to positive.
    Standard,
}

impl SignConvention {
    /// Converts a positive-to-negative-is-`+1` direction.
    pub fn apply(self, direction: i8) -> i8 {
        match self {
            SignConvention::Paper => direction,
            SignConvention::Standard => -direction,
        }
    }
}

impl FromStr for SignConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(SignConvention::Paper),
            "standard" => Ok(SignConvention::Standard),
            _ => Err(Error::Parse(format!("unknown sign convention {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowOptions {
    pub mode: SpectralMode,
    pub sign: SignConvention,
    /// Factor `≥ 1` applied to the `k` and `μ²` search windows.
    pub window_scale: Rational,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { mode: SpectralMode::Nakano, sign: SignConvention::Paper, window_scale: int(1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportMode {
    NakanoCertified,
    ExplicitSpectrum,
    /// Some cohomology is unknown; totals cover the known families only.
    PartialTable,
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingRecord {
    pub kind: FamilyKind,
    pub k: i64,
    pub q: usize,
    #[serde(rename = "muSq", with = "crate::arith::serde_rational::option")]
    pub mu_sq: Option<Rational>,
    #[serde(serialize_with = "ser_display")]
    pub delta_star: Surd,
    pub multiplicity: u64,
    /// In the report's sign convention.
    pub direction: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Start,
    End,
    /// Interior zero without a sign change.
    Interior,
    /// The family vanishes for every `δ`.
    Throughout,
}

/// Zeros that are not counted as flow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfCrossing {
    pub kind: FamilyKind,
    pub k: i64,
    pub q: usize,
    #[serde(rename = "muSq", with = "crate::arith::serde_rational::option")]
    pub mu_sq: Option<Rational>,
    pub at: Endpoint,
    #[serde(serialize_with = "ser_display")]
    pub delta: Surd,
    /// Sign on the open side of the zero, independent of the sign convention.
    pub sign_inside: i8,
    pub multiplicity: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralFlowReport {
    pub mode: ReportMode,
    pub sign_convention: SignConvention,
    /// `Σ direction·multiplicity` over `crossings`.
    pub total: i64,
    pub total_paper: i64,
    pub total_standard: i64,
    pub crossings: Vec<CrossingRecord>,
    pub half_crossings: Vec<HalfCrossing>,
    pub indeterminate: Vec<Indeterminate>,
    pub windows: Windows,
    #[serde(with = "crate::arith::serde_rational")]
    pub r: Rational,
    #[serde(with = "crate::arith::serde_rational")]
    pub eps: Rational,
}

impl SpectralFlowReport {
    pub fn is_exact(&self) -> bool {
        self.indeterminate.is_empty()
    }
}

fn indeterminate(f: &EigenvalueFamily, reason: String) -> Indeterminate {
    Indeterminate { kind: f.kind, q: f.q, k: f.k, reason }
}

fn unknown_multiplicity(f: &EigenvalueFamily) -> Indeterminate {
    indeterminate(f, format!("h^{{{},{}}} unknown", f.q, f.k))
}

/// Spectral flow of `D_{r,δ}` over `0 < δ ≤ ε`.
///
/// Zeros at `δ = 0` or `δ = ε` are reported as half crossings and never
/// counted. Undecidable families land in `indeterminate`; the totals then only
/// cover the decided ones.
pub fn spectral_flow(
    model: &SpectralModel,
    r: &Rational,
    eps: &Rational,
    opts: &FlowOptions,
) -> Result<SpectralFlowReport> {
    let en = enumerate_families(model, r, eps, opts)?;
    let mut crossings = Vec::new();
    let mut half = Vec::new();
    let mut unknown = Vec::new();
    let mut total_paper = 0i64;
    for f in &en.families {
        let a = f.analyze(r, eps)?;
        if let Some(reason) = a.indeterminate {
            unknown.push(indeterminate(f, reason));
            continue;
        }
        let mu_sq = f.mu_sq.as_ref().and_then(|m| m.value()).cloned();
        let zero = |at: Endpoint, delta: Surd, sign_inside: i8| HalfCrossing {
            kind: f.kind,
            k: f.k,
            q: f.q,
            mu_sq: mu_sq.clone(),
            at,
            delta,
            sign_inside,
            multiplicity: f.multiplicity,
        };
        if a.degenerate {
            half.push(zero(Endpoint::Throughout, Surd::rational(int(0)), 0));
            continue;
        }
        if a.start_zero {
            half.push(zero(Endpoint::Start, Surd::rational(int(0)), a.sign_inside));
        }
        for t in &a.touches {
            half.push(zero(Endpoint::Interior, t.clone(), a.sign_inside));
        }
        if a.end_zero == Some(true) {
            half.push(zero(Endpoint::End, Surd::rational(eps.clone()), a.sign_before_end));
        }
        if a.crossings.is_empty() {
            continue;
        }
        let Some(m) = f.multiplicity else {
            unknown.push(unknown_multiplicity(f));
            continue;
        };
        for c in a.crossings {
            total_paper += c.direction as i64 * m as i64;
            crossings.push(CrossingRecord {
                kind: f.kind,
                k: f.k,
                q: f.q,
                mu_sq: mu_sq.clone(),
                delta_star: c.delta_star,
                multiplicity: m,
                direction: opts.sign.apply(c.direction),
            });
        }
    }
    let mode = if model.is_partial() {
        ReportMode::PartialTable
    } else {
        match opts.mode {
            SpectralMode::Nakano => ReportMode::NakanoCertified,
            SpectralMode::Explicit => ReportMode::ExplicitSpectrum,
        }
    };
    let total_standard = -total_paper;
    Ok(SpectralFlowReport {
        mode,
        sign_convention: opts.sign,
        total: match opts.sign {
            SignConvention::Paper => total_paper,
            SignConvention::Standard => total_standard,
        },
        total_paper,
        total_standard,
        crossings,
        half_crossings: half,
        indeterminate: unknown,
        windows: en.windows,
        r: r.clone(),
        eps: eps.clone(),
    })
}

/// `dim ker D_{r,ε}`: multiplicities of the families vanishing at `δ = ε`.
pub fn kernel_dimension(model: &SpectralModel, r: &Rational, eps: &Rational, opts: &FlowOptions) -> Result<u64> {
    let en = enumerate_families(model, r, eps, opts)?;
    let mut dim = 0u64;
    let mut unknown = Vec::new();
    for f in &en.families {
        let a = f.analyze(r, eps)?;
        match (a.end_zero, f.multiplicity) {
            (Some(false), _) => {}
            (Some(true), Some(m)) => dim += m,
            (Some(true), None) => unknown.push(unknown_multiplicity(f)),
            (None, _) => {
                let reason = a.indeterminate.unwrap_or_else(|| "bound touches zero at delta = eps".into());
                unknown.push(indeterminate(f, reason));
            }
        }
    }
    if unknown.is_empty() {
        Ok(dim)
    } else {
        Err(Error::Indeterminate(
            unknown.iter().map(|u| format!("{:?}(q={}, k={}): {}", u.kind, u.q, u.k, u.reason)).collect(),
        ))
    }
}

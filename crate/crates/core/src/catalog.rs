//! Catalog bases: products of projective lines (Fano, `κ = 2`) and even-degree
//! general-type hypersurfaces, with their cohomology rings, Chern roots and
//! spectral models.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::ring::{Generator, GradedClass, RingSpec};
use crate::series::ChernRoot;
use crate::spectral::{laplacian_table_load, CohomologyTable, PartialTable, SpectralModel};

/// Degree-`d` hypersurface in `ℂP^{n+1}` with `d` even and `d > n + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypersurfaceSpec {
    pub n: usize,
    pub d: i64,
}

impl HypersurfaceSpec {
    pub fn new(n: usize, d: i64) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!("hypersurface dimension n={n} must be even and positive")));
        }
        if d % 2 != 0 {
            return Err(Error::Config(format!("hypersurface degree d={d} must be even")));
        }
        if d <= n as i64 + 2 {
            return Err(Error::Config(format!("hypersurface degree d={d} must exceed n+2={}", n + 2)));
        }
        Ok(Self { n, d })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    /// `K_X* = O_X(n + 2 − d)`.
    pub fn anticanonical_degree(&self) -> i64 {
        self.n as i64 + 2 - self.d
    }

    /// The `k` with `𝒦 ⊗ L^k = O_X`, always negative.
    pub fn k0(&self) -> i64 {
        self.anticanonical_degree() / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ManifoldKind {
    ProductCp1 { factors: usize },
    HypersurfaceGeneralType(HypersurfaceSpec),
}

/// Topological data of a base `X` with polarization `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    pub name: String,
    /// Complex dimension, even.
    pub n: usize,
    pub ring: Arc<RingSpec>,
    /// Weighted (virtual) roots of `T^{1,0}X`.
    pub roots: Vec<ChernRoot>,
    /// `c₁(L)`.
    pub c: GradedClass,
    /// `Ric ≥ κω`; absent for general type.
    pub kappa: Option<Rational>,
    /// `c₁(𝒦) = −½ c₁(T^{1,0}X)`.
    pub spin_twist: GradedClass,
    pub twist_description: String,
    pub kind: ManifoldKind,
}

impl ManifoldSpec {
    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// `Σ w·x` over the roots.
    pub fn first_chern(&self) -> GradedClass {
        self.roots
            .iter()
            .fold(GradedClass::zero(&self.ring), |acc, r| &acc + &r.class.scale_real(&int(r.weight)))
    }

    /// `λ` with `c₁(T^{1,0}X) = λ·c`, when it exists.
    pub fn ricci_ratio(&self) -> Option<Rational> {
        let c1 = self.first_chern();
        let (mono, coeff) = self.c.terms().next()?;
        let lambda = c1.coeff(mono).as_real_constant()? / coeff.as_real_constant()?;
        (c1 == self.c.scale_real(&lambda)).then_some(lambda)
    }

    /// Series order that is always enough on this ring.
    pub fn default_order(&self) -> usize {
        self.n + 2
    }

    pub fn require_fano(&self) -> Result<&Rational> {
        self.kappa
            .as_ref()
            .ok_or_else(|| Error::NotFano(format!("{} has no Ricci lower bound; Fano-only operation refused", self.name)))
    }

    pub fn hypersurface(&self) -> Option<&HypersurfaceSpec> {
        match &self.kind {
            ManifoldKind::HypersurfaceGeneralType(h) => Some(h),
            ManifoldKind::ProductCp1 { .. } => None,
        }
    }

    pub fn summary(&self) -> ManifoldSummary {
        ManifoldSummary {
            name: self.name.clone(),
            n: self.n,
            kappa: self.kappa.clone(),
            twist: self.twist_description.clone(),
            kind: self.kind.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldSummary {
    pub name: String,
    pub n: usize,
    #[serde(with = "crate::arith::serde_rational::option")]
    pub kappa: Option<Rational>,
    pub twist: String,
    pub kind: ManifoldKind,
}

/// `(h⁰, h¹)` of `O(d)` on `ℂP¹`.
pub fn cohomology_line_cp1(d: i64) -> (u64, u64) {
    let h0 = if d >= 0 { (d + 1) as u64 } else { 0 };
    let h1 = if d <= -2 { (-d - 1) as u64 } else { 0 };
    (h0, h1)
}

/// `h^q` of `O(d₁, …, d_s)` on `(ℂP¹)^s` by Künneth.
pub fn kunneth_cp1(degrees: &[i64], q: usize) -> u64 {
    // coefficient of t^q in ∏ (h0_i + h1_i t)
    let mut poly = vec![1u64];
    for &d in degrees {
        let (h0, h1) = cohomology_line_cp1(d);
        let mut next = vec![0u64; poly.len() + 1];
        for (j, &v) in poly.iter().enumerate() {
            next[j] += v * h0;
            next[j + 1] += v * h1;
        }
        poly = next;
    }
    poly.get(q).copied().unwrap_or(0)
}

/// `h^{q,k}` for `(ℂP¹)^{factors}` with `𝒦 ⊗ L^k = O(k−1, …, k−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductCp1Table {
    pub factors: usize,
}

impl CohomologyTable for ProductCp1Table {
    fn complex_dim(&self) -> usize {
        self.factors
    }

    fn h(&self, q: usize, k: i64) -> Option<u64> {
        Some(kunneth_cp1(&vec![k - 1; self.factors], q))
    }
}

/// `(ℂP¹)^{factors}` polarized by `O(1, …, 1)`.
pub fn product_cp1_model(factors: usize) -> Result<(ManifoldSpec, SpectralModel)> {
    if factors == 0 || !factors.is_multiple_of(2) {
        return Err(Error::Config(format!("product of projective lines needs an even positive factor count, got {factors}")));
    }
    let ring = RingSpec::square_free(factors);
    let gens: Vec<GradedClass> = (0..factors).map(|i| GradedClass::generator(&ring, i)).collect();
    let c = gens.iter().fold(GradedClass::zero(&ring), |acc, g| &acc + g);
    let roots = gens.iter().map(|g| ChernRoot::new(g.scale_real(&int(2)))).collect();
    let name = if factors == 2 { "cp1xcp1".to_string() } else { format!("cp1x{factors}") };
    let mut spec = ManifoldSpec {
        name,
        n: factors,
        ring: ring.clone(),
        roots,
        c: c.clone(),
        kappa: None,
        spin_twist: -&c,
        twist_description: format!("O({})", vec!["-1"; factors].join(",")),
        kind: ManifoldKind::ProductCp1 { factors },
    };
    // round metric on each factor with ω = c₁(O(1,…,1)): Ric = c₁(K*) = 2ω
    spec.kappa = spec.ricci_ratio();
    let model = SpectralModel::new(Arc::new(ProductCp1Table { factors }), spec.kappa.clone());
    Ok((spec, model))
}

/// Even-degree hypersurface of general type, with the only cohomology this
/// artifact asserts: `h^{0,k₀} = dim H⁰(X; O_X) = 1`.
pub fn general_type_hypersurface_model(n: usize, d: i64) -> Result<(ManifoldSpec, SpectralModel)> {
    let hs = HypersurfaceSpec::new(n, d)?;
    let truncation = u8::try_from(n).map_err(|_| Error::Config(format!("dimension {n} too large")))?;
    let ring = RingSpec::new(vec![Generator { name: "h".into(), truncation }], int(d))?;
    let h = GradedClass::generator(&ring, 0);
    // T X ⊕ O ⊕ O(d) = O(1)^{n+2}
    let roots = vec![
        ChernRoot::weighted(h.clone(), n as i64 + 2),
        ChernRoot::weighted(GradedClass::zero(&ring), -1),
        ChernRoot::weighted(h.scale_real(&int(d)), -1),
    ];
    let twist = -hs.k0();
    let spec = ManifoldSpec {
        name: format!("hyp:n={n},d={d}"),
        n,
        ring: ring.clone(),
        roots,
        c: h.clone(),
        kappa: None,
        spin_twist: h.scale_real(&int(twist)),
        twist_description: format!("O_X({twist})"),
        kind: ManifoldKind::HypersurfaceGeneralType(hs),
    };
    let known = BTreeMap::from([((0usize, hs.k0()), 1u64)]);
    let model = SpectralModel::new(Arc::new(PartialTable::new(n, known)), None);
    Ok((spec, model))
}

/// `cp1xcp1`, `cp1x<N>`, or `hyp:n=<n>,d=<d>`.
pub fn builtin(name: &str) -> Result<(ManifoldSpec, SpectralModel)> {
    if name == "cp1xcp1" {
        return product_cp1_model(2);
    }
    if let Some(count) = name.strip_prefix("cp1x") {
        let factors = count
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("unknown builtin manifold {name:?}")))?;
        return product_cp1_model(factors);
    }
    if let Some(rest) = name.strip_prefix("hyp:") {
        let mut n = None;
        let mut d = None;
        for part in rest.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("malformed hypersurface parameter {part:?}")))?;
            let bad = || Error::Config(format!("bad value for {key:?} in {name:?}"));
            match key.trim() {
                "n" => n = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "d" => d = Some(value.trim().parse::<i64>().map_err(|_| bad())?),
                other => return Err(Error::Config(format!("unknown hypersurface key {other:?}"))),
            }
        }
        let (Some(n), Some(d)) = (n, d) else {
            return Err(Error::Config(format!("{name:?} needs both n and d")));
        };
        return general_type_hypersurface_model(n, d);
    }
    Err(Error::Config(format!("unknown builtin manifold {name:?}")))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifoldConfig {
    name: Option<String>,
    #[serde(rename = "type")]
    kind: String,
    factors: Option<usize>,
    n: Option<usize>,
    d: Option<i64>,
    laplacian_table: Option<PathBuf>,
}

/// Builds a model from config JSON; a relative `laplacian_table` path is
/// resolved against `base_dir`.
pub fn from_config_str(text: &str, base_dir: &Path) -> Result<(ManifoldSpec, SpectralModel)> {
    let cfg: ManifoldConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("manifold config: {e}")))?;
    let (mut spec, model) = match cfg.kind.as_str() {
        "product_cp1" => {
            let factors = cfg.factors.ok_or_else(|| Error::Config("product_cp1 needs \"factors\"".into()))?;
            product_cp1_model(factors)?
        }
        "hypersurface_general_type" => {
            let n = cfg.n.ok_or_else(|| Error::Config("hypersurface_general_type needs \"n\"".into()))?;
            let d = cfg.d.ok_or_else(|| Error::Config("hypersurface_general_type needs \"d\"".into()))?;
            general_type_hypersurface_model(n, d)?
        }
        other => return Err(Error::Config(format!("unknown manifold type {other:?}"))),
    };
    if let Some(name) = cfg.name {
        spec.name = name;
    }
    let model = match cfg.laplacian_table {
        None => model,
        Some(path) => {
            let path = if path.is_relative() { base_dir.join(path) } else { path };
            let spectrum = laplacian_table_load(&path, model.kappa.as_ref(), model.n)?;
            model.with_spectrum(spectrum)
        }
    };
    Ok((spec, model))
}

/// A builtin name, or a path to a manifold config file.
pub fn load(name_or_path: &str) -> Result<(ManifoldSpec, SpectralModel)> {
    let path = Path::new(name_or_path);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return from_config_str(&text, path.parent().unwrap_or(Path::new(".")));
    }
    builtin(name_or_path)
}

/// Degree-0 check used by tests: the twist squares to the canonical class.
pub fn twist_is_square_root(spec: &ManifoldSpec) -> bool {
    let k = -&spec.first_chern();
    spec.spin_twist.scale_real(&int(2)) == k
}

/// Whether `κ` and the declared kind agree: Fano entries have `κ ≥ 0`.
pub fn kappa_consistent(spec: &ManifoldSpec) -> bool {
    match (&spec.kind, &spec.kappa) {
        (ManifoldKind::ProductCp1 { .. }, Some(k)) => !k.is_negative(),
        (ManifoldKind::HypersurfaceGeneralType(h), None) => h.anticanonical_degree() < 0,
        _ => false,
    }
}

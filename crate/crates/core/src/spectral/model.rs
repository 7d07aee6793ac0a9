use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::nakano_lower_bound;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Provider of `h^{q,k} = dim H^q(X, 𝒦 ⊗ L^k)`.
///
/// Implementations are read-only and may be queried from several threads.
pub trait CohomologyTable: Send + Sync + fmt::Debug {
    fn complex_dim(&self) -> usize;

    /// `None` when the provider does not know the value.
    fn h(&self, q: usize, k: i64) -> Option<u64>;

    /// Declared validity window for `k`; `None` means every `k`.
    fn k_window(&self) -> Option<(i64, i64)> {
        None
    }

    /// Whether some entries are knowingly absent (general-type examples).
    fn is_partial(&self) -> bool {
        false
    }
}

/// Explicit table: listed entries inside the window, zero elsewhere inside
/// the window, unknown outside it.
#[derive(Clone, Debug)]
pub struct TabulatedTable {
    n: usize,
    window: (i64, i64),
    entries: BTreeMap<(usize, i64), u64>,
}

impl TabulatedTable {
    pub fn new(n: usize, window: (i64, i64), entries: BTreeMap<(usize, i64), u64>) -> Self {
        Self { n, window, entries }
    }
}

impl CohomologyTable for TabulatedTable {
    fn complex_dim(&self) -> usize {
        self.n
    }

    fn h(&self, q: usize, k: i64) -> Option<u64> {
        if q > self.n {
            return Some(0);
        }
        if k < self.window.0 || k > self.window.1 {
            return None;
        }
        Some(self.entries.get(&(q, k)).copied().unwrap_or(0))
    }

    fn k_window(&self) -> Option<(i64, i64)> {
        Some(self.window)
    }
}

/// Table that only knows a handful of entries; everything else is unknown.
#[derive(Clone, Debug)]
pub struct PartialTable {
    n: usize,
    known: BTreeMap<(usize, i64), u64>,
}

impl PartialTable {
    pub fn new(n: usize, known: BTreeMap<(usize, i64), u64>) -> Self {
        Self { n, known }
    }
}

impl CohomologyTable for PartialTable {
    fn complex_dim(&self) -> usize {
        self.n
    }

    fn h(&self, q: usize, k: i64) -> Option<u64> {
        if q > self.n {
            return Some(0);
        }
        self.known.get(&(q, k)).copied()
    }

    fn is_partial(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Tabulated,
    NakanoBoundOnly,
}

/// One tabulated eigenvalue `½μ²` of the Kodaira Laplacian on
/// `Ω^{0,q}(𝒦 ⊗ L^k)` with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub q: usize,
    pub k: i64,
    #[serde(rename = "halfMuSq", with = "crate::arith::serde_rational")]
    pub half_mu_sq: Rational,
    pub mult: u64,
}

/// Optional explicit spectra. Entries are listed per `(q, k)` sorted
/// ascending; eigenvalues with `μ² <= cutoff` are all listed when a cutoff is
/// declared.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaplacianSpectrum {
    entries: BTreeMap<(usize, i64), Vec<(Rational, u64)>>,
    cutoff_mu_sq: Option<Rational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpectrumFile {
    Bare(Vec<SpectrumEntry>),
    WithCutoff {
        #[serde(rename = "cutoffMuSq", with = "crate::arith::serde_rational::option", default)]
        cutoff_mu_sq: Option<Rational>,
        entries: Vec<SpectrumEntry>,
    },
}

impl LaplacianSpectrum {
    /// Validates and collects entries: `½μ² > 0`, `mult >= 1`, `q <= n`, and
    /// `½μ²` at least the Nakano bound when `κ` is known.
    pub fn from_entries(
        entries: Vec<SpectrumEntry>,
        cutoff_mu_sq: Option<Rational>,
        kappa: Option<&Rational>,
        n: usize,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, i64), Vec<(Rational, u64)>> = BTreeMap::new();
        for e in entries {
            if e.q > n {
                return Err(Error::Config(format!("spectrum entry with q={} > n={n}", e.q)));
            }
            if !e.half_mu_sq.is_positive() {
                return Err(Error::Config(format!(
                    "spectrum entry (q={}, k={}) has nonpositive halfMuSq {}",
                    e.q, e.k, e.half_mu_sq
                )));
            }
            if e.mult == 0 {
                return Err(Error::Config(format!("spectrum entry (q={}, k={}) has mult 0", e.q, e.k)));
            }
            if let Some(kappa) = kappa {
                let bound = nakano_lower_bound(e.q, e.k, kappa, n);
                if e.half_mu_sq < bound {
                    return Err(Error::NakanoViolation {
                        q: e.q,
                        k: e.k,
                        half_mu_sq: e.half_mu_sq.to_string(),
                        bound: bound.to_string(),
                    });
                }
            }
            let slot = map.entry((e.q, e.k)).or_default();
            match slot.iter_mut().find(|(v, _)| *v == e.half_mu_sq) {
                Some((_, m)) => *m += e.mult,
                None => slot.push((e.half_mu_sq, e.mult)),
            }
        }
        for list in map.values_mut() {
            list.sort();
        }
        if let Some(c) = &cutoff_mu_sq {
            if c.is_negative() {
                return Err(Error::Config(format!("negative cutoff {c}")));
            }
        }
        Ok(Self { entries: map, cutoff_mu_sq })
    }

    /// Parses either a bare entry array or `{"cutoffMuSq": "p/q", "entries": [...]}`.
    pub fn from_json(text: &str, kappa: Option<&Rational>, n: usize) -> Result<Self> {
        let file: SpectrumFile = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("Laplacian table schema error: {e}")))?;
        match file {
            SpectrumFile::Bare(entries) => Self::from_entries(entries, None, kappa, n),
            SpectrumFile::WithCutoff { cutoff_mu_sq, entries } => {
                Self::from_entries(entries, cutoff_mu_sq, kappa, n)
            }
        }
    }

    pub fn provenance(&self) -> Provenance {
        if self.entries.is_empty() && self.cutoff_mu_sq.is_none() {
            Provenance::NakanoBoundOnly
        } else {
            Provenance::Tabulated
        }
    }

    pub fn entries_at(&self, q: usize, k: i64) -> &[(Rational, u64)] {
        self.entries.get(&(q, k)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cutoff_mu_sq(&self) -> Option<&Rational> {
        self.cutoff_mu_sq.as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, &Rational, u64)> {
        self.entries.iter().flat_map(|(&(q, k), list)| list.iter().map(move |(v, m)| (q, k, v, *m)))
    }

    pub fn to_entries(&self) -> Vec<SpectrumEntry> {
        self.iter()
            .map(|(q, k, v, mult)| SpectrumEntry { q, k, half_mu_sq: v.clone(), mult })
            .collect()
    }
}

/// Loads a Laplacian table file, checking every entry against the Nakano
/// bound for the given `κ` and dimension.
pub fn laplacian_table_load(path: &Path, kappa: Option<&Rational>, n: usize) -> Result<LaplacianSpectrum> {
    let text = std::fs::read_to_string(path)?;
    LaplacianSpectrum::from_json(&text, kappa, n)
}

/// Everything the spectral side needs about a base.
#[derive(Clone, Debug)]
pub struct SpectralModel {
    pub n: usize,
    /// Ricci lower bound `Ric ≥ κω`; absent for general-type bases.
    pub kappa: Option<Rational>,
    pub table: Arc<dyn CohomologyTable>,
    pub spectrum: LaplacianSpectrum,
}

impl SpectralModel {
    pub fn new(table: Arc<dyn CohomologyTable>, kappa: Option<Rational>) -> Self {
        Self { n: table.complex_dim(), kappa, table, spectrum: LaplacianSpectrum::default() }
    }

    pub fn with_spectrum(mut self, spectrum: LaplacianSpectrum) -> Self {
        self.spectrum = spectrum;
        self
    }

    pub fn is_partial(&self) -> bool {
        self.table.is_partial()
    }
}

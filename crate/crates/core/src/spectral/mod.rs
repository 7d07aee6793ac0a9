//! Dirac eigenvalue families on the circle bundle and exact spectral-flow
//! bookkeeping along `D_{r,δ}`, `0 < δ ≤ ε`.

mod family;
mod flow;
mod model;

use serde::{Deserialize, Serialize};

use crate::arith::{int, Rational};

pub use family::{
    certify_no_crossing, enumerate_families, Certification, Crossing, EigenvalueFamily,
    Enumeration, FamilyAnalysis, FamilyKind, Indeterminate, MuSq, Windows,
};
pub use flow::{
    kernel_dimension, spectral_flow, CrossingRecord, Endpoint, FlowOptions, HalfCrossing,
    ReportMode, SignConvention, SpectralFlowReport, SpectralMode,
};
pub use model::{
    laplacian_table_load, CohomologyTable, LaplacianSpectrum, PartialTable, Provenance,
    SpectralModel, SpectrumEntry, TabulatedTable,
};

/// `d_μ^{q,k} = e^q − e^{q−1} + … + (−1)^q e^0` for `e = [e^0, …, e^q]`.
pub fn type2_multiplicity(e: &[u64]) -> i64 {
    let q = e.len().saturating_sub(1);
    e.iter()
        .enumerate()
        .map(|(j, &v)| if (q - j).is_multiple_of(2) { v as i64 } else { -(v as i64) })
        .sum()
}

/// Certified lower bound for every positive eigenvalue `½μ²` of the Kodaira
/// Laplacian on `(0,q)`-forms with values in `𝒦 ⊗ L^k`.
pub fn nakano_lower_bound(q: usize, k: i64, kappa: &Rational, n: usize) -> Rational {
    let half = kappa / int(2);
    let a = int(q as i64) * (int(k) + &half);
    let b = int(n as i64 - q as i64) * (-int(k) + &half);
    a.max(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vanishing {
    MustVanish,
    Unconstrained,
}

/// Cohomology forced to vanish by the Nakano inequalities.
pub fn spin_vanishing_predicate(q: usize, k: i64, kappa: &Rational, n: usize) -> Vanishing {
    let half = kappa / int(2);
    let k = int(k);
    if (q > 0 && k > -half.clone()) || (q < n && k < half) {
        Vanishing::MustVanish
    } else {
        Vanishing::Unconstrained
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_multiplicities() {
        assert_eq!(type2_multiplicity(&[5]), 5);
        assert_eq!(type2_multiplicity(&[2, 3]), 1);
        assert_eq!(type2_multiplicity(&[1, 0, 4]), 5);
        assert_eq!(type2_multiplicity(&[3, 1]), -2);
    }

    #[test]
    fn nakano_examples() {
        assert_eq!(nakano_lower_bound(1, 3, &int(2), 2), int(4));
        assert_eq!(nakano_lower_bound(0, 0, &int(0), 2), int(0));
        assert_eq!(nakano_lower_bound(0, -2, &int(2), 2), int(6));
    }

    #[test]
    fn vanishing_examples() {
        assert_eq!(spin_vanishing_predicate(1, 0, &int(2), 2), Vanishing::MustVanish);
        assert_eq!(spin_vanishing_predicate(0, 5, &int(2), 2), Vanishing::Unconstrained);
        assert_eq!(spin_vanishing_predicate(0, -1, &int(2), 2), Vanishing::MustVanish);
        assert_eq!(spin_vanishing_predicate(2, -1, &int(2), 2), Vanishing::Unconstrained);
    }
}

//! Fixtures shared by the criterion benches.

use etafano::arith::{int, rat};
use etafano::{catalog, ManifoldSpec, Rational, SpectralModel};

pub fn cp1_product(factors: usize) -> (ManifoldSpec, SpectralModel) {
    catalog::product_cp1_model(factors).expect("catalog model")
}

/// The `r` grid of the spectral-flow theorem check on `κ = 2`.
pub fn r_grid() -> Vec<Rational> {
    (-10..=10).map(|j| rat(j, 10)).collect()
}

pub fn eps_grid() -> Vec<Rational> {
    vec![rat(1, 10), rat(1, 2), int(1), int(2), int(4)]
}

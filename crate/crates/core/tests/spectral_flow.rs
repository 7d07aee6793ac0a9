use std::collections::BTreeMap;
use std::sync::Arc;

use etafano::arith::{int, rat, Rational, Surd};
use etafano::catalog::{general_type_hypersurface_model, product_cp1_model};
use etafano::spectral::{
    enumerate_families, kernel_dimension, spectral_flow, Endpoint, FamilyKind, FlowOptions, LaplacianSpectrum,
    ReportMode, SignConvention, SpectralMode, SpectralModel, SpectrumEntry, TabulatedTable,
};
use etafano::Error;

fn r_grid() -> Vec<Rational> {
    (-10..=10).map(|j| rat(j, 10)).collect()
}

fn eps_grid() -> Vec<Rational> {
    vec![rat(1, 10), rat(1, 2), int(1), int(2), int(4)]
}

#[test]
fn theorem_grid_vanishes_on_both_products() {
    for factors in [2, 4] {
        let (_, model) = product_cp1_model(factors).unwrap();
        for r in r_grid() {
            for eps in eps_grid() {
                let rep = spectral_flow(&model, &r, &eps, &FlowOptions::default()).unwrap();
                assert_eq!(rep.mode, ReportMode::NakanoCertified);
                assert!(rep.indeterminate.is_empty(), "factors={factors} r={r} eps={eps}: {:?}", rep.indeterminate);
                assert_eq!(rep.total, 0, "factors={factors} r={r} eps={eps}");
            }
        }
    }
}

#[test]
fn spec_examples() {
    let (_, model) = product_cp1_model(2).unwrap();
    let rep = spectral_flow(&model, &rat(1, 2), &int(3), &FlowOptions::default()).unwrap();
    assert_eq!((rep.total, rep.mode), (0, ReportMode::NakanoCertified));
    let rep = spectral_flow(&model, &int(0), &int(10), &FlowOptions::default()).unwrap();
    assert_eq!(rep.total, 0);
    assert!(rep.is_exact());
}

#[test]
fn window_scaling_changes_nothing() {
    let (_, model) = product_cp1_model(2).unwrap();
    for r in r_grid() {
        for eps in eps_grid() {
            let base = spectral_flow(&model, &r, &eps, &FlowOptions::default()).unwrap();
            for scale in [2, 4] {
                let opts = FlowOptions { window_scale: int(scale), ..FlowOptions::default() };
                let wide = spectral_flow(&model, &r, &eps, &opts).unwrap();
                assert_eq!(wide.total, base.total);
                assert_eq!(wide.crossings, base.crossings);
                assert_eq!(wide.indeterminate, base.indeterminate);
            }
        }
    }
}

#[test]
fn enumeration_examples() {
    let (_, model) = product_cp1_model(2).unwrap();
    let en = enumerate_families(&model, &int(0), &int(2), &FlowOptions::default()).unwrap();
    let f = en
        .families
        .iter()
        .find(|f| f.kind == FamilyKind::Type1 && f.q == 0 && f.k == 1)
        .expect("h^{0,1} family");
    assert_eq!(f.multiplicity, Some(1));
    assert_eq!(f.eigenvalue(&int(0), &rat(1, 3)).unwrap(), Surd::rational(rat(4, 3)));

    // every Type-2 candidate is excluded by the Nakano bound at small ε
    let en = enumerate_families(&model, &int(0), &rat(1, 10), &FlowOptions::default()).unwrap();
    let type2: Vec<_> = en.families.iter().filter(|f| f.kind != FamilyKind::Type1).collect();
    // q=0,k=0 has bound 2·max(0, 2) = 4 > ε/4; every candidate must be excluded
    assert!(type2.is_empty(), "{type2:?}");

    let (_, hyp) = general_type_hypersurface_model(4, 8).unwrap();
    let en = enumerate_families(&hyp, &int(0), &int(1), &FlowOptions::default()).unwrap();
    let f = en
        .families
        .iter()
        .find(|f| f.kind == FamilyKind::Type1 && f.q == 0 && f.k == -1)
        .expect("constants family");
    assert_eq!(f.multiplicity, Some(1));
    assert_eq!(f.eigenvalue(&int(0), &int(1)).unwrap(), Surd::rational(int(1)));
}

#[test]
fn counterexample_crossing() {
    let (_, hyp) = general_type_hypersurface_model(4, 8).unwrap();
    let rep = spectral_flow(&hyp, &int(0), &int(1), &FlowOptions::default()).unwrap();
    assert_eq!(rep.mode, ReportMode::PartialTable);
    let c = rep
        .crossings
        .iter()
        .find(|c| c.kind == FamilyKind::Type1 && c.q == 0 && c.k == -1)
        .expect("constants cross");
    assert_eq!(c.delta_star, Surd::rational(rat(1, 2)));
    assert!(c.multiplicity >= 1);
    // negative to positive: −1 in the default convention
    assert_eq!(c.direction, -1);
    assert_ne!(rep.total, 0);
    assert_eq!(rep.total_standard, -rep.total_paper);
    assert!(!rep.indeterminate.is_empty());

    let opts = FlowOptions { sign: SignConvention::Standard, ..FlowOptions::default() };
    let std = spectral_flow(&hyp, &int(0), &int(1), &opts).unwrap();
    assert_eq!(std.total, rep.total_standard);

    // below the crossing the constants do not move
    let early = spectral_flow(&hyp, &int(0), &rat(1, 4), &FlowOptions::default()).unwrap();
    assert!(early.crossings.iter().all(|c| !(c.q == 0 && c.k == -1)));
    // exactly at the crossing it is a kernel element, not flow
    let at = spectral_flow(&hyp, &int(0), &rat(1, 2), &FlowOptions::default()).unwrap();
    assert!(at.crossings.iter().all(|c| !(c.q == 0 && c.k == -1)));
    assert!(at.half_crossings.iter().any(|h| h.q == 0 && h.k == -1 && h.at == Endpoint::End));
}

#[test]
fn other_hypersurfaces_cross_at_minus_two_k_over_n() {
    for (n, d) in [(2usize, 6i64), (4, 10), (6, 10)] {
        let (spec, model) = general_type_hypersurface_model(n, d).unwrap();
        let k0 = spec.hypersurface().unwrap().k0();
        let want = rat(-2 * k0, n as i64);
        let eps = &want * int(2);
        let rep = spectral_flow(&model, &int(0), &eps, &FlowOptions::default()).unwrap();
        let c = rep.crossings.iter().find(|c| c.q == 0 && c.k == k0).expect("crossing");
        assert_eq!(c.delta_star, Surd::rational(want));
    }
}

#[test]
fn kernel_examples() {
    let (_, model) = product_cp1_model(2).unwrap();
    let opts = FlowOptions::default();
    assert_eq!(kernel_dimension(&model, &int(0), &rat(7, 10), &opts).unwrap(), 0);
    // r = 1 + ε forces λ(ε) = 0 for (q=0, k=1)
    let eps = rat(7, 10);
    let r = int(1) + &eps;
    assert_eq!(kernel_dimension(&model, &r, &eps, &opts).unwrap(), 1);
    // a resonant r whose family has h = 0: q=1 needs k=r, h^{1,k}=0
    assert_eq!(kernel_dimension(&model, &int(2), &rat(1, 3), &opts).unwrap(), 0);
}

#[test]
fn partial_kernel_is_indeterminate() {
    let (_, hyp) = general_type_hypersurface_model(4, 8).unwrap();
    assert!(matches!(
        kernel_dimension(&hyp, &int(0), &int(1), &FlowOptions::default()),
        Err(Error::Indeterminate(_))
    ));
}

#[test]
fn outside_regime_is_reported_not_guessed() {
    // |r| > κ/2: the Nakano bound alone may fail; whatever is undecided is listed
    let (_, model) = product_cp1_model(2).unwrap();
    let rep = spectral_flow(&model, &int(3), &int(4), &FlowOptions::default()).unwrap();
    assert!(!rep.indeterminate.is_empty());
    for u in &rep.indeterminate {
        assert_ne!(u.kind, FamilyKind::Type1);
    }
}

#[test]
fn explicit_spectrum_crossings() {
    // synthetic data: μ² = 1/50 at k=0 with e = [3, 3, 0], so d = [3, 0, 0];
    // κ unknown, the remainder is bounded by the cutoff
    let table = TabulatedTable::new(2, (-10, 10), BTreeMap::new());
    let spectrum = LaplacianSpectrum::from_entries(
        vec![
            SpectrumEntry { q: 0, k: 0, half_mu_sq: rat(1, 100), mult: 3 },
            SpectrumEntry { q: 1, k: 0, half_mu_sq: rat(1, 100), mult: 3 },
        ],
        Some(int(100)),
        None,
        2,
    )
    .unwrap();
    let model = SpectralModel::new(Arc::new(table), None).with_spectrum(spectrum);
    let opts = FlowOptions { mode: SpectralMode::Explicit, ..FlowOptions::default() };
    let rep = spectral_flow(&model, &rat(1, 2), &int(1), &opts).unwrap();
    assert!(rep.is_exact(), "{:?}", rep.indeterminate);
    assert_eq!(rep.mode, ReportMode::ExplicitSpectrum);
    assert_eq!(rep.crossings.len(), 1);
    let c = &rep.crossings[0];
    assert_eq!(c.kind, FamilyKind::Type2Plus);
    assert_eq!(c.mu_sq, Some(rat(1, 50)));
    assert_eq!(c.delta_star, Surd::rational(rat(25, 48)));
    assert_eq!((c.multiplicity, c.direction), (3, 1));
    assert_eq!(rep.total, 3);

    // the same model in bound-only mode has no information at all
    let rep = spectral_flow(&model, &rat(1, 2), &int(1), &FlowOptions::default()).unwrap();
    assert!(!rep.indeterminate.is_empty());
}

#[test]
fn window_insufficient_is_named() {
    let table = TabulatedTable::new(2, (-1, 1), BTreeMap::new());
    let model = SpectralModel::new(Arc::new(table), Some(int(2)));
    match spectral_flow(&model, &int(0), &int(4), &FlowOptions::default()) {
        Err(Error::WindowInsufficient(msg)) => assert!(msg.contains("[-4, 4]"), "{msg}"),
        other => panic!("expected WindowInsufficient, got {other:?}"),
    }
}

#[test]
fn negative_type2_multiplicity_is_an_error() {
    let table = TabulatedTable::new(2, (-10, 10), BTreeMap::new());
    let spectrum = LaplacianSpectrum::from_entries(
        vec![
            SpectrumEntry { q: 0, k: 0, half_mu_sq: rat(1, 100), mult: 3 },
            SpectrumEntry { q: 1, k: 0, half_mu_sq: rat(1, 100), mult: 1 },
        ],
        Some(int(100)),
        None,
        2,
    )
    .unwrap();
    let model = SpectralModel::new(Arc::new(table), None).with_spectrum(spectrum);
    let opts = FlowOptions { mode: SpectralMode::Explicit, ..FlowOptions::default() };
    assert!(matches!(
        spectral_flow(&model, &rat(1, 2), &int(1), &opts),
        Err(Error::NegativeMultiplicity { q: 1, k: 0, .. })
    ));
}

#[test]
fn report_json_shape() {
    let (_, hyp) = general_type_hypersurface_model(4, 8).unwrap();
    let rep = spectral_flow(&hyp, &int(0), &int(1), &FlowOptions::default()).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    for key in ["mode", "total", "crossings", "indeterminate", "total_paper", "total_standard", "half_crossings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let c = &v["crossings"][0];
    for key in ["kind", "k", "q", "muSq", "delta_star", "multiplicity", "direction"] {
        assert!(c.get(key).is_some(), "missing crossing key {key}");
    }
    assert_eq!(v["mode"], "partial_table");
}

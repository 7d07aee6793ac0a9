use criterion::{black_box, criterion_group, criterion_main, Criterion};
use etafano::spectral::{spectral_flow, FlowOptions};
use etafano_bench::{cp1_product, eps_grid, r_grid};

fn theorem_grid(c: &mut Criterion) {
    let (_, model) = cp1_product(2);
    let opts = FlowOptions::default();
    c.bench_function("spectral_flow/cp1xcp1_grid", |b| {
        b.iter(|| {
            for r in r_grid() {
                for eps in eps_grid() {
                    black_box(spectral_flow(&model, &r, &eps, &opts).unwrap().total);
                }
            }
        })
    });
}

criterion_group!(benches, theorem_grid);
criterion_main!(benches);

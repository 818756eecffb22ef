use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vq_core::corpus::{chain, free, quantale, v};
use vq_core::par;
use vq_core::presheaf::enumerate_presheaves;
use vq_core::tensorprod::build_tensor_product;
use vq_core::vcat::{discrete, tensor_vcat};

fn presheaves(c: &mut Criterion) {
    let mut g = c.benchmark_group("presheaves");
    g.sample_size(10);
    let r422 = quantale("r422");
    let luk = quantale("lukasiewicz3");
    let inputs = [
        ("vtimesv_r422", Arc::new(tensor_vcat(&v(&r422), &v(&r422)).unwrap())),
        ("discrete8_luk", Arc::new(discrete(&luk, &["a", "b", "c", "d", "e", "f", "g", "h"]))),
        ("d_chain4_two", free(&chain(&quantale("two"), 4))),
    ];
    for (name, x) in &inputs {
        g.bench_with_input(BenchmarkId::new("parallel", name), x, |b, x| {
            b.iter(|| enumerate_presheaves(x).unwrap().len())
        });
        g.bench_with_input(BenchmarkId::new("sequential", name), x, |b, x| {
            b.iter(|| par::sequential(|| enumerate_presheaves(x).unwrap().len()))
        });
    }
    g.finish();
}

fn tensor_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("tensor_product");
    g.sample_size(10);
    let two = quantale("two");
    let luk = quantale("lukasiewicz3");
    let inputs = [
        ("d_chain3_x_d_chain3", free(&chain(&two, 3)), free(&chain(&two, 3))),
        ("d_pair_x_d_pair", free(&Arc::new(discrete(&two, &["p", "q"]))), free(&Arc::new(discrete(&two, &["p", "q"])))),
        ("v_luk_x_d_chain2", v(&luk), free(&chain(&luk, 2))),
    ];
    for (name, a, b) in &inputs {
        g.bench_function(BenchmarkId::new("parallel", name), |bn| {
            bn.iter(|| build_tensor_product(a, b).unwrap().len())
        });
        g.bench_function(BenchmarkId::new("sequential", name), |bn| {
            bn.iter(|| par::sequential(|| build_tensor_product(a, b).unwrap().len()))
        });
    }
    g.finish();
}

criterion_group!(benches, presheaves, tensor_products);
criterion_main!(benches);

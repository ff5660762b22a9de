use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use dexact::approx::AddSubcategory;
use dexact::dexact::{enumerate_family, Ambient, FamilyOptions};
use dexact::kgroups::{build_relative_k0_with, verify_theorem_a};
use dexact::par::Exec;
use dexact::repmod::{build_catalog, CatalogOptions};
use dexact::samples;

fn batch(c: &mut Criterion) {
    let cat = Arc::new(build_catalog(&samples::aus_a2(), &CatalogOptions::default()).unwrap());
    let t = AddSubcategory::from_labels(&cat, &["P1", "P2", "S3", "S1"], "T").unwrap();
    let proj = AddSubcategory::projectives(&cat).unwrap();
    let mut group = c.benchmark_group("aus_a2");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        let opts = FamilyOptions { exec, ..FamilyOptions::default() };
        for (amb_name, amb) in [("mod", Ambient::module_category(&cat)), ("dct", Ambient::d_cluster_tilting(&t, 2))] {
            group.bench_function(format!("family/{amb_name}/{name}"), |b| {
                b.iter(|| black_box(enumerate_family(&amb, &opts).unwrap().len()))
            });
            let fam = enumerate_family(&amb, &opts).unwrap();
            let k = build_relative_k0_with(&proj, &amb, &fam, exec).unwrap();
            group.bench_function(format!("theorem_a/{amb_name}/{name}"), |b| {
                b.iter(|| black_box(verify_theorem_a(&fam, &proj, &k, &amb, exec).unwrap().passes()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use crmap_core::autgroup::normalize;
use crmap_core::degeneracy::{degeneracy_exact, image_dimension, tangential_degeneracy};
use crmap_core::families::{explicit_map, lebl, to_heisenberg};
use crmap_core::{family_thm_i, mapping_residual, FamilyIParams, Rational, Scalar, SourcePoint};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn residuals(c: &mut Criterion) {
    let h14 = explicit_map("h14", 4).unwrap();
    let f1n = explicit_map("f1n", 5).unwrap();
    c.bench_function("residual/h14", |b| b.iter(|| mapping_residual(&h14).unwrap()));
    c.bench_function("residual/f1n", |b| b.iter(|| mapping_residual(&f1n).unwrap()));
}

fn degeneracy(c: &mut Criterion) {
    let h = family_thm_i(&FamilyIParams::new(r(1, 1), Scalar::one(), 6).unwrap()).unwrap();
    let origin = [Scalar::zero(), Scalar::zero()];
    let p = [Scalar::from_ratio(1, 2), "1/3 + 1/4 i".parse::<Scalar>().unwrap()];
    c.bench_function("degeneracy/exact/origin", |b| b.iter(|| degeneracy_exact(&h, &origin).unwrap()));
    c.bench_function("degeneracy/exact/generic", |b| b.iter(|| degeneracy_exact(&h, &p).unwrap()));
    let q = SourcePoint::Exact(p.clone()).to_float_point();
    c.bench_function("degeneracy/float/generic", |b| {
        b.iter(|| crmap_core::degeneracy_at(&h, &q).unwrap())
    });
    c.bench_function("degeneracy/tangential", |b| b.iter(|| tangential_degeneracy(&h, &origin, 0).unwrap()));
    c.bench_function("image_dimension", |b| b.iter(|| image_dimension(&h)));
}

fn normal_form(c: &mut Criterion) {
    let fam = family_thm_i(&FamilyIParams::new(r(1, 3), "1/4".parse().unwrap(), 5).unwrap()).unwrap();
    c.bench_function("transport/lebl", |b| b.iter(|| to_heisenberg(&lebl(&r(0, 1), &r(1, 2), 5).unwrap()).unwrap()));
    c.bench_function("normalize/family-i", |b| b.iter(|| normalize(&fam).unwrap()));
}

criterion_group!(benches, residuals, degeneracy, normal_form);
criterion_main!(benches);

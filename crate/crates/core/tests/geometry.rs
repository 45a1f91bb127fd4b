//! Escape rates, expansion rates, box dimension and the dimension bound.

use proptest::prelude::*;
use saddle_pressure::geometry::*;
use saddle_pressure::linalg::Vector;
use saddle_pressure::pressure::volume_pressure;
use saddle_pressure::*;

/// A rigid rotation of the 2-torus, used only for expansion checks.
#[derive(Debug)]
struct Translation {
    chart: Chart<f64>,
    region: Region<f64>,
}

impl Translation {
    fn new() -> Self {
        Self {
            chart: Chart::Torus { dim: 2 },
            region: Region::Torus { dim: 2 },
        }
    }
}

impl SmoothSystem<f64> for Translation {
    fn name(&self) -> &str {
        "translation"
    }
    fn chart(&self) -> &Chart<f64> {
        &self.chart
    }
    fn region(&self) -> &Region<f64> {
        &self.region
    }
    fn map(&self, p: &Vector<f64>) -> Vector<f64> {
        [p[0] + 0.618_033_988_749_895, p[1] + 0.414_213_562_373_095, 0.0]
    }
    fn inverse_map(&self, p: &Vector<f64>) -> Vector<f64> {
        [p[0] - 0.618_033_988_749_895, p[1] - 0.414_213_562_373_095, 0.0]
    }
    fn derivative(&self, _p: &Vector<f64>) -> SquareMatrix<f64> {
        SquareMatrix::identity(2)
    }
    fn parameters(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

#[test]
fn expansion_examples() {
    let lam = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let cat = expansion_rate(&CatMap::<f64>::standard(), 32, 12, &[]).unwrap();
    assert!((cat.estimate - lam).abs() < 1e-6);
    let rot = expansion_rate(&Translation::new(), 32, 12, &[]).unwrap();
    assert!(rot.estimate.abs() < 1e-12);
    let hs = LinearHorseshoe::<f64>::standard();
    let table = OrbitTable::build(&hs, 4, &EnumerationMethod::Symbolic).unwrap();
    let anchors: Vec<Vector<f64>> = table.points().map(|p| p.coords).collect();
    let e = expansion_rate(&hs, 32, 12, &anchors).unwrap();
    assert!((e.estimate - 4f64.ln()).abs() < 1e-6);
    assert!(expansion_rate(&hs, 16, 12, &anchors).is_err());
}

#[test]
fn expansion_is_subadditive() {
    let nl = NonlinearHorseshoe::<f64>::standard();
    let table = OrbitTable::build(&nl, 6, &EnumerationMethod::Symbolic).unwrap();
    let anchors: Vec<Vector<f64>> = table.points().map(|p| p.coords).collect();
    let e = expansion_rate(&nl, 64, 12, &anchors).unwrap();
    let a = &e.rates;
    for m in 1..=a.len() {
        for n in 1..=a.len() - m {
            let lhs = a[m + n - 1] * (m + n) as f64;
            let rhs = a[m - 1] * m as f64 + a[n - 1] * n as f64;
            assert!(lhs <= rhs + 0.05, "m={m} n={n}: {lhs} > {rhs}");
        }
    }
}

#[test]
fn escape_examples() {
    let cat = CatMap::<f64>::standard();
    let e = escape_rate(&cat, &Region::Torus { dim: 2 }, 10, 10_000, 1).unwrap();
    assert!(e.fractions.iter().all(|p| *p == 1.0));
    assert_eq!(e.upper_rate, 0.0);

    let hs = LinearHorseshoe::<f64>::standard();
    let e = escape_rate(&hs, &Region::unit_box(2), 12, 200_000, 2).unwrap();
    assert!((e.upper_rate + 2f64.ln()).abs() < 0.05, "{}", e.upper_rate);
    assert!(e.upper_rate <= e.stderr);

    let sink = SinkHorseshoe::<f64>::standard();
    let v = Region::boxed(&[0.0, 0.0], &[3.5, 1.0]);
    let e = escape_rate(&sink, &v, 12, 100_000, 3).unwrap();
    assert!(e.upper_rate.abs() < 0.01, "{}", e.upper_rate);
}

#[test]
fn escape_validates_region() {
    let hs = LinearHorseshoe::<f64>::standard();
    let outside = Region::boxed(&[0.0, 0.0], &[2.0, 1.0]);
    assert!(escape_rate(&hs, &outside, 8, 10_000, 1).is_err());
}

#[test]
fn horseshoe_cloud_dimension_and_bound() {
    let hs = LinearHorseshoe::<f64>::standard();
    let cloud = survivor_cloud(&hs, &Region::unit_box(2), 10, 60_000, 8).unwrap();
    let d = box_dimension(&cloud.points, 2, &geometric_scales(0.25, 1.0 / 1024.0, 5), CloudSource::SurvivorSet).unwrap();
    assert!((d.estimate - 1.0).abs() < 0.1, "{}", d.estimate);
    let b = dimension_bound(2, -2f64.ln(), 4f64.ln()).unwrap();
    assert!(b.check(d.estimate, 0.1).pass);
}

#[test]
fn whole_space_configuration() {
    // Λ = M: nothing escapes and the survivor set is all of the chart.
    let hs = LinearHorseshoe::<f64>::standard();
    let v = Region::whole(hs.chart());
    let e = escape_rate(&hs, &v, 10, 10_000, 4).unwrap();
    assert_eq!(e.upper_rate, 0.0);
    let s = expansion_rate(&hs, 32, 12, &[[0.0, 0.0, 0.0]]).unwrap();
    let bound = dimension_bound(2, e.upper_rate, s.estimate).unwrap();
    assert_eq!(bound.bound, 2.0);
    let cloud = survivor_cloud(&hs, &v, 10, 2_000_000, 4).unwrap();
    let d = box_dimension(&cloud.points, 2, &geometric_scales(1.0 / 8.0, 1.0 / 256.0, 6), CloudSource::SurvivorSet).unwrap();
    assert!((d.estimate - 2.0).abs() < 0.1, "{}", d.estimate);
    assert!(bound.check(d.estimate, 0.1).pass);
}

#[test]
fn measured_dimension_respects_bound_on_smooth_horseshoe() {
    let nl = NonlinearHorseshoe::<f64>::standard();
    let u = Region::unit_box(2);
    let e = escape_rate(&nl, &u, 12, 200_000, 6).unwrap();
    let table = OrbitTable::build(&nl, 6, &EnumerationMethod::Symbolic).unwrap();
    let anchors: Vec<Vector<f64>> = table.points().map(|p| p.coords).collect();
    let s = expansion_rate(&nl, 64, 12, &anchors).unwrap();
    let bound = dimension_bound(2, e.upper_rate, s.estimate).unwrap();
    let cloud = survivor_cloud(&nl, &u, 8, 60_000, 6).unwrap();
    let d = box_dimension(&cloud.points, 2, &geometric_scales(0.25, 1.0 / 512.0, 8), CloudSource::SurvivorSet).unwrap();
    assert!(bound.check(d.estimate, 0.1).pass, "{} vs {}", d.estimate, bound.bound);
}

#[test]
fn young_sandwich_and_bowen_equality() {
    let hs = LinearHorseshoe::<f64>::standard();
    let table = OrbitTable::build(&hs, 10, &EnumerationMethod::Symbolic).unwrap();
    let vol = volume_pressure(&hs, &table, &[0.5, 0.25], &[0.5, 0.1], (5, 10)).unwrap();
    let sup = vol.oracle.expect("linear horseshoe has a shift model");
    let e = escape_rate(&hs, &Region::unit_box(2), 14, 300_000, 9).unwrap();
    assert!(sup <= e.upper_rate + 0.05);
    assert!(e.upper_rate + 0.05 <= 0.05 + 1e-12 + e.stderr);
    assert!((sup - e.upper_rate).abs() <= 0.07);
    assert!((vol.estimate.estimate - e.upper_rate).abs() <= 0.07);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn survival_is_monotone_and_seeded(seed in any::<u64>(), which in 0usize..3) {
        let systems: [Box<dyn SmoothSystem<f64>>; 3] = [
            Box::new(LinearHorseshoe::standard()),
            Box::new(NonlinearHorseshoe::standard()),
            Box::new(Henon::classic()),
        ];
        let s = systems[which].as_ref();
        let v = *s.region();
        let a = escape_rate(s, &v, 8, 10_000, seed).unwrap();
        prop_assert!(a.survivors.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(a.fractions.windows(2).all(|w| w[1] <= w[0]));
        let b = escape_rate(s, &v, 8, 10_000, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn box_counts_shrink_with_scale(seed in any::<u64>(), dim in 1usize..=3) {
        let pts = uniform_cloud(dim, 2_000, seed);
        let scales = geometric_scales(1.0, 0.01, 6);
        let counts: Vec<usize> = scales.iter().map(|e| box_count(&pts, dim, *e)).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] >= w[0]));
    }
}

use modmax::benchgen::{generate, planted_quality, BenchmarkSpec};
use modmax::exact::{enumerate_optima, SolveConfig};
use modmax::graph::ModularityParams;
use modmax::metrics::{best_over_optima, Measure};

fn spec(seed: u64) -> BenchmarkSpec {
    BenchmarkSpec {
        n: 40,
        tau1: 3.0,
        tau2: 1.5,
        d_min: 2,
        d_max: 8,
        k_min: 5,
        k_max: 15,
        mu: 0.05,
        seed,
    }
}

/// Best AMI between the planted partition and any optimal partition.
fn recovery(seed: u64) -> f64 {
    let pg = generate(&spec(seed)).unwrap();
    let r = enumerate_optima(pg.graph(), &ModularityParams::default(), &SolveConfig::exact()).unwrap();
    assert!(r.enumeration_complete);
    best_over_optima(pg.planted(), &r.optima, Measure::Ami).unwrap()
}

// Thresholds frozen from a 20-seed calibration run (seeds 0..20): minimum
// 0.670, mean 0.859, seed 7 at 0.765. Low-degree planted communities are
// often split by the optimum, so recovery is well below 1 on some seeds.
#[test]
fn optimum_recovers_planted_structure() {
    let values: Vec<f64> = (0..20).map(recovery).collect();
    assert!(values.iter().all(|&v| v >= 0.65), "{values:?}");
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    assert!(mean >= 0.85, "mean {mean}");
    assert!(values[7] >= 0.75, "seed 7: {}", values[7]);
}

#[test]
fn mixing_lowers_planted_quality_across_corpus() {
    let p = ModularityParams::default();
    for seed in 0..10 {
        let low = BenchmarkSpec { mu: 0.01, ..spec(seed) };
        let high = BenchmarkSpec { mu: 0.3, ..spec(seed) };
        let (a, b) = (
            planted_quality(&generate(&low).unwrap(), &p),
            planted_quality(&generate(&high).unwrap(), &p),
        );
        assert!(b < a, "seed {seed}: mu=0.3 gives {b}, mu=0.01 gives {a}");
    }
}

#[test]
fn spec_json_defaults() {
    let s: BenchmarkSpec =
        serde_json::from_str(r#"{"n": 40, "d_min": 2, "d_max": 8, "k_min": 5, "k_max": 15, "mu": 0.1}"#).unwrap();
    assert_eq!((s.tau1, s.tau2, s.seed), (3.0, 1.5, 0));
    assert!(serde_json::from_str::<BenchmarkSpec>(r#"{"n": 40, "bogus": 1}"#).is_err());
}

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng as _;

use super::*;
use crate::graph::{brute_force_maxcut, random_regular_graph, ring_graph, Graph};
use crate::hamiltonian::{maxcut_hamiltonian, ProblemHamiltonian};
use crate::rng::{substream, Stream};

fn cycle4() -> Arc<ProblemHamiltonian<f64>> {
    Arc::new(maxcut_hamiltonian(&ring_graph(4).unwrap()).unwrap())
}

fn random_theta(rng: &mut crate::rng::Rng, p: usize) -> Vec<f64> {
    (0..2 * p).map(|_| rng.random::<f64>() * 2.0 * PI).collect()
}

#[test]
fn objective_at_origin_is_half_the_edges() {
    let cubic = random_regular_graph(8, 3, 1).unwrap();
    for (g, want) in [
        (ring_graph(4).unwrap(), 2.0_f64),
        (ring_graph(3).unwrap(), 1.5),
        (cubic, 6.0),
    ] {
        let h = Arc::new(maxcut_hamiltonian(&g).unwrap());
        for p in 1..=3 {
            let f = noiseless_objective(&h, &vec![0.0; 2 * p]).unwrap();
            assert!((f - want).abs() < 1e-12, "{f} vs {want}");
        }
    }
}

/// 200×200 grid scan over [0, 2π]² is the oracle for the p = 1 optimum.
#[test]
fn cycle4_p1_grid_maximum() {
    let obj = QaoaObjective::new(cycle4(), 1);
    let n = 200;
    let mut best = f64::MIN;
    for i in 0..n {
        for j in 0..n {
            let t = [2.0 * PI * i as f64 / n as f64, 2.0 * PI * j as f64 / n as f64];
            best = best.max(obj.evaluate(&t).unwrap());
        }
    }
    assert!((best - 3.0).abs() < 1e-2, "grid max {best}");
}

#[test]
fn periodicity_and_beta_shift() {
    let h = cycle4();
    let obj = QaoaObjective::new(h, 2);
    let mut rng = substream(3, Stream::Custom(0));
    for _ in 0..10 {
        let t = random_theta(&mut rng, 2);
        let f = obj.evaluate(&t).unwrap();
        for j in 0..4 {
            let mut s = t.clone();
            s[j] += 2.0 * PI;
            assert!((obj.evaluate(&s).unwrap() - f).abs() < 1e-10);
            if j % 2 == 1 {
                s[j] = t[j] + PI;
                assert!((obj.evaluate(&s).unwrap() - f).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn objective_bounded_by_maxcut() {
    let g = random_regular_graph(6, 3, 9).unwrap();
    let best = brute_force_maxcut(&g).unwrap().value as f64;
    let obj = QaoaObjective::new(Arc::new(maxcut_hamiltonian(&g).unwrap()), 2);
    let mut rng = substream(4, Stream::Custom(0));
    for _ in 0..50 {
        let t = random_theta(&mut rng, 2);
        let psi = obj.final_state(&t).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        let f = obj.evaluate(&t).unwrap();
        assert!((-1e-12..=best + 1e-12).contains(&f));
    }
}

#[test]
fn gaussian_estimator_is_seeded() {
    let obj = QaoaObjective::new(cycle4(), 1);
    let t = [0.3, 0.9];
    let a = sample_objective(&obj, &t, 100, EstimatorMode::Gaussian, 5).unwrap();
    let b = sample_objective(&obj, &t, 100, EstimatorMode::Gaussian, 5).unwrap();
    assert_eq!(a, b);
    assert!(sample_objective(&obj, &t, 0, EstimatorMode::Gaussian, 5).is_err());
}

#[test]
fn gaussian_estimator_variance() {
    let obj = FnObjective::new(2, |_: &[f64]| 1.0);
    let est = Estimator::new(EstimatorMode::Gaussian, 25).unwrap();
    let mut rng = substream(77, Stream::EstimatorNoise);
    let ys: Vec<f64> = (0..10_000)
        .map(|_| est.sample(&obj, &[0.0, 0.0], &mut rng).unwrap())
        .collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (ys.len() - 1) as f64;
    let want = 1.0 / 100.0;
    assert!((var / want - 1.0).abs() < 0.05, "variance {var}");
}

#[test]
fn shot_estimator_clt() {
    // Under |+⟩ the 4-cycle cut value has mean 2 and variance 1.
    let h = cycle4();
    let spec = h.diagonal_values().unwrap();
    let mean = spec.iter().sum::<f64>() / 16.0;
    let sd = (spec.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 16.0).sqrt();
    assert_eq!(mean, 2.0);
    let obj = QaoaObjective::new(h.clone(), 1);
    let y = sample_objective(&obj, &[0.0, 0.0], 1_000_000, EstimatorMode::Shots, 11).unwrap();
    assert!((y - 2.0).abs() <= 3.0 * sd / 1e3, "y = {y}");
}

#[test]
fn shot_estimator_needs_distribution() {
    let obj = FnObjective::new(2, |_: &[f64]| 0.0);
    assert!(sample_objective(&obj, &[0.0, 0.0], 10, EstimatorMode::Shots, 0).is_err());
}

#[test]
fn noisy_objective_fixed_points() {
    let h = cycle4();
    let mut rng = substream(8, Stream::Custom(0));
    for &q in &[1e-3, 0.05, 0.2] {
        let ch = PauliChannel::symmetric(q).unwrap();
        let f = noisy_objective(&h, &[0.0; 4], &ch).unwrap();
        assert!((f - 2.0).abs() < 1e-10);
    }
    let full = PauliChannel::symmetric(0.25).unwrap();
    for _ in 0..10 {
        let t = random_theta(&mut rng, 2);
        assert!((noisy_objective(&h, &t, &full).unwrap() - 2.0).abs() < 1e-10);
        let id = noisy_objective(&h, &t, &PauliChannel::identity()).unwrap();
        assert!((id - noiseless_objective(&h, &t).unwrap()).abs() < 1e-10);
        let weak = noisy_objective(&h, &t, &PauliChannel::symmetric(1e-6).unwrap()).unwrap();
        assert!((weak - noiseless_objective(&h, &t).unwrap()).abs() < 1e-4);
    }
}

#[test]
fn noise_contracts_toward_mean_cut() {
    let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
    let h = Arc::new(maxcut_hamiltonian(&g).unwrap());
    let centre = g.num_edges() as f64 / 2.0;
    let mut rng = substream(10, Stream::Custom(0));
    for &q in &[0.01, 0.05, 0.1] {
        let ch = PauliChannel::symmetric(q).unwrap();
        for _ in 0..10 {
            let t = random_theta(&mut rng, 1);
            let f = noiseless_objective(&h, &t).unwrap();
            let fq = noisy_objective(&h, &t, &ch).unwrap();
            assert!((fq - centre).abs() <= (f - centre).abs() + 1e-12);
        }
    }
}

#[test]
fn noisy_budget() {
    let g = ring_graph(13).unwrap();
    let h = Arc::new(maxcut_hamiltonian::<f64>(&g).unwrap());
    let err = noisy_objective(&h, &[0.1, 0.2], &PauliChannel::symmetric(0.01).unwrap()).unwrap_err();
    assert!(matches!(err, crate::error::Error::BudgetExceeded(_)));
}

#[test]
fn single_precision_matches_double() {
    let h32 = Arc::new(maxcut_hamiltonian::<f32>(&ring_graph(4).unwrap()).unwrap());
    let f32v = noiseless_objective(&h32, &[0.6_f32, 0.4]).unwrap();
    let f64v = noiseless_objective(&cycle4(), &[0.6, 0.4]).unwrap();
    assert!((f32v as f64 - f64v).abs() < 1e-5);
}

use std::convert::Infallible;

use hivqe_core::spsa::{propose_params, SpsaSettings};

fn quadratic(target: &[f64]) -> impl Fn(&[f64]) -> Result<f64, Infallible> + '_ {
    move |th: &[f64]| Ok(th.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum())
}

fn optimize(seed: u64, settings: &SpsaSettings, steps: usize) -> Vec<Vec<f64>> {
    let target = [0.7, -0.3, 1.1, 0.2];
    let cost = quadratic(&target);
    let mut theta = vec![0.0; 4];
    let mut history = vec![(theta.clone(), cost(&theta).unwrap())];
    let mut traj = vec![theta.clone()];
    for _ in 0..steps {
        theta = propose_params(&history, settings, seed, &cost).unwrap();
        history.push((theta.clone(), cost(&theta).unwrap()));
        traj.push(theta.clone());
    }
    traj
}

#[test]
fn quadratic_converges() {
    let settings = SpsaSettings {
        a: 0.5,
        ..SpsaSettings::default()
    };
    let traj = optimize(3, &settings, 300);
    let last = traj.last().unwrap();
    let target = [0.7, -0.3, 1.1, 0.2];
    for (x, t) in last.iter().zip(target) {
        assert!((x - t).abs() < 1e-2, "{last:?}");
    }
}

#[test]
fn trajectory_is_seeded() {
    let s = SpsaSettings::default();
    assert_eq!(optimize(11, &s, 30), optimize(11, &s, 30));
    assert_ne!(optimize(11, &s, 30), optimize(12, &s, 30));
}

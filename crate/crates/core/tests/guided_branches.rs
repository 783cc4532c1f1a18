//! Drives the guided loop with a scripted estimator so every branch fires at
//! a known evaluation.

mod common;

use std::f64::consts::FRAC_PI_4;

use common::Scripted;

use lattice_vqe::circuit::{efficient_su2, Circuit, Entanglement};
use lattice_vqe::hamiltonians::Model;
use lattice_vqe::lattice::line_lattice;
use lattice_vqe::sim::EstimatorConfig;
use lattice_vqe::vqe::{guided_vqe, guided_vqe_with, GuidedVqeConfig, VqeResult, WarmStart};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dimer_config(expected: Option<f64>) -> (GuidedVqeConfig, Circuit) {
    let mut cfg = GuidedVqeConfig::new(Model::heisenberg(), line_lattice(2, false, 1.0).unwrap());
    cfg.expected_energy = expected;
    cfg.seed = 17;
    cfg.optimizer_max_iter = 2;
    cfg.max_recursions = 0;
    (cfg, efficient_su2(2, 1, Entanglement::Linear).unwrap())
}

fn run(cfg: &GuidedVqeConfig, c: &Circuit, est: &mut Scripted) -> VqeResult {
    guided_vqe_with(cfg, c, est, None).unwrap()
}

fn approx(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
}

#[test]
fn bias_applies_two_evaluations_later() {
    let (cfg, c) = dimer_config(Some(-10.0));
    // eval 0 undershoots by 15 > 10
    let mut est = Scripted::new(&[-25.0, -5.0]);
    let r = run(&cfg, &c, &mut est);
    assert!(
        approx(&est.weights[..4], &[1.6, 1.6, 1.35, 1.35]),
        "{:?}",
        est.weights
    );
    assert!((r.final_weight - 1.35).abs() < 1e-12);
    assert_eq!(r.rebuilds, 1);
    let traced: Vec<f64> = r.trace.iter().map(|p| p.weight).collect();
    assert!(approx(&traced, &est.weights));
}

#[test]
fn bias_respects_trigger_and_floor() {
    let (cfg, c) = dimer_config(Some(-10.0));
    // undershoot of exactly 10 does not trigger
    let mut est = Scripted::new(&[-20.0]);
    let r = run(&cfg, &c, &mut est);
    assert_eq!(r.rebuilds, 0);
    assert!(est.weights.iter().all(|w| (w - 1.6).abs() < 1e-12));

    // persistent undershoot walks 1.6 -> 1.35 -> 1.10 -> 0.85 and stops
    let mut est = Scripted::new(&[-30.0]);
    let r = run(&cfg, &c, &mut est);
    assert!(
        approx(&est.weights[..6], &[1.6, 1.6, 1.35, 1.1, 0.85, 0.85]),
        "{:?}",
        est.weights
    );
    assert!((r.final_weight - 0.85).abs() < 1e-12);
    assert_eq!(r.rebuilds, 3);

    // overshooting values (above the target) never bias
    let mut est = Scripted::new(&[50.0]);
    assert_eq!(run(&cfg, &c, &mut est).rebuilds, 0);
}

#[test]
fn early_stop_freezes_evaluations() {
    let (mut cfg, c) = dimer_config(Some(-10.0));
    cfg.optimizer_max_iter = 50;
    cfg.max_recursions = 5;
    let mut est = Scripted::new(&[-5.0, -5.0, -9.95, -1.0]);
    let r = run(&cfg, &c, &mut est);
    assert!(r.task_done);
    assert_eq!(est.calls, 3);
    assert_eq!(r.evaluations, 3);
    assert_eq!(r.value, -9.95);
    assert_eq!(r.recursions_used, 0);
    assert!((r.relative_error_pct.unwrap() - 0.5).abs() < 1e-9);

    // threshold is inclusive
    let mut est = Scripted::new(&[-9.9]);
    let r = run(&cfg, &c, &mut est);
    assert!(r.task_done);
    assert_eq!(est.calls, 1);
}

#[test]
fn recursion_moves_weight_by_delta_rule() {
    // delta = 8 - 10 = -2: weight += 2/100 + 0.3
    let (mut cfg, c) = dimer_config(Some(-10.0));
    cfg.max_recursions = 1;
    let mut est = Scripted::new(&[-8.0]);
    let r = run(&cfg, &c, &mut est);
    assert_eq!(r.recursions_used, 1);
    assert!((r.final_weight - 1.92).abs() < 1e-12);
    let per_pass = r.evaluations / 2;
    assert!(approx(&est.weights[per_pass..per_pass + 1], &[1.92]));
    assert_eq!(r.rebuilds, 1);

    // delta = 12 - 10 = +2 (below the bias trigger): weight -= 0.32
    let mut est = Scripted::new(&[-12.0]);
    let r = run(&cfg, &c, &mut est);
    assert!((r.final_weight - 1.28).abs() < 1e-12);
}

#[test]
fn recursion_is_capped_at_five() {
    let (mut cfg, c) = dimer_config(Some(-10.0));
    cfg.max_recursions = 5;
    let mut est = Scripted::new(&[-8.0]);
    let r = run(&cfg, &c, &mut est);
    assert_eq!(r.recursions_used, 5);
    assert!((r.final_weight - (1.6 + 5.0 * 0.32)).abs() < 1e-9);
    // six optimizer passes of equal length: 1 fresh + 2 + 2 + final
    assert_eq!(r.evaluations, 6 * 6);
    assert!(!r.task_done);
}

#[test]
fn initial_point_is_quarter_pi_scaled_and_reused() {
    let (mut cfg, c) = dimer_config(Some(-10.0));
    cfg.max_recursions = 2;
    let mut est = Scripted::new(&[-8.0]);
    let r = run(&cfg, &c, &mut est);

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let want: Vec<f64> = (0..c.num_parameters())
        .map(|_| FRAC_PI_4 * rng.gen::<f64>())
        .collect();
    assert_eq!(r.initial_point, want);
    assert!(want.iter().all(|x| (0.0..FRAC_PI_4).contains(x)));
    // every pass starts from the same point
    let per_pass = r.evaluations / 3;
    for pass in 0..3 {
        assert_eq!(est.params[pass * per_pass], want);
    }

    // final-point warm start continues from the previous optimum
    cfg.warm_start = WarmStart::FinalPoint;
    let mut est = Scripted::new(&[-8.0]);
    let r = run(&cfg, &c, &mut est);
    assert_eq!(est.params[0], r.initial_point);
    assert_eq!(
        est.params[r.evaluations / 3],
        est.params[r.evaluations / 3 - 1]
    );
}

#[test]
fn explicit_initial_point_is_used() {
    let (mut cfg, c) = dimer_config(None);
    let x0 = vec![0.5; c.num_parameters()];
    cfg.initial_point = Some(x0.clone());
    let mut est = Scripted::new(&[-1.0]);
    let r = run(&cfg, &c, &mut est);
    assert_eq!(r.initial_point, x0);
    cfg.initial_point = Some(vec![0.5; 3]);
    assert!(guided_vqe_with(&cfg, &c, &mut Scripted::new(&[0.0]), None).is_err());
}

#[test]
fn no_target_means_no_guidance() {
    let (mut cfg, c) = dimer_config(None);
    cfg.max_recursions = 5;
    let mut est = Scripted::new(&[-100.0]);
    let r = run(&cfg, &c, &mut est);
    assert_eq!(r.rebuilds, 0);
    assert_eq!(r.recursions_used, 0);
    assert_eq!(r.relative_error_pct, None);
    assert!(!r.task_done);
    assert!(r.trace.iter().all(|p| p.weight == 1.6));
}

#[test]
fn zero_target_biases_but_never_finishes() {
    let (mut cfg, c) = dimer_config(Some(0.0));
    cfg.max_recursions = 5;
    let mut est = Scripted::new(&[-20.0, 0.0]);
    let r = run(&cfg, &c, &mut est);
    // |−20| − 0 > 10 triggers the bias; the error check is skipped
    assert_eq!(r.rebuilds, 1);
    assert!(!r.task_done);
    assert_eq!(r.recursions_used, 0);
    assert_eq!(r.relative_error_pct, None);
}

#[test]
fn callback_sees_every_fresh_value() {
    let (cfg, c) = dimer_config(Some(-10.0));
    let mut seen = Vec::new();
    let mut cb = |i: usize, v: f64| seen.push((i, v));
    let mut est = Scripted::new(&[-3.0, -4.0, -5.0]);
    let r = guided_vqe_with(&cfg, &c, &mut est, Some(&mut cb)).unwrap();
    assert_eq!(seen.len(), r.evaluations);
    assert_eq!(seen[..3], [(0, -3.0), (1, -4.0), (2, -5.0)]);
}

#[test]
fn dimer_reaches_singlet_with_exact_estimator() {
    let mut cfg = GuidedVqeConfig::new(Model::heisenberg(), line_lattice(2, false, 1.0).unwrap());
    cfg.initial_weight = 1.0;
    cfg.optimizer_max_iter = 200;
    cfg.estimator = EstimatorConfig::exact();
    cfg.seed = 1;
    let c = efficient_su2(2, 2, Entanglement::Linear).unwrap();
    let r = guided_vqe(&cfg, &c, None).unwrap();
    assert!((r.value + 3.0).abs() < 1e-6, "{}", r.value);

    // with a target the run stops as soon as it is within 1%
    cfg.expected_energy = Some(-3.0);
    let guided = guided_vqe(&cfg, &c, None).unwrap();
    assert!(guided.task_done);
    assert!(guided.relative_error_pct.unwrap() <= 1.0);
    assert!(guided.evaluations < r.evaluations);
}

#[test]
fn seeded_runs_repeat_exactly() {
    let mut cfg = GuidedVqeConfig::new(Model::heisenberg(), line_lattice(4, true, 1.0).unwrap());
    cfg.expected_energy = Some(-8.0);
    cfg.optimizer_max_iter = 40;
    cfg.estimator = EstimatorConfig::shots(64, 3);
    cfg.seed = 4;
    let c = efficient_su2(4, 1, Entanglement::Linear).unwrap();
    let a = guided_vqe(&cfg, &c, None).unwrap();
    let b = guided_vqe(&cfg, &c, None).unwrap();
    assert_eq!(a, b);
}

mod common;

use common::{gd_trajectory, Outer, Toy};
use fcco_core::data::gen_ranking;
use fcco_core::objectives::{make_ap_problem, make_pnorm_push_problem, SurrogateLoss};
use fcco_core::optim::{
    bsgd_run, moap_run, pd_sox_run, project_ball, sox_boost_run, sox_run, soap_run, BoostConfig, Estimator, Method,
    PdSoxConfig, RunState, SoxConfig,
};
use fcco_core::verify::reference_gd;
use fcco_core::{full_objective, g_batch, rng_from_seed, BatchSpec, Error, FccoProblem, TrackerTable};
use proptest::prelude::*;

fn trajectory<P: FccoProblem>(method: &Method, problem: &P, w0: &[f64], seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    method.run(problem, w0, &mut rng_from_seed(seed), &mut |_, w| out.push(w.to_vec())).unwrap();
    out
}

#[test]
fn sox_with_identity_outer_is_gradient_descent() {
    let toy = Toy::new(5, 3, true, Outer::Identity);
    let batch = BatchSpec::new(5, 2);
    // every inner set must be fully covered for the step to be exact
    let toy = Toy { offset: toy.offset.iter().map(|r| r[..2].to_vec()).collect(), coef: toy.coef.iter().map(|r| r[..2].to_vec()).collect(), curvature: toy.curvature.iter().map(|r| r[..2].to_vec()).collect(), ..toy };
    let w0 = [0.1, -0.2, 0.3];
    let cfg = SoxConfig::new(0.05, 1.0, 30, batch).with_beta(1.0).without_decay();
    let sox = trajectory(&Method::Sox(cfg), &toy, &w0, 3);
    assert_eq!(sox, gd_trajectory(&toy, &w0, 0.05, 30));
}

#[test]
fn zero_step_size_freezes_parameters() {
    let toy = Toy::new(4, 2, true, Outer::Square);
    let w0 = [0.4, -0.7];
    let cfg = SoxConfig::new(0.0, 0.5, 20, BatchSpec::new(2, 1));
    let out = sox_run(&toy, &w0, &cfg, &mut rng_from_seed(1)).unwrap();
    assert_eq!(&out.w[..], &w0);
    assert!((0..4).any(|i| out.tracker.is_initialized(i)));
}

#[test]
fn bsgd_full_batch_matches_gradient_descent() {
    let toy = Toy::new(4, 3, true, Outer::Square);
    let sizes: Vec<usize> = (0..4).map(|i| toy.inner_size(i)).collect();
    let min = *sizes.iter().min().unwrap();
    let toy = Toy {
        offset: toy.offset.iter().map(|r| r[..min].to_vec()).collect(),
        coef: toy.coef.iter().map(|r| r[..min].to_vec()).collect(),
        curvature: toy.curvature.iter().map(|r| r[..min].to_vec()).collect(),
        ..toy
    };
    let w0 = [0.2, 0.1, -0.3];
    let cfg = SoxConfig::new(0.02, 1.0, 50, BatchSpec::full(&toy)).without_decay();
    let bsgd = trajectory(&Method::Bsgd(cfg), &toy, &w0, 9);
    for (a, b) in bsgd.iter().zip(gd_trajectory(&toy, &w0, 0.02, 50)) {
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn soap_with_unit_gamma_is_bsgd() {
    let toy = Toy::new(6, 2, true, Outer::Square);
    let cfg = SoxConfig::new(0.05, 1.0, 40, BatchSpec::new(3, 2));
    let w0 = [0.3, -0.1];
    assert_eq!(trajectory(&Method::Soap(cfg.clone()), &toy, &w0, 11), trajectory(&Method::Bsgd(cfg), &toy, &w0, 11));
}

#[test]
fn soap_ignores_beta() {
    let toy = Toy::new(6, 2, true, Outer::Square);
    let w0 = [0.3, -0.1];
    let a = SoxConfig::new(0.05, 0.3, 40, BatchSpec::new(3, 2)).with_beta(0.1);
    let b = a.clone().with_beta(0.9);
    assert_eq!(trajectory(&Method::Soap(a), &toy, &w0, 4), trajectory(&Method::Soap(b), &toy, &w0, 4));
}

#[test]
fn soap_first_step_by_hand() {
    // Two outer indices, each with two inner items; full batch so the step is fixed.
    let toy = Toy::new(2, 2, true, Outer::Square);
    let toy = Toy {
        offset: toy.offset.iter().map(|r| r[..2].to_vec()).collect(),
        coef: toy.coef.iter().map(|r| r[..2].to_vec()).collect(),
        curvature: toy.curvature.iter().map(|r| r[..2].to_vec()).collect(),
        ..toy
    };
    let w0 = [0.5, -0.25];
    let (eta, gamma) = (0.1, 0.4);
    let cfg = SoxConfig::new(eta, gamma, 1, BatchSpec::new(2, 2)).without_decay();
    let out = soap_run(&toy, &w0, &cfg, &mut rng_from_seed(0)).unwrap();

    let mut expected = w0.to_vec();
    for i in 0..2 {
        // first touch sets u = ĝ, then ∇f(u) = 2u
        let u: f64 = (0..2).map(|j| {
            let s: f64 = toy.coef[i][j].iter().zip(&w0).map(|(c, x)| c * x).sum();
            toy.offset[i][j] + s + 0.5 * toy.curvature[i][j] * s * s
        }).sum::<f64>() / 2.0;
        for j in 0..2 {
            let s: f64 = toy.coef[i][j].iter().zip(&w0).map(|(c, x)| c * x).sum();
            let k = 2.0 * u * (1.0 + toy.curvature[i][j] * s) / 2.0 / 2.0;
            for (e, c) in expected.iter_mut().zip(&toy.coef[i][j]) {
                *e -= eta * k * c;
            }
        }
        assert!((out.tracker.row(i).unwrap()[0] - u).abs() < 1e-15);
    }
    for (a, b) in out.w.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-14, "{a} vs {b}");
    }
    assert_eq!(out.records[0].inner_oracles, 4);
}

#[test]
fn moap_unsampled_row_decays_geometrically() {
    let toy = Toy::new(4, 2, false, Outer::Square);
    let gamma = 0.3;
    let mut state = RunState::new(&toy, &[0.1, 0.2], gamma, 0.1).unwrap();
    state.tracker = TrackerTable::from_rows(vec![5.0, 1.0, 1.0, 1.0], 1, gamma).unwrap();
    for _ in 0..10 {
        state.step_on(&toy, Estimator::Moap, 0.01, &[1, 2], &[vec![0], vec![1]]).unwrap();
    }
    let expected = 5.0 * 0.7f64.powi(10);
    assert!((state.tracker.row(0).unwrap()[0] - expected).abs() <= 1e-15 * expected);
    assert_eq!(state.decay_touches, 20);
    assert_eq!(state.inner_oracles, 20);
}

#[test]
fn moap_full_outer_unit_gamma_matches_soap_table() {
    let toy = Toy::new(3, 2, true, Outer::Square);
    let mut moap = RunState::new(&toy, &[0.1, 0.2], 1.0, 0.1).unwrap();
    let mut soap = moap.clone();
    let inner = vec![vec![0], vec![1], vec![0, 1]];
    moap.step_on(&toy, Estimator::Moap, 0.0, &[0, 1, 2], &inner).unwrap();
    soap.step_on(&toy, Estimator::Soap, 0.0, &[0, 1, 2], &inner).unwrap();
    assert_eq!(moap.tracker.as_slice(), soap.tracker.as_slice());
    for (i, b) in inner.iter().enumerate() {
        assert_eq!(moap.tracker.row(i).unwrap(), &g_batch(&toy, &[0.1, 0.2], i, b).unwrap()[..]);
    }
}

#[test]
fn moap_and_sox_part_ways() {
    let toy = Toy::new(6, 2, true, Outer::Square);
    let w0 = [0.3, -0.1];
    let cfg = SoxConfig::new(0.05, 0.5, 30, BatchSpec::new(2, 2));
    let sox = trajectory(&Method::Sox(cfg.clone()), &toy, &w0, 2);
    let moap = trajectory(&Method::Moap(cfg), &toy, &w0, 2);
    assert_ne!(sox, moap);
}

#[test]
fn bsgd_records_oracles_per_step() {
    let toy = Toy::new(6, 2, true, Outer::Square);
    let cfg = SoxConfig::new(0.01, 1.0, 7, BatchSpec::new(3, 2));
    let out = bsgd_run(&toy, &[0.0, 0.0], &cfg, &mut rng_from_seed(0)).unwrap();
    for (t, r) in out.records.iter().enumerate() {
        assert_eq!(r.iteration, t + 1);
        assert_eq!(r.inner_oracles, 6 * (t as u64 + 1));
        assert_eq!(r.decay_touches, 0);
    }
    let out = moap_run(&toy, &[0.0, 0.0], &cfg, &mut rng_from_seed(0)).unwrap();
    assert_eq!(out.records.last().unwrap().decay_touches, 21);
}

#[test]
fn step_size_schedule() {
    let cfg = SoxConfig::new(1.0, 0.5, 100, BatchSpec::new(1, 1));
    assert_eq!(cfg.step_size(1), 1.0);
    assert_eq!(cfg.step_size(50), 1.0);
    assert!((cfg.step_size(51) - 0.1).abs() < 1e-15);
    assert!((cfg.step_size(76) - 0.01).abs() < 1e-15);
    assert!(cfg.clone().with_lr_decay(vec![(0.5, 0.1), (0.4, 0.1)]).validate().is_err());
    assert!(SoxConfig::new(1.0, 0.0, 10, BatchSpec::new(1, 1)).validate().is_err());
}

#[test]
fn boost_with_one_stage_is_sox() {
    let toy = Toy::new(6, 2, true, Outer::Square);
    let w0 = [0.3, -0.1];
    let batch = BatchSpec::new(2, 2);
    let boost = BoostConfig { stages: 1, eta1: 0.05, beta1: 0.2, gamma1: 0.6, iters1: 40, batch, mu_reg: 0.0 };
    let sox = SoxConfig::new(0.05, 0.6, 40, batch).with_beta(0.2).without_decay();
    let a = sox_boost_run(&toy, &w0, &boost, &mut rng_from_seed(8)).unwrap();
    let b = sox_run(&toy, &w0, &sox, &mut rng_from_seed(8)).unwrap();
    assert_eq!(a.w, b.w);
    assert_eq!(a.stage_ends.len(), 1);
}

#[test]
fn boost_schedule_arithmetic() {
    let cfg = BoostConfig {
        stages: 3,
        eta1: 0.1,
        beta1: 0.8,
        gamma1: 1.0,
        iters1: 100,
        batch: BatchSpec::new(1, 1),
        mu_reg: 0.0,
    };
    let s3 = cfg.stage(3);
    assert!((s3.eta - 0.025).abs() < 1e-15);
    assert_eq!(s3.iters, 400);
    assert!((s3.beta - 0.2).abs() < 1e-15);
    assert!((s3.gamma - 0.25).abs() < 1e-15);
    assert_eq!(cfg.total_iters(), 700);
}

#[test]
fn boost_records_stages_in_order() {
    let toy = Toy::new(6, 2, true, Outer::Square);
    let cfg = BoostConfig {
        stages: 3,
        eta1: 0.05,
        beta1: 0.5,
        gamma1: 0.5,
        iters1: 5,
        batch: BatchSpec::new(2, 2),
        mu_reg: 1e-2,
    };
    let out = sox_boost_run(&toy, &[0.0, 0.0], &cfg, &mut rng_from_seed(1)).unwrap();
    assert_eq!(out.records.len(), 35);
    assert_eq!(out.stage_ends.len(), 3);
    assert!(out.records.windows(2).all(|p| p[1].iteration == p[0].iteration + 1 && p[1].stage >= p[0].stage));
    assert_eq!(out.records[5].stage, 2);
    assert!((out.records[5].step_size - 0.025).abs() < 1e-15);
}

#[test]
fn pd_sox_respects_ball_and_averages() {
    let toy = Toy::new(6, 2, false, Outer::Identity);
    let cfg = PdSoxConfig { eta: 5.0, tau: 1.0, iters: 20, batch: BatchSpec::new(2, 2), radius: Some(0.5) };
    let mut iterates = Vec::new();
    let out = Method::PdSox(cfg.clone())
        .run(&toy, &[3.0, 4.0], &mut rng_from_seed(2), &mut |_, w| iterates.push(w.to_vec()))
        .unwrap();
    assert!(out.w.norm() <= 0.5 + 1e-12);
    // average of the iterates entering each step: the projected start, then w^1..w^{T-1}
    let mut avg = vec![0.3, 0.4];
    for w in &iterates[..19] {
        avg[0] += w[0];
        avg[1] += w[1];
    }
    let w_avg = out.w_avg.unwrap();
    for (a, b) in w_avg.iter().zip(&avg) {
        assert!((a - b / 20.0).abs() < 1e-12);
    }
}

#[test]
fn pd_sox_with_huge_tau_completes() {
    let toy = Toy::new(6, 2, false, Outer::Identity);
    let cfg = PdSoxConfig { eta: 0.01, tau: 1e12, iters: 30, batch: BatchSpec::new(3, 1), radius: None };
    let out = pd_sox_run(&toy, &[0.0, 0.0], &cfg, &mut rng_from_seed(3)).unwrap();
    assert_eq!(out.records.len(), 30);
    assert!(out.w.is_finite());
}

#[test]
fn pd_sox_rejects_unsuitable_problems() {
    let cfg = PdSoxConfig { eta: 0.01, tau: 1.0, iters: 3, batch: BatchSpec::new(1, 1), radius: None };
    let mut rng = rng_from_seed(0);
    let data = gen_ranking(3, 3, 2, 1.0, 1.0, &mut rng).unwrap();
    let ap = make_ap_problem(data, SurrogateLoss::default());
    assert_eq!(pd_sox_run(&ap, &[0.0, 0.0], &cfg, &mut rng).unwrap_err(), Error::ScalarInnerRequired);
    let toy = Toy::new(3, 2, false, Outer::Square);
    assert_eq!(pd_sox_run(&toy, &[0.0, 0.0], &cfg, &mut rng).unwrap_err(), Error::NotMonotoneConvex);
    assert_eq!(Method::PdSox(cfg).validate_for(&ap).unwrap_err(), Error::ScalarInnerRequired);
}

#[test]
fn aborted_runs_name_the_iteration() {
    let toy = Toy::new(3, 2, true, Outer::Square);
    let cfg = SoxConfig::new(1e6, 0.5, 50, BatchSpec::new(3, 2)).with_beta(1.0).without_decay();
    match sox_run(&toy, &[1.0, 1.0], &cfg, &mut rng_from_seed(0)) {
        Err(Error::Aborted { iteration, .. }) => assert!(iteration >= 1),
        other => panic!("expected abort, got {other:?}"),
    }
}

#[test]
fn bad_initial_point_rejected() {
    let toy = Toy::new(3, 2, true, Outer::Square);
    let cfg = SoxConfig::new(0.1, 0.5, 5, BatchSpec::new(1, 1));
    let mut rng = rng_from_seed(0);
    assert!(matches!(sox_run(&toy, &[1.0], &cfg, &mut rng), Err(Error::LengthMismatch { .. })));
    assert!(matches!(sox_run(&toy, &[f64::NAN, 0.0], &cfg, &mut rng), Err(Error::NonFinite { .. })));
    let too_big = SoxConfig::new(0.1, 0.5, 5, BatchSpec::new(4, 1));
    assert!(sox_run(&toy, &[0.0, 0.0], &too_big, &mut rng).is_err());
}

#[test]
fn sox_on_small_pnorm_push_approaches_optimum() {
    let data = gen_ranking(4, 4, 3, 1.0, 1.0, &mut rng_from_seed(7)).unwrap();
    let problem = make_pnorm_push_problem(data, 4.0, SurrogateLoss::Exponential).unwrap();
    let w0 = [0.0; 3];
    let reference = reference_gd(&problem, &w0, 0.1, 20_000, true).unwrap();
    let cfg = SoxConfig::new(0.1, 0.9, 200, BatchSpec::new(2, 2));
    let out = sox_run(&problem, &w0, &cfg, &mut rng_from_seed(7)).unwrap();
    let f0 = full_objective(&problem, &w0).unwrap();
    let f = full_objective(&problem, &out.w).unwrap();
    assert!(f < f0);
    assert!(f - reference.f_best <= 1e-2, "gap {}", f - reference.f_best);
}

proptest! {
    #[test]
    fn ball_projection(w in prop::collection::vec(-10.0f64..10.0, 1..6), r in 0.1f64..5.0) {
        let mut p = w.clone();
        project_ball(&mut p, r);
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(norm <= r * (1.0 + 1e-12));
        let mut twice = p.clone();
        project_ball(&mut twice, r);
        for (a, b) in twice.iter().zip(&p) {
            prop_assert!((a - b).abs() <= 1e-12 * r);
        }
        // direction preserved
        let dot: f64 = w.iter().zip(&p).map(|(a, b)| a * b).sum();
        prop_assert!(dot >= 0.0);
    }

    #[test]
    fn sox_runs_are_reproducible(seed in any::<u64>()) {
        let toy = Toy::new(5, 2, true, Outer::Square);
        let cfg = SoxConfig::new(0.02, 0.5, 15, BatchSpec::new(2, 1));
        let a = sox_run(&toy, &[0.1, 0.1], &cfg, &mut rng_from_seed(seed)).unwrap();
        let b = sox_run(&toy, &[0.1, 0.1], &cfg, &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(a.w, b.w);
        prop_assert_eq!(a.records, b.records);
    }
}

mod common;

use approx::assert_abs_diff_eq;
use ndarray::Array2;
use rand::Rng;

use common::*;
use rgnn::data::{make_splits, normalize_features, synthetic, Dataset};
use rgnn::gnn::{init_params, GnnParams, LabeledTargets, Split};
use rgnn::graph::{gso_distance_l1, project_gso, rewire_edges, sparsity_penalty, Gso};
use rgnn::metrics::accuracy;
use rgnn::robust::{
    denoise_gso_step, fit_theta_step, gso_gradient_bound, objective, prox_l1, prox_shifted_l1, train_classical,
    train_robust, Architecture, Hyperparams, ProxMask,
};

fn small_hp(n: usize) -> Hyperparams {
    Hyperparams {
        t_max: 3,
        step1_epochs: 10,
        ..Hyperparams::for_nodes(n)
    }
}

/// Random small problem with a feasible observed graph.
fn instance(seed: u64, n: usize) -> (Array2<f64>, Gso, GnnParams, LabeledTargets) {
    let mut r = rng(seed);
    let x = uniform_matrix(&mut r, n, 4, -1.0, 1.0);
    let s = random_weighted_gso(&mut r, n);
    let theta = random_params(&mut r, &[4, 5, 3], 3, 0.8);
    let t = random_targets(&mut r, n, 3, 0.6);
    (x, s, theta, t)
}

fn demo(nodes: usize, seed: u64) -> (Dataset, LabeledTargets) {
    let mut d = synthetic::generate(&synthetic::SyntheticSpec {
        nodes,
        seed,
        ..Default::default()
    })
    .unwrap();
    d.features = normalize_features(&d.features);
    let t = make_splits(&d.targets, [0.48, 0.32, 0.20], seed).unwrap();
    (d, t)
}

#[test]
fn prox_maps_match_fine_grid() {
    let mut r = rng(12);
    let x = uniform_matrix(&mut r, 6, 6, -2.0, 2.0);
    let sbar = uniform_matrix(&mut r, 6, 6, 0.0, 1.0);
    let thr = 0.35;
    let a = prox_l1(x.view(), thr).unwrap();
    let b = prox_shifted_l1(x.view(), sbar.view(), thr, None).unwrap();
    for ((i, j), &v) in x.indexed_iter() {
        let grid = |f: &dyn Fn(f64) -> f64| {
            (0..=60_000)
                .map(|k| -3.0 + k as f64 * 1e-4)
                .min_by(|p, q| f(*p).total_cmp(&f(*q)))
                .unwrap()
        };
        let u1 = grid(&|u| 0.5 * (u - v).powi(2) + thr * u.abs());
        let u2 = grid(&|u| 0.5 * (u - v).powi(2) + thr * (u - sbar[[i, j]]).abs());
        assert!((u1 - a[[i, j]]).abs() < 1e-3);
        assert!((u2 - b[[i, j]]).abs() < 1e-3);
        assert!(
            ((b[[i, j]] - sbar[[i, j]]) - prox_l1(ndarray::arr2(&[[v - sbar[[i, j]]]]).view(), thr).unwrap()[[0, 0]])
                .abs()
                < 1e-15
        );
    }
}

#[test]
fn zero_step_leaves_graph_unchanged() {
    for seed in 0..5 {
        let (x, s, theta, t) = instance(seed, 8);
        let sbar = rewire_edges(&random_graph(&mut rng(seed), 8, 0.4), 0.3, seed)
            .unwrap()
            .0;
        let hp = Hyperparams {
            eta: 0.0,
            ..small_hp(8)
        };
        assert_eq!(denoise_gso_step(&s, &sbar, x.view(), &theta, &t, &hp).unwrap(), s);
    }
}

#[test]
fn dominant_distance_snaps_to_observation() {
    for seed in 0..5 {
        let (x, _, theta, t) = instance(seed, 8);
        let sbar = random_weighted_gso(&mut rng(seed + 50), 8);
        let bound = gso_gradient_bound(sbar.view(), x.view(), &theta, &t).unwrap();
        let hp = Hyperparams {
            lambda: 0.0,
            alpha: 2.0 * bound + 1e-3,
            tau_max: 1,
            ..small_hp(8)
        };
        // Start anywhere feasible; one step from the observation lands back on it.
        let out = denoise_gso_step(&sbar, &sbar, x.view(), &theta, &t, &hp).unwrap();
        assert_eq!(out, project_gso(sbar.view(), &hp.constraint).unwrap());
    }
}

fn total(theta: &GnnParams, s: &Gso, sbar: &Gso, x: &Array2<f64>, t: &LabeledTargets, hp: &Hyperparams) -> f64 {
    objective(theta, s, sbar, x.view(), t, hp).unwrap().total
}

#[test]
fn small_steps_descend() {
    for seed in 0..20 {
        let (x, s, theta, t) = instance(100 + seed, 8);
        let sbar = random_weighted_gso(&mut rng(200 + seed), 8);
        let mut hp = Hyperparams {
            alpha: 0.05,
            lambda: 0.05,
            tau_max: 1,
            ..small_hp(8)
        };
        let before = total(&theta, &s, &sbar, &x, &t, &hp);
        // Backtracking in the oracle only: halve eta until the step is a descent step.
        let mut descended = false;
        for _ in 0..30 {
            let out = denoise_gso_step(&s, &sbar, x.view(), &theta, &t, &hp).unwrap();
            if total(&theta, &out, &sbar, &x, &t, &hp) <= before {
                descended = true;
                break;
            }
            hp.eta *= 0.5;
        }
        assert!(descended, "seed {seed}");
    }
}

#[test]
fn denoised_iterates_are_feasible() {
    let (x, s, theta, t) = instance(7, 8);
    let sbar = random_weighted_gso(&mut rng(8), 8);
    let hp = Hyperparams {
        eta: 5.0,
        tau_max: 4,
        ..small_hp(8)
    };
    let out = denoise_gso_step(&s, &sbar, x.view(), &theta, &t, &hp).unwrap();
    let m = out.entries();
    for i in 0..8 {
        assert_eq!(m[[i, i]], 0.0);
        for j in 0..8 {
            assert_eq!(m[[i, j]], m[[j, i]]);
            assert!((0.0..=1.0).contains(&m[[i, j]]));
        }
    }
}

#[test]
fn masked_prior_leaves_outside_block_to_the_gradient() {
    let (x, s, theta, t) = instance(9, 8);
    let sbar = random_weighted_gso(&mut rng(10), 8);
    let mask = ProxMask::from_subset(8, &[0, 1, 2]).unwrap();
    let hp = Hyperparams {
        alpha: 1e6,
        lambda: 0.0,
        tau_max: 1,
        prox_mask: Some(mask),
        ..small_hp(8)
    };
    let out = denoise_gso_step(&s, &sbar, x.view(), &theta, &t, &hp).unwrap();
    let unmasked = Hyperparams {
        alpha: 0.0,
        prox_mask: None,
        ..hp.clone()
    };
    let free = denoise_gso_step(&s, &sbar, x.view(), &theta, &t, &unmasked).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            if i < 3 && j < 3 {
                assert_eq!(out.weight(i, j), sbar.weight(i, j));
            } else {
                assert_eq!(out.weight(i, j), free.weight(i, j));
            }
        }
    }
}

#[test]
fn zero_epochs_keep_weights() {
    let (x, s, theta, t) = instance(3, 8);
    let hp = Hyperparams {
        step1_epochs: 0,
        ..small_hp(8)
    };
    assert_eq!(fit_theta_step(&theta, s.view(), x.view(), &t, &hp).unwrap(), theta);
}

#[test]
fn separable_toy_is_fitted() {
    let n = 6;
    let x = Array2::<f64>::eye(n);
    let labels = vec![0, 0, 0, 1, 1, 1];
    let t = LabeledTargets::new(labels, vec![true; n], vec![false; n], vec![false; n], 2).unwrap();
    let s = Gso::from_pairs(n, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
    let theta = init_params(&[n, 8, 2], 2, 4).unwrap();
    let hp = Hyperparams {
        step1_epochs: 500,
        step1_lr: 0.05,
        ..Hyperparams::for_nodes(n)
    };
    let fitted = fit_theta_step(&theta, s.view(), x.view(), &t, &hp).unwrap();
    let loss = train_loss(x.view(), s.view(), &fitted, &t);
    assert!(loss < 0.01, "loss {loss}");
}

#[test]
fn weight_steps_reduce_training_loss() {
    for seed in 0..20 {
        let (x, s, theta, t) = instance(300 + seed, 8);
        let before = train_loss(x.view(), s.view(), &theta, &t);
        let mut lr = 1e-3;
        let mut ok = false;
        for _ in 0..10 {
            let hp = Hyperparams {
                step1_lr: lr,
                step1_epochs: 20,
                ..Hyperparams::for_nodes(8)
            };
            let after = train_loss(
                x.view(),
                s.view(),
                &fit_theta_step(&theta, s.view(), x.view(), &t, &hp).unwrap(),
                &t,
            );
            if after <= before {
                ok = true;
                break;
            }
            lr *= 0.5;
        }
        assert!(ok, "seed {seed}");
    }
}

#[test]
fn exploding_learning_rate_is_reported() {
    let (x, s, theta, t) = instance(5, 8);
    let hp = Hyperparams {
        step1_lr: 1e200,
        step1_epochs: 50,
        ..Hyperparams::for_nodes(8)
    };
    let err = fit_theta_step(&theta, s.view(), x.view(), &t, &hp).unwrap_err();
    assert!(err.to_string().contains("diverged"), "{err}");
}

#[test]
fn one_outer_iteration_without_denoising_is_classical_training() {
    let (d, t) = demo(45, 2);
    let sbar = rewire_edges(&d.adjacency, 0.2, 9).unwrap().0;
    let arch = Architecture::default();
    let hp = Hyperparams {
        t_max: 1,
        tau_max: 0,
        step1_epochs: 60,
        ..Hyperparams::for_nodes(45)
    };
    let res = train_robust(d.features.view(), &t, &sbar, &arch, &hp, 5).unwrap();
    let classical = train_classical(d.features.view(), &t, &sbar, &arch, 60, hp.step1_lr, 5).unwrap();
    assert_eq!(res.theta_hat, classical);
    assert_eq!(res.s_hat, sbar);
    assert_eq!(res.loss_trace().len(), 1);
}

#[test]
fn dominant_distance_reproduces_the_baseline() {
    let (d, t) = demo(45, 3);
    let sbar = rewire_edges(&d.adjacency, 0.1, 1).unwrap().0;
    let arch = Architecture::default();
    let hp = Hyperparams {
        alpha: 1e4,
        lambda: 0.0,
        t_max: 4,
        step1_epochs: 15,
        ..Hyperparams::for_nodes(45)
    };
    let robust = train_robust(d.features.view(), &t, &sbar, &arch, &hp, 8).unwrap();
    let baseline = train_robust(d.features.view(), &t, &sbar, &arch, &hp.baseline(), 8).unwrap();
    assert_eq!(robust.s_hat, project_gso(sbar.view(), &hp.constraint).unwrap());
    assert_eq!(robust.theta_hat, baseline.theta_hat);
}

#[test]
fn training_is_deterministic_and_traced() {
    let (d, t) = demo(40, 4);
    let sbar = rewire_edges(&d.adjacency, 0.2, 3).unwrap().0;
    let hp = small_hp(40);
    let arch = Architecture {
        hidden: vec![8],
        order: 2,
    };
    let a = train_robust(d.features.view(), &t, &sbar, &arch, &hp, 1).unwrap();
    let b = train_robust(d.features.view(), &t, &sbar, &arch, &hp, 1).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trace.len(), hp.t_max);
    assert_eq!(a.objective_terms, a.trace.last().unwrap().terms);
    assert_ne!(a, train_robust(d.features.view(), &t, &sbar, &arch, &hp, 2).unwrap());

    let dir = tempfile::tempdir().unwrap();
    a.save(dir.path()).unwrap();
    let trace = std::fs::read_to_string(dir.path().join("trace.txt")).unwrap();
    assert_eq!(trace.lines().filter(|l| !l.starts_with('#')).count(), hp.t_max);
    let file = std::fs::File::open(dir.path().join("theta.ckpt")).unwrap();
    assert_eq!(
        rgnn::gnn::read_checkpoint(std::io::BufReader::new(file)).unwrap(),
        a.theta_hat
    );
    let file = std::fs::File::open(dir.path().join("s_hat.edges")).unwrap();
    assert_eq!(
        rgnn::graph::read_edge_list(std::io::BufReader::new(file)).unwrap(),
        a.s_hat
    );
}

#[test]
fn objective_terms() {
    let (x, s, theta, t) = instance(1, 8);
    let sbar = random_weighted_gso(&mut rng(2), 8);
    let hp = Hyperparams {
        alpha: 0.3,
        lambda: 0.7,
        ..small_hp(8)
    };
    let o = objective(&theta, &s, &sbar, x.view(), &t, &hp).unwrap();
    assert_abs_diff_eq!(o.fit, train_loss(x.view(), s.view(), &theta, &t), epsilon = 1e-14);
    assert_abs_diff_eq!(o.dist, 0.3 * gso_distance_l1(&s, &sbar).unwrap(), epsilon = 1e-14);
    assert_abs_diff_eq!(o.sparsity, 0.7 * sparsity_penalty(&s), epsilon = 1e-14);
    assert_abs_diff_eq!(o.total, o.fit + o.dist + o.sparsity, epsilon = 1e-14);

    let hp0 = Hyperparams {
        lambda: 0.0,
        ..hp.clone()
    };
    let o = objective(&theta, &s, &s, x.view(), &t, &hp0).unwrap();
    assert_eq!(o.total, o.fit);

    let zero = GnnParams::zeros(&[4, 5, 5], 3).unwrap();
    let t5 = LabeledTargets::new(
        (0..8).map(|i| i % 5).collect(),
        vec![true; 8],
        vec![false; 8],
        vec![false; 8],
        5,
    )
    .unwrap();
    let o = objective(&zero, &s, &s, x.view(), &t5, &hp0).unwrap();
    assert_abs_diff_eq!(o.fit, 5f64.ln(), epsilon = 1e-14);
}

#[test]
fn clean_graph_is_not_damaged() {
    // With no perturbation the robust estimate must stay close to the
    // baseline trained on the same clean graph.
    let arch = Architecture {
        hidden: vec![16],
        order: 3,
    };
    let mut diffs = Vec::new();
    for seed in 0..20u64 {
        let (d, t) = demo(60, 1000 + seed);
        let hp = Hyperparams {
            t_max: 10,
            step1_epochs: 20,
            step1_lr: 0.05,
            ..Hyperparams::for_nodes(60)
        };
        let x = d.features.view();
        let robust = train_robust(x, &t, &d.adjacency, &arch, &hp, seed).unwrap();
        let base = train_robust(x, &t, &d.adjacency, &arch, &hp.baseline(), seed).unwrap();
        let acc = |r: &rgnn::robust::TrainResult| {
            let (logits, _) = rgnn::gnn::forward(x, r.s_hat.view(), &r.theta_hat).unwrap();
            accuracy(logits.view(), &t, t.mask(Split::Test)).unwrap()
        };
        diffs.push(acc(&robust) - acc(&base));
    }
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    assert!(mean.abs() <= 0.03, "mean difference {mean}, {diffs:?}");
}

#[test]
fn invalid_hyperparameters_are_rejected() {
    let (d, t) = demo(30, 0);
    let hp = Hyperparams {
        t_max: 0,
        ..Hyperparams::for_nodes(30)
    };
    assert!(train_robust(d.features.view(), &t, &d.adjacency, &Architecture::default(), &hp, 0).is_err());
    let mut r = rng(0);
    let bad = Hyperparams {
        alpha: -r.random_range(0.1..1.0),
        ..Hyperparams::for_nodes(30)
    };
    assert!(train_robust(d.features.view(), &t, &d.adjacency, &Architecture::default(), &bad, 0).is_err());
}

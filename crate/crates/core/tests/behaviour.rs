use std::process::Command;

use matdom::ga::{self, GaConfig};
use matdom::harness::{rows_from_csv, rows_to_csv, run_benchmark, BenchSpec, Method};
use matdom::woc::{run_crowd, CrowdConfig};
use matdom::{Dims, Instance};

fn grid(n: usize) -> Instance {
    Instance::ones(Dims::square(n).unwrap())
}

#[test]
fn ga_solves_three_by_three() {
    let hits = (0..100)
        .filter(|&seed| {
            let cfg = GaConfig {
                generations: 50,
                seed,
                ..GaConfig::default()
            };
            ga::run(&grid(3), &cfg).unwrap().best.fitness.fitness == 9
        })
        .count();
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn elitism_keeps_best_monotone() {
    for seed in 0..100 {
        let cfg = GaConfig {
            generations: 40,
            population_size: 30,
            seed,
            ..GaConfig::default()
        };
        let h = ga::run(&grid(7), &cfg).unwrap();
        assert!(
            h.records
                .windows(2)
                .all(|w| w[0].best_fitness <= w[1].best_fitness),
            "seed {seed}"
        );
        assert!(h.records.iter().all(|r| r.max_penalty == 0));
    }
}

#[test]
fn repair_off_breaks_constraints() {
    let cfg = GaConfig {
        repair_enabled: false,
        generations: 30,
        seed: 1,
        ..GaConfig::default()
    };
    let h = ga::run(&grid(5), &cfg).unwrap();
    assert!(h.records.iter().any(|r| r.max_penalty > 0));
}

#[test]
fn lone_unbiased_expert_is_plain_ga() {
    let inst = grid(6);
    let cfg = CrowdConfig {
        experts: 1,
        bias: 0.0,
        ga: GaConfig {
            generations: 40,
            ..GaConfig::default()
        },
        master_seed: 17,
        ..CrowdConfig::default()
    };
    let crowd = run_crowd(&inst, &cfg).unwrap();
    let solo = ga::run(&inst, &cfg.expert_config(0)).unwrap();
    assert!(crowd.experts[0].same_trajectory(&solo));
}

#[test]
fn unbiased_experts_are_independent() {
    let inst = grid(7);
    for experts in [2, 4] {
        let cfg = CrowdConfig {
            experts,
            bias: 0.0,
            ga: GaConfig {
                generations: 30,
                population_size: 40,
                ..GaConfig::default()
            },
            master_seed: 5,
            ..CrowdConfig::default()
        };
        let crowd = run_crowd(&inst, &cfg).unwrap();
        for (i, e) in crowd.experts.iter().enumerate() {
            assert!(e.same_trajectory(&ga::run(&inst, &cfg.expert_config(i)).unwrap()));
        }
    }
}

#[test]
fn crowd_solves_three_by_three() {
    let hits = (0..100)
        .filter(|&master_seed| {
            let cfg = CrowdConfig {
                master_seed,
                ga: GaConfig {
                    generations: 50,
                    ..GaConfig::default()
                },
                ..CrowdConfig::default()
            };
            run_crowd(&grid(3), &cfg).unwrap().best.fitness.fitness == 9
        })
        .count();
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn crowd_best_dominates_experts() {
    for master_seed in 0..10 {
        let cfg = CrowdConfig {
            master_seed,
            ga: GaConfig {
                generations: 20,
                population_size: 30,
                ..GaConfig::default()
            },
            ..CrowdConfig::default()
        };
        let h = run_crowd(&grid(9), &cfg).unwrap();
        let top = h
            .experts
            .iter()
            .map(|e| e.best.fitness.fitness)
            .max()
            .unwrap();
        assert!(h.best.fitness.fitness >= top.max(h.aggregate.fitness.fitness));
    }
}

#[test]
fn crowd_is_deterministic() {
    let cfg = CrowdConfig {
        master_seed: 99,
        ga: GaConfig {
            generations: 25,
            ..GaConfig::default()
        },
        ..CrowdConfig::default()
    };
    let a = run_crowd(&grid(8), &cfg).unwrap();
    let b = run_crowd(&grid(8), &cfg).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.best, b.best);
}

#[test]
fn benchmark_budgets_and_roundtrip() {
    let spec = BenchSpec {
        sizes: vec![4, 6],
        methods: Method::ALL.to_vec(),
        seeds: vec![0, 1],
        evaluation_budget: 6000,
        record_timing: false,
        ..BenchSpec::default()
    };
    let rows = run_benchmark(&spec).unwrap();
    assert_eq!(rows.len(), 16);
    let pop = spec.ga.population_size as u64;
    for n in [4, 6] {
        for seed in [0, 1] {
            let evals = |m: &str| {
                rows.iter()
                    .find(|r| r.n == n && r.seed == seed && r.method == m)
                    .unwrap()
                    .evaluations
            };
            assert_eq!(evals("ga"), 6000);
            assert!(evals("ga").abs_diff(evals("ga-woc")) <= pop);
        }
    }
    let csv = rows_to_csv(&rows).unwrap();
    assert_eq!(rows_from_csv(&csv).unwrap(), rows);
    assert_eq!(run_benchmark(&spec).unwrap(), rows);
}

fn matdom(args: &[&str], threads: &str) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_matdom"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .unwrap()
}

#[test]
fn cli_solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("m.txt");
    let cert = dir.path().join("c.txt");
    let (i, c) = (inst.to_str().unwrap(), cert.to_str().unwrap());
    assert!(matdom(
        &[
            "generate",
            "--n",
            "5",
            "--density",
            "0.7",
            "--seed",
            "3",
            "--out",
            i
        ],
        "1"
    )
    .status
    .success());
    for (method, model) in [
        ("greedy", "adjacency"),
        ("exact", "adjacency"),
        ("greedy", "line"),
        ("exact", "line"),
    ] {
        let out = matdom(
            &[
                "solve", "--in", i, "--method", method, "--model", model, "--out", c,
            ],
            "1",
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = matdom(&["verify", "--in", i, "--cert", c, "--model", model], "1");
        assert_eq!(
            v.status.code(),
            Some(0),
            "{method} {model}: {}",
            String::from_utf8_lossy(&v.stdout)
        );
    }

    std::fs::write(
        &inst,
        "6 6\n111111\n111111\n111111\n111111\n111111\n111111\n",
    )
    .unwrap();
    for method in ["ga", "ga-woc"] {
        let out = matdom(
            &[
                "solve",
                "--in",
                i,
                "--method",
                method,
                "--model",
                "line",
                "--generations",
                "20",
                "--out",
                c,
            ],
            "1",
        );
        assert!(out.status.success());
        let v = matdom(
            &[
                "verify", "--in", i, "--cert", c, "--model", "line", "--k", "6",
            ],
            "1",
        );
        assert_eq!(
            v.status.code(),
            Some(0),
            "{method}: {}",
            String::from_utf8_lossy(&v.stdout)
        );
    }
}

#[test]
fn cli_verify_rejects_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("m.txt");
    let cert = dir.path().join("c.txt");
    std::fs::write(&inst, "3 3\n111\n111\n111\n").unwrap();
    std::fs::write(&cert, "1 1\n").unwrap();
    let v = matdom(
        &[
            "verify",
            "--in",
            inst.to_str().unwrap(),
            "--cert",
            cert.to_str().unwrap(),
        ],
        "1",
    );
    assert_eq!(v.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&v.stdout).starts_with("rejected"));
}

#[test]
fn cli_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let cert = dir.path().join(format!("c{threads}.txt"));
        let hist = dir.path().join(format!("h{threads}.csv"));
        let out = matdom(
            &[
                "solve",
                "--n",
                "9",
                "--method",
                "ga-woc",
                "--generations",
                "30",
                "--seed",
                "8",
                "--out",
                cert.to_str().unwrap(),
                "--history",
                hist.to_str().unwrap(),
            ],
            threads,
        );
        assert!(out.status.success());
        outputs.push((std::fs::read(&cert).unwrap(), std::fs::read(&hist).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

//! Sweep plumbing: determinism, CSV round trips and noiseless recovery.

use kpartite::experiments::{
    read_summary, read_trials, run_trial, sweep, write_summary, write_trials, ExperimentConfig,
};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml_str(text).unwrap()
}

const VECTOR: &str = "model = \"vector-t\"\nn = 10\nk = 2\nseed = 5\ntrials = 40\n\
    [sigma]\nmode = \"relative\"\nlo = 0.25\nhi = 4.0\nsteps = 5\n";

#[test]
fn repeated_trial_is_identical() {
    let cfg = config(VECTOR);
    assert_eq!(run_trial(&cfg, 0.8, 3).unwrap(), run_trial(&cfg, 0.8, 3).unwrap());
}

#[test]
fn sweep_rows_follow_grid_and_counts() {
    let out = sweep(&config(VECTOR)).unwrap();
    assert_eq!(out.records.len(), 5 * 40);
    assert_eq!(out.summary.len(), 5);
    for w in out.summary.windows(2) {
        assert!(w[0].sigma < w[1].sigma);
    }
    for r in &out.records {
        assert!(out.plan.sigmas.contains(&r.sigma));
        assert_eq!(r.wall_ms, 0.0);
    }
    assert!(out.summary.iter().all(|r| r.trials == 40));
}

#[test]
fn csv_round_trip() {
    let out = sweep(&config(VECTOR)).unwrap();
    let mut buf = Vec::new();
    write_trials(&out.records, &mut buf).unwrap();
    assert_eq!(read_trials(buf.as_slice()).unwrap(), out.records);
    let mut buf = Vec::new();
    write_summary(&out.summary, &mut buf).unwrap();
    assert_eq!(read_summary(buf.as_slice()).unwrap(), out.summary);
}

#[test]
fn zero_grid_recovers_everywhere() {
    for (model, extra) in [
        ("vector-t", ""),
        ("partition-r", ""),
        ("gue-u", ""),
        ("conjugated-goe-v", "estimator = \"sdp\"\n"),
    ] {
        let cfg = config(&format!(
            "model = \"{model}\"\n{extra}n = 8\nk = 2\nseed = 1\ntrials = 10\n[sigma]\nvalues = [0.0]\n"
        ));
        let out = sweep(&cfg).unwrap();
        assert_eq!(out.summary[0].rate, 1.0, "{model}");
    }
}

#[test]
fn strong_noise_defeats_mle() {
    let cfg = config(
        "model = \"vector-t\"\nn = 12\nk = 2\nseed = 2\ntrials = 100\n[sigma]\nmode = \"relative\"\nvalues = [100.0]\n",
    );
    assert!(sweep(&cfg).unwrap().summary[0].rate < 0.5);
}

#[test]
fn timing_is_recorded_on_request() {
    let mut cfg = config(VECTOR);
    cfg.record_timing = true;
    cfg.trials = 2;
    assert!(sweep(&cfg).unwrap().records.iter().all(|r| r.wall_ms > 0.0));
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(ExperimentConfig::from_toml_str("model = \"vector-t\"\nn = 4\nk = 2\nbogus = 1\n").is_err());
    let bad = [
        "model = \"vector-t\"\nn = 4\nk = 2\ntrials = 0\n[sigma]\nvalues = [1.0]\n",
        "model = \"vector-t\"\nn = 4\nk = 2\n[sigma]\nvalues = [-1.0]\n",
        "model = \"vector-t\"\nn = 4\nk = 2\n[sigma]\nvalues = []\n",
        "model = \"vector-t\"\nestimator = \"sdp\"\nn = 4\nk = 2\n[sigma]\nvalues = [1.0]\n",
    ];
    for text in bad {
        assert!(config(text).plan().is_err(), "{text}");
    }
}

//! Acceptance criteria 1–9. Each test prints one `criterion N: PASS|FAIL`
//! line. Criteria that cannot hold with a faithful implementation report
//! FAIL and instead assert the behavior the analysis predicts.

mod common;

use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use common::*;
use kpartite::experiments::{sample_truth, sweep, write_sweep_files, ExperimentConfig};
use kpartite::linalg::symmetric_eigenvalues;
use kpartite::matrices::{build_p, observe, sample_goe, ModelKind};
use kpartite::model::{apply_cycle, distance_omega, find_cycle, is_valid_cycle, contingency, Assignment};
use kpartite::rng::{stream, trial_seed, Role};
use kpartite::sdp::{dual_certificate, max_abs_row_sum, solve_sdp, SdpParams};
use kpartite::statistics::{
    gaussian_max_bounds, gaussian_tail_bounds, phase_histogram_contingency, separation, threshold,
    FormulaId, Scorer, SeparationKind,
};

/// Criteria run one at a time so their wall-clock budgets are not shared.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(id: &str, pass: bool, detail: &str, known_gap: Option<&str>) {
    let word = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id}: {word} ({detail})");
    if !pass {
        match known_gap {
            Some(why) => println!("criterion {id}: expected failure: {why}"),
            None => panic!("criterion {id} failed: {detail}"),
        }
    }
}

fn config(toml: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml_str(toml).unwrap()
}

#[test]
fn criterion_1_closed_form_oracles() {
    let _serial = serial();
    let started = Instant::now();
    let palettes: [&[f64]; 2] = [&[0.0, 1.0, -1.5], &[0.5, 2.0, 3.25]];
    let mut pairs = 0u64;
    let mut bad: Vec<String> = Vec::new();
    let check = |bad: &mut Vec<String>, name: &str, got: f64, want: f64, x: &[usize], y: &[usize]| {
        if got != want && bad.len() < 10 {
            bad.push(format!("{name} x={x:?} y={y:?} got {got} want {want}"));
        }
    };

    for k in 2..=3 {
        for n in 2..=8 {
            let colorings = all_colorings(n, k);
            let sizes: Vec<Vec<usize>> = colorings.iter().map(|c| counts(c, k)).collect();
            let ks: Vec<Vec<f64>> = colorings.iter().map(|c| k_matrix(c)).collect();
            let k_norms: Vec<f64> = ks.iter().map(|m| dot(m, m)).collect();
            for (pi, pv) in palettes.iter().enumerate() {
                // The second palette only repeats the real-valued identities on smaller spaces.
                if pi == 1 && n > 6 {
                    continue;
                }
                let c = &pv[..k];
                let pal = real_palette(c);
                let asg: Vec<Assignment> = colorings.iter().map(|x| assignment(x, &pal)).collect();
                let gs: Vec<Vec<f64>> = colorings
                    .iter()
                    .map(|x| g_matrix(&x.iter().map(|&i| c[i]).collect::<Vec<_>>()))
                    .collect();
                let g_norms: Vec<f64> = gs.iter().map(|m| dot(m, m)).collect();
                // Colors scaled by 4 are integers, so the quadruple sum is exact in i64.
                let c4: Vec<i64> = c.iter().map(|v| (v * 4.0) as i64).collect();
                for a in 0..colorings.len() {
                    for b in 0..colorings.len() {
                        pairs += 1;
                        let (x, y) = (&colorings[a], &colorings[b]);
                        // Dyadic entries keep every norm expansion exact.
                        let gxy = dot(&gs[a], &gs[b]);
                        let kxy = dot(&ks[a], &ks[b]);
                        let kd = k_norms[a] + k_norms[b] - 2.0 * kxy;
                        let q = separation(&asg[a], &asg[b], SeparationKind::Q).unwrap().mean_gap;
                        check(&mut bad, "Q", q, g_norms[a] + g_norms[b] - 2.0 * gxy, x, y);
                        let l = separation(&asg[a], &asg[b], SeparationKind::L).unwrap().mean_gap;
                        check(&mut bad, "L", l, kd, x, y);

                        let mut t = [[0usize; 3]; 3];
                        for (&u, &v) in x.iter().zip(y.iter()) {
                            t[u][v] += 1;
                        }
                        let mut quad = 0i64;
                        let mut cross = 0.0;
                        let mut tsq = 0.0;
                        for i in 0..k {
                            for j in 0..k {
                                cross += t[i][j] as f64 * c[i] * c[j];
                                tsq += (t[i][j] * t[i][j]) as f64;
                                for u in 0..k {
                                    for v in 0..k {
                                        quad += (t[i][j] * t[u][v]) as i64 * (c4[i] - c4[u]) * (c4[j] - c4[v]);
                                    }
                                }
                            }
                        }
                        let quad = quad as f64 / 16.0;
                        check(&mut bad, "pgxy quadruple sum", quad, gxy, x, y);
                        let sx: f64 = (0..k).map(|i| sizes[a][i] as f64 * c[i]).sum();
                        let sy: f64 = (0..k).map(|i| sizes[b][i] as f64 * c[i]).sum();
                        check(&mut bad, "pgxy reduced", 2.0 * n as f64 * cross - 2.0 * sx * sy, gxy, x, y);
                        let sq = |s: &[usize]| s.iter().map(|&m| (m * m) as f64).sum::<f64>();
                        check(&mut bad, "kle", sq(&sizes[a]) + sq(&sizes[b]) - 2.0 * tsq, kd, x, y);

                        if sizes[a] == sizes[b] {
                            let m = separation(&asg[a], &asg[b], SeparationKind::M).unwrap().mean_gap;
                            check(&mut bad, "M", m, g_norms[b] - gxy, x, y);
                            let u = separation(&asg[a], &asg[b], SeparationKind::U).unwrap().mean_gap;
                            check(&mut bad, "U", u, k_norms[b] - kxy, x, y);
                        }
                    }
                }
            }

            let roots = roots_palette(k);
            let asg: Vec<Assignment> = colorings.iter().map(|x| assignment(x, &roots)).collect();
            let ps: Vec<(Vec<f64>, Vec<f64>)> = colorings.iter().map(|x| p_matrix(x, k)).collect();
            let n2 = (n * n) as f64;
            let mod_k: Vec<usize> = (0..4 * k).map(|m| m % k).collect();
            for a in 0..colorings.len() {
                for b in 0..colorings.len() {
                    pairs += 1;
                    let (x, y) = (&colorings[a], &colorings[b]);
                    // x(v) − x(u) + y(u) − y(v) + 2k = dv − du + 2k with d = x − y + k.
                    let mut d = [0usize; 8];
                    for v in 0..n {
                        d[v] = x[v] + k - y[v];
                    }
                    let d = &d[..n];
                    let mut lanes = [[0u64; 3]; 4];
                    for &du in d {
                        for (v, &dv) in d.iter().enumerate() {
                            lanes[v & 3][mod_k[dv + 2 * k - du]] += 1;
                        }
                    }
                    let mut hist = [0u64; 3];
                    for (m, h) in hist.iter_mut().enumerate().take(k) {
                        *h = lanes.iter().map(|l| l[m]).sum();
                    }
                    let hist = &hist[..k];
                    let lib = phase_histogram_contingency(&asg[a], &asg[b]).unwrap();
                    if lib[..] != *hist && bad.len() < 10 {
                        bad.push(format!("J histogram x={x:?} y={y:?}: {lib:?} vs {hist:?}"));
                    }
                    let re = dot(&ps[b].0, &ps[a].0) + dot(&ps[b].1, &ps[a].1);
                    let j = separation(&asg[a], &asg[b], SeparationKind::J).unwrap().mean_gap;
                    if (j - (n2 - re)).abs() > 1e-12 * n2 && bad.len() < 10 {
                        bad.push(format!("J x={x:?} y={y:?}: {j} vs {}", n2 - re));
                    }
                }
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    verdict(
        "1",
        bad.is_empty() && secs < 60.0,
        &format!("{pairs} ordered pairs, {} mismatches, {secs:.1}s; first: {:?}", bad.len(), bad.first()),
        None,
    );
}

struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn new() -> Self {
        Welford { n: 0.0, mean: 0.0, m2: 0.0 }
    }

    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn var(&self) -> f64 {
        self.m2 / (self.n - 1.0)
    }
}

/// `m` vertices of `y` recolored: with `keep_sizes` their colors are rotated
/// among themselves, otherwise each gets a different random color.
fn perturb(y: &[usize], k: usize, m: usize, keep_sizes: bool, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = y.len();
    let mut x = y.to_vec();
    if keep_sizes {
        loop {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let idx = &idx[..m];
            let vals: Vec<usize> = idx.iter().map(|&i| y[i]).collect();
            for (s, &i) in idx.iter().enumerate() {
                x[i] = vals[(s + 1) % m];
            }
            if x != y {
                return x;
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    for &i in &idx[..m] {
        x[i] = (y[i] + rng.random_range(1..k)) % k;
    }
    x
}

#[test]
fn criterion_2_gaussian_score_gaps() {
    let _serial = serial();
    let n = 50;
    let k = 3;
    let draws = 10_000;
    let sigma = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut y: Vec<usize> = (0..n).map(|i| i % k).collect();
    y.shuffle(&mut rng);

    let cases = [
        (ModelKind::VectorT, vec![SeparationKind::M, SeparationKind::Q]),
        (ModelKind::PartitionR, vec![SeparationKind::L, SeparationKind::U]),
        (ModelKind::GueU, vec![SeparationKind::J]),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (model, kinds) in cases {
        let palette = if model.is_hermitian() { roots_palette(k) } else { real_palette(&[0.0, 1.0, 2.0]) };
        let truth = assignment(&y, &palette);
        let mut setups = Vec::new();
        for &kind in &kinds {
            let keep = matches!(kind, SeparationKind::M | SeparationKind::U);
            for m in [2, 4, 8, 16, 32] {
                let x = assignment(&perturb(&y, k, m, keep, &mut rng), &palette);
                let gap = separation(&x, &truth, kind).unwrap();
                setups.push((kind, x, gap, Welford::new()));
            }
        }
        let mut noise = ChaCha8Rng::seed_from_u64(20 + model as u64);
        for _ in 0..draws {
            let obs = observe(&truth, model, sigma, &mut noise).unwrap();
            for &kind in &kinds {
                let scorer = Scorer::new(&obs, kind.score_kind(), &palette).unwrap();
                let o = kind.score_kind().orientation();
                let sy = o.orient(scorer.eval(truth.colors()));
                for (kk, x, _, acc) in setups.iter_mut() {
                    if *kk == kind {
                        acc.push(sy - o.orient(scorer.eval(x.colors())));
                    }
                }
            }
        }
        for (kind, _, gap, acc) in &setups {
            let se = (acc.var() / acc.n).sqrt();
            let want_var = gap.variance_coeff * sigma * sigma * gap.mean_gap;
            let mean_ok = (acc.mean - gap.mean_gap).abs() <= 3.0 * se;
            let var_ok = (acc.var() - want_var).abs() <= 0.05 * want_var;
            ok &= mean_ok && var_ok;
            lines.push(format!(
                "{model} {kind:?}: mean {:.2} vs {:.2} (se {:.2}), var {:.1} vs {:.1}",
                acc.mean,
                gap.mean_gap,
                se,
                acc.var(),
                want_var
            ));
        }
    }
    for l in &lines {
        println!("  {l}");
    }
    verdict("2", ok, &format!("{} pairs over 3 models, {draws} draws each", lines.len()), None);
}

#[test]
fn criterion_3_noiseless_recovery() {
    let _serial = serial();
    let mle_cases = [
        ("vector-t", "fixed-counts", 12, 2, ""),
        ("vector-t", "fixed-counts", 12, 2, "truth_sizes = [8, 4]"),
        ("vector-t", "fixed-counts", 9, 3, ""),
        ("vector-t", "omega", 12, 2, ""),
        ("vector-t", "omega", 9, 3, ""),
        ("partition-r", "omega", 12, 2, ""),
        ("partition-r", "omega", 9, 3, "truth_sizes = [4, 3, 2]"),
        ("partition-r", "fixed-counts", 12, 2, "truth_sizes = [7, 5]"),
        ("partition-r", "fixed-counts", 9, 3, ""),
        ("gue-u", "theta-a", 12, 2, ""),
        ("gue-u", "theta-a", 9, 3, ""),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (model, space, n, k, extra) in mle_cases {
        let cfg = config(&format!(
            "model = \"{model}\"\nn = {n}\nk = {k}\nseed = 3\ntrials = 100\n\
             [space]\nestimator_space = \"{space}\"\n{extra}\n\
             [sigma]\nmode = \"absolute\"\nvalues = [0.0]\n"
        ));
        let rate = sweep(&cfg).unwrap().summary[0].rate;
        ok &= rate == 1.0;
        lines.push(format!("mle {model}/{space} n={n} k={k} {extra}: {rate}"));
    }
    for (n, k) in [(16, 4), (48, 3), (64, 4), (128, 4)] {
        let cfg = config(&format!(
            "model = \"conjugated-goe-v\"\nestimator = \"sdp\"\nn = {n}\nk = {k}\nseed = 3\ntrials = 100\n\
             [sigma]\nmode = \"absolute\"\nvalues = [0.0]\n"
        ));
        let rate = sweep(&cfg).unwrap().summary[0].rate;
        ok &= rate == 1.0;
        lines.push(format!("sdp n={n} k={k}: {rate}"));
    }
    for l in &lines {
        println!("  {l}");
    }
    verdict("3", ok, &format!("{} settings x 100 trials at sigma=0", lines.len()), None);
}

#[test]
fn criterion_4_phase_transition() {
    let _serial = serial();
    let cases = [
        ("vector-t", "fixed-counts"),
        ("vector-t", "omega"),
        ("partition-r", "omega"),
        ("partition-r", "fixed-counts"),
        ("gue-u", "theta-a"),
    ];
    let mut ok = true;
    for (model, space) in cases {
        let cfg = config(&format!(
            "model = \"{model}\"\nn = 12\nk = 2\nseed = 4\ntrials = 200\n\
             [space]\nestimator_space = \"{space}\"\n\
             [sigma]\nmode = \"relative\"\nlo = 0.25\nhi = 4.0\nsteps = 7\n"
        ));
        let out = sweep(&cfg).unwrap();
        let rates: Vec<f64> = out.summary.iter().map(|r| r.rate).collect();
        let monotone = rates.windows(2).all(|w| w[1] <= w[0] + 0.05);
        let pass = rates[0] >= 0.9 && rates[6] <= 0.5 && monotone;
        ok &= pass;
        println!("  {model}/{space} ({}): {rates:?}", out.plan.threshold.formula_id);
    }
    verdict("4", ok, "n=12, k=2, 200 trials on 7 points over [0.25, 4] x critical sigma^2", None);
}

#[test]
fn criterion_5_sdp_band() {
    let _serial = serial();
    let started = Instant::now();
    let n = 256;
    let k = 4;
    let unit = (n as f64).sqrt() / (2.0 * (n as f64).ln()).sqrt();
    let cfg = config(&format!(
        "model = \"conjugated-goe-v\"\nestimator = \"sdp\"\nn = {n}\nk = {k}\nseed = 5\ntrials = 40\n\
         [sigma]\nmode = \"absolute\"\nvalues = [1.0]\n"
    ));
    let plan = cfg.plan().unwrap();
    let params = SdpParams::default();
    let trials = 40;

    let mut good = 0;
    for t in 0..trials {
        let seed = trial_seed(cfg.seed, t);
        let truth = sample_truth(&plan, seed).unwrap();
        let obs = observe(&truth, plan.config.model, 0.5 * unit, &mut stream(seed, Role::Noise)).unwrap();
        let v = obs.hermitian().unwrap();
        let cert = dual_certificate(v, &truth).unwrap();
        let sol = solve_sdp(v, &params).unwrap();
        let dist = sol.x.sub(&build_p(&truth).unwrap()).frobenius_norm();
        if cert.certified && dist <= 1e-4 * n as f64 {
            good += 1;
        }
    }
    let mut cert_hi = 0;
    for t in 0..trials {
        let seed = trial_seed(cfg.seed + 1, t);
        let truth = sample_truth(&plan, seed).unwrap();
        let obs = observe(&truth, plan.config.model, 3.0 * unit, &mut stream(seed, Role::Noise)).unwrap();
        if dual_certificate(obs.hermitian().unwrap(), &truth).unwrap().certified {
            cert_hi += 1;
        }
    }
    let low_rate = good as f64 / trials as f64;
    let high_rate = cert_hi as f64 / trials as f64;
    let secs = started.elapsed().as_secs_f64();
    verdict(
        "5",
        low_rate >= 0.9 && high_rate <= 0.5 && secs < 600.0,
        &format!("0.5x: certified and X within 1e-4 n in {low_rate}; 3x: certified in {high_rate}; {secs:.0}s"),
        None,
    );
}

#[test]
fn criterion_6_spectral_statistics() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 400;
    let trials = 50;
    let mut sum = 0.0;
    for _ in 0..trials {
        let w = sample_goe(n, &mut rng);
        sum += *symmetric_eigenvalues(&w).unwrap().last().unwrap();
    }
    let mean = sum / trials as f64;
    let target = (2.0 * n as f64).sqrt();
    let pass_a = (mean / target - 1.0).abs() <= 0.05;
    // Standard-normal off-diagonal entries put the spectral edge at 2√n.
    let edge = 2.0 * (n as f64).sqrt();
    assert!((mean / edge - 1.0).abs() <= 0.05, "mean top eigenvalue {mean} vs 2 sqrt(n) = {edge}");
    verdict(
        "6a",
        pass_a,
        &format!("mean lambda_max {mean:.2}, sqrt(2n) = {target:.2}, 2 sqrt(n) = {edge:.2}"),
        Some("entries are standard normal, so lambda_max ~ 2 sqrt(n) = sqrt(2) sqrt(2n)"),
    );

    let n = 2000;
    let trials = 30;
    let scale = (2.0 * n as f64 * (n as f64).ln()).sqrt();
    let mut inside = 0;
    let mut ratios = Vec::new();
    for _ in 0..trials {
        let r = max_abs_row_sum(&sample_goe(n, &mut rng)) / scale;
        ratios.push(r);
        if (0.9..=1.15).contains(&r) {
            inside += 1;
        }
    }
    let frac = inside as f64 / trials as f64;
    let mean_ratio = ratios.iter().sum::<f64>() / trials as f64;
    // Gumbel mean for the largest of 2n half-normal magnitudes: a − (ln ln m + ln 4π)/(2a) + γ/a.
    let m = 2.0 * n as f64;
    let a = (2.0 * m.ln()).sqrt();
    let gumbel = a - (m.ln().ln() + (4.0 * std::f64::consts::PI).ln()) / (2.0 * a) + 0.5772156649 / a;
    let predicted = gumbel / (2.0 * (n as f64).ln()).sqrt();
    assert!((mean_ratio - predicted).abs() <= 0.05, "mean ratio {mean_ratio} vs {predicted}: {ratios:?}");
    verdict(
        "6b",
        frac >= 0.8,
        &format!("{inside}/{trials} in [0.9, 1.15] sqrt(2n ln n), mean ratio {mean_ratio:.3}"),
        Some("the maximum of 2000 |N(0, n)| sits about 7% below sqrt(2n ln n), so the 0.9 floor is crossed in a large share of trials"),
    );
}

fn simpson_tail(x: f64) -> f64 {
    let hi = x + 14.0;
    let steps = 40_000;
    let h = (hi - x) / steps as f64;
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = phi(x) + phi(hi);
    for i in 1..steps {
        s += phi(x + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn criterion_7_tail_bounds() {
    let _serial = serial();
    let mut ok = true;
    for x in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let tail = simpson_tail(x);
        let (lo, hi) = gaussian_tail_bounds(x).unwrap();
        let dens = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let formula_ok = (lo - x * dens / (1.0 + x * x)).abs() <= 1e-15 && (hi - dens / x).abs() <= 1e-15;
        ok &= formula_ok && lo <= tail && tail <= hi;
        println!("  x={x}: {lo:.6e} <= {tail:.6e} <= {hi:.6e}");
    }

    let big_n = 1000u64;
    let eps = 0.2;
    let bounds = gaussian_max_bounds(big_n, eps).unwrap();
    let level = (1.0 + eps) * (2.0 * (big_n as f64).ln()).sqrt();
    ok &= (bounds.level_hi - level).abs() < 1e-12;
    let trials = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut exceed = 0;
    for _ in 0..trials {
        let m = (0..big_n).map(|_| rng.sample::<f64, _>(StandardNormal)).fold(f64::MIN, f64::max);
        if m >= level {
            exceed += 1;
        }
    }
    let observed = exceed as f64 / trials as f64;
    let allowed = (big_n as f64).powf(-eps) + 0.05;
    ok &= observed <= allowed;
    verdict("7", ok, &format!("tail sandwich at 5 points; max exceedance {observed} <= {allowed:.4}"), None);
}

#[test]
fn criterion_8_cycles() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    let mut problems = Vec::new();
    let mut longest = 0;
    while pairs < 1000 {
        let k = rng.random_range(2..=5);
        let n = rng.random_range(k..=30);
        let palette = real_palette(&(0..k).map(|c| c as f64).collect::<Vec<_>>());
        let mut xc: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        xc.shuffle(&mut rng);
        let mut yc = xc.clone();
        yc.shuffle(&mut rng);
        if xc == yc {
            continue;
        }
        pairs += 1;
        let x = assignment(&xc, &palette);
        let mut y = assignment(&yc, &palette);
        let mut steps = 0;
        while y.colors() != x.colors() {
            let cyc = find_cycle(&x, &y).unwrap();
            let l = cyc.len();
            longest = longest.max(l);
            let cols = cyc.colors();
            let distinct = {
                let mut s = cols.to_vec();
                s.sort();
                s.dedup();
                s.len() == l
            };
            let reps_ok = (0..l).all(|s| {
                let u = cyc.representatives()[s];
                x.colors()[u] == cols[s] && y.colors()[u] == cols[(s + 1) % l]
            });
            let t = contingency(&x, &y).unwrap();
            if !(2..=k).contains(&l) || !distinct || !reps_ok || !is_valid_cycle(&t, cols) {
                problems.push(format!("bad cycle {cols:?} for x={xc:?}"));
                break;
            }
            let before: usize = x.colors().iter().zip(y.colors()).filter(|(a, b)| a != b).count();
            let next = apply_cycle(&y, &cyc).unwrap();
            let after: usize = x.colors().iter().zip(next.colors()).filter(|(a, b)| a != b).count();
            if before - after != l || distance_omega(&x, &y).unwrap() - distance_omega(&x, &next).unwrap() != l {
                problems.push(format!("distance drop {} != {l}", before - after));
                break;
            }
            y = next;
            steps += 1;
        }
        if steps > n / 2 {
            problems.push(format!("{steps} steps for n={n}"));
        }
    }
    verdict(
        "8",
        problems.is_empty(),
        &format!("{pairs} pairs, longest cycle {longest}, problems {:?}", problems.first()),
        None,
    );
}

#[test]
fn criterion_9_determinism() {
    let _serial = serial();
    let configs = [
        "model = \"vector-t\"\nn = 10\nk = 2\nseed = 9\ntrials = 30\n[sigma]\nlo = 0.25\nhi = 4.0\nsteps = 5\n",
        "model = \"gue-u\"\nn = 9\nk = 3\nseed = 9\ntrials = 20\n[sigma]\nlo = 0.5\nhi = 2.0\nsteps = 3\nspacing = \"linear\"\n",
        "model = \"conjugated-goe-v\"\nestimator = \"sdp\"\nn = 16\nk = 4\nseed = 9\ntrials = 8\n\
         [sigma]\nvalues = [0.25, 1.0, 3.0]\n[solver]\nmax_iters = 300\n",
    ];
    let mut ok = true;
    for text in configs {
        let mut files: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
        for threads in [1, 4, 8] {
            let mut cfg = config(text);
            cfg.threads = threads;
            let out = sweep(&cfg).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let (t, s) = write_sweep_files(dir.path(), &out.records, &out.summary).unwrap();
            files.push((std::fs::read(t).unwrap(), std::fs::read(s).unwrap()));
        }
        ok &= files.windows(2).all(|w| w[0] == w[1]);
    }

    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("sweep.toml");
    std::fs::write(&cfg_path, configs[0]).unwrap();
    let mut cli_files = Vec::new();
    for threads in ["1", "4", "8"] {
        let out_dir = dir.path().join(format!("t{threads}"));
        let status = Command::new(env!("CARGO_BIN_EXE_kpartite"))
            .args(["sweep", "--config"])
            .arg(&cfg_path)
            .args(["--threads", threads, "--output"])
            .arg(&out_dir)
            .env_remove("KPARTITE_OUTPUT")
            .env_remove("KPARTITE_THREADS")
            .output()
            .unwrap();
        ok &= status.status.success();
        cli_files.push((
            std::fs::read(out_dir.join("trials.csv")).unwrap(),
            std::fs::read(out_dir.join("summary.csv")).unwrap(),
        ));
    }
    ok &= cli_files.windows(2).all(|w| w[0] == w[1]);
    verdict("9", ok, "3 library sweeps and 1 CLI sweep at 1, 4 and 8 threads", None);
}

#[test]
fn thm1_threshold_at_n_100() {
    let pal = real_palette(&[0.0, 1.0]);
    let r = threshold(FormulaId::Thm1, 100, &pal, None).unwrap();
    assert!((r.sigma_sq_critical - 100.0 / (4.0 * 100f64.ln())).abs() < 1e-12);
}

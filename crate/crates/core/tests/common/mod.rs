//! Test-side oracles built directly from the matrix definitions, sharing no
//! code with the library's closed forms.
#![allow(dead_code)]

use std::sync::Arc;

use kpartite::model::{Assignment, Palette};

/// `G(x)[a][b] = x_a − x_b`, row-major.
pub fn g_matrix(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut m = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            m.push(values[a] - values[b]);
        }
    }
    m
}

/// `K(x)[a][b] = 1` when `a` and `b` have different colors.
pub fn k_matrix(colors: &[usize]) -> Vec<f64> {
    let n = colors.len();
    let mut m = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            m.push(if colors[a] != colors[b] { 1.0 } else { 0.0 });
        }
    }
    m
}

/// `P(x)[a][b] = ω^{x_a − x_b}` as (re, im) planes, `ω = e^{2πi/k}`.
pub fn p_matrix(colors: &[usize], k: usize) -> (Vec<f64>, Vec<f64>) {
    let n = colors.len();
    let mut re = Vec::with_capacity(n * n);
    let mut im = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let theta = 2.0 * std::f64::consts::PI * (colors[a] as f64 - colors[b] as f64) / k as f64;
            re.push(theta.cos());
            im.push(theta.sin());
        }
    }
    (re, im)
}

/// Eight interleaved partial sums; exact whenever every partial sum is.
fn lanes(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut acc = [0.0; 8];
    let split = a.len() / 8 * 8;
    for (ca, cb) in a[..split].chunks_exact(8).zip(b[..split].chunks_exact(8)) {
        for i in 0..8 {
            acc[i] += f(ca[i], cb[i]);
        }
    }
    for (x, y) in a[split..].iter().zip(&b[split..]) {
        acc[0] += f(*x, *y);
    }
    acc.iter().sum()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    lanes(a, b, |x, y| x * y)
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    lanes(a, b, |x, y| (x - y) * (x - y))
}

/// Every color vector in `[k]^n`, lexicographic.
pub fn all_colorings(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(k.pow(n as u32));
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < k {
                break;
            }
            cur[i] = 0;
        }
    }
}

pub fn counts(colors: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &x in colors {
        c[x] += 1;
    }
    c
}

/// Contingency table counted vertex by vertex.
pub fn table(x: &[usize], y: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0; k]; k];
    for (&a, &b) in x.iter().zip(y) {
        t[a][b] += 1;
    }
    t
}

pub fn real_palette(values: &[f64]) -> Arc<Palette> {
    Arc::new(Palette::real(values.to_vec()).unwrap())
}

pub fn roots_palette(k: usize) -> Arc<Palette> {
    Arc::new(Palette::roots(k).unwrap())
}

pub fn assignment(colors: &[usize], palette: &Arc<Palette>) -> Assignment {
    Assignment::new(colors.to_vec(), palette.clone()).unwrap()
}

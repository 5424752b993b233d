//! Closed-form separation statistics for one pair of assignments, next to
//! the same numbers computed from the model matrices.

use std::sync::Arc;

use kpartite::matrices::{build_g, build_k, build_p};
use kpartite::model::{contingency, Assignment, Palette};
use kpartite::statistics::{separation, SeparationKind};

fn main() -> kpartite::Result<()> {
    let real = Arc::new(Palette::real(vec![0.0, 1.0, 3.0])?);
    let roots = Arc::new(Palette::roots(3)?);
    let y = [0, 0, 1, 1, 2, 2, 0, 1, 2];
    let x = [0, 1, 1, 0, 2, 2, 0, 2, 1];

    let (xr, yr) = (Assignment::new(x.to_vec(), real.clone())?, Assignment::new(y.to_vec(), real)?);
    println!("x = {xr}\ny = {yr}");
    let t = contingency(&xr, &yr)?;
    println!("contingency table:");
    for i in 0..t.k() {
        println!("  {:?}", (0..t.k()).map(|j| t.get(i, j)).collect::<Vec<_>>());
    }

    let (gx, gy) = (build_g(&xr)?, build_g(&yr)?);
    let (kx, ky) = (build_k(&xr), build_k(&yr));
    let dg = gx.sub(&gy);
    let dk = kx.sub(&ky);
    let rows = [
        (SeparationKind::M, -gy.inner(&dg)),
        (SeparationKind::Q, dg.inner(&dg)),
        (SeparationKind::L, dk.inner(&dk)),
        (SeparationKind::U, ky.inner(&ky.sub(&kx))),
    ];
    println!("{:>4} {:>12} {:>12} {:>6}", "stat", "closed form", "matrices", "var/σ²");
    for (kind, direct) in rows {
        let s = separation(&xr, &yr, kind)?;
        println!("{:>4} {:>12.4} {:>12.4} {:>6}", format!("{kind:?}"), s.mean_gap, direct, s.variance_coeff * s.mean_gap);
    }

    let (xu, yu) = (Assignment::new(x.to_vec(), roots.clone())?, Assignment::new(y.to_vec(), roots)?);
    let j = separation(&xu, &yu, SeparationKind::J)?;
    let n2 = (x.len() * x.len()) as f64;
    let direct = n2 - build_p(&yu)?.inner_re(&build_p(&xu)?);
    println!("{:>4} {:>12.4} {:>12.4} {:>6.3}", "J", j.mean_gap, direct, j.variance_coeff * j.mean_gap);
    Ok(())
}

//! Walks an assignment back to a target by repeated color cycles; each step
//! shrinks the Hamming distance by the cycle length.

use std::sync::Arc;

use kpartite::model::{apply_cycle, distance_omega, find_cycle, Assignment, Palette};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kpartite::Result<()> {
    let k = 4;
    let palette = Arc::new(Palette::real((0..k).map(|c| c as f64).collect())?);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let colors: Vec<usize> = (0..20).map(|i| i % k).collect();
    let mut shuffled = colors.clone();
    shuffled.shuffle(&mut rng);

    let x = Assignment::new(colors, palette.clone())?;
    let mut y = Assignment::new(shuffled, palette)?;
    println!("x = {x}\ny = {y}");
    let mut step = 0;
    while distance_omega(&x, &y)? > 0 {
        let c = find_cycle(&x, &y)?;
        let before = distance_omega(&x, &y)?;
        y = apply_cycle(&y, &c)?;
        step += 1;
        println!(
            "step {step}: cycle {:?} via vertices {:?}, distance {before} -> {}",
            c.colors(),
            c.representatives(),
            distance_omega(&x, &y)?
        );
    }
    println!("reached x in {step} steps (bound {})", x.n() / 2);
    Ok(())
}

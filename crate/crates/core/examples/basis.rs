//! Basis construction on a sampled function space closed under `abs`:
//! `χ_j > 0` exactly on `X_j`, the `X_j` disjoint, `χ_j(x_i) = δ_ij`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ecs_lab::symmetry::{basis_construct, random_closed_space, GeometricMean};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let space = random_closed_space(&mut rng, 3, 8);
    println!("space of dimension {} on {} points", space.dim(), space.labels.len());
    let b = basis_construct(&space, &GeometricMean)?;
    println!("points x_i: {:?}", b.points);
    println!("X_0 (all vanish): {:?}", b.x0);
    for (j, (chi, part)) in b.basis.iter().zip(&b.partition).enumerate() {
        let values: Vec<String> = chi.iter().map(|v| v.to_string()).collect();
        println!("χ_{} > 0 on {:?}: [{}]", j + 1, part, values.join(", "));
    }
    println!("χ_j(x_i) = δ_ij: {}", b.evaluation_is_identity);
    Ok(())
}

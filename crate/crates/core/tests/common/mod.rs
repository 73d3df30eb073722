#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use signstab::{MutationPath, PathStep, Permutation, Seed};

/// Random skew-symmetric seed of size `n` with entries in `[-max, max]`.
pub fn random_seed<R: Rng>(rng: &mut R, n: usize, max: i64, unfrozen: Vec<usize>) -> Seed {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-max..=max);
            rows[i][j] = v;
            rows[j][i] = -v;
        }
    }
    Seed::from_i64(&rows, unfrozen).unwrap()
}

pub fn random_full_seed<R: Rng>(rng: &mut R, n: usize, max: i64) -> Seed {
    random_seed(rng, n, max, (0..n).collect())
}

/// Random path of `len` steps; with probability `perm_rate` a step is a
/// random permutation of the unfrozen indices.
pub fn random_path<R: Rng>(rng: &mut R, seed: Seed, len: usize, perm_rate: f64) -> MutationPath {
    let uf = seed.unfrozen().to_vec();
    let n = seed.n();
    let steps = (0..len)
        .map(|_| {
            if rng.gen_bool(perm_rate) {
                let mut shuffled = uf.clone();
                shuffled.shuffle(rng);
                let mut images: Vec<usize> = (0..n).collect();
                for (a, b) in uf.iter().zip(&shuffled) {
                    images[*a] = *b;
                }
                PathStep::Permute(Permutation::new(images).unwrap())
            } else {
                PathStep::Flip(*uf.choose(rng).unwrap())
            }
        })
        .collect();
    MutationPath::new(seed, steps).unwrap()
}

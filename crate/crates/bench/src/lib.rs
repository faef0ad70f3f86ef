//! Seeded fixtures shared by the benchmarks.

use quadgrad_core::{DenseMatrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with entries uniform in [-1, 1].
pub fn random_symmetric(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..1.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let data = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseMatrix::new(n, data).expect("square data")
}

/// Nonzero entries bounded away from zero, so the fast path of the new
/// accelerator is taken.
pub fn random_gradient(n: usize, rng: &mut impl Rng) -> Vector {
    (0..n)
        .map(|_| {
            let m: f64 = rng.gen_range(0.1..2.0);
            if rng.gen() {
                m
            } else {
                -m
            }
        })
        .collect::<Vec<_>>()
        .into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_seeded() {
        let a = random_symmetric(6, &mut rng(3));
        let b = random_symmetric(6, &mut rng(3));
        assert_eq!(a, b);
        assert!(a.is_symmetric(0.0));
        assert_eq!(random_gradient(4, &mut rng(1)).dim(), 4);
    }
}

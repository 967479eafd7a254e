//! Seeded uniform sampling on the unit ball and unit sphere.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn unit_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Exact uniform sample from the unit ball: a standard-normal direction
/// scaled by U^(1/dim) with U uniform on (0, 1). Deterministic per seed.
pub fn sample_uniform_ball(dim: usize, seed: u64) -> Vec<f64> {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = unit_direction(&mut rng, dim);
    let u: f64 = rng.gen_range(0.0..1.0);
    let r = u.powf(1.0 / dim as f64);
    for x in v.iter_mut() {
        *x *= r;
    }
    v
}

/// Uniform sample from the unit sphere (normalized Gaussian). Deterministic per seed.
pub fn sample_uniform_sphere(dim: usize, seed: u64) -> Vec<f64> {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    unit_direction(&mut rng, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_samples_are_feasible() {
        for seed in 0..50 {
            let z = sample_uniform_ball(4, seed);
            let n = z.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(n <= 1.0 + 1e-15, "seed {seed}: norm {n}");
        }
    }

    #[test]
    fn sphere_samples_are_unit() {
        for seed in 0..50 {
            let z = sample_uniform_sphere(6, seed);
            let n = z.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-14, "seed {seed}: norm {n}");
        }
    }

    #[test]
    fn fixed_seed_reproduces() {
        assert_eq!(sample_uniform_ball(5, 42), sample_uniform_ball(5, 42));
        assert_eq!(sample_uniform_sphere(5, 42), sample_uniform_sphere(5, 42));
    }

    #[test]
    fn radial_cdf_matches_r_squared_in_2d() {
        // P(||z|| <= r) = r^2 in dimension 2.
        let m = 100_000;
        let mut radii: Vec<f64> = (0..m)
            .map(|s| {
                let z = sample_uniform_ball(2, s as u64);
                z.iter().map(|x| x * x).sum::<f64>().sqrt()
            })
            .collect();
        radii.sort_by(f64::total_cmp);
        let mut sup = 0.0f64;
        for k in 1..20 {
            let r = k as f64 * 0.05;
            let count = radii.partition_point(|&x| x <= r);
            let emp = count as f64 / m as f64;
            sup = sup.max((emp - r * r).abs());
        }
        assert!(sup <= 0.01, "sup deviation {sup}");
    }
}

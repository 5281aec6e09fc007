use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Objective;
use crate::error::{Error, Result};

const FULL_CHECK_LIMIT: usize = 100;
const SAMPLED_COORDINATES: usize = 20;

/// Compares the analytic gradient at `x` against central differences with
/// step `h`. Returns `max_i |g_i - g_fd_i| / (1 + |g_i|)`.
///
/// Above dimension 100 only 20 coordinates, chosen by `seed`, are probed.
pub fn finite_diff_check<F: Objective<f64> + ?Sized>(f: &mut F, x: &[f64], h: f64, seed: u64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("h must be positive".into()));
    }
    let n = x.len();
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: n,
        });
    }
    let mut g = vec![0.0; n];
    f.gradient(x, &mut g);

    let coords: Vec<usize> = if n > FULL_CHECK_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample(&mut rng, n, SAMPLED_COORDINATES).into_vec()
    } else {
        (0..n).collect()
    };

    let mut probe = x.to_vec();
    let mut worst: f64 = 0.0;
    for i in coords {
        probe[i] = x[i] + h;
        let up = f.value(&probe);
        probe[i] = x[i] - h;
        let down = f.value(&probe);
        probe[i] = x[i];
        let estimate = (up - down) / (2.0 * h);
        worst = worst.max((g[i] - estimate).abs() / (1.0 + g[i].abs()));
    }
    Ok(worst)
}
